//! Seeded simulation of random disaster lines conditioned on meeting the
//! area of interest.
//!
//! Sample `k` is drawn from its own ChaCha8 stream (`seed`, stream `k`), so
//! every estimate is a pure function of `(scenario, n, seed)` and is
//! bit-identical for any number of worker threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::measure_lines_meeting;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ConvexRegion, DirectedLine, Geom, Point2, Side, EPS};
use crate::network::{Network, Scenario};

/// Samples per parallel work unit.
const BLOCK: u64 = 4096;

/// Deliberate sampler distortions, used only as negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplerBias {
    #[default]
    None,
    /// Squares the uniform radial draw, crowding lines toward the origin.
    CrowdCenter,
}

#[derive(Debug, Clone)]
pub struct LineSampler {
    omega: ConvexRegion,
    h_max: f64,
    seed: u64,
    bias: SamplerBias,
}

impl LineSampler {
    /// `omega` must contain the frame origin in its interior.
    pub fn new(omega: &ConvexRegion, seed: u64) -> Result<Self> {
        if !omega.origin_is_interior() {
            return Err(Error::validation(
                "the frame origin must lie inside the area of interest",
            ));
        }
        let h_max = omega.max_support();
        Ok(LineSampler {
            omega: omega.clone(),
            h_max,
            seed,
            bias: SamplerBias::None,
        })
    }

    pub fn with_bias(mut self, bias: SamplerBias) -> Self {
        self.bias = bias;
        self
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The `k`-th line of this sampler's sequence.
    pub fn sample(&self, k: u64) -> DirectedLine {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k);
        rng.set_word_pos(0);
        loop {
            let theta = rng.random_range(-PI..PI);
            let u: f64 = rng.random();
            let u = match self.bias {
                SamplerBias::None => u,
                SamplerBias::CrowdCenter => u * u,
            };
            let rho = u * self.h_max;
            if rho <= self.omega.support_unchecked(Point2::polar(theta)) {
                let side = if rng.random::<bool>() {
                    Side::Far
                } else {
                    Side::Near
                };
                return DirectedLine::new(rho, theta, side);
            }
        }
    }
}

/// Draws line `k` from `sampler`.
pub fn sample_disaster(sampler: &LineSampler, k: u64) -> DirectedLine {
    sampler.sample(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub n: u64,
    pub seed: u64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_count(hits: u64, n: u64, seed: u64) -> Self {
        let p_hat = hits as f64 / n as f64;
        Estimate {
            p_hat,
            n,
            seed,
            stderr: binomial_stderr(p_hat, n),
        }
    }
}

pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Sums `f(k)` over `k in 0..n` in parallel blocks; `init` builds the
/// per-block scratch state.
fn parallel_count<S, I, F>(n: u64, init: I, f: F) -> u64
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64) -> u64 + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut state = init();
            let end = ((b + 1) * BLOCK).min(n);
            (b * BLOCK..end).map(|k| f(&mut state, k)).sum::<u64>()
        })
        .sum()
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::validation("sample count must be at least 1"));
    }
    Ok(())
}

/// Fraction of `n` sampled disasters that disconnect s from t.
pub fn estimate_disconnect(scenario: &Scenario, n: u64, seed: u64) -> Result<Estimate> {
    check_n(n)?;
    let sampler = LineSampler::new(scenario.network().omega(), seed)?;
    let hits = parallel_count(n, Vec::new, |mask, k| {
        scenario.disconnects(&sampler.sample(k), mask) as u64
    });
    Ok(Estimate::from_count(hits, n, seed))
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfTestReport {
    pub target: f64,
    pub estimate: Estimate,
    pub abs_diff: f64,
    pub gate: f64,
    pub pass: bool,
}

/// Estimates the probability that a random line meets the hull of `c` and
/// compares it with the perimeter ratio.
///
/// The gate is four standard errors, taken at the larger of the observed
/// and the target proportion so that a degenerate estimate of 0 or 1 is
/// still judged against the noise the target implies.
pub fn sampler_self_test(
    omega: &ConvexRegion,
    c: &[Geom],
    n: u64,
    seed: u64,
    bias: SamplerBias,
) -> Result<SelfTestReport> {
    check_n(n)?;
    for g in c {
        if g.vertices().iter().any(|&p| !omega.contains(p, EPS)) {
            return Err(Error::validation("test set is not inside the area of interest"));
        }
    }
    let target = measure_lines_meeting(c)? / omega.perimeter();
    let pts: Vec<Point2> = c.iter().flat_map(|g| g.vertices().iter().copied()).collect();
    let hull = convex_hull(&pts)?;
    let sampler = LineSampler::new(omega, seed)?.with_bias(bias);
    let hits = parallel_count(n, || (), |_, k| {
        let line = sampler.sample(k);
        let n = line.normal();
        let (lo, hi) = hull
            .vertices()
            .iter()
            .map(|p| p.dot(n))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        (lo <= line.rho && line.rho <= hi) as u64
    });
    let estimate = Estimate::from_count(hits, n, seed);
    let abs_diff = (estimate.p_hat - target).abs();
    let gate = 4.0 * estimate.stderr.max(binomial_stderr(target.clamp(0.0, 1.0), n));
    Ok(SelfTestReport {
        target,
        estimate,
        abs_diff,
        gate,
        pass: abs_diff <= gate,
    })
}

/// Replays the same line sequence on two networks under the weakest
/// arrangement and counts the lines on which their verdicts differ.
pub fn per_sample_equivalence(a: &Network, b: &Network, n: u64, seed: u64) -> Result<u64> {
    check_n(n)?;
    let same = |p: Point2, q: Point2| p.dist(q) <= EPS;
    if !same(a.s_point(), b.s_point()) || !same(a.t_point(), b.t_point()) {
        return Err(Error::validation("networks have different endpoints"));
    }
    let (oa, ob) = (a.omega(), b.omega());
    if (oa.perimeter() - ob.perimeter()).abs() > EPS || !same(oa.centroid(), ob.centroid()) {
        return Err(Error::validation("networks have different areas of interest"));
    }
    let sa = Scenario::weakest(a.clone());
    let sb = Scenario::weakest(b.clone());
    let sampler = LineSampler::new(oa, seed)?;
    Ok(parallel_count(
        n,
        || (Vec::new(), Vec::new()),
        |(ma, mb), k| {
            let line = sampler.sample(k);
            (sa.disconnects(&line, ma) != sb.disconnects(&line, mb)) as u64
        },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceRow {
    pub arrangement: String,
    pub estimate: Estimate,
    /// Lines on which the arrangement destroyed a link the weakest
    /// arrangement did not.
    pub containment_violations: u64,
    pub dominated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub weakest: Estimate,
    pub rows: Vec<DominanceRow>,
}

impl DominanceReport {
    pub fn all_dominated(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.dominated && r.containment_violations == 0)
    }
}

/// Replays one line sequence on every scenario and on the weakest
/// arrangement of their shared network layout, checking destroyed-set
/// containment line by line. Scenarios may differ in link levels and
/// protection flags.
pub fn arrangement_dominance_test(
    scenarios: &[Scenario],
    n: u64,
    seed: u64,
) -> Result<DominanceReport> {
    check_n(n)?;
    let Some(first) = scenarios.first() else {
        return Ok(DominanceReport {
            weakest: Estimate::from_count(0, n, seed),
            rows: Vec::new(),
        });
    };
    let base = Scenario::weakest(first.network().clone());
    let links = base.network().links().len();
    // link attributes may differ between scenarios; geometry may not
    let same_layout = |s: &Scenario| {
        let (a, b) = (s.network().links(), base.network().links());
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.id == y.id && x.endpoints == y.endpoints && x.geometry == y.geometry
            })
            && s.network().s_point() == base.network().s_point()
            && s.network().t_point() == base.network().t_point()
    };
    if !scenarios.iter().all(same_layout) {
        return Err(Error::validation("arrangements must share one network layout"));
    }
    let sampler = LineSampler::new(base.network().omega(), seed)?;
    let m = scenarios.len();
    // per block: [weakest disconnects, (disconnects, violations) per scenario]
    let totals = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0u64; 1 + 2 * m];
            let mut wmask = Vec::with_capacity(links);
            let mut mask = Vec::with_capacity(links);
            for k in b * BLOCK..((b + 1) * BLOCK).min(n) {
                let line = sampler.sample(k);
                acc[0] += base.disconnects(&line, &mut wmask) as u64;
                for (j, sc) in scenarios.iter().enumerate() {
                    acc[1 + 2 * j] += sc.disconnects(&line, &mut mask) as u64;
                    if mask.iter().zip(&wmask).any(|(&d, &w)| d && !w) {
                        acc[2 + 2 * j] += 1;
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![0u64; 1 + 2 * m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let weakest = Estimate::from_count(totals[0], n, seed);
    let rows = scenarios
        .iter()
        .enumerate()
        .map(|(j, sc)| DominanceRow {
            arrangement: sc.arrangement().name().to_string(),
            estimate: Estimate::from_count(totals[1 + 2 * j], n, seed),
            containment_violations: totals[2 + 2 * j],
            dominated: totals[1 + 2 * j] <= totals[0],
        })
        .collect();
    Ok(DominanceReport { weakest, rows })
}
