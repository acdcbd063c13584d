//! Theory-versus-simulation comparisons, parameter sweeps, presets and the
//! sampler self-test, producing CSV rows.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::analytic::{prob_connect_single, prob_connect_weakest, Applicability};
use crate::error::{Error, Result};
use crate::geometry::{discretize_arc, ConvexRegion, Geom, Point2, Polyline};
use crate::montecarlo::{estimate_disconnect, sampler_self_test, SamplerBias, SelfTestReport};
use crate::network::{Arrangement, Scenario};
use crate::presets::{self, NONCONVEX_GAMMA};
use crate::scenario::{ArrangementSpec, ScenarioSpec, Source, TemplateSpec};

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 20230901;

/// Agreement gate for exact closed forms: max(0.005, 4·stderr).
pub fn gate(stderr: f64) -> f64 {
    (4.0 * stderr).max(0.005)
}

/// `NAME=START:STOP:STEP`, inclusive of `STOP`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::validation(format!("sweep must look like NAME=START:STOP:STEP, got '{s}'"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let nums: Vec<f64> = range
            .split(':')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let [start, stop, step] = nums[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || !(start <= stop) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::validation(format!(
                "sweep needs step > 0 and start <= stop, got '{s}'"
            )));
        }
        Ok(SweepSpec {
            name: name.trim().to_string(),
            start,
            stop,
            step,
        })
    }
}

/// How the theory column relates to the simulated value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryKind {
    Exact,
    Approximate,
    /// The weakest-arrangement value, an upper bound for other arrangements.
    UpperBound,
}

impl fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoryKind::Exact => "exact",
            TheoryKind::Approximate => "approximate",
            TheoryKind::UpperBound => "upper_bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theory {
    pub p_disconnect: f64,
    pub kind: TheoryKind,
}

/// Closed-form disconnection probability for a scenario.
///
/// Single-route networks use the destructible links of the route, which is
/// exact for every arrangement. Multi-route networks use the weakest
/// arrangement formula; for other arrangements it is reported as an upper
/// bound when the formula itself is exact.
pub fn theory(scenario: &Scenario) -> Result<Theory> {
    let net = scenario.network();
    if net.route_count() == 1 {
        let vulnerable = scenario.vulnerable();
        let geoms: Vec<Geom> = net
            .route_links(0)
            .map(|id| net.link_position(id).expect("route links exist"))
            .filter(|&li| vulnerable[li])
            .map(|li| Geom::Polyline(net.links()[li].geometry.clone()))
            .collect();
        let r = prob_connect_single(net.omega(), &geoms)?;
        return Ok(Theory {
            p_disconnect: r.p_disconnect,
            kind: TheoryKind::Exact,
        });
    }
    let r = prob_connect_weakest(net)?;
    let kind = match (r.applicability, scenario.arrangement()) {
        (Applicability::Approximate, _) => TheoryKind::Approximate,
        (Applicability::Exact, Arrangement::Weakest) => TheoryKind::Exact,
        (Applicability::Exact, _) => TheoryKind::UpperBound,
    };
    Ok(Theory {
        p_disconnect: r.p_disconnect,
        kind,
    })
}

/// One CSV row. Absent values are written as empty fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub scenario_id: String,
    pub param_name: String,
    pub param_value: Option<f64>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub p_theory_disconnect: Option<f64>,
    pub applicability: Option<TheoryKind>,
    pub p_sim_disconnect: Option<f64>,
    pub stderr: Option<f64>,
    pub abs_diff: Option<f64>,
    /// `true`/`false` for gated rows, `info` otherwise.
    pub pass: String,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.pass == "false"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Theory,
    Simulate,
    Compare,
}

fn row_for(
    id: &str,
    param: Option<(&str, f64)>,
    scenario: &Scenario,
    mode: Mode,
    n: u64,
    seed: u64,
) -> Result<ResultRow> {
    let th = match mode {
        Mode::Simulate => None,
        _ => Some(theory(scenario)?),
    };
    let sim = match mode {
        Mode::Theory => None,
        _ => Some(estimate_disconnect(scenario, n, seed)?),
    };
    let abs_diff = match (th, sim) {
        (Some(t), Some(s)) => Some((t.p_disconnect - s.p_hat).abs()),
        _ => None,
    };
    let pass = match (th, sim) {
        (Some(t), Some(s)) => match t.kind {
            TheoryKind::Exact => (abs_diff.unwrap() <= gate(s.stderr)).to_string(),
            TheoryKind::UpperBound => (s.p_hat <= t.p_disconnect + 4.0 * s.stderr).to_string(),
            TheoryKind::Approximate => "info".into(),
        },
        _ => "info".into(),
    };
    Ok(ResultRow {
        scenario_id: id.to_string(),
        param_name: param.map(|p| p.0.to_string()).unwrap_or_default(),
        param_value: param.map(|p| p.1),
        n: sim.map(|s| s.n),
        seed: sim.map(|s| s.seed),
        p_theory_disconnect: th.map(|t| t.p_disconnect),
        applicability: th.map(|t| t.kind),
        p_sim_disconnect: sim.map(|s| s.p_hat),
        stderr: sim.map(|s| s.stderr),
        abs_diff,
        pass,
    })
}

/// Evaluates a scenario, or each point of a sweep over it.
pub fn run_compare(
    spec: &ScenarioSpec,
    sweep: Option<&SweepSpec>,
    mode: Mode,
    n: u64,
    seed: u64,
) -> Result<Vec<ResultRow>> {
    match sweep {
        None => Ok(vec![row_for(&spec.id, None, &spec.build()?, mode, n, seed)?]),
        Some(sw) => sw
            .values()
            .into_iter()
            .map(|v| {
                let sc = spec.with_param(&sw.name, v)?.build()?;
                row_for(&spec.id, Some((&sw.name, v)), &sc, mode, n, seed)
            })
            .collect(),
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    if rows.is_empty() {
        w.write_record([
            "scenario_id",
            "param_name",
            "param_value",
            "n",
            "seed",
            "p_theory_disconnect",
            "applicability",
            "p_sim_disconnect",
            "stderr",
            "abs_diff",
            "pass",
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv>", io),
        other => Error::validation(format!("csv: {other:?}")),
    }
}

pub fn write_csv_file(rows: &[ResultRow], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(rows, std::io::BufWriter::new(f)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Preset names accepted by [`run_preset`].
pub const PRESETS: [&str; 4] = ["example1", "example1-protect", "nonconvex", "realistic"];

fn template_spec(id: &str, t: TemplateSpec, arrangement: ArrangementSpec) -> ScenarioSpec {
    ScenarioSpec {
        id: id.to_string(),
        source: Source::Template(t),
        arrangement,
        disaster_level: 1,
    }
}

fn protect(ids: &[&str]) -> ArrangementSpec {
    ArrangementSpec::PartialProtect {
        gamma: Some(ids.iter().map(|s| s.to_string()).collect()),
    }
}

fn example1_spec(id: &str, a: f64, b: f64, c: f64, arrangement: ArrangementSpec) -> ScenarioSpec {
    template_spec(id, TemplateSpec::Example1 { a, b, c }, arrangement)
}

/// Runs a named preset, returning `(file name, rows)` per output table.
pub fn run_preset(name: &str, n: u64, seed: u64) -> Result<Vec<(String, Vec<ResultRow>)>> {
    let sweep = |s: &str| s.parse::<SweepSpec>();
    let compare = |spec: &ScenarioSpec, sw: Option<&SweepSpec>| run_compare(spec, sw, Mode::Compare, n, seed);
    match name {
        "example1" => {
            let base = example1_spec("example1", 0.5, 0.3, 0.3, ArrangementSpec::Weakest);
            Ok(vec![
                ("example1_vs_a.csv".into(), compare(&base, Some(&sweep("a=0:0.9:0.1")?))?),
                ("example1_vs_b.csv".into(), compare(&base, Some(&sweep("b=0.1:0.7:0.2")?))?),
                ("example1_vs_c.csv".into(), compare(&base, Some(&sweep("c=0.1:0.7:0.2")?))?),
            ])
        }
        "example1-protect" => {
            let variants = [
                example1_spec("weakest_a0.5", 0.5, 0.3, 0.3, ArrangementSpec::Weakest),
                example1_spec("protect_A_D_a0.5", 0.5, 0.3, 0.3, protect(&["A", "D"])),
                example1_spec("protect_I1_a0.5", 0.5, 0.3, 0.3, protect(&["I1"])),
                example1_spec("weakest_a0", 0.0, 0.3, 0.3, ArrangementSpec::Weakest),
                example1_spec("protect_C_a0", 0.0, 0.3, 0.3, protect(&["C"])),
            ];
            let mut rows = Vec::new();
            for v in &variants {
                rows.extend(compare(v, None)?);
            }
            Ok(vec![("example1_protect.csv".into(), rows)])
        }
        "nonconvex" => {
            let mut rows = compare(
                &template_spec("nonconvex_unprotected", TemplateSpec::Nonconvex, ArrangementSpec::Weakest),
                None,
            )?;
            rows.extend(compare(
                &template_spec("nonconvex_protected", TemplateSpec::Nonconvex, protect(&NONCONVEX_GAMMA)),
                None,
            )?);
            Ok(vec![("nonconvex.csv".into(), rows)])
        }
        "realistic" => {
            let mut rows = Vec::new();
            for (s, t) in presets::realistic_pairs() {
                let spec = template_spec(
                    &format!("realistic_{s}_{t}"),
                    TemplateSpec::Realistic {
                        s: s.into(),
                        t: t.into(),
                    },
                    ArrangementSpec::Weakest,
                );
                rows.extend(compare(&spec, None)?);
            }
            Ok(vec![("realistic.csv".into(), rows)])
        }
        other => Err(Error::validation(format!(
            "unknown preset '{other}' (expected one of {})",
            PRESETS.join(", ")
        ))),
    }
}

/// Writes preset tables into `dir`, returning the written paths.
pub fn write_preset(tables: &[(String, Vec<ResultRow>)], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    tables
        .iter()
        .map(|(name, rows)| {
            let path = dir.join(name);
            write_csv_file(rows, &path)?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfTestEntry {
    pub name: String,
    pub report: SelfTestReport,
}

/// Test sets scaled to `omega`: a point, a segment, a triangle, a
/// discretized disk, and the boundary of `omega` itself.
pub fn selftest_battery(omega: &ConvexRegion) -> Result<Vec<(String, Vec<Geom>)>> {
    let c = omega.centroid();
    // radius of a disk around the centroid that fits inside omega
    let r = (0..720)
        .map(|k| {
            let n = Point2::polar(2.0 * std::f64::consts::PI * k as f64 / 720.0);
            omega.support_unchecked(n) - c.dot(n)
        })
        .fold(f64::INFINITY, f64::min);
    let h = r / 2.0;
    let p = |x: f64, y: f64| c + Point2::new(x, y);
    let tri = Polyline::new(vec![p(-h, -h * 0.5), p(h, -h * 0.5), p(0.0, h)])?;
    let disk = discretize_arc(c, h, -std::f64::consts::PI, std::f64::consts::PI, 1e-4 * h)?;
    let boundary = Polyline::new(omega.boundary_points(1e-4 * r))?;
    Ok(vec![
        ("point".into(), vec![c.into()]),
        ("segment".into(), vec![Polyline::segment(p(-h, 0.0), p(h, 0.0))?.into()]),
        ("triangle".into(), vec![tri.into()]),
        ("disk".into(), vec![disk.into()]),
        ("omega_boundary".into(), vec![boundary.into()]),
    ])
}

/// Runs the sampler self-test battery on `omega` recentered on its
/// centroid.
pub fn run_selftest(
    omega: &ConvexRegion,
    n: u64,
    seed: u64,
    bias: SamplerBias,
) -> Result<Vec<SelfTestEntry>> {
    let omega = omega.recentered();
    selftest_battery(&omega)?
        .into_iter()
        .map(|(name, set)| {
            Ok(SelfTestEntry {
                name,
                report: sampler_self_test(&omega, &set, n, seed, bias)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s: SweepSpec = "a=0:0.9:0.1".parse().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[3], 0.3);
        assert_eq!(v[9], 0.9);
        assert_eq!("b=0.1:0.7:0.2".parse::<SweepSpec>().unwrap().values(), [0.1, 0.3, 0.5, 0.7]);
        assert!("a=1:0:0.1".parse::<SweepSpec>().is_err());
        assert!("a=0:1:0".parse::<SweepSpec>().is_err());
        assert!("a0:1:0.1".parse::<SweepSpec>().is_err());
        assert!("a=0:1".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn theory_only_rows() {
        let spec = example1_spec("e", 0.5, 0.3, 0.3, ArrangementSpec::Weakest);
        let rows = run_compare(&spec, Some(&"b=0.1:0.7:0.2".parse().unwrap()), Mode::Theory, 1, 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.p_theory_disconnect == rows[0].p_theory_disconnect));
        assert!(rows.iter().all(|r| r.p_sim_disconnect.is_none() && r.pass == "info"));
    }

    #[test]
    fn theory_kinds() {
        let sc = example1_spec("e", 0.5, 0.3, 0.3, protect(&["A", "D"])).build().unwrap();
        assert_eq!(theory(&sc).unwrap().kind, TheoryKind::UpperBound);
        let sc = template_spec("n", TemplateSpec::Nonconvex, ArrangementSpec::Weakest).build().unwrap();
        assert_eq!(theory(&sc).unwrap().kind, TheoryKind::Approximate);
    }

    #[test]
    fn csv_header_and_empty_fields() {
        let spec = example1_spec("e", 0.5, 0.3, 0.3, ArrangementSpec::Weakest);
        let rows = run_compare(&spec, None, Mode::Theory, 1, 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario_id,param_name,param_value,n,seed,p_theory_disconnect,applicability,p_sim_disconnect,stderr,abs_diff,pass"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("e,,,,,0.67"), "{row}");
        assert!(row.ends_with(",exact,,,,info"), "{row}");
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("scenario_id,"));
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(run_preset("nope", 10, 1), Err(Error::Validation(_))));
    }

    #[test]
    fn small_selftest_scales_gate() {
        let om = ConvexRegion::disk(Point2::ORIGIN, 2.0).unwrap();
        let r = run_selftest(&om, 100, 1, SamplerBias::None).unwrap();
        assert_eq!(r.len(), 5);
        let seg = &r[1].report;
        assert!(seg.gate > 0.15, "{seg:?}");
    }
}
