//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p survnet --test acceptance`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use survnet::analytic::{
    example1_inner_hull_perimeter, prob_avoid, prob_connect_single, prob_connect_weakest,
    Applicability,
};
use survnet::experiment::{gate, theory, TheoryKind};
use survnet::geometry::{discretize_arc, ConvexRegion, Geom, Point2, Polyline};
use survnet::montecarlo::{
    arrangement_dominance_test, estimate_disconnect, per_sample_equivalence, sampler_self_test,
    Estimate, SamplerBias,
};
use survnet::network::{Arrangement, Link, Network, NetworkModel, Scenario};
use survnet::presets::{example1, nonconvex_model, realistic_model, NONCONVEX_GAMMA};

const N: u64 = 1_000_000;
const N_REPLAY: u64 = 100_000;
const SEED: u64 = 20230901;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn disk2() -> ConvexRegion {
    ConvexRegion::disk(Point2::ORIGIN, 2.0).unwrap()
}

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// A network whose only route is one link from s to t.
fn single_link(geometry: Polyline) -> Network {
    let (s, t) = (geometry.first(), geometry.last());
    Network::new(NetworkModel {
        nodes: BTreeMap::from([("s".into(), s), ("t".into(), t)]),
        links: vec![Link {
            id: "l".into(),
            endpoints: ("s".into(), "t".into()),
            geometry,
            de_level: 1,
            protected: false,
        }],
        s: "s".into(),
        t: "t".into(),
        routes: vec![vec!["l".into()]],
        outer: None,
        omega: disk2(),
    })
    .unwrap()
}

fn weakest(model: NetworkModel) -> Scenario {
    Scenario::weakest(Network::new(model).unwrap())
}

fn est(sc: &Scenario) -> Estimate {
    estimate_disconnect(sc, N, SEED).unwrap()
}

/// Standard error of the difference of two estimates.
fn diff_se(a: &Estimate, b: &Estimate) -> f64 {
    (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
}

fn criterion_1() -> Outcome {
    let om = disk2();
    let tri = Polyline::new(vec![p(-1.0, -0.5), p(1.0, -0.5), p(0.0, 1.0)]).unwrap();
    let circle = discretize_arc(Point2::ORIGIN, 1.0, -PI, PI, 1e-4).unwrap();
    let sets: Vec<(&str, Vec<Geom>)> = vec![
        ("point", vec![p(0.3, -0.2).into()]),
        ("segment", vec![Polyline::segment(p(-1.0, 0.0), p(1.0, 0.0)).unwrap().into()]),
        ("triangle", vec![tri.into()]),
        ("disk r=1", vec![circle.into()]),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, set) in sets {
        let r = sampler_self_test(&om, &set, N, SEED, SamplerBias::None).unwrap();
        let pass = r.abs_diff <= 4.0 * r.estimate.stderr;
        ok &= pass;
        parts.push(format!("{name}: |{:.5}-{:.5}|={:.1e}", r.estimate.p_hat, r.target, r.abs_diff));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_2() -> Outcome {
    let seg = Polyline::segment(p(-1.0, 0.0), p(1.0, 0.0)).unwrap();
    let closed = prob_avoid(&disk2(), &[seg.clone().into()]).unwrap();
    let expected = (4.0 * PI - 4.0) / (8.0 * PI);
    let sim = est(&Scenario::weakest(single_link(seg)));
    let p_avoid = 1.0 - sim.p_hat;
    let exact = (closed - expected).abs() <= 1e-12;
    let agree = (p_avoid - closed).abs() <= gate(sim.stderr);
    outcome(
        exact && agree,
        format!("closed {closed:.6} (expected {expected:.6}), simulated {p_avoid:.6} ± {:.1e}", sim.stderr),
    )
}

fn criterion_3() -> Outcome {
    let half = discretize_arc(Point2::ORIGIN, 1.0, PI, 0.0, 1e-4).unwrap();
    let closed = prob_connect_single(&disk2(), &[half.clone().into()]).unwrap().p_connect;
    let expected = (3.0 * PI - 2.0) / (8.0 * PI);
    let sim = est(&Scenario::weakest(single_link(half)));
    let p_conn = 1.0 - sim.p_hat;
    // a perimeter discretization error of 1e-3 moves the probability by 1e-3 / (2⟨Ω⟩)
    let tol = 1e-3 / (2.0 * disk2().perimeter());
    let pass = (closed - expected).abs() <= tol && (p_conn - closed).abs() <= gate(sim.stderr);
    outcome(
        pass,
        format!("closed {closed:.6} (expected {expected:.6}), simulated {p_conn:.6} ± {:.1e}", sim.stderr),
    )
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let sc = weakest(example1(a, 0.3, 0.3).unwrap());
        let r = prob_connect_weakest(sc.network()).unwrap();
        let sim = est(&sc);
        let pass = r.applicability == Applicability::Exact
            && (r.p_disconnect - sim.p_hat).abs() <= gate(sim.stderr);
        ok &= pass;
        parts.push(format!("a={a}: {:.5} vs {:.5}", r.p_disconnect, sim.p_hat));
    }
    let at0 = prob_connect_weakest(Network::new(example1(0.0, 0.3, 0.3).unwrap()).as_ref().unwrap())
        .unwrap()
        .p_disconnect;
    let expected = 1.0 - (4.0 * PI - 4.0) / (8.0 * PI);
    ok &= (at0 - expected).abs() <= 1e-12 && (at0 - 0.65915).abs() < 5e-6;
    parts.push(format!("closed form at a=0: {at0:.5}"));
    outcome(ok, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let common = prob_connect_weakest(&Network::new(example1(0.5, 0.3, 0.3).unwrap()).unwrap())
        .unwrap()
        .p_disconnect;
    let mut ok = true;
    let mut sims = Vec::new();
    let grid = [0.1, 0.3, 0.5, 0.7];
    let cases = grid
        .iter()
        .map(|&b| (b, 0.3))
        .chain(grid.iter().map(|&c| (0.3, c)));
    for (b, c) in cases {
        let sc = weakest(example1(0.5, b, c).unwrap());
        let th = prob_connect_weakest(sc.network()).unwrap().p_disconnect;
        ok &= (th - common).abs() <= 1e-12;
        let sim = est(&sc);
        ok &= (sim.p_hat - common).abs() <= 4.0 * sim.stderr;
        sims.push(sim.p_hat);
    }
    let (lo, hi) = sims
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    outcome(
        ok,
        format!("theory {common:.5} for all b, c; simulated range [{lo:.5}, {hi:.5}]"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut scenarios = Vec::new();
    for _ in 0..20 {
        let mut m = example1(0.5, 0.3, 0.3).unwrap();
        for l in &mut m.links {
            l.de_level = rng.random_range(1..=3);
            l.protected = rng.random_bool(0.2);
        }
        let level = rng.random_range(1..=3);
        scenarios.push(Scenario::new(Network::new(m).unwrap(), Arrangement::Leveled, level).unwrap());
    }
    let r = arrangement_dominance_test(&scenarios, N_REPLAY, SEED).unwrap();
    let violations: u64 = r.rows.iter().map(|row| row.containment_violations).sum();
    let dominated = r.rows.iter().all(|row| row.dominated);
    let max_p = r.rows.iter().map(|row| row.estimate.p_hat).fold(0.0, f64::max);
    outcome(
        violations == 0 && dominated,
        format!(
            "20 leveled arrangements, {N_REPLAY} lines: {violations} containment violations; max p̂ {max_p:.5} <= weakest {:.5}",
            r.weakest.p_hat
        ),
    )
}

fn criterion_7() -> Outcome {
    let net = |a: f64| Network::new(example1(a, 0.3, 0.3).unwrap()).unwrap();
    let with = |a: f64, arr: Arrangement| est(&Scenario::new(net(a), arr, 1).unwrap());
    let w5 = with(0.5, Arrangement::Weakest);
    let ad = with(0.5, Arrangement::protect(["A", "D"]));
    let i1 = with(0.5, Arrangement::protect(["I1"]));
    let w0 = with(0.0, Arrangement::Weakest);
    let c0 = with(0.0, Arrangement::protect(["C"]));
    let c1 = w5.p_hat - ad.p_hat > 4.0 * diff_se(&w5, &ad);
    let c2 = (w0.p_hat - c0.p_hat).abs() <= 4.0 * diff_se(&w0, &c0);
    let c3 = w5.p_hat - i1.p_hat > 4.0 * diff_se(&w5, &i1);
    outcome(
        c1 && c2 && c3,
        format!(
            "(1) {{A,D}}: {:.5} -> {:.5}; (2) a=0 {{C}}: {:.5} -> {:.5}; (3) {{I1}}: {:.5} -> {:.5}",
            w5.p_hat, ad.p_hat, w0.p_hat, c0.p_hat, w5.p_hat, i1.p_hat
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.0, 0.25, 0.5, 0.75] {
        let net = Network::new(example1(a, 0.3, 0.3).unwrap()).unwrap();
        let n0 = net.equivalent_single_route().unwrap();
        let geoms: Vec<Geom> = n0.links().iter().map(|l| l.geometry.clone().into()).collect();
        let single = prob_connect_single(n0.omega(), &geoms).unwrap().p_connect;
        let multi = prob_connect_weakest(&net).unwrap().p_connect;
        let mism = per_sample_equivalence(&net, &n0, N_REPLAY, SEED).unwrap();
        ok &= (single - multi).abs() <= 1e-9 + 1e-3 && mism <= 10;
        parts.push(format!("a={a}: |Δ|={:.1e}, {mism} mismatches", (single - multi).abs()));
    }
    outcome(ok, parts.join("; "))
}

/// Perimeter of the hull of the half circle and the chord, by integrating
/// the support function of their union (independent of any hull code).
fn support_integral_oracle(a: f64, d: f64) -> f64 {
    let (s, t, c) = (-d / 2.0, d / 2.0, d / 2.0 - a);
    let m = 2_000_000;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|k| {
            let th = -PI + (k as f64 + 0.5) * h;
            let (cs, sn) = (th.cos(), th.sin());
            let chord = (s * cs).max(t * cs);
            let arc = if sn >= 0.0 { c * cs + a } else { c * cs + a * cs.abs() };
            chord.max(arc) * h
        })
        .sum()
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=19 {
        let a = 0.05 * k as f64;
        let f = example1_inner_hull_perimeter(a, 2.0).unwrap();
        worst = worst.max((f - support_integral_oracle(a, 2.0)).abs());
    }
    let a5 = example1_inner_hull_perimeter(0.5, 2.0).unwrap();
    outcome(
        worst <= 1e-3 && (a5 - 4.36953).abs() < 1e-5,
        format!("max |formula − oracle| over a∈{{0.05..0.95}} = {worst:.1e}; a=0.5 → {a5:.5}"),
    )
}

fn criterion_10() -> Outcome {
    let net = Network::new(nonconvex_model().unwrap()).unwrap();
    let un = est(&Scenario::weakest(net.clone()));
    let pr = est(&Scenario::new(net, Arrangement::protect(NONCONVEX_GAMMA), 1).unwrap());
    outcome(
        un.p_hat - pr.p_hat > 4.0 * diff_se(&un, &pr),
        format!("unprotected {:.5}, protected {:.5}, 4σ={:.1e}", un.p_hat, pr.p_hat, 4.0 * diff_se(&un, &pr)),
    )
}

fn criterion_11() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, t) in [("2", "4"), ("2", "3")] {
        let sc = weakest(realistic_model(s, t).unwrap());
        let th = theory(&sc).unwrap();
        let sim = est(&sc);
        ok &= th.kind == TheoryKind::Exact && (th.p_disconnect - sim.p_hat).abs() <= gate(sim.stderr);
        parts.push(format!("({s},{t}) {} {:.5} vs {:.5}", th.kind, th.p_disconnect, sim.p_hat));
    }
    let sc = weakest(realistic_model("3", "5").unwrap());
    let th = theory(&sc).unwrap();
    let sim = est(&sc);
    ok &= th.kind == TheoryKind::Approximate && sim.p_hat >= th.p_disconnect - 4.0 * sim.stderr;
    parts.push(format!("(3,5) {} {:.5} vs {:.5}", th.kind, th.p_disconnect, sim.p_hat));
    outcome(ok, parts.join("; "))
}

fn criterion_12() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_survnet");
    let scenario = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/example1-template.json");
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, name: &str| -> Option<Vec<u8>> {
        let out = dir.path().join(name);
        let status = Command::new(bin)
            .args(["compare", "--scenario"])
            .arg(&scenario)
            .args(["--sweep", "a=0:0.8:0.4", "--samples", "200000", "--seed", "7", "--workers", workers, "--out"])
            .arg(&out)
            .status()
            .ok()?;
        status.success().then(|| std::fs::read(&out).ok()).flatten()
    };
    let outputs: Vec<Option<Vec<u8>>> = vec![
        run("1", "w1a.csv"),
        run("1", "w1b.csv"),
        run("4", "w4.csv"),
        run("8", "w8.csv"),
    ];
    let first = outputs[0].clone();
    let ok = first.is_some() && outputs.iter().all(|o| *o == first);
    outcome(
        ok,
        format!(
            "4 runs (workers 1, 1, 4, 8): {}",
            if ok { "byte-identical CSV" } else { "outputs differ or a run failed" }
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "sampler hits convex sets in proportion to hull perimeter", criterion_1),
        (2, "avoidance probability of a centred segment", criterion_2),
        (3, "single half-circle route", criterion_3),
        (4, "two-route closed form on example 1 across a", criterion_4),
        (5, "independence of b and c", criterion_5),
        (6, "weakest arrangement dominates per line", criterion_6),
        (7, "protection directions on example 1", criterion_7),
        (8, "equivalent single-route network", criterion_8),
        (9, "inner hull perimeter formula", criterion_9),
        (10, "protection helps the nonconvex network", criterion_10),
        (11, "realistic network pairs", criterion_11),
        (12, "CSV determinism across worker counts", criterion_12),
    ];
    let mut failed = 0;
    for (k, name, f) in criteria {
        let o = f();
        println!(
            "[{}] criterion {k}: {name} — {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += (!o.pass) as u32;
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
