//! Built-in networks used by the experiment presets.
//!
//! * `example1` — two routes between s = (−1, 0) and t = (1, 0) in a disk of
//!   radius 2. Route 1 is a lower half circle `A` followed by an upper half
//!   circle `I1` of radius `a` ending at t; `I1` is its only inner part.
//!   Route 2 climbs a riser at x = −1, runs along y = 1 as three upper half
//!   circles `D`, `C`, `B` of radii 1−b−c, c and b, and drops back to t.
//! * `nonconvex` — a ring whose upper route has a lobe bulging left of s,
//!   so s lies strictly inside the hull of the outer routes.
//! * `realistic` — a six-node ring with a chord through node 3; any node
//!   pair can be chosen as (s, t).
//!
//! These are stand-ins with documented coordinates, not digitized figures.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::EPS;
use crate::network::NetworkModel;
use crate::scenario::{ArcSpec, GeometrySpec, LinkSpec, NetworkSpec, NodeSpec, OmegaSpec, PartSpec};

/// Protected lobe of the nonconvex network.
pub const NONCONVEX_GAMMA: [&str; 2] = ["u1-u2", "u2-u3"];

/// Node ids of the realistic network.
pub const REALISTIC_NODES: [&str; 6] = ["1", "2", "3", "4", "5", "6"];

fn node(id: &str, x: f64, y: f64) -> NodeSpec {
    NodeSpec {
        id: id.into(),
        at: [x, y],
    }
}

fn link(id: &str, from: &str, to: &str, geometry: GeometrySpec) -> LinkSpec {
    LinkSpec {
        id: id.into(),
        from: from.into(),
        to: to.into(),
        geometry,
        de_level: 1,
        protected: false,
    }
}

fn upper_half(cx: f64, cy: f64, r: f64) -> ArcSpec {
    ArcSpec {
        center: [cx, cy],
        radius: r,
        start_angle: PI,
        end_angle: 0.0,
    }
}

fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn example1_spec(a: f64, b: f64, c: f64) -> Result<NetworkSpec> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::validation(format!("a must lie in [0, 1), got {a}")));
    }
    if !(b >= 0.0 && c >= 0.0 && b + c <= 1.0) {
        return Err(Error::validation(format!(
            "b and c must be non-negative with b + c <= 1, got b={b}, c={c}"
        )));
    }
    // radii below the geometric tolerance collapse their half circle
    let snap = |r: f64| if r <= EPS { 0.0 } else { r };
    let (b, c, rd) = (snap(b), snap(c), snap(1.0 - b - c));
    let mut nodes = vec![node("s", -1.0, 0.0), node("t", 1.0, 0.0)];
    let mut links = Vec::new();
    let mut route1 = vec!["A"];

    let m = if a > 0.0 {
        nodes.push(node("m", 1.0 - 2.0 * a, 0.0));
        "m"
    } else {
        "t"
    };
    links.push(link(
        "A",
        "s",
        m,
        GeometrySpec::Arc(ArcSpec {
            center: [-a, 0.0],
            radius: 1.0 - a,
            start_angle: PI,
            end_angle: 2.0 * PI,
        }),
    ));
    if a > 0.0 {
        links.push(link("I1", "m", "t", GeometrySpec::Arc(upper_half(1.0 - a, 0.0, a))));
        route1.push("I1");
    }

    let dc_x = -1.0 + 2.0 * rd;
    nodes.push(node("dc", dc_x, 1.0));
    let d_geom = if rd > 0.0 {
        GeometrySpec::Path {
            parts: vec![
                PartSpec::Line { to: [-1.0, 1.0] },
                PartSpec::Arc(upper_half(-1.0 + rd, 1.0, rd)),
            ],
        }
    } else {
        GeometrySpec::Straight
    };
    links.push(link("D", "s", "dc", d_geom));
    let mut route2 = vec!["D"];
    let cb = if c > 0.0 {
        nodes.push(node("cb", 1.0 - 2.0 * b, 1.0));
        links.push(link("C", "dc", "cb", GeometrySpec::Arc(upper_half(dc_x + c, 1.0, c))));
        route2.push("C");
        "cb"
    } else {
        "dc"
    };
    let b_geom = if b > 0.0 {
        GeometrySpec::Path {
            parts: vec![
                PartSpec::Arc(upper_half(1.0 - b, 1.0, b)),
                PartSpec::Line { to: [1.0, 1.0] },
            ],
        }
    } else {
        GeometrySpec::Straight
    };
    links.push(link("B", cb, "t", b_geom));
    route2.push("B");

    Ok(NetworkSpec {
        omega: OmegaSpec::Disk {
            center: [0.0, 0.0],
            radius: 2.0,
        },
        nodes,
        links,
        s: "s".into(),
        t: "t".into(),
        routes: vec![ids(&route1), ids(&route2)],
        outer: Some([1, 2]),
    })
}

pub fn example1(a: f64, b: f64, c: f64) -> Result<NetworkModel> {
    example1_spec(a, b, c)?.to_model()
}

pub fn nonconvex_spec() -> NetworkSpec {
    let nodes = vec![
        node("s", -2.0, 0.0),
        node("t", 2.0, 0.0),
        node("u1", -2.0, 1.0),
        node("u2", -3.5, 1.5),
        node("u3", -2.0, 3.0),
        node("u4", 2.0, 3.0),
        node("l1", -2.0, -3.0),
        node("l2", 2.0, -3.0),
    ];
    let pairs = [
        ("s", "u1"),
        ("u1", "u2"),
        ("u2", "u3"),
        ("u3", "u4"),
        ("u4", "t"),
        ("s", "l1"),
        ("l1", "l2"),
        ("l2", "t"),
    ];
    let links = pairs
        .iter()
        .map(|&(a, b)| {
            let id = format!("{a}-{b}");
            LinkSpec {
                protected: NONCONVEX_GAMMA.contains(&id.as_str()),
                ..link(&id, a, b, GeometrySpec::Straight)
            }
        })
        .collect();
    NetworkSpec {
        omega: OmegaSpec::Disk {
            center: [0.0, 0.0],
            radius: 5.0,
        },
        nodes,
        links,
        s: "s".into(),
        t: "t".into(),
        routes: vec![
            ids(&["s-u1", "u1-u2", "u2-u3", "u3-u4", "u4-t"]),
            ids(&["s-l1", "l1-l2", "l2-t"]),
        ],
        outer: Some([1, 2]),
    }
}

pub fn nonconvex_model() -> Result<NetworkModel> {
    nonconvex_spec().to_model()
}

/// Ring order of the realistic network; node 3 sits on the chord 2–3–4.
const RING: [&str; 5] = ["1", "2", "4", "5", "6"];

fn ring_link(a: &str, b: &str) -> String {
    let i = RING.iter().position(|&x| x == a).unwrap();
    let j = RING.iter().position(|&x| x == b).unwrap();
    if (i + 1) % RING.len() == j {
        format!("{a}-{b}")
    } else {
        format!("{b}-{a}")
    }
}

/// Links walking the ring from `from` to `to` in direction `step` (±1).
fn ring_walk(from: &str, to: &str, step: isize) -> Vec<String> {
    let n = RING.len() as isize;
    let mut i = RING.iter().position(|&x| x == from).unwrap() as isize;
    let mut out = Vec::new();
    while RING[i as usize] != to {
        let j = (i + step).rem_euclid(n);
        out.push(ring_link(RING[i as usize], RING[j as usize]));
        i = j;
    }
    out
}

/// The two outer routes between `s` and `t`, each listed from `s`.
fn realistic_routes(s: &str, t: &str) -> [Vec<String>; 2] {
    let reversed = |mut v: Vec<String>| {
        v.reverse();
        v
    };
    match (s, t) {
        ("3", x) => [
            [vec!["2-3".to_string()], ring_walk("2", x, -1)].concat(),
            [vec!["3-4".to_string()], ring_walk("4", x, 1)].concat(),
        ],
        (x, "3") => {
            let [p, q] = realistic_routes("3", x);
            [reversed(p), reversed(q)]
        }
        _ => [ring_walk(s, t, 1), ring_walk(s, t, -1)],
    }
}

pub fn realistic_spec(s: &str, t: &str) -> Result<NetworkSpec> {
    for id in [s, t] {
        if !REALISTIC_NODES.contains(&id) {
            return Err(Error::validation(format!("realistic network has no node '{id}'")));
        }
    }
    if s == t {
        return Err(Error::validation("s and t must differ"));
    }
    let nodes = vec![
        node("1", -3.0, 0.0),
        node("2", -1.5, 2.5),
        node("3", 0.0, 1.8),
        node("4", 1.5, 2.5),
        node("5", 3.0, 0.0),
        node("6", 0.0, -3.0),
    ];
    let links = vec![
        link("1-2", "1", "2", GeometrySpec::Straight),
        link(
            "2-4",
            "2",
            "4",
            GeometrySpec::Polyline {
                via: vec![[0.0, 3.2]],
            },
        ),
        link("4-5", "4", "5", GeometrySpec::Straight),
        link("5-6", "5", "6", GeometrySpec::Straight),
        link("6-1", "6", "1", GeometrySpec::Straight),
        link("2-3", "2", "3", GeometrySpec::Straight),
        link("3-4", "3", "4", GeometrySpec::Straight),
    ];
    let [r1, r2] = realistic_routes(s, t);
    Ok(NetworkSpec {
        omega: OmegaSpec::Disk {
            center: [0.0, 0.0],
            radius: 4.5,
        },
        nodes,
        links,
        s: s.into(),
        t: t.into(),
        routes: vec![r1, r2],
        outer: Some([1, 2]),
    })
}

pub fn realistic_model(s: &str, t: &str) -> Result<NetworkModel> {
    realistic_spec(s, t)?.to_model()
}

/// All unordered node pairs of the realistic network.
pub fn realistic_pairs() -> Vec<(&'static str, &'static str)> {
    let mut out = Vec::new();
    for (i, &a) in REALISTIC_NODES.iter().enumerate() {
        for &b in &REALISTIC_NODES[i + 1..] {
            out.push((a, b));
        }
    }
    out
}
