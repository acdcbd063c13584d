use std::path::PathBuf;

use survnet::presets::{example1, nonconvex_model};
use survnet::scenario::parse_scenario;

fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn every_shipped_scenario_loads() {
    let mut count = 0;
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let spec = parse_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            spec.build().unwrap();
            count += 1;
        }
    }
    assert!(count >= 5);
}

#[test]
fn explicit_example1_matches_builtin() {
    let spec = parse_scenario(&scenarios_dir().join("example1.json")).unwrap();
    let file = spec.source.model().unwrap();
    let builtin = example1(0.5, 0.3, 0.3).unwrap();
    assert_eq!(file.nodes.keys().collect::<Vec<_>>(), builtin.nodes.keys().collect::<Vec<_>>());
    for (k, p) in &file.nodes {
        assert!(p.dist(builtin.nodes[k]) < 1e-12, "node {k}");
    }
    assert_eq!(file.routes, builtin.routes);
    assert_eq!(file.links.len(), builtin.links.len());
    for (a, b) in file.links.iter().zip(&builtin.links) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.endpoints, b.endpoints);
        assert_eq!(a.geometry.vertices().len(), b.geometry.vertices().len(), "link {}", a.id);
        for (p, q) in a.geometry.vertices().iter().zip(b.geometry.vertices()) {
            assert!(p.dist(*q) < 1e-12, "link {}", a.id);
        }
    }
}

#[test]
fn explicit_nonconvex_matches_builtin() {
    let spec = parse_scenario(&scenarios_dir().join("nonconvex.json")).unwrap();
    assert_eq!(spec.source.model().unwrap(), nonconvex_model().unwrap());
}
