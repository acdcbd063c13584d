//! JSON scenario documents and their conversion into validated scenarios.
//!
//! A document either spells out a network (`network`) or names a built-in
//! parametric network (`template`). Arcs are given symbolically and
//! discretized on load, so the closed forms and the simulator see the same
//! polylines. The format is described in `docs/scenario-format.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{default_sagitta, discretize_arc, ConvexRegion, Point2, Polyline};
use crate::network::{Arrangement, Link, Network, NetworkModel, Scenario};
use crate::presets;

pub const SCHEMA_VERSION: u32 = 1;

/// Arc endpoints within this distance of their nodes are snapped onto them.
const ARC_SNAP: f64 = 1e-6;

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<TemplateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkSpec>,
    #[serde(default)]
    pub arrangement: ArrangementSpec,
    #[serde(default = "one")]
    pub disaster_level: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum TemplateSpec {
    Example1 { a: f64, b: f64, c: f64 },
    Nonconvex,
    Realistic { s: String, t: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub omega: OmegaSpec,
    pub nodes: Vec<NodeSpec>,
    pub links: Vec<LinkSpec>,
    pub s: String,
    pub t: String,
    pub routes: Vec<Vec<String>>,
    /// 1-based indices into `routes`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaSpec {
    Disk { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    pub at: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub geometry: GeometrySpec,
    #[serde(default = "one")]
    pub de_level: u32,
    #[serde(default)]
    pub protected: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    #[default]
    Straight,
    /// Interior vertices; the endpoints come from the nodes.
    Polyline { via: Vec<[f64; 2]> },
    Arc(ArcSpec),
    /// Parts chained from `from` to `to`; gaps are closed with straight
    /// segments.
    Path { parts: Vec<PartSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub center: [f64; 2],
    pub radius: f64,
    /// Radians; the arc runs counter-clockwise when `end_angle > start_angle`.
    pub start_angle: f64,
    pub end_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PartSpec {
    Line { to: [f64; 2] },
    Arc(ArcSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArrangementSpec {
    #[default]
    Weakest,
    /// Without `gamma`, the links flagged `protected` form the protected part.
    PartialProtect {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<Vec<String>>,
    },
    Leveled,
}

fn pt(a: [f64; 2]) -> Point2 {
    Point2::new(a[0], a[1])
}

impl ArcSpec {
    fn polyline(&self) -> Result<Polyline> {
        discretize_arc(
            pt(self.center),
            self.radius,
            self.start_angle,
            self.end_angle,
            default_sagitta(self.radius),
        )
    }
}

impl OmegaSpec {
    pub fn region(&self) -> Result<ConvexRegion> {
        match self {
            OmegaSpec::Disk { center, radius } => ConvexRegion::disk(pt(*center), *radius),
            OmegaSpec::Polygon { vertices } => {
                ConvexRegion::polygon(vertices.iter().copied().map(pt).collect())
            }
        }
    }
}

impl LinkSpec {
    fn polyline(&self, from: Point2, to: Point2) -> Result<Polyline> {
        let err = |e: Error| Error::validation(format!("link '{}': {e}", self.id));
        match &self.geometry {
            GeometrySpec::Straight => Polyline::segment(from, to).map_err(err),
            GeometrySpec::Polyline { via } => {
                let pts = std::iter::once(from)
                    .chain(via.iter().copied().map(pt))
                    .chain(std::iter::once(to));
                Polyline::new(pts.collect()).map_err(err)
            }
            GeometrySpec::Arc(arc) => {
                let mut v = arc.polyline().map_err(err)?.vertices().to_vec();
                let last = v.len() - 1;
                if v[0].dist(from) > ARC_SNAP || v[last].dist(to) > ARC_SNAP {
                    return Err(Error::validation(format!(
                        "link '{}': arc does not run from node '{}' to node '{}'",
                        self.id, self.from, self.to
                    )));
                }
                v[0] = from;
                v[last] = to;
                Polyline::new(v).map_err(err)
            }
            GeometrySpec::Path { parts } => {
                let mut pts = vec![from];
                for part in parts {
                    match part {
                        PartSpec::Line { to } => pts.push(pt(*to)),
                        PartSpec::Arc(arc) => {
                            pts.extend_from_slice(arc.polyline().map_err(err)?.vertices())
                        }
                    }
                }
                pts.push(to);
                // absorb rounding noise at the joints
                let mut out: Vec<Point2> = Vec::with_capacity(pts.len());
                for p in pts {
                    let keep_first = out.len() == 1;
                    match out.last_mut() {
                        Some(q) if q.dist(p) <= ARC_SNAP => {
                            if !keep_first {
                                *q = p;
                            }
                        }
                        _ => out.push(p),
                    }
                }
                *out.last_mut().expect("non-empty") = to;
                Polyline::new(out).map_err(err)
            }
        }
    }
}

impl NetworkSpec {
    pub fn to_model(&self) -> Result<NetworkModel> {
        let mut nodes = BTreeMap::new();
        for n in &self.nodes {
            if nodes.insert(n.id.clone(), pt(n.at)).is_some() {
                return Err(Error::validation(format!("duplicate node id '{}'", n.id)));
            }
        }
        let mut links = Vec::with_capacity(self.links.len());
        for l in &self.links {
            let find = |id: &str| {
                nodes.get(id).copied().ok_or_else(|| {
                    Error::validation(format!("link '{}' refers to missing node '{id}'", l.id))
                })
            };
            let (a, b) = (find(&l.from)?, find(&l.to)?);
            links.push(Link {
                id: l.id.clone(),
                endpoints: (l.from.clone(), l.to.clone()),
                geometry: l.polyline(a, b)?,
                de_level: l.de_level,
                protected: l.protected,
            });
        }
        let outer = match self.outer {
            None => None,
            Some([i, j]) if i >= 1 && j >= 1 => Some((i - 1, j - 1)),
            Some([i, j]) => {
                return Err(Error::validation(format!(
                    "outer route indices are 1-based, got [{i}, {j}]"
                )))
            }
        };
        Ok(NetworkModel {
            nodes,
            links,
            s: self.s.clone(),
            t: self.t.clone(),
            routes: self.routes.clone(),
            outer,
            omega: self.omega.region()?,
        })
    }
}

impl TemplateSpec {
    pub fn network_spec(&self) -> Result<NetworkSpec> {
        match self {
            TemplateSpec::Example1 { a, b, c } => presets::example1_spec(*a, *b, *c),
            TemplateSpec::Nonconvex => Ok(presets::nonconvex_spec()),
            TemplateSpec::Realistic { s, t } => presets::realistic_spec(s, t),
        }
    }
}

/// Where a scenario's network comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Template(TemplateSpec),
    Model(NetworkModel),
}

impl Source {
    pub fn model(&self) -> Result<NetworkModel> {
        match self {
            Source::Template(t) => t.network_spec()?.to_model(),
            Source::Model(m) => Ok(m.clone()),
        }
    }
}

/// A loaded scenario document that can be re-parameterized and built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: String,
    pub source: Source,
    pub arrangement: ArrangementSpec,
    pub disaster_level: u32,
}

impl ScenarioSpec {
    pub fn from_file(file: ScenarioFile) -> Result<ScenarioSpec> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let source = match (file.template, file.network) {
            (Some(t), None) => Source::Template(t),
            (None, Some(n)) => Source::Model(n.to_model()?),
            _ => {
                return Err(Error::validation(
                    "exactly one of 'template' and 'network' must be given",
                ))
            }
        };
        Ok(ScenarioSpec {
            id: file.id,
            source,
            arrangement: file.arrangement,
            disaster_level: file.disaster_level,
        })
    }

    pub fn build(&self) -> Result<Scenario> {
        let model = self.source.model()?;
        let arrangement = match &self.arrangement {
            ArrangementSpec::Weakest => Arrangement::Weakest,
            ArrangementSpec::Leveled => Arrangement::Leveled,
            ArrangementSpec::PartialProtect { gamma: Some(g) } => Arrangement::protect(g.clone()),
            ArrangementSpec::PartialProtect { gamma: None } => Arrangement::PartialProtect {
                gamma: model
                    .links
                    .iter()
                    .filter(|l| l.protected)
                    .map(|l| l.id.clone())
                    .collect::<BTreeSet<_>>(),
            },
        };
        Scenario::new(Network::new(model)?, arrangement, self.disaster_level)
    }

    /// A copy with one sweepable parameter set: `a`, `b`, `c` (example-1
    /// template only), `disaster_level`, or `de_level.<link id>`.
    pub fn with_param(&self, name: &str, value: f64) -> Result<ScenarioSpec> {
        let mut out = self.clone();
        let level = || -> Result<u32> {
            if value.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&value) {
                return Err(Error::validation(format!(
                    "{name} must be a positive integer, got {value}"
                )));
            }
            Ok(value as u32)
        };
        match name {
            "a" | "b" | "c" => {
                let Source::Template(TemplateSpec::Example1 { a, b, c }) = &mut out.source else {
                    return Err(Error::validation(format!(
                        "parameter '{name}' needs the example1 template"
                    )));
                };
                *match name {
                    "a" => a,
                    "b" => b,
                    _ => c,
                } = value;
            }
            "disaster_level" => out.disaster_level = level()?,
            _ => {
                let Some(link) = name.strip_prefix("de_level.") else {
                    return Err(Error::validation(format!("unknown sweep parameter '{name}'")));
                };
                let mut model = out.source.model()?;
                let l = model
                    .links
                    .iter_mut()
                    .find(|l| l.id == link)
                    .ok_or_else(|| Error::UnknownLink(link.to_string()))?;
                l.de_level = level()?;
                out.source = Source::Model(model);
            }
        }
        Ok(out)
    }
}

pub fn parse_scenario_str(text: &str, path: &Path) -> Result<ScenarioSpec> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ScenarioSpec::from_file(file)
}

/// Reads and validates a scenario document.
pub fn parse_scenario(path: &Path) -> Result<ScenarioSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let spec = parse_scenario_str(&text, path)?;
    spec.build()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn parse(text: &str) -> Result<ScenarioSpec> {
        parse_scenario_str(text, Path::new("test.json"))
    }

    #[test]
    fn template_round_trip() {
        let spec = parse(
            r#"{"schema_version": 1, "id": "e1",
                "template": {"name": "example1", "a": 0.5, "b": 0.3, "c": 0.3}}"#,
        )
        .unwrap();
        assert_eq!(spec.disaster_level, 1);
        assert_eq!(spec.arrangement, ArrangementSpec::Weakest);
        let sc = spec.build().unwrap();
        assert_eq!(sc.network().links().len(), 5);
    }

    #[test]
    fn explicit_network_matches_template() {
        let net = presets::example1_spec(0.5, 0.3, 0.3).unwrap();
        let file = ScenarioFile {
            schema_version: 1,
            id: "x".into(),
            template: None,
            network: Some(net),
            arrangement: ArrangementSpec::Weakest,
            disaster_level: 1,
        };
        let text = serde_json::to_string_pretty(&file).unwrap();
        let spec = parse(&text).unwrap();
        assert_eq!(spec.source.model().unwrap(), presets::example1(0.5, 0.3, 0.3).unwrap());
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = parse(r#"{"schema_version": 1, "id": "e", "colour": 3}"#).unwrap_err();
        match e {
            Error::Parse { line, column, message, .. } => {
                assert_eq!(line, 1);
                assert!(column > 0);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_t_is_named() {
        let mut net = presets::example1_spec(0.5, 0.3, 0.3).unwrap();
        net.t = "nowhere".into();
        let spec = ScenarioSpec {
            id: "x".into(),
            source: Source::Model(net.to_model().unwrap()),
            arrangement: ArrangementSpec::Weakest,
            disaster_level: 1,
        };
        let msg = spec.build().unwrap_err().to_string();
        assert!(msg.contains("endpoint t") && msg.contains("nowhere"), "{msg}");
    }

    #[test]
    fn de_level_zero_rejected() {
        let mut net = presets::nonconvex_spec();
        net.links[0].de_level = 0;
        let spec = ScenarioSpec {
            id: "x".into(),
            source: Source::Model(net.to_model().unwrap()),
            arrangement: ArrangementSpec::Leveled,
            disaster_level: 1,
        };
        assert!(matches!(spec.build(), Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn flags_define_default_gamma() {
        let spec = parse(
            r#"{"schema_version": 1, "id": "n", "template": {"name": "nonconvex"},
                "arrangement": {"kind": "partial_protect"}}"#,
        )
        .unwrap();
        let sc = spec.build().unwrap();
        let Arrangement::PartialProtect { gamma } = sc.arrangement() else {
            panic!()
        };
        let expected: BTreeSet<String> = presets::NONCONVEX_GAMMA.iter().map(|s| s.to_string()).collect();
        assert_eq!(gamma, &expected);
    }

    #[test]
    fn sweep_parameters() {
        let spec = parse(
            r#"{"schema_version": 1, "id": "e1",
                "template": {"name": "example1", "a": 0.5, "b": 0.3, "c": 0.3}}"#,
        )
        .unwrap();
        let s2 = spec.with_param("b", 0.7).unwrap();
        assert_eq!(
            s2.source,
            Source::Template(TemplateSpec::Example1 { a: 0.5, b: 0.7, c: 0.3 })
        );
        assert!(spec.with_param("disaster_level", 1.5).is_err());
        assert_eq!(spec.with_param("disaster_level", 3.0).unwrap().disaster_level, 3);
        let s3 = spec.with_param("de_level.C", 2.0).unwrap();
        let m = s3.source.model().unwrap();
        assert_eq!(m.links.iter().find(|l| l.id == "C").unwrap().de_level, 2);
        assert!(matches!(spec.with_param("de_level.zz", 2.0), Err(Error::UnknownLink(_))));
        assert!(spec.with_param("q", 1.0).is_err());
    }

    #[test]
    fn arc_must_meet_nodes() {
        let text = r#"{"schema_version": 1, "id": "arc", "network": {
            "omega": {"type": "disk", "center": [0, 0], "radius": 2},
            "nodes": [{"id": "s", "at": [-1, 0]}, {"id": "t", "at": [1, 0]}],
            "links": [{"id": "h", "from": "s", "to": "t",
                       "geometry": {"type": "arc", "center": [0, 0], "radius": 1,
                                    "start_angle": 0, "end_angle": 3.141592653589793}}],
            "s": "s", "t": "t", "routes": [["h"]]}}"#;
        let msg = parse(text).unwrap_err().to_string();
        assert!(msg.contains("arc does not run"), "{msg}");
        let ok = text.replace("\"start_angle\": 0, \"end_angle\": 3.141592653589793", "\"start_angle\": 3.141592653589793, \"end_angle\": 0");
        let sc = parse(&ok).unwrap().build().unwrap();
        assert!((sc.network().links()[0].geometry.length() - std::f64::consts::PI).abs() < 1e-3);
    }
}
