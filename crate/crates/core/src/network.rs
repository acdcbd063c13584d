//! Cable-network model: nodes, polyline links with disaster-endurance
//! levels, declared s–t routes, and the two outer routes that enclose them.
//!
//! [`NetworkModel`] is the raw, possibly inconsistent description;
//! [`Network`] is a validated model recentered on the centroid of its area
//! of interest. Everything that depends on the model's invariants (inner
//! parts, almost-convexity, the equivalent single-route network, and
//! per-disaster destruction) lives on [`Network`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, distance_to_ring, point_in_ring, point_segment_distance,
    segment_crossing_params, signed_offset, ConvexRegion, DirectedLine, Geom, HullPolygon,
    Point2, Polyline, EPS,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: String,
    pub endpoints: (String, String),
    pub geometry: Polyline,
    /// Disaster-endurance level; destroyed by disasters of this level or higher.
    pub de_level: u32,
    pub protected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub nodes: BTreeMap<String, Point2>,
    pub links: Vec<Link>,
    pub s: String,
    pub t: String,
    /// Each route is a sequence of link ids forming an s→t path.
    pub routes: Vec<Vec<String>>,
    /// Indices into `routes` of the two outer routes. Required when there is
    /// more than one route.
    pub outer: Option<(usize, usize)>,
    pub omega: ConvexRegion,
}

/// One violated model invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic(pub String);

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! diag {
    ($out:expr, $($arg:tt)*) => {
        $out.push(Diagnostic(format!($($arg)*)))
    };
}

/// A route resolved into oriented geometry.
#[derive(Debug, Clone)]
struct RoutePath {
    /// (link index, traversed forward)
    links: Vec<(usize, bool)>,
    nodes: Vec<String>,
    polyline: Polyline,
}

impl NetworkModel {
    /// Checks every model invariant; an empty list means the model is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();

        for (id, p) in &self.nodes {
            if !p.is_finite() {
                diag!(out, "node '{id}' has non-finite coordinates");
            }
        }
        for (name, id) in [("s", &self.s), ("t", &self.t)] {
            if !self.nodes.contains_key(id) {
                diag!(out, "endpoint {name} refers to missing node '{id}'");
            }
        }
        if self.s == self.t {
            diag!(out, "s and t are the same node '{}'", self.s);
        }

        let mut seen = BTreeSet::new();
        for link in &self.links {
            if !seen.insert(link.id.as_str()) {
                diag!(out, "duplicate link id '{}'", link.id);
            }
            if link.de_level == 0 {
                diag!(out, "link '{}' has de_level 0; levels start at 1", link.id);
            }
            let (a, b) = &link.endpoints;
            if a == b {
                diag!(out, "link '{}' is a self-loop at node '{a}'", link.id);
            }
            match (self.nodes.get(a), self.nodes.get(b)) {
                (Some(&pa), Some(&pb)) => {
                    if link.geometry.first().dist(pa) > EPS || link.geometry.last().dist(pb) > EPS {
                        diag!(
                            out,
                            "link '{}' geometry does not start at '{a}' and end at '{b}'",
                            link.id
                        );
                    }
                }
                _ => diag!(out, "link '{}' refers to a missing node", link.id),
            }
            if let Some(p) = link
                .geometry
                .vertices()
                .iter()
                .find(|&&p| !self.omega.contains(p, EPS))
            {
                diag!(
                    out,
                    "link '{}' leaves the area of interest at ({}, {})",
                    link.id,
                    p.x,
                    p.y
                );
            }
        }
        if !out.is_empty() {
            return out;
        }

        let index = self.link_index();
        let mut paths = Vec::with_capacity(self.routes.len());
        if self.routes.is_empty() {
            diag!(out, "network declares no routes");
        }
        for (k, route) in self.routes.iter().enumerate() {
            match self.resolve_route(k, route, &index) {
                Ok(p) => paths.push(Some(p)),
                Err(d) => {
                    out.push(d);
                    paths.push(None);
                }
            }
        }

        if self.routes.len() >= 2 {
            match self.outer {
                None => diag!(out, "network has {} routes but no outer routes", self.routes.len()),
                Some((i, j)) if i == j || i >= self.routes.len() || j >= self.routes.len() => {
                    diag!(out, "outer route indices ({}, {}) are invalid", i + 1, j + 1)
                }
                Some((i, j)) => {
                    if let (Some(oi), Some(oj)) = (&paths[i], &paths[j]) {
                        self.check_outer_pair(i, j, oi, oj, &paths, &mut out);
                    }
                }
            }
        }
        out
    }

    fn link_index(&self) -> HashMap<&str, usize> {
        self.links
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.as_str(), i))
            .collect()
    }

    fn resolve_route(
        &self,
        k: usize,
        route: &[String],
        index: &HashMap<&str, usize>,
    ) -> std::result::Result<RoutePath, Diagnostic> {
        let num = k + 1;
        if route.is_empty() {
            return Err(Diagnostic(format!("route {num} is empty")));
        }
        let mut current = self.s.clone();
        let mut nodes = vec![current.clone()];
        let mut links = Vec::with_capacity(route.len());
        let mut pts: Vec<Point2> = Vec::new();
        for id in route {
            let Some(&li) = index.get(id.as_str()) else {
                return Err(Diagnostic(format!("route {num} uses unknown link '{id}'")));
            };
            let link = &self.links[li];
            let forward = if link.endpoints.0 == current {
                true
            } else if link.endpoints.1 == current {
                false
            } else {
                return Err(Diagnostic(format!(
                    "route {num} is broken: link '{id}' does not continue from node '{current}'"
                )));
            };
            current = if forward {
                link.endpoints.1.clone()
            } else {
                link.endpoints.0.clone()
            };
            if nodes.contains(&current) {
                return Err(Diagnostic(format!(
                    "route {num} revisits node '{current}'"
                )));
            }
            nodes.push(current.clone());
            links.push((li, forward));
            let g = if forward {
                link.geometry.clone()
            } else {
                link.geometry.reversed()
            };
            pts.extend_from_slice(g.vertices());
        }
        if current != self.t {
            return Err(Diagnostic(format!(
                "route {num} does not terminate at t ('{}'), it ends at '{current}'",
                self.t
            )));
        }
        let polyline = Polyline::from_points_dedup(pts)
            .map_err(|e| Diagnostic(format!("route {num} geometry: {e}")))?;
        Ok(RoutePath {
            links,
            nodes,
            polyline,
        })
    }

    fn check_outer_pair(
        &self,
        i: usize,
        j: usize,
        oi: &RoutePath,
        oj: &RoutePath,
        paths: &[Option<RoutePath>],
        out: &mut Vec<Diagnostic>,
    ) {
        let (ni, nj) = (i + 1, j + 1);
        for n in &oi.nodes[1..oi.nodes.len() - 1] {
            if oj.nodes.contains(n) {
                diag!(out, "outer routes {ni} and {nj} share node '{n}'");
            }
        }
        let (s, t) = (self.nodes[&self.s], self.nodes[&self.t]);
        'outer: for (a, b) in oi.polyline.segments() {
            for (c, d) in oj.polyline.segments() {
                for u in segment_crossing_params(a, b, c, d) {
                    let x = a.lerp(b, u);
                    if x.dist(s) > EPS && x.dist(t) > EPS {
                        diag!(
                            out,
                            "outer routes {ni} and {nj} intersect at ({:.6}, {:.6})",
                            x.x,
                            x.y
                        );
                        break 'outer;
                    }
                }
            }
        }

        let mut ring: Vec<Point2> = oi.polyline.vertices().to_vec();
        ring.extend(oj.polyline.vertices().iter().rev().skip(1));
        ring.pop();
        for (k, p) in paths.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let Some(p) = p else { continue };
            let mut probes: Vec<Point2> = p.polyline.vertices().to_vec();
            probes.extend(p.polyline.segments().map(|(a, b)| a.lerp(b, 0.5)));
            if let Some(q) = probes
                .iter()
                .find(|&&q| !point_in_ring(q, &ring) && distance_to_ring(q, &ring) > EPS)
            {
                diag!(
                    out,
                    "route {} leaves the region enclosed by outer routes {ni} and {nj} at ({:.6}, {:.6})",
                    k + 1,
                    q.x,
                    q.y
                );
            }
        }
    }

    pub fn translated(&self, by: Point2) -> NetworkModel {
        NetworkModel {
            nodes: self.nodes.iter().map(|(k, &p)| (k.clone(), p + by)).collect(),
            links: self
                .links
                .iter()
                .map(|l| Link {
                    geometry: l.geometry.translated(by),
                    ..l.clone()
                })
                .collect(),
            omega: self.omega.translated(by),
            ..self.clone()
        }
    }
}

/// A maximal piece of an outer route lying strictly inside the region
/// bounded by the other outer route and the chord `l(t, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerPart {
    /// 1 or 2: which outer route the piece belongs to.
    pub route_index: usize,
    pub piece: Polyline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    Inside,
    Boundary,
    Outside,
}

/// A validated network in a frame centered on its area of interest.
#[derive(Debug, Clone)]
pub struct Network {
    model: NetworkModel,
    offset: Point2,
    link_index: HashMap<String, usize>,
    link_nodes: Vec<(usize, usize)>,
    link_hulls: Vec<Vec<Point2>>,
    node_count: usize,
    s_node: usize,
    t_node: usize,
    routes: Vec<RoutePath>,
}

impl Network {
    /// Recenters the model on the centroid of its area of interest and
    /// validates it.
    pub fn new(model: NetworkModel) -> Result<Network> {
        let offset = -model.omega.centroid();
        let model = model.translated(offset);
        let diags = model.validate();
        if !diags.is_empty() {
            return Err(Error::InvalidNetwork(diags));
        }
        let index = model.link_index();
        let routes = model
            .routes
            .iter()
            .enumerate()
            .map(|(k, r)| model.resolve_route(k, r, &index).expect("validated"))
            .collect();
        let node_ids: HashMap<&str, usize> = model
            .nodes
            .keys()
            .enumerate()
            .map(|(i, k)| (k.as_str(), i))
            .collect();
        let link_nodes = model
            .links
            .iter()
            .map(|l| (node_ids[l.endpoints.0.as_str()], node_ids[l.endpoints.1.as_str()]))
            .collect();
        let link_hulls = model
            .links
            .iter()
            .map(|l| {
                convex_hull(l.geometry.vertices())
                    .expect("polyline is non-empty")
                    .vertices()
                    .to_vec()
            })
            .collect();
        Ok(Network {
            link_index: model
                .links
                .iter()
                .enumerate()
                .map(|(i, l)| (l.id.clone(), i))
                .collect(),
            link_nodes,
            link_hulls,
            node_count: model.nodes.len(),
            s_node: node_ids[model.s.as_str()],
            t_node: node_ids[model.t.as_str()],
            routes,
            offset,
            model,
        })
    }

    pub fn model(&self) -> &NetworkModel {
        &self.model
    }

    /// Translation applied to the input coordinates.
    pub fn offset(&self) -> Point2 {
        self.offset
    }

    pub fn omega(&self) -> &ConvexRegion {
        &self.model.omega
    }

    pub fn links(&self) -> &[Link] {
        &self.model.links
    }

    pub fn link_position(&self, id: &str) -> Option<usize> {
        self.link_index.get(id).copied()
    }

    pub fn s_point(&self) -> Point2 {
        self.model.nodes[&self.model.s]
    }

    pub fn t_point(&self) -> Point2 {
        self.model.nodes[&self.model.t]
    }

    /// The chord `l(s, t)`.
    pub fn chord(&self) -> Polyline {
        Polyline::segment(self.s_point(), self.t_point()).expect("s and t are distinct")
    }

    pub fn route_count(&self) -> usize {
        self.routes.len()
    }

    /// Oriented s→t geometry of route `k` (0-based).
    pub fn route_polyline(&self, k: usize) -> &Polyline {
        &self.routes[k].polyline
    }

    /// Link ids of route `k` (0-based) in traversal order.
    pub fn route_links(&self, k: usize) -> impl Iterator<Item = &str> + '_ {
        self.routes[k]
            .links
            .iter()
            .map(|&(li, _)| self.model.links[li].id.as_str())
    }

    fn outer_pair(&self) -> Result<(usize, usize)> {
        self.model.outer.ok_or_else(|| {
            Error::Precondition("the network has a single route and no outer routes".into())
        })
    }

    /// Outer route `i` (1 or 2) and the other one, as route indices.
    fn outer_and_other(&self, i: usize) -> Result<(usize, usize)> {
        let (o1, o2) = self.outer_pair()?;
        match i {
            1 => Ok((o1, o2)),
            2 => Ok((o2, o1)),
            _ => Err(Error::validation(format!("outer route index must be 1 or 2, got {i}"))),
        }
    }

    pub fn outer_polylines(&self) -> Result<(&Polyline, &Polyline)> {
        let (o1, o2) = self.outer_pair()?;
        Ok((&self.routes[o1].polyline, &self.routes[o2].polyline))
    }

    /// Splits outer route `i` at every crossing with the closed curve formed
    /// by the other outer route and `l(t, s)`, and places each piece by its
    /// midpoint.
    fn classify_outer(&self, i: usize) -> Result<Vec<(Point2, Point2, Placement)>> {
        let (own, other) = self.outer_and_other(i)?;
        let ring: Vec<Point2> = self.routes[other].polyline.vertices().to_vec();
        let n = ring.len();
        let boundary: Vec<(Point2, Point2)> = (0..n).map(|k| (ring[k], ring[(k + 1) % n])).collect();

        let mut out = Vec::new();
        for (a, b) in self.routes[own].polyline.segments() {
            let mut ts = vec![0.0, 1.0];
            for &(c, d) in &boundary {
                ts.extend(segment_crossing_params(a, b, c, d));
            }
            ts.sort_by(f64::total_cmp);
            ts.dedup_by(|x, y| (*x - *y).abs() * a.dist(b) <= EPS);
            for w in ts.windows(2) {
                let (p, q) = (a.lerp(b, w[0]), a.lerp(b, w[1]));
                let mid = p.lerp(q, 0.5);
                let placement = if distance_to_ring(mid, &ring) <= EPS {
                    Placement::Boundary
                } else if point_in_ring(mid, &ring) {
                    Placement::Inside
                } else {
                    Placement::Outside
                };
                out.push((p, q, placement));
            }
        }
        Ok(out)
    }

    /// Inner parts of outer route `i` (1 or 2).
    pub fn inner_parts(&self, i: usize) -> Result<Vec<InnerPart>> {
        let pieces = self.classify_outer(i)?;
        let mut parts = Vec::new();
        let mut run: Vec<Point2> = Vec::new();
        let mut flush = |run: &mut Vec<Point2>| {
            if run.len() >= 2 {
                if let Ok(piece) = Polyline::from_points_dedup(run.drain(..)) {
                    parts.push(InnerPart {
                        route_index: i,
                        piece,
                    });
                }
            }
            run.clear();
        };
        for (p, q, placement) in pieces {
            if placement == Placement::Inside {
                if run.is_empty() {
                    run.push(p);
                }
                run.push(q);
            } else {
                flush(&mut run);
            }
        }
        flush(&mut run);
        Ok(parts)
    }

    /// Whether outer route `i` consists only of inner parts and pieces of
    /// `l(s, t)`.
    pub fn is_inner_plus_chord(&self, i: usize) -> Result<bool> {
        let (s, t) = (self.s_point(), self.t_point());
        Ok(self.classify_outer(i)?.into_iter().all(|(p, q, placement)| {
            placement == Placement::Inside
                || point_segment_distance(p.lerp(q, 0.5), s, t) <= EPS
                    && point_segment_distance(p, s, t) <= EPS
                    && point_segment_distance(q, s, t) <= EPS
        }))
    }

    /// Hull of the two outer routes.
    pub fn outer_hull(&self) -> Result<HullPolygon> {
        let (o1, o2) = self.outer_polylines()?;
        let pts: Vec<Point2> = o1.vertices().iter().chain(o2.vertices()).copied().collect();
        convex_hull(&pts)
    }

    /// Both s and t lie within `eps` of the boundary of the hull of the
    /// outer routes.
    pub fn is_almost_convex(&self, eps: f64) -> Result<bool> {
        let hull = self.outer_hull()?;
        Ok(hull.distance_to_boundary(self.s_point()) <= eps
            && hull.distance_to_boundary(self.t_point()) <= eps)
    }

    /// Default tolerance for [`Network::is_almost_convex`].
    pub fn almost_convex_eps(&self) -> f64 {
        1e-6 * self.model.omega.perimeter()
    }

    /// The single-route network built from the inner parts of both outer
    /// routes joined by straight pieces, ordered along `l(s, t)`.
    pub fn equivalent_single_route(&self) -> Result<Network> {
        if self.routes.len() < 2 {
            return Err(Error::Precondition(
                "equivalent single route needs a multi-route network".into(),
            ));
        }
        if !self.is_almost_convex(self.almost_convex_eps())? {
            return Err(Error::Precondition("network is not almost convex".into()));
        }
        let (s, t) = (self.s_point(), self.t_point());
        let dir = t - s;
        let proj = |p: Point2| (p - s).dot(dir);

        let mut pieces: Vec<Polyline> = Vec::new();
        for i in [1, 2] {
            for part in self.inner_parts(i)? {
                let piece = if proj(part.piece.first()) <= proj(part.piece.last()) {
                    part.piece
                } else {
                    part.piece.reversed()
                };
                pieces.push(piece);
            }
        }
        pieces.sort_by(|a, b| proj(a.first()).total_cmp(&proj(b.first())));

        let s_id = self.model.s.clone();
        let t_id = self.model.t.clone();
        let mut nodes = BTreeMap::from([(s_id.clone(), s), (t_id.clone(), t)]);
        let mut links = Vec::new();
        let mut cur = (s_id.clone(), s);
        let mut fresh = 0usize;
        let mut node_at = |p: Point2, nodes: &mut BTreeMap<String, Point2>| -> (String, Point2) {
            if p.dist(s) <= EPS {
                return (s_id.clone(), s);
            }
            if p.dist(t) <= EPS {
                return (t_id.clone(), t);
            }
            fresh += 1;
            let id = format!("n0_{fresh}");
            nodes.insert(id.clone(), p);
            (id, p)
        };
        let mut push_link = |from: &(String, Point2), to: &(String, Point2), geometry: Polyline, kind: &str| {
            let id = format!("{kind}{}", links.len() + 1);
            links.push(Link {
                id,
                endpoints: (from.0.clone(), to.0.clone()),
                geometry,
                de_level: 1,
                protected: false,
            });
        };

        for piece in pieces {
            let start = node_at(piece.first(), &mut nodes);
            if start.0 != cur.0 {
                push_link(&cur, &start, Polyline::segment(cur.1, start.1)?, "seg");
            }
            let end = node_at(piece.last(), &mut nodes);
            // snap the piece ends onto the chosen node coordinates
            let mut v = piece.vertices().to_vec();
            let last = v.len() - 1;
            v[0] = start.1;
            v[last] = end.1;
            push_link(&start, &end, Polyline::from_points_dedup(v)?, "inner");
            cur = end;
        }
        if cur.0 != t_id {
            let end = (t_id.clone(), t);
            push_link(&cur, &end, Polyline::segment(cur.1, t)?, "seg");
        }

        let route = links.iter().map(|l| l.id.clone()).collect();
        let model = NetworkModel {
            nodes,
            links,
            s: self.model.s.clone(),
            t: self.model.t.clone(),
            routes: vec![route],
            outer: None,
            omega: self.model.omega.clone(),
        };
        Network::new(model)
    }

    /// Whether link `li` meets the closed disaster half-plane.
    pub(crate) fn link_meets(&self, li: usize, line: &DirectedLine) -> bool {
        let n = line.normal();
        let hull = &self.link_hulls[li];
        match line.side {
            crate::geometry::Side::Far => hull.iter().any(|p| p.dot(n) >= line.rho),
            crate::geometry::Side::Near => hull.iter().any(|p| p.dot(n) <= line.rho),
        }
    }

    /// Whether s and t are connected by links whose mask entry is false.
    pub fn connected_with_mask(&self, destroyed: &[bool]) -> bool {
        let mut dsu = DisjointSets::new(self.node_count);
        for (li, &(a, b)) in self.link_nodes.iter().enumerate() {
            if !destroyed[li] {
                dsu.union(a, b);
            }
        }
        dsu.find(self.s_node) == dsu.find(self.t_node)
    }

    /// Whether s and t remain connected after removing the named links.
    pub fn is_connected_after(&self, destroyed: &BTreeSet<String>) -> Result<bool> {
        let mut mask = vec![false; self.model.links.len()];
        for id in destroyed {
            let li = self
                .link_position(id)
                .ok_or_else(|| Error::UnknownLink(id.clone()))?;
            mask[li] = true;
        }
        Ok(self.connected_with_mask(&mask))
    }

    /// Links of the two outer routes, or of every route when there is only
    /// one.
    fn protectable_links(&self) -> BTreeSet<usize> {
        let ks: Vec<usize> = match self.model.outer {
            Some((a, b)) => vec![a, b],
            None => (0..self.routes.len()).collect(),
        };
        ks.into_iter()
            .flat_map(|k| self.routes[k].links.iter().map(|&(li, _)| li))
            .collect()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// How protection is placed over the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arrangement {
    /// Every link is vulnerable wherever it meets the disaster.
    Weakest,
    /// The connected set of links `gamma` on the outer routes is immune.
    PartialProtect { gamma: BTreeSet<String> },
    /// Links with `de_level <= disaster_level` that are not flagged
    /// `protected` are vulnerable.
    Leveled,
}

impl Arrangement {
    pub fn name(&self) -> &'static str {
        match self {
            Arrangement::Weakest => "weakest",
            Arrangement::PartialProtect { .. } => "partial_protect",
            Arrangement::Leveled => "leveled",
        }
    }

    pub fn protect<I, S>(ids: I) -> Arrangement
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Arrangement::PartialProtect {
            gamma: ids.into_iter().map(Into::into).collect(),
        }
    }
}

/// A network, a protection arrangement, and a disaster level.
#[derive(Debug, Clone)]
pub struct Scenario {
    network: Network,
    arrangement: Arrangement,
    disaster_level: u32,
    vulnerable: Vec<bool>,
}

impl Scenario {
    pub fn new(network: Network, arrangement: Arrangement, disaster_level: u32) -> Result<Scenario> {
        if disaster_level == 0 {
            return Err(Error::validation("disaster level must be at least 1"));
        }
        let links = network.links();
        let vulnerable: Vec<bool> = match &arrangement {
            Arrangement::Weakest => vec![true; links.len()],
            Arrangement::PartialProtect { gamma } => {
                check_gamma(&network, gamma)?;
                links.iter().map(|l| !gamma.contains(&l.id)).collect()
            }
            Arrangement::Leveled => links
                .iter()
                .map(|l| !l.protected && l.de_level <= disaster_level)
                .collect(),
        };
        Ok(Scenario {
            network,
            arrangement,
            disaster_level,
            vulnerable,
        })
    }

    pub fn weakest(network: Network) -> Scenario {
        Scenario::new(network, Arrangement::Weakest, 1).expect("level 1 is valid")
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn disaster_level(&self) -> u32 {
        self.disaster_level
    }

    /// Per-link vulnerability, indexed like [`Network::links`].
    pub fn vulnerable(&self) -> &[bool] {
        &self.vulnerable
    }

    /// Fills `mask` with the links destroyed by the disaster behind `line`.
    pub fn destroyed_mask(&self, line: &DirectedLine, mask: &mut Vec<bool>) {
        mask.clear();
        mask.extend(
            self.vulnerable
                .iter()
                .enumerate()
                .map(|(li, &v)| v && self.network.link_meets(li, line)),
        );
    }

    pub fn destroyed_links(&self, line: &DirectedLine) -> BTreeSet<String> {
        let mut mask = Vec::new();
        self.destroyed_mask(line, &mut mask);
        self.network
            .links()
            .iter()
            .zip(mask)
            .filter(|(_, d)| *d)
            .map(|(l, _)| l.id.clone())
            .collect()
    }

    /// Whether s and t are disconnected by the disaster behind `line`.
    pub fn disconnects(&self, line: &DirectedLine, mask: &mut Vec<bool>) -> bool {
        self.destroyed_mask(line, mask);
        !self.network.connected_with_mask(mask)
    }
}

fn check_gamma(network: &Network, gamma: &BTreeSet<String>) -> Result<()> {
    if gamma.is_empty() {
        return Err(Error::validation("protected set is empty"));
    }
    let mut idx = Vec::with_capacity(gamma.len());
    for id in gamma {
        idx.push(
            network
                .link_position(id)
                .ok_or_else(|| Error::UnknownLink(id.clone()))?,
        );
    }
    let allowed = network.protectable_links();
    if let Some(&li) = idx.iter().find(|li| !allowed.contains(li)) {
        return Err(Error::validation(format!(
            "protected link '{}' is not on an outer route",
            network.links()[li].id
        )));
    }
    // connectivity of gamma through shared nodes
    let mut dsu = DisjointSets::new(network.node_count);
    for &li in &idx {
        let (a, b) = network.link_nodes[li];
        dsu.union(a, b);
    }
    let root = dsu.find(network.link_nodes[idx[0]].0);
    if idx.iter().any(|&li| dsu.find(network.link_nodes[li].0) != root) {
        return Err(Error::validation("protected set is not a continuous part"));
    }
    Ok(())
}

/// All link geometry of the network, for hull measures.
pub fn network_geoms(network: &Network) -> Vec<Geom> {
    network
        .links()
        .iter()
        .map(|l| Geom::Polyline(l.geometry.clone()))
        .collect()
}

/// Signed offsets of s and t, used by tests that construct lines through
/// particular parts of a network.
pub fn endpoint_offsets(network: &Network, line: &DirectedLine) -> (f64, f64) {
    (
        signed_offset(line, network.s_point()),
        signed_offset(line, network.t_point()),
    )
}
