//! Planar primitives: points, polylines, convex hulls and their perimeters,
//! support functions, and the line/half-plane predicates used by the
//! closed-form probabilities and the simulator.
//!
//! Lengths are in arbitrary model units (km in the shipped scenarios). All
//! coincidence and collinearity predicates use the absolute tolerance
//! [`EPS`].

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric tolerance for point coincidence and collinearity.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point2::new(c, s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle `(o, a, b)`; positive for a left turn.
pub fn orient(o: Point2, a: Point2, b: Point2) -> f64 {
    (a - o).cross(b - o)
}

/// An open polygonal chain with at least two vertices and no repeated
/// consecutive vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::validation(format!(
                "polyline needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::validation(format!(
                "non-finite polyline vertex ({}, {})",
                p.x, p.y
            )));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].dist(w[1]) <= EPS {
                return Err(Error::validation(format!(
                    "polyline vertices {} and {} coincide",
                    i,
                    i + 1
                )));
            }
        }
        Ok(Polyline { vertices })
    }

    /// Builds a polyline after dropping vertices that coincide with their
    /// predecessor.
    pub fn from_points_dedup(points: impl IntoIterator<Item = Point2>) -> Result<Self> {
        let mut out: Vec<Point2> = Vec::new();
        for p in points {
            if out.last().is_none_or(|q| q.dist(p) > EPS) {
                out.push(p);
            }
        }
        Polyline::new(out)
    }

    pub fn segment(a: Point2, b: Point2) -> Result<Self> {
        Polyline::new(vec![a, b])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn first(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn last(&self) -> Point2 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    pub fn translated(&self, by: Point2) -> Polyline {
        Polyline {
            vertices: self.vertices.iter().map(|&p| p + by).collect(),
        }
    }
}

/// A point or a polyline; the argument type of hull-perimeter measures.
#[derive(Debug, Clone, PartialEq)]
pub enum Geom {
    Point(Point2),
    Polyline(Polyline),
}

impl Geom {
    pub fn vertices(&self) -> &[Point2] {
        match self {
            Geom::Point(p) => std::slice::from_ref(p),
            Geom::Polyline(l) => l.vertices(),
        }
    }
}

impl From<Point2> for Geom {
    fn from(p: Point2) -> Self {
        Geom::Point(p)
    }
}

impl From<Polyline> for Geom {
    fn from(l: Polyline) -> Self {
        Geom::Polyline(l)
    }
}

/// Which closed half-plane of a line is the disaster area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `{p : p·n >= rho}`, the side away from the origin.
    Far,
    /// `{p : p·n <= rho}`, the side containing the origin.
    Near,
}

/// An undirected line `p·(cos θ, sin θ) = ρ` together with the side that is
/// destroyed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedLine {
    pub rho: f64,
    pub theta: f64,
    pub side: Side,
}

impl DirectedLine {
    /// Normalizes `theta` into `[-π, π)`. A negative `rho` is folded into the
    /// opposite normal, which also swaps the side.
    pub fn new(rho: f64, theta: f64, side: Side) -> Self {
        let (rho, theta, side) = if rho < 0.0 {
            let flipped = match side {
                Side::Far => Side::Near,
                Side::Near => Side::Far,
            };
            (-rho, theta + PI, flipped)
        } else {
            (rho, theta, side)
        };
        DirectedLine {
            rho,
            theta: normalize_angle(theta),
            side,
        }
    }

    pub fn normal(&self) -> Point2 {
        Point2::polar(self.theta)
    }
}

/// Maps an angle into `[-π, π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if t >= PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Signed distance of `p` into the disaster half-plane; `p` is destroyed iff
/// the result is `>= 0`.
pub fn signed_offset(line: &DirectedLine, p: Point2) -> f64 {
    let d = p.dot(line.normal()) - line.rho;
    match line.side {
        Side::Far => d,
        Side::Near => -d,
    }
}

/// Whether segment `ab` meets the closed disaster half-plane. Convexity of
/// the half-plane makes the endpoint test exact.
pub fn segment_meets_halfplane(a: Point2, b: Point2, line: &DirectedLine) -> bool {
    signed_offset(line, a).max(signed_offset(line, b)) >= 0.0
}

/// The area of interest: a disk or a convex polygon.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexRegion {
    Disk { center: Point2, radius: f64 },
    ConvexPolygon { vertices: Vec<Point2> },
}

impl ConvexRegion {
    pub fn disk(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::validation(format!(
                "disk needs a finite center and a positive radius, got r={radius}"
            )));
        }
        Ok(ConvexRegion::Disk { center, radius })
    }

    /// Accepts vertices in either orientation; collinear vertices are merged.
    /// Fails unless the merged polygon is strictly convex with positive area.
    pub fn polygon(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::validation("convex polygon needs at least 3 vertices"));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::validation("non-finite polygon vertex"));
        }
        let mut v = merge_ring(&vertices);
        if v.len() < 3 {
            return Err(Error::validation("convex polygon has zero area"));
        }
        if ring_signed_area(&v) < 0.0 {
            v.reverse();
        }
        let n = v.len();
        for i in 0..n {
            let (o, a, b) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
            if orient(o, a, b) <= 0.0 {
                return Err(Error::validation(format!(
                    "polygon is not convex at vertex ({}, {})",
                    a.x, a.y
                )));
            }
        }
        Ok(ConvexRegion::ConvexPolygon { vertices: v })
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            ConvexRegion::Disk { radius, .. } => 2.0 * PI * radius,
            ConvexRegion::ConvexPolygon { vertices } => ring_perimeter(vertices),
        }
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        match self {
            ConvexRegion::Disk { center, .. } => *center,
            ConvexRegion::ConvexPolygon { vertices } => {
                let n = vertices.len();
                let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                    let w = p.cross(q);
                    a2 += w;
                    cx += (p.x + q.x) * w;
                    cy += (p.y + q.y) * w;
                }
                Point2::new(cx / (3.0 * a2), cy / (3.0 * a2))
            }
        }
    }

    pub fn translated(&self, by: Point2) -> ConvexRegion {
        match self {
            ConvexRegion::Disk { center, radius } => ConvexRegion::Disk {
                center: *center + by,
                radius: *radius,
            },
            ConvexRegion::ConvexPolygon { vertices } => ConvexRegion::ConvexPolygon {
                vertices: vertices.iter().map(|&p| p + by).collect(),
            },
        }
    }

    /// The same region translated so that its centroid is the origin.
    pub fn recentered(&self) -> ConvexRegion {
        self.translated(-self.centroid())
    }

    /// Closed containment with tolerance `tol`.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        match self {
            ConvexRegion::Disk { center, radius } => p.dist(*center) <= radius + tol,
            ConvexRegion::ConvexPolygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    orient(a, b, p) / a.dist(b) >= -tol
                })
            }
        }
    }

    pub fn origin_is_interior(&self) -> bool {
        match self {
            ConvexRegion::Disk { center, radius } => center.norm() < *radius,
            ConvexRegion::ConvexPolygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| orient(vertices[i], vertices[(i + 1) % n], Point2::ORIGIN) > 0.0)
            }
        }
    }

    /// Support function without the interior-origin check.
    pub(crate) fn support_unchecked(&self, normal: Point2) -> f64 {
        match self {
            ConvexRegion::Disk { center, radius } => center.dot(normal) + radius,
            ConvexRegion::ConvexPolygon { vertices } => vertices
                .iter()
                .map(|p| p.dot(normal))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Largest value of the support function over all directions.
    pub fn max_support(&self) -> f64 {
        match self {
            ConvexRegion::Disk { center, radius } => center.norm() + radius,
            ConvexRegion::ConvexPolygon { vertices } => {
                vertices.iter().map(|p| p.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// A closed ring approximating the boundary (the polygon itself, or a
    /// chordal approximation of the circle with the given sagitta).
    pub fn boundary_points(&self, max_sagitta: f64) -> Vec<Point2> {
        match self {
            ConvexRegion::Disk { center, radius } => {
                let n = arc_segment_count(*radius, 2.0 * PI, max_sagitta).max(3);
                (0..n)
                    .map(|k| *center + Point2::polar(2.0 * PI * k as f64 / n as f64) * *radius)
                    .collect()
            }
            ConvexRegion::ConvexPolygon { vertices } => vertices.clone(),
        }
    }
}

/// `max_{p in region} p·(cos θ, sin θ)`. The frame origin must lie in the
/// interior of the region.
pub fn support_distance(region: &ConvexRegion, theta: f64) -> Result<f64> {
    if !region.origin_is_interior() {
        return Err(Error::validation(
            "frame origin is not in the interior of the region",
        ));
    }
    Ok(region.support_unchecked(Point2::polar(theta)))
}

/// Whether the (undirected) line meets the region; tangency counts.
pub fn line_meets_convex(line: &DirectedLine, region: &ConvexRegion) -> Result<bool> {
    Ok(line.rho <= support_distance(region, line.theta)?)
}

/// Convex hull, counter-clockwise. Possibly degenerate: one vertex for a
/// point set of diameter `<= EPS`, two for a collinear set.
#[derive(Debug, Clone, PartialEq)]
pub struct HullPolygon {
    vertices: Vec<Point2>,
}

impl HullPolygon {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Perimeter with the integral-geometry convention: a segment counts
    /// twice its length, a point zero.
    pub fn perimeter(&self) -> f64 {
        match self.vertices.len() {
            1 => 0.0,
            2 => 2.0 * self.vertices[0].dist(self.vertices[1]),
            _ => ring_perimeter(&self.vertices),
        }
    }

    /// Distance from `p` to the hull boundary (to the point or segment for
    /// degenerate hulls).
    pub fn distance_to_boundary(&self, p: Point2) -> f64 {
        let v = &self.vertices;
        match v.len() {
            1 => p.dist(v[0]),
            2 => point_segment_distance(p, v[0], v[1]),
            n => (0..n)
                .map(|i| point_segment_distance(p, v[i], v[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn support(&self, normal: Point2) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.dot(normal))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Andrew's monotone chain with `EPS` merging of near-coincident and
/// near-collinear vertices.
pub fn convex_hull(points: &[Point2]) -> Result<HullPolygon> {
    if points.is_empty() {
        return Err(Error::validation("convex hull of an empty point set"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::validation("non-finite point in hull input"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= EPS);

    if pts.len() == 1 {
        return Ok(HullPolygon { vertices: pts });
    }

    let keep_turn = |h: &[Point2], p: Point2| {
        let (o, a) = (h[h.len() - 2], h[h.len() - 1]);
        orient(o, a, p) > EPS * p.dist(o)
    };

    let mut lower: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !keep_turn(&lower, p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !keep_turn(&upper, p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let mut hull = lower;
    // sorting can leave the two extremes within EPS of each other
    if hull.len() == 2 && hull[0].dist(hull[1]) <= EPS {
        hull.truncate(1);
    }
    Ok(HullPolygon { vertices: hull })
}

/// Perimeter of the convex hull of all vertices of `geoms`.
pub fn hull_perimeter(geoms: &[Geom]) -> Result<f64> {
    let pts: Vec<Point2> = geoms.iter().flat_map(|g| g.vertices().iter().copied()).collect();
    if pts.is_empty() {
        return Err(Error::validation("hull perimeter of an empty geometry list"));
    }
    Ok(convex_hull(&pts)?.perimeter())
}

/// Number of chords needed to cover `sweep` radians with sagitta at most
/// `max_sagitta`.
fn arc_segment_count(radius: f64, sweep: f64, max_sagitta: f64) -> usize {
    let ratio = (max_sagitta / radius).min(1.0);
    let max_step = 2.0 * (1.0 - ratio).acos();
    ((sweep.abs() / max_step).ceil() as usize).max(1)
}

/// Chordal approximation of the arc from `angle_start` to `angle_end`
/// (counter-clockwise when `angle_end > angle_start`).
pub fn discretize_arc(
    center: Point2,
    radius: f64,
    angle_start: f64,
    angle_end: f64,
    max_sagitta: f64,
) -> Result<Polyline> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::validation(format!("arc radius must be positive, got {radius}")));
    }
    if !(max_sagitta > 0.0) {
        return Err(Error::validation(format!(
            "arc sagitta must be positive, got {max_sagitta}"
        )));
    }
    let sweep = angle_end - angle_start;
    let n = arc_segment_count(radius, sweep, max_sagitta);
    let pts = (0..=n).map(|k| {
        let t = if k == n {
            angle_end
        } else {
            angle_start + sweep * k as f64 / n as f64
        };
        center + Point2::polar(t) * radius
    });
    Polyline::new(pts.collect())
}

/// Default chordal tolerance for arcs of radius `radius`.
pub fn default_sagitta(radius: f64) -> f64 {
    1e-4 * radius
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Parameters `t` in `[0, 1]` along `ab` where it meets segment `cd`. For
/// collinear overlaps both ends of the overlap are reported.
pub fn segment_crossing_params(a: Point2, b: Point2, c: Point2, d: Point2) -> Vec<f64> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    let qp = c - a;
    let rlen = r.norm();
    let slen = s.norm();
    if denom.abs() <= EPS * rlen * slen {
        // parallel: only collinear overlaps matter
        if qp.cross(r).abs() > EPS * rlen {
            return Vec::new();
        }
        let rr = r.dot(r);
        let t0 = qp.dot(r) / rr;
        let t1 = (d - a).dot(r) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if lo > hi + EPS / rlen {
            return Vec::new();
        }
        return vec![lo, hi.max(lo)];
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let tol_t = EPS / rlen;
    let tol_u = EPS / slen;
    if t >= -tol_t && t <= 1.0 + tol_t && u >= -tol_u && u <= 1.0 + tol_u {
        vec![t.clamp(0.0, 1.0)]
    } else {
        Vec::new()
    }
}

/// Even-odd point-in-polygon test against a closed ring (last vertex
/// implicitly joined to the first).
pub fn point_in_ring(p: Point2, ring: &[Point2]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn distance_to_ring(p: Point2, ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| point_segment_distance(p, ring[i], ring[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn ring_perimeter(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].dist(v[(i + 1) % n])).sum()
}

fn ring_signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Drops repeated and collinear vertices of a closed ring.
fn merge_ring(vertices: &[Point2]) -> Vec<Point2> {
    let mut v: Vec<Point2> = Vec::with_capacity(vertices.len());
    for &p in vertices {
        if v.last().is_none_or(|q| q.dist(p) > EPS) {
            v.push(p);
        }
    }
    while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= EPS {
        v.pop();
    }
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let idx = (0..n).find(|&i| {
            let (o, a, b) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            orient(o, a, b).abs() <= EPS * o.dist(b)
        });
        match idx {
            Some(i) => {
                v.remove(i);
            }
            None => return v,
        }
    }
}
