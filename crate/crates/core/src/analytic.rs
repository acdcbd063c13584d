//! Closed-form connection probabilities under a random half-plane
//! disaster whose boundary line meets the area of interest.
//!
//! The measure of lines meeting a bounded set equals the perimeter of its
//! convex hull, and a directed line cuts off a fixed half-plane with
//! probability one half. Everything below is a ratio of hull perimeters.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{hull_perimeter, ConvexRegion, Geom, EPS};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Exact,
    Approximate,
}

impl Applicability {
    pub fn as_str(self) -> &'static str {
        match self {
            Applicability::Exact => "exact",
            Applicability::Approximate => "approximate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionReport {
    pub p_connect: f64,
    pub p_disconnect: f64,
    pub applicability: Applicability,
    /// Named perimeters entering the formula.
    pub terms: Vec<(String, f64)>,
}

impl ConnectionReport {
    fn new(p_connect: f64, applicability: Applicability, terms: Vec<(String, f64)>) -> Self {
        let p_connect = p_connect.clamp(0.0, 1.0);
        ConnectionReport {
            p_connect,
            p_disconnect: 1.0 - p_connect,
            applicability,
            terms,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

/// Measure of the set of lines meeting `c`: the perimeter of its hull.
pub fn measure_lines_meeting(c: &[Geom]) -> Result<f64> {
    hull_perimeter(c)
}

fn check_contained(omega: &ConvexRegion, c: &[Geom]) -> Result<()> {
    for g in c {
        if let Some(p) = g.vertices().iter().find(|&&p| !omega.contains(p, EPS)) {
            return Err(Error::validation(format!(
                "geometry point ({}, {}) lies outside the area of interest",
                p.x, p.y
            )));
        }
    }
    Ok(())
}

/// Probability that the disaster half-plane misses `c`, given that its
/// boundary meets `omega`.
pub fn prob_avoid(omega: &ConvexRegion, c: &[Geom]) -> Result<f64> {
    check_contained(omega, c)?;
    let om = omega.perimeter();
    let cv = measure_lines_meeting(c)?;
    Ok(((om - cv) / (2.0 * om)).clamp(0.0, 1.0))
}

/// Connection probability of a single-route network whose destructible
/// parts are `n_phi`. With nothing destructible the endpoints always stay
/// connected.
pub fn prob_connect_single(omega: &ConvexRegion, n_phi: &[Geom]) -> Result<ConnectionReport> {
    check_contained(omega, n_phi)?;
    let om = omega.perimeter();
    if n_phi.is_empty() {
        return Ok(ConnectionReport::new(
            1.0,
            Applicability::Exact,
            vec![("omega".into(), om), ("cv_n_phi".into(), 0.0)],
        ));
    }
    let cv = measure_lines_meeting(n_phi)?;
    Ok(ConnectionReport::new(
        (om - cv) / (2.0 * om),
        Applicability::Exact,
        vec![("omega".into(), om), ("cv_n_phi".into(), cv)],
    ))
}

/// Connection probability of a multi-route network under the weakest
/// arrangement, from the inner parts of its two outer routes.
///
/// Exact when the network is almost convex or an outer route is its inner
/// parts plus pieces of `l(s, t)`; otherwise the same expression is
/// returned labelled approximate.
pub fn prob_connect_weakest(network: &Network) -> Result<ConnectionReport> {
    if network.route_count() < 2 {
        return Err(Error::Precondition(
            "single-route network: use prob_connect_single".into(),
        ));
    }
    let om = network.omega().perimeter();
    let chord = Geom::Polyline(network.chord());
    let l = measure_lines_meeting(std::slice::from_ref(&chord))?;
    let mut terms = vec![("omega".to_string(), om), ("l_st".to_string(), l)];
    let mut sum = 0.0;
    for i in [1, 2] {
        let mut geoms = vec![chord.clone()];
        geoms.extend(
            network
                .inner_parts(i)?
                .into_iter()
                .map(|p| Geom::Polyline(p.piece)),
        );
        let term = measure_lines_meeting(&geoms)?;
        terms.push((format!("cv_i{i}_l_st"), term));
        sum += term;
    }
    let exact = network.is_almost_convex(network.almost_convex_eps())?
        || network.is_inner_plus_chord(1)?
        || network.is_inner_plus_chord(2)?;
    let applicability = if exact {
        Applicability::Exact
    } else {
        Applicability::Approximate
    };
    Ok(ConnectionReport::new(
        (om + l - sum) / (2.0 * om),
        applicability,
        terms,
    ))
}

/// Upper bound on the disconnection probability over every arrangement:
/// the weakest-arrangement value.
pub fn weakest_bound(network: &Network) -> Result<f64> {
    Ok(prob_connect_weakest(network)?.p_disconnect)
}

/// Perimeter of the hull of a radius-`a` half circle standing on the chord
/// at `t` and the chord itself, where `d` is the distance between s and t.
///
/// The hull boundary runs along the tangent from s to the circle, around
/// the arc to t, and back along the chord.
pub fn example1_inner_hull_perimeter(a: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::validation(format!("chord length must be positive, got {d}")));
    }
    if !(a > 0.0 && a < d / 2.0) {
        return Err(Error::validation(format!(
            "radius must lie in (0, {}), got {a}",
            d / 2.0
        )));
    }
    let tangent = ((d - a).powi(2) - a * a).sqrt();
    let arc = a * (PI - (a / (d - a)).acos());
    Ok(tangent + arc + d)
}
