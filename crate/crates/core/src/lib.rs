//! Connection probability of a planar cable network between two nodes
//! when a random half-plane disaster destroys every vulnerable link it
//! touches.
//!
//! * [`geometry`] — points, polylines, hulls, support functions.
//! * [`network`] — the network model, inner parts, the equivalent
//!   single-route network, destruction and connectivity.
//! * [`analytic`] — closed-form probabilities.
//! * [`montecarlo`] — seeded simulation of random disaster lines.
//! * [`scenario`], [`presets`], [`experiment`] — JSON scenarios, built-in
//!   networks, and the comparison runs behind the `survnet` binary.

pub mod analytic;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod montecarlo;
pub mod network;
pub mod presets;
pub mod scenario;

pub use error::{Error, Result};
