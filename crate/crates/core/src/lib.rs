//! r-ball bodies and r-ball hulls.
//!
//! The r-ball body of a set `X` is the intersection of all closed balls of
//! radius `r` centred at points of `X`; the r-ball hull of `X` is the
//! intersection of all radius-`r` balls that contain `X`. In the plane both
//! are computed exactly as arc polygons ([`ball2d`]); in dimensions 3 to 8 the
//! [`nd`] engine answers membership and support queries exactly and estimates
//! intrinsic volumes numerically.
//!
//! [`verify`] runs randomized suites over the duality identities and the
//! volume inequalities satisfied by these bodies, and [`search`] runs a
//! constrained derivative-free minimization of `V_k(A^r)` at fixed volume.

pub mod ball2d;
pub mod error;
pub mod geom;
pub mod nd;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{
    ArcPolygon, Arc, Ball, BallBodyResult, Point, Point2, PointSet, Tolerances,
};
