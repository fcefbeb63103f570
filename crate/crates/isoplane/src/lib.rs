//! Isometries of metric planes.
//!
//! The crate classifies and verifies distance-preserving maps across a
//! family of two-dimensional geometries:
//!
//! - [`metrics`] — the lp distance family (taxicab, Euclidean, general p,
//!   and the max metric) with validation and convexity predicates.
//! - [`affine`] — invertible affine maps and hyperplane mirrors, the
//!   carriers for every isometry here.
//! - [`euclid`] — constructive decomposition of a Euclidean isometry into
//!   at most n+1 mirror reflections, and classification of the planar
//!   isometry types (rotation, translation, reflection, glide reflection).
//! - [`lp`] — the eight-element origin-fixing isometry group shared by
//!   every lp plane with p != 2, plus seeded numerical verifiers for the
//!   isometry and affinity properties.
//! - [`noneuclid`] — reflection composition on the unit sphere and in the
//!   Poincaré disk, classifying rotations, horolations, hyperbolic
//!   translations, and glide reflections from mirror configurations.
//! - [`conics`] — exact piecewise-linear taxicab circles, ellipses, and
//!   hyperbolas, sampled lp unit circles, and CSV/SVG emission.
//!
//! ```
//! use isoplane::euclid::{classify, decompose, Correspondence, IsometryClass};
//! use isoplane::lp::{octic_group, verify_isometry};
//! use isoplane::{Metric, Point};
//!
//! // Quarter turns preserve the taxicab distance exactly...
//! let taxicab = Metric::taxicab();
//! let rot90 = octic_group()[5].map.clone();
//! assert!(verify_isometry(&rot90, &taxicab, 1000, 0, 1e-12).verdict);
//!
//! // ...p = 0.5 is no metric at all...
//! assert!(Metric::validate_p(0.5).is_err());
//!
//! // ...and any planar isometry is a composition of at most 3 mirrors.
//! let correspondence = Correspondence::from_affine(&rot90)?;
//! let mirrors = decompose(&correspondence);
//! assert_eq!(mirrors.len(), 2);
//! match classify(&rot90, 1e-9)? {
//!     IsometryClass::Rotation { center, angle } => {
//!         assert_eq!(center, Point::xy(0.0, 0.0));
//!         assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
//!     }
//!     other => panic!("expected a rotation, got {other:?}"),
//! }
//! # Ok::<(), isoplane::Error>(())
//! ```

pub mod affine;
pub mod conics;
mod error;
pub mod euclid;
pub mod lp;
pub mod metrics;
pub mod noneuclid;
pub(crate) mod vecn;

pub use error::{Error, Result};
pub use metrics::{Metric, Point};
