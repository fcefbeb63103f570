//! Reflection compositions in spherical and hyperbolic geometry.
//!
//! Two concrete models make the mirrors computable: great circles on the
//! unit sphere in 3-space, and geodesics of the Poincaré disk (diameters
//! and circular arcs orthogonal to the boundary). Compositions of one to
//! three reflections are classified into the non-Euclidean isometry types.
//!
//! The single elliptic plane — the sphere with antipodal points identified
//! — carries no classifier of its own: its isometries are exactly the
//! images of the spherical ones under that quotient (a rotatory reflection
//! descends to a rotation composed with a reflection), so [`classify_sphere`]
//! covers it up to the identification.

mod hyperbolic;
mod sphere;

use serde::{Deserialize, Serialize};

pub use hyperbolic::{
    apply_hyp_mirrors, classify_hyperbolic, classify_hyperbolic_pair, geodesic_through,
    hyp_reflect, hyperbolic_distance, DiskPoint, Geodesic, TANGENCY_TOLERANCE,
};
pub use sphere::{
    apply_sphere_mirrors, classify_sphere, sphere_distance, sphere_reflect, GreatCircle,
    SpherePoint,
};

/// Classified isometry types of the sphere and the hyperbolic plane.
///
/// Spherical rotations report the rotation axis and angle; the rotatory
/// case (`SphereGlideReflection`) reports the -1 eigenvector and the
/// residual rotation angle. Hyperbolic classes carry their geometric
/// fixture: the interior fixed point of a rotation, the ideal boundary
/// point of a horolation, the translation axis, or the mirror geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NonEuclidClass {
    SphereReflection,
    SphereRotation { axis: [f64; 3], angle: f64 },
    SphereGlideReflection { axis: [f64; 3], angle: f64 },
    HypRotation { center: DiskPoint },
    Horolation { ideal: [f64; 2] },
    HypTranslation { axis: Geodesic },
    HypReflection { mirror: Geodesic },
    HypGlideReflection,
}
