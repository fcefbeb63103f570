//! Spherical geometry on the unit sphere: great-circle mirrors and their
//! compositions, classified by the spectrum of the composed orthogonal
//! matrix.

use serde::{Deserialize, Serialize};

use super::NonEuclidClass;
use crate::error::{Error, Result};

/// Residual below which trace/eigen tests snap to their exact cases.
const SPECTRUM_TOLERANCE: f64 = 1e-9;

type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];

fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

fn normalize3(a: &Vec3) -> Option<Vec3> {
    let len = norm3(a);
    (len > 1e-12).then(|| [a[0] / len, a[1] / len, a[2] / len])
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn trace3(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

/// A line of spherical geometry: the unit sphere's intersection with the
/// plane through the origin that has this unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGreatCircle")]
pub struct GreatCircle {
    normal: Vec3,
}

#[derive(Deserialize)]
struct RawGreatCircle {
    normal: Vec3,
}

impl TryFrom<RawGreatCircle> for GreatCircle {
    type Error = Error;
    fn try_from(raw: RawGreatCircle) -> Result<Self> {
        GreatCircle::new(raw.normal)
    }
}

impl GreatCircle {
    /// Normalizes the given plane normal.
    pub fn new(normal: Vec3) -> Result<Self> {
        if normal.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        normalize3(&normal)
            .map(|normal| Self { normal })
            .ok_or(Error::ZeroNormal)
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    /// Householder matrix `I - 2 n n^T` of the mirror plane.
    fn householder(&self) -> Mat3 {
        let n = self.normal;
        let mut h = [[0.0; 3]; 3];
        for (i, row) in h.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f64::from(u8::from(i == j)) - 2.0 * n[i] * n[j];
            }
        }
        h
    }
}

/// A point on the unit sphere; construction normalizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec3", into = "Vec3")]
pub struct SpherePoint {
    coords: Vec3,
}

impl TryFrom<Vec3> for SpherePoint {
    type Error = Error;
    fn try_from(coords: Vec3) -> Result<Self> {
        SpherePoint::new(coords)
    }
}

impl From<SpherePoint> for Vec3 {
    fn from(p: SpherePoint) -> Vec3 {
        p.coords
    }
}

impl SpherePoint {
    pub fn new(coords: Vec3) -> Result<Self> {
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        normalize3(&coords)
            .map(|coords| Self { coords })
            .ok_or(Error::ZeroNormal)
    }

    pub fn coords(&self) -> Vec3 {
        self.coords
    }
}

/// Geodesic (great-circle) distance: the angle between the unit vectors,
/// in [0, pi].
pub fn sphere_distance(u: &SpherePoint, v: &SpherePoint) -> f64 {
    dot3(&u.coords, &v.coords).clamp(-1.0, 1.0).acos()
}

/// Mirror image across a great circle: the Householder reflection of the
/// ambient 3-space restricted to the sphere. An involution that preserves
/// [`sphere_distance`].
pub fn sphere_reflect(g: &GreatCircle, x: &SpherePoint) -> SpherePoint {
    let t = 2.0 * dot3(&g.normal, &x.coords);
    let coords = [
        x.coords[0] - t * g.normal[0],
        x.coords[1] - t * g.normal[1],
        x.coords[2] - t * g.normal[2],
    ];
    SpherePoint { coords }
}

/// Unit null vector of a (near-)rank-2 matrix via row cross products;
/// `None` when the rank deficiency is higher.
fn null_vector(m: &Mat3) -> Option<Vec3> {
    let candidates = [
        cross3(&m[0], &m[1]),
        cross3(&m[0], &m[2]),
        cross3(&m[1], &m[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|a, b| dot3(a, a).total_cmp(&dot3(b, b)))?;
    normalize3(&best)
}

/// Canonical axis sign: largest-magnitude component nonnegative.
fn canonicalize(axis: Vec3, angle: f64) -> (Vec3, f64) {
    let lead = axis
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap();
    if lead < 0.0 {
        ([-axis[0], -axis[1], -axis[2]], -angle)
    } else {
        (axis, angle)
    }
}

/// Classifies the composition of 1..=3 great-circle reflections (applied
/// in list order) by the spectrum of the composed orthogonal matrix:
///
/// - det -1 with trace 1 (a fixed plane): a reflection;
/// - det +1: a rotation about the +1 eigenvector, angle from the trace;
/// - det -1 otherwise: a rotatory reflection — the sphere's glide
///   reflection — reported with the -1 eigenvector and residual angle.
///
/// Three concurrent mirrors (coplanar normals) therefore classify as a
/// plain reflection even though they arrived as a triple.
pub fn classify_sphere(mirrors: &[GreatCircle]) -> Result<NonEuclidClass> {
    if mirrors.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut q = [[0.0; 3]; 3];
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for m in mirrors {
        q = mat_mul(&m.householder(), &q);
    }

    let det = det3(&q);
    let tr = trace3(&q);
    let vee = [q[2][1] - q[1][2], q[0][2] - q[2][0], q[1][0] - q[0][1]];
    if det > 0.0 {
        if (tr - 3.0).abs() <= SPECTRUM_TOLERANCE {
            // Identity (coincident mirror pairs); report a zero-angle rotation.
            return Ok(NonEuclidClass::SphereRotation {
                axis: [0.0, 0.0, 1.0],
                angle: 0.0,
            });
        }
        let mut shifted = q;
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= 1.0;
        }
        let axis = null_vector(&shifted).unwrap_or([0.0, 0.0, 1.0]);
        let angle = f64::atan2(dot3(&vee, &axis) / 2.0, (tr - 1.0) / 2.0);
        let (axis, angle) = canonicalize(axis, angle);
        Ok(NonEuclidClass::SphereRotation { axis, angle })
    } else if (tr - 1.0).abs() <= SPECTRUM_TOLERANCE {
        Ok(NonEuclidClass::SphereReflection)
    } else {
        let mut shifted = q;
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        // The antipodal map q = -I has no unique axis; any unit vector works.
        let axis = null_vector(&shifted).unwrap_or([0.0, 0.0, 1.0]);
        let angle = f64::atan2(dot3(&vee, &axis) / 2.0, (tr + 1.0) / 2.0);
        let (axis, angle) = canonicalize(axis, angle);
        Ok(NonEuclidClass::SphereGlideReflection { axis, angle })
    }
}

/// Applies the mirror sequence to a point (mirror 0 first).
pub fn apply_sphere_mirrors(mirrors: &[GreatCircle], x: &SpherePoint) -> SpherePoint {
    mirrors.iter().fold(*x, |p, g| sphere_reflect(g, &p))
}
