//! The Poincaré disk: geodesic mirrors (diameters and boundary-orthogonal
//! arcs), reflections by circle inversion, and classification of one- to
//! three-mirror compositions into rotations, horolations, hyperbolic
//! translations, reflections, and glide reflections.

use serde::{Deserialize, Serialize};

use super::NonEuclidClass;
use crate::error::{Error, Result};
use crate::vecn::cross2;

/// Band around the unit circle rejected at [`DiskPoint`] construction.
const BOUNDARY_MARGIN: f64 = 1e-12;

/// Default tolerance for the tangency band and mirror-equality tests. The
/// rotation / horolation / translation trichotomy is discontinuous, so the
/// boundary case needs an explicit band; callers can tighten it per call.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;

type Vec2 = [f64; 2];

fn dot2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm2(a: Vec2) -> f64 {
    dot2(a, a).sqrt()
}

fn dist2(a: Vec2, b: Vec2) -> f64 {
    norm2([a[0] - b[0], a[1] - b[1]])
}

fn normalize2(a: Vec2) -> Option<Vec2> {
    let len = norm2(a);
    (len > 1e-12).then(|| [a[0] / len, a[1] / len])
}

/// A point strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec2", into = "Vec2")]
pub struct DiskPoint {
    coords: Vec2,
}

impl TryFrom<Vec2> for DiskPoint {
    type Error = Error;
    fn try_from(coords: Vec2) -> Result<Self> {
        DiskPoint::new(coords[0], coords[1])
    }
}

impl From<DiskPoint> for Vec2 {
    fn from(p: DiskPoint) -> Vec2 {
        p.coords
    }
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteCoordinate);
        }
        let norm = norm2([x, y]);
        if norm >= 1.0 - BOUNDARY_MARGIN {
            return Err(Error::PointOutsideDisk(norm));
        }
        Ok(Self { coords: [x, y] })
    }

    pub fn origin() -> Self {
        Self { coords: [0.0, 0.0] }
    }

    pub fn coords(&self) -> Vec2 {
        self.coords
    }

    /// For computed images of valid points, which stay in the open disk
    /// mathematically but may graze the construction margin.
    pub(crate) fn from_raw(coords: Vec2) -> Self {
        debug_assert!(norm2(coords) < 1.0 + 1e-9);
        Self { coords }
    }
}

/// A hyperbolic line of the disk model: a diameter, or a circular arc
/// meeting the boundary circle at right angles (`|center|^2 = radius^2 + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Geodesic {
    Diameter {
        direction: Vec2,
    },
    #[serde(rename = "arc")]
    OrthoArc {
        center: Vec2,
        radius: f64,
    },
}

impl Geodesic {
    /// Diameter along the given direction (normalized).
    pub fn diameter(direction: Vec2) -> Result<Self> {
        if direction.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        normalize2(direction)
            .map(|direction| Geodesic::Diameter { direction })
            .ok_or(Error::ZeroNormal)
    }

    /// Arc with the given center and radius; rejects arcs that do not meet
    /// the unit circle orthogonally (within [`TANGENCY_TOLERANCE`]).
    pub fn orthogonal_arc(center: Vec2, radius: f64) -> Result<Self> {
        if center.iter().any(|v| !v.is_finite()) || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::NonFiniteCoordinate);
        }
        let residual = dot2(center, center) - radius * radius - 1.0;
        if residual.abs() > TANGENCY_TOLERANCE * (1.0 + radius * radius) {
            return Err(Error::NotOrthogonalToBoundary { residual });
        }
        Ok(Geodesic::OrthoArc { center, radius })
    }

    /// Same hyperbolic line, within `tol` (diameter directions compare up
    /// to sign).
    pub fn approx_eq(&self, other: &Geodesic, tol: f64) -> bool {
        match (self, other) {
            (Geodesic::Diameter { direction: a }, Geodesic::Diameter { direction: b }) => {
                cross2(*a, *b).abs() <= tol
            }
            (
                Geodesic::OrthoArc {
                    center: c1,
                    radius: r1,
                },
                Geodesic::OrthoArc {
                    center: c2,
                    radius: r2,
                },
            ) => dist2(*c1, *c2) <= tol * (1.0 + norm2(*c1)) && (r1 - r2).abs() <= tol * (1.0 + r1),
            _ => false,
        }
    }
}

/// Disk-model distance `arcosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2)))`.
/// Grows without bound as either point approaches the boundary.
pub fn hyperbolic_distance(u: &DiskPoint, v: &DiskPoint) -> f64 {
    let du = 1.0 - dot2(u.coords, u.coords);
    let dv = 1.0 - dot2(v.coords, v.coords);
    let diff = dist2(u.coords, v.coords);
    (1.0 + 2.0 * diff * diff / (du * dv)).acosh()
}

/// The unique geodesic through two distinct points: a diameter when they
/// are collinear with the origin, otherwise the boundary-orthogonal arc
/// solved from the two incidence conditions.
pub fn geodesic_through(u: &DiskPoint, v: &DiskPoint) -> Result<Geodesic> {
    let (a, b) = (u.coords, v.coords);
    if dist2(a, b) <= 1e-12 {
        return Err(Error::CoincidentPoints);
    }
    if cross2(a, b).abs() <= TANGENCY_TOLERANCE {
        let direction = normalize2([b[0] - a[0], b[1] - a[1]]).expect("points differ");
        return Ok(Geodesic::Diameter { direction });
    }
    // Orthogonality to the boundary turns both incidence equations into
    // 2 p . c = |p|^2 + 1.
    let det = 4.0 * cross2(a, b);
    let (ra, rb) = (dot2(a, a) + 1.0, dot2(b, b) + 1.0);
    let center = [
        (2.0 * b[1] * ra - 2.0 * a[1] * rb) / det,
        (2.0 * a[0] * rb - 2.0 * b[0] * ra) / det,
    ];
    let radius_sq = dot2(center, center) - 1.0;
    debug_assert!(
        radius_sq > 0.0,
        "orthogonal arc centers lie outside the disk"
    );
    Ok(Geodesic::OrthoArc {
        center,
        radius: radius_sq.sqrt(),
    })
}

/// Hyperbolic reflection across a geodesic: the Euclidean reflection for a
/// diameter, circle inversion `x -> c + r^2 (x - c)/|x - c|^2` for an arc.
/// An involution that preserves [`hyperbolic_distance`] and maps the disk
/// interior onto itself.
pub fn hyp_reflect(g: &Geodesic, x: &DiskPoint) -> DiskPoint {
    let p = x.coords;
    match g {
        Geodesic::Diameter { direction: d } => {
            let t = 2.0 * dot2(p, *d);
            DiskPoint::from_raw([t * d[0] - p[0], t * d[1] - p[1]])
        }
        Geodesic::OrthoArc {
            center: c,
            radius: r,
        } => {
            let rel = [p[0] - c[0], p[1] - c[1]];
            // Interior points keep |x - c| >= |c| - 1 > 0, so the inversion
            // center is never hit.
            debug_assert!(
                dot2(rel, rel) > 0.0,
                "interior points cannot coincide with the inversion center"
            );
            let scale = r * r / dot2(rel, rel);
            DiskPoint::from_raw([c[0] + scale * rel[0], c[1] + scale * rel[1]])
        }
    }
}

/// Applies the mirror sequence to a point (mirror 0 first).
pub fn apply_hyp_mirrors(mirrors: &[Geodesic], x: &DiskPoint) -> DiskPoint {
    mirrors.iter().fold(*x, |p, g| hyp_reflect(g, &p))
}

/// Classifies the composition of two distinct geodesic reflections by how
/// the mirrors meet relative to the closed disk:
///
/// - a common interior point: rotation about it;
/// - exactly one common ideal point (tangency within `tol`): horolation
///   about that boundary point;
/// - no common point (ultraparallel): hyperbolic translation along the
///   unique common perpendicular.
pub fn classify_hyperbolic_pair(g1: &Geodesic, g2: &Geodesic, tol: f64) -> Result<NonEuclidClass> {
    if g1.approx_eq(g2, tol) {
        return Err(Error::IdenticalMirrors);
    }
    match (g1, g2) {
        (Geodesic::Diameter { .. }, Geodesic::Diameter { .. }) => Ok(NonEuclidClass::HypRotation {
            center: DiskPoint::origin(),
        }),
        (
            Geodesic::Diameter { direction: d },
            Geodesic::OrthoArc {
                center: c,
                radius: r,
            },
        )
        | (
            Geodesic::OrthoArc {
                center: c,
                radius: r,
            },
            Geodesic::Diameter { direction: d },
        ) => {
            let axial = dot2(*d, *c);
            let line_dist = cross2(*d, *c).abs();
            if (line_dist - r).abs() <= tol {
                // Tangency at the foot of the perpendicular from the center.
                let ideal = normalize2([axial * d[0], axial * d[1]])
                    .expect("tangency point cannot be the origin");
                Ok(NonEuclidClass::Horolation { ideal })
            } else if line_dist < *r {
                // The line meets the circle at t and 1/t; one root is interior.
                let root = axial - axial.signum() * (axial * axial - 1.0).sqrt();
                Ok(NonEuclidClass::HypRotation {
                    center: DiskPoint::from_raw([root * d[0], root * d[1]]),
                })
            } else if axial.abs() <= tol {
                // Perpendicular direction: the common perpendicular is the
                // diameter through the arc's center.
                let direction = normalize2(*c).expect("arc centers are nonzero");
                Ok(NonEuclidClass::HypTranslation {
                    axis: Geodesic::Diameter { direction },
                })
            } else {
                let s = 1.0 / axial;
                let axis = Geodesic::OrthoArc {
                    center: [s * d[0], s * d[1]],
                    radius: (s * s - 1.0).sqrt(),
                };
                Ok(NonEuclidClass::HypTranslation { axis })
            }
        }
        (
            Geodesic::OrthoArc {
                center: c1,
                radius: r1,
            },
            Geodesic::OrthoArc {
                center: c2,
                radius: r2,
            },
        ) => {
            let gap = dist2(*c1, *c2);
            if gap <= tol {
                // Orthogonality ties the radius to the center, so
                // near-concentric arcs are near-identical.
                return Err(Error::IdenticalMirrors);
            }
            let u = [(c2[0] - c1[0]) / gap, (c2[1] - c1[1]) / gap];
            let external = (gap - (r1 + r2)).abs() <= tol;
            let internal = (gap - (r1 - r2).abs()).abs() <= tol;
            if external || internal {
                // Tangency; the common point is ideal (fixed by inversion
                // through the boundary circle, so it has unit norm).
                let t = if external {
                    *r1
                } else {
                    (r1 - r2).signum() * r1
                };
                let p = [c1[0] + t * u[0], c1[1] + t * u[1]];
                let ideal = normalize2(p).expect("tangency points sit on the unit circle");
                Ok(NonEuclidClass::Horolation { ideal })
            } else if gap < r1 + r2 && gap > (r1 - r2).abs() {
                let along = (gap * gap + r1 * r1 - r2 * r2) / (2.0 * gap);
                let h = (r1 * r1 - along * along).max(0.0).sqrt();
                let foot = [c1[0] + along * u[0], c1[1] + along * u[1]];
                let candidates = [
                    [foot[0] + h * -u[1], foot[1] + h * u[0]],
                    [foot[0] - h * -u[1], foot[1] - h * u[0]],
                ];
                let interior = candidates
                    .into_iter()
                    .min_by(|p, q| norm2(*p).total_cmp(&norm2(*q)))
                    .expect("two candidates");
                debug_assert!(norm2(interior) < 1.0);
                Ok(NonEuclidClass::HypRotation {
                    center: DiskPoint::from_raw(interior),
                })
            } else {
                // Ultraparallel: the common perpendicular is the circle
                // orthogonal to both arcs and the boundary; its center is
                // the radical center q with q . c1 = q . c2 = 1.
                let det = cross2(*c1, *c2);
                if det.abs() <= tol * norm2(*c1) * norm2(*c2) {
                    let direction = normalize2(*c1).expect("arc centers are nonzero");
                    return Ok(NonEuclidClass::HypTranslation {
                        axis: Geodesic::Diameter { direction },
                    });
                }
                let q = [(c2[1] - c1[1]) / det, (c1[0] - c2[0]) / det];
                let radius_sq = dot2(q, q) - 1.0;
                debug_assert!(
                    radius_sq > 0.0,
                    "radical center of ultraparallel mirrors is exterior"
                );
                Ok(NonEuclidClass::HypTranslation {
                    axis: Geodesic::OrthoArc {
                        center: q,
                        radius: radius_sq.sqrt(),
                    },
                })
            }
        }
    }
}

/// Classifies a sequence of 1..=3 geodesic reflections (applied in list
/// order). Consecutive duplicate mirrors cancel; a sequence that cancels
/// completely is rejected because the identity is not one of the classes.
///
/// For three mirrors the composition is orientation-reversing: it is a
/// plain reflection exactly when it is an involution, in which case its
/// mirror is recovered from two fixed points located by displacement
/// minimization; otherwise it is a hyperbolic glide reflection.
pub fn classify_hyperbolic(mirrors: &[Geodesic], tol: f64) -> Result<NonEuclidClass> {
    let mut level: Vec<Geodesic> = mirrors.to_vec();
    // Cancel consecutive duplicates until stable.
    loop {
        let before = level.len();
        let mut reduced: Vec<Geodesic> = Vec::with_capacity(level.len());
        for g in level {
            if reduced
                .last()
                .is_some_and(|last: &Geodesic| last.approx_eq(&g, tol))
            {
                reduced.pop();
            } else {
                reduced.push(g);
            }
        }
        level = reduced;
        if level.len() == before {
            break;
        }
    }
    match level.as_slice() {
        [] => Err(Error::IdenticalMirrors),
        [g] => Ok(NonEuclidClass::HypReflection { mirror: *g }),
        [g1, g2] => classify_hyperbolic_pair(g1, g2, tol),
        rest => {
            let map = |p: &DiskPoint| apply_hyp_mirrors(rest, p);
            if is_involution(&map) {
                let mirror = locate_fixed_geodesic(&map)?;
                Ok(NonEuclidClass::HypReflection { mirror })
            } else {
                Ok(NonEuclidClass::HypGlideReflection)
            }
        }
    }
}

/// Orientation-reversing isometries of the disk split into reflections
/// (involutions) and glide reflections (infinite order); sampling the
/// square of the map separates them.
fn is_involution(map: &impl Fn(&DiskPoint) -> DiskPoint) -> bool {
    let probes = [
        [0.0, 0.0],
        [0.4, 0.1],
        [-0.3, 0.5],
        [0.2, -0.6],
        [-0.5, -0.4],
        [0.7, 0.2],
        [-0.1, 0.8],
        [0.55, -0.35],
    ];
    probes.iter().all(|&p| {
        let z = DiskPoint::from_raw(p);
        dist2(map(&map(&z)).coords(), z.coords()) <= 1e-9
    })
}

/// Euclidean displacement of a point under the map. Shares its zero set
/// with the hyperbolic displacement but has no cancellation floor near
/// zero (arcosh(1 + x) cannot resolve x below machine epsilon), which the
/// fixed-point refinement needs.
fn displacement(map: &impl Fn(&DiskPoint) -> DiskPoint, p: Vec2) -> f64 {
    let z = DiskPoint::from_raw(p);
    dist2(map(&z).coords(), z.coords())
}

/// Finds the fixed geodesic of a reflection by scanning probe diameters
/// (and concentric circles as a fallback) with a 256-point grid, refining
/// each candidate minimum by ternary search, and joining two distinct
/// fixed points.
fn locate_fixed_geodesic(map: &impl Fn(&DiskPoint) -> DiskPoint) -> Result<Geodesic> {
    const GRID: usize = 256;
    fn consider(fixed: &mut Vec<Vec2>, p: Vec2, delta: f64) {
        if delta <= 1e-9 && fixed.iter().all(|q| dist2(*q, p) > 1e-3) {
            fixed.push(p);
        }
    }
    let mut fixed: Vec<Vec2> = Vec::new();

    // 16 probe diameters.
    for k in 0..16 {
        let theta = k as f64 * std::f64::consts::PI / 16.0;
        let dir = [theta.cos(), theta.sin()];
        let param = |t: f64| [t * dir[0], t * dir[1]];
        for (t, delta) in refine_minima(map, &param, -0.985, 0.985, GRID) {
            consider(&mut fixed, param(t), delta);
        }
    }
    if fixed.len() < 2 {
        // Fallback: concentric circles catch mirrors that dodge every probe
        // diameter (possible only for mirrors hugging the boundary).
        for rho in [0.3f64, 0.6, 0.9, 0.97] {
            let param = |t: f64| [rho * t.cos(), rho * t.sin()];
            for (t, delta) in refine_minima(map, &param, 0.0, std::f64::consts::TAU, 2 * GRID) {
                consider(&mut fixed, param(t), delta);
            }
            if fixed.len() >= 2 {
                break;
            }
        }
    }
    if fixed.len() >= 2 {
        // Join the best-separated pair; conditioning of the arc solve
        // degrades as the fixed points approach each other.
        let mut best = (fixed[0], fixed[1]);
        let mut best_gap = 0.0;
        for (i, a) in fixed.iter().enumerate() {
            for b in &fixed[i + 1..] {
                let gap = dist2(*a, *b);
                if gap > best_gap {
                    best_gap = gap;
                    best = (*a, *b);
                }
            }
        }
        return geodesic_through(&DiskPoint::from_raw(best.0), &DiskPoint::from_raw(best.1));
    }
    Err(Error::InconsistentDistances { residual: f64::NAN })
}

/// Grid-scans the displacement along a parametrized curve and ternary-
/// refines every interior local minimum; returns (parameter, displacement)
/// pairs for the refined minima.
fn refine_minima(
    map: &impl Fn(&DiskPoint) -> DiskPoint,
    param: &impl Fn(f64) -> Vec2,
    lo: f64,
    hi: f64,
    grid: usize,
) -> Vec<(f64, f64)> {
    let step = (hi - lo) / grid as f64;
    let values: Vec<f64> = (0..=grid)
        .map(|i| displacement(map, param(lo + step * i as f64)))
        .collect();
    let mut out = Vec::new();
    for i in 1..grid {
        if values[i] <= values[i - 1] && values[i] <= values[i + 1] {
            let (mut a, mut b) = (lo + step * (i - 1) as f64, lo + step * (i + 1) as f64);
            for _ in 0..80 {
                let m1 = a + (b - a) / 3.0;
                let m2 = b - (b - a) / 3.0;
                if displacement(map, param(m1)) <= displacement(map, param(m2)) {
                    b = m2;
                } else {
                    a = m1;
                }
            }
            let t = 0.5 * (a + b);
            out.push((t, displacement(map, param(t))));
        }
    }
    out
}
