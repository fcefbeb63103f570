//! The origin-fixing isometries of the lp planes.
//!
//! For every `p >= 1` with `p != 2` (including the max metric), the plane
//! admits exactly eight isometries fixing the origin: the identity, the
//! reflections across the two axes and the two diagonals, and the rotations
//! by quarter turns. They form the symmetry group of a square, represented
//! here by signed permutation matrices ([`octic_group`]).
//!
//! The module also provides seeded numerical verifiers: distance
//! preservation ([`verify_isometry`]), midpoint affinity
//! ([`check_midpoint_affinity`]), and the two-ball intersection probe that
//! separates strictly convex metrics from taxicab and the max metric
//! ([`ball_intersection_probe`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine::{AffineMap, Matrix};
use crate::error::{Error, Result};
use crate::metrics::{Metric, Point, DEFAULT_TOLERANCE};
use crate::vecn;

/// Sampling box for the seeded verifiers: coordinates are drawn uniformly
/// from this symmetric interval in every dimension.
pub const SAMPLE_HALF_WIDTH: f64 = 10.0;

/// Default sample count for [`ball_intersection_probe`]: a full sweep at
/// roughly 1e-3 radian resolution.
pub const DEFAULT_PROBE_SAMPLES: usize = 6283;

/// The eight origin-fixing isometry names, in group-listing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OcticName {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "reflect_x")]
    ReflectX,
    #[serde(rename = "reflect_y")]
    ReflectY,
    #[serde(rename = "reflect_diag")]
    ReflectDiag,
    #[serde(rename = "reflect_antidiag")]
    ReflectAntidiag,
    #[serde(rename = "rot_90")]
    Rot90,
    #[serde(rename = "rot_180")]
    Rot180,
    #[serde(rename = "rot_270")]
    Rot270,
}

impl OcticName {
    pub const ALL: [OcticName; 8] = [
        OcticName::Identity,
        OcticName::ReflectX,
        OcticName::ReflectY,
        OcticName::ReflectDiag,
        OcticName::ReflectAntidiag,
        OcticName::Rot90,
        OcticName::Rot180,
        OcticName::Rot270,
    ];

    /// The signed-permutation matrix, rows over columns.
    /// `ReflectX` mirrors across the x-axis, `ReflectDiag` across y = x,
    /// and `Rot90` turns counterclockwise.
    pub fn matrix_entries(self) -> [[i8; 2]; 2] {
        match self {
            OcticName::Identity => [[1, 0], [0, 1]],
            OcticName::ReflectX => [[1, 0], [0, -1]],
            OcticName::ReflectY => [[-1, 0], [0, 1]],
            OcticName::ReflectDiag => [[0, 1], [1, 0]],
            OcticName::ReflectAntidiag => [[0, -1], [-1, 0]],
            OcticName::Rot90 => [[0, -1], [1, 0]],
            OcticName::Rot180 => [[-1, 0], [0, -1]],
            OcticName::Rot270 => [[0, 1], [-1, 0]],
        }
    }

    fn from_entries(entries: [[i8; 2]; 2]) -> OcticName {
        *Self::ALL
            .iter()
            .find(|n| n.matrix_entries() == entries)
            .expect("signed permutation matrices are closed under product")
    }

    /// Group operation: `self.compose(other)` applies `other` first.
    pub fn compose(self, other: OcticName) -> OcticName {
        let a = self.matrix_entries();
        let b = other.matrix_entries();
        let mut prod = [[0i8; 2]; 2];
        for (i, row) in prod.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::from_entries(prod)
    }

    pub fn inverse(self) -> OcticName {
        let m = self.matrix_entries();
        // Signed permutation matrices are orthogonal: inverse = transpose.
        Self::from_entries([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn element(self) -> OcticElement {
        let rows = self
            .matrix_entries()
            .iter()
            .map(|row| row.iter().map(|&v| f64::from(v)).collect())
            .collect();
        OcticElement {
            name: self,
            map: AffineMap::linear(Matrix::from_rows(rows).expect("2x2 entries"))
                .expect("signed permutations are invertible"),
        }
    }
}

impl std::fmt::Display for OcticName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OcticName::Identity => "identity",
            OcticName::ReflectX => "reflect_x",
            OcticName::ReflectY => "reflect_y",
            OcticName::ReflectDiag => "reflect_diag",
            OcticName::ReflectAntidiag => "reflect_antidiag",
            OcticName::Rot90 => "rot_90",
            OcticName::Rot180 => "rot_180",
            OcticName::Rot270 => "rot_270",
        };
        f.write_str(s)
    }
}

/// A named origin-fixing isometry with its affine carrier (a signed
/// permutation matrix, zero translation).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OcticElement {
    pub name: OcticName,
    pub map: AffineMap,
}

/// The full origin-fixing isometry group of the lp plane for p != 2.
pub fn octic_group() -> Vec<OcticElement> {
    OcticName::ALL.iter().map(|n| n.element()).collect()
}

/// Splits any map into a translation followed after an origin-fixing part:
/// `f = translate(f(0)) ∘ fixer` with `fixer(0) = 0`.
pub fn split_translation(f: &AffineMap) -> (Vec<f64>, AffineMap) {
    let translation = f.translation_vector().to_vec();
    let fixer = AffineMap::linear(f.matrix().clone()).expect("f's matrix is invertible");
    (translation, fixer)
}

/// Matches a 2x2 matrix against the eight signed permutations, entrywise
/// within `tol`. For an exact lp isometry with p != 2 a `None` here means
/// the map is not an isometry at all; for p = 2 the octic set is only a
/// subgroup, so `None` carries no such meaning.
pub fn classify_origin_fixing(m: &Matrix, _metric: &Metric, tol: f64) -> Option<OcticElement> {
    if m.dim() != 2 {
        return None;
    }
    OcticName::ALL.iter().copied().find_map(|name| {
        let e = name.matrix_entries();
        let close = (0..2).all(|i| (0..2).all(|j| (m.get(i, j) - f64::from(e[i][j])).abs() <= tol));
        close.then(|| name.element())
    })
}

/// A maximal-violation witness pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Point,
    pub y: Point,
}

/// Outcome of a seeded sampling check. `verdict` is true iff every sample
/// stayed within tolerance; on failure the witness carries the
/// maximal-violation pair. Samples are pre-generated from the seed and
/// reduced by max violation with the lowest sample index winning ties, so
/// the result does not depend on evaluation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: bool,
    #[serde(rename = "samples")]
    pub samples_tested: usize,
    pub max_violation: f64,
    pub witness: Option<Witness>,
}

impl VerificationReport {
    fn from_samples(samples: impl Iterator<Item = (Point, Point, f64)>, tol: f64) -> Self {
        let mut max_violation = f64::NEG_INFINITY;
        let mut witness = None;
        let mut count = 0;
        for (x, y, violation) in samples {
            count += 1;
            if violation > max_violation {
                max_violation = violation;
                witness = Some(Witness { x, y });
            }
        }
        if count == 0 {
            return Self {
                verdict: true,
                samples_tested: 0,
                max_violation: 0.0,
                witness: None,
            };
        }
        Self {
            verdict: max_violation <= tol,
            samples_tested: count,
            max_violation,
            witness,
        }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    Point::from_raw(
        (0..dim)
            .map(|_| rng.gen_range(-SAMPLE_HALF_WIDTH..SAMPLE_HALF_WIDTH))
            .collect(),
    )
}

/// Tests `|d(x, y) - d(f(x), f(y))| <= tol` over `n_samples` seeded random
/// pairs drawn uniformly from the sample box (each pair consumes the
/// coordinates of `x` then of `y`). Deterministic for a given seed.
pub fn verify_isometry(
    f: &AffineMap,
    metric: &Metric,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> VerificationReport {
    let dim = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n_samples).map(|_| {
        let x = sample_point(&mut rng, dim);
        let y = sample_point(&mut rng, dim);
        let d = metric.distance(&x, &y).expect("equal dimensions");
        let d_image = metric
            .distance(&f.apply(&x), &f.apply(&y))
            .expect("equal dimensions");
        let violation = (d - d_image).abs();
        (x, y, violation)
    });
    VerificationReport::from_samples(samples, tol)
}

/// Tests the affinity identity `f((1-l)x + ly) = (1-l)f(x) + lf(y)` on
/// seeded random planar pairs and weights, measuring the deviation in the
/// given metric's norm. For a strictly convex metric every isometry must
/// pass; the check still runs (and reports) for taxicab and the max metric.
pub fn check_midpoint_affinity<F>(
    map: F,
    metric: &Metric,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> VerificationReport
where
    F: Fn(&Point) -> Point,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n_samples).map(|_| {
        let x = sample_point(&mut rng, 2);
        let y = sample_point(&mut rng, 2);
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let mix = Point::xy(
            (1.0 - lambda) * x[0] + lambda * y[0],
            (1.0 - lambda) * x[1] + lambda * y[1],
        );
        let through = map(&mix);
        let (fx, fy) = (map(&x), map(&y));
        assert_eq!(through.dim(), 2, "map must stay planar");
        let combo = [
            (1.0 - lambda) * fx[0] + lambda * fy[0],
            (1.0 - lambda) * fx[1] + lambda * fy[1],
        ];
        let deviation = metric.eval2(through[0] - combo[0], through[1] - combo[1]);
        (x, y, deviation)
    });
    VerificationReport::from_samples(samples, tol)
}

/// Result of probing `B(x, l*d) ∩ B(y, (1-l)*d)`.
///
/// The witness `(1-l)x + ly` always lies in both closed balls. For a
/// strictly convex metric it is the whole intersection, so
/// `extra_points_found` stays 0; for taxicab or the max metric whole
/// boundary segments can qualify.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallIntersectionProbe {
    pub witness: Point,
    pub extra_points_found: usize,
}

/// Sweeps `n_samples` directions around the boundary sphere of
/// `B(x, l*d)` (extras can only occur on the boundaries) and counts the
/// sampled points that lie in both closed balls (within 1e-9) while being
/// more than 1e-6 away from the witness in the Euclidean sense. The seed
/// rotates the sweep phase; results are deterministic per seed.
pub fn ball_intersection_probe(
    x: &Point,
    y: &Point,
    lambda: f64,
    metric: &Metric,
    n_samples: usize,
    seed: u64,
) -> Result<BallIntersectionProbe> {
    assert!((0.0..=1.0).contains(&lambda), "lambda must lie in [0, 1]");
    let d = metric.distance(x, y)?;
    if d <= 1e-12 {
        return Err(Error::CoincidentPoints);
    }
    let witness = Point::xy(
        (1.0 - lambda) * x[0] + lambda * y[0],
        (1.0 - lambda) * x[1] + lambda * y[1],
    );
    let r_x = lambda * d;
    let r_y = (1.0 - lambda) * d;
    let in_both = |p: &Point| -> bool {
        metric.distance(p, x).expect("planar") <= r_x + DEFAULT_TOLERANCE
            && metric.distance(p, y).expect("planar") <= r_y + DEFAULT_TOLERANCE
    };
    assert!(in_both(&witness), "witness must lie in both closed balls");

    let mut extras = 0;
    if r_x > 0.0 && n_samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spacing = std::f64::consts::TAU / n_samples as f64;
        let phase: f64 = rng.gen::<f64>() * spacing;
        for j in 0..n_samples {
            let theta = phase + spacing * j as f64;
            let (s, c) = theta.sin_cos();
            let unit_norm = metric.eval2(c, s);
            let z = Point::xy(x[0] + r_x * c / unit_norm, x[1] + r_x * s / unit_norm);
            if vecn::dist2(z.coords(), witness.coords()) > 1e-6 && in_both(&z) {
                extras += 1;
            }
        }
    }
    Ok(BallIntersectionProbe {
        witness,
        extra_points_found: extras,
    })
}

/// Cyclic taxicab length of a counterclockwise quadruple on the taxicab
/// unit circle. Equals the perimeter of the axes-parallel bounding
/// rectangle, hence is at most 8, with 8 attained only at the four
/// corners.
pub fn corner_cycle_sum(pts: &[Point; 4]) -> Result<f64> {
    let taxi = Metric::taxicab();
    for (index, p) in pts.iter().enumerate() {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                expected: 2,
                found: p.dim(),
            });
        }
        let distance = taxi.norm(p);
        if (distance - 1.0).abs() > DEFAULT_TOLERANCE {
            return Err(Error::NotOnUnitCircle { index, distance });
        }
    }
    // Counterclockwise order means the cyclic angle sequence wraps exactly
    // once (ties from coincident points are tolerated).
    let angles: Vec<f64> = pts.iter().map(|p| p[1].atan2(p[0])).collect();
    let descents = (0..4).filter(|&i| angles[(i + 1) % 4] < angles[i]).count();
    if descents > 1 {
        return Err(Error::NotCounterclockwise);
    }

    let sum: f64 = (0..4)
        .map(|i| {
            let q = &pts[(i + 1) % 4];
            (q[0] - pts[i][0]).abs() + (q[1] - pts[i][1]).abs()
        })
        .sum();

    let xs = pts.iter().map(|p| p[0]);
    let ys = pts.iter().map(|p| p[1]);
    let perimeter = 2.0 * (xs.clone().fold(f64::MIN, f64::max) - xs.fold(f64::MAX, f64::min))
        + 2.0 * (ys.clone().fold(f64::MIN, f64::max) - ys.fold(f64::MAX, f64::min));
    assert!(
        (sum - perimeter).abs() <= 1e-12,
        "cycle sum {sum} must equal the bounding-rectangle perimeter {perimeter}"
    );
    assert!(sum <= 8.0 + 1e-12, "cycle sum {sum} exceeds 8");
    Ok(sum)
}
