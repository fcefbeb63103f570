//! Euclidean isometries as compositions of mirror reflections.
//!
//! A planar isometry is pinned down by where it sends three non-collinear
//! points, and can be realized by at most three reflections; in dimension n
//! the same sweep needs at most n+1 mirrors. [`decompose`] builds that
//! mirror list constructively, and [`classify`] names the resulting planar
//! isometry (identity, translation, rotation, reflection, glide
//! reflection).

use serde::{Deserialize, Serialize};

use crate::affine::{compose_reflections, AffineMap, Hyperplane, Matrix};
use crate::error::{Error, Result};
use crate::metrics::Point;
use crate::vecn;

/// Rotation angles this close to zero make `I - M` numerically singular;
/// the map is classified as a translation instead.
const ROTATION_ANGLE_CUTOFF: f64 = 1e-9;

/// Base tolerance for "this point already sits on its target" tests in the
/// decomposition sweep; multiplied by `1 + coordinate scale`.
const MATCH_TOLERANCE: f64 = 1e-9;

/// Threshold on the normalized Gram determinant below which anchor points
/// count as affinely dependent.
const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// A congruent pairing of n+1 affinely independent source points with their
/// target images. This is the input shape for [`decompose`]: an isometry is
/// determined by such a correspondence.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    sources: Vec<Point>,
    targets: Vec<Point>,
}

impl Correspondence {
    /// Validates point counts (n+1 points of dimension n), affine
    /// independence of the sources, and pairwise-distance congruence
    /// between sources and targets.
    pub fn new(sources: Vec<Point>, targets: Vec<Point>) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::DimensionTooSmall(0));
        }
        let dim = sources[0].dim();
        if sources.len() != dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: dim + 1,
                found: sources.len(),
            });
        }
        if targets.len() != sources.len() {
            return Err(Error::DimensionMismatch {
                expected: sources.len(),
                found: targets.len(),
            });
        }
        for p in sources.iter().chain(&targets) {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        if !affinely_independent(&sources) {
            return Err(if dim == 2 {
                Error::CollinearAnchors
            } else {
                Error::DegenerateSimplex
            });
        }
        let scale = point_scale(sources.iter().chain(&targets));
        let tol = MATCH_TOLERANCE * (1.0 + scale);
        for i in 0..sources.len() {
            for j in i + 1..sources.len() {
                let ds = vecn::dist2(sources[i].coords(), sources[j].coords());
                let dt = vecn::dist2(targets[i].coords(), targets[j].coords());
                if (ds - dt).abs() > tol {
                    return Err(Error::NonCongruent {
                        i,
                        j,
                        source_dist: ds,
                        target_dist: dt,
                    });
                }
            }
        }
        Ok(Self { sources, targets })
    }

    /// Correspondence induced by a map on the canonical simplex
    /// `0, e1, ..., en`. Fails with `NonCongruent` when the map does not
    /// preserve the simplex's pairwise distances.
    pub fn from_affine(f: &AffineMap) -> Result<Self> {
        let n = f.dim();
        let mut sources = vec![Point::origin(n)];
        for i in 0..n {
            let mut coords = vec![0.0; n];
            coords[i] = 1.0;
            sources.push(Point::new(coords)?);
        }
        let targets = sources.iter().map(|p| f.apply(p)).collect();
        Self::new(sources, targets)
    }

    pub fn dim(&self) -> usize {
        self.sources[0].dim()
    }

    pub fn sources(&self) -> &[Point] {
        &self.sources
    }

    pub fn targets(&self) -> &[Point] {
        &self.targets
    }
}

fn point_scale<'a>(points: impl Iterator<Item = &'a Point>) -> f64 {
    points
        .flat_map(|p| p.coords().iter().copied())
        .fold(0.0, |m: f64, c| m.max(c.abs()))
}

/// Affine independence via the normalized Gram determinant of the edge
/// vectors out of the first point.
fn affinely_independent(points: &[Point]) -> bool {
    let n = points[0].dim();
    let base = points[0].coords();
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| vecn::sub(p.coords(), base))
        .collect();
    let mut norm_product = 1.0;
    for e in &edges {
        let len2 = vecn::dot(e, e);
        if len2 == 0.0 {
            return false;
        }
        norm_product *= len2;
    }
    let gram: Vec<Vec<f64>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| vecn::dot(a, b)).collect())
        .collect();
    let det = if n == 1 {
        gram[0][0]
    } else {
        Matrix::from_rows(gram)
            .map(|g| g.determinant())
            .unwrap_or(0.0)
    };
    det / norm_product > DEGENERACY_TOLERANCE
}

/// The classified planar isometry types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    Translation { vector: Vec<f64> },
    Rotation { center: Point, angle: f64 },
    Reflection { axis: Hyperplane },
    GlideReflection { axis: Hyperplane, glide: Vec<f64> },
}

impl IsometryClass {
    /// Rebuilds the affine map from the class parameters.
    pub fn to_affine_map(&self) -> AffineMap {
        match self {
            IsometryClass::Identity => AffineMap::identity(2),
            IsometryClass::Translation { vector } => {
                AffineMap::translation(vector.clone()).expect("finite translation")
            }
            IsometryClass::Rotation { center, angle } => {
                let m = Matrix::rotation2(*angle);
                let moved = m.mul_vec(center.coords());
                let b = vecn::sub(center.coords(), &moved);
                AffineMap::new(m, b).expect("rotation matrix is invertible")
            }
            IsometryClass::Reflection { axis } => axis.as_affine(),
            IsometryClass::GlideReflection { axis, glide } => AffineMap::translation(glide.clone())
                .expect("finite glide")
                .compose(&axis.as_affine())
                .expect("matching dimensions"),
        }
    }
}

/// Orientation character of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Direct,
    Indirect,
}

/// `Direct` iff the map preserves orientation (det = +1). Errors when the
/// linear part is not orthogonal within `tol`.
pub fn parity(f: &AffineMap, tol: f64) -> Result<Parity> {
    let deviation = f.orthogonality_deviation();
    if deviation > tol {
        return Err(Error::NotAnIsometry { deviation });
    }
    Ok(if f.determinant() > 0.0 {
        Parity::Direct
    } else {
        Parity::Indirect
    })
}

/// Recovers a point of the plane from its Euclidean distances to three
/// non-collinear anchors: intersect the circles around the first two
/// anchors and let the third disambiguate.
pub fn locate_by_distances(anchors: &[Point; 3], dists: [f64; 3]) -> Result<Point> {
    for p in anchors {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                expected: 2,
                found: p.dim(),
            });
        }
    }
    if dists.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(Error::InconsistentDistances { residual: f64::NAN });
    }
    let (a, b, c) = (
        anchors[0].coords(),
        anchors[1].coords(),
        anchors[2].coords(),
    );
    let ab = vecn::sub(b, a);
    let ac = vecn::sub(c, a);
    let lab = vecn::norm2(&ab);
    let lac = vecn::norm2(&ac);
    if vecn::cross2([ab[0], ab[1]], [ac[0], ac[1]]).abs() <= DEGENERACY_TOLERANCE * lab * lac {
        return Err(Error::CollinearAnchors);
    }

    let scale = point_scale(anchors.iter()).max(dists.iter().fold(0.0, |m: f64, d| m.max(*d)));
    let tol = MATCH_TOLERANCE * (1.0 + scale);

    // Intersection of the circles around a (radius r0) and b (radius r1).
    let (r0, r1, r2) = (dists[0], dists[1], dists[2]);
    let along = (lab * lab + r0 * r0 - r1 * r1) / (2.0 * lab);
    let h2 = r0 * r0 - along * along;
    if h2 < -tol * (1.0 + scale) {
        return Err(Error::InconsistentDistances {
            residual: (-h2).sqrt(),
        });
    }
    let h = h2.max(0.0).sqrt();
    let u = vecn::scale(&ab, 1.0 / lab);
    let perp = [-u[1], u[0]];
    let foot = [a[0] + along * u[0], a[1] + along * u[1]];
    let candidates = [
        [foot[0] + h * perp[0], foot[1] + h * perp[1]],
        [foot[0] - h * perp[0], foot[1] - h * perp[1]],
    ];
    let best = candidates
        .into_iter()
        .min_by(|p, q| {
            (vecn::dist2(p, c) - r2)
                .abs()
                .total_cmp(&(vecn::dist2(q, c) - r2).abs())
        })
        .expect("two candidates");
    let residual = [
        (vecn::dist2(&best, a) - r0).abs(),
        (vecn::dist2(&best, b) - r1).abs(),
        (vecn::dist2(&best, c) - r2).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::InconsistentDistances { residual });
    }
    Point::new(best.to_vec())
}

/// Decomposes the isometry pinned by `c` into at most n+1 mirror
/// reflections, in application order.
///
/// The sweep walks the reference points once: whenever the current image of
/// a point differs from its target, the perpendicular bisector of the two
/// is appended and applied to every current image. Points matched earlier
/// lie on each later bisector (they are equidistant from both sides), so
/// they stay fixed.
pub fn decompose(c: &Correspondence) -> Vec<Hyperplane> {
    let scale = point_scale(c.sources.iter().chain(&c.targets));
    let tol = MATCH_TOLERANCE * (1.0 + scale);
    let mut current: Vec<Vec<f64>> = c.sources.iter().map(|p| p.coords().to_vec()).collect();
    let mut mirrors = Vec::new();
    for i in 0..current.len() {
        let target = c.targets[i].coords();
        if vecn::dist2(&current[i], target) > tol {
            let h = Hyperplane::perpendicular_bisector(
                &Point::from_raw(current[i].clone()),
                &c.targets[i],
            )
            .expect("points differ beyond tolerance");
            for img in &mut current {
                *img = h.reflect_raw(img);
            }
            mirrors.push(h);
        }
    }
    debug_assert!(current
        .iter()
        .zip(&c.targets)
        .all(|(img, t)| vecn::dist2(img, t.coords()) <= 10.0 * tol));
    mirrors
}

/// Names the planar isometry represented by `f`.
///
/// Requires an orthogonal linear part (within `tol`) and dimension 2.
/// Direct maps split into identity / translation / rotation (center from
/// `(I - M)x = b`, angle in `(-pi, pi]` with the tie at pi reported as
/// +pi); indirect maps split into reflection / glide reflection by the
/// component of the translation along the mirror axis.
pub fn classify(f: &AffineMap, tol: f64) -> Result<IsometryClass> {
    if f.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: f.dim(),
        });
    }
    let deviation = f.orthogonality_deviation();
    if deviation > tol {
        return Err(Error::NotAnIsometry { deviation });
    }
    let m = f.matrix();
    let b = f.translation_vector();
    if f.determinant() > 0.0 {
        let mut angle = f64::atan2(m.get(1, 0), m.get(0, 0));
        if angle == -std::f64::consts::PI {
            angle = std::f64::consts::PI;
        }
        if angle.abs() <= ROTATION_ANGLE_CUTOFF {
            return Ok(if vecn::norm2(b) <= tol {
                IsometryClass::Identity
            } else {
                IsometryClass::Translation { vector: b.to_vec() }
            });
        }
        // Solve (I - M) center = b with the 2x2 inverse.
        let a11 = 1.0 - m.get(0, 0);
        let a12 = -m.get(0, 1);
        let a21 = -m.get(1, 0);
        let a22 = 1.0 - m.get(1, 1);
        let det = a11 * a22 - a12 * a21;
        let center = Point::xy(
            (a22 * b[0] - a12 * b[1]) / det,
            (-a21 * b[0] + a11 * b[1]) / det,
        );
        Ok(IsometryClass::Rotation { center, angle })
    } else {
        // Mirror direction is the +1 eigenvector of the reflection part.
        let phi = 0.5 * f64::atan2(m.get(1, 0), m.get(0, 0));
        let dir = [phi.cos(), phi.sin()];
        let glide_len = vecn::dot(b, &dir);
        let normal = [-dir[1], dir[0]];
        let axis =
            Hyperplane::new(normal.to_vec(), vecn::dot(&normal, b) / 2.0).expect("unit normal");
        if glide_len.abs() <= tol {
            Ok(IsometryClass::Reflection { axis })
        } else {
            Ok(IsometryClass::GlideReflection {
                axis,
                glide: vec![glide_len * dir[0], glide_len * dir[1]],
            })
        }
    }
}

/// How a planar mirror sequence is arranged, reported factually (the
/// resulting isometry class is computed separately, since e.g. three
/// concurrent mirrors compose to a plain reflection just like three
/// parallel ones do).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MirrorConfiguration {
    Empty,
    Single,
    CoincidentPair,
    ParallelPair,
    IntersectingPair,
    ParallelTriple,
    ConcurrentTriple,
    GeneralTriple,
    LongerSequence,
}

/// A classified mirror sequence: the arrangement of the mirrors plus the
/// isometry their composition performs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceClassification {
    pub configuration: MirrorConfiguration,
    pub class: IsometryClass,
}

/// Composes planar mirrors (application order) and classifies the result,
/// also reporting the mirror arrangement.
pub fn classify_reflection_sequence(
    mirrors: &[Hyperplane],
    tol: f64,
) -> Result<SequenceClassification> {
    for m in mirrors {
        if m.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                expected: 2,
                found: m.dim(),
            });
        }
    }
    let composed = compose_reflections(mirrors, 2)?;
    let class = classify(&composed, tol)?;
    let parallel = |a: &Hyperplane, b: &Hyperplane| {
        vecn::cross2(
            [a.normal()[0], a.normal()[1]],
            [b.normal()[0], b.normal()[1]],
        )
        .abs()
            <= tol
    };
    let configuration = match mirrors {
        [] => MirrorConfiguration::Empty,
        [_] => MirrorConfiguration::Single,
        [a, b] => {
            if a.approx_eq(b, tol) {
                MirrorConfiguration::CoincidentPair
            } else if parallel(a, b) {
                MirrorConfiguration::ParallelPair
            } else {
                MirrorConfiguration::IntersectingPair
            }
        }
        [a, b, c] => {
            if parallel(a, b) && parallel(b, c) {
                MirrorConfiguration::ParallelTriple
            } else if concurrent_triple(a, b, c, tol) {
                MirrorConfiguration::ConcurrentTriple
            } else {
                MirrorConfiguration::GeneralTriple
            }
        }
        _ => MirrorConfiguration::LongerSequence,
    };
    Ok(SequenceClassification {
        configuration,
        class,
    })
}

/// True when the three mirror lines pass through a common point.
fn concurrent_triple(a: &Hyperplane, b: &Hyperplane, c: &Hyperplane, tol: f64) -> bool {
    // Find a non-parallel pair to intersect, then test incidence of the third.
    let pairs = [(a, b, c), (a, c, b), (b, c, a)];
    for (p, q, r) in pairs {
        let det = vecn::cross2(
            [p.normal()[0], p.normal()[1]],
            [q.normal()[0], q.normal()[1]],
        );
        if det.abs() > tol {
            let x = (p.offset() * q.normal()[1] - q.offset() * p.normal()[1]) / det;
            let y = (p.normal()[0] * q.offset() - q.normal()[0] * p.offset()) / det;
            let scale = 1.0 + x.abs().max(y.abs());
            return (vecn::dot(r.normal(), &[x, y]) - r.offset()).abs() <= tol * scale;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::DEFAULT_TOLERANCE;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tri(points: [(f64, f64); 3]) -> [Point; 3] {
        [
            Point::xy(points[0].0, points[0].1),
            Point::xy(points[1].0, points[1].1),
            Point::xy(points[2].0, points[2].1),
        ]
    }

    #[test]
    fn locate_examples() {
        let anchors = tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let p = locate_by_distances(&anchors, [0.0, 1.0, 1.0]).unwrap();
        assert!(p.max_abs_diff(&Point::xy(0.0, 0.0)) < 1e-12);

        let anchors = tri([(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]);
        let s = 2.0f64.sqrt();
        let p = locate_by_distances(&anchors, [s, s, s]).unwrap();
        assert!(p.max_abs_diff(&Point::xy(1.0, 1.0)) < 1e-12);

        let anchors = tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(matches!(
            locate_by_distances(&anchors, [10.0, 1.0, 1.0]),
            Err(Error::InconsistentDistances { .. })
        ));
        let collinear = tri([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(
            locate_by_distances(&collinear, [1.0, 1.0, 1.0]),
            Err(Error::CollinearAnchors)
        );
    }

    fn correspondence(src: [(f64, f64); 3], dst: [(f64, f64); 3]) -> Correspondence {
        Correspondence::new(tri(src).to_vec(), tri(dst).to_vec()).unwrap()
    }

    #[test]
    fn decompose_identity_is_empty() {
        let c = correspondence(
            [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
            [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
        );
        assert!(decompose(&c).is_empty());
    }

    #[test]
    fn decompose_translation_gives_two_parallel_mirrors() {
        let c = correspondence(
            [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
            [(2.0, 0.0), (2.0, 1.0), (3.0, 0.0)],
        );
        let mirrors = decompose(&c);
        assert_eq!(mirrors.len(), 2);
        assert!(mirrors[0].approx_eq(&Hyperplane::line(1.0, 0.0, 1.0).unwrap(), 1e-12));
        assert!(mirrors[1].approx_eq(&Hyperplane::line(1.0, 0.0, 2.0).unwrap(), 1e-12));
        let f = compose_reflections(&mirrors, 2).unwrap();
        for (s, t) in c.sources().iter().zip(c.targets()) {
            assert!(f.apply(s).max_abs_diff(t) < 1e-12);
        }
    }

    #[test]
    fn decompose_swap_gives_single_diagonal_mirror() {
        let c = correspondence(
            [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
            [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
        );
        let mirrors = decompose(&c);
        assert_eq!(mirrors.len(), 1);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!(mirrors[0].approx_eq(
            &Hyperplane::line(-inv_sqrt2, inv_sqrt2, 0.0).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn non_congruent_rejected() {
        let err = Correspondence::new(
            tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).to_vec(),
            tri([(0.0, 0.0), (2.0, 0.0), (0.0, 1.0)]).to_vec(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonCongruent { .. }));

        // Reordering the same points breaks congruence on a scalene triple;
        // that must be rejected, not silently matched best-effort.
        let err = Correspondence::new(
            tri([(0.0, 0.0), (1.0, 0.0), (0.0, 2.0)]).to_vec(),
            tri([(0.0, 0.0), (0.0, 2.0), (1.0, 0.0)]).to_vec(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonCongruent { .. }));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&AffineMap::identity(2), DEFAULT_TOLERANCE).unwrap(),
            IsometryClass::Identity
        );

        let quarter =
            AffineMap::linear(Matrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap())
                .unwrap();
        match classify(&quarter, DEFAULT_TOLERANCE).unwrap() {
            IsometryClass::Rotation { center, angle } => {
                assert!(center.max_abs_diff(&Point::xy(0.0, 0.0)) < 1e-12);
                assert!((angle - FRAC_PI_2).abs() < 1e-12);
            }
            other => panic!("expected rotation, got {other:?}"),
        }

        let glide = AffineMap::new(
            Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap(),
            vec![2.0, 0.0],
        )
        .unwrap();
        match classify(&glide, DEFAULT_TOLERANCE).unwrap() {
            IsometryClass::GlideReflection { axis, glide } => {
                assert!(axis.approx_eq(&Hyperplane::line(0.0, 1.0, 0.0).unwrap(), 1e-12));
                assert!((glide[0] - 2.0).abs() < 1e-12);
                assert!(glide[1].abs() < 1e-12);
            }
            other => panic!("expected glide reflection, got {other:?}"),
        }

        let shear =
            AffineMap::linear(Matrix::from_rows(vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap())
                .unwrap();
        assert!(matches!(
            classify(&shear, DEFAULT_TOLERANCE),
            Err(Error::NotAnIsometry { .. })
        ));
    }

    #[test]
    fn classify_reports_pi_not_minus_pi() {
        let half_turn =
            AffineMap::linear(Matrix::from_rows(vec![vec![-1.0, 0.0], vec![-0.0, -1.0]]).unwrap())
                .unwrap();
        match classify(&half_turn, DEFAULT_TOLERANCE).unwrap() {
            IsometryClass::Rotation { angle, .. } => assert_eq!(angle, PI),
            other => panic!("expected rotation, got {other:?}"),
        }
    }

    #[test]
    fn reflection_sequences() {
        let tol = DEFAULT_TOLERANCE;
        let x1 = Hyperplane::line(1.0, 0.0, 1.0).unwrap();
        let x2 = Hyperplane::line(1.0, 0.0, 2.0).unwrap();
        let out = classify_reflection_sequence(&[x1.clone(), x2.clone()], tol).unwrap();
        assert_eq!(out.configuration, MirrorConfiguration::ParallelPair);
        match out.class {
            IsometryClass::Translation { vector } => {
                // Twice the inter-mirror distance, perpendicular to the mirrors.
                assert!((vector[0] - 2.0).abs() < 1e-12 && vector[1].abs() < 1e-12);
            }
            other => panic!("expected translation, got {other:?}"),
        }

        let x_axis = Hyperplane::line(0.0, 1.0, 0.0).unwrap();
        let y_axis = Hyperplane::line(1.0, 0.0, 0.0).unwrap();
        let out = classify_reflection_sequence(&[x_axis, y_axis], tol).unwrap();
        assert_eq!(out.configuration, MirrorConfiguration::IntersectingPair);
        match out.class {
            IsometryClass::Rotation { center, angle } => {
                assert!(center.max_abs_diff(&Point::xy(0.0, 0.0)) < 1e-12);
                assert!((angle.abs() - PI).abs() < 1e-12);
            }
            other => panic!("expected rotation, got {other:?}"),
        }

        let x0 = Hyperplane::line(1.0, 0.0, 0.0).unwrap();
        let out = classify_reflection_sequence(&[x0, x1.clone(), x2], tol).unwrap();
        assert_eq!(out.configuration, MirrorConfiguration::ParallelTriple);
        match out.class {
            IsometryClass::Reflection { axis } => {
                assert!(axis.approx_eq(&x1, 1e-12));
            }
            other => panic!("expected reflection, got {other:?}"),
        }

        let empty = classify_reflection_sequence(&[], tol).unwrap();
        assert_eq!(empty.configuration, MirrorConfiguration::Empty);
        assert_eq!(empty.class, IsometryClass::Identity);
    }

    #[test]
    fn concurrent_triple_composes_to_reflection() {
        // Three distinct diameters through the origin.
        let mirrors: Vec<Hyperplane> = [0.1f64, 0.9, 2.0]
            .iter()
            .map(|t| Hyperplane::line(t.cos(), t.sin(), 0.0).unwrap())
            .collect();
        let out = classify_reflection_sequence(&mirrors, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(out.configuration, MirrorConfiguration::ConcurrentTriple);
        assert!(matches!(out.class, IsometryClass::Reflection { .. }));
    }

    #[test]
    fn parity_examples() {
        let tol = DEFAULT_TOLERANCE;
        let rot = AffineMap::rotation2(FRAC_PI_2);
        assert_eq!(parity(&rot, tol).unwrap(), Parity::Direct);
        let refl = Hyperplane::line(1.0, -1.0, 0.0).unwrap().as_affine();
        assert_eq!(parity(&refl, tol).unwrap(), Parity::Indirect);
        // Odd mirror counts flip orientation.
        let mirrors: Vec<Hyperplane> = [0.3f64, 1.1, 2.4]
            .iter()
            .map(|t| Hyperplane::line(t.cos(), t.sin(), 0.5 * t).unwrap())
            .collect();
        let composed = compose_reflections(&mirrors, 2).unwrap();
        assert_eq!(parity(&composed, tol).unwrap(), Parity::Indirect);
    }

    #[test]
    fn decompose_3d_identity_and_single_mirror() {
        // Identity on a regular tetrahedron.
        let verts = vec![
            Point::xyz(1.0, 1.0, 1.0),
            Point::xyz(1.0, -1.0, -1.0),
            Point::xyz(-1.0, 1.0, -1.0),
            Point::xyz(-1.0, -1.0, 1.0),
        ];
        let c = Correspondence::new(verts.clone(), verts.clone()).unwrap();
        assert!(decompose(&c).is_empty());

        // A correspondence generated by the mirror x = 1 recovers one mirror.
        let mirror = Hyperplane::new(vec![1.0, 0.0, 0.0], 1.0).unwrap();
        let targets: Vec<Point> = verts.iter().map(|p| mirror.reflect(p).unwrap()).collect();
        let c = Correspondence::new(verts, targets).unwrap();
        let mirrors = decompose(&c);
        assert_eq!(mirrors.len(), 1);
        assert!(mirrors[0].approx_eq(&mirror, 1e-9));
    }

    #[test]
    fn synthesized_classes_round_trip() {
        let tol = DEFAULT_TOLERANCE;
        let cases = vec![
            IsometryClass::Identity,
            IsometryClass::Translation {
                vector: vec![3.0, -1.5],
            },
            IsometryClass::Rotation {
                center: Point::xy(2.0, -1.0),
                angle: 1.234,
            },
            IsometryClass::Reflection {
                axis: Hyperplane::line(0.6, 0.8, 1.7).unwrap(),
            },
            IsometryClass::GlideReflection {
                axis: Hyperplane::line(0.6, 0.8, 1.7).unwrap(),
                glide: vec![-0.8 * 2.5, 0.6 * 2.5],
            },
        ];
        for class in cases {
            let f = class.to_affine_map();
            let back = classify(&f, tol).unwrap();
            match (&class, &back) {
                (IsometryClass::Identity, IsometryClass::Identity) => {}
                (
                    IsometryClass::Translation { vector: v1 },
                    IsometryClass::Translation { vector: v2 },
                ) => assert!(vecn::dist2(v1, v2) < 1e-9),
                (
                    IsometryClass::Rotation {
                        center: c1,
                        angle: a1,
                    },
                    IsometryClass::Rotation {
                        center: c2,
                        angle: a2,
                    },
                ) => {
                    assert!(c1.max_abs_diff(c2) < 1e-9);
                    assert!((a1 - a2).abs() < 1e-9);
                }
                (
                    IsometryClass::Reflection { axis: h1 },
                    IsometryClass::Reflection { axis: h2 },
                ) => assert!(h1.approx_eq(h2, 1e-9)),
                (
                    IsometryClass::GlideReflection {
                        axis: h1,
                        glide: g1,
                    },
                    IsometryClass::GlideReflection {
                        axis: h2,
                        glide: g2,
                    },
                ) => {
                    assert!(h1.approx_eq(h2, 1e-9));
                    assert!(vecn::dist2(g1, g2) < 1e-9);
                }
                other => panic!("class changed under round trip: {other:?}"),
            }
        }
    }

    #[test]
    fn isometry_class_json_shape() {
        let rot = IsometryClass::Rotation {
            center: Point::xy(0.0, 0.0),
            angle: FRAC_PI_2,
        };
        let json = serde_json::to_value(&rot).unwrap();
        assert_eq!(json["type"], "rotation");
        assert_eq!(json["center"][0], 0.0);
        assert!(json["angle"].as_f64().unwrap() > 1.5);
    }

    fn random_planar_isometry() -> impl Strategy<Value = AffineMap> {
        (
            0.0..std::f64::consts::TAU,
            proptest::bool::ANY,
            -5.0..5.0f64,
            -5.0..5.0f64,
        )
            .prop_map(|(angle, flip, tx, ty)| {
                let mut m = Matrix::rotation2(angle);
                if flip {
                    m = m
                        .mul(&Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap())
                        .unwrap();
                }
                AffineMap::new(m, vec![tx, ty]).unwrap()
            })
    }

    proptest! {
        #[test]
        fn decompose_round_trips_random_isometries(
            f in random_planar_isometry(), px in -8.0..8.0f64, py in -8.0..8.0f64
        ) {
            let c = Correspondence::from_affine(&f).unwrap();
            let mirrors = decompose(&c);
            prop_assert!(mirrors.len() <= 3);
            // Mirror-count parity equals the determinant sign.
            prop_assert_eq!(mirrors.len() % 2 == 1, f.determinant() < 0.0);
            let composed = compose_reflections(&mirrors, 2).unwrap();
            let probe = Point::xy(px, py);
            prop_assert!(composed.apply(&probe).max_abs_diff(&f.apply(&probe)) <= 1e-9);
        }

        #[test]
        fn matched_points_stay_fixed_during_sweep(f in random_planar_isometry()) {
            let c = Correspondence::from_affine(&f).unwrap();
            let mirrors = decompose(&c);
            // Replay the sweep: once a reference point reaches its target, no
            // later mirror may move it.
            let mut current: Vec<Point> = c.sources().to_vec();
            for h in &mirrors {
                let matched: Vec<usize> = (0..current.len())
                    .filter(|&i| current[i].max_abs_diff(&c.targets()[i]) <= 1e-9)
                    .collect();
                current = current.iter().map(|p| h.reflect(p).unwrap()).collect();
                for i in matched {
                    prop_assert!(current[i].max_abs_diff(&c.targets()[i]) <= 1e-9);
                }
            }
        }

        #[test]
        fn locate_recovers_random_points(
            px in -9.0..9.0f64, py in -9.0..9.0f64,
            a0 in -9.0..9.0f64, a1 in -9.0..9.0f64,
            b0 in -9.0..9.0f64, b1 in -9.0..9.0f64,
            c0 in -9.0..9.0f64, c1 in -9.0..9.0f64,
        ) {
            let anchors = tri([(a0, a1), (b0, b1), (c0, c1)]);
            let ab = [b0 - a0, b1 - a1];
            let ac = [c0 - a0, c1 - a1];
            prop_assume!(
                vecn::cross2(ab, ac).abs() > 1e-2 * vecn::norm2(&ab) * vecn::norm2(&ac)
            );
            let p = Point::xy(px, py);
            let dists = [
                vecn::dist2(p.coords(), anchors[0].coords()),
                vecn::dist2(p.coords(), anchors[1].coords()),
                vecn::dist2(p.coords(), anchors[2].coords()),
            ];
            let located = locate_by_distances(&anchors, dists).unwrap();
            prop_assert!(located.max_abs_diff(&p) <= 1e-9);
        }
    }
}
