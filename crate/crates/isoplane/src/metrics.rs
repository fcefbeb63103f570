//! The family of lp distances on real coordinate planes.
//!
//! A [`Metric`] is either `Lp(p)` with `1 <= p < inf` or the max metric
//! `Linf`. Exponents below 1 are rejected at construction because the
//! triangle inequality fails: with p = 0.5 the distance from (1,0) to (0,1)
//! would be 4 while the detour through the origin costs only 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents within this distance of 1 are snapped to exactly 1, so the
/// 1/p exponent cannot blow up just above the validity boundary.
pub const P_SNAP_TOLERANCE: f64 = 1e-12;

/// Default absolute tolerance for "these two distances are equal" checks.
/// Call sites that need something tighter or looser pass their own.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A point with finite real coordinates and a fixed dimension (at least 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Validates finiteness and dimension (n >= 2).
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Self { coords })
    }

    /// Planar point. Panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        Self::new(vec![x, y]).expect("finite planar coordinates")
    }

    /// Spatial point. Panics on non-finite input.
    pub fn xyz(x: f64, y: f64, z: f64) -> Self {
        Self::new(vec![x, y, z]).expect("finite spatial coordinates")
    }

    /// The origin of the n-dimensional plane.
    pub fn origin(dim: usize) -> Self {
        Self::new(vec![0.0; dim]).expect("valid dimension")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 2 && coords.iter().all(|c| c.is_finite()));
        Self { coords }
    }

    /// Componentwise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum MetricKind {
    Lp(f64),
    Linf,
}

/// A validated distance function: lp with `1 <= p < inf`, or the max metric.
///
/// Construction is the only gate; once a `Metric` exists, every exponent it
/// carries is valid, and `Linf` is a distinct tag with exact max semantics
/// rather than a large finite p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PExpr", into = "PExpr")]
pub struct Metric {
    kind: MetricKind,
}

/// Serialized form: a number for finite p, the string "inf" for the max metric.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PExpr {
    Num(f64),
    Str(String),
}

impl TryFrom<PExpr> for Metric {
    type Error = Error;
    fn try_from(expr: PExpr) -> Result<Self> {
        match expr {
            PExpr::Num(p) => Metric::validate_p(p),
            PExpr::Str(s)
                if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") =>
            {
                Ok(Metric::linf())
            }
            PExpr::Str(s) => s
                .parse::<f64>()
                .ok()
                .map_or(Err(Error::NonFiniteCoordinate), Metric::validate_p),
        }
    }
}

impl From<Metric> for PExpr {
    fn from(m: Metric) -> Self {
        match m.kind {
            MetricKind::Lp(p) => PExpr::Num(p),
            MetricKind::Linf => PExpr::Str("inf".to_owned()),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            MetricKind::Lp(p) => write!(f, "l{p}"),
            MetricKind::Linf => write!(f, "linf"),
        }
    }
}

impl Metric {
    /// Validates an exponent. `f64::INFINITY` yields the max metric;
    /// finite `p >= 1` yields `Lp(p)` (values within [`P_SNAP_TOLERANCE`]
    /// of 1 are snapped to exactly 1); anything below 1 is rejected with
    /// the counterexample distances in the error payload.
    pub fn validate_p(p: f64) -> Result<Self> {
        if p.is_nan() {
            return Err(Error::NonFiniteCoordinate);
        }
        if p == f64::INFINITY {
            return Ok(Self {
                kind: MetricKind::Linf,
            });
        }
        if (p - 1.0).abs() <= P_SNAP_TOLERANCE {
            return Ok(Self {
                kind: MetricKind::Lp(1.0),
            });
        }
        if p < 1.0 {
            // |1-0|^p + |0-1|^p = 2, so the direct distance is 2^(1/p),
            // while both legs through the origin have unit length.
            return Err(Error::InvalidExponent {
                p,
                direct: 2.0_f64.powf(1.0 / p),
                via_origin: 2.0,
            });
        }
        Ok(Self {
            kind: MetricKind::Lp(p),
        })
    }

    /// lp metric with a finite exponent.
    pub fn lp(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(Self::linf());
        }
        Self::validate_p(p)
    }

    pub fn taxicab() -> Self {
        Self {
            kind: MetricKind::Lp(1.0),
        }
    }

    pub fn euclidean() -> Self {
        Self {
            kind: MetricKind::Lp(2.0),
        }
    }

    pub fn linf() -> Self {
        Self {
            kind: MetricKind::Linf,
        }
    }

    /// The exponent, or `None` for the max metric.
    pub fn p(&self) -> Option<f64> {
        match self.kind {
            MetricKind::Lp(p) => Some(p),
            MetricKind::Linf => None,
        }
    }

    pub fn is_linf(&self) -> bool {
        matches!(self.kind, MetricKind::Linf)
    }

    /// True exactly for `Lp(p)` with `1 < p < inf`: the unit ball boundary
    /// contains no nontrivial segment. False for taxicab and the max metric,
    /// whose unit circles are squares.
    pub fn is_strictly_convex(&self) -> bool {
        match self.kind {
            MetricKind::Lp(p) => p > 1.0,
            MetricKind::Linf => false,
        }
    }

    /// Distance between two points of equal dimension.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Ok(self.eval(a.coords().iter().zip(b.coords()).map(|(x, y)| x - y)))
    }

    /// Length of a vector: `distance(origin, v)`, absolutely homogeneous.
    pub fn norm(&self, v: &Point) -> f64 {
        self.eval(v.coords().iter().copied())
    }

    /// Evaluates the metric on a displacement. Exact sum for p = 1 and
    /// exact max for Linf; general p factors out the largest |delta| before
    /// exponentiation so large-magnitude inputs cannot overflow.
    pub(crate) fn eval(&self, deltas: impl Iterator<Item = f64> + Clone) -> f64 {
        match self.kind {
            MetricKind::Lp(p) => {
                if p == 1.0 {
                    return deltas.map(f64::abs).sum();
                }
                let max = deltas.clone().map(f64::abs).fold(0.0, f64::max);
                if max == 0.0 {
                    return 0.0;
                }
                let sum: f64 = deltas.map(|d| (d.abs() / max).powf(p)).sum();
                max * sum.powf(1.0 / p)
            }
            MetricKind::Linf => deltas.map(f64::abs).fold(0.0, f64::max),
        }
    }

    pub(crate) fn eval2(&self, dx: f64, dy: f64) -> f64 {
        self.eval([dx, dy].into_iter())
    }
}

/// Taxicab distance between planar coordinate pairs; exact on the sums of
/// the coordinate displacements.
pub fn taxicab_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).abs() + (b[1] - a[1]).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_p_below_one_with_counterexample() {
        match Metric::validate_p(0.5) {
            Err(Error::InvalidExponent {
                p,
                direct,
                via_origin,
            }) => {
                assert_eq!(p, 0.5);
                assert_eq!(direct, 4.0);
                assert_eq!(via_origin, 2.0);
            }
            other => panic!("expected InvalidExponent, got {other:?}"),
        }
        assert!(Metric::validate_p(0.999).is_err());
        assert!(Metric::validate_p(-3.0).is_err());
        assert!(Metric::validate_p(f64::NAN).is_err());
    }

    #[test]
    fn accepts_boundary_and_infinity() {
        assert_eq!(Metric::validate_p(1.0).unwrap(), Metric::taxicab());
        // Snap band around 1.
        assert_eq!(Metric::validate_p(1.0 - 1e-13).unwrap().p(), Some(1.0));
        assert_eq!(Metric::validate_p(1.0 + 1e-13).unwrap().p(), Some(1.0));
        assert!(Metric::validate_p(f64::INFINITY).unwrap().is_linf());
    }

    #[test]
    fn distance_examples() {
        let l1 = Metric::taxicab();
        let l2 = Metric::euclidean();
        let linf = Metric::linf();
        assert_eq!(
            l1.distance(&Point::xy(0.0, 0.0), &Point::xy(1.0, 2.0))
                .unwrap(),
            3.0
        );
        assert_eq!(
            l2.distance(&Point::xy(0.0, 0.0), &Point::xy(3.0, 4.0))
                .unwrap(),
            5.0
        );
        // The four corners of the taxicab unit circle are pairwise 2 apart.
        assert_eq!(
            l1.distance(&Point::xy(1.0, 0.0), &Point::xy(0.0, 1.0))
                .unwrap(),
            2.0
        );
        assert_eq!(
            linf.distance(&Point::xy(0.0, 0.0), &Point::xy(3.0, -4.0))
                .unwrap(),
            4.0
        );
    }

    #[test]
    fn distance_dimension_mismatch() {
        let err = Metric::taxicab()
            .distance(&Point::xy(0.0, 0.0), &Point::xyz(1.0, 2.0, 3.0))
            .unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn norm_examples() {
        let l3 = Metric::lp(3.0).unwrap();
        assert_eq!(l3.norm(&Point::xy(1.0, 0.0)), 1.0);
        // p = 3 norm of the unit-circle point at 45 degrees: (2 * 2^(-3/2))^(1/3).
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let expected = (2.0 * 2.0_f64.powf(-1.5)).powf(1.0 / 3.0);
        assert!((l3.norm(&Point::xy(c, c)) - expected).abs() < 1e-15);
        assert!((expected - 0.890899).abs() < 1e-6);
        // The obstruction point on the taxicab unit circle.
        assert_eq!(Metric::taxicab().norm(&Point::xy(-0.5, 0.5)), 1.0);
    }

    #[test]
    fn norm_does_not_overflow_on_huge_points() {
        let l7 = Metric::lp(7.0).unwrap();
        let n = l7.norm(&Point::xy(1e300, 1e300));
        assert!(n.is_finite());
        assert!((n / 1e300 - 2.0_f64.powf(1.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn strict_convexity() {
        assert!(!Metric::taxicab().is_strictly_convex());
        assert!(Metric::euclidean().is_strictly_convex());
        assert!(Metric::lp(1.5).unwrap().is_strictly_convex());
        assert!(!Metric::linf().is_strictly_convex());
        // Witnesses: midpoints of boundary segments stay on the unit sphere.
        let l1 = Metric::taxicab();
        assert_eq!(l1.norm(&Point::xy(0.5, 0.5)), 1.0);
        let linf = Metric::linf();
        assert_eq!(linf.norm(&Point::xy(1.0, 0.0)), 1.0);
        assert_eq!(linf.norm(&Point::xy(1.0, 1.0)), 1.0);
        assert_eq!(linf.norm(&Point::xy(1.0, -1.0)), 1.0);
    }

    #[test]
    fn point_validation() {
        assert!(Point::new(vec![1.0]).is_err());
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(Point::new(vec![1.0, 2.0, 3.0, 4.0]).is_ok());
    }

    #[test]
    fn metric_json_round_trip() {
        let m = Metric::lp(1.5).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), "1.5");
        let linf: Metric = serde_json::from_str("\"inf\"").unwrap();
        assert!(linf.is_linf());
        assert!(serde_json::from_str::<Metric>("0.5").is_err());
    }

    fn metric_strategy() -> impl Strategy<Value = Metric> {
        prop_oneof![
            Just(Metric::taxicab()),
            Just(Metric::euclidean()),
            Just(Metric::linf()),
            (1.0..8.0f64).prop_map(|p| Metric::lp(p).unwrap()),
        ]
    }

    fn point2() -> impl Strategy<Value = Point> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::xy(x, y))
    }

    proptest! {
        #[test]
        fn triangle_inequality(m in metric_strategy(), a in point2(), b in point2(), c in point2()) {
            let ab = m.distance(&a, &b).unwrap();
            let bc = m.distance(&b, &c).unwrap();
            let ac = m.distance(&a, &c).unwrap();
            prop_assert!(ab + bc >= ac - 1e-12);
        }

        #[test]
        fn symmetry_is_exact(m in metric_strategy(), a in point2(), b in point2()) {
            prop_assert_eq!(m.distance(&a, &b).unwrap(), m.distance(&b, &a).unwrap());
        }

        #[test]
        fn monotone_in_p(a in point2(), b in point2(), p1 in 1.0..12.0f64, p2 in 1.0..12.0f64) {
            let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            let d_lo = Metric::lp(lo).unwrap().distance(&a, &b).unwrap();
            let d_hi = Metric::lp(hi).unwrap().distance(&a, &b).unwrap();
            let d_inf = Metric::linf().distance(&a, &b).unwrap();
            prop_assert!(d_lo >= d_hi - 1e-12);
            prop_assert!(d_hi >= d_inf - 1e-12);
        }

        #[test]
        fn norm_absolutely_homogeneous(m in metric_strategy(), v in point2(), alpha in -10.0..10.0f64) {
            let scaled = Point::xy(alpha * v[0], alpha * v[1]);
            prop_assert!((m.norm(&scaled) - alpha.abs() * m.norm(&v)).abs() <= 1e-12);
        }

        #[test]
        fn zero_iff_equal(m in metric_strategy(), a in point2()) {
            prop_assert_eq!(m.distance(&a, &a).unwrap(), 0.0);
        }
    }
}
