//! Affine maps `x -> Mx + b` and oriented hyperplane mirrors.
//!
//! These are the carriers for every isometry in the crate: reflections
//! convert to affine maps in Householder form, and compositions of mirrors
//! are accumulated as matrix products.
//!
//! # Composition order
//!
//! `f.compose(&g)` applies `g` first, then `f` — ordinary function
//! composition `f ∘ g`. A mirror sequence `[m1, m2, m3]` in application
//! order therefore composes as `m3 ∘ m2 ∘ m1`; see
//! [`compose_reflections`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::Point;
use crate::vecn;

/// Relative determinant threshold below which a matrix is deemed singular.
const SINGULARITY_TOLERANCE: f64 = 1e-12;

/// Euclidean length below which two points count as coincident.
const COINCIDENCE_TOLERANCE: f64 = 1e-12;

/// Dense row-major n-by-n real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    elems: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let mut elems = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::NonFiniteCoordinate);
                }
                elems.push(v);
            }
        }
        Ok(Self { n, elems })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self {
            n,
            elems: vec![0.0; n * n],
        };
        for i in 0..n {
            m.elems[i * n + i] = 1.0;
        }
        m
    }

    /// Planar rotation by `angle` radians, counterclockwise.
    pub fn rotation2(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_rows(vec![vec![c, -s], vec![s, c]]).expect("finite entries")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.elems[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.elems[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self {
            n: self.n,
            elems: vec![0.0; self.n * self.n],
        };
        for i in 0..self.n {
            for j in 0..self.n {
                t.elems[j * self.n + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut out = Self {
            n,
            elems: vec![0.0; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.elems[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        (0..self.n)
            .map(|i| vecn::dot(&self.elems[i * self.n..(i + 1) * self.n], v))
            .collect()
    }

    /// Determinant: closed form for n = 2 and n = 3, LU with partial
    /// pivoting for larger n.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        match n {
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            3 => {
                let m = |i, j| self.get(i, j);
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            _ => {
                let mut a = self.elems.clone();
                let mut det = 1.0;
                for col in 0..n {
                    let pivot = (col..n)
                        .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                        .unwrap();
                    if a[pivot * n + col] == 0.0 {
                        return 0.0;
                    }
                    if pivot != col {
                        for j in 0..n {
                            a.swap(col * n + j, pivot * n + j);
                        }
                        det = -det;
                    }
                    det *= a[col * n + col];
                    for i in col + 1..n {
                        let f = a[i * n + col] / a[col * n + col];
                        for j in col..n {
                            a[i * n + j] -= f * a[col * n + j];
                        }
                    }
                }
                det
            }
        }
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        if n == 2 {
            let det = self.determinant();
            if det.abs() <= SINGULARITY_TOLERANCE * self.det_scale() {
                return Err(Error::SingularMatrix { det });
            }
            return Matrix::from_rows(vec![
                vec![self.get(1, 1) / det, -self.get(0, 1) / det],
                vec![-self.get(1, 0) / det, self.get(0, 0) / det],
            ]);
        }
        let mut a = self.elems.clone();
        let mut inv = Matrix::identity(n).elems;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .unwrap();
            let p = a[pivot * n + col];
            if p.abs() <= SINGULARITY_TOLERANCE * self.det_scale().max(f64::MIN_POSITIVE) {
                return Err(Error::SingularMatrix {
                    det: self.determinant(),
                });
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let d = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= d;
                inv[col * n + j] /= d;
            }
            for i in 0..n {
                if i != col {
                    let f = a[i * n + col];
                    if f != 0.0 {
                        for j in 0..n {
                            a[i * n + j] -= f * a[col * n + j];
                            inv[i * n + j] -= f * inv[col * n + j];
                        }
                    }
                }
            }
        }
        Ok(Matrix { n, elems: inv })
    }

    /// Hadamard-style magnitude bound used to make the singularity test
    /// relative to the matrix scale.
    fn det_scale(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.elems[i * self.n..(i + 1) * self.n]
                    .iter()
                    .fold(0.0, |m: f64, v| m.max(v.abs()))
            })
            .product()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.elems
            .iter()
            .zip(&other.elems)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Max-abs deviation of `M^T M` from the identity.
    pub fn orthogonality_deviation(&self) -> f64 {
        let gram = self.transpose().mul(self).expect("same dimension");
        gram.max_abs_diff(&Matrix::identity(self.n))
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

#[derive(Deserialize)]
struct RawAffineMap {
    matrix: Matrix,
    translation: Vec<f64>,
}

/// An invertible affine transformation `x -> Mx + b`.
///
/// Invertibility (|det M| above a scale-relative threshold) is checked at
/// construction, including deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAffineMap")]
pub struct AffineMap {
    matrix: Matrix,
    translation: Vec<f64>,
}

impl TryFrom<RawAffineMap> for AffineMap {
    type Error = Error;
    fn try_from(raw: RawAffineMap) -> Result<Self> {
        AffineMap::new(raw.matrix, raw.translation)
    }
}

impl AffineMap {
    pub fn new(matrix: Matrix, translation: Vec<f64>) -> Result<Self> {
        if translation.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                found: translation.len(),
            });
        }
        if translation.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        let det = matrix.determinant();
        let scale = matrix.det_scale();
        if scale == 0.0 || det.abs() <= SINGULARITY_TOLERANCE * scale {
            return Err(Error::SingularMatrix { det });
        }
        Ok(Self {
            matrix,
            translation,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Matrix::identity(n),
            translation: vec![0.0; n],
        }
    }

    /// Pure translation by `v`.
    pub fn translation(v: Vec<f64>) -> Result<Self> {
        let n = v.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        Self::new(Matrix::identity(n), v)
    }

    /// Linear map (zero translation).
    pub fn linear(matrix: Matrix) -> Result<Self> {
        let n = matrix.dim();
        Self::new(matrix, vec![0.0; n])
    }

    /// Planar rotation about the origin.
    pub fn rotation2(angle: f64) -> Self {
        Self {
            matrix: Matrix::rotation2(angle),
            translation: vec![0.0; 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn translation_vector(&self) -> &[f64] {
        &self.translation
    }

    /// Applies the map. Panics if the point dimension does not match;
    /// dimension agreement is the caller's structural responsibility.
    pub fn apply(&self, x: &Point) -> Point {
        Point::from_raw(self.apply_raw(x.coords()))
    }

    pub(crate) fn apply_raw(&self, x: &[f64]) -> Vec<f64> {
        vecn::add(&self.matrix.mul_vec(x), &self.translation)
    }

    /// `f.compose(&g)` applies `g` first: the result is `f ∘ g`.
    pub fn compose(&self, g: &AffineMap) -> Result<AffineMap> {
        if self.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: g.dim(),
            });
        }
        Ok(AffineMap {
            matrix: self.matrix.mul(&g.matrix)?,
            translation: vecn::add(&self.matrix.mul_vec(&g.translation), &self.translation),
        })
    }

    pub fn invert(&self) -> AffineMap {
        let inv = self
            .matrix
            .inverse()
            .expect("construction guarantees invertibility");
        let neg_b: Vec<f64> = vecn::scale(&self.translation, -1.0);
        let translation = inv.mul_vec(&neg_b);
        AffineMap {
            matrix: inv,
            translation,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Max-abs deviation of the linear part from orthogonality.
    pub fn orthogonality_deviation(&self) -> f64 {
        self.matrix.orthogonality_deviation()
    }
}

#[derive(Deserialize)]
struct RawHyperplane {
    normal: Vec<f64>,
    offset: f64,
}

/// An oriented mirror `{x : normal · x = offset}` with unit normal.
///
/// Construction normalizes the given normal (rescaling the offset with it),
/// so the unit-length invariant always holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHyperplane")]
pub struct Hyperplane {
    normal: Vec<f64>,
    offset: f64,
}

impl TryFrom<RawHyperplane> for Hyperplane {
    type Error = Error;
    fn try_from(raw: RawHyperplane) -> Result<Self> {
        Hyperplane::new(raw.normal, raw.offset)
    }
}

impl Hyperplane {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.len() < 2 {
            return Err(Error::DimensionTooSmall(normal.len()));
        }
        if normal.iter().any(|v| !v.is_finite()) || !offset.is_finite() {
            return Err(Error::NonFiniteCoordinate);
        }
        let len = vecn::norm2(&normal);
        if len <= COINCIDENCE_TOLERANCE {
            return Err(Error::ZeroNormal);
        }
        Ok(Self {
            normal: vecn::scale(&normal, 1.0 / len),
            offset: offset / len,
        })
    }

    /// Planar line `{(x, y) : nx*x + ny*y = offset}`.
    pub fn line(nx: f64, ny: f64, offset: f64) -> Result<Self> {
        Self::new(vec![nx, ny], offset)
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Mirror image of `x`: the hyperplane is the Euclidean perpendicular
    /// bisector of `x` and the result, and reflecting twice returns `x`.
    pub fn reflect(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(Point::from_raw(self.reflect_raw(x.coords())))
    }

    pub(crate) fn reflect_raw(&self, x: &[f64]) -> Vec<f64> {
        let t = 2.0 * (vecn::dot(&self.normal, x) - self.offset);
        x.iter()
            .zip(&self.normal)
            .map(|(xi, ni)| xi - t * ni)
            .collect()
    }

    /// Householder form: matrix `I - 2 n n^T` (orthogonal, det -1) and
    /// translation `2 * offset * n`. Applying the result equals `reflect`.
    pub fn as_affine(&self) -> AffineMap {
        let n = self.dim();
        let mut rows = vec![vec![0.0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f64::from(u8::from(i == j)) - 2.0 * self.normal[i] * self.normal[j];
            }
        }
        AffineMap {
            matrix: Matrix::from_rows(rows).expect("finite entries"),
            translation: vecn::scale(&self.normal, 2.0 * self.offset),
        }
    }

    /// The mirror swapping `a` and `b`: normal along `b - a`, passing
    /// through the midpoint.
    pub fn perpendicular_bisector(a: &Point, b: &Point) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let diff = vecn::sub(b.coords(), a.coords());
        let len = vecn::norm2(&diff);
        if len <= COINCIDENCE_TOLERANCE {
            return Err(Error::CoincidentPoints);
        }
        let normal = vecn::scale(&diff, 1.0 / len);
        let midpoint = vecn::scale(&vecn::add(a.coords(), b.coords()), 0.5);
        Ok(Self {
            offset: vecn::dot(&normal, &midpoint),
            normal,
        })
    }

    /// Same mirror up to a simultaneous sign flip of (normal, offset).
    pub fn approx_eq(&self, other: &Hyperplane, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let same = |sign: f64| {
            self.normal
                .iter()
                .zip(&other.normal)
                .all(|(a, b)| (a - sign * b).abs() <= tol)
                && (self.offset - sign * other.offset).abs() <= tol
        };
        same(1.0) || same(-1.0)
    }
}

/// Composes mirrors in application order: result = `mirrors[k-1] ∘ ... ∘ mirrors[0]`.
/// An empty list yields the identity of the given dimension.
pub fn compose_reflections(mirrors: &[Hyperplane], dim: usize) -> Result<AffineMap> {
    let mut acc = AffineMap::identity(dim);
    for m in mirrors {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.dim(),
            });
        }
        acc = m.as_affine().compose(&acc)?;
    }
    Ok(acc)
}
