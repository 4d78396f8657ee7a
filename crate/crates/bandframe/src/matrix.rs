//! Small dense complex linear algebra for fiber matrices.
//!
//! Fibers never exceed 8x8, so the routines here favour directness over speed:
//! determinants by partial-pivot elimination, the N-dimensional cross product
//! by cofactor expansion, and two independent Moore-Penrose constructions for
//! tall matrices of full column rank. `nalgebra` supplies the LU inverse used
//! as a reference and the SVD behind [`singular_profile`].

use std::ops::{Index, IndexMut};

use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::C64;

/// Singular values below `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-8;

/// A square matrix is treated as singular when `|det|` falls below this
/// fraction of the product of its row norms (Hadamard's bound).
const DET_TOL: f64 = 1e-12;

/// Relative agreement demanded of the two pseudoinverse routes.
pub const PINV_AGREEMENT: f64 = 1e-10;

const MAX_CROSS_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Row-major constructor; rejects wrong lengths and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|z| !z.is_finite()) {
            return Err(Error::NonFinite(if bad.re.is_finite() { bad.im } else { bad.re }));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<C64> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| self[(r, k)] * rhs[(k, c)]).sum()
        }))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("subtraction of unequal shapes".into()));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])])
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self[(rows[r], c)])
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(det_in_place(self.rows, self.data.clone()))
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }

    /// Reference inverse through nalgebra's LU factorization.
    pub fn lu_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let det = self.determinant()?;
        check_nonsingular(self, det)?;
        self.to_nalgebra()
            .lu()
            .try_inverse()
            .map(|m| Self::from_nalgebra(&m))
            .ok_or(Error::SingularMatrix { det_modulus: det.norm() })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

fn det_in_place(n: usize, mut a: Vec<C64>) -> C64 {
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap_or(k);
        if a[pivot * n + k].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != k {
            for c in 0..n {
                a.swap(k * n + c, pivot * n + c);
            }
            det = -det;
        }
        let p = a[k * n + k];
        det *= p;
        for r in k + 1..n {
            let f = a[r * n + k] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for c in k + 1..n {
                let v = a[k * n + c];
                a[r * n + c] -= f * v;
            }
        }
    }
    det
}

fn check_nonsingular(m: &ComplexMatrix, det: C64) -> Result<()> {
    let hadamard: f64 = (0..m.rows)
        .map(|r| m.row(r).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product();
    if !(det.norm() > DET_TOL * hadamard) {
        return Err(Error::SingularMatrix { det_modulus: det.norm() });
    }
    Ok(())
}

/// Cross product of `N - 1` vectors in `C^N`.
///
/// Component `k` is `(-1)^k` times the minor obtained by deleting column `k`
/// from the stacked `(N-1) x N` matrix, which is the cofactor expansion of a
/// determinant whose first row holds the basis vectors. No conjugation is
/// applied, so the result is multilinear and alternating in its arguments.
///
/// ```
/// use bandframe::matrix::cross_product;
/// use num_complex::Complex64 as C;
/// let v = cross_product(&[vec![C::new(1.0, 0.0), C::new(0.0, 1.0)]]).unwrap();
/// assert_eq!(v, vec![C::new(0.0, 1.0), C::new(-1.0, 0.0)]);
/// ```
pub fn cross_product(vectors: &[Vec<C64>]) -> Result<Vec<C64>> {
    let n = vectors.len() + 1;
    if !(2..=MAX_CROSS_DIM).contains(&n) {
        return Err(Error::DimensionMismatch(format!(
            "cross product needs between 1 and {} vectors, got {}",
            MAX_CROSS_DIM - 1,
            vectors.len()
        )));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "cross product of {} vectors needs dimension {n}, got {}",
            vectors.len(),
            v.len()
        )));
    }
    let m = n - 1;
    let mut out = Vec::with_capacity(n);
    let mut minor = Vec::with_capacity(m * m);
    for k in 0..n {
        minor.clear();
        for v in vectors {
            minor.extend(v.iter().enumerate().filter(|(c, _)| *c != k).map(|(_, z)| *z));
        }
        let d = det_in_place(m, minor.clone());
        out.push(if k % 2 == 0 { d } else { -d });
    }
    Ok(out)
}

/// Bilinear (non-conjugating) dot product.
pub fn bilinear_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inverse assembled column by column from cross products of rows.
///
/// Column `k` of `M^{-1}` is `(-1)^k / det(M)` times the cross product of the
/// rows other than row `k` (zero-based `k`).
pub fn cofactor_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let det = m.determinant()?;
    check_nonsingular(m, det)?;
    if n == 1 {
        return ComplexMatrix::new(1, 1, vec![det.inv()]);
    }
    let rows: Vec<Vec<C64>> = (0..n).map(|r| m.row(r)).collect();
    let mut inv = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let others: Vec<Vec<C64>> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != k)
            .map(|(_, v)| v.clone())
            .collect();
        let c = cross_product(&others)?;
        let s = if k % 2 == 0 { det.inv() } else { -det.inv() };
        for (r, z) in c.into_iter().enumerate() {
            inv[(r, k)] = z * s;
        }
    }
    Ok(inv)
}

/// Both Moore-Penrose constructions for a tall `n x (n-1)` matrix.
#[derive(Debug, Clone)]
pub struct PseudoinversePair {
    /// `(A* A)^{-1} A*` with the small inverse taken by LU.
    pub normal: ComplexMatrix,
    /// First `n-1` rows of `[A | W]^{-1}`, `W` the cross product of the
    /// conjugated columns of `A`.
    pub bordered: ComplexMatrix,
    /// Largest entrywise difference divided by the largest entry.
    pub relative_discrepancy: f64,
    /// `sigma_max / sigma_min` of `A`.
    pub condition: f64,
}

/// Computes [`PseudoinversePair`] after checking that `A` has full column rank.
pub fn mp_inverse_pair(a: &ComplexMatrix) -> Result<PseudoinversePair> {
    let (n, m) = (a.rows(), a.cols());
    if n < 2 || m + 1 != n {
        return Err(Error::DimensionMismatch(format!("expected an n x (n-1) matrix, got {n}x{m}")));
    }
    let profile = singular_profile(a);
    if profile.numerical_rank < m {
        return Err(Error::RankDeficient {
            rank: profile.numerical_rank,
            expected: m,
        });
    }
    let condition = profile.singular_values[0] / profile.singular_values[m - 1];

    let a_star = a.adjoint();
    let normal = a_star.matmul(a)?.lu_inverse()?.matmul(&a_star)?;

    let conj_cols: Vec<Vec<C64>> = (0..m).map(|c| a.col(c).iter().map(|z| z.conj()).collect()).collect();
    let w = cross_product(&conj_cols)?;
    let bordered_full = ComplexMatrix::from_fn(n, n, |r, c| if c < m { a[(r, c)] } else { w[r] });
    let inv = cofactor_inverse(&bordered_full)?;
    let bordered = inv.select_rows(&(0..m).collect::<Vec<_>>());

    let scale = bordered.max_abs().max(f64::MIN_POSITIVE);
    let relative_discrepancy = normal.max_abs_diff(&bordered) / scale;
    Ok(PseudoinversePair {
        normal,
        bordered,
        relative_discrepancy,
        condition,
    })
}

/// Moore-Penrose inverse of a tall `n x (n-1)` matrix of full column rank.
///
/// Both constructions of [`mp_inverse_pair`] are evaluated; the bordered one
/// is returned once they agree to [`PINV_AGREEMENT`] relative. The normal
/// equations square the condition number, so for badly conditioned input the
/// bar is relaxed to what that route can deliver (`64 eps kappa^2`).
pub fn mp_inverse_tall(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let pair = mp_inverse_pair(a)?;
    let tol = PINV_AGREEMENT.max(64.0 * f64::EPSILON * pair.condition * pair.condition);
    if pair.relative_discrepancy > tol {
        return Err(Error::PseudoinverseMismatch {
            discrepancy: pair.relative_discrepancy,
        });
    }
    Ok(pair.bordered)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularProfile {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    /// `|det A|` for square input.
    pub det_modulus: Option<f64>,
    /// Sum of squared moduli of all minors of maximal order.
    pub minor_sum: f64,
}

/// Singular values (via SVD), numerical rank, and the maximal-minor sum.
pub fn singular_profile(a: &ComplexMatrix) -> SingularProfile {
    let mut singular_values: Vec<f64> = if a.rows() == 0 || a.cols() == 0 {
        Vec::new()
    } else {
        a.to_nalgebra().singular_values().iter().copied().collect()
    };
    singular_values.sort_by(|x, y| y.total_cmp(x));
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let numerical_rank = if smax == 0.0 {
        0
    } else {
        singular_values.iter().filter(|&&s| s >= RANK_TOL * smax).count()
    };
    let det_modulus = a.is_square().then(|| det_in_place(a.rows(), a.as_slice().to_vec()).norm());
    SingularProfile {
        singular_values,
        numerical_rank,
        det_modulus,
        minor_sum: minor_sum(a),
    }
}

/// Sum of `|minor|^2` over all square submatrices of order `min(rows, cols)`.
pub fn minor_sum(a: &ComplexMatrix) -> f64 {
    let (r, c) = (a.rows(), a.cols());
    if r == 0 || c == 0 {
        return 0.0;
    }
    if r <= c {
        (0..c)
            .combinations(r)
            .map(|cols| a.select_cols(&cols).determinant().map_or(0.0, |d| d.norm_sqr()))
            .sum()
    } else {
        (0..r)
            .combinations(c)
            .map(|rows| a.select_rows(&rows).determinant().map_or(0.0, |d| d.norm_sqr()))
            .sum()
    }
}
