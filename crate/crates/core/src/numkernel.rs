//! Dense linear-algebra kernel: the [`Mat`] carrier plus Hermitian
//! eigendecomposition, SVD and orthonormal row completion.
//!
//! Every matrix is stored with complex entries and a [`Field`] tag. Real
//! matrices keep all imaginary parts at exactly zero and are routed through
//! the real-valued solvers so that results stay bit-for-bit real.
//!
//! All decompositions are normalized so that repeated calls on the same input
//! give identical output: eigenvalues and singular values are sorted in
//! descending order, and each eigenvector has its first largest-magnitude
//! component made real and positive.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{NaimarkError, Result};

/// Relative tolerance used to decide which component counts as "largest" when
/// fixing the phase of a vector. Components within this fraction of the
/// maximum magnitude are treated as ties and the first one wins.
const PIVOT_TIE: f64 = 1e-10;

/// Scalar field of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

/// Dense matrix over the real or complex numbers in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    data: DMatrix<Complex64>,
    field: Field,
}

impl Mat {
    /// Wraps a complex matrix, checking that every entry is finite and, for
    /// `Field::Real`, that every imaginary part is zero.
    pub fn from_dmatrix(data: DMatrix<Complex64>, field: Field) -> Result<Mat> {
        if let Some((i, z)) = data
            .iter()
            .enumerate()
            .find(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(NaimarkError::invalid(format!(
                "non-finite entry {z} at column-major offset {i}"
            )));
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(NaimarkError::invalid(
                "real matrix has a non-zero imaginary part",
            ));
        }
        Ok(Mat { data, field })
    }

    /// Wraps the output of a computation. Imaginary parts are cleared for real
    /// matrices.
    pub(crate) fn from_computed(mut data: DMatrix<Complex64>, field: Field) -> Mat {
        if field == Field::Real {
            data.iter_mut().for_each(|z| z.im = 0.0);
        }
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Mat { data, field }
    }

    pub fn from_real_dmatrix(data: &DMatrix<f64>) -> Result<Mat> {
        Mat::from_dmatrix(data.map(|x| Complex64::new(x, 0.0)), Field::Real)
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, row_major: &[f64]) -> Result<Mat> {
        check_len(rows, cols, row_major.len())?;
        let data = DMatrix::from_row_iterator(
            rows,
            cols,
            row_major.iter().map(|&x| Complex64::new(x, 0.0)),
        );
        Mat::from_dmatrix(data, Field::Real)
    }

    /// Builds a complex matrix from row-major entries.
    pub fn from_complex(rows: usize, cols: usize, row_major: &[Complex64]) -> Result<Mat> {
        check_len(rows, cols, row_major.len())?;
        let data = DMatrix::from_row_iterator(rows, cols, row_major.iter().copied());
        Mat::from_dmatrix(data, Field::Complex)
    }

    /// Builds a real matrix from a slice of rows.
    pub fn real_from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(NaimarkError::invalid("ragged rows"));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.as_ref().to_vec()).collect();
        Mat::from_real(rows.len(), cols, &flat)
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Mat {
        Mat {
            data: DMatrix::zeros(rows, cols),
            field,
        }
    }

    pub fn identity(n: usize, field: Field) -> Mat {
        Mat {
            data: DMatrix::identity(n, n),
            field,
        }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.data
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    /// Reinterprets the matrix over a larger field. Narrowing to `Real` checks
    /// that the imaginary parts vanish.
    pub fn with_field(self, field: Field) -> Result<Mat> {
        Mat::from_dmatrix(self.data, field)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat::from_computed(self.data.adjoint(), self.field)
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols(),
            other.rows(),
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows(),
            self.cols(),
            other.rows(),
            other.cols()
        );
        Mat::from_computed(&self.data * &other.data, self.field.join(other.field))
    }

    pub fn scale(&self, factor: f64) -> Mat {
        Mat::from_computed(self.data.map(|z| z * factor), self.field)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "add dimension mismatch");
        Mat::from_computed(&self.data + &other.data, self.field.join(other.field))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "sub dimension mismatch");
        Mat::from_computed(&self.data - &other.data, self.field.join(other.field))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    /// Selects the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        Mat::from_computed(self.data.select_columns(cols), self.field)
    }

    /// Selects the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        Mat::from_computed(self.data.select_rows(rows), self.field)
    }

    pub fn column_range(&self, start: usize, len: usize) -> Mat {
        Mat::from_computed(self.data.columns(start, len).into_owned(), self.field)
    }

    pub fn row_range(&self, start: usize, len: usize) -> Mat {
        Mat::from_computed(self.data.rows(start, len).into_owned(), self.field)
    }

    /// Horizontal concatenation. All blocks must have the same row count.
    pub fn hstack(blocks: &[&Mat]) -> Mat {
        let rows = blocks.first().map_or(0, |b| b.rows());
        assert!(blocks.iter().all(|b| b.rows() == rows), "hstack row mismatch");
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let field = blocks.iter().fold(Field::Real, |f, b| f.join(b.field));
        let mut data = DMatrix::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            data.columns_mut(at, b.cols()).copy_from(&b.data);
            at += b.cols();
        }
        Mat::from_computed(data, field)
    }

    /// Vertical concatenation. All blocks must have the same column count.
    pub fn vstack(blocks: &[&Mat]) -> Mat {
        let cols = blocks.first().map_or(0, |b| b.cols());
        assert!(blocks.iter().all(|b| b.cols() == cols), "vstack column mismatch");
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let field = blocks.iter().fold(Field::Real, |f, b| f.join(b.field));
        let mut data = DMatrix::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            data.rows_mut(at, b.rows()).copy_from(&b.data);
            at += b.rows();
        }
        Mat::from_computed(data, field)
    }

    /// Largest entry magnitude, 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference magnitude.
    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn column_norm(&self, col: usize) -> f64 {
        self.data.column(col).norm()
    }

    /// `max |S - S*|` for a square matrix.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |A*A - I|`, i.e. how far the columns are from orthonormal.
    pub fn orthonormal_columns_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        gram.max_abs_diff(&Mat::identity(self.cols(), self.field))
    }

    /// `max |AA* - I|`, i.e. how far the rows are from orthonormal.
    pub fn orthonormal_rows_defect(&self) -> f64 {
        let gram = self.matmul(&self.adjoint());
        gram.max_abs_diff(&Mat::identity(self.rows(), self.field))
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }
}


fn check_len(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows.checked_mul(cols) != Some(len) {
        return Err(NaimarkError::invalid(format!(
            "{rows}x{cols} matrix needs {} entries, got {len}",
            rows.saturating_mul(cols)
        )));
    }
    Ok(())
}

fn lift(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Index of the first component whose magnitude is within [`PIVOT_TIE`] of the
/// largest one. `None` for the zero vector.
fn pivot_index<'a, I>(values: I) -> Option<usize>
where
    I: Iterator<Item = &'a Complex64> + Clone,
{
    let max = values.clone().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    values.map(|z| z.norm()).position(|m| m >= max * (1.0 - PIVOT_TIE))
}

/// Pivot index, pivot magnitude and the unit phase that makes the pivot real
/// and positive.
fn pivot_phase<'a, I>(values: I) -> Option<(usize, f64, Complex64)>
where
    I: Iterator<Item = &'a Complex64> + Clone,
{
    let p = pivot_index(values.clone())?;
    let pivot = *values.clone().nth(p)?;
    let mag = pivot.norm();
    Some((p, mag, pivot.conj() / mag))
}

fn normalize_columns(m: &mut DMatrix<Complex64>) {
    for j in 0..m.ncols() {
        if let Some((p, mag, phase)) = pivot_phase(m.column(j).iter()) {
            m.column_mut(j).iter_mut().for_each(|z| *z *= phase);
            m[(p, j)] = Complex64::new(mag, 0.0);
        }
    }
}

/// Descending eigenvalues with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    /// Column `m` pairs with `eigenvalues[m]`.
    pub eigenvectors: Mat,
}

impl EigResult {
    /// `U diag(λ) U*`.
    pub fn recompose(&self) -> Mat {
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        ));
        let u = self.eigenvectors.as_dmatrix();
        Mat::from_computed(u * lambda * u.adjoint(), self.eigenvectors.field())
    }
}

fn check_hermitian(s: &Mat) -> Result<()> {
    if s.rows() != s.cols() {
        return Err(NaimarkError::invalid(format!(
            "expected a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let scale = s.max_abs();
    let defect = s.hermitian_defect();
    if defect > 1e-10 * scale {
        return Err(NaimarkError::invalid(format!(
            "matrix is not Hermitian (defect {defect:e}, scale {scale:e})"
        )));
    }
    Ok(())
}

fn symmetrized(s: &Mat) -> DMatrix<Complex64> {
    let d = s.as_dmatrix();
    (d + d.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come out in descending order. Each eigenvector is rotated so
/// that its first component of largest magnitude is real and positive.
pub fn hermitian_eigendecomposition(s: &Mat) -> Result<EigResult> {
    check_hermitian(s)?;
    let sym = symmetrized(s);
    let (values, vectors): (Vec<f64>, DMatrix<Complex64>) = match s.field() {
        Field::Real => {
            let eig = SymmetricEigen::new(sym.map(|z| z.re));
            (eig.eigenvalues.iter().copied().collect(), lift(&eig.eigenvectors))
        }
        Field::Complex => {
            let eig = SymmetricEigen::new(sym);
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        }
    };

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let mut eigenvectors = vectors.select_columns(&order);
    normalize_columns(&mut eigenvectors);
    Ok(EigResult {
        eigenvalues,
        eigenvectors: Mat::from_computed(eigenvectors, s.field()),
    })
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues(s: &Mat) -> Result<Vec<f64>> {
    check_hermitian(s)?;
    let sym = symmetrized(s);
    let mut values: Vec<f64> = match s.field() {
        Field::Real => sym.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect(),
        Field::Complex => sym.symmetric_eigenvalues().iter().copied().collect(),
    };
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Thin singular value decomposition `A = U diag(σ) V*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: Mat,
    /// Non-negative, descending.
    pub singular_values: Vec<f64>,
    pub v: Mat,
}

impl Svd {
    pub fn recompose(&self) -> Mat {
        let k = self.singular_values.len();
        let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            k,
            self.singular_values.iter().map(|&s| Complex64::new(s, 0.0)),
        ));
        let field = self.u.field().join(self.v.field());
        Mat::from_computed(
            self.u.as_dmatrix() * sigma * self.v.as_dmatrix().adjoint(),
            field,
        )
    }
}

/// Thin SVD with singular values sorted in descending order.
///
/// Each left singular vector is phase-normalized like an eigenvector and the
/// matching right singular vector is rotated by the same phase.
pub fn singular_value_decomposition(a: &Mat) -> Result<Svd> {
    if a
        .as_dmatrix()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(NaimarkError::invalid("matrix has non-finite entries"));
    }
    let (rows, cols) = a.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Ok(Svd {
            u: Mat::zeros(rows, 0, a.field()),
            singular_values: Vec::new(),
            v: Mat::zeros(cols, 0, a.field()),
        });
    }
    let (u, sigma, v) = match a.field() {
        Field::Real => {
            let m = a.as_dmatrix();
            let x = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)].re);
            let svd = x
                .thin_svd()
                .map_err(|e| NaimarkError::invalid(format!("SVD failed: {e:?}")))?;
            let (fu, fv) = (svd.U(), svd.V());
            (
                DMatrix::from_fn(rows, k, |i, j| Complex64::new(fu[(i, j)], 0.0)),
                (0..k).map(|i| svd.S()[i]).collect::<Vec<f64>>(),
                DMatrix::from_fn(cols, k, |i, j| Complex64::new(fv[(i, j)], 0.0)),
            )
        }
        Field::Complex => {
            let m = a.as_dmatrix();
            let x = faer::Mat::<faer::c64>::from_fn(rows, cols, |i, j| m[(i, j)]);
            let svd = x
                .thin_svd()
                .map_err(|e| NaimarkError::invalid(format!("SVD failed: {e:?}")))?;
            let (fu, fv) = (svd.U(), svd.V());
            (
                DMatrix::from_fn(rows, k, |i, j| fu[(i, j)]),
                (0..k).map(|i| svd.S()[i].re).collect::<Vec<f64>>(),
                DMatrix::from_fn(cols, k, |i, j| fv[(i, j)]),
            )
        }
    };

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));
    let singular_values = order.iter().map(|&i| sigma[i].max(0.0)).collect();
    let mut u = u.select_columns(&order);
    let mut v = v.select_columns(&order);
    for j in 0..k {
        if let Some((p, mag, phase)) = pivot_phase(u.column(j).iter()) {
            u.column_mut(j).iter_mut().for_each(|z| *z *= phase);
            v.column_mut(j).iter_mut().for_each(|z| *z *= phase);
            u[(p, j)] = Complex64::new(mag, 0.0);
        }
    }
    Ok(Svd {
        u: Mat::from_computed(u, a.field()),
        singular_values,
        v: Mat::from_computed(v, a.field()),
    })
}

/// Extends an `r x D` matrix with orthonormal rows to a `D x D` unitary by
/// returning the `(D - r) x D` block of missing rows.
///
/// The new rows span the null space of the input, found from the SVD of the
/// complementary projector `I - R*R`. They are ordered by the index of their
/// largest-magnitude entry and each is phase-normalized so that this entry is
/// real and positive.
pub fn complete_orthonormal_rows(r: &Mat) -> Result<Mat> {
    let (rows, dim) = r.shape();
    if rows > dim {
        return Err(NaimarkError::invalid(format!(
            "{rows} orthonormal rows cannot fit in dimension {dim}"
        )));
    }
    let residual = r.orthonormal_rows_defect();
    if residual > 1e-9 {
        return Err(NaimarkError::NotIsometric { residual });
    }
    let missing = dim - rows;
    if missing == 0 {
        return Ok(Mat::zeros(0, dim, r.field()));
    }

    let projector = Mat::identity(dim, r.field()).sub(&r.adjoint().matmul(r));
    let svd = singular_value_decomposition(&projector)?;
    // Work with the new rows as columns of `basis`; rows of the result are
    // their conjugate transposes.
    let mut basis = svd.u.as_dmatrix().columns(0, missing).into_owned();
    let mut keyed: Vec<(usize, usize)> = (0..missing)
        .map(|j| (pivot_index(basis.column(j).iter()).unwrap_or(0), j))
        .collect();
    keyed.sort_by_key(|&(pivot, j)| (pivot, j));
    let order: Vec<usize> = keyed.into_iter().map(|(_, j)| j).collect();
    basis = basis.select_columns(&order).map(|z| z.conj());
    normalize_columns(&mut basis);
    Ok(Mat::from_computed(basis.transpose(), r.field()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eigendecomposition(&Mat::identity(3, Field::Real)).unwrap();
        assert_eq!(eig.eigenvalues.len(), 3);
        for l in eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_eigenpairs() {
        let s = Mat::real_from_rows(&[[0.25, 0.0], [0.0, 1.0]]).unwrap();
        let eig = hermitian_eigendecomposition(&s).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 0.25]);
        let e = Mat::real_from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(eig.eigenvectors, e);
    }

    #[test]
    fn random_hermitian_recomposes() {
        let mut rng = Sampler::new(7);
        for field in [Field::Real, Field::Complex] {
            let a = rng.matrix(field, 6, 6);
            let s = a.add(&a.adjoint());
            let eig = hermitian_eigendecomposition(&s).unwrap();
            let scale = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max) + 1.0;
            assert!(eig.recompose().max_abs_diff(&s) <= 1e-10 * scale);
            assert!(eig.eigenvectors.orthonormal_columns_defect() <= 1e-12);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            for j in 0..6 {
                let col: Vec<Complex64> =
                    (0..6).map(|i| eig.eigenvectors.get(i, j)).collect();
                let p = pivot_index(col.iter()).unwrap();
                assert!(col[p].re > 0.0 && col[p].im == 0.0);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let s = Mat::real_from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            hermitian_eigendecomposition(&s),
            Err(NaimarkError::InvalidInput(_))
        ));
        let r = Mat::zeros(2, 3, Field::Real);
        assert!(hermitian_eigendecomposition(&r).is_err());
    }

    #[test]
    fn svd_identity_and_zero() {
        let svd = singular_value_decomposition(&Mat::identity(4, Field::Real)).unwrap();
        assert!(svd.singular_values.iter().all(|s| (s - 1.0).abs() < 1e-15));
        let svd = singular_value_decomposition(&Mat::zeros(3, 2, Field::Complex)).unwrap();
        assert_eq!(svd.singular_values, vec![0.0, 0.0]);
    }

    #[test]
    fn svd_random_reconstructs() {
        let mut rng = Sampler::new(11);
        for field in [Field::Real, Field::Complex] {
            let a = rng.matrix(field, 4, 6);
            let svd = singular_value_decomposition(&a).unwrap();
            let smax = svd.singular_values[0];
            assert!(svd.recompose().max_abs_diff(&a) <= 1e-10 * (smax + 1.0));
            assert!(svd.u.orthonormal_columns_defect() < 1e-12);
            assert!(svd.v.orthonormal_columns_defect() < 1e-12);
            assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn svd_of_isometry_is_all_ones() {
        let mut rng = Sampler::new(3);
        let q = rng.unitary(Field::Complex, 5).column_range(0, 3);
        let svd = singular_value_decomposition(&q).unwrap();
        assert!(svd.singular_values.iter().all(|s| (s - 1.0).abs() < 1e-10));
    }

    #[test]
    fn svd_of_empty_matrix() {
        let svd = singular_value_decomposition(&Mat::zeros(0, 3, Field::Real)).unwrap();
        assert!(svd.singular_values.is_empty());
        assert_eq!(svd.v.shape(), (3, 0));
    }

    #[test]
    fn complete_canonical_row() {
        let r = Mat::real_from_rows(&[[1.0, 0.0]]).unwrap();
        let out = complete_orthonormal_rows(&r).unwrap();
        assert_eq!(out, Mat::real_from_rows(&[[0.0, 1.0]]).unwrap());
    }

    #[test]
    fn complete_square_is_empty() {
        let out = complete_orthonormal_rows(&Mat::identity(3, Field::Real)).unwrap();
        assert_eq!(out.shape(), (0, 3));
    }

    #[test]
    fn complete_random_isometry() {
        let mut rng = Sampler::new(5);
        for field in [Field::Real, Field::Complex] {
            let r = rng.unitary(field, 7).row_range(0, 3);
            let extra = complete_orthonormal_rows(&r).unwrap();
            let q = Mat::vstack(&[&r, &extra]);
            let id = Mat::identity(7, field);
            assert!(q.adjoint().matmul(&q).max_abs_diff(&id) <= 1e-10);
            assert!(q.matmul(&q.adjoint()).max_abs_diff(&id) <= 1e-10);
            let again = complete_orthonormal_rows(&r).unwrap();
            assert_eq!(extra, again);
        }
    }

    #[test]
    fn complete_rejects_bad_input() {
        let r = Mat::real_from_rows(&[[1.0, 1.0]]).unwrap();
        assert!(matches!(
            complete_orthonormal_rows(&r),
            Err(NaimarkError::NotIsometric { .. })
        ));
        let tall = Mat::zeros(3, 2, Field::Real);
        assert!(matches!(
            complete_orthonormal_rows(&tall),
            Err(NaimarkError::InvalidInput(_))
        ));
    }

    #[test]
    fn real_matrices_stay_real() {
        let mut rng = Sampler::new(9);
        let a = rng.matrix(Field::Real, 4, 4);
        let s = a.matmul(&a.adjoint());
        let eig = hermitian_eigendecomposition(&s).unwrap();
        assert!(eig.eigenvectors.as_dmatrix().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn rejects_nan_and_imaginary_real() {
        assert!(Mat::from_real(1, 1, &[f64::NAN]).is_err());
        let z = DMatrix::from_element(1, 1, Complex64::new(0.0, 1.0));
        assert!(Mat::from_dmatrix(z, Field::Real).is_err());
        assert!(Mat::from_real(2, 2, &[1.0, 2.0, 3.0]).is_err());
    }
}
