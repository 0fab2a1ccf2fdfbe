//! Frames and Bessel sequences: frame operator, spectrum, Gram matrix and
//! structural classification.

use serde::{Deserialize, Serialize};

use crate::error::{NaimarkError, Result};
use crate::numkernel::{hermitian_eigendecomposition, Field, Mat};

/// A finite sequence of vectors `f_1, …, f_N` in an `M`-dimensional space,
/// stored as the `M x N` synthesis matrix whose columns are the vectors.
///
/// Any finite sequence is a Bessel sequence; whether it is also a frame
/// (positive lower bound) is reported by [`spectral`] and [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    synthesis: Mat,
}

impl Frame {
    pub fn new(synthesis: Mat) -> Result<Frame> {
        if synthesis.rows() == 0 || synthesis.cols() == 0 {
            return Err(NaimarkError::invalid(format!(
                "a frame needs at least one dimension and one vector, got {}x{}",
                synthesis.rows(),
                synthesis.cols()
            )));
        }
        Ok(Frame { synthesis })
    }

    pub fn synthesis(&self) -> &Mat {
        &self.synthesis
    }

    pub fn into_synthesis(self) -> Mat {
        self.synthesis
    }

    /// Ambient dimension `M`.
    pub fn dim(&self) -> usize {
        self.synthesis.rows()
    }

    /// Number of vectors `N`.
    pub fn len(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> Field {
        self.synthesis.field()
    }

    pub fn vector_norm(&self, n: usize) -> f64 {
        self.synthesis.column_norm(n)
    }
}

/// Frame operator `FF*`.
pub fn frame_operator(f: &Frame) -> Mat {
    let s = f.synthesis().matmul(&f.synthesis().adjoint());
    // Remove rounding asymmetry so the result is Hermitian to the last bit.
    s.add(&s.adjoint()).scale(0.5)
}

/// Gram matrix `F*F`; entry `(n, n')` is `⟨f_{n'}, f_n⟩`.
pub fn gram(f: &Frame) -> Mat {
    gram_of(f.synthesis())
}

/// Gram matrix of the columns of an arbitrary matrix.
pub fn gram_of(m: &Mat) -> Mat {
    let g = m.adjoint().matmul(m);
    g.add(&g.adjoint()).scale(0.5)
}

/// Frame-operator spectrum with the derived optimal bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// `λ_1 ≥ … ≥ λ_M`.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column `m` pairs with `eigenvalues[m]`.
    pub eigenvectors: Mat,
    /// Optimal upper (Bessel) bound `B = λ_1`.
    pub upper: f64,
    /// Optimal lower bound `A = λ_M`; zero for a Bessel sequence that does not
    /// span.
    pub lower: f64,
    /// Multiplicity `K` of the top eigenvalue.
    pub top_multiplicity: usize,
    pub mult_tol: f64,
}

impl SpectralData {
    /// `λ_{K+1}`, the largest eigenvalue strictly below `B`.
    pub fn next_below_top(&self) -> Option<f64> {
        self.eigenvalues.get(self.top_multiplicity).copied()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Replaces the eigenbasis with another orthonormal eigenbasis of the same
    /// operator, e.g. a different choice inside a degenerate eigenspace.
    /// The caller is responsible for the columns actually being eigenvectors;
    /// [`crate::completion::check_rows_vs_eigs`] tests exactly that.
    pub fn with_eigenvectors(mut self, basis: Mat) -> Result<SpectralData> {
        if basis.shape() != self.eigenvectors.shape() {
            return Err(NaimarkError::invalid("eigenbasis has the wrong shape"));
        }
        let defect = basis.orthonormal_columns_defect();
        if defect > 1e-9 {
            return Err(NaimarkError::invalid(format!(
                "eigenbasis columns are not orthonormal (defect {defect:e})"
            )));
        }
        self.eigenvectors = basis;
        Ok(self)
    }
}

/// Spectrum of `FF*`, optimal bounds and the top multiplicity `K`.
///
/// `K` counts the eigenvalues with `λ_m ≥ B·(1 − mult_tol)`.
pub fn spectral(f: &Frame, mult_tol: f64) -> Result<SpectralData> {
    if !(mult_tol > 0.0 && mult_tol < 1.0) {
        return Err(NaimarkError::invalid(format!(
            "mult_tol must lie in (0, 1), got {mult_tol}"
        )));
    }
    let eig = hermitian_eigendecomposition(&frame_operator(f))?;
    // FF* is positive semidefinite; clear rounding noise below zero.
    let eigenvalues: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
    let upper = eigenvalues[0];
    let lower = *eigenvalues.last().expect("dim >= 1");
    let cutoff = upper * (1.0 - mult_tol);
    let top_multiplicity = eigenvalues.iter().take_while(|&&l| l >= cutoff).count();
    Ok(SpectralData {
        eigenvalues,
        eigenvectors: eig.eigenvectors,
        upper,
        lower,
        top_multiplicity,
        mult_tol,
    })
}

/// Structural flags of a frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_equal_norm: bool,
    pub is_equiangular: bool,
    pub common_norm: Option<f64>,
    /// Common value of `|⟨f_n, f_{n'}⟩|` over distinct pairs.
    pub common_angle: Option<f64>,
}

/// Classifies a frame with relative tolerance `tol`.
///
/// * frame: `A > tol·B`;
/// * tight: every eigenvalue within `tol` of `B` (relative);
/// * Parseval: tight and `|B − 1| ≤ tol`;
/// * equal norm: column norms differ by at most `tol` times the largest;
/// * equiangular: equal norm, `N ≥ 2`, and `|⟨f_n, f_{n'}⟩|` is constant over
///   distinct pairs to within `tol` times the squared common norm. Mutually
///   orthogonal vectors count as equiangular with angle 0; a single vector
///   does not.
pub fn classify(f: &Frame, tol: f64) -> Result<Classification> {
    let spec = spectral(f, tol)?;
    let b = spec.upper;
    let is_frame = b > 0.0 && spec.lower > tol * b;
    let is_tight = b > 0.0 && spec.top_multiplicity == spec.dim();
    let is_parseval = is_tight && (b - 1.0).abs() <= tol;

    let norms: Vec<f64> = (0..f.len()).map(|n| f.vector_norm(n)).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    let min_norm = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let is_equal_norm = max_norm - min_norm <= tol * max_norm;
    let common_norm = is_equal_norm.then_some(max_norm);

    let mut common_angle = None;
    if is_equal_norm && f.len() >= 2 {
        let g = gram(f);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..f.len() {
            for j in (i + 1)..f.len() {
                let m = g.get(i, j).norm();
                lo = lo.min(m);
                hi = hi.max(m);
            }
        }
        if hi - lo <= tol * max_norm * max_norm {
            common_angle = Some((hi + lo) / 2.0);
        }
    }

    Ok(Classification {
        is_frame,
        is_tight,
        is_parseval,
        is_equal_norm,
        is_equiangular: common_angle.is_some(),
        common_norm,
        common_angle,
    })
}

/// Requires a positive lower frame bound.
pub fn require_frame(spec: &SpectralData, tol: f64) -> Result<()> {
    if spec.lower > tol * spec.upper {
        Ok(())
    } else {
        Err(NaimarkError::NotAFrame { lower: spec.lower })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    fn e1() -> Frame {
        Frame::new(Mat::real_from_rows(&[[1.0, 0.0], [0.0, 0.5]]).unwrap()).unwrap()
    }

    fn mercedes_benz(scale: f64) -> Frame {
        let mut rows = [[0.0; 3]; 2];
        for k in 0..3 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            rows[0][k] = scale * t.cos();
            rows[1][k] = scale * t.sin();
        }
        Frame::new(Mat::real_from_rows(&rows).unwrap()).unwrap()
    }

    #[test]
    fn frame_operator_examples() {
        let id = Frame::new(Mat::identity(2, Field::Real)).unwrap();
        assert_eq!(frame_operator(&id), Mat::identity(2, Field::Real));
        let s = frame_operator(&e1());
        assert_eq!(s, Mat::real_from_rows(&[[1.0, 0.0], [0.0, 0.25]]).unwrap());
        let ones = Frame::new(Mat::real_from_rows(&[[1.0, 1.0]]).unwrap()).unwrap();
        assert_eq!(frame_operator(&ones), Mat::real_from_rows(&[[2.0]]).unwrap());
    }

    #[test]
    fn spectral_examples() {
        let s = spectral(&e1(), 1e-9).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 0.25]);
        assert_eq!((s.upper, s.lower, s.top_multiplicity), (1.0, 0.25, 1));

        let s = spectral(&Frame::new(Mat::identity(4, Field::Complex)).unwrap(), 1e-9).unwrap();
        assert_eq!((s.upper, s.lower, s.top_multiplicity), (1.0, 1.0, 4));

        let s = spectral(&mercedes_benz(1.0), 1e-9).unwrap();
        assert!((s.upper - 1.5).abs() < 1e-14);
        assert!((s.lower - 1.5).abs() < 1e-14);
        assert_eq!(s.top_multiplicity, 2);
    }

    #[test]
    fn spectral_rejects_bad_tolerance() {
        assert!(spectral(&e1(), 0.0).is_err());
        assert!(spectral(&e1(), 1.0).is_err());
    }

    #[test]
    fn gram_examples() {
        let id = Frame::new(Mat::identity(3, Field::Real)).unwrap();
        assert_eq!(gram(&id), Mat::identity(3, Field::Real));
        let ones = Frame::new(Mat::real_from_rows(&[[1.0, 1.0]]).unwrap()).unwrap();
        assert_eq!(gram(&ones), Mat::real_from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap());
        let g = gram(&mercedes_benz(1.0));
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -0.5 };
                assert!((g.get(i, j).re - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(&Frame::new(Mat::identity(3, Field::Real)).unwrap(), 1e-9).unwrap();
        assert!(c.is_parseval && c.is_tight && c.is_frame && c.is_equal_norm);
        // All pairs orthogonal: equiangular with angle 0.
        assert!(c.is_equiangular);
        assert_eq!(c.common_angle, Some(0.0));

        let c = classify(&mercedes_benz(1.0), 1e-9).unwrap();
        assert!(c.is_tight && c.is_equal_norm && c.is_equiangular && !c.is_parseval);
        assert!((c.common_angle.unwrap() - 0.5).abs() < 1e-12);

        let c = classify(&e1(), 1e-9).unwrap();
        assert!(c.is_frame && !c.is_tight && !c.is_equal_norm && !c.is_equiangular);

        let single = Frame::new(Mat::real_from_rows(&[[1.0], [0.0]]).unwrap()).unwrap();
        let c = classify(&single, 1e-9).unwrap();
        assert!(!c.is_equiangular && !c.is_frame);
    }

    #[test]
    fn frame_inequality_holds_for_random_vectors() {
        let mut rng = Sampler::new(17);
        let f = rng.frame(Field::Complex, 4, 7);
        let s = spectral(&f, 1e-9).unwrap();
        for _ in 0..1000 {
            let v = rng.matrix(Field::Complex, 4, 1);
            let v = v.scale(1.0 / v.column_norm(0));
            let energy: f64 = (0..f.len())
                .map(|n| {
                    let col = f.synthesis().column_range(n, 1);
                    v.adjoint().matmul(&col).get(0, 0).norm_sqr()
                })
                .sum();
            assert!(energy >= s.lower - 1e-9 && energy <= s.upper + 1e-9);
        }
    }

    #[test]
    fn gram_and_frame_operator_share_nonzero_spectrum() {
        let mut rng = Sampler::new(19);
        let f = rng.frame(Field::Real, 3, 6);
        let a = crate::numkernel::hermitian_eigenvalues(&frame_operator(&f)).unwrap();
        let b = crate::numkernel::hermitian_eigenvalues(&gram(&f)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
        assert!(b[3..].iter().all(|y| y.abs() < 1e-12));
    }

    #[test]
    fn classification_is_unitarily_invariant() {
        let mut rng = Sampler::new(23);
        let f = mercedes_benz((2.0f64 / 3.0).sqrt());
        let u = rng.unitary(Field::Complex, 2);
        let g = Frame::new(u.matmul(f.synthesis())).unwrap();
        assert_eq!(classify(&f, 1e-9).unwrap().is_parseval, classify(&g, 1e-9).unwrap().is_parseval);
        let (a, b) = (classify(&f, 1e-9).unwrap(), classify(&g, 1e-9).unwrap());
        assert_eq!(
            (a.is_frame, a.is_tight, a.is_parseval, a.is_equal_norm, a.is_equiangular),
            (b.is_frame, b.is_tight, b.is_parseval, b.is_equal_norm, b.is_equiangular)
        );
    }
}
