//! Completing a Bessel sequence to a tight frame.
//!
//! If `FF*` has eigenpairs `(λ_m, u_m)` with `B = λ_1 = … = λ_K > λ_{K+1}`,
//! appending `h_m = √(λ_1 − λ_m)·u_m` for `m = K+1, …, M` yields a `B`-tight
//! frame, and no smaller set of added vectors does. Padding to a bound
//! `C > B` appends `√(C − λ_m)·u_m` for every `m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{NaimarkError, Result};
use crate::frame::{Frame, SpectralData};
use crate::numkernel::Mat;

/// How far to complete.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CompletionMode {
    /// Add `M − K` vectors to reach the tight bound `B`.
    Minimal,
    /// Add `M` vectors to reach the tight bound `C`, which must exceed `B`.
    Pad(f64),
}

impl CompletionMode {
    /// Tight bound reached by the completion.
    pub fn target_bound(&self, upper: f64) -> f64 {
        match *self {
            CompletionMode::Minimal => upper,
            CompletionMode::Pad(c) => c,
        }
    }

    pub fn validate(&self, upper: f64) -> Result<()> {
        match *self {
            CompletionMode::Minimal => Ok(()),
            CompletionMode::Pad(c) if c.is_finite() && c > upper => Ok(()),
            CompletionMode::Pad(c) => Err(NaimarkError::PadBoundTooSmall { pad: c, bound: upper }),
        }
    }
}

/// Vectors appended to a frame to make it tight.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionResult {
    /// `M x (M − K)` for `Minimal`, `M x M` for `Pad`.
    pub vectors: Mat,
    pub target_bound: f64,
}

/// Checks the row criterion for an eigenbasis: with `E` the matrix of basis
/// columns, the rows of `E*F` (entries `⟨f_n, e_m⟩`) must be pairwise
/// orthogonal and row `m` must have squared norm `λ_m`. This holds exactly
/// when the basis vectors are eigenvectors of `FF*` with eigenvalues `λ_m`.
///
/// Orthogonality is tested to `tol·(λ_max + 1)` and each squared norm to
/// `tol·(λ_m + 1)`.
pub fn check_rows_vs_eigs(f: &Frame, basis: &Mat, lambdas: &[f64], tol: f64) -> Result<bool> {
    let m = f.dim();
    if basis.shape() != (m, m) || lambdas.len() != m {
        return Err(NaimarkError::invalid(format!(
            "expected a {m}x{m} basis and {m} eigenvalues, got {}x{} and {}",
            basis.rows(),
            basis.cols(),
            lambdas.len()
        )));
    }
    let coeffs = basis.adjoint().matmul(f.synthesis());
    let row_gram = coeffs.matmul(&coeffs.adjoint());
    let lmax = lambdas.iter().copied().fold(0.0, f64::max);
    for i in 0..m {
        if (row_gram.get(i, i).re - lambdas[i]).abs() > tol * (lambdas[i].abs() + 1.0) {
            return Ok(false);
        }
        for j in (i + 1)..m {
            if row_gram.get(i, j).norm() > tol * (lmax + 1.0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Completes `f` to a tight frame using the eigenbasis in `spec`.
pub fn complete_to_tight(
    f: &Frame,
    spec: &SpectralData,
    mode: CompletionMode,
) -> Result<CompletionResult> {
    if spec.dim() != f.dim() {
        return Err(NaimarkError::invalid("spectral data does not match the frame"));
    }
    mode.validate(spec.upper)?;
    let target = mode.target_bound(spec.upper);
    let first = match mode {
        CompletionMode::Minimal => spec.top_multiplicity,
        CompletionMode::Pad(_) => 0,
    };
    let count = f.dim() - first;
    let mut data = spec.eigenvectors.column_range(first, count).into_dmatrix();
    for (j, mut col) in data.column_iter_mut().enumerate() {
        // Rounding can put λ_m a hair above the target.
        let weight = (target - spec.eigenvalues[first + j]).max(0.0).sqrt();
        col *= Complex64::new(weight, 0.0);
    }
    let vectors = Mat::from_dmatrix(data, f.field())?;
    Ok(CompletionResult {
        vectors,
        target_bound: target,
    })
}
