//! Generalized Naimark complements.
//!
//! Given a Bessel sequence `F` (`M x N`), complete it to a tight frame
//! `[F H]` with bound `t`, so that `t^{-1/2}·[F H]` has orthonormal rows.
//! Extending those rows to a unitary
//!
//! ```text
//!            ┌ F   H  ┐
//! t^{-1/2} · │        │
//!            └ G   H2 ┘
//! ```
//!
//! defines the complement `G`. Its columns `g_n` satisfy
//! `‖f_n‖² + ‖g_n‖² = t`, `⟨f_n, f_n'⟩ + ⟨g_n, g_n'⟩ = 0` for `n ≠ n'`, or in
//! matrix form `G*G = t·I − F*F`. Any two complements with that Gram matrix
//! differ by a unitary.
//!
//! `G` is stored in coordinates of the complementary space: it has `N − K`
//! rows in `Minimal` mode and `N` rows in `Pad` mode.

use serde::{Deserialize, Serialize};

use crate::completion::{complete_to_tight, CompletionMode};
use crate::error::{NaimarkError, Result};
use crate::frame::{gram, gram_of, spectral, Frame, SpectralData};
use crate::numkernel::{complete_orthonormal_rows, singular_value_decomposition, Mat};
use crate::Check;

/// A Naimark complement together with the blocks of its unitary embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct NaimarkResult {
    /// Complement synthesis matrix `G`, one column `g_n` per frame vector.
    pub complement: Mat,
    /// Completion vectors `H` appended to reach a tight frame.
    pub completion: Mat,
    /// Complement block `H2` sitting below `H` in the embedding.
    pub aux: Mat,
    /// Optimal upper bound `B` of the input.
    pub upper: f64,
    /// Tight bound of the completion: `B`, or `C` when padding.
    pub target_bound: f64,
    /// Multiplicity `K` of `B`.
    pub top_multiplicity: usize,
    /// Side length of the unitary embedding: `N + M − K` or `N + M`.
    pub embedding_dim: usize,
    pub mode: CompletionMode,
}

impl NaimarkResult {
    /// The unitary `t^{-1/2}·[[F, H], [G, H2]]`.
    pub fn embedding(&self, f: &Frame) -> Mat {
        let top = Mat::hstack(&[f.synthesis(), &self.completion]);
        let bottom = Mat::hstack(&[&self.complement, &self.aux]);
        Mat::vstack(&[&top, &bottom]).scale(1.0 / self.target_bound.sqrt())
    }

    /// Dimension of the space the complement lives in.
    pub fn complement_dim(&self) -> usize {
        self.complement.rows()
    }

    /// Numerical rank of `G`: singular values above `1e-8·√B`.
    pub fn rank(&self) -> usize {
        let cutoff = 1e-8 * self.upper.sqrt();
        singular_value_decomposition(&self.complement)
            .map(|s| s.singular_values.iter().filter(|&&x| x > cutoff).count())
            .unwrap_or(0)
    }
}

/// Naimark complement of `f` built from its own eigenbasis.
pub fn naimark_complement(f: &Frame, mode: CompletionMode, mult_tol: f64) -> Result<NaimarkResult> {
    let spec = spectral(f, mult_tol)?;
    naimark_complement_from_spectral(f, &spec, mode)
}

/// Naimark complement of `f` using the eigenbasis carried by `spec`.
///
/// Different eigenbases of a degenerate frame operator give different but
/// unitarily equivalent complements.
pub fn naimark_complement_from_spectral(
    f: &Frame,
    spec: &SpectralData,
    mode: CompletionMode,
) -> Result<NaimarkResult> {
    if !(spec.upper > 0.0) {
        return Err(NaimarkError::DegenerateInput(
            "every vector is zero, so the upper frame bound is 0".into(),
        ));
    }
    let completion = complete_to_tight(f, spec, mode)?;
    let target = completion.target_bound;
    let n = f.len();

    let isometry = Mat::hstack(&[f.synthesis(), &completion.vectors]).scale(1.0 / target.sqrt());
    let embedding_dim = isometry.cols();
    let rest = complete_orthonormal_rows(&isometry)?.scale(target.sqrt());

    Ok(NaimarkResult {
        complement: rest.column_range(0, n),
        aux: rest.column_range(n, embedding_dim - n),
        completion: completion.vectors,
        upper: spec.upper,
        target_bound: target,
        top_multiplicity: spec.top_multiplicity,
        embedding_dim,
        mode,
    })
}

/// Residuals of the complement identities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `max |G*G + F*F − t·I|`.
    pub gram: Check,
    /// `max |⟨f_n, f_n'⟩ + ⟨g_n, g_n'⟩|` over `n ≠ n'`.
    pub orthogonality: Check,
    /// `max |‖f_n‖² + ‖g_n‖² − t|`.
    pub norms: Check,
    /// `max |EE* − I|` for the embedding `E`, when it is available.
    pub unitarity: Option<Check>,
    pub passed: bool,
}

/// Checks `G*G + F*F = bound·I` with tolerance `tol·bound`, split into its
/// off-diagonal (orthogonality) and diagonal (norm) parts.
pub fn verify_gram_identity(f: &Frame, g: &Mat, bound: f64, tol: f64) -> VerificationReport {
    let scaled_tol = tol * bound;
    if g.cols() != f.len() {
        let bad = Check::new(f64::INFINITY, scaled_tol);
        return VerificationReport {
            gram: bad,
            orthogonality: bad,
            norms: bad,
            unitarity: None,
            passed: false,
        };
    }
    let n = f.len();
    let total = gram_of(g).add(&gram(f));
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for i in 0..n {
        diag = diag.max((total.get(i, i).re - bound).abs().max(total.get(i, i).im.abs()));
        for j in 0..n {
            if i != j {
                off = off.max(total.get(i, j).norm());
            }
        }
    }
    let gram = Check::new(off.max(diag), scaled_tol);
    let orthogonality = Check::new(off, scaled_tol);
    let norms = Check::new(diag, scaled_tol);
    VerificationReport {
        passed: gram.passed && orthogonality.passed && norms.passed,
        gram,
        orthogonality,
        norms,
        unitarity: None,
    }
}

/// Verifies a computed complement: the Gram identity, direct-sum
/// orthogonality and unitarity of the embedding, all to `tol·t`.
pub fn verify_complement(f: &Frame, r: &NaimarkResult, tol: f64) -> VerificationReport {
    let mut report = verify_gram_identity(f, &r.complement, r.target_bound, tol);
    let scaled_tol = tol * r.target_bound;
    let consistent = r.completion.rows() == f.dim()
        && r.aux.rows() == r.complement.rows()
        && f.len() + r.completion.cols() == r.embedding_dim
        && r.complement.cols() + r.aux.cols() == r.embedding_dim
        && f.dim() + r.complement.rows() == r.embedding_dim;
    let unitarity = if consistent {
        let e = r.embedding(f);
        Check::new(
            e.orthonormal_rows_defect().max(e.orthonormal_columns_defect()),
            scaled_tol,
        )
    } else {
        Check::new(f64::INFINITY, scaled_tol)
    };
    report.passed &= unitarity.passed;
    report.unitarity = Some(unitarity);
    report
}

/// Optimal frame bounds of the complement as a frame for its span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplementBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub complement_is_empty: bool,
}

/// Closed-form complement bounds from the spectrum of the original frame.
///
/// The nonzero eigenvalues of `GG*` are `t − λ_m` for the eigenvalues
/// `λ_m < t` among the first `min(N, M)`, together with `t` repeated `N − M`
/// times when `N > M`. For a frame in `Minimal` mode this gives the lower
/// bound `B − λ_{K+1}` and the upper bound `B` (`N ≠ M`) or `B − λ_M`
/// (`N = M`); padding to `C` gives `C − B` and `C` when `N > M`. When
/// `N ≤ M` the padded upper bound tightens to `C − λ_N`. The complement is
/// empty exactly when `N = K` in `Minimal` mode.
pub fn complement_bounds(
    spec: &SpectralData,
    n: usize,
    mode: CompletionMode,
) -> Result<ComplementBounds> {
    mode.validate(spec.upper)?;
    let m = spec.dim();
    let target = mode.target_bound(spec.upper);
    let first = match mode {
        CompletionMode::Minimal => spec.top_multiplicity,
        CompletionMode::Pad(_) => 0,
    };
    let shared = n.min(m);
    let mut values: Vec<f64> = spec.eigenvalues[first.min(shared)..shared]
        .iter()
        .map(|l| target - l)
        .collect();
    if n > m {
        values.push(target);
    }
    if values.is_empty() {
        return Ok(ComplementBounds {
            lower: None,
            upper: None,
            complement_is_empty: true,
        });
    }
    let lower = values.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = values.iter().copied().fold(0.0, f64::max);
    Ok(ComplementBounds {
        lower: Some(lower),
        upper: Some(upper),
        complement_is_empty: false,
    })
}

/// Extreme nonzero eigenvalues of `GG*`, measured directly. Singular values
/// of `G` at or below `1e-8·√scale` count as zero.
pub fn measured_bounds(g: &Mat, scale: f64) -> Option<(f64, f64)> {
    let svd = singular_value_decomposition(g).ok()?;
    let cutoff = 1e-8 * scale.sqrt();
    let kept: Vec<f64> = svd
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .map(|s| s * s)
        .collect();
    let lo = kept.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = kept.iter().copied().fold(0.0, f64::max);
    (!kept.is_empty()).then_some((lo, hi))
}

/// Result of a unitary-equivalence test.
#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `max |G1*G1 − G2*G2|`.
    pub gram_residual: f64,
    /// Absolute tolerance the residuals were compared against.
    pub tolerance: f64,
    /// Unitary `U` with `U·G1 ≈ G2`, when both have full row rank.
    pub unitary: Option<Mat>,
    /// `max |U·G1 − G2|`.
    pub alignment_residual: Option<f64>,
}

/// Decides whether the columns of `g1` and `g2` are unitarily equivalent
/// (equal Gram matrices), and recovers the aligning unitary when both have
/// the same number of rows and full row rank.
///
/// The tolerance is relative to `max(1, max |G1*G1|)`.
pub fn unitary_equivalence(g1: &Mat, g2: &Mat, tol: f64) -> Result<Equivalence> {
    if g1.cols() != g2.cols() {
        return Err(NaimarkError::invalid(format!(
            "column counts differ: {} vs {}",
            g1.cols(),
            g2.cols()
        )));
    }
    let gram1 = gram_of(g1);
    let gram2 = gram_of(g2);
    let tolerance = tol * gram1.max_abs().max(1.0);
    let gram_residual = gram1.max_abs_diff(&gram2);
    let equivalent = gram_residual <= tolerance;

    let mut unitary = None;
    let mut alignment_residual = None;
    if equivalent && g1.rows() == g2.rows() {
        if let Some(u) = aligning_unitary(g1, g2)? {
            alignment_residual = Some(u.matmul(g1).max_abs_diff(g2));
            unitary = Some(u);
        }
    }
    Ok(Equivalence {
        equivalent,
        gram_residual,
        tolerance,
        unitary,
        alignment_residual,
    })
}

/// `U = polar(G2·G1⁺)` for full-row-rank `G1`; `None` if `G1` is rank
/// deficient.
fn aligning_unitary(g1: &Mat, g2: &Mat) -> Result<Option<Mat>> {
    let r = g1.rows();
    if r == 0 {
        return Ok(Some(Mat::identity(0, g1.field().join(g2.field()))));
    }
    if r > g1.cols() {
        return Ok(None);
    }
    let svd = singular_value_decomposition(g1)?;
    let smax = svd.singular_values[0];
    if smax == 0.0 || svd.singular_values[r - 1] <= 1e-8 * smax {
        return Ok(None);
    }
    // G1⁺ = Z Σ⁻¹ W*
    let mut z = svd.v.into_dmatrix();
    for (j, s) in svd.singular_values.iter().enumerate() {
        z.column_mut(j).iter_mut().for_each(|x| *x /= *s);
    }
    let pinv = Mat::from_dmatrix(z, g1.field())?.matmul(&svd.u.adjoint());
    Ok(Some(polar_factor(&g2.matmul(&pinv))?))
}

/// Unitary polar factor `WZ*` of `X = WΣZ*`.
pub fn polar_factor(x: &Mat) -> Result<Mat> {
    let svd = singular_value_decomposition(x)?;
    Ok(svd.u.matmul(&svd.v.adjoint()))
}
