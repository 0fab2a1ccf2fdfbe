//! Properties that pass from a frame to its Naimark complement, and exhaustive
//! restricted-isometry constants.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::complement::naimark_complement;
use crate::completion::CompletionMode;
use crate::error::{NaimarkError, Result};
use crate::frame::{gram, gram_of, spectral, Frame};
use crate::numkernel::{hermitian_eigenvalues, Mat};
use crate::{Check, DEFAULT_MULT_TOL};

/// Maximum number of subsets the RIP enumeration will examine.
pub const SUBSET_LIMIT: u128 = 1_000_000;

/// Ties in δ closer than this are resolved in favour of the earlier subset.
const DELTA_TIE: f64 = 1e-12;

fn upper_bound(f: &Frame) -> Result<f64> {
    Ok(spectral(f, DEFAULT_MULT_TOL)?.upper)
}

/// Checks `⟨g_n, g_n'⟩ = −⟨f_n, f_n'⟩` for all `n ≠ n'`, to `tol·B`.
pub fn cross_gram_negation(f: &Frame, g: &Mat, tol: f64) -> Result<Check> {
    if g.cols() != f.len() {
        return Err(NaimarkError::invalid(format!(
            "complement has {} columns, frame has {}",
            g.cols(),
            f.len()
        )));
    }
    let b = upper_bound(f)?;
    let sum = gram(f).add(&gram_of(g));
    let mut residual: f64 = 0.0;
    for i in 0..f.len() {
        for j in 0..f.len() {
            if i != j {
                residual = residual.max(sum.get(i, j).norm());
            }
        }
    }
    Ok(Check::new(residual, tol * b))
}

/// Orthogonal-subset and equal-norm-subset carryover on an index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetCarryover {
    /// Whether `{f_n}_{n∈J}` is an orthogonal set.
    pub frame_orthogonal: bool,
    /// Orthogonality of `{g_n}_{n∈J}`, checked when the hypothesis holds.
    pub complement_orthogonal: Option<Check>,
    /// Common norm `c` of `{f_n}_{n∈J}` if there is one.
    pub frame_common_norm: Option<f64>,
    /// `max |‖g_n‖² − (t − c²)|` on `J`, checked when the hypothesis holds.
    pub complement_norms: Option<Check>,
    pub passed: bool,
}

/// Tests on the index set `J`: if the `f_n` are orthogonal so are the `g_n`;
/// if `‖f_n‖ = c` then `‖g_n‖² = t − c²`, where `t` is the tight bound the
/// complement was built for. Hypotheses are decided with relative tolerance
/// `tol`; conclusions are checked to `tol·t`. An empty `J` passes vacuously.
pub fn subset_carryover(
    f: &Frame,
    g: &Mat,
    subset: &[usize],
    bound: f64,
    tol: f64,
) -> Result<SubsetCarryover> {
    if g.cols() != f.len() {
        return Err(NaimarkError::invalid("frame and complement sizes differ"));
    }
    if let Some(&bad) = subset.iter().find(|&&n| n >= f.len()) {
        return Err(NaimarkError::invalid(format!("index {bad} out of range")));
    }
    let scaled_tol = tol * bound;
    let gf = gram(f);
    let gg = gram_of(g);

    let max_off = |m: &Mat| {
        subset
            .iter()
            .tuple_combinations()
            .map(|(&i, &j)| m.get(i, j).norm())
            .fold(0.0, f64::max)
    };
    let frame_orthogonal = max_off(&gf) <= scaled_tol;
    let complement_orthogonal = frame_orthogonal.then(|| Check::new(max_off(&gg), scaled_tol));

    let norms_sq: Vec<f64> = subset.iter().map(|&n| gf.get(n, n).re).collect();
    let hi = norms_sq.iter().copied().fold(0.0, f64::max);
    let lo = norms_sq.iter().copied().fold(f64::INFINITY, f64::min);
    let frame_common_norm = if subset.is_empty() {
        None
    } else if hi - lo <= tol * hi.max(bound) {
        Some(((hi + lo) / 2.0).sqrt())
    } else {
        None
    };
    let complement_norms = frame_common_norm.map(|c| {
        let want = bound - c * c;
        let residual = subset
            .iter()
            .map(|&n| (gg.get(n, n).re - want).abs())
            .fold(0.0, f64::max);
        Check::new(residual, scaled_tol)
    });

    let passed = complement_orthogonal.map_or(true, |c| c.passed)
        && complement_norms.map_or(true, |c| c.passed);
    Ok(SubsetCarryover {
        frame_orthogonal,
        complement_orthogonal,
        frame_common_norm,
        complement_norms,
        passed,
    })
}

/// Optimal restricted-isometry constant of order `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipReport {
    pub order: usize,
    /// Smallest `δ` with every subset Gram spectrum inside `[1 − δ, 1 + δ]`.
    pub delta: f64,
    /// Zero-based indices of the first subset (sizes ascending, then
    /// lexicographic) attaining `δ`.
    pub witness: Vec<usize>,
    pub subsets_examined: u64,
}

/// `Σ_{l=1}^{L} C(N, l)`, saturating.
pub fn subset_count(n: usize, order: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for l in 1..=order.min(n) {
        binom = binom.saturating_mul((n - l + 1) as u128) / l as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Exhaustive RIP constant for a unit-norm frame.
///
/// For each subset `J` with `|J| ≤ L`, the optimal constant over all
/// coefficient vectors is `max(λ_max(G_J) − 1, 1 − λ_min(G_J))` for the
/// subset Gram matrix `G_J`.
pub fn rip_constant(f: &Frame, order: usize) -> Result<RipReport> {
    for n in 0..f.len() {
        let norm = f.vector_norm(n);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(NaimarkError::NotUnitNorm { index: n, norm });
        }
    }
    rip_of_columns(f.synthesis(), order)
}

fn rip_of_columns(m: &Mat, order: usize) -> Result<RipReport> {
    let n = m.cols();
    if order == 0 || order > n {
        return Err(NaimarkError::invalid(format!(
            "RIP order must lie in 1..={n}, got {order}"
        )));
    }
    let count = subset_count(n, order);
    if count > SUBSET_LIMIT {
        return Err(NaimarkError::TooLarge {
            count,
            limit: SUBSET_LIMIT,
        });
    }
    let full = gram_of(m);
    let mut delta = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    let mut examined = 0u64;
    for size in 1..=order {
        for subset in (0..n).combinations(size) {
            let sub = full.select_rows(&subset).select_columns(&subset);
            let eigs = hermitian_eigenvalues(&sub)?;
            let d = (eigs[0] - 1.0).max(1.0 - eigs[eigs.len() - 1]);
            if d > delta + DELTA_TIE || witness.is_empty() {
                witness = subset;
            }
            delta = delta.max(d);
            examined += 1;
        }
    }
    Ok(RipReport {
        order,
        delta: delta.max(0.0),
        witness,
        subsets_examined: examined,
    })
}

/// RIP transfer from a unit-norm frame to its rescaled complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipTransfer {
    pub frame: RipReport,
    /// RIP report of `{g_n / √(B − 1)}`.
    pub complement: RipReport,
    pub upper: f64,
    /// `δ / (B − 1)`.
    pub predicted: f64,
    /// `δ / √(B − 1)`, the factor printed in one display of the original
    /// argument; reported for comparison only.
    pub alternative: f64,
    /// `δ' ≤ δ/(B − 1) + tol`; the residual is `δ' − δ/(B − 1)`.
    pub check: Check,
}

/// Computes `δ` for `f`, builds the complement, rescales it to unit norm by
/// `1/√(B − 1)` and verifies `δ' ≤ δ/(B − 1) + tol`.
pub fn rip_complement_check(f: &Frame, order: usize, tol: f64) -> Result<RipTransfer> {
    let frame = rip_constant(f, order)?;
    let r = naimark_complement(f, CompletionMode::Minimal, DEFAULT_MULT_TOL)?;
    let b = r.upper;
    if b <= 1.0 + tol {
        return Err(NaimarkError::ScalingDegenerate { bound: b });
    }
    let scaled = r.complement.scale(1.0 / (b - 1.0).sqrt());
    let complement = rip_of_columns(&scaled, order)?;
    let predicted = frame.delta / (b - 1.0);
    let alternative = frame.delta / (b - 1.0).sqrt();
    let excess = complement.delta - predicted;
    let check = Check {
        passed: excess <= tol,
        residual: excess,
        tolerance: tol,
    };
    Ok(RipTransfer {
        frame,
        complement,
        upper: b,
        predicted,
        alternative,
        check,
    })
}
