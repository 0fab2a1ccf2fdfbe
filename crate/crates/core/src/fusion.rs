//! Fusion frames and their Naimark complements.
//!
//! A fusion frame is a family of weighted subspaces `(W_k, ν_k)` of an
//! `M`-dimensional space, each given by an orthonormal basis `Q_k`. Stacking
//! the weighted bases `ν_k·Q_k` gives an ordinary frame whose complement
//! splits back into blocks: block `k` of the complement consists of mutually
//! orthogonal vectors of norm `√(B − ν_k²)`, so after rescaling it is an
//! orthonormal basis of the complement subspace `W'_k` with weight
//! `√(B − ν_k²)`.
//!
//! Because the cross-Gram blocks satisfy `G_k*G_l = −ν_k ν_l Q_k*Q_l`, the
//! principal-angle cosines between `W'_k` and `W'_l` are those between `W_k`
//! and `W_l` multiplied by `ν_k ν_l / √((B − ν_k²)(B − ν_l²))`.
//!
//! Cosines are the primary representation of principal angles throughout;
//! `arccos` is only taken for display.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complement::{naimark_complement, polar_factor, NaimarkResult};
use crate::completion::CompletionMode;
use crate::error::{NaimarkError, Result};
use crate::frame::{frame_operator, Frame};
use crate::numkernel::{hermitian_eigenvalues, singular_value_decomposition, Field, Mat};
use crate::Check;

/// One weighted subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionBlock {
    /// `M x d_k`, orthonormal columns.
    pub basis: Mat,
    /// `ν_k > 0`.
    pub weight: f64,
}

impl FusionBlock {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Orthogonal projection `Q_k Q_k*` onto the block subspace.
    pub fn projection(&self) -> Mat {
        self.basis.matmul(&self.basis.adjoint())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrame {
    ambient_dim: usize,
    blocks: Vec<FusionBlock>,
}

impl FusionFrame {
    /// Validates that every basis is `ambient_dim x d_k` with `d_k ≥ 1`
    /// orthonormal columns (to `1e-10`) and every weight is positive.
    pub fn new(ambient_dim: usize, blocks: Vec<FusionBlock>) -> Result<FusionFrame> {
        for (k, b) in blocks.iter().enumerate() {
            if b.basis.rows() != ambient_dim {
                return Err(NaimarkError::invalid(format!(
                    "block {k} lives in dimension {}, expected {ambient_dim}",
                    b.basis.rows()
                )));
            }
            if b.basis.cols() == 0 {
                return Err(NaimarkError::invalid(format!("block {k} is zero-dimensional")));
            }
            if !(b.weight > 0.0 && b.weight.is_finite()) {
                return Err(NaimarkError::invalid(format!(
                    "block {k} has non-positive weight {}",
                    b.weight
                )));
            }
            let defect = b.basis.orthonormal_columns_defect();
            if defect > 1e-10 {
                return Err(NaimarkError::invalid(format!(
                    "block {k} basis is not orthonormal (defect {defect:e})"
                )));
            }
        }
        Ok(FusionFrame {
            ambient_dim,
            blocks,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn blocks(&self) -> &[FusionBlock] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> Result<&FusionBlock> {
        self.blocks
            .get(k)
            .ok_or_else(|| NaimarkError::invalid(format!("no block {k}")))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn field(&self) -> Field {
        self.blocks
            .iter()
            .fold(Field::Real, |f, b| f.join(b.basis.field()))
    }

    /// Column offset of each block in [`fusion_to_frame`].
    fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |at, b| {
                let start = *at;
                *at += b.dim();
                Some(start)
            })
            .collect()
    }
}

/// Fusion frame operator `Σ_k ν_k² Q_k Q_k*`.
pub fn fusion_operator(ff: &FusionFrame) -> Mat {
    let mut s = Mat::zeros(ff.ambient_dim, ff.ambient_dim, ff.field());
    for b in &ff.blocks {
        s = s.add(&b.projection().scale(b.weight * b.weight));
    }
    s.add(&s.adjoint()).scale(0.5)
}

/// Optimal fusion frame bounds `(A, B)`.
pub fn fusion_bounds(ff: &FusionFrame) -> Result<(f64, f64)> {
    let eigs = hermitian_eigenvalues(&fusion_operator(ff))?;
    let b = eigs.first().copied().unwrap_or(0.0).max(0.0);
    let a = eigs.last().copied().unwrap_or(0.0).max(0.0);
    Ok((a, b))
}

/// The frame `{ν_k q_{kj}}`, block by block.
pub fn fusion_to_frame(ff: &FusionFrame) -> Result<Frame> {
    let weighted: Vec<Mat> = ff.blocks.iter().map(|b| b.basis.scale(b.weight)).collect();
    let refs: Vec<&Mat> = weighted.iter().collect();
    if refs.is_empty() {
        return Err(NaimarkError::invalid("fusion frame has no blocks"));
    }
    Frame::new(Mat::hstack(&refs))
}

/// Complement fusion frame with the bookkeeping needed to relate it back to
/// the original blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionComplement {
    pub fusion: FusionFrame,
    pub result: NaimarkResult,
    /// Upper fusion frame bound `B` of the original.
    pub upper: f64,
    /// For each original block, its index in `fusion`, or `None` if dropped.
    pub block_map: Vec<Option<usize>>,
    /// Original blocks with `ν_k² = B`, whose complement vectors vanish.
    pub dropped: Vec<usize>,
}

impl FusionComplement {
    /// Complement block for original block `k`.
    pub fn block_for(&self, k: usize) -> Result<&FusionBlock> {
        match self.block_map.get(k) {
            Some(Some(i)) => self.fusion.block(*i),
            Some(None) => Err(NaimarkError::invalid(format!(
                "block {k} has ν² = B and no complement subspace"
            ))),
            None => Err(NaimarkError::invalid(format!("no block {k}"))),
        }
    }

    /// Human-readable notices about dropped blocks.
    pub fn notices(&self) -> Vec<String> {
        self.dropped
            .iter()
            .map(|k| format!("block {k} dropped: weight² equals the upper bound, complement is zero"))
            .collect()
    }
}

/// Naimark complement fusion frame `{(W'_k, √(B − ν_k²))}`.
///
/// Blocks with `ν_k² ≥ B·(1 − mult_tol)` have zero complement vectors and are
/// dropped (listed in [`FusionComplement::dropped`]).
pub fn fusion_naimark(ff: &FusionFrame, mult_tol: f64) -> Result<FusionComplement> {
    let f = fusion_to_frame(ff)?;
    let result = naimark_complement(&f, CompletionMode::Minimal, mult_tol)?;
    let b = result.upper;
    let g = &result.complement;
    let mut blocks = Vec::new();
    let mut block_map = Vec::with_capacity(ff.len());
    let mut dropped = Vec::new();
    for (k, (block, start)) in ff.blocks.iter().zip(ff.offsets()).enumerate() {
        let residual_weight_sq = b - block.weight * block.weight;
        if residual_weight_sq <= b * mult_tol || g.rows() == 0 {
            block_map.push(None);
            dropped.push(k);
            continue;
        }
        let weight = residual_weight_sq.sqrt();
        let basis = g.column_range(start, block.dim()).scale(1.0 / weight);
        block_map.push(Some(blocks.len()));
        blocks.push(FusionBlock { basis, weight });
    }
    let fusion = FusionFrame::new(g.rows(), blocks)?;
    Ok(FusionComplement {
        fusion,
        result,
        upper: b,
        block_map,
        dropped,
    })
}

/// Principal angles between two subspaces, stored primarily as cosines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalAngles {
    /// Ascending, in `[0, π/2]`.
    pub angles: Vec<f64>,
    /// Descending, in `[0, 1]`.
    pub cosines: Vec<f64>,
}

impl PrincipalAngles {
    pub fn from_cosines(mut cosines: Vec<f64>) -> PrincipalAngles {
        for c in cosines.iter_mut() {
            *c = c.clamp(0.0, 1.0);
        }
        cosines.sort_by(|a, b| b.total_cmp(a));
        let angles = cosines.iter().map(|c| c.acos()).collect();
        PrincipalAngles { angles, cosines }
    }
}

/// Principal angles between `span(Q1)` and `span(Q2)`: the cosines are the
/// singular values of `Q1*Q2`.
pub fn principal_angles(q1: &Mat, q2: &Mat) -> Result<PrincipalAngles> {
    if q1.rows() != q2.rows() {
        return Err(NaimarkError::invalid(format!(
            "subspaces live in dimensions {} and {}",
            q1.rows(),
            q2.rows()
        )));
    }
    let svd = singular_value_decomposition(&q1.adjoint().matmul(q2))?;
    Ok(PrincipalAngles::from_cosines(svd.singular_values))
}

/// Factor `ν / √(B − ν²)` relating original and complement cosines.
fn transfer_factor(weight: f64, upper: f64) -> Result<f64> {
    let rest = upper - weight * weight;
    if !(rest > 0.0) {
        return Err(NaimarkError::invalid(format!(
            "weight {weight} must satisfy ν² < B = {upper}"
        )));
    }
    Ok(weight / rest.sqrt())
}

/// Principal angles predicted for the complement blocks from the original
/// ones: `cos θ'_j = [ν_1/√(B − ν_1²)]·[ν_2/√(B − ν_2²)]·cos θ_j`.
pub fn predicted_complement_angles(
    theta: &PrincipalAngles,
    nu1: f64,
    nu2: f64,
    upper: f64,
) -> Result<PrincipalAngles> {
    let factor = transfer_factor(nu1, upper)? * transfer_factor(nu2, upper)?;
    Ok(PrincipalAngles::from_cosines(
        theta.cosines.iter().map(|c| factor * c).collect(),
    ))
}

/// The two evaluations of the squared chordal distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordalForms {
    /// `d − Σ_j cos² θ_j`.
    pub via_angles: f64,
    /// `d − tr(P_1 P_2)`.
    pub via_trace: f64,
}

fn check_equal_dims(q1: &Mat, q2: &Mat) -> Result<usize> {
    if q1.cols() != q2.cols() {
        return Err(NaimarkError::invalid(format!(
            "chordal distance needs equal dimensions, got {} and {}",
            q1.cols(),
            q2.cols()
        )));
    }
    Ok(q1.cols())
}

pub fn chordal_distance_sq_forms(q1: &Mat, q2: &Mat) -> Result<ChordalForms> {
    let d = check_equal_dims(q1, q2)? as f64;
    let angles = principal_angles(q1, q2)?;
    let via_angles = d - angles.cosines.iter().map(|c| c * c).sum::<f64>();
    let p1 = q1.matmul(&q1.adjoint());
    let p2 = q2.matmul(&q2.adjoint());
    let via_trace = d - p1.matmul(&p2).trace().re;
    Ok(ChordalForms {
        via_angles,
        via_trace,
    })
}

/// Chordal distance between two subspaces of equal dimension, computed as
/// `‖(I − P_1)Q_2‖_F`, which stays accurate for nearly equal subspaces where
/// `√(d − Σ cos² θ_j)` loses half the digits.
pub fn chordal_distance(q1: &Mat, q2: &Mat) -> Result<f64> {
    check_equal_dims(q1, q2)?;
    if q1.rows() != q2.rows() {
        return Err(NaimarkError::invalid(format!(
            "subspaces live in dimensions {} and {}",
            q1.rows(),
            q2.rows()
        )));
    }
    let residual = q2.sub(&q1.matmul(&q1.adjoint().matmul(q2)));
    Ok(residual.as_dmatrix().norm())
}

/// Measured vs predicted complement angles for one pair of blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleTransfer {
    pub original: PrincipalAngles,
    pub measured: PrincipalAngles,
    pub predicted: PrincipalAngles,
    /// `max_j |cos θ'_measured − cos θ'_predicted|`.
    pub check: Check,
}

fn check_pair(ff: &FusionFrame, k1: usize, k2: usize) -> Result<(&FusionBlock, &FusionBlock)> {
    Ok((ff.block(k1)?, ff.block(k2)?))
}

/// Compares principal angles between complement blocks `k1`, `k2` (measured
/// by SVD) with the closed-form prediction from the original blocks.
pub fn angle_transfer(
    ff: &FusionFrame,
    complement: &FusionComplement,
    k1: usize,
    k2: usize,
    tol: f64,
) -> Result<AngleTransfer> {
    let (w1, w2) = check_pair(ff, k1, k2)?;
    let original = principal_angles(&w1.basis, &w2.basis)?;
    let predicted = predicted_complement_angles(&original, w1.weight, w2.weight, complement.upper)?;
    let measured = principal_angles(
        &complement.block_for(k1)?.basis,
        &complement.block_for(k2)?.basis,
    )?;
    let residual = measured
        .cosines
        .iter()
        .zip(&predicted.cosines)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(AngleTransfer {
        original,
        measured,
        predicted,
        check: Check::new(residual, tol),
    })
}

/// Chordal-distance identity for one pair of complement blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChordalTransfer {
    pub dim: usize,
    /// `r = [ν_1²/(B − ν_1²)]·[ν_2²/(B − ν_2²)]`.
    pub ratio: f64,
    /// Same ratio with `1 − ν_k²` in place of `B − ν_k²`, as in the
    /// Parseval-normalized statement. `None` when some `ν_k ≥ 1`.
    pub parseval_ratio: Option<f64>,
    /// `d_c²(W_1, W_2)`.
    pub original_sq: f64,
    /// `d_c²(W'_1, W'_2)` measured on the complement blocks.
    pub measured_sq: f64,
    /// `(1 − r)·d + r·d_c²(W_1, W_2)`.
    pub predicted_sq: f64,
    /// The same prediction evaluated with `parseval_ratio`.
    pub parseval_predicted_sq: Option<f64>,
    pub check: Check,
}

/// Verifies `d_c²(W'_1, W'_2) = (1 − r)·d + r·d_c²(W_1, W_2)` with the
/// complement blocks taken from `complement`.
pub fn chordal_transfer(
    ff: &FusionFrame,
    complement: &FusionComplement,
    k1: usize,
    k2: usize,
    tol: f64,
) -> Result<ChordalTransfer> {
    let (w1, w2) = check_pair(ff, k1, k2)?;
    let dim = check_equal_dims(&w1.basis, &w2.basis)?;
    let b = complement.upper;
    let ratio = (transfer_factor(w1.weight, b)? * transfer_factor(w2.weight, b)?).powi(2);
    let parseval_ratio = (w1.weight < 1.0 && w2.weight < 1.0).then(|| {
        let (a1, a2) = (w1.weight * w1.weight, w2.weight * w2.weight);
        a1 / (1.0 - a1) * a2 / (1.0 - a2)
    });
    let original_sq = chordal_distance_sq_forms(&w1.basis, &w2.basis)?.via_angles;
    let measured_sq = chordal_distance_sq_forms(
        &complement.block_for(k1)?.basis,
        &complement.block_for(k2)?.basis,
    )?
    .via_angles;
    let d = dim as f64;
    let predicted_sq = (1.0 - ratio) * d + ratio * original_sq;
    let parseval_predicted_sq = parseval_ratio.map(|r| (1.0 - r) * d + r * original_sq);
    Ok(ChordalTransfer {
        dim,
        ratio,
        parseval_ratio,
        original_sq,
        measured_sq,
        predicted_sq,
        parseval_predicted_sq,
        check: Check::new((measured_sq - predicted_sq).abs(), tol),
    })
}

/// Builds the complement of `ff` and checks the chordal identity for blocks
/// `k1`, `k2`.
pub fn chordal_complement_check(
    ff: &FusionFrame,
    k1: usize,
    k2: usize,
    tol: f64,
) -> Result<ChordalTransfer> {
    let complement = fusion_naimark(ff, crate::DEFAULT_MULT_TOL)?;
    chordal_transfer(ff, &complement, k1, k2, tol)
}

/// Result of a fusion-frame equivalence test.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionEquivalence {
    pub equivalent: bool,
    /// `max_k max |U P2_k U* − P1_k|`.
    pub residual: f64,
    /// The global unitary found by the alignment.
    pub unitary: Mat,
    pub iterations: usize,
}

const MAX_ALIGN_ITERS: usize = 100;

/// Decides whether one unitary `U` maps every block subspace of `ff2` onto the
/// corresponding block of `ff1`.
///
/// Looks for `U` and per-block unitaries `V_k` with `U·Q2_k·V_k ≈ Q1_k` by
/// alternating orthogonal Procrustes steps. The `V_k` start from `hint` when
/// given (then one step is exact). Without a hint the start is the polar
/// factor of a solution of the linear system `X·P2_k = P1_k·X`, which is
/// exact for equivalent frames whenever that solution is invertible; the
/// alternating steps then only polish it. Pairwise principal angles are a
/// unitary invariant, so pairs whose angle multisets differ are rejected up
/// front.
pub fn fusion_unitary_equivalence(
    ff1: &FusionFrame,
    ff2: &FusionFrame,
    hint: Option<&[Mat]>,
    tol: f64,
) -> Result<FusionEquivalence> {
    if ff1.len() != ff2.len() || ff1.ambient_dim != ff2.ambient_dim {
        return Err(NaimarkError::invalid("fusion frames differ in structure"));
    }
    for (k, (a, b)) in ff1.blocks.iter().zip(&ff2.blocks).enumerate() {
        if a.dim() != b.dim() {
            return Err(NaimarkError::invalid(format!("block {k} dimensions differ")));
        }
        if (a.weight - b.weight).abs() > tol * a.weight.max(1.0) {
            return Err(NaimarkError::invalid(format!("block {k} weights differ")));
        }
    }
    if let Some(h) = hint {
        if h.len() != ff1.len() || h.iter().zip(&ff1.blocks).any(|(v, b)| v.shape() != (b.dim(), b.dim())) {
            return Err(NaimarkError::invalid("hint must hold one d_k x d_k unitary per block"));
        }
    }
    let field = ff1.field().join(ff2.field());
    let m = ff1.ambient_dim;
    if ff1.is_empty() || m == 0 {
        return Ok(FusionEquivalence {
            equivalent: true,
            residual: 0.0,
            unitary: Mat::identity(m, field),
            iterations: 0,
        });
    }

    let invariant_gap = pairwise_angle_gap(ff1, ff2)?;
    let (mut u, mut v) = match hint {
        Some(h) => (global_procrustes(ff1, ff2, h)?, h.to_vec()),
        None => {
            let u = intertwining_unitary(ff1, ff2)?;
            let v = ff1
                .blocks
                .iter()
                .zip(&ff2.blocks)
                .map(|(a, b)| polar_factor(&u.matmul(&b.basis).adjoint().matmul(&a.basis)))
                .collect::<Result<Vec<_>>>()?;
            (u, v)
        }
    };
    let mut residual = projection_residual(ff1, ff2, &u);
    let mut iterations = 1;
    while residual > tol && hint.is_none() && iterations < MAX_ALIGN_ITERS {
        for (k, (a, b)) in ff1.blocks.iter().zip(&ff2.blocks).enumerate() {
            // V_k = argmin ‖U Q2_k V − Q1_k‖ = polar((U Q2_k)* Q1_k)
            v[k] = polar_factor(&u.matmul(&b.basis).adjoint().matmul(&a.basis))?;
        }
        let next = global_procrustes(ff1, ff2, &v)?;
        let next_residual = projection_residual(ff1, ff2, &next);
        iterations += 1;
        let stalled = (residual - next_residual).abs() <= 1e-15;
        u = next;
        residual = next_residual;
        if stalled {
            break;
        }
    }
    Ok(FusionEquivalence {
        equivalent: invariant_gap <= tol && residual <= tol,
        residual: residual.max(invariant_gap),
        unitary: u,
        iterations,
    })
}

/// Largest difference of principal-angle cosines over all block pairs.
fn pairwise_angle_gap(ff1: &FusionFrame, ff2: &FusionFrame) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for i in 0..ff1.len() {
        for j in (i + 1)..ff1.len() {
            let a = principal_angles(&ff1.blocks[i].basis, &ff1.blocks[j].basis)?;
            let b = principal_angles(&ff2.blocks[i].basis, &ff2.blocks[j].basis)?;
            for (x, y) in a.cosines.iter().zip(&b.cosines) {
                gap = gap.max((x - y).abs());
            }
        }
    }
    Ok(gap)
}

/// Unitary candidate from the linear equations `X·P2_k = P1_k·X`.
///
/// If `X` solves them and is invertible, `X*X` commutes with every `P2_k`, so
/// the polar factor of `X` solves them too and maps each block of `ff2` onto
/// the matching block of `ff1`. The solutions are read off the near-null
/// right singular vectors of the stacked system; a fixed generic combination
/// of them is used when the solution space has more than one dimension.
fn intertwining_unitary(ff1: &FusionFrame, ff2: &FusionFrame) -> Result<Mat> {
    let m = ff1.ambient_dim;
    let field = ff1.field().join(ff2.field());
    let unknowns = m * m;
    let rows = (ff1.len() * unknowns).max(unknowns);
    let mut system = DMatrix::<Complex64>::zeros(rows, unknowns);
    let at = |a: usize, c: usize| a + c * m;
    for (k, (w1, w2)) in ff1.blocks.iter().zip(&ff2.blocks).enumerate() {
        let p1 = w1.projection();
        let p2 = w2.projection();
        for a in 0..m {
            for b in 0..m {
                let row = k * unknowns + a * m + b;
                for c in 0..m {
                    system[(row, at(a, c))] += p2.get(c, b);
                    system[(row, at(c, b))] -= p1.get(a, c);
                }
            }
        }
    }
    let svd = singular_value_decomposition(&Mat::from_dmatrix(system, field)?)?;
    let sigma = &svd.singular_values;
    let cutoff = 1e-6 * sigma[0].max(1.0);
    let last = sigma.len() - 1;
    let null: Vec<usize> = (0..sigma.len()).filter(|&j| sigma[j] <= cutoff).collect();
    let null = if null.is_empty() { vec![last] } else { null };
    let mut x = DMatrix::<Complex64>::zeros(m, m);
    for (t, &j) in null.iter().enumerate() {
        let w = Complex64::new(0.5 + ((t + 1) as f64 * 0.618_033_988_75).fract(), 0.0);
        for col in 0..m {
            for row in 0..m {
                x[(row, col)] += w * svd.v.get(at(row, col), j);
            }
        }
    }
    // Fix the free global phase.
    let tr = x.trace();
    if tr.norm() > 0.0 {
        x *= tr.conj() / tr.norm();
    }
    polar_factor(&Mat::from_computed(x, field))
}

/// `U = polar(Σ_k ν_k² Q1_k (Q2_k V_k)*)`.
fn global_procrustes(ff1: &FusionFrame, ff2: &FusionFrame, v: &[Mat]) -> Result<Mat> {
    let m = ff1.ambient_dim;
    let mut acc = Mat::zeros(m, m, ff1.field().join(ff2.field()));
    for ((a, b), vk) in ff1.blocks.iter().zip(&ff2.blocks).zip(v) {
        let target = b.basis.matmul(vk);
        acc = acc.add(&a.basis.matmul(&target.adjoint()).scale(a.weight * a.weight));
    }
    polar_factor(&acc)
}

fn projection_residual(ff1: &FusionFrame, ff2: &FusionFrame, u: &Mat) -> f64 {
    ff1.blocks
        .iter()
        .zip(&ff2.blocks)
        .map(|(a, b)| {
            let moved = u.matmul(&b.basis);
            moved.matmul(&moved.adjoint()).max_abs_diff(&a.projection())
        })
        .fold(0.0, f64::max)
}

/// Checks `fusion_operator(ff) = frame_operator(fusion_to_frame(ff))`.
pub fn operator_consistency(ff: &FusionFrame) -> Result<f64> {
    let f = fusion_to_frame(ff)?;
    Ok(fusion_operator(ff).max_abs_diff(&frame_operator(&f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn line(theta: f64) -> Mat {
        Mat::real_from_rows(&[[theta.cos()], [theta.sin()]]).unwrap()
    }

    fn two_lines(theta: f64) -> FusionFrame {
        FusionFrame::new(
            2,
            vec![
                FusionBlock { basis: line(0.0), weight: 1.0 },
                FusionBlock { basis: line(theta), weight: 1.0 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn operator_examples() {
        let whole = FusionFrame::new(
            3,
            vec![FusionBlock { basis: Mat::identity(3, Field::Real), weight: 1.0 }],
        )
        .unwrap();
        assert_eq!(fusion_operator(&whole), Mat::identity(3, Field::Real));

        let s = fusion_operator(&two_lines(FRAC_PI_2));
        assert!(s.max_abs_diff(&Mat::identity(2, Field::Real)) < 1e-15);

        let theta = 0.7f64;
        let eigs = hermitian_eigenvalues(&fusion_operator(&two_lines(theta))).unwrap();
        assert!((eigs[0] - (1.0 + theta.cos())).abs() < 1e-14);
        assert!((eigs[1] - (1.0 - theta.cos())).abs() < 1e-14);
    }

    #[test]
    fn to_frame_examples() {
        let f = fusion_to_frame(&two_lines(FRAC_PI_3)).unwrap();
        let want = Mat::real_from_rows(&[[1.0, 0.5], [0.0, 3f64.sqrt() / 2.0]]).unwrap();
        assert!(f.synthesis().max_abs_diff(&want) < 1e-15);

        let half = FusionFrame::new(
            2,
            vec![FusionBlock { basis: line(FRAC_PI_2), weight: 0.5 }],
        )
        .unwrap();
        let f = fusion_to_frame(&half).unwrap();
        assert!((f.synthesis().get(1, 0).re - 0.5).abs() < 1e-15);
        assert!(f.synthesis().get(0, 0).norm() < 1e-16);
    }

    #[test]
    fn parseval_lines_have_empty_complement() {
        let c = fusion_naimark(&two_lines(FRAC_PI_2), 1e-9).unwrap();
        assert!(c.fusion.is_empty());
        assert_eq!(c.dropped, vec![0, 1]);
        assert_eq!(c.notices().len(), 2);
    }

    #[test]
    fn sixty_degree_lines() {
        let ff = two_lines(FRAC_PI_3);
        let c = fusion_naimark(&ff, 1e-9).unwrap();
        assert!((c.upper - 1.5).abs() < 1e-14);
        assert_eq!(c.fusion.len(), 2);
        for b in c.fusion.blocks() {
            assert_eq!(b.dim(), 1);
            assert!((b.weight - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
        let t = angle_transfer(&ff, &c, 0, 1, 1e-8).unwrap();
        assert!((t.original.angles[0] - FRAC_PI_3).abs() < 1e-12);
        assert!((t.predicted.cosines[0] - 1.0).abs() < 1e-12);
        assert!((t.measured.cosines[0] - 1.0).abs() < 1e-12);
        assert!(t.check.passed);

        let ch = chordal_transfer(&ff, &c, 0, 1, 1e-8).unwrap();
        assert!((ch.ratio - 4.0).abs() < 1e-12);
        assert!((ch.original_sq - 0.75).abs() < 1e-12);
        assert!(ch.predicted_sq.abs() < 1e-12 && ch.measured_sq.abs() < 1e-12);
        assert!(ch.check.passed);
        assert!(ch.parseval_ratio.is_none());
    }

    #[test]
    fn complement_block_norms() {
        let mut rng = Sampler::new(43);
        let ff = rng.fusion_frame(Field::Complex, 6, &[2, 3, 1, 2]);
        let c = fusion_naimark(&ff, 1e-9).unwrap();
        let g = &c.result.complement;
        let mut at = 0;
        for b in ff.blocks() {
            let want = (c.upper - b.weight * b.weight).sqrt();
            for j in 0..b.dim() {
                assert!((g.column_norm(at + j) - want).abs() < 1e-9);
            }
            at += b.dim();
        }
        for b in c.fusion.blocks() {
            assert!(b.basis.orthonormal_columns_defect() < 1e-9);
        }
    }

    #[test]
    fn angle_examples() {
        let q = line(0.3);
        let a = principal_angles(&q, &q).unwrap();
        assert!(a.angles[0].abs() < 1e-7 && (a.cosines[0] - 1.0).abs() < 1e-15);
        let a = principal_angles(&line(0.0), &line(FRAC_PI_2)).unwrap();
        assert!((a.angles[0] - FRAC_PI_2).abs() < 1e-15);
        let a = principal_angles(&line(0.0), &line(FRAC_PI_3)).unwrap();
        assert!((a.angles[0] - FRAC_PI_3).abs() < 1e-12);
        assert!(principal_angles(&line(0.0), &Mat::identity(3, Field::Real)).is_err());
    }

    #[test]
    fn prediction_examples() {
        let right = PrincipalAngles::from_cosines(vec![0.0, 0.0]);
        let p = predicted_complement_angles(&right, 0.8, 0.9, 2.0).unwrap();
        assert!(p.angles.iter().all(|a| (a - FRAC_PI_2).abs() < 1e-15));

        let theta = PrincipalAngles::from_cosines(vec![0.9, 0.3]);
        let b = 2.0;
        let nu = (b / 2.0f64).sqrt();
        let p = predicted_complement_angles(&theta, nu, nu, b).unwrap();
        for (x, y) in p.cosines.iter().zip(&theta.cosines) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(predicted_complement_angles(&theta, 2.0, 0.5, 2.0).is_err());
    }

    #[test]
    fn chordal_examples() {
        let q = line(0.4);
        assert!(chordal_distance(&q, &q).unwrap() < 1e-7);
        let e = Mat::identity(4, Field::Real);
        let d = chordal_distance(&e.column_range(0, 2), &e.column_range(2, 2)).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        let forms = chordal_distance_sq_forms(&line(0.0), &line(FRAC_PI_3)).unwrap();
        assert!((forms.via_angles - 0.75).abs() < 1e-12);
        assert!((forms.via_trace - 0.75).abs() < 1e-12);
        assert!(chordal_distance(&line(0.0), &e.column_range(0, 2).row_range(0, 2)).is_err());
    }

    #[test]
    fn chordal_ratio_one_identity() {
        // ν² = B/2 on duplicated blocks gives r = 1 and both sides vanish.
        let q = Mat::identity(4, Field::Real).column_range(0, 2);
        let ff = FusionFrame::new(
            4,
            vec![
                FusionBlock { basis: q.clone(), weight: 1.0 },
                FusionBlock { basis: q, weight: 1.0 },
                FusionBlock {
                    basis: Mat::identity(4, Field::Real).column_range(2, 2),
                    weight: 2f64.sqrt(),
                },
            ],
        )
        .unwrap();
        let t = chordal_complement_check(&ff, 0, 1, 1e-8).unwrap();
        assert!((t.ratio - 1.0).abs() < 1e-12);
        assert!(t.measured_sq.abs() < 1e-9 && t.predicted_sq.abs() < 1e-9);
    }

    #[test]
    fn random_chordal_identity() {
        let mut rng = Sampler::new(47);
        let ff = rng.fusion_frame(Field::Real, 6, &[2, 2, 2]);
        let t = chordal_complement_check(&ff, 0, 2, 1e-8).unwrap();
        assert!(t.check.passed, "{t:?}");
        let forms = chordal_distance_sq_forms(&ff.blocks()[0].basis, &ff.blocks()[1].basis).unwrap();
        assert!((forms.via_angles - forms.via_trace).abs() < 1e-10);
    }

    #[test]
    fn equivalence_with_basis_change() {
        let mut rng = Sampler::new(53);
        let ff = rng.fusion_frame(Field::Complex, 5, &[2, 1, 2]);
        let us: Vec<Mat> = ff.blocks().iter().map(|b| rng.unitary(Field::Complex, b.dim())).collect();
        let rotated = FusionFrame::new(
            5,
            ff.blocks()
                .iter()
                .zip(&us)
                .map(|(b, u)| FusionBlock { basis: b.basis.matmul(u), weight: b.weight })
                .collect(),
        )
        .unwrap();
        let c1 = fusion_naimark(&ff, 1e-9).unwrap();
        let c2 = fusion_naimark(&rotated, 1e-9).unwrap();
        let hint: Vec<Mat> = us.iter().map(|u| u.adjoint()).collect();
        let e = fusion_unitary_equivalence(&c1.fusion, &c2.fusion, Some(&hint), 1e-8).unwrap();
        assert!(e.equivalent, "{}", e.residual);
        let e = fusion_unitary_equivalence(&c1.fusion, &c2.fusion, None, 1e-8).unwrap();
        assert!(e.equivalent, "{}", e.residual);

        let e = fusion_unitary_equivalence(&c1.fusion, &c1.fusion, None, 1e-8).unwrap();
        assert!(e.equivalent);
        assert!(e.unitary.max_abs_diff(&Mat::identity(c1.fusion.ambient_dim(), Field::Complex)) < 1e-9);
    }

    #[test]
    fn equivalence_detects_foreign_block() {
        let mut rng = Sampler::new(59);
        let ff = rng.fusion_frame(Field::Real, 5, &[2, 2, 1]);
        let c = fusion_naimark(&ff, 1e-9).unwrap();
        let mut blocks = c.fusion.blocks().to_vec();
        let dim = c.fusion.ambient_dim();
        blocks[1].basis = rng.unitary(Field::Real, dim).column_range(0, blocks[1].dim());
        let other = FusionFrame::new(dim, blocks).unwrap();
        let e = fusion_unitary_equivalence(&c.fusion, &other, None, 1e-8).unwrap();
        assert!(!e.equivalent);
    }

    #[test]
    fn operator_matches_frame_operator() {
        let mut rng = Sampler::new(61);
        let ff = rng.fusion_frame(Field::Complex, 5, &[1, 2, 3]);
        assert!(operator_consistency(&ff).unwrap() < 1e-10);
    }
}
