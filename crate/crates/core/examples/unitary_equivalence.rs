//! Complements built from different eigenbasis choices agree up to a unitary.

use naimark::complement::{naimark_complement_from_spectral, unitary_equivalence};
use naimark::completion::CompletionMode;
use naimark::frame::spectral;
use naimark::fusion::{fusion_naimark, fusion_unitary_equivalence, FusionBlock, FusionFrame};
use naimark::random::Sampler;
use naimark::{Field, Mat};

fn main() -> naimark::Result<()> {
    let mut rng = Sampler::new(11);
    // λ = 2 once and 0.5 twice. The minimal completion uses the eigenvectors
    // below the top, so turning the 0.5-eigenplane changes G.
    let f = rng.frame_with_spectrum(Field::Complex, &[2.0, 0.5, 0.5], 5);
    let spec = spectral(&f, 1e-9)?;
    let turn = rng.unitary(Field::Complex, 2);
    let rotated = Mat::hstack(&[
        &spec.eigenvectors.column_range(0, 1),
        &spec.eigenvectors.column_range(1, 2).matmul(&turn),
    ]);
    let other = spec.clone().with_eigenvectors(rotated)?;

    let g1 = naimark_complement_from_spectral(&f, &spec, CompletionMode::Minimal)?.complement;
    let g2 = naimark_complement_from_spectral(&f, &other, CompletionMode::Minimal)?.complement;
    println!("entrywise difference of the two complements: {:.3e}", g1.max_abs_diff(&g2));
    let e = unitary_equivalence(&g1, &g2, 1e-9)?;
    println!(
        "Gram residual {:.3e}, equivalent {}, alignment residual {:?}",
        e.gram_residual, e.equivalent, e.alignment_residual
    );

    let ff = rng.fusion_frame(Field::Real, 4, &[2, 1, 2]);
    let turned = FusionFrame::new(
        4,
        ff.blocks()
            .iter()
            .map(|b| FusionBlock { basis: b.basis.matmul(&rng.unitary(Field::Real, b.dim())), weight: b.weight })
            .collect(),
    )?;
    let c1 = fusion_naimark(&ff, 1e-9)?;
    let c2 = fusion_naimark(&turned, 1e-9)?;
    let e = fusion_unitary_equivalence(&c1.fusion, &c2.fusion, None, 1e-9)?;
    println!(
        "fusion complements from different block bases: equivalent {}, residual {:.3e}",
        e.equivalent, e.residual
    );
    Ok(())
}
