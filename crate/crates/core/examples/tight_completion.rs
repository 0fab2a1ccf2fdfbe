//! Completing a Bessel sequence to a tight frame, minimally or to a chosen
//! bound.

use naimark::completion::{check_rows_vs_eigs, complete_to_tight, CompletionMode};
use naimark::frame::{frame_operator, spectral, Frame};
use naimark::numkernel::hermitian_eigenvalues;
use naimark::random::Sampler;
use naimark::{Field, Mat};

fn main() -> naimark::Result<()> {
    let f = Sampler::new(2024).frame(Field::Complex, 4, 3);
    let spec = spectral(&f, 1e-9)?;
    println!("spectrum of FF*: {:?}", spec.eigenvalues);
    println!(
        "eigenbasis passes the row test: {}",
        check_rows_vs_eigs(&f, &spec.eigenvectors, &spec.eigenvalues, 1e-9)?
    );

    for mode in [CompletionMode::Minimal, CompletionMode::Pad(2.0 * spec.upper)] {
        let c = complete_to_tight(&f, &spec, mode)?;
        let extended = Frame::new(Mat::hstack(&[f.synthesis(), &c.vectors]))?;
        let eigs = hermitian_eigenvalues(&frame_operator(&extended))?;
        println!(
            "{mode:?}: added {} vectors, spectrum after completion {:?} (target {})",
            c.vectors.cols(),
            eigs,
            c.target_bound
        );
    }
    Ok(())
}
