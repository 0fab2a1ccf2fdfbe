//! Naimark complements: the worked 2x2 example, a Parseval frame, and a
//! random Bessel sequence with its complement bounds.

use naimark::complement::{complement_bounds, measured_bounds, naimark_complement, verify_complement};
use naimark::completion::CompletionMode;
use naimark::frame::{spectral, Frame};
use naimark::io::serialize_matrix;
use naimark::random::Sampler;
use naimark::{Field, Mat};

fn main() -> naimark::Result<()> {
    let e1 = Frame::new(Mat::real_from_rows(&[[1.0, 0.0], [0.0, 0.5]])?)?;
    let r = naimark_complement(&e1, CompletionMode::Minimal, 1e-9)?;
    println!("complement of diag(1, 1/2):\n{}", serialize_matrix(&r.complement));
    let v = verify_complement(&e1, &r, 1e-9);
    println!("G*G = BI - F*F residual {:e}, unitary embedding: {:?}", v.gram.residual, v.unitarity);

    // For a Parseval frame the complement is the classic one: [F; G] is unitary.
    let h = (2.0f64 / 3.0).sqrt();
    let mb = Frame::new(
        Mat::real_from_rows(&[[1.0, -0.5, -0.5], [0.0, 3f64.sqrt() / 2.0, -(3f64.sqrt()) / 2.0]])?
            .scale(h),
    )?;
    let r = naimark_complement(&mb, CompletionMode::Minimal, 1e-9)?;
    println!(
        "Parseval Mercedes-Benz: {} vectors added, complement {:?}",
        r.completion.cols(),
        r.complement.to_row_major().iter().map(|z| z.re).collect::<Vec<_>>()
    );

    let f = Sampler::new(7).frame(Field::Real, 3, 6);
    let spec = spectral(&f, 1e-9)?;
    for mode in [CompletionMode::Minimal, CompletionMode::Pad(1.5 * spec.upper)] {
        let r = naimark_complement(&f, mode, 1e-9)?;
        let closed = complement_bounds(&spec, f.len(), mode)?;
        let measured = measured_bounds(&r.complement, r.target_bound);
        println!(
            "{mode:?}: G is {}x{}, closed-form bounds ({:?}, {:?}), measured {:?}",
            r.complement.rows(),
            r.complement.cols(),
            closed.lower,
            closed.upper,
            measured
        );
    }
    Ok(())
}
