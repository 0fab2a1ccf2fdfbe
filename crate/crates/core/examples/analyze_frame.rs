//! Spectrum, frame bounds and structural flags of a few small frames.

use naimark::frame::{classify, spectral, Frame};
use naimark::Mat;

fn show(name: &str, f: &Frame) -> naimark::Result<()> {
    let spec = spectral(f, 1e-9)?;
    let class = classify(f, 1e-9)?;
    println!("{name}: {}x{} ({:?})", f.dim(), f.len(), f.field());
    println!("  eigenvalues {:?}", spec.eigenvalues);
    println!("  A = {}, B = {}, K = {}", spec.lower, spec.upper, spec.top_multiplicity);
    println!(
        "  frame {} tight {} parseval {} equal-norm {} equiangular {}",
        class.is_frame, class.is_tight, class.is_parseval, class.is_equal_norm, class.is_equiangular
    );
    if let Some(angle) = class.common_angle {
        println!("  common |<f_n, f_m>| = {angle}");
    }
    Ok(())
}

fn main() -> naimark::Result<()> {
    let e1 = Frame::new(Mat::real_from_rows(&[[1.0, 0.0], [0.0, 0.5]])?)?;
    show("diagonal pair", &e1)?;

    let h = 3f64.sqrt() / 2.0;
    let mb = Frame::new(Mat::real_from_rows(&[[1.0, -0.5, -0.5], [0.0, h, -h]])?)?;
    show("Mercedes-Benz", &mb)?;

    // Two vectors spanning a line: a Bessel sequence, not a frame for R^2.
    let line = Frame::new(Mat::real_from_rows(&[[1.0, 2.0], [0.0, 0.0]])?)?;
    show("degenerate", &line)?;
    Ok(())
}
