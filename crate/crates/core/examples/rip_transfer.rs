//! Restricted isometry constants of a unit-norm frame and of its rescaled
//! complement.

use naimark::frame::Frame;
use naimark::properties::rip_complement_check;
use naimark::random::Sampler;
use naimark::{Field, Mat};

fn main() -> naimark::Result<()> {
    let h = 3f64.sqrt() / 2.0;
    let mb = Frame::new(Mat::real_from_rows(&[[1.0, -0.5, -0.5], [0.0, h, -h]])?)?;
    let t = rip_complement_check(&mb, 2, 1e-9)?;
    println!(
        "Mercedes-Benz, L = 2: delta = {}, B = {}, delta' = {} (bound delta/(B-1) = {})",
        t.frame.delta, t.upper, t.complement.delta, t.predicted
    );

    let mut rng = Sampler::new(99);
    for order in 1..=3 {
        let f = rng.unit_norm_frame(Field::Complex, 3, 7);
        let t = rip_complement_check(&f, order, 1e-9)?;
        println!(
            "random 3x7, L = {order}: delta = {:.6}, delta' = {:.6} <= {:.6} ({} subsets), holds: {}",
            t.frame.delta, t.complement.delta, t.predicted, t.frame.subsets_examined, t.check.passed
        );
    }
    Ok(())
}
