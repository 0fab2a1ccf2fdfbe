//! Complement of a fusion frame, with the principal-angle and chordal
//! distance relations between original and complement blocks.

use naimark::fusion::{angle_transfer, chordal_transfer, fusion_bounds, fusion_naimark};
use naimark::random::Sampler;
use naimark::Field;

fn main() -> naimark::Result<()> {
    let ff = Sampler::new(5).fusion_frame(Field::Real, 5, &[2, 2, 1]);
    let (a, b) = fusion_bounds(&ff)?;
    println!("fusion frame in R^5 with block dims [2, 2, 1], bounds ({a:.4}, {b:.4})");

    let c = fusion_naimark(&ff, 1e-9)?;
    println!("complement lives in dimension {}", c.fusion.ambient_dim());
    for (k, block) in ff.blocks().iter().enumerate() {
        let w = c.block_for(k)?;
        println!("  block {k}: weight {:.4} -> {:.4}", block.weight, w.weight);
    }
    for note in c.notices() {
        println!("  {note}");
    }

    let t = angle_transfer(&ff, &c, 0, 1, 1e-9)?;
    println!("cos of principal angles, blocks 0 and 1");
    println!("  original  {:?}", t.original.cosines);
    println!("  predicted {:?}", t.predicted.cosines);
    println!("  measured  {:?}", t.measured.cosines);

    let d = chordal_transfer(&ff, &c, 0, 1, 1e-9)?;
    println!(
        "chordal distance squared: original {:.6}, complement {:.6}, predicted {:.6} (r = {:.4})",
        d.original_sq, d.measured_sq, d.predicted_sq, d.ratio
    );
    Ok(())
}
