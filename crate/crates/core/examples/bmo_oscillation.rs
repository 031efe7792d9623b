//! Mean oscillation scans: BMO, bmo (small balls plus large-ball means),
//! lmo, John-Nirenberg constants and the pointwise multiplier ratio.

use hardy_products::corpus::{regularized_log, step};
use hardy_products::grid::{Ball, GridFunction, GridSpec};
use hardy_products::oscillation::{bmo_local_norm, bmo_norm, jn_smallest_c, lmo_norm, multiplier_check};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 4.0, 513)?;
    let s = step(&spec)?;
    let rep = bmo_local_norm(&s)?;
    println!("step: bmo = {:.4} over {} balls", rep.norm, rep.family_size);
    for t in &rep.terms {
        println!("  {} = {:.4} at {:?}", t.name, t.value, t.argmax_ball);
    }

    let log = regularized_log(&spec)?;
    let b = bmo_norm(&log)?.norm;
    println!("log|x|: BMO = {b:.4}, bmo = {:.4}, lmo = {:.4}", bmo_local_norm(&log)?.norm, lmo_norm(&log)?.norm);
    let unit = Ball::new(vec![0.0], 0.5)?;
    println!("smallest c with ∫_B exp(|b - b_B|/(c‖b‖)) <= 2: {:?}", jn_smallest_c(&log, &unit, b)?);

    let bump = GridFunction::from_fn(spec, |p| (-(p[0] - 0.5).powi(2)).exp())?;
    let m = multiplier_check(&bump, &log)?;
    println!("‖φ b‖_bmo / (‖b‖ (‖φ‖_∞ + ‖φ‖_lmo)) = {:.4}", m.ratio);
    Ok(())
}
