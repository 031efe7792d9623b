//! Trapezoid quadrature, ball means and L^p norms on a sampled box.

use hardy_products::grid::{ball_mean, integrate, lp_norm, Ball, GridFunction, GridSpec, Region};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 1.0, 257)?;
    let x2 = GridFunction::from_fn(spec, |p| p[0] * p[0])?;
    println!("∫_[-1,1] x² = {:.8} (exact 2/3)", integrate(&x2, Region::Whole)?);

    let ball = Ball::new(vec![0.0], 0.5)?;
    println!("mean of x² over [-1/2,1/2] = {:.8} (exact 1/12)", ball_mean(&x2, &ball)?);

    let wide = GridSpec::new(1, 2.0, 513)?;
    let ind = GridFunction::from_fn(wide, |p| if (0.0..=1.0).contains(&p[0]) { 1.0 } else { 0.0 })?;
    for p in [0.5, 1.0, 2.0] {
        println!("‖1_[0,1]‖_{p} = {:.6}", lp_norm(&ind, p, Region::Whole)?);
    }

    let plane = GridSpec::new(2, 1.0, 129)?;
    let r2 = GridFunction::from_fn(plane, |p| p[0] * p[0] + p[1] * p[1])?;
    println!("∫_[-1,1]² (x²+y²) = {:.8} (exact 8/3)", integrate(&r2, Region::Whole)?);
    Ok(())
}
