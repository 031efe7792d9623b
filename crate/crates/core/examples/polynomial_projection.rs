//! Weighted least-squares projections onto polynomials on a ball, the
//! sup ratio of the projection and Campanato ratios.

use hardy_products::corpus::{draw_rng, lacunary};
use hardy_products::grid::{Ball, GridFunction, GridSpec};
use hardy_products::lipschitz::LipschitzOrder;
use hardy_products::projection::{campanato_ratio, poly_project, projection_sup_ratio};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 2.0, 1025)?;
    let r = 0.5;
    let ball = Ball::new(vec![0.0], r)?;
    let cubic = GridFunction::from_fn(spec, |p| p[0].powi(3))?;
    let p = poly_project(&cubic, &ball, 2)?;
    println!("P²(x³) slope at 0: {:.8} (continuum 3r²/5 = {:.8})", p.eval(&[1e-3]) / 1e-3, 0.6 * r * r);

    let f = lacunary(&spec, 0.5, 6, &mut draw_rng(1, 0))?;
    for k in 0..=2 {
        println!("k = {k}: ‖P f‖_∞ / ‖f‖_∞ on B = {:.4}", projection_sup_ratio(&f, &ball, k)?);
    }
    let o = LipschitzOrder::new(0.5)?;
    for r in [0.0625, 0.125, 0.25, 0.5] {
        let b = Ball::new(vec![0.2], r)?;
        println!("Campanato ratio at r = {r}: {:.4}", campanato_ratio(&f, &b, o)?);
    }
    Ok(())
}
