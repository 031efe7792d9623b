//! Finite differences D^k_δ and Λ_γ norms by exhaustive lattice scans.

use hardy_products::grid::{GridFunction, GridSpec};
use hardy_products::lipschitz::{difference_op, homogeneous_seminorm, lambda_gamma_norm, LipschitzOrder};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 1.0, 257)?;
    let cubic = GridFunction::from_fn(spec, |p| p[0].powi(3) - p[0])?;
    let d = difference_op(&cubic, &[8.0 * spec.spacing()], 4)?;
    println!("max |D^4 cubic| = {:.2e}", d.values.sup_norm());

    let abs = GridFunction::from_fn(spec, |p| p[0].abs())?;
    for gamma in [0.25, 0.5, 1.0, 1.5] {
        let o = LipschitzOrder::new(gamma)?;
        let r = lambda_gamma_norm(&abs, o);
        println!(
            "|x|, γ = {gamma}: k = {}, seminorm = {:.4} at δ = {:?}, x = {:?}",
            o.k(),
            r.seminorm,
            r.argmax_delta,
            r.argmax_node
        );
    }
    let wide = GridSpec::new(1, 8.0, 257)?;
    let root = GridFunction::from_fn(wide, |p| p[0].signum() * p[0].abs().sqrt())?;
    let r = homogeneous_seminorm(&root, LipschitzOrder::new(0.5)?);
    println!("sign(x)|x|^(1/2) on [-8,8]: seminorm {:.4}, sup {:.4}", r.seminorm, root.sup_norm());
    Ok(())
}
