//! b × h for b ∈ Λ_γ and h ∈ H^p with γ = n(1/p - 1): the ball-mean regime
//! for p = 0.8 and the polynomial-projection regime for p = 0.4.

use hardy_products::corpus::{draw_rng, random_decomposition, random_lipschitz, DecompositionParams};
use hardy_products::grid::GridSpec;
use hardy_products::lipschitz::{lambda_gamma_norm, LipschitzOrder};
use hardy_products::product::{split_lipschitz, verify_split};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 4.0, 513)?;
    for (p, s) in [(0.8, 0), (0.4, 2)] {
        let gamma = 1.0 / p - 1.0;
        let order = LipschitzOrder::new(gamma)?;
        let mut rng = draw_rng(7, 0);
        let b = random_lipschitz(&spec, gamma, 1.0, &mut rng)?;
        let params = DecompositionParams { moment_order: s, ..Default::default() };
        let d = random_decomposition(&spec, p, &params, &mut rng)?;
        let split = split_lipschitz(&b, &d, order, false)?;
        let report = verify_split(&split, lambda_gamma_norm(&b, order).norm, &d)?;
        println!(
            "p = {p}, γ = {gamma:.2}, regime {}: C1 = {:.4}, C2 = {:.4}, worst h2 moment {:.2e} of tolerance",
            split.regime.tag(),
            report.c1,
            report.c2,
            split.max_moment_ratio()
        );
        for e in &split.ledger {
            println!("  atom {}: rescale constant c_j = {:.4}", e.index, e.rescale_constant);
        }
    }
    Ok(())
}
