//! b × h for b in bmo and h = Σ λ_j a_j with (1,∞,0)-atoms: the split into
//! h1 ∈ L¹ and h2 in the Hardy-Orlicz space, with its ledger and constants.

use hardy_products::corpus::{draw_rng, random_bmo, random_decomposition, DecompositionParams};
use hardy_products::grid::GridSpec;
use hardy_products::oscillation::bmo_local_norm;
use hardy_products::product::{split_bmo, verify_split, SplitReport, Subtracted};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 4.0, 513)?;
    let mut rng = draw_rng(2024, 0);
    let b = random_bmo(&spec, 1.0, &mut rng)?;
    let params = DecompositionParams { local_fraction: 0.3, ..Default::default() };
    let d = random_decomposition(&spec, 1.0, &params, &mut rng)?;

    let split = split_bmo(&b, &d, true)?;
    for e in &split.ledger {
        let m = match &e.subtracted {
            Subtracted::Mean(m) => *m,
            Subtracted::Polynomial(_) => unreachable!(),
        };
        println!(
            "atom {}: λ = {:+.3}, B = ({:+.3}, r {}), b_B = {:+.4}, ∫|(b - b_B) a| = {:.4}",
            e.index, e.lambda, e.ball.center[0], e.ball.radius, m, e.h1_term_l1
        );
    }
    let rec = split.reconstruction();
    println!("h1 + h2 vs b·h: {} of {} nodes differ, max {:.2} ulp", rec.mismatches, rec.nodes, rec.max_ulp_error);

    let report = verify_split(&split, bmo_local_norm(&b)?.norm, &d)?;
    println!("{}", SplitReport::CSV_HEADER);
    println!("{}", report.csv_row());
    Ok(())
}
