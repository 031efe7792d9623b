//! Atoms with vanishing moments, validation, Haar decompositions and
//! decomposition files.

use hardy_products::atoms::{haar_decomposition, make_atom, make_local_atom, synthesize, validate_atom};
use hardy_products::corpus::step;
use hardy_products::grid::{Ball, DataFormat, GridSpec};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 4.0, 1025)?;
    let ball = Ball::new(vec![0.3], 0.5)?;
    for s in 0..=2 {
        let a = make_atom(&spec, &ball, 0.5, s)?;
        let v = validate_atom(&a);
        println!(
            "s = {s}: ‖a‖_∞ = {:.4}, size ratio {:.6}, worst moment {:.2e} of tolerance, passed {}",
            a.values.sup_norm(),
            v.size_ratio,
            v.max_moment_ratio.unwrap_or(0.0),
            v.passed
        );
    }
    let local = make_local_atom(&spec, &Ball::new(vec![0.0], 2.0)?, 1.0, f64::INFINITY)?;
    println!("local atom on |B| = 4: passed {}", validate_atom(&local).passed);

    let f = step(&spec)?;
    let d = haar_decomposition(&f, 1.0, 2.0, 4)?;
    println!("Haar decomposition of the step: {} atoms, Σ|λ| = {:.4}", d.len(), d.lambda_l1());
    let h = synthesize(&d)?;
    println!("‖synthesis‖_∞ = {:.4}", h.sup_norm());

    let dir = std::env::temp_dir().join("hardy_products_atoms_example");
    std::fs::create_dir_all(&dir)?;
    d.save(dir.join("haar.json"), DataFormat::Bin)?;
    println!("wrote {}", dir.join("haar.json").display());
    Ok(())
}
