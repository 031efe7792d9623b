//! Luxembourg norms for Φ(t) = t / log(e + t), the cube-summed L^Φ_* norm
//! and Hardy-type quasi-norms of the maximal function.

use hardy_products::grid::{GridFunction, GridSpec, Region};
use hardy_products::orlicz::{
    hardy_phi_star_quasinorm, hardy_quasinorm, lphi_star_norm, luxembourg_norm, phi, Linear, ModularIntegral, PhiLog,
};

fn main() -> hardy_products::Result<()> {
    println!("Φ(1) = {:.6}, Φ(10) = {:.6}", phi(1.0)?, phi(10.0)?);

    let spec = GridSpec::new(1, 4.0, 513)?;
    let f = GridFunction::from_fn(spec, |p| (-p[0] * p[0]).exp() * 3.0)?;
    let k = luxembourg_norm(&f, &PhiLog, Region::Whole)?;
    let modular = ModularIntegral::new(&f, &PhiLog, Region::Whole)?;
    println!("‖f‖_(L^Φ) = {k:.9}, modular at the norm = {:.9}", modular.eval(k));
    println!("with P(t) = t the norm is ‖f‖_1 = {:.9}", luxembourg_norm(&f, &Linear, Region::Whole)?);
    println!("‖f‖_(L^Φ_*) = {:.6}", lphi_star_norm(&f)?);

    let atom_like = GridFunction::from_fn(spec, |p| if p[0].abs() < 0.5 { p[0].signum() } else { 0.0 })?;
    println!("‖M h‖ in L^Φ_*: {:.6}", hardy_phi_star_quasinorm(&atom_like, false)?);
    println!("‖M h‖_(L^0.8): {:.6}", hardy_quasinorm(&atom_like, 0.8, false)?);
    println!("local version: {:.6}", hardy_quasinorm(&atom_like, 0.8, true)?);
    Ok(())
}
