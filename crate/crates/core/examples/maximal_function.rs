//! Smooth maximal function over a geometric ladder of scales, full and
//! truncated to t < 1.

use hardy_products::grid::{lp_norm, GridFunction, GridSpec, Region};
use hardy_products::maximal::{convolve_dilated, maximal_fn, truncated_maximal_fn, ScaleLadder};

fn main() -> hardy_products::Result<()> {
    let spec = GridSpec::new(1, 8.0, 1025)?;
    let f = GridFunction::from_fn(spec, |p| if p[0].abs() <= 1.0 { 1.0 } else { 0.0 })?;

    let smooth = convolve_dilated(&f, 0.5)?;
    let at = |g: &GridFunction, x: f64| g.values()[spec.nearest_index(x)];
    println!("(φ_1/2 * f)(0) = {:.12}, at 3: {:.3e}", at(&smooth, 0.0), at(&smooth, 3.0));

    let full = ScaleLadder::full(&spec);
    let local = ScaleLadder::truncated(&spec)?;
    let t = full.scales();
    let (lo, hi) = t.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
    println!("ladder: {} scales in [{lo}, {hi}]", t.len());
    let m = maximal_fn(&f, &full)?;
    let m1 = truncated_maximal_fn(&f, &local)?;
    for x in [0.0, 1.5, 3.0, 6.0] {
        println!("x = {x}: M f = {:.5}, truncated = {:.5}", at(&m, x), at(&m1, x));
    }
    println!("‖M f‖_1 = {:.5}", lp_norm(&m, 1.0, Region::Whole)?);
    Ok(())
}
