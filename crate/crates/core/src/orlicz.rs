//! Orlicz functions, Luxembourg norms, the cube-summed `L^Φ_*` quasi-norm and
//! the Hardy-type quasi-norms obtained by composing with a maximal function.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{lp_norm, GridFunction, Region};
use crate::maximal::{maximal_fn, truncated_maximal_fn, ScaleLadder};

/// Continuous increasing map of `[0, ∞)` onto itself with `P(0) = 0`.
pub trait OrliczFunction: Sync {
    fn eval(&self, t: f64) -> f64;
    fn name(&self) -> &str;
}

/// `Φ(t) = t / log(e + t)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhiLog;

impl OrliczFunction for PhiLog {
    #[inline]
    fn eval(&self, t: f64) -> f64 {
        t / (std::f64::consts::E + t).ln()
    }

    fn name(&self) -> &str {
        "phi_log"
    }
}

/// `P(t) = t`; its Luxembourg norm is the `L¹` norm.
#[derive(Clone, Copy, Debug, Default)]
pub struct Linear;

impl OrliczFunction for Linear {
    #[inline]
    fn eval(&self, t: f64) -> f64 {
        t
    }

    fn name(&self) -> &str {
        "linear"
    }
}

/// `Φ(t) = t / log(e + t)` for `t >= 0`.
pub fn phi(t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeArgument(t));
    }
    Ok(PhiLog.eval(t))
}

/// Relative width of the final bracket in the Luxembourg bisection.
const LUX_RTOL: f64 = 1e-13;

/// `∫_region P(|f|/k)` for each `k`, over the nonzero nodes of a region.
pub struct ModularIntegral<'a, P: OrliczFunction + ?Sized> {
    weighted: Vec<(f64, f64)>,
    sup: f64,
    p: &'a P,
}

impl<'a, P: OrliczFunction + ?Sized> ModularIntegral<'a, P> {
    pub fn new<'r>(f: &GridFunction, p: &'a P, region: impl Into<Region<'r>>) -> Result<Self> {
        let ib = region.into().resolve(f.spec())?;
        let v = f.values();
        let mut weighted = Vec::new();
        let mut sup: f64 = 0.0;
        ib.for_each(|i, w| {
            let a = v[i].abs();
            if w > 0.0 && a > 0.0 {
                weighted.push((w, a));
                sup = sup.max(a);
            }
        });
        Ok(ModularIntegral { weighted, sup, p })
    }

    pub fn eval(&self, k: f64) -> f64 {
        self.weighted.iter().map(|&(w, a)| w * self.p.eval(a / k)).sum()
    }

    /// Largest `|f|` over weighted nodes; zero iff the norm is zero.
    pub fn sup(&self) -> f64 {
        self.sup
    }
}

/// `inf{k > 0 : ∫_region P(|f|/k) <= 1}`.
///
/// The returned value is always feasible, i.e. the modular at it is `<= 1`,
/// and lies within a relative `1e-13` of the infimum.
pub fn luxembourg_norm<'r, P: OrliczFunction + ?Sized>(
    f: &GridFunction,
    p: &P,
    region: impl Into<Region<'r>>,
) -> Result<f64> {
    let modular = ModularIntegral::new(f, p, region)?;
    Ok(luxembourg_from_modular(&modular))
}

fn luxembourg_from_modular<P: OrliczFunction + ?Sized>(modular: &ModularIntegral<'_, P>) -> f64 {
    let sup = modular.sup();
    if sup == 0.0 {
        return 0.0;
    }
    let feasible = |k: f64| modular.eval(k) <= 1.0;
    let (mut lo, mut hi);
    if feasible(sup) {
        hi = sup;
        lo = sup * 0.5;
        while feasible(lo) {
            hi = lo;
            lo *= 0.5;
        }
    } else {
        lo = sup;
        hi = sup * 2.0;
        while !feasible(hi) {
            lo = hi;
            hi *= 2.0;
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 <= LUX_RTOL {
            break;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `Σ_j ‖f‖_{L^Φ(j+Q)}` over the unit lattice cubes meeting the box.
pub fn lphi_star_norm(f: &GridFunction) -> Result<f64> {
    lphi_star_norm_with(f, &PhiLog)
}

/// [`lphi_star_norm`] for an arbitrary Orlicz function.
pub fn lphi_star_norm_with<P: OrliczFunction + ?Sized>(f: &GridFunction, p: &P) -> Result<f64> {
    let cubes = f.spec().cubes();
    let parts = cubes
        .par_iter()
        .map(|c| luxembourg_norm(f, p, c))
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}

fn default_ladder(f: &GridFunction, local: bool) -> Result<ScaleLadder> {
    if local {
        ScaleLadder::truncated(f.spec())
    } else {
        Ok(ScaleLadder::full(f.spec()))
    }
}

fn apply_maximal(f: &GridFunction, ladder: &ScaleLadder, local: bool) -> Result<GridFunction> {
    if local {
        truncated_maximal_fn(f, ladder)
    } else {
        maximal_fn(f, ladder)
    }
}

/// `‖M f‖_p`, with the truncated maximal function when `local`.
pub fn hardy_quasinorm(f: &GridFunction, p: f64, local: bool) -> Result<f64> {
    hardy_quasinorm_with_ladder(f, p, local, &default_ladder(f, local)?)
}

pub fn hardy_quasinorm_with_ladder(f: &GridFunction, p: f64, local: bool, ladder: &ScaleLadder) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("Hardy exponent p = {p} not in (0, 1]")));
    }
    lp_norm(&apply_maximal(f, ladder, local)?, p, Region::Whole)
}

/// `‖M f‖_{L^Φ_*}`, with the truncated maximal function when `local`.
pub fn hardy_phi_star_quasinorm(f: &GridFunction, local: bool) -> Result<f64> {
    hardy_phi_star_quasinorm_with_ladder(f, local, &default_ladder(f, local)?)
}

pub fn hardy_phi_star_quasinorm_with_ladder(f: &GridFunction, local: bool, ladder: &ScaleLadder) -> Result<f64> {
    lphi_star_norm(&apply_maximal(f, ladder, local)?)
}
