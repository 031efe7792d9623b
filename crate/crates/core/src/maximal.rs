//! Smooth maximal functions `sup_t |f * φ_t|` over a finite ladder of scales.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

/// The radial bump `exp(-1/(1-|x|^2))` on the unit ball.
///
/// The normalizing constant is never computed analytically: at every scale the
/// sampled kernel is divided by its own discrete sum, so constants are
/// reproduced exactly away from the boundary.
#[derive(Clone, Copy, Debug, Default)]
pub struct Mollifier;

impl Mollifier {
    /// Unnormalized profile at squared radius `rho2 = |x|^2`.
    #[inline]
    pub fn profile(rho2: f64) -> f64 {
        if rho2 >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - rho2)).exp()
        }
    }

    /// Sampled kernel of `φ_t` with weights that sum to one, as
    /// `(half-width in nodes, weights)`; weights are row-major over
    /// `[-K, K]^n`, axis 0 fastest.
    pub fn kernel(spec: &GridSpec, t: f64) -> Result<(usize, Vec<f64>)> {
        let (k, raw, sum) = raw_kernel(spec, t)?;
        Ok((k, raw.into_iter().map(|w| w / sum).collect()))
    }
}

fn raw_kernel(spec: &GridSpec, t: f64) -> Result<(usize, Vec<f64>, f64)> {
    let d = spec.spacing();
    let min = 2.0 * d;
    if !(t >= min * (1.0 - 1e-12)) {
        return Err(Error::ScaleBelowResolution { t, min });
    }
    let k = (t / d).floor() as usize;
    let side = 2 * k + 1;
    let u = |i: usize| (i as f64 - k as f64) * d / t;
    let raw: Vec<f64> = if spec.dim() == 1 {
        (0..side).map(|i| Mollifier::profile(u(i) * u(i))).collect()
    } else {
        (0..side * side)
            .map(|ij| {
                let (a, b) = (u(ij % side), u(ij / side));
                Mollifier::profile(a * a + b * b)
            })
            .collect()
    };
    let sum: f64 = raw.iter().sum();
    Ok((k, raw, sum))
}

/// Finite, strictly decreasing list of positive scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleLadder {
    scales: Vec<f64>,
}

impl ScaleLadder {
    /// Default ladder density: scales per factor of two.
    pub const DEFAULT_PER_OCTAVE: u32 = 2;

    /// Scales `2^{e/per_octave}` with `t_min <= t <= t_max`, largest first.
    pub fn geometric(t_min: f64, t_max: f64, per_octave: u32) -> Result<Self> {
        if per_octave == 0 || !(t_min > 0.0 && t_max >= t_min) {
            return Err(Error::InvalidParameter(format!(
                "ladder bounds [{t_min}, {t_max}] with {per_octave} per octave"
            )));
        }
        let q = per_octave as f64;
        let lo = (t_min.log2() * q - 1e-9).ceil() as i64;
        let hi = (t_max.log2() * q + 1e-9).floor() as i64;
        let scales: Vec<f64> = (lo..=hi).rev().map(|e| (e as f64 / q).exp2()).collect();
        Self::from_scales(scales)
    }

    /// Ladder for the full operator: `[2Δ, 2R]` at the default density.
    pub fn full(spec: &GridSpec) -> Self {
        Self::full_with_density(spec, Self::DEFAULT_PER_OCTAVE)
    }

    pub fn full_with_density(spec: &GridSpec, per_octave: u32) -> Self {
        Self::geometric(2.0 * spec.spacing(), 2.0 * spec.halfwidth(), per_octave)
            .expect("grid has at least 16 points, so 2Δ < 2R")
    }

    /// Ladder for the truncated operator: `[2Δ, 1)` at the default density.
    pub fn truncated(spec: &GridSpec) -> Result<Self> {
        Self::truncated_with_density(spec, Self::DEFAULT_PER_OCTAVE)
    }

    pub fn truncated_with_density(spec: &GridSpec, per_octave: u32) -> Result<Self> {
        let full = Self::geometric(2.0 * spec.spacing(), 1.0, per_octave)?;
        Self::from_scales(full.scales.into_iter().filter(|&t| t < 1.0).collect())
    }

    pub fn from_scales(mut scales: Vec<f64>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::InvalidParameter("empty scale ladder".into()));
        }
        if scales.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidParameter("ladder scales must be positive".into()));
        }
        scales.sort_by(|a, b| b.total_cmp(a));
        scales.dedup();
        Ok(ScaleLadder { scales })
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn is_truncated(&self) -> bool {
        self.scales.iter().all(|&t| t < 1.0)
    }
}

/// `f * φ_t` on the grid, with `f = 0` outside the box.
pub fn convolve_dilated(f: &GridFunction, t: f64) -> Result<GridFunction> {
    let spec = *f.spec();
    let (k, raw, sum) = raw_kernel(&spec, t)?;
    let Some((slo, shi)) = f.support_box() else {
        return Ok(GridFunction::zeros(spec));
    };
    let m = spec.points_per_axis();
    let v = f.values();
    let k = k as isize;
    let side = (2 * k + 1) as usize;
    // Node range along one axis whose kernel window meets the support.
    let window = |x: usize, axis: usize| -> Option<(usize, usize)> {
        let lo = (x as isize - k).max(slo[axis] as isize);
        let hi = (x as isize + k).min(shi[axis] as isize);
        (lo <= hi).then_some((lo as usize, hi as usize))
    };
    let out: Vec<f64> = if spec.dim() == 1 {
        (0..m)
            .into_par_iter()
            .map(|x| match window(x, 0) {
                None => 0.0,
                Some((lo, hi)) => {
                    let mut s = 0.0;
                    for y in lo..=hi {
                        s += raw[(y as isize - x as isize + k) as usize] * v[y];
                    }
                    s / sum
                }
            })
            .collect()
    } else {
        (0..m * m)
            .into_par_iter()
            .map(|flat| {
                let (x0, x1) = (flat % m, flat / m);
                let (Some((lo0, hi0)), Some((lo1, hi1))) = (window(x0, 0), window(x1, 1)) else {
                    return 0.0;
                };
                let mut s = 0.0;
                for y1 in lo1..=hi1 {
                    let krow = (y1 as isize - x1 as isize + k) as usize * side;
                    let vrow = y1 * m;
                    for y0 in lo0..=hi0 {
                        s += raw[krow + (y0 as isize - x0 as isize + k) as usize] * v[vrow + y0];
                    }
                }
                s / sum
            })
            .collect()
    };
    Ok(GridFunction::from_raw(spec, out))
}

fn ladder_max(f: &GridFunction, ladder: &ScaleLadder) -> Result<GridFunction> {
    let mut acc = vec![0.0f64; f.len()];
    for &t in ladder.scales() {
        let c = convolve_dilated(f, t)?;
        for (a, v) in acc.iter_mut().zip(c.values()) {
            *a = a.max(v.abs());
        }
    }
    Ok(GridFunction::from_raw(*f.spec(), acc))
}

/// `max_{t in ladder} |f * φ_t|` pointwise.
pub fn maximal_fn(f: &GridFunction, ladder: &ScaleLadder) -> Result<GridFunction> {
    ladder_max(f, ladder)
}

/// As [`maximal_fn`] but every scale must lie in `(0, 1)`.
pub fn truncated_maximal_fn(f: &GridFunction, ladder: &ScaleLadder) -> Result<GridFunction> {
    if !ladder.is_truncated() {
        return Err(Error::LadderNotTruncated);
    }
    ladder_max(f, ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::lp_norm;
    use crate::grid::Region;

    fn spec(r: f64, m: usize) -> GridSpec {
        GridSpec::new(1, r, m).unwrap()
    }

    fn indicator(s: GridSpec, a: f64, b: f64) -> GridFunction {
        GridFunction::from_fn(s, |p| if p[0] >= a && p[0] <= b { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn kernel_sums_to_one() {
        for s in [spec(8.0, 1025), GridSpec::new(2, 2.0, 65).unwrap()] {
            for t in [2.0 * s.spacing(), 0.3, 1.0] {
                let (_, w) = Mollifier::kernel(&s, t).unwrap();
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!(w.iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn below_resolution_rejected() {
        let s = spec(1.0, 33);
        let f = GridFunction::constant(s, 1.0);
        assert!(matches!(
            convolve_dilated(&f, s.spacing()),
            Err(Error::ScaleBelowResolution { .. })
        ));
    }

    #[test]
    fn constants_are_fixed_points_inside() {
        let s = spec(4.0, 257);
        let one = GridFunction::constant(s, 1.0);
        let t = 0.5;
        let c = convolve_dilated(&one, t).unwrap();
        for i in 0..s.points_per_axis() {
            if s.coord(i).abs() < 4.0 - t - s.spacing() {
                assert_eq!(c.values()[i], 1.0);
            }
        }
        let z = convolve_dilated(&GridFunction::zeros(s), t).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn indicator_support_arithmetic() {
        let s = spec(8.0, 1025);
        let f = indicator(s, -1.0, 1.0);
        let c = convolve_dilated(&f, 0.5).unwrap();
        assert!((c.values()[s.nearest_index(0.0)] - 1.0).abs() < 1e-12);
        assert_eq!(c.values()[s.nearest_index(3.0)], 0.0);
    }

    #[test]
    fn ladder_shapes() {
        let s = spec(8.0, 1025);
        let full = ScaleLadder::full(&s);
        assert!(full.scales().windows(2).all(|w| w[0] > w[1]));
        assert_eq!(full.scales()[0], 16.0);
        assert_eq!(*full.scales().last().unwrap(), 2.0 * s.spacing());
        let tr = ScaleLadder::truncated(&s).unwrap();
        assert!(tr.is_truncated());
        assert!(tr.scales().iter().all(|t| full.scales().contains(t)));
    }

    #[test]
    fn ladder_sup_matches_fine_scan() {
        let s = spec(8.0, 1025);
        let f = indicator(s, -1.0, 1.0);
        let i3 = s.nearest_index(3.0);
        let ladder = ScaleLadder::full(&s);
        let coarse = maximal_fn(&f, &ladder).unwrap().values()[i3];
        // ten times finer in log t than the dyadic ladder
        let fine = ScaleLadder::geometric(2.0 * s.spacing(), 16.0, 10).unwrap();
        let oracle = maximal_fn(&f, &fine).unwrap().values()[i3];
        assert!(coarse <= oracle * (1.0 + 1e-12));
        assert!(coarse >= 0.95 * oracle, "{coarse} vs {oracle}");
    }

    #[test]
    fn truncated_is_local() {
        let s = spec(8.0, 1025);
        let f = GridFunction::from_fn(s, |p| {
            let a = Mollifier::profile(((p[0] - 5.0) / 0.5).powi(2));
            let b = Mollifier::profile(((p[0] + 5.0) / 0.5).powi(2));
            a + b
        })
        .unwrap();
        let full = maximal_fn(&f, &ScaleLadder::full(&s)).unwrap();
        let tr = truncated_maximal_fn(&f, &ScaleLadder::truncated(&s).unwrap()).unwrap();
        let i0 = s.nearest_index(0.0);
        assert_eq!(tr.values()[i0], 0.0);
        assert!(full.values()[i0] > 0.0);
        for (a, b) in tr.values().iter().zip(full.values()) {
            assert!(a <= b);
        }
        assert!(matches!(
            truncated_maximal_fn(&f, &ScaleLadder::full(&s)),
            Err(Error::LadderNotTruncated)
        ));
    }

    #[test]
    fn homogeneous_and_sublinear() {
        let s = spec(4.0, 257);
        let f = GridFunction::from_fn(s, |p| (2.0 * p[0]).sin() * (-p[0] * p[0]).exp()).unwrap();
        let g = indicator(s, 0.0, 1.5);
        let l = ScaleLadder::full(&s);
        let mf = maximal_fn(&f, &l).unwrap();
        let m3 = maximal_fn(&f.scale(-3.0), &l).unwrap();
        for (a, b) in mf.values().iter().zip(m3.values()) {
            assert!((3.0 * a - b).abs() <= 1e-12 * (1.0 + b));
        }
        let mg = maximal_fn(&g, &l).unwrap();
        let mfg = maximal_fn(&f.add(&g).unwrap(), &l).unwrap();
        for i in 0..s.node_count() {
            assert!(mfg.values()[i] <= mf.values()[i] + mg.values()[i] + 1e-14);
        }
        assert!(lp_norm(&mf, 1.0, Region::Whole).unwrap() > 0.0);
    }

    #[test]
    fn two_dimensional_constant() {
        let s = GridSpec::new(2, 2.0, 33).unwrap();
        let one = GridFunction::constant(s, 1.0);
        let c = convolve_dilated(&one, 0.5).unwrap();
        assert_eq!(c.values()[s.flatten([16, 16])], 1.0);
    }
}
