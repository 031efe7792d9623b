//! Mean oscillation over balls, the BMO / bmo / lmo norms as suprema over a
//! finite ball family, a John–Nirenberg scan and the lmo multiplier check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{weighted_mean, Ball, GridFunction, GridSpec, IndexBox, Region};

/// Finite family of balls with dyadic radii in `[4Δ, 2R]`.
///
/// Centers run over a node sub-lattice through the node nearest the origin,
/// with stride `max(1, round(r / 8Δ))` nodes per axis. Balls that stick out of
/// the box are clipped to it. The small / large split uses the nominal
/// measure `(2r)^n`; a ball with `(2r)^n = 1` belongs to both.
#[derive(Clone, Debug)]
pub struct BallFamily {
    spec: GridSpec,
    members: Vec<Member>,
}

#[derive(Clone, Debug)]
struct Member {
    ball: Ball,
    ib: IndexBox,
}

impl BallFamily {
    pub fn new(spec: &GridSpec) -> Self {
        let d = spec.spacing();
        let lo = (4.0 * d).log2().ceil() as i32;
        let hi = (2.0 * spec.halfwidth()).log2().floor() as i32;
        let radii: Vec<f64> = (lo..=hi).map(|e| (e as f64).exp2()).collect();
        Self::with_radii(spec, &radii)
    }

    /// Family over explicit radii, using the default center stride.
    pub fn with_radii(spec: &GridSpec, radii: &[f64]) -> Self {
        let d = spec.spacing();
        let m = spec.points_per_axis() as i64;
        let mid = spec.nearest_index(0.0) as i64;
        let mut members = Vec::new();
        for &r in radii {
            let stride = ((r / (8.0 * d)).round() as i64).max(1);
            let first = mid - (mid / stride) * stride;
            let axis: Vec<i64> = (first..m).step_by(stride as usize).collect();
            let centers: Vec<Vec<f64>> = if spec.dim() == 1 {
                axis.iter().map(|&i| vec![spec.coord(i as usize)]).collect()
            } else {
                let mut v = Vec::with_capacity(axis.len() * axis.len());
                for &i1 in &axis {
                    for &i0 in &axis {
                        v.push(vec![spec.coord(i0 as usize), spec.coord(i1 as usize)]);
                    }
                }
                v
            };
            for c in centers {
                let ball = Ball { center: c, radius: r };
                if let Ok(ib) = Region::Ball(&ball).resolve(spec) {
                    if ib.is_resolvable() {
                        members.push(Member { ball, ib });
                    }
                }
            }
        }
        BallFamily { spec: *spec, members }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn balls(&self) -> impl Iterator<Item = &Ball> {
        self.members.iter().map(|m| &m.ball)
    }

    fn small(&self) -> impl Iterator<Item = &Member> {
        self.members.iter().filter(|m| m.ball.measure() <= 1.0 + 1e-12)
    }

    fn large(&self) -> impl Iterator<Item = &Member> {
        self.members.iter().filter(|m| m.ball.measure() >= 1.0 - 1e-12)
    }
}

/// One supremum entering a norm, with the ball attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    pub name: String,
    pub value: f64,
    pub argmax_ball: Option<Ball>,
}

/// Norm value together with the family it was computed over.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub norm: f64,
    pub family_size: usize,
    pub argmax_ball: Option<Ball>,
    pub terms: Vec<TermReport>,
}

fn oscillation_on(v: &[f64], ib: &IndexBox) -> f64 {
    let mean = weighted_mean(v, ib);
    let mut s = 0.0;
    let mut wsum = 0.0;
    ib.for_each(|i, w| {
        s += w * (v[i] - mean).abs();
        wsum += w;
    });
    s / wsum
}

fn abs_mean_on(v: &[f64], ib: &IndexBox) -> f64 {
    let mut s = 0.0;
    let mut wsum = 0.0;
    ib.for_each(|i, w| {
        s += w * v[i].abs();
        wsum += w;
    });
    s / wsum
}

/// `(1/|B|) ∫_B |b - b_B|`, with `|B|` the quadrature measure.
pub fn mean_oscillation(b: &GridFunction, ball: &Ball) -> Result<f64> {
    let ib = Region::Ball(ball).resolve(b.spec())?;
    if !ib.is_resolvable() {
        return Err(Error::UnderResolvedBall);
    }
    Ok(oscillation_on(b.values(), &ib))
}

fn sup_over<'a>(
    name: &str,
    members: impl Iterator<Item = &'a Member>,
    stat: impl Fn(&Member) -> f64 + Sync,
) -> TermReport {
    let members: Vec<&Member> = members.collect();
    let values: Vec<f64> = members.par_iter().map(|m| stat(m)).collect();
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    TermReport {
        name: name.to_string(),
        value: best.map_or(0.0, |(_, v)| v),
        argmax_ball: best.map(|(i, _)| members[i].ball.clone()),
    }
}

fn check_family(b: &GridFunction, family: &BallFamily) -> Result<()> {
    if b.spec() != family.spec() {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

fn combine(family: &BallFamily, terms: Vec<TermReport>) -> NormReport {
    let argmax_ball = terms
        .iter()
        .filter(|t| t.value > 0.0)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .and_then(|t| t.argmax_ball.clone());
    NormReport {
        norm: terms.iter().map(|t| t.value).sum(),
        family_size: family.len(),
        argmax_ball,
        terms,
    }
}

/// Sup of the mean oscillation over every ball of the default family.
pub fn bmo_norm(b: &GridFunction) -> Result<NormReport> {
    bmo_norm_with_family(b, &BallFamily::new(b.spec()))
}

pub fn bmo_norm_with_family(b: &GridFunction, family: &BallFamily) -> Result<NormReport> {
    check_family(b, family)?;
    let v = b.values();
    let t = sup_over("oscillation", family.members.iter(), |m| oscillation_on(v, &m.ib));
    Ok(combine(family, vec![t]))
}

/// Oscillation sup over `|B| <= 1` plus sup of `(1/|B|) ∫_B |b|` over `|B| >= 1`.
pub fn bmo_local_norm(b: &GridFunction) -> Result<NormReport> {
    bmo_local_norm_with_family(b, &BallFamily::new(b.spec()))
}

pub fn bmo_local_norm_with_family(b: &GridFunction, family: &BallFamily) -> Result<NormReport> {
    check_family(b, family)?;
    let v = b.values();
    let small = sup_over("small_oscillation", family.small(), |m| oscillation_on(v, &m.ib));
    let large = sup_over("large_mean", family.large(), |m| abs_mean_on(v, &m.ib));
    Ok(combine(family, vec![small, large]))
}

/// As [`bmo_local_norm`], with small-ball oscillations weighted by
/// `log(e + 1/|B|)`.
pub fn lmo_norm(b: &GridFunction) -> Result<NormReport> {
    lmo_norm_with_family(b, &BallFamily::new(b.spec()))
}

pub fn lmo_norm_with_family(b: &GridFunction, family: &BallFamily) -> Result<NormReport> {
    check_family(b, family)?;
    let v = b.values();
    let small = sup_over("small_log_oscillation", family.small(), |m| {
        (std::f64::consts::E + 1.0 / m.ball.measure()).ln() * oscillation_on(v, &m.ib)
    });
    let large = sup_over("large_mean", family.large(), |m| abs_mean_on(v, &m.ib));
    Ok(combine(family, vec![small, large]))
}

fn check_unit_ball(ball: &Ball) -> Result<()> {
    if (ball.measure() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "John-Nirenberg ball must have measure 1, got {}",
            ball.measure()
        )));
    }
    Ok(())
}

/// `∫_B exp(|b - b_B| / (c ‖b‖_bmo))` for a ball with `|B| = 1`.
pub fn jn_check(b: &GridFunction, ball: &Ball, c: f64) -> Result<f64> {
    let norm = bmo_local_norm(b)?.norm;
    jn_check_with_norm(b, ball, c, norm)
}

/// [`jn_check`] with a precomputed `‖b‖_bmo`.
pub fn jn_check_with_norm(b: &GridFunction, ball: &Ball, c: f64, norm: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("trial constant c = {c} must be positive")));
    }
    if !(norm > 0.0) {
        return Err(Error::DegenerateInputs("bmo norm is zero".into()));
    }
    check_unit_ball(ball)?;
    let ib = Region::Ball(ball).resolve(b.spec())?;
    if !ib.is_resolvable() {
        return Err(Error::UnderResolvedBall);
    }
    let v = b.values();
    let mean = weighted_mean(v, &ib);
    let scale = 1.0 / (c * norm);
    let mut s = 0.0;
    ib.for_each(|i, w| s += w * ((v[i] - mean).abs() * scale).exp());
    Ok(s)
}

/// Smallest `c` (to relative `1e-6`) with `jn_check <= 2`, or `None` when the
/// quadrature measure of the ball itself exceeds 2.
pub fn jn_smallest_c(b: &GridFunction, ball: &Ball, norm: f64) -> Result<Option<f64>> {
    let ok = |c: f64| -> Result<bool> { Ok(jn_check_with_norm(b, ball, c, norm)? <= 2.0) };
    let ib = Region::Ball(ball).resolve(b.spec())?;
    if ib.measure() > 2.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1.0, 1.0);
    if ok(1.0)? {
        while ok(lo)? {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-12 {
                return Ok(Some(hi));
            }
        }
    } else {
        while !ok(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Ok(None);
            }
        }
    }
    while hi / lo - 1.0 > 1e-6 {
        let mid = (lo * hi).sqrt();
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Pieces of the discrete multiplier constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub product_bmo: f64,
    pub b_bmo: f64,
    pub phi_sup: f64,
    pub phi_lmo: f64,
    pub ratio: f64,
}

/// `‖b φ‖_bmo / (‖b‖_bmo (‖φ‖_∞ + ‖φ‖_lmo))`.
pub fn multiplier_check(phi_fn: &GridFunction, b: &GridFunction) -> Result<MultiplierReport> {
    phi_fn.check_same(b)?;
    let family = BallFamily::new(b.spec());
    let product_bmo = bmo_local_norm_with_family(&phi_fn.mul(b)?, &family)?.norm;
    let b_bmo = bmo_local_norm_with_family(b, &family)?.norm;
    let phi_sup = phi_fn.sup_norm();
    let phi_lmo = lmo_norm_with_family(phi_fn, &family)?.norm;
    let denom = b_bmo * (phi_sup + phi_lmo);
    if !(denom > 0.0) {
        return Err(Error::DegenerateInputs("multiplier denominator is zero".into()));
    }
    Ok(MultiplierReport {
        product_bmo,
        b_bmo,
        phi_sup,
        phi_lmo,
        ratio: product_bmo / denom,
    })
}
