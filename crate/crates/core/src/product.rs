//! The product `b × h` at grid scale and its splits `b h = h1 + h2`.
//!
//! For an atomic decomposition `h = Σ λ_j a_j` and a per-ball object `m_j`
//! (the ball mean of `b`, or its `L²(B_j)` polynomial projection),
//!
//! ```text
//! h1 = Σ_j (b - m_j) (λ_j a_j),     h2 = b h - h1.
//! ```
//!
//! `h1` is summed in atom order and `h2` is the pointwise remainder, so that
//! `h2` equals `Σ_j m_j λ_j a_j` up to rounding. The ledger keeps, per atom, the
//! subtracted object, the rescale constant of `m_j a_j` and its moments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atoms::{centered_moments, moment_tolerance, synthesize, AtomicDecomposition, MomentCheck};
use crate::error::{Error, Result};
use crate::grid::{integrate, lp_norm, weighted_mean, Ball, GridFunction, Region};
use crate::lipschitz::LipschitzOrder;
use crate::maximal::{maximal_fn, truncated_maximal_fn, ScaleLadder};
use crate::orlicz::{hardy_phi_star_quasinorm_with_ladder, hardy_quasinorm_with_ladder, luxembourg_norm, PhiLog};
use crate::projection::{fit, PolyProjection};

/// Tolerance on `γ = n(1/p - 1)` and on the regime threshold.
const EXPONENT_TOL: f64 = 1e-12;

/// Which split is performed and which space `h2` is measured in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `p = 1`, ball means, `h2` in `ℋ^Φ_*`.
    P1Bmo,
    P1BmoLocal,
    /// `n/(n+1) <= p < 1`, ball means, `h2` in `ℋ^p`.
    PLt1Mean,
    PLt1MeanLocal,
    /// `p < n/(n+1)`, polynomial projections of degree `⌊γ⌋`.
    PLt1Proj,
    PLt1ProjLocal,
}

impl Regime {
    pub fn is_local(self) -> bool {
        matches!(self, Regime::P1BmoLocal | Regime::PLt1MeanLocal | Regime::PLt1ProjLocal)
    }

    pub fn uses_projection(self) -> bool {
        matches!(self, Regime::PLt1Proj | Regime::PLt1ProjLocal)
    }

    pub fn is_p1(self) -> bool {
        matches!(self, Regime::P1Bmo | Regime::P1BmoLocal)
    }

    /// Regime of a Lipschitz split for exponent `p` in dimension `n`.
    pub fn for_lipschitz(p: f64, n: usize, local: bool) -> Regime {
        let threshold = n as f64 / (n as f64 + 1.0);
        match (p >= threshold - EXPONENT_TOL, local) {
            (true, false) => Regime::PLt1Mean,
            (true, true) => Regime::PLt1MeanLocal,
            (false, false) => Regime::PLt1Proj,
            (false, true) => Regime::PLt1ProjLocal,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Regime::P1Bmo => "p1_bmo",
            Regime::P1BmoLocal => "p1_bmo_local",
            Regime::PLt1Mean => "p_lt1_mean",
            Regime::PLt1MeanLocal => "p_lt1_mean_local",
            Regime::PLt1Proj => "p_lt1_proj",
            Regime::PLt1ProjLocal => "p_lt1_proj_local",
        }
    }
}

/// Clamp of `b` to `[-k, k]`.
pub fn truncate(b: &GridFunction, k: f64) -> Result<GridFunction> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("truncation level {k} must be positive")));
    }
    Ok(GridFunction::from_raw(*b.spec(), b.values().iter().map(|v| v.clamp(-k, k)).collect()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub levels: Vec<f64>,
    /// `∫ truncate(b, k) h` per level.
    pub pairings: Vec<f64>,
    pub limit: f64,
    /// `|∫ b_k h - ∫ b h|` per level.
    pub gaps: Vec<f64>,
    pub monotone: bool,
    /// Every level `k >= ‖b‖_∞` has gap exactly zero.
    pub exact_beyond_sup: bool,
}

/// Truncated pairings `∫ b_k h` against the untruncated `∫ b h`.
pub fn pairing_limit_check(b: &GridFunction, h: &GridFunction, levels: &[f64]) -> Result<PairingReport> {
    b.check_same(h)?;
    let limit = integrate(&b.mul(h)?, Region::Whole)?;
    let mut pairings = Vec::with_capacity(levels.len());
    for &k in levels {
        pairings.push(integrate(&truncate(b, k)?.mul(h)?, Region::Whole)?);
    }
    let gaps: Vec<f64> = pairings.iter().map(|v| (v - limit).abs()).collect();
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by(|&i, &j| levels[i].total_cmp(&levels[j]));
    let monotone = order.windows(2).all(|w| gaps[w[1]] <= gaps[w[0]]);
    let sup = b.sup_norm();
    let exact_beyond_sup = levels.iter().zip(&gaps).all(|(k, g)| *k < sup || *g == 0.0);
    Ok(PairingReport {
        levels: levels.to_vec(),
        pairings,
        limit,
        gaps,
        monotone,
        exact_beyond_sup,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub gap: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `|∫ (b h) φ - ∫ (b φ) h|` against `1e-12 ‖b‖_∞ ‖h‖_∞ ‖φ‖_∞ |box|`.
pub fn duality_identity_check(b: &GridFunction, h: &GridFunction, testfn: &GridFunction) -> Result<DualityReport> {
    b.check_same(h)?;
    b.check_same(testfn)?;
    let left = integrate(&b.mul(h)?.mul(testfn)?, Region::Whole)?;
    let right = integrate(&b.mul(testfn)?.mul(h)?, Region::Whole)?;
    let gap = (left - right).abs();
    let bound = 1e-12 * b.sup_norm() * h.sup_norm() * testfn.sup_norm() * b.spec().box_measure();
    Ok(DualityReport { gap, bound, ok: gap <= bound })
}

/// What was subtracted from `b` on an atom's ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subtracted {
    Mean(f64),
    Polynomial(PolyProjection),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub index: usize,
    pub lambda: f64,
    pub ball: Ball,
    pub subtracted: Subtracted,
    /// `‖m_j a_j‖_∞ |B_j|^{1/p}`.
    pub rescale_constant: f64,
    /// Moments of `m_j a_j`; empty for local atoms.
    pub moments: Vec<MomentCheck>,
    /// `∫ |(b - m_j) a_j|`.
    pub h1_term_l1: f64,
}

impl LedgerEntry {
    /// Largest `|residual| / ε_mom`, zero when no moments are tracked.
    pub fn max_moment_ratio(&self) -> f64 {
        self.moments
            .iter()
            .map(|m| if m.tolerance > 0.0 { m.residual.abs() / m.tolerance } else { 0.0 })
            .fold(0.0, f64::max)
    }
}

/// How closely `fl(h1 + h2)` reproduces `fl(b h)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub nodes: usize,
    /// Nodes where `fl(h1 + h2) != fl(b h)`.
    pub mismatches: usize,
    pub first_mismatch: Option<usize>,
    pub max_abs_error: f64,
    /// Largest error in units of `ulp(max(|h1|, |h2|, |b h|))`.
    pub max_ulp_error: f64,
}

impl ReconstructionReport {
    pub fn exact(&self) -> bool {
        self.mismatches == 0
    }

    /// The guaranteed bound of the construction: at most one ulp.
    pub fn within_one_ulp(&self) -> bool {
        self.max_ulp_error <= 1.0
    }

    pub fn into_result(self) -> Result<Self> {
        if self.within_one_ulp() {
            Ok(self)
        } else {
            Err(Error::Reconstruction {
                node: self.first_mismatch.unwrap_or(0),
            })
        }
    }
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() {
        return f64::MIN_POSITIVE * f64::EPSILON;
    }
    let next = f64::from_bits(a.to_bits() + 1);
    next - a
}

/// Compares `fl(h1 + h2)` with `product` node by node; `±0` compare equal.
pub fn reconstruction_report(h1: &GridFunction, h2: &GridFunction, product: &GridFunction) -> ReconstructionReport {
    let mut rep = ReconstructionReport {
        nodes: product.len(),
        mismatches: 0,
        first_mismatch: None,
        max_abs_error: 0.0,
        max_ulp_error: 0.0,
    };
    for (i, ((a, b), x)) in h1.values().iter().zip(h2.values()).zip(product.values()).enumerate() {
        let s = a + b;
        if s != *x {
            rep.mismatches += 1;
            rep.first_mismatch.get_or_insert(i);
            let err = (s - x).abs();
            rep.max_abs_error = rep.max_abs_error.max(err);
            let scale = ulp(a.abs().max(b.abs()).max(x.abs()));
            rep.max_ulp_error = rep.max_ulp_error.max(err / scale);
        }
    }
    rep
}

/// `h1`, `h2` and the per-atom ledger.
#[derive(Clone, Debug)]
pub struct ProductSplit {
    pub h1: GridFunction,
    pub h2: GridFunction,
    /// `b · synthesize(decomp)`.
    pub product: GridFunction,
    pub ledger: Vec<LedgerEntry>,
    pub regime: Regime,
    pub p: f64,
    pub gamma: Option<f64>,
}

impl ProductSplit {
    pub fn reconstruction(&self) -> ReconstructionReport {
        reconstruction_report(&self.h1, &self.h2, &self.product)
    }

    /// Largest ledger moment ratio `|residual| / ε_mom` over all atoms.
    pub fn max_moment_ratio(&self) -> f64 {
        self.ledger.iter().map(LedgerEntry::max_moment_ratio).fold(0.0, f64::max)
    }
}

struct Term {
    nodes: Vec<(usize, f64)>,
    entry: LedgerEntry,
}

fn split_core(
    b: &GridFunction,
    decomp: &AtomicDecomposition,
    regime: Regime,
    degree: u32,
    moment_order: u32,
    gamma: Option<f64>,
) -> Result<ProductSplit> {
    let spec = *b.spec();
    if decomp.spec() != &spec {
        return Err(Error::SpecMismatch);
    }
    decomp.validate()?;
    if !regime.is_local() {
        if let Some((i, _)) = decomp.terms.iter().enumerate().find(|(_, (_, a))| a.local) {
            return Err(Error::InvalidAtom {
                index: i,
                reason: "local atom in a non-local split".into(),
            });
        }
    }
    let dim = spec.dim();
    let bv = b.values();
    let p = decomp.p;
    let terms: Vec<Term> = decomp
        .terms
        .par_iter()
        .enumerate()
        .map(|(j, (lambda, a))| -> Result<Term> {
            let ib = Region::Ball(&a.ball).resolve(&spec)?;
            if !ib.is_resolvable() {
                return Err(Error::UnderResolvedBall);
            }
            let av = a.values.values();
            let (subtracted, m_at): (Subtracted, Box<dyn Fn(usize) -> f64 + Sync>) = if regime.uses_projection() {
                let poly = fit(bv, &ib, &a.ball, degree, None)?;
                let pc = poly.clone();
                (
                    Subtracted::Polynomial(poly),
                    Box::new(move |i| pc.eval(&spec.point(i)[..dim])),
                )
            } else {
                let mean = weighted_mean(bv, &ib);
                (Subtracted::Mean(mean), Box::new(move |_| mean))
            };
            let mut nodes = Vec::new();
            let mut ma = vec![0.0; spec.node_count()];
            let mut l1 = 0.0;
            ib.for_each(|i, _| {
                if av[i] != 0.0 {
                    let m = m_at(i);
                    let d = bv[i] - m;
                    nodes.push((i, d * (lambda * av[i])));
                    ma[i] = m * av[i];
                }
            });
            let full = Region::Whole.resolve(&spec)?;
            full.for_each(|i, w| {
                if av[i] != 0.0 && ib.contains_flat(i) {
                    l1 += w * ((bv[i] - m_at(i)) * av[i]).abs();
                }
            });
            let ma = GridFunction::from_raw(spec, ma);
            let sup = ma.sup_norm();
            let moments = if a.local {
                Vec::new()
            } else {
                centered_moments(&ma, &a.ball.center, moment_order)
                    .into_iter()
                    .map(|(e, r)| MomentCheck {
                        alpha: e[..dim].to_vec(),
                        residual: r,
                        tolerance: moment_tolerance(sup, &a.ball, e[0] + e[1]),
                    })
                    .collect()
            };
            Ok(Term {
                nodes,
                entry: LedgerEntry {
                    index: j,
                    lambda: *lambda,
                    ball: a.ball.clone(),
                    subtracted,
                    rescale_constant: sup * a.ball.measure().powf(1.0 / p),
                    moments,
                    h1_term_l1: l1,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut h1 = vec![0.0; spec.node_count()];
    let mut ledger = Vec::with_capacity(terms.len());
    for t in terms {
        for (i, v) in t.nodes {
            h1[i] += v;
        }
        ledger.push(t.entry);
    }
    let h = synthesize(decomp)?;
    let product = b.mul(&h)?;
    let h2: Vec<f64> = product.values().iter().zip(&h1).map(|(x, a)| x - a).collect();
    Ok(ProductSplit {
        h1: GridFunction::from_raw(spec, h1),
        h2: GridFunction::from_raw(spec, h2),
        product,
        ledger,
        regime,
        p,
        gamma,
    })
}

/// Split for `p = 1`: `m_j` is the ball mean of `b`.
pub fn split_bmo(b: &GridFunction, decomp: &AtomicDecomposition, local: bool) -> Result<ProductSplit> {
    if (decomp.p - 1.0).abs() > EXPONENT_TOL {
        return Err(Error::InvalidParameter(format!("p = {} but this split needs p = 1", decomp.p)));
    }
    let regime = if local { Regime::P1BmoLocal } else { Regime::P1Bmo };
    split_core(b, decomp, regime, 0, 0, None)
}

/// Split for `p < 1` and `b ∈ Λ_γ`, `γ = n(1/p - 1)`.
///
/// Uses ball means when `p >= n/(n+1)`, otherwise projections of degree
/// `k = ⌊γ⌋`; the latter needs every non-local atom to have `s >= 2⌊γ⌋`.
pub fn split_lipschitz(
    b: &GridFunction,
    decomp: &AtomicDecomposition,
    order: LipschitzOrder,
    local: bool,
) -> Result<ProductSplit> {
    let n = b.spec().dim();
    let p = decomp.p;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in (0, 1)")));
    }
    let expected = n as f64 * (1.0 / p - 1.0);
    if (order.gamma() - expected).abs() > EXPONENT_TOL * expected.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {} but n(1/p - 1) = {expected}",
            order.gamma()
        )));
    }
    let regime = Regime::for_lipschitz(p, n, local);
    let k = order.k();
    if regime.uses_projection() {
        let required = 2 * k;
        if let Some((i, (_, a))) = decomp.terms.iter().enumerate().find(|(_, (_, a))| !a.local && a.s < required) {
            return Err(Error::InsufficientMomentOrder {
                index: i,
                required,
                found: a.s,
            });
        }
        split_core(b, decomp, regime, k, k, Some(order.gamma()))
    } else {
        split_core(b, decomp, regime, 0, k, Some(order.gamma()))
    }
}

/// Grid description in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub m: usize,
}

/// Norms of a split and the constants they witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub regime: Regime,
    pub p: f64,
    pub gamma: Option<f64>,
    pub norm_h1_l1: f64,
    pub norm_h2_target: f64,
    pub b_scale: f64,
    pub lambda_sum: f64,
    pub lambda_lp: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub grid: GridInfo,
}

impl SplitReport {
    pub const CSV_HEADER: &'static str = "regime,p,gamma,norm_h1_L1,norm_h2_target,b_scale,lambda_sum,C1,C2,n,R,m";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:?},{},{:?},{:?},{:?},{:?},{:?},{:?},{},{:?},{}",
            self.regime.tag(),
            self.p,
            self.gamma.map_or(String::new(), |g| format!("{g:?}")),
            self.norm_h1_l1,
            self.norm_h2_target,
            self.b_scale,
            self.lambda_sum,
            self.c1,
            self.c2,
            self.grid.n,
            self.grid.r,
            self.grid.m
        )
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Measures `‖h1‖₁` and the regime's quasi-norm of `h2` with the default ladder.
pub fn verify_split(split: &ProductSplit, b_scale: f64, decomp: &AtomicDecomposition) -> Result<SplitReport> {
    let spec = split.h1.spec();
    let ladder = if split.regime.is_local() {
        ScaleLadder::truncated(spec)?
    } else {
        ScaleLadder::full(spec)
    };
    verify_split_with_ladder(split, b_scale, decomp, &ladder)
}

pub fn verify_split_with_ladder(
    split: &ProductSplit,
    b_scale: f64,
    decomp: &AtomicDecomposition,
    ladder: &ScaleLadder,
) -> Result<SplitReport> {
    let spec = *split.h1.spec();
    let local = split.regime.is_local();
    let norm_h1_l1 = lp_norm(&split.h1, 1.0, Region::Whole)?;
    let norm_h2_target = if split.regime.is_p1() {
        hardy_phi_star_quasinorm_with_ladder(&split.h2, local, ladder)?
    } else {
        hardy_quasinorm_with_ladder(&split.h2, split.p, local, ladder)?
    };
    let lambda_sum = decomp.lambda_l1();
    let lambda_lp = decomp.lambda_lp();
    let c1 = ratio(norm_h1_l1, b_scale * lambda_sum);
    let c2 = if split.regime.is_p1() {
        ratio(norm_h2_target, b_scale * lambda_sum)
    } else {
        ratio(norm_h2_target, b_scale * lambda_lp)
    };
    Ok(SplitReport {
        regime: split.regime,
        p: split.p,
        gamma: split.gamma,
        norm_h1_l1,
        norm_h2_target,
        b_scale,
        lambda_sum,
        lambda_lp,
        c1,
        c2,
        grid: GridInfo {
            n: spec.dim(),
            r: spec.halfwidth(),
            m: spec.points_per_axis(),
        },
    })
}

/// Largest excess of `M h2` over `Σ_j |λ_j| |m_j| M a_j`, relative to the sup
/// of the bound; mean regimes only. Non-positive up to rounding.
pub fn maximal_domination_check(
    split: &ProductSplit,
    decomp: &AtomicDecomposition,
    ladder: &ScaleLadder,
) -> Result<f64> {
    if split.regime.uses_projection() {
        return Err(Error::InvalidParameter("domination check needs ball means".into()));
    }
    let local = split.regime.is_local();
    let apply = |f: &GridFunction| if local { truncated_maximal_fn(f, ladder) } else { maximal_fn(f, ladder) };
    let mh2 = apply(&split.h2)?;
    let mut bound = vec![0.0; mh2.len()];
    for ((lambda, a), e) in decomp.terms.iter().zip(&split.ledger) {
        let Subtracted::Mean(m) = e.subtracted else { unreachable!() };
        let w = (lambda * m).abs();
        if w == 0.0 {
            continue;
        }
        let ma = apply(&a.values)?;
        for (bd, v) in bound.iter_mut().zip(ma.values()) {
            *bd += w * v;
        }
    }
    let scale = bound.iter().fold(0.0f64, |m, v| m.max(*v));
    let excess = mh2.values().iter().zip(&bound).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
    Ok(if scale > 0.0 { excess / scale } else { excess })
}

/// `‖b ψ‖_{L^Φ(B)} / ∫_B |ψ|` under the hypothesis `∫_B exp|b| <= 2`.
pub fn exp_class_product_bound(b: &GridFunction, psi: &GridFunction, ball: &Ball) -> Result<f64> {
    b.check_same(psi)?;
    if (ball.measure() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("ball measure {} is not 1", ball.measure())));
    }
    let e = integrate(&b.map(|v| v.abs().exp())?, ball)?;
    if e > 2.0 {
        return Err(Error::HypothesisViolated(format!("∫_B exp|b| = {e} > 2")));
    }
    let den = integrate(&psi.abs(), ball)?;
    if den == 0.0 {
        return Err(Error::DegenerateInputs("psi vanishes on the ball".into()));
    }
    Ok(luxembourg_norm(&b.mul(psi)?, &PhiLog, ball)? / den)
}
