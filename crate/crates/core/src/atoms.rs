//! `(p, q, s)`-atoms: validation, construction with vanishing discrete
//! moments, local (large-ball) atoms and finite atomic decompositions.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{integrate, lp_norm, Ball, DataFormat, GridFunction, GridSpec, Region};
use crate::maximal::Mollifier;
use crate::projection::{fit, multi_indices};

/// Scale factor in the moment tolerance `ε_mom = c · ‖a‖_∞ · |B| · r^{|α|}`.
pub const MOMENT_RTOL: f64 = 1e-10;

/// Relative slack allowed on the size condition.
pub const SIZE_RTOL: f64 = 1e-9;

/// A sampled function tagged with its ball and `(p, q, s)` metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub values: GridFunction,
    pub ball: Ball,
    pub p: f64,
    /// `f64::INFINITY` for bounded atoms.
    pub q: f64,
    pub s: u32,
    /// Large-ball atom without moment conditions.
    pub local: bool,
}

impl Atom {
    /// Size bound `|B|^{1/q - 1/p}` with the nominal measure `(2r)^n`.
    pub fn size_bound(&self) -> f64 {
        self.ball.measure().powf(1.0 / self.q - 1.0 / self.p)
    }

    /// Moment order that must vanish; `None` for local atoms.
    pub fn required_moments(&self) -> Option<u32> {
        (!self.local).then_some(self.s)
    }
}

/// `ε_mom` for a moment of total degree `degree`.
pub fn moment_tolerance(sup: f64, ball: &Ball, degree: u32) -> f64 {
    MOMENT_RTOL * sup * ball.measure() * ball.radius.powi(degree as i32)
}

/// `∫ f(x) (x - c)^α dx` over the whole grid for every `|α| <= k`.
pub fn centered_moments(f: &GridFunction, center: &[f64], k: u32) -> Vec<([u32; 2], f64)> {
    let spec = f.spec();
    let dim = spec.dim();
    let v = f.values();
    let exps = multi_indices(dim, k);
    let ib = Region::Whole.resolve(spec).expect("whole grid");
    let mut acc = vec![0.0; exps.len()];
    ib.for_each(|i, w| {
        if v[i] == 0.0 {
            return;
        }
        let p = spec.point(i);
        let d0 = p[0] - center[0];
        let d1 = if dim == 2 { p[1] - center[1] } else { 0.0 };
        for (a, e) in acc.iter_mut().zip(&exps) {
            *a += w * v[i] * d0.powi(e[0] as i32) * d1.powi(e[1] as i32);
        }
    });
    exps.into_iter().zip(acc).collect()
}

/// One moment with its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub alpha: Vec<u32>,
    pub residual: f64,
    pub tolerance: f64,
}

/// Per-condition outcome of [`validate_atom`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomValidation {
    /// Largest `|a|` at nodes outside the ball.
    pub support_leakage: f64,
    pub support_ok: bool,
    /// `‖a‖_{L^q(B)} / |B|^{1/q - 1/p}`.
    pub size_ratio: f64,
    pub size_ok: bool,
    /// Empty for local atoms.
    pub moments: Vec<MomentCheck>,
    /// Largest `residual / tolerance`; `None` for local atoms.
    pub max_moment_ratio: Option<f64>,
    pub moment_ok: Option<bool>,
    /// For local atoms, whether `|B| > 1`.
    pub large_ball_ok: Option<bool>,
    pub passed: bool,
}

/// Checks support, size and (for non-local atoms) moment conditions.
pub fn validate_atom(a: &Atom) -> AtomValidation {
    let spec = a.values.spec();
    let v = a.values.values();
    let sup = a.values.sup_norm();
    let inside = Region::Ball(&a.ball).resolve(spec).ok();
    let leakage = v
        .iter()
        .enumerate()
        .filter(|(i, _)| !inside.as_ref().is_some_and(|ib| ib.contains_flat(*i)))
        .fold(0.0f64, |m, (_, x)| m.max(x.abs()));
    let support_ok = leakage <= 1e-14 * sup.max(f64::MIN_POSITIVE);

    let size = if a.q.is_infinite() {
        a.values.sup_norm_over(&a.ball).unwrap_or(0.0)
    } else {
        lp_norm(&a.values, a.q, &a.ball).unwrap_or(0.0)
    };
    let size_ratio = size / a.size_bound();
    let size_ok = size_ratio <= 1.0 + SIZE_RTOL;

    let (moments, max_moment_ratio, moment_ok, large_ball_ok) = if a.local {
        (Vec::new(), None, None, Some(a.ball.measure() > 1.0))
    } else {
        let checks: Vec<MomentCheck> = centered_moments(&a.values, &a.ball.center, a.s)
            .into_iter()
            .map(|(e, r)| MomentCheck {
                alpha: e[..spec.dim()].to_vec(),
                residual: r,
                tolerance: moment_tolerance(sup, &a.ball, e[0] + e[1]),
            })
            .collect();
        let worst = checks
            .iter()
            .map(|c| if c.tolerance > 0.0 { c.residual.abs() / c.tolerance } else { 0.0 })
            .fold(0.0, f64::max);
        (checks, Some(worst), Some(worst <= 1.0), None)
    };
    let passed = support_ok && size_ok && moment_ok.unwrap_or(true) && large_ball_ok.unwrap_or(true);
    AtomValidation {
        support_leakage: leakage,
        support_ok,
        size_ratio,
        size_ok,
        moments,
        max_moment_ratio,
        moment_ok,
        large_ball_ok,
        passed,
    }
}

/// Tensor bump `Π exp(-1/(1 - u_i²))`, `u = (x - c)/r`, sampled on the grid.
pub fn ball_bump(spec: &GridSpec, ball: &Ball) -> GridFunction {
    let dim = spec.dim();
    let vals = (0..spec.node_count())
        .map(|i| {
            let p = spec.point(i);
            (0..dim)
                .map(|a| {
                    let u = (p[a] - ball.center[a]) / ball.radius;
                    Mollifier::profile(u * u)
                })
                .product()
        })
        .collect();
    GridFunction::from_raw(*spec, vals)
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("atom exponent p = {p} not in (0, 1]")));
    }
    Ok(())
}

fn check_ball_dim(spec: &GridSpec, ball: &Ball) -> Result<()> {
    if ball.dim() != spec.dim() {
        return Err(Error::InvalidParameter(format!(
            "ball has dimension {}, grid has {}",
            ball.dim(),
            spec.dim()
        )));
    }
    Ok(())
}

/// Smooth `(p, ∞, s)`-atom on `ball` built from the bump profile.
pub fn make_atom(spec: &GridSpec, ball: &Ball, p: f64, s: u32) -> Result<Atom> {
    let psi = ball_bump(spec, ball);
    make_atom_with_profile(spec, ball, p, s, &psi)
}

/// `(p, ∞, s)`-atom `ψ (g - P g)`, where `ψ` is the bump of `ball` and `P g`
/// is the projection of `g` onto polynomials of degree `<= s` in `L²(ψ dx)`.
///
/// The weighted normal equations make every moment of order `<= s` vanish up
/// to the solver residual. The result is rescaled so `‖a‖_∞ = |B|^{-1/p}`.
pub fn make_atom_with_profile(spec: &GridSpec, ball: &Ball, p: f64, s: u32, g: &GridFunction) -> Result<Atom> {
    check_exponent(p)?;
    check_ball_dim(spec, ball)?;
    if g.spec() != spec {
        return Err(Error::SpecMismatch);
    }
    let ib = Region::Ball(ball).resolve(spec)?;
    if !ib.is_resolvable() || ib.node_count() < (s as usize + 2).pow(spec.dim() as u32) {
        return Err(Error::UnderResolvedBall);
    }
    let psi = ball_bump(spec, ball);
    let poly = fit(g.values(), &ib, ball, s, Some(psi.values()))?;
    let dim = spec.dim();
    let mut vals = vec![0.0; spec.node_count()];
    ib.for_each(|i, _| {
        let w = psi.values()[i];
        if w > 0.0 {
            vals[i] = w * (g.values()[i] - poly.eval(&spec.point(i)[..dim]));
        }
    });
    let raw = GridFunction::new(*spec, vals)?;
    let sup = raw.sup_norm();
    if sup == 0.0 {
        return Err(Error::DegenerateInputs("profile is a polynomial on the ball".into()));
    }
    let target = ball.measure().powf(-1.0 / p);
    Ok(Atom {
        values: raw.scale(target / sup),
        ball: ball.clone(),
        p,
        q: f64::INFINITY,
        s,
        local: false,
    })
}

/// Bump on a ball with `|B| > 1`, scaled so `‖a‖_q = |B|^{1/q - 1/p}`.
pub fn make_local_atom(spec: &GridSpec, ball: &Ball, p: f64, q: f64) -> Result<Atom> {
    check_exponent(p)?;
    check_ball_dim(spec, ball)?;
    if !(q > p) {
        return Err(Error::InvalidParameter(format!("q = {q} must exceed p = {p}")));
    }
    if ball.measure() <= 1.0 {
        return Err(Error::NotLargeBall);
    }
    let ib = Region::Ball(ball).resolve(spec)?;
    if !ib.is_resolvable() {
        return Err(Error::UnderResolvedBall);
    }
    let psi = ball_bump(spec, ball);
    let size = if q.is_infinite() {
        psi.sup_norm()
    } else {
        lp_norm(&psi, q, ball)?
    };
    if size == 0.0 {
        return Err(Error::UnderResolvedBall);
    }
    let target = ball.measure().powf(1.0 / q - 1.0 / p);
    Ok(Atom {
        values: psi.scale(target / size),
        ball: ball.clone(),
        p,
        q,
        s: 0,
        local: true,
    })
}

/// `|B|^{-1/p}` times `+1` on the left half of `ball` and `-1` on the right
/// half (zero at the center node), for `n = 1`.
pub fn haar_atom(spec: &GridSpec, ball: &Ball, p: f64) -> Result<Atom> {
    check_exponent(p)?;
    if spec.dim() != 1 || ball.dim() != 1 {
        return Err(Error::InvalidParameter("Haar atoms are one-dimensional".into()));
    }
    let ib = Region::Ball(ball).resolve(spec)?;
    if ib.axis_len(0) < 3 {
        return Err(Error::UnderResolvedBall);
    }
    let h = ball.measure().powf(-1.0 / p);
    let c = ball.center[0];
    let tol = 1e-9 * spec.spacing();
    let mut vals = vec![0.0; spec.node_count()];
    ib.for_each(|i, _| {
        let x = spec.coord(i);
        vals[i] = if x < c - tol {
            h
        } else if x > c + tol {
            -h
        } else {
            0.0
        };
    });
    Ok(Atom {
        values: GridFunction::new(*spec, vals)?,
        ball: ball.clone(),
        p,
        q: f64::INFINITY,
        s: 0,
        local: false,
    })
}

/// Finite sum `Σ λ_j a_j` with a common grid and exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicDecomposition {
    spec: GridSpec,
    pub p: f64,
    pub terms: Vec<(f64, Atom)>,
}

impl AtomicDecomposition {
    pub fn new(spec: GridSpec, p: f64) -> Self {
        AtomicDecomposition {
            spec,
            p,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(spec: GridSpec, p: f64, terms: Vec<(f64, Atom)>) -> Result<Self> {
        let mut d = Self::new(spec, p);
        for (l, a) in terms {
            d.push(l, a)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, lambda: f64, atom: Atom) -> Result<()> {
        if atom.values.spec() != &self.spec {
            return Err(Error::SpecMismatch);
        }
        if atom.p != self.p {
            return Err(Error::InvalidParameter(format!(
                "atom exponent {} differs from decomposition exponent {}",
                atom.p, self.p
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter("coefficient must be finite".into()));
        }
        self.terms.push((lambda, atom));
        Ok(())
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |λ_j|`.
    pub fn lambda_l1(&self) -> f64 {
        self.terms.iter().map(|(l, _)| l.abs()).sum()
    }

    /// `(Σ |λ_j|^p)^{1/p}`.
    pub fn lambda_lp(&self) -> f64 {
        self.terms.iter().map(|(l, _)| l.abs().powf(self.p)).sum::<f64>().powf(1.0 / self.p)
    }

    /// Same atoms with every coefficient multiplied by `alpha`.
    pub fn scale_coefficients(&self, alpha: f64) -> Self {
        AtomicDecomposition {
            spec: self.spec,
            p: self.p,
            terms: self.terms.iter().map(|(l, a)| (alpha * l, a.clone())).collect(),
        }
    }

    /// Validates every atom; the first failure is returned with its index.
    pub fn validate(&self) -> Result<Vec<AtomValidation>> {
        let reports: Vec<AtomValidation> = self.terms.par_iter().map(|(_, a)| validate_atom(a)).collect();
        if let Some((i, r)) = reports.iter().enumerate().find(|(_, r)| !r.passed) {
            return Err(Error::InvalidAtom {
                index: i,
                reason: failure_reason(r),
            });
        }
        Ok(reports)
    }
}

fn failure_reason(r: &AtomValidation) -> String {
    let mut parts = Vec::new();
    if !r.support_ok {
        parts.push(format!("support leakage {:e}", r.support_leakage));
    }
    if !r.size_ok {
        parts.push(format!("size ratio {}", r.size_ratio));
    }
    if r.moment_ok == Some(false) {
        parts.push(format!("moment residual ratio {:e}", r.max_moment_ratio.unwrap_or(f64::NAN)));
    }
    if r.large_ball_ok == Some(false) {
        parts.push("local atom on a ball with |B| <= 1".into());
    }
    parts.join(", ")
}

/// Pointwise `Σ λ_j a_j`, summed in term order.
pub fn synthesize(decomp: &AtomicDecomposition) -> Result<GridFunction> {
    let spec = *decomp.spec();
    let mut acc = vec![0.0; spec.node_count()];
    for (lambda, a) in &decomp.terms {
        if a.values.spec() != &spec {
            return Err(Error::SpecMismatch);
        }
        for (h, v) in acc.iter_mut().zip(a.values.values()) {
            *h += lambda * v;
        }
    }
    Ok(GridFunction::from_raw(spec, acc))
}

/// Haar-type decomposition of a one-dimensional signal on `[-L, L]`.
///
/// For every dyadic interval `I` of length `2L / 2^j`, `j < levels`, the
/// coefficient is `⟨f, h_I⟩` with `h_I = |I|^{-1/2}(1_{left} - 1_{right})`,
/// computed by quadrature, and the term is `λ_I a_I` with `a_I` the Haar atom
/// of `I` and `λ_I = ⟨f, h_I⟩ |I|^{1/p - 1/2}`. Zero coefficients are dropped.
pub fn haar_decomposition(f: &GridFunction, p: f64, half_length: f64, levels: u32) -> Result<AtomicDecomposition> {
    let spec = *f.spec();
    let mut d = AtomicDecomposition::new(spec, p);
    for j in 0..levels {
        let count = 1usize << j;
        let len = 2.0 * half_length / count as f64;
        for i in 0..count {
            let ball = Ball::new(vec![-half_length + (i as f64 + 0.5) * len], len / 2.0)?;
            let a = haar_atom(&spec, &ball, p)?;
            let h_norm = len.powf(-0.5) / a.values.sup_norm();
            let coef = integrate(&f.mul(&a.values)?, Region::Whole)? * h_norm;
            if coef != 0.0 {
                d.push(coef * len.powf(1.0 / p - 0.5), a)?;
            }
        }
    }
    Ok(d)
}

mod q_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if q.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*q)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Q {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Q::deserialize(d)? {
            Q::Num(v) => Ok(v),
            Q::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => Ok(f64::INFINITY),
            Q::Text(t) => Err(serde::de::Error::custom(format!("bad exponent q: {t}"))),
        }
    }
}

/// One term of a decomposition file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub lambda: f64,
    pub ball: Ball,
    pub p: f64,
    #[serde(with = "q_serde")]
    pub q: f64,
    pub s: u32,
    pub local: bool,
    /// Header of the atom's grid function, relative to the decomposition file.
    pub values_ref: String,
}

/// Decomposition file: `{p, grid, terms: [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub p: f64,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    pub terms: Vec<TermRecord>,
}

impl AtomicDecomposition {
    /// Writes `path` and one grid-function file pair per atom beside it.
    pub fn save(&self, path: impl AsRef<Path>, format: DataFormat) -> Result<()> {
        let path = path.as_ref();
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("decomposition");
        let mut terms = Vec::with_capacity(self.terms.len());
        for (j, (lambda, a)) in self.terms.iter().enumerate() {
            let name = format!("{stem}_atom{j:04}.json");
            a.values.save(dir.join(&name), format)?;
            terms.push(TermRecord {
                lambda: *lambda,
                ball: a.ball.clone(),
                p: a.p,
                q: a.q,
                s: a.s,
                local: a.local,
                values_ref: name,
            });
        }
        let rec = DecompositionRecord {
            p: self.p,
            grid: Some(self.spec),
            terms,
        };
        fs::write(path, serde_json::to_vec_pretty(&rec)?)?;
        Ok(())
    }

    /// Reads a file written by [`AtomicDecomposition::save`]. Atoms are not
    /// validated here.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let rec: DecompositionRecord = serde_json::from_slice(&fs::read(path)?)?;
        let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_else(|| ".".into());
        let mut atoms = Vec::with_capacity(rec.terms.len());
        for t in &rec.terms {
            let values = GridFunction::load(dir.join(&t.values_ref))?;
            atoms.push((
                t.lambda,
                Atom {
                    values,
                    ball: t.ball.clone(),
                    p: t.p,
                    q: t.q,
                    s: t.s,
                    local: t.local,
                },
            ));
        }
        let spec = match (rec.grid, atoms.first()) {
            (Some(g), _) => g,
            (None, Some((_, a))) => *a.values.spec(),
            (None, None) => return Err(Error::Parse("empty decomposition without a grid".into())),
        };
        let mut d = AtomicDecomposition::new(spec, rec.p);
        for (l, a) in atoms {
            d.push(l, a)?;
        }
        Ok(d)
    }
}
