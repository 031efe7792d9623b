//! Test-function generators and random atomic decompositions.
//!
//! Random draws are defined in continuous coordinates (knots, dyadic cells,
//! ball centers), so the same seed gives the same underlying function at
//! every grid resolution.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::atoms::{make_atom, make_local_atom, AtomicDecomposition};
use crate::error::{Error, Result};
use crate::grid::{Ball, GridFunction, GridSpec};
use crate::lipschitz::{lambda_gamma_norm, LipschitzOrder};
use crate::maximal::Mollifier;
use crate::oscillation::bmo_local_norm;

/// Generator stream for draw `index` under `seed`.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Knot spacing of the random-Lipschitz generator.
pub const LIPSCHITZ_KNOT_SPACING: f64 = 0.5;

/// Finest dyadic level (cells of side `2^-level`) of the random-bmo generator.
pub const BMO_FINEST_LEVEL: i32 = 3;

/// Named function families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Zero,
    Constant {
        value: f64,
    },
    /// `1` where the first coordinate is `>= 0`.
    Step,
    /// `log max(|x|, Δ)`.
    RegularizedLog,
    /// Cubic B-spline through a random walk on knots of spacing `0.5`,
    /// rescaled to `‖b‖_{Λ_γ} = target`.
    RandomLipschitz {
        gamma: f64,
        #[serde(default = "one")]
        target: f64,
    },
    /// Dyadic martingale of signed Haar increments from unit cells down to
    /// side `1/8`, rescaled to `‖b‖_bmo = target`.
    RandomBmo {
        #[serde(default = "one")]
        target: f64,
    },
    /// `Σ_{k<=levels} 2^{-kγ} cos(2^k x_0 + θ_k)` with random phases.
    Lacunary {
        gamma: f64,
        levels: u32,
    },
    /// Smooth bump of the given radius at the origin.
    Bump {
        radius: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Generator {
    /// Samples the generator on `spec`; random families use `rng`.
    pub fn sample(&self, spec: &GridSpec, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
        match self {
            Generator::Zero => Ok(GridFunction::zeros(*spec)),
            Generator::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidParameter("constant must be finite".into()));
                }
                Ok(GridFunction::constant(*spec, *value))
            }
            Generator::Step => step(spec),
            Generator::RegularizedLog => regularized_log(spec),
            Generator::RandomLipschitz { gamma, target } => random_lipschitz(spec, *gamma, *target, rng),
            Generator::RandomBmo { target } => random_bmo(spec, *target, rng),
            Generator::Lacunary { gamma, levels } => lacunary(spec, *gamma, *levels, rng),
            Generator::Bump { radius } => {
                let r = *radius;
                if !(r > 0.0) {
                    return Err(Error::InvalidParameter("bump radius must be positive".into()));
                }
                GridFunction::from_fn(*spec, |p| Mollifier::profile(p.iter().map(|x| x * x).sum::<f64>() / (r * r)))
            }
        }
    }
}

pub fn step(spec: &GridSpec) -> Result<GridFunction> {
    GridFunction::from_fn(*spec, |p| if p[0] >= 0.0 { 1.0 } else { 0.0 })
}

pub fn regularized_log(spec: &GridSpec) -> Result<GridFunction> {
    let d = spec.spacing();
    GridFunction::from_fn(*spec, |p| p.iter().map(|x| x * x).sum::<f64>().sqrt().max(d).ln())
}

fn bspline3(u: f64) -> f64 {
    let a = u.abs();
    if a < 1.0 {
        (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0
    } else if a < 2.0 {
        let b = 2.0 - a;
        b * b * b / 6.0
    } else {
        0.0
    }
}

fn rescale(f: GridFunction, norm: f64, target: f64) -> Result<GridFunction> {
    if !(target > 0.0) {
        return Err(Error::InvalidParameter("rescale target must be positive".into()));
    }
    if norm == 0.0 {
        return Ok(f);
    }
    Ok(f.scale(target / norm))
}

/// Cubic B-spline through a random walk, rescaled to `‖b‖_{Λ_γ} = target`.
pub fn random_lipschitz(spec: &GridSpec, gamma: f64, target: f64, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let order = LipschitzOrder::new(gamma)?;
    let h = LIPSCHITZ_KNOT_SPACING;
    let kmax = (spec.halfwidth() / h).ceil() as i64 + 2;
    let nk = (2 * kmax + 1) as usize;
    let f = if spec.dim() == 1 {
        let mut w = Vec::with_capacity(nk);
        let mut acc = 0.0;
        for _ in 0..nk {
            acc += rng.sample::<f64, _>(StandardNormal);
            w.push(acc);
        }
        GridFunction::from_fn(*spec, |p| {
            let u = p[0] / h;
            let k0 = u.floor() as i64;
            (k0 - 1..=k0 + 2)
                .map(|k| w[(k + kmax) as usize] * bspline3(u - k as f64))
                .sum()
        })?
    } else {
        // random-walk sheet: cumulative sums of white noise along both axes
        let mut w = vec![0.0; nk * nk];
        for j in 0..nk {
            for i in 0..nk {
                let z: f64 = rng.sample(StandardNormal);
                let left = if i > 0 { w[j * nk + i - 1] } else { 0.0 };
                let below = if j > 0 { w[(j - 1) * nk + i] } else { 0.0 };
                let diag = if i > 0 && j > 0 { w[(j - 1) * nk + i - 1] } else { 0.0 };
                w[j * nk + i] = z + left + below - diag;
            }
        }
        let scale = 1.0 / (nk as f64).sqrt();
        GridFunction::from_fn(*spec, |p| {
            let (u, v) = (p[0] / h, p[1] / h);
            let (k0, l0) = (u.floor() as i64, v.floor() as i64);
            let mut s = 0.0;
            for l in l0 - 1..=l0 + 2 {
                let bl = bspline3(v - l as f64);
                for k in k0 - 1..=k0 + 2 {
                    s += w[(l + kmax) as usize * nk + (k + kmax) as usize] * bspline3(u - k as f64) * bl;
                }
            }
            s * scale
        })?
    };
    let norm = lambda_gamma_norm(&f, order).norm;
    rescale(f, norm, target)
}

/// Signed Haar martingale on dyadic cells, rescaled to `‖b‖_bmo = target`.
pub fn random_bmo(spec: &GridSpec, target: f64, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let top = spec.halfwidth().ceil() as i64;
    let mut vals = vec![0.0; spec.node_count()];
    let dim = spec.dim();
    for level in 0..=BMO_FINEST_LEVEL {
        let side = (-level as f64).exp2();
        let cells = (2 * top) << level;
        let count = if dim == 1 { cells } else { cells * cells };
        let signs: Vec<(f64, u8)> = (0..count)
            .map(|_| {
                let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
                (s, rng.random_range(0..3u8))
            })
            .collect();
        for (i, v) in vals.iter_mut().enumerate() {
            let p = spec.point(i);
            let mut cell = [0i64; 2];
            let mut half = [0i64; 2];
            for a in 0..dim {
                let u = (p[a] + top as f64) / side;
                let c = (u.floor() as i64).clamp(0, cells - 1);
                cell[a] = c;
                half[a] = if u - c as f64 >= 0.5 { 1 } else { -1 };
            }
            let idx = if dim == 1 { cell[0] } else { cell[0] + cells * cell[1] } as usize;
            let (s, pattern) = signs[idx];
            let haar = if dim == 1 {
                half[0] as f64
            } else {
                match pattern {
                    0 => half[0] as f64,
                    1 => half[1] as f64,
                    _ => (half[0] * half[1]) as f64,
                }
            };
            *v += s * haar;
        }
    }
    let f = GridFunction::new(*spec, vals)?;
    let norm = bmo_local_norm(&f)?.norm;
    rescale(f, norm, target)
}

/// Lacunary cosine series with random phases.
pub fn lacunary(spec: &GridSpec, gamma: f64, levels: u32, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let phases: Vec<f64> = (0..=levels).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    GridFunction::from_fn(*spec, |p| {
        phases
            .iter()
            .enumerate()
            .map(|(k, th)| {
                let f = (k as f64).exp2();
                f.powf(-gamma) * (f * p[0] + th).cos()
            })
            .sum()
    })
}

/// Parameters of a random atomic decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionParams {
    /// Inclusive range of the number of atoms.
    #[serde(default = "default_count")]
    pub count: [usize; 2],
    /// Radii are `2^e` with `e` drawn uniformly from this inclusive range.
    #[serde(default = "default_radius_exponents")]
    pub radius_exponents: [i32; 2],
    /// Moment order of non-local atoms; raised to the regime's minimum.
    #[serde(default)]
    pub moment_order: u32,
    /// Fraction of atoms replaced by local atoms on large balls.
    #[serde(default)]
    pub local_fraction: f64,
}

fn default_count() -> [usize; 2] {
    [2, 6]
}

fn default_radius_exponents() -> [i32; 2] {
    [-3, 0]
}

impl Default for DecompositionParams {
    fn default() -> Self {
        DecompositionParams {
            count: default_count(),
            radius_exponents: default_radius_exponents(),
            moment_order: 0,
            local_fraction: 0.0,
        }
    }
}

/// Atoms with uniform centers (balls kept inside the box), dyadic radii and
/// coefficients uniform in `[-1, 1]`.
pub fn random_decomposition(
    spec: &GridSpec,
    p: f64,
    params: &DecompositionParams,
    rng: &mut ChaCha8Rng,
) -> Result<AtomicDecomposition> {
    let [cmin, cmax] = params.count;
    let [emin, emax] = params.radius_exponents;
    if cmin > cmax || emin > emax || !(0.0..=1.0).contains(&params.local_fraction) {
        return Err(Error::InvalidParameter("bad decomposition parameters".into()));
    }
    let count = rng.random_range(cmin..=cmax);
    let dim = spec.dim();
    let mut d = AtomicDecomposition::new(*spec, p);
    for _ in 0..count {
        let local = params.local_fraction > 0.0 && rng.random::<f64>() < params.local_fraction;
        let r = if local {
            // (2r)^n > 1 for r = 1 or 2
            (rng.random_range(0..=1i32) as f64).exp2()
        } else {
            (rng.random_range(emin..=emax) as f64).exp2()
        };
        let reach = spec.halfwidth() - r;
        if reach <= 0.0 {
            return Err(Error::InvalidParameter(format!("radius {r} does not fit in the box")));
        }
        let center: Vec<f64> = (0..dim).map(|_| rng.random_range(-reach..reach)).collect();
        let lambda = rng.random_range(-1.0..1.0);
        let ball = Ball::new(center, r)?;
        let atom = if local {
            make_local_atom(spec, &ball, p, f64::INFINITY)?
        } else {
            make_atom(spec, &ball, p, params.moment_order)?
        };
        d.push(lambda, atom)?;
    }
    Ok(d)
}
