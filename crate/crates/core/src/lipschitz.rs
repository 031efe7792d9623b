//! Iterated differences `D^k_δ` on lattice displacements and the Lipschitz
//! norms `Λ_γ` (inhomogeneous) and `Λ̇_γ` (homogeneous).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

/// Smoothness `γ > 0` together with `k = ⌊γ⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzOrder {
    gamma: f64,
    k: u32,
}

impl LipschitzOrder {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma = {gamma} must be positive")));
        }
        Ok(LipschitzOrder {
            gamma,
            k: gamma.floor() as u32,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `⌊γ⌋`.
    pub fn k(&self) -> u32 {
        self.k
    }
}

/// `D^k_δ f` with a mask of nodes where every `x + sδ` stays in the grid.
#[derive(Clone, Debug)]
pub struct Difference {
    /// Zero where `valid` is false.
    pub values: GridFunction,
    pub valid: Vec<bool>,
}

fn binomial_row(k: u32) -> Vec<f64> {
    let mut row = vec![1.0f64];
    for j in 0..k as usize {
        let next = row[j] * (k as f64 - j as f64) / (j as f64 + 1.0);
        row.push(next.round());
    }
    row
}

/// Signed coefficients `(-1)^{k+s} C(k, s)`, `s = 0..=k`.
pub fn difference_coefficients(k: u32) -> Vec<f64> {
    binomial_row(k)
        .into_iter()
        .enumerate()
        .map(|(s, c)| if (k as usize + s).is_multiple_of(2) { c } else { -c })
        .collect()
}

/// Converts a displacement to whole grid steps per axis.
pub fn lattice_steps(spec: &GridSpec, delta: &[f64]) -> Result<[i64; 2]> {
    if delta.len() != spec.dim() {
        return Err(Error::InvalidParameter(format!(
            "displacement has dimension {}, grid has {}",
            delta.len(),
            spec.dim()
        )));
    }
    let d = spec.spacing();
    let mut steps = [0i64; 2];
    for (axis, &x) in delta.iter().enumerate() {
        let q = x / d;
        let r = q.round();
        if !q.is_finite() || (q - r).abs() > 1e-9 * r.abs().max(1.0) {
            return Err(Error::OffLatticeDisplacement);
        }
        steps[axis] = r as i64;
    }
    Ok(steps)
}

/// `D^k_δ f(x) = Σ_{s=0}^k (-1)^{k+s} C(k,s) f(x + sδ)`.
pub fn difference_op(f: &GridFunction, delta: &[f64], k: u32) -> Result<Difference> {
    let steps = lattice_steps(f.spec(), delta)?;
    Ok(difference_op_steps(f, steps, k))
}

/// [`difference_op`] with the displacement given in grid steps.
pub fn difference_op_steps(f: &GridFunction, steps: [i64; 2], k: u32) -> Difference {
    let spec = *f.spec();
    let coef = difference_coefficients(k);
    let v = f.values();
    let m = spec.points_per_axis() as i64;
    let mut out = vec![0.0; v.len()];
    let mut valid = vec![false; v.len()];
    let kk = k as i64;
    let axis_ok = |i: i64, d: i64| i >= 0 && i < m && i + kk * d >= 0 && i + kk * d < m;
    let flat_step = if spec.dim() == 1 { steps[0] } else { steps[0] + m * steps[1] };
    for flat in 0..v.len() {
        let idx = spec.unflatten(flat);
        let ok = (0..spec.dim()).all(|a| axis_ok(idx[a] as i64, steps[a]));
        if !ok {
            continue;
        }
        let mut s = 0.0;
        for (j, c) in coef.iter().enumerate() {
            s += c * v[(flat as i64 + j as i64 * flat_step) as usize];
        }
        out[flat] = s;
        valid[flat] = true;
    }
    Difference {
        values: GridFunction::from_raw(spec, out),
        valid,
    }
}

/// Lipschitz norm with the displacement and node attaining the sup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub gamma: f64,
    /// `‖f‖_∞ + seminorm`.
    pub norm: f64,
    pub sup_norm: f64,
    pub seminorm: f64,
    pub argmax_delta: Vec<f64>,
    pub argmax_node: Vec<f64>,
    /// Number of lattice displacements scanned.
    pub delta_count: usize,
}

/// Nonzero displacements in a half-space, in grid steps; `D^k_{-δ}` is a
/// shifted copy of `± D^k_δ`, so the other half adds nothing to the sup.
fn half_space_steps(spec: &GridSpec, k: u32) -> Vec<[i64; 2]> {
    let reach = ((spec.points_per_axis() - 1) / k.max(1) as usize) as i64;
    let mut out = Vec::new();
    if spec.dim() == 1 {
        for d in 1..=reach {
            out.push([d, 0]);
        }
    } else {
        for d1 in 0..=reach {
            for d0 in -reach..=reach {
                if d1 > 0 || d0 > 0 {
                    out.push([d0, d1]);
                }
            }
        }
    }
    out
}

/// Sup over lattice `δ` and valid `x` of `|D^{k+1}_δ f(x)| / |δ|^γ`.
fn difference_sup(f: &GridFunction, order: LipschitzOrder) -> (f64, [i64; 2], usize, usize) {
    let spec = *f.spec();
    let k1 = order.k() + 1;
    let coef = difference_coefficients(k1);
    let v = f.values();
    let m = spec.points_per_axis() as i64;
    let d = spec.spacing();
    let displacements = half_space_steps(&spec, k1);
    let count = displacements.len();
    let per_delta: Vec<(f64, usize)> = displacements
        .par_iter()
        .map(|&st| {
            let len = (((st[0] * st[0] + st[1] * st[1]) as f64).sqrt()) * d;
            let scale = 1.0 / len.powf(order.gamma());
            let kk = k1 as i64;
            let range = |dd: i64| -> (i64, i64) {
                if dd >= 0 {
                    (0, m - 1 - kk * dd)
                } else {
                    (-kk * dd, m - 1)
                }
            };
            let mut best = (0.0f64, usize::MAX);
            if spec.dim() == 1 {
                let (lo, hi) = range(st[0]);
                for i in lo..=hi {
                    let mut s = 0.0;
                    for (j, c) in coef.iter().enumerate() {
                        s += c * v[(i + j as i64 * st[0]) as usize];
                    }
                    let r = s.abs() * scale;
                    if r > best.0 {
                        best = (r, i as usize);
                    }
                }
            } else {
                let (lo0, hi0) = range(st[0]);
                let (lo1, hi1) = range(st[1]);
                let step = st[0] + m * st[1];
                for i1 in lo1..=hi1 {
                    for i0 in lo0..=hi0 {
                        let base = i0 + m * i1;
                        let mut s = 0.0;
                        for (j, c) in coef.iter().enumerate() {
                            s += c * v[(base + j as i64 * step) as usize];
                        }
                        let r = s.abs() * scale;
                        if r > best.0 {
                            best = (r, base as usize);
                        }
                    }
                }
            }
            best
        })
        .collect();
    let mut best = (0.0, [0i64; 2], usize::MAX);
    for (st, &(r, node)) in displacements.iter().zip(&per_delta) {
        if r > best.0 {
            best = (r, *st, node);
        }
    }
    (best.0, best.1, best.2, count)
}

fn report(f: &GridFunction, order: LipschitzOrder, with_sup: bool) -> LipschitzReport {
    let spec = f.spec();
    let (semi, st, node, count) = difference_sup(f, order);
    let sup_norm = if with_sup { f.sup_norm() } else { 0.0 };
    let dim = spec.dim();
    let argmax_delta = st[..dim].iter().map(|&s| s as f64 * spec.spacing()).collect();
    let argmax_node = if node == usize::MAX {
        Vec::new()
    } else {
        spec.point(node)[..dim].to_vec()
    };
    LipschitzReport {
        gamma: order.gamma(),
        norm: sup_norm + semi,
        sup_norm,
        seminorm: semi,
        argmax_delta,
        argmax_node,
        delta_count: count,
    }
}

/// `‖f‖_∞ + sup_{δ, x} |D^{k+1}_δ f(x)| / |δ|^γ` over lattice displacements.
pub fn lambda_gamma_norm(f: &GridFunction, order: LipschitzOrder) -> LipschitzReport {
    report(f, order, true)
}

/// The difference term of [`lambda_gamma_norm`] alone.
pub fn homogeneous_seminorm(f: &GridFunction, order: LipschitzOrder) -> LipschitzReport {
    report(f, order, false)
}
