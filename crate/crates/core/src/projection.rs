//! Discrete `L²(B)` projection onto polynomials of bounded degree, its sup-norm
//! ratio and the Campanato-type mean deviation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Ball, GridFunction, GridSpec, IndexBox, Region};
use crate::lipschitz::{lambda_gamma_norm, LipschitzOrder};

/// Multi-indices `α` with `|α| <= k`, ordered by total degree.
pub fn multi_indices(dim: usize, k: u32) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for total in 0..=k {
        if dim == 1 {
            out.push([total, 0]);
        } else {
            for a1 in 0..=total {
                out.push([total - a1, a1]);
            }
        }
    }
    out
}

/// A polynomial in the scaled, shifted monomials `((x - c)/r)^α` of a ball,
/// plus a constant offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyProjection {
    pub ball: Ball,
    pub degree: u32,
    pub exponents: Vec<[u32; 2]>,
    pub coefficients: Vec<f64>,
    /// Added to the polynomial; the fit is done on `f - offset`.
    pub offset: f64,
}

impl PolyProjection {
    #[inline]
    fn basis(&self, p: &[f64], out: &mut [f64]) {
        basis_values(&self.ball, &self.exponents, p, out);
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        let mut phi = vec![0.0; self.exponents.len()];
        self.basis(p, &mut phi);
        self.offset + phi.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Values at the nodes of the ball, zero elsewhere.
    pub fn on_ball(&self, spec: &GridSpec) -> Result<GridFunction> {
        let ib = Region::Ball(&self.ball).resolve(spec)?;
        let mut out = vec![0.0; spec.node_count()];
        let dim = spec.dim();
        ib.for_each(|i, _| out[i] = self.eval(&spec.point(i)[..dim]));
        Ok(GridFunction::from_raw(*spec, out))
    }
}

fn basis_values(ball: &Ball, exps: &[[u32; 2]], p: &[f64], out: &mut [f64]) {
    let mut u = [0.0; 2];
    for (a, ua) in u.iter_mut().enumerate().take(ball.center.len()) {
        *ua = (p[a] - ball.center[a]) / ball.radius;
    }
    for (o, e) in out.iter_mut().zip(exps) {
        *o = u[0].powi(e[0] as i32) * u[1].powi(e[1] as i32);
    }
}

/// Weighted least-squares fit of `values` on the nodes of `ib`.
///
/// With `extra`, the node weights are the whole-grid trapezoid weights times
/// `extra`, so a profile vanishing on the ball boundary gets the same weights
/// as in a whole-grid integral. Without it they are the ball's own weights.
/// The fit is done on `values - offset`, where `offset` is the first node value
/// with positive weight, so constants come out exact.
pub(crate) fn fit(
    values: &[f64],
    ib: &IndexBox,
    ball: &Ball,
    k: u32,
    extra: Option<&[f64]>,
) -> Result<PolyProjection> {
    let spec = ib.spec;
    let dim = spec.dim();
    let exps = multi_indices(dim, k);
    let np = exps.len();
    let full = spec.full_box();
    let mut nodes = Vec::new();
    ib.for_each(|i, w| {
        let w = match extra {
            Some(e) => full.weight_of(i) * e[i],
            None => w,
        };
        if w > 0.0 {
            nodes.push((i, w));
        }
    });
    if !ib.is_resolvable() || nodes.len() < 2 * np {
        return Err(Error::UnderResolvedBall);
    }
    let offset = values[nodes[0].0];
    let mut a = DMatrix::<f64>::zeros(nodes.len(), np);
    let mut rhs = DVector::<f64>::zeros(nodes.len());
    let mut phi = vec![0.0; np];
    for (row, &(i, w)) in nodes.iter().enumerate() {
        let sw = w.sqrt();
        basis_values(ball, &exps, &spec.point(i)[..dim], &mut phi);
        for (col, v) in phi.iter().enumerate() {
            a[(row, col)] = sw * v;
        }
        rhs[row] = sw * (values[i] - offset);
    }
    let qr = a.qr();
    let r = qr.r();
    let diag_max = (0..np).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    if (0..np).any(|j| !(r[(j, j)].abs() > 1e-10 * diag_max)) {
        return Err(Error::DegenerateNodeSet);
    }
    let qtb = qr.q().transpose() * rhs;
    let coef = r.solve_upper_triangular(&qtb).ok_or(Error::DegenerateNodeSet)?;
    Ok(PolyProjection {
        ball: ball.clone(),
        degree: k,
        exponents: exps,
        coefficients: coef.iter().copied().collect(),
        offset,
    })
}

/// The quadrature-weighted `L²(B)` projection of `f` onto polynomials of
/// degree `<= k`.
pub fn poly_project(f: &GridFunction, ball: &Ball, k: u32) -> Result<PolyProjection> {
    let ib = Region::Ball(ball).resolve(f.spec())?;
    fit(f.values(), &ib, ball, k, None)
}

/// `‖P^k_B f‖_{L^∞(B)} / ‖f‖_{L^∞(B)}`, sup taken over ball nodes.
pub fn projection_sup_ratio(f: &GridFunction, ball: &Ball, k: u32) -> Result<f64> {
    let ib = Region::Ball(ball).resolve(f.spec())?;
    let v = f.values();
    let mut fsup: f64 = 0.0;
    ib.for_each(|i, _| fsup = fsup.max(v[i].abs()));
    if fsup == 0.0 {
        return Err(Error::DegenerateInputs("f vanishes on the ball".into()));
    }
    let p = fit(v, &ib, ball, k, None)?;
    let dim = f.spec().dim();
    let mut psup: f64 = 0.0;
    ib.for_each(|i, _| psup = psup.max(p.eval(&f.spec().point(i)[..dim]).abs()));
    Ok(psup / fsup)
}

/// `(1/|B|) ∫_B |f - P^k_B f|`, with the quadrature measure of the ball.
pub fn mean_projection_residual(f: &GridFunction, ball: &Ball, k: u32) -> Result<f64> {
    let ib = Region::Ball(ball).resolve(f.spec())?;
    let p = fit(f.values(), &ib, ball, k, None)?;
    let dim = f.spec().dim();
    let v = f.values();
    let mut s = 0.0;
    let mut wsum = 0.0;
    ib.for_each(|i, w| {
        s += w * (v[i] - p.eval(&f.spec().point(i)[..dim])).abs();
        wsum += w;
    });
    Ok(s / wsum)
}

/// Mean projection residual over `‖f‖_{Λ_γ} |B|^{γ/n}`, with `k = ⌈γ⌉`.
pub fn campanato_ratio(f: &GridFunction, ball: &Ball, order: LipschitzOrder) -> Result<f64> {
    let norm = lambda_gamma_norm(f, order).norm;
    campanato_ratio_with_norm(f, ball, order, order.gamma().ceil() as u32, norm)
}

/// [`campanato_ratio`] with explicit degree `k >= γ` and a precomputed norm.
pub fn campanato_ratio_with_norm(
    f: &GridFunction,
    ball: &Ball,
    order: LipschitzOrder,
    k: u32,
    norm: f64,
) -> Result<f64> {
    if (k as f64) < order.gamma() {
        return Err(Error::InvalidParameter(format!("degree {k} below gamma {}", order.gamma())));
    }
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::DegenerateInputs("Lipschitz norm is zero".into()));
    }
    let resid = mean_projection_residual(f, ball, k)?;
    let n = f.spec().dim() as f64;
    Ok(resid / (norm * ball.measure().powf(order.gamma() / n)))
}
