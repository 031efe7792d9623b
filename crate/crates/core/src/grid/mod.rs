//! Uniform grids on a centered box, sampled functions, and product-trapezoid
//! quadrature over boxes, sup-norm balls and unit lattice cubes.
//!
//! Every region handled here is an axis-aligned box, so a region resolves to a
//! contiguous range of node indices along each axis. Quadrature weights are
//! the trapezoid weights *of that range*: `Δ` at interior nodes and `Δ/2` at
//! the two end nodes of every axis. Closed regions sharing a face that lies on
//! grid nodes therefore split the face weight evenly, and summing the integrals
//! over a tiling reproduces the integral over the whole box.

mod io;

pub use io::DataFormat;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance, in units of the grid spacing, for deciding that a node lies on a
/// region face.
const FACE_TOL: f64 = 1e-9;

/// Uniform grid on `[-R, R]^n` with `m` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridSpec")]
pub struct GridSpec {
    dim: usize,
    halfwidth: f64,
    points_per_axis: usize,
}

#[derive(Deserialize)]
struct RawGridSpec {
    dim: usize,
    halfwidth: f64,
    points_per_axis: usize,
}

impl TryFrom<RawGridSpec> for GridSpec {
    type Error = Error;

    fn try_from(raw: RawGridSpec) -> Result<Self> {
        GridSpec::new(raw.dim, raw.halfwidth, raw.points_per_axis)
    }
}

impl GridSpec {
    pub const MIN_POINTS: usize = 16;

    pub fn new(dim: usize, halfwidth: f64, points_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if !(halfwidth.is_finite() && halfwidth > 0.0) {
            return Err(Error::InvalidGrid(format!("halfwidth {halfwidth} must be positive")));
        }
        if points_per_axis < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis {points_per_axis} below {}",
                Self::MIN_POINTS
            )));
        }
        Ok(GridSpec {
            dim,
            halfwidth,
            points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Node spacing `Δ = 2R / (m - 1)`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / (self.points_per_axis - 1) as f64
    }

    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Lebesgue measure of the box, `(2R)^n`.
    pub fn box_measure(&self) -> f64 {
        (2.0 * self.halfwidth).powi(self.dim as i32)
    }

    /// Coordinate of node `i` along any axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -self.halfwidth + i as f64 * self.spacing()
    }

    /// Per-axis indices of a flat node index. Axis 0 varies fastest.
    #[inline]
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        let m = self.points_per_axis;
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat % m, flat / m]
        }
    }

    #[inline]
    pub fn flatten(&self, idx: [usize; 2]) -> usize {
        if self.dim == 1 {
            idx[0]
        } else {
            idx[0] + self.points_per_axis * idx[1]
        }
    }

    /// Coordinates of a flat node index; unused components are zero.
    #[inline]
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let idx = self.unflatten(flat);
        let mut p = [0.0; 2];
        for (axis, pi) in p.iter_mut().enumerate().take(self.dim) {
            *pi = self.coord(idx[axis]);
        }
        p
    }

    /// Nearest node index along an axis (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = ((x + self.halfwidth) / self.spacing()).round();
        i.clamp(0.0, (self.points_per_axis - 1) as f64) as usize
    }

    /// Inclusive node-index range of `[a, b] ∩ [-R, R]` along one axis.
    pub(crate) fn axis_range(&self, a: f64, b: f64) -> Option<(usize, usize)> {
        let d = self.spacing();
        let lo = ((a + self.halfwidth) / d - FACE_TOL).ceil().max(0.0);
        let hi = ((b + self.halfwidth) / d + FACE_TOL)
            .floor()
            .min((self.points_per_axis - 1) as f64);
        if lo > hi {
            None
        } else {
            Some((lo as usize, hi as usize))
        }
    }

    /// The index box covering the whole grid.
    pub(crate) fn full_box(&self) -> IndexBox {
        let last = self.points_per_axis - 1;
        IndexBox {
            spec: *self,
            lo: [0, 0],
            hi: [last, if self.dim == 2 { last } else { 0 }],
        }
    }

    /// Unit lattice cubes `j + Q` whose intersection with the box has positive
    /// measure, in lexicographic order (axis 0 fastest).
    pub fn cubes(&self) -> Vec<CubeIndex> {
        let lo = (-self.halfwidth - 0.5).floor() as i64 + 1;
        let hi = (self.halfwidth + 0.5).ceil() as i64 - 1;
        let mut out = Vec::new();
        if self.dim == 1 {
            for j in lo..=hi {
                out.push(CubeIndex { j: vec![j] });
            }
        } else {
            for j1 in lo..=hi {
                for j0 in lo..=hi {
                    out.push(CubeIndex { j: vec![j0, j1] });
                }
            }
        }
        out
    }
}

/// Sup-norm ball `{x : max_i |x_i - c_i| <= r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!("ball radius {radius} must be positive")));
        }
        if center.is_empty() || center.len() > 2 || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("ball center must have 1 or 2 finite coordinates".into()));
        }
        Ok(Ball { center, radius })
    }

    /// Analytic measure `(2r)^n`.
    pub fn measure(&self) -> f64 {
        (2.0 * self.radius).powi(self.center.len() as i32)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Same center, radius multiplied by `factor`.
    pub fn dilate(&self, factor: f64) -> Ball {
        Ball {
            center: self.center.clone(),
            radius: self.radius * factor,
        }
    }

    pub fn translate(&self, shift: &[f64]) -> Ball {
        Ball {
            center: self.center.iter().zip(shift).map(|(c, s)| c + s).collect(),
            radius: self.radius,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.center
            .iter()
            .zip(p)
            .all(|(c, x)| (x - c).abs() <= self.radius * (1.0 + 1e-12))
    }
}

/// The unit cube `j + Q`, `Q = [-1/2, 1/2]^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeIndex {
    pub j: Vec<i64>,
}

impl CubeIndex {
    pub fn new(j: Vec<i64>) -> Self {
        CubeIndex { j }
    }

    pub fn as_ball(&self) -> Ball {
        Ball {
            center: self.j.iter().map(|&v| v as f64).collect(),
            radius: 0.5,
        }
    }
}

/// Integration region. `Whole` is the full box.
#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    Whole,
    Ball(&'a Ball),
    Cube(&'a CubeIndex),
}

impl<'a> From<&'a Ball> for Region<'a> {
    fn from(b: &'a Ball) -> Self {
        Region::Ball(b)
    }
}

impl<'a> From<&'a CubeIndex> for Region<'a> {
    fn from(c: &'a CubeIndex) -> Self {
        Region::Cube(c)
    }
}

impl Region<'_> {
    /// Resolves the region to node ranges; fails if no node lies in it.
    pub(crate) fn resolve(&self, spec: &GridSpec) -> Result<IndexBox> {
        match self {
            Region::Whole => Ok(spec.full_box()),
            Region::Ball(b) => resolve_box(spec, &b.center, b.radius),
            Region::Cube(c) => {
                let center: Vec<f64> = c.j.iter().map(|&v| v as f64).collect();
                resolve_box(spec, &center, 0.5)
            }
        }
    }
}

fn resolve_box(spec: &GridSpec, center: &[f64], radius: f64) -> Result<IndexBox> {
    if center.len() != spec.dim() {
        return Err(Error::InvalidParameter(format!(
            "region has dimension {}, grid has {}",
            center.len(),
            spec.dim()
        )));
    }
    let mut lo = [0usize; 2];
    let mut hi = [0usize; 2];
    for axis in 0..spec.dim() {
        let (l, h) = spec
            .axis_range(center[axis] - radius, center[axis] + radius)
            .ok_or(Error::EmptyRegion)?;
        lo[axis] = l;
        hi[axis] = h;
    }
    Ok(IndexBox { spec: *spec, lo, hi })
}

/// Inclusive per-axis node ranges with the trapezoid weights of the range.
#[derive(Clone, Copy, Debug)]
pub(crate) struct IndexBox {
    pub spec: GridSpec,
    pub lo: [usize; 2],
    pub hi: [usize; 2],
}

impl IndexBox {
    #[inline]
    pub fn axis_weight(&self, axis: usize, i: usize) -> f64 {
        if self.lo[axis] == self.hi[axis] {
            0.0
        } else if i == self.lo[axis] || i == self.hi[axis] {
            0.5 * self.spec.spacing()
        } else {
            self.spec.spacing()
        }
    }

    /// Weight of a flat node index under this box's rule (zero outside).
    pub fn weight_of(&self, flat: usize) -> f64 {
        if !self.contains_flat(flat) {
            return 0.0;
        }
        let idx = self.spec.unflatten(flat);
        (0..self.spec.dim()).map(|a| self.axis_weight(a, idx[a])).product()
    }

    pub fn axis_len(&self, axis: usize) -> usize {
        self.hi[axis] - self.lo[axis] + 1
    }

    pub fn node_count(&self) -> usize {
        (0..self.spec.dim()).map(|a| self.axis_len(a)).product()
    }

    /// At least two nodes along every axis, hence positive measure.
    pub fn is_resolvable(&self) -> bool {
        (0..self.spec.dim()).all(|a| self.axis_len(a) >= 2)
    }

    /// Visits `(flat index, weight)` in a fixed order (axis 0 fastest).
    #[inline]
    pub fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        if self.spec.dim() == 1 {
            for i in self.lo[0]..=self.hi[0] {
                f(i, self.axis_weight(0, i));
            }
        } else {
            let m = self.spec.points_per_axis();
            for i1 in self.lo[1]..=self.hi[1] {
                let w1 = self.axis_weight(1, i1);
                for i0 in self.lo[0]..=self.hi[0] {
                    f(i0 + m * i1, self.axis_weight(0, i0) * w1);
                }
            }
        }
    }

    pub fn measure(&self) -> f64 {
        let mut s = 0.0;
        self.for_each(|_, w| s += w);
        s
    }

    pub fn contains_flat(&self, flat: usize) -> bool {
        let idx = self.spec.unflatten(flat);
        (0..self.spec.dim()).all(|a| idx[a] >= self.lo[a] && idx[a] <= self.hi[a])
    }
}

/// A real function sampled at every node of a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.node_count() {
            return Err(Error::LengthMismatch {
                expected: spec.node_count(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(GridFunction { spec, values })
    }

    /// Internal constructor for values produced from finite inputs.
    pub(crate) fn from_raw(spec: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), spec.node_count());
        GridFunction { spec, values }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self::constant(spec, 0.0)
    }

    pub fn constant(spec: GridSpec, c: f64) -> Self {
        GridFunction {
            spec,
            values: vec![c; spec.node_count()],
        }
    }

    /// Samples `f` at every node; `f` receives a coordinate slice of length `n`.
    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let dim = spec.dim();
        let values = (0..spec.node_count())
            .map(|i| {
                let p = spec.point(i);
                f(&p[..dim])
            })
            .collect();
        Self::new(spec, values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(self.spec, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        self.check_same(other)?;
        GridFunction::new(
            self.spec,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn scale(&self, lambda: f64) -> GridFunction {
        GridFunction::from_raw(self.spec, self.values.iter().map(|v| lambda * v).collect())
    }

    pub fn abs(&self) -> GridFunction {
        GridFunction::from_raw(self.spec, self.values.iter().map(|v| v.abs()).collect())
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn check_same(&self, other: &GridFunction) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Max of `|f|` over the nodes of a region.
    pub fn sup_norm_over<'a>(&self, region: impl Into<Region<'a>>) -> Result<f64> {
        let ib = region.into().resolve(&self.spec)?;
        let mut m: f64 = 0.0;
        ib.for_each(|i, _| m = m.max(self.values[i].abs()));
        Ok(m)
    }

    /// Zero outside the nodes of `region`.
    pub fn restrict<'a>(&self, region: impl Into<Region<'a>>) -> Result<GridFunction> {
        let ib = region.into().resolve(&self.spec)?;
        let mut out = vec![0.0; self.values.len()];
        ib.for_each(|i, _| out[i] = self.values[i]);
        Ok(GridFunction::from_raw(self.spec, out))
    }

    /// Per-axis inclusive index range of the nonzero values, `None` if `f ≡ 0`.
    pub(crate) fn support_box(&self) -> Option<([usize; 2], [usize; 2])> {
        let mut lo = [usize::MAX; 2];
        let mut hi = [0usize; 2];
        let mut any = false;
        for (i, v) in self.values.iter().enumerate() {
            if *v != 0.0 {
                any = true;
                let idx = self.spec.unflatten(i);
                for a in 0..2 {
                    lo[a] = lo[a].min(idx[a]);
                    hi[a] = hi[a].max(idx[a]);
                }
            }
        }
        any.then_some((lo, hi))
    }
}

/// Product-trapezoid integral of `f` over `region`.
pub fn integrate<'a>(f: &GridFunction, region: impl Into<Region<'a>>) -> Result<f64> {
    let ib = region.into().resolve(f.spec())?;
    let v = f.values();
    let mut s = 0.0;
    ib.for_each(|i, w| s += w * v[i]);
    Ok(s)
}

/// Quadrature measure of a region: the sum of its node weights.
pub fn measure<'a>(spec: &GridSpec, region: impl Into<Region<'a>>) -> Result<f64> {
    Ok(region.into().resolve(spec)?.measure())
}

/// Mean of `f` over a ball, normalized by the quadrature measure of the ball.
///
/// Accumulates deviations from the first in-ball value, so the mean of a
/// constant is that constant exactly.
pub fn ball_mean(f: &GridFunction, ball: &Ball) -> Result<f64> {
    let ib = Region::Ball(ball).resolve(f.spec())?;
    if !ib.is_resolvable() {
        return Err(Error::UnderResolvedBall);
    }
    Ok(weighted_mean(f.values(), &ib))
}

pub(crate) fn weighted_mean(v: &[f64], ib: &IndexBox) -> f64 {
    let mut reference = None;
    let mut s = 0.0;
    let mut wsum = 0.0;
    ib.for_each(|i, w| {
        let r = *reference.get_or_insert(v[i]);
        s += w * (v[i] - r);
        wsum += w;
    });
    reference.unwrap_or(0.0) + s / wsum
}

/// `(∫_region |f|^p)^{1/p}`; a quasi-norm for `p < 1`.
pub fn lp_norm<'a>(f: &GridFunction, p: f64, region: impl Into<Region<'a>>) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be positive and finite")));
    }
    let ib = region.into().resolve(f.spec())?;
    let v = f.values();
    let mut s = 0.0;
    if p == 1.0 {
        ib.for_each(|i, w| s += w * v[i].abs());
        Ok(s)
    } else {
        ib.for_each(|i, w| s += w * v[i].abs().powf(p));
        Ok(s.powf(1.0 / p))
    }
}
