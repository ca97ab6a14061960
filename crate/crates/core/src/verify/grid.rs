//! One-dimensional sampling grids and fourth-order finite differences.
//!
//! A [`Grid`] is uniform in a computational coordinate `t`; the physical
//! coordinate is `x = X(t)` for one of a few analytic maps. Derivatives are
//! taken in `t` and converted with the chain rule, so a log map resolves
//! power-law behaviour at a domain endpoint with the same stencils that
//! a uniform map uses in the bulk.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridMap {
    /// x = t
    Uniform,
    /// x = origin + e^t
    Log { origin: f64 },
    /// x = center + scale·sinh(t)
    Sinh { center: f64, scale: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    map: GridMap,
    t_start: f64,
    t_end: f64,
    len: usize,
}

pub const MIN_STENCIL_POINTS: usize = 7;

impl Grid {
    fn build(map: GridMap, t_start: f64, t_end: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::usage(format!("a grid needs at least 2 points, got {len}")));
        }
        if !(t_start.is_finite() && t_end.is_finite()) || t_end <= t_start {
            return Err(Error::usage(format!("invalid grid range [{t_start}, {t_end}]")));
        }
        Ok(Self { map, t_start, t_end, len })
    }

    /// `points` equally spaced nodes from `min` to `max` inclusive.
    pub fn uniform(min: f64, max: f64, points: usize) -> Result<Self> {
        Self::build(GridMap::Uniform, min, max, points)
    }

    /// Nodes geometrically clustered towards `origin`: `x - origin` is
    /// log-uniform between `min - origin` and `max - origin`.
    pub fn log(origin: f64, min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min > origin) {
            return Err(Error::usage(format!("log grid needs min > origin ({min} <= {origin})")));
        }
        Self::build(GridMap::Log { origin }, (min - origin).ln(), (max - origin).ln(), points)
    }

    /// Nodes uniform near `center` with geometric spacing in both tails.
    pub fn sinh(center: f64, scale: f64, min: f64, max: f64, points: usize) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::usage("sinh grid scale must be positive"));
        }
        Self::build(
            GridMap::Sinh { center, scale },
            ((min - center) / scale).asinh(),
            ((max - center) / scale).asinh(),
            points,
        )
    }

    pub fn map(&self) -> GridMap {
        self.map
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Spacing of the computational coordinate.
    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.len - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i + 1 == self.len {
            return self.t_end;
        }
        self.t_start + (self.t_end - self.t_start) * i as f64 / (self.len - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        let t = self.t(i);
        match self.map {
            GridMap::Uniform => t,
            GridMap::Log { origin } => origin + t.exp(),
            GridMap::Sinh { center, scale } => center + scale * t.sinh(),
        }
    }

    /// dx/dt at node `i`.
    pub fn dxdt(&self, i: usize) -> f64 {
        let t = self.t(i);
        match self.map {
            GridMap::Uniform => 1.0,
            GridMap::Log { .. } => t.exp(),
            GridMap::Sinh { scale, .. } => scale * t.cosh(),
        }
    }

    /// d²x/dt² at node `i`.
    pub fn d2xdt2(&self, i: usize) -> f64 {
        let t = self.t(i);
        match self.map {
            GridMap::Uniform => 0.0,
            GridMap::Log { .. } => t.exp(),
            GridMap::Sinh { scale, .. } => scale * t.sinh(),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.x(i)).collect()
    }

    pub fn min(&self) -> f64 {
        self.x(0)
    }

    pub fn max(&self) -> f64 {
        self.x(self.len - 1)
    }
}

/// A real function sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::usage(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        Ok(Self { grid, values })
    }

    pub fn sample(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn try_sample(grid: Grid, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
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

    /// Pointwise `g(x_i, f_i)`.
    pub fn map_with_x(&self, g: impl Fn(f64, f64) -> f64) -> Self {
        let values = self.values.iter().enumerate().map(|(i, &v)| g(self.grid.x(i), v)).collect();
        Self { grid: self.grid, values }
    }

    /// Pointwise `g(x_i, f_i, other_i)`; the grids must agree.
    pub fn zip_with(&self, other: &Self, g: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::usage("grid functions live on different grids"));
        }
        let values =
            self.values.iter().zip(&other.values).enumerate().map(|(i, (&a, &b))| g(self.grid.x(i), a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |_, a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_with_x(|_, v| c * v)
    }

    pub fn to_table(&self) -> crate::table::Table {
        let rows = (0..self.len()).map(|i| vec![self.grid.x(i), self.values[i]]).collect();
        crate::table::Table::new(vec!["x".into(), "value".into()], rows)
    }
}

fn stencil_d1(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    match i {
        0 => (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h),
        1 => (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h),
        _ if i == n - 1 => {
            (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h)
        }
        _ if i == n - 2 => {
            (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h)
        }
        _ => (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h),
    }
}

fn stencil_d2(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    let h2 = 12.0 * h * h;
    match i {
        0 => (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / h2,
        1 => (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / h2,
        _ if i == n - 1 => {
            (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] + 61.0 * f[n - 5]
                - 10.0 * f[n - 6])
                / h2
        }
        _ if i == n - 2 => {
            (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] - 6.0 * f[n - 5] + f[n - 6]) / h2
        }
        _ => (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / h2,
    }
}

/// First or second x-derivative with fourth-order stencils (central in
/// the interior, one-sided at the two nodes nearest each edge).
pub fn derivative(f: &GridFunction, order: u8) -> Result<GridFunction> {
    let grid = f.grid;
    if grid.len() < MIN_STENCIL_POINTS {
        return Err(Error::usage(format!(
            "finite differences need at least {MIN_STENCIL_POINTS} points, got {}",
            grid.len()
        )));
    }
    let h = grid.dt();
    let v = &f.values;
    let values = match order {
        1 => (0..grid.len()).map(|i| stencil_d1(v, i, h) / grid.dxdt(i)).collect(),
        2 => (0..grid.len())
            .map(|i| {
                let xt = grid.dxdt(i);
                match grid.map {
                    GridMap::Uniform => stencil_d2(v, i, h),
                    _ => (stencil_d2(v, i, h) - grid.d2xdt2(i) / xt * stencil_d1(v, i, h)) / (xt * xt),
                }
            })
            .collect(),
        _ => return Err(Error::usage(format!("derivative order must be 1 or 2, got {order}"))),
    };
    Ok(GridFunction { grid, values })
}

/// Number of rows at each edge left out of residual norms.
pub const EXCLUDED_EDGE_ROWS: usize = 3;

/// Discrete L² norm with the x-measure, skipping `exclude` rows per edge.
pub fn l2_norm(f: &GridFunction, exclude: usize) -> f64 {
    let g = f.grid;
    let hi = g.len().saturating_sub(exclude);
    let sum: f64 = (exclude..hi).map(|i| f.values[i] * f.values[i] * g.dxdt(i)).sum();
    (sum * g.dt()).sqrt()
}

/// ‖residual‖₂ / ‖reference‖₂ over interior rows.
pub fn relative_l2(residual: &GridFunction, reference: &GridFunction, exclude: usize) -> f64 {
    l2_norm(residual, exclude) / l2_norm(reference, exclude)
}

/// Largest |f_i| over interior rows.
pub fn sup_norm(f: &GridFunction, exclude: usize) -> f64 {
    let hi = f.len().saturating_sub(exclude);
    f.values[exclude..hi].iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Composite Simpson rule in t (trapezoid on a trailing odd interval).
pub fn grid_integral(f: &GridFunction) -> f64 {
    let g = f.grid;
    let n = g.len();
    let w = |i: usize| f.values[i] * g.dxdt(i);
    let h = g.dt();
    let intervals = n - 1;
    let even = intervals - intervals % 2;
    let mut s = 0.0;
    for k in (0..even).step_by(2) {
        s += h / 3.0 * (w(k) + 4.0 * w(k + 1) + w(k + 2));
    }
    if even < intervals {
        s += 0.5 * h * (w(n - 2) + w(n - 1));
    }
    s
}

/// ⟨f, g⟩ for real grid functions on the same grid.
pub fn grid_inner_product(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    Ok(grid_integral(&f.zip_with(g, |_, a, b| a * b)?))
}

/// Grid points per oscillation of `f` where it oscillates fastest: twice
/// the smallest index gap between consecutive sign changes. `None` with
/// fewer than two sign changes.
pub fn points_per_oscillation(f: &GridFunction) -> Option<f64> {
    let signed: Vec<(usize, f64)> =
        f.values.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (i, v.signum())).collect();
    let changes: Vec<usize> = signed.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| w[1].0).collect();
    changes.windows(2).map(|w| 2.0 * (w[1] - w[0]) as f64).min_by(f64::total_cmp)
}
