//! Functionals on function space and their evaluation on step functions.
//!
//! A [`StepFunction`] is a point of the n-th section: `n` values on an equal
//! partition of `[0, 1]`. A [`Functional`] maps such functions (and, in the
//! limit, arbitrary square-integrable functions) to reals. On step functions
//! every integral in the definitions collapses to a finite sum over cells
//! with weight `1/n` per axis, which [`evaluate`] computes exactly.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::rng::CompensatedSum;
use crate::Result;

/// Shared callable on a slice of point values.
pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Shared callable on `(values, positions)` slices of equal length.
pub type CellFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// A function constant on each of `n` equal cells of `[0, 1]`.
///
/// Cells are half-open: `x(a) = values[i]` for `a` in `[i/n, (i+1)/n)`, and
/// the right endpoint `a = 1` belongs to the last cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("step function needs at least one cell"));
        }
        Ok(StepFunction { values })
    }

    pub fn constant(cells: usize, value: f64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::invalid("step function needs at least one cell"));
        }
        Ok(StepFunction {
            values: vec![value; cells],
        })
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at a position in `[0, 1]` under the half-open cell convention.
    pub fn value_at(&self, position: f64) -> f64 {
        let n = self.values.len();
        let raw = (position * n as f64).floor();
        let index = if raw < 0.0 { 0 } else { (raw as usize).min(n - 1) };
        self.values[index]
    }

    /// Midpoint of cell `i` on an `n`-cell partition.
    pub fn cell_midpoint(cells: usize, index: usize) -> f64 {
        (index as f64 + 0.5) / cells as f64
    }

    /// `self + factor * other`, cell by cell.
    pub fn add_scaled(&self, other: &StepFunction, factor: f64) -> Result<StepFunction> {
        if self.cells() != other.cells() {
            return Err(Error::PartitionMismatch {
                left: self.cells(),
                right: other.cells(),
            });
        }
        Ok(StepFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    /// `(1/n) sum x_i^2`, the squared functional radius of the step function.
    pub fn mean_square(&self) -> f64 {
        let mut sum = CompensatedSum::new();
        for &v in &self.values {
            sum.add(v * v);
        }
        sum.value() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// The same function on a partition refined by an integer factor.
    pub fn refine(&self, factor: usize) -> StepFunction {
        assert!(factor >= 1);
        let mut values = Vec::with_capacity(self.values.len() * factor);
        for &v in &self.values {
            for _ in 0..factor {
                values.push(v);
            }
        }
        StepFunction { values }
    }
}

/// A functional of one of the three forms the crate works with.
#[derive(Clone)]
pub enum Functional {
    /// `U(x) = g(x(a_1), ..., x(a_p))` for fixed points `a_i` in `[0, 1]`.
    PointCylinder { map: PointFn, points: Vec<f64> },
    /// `U(x) = \int ... \int f[x(a_1), ..., x(a_p), a_1, ..., a_p] da` over
    /// `[0, 1]^p`.
    IntegralCylinder { arity: usize, integrand: CellFn },
    /// `U(x) = sum_j \int ... \int K_j(t_1, ..., t_j) x(t_1) ... x(t_j) dt`,
    /// with `kernels[j - 1]` taking `j` arguments.
    VolterraSeries { kernels: Vec<PointFn> },
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::PointCylinder { points, .. } => {
                write!(f, "PointCylinder(p = {})", points.len())
            }
            Functional::IntegralCylinder { arity, .. } => {
                write!(f, "IntegralCylinder(p = {arity})")
            }
            Functional::VolterraSeries { kernels } => {
                write!(f, "VolterraSeries(orders 1..={})", kernels.len())
            }
        }
    }
}

impl Functional {
    pub fn point_cylinder<G>(points: Vec<f64>, map: G) -> Result<Self>
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if points.is_empty() {
            return Err(Error::invalid("point cylinder needs at least one point"));
        }
        if points.iter().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::invalid("evaluation points must lie in [0, 1]"));
        }
        Ok(Functional::PointCylinder {
            map: Arc::new(map),
            points,
        })
    }

    pub fn integral_cylinder<G>(arity: usize, integrand: G) -> Result<Self>
    where
        G: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        if arity == 0 {
            return Err(Error::invalid("integral cylinder needs arity >= 1"));
        }
        Ok(Functional::IntegralCylinder {
            arity,
            integrand: Arc::new(integrand),
        })
    }

    /// Builds a Volterra series from kernels of increasing order; the j-th
    /// entry must accept a slice of length j.
    pub fn volterra_series(kernels: Vec<PointFn>) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::invalid("volterra series needs at least one kernel"));
        }
        Ok(Functional::VolterraSeries { kernels })
    }

    /// Convenience: a series with a single first-order kernel.
    pub fn volterra_linear<K>(kernel: K) -> Result<Self>
    where
        K: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Functional::volterra_series(vec![Arc::new(move |t: &[f64]| kernel(t[0])) as PointFn])
    }

    /// Number of arguments of the underlying map: points for a cylinder,
    /// highest kernel order for a series.
    pub fn arity(&self) -> usize {
        match self {
            Functional::PointCylinder { points, .. } => points.len(),
            Functional::IntegralCylinder { arity, .. } => *arity,
            Functional::VolterraSeries { kernels } => kernels.len(),
        }
    }
}

fn check_finite(context: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::non_finite(context, value))
    }
}

/// Sums `term` over the grid `{0, ..., cells-1}^arity` with compensated
/// accumulation, stopping at the first error.
fn sum_over_grid<F>(cells: usize, arity: usize, mut term: F) -> Result<f64>
where
    F: FnMut(&[usize]) -> Result<f64>,
{
    let mut index = vec![0usize; arity];
    let mut sum = CompensatedSum::new();
    loop {
        sum.add(term(&index)?);
        let mut axis = arity;
        loop {
            if axis == 0 {
                return Ok(sum.value());
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < cells {
                break;
            }
            index[axis] = 0;
        }
    }
}

/// Evaluates a functional on a step function.
///
/// Point cylinders are exact lookups; for the integral forms the cell
/// integrals collapse to finite sums with weight `1/n` per axis, positions
/// taken at cell midpoints. Non-finite outputs of the user callable are
/// reported as errors.
pub fn evaluate(functional: &Functional, x: &StepFunction) -> Result<f64> {
    let n = x.cells();
    match functional {
        Functional::PointCylinder { map, points } => {
            let args: Vec<f64> = points.iter().map(|&a| x.value_at(a)).collect();
            check_finite("point cylinder map", map(&args))
        }
        Functional::IntegralCylinder { arity, integrand } => {
            let p = *arity;
            let weight = (n as f64).powi(-(p as i32));
            let mut values = vec![0.0; p];
            let mut positions = vec![0.0; p];
            let total = sum_over_grid(n, p, |index| {
                for (slot, &cell) in index.iter().enumerate() {
                    values[slot] = x.values()[cell];
                    positions[slot] = StepFunction::cell_midpoint(n, cell);
                }
                check_finite("integral cylinder integrand", integrand(&values, &positions))
            })?;
            Ok(total * weight)
        }
        Functional::VolterraSeries { kernels } => {
            let mut total = CompensatedSum::new();
            for (order_minus_one, kernel) in kernels.iter().enumerate() {
                let order = order_minus_one + 1;
                let weight = (n as f64).powi(-(order as i32));
                let mut positions = vec![0.0; order];
                let term = sum_over_grid(n, order, |index| {
                    let mut product = 1.0;
                    for (slot, &cell) in index.iter().enumerate() {
                        positions[slot] = StepFunction::cell_midpoint(n, cell);
                        product *= x.values()[cell];
                    }
                    let k = check_finite("volterra kernel", kernel(&positions))?;
                    Ok(k * product)
                })?;
                total.add(term * weight);
            }
            Ok(total.value())
        }
    }
}

/// Step size heuristic for [`gateaux_differential`].
pub fn default_differential_step(x: &StepFunction) -> f64 {
    1e-4 * (1.0 + x.max_abs())
}

/// Directional derivative of a functional at `x` in direction `h`:
/// a central difference at `epsilon` and `epsilon / 2` combined by one
/// Richardson extrapolation step.
pub fn gateaux_differential(
    functional: &Functional,
    x: &StepFunction,
    direction: &StepFunction,
    epsilon: f64,
) -> Result<f64> {
    if x.cells() != direction.cells() {
        return Err(Error::PartitionMismatch {
            left: x.cells(),
            right: direction.cells(),
        });
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!(
            "differential step must be positive and finite, got {epsilon}"
        )));
    }
    let central = |eps: f64| -> Result<f64> {
        let forward = evaluate(functional, &x.add_scaled(direction, eps)?)?;
        let backward = evaluate(functional, &x.add_scaled(direction, -eps)?)?;
        Ok((forward - backward) / (2.0 * eps))
    };
    let coarse = central(epsilon)?;
    let fine = central(epsilon / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
