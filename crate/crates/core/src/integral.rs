//! Mean values of functionals over n-th sections of the functional sphere,
//! their Gaussian limits as the section size grows, convergence studies
//! along a sequence of sections, and the cube-field integral over step
//! functions with cell values in `[0, 1]`.

use crate::error::Error;
use crate::functional::{evaluate, Functional, StepFunction};
use crate::quadrature::{integrate_panels, QuadratureRule};
use crate::rng::{monte_carlo_mean, CompensatedSum, SeedPath};
use crate::sphere::{angular_panels, sample_sphere, wallis, MarginalConvention, SphereSection};
use crate::stats::{loglog_fit, LogLogFit};
use crate::Result;

/// Default Gauss-Legendre order for bounded integrals.
pub const DEFAULT_LEGENDRE_ORDER: usize = 64;
/// Default Gauss-Hermite order for Gaussian integrals.
pub const DEFAULT_HERMITE_ORDER: usize = 40;
/// Largest arity the tensorized Gaussian-limit quadrature accepts.
pub const MAX_TENSOR_ARITY: usize = 4;
/// Cap on total tensor-quadrature evaluations before the caller is asked to
/// reduce orders or switch to Monte Carlo.
const MAX_TENSOR_POINTS: f64 = 2.0e8;

/// How a section mean was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanMethod {
    Quadrature,
    MonteCarlo,
}

/// A mean value with its sampling uncertainty. Deterministic quadrature
/// carries a zero standard error by convention.
#[derive(Debug, Clone, Copy)]
pub struct MeanEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Section size (partition cells) the mean refers to.
    pub n: usize,
    pub method: MeanMethod,
}

impl MeanEstimate {
    fn quadrature(value: f64, n: usize) -> Self {
        MeanEstimate {
            value,
            std_error: 0.0,
            n,
            method: MeanMethod::Quadrature,
        }
    }

    fn monte_carlo(value: f64, std_error: f64, n: usize) -> Self {
        MeanEstimate {
            value,
            std_error,
            n,
            method: MeanMethod::MonteCarlo,
        }
    }
}

/// Section-mean backend selection for [`convergence_report`].
#[derive(Debug, Clone, Copy)]
pub enum SectionMethod {
    Quadrature { order: usize },
    MonteCarlo { samples: u64 },
}

fn require_single_point_cylinder(functional: &Functional) -> Result<&crate::functional::PointFn> {
    match functional {
        Functional::PointCylinder { map, points } if points.len() == 1 => Ok(map),
        Functional::PointCylinder { points, .. } => Err(Error::invalid(format!(
            "quadrature section mean needs a single-point cylinder, got {} points; use the Monte Carlo section mean",
            points.len()
        ))),
        _ => Err(Error::invalid(
            "quadrature section mean needs a point cylinder; use the Monte Carlo section mean",
        )),
    }
}

fn check_finite(context: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::non_finite(context, value))
    }
}

/// Mean of a single-point cylinder over a section, by deterministic
/// quadrature of the one-dimensional angular integral.
///
/// With `c = R sqrt(n)` the mean is
/// `\int g(c sin t) cos^m(t) dt / (2 W_m)` over `[-pi/2, pi/2]`, where
/// `m = n` under [`MarginalConvention::PaperSlice`] and `m = n - 2` under
/// [`MarginalConvention::SurfaceMeasure`] (which therefore needs `n >= 3`).
/// The rule is composite Gauss-Legendre of the given order with panels
/// scaled to the `1/sqrt(n)` concentration of the integrand.
pub fn section_mean_quadrature(
    functional: &Functional,
    section: &SphereSection,
    convention: MarginalConvention,
    order: usize,
) -> Result<MeanEstimate> {
    let map = require_single_point_cylinder(functional)?;
    if order < 2 {
        return Err(Error::invalid("quadrature order must be >= 2"));
    }
    let n = section.cells();
    let power = match convention {
        MarginalConvention::PaperSlice => n as i32,
        MarginalConvention::SurfaceMeasure => {
            if n < 3 {
                return Err(Error::SurfaceMarginalDimension { n });
            }
            n as i32 - 2
        }
    };
    let normalizer = match convention {
        MarginalConvention::PaperSlice => 2.0 * wallis(n),
        MarginalConvention::SurfaceMeasure => 2.0 * wallis(n - 2),
    };
    let c = section.coordinate_radius();
    let mut failure: Option<Error> = None;
    let integral = integrate_panels(
        |theta| {
            let value = map(&[c * theta.sin()]);
            if !value.is_finite() && failure.is_none() {
                failure = Some(Error::non_finite("section mean integrand", value));
            }
            value * theta.cos().powi(power)
        },
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        order,
        angular_panels(n),
    );
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(MeanEstimate::quadrature(integral / normalizer, n))
}

/// Mean of an arbitrary functional over a section by uniform sampling of
/// the coordinate sphere (surface measure).
///
/// Draws are split into fixed chunks with sub-seeds derived from
/// `(seed, chunk index)`, so the result is reproducible and independent of
/// thread scheduling. Evaluation failures carry the offending sample index.
pub fn section_mean_monte_carlo(
    functional: &Functional,
    section: &SphereSection,
    samples: u64,
    seed: &SeedPath,
) -> Result<MeanEstimate> {
    if samples < 2 {
        return Err(Error::invalid("need at least two Monte Carlo samples"));
    }
    let n = section.cells();
    let radius = section.coordinate_radius();
    let outcome = monte_carlo_mean(seed, samples, |stream, _| {
        let point = sample_sphere(n, radius, stream);
        let step = StepFunction::new(point)?;
        evaluate(functional, &step)
    })?;
    Ok(MeanEstimate::monte_carlo(outcome.mean, outcome.std_error, n))
}

/// Gauss-Hermite and Gauss-Legendre orders that keep the tensor grids of
/// [`gaussian_limit_mean`] affordable at each arity.
pub fn default_limit_orders(arity: usize) -> (usize, usize) {
    match arity {
        0 | 1 => (DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER),
        2 => (24, 24),
        3 => (12, 10),
        _ => (8, 6),
    }
}

/// The limiting mean value as the section size grows: the functional's
/// arguments become independent centered Gaussians with standard deviation
/// `R`, position arguments stay integrated over `[0, 1]`.
///
/// Point cylinders with several evaluation points require the points to be
/// distinct (coincident points keep a correlation that the limit formula
/// drops; use the Monte Carlo section mean instead). Arity is capped at
/// [`MAX_TENSOR_ARITY`]. A Volterra series is handled kernel by kernel in
/// its integral-cylinder form.
pub fn gaussian_limit_mean(
    functional: &Functional,
    radius: f64,
    hermite_order: usize,
    legendre_order: usize,
) -> Result<f64> {
    if hermite_order < 2 || legendre_order < 2 {
        return Err(Error::invalid("quadrature orders must be >= 2"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid(format!(
            "radius must be positive and finite, got {radius}"
        )));
    }
    match functional {
        Functional::PointCylinder { map, points } => {
            let p = points.len();
            if p == 1 {
                let rule = QuadratureRule::gauss_hermite(hermite_order);
                let scale = std::f64::consts::SQRT_2 * radius;
                let mut failure = None;
                let sum = rule.integrate(|t| {
                    let v = map(&[scale * t]);
                    if !v.is_finite() && failure.is_none() {
                        failure = Some(Error::non_finite("limit integrand", v));
                    }
                    v
                });
                if let Some(err) = failure {
                    return Err(err);
                }
                return Ok(sum / std::f64::consts::PI.sqrt());
            }
            for i in 0..p {
                for j in (i + 1)..p {
                    if points[i] == points[j] {
                        return Err(Error::CoincidentPoints);
                    }
                }
            }
            if p > MAX_TENSOR_ARITY {
                return Err(Error::TensorBudget {
                    arity: p,
                    max: MAX_TENSOR_ARITY,
                });
            }
            let gauss = QuadratureRule::gauss_hermite(hermite_order);
            let scale = std::f64::consts::SQRT_2 * radius;
            let mut args = vec![0.0; p];
            let normalizer = std::f64::consts::PI.powf(p as f64 / 2.0);
            let total = try_sum_tensor(&vec![hermite_order; p], |index| {
                let mut weight = 1.0;
                for (slot, &i) in index.iter().enumerate() {
                    args[slot] = scale * gauss.nodes[i];
                    weight *= gauss.weights[i];
                }
                let v = check_finite("limit integrand", map(&args))?;
                Ok(weight * v)
            })?;
            Ok(total / normalizer)
        }
        Functional::IntegralCylinder { arity, integrand } => {
            let integrand = integrand.clone();
            gaussian_limit_integral_form(*arity, radius, hermite_order, legendre_order, move |v, a| {
                integrand(v, a)
            })
        }
        Functional::VolterraSeries { kernels } => {
            let mut total = CompensatedSum::new();
            for (order_minus_one, kernel) in kernels.iter().enumerate() {
                let order = order_minus_one + 1;
                let kernel = kernel.clone();
                let term = gaussian_limit_integral_form(
                    order,
                    radius,
                    hermite_order,
                    legendre_order,
                    move |values, positions| kernel(positions) * values.iter().product::<f64>(),
                )?;
                total.add(term);
            }
            Ok(total.value())
        }
    }
}

/// Tensorized evaluation of the limiting mean for the integral-cylinder
/// form: outer position integrals over `[0, 1]^p` by Gauss-Legendre, inner
/// Gaussian integrals by Gauss-Hermite.
fn gaussian_limit_integral_form<F>(
    arity: usize,
    radius: f64,
    hermite_order: usize,
    legendre_order: usize,
    integrand: F,
) -> Result<f64>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    if arity > MAX_TENSOR_ARITY {
        return Err(Error::TensorBudget {
            arity,
            max: MAX_TENSOR_ARITY,
        });
    }
    let points = ((hermite_order * legendre_order) as f64).powi(arity as i32);
    if points > MAX_TENSOR_POINTS {
        return Err(Error::invalid(format!(
            "tensor quadrature would need {points:.1e} evaluations; reduce orders or use the Monte Carlo section mean"
        )));
    }
    let position_rule = QuadratureRule::gauss_legendre(legendre_order).mapped_to(0.0, 1.0);
    let gauss = QuadratureRule::gauss_hermite(hermite_order);
    let scale = std::f64::consts::SQRT_2 * radius;
    let normalizer = std::f64::consts::PI.powf(arity as f64 / 2.0);
    let mut positions = vec![0.0; arity];
    let mut values = vec![0.0; arity];
    let total = try_sum_tensor(&vec![legendre_order; arity], |outer| {
        let mut outer_weight = 1.0;
        for (slot, &i) in outer.iter().enumerate() {
            positions[slot] = position_rule.nodes[i];
            outer_weight *= position_rule.weights[i];
        }
        let inner = try_sum_tensor(&vec![hermite_order; arity], |index| {
            let mut weight = 1.0;
            for (slot, &i) in index.iter().enumerate() {
                values[slot] = scale * gauss.nodes[i];
                weight *= gauss.weights[i];
            }
            let v = check_finite("limit integrand", integrand(&values, &positions))?;
            Ok(weight * v)
        })?;
        Ok(outer_weight * inner)
    })?;
    Ok(total / normalizer)
}

/// Compensated fallible sum over a tensor index box.
fn try_sum_tensor<F>(dims: &[usize], mut term: F) -> Result<f64>
where
    F: FnMut(&[usize]) -> Result<f64>,
{
    if dims.iter().any(|&d| d == 0) {
        return Ok(0.0);
    }
    let mut index = vec![0usize; dims.len()];
    let mut sum = CompensatedSum::new();
    loop {
        sum.add(term(&index)?);
        let mut axis = dims.len();
        loop {
            if axis == 0 {
                return Ok(sum.value());
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < dims[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
}

/// One row of a convergence study: the section mean at size `n` and its
/// distance to the limiting value.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub n: usize,
    pub mean: f64,
    pub abs_error: f64,
    pub std_error: f64,
}

/// Section means along an increasing sequence of sizes, the independently
/// computed limit, and a fitted decay exponent of the error when the data
/// supports one.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub limit: f64,
    /// Least-squares fit of `log |error|` against `log n`; `None` when the
    /// study is degenerate or has fewer than three rows.
    pub fit: Option<LogLogFit>,
    /// Set when some error sits at the numerical noise floor (the mean is
    /// exact at finite `n`), which makes an exponent fit meaningless.
    pub degenerate: bool,
}

/// Runs section means along `sizes` and compares them with the Gaussian
/// limit. `sizes` must be strictly increasing. Monte Carlo rows draw their
/// sub-seeds from `(seed, n)`.
pub fn convergence_report(
    functional: &Functional,
    radius: f64,
    sizes: &[usize],
    convention: MarginalConvention,
    method: SectionMethod,
    seed: &SeedPath,
) -> Result<ConvergenceReport> {
    if sizes.is_empty() {
        return Err(Error::invalid("convergence study needs at least one size"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("section sizes must be strictly increasing"));
    }
    let (hermite, legendre) = default_limit_orders(functional.arity());
    let limit = gaussian_limit_mean(functional, radius, hermite, legendre)?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let section = SphereSection::new(n, radius)?;
        let estimate = match method {
            SectionMethod::Quadrature { order } => {
                section_mean_quadrature(functional, &section, convention, order)?
            }
            SectionMethod::MonteCarlo { samples } => {
                section_mean_monte_carlo(functional, &section, samples, &seed.child(n as u64))?
            }
        };
        rows.push(ConvergenceRow {
            n,
            mean: estimate.value,
            abs_error: (estimate.value - limit).abs(),
            std_error: estimate.std_error,
        });
    }
    let floor = 1e-12 * (1.0 + limit.abs());
    let degenerate = rows.iter().any(|row| row.abs_error <= floor);
    let fit = if degenerate || rows.len() < 3 {
        None
    } else {
        Some(loglog_fit(
            &rows
                .iter()
                .map(|row| (row.n as f64, row.abs_error))
                .collect::<Vec<_>>(),
        )?)
    };
    Ok(ConvergenceReport {
        rows,
        limit,
        fit,
        degenerate,
    })
}

/// Gauss-Legendre order per axis for the small exact cube integrals in
/// [`field_integral`].
const FIELD_QUADRATURE_ORDER: usize = 24;

/// Mean of a functional over step functions whose cell values are
/// independent uniforms on `[0, 1]` (the field integral `I_n`).
///
/// Point cylinders on at most four cells are integrated exactly by tensor
/// Gauss-Legendre quadrature; everything else is chunked Monte Carlo.
pub fn field_integral(
    functional: &Functional,
    cells: usize,
    samples: u64,
    seed: &SeedPath,
) -> Result<MeanEstimate> {
    if cells == 0 {
        return Err(Error::invalid("field integral needs at least one cell"));
    }
    let quadrature_applies = matches!(functional, Functional::PointCylinder { .. }) && cells <= 4;
    if quadrature_applies {
        let rule = QuadratureRule::gauss_legendre(FIELD_QUADRATURE_ORDER).mapped_to(0.0, 1.0);
        let mut values = vec![0.0; cells];
        let total = try_sum_tensor(&vec![FIELD_QUADRATURE_ORDER; cells], |index| {
            let mut weight = 1.0;
            for (slot, &i) in index.iter().enumerate() {
                values[slot] = rule.nodes[i];
                weight *= rule.weights[i];
            }
            let step = StepFunction::new(values.clone())?;
            Ok(weight * evaluate(functional, &step)?)
        })?;
        return Ok(MeanEstimate::quadrature(total, cells));
    }
    if samples < 2 {
        return Err(Error::invalid("need at least two Monte Carlo samples"));
    }
    let outcome = monte_carlo_mean(seed, samples, |stream, _| {
        let values: Vec<f64> = (0..cells).map(|_| stream.uniform()).collect();
        let step = StepFunction::new(values)?;
        evaluate(functional, &step)
    })?;
    Ok(MeanEstimate::monte_carlo(
        outcome.mean,
        outcome.std_error,
        cells,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v2() -> Functional {
        Functional::point_cylinder(vec![0.5], |v| v[0] * v[0]).unwrap()
    }

    fn v4() -> Functional {
        Functional::point_cylinder(vec![0.5], |v| v[0].powi(4)).unwrap()
    }

    /// Fourth moment of one coordinate under uniform surface measure,
    /// from the Wallis-ratio identities.
    fn surface_fourth_moment(n: usize, radius: f64) -> f64 {
        3.0 * n as f64 * radius.powi(4) / (n as f64 + 2.0)
    }

    /// Fourth moment under the paper-slice weighting.
    fn slice_fourth_moment(n: usize, radius: f64) -> f64 {
        3.0 * (n as f64).powi(2) * radius.powi(4) / ((n as f64 + 2.0) * (n as f64 + 4.0))
    }

    #[test]
    fn odd_integrands_average_to_zero() {
        let g = Functional::point_cylinder(vec![0.3], |v| v[0]).unwrap();
        for &(n, radius) in &[(5usize, 1.0_f64), (40, 2.5)] {
            let section = SphereSection::new(n, radius).unwrap();
            for convention in [MarginalConvention::PaperSlice, MarginalConvention::SurfaceMeasure]
            {
                let mean =
                    section_mean_quadrature(&g, &section, convention, DEFAULT_LEGENDRE_ORDER)
                        .unwrap();
                assert!(mean.value.abs() < 1e-12, "{convention:?}: {}", mean.value);
                assert_eq!(mean.std_error, 0.0);
            }
        }
    }

    #[test]
    fn second_moment_closed_forms() {
        for &(n, radius) in &[(3usize, 1.0_f64), (10, 0.5), (100, 2.0), (1000, 1.0)] {
            let section = SphereSection::new(n, radius).unwrap();
            let surface = section_mean_quadrature(
                &v2(),
                &section,
                MarginalConvention::SurfaceMeasure,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            assert!(
                (surface.value - radius * radius).abs() < 1e-9,
                "surface n={n}: {}",
                surface.value
            );
            let slice = section_mean_quadrature(
                &v2(),
                &section,
                MarginalConvention::PaperSlice,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            let expected = n as f64 * radius * radius / (n as f64 + 2.0);
            assert!(
                (slice.value - expected).abs() < 1e-9,
                "slice n={n}: {} vs {expected}",
                slice.value
            );
        }
    }

    #[test]
    fn fourth_moment_closed_forms() {
        for &n in &[5usize, 30, 200] {
            let section = SphereSection::new(n, 1.0).unwrap();
            let surface = section_mean_quadrature(
                &v4(),
                &section,
                MarginalConvention::SurfaceMeasure,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            assert!(
                (surface.value - surface_fourth_moment(n, 1.0)).abs() < 1e-9,
                "surface n={n}: {}",
                surface.value
            );
            let slice = section_mean_quadrature(
                &v4(),
                &section,
                MarginalConvention::PaperSlice,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            assert!(
                (slice.value - slice_fourth_moment(n, 1.0)).abs() < 1e-9,
                "slice n={n}: {}",
                slice.value
            );
        }
    }

    #[test]
    fn constant_functionals_have_vanishing_spread() {
        let u = Functional::integral_cylinder(1, |v, _| v[0] * v[0]).unwrap();
        let section = SphereSection::new(100, 1.5).unwrap();
        let seed = SeedPath::new(17);
        let mean = section_mean_monte_carlo(&u, &section, 500, &seed).unwrap();
        assert_abs_diff_eq!(mean.value, 1.5 * 1.5, epsilon = 1e-10);
        assert!(mean.std_error <= 1e-12, "std_error {}", mean.std_error);
    }

    #[test]
    fn monte_carlo_agrees_with_surface_quadrature() {
        let seed = SeedPath::new(29);
        let corpus: Vec<Functional> = vec![
            v2(),
            v4(),
            Functional::point_cylinder(vec![0.3], |v| v[0].cos()).unwrap(),
        ];
        let section = SphereSection::new(25, 1.0).unwrap();
        for (tag, functional) in corpus.iter().enumerate() {
            let quad = section_mean_quadrature(
                functional,
                &section,
                MarginalConvention::SurfaceMeasure,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            let mc =
                section_mean_monte_carlo(functional, &section, 100_000, &seed.child(tag as u64))
                    .unwrap();
            assert!(
                (mc.value - quad.value).abs() <= 3.0 * mc.std_error,
                "functional {tag}: {} vs {} (se {})",
                mc.value,
                quad.value,
                mc.std_error
            );
        }
    }

    #[test]
    fn centered_coordinate_at_n_fifty() {
        let g = Functional::point_cylinder(vec![0.3], |v| v[0]).unwrap();
        let section = SphereSection::new(50, 1.0).unwrap();
        let mean = section_mean_monte_carlo(&g, &section, 100_000, &SeedPath::new(31)).unwrap();
        assert!(mean.value.abs() <= 3.0 * mean.std_error);
    }

    #[test]
    fn fourth_moment_monte_carlo_matches_surface_value() {
        let n = 200;
        let section = SphereSection::new(n, 1.0).unwrap();
        let mc = section_mean_monte_carlo(&v4(), &section, 100_000, &SeedPath::new(37)).unwrap();
        let expected = surface_fourth_moment(n, 1.0);
        assert!(
            (mc.value - expected).abs() <= 3.0 * mc.std_error,
            "{} vs {expected} (se {})",
            mc.value,
            mc.std_error
        );
    }

    #[test]
    fn section_means_are_scale_equivariant() {
        let radius = 2.5_f64;
        let plain = Functional::point_cylinder(vec![0.5], |v| v[0].cos()).unwrap();
        let scaled =
            Functional::point_cylinder(vec![0.5], move |v| (radius * v[0]).cos()).unwrap();
        for convention in [MarginalConvention::PaperSlice, MarginalConvention::SurfaceMeasure] {
            let with_radius = section_mean_quadrature(
                &plain,
                &SphereSection::new(15, radius).unwrap(),
                convention,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            let unit = section_mean_quadrature(
                &scaled,
                &SphereSection::new(15, 1.0).unwrap(),
                convention,
                DEFAULT_LEGENDRE_ORDER,
            )
            .unwrap();
            assert_abs_diff_eq!(with_radius.value, unit.value, epsilon = 1e-10);
        }
    }

    #[test]
    fn gaussian_limit_of_the_moment_corpus() {
        for &radius in &[1.0_f64, 1.7] {
            let second =
                gaussian_limit_mean(&v2(), radius, DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER)
                    .unwrap();
            assert_abs_diff_eq!(second, radius * radius, epsilon = 1e-10);
            let fourth =
                gaussian_limit_mean(&v4(), radius, DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER)
                    .unwrap();
            assert_abs_diff_eq!(fourth, 3.0 * radius.powi(4), epsilon = 1e-9);
        }
        let cosine = Functional::point_cylinder(vec![0.5], |v| v[0].cos()).unwrap();
        let value =
            gaussian_limit_mean(&cosine, 1.0, DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER)
                .unwrap();
        assert_abs_diff_eq!(value, (-0.5_f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn limit_of_a_product_over_distinct_points_vanishes() {
        let u = Functional::point_cylinder(vec![0.2, 0.8], |v| v[0] * v[1]).unwrap();
        let value =
            gaussian_limit_mean(&u, 1.0, DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER).unwrap();
        assert!(value.abs() <= 1e-10, "value {value}");
    }

    #[test]
    fn coincident_points_are_rejected_by_the_limit() {
        let u = Functional::point_cylinder(vec![0.4, 0.4], |v| v[0] * v[1]).unwrap();
        let err = gaussian_limit_mean(&u, 1.0, DEFAULT_HERMITE_ORDER, DEFAULT_LEGENDRE_ORDER)
            .unwrap_err();
        assert!(matches!(err, Error::CoincidentPoints));
    }

    #[test]
    fn limit_of_integral_cylinders_integrates_positions() {
        // f(v, a) = v^2 independent of a.
        let plain = Functional::integral_cylinder(1, |v, _| v[0] * v[0]).unwrap();
        let value = gaussian_limit_mean(&plain, 1.3, 40, 32).unwrap();
        assert_abs_diff_eq!(value, 1.3 * 1.3, epsilon = 1e-10);
        // f(v, a) = v^2 * a halves the value through the position integral.
        let weighted = Functional::integral_cylinder(1, |v, a| v[0] * v[0] * a[0]).unwrap();
        let value = gaussian_limit_mean(&weighted, 1.3, 40, 32).unwrap();
        assert_abs_diff_eq!(value, 0.5 * 1.3 * 1.3, epsilon = 1e-10);
    }

    #[test]
    fn volterra_limits_vanish() {
        use crate::functional::PointFn;
        use std::sync::Arc;
        let series = Functional::volterra_series(vec![
            Arc::new(|t: &[f64]| 1.0 + t[0]) as PointFn,
            Arc::new(|t: &[f64]| (t[0] + t[1]).cos()) as PointFn,
        ])
        .unwrap();
        let value = gaussian_limit_mean(&series, 1.0, 16, 16).unwrap();
        assert!(value.abs() <= 1e-12, "value {value}");
    }

    #[test]
    fn oversized_arity_hits_the_budget() {
        let u = Functional::integral_cylinder(5, |v, _| v.iter().sum()).unwrap();
        let err = gaussian_limit_mean(&u, 1.0, 8, 8).unwrap_err();
        assert!(matches!(err, Error::TensorBudget { arity: 5, max: 4 }));
    }

    #[test]
    fn exact_convergence_is_flagged_degenerate() {
        let report = convergence_report(
            &v2(),
            1.0,
            &[10, 30, 100],
            MarginalConvention::SurfaceMeasure,
            SectionMethod::Quadrature {
                order: DEFAULT_LEGENDRE_ORDER,
            },
            &SeedPath::new(1),
        )
        .unwrap();
        assert!(report.degenerate);
        assert!(report.fit.is_none());
        for row in &report.rows {
            assert!(row.abs_error <= 1e-9);
        }
    }

    #[test]
    fn slice_second_moment_decays_like_one_over_n() {
        let report = convergence_report(
            &v2(),
            1.0,
            &[10, 30, 100, 300, 1000],
            MarginalConvention::PaperSlice,
            SectionMethod::Quadrature {
                order: DEFAULT_LEGENDRE_ORDER,
            },
            &SeedPath::new(1),
        )
        .unwrap();
        assert!(!report.degenerate);
        for row in &report.rows {
            let expected = 2.0 / (row.n as f64 + 2.0);
            assert_abs_diff_eq!(row.abs_error, expected, epsilon = 1e-9);
        }
        let fit = report.fit.unwrap();
        assert!(
            fit.exponent > -1.1 && fit.exponent < -0.9,
            "exponent {}",
            fit.exponent
        );
        for pair in report.rows.windows(2) {
            assert!(pair[1].abs_error < pair[0].abs_error);
        }
    }

    #[test]
    fn sizes_must_increase() {
        let err = convergence_report(
            &v2(),
            1.0,
            &[10, 10, 30],
            MarginalConvention::SurfaceMeasure,
            SectionMethod::Quadrature { order: 32 },
            &SeedPath::new(1),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn field_integral_of_a_point_value_is_one_half() {
        let u = Functional::point_cylinder(vec![0.37], |v| v[0]).unwrap();
        for cells in 1..=4usize {
            let estimate = field_integral(&u, cells, 0, &SeedPath::new(2)).unwrap();
            assert_eq!(estimate.method, MeanMethod::Quadrature);
            assert_abs_diff_eq!(estimate.value, 0.5, epsilon = 1e-12);
        }
        let sampled = field_integral(&u, 10, 100_000, &SeedPath::new(2)).unwrap();
        assert!(
            (sampled.value - 0.5).abs() <= 3.0 * sampled.std_error,
            "{} (se {})",
            sampled.value,
            sampled.std_error
        );
    }

    #[test]
    fn field_integral_of_squared_mean_tracks_the_closed_form() {
        let u = Functional::integral_cylinder(2, |v, _| v[0] * v[1]).unwrap();
        let seed = SeedPath::new(3);
        for &cells in &[1usize, 2, 3] {
            let estimate = field_integral(&u, cells, 200_000, &seed.child(cells as u64)).unwrap();
            let expected = 0.25 + 1.0 / (12.0 * cells as f64);
            assert!(
                (estimate.value - expected).abs() <= 3.0 * estimate.std_error,
                "cells {cells}: {} vs {expected} (se {})",
                estimate.value,
                estimate.std_error
            );
        }
    }

    #[test]
    fn field_integral_of_the_mean_is_one_half_for_every_partition() {
        let u = Functional::integral_cylinder(1, |v, _| v[0]).unwrap();
        let seed = SeedPath::new(4);
        for &cells in &[1usize, 7, 50] {
            let estimate = field_integral(&u, cells, 100_000, &seed.child(cells as u64)).unwrap();
            assert!(
                (estimate.value - 0.5).abs() <= 3.0 * estimate.std_error.max(1e-9),
                "cells {cells}: {}",
                estimate.value
            );
        }
    }
}
