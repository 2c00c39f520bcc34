//! Exact and sampled geometry of high-dimensional spheres: Wallis integrals,
//! unit-ball volumes, coordinate marginal densities of the section sphere,
//! and uniform surface sampling.

use std::f64::consts::FRAC_PI_2;

use crate::error::Error;
use crate::quadrature::integrate_panels;
use crate::rng::RandomStream;
use crate::Result;

/// The pair `(n, R)` identifying a section of the functional sphere: step
/// functions on `n` equal cells of `[0, 1]` with mean square value `R^2`,
/// i.e. coordinates on the Euclidean sphere of radius `R * sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSection {
    cells: usize,
    radius: f64,
}

impl SphereSection {
    pub fn new(cells: usize, radius: f64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::invalid("section needs at least one cell"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(format!(
                "section radius must be positive and finite, got {radius}"
            )));
        }
        Ok(SphereSection { cells, radius })
    }

    /// Number of partition cells (the dimension of the section).
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// The functional radius `R`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Euclidean radius `R * sqrt(n)` of the coordinate sphere.
    pub fn coordinate_radius(&self) -> f64 {
        self.radius * (self.cells as f64).sqrt()
    }
}

/// Which one-coordinate marginal to use on a section sphere.
///
/// `PaperSlice` weights a coordinate value `z` by the volume of the
/// hyperplane slice through the ball, giving exponent `(n-1)/2`;
/// `SurfaceMeasure` is the exact marginal of uniform surface measure with
/// exponent `(n-3)/2`. Both tend to the `N(0, R^2)` density as `n` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalConvention {
    PaperSlice,
    SurfaceMeasure,
}

/// Wallis integral `W_n = \int_0^{pi/2} cos^n(t) dt` by the closed
/// recursion `W_n = (n-1)/n * W_{n-2}` with `W_0 = pi/2`, `W_1 = 1`.
pub fn wallis(n: usize) -> f64 {
    match n {
        0 => FRAC_PI_2,
        1 => 1.0,
        _ => {
            let mut values = [FRAC_PI_2, 1.0];
            for k in 2..=n {
                values[k % 2] *= (k as f64 - 1.0) / k as f64;
            }
            values[n % 2]
        }
    }
}

/// Volume of the unit ball in dimension `n` by the recursion
/// `V_n = 2 * V_{n-1} * W_n` with `V_1 = 2`.
///
/// Panics if `n` is zero.
pub fn ball_volume(n: usize) -> f64 {
    assert!(n >= 1, "ball volume needs dimension >= 1");
    let mut volume = 2.0;
    for k in 2..=n {
        volume *= 2.0 * wallis(k);
    }
    volume
}

/// A point uniformly distributed on the sphere of radius `r` in `n`-space,
/// produced by normalizing a vector of independent standard Gaussians.
///
/// Panics if `n` is zero or `r` is not positive.
pub fn sample_sphere(n: usize, r: f64, stream: &mut RandomStream) -> Vec<f64> {
    assert!(n >= 1, "sphere dimension must be >= 1");
    assert!(r > 0.0, "sphere radius must be positive");
    let mut point = vec![0.0; n];
    loop {
        stream.fill_standard_normal(&mut point);
        let norm_sq: f64 = point.iter().map(|x| x * x).sum();
        if norm_sq > 0.0 {
            let scale = r / norm_sq.sqrt();
            for x in &mut point {
                *x *= scale;
            }
            return point;
        }
        // A zero vector has probability zero; draw again.
    }
}

fn marginal_exponent(section: &SphereSection, convention: MarginalConvention) -> Result<f64> {
    let n = section.cells();
    match convention {
        MarginalConvention::PaperSlice => Ok((n as f64 - 1.0) / 2.0),
        MarginalConvention::SurfaceMeasure => {
            if n < 3 {
                Err(Error::SurfaceMarginalDimension { n })
            } else {
                Ok((n as f64 - 3.0) / 2.0)
            }
        }
    }
}

/// Wallis normalizer for the chosen convention: the marginal density is
/// `(1 - z^2/(nR^2))^e / (2 sqrt(n) R W_m)` with `m = n` for the paper
/// slice and `m = n - 2` for surface measure.
fn marginal_normalizer(section: &SphereSection, convention: MarginalConvention) -> f64 {
    let n = section.cells();
    let w = match convention {
        MarginalConvention::PaperSlice => wallis(n),
        MarginalConvention::SurfaceMeasure => wallis(n - 2),
    };
    2.0 * section.coordinate_radius() * w
}

/// Density at `z` of one coordinate of the section sphere, normalized to
/// integrate to one over `[-R sqrt(n), R sqrt(n)]`. Outside that support the
/// density is zero. `SurfaceMeasure` requires `n >= 3`.
pub fn coordinate_marginal_density(
    section: &SphereSection,
    z: f64,
    convention: MarginalConvention,
) -> Result<f64> {
    let exponent = marginal_exponent(section, convention)?;
    let c = section.coordinate_radius();
    let t = (z / c) * (z / c);
    if t > 1.0 {
        return Ok(0.0);
    }
    let shape = if t >= 1.0 {
        if exponent == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (exponent * (-t).ln_1p()).exp()
    };
    Ok(shape / marginal_normalizer(section, convention))
}

/// Cumulative distribution of the coordinate marginal, evaluated by
/// composite quadrature in the angular variable.
pub fn coordinate_marginal_cdf(
    section: &SphereSection,
    z: f64,
    convention: MarginalConvention,
) -> Result<f64> {
    // Validate the convention/dimension combination up front.
    marginal_exponent(section, convention)?;
    let n = section.cells();
    let c = section.coordinate_radius();
    if z <= -c {
        return Ok(0.0);
    }
    if z >= c {
        return Ok(1.0);
    }
    let (power, w) = match convention {
        MarginalConvention::PaperSlice => (n as i32, wallis(n)),
        MarginalConvention::SurfaceMeasure => (n as i32 - 2, wallis(n - 2)),
    };
    let upper = (z / c).asin();
    // cos^power concentrates on a scale ~ 1/sqrt(power); panel accordingly.
    let panels = angular_panels(n);
    let integral = integrate_panels(
        |theta| theta.cos().powi(power),
        -FRAC_PI_2,
        upper,
        32,
        panels,
    );
    Ok((integral / (2.0 * w)).clamp(0.0, 1.0))
}

/// Panel count that resolves the `1/sqrt(n)` concentration scale of
/// `cos^n` over `[-pi/2, pi/2]`.
pub(crate) fn angular_panels(n: usize) -> usize {
    ((n as f64).sqrt().ceil() as usize).max(1)
}
