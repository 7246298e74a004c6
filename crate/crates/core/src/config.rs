//! Centralized tolerances and discretization parameters.

use serde::Serialize;

/// Every numerical threshold used by the library, with its default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Coefficients below this magnitude count as zero.
    pub coeff_zero: f64,
    /// Allowed `max | |f| - 1 |` for a series to count as unimodular.
    pub unimodular: f64,
    /// A singular value is zero when below `kernel * s_max`.
    pub kernel: f64,
    /// Eigenvalue clustering radius for the ±1 and 0 spaces of `P - Q`.
    pub cluster: f64,
    /// Grid minimum of `|φ|` below which φ is declared non-invertible.
    pub invertibility_floor: f64,
    /// Allowed `||P² - P||` for a windowed projection.
    pub idempotency: f64,
    /// The log route is refused when `||P - Q|| >= 1 - log_margin`.
    pub log_margin: f64,
    /// Allowed relative spectral energy outside the configured bandwidth.
    pub leakage: f64,
    /// Relative lower bound on `s_min` for a "kernel likely trivial" verdict.
    pub stability_margin: f64,
    /// Allowed endpoint residual `||e^{iX} P e^{-iX} - Q||`.
    pub endpoint: f64,
    /// Matching radius for zeros and atom angles.
    pub root_match: f64,
    /// Largest admissible phase step between adjacent grid points.
    pub max_phase_step: f64,
    /// Allowed `max |e^{iθ} - φψ̄|` for θ to count as an argument of `φψ̄`.
    pub argument: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coeff_zero: 1e-12,
            unimodular: 1e-8,
            kernel: 1e-8,
            cluster: 1e-6,
            invertibility_floor: 1e-6,
            idempotency: 1e-6,
            log_margin: 1e-3,
            leakage: 1e-8,
            stability_margin: 1e-3,
            endpoint: 1e-6,
            root_match: 1e-9,
            max_phase_step: std::f64::consts::FRAC_PI_2,
            argument: 1e-6,
        }
    }
}

/// Bandwidth `m` of coefficient arrays and size `N` of the sampling grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Discretization {
    pub bandwidth: usize,
    pub grid: usize,
}

impl Discretization {
    /// Smallest power-of-two grid with `N >= 4m + 4`.
    pub fn for_bandwidth(bandwidth: usize) -> Self {
        Self {
            bandwidth,
            grid: grid_for_bandwidth(bandwidth),
        }
    }

    pub fn with_grid(bandwidth: usize, grid: usize) -> Self {
        Self { bandwidth, grid }
    }
}

impl Default for Discretization {
    fn default() -> Self {
        Self::for_bandwidth(256)
    }
}

pub fn grid_for_bandwidth(bandwidth: usize) -> usize {
    (4 * bandwidth + 4).next_power_of_two()
}
