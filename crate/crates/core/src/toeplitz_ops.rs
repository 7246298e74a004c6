//! Finite sections of Toeplitz, Hankel and multiplication operators and the
//! spectral quantities read off them.

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_fourier::TrigSeries;
use crate::config::{grid_for_bandwidth, Discretization, Tolerances};
use crate::error::{HgeoError, Result};
use crate::linalg::{lp_norm, singular_values, CMat, Cx, SchattenP};
use crate::symbols::{sample_symbol_auto, SymbolExpr};

/// A finite basis window of `L²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Window {
    /// `χ_0, …, χ_{n-1}`
    H2(usize),
    /// `χ_{-1}, …, χ_{-n}`; basis vector `j` is `χ_{-(j+1)}`.
    HMinus(usize),
    /// `χ_{-n}, …, χ_n`
    L2(usize),
}

impl Window {
    pub fn dim(self) -> usize {
        match self {
            Window::H2(n) | Window::HMinus(n) => n,
            Window::L2(n) => 2 * n + 1,
        }
    }

    /// Frequency of basis vector `j`.
    pub fn frequency(self, j: usize) -> i64 {
        match self {
            Window::H2(_) => j as i64,
            Window::HMinus(_) => -(j as i64) - 1,
            Window::L2(n) => j as i64 - n as i64,
        }
    }

    /// Position of frequency `k` in the window.
    pub fn position(self, k: i64) -> Option<usize> {
        let j = match self {
            Window::H2(_) => k,
            Window::HMinus(_) => -k - 1,
            Window::L2(n) => k + n as i64,
        };
        (j >= 0 && (j as usize) < self.dim()).then_some(j as usize)
    }
}

/// Dense matrix together with the windows it maps between.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedOperator {
    pub matrix: CMat,
    pub domain: Window,
    pub codomain: Window,
}

impl WindowedOperator {
    pub fn new(matrix: CMat, domain: Window, codomain: Window) -> Result<Self> {
        if matrix.ncols() != domain.dim() || matrix.nrows() != codomain.dim() {
            return Err(HgeoError::InvalidParameter(format!(
                "{}x{} matrix does not fit windows {domain:?} -> {codomain:?}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, domain, codomain })
    }

    /// Entry `(j, k)` is `f(codomain frequency j, domain frequency k)`.
    pub fn from_fn(domain: Window, codomain: Window, f: impl Fn(i64, i64) -> Cx) -> Self {
        let matrix = CMat::from_fn(codomain.dim(), domain.dim(), |j, k| {
            f(codomain.frequency(j), domain.frequency(k))
        });
        Self { matrix, domain, codomain }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            domain: self.codomain,
            codomain: self.domain,
        }
    }

    /// Compression onto smaller windows contained in the current ones.
    pub fn restrict(&self, domain: Window, codomain: Window) -> Result<Self> {
        let cols: Option<Vec<usize>> = (0..domain.dim()).map(|k| self.domain.position(domain.frequency(k))).collect();
        let rows: Option<Vec<usize>> =
            (0..codomain.dim()).map(|j| self.codomain.position(codomain.frequency(j))).collect();
        let (Some(cols), Some(rows)) = (cols, rows) else {
            return Err(HgeoError::InvalidParameter(format!(
                "windows {domain:?} -> {codomain:?} are not contained in {:?} -> {:?}",
                self.domain, self.codomain
            )));
        };
        let matrix = CMat::from_fn(rows.len(), cols.len(), |i, j| self.matrix[(rows[i], cols[j])]);
        Ok(Self { matrix, domain, codomain })
    }

    /// Restriction of a padded multiplication section to its domain window.
    pub fn central(&self) -> Result<Self> {
        self.restrict(self.domain, self.domain)
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        singular_values(&self.matrix)
    }
}

/// `T_φ` on `H2(n)`: entry `(j, k) = φ̂(j - k)`.
pub fn toeplitz_section(phi: &TrigSeries, n: usize) -> WindowedOperator {
    WindowedOperator::from_fn(Window::H2(n), Window::H2(n), |j, k| phi.coeff(j - k))
}

/// `T_φ` from `H2(n)` into `H2(n + bandwidth)`, which captures `P_+(φ f)` exactly
/// for every `f` in the domain window.
pub fn toeplitz_tall(phi: &TrigSeries, n: usize) -> WindowedOperator {
    let rows = Window::H2(n + phi.bandwidth());
    WindowedOperator::from_fn(Window::H2(n), rows, |j, k| phi.coeff(j - k))
}

/// `H_φ` from `H2(n)` to `HMinus(n)`: entry `(j, k) = φ̂(-(j + k + 1))`.
pub fn hankel_section(phi: &TrigSeries, n: usize) -> WindowedOperator {
    WindowedOperator::from_fn(Window::H2(n), Window::HMinus(n), |j, k| phi.coeff(j - k))
}

/// `M_φ` from `L2(n)` into `L2(n + pad)`; use [`WindowedOperator::central`] for the square block.
pub fn multiplication_section(phi: &TrigSeries, n: usize, pad: usize) -> Result<WindowedOperator> {
    if pad < phi.bandwidth() {
        return Err(HgeoError::InvalidParameter(format!(
            "pad {pad} is smaller than the symbol bandwidth {}",
            phi.bandwidth()
        )));
    }
    Ok(WindowedOperator::from_fn(Window::L2(n), Window::L2(n + pad), |j, k| phi.coeff(j - k)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub singular_values: Vec<f64>,
    /// Smallest singular value above the threshold; `None` for the zero operator.
    pub gamma: Option<f64>,
    pub kernel_dim: usize,
    /// Absolute cutoff, `relative threshold · s_max`.
    pub threshold: f64,
}

/// Singular values with the kernel counted below `rel_threshold · s_max`.
pub fn spectral_summary(a: &WindowedOperator, rel_threshold: f64) -> Result<SpectralSummary> {
    let sv = a.singular_values()?;
    let s_max = sv.first().copied().unwrap_or(0.0);
    let threshold = rel_threshold * s_max;
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    Ok(SpectralSummary {
        gamma: sv.iter().copied().filter(|&s| s > threshold).last(),
        kernel_dim: a.matrix.ncols() - rank,
        threshold,
        singular_values: sv,
    })
}

pub fn schatten_norm(a: &WindowedOperator, p: SchattenP) -> Result<f64> {
    Ok(lp_norm(&a.singular_values()?, p))
}

/// Singular values of `[M_θ, P_+]` on `L2(n)`, the union of those of `P_-M_θP_+` and `P_+M_θP_-`.
pub fn commutator_singular_values(theta: &TrigSeries, n: usize) -> Result<Vec<f64>> {
    if !theta.is_real(1e-12 * theta.sup_coeff().max(1.0)) {
        return Err(HgeoError::NotReal {
            defect: theta.reality_defect(),
        });
    }
    let lower = WindowedOperator::from_fn(Window::H2(n + 1), Window::HMinus(n), |j, k| theta.coeff(j - k));
    let upper = WindowedOperator::from_fn(Window::HMinus(n), Window::H2(n + 1), |j, k| theta.coeff(j - k));
    let mut sv = lower.singular_values()?;
    sv.extend(upper.singular_values()?);
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

pub fn commutator_norm(theta: &TrigSeries, n: usize, p: SchattenP) -> Result<f64> {
    Ok(lp_norm(&commutator_singular_values(theta, n)?, p))
}

/// Finite-section estimate `||H_θ||` of the `L^∞` distance from θ to `H^∞`.
pub fn nehari_distance(theta: &TrigSeries, n: usize) -> Result<f64> {
    Ok(hankel_section(theta, n).singular_values()?.first().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Invertibility {
    Invertible { ess_inf: f64 },
    NotInvertible { min: f64, location: f64 },
}

impl Invertibility {
    pub fn is_invertible(self) -> bool {
        matches!(self, Invertibility::Invertible { .. })
    }

    pub fn into_result(self) -> Result<f64> {
        match self {
            Invertibility::Invertible { ess_inf } => Ok(ess_inf),
            Invertibility::NotInvertible { min, location } => Err(HgeoError::NotInvertible { min, location }),
        }
    }
}

/// Grid minimum of `|φ|`; unimodular symbols are invertible structurally.
pub fn essential_invertibility(phi: &SymbolExpr, disc: Discretization, tol: &Tolerances) -> Result<Invertibility> {
    if phi.is_structurally_unimodular() {
        return Ok(Invertibility::Invertible { ess_inf: 1.0 });
    }
    let grid = disc.grid.max(grid_for_bandwidth(phi.series_bandwidth()));
    let (min, location) = sample_symbol_auto(phi, grid)?.min_modulus();
    Ok(if min > tol.invertibility_floor {
        Invertibility::Invertible { ess_inf: min }
    } else {
        Invertibility::NotInvertible { min, location }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub s_max: f64,
    pub s_min: f64,
    pub gamma: Option<f64>,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "dim", rename_all = "snake_case")]
pub enum KernelVerdict {
    LikelyTrivial,
    Detected(usize),
    Inconclusive,
}

/// Finite-section evidence about `ker T_φ` across increasing truncations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSweep {
    pub rows: Vec<SweepRow>,
    pub verdict: KernelVerdict,
}

impl KernelSweep {
    pub fn last(&self) -> &SweepRow {
        self.rows.last().expect("sweep has at least one size")
    }

    /// Kernel dimension when the sweep is conclusive.
    pub fn dim(&self) -> Option<usize> {
        match self.verdict {
            KernelVerdict::LikelyTrivial => Some(0),
            KernelVerdict::Detected(d) => Some(d),
            KernelVerdict::Inconclusive => None,
        }
    }
}

pub(crate) fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(HgeoError::InvalidParameter("empty list of sweep sizes".into()));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) || sizes[0] == 0 {
        return Err(HgeoError::InvalidParameter(format!(
            "sweep sizes must be positive and strictly increasing, got {sizes:?}"
        )));
    }
    Ok(())
}

/// Kernel dimensions of tall sections of `T_φ` at each size, computed in parallel.
pub fn kernel_sweep(phi: &TrigSeries, sizes: &[usize], tol: &Tolerances) -> Result<KernelSweep> {
    check_sizes(sizes)?;
    let rows = sizes
        .par_iter()
        .map(|&n| {
            let s = spectral_summary(&toeplitz_tall(phi, n), tol.kernel)?;
            Ok(SweepRow {
                n,
                s_max: s.singular_values.first().copied().unwrap_or(0.0),
                s_min: s.singular_values.last().copied().unwrap_or(0.0),
                gamma: s.gamma,
                kernel_dim: s.kernel_dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = sweep_verdict(&rows, tol);
    Ok(KernelSweep { rows, verdict })
}

fn sweep_verdict(rows: &[SweepRow], tol: &Tolerances) -> KernelVerdict {
    let d = rows[0].kernel_dim;
    if d > 0 && rows.iter().all(|r| r.kernel_dim == d) {
        return KernelVerdict::Detected(d);
    }
    if rows.iter().any(|r| r.kernel_dim != 0) {
        return KernelVerdict::Inconclusive;
    }
    let last = &rows[rows.len() - 1];
    let bounded = last.s_min >= tol.stability_margin * last.s_max;
    let stable = rows.len() < 2 || last.s_min >= 0.9 * rows[rows.len() - 2].s_min;
    if bounded && stable {
        KernelVerdict::LikelyTrivial
    } else {
        KernelVerdict::Inconclusive
    }
}
