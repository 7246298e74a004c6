use serde::Serialize;

use super::{analytic_completion, conjugate_phase, normalize_angle, sample_symbol_auto, Atom, SymbolExpr};
use crate::circle_fourier::{fourier_coeffs, leakage_beyond, sample_series, TrigSeries};
use crate::config::{grid_for_bandwidth, Discretization, Tolerances};
use crate::error::{HgeoError, Result};
use crate::linalg::{cx, general_eigenvalues, CMat, Cx};

/// Zeros, atoms and unimodular constant of an inner function, plus
/// boundary angles where an (undeclared, infinite) zero family accumulates.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct InnerData {
    pub blaschke_zeros: Vec<Cx>,
    pub singular_atoms: Vec<Atom>,
    pub scalar: Cx,
    pub accumulation: Vec<f64>,
}

impl InnerData {
    pub fn trivial() -> Self {
        Self {
            scalar: cx(1.0, 0.0),
            ..Self::default()
        }
    }

    /// Reads the inner data off a structurally inner expression.
    pub fn from_symbol(e: &SymbolExpr) -> Result<Self> {
        let mut d = Self::trivial();
        d.absorb(e)?;
        Ok(d)
    }

    fn absorb(&mut self, e: &SymbolExpr) -> Result<()> {
        match e {
            SymbolExpr::Chi(k) if *k >= 0 => {
                self.blaschke_zeros.extend(std::iter::repeat(Cx::default()).take(*k as usize));
            }
            SymbolExpr::Blaschke(z) => self.blaschke_zeros.extend_from_slice(z),
            SymbolExpr::SingularAtomic(a) => {
                for atom in a {
                    let angle = normalize_angle(atom.angle);
                    match self
                        .singular_atoms
                        .iter_mut()
                        .find(|b| angle_distance(b.angle, angle) < 1e-12)
                    {
                        Some(b) => b.weight += atom.weight,
                        None => self.singular_atoms.push(Atom { angle, weight: atom.weight }),
                    }
                }
            }
            SymbolExpr::Scalar(l) if (l.norm() - 1.0).abs() < 1e-12 => self.scalar *= l,
            SymbolExpr::Product(fs) => {
                for f in fs {
                    self.absorb(f)?;
                }
            }
            other => {
                return Err(HgeoError::Precondition(format!(
                    "not structurally inner: {}",
                    kind_name(other)
                )))
            }
        }
        Ok(())
    }

    /// Marks boundary angles where an infinite zero family accumulates.
    pub fn with_accumulation(mut self, angles: &[f64]) -> Self {
        self.accumulation.extend(angles.iter().map(|&t| normalize_angle(t)));
        self
    }

    /// Number of zeros when the function is a finite Blaschke product.
    pub fn finite_blaschke_degree(&self) -> Option<usize> {
        (self.singular_atoms.is_empty() && self.accumulation.is_empty()).then_some(self.blaschke_zeros.len())
    }
}

fn kind_name(e: &SymbolExpr) -> &'static str {
    match e {
        SymbolExpr::Chi(_) => "chi with negative frequency",
        SymbolExpr::Blaschke(_) => "blaschke",
        SymbolExpr::SingularAtomic(_) => "sing",
        SymbolExpr::ExpI(_) => "expi",
        SymbolExpr::OuterFromLogModulus(_) => "outer",
        SymbolExpr::Raw(_) => "fourier",
        SymbolExpr::Scalar(_) => "non-unimodular scalar",
        SymbolExpr::Product(_) => "product",
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (normalize_angle(a) - normalize_angle(b)).abs();
    d.min(2.0 * std::f64::consts::PI - d)
}

pub fn inner_support(phi: &InnerData) -> Vec<f64> {
    let mut s: Vec<f64> = phi
        .singular_atoms
        .iter()
        .map(|a| a.angle)
        .chain(phi.accumulation.iter().copied())
        .map(normalize_angle)
        .collect();
    s.sort_by(f64::total_cmp);
    s.dedup_by(|a, b| angle_distance(*a, *b) < 1e-12);
    s
}

/// Whether `psi = phi · theta` for some inner `theta`: zero multisets nest and atoms are dominated.
pub fn inner_divides(phi: &InnerData, psi: &InnerData, tol: f64) -> bool {
    let mut used = vec![false; psi.blaschke_zeros.len()];
    for a in &phi.blaschke_zeros {
        let hit = psi
            .blaschke_zeros
            .iter()
            .enumerate()
            .find(|(j, b)| !used[*j] && (*a - **b).norm() <= tol);
        match hit {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    let atoms_ok = phi.singular_atoms.iter().all(|a| {
        psi.singular_atoms
            .iter()
            .any(|b| angle_distance(a.angle, b.angle) <= tol && a.weight <= b.weight + tol)
    });
    let support_ok = phi
        .accumulation
        .iter()
        .all(|&t| psi.accumulation.iter().any(|&s| angle_distance(t, s) <= tol));
    atoms_ok && support_ok
}

/// Boundary series of the outer function with `log|f| = -u`, i.e. `f = exp(-u - iũ)`.
pub fn outer_from_log_modulus(u: &TrigSeries, disc: Discretization, tol: &Tolerances) -> Result<TrigSeries> {
    if !u.is_real(1e-12 * u.sup_coeff().max(1.0)) {
        return Err(HgeoError::NotReal { defect: u.reality_defect() });
    }
    let n = disc.grid.max(grid_for_bandwidth(u.bandwidth()));
    let samples = sample_series(&analytic_completion(u), n, 0)?.map(|v| (-v).exp());
    let f = fourier_coeffs(&samples, disc.bandwidth)?;
    let leak = leakage_beyond(&samples, disc.bandwidth)?.max((f.negative_energy() / f.energy()).sqrt());
    if leak > tol.leakage {
        return Err(HgeoError::InsufficientBandwidth {
            leakage: leak,
            bandwidth: disc.bandwidth,
        });
    }
    Ok(f)
}

/// Unimodular `θ = (φ/|φ|) e^{iũ}` with `u = -log|φ|`, so that `φH² = θH²`.
pub fn unimodular_representative(phi: &SymbolExpr, disc: Discretization, tol: &Tolerances) -> Result<TrigSeries> {
    let n = disc.grid.max(grid_for_bandwidth(phi.series_bandwidth()));
    let samples = sample_symbol_auto(phi, n)?;
    let (min, location) = samples.min_modulus();
    if min <= tol.invertibility_floor {
        return Err(HgeoError::NotInvertible { min, location });
    }
    let phase = conjugate_phase(&samples)?;
    let theta = samples.zip_with(&phase, |f, e| f / f.norm() * e)?;
    let leak = leakage_beyond(&theta, disc.bandwidth)?;
    if leak > tol.leakage {
        return Err(HgeoError::InsufficientBandwidth {
            leakage: leak,
            bandwidth: disc.bandwidth,
        });
    }
    fourier_coeffs(&theta, disc.bandwidth)
}

/// Quasicontinuous unimodular symbol `χ_n e^{i(u + ṽ)}`.
pub fn qc_construct(n: i64, u: &TrigSeries, v: &TrigSeries, disc: Discretization) -> Result<TrigSeries> {
    let vt = crate::circle_fourier::harmonic_conjugate(v, 1e-12 * v.sup_coeff().max(1.0))?;
    if !u.is_real(1e-12 * u.sup_coeff().max(1.0)) {
        return Err(HgeoError::NotReal { defect: u.reality_defect() });
    }
    let phase = u.add(&vt);
    let m = disc.bandwidth.max(n.unsigned_abs() as usize);
    let grid = disc.grid.max(grid_for_bandwidth(m.max(phase.bandwidth())));
    let chi = sample_series(&TrigSeries::chi(n), grid, 0)?;
    let e = sample_series(&phase, grid, 0)?.map(|t| Cx::from_polar(1.0, t.re));
    fourier_coeffs(&chi.zip_with(&e, |a, b| a * b)?, m)
}

/// Inner-outer factorization of an analytic trigonometric polynomial.
///
/// The inner part is the Blaschke product over the roots inside the disk
/// (zeros at the origin from vanishing low coefficients); the outer part is
/// returned as a series with the same degree.
pub fn inner_outer_factorize(s: &TrigSeries, zero_tolerance: f64) -> Result<(InnerData, TrigSeries)> {
    let sup = s.sup_coeff();
    if sup == 0.0 {
        return Err(HgeoError::Precondition("cannot factorize the zero function".into()));
    }
    let floor = 1e-12 * sup.max(1.0);
    let m = s.bandwidth() as i64;
    if let Some(k) = (1..=m).find(|&k| s.coeff(-k).norm() > floor) {
        return Err(HgeoError::Precondition(format!(
            "not analytic: coefficient of index {} is {:.3e}",
            -k,
            s.coeff(-k).norm()
        )));
    }
    let live: Vec<i64> = (0..=m).filter(|&k| s.coeff(k).norm() > floor).collect();
    let (low, high) = (live[0], *live.last().unwrap());
    let poly: Vec<Cx> = (low..=high).map(|k| s.coeff(k)).collect();
    let roots = polynomial_roots(&poly)?;

    let mut inner = InnerData::trivial();
    inner.blaschke_zeros = vec![Cx::default(); low as usize];
    let lead = poly[poly.len() - 1];
    let mut outer = TrigSeries::constant(lead);
    for r in roots {
        if (r.norm() - 1.0).abs() <= zero_tolerance {
            return Err(HgeoError::BoundaryZero { re: r.re, im: r.im });
        }
        let factor = if r.norm() < 1.0 {
            inner.blaschke_zeros.push(r);
            if r == Cx::default() {
                TrigSeries::constant(cx(1.0, 0.0))
            } else {
                // z - r = -(|r|/r̄) b_r(z) (1 - r̄ z)
                let c = -(r.norm() / r.conj());
                TrigSeries::from_terms(&[(0, c), (1, -c * r.conj())])
            }
        } else {
            TrigSeries::from_terms(&[(0, -r), (1, cx(1.0, 0.0))])
        };
        outer = outer.mul(&factor);
    }
    Ok((inner, outer))
}

/// Roots of `Σ c_k z^k` from the companion matrix, then Newton-polished.
fn polynomial_roots(c: &[Cx]) -> Result<Vec<Cx>> {
    let d = c.len() - 1;
    if d == 0 {
        return Ok(vec![]);
    }
    let lead = c[d];
    let mut comp = CMat::zeros(d, d);
    for j in 0..d {
        comp[(0, j)] = -c[d - 1 - j] / lead;
    }
    for i in 1..d {
        comp[(i, i - 1)] = cx(1.0, 0.0);
    }
    let mut roots = general_eigenvalues(&comp)?;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (mut p, mut dp) = (Cx::default(), Cx::default());
            for &ck in c.iter().rev() {
                dp = dp * *r + p;
                p = p * *r + ck;
            }
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    Ok(roots)
}
