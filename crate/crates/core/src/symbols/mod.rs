//! Structural symbols on the circle: characters, Blaschke products,
//! atomic singular inner functions, exponentials, outer functions,
//! raw series, scalars and their products.

mod factor;
mod parse;

pub use factor::{
    inner_divides, inner_outer_factorize, inner_support, outer_from_log_modulus, qc_construct,
    unimodular_representative, InnerData,
};
pub use parse::parse_symbol;

use std::f64::consts::PI;

use serde::Serialize;

use crate::circle_fourier::{
    fourier_coeffs, grid_point, harmonic_conjugate, leakage_beyond, riesz_project, sample_series, GridSamples,
    TrigSeries,
};
use crate::config::{grid_for_bandwidth, Discretization};
use crate::error::{HgeoError, Result};
use crate::linalg::{cx, Cx};

/// Points of the disk closer than this to the circle count as boundary points.
const BLASCHKE_MARGIN: f64 = 1e-10;
/// Relative distance at which a grid point is considered to hit an atom.
const ATOM_COLLISION: f64 = 1e-9;

/// Point mass `weight · δ_{e^{i angle}}` of a singular measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub angle: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SymbolExpr {
    Chi(i64),
    Blaschke(Vec<Cx>),
    SingularAtomic(Vec<Atom>),
    /// `e^{iu}` for a real series `u`.
    ExpI(TrigSeries),
    /// Outer function with `|f| = e^{-u}`.
    OuterFromLogModulus(TrigSeries),
    Raw(TrigSeries),
    Scalar(Cx),
    Product(Vec<SymbolExpr>),
}

impl SymbolExpr {
    pub fn blaschke(zeros: &[Cx]) -> Result<Self> {
        let e = SymbolExpr::Blaschke(zeros.to_vec());
        e.validate()?;
        Ok(e)
    }

    pub fn singular(atoms: &[(f64, f64)]) -> Result<Self> {
        let e = SymbolExpr::SingularAtomic(
            atoms.iter().map(|&(angle, weight)| Atom { angle, weight }).collect(),
        );
        e.validate()?;
        Ok(e)
    }

    pub fn product(factors: Vec<SymbolExpr>) -> Self {
        if factors.len() == 1 {
            factors.into_iter().next().unwrap()
        } else {
            SymbolExpr::Product(factors)
        }
    }

    /// Checks the structural invariants of every factor.
    pub fn validate(&self) -> Result<()> {
        match self {
            SymbolExpr::Blaschke(zeros) => {
                if zeros.is_empty() {
                    return Err(HgeoError::Semantic("Blaschke product needs at least one zero".into()));
                }
                for z in zeros {
                    if !(z.norm() < 1.0 - BLASCHKE_MARGIN) {
                        return Err(HgeoError::Semantic(format!(
                            "Blaschke zero {z} is not inside the open unit disk"
                        )));
                    }
                }
                Ok(())
            }
            SymbolExpr::SingularAtomic(atoms) => {
                if atoms.is_empty() {
                    return Err(HgeoError::Semantic("singular measure needs at least one atom".into()));
                }
                let mut angles = Vec::with_capacity(atoms.len());
                for a in atoms {
                    if !(a.weight > 0.0 && a.weight.is_finite()) {
                        return Err(HgeoError::Semantic(format!(
                            "atom weight must be positive, got {}",
                            a.weight
                        )));
                    }
                    if !a.angle.is_finite() {
                        return Err(HgeoError::Semantic("atom angle must be finite".into()));
                    }
                    angles.push(normalize_angle(a.angle));
                }
                angles.sort_by(f64::total_cmp);
                let wrap = angles.len() > 1 && angles[0] + 2.0 * PI - angles[angles.len() - 1] < 1e-12;
                if angles.windows(2).any(|w| w[1] - w[0] < 1e-12) || wrap {
                    return Err(HgeoError::Semantic("atom angles must be pairwise distinct".into()));
                }
                Ok(())
            }
            SymbolExpr::ExpI(u) | SymbolExpr::OuterFromLogModulus(u) => {
                if !u.is_real(1e-12 * u.sup_coeff().max(1.0)) {
                    return Err(HgeoError::Semantic("exponent series must be real-valued".into()));
                }
                Ok(())
            }
            SymbolExpr::Scalar(l) => {
                if l.norm() == 0.0 || !l.norm().is_finite() {
                    return Err(HgeoError::Semantic("scalar factor must be nonzero and finite".into()));
                }
                Ok(())
            }
            SymbolExpr::Product(fs) => {
                if fs.is_empty() {
                    return Err(HgeoError::Semantic("empty product".into()));
                }
                fs.iter().try_for_each(SymbolExpr::validate)
            }
            SymbolExpr::Chi(_) | SymbolExpr::Raw(_) => Ok(()),
        }
    }

    /// Inner by construction: `χ_k (k≥0)`, Blaschke, atomic singular, unimodular scalars and products of these.
    pub fn is_structurally_inner(&self) -> bool {
        match self {
            SymbolExpr::Chi(k) => *k >= 0,
            SymbolExpr::Blaschke(_) | SymbolExpr::SingularAtomic(_) => true,
            SymbolExpr::Scalar(l) => (l.norm() - 1.0).abs() < 1e-12,
            SymbolExpr::Product(fs) => fs.iter().all(SymbolExpr::is_structurally_inner),
            _ => false,
        }
    }

    /// Unimodular on the circle by construction (inner factors, `χ_k` of any sign, `e^{iu}`).
    pub fn is_structurally_unimodular(&self) -> bool {
        match self {
            SymbolExpr::Chi(_) | SymbolExpr::ExpI(_) => true,
            SymbolExpr::Product(fs) => fs.iter().all(SymbolExpr::is_structurally_unimodular),
            other => other.is_structurally_inner(),
        }
    }

    /// In `H^∞` by construction: inner factors, outer functions and nonzero scalars.
    pub fn is_structurally_analytic(&self) -> bool {
        match self {
            SymbolExpr::OuterFromLogModulus(_) | SymbolExpr::Scalar(_) => true,
            SymbolExpr::Product(fs) => fs.iter().all(SymbolExpr::is_structurally_analytic),
            other => other.is_structurally_inner(),
        }
    }

    /// Largest bandwidth among raw and exponent series, used to size grids.
    pub fn series_bandwidth(&self) -> usize {
        match self {
            SymbolExpr::Raw(s) | SymbolExpr::ExpI(s) | SymbolExpr::OuterFromLogModulus(s) => s.bandwidth(),
            SymbolExpr::Chi(k) => k.unsigned_abs() as usize,
            SymbolExpr::Product(fs) => fs.iter().map(SymbolExpr::series_bandwidth).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn atoms(&self) -> Vec<Atom> {
        match self {
            SymbolExpr::SingularAtomic(a) => a.clone(),
            SymbolExpr::Product(fs) => fs.iter().flat_map(SymbolExpr::atoms).collect(),
            _ => vec![],
        }
    }

    /// Coefficient array of the boundary function with bandwidth `disc.bandwidth`.
    pub fn series(&self, disc: Discretization) -> Result<TrigSeries> {
        Ok(self.series_with_leakage(disc)?.0)
    }

    /// Like [`SymbolExpr::series`], also reporting the relative energy beyond the bandwidth.
    pub fn series_with_leakage(&self, disc: Discretization) -> Result<(TrigSeries, f64)> {
        match self {
            SymbolExpr::Raw(s) => return Ok((s.resized(disc.bandwidth.max(s.bandwidth())), 0.0)),
            SymbolExpr::Chi(k) => return Ok((TrigSeries::chi(*k).resized(disc.bandwidth.max(k.unsigned_abs() as usize)), 0.0)),
            SymbolExpr::Scalar(c) => return Ok((TrigSeries::constant(*c).resized(disc.bandwidth), 0.0)),
            _ => {}
        }
        let grid = disc.grid.max(grid_for_bandwidth(self.series_bandwidth()));
        let samples = sample_symbol_auto(self, grid)?;
        let leak = leakage_beyond(&samples, disc.bandwidth)?;
        let coeffs = fourier_coeffs(&samples, disc.bandwidth)?;
        Ok((if self.is_structurally_analytic() { riesz_project(&coeffs) } else { coeffs }, leak))
    }
}

pub(crate) fn normalize_angle(t: f64) -> f64 {
    t.rem_euclid(2.0 * PI)
}

/// Blaschke factor `b_a(z) = (ā/|a|)(a - z)/(1 - ā z)`, with `b_0(z) = z`.
pub fn blaschke_factor(a: Cx, z: Cx) -> Cx {
    if a == Cx::default() {
        return z;
    }
    let unit = a.conj() / a.norm();
    unit * (a - z) / (cx(1.0, 0.0) - a.conj() * z)
}

/// Boundary series of `e^{iu}` resolved finely enough for the harmonic extension.
fn expi_series(u: &TrigSeries) -> Result<TrigSeries> {
    let m = 16 * u.bandwidth() + 32;
    let n = grid_for_bandwidth(m);
    let us = sample_series(u, n, 0)?;
    fourier_coeffs(&us.map(|v| Cx::from_polar(1.0, v.re)), m)
}

/// Analytic series `F` whose real part on the circle is `u`: `c_0 + 2 Σ_{k>0} c_k z^k`.
pub(crate) fn analytic_completion(u: &TrigSeries) -> TrigSeries {
    let m = u.bandwidth() as i64;
    let mut f = TrigSeries::zero(m as usize);
    f.set(0, cx(u.coeff(0).re, 0.0));
    for k in 1..=m {
        f.set(k, u.coeff(k) * 2.0);
    }
    f
}

/// Value of the symbol at `z` with `|z| <= 1`.
///
/// Inside the disk, `χ_{-k}` evaluates to `z̄^k` and raw or exponential
/// series through their harmonic extension; products multiply factor values.
pub fn eval_symbol(e: &SymbolExpr, z: Cx) -> Result<Cx> {
    let r = z.norm();
    if r > 1.0 + 1e-12 {
        return Err(HgeoError::InvalidParameter(format!(
            "evaluation point {z} lies outside the closed disk"
        )));
    }
    let on_circle = (r - 1.0).abs() <= 1e-12;
    Ok(match e {
        SymbolExpr::Chi(k) => {
            if *k >= 0 {
                z.powi(*k as i32)
            } else {
                z.conj().powi((-k) as i32)
            }
        }
        SymbolExpr::Blaschke(zeros) => zeros.iter().map(|&a| blaschke_factor(a, z)).product(),
        SymbolExpr::SingularAtomic(atoms) => {
            let mut exponent = Cx::default();
            for a in atoms {
                let zeta = Cx::from_polar(1.0, a.angle);
                if (zeta - z).norm() < ATOM_COLLISION {
                    return Err(HgeoError::EvaluationAtAtom { angle: a.angle });
                }
                exponent += a.weight * (zeta + z) / (zeta - z);
            }
            (-exponent).exp()
        }
        SymbolExpr::ExpI(u) => {
            if on_circle {
                Cx::from_polar(1.0, u.eval(z.arg()).re)
            } else {
                expi_series(u)?.eval_disk(z)
            }
        }
        SymbolExpr::OuterFromLogModulus(u) => {
            let f = analytic_completion(u);
            let m = f.bandwidth() as i32;
            let val: Cx = (0..=m).map(|k| f.coeff(k as i64) * z.powi(k)).sum();
            (-val).exp()
        }
        SymbolExpr::Raw(s) => {
            if on_circle {
                s.eval(z.arg())
            } else {
                s.eval_disk(z)
            }
        }
        SymbolExpr::Scalar(l) => *l,
        SymbolExpr::Product(fs) => {
            let mut acc = cx(1.0, 0.0);
            for f in fs {
                acc *= eval_symbol(f, z)?;
            }
            acc
        }
    })
}

/// Samples the boundary function on the N-point grid with the given offset.
pub fn sample_symbol(e: &SymbolExpr, n: usize, offset: u8) -> Result<GridSamples> {
    let step = 2.0 * PI / n as f64;
    for a in e.atoms() {
        let pos = normalize_angle(a.angle) / step - 0.5 * offset as f64;
        if (pos - pos.round()).abs() < ATOM_COLLISION * n as f64 {
            return Err(HgeoError::AtomOnGrid { angle: a.angle, offset });
        }
    }
    sample_unchecked(e, n, offset)
}

fn sample_unchecked(e: &SymbolExpr, n: usize, offset: u8) -> Result<GridSamples> {
    match e {
        SymbolExpr::Raw(s) => sample_series(s, n, offset),
        SymbolExpr::ExpI(u) => Ok(sample_series(u, n, offset)?.map(|v| Cx::from_polar(1.0, v.re))),
        SymbolExpr::OuterFromLogModulus(u) => {
            Ok(sample_series(&analytic_completion(u), n, offset)?.map(|v| (-v).exp()))
        }
        SymbolExpr::Product(fs) => {
            let mut acc = GridSamples::new(vec![cx(1.0, 0.0); n], offset)?;
            for f in fs {
                let s = sample_unchecked(f, n, offset)?;
                acc = acc.zip_with(&s, |a, b| a * b)?;
            }
            Ok(acc)
        }
        _ => {
            let values = (0..n)
                .map(|j| eval_symbol(e, Cx::from_polar(1.0, grid_point(j, n, offset))))
                .collect::<Result<Vec<_>>>()?;
            GridSamples::new(values, offset)
        }
    }
}

/// Samples with offset 0, retrying on the shifted grid when an atom lies on it.
pub fn sample_symbol_auto(e: &SymbolExpr, n: usize) -> Result<GridSamples> {
    match sample_symbol(e, n, 0) {
        Err(HgeoError::AtomOnGrid { .. }) => sample_symbol(e, n, 1),
        other => other,
    }
}

/// Samples the radial slice `φ(r e^{it_j})`.
pub fn sample_radial(e: &SymbolExpr, r: f64, n: usize) -> Result<GridSamples> {
    if !(r > 0.0 && r < 1.0) {
        return Err(HgeoError::InvalidParameter(format!("radius must lie in (0, 1), got {r}")));
    }
    let values = (0..n)
        .map(|j| eval_symbol(e, Cx::from_polar(r, grid_point(j, n, 0))))
        .collect::<Result<Vec<_>>>()?;
    GridSamples::new(values, 0)
}

/// Boundary values of `e^{iũ}` where `u = -log|φ|`, on the same grid as `samples`.
pub(crate) fn conjugate_phase(samples: &GridSamples) -> Result<GridSamples> {
    let n = samples.len();
    let u = GridSamples::new(samples.values.iter().map(|v| cx(-v.norm().ln(), 0.0)).collect(), samples.offset)?;
    let u_series = fourier_coeffs(&u, n / 2 - 1)?.real_part();
    let v = harmonic_conjugate(&u_series, 1e-9)?;
    Ok(sample_series(&v, n, samples.offset)?.map(|t| Cx::from_polar(1.0, t.re)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blaschke_value_at_one() {
        let b = SymbolExpr::blaschke(&[cx(0.5, 0.0)]).unwrap();
        let v = eval_symbol(&b, cx(1.0, 0.0)).unwrap();
        assert!((v - cx(-1.0, 0.0)).norm() < 1e-15);
        assert!(eval_symbol(&b, cx(0.5, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn singular_at_origin() {
        let s = SymbolExpr::singular(&[(PI, 1.0)]).unwrap();
        let v = eval_symbol(&s, Cx::default()).unwrap();
        assert!((v - cx((-1f64).exp(), 0.0)).norm() < 1e-15);
        assert!(matches!(
            eval_symbol(&s, cx(-1.0, 0.0)),
            Err(HgeoError::EvaluationAtAtom { .. })
        ));
    }

    #[test]
    fn inner_symbols_are_unimodular_on_grid() {
        let e = SymbolExpr::Product(vec![
            SymbolExpr::blaschke(&[cx(0.5, 0.0), cx(0.3, 0.2)]).unwrap(),
            SymbolExpr::singular(&[(1.0, 0.7)]).unwrap(),
            SymbolExpr::Chi(2),
        ]);
        let s = sample_symbol_auto(&e, 256).unwrap();
        assert!(s.unimodular_defect() < 1e-10);
    }

    #[test]
    fn atom_on_grid_detected_and_retried() {
        let s = SymbolExpr::singular(&[(0.0, 1.0)]).unwrap();
        assert!(matches!(sample_symbol(&s, 64, 0), Err(HgeoError::AtomOnGrid { .. })));
        let g = sample_symbol_auto(&s, 64).unwrap();
        assert_eq!(g.offset, 1);
    }

    #[test]
    fn invalid_structures_rejected() {
        assert!(SymbolExpr::blaschke(&[cx(1.0, 0.0)]).is_err());
        assert!(SymbolExpr::singular(&[(0.0, -1.0)]).is_err());
        assert!(SymbolExpr::singular(&[(0.0, 1.0), (2.0 * PI, 1.0)]).is_err());
        assert!(SymbolExpr::Scalar(Cx::default()).validate().is_err());
    }

    #[test]
    fn structural_inner_classes() {
        assert!(SymbolExpr::Chi(2).is_structurally_inner());
        assert!(!SymbolExpr::Chi(-1).is_structurally_inner());
        assert!(SymbolExpr::Chi(-1).is_structurally_unimodular());
        assert!(!SymbolExpr::Scalar(cx(2.0, 0.0)).is_structurally_inner());
    }

    #[test]
    fn outer_evaluation_inside_matches_boundary_limit() {
        // u = -log|1 + z/2| gives f = 1 + z/2
        let disc = Discretization::for_bandwidth(64);
        let raw = SymbolExpr::Raw(TrigSeries::from_terms(&[(0, cx(1.0, 0.0)), (1, cx(0.5, 0.0))]));
        let samples = sample_symbol(&raw, disc.grid, 0).unwrap();
        let u = fourier_coeffs(&samples.map(|v| cx(-v.norm().ln(), 0.0)), disc.bandwidth)
            .unwrap()
            .real_part();
        let f = SymbolExpr::OuterFromLogModulus(u);
        let z = cx(0.3, -0.4);
        assert!((eval_symbol(&f, z).unwrap() - (cx(1.0, 0.0) + z * 0.5)).norm() < 1e-12);
    }

    #[test]
    fn chi_negative_is_harmonic_extension() {
        let z = Cx::from_polar(0.5, 0.3);
        let v = eval_symbol(&SymbolExpr::Chi(-2), z).unwrap();
        assert!((v - Cx::from_polar(0.25, -0.6)).norm() < 1e-15);
    }
}
