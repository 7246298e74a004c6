//! Winding numbers by four independent methods, restricted-Grassmannian
//! classification, and the geodesic verdicts that follow from them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_fourier::{sample_series, GridSamples, TrigSeries};
use crate::config::{grid_for_bandwidth, Discretization, Tolerances};
use crate::error::{HgeoError, Result};
use crate::linalg::{lp_norm, singular_values, SchattenP};
use crate::symbols::{inner_support, sample_radial, sample_symbol_auto, InnerData, SymbolExpr};
use crate::toeplitz_ops::{
    check_sizes, essential_invertibility, hankel_section, kernel_sweep, spectral_summary, toeplitz_tall, KernelSweep,
    KernelVerdict,
};
use crate::two_projections::{
    geodesic_between, unimodular_series, GeodesicOptions, GeodesicReport, GeodesicVerdict, TRIM,
};

/// Largest grid tried when refining a phase-unwrapping quadrature.
const MAX_GRID: usize = 1 << 20;
/// Relative change below which a Schatten sweep counts as bounded.
const SCHATTEN_STABLE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct IndexOptions {
    pub bandwidth: usize,
    /// Truncations for the Toeplitz kernel method.
    pub sizes: Vec<usize>,
    /// Truncations for the Hankel sweeps of the classification.
    pub hankel_sizes: Vec<usize>,
    pub radii: Vec<f64>,
    /// Sampling grid override; defaults to the grid matched to `bandwidth`.
    pub grid: Option<usize>,
    pub tol: Tolerances,
}

impl IndexOptions {
    pub fn disc(&self) -> Discretization {
        match self.grid {
            Some(n) => Discretization::with_grid(self.bandwidth, n),
            None => Discretization::for_bandwidth(self.bandwidth),
        }
    }
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self {
            bandwidth: 256,
            sizes: vec![64, 128, 256],
            hankel_sizes: vec![32, 64, 128],
            radii: vec![0.9, 0.99, 0.999],
            grid: None,
            tol: Tolerances::default(),
        }
    }
}

/// Result of one method, kept even when it fails so reports show every attempt.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Computed(T),
    Failed(String),
}

impl<T> Outcome<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Computed(v),
            Err(e) => Outcome::Failed(e.to_string()),
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Outcome::Computed(v) => Some(v),
            Outcome::Failed(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureIndex {
    pub estimate: i64,
    /// Total unwrapped phase change over `2π`.
    pub value: f64,
    pub residual: f64,
    pub grid: usize,
}

/// Winding number by discrete phase unwrapping; each step must stay below `max_phase_step`.
pub fn index_quadrature(samples: &GridSamples, floor: f64, tol: &Tolerances) -> Result<QuadratureIndex> {
    let (min, location) = samples.min_modulus();
    if !(min > floor) {
        return Err(HgeoError::NotInvertible { min, location });
    }
    let n = samples.len();
    let mut total = 0.0;
    for j in 0..n {
        let step = (samples.values[(j + 1) % n] / samples.values[j]).arg();
        if step.abs() > tol.max_phase_step {
            return Err(HgeoError::GridTooCoarse {
                step: step.abs(),
                limit: tol.max_phase_step,
            });
        }
        total += step;
    }
    let value = total / (2.0 * PI);
    Ok(QuadratureIndex {
        estimate: value.round() as i64,
        value,
        residual: (value - value.round()).abs(),
        grid: n,
    })
}

/// Quadrature on the circle, doubling the grid while it is too coarse.
fn refined_quadrature(
    sample: impl Fn(usize) -> Result<GridSamples>,
    start: usize,
    floor: f64,
    tol: &Tolerances,
) -> Result<QuadratureIndex> {
    let mut n = start;
    loop {
        match index_quadrature(&sample(n)?, floor, tol) {
            Err(HgeoError::GridTooCoarse { .. }) if 2 * n <= MAX_GRID => n *= 2,
            other => return other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierIndex {
    /// `Σ k |c_k|²`
    pub value: f64,
    pub nearest: i64,
    pub residual: f64,
    /// `1 - Σ |c_k|²`
    pub tail_mass: f64,
}

pub fn index_fourier(phi: &TrigSeries, tol: &Tolerances) -> Result<FourierIndex> {
    let defect = sample_series(phi, grid_for_bandwidth(phi.bandwidth()), 0)?.unimodular_defect();
    if defect > tol.unimodular {
        return Err(HgeoError::NotUnimodular { defect });
    }
    let m = phi.bandwidth() as i64;
    let value: f64 = (-m..=m).map(|k| k as f64 * phi.coeff(k).norm_sqr()).sum();
    Ok(FourierIndex {
        value,
        nearest: value.round() as i64,
        residual: (value - value.round()).abs(),
        tail_mass: 1.0 - phi.energy(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ToeplitzIndexRow {
    pub n: usize,
    pub kernel_phi: usize,
    pub kernel_conj: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToeplitzIndex {
    pub rows: Vec<ToeplitzIndexRow>,
    pub estimate: i64,
}

/// `dim ker T_φ̄ - dim ker T_φ` on tall sections, required to agree at every size.
pub fn index_toeplitz(phi: &TrigSeries, sizes: &[usize], tol: &Tolerances) -> Result<ToeplitzIndex> {
    check_sizes(sizes)?;
    let conj = phi.conj();
    let rows = sizes
        .par_iter()
        .map(|&n| {
            Ok(ToeplitzIndexRow {
                n,
                kernel_phi: spectral_summary(&toeplitz_tall(phi, n), tol.kernel)?.kernel_dim,
                kernel_conj: spectral_summary(&toeplitz_tall(&conj, n), tol.kernel)?.kernel_dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let est = |r: &ToeplitzIndexRow| r.kernel_conj as i64 - r.kernel_phi as i64;
    let estimate = est(&rows[0]);
    if rows.iter().any(|r| est(r) != estimate) {
        return Err(HgeoError::NoConsensus(format!(
            "Toeplitz kernel dimensions vary with the truncation: {:?}",
            rows.iter().map(|r| (r.n, est(r))).collect::<Vec<_>>()
        )));
    }
    Ok(ToeplitzIndex { rows, estimate })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialIndex {
    pub r: f64,
    pub result: Outcome<QuadratureIndex>,
}

/// Winding of `φ(r e^{it})` at each radius.
pub fn index_radial(phi: &SymbolExpr, radii: &[f64], tol: &Tolerances) -> Vec<RadialIndex> {
    radii
        .par_iter()
        .map(|&r| RadialIndex {
            r,
            result: Outcome::from_result(refined_quadrature(
                |n| sample_radial(phi, r, n),
                256,
                f64::MIN_POSITIVE,
                tol,
            )),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Consensus {
    Agreed(i64),
    Disagree(Vec<(String, i64)>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub quadrature: Outcome<QuadratureIndex>,
    pub fourier: Outcome<FourierIndex>,
    pub toeplitz: Outcome<ToeplitzIndex>,
    pub radial: Vec<RadialIndex>,
    pub consensus: Consensus,
}

impl IndexReport {
    pub fn index(&self) -> Result<i64> {
        match &self.consensus {
            Consensus::Agreed(k) => Ok(*k),
            Consensus::Disagree(v) => Err(HgeoError::NoConsensus(format!("index methods disagree: {v:?}"))),
        }
    }

    /// `(method, estimate)` for every method that produced a value.
    pub fn estimates(&self) -> Vec<(String, i64)> {
        let mut out = vec![];
        if let Some(q) = self.quadrature.value() {
            out.push(("quadrature".to_string(), q.estimate));
        }
        if let Some(f) = self.fourier.value() {
            out.push(("fourier".to_string(), f.nearest));
        }
        if let Some(t) = self.toeplitz.value() {
            out.push(("toeplitz".to_string(), t.estimate));
        }
        for r in &self.radial {
            if let Some(q) = r.result.value() {
                out.push((format!("radial r={}", r.r), q.estimate));
            }
        }
        out
    }
}

/// Boundary series of a symbol: adaptive for unimodular ones, plain sampling otherwise.
pub fn boundary_series(e: &SymbolExpr, opts: &IndexOptions) -> Result<TrigSeries> {
    if e.is_structurally_unimodular() {
        unimodular_series(e, opts.bandwidth, &opts.tol)
    } else {
        Ok(e.series(opts.disc())?.trimmed(TRIM))
    }
}

/// Runs every index method on an essentially invertible symbol and forms the consensus.
pub fn index_symbol(e: &SymbolExpr, opts: &IndexOptions) -> Result<IndexReport> {
    let tol = &opts.tol;
    let disc = opts.disc();
    essential_invertibility(e, disc, tol)?.into_result()?;
    let quadrature = Outcome::from_result(refined_quadrature(
        |n| sample_symbol_auto(e, n),
        disc.grid.max(grid_for_bandwidth(e.series_bandwidth())),
        tol.invertibility_floor,
        tol,
    ));
    let series = boundary_series(e, opts);
    let (fourier, toeplitz) = match &series {
        Ok(s) => rayon::join(
            || Outcome::from_result(index_fourier(s, tol)),
            || Outcome::from_result(index_toeplitz(s, &opts.sizes, tol)),
        ),
        Err(err) => (Outcome::Failed(err.to_string()), Outcome::Failed(err.to_string())),
    };
    let radial = index_radial(e, &opts.radii, tol);
    let mut report = IndexReport {
        quadrature,
        fourier,
        toeplitz,
        radial,
        consensus: Consensus::Disagree(vec![]),
    };
    report.consensus = consensus(&report);
    Ok(report)
}

fn consensus(r: &IndexReport) -> Consensus {
    let est = r.estimates();
    let Some(q) = r.quadrature.value() else {
        return Consensus::Disagree(est);
    };
    if q.residual >= 0.1 {
        return Consensus::Disagree(est);
    }
    if est.len() >= 2 && est.iter().all(|(_, k)| *k == q.estimate) {
        Consensus::Agreed(q.estimate)
    } else {
        Consensus::Disagree(est)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "zeros", rename_all = "snake_case")]
pub enum InnerClass {
    FiniteBlaschke(usize),
    EssentialClassE1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HankelRow {
    pub n: usize,
    pub s_max: f64,
    /// Singular value number `n/4`, which tends to 0 for compact Hankel operators.
    pub tail: f64,
    /// Singular values above 1/2; bounded in `n` exactly when the Hankel operator is compact.
    pub count_above_half: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchattenRow {
    pub n: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PMembership {
    pub p: SchattenP,
    pub in_gr_res_p: bool,
    /// `||H_θ||_p` across sizes.
    pub sweep: Vec<SchattenRow>,
    /// `||H_θ̄||_p` across sizes.
    pub sweep_conj: Vec<SchattenRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub in_gr_res: bool,
    /// `-ind(φ)` when the subspace lies in the restricted Grassmannian.
    pub component: Option<i64>,
    pub inner_class: Option<InnerClass>,
    pub index: Option<IndexReport>,
    /// Hankel sections of the unimodular representative θ.
    pub hankel: Vec<HankelRow>,
    /// Hankel sections of θ̄.
    pub hankel_conj: Vec<HankelRow>,
    pub gr_res_p: Vec<PMembership>,
    pub warnings: Vec<String>,
}

pub fn hankel_rows(theta: &TrigSeries, sizes: &[usize]) -> Result<Vec<HankelRow>> {
    sizes
        .par_iter()
        .map(|&n| {
            let sv = singular_values(&hankel_section(theta, n).matrix)?;
            Ok(HankelRow {
                n,
                s_max: sv[0],
                tail: sv[n / 4],
                count_above_half: sv.iter().filter(|&&s| s > 0.5).count(),
            })
        })
        .collect()
}

pub fn schatten_rows(theta: &TrigSeries, sizes: &[usize], p: SchattenP) -> Result<Vec<SchattenRow>> {
    sizes
        .par_iter()
        .map(|&n| {
            Ok(SchattenRow {
                n,
                norm: lp_norm(&singular_values(&hankel_section(theta, n).matrix)?, p),
            })
        })
        .collect()
}

/// The last step of a Schatten sweep changes the norm by at most the stability ratio.
pub fn schatten_sweep_bounded(rows: &[SchattenRow]) -> bool {
    match rows {
        [.., a, b] => (b.norm - a.norm).abs() <= SCHATTEN_STABLE * b.norm.max(1e-300) || b.norm < 1e-12,
        _ => false,
    }
}

/// Compactness evidence: the count of large singular values stops growing and the tail is small.
fn looks_compact(rows: &[HankelRow]) -> bool {
    match rows {
        [.., a, b] => a.count_above_half == b.count_above_half && b.tail <= 1e-3 * b.s_max.max(1.0),
        [b] => b.tail <= 1e-3 * b.s_max.max(1.0),
        [] => false,
    }
}

/// Places `φH²` in (or outside) the restricted Grassmannian and its p-refinements.
pub fn classify_subspace(e: &SymbolExpr, p_list: &[SchattenP], opts: &IndexOptions) -> Result<ClassificationReport> {
    check_sizes(&opts.hankel_sizes)?;
    let tol = &opts.tol;
    let mut warnings = vec![];
    let disc = opts.disc();

    if e.is_structurally_inner() {
        let data = InnerData::from_symbol(e)?;
        if data.finite_blaschke_degree().is_none() {
            // corroborating numerics only: the Hankel tail of θ̄ does not decay
            let theta = e.series(disc)?;
            return Ok(ClassificationReport {
                in_gr_res: false,
                component: None,
                inner_class: Some(InnerClass::EssentialClassE1),
                index: None,
                hankel: hankel_rows(&theta, &opts.hankel_sizes)?,
                hankel_conj: hankel_rows(&theta.conj(), &opts.hankel_sizes)?,
                gr_res_p: p_list
                    .iter()
                    .map(|&p| {
                        Ok(PMembership {
                            p,
                            in_gr_res_p: false,
                            sweep: schatten_rows(&theta, &opts.hankel_sizes, p)?,
                            sweep_conj: schatten_rows(&theta.conj(), &opts.hankel_sizes, p)?,
                        })
                    })
                    .collect::<Result<_>>()?,
                warnings,
            });
        }
    }

    let index = index_symbol(e, opts)?;
    let k = index
        .index()
        .map_err(|err| HgeoError::Unclassifiable(err.to_string()))?;
    let inner_class = if e.is_structurally_inner() {
        let zeros = InnerData::from_symbol(e)?.blaschke_zeros.len();
        if zeros as i64 != k {
            warnings.push(format!("index {k} differs from the zero count {zeros}"));
        }
        Some(InnerClass::FiniteBlaschke(zeros))
    } else {
        None
    };
    let component = match inner_class {
        Some(InnerClass::FiniteBlaschke(z)) => -(z as i64),
        _ => -k,
    };

    let theta = unimodular_series(e, opts.bandwidth, tol)?;
    let conj = theta.conj();
    let (hankel, hankel_conj) = rayon::join(
        || hankel_rows(&theta, &opts.hankel_sizes),
        || hankel_rows(&conj, &opts.hankel_sizes),
    );
    let (hankel, hankel_conj) = (hankel?, hankel_conj?);
    if !looks_compact(&hankel) || !looks_compact(&hankel_conj) {
        warnings.push("Hankel tail singular values do not decay across the sweep".into());
    }
    let gr_res_p = p_list
        .iter()
        .map(|&p| {
            let sweep = schatten_rows(&theta, &opts.hankel_sizes, p)?;
            let sweep_conj = schatten_rows(&conj, &opts.hankel_sizes, p)?;
            Ok(PMembership {
                p,
                in_gr_res_p: schatten_sweep_bounded(&sweep) && schatten_sweep_bounded(&sweep_conj),
                sweep,
                sweep_conj,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassificationReport {
        in_gr_res: true,
        component: Some(component),
        inner_class,
        index: Some(index),
        hankel,
        hankel_conj,
        gr_res_p,
        warnings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GrResVerdict {
    pub verdict: GeodesicVerdict,
    pub component_phi: i64,
    pub component_psi: i64,
    /// `||X|| < π/2`, required of every geodesic inside the restricted Grassmannian.
    pub strictly_below_half_pi: Option<bool>,
    pub geodesic: Option<GeodesicReport>,
}

/// Geodesic inside the restricted Grassmannian exists iff the two indices agree.
pub fn geodesic_in_grres_verdict(
    phi: &SymbolExpr,
    psi: &SymbolExpr,
    index_opts: &IndexOptions,
    geo_opts: &GeodesicOptions,
) -> Result<GrResVerdict> {
    let (a, b) = rayon::join(
        || classify_subspace(phi, &[], index_opts),
        || classify_subspace(psi, &[], index_opts),
    );
    let (a, b) = (a?, b?);
    let component = |r: &ClassificationReport, name: &str| {
        r.component
            .filter(|_| r.in_gr_res)
            .ok_or_else(|| HgeoError::Precondition(format!("{name} does not define a point of Gr_res")))
    };
    let (ka, kb) = (component(&a, "first symbol")?, component(&b, "second symbol")?);
    if ka != kb {
        return Ok(GrResVerdict {
            verdict: GeodesicVerdict::ComponentMismatch {
                index_phi: -ka,
                index_psi: -kb,
            },
            component_phi: ka,
            component_psi: kb,
            strictly_below_half_pi: None,
            geodesic: None,
        });
    }
    let report = geodesic_between(phi, psi, geo_opts)?;
    Ok(GrResVerdict {
        verdict: report.verdict.clone(),
        component_phi: ka,
        component_psi: kb,
        strictly_below_half_pi: report.length_op.map(|l| l < std::f64::consts::FRAC_PI_2),
        geodesic: Some(report),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportCriterion {
    UniqueMinimalGeodesic,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportVerdict {
    pub verdict: SupportCriterion,
    pub only_phi: Vec<f64>,
    pub only_psi: Vec<f64>,
}

/// Unique minimal geodesic when each support has a point outside the other.
pub fn support_disjoint_verdict(phi: &InnerData, psi: &InnerData, tol: f64) -> SupportVerdict {
    let (sp, sq) = (inner_support(phi), inner_support(psi));
    let outside = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter()
            .copied()
            .filter(|&t| {
                b.iter().all(|&s| {
                    let d = (t - s).abs();
                    d.min(2.0 * PI - d) > tol
                })
            })
            .collect()
    };
    let (only_phi, only_psi) = (outside(&sp, &sq), outside(&sq, &sp));
    let verdict = if !only_phi.is_empty() && !only_psi.is_empty() {
        SupportCriterion::UniqueMinimalGeodesic
    } else {
        SupportCriterion::Inconclusive
    };
    SupportVerdict { verdict, only_phi, only_psi }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToeplitzInvertibility {
    pub invertible: bool,
    pub component: Option<i64>,
    pub sweep: Option<KernelSweep>,
    pub sweep_conj: Option<KernelSweep>,
    /// `γ(T_φ)` at the largest size.
    pub gamma: Option<f64>,
    pub reason: String,
}

/// `T_φ` is invertible iff φH² lies in component 0 and neither `T_φ` nor `T_φ̄` has a kernel.
pub fn toeplitz_invertible_verdict(e: &SymbolExpr, opts: &IndexOptions) -> Result<ToeplitzInvertibility> {
    let tol = &opts.tol;
    let disc = opts.disc();
    if !essential_invertibility(e, disc, tol)?.is_invertible() {
        return Ok(ToeplitzInvertibility {
            invertible: false,
            component: None,
            sweep: None,
            sweep_conj: None,
            gamma: None,
            reason: "symbol is not invertible in L^inf, so T_φ is not Fredholm".into(),
        });
    }
    let class = classify_subspace(e, &[], opts)?;
    let component = class.component.filter(|_| class.in_gr_res);
    if component != Some(0) {
        return Ok(ToeplitzInvertibility {
            invertible: false,
            component,
            sweep: None,
            sweep_conj: None,
            gamma: None,
            reason: match component {
                Some(k) => format!("Fredholm index {k} is not zero"),
                None => "subspace is not in the restricted Grassmannian".into(),
            },
        });
    }
    let s = boundary_series(e, opts)?;
    let (a, b) = rayon::join(
        || kernel_sweep(&s, &opts.sizes, tol),
        || kernel_sweep(&s.conj(), &opts.sizes, tol),
    );
    let (a, b) = (a?, b?);
    let invertible = a.verdict == KernelVerdict::LikelyTrivial && b.verdict == KernelVerdict::LikelyTrivial;
    let gamma = a.last().gamma;
    Ok(ToeplitzInvertibility {
        invertible,
        component,
        reason: if invertible {
            "index 0 and both kernel sweeps trivial".into()
        } else {
            "kernel sweeps are not both trivial".into()
        },
        sweep: Some(a),
        sweep_conj: Some(b),
        gamma,
    })
}
