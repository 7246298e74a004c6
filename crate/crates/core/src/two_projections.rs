//! Projections `P_φ` onto `φH²`, the Halmos two-projection analysis of a pair,
//! the geodesic exponent, and geodesic lengths.

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_fourier::{fourier_coeffs, sample_series, TrigSeries};
use crate::config::{grid_for_bandwidth, Discretization, Tolerances};
use crate::error::{HgeoError, Result};
use crate::linalg::{
    cx, hermitian_eigen, hermitian_eigenvalues, hermitian_norm, identity, lp_norm, select_columns, CMat, Cx,
    HermitianEigen, SchattenP,
};
use crate::symbols::{unimodular_representative, SymbolExpr};
use crate::toeplitz_ops::{
    commutator_norm, essential_invertibility, kernel_sweep, spectral_summary, toeplitz_tall, KernelSweep,
    KernelVerdict, Window, WindowedOperator,
};

/// Largest bandwidth tried when resolving a symbol to its tolerance.
const MAX_BANDWIDTH: usize = 1 << 14;
/// Series coefficients below this fraction of the largest one are dropped.
pub const TRIM: f64 = 1e-15;
/// Principal angles at or below this are treated as zero.
const ANGLE_FLOOR: f64 = 1e-6;

/// `P_φ = M_φ P_+ M_φ̄` compressed to `L2(n)`, for unimodular φ.
///
/// Entry `(j, k)` is `Σ_{l≥0} φ̂(j-l) conj(φ̂(k-l))`; indices `l` up to `n + pad`
/// suffice once `pad` covers the bandwidth.
pub fn projection_onto(phi: &TrigSeries, n: usize, pad: usize, tol: &Tolerances) -> Result<WindowedOperator> {
    let bw = phi.bandwidth();
    if pad < bw {
        return Err(HgeoError::InvalidParameter(format!(
            "pad {pad} is smaller than the symbol bandwidth {bw}"
        )));
    }
    let defect = sample_series(phi, grid_for_bandwidth(bw), 0)?.unimodular_defect();
    if defect > tol.unimodular {
        return Err(HgeoError::NotUnimodular { defect });
    }
    let dim = 2 * n + 1;
    let ni = n as i64;
    let lmax = (n + pad) as i64;
    let direct = |j: i64, k: i64| -> Cx { (0..=lmax).map(|l| phi.coeff(j - l) * phi.coeff(k - l).conj()).sum() };
    let mut g = CMat::zeros(dim, dim);
    for a in 0..dim {
        g[(a, 0)] = direct(a as i64 - ni, -ni);
        g[(0, a)] = g[(a, 0)].conj();
    }
    for a in 1..dim {
        for b in 1..dim {
            let (j, k) = (a as i64 - ni, b as i64 - ni);
            g[(a, b)] = g[(a - 1, b - 1)] + phi.coeff(j) * phi.coeff(k).conj();
        }
    }
    let g = (&g + g.adjoint()).scale(0.5);
    let defect = idempotency_defect(&g)?;
    if defect > tol.idempotency {
        return Err(HgeoError::TruncationTooSmall { defect });
    }
    WindowedOperator::new(g, Window::L2(n), Window::L2(n))
}

/// `||P² - P||`, bounded first by the Frobenius norm.
pub fn idempotency_defect(p: &CMat) -> Result<f64> {
    let d = p * p - p;
    let frob = d.norm();
    if frob < 1e-14 {
        return Ok(frob);
    }
    hermitian_norm(&d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HalmosDims {
    pub ran_p_ker_q: usize,
    pub ran_q_ker_p: usize,
    pub ran_p_ran_q: usize,
    pub ker_p_ker_q: usize,
    pub generic: usize,
}

impl HalmosDims {
    pub fn as_tuple(self) -> (usize, usize, usize, usize, usize) {
        (self.ran_p_ker_q, self.ran_q_ker_p, self.ran_p_ran_q, self.ker_p_ker_q, self.generic)
    }

    pub fn total(self) -> usize {
        self.ran_p_ker_q + self.ran_q_ker_p + self.ran_p_ran_q + self.ker_p_ker_q + self.generic
    }
}

/// Five-subspace decomposition of a pair of projections.
///
/// On the generic part, `P` has an orthonormal basis `p_j` and `I - P` a basis
/// `w_j` with `Q p_j = cos θ_j p_j + sin θ_j w_j`; `Z = diag(θ_j)` in these bases.
#[derive(Debug, Clone)]
pub struct HalmosDecomposition {
    pub dims: HalmosDims,
    pub ran_p_ker_q: CMat,
    pub ran_q_ker_p: CMat,
    pub ran_p_ran_q: CMat,
    pub ker_p_ker_q: CMat,
    pub generic: CMat,
    pub generic_p: CMat,
    pub generic_w: CMat,
    /// Principal angles of the generic part, ascending, in `(0, π/2)`.
    pub angles: Vec<f64>,
    /// Spectrum of `P - Q`, ascending.
    pub difference_spectrum: Vec<f64>,
    pub warnings: Vec<String>,
}

impl HalmosDecomposition {
    /// The angle operator `Z` on the generic range of `P`, in the `p_j` basis.
    pub fn z(&self) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            self.angles.len(),
            self.angles.iter().map(|&t| cx(t, 0.0)),
        ))
    }

    /// `||P - Q||`.
    pub fn distance(&self) -> f64 {
        self.difference_spectrum.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_obstructed(&self) -> bool {
        self.dims.ran_p_ker_q > 0 || self.dims.ran_q_ker_p > 0
    }
}

pub fn halmos_decompose(p: &CMat, q: &CMat, cluster_tol: f64) -> Result<HalmosDecomposition> {
    if p.shape() != q.shape() || p.nrows() != p.ncols() {
        return Err(HgeoError::InvalidParameter("projections must be square and of equal size".into()));
    }
    let eig = hermitian_eigen(&(p - q))?;
    let border = cluster_tol.sqrt();
    let mut warnings = Vec::new();
    let (mut plus, mut minus, mut zero, mut rest) = (vec![], vec![], vec![], vec![]);
    for (j, &v) in eig.values.iter().enumerate() {
        let near = [(v - 1.0).abs(), (v + 1.0).abs(), v.abs()];
        if near[0] <= cluster_tol {
            plus.push(j);
        } else if near[1] <= cluster_tol {
            minus.push(j);
        } else if near[2] <= cluster_tol {
            zero.push(j);
        } else {
            if near.iter().any(|&d| d <= border) {
                warnings.push(format!("borderline eigenvalue {v:.3e} of P - Q near a cluster"));
            }
            rest.push(j);
        }
    }

    let zero_basis = select_columns(&eig.vectors, &zero);
    let (ran_ran, ker_ker) = if zero.is_empty() {
        (CMat::zeros(p.nrows(), 0), CMat::zeros(p.nrows(), 0))
    } else {
        let c = hermitian_eigen(&(zero_basis.adjoint() * p * &zero_basis))?;
        for &v in &c.values {
            if v.min(1.0 - v).abs() > border {
                warnings.push(format!("compressed P has eigenvalue {v:.3e} on the common part"));
            }
        }
        (
            &zero_basis * c.columns_where(|v| v > 0.5),
            &zero_basis * c.columns_where(|v| v <= 0.5),
        )
    };

    let generic = select_columns(&eig.vectors, &rest);
    if rest.len() % 2 == 1 {
        return Err(HgeoError::Precondition(format!(
            "generic part has odd dimension {}: inputs are not projections within tolerance",
            rest.len()
        )));
    }
    let half = rest.len() / 2;
    let (generic_p, generic_w, angles) = if half == 0 {
        (CMat::zeros(p.nrows(), 0), CMat::zeros(p.nrows(), 0), vec![])
    } else {
        let pg = hermitian_eigen(&(generic.adjoint() * p * &generic))?;
        let pb = &generic * select_columns(&pg.vectors, &(half..rest.len()).collect::<Vec<_>>());
        let m = hermitian_eigen(&(pb.adjoint() * q * &pb))?;
        let pv = &pb * &m.vectors;
        let qp = q * &pv;
        let mut w = CMat::zeros(p.nrows(), half);
        let mut angles = Vec::with_capacity(half);
        for j in 0..half {
            let c2 = m.values[j].clamp(0.0, 1.0);
            let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
            angles.push(c.acos());
            let col = (qp.column(j) - pv.column(j) * cx(c2, 0.0)) / cx(c * s, 0.0);
            w.set_column(j, &(&col / cx(col.norm(), 0.0)));
        }
        // m.values ascend, so the angles descend; flip to ascending
        let order: Vec<usize> = (0..half).rev().collect();
        let angles = order.iter().map(|&j| angles[j]).collect();
        (select_columns(&pv, &order), select_columns(&w, &order), angles)
    };

    let dims = HalmosDims {
        ran_p_ker_q: plus.len(),
        ran_q_ker_p: minus.len(),
        ran_p_ran_q: ran_ran.ncols(),
        ker_p_ker_q: ker_ker.ncols(),
        generic: rest.len(),
    };
    Ok(HalmosDecomposition {
        dims,
        ran_p_ker_q: select_columns(&eig.vectors, &plus),
        ran_q_ker_p: select_columns(&eig.vectors, &minus),
        ran_p_ran_q: ran_ran,
        ker_p_ker_q: ker_ker,
        generic,
        generic_p,
        generic_w,
        angles,
        difference_spectrum: eig.values,
        warnings,
    })
}

/// `X = Σ θ_j i(p_j w_j* - w_j p_j*)`, which is `[[0, iZ], [-iZ, 0]]` on the generic part and zero elsewhere.
pub fn exponent_via_halmos(h: &HalmosDecomposition) -> Result<CMat> {
    if h.is_obstructed() {
        return Err(HgeoError::Obstruction {
            ran_p_ker_q: h.dims.ran_p_ker_q,
            ran_q_ker_p: h.dims.ran_q_ker_p,
        });
    }
    let dim = h.dims.total();
    let zp = &h.generic_p * h.z().map(|t| t * cx(0.0, 1.0));
    let a = &zp * h.generic_w.adjoint();
    debug_assert_eq!(a.nrows(), dim);
    Ok(&a + a.adjoint())
}

/// Exponent from the principal logarithm of `ε_P ε_Q`, where `ε = 2P - I`.
///
/// The unitary `U = ε_P ε_Q` is converted to the Hermitian `C = -i(U + I)^{-1}(U - I)`,
/// and `X = -arctan(C)`, which satisfies `e^{iX} P e^{-iX} = Q`.
pub fn exponent_via_log(p: &CMat, q: &CMat, tol: &Tolerances) -> Result<CMat> {
    let distance = hermitian_norm(&(p - q))?;
    if distance >= 1.0 - tol.log_margin {
        return Err(HgeoError::LogRouteRefused { distance });
    }
    let n = p.nrows();
    let id = identity(n);
    let u = (p.scale(2.0) - &id) * (q.scale(2.0) - &id);
    let c = (&u + &id)
        .lu()
        .solve(&(&u - &id))
        .ok_or_else(|| HgeoError::LogRouteRefused { distance })?
        .map(|z| z * cx(0.0, -1.0));
    Ok(hermitian_eigen(&c)?.apply(|v| cx(-v.atan(), 0.0)))
}

/// `||X||_p` from the eigenvalues of the Hermitian exponent.
pub fn schatten_length(x: &CMat, p: SchattenP) -> Result<f64> {
    Ok(schatten_of_spectrum(&hermitian_eigenvalues(x)?, p))
}

fn schatten_of_spectrum(values: &[f64], p: SchattenP) -> f64 {
    lp_norm(&values.iter().map(|v| v.abs()).collect::<Vec<_>>(), p)
}

/// `2^{1/p} ||arccos |T_σ| ||_p` over the generic singular values of a tall section of `T_σ`.
pub fn angle_length(sigma: &TrigSeries, n: usize, p: SchattenP, tol: &Tolerances) -> Result<f64> {
    Ok(p.two_root() * lp_norm(&generic_angles(sigma, n, tol)?, p))
}

/// `arccos` of the clamped singular values of `T_σ`, dropping zero angles and the kernel.
pub fn generic_angles(sigma: &TrigSeries, n: usize, tol: &Tolerances) -> Result<Vec<f64>> {
    let s = spectral_summary(&toeplitz_tall(sigma, n), tol.kernel)?;
    Ok(s.singular_values
        .iter()
        .filter(|&&v| v > s.threshold)
        .map(|v| v.clamp(0.0, 1.0).acos())
        .filter(|&t| t > ANGLE_FLOOR)
        .collect())
}

/// `e^{itX} P e^{-itX}` sampled on `[0, 1]`, carried in the eigenbasis of `X`.
pub struct GeodesicPath {
    eig: HermitianEigen,
    start: CMat,
    pub samples: Vec<PathSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathSample {
    pub t: f64,
    pub idempotency_defect: f64,
    pub dist_to_start: f64,
    pub dist_to_end: f64,
}

impl GeodesicPath {
    fn rotated(&self, t: f64) -> CMat {
        let v = &self.eig.values;
        CMat::from_fn(self.start.nrows(), self.start.ncols(), |i, j| {
            self.start[(i, j)] * Cx::from_polar(1.0, t * (v[i] - v[j]))
        })
    }

    /// `δ(t)` in the standard window basis.
    pub fn projection_at(&self, t: f64) -> CMat {
        &self.eig.vectors * self.rotated(t) * self.eig.vectors.adjoint()
    }

    /// Sum of `||δ(t_{i+1}) - δ(t_i)||` over consecutive samples.
    pub fn chord_length(&self) -> Result<f64> {
        let ts: Vec<f64> = self.samples.iter().map(|s| s.t).collect();
        let chords = ts
            .par_windows(2)
            .map(|w| hermitian_norm(&(self.rotated(w[1]) - self.rotated(w[0]))))
            .collect::<Result<Vec<_>>>()?;
        Ok(chords.iter().sum())
    }
}

/// Samples the geodesic at `samples` equispaced times in `[0, 1]` (at least two).
pub fn geodesic_path(x: &CMat, p: &CMat, samples: usize) -> Result<GeodesicPath> {
    if samples < 2 {
        return Err(HgeoError::InvalidParameter("a path needs at least two samples".into()));
    }
    let eig = hermitian_eigen(x)?;
    let start = eig.vectors.adjoint() * p * &eig.vectors;
    let mut path = GeodesicPath { eig, start, samples: vec![] };
    let end = path.rotated(1.0);
    let ts: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    path.samples = ts
        .par_iter()
        .map(|&t| {
            let d = path.rotated(t);
            Ok(PathSample {
                t,
                idempotency_defect: idempotency_defect(&d)?,
                dist_to_start: hermitian_norm(&(&d - &path.start))?,
                dist_to_end: hermitian_norm(&(&d - &end))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(path)
}

/// `||e^{iX} P e^{-iX} - Q||`.
pub fn endpoint_residual(x: &CMat, p: &CMat, q: &CMat) -> Result<f64> {
    let eig = hermitian_eigen(x)?;
    let u = eig.apply(|v| Cx::from_polar(1.0, v));
    hermitian_norm(&(&u * p * u.adjoint() - q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Codiagonality {
    /// `||P X P||`
    pub p_range: f64,
    /// `||(I - P) X (I - P)||`
    pub p_kernel: f64,
    pub q_range: f64,
    pub q_kernel: f64,
}

impl Codiagonality {
    pub fn max(&self) -> f64 {
        self.p_range.max(self.p_kernel).max(self.q_range).max(self.q_kernel)
    }
}

pub fn codiagonality(x: &CMat, p: &CMat, q: &CMat) -> Result<Codiagonality> {
    let id = identity(x.nrows());
    let compress = |e: &CMat| hermitian_norm(&(e * x * e));
    Ok(Codiagonality {
        p_range: compress(p)?,
        p_kernel: compress(&(&id - p))?,
        q_range: compress(q)?,
        q_kernel: compress(&(&id - q))?,
    })
}

/// Unimodular boundary series spanning the same subspace as `e`, resolved to the leakage tolerance.
pub fn unimodular_series(e: &SymbolExpr, bandwidth: usize, tol: &Tolerances) -> Result<TrigSeries> {
    essential_invertibility(e, Discretization::for_bandwidth(bandwidth), tol)?.into_result()?;
    let mut m = bandwidth.max(e.series_bandwidth());
    loop {
        let disc = Discretization::for_bandwidth(m);
        let attempt = if e.is_structurally_unimodular() {
            e.series_with_leakage(disc).and_then(|(s, leak)| {
                if leak > tol.leakage {
                    Err(HgeoError::InsufficientBandwidth { leakage: leak, bandwidth: m })
                } else {
                    Ok(s)
                }
            })
        } else {
            unimodular_representative(e, disc, tol)
        };
        match attempt {
            Err(HgeoError::InsufficientBandwidth { .. }) if 2 * m <= MAX_BANDWIDTH => m *= 2,
            other => return other.map(|s| s.trimmed(TRIM)),
        }
    }
}

/// Continuous argument of a zero-winding unimodular series, by phase unwrapping.
pub fn principal_argument(sigma: &TrigSeries, bandwidth: usize, tol: &Tolerances) -> Result<TrigSeries> {
    let n = grid_for_bandwidth(bandwidth.max(sigma.bandwidth()));
    let s = sample_series(sigma, n, 0)?;
    let (min, location) = s.min_modulus();
    if min <= tol.invertibility_floor {
        return Err(HgeoError::NotInvertible { min, location });
    }
    let mut phase = Vec::with_capacity(n);
    let mut acc = s.values[0].arg();
    phase.push(acc);
    for j in 1..=n {
        let step = (s.values[j % n] / s.values[j - 1]).arg();
        if step.abs() > tol.max_phase_step {
            return Err(HgeoError::GridTooCoarse {
                step: step.abs(),
                limit: tol.max_phase_step,
            });
        }
        acc += step;
        if j < n {
            phase.push(acc);
        }
    }
    let winding = ((acc - phase[0]) / (2.0 * std::f64::consts::PI)).round();
    if winding != 0.0 {
        return Err(HgeoError::Precondition(format!(
            "argument is not continuous: winding number {winding}"
        )));
    }
    let g = crate::circle_fourier::GridSamples::new(phase.into_iter().map(|t| cx(t, 0.0)).collect(), 0)?;
    Ok(fourier_coeffs(&g, n / 4 - 1)?.real_part().trimmed(TRIM))
}

/// Options for [`geodesic_between`]; unset fields are derived from `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicOptions {
    pub n: usize,
    pub pad: Option<usize>,
    pub bandwidth: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub p_values: Vec<SchattenP>,
    pub tol: Tolerances,
}

impl GeodesicOptions {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            pad: None,
            bandwidth: None,
            sizes: None,
            p_values: vec![],
            tol: Tolerances::default(),
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth.unwrap_or((2 * self.n).max(128))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sizes.clone().unwrap_or_else(|| default_sizes(self.n))
    }
}

/// `[n/4, n/2, n]`, each at least 8, deduplicated.
pub fn default_sizes(n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = [n / 4, n / 2, n].iter().map(|&k| k.max(8)).collect();
    s.dedup();
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GeodesicVerdict {
    GeodesicExistsUniqueMinimal,
    Obstructed {
        /// `dim ker T_{φψ̄}`, equal to `dim (Ran P_φ ∩ ker P_ψ)`.
        ran_p_ker_q: usize,
        /// `dim ker T_{ψφ̄}`
        ran_q_ker_p: usize,
    },
    ComponentMismatch {
        index_phi: i64,
        index_psi: i64,
    },
}

impl std::fmt::Display for GeodesicVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeodesicVerdict::GeodesicExistsUniqueMinimal => write!(f, "geodesic exists (unique, minimal)"),
            GeodesicVerdict::Obstructed { ran_p_ker_q, ran_q_ker_p } => write!(f, "obstructed({ran_p_ker_q}, {ran_q_ker_p})"),
            GeodesicVerdict::ComponentMismatch { index_phi, index_psi } => {
                write!(f, "component mismatch: ind φ = {index_phi}, ind ψ = {index_psi}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentRoute {
    Logarithm,
    Halmos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PLength {
    pub p: SchattenP,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicReport {
    pub verdict: GeodesicVerdict,
    pub n: usize,
    pub pad: usize,
    pub bandwidth: usize,
    pub halmos_dims: HalmosDims,
    pub principal_angles: Vec<f64>,
    /// `||P_φ - P_ψ||`
    pub distance: f64,
    pub route: Option<ExponentRoute>,
    pub exponent_spectrum: Option<Vec<f64>>,
    pub length_op: Option<f64>,
    pub length_p: Vec<PLength>,
    /// `γ(T_{φψ̄})`
    pub gamma: Option<f64>,
    /// `| ||X|| - arccos γ |`
    pub length_identity_residual: Option<f64>,
    pub endpoint_residual: Option<f64>,
    pub codiagonality: Option<Codiagonality>,
    /// `||X_log - X_halmos||` when both routes apply.
    pub two_route_difference: Option<f64>,
    /// Sweep of `T_{φψ̄}`.
    pub sweep_forward: KernelSweep,
    /// Sweep of `T_{ψφ̄}`.
    pub sweep_backward: KernelSweep,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub exponent: Option<CMat>,
    #[serde(skip)]
    pub start: CMat,
    #[serde(skip)]
    pub end: CMat,
}

impl GeodesicReport {
    pub fn exists(&self) -> bool {
        self.verdict == GeodesicVerdict::GeodesicExistsUniqueMinimal
    }

    pub fn path(&self, samples: usize) -> Result<GeodesicPath> {
        let x = self.exponent.as_ref().ok_or_else(|| {
            HgeoError::Precondition("no geodesic exponent: the pair is obstructed".into())
        })?;
        geodesic_path(x, &self.start, samples)
    }
}

/// Decides whether `P_φ` and `P_ψ` are joined by a unique minimal geodesic and builds it.
pub fn geodesic_between(phi: &SymbolExpr, psi: &SymbolExpr, opts: &GeodesicOptions) -> Result<GeodesicReport> {
    let tol = &opts.tol;
    let n = opts.n;
    let f = unimodular_series(phi, opts.bandwidth(), tol)?;
    let g = unimodular_series(psi, opts.bandwidth(), tol)?;
    let sigma = f.mul(&g.conj()).trimmed(TRIM);
    let sizes = opts.sizes();
    let (fw, bw) = rayon::join(
        || kernel_sweep(&sigma, &sizes, tol),
        || kernel_sweep(&sigma.conj(), &sizes, tol),
    );
    let (sweep_forward, sweep_backward) = (fw?, bw?);

    let pad = opts.pad.unwrap_or(f.bandwidth().max(g.bandwidth()).max(n / 4));
    let p = projection_onto(&f, n, pad, tol)?.matrix;
    let q = projection_onto(&g, n, pad, tol)?.matrix;
    let halmos = halmos_decompose(&p, &q, tol.cluster)?;
    let mut warnings = halmos.warnings.clone();
    let hd = halmos.dims;

    let detected = |s: &KernelSweep| match s.verdict {
        KernelVerdict::Detected(d) => Some(d),
        _ => None,
    };
    for (name, s) in [("T_{φψ̄}", &sweep_forward), ("T_{ψφ̄}", &sweep_backward)] {
        if s.verdict == KernelVerdict::Inconclusive {
            warnings.push(format!("kernel sweep of {name} is inconclusive"));
        }
    }
    let (kf, kb) = (detected(&sweep_forward), detected(&sweep_backward));
    if kf.unwrap_or(0) != hd.ran_p_ker_q || kb.unwrap_or(0) != hd.ran_q_ker_p {
        warnings.push(format!(
            "kernel sweeps ({}, {}) disagree with Halmos dimensions ({}, {})",
            kf.unwrap_or(0),
            kb.unwrap_or(0),
            hd.ran_p_ker_q,
            hd.ran_q_ker_p
        ));
    }
    let obstructed = halmos.is_obstructed() || kf.is_some() || kb.is_some();

    let gamma = spectral_summary(&toeplitz_tall(&sigma, n), tol.kernel)?.gamma;
    let mut report = GeodesicReport {
        verdict: GeodesicVerdict::GeodesicExistsUniqueMinimal,
        n,
        pad,
        bandwidth: f.bandwidth().max(g.bandwidth()),
        halmos_dims: hd,
        principal_angles: halmos.angles.clone(),
        distance: halmos.distance(),
        route: None,
        exponent_spectrum: None,
        length_op: None,
        length_p: vec![],
        gamma,
        length_identity_residual: None,
        endpoint_residual: None,
        codiagonality: None,
        two_route_difference: None,
        sweep_forward,
        sweep_backward,
        warnings,
        exponent: None,
        start: CMat::zeros(0, 0),
        end: CMat::zeros(0, 0),
    };
    if obstructed {
        report.verdict = GeodesicVerdict::Obstructed {
            ran_p_ker_q: kf.unwrap_or(hd.ran_p_ker_q),
            ran_q_ker_p: kb.unwrap_or(hd.ran_q_ker_p),
        };
        report.start = p;
        report.end = q;
        return Ok(report);
    }

    let x_halmos = exponent_via_halmos(&halmos)?;
    let (x, route) = match exponent_via_log(&p, &q, tol) {
        Ok(x_log) => {
            report.two_route_difference = Some(hermitian_norm(&(&x_log - &x_halmos))?);
            (x_log, ExponentRoute::Logarithm)
        }
        Err(HgeoError::LogRouteRefused { .. }) => (x_halmos, ExponentRoute::Halmos),
        Err(e) => return Err(e),
    };
    let spectrum = hermitian_eigenvalues(&x)?;
    let length = schatten_of_spectrum(&spectrum, SchattenP::Inf);
    report.length_op = Some(length);
    report.length_p = opts
        .p_values
        .iter()
        .map(|&p| PLength {
            p,
            length: schatten_of_spectrum(&spectrum, p),
        })
        .collect();
    report.length_identity_residual = gamma.map(|g| (length - g.clamp(0.0, 1.0).acos()).abs());
    report.endpoint_residual = Some(endpoint_residual(&x, &p, &q)?);
    report.codiagonality = Some(codiagonality(&x, &p, &q)?);
    if length > std::f64::consts::FRAC_PI_2 + 1e-10 {
        report.warnings.push(format!("exponent norm {length} exceeds π/2"));
    }
    if report.endpoint_residual.unwrap() > tol.endpoint {
        report
            .warnings
            .push(format!("endpoint residual {:.3e} above tolerance", report.endpoint_residual.unwrap()));
    }
    report.route = Some(route);
    report.exponent_spectrum = Some(spectrum);
    report.exponent = Some(x);
    report.start = p;
    report.end = q;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorBound {
    pub p: SchattenP,
    /// `||[M_θ, P_+]||_p`
    pub lhs: f64,
    /// Length `||X||_p` of the geodesic from `P_φ` to `P_ψ`.
    pub rhs: f64,
    /// `max | e^{iθ} - φψ̄ |` on the grid.
    pub argument_defect: f64,
    pub holds: bool,
}

/// Checks `||[M_θ, P_+]||_p ≥ ||X_{φ,ψ}||_p` for a real argument θ of `φψ̄`.
pub fn commutator_bound_check(
    phi: &SymbolExpr,
    psi: &SymbolExpr,
    theta: &TrigSeries,
    p: SchattenP,
    opts: &GeodesicOptions,
) -> Result<CommutatorBound> {
    let tol = &opts.tol;
    let f = unimodular_series(phi, opts.bandwidth(), tol)?;
    let g = unimodular_series(psi, opts.bandwidth(), tol)?;
    let sigma = f.mul(&g.conj());
    let grid = grid_for_bandwidth(sigma.bandwidth().max(theta.bandwidth()).max(64));
    let s = sample_series(&sigma, grid, 0)?;
    let e = sample_series(theta, grid, 0)?.map(|t| Cx::from_polar(1.0, t.re));
    let argument_defect = s
        .values
        .iter()
        .zip(&e.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    if argument_defect > tol.argument {
        return Err(HgeoError::NotAnArgument { defect: argument_defect });
    }
    let mut gopts = opts.clone();
    gopts.p_values = vec![p];
    let report = geodesic_between(phi, psi, &gopts)?;
    if !report.exists() {
        return Err(HgeoError::Precondition(format!(
            "no geodesic joins the pair: {:?}",
            report.verdict
        )));
    }
    let rhs = report.length_p[0].length;
    let lhs = commutator_norm(theta, opts.n.max(theta.bandwidth()), p)?;
    Ok(CommutatorBound {
        p,
        lhs,
        rhs,
        argument_defect,
        holds: lhs >= rhs - 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn series(e: &SymbolExpr) -> TrigSeries {
        unimodular_series(e, 128, &tol()).unwrap()
    }

    fn b(a: f64) -> SymbolExpr {
        SymbolExpr::Blaschke(vec![cx(a, 0.0)])
    }

    fn diag_projection(n: usize, keep: impl Fn(i64) -> bool) -> CMat {
        CMat::from_fn(2 * n + 1, 2 * n + 1, |i, j| {
            if i == j && keep(i as i64 - n as i64) {
                cx(1.0, 0.0)
            } else {
                Cx::default()
            }
        })
    }

    #[test]
    fn projection_of_constant_and_shift() {
        let p = projection_onto(&TrigSeries::constant(cx(1.0, 0.0)), 6, 2, &tol()).unwrap();
        assert_eq!(p.matrix, diag_projection(6, |k| k >= 0));
        let p = projection_onto(&TrigSeries::chi(1), 6, 2, &tol()).unwrap();
        assert!((p.matrix - diag_projection(6, |k| k >= 1)).norm() < 1e-15);
    }

    #[test]
    fn projection_of_blaschke() {
        let f = series(&b(0.5));
        let p = projection_onto(&f, 64, f.bandwidth(), &tol()).unwrap().matrix;
        assert!((&p - p.adjoint()).norm() < 1e-14);
        assert!(idempotency_defect(&p).unwrap() < 1e-8);
        let trace: f64 = (0..p.nrows()).map(|i| p[(i, i)].re).sum();
        assert!((trace - 64.0).abs() < 1e-8);
        assert!(projection_onto(&f, 64, 1, &tol()).is_err());
        let rough = TrigSeries::from_terms(&[(0, cx(1.0, 0.0)), (1, cx(0.5, 0.0))]);
        assert!(matches!(
            projection_onto(&rough, 8, 2, &tol()),
            Err(HgeoError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn halmos_equal_projections() {
        let f = series(&b(0.5));
        let p = projection_onto(&f, 32, f.bandwidth(), &tol()).unwrap().matrix;
        let h = halmos_decompose(&p, &p, 1e-6).unwrap();
        assert_eq!(h.dims.as_tuple(), (0, 0, 32, 33, 0));
        assert!(exponent_via_halmos(&h).unwrap().norm() < 1e-15);
        assert!(exponent_via_log(&p, &p, &tol()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn halmos_complementary() {
        let p = diag_projection(5, |k| k >= 0);
        let q = diag_projection(5, |k| k < 0);
        let h = halmos_decompose(&p, &q, 1e-6).unwrap();
        assert_eq!(h.dims.as_tuple(), (6, 5, 0, 0, 0));
        assert!(matches!(
            exponent_via_halmos(&h),
            Err(HgeoError::Obstruction { ran_p_ker_q: 6, ran_q_ker_p: 5 })
        ));
        assert!(matches!(exponent_via_log(&p, &q, &tol()), Err(HgeoError::LogRouteRefused { .. })));
    }

    #[test]
    fn halmos_shift_and_blaschke() {
        let n = 64;
        let (f, g) = (series(&SymbolExpr::Chi(1)), series(&b(0.5)));
        let pad = g.bandwidth();
        let p = projection_onto(&f, n, pad, &tol()).unwrap().matrix;
        let q = projection_onto(&g, n, pad, &tol()).unwrap().matrix;
        let h = halmos_decompose(&p, &q, 1e-6).unwrap();
        let d = h.dims;
        assert_eq!((d.ran_p_ker_q, d.ran_q_ker_p, d.generic), (0, 0, 2));
        assert!((h.angles[0] - (0.5f64).asin()).abs() < 1e-12);
        let xh = exponent_via_halmos(&h).unwrap();
        let xl = exponent_via_log(&p, &q, &tol()).unwrap();
        assert!(hermitian_norm(&(&xh - &xl)).unwrap() < 1e-10);
        let ev = hermitian_eigenvalues(&xh).unwrap();
        assert!((ev[0] + PI / 6.0).abs() < 1e-12 && (ev[ev.len() - 1] - PI / 6.0).abs() < 1e-12);
        assert!(endpoint_residual(&xh, &p, &q).unwrap() < 1e-12);
        assert!(codiagonality(&xh, &p, &q).unwrap().max() < 1e-12);
    }

    #[test]
    fn obstructed_pair() {
        let p = diag_projection(6, |k| k >= 0);
        let q = diag_projection(6, |k| k >= 1);
        let h = halmos_decompose(&p, &q, 1e-6).unwrap();
        assert_eq!(h.dims.as_tuple(), (1, 0, 6, 6, 0));
        let r = geodesic_between(&SymbolExpr::Chi(0), &SymbolExpr::Chi(1), &GeodesicOptions::new(32)).unwrap();
        assert_eq!(
            r.verdict,
            GeodesicVerdict::Obstructed {
                ran_p_ker_q: 1,
                ran_q_ker_p: 0
            }
        );
        assert!(r.sweep_forward.rows.iter().all(|row| row.kernel_dim == 1));
        assert!(r.path(4).is_err());
    }

    #[test]
    fn geodesic_to_itself() {
        let e = b(0.5);
        let r = geodesic_between(&e, &e, &GeodesicOptions::new(32)).unwrap();
        assert!(r.exists());
        assert!(r.length_op.unwrap() < 1e-10);
        assert_eq!(r.halmos_dims.generic, 0);
    }

    #[test]
    fn geodesic_shift_blaschke_small() {
        let mut o = GeodesicOptions::new(64);
        o.p_values = vec![SchattenP::Finite(2.0), SchattenP::Inf];
        let r = geodesic_between(&SymbolExpr::Chi(1), &b(0.6), &o).unwrap();
        assert!(r.exists());
        assert_eq!(r.route, Some(ExponentRoute::Logarithm));
        assert!((r.length_op.unwrap() - 0.6f64.asin()).abs() < 1e-8);
        assert!((r.gamma.unwrap() - 0.8).abs() < 1e-8);
        assert!((r.length_p[0].length - 2f64.sqrt() * 0.6f64.asin()).abs() < 1e-8);
        assert!(r.two_route_difference.unwrap() < 1e-8);
        assert!(r.length_identity_residual.unwrap() < 1e-8);
        assert!(r.codiagonality.unwrap().max() < 1e-8);
    }

    #[test]
    fn path_properties() {
        let r = geodesic_between(&SymbolExpr::Chi(1), &b(0.5), &GeodesicOptions::new(24)).unwrap();
        let path = r.path(64).unwrap();
        let d: Vec<f64> = path.samples.iter().map(|s| s.dist_to_start).collect();
        assert!(d.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(path.samples.iter().all(|s| s.idempotency_defect < 1e-8));
        assert!(path.samples[63].dist_to_end < 1e-14);
        let x = r.length_op.unwrap();
        assert!((path.chord_length().unwrap() - x).abs() < 0.01 * x);
        let mid = path.projection_at(1.0);
        assert!(hermitian_norm(&(mid - &r.end)).unwrap() < 1e-10);
        let still = geodesic_path(&CMat::zeros(3, 3), &diag_projection(1, |k| k >= 0), 5).unwrap();
        assert!(still.samples.iter().all(|s| s.dist_to_start == 0.0));
    }

    #[test]
    fn principal_argument_recovers_cosine() {
        let theta = TrigSeries::real_from_cos_sin(0.0, &[2.0], &[]);
        let e = series(&SymbolExpr::ExpI(theta.clone()));
        let back = principal_argument(&e, 64, &tol()).unwrap();
        assert!(back.add(&theta.scale(cx(-1.0, 0.0))).sup_coeff() < 1e-10);
        assert!(principal_argument(&TrigSeries::chi(1), 16, &tol()).is_err());
    }

    #[test]
    fn commutator_bound_examples() {
        let o = GeodesicOptions::new(32);
        let one = SymbolExpr::Chi(0);
        let c = commutator_bound_check(&one, &one, &TrigSeries::zero(0), SchattenP::Inf, &o).unwrap();
        assert!(c.holds && c.lhs == 0.0);
        let theta = TrigSeries::real_from_cos_sin(0.0, &[2.0], &[]);
        let c = commutator_bound_check(&SymbolExpr::ExpI(theta.clone()), &one, &theta, SchattenP::Inf, &o).unwrap();
        assert!(c.holds && (c.lhs - 1.0).abs() < 1e-12, "{c:?}");
        let wrong = TrigSeries::real_from_cos_sin(0.0, &[1.0], &[]);
        assert!(matches!(
            commutator_bound_check(&SymbolExpr::ExpI(theta), &one, &wrong, SchattenP::Inf, &o),
            Err(HgeoError::NotAnArgument { .. })
        ));
    }

    #[test]
    fn angle_length_matches_example() {
        let f = series(&SymbolExpr::Chi(1));
        let g = series(&b(0.5));
        let sigma = f.mul(&g.conj());
        for p in [1.0, 2.0, 4.0] {
            let l = angle_length(&sigma, 64, SchattenP::Finite(p), &tol()).unwrap();
            assert!((l - 2f64.powf(1.0 / p) * PI / 6.0).abs() < 1e-8);
        }
        assert!(FRAC_PI_2 > PI / 6.0);
    }
}
