//! Functions on the unit circle as centered Fourier coefficient arrays,
//! uniform sampling, and the Fourier multipliers acting on them
//! (Riesz projection, harmonic conjugation, Poisson extension).

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{HgeoError, Result};
use crate::linalg::{cx, Cx};

/// Finite Fourier series `Σ_{|k| ≤ m} c_k e^{ikt}`.
///
/// Coefficients are stored from `c_{-m}` up to `c_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigSeries {
    coeffs: Vec<Cx>,
}

impl TrigSeries {
    /// Builds a series from `c_{-m}..c_m`; the length must be odd and every entry finite.
    pub fn new(coeffs: Vec<Cx>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(HgeoError::InvalidParameter(format!(
                "centered coefficient array needs odd length, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(HgeoError::InvalidParameter(
                "non-finite Fourier coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(bandwidth: usize) -> Self {
        Self {
            coeffs: vec![Cx::default(); 2 * bandwidth + 1],
        }
    }

    pub fn constant(c: Cx) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The character `χ_k(e^{it}) = e^{ikt}`.
    pub fn chi(k: i64) -> Self {
        let m = k.unsigned_abs() as usize;
        let mut s = Self::zero(m);
        s.set(k, cx(1.0, 0.0));
        s
    }

    /// Builds a series from `(k, c_k)` pairs.
    pub fn from_terms(terms: &[(i64, Cx)]) -> Self {
        let m = terms.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut s = Self::zero(m);
        for &(k, c) in terms {
            s.set(k, s.coeff(k) + c);
        }
        s
    }

    /// Real series `a_0 + Σ a_k cos(kt) + Σ b_k sin(kt)`, frequencies starting at 1.
    pub fn real_from_cos_sin(a0: f64, cos: &[f64], sin: &[f64]) -> Self {
        let m = cos.len().max(sin.len());
        let mut s = Self::zero(m);
        s.set(0, cx(a0, 0.0));
        for k in 1..=m {
            let a = cos.get(k - 1).copied().unwrap_or(0.0);
            let b = sin.get(k - 1).copied().unwrap_or(0.0);
            // a cos + b sin = (a - ib)/2 e^{ikt} + (a + ib)/2 e^{-ikt}
            s.set(k as i64, cx(a / 2.0, -b / 2.0));
            s.set(-(k as i64), cx(a / 2.0, b / 2.0));
        }
        s
    }

    pub fn bandwidth(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// `c_k`, zero outside the stored band.
    pub fn coeff(&self, k: i64) -> Cx {
        let m = self.bandwidth() as i64;
        if k.abs() > m {
            Cx::default()
        } else {
            self.coeffs[(k + m) as usize]
        }
    }

    /// Sets `c_k`, widening the band if needed.
    pub fn set(&mut self, k: i64, c: Cx) {
        let need = k.unsigned_abs() as usize;
        if need > self.bandwidth() {
            *self = self.resized(need);
        }
        let m = self.bandwidth() as i64;
        self.coeffs[(k + m) as usize] = c;
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    /// Same function with band `m`, padding with zeros or truncating.
    pub fn resized(&self, m: usize) -> Self {
        let mut out = Self::zero(m);
        let lim = m.min(self.bandwidth()) as i64;
        for k in -lim..=lim {
            out.coeffs[(k + m as i64) as usize] = self.coeff(k);
        }
        out
    }

    /// Drops outer coefficients with `|c_k| <= rel_tol * max|c|`.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let scale = self.sup_coeff();
        if scale == 0.0 {
            return Self::zero(0);
        }
        let m = self.bandwidth() as i64;
        let keep = (0..=m)
            .rev()
            .find(|&k| self.coeff(k).norm() > rel_tol * scale || self.coeff(-k).norm() > rel_tol * scale)
            .unwrap_or(0);
        self.resized(keep as usize)
    }

    pub fn sup_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    /// Coefficients of the pointwise conjugate: `c_k ↦ conj(c_{-k})`.
    pub fn conj(&self) -> Self {
        let m = self.bandwidth() as i64;
        let mut out = Self::zero(m as usize);
        for k in -m..=m {
            out.coeffs[(k + m) as usize] = self.coeff(-k).conj();
        }
        out
    }

    /// Pointwise product (exact convolution; bandwidths add).
    pub fn mul(&self, other: &Self) -> Self {
        let (ma, mb) = (self.bandwidth() as i64, other.bandwidth() as i64);
        let m = ma + mb;
        let mut out = Self::zero(m as usize);
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Cx::default() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.bandwidth().max(other.bandwidth());
        let mut out = self.resized(m);
        for k in -(m as i64)..=(m as i64) {
            let c = out.coeff(k) + other.coeff(k);
            out.set(k, c);
        }
        out
    }

    pub fn scale(&self, s: Cx) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `max_k |c_{-k} - conj(c_k)|`, zero exactly for real-valued functions.
    pub fn reality_defect(&self) -> f64 {
        let m = self.bandwidth() as i64;
        (0..=m).fold(0.0f64, |d, k| d.max((self.coeff(-k) - self.coeff(k).conj()).norm()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect() <= tol
    }

    /// Projects onto the real-valued series.
    pub fn real_part(&self) -> Self {
        self.add(&self.conj()).scale(cx(0.5, 0.0))
    }

    /// Value at `e^{it}`.
    pub fn eval(&self, t: f64) -> Cx {
        let m = self.bandwidth() as i64;
        (-m..=m).map(|k| self.coeff(k) * Cx::from_polar(1.0, k as f64 * t)).sum()
    }

    /// Value of the harmonic (Poisson) extension at `z` in the closed disk.
    pub fn eval_disk(&self, z: Cx) -> Cx {
        let r = z.norm();
        let t = z.arg();
        let m = self.bandwidth() as i64;
        (-m..=m)
            .map(|k| self.coeff(k) * Cx::from_polar(r.powi(k.abs() as i32), k as f64 * t))
            .sum()
    }

    /// `Σ |c_k|²`, the squared L² norm.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_{k<0} |c_k|²`.
    pub fn negative_energy(&self) -> f64 {
        let m = self.bandwidth() as i64;
        (1..=m).map(|k| self.coeff(-k).norm_sqr()).sum()
    }
}

/// Samples `values[j] = f(e^{i t_j})` at `t_j = 2π (j + offset/2) / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub values: Vec<Cx>,
    /// 0 for the standard grid, 1 for the half-step shifted grid.
    pub offset: u8,
}

impl GridSamples {
    pub fn new(values: Vec<Cx>, offset: u8) -> Result<Self> {
        check_grid_size(values.len())?;
        Ok(Self { values, offset })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, j: usize) -> f64 {
        grid_point(j, self.values.len(), self.offset)
    }

    pub fn map(&self, f: impl Fn(Cx) -> Cx) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            offset: self.offset,
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Cx, Cx) -> Cx) -> Result<Self> {
        if self.len() != other.len() || self.offset != other.offset {
            return Err(HgeoError::InvalidParameter("mismatched sampling grids".into()));
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            offset: self.offset,
        })
    }

    /// Grid minimum of `|f|` and its location.
    pub fn min_modulus(&self) -> (f64, f64) {
        let (j, v) = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, f64::INFINITY));
        (v, self.point(j))
    }

    /// `max_j | |f_j| - 1 |`.
    pub fn unimodular_defect(&self) -> f64 {
        self.values.iter().fold(0.0f64, |d, v| d.max((v.norm() - 1.0).abs()))
    }

    /// `(1/N) Σ |f_j|²`.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.len() as f64
    }
}

pub fn grid_point(j: usize, n: usize, offset: u8) -> f64 {
    2.0 * PI * (j as f64 + 0.5 * offset as f64) / n as f64
}

fn check_grid_size(n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(HgeoError::InvalidParameter(format!(
            "grid size must be a power of two >= 4, got {n}"
        )));
    }
    Ok(())
}

/// Samples a series on the N-point grid by an inverse FFT.
pub fn sample_series(s: &TrigSeries, n: usize, offset: u8) -> Result<GridSamples> {
    check_grid_size(n)?;
    let m = s.bandwidth();
    if n < 2 * m + 1 {
        return Err(HgeoError::InvalidParameter(format!(
            "grid of {n} points aliases a series of bandwidth {m}"
        )));
    }
    let mut buf = vec![Cx::default(); n];
    for k in -(m as i64)..=(m as i64) {
        let shift = Cx::from_polar(1.0, PI * k as f64 * offset as f64 / n as f64);
        buf[k.rem_euclid(n as i64) as usize] = s.coeff(k) * shift;
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    GridSamples::new(buf, offset)
}

/// `c_k = (1/N) Σ_j values[j] e^{-ik t_j}` for `|k| <= m`.
pub fn fourier_coeffs(samples: &GridSamples, m: usize) -> Result<TrigSeries> {
    let n = samples.len();
    if n < 2 * m + 1 {
        return Err(HgeoError::InvalidParameter(format!(
            "grid of {n} points cannot resolve bandwidth {m}"
        )));
    }
    let mut buf = samples.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mut out = TrigSeries::zero(m);
    let scale = 1.0 / n as f64;
    for k in -(m as i64)..=(m as i64) {
        let shift = Cx::from_polar(1.0, -PI * k as f64 * samples.offset as f64 / n as f64);
        out.set(k, buf[k.rem_euclid(n as i64) as usize] * shift * scale);
    }
    Ok(out)
}

/// Relative L² energy of the sampled function outside `|k| <= m`.
pub fn leakage_beyond(samples: &GridSamples, m: usize) -> Result<f64> {
    let full = fourier_coeffs(samples, samples.len() / 2 - 1)?;
    let total = full.energy();
    if total == 0.0 {
        return Ok(0.0);
    }
    let inside = full.resized(m).energy();
    Ok(((total - inside).max(0.0) / total).sqrt())
}

/// `P_+`: keeps `c_k` for `k >= 0`.
pub fn riesz_project(s: &TrigSeries) -> TrigSeries {
    let mut out = s.clone();
    for k in 1..=s.bandwidth() as i64 {
        out.set(-k, Cx::default());
    }
    out
}

/// Harmonic conjugate `ũ`: multiplier `-i sgn(k)`, zero mean.
pub fn harmonic_conjugate(u: &TrigSeries, tol: f64) -> Result<TrigSeries> {
    let defect = u.reality_defect();
    if defect > tol * u.sup_coeff().max(1.0) {
        return Err(HgeoError::NotReal { defect });
    }
    let m = u.bandwidth() as i64;
    let mut out = TrigSeries::zero(m as usize);
    for k in 1..=m {
        out.set(k, u.coeff(k) * cx(0.0, -1.0));
        out.set(-k, u.coeff(-k) * cx(0.0, 1.0));
    }
    Ok(out)
}

/// Radial slice `φ_r` of the harmonic extension: `c_k ↦ r^{|k|} c_k`.
pub fn poisson_extend(s: &TrigSeries, r: f64) -> Result<TrigSeries> {
    if !(r > 0.0 && r < 1.0) {
        return Err(HgeoError::InvalidParameter(format!(
            "Poisson radius must lie in (0, 1), got {r}"
        )));
    }
    let m = s.bandwidth() as i64;
    let mut out = TrigSeries::zero(m as usize);
    for k in -m..=m {
        out.set(k, s.coeff(k) * r.powi(k.abs() as i32));
    }
    Ok(out)
}
