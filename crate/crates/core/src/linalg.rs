//! Thin layer over nalgebra for the dense complex matrix work.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{HgeoError, Result};

pub type Cx = Complex64;
pub type CMat = DMatrix<Cx>;

const EIG_MAX_ITER: usize = 10_000;
const SVD_MAX_ITER: usize = 10_000;

pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// Exponent of a Schatten norm; `Inf` is the operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenP {
    Finite(f64),
    Inf,
}

impl SchattenP {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(SchattenP::Inf)
        } else if p.is_finite() && p >= 1.0 {
            Ok(SchattenP::Finite(p))
        } else {
            Err(HgeoError::InvalidParameter(format!(
                "Schatten exponent must lie in [1, inf], got {p}"
            )))
        }
    }

    /// `2^{1/p}`, which is 1 for the operator norm.
    pub fn two_root(self) -> f64 {
        match self {
            SchattenP::Finite(p) => 2f64.powf(1.0 / p),
            SchattenP::Inf => 1.0,
        }
    }

    pub fn label(self) -> String {
        match self {
            SchattenP::Finite(p) => format!("{p}"),
            SchattenP::Inf => "inf".to_string(),
        }
    }
}

impl std::str::FromStr for SchattenP {
    type Err = HgeoError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(SchattenP::Inf);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| HgeoError::InvalidParameter(format!("bad Schatten exponent '{s}'")))?;
        SchattenP::new(p)
    }
}

impl Serialize for SchattenP {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

/// `ℓ^p` norm of a list of nonnegative values.
pub fn lp_norm(values: &[f64], p: SchattenP) -> f64 {
    match p {
        SchattenP::Inf => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        SchattenP::Finite(p) => {
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return 0.0;
            }
            let sum: f64 = values.iter().map(|v| (v.abs() / scale).powf(p)).sum();
            scale * sum.powf(1.0 / p)
        }
    }
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    /// Rebuild `f(H)` from the decomposition.
    pub fn apply(&self, f: impl Fn(f64) -> Cx) -> CMat {
        let d: Vec<Cx> = self.values.iter().map(|&v| f(v)).collect();
        let mut scaled = self.vectors.clone();
        for (j, dj) in d.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= dj;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Columns whose eigenvalue satisfies `pred`.
    pub fn columns_where(&self, pred: impl Fn(f64) -> bool) -> CMat {
        let idx: Vec<usize> = (0..self.values.len()).filter(|&j| pred(self.values[j])).collect();
        select_columns(&self.vectors, &idx)
    }
}

pub fn select_columns(m: &CMat, idx: &[usize]) -> CMat {
    let mut out = CMat::zeros(m.nrows(), idx.len());
    for (c, &j) in idx.iter().enumerate() {
        out.set_column(c, &m.column(j));
    }
    out
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn hermitian_eigen(h: &CMat) -> Result<HermitianEigen> {
    let n = h.nrows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: CMat::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(hermitian_part(h), f64::EPSILON, EIG_MAX_ITER).ok_or_else(
        || HgeoError::NonConvergence {
            what: "Hermitian eigensolver".into(),
            iterations: EIG_MAX_ITER,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = select_columns(&eig.eigenvectors, &order);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    if h.nrows() == 0 {
        return Ok(vec![]);
    }
    let eig = SymmetricEigen::try_new(hermitian_part(h), f64::EPSILON, EIG_MAX_ITER);
    let eig = eig.ok_or_else(|| HgeoError::NonConvergence {
        what: "Hermitian eigensolver".into(),
        iterations: EIG_MAX_ITER,
    })?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Operator norm of a Hermitian matrix.
pub fn hermitian_norm(h: &CMat) -> Result<f64> {
    let v = hermitian_eigenvalues(h)?;
    Ok(v.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Singular values, descending, via Golub–Kahan bidiagonalization.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(vec![]);
    }
    let svd = SVD::try_new(a.clone(), false, false, f64::EPSILON, SVD_MAX_ITER).ok_or_else(|| {
        HgeoError::NonConvergence {
            what: "singular value decomposition".into(),
            iterations: SVD_MAX_ITER,
        }
    })?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

pub fn operator_norm(a: &CMat) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Eigenvalues of a general complex matrix from the diagonal of its Schur form.
pub fn general_eigenvalues(a: &CMat) -> Result<Vec<Cx>> {
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, EIG_MAX_ITER).ok_or_else(|| {
        HgeoError::NonConvergence {
            what: "Schur decomposition".into(),
            iterations: EIG_MAX_ITER,
        }
    })?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Orthonormal basis of the range of a (numerical) projection.
pub fn projection_range(p: &CMat) -> Result<CMat> {
    let eig = hermitian_eigen(p)?;
    Ok(eig.columns_where(|v| v > 0.5))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn to_dvector(v: &[Cx]) -> DVector<Cx> {
    DVector::from_column_slice(v)
}
