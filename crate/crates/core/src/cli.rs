//! Command-line front end: `hgeo symbol | index | geodesic | sweep | classify`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::circle_fourier::TrigSeries;
use crate::config::{grid_for_bandwidth, Discretization, Tolerances};
use crate::error::{HgeoError, Result};
use crate::index_classify::{
    boundary_series, classify_subspace, hankel_rows, index_symbol, schatten_rows, ClassificationReport, Consensus,
    IndexOptions, IndexReport, Outcome,
};
use crate::linalg::SchattenP;
use crate::report::{envelope, to_json_string, write_hankel_csv, write_path_csv, write_sweep_csv};
use crate::symbols::{inner_outer_factorize, parse_symbol, sample_symbol, sample_symbol_auto, InnerData, SymbolExpr};
use crate::testgen::SymbolGen;
use crate::toeplitz_ops::{essential_invertibility, kernel_sweep, Invertibility, KernelSweep};
use crate::two_projections::{
    default_sizes, geodesic_between, unimodular_series, GeodesicOptions, GeodesicReport, TRIM,
};

#[derive(Debug, Parser)]
#[command(name = "hgeo", version, about = "Operator geometry of shift-invariant subspaces of L² of the circle")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Truncation size n.
    #[arg(short = 'n', global = true, default_value_t = 128)]
    pub n: usize,
    /// Padding of the L² window beyond H²(n).
    #[arg(long, global = true)]
    pub pad: Option<usize>,
    /// Sampling grid size (power of two).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Coefficient bandwidth for sampled symbols.
    #[arg(long, global = true)]
    pub bandwidth: Option<usize>,
    /// Sweep sizes, strictly increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Schatten exponents, e.g. 1,2,inf.
    #[arg(long = "p", global = true, value_delimiter = ',')]
    pub p: Option<Vec<SchattenP>>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Write the main table as CSV here (`-` for stdout).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Relative singular-value threshold for numerical kernels
    #[arg(long, global = true)]
    pub tol_kernel: Option<f64>,
    /// Eigenvalue clustering radius in the two-projection analysis
    #[arg(long, global = true)]
    pub tol_cluster: Option<f64>,
    /// Seed for randomly generated test symbols.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients, unimodularity, invertibility and inner-outer data of a symbol.
    Symbol {
        dsl: Option<String>,
        /// Number of coefficients to tabulate.
        #[arg(long, default_value_t = 8)]
        coeffs: usize,
        /// Fixed grid offset (0 or 1); disables the automatic shift off atoms.
        #[arg(long)]
        at: Option<u8>,
        /// Use a seeded random Blaschke product with this many zeros instead of a DSL string.
        #[arg(long, conflicts_with = "dsl")]
        random_blaschke: Option<usize>,
    },
    /// Winding number by quadrature, Fourier, Toeplitz and radial methods.
    Index { dsl: String },
    /// Geodesic between φH² and ψH².
    Geodesic {
        phi: String,
        psi: String,
        /// Samples of the path written to --csv.
        #[arg(long, default_value_t = 17)]
        samples: usize,
    },
    /// Kernel sweep of T_φ (or T_{φψ̄} for a pair), or Hankel-Schatten sweep.
    Sweep {
        dsl: String,
        psi: Option<String>,
        #[arg(long, value_enum, default_value_t = SweepKind::Kernel)]
        kind: SweepKind,
    },
    /// Restricted-Grassmannian component and Schatten refinements of φH².
    Classify { dsl: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Kernel,
    Hankel,
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub pad: Option<usize>,
    pub grid: Option<usize>,
    pub bandwidth: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub p_values: Option<Vec<SchattenP>>,
    pub tol: Tolerances,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        if g.n < 8 {
            return Err(HgeoError::InvalidParameter(format!("n = {} must be at least 8", g.n)));
        }
        if let Some(s) = &g.sizes {
            if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) || s[0] < 1 {
                return Err(HgeoError::InvalidParameter(format!("sizes {s:?} must be positive and strictly increasing")));
            }
        }
        if let Some(n) = g.grid {
            if !n.is_power_of_two() {
                return Err(HgeoError::InvalidParameter(format!("grid {n} is not a power of two")));
            }
        }
        let mut tol = Tolerances::default();
        if let Some(t) = g.tol_kernel {
            tol.kernel = t;
        }
        if let Some(t) = g.tol_cluster {
            tol.cluster = t;
        }
        Ok(Self {
            n: g.n,
            pad: g.pad,
            grid: g.grid,
            bandwidth: g.bandwidth,
            sizes: g.sizes.clone(),
            p_values: g.p.clone(),
            tol,
            json: g.json.clone(),
            csv: g.csv.clone(),
            seed: g.seed,
        })
    }

    fn bandwidth(&self) -> usize {
        self.bandwidth.unwrap_or(256)
    }

    fn disc(&self) -> Discretization {
        let m = self.bandwidth();
        Discretization::with_grid(m, self.grid.unwrap_or_else(|| grid_for_bandwidth(m)))
    }

    fn sizes(&self) -> Vec<usize> {
        self.sizes.clone().unwrap_or_else(|| default_sizes(self.n))
    }

    fn p_values(&self, default: &[SchattenP]) -> Vec<SchattenP> {
        self.p_values.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn index_options(&self) -> IndexOptions {
        let d = IndexOptions::default();
        IndexOptions {
            bandwidth: self.bandwidth(),
            sizes: self.sizes.clone().unwrap_or(d.sizes),
            hankel_sizes: self.sizes.clone().unwrap_or(d.hankel_sizes),
            grid: self.grid,
            tol: self.tol.clone(),
            ..d
        }
    }

    pub fn geodesic_options(&self) -> GeodesicOptions {
        GeodesicOptions {
            n: self.n,
            pad: self.pad,
            bandwidth: self.bandwidth,
            sizes: self.sizes.clone(),
            p_values: self.p_values(&[SchattenP::Finite(1.0), SchattenP::Finite(2.0)]),
            tol: self.tol.clone(),
        }
    }
}

fn open_output(path: &PathBuf) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(io::stdout()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

/// Human summary on stdout unless JSON goes to stdout; JSON to `--json`.
fn emit(cfg: &RunConfig, command: &str, input: Value, result: &impl Serialize, summary: &str) -> Result<()> {
    let json_to_stdout = cfg.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if !json_to_stdout {
        print!("{summary}");
    }
    if let Some(path) = &cfg.json {
        let text = to_json_string(&envelope(command, input, result)?)?;
        let mut w = open_output(path)?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRow {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolReport {
    pub symbol: String,
    pub bandwidth: usize,
    pub grid: usize,
    pub coefficients: Vec<CoefficientRow>,
    pub unimodular_defect: f64,
    pub invertibility: Invertibility,
    pub inner: Option<InnerData>,
    /// Outer factor coefficients when an analytic polynomial was factored.
    pub outer: Option<Vec<CoefficientRow>>,
}

fn coefficient_rows(s: &TrigSeries, count: usize, zero: f64) -> Vec<CoefficientRow> {
    let row = |k: i64| CoefficientRow {
        k,
        re: s.coeff(k).re,
        im: s.coeff(k).im,
    };
    let mut rows: Vec<_> = (0..count as i64).map(row).collect();
    let negative: Vec<_> = (1..count as i64).map(|k| row(-k)).collect();
    if negative.iter().any(|r| r.re.hypot(r.im) > zero) {
        rows.extend(negative);
    }
    rows
}

pub fn cmd_symbol(cfg: &RunConfig, e: &SymbolExpr, label: &str, coeffs: usize, at: Option<u8>) -> Result<SymbolReport> {
    let disc = cfg.disc();
    let samples = match at {
        Some(offset) => sample_symbol(e, disc.grid, offset)?,
        None => sample_symbol_auto(e, disc.grid)?,
    };
    let series = e.series(disc)?;
    let zero = cfg.tol.coeff_zero;
    let (inner, outer) = if e.is_structurally_inner() {
        (Some(InnerData::from_symbol(e)?), None)
    } else if let SymbolExpr::Raw(s) = e {
        let m = s.bandwidth() as i64;
        if (1..=m).all(|k| s.coeff(-k).norm() <= zero) && s.sup_coeff() > zero {
            let (i, o) = inner_outer_factorize(s, cfg.tol.root_match)?;
            (Some(i), Some(coefficient_rows(&o, o.bandwidth() + 1, zero)))
        } else {
            (None, None)
        }
    } else {
        (None, None)
    };
    Ok(SymbolReport {
        symbol: label.to_string(),
        bandwidth: disc.bandwidth,
        grid: disc.grid,
        coefficients: coefficient_rows(&series, coeffs, zero),
        unimodular_defect: samples.unimodular_defect(),
        invertibility: essential_invertibility(e, disc, &cfg.tol)?,
        inner,
        outer,
    })
}

fn symbol_summary(r: &SymbolReport) -> String {
    let mut s = format!("symbol {}\n  k  coefficient\n", r.symbol);
    for c in &r.coefficients {
        s += &format!("  {:>3}  {:+.12} {:+.12}i\n", c.k, c.re, c.im);
    }
    s += &format!("unimodular defect {:.3e}\n", r.unimodular_defect);
    s += &match r.invertibility {
        Invertibility::Invertible { ess_inf } => format!("invertible in L^inf, ess inf |φ| ≈ {ess_inf:.6}\n"),
        Invertibility::NotInvertible { min, location } => {
            format!("NOT invertible: |φ| reaches {min:.3e} at t = {location:.6}\n")
        }
    };
    if let Some(i) = &r.inner {
        s += &format!(
            "inner part: {} Blaschke zeros, {} singular atoms, scalar {:.6}{:+.6}i\n",
            i.blaschke_zeros.len(),
            i.singular_atoms.len(),
            i.scalar.re,
            i.scalar.im
        );
    }
    s
}

fn outcome_line<T>(name: &str, o: &Outcome<T>, show: impl Fn(&T) -> String) -> String {
    match o {
        Outcome::Computed(v) => format!("  {name:<16} {}\n", show(v)),
        Outcome::Failed(e) => format!("  {name:<16} failed: {e}\n"),
    }
}

fn index_summary(label: &str, r: &IndexReport) -> String {
    let mut s = format!("index of {label}\n");
    s += &outcome_line("quadrature", &r.quadrature, |q| {
        format!("{} (value {:.9}, grid {})", q.estimate, q.value, q.grid)
    });
    s += &outcome_line("fourier", &r.fourier, |f| {
        format!("{} (Σk|c_k|² = {:.9}, tail {:.2e})", f.nearest, f.value, f.tail_mass)
    });
    s += &outcome_line("toeplitz", &r.toeplitz, |t| {
        let rows: Vec<String> = t
            .rows
            .iter()
            .map(|r| format!("n={}:{}-{}", r.n, r.kernel_conj, r.kernel_phi))
            .collect();
        format!("{} ({})", t.estimate, rows.join(", "))
    });
    for rad in &r.radial {
        s += &outcome_line(&format!("radial r={}", rad.r), &rad.result, |q| q.estimate.to_string());
    }
    s += &match &r.consensus {
        Consensus::Agreed(k) => format!("consensus {k}\n"),
        Consensus::Disagree(_) => "consensus: disagree\n".to_string(),
    };
    s
}

fn geodesic_summary(r: &GeodesicReport) -> String {
    let d = r.halmos_dims;
    let mut s = format!("verdict: {}\n", r.verdict);
    s += &format!(
        "n = {}, pad = {}, bandwidth = {}\nHalmos dims (RanP∩kerQ, RanQ∩kerP, RanP∩RanQ, kerP∩kerQ, generic) = {:?}\n",
        r.n, r.pad, r.bandwidth, d.as_tuple()
    );
    s += &format!("||P - Q|| = {:.12}\n", r.distance);
    if let Some(l) = r.length_op {
        s += &format!("||X|| = {l:.12}\n");
    }
    for pl in &r.length_p {
        s += &format!("||X||_{} = {:.12}\n", pl.p.label(), pl.length);
    }
    if let Some(g) = r.gamma {
        s += &format!("γ(T_φψ̄) = {g:.12}\n");
    }
    if let Some(e) = r.endpoint_residual {
        s += &format!("endpoint residual {e:.3e}\n");
    }
    for w in &r.warnings {
        s += &format!("warning: {w}\n");
    }
    s
}

fn classify_summary(label: &str, r: &ClassificationReport) -> String {
    let mut s = format!("classification of {label}\n");
    s += &match (r.in_gr_res, r.component) {
        (true, Some(k)) => format!("in Gr_res, component {k}\n"),
        _ => "not in Gr_res\n".to_string(),
    };
    if let Some(c) = r.inner_class {
        s += &format!("inner class: {}\n", serde_json::to_value(c).map(|v| v.to_string()).unwrap_or_default());
    }
    s += "  n  s_max(H_θ)  tail(H_θ)  #>1/2  s_max(H_θ̄)  tail(H_θ̄)  #>1/2\n";
    for (a, b) in r.hankel.iter().zip(&r.hankel_conj) {
        s += &format!(
            "  {:>4}  {:.3e}  {:.3e}  {:>4}  {:.3e}  {:.3e}  {:>4}\n",
            a.n, a.s_max, a.tail, a.count_above_half, b.s_max, b.tail, b.count_above_half
        );
    }
    for m in &r.gr_res_p {
        s += &format!("Gr_res,{}: {}\n", m.p.label(), if m.in_gr_res_p { "yes" } else { "no" });
    }
    for w in &r.warnings {
        s += &format!("warning: {w}\n");
    }
    s
}

fn sweep_summary(title: &str, sweep: &KernelSweep) -> String {
    let mut s = format!("{title}\n  n  s_max  s_min  gamma  kernel_dim\n");
    for r in &sweep.rows {
        s += &format!(
            "  {:>4}  {:.12}  {:.12}  {}  {}\n",
            r.n,
            r.s_max,
            r.s_min,
            r.gamma.map(|g| format!("{g:.12}")).unwrap_or_else(|| "-".into()),
            r.kernel_dim
        );
    }
    s += &format!("verdict: {}\n", serde_json::to_value(sweep.verdict).map(|v| v.to_string()).unwrap_or_default());
    s
}

fn parse(text: &str) -> Result<SymbolExpr> {
    parse_symbol(text)
}

pub fn execute(cli: Cli) -> Result<()> {
    let cfg = RunConfig::from_args(&cli.global)?;
    match cli.command {
        Command::Symbol {
            dsl,
            coeffs,
            at,
            random_blaschke,
        } => {
            let (e, label) = match (dsl, random_blaschke) {
                (Some(d), _) => (parse(&d)?, d),
                (None, Some(k)) => {
                    let e = SymbolGen::new(cfg.seed).blaschke(k, 0.1, 0.8);
                    (e.clone(), format!("{e:?}"))
                }
                (None, None) => return Err(HgeoError::InvalidParameter("give a DSL string or --random-blaschke".into())),
            };
            let r = cmd_symbol(&cfg, &e, &label, coeffs, at)?;
            emit(&cfg, "symbol", json!({"symbol": label, "coeffs": coeffs}), &r, &symbol_summary(&r))
        }
        Command::Index { dsl } => {
            let r = index_symbol(&parse(&dsl)?, &cfg.index_options())?;
            emit(&cfg, "index", json!({"symbol": dsl}), &r, &index_summary(&dsl, &r))?;
            r.index().map(|_| ())
        }
        Command::Geodesic { phi, psi, samples } => {
            let opts = cfg.geodesic_options();
            let r = geodesic_between(&parse(&phi)?, &parse(&psi)?, &opts)?;
            if let (Some(path), true) = (&cfg.csv, r.exists()) {
                write_path_csv(open_output(path)?, &r.path(samples)?.samples)?;
            }
            emit(&cfg, "geodesic", json!({"phi": phi, "psi": psi, "n": cfg.n}), &r, &geodesic_summary(&r))
        }
        Command::Sweep { dsl, psi, kind } => cmd_sweep(&cfg, &dsl, psi.as_deref(), kind),
        Command::Classify { dsl } => {
            let p = cfg.p_values(&[SchattenP::Finite(2.0)]);
            let r = classify_subspace(&parse(&dsl)?, &p, &cfg.index_options())?;
            emit(&cfg, "classify", json!({"symbol": dsl}), &r, &classify_summary(&dsl, &r))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HankelSweep {
    pub rows: Vec<crate::index_classify::HankelRow>,
    pub schatten: Vec<(String, Vec<crate::index_classify::SchattenRow>)>,
}

fn cmd_sweep(cfg: &RunConfig, dsl: &str, psi: Option<&str>, kind: SweepKind) -> Result<()> {
    let e = parse(dsl)?;
    let sizes = cfg.sizes();
    let symbol = match psi {
        Some(q) => {
            let m = cfg.bandwidth.unwrap_or_else(|| cfg.geodesic_options().bandwidth());
            let f = unimodular_series(&e, m, &cfg.tol)?;
            let g = unimodular_series(&parse(q)?, m, &cfg.tol)?;
            f.mul(&g.conj()).trimmed(TRIM)
        }
        None => boundary_series(&e, &cfg.index_options())?,
    };
    let input = json!({"phi": dsl, "psi": psi, "sizes": sizes});
    match kind {
        SweepKind::Kernel => {
            let sweep = kernel_sweep(&symbol, &sizes, &cfg.tol)?;
            if let Some(path) = &cfg.csv {
                write_sweep_csv(open_output(path)?, &sweep.rows)?;
            }
            let title = match psi {
                Some(q) => format!("kernel sweep of T_{{φψ̄}}, φ = {dsl}, ψ = {q}"),
                None => format!("kernel sweep of T_φ, φ = {dsl}"),
            };
            emit(cfg, "sweep", input, &sweep, &sweep_summary(&title, &sweep))
        }
        SweepKind::Hankel => {
            let rows = hankel_rows(&symbol, &sizes)?;
            let schatten = cfg
                .p_values(&[SchattenP::Finite(2.0)])
                .into_iter()
                .map(|p| Ok((p.label(), schatten_rows(&symbol, &sizes, p)?)))
                .collect::<Result<Vec<_>>>()?;
            if let Some(path) = &cfg.csv {
                write_hankel_csv(open_output(path)?, &rows, &schatten)?;
            }
            let mut s = format!("Hankel sweep of {dsl}\n  n  s_max  tail");
            for (p, _) in &schatten {
                s += &format!("  ||H||_{p}");
            }
            s += "\n";
            for (i, r) in rows.iter().enumerate() {
                s += &format!("  {:>4}  {:.6e}  {:.6e}", r.n, r.s_max, r.tail);
                for (_, sr) in &schatten {
                    s += &format!("  {:.6e}", sr[i].norm);
                }
                s += "\n";
            }
            emit(cfg, "sweep", input, &HankelSweep { rows, schatten }, &s)
        }
    }
}

/// Parses arguments, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("hgeo").chain(args.iter().copied())).unwrap();
        RunConfig::from_args(&cli.global).unwrap()
    }

    #[test]
    fn global_flags_parse() {
        let c = cfg(&["-n", "64", "--sizes", "8,16,32", "--p", "1,2,inf", "--tol-kernel", "1e-9", "index", "chi:1"]);
        assert_eq!(c.n, 64);
        assert_eq!(c.sizes, Some(vec![8, 16, 32]));
        assert_eq!(c.p_values.unwrap()[2], SchattenP::Inf);
        assert_eq!(c.tol.kernel, 1e-9);
    }

    #[test]
    fn config_invariants() {
        let bad = |args: &[&str]| {
            let cli = Cli::try_parse_from(std::iter::once("hgeo").chain(args.iter().copied())).unwrap();
            RunConfig::from_args(&cli.global).is_err()
        };
        assert!(bad(&["-n", "4", "index", "chi:1"]));
        assert!(bad(&["--sizes", "16,8", "index", "chi:1"]));
        assert!(bad(&["--grid", "1000", "index", "chi:1"]));
    }

    #[test]
    fn blaschke_coefficient_table() {
        let e = parse_symbol("blaschke:[0.5]").unwrap();
        let r = cmd_symbol(&cfg(&["symbol", "x"]), &e, "blaschke:[0.5]", 8, None).unwrap();
        let re: Vec<f64> = r.coefficients.iter().map(|c| c.re).take(3).collect();
        for (a, b) in re.iter().zip([0.5, -0.75, -0.375]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(r.coefficients.len(), 8);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["hgeo", "symbol", "chi:1*foo"]), 2);
        assert_eq!(run(["hgeo", "symbol", "sing:[(0,1)]", "--at", "0"]), 3);
        assert_eq!(run(["hgeo", "--bogus"]), 2);
    }
}
