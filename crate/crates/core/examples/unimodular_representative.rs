// `θ = (φ/|φ|) e^{iũ}` spans the same subspace as φ; a continuous u can have unbounded ũ.

use hgeo::circle_fourier::{harmonic_conjugate, sample_series};
use hgeo::config::grid_for_bandwidth;
use hgeo::symbols::unimodular_representative;
use hgeo::{parse_symbol, Discretization, Result, Tolerances, TrigSeries};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    for text in ["fourier:[0 1 0.5]", "fourier:[0 2 1]", "outer:cos:[0.4] sin:[0.1]*blaschke:[0.5]"] {
        let theta = unimodular_representative(&parse_symbol(text)?, Discretization::for_bandwidth(128), &tol)?.trimmed(1e-15);
        let defect = sample_series(&theta, 1024, 1)?.unimodular_defect();
        println!("{text:<42} θ bandwidth {:>3}, ||θ| - 1| ≤ {defect:.1e}", theta.bandwidth());
    }

    // u = -Σ sin(kt)/(k log k) is continuous, its conjugate Σ cos(kt)/(k log k) is not bounded
    for m in [64usize, 256, 1024, 4096] {
        let sin: Vec<f64> = (1..=m).map(|k| if k < 2 { 0.0 } else { -1.0 / (k as f64 * (k as f64).ln()) }).collect();
        let u = TrigSeries::real_from_cos_sin(0.0, &[], &sin);
        let v = harmonic_conjugate(&u, 1e-12)?;
        let sup = |s: &TrigSeries| -> Result<f64> {
            Ok(sample_series(s, grid_for_bandwidth(m), 0)?.values.iter().map(|z| z.re.abs()).fold(0.0, f64::max))
        };
        println!("m = {m:>4}: sup|u_m| = {:.4}, sup|ũ_m| = {:.4}", sup(&u)?, sup(&v)?);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
