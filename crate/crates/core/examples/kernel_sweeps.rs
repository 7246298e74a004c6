// Finite-section kernel sweeps of `T_φ` and `T_φ̄`, with Coburn's exclusivity visible in the tables.

use hgeo::toeplitz_ops::kernel_sweep;
use hgeo::two_projections::unimodular_series;
use hgeo::{parse_symbol, Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    let sizes = [32, 64, 128];
    for text in ["chi:-1", "chi:2*blaschke:[0.5]", "chi:1*blaschke:[0.4,-0.3i]", "expi:cos:[0.8] sin:[0.3]"] {
        let s = unimodular_series(&parse_symbol(text)?, 256, &tol)?;
        let (a, b) = (kernel_sweep(&s, &sizes, &tol)?, kernel_sweep(&s.conj(), &sizes, &tol)?);
        let dims = |k: &hgeo::toeplitz_ops::KernelSweep| k.rows.iter().map(|r| r.kernel_dim).collect::<Vec<_>>();
        println!(
            "{text:<28} ker T_φ {:?} {:?}   ker T_φ̄ {:?} {:?}   γ = {:.6}",
            dims(&a),
            a.verdict,
            dims(&b),
            b.verdict,
            a.last().gamma.unwrap_or(0.0)
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
