// `||[M_θ, P_+]|| ≥ acos γ(T_{e^{iθ}})` for real trigonometric θ.

use hgeo::testgen::SymbolGen;
use hgeo::toeplitz_ops::{commutator_norm, nehari_distance, spectral_summary, toeplitz_tall};
use hgeo::two_projections::unimodular_series;
use hgeo::{Result, SchattenP, SymbolExpr, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    let mut gen = SymbolGen::new(1);
    let n = 96;
    println!("bw  ||[M_θ,P]||   acos γ      ||H_θ||");
    for _ in 0..5 {
        let bw = gen.size(1, 6);
        let theta = gen.real_trig(bw, 0.5);
        let phi = unimodular_series(&SymbolExpr::ExpI(theta.clone()), 256, &tol)?;
        let gamma = spectral_summary(&toeplitz_tall(&phi, n), tol.kernel)?.gamma.unwrap_or(0.0);
        println!(
            "{bw:>2}  {:.8}  {:.8}  {:.8}",
            commutator_norm(&theta, n, SchattenP::Inf)?,
            gamma.min(1.0).acos(),
            nehari_distance(&theta, n)?
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
