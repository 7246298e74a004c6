// Sample `δ(t) = e^{itX} P e^{-itX}` and compare its chord length with `||X||`.

use hgeo::report::write_path_csv;
use hgeo::two_projections::{geodesic_between, GeodesicOptions};
use hgeo::{cx, Result, SymbolExpr};

pub fn run_example() -> Result<()> {
    let r = geodesic_between(
        &SymbolExpr::Chi(1),
        &SymbolExpr::Blaschke(vec![cx(0.0, 0.6)]),
        &GeodesicOptions::new(24),
    )?;
    let path = r.path(33)?;
    write_path_csv(std::io::stdout(), &path.samples[..5])?;
    println!("...");
    println!("chord length {:.6}, ||X|| = {:.6}", path.chord_length()?, r.length_op.unwrap_or(f64::NAN));
    let worst = path.samples.iter().map(|s| s.idempotency_defect).fold(0.0, f64::max);
    println!("max idempotency defect along the path {worst:.2e}");
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
