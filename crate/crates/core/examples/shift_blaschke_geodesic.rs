// The geodesic from `χ_1 H²` to `b_a H²`: length `asin |a|`, exponent of rank two.

use hgeo::two_projections::{geodesic_between, GeodesicOptions};
use hgeo::{cx, Result, SchattenP, SymbolExpr};

pub fn run_example() -> Result<()> {
    let n: usize = std::env::var("HGEO_N").ok().and_then(|v| v.parse().ok()).unwrap_or(64);
    let mut opts = GeodesicOptions::new(n);
    opts.p_values = vec![SchattenP::Finite(1.0), SchattenP::Finite(2.0)];
    println!("   a   ||X||          asin a         ||X||_1        dims");
    for a in [0.3, 0.5, 0.7] {
        let r = geodesic_between(&SymbolExpr::Chi(1), &SymbolExpr::Blaschke(vec![cx(a, 0.0)]), &opts)?;
        println!(
            "{a:>5}  {:.12} {:.12} {:.12} {:?}",
            r.length_op.unwrap_or(f64::NAN),
            f64::asin(a),
            r.length_p[0].length,
            r.halmos_dims.as_tuple()
        );
    }
    let r = geodesic_between(&SymbolExpr::Chi(0), &SymbolExpr::Chi(1), &opts)?;
    println!("(1, χ_1): {}", r.verdict);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
