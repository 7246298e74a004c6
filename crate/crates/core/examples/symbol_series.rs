// Parse symbols, tabulate their Fourier coefficients and factor an analytic polynomial.

use hgeo::symbols::{inner_outer_factorize, InnerData};
use hgeo::{parse_symbol, Discretization, Result, TrigSeries};

pub fn run_example() -> Result<()> {
    let disc = Discretization::for_bandwidth(64);
    for text in ["blaschke:[0.5]", "chi:-2*blaschke:[0.3+0.4i]", "expi:cos:[0.5] sin:[]", "sing:[(pi,0.5)]"] {
        let e = parse_symbol(text)?;
        let s = e.series(disc)?;
        let head: Vec<String> = (0..5).map(|k| format!("{:+.5}", s.coeff(k).re)).collect();
        println!("{text:<28} ĉ_0..ĉ_4 = [{}]", head.join(", "));
        if e.is_structurally_inner() {
            let d = InnerData::from_symbol(&e)?;
            println!("{:<28} inner: {} zeros, {} atoms", "", d.blaschke_zeros.len(), d.singular_atoms.len());
        }
    }

    // (z - 0.5)(z - 2): one zero inside the disk, one outside
    let p = TrigSeries::from_terms(&[(0, hgeo::cx(1.0, 0.0)), (1, hgeo::cx(-2.5, 0.0)), (2, hgeo::cx(1.0, 0.0))]);
    let (inner, outer) = inner_outer_factorize(&p, 1e-9)?;
    println!(
        "(z-0.5)(z-2): inner zeros {:?}, outer coefficients {:?}",
        inner.blaschke_zeros.iter().map(|z| z.re).collect::<Vec<_>>(),
        (0..=outer.bandwidth() as i64).map(|k| outer.coeff(k).re).collect::<Vec<_>>()
    );

    if let Err(e) = parse_symbol("chi:1*foo") {
        println!("chi:1*foo -> {e}");
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
