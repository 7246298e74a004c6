// Winding numbers by quadrature, Fourier moments, Toeplitz kernels and radial slices.

use hgeo::index_classify::{index_symbol, IndexOptions};
use hgeo::{parse_symbol, Result};

pub fn run_example() -> Result<()> {
    let opts = IndexOptions {
        sizes: vec![48, 96],
        ..IndexOptions::default()
    };
    for text in ["chi:3", "chi:-2", "blaschke:[0.5,0.3]", "chi:-1*blaschke:[0.2,0.4i,-0.5]", "fourier:[0 2 1]"] {
        let r = index_symbol(&parse_symbol(text)?, &opts)?;
        println!("{text:<34} {:?} -> index {}", r.estimates().iter().map(|(_, k)| *k).collect::<Vec<_>>(), r.index()?);
    }
    match index_symbol(&parse_symbol("fourier:[1,0,1]")?, &opts) {
        Err(e) => println!("2cos t -> {e}"),
        Ok(r) => println!("2cos t unexpectedly gave {:?}", r.consensus),
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
