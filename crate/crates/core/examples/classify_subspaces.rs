// Components of the restricted Grassmannian, Toeplitz invertibility and the support criterion.

use hgeo::index_classify::{
    classify_subspace, geodesic_in_grres_verdict, support_disjoint_verdict, toeplitz_invertible_verdict, IndexOptions,
};
use hgeo::symbols::InnerData;
use hgeo::two_projections::GeodesicOptions;
use hgeo::{parse_symbol, Result, SchattenP};

pub fn run_example() -> Result<()> {
    let opts = IndexOptions {
        sizes: vec![48, 96],
        hankel_sizes: vec![16, 32, 64],
        ..IndexOptions::default()
    };
    let p = [SchattenP::Finite(1.0), SchattenP::Finite(2.0)];
    for text in ["blaschke:[0.5]*blaschke:[0.3]", "chi:-2", "fourier:[0 3 1]", "sing:[(0,1)]"] {
        let c = classify_subspace(&parse_symbol(text)?, &p, &opts)?;
        let counts: Vec<usize> = c.hankel_conj.iter().map(|r| r.count_above_half).collect();
        println!(
            "{text:<30} Gr_res {:<5} component {:?}  #σ(H_θ̄) > 1/2 per size {counts:?}",
            c.in_gr_res, c.component
        );
    }

    let g = GeodesicOptions::new(48);
    for (a, b) in [("blaschke:[0.5]", "blaschke:[0.3]"), ("chi:1", "chi:2")] {
        let v = geodesic_in_grres_verdict(&parse_symbol(a)?, &parse_symbol(b)?, &opts, &g)?;
        println!("({a}, {b}) -> {}", v.verdict);
    }

    for text in ["fourier:[0 2 1]", "chi:1"] {
        let v = toeplitz_invertible_verdict(&parse_symbol(text)?, &opts)?;
        println!("T_φ for {text}: invertible = {} ({})", v.invertible, v.reason);
    }

    let s0 = InnerData::from_symbol(&parse_symbol("sing:[(0,1)]")?)?;
    let s1 = InnerData::from_symbol(&parse_symbol("sing:[(pi,2)]")?)?;
    println!("atoms at 0 and π: {:?}", support_disjoint_verdict(&s0, &s1, 1e-9).verdict);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
