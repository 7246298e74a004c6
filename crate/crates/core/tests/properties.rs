use proptest::prelude::*;

use hgeo::circle_fourier::{fourier_coeffs, harmonic_conjugate, sample_series};
use hgeo::config::grid_for_bandwidth;
use hgeo::index_classify::index_quadrature;
use hgeo::linalg::{hermitian_norm, lp_norm, singular_values};
use hgeo::report::round_significant;
use hgeo::symbols::sample_symbol_auto;
use hgeo::toeplitz_ops::{hankel_section, kernel_sweep, toeplitz_section, toeplitz_tall};
use hgeo::two_projections::{
    geodesic_between, halmos_decompose, idempotency_defect, projection_onto, unimodular_series, GeodesicOptions,
};
use hgeo::{cx, parse_symbol, CMat, Cx, SchattenP, SymbolExpr, Tolerances, TrigSeries};

fn series(max_bw: usize) -> impl Strategy<Value = TrigSeries> {
    (0..=max_bw).prop_flat_map(|m| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2 * m + 1)
            .prop_map(|v| TrigSeries::new(v.into_iter().map(|(a, b)| cx(a, b)).collect()).unwrap())
    })
}

fn real_series(max_bw: usize) -> impl Strategy<Value = TrigSeries> {
    series(max_bw).prop_map(|s| s.real_part())
}

fn disk_point(r_max: f64) -> impl Strategy<Value = Cx> {
    (0.05..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Cx::from_polar(r, t))
}

fn blaschke(max_zeros: usize, r_max: f64) -> impl Strategy<Value = SymbolExpr> {
    prop::collection::vec(disk_point(r_max), 1..=max_zeros).prop_map(SymbolExpr::Blaschke)
}

fn unimodular_product() -> impl Strategy<Value = SymbolExpr> {
    (-2i64..=2, blaschke(2, 0.6)).prop_map(|(k, b)| SymbolExpr::Product(vec![SymbolExpr::Chi(k), b]))
}

fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampling_round_trip(s in series(12)) {
        let back = fourier_coeffs(&sample_series(&s, grid_for_bandwidth(s.bandwidth()), 0).unwrap(), s.bandwidth()).unwrap();
        for k in -(s.bandwidth() as i64)..=s.bandwidth() as i64 {
            prop_assert!((back.coeff(k) - s.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn parseval(s in series(12), offset in 0u8..=1) {
        let samples = sample_series(&s, grid_for_bandwidth(s.bandwidth()), offset).unwrap();
        prop_assert!((samples.mean_square() - s.energy()).abs() < 1e-12 * s.energy().max(1.0));
    }

    #[test]
    fn toeplitz_adjoint_is_conjugate_symbol(s in series(6), n in 1usize..24) {
        let a = toeplitz_section(&s, n).matrix.adjoint();
        prop_assert!(max_diff(&a, &toeplitz_section(&s.conj(), n).matrix) == 0.0);
    }

    #[test]
    fn toeplitz_product_with_analytic_factor(s in series(4), h in series(4), n in 1usize..20) {
        let h = hgeo::circle_fourier::riesz_project(&h);
        let d = h.bandwidth();
        let lhs = toeplitz_section(&s, n + d).matrix * toeplitz_tall(&h, n).matrix.rows(0, n + d);
        let rhs = toeplitz_tall(&s.mul(&h), n).matrix.rows(0, n + d).into_owned();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn hankel_of_analytic_series_vanishes(s in series(6), n in 1usize..20) {
        let h = hankel_section(&hgeo::circle_fourier::riesz_project(&s), n);
        prop_assert!(h.matrix.iter().all(|z| *z == Cx::default()));
    }

    #[test]
    fn schatten_norms_decrease_in_p(s in series(5), n in 2usize..16) {
        let sv = singular_values(&toeplitz_section(&s, n).matrix).unwrap();
        let norms: Vec<f64> = [1.0, 2.0, 4.0].iter().map(|&p| lp_norm(&sv, SchattenP::Finite(p))).collect();
        prop_assert!(norms[0] >= norms[1] - 1e-12 && norms[1] >= norms[2] - 1e-12);
        prop_assert!(norms[2] >= lp_norm(&sv, SchattenP::Inf) - 1e-12);
    }

    #[test]
    fn conjugate_twice_negates_mean_free_part(u in real_series(10)) {
        let twice = harmonic_conjugate(&harmonic_conjugate(&u, 1e-12).unwrap(), 1e-12).unwrap();
        for k in 1..=u.bandwidth() as i64 {
            prop_assert!((twice.coeff(k) + u.coeff(k)).norm() < 1e-14);
        }
        prop_assert!(twice.coeff(0).norm() == 0.0);
    }

    #[test]
    fn rounding_is_idempotent(x in -1e30..1e30f64) {
        let r = round_significant(x);
        prop_assert_eq!(round_significant(r), r);
        prop_assert!((r - x).abs() <= 1e-11 * x.abs());
    }

    #[test]
    fn parser_reads_back_blaschke_zeros(zeros in prop::collection::vec(disk_point(0.9), 1..4)) {
        let text = format!(
            "blaschke:[{}]",
            zeros.iter().map(|z| format!("{:e}{:+e}i", z.re, z.im)).collect::<Vec<_>>().join(", ")
        );
        prop_assert_eq!(parse_symbol(&text).unwrap(), SymbolExpr::Blaschke(zeros));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coburn_exclusivity(e in unimodular_product()) {
        let tol = Tolerances::default();
        let s = unimodular_series(&e, 128, &tol).unwrap();
        let a = kernel_sweep(&s, &[48, 96], &tol).unwrap();
        let b = kernel_sweep(&s.conj(), &[48, 96], &tol).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            prop_assert!(x.kernel_dim == 0 || y.kernel_dim == 0);
        }
    }

    #[test]
    fn quadrature_index_is_additive(a in unimodular_product(), b in unimodular_product()) {
        let tol = Tolerances::default();
        let ind = |e: &SymbolExpr| index_quadrature(&sample_symbol_auto(e, 1024).unwrap(), 1e-6, &tol).unwrap().estimate;
        prop_assert_eq!(ind(&SymbolExpr::Product(vec![a.clone(), b.clone()])), ind(&a) + ind(&b));
    }

    #[test]
    fn projections_are_orthogonal_projections(e in blaschke(2, 0.6), n in 32usize..48) {
        let tol = Tolerances::default();
        let s = unimodular_series(&e, 128, &tol).unwrap();
        let p = projection_onto(&s, n, s.bandwidth().max(8), &tol).unwrap().matrix;
        prop_assert!(idempotency_defect(&p).unwrap() < 1e-9);
        prop_assert!(max_diff(&p, &p.adjoint()) < 1e-14);
    }

    #[test]
    fn halmos_dimensions_fill_the_window(a in blaschke(2, 0.6), b in blaschke(2, 0.6), n in 32usize..48) {
        let tol = Tolerances::default();
        let (f, g) = (unimodular_series(&a, 128, &tol).unwrap(), unimodular_series(&b, 128, &tol).unwrap());
        let pad = f.bandwidth().max(g.bandwidth());
        let p = projection_onto(&f, n, pad, &tol).unwrap().matrix;
        let q = projection_onto(&g, n, pad, &tol).unwrap().matrix;
        let h = halmos_decompose(&p, &q, tol.cluster).unwrap();
        prop_assert_eq!(h.dims.total(), 2 * n + 1);
        prop_assert!(h.dims.generic % 2 == 0);
        prop_assert!(h.angles.iter().all(|&t| t > 0.0 && t <= std::f64::consts::FRAC_PI_2 + 1e-12));
    }

    #[test]
    fn geodesics_between_equal_counts_end_at_q(a in disk_point(0.6), b in disk_point(0.6)) {
        let r = geodesic_between(
            &SymbolExpr::Blaschke(vec![a]),
            &SymbolExpr::Blaschke(vec![b]),
            &GeodesicOptions::new(32),
        ).unwrap();
        prop_assert!(r.exists());
        prop_assert!(r.endpoint_residual.unwrap() < 1e-8);
        prop_assert!(r.length_op.unwrap() < std::f64::consts::FRAC_PI_2);
        let x = r.exponent.as_ref().unwrap();
        prop_assert!(hermitian_norm(&(x - x.adjoint())).unwrap() < 1e-12);
        prop_assert!(r.codiagonality.as_ref().unwrap().max() < 1e-8);
    }
}
