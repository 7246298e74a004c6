macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example runs");
        }
    };
}

example!(symbol_series, "symbol_series.rs");
example!(winding_index, "winding_index.rs");
example!(shift_blaschke_geodesic, "shift_blaschke_geodesic.rs");
example!(geodesic_path, "geodesic_path.rs");
example!(commutator_bound, "commutator_bound.rs");
example!(classify_subspaces, "classify_subspaces.rs");
example!(unimodular_representative, "unimodular_representative.rs");
example!(kernel_sweeps, "kernel_sweeps.rs");
