//! Seeded generators of test symbols.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle_fourier::TrigSeries;
use crate::linalg::{cx, Cx};
use crate::symbols::SymbolExpr;

pub struct SymbolGen {
    rng: ChaCha8Rng,
}

impl SymbolGen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A point of the open disk with modulus in `[r_min, r_max]`.
    pub fn disk_point(&mut self, r_min: f64, r_max: f64) -> Cx {
        let r = self.rng.random_range(r_min..=r_max);
        Cx::from_polar(r, self.rng.random_range(0.0..2.0 * PI))
    }

    /// Blaschke product with `count` zeros of modulus in `[r_min, r_max]`.
    pub fn blaschke(&mut self, count: usize, r_min: f64, r_max: f64) -> SymbolExpr {
        SymbolExpr::Blaschke((0..count).map(|_| self.disk_point(r_min, r_max)).collect())
    }

    /// Real trigonometric polynomial with coefficients uniform in `[-amplitude, amplitude]`.
    pub fn real_trig(&mut self, bandwidth: usize, amplitude: f64) -> TrigSeries {
        let mut draw = |_| self.rng.random_range(-amplitude..=amplitude);
        let cos: Vec<f64> = (0..bandwidth).map(&mut draw).collect();
        let sin: Vec<f64> = (0..bandwidth).map(&mut draw).collect();
        let a0 = draw(0);
        TrigSeries::real_from_cos_sin(a0, &cos, &sin)
    }

    /// Complex trigonometric polynomial with coefficients in the unit square.
    pub fn complex_trig(&mut self, bandwidth: usize) -> TrigSeries {
        let m = bandwidth as i64;
        let terms: Vec<(i64, Cx)> = (-m..=m)
            .map(|k| (k, cx(self.rng.random_range(-1.0..1.0), self.rng.random_range(-1.0..1.0))))
            .collect();
        TrigSeries::from_terms(&terms)
    }

    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }
}
