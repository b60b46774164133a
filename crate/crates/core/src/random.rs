//! Seeded generators for the randomized suites.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::symbol::{PoleTerm, RationalSymbol};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disk `|z| <= radius`.
pub fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex<f64> {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Coefficient with modulus in `[0.5, 1.5]` and uniform phase.
pub fn coefficient(rng: &mut impl Rng) -> Complex<f64> {
    Complex::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// One to `max_poles` simple poles with `|b| <= radius`, no polynomial part.
pub fn rational_symbol(rng: &mut impl Rng, max_poles: usize, radius: f64) -> RationalSymbol<f64> {
    let k = rng.gen_range(1..=max_poles);
    let poles = (0..k).map(|_| PoleTerm::simple(disk_point(rng, radius), coefficient(rng))).collect();
    RationalSymbol::new(Vec::new(), poles).expect("poles inside the disk")
}

/// The symbols used by the property suites: up to four simple poles in
/// `|b| <= 0.8`.
pub fn suite_symbol(rng: &mut impl Rng) -> RationalSymbol<f64> {
    rational_symbol(rng, 4, 0.8)
}

/// Degree `1..=max_degree`, zeros in `|a| <= radius`, uniform phase.
pub fn blaschke(rng: &mut impl Rng, max_degree: usize, radius: f64) -> BlaschkeProduct<f64> {
    let d = rng.gen_range(1..=max_degree);
    let zeros = (0..d).map(|_| disk_point(rng, radius)).collect();
    let phase = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    BlaschkeProduct::new(phase, zeros).expect("zeros inside the disk")
}

/// Polynomial with `len` coefficients of modulus `<= 1`.
pub fn polynomial(rng: &mut impl Rng, len: usize) -> Vec<Complex<f64>> {
    (0..len).map(|_| disk_point(rng, 1.0)).collect()
}
