//! Truncated Hardy-space arithmetic.
//!
//! An element of H² is stored by its first `N` Taylor coefficients. The
//! boundary grid realizes the Riesz projection numerically: sample on
//! `M` equispaced points of the circle, DFT, keep frequencies `0..N`.

use std::ops::{Add, Sub};

use nalgebra::DVector;
use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{cis, is_finite, modulus, Real};

/// Truncation order together with the boundary grid size used for
/// sample-then-project products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub order: usize,
    pub grid: usize,
}

impl Truncation {
    /// Order `n` with the default grid `4n` (oversampling ×2 beyond Nyquist).
    pub fn new(order: usize) -> Self {
        Self::with_oversample(order, 2)
    }

    pub fn with_oversample(order: usize, oversample: usize) -> Self {
        let grid = (2 * oversample.max(1) * order.max(1)).next_power_of_two();
        Self { order, grid }
    }
}

/// Coefficient vector `c_0 … c_{N-1}` of an analytic function on the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyVector<T: Real> {
    coeffs: DVector<Complex<T>>,
}

/// Result of [`HardyVector::shift`]: the shifted vector and the coefficient
/// pushed past the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Shifted<T: Real> {
    pub vector: HardyVector<T>,
    pub lost: Complex<T>,
}

impl<T: Real> Shifted<T> {
    pub fn truncation_loss(&self) -> T {
        modulus(self.lost)
    }
}

impl<T: Real> HardyVector<T> {
    pub fn zeros(order: usize) -> Self {
        Self { coeffs: DVector::zeros(order) }
    }

    /// The constant function `𝟙`.
    pub fn one(order: usize) -> Self {
        Self::monomial(0, order)
    }

    /// `z^k` truncated at `order`.
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut v = Self::zeros(order);
        if k < order {
            v.coeffs[k] = Complex::new(T::one(), T::zero());
        }
        v
    }

    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Self {
        Self { coeffs: DVector::from_vec(coeffs) }
    }

    pub fn from_dvector(coeffs: DVector<Complex<T>>) -> Self {
        Self { coeffs }
    }

    /// Szegő kernel `k_a(z) = 1/(1 - ā z)`, coefficients `ā^n`.
    pub fn szego_kernel(a: Complex<T>, order: usize) -> Self {
        let ab = a.conj();
        let mut out = Vec::with_capacity(order);
        let mut t = Complex::new(T::one(), T::zero());
        for _ in 0..order {
            out.push(t);
            t *= ab;
        }
        Self::from_coeffs(out)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &DVector<Complex<T>> {
        &self.coeffs
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        self.coeffs.as_slice()
    }

    pub fn into_dvector(self) -> DVector<Complex<T>> {
        self.coeffs
    }

    /// Coefficient `n`, zero past the truncation.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs.get(n).copied().unwrap_or_else(Complex::default)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|&c| is_finite(c))
    }

    pub fn norm_squared(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// `(self, other) = Σ c_n(self) · conj(c_n(other))`; the shorter vector
    /// is zero-padded.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .fold(Complex::default(), |acc, (a, b)| acc + a * b.conj())
    }

    /// `S f = z f`, keeping the order fixed.
    pub fn shift(&self) -> Shifted<T> {
        let n = self.order();
        if n == 0 {
            return Shifted { vector: self.clone(), lost: Complex::default() };
        }
        let mut out = DVector::zeros(n);
        for k in 1..n {
            out[k] = self.coeffs[k - 1];
        }
        Shifted { vector: Self { coeffs: out }, lost: self.coeffs[n - 1] }
    }

    /// `S* f = (f - f(0)) / z`.
    pub fn coshift(&self) -> Self {
        let n = self.order();
        let mut out = DVector::zeros(n);
        for k in 1..n {
            out[k - 1] = self.coeffs[k];
        }
        Self { coeffs: out }
    }

    /// Power-series value at `|z| <= 1` (Horner).
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let slack = T::lit(64.0) * T::default_epsilon();
        if z.norm_sqr() > T::one() + slack {
            return Err(Error::OutsideDisk { re: z.re.to_f64(), im: z.im.to_f64() });
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::default(), |acc, &c| acc * z + c)
    }

    /// Coefficientwise conjugation, i.e. `𝐂 f(z) = conj(f(z̄))`.
    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.map(|c| c.conj()) }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { coeffs: self.coeffs.map(|x| x * c) }
    }

    pub fn scale_real(&self, c: T) -> Self {
        Self { coeffs: self.coeffs.map(|x| x.scale(c)) }
    }

    /// Zero-pad or truncate to `order`.
    pub fn resized(&self, order: usize) -> Self {
        let mut out = DVector::zeros(order);
        let m = order.min(self.order());
        out.rows_mut(0, m).copy_from(&self.coeffs.rows(0, m));
        Self { coeffs: out }
    }

    /// Product of analytic functions, truncated at `order`.
    pub fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        let a = self.as_slice();
        let b = other.as_slice();
        let mut out = vec![Complex::default(); order];
        for (i, &ai) in a.iter().enumerate().take(order) {
            if ai == Complex::default() {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(order - i) {
                out[i + j] += ai * bj;
            }
        }
        Self::from_coeffs(out)
    }

    /// ℓ² norm of the coefficients from index `from` on.
    pub fn tail_norm(&self, from: usize) -> T {
        self.as_slice()
            .iter()
            .skip(from)
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt()
    }
}

impl<T: Real> Add for &HardyVector<T> {
    type Output = HardyVector<T>;

    fn add(self, rhs: Self) -> HardyVector<T> {
        let n = self.order().max(rhs.order());
        let (a, b) = (self.resized(n), rhs.resized(n));
        HardyVector { coeffs: a.coeffs + b.coeffs }
    }
}

impl<T: Real> Sub for &HardyVector<T> {
    type Output = HardyVector<T>;

    fn sub(self, rhs: Self) -> HardyVector<T> {
        let n = self.order().max(rhs.order());
        let (a, b) = (self.resized(n), rhs.resized(n));
        HardyVector { coeffs: a.coeffs - b.coeffs }
    }
}

/// `Σ c_n(f) · conj(c_n(g))`.
pub fn inner_product<T: Real>(f: &HardyVector<T>, g: &HardyVector<T>) -> Complex<T> {
    f.inner(g)
}

/// Samples of a function at the points `e^{2πik/M}`, `k = 0 … M-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid<T: Real> {
    samples: Vec<Complex<T>>,
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::GridNotPowerOfTwo { grid: m });
    }
    Ok(())
}

/// The `M` grid points on the circle.
pub fn grid_points<T: Real>(m: usize) -> impl Iterator<Item = Complex<T>> {
    let step = T::two_pi() / T::count(m);
    (0..m).map(move |k| cis(step * T::count(k)))
}

impl<T: Real> BoundaryGrid<T> {
    pub fn from_samples(samples: Vec<Complex<T>>) -> Result<Self> {
        check_grid(samples.len())?;
        Ok(Self { samples })
    }

    /// Samples `f` on the `m`-point grid.
    pub fn sample(m: usize, f: impl FnMut(Complex<T>) -> Complex<T>) -> Result<Self> {
        check_grid(m)?;
        Ok(Self { samples: grid_points(m).map(f).collect() })
    }

    /// Boundary values of a coefficient vector, via inverse FFT. Coefficients
    /// past `m` are folded modulo `m`, which is exact on the grid.
    pub fn of_vector(f: &HardyVector<T>, m: usize) -> Result<Self> {
        check_grid(m)?;
        let mut buf = vec![Complex::default(); m];
        for (k, &c) in f.as_slice().iter().enumerate() {
            buf[k % m] += c;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        Ok(Self { samples: buf })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!("grid {} vs {}", self.len(), other.len())));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Ok(Self { samples })
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { samples: self.samples.iter().map(|&s| f(s)).collect() }
    }

    /// `(1/M) Σ_k |samples_k|²`.
    pub fn mean_square(&self) -> T {
        let s = self.samples.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr());
        s / T::count(self.len())
    }

    /// Discrete Fourier coefficients `(1/M) Σ_j s_j e^{-2πijk/M}`.
    pub fn spectrum(&self) -> Vec<Complex<T>> {
        let m = self.len();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let inv = T::one() / T::count(m);
        buf.iter_mut().for_each(|c| *c = c.scale(inv));
        buf
    }
}

/// Analytic projection of a boundary function.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T: Real> {
    pub vector: HardyVector<T>,
    /// ℓ² norm of the negative-frequency coefficients that were discarded.
    pub negative_residual: T,
    /// ℓ² norm of the nonnegative frequencies at or beyond the order.
    pub tail_residual: T,
}

impl<T: Real> Projection<T> {
    /// Returns the vector if the discarded anti-analytic part is below
    /// `threshold`.
    pub fn checked(self, threshold: T) -> Result<HardyVector<T>> {
        if !(self.negative_residual <= threshold) {
            return Err(Error::ProjectionResidual {
                residual: self.negative_residual.to_f64(),
                threshold: threshold.to_f64(),
            });
        }
        Ok(self.vector)
    }
}

/// Riesz projection `P` onto H² realized on the grid, keeping frequencies
/// `0 … order-1`.
pub fn boundary_to_coefficients<T: Real>(grid: &BoundaryGrid<T>, order: usize) -> Result<Projection<T>> {
    let m = grid.len();
    check_grid(m)?;
    if m < 2 * order {
        return Err(Error::GridTooCoarse { grid: m, order });
    }
    let spec = grid.spectrum();
    let half = m / 2;
    let vector = HardyVector::from_coeffs(spec[..order].to_vec());
    if !vector.is_finite() {
        return Err(Error::NonFinite("boundary samples"));
    }
    let energy = |s: &[Complex<T>]| s.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt();
    Ok(Projection {
        vector,
        negative_residual: energy(&spec[half..]),
        tail_residual: energy(&spec[order..half]),
    })
}

/// Samples `f` on the grid of `trunc` and projects to its order.
pub fn project<T: Real>(trunc: Truncation, f: impl FnMut(Complex<T>) -> Complex<T>) -> Result<Projection<T>> {
    let grid = BoundaryGrid::sample(trunc.grid, f)?;
    boundary_to_coefficients(&grid, trunc.order)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let e0 = HardyVector::<f64>::one(3);
        assert_eq!(inner_product(&e0, &e0), c(1.0, 0.0));
        let f = HardyVector::from_coeffs(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let g = HardyVector::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(inner_product(&f, &g), c(0.0, 2.0));
        let ff = inner_product(&f, &f);
        assert_eq!(ff.im, 0.0);
        assert!((ff.re - 5.0).abs() < 1e-15);
    }

    #[test]
    fn inner_product_zero_pads() {
        let f = HardyVector::from_coeffs(vec![c(1.0, 0.0), c(3.0, 0.0), c(5.0, 0.0)]);
        let g = HardyVector::from_coeffs(vec![c(2.0, 0.0)]);
        assert_eq!(f.inner(&g), c(2.0, 0.0));
    }

    #[test]
    fn shift_and_coshift() {
        let f = HardyVector::from_coeffs(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let s = f.shift();
        assert_eq!(s.vector.as_slice(), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.truncation_loss(), 0.0);

        let g = HardyVector::from_coeffs(vec![c(1.0, 2.0), c(3.0, 0.0), c(0.5, -1.0), c(0.0, 0.0)]);
        assert_eq!(g.shift().vector.coshift(), g);
        // S S* = I - (·, 𝟙)𝟙
        let mut expect = g.clone();
        expect = &expect - &HardyVector::one(4).scale(g.coeff(0));
        assert_eq!(g.coshift().shift().vector, expect);
    }

    #[test]
    fn shift_reports_truncation_loss() {
        let f = HardyVector::from_coeffs(vec![c(0.0, 0.0), c(2.0, 0.0)]);
        let s = f.shift();
        assert_eq!(s.lost, c(2.0, 0.0));
        assert_eq!(s.truncation_loss(), 2.0);
    }

    #[test]
    fn evaluate_examples() {
        let f = HardyVector::from_coeffs(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(f.evaluate(c(0.5, 0.0)).unwrap(), c(1.5, 0.0));
        assert_eq!(f.evaluate(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(matches!(f.evaluate(c(1.1, 0.0)), Err(Error::OutsideDisk { .. })));
        // points on the circle are accepted
        assert!(f.evaluate(c(0.6, 0.8)).is_ok());
    }

    #[test]
    fn szego_kernel_reproduces_its_norm() {
        // k_a(a) = Σ|a|^{2n} = 1/(1-|a|²) = 4/3 at a = 1/2
        let a = c(0.5, 0.0);
        let k = HardyVector::szego_kernel(a, 64);
        let v = k.evaluate(a).unwrap();
        assert!((v.re - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn boundary_round_trip_polynomial() {
        let n = 16;
        let f = HardyVector::from_coeffs((0..n).map(|k| c(k as f64 * 0.1, 1.0 / (k as f64 + 1.0))).collect());
        let grid = BoundaryGrid::sample(2 * n, |z| f.horner(z)).unwrap();
        let p = boundary_to_coefficients(&grid, n).unwrap();
        assert!((&p.vector - &f).norm() < 1e-13);
        assert!(p.negative_residual < 1e-13);
        // the FFT evaluation route agrees
        let grid2 = BoundaryGrid::of_vector(&f, 2 * n).unwrap();
        for (a, b) in grid.samples().iter().zip(grid2.samples()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn constant_samples_project_to_one() {
        let grid = BoundaryGrid::sample(8, |_| c(1.0, 0.0)).unwrap();
        let p = boundary_to_coefficients(&grid, 4).unwrap();
        assert!((&p.vector - &HardyVector::one(4)).norm() < 1e-15);
    }

    #[test]
    fn anti_analytic_part_is_reported() {
        // 1/(1 - ½ e^{-it}) = 1 + Σ_{n>=1} 2^{-n} e^{-int}; analytic part is 𝟙
        let grid = BoundaryGrid::sample(256, |z: C| C::new(1.0, 0.0) / (C::new(1.0, 0.0) - z.conj() * 0.5)).unwrap();
        let p = boundary_to_coefficients(&grid, 32).unwrap();
        assert!((&p.vector - &HardyVector::one(32)).norm() < 1e-14);
        // Σ_{n>=1} 4^{-n} = 1/3
        assert!((p.negative_residual - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!(p.clone().checked(1e-3).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(BoundaryGrid::<f64>::sample(12, |z| z).is_err());
        let g = BoundaryGrid::<f64>::sample(16, |z| z).unwrap();
        assert!(matches!(boundary_to_coefficients(&g, 9), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn parseval_on_grid() {
        let f = HardyVector::from_coeffs(vec![c(1.0, -1.0), c(0.25, 0.5), c(-2.0, 0.0)]);
        let g = BoundaryGrid::of_vector(&f, 8).unwrap();
        assert!((g.mean_square() - f.norm_squared()).abs() < 1e-13);
    }

    #[test]
    fn generic_over_f32() {
        let f = HardyVector::<f32>::from_coeffs(vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]);
        let v = f.evaluate(Complex::new(0.5, 0.0)).unwrap();
        assert!((v.re - 1.5).abs() < 1e-6);
        let grid = BoundaryGrid::of_vector(&f, 4).unwrap();
        let p = boundary_to_coefficients(&grid, 2).unwrap();
        assert!((&p.vector - &f).norm() < 1e-6);
    }
}
