//! Finite Blaschke products, model spaces, Frostman shifts and Möbius
//! conjugation.
//!
//! Convention: `B(z) = phase · Π_j (a_j − z)/(1 − ā_j z)`, so a zero at the
//! origin contributes the factor `−z` and `z` itself is the product with
//! zeros `{0}` and phase `−1`.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{boundary_to_coefficients, grid_points, BoundaryGrid, HardyVector, Projection, Truncation};
use crate::poly;
use crate::scalar::{is_finite, modulus, re, unit_phase, Real};
use crate::spectral::gram_residual;
use crate::symbol::Symbol;

/// Grid used for boundary checks of degree-`d` products.
fn check_grid(degree: usize) -> usize {
    (32 * degree.max(1)).next_power_of_two().max(256)
}

/// Best unimodular `c` with `target ≈ c·candidate` on the grid, and the
/// remaining max-norm residual.
fn fit_phase<T: Real>(
    m: usize,
    candidate: impl Fn(Complex<T>) -> Complex<T>,
    target: impl Fn(Complex<T>) -> Complex<T>,
) -> (Complex<T>, T) {
    let pts: Vec<Complex<T>> = grid_points(m).collect();
    let pairs: Vec<(Complex<T>, Complex<T>)> = pts.iter().map(|&z| (candidate(z), target(z))).collect();
    let acc = pairs.iter().fold(Complex::default(), |acc, (c, t)| acc + t * c.conj());
    let phase = unit_phase(acc);
    let residual = pairs.iter().fold(T::zero(), |r, (c, t)| r.max(modulus(t - phase * c)));
    (phase, residual)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct<T: Real> {
    phase: Complex<T>,
    zeros: Vec<Complex<T>>,
}

impl<T: Real> BlaschkeProduct<T> {
    /// Validates `|phase| = 1` (to 1e-8, then renormalized) and `|a_j| < 1`.
    pub fn new(phase: Complex<T>, zeros: Vec<Complex<T>>) -> Result<Self> {
        if !is_finite(phase) || !zeros.iter().all(|&a| is_finite(a)) {
            return Err(Error::NonFinite("Blaschke data"));
        }
        let r = modulus(phase);
        if (r - T::one()).abs() > T::lit(1e-8) {
            return Err(Error::PhaseNotUnimodular { modulus: r.to_f64() });
        }
        for (index, &a) in zeros.iter().enumerate() {
            let m = modulus(a);
            if !(m < T::one()) {
                return Err(Error::ZeroOutsideDisk { index, modulus: m.to_f64() });
            }
        }
        Ok(Self { phase: phase.unscale(r), zeros })
    }

    /// `z^d`.
    pub fn monomial(d: usize) -> Self {
        let sign = if d % 2 == 0 { T::one() } else { -T::one() };
        Self { phase: re(sign), zeros: vec![Complex::default(); d] }
    }

    pub fn phase(&self) -> Complex<T> {
        self.phase
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Same zeros, phase replaced.
    pub fn with_phase(&self, phase: Complex<T>) -> Self {
        Self { phase: unit_phase(phase), zeros: self.zeros.clone() }
    }

    /// `c·B` for unimodular `c`.
    pub fn rotated(&self, c: Complex<T>) -> Self {
        self.with_phase(self.phase * c)
    }

    /// Closed-form value; finite for `|z| <= 1`.
    pub fn value(&self, z: Complex<T>) -> Complex<T> {
        let one = re(T::one());
        self.zeros.iter().fold(self.phase, |acc, &a| acc * (a - z) / (one - a.conj() * z))
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        if z.norm_sqr() > T::one() + T::lit(64.0) * T::default_epsilon() {
            return Err(Error::OutsideDisk { re: z.re.to_f64(), im: z.im.to_f64() });
        }
        Ok(self.value(z))
    }

    /// Taylor coefficients `0 … order-1`, exact up to rounding.
    pub fn coefficients(&self, order: usize) -> HardyVector<T> {
        let mut g = vec![Complex::default(); order];
        if order > 0 {
            g[0] = self.phase;
        }
        for &a in &self.zeros {
            g = mul_factor(&g, a);
        }
        HardyVector::from_coeffs(g)
    }

    /// `phase · Π (a_j − z)`.
    pub fn numerator(&self) -> Vec<Complex<T>> {
        poly::from_roots_reflected(&self.zeros).into_iter().map(|c| c * self.phase).collect()
    }

    /// `Π (1 − ā_j z)`.
    pub fn denominator(&self) -> Vec<Complex<T>> {
        let one = re(T::one());
        self.zeros.iter().fold(vec![one], |acc, &a| poly::multiply(&acc, &[one, -a.conj()]))
    }

    /// `max_k | |B(ζ_k)| − 1 |` over an `m`-point boundary grid.
    pub fn boundary_deviation(&self, m: usize) -> T {
        grid_points(m).fold(T::zero(), |r, z| r.max((modulus(self.value(z)) - T::one()).abs()))
    }

    /// The rotation `c·B` whose lowest nonzero Taylor coefficient is real
    /// positive. That coefficient is `phase·(−1)^{k}·Π_{a_j ≠ 0} a_j`,
    /// `k` the number of zeros at the origin.
    pub fn normalized(&self) -> Self {
        let tiny = T::lit(1e-14);
        let lowest = self.zeros.iter().fold(self.phase, |acc, &a| if modulus(a) <= tiny { -acc } else { acc * a });
        self.with_phase(unit_phase(lowest).conj() * self.phase)
    }

    /// `B∘μ`: zeros `μ(a_j)`, phase fitted on the boundary.
    pub fn compose_mobius(&self, mu: &MobiusMap<T>) -> Result<Self> {
        let zeros: Vec<Complex<T>> = self.zeros.iter().map(|&a| mu.apply(a)).collect();
        let cand = Self::new(re(T::one()), zeros)?;
        let (phase, residual) = fit_phase(check_grid(self.degree()), |z| cand.value(z), |z| self.value(mu.apply(z)));
        let threshold = T::lit(1e-9);
        if !(residual <= threshold) {
            return Err(Error::PhaseFit { residual: residual.to_f64(), threshold: threshold.to_f64() });
        }
        Ok(cand.with_phase(phase))
    }

    /// Frostman shift `θ_α = (α − θ)/(1 − ᾱθ)` with multiplier
    /// `g_α = (1 − ᾱθ)/√(1 − |α|²)` truncated at `order`.
    ///
    /// Writing `θ = P/Q`, the zeros of `θ_α` are the roots of `αQ − P`.
    pub fn frostman_shift(&self, alpha: Complex<T>, order: usize) -> Result<FrostmanShift<T>> {
        let ra = modulus(alpha);
        if !(ra < T::one()) {
            return Err(Error::AlphaOutsideDisk { modulus: ra.to_f64() });
        }
        let one = re(T::one());
        let theta = if alpha == Complex::default() {
            self.rotated(-one)
        } else {
            let p = self.numerator();
            let q = self.denominator();
            let f: Vec<Complex<T>> = q.iter().zip(&p).map(|(&qi, &pi)| alpha * qi - pi).collect();
            let roots = poly::roots(&f, T::lit(1e-11))?;
            if roots.len() != self.degree() {
                return Err(Error::RootFinding(format!("expected {} roots, found {}", self.degree(), roots.len())));
            }
            if let Some(r) = roots.iter().map(|&r| modulus(r)).find(|&m| m > T::one() - T::lit(1e-10)) {
                return Err(Error::RootOnCircle { modulus: r.to_f64() });
            }
            let cand = Self::new(one, roots)?;
            let target = |z| {
                let t = self.value(z);
                (alpha - t) / (one - alpha.conj() * t)
            };
            let (phase, residual) = fit_phase(check_grid(self.degree()), |z| cand.value(z), target);
            let threshold = T::lit(1e-9);
            if !(residual <= threshold) {
                return Err(Error::PhaseFit { residual: residual.to_f64(), threshold: threshold.to_f64() });
            }
            cand.with_phase(phase)
        };
        let norm = (T::one() - alpha.norm_sqr()).sqrt();
        let g = (&HardyVector::one(order) - &self.coefficients(order).scale(alpha.conj())).scale_real(T::one() / norm);
        // g_α θ_α = −θ conj(g_α) on the circle
        let boundary_residual = grid_points(check_grid(self.degree())).fold(T::zero(), |r, z| {
            let t = self.value(z);
            let gz = (one - alpha.conj() * t).unscale(norm);
            r.max(modulus(gz * theta.value(z) + t * gz.conj()))
        });
        Ok(FrostmanShift { alpha, theta, g, boundary_residual })
    }

    /// Takenaka–Malmquist basis of `K_B`:
    /// `e_k = √(1−|a_k|²)/(1 − ā_k z) · Π_{j<k} (z − a_j)/(1 − ā_j z)`.
    ///
    /// Fails when some `e_k` has coefficient tail above 1e-10 at `order`.
    pub fn tm_basis(&self, order: usize) -> Result<Vec<HardyVector<T>>> {
        let long = 2 * order.max(1);
        let mut g = vec![Complex::default(); long];
        g[0] = re(T::one());
        let mut out = Vec::with_capacity(self.degree());
        let threshold = T::lit(1e-10);
        for &a in &self.zeros {
            let h = div_kernel(&g, a);
            let scale = (T::one() - a.norm_sqr()).sqrt();
            let e = HardyVector::from_coeffs(h.iter().map(|c| c.scale(scale)).collect());
            let tail = e.tail_norm(order);
            if tail > threshold {
                return Err(Error::InsufficientOrder { order, tail: tail.to_f64(), threshold: threshold.to_f64() });
            }
            out.push(e.resized(order));
            g = h.iter().enumerate().map(|(n, &hn)| if n == 0 { -a * hn } else { h[n - 1] - a * hn }).collect();
        }
        let m = columns(&out, order);
        let r = gram_residual(&m);
        if r > threshold {
            return Err(Error::NotOrthonormal { residual: r.to_f64() });
        }
        Ok(out)
    }

    /// [`tm_basis`](Self::tm_basis) as the columns of an `order × d` matrix.
    pub fn tm_matrix(&self, order: usize) -> Result<DMatrix<Complex<T>>> {
        Ok(columns(&self.tm_basis(order)?, order))
    }

    /// `C_θ h = z̄ θ h̄` for `h ∈ K_θ`, computed on an `grid`-point boundary
    /// grid and projected back to the order of `h`.
    pub fn conjugation_c_theta(&self, h: &HardyVector<T>, grid: usize) -> Result<HardyVector<T>> {
        let n = h.order();
        let e = self.tm_matrix(n)?;
        let tol = T::lit(1e-8) * h.norm().max(T::one());
        let coeffs = h.coeffs();
        let distance = (coeffs - &e * (e.adjoint() * coeffs)).norm();
        if distance > tol {
            return Err(Error::NotInModelSpace { distance: distance.to_f64() });
        }
        self.conjugate_unchecked(h, grid)?.checked(tol)
    }

    pub(crate) fn conjugate_unchecked(&self, h: &HardyVector<T>, grid: usize) -> Result<Projection<T>> {
        let hs = BoundaryGrid::of_vector(h, grid)?;
        let pts: Vec<Complex<T>> = grid_points(grid).collect();
        let samples = pts.iter().zip(hs.samples()).map(|(&z, &v)| z.conj() * self.value(z) * v.conj()).collect();
        boundary_to_coefficients(&BoundaryGrid::from_samples(samples)?, h.order())
    }

    /// Blaschke file format: `{"phase": [re, im], "zeros": [[re, im], ...]}`.
    pub fn to_file(&self) -> BlaschkeFile {
        BlaschkeFile {
            phase: [self.phase.re.to_f64(), self.phase.im.to_f64()],
            zeros: self.zeros.iter().map(|a| [a.re.to_f64(), a.im.to_f64()]).collect(),
        }
    }
}

impl BlaschkeProduct<f64> {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: BlaschkeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(
            Complex::new(f.phase[0], f.phase[1]),
            f.zeros.iter().map(|z| Complex::new(z[0], z[1])).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeFile {
    pub phase: [f64; 2],
    pub zeros: Vec<[f64; 2]>,
}

fn columns<T: Real>(vs: &[HardyVector<T>], order: usize) -> DMatrix<Complex<T>> {
    DMatrix::from_fn(order, vs.len(), |i, j| vs[j].coeff(i))
}

/// `g / (1 − ā z)` as power series: `h_n = g_n + ā h_{n−1}`.
fn div_kernel<T: Real>(g: &[Complex<T>], a: Complex<T>) -> Vec<Complex<T>> {
    let ab = a.conj();
    let mut out = Vec::with_capacity(g.len());
    let mut prev = Complex::default();
    for &x in g {
        prev = x + ab * prev;
        out.push(prev);
    }
    out
}

/// `g · (a − z)/(1 − ā z)` as power series.
fn mul_factor<T: Real>(g: &[Complex<T>], a: Complex<T>) -> Vec<Complex<T>> {
    let h = div_kernel(g, a);
    (0..h.len()).map(|n| a * h[n] - if n == 0 { Complex::default() } else { h[n - 1] }).collect()
}

/// Result of [`BlaschkeProduct::frostman_shift`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrostmanShift<T: Real> {
    pub alpha: Complex<T>,
    pub theta: BlaschkeProduct<T>,
    pub g: HardyVector<T>,
    /// `max |g_α θ_α + θ conj(g_α)|` on the boundary grid.
    pub boundary_residual: T,
}

/// Disk automorphism `μ(z) = (α − z)/(1 − ᾱz)`, an involution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap<T: Real> {
    alpha: Complex<T>,
}

impl<T: Real> MobiusMap<T> {
    pub fn new(alpha: Complex<T>) -> Result<Self> {
        let r = modulus(alpha);
        if !is_finite(alpha) || !(r < T::one()) {
            return Err(Error::AlphaOutsideDisk { modulus: r.to_f64() });
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn apply(&self, z: Complex<T>) -> Complex<T> {
        (self.alpha - z) / (re(T::one()) - self.alpha.conj() * z)
    }

    /// `max |μ(μ(ζ)) − ζ|` over an `m`-point grid.
    pub fn involution_residual(&self, m: usize) -> T {
        grid_points(m).fold(T::zero(), |r, z| r.max(modulus(self.apply(self.apply(z)) - z)))
    }

    fn weight(&self, z: Complex<T>) -> Complex<T> {
        re((T::one() - self.alpha.norm_sqr()).sqrt()) / (re(T::one()) - self.alpha.conj() * z)
    }

    /// `f∘μ`, sampled on the boundary and projected.
    pub fn compose(&self, f: &HardyVector<T>, trunc: Truncation) -> Result<Projection<T>> {
        let g = BoundaryGrid::sample(trunc.grid, |z| f.horner(self.apply(z)))?;
        boundary_to_coefficients(&g, trunc.order)
    }

    /// `U_μ f = √(1−|α|²)/(1 − ᾱz) · f(μ(z))`, sampled and projected.
    pub fn unitary_apply(&self, f: &HardyVector<T>, trunc: Truncation) -> Result<Projection<T>> {
        let g = BoundaryGrid::sample(trunc.grid, |z| self.weight(z) * f.horner(self.apply(z)))?;
        boundary_to_coefficients(&g, trunc.order)
    }

    /// `U_μ` applied to each column.
    pub fn unitary_apply_columns(&self, m: &DMatrix<Complex<T>>, trunc: Truncation) -> Result<(DMatrix<Complex<T>>, T)> {
        let mut out = DMatrix::zeros(trunc.order, m.ncols());
        let mut residual = T::zero();
        for j in 0..m.ncols() {
            let f = HardyVector::from_dvector(m.column(j).into_owned());
            let p = self.unitary_apply(&f, trunc)?;
            residual = residual.max(p.negative_residual);
            out.set_column(j, p.vector.coeffs());
        }
        Ok((out, residual))
    }

    /// Coefficients of `w = −S*((Su)∘μ)`, for which `U_μ H_u U_μ = H_w`.
    pub fn conjugate_symbol<S: Symbol<T> + ?Sized>(&self, sym: &S, trunc: Truncation) -> Result<Projection<T>> {
        let order = trunc.order + 1;
        let g = BoundaryGrid::sample(trunc.grid, |z| {
            let m = self.apply(z);
            m * sym.value(m)
        })?;
        let p = boundary_to_coefficients(&g, order)?;
        Ok(Projection {
            vector: p.vector.coshift().resized(trunc.order).scale_real(-T::one()),
            negative_residual: p.negative_residual,
            tail_residual: p.tail_residual,
        })
    }
}
