//! Rational symbols and their Fourier coefficients.
//!
//! A symbol is `u(z) = poly(z) + Σ_k c_k / (1 - b̄_k z)^{m_k}` with every
//! `|b_k| < 1`, so `u` is analytic across the closed disk and `H_u` has
//! finite rank (at most `len(poly) + Σ m_k`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::hardy::{grid_points, HardyVector};
use crate::scalar::{is_finite, modulus, Real};

/// Largest supported pole multiplicity.
pub const MAX_MULTIPLICITY: u32 = 4;

/// Anything that can feed a Hankel matrix: Fourier coefficients, boundary
/// values and a bound on the coefficient tail.
pub trait Symbol<T: Real> {
    /// `û(0) … û(order-1)`.
    fn coefficients(&self, order: usize) -> HardyVector<T>;

    /// `u(z)` for `|z| <= 1`.
    fn value(&self, z: Complex<T>) -> Complex<T>;

    /// Upper bound on `‖(û(n))_{n >= order}‖_ℓ²`.
    fn tail_bound(&self, order: usize) -> T;
}

/// The term `c / (1 - b̄ z)^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm<T: Real> {
    pub b: Complex<T>,
    pub multiplicity: u32,
    pub c: Complex<T>,
}

impl<T: Real> PoleTerm<T> {
    pub fn simple(b: Complex<T>, c: Complex<T>) -> Self {
        Self { b, multiplicity: 1, c }
    }

    fn value(&self, z: Complex<T>) -> Complex<T> {
        let d = Complex::new(T::one(), T::zero()) - self.b.conj() * z;
        self.c / d.powu(self.multiplicity)
    }

    /// `c · C(n+m-1, m-1) · b̄^n` for `n < order`.
    fn coefficients_into(&self, out: &mut [Complex<T>]) {
        let m = T::count(self.multiplicity as usize);
        let bb = self.b.conj();
        let mut t = self.c;
        for (n, slot) in out.iter_mut().enumerate() {
            *slot += t;
            let k = T::count(n);
            t = t * bb * ((k + m) / (k + T::one()));
        }
    }

    fn tail_bound(&self, order: usize) -> T {
        let r = modulus(self.b);
        let cabs = modulus(self.c);
        if cabs == T::zero() {
            return T::zero();
        }
        if r == T::zero() {
            return if order == 0 { cabs } else { T::zero() };
        }
        if self.multiplicity == 1 {
            return cabs * r.powi(order as i32) / (T::one() - r * r).sqrt();
        }
        // Σ_{n>=N} (C(n+m-1,m-1) r^n)²: sum explicitly until the ratio of
        // consecutive terms is below one and the remainder is geometric.
        let m = self.multiplicity as usize;
        let mut binom = T::one();
        for j in 1..m {
            binom = binom * T::count(order + j) / T::count(j);
        }
        let mut term = binom * binom * r.powi(2 * order as i32);
        let mut sum = T::zero();
        let mut n = order;
        loop {
            sum += term;
            let ratio = {
                let q = T::count(n + m) / T::count(n + 1);
                q * q * r * r
            };
            let next = term * ratio;
            if ratio < T::one() && next <= T::lit(1e-3) * sum {
                sum += next * ratio / (T::one() - ratio) + next;
                break;
            }
            if term == T::zero() {
                break;
            }
            term = next;
            n += 1;
        }
        cabs * sum.sqrt()
    }
}

/// Rational symbol given by pole data plus a polynomial part.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSymbol<T: Real> {
    poly: Vec<Complex<T>>,
    poles: Vec<PoleTerm<T>>,
}

impl<T: Real> RationalSymbol<T> {
    pub fn new(poly: Vec<Complex<T>>, poles: Vec<PoleTerm<T>>) -> Result<Self> {
        if !poly.iter().all(|&c| is_finite(c)) {
            return Err(Error::NonFinite("polynomial part"));
        }
        for (index, p) in poles.iter().enumerate() {
            if !(is_finite(p.b) && is_finite(p.c)) {
                return Err(Error::NonFinite("pole data"));
            }
            let r = modulus(p.b);
            if !(r < T::one()) {
                return Err(Error::PoleOutsideDisk {
                    index,
                    re: p.b.re.to_f64(),
                    im: p.b.im.to_f64(),
                    modulus: r.to_f64(),
                });
            }
            if p.multiplicity == 0 || p.multiplicity > MAX_MULTIPLICITY {
                return Err(Error::Multiplicity { index, multiplicity: p.multiplicity });
            }
        }
        Ok(Self { poly, poles })
    }

    /// Polynomial symbol `Σ poly_n z^n`.
    pub fn polynomial(poly: Vec<Complex<T>>) -> Result<Self> {
        Self::new(poly, Vec::new())
    }

    pub fn zero() -> Self {
        Self { poly: Vec::new(), poles: Vec::new() }
    }

    /// `c/(1 - b̄z)`, the Szegő kernel at `b` scaled by `c`.
    pub fn simple_pole(b: Complex<T>, c: Complex<T>) -> Result<Self> {
        Self::new(Vec::new(), vec![PoleTerm::simple(b, c)])
    }

    pub fn poly(&self) -> &[Complex<T>] {
        &self.poly
    }

    pub fn poles(&self) -> &[PoleTerm<T>] {
        &self.poles
    }

    /// `û(n) = poly_n + Σ_k c_k C(n+m_k-1, m_k-1) b̄_k^n`.
    pub fn fourier_coefficients(&self, order: usize) -> HardyVector<T> {
        let mut out = vec![Complex::default(); order];
        for (slot, &c) in out.iter_mut().zip(&self.poly) {
            *slot += c;
        }
        for p in &self.poles {
            p.coefficients_into(&mut out);
        }
        HardyVector::from_coeffs(out)
    }

    /// Sum of per-term tail bounds (triangle inequality).
    pub fn tail_bound(&self, order: usize) -> T {
        let poly_tail = self
            .poly
            .iter()
            .skip(order)
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt();
        self.poles.iter().fold(poly_tail, |acc, p| acc + p.tail_bound(order))
    }

    /// Kronecker bound on `rank H_u`: the length of the polynomial support
    /// plus the total pole multiplicity.
    pub fn rank_bound(&self) -> usize {
        let support = self
            .poly
            .iter()
            .rposition(|&c| c != Complex::default())
            .map_or(0, |k| k + 1);
        support + self.poles.iter().map(|p| p.multiplicity as usize).sum::<usize>()
    }

    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        let p = crate::poly::eval(&self.poly, z);
        self.poles.iter().fold(p, |acc, t| acc + t.value(z))
    }

    /// Rational form of `u = S*θ` for a finite Blaschke product `θ`.
    ///
    /// `θ` is expanded in partial fractions by a least-squares fit on the
    /// boundary (basis `z^j` for the zeros at the origin and
    /// `(1 - ā z)^{-r}` for the others); the backward shift then acts
    /// termwise through `S*(1 - b̄z)^{-r} = b̄ Σ_{j=1}^{r} (1 - b̄z)^{-j}`.
    pub fn from_inner(theta: &BlaschkeProduct<T>) -> Result<Self> {
        let tiny = T::lit(1e-12);
        let mut origin = 0usize;
        let mut groups: Vec<(Complex<T>, u32)> = Vec::new();
        for &a in theta.zeros() {
            if modulus(a) <= tiny {
                origin += 1;
            } else if let Some(g) = groups.iter_mut().find(|g| modulus(g.0 - a) <= tiny) {
                g.1 += 1;
            } else {
                groups.push((a, 1));
            }
        }
        if let Some((index, g)) = groups.iter().enumerate().find(|(_, g)| g.1 > MAX_MULTIPLICITY) {
            return Err(Error::Multiplicity { index, multiplicity: g.1 });
        }
        let unknowns = origin + 1 + groups.iter().map(|g| g.1 as usize).sum::<usize>();
        let m = (64 * unknowns).next_power_of_two().max(256);
        let points: Vec<Complex<T>> = grid_points(m).collect();
        let one = Complex::new(T::one(), T::zero());
        let mut a = DMatrix::<Complex<T>>::zeros(m, unknowns);
        let mut rhs = DVector::<Complex<T>>::zeros(m);
        for (i, &z) in points.iter().enumerate() {
            rhs[i] = theta.value(z);
            let mut col = 0;
            let mut zp = one;
            for _ in 0..=origin {
                a[(i, col)] = zp;
                zp *= z;
                col += 1;
            }
            for &(b, mult) in &groups {
                let inv = one / (one - b.conj() * z);
                let mut t = inv;
                for _ in 0..mult {
                    a[(i, col)] = t;
                    t *= inv;
                    col += 1;
                }
            }
        }
        let sol = crate::dense::lstsq(&a, &rhs, T::lit(1e-14)).map_err(|e| Error::Extraction(format!("partial fractions: {e}")))?;
        let resid = (&a * &sol - &rhs).camax();
        if resid > T::lit(1e-9) {
            return Err(Error::Extraction(format!("partial fraction residual {:e}", resid.to_f64())));
        }
        let poly: Vec<Complex<T>> = (1..=origin).map(|j| sol[j]).collect();
        let mut poles = Vec::new();
        let mut col = origin + 1;
        for &(b, mult) in &groups {
            let cs: Vec<Complex<T>> = (0..mult as usize).map(|r| sol[col + r]).collect();
            col += mult as usize;
            for j in 1..=mult as usize {
                let c = cs[j - 1..].iter().fold(Complex::<T>::default(), |acc, &x| acc + x) * b.conj();
                poles.push(PoleTerm { b, multiplicity: j as u32, c });
            }
        }
        Self::new(poly, poles)
    }
}

impl<T: Real> Symbol<T> for RationalSymbol<T> {
    fn coefficients(&self, order: usize) -> HardyVector<T> {
        self.fourier_coefficients(order)
    }

    fn value(&self, z: Complex<T>) -> Complex<T> {
        self.evaluate(z)
    }

    fn tail_bound(&self, order: usize) -> T {
        RationalSymbol::tail_bound(self, order)
    }
}

/// Symbol known only through finitely many coefficients, plus an estimate
/// of what was cut off.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSymbol<T: Real> {
    pub coeffs: HardyVector<T>,
    pub truncation_tail: T,
}

impl<T: Real> CoefficientSymbol<T> {
    pub fn new(coeffs: HardyVector<T>, truncation_tail: T) -> Self {
        Self { coeffs, truncation_tail }
    }
}

impl<T: Real> Symbol<T> for CoefficientSymbol<T> {
    fn coefficients(&self, order: usize) -> HardyVector<T> {
        self.coeffs.resized(order)
    }

    fn value(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.horner(z)
    }

    fn tail_bound(&self, order: usize) -> T {
        self.coeffs.tail_norm(order) + self.truncation_tail
    }
}

/// On-disk symbol format:
/// `{"poly": [[re, im], ...], "poles": [{"b": [re, im], "m": 1, "c": [re, im]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    #[serde(default)]
    pub poly: Vec<[f64; 2]>,
    #[serde(default)]
    pub poles: Vec<PoleFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleFile {
    pub b: [f64; 2],
    #[serde(default = "one")]
    pub m: u32,
    pub c: [f64; 2],
}

fn one() -> u32 {
    1
}

fn cx(p: [f64; 2]) -> Complex<f64> {
    Complex::new(p[0], p[1])
}

impl SymbolFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_symbol(&self) -> Result<RationalSymbol<f64>> {
        let poly = self.poly.iter().copied().map(cx).collect();
        let poles = self
            .poles
            .iter()
            .map(|p| PoleTerm { b: cx(p.b), multiplicity: p.m, c: cx(p.c) })
            .collect();
        RationalSymbol::new(poly, poles)
    }
}

impl RationalSymbol<f64> {
    pub fn from_json(text: &str) -> Result<Self> {
        SymbolFile::parse(text)?.to_symbol()
    }

    pub fn to_file(&self) -> SymbolFile {
        SymbolFile {
            poly: self.poly.iter().map(|c| [c.re, c.im]).collect(),
            poles: self
                .poles
                .iter()
                .map(|p| PoleFile { b: [p.b.re, p.b.im], m: p.multiplicity, c: [p.c.re, p.c.im] })
                .collect(),
        }
    }
}
