//! Dense complex polynomials in ascending coefficient order.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{modulus, Real};

pub fn eval<T: Real>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::default(), |acc, &c| acc * z + c)
}

pub fn derivative<T: Real>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c.scale(T::count(k))).collect()
}

pub fn multiply<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Π (a_j - z)` in ascending order.
pub fn from_roots_reflected<T: Real>(roots: &[Complex<T>]) -> Vec<Complex<T>> {
    roots.iter().fold(vec![Complex::new(T::one(), T::zero())], |acc, &a| {
        multiply(&acc, &[a, Complex::new(-T::one(), T::zero())])
    })
}

fn max_abs<T: Real>(coeffs: &[Complex<T>]) -> T {
    coeffs.iter().fold(T::zero(), |m, &c| m.max(modulus(c)))
}

/// All roots of the polynomial.
///
/// Low-order coefficients below `zero_tol · max|c|` are treated as exact
/// zeros and deflated to roots at the origin; multiple roots at `0` would
/// otherwise scatter by `ε^{1/k}`. The rest come from the eigenvalues of the
/// companion matrix, each polished by Newton steps.
pub fn roots<T: Real>(coeffs: &[Complex<T>], zero_tol: T) -> Result<Vec<Complex<T>>> {
    let scale = max_abs(coeffs);
    if scale == T::zero() {
        return Err(Error::RootFinding("zero polynomial".into()));
    }
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1] == Complex::default() {
        hi -= 1;
    }
    let coeffs = &coeffs[..hi];
    let mut lo = 0;
    while lo + 1 < coeffs.len() && modulus(coeffs[lo]) <= zero_tol * scale {
        lo += 1;
    }
    let mut out = vec![Complex::default(); lo];
    let p = &coeffs[lo..];
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(out);
    }
    let lead = p[deg];
    let mut comp = DMatrix::<Complex<T>>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex::new(T::one(), T::zero());
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -p[i] / lead;
    }
    let eig = Schur::new(comp)
        .eigenvalues()
        .ok_or_else(|| Error::RootFinding("companion eigenvalues did not converge".into()))?;
    let dp = derivative(p);
    for mut z in eig.iter().copied() {
        for _ in 0..3 {
            let f = eval(p, z);
            let d = eval(&dp, z);
            if d == Complex::default() {
                break;
            }
            let next = z - f / d;
            if modulus(eval(p, next)) < modulus(f) {
                z = next;
            } else {
                break;
            }
        }
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::RootFinding("non-finite root".into()));
        }
        out.push(z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn sorted(mut v: Vec<C>) -> Vec<C> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    #[test]
    fn quadratic_roots() {
        // (z - 1/2)(z + i/3)
        let r = [C::new(0.5, 0.0), C::new(0.0, -1.0 / 3.0)];
        let p = multiply(&[-r[0], C::new(1.0, 0.0)], &[-r[1], C::new(1.0, 0.0)]);
        let got = sorted(roots(&p, 1e-12).unwrap());
        let want = sorted(r.to_vec());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn multiple_root_at_origin_is_deflated() {
        let p = vec![C::new(1e-17, 0.0), C::new(-1e-18, 0.0), C::new(0.0, 0.0), C::new(2.0, 0.0)];
        let got = roots(&p, 1e-11).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|z| *z == C::new(0.0, 0.0)));
    }

    #[test]
    fn reflected_product_matches_roots() {
        let zs = [C::new(0.3, 0.1), C::new(-0.2, 0.5), C::new(0.0, -0.6)];
        let p = from_roots_reflected(&zs);
        for &z in &zs {
            assert!(eval(&p, z).norm() < 1e-15);
        }
        // leading coefficient (-1)^3
        assert_eq!(p[3], C::new(-1.0, 0.0));
    }
}
