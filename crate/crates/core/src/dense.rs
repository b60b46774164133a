//! Dense complex linear algebra through real embeddings.
//!
//! A complex `n × k` matrix `M = X + iY` acts on `ℝ^{2k}` as
//! `[[X, −Y], [Y, X]]`. Its real singular values are those of `M`, each
//! twice, and the left singular vectors `[a; b]` give complex vectors
//! `a + ib`. The real SVD and least-squares paths of nalgebra are used on
//! the embedding; its complex SVD returns wrong factors on some small
//! Hermitian inputs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{modulus, Real};

/// Entries below these fractions of the largest are dropped before an
/// eigensolve; nalgebra's symmetric QR iteration returns NaN on matrices
/// with entries near `1e-100`. The second level is a retry.
const FLUSH: [f64; 2] = [1e-40, 1e-24];

pub fn embed<T: Real>(m: &DMatrix<Complex<T>>) -> DMatrix<T> {
    let (n, k) = m.shape();
    DMatrix::from_fn(2 * n, 2 * k, |i, j| {
        let z = m[(i % n, j % k)];
        match (i < n, j < k) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

fn embed_vector<T: Real>(v: &DVector<Complex<T>>) -> DVector<T> {
    let n = v.len();
    DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

/// Singular values of `M` in decreasing order, `min(n, k)` of them.
pub fn singular_values<T: Real>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = embed(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s.into_iter().step_by(2).collect()
}

/// Spectral norm.
pub fn operator_norm<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// Orthonormal basis of the column span, keeping left singular directions
/// with `σ > rel_tol·σ_max`.
pub fn orthonormal_span<T: Real>(m: &DMatrix<Complex<T>>, rel_tol: T) -> DMatrix<Complex<T>> {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = embed(m).svd(true, false);
    let u = svd.u.expect("requested U");
    let s = &svd.singular_values;
    let smax = s.iter().fold(T::zero(), |a, &b| a.max(b));
    if !(smax > T::zero()) {
        return DMatrix::zeros(n, 0);
    }
    let mut idx: Vec<usize> = (0..s.len()).filter(|&i| s[i] > rel_tol * smax).collect();
    idx.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal));
    let rank = (idx.len() / 2).min(n);
    let candidates: Vec<DVector<Complex<T>>> =
        idx.iter().map(|&j| DVector::from_fn(n, |i, _| Complex::new(u[(i, j)], u[(i + n, j)]))).collect();
    // Each complex direction appears as [a; b] and [−b; a]; a real
    // orthonormal set of 2r vectors spanning a complex r-space always has
    // a member at complex distance at least 1/√r from any smaller subspace.
    let floor = T::lit(0.5) / T::count(rank.max(1)).sqrt();
    let mut basis: Vec<DVector<Complex<T>>> = Vec::with_capacity(rank);
    while basis.len() < rank {
        let mut best: Option<(T, DVector<Complex<T>>)> = None;
        for c in &candidates {
            let mut r = c.clone();
            for _ in 0..2 {
                for b in &basis {
                    let coef = b.dotc(&r);
                    r -= b * coef;
                }
            }
            let norm = r.norm();
            if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
                best = Some((norm, r));
            }
        }
        match best {
            Some((norm, r)) if norm > floor => basis.push(r.unscale(norm)),
            _ => break,
        }
    }
    DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i])
}

/// Least-squares solution of `M x = b`, singular values below
/// `rel_tol·σ_max` treated as zero.
pub fn lstsq<T: Real>(m: &DMatrix<Complex<T>>, b: &DVector<Complex<T>>, rel_tol: T) -> Result<DVector<Complex<T>>> {
    let k = m.ncols();
    if m.nrows() != b.len() {
        return Err(Error::Shape(format!("least squares with {} rows and {} right-hand entries", m.nrows(), b.len())));
    }
    let svd = embed(m).svd(true, true);
    let smax = svd.singular_values.iter().fold(T::zero(), |a, &s| a.max(s));
    let x = svd.solve(&embed_vector(b), rel_tol * smax).map_err(|e| Error::Shape(e.to_string()))?;
    Ok(DVector::from_fn(k, |i, _| Complex::new(x[i], x[i + k])))
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns `u`, read off the projector `I − UUᴴ` whose
/// eigenvalues are 0 or 1.
pub fn complement<T: Real>(u: &DMatrix<Complex<T>>) -> Result<DMatrix<Complex<T>>> {
    let n = u.nrows();
    let proj = DMatrix::<Complex<T>>::identity(n, n) - u * u.adjoint();
    let (values, vectors) = hermitian_eigen(&proj)?;
    let keep = values.iter().take_while(|&&v| v > T::lit(0.5)).count();
    Ok(vectors.columns(0, keep).into_owned())
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues in decreasing
/// order and the matching orthonormal eigenvectors as columns.
pub fn hermitian_eigen<T: Real>(a: &DMatrix<Complex<T>>) -> Result<(Vec<T>, DMatrix<Complex<T>>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape(format!("eigen-decomposition of a {}x{} matrix", n, a.ncols())));
    }
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let scale = a.iter().fold(T::zero(), |m, z| m.max(modulus(*z)));
    if !scale.is_finite() {
        return Err(Error::NonFinite("Hermitian matrix"));
    }
    if scale == T::zero() {
        return Ok((vec![T::zero(); n], DMatrix::identity(n, n)));
    }
    let mut last = Error::NonFinite("eigen-decomposition");
    for flush in FLUSH {
        match flushed_eigen(a, scale, T::lit(flush)) {
            Ok((values, vectors)) => return Ok((values.into_iter().map(|v| v * scale).collect(), vectors)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn flushed_eigen<T: Real>(a: &DMatrix<Complex<T>>, scale: T, flush: T) -> Result<(Vec<T>, DMatrix<Complex<T>>)> {
    let n = a.nrows();
    let h = DMatrix::from_fn(n, n, |i, j| {
        let z = (a[(i, j)] + a[(j, i)].conj()).unscale(T::lit(2.0) * scale);
        if modulus(z) < flush {
            Complex::default()
        } else {
            z
        }
    });
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    if values.iter().any(|v| !v.is_finite()) || vectors.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("eigen-decomposition"));
    }
    let lam = DMatrix::from_diagonal(&DVector::from_iterator(n, values.iter().map(|&v| Complex::new(v, T::zero()))));
    let residual = (&h * &vectors - &vectors * lam).norm();
    if residual > T::lit(1e-10) * T::count(n).sqrt() {
        return Err(Error::Shape(format!("eigen-decomposition residual {:e}", residual.to_f64())));
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    type C = Complex<f64>;

    fn gram_defect(u: &DMatrix<C>) -> f64 {
        (u.adjoint() * u - DMatrix::<C>::identity(u.ncols(), u.ncols())).norm()
    }

    #[test]
    fn hermitian_projector() {
        // nalgebra's complex SVD reports σ ≈ 1.0067 here
        let p = DMatrix::from_row_slice(
            2,
            2,
            &[
                C::new(0.18701881665375353, 0.0),
                C::new(-0.38915091978825894, -0.024583337835524334),
                C::new(-0.38915091978825894, 0.024583337835524334),
                C::new(0.8129811833462461, 0.0),
            ],
        );
        let s = singular_values(&p);
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1] < 1e-12, "{s:?}");
        let u = orthonormal_span(&p, 1e-8);
        assert_eq!(u.ncols(), 1);
        assert!(gram_defect(&u) < 1e-12);
        assert!((&p * &u - &u).norm() < 1e-12);
    }

    #[test]
    fn span_of_random_and_degenerate_matrices() {
        let mut rng = random::rng(5);
        for (n, k) in [(6, 3), (40, 5), (3, 6)] {
            let m = DMatrix::from_fn(n, k, |_, _| random::disk_point(&mut rng, 1.0));
            let u = orthonormal_span(&m, 1e-10);
            assert_eq!(u.ncols(), n.min(k));
            assert!(gram_defect(&u) < 1e-12);
            assert!((&m - &u * (u.adjoint() * &m)).norm() < 1e-12);
        }
        // repeated columns and an identity block with a double singular value
        let v = DVector::from_fn(10, |_, _| random::disk_point(&mut rng, 1.0));
        let m = DMatrix::from_columns(&[v.clone(), v.scale(2.0), v * C::new(0.0, 1.0)]);
        assert_eq!(orthonormal_span(&m, 1e-10).ncols(), 1);
        let id = DMatrix::<C>::identity(8, 4);
        let u = orthonormal_span(&id, 1e-10);
        assert_eq!(u.ncols(), 4);
        assert!((&id - &u * (u.adjoint() * &id)).norm() < 1e-12);
    }

    #[test]
    fn least_squares_matches_normal_equations() {
        let mut rng = random::rng(6);
        let m = DMatrix::from_fn(12, 4, |_, _| random::disk_point(&mut rng, 1.0));
        let b = DVector::from_fn(12, |_, _| random::disk_point(&mut rng, 1.0));
        let x = lstsq(&m, &b, 1e-14).unwrap();
        assert!((m.adjoint() * (&m * &x - &b)).norm() < 1e-12);
    }

    #[test]
    fn eigen_of_fast_decaying_gram_matrix() {
        // Γ_nm = 2^{−(n+m)}: ΓΓ* has entries down to 4^{−2N}
        let n = 128;
        let g = DMatrix::from_fn(n, n, |i, j| C::new(0.5f64.powi((i + j) as i32), 0.0));
        let (values, vectors) = hermitian_eigen(&(&g * g.adjoint())).unwrap();
        assert!((values[0] - (4.0f64 / 3.0).powi(2)).abs() < 1e-12);
        assert!(values[1].abs() < 1e-12);
        assert!(gram_defect(&vectors) < 1e-10);
    }
}
