//! Schmidt subspaces from the Hermitian eigendecomposition of `ΓΓ*`,
//! Takagi factorization and subspace distances.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::dense;
use crate::error::{Error, Result};
use crate::hankel::{operator_norm, HankelMatrix};
use crate::scalar::{modulus, unit_phase, Real};

/// One Schmidt subspace `E(s) = Ker(H_u² − s²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtBlock<T: Real> {
    pub s: T,
    /// `N × d`, orthonormal columns.
    pub basis: DMatrix<Complex<T>>,
    /// The eigenvalues of `ΓΓ*` grouped into this block.
    pub eigenvalues: Vec<T>,
    /// `false` when a neighbouring cluster sits within ten times the spread.
    pub reliable: bool,
}

impl<T: Real> SchmidtBlock<T> {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }

    /// Largest relative deviation of the grouped eigenvalues from their mean.
    pub fn spread(&self) -> T {
        let mean = self.s * self.s;
        self.eigenvalues.iter().fold(T::zero(), |m, &l| m.max((l - mean).abs())) / mean
    }

    /// `‖ΓΓ*F − s²F‖`.
    pub fn eigen_residual(&self, h: &HankelMatrix<T>) -> T {
        operator_norm(&(h.square() * &self.basis - &self.basis * Complex::new(self.s * self.s, T::zero())))
    }

    /// `‖(I − FF*) Γ conj(F)‖`: how far `H_u` moves the block out of itself.
    pub fn invariance_residual(&self, h: &HankelMatrix<T>) -> T {
        let img = h.apply_columns(&self.basis);
        let inside = &self.basis * (self.basis.adjoint() * &img);
        operator_norm(&(img - inside))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition<T: Real> {
    /// Blocks in decreasing order of `s`.
    pub blocks: Vec<SchmidtBlock<T>>,
    pub kernel_dim: usize,
    pub warnings: Vec<String>,
}

impl<T: Real> SchmidtDecomposition<T> {
    pub fn singular_values(&self) -> Vec<(T, usize)> {
        self.blocks.iter().map(|b| (b.s, b.multiplicity())).collect()
    }
}

/// Rotates each column so its first non-negligible entry is real positive.
fn normalize_columns<T: Real>(m: &mut DMatrix<Complex<T>>) {
    for mut col in m.column_iter_mut() {
        let scale = col.iter().fold(T::zero(), |acc, &c| acc.max(modulus(c)));
        if let Some(&lead) = col.iter().find(|&&c| modulus(c) > T::lit(1e-10) * scale) {
            let w = unit_phase(lead).conj();
            col.iter_mut().for_each(|c| *c *= w);
        }
    }
}

/// Eigenspaces of `ΓΓ*`: eigenvalues below `cluster_tol·λ_max` form the
/// kernel, the rest are grouped into clusters of relative spread below
/// `cluster_tol`.
pub fn schmidt_decompose<T: Real>(h: &HankelMatrix<T>, cluster_tol: T) -> Result<SchmidtDecomposition<T>> {
    if !(cluster_tol > T::zero() && cluster_tol < T::one()) {
        return Err(Error::Config(format!("cluster_tol must lie in (0, 1), got {}", cluster_tol.to_f64())));
    }
    let n = h.order();
    let (values, vectors) = dense::hermitian_eigen(&h.square())?;
    let lmax = values.first().copied().unwrap_or_else(T::zero);
    let cutoff = cluster_tol * lmax;
    let rank = values.iter().take_while(|&&l| lmax > T::zero() && l >= cutoff).count();

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    while start < rank {
        let mut end = start + 1;
        while end < rank && (values[start] - values[end]).abs() <= cluster_tol * values[start] {
            end += 1;
        }
        clusters.push((start, end));
        start = end;
    }

    let mut warnings = Vec::new();
    let mut blocks = Vec::with_capacity(clusters.len());
    for (k, &(lo, hi)) in clusters.iter().enumerate() {
        let group = &values[lo..hi];
        let mean = group.iter().fold(T::zero(), |acc, &l| acc + l) / T::count(group.len());
        let spread = group.iter().fold(T::zero(), |m, &l| m.max((l - mean).abs()));
        let margin = T::lit(10.0) * spread.max(cluster_tol * lmax);
        let above = if k == 0 { None } else { Some(values[lo - 1] - values[lo]) };
        let below = if hi < n { Some(values[hi - 1] - values[hi]) } else { None };
        let reliable = above.map_or(true, |g| g > margin) && below.map_or(true, |g| g > margin);
        let s = mean.sqrt();
        if !reliable {
            warnings.push(format!(
                "block {k} (s = {:.6e}) is not well separated from its neighbours; results may be unreliable",
                s.to_f64()
            ));
        }
        let mut basis = vectors.columns(lo, hi - lo).into_owned();
        normalize_columns(&mut basis);
        blocks.push(SchmidtBlock { s, basis, eigenvalues: group.to_vec(), reliable });
    }
    Ok(SchmidtDecomposition { blocks, kernel_dim: n - rank, warnings })
}

/// `Γ = U·diag(σ)·Uᵀ` with `U` unitary and `σ` nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Takagi<T: Real> {
    pub u: DMatrix<Complex<T>>,
    pub sigma: DVector<T>,
}

impl<T: Real> Takagi<T> {
    pub fn reconstruct(&self) -> DMatrix<Complex<T>> {
        let scaled = DMatrix::from_fn(self.u.nrows(), self.u.ncols(), |i, j| self.u[(i, j)].scale(self.sigma[j]));
        scaled * self.u.transpose()
    }
}

/// Takagi factorization of a complex symmetric matrix.
///
/// `Γ conj(v) = σ v` with `v = x + iy` is the real symmetric eigenproblem
/// `[[Re Γ, Im Γ], [Im Γ, −Re Γ]]·[x; y] = σ[x; y]`, whose spectrum is
/// symmetric about zero. Eigenvectors for the positive eigenvalues give the
/// Takagi vectors; the kernel is filled in with any orthonormal complement.
pub fn takagi_factorize<T: Real>(g: &DMatrix<Complex<T>>) -> Result<Takagi<T>> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::Shape(format!("Takagi of a {}x{} matrix", n, g.ncols())));
    }
    let scale = operator_norm(g);
    if operator_norm(&(g - g.transpose())) > T::lit(1e-12) * scale.max(T::one()) {
        return Err(Error::Shape("Takagi factorization needs a symmetric matrix".into()));
    }
    let mut m = DMatrix::<T>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = g[(i, j)];
            m[(i, j)] = z.re;
            m[(i, j + n)] = z.im;
            m[(i + n, j)] = z.im;
            m[(i + n, j + n)] = -z.re;
        }
    }
    let peak = m.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    m.iter_mut().filter(|x| x.abs() < T::lit(1e-40) * peak).for_each(|x| *x = T::zero());
    let eig = m.symmetric_eigen();
    let mut idx: Vec<usize> = (0..2 * n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap_or(std::cmp::Ordering::Equal));
    let top = eig.eigenvalues[idx[0]].max(T::zero());
    let floor = T::lit(1e-12) * top;
    let rank = idx.iter().take(n).take_while(|&&i| eig.eigenvalues[i] > floor && top > T::zero()).count();

    let mut u = DMatrix::<Complex<T>>::zeros(n, n);
    let mut sigma = DVector::<T>::zeros(n);
    for (k, &i) in idx.iter().take(rank).enumerate() {
        let v = eig.eigenvectors.column(i);
        let norm = v.norm();
        for r in 0..n {
            u[(r, k)] = Complex::new(v[r], v[r + n]).unscale(norm);
        }
        sigma[k] = eig.eigenvalues[i];
    }
    if rank < n {
        let rest = dense::complement(&u.columns(0, rank).into_owned())?;
        if rest.ncols() != n - rank {
            return Err(Error::Shape(format!("kernel completion has {} columns, expected {}", rest.ncols(), n - rank)));
        }
        u.columns_mut(rank, n - rank).copy_from(&rest);
    }
    let t = Takagi { u, sigma };
    let residual = operator_norm(&(t.reconstruct() - g));
    let threshold = T::lit(1e-10) * scale.max(T::default_epsilon());
    if !(residual <= threshold) {
        return Err(Error::Takagi { residual: residual.to_f64(), threshold: threshold.to_f64() });
    }
    Ok(t)
}

/// `max |BᴴB − I|` entrywise.
pub fn gram_residual<T: Real>(b: &DMatrix<Complex<T>>) -> T {
    let gram = b.adjoint() * b;
    let k = gram.nrows();
    (gram - DMatrix::<Complex<T>>::identity(k, k)).iter().fold(T::zero(), |m, &c| m.max(modulus(c)))
}

/// `‖Π_A − Π_B‖` for subspaces given by orthonormal bases: `0` for equal
/// subspaces, `1` when the dimensions differ or a direction of one is
/// orthogonal to the other.
pub fn subspace_gap<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> Result<T> {
    if a.nrows() != b.nrows() {
        return Err(Error::Shape(format!("ambient orders {} vs {}", a.nrows(), b.nrows())));
    }
    let tol = T::lit(1e-8);
    for m in [a, b] {
        let r = gram_residual(m);
        if r > tol {
            return Err(Error::NotOrthonormal { residual: r.to_f64() });
        }
    }
    if a.ncols() != b.ncols() {
        return Ok(T::one());
    }
    if a.ncols() == 0 {
        return Ok(T::zero());
    }
    // ‖(I − Π_B)A‖ = ‖(I − Π_A)B‖ when the dimensions agree; use the larger
    // of the two to be safe against rounding in either basis.
    let ra = a - b * (b.adjoint() * a);
    let rb = b - a * (a.adjoint() * b);
    let gap = operator_norm(&ra).max(operator_norm(&rb));
    Ok(gap.min(T::one()))
}

/// Orthonormal basis of the column span, dropping directions with singular
/// value below `rel_tol·σ_max`.
pub fn orthonormalize<T: Real>(m: &DMatrix<Complex<T>>, rel_tol: T) -> DMatrix<Complex<T>> {
    dense::orthonormal_span(m, rel_tol)
}

/// Orthonormal basis of `{B c : c ⊥ w}` for an orthonormal `B`, i.e. the
/// part of `span(B)` orthogonal to `B w`. Returns `B` when `w = 0`.
pub fn complement_in<T: Real>(basis: &DMatrix<Complex<T>>, w: &DVector<Complex<T>>) -> DMatrix<Complex<T>> {
    let d = basis.ncols();
    let wn = w.norm();
    if wn == T::zero() {
        return basis.clone();
    }
    let v = DMatrix::from_column_slice(d, 1, w.unscale(wn).as_slice());
    basis * dense::complement(&v).expect("complement of a unit vector")
}
