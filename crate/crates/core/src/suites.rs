//! Single cases of the randomized property suites. Each function computes
//! the residuals for one input; the verify report and the acceptance tests
//! aggregate them.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::blaschke::{BlaschkeProduct, MobiusMap};
use crate::error::{Error, Result};
use crate::extract::{extract_representation, verify_representation, ExtractOptions, Representation, VerifyReport};
use crate::hankel::{identity_threshold, HankelMatrix, IdentityResiduals};
use crate::hardy::{HardyVector, Truncation};
use crate::spectral::{complement_in, orthonormalize, schmidt_decompose, subspace_gap, SchmidtBlock, SchmidtDecomposition};
use crate::symbol::{CoefficientSymbol, RationalSymbol, Symbol};

type C = Complex<f64>;

/// Identity residuals of one symbol, with `Γ_{01}` optionally perturbed.
pub fn identity_case<S: Symbol<f64> + ?Sized>(sym: &S, order: usize, perturb: f64) -> (IdentityResiduals<f64>, f64) {
    let mut h = HankelMatrix::build(sym, order);
    if perturb != 0.0 {
        h = h.with_asymmetry(perturb);
    }
    (h.identity_residuals(), identity_threshold(h.tail()))
}

fn hv_columns(m: &DMatrix<C>) -> Vec<HardyVector<f64>> {
    (0..m.ncols()).map(|j| HardyVector::from_dvector(m.column(j).into_owned())).collect()
}

fn matrix_of(vs: &[HardyVector<f64>], order: usize) -> DMatrix<C> {
    DMatrix::from_fn(order, vs.len(), |i, j| vs[j].coeff(i))
}

/// Orthonormal basis of `{f ∈ span(basis) : (f, v) = 0}`.
fn complement_of(basis: &DMatrix<C>, v: &HardyVector<f64>) -> DMatrix<C> {
    complement_in(basis, &(basis.adjoint() * v.coeffs()))
}

/// Smallest power of two `>= base` (capped at 1024) at which the model
/// space of `theta` is resolved: `max|a|^n < 1e-13`.
pub fn model_space_order(theta: &BlaschkeProduct<f64>, base: usize) -> usize {
    let r = theta.zeros().iter().fold(0.0f64, |m, a| m.max(a.norm()));
    let mut n = base.next_power_of_two();
    while n < 1024 && r.powi(n as i32) > 1e-13 {
        n *= 2;
    }
    n
}

/// `gap(S*(K_θ ∩ 𝟙⊥), K_θ ∩ (S*θ)⊥)`.
pub fn lemma_backward_shift_case(theta: &BlaschkeProduct<f64>, order: usize) -> Result<f64> {
    let e = theta.tm_matrix(order)?;
    let perp = complement_of(&e, &HardyVector::one(order));
    let shifted: Vec<HardyVector<f64>> = hv_columns(&perp).iter().map(|f| f.coshift()).collect();
    let left = orthonormalize(&matrix_of(&shifted, order), 1e-10);
    let s_theta = theta.coefficients(order + 1).coshift().resized(order);
    let right = complement_of(&e, &s_theta);
    subspace_gap(&left, &right)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrostmanResiduals {
    /// `gap(K_θ, g_α K_{θ_α})`.
    pub gap: f64,
    /// `max |‖g_α h‖ − 1|` over the basis of `K_{θ_α}`.
    pub isometry: f64,
    /// `max |g_α θ_α + θ conj(g_α)|` on the boundary.
    pub boundary: f64,
}

/// Runs at [`model_space_order`] of `θ_α`, which can exceed `order` when
/// `θ_α` has zeros near the circle.
pub fn frostman_case(theta: &BlaschkeProduct<f64>, alpha: C, order: usize) -> Result<FrostmanResiduals> {
    let fs = theta.frostman_shift(alpha, order)?;
    let order = model_space_order(&fs.theta, order.max(model_space_order(theta, order)));
    let fs = theta.frostman_shift(alpha, order)?;
    let e = theta.tm_matrix(order)?;
    let moved: Vec<HardyVector<f64>> = fs.theta.tm_basis(order)?.iter().map(|h| fs.g.mul_truncated(h, order)).collect();
    let isometry = moved.iter().fold(0.0f64, |m, v| m.max((v.norm() - 1.0).abs()));
    let gap = subspace_gap(&e, &orthonormalize(&matrix_of(&moved, order), 1e-10))?;
    Ok(FrostmanResiduals { gap, isometry, boundary: fs.boundary_residual })
}

/// `gap(U_μ(p K_θ), (p∘μ) K_{θ∘μ})`.
pub fn mobius_subspace_case(p: &HardyVector<f64>, theta: &BlaschkeProduct<f64>, mu: &MobiusMap<f64>, order: usize) -> Result<f64> {
    let trunc = Truncation::new(order);
    let pk: Vec<HardyVector<f64>> = theta.tm_basis(order)?.iter().map(|e| p.resized(order).mul_truncated(e, order)).collect();
    let (mapped, _) = mu.unitary_apply_columns(&matrix_of(&pk, order), trunc)?;
    let left = orthonormalize(&mapped, 1e-10);
    let pm = mu.compose(p, trunc)?.vector;
    let tm = theta.compose_mobius(mu)?;
    let rk: Vec<HardyVector<f64>> = tm.tm_basis(order)?.iter().map(|e| pm.mul_truncated(e, order)).collect();
    let right = orthonormalize(&matrix_of(&rk, order), 1e-10);
    subspace_gap(&left, &right)
}

/// Order used for the conjugated symbol and its long-order coefficients.
pub const CONJUGATE_LONG_ORDER: usize = 1024;

/// `w = −S*((Su)∘μ)` at a long order, packaged as a symbol whose tail is
/// the projection's residual.
pub fn conjugated_symbol<S: Symbol<f64> + ?Sized>(sym: &S, mu: &MobiusMap<f64>) -> Result<CoefficientSymbol<f64>> {
    let p = mu.conjugate_symbol(sym, Truncation::new(CONJUGATE_LONG_ORDER))?;
    Ok(CoefficientSymbol::new(p.vector, p.tail_residual + p.negative_residual))
}

/// Smallest order in `{128, 256, 512}` at which both tails are below
/// `1e-10`, else 512.
pub fn covariance_order<S: Symbol<f64> + ?Sized, W: Symbol<f64> + ?Sized>(u: &S, w: &W) -> usize {
    [128, 256, 512]
        .into_iter()
        .find(|&n| u.tail_bound(n) < 1e-10 && w.tail_bound(n) < 1e-10)
        .unwrap_or(512)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceResiduals {
    pub order: usize,
    /// Largest `|s_u − s_w|`; infinite if the block structures differ.
    pub singular_values: f64,
    /// Allowed singular-value deviation: `1e-6 + 10·(tail_u + tail_w)`.
    pub singular_threshold: f64,
    /// Largest `gap(U_μ E_u(s), E_w(s))`.
    pub basis_gap: f64,
    /// `‖ŵ∘w − û‖` over the first `order` coefficients.
    pub double_conjugation: f64,
}

pub fn covariance_case(u: &RationalSymbol<f64>, mu: &MobiusMap<f64>, cluster_tol: f64) -> Result<CovarianceResiduals> {
    let w = conjugated_symbol(u, mu)?;
    let order = covariance_order(u, &w);
    let hu = HankelMatrix::build(u, order);
    let hw = HankelMatrix::build(&w, order);
    let du = schmidt_decompose(&hu, cluster_tol)?;
    let dw = schmidt_decompose(&hw, cluster_tol)?;
    let (singular_values, basis_gap) = if du.singular_values().iter().map(|x| x.1).eq(dw.singular_values().iter().map(|x| x.1)) {
        let sv = du.blocks.iter().zip(&dw.blocks).fold(0.0f64, |m, (a, b)| m.max((a.s - b.s).abs()));
        let trunc = Truncation::new(order);
        let mut gap = 0.0f64;
        for (a, b) in du.blocks.iter().zip(&dw.blocks) {
            let (mapped, _) = mu.unitary_apply_columns(&a.basis, trunc)?;
            gap = gap.max(subspace_gap(&orthonormalize(&mapped, 1e-10), &b.basis)?);
        }
        (sv, gap)
    } else {
        (f64::INFINITY, 1.0)
    };
    let ww = mu.conjugate_symbol(&w, Truncation::new(order))?.vector;
    let double_conjugation = (&ww - &u.fourier_coefficients(order)).norm();
    Ok(CovarianceResiduals {
        order,
        singular_values,
        singular_threshold: 1e-6 + 10.0 * (hu.tail() + hw.tail()),
        basis_gap,
        double_conjugation,
    })
}

/// Outcome of the structure pipeline on one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOutcome {
    pub block: SchmidtBlock<f64>,
    pub result: std::result::Result<(Representation<f64>, VerifyReport<f64>), Error>,
}

/// `Γ → Schmidt blocks → (p, θ, φ) → residuals` for every block.
pub fn structure_case<S: Symbol<f64> + ?Sized>(
    sym: &S,
    order: usize,
    cluster_tol: f64,
    grid_oversample: usize,
) -> Result<(HankelMatrix<f64>, SchmidtDecomposition<f64>, Vec<BlockOutcome>)> {
    let h = HankelMatrix::build(sym, order);
    let dec = schmidt_decompose(&h, cluster_tol)?;
    let opts = ExtractOptions { base_point: None, grid_oversample };
    let outcomes = dec
        .blocks
        .iter()
        .map(|b| {
            let result = extract_representation(&h, b, &opts)
                .and_then(|rep| verify_representation(&h, b, &rep, grid_oversample).map(|v| (rep, v)));
            BlockOutcome { block: b.clone(), result }
        })
        .collect();
    Ok((h, dec, outcomes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobiusBranchCase {
    pub alpha: C,
    pub order: usize,
    pub s: f64,
    /// `‖Π_E 𝟙‖` of the conjugated block, ~0 by construction.
    pub projection_norm: f64,
    pub representation: Representation<f64>,
    pub verify: VerifyReport<f64>,
    /// `gap(E_w, U_μ E_u)`.
    pub block_gap: f64,
    /// `gap(p K_θ, U_μ E_u)` for the extracted `(p, θ)`.
    pub representation_gap: f64,
}

/// Numerator of `f = Σ c_j k_{b_j}`: `f·Π(1 − b̄_j z)`, cut to degree
/// `r − 1`, with the discarded energy.
fn pole_numerator(f: &HardyVector<f64>, poles: &[C]) -> (Vec<C>, f64) {
    let full = poles.iter().fold(f.as_slice().to_vec(), |acc, b| crate::poly::multiply(&acc, &[C::new(1.0, 0.0), -b.conj()]));
    let r = poles.len().min(full.len());
    let cut = full[r..f.order().min(full.len())].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (full[..r].to_vec(), cut)
}

/// Builds a problem whose Schmidt block is orthogonal to `𝟙`: finds a
/// simple, well-separated block of `H_u` whose vector `f` vanishes at some
/// `|α| <= max_alpha`, then conjugates `u` by `μ_α`, so that
/// `U_μ f(0) = √(1−|α|²) f(α) = 0`. Returns `None` when `u` has no such
/// block. `u` must have simple poles and no polynomial part.
pub fn mobius_branch_case(u: &RationalSymbol<f64>, max_alpha: f64, cluster_tol: f64) -> Result<Option<MobiusBranchCase>> {
    if !u.poly().is_empty() || u.poles().iter().any(|p| p.multiplicity != 1) {
        return Err(Error::Config("expected simple poles without polynomial part".into()));
    }
    let poles: Vec<C> = u.poles().iter().map(|p| p.b).collect();
    let h0 = HankelMatrix::build(u, 128);
    let d0 = schmidt_decompose(&h0, cluster_tol)?;
    let mut found = None;
    'blocks: for b in d0.blocks.iter().filter(|b| b.reliable && b.multiplicity() == 1) {
        let f = HardyVector::from_dvector(b.basis.column(0).into_owned());
        let (num, cut) = pole_numerator(&f, &poles);
        if cut > 1e-10 || num.len() < 2 {
            continue;
        }
        for a in crate::poly::roots(&num, 1e-14)? {
            if a.norm() <= max_alpha {
                found = Some((b.s, a));
                break 'blocks;
            }
        }
    }
    let Some((s, alpha)) = found else { return Ok(None) };
    let mu = MobiusMap::new(alpha)?;
    let w = conjugated_symbol(u, &mu)?;
    let order = covariance_order(u, &w);
    let du = schmidt_decompose(&HankelMatrix::build(u, order), cluster_tol)?;
    let hw = HankelMatrix::build(&w, order);
    let dw = schmidt_decompose(&hw, cluster_tol)?;
    let pick = |d: &SchmidtDecomposition<f64>| {
        d.blocks.iter().min_by(|x, y| (x.s - s).abs().total_cmp(&(y.s - s).abs())).cloned().ok_or(Error::Extraction("no Schmidt blocks".into()))
    };
    let (bu, bw) = (pick(&du)?, pick(&dw)?);
    let (mapped, _) = mu.unitary_apply_columns(&bu.basis, Truncation::new(order))?;
    let image = orthonormalize(&mapped, 1e-10);
    let block_gap = subspace_gap(&bw.basis, &image)?;
    let opts = ExtractOptions { base_point: None, grid_oversample: 2 };
    let representation = extract_representation(&hw, &bw, &opts)?;
    let verify = verify_representation(&hw, &bw, &representation, 2)?;
    let pk: Vec<HardyVector<f64>> = representation
        .theta
        .tm_basis(order)?
        .iter()
        .map(|e| representation.p.mul_truncated(e, order))
        .collect();
    let representation_gap = subspace_gap(&orthonormalize(&matrix_of(&pk, order), 1e-10), &image)?;
    Ok(Some(MobiusBranchCase {
        alpha,
        order,
        s: bw.s,
        projection_norm: representation.projection_norm,
        representation,
        verify,
        block_gap,
        representation_gap,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::Branch;
    use crate::random;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn model_space_order_grows_with_the_zeros() {
        let near = BlaschkeProduct::new(c(1.0, 0.0), vec![c(0.3, 0.0)]).unwrap();
        let far = BlaschkeProduct::new(c(1.0, 0.0), vec![c(0.95, 0.0)]).unwrap();
        assert_eq!(model_space_order(&near, 128), 128);
        assert_eq!(model_space_order(&far, 128), 1024);
        assert_eq!(model_space_order(&BlaschkeProduct::monomial(3), 100), 128);
    }

    #[test]
    fn backward_shift_lemma_in_degree_one_is_trivial() {
        let b = BlaschkeProduct::new(c(1.0, 0.0), vec![c(-0.55, 0.4)]).unwrap();
        assert_eq!(lemma_backward_shift_case(&b, 64).unwrap(), 0.0);
    }

    #[test]
    fn pole_numerator_of_a_kernel_sum() {
        // f = k_b has numerator 1
        let b = c(0.4, 0.2);
        let (num, cut) = pole_numerator(&HardyVector::szego_kernel(b, 128), &[b]);
        assert!((num[0] - c(1.0, 0.0)).norm() < 1e-14 && cut < 1e-14);
    }

    #[test]
    fn mobius_branch_case_lands_on_the_mobius_branch() {
        let mut rng = random::rng(5);
        let u = random::rational_symbol(&mut rng, 4, 0.8);
        let case = mobius_branch_case(&u, 0.6, 1e-8).unwrap().expect("seed 5 has a block vector vanishing in the disk");
        assert_eq!(case.representation.branch, Branch::Mobius);
        assert!(case.projection_norm < 1e-8);
        assert!(case.block_gap < 1e-8 && case.representation_gap < 1e-8);
        assert!(case.verify.passes(1e-6));
    }

    #[test]
    fn mobius_branch_case_rejects_polynomial_parts() {
        let u = RationalSymbol::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(mobius_branch_case(&u, 0.6, 1e-8).is_err());
    }
}
