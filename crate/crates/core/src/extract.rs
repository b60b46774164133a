//! Structure of a Schmidt subspace: `E(s) = p·K_θ` with
//! `H_u(p h) = s e^{iφ} p z̄ θ h̄` for `h ∈ K_θ`.
//!
//! The subspace is probed through the projection `q` of a normalized Szegő
//! kernel `k̂_α` onto `E`. Writing `E = p K_θ` with `θ(α) = 0`, the
//! reproducing kernel of `E` at `α` is proportional to `p k_α`, hence
//! `H_u q = s·c·q·θ''` with `θ = b_α θ''` and `b_α(z) = (z−α)/(1−ᾱz)`.
//! The quotient `θ''` is fitted from a structured least-squares problem,
//! `p` is read off as `(1 − ᾱz) q / √(1−|α|²)`, and a final Frostman shift
//! moves the zero of `θ` to the origin. With `α = 0` this is the direct
//! construction from the projection of `𝟙`; `α ≠ 0` is needed when `E` is
//! (nearly) orthogonal to `𝟙`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::hankel::HankelMatrix;
use crate::hardy::{boundary_to_coefficients, grid_points, BoundaryGrid, HardyVector};
use crate::dense;
use crate::poly;
use crate::scalar::{cis, modulus, re, unit_phase, Real};
use crate::spectral::{complement_in, orthonormalize, subspace_gap, SchmidtBlock};

/// Projection norm of `𝟙` below which the base point moves off the origin.
pub const DIRECT_THRESHOLD: f64 = 0.1;

/// Radii of the base-point search rings; each ring has 16 points.
pub const BASE_POINT_RADII: [f64; 6] = [0.0, 0.15, 0.30, 0.45, 0.60, 0.75];

/// Which base point the extraction used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `α = 0`: built from the projection of `𝟙`.
    Direct,
    /// `α ≠ 0`: built from the projection of the Szegő kernel at `α`.
    Mobius,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Direct => "direct",
            Branch::Mobius => "mobius",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T: Real> {
    pub s: T,
    /// Isometric multiplier on `K_θ`.
    pub p: HardyVector<T>,
    /// Degree `d` = multiplicity, `θ(0) = 0`, lowest Taylor coefficient
    /// real positive.
    pub theta: BlaschkeProduct<T>,
    /// `e^{iφ}`.
    pub phase: Complex<T>,
    /// `φ ∈ (−π, π]`.
    pub phi: T,
    pub base_point: Complex<T>,
    pub branch: Branch,
    /// `‖Π_E 𝟙‖`.
    pub projection_norm: T,
    /// Relative residual of the quotient fit.
    pub fit_residual: T,
}

/// Options for [`extract_representation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions<T: Real> {
    /// Forces the base point instead of selecting it.
    pub base_point: Option<Complex<T>>,
    /// Boundary grid used for `z̄θh̄` products is `2·oversample·N`.
    pub grid_oversample: usize,
}

impl<T: Real> Default for ExtractOptions<T> {
    fn default() -> Self {
        Self { base_point: None, grid_oversample: 2 }
    }
}

fn grid_for(order: usize, oversample: usize) -> usize {
    (2 * oversample.max(1) * order.max(1)).next_power_of_two()
}

fn column<T: Real>(m: &DMatrix<Complex<T>>, j: usize) -> HardyVector<T> {
    HardyVector::from_dvector(m.column(j).into_owned())
}

fn project_onto<T: Real>(basis: &DMatrix<Complex<T>>, f: &HardyVector<T>) -> HardyVector<T> {
    HardyVector::from_dvector(basis * (basis.adjoint() * f.coeffs()))
}

/// `q = Π_E 𝟙 = Σ_j conj(f_j(0)) f_j` and `‖q‖`.
pub fn extremal_projection<T: Real>(basis: &DMatrix<Complex<T>>) -> (HardyVector<T>, T) {
    let q = project_onto(basis, &HardyVector::one(basis.nrows()));
    let norm = q.norm();
    (q, norm)
}

/// `‖Π_E k̂_α‖² = (1 − |α|²) Σ_j |f_j(α)|²` for an orthonormal basis.
fn kernel_weight<T: Real>(basis: &DMatrix<Complex<T>>, alpha: Complex<T>) -> T {
    let w = T::one() - alpha.norm_sqr();
    (0..basis.ncols()).fold(T::zero(), |acc, j| acc + column(basis, j).horner(alpha).norm_sqr()) * w
}

/// Base point `α` for the extraction: `0` when `‖Π_E 𝟙‖ > 0.1`, otherwise
/// the point of the ring grid maximizing `‖Π_E k̂_α‖²` (the origin excluded).
pub fn base_point_select<T: Real>(basis: &DMatrix<Complex<T>>) -> Result<Complex<T>> {
    let (_, norm) = extremal_projection(basis);
    if norm > T::lit(DIRECT_THRESHOLD) {
        return Ok(Complex::default());
    }
    let mut best = (T::zero(), Complex::default());
    for &r in BASE_POINT_RADII.iter().skip(1) {
        for k in 0..16 {
            let alpha = cis(T::two_pi() * T::count(k) / T::count(16)).scale(T::lit(r));
            let w = kernel_weight(basis, alpha);
            if w > best.0 {
                best = (w, alpha);
            }
        }
    }
    if !(best.0 > T::lit(1e-6)) {
        return Err(Error::NoBasePoint { max: best.0.to_f64() });
    }
    Ok(best.1)
}

/// Inner quotient fit: finds a Blaschke product `φ` of degree `k` and a
/// constant `c` with `y ≈ c·q·φ`, by solving `q·A − y·(B − 1) = y` for
/// polynomials `A`, `B` of degree `k` (`B(0) = 1`) in least squares over
/// all `N` coefficients. `A/B` must be inner; its zeros are those of `A`.
///
/// Returns `(φ, c, relative residual)`.
pub fn fit_inner_quotient<T: Real>(
    q: &HardyVector<T>,
    y: &HardyVector<T>,
    k: usize,
) -> Result<(BlaschkeProduct<T>, Complex<T>, T)> {
    let n = q.order();
    if y.order() != n {
        return Err(Error::Shape(format!("orders {} and {}", n, y.order())));
    }
    let qs = q.as_slice();
    let ys = y.as_slice();
    let cols = 2 * k + 1;
    let mut m = DMatrix::<Complex<T>>::zeros(n, cols);
    for i in 0..n {
        for j in 0..=k.min(i) {
            m[(i, j)] = qs[i - j];
        }
        for j in 1..=k.min(i) {
            m[(i, k + j)] = -ys[i - j];
        }
    }
    let rhs = DVector::from_column_slice(ys);
    let sol = dense::lstsq(&m, &rhs, T::lit(1e-13)).map_err(|e| Error::Extraction(format!("quotient fit: {e}")))?;
    let a: Vec<Complex<T>> = (0..=k).map(|j| sol[j]).collect();
    let mut b = vec![re(T::one())];
    b.extend((1..=k).map(|j| sol[k + j]));

    let zeros = if k == 0 { Vec::new() } else { poly::roots(&a, T::lit(1e-11))? };
    if zeros.len() != k {
        return Err(Error::Extraction(format!("quotient numerator has {} roots, expected {k}", zeros.len())));
    }
    if let Some(r) = zeros.iter().map(|&z| modulus(z)).find(|&r| !(r < T::one() - T::lit(1e-10))) {
        return Err(Error::RootOnCircle { modulus: r.to_f64() });
    }
    // A/B must have constant modulus on the circle.
    let mods: Vec<T> = grid_points(256).map(|z| modulus(poly::eval(&a, z) / poly::eval(&b, z))).collect();
    let mean = mods.iter().fold(T::zero(), |s, &x| s + x) / T::count(mods.len());
    let deviation = mods.iter().fold(T::zero(), |r, &x| r.max((x / mean - T::one()).abs()));
    if !(deviation <= T::lit(1e-6)) {
        return Err(Error::NotInner { deviation: deviation.to_f64() });
    }

    let phi = BlaschkeProduct::new(re(T::one()), zeros)?;
    let qphi = q.mul_truncated(&phi.coefficients(n), n);
    let denom = qphi.norm_squared();
    if denom == T::zero() {
        return Err(Error::Extraction("degenerate quotient fit".into()));
    }
    let c = y.inner(&qphi).unscale(denom);
    let miss = (y - &qphi.scale(c)).norm();
    let residual = if y.norm() > T::zero() { miss / y.norm() } else { miss };
    Ok((phi, c, residual))
}

/// Direct recovery of `θ` (with `θ(0) = 0`) and `e^{iφ}` from a multiplier
/// `p` and `H_u p`, using `H_u p = s e^{iφ} p S*θ`.
pub fn recover_theta<T: Real>(
    p: &HardyVector<T>,
    hup: &HardyVector<T>,
    s: T,
    degree: usize,
) -> Result<(BlaschkeProduct<T>, Complex<T>, T)> {
    if degree == 0 {
        return Err(Error::Extraction("degree must be at least 1".into()));
    }
    let y = hup.scale_real(T::one() / s);
    let (inner, c, residual) = fit_inner_quotient(p, &y, degree - 1)?;
    // θ = z·inner; z is the factor (0 − z) with phase −1
    let mut zeros = vec![Complex::default()];
    zeros.extend_from_slice(inner.zeros());
    let theta = BlaschkeProduct::new(-inner.phase(), zeros)?;
    // y = c·p·inner = c·p·z̄θ
    Ok((theta, unit_phase(c), residual))
}

/// Rotates `p` so that `p(0) > 0`, or the first non-negligible
/// coefficient when `p(0) ≈ 0`.
fn normalize_multiplier<T: Real>(p: &HardyVector<T>) -> HardyVector<T> {
    let floor = T::lit(1e-8) * p.norm();
    match p.as_slice().iter().find(|&&c| modulus(c) > floor) {
        Some(&lead) => p.scale(unit_phase(lead).conj()),
        None => p.clone(),
    }
}

/// Extracts `(p, θ, e^{iφ})` for one Schmidt block.
pub fn extract_representation<T: Real>(
    h: &HankelMatrix<T>,
    block: &SchmidtBlock<T>,
    opts: &ExtractOptions<T>,
) -> Result<Representation<T>> {
    let n = h.order();
    let f = &block.basis;
    let d = block.multiplicity();
    if d == 0 || f.nrows() != n {
        return Err(Error::Shape(format!("block of shape {}x{} for order {n}", f.nrows(), d)));
    }
    let s = block.s;
    let (_, projection_norm) = extremal_projection(f);
    let alpha = match opts.base_point {
        Some(a) => {
            if !(modulus(a) < T::one()) {
                return Err(Error::AlphaOutsideDisk { modulus: modulus(a).to_f64() });
            }
            a
        }
        None => base_point_select(f)?,
    };
    let scale = (T::one() - alpha.norm_sqr()).sqrt();
    let kernel = HardyVector::szego_kernel(alpha, n).scale_real(scale);
    let q = project_onto(f, &kernel);
    let qn = q.norm();
    if !(qn > T::lit(1e-8)) {
        return Err(Error::NoBasePoint { max: (qn * qn).to_f64() });
    }
    let q = q.scale_real(T::one() / qn);
    let y = h.apply(&q)?.scale_real(T::one() / s);
    let (inner, _, fit_residual) = fit_inner_quotient(&q, &y, d - 1)?;

    // θ' = b_α·inner with b_α = −(α − z)/(1 − ᾱz), so θ'(α) = 0
    let mut zeros = vec![alpha];
    zeros.extend_from_slice(inner.zeros());
    let theta_alpha = BlaschkeProduct::new(-inner.phase(), zeros)?;
    let ab = alpha.conj();
    let p_alpha = HardyVector::from_coeffs(
        (0..n)
            .map(|k| (q.coeff(k) - if k == 0 { Complex::default() } else { ab * q.coeff(k - 1) }).unscale(scale))
            .collect(),
    );

    let beta = theta_alpha.value(Complex::default());
    let (theta, p) = if modulus(beta) > T::lit(1e-14) {
        let fs = theta_alpha.frostman_shift(beta, n)?;
        let mut zeros = fs.theta.zeros().to_vec();
        let (i, r) = zeros
            .iter()
            .enumerate()
            .map(|(i, &z)| (i, modulus(z)))
            .fold((0, T::max_value().unwrap()), |acc, x| if x.1 < acc.1 { x } else { acc });
        if r > T::lit(1e-8) {
            return Err(Error::Extraction(format!("Frostman shift left theta(0) = {:e}", r.to_f64())));
        }
        zeros[i] = Complex::default();
        (BlaschkeProduct::new(fs.theta.phase(), zeros)?, p_alpha.mul_truncated(&fs.g, n))
    } else {
        (theta_alpha, p_alpha)
    };
    let theta = theta.normalized();
    let p = normalize_multiplier(&p);

    let grid = grid_for(n, opts.grid_oversample);
    let mut acc = Complex::default();
    for e in theta.tm_basis(n)? {
        let lhs = h.apply(&p.mul_truncated(&e, n))?;
        let rhs = p.mul_truncated(&theta.conjugate_unchecked(&e, grid)?.vector, n);
        acc += lhs.inner(&rhs);
    }
    let phase = unit_phase(acc);
    let phi = canonical_angle(phase);
    let branch = if alpha == Complex::default() { Branch::Direct } else { Branch::Mobius };
    Ok(Representation { s, p, theta, phase, phi, base_point: alpha, branch, projection_norm, fit_residual })
}

/// Argument in `(−π, π]`.
fn canonical_angle<T: Real>(z: Complex<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::pi() {
        a + T::two_pi()
    } else {
        a
    }
}

/// Residuals of a representation against its block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport<T: Real> {
    /// `‖Π_E − Π_{pK_θ}‖`.
    pub subspace_gap: T,
    /// `max_k |‖p e_k‖ − 1|`.
    pub isometry: T,
    /// `max_k ‖H_u(p e_k) − s e^{iφ} p z̄θē_k‖`.
    pub action: T,
    /// For `f` in `E ∩ 𝟙⊥`: the larger of `dist(S*f, E)` and `|(S*f, u)|`.
    /// Only evaluated when `|p(0)| > 1e-3`.
    pub near_invariance: Option<T>,
    /// `max_k ‖G_u 𝐂(p e_k) − s e^{iφ} p z̄θē_k‖` with the right side
    /// sampled on the boundary in one product.
    pub linear_form: T,
    /// `‖Π_E u − s e^{iφ} p(0) p S*θ‖`, reported only.
    pub us_crosscheck: T,
    /// `max | |θ| − 1 |` on the boundary grid.
    pub innerness: T,
}

impl<T: Real> VerifyReport<T> {
    /// All gating residuals below `tol`.
    pub fn passes(&self, tol: T) -> bool {
        self.subspace_gap < tol
            && self.isometry < tol
            && self.action < tol
            && self.near_invariance.map_or(true, |r| r < tol)
            && self.linear_form < tol
    }

    /// Gating residuals as `(name, value)`.
    pub fn gating(&self) -> Vec<(&'static str, T)> {
        let mut out = vec![
            ("subspace_gap", self.subspace_gap),
            ("isometry", self.isometry),
            ("action", self.action),
            ("linear_form", self.linear_form),
        ];
        if let Some(r) = self.near_invariance {
            out.push(("near_invariance", r));
        }
        out
    }
}

/// Orthonormal basis of `E ∩ 𝟙⊥`.
fn perp_one<T: Real>(basis: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let r = DVector::from_fn(basis.ncols(), |j, _| basis[(0, j)].conj());
    complement_in(basis, &r)
}

pub fn verify_representation<T: Real>(
    h: &HankelMatrix<T>,
    block: &SchmidtBlock<T>,
    rep: &Representation<T>,
    grid_oversample: usize,
) -> Result<VerifyReport<T>> {
    let n = h.order();
    let grid = grid_for(n, grid_oversample);
    let s = block.s;
    let p = &rep.p;
    let theta = &rep.theta;
    let basis = theta.tm_basis(n)?;
    let pe: Vec<HardyVector<T>> = basis.iter().map(|e| p.mul_truncated(e, n)).collect();
    let pe_mat = DMatrix::from_fn(n, pe.len(), |i, j| pe[j].coeff(i));

    let span = orthonormalize(&pe_mat, T::lit(1e-10));
    let subspace_gap = subspace_gap(&block.basis, &span)?;
    let isometry = pe.iter().fold(T::zero(), |m, v| m.max((v.norm() - T::one()).abs()));

    let mut action = T::zero();
    let mut linear_form = T::zero();
    let p_grid = BoundaryGrid::of_vector(p, grid)?;
    let pts: Vec<Complex<T>> = grid_points(grid).collect();
    for (e, pek) in basis.iter().zip(&pe) {
        let lhs = h.apply(pek)?;
        let ce = theta.conjugate_unchecked(e, grid)?.vector;
        let rhs = p.mul_truncated(&ce, n).scale(rep.phase.scale(s));
        action = action.max((&lhs - &rhs).norm());

        let lin = h.apply_linear(&pek.conj())?;
        let e_grid = BoundaryGrid::of_vector(e, grid)?;
        let samples = pts
            .iter()
            .zip(p_grid.samples().iter().zip(e_grid.samples()))
            .map(|(&z, (&pv, &ev))| pv * z.conj() * theta.value(z) * ev.conj() * rep.phase.scale(s))
            .collect();
        let target = boundary_to_coefficients(&BoundaryGrid::from_samples(samples)?, n)?.vector;
        linear_form = linear_form.max((&lin - &target).norm());
    }

    let p0 = p.coeff(0);
    let near_invariance = if modulus(p0) > T::lit(1e-3) {
        let g = perp_one(&block.basis);
        let u = h.symbol();
        let mut worst = T::zero();
        for j in 0..g.ncols() {
            let sf = column(&g, j).coshift();
            let dist = (&sf - &project_onto(&block.basis, &sf)).norm();
            worst = worst.max(dist).max(modulus(sf.inner(u)));
        }
        Some(worst)
    } else {
        None
    };

    let us = project_onto(&block.basis, h.symbol());
    let s_theta = theta.coefficients(n + 1).coshift().resized(n);
    let predicted = p.mul_truncated(&s_theta, n).scale(rep.phase.scale(s) * p0);
    let us_crosscheck = (&us - &predicted).norm();

    Ok(VerifyReport {
        subspace_gap,
        isometry,
        action,
        near_invariance,
        linear_form,
        us_crosscheck,
        innerness: theta.boundary_deviation(grid.max(256)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::schmidt_decompose;
    use crate::symbol::RationalSymbol;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn unit_columns(n: usize, cols: &[usize]) -> DMatrix<C> {
        DMatrix::from_fn(n, cols.len(), |i, j| if i == cols[j] { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn extremal_projection_examples() {
        let (q, norm) = extremal_projection(&unit_columns(8, &[0, 1]));
        assert_eq!(q, HardyVector::one(8));
        assert_eq!(norm, 1.0);
        let (q, norm) = extremal_projection(&unit_columns(8, &[1]));
        assert_eq!(q, HardyVector::zeros(8));
        assert_eq!(norm, 0.0);

        let a = c(0.5, 0.0);
        let n = 64;
        let k = HardyVector::szego_kernel(a, n).scale_real((0.75f64).sqrt());
        let basis = DMatrix::from_column_slice(n, 1, k.as_slice());
        let (q, norm) = extremal_projection(&basis);
        assert!((norm - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((&q - &HardyVector::szego_kernel(a, n).scale_real(0.75)).norm() < 1e-15);
    }

    #[test]
    fn base_point_examples() {
        assert_eq!(base_point_select(&unit_columns(8, &[0, 1])).unwrap(), c(0.0, 0.0));
        let alpha = base_point_select(&unit_columns(16, &[1])).unwrap();
        assert!(alpha.norm() >= 0.15 - 1e-12);

        // span{(z − 0.3)·k_{0.3}}: only common zero at 0.3
        let n = 64;
        let f = HardyVector::szego_kernel(c(0.3, 0.0), n).mul_truncated(
            &HardyVector::from_coeffs(vec![c(-0.3, 0.0), c(1.0, 0.0)]),
            n,
        );
        let f = f.scale_real(1.0 / f.norm());
        let basis = DMatrix::from_column_slice(n, 1, f.as_slice());
        let alpha = base_point_select(&basis).unwrap();
        assert!((alpha - c(0.3, 0.0)).norm() > 0.1);
        assert!(matches!(base_point_select(&DMatrix::<C>::zeros(8, 1)), Err(Error::NoBasePoint { .. })));
    }

    #[test]
    fn recover_theta_for_shift_symbol() {
        let n = 16;
        let p = HardyVector::one(n);
        let hup = HardyVector::monomial(1, n);
        let (theta, phase, resid) = recover_theta(&p, &hup, 1.0, 2).unwrap();
        assert_eq!(theta.degree(), 2);
        for z in [c(0.3, 0.1), c(-0.5, 0.5)] {
            assert!((theta.value(z) * phase - z * z).norm() < 1e-13);
        }
        assert!(resid < 1e-14);
        assert!(theta.boundary_deviation(256) < 1e-12);
    }

    #[test]
    fn recover_theta_rank_one() {
        let a = c(0.5, 0.0);
        let n = 64;
        let u = RationalSymbol::simple_pole(a, c(1.0, 0.0)).unwrap();
        let h = HankelMatrix::build(&u, n);
        let p = HardyVector::szego_kernel(a, n).scale_real(0.75f64.sqrt());
        let (theta, phase, _) = recover_theta(&p, &h.apply(&p).unwrap(), 4.0 / 3.0, 1).unwrap();
        assert_eq!(theta.degree(), 1);
        assert_eq!(theta.zeros()[0], c(0.0, 0.0));
        // H_u p = s e^{iφ} p z̄ θ
        let rhs = p.mul_truncated(&theta.coefficients(n + 1).coshift().resized(n), n).scale(phase * (4.0 / 3.0));
        assert!((&h.apply(&p).unwrap() - &rhs).norm() < 1e-10);
    }

    fn pipeline(u: &RationalSymbol<f64>, n: usize) -> Vec<(Representation<f64>, VerifyReport<f64>)> {
        let h = HankelMatrix::build(u, n);
        let d = schmidt_decompose(&h, 1e-8).unwrap();
        d.blocks
            .iter()
            .map(|b| {
                let rep = extract_representation(&h, b, &ExtractOptions::default()).unwrap();
                let v = verify_representation(&h, b, &rep, 2).unwrap();
                (rep, v)
            })
            .collect()
    }

    #[test]
    fn inner_symbol_z_cubed() {
        let u = RationalSymbol::from_inner(&BlaschkeProduct::monomial(3)).unwrap();
        let out = pipeline(&u, 32);
        assert_eq!(out.len(), 1);
        let (rep, v) = &out[0];
        assert_eq!(rep.theta.degree(), 3);
        assert!(rep.theta.zeros().iter().all(|&z| z == c(0.0, 0.0)));
        assert!((&rep.p - &HardyVector::one(32)).norm() < 1e-12);
        assert!(v.action < 1e-9, "{v:?}");
        assert!(v.passes(1e-9), "{v:?}");
        assert_eq!(rep.branch, Branch::Direct);
    }

    #[test]
    fn rank_one_representation() {
        let a = c(0.5, 0.0);
        let n = 64;
        let u = RationalSymbol::simple_pole(a, c(1.0, 0.0)).unwrap();
        let out = pipeline(&u, n);
        let (rep, v) = &out[0];
        assert!((rep.s - 4.0 / 3.0).abs() < 1e-12);
        let want = HardyVector::szego_kernel(a, n).scale_real(0.75f64.sqrt());
        assert!((&rep.p - &want).norm() < 1e-12);
        assert_eq!(rep.theta.zeros(), &[c(0.0, 0.0)]);
        assert!(v.passes(1e-10), "{v:?}");
        assert!(v.us_crosscheck < 1e-10, "{v:?}");
        assert!(v.near_invariance.is_some());
    }

    #[test]
    fn forced_base_point_gives_same_subspace() {
        let u = RationalSymbol::new(
            vec![],
            vec![
                crate::symbol::PoleTerm::simple(c(0.6, 0.2), c(1.0, 0.0)),
                crate::symbol::PoleTerm::simple(c(-0.4, 0.5), c(0.5, -0.5)),
            ],
        )
        .unwrap();
        let n = 128;
        let h = HankelMatrix::build(&u, n);
        let d = schmidt_decompose(&h, 1e-8).unwrap();
        for b in &d.blocks {
            let a = extract_representation(&h, b, &ExtractOptions::default()).unwrap();
            let opts = ExtractOptions { base_point: Some(c(0.3, -0.4)), ..Default::default() };
            let m = extract_representation(&h, b, &opts).unwrap();
            assert_eq!(m.branch, Branch::Mobius);
            let va = verify_representation(&h, b, &a, 2).unwrap();
            let vm = verify_representation(&h, b, &m, 2).unwrap();
            assert!(va.passes(1e-8), "{va:?}");
            assert!(vm.passes(1e-8), "{vm:?}");
        }
    }

    #[test]
    fn perturbed_theta_is_rejected() {
        let theta = BlaschkeProduct::new(c(1.0, 0.0), vec![c(0.0, 0.0), c(0.4, 0.2)]).unwrap();
        let u = RationalSymbol::from_inner(&theta).unwrap();
        let n = 64;
        let h = HankelMatrix::build(&u, n);
        let d = schmidt_decompose(&h, 1e-8).unwrap();
        let b = &d.blocks[0];
        let mut rep = extract_representation(&h, b, &ExtractOptions::default()).unwrap();
        let mut zeros = rep.theta.zeros().to_vec();
        zeros[1] += c(0.1, 0.0);
        rep.theta = BlaschkeProduct::new(rep.theta.phase(), zeros).unwrap();
        let v = verify_representation(&h, b, &rep, 2).unwrap();
        assert!(v.subspace_gap > 1e-3 && v.action > 1e-3, "{v:?}");
    }
}
