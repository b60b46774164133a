//! Truncated Hankel matrices and the operator identities they satisfy.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hardy::HardyVector;
use crate::scalar::Real;
use crate::symbol::Symbol;

/// `Γ_{nm} = û(n+m)` for `0 <= n, m < N`.
///
/// The anti-linear operator is `H_u f = Γ·conj(f)`; the linear one is
/// `G_u f = Γ·f`, so that `G_u = H_u 𝐂`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
    symbol: HardyVector<T>,
    tail: T,
}

impl<T: Real> HankelMatrix<T> {
    /// Builds `Γ` from the `2N-1` leading coefficients of the symbol.
    pub fn build<S: Symbol<T> + ?Sized>(sym: &S, order: usize) -> Self {
        let coeffs = sym.coefficients(2 * order);
        Self::from_coefficients(&coeffs, order, sym.tail_bound(order))
    }

    /// `coeffs` must hold at least `2N-1` entries; missing ones are zero.
    pub fn from_coefficients(coeffs: &HardyVector<T>, order: usize, tail: T) -> Self {
        let entries = DMatrix::from_fn(order, order, |n, m| coeffs.coeff(n + m));
        Self { entries, symbol: coeffs.resized(order), tail }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    /// `û(0) … û(N-1)`.
    pub fn symbol(&self) -> &HardyVector<T> {
        &self.symbol
    }

    /// Coefficient tail bound of the symbol at order `N`.
    pub fn tail(&self) -> T {
        self.tail
    }

    /// Copy with `Γ_{01}` shifted by `eps`, breaking the symmetry.
    pub fn with_asymmetry(&self, eps: T) -> Self {
        let mut out = self.clone();
        if self.order() > 1 {
            out.entries[(0, 1)] += Complex::new(eps, T::zero());
        }
        out
    }

    fn check(&self, f: &HardyVector<T>) -> Result<()> {
        if f.order() != self.order() {
            return Err(Error::Shape(format!("vector of order {} for Hankel order {}", f.order(), self.order())));
        }
        Ok(())
    }

    /// `H_u f = Γ·conj(f)`.
    pub fn apply(&self, f: &HardyVector<T>) -> Result<HardyVector<T>> {
        self.check(f)?;
        Ok(HardyVector::from_dvector(&self.entries * f.coeffs().map(|c| c.conj())))
    }

    /// `G_u f = Γ·f`.
    pub fn apply_linear(&self, f: &HardyVector<T>) -> Result<HardyVector<T>> {
        self.check(f)?;
        Ok(HardyVector::from_dvector(&self.entries * f.coeffs()))
    }

    /// `H_u` applied to each column of `basis`.
    pub fn apply_columns(&self, basis: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        &self.entries * basis.map(|c| c.conj())
    }

    /// `H_u² = ΓΓ*`, Hermitian positive semidefinite.
    pub fn square(&self) -> DMatrix<Complex<T>> {
        &self.entries * self.entries.adjoint()
    }

    /// Residuals of the shift, symmetry and Toeplitz identities.
    pub fn identity_residuals(&self) -> IdentityResiduals<T> {
        identity_residuals(self)
    }
}

/// `𝐂 f`: coefficientwise conjugation.
pub fn conjugation_c<T: Real>(f: &HardyVector<T>) -> HardyVector<T> {
    f.conj()
}

/// Spectral norm for blocks up to 256, Frobenius norm (an upper bound)
/// beyond that.
pub(crate) fn operator_norm<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    if m.nrows().min(m.ncols()) > 256 {
        return m.norm();
    }
    crate::dense::operator_norm(m)
}

/// Operator-norm residuals of the exact identities, each measured on the
/// interior block where truncation does not reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals<T: Real> {
    /// `S*H_u = H_u S`, entrywise `û(n+m+1)` on the `(N-1)`-block.
    pub shift_intertwining: T,
    /// `S*H_u²S = H_u² − (·,u)u` on the `(N-1)`-block.
    pub square_shift: T,
    /// `S*H_u² − H_u²S* = (·,𝟙)S*H_u u − (·,Su)u` on the `(N-2)`-block.
    pub commutator: T,
    /// `‖Γ − Γᵀ‖`, equivalently `(H_u f, g) = (H_u g, f)`.
    pub symmetry: T,
    /// `S*T_u S = T_u` for the analytic Toeplitz matrix of `u`.
    pub toeplitz: T,
}

impl<T: Real> IdentityResiduals<T> {
    pub fn max(&self) -> T {
        self.shift_intertwining
            .max(self.square_shift)
            .max(self.commutator)
            .max(self.symmetry)
            .max(self.toeplitz)
    }

    /// Named residuals in a fixed order.
    pub fn entries(&self) -> [(&'static str, T); 5] {
        [
            ("shift_intertwining", self.shift_intertwining),
            ("square_shift", self.square_shift),
            ("commutator", self.commutator),
            ("symmetry", self.symmetry),
            ("toeplitz", self.toeplitz),
        ]
    }
}

/// Acceptance threshold for identity residuals: `max(1e-10, 10·tail)`.
pub fn identity_threshold<T: Real>(tail: T) -> T {
    T::lit(1e-10).max(T::lit(10.0) * tail)
}

pub fn identity_residuals<T: Real>(h: &HankelMatrix<T>) -> IdentityResiduals<T> {
    let n = h.order();
    let g = &h.entries;
    if n < 3 {
        let symmetry = operator_norm(&(g - g.transpose()));
        let zero = T::zero();
        return IdentityResiduals { shift_intertwining: zero, square_shift: zero, commutator: zero, symmetry, toeplitz: zero };
    }
    let u = h.symbol.coeffs();
    let m1 = n - 1;
    let m2 = n - 2;

    // (S*Γ)_{nm} = Γ_{n+1,m},  (ΓS)_{nm} = Γ_{n,m+1}
    let shift_intertwining = operator_norm(&(g.view((1, 0), (m1, m1)) - g.view((0, 1), (m1, m1))));

    let a = h.square();
    let uu = u * u.adjoint();
    let square_shift =
        operator_norm(&(a.view((1, 1), (m1, m1)) - (a.view((0, 0), (m1, m1)) - uu.view((0, 0), (m1, m1)))));

    // (S*A)_{nm} = A_{n+1,m};  (AS*)_{nm} = A_{n,m-1}, zero in column 0
    let mut lhs = DMatrix::<Complex<T>>::zeros(m2, m2);
    for j in 0..m2 {
        for i in 0..m2 {
            let left = a[(i + 1, j)];
            let right = if j == 0 { Complex::default() } else { a[(i, j - 1)] };
            lhs[(i, j)] = left - right;
        }
    }
    let hu = g * u.map(|c| c.conj());
    let mut rhs = DMatrix::<Complex<T>>::zeros(m2, m2);
    for i in 0..m2 {
        rhs[(i, 0)] += hu[i + 1];
        for j in 0..m2 {
            let su = if j == 0 { Complex::default() } else { u[j - 1] };
            rhs[(i, j)] -= u[i] * su.conj();
        }
    }
    let commutator = operator_norm(&(lhs - rhs));

    let symmetry = operator_norm(&(g - g.transpose()));

    let t = DMatrix::from_fn(n, n, |i, j| if i >= j { u[i - j] } else { Complex::default() });
    let toeplitz = operator_norm(&(t.view((1, 1), (m1, m1)) - t.view((0, 0), (m1, m1))));

    IdentityResiduals { shift_intertwining, square_shift, commutator, symmetry, toeplitz }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{boundary_to_coefficients, BoundaryGrid};
    use crate::symbol::RationalSymbol;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn z_symbol() -> RationalSymbol<f64> {
        RationalSymbol::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn shift_symbol_matrix() {
        let h = HankelMatrix::build(&z_symbol(), 2);
        assert_eq!(h.entries(), &DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]));
        let sq = h.square();
        assert_eq!(sq, DMatrix::identity(2, 2));
    }

    #[test]
    fn rank_one_is_outer_product() {
        let a = c(0.3, -0.4);
        let h = HankelMatrix::build(&RationalSymbol::simple_pole(a, c(1.0, 0.0)).unwrap(), 16);
        let k = HardyVector::szego_kernel(a, 16).into_dvector();
        let outer = &k * k.transpose();
        assert!((h.entries() - outer).camax() < 1e-15);
        assert_eq!(h.entries(), &h.entries().transpose());
    }

    #[test]
    fn apply_is_antilinear() {
        let h = HankelMatrix::build(&z_symbol(), 4);
        let one = HardyVector::one(4);
        assert_eq!(h.apply(&one).unwrap(), HardyVector::monomial(1, 4));
        let i_one = one.scale(c(0.0, 1.0));
        assert_eq!(h.apply(&i_one).unwrap(), HardyVector::monomial(1, 4).scale(c(0.0, -1.0)));
        assert!(h.apply(&HardyVector::one(3)).is_err());
    }

    #[test]
    fn szego_symbol_action_closed_form() {
        // H_u f = conj(f(a))·k_a for u = k_a
        let a = c(0.5, 0.2);
        let n = 64;
        let h = HankelMatrix::build(&RationalSymbol::simple_pole(a, c(1.0, 0.0)).unwrap(), n);
        let f = HardyVector::from_coeffs(vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.0, 2.0)]).resized(n);
        let want = HardyVector::szego_kernel(a, n).scale(f.evaluate(a).unwrap().conj());
        assert!((&h.apply(&f).unwrap() - &want).norm() < 1e-14);
    }

    #[test]
    fn linear_hankel_is_h_after_c() {
        let h = HankelMatrix::build(&z_symbol(), 4);
        assert_eq!(h.apply_linear(&HardyVector::monomial(1, 4)).unwrap(), HardyVector::one(4));
        assert_eq!(conjugation_c(&HardyVector::one(2).scale(c(0.0, 1.0))), HardyVector::one(2).scale(c(0.0, -1.0)));
        let u = RationalSymbol::simple_pole(c(0.2, 0.6), c(1.0, -2.0)).unwrap();
        let h = HankelMatrix::build(&u, 8);
        let f = HardyVector::from_coeffs((0..8).map(|k| c(k as f64, 1.0 - k as f64 * 0.3)).collect());
        assert_eq!(h.apply_linear(&f).unwrap(), h.apply(&conjugation_c(&f)).unwrap());
    }

    #[test]
    fn apply_matches_boundary_projection() {
        let u = RationalSymbol::new(
            vec![c(0.1, 0.0)],
            vec![crate::symbol::PoleTerm::simple(c(0.6, 0.1), c(1.0, 0.0)), crate::symbol::PoleTerm::simple(c(-0.3, 0.5), c(0.0, 0.7))],
        )
        .unwrap();
        let n = 64;
        let h = HankelMatrix::build(&u, n);
        let f = HardyVector::from_coeffs(vec![c(1.0, 0.0), c(0.5, -0.5), c(0.0, 0.25)]).resized(n);
        let grid = BoundaryGrid::sample(4 * n, |z| u.evaluate(z) * f.evaluate(z).unwrap().conj()).unwrap();
        let p = boundary_to_coefficients(&grid, n).unwrap();
        assert!((&h.apply(&f).unwrap() - &p.vector).norm() < 10.0 * u.tail_bound(n) + 1e-10);
    }

    #[test]
    fn square_of_rank_one() {
        let h = HankelMatrix::build(&RationalSymbol::simple_pole(c(0.5, 0.0), c(1.0, 0.0)).unwrap(), 64);
        let sq = h.square();
        assert_eq!(&sq - sq.adjoint(), DMatrix::zeros(64, 64));
        let eig = sq.symmetric_eigenvalues();
        let top = eig.max();
        assert!((top - (4.0f64 / 3.0).powi(2)).abs() < 1e-12);
        assert!(eig.iter().filter(|&&l| l.abs() > 1e-12).count() == 1);
    }

    #[test]
    fn identities_for_polynomial_symbol_are_exact() {
        let u = RationalSymbol::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.5), c(0.25, 0.0)]).unwrap();
        let r = HankelMatrix::build(&u, 16).identity_residuals();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn identities_for_rank_one_within_tail() {
        let u = RationalSymbol::simple_pole(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let h = HankelMatrix::build(&u, 64);
        let r = h.identity_residuals();
        assert!(r.max() <= identity_threshold(h.tail()), "{r:?}");
    }

    #[test]
    fn identities_vanish_for_zero_symbol() {
        let r = HankelMatrix::build(&RationalSymbol::<f64>::zero(), 8).identity_residuals();
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn asymmetry_is_detected() {
        let u = RationalSymbol::simple_pole(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let h = HankelMatrix::build(&u, 16).with_asymmetry(1e-3);
        let r = h.identity_residuals();
        assert!((r.symmetry - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn bilinear_symmetry() {
        let u = RationalSymbol::simple_pole(c(0.1, 0.7), c(0.3, 1.0)).unwrap();
        let h = HankelMatrix::build(&u, 12);
        let f = HardyVector::from_coeffs((0..12).map(|k| c((k as f64).sin(), (k as f64).cos())).collect());
        let g = HardyVector::from_coeffs((0..12).map(|k| c(1.0 / (k as f64 + 1.0), -0.2)).collect());
        let lhs = h.apply(&f).unwrap().inner(&g);
        let rhs = h.apply(&g).unwrap().inner(&f);
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
