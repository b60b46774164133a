//! Schmidt subspaces of finite-rank Hankel operators on the Hardy space.
//!
//! The anti-linear Hankel operator `H_u f = P(u f̄)` with a rational symbol
//! `u` is realized by its truncated matrix `Γ = {û(n+m)}`. Its Schmidt
//! subspaces `E(s) = Ker(H_u² − s²)` are computed from the Hermitian
//! `ΓΓ*`, and each one is written as `p·K_θ` for an inner function `θ` and
//! an isometric multiplier `p`, together with the phase `e^{iφ}` in
//! `H_u(p h) = s e^{iφ} p z̄ θ h̄`.
//!
//! The numerical core is generic over the real scalar ([`Real`]); the
//! aliases at the crate root fix it to `f64`, which is what the file
//! formats, reports and default tolerances assume.

pub mod blaschke;
pub mod dense;
pub mod error;
pub mod extract;
pub mod hankel;
pub mod hardy;
pub mod poly;
pub mod random;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod suites;
pub mod symbol;

pub use error::{Error, Result};
pub use scalar::Real;

pub use blaschke::{BlaschkeProduct, FrostmanShift, MobiusMap};
pub use extract::{Branch, Representation, VerifyReport};
pub use hankel::{HankelMatrix, IdentityResiduals};
pub use hardy::{BoundaryGrid, HardyVector, Projection, Truncation};
pub use spectral::{SchmidtBlock, SchmidtDecomposition, Takagi};
pub use symbol::{CoefficientSymbol, PoleTerm, RationalSymbol, Symbol};

pub type Complex64 = num_complex::Complex<f64>;

pub type HardyVector64 = HardyVector<f64>;
pub type BoundaryGrid64 = BoundaryGrid<f64>;
pub type RationalSymbol64 = RationalSymbol<f64>;
pub type HankelMatrix64 = HankelMatrix<f64>;
pub type SchmidtBlock64 = SchmidtBlock<f64>;
pub type BlaschkeProduct64 = BlaschkeProduct<f64>;
pub type MobiusMap64 = MobiusMap<f64>;
pub type Representation64 = Representation<f64>;
