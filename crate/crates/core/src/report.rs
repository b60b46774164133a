//! Analysis configuration and the JSON reports behind the command-line
//! driver.
//!
//! Complex numbers are written as `[re, im]`. Field order follows the
//! struct definitions, so reports for a fixed input are byte-identical.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::blaschke::{BlaschkeFile, BlaschkeProduct, MobiusMap};
use crate::error::{Error, Result};
use crate::extract::{Representation, VerifyReport};
use crate::hankel::IdentityResiduals;
use crate::hardy::{HardyVector, Truncation};
use crate::random;
use crate::suites;
use crate::symbol::{RationalSymbol, SymbolFile};

pub type Pair = [f64; 2];

fn pair(z: Complex<f64>) -> Pair {
    [z.re, z.im]
}

fn pairs(v: &HardyVector<f64>) -> Vec<Pair> {
    v.as_slice().iter().map(|&z| pair(z)).collect()
}

/// Exit codes of the command-line driver.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const INPUT_ERROR: i32 = 1;
    pub const UNRELIABLE: i32 = 2;
    pub const VERIFICATION_FAILURE: i32 = 3;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisConfig {
    /// Truncation order, a power of two in `16..=1024`.
    pub n: usize,
    pub grid_oversample: usize,
    pub cluster_tol: f64,
    pub verify_tol: f64,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { n: 128, grid_oversample: 2, cluster_tol: 1e-8, verify_tol: 1e-6, seed: 0 }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(16..=1024).contains(&self.n) || !self.n.is_power_of_two() {
            return Err(Error::Config(format!("N must be a power of two in 16..=1024, got {}", self.n)));
        }
        if self.grid_oversample == 0 {
            return Err(Error::Config("grid_oversample must be at least 1".into()));
        }
        for (name, v) in [("cluster_tol", self.cluster_tol), ("verify_tol", self.verify_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularValue {
    pub s: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaReport {
    pub phase: Pair,
    pub zeros: Vec<Pair>,
}

impl From<&BlaschkeProduct<f64>> for ThetaReport {
    fn from(b: &BlaschkeProduct<f64>) -> Self {
        let f = b.to_file();
        Self { phase: f.phase, zeros: f.zeros }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationReport {
    pub p: Vec<Pair>,
    pub theta: ThetaReport,
    pub phi: f64,
    pub phase: Pair,
    pub branch: &'static str,
    pub base_point: Pair,
    pub projection_norm: f64,
    pub fit_residual: f64,
}

impl From<&Representation<f64>> for RepresentationReport {
    fn from(r: &Representation<f64>) -> Self {
        Self {
            p: pairs(&r.p),
            theta: (&r.theta).into(),
            phi: r.phi,
            phase: pair(r.phase),
            branch: r.branch.name(),
            base_point: pair(r.base_point),
            projection_norm: r.projection_norm,
            fit_residual: r.fit_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualTable {
    pub subspace_gap: f64,
    pub action: f64,
    pub innerness: f64,
    pub isometry: f64,
    pub near_invariance: Option<f64>,
    pub linear_form: f64,
    pub us_crosscheck: f64,
}

impl From<&VerifyReport<f64>> for ResidualTable {
    fn from(v: &VerifyReport<f64>) -> Self {
        Self {
            subspace_gap: v.subspace_gap,
            action: v.action,
            innerness: v.innerness,
            isometry: v.isometry,
            near_invariance: v.near_invariance,
            linear_form: v.linear_form,
            us_crosscheck: v.us_crosscheck,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub index: usize,
    pub s: f64,
    pub multiplicity: usize,
    /// `pass`, `fail` or `unreliable`.
    pub status: &'static str,
    pub well_separated: bool,
    pub representation: Option<RepresentationReport>,
    pub residuals: Option<ResidualTable>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub shift_intertwining: f64,
    pub square_shift: f64,
    pub commutator: f64,
    pub symmetry: f64,
    pub toeplitz: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl IdentityReport {
    fn new(r: &IdentityResiduals<f64>, threshold: f64) -> Self {
        Self {
            shift_intertwining: r.shift_intertwining,
            square_shift: r.square_shift,
            commutator: r.commutator,
            symmetry: r.symmetry,
            toeplitz: r.toeplitz,
            threshold,
            pass: r.max() < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub symbol: SymbolFile,
    pub config: AnalysisConfig,
    pub tail_bound: f64,
    pub rank_bound: usize,
    pub kernel_dim: usize,
    pub singular_values: Vec<SingularValue>,
    pub blocks: Vec<BlockReport>,
    pub identities: IdentityReport,
    pub warnings: Vec<String>,
    pub status: &'static str,
    pub exit_code: i32,
}

fn status_name(code: i32) -> &'static str {
    match code {
        exit::PASS => "pass",
        exit::UNRELIABLE => "unreliable",
        exit::VERIFICATION_FAILURE => "fail",
        _ => "error",
    }
}

/// Full pipeline on one symbol: coefficients, `Γ`, Schmidt blocks,
/// representations and their residuals.
pub fn run_analyze(sym: &RationalSymbol<f64>, config: &AnalysisConfig) -> Result<AnalyzeReport> {
    config.validate()?;
    let n = config.n;
    let (h, dec, outcomes) = suites::structure_case(sym, n, config.cluster_tol, config.grid_oversample)?;
    let ids = h.identity_residuals();
    let identities = IdentityReport::new(&ids, crate::hankel::identity_threshold(h.tail()));
    let mut warnings = dec.warnings.clone();
    let mut blocks = Vec::with_capacity(outcomes.len());
    let (mut any_fail, mut any_unreliable) = (!identities.pass, false);
    for (index, o) in outcomes.iter().enumerate() {
        let (representation, residuals, error, passed) = match &o.result {
            Ok((rep, v)) => (Some(rep.into()), Some(v.into()), None, v.passes(config.verify_tol)),
            Err(e) => (None, None, Some(e.to_string()), false),
        };
        let status = if !o.block.reliable {
            any_unreliable = true;
            "unreliable"
        } else if passed {
            "pass"
        } else {
            any_fail = true;
            "fail"
        };
        if let Some(e) = &error {
            warnings.push(format!("block {index}: {e}"));
        }
        blocks.push(BlockReport {
            index,
            s: o.block.s,
            multiplicity: o.block.multiplicity(),
            status,
            well_separated: o.block.reliable,
            representation,
            residuals,
            error,
        });
    }
    let exit_code = if any_fail {
        exit::VERIFICATION_FAILURE
    } else if any_unreliable {
        exit::UNRELIABLE
    } else {
        exit::PASS
    };
    Ok(AnalyzeReport {
        symbol: sym.to_file(),
        config: *config,
        tail_bound: h.tail(),
        rank_bound: sym.rank_bound(),
        kernel_dim: dec.kernel_dim,
        singular_values: dec.singular_values().into_iter().map(|(s, multiplicity)| SingularValue { s, multiplicity }).collect(),
        blocks,
        identities,
        warnings,
        status: status_name(exit_code),
        exit_code,
    })
}

/// Counts and worst residual-to-threshold ratio for one checked property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cases that failed with an error before producing a residual.
    pub errors: usize,
    pub max_residual: f64,
    pub threshold: f64,
}

impl CheckSummary {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self { name, cases: 0, passed: 0, failed: 0, errors: 0, max_residual: 0.0, threshold }
    }

    /// Records a residual against this summary's fixed threshold.
    fn record(&mut self, residual: f64) {
        self.record_against(residual, self.threshold);
    }

    /// Records a residual against a per-case threshold (the summary's
    /// threshold then reports the largest one used).
    fn record_against(&mut self, residual: f64, threshold: f64) {
        self.cases += 1;
        if residual.is_finite() && residual < threshold {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        } else {
            self.errors += 1;
        }
    }

    fn record_error(&mut self) {
        self.cases += 1;
        self.failed += 1;
        self.errors += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySuiteReport {
    pub seed: u64,
    pub n: usize,
    pub perturb: f64,
    pub checks: Vec<CheckSummary>,
    pub passed: usize,
    pub failed: usize,
    pub status: &'static str,
    pub exit_code: i32,
}

/// Sizes of the verify suites.
pub const IDENTITY_SYMBOLS: usize = 50;
pub const BLASCHKE_PRODUCTS: usize = 30;
pub const ALPHAS_PER_PRODUCT: usize = 3;
pub const COVARIANCE_SYMBOLS: usize = 10;
pub const STRUCTURE_SYMBOLS: usize = 20;
/// Frostman parameters are drawn from `|α| <= 0.7`.
pub const FROSTMAN_ALPHA_RADIUS: f64 = 0.7;

/// Seeded identity and lemma suites. `perturb` breaks the symmetry of
/// every Hankel matrix in the identity suite.
pub fn run_verify(config: &AnalysisConfig, perturb: f64) -> Result<VerifySuiteReport> {
    config.validate()?;
    if !perturb.is_finite() {
        return Err(Error::Config("perturbation must be finite".into()));
    }
    let n = config.n;
    let mut rng = random::rng(config.seed);

    let names = ["shift_intertwining", "square_shift", "commutator", "symmetry", "toeplitz"];
    let mut ids: Vec<CheckSummary> = names.iter().map(|&name| CheckSummary::new(name, 1e-10)).collect();
    for _ in 0..IDENTITY_SYMBOLS {
        let u = random::suite_symbol(&mut rng);
        let (r, threshold) = suites::identity_case(&u, n, perturb);
        for (summary, (_, value)) in ids.iter_mut().zip(r.entries()) {
            summary.threshold = summary.threshold.max(threshold);
            summary.record_against(value, threshold);
        }
    }

    let mut lemma = CheckSummary::new("backward_shift_model_space", 1e-8);
    let mut frost_gap = CheckSummary::new("frostman_subspace", 1e-8);
    let mut frost_iso = CheckSummary::new("frostman_isometry", 1e-8);
    let mut frost_bdry = CheckSummary::new("frostman_boundary", 1e-10);
    for _ in 0..BLASCHKE_PRODUCTS {
        let b = random::blaschke(&mut rng, 5, 0.7);
        match suites::lemma_backward_shift_case(&b, n) {
            Ok(g) => lemma.record(g),
            Err(_) => lemma.record_error(),
        }
        for _ in 0..ALPHAS_PER_PRODUCT {
            let alpha = random::disk_point(&mut rng, FROSTMAN_ALPHA_RADIUS);
            match suites::frostman_case(&b, alpha, n) {
                Ok(r) => {
                    frost_gap.record(r.gap);
                    frost_iso.record(r.isometry);
                    frost_bdry.record(r.boundary);
                }
                Err(_) => {
                    frost_gap.record_error();
                    frost_iso.record_error();
                    frost_bdry.record_error();
                }
            }
        }
    }

    let mut mob_sub = CheckSummary::new("mobius_model_space", 1e-8);
    let mut cov_sv = CheckSummary::new("mobius_singular_values", 1e-6);
    let mut cov_gap = CheckSummary::new("mobius_schmidt_bases", 1e-6);
    let mut cov_double = CheckSummary::new("mobius_double_conjugation", 1e-8);
    for _ in 0..COVARIANCE_SYMBOLS {
        let u = random::suite_symbol(&mut rng);
        let mu = MobiusMap::new(random::disk_point(&mut rng, 0.5))?;
        match suites::covariance_case(&u, &mu, config.cluster_tol) {
            Ok(r) => {
                cov_sv.threshold = cov_sv.threshold.max(r.singular_threshold);
                cov_sv.record_against(r.singular_values, r.singular_threshold);
                cov_gap.record(r.basis_gap);
                cov_double.record(r.double_conjugation);
            }
            Err(_) => {
                cov_sv.record_error();
                cov_gap.record_error();
                cov_double.record_error();
            }
        }
        let b = random::blaschke(&mut rng, 4, 0.6);
        let len = rng.gen_range(1..=4);
        let p = HardyVector::from_coeffs(random::polynomial(&mut rng, len));
        match suites::mobius_subspace_case(&p, &b, &mu, n) {
            Ok(g) => mob_sub.record(g),
            Err(_) => mob_sub.record_error(),
        }
    }

    let mut structure = CheckSummary::new("schmidt_structure", config.verify_tol);
    for _ in 0..STRUCTURE_SYMBOLS {
        let u = random::suite_symbol(&mut rng);
        match suites::structure_case(&u, n, config.cluster_tol, config.grid_oversample) {
            Ok((_, _, outcomes)) => {
                for o in outcomes.iter().filter(|o| o.block.reliable) {
                    match &o.result {
                        Ok((_, v)) => structure.record(v.gating().iter().fold(0.0f64, |m, x| m.max(x.1))),
                        Err(_) => structure.record_error(),
                    }
                }
            }
            Err(_) => structure.record_error(),
        }
    }

    let mut checks = ids;
    checks.extend([lemma, frost_gap, frost_iso, frost_bdry, mob_sub, cov_sv, cov_gap, cov_double, structure]);
    let passed = checks.iter().filter(|c| c.failed == 0).count();
    let failed = checks.len() - passed;
    let exit_code = if failed > 0 { exit::VERIFICATION_FAILURE } else { exit::PASS };
    Ok(VerifySuiteReport {
        seed: config.seed,
        n,
        perturb,
        checks,
        passed,
        failed,
        status: status_name(exit_code),
        exit_code,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugateReport {
    pub alpha: Pair,
    pub n: usize,
    /// Taylor coefficients of `w = −S*((Su)∘μ)`.
    pub coefficients: Vec<Pair>,
    /// Anti-analytic energy discarded by the projection.
    pub projection_residual: f64,
    /// Coefficient energy between `n` and half the grid.
    pub tail_residual: f64,
}

pub fn run_conjugate(sym: &RationalSymbol<f64>, alpha: Complex<f64>, n: usize, grid_oversample: usize) -> Result<ConjugateReport> {
    let mu = MobiusMap::new(alpha)?;
    let p = mu.conjugate_symbol(sym, Truncation::with_oversample(n, grid_oversample.max(1)))?;
    Ok(ConjugateReport {
        alpha: pair(alpha),
        n,
        coefficients: pairs(&p.vector),
        projection_residual: p.negative_residual,
        tail_residual: p.tail_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrostmanReport {
    pub alpha: Pair,
    pub theta_alpha: BlaschkeFile,
    /// Taylor coefficients of `g_α`.
    pub g_alpha: Vec<Pair>,
    /// `max |g_α θ_α + θ conj(g_α)|` on the boundary.
    pub boundary_residual: f64,
}

pub fn run_frostman(theta: &BlaschkeProduct<f64>, alpha: Complex<f64>, n: usize) -> Result<FrostmanReport> {
    let fs = theta.frostman_shift(alpha, n)?;
    Ok(FrostmanReport {
        alpha: pair(alpha),
        theta_alpha: fs.theta.to_file(),
        g_alpha: pairs(&fs.g),
        boundary_residual: fs.boundary_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn config_validation() {
        assert!(AnalysisConfig::default().validate().is_ok());
        for n in [8, 100, 2048] {
            assert!(AnalysisConfig { n, ..Default::default() }.validate().is_err());
        }
        assert!(AnalysisConfig { cluster_tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(AnalysisConfig { verify_tol: 1.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn analyze_shift_symbol() {
        let u = RationalSymbol::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = run_analyze(&u, &AnalysisConfig::default()).unwrap();
        assert_eq!(r.exit_code, exit::PASS);
        assert_eq!(r.blocks.len(), 1);
        let b = &r.blocks[0];
        assert_eq!(b.multiplicity, 2);
        assert!((b.s - 1.0).abs() < 1e-12);
        assert_eq!(b.representation.as_ref().unwrap().theta.zeros, vec![[0.0, 0.0]; 2]);
    }

    #[test]
    fn analyze_zero_symbol() {
        let r = run_analyze(&RationalSymbol::zero(), &AnalysisConfig::default()).unwrap();
        assert!(r.blocks.is_empty());
        assert_eq!(r.exit_code, exit::PASS);
    }

    #[test]
    fn frostman_report_at_zero() {
        let theta = BlaschkeProduct::new(c(1.0, 0.0), vec![c(0.5, 0.0)]).unwrap();
        let r = run_frostman(&theta, c(0.0, 0.0), 4).unwrap();
        assert_eq!(r.theta_alpha.phase, [-1.0, 0.0]);
        assert_eq!(r.g_alpha[0], [1.0, 0.0]);
    }
}
