//! Integrability checks: the factorization identities, the matrix
//! Yang–Baxter relations, classification of couplings and grid scans.
//!
//! The identities are rational in `(u, v)`, so they are tested by evaluation
//! on a seeded panel of sample pairs ([`SamplePanel`]). A relation passes
//! below [`tolerance::IDENTITY_PASS`] and fails above
//! [`tolerance::IDENTITY_FAIL_FLOOR`].

use std::fmt;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bethe::build_yang_matrix;
use crate::couplings::CouplingParameters;
use crate::exec::{nan_max, Execution};
use crate::permutation::SymmetricGroup;
use crate::sampling::SamplePanel;
use crate::scattering::{amplitudes, AmplitudeSet};
use crate::tolerance;
use crate::{Error, Result};

/// Number of factorization identities evaluated per sample.
pub const IDENTITY_COUNT: usize = 13;

/// Identities `1..=UNIVERSAL_COUNT` hold for every coupling.
pub const UNIVERSAL_COUNT: usize = 4;

/// Residuals `LHS − RHS` of all identities at one `(u, v)`.
///
/// `a = S(u)`, `b = S(v)`, `s = S(u + v)`, `m = S(−u)`. The first four
/// involve only `u` and `−u`; the rest are the three-particle consistency
/// conditions.
pub fn identity_residuals(a: &AmplitudeSet, b: &AmplitudeSet, s: &AmplitudeSet, m: &AmplitudeSet) -> [Complex64; IDENTITY_COUNT] {
    let one = Complex64::new(1.0, 0.0);
    [
        a.s_r_plus * m.s_r_plus + a.s_t_minus * m.s_t_plus - one,
        a.s_r_minus * m.s_r_minus + a.s_t_plus * m.s_t_minus - one,
        a.s_r_plus * m.s_t_minus + a.s_t_minus * m.s_r_minus,
        a.s_r_minus * m.s_t_plus + a.s_t_plus * m.s_r_plus,
        b.s_r_minus * s.s_r_plus * a.s_r_minus - a.s_r_plus * s.s_r_minus * b.s_r_plus,
        b.s_r_plus * s.s_t_plus * a.s_t_minus - a.s_t_plus * s.s_t_minus * b.s_r_plus,
        b.s_r_minus * s.s_t_minus * a.s_t_plus - a.s_t_minus * s.s_t_plus * b.s_r_minus,
        b.s_r_plus * s.s_r_plus * a.s_t_minus + b.s_t_minus * s.s_r_plus * a.s_r_minus - a.s_r_plus * s.s_t_minus * b.s_r_plus,
        b.s_r_minus * s.s_r_plus * a.s_t_plus + b.s_t_plus * s.s_r_plus * a.s_r_plus - a.s_r_plus * s.s_t_plus * b.s_r_plus,
        b.s_r_minus * s.s_r_minus * a.s_t_plus + b.s_t_plus * s.s_r_minus * a.s_r_plus - a.s_r_minus * s.s_t_plus * b.s_r_minus,
        b.s_r_plus * s.s_r_minus * a.s_t_minus + b.s_t_minus * s.s_r_plus * a.s_r_minus - a.s_r_minus * s.s_t_minus * b.s_r_plus,
        b.s_r_plus * s.s_r_minus * a.s_t_minus + b.s_t_minus * s.s_r_minus * a.s_r_minus - a.s_r_minus * s.s_t_minus * b.s_r_minus,
        b.s_r_minus * s.s_r_plus * a.s_t_plus + b.s_t_plus * s.s_r_minus * a.s_r_plus - a.s_r_plus * s.s_t_plus * b.s_r_minus,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub params: CouplingParameters,
    pub samples: Vec<(f64, f64)>,
    /// Max `|LHS − RHS|` per identity over the samples.
    pub residuals: [f64; IDENTITY_COUNT],
    /// `(|γ|, |λ(cλ + η² − 1)|, |λη|)`: real and imaginary parts of the
    /// reduced condition `λ[cλ − 1 + η(η − 2i)] = 0` together with `γ = 0`.
    pub reduced_condition_residuals: [f64; 3],
}

impl FactorizationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, nan_max)
    }

    pub fn universal_max(&self) -> f64 {
        self.residuals[..UNIVERSAL_COUNT].iter().cloned().fold(0.0, nan_max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

pub fn reduced_condition_residuals(p: &CouplingParameters) -> [f64; 3] {
    [p.gamma.abs(), (p.lambda * (p.c * p.lambda + p.eta * p.eta - 1.0)).abs(), (p.lambda * p.eta).abs()]
}

/// All identities at a single `(u, v)`.
pub fn check_factorization(params: &CouplingParameters, u: f64, v: f64) -> Result<FactorizationReport> {
    check_factorization_samples(params, &[(u, v)])
}

/// Max residuals over a list of sample pairs.
pub fn check_factorization_samples(params: &CouplingParameters, samples: &[(f64, f64)]) -> Result<FactorizationReport> {
    let mut residuals = [0.0; IDENTITY_COUNT];
    for &(u, v) in samples {
        let a = amplitudes(params, u)?;
        let b = amplitudes(params, v)?;
        let s = amplitudes(params, u + v)?;
        let m = amplitudes(params, -u)?;
        for (acc, r) in residuals.iter_mut().zip(identity_residuals(&a, &b, &s, &m)) {
            *acc = nan_max(*acc, r.norm());
        }
    }
    Ok(FactorizationReport {
        params: *params,
        samples: samples.to_vec(),
        residuals,
        reduced_condition_residuals: reduced_condition_residuals(params),
    })
}

pub fn check_factorization_panel(params: &CouplingParameters, panel: &SamplePanel) -> Result<FactorizationReport> {
    check_factorization_samples(params, &panel.pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegrabilityClass {
    /// `λ = γ = 0`.
    Family1,
    /// `λ = 1/c`, `γ = η = 0`.
    Family2,
    NotIntegrable,
}

impl IntegrabilityClass {
    pub fn is_integrable(self) -> bool {
        self != IntegrabilityClass::NotIntegrable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IntegrabilityClass::Family1 => "family1",
            IntegrabilityClass::Family2 => "family2",
            IntegrabilityClass::NotIntegrable => "not-integrable",
        }
    }
}

impl fmt::Display for IntegrabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify(params: &CouplingParameters, tol: f64) -> IntegrabilityClass {
    if params.lambda.abs() <= tol && params.gamma.abs() <= tol {
        IntegrabilityClass::Family1
    } else if params.gamma.abs() <= tol && params.eta.abs() <= tol && (params.c * params.lambda - 1.0).abs() <= tol {
        IntegrabilityClass::Family2
    } else {
        IntegrabilityClass::NotIntegrable
    }
}

/// Outcome of thresholding a residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Between the pass tolerance and the fail floor.
    Ambiguous,
}

pub fn verdict(residual: f64) -> Verdict {
    if residual <= tolerance::IDENTITY_PASS {
        Verdict::Pass
    } else if residual >= tolerance::IDENTITY_FAIL_FLOOR {
        Verdict::Fail
    } else {
        Verdict::Ambiguous
    }
}

/// Cartesian grid of couplings; points are enumerated with `c` outermost and
/// `η` innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub c: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    pub eta: Vec<f64>,
    pub panel_seed: u64,
    pub panel_size: usize,
}

impl GridSpec {
    pub fn new(c: Vec<f64>, lambda: Vec<f64>, gamma: Vec<f64>, eta: Vec<f64>) -> Self {
        GridSpec {
            c,
            lambda,
            gamma,
            eta,
            panel_seed: crate::sampling::STANDARD_PANEL_SEED,
            panel_size: crate::sampling::STANDARD_PANEL_SIZE,
        }
    }

    /// 5⁴ grid containing both families (four points of the second one)
    /// alongside near misses in every direction.
    pub fn standard() -> Self {
        GridSpec::new(
            vec![-1.0, 0.0, 1.0, 2.0, 4.0],
            vec![-1.0, 0.0, 0.25, 0.5, 1.0],
            vec![-0.5, 0.0, 0.5, 1.0, 2.0],
            vec![-1.0, 0.0, 0.5, 1.0, 2.0],
        )
    }

    pub fn len(&self) -> usize {
        self.c.len() * self.lambda.len() * self.gamma.len() * self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Result<Vec<CouplingParameters>> {
        let mut out = Vec::with_capacity(self.len());
        for &c in &self.c {
            for &lambda in &self.lambda {
                for &gamma in &self.gamma {
                    for &eta in &self.eta {
                        out.push(CouplingParameters::new(c, lambda, gamma, eta)?);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn panel(&self) -> SamplePanel {
        SamplePanel::seeded(self.panel_seed, self.panel_size)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub params: CouplingParameters,
    pub class: IntegrabilityClass,
    /// Max over all identities and samples; `+∞` if a sample hit a pole.
    pub max_residual: f64,
}

impl ScanRow {
    pub fn verdict(&self) -> Verdict {
        verdict(self.max_residual)
    }

    /// Residual verdict disagrees with the closed-form classification.
    pub fn is_misclassified(&self) -> bool {
        let expected = if self.class.is_integrable() { Verdict::Pass } else { Verdict::Fail };
        self.verdict() != expected
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub grid: GridSpec,
    pub rows: Vec<ScanRow>,
}

pub const SCAN_CSV_HEADER: &str = "c,lambda,gamma,eta,class,max_residual";

impl ScanReport {
    pub fn misclassified(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.is_misclassified()).collect()
    }

    pub fn passing(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| r.verdict() == Verdict::Pass).collect()
    }

    /// Header plus one row per grid point, grid order, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCAN_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let p = r.params;
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
                p.c, p.lambda, p.gamma, p.eta, r.class, r.max_residual
            );
        }
        out
    }
}

/// Evaluates the identities on the grid's panel at every point.
pub fn scan_couplings(grid: &GridSpec, exec: Execution) -> Result<ScanReport> {
    let points = grid.points()?;
    let panel = grid.panel();
    let rows = exec.map(&points, |p| {
        let max_residual = match check_factorization_panel(p, &panel) {
            Ok(report) => report.max_residual(),
            Err(_) => f64::INFINITY,
        };
        ScanRow { params: *p, class: classify(p, tolerance::STRUCTURAL), max_residual }
    });
    Ok(ScanReport { grid: grid.clone(), rows })
}

/// Max residuals of the matrix relations
/// `Y_i(−u)Y_i(u) = I`,
/// `Y_i(v)Y_{i+1}(u+v)Y_i(u) = Y_{i+1}(u)Y_i(u+v)Y_{i+1}(v)` and
/// `Y_i(u)Y_j(v) = Y_j(v)Y_i(u)` for `|i − j| > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct YangBaxterReport {
    pub params: CouplingParameters,
    pub n_particles: usize,
    pub samples: usize,
    pub unitarity: f64,
    pub braid: f64,
    /// Zero when `N = 3` (no commuting pairs).
    pub commutation: f64,
}

impl YangBaxterReport {
    pub fn max_residual(&self) -> f64 {
        nan_max(nan_max(self.unitarity, self.braid), self.commutation)
    }
}

pub const YB_MIN_N: usize = 3;
pub const YB_MAX_N: usize = 6;

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, nan_max)
}

#[derive(Debug, Clone, Copy, Default)]
struct SampleResiduals {
    unitarity: f64,
    braid: f64,
    commutation: f64,
}

fn yang_baxter_sample(params: &CouplingParameters, n: usize, u: f64, v: f64) -> Result<SampleResiduals> {
    let mut out = SampleResiduals::default();
    let y = |i: usize, x: f64| build_yang_matrix(params, n, i, x);
    for i in 1..n {
        let forward = y(i, u)?.to_dense();
        let product = y(i, -u)?.left_mul_dense(&forward);
        out.unitarity = nan_max(out.unitarity, max_abs_diff(&product, &DMatrix::identity(product.nrows(), product.ncols())));
        if i + 1 < n {
            let lhs = y(i, v)?.left_mul_dense(&y(i + 1, u + v)?.left_mul_dense(&forward));
            let rhs = y(i + 1, u)?.left_mul_dense(&y(i, u + v)?.left_mul_dense(&y(i + 1, v)?.to_dense()));
            out.braid = nan_max(out.braid, max_abs_diff(&lhs, &rhs));
        }
        for j in i + 2..n {
            let lhs = y(i, u)?.left_mul_dense(&y(j, v)?.to_dense());
            let rhs = y(j, v)?.left_mul_dense(&forward);
            out.commutation = nan_max(out.commutation, max_abs_diff(&lhs, &rhs));
        }
    }
    Ok(out)
}

/// Checks all three relation families for every admissible site on every
/// panel sample. Samples run under `exec`.
pub fn yang_baxter_matrix_check(
    params: &CouplingParameters,
    n: usize,
    panel: &SamplePanel,
    exec: Execution,
) -> Result<YangBaxterReport> {
    if !(YB_MIN_N..=YB_MAX_N).contains(&n) {
        return Err(Error::UnsupportedSize { n, min: YB_MIN_N, max: YB_MAX_N });
    }
    params.validate()?;
    let per_sample = exec.try_map(&panel.pairs, |&(u, v)| yang_baxter_sample(params, n, u, v))?;
    let fold = |f: fn(&SampleResiduals) -> f64| per_sample.iter().map(f).fold(0.0, nan_max);
    Ok(YangBaxterReport {
        params: *params,
        n_particles: n,
        samples: panel.len(),
        unitarity: fold(|s| s.unitarity),
        braid: fold(|s| s.braid),
        commutation: fold(|s| s.commutation),
    })
}

/// Restricts `Y_i` and `Y_{i+1}` for `N` particles to every orbit of
/// `⟨T_i, T_{i+1}⟩` acting on the right, and returns the largest entrywise
/// deviation from the three-particle `Y_1`, `Y_2`, at both `u` and `v`.
///
/// Each orbit is listed as `{Q′, Q′T_i, Q′T_{i+1}, Q′T_{i+1}T_i, Q′T_iT_{i+1},
/// Q′T_iT_{i+1}T_i}` with `Q′` its largest element, which reproduces the
/// three-particle layout.
pub fn block_reduction_check(params: &CouplingParameters, n: usize, i: usize, u: f64, v: f64) -> Result<f64> {
    if n < 4 || i == 0 || i + 1 >= n {
        return Err(Error::SiteOutOfRange { n, site: i });
    }
    let group = SymmetricGroup::shared(n)?;
    let mut seen = vec![false; group.order()];
    let mut worst: f64 = 0.0;
    let mut small = Vec::new();
    let mut big = Vec::new();
    for x in [u, v] {
        small.push((build_yang_matrix(params, 3, 1, x)?.to_dense(), build_yang_matrix(params, 3, 2, x)?.to_dense()));
        big.push((build_yang_matrix(params, n, i, x)?, build_yang_matrix(params, n, i + 1, x)?));
    }
    for start in 0..group.order() {
        if seen[start] {
            continue;
        }
        let q = group.element(start);
        let words: [&[usize]; 6] = [&[], &[i], &[i + 1], &[i + 1, i], &[i, i + 1], &[i, i + 1, i]];
        let orbit_of = |base: &crate::Permutation| -> Result<Vec<crate::Permutation>> {
            words
                .iter()
                .map(|w| w.iter().try_fold(base.clone(), |acc, &t| acc.times_transposition(t)))
                .collect()
        };
        let top = orbit_of(q)?.into_iter().max().expect("orbit is non-empty");
        let offsets: Vec<usize> = orbit_of(&top)?.iter().map(|p| group.offset_of(p)).collect::<Result<_>>()?;
        for &o in &offsets {
            seen[o] = true;
        }
        for ((s1, s2), (b1, b2)) in small.iter().zip(&big) {
            for (r, &row) in offsets.iter().enumerate() {
                for (c, &col) in offsets.iter().enumerate() {
                    worst = nan_max(worst, (b1.entry(row, col) - s1[(r, c)]).norm());
                    worst = nan_max(worst, (b2.entry(row, col) - s2[(r, c)]).norm());
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_couplings, seeded_rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn generic() -> CouplingParameters {
        CouplingParameters::new(1.0, 0.3, 0.2, 0.1).unwrap()
    }

    #[test]
    fn free_couplings_satisfy_everything_exactly() {
        let r = check_factorization(&CouplingParameters::FREE, 0.7, -2.3).unwrap();
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn both_families_pass_on_the_panel() {
        let panel = SamplePanel::standard();
        for p in [
            CouplingParameters::delta_with_drift(2.0, 1.5),
            CouplingParameters::delta_with_drift(-0.7, -0.3),
            CouplingParameters::delta_prime_balanced(2.0),
            CouplingParameters::delta_prime_balanced(-1.0),
        ] {
            let r = check_factorization_panel(&p, &panel).unwrap();
            assert!(r.max_residual() <= 1e-10, "{p}: {:?}", r.residuals);
        }
    }

    #[test]
    fn generic_couplings_fail_only_beyond_the_universal_block() {
        let r = check_factorization_panel(&generic(), &SamplePanel::standard()).unwrap();
        assert!(r.universal_max() <= 1e-10);
        assert!(r.residuals[UNIVERSAL_COUNT..].iter().any(|&x| x >= 1e-3));
        assert_eq!(r.reduced_condition_residuals, reduced_condition_residuals(&generic()));
    }

    #[test]
    fn classify_examples() {
        let t = tolerance::STRUCTURAL;
        assert_eq!(classify(&CouplingParameters::new(2.0, 0.0, 0.0, 1.5).unwrap(), t), IntegrabilityClass::Family1);
        assert_eq!(classify(&CouplingParameters::new(2.0, 0.5, 0.0, 0.0).unwrap(), t), IntegrabilityClass::Family2);
        assert_eq!(classify(&CouplingParameters::new(1.0, 1.0, 1.0, 0.0).unwrap(), t), IntegrabilityClass::NotIntegrable);
        assert_eq!(classify(&CouplingParameters::new(2.0, 0.5, 0.0, 0.5).unwrap(), t), IntegrabilityClass::NotIntegrable);
    }

    #[test]
    fn scan_lambda_line() {
        let grid = GridSpec::new(vec![1.0], vec![0.0, 0.25, 0.5, 0.75, 1.0], vec![0.0], vec![0.0]);
        let report = scan_couplings(&grid, Execution::default()).unwrap();
        let pass: Vec<f64> = report.passing().iter().map(|r| r.params.lambda).collect();
        assert_eq!(pass, vec![0.0, 1.0]);
        assert!(report.misclassified().is_empty());
    }

    #[test]
    fn scan_with_gamma_never_passes() {
        let grid = GridSpec::new(vec![1.0, 2.0], vec![0.0, 0.5], vec![0.5], vec![0.0, 1.0]);
        assert!(scan_couplings(&grid, Execution::Sequential).unwrap().passing().is_empty());
        let grid = GridSpec::new(vec![2.0], vec![0.5], vec![0.0], vec![0.5]);
        let report = scan_couplings(&grid, Execution::Sequential).unwrap();
        assert_eq!(report.rows[0].verdict(), Verdict::Fail);
    }

    #[test]
    fn scan_csv_layout_and_determinism() {
        let grid = GridSpec::new(vec![1.0], vec![0.0, 1.0], vec![0.0], vec![0.0]);
        let a = scan_couplings(&grid, Execution::Sequential).unwrap();
        let b = scan_couplings(&grid, Execution::Parallel).unwrap();
        let csv = a.to_csv();
        assert_eq!(csv, b.to_csv());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCAN_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1.0000000000000000e0,0.0000000000000000e0,"));
        assert!(lines[2].contains(",family2,"));
    }

    #[test]
    fn yang_baxter_examples() {
        let panel = SamplePanel::seeded(3, 20);
        let f1 = yang_baxter_matrix_check(&CouplingParameters::delta_with_drift(1.0, 0.5), 3, &panel, Execution::default()).unwrap();
        assert!(f1.max_residual() <= 1e-10);
        let f2 = yang_baxter_matrix_check(&CouplingParameters::delta_prime_balanced(1.5), 4, &panel, Execution::default()).unwrap();
        assert!(f2.max_residual() <= 1e-10);
        assert!(f2.commutation <= 1e-10);
        let bad = yang_baxter_matrix_check(&generic(), 3, &panel, Execution::default()).unwrap();
        assert!(bad.max_residual() >= 1e-3);
        assert!(bad.unitarity <= 1e-10);
        assert!(yang_baxter_matrix_check(&generic(), 2, &panel, Execution::default()).is_err());
    }

    #[test]
    fn yang_baxter_agrees_with_factorization_for_three_particles() {
        let mut rng = seeded_rng(17);
        let panel = SamplePanel::seeded(4, 10);
        let mut candidates: Vec<CouplingParameters> = (0..15).map(|_| random_couplings(&mut rng, 3.0)).collect();
        for _ in 0..5 {
            candidates.push(CouplingParameters::delta_with_drift(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)));
            candidates.push(CouplingParameters::delta_prime_balanced(rng.random_range(0.3..3.0)));
        }
        for p in candidates {
            let yb = yang_baxter_matrix_check(&p, 3, &panel, Execution::Sequential).unwrap();
            let fr = check_factorization_panel(&p, &panel).unwrap();
            assert_eq!(verdict(yb.max_residual()), verdict(fr.max_residual()), "{p}");
            assert_ne!(verdict(yb.max_residual()), Verdict::Ambiguous, "{p}");
        }
    }

    #[test]
    fn block_reduction_examples() {
        for p in [CouplingParameters::delta_with_drift(1.2, 0.4), CouplingParameters::delta_prime_balanced(0.8), generic()] {
            for (n, i) in [(4, 1), (4, 2), (5, 2), (5, 3)] {
                let r = block_reduction_check(&p, n, i, 0.7, -1.9).unwrap();
                assert!(r <= 1e-12, "{p} N={n} i={i}: {r}");
            }
        }
        assert!(block_reduction_check(&generic(), 3, 1, 0.7, 1.0).is_err());
        assert!(block_reduction_check(&generic(), 4, 3, 0.7, 1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn universal_identities_hold_for_all_couplings(
            c in -3.0..3.0f64, l in -3.0..3.0f64, g in -3.0..3.0f64, e in -3.0..3.0f64,
            u in 0.05..5.0f64, v in -5.0..5.0f64, neg in any::<bool>(),
        ) {
            let u = if neg { -u } else { u };
            prop_assume!(v.abs() > 0.05 && (u + v).abs() > 0.05);
            let p = CouplingParameters::new(c, l, g, e).unwrap();
            let r = check_factorization(&p, u, v).unwrap();
            prop_assert!(r.universal_max() <= 1e-10, "{:?}", r.residuals);
        }

        #[test]
        fn family_one_passes_everywhere(c in -3.0..3.0f64, e in -3.0..3.0f64, u in -5.0..5.0f64, v in -5.0..5.0f64) {
            prop_assume!(u.abs() > 0.05 && v.abs() > 0.05 && (u + v).abs() > 0.05);
            let r = check_factorization(&CouplingParameters::delta_with_drift(c, e), u, v).unwrap();
            prop_assert!(r.max_residual() <= 1e-10);
        }

        #[test]
        fn classify_matches_residuals(c in -3.0..3.0f64, l in -3.0..3.0f64, g in -3.0..3.0f64, e in -3.0..3.0f64) {
            let p = CouplingParameters::new(c, l, g, e).unwrap();
            prop_assume!(p.gamma.abs() > 0.05 || p.lambda.abs() > 0.05);
            let r = check_factorization_panel(&p, &SamplePanel::seeded(1, 20)).unwrap();
            prop_assert_eq!(classify(&p, tolerance::STRUCTURAL), IntegrabilityClass::NotIntegrable);
            prop_assert!(r.max_residual() >= 1e-3);
        }
    }
}
