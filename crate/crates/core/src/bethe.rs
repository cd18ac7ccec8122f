//! Coefficient propagation for the coordinate Bethe Ansatz.
//!
//! In the wedge `Δ_Q: x_{Q(1)} < … < x_{Q(N)}` the eigenfunction is
//! `Σ_P A_P(Q) e^{i k_P·x_Q}`. Collecting `A_P(Q)` over `Q` (layout order of
//! [`crate::permutation`]) into the vector `A_P`, the matching conditions
//! give `A_{P T_i} = Y_i(k_{P(i)} − k_{P(i+1)}) A_P` with
//! `Y_i(u) = S_R^i(u) + S_T^i(u) T̂_i`.
//!
//! For every `Q` with `Q(i) < Q(i+1)` the row of `Q` holds `S_R⁺` on the
//! diagonal and `S_T⁻` in column `QT_i`; the row of `QT_i` holds `S_R⁻` on the
//! diagonal and `S_T⁺` in column `Q`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::couplings::CouplingParameters;
use crate::exec::Execution;
use crate::factorization::{classify, IntegrabilityClass};
use crate::permutation::{decompose, factorial, Permutation, SymmetricGroup};
use crate::scattering::{amplitudes, AmplitudeSet};
use crate::tolerance;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest `N` for which full coefficient tables (`N!²` entries) are built.
pub const MAX_STATE_N: usize = 6;

/// Largest `N` accepted by the brute-force boundary-system oracle.
pub const MAX_ORACLE_N: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumVector {
    k: Vec<f64>,
}

impl MomentumVector {
    /// Finite, pairwise distinct momenta (gaps above `1e−12`).
    pub fn new(k: Vec<f64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidMomenta { reason: "no momenta given".into() });
        }
        if let Some(bad) = k.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidMomenta { reason: format!("{bad} is not finite") });
        }
        for a in 0..k.len() {
            for b in a + 1..k.len() {
                if (k[a] - k[b]).abs() <= tolerance::COINCIDENCE {
                    return Err(Error::InvalidMomenta { reason: format!("k{} and k{} coincide", a + 1, b + 1) });
                }
            }
        }
        Ok(MomentumVector { k })
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.k
    }

    /// `k_j`, 1-based.
    pub fn get(&self, j: usize) -> f64 {
        self.k[j - 1]
    }

    /// `E = Σ k_j²`.
    pub fn energy(&self) -> f64 {
        self.k.iter().map(|k| k * k).sum()
    }
}

/// `A_P(·)` for one `P`, indexed by the 0-based layout offset of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    n_particles: usize,
    entries: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(n_particles: usize, entries: Vec<Complex64>) -> Result<Self> {
        let expected = factorial(n_particles);
        if entries.len() != expected {
            return Err(Error::SizeMismatch { expected, found: entries.len() });
        }
        Ok(CoefficientVector { n_particles, entries })
    }

    pub fn zeros(n_particles: usize) -> Self {
        CoefficientVector { n_particles, entries: vec![ZERO; factorial(n_particles)] }
    }

    /// Unit vector at the 0-based offset (offset 0 is the identity wedge).
    pub fn unit(n_particles: usize, offset: usize) -> Self {
        let mut v = Self::zeros(n_particles);
        v.entries[offset] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn max_abs_difference(&self, other: &CoefficientVector) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, crate::exec::nan_max)
    }
}

/// Which amplitude branch sits on a diagonal entry of `S_R^i` / `S_T^i`.
///
/// `Plus` rows carry `(S_R⁺, S_T⁻)` and `Minus` rows `(S_R⁻, S_T⁺)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn values(self, a: &AmplitudeSet) -> (Complex64, Complex64) {
        match self {
            Branch::Plus => (a.s_r_plus, a.s_t_minus),
            Branch::Minus => (a.s_r_minus, a.s_t_plus),
        }
    }
}

/// `Y_i(u)` as its two diagonals plus the `T̂_i` pairing.
#[derive(Debug, Clone)]
pub struct YangMatrix {
    n_particles: usize,
    site: usize,
    u: f64,
    group: Arc<SymmetricGroup>,
    s_r: Vec<Complex64>,
    s_t: Vec<Complex64>,
}

impl YangMatrix {
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// Matrix order `N!`.
    pub fn order(&self) -> usize {
        self.s_r.len()
    }

    /// Diagonal of `S_R^i`.
    pub fn s_r_diagonal(&self) -> &[Complex64] {
        &self.s_r
    }

    /// Diagonal of `S_T^i`.
    pub fn s_t_diagonal(&self) -> &[Complex64] {
        &self.s_t
    }

    fn partner(&self) -> &[usize] {
        self.group.right_transposition(self.site).expect("site validated at construction")
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let mut v = ZERO;
        if row == col {
            v += self.s_r[row];
        }
        if self.partner()[row] == col {
            v += self.s_t[row];
        }
        v
    }

    /// `Y_i(u) a`, two multiply-adds per row.
    pub fn apply(&self, a: &[Complex64]) -> Result<Vec<Complex64>> {
        if a.len() != self.order() {
            return Err(Error::SizeMismatch { expected: self.order(), found: a.len() });
        }
        let partner = self.partner();
        Ok((0..a.len()).map(|q| self.s_r[q] * a[q] + self.s_t[q] * a[partner[q]]).collect())
    }

    /// `Y_i(u) · m` for a dense `m` with `N!` rows.
    pub fn left_mul_dense(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        assert_eq!(m.nrows(), self.order());
        let partner = self.partner();
        DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| self.s_r[r] * m[(r, c)] + self.s_t[r] * m[(partner[r], c)])
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        self.left_mul_dense(&DMatrix::identity(self.order(), self.order()))
    }
}

fn check_site(n: usize, i: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::SiteOutOfRange { n, site: i });
    }
    Ok(())
}

/// `Y_i(u)` for `N` particles, built row pair by row pair from the two-body
/// coefficient relations.
pub fn build_yang_matrix(params: &CouplingParameters, n: usize, i: usize, u: f64) -> Result<YangMatrix> {
    check_site(n, i)?;
    let group = SymmetricGroup::shared(n)?;
    let amps = amplitudes(params, u)?;
    let partner = group.right_transposition(i)?;
    let order = group.order();
    let mut s_r = vec![ZERO; order];
    let mut s_t = vec![ZERO; order];
    for (q, perm) in group.elements().iter().enumerate() {
        if perm.apply(i) < perm.apply(i + 1) {
            let qt = partner[q];
            (s_r[q], s_t[q]) = Branch::Plus.values(&amps);
            (s_r[qt], s_t[qt]) = Branch::Minus.values(&amps);
        }
    }
    Ok(YangMatrix { n_particles: n, site: i, u, group, s_r, s_t })
}

/// Branch of every diagonal entry of `S^i` from the closed-form index
/// pattern: within each period of length `(i+1)!`, write the local 1-based
/// position as `j = n·i! + k` with `1 ≤ k ≤ i!`; the entry is `Minus` when
/// `k ≤ n·(i−1)!` and `Plus` otherwise.
pub fn periodic_branch_pattern(n: usize, i: usize) -> Result<Vec<Branch>> {
    check_site(n, i)?;
    let period = factorial(i + 1);
    let block = factorial(i);
    let sub = factorial(i - 1);
    Ok((0..factorial(n))
        .map(|offset| {
            let local = offset % period + 1;
            let blk = (local - 1) / block;
            let k = local - blk * block;
            if k <= blk * sub {
                Branch::Minus
            } else {
                Branch::Plus
            }
        })
        .collect())
}

/// Diagonals `(S_R^i, S_T^i)` from [`periodic_branch_pattern`].
pub fn build_s_diagonals_periodic(
    params: &CouplingParameters,
    n: usize,
    i: usize,
    u: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let pattern = periodic_branch_pattern(n, i)?;
    let amps = amplitudes(params, u)?;
    Ok(pattern.into_iter().map(|b| b.values(&amps)).unzip())
}

fn check_dimensions(momenta: &MomentumVector, a_identity: &CoefficientVector) -> Result<usize> {
    let n = momenta.len();
    if a_identity.n_particles() != n {
        return Err(Error::SizeMismatch { expected: n, found: a_identity.n_particles() });
    }
    Ok(n)
}

/// Applies the recursion along an explicit transposition word, whose product
/// is the target permutation. No integrability check: for non-integrable
/// couplings the result depends on the word.
pub fn propagate_along(
    params: &CouplingParameters,
    momenta: &MomentumVector,
    a_identity: &CoefficientVector,
    word: &[usize],
) -> Result<CoefficientVector> {
    let n = check_dimensions(momenta, a_identity)?;
    let mut running = Permutation::identity(n);
    let mut a = a_identity.entries().to_vec();
    for &i in word {
        check_site(n, i)?;
        let u = momenta.get(running.apply(i)) - momenta.get(running.apply(i + 1));
        a = build_yang_matrix(params, n, i, u)?.apply(&a)?;
        running = running.times_transposition(i)?;
    }
    CoefficientVector::new(n, a)
}

/// Rejects couplings outside the integrable families. Two particles are
/// always fine: every permutation of `S_2` has a single word.
fn require_integrable(params: &CouplingParameters, n: usize) -> Result<()> {
    if n > 2 && classify(params, tolerance::STRUCTURAL) == IntegrabilityClass::NotIntegrable {
        return Err(Error::NotIntegrable { c: params.c, lambda: params.lambda, gamma: params.gamma, eta: params.eta });
    }
    Ok(())
}

/// `A_P` from `A_I` along the canonical word of `P`.
pub fn propagate(
    params: &CouplingParameters,
    momenta: &MomentumVector,
    a_identity: &CoefficientVector,
    p: &Permutation,
) -> Result<CoefficientVector> {
    let n = check_dimensions(momenta, a_identity)?;
    if p.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: p.len() });
    }
    require_integrable(params, n)?;
    propagate_along(params, momenta, a_identity, &decompose(p))
}

/// Full coefficient table of a Bethe eigenfunction.
#[derive(Debug, Clone)]
pub struct BetheState {
    params: CouplingParameters,
    momenta: MomentumVector,
    group: Arc<SymmetricGroup>,
    table: Vec<CoefficientVector>,
}

impl BetheState {
    pub fn new(params: CouplingParameters, momenta: MomentumVector, a_identity: CoefficientVector) -> Result<Self> {
        Self::new_with(params, momenta, a_identity, Execution::default())
    }

    /// Fills `A_P` for every `P`; rows are independent and computed under `exec`.
    pub fn new_with(
        params: CouplingParameters,
        momenta: MomentumVector,
        a_identity: CoefficientVector,
        exec: Execution,
    ) -> Result<Self> {
        let n = check_dimensions(&momenta, &a_identity)?;
        if n > MAX_STATE_N {
            return Err(Error::UnsupportedSize { n, min: 1, max: MAX_STATE_N });
        }
        require_integrable(&params, n)?;
        let group = SymmetricGroup::shared(n)?;
        let table = exec.try_map(group.elements(), |p| {
            propagate_along(&params, &momenta, &a_identity, &decompose(p))
        })?;
        Ok(BetheState { params, momenta, group, table })
    }

    /// Builds a state from an externally supplied table (row `P`, column `Q`).
    pub fn from_table(params: CouplingParameters, momenta: MomentumVector, table: Vec<CoefficientVector>) -> Result<Self> {
        let n = momenta.len();
        let group = SymmetricGroup::shared(n)?;
        if table.len() != group.order() {
            return Err(Error::SizeMismatch { expected: group.order(), found: table.len() });
        }
        if let Some(bad) = table.iter().find(|row| row.n_particles() != n) {
            return Err(Error::SizeMismatch { expected: n, found: bad.n_particles() });
        }
        Ok(BetheState { params, momenta, group, table })
    }

    pub fn params(&self) -> &CouplingParameters {
        &self.params
    }

    pub fn momenta(&self) -> &MomentumVector {
        &self.momenta
    }

    pub fn n_particles(&self) -> usize {
        self.momenta.len()
    }

    pub fn group(&self) -> &Arc<SymmetricGroup> {
        &self.group
    }

    pub fn energy(&self) -> f64 {
        self.momenta.energy()
    }

    /// Rows `A_P`, indexed by the offset of `P`.
    pub fn table(&self) -> &[CoefficientVector] {
        &self.table
    }

    pub fn coefficient(&self, p_offset: usize, q_offset: usize) -> Complex64 {
        self.table[p_offset].entries()[q_offset]
    }

    pub fn table_mut(&mut self) -> &mut [CoefficientVector] {
        &mut self.table
    }

    /// Largest `|A_P(Q) − B_P(Q)|` against another table of the same size.
    pub fn max_table_difference(&self, other: &[CoefficientVector]) -> f64 {
        self.table.iter().zip(other).map(|(a, b)| a.max_abs_difference(b)).fold(0.0, crate::exec::nan_max)
    }
}

/// Least-squares solution of the full boundary system for all `A_P(Q)`.
#[derive(Debug, Clone)]
pub struct BoundarySystemSolution {
    pub n_particles: usize,
    /// Rows `A_P`, indexed by the offset of `P`.
    pub table: Vec<CoefficientVector>,
    /// `‖M x‖₂ / ‖A_I‖₂` at the least-squares optimum.
    pub residual: f64,
    /// Dimension of the null space of the homogeneous system.
    pub null_dimension: usize,
    pub equations: usize,
    pub unknowns: usize,
}

impl BoundarySystemSolution {
    /// `N!`: the entries of `A_I`.
    pub fn expected_null_dimension(&self) -> usize {
        factorial(self.n_particles)
    }

    pub fn check_dimension(&self) -> Result<()> {
        if self.null_dimension != self.expected_null_dimension() {
            return Err(Error::RankDeficient { expected: self.expected_null_dimension(), found: self.null_dimension });
        }
        Ok(())
    }
}

/// Rows of the homogeneous boundary system. Unknown `A_P(Q)` sits in column
/// `offset(P)·N! + offset(Q)`.
///
/// For each site `i`, each `P` and each `Q` with `Q(i) < Q(i+1)`, the
/// matching conditions at `x_{Q(i)} = x_{Q(i+1)}` relate
/// `a = A_P(Q)`, `b = A_{PT_i}(Q)`, `c = A_P(QT_i)`, `d = A_{PT_i}(QT_i)`:
///
/// ```text
/// iu(d − c − a + b) = c₀(a + b + c + d) − iu(γ − iη)(a − b + d − c)
/// c + d − a − b     = iuλ(a − b + d − c) + (γ + iη)(a + b + c + d)
/// ```
///
/// with `u = k_{P(i)} − k_{P(i+1)}` and `c₀` the delta coupling. Every
/// condition appears twice, once from `P` and once from `PT_i`, giving
/// `(N − 1)·N!²` rows.
pub fn boundary_system(params: &CouplingParameters, momenta: &MomentumVector) -> Result<DMatrix<Complex64>> {
    let n = momenta.len();
    let group = SymmetricGroup::shared(n)?;
    let order = group.order();
    let unknowns = order * order;
    let mut rows: Vec<Vec<(usize, Complex64)>> = Vec::new();
    let g_minus = Complex64::new(params.gamma, -params.eta);
    let g_plus = Complex64::new(params.gamma, params.eta);
    for i in 1..n {
        let partner = group.right_transposition(i)?;
        for (p, perm_p) in group.elements().iter().enumerate() {
            let pt = partner[p];
            let u = momenta.get(perm_p.apply(i)) - momenta.get(perm_p.apply(i + 1));
            let iu = I * u;
            for (q, perm_q) in group.elements().iter().enumerate() {
                if perm_q.apply(i) >= perm_q.apply(i + 1) {
                    continue;
                }
                let qt = partner[q];
                let (a, b, c, d) = (p * order + q, pt * order + q, p * order + qt, pt * order + qt);
                let cc = Complex64::new(params.c, 0.0);
                let w = iu * g_minus;
                rows.push(vec![(d, iu - cc + w), (c, -iu - cc - w), (a, -iu - cc + w), (b, iu - cc - w)]);
                let l = iu * params.lambda;
                let one = Complex64::new(1.0, 0.0);
                rows.push(vec![(c, one + l - g_plus), (d, one - l - g_plus), (a, -one - l - g_plus), (b, -one + l - g_plus)]);
            }
        }
    }
    let mut m = DMatrix::from_element(rows.len(), unknowns, ZERO);
    for (r, row) in rows.iter().enumerate() {
        for &(col, v) in row {
            m[(r, col)] += v;
        }
    }
    Ok(m)
}

fn null_dimension(m: &DMatrix<Complex64>) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > tolerance::NULLSPACE_RELATIVE * max).count();
    m.ncols() - rank
}

/// Brute-force oracle: solves the whole boundary system by least squares with
/// the row `A_I` fixed to `a_identity`, for `N ≤ 4`.
///
/// Fails with [`Error::RankDeficient`] only when the system leaves more than
/// `N!` directions free (the table would not be unique). A smaller null space
/// means the system is inconsistent; the solution is still returned and
/// `residual` measures the violation.
pub fn coefficients_bc_oracle(
    params: &CouplingParameters,
    momenta: &MomentumVector,
    a_identity: &CoefficientVector,
) -> Result<BoundarySystemSolution> {
    let n = check_dimensions(momenta, a_identity)?;
    if n > MAX_ORACLE_N {
        return Err(Error::UnsupportedSize { n, min: 1, max: MAX_ORACLE_N });
    }
    params.validate()?;
    let order = factorial(n);
    let m = boundary_system(params, momenta)?;
    let null_dim = null_dimension(&m);
    if null_dim > order {
        return Err(Error::RankDeficient { expected: order, found: null_dim });
    }

    // A_I occupies the first N! columns
    let free_cols: Vec<usize> = (order..m.ncols()).collect();
    let mut rhs = DVector::from_element(m.nrows(), ZERO);
    for (col, &a) in a_identity.entries().iter().enumerate() {
        for r in 0..m.nrows() {
            rhs[r] -= m[(r, col)] * a;
        }
    }
    let m_free = m.select_columns(&free_cols);
    let svd = m_free.clone().svd(true, true);
    let sv_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let x_free = svd
        .solve(&rhs, tolerance::NULLSPACE_RELATIVE * sv_max)
        .map_err(|e| Error::InvalidInput(format!("least-squares solve failed: {e}")))?;
    let residual_vec = &m_free * &x_free - &rhs;
    let scale = a_identity.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let residual = residual_vec.norm() / scale;

    let mut full = vec![ZERO; order * order];
    full[..order].copy_from_slice(a_identity.entries());
    for (k, &col) in free_cols.iter().enumerate() {
        full[col] = x_free[k];
    }
    let table = full.chunks(order).map(|row| CoefficientVector { n_particles: n, entries: row.to_vec() }).collect();
    Ok(BoundarySystemSolution {
        n_particles: n,
        table,
        residual,
        null_dimension: null_dim,
        equations: m.nrows(),
        unknowns: m.ncols(),
    })
}
