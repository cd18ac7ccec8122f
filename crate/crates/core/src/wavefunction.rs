//! Position-space eigenfunctions.
//!
//! A [`PlaneWaveExpansion`] stores `A_P(Q)` for every pair of permutations;
//! in the wedge `Δ_Q` the function is `Σ_P A_P(Q) exp(i Σ_j k_{P(j)} x_{Q(j)})`.
//! At coincidence points (within [`tolerance::COINCIDENCE`]) values are
//! averaged over all adjacent wedges. Derivatives are always taken
//! analytically.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::bethe::{BetheState, MomentumVector};
use crate::couplings::{gauge_data, CouplingParameters};
use crate::exec::{nan_max, Execution};
use crate::permutation::{Permutation, SymmetricGroup};
use crate::tolerance;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PositionVector {
    x: Vec<f64>,
}

impl PositionVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("coordinate {bad} is not finite")));
        }
        Ok(PositionVector { x })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    /// `x_j`, 1-based.
    pub fn get(&self, j: usize) -> f64 {
        self.x[j - 1]
    }

    /// `(x_{Q(1)}, …, x_{Q(N)})`.
    pub fn permuted(&self, q: &Permutation) -> Vec<f64> {
        q.images().iter().map(|&m| self.x[m - 1]).collect()
    }
}

/// `Δ_Q: x_{Q(1)} < … < x_{Q(N)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wedge {
    pub ordering: Permutation,
}

/// Particle labels sorted by position, ties broken by label.
fn sorting_permutation(x: &[f64]) -> Vec<usize> {
    let mut labels: Vec<usize> = (1..=x.len()).collect();
    labels.sort_by(|&a, &b| x[a - 1].total_cmp(&x[b - 1]).then(a.cmp(&b)));
    labels
}

pub fn locate_wedge(x: &PositionVector) -> Result<Wedge> {
    let labels = sorting_permutation(x.as_slice());
    for w in labels.windows(2) {
        if (x.get(w[1]) - x.get(w[0])).abs() <= tolerance::COINCIDENCE {
            return Err(Error::OnBoundary { j: w[0].min(w[1]), k: w[0].max(w[1]) });
        }
    }
    Ok(Wedge { ordering: Permutation::new(labels)? })
}

/// Every wedge whose closure contains `x`: all orderings consistent with the
/// coincidence clusters of `x`.
pub fn adjacent_wedges(x: &PositionVector) -> Result<Vec<Permutation>> {
    let labels = sorting_permutation(x.as_slice());
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &m in &labels {
        match clusters.last_mut() {
            Some(last) if (x.get(m) - x.get(*last.last().expect("clusters are non-empty"))).abs() <= tolerance::COINCIDENCE => {
                last.push(m)
            }
            _ => clusters.push(vec![m]),
        }
    }
    let mut out = vec![Vec::new()];
    for cluster in clusters {
        let orders = SymmetricGroup::shared(cluster.len())?;
        let mut next = Vec::with_capacity(out.len() * orders.order());
        for prefix in &out {
            for o in orders.elements() {
                let mut w: Vec<usize> = prefix.clone();
                w.extend(o.images().iter().map(|&t| cluster[t - 1]));
                next.push(w);
            }
        }
        out = next;
    }
    out.into_iter().map(Permutation::new).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// `σ(Q)`: 1 for bosons, `sgn(Q)` for fermions.
    pub fn sign(self, q: &Permutation) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => q.sign() as f64,
        }
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            other => Err(Error::InvalidInput(format!("unknown statistics `{other}`"))),
        }
    }
}

/// `A_P(Q)` for all `P`, `Q`, indexed `[offset(P)][offset(Q)]`.
#[derive(Debug, Clone)]
pub struct PlaneWaveExpansion {
    group: Arc<SymmetricGroup>,
    momenta: MomentumVector,
    coeffs: Vec<Vec<Complex64>>,
}

impl PlaneWaveExpansion {
    pub fn new(momenta: MomentumVector, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        let group = SymmetricGroup::shared(momenta.len())?;
        let order = group.order();
        if coeffs.len() != order {
            return Err(Error::SizeMismatch { expected: order, found: coeffs.len() });
        }
        if let Some(row) = coeffs.iter().find(|r| r.len() != order) {
            return Err(Error::SizeMismatch { expected: order, found: row.len() });
        }
        Ok(PlaneWaveExpansion { group, momenta, coeffs })
    }

    pub fn n_particles(&self) -> usize {
        self.momenta.len()
    }

    pub fn momenta(&self) -> &MomentumVector {
        &self.momenta
    }

    pub fn group(&self) -> &Arc<SymmetricGroup> {
        &self.group
    }

    pub fn coefficient(&self, p_offset: usize, q_offset: usize) -> Complex64 {
        self.coeffs[p_offset][q_offset]
    }

    pub fn coefficients(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.coeffs
    }

    /// `Σ_{P,Q} |A_P(Q)|`.
    pub fn coefficient_scale(&self) -> f64 {
        self.coeffs.iter().flatten().map(|z| z.norm()).sum()
    }

    fn check_len(&self, x: &PositionVector) -> Result<()> {
        if x.len() != self.n_particles() {
            return Err(Error::SizeMismatch { expected: self.n_particles(), found: x.len() });
        }
        Ok(())
    }

    /// The wedge-`Q` formula evaluated at `x`, wherever `x` lies.
    pub fn value_in_wedge(&self, q: &Permutation, x: &PositionVector) -> Result<Complex64> {
        Ok(self.value_and_gradient(q, x)?.0)
    }

    /// Value and `(∂_1 ψ, …, ∂_N ψ)` of the wedge-`Q` formula at `x`.
    pub fn value_and_gradient(&self, q: &Permutation, x: &PositionVector) -> Result<(Complex64, Vec<Complex64>)> {
        self.check_len(x)?;
        let q_offset = self.group.offset_of(q)?;
        let xq = x.permuted(q);
        // particle m sits at position Q⁻¹(m)
        let q_inv = q.inverse();
        let mut value = ZERO;
        let mut grad = vec![ZERO; x.len()];
        for (p_offset, p) in self.group.elements().iter().enumerate() {
            let a = self.coeffs[p_offset][q_offset];
            if a == ZERO {
                continue;
            }
            let phase: f64 = (1..=x.len()).map(|j| self.momenta.get(p.apply(j)) * xq[j - 1]).sum();
            let term = a * Complex64::from_polar(1.0, phase);
            value += term;
            for (m, g) in grad.iter_mut().enumerate() {
                *g += term * I * self.momenta.get(p.apply(q_inv.apply(m + 1)));
            }
        }
        Ok((value, grad))
    }

    /// `ψ(x)`, averaged over adjacent wedges at coincidence points.
    pub fn evaluate(&self, x: &PositionVector) -> Result<Complex64> {
        self.check_len(x)?;
        let wedges = adjacent_wedges(x)?;
        let mut sum = ZERO;
        for q in &wedges {
            sum += self.value_in_wedge(q, x)?;
        }
        Ok(sum / wedges.len() as f64)
    }

    /// Evaluates on many points under `exec`, preserving order.
    pub fn evaluate_many(&self, points: &[PositionVector], exec: Execution) -> Result<Vec<Complex64>> {
        exec.try_map(points, |x| self.evaluate(x))
    }
}

impl BetheState {
    pub fn expansion(&self) -> PlaneWaveExpansion {
        PlaneWaveExpansion {
            group: self.group().clone(),
            momenta: self.momenta().clone(),
            coeffs: self.table().iter().map(|row| row.entries().to_vec()).collect(),
        }
    }

    pub fn evaluate(&self, x: &PositionVector) -> Result<Complex64> {
        self.expansion().evaluate(x)
    }
}

/// `x₁, …, x_N, re_psi, im_psi` rows, 17 significant digits.
pub fn grid_csv(points: &[PositionVector], values: &[Complex64]) -> String {
    let n = points.first().map_or(0, |p| p.len());
    let mut out = (1..=n).map(|j| format!("x{j},")).collect::<String>();
    out.push_str("re_psi,im_psi\n");
    for (p, v) in points.iter().zip(values) {
        for x in p.as_slice() {
            let _ = write!(out, "{x:.16e},");
        }
        let _ = writeln!(out, "{:.16e},{:.16e}", v.re, v.im);
    }
    out
}

/// Max absolute residuals of the two matching conditions at `x_j = x_k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryResidual {
    /// `D(ψ₊ − ψ₋) − 2c⟨ψ⟩ + 2(γ − iη)⟨Dψ⟩`.
    pub r1: f64,
    /// `ψ₊ − ψ₋ − 2λ⟨Dψ⟩ − 2(γ + iη)⟨ψ⟩`.
    pub r2: f64,
}

impl BoundaryResidual {
    pub fn max(&self) -> f64 {
        nan_max(self.r1, self.r2)
    }

    pub fn merge(self, other: BoundaryResidual) -> BoundaryResidual {
        BoundaryResidual { r1: nan_max(self.r1, other.r1), r2: nan_max(self.r2, other.r2) }
    }
}

/// One-sided limits of `(ψ, ∂_j ψ − ∂_k ψ)` from the sides `x_j < x_k` (−)
/// and `x_j > x_k` (+) of the plane `x_j = x_k`.
fn one_sided(expansion: &PlaneWaveExpansion, x: &PositionVector, j: usize, k: usize) -> Result<[(Complex64, Complex64); 2]> {
    let labels = sorting_permutation(x.as_slice());
    let pj = labels.iter().position(|&m| m == j).expect("label present");
    let pk = labels.iter().position(|&m| m == k).expect("label present");
    if pj.abs_diff(pk) != 1 {
        return Err(Error::InvalidInput(format!("particles {j} and {k} are not neighbours at the sample point")));
    }
    let (lo, hi) = (pj.min(pk), pj.max(pk));
    let mut minus = labels.clone();
    (minus[lo], minus[hi]) = (j, k);
    let mut plus = labels;
    (plus[lo], plus[hi]) = (k, j);
    let mut out = [(ZERO, ZERO); 2];
    for (slot, order) in out.iter_mut().zip([minus, plus]) {
        let (v, g) = expansion.value_and_gradient(&Permutation::new(order)?, x)?;
        *slot = (v, g[j - 1] - g[k - 1]);
    }
    Ok(out)
}

fn check_pair(n: usize, j: usize, k: usize) -> Result<()> {
    if j == 0 || j >= k || k > n {
        return Err(Error::InvalidInput(format!("need 1 ≤ j < k ≤ {n}, got j = {j}, k = {k}")));
    }
    Ok(())
}

/// Residuals of the matching conditions of pair `(j, k)` over sample points
/// lying on `x_j = x_k` (other coordinates distinct from these two).
pub fn boundary_residual(
    expansion: &PlaneWaveExpansion,
    params: &CouplingParameters,
    j: usize,
    k: usize,
    samples: &[PositionVector],
) -> Result<BoundaryResidual> {
    check_pair(expansion.n_particles(), j, k)?;
    let g_minus = Complex64::new(params.gamma, -params.eta);
    let g_plus = Complex64::new(params.gamma, params.eta);
    let mut res = BoundaryResidual::default();
    for x in samples {
        expansion.check_len(x)?;
        if (x.get(j) - x.get(k)).abs() > tolerance::COINCIDENCE {
            return Err(Error::InvalidInput(format!("sample point has x{j} ≠ x{k}")));
        }
        let [(psi_m, d_m), (psi_p, d_p)] = one_sided(expansion, x, j, k)?;
        let avg_psi = (psi_p + psi_m) * 0.5;
        let avg_d = (d_p + d_m) * 0.5;
        let r1 = (d_p - d_m) - avg_psi * (2.0 * params.c) + g_minus * avg_d * 2.0;
        let r2 = (psi_p - psi_m) - avg_d * (2.0 * params.lambda) - g_plus * avg_psi * 2.0;
        res = res.merge(BoundaryResidual { r1: r1.norm(), r2: r2.norm() });
    }
    Ok(res)
}

/// Random points with `x_j = x_k`; every other coordinate keeps at least
/// `min_gap` from the rest.
pub fn boundary_samples<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    j: usize,
    k: usize,
    count: usize,
    half_width: f64,
    min_gap: f64,
) -> Result<Vec<PositionVector>> {
    check_pair(n, j, k)?;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-half_width..half_width)).collect();
        x[k - 1] = x[j - 1];
        let distinct = (0..n).all(|a| {
            (a + 1..n).all(|b| (a == j - 1 && b == k - 1) || (x[a] - x[b]).abs() >= min_gap)
        });
        if distinct {
            out.push(PositionVector::new(x)?);
        }
    }
    Ok(out)
}

/// Max residual over every pair `j < k`, `per_pair` random samples each.
pub fn all_pairs_boundary_residual<R: Rng + ?Sized>(
    expansion: &PlaneWaveExpansion,
    params: &CouplingParameters,
    rng: &mut R,
    per_pair: usize,
) -> Result<BoundaryResidual> {
    let n = expansion.n_particles();
    let mut res = BoundaryResidual::default();
    for j in 1..=n {
        for k in j + 1..=n {
            let samples = boundary_samples(rng, n, j, k, per_pair, 3.0, 0.05)?;
            res = res.merge(boundary_residual(expansion, params, j, k, &samples)?);
        }
    }
    Ok(res)
}

/// Central-difference `|Σ_j ∂_j² ψ + E ψ|` at an interior point, with an
/// error bound covering truncation (`O(h²)`) and cancellation (`O(ε/h²)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerCheck {
    pub residual: f64,
    pub bound: f64,
}

pub fn schrodinger_residual_fd(expansion: &PlaneWaveExpansion, x: &PositionVector, h: f64) -> Result<SchrodingerCheck> {
    let wedge = locate_wedge(x)?;
    let sorted = x.permuted(&wedge.ordering);
    if let Some(w) = sorted.windows(2).find(|w| w[1] - w[0] <= 2.0 * h) {
        return Err(Error::InvalidInput(format!("point within 2h of a boundary (gap {})", w[1] - w[0])));
    }
    let q = &wedge.ordering;
    let f = |y: &[f64]| expansion.value_in_wedge(q, &PositionVector { x: y.to_vec() });
    let centre = f(x.as_slice())?;
    let mut lap = ZERO;
    for m in 0..x.len() {
        let mut y = x.as_slice().to_vec();
        y[m] = x.as_slice()[m] + h;
        let fp = f(&y)?;
        y[m] = x.as_slice()[m] - h;
        let fm = f(&y)?;
        lap += (fp - centre * 2.0 + fm) / (h * h);
    }
    let energy = expansion.momenta().energy();
    let residual = (lap + centre * energy).norm();
    let n = x.len() as f64;
    let k_max = expansion.momenta().as_slice().iter().fold(0.0f64, |a, k| a.max(k.abs()));
    let amp: f64 = expansion.coefficients().iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let bound = 10.0 * amp * n * (h * h * k_max.powi(4) / 12.0 + 4.0 * f64::EPSILON * (1.0 + energy * h * h) / (h * h));
    Ok(SchrodingerCheck { residual, bound })
}

/// `d_P = sgn(P) ∏_{j>k} (i(k_{P(j)} − k_{P(k)}) + c)`, indexed by offset of `P`.
pub fn determinant_coefficients(k: &MomentumVector, c: f64) -> Result<Vec<Complex64>> {
    let group = SymmetricGroup::shared(k.len())?;
    Ok(group
        .elements()
        .iter()
        .map(|p| {
            let mut d = Complex64::new(p.sign() as f64, 0.0);
            for a in 1..=k.len() {
                for b in 1..a {
                    d *= I * (k.get(p.apply(a)) - k.get(p.apply(b))) + c;
                }
            }
            d
        })
        .collect())
}

/// `∏_{j>k} (∂_j − ∂_k + c) det[exp(i k_m x_n)]` on the closure of `Δ_I`.
pub fn determinant_eigenfunction(k: &MomentumVector, c: f64, x: &PositionVector) -> Result<Complex64> {
    if x.len() != k.len() {
        return Err(Error::SizeMismatch { expected: k.len(), found: x.len() });
    }
    if x.as_slice().windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::WrongWedge);
    }
    let group = SymmetricGroup::shared(k.len())?;
    let d = determinant_coefficients(k, c)?;
    Ok(group
        .elements()
        .iter()
        .zip(&d)
        .map(|(p, dp)| {
            let phase: f64 = (1..=k.len()).map(|j| k.get(p.apply(j)) * x.get(j)).sum();
            dp * Complex64::from_polar(1.0, phase)
        })
        .sum())
}

/// `ψ(x) = σ(Q) ψ_I(x_{Q(1)}, …, x_{Q(N)})`. At coincidences fermions vanish
/// and bosons take the continuous value.
pub fn extend_by_statistics<F>(psi_identity: F, statistics: Statistics, x: &PositionVector) -> Result<Complex64>
where
    F: Fn(&PositionVector) -> Result<Complex64>,
{
    match locate_wedge(x) {
        Ok(w) => Ok(psi_identity(&PositionVector { x: x.permuted(&w.ordering) })? * statistics.sign(&w.ordering)),
        Err(Error::OnBoundary { .. }) => match statistics {
            Statistics::Fermion => Ok(ZERO),
            Statistics::Boson => {
                let mut sorted = x.as_slice().to_vec();
                sorted.sort_by(f64::total_cmp);
                psi_identity(&PositionVector { x: sorted })
            }
        },
        Err(e) => Err(e),
    }
}

/// Extension of `Σ_P a_P exp(i k_P·x)` from `Δ_I` to every wedge:
/// `A_P(Q) = σ(Q) a_P`.
pub fn extend_expansion(momenta: MomentumVector, identity_coeffs: &[Complex64], statistics: Statistics) -> Result<PlaneWaveExpansion> {
    let group = SymmetricGroup::shared(momenta.len())?;
    if identity_coeffs.len() != group.order() {
        return Err(Error::SizeMismatch { expected: group.order(), found: identity_coeffs.len() });
    }
    let signs: Vec<f64> = group.elements().iter().map(|q| statistics.sign(q)).collect();
    let coeffs = identity_coeffs.iter().map(|&a| signs.iter().map(|&s| a * s).collect()).collect();
    PlaneWaveExpansion::new(momenta, coeffs)
}

pub fn determinant_expansion(k: &MomentumVector, c: f64, statistics: Statistics) -> Result<PlaneWaveExpansion> {
    extend_expansion(k.clone(), &determinant_coefficients(k, c)?, statistics)
}

/// `Σ_{j<k} Θ(x_j − x_k)` with `Θ(0) = 1/2`.
pub fn gauge_step_count(x: &PositionVector) -> f64 {
    let s = x.as_slice();
    let mut count = 0.0;
    for a in 0..s.len() {
        for b in a + 1..s.len() {
            let d = s[a] - s[b];
            if d.abs() <= tolerance::COINCIDENCE {
                count += 0.5;
            } else if d > 0.0 {
                count += 1.0;
            }
        }
    }
    count
}

fn gauge_alpha(params: &CouplingParameters) -> Result<f64> {
    Ok(gauge_data(params)?.alpha)
}

/// `exp(−iα Σ_{j<k} Θ(x_j − x_k)) ψ(x)` for an explicit `α`.
pub fn gauge_map_alpha(expansion: &PlaneWaveExpansion, alpha: f64, x: &PositionVector) -> Result<Complex64> {
    Ok(expansion.evaluate(x)? * Complex64::from_polar(1.0, -alpha * gauge_step_count(x)))
}

/// Gauge map for `(c, 0, 0, η)`; fails with [`Error::NotGaugeFamily`]
/// otherwise.
pub fn gauge_map(state: &BetheState, x: &PositionVector) -> Result<Complex64> {
    gauge_map_alpha(&state.expansion(), gauge_alpha(state.params())?, x)
}

/// The gauge-mapped function as an expansion: `A_P(Q) ↦ e^{−iα·inv(Q)} A_P(Q)`.
pub fn gauge_transform_alpha(expansion: &PlaneWaveExpansion, alpha: f64) -> PlaneWaveExpansion {
    let mut out = expansion.clone();
    let phases: Vec<Complex64> =
        expansion.group().elements().iter().map(|q| Complex64::from_polar(1.0, -alpha * q.inversions() as f64)).collect();
    for row in out.coeffs.iter_mut() {
        for (a, ph) in row.iter_mut().zip(&phases) {
            *a *= ph;
        }
    }
    out
}

pub fn gauge_transform(state: &BetheState) -> Result<PlaneWaveExpansion> {
    Ok(gauge_transform_alpha(&state.expansion(), gauge_alpha(state.params())?))
}
