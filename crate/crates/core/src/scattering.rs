//! Two-body scattering amplitudes.
//!
//! With `u = k₁ − k₂` and the two-particle state
//!
//! ```text
//! x₁ < x₂:  e^{i(k₁x₁ + k₂x₂)} + S_R⁺(u) e^{i(k₂x₁ + k₁x₂)}
//! x₂ < x₁:  S_T⁺(u) e^{i(k₁x₁ + k₂x₂)}
//! ```
//!
//! the matching conditions give closed forms for `S_T⁺`, `S_R⁺`; `S_T⁻`, `S_R⁻`
//! are the same expressions with `(γ, η) → (−γ, −η)`.
//! [`amplitudes_bvp_oracle`] re-derives all four by solving the matching
//! conditions numerically, without using the closed forms.

use num_complex::Complex64;

use crate::couplings::CouplingParameters;
use crate::tolerance;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    /// Relative momentum `k₁ − k₂`.
    pub u: f64,
    pub s_t_plus: Complex64,
    pub s_r_plus: Complex64,
    pub s_t_minus: Complex64,
    pub s_r_minus: Complex64,
}

impl AmplitudeSet {
    /// Largest entrywise relative difference, `|a − b| / max(|a|, |b|)`;
    /// pairs that are both below `floor` in modulus compare absolutely.
    pub fn max_relative_difference(&self, other: &AmplitudeSet, floor: f64) -> f64 {
        self.pairs(other)
            .into_iter()
            .map(|(a, b)| {
                let scale = a.norm().max(b.norm());
                let diff = (a - b).norm();
                if scale > floor {
                    diff / scale
                } else {
                    diff
                }
            })
            .fold(0.0, crate::exec::nan_max)
    }

    fn pairs(&self, other: &AmplitudeSet) -> [(Complex64, Complex64); 4] {
        [
            (self.s_t_plus, other.s_t_plus),
            (self.s_r_plus, other.s_r_plus),
            (self.s_t_minus, other.s_t_minus),
            (self.s_r_minus, other.s_r_minus),
        ]
    }
}

/// Common denominator `iλu² − (γ² + η² + cλ + 1)u − ic` (even in γ and η).
fn denominator(p: &CouplingParameters, u: f64) -> Complex64 {
    let a = p.gamma * p.gamma + p.eta * p.eta + p.c * p.lambda + 1.0;
    Complex64::new(-a * u, p.lambda * u * u - p.c)
}

fn plus_pair(p: &CouplingParameters, u: f64, den: Complex64) -> (Complex64, Complex64) {
    let t_num = Complex64::new(p.gamma * p.gamma + p.eta * p.eta + p.c * p.lambda - 1.0, -2.0 * p.eta) * u;
    let r_num = Complex64::new(2.0 * p.gamma * u, p.lambda * u * u + p.c);
    (t_num / den, r_num / den)
}

/// Closed-form amplitudes. Real poles only occur at `u = 0` when `c = 0`;
/// anything inside the guard band `|den| ≤ 1e−12·max(1, u²)` is reported as
/// [`Error::PoleAtU`].
pub fn amplitudes(params: &CouplingParameters, u: f64) -> Result<AmplitudeSet> {
    params.validate()?;
    if !u.is_finite() {
        return Err(Error::InvalidInput(format!("relative momentum {u} is not finite")));
    }
    let den = denominator(params, u);
    if den.norm() <= tolerance::POLE_BAND * (u * u).max(1.0) {
        return Err(Error::PoleAtU { u });
    }
    let (s_t_plus, s_r_plus) = plus_pair(params, u, den);
    let (s_t_minus, s_r_minus) = plus_pair(&params.mirrored(), u, den);
    Ok(AmplitudeSet { u, s_t_plus, s_r_plus, s_t_minus, s_r_minus })
}

/// Affine form `constant + t·S_T + r·S_R`.
#[derive(Debug, Clone, Copy, Default)]
struct Affine {
    constant: Complex64,
    t: Complex64,
    r: Complex64,
}

impl Affine {
    fn scale(self, s: Complex64) -> Affine {
        Affine { constant: self.constant * s, t: self.t * s, r: self.r * s }
    }
}

impl std::ops::Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        Affine { constant: self.constant + o.constant, t: self.t + o.t, r: self.r + o.r }
    }
}

impl std::ops::Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        self + o.scale(Complex64::new(-1.0, 0.0))
    }
}

enum Slot {
    One,
    Transmitted,
    Reflected,
}

/// Value and `(∂₁ − ∂₂)`-derivative of one side of the two-body state on the
/// hyperplane `x₁ = x₂`. Each term is `slot · e^{i(q₁x₁ + q₂x₂)}`; the common
/// centre-of-mass factor `e^{i(k₁+k₂)X}` is dropped.
fn side(terms: &[(Slot, f64, f64)]) -> (Affine, Affine) {
    let mut value = Affine::default();
    let mut deriv = Affine::default();
    for (slot, q1, q2) in terms {
        let unit = match slot {
            Slot::One => Affine { constant: Complex64::new(1.0, 0.0), ..Default::default() },
            Slot::Transmitted => Affine { t: Complex64::new(1.0, 0.0), ..Default::default() },
            Slot::Reflected => Affine { r: Complex64::new(1.0, 0.0), ..Default::default() },
        };
        value = value + unit;
        deriv = deriv + unit.scale(I * (q1 - q2));
    }
    (value, deriv)
}

/// Solves the matching conditions for `(S_T, S_R)` with couplings `p`.
fn solve_matching(p: &CouplingParameters, k1: f64, k2: f64) -> Result<(Complex64, Complex64)> {
    // x1 < x2 is the "−" side of the boundary x1 = x2, x1 > x2 the "+" side
    let (psi_minus, d_minus) = side(&[(Slot::One, k1, k2), (Slot::Reflected, k2, k1)]);
    let (psi_plus, d_plus) = side(&[(Slot::Transmitted, k1, k2)]);
    let avg_psi = (psi_plus + psi_minus).scale(Complex64::new(0.5, 0.0));
    let avg_d = (d_plus + d_minus).scale(Complex64::new(0.5, 0.0));
    let g_minus = Complex64::new(p.gamma, -p.eta);
    let g_plus = Complex64::new(p.gamma, p.eta);

    // D[ψ₊ − ψ₋] = 2c⟨ψ⟩ − 2(γ − iη)⟨Dψ⟩
    let bc1 = (d_plus - d_minus) - avg_psi.scale(Complex64::new(2.0 * p.c, 0.0)) + avg_d.scale(2.0 * g_minus);
    // ψ₊ − ψ₋ = 2λ⟨Dψ⟩ + 2(γ + iη)⟨ψ⟩
    let bc2 = (psi_plus - psi_minus) - avg_d.scale(Complex64::new(2.0 * p.lambda, 0.0)) - avg_psi.scale(2.0 * g_plus);

    let det = bc1.t * bc2.r - bc1.r * bc2.t;
    let scale = [bc1.t, bc1.r, bc2.t, bc2.r].iter().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-13 * scale * scale || scale == 0.0 {
        return Err(Error::SingularSystem { u: k1 - k2 });
    }
    let (b1, b2) = (-bc1.constant, -bc2.constant);
    let s_t = (b1 * bc2.r - bc1.r * b2) / det;
    let s_r = (bc1.t * b2 - b1 * bc2.t) / det;
    Ok((s_t, s_r))
}

/// Amplitudes from the matching conditions in the lab frame.
pub fn amplitudes_bvp_oracle(params: &CouplingParameters, k1: f64, k2: f64) -> Result<AmplitudeSet> {
    params.validate()?;
    if !(k1.is_finite() && k2.is_finite()) || k1 == k2 {
        return Err(Error::InvalidMomenta { reason: format!("need finite k1 != k2, got {k1}, {k2}") });
    }
    let (s_t_plus, s_r_plus) = solve_matching(params, k1, k2)?;
    let (s_t_minus, s_r_minus) = solve_matching(&params.mirrored(), k1, k2)?;
    Ok(AmplitudeSet { u: k1 - k2, s_t_plus, s_r_plus, s_t_minus, s_r_minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn free_particles_transmit() {
        let a = amplitudes(&CouplingParameters::FREE, 1.0).unwrap();
        assert_eq!(a.s_t_plus, Complex64::new(1.0, 0.0));
        assert_eq!(a.s_t_minus, Complex64::new(1.0, 0.0));
        assert_eq!(a.s_r_plus, Complex64::new(0.0, 0.0));
        assert_eq!(a.s_r_minus, Complex64::new(0.0, 0.0));
        let o = amplitudes_bvp_oracle(&CouplingParameters::FREE, 1.0, 0.0).unwrap();
        assert!(o.max_relative_difference(&a, 1e-12) < 1e-15);
    }

    #[test]
    fn drift_family_closed_form() {
        for (c, eta, u) in [(1.0, 0.5, 0.7), (-2.0, 1.5, -3.1), (0.3, -0.8, 2.2)] {
            let a = amplitudes(&CouplingParameters::delta_with_drift(c, eta), u).unwrap();
            let den = Complex64::new((eta * eta + 1.0) * u, c);
            let st = |s: f64| Complex64::new(1.0 - eta * eta, 2.0 * s * eta) * u / den;
            let sr = Complex64::new(0.0, -c) / den;
            assert!(close(a.s_t_plus, st(1.0), 1e-14));
            assert!(close(a.s_t_minus, st(-1.0), 1e-14));
            assert!(close(a.s_r_plus, sr, 1e-14));
            assert!(close(a.s_r_minus, sr, 1e-14));
        }
    }

    #[test]
    fn balanced_family_reflects_completely() {
        for c in [0.5, 1.0, 3.0, -2.0] {
            for u in [-4.0, -0.3, 0.9, 2.5] {
                let a = amplitudes(&CouplingParameters::delta_prime_balanced(c), u).unwrap();
                assert!(a.s_t_plus.norm() < 1e-15 && a.s_t_minus.norm() < 1e-15);
                assert!((a.s_r_plus.norm() - 1.0).abs() < 1e-14);
                let expected = (I * u + c) / (I * u - c);
                assert!(close(a.s_r_plus, expected, 1e-14));
                assert!(close(a.s_r_minus, expected, 1e-14));
            }
        }
    }

    #[test]
    fn oracle_on_balanced_family_agrees_with_reflection_formula() {
        // The oracle gives (iu + c)/(iu − c), the reciprocal of the printed
        // simplification (iu − c)/(iu + c) that appears alongside this case.
        let c = 1.7;
        let (k1, k2) = (0.4, -1.1);
        let u = k1 - k2;
        let o = amplitudes_bvp_oracle(&CouplingParameters::delta_prime_balanced(c), k1, k2).unwrap();
        assert!(o.s_t_plus.norm() < 1e-14);
        assert!(close(o.s_r_plus, (I * u + c) / (I * u - c), 1e-14));
        let known_typo = (I * u - c) / (I * u + c);
        assert!((o.s_r_plus - known_typo).norm() > 0.1);
    }

    #[test]
    fn oracle_matches_closed_form_example() {
        let p = CouplingParameters::new(2.0, 0.5, 0.0, 0.0).unwrap();
        let o = amplitudes_bvp_oracle(&p, 1.3, -0.7).unwrap();
        let a = amplitudes(&p, 2.0).unwrap();
        assert!(o.max_relative_difference(&a, 1e-12) <= 1e-10);
    }

    #[test]
    fn yang_limit() {
        let c = 1.3;
        for u in [-2.0, 0.4, 3.3] {
            let a = amplitudes(&CouplingParameters::delta(c), u).unwrap();
            assert!(close(a.s_r_plus, c / (I * u - c), 1e-15));
            assert!(close(a.s_t_plus, I * u / (I * u - c), 1e-15));
        }
    }

    #[test]
    fn zero_momentum_limit() {
        let p = CouplingParameters::new(0.8, -1.2, 0.4, 2.0).unwrap();
        let a = amplitudes(&p, 0.0).unwrap();
        assert_eq!(a.s_t_plus.norm(), 0.0);
        assert!(close(a.s_r_plus, Complex64::new(-1.0, 0.0), 1e-15));
        assert!(close(a.s_r_minus, Complex64::new(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn pole_at_zero_without_delta() {
        let p = CouplingParameters::new(0.0, 1.0, 0.5, 0.0).unwrap();
        assert!(matches!(amplitudes(&p, 0.0), Err(Error::PoleAtU { .. })));
        assert!(amplitudes(&p, 1e-3).is_ok());
    }

    #[test]
    fn oracle_rejects_equal_momenta() {
        assert!(matches!(
            amplitudes_bvp_oracle(&CouplingParameters::delta(1.0), 0.5, 0.5),
            Err(Error::InvalidMomenta { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn oracle_agrees_with_closed_form(
            c in -3.0..3.0f64, l in -3.0..3.0f64, g in -3.0..3.0f64, e in -3.0..3.0f64,
            k1 in -3.0..3.0f64, u in 0.05..5.0f64, sign in any::<bool>(),
        ) {
            let u = if sign { u } else { -u };
            let p = CouplingParameters { c, lambda: l, gamma: g, eta: e };
            let a = amplitudes(&p, u).unwrap();
            let o = amplitudes_bvp_oracle(&p, k1, k1 - u).unwrap();
            prop_assert!(o.max_relative_difference(&a, 1e-12) <= 1e-10);
        }

        #[test]
        fn minus_amplitudes_are_mirrored_plus(
            c in -3.0..3.0f64, l in -3.0..3.0f64, g in -3.0..3.0f64, e in -3.0..3.0f64, u in 0.05..5.0f64,
        ) {
            let p = CouplingParameters { c, lambda: l, gamma: g, eta: e };
            let a = amplitudes(&p, u).unwrap();
            let m = amplitudes(&p.mirrored(), u).unwrap();
            prop_assert_eq!(a.s_t_minus, m.s_t_plus);
            prop_assert_eq!(a.s_r_minus, m.s_r_plus);
        }
    }
}
