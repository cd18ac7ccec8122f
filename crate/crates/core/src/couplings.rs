//! The four-parameter family of local interactions.
//!
//! A coupling `(c, λ, γ, η)` describes the formal potential
//! `c δ + 4λ ∂δ∂ + 2(γ + iη) ∂δ − 2(γ − iη) δ∂`. Rigorously it is a set of
//! matching conditions at the interaction point, encoded by the 2×2 matrix
//! `U = U₊⁻¹ U₋` that maps left limits `(ψ'(0⁻), ψ(0⁻))` to right limits.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::tolerance;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplingParameters {
    /// Delta coupling.
    pub c: f64,
    /// Delta-prime-type coupling.
    pub lambda: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl CouplingParameters {
    pub const FREE: CouplingParameters = CouplingParameters { c: 0.0, lambda: 0.0, gamma: 0.0, eta: 0.0 };

    pub fn new(c: f64, lambda: f64, gamma: f64, eta: f64) -> Result<Self> {
        let p = CouplingParameters { c, lambda, gamma, eta };
        p.validate()?;
        Ok(p)
    }

    /// Plain delta interaction `(c, 0, 0, 0)`.
    pub fn delta(c: f64) -> Self {
        CouplingParameters { c, ..Self::FREE }
    }

    /// The `(c, 0, 0, η)` family.
    pub fn delta_with_drift(c: f64, eta: f64) -> Self {
        CouplingParameters { c, eta, ..Self::FREE }
    }

    /// The `(c, 1/c, 0, 0)` family.
    pub fn delta_prime_balanced(c: f64) -> Self {
        CouplingParameters { c, lambda: 1.0 / c, ..Self::FREE }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("c", self.c), ("lambda", self.lambda), ("gamma", self.gamma), ("eta", self.eta)] {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoupling { name, value });
            }
        }
        Ok(())
    }

    /// Couplings with `(γ, η) → (−γ, −η)`, i.e. the particles exchanged.
    pub fn mirrored(&self) -> Self {
        CouplingParameters { gamma: -self.gamma, eta: -self.eta, ..*self }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c, self.lambda, self.gamma, self.eta]
    }
}

impl fmt::Display for CouplingParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c={}, lambda={}, gamma={}, eta={})", self.c, self.lambda, self.gamma, self.eta)
    }
}

/// Matching matrix in `(ψ'(0⁺), ψ(0⁺))ᵀ = U (ψ'(0⁻), ψ(0⁻))ᵀ`.
///
/// `u12` carries units of momentum and `u21` of inverse momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMatrix {
    pub u11: Complex64,
    pub u12: Complex64,
    pub u21: Complex64,
    pub u22: Complex64,
}

impl BoundaryMatrix {
    pub fn identity() -> Self {
        Self::from_matrix(&Matrix2::identity())
    }

    pub fn from_matrix(m: &Matrix2<Complex64>) -> Self {
        BoundaryMatrix { u11: m[(0, 0)], u12: m[(0, 1)], u21: m[(1, 0)], u22: m[(1, 1)] }
    }

    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.u11, self.u12, self.u21, self.u22)
    }

    pub fn determinant(&self) -> Complex64 {
        self.u11 * self.u22 - self.u12 * self.u21
    }

    /// Right limits `(ψ'(0⁺), ψ(0⁺))` from left limits.
    pub fn propagate(&self, d_left: Complex64, psi_left: Complex64) -> (Complex64, Complex64) {
        (self.u11 * d_left + self.u12 * psi_left, self.u21 * d_left + self.u22 * psi_left)
    }
}

/// `U₊` and `U₋` of the parameterisation, in that order.
pub fn build_u_pm(params: &CouplingParameters) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    let one = Complex64::new(1.0, 0.0);
    let g_minus = Complex64::new(params.gamma, 0.0) - I * params.eta;
    let g_plus = Complex64::new(params.gamma, 0.0) + I * params.eta;
    let half_c = Complex64::new(params.c / 2.0, 0.0);
    let two_l = Complex64::new(2.0 * params.lambda, 0.0);
    let u_plus = Matrix2::new(one + g_minus, -half_c, -two_l, one - g_plus);
    let u_minus = Matrix2::new(one - g_minus, half_c, two_l, one + g_plus);
    (u_plus, u_minus)
}

/// `U = U₊⁻¹ U₋`. Fails with [`Error::DegenerateBoundary`] when `U₊` is singular,
/// which includes the separated conditions of `(c, 1/c, 0, 0)`.
pub fn boundary_matrix(params: &CouplingParameters) -> Result<BoundaryMatrix> {
    params.validate()?;
    let (u_plus, u_minus) = build_u_pm(params);
    let det = u_plus.determinant();
    if det.norm() <= tolerance::DEGENERATE_DET {
        return Err(Error::DegenerateBoundary { det_abs: det.norm() });
    }
    // explicit 2x2 inverse; keeps the free case exactly the identity
    let inv = Matrix2::new(u_plus[(1, 1)], -u_plus[(0, 1)], -u_plus[(1, 0)], u_plus[(0, 0)]) / det;
    Ok(BoundaryMatrix::from_matrix(&(inv * u_minus)))
}

/// Max-norm of `U†JU − J` with `J = [[0, −1], [1, 0]]`.
pub fn check_symplectic(u: &BoundaryMatrix) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let j = Matrix2::new(zero, -one, one, zero);
    let m = u.to_matrix();
    let diff = m.adjoint() * j * m - j;
    diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Data of the unitary map taking `(c, 0, 0, η)` to the delta gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeData {
    /// Equivalent delta coupling `c / (1 + η²)`.
    pub c_tilde: f64,
    /// Gauge phase in `(−π, π]` with `e^{iα} = (1 + iη)/(1 − iη)`.
    pub alpha: f64,
}

impl GaugeData {
    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.alpha)
    }
}

pub fn gauge_data(params: &CouplingParameters) -> Result<GaugeData> {
    params.validate()?;
    if params.lambda != 0.0 || params.gamma != 0.0 {
        return Err(Error::NotGaugeFamily { lambda: params.lambda, gamma: params.gamma });
    }
    let eta = params.eta;
    // arg((1+iη)/(1−iη)) = 2·atan(η), which already lies in (−π, π)
    let alpha = 2.0 * eta.atan();
    debug_assert!(alpha > -PI && alpha <= PI);
    Ok(GaugeData { c_tilde: params.c / (1.0 + eta * eta), alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_case_is_identity() {
        let (up, um) = build_u_pm(&CouplingParameters::FREE);
        assert_eq!(up, Matrix2::identity());
        assert_eq!(um, Matrix2::identity());
        assert_eq!(boundary_matrix(&CouplingParameters::FREE).unwrap(), BoundaryMatrix::identity());
    }

    #[test]
    fn delta_u_pm() {
        let (up, um) = build_u_pm(&CouplingParameters::delta(3.0));
        assert_eq!(up, Matrix2::new(c(1.0, 0.0), c(-1.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)));
        assert_eq!(um, Matrix2::new(c(1.0, 0.0), c(1.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn generic_u_pm_substitution() {
        let (up, um) = build_u_pm(&CouplingParameters::new(1.0, 1.0, 0.5, 2.0).unwrap());
        assert_eq!(up, Matrix2::new(c(1.5, -2.0), c(-0.5, 0.0), c(-2.0, 0.0), c(0.5, -2.0)));
        assert_eq!(um, Matrix2::new(c(0.5, 2.0), c(0.5, 0.0), c(2.0, 0.0), c(1.5, 2.0)));
    }

    #[test]
    fn delta_boundary_matrix_matches_hand_solution() {
        // ψ continuous, ψ' jumps by cψ: (ψ'+, ψ+) = (ψ'- + cψ-, ψ-)
        for cc in [-2.0, 0.5, 1.0, 7.25] {
            let u = boundary_matrix(&CouplingParameters::delta(cc)).unwrap();
            let expected = BoundaryMatrix { u11: c(1.0, 0.0), u12: c(cc, 0.0), u21: c(0.0, 0.0), u22: c(1.0, 0.0) };
            assert!((u.to_matrix() - expected.to_matrix()).norm() < 1e-15);
        }
    }

    #[test]
    fn balanced_delta_prime_is_degenerate() {
        let err = boundary_matrix(&CouplingParameters::delta_prime_balanced(2.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateBoundary { .. }));
    }

    #[test]
    fn boundary_matrix_satisfies_averaged_conditions() {
        // Feed U back into the averaged matching conditions it came from.
        let p = CouplingParameters::new(0.7, -0.4, 0.3, 1.1).unwrap();
        let u = boundary_matrix(&p).unwrap();
        let (dl, pl) = (c(0.3, -1.2), c(0.9, 0.4));
        let (dr, pr) = u.propagate(dl, pl);
        let avg_psi = (pl + pr) / 2.0;
        let avg_d = (dl + dr) / 2.0;
        let g_minus = c(p.gamma, -p.eta);
        let g_plus = c(p.gamma, p.eta);
        let r1 = dr - dl - (p.c * avg_psi - 2.0 * g_minus * avg_d);
        let r2 = pr - pl - (4.0 * p.lambda * avg_d + 2.0 * g_plus * avg_psi);
        assert!(r1.norm() < 1e-14 && r2.norm() < 1e-14);
    }

    #[test]
    fn symplectic_residuals() {
        assert_eq!(check_symplectic(&BoundaryMatrix::identity()), 0.0);
        let u = boundary_matrix(&CouplingParameters::delta(1.0)).unwrap();
        assert!(check_symplectic(&u) <= 1e-12);
        let bad = BoundaryMatrix { u11: c(2.0, 0.0), u12: c(0.0, 0.0), u21: c(0.0, 0.0), u22: c(1.0, 0.0) };
        assert_eq!(check_symplectic(&bad), 1.0);
    }

    #[test]
    fn gauge_data_examples() {
        let g = gauge_data(&CouplingParameters::delta(1.5)).unwrap();
        assert_eq!(g, GaugeData { c_tilde: 1.5, alpha: 0.0 });

        let g = gauge_data(&CouplingParameters::delta_with_drift(2.0, 1.0)).unwrap();
        assert!((g.c_tilde - 1.0).abs() < 1e-15);
        assert!((g.alpha - PI / 2.0).abs() < 1e-15);

        let err = gauge_data(&CouplingParameters::new(1.0, 0.5, 0.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotGaugeFamily { .. }));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(CouplingParameters::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(CouplingParameters::new(0.0, 0.0, f64::INFINITY, 0.0).is_err());
    }

    fn couplings() -> impl Strategy<Value = CouplingParameters> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(c, l, g, e)| CouplingParameters { c, lambda: l, gamma: g, eta: e })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn symplectic_and_unit_determinant(p in couplings()) {
            let (up, _) = build_u_pm(&p);
            // entries grow like 1/|det U₊|; keep them O(10) so 1e-12 is meaningful
            prop_assume!(up.determinant().norm() > 0.1);
            let u = boundary_matrix(&p).unwrap();
            prop_assert!(check_symplectic(&u) <= 1e-12);
            prop_assert!((u.determinant().norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn gauge_phase_identity(eta in -50.0..50.0f64, cc in -5.0..5.0f64) {
            let g = gauge_data(&CouplingParameters::delta_with_drift(cc, eta)).unwrap();
            let expected = c(1.0, eta) / c(1.0, -eta);
            prop_assert!((g.phase() - expected).norm() <= 1e-12);
            prop_assert!(g.alpha > -PI && g.alpha <= PI);
        }
    }
}
