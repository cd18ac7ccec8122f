//! Thresholds shared by the checks in this crate.

/// Pole guard band: `|denominator| ≤ POLE_BAND · max(1, u²)` is treated as a pole.
pub const POLE_BAND: f64 = 1e-12;

/// `|det U₊|` at or below this is a degenerate boundary.
pub const DEGENERATE_DET: f64 = 1e-12;

/// Symplectic relation `U†JU = J` for matrices built from real couplings.
pub const SYMPLECTIC: f64 = 1e-12;

/// Numerical identity test: residual at or below this counts as satisfied.
pub const IDENTITY_PASS: f64 = 1e-8;

/// Numerical identity test: a genuine violation must reach this on the panel.
pub const IDENTITY_FAIL_FLOOR: f64 = 1e-3;

/// Structural integrability test on the couplings themselves.
pub const STRUCTURAL: f64 = 1e-10;

/// Coordinates closer than this are treated as coinciding.
pub const COINCIDENCE: f64 = 1e-12;

/// Minimum `|u|`, `|v|`, `|u+v|` on sample panels. The amplitudes have no real
/// poles except `u = 0` at `c = 0`, so keeping relative momenta away from zero
/// keeps every panel entry well conditioned.
pub const PANEL_MIN_SEPARATION: f64 = 0.05;

/// Relative singular-value cutoff used to count null directions.
pub const NULLSPACE_RELATIVE: f64 = 1e-9;
