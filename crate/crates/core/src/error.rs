use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coupling parameter `{name}` is not finite ({value})")]
    NonFiniteCoupling { name: &'static str, value: f64 },

    /// `det(U₊) ≈ 0`: separated or limiting boundary conditions.
    #[error("U+ is singular (|det| = {det_abs:e}); boundary matrix undefined")]
    DegenerateBoundary { det_abs: f64 },

    #[error("gauge map requires lambda = gamma = 0 (got lambda = {lambda}, gamma = {gamma})")]
    NotGaugeFamily { lambda: f64, gamma: f64 },

    /// Relative momentum lies inside the pole guard band of the amplitudes.
    #[error("scattering amplitudes have a pole at u = {u}")]
    PoleAtU { u: f64 },

    #[error("boundary-value system is numerically singular at u = {u}")]
    SingularSystem { u: f64 },

    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid permutation {images:?}: not a bijection of 1..={n}")]
    InvalidPermutation { images: Vec<usize>, n: usize },

    #[error("rank {index} out of range 1..={max} for N = {n}")]
    RankOutOfRange { n: usize, index: usize, max: usize },

    #[error("transposition index {site} out of range 1..{n} for N = {n}")]
    SiteOutOfRange { n: usize, site: usize },

    #[error("N = {n} is not supported here (allowed {min}..={max})")]
    UnsupportedSize { n: usize, min: usize, max: usize },

    #[error("momenta must be finite and pairwise distinct: {reason}")]
    InvalidMomenta { reason: String },

    #[error("couplings (c={c}, lambda={lambda}, gamma={gamma}, eta={eta}) are not in an integrable family")]
    NotIntegrable { c: f64, lambda: f64, gamma: f64, eta: f64 },

    #[error("boundary system has a {found}-dimensional solution space, expected {expected}")]
    RankDeficient { expected: usize, found: usize },

    #[error("coordinates {j} and {k} coincide; point lies on a wedge boundary")]
    OnBoundary { j: usize, k: usize },

    #[error("point is not in the identity wedge x1 < x2 < ... < xN")]
    WrongWedge,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
