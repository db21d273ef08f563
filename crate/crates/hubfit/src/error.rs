use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// `Config` variants map to exit code 1 in the CLI, everything else to exit
/// code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("invalid lattice configuration: {0}")]
    InvalidLattice(String),

    #[error("non-finite coordinate passed to potential evaluator: {0}")]
    NonFiniteCoordinate(f64),

    #[error("unknown unit tag `{0}`")]
    UnknownUnit(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("Bloch solve failed at k = {k}, cutoff M = {cutoff}: {message}")]
    BlochSolve { k: f64, cutoff: usize, message: String },

    #[error("site {site} does not fit the boundary interval ({boundary})")]
    SiteOutOfBoundary { site: i32, boundary: String },

    #[error("quadrature not converged: {0}")]
    QuadratureNotConverged(String),

    #[error("bound branch requires a positive scattering length (got {0})")]
    BoundBranchNeedsPositiveLength(f64),

    #[error("no root bracketed for branch {branch} at a_sc/a_ho = {a_ratio}")]
    NoRootInBracket { branch: usize, a_ratio: f64 },

    #[error("evaluation too close to a spectrum pole at eps = {0}")]
    PoleProximity(f64),

    #[error("reference interaction energy vanishes; cannot form a relative error")]
    ZeroReferenceInteraction,

    #[error("hopping parameter is zero; rescaled energies are undefined")]
    ZeroHopping,

    #[error(
        "reference energy {value} is below the floor {floor}; add a common \
         energy offset to both spectra before fitting"
    )]
    ReferenceEnergyNearZero { value: f64, floor: f64 },

    #[error("fit did not converge after {restarts} restarts (residual {residual})")]
    FitNotConverged { restarts: usize, residual: f64 },

    #[error("failed to bracket a minimum in U (residual is flat)")]
    FlatResidual,

    #[error("two-particle basis of {dim} states exceeds the cap of {cap}")]
    BasisTooLarge { dim: usize, cap: usize },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code class: 1 for configuration problems, 2 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownUnit(_) => 1,
            _ => 2,
        }
    }
}
