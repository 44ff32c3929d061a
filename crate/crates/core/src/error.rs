use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spheres {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("invalid cluster: {0}")]
    InvalidCluster(String),
    #[error("permutation maps spheres of different radii onto each other")]
    RadiiMismatch,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("size {n} exceeds the configured bound of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("point-group candidates are not closed under composition; check eps_d")]
    NotAGroup,
    #[error("symmetry number {sigma} does not divide {order}")]
    NotDivisible { sigma: u64, order: u128 },
    #[error("equality constraint gradients are linearly dependent (singular value ratio {0:.3e})")]
    RankDeficient(f64),
    #[error("Newton projection did not converge (residual {0:.3e})")]
    NewtonDiverged(f64),
    #[error("path endpoint is not feasible for the constraint system")]
    InfeasibleEndpoint,
    #[error("color class {0} contains spheres of different radii")]
    ColorRadiiConflict(usize),
    #[error("relaxation failed: {0}")]
    RelaxationFailed(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
