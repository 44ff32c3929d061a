//! Navigation of implicitly defined manifolds with strict-inequality
//! boundaries.

mod frame;
mod path;
mod toy;

pub use frame::{check_rank, newton_polish, project_to_manifold, tangent_basis, LocalFrame, RANK_TOLERANCE};
pub use path::{
    descent_step, find_path, metropolis_step, random_gaussian_step, sample_configuration, write_path_csv,
    DescentOutcome, PathConfig, PathMode, PathResult, PathStats, PathStatus, RandomOutcome, Rejection, StepKind,
};
pub use toy::{toy_endpoints, toy_set};
