//! Symmetry numbers of flexible sticky-sphere clusters.
//!
//! A cluster of hard spheres with sticky contacts lives on the manifold of all
//! configurations sharing its contact graph. Its *sticky symmetry group* is the
//! set of permutation-inversion operations whose image can be reached from the
//! cluster by a continuous, contact-preserving and overlap-free deformation.
//! The size of that group is the symmetry number σ and `2·N!/σ` is the counting
//! number that enters the cluster's partition function.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: clusters, contact detection, distance matrices and the
//!   implicit constraint systems that define configuration manifolds.
//! * [`groups`]: permutation-inversion algebra, graph automorphisms, point
//!   groups from the distance-matrix criterion, closure and partitions.
//! * [`manifold`]: tangent projection, Newton retraction and the
//!   descent/random-burst path finder.
//! * [`symmetry`]: the end-to-end pipeline producing a [`SymmetryReport`].
//! * [`enumeration`]: the exhaustive bond-breaking survey of 6-sphere clusters.
//! * [`cli`]: the batch command-line front end.

pub mod cli;
pub mod enumeration;
mod error;
pub mod geometry;
pub mod groups;
pub mod io;
pub mod manifold;
pub mod rng;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{
    build_constraint_system, detect_contacts, distance_matrix, AdjacencyMatrix, Cluster,
    ConstraintSystem, DistanceMatrix, Partition,
};
pub use groups::{PIGroup, PIOperation, Permutation};
pub use manifold::{find_path, PathConfig, PathResult, PathStatus};
pub use symmetry::{colored_symmetry, sticky_symmetry_group, SymmetryOptions, SymmetryReport};
