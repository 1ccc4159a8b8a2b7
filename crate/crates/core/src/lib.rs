//! Exact normalized volumes of matroid base polytopes.
//!
//! The polytope of a matroid is the convex hull of the 0/1 incidence
//! vectors of its bases.  This crate computes its normalized volume as an
//! exact rational in two fully independent ways:
//!
//! * [`volume`](volume::volume) expands the volume over all anchored
//!   chains of cyclic flats, weighting each chain's descent-statistics
//!   ideal count by a Möbius coefficient of the refinement poset, with
//!   closed-form fast paths for Schubert and sparse paving matroids and
//!   for circuit-hyperplane relaxations;
//! * [`oracle_volume`](oracle::oracle_volume) counts lattice points of the
//!   dilated polytope and takes the leading Ehrhart finite difference.
//!
//! [`descent`] holds the binary-sequence combinatorics, [`matroid`] the
//! explicit basis-family kernel, [`chains`] the chain/sequence dictionary
//! and the weighted chain poset, and [`document`] the JSON input schema.

pub mod chains;
pub mod descent;
pub mod document;
pub mod matroid;
pub mod oracle;
pub mod volume;

pub use chains::{build_chain_poset, chain_to_sequence, sequence_to_chain, ChainError, ChainPoset, CyclicFlatChain};
pub use descent::{BinarySequence, PartitionInBox, Permutation, SequenceError};
pub use document::{DocumentError, MatroidDocument};
pub use matroid::{CyclicFlat, Matroid, MatroidError};
pub use oracle::{oracle_volume, OracleError, OracleVolume, DEFAULT_ORACLE_BUDGET};
pub use volume::{
    relaxation_volume, schubert_volume, sparse_paving_volume, volume, volume_connected,
    volume_connected_trace, ChainTraceRow, ExactVolume, VolumeError,
};
