//! Exact enumeration of slim semimodular lattices through the inversion
//! calculus of permutations.
//!
//! A planar diagram of a slim semimodular lattice of length `h` is encoded,
//! up to similarity, by a permutation of degree `h`; the lattice itself (up
//! to isomorphism) is encoded by the permutation's block, the class obtained
//! by independently replacing each segment restriction with itself or its
//! inverse. This crate implements that dictionary in four layers:
//!
//! * [`perm`]: permutation arithmetic (inversions, segments, blocks, 321
//!   patterns) and partial permutations on a grid,
//! * [`count`]: the inversion-statistics counting tables and the headline
//!   counts they yield, exact at every size,
//! * [`lattice`]: grid quotients by join-congruences, lattice property
//!   checks, and diagram export,
//! * [`oracle`]: independent brute-force recomputation of everything the
//!   other layers produce, for verification at small sizes.
//!
//! Counting is generic over the scalar (`u64` for quick desk checks,
//! [`Nat`] for exact results of unbounded size).

pub mod cache;
pub mod count;
pub mod lattice;
pub mod oracle;
pub mod perm;

/// Unbounded natural number; the default scalar for exact counts.
pub type Nat = num_bigint::BigUint;

/// Counting table over the default scalar.
pub type NatTable = count::CountTable<Nat>;

pub use count::{
    count_distributive_diagrams, count_ssd, count_ssl, CountEngine, CountTable, TableKind,
};
pub use lattice::{build_diagram, build_lattice, FiniteLattice, GridElement, GridQuotient};
pub use perm::{BlockForm, PartialPermutation, Permutation, SegmentPartition};
