//! Symmetries of `<A, Σ>`: automorphisms, orbits on tuples, rank-bounded
//! type partitions and the formulas that define type classes.
//!
//! Orbits come from the materialized automorphism group; type partitions come
//! from back-and-forth refinement and never look at automorphisms. On a finite
//! structure the stable type partition and the orbit partition coincide, which
//! makes the two routes a cross-check on each other.

mod automorphism;
mod partition;
mod permutation;
mod types;

pub use automorphism::{automorphisms, is_automorphism, orbits, orbits_under};
pub use partition::Partition;
pub use permutation::{preserves_check, Permutation, Preservation};
pub use types::{hintikka_formula, type_partition, Depth, TypePartition, TypeRefinement};
