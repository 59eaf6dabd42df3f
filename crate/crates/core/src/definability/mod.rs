//! Deciding definability of the target and building certificates.
//!
//! Definable relations of a fixed arity are enumerated as `P_1, P_2, ...` by an
//! [`EnumerationStrategy`]. The target is definable exactly when no two tuples
//! that agree on every `P_i` disagree on the target; in that case it is a
//! disjunction of sign patterns `⋀ P_i^{σ_i}`, otherwise an automorphism moves
//! a target tuple outside the target.

mod decide;
mod enumerate;
mod synthesize;
mod witness;

pub use decide::{
    deciders, is_definable, BruteForce, Certificate, Decider, Decision, OrbitUnion, Violation,
    WitnessExhaustion,
};
pub use enumerate::{
    enumerate_definables, enumerators, ByRank, DefinableEnumeration, DefinableRelation,
    EnumerationStrategy, LevelSchedule, OrbitAtoms,
};
pub use synthesize::{synthesize, Synthesis};
pub use witness::witness_pair;
