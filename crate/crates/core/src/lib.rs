//! First-order definability on finite relational structures.
//!
//! Given a structure `<A, Σ ∪ {R}>` this crate decides whether the target
//! relation `R` is first-order definable from `Σ` and produces checkable
//! evidence either way: a defining formula, or an automorphism of `<A, Σ>`
//! that moves a tuple in `R` to one outside it. The [`seqspace`] module
//! lifts the same question to truncated sequence spaces `A^[0,K)`, where
//! maps are compared index by index and exceptions are reported explicitly.
//!
//! Interchangeable algorithms (enumeration modes, definability deciders)
//! sit behind traits and are looked up by name through a [`registry::Registry`].

pub mod cli;
pub mod definability;
pub mod error;
pub mod formula;
pub mod registry;
pub mod seqspace;
pub mod structure;
pub mod symmetry;
pub mod tuples;

pub use error::{Error, Result};
pub use formula::{Formula, Var};
pub use structure::{Signature, Structure, Symbol};
pub use tuples::{Elem, Table, Tuple};
