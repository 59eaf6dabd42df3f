//! Truncated sequence space `F = A^[0,K)`.
//!
//! A map on sequences "almost preserves" a relation when the set of indices
//! at which it changes the relation's truth value is small. At a fixed
//! truncation `K` there is no absolute notion of "finite", so every check here
//! reports the exception index sets explicitly and callers pick the budget.

mod construct;
mod extend;
mod map;
mod preserve;
mod sequence;
mod valuation;

pub use construct::{build_counterexample_map, CounterexampleMap};
pub use extend::{extend_map, Extension, ExtensionTrace, TraceStep};
pub use map::{lift, SequenceMap};
pub use preserve::{
    check_almost_preserves, transfer_exceptions, AlmostPreservation, ExceptionReport, RelationSpec,
    SelectionReport,
};
pub use sequence::{almost_equal, IndexSet, Sequence};
pub use valuation::{boolean_valuation, parse_binding};
