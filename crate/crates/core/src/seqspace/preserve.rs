use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{relation_table, Formula};
use crate::structure::{Structure, EQUALITY};
use crate::tuples::{all_tuples, tuple_count, Elem, Table};

use super::{IndexSet, Sequence, SequenceMap};

const MAX_SELECTIONS: usize = 1 << 20;

/// The relation whose almost-preservation is being checked.
#[derive(Clone, Debug)]
pub enum RelationSpec {
    /// A Σ symbol, the target, or `=`.
    Named(String),
    /// A formula over `x0..xr-1`, where `r` is one more than its largest free variable.
    Formula(Formula),
    Table {
        label: String,
        table: Table,
    },
}

impl RelationSpec {
    pub fn resolve(&self, s: &Structure) -> Result<(String, Table)> {
        match self {
            RelationSpec::Named(name) if name == EQUALITY => {
                let n = s.size();
                let table = Table::from_tuples(n, 2, (0..n).map(|x| [x, x]))?;
                Ok((name.clone(), table))
            }
            RelationSpec::Named(name) => s
                .lookup(name)
                .map(|t| (name.clone(), t.clone()))
                .ok_or_else(|| Error::UnknownRelation(name.clone())),
            RelationSpec::Formula(f) => {
                let arity = f.free_vars().iter().next_back().map_or(0, |v| v + 1);
                let vars: Vec<_> = (0..arity).collect();
                Ok((f.to_string(), relation_table(s, f, &vars)?))
            }
            RelationSpec::Table { label, table } => {
                if table.universe() != s.size() {
                    return Err(Error::Invalid(format!(
                        "table `{label}` has the wrong universe"
                    )));
                }
                Ok((label.clone(), table.clone()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionReport {
    /// Positions in the map's entry list.
    pub selection: Vec<usize>,
    pub exceptions: IndexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionReport {
    pub relation: String,
    pub arity: usize,
    pub union: IndexSet,
    pub max: usize,
    /// Selections with a nonempty exception set, in lexicographic order.
    pub selections: Vec<SelectionReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostPreservation {
    pub holds: bool,
    pub budget: usize,
    pub report: ExceptionReport,
}

/// `{ i : R(f_1(i), ..., f_r(i)) ≢ R(g_1(i), ..., g_r(i)) }`.
pub fn transfer_exceptions(table: &Table, fs: &[&Sequence], gs: &[&Sequence]) -> IndexSet {
    let k = fs.first().map_or(0, |f| f.len());
    let column =
        |seqs: &[&Sequence], i: usize| -> Vec<Elem> { seqs.iter().map(|s| s.at(i)).collect() };
    IndexSet::from_fn(k, |i| {
        table.contains(&column(fs, i)) != table.contains(&column(gs, i))
    })
}

/// Checks every ordered selection (with repetition) of domain points against
/// the relation; holds when no selection has more than `budget` exceptions.
pub fn check_almost_preserves(
    s: &Structure,
    map: &SequenceMap,
    rel: &RelationSpec,
    budget: usize,
) -> Result<AlmostPreservation> {
    map.check_universe(s.size())?;
    let (relation, table) = rel.resolve(s)?;
    let arity = table.arity();
    let d = map.len();
    let k = map.length();
    let total = tuple_count(d, arity)
        .filter(|&c| c <= MAX_SELECTIONS)
        .ok_or_else(|| Error::LimitExceeded(format!("{d}^{arity} selections")))?;
    let mut union = IndexSet::empty(k);
    let mut max = 0;
    let mut selections = Vec::new();
    if total > 0 && d > 0 {
        for selection in all_tuples(d, arity) {
            let fs: Vec<&Sequence> = selection.iter().map(|&j| &map.entries()[j].0).collect();
            let gs: Vec<&Sequence> = selection.iter().map(|&j| &map.entries()[j].1).collect();
            let exceptions = transfer_exceptions(&table, &fs, &gs);
            if exceptions.is_empty() {
                continue;
            }
            union = union.union(&exceptions);
            max = max.max(exceptions.count());
            selections.push(SelectionReport {
                selection,
                exceptions,
            });
        }
    }
    Ok(AlmostPreservation {
        holds: max <= budget,
        budget,
        report: ExceptionReport {
            relation,
            arity,
            union,
            max,
            selections,
        },
    })
}
