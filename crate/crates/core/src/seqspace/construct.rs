use serde::Serialize;

use crate::definability::{is_definable, witness_pair, Certificate, DefinableEnumeration};
use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::tuples::{Table, Tuple};

use super::{IndexSet, Sequence, SequenceMap};

/// The map `a_j ↦ b_j` assembled from one witness pair per index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleMap {
    pub map: SequenceMap,
    /// Witness pair `(ā(i), b̄(i))` for each index `i`.
    pub witnesses: Vec<(Tuple, Tuple)>,
    /// Number of enumeration items the pair at index `i` agrees on.
    pub levels: Vec<usize>,
    /// Map entry holding coordinate `j`, or `None` when `a_j` coincides with
    /// an earlier coordinate whose image differs.
    pub coordinates: Vec<Option<usize>>,
}

impl CounterexampleMap {
    /// Entry indices of `(a_1, ..., a_r)` when every coordinate made it into the map.
    pub fn selection(&self) -> Option<Vec<usize>> {
        self.coordinates.iter().copied().collect()
    }

    /// `{ i : T(ā(i)) ≢ T(b̄(i)) }`.
    pub fn witness_exceptions(&self, table: &Table) -> IndexSet {
        IndexSet::from_fn(self.witnesses.len(), |i| {
            let (a, b) = &self.witnesses[i];
            table.contains(a) != table.contains(b)
        })
    }
}

pub fn build_counterexample_map(
    s: &Structure,
    e: &DefinableEnumeration,
    k: usize,
) -> Result<CounterexampleMap> {
    if k == 0 {
        return Err(Error::Invalid("sequence length must be positive".into()));
    }
    if let (true, Certificate::DefiningFormula { formula }) = is_definable(s)? {
        return Err(Error::Definable(Box::new(formula)));
    }
    let r = s.target_arity();
    let mut witnesses = Vec::with_capacity(k);
    let mut levels = Vec::with_capacity(k);
    for i in 0..k {
        let level = e.level_at(i);
        let pair = witness_pair(s, level, e)?.ok_or_else(|| {
            Error::Internal(format!(
                "no witness pair at level {level} for a non-definable target"
            ))
        })?;
        witnesses.push(pair);
        levels.push(level);
    }
    let column = |pick: fn(&(Tuple, Tuple)) -> &Tuple, j: usize| {
        Sequence::new(witnesses.iter().map(|w| pick(w)[j]).collect())
    };
    let mut map = SequenceMap::new(k);
    let mut coordinates = Vec::with_capacity(r);
    for j in 0..r {
        let a = column(|w| &w.0, j);
        let b = column(|w| &w.1, j);
        let slot = match (map.image(&a), map.preimage(&b)) {
            (Some(img), _) if *img == b => map.domain().position(|f| *f == a),
            (None, None) => {
                map.insert(a, b)?;
                Some(map.len() - 1)
            }
            _ => None,
        };
        coordinates.push(slot);
    }
    Ok(CounterexampleMap {
        map,
        witnesses,
        levels,
        coordinates,
    })
}
