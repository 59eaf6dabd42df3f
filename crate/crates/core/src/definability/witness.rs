use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::tuples::{tuple_at, tuple_count, Tuple};

use super::DefinableEnumeration;

/// Least pair `(a, b)` in lexicographic order of `a ++ b` with
/// `R(a) ≢ R(b)` and `P_i(a) ≡ P_i(b)` for the first `m` items.
/// `m` is clamped to the enumeration length.
pub fn witness_pair(
    s: &Structure,
    m: usize,
    e: &DefinableEnumeration,
) -> Result<Option<(Tuple, Tuple)>> {
    let r = s.target_arity();
    if e.arity != r {
        return Err(Error::ArityMismatch {
            name: format!("{} enumeration", e.mode),
            expected: r,
            found: e.arity,
        });
    }
    let n = s.size();
    let m = m.min(e.len());
    let total = tuple_count(n, r).unwrap_or(0);
    let profiles: Vec<Vec<bool>> = (0..total)
        .map(|idx| {
            e.items[..m]
                .iter()
                .map(|p| p.table.contains_index(idx))
                .collect()
        })
        .collect();
    let target = s.target();
    for a in 0..total {
        for b in 0..total {
            if target.contains_index(a) != target.contains_index(b) && profiles[a] == profiles[b] {
                return Ok(Some((tuple_at(n, r, a), tuple_at(n, r, b))));
            }
        }
    }
    Ok(None)
}
