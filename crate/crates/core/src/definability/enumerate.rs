use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Sign};
use crate::registry::{Named, Registry};
use crate::structure::Structure;
use crate::symmetry::{orbits, TypeRefinement};
use crate::tuples::{Elem, Table};

/// How many enumeration items are in force at sequence index `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelSchedule {
    /// All items from index 0 on; used by finite complete bases.
    Complete,
    /// `min(i, M)` items at index `i`.
    Gradual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinableRelation {
    pub table: Table,
    pub formula: Formula,
    pub rank: usize,
}

/// An ordered list `P_1, ..., P_M` of pairwise distinct definable relations
/// of one arity, each with a defining formula over `x0..x(arity-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinableEnumeration {
    pub arity: usize,
    pub mode: &'static str,
    pub schedule: LevelSchedule,
    pub items: Vec<DefinableRelation>,
}

impl DefinableEnumeration {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn level_at(&self, index: usize) -> usize {
        match self.schedule {
            LevelSchedule::Complete => self.items.len(),
            LevelSchedule::Gradual => index.min(self.items.len()),
        }
    }

    /// Signs of `P_1(t), ..., P_m(t)`.
    pub fn pattern(&self, t: &[Elem], m: usize) -> Vec<Sign> {
        self.items[..m]
            .iter()
            .map(|item| Sign::of(item.table.contains(t)))
            .collect()
    }

    /// `⋀_{i<m} P_i^{σ_i}` with each `P_i` replaced by its formula.
    pub fn pattern_formula(&self, signs: &[Sign]) -> Formula {
        Formula::conj(signs.iter().zip(&self.items).map(|(&sign, item)| {
            crate::formula::SignedFormula {
                base: item.formula.clone(),
                sign,
            }
            .into_formula()
        }))
    }
}

pub trait EnumerationStrategy: Named + Send + Sync {
    fn enumerate(&self, s: &Structure, arity: usize) -> Result<DefinableEnumeration>;
}

/// Orbits of `Aut(<A, Σ>)` on `A^k`, each defined by its stable-depth type
/// formula. Two tuples agree on every definable `k`-ary relation iff they
/// agree on all of these.
pub struct OrbitAtoms;

impl Named for OrbitAtoms {
    fn name(&self) -> &'static str {
        "orbit-atoms"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["orbit"]
    }

    fn describe(&self) -> &'static str {
        "automorphism orbits in canonical order; complete from the first index"
    }
}

impl EnumerationStrategy for OrbitAtoms {
    fn enumerate(&self, s: &Structure, arity: usize) -> Result<DefinableEnumeration> {
        let partition = orbits(s, arity)?;
        let types = TypeRefinement::compute(s)?;
        let depth = types.stable_depth(arity);
        let items = partition
            .classes()
            .iter()
            .map(|class| {
                Ok(DefinableRelation {
                    table: Table::from_tuples(s.size(), arity, class)?,
                    formula: types.hintikka(s, &class[0], depth),
                    rank: depth,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DefinableEnumeration {
            arity,
            mode: self.name(),
            schedule: LevelSchedule::Complete,
            items,
        })
    }
}

/// Type classes of rank 0, then rank 1, and so on up to the stable depth,
/// skipping tables seen before. After all items of rank `q`, agreement on the
/// prefix is exactly equality of rank-`q` types.
pub struct ByRank;

impl Named for ByRank {
    fn name(&self) -> &'static str {
        "by-rank"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["rank"]
    }

    fn describe(&self) -> &'static str {
        "type classes by increasing quantifier rank; one more item per index"
    }
}

impl EnumerationStrategy for ByRank {
    fn enumerate(&self, s: &Structure, arity: usize) -> Result<DefinableEnumeration> {
        Table::empty(s.size(), arity)?;
        let types = TypeRefinement::compute(s)?;
        let mut items: Vec<DefinableRelation> = Vec::new();
        for q in 0..=types.stable_depth(arity) {
            let partition = types.partition(arity, q);
            for class in partition.classes() {
                let table = Table::from_tuples(s.size(), arity, class)?;
                if items.iter().any(|item| item.table == table) {
                    continue;
                }
                items.push(DefinableRelation {
                    table,
                    formula: types.hintikka(s, &class[0], q),
                    rank: q,
                });
            }
        }
        Ok(DefinableEnumeration {
            arity,
            mode: self.name(),
            schedule: LevelSchedule::Gradual,
            items,
        })
    }
}

pub fn enumerators() -> Registry<dyn EnumerationStrategy> {
    let mut reg: Registry<dyn EnumerationStrategy> = Registry::new();
    reg.register(Box::new(OrbitAtoms));
    reg.register(Box::new(ByRank));
    reg
}

pub fn enumerate_definables(
    s: &Structure,
    arity: usize,
    mode: &str,
) -> Result<DefinableEnumeration> {
    let reg = enumerators();
    let strategy = reg.get(mode).ok_or_else(|| {
        Error::Invalid(format!(
            "unknown enumeration mode `{mode}` (available: {})",
            reg.names().join(", ")
        ))
    })?;
    strategy.enumerate(s, arity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::relation_table;
    use crate::structure::parse_structure;

    fn two_k2() -> Structure {
        parse_structure(
            "universe 4\nrel E arity 2\n0 1\n1 0\n2 3\n3 2\nend\ntarget R arity 1\n0\n1\nend",
        )
        .unwrap()
    }

    fn l3() -> Structure {
        parse_structure("universe 3\nrel < arity 2\n0 1\n0 2\n1 2\nend\ntarget Mid arity 1\n1\nend")
            .unwrap()
    }

    fn assert_sound(s: &Structure, e: &DefinableEnumeration) {
        let vars: Vec<usize> = (0..e.arity).collect();
        for (i, item) in e.items.iter().enumerate() {
            assert_eq!(relation_table(s, &item.formula, &vars).unwrap(), item.table);
            assert!(!e.items[..i].iter().any(|o| o.table == item.table));
        }
    }

    #[test]
    fn orbit_atoms_examples() {
        let g = two_k2();
        let one = enumerate_definables(&g, 1, "orbit-atoms").unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.items[0].table.is_full());
        let two = enumerate_definables(&g, 2, "orbit").unwrap();
        assert_eq!(two.len(), 3);
        assert_sound(&g, &two);

        let l = enumerate_definables(&l3(), 1, "orbit-atoms").unwrap();
        let tables: Vec<_> = l.items.iter().map(|i| i.table.to_vec()).collect();
        assert_eq!(tables, vec![vec![vec![0]], vec![vec![1]], vec![vec![2]]]);
        assert_sound(&l3(), &l);
    }

    #[test]
    fn by_rank_is_prefix_compatible() {
        let l = enumerate_definables(&l3(), 1, "by-rank").unwrap();
        // rank 0: everything; rank 1: the three singletons
        assert_eq!(l.len(), 4);
        assert!(l.items[0].table.is_full());
        assert_eq!(l.items[0].rank, 0);
        assert_eq!(l.items[3].rank, 1);
        assert_sound(&l3(), &l);
        assert_sound(
            &two_k2(),
            &enumerate_definables(&two_k2(), 2, "rank").unwrap(),
        );
    }

    #[test]
    fn schedules() {
        let l = enumerate_definables(&l3(), 1, "by-rank").unwrap();
        assert_eq!(l.level_at(0), 0);
        assert_eq!(l.level_at(2), 2);
        assert_eq!(l.level_at(10), 4);
        let o = enumerate_definables(&l3(), 1, "orbit").unwrap();
        assert_eq!(o.level_at(0), 3);
    }

    #[test]
    fn unknown_mode() {
        assert!(matches!(
            enumerate_definables(&l3(), 1, "bogus"),
            Err(Error::Invalid(_))
        ));
    }
}
