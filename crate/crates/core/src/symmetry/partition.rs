use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::error::Result;
use crate::tuples::{index_of, tuple_at, Elem, Table, Tuple};

/// A partition of `A^arity` into nonempty classes.
///
/// Classes are numbered by their lexicographically least member, so two
/// partitions are equal exactly when they have the same classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    #[serde(skip)]
    n: usize,
    arity: usize,
    #[serde(skip)]
    class_of: Vec<usize>,
    classes: Vec<Vec<Tuple>>,
}

impl Partition {
    /// Groups tuples (in lexicographic order) by key.
    pub(crate) fn from_keys<K, I>(n: usize, arity: usize, keys: I) -> Self
    where
        K: Hash + Eq,
        I: IntoIterator<Item = K>,
    {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut class_of = Vec::new();
        let mut classes: Vec<Vec<Tuple>> = Vec::new();
        for (idx, key) in keys.into_iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == classes.len() {
                classes.push(Vec::new());
            }
            classes[id].push(tuple_at(n, arity, idx));
            class_of.push(id);
        }
        Partition {
            n,
            arity,
            class_of,
            classes,
        }
    }

    pub(crate) fn from_class_ids(n: usize, arity: usize, raw: &[usize]) -> Self {
        Self::from_keys(n, arity, raw.iter().copied())
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<Tuple>] {
        &self.classes
    }

    pub fn class_of(&self, t: &[Elem]) -> usize {
        self.class_of[index_of(self.n, t)]
    }

    pub fn class_of_index(&self, idx: usize) -> usize {
        self.class_of[idx]
    }

    pub fn class_table(&self, class: usize) -> Result<Table> {
        Table::from_tuples(self.n, self.arity, &self.classes[class])
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.arity == other.arity
            && self.n == other.n
            && self
                .classes
                .iter()
                .all(|c| c.iter().all(|t| other.class_of(t) == other.class_of(&c[0])))
    }

    /// True when the table is a union of classes.
    pub fn saturates(&self, table: &Table) -> bool {
        self.classes
            .iter()
            .all(|c| c.iter().all(|t| table.contains(t) == table.contains(&c[0])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_numbering() {
        let p = Partition::from_class_ids(2, 2, &[7, 3, 3, 7]);
        let q = Partition::from_class_ids(2, 2, &[0, 1, 1, 0]);
        assert_eq!(p, q);
        assert_eq!(p.classes()[0], vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(p.class_of(&[1, 0]), 1);
        let finer = Partition::from_class_ids(2, 2, &[0, 1, 2, 0]);
        assert!(finer.refines(&p));
        assert!(!p.refines(&finer));
    }
}
