use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tuples::Elem;

/// A function `[0, K) → A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<Elem>);

impl Sequence {
    pub fn new(values: Vec<Elem>) -> Self {
        Sequence(values)
    }

    pub fn constant(len: usize, value: Elem) -> Self {
        Sequence(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Elem] {
        &self.0
    }

    pub fn at(&self, i: usize) -> Elem {
        self.0[i]
    }

    pub fn check_universe(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&x| x >= n) {
            Some(&elem) => Err(Error::OutOfRange { elem, size: n }),
            None => Ok(()),
        }
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Sequence {
    type Err = Error;

    /// Comma-separated elements, e.g. `0,1,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<Elem>()
                    .map_err(|_| Error::Invalid(format!("bad sequence element `{}`", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence(values))
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A subset of `[0, K)`: an element of the truncated algebra `2^[0,K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    len: usize,
    members: BTreeSet<usize>,
}

impl IndexSet {
    pub fn empty(len: usize) -> Self {
        IndexSet {
            len,
            members: BTreeSet::new(),
        }
    }

    pub fn full(len: usize) -> Self {
        IndexSet {
            len,
            members: (0..len).collect(),
        }
    }

    pub fn from_fn(len: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        IndexSet {
            len,
            members: (0..len).filter(|&i| pred(i)).collect(),
        }
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside [0, {})", self.len);
        self.members.insert(i);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    /// Size of `[0, K)`.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.len
    }

    pub fn max(&self) -> Option<usize> {
        self.members.iter().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self) -> Self {
        IndexSet::from_fn(self.len, |i| !self.contains(i))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        IndexSet {
            len: self.len,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        IndexSet {
            len: self.len,
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        IndexSet {
            len: self.len,
            members: self
                .members
                .symmetric_difference(&other.members)
                .copied()
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Equal in the quotient "differs on at most `budget` indices".
    pub fn approx_eq(&self, other: &Self, budget: usize) -> bool {
        self.symmetric_difference(other).count() <= budget
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members.iter())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `|{i : f(i) ≠ g(i)}| ≤ budget`, together with the difference set.
pub fn almost_equal(f: &Sequence, g: &Sequence, budget: usize) -> Result<(bool, IndexSet)> {
    g.check_len(f.len())?;
    let diff = IndexSet::from_fn(f.len(), |i| f.at(i) != g.at(i));
    Ok((diff.count() <= budget, diff))
}
