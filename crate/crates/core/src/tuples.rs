//! Tuples over `{0..n-1}` and dense tuple tables.
//!
//! A tuple of arity `k` is identified with its base-`n` index, so that index
//! order coincides with lexicographic order.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Elem = usize;
pub type Tuple = Vec<Elem>;

/// Largest number of tuples a dense table may hold.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

pub fn tuple_count(n: usize, arity: usize) -> Option<usize> {
    let mut total: usize = 1;
    for _ in 0..arity {
        total = total.checked_mul(n)?;
    }
    Some(total)
}

pub fn index_of(n: usize, t: &[Elem]) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

pub fn tuple_at(n: usize, arity: usize, mut idx: usize) -> Tuple {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

/// All tuples of the given arity in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Tuple> {
    let count = tuple_count(n, arity).unwrap_or(0);
    (0..count).map(move |i| tuple_at(n, arity, i))
}

pub fn format_tuple(t: &[Elem]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// A set of `arity`-tuples over a universe of size `n`, stored as a bitmap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Table {
    n: usize,
    arity: usize,
    bits: Vec<bool>,
}

impl Table {
    pub fn empty(n: usize, arity: usize) -> Result<Self> {
        let cells = tuple_count(n, arity)
            .filter(|&c| c <= MAX_TABLE_CELLS)
            .ok_or_else(|| {
                Error::LimitExceeded(format!("table of arity {arity} over {n} elements"))
            })?;
        Ok(Table {
            n,
            arity,
            bits: vec![false; cells],
        })
    }

    pub fn full(n: usize, arity: usize) -> Result<Self> {
        let mut t = Self::empty(n, arity)?;
        t.bits.iter_mut().for_each(|b| *b = true);
        Ok(t)
    }

    pub fn from_tuples<I, T>(n: usize, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Elem]>,
    {
        let mut table = Self::empty(n, arity)?;
        for t in tuples {
            table.insert(t.as_ref())?;
        }
        Ok(table)
    }

    pub(crate) fn from_bits(n: usize, arity: usize, bits: Vec<bool>) -> Self {
        debug_assert_eq!(Some(bits.len()), tuple_count(n, arity));
        Table { n, arity, bits }
    }

    pub fn insert(&mut self, t: &[Elem]) -> Result<()> {
        self.check(t)?;
        let idx = index_of(self.n, t);
        self.bits[idx] = true;
        Ok(())
    }

    fn check(&self, t: &[Elem]) -> Result<()> {
        if t.len() != self.arity {
            return Err(Error::ArityMismatch {
                name: format_tuple(t),
                expected: self.arity,
                found: t.len(),
            });
        }
        if let Some(&bad) = t.iter().find(|&&x| x >= self.n) {
            return Err(Error::OutOfRange {
                elem: bad,
                size: self.n,
            });
        }
        Ok(())
    }

    /// Membership test. The tuple must have the table's arity and lie in the universe.
    pub fn contains(&self, t: &[Elem]) -> bool {
        debug_assert!(self.check(t).is_ok());
        self.bits[index_of(self.n, t)]
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits[idx]
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn cells(&self) -> usize {
        self.bits.len()
    }

    /// Member tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Tuple> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| tuple_at(self.n, self.arity, i))
    }

    pub fn to_vec(&self) -> Vec<Tuple> {
        self.iter().collect()
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
