use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tuples::{Elem, Table, Tuple};

/// A bijection on `{0..n-1}`, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<Elem>);

impl Permutation {
    pub fn new(image: Vec<Elem>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n {
                return Err(Error::OutOfRange { elem: x, size: n });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Invalid(format!("{image:?} is not a bijection")));
            }
        }
        Ok(Permutation(image))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Product of disjoint transpositions, e.g. `[(0, 2), (1, 3)]`.
    pub fn from_swaps(n: usize, swaps: &[(Elem, Elem)]) -> Result<Self> {
        let mut image: Vec<Elem> = (0..n).collect();
        for &(a, b) in swaps {
            if a >= n || b >= n {
                return Err(Error::OutOfRange {
                    elem: a.max(b),
                    size: n,
                });
            }
            image.swap(a, b);
        }
        Self::new(image)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> &[Elem] {
        &self.0
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.0[x]
    }

    pub fn apply_tuple(&self, t: &[Elem]) -> Tuple {
        t.iter().map(|&x| self.0[x]).collect()
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn cycles(&self) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preservation {
    pub preserved: bool,
    /// Every tuple `t` with `t ∈ P` differing from `p(t) ∈ P`.
    pub violations: Vec<Tuple>,
}

/// Checks `P(t) ≡ P(p(t))` for all tuples `t` of the table's arity.
pub fn preserves_check(p: &Permutation, table: &Table) -> Preservation {
    let n = table.universe();
    let violations: Vec<Tuple> = crate::tuples::all_tuples(n, table.arity())
        .filter(|t| table.contains(t) != table.contains(&p.apply_tuple(t)))
        .collect();
    Preservation {
        preserved: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges() -> Table {
        Table::from_tuples(4, 2, [[0, 1], [1, 0], [2, 3], [3, 2]]).unwrap()
    }

    #[test]
    fn group_operations() {
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(3));
        assert_eq!(p.compose(&p).image(), &[2, 0, 1]);
        assert_eq!(p.to_string(), "(0 1 2)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn preserve_examples() {
        let id = Permutation::identity(4);
        assert!(preserves_check(&id, &edges()).preserved);

        let swap = Permutation::from_swaps(4, &[(0, 2), (1, 3)]).unwrap();
        let r = Table::from_tuples(4, 1, [[0], [1]]).unwrap();
        let check = preserves_check(&swap, &r);
        assert!(!check.preserved);
        assert!(check.violations.contains(&vec![0]));

        let flip = Permutation::from_swaps(4, &[(0, 1)]).unwrap();
        assert!(preserves_check(&flip, &edges()).preserved);
    }
}
