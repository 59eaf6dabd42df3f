use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::Permutation;

use super::Sequence;

/// A finite injective partial map on `A^[0,K)`, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SequenceMap {
    length: usize,
    entries: Vec<(Sequence, Sequence)>,
    #[serde(skip)]
    index: BTreeMap<Sequence, usize>,
    #[serde(skip)]
    images: BTreeMap<Sequence, usize>,
}

impl SequenceMap {
    pub fn new(length: usize) -> Self {
        SequenceMap {
            length,
            ..Default::default()
        }
    }

    /// The truncation `K`.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Sequence, Sequence)] {
        &self.entries
    }

    pub fn image(&self, f: &Sequence) -> Option<&Sequence> {
        self.index.get(f).map(|&i| &self.entries[i].1)
    }

    pub fn preimage(&self, g: &Sequence) -> Option<&Sequence> {
        self.images.get(g).map(|&i| &self.entries[i].0)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Sequence> {
        self.entries.iter().map(|(f, _)| f)
    }

    /// Adds `f ↦ g`. Re-adding an existing pair is a no-op.
    pub fn insert(&mut self, f: Sequence, g: Sequence) -> Result<()> {
        if self.entries.is_empty() && self.length == 0 {
            self.length = f.len();
        }
        f.check_len(self.length)?;
        g.check_len(self.length)?;
        match (self.index.get(&f), self.images.get(&g)) {
            (Some(&i), Some(&j)) if i == j => return Ok(()),
            (Some(_), _) => return Err(Error::Invalid(format!("{f} already has an image"))),
            (_, Some(_)) => return Err(Error::Invalid(format!("{g} is already an image"))),
            _ => {}
        }
        let at = self.entries.len();
        self.index.insert(f.clone(), at);
        self.images.insert(g.clone(), at);
        self.entries.push((f, g));
        Ok(())
    }

    pub fn check_universe(&self, n: usize) -> Result<()> {
        for (f, g) in &self.entries {
            f.check_universe(n)?;
            g.check_universe(n)?;
        }
        Ok(())
    }

    /// Applies the map coordinatewise to a selection of domain points.
    pub fn apply_all(&self, fs: &[&Sequence]) -> Option<Vec<Sequence>> {
        fs.iter().map(|f| self.image(f).cloned()).collect()
    }
}

impl fmt::Display for SequenceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.entries {
            writeln!(f, "{a} -> {b}")?;
        }
        Ok(())
    }
}

impl FromStr for SequenceMap {
    type Err = Error;

    /// One `v0,...,vK-1 -> w0,...,wK-1` pair per line; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut map = SequenceMap::new(0);
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::Syntax {
                line: no + 1,
                msg: e.to_string(),
            };
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Syntax {
                line: no + 1,
                msg: "expected `f -> g`".into(),
            })?;
            let f: Sequence = lhs.parse().map_err(at)?;
            let g: Sequence = rhs.parse().map_err(at)?;
            map.insert(f, g).map_err(at)?;
        }
        Ok(map)
    }
}

/// `{ f ↦ p∘f : f ∈ fs }` for a permutation `p` of the universe.
pub fn lift(p: &Permutation, fs: &[Sequence]) -> Result<SequenceMap> {
    let mut map = SequenceMap::new(fs.first().map_or(0, Sequence::len));
    for f in fs {
        f.check_universe(p.len())?;
        let g = Sequence::new(p.apply_tuple(f.values()));
        map.insert(f.clone(), g)?;
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    #[test]
    fn lift_example() {
        let p = Permutation::from_swaps(4, &[(0, 2), (1, 3)]).unwrap();
        let map = lift(&p, &[seq("0,1,0,1")]).unwrap();
        assert_eq!(map.image(&seq("0,1,0,1")), Some(&seq("2,3,2,3")));
        assert_eq!(map.length(), 4);
    }

    #[test]
    fn insert_checks() {
        let mut m = SequenceMap::new(2);
        m.insert(seq("0,0"), seq("1,1")).unwrap();
        m.insert(seq("0,0"), seq("1,1")).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.insert(seq("0,0"), seq("2,2")).is_err());
        assert!(m.insert(seq("3,3"), seq("1,1")).is_err());
        assert_eq!(
            m.insert(seq("0"), seq("1")).unwrap_err(),
            Error::LengthMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn file_round_trip() {
        let text = "# comment\n0,0,0 -> 2,2,2\n\n1,1,1 -> 3,3,3  # trailing\n";
        let m: SequenceMap = text.parse().unwrap();
        assert_eq!(m.length(), 3);
        assert_eq!(m.to_string(), "0,0,0 -> 2,2,2\n1,1,1 -> 3,3,3\n");
        assert_eq!(m.to_string().parse::<SequenceMap>().unwrap(), m);
        assert!(matches!(
            "0,0 -> 1,1\n0 -> 1".parse::<SequenceMap>(),
            Err(Error::Syntax { line: 2, .. })
        ));
    }
}
