use crate::error::Result;
use crate::structure::Structure;
use crate::tuples::{all_tuples, Elem, Tuple};

use super::{Partition, Permutation};

/// Atomic type of the 1-tuple `(x)`: which symbols hold on `(x, x, ..., x)`.
fn element_colours(s: &Structure) -> Vec<Vec<bool>> {
    (0..s.size())
        .map(|x| {
            s.tables()
                .iter()
                .map(|t| t.contains(&vec![x; t.arity()]))
                .collect()
        })
        .collect()
}

pub fn is_automorphism(s: &Structure, p: &Permutation) -> bool {
    p.len() == s.size()
        && s.tables().iter().all(|table| {
            all_tuples(s.size(), table.arity())
                .all(|t| table.contains(&t) == table.contains(&p.apply_tuple(&t)))
        })
}

struct Search<'a> {
    s: &'a Structure,
    colours: Vec<Vec<bool>>,
    image: Vec<Elem>,
    used: Vec<bool>,
    found: Vec<Permutation>,
}

impl Search<'_> {
    /// Checks every Σ tuple over `{0..=pos}` that mentions `pos`.
    fn consistent(&self, pos: usize) -> bool {
        for table in self.s.tables() {
            let r = table.arity();
            for t in all_tuples(pos + 1, r) {
                if !t.contains(&pos) {
                    continue;
                }
                let mapped: Tuple = t.iter().map(|&x| self.image[x]).collect();
                if table.contains(&t) != table.contains(&mapped) {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self, pos: usize) {
        let n = self.s.size();
        if pos == n {
            self.found
                .push(Permutation::new(self.image.clone()).expect("bijection"));
            return;
        }
        for y in 0..n {
            if self.used[y] || self.colours[y] != self.colours[pos] {
                continue;
            }
            self.image[pos] = y;
            if self.consistent(pos) {
                self.used[y] = true;
                self.extend(pos + 1);
                self.used[y] = false;
            }
        }
    }
}

/// The full automorphism group of `<A, Σ>` in lexicographic order of image
/// vectors. The target relation plays no part.
pub fn automorphisms(s: &Structure) -> Vec<Permutation> {
    let n = s.size();
    let mut search = Search {
        s,
        colours: element_colours(s),
        image: vec![0; n],
        used: vec![false; n],
        found: Vec::new(),
    };
    search.extend(0);
    search.found
}

pub fn orbits_under(group: &[Permutation], n: usize, arity: usize) -> Partition {
    let total = crate::tuples::tuple_count(n, arity).unwrap_or(0);
    let mut class = vec![usize::MAX; total];
    let mut next = 0;
    for t in all_tuples(n, arity) {
        let idx = crate::tuples::index_of(n, &t);
        if class[idx] != usize::MAX {
            continue;
        }
        for p in group {
            class[crate::tuples::index_of(n, &p.apply_tuple(&t))] = next;
        }
        class[idx] = next;
        next += 1;
    }
    Partition::from_class_ids(n, arity, &class)
}

/// Orbits of `Aut(<A, Σ>)` acting componentwise on `A^arity`.
pub fn orbits(s: &Structure, arity: usize) -> Result<Partition> {
    crate::tuples::Table::empty(s.size(), arity)?;
    Ok(orbits_under(&automorphisms(s), s.size(), arity))
}
