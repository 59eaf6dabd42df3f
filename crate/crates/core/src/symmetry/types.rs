//! Rank-bounded type partitions by back-and-forth refinement.
//!
//! Two tuples have the same rank-`q+1` type iff they have the same rank-`q`
//! type and every one-element extension of either can be matched by an
//! extension of the other with the same rank-`q` type. Extensions by an
//! element already in the tuple are decided by the rank-`q` type itself, so the
//! refinement runs on injective tuples only; a general tuple is classified by
//! its equality pattern plus the class of its distinct elements.
//!
//! Injective `a`-tuples are indexed by their rank in lexicographic order, which
//! for a mixed radix `n, n-1, ..., n-a+1` makes the extensions of `t` the
//! contiguous block `rank(t) * (n - a) ..`.
//!
//! Refinement is run on all arities `0..=n` together and stops at the first
//! level where no arity refines further. Checking a single arity for
//! stability is not enough: rank 0 and rank 1 can agree on 1-tuples while
//! rank 2 separates them.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::structure::Structure;
use crate::tuples::{all_tuples, Elem, Tuple};

use super::Partition;

/// Cap on the number of injective tuples of a single arity.
const MAX_INJECTIVE: usize = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Fixed(usize),
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypePartition {
    pub partition: Partition,
    /// Rank at which `partition` was taken.
    pub depth: usize,
    /// Least rank from which the partition of this arity no longer changes.
    pub stable_depth: usize,
}

fn injective_count(n: usize, a: usize) -> Option<usize> {
    (0..a).try_fold(1usize, |acc, i| acc.checked_mul(n - i))
}

fn rank_injective(n: usize, t: &[Elem]) -> usize {
    t.iter().enumerate().fold(0, |acc, (i, &x)| {
        let below = t[..i].iter().filter(|&&u| u < x).count();
        acc * (n - i) + (x - below)
    })
}

/// `c`-th element (ascending) not in `t`.
fn nth_unused(n: usize, t: &[Elem], c: usize) -> Elem {
    (0..n)
        .filter(|x| !t.contains(x))
        .nth(c)
        .expect("extension index in range")
}

/// Positions `p ∈ [0, m)^r` with at least one coordinate equal to `m - 1`.
fn positions_touching_last(m: usize, r: usize) -> Vec<Vec<usize>> {
    all_tuples(m, r).filter(|p| p.contains(&(m - 1))).collect()
}

/// Equality pattern and distinct elements in order of first occurrence.
fn split_tuple(t: &[Elem]) -> (Vec<usize>, Tuple) {
    let mut distinct: Tuple = Vec::new();
    let pattern = t
        .iter()
        .map(|x| match distinct.iter().position(|d| d == x) {
            Some(j) => j,
            None => {
                distinct.push(*x);
                distinct.len() - 1
            }
        })
        .collect();
    (pattern, distinct)
}

/// Type classes of injective tuples of every arity at every rank up to the
/// global fixpoint.
pub struct TypeRefinement {
    n: usize,
    /// `levels[q][a][rank]`
    levels: Vec<Vec<Vec<u32>>>,
    fixpoint: usize,
}

impl TypeRefinement {
    pub fn compute(s: &Structure) -> Result<Self> {
        let n = s.size();
        for a in 0..=n {
            injective_count(n, a)
                .filter(|&c| c <= MAX_INJECTIVE)
                .ok_or_else(|| {
                    Error::LimitExceeded(format!("type refinement over {n} elements"))
                })?;
        }
        let mut levels = vec![atomic_level(s)];
        loop {
            let q = levels.len() - 1;
            if q > n + 1 {
                return Err(Error::Internal(format!(
                    "type refinement did not stabilize by depth {n}"
                )));
            }
            let next = refine(n, &levels[q]);
            let same = next
                .iter()
                .zip(&levels[q])
                .all(|(a, b)| class_count(a) == class_count(b));
            if same {
                return Ok(TypeRefinement {
                    n,
                    levels,
                    fixpoint: q,
                });
            }
            levels.push(next);
        }
    }

    /// Least rank at which refinement stops for all arities at once.
    pub fn fixpoint(&self) -> usize {
        self.fixpoint
    }

    fn class(&self, q: usize, rank_tuple: &[Elem]) -> u32 {
        let q = q.min(self.fixpoint);
        self.levels[q][rank_tuple.len()][rank_injective(self.n, rank_tuple)]
    }

    /// Rank-`q` type partition of `A^arity`.
    pub fn partition(&self, arity: usize, q: usize) -> Partition {
        let keys = all_tuples(self.n, arity).map(|t| {
            let (pattern, distinct) = split_tuple(&t);
            let class = self.class(q, &distinct);
            (pattern, class)
        });
        Partition::from_keys(self.n, arity, keys)
    }

    pub fn stable_depth(&self, arity: usize) -> usize {
        let last = self.partition(arity, self.fixpoint).len();
        (0..=self.fixpoint)
            .find(|&q| self.partition(arity, q).len() == last)
            .unwrap_or(self.fixpoint)
    }

    /// Formula with free variables `x0..x(k-1)` and quantifier rank at most
    /// `q` whose table is the rank-`q` class of `t`.
    pub fn hintikka(&self, s: &Structure, t: &[Elem], q: usize) -> Formula {
        let q = q.min(self.fixpoint);
        let (pattern, distinct) = split_tuple(t);
        let mut first_pos: Vec<Var> = Vec::new();
        let mut parts = Vec::new();
        for (i, &j) in pattern.iter().enumerate() {
            if j == first_pos.len() {
                first_pos.push(i);
            } else {
                parts.push(Formula::Eq(first_pos[j], i));
            }
        }
        for m in 1..=distinct.len() {
            parts.extend(new_literals(s, &distinct[..m], &first_pos[..m]));
        }
        if q > 0 {
            parts.push(self.extension_clause(s, &distinct, q, &first_pos, t.len()));
        }
        Formula::conj(parts).simplify()
    }

    fn extension_clause(
        &self,
        s: &Structure,
        u: &[Elem],
        q: usize,
        vars: &[Var],
        fresh: Var,
    ) -> Formula {
        let n = self.n;
        let a = u.len();
        let mut bodies = Vec::new();
        if a < n {
            let width = n - a;
            let base = rank_injective(n, u) * width;
            let level = &self.levels[q - 1][a + 1];
            let mut seen = Vec::new();
            for c in 0..width {
                let class = level[base + c];
                if seen.contains(&class) {
                    continue;
                }
                seen.push(class);
                let mut child = u.to_vec();
                child.push(nth_unused(n, u, c));
                let mut child_vars = vars.to_vec();
                child_vars.push(fresh);
                let mut body = new_literals(s, &child, &child_vars);
                if q > 1 {
                    body.push(self.extension_clause(s, &child, q - 1, &child_vars, fresh + 1));
                }
                bodies.push(Formula::conj(body));
            }
        }
        let mut parts: Vec<Formula> = bodies
            .iter()
            .map(|b| Formula::exists(fresh, b.clone()))
            .collect();
        let cover = vars.iter().map(|&v| Formula::Eq(fresh, v)).chain(bodies);
        parts.push(Formula::forall(fresh, Formula::disj(cover)));
        Formula::conj(parts)
    }
}

/// Literals of the atomic type of `u` that mention its last element:
/// inequalities to the earlier elements, then every Σ atom touching it.
fn new_literals(s: &Structure, u: &[Elem], vars: &[Var]) -> Vec<Formula> {
    let m = u.len();
    let last = vars[m - 1];
    let mut out: Vec<Formula> = vars[..m - 1]
        .iter()
        .map(|&v| Formula::not(Formula::Eq(v, last)))
        .collect();
    for (sym, table) in s.signature().symbols().iter().zip(s.tables()) {
        for p in positions_touching_last(m, sym.arity) {
            let args: Tuple = p.iter().map(|&i| u[i]).collect();
            let atom = Formula::Atom(sym.name.clone(), p.iter().map(|&i| vars[i]).collect());
            out.push(if table.contains(&args) {
                atom
            } else {
                Formula::not(atom)
            });
        }
    }
    out
}

fn class_count(ids: &[u32]) -> usize {
    ids.iter().max().map_or(0, |&m| m as usize + 1)
}

/// Rank-0 classes: atomic types of injective tuples, built incrementally
/// from the parent's class and the atoms touching the new element.
fn atomic_level(s: &Structure) -> Vec<Vec<u32>> {
    let n = s.size();
    let arities: Vec<usize> = s.tables().iter().map(|t| t.arity()).collect();
    let touching: Vec<Vec<Vec<Vec<usize>>>> = (0..=n)
        .map(|m| {
            arities
                .iter()
                .map(|&r| {
                    if m == 0 {
                        Vec::new()
                    } else {
                        positions_touching_last(m, r)
                    }
                })
                .collect()
        })
        .collect();
    let mut level: Vec<Vec<u32>> = (0..=n)
        .map(|a| vec![0; injective_count(n, a).unwrap()])
        .collect();
    let mut interners: Vec<HashMap<(u32, Vec<bool>), u32>> = vec![HashMap::new(); n + 1];

    // depth-first in lexicographic order, so ids are assigned by first appearance
    fn visit(
        s: &Structure,
        touching: &[Vec<Vec<Vec<usize>>>],
        t: &mut Tuple,
        rank: usize,
        level: &mut [Vec<u32>],
        interners: &mut [HashMap<(u32, Vec<bool>), u32>],
    ) {
        let n = s.size();
        let a = t.len();
        if a == n {
            return;
        }
        let parent = level[a][rank];
        let mut c = 0;
        for y in 0..n {
            if t.contains(&y) {
                continue;
            }
            t.push(y);
            let bits: Vec<bool> = s
                .tables()
                .iter()
                .zip(&touching[a + 1])
                .flat_map(|(table, ps)| {
                    ps.iter().map(|p| {
                        let args: Tuple = p.iter().map(|&i| t[i]).collect();
                        table.contains(&args)
                    })
                })
                .collect();
            let map = &mut interners[a + 1];
            let next = map.len() as u32;
            let id = *map.entry((parent, bits)).or_insert(next);
            let child = rank * (n - a) + c;
            level[a + 1][child] = id;
            visit(s, touching, t, child, level, interners);
            t.pop();
            c += 1;
        }
    }

    visit(s, &touching, &mut Vec::new(), 0, &mut level, &mut interners);
    level
}

fn refine(n: usize, cur: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut next = Vec::with_capacity(n + 1);
    for a in 0..n {
        let width = n - a;
        let mut ids: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
        let row = cur[a]
            .iter()
            .enumerate()
            .map(|(rank, &own)| {
                let mut ext = cur[a + 1][rank * width..(rank + 1) * width].to_vec();
                ext.sort_unstable();
                ext.dedup();
                let fresh = ids.len() as u32;
                *ids.entry((own, ext)).or_insert(fresh)
            })
            .collect();
        next.push(row);
    }
    next.push(cur[n].clone());
    next
}

pub fn type_partition(s: &Structure, arity: usize, depth: Depth) -> Result<TypePartition> {
    crate::tuples::Table::empty(s.size(), arity)?;
    let refinement = TypeRefinement::compute(s)?;
    let stable_depth = refinement.stable_depth(arity);
    let depth = match depth {
        Depth::Fixed(q) => q,
        Depth::Stable => stable_depth,
    };
    Ok(TypePartition {
        partition: refinement.partition(arity, depth),
        depth,
        stable_depth,
    })
}

pub fn hintikka_formula(s: &Structure, t: &[Elem], q: usize) -> Result<Formula> {
    if let Some(&bad) = t.iter().find(|&&x| x >= s.size()) {
        return Err(Error::OutOfRange {
            elem: bad,
            size: s.size(),
        });
    }
    Ok(TypeRefinement::compute(s)?.hintikka(s, t, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::relation_table;
    use crate::structure::parse_structure;
    use crate::symmetry::orbits;

    fn l3() -> Structure {
        parse_structure("universe 3\nrel < arity 2\n0 1\n0 2\n1 2\nend\ntarget Mid arity 1\n1\nend")
            .unwrap()
    }

    fn two_k2() -> Structure {
        parse_structure(
            "universe 4\nrel E arity 2\n0 1\n1 0\n2 3\n3 2\nend\ntarget R arity 1\n0\n1\nend",
        )
        .unwrap()
    }

    /// Triangle plus hexagon: every vertex has degree 2.
    fn triangle_hexagon() -> Structure {
        let mut edges = Vec::new();
        let mut cycle = |vs: &[usize]| {
            for i in 0..vs.len() {
                let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
                edges.push([a, b]);
                edges.push([b, a]);
            }
        };
        cycle(&[0, 1, 2]);
        cycle(&[3, 4, 5, 6, 7, 8]);
        Structure::builder(9)
            .relation("E", 2, edges)
            .target("T", 1, [[0]])
            .build()
            .unwrap()
    }

    #[test]
    fn ranking_is_lexicographic() {
        let n = 4;
        let mut expected = 0;
        for t in all_tuples(n, 3) {
            let (_, d) = split_tuple(&t);
            if d.len() == 3 {
                assert_eq!(rank_injective(n, &t), expected);
                expected += 1;
            }
        }
        assert_eq!(expected, injective_count(4, 3).unwrap());
        // extensions form a contiguous block
        let t = [2, 0];
        for c in 0..2 {
            let mut child = t.to_vec();
            child.push(nth_unused(n, &t, c));
            assert_eq!(rank_injective(n, &child), rank_injective(n, &t) * 2 + c);
        }
    }

    #[test]
    fn l3_examples() {
        let s = l3();
        let r0 = type_partition(&s, 1, Depth::Fixed(0)).unwrap();
        assert_eq!(r0.partition.len(), 1);
        let r1 = type_partition(&s, 1, Depth::Fixed(1)).unwrap();
        assert_eq!(r1.partition.len(), 3);
        assert_eq!(r1.stable_depth, 1);
        let stable = type_partition(&s, 1, Depth::Stable).unwrap();
        assert_eq!(stable.depth, 1);
        assert_eq!(stable.partition, r1.partition);
    }

    #[test]
    fn two_k2_is_atomically_homogeneous() {
        let tp = type_partition(&two_k2(), 1, Depth::Stable).unwrap();
        assert_eq!(tp.partition.len(), 1);
        assert_eq!(tp.depth, 0);
    }

    #[test]
    fn single_arity_stability_is_not_enough() {
        let s = triangle_hexagon();
        let r = TypeRefinement::compute(&s).unwrap();
        assert_eq!(r.partition(1, 0).len(), 1);
        assert_eq!(r.partition(1, 1).len(), 1);
        assert_eq!(r.partition(1, 2).len(), 2);
        assert_eq!(r.partition(1, r.fixpoint()), orbits(&s, 1).unwrap());
        assert_eq!(r.stable_depth(1), 2);
    }

    #[test]
    fn deeper_ranks_refine() {
        for s in [l3(), two_k2(), triangle_hexagon()] {
            let r = TypeRefinement::compute(&s).unwrap();
            for k in 1..=2 {
                for q in 0..r.fixpoint() {
                    assert!(r.partition(k, q + 1).refines(&r.partition(k, q)));
                }
            }
        }
    }

    #[test]
    fn hintikka_defines_the_class() {
        for s in [l3(), two_k2()] {
            let r = TypeRefinement::compute(&s).unwrap();
            for k in 1..=2 {
                for q in 0..=r.fixpoint() + 1 {
                    let p = r.partition(k, q);
                    for class in p.classes() {
                        let f = r.hintikka(&s, &class[0], q);
                        assert!(f.quantifier_rank() <= q);
                        let vars: Vec<usize> = (0..k).collect();
                        let table = relation_table(&s, &f, &vars).unwrap();
                        assert_eq!(table.to_vec(), *class, "{f}");
                    }
                }
            }
        }
    }

    #[test]
    fn hintikka_middle_of_l3() {
        let s = l3();
        let f = hintikka_formula(&s, &[1], 1).unwrap();
        assert_eq!(
            relation_table(&s, &f, &[0]).unwrap().to_vec(),
            vec![vec![1]]
        );
        let atomic = hintikka_formula(&s, &[1], 0).unwrap();
        assert_eq!(atomic.quantifier_rank(), 0);
        assert!(relation_table(&s, &atomic, &[0]).unwrap().is_full());
    }
}
