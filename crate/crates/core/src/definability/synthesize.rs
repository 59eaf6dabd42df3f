use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Sign};
use crate::structure::Structure;

use super::{is_definable, witness_pair, Certificate, DefinableEnumeration};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Synthesis {
    pub formula: Formula,
    /// Least `m` at which no witness pair survives.
    pub level: usize,
    /// Sign patterns of length `level` realized inside the target.
    pub patterns: Vec<Vec<Sign>>,
}

/// Writes the target as a disjunction of `⋀_{i<m*} P_i^{σ_i}` over the sign
/// patterns realized by target tuples.
pub fn synthesize(s: &Structure, e: &DefinableEnumeration) -> Result<Synthesis> {
    if let (false, Certificate::Violation(v)) = is_definable(s)? {
        return Err(Error::NotDefinable(Box::new(v)));
    }
    let mut level = None;
    for m in 0..=e.len() {
        if witness_pair(s, m, e)?.is_none() {
            level = Some(m);
            break;
        }
    }
    let level = level.ok_or_else(|| {
        Error::Internal(format!(
            "{} enumeration does not separate the target",
            e.mode
        ))
    })?;
    let mut patterns: Vec<Vec<Sign>> = Vec::new();
    for t in s.target().iter() {
        let p = e.pattern(&t, level);
        if !patterns.contains(&p) {
            patterns.push(p);
        }
    }
    let formula = Formula::disj(patterns.iter().map(|p| e.pattern_formula(p))).simplify();
    Ok(Synthesis {
        formula,
        level,
        patterns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::definability::enumerate_definables;
    use crate::formula::relation_table;
    use crate::structure::parse_structure;
    use crate::symmetry::Permutation;
    use crate::tuples::Table;

    fn l3() -> Structure {
        parse_structure("universe 3\nrel < arity 2\n0 1\n0 2\n1 2\nend\ntarget Mid arity 1\n1\nend")
            .unwrap()
    }

    fn c4() -> Structure {
        parse_structure(
            "universe 4\nrel E arity 2\n0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 0\n0 3\nend\n\
             target D arity 2\n0 2\n2 0\n1 3\n3 1\nend",
        )
        .unwrap()
    }

    #[test]
    fn l3_middle() {
        let s = l3();
        for mode in ["orbit", "rank"] {
            let e = enumerate_definables(&s, 1, mode).unwrap();
            let out = synthesize(&s, &e).unwrap();
            assert!(out.level <= e.len());
            assert_eq!(relation_table(&s, &out.formula, &[0]).unwrap(), *s.target());
        }
        let e = enumerate_definables(&s, 1, "orbit").unwrap();
        assert_eq!(synthesize(&s, &e).unwrap().level, 2);
    }

    #[test]
    fn c4_diagonals() {
        let s = c4();
        let e = enumerate_definables(&s, 2, "orbit").unwrap();
        let out = synthesize(&s, &e).unwrap();
        assert_eq!(
            relation_table(&s, &out.formula, &[0, 1]).unwrap(),
            *s.target()
        );
    }

    #[test]
    fn not_definable_carries_violation() {
        let s = parse_structure(
            "universe 4\nrel E arity 2\n0 1\n1 0\n2 3\n3 2\nend\ntarget R arity 1\n0\n1\nend",
        )
        .unwrap();
        let e = enumerate_definables(&s, 1, "orbit").unwrap();
        match synthesize(&s, &e).unwrap_err() {
            Error::NotDefinable(v) => {
                assert_eq!(
                    v.permutation,
                    Permutation::from_swaps(4, &[(0, 2), (1, 3)]).unwrap()
                );
                assert_eq!((v.a.clone(), v.b.clone()), (vec![0], vec![2]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_targets() {
        let s = l3();
        let e = enumerate_definables(&s, 1, "rank").unwrap();
        let empty = s.with_target("Z", Table::empty(3, 1).unwrap()).unwrap();
        let out = synthesize(&empty, &e).unwrap();
        assert_eq!((out.formula, out.level), (Formula::False, 0));
        let full = s.with_target("F", Table::full(3, 1).unwrap()).unwrap();
        let out = synthesize(&full, &e).unwrap();
        assert_eq!((out.formula, out.level), (Formula::True, 0));
    }
}
