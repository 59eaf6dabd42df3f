use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{relation_table, Formula};
use crate::registry::{Named, Registry};
use crate::structure::Structure;
use crate::symmetry::{automorphisms, is_automorphism, orbits_under, Permutation};
use crate::tuples::{all_tuples, format_tuple, Tuple};

use super::enumerate::EnumerationStrategy;
use super::{enumerate_definables, witness_pair, OrbitAtoms};

/// An automorphism of `<A, Σ>` mapping `a` to `b` where the target holds on
/// exactly one of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub permutation: Permutation,
    pub a: Tuple,
    pub b: Tuple,
}

impl Violation {
    pub fn verify(&self, s: &Structure) -> std::result::Result<(), String> {
        if !is_automorphism(s, &self.permutation) {
            return Err(format!("{} is not an automorphism", self.permutation));
        }
        if self.permutation.apply_tuple(&self.a) != self.b {
            return Err(format!(
                "{} does not map {} to {}",
                self.permutation,
                format_tuple(&self.a),
                format_tuple(&self.b)
            ));
        }
        let target = s.target();
        if target.contains(&self.a) == target.contains(&self.b) {
            return Err("target membership agrees on both tuples".into());
        }
        Ok(())
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mapping {} to {}",
            self.permutation,
            format_tuple(&self.a),
            format_tuple(&self.b)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    DefiningFormula { formula: Formula },
    Violation(Violation),
}

impl Certificate {
    pub fn verify(&self, s: &Structure) -> std::result::Result<(), String> {
        match self {
            Certificate::DefiningFormula { formula } => {
                let vars: Vec<usize> = (0..s.target_arity()).collect();
                let table = relation_table(s, formula, &vars).map_err(|e| e.to_string())?;
                if &table == s.target() {
                    Ok(())
                } else {
                    Err(format!("{formula} does not define the target"))
                }
            }
            Certificate::Violation(v) => v.verify(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub definable: bool,
    pub certificate: Option<Certificate>,
}

/// A procedure deciding whether the target is definable from Σ.
pub trait Decider: Named + Send + Sync {
    fn decide(&self, s: &Structure) -> Result<Decision>;
}

/// Target is a union of automorphism orbits.
pub struct OrbitUnion;

impl Named for OrbitUnion {
    fn name(&self) -> &'static str {
        "orbit-union"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["orbit"]
    }

    fn describe(&self) -> &'static str {
        "target is a union of Aut(<A, Σ>) orbits; certificate either way"
    }
}

impl Decider for OrbitUnion {
    fn decide(&self, s: &Structure) -> Result<Decision> {
        let (definable, certificate) = is_definable(s)?;
        Ok(Decision {
            definable,
            certificate: Some(certificate),
        })
    }
}

/// Every permutation of the universe, in lexicographic order.
pub struct BruteForce;

/// Largest universe the brute-force decider accepts.
const BRUTE_FORCE_MAX: usize = 10;

impl Named for BruteForce {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["brute"]
    }

    fn describe(&self) -> &'static str {
        "tries all n! permutations; violation uses the least offending permutation"
    }
}

impl Decider for BruteForce {
    fn decide(&self, s: &Structure) -> Result<Decision> {
        let n = s.size();
        if n > BRUTE_FORCE_MAX {
            return Err(Error::LimitExceeded(format!(
                "brute force over {n}! permutations"
            )));
        }
        let mut image = Vec::with_capacity(n);
        let mut found = None;
        permutations(n, &mut image, &mut |p| {
            let p = Permutation::new(p.to_vec()).expect("bijection");
            if !is_automorphism(s, &p) {
                return false;
            }
            let target = s.target();
            let bad = all_tuples(n, target.arity())
                .find(|t| target.contains(t) != target.contains(&p.apply_tuple(t)));
            match bad {
                Some(a) => {
                    let b = p.apply_tuple(&a);
                    found = Some(Violation {
                        permutation: p,
                        a,
                        b,
                    });
                    true
                }
                None => false,
            }
        });
        Ok(Decision {
            definable: found.is_none(),
            certificate: found.map(Certificate::Violation),
        })
    }
}

/// Calls `visit` on permutations in lexicographic order until it returns true.
fn permutations(
    n: usize,
    prefix: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if prefix.len() == n {
        return visit(prefix);
    }
    for y in 0..n {
        if prefix.contains(&y) {
            continue;
        }
        prefix.push(y);
        let stop = permutations(n, prefix, visit);
        prefix.pop();
        if stop {
            return true;
        }
    }
    false
}

/// No witness pair survives the full rank-by-rank enumeration.
pub struct WitnessExhaustion;

impl Named for WitnessExhaustion {
    fn name(&self) -> &'static str {
        "witness-exhaustion"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["witness"]
    }

    fn describe(&self) -> &'static str {
        "witness pair at the full by-rank enumeration is absent"
    }
}

impl Decider for WitnessExhaustion {
    fn decide(&self, s: &Structure) -> Result<Decision> {
        let e = enumerate_definables(s, s.target_arity(), "by-rank")?;
        match witness_pair(s, e.len(), &e)? {
            None => Ok(Decision {
                definable: true,
                certificate: None,
            }),
            Some((a, b)) => {
                let permutation = automorphisms(s)
                    .into_iter()
                    .find(|p| p.apply_tuple(&a) == b)
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "equal stable types but no automorphism maps {} to {}",
                            format_tuple(&a),
                            format_tuple(&b)
                        ))
                    })?;
                Ok(Decision {
                    definable: false,
                    certificate: Some(Certificate::Violation(Violation { permutation, a, b })),
                })
            }
        }
    }
}

pub fn deciders() -> Registry<dyn Decider> {
    let mut reg: Registry<dyn Decider> = Registry::new();
    reg.register(Box::new(OrbitUnion));
    reg.register(Box::new(BruteForce));
    reg.register(Box::new(WitnessExhaustion));
    reg
}

/// Orbit-union test. On success the certificate is the disjunction of the
/// orbit formulas inside the target; otherwise it is the least violation
/// `(a, b, p)` in lexicographic order.
pub fn is_definable(s: &Structure) -> Result<(bool, Certificate)> {
    let target = s.target();
    if target.is_empty() {
        return Ok((
            true,
            Certificate::DefiningFormula {
                formula: Formula::False,
            },
        ));
    }
    if target.is_full() {
        return Ok((
            true,
            Certificate::DefiningFormula {
                formula: Formula::True,
            },
        ));
    }
    let n = s.size();
    let r = s.target_arity();
    let group = automorphisms(s);
    let partition = orbits_under(&group, n, r);
    if partition.saturates(target) {
        let e = OrbitAtoms.enumerate(s, r)?;
        let formula = Formula::disj(
            e.items
                .iter()
                .filter(|item| target.contains(&item.table.iter().next().expect("nonempty class")))
                .map(|item| item.formula.clone()),
        )
        .simplify();
        return Ok((true, Certificate::DefiningFormula { formula }));
    }
    for a in all_tuples(n, r) {
        for b in all_tuples(n, r) {
            if target.contains(&a) == target.contains(&b)
                || partition.class_of(&a) != partition.class_of(&b)
            {
                continue;
            }
            let permutation = group
                .iter()
                .find(|p| p.apply_tuple(&a) == b)
                .expect("same orbit")
                .clone();
            return Ok((
                false,
                Certificate::Violation(Violation { permutation, a, b }),
            ));
        }
    }
    unreachable!("non-saturated partition has a split class")
}
