//! First-order formulas over a relational signature.
//!
//! Variables are indexed (`x0`, `x1`, ...). The printer is fully
//! parenthesized and the parser accepts everything it prints.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::structure::is_operator_char;

pub use eval::{evaluate, relation_table, Assignment};
pub use parse::parse_formula;

pub type Var = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String, Vec<Var>),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn of(holds: bool) -> Sign {
        if holds {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn holds(self) -> bool {
        self == Sign::Pos
    }

    pub fn as_int(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// `Q` when the sign is positive, `¬Q` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFormula {
    pub base: Formula,
    pub sign: Sign,
}

impl SignedFormula {
    pub fn into_formula(self) -> Formula {
        match self.sign {
            Sign::Pos => self.base,
            Sign::Neg => Formula::not(self.base),
        }
    }
}

impl Formula {
    pub fn atom(name: &str, vars: Vec<Var>) -> Formula {
        Formula::Atom(name.to_string(), vars)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::and(f, acc))
            .unwrap_or(Formula::True)
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let parts: Vec<Formula> = parts.into_iter().collect();
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::or(f, acc))
            .unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, vs) => out.extend(vs.iter().filter(|v| !bound.contains(v))),
            Formula::Eq(a, b) => out.extend([a, b].into_iter().filter(|v| !bound.contains(v))),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Largest variable index occurring anywhere, bound or free.
    pub fn max_var(&self) -> Option<Var> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom(_, vs) => vs.iter().copied().max(),
            Formula::Eq(a, b) => Some(*a.max(b)),
            Formula::Not(f) => f.max_var(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.max_var().max(g.max_var())
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => Some(*v).max(f.max_var()),
        }
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.quantifier_rank().max(g.quantifier_rank())
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                1 + f.size() + g.size()
            }
        }
    }

    /// Conservative cleanup: drops `true`/`false` units, flattens and
    /// deduplicates conjunctions and disjunctions, removes double negation.
    /// The result is equivalent on every nonempty universe.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => self.clone(),
            Formula::Eq(a, b) if a == b => Formula::True,
            Formula::Eq(..) => self.clone(),
            Formula::Not(f) => match f.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(inner) => *inner,
                g => Formula::not(g),
            },
            Formula::And(..) => {
                let mut parts = Vec::new();
                self.flatten_and(&mut parts);
                let mut kept: Vec<Formula> = Vec::new();
                for p in parts.iter().map(|p| p.simplify()) {
                    match p {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        p if kept.contains(&p) => {}
                        p => kept.push(p),
                    }
                }
                Formula::conj(kept)
            }
            Formula::Or(..) => {
                let mut parts = Vec::new();
                self.flatten_or(&mut parts);
                let mut kept: Vec<Formula> = Vec::new();
                for p in parts.iter().map(|p| p.simplify()) {
                    match p {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        p if kept.contains(&p) => {}
                        p => kept.push(p),
                    }
                }
                Formula::disj(kept)
            }
            Formula::Implies(f, g) => match (f.simplify(), g.simplify()) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, g) => g,
                (f, Formula::False) => Formula::not(f).simplify(),
                (f, g) => Formula::implies(f, g),
            },
            Formula::Exists(v, f) => match f.simplify() {
                c @ (Formula::True | Formula::False) => c,
                g => Formula::exists(*v, g),
            },
            Formula::Forall(v, f) => match f.simplify() {
                c @ (Formula::True | Formula::False) => c,
                g => Formula::forall(*v, g),
            },
        }
    }

    fn flatten_and<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::And(f, g) => {
                f.flatten_and(out);
                g.flatten_and(out);
            }
            other => out.push(other),
        }
    }

    fn flatten_or<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Or(f, g) => {
                f.flatten_or(out);
                g.flatten_or(out);
            }
            other => out.push(other),
        }
    }
}

fn is_infix_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_operator_char)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(name, vs) if vs.len() == 2 && is_infix_name(name) => {
                write!(f, "(x{} {} x{})", vs[0], name, vs[1])
            }
            Formula::Atom(name, vs) => {
                let args: Vec<String> = vs.iter().map(|v| format!("x{v}")).collect();
                write!(f, "{}({})", name, args.join(", "))
            }
            Formula::Eq(a, b) => write!(f, "(x{a} = x{b})"),
            Formula::Not(g) => write!(f, "!({g})"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Or(g, h) => write!(f, "({g} | {h})"),
            Formula::Implies(g, h) => write!(f, "({g} -> {h})"),
            Formula::Exists(v, g) => write!(f, "E x{v}. ({g})"),
            Formula::Forall(v, g) => write!(f, "A x{v}. ({g})"),
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
