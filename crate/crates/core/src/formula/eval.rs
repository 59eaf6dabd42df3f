use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::tuples::{all_tuples, tuple_count, Elem, Table};

use super::{Formula, Var};

/// Values for (at least) the free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, Elem>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, v: Var, e: Elem) -> Self {
        self.0.insert(v, e);
        self
    }

    /// `x0 ↦ t[0], x1 ↦ t[1], ...`
    pub fn from_tuple(t: &[Elem]) -> Self {
        Assignment(t.iter().copied().enumerate().collect())
    }

    pub fn get(&self, v: Var) -> Option<Elem> {
        self.0.get(&v).copied()
    }
}

/// A formula with relation names resolved against one structure.
pub(crate) struct Compiled<'s> {
    n: usize,
    node: Node<'s>,
    slots: usize,
}

enum Node<'s> {
    Const(bool),
    Atom(&'s Table, Vec<Var>),
    Eq(Var, Var),
    Not(Box<Node<'s>>),
    And(Box<Node<'s>>, Box<Node<'s>>),
    Or(Box<Node<'s>>, Box<Node<'s>>),
    Implies(Box<Node<'s>>, Box<Node<'s>>),
    Exists(Var, Box<Node<'s>>),
    Forall(Var, Box<Node<'s>>),
}

const UNBOUND: Elem = Elem::MAX;

impl<'s> Compiled<'s> {
    pub(crate) fn new(s: &'s Structure, f: &Formula) -> Result<Self> {
        Ok(Compiled {
            n: s.size(),
            node: compile(s, f)?,
            slots: f.max_var().map_or(0, |v| v + 1),
        })
    }

    pub(crate) fn env(&self) -> Vec<Elem> {
        vec![UNBOUND; self.slots]
    }

    pub(crate) fn slots(&self) -> usize {
        self.slots
    }

    pub(crate) fn eval(&self, env: &mut [Elem]) -> bool {
        eval_node(&self.node, self.n, env)
    }
}

fn compile<'s>(s: &'s Structure, f: &Formula) -> Result<Node<'s>> {
    let bx = |g: &Formula| compile(s, g).map(Box::new);
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Atom(name, vs) => {
            let table = s
                .lookup(name)
                .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
            if table.arity() != vs.len() {
                return Err(Error::ArityMismatch {
                    name: name.clone(),
                    expected: table.arity(),
                    found: vs.len(),
                });
            }
            Node::Atom(table, vs.clone())
        }
        Formula::Eq(a, b) => Node::Eq(*a, *b),
        Formula::Not(g) => Node::Not(bx(g)?),
        Formula::And(g, h) => Node::And(bx(g)?, bx(h)?),
        Formula::Or(g, h) => Node::Or(bx(g)?, bx(h)?),
        Formula::Implies(g, h) => Node::Implies(bx(g)?, bx(h)?),
        Formula::Exists(v, g) => Node::Exists(*v, bx(g)?),
        Formula::Forall(v, g) => Node::Forall(*v, bx(g)?),
    })
}

fn eval_node(node: &Node<'_>, n: usize, env: &mut [Elem]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Atom(table, vs) => {
            let idx = vs.iter().fold(0, |acc, &v| acc * n + env[v]);
            table.contains_index(idx)
        }
        Node::Eq(a, b) => env[*a] == env[*b],
        Node::Not(g) => !eval_node(g, n, env),
        Node::And(g, h) => eval_node(g, n, env) && eval_node(h, n, env),
        Node::Or(g, h) => eval_node(g, n, env) || eval_node(h, n, env),
        Node::Implies(g, h) => !eval_node(g, n, env) || eval_node(h, n, env),
        Node::Exists(v, g) => {
            let saved = env[*v];
            let found = (0..n).any(|e| {
                env[*v] = e;
                eval_node(g, n, env)
            });
            env[*v] = saved;
            found
        }
        Node::Forall(v, g) => {
            let saved = env[*v];
            let all = (0..n).all(|e| {
                env[*v] = e;
                eval_node(g, n, env)
            });
            env[*v] = saved;
            all
        }
    }
}

/// Tarskian satisfaction of `f` in `s` under `a`; quantifiers range over the universe.
pub fn evaluate(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool> {
    let compiled = Compiled::new(s, f)?;
    let mut env = compiled.env();
    for v in f.free_vars() {
        let e = a.get(v).ok_or(Error::UnboundVariable(v))?;
        if e >= s.size() {
            return Err(Error::OutOfRange {
                elem: e,
                size: s.size(),
            });
        }
        env[v] = e;
    }
    Ok(compiled.eval(&mut env))
}

/// `{ t ∈ A^|vars| : s ⊨ f[vars ↦ t] }`.
pub fn relation_table(s: &Structure, f: &Formula, vars: &[Var]) -> Result<Table> {
    if let Some(&v) = f.free_vars().iter().find(|v| !vars.contains(v)) {
        return Err(Error::UnboundVariable(v));
    }
    let n = s.size();
    let compiled = Compiled::new(s, f)?;
    let slots = compiled.slots().max(vars.iter().max().map_or(0, |v| v + 1));
    let mut env = vec![UNBOUND; slots];
    let arity = vars.len();
    // size check only
    Table::empty(n, arity)?;
    let mut bits = Vec::with_capacity(tuple_count(n, arity).unwrap_or(0));
    for t in all_tuples(n, arity) {
        // a repeated variable must receive the same value at each position
        let mut consistent = true;
        for (i, &v) in vars.iter().enumerate() {
            if vars[..i].contains(&v) {
                let j = vars.iter().position(|&w| w == v).unwrap();
                consistent &= t[i] == t[j];
            } else {
                env[v] = t[i];
            }
        }
        bits.push(consistent && compiled.eval(&mut env));
    }
    Ok(Table::from_bits(n, arity, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::structure::parse_structure;

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

    #[test]
    fn evaluate_examples() {
        let s = l3();
        let f = parse_formula("E x1. (x1 < x0)", s.signature()).unwrap();
        // witnesses checked by hand: nothing below 0, 0 below 2
        assert!(!evaluate(&s, &f, &Assignment::new().bind(0, 0)).unwrap());
        assert!(evaluate(&s, &f, &Assignment::new().bind(0, 2)).unwrap());
        let eq = parse_formula("(x0 = x0)", s.signature()).unwrap();
        for e in 0..3 {
            assert!(evaluate(&s, &eq, &Assignment::new().bind(0, e)).unwrap());
        }
    }

    #[test]
    fn unbound_variable() {
        let s = l3();
        let f = parse_formula("(x0 < x1)", s.signature()).unwrap();
        assert_eq!(
            evaluate(&s, &f, &Assignment::new().bind(0, 0)).unwrap_err(),
            Error::UnboundVariable(1)
        );
        assert_eq!(
            relation_table(&s, &f, &[0]).unwrap_err(),
            Error::UnboundVariable(1)
        );
    }

    #[test]
    fn relation_table_examples() {
        let s = l3();
        let mid = parse_formula("(E x1.(x1 < x0) & E x1.(x0 < x1))", s.signature()).unwrap();
        assert_eq!(
            relation_table(&s, &mid, &[0]).unwrap().to_vec(),
            vec![vec![1]]
        );
        assert!(relation_table(&s, &Formula::True, &[0]).unwrap().is_full());

        let g = two_k2();
        let e = parse_formula("E(x0,x1)", g.signature()).unwrap();
        assert_eq!(
            relation_table(&g, &e, &[0, 1]).unwrap().to_vec(),
            vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]]
        );
    }

    #[test]
    fn cylindrification() {
        let s = l3();
        let f = parse_formula("(x0 < x1)", s.signature()).unwrap();
        let base = relation_table(&s, &f, &[0, 1]).unwrap();
        let wide = relation_table(&s, &f, &[0, 1, 5]).unwrap();
        for t in all_tuples(3, 3) {
            assert_eq!(wide.contains(&t), base.contains(&t[..2]));
        }
        let diag = relation_table(&s, &Formula::True, &[0, 0]).unwrap();
        assert_eq!(diag.to_vec(), vec![vec![0, 0], vec![1, 1], vec![2, 2]]);
    }

    #[test]
    fn target_is_readable_by_name() {
        let s = l3();
        let f = parse_formula("Mid(x0)", &s.full_signature()).unwrap();
        assert_eq!(relation_table(&s, &f, &[0]).unwrap(), *s.target());
    }
}
