use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::structure::{is_variable_token, Structure};
use crate::tuples::Elem;

use super::{IndexSet, Sequence};

struct Valuator<'s> {
    s: &'s Structure,
    k: usize,
    env: BTreeMap<Var, Vec<Elem>>,
}

impl Valuator<'_> {
    fn value(&mut self, f: &Formula) -> Result<IndexSet> {
        let k = self.k;
        Ok(match f {
            Formula::True => IndexSet::full(k),
            Formula::False => IndexSet::empty(k),
            Formula::Atom(name, vars) => {
                let table = self
                    .s
                    .lookup(name)
                    .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                let cols = vars
                    .iter()
                    .map(|v| self.column(*v))
                    .collect::<Result<Vec<_>>>()?;
                IndexSet::from_fn(k, |i| {
                    let t: Vec<Elem> = cols.iter().map(|c| c[i]).collect();
                    table.contains(&t)
                })
            }
            Formula::Eq(x, y) => {
                let (cx, cy) = (self.column(*x)?, self.column(*y)?);
                IndexSet::from_fn(k, |i| cx[i] == cy[i])
            }
            Formula::Not(g) => self.value(g)?.complement(),
            Formula::And(g, h) => self.value(g)?.intersection(&self.value(h)?),
            Formula::Or(g, h) => self.value(g)?.union(&self.value(h)?),
            Formula::Implies(g, h) => self.value(g)?.complement().union(&self.value(h)?),
            Formula::Exists(v, g) => {
                self.over_constants(*v, g, IndexSet::empty(k), |acc, x| acc.union(x))?
            }
            Formula::Forall(v, g) => {
                self.over_constants(*v, g, IndexSet::full(k), |acc, x| acc.intersection(x))?
            }
        })
    }

    fn column(&self, v: Var) -> Result<Vec<Elem>> {
        self.env.get(&v).cloned().ok_or(Error::UnboundVariable(v))
    }

    fn over_constants(
        &mut self,
        v: Var,
        body: &Formula,
        init: IndexSet,
        combine: fn(&IndexSet, &IndexSet) -> IndexSet,
    ) -> Result<IndexSet> {
        let saved = self.env.remove(&v);
        let mut acc = init;
        for c in 0..self.s.size() {
            self.env.insert(v, vec![c; self.k]);
            let part = self.value(body);
            match part {
                Ok(part) => acc = combine(&acc, &part),
                Err(err) => {
                    self.restore(v, saved);
                    return Err(err);
                }
            }
        }
        self.restore(v, saved);
        Ok(acc)
    }

    fn restore(&mut self, v: Var, saved: Option<Vec<Elem>>) {
        match saved {
            Some(col) => self.env.insert(v, col),
            None => self.env.remove(&v),
        };
    }
}

/// `Ψ(F) = { i : F holds at the i-th coordinates of the bound sequences }`,
/// computed compositionally: quantifiers range over constant sequences.
pub fn boolean_valuation(
    s: &Structure,
    f: &Formula,
    binding: &BTreeMap<Var, Sequence>,
    k: usize,
) -> Result<IndexSet> {
    for v in f.free_vars() {
        if !binding.contains_key(&v) {
            return Err(Error::UnboundVariable(v));
        }
    }
    let mut env = BTreeMap::new();
    for (&v, seq) in binding {
        seq.check_len(k)?;
        seq.check_universe(s.size())?;
        env.insert(v, seq.values().to_vec());
    }
    Valuator { s, k, env }.value(f)
}

/// Parses lines of the form `xN = v0,v1,...`; `#` starts a comment.
pub fn parse_binding(text: &str) -> Result<BTreeMap<Var, Sequence>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: String| Error::Syntax { line: no + 1, msg };
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| syntax("expected `xN = v0,v1,...`".into()))?;
        let name = lhs.trim();
        if !is_variable_token(name) {
            return Err(syntax(format!("`{name}` is not a variable")));
        }
        let var: Var = name[1..]
            .parse()
            .map_err(|_| syntax(format!("bad variable `{name}`")))?;
        let seq: Sequence = rhs.parse().map_err(|e: Error| syntax(e.to_string()))?;
        if out.insert(var, seq).is_some() {
            return Err(syntax(format!("`{name}` bound twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::structure::parse_structure;

    fn two_k2() -> Structure {
        parse_structure(
            "universe 4\nrel E arity 2\n0 1\n1 0\n2 3\n3 2\nend\ntarget R arity 1\n0\n1\nend",
        )
        .unwrap()
    }

    fn value(s: &Structure, text: &str, binding: &BTreeMap<Var, Sequence>) -> Result<IndexSet> {
        let f = parse_formula(text, &s.full_signature()).unwrap();
        boolean_valuation(s, &f, binding, 4)
    }

    #[test]
    fn examples() {
        let s = two_k2();
        let b = parse_binding("x0 = 0,1,2,3\nx1 = 1,0,3,2 # swap\n").unwrap();
        assert_eq!(value(&s, "E(x0,x1)", &b).unwrap(), IndexSet::full(4));
        assert_eq!(value(&s, "(x0 = x0)", &b).unwrap(), IndexSet::full(4));
        assert!(value(&s, "(x0 = x1)", &b).unwrap().is_empty());
        assert_eq!(value(&s, "R(x0)", &b).unwrap().to_string(), "{0,1}");
        assert_eq!(
            value(&s, "E x2. (E(x0,x2) & R(x2))", &b)
                .unwrap()
                .to_string(),
            "{0,1}"
        );
        assert_eq!(
            value(&s, "A x0. E x1. E(x0,x1)", &BTreeMap::new()).unwrap(),
            IndexSet::full(4)
        );
    }

    #[test]
    fn errors() {
        let s = two_k2();
        let b = parse_binding("x0 = 0,1,2,3").unwrap();
        assert_eq!(
            value(&s, "E(x0,x1)", &b).unwrap_err(),
            Error::UnboundVariable(1)
        );
        let short = parse_binding("x0 = 0,1").unwrap();
        assert!(matches!(
            value(&s, "R(x0)", &short),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            parse_binding("y = 1"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_binding("x0 = 1\nx0 = 2"),
            Err(Error::Syntax { line: 2, .. })
        ));
    }
}
