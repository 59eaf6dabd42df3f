use crate::error::{Error, Result};
use crate::structure::{is_operator_char, is_variable_token, Signature};

use super::{Formula, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Equals,
    Var(Var),
    Ident(String),
    Op(String),
}

fn describe(tok: Option<&Tok>) -> String {
    match tok {
        None => "end of input".into(),
        Some(Tok::Var(v)) => format!("`x{v}`"),
        Some(Tok::Ident(s)) | Some(Tok::Op(s)) => format!("`{s}`"),
        Some(t) => format!("{t:?}"),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((pos, tok));
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let tok = if is_variable_token(&word) {
                let index = word[1..].parse().map_err(|_| Error::FormulaSyntax {
                    pos,
                    msg: format!("variable index too large in `{word}`"),
                })?;
                Tok::Var(index)
            } else {
                Tok::Ident(word)
            };
            out.push((pos, tok));
        } else if is_operator_char(c) {
            while i < chars.len() && is_operator_char(chars[i].1) {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let tok = match word.as_str() {
                "=" => Tok::Equals,
                "->" => Tok::Arrow,
                _ => Tok::Op(word),
            };
            out.push((pos, tok));
        } else {
            return Err(Error::FormulaSyntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: String) -> Result<T> {
        Err(Error::FormulaSyntax {
            pos: self.offset(),
            msg,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!(
                "expected {:?}, found {}",
                tok,
                describe(self.peek())
            ))
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek() {
            Some(&Tok::Var(v)) => {
                self.pos += 1;
                Ok(v)
            }
            other => self.fail(format!("expected a variable, found {}", describe(other))),
        }
    }

    fn atom(&mut self, name: String) -> Result<Formula> {
        let arity = self
            .sig
            .arity_of(&name)
            .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
        self.expect(Tok::LParen)?;
        let mut vars = vec![self.var()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            vars.push(self.var()?);
        }
        self.expect(Tok::RParen)?;
        check_arity(&name, arity, vars.len())?;
        Ok(Formula::Atom(name, vars))
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(Tok::Ident(word)) => {
                let quantifier = matches!(self.peek_at(1), Some(Tok::Var(_)));
                if quantifier && (word == "E" || word == "A") {
                    self.pos += 1;
                    let v = self.var()?;
                    self.expect(Tok::Dot)?;
                    let body = self.formula()?;
                    return Ok(if word == "E" {
                        Formula::exists(v, body)
                    } else {
                        Formula::forall(v, body)
                    });
                }
                if self.peek_at(1) != Some(&Tok::LParen) {
                    match word.as_str() {
                        "true" => {
                            self.pos += 1;
                            return Ok(Formula::True);
                        }
                        "false" => {
                            self.pos += 1;
                            return Ok(Formula::False);
                        }
                        _ => {}
                    }
                }
                self.pos += 1;
                self.atom(word)
            }
            Some(Tok::Op(name)) => {
                self.pos += 1;
                self.atom(name)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if let Some(&Tok::Var(first)) = self.peek() {
                    self.pos += 1;
                    let f = match self.peek().cloned() {
                        Some(Tok::Equals) => {
                            self.pos += 1;
                            Formula::Eq(first, self.var()?)
                        }
                        Some(Tok::Op(name)) | Some(Tok::Ident(name)) => {
                            self.pos += 1;
                            let arity = self
                                .sig
                                .arity_of(&name)
                                .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                            let second = self.var()?;
                            check_arity(&name, arity, 2)?;
                            Formula::Atom(name, vec![first, second])
                        }
                        other => {
                            return self.fail(format!(
                                "expected `=` or an infix relation, found {}",
                                describe(other.as_ref())
                            ))
                        }
                    };
                    self.expect(Tok::RParen)?;
                    return Ok(f);
                }
                let left = self.formula()?;
                let f = match self.peek() {
                    Some(Tok::RParen) => left,
                    Some(Tok::Amp) => {
                        self.pos += 1;
                        Formula::and(left, self.formula()?)
                    }
                    Some(Tok::Pipe) => {
                        self.pos += 1;
                        Formula::or(left, self.formula()?)
                    }
                    Some(Tok::Arrow) => {
                        self.pos += 1;
                        Formula::implies(left, self.formula()?)
                    }
                    other => {
                        return self.fail(format!(
                            "expected `&`, `|`, `->` or `)`, found {}",
                            describe(other)
                        ))
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => self.fail(format!(
                "expected a formula, found {}",
                describe(other.as_ref())
            )),
        }
    }
}

fn check_arity(name: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::ArityMismatch {
            name: name.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

/// Parses a formula, checking every atom against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        sig,
    };
    let f = parser.formula()?;
    if parser.pos != parser.toks.len() {
        return parser.fail(format!("trailing input at {}", describe(parser.peek())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Symbol;

    fn sig(items: &[(&str, usize)]) -> Signature {
        Signature::new(
            items
                .iter()
                .map(|&(n, a)| Symbol {
                    name: n.into(),
                    arity: a,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn parses_examples() {
        let lt = sig(&[("<", 2)]);
        assert_eq!(
            parse_formula("E x1. (x1 < x0)", &lt).unwrap(),
            Formula::exists(1, Formula::atom("<", vec![1, 0]))
        );
        assert_eq!(parse_formula("(x0 = x0)", &lt).unwrap(), Formula::Eq(0, 0));
        assert_eq!(
            parse_formula("!(true)", &lt).unwrap(),
            Formula::not(Formula::True)
        );
        assert_eq!(
            parse_formula("(E x1.(x1 < x0) & E x1.(x0 < x1))", &lt).unwrap(),
            Formula::and(
                Formula::exists(1, Formula::atom("<", vec![1, 0])),
                Formula::exists(1, Formula::atom("<", vec![0, 1])),
            )
        );
        assert_eq!(
            parse_formula("<(x0, x1)", &lt).unwrap(),
            Formula::atom("<", vec![0, 1])
        );
        assert_eq!(parse_formula("(x007=x3)", &lt).unwrap(), Formula::Eq(7, 3));
    }

    #[test]
    fn symbol_named_like_a_quantifier() {
        let e = sig(&[("E", 2), ("A", 1)]);
        assert_eq!(
            parse_formula("E x2. E(x0, x2)", &e).unwrap(),
            Formula::exists(2, Formula::atom("E", vec![0, 2]))
        );
        assert_eq!(
            parse_formula("A(x3)", &e).unwrap(),
            Formula::atom("A", vec![3])
        );
    }

    #[test]
    fn arity_mismatch() {
        let e = sig(&[("E", 2)]);
        assert!(matches!(
            parse_formula("E(x0)", &e).unwrap_err(),
            Error::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
    }

    #[test]
    fn errors_carry_position() {
        let e = sig(&[("E", 2)]);
        assert_eq!(
            parse_formula("P(x0)", &e).unwrap_err(),
            Error::UnknownRelation("P".into())
        );
        match parse_formula("(E(x0, x1) & ", &e).unwrap_err() {
            Error::FormulaSyntax { pos, .. } => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("true true", &e).unwrap_err(),
            Error::FormulaSyntax { pos: 5, .. }
        ));
        assert!(matches!(
            parse_formula("(x0 # x1)", &e).unwrap_err(),
            Error::FormulaSyntax { pos: 4, .. }
        ));
    }
}
