//! Finite relational structures and their text format.
//!
//! ```text
//! universe 3
//! rel < arity 2
//!   0 1
//!   0 2
//!   1 2
//! end
//! target Mid arity 1
//!   1
//! end
//! ```
//!
//! Equality is always available under the reserved name `=` and is never
//! listed in a file. The target relation is kept apart from the signature:
//! symmetry and definability computations only ever look at `Σ`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tuples::{Elem, Table, Tuple};

pub const EQUALITY: &str = "=";

/// Soft limits for the exhaustive operations.
pub const SOFT_MAX_UNIVERSE: usize = 10;
pub const SOFT_MAX_ARITY: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        for (i, s) in symbols.iter().enumerate() {
            check_name(&s.name)?;
            if s.arity == 0 {
                return Err(Error::ArityMismatch {
                    name: s.name.clone(),
                    expected: 1,
                    found: 0,
                });
            }
            if symbols[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.symbols
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.arity)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub(crate) fn push(&mut self, symbol: Symbol) -> Result<()> {
        check_name(&symbol.name)?;
        if self.position(&symbol.name).is_some() {
            return Err(Error::DuplicateSymbol(symbol.name));
        }
        self.symbols.push(symbol);
        Ok(())
    }
}

pub(crate) fn is_operator_char(c: char) -> bool {
    "<>=+*/~^%@$?:-".contains(c)
}

/// Identifiers (`[A-Za-z_][A-Za-z0-9_]*`, excluding variable tokens `x<digits>`)
/// or runs of operator characters other than `=` and `->`.
pub fn check_name(name: &str) -> Result<()> {
    let bad = || Error::InvalidName(name.to_string());
    let mut chars = name.chars();
    let first = chars.next().ok_or_else(bad)?;
    if first.is_ascii_alphabetic() || first == '_' {
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(bad());
        }
        if is_variable_token(name) {
            return Err(bad());
        }
        Ok(())
    } else if name.chars().all(is_operator_char) {
        if name == EQUALITY || name == "->" {
            return Err(bad());
        }
        Ok(())
    } else {
        Err(bad())
    }
}

pub(crate) fn is_variable_token(s: &str) -> bool {
    s.len() > 1 && s.starts_with('x') && s[1..].chars().all(|c| c.is_ascii_digit())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    size: usize,
    signature: Signature,
    tables: Vec<Table>,
    target_name: String,
    target: Table,
}

impl Structure {
    pub fn builder(size: usize) -> StructureBuilder {
        StructureBuilder {
            size,
            relations: Vec::new(),
            target: None,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Interpretations of the Σ symbols, in signature order.
    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn relation(&self, name: &str) -> Option<&Table> {
        self.signature.position(name).map(|i| &self.tables[i])
    }

    pub fn target(&self) -> &Table {
        &self.target
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn target_arity(&self) -> usize {
        self.target.arity()
    }

    /// Σ symbols together with the target, for parsing verification formulas.
    pub fn full_signature(&self) -> Signature {
        let mut sig = self.signature.clone();
        sig.symbols.push(Symbol {
            name: self.target_name.clone(),
            arity: self.target.arity(),
        });
        sig
    }

    /// Σ relation or the target, looked up by name.
    pub fn lookup(&self, name: &str) -> Option<&Table> {
        if name == self.target_name {
            Some(&self.target)
        } else {
            self.relation(name)
        }
    }

    /// Same Σ-part with a different target.
    pub fn with_target(&self, name: &str, table: Table) -> Result<Structure> {
        check_name(name)?;
        if self.signature.position(name).is_some() {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        if table.universe() != self.size || table.arity() == 0 {
            return Err(Error::Invalid(
                "target table does not fit the universe".into(),
            ));
        }
        Ok(Structure {
            target_name: name.to_string(),
            target: table,
            ..self.clone()
        })
    }

    pub fn eval_relation(&self, name: &str, t: &[Elem]) -> Result<bool> {
        if let Some(&bad) = t.iter().find(|&&x| x >= self.size) {
            return Err(Error::OutOfRange {
                elem: bad,
                size: self.size,
            });
        }
        if name == EQUALITY {
            if t.len() != 2 {
                return Err(Error::ArityMismatch {
                    name: name.to_string(),
                    expected: 2,
                    found: t.len(),
                });
            }
            return Ok(t[0] == t[1]);
        }
        let table = self
            .lookup(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
        if table.arity() != t.len() {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: table.arity(),
                found: t.len(),
            });
        }
        Ok(table.contains(t))
    }

    /// Warnings for exceeding the soft limits with the given working arity.
    pub fn limit_warnings(&self, arity: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.size > SOFT_MAX_UNIVERSE {
            out.push(format!(
                "universe size {} exceeds soft limit {SOFT_MAX_UNIVERSE}",
                self.size
            ));
        }
        if arity > SOFT_MAX_ARITY {
            out.push(format!("arity {arity} exceeds soft limit {SOFT_MAX_ARITY}"));
        }
        out
    }
}

pub struct StructureBuilder {
    size: usize,
    relations: Vec<(String, usize, Vec<Tuple>)>,
    target: Option<(String, usize, Vec<Tuple>)>,
}

impl StructureBuilder {
    pub fn relation<T: AsRef<[Elem]>>(
        mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Self {
        let rows = tuples.into_iter().map(|t| t.as_ref().to_vec()).collect();
        self.relations.push((name.to_string(), arity, rows));
        self
    }

    pub fn target<T: AsRef<[Elem]>>(
        mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Self {
        let rows = tuples.into_iter().map(|t| t.as_ref().to_vec()).collect();
        self.target = Some((name.to_string(), arity, rows));
        self
    }

    pub fn build(self) -> Result<Structure> {
        if self.size == 0 {
            return Err(Error::Invalid("universe must be nonempty".into()));
        }
        let mut signature = Signature::default();
        let mut tables = Vec::new();
        for (name, arity, rows) in self.relations {
            signature.push(Symbol {
                name: name.clone(),
                arity,
            })?;
            if arity == 0 {
                return Err(Error::ArityMismatch {
                    name,
                    expected: 1,
                    found: 0,
                });
            }
            tables.push(build_table(&name, self.size, arity, &rows)?);
        }
        let (target_name, arity, rows) = self.target.ok_or(Error::MissingTarget)?;
        check_name(&target_name)?;
        if signature.position(&target_name).is_some() {
            return Err(Error::DuplicateSymbol(target_name));
        }
        if arity == 0 {
            return Err(Error::ArityMismatch {
                name: target_name,
                expected: 1,
                found: 0,
            });
        }
        let target = build_table(&target_name, self.size, arity, &rows)?;
        Ok(Structure {
            size: self.size,
            signature,
            tables,
            target_name,
            target,
        })
    }
}

fn build_table(name: &str, n: usize, arity: usize, rows: &[Tuple]) -> Result<Table> {
    let mut table = Table::empty(n, arity)?;
    for row in rows {
        if row.len() != arity {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: arity,
                found: row.len(),
            });
        }
        table.insert(row)?;
    }
    Ok(table)
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let tokens: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .flat_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("");
            line.split_whitespace().map(move |tok| (i + 1, tok))
        })
        .collect();
    let mut cursor = Tokens { tokens, pos: 0 };

    cursor.keyword("universe")?;
    let size = cursor.int()?;
    if size == 0 {
        return Err(cursor.error_here("universe must be nonempty"));
    }

    let mut signature = Signature::default();
    let mut tables = Vec::new();
    let mut target: Option<(String, Table)> = None;

    while let Some((line, tok)) = cursor.peek() {
        let is_target = match tok {
            "rel" => false,
            "target" => true,
            other => {
                return Err(Error::Syntax {
                    line,
                    msg: format!("expected `rel` or `target`, found `{other}`"),
                })
            }
        };
        cursor.pos += 1;
        let (name_line, name) = cursor.next("a relation name")?;
        check_name(name).map_err(|e| Error::Syntax {
            line: name_line,
            msg: e.to_string(),
        })?;
        cursor.keyword("arity")?;
        let arity = cursor.int()?;
        if arity == 0 {
            return Err(Error::Syntax {
                line: name_line,
                msg: format!("`{name}` must have positive arity"),
            });
        }
        let mut table = Table::empty(size, arity)?;
        let mut row = Vec::with_capacity(arity);
        loop {
            let (line, tok) = cursor.next("a tuple row or `end`")?;
            if tok == "end" {
                if !row.is_empty() {
                    return Err(Error::ArityMismatch {
                        name: name.to_string(),
                        expected: arity,
                        found: row.len(),
                    });
                }
                break;
            }
            let elem: usize = tok.parse().map_err(|_| Error::Syntax {
                line,
                msg: format!("expected an element or `end`, found `{tok}`"),
            })?;
            if elem >= size {
                return Err(Error::OutOfRange { elem, size });
            }
            row.push(elem);
            if row.len() == arity {
                table.insert(&row)?;
                row.clear();
            }
        }
        if is_target {
            if target.is_some() {
                return Err(Error::Syntax {
                    line: name_line,
                    msg: "more than one target block".into(),
                });
            }
            target = Some((name.to_string(), table));
        } else {
            signature.push(Symbol {
                name: name.to_string(),
                arity,
            })?;
            tables.push(table);
        }
    }

    let (target_name, target) = target.ok_or(Error::MissingTarget)?;
    if signature.position(&target_name).is_some() {
        return Err(Error::DuplicateSymbol(target_name));
    }
    Ok(Structure {
        size,
        signature,
        tables,
        target_name,
        target,
    })
}

struct Tokens<'a> {
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn peek(&self) -> Option<(usize, &'a str)> {
        self.tokens.get(self.pos).copied()
    }

    fn last_line(&self) -> usize {
        self.tokens.last().map(|t| t.0).unwrap_or(1)
    }

    fn error_here(&self, msg: &str) -> Error {
        let line = self
            .tokens
            .get(self.pos.saturating_sub(1))
            .map(|t| t.0)
            .unwrap_or(1);
        Error::Syntax {
            line,
            msg: msg.to_string(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let tok = self.peek().ok_or_else(|| Error::Syntax {
            line: self.last_line(),
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(tok)
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let (line, tok) = self.next(&format!("`{kw}`"))?;
        if tok != kw {
            return Err(Error::Syntax {
                line,
                msg: format!("expected `{kw}`, found `{tok}`"),
            });
        }
        Ok(())
    }

    fn int(&mut self) -> Result<usize> {
        let (line, tok) = self.next("an integer")?;
        tok.parse().map_err(|_| Error::Syntax {
            line,
            msg: format!("expected an integer, found `{tok}`"),
        })
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_structure(s)
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, kw: &str, name: &str, table: &Table) -> fmt::Result {
    writeln!(f, "{kw} {name} arity {}", table.arity())?;
    for t in table.iter() {
        let row: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        writeln!(f, "  {}", row.join(" "))?;
    }
    writeln!(f, "end")
}

/// Canonical writer; `parse_structure` reads it back unchanged.
impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "universe {}", self.size)?;
        for (sym, table) in self.signature.symbols.iter().zip(&self.tables) {
            write_block(f, "rel", &sym.name, table)?;
        }
        write_block(f, "target", &self.target_name, &self.target)
    }
}
