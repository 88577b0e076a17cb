//! Catalog descriptors for the supported groups and their text grammar.
//!
//! ```text
//! spec    := factor (('*' | 'x' | '×') factor)*
//! factor  := atom ['erase' pair (',' pair)*]
//! atom    := 'z' ['^' int] | 'free_abelian(' int ')' | 'heisenberg' | 'h3'
//!          | 'unipotent(' int ')' | 'u(' int ')' | 'gamma' | '(' spec ')'
//! pair    := '(' int ',' int ')'
//! ```
//!
//! `gamma` abbreviates `unipotent(5) erase (1,4),(1,5)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_UNIPOTENT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    FreeAbelian(usize),
    Unipotent(usize),
    ErasedUnipotent {
        size: usize,
        erased: BTreeSet<(usize, usize)>,
    },
    DirectProduct(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn heisenberg() -> Self {
        GroupSpec::Unipotent(3)
    }

    /// `U_5 / <e_14, e_15>`, the class-3 group of dimension 8.
    pub fn gamma() -> Self {
        GroupSpec::ErasedUnipotent {
            size: 5,
            erased: [(1, 4), (1, 5)].into_iter().collect(),
        }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec::DirectProduct(factors).normalized()
    }

    /// Flattens nested products, drops empty erasures and unwraps singleton products.
    pub fn normalized(self) -> Self {
        match self {
            GroupSpec::ErasedUnipotent { size, erased } if erased.is_empty() => {
                GroupSpec::Unipotent(size)
            }
            GroupSpec::DirectProduct(factors) => {
                let mut flat = Vec::new();
                for f in factors {
                    match f.normalized() {
                        GroupSpec::DirectProduct(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    GroupSpec::DirectProduct(flat)
                }
            }
            other => other,
        }
    }

    pub fn is_free_abelian(&self) -> bool {
        match self {
            GroupSpec::FreeAbelian(_) | GroupSpec::Unipotent(2) => true,
            GroupSpec::DirectProduct(fs) => fs.iter().all(GroupSpec::is_free_abelian),
            _ => false,
        }
    }

    /// The named groups offered by `list-groups`.
    pub fn catalog() -> Vec<(&'static str, GroupSpec)> {
        vec![
            ("z", GroupSpec::FreeAbelian(1)),
            ("z2", GroupSpec::FreeAbelian(2)),
            ("z3", GroupSpec::FreeAbelian(3)),
            ("heisenberg", GroupSpec::heisenberg()),
            (
                "heisenberg_z",
                GroupSpec::product(vec![GroupSpec::heisenberg(), GroupSpec::FreeAbelian(1)]),
            ),
            ("u4", GroupSpec::Unipotent(4)),
            ("u5", GroupSpec::Unipotent(5)),
            ("gamma", GroupSpec::gamma()),
            ("u6", GroupSpec::Unipotent(6)),
        ]
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian(1) => write!(f, "z"),
            GroupSpec::FreeAbelian(k) => write!(f, "z^{k}"),
            GroupSpec::Unipotent(n) => write!(f, "unipotent({n})"),
            GroupSpec::ErasedUnipotent { size, erased } => {
                write!(f, "unipotent({size}) erase ")?;
                for (idx, (i, j)) in erased.iter().enumerate() {
                    if idx > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({i},{j})")?;
                }
                Ok(())
            }
            GroupSpec::DirectProduct(factors) => {
                for (idx, factor) in factors.iter().enumerate() {
                    if idx > 0 {
                        write!(f, " * ")?;
                    }
                    if matches!(factor, GroupSpec::DirectProduct(_)) {
                        write!(f, "({factor})")?;
                    } else {
                        write!(f, "{factor}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser::new(s)?;
        let spec = parser.spec()?;
        parser.expect_end()?;
        Ok(spec.normalized())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Caret,
    Times,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (at, ch) = chars[i];
            match ch {
                c if c.is_whitespace() => i += 1,
                '(' => {
                    toks.push((at, Tok::LParen));
                    i += 1;
                }
                ')' => {
                    toks.push((at, Tok::RParen));
                    i += 1;
                }
                ',' => {
                    toks.push((at, Tok::Comma));
                    i += 1;
                }
                '^' => {
                    toks.push((at, Tok::Caret));
                    i += 1;
                }
                '*' | '×' => {
                    toks.push((at, Tok::Times));
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let mut value: usize = 0;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(chars[i].1 as usize - '0' as usize))
                            .ok_or_else(|| parse_err(at, "integer too large"))?;
                        i += 1;
                    }
                    toks.push((at, Tok::Int(value)));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    while i < chars.len()
                        && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_')
                    {
                        word.push(chars[i].1.to_ascii_lowercase());
                        i += 1;
                    }
                    if word == "x" {
                        toks.push((at, Tok::Times));
                    } else {
                        toks.push((at, Tok::Ident(word)));
                    }
                }
                other => return Err(parse_err(at, format!("unexpected character '{other}'"))),
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(parse_err(at, format!("expected {what}"))),
        }
    }

    fn int(&mut self) -> Result<usize> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(v),
            _ => Err(parse_err(at, "expected an integer")),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(parse_err(self.here(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Times) {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            GroupSpec::DirectProduct(factors)
        })
    }

    fn factor(&mut self) -> Result<GroupSpec> {
        let atom_at = self.here();
        let atom = self.atom()?;
        if let Some(Tok::Ident(word)) = self.peek() {
            if word == "erase" {
                self.bump();
                let size = match atom {
                    GroupSpec::Unipotent(n) => n,
                    _ => {
                        return Err(parse_err(
                            atom_at,
                            "'erase' only applies to unipotent(n) factors",
                        ))
                    }
                };
                let mut erased = BTreeSet::new();
                loop {
                    self.expect(Tok::LParen, "'('")?;
                    let i = self.int()?;
                    self.expect(Tok::Comma, "','")?;
                    let j = self.int()?;
                    self.expect(Tok::RParen, "')'")?;
                    erased.insert((i, j));
                    if self.peek() == Some(&Tok::Comma) {
                        self.bump();
                    } else {
                        break;
                    }
                }
                return Ok(GroupSpec::ErasedUnipotent { size, erased });
            }
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<GroupSpec> {
        let at = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.spec()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(word)) => match word.as_str() {
                "z" => {
                    if self.peek() == Some(&Tok::Caret) {
                        self.bump();
                        Ok(GroupSpec::FreeAbelian(self.int()?))
                    } else {
                        Ok(GroupSpec::FreeAbelian(1))
                    }
                }
                "free_abelian" | "abelian" => Ok(GroupSpec::FreeAbelian(self.paren_int()?)),
                "heisenberg" | "h3" => Ok(GroupSpec::heisenberg()),
                "gamma" => Ok(GroupSpec::gamma()),
                "unipotent" | "u" => Ok(GroupSpec::Unipotent(self.paren_int()?)),
                other => GroupSpec::catalog()
                    .into_iter()
                    .find(|(name, _)| *name == other)
                    .map(|(_, spec)| spec)
                    .ok_or_else(|| parse_err(at, format!("unknown group '{other}'"))),
            },
            _ => Err(parse_err(at, "expected a group name")),
        }
    }

    fn paren_int(&mut self) -> Result<usize> {
        self.expect(Tok::LParen, "'('")?;
        let v = self.int()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(v)
    }
}
