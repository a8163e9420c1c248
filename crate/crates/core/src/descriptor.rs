//! Coefficient descriptors: a small expression language for the objects
//! whose Ext is charted.
//!
//! ```text
//! expr   := factor (('⊗' | '*') factor)*
//! factor := 'S^' int factor | '(' expr ')' | atom
//! atom   := f2 | h8 | h8v18 | bo:i | tmfbg:j | abar:N | a2qa1
//! ```
//!
//! `h8` and `h8v18` are cell objects; at most one may appear. Everything
//! else is a finite module, and suspensions act on the module part.

use std::sync::Arc;

use thiserror::Error;

use crate::comod::{FiniteModule, ModuleError};
use crate::hopf::{Algebra, Profile};
use crate::resolve::{ext_cell, ext_f2, ext_module, h8, h8v18, ChartOptions, ExtChart, FreeResolution, ResolveError};

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("at most one cell object (h8, h8v18) may appear in a tensor product")]
    TwoCellObjects,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    F2,
    H8,
    H8v18,
    Bo(u32),
    TmfBg(u32),
    Abar(u32),
    A2QA1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Atom(Atom),
    Suspend(i32, Box<Descriptor>),
    Tensor(Vec<Descriptor>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DescriptorError> {
        Err(DescriptorError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn int(&mut self) -> Result<i64, DescriptorError> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .count();
        match r[..len].parse() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<Descriptor, DescriptorError> {
        let mut parts = vec![self.factor()?];
        while self.eat("⊗") || self.eat("*") {
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Descriptor::Tensor(parts) })
    }

    fn factor(&mut self) -> Result<Descriptor, DescriptorError> {
        if self.eat("S^") || self.eat("Σ^") {
            let k = self.int()?;
            return Ok(Descriptor::Suspend(k as i32, Box::new(self.factor()?)));
        }
        if self.eat("(") {
            let e = self.expr()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        self.atom().map(Descriptor::Atom)
    }

    fn atom(&mut self) -> Result<Atom, DescriptorError> {
        self.skip_ws();
        let indexed = |p: &mut Self, f: fn(u32) -> Atom| -> Result<Atom, DescriptorError> {
            let v = p.int()?;
            u32::try_from(v).map(f).or_else(|_| p.err("index must be non-negative"))
        };
        for (word, atom) in [("h8v18", Atom::H8v18), ("h8", Atom::H8), ("f2", Atom::F2), ("a2qa1", Atom::A2QA1)] {
            if self.eat(word) {
                return Ok(atom);
            }
        }
        if self.eat("bo:") {
            return indexed(self, Atom::Bo);
        }
        if self.eat("tmfbg:") {
            return indexed(self, Atom::TmfBg);
        }
        if self.eat("abar:") {
            return indexed(self, Atom::Abar);
        }
        self.err("unknown atom")
    }
}

impl Descriptor {
    pub fn parse(text: &str) -> Result<Descriptor, DescriptorError> {
        let mut p = Parser { src: text, pos: 0 };
        let d = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return p.err("trailing input");
        }
        if d.cell_count() > 1 {
            return Err(DescriptorError::TwoCellObjects);
        }
        Ok(d)
    }

    fn cell_count(&self) -> usize {
        match self {
            Descriptor::Atom(Atom::H8 | Atom::H8v18) => 1,
            Descriptor::Atom(_) => 0,
            Descriptor::Suspend(_, d) => d.cell_count(),
            Descriptor::Tensor(v) => v.iter().map(Descriptor::cell_count).sum(),
        }
    }

    fn cell(&self) -> Option<Atom> {
        match self {
            Descriptor::Atom(a @ (Atom::H8 | Atom::H8v18)) => Some(a.clone()),
            Descriptor::Atom(_) => None,
            Descriptor::Suspend(_, d) => d.cell(),
            Descriptor::Tensor(v) => v.iter().find_map(Descriptor::cell),
        }
    }

    /// Module part over `alg`; `None` when it is `F₂` in degree 0.
    fn module(&self, alg: &Arc<Algebra>) -> Result<Option<FiniteModule>, DescriptorError> {
        Ok(match self {
            Descriptor::Atom(a) => match a {
                Atom::F2 | Atom::H8 | Atom::H8v18 => None,
                Atom::Bo(i) => Some(FiniteModule::bo(alg, *i)?),
                Atom::TmfBg(j) => Some(FiniteModule::tmf_bg(alg, *j)?),
                Atom::Abar(n) => Some(FiniteModule::abar_truncation(alg, *n)?),
                Atom::A2QA1 => Some(FiniteModule::quotient_hopf_module(alg, &Profile::a(1))?),
            },
            Descriptor::Suspend(k, d) => {
                let inner = match d.module(alg)? {
                    Some(m) => m,
                    None => FiniteModule::trivial(alg)?,
                };
                Some(inner.suspend(*k))
            }
            Descriptor::Tensor(v) => {
                let mut acc: Option<FiniteModule> = None;
                for d in v {
                    if let Some(m) = d.module(alg)? {
                        acc = Some(match acc {
                            Some(a) => a.tensor(&m)?,
                            None => m,
                        });
                    }
                }
                acc
            }
        })
    }

    /// Ext chart of the described object over the resolution's algebra.
    pub fn chart(&self, res: &FreeResolution, opts: &ChartOptions) -> Result<ExtChart, DescriptorError> {
        let alg = res.algebra().clone();
        let m = self.module(&alg)?;
        let mut chart = match self.cell() {
            Some(Atom::H8) => ext_cell(res, &h8(res)?, m.as_ref(), opts)?,
            Some(_) => {
                let (x, sel) = h8v18(res)?;
                let mut c = ext_cell(res, &x, m.as_ref(), opts)?;
                c.notes.push(format!("self-map {}", sel.describe()));
                c
            }
            None => match m {
                Some(m) => ext_module(res, &m, opts)?,
                None => ext_f2(res, opts)?,
            },
        };
        chart.descriptor = self.to_string();
        Ok(chart)
    }
}

impl std::fmt::Display for Descriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Descriptor::Atom(a) => match a {
                Atom::F2 => write!(f, "f2"),
                Atom::H8 => write!(f, "h8"),
                Atom::H8v18 => write!(f, "h8v18"),
                Atom::Bo(i) => write!(f, "bo:{i}"),
                Atom::TmfBg(j) => write!(f, "tmfbg:{j}"),
                Atom::Abar(n) => write!(f, "abar:{n}"),
                Atom::A2QA1 => write!(f, "a2qa1"),
            },
            Descriptor::Suspend(k, d) => match **d {
                Descriptor::Tensor(_) => write!(f, "S^{k}({d})"),
                _ => write!(f, "S^{k}{d}"),
            },
            Descriptor::Tensor(v) => {
                let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
                write!(f, "{}", parts.join(" ⊗ "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_atoms_and_products() {
        assert_eq!(Descriptor::parse("f2").unwrap(), Descriptor::Atom(Atom::F2));
        let d = Descriptor::parse("bo:1 ⊗ h8v18").unwrap();
        assert_eq!(d, Descriptor::Tensor(vec![Descriptor::Atom(Atom::Bo(1)), Descriptor::Atom(Atom::H8v18)]));
        let e = Descriptor::parse("S^16 (bo:2 * h8)").unwrap();
        assert_eq!(e.to_string(), "S^16(bo:2 ⊗ h8)");
        assert_eq!(Descriptor::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Descriptor::parse("bo:").is_err());
        assert!(Descriptor::parse("h9").is_err());
        assert!(Descriptor::parse("f2 f2").is_err());
        assert!(Descriptor::parse("(h8").is_err());
        assert!(Descriptor::parse("bo:-1").is_err());
        assert!(matches!(Descriptor::parse("h8 ⊗ h8v18"), Err(DescriptorError::TwoCellObjects)));
    }
}
