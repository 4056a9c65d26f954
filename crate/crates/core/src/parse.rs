//! Hand-written recursive-descent parsers for every literal form.
//!
//! ```text
//! ordinal  := term ('+' term)*            term := 'w' ('^' nat)? ('*' nat)? | nat
//! seq      := '{' (ordinal '=' ordinal (',' ordinal '=' ordinal)*)? '}'
//! vertex   := 'X' '[' ordinal ';' seq ']'
//! monomial := '1' | factor ('*' factor)*  factor := vertex ('^' nat)?
//! key      := 'M' '[' ordinal ';' seq ']'
//! ideal    := '(' monomial (';' monomial)* ')'
//! box      := '{' bound (',' bound)* '}'  bound := (ordinal | 'depth' | 'branch') '<=' nat
//! ```
//!
//! Whitespace is allowed between tokens. Errors carry the byte offset.

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::ideals::{FgMonomialIdeal, MaxIdealKey};
use crate::index_seq::IndexSeq;
use crate::monoid::Monomial;
use crate::oracle::IndexBox;
use crate::ordinal::Ordinal;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&mut self, msg: impl Into<String>) -> Error {
        let mut msg = msg.into();
        match self.peek() {
            Some(c) => msg.push_str(&format!(", found '{c}'")),
            None => msg.push_str(", found end of input"),
        }
        Error::parse(self.pos, msg)
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a natural number"));
        }
        self.pos += digits;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "natural number too large"))
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let start = self.pos;
            let t = self.term()?;
            acc = acc
                .add(&t)
                .map_err(|e| Error::parse(start, e.to_string()))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal> {
        if self.eat('w') {
            let mut exponent = 1u32;
            if self.eat('^') {
                if self.peek() == Some('w') {
                    return Err(Error::OrdinalCap(format!(
                        "exponent at position {} is not natural",
                        self.pos
                    )));
                }
                let start = self.pos;
                let e = self.nat()?;
                exponent = u32::try_from(e)
                    .map_err(|_| Error::OrdinalCap(format!("exponent {e} at position {start}")))?;
            }
            let coefficient = if self.eat('*') { self.nat()? } else { 1 };
            Ok(Ordinal::omega_pow_times(exponent, coefficient))
        } else if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            Ok(Ordinal::from_nat(self.nat()?))
        } else {
            Err(self.error("expected 'w' or a natural number"))
        }
    }

    fn seq(&mut self) -> Result<IndexSeq> {
        let start = self.pos;
        self.expect('{')?;
        let mut entries = Vec::new();
        if !self.eat('}') {
            loop {
                let p = self.ordinal()?;
                self.expect('=')?;
                let v = self.ordinal()?;
                entries.push((p, v));
                if self.eat('}') {
                    break;
                }
                self.expect(',')?;
            }
        }
        IndexSeq::from_entries(entries).map_err(|e| Error::parse(start, e.to_string()))
    }

    fn bracket(&mut self, head: char) -> Result<(Ordinal, IndexSeq, usize)> {
        self.skip_ws();
        let start = self.pos;
        self.expect(head)?;
        self.expect('[')?;
        let h = self.ordinal()?;
        self.expect(';')?;
        let t = self.seq()?;
        self.expect(']')?;
        Ok((h, t, start))
    }

    fn vertex(&mut self) -> Result<Vertex> {
        let (h, t, start) = self.bracket('X')?;
        Vertex::new(h, t).map_err(|e| Error::parse(start, e.to_string()))
    }

    fn key(&mut self) -> Result<MaxIdealKey> {
        let (h, t, start) = self.bracket('M')?;
        MaxIdealKey::new(h, t).map_err(|e| Error::parse(start, e.to_string()))
    }

    fn monomial(&mut self) -> Result<Monomial> {
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok(Monomial::one());
        }
        let mut m = Monomial::one();
        loop {
            let v = self.vertex()?;
            let start = self.pos;
            let mult = if self.eat('^') { self.nat()? } else { 1 };
            if mult == 0 {
                return Err(Error::parse(start, "multiplicity must be positive"));
            }
            m.insert(v, mult)
                .map_err(|e| Error::parse(start, e.to_string()))?;
            if !self.eat('*') {
                break;
            }
        }
        Ok(m)
    }

    fn ideal(&mut self) -> Result<FgMonomialIdeal> {
        let start = self.pos;
        self.expect('(')?;
        let mut gens = vec![self.monomial()?];
        while self.eat(';') {
            gens.push(self.monomial()?);
        }
        self.expect(')')?;
        FgMonomialIdeal::new(gens).map_err(|e| Error::parse(start, e.to_string()))
    }

    fn index_box(&mut self) -> Result<IndexBox> {
        let start = self.pos;
        self.expect('{')?;
        let mut bounds = Vec::new();
        let mut depth = None;
        let mut branch = None;
        loop {
            if self.eat_str("depth") {
                self.expect_le()?;
                depth = Some(self.nat()?);
            } else if self.eat_str("branch") {
                self.expect_le()?;
                branch = Some(self.nat()?);
            } else {
                let p = self.ordinal()?;
                self.expect_le()?;
                bounds.push((p, self.nat()?));
            }
            if self.eat('}') {
                break;
            }
            self.expect(',')?;
        }
        IndexBox::new(bounds, depth, branch).map_err(|e| Error::parse(start, e.to_string()))
    }

    fn expect_le(&mut self) -> Result<()> {
        if self.eat_str("<=") {
            Ok(())
        } else {
            Err(self.error("expected '<='"))
        }
    }
}

fn whole<'a, T>(s: &'a str, f: impl FnOnce(&mut Cursor<'a>) -> Result<T>) -> Result<T> {
    let mut c = Cursor::new(s);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

pub fn parse_ordinal(s: &str) -> Result<Ordinal> {
    whole(s, Cursor::ordinal)
}

pub fn parse_index_seq(s: &str) -> Result<IndexSeq> {
    whole(s, Cursor::seq)
}

pub fn parse_vertex(s: &str) -> Result<Vertex> {
    whole(s, Cursor::vertex)
}

pub fn parse_monomial(s: &str) -> Result<Monomial> {
    whole(s, Cursor::monomial)
}

pub fn parse_key(s: &str) -> Result<MaxIdealKey> {
    whole(s, Cursor::key)
}

pub fn parse_ideal(s: &str) -> Result<FgMonomialIdeal> {
    whole(s, Cursor::ideal)
}

pub fn parse_box(s: &str) -> Result<IndexBox> {
    whole(s, Cursor::index_box)
}

/// Comma-separated list of naturals, e.g. `1,2,3`.
pub fn parse_nat_list(s: &str) -> Result<Vec<u64>> {
    whole(s, |c| {
        let mut out = vec![c.nat()?];
        while c.eat(',') {
            out.push(c.nat()?);
        }
        Ok(out)
    })
}
