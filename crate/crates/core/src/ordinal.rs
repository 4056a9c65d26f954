//! Ordinals below `w^w` in Cantor normal form.
//!
//! An ordinal is stored as a strictly decreasing list of `w^e * c` terms with
//! natural exponents and positive coefficients. The empty list is zero. Every
//! height, position and component value of the construction lives here.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u32,
    pub coefficient: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor { predecessor: Ordinal },
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        Self::omega_pow_times(0, n)
    }

    pub fn omega() -> Self {
        Self::omega_pow_times(1, 1)
    }

    pub fn omega_pow(exponent: u32) -> Self {
        Self::omega_pow_times(exponent, 1)
    }

    /// `w^exponent * coefficient`; zero when the coefficient is zero.
    pub fn omega_pow_times(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds an ordinal from an already normalized term list.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Result<Self> {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        for pair in terms.windows(2) {
            if pair[0].exponent <= pair[1].exponent {
                return Err(Error::OrdinalCap(
                    "exponents must be strictly decreasing".into(),
                ));
            }
        }
        if terms.iter().any(|t| t.coefficient == 0) {
            return Err(Error::OrdinalCap("coefficients must be positive".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [Term {
                exponent: 0,
                coefficient,
            }] => Some(*coefficient),
            _ => None,
        }
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exponent)
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some(last) if last.exponent == 0 => {
                let mut terms = self.terms.clone();
                let tail = terms.last_mut().unwrap();
                tail.coefficient -= 1;
                if tail.coefficient == 0 {
                    terms.pop();
                }
                OrdinalKind::Successor {
                    predecessor: Ordinal { terms },
                }
            }
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some(t) if t.exponent == 0)
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(t) if t.exponent > 0)
    }

    pub fn predecessor(&self) -> Option<Ordinal> {
        match self.classify() {
            OrdinalKind::Successor { predecessor } => Some(predecessor),
            _ => None,
        }
    }

    /// Writes `self = limit + k` with `limit` a limit ordinal or zero.
    pub fn split_limit(&self) -> (Ordinal, u64) {
        match self.terms.last() {
            Some(last) if last.exponent == 0 => {
                let limit = Ordinal {
                    terms: self.terms[..self.terms.len() - 1].to_vec(),
                };
                (limit, last.coefficient)
            }
            _ => (self.clone(), 0),
        }
    }

    pub fn successor(&self) -> Result<Ordinal> {
        self.add_nat(1)
    }

    pub fn add_nat(&self, k: u64) -> Result<Ordinal> {
        if k == 0 {
            return Ok(self.clone());
        }
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some(last) if last.exponent == 0 => {
                last.coefficient = last
                    .coefficient
                    .checked_add(k)
                    .ok_or_else(|| Error::Overflow(format!("{self} + {k}")))?;
            }
            _ => terms.push(Term {
                exponent: 0,
                coefficient: k,
            }),
        }
        Ok(Ordinal { terms })
    }

    /// Ordinal sum `self + rhs` (not commutative: `1 + w = w`).
    pub fn add(&self, rhs: &Ordinal) -> Result<Ordinal> {
        let Some(head) = rhs.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .copied()
            .take_while(|t| t.exponent >= head.exponent)
            .collect();
        let mut rest = rhs.terms.iter().copied();
        if let Some(last) = terms.last_mut() {
            if last.exponent == head.exponent {
                last.coefficient = last
                    .coefficient
                    .checked_add(head.coefficient)
                    .ok_or_else(|| Error::Overflow(format!("{self} + {rhs}")))?;
                rest.next();
            }
        }
        terms.extend(rest);
        Ok(Ordinal { terms })
    }

    /// The `n`-th element of the canonical fundamental sequence of a limit
    /// ordinal: for `a + w^e` it is `a + w^(e-1) * n`.
    pub fn fundamental(&self, n: u64) -> Option<Ordinal> {
        let last = self.terms.last()?;
        if last.exponent == 0 {
            return None;
        }
        let mut terms = self.terms.clone();
        let tail = terms.last_mut().unwrap();
        tail.coefficient -= 1;
        if tail.coefficient == 0 {
            terms.pop();
        }
        let base = Ordinal { terms };
        base.add(&Ordinal::omega_pow_times(last.exponent - 1, n))
            .ok()
    }

    /// The first `count` successor ordinals strictly between `from` and `self`.
    pub fn successors_below(&self, from: &Ordinal, count: usize) -> Vec<Ordinal> {
        let mut out = Vec::with_capacity(count.min(64));
        let mut next = from.clone();
        while out.len() < count {
            next = match next.successor() {
                Ok(n) => n,
                Err(_) => break,
            };
            if next >= *self {
                break;
            }
            out.push(next.clone());
        }
        out
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from_nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (t.exponent, t.coefficient) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_ordinal(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
