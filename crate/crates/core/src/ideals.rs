//! Maximal ideals `M[beta; tau]` of the localized domain, membership,
//! valuations and ideal functions of finitely generated monomial ideals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::index_seq::{in_u, IndexSeq};
use crate::monoid::{meet, Monomial};
use crate::ordinal::Ordinal;
use crate::scheme::WeightScheme;

/// Canonical name `(beta, tau_beta(t))` of a maximal ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaxIdealKey {
    height: Ordinal,
    tau_index: IndexSeq,
}

impl MaxIdealKey {
    pub fn new(height: Ordinal, tau_index: IndexSeq) -> Result<Self> {
        if !height.is_zero() {
            if let Some((p, _)) = tau_index.entries().find(|(p, _)| **p <= height) {
                return Err(Error::InvalidKey(format!(
                    "tau index {tau_index} has an entry at position {p} <= {height}"
                )));
            }
        }
        Ok(MaxIdealKey { height, tau_index })
    }

    pub fn height(&self) -> &Ordinal {
        &self.height
    }

    pub fn tau_index(&self) -> &IndexSeq {
        &self.tau_index
    }

    /// `X[beta; tau]`, the largest generator (the first in canonical order).
    pub fn base(&self) -> Vertex {
        Vertex::raw(self.height.clone(), self.tau_index.clone())
    }
}

impl fmt::Display for MaxIdealKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M[{}; {}]", self.height, self.tau_index)
    }
}

impl FromStr for MaxIdealKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_key(s)
    }
}

impl Serialize for MaxIdealKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MaxIdealKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finitely generated ideal given by monomial generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgMonomialIdeal {
    generators: Vec<Monomial>,
}

impl FgMonomialIdeal {
    pub fn new(generators: Vec<Monomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Config(
                "an ideal needs at least one generator".into(),
            ));
        }
        Ok(FgMonomialIdeal { generators })
    }

    pub fn principal(m: Monomial) -> Self {
        FgMonomialIdeal {
            generators: vec![m],
        }
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }
}

impl fmt::Display for FgMonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("( ")?;
        for (i, m) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(" )")
    }
}

impl FromStr for FgMonomialIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_ideal(s)
    }
}

impl Serialize for FgMonomialIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn key_of(beta: &Ordinal, t: &IndexSeq) -> Result<MaxIdealKey> {
    if !in_u(beta, t) {
        return Err(Error::InvalidKey(format!("{t} is not in U_{beta}")));
    }
    MaxIdealKey::new(beta.clone(), t.tau(beta))
}

pub fn key_of_vertex(v: &Vertex) -> MaxIdealKey {
    MaxIdealKey {
        height: v.height().clone(),
        tau_index: v.index().tau(v.height()),
    }
}

/// The first `budget` generators `X[beta; tau + i e_beta]`, `i = 0, 1, ...`.
/// Each divides the previous one, so they span an ascending chain of
/// principal ideals.
pub fn generators(key: &MaxIdealKey, budget: usize) -> Result<Vec<Vertex>> {
    if key.height.is_zero() {
        return Ok(vec![key.base()]);
    }
    (0..budget as u64)
        .map(|i| {
            Ok(Vertex::raw(
                key.height.clone(),
                key.tau_index.add_e_nat(&key.height, i)?,
            ))
        })
        .collect()
}

/// Valuation of one vertex together with the generator that realizes it.
fn vertex_valuation(
    key: &MaxIdealKey,
    v: &Vertex,
    scheme: &WeightScheme,
) -> Result<Option<(u64, Vertex)>> {
    let beta = &key.height;
    if v.height() < beta {
        return Ok(None);
    }
    if v.height() == beta {
        let same = if beta.is_zero() {
            *v.index() == key.tau_index
        } else {
            v.index().tau(beta) == key.tau_index
        };
        return Ok(same.then(|| (1, v.clone())));
    }
    Ok(meet(v, &key.base(), scheme)?.map(|m| (m.multiplicity, m.vertex)))
}

/// `v_M(m)`: the exponent of a uniformizer of `M` in `m`.
pub fn valuation(key: &MaxIdealKey, m: &Monomial, scheme: &WeightScheme) -> Result<u64> {
    let mut total: u64 = 0;
    for (v, mult) in m.factors() {
        if let Some((e, _)) = vertex_valuation(key, v, scheme)? {
            total = e
                .checked_mul(mult)
                .and_then(|x| total.checked_add(x))
                .ok_or_else(|| Error::Overflow(format!("valuation of {m} at {key}")))?;
        }
    }
    Ok(total)
}

/// A generator of `M` dividing `m`, if any.
pub fn membership_witness(
    key: &MaxIdealKey,
    m: &Monomial,
    scheme: &WeightScheme,
) -> Result<Option<Vertex>> {
    for (v, _) in m.factors() {
        if let Some((_, g)) = vertex_valuation(key, v, scheme)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn contains(key: &MaxIdealKey, m: &Monomial, scheme: &WeightScheme) -> Result<bool> {
    Ok(membership_witness(key, m, scheme)?.is_some())
}

/// `nu_I(M) = min over generators of v_M`.
pub fn ideal_function(
    ideal: &FgMonomialIdeal,
    key: &MaxIdealKey,
    scheme: &WeightScheme,
) -> Result<u64> {
    let mut best = u64::MAX;
    for g in &ideal.generators {
        best = best.min(valuation(key, g, scheme)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{vertex_divides, vertex_quotient};

    const TWO: WeightScheme = WeightScheme::Constant(2);

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }
    fn seq(s: &str) -> IndexSeq {
        s.parse().unwrap()
    }
    fn k(s: &str) -> MaxIdealKey {
        s.parse().unwrap()
    }
    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn keys() {
        assert_eq!(
            key_of(&o("1"), &seq("{1=7, 2=3}")).unwrap(),
            k("M[1; {2=3}]")
        );
        assert_eq!(key_of(&o("2"), &seq("{2=9}")).unwrap(), k("M[2; {}]"));
        assert_eq!(
            key_of(&o("0"), &seq("{1=1, 2=2}")).unwrap(),
            k("M[0; {1=1, 2=2}]")
        );
        assert!(key_of(&o("2"), &seq("{1=1}")).is_err());
    }

    #[test]
    fn generator_lists() {
        let g = generators(&k("M[1; {2=4}]"), 3).unwrap();
        let want: Vec<Vertex> = ["X[1; {2=4}]", "X[1; {1=1, 2=4}]", "X[1; {1=2, 2=4}]"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(g, want);
        assert_eq!(
            generators(&k("M[2; {}]"), 2).unwrap()[1],
            "X[2; {2=1}]".parse().unwrap()
        );
        assert_eq!(generators(&k("M[0; {1=1}]"), 9).unwrap().len(), 1);
        for key in [k("M[1; {2=4}]"), k("M[w; {w+1=2}]")] {
            let g = generators(&key, 4).unwrap();
            for w in g.windows(2) {
                assert!(vertex_divides(&w[1], &w[0], &TWO).unwrap());
                let q = vertex_quotient(&w[0], &w[1], &TWO).unwrap();
                assert!(q.factors().all(|(v, _)| v.height() < key.height()));
            }
        }
    }

    #[test]
    fn membership() {
        assert!(contains(&k("M[1; {2=4}]"), &m("X[1; {1=3, 2=4}]"), &TWO).unwrap());
        assert!(!contains(&k("M[1; {2=4}]"), &m("X[0; {1=3, 2=4}]"), &TWO).unwrap());
        assert!(contains(&k("M[1; {2=3}]"), &m("X[2; {2=2}]"), &TWO).unwrap());
        assert!(!contains(&k("M[1; {2=2}]"), &m("X[2; {2=2}]"), &TWO).unwrap());
        assert!(!contains(&k("M[1; {2=2}]"), &Monomial::one(), &TWO).unwrap());
    }

    #[test]
    fn valuations() {
        for n in 0..4 {
            let w = m(&format!("X[2; {{2={n}}}]"));
            assert_eq!(valuation(&k("M[2; {}]"), &w, &TWO).unwrap(), 1);
            for b in n + 1..n + 4 {
                let key = k(&format!("M[1; {{2={b}}}]"));
                assert_eq!(valuation(&key, &w, &TWO).unwrap(), 2);
            }
        }
        let z = m("X[1; {1=1, 2=3}]");
        assert_eq!(valuation(&k("M[0; {1=2, 2=3}]"), &z, &TWO).unwrap(), 2);
        assert_eq!(valuation(&k("M[0; {1=1, 2=3}]"), &z, &TWO).unwrap(), 0);
        assert_eq!(
            valuation(&k("M[w; {}]"), &m("X[w*2; {}]"), &TWO).unwrap(),
            1
        );
    }

    #[test]
    fn ideal_functions() {
        let i = "( X[1; {2=3}] )".parse::<FgMonomialIdeal>().unwrap();
        assert_eq!(ideal_function(&i, &k("M[1; {2=3}]"), &TWO).unwrap(), 1);
        assert_eq!(ideal_function(&i, &k("M[0; {1=2, 2=3}]"), &TWO).unwrap(), 2);
        assert_eq!(ideal_function(&i, &k("M[0; {2=3}]"), &TWO).unwrap(), 0);
        assert_eq!(ideal_function(&i, &k("M[2; {}]"), &TWO).unwrap(), 0);
        let j = "( X[0; {1=1}] ; X[0; {1=2}] )"
            .parse::<FgMonomialIdeal>()
            .unwrap();
        assert_eq!(ideal_function(&j, &k("M[0; {1=1}]"), &TWO).unwrap(), 0);
    }
}
