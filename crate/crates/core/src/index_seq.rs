//! Finite-support index sequences, the bound `alpha`, the sets `U_beta` and
//! the truncations `tau_beta`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// A sequence with finitely many nonzero components, keyed by position.
///
/// Zero values are never stored, so map equality is sequence equality.
/// Structural invariants (positive positions, natural values at successor
/// positions) hold for every value; the bounds coming from `alpha` are checked
/// by [`Alpha::check_seq`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSeq {
    entries: BTreeMap<Ordinal, Ordinal>,
}

impl IndexSeq {
    pub fn zero() -> Self {
        IndexSeq::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Ordinal, Ordinal)>) -> Result<Self> {
        let mut seq = IndexSeq::zero();
        for (pos, val) in entries {
            if pos.is_zero() {
                return Err(Error::InvalidSequence("position 0 is not allowed".into()));
            }
            if pos.is_successor() && !val.is_finite() {
                return Err(Error::InvalidSequence(format!(
                    "successor position {pos} holds non-natural value {val}"
                )));
            }
            if seq.entries.contains_key(&pos) {
                return Err(Error::InvalidSequence(format!(
                    "position {pos} given twice"
                )));
            }
            if !val.is_zero() {
                seq.entries.insert(pos, val);
            }
        }
        Ok(seq)
    }

    /// Convenience constructor for natural positions and values.
    pub fn from_nats(entries: &[(u64, u64)]) -> Result<Self> {
        Self::from_entries(
            entries
                .iter()
                .map(|&(p, v)| (Ordinal::from_nat(p), Ordinal::from_nat(v))),
        )
    }

    pub fn get(&self, pos: &Ordinal) -> Ordinal {
        self.entries.get(pos).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Ordinal, &Ordinal)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Keeps exactly the entries at positions `> beta`.
    pub fn tau(&self, beta: &Ordinal) -> IndexSeq {
        IndexSeq {
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| *p > beta)
                .map(|(p, v)| (p.clone(), v.clone()))
                .collect(),
        }
    }

    /// `self + k * e_beta`.
    pub fn add_e(&self, beta: &Ordinal, k: &Ordinal) -> Result<IndexSeq> {
        if beta.is_zero() {
            return Err(Error::InvalidSequence("e_0 does not exist".into()));
        }
        let val = self.get(beta).add(k)?;
        if beta.is_successor() && !val.is_finite() {
            return Err(Error::Overflow(format!(
                "component {beta} would become {val}, which is not natural"
            )));
        }
        let mut out = self.clone();
        if val.is_zero() {
            out.entries.remove(beta);
        } else {
            out.entries.insert(beta.clone(), val);
        }
        Ok(out)
    }

    pub fn add_e_nat(&self, beta: &Ordinal, k: u64) -> Result<IndexSeq> {
        self.add_e(beta, &Ordinal::from_nat(k))
    }

    /// Replaces the component at `beta` (zero erases it).
    pub fn with(&self, beta: &Ordinal, val: Ordinal) -> Result<IndexSeq> {
        self.tau_except(beta).add_e(beta, &val)
    }

    fn tau_except(&self, beta: &Ordinal) -> IndexSeq {
        let mut out = self.clone();
        out.entries.remove(beta);
        out
    }

    /// The largest nonzero position strictly between `lo` and `hi`.
    pub fn max_position_between(&self, lo: &Ordinal, hi: &Ordinal) -> Option<&Ordinal> {
        self.entries
            .range(lo.clone()..hi.clone())
            .rev()
            .map(|(p, _)| p)
            .find(|p| *p > lo)
    }

    pub fn max_position(&self) -> Option<&Ordinal> {
        self.entries.keys().next_back()
    }
}

/// Membership of `t` in `U_beta`: no nonzero component below `beta`, and
/// `t_beta < beta` when `beta` is a limit.
pub fn in_u(beta: &Ordinal, t: &IndexSeq) -> bool {
    if t.entries.keys().any(|p| p < beta) {
        return false;
    }
    if beta.is_limit() && t.get(beta) >= *beta {
        return false;
    }
    true
}

impl fmt::Display for IndexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}={v}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for IndexSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_index_seq(s)
    }
}

impl Serialize for IndexSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IndexSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The global parameter `alpha >= 1`; vertices have heights below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alpha(Ordinal);

impl Alpha {
    pub fn new(alpha: Ordinal) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidAlpha("alpha must be at least 1".into()));
        }
        Ok(Alpha(alpha))
    }

    pub fn value(&self) -> &Ordinal {
        &self.0
    }

    /// `xi = max(w, alpha)`, the strict bound on component values.
    pub fn xi(&self) -> Ordinal {
        std::cmp::max(Ordinal::omega(), self.0.clone())
    }

    pub fn check_seq(&self, t: &IndexSeq) -> Result<()> {
        let xi = self.xi();
        for (p, v) in t.entries() {
            if *p >= self.0 {
                return Err(Error::InvalidSequence(format!(
                    "position {p} is not below alpha = {}",
                    self.0
                )));
            }
            if *v >= xi {
                return Err(Error::InvalidSequence(format!(
                    "value {v} at position {p} is not below xi = {xi}"
                )));
            }
        }
        Ok(())
    }

    pub fn check_height(&self, h: &Ordinal) -> Result<()> {
        if *h >= self.0 {
            return Err(Error::InvalidVertex(format!(
                "height {h} is not below alpha = {}",
                self.0
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }
    fn seq(s: &str) -> IndexSeq {
        s.parse().unwrap()
    }

    #[test]
    fn tau_examples() {
        let t = seq("{1=2, 2=1}");
        assert_eq!(t.tau(&o("1")), seq("{2=1}"));
        assert_eq!(t.tau(&o("0")), t);
        assert_eq!(seq("{3=5, w=2}").tau(&o("w")), IndexSeq::zero());
    }

    #[test]
    fn add_e_examples() {
        assert_eq!(
            IndexSeq::zero().add_e_nat(&o("1"), 1).unwrap(),
            seq("{1=1}")
        );
        assert_eq!(
            seq("{1=2, 2=1}").add_e_nat(&o("1"), 3).unwrap(),
            seq("{1=5, 2=1}")
        );
        assert_eq!(
            IndexSeq::zero().add_e(&o("w"), &o("w+1")).unwrap(),
            seq("{w=w+1}")
        );
        assert!(matches!(
            seq("{1=2}").add_e(&o("1"), &o("w")),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn in_u_examples() {
        assert!(in_u(&o("3"), &seq("{3=4, 7=1, w=w}")));
        assert!(in_u(&o("w"), &seq("{w=3}")));
        assert!(!in_u(&o("w"), &seq("{w=w}")));
        assert!(!in_u(&o("2"), &seq("{1=1}")));
    }

    #[test]
    fn alpha_bounds() {
        let a = Alpha::new(o("w+1")).unwrap();
        assert!(a.check_seq(&seq("{w=w}")).is_ok());
        assert!(a.check_seq(&seq("{w=w+1}")).is_err());
        let a3 = Alpha::new(o("3")).unwrap();
        assert!(a3.check_seq(&seq("{3=1}")).is_err());
        assert!(a3.check_seq(&seq("{2=40}")).is_ok());
        assert!(Alpha::new(o("0")).is_err());
    }

    #[test]
    fn structural_errors() {
        assert!("{0=1}".parse::<IndexSeq>().is_err());
        assert!("{1=w}".parse::<IndexSeq>().is_err());
        assert!("{1=1, 1=2}".parse::<IndexSeq>().is_err());
        assert_eq!(seq("{1=0, 2=3}"), seq("{2=3}"));
    }

    #[test]
    fn max_position_between() {
        let t = seq("{1=1, 3=2, w=1}");
        assert_eq!(t.max_position_between(&o("1"), &o("w")), Some(&o("3")));
        assert_eq!(t.max_position_between(&o("3"), &o("w")), None);
        assert_eq!(t.max_position_between(&o("0"), &o("3")), Some(&o("1")));
    }
}
