//! Monomials in the vertices and their divisibility theory.
//!
//! Every vertex is an infinite product of height-0 vertices, so a monomial is
//! determined by its exponent at each leaf. The core routine [`meet`] walks
//! the unique descent from a vertex toward a lower one and returns the
//! greatest common divisor together with exact cofactors. Monomial gcds align
//! the two factor lists with it until every cross pair is equal or coprime.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{find_path, Vertex};
use crate::index_seq::IndexSeq;
use crate::ordinal::Ordinal;
use crate::scheme::WeightScheme;

/// A finite multiset of vertices. Distinct multisets may be equal in the
/// monoid; use [`monomial_equal`] for semantic comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: BTreeMap<Vertex, u64>,
}

fn overflow(what: &str) -> Error {
    Error::Overflow(format!("multiplicity overflow in {what}"))
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_vertex(v: Vertex) -> Self {
        let mut m = Monomial::one();
        m.factors.insert(v, 1);
        m
    }

    pub fn from_vertices(vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut m = Monomial::one();
        for v in vs {
            m.insert(v, 1)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, v: Vertex, mult: u64) -> Result<()> {
        if mult == 0 {
            return Ok(());
        }
        let e = self.factors.entry(v).or_insert(0);
        *e = e.checked_add(mult).ok_or_else(|| overflow("insert"))?;
        Ok(())
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Vertex, u64)> {
        self.factors.iter().map(|(v, &m)| (v, m))
    }

    pub fn multiplicity(&self, v: &Vertex) -> u64 {
        self.factors.get(v).copied().unwrap_or(0)
    }

    /// Number of factors counted with multiplicity.
    pub fn degree(&self) -> u64 {
        self.factors.values().sum()
    }

    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn max_height(&self) -> Option<&Ordinal> {
        self.factors.keys().map(Vertex::height).max()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = self.clone();
        out.mul_assign_pow(other, 1)?;
        Ok(out)
    }

    pub fn pow(&self, k: u64) -> Result<Monomial> {
        let mut out = Monomial::one();
        out.mul_assign_pow(self, k)?;
        Ok(out)
    }

    /// `self *= other^k`.
    pub fn mul_assign_pow(&mut self, other: &Monomial, k: u64) -> Result<()> {
        for (v, m) in other.factors() {
            self.insert(
                v.clone(),
                m.checked_mul(k).ok_or_else(|| overflow("power"))?,
            )?;
        }
        Ok(())
    }

    fn remove(&mut self, v: &Vertex) -> u64 {
        self.factors.remove(v).unwrap_or(0)
    }

    /// Multiset difference; `other` must be a sub-multiset.
    fn minus(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, m) in other.factors() {
            let e = out.factors.get_mut(v).expect("sub-multiset");
            *e -= m;
            if *e == 0 {
                out.factors.remove(v);
            }
        }
        out
    }
}

impl From<Vertex> for Monomial {
    fn from(v: Vertex) -> Self {
        Monomial::from_vertex(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, m)) in self.factors().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{v}")?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_monomial(s)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdResult {
    pub gcd: Monomial,
    pub left_quotient: Monomial,
    pub right_quotient: Monomial,
}

/// Outcome of [`meet`]: `hi = vertex^multiplicity * hi_rest` and
/// `lo = vertex * lo_rest`, where neither rest shares a leaf with `vertex`
/// nor with each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meet {
    pub vertex: Vertex,
    pub multiplicity: u64,
    pub hi_rest: Monomial,
    pub lo_rest: Monomial,
}

/// `prod { X[e; rho]^w : e successor, lo < e <= hi }`, written with finitely
/// many factors. Successors below the limit part of `hi` collapse into a
/// single limit-height vertex.
pub fn interval_product(rho: &IndexSeq, lo: &Ordinal, hi: &Ordinal, w: u64) -> Result<Monomial> {
    let mut out = Monomial::one();
    if lo >= hi {
        return Ok(out);
    }
    let (delta, k) = hi.split_limit();
    let first = if delta <= *lo {
        lo.split_limit().1 + 1
    } else {
        out.insert(Vertex::raw(delta.clone(), rho.with(&delta, lo.clone())?), 1)?;
        1
    };
    for i in first..=k {
        out.insert(Vertex::raw(delta.add_nat(i)?, rho.clone()), w)?;
    }
    Ok(out)
}

/// The quotient `X[b; tau + small e_b] / X[b; tau + big e_b]` for
/// `small <= big`, as children of height below `b`.
fn same_height_quotient(
    beta: &Ordinal,
    tau: &IndexSeq,
    small: &Ordinal,
    big: &Ordinal,
    scheme: &WeightScheme,
) -> Result<Monomial> {
    let w = scheme.weight(beta)?;
    match beta.predecessor() {
        Some(p) => {
            let (s, b) = (small.as_nat().unwrap_or(0), big.as_nat().unwrap_or(0));
            let mut out = Monomial::one();
            for i in s + 1..=b {
                out.insert(Vertex::raw(p.clone(), tau.add_e_nat(beta, i)?), w)?;
            }
            Ok(out)
        }
        None => interval_product(tau, small, big, w),
    }
}

/// Cheap necessary condition for two vertices to share a leaf.
pub fn may_overlap(a: &Vertex, b: &Vertex) -> bool {
    let top = std::cmp::max(a.height(), b.height());
    a.index().tau(top) == b.index().tau(top)
}

/// Greatest common divisor of `hi` and `lo` (with `hi.height >= lo.height`)
/// by descending from `hi` toward `lo`. `None` when they share no leaf.
pub fn meet(hi: &Vertex, lo: &Vertex, scheme: &WeightScheme) -> Result<Option<Meet>> {
    let beta = lo.height();
    let t = lo.index();
    if hi.height() < beta {
        return Err(Error::InvalidVertex(format!(
            "meet expects {hi} to be at least as high as {lo}"
        )));
    }
    if !may_overlap(hi, lo) {
        return Ok(None);
    }
    let mut cur = hi.clone();
    let mut mult: u64 = 1;
    let mut rest = Monomial::one();
    while cur.height() > beta {
        let h = cur.height().clone();
        let w = scheme.weight(&h)?;
        let ww = mult.checked_mul(w).ok_or_else(|| overflow("meet"))?;
        if h.is_successor() {
            let want = t.get(&h).as_nat().unwrap_or(0);
            let have = cur.own_component().as_nat().unwrap_or(0);
            if want <= have {
                return Ok(None);
            }
            let k = want - have;
            for i in 1..k {
                rest.insert(cur.successor_child(i)?, ww)?;
            }
            rest.insert(Vertex::raw(h.clone(), cur.index().add_e_nat(&h, k)?), mult)?;
            cur = cur.successor_child(k)?;
            mult = ww;
            continue;
        }
        if !t.get(&h).is_zero() {
            return Ok(None);
        }
        let rho = cur.index().tau(&h);
        let a = cur.own_component();
        let eps = match t.max_position_between(beta, &h) {
            Some(eps) => eps.clone(),
            None if beta.is_successor() => beta.clone(),
            None if beta.is_zero() => return Ok(None),
            None => {
                // lo sits at a limit height strictly inside the interval of
                // successors below h: the meet is a tail of lo.
                if *beta <= a || rho != t.tau(beta) {
                    return Ok(None);
                }
                let tb = t.get(beta);
                let delta = std::cmp::max(a.clone(), tb.clone());
                let g = Vertex::raw(beta.clone(), rho.with(beta, delta.clone())?);
                rest.mul_assign_pow(&interval_product(&rho, &a, &delta, w)?, mult)?;
                rest.insert(Vertex::raw(h.clone(), rho.with(&h, beta.clone())?), mult)?;
                let lo_rest = interval_product(&rho, &tb, &delta, scheme.weight(beta)?)?;
                return Ok(Some(Meet {
                    vertex: g,
                    multiplicity: mult,
                    hi_rest: rest,
                    lo_rest,
                }));
            }
        };
        if !eps.is_successor() || eps <= a {
            return Ok(None);
        }
        let below = eps.predecessor().expect("successor");
        rest.mul_assign_pow(&interval_product(&rho, &a, &below, w)?, mult)?;
        rest.insert(Vertex::raw(h.clone(), rho.with(&h, eps.clone())?), mult)?;
        cur = Vertex::raw(eps, rho);
        mult = ww;
    }
    let tau = t.tau(beta);
    if cur.index().tau(beta) != tau {
        return Ok(None);
    }
    if beta.is_zero() {
        return Ok(Some(Meet {
            vertex: lo.clone(),
            multiplicity: mult,
            hi_rest: rest,
            lo_rest: Monomial::one(),
        }));
    }
    let (c, d) = (cur.own_component(), t.get(beta));
    if c <= d {
        let q = same_height_quotient(beta, &tau, &c, &d, scheme)?;
        rest.mul_assign_pow(&q, mult)?;
        Ok(Some(Meet {
            vertex: lo.clone(),
            multiplicity: mult,
            hi_rest: rest,
            lo_rest: Monomial::one(),
        }))
    } else {
        let q = same_height_quotient(beta, &tau, &d, &c, scheme)?;
        Ok(Some(Meet {
            vertex: cur,
            multiplicity: mult,
            hi_rest: rest,
            lo_rest: q,
        }))
    }
}

fn ordered_meet(a: &Vertex, b: &Vertex, scheme: &WeightScheme) -> Result<Option<(Meet, bool)>> {
    if a.height() >= b.height() {
        Ok(meet(a, b, scheme)?.map(|m| (m, true)))
    } else {
        Ok(meet(b, a, scheme)?.map(|m| (m, false)))
    }
}

/// Quotient of the high side of a meet: `g^(m-1) * hi_rest`.
fn hi_quotient(m: &Meet) -> Result<Monomial> {
    let mut q = m.hi_rest.clone();
    q.insert(m.vertex.clone(), m.multiplicity - 1)?;
    Ok(q)
}

pub fn vertex_gcd(a: &Vertex, b: &Vertex, scheme: &WeightScheme) -> Result<GcdResult> {
    if a == b {
        return Ok(GcdResult {
            gcd: a.clone().into(),
            left_quotient: Monomial::one(),
            right_quotient: Monomial::one(),
        });
    }
    Ok(match ordered_meet(a, b, scheme)? {
        None => GcdResult {
            gcd: Monomial::one(),
            left_quotient: a.clone().into(),
            right_quotient: b.clone().into(),
        },
        Some((m, a_is_hi)) => {
            let hq = hi_quotient(&m)?;
            let (left_quotient, right_quotient) = if a_is_hi {
                (hq, m.lo_rest)
            } else {
                (m.lo_rest, hq)
            };
            GcdResult {
                gcd: m.vertex.into(),
                left_quotient,
                right_quotient,
            }
        }
    })
}

/// Whether `a` divides `b`.
pub fn vertex_divides(a: &Vertex, b: &Vertex, scheme: &WeightScheme) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    if a.height() > b.height() {
        return Ok(false);
    }
    Ok(meet(b, a, scheme)?.is_some_and(|m| m.lo_rest.is_one()))
}

/// `b / a`, erroring when `a` does not divide `b`.
pub fn vertex_quotient(b: &Vertex, a: &Vertex, scheme: &WeightScheme) -> Result<Monomial> {
    let not_div = || Error::NotDivisible {
        divisor: a.to_string(),
        dividend: b.to_string(),
    };
    if a == b {
        return Ok(Monomial::one());
    }
    if a.height() > b.height() {
        return Err(not_div());
    }
    match meet(b, a, scheme)? {
        Some(m) if m.lo_rest.is_one() => hi_quotient(&m),
        _ => Err(not_div()),
    }
}

/// Exponent of the leaf `X[0; r]` in `v`: the product of edge weights along
/// the unique path, or 0 when there is none.
pub fn root_exponent(v: &Vertex, r: &IndexSeq, scheme: &WeightScheme) -> Result<u64> {
    let leaf = Vertex::new(Ordinal::zero(), r.clone())?;
    let Some(path) = find_path(v, &leaf) else {
        return Ok(0);
    };
    let mut e: u64 = 1;
    for u in &path.vertices()[..path.len()] {
        e = e
            .checked_mul(scheme.weight(u.height())?)
            .ok_or_else(|| overflow("root exponent"))?;
    }
    Ok(e)
}

/// Refinement rounds allowed in [`monomial_gcd`].
pub const ALIGN_BUDGET: usize = 200_000;

/// Replaces `v` (multiplicity `m`) in `side` by `g^(m*gm) * rest^m`.
fn substitute(side: &mut Monomial, v: &Vertex, g: &Vertex, gm: u64, rest: &Monomial) -> Result<()> {
    let m = side.remove(v);
    side.insert(g.clone(), m.checked_mul(gm).ok_or_else(|| overflow("gcd"))?)?;
    side.mul_assign_pow(rest, m)
}

fn find_overlap(
    x: &Monomial,
    y: &Monomial,
    scheme: &WeightScheme,
) -> Result<Option<(Vertex, Vertex, Meet, bool)>> {
    for a in x.factors.keys() {
        for b in y.factors.keys() {
            if a == b || !may_overlap(a, b) {
                continue;
            }
            if let Some((m, a_is_hi)) = ordered_meet(a, b, scheme)? {
                return Ok(Some((a.clone(), b.clone(), m, a_is_hi)));
            }
        }
    }
    Ok(None)
}

/// Greatest common divisor of two monomials with both cofactors.
///
/// The factor lists are refined until any two factors taken from opposite
/// sides are either equal or share no leaf; the gcd is then the common part
/// of the two multisets.
pub fn monomial_gcd(x: &Monomial, y: &Monomial, scheme: &WeightScheme) -> Result<GcdResult> {
    let mut a = x.clone();
    let mut b = y.clone();
    let mut rounds = 0;
    while let Some((va, vb, m, a_is_hi)) = find_overlap(&a, &b, scheme)? {
        rounds += 1;
        if rounds > ALIGN_BUDGET {
            return Err(Error::Budget(format!("gcd of {x} and {y}")));
        }
        let (hi_side, hi_v, lo_side, lo_v) = if a_is_hi {
            (&mut a, &va, &mut b, &vb)
        } else {
            (&mut b, &vb, &mut a, &va)
        };
        substitute(hi_side, hi_v, &m.vertex, m.multiplicity, &m.hi_rest)?;
        substitute(lo_side, lo_v, &m.vertex, 1, &m.lo_rest)?;
    }
    let mut gcd = Monomial::one();
    for (v, ma) in a.factors() {
        let mb = b.multiplicity(v);
        if mb > 0 {
            gcd.insert(v.clone(), ma.min(mb))?;
        }
    }
    Ok(GcdResult {
        left_quotient: a.minus(&gcd),
        right_quotient: b.minus(&gcd),
        gcd,
    })
}

/// Equality in the monoid.
pub fn monomial_equal(x: &Monomial, y: &Monomial, scheme: &WeightScheme) -> Result<bool> {
    if x == y {
        return Ok(true);
    }
    let g = monomial_gcd(x, y, scheme)?;
    Ok(g.left_quotient.is_one() && g.right_quotient.is_one())
}

/// Whether `x` divides `y`.
pub fn monomial_divides(x: &Monomial, y: &Monomial, scheme: &WeightScheme) -> Result<bool> {
    Ok(monomial_gcd(x, y, scheme)?.left_quotient.is_one())
}

/// The gcd of all monomials of a formal sum.
pub fn content(ms: &[Monomial], scheme: &WeightScheme) -> Result<Monomial> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::Config("content of an empty sum".into()))?;
    rest.iter().try_fold(first.clone(), |acc, m| {
        Ok(monomial_gcd(&acc, m, scheme)?.gcd)
    })
}
