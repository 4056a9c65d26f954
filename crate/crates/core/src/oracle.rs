//! Brute-force validators over finite boxes.
//!
//! Nothing here calls [`crate::graph::find_path`] or [`crate::monoid::meet`]:
//! paths are enumerated edge by edge and exponents are obtained by expanding
//! the defining products inside the box. Tests and the `verify` command use
//! these to check the main algorithms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{is_edge, Path, Vertex};
use crate::ideals::MaxIdealKey;
use crate::index_seq::IndexSeq;
use crate::monoid::{GcdResult, Monomial};
use crate::ordinal::Ordinal;
use crate::scheme::WeightScheme;

/// Per-position value bounds plus depth and branching limits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexBox {
    pub bounds: BTreeMap<Ordinal, u64>,
    pub depth: u64,
    pub branch: u64,
}

pub const DEFAULT_DEPTH: u64 = 3;
pub const DEFAULT_BRANCH: u64 = 6;

impl IndexBox {
    pub fn new(
        bounds: impl IntoIterator<Item = (Ordinal, u64)>,
        depth: Option<u64>,
        branch: Option<u64>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, b) in bounds {
            if p.is_zero() {
                return Err(Error::InvalidBox("position 0 cannot be bounded".into()));
            }
            if b == 0 {
                return Err(Error::InvalidBox(format!(
                    "bound for {p} must be at least 1"
                )));
            }
            if map.insert(p.clone(), b).is_some() {
                return Err(Error::InvalidBox(format!("position {p} bounded twice")));
            }
        }
        let depth = depth.unwrap_or(DEFAULT_DEPTH);
        let branch = branch.unwrap_or(DEFAULT_BRANCH);
        if depth == 0 || branch == 0 {
            return Err(Error::InvalidBox(
                "depth and branch must be at least 1".into(),
            ));
        }
        Ok(IndexBox {
            bounds: map,
            depth,
            branch,
        })
    }

    /// A small box adapted to `alpha`: a few natural positions and the first
    /// positions past each small limit.
    pub fn default_for(alpha: &Ordinal) -> Self {
        let candidates = ["1", "2", "3", "w", "w+1", "w*2", "w*2+1", "w^2", "w^2+1"];
        let finite = alpha.is_finite();
        let bound = if finite { 4 } else { 3 };
        let bounds = candidates
            .iter()
            .map(|s| s.parse::<Ordinal>().expect("literal"))
            .filter(|p| p < alpha)
            .map(|p| (p, bound));
        IndexBox::new(bounds, None, Some(if finite { 6 } else { 4 })).expect("valid box")
    }

    pub fn bound(&self, pos: &Ordinal) -> Option<u64> {
        self.bounds.get(pos).copied()
    }

    pub fn contains(&self, r: &IndexSeq) -> bool {
        r.entries().all(|(p, v)| match (self.bound(p), v.as_nat()) {
            (Some(b), Some(v)) => v <= b,
            _ => false,
        })
    }

    /// All height-0 indices inside the box.
    pub fn leaves(&self) -> Vec<IndexSeq> {
        let mut out = vec![IndexSeq::zero()];
        for (p, &b) in &self.bounds {
            let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
            for r in &out {
                for v in 0..=b {
                    next.push(r.add_e_nat(p, v).expect("natural component"));
                }
            }
            out = next;
        }
        out
    }

    /// Vertices of the given height whose index lies in the box.
    pub fn vertices_at(&self, height: &Ordinal) -> Vec<Vertex> {
        self.leaves()
            .into_iter()
            .filter_map(|r| Vertex::new(height.clone(), r).ok())
            .collect()
    }

    fn frozen_ok(&self, v: &Vertex) -> bool {
        v.index()
            .entries()
            .filter(|(p, _)| *p > v.height())
            .all(|(p, val)| matches!((self.bound(p), val.as_nat()), (Some(b), Some(x)) if x <= b))
    }
}

impl fmt::Display for IndexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (p, b) in &self.bounds {
            write!(f, "{p}<={b}, ")?;
        }
        write!(f, "depth<={}, branch<={}}}", self.depth, self.branch)
    }
}

impl FromStr for IndexBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_box(s)
    }
}

impl Serialize for IndexBox {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Limit ordinals below `beta` (and zero) whose CNF coefficients are at most
/// `branch`.
fn small_limits_below(beta: &Ordinal, branch: u64) -> Vec<Ordinal> {
    let top = beta.leading_exponent().unwrap_or(0);
    let mut out = vec![Ordinal::zero()];
    for e in (1..=top).rev() {
        let mut grown = Vec::new();
        for base in &out {
            if base.terms().last().is_some_and(|t| t.exponent <= e) {
                continue;
            }
            for c in 1..=branch {
                if let Ok(x) = base.add(&Ordinal::omega_pow_times(e, c)) {
                    if x < *beta {
                        grown.push(x);
                    }
                }
            }
        }
        out.extend(grown);
    }
    out.sort();
    out
}

/// Successor heights a limit vertex may step to inside the search bounds.
fn limit_targets(v: &Vertex, branch: u64) -> Vec<Ordinal> {
    let beta = v.height();
    let floor = v.own_component();
    let mut out = Vec::new();
    for d in small_limits_below(beta, branch) {
        for i in 1..=branch {
            let g = d.add_nat(i).expect("small");
            if g > floor && g < *beta {
                out.push(g);
            }
        }
    }
    out
}

/// Every path from `v` to `target` built from at most `depth` edges, with
/// successor steps `k <= branch` and limit steps to small successors.
pub fn brute_paths(v: &Vertex, target: &Vertex, bx: &IndexBox) -> Vec<Path> {
    fn go(
        cur: &Vertex,
        target: &Vertex,
        bx: &IndexBox,
        trail: &mut Vec<Vertex>,
        out: &mut Vec<Path>,
    ) {
        if cur == target {
            out.push(Path::new(trail.clone()).expect("edges checked"));
            return;
        }
        if cur.is_leaf() || cur.height() <= target.height() || trail.len() as u64 > bx.depth {
            return;
        }
        let next: Vec<Vertex> = if cur.height().is_successor() {
            (1..=bx.branch)
                .filter_map(|k| cur.successor_child(k).ok())
                .collect()
        } else {
            limit_targets(cur, bx.branch)
                .iter()
                .map(|g| cur.limit_child(g))
                .collect()
        };
        for n in next {
            debug_assert!(is_edge(cur, &n));
            trail.push(n.clone());
            go(&n, target, bx, trail, out);
            trail.pop();
        }
    }
    let mut out = Vec::new();
    let mut trail = vec![v.clone()];
    go(v, target, bx, &mut trail, &mut out);
    out
}

/// Whether every edge of `p` is one that [`brute_paths`] would try.
pub fn path_within(p: &Path, bx: &IndexBox) -> bool {
    p.len() as u64 <= bx.depth
        && p.vertices().windows(2).all(|w| {
            let h = w[0].height();
            if h.is_successor() {
                let k = w[1].index().get(h).as_nat().unwrap_or(0)
                    - w[0].own_component().as_nat().unwrap_or(0);
                k <= bx.branch
            } else {
                limit_targets(&w[0], bx.branch).contains(w[1].height())
            }
        })
}

/// One rewrite step on a vertex of positive height: the first child taken out
/// of the defining product, and the residual vertex.
fn expand_once(v: &Vertex, scheme: &WeightScheme) -> Result<(Vertex, u64, Vertex)> {
    let h = v.height();
    if v.is_leaf() {
        return Err(Error::Leaf(v.to_string()));
    }
    let w = scheme.weight(h)?;
    let child = if h.is_successor() {
        v.successor_child(1)?
    } else {
        v.limit_child(&v.own_component().successor()?)
    };
    let residual = Vertex::new(h.clone(), v.index().add_e_nat(h, 1)?)?;
    Ok((child, w, residual))
}

/// Applies `steps` rewrites `X[b; t] = child^w * X[b; t + e_b]` to the
/// residual top vertex.
pub fn peel(v: &Vertex, steps: u64, scheme: &WeightScheme) -> Result<Monomial> {
    if v.is_leaf() {
        return Err(Error::Leaf(v.to_string()));
    }
    let mut out = Monomial::one();
    let mut top = v.clone();
    for _ in 0..steps {
        let (child, w, residual) = expand_once(&top, scheme)?;
        out.insert(child, w)?;
        top = residual;
    }
    out.insert(top, 1)?;
    Ok(out)
}

/// Leaf exponents of `m` at every leaf inside the box (zero entries omitted),
/// by expanding the defining products restricted to the box.
pub fn window_exponents(
    m: &Monomial,
    bx: &IndexBox,
    scheme: &WeightScheme,
) -> Result<BTreeMap<IndexSeq, u64>> {
    fn expand(
        v: &Vertex,
        weight: u64,
        bx: &IndexBox,
        scheme: &WeightScheme,
        out: &mut BTreeMap<IndexSeq, u64>,
    ) -> Result<()> {
        if !bx.frozen_ok(v) {
            return Ok(());
        }
        if v.is_leaf() {
            if bx.contains(v.index()) {
                let e = out.entry(v.index().clone()).or_insert(0);
                *e = e
                    .checked_add(weight)
                    .ok_or_else(|| Error::Overflow("window exponent".into()))?;
            }
            return Ok(());
        }
        let h = v.height();
        let w = weight
            .checked_mul(scheme.weight(h)?)
            .ok_or_else(|| Error::Overflow("window exponent".into()))?;
        if h.is_successor() {
            let Some(bound) = bx.bound(h) else {
                return Ok(());
            };
            let have = v.own_component().as_nat().unwrap_or(0);
            for k in 1..=bound.saturating_sub(have) {
                expand(&v.successor_child(k)?, w, bx, scheme, out)?;
            }
        } else {
            let floor = v.own_component();
            for g in bx.bounds.keys() {
                if g.is_successor() && *g > floor && g < h {
                    expand(&v.limit_child(g), w, bx, scheme, out)?;
                }
            }
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    for (v, mult) in m.factors() {
        expand(v, mult, bx, scheme, &mut out)?;
    }
    Ok(out)
}

fn at(w: &BTreeMap<IndexSeq, u64>, r: &IndexSeq) -> u64 {
    w.get(r).copied().unwrap_or(0)
}

/// Checks a gcd result against the leaf exponents inside the box: the gcd is
/// the pointwise minimum, each input is gcd times its quotient, and the two
/// quotients are never both positive at a leaf.
pub fn verify_gcd(
    res: &GcdResult,
    x: &Monomial,
    y: &Monomial,
    bx: &IndexBox,
    scheme: &WeightScheme,
) -> Result<bool> {
    let ex = window_exponents(x, bx, scheme)?;
    let ey = window_exponents(y, bx, scheme)?;
    let eg = window_exponents(&res.gcd, bx, scheme)?;
    let el = window_exponents(&res.left_quotient, bx, scheme)?;
    let er = window_exponents(&res.right_quotient, bx, scheme)?;
    let mut leaves: Vec<&IndexSeq> = ex.keys().chain(ey.keys()).chain(eg.keys()).collect();
    leaves.extend(el.keys().chain(er.keys()));
    Ok(leaves.into_iter().all(|r| {
        let (a, b, g, l, q) = (at(&ex, r), at(&ey, r), at(&eg, r), at(&el, r), at(&er, r));
        g == a.min(b) && a == g + l && b == g + q && (l == 0 || q == 0)
    }))
}

/// A leaf inside the box dividing both monomials.
pub fn common_leaf(
    a: &Monomial,
    b: &Monomial,
    bx: &IndexBox,
    scheme: &WeightScheme,
) -> Result<Option<IndexSeq>> {
    let ea = window_exponents(a, bx, scheme)?;
    let eb = window_exponents(b, bx, scheme)?;
    Ok(ea.into_keys().find(|r| eb.contains_key(r)))
}

/// Valuation of `m` at `key` read off the box: the largest ratio between the
/// exponents of `m` and of the key's base generator over leaves of the base.
/// `None` when the box holds no such leaf or a ratio is not integral.
pub fn window_valuation(
    key: &MaxIdealKey,
    m: &Monomial,
    bx: &IndexBox,
    scheme: &WeightScheme,
) -> Result<Option<u64>> {
    let base = window_exponents(&key.base().into(), bx, scheme)?;
    let em = window_exponents(m, bx, scheme)?;
    let mut best = None;
    for (r, eb) in &base {
        let e = at(&em, r);
        if !e.is_multiple_of(*eb) {
            return Ok(None);
        }
        best = Some(best.unwrap_or(0).max(e / eb));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: WeightScheme = WeightScheme::Constant(2);

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }
    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }
    fn seq(s: &str) -> IndexSeq {
        s.parse().unwrap()
    }
    fn a3_box() -> IndexBox {
        "{1<=6, 2<=6, depth<=3, branch<=5}".parse().unwrap()
    }

    #[test]
    fn brute_path_examples() {
        let b = a3_box();
        let x = v("X[1; {1=1}]");
        assert_eq!(brute_paths(&x, &x, &b).len(), 1);
        assert_eq!(
            brute_paths(&v("X[2; {}]"), &v("X[0; {1=2, 2=3}]"), &b).len(),
            1
        );
        assert!(brute_paths(&v("X[1; {1=2, 2=1}]"), &v("X[0; {1=2, 2=1}]"), &b).is_empty());
    }

    #[test]
    fn small_limits() {
        let l = small_limits_below(&"w^2".parse().unwrap(), 2);
        let want: Vec<Ordinal> = ["0", "w", "w*2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(l, want);
        assert_eq!(small_limits_below(&"w*2+1".parse().unwrap(), 3).len(), 3);
    }

    #[test]
    fn peel_examples() {
        assert_eq!(
            peel(&v("X[1; {1=2}]"), 1, &TWO).unwrap(),
            m("X[0; {1=3}]^2 * X[1; {1=3}]")
        );
        assert_eq!(
            peel(&v("X[2; {2=4}]"), 1, &TWO).unwrap(),
            m("X[1; {2=5}]^2 * X[2; {2=5}]")
        );
        assert_eq!(
            peel(&v("X[w; {w=2}]"), 1, &TWO).unwrap(),
            m("X[3; {}]^2 * X[w; {w=3}]")
        );
        assert_eq!(peel(&v("X[1; {}]"), 0, &TWO).unwrap(), m("X[1; {}]"));
        assert!(peel(&v("X[0; {1=1}]"), 1, &TWO).is_err());
    }

    #[test]
    fn window_examples() {
        let b = a3_box();
        let w = window_exponents(&m("X[0; {1=2, 2=3}]"), &b, &TWO).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[&seq("{1=2, 2=3}")], 1);
        let w = window_exponents(&m("X[1; {1=2, 2=3}]"), &b, &TWO).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w
            .iter()
            .all(|(r, &e)| e == 2 && r.get(&Ordinal::from_nat(2)) == Ordinal::from_nat(3)));
        let w = window_exponents(&m("X[2; {}]"), &b, &TWO).unwrap();
        assert_eq!(w.len(), 36);
        assert!(w.values().all(|&e| e == 4));
    }

    #[test]
    fn verify_gcd_rejects_corruption() {
        let b = a3_box();
        let x = m("X[2; {}]");
        let y = m("X[1; {2=2}]");
        let good = crate::monoid::monomial_gcd(&x, &y, &TWO).unwrap();
        assert!(verify_gcd(&good, &x, &y, &b, &TWO).unwrap());
        let mut bad = good.clone();
        bad.gcd.insert(v("X[0; {1=1, 2=1}]"), 1).unwrap();
        assert!(!verify_gcd(&bad, &x, &y, &b, &TWO).unwrap());
    }

    #[test]
    fn box_leaves() {
        let b: IndexBox = "{1<=2, 2<=1}".parse().unwrap();
        assert_eq!(b.leaves().len(), 6);
        assert_eq!(b.depth, DEFAULT_DEPTH);
        assert!(b.contains(&seq("{1=2, 2=1}")));
        assert!(!b.contains(&seq("{1=3}")));
        assert!(!b.contains(&seq("{3=1}")));
    }
}
