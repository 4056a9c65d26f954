//! The directed graph on the vertices `X[beta; t]`.
//!
//! A successor-height vertex `X[g+1; t]` points to `X[g; t + k e_(g+1)]` for
//! every `k >= 1`. A limit-height vertex `X[b; t]` points to `X[g; tau_b(t)]`
//! for every successor `g` with `t_b < g < b`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index_seq::{in_u, Alpha, IndexSeq};
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    height: Ordinal,
    index: IndexSeq,
}

impl Vertex {
    pub fn new(height: Ordinal, index: IndexSeq) -> Result<Self> {
        if !in_u(&height, &index) {
            return Err(Error::InvalidVertex(format!(
                "index {index} is not in U_{height}"
            )));
        }
        Ok(Vertex { height, index })
    }

    /// For values built by the graph rules themselves, which keep membership.
    pub(crate) fn raw(height: Ordinal, index: IndexSeq) -> Self {
        debug_assert!(in_u(&height, &index), "X[{height}; {index}]");
        Vertex { height, index }
    }

    pub fn height(&self) -> &Ordinal {
        &self.height
    }

    pub fn index(&self) -> &IndexSeq {
        &self.index
    }

    /// The index component at the vertex's own height.
    pub fn own_component(&self) -> Ordinal {
        self.index.get(&self.height)
    }

    pub fn is_leaf(&self) -> bool {
        self.height.is_zero()
    }

    pub fn check(&self, alpha: &Alpha) -> Result<()> {
        alpha.check_height(&self.height)?;
        alpha.check_seq(&self.index)
    }

    /// The `k`-th child of a successor-height vertex (`k >= 1`).
    pub fn successor_child(&self, k: u64) -> Result<Vertex> {
        let p = self
            .height
            .predecessor()
            .ok_or_else(|| Error::InvalidVertex(format!("{self} is not at a successor height")))?;
        Ok(Vertex::raw(p, self.index.add_e_nat(&self.height, k)?))
    }

    /// The child `X[gamma; tau_b(t)]` of a limit-height vertex.
    pub fn limit_child(&self, gamma: &Ordinal) -> Vertex {
        Vertex::raw(gamma.clone(), self.index.tau(&self.height))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X[{}; {}]", self.height, self.index)
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_vertex(s)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A nonempty sequence of vertices joined by edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidVertex(
                "a path needs at least one vertex".into(),
            ));
        }
        if let Some(w) = vertices.windows(2).find(|w| !is_edge(&w[0], &w[1])) {
            return Err(Error::InvalidVertex(format!(
                "{} -> {} is not an edge",
                w[0], w[1]
            )));
        }
        Ok(Path { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Vertex {
        self.vertices.last().unwrap()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(" -> ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn is_edge(v: &Vertex, w: &Vertex) -> bool {
    let h = &v.height;
    match h.predecessor() {
        Some(p) => {
            if w.height != p {
                return false;
            }
            match (v.own_component().as_nat(), w.index.get(h).as_nat()) {
                (Some(a), Some(b)) if b > a => v.successor_child(b - a).is_ok_and(|c| c == *w),
                _ => false,
            }
        }
        None if h.is_limit() => {
            w.height.is_successor()
                && w.height < *h
                && w.height > v.index.get(h)
                && w.index == v.index.tau(h)
        }
        None => false,
    }
}

/// The first `budget` children in canonical order.
pub fn children(v: &Vertex, budget: usize) -> Result<Vec<Vertex>> {
    if v.is_leaf() {
        return Err(Error::Leaf(v.to_string()));
    }
    if v.height.is_successor() {
        (1..=budget as u64).map(|k| v.successor_child(k)).collect()
    } else {
        Ok(v.height
            .successors_below(&v.own_component(), budget)
            .iter()
            .map(|g| v.limit_child(g))
            .collect())
    }
}

/// The unique path from `v` to `target`, found by forced descent.
pub fn find_path(v: &Vertex, target: &Vertex) -> Option<Path> {
    if v == target {
        return Some(Path {
            vertices: vec![v.clone()],
        });
    }
    let goal = &target.height;
    if *goal >= v.height || !target.own_component().is_zero() {
        return None;
    }
    let s = &target.index;
    let mut vertices = vec![v.clone()];
    let mut cur = v.clone();
    while cur.height > *goal {
        let h = cur.height.clone();
        let next = if h.is_successor() {
            let want = s.get(&h).as_nat()?;
            let have = cur.own_component().as_nat()?;
            if want <= have {
                return None;
            }
            cur.successor_child(want - have).ok()?
        } else {
            if !s.get(&h).is_zero() {
                return None;
            }
            let gamma = s.max_position_between(goal, &h).unwrap_or(goal).clone();
            if !gamma.is_successor() || gamma <= cur.own_component() {
                return None;
            }
            cur.limit_child(&gamma)
        };
        vertices.push(next.clone());
        cur = next;
    }
    (cur.index == *s).then_some(Path { vertices })
}

/// Follows first children down to height 0.
pub fn reach_root(v: &Vertex) -> Vertex {
    let mut cur = v.clone();
    while !cur.is_leaf() {
        cur = children(&cur, 1)
            .expect("non-leaf has children")
            .pop()
            .expect("every non-leaf has a first child");
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn edges() {
        assert!(is_edge(&v("X[2; {2=4}]"), &v("X[1; {2=6}]")));
        assert!(!is_edge(&v("X[1; {1=1, 2=2}]"), &v("X[0; {1=1, 2=2}]")));
        assert!(is_edge(&v("X[w; {w=3}]"), &v("X[5; {}]")));
        assert!(!is_edge(&v("X[w; {w=3}]"), &v("X[3; {}]")));
        assert!(!is_edge(&v("X[w; {w=3}]"), &v("X[5; {5=1}]")));
        assert!(!is_edge(&v("X[2; {2=4}]"), &v("X[1; {1=1, 2=6}]")));
        assert!(!is_edge(&v("X[0; {1=1}]"), &v("X[0; {1=2}]")));
    }

    #[test]
    fn children_examples() {
        assert_eq!(
            children(&v("X[1; {1=2, 2=5}]"), 3).unwrap(),
            vec![
                v("X[0; {1=3, 2=5}]"),
                v("X[0; {1=4, 2=5}]"),
                v("X[0; {1=5, 2=5}]")
            ]
        );
        assert_eq!(
            children(&v("X[w; {w=2}]"), 2).unwrap(),
            vec![v("X[3; {}]"), v("X[4; {}]")]
        );
        assert!(matches!(
            children(&v("X[0; {1=1}]"), 2),
            Err(Error::Leaf(_))
        ));
        for c in children(&v("X[w*2; {w*2=w+1}]"), 4).unwrap() {
            assert!(is_edge(&v("X[w*2; {w*2=w+1}]"), &c));
        }
    }

    #[test]
    fn find_path_examples() {
        let p = find_path(&v("X[1; {1=2, 2=5}]"), &v("X[0; {1=4, 2=5}]")).unwrap();
        assert_eq!(p.len(), 1);
        assert!(find_path(&v("X[1; {1=2, 2=5}]"), &v("X[0; {1=2, 2=5}]")).is_none());
        let p = find_path(&v("X[2; {}]"), &v("X[0; {1=2, 2=3}]")).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.vertices()[1], v("X[1; {2=3}]"));
        let x = v("X[w; {w=1}]");
        assert_eq!(find_path(&x, &x).unwrap().len(), 0);
    }

    #[test]
    fn find_path_through_limits() {
        let p = find_path(&v("X[w+1; {}]"), &v("X[0; {1=1, 2=1, w+1=1}]")).unwrap();
        assert_eq!(
            p.vertices(),
            &[
                v("X[w+1; {}]"),
                v("X[w; {w+1=1}]"),
                v("X[2; {w+1=1}]"),
                v("X[1; {2=1, w+1=1}]"),
                v("X[0; {1=1, 2=1, w+1=1}]"),
            ]
        );
        assert!(find_path(&v("X[w+1; {}]"), &v("X[0; {2=1, w+1=1}]")).is_none());
        assert!(find_path(&v("X[w; {w=2}]"), &v("X[0; {1=1, 2=1}]")).is_none());
        assert!(find_path(&v("X[w; {w=1}]"), &v("X[0; {1=1, 2=1}]")).is_some());
        assert!(find_path(&v("X[w; {}]"), &v("X[3; {}]")).is_some());
        assert!(find_path(&v("X[w; {}]"), &v("X[3; {3=1}]")).is_none());
    }

    #[test]
    fn reach_root_examples() {
        assert_eq!(reach_root(&v("X[0; {1=3}]")), v("X[0; {1=3}]"));
        assert_eq!(reach_root(&v("X[1; {1=2, 2=5}]")), v("X[0; {1=3, 2=5}]"));
        assert_eq!(reach_root(&v("X[2; {2=4}]")), v("X[0; {1=1, 2=5}]"));
        let r = reach_root(&v("X[w*2+1; {w*2+1=3}]"));
        assert!(r.is_leaf());
        assert!(find_path(&v("X[w*2+1; {w*2+1=3}]"), &r).is_some());
    }
}
