use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Subgraph, Vertex};

const FREE: usize = 0;

/// A set of vertex-disjoint edges with `O(1)` lookup of `M(v)` from either side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    // 1-based mates, FREE when unmatched; index 0 unused.
    mate_a: Vec<usize>,
    mate_b: Vec<usize>,
    len: usize,
}

impl Matching {
    pub fn new(n: usize, m: usize) -> Self {
        Self { mate_a: vec![FREE; n + 1], mate_b: vec![FREE; m + 1], len: 0 }
    }

    pub fn from_pairs(n: usize, m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut out = Self::new(n, m);
        for &(a, b) in pairs {
            out.insert(a, b)?;
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.mate_a.len() - 1
    }

    pub fn m(&self) -> usize {
        self.mate_b.len() - 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, a: usize, b: usize) -> Result<()> {
        if a == 0 || a > self.n() || b == 0 || b > self.m() {
            return Err(Error::EdgeOutOfRange { a, b, n: self.n(), m: self.m() });
        }
        if self.mate_a[a] != FREE {
            return Err(Error::AlreadyMatched(Vertex::A(a)));
        }
        if self.mate_b[b] != FREE {
            return Err(Error::AlreadyMatched(Vertex::B(b)));
        }
        self.mate_a[a] = b;
        self.mate_b[b] = a;
        self.len += 1;
        Ok(())
    }

    /// Inserts without the range and freeness checks the public API performs.
    pub(crate) fn insert_unchecked(&mut self, a: usize, b: usize) {
        debug_assert!(self.mate_a[a] == FREE && self.mate_b[b] == FREE);
        self.mate_a[a] = b;
        self.mate_b[b] = a;
        self.len += 1;
    }

    pub fn mate_of_a(&self, a: usize) -> Option<usize> {
        self.mate_a.get(a).copied().filter(|&b| b != FREE)
    }

    pub fn mate_of_b(&self, b: usize) -> Option<usize> {
        self.mate_b.get(b).copied().filter(|&a| a != FREE)
    }

    pub fn mate(&self, v: Vertex) -> Option<Vertex> {
        match v {
            Vertex::A(a) => self.mate_of_a(a).map(Vertex::B),
            Vertex::B(b) => self.mate_of_b(b).map(Vertex::A),
        }
    }

    pub fn is_matched(&self, v: Vertex) -> bool {
        self.mate(v).is_some()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.mate_of_a(a) == Some(b)
    }

    /// Matched pairs `(a, b)` in ascending order of `a`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate_a.iter().enumerate().skip(1).filter(|&(_, &b)| b != FREE).map(|(a, &b)| (a, b))
    }

    /// Checks that every pair is an edge of `g` and the sizes agree.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        if self.n() != g.n() || self.m() != g.m() {
            return Err(Error::SizeMismatch(format!(
                "matching over {}x{}, graph is {}x{}",
                self.n(),
                self.m(),
                g.n(),
                g.m()
            )));
        }
        for (a, b) in self.pairs() {
            if !g.has_edge(a, b) {
                return Err(Error::NotAnEdge { a, b });
            }
            if self.mate_b[b] != a {
                return Err(Error::AlreadyMatched(Vertex::B(b)));
            }
        }
        Ok(())
    }

    /// Re-expresses a matching of `sub.graph` in the ids of the parent graph.
    pub fn lift(&self, sub: &Subgraph, parent_n: usize, parent_m: usize) -> Matching {
        let mut out = Matching::new(parent_n, parent_m);
        for (a, b) in self.pairs() {
            out.insert_unchecked(sub.parent_a(a), sub.parent_b(b));
        }
        out
    }

    /// True if no edge of `g` joins two unmatched vertices.
    pub fn is_maximal_in(&self, g: &BipartiteGraph) -> bool {
        g.edges().all(|(a, b)| self.mate_of_a(a).is_some() || self.mate_of_b(b).is_some())
    }
}

/// A maximum-cardinality matching by Hopcroft–Karp (layered BFS followed by
/// vertex-disjoint augmenting DFS).
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    const INF: usize = usize::MAX;
    let (n, m) = (g.n(), g.m());
    let mut mate_a = vec![FREE; n + 1];
    let mut mate_b = vec![FREE; m + 1];
    let mut dist = vec![INF; n + 1];
    let mut queue = VecDeque::with_capacity(n);

    // Cheap greedy start.
    for (a, slot) in mate_a.iter_mut().enumerate().skip(1) {
        if let Some(&b) = g.neighbors(a).iter().find(|&&b| mate_b[b] == FREE) {
            *slot = b;
            mate_b[b] = a;
        }
    }

    loop {
        queue.clear();
        for a in 1..=n {
            if mate_a[a] == FREE {
                dist[a] = 0;
                queue.push_back(a);
            } else {
                dist[a] = INF;
            }
        }
        let mut found = false;
        while let Some(a) = queue.pop_front() {
            for &b in g.neighbors(a) {
                let next = mate_b[b];
                if next == FREE {
                    found = true;
                } else if dist[next] == INF {
                    dist[next] = dist[a] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; n + 1];
        for a in 1..=n {
            if mate_a[a] == FREE {
                augment(g, a, &mut mate_a, &mut mate_b, &mut dist, &mut it);
            }
        }
    }

    let mut out = Matching::new(n, m);
    for (a, &b) in mate_a.iter().enumerate().skip(1) {
        if b != FREE {
            out.insert_unchecked(a, b);
        }
    }
    out
}

fn augment(
    g: &BipartiteGraph,
    a: usize,
    mate_a: &mut [usize],
    mate_b: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    let nbrs = g.neighbors(a);
    while it[a] < nbrs.len() {
        let b = nbrs[it[a]];
        it[a] += 1;
        let next = mate_b[b];
        if next == FREE
            || (dist[next] == dist[a] + 1 && augment(g, next, mate_a, mate_b, dist, it))
        {
            mate_a[a] = b;
            mate_b[b] = a;
            return true;
        }
    }
    dist[a] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_rejects_reuse() {
        let mut m = Matching::new(2, 2);
        m.insert(1, 1).unwrap();
        assert_eq!(m.insert(2, 1), Err(Error::AlreadyMatched(Vertex::B(1))));
        assert_eq!(m.insert(1, 2), Err(Error::AlreadyMatched(Vertex::A(1))));
        assert_eq!(m.len(), 1);
        assert_eq!(m.mate(Vertex::B(1)), Some(Vertex::A(1)));
    }

    #[test]
    fn validate_rejects_non_edges() {
        let g = BipartiteGraph::new(2, 2, &[(1, 1)]).unwrap();
        let m = Matching::from_pairs(2, 2, &[(2, 2)]).unwrap();
        assert_eq!(m.validate(&g), Err(Error::NotAnEdge { a: 2, b: 2 }));
    }

    #[test]
    fn small_maximum_matchings() {
        let path = BipartiteGraph::new(2, 2, &[(1, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(max_matching(&path).len(), 2);
        assert_eq!(max_matching(&BipartiteGraph::empty(3, 4)).len(), 0);
        let semi = BipartiteGraph::new(3, 3, &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]).unwrap();
        let mm = max_matching(&semi);
        assert_eq!(mm.len(), 3);
        mm.validate(&semi).unwrap();
    }

    #[test]
    fn greedy_start_is_repaired() {
        // greedy start takes (1,1); the optimum needs (1,2),(2,1)
        let g = BipartiteGraph::new(2, 2, &[(1, 1), (1, 2), (2, 1)]).unwrap();
        let mm = max_matching(&g);
        assert!(mm.contains(1, 2) && mm.contains(2, 1));
    }
}
