//! Bipartite instances `G = (A, B, E)` with `A = {1..n}` and `B = {1..m}`.
//!
//! Vertex ids are 1-based on both sides, in the API and in the text format.
//! Graph surgery ([`BipartiteGraph::induced_subgraph`],
//! [`BipartiteGraph::remove_vertex`]) relabels the surviving vertices densely
//! and hands back the id maps in a [`Subgraph`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex on either side of the bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    A(usize),
    B(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::A(a) => write!(f, "a{a}"),
            Vertex::B(b) => write!(f, "b{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n: usize,
    m: usize,
    // adj[a - 1] holds the B-neighbours of `a`, ascending, without duplicates.
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl BipartiteGraph {
    /// Builds a graph from an edge list; duplicate edges collapse into one.
    pub fn new(n: usize, m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == 0 || a > n || b == 0 || b > m {
                return Err(Error::EdgeOutOfRange { a, b, n, m });
            }
            adj[a - 1].push(b);
        }
        Ok(Self::from_lists(n, m, adj))
    }

    /// An edgeless graph.
    pub fn empty(n: usize, m: usize) -> Self {
        Self { n, m, adj: vec![Vec::new(); n], edges: 0 }
    }

    /// Builds a graph from per-A-vertex neighbour bitmasks (bit `j` set means
    /// `b = j + 1` is a neighbour). Only supports `m <= 64`.
    pub fn from_row_masks(n: usize, m: usize, rows: &[u64]) -> Self {
        assert!(m <= 64 && rows.len() == n);
        let mut edges = 0;
        let adj = rows
            .iter()
            .map(|&row| {
                let mut list = Vec::with_capacity(row.count_ones() as usize);
                let mut bits = row;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    debug_assert!(j < m);
                    list.push(j + 1);
                    bits &= bits - 1;
                }
                edges += list.len();
                list
            })
            .collect();
        Self { n, m, adj, edges }
    }

    fn from_lists(n: usize, m: usize, mut adj: Vec<Vec<usize>>) -> Self {
        let mut edges = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edges += list.len();
        }
        Self { n, m, adj, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Sorted B-neighbours of `a`. Panics if `a` is out of range.
    pub fn neighbors(&self, a: usize) -> &[usize] {
        &self.adj[a - 1]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a - 1].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a >= 1 && a <= self.n && self.adj[a - 1].binary_search(&b).is_ok()
    }

    /// All edges, ordered by A-vertex and then by B-vertex.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&b| (i + 1, b)))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::A(a) => a >= 1 && a <= self.n,
            Vertex::B(b) => b >= 1 && b <= self.m,
        }
    }

    /// The subgraph induced by `a_set ∪ b_set`. Kept vertices are relabeled
    /// `1..` in ascending order of their original id.
    pub fn induced_subgraph(&self, a_set: &[usize], b_set: &[usize]) -> Result<Subgraph> {
        let mut a_ids = a_set.to_vec();
        a_ids.sort_unstable();
        a_ids.dedup();
        let mut b_ids = b_set.to_vec();
        b_ids.sort_unstable();
        b_ids.dedup();
        if let Some(&a) = a_ids.iter().find(|&&a| a == 0 || a > self.n) {
            return Err(Error::UnknownVertex(Vertex::A(a)));
        }
        if let Some(&b) = b_ids.iter().find(|&&b| b == 0 || b > self.m) {
            return Err(Error::UnknownVertex(Vertex::B(b)));
        }
        Ok(self.restrict(a_ids, b_ids))
    }

    /// `G \ {v}`: deletes `v` and its incident edges.
    pub fn remove_vertex(&self, v: Vertex) -> Result<Subgraph> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        let a_ids = (1..=self.n).filter(|&a| v != Vertex::A(a)).collect();
        let b_ids = (1..=self.m).filter(|&b| v != Vertex::B(b)).collect();
        Ok(self.restrict(a_ids, b_ids))
    }

    // `a_ids`, `b_ids` sorted, deduplicated and in range.
    fn restrict(&self, a_ids: Vec<usize>, b_ids: Vec<usize>) -> Subgraph {
        let mut b_new = vec![0usize; self.m + 1];
        for (i, &b) in b_ids.iter().enumerate() {
            b_new[b] = i + 1;
        }
        let mut edges = 0;
        let adj: Vec<Vec<usize>> = a_ids
            .iter()
            .map(|&a| {
                // b_new is increasing on kept vertices, so the lists stay sorted.
                let list: Vec<usize> = self.adj[a - 1]
                    .iter()
                    .filter_map(|&b| (b_new[b] != 0).then_some(b_new[b]))
                    .collect();
                edges += list.len();
                list
            })
            .collect();
        let graph = BipartiteGraph { n: a_ids.len(), m: b_ids.len(), adj, edges };
        Subgraph { graph, a_ids, b_ids }
    }
}

impl fmt::Display for BipartiteGraph {
    /// The line-oriented instance format: `n m`, then `a: b1 b2 ...` per A-vertex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.m)?;
        for (i, list) in self.adj.iter().enumerate() {
            write!(f, "{}:", i + 1)?;
            for b in list {
                write!(f, " {b}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut adj: Vec<Option<Vec<usize>>> = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            match header {
                None => {
                    let nums: Vec<&str> = line.split_whitespace().collect();
                    if nums.len() != 2 {
                        return Err(perr(format!("expected `n m`, found `{line}`")));
                    }
                    let n = nums[0].parse().map_err(|e| perr(format!("bad n: {e}")))?;
                    let m = nums[1].parse().map_err(|e| perr(format!("bad m: {e}")))?;
                    header = Some((n, m));
                    adj = vec![None; n];
                }
                Some((n, m)) => {
                    let (lhs, rhs) = line
                        .split_once(':')
                        .ok_or_else(|| perr(format!("expected `a: b1 b2 ...`, found `{line}`")))?;
                    let a: usize =
                        lhs.trim().parse().map_err(|e| perr(format!("bad A-vertex: {e}")))?;
                    if a == 0 || a > n {
                        return Err(perr(format!("A-vertex {a} out of range 1..={n}")));
                    }
                    if adj[a - 1].is_some() {
                        return Err(perr(format!("duplicate line for A-vertex {a}")));
                    }
                    let mut list = Vec::new();
                    for tok in rhs.split_whitespace() {
                        let b: usize =
                            tok.parse().map_err(|e| perr(format!("bad B-vertex `{tok}`: {e}")))?;
                        if b == 0 || b > m {
                            return Err(Error::EdgeOutOfRange { a, b, n, m });
                        }
                        list.push(b);
                    }
                    adj[a - 1] = Some(list);
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 0, msg: "missing `n m` header".into() })?;
        Ok(Self::from_lists(n, m, adj.into_iter().map(Option::unwrap_or_default).collect()))
    }
}

/// A relabeled subgraph together with the map back to the parent's ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: BipartiteGraph,
    /// `a_ids[i]` is the parent id of subgraph vertex `a = i + 1`.
    pub a_ids: Vec<usize>,
    /// `b_ids[j]` is the parent id of subgraph vertex `b = j + 1`.
    pub b_ids: Vec<usize>,
}

impl Subgraph {
    pub fn parent_a(&self, a: usize) -> usize {
        self.a_ids[a - 1]
    }

    pub fn parent_b(&self, b: usize) -> usize {
        self.b_ids[b - 1]
    }

    /// Subgraph id of a parent A-vertex, if it was kept.
    pub fn local_a(&self, parent: usize) -> Option<usize> {
        self.a_ids.binary_search(&parent).ok().map(|i| i + 1)
    }

    pub fn local_b(&self, parent: usize) -> Option<usize> {
        self.b_ids.binary_search(&parent).ok().map(|i| i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_sorts_and_dedups() {
        let g = BipartiteGraph::new(2, 2, &[(1, 2), (1, 1), (2, 1)]).unwrap();
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.degree(2), 1);
        assert_eq!(g.neighbors(1), &[1, 2]);

        let g = BipartiteGraph::new(3, 3, &[(1, 1), (1, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);

        let g = BipartiteGraph::new(1, 1, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn out_of_range_edge_is_reported() {
        let err = BipartiteGraph::new(2, 2, &[(1, 1), (3, 1)]).unwrap_err();
        assert_eq!(err, Error::EdgeOutOfRange { a: 3, b: 1, n: 2, m: 2 });
        assert!(BipartiteGraph::new(2, 2, &[(1, 0)]).is_err());
    }

    #[test]
    fn induced_subgraph_keeps_exactly_the_crossing_edges() {
        // 3-semi-complete: (a_i, b_j) iff j >= i
        let g = BipartiteGraph::new(3, 3, &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]).unwrap();
        let s = g.induced_subgraph(&[1], &[3]).unwrap();
        assert_eq!(s.graph.edge_count(), 1);
        assert_eq!(s.parent_b(1), 3);
        let s = g.induced_subgraph(&[3], &[1]).unwrap();
        assert_eq!(s.graph.edge_count(), 0);
        let s = g.induced_subgraph(&[1, 2, 3], &[1, 2, 3]).unwrap();
        assert_eq!(s.graph, g);
        assert!(g.induced_subgraph(&[4], &[]).is_err());
    }

    #[test]
    fn remove_vertex_relabels() {
        let g = BipartiteGraph::new(3, 3, &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]).unwrap();
        let s = g.remove_vertex(Vertex::B(1)).unwrap();
        assert_eq!(s.graph.m(), 2);
        assert_eq!(s.graph.degree(1), 2);
        assert_eq!(s.b_ids, vec![2, 3]);
        assert_eq!(s.local_b(3), Some(2));
        assert_eq!(s.local_b(1), None);

        let iso = BipartiteGraph::new(2, 3, &[(1, 1), (1, 2)]).unwrap();
        let s = iso.remove_vertex(Vertex::B(3)).unwrap();
        assert_eq!(s.graph.edge_count(), 2);

        assert_eq!(g.remove_vertex(Vertex::A(4)).unwrap_err(), Error::UnknownVertex(Vertex::A(4)));
    }

    #[test]
    fn text_format_round_trips() {
        let text = "# tiny\n2 3\n1: 3 1   # trailing comment\n\n2:\n";
        let g: BipartiteGraph = text.parse().unwrap();
        assert_eq!(g.neighbors(1), &[1, 3]);
        assert_eq!(g.to_string(), "2 3\n1: 1 3\n2:\n");
        let back: BipartiteGraph = g.to_string().parse().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!("".parse::<BipartiteGraph>(), Err(Error::Parse { .. })));
        assert!(matches!("2 2\n3: 1".parse::<BipartiteGraph>(), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            "2 2\n1: 3".parse::<BipartiteGraph>(),
            Err(Error::EdgeOutOfRange { a: 1, b: 3, .. })
        ));
        assert!(matches!("2 2\n1: 1\n1: 2".parse::<BipartiteGraph>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn row_masks_match_edge_lists() {
        let g = BipartiteGraph::from_row_masks(2, 3, &[0b101, 0b010]);
        assert_eq!(g, BipartiteGraph::new(2, 3, &[(1, 1), (1, 3), (2, 2)]).unwrap());
    }
}
