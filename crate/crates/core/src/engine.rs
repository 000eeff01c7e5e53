//! Deterministic replay of the online matching rules.
//!
//! Every engine is a pure function of its inputs. Randomised variants take
//! their randomness from a [`BitSource`] so that consumption is metered.

use std::collections::HashSet;

use crate::bits::BitSource;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Vertex};
use crate::matching::Matching;
use crate::order::{ArrivalOrder, RankingPermutation};

/// `Ranking(G, π, σ)`: each arriving `a` takes its free neighbour of minimum rank.
///
/// Panics if `pi` or `sigma` do not cover the graph's vertex sets.
pub fn ranking_run(g: &BipartiteGraph, pi: &ArrivalOrder, sigma: &RankingPermutation) -> Matching {
    assert_eq!(pi.len(), g.n(), "arrival order must cover A");
    assert_eq!(sigma.len(), g.m(), "ranking must cover B");
    let ranks = sigma.ranks();
    let mut out = Matching::new(g.n(), g.m());
    for a in pi.iter() {
        let mut best: Option<(usize, usize)> = None;
        for &b in g.neighbors(a) {
            if out.mate_of_b(b).is_some() {
                continue;
            }
            let r = ranks[b - 1];
            match best {
                Some((best_rank, _)) => {
                    debug_assert_ne!(r, best_rank, "ranks are distinct");
                    if r < best_rank {
                        best = Some((r, b));
                    }
                }
                None => best = Some((r, b)),
            }
        }
        if let Some((_, b)) = best {
            out.insert_unchecked(a, b);
        }
    }
    out
}

/// Offline Greedy: scans `omega` and keeps every edge whose endpoints are
/// both still free. `omega` must list every edge of `g` exactly once.
pub fn greedy_edge_run(g: &BipartiteGraph, omega: &[(usize, usize)]) -> Result<Matching> {
    let mut seen = HashSet::with_capacity(omega.len());
    for &(a, b) in omega {
        if !g.has_edge(a, b) {
            return Err(Error::NotAnEdge { a, b });
        }
        if !seen.insert((a, b)) {
            return Err(Error::BadEdgeOrder(format!("edge ({a}, {b}) listed twice")));
        }
    }
    if seen.len() != g.edge_count() {
        return Err(Error::BadEdgeOrder(format!(
            "{} of {} edges listed",
            seen.len(),
            g.edge_count()
        )));
    }
    let mut out = Matching::new(g.n(), g.m());
    for &(a, b) in omega {
        if out.mate_of_a(a).is_none() && out.mate_of_b(b).is_none() {
            out.insert_unchecked(a, b);
        }
    }
    Ok(out)
}

/// Edges sorted by arrival time of their A-endpoint, then by rank of the
/// B-endpoint. Greedy over this order reproduces `Ranking(G, π, σ)`.
pub fn ranking_edge_order(
    g: &BipartiteGraph,
    pi: &ArrivalOrder,
    sigma: &RankingPermutation,
) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(g.edge_count());
    for a in pi.iter() {
        let mut nbrs = g.neighbors(a).to_vec();
        nbrs.sort_by_key(|&b| sigma.rank(b));
        out.extend(nbrs.into_iter().map(|b| (a, b)));
    }
    out
}

/// A uniformly random ranking via Fisher–Yates over rejection-sampled indices.
pub fn random_permutation<S: BitSource>(m: usize, src: &mut S) -> Result<RankingPermutation> {
    let mut order: Vec<usize> = (1..=m).collect();
    for i in (1..m).rev() {
        let j = src.uniform_below(i as u64 + 1)? as usize;
        order.swap(i, j);
    }
    RankingPermutation::from_order(&order)
}

#[derive(Debug, Clone)]
pub struct KvvRun {
    pub matching: Matching,
    pub sigma: RankingPermutation,
    pub bits_used: u64,
}

/// KVV: Ranking under a uniformly random `σ`.
pub fn kvv_run<S: BitSource>(g: &BipartiteGraph, pi: &ArrivalOrder, src: &mut S) -> Result<KvvRun> {
    let before = src.bits_consumed();
    let sigma = random_permutation(g.m(), src)?;
    let matching = ranking_run(g, pi, &sigma);
    Ok(KvvRun { matching, sigma, bits_used: src.bits_consumed() - before })
}

/// Shape of the symmetric difference of two matchings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathDiff {
    Identical,
    /// One alternating path; `ends` are its two endpoints.
    SinglePath { ends: (Vertex, Vertex), edges: usize },
    /// Several components, or a cycle.
    Other { components: usize, cycles: usize },
}

impl PathDiff {
    pub fn starts_at(&self, v: Vertex) -> bool {
        matches!(self, PathDiff::SinglePath { ends, .. } if ends.0 == v || ends.1 == v)
    }
}

/// Classifies `m1 Δ m2`. Both matchings must live on the same vertex sets.
pub fn alternating_path_diff(m1: &Matching, m2: &Matching) -> PathDiff {
    assert!(m1.n() == m2.n() && m1.m() == m2.m(), "matchings over different vertex sets");
    let (n, m) = (m1.n(), m1.m());
    // adjacency of the symmetric difference; every vertex has degree <= 2
    let mut adj_a: Vec<[usize; 2]> = vec![[0; 2]; n + 1];
    let mut adj_b: Vec<[usize; 2]> = vec![[0; 2]; m + 1];
    let mut deg_a = vec![0u8; n + 1];
    let mut deg_b = vec![0u8; m + 1];
    let mut edges = 0usize;
    for a in 1..=n {
        let (x, y) = (m1.mate_of_a(a), m2.mate_of_a(a));
        if x == y {
            continue;
        }
        for b in [x, y].into_iter().flatten() {
            adj_a[a][deg_a[a] as usize] = b;
            deg_a[a] += 1;
            adj_b[b][deg_b[b] as usize] = a;
            deg_b[b] += 1;
            edges += 1;
        }
    }
    if edges == 0 {
        return PathDiff::Identical;
    }

    let mut seen_a = vec![false; n + 1];
    let mut seen_b = vec![false; m + 1];
    let mut components = 0;
    let mut cycles = 0;
    let mut last_path = None;
    let mut stack = Vec::new();
    let starts = (1..=n)
        .filter(|&a| deg_a[a] > 0)
        .map(Vertex::A)
        .chain((1..=m).filter(|&b| deg_b[b] > 0).map(Vertex::B));
    for start in starts {
        let fresh = match start {
            Vertex::A(a) => !seen_a[a],
            Vertex::B(b) => !seen_b[b],
        };
        if !fresh {
            continue;
        }
        components += 1;
        let mut ends = Vec::new();
        let mut comp_edges = 0usize;
        stack.push(start);
        while let Some(v) = stack.pop() {
            let (seen, deg, nbrs) = match v {
                Vertex::A(a) => (&mut seen_a[a], deg_a[a], adj_a[a]),
                Vertex::B(b) => (&mut seen_b[b], deg_b[b], adj_b[b]),
            };
            if std::mem::replace(seen, true) {
                continue;
            }
            comp_edges += deg as usize;
            if deg == 1 {
                ends.push(v);
            }
            for &w in &nbrs[..deg as usize] {
                stack.push(match v {
                    Vertex::A(_) => Vertex::B(w),
                    Vertex::B(_) => Vertex::A(w),
                });
            }
        }
        if ends.is_empty() {
            cycles += 1;
        } else {
            debug_assert_eq!(ends.len(), 2);
            last_path = Some(((ends[0], ends[1]), comp_edges / 2));
        }
    }
    match (components, cycles, last_path) {
        (1, 0, Some((ends, edges))) => PathDiff::SinglePath { ends, edges },
        _ => PathDiff::Other { components, cycles },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{FixedBits, MeteredBitSource};
    use crate::matching::max_matching;

    fn two_by_two() -> BipartiteGraph {
        BipartiteGraph::new(2, 2, &[(1, 1), (1, 2), (2, 1)]).unwrap()
    }

    #[test]
    fn ranking_on_the_two_by_two_example() {
        let g = two_by_two();
        let m = ranking_run(&g, &ArrivalOrder::identity(2), &RankingPermutation::identity(2));
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(1, 1)]);
        assert_eq!(max_matching(&g).len(), 2);
        let m = ranking_run(&g, &ArrivalOrder::identity(2), &RankingPermutation::reverse(2));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn greedy_rejects_bad_orders() {
        let g = two_by_two();
        assert_eq!(greedy_edge_run(&g, &[(2, 2)]).unwrap_err(), Error::NotAnEdge { a: 2, b: 2 });
        assert!(matches!(greedy_edge_run(&g, &[(1, 1), (1, 2)]), Err(Error::BadEdgeOrder(_))));
        assert!(matches!(
            greedy_edge_run(&g, &[(1, 1), (1, 2), (2, 1), (1, 1)]),
            Err(Error::BadEdgeOrder(_))
        ));
        let single = BipartiteGraph::new(1, 1, &[(1, 1)]).unwrap();
        assert_eq!(greedy_edge_run(&single, &[(1, 1)]).unwrap().len(), 1);
    }

    #[test]
    fn greedy_over_ranking_order_is_ranking() {
        let g = BipartiteGraph::new(3, 4, &[(1, 2), (1, 4), (2, 1), (2, 2), (3, 2), (3, 3), (3, 4)])
            .unwrap();
        let pi = ArrivalOrder::new(vec![3, 1, 2]).unwrap();
        let sigma = RankingPermutation::from_ranks(vec![4, 1, 3, 2]).unwrap();
        let omega = ranking_edge_order(&g, &pi, &sigma);
        assert_eq!(greedy_edge_run(&g, &omega).unwrap(), ranking_run(&g, &pi, &sigma));
    }

    #[test]
    fn kvv_with_one_vertex_is_deterministic() {
        let g = BipartiteGraph::new(1, 1, &[(1, 1)]).unwrap();
        let mut src = MeteredBitSource::new(5);
        let run = kvv_run(&g, &ArrivalOrder::identity(1), &mut src).unwrap();
        assert_eq!(run.sigma, RankingPermutation::identity(1));
        assert_eq!(run.bits_used, 0);
        assert_eq!(run.matching.len(), 1);
    }

    #[test]
    fn kvv_from_fixed_bits() {
        // m = 2: one bit decides whether the two vertices swap
        let g = two_by_two();
        let bits = [true];
        let run = kvv_run(&g, &ArrivalOrder::identity(2), &mut FixedBits::new(&bits)).unwrap();
        assert_eq!(run.sigma, RankingPermutation::identity(2));
        let bits = [false];
        let run = kvv_run(&g, &ArrivalOrder::identity(2), &mut FixedBits::new(&bits)).unwrap();
        assert_eq!(run.sigma, RankingPermutation::reverse(2));
        assert_eq!(run.matching.len(), 2);
    }

    #[test]
    fn random_permutations_are_uniform_over_s3() {
        let mut src = MeteredBitSource::new(11);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..60_000 {
            *counts.entry(random_permutation(3, &mut src).unwrap().order()).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        for &c in counts.values() {
            assert!((9_300..=10_700).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn diff_classification() {
        let m = Matching::from_pairs(3, 3, &[(1, 1), (2, 2)]).unwrap();
        assert_eq!(alternating_path_diff(&m, &m), PathDiff::Identical);

        let e = Matching::new(3, 3);
        let two = Matching::from_pairs(3, 3, &[(1, 1), (2, 2)]).unwrap();
        assert_eq!(alternating_path_diff(&e, &two), PathDiff::Other { components: 2, cycles: 0 });

        // b1 a1 b2 a2 : path of three edges
        let x = Matching::from_pairs(2, 2, &[(1, 1), (2, 2)]).unwrap();
        let y = Matching::from_pairs(2, 2, &[(1, 2)]).unwrap();
        let d = alternating_path_diff(&x, &y);
        assert_eq!(d, PathDiff::SinglePath { ends: (Vertex::A(2), Vertex::B(1)), edges: 3 });
        assert!(d.starts_at(Vertex::B(1)));
        assert!(!d.starts_at(Vertex::A(1)));

        // 4-cycle a1 b1 a2 b2
        let x = Matching::from_pairs(2, 2, &[(1, 1), (2, 2)]).unwrap();
        let y = Matching::from_pairs(2, 2, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(alternating_path_diff(&x, &y), PathDiff::Other { components: 1, cycles: 1 });
    }
}
