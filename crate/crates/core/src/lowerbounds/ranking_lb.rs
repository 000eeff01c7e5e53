//! Inputs on which every Ranking algorithm from a small family of rankings
//! does little better than half.

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::order::{ArrivalOrder, RankingPermutation};

use super::gadget::h_gadget;
use super::monotone::{es_partition, MonotoneBlocks};

#[derive(Debug, Clone)]
pub struct RankingLbInstance {
    pub graph: BipartiteGraph,
    pub blocks: MonotoneBlocks,
    pub eps: f64,
    /// `ε′ = ε/2`, the block-size parameter of the partition.
    pub eps_prime: f64,
}

impl RankingLbInstance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `Σ (|B_i|/2 + 2) + |C|`: per-block cap on what Ranking can match.
    pub fn block_bound(&self) -> f64 {
        self.blocks.blocks.iter().map(|b| b.len() as f64 / 2.0 + 2.0).sum::<f64>() + self.blocks.leftover.len() as f64
    }

    /// `n/2 + 2ε′n + √n`.
    pub fn asymptotic_bound(&self) -> f64 {
        let n = self.n() as f64;
        n / 2.0 + 2.0 * self.eps_prime * n + n.sqrt()
    }

    /// `n/2 + εn + √n + 2·#blocks`.
    pub fn explicit_bound(&self) -> f64 {
        let n = self.n() as f64;
        n / 2.0 + self.eps * n + n.sqrt() + 2.0 * self.blocks.blocks.len() as f64
    }
}

/// Builds a graph on `n` A- and `n` B-vertices with a perfect matching on
/// which Ranking with any of `perms` (and arrival order `pi`) is weak.
///
/// B is partitioned into blocks monotone under every ranking, with block
/// size at least `⌈1/ε′⌉`. Blocks take consecutive runs of `pi` in block
/// order; within a block, the `l`-th arrival plays `u_l` and the `l`-th
/// smallest B-id plays `v_l` of an `H_z` gadget. An odd block adds one edge
/// `u_p–v_p` beside `H_{p-1}`; blocks below 4 vertices and the leftover
/// vertices get a plain perfect matching.
pub fn ranking_lb_instance(perms: &[RankingPermutation], pi: &ArrivalOrder, eps: f64) -> Result<RankingLbInstance> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let eps_prime = eps / 2.0;
    let blocks = es_partition(perms, eps_prime)?;
    let n = blocks.n;
    if pi.len() != n {
        return Err(Error::SizeMismatch(format!("arrival order over {} vertices, rankings over {n}", pi.len())));
    }

    let arrivals = pi.as_slice();
    let mut next = 0;
    let mut edges = Vec::new();
    for block in &blocks.blocks {
        let p = block.len();
        let us = &arrivals[next..next + p];
        next += p;
        if p < 4 {
            edges.extend(us.iter().zip(block).map(|(&u, &v)| (u, v)));
            continue;
        }
        let z = p - p % 2;
        let h = h_gadget(z)?;
        edges.extend(h.edges().map(|(i, j)| (us[i - 1], block[j - 1])));
        if p % 2 == 1 {
            edges.push((us[p - 1], block[p - 1]));
        }
    }
    edges.extend(arrivals[next..].iter().zip(&blocks.leftover).map(|(&u, &v)| (u, v)));

    let graph = BipartiteGraph::new(n, n, &edges)?;
    Ok(RankingLbInstance { graph, blocks, eps, eps_prime })
}
