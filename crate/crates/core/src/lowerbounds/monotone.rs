//! Partitioning B into blocks that are monotone under several rankings.

use crate::error::{Error, Result};
use crate::order::RankingPermutation;

/// Indices of a longest strictly increasing subsequence (patience sorting).
fn longest_increasing(seq: &[usize]) -> Vec<usize> {
    // tails[l] = index of the smallest tail of an increasing run of length l+1
    let mut tails: Vec<usize> = Vec::new();
    let mut prev = vec![usize::MAX; seq.len()];
    for (i, &x) in seq.iter().enumerate() {
        let pos = tails.partition_point(|&t| seq[t] < x);
        if pos > 0 {
            prev[i] = tails[pos - 1];
        }
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied().unwrap_or(usize::MAX);
    while cur != usize::MAX {
        out.push(cur);
        cur = prev[cur];
    }
    out.reverse();
    out
}

/// Indices of a longest strictly monotone subsequence of `seq`. For
/// distinct values its length is at least `⌈√len⌉`. Ties prefer increasing.
pub fn longest_monotone(seq: &[usize]) -> Vec<usize> {
    let inc = longest_increasing(seq);
    let flipped: Vec<usize> = seq.iter().map(|&x| usize::MAX - x).collect();
    let dec = longest_increasing(&flipped);
    if dec.len() > inc.len() {
        dec
    } else {
        inc
    }
}

/// `⌊log log n − log log(1/ε) − 2⌋`, the classical admissible number of
/// rankings for the partition (can be negative at small `n`).
pub fn max_admissible_k(n: usize, eps: f64) -> i64 {
    let v = (n as f64).log2().log2() - (1.0 / eps).log2().log2() - 2.0;
    if v.is_nan() {
        -1
    } else {
        v.floor() as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneBlocks {
    pub n: usize,
    /// Each block sorted by vertex id.
    pub blocks: Vec<Vec<usize>>,
    /// Leftover vertices `C`, sorted.
    pub leftover: Vec<usize>,
}

impl MonotoneBlocks {
    /// Checks the partition against `perms` and `eps` from scratch: the
    /// pieces partition `1..=n`, every block has at least `⌈1/ε⌉` vertices,
    /// `|C|² ≤ n`, and every block's ranks are monotone under every ranking.
    pub fn validate(&self, perms: &[RankingPermutation], eps: f64) -> std::result::Result<(), String> {
        let mut count = vec![0u32; self.n + 1];
        for &v in self.blocks.iter().flatten().chain(&self.leftover) {
            if v == 0 || v > self.n {
                return Err(format!("vertex {v} out of range"));
            }
            count[v] += 1;
        }
        if let Some(v) = (1..=self.n).find(|&v| count[v] != 1) {
            return Err(format!("vertex {v} appears {} times", count[v]));
        }
        let min = (1.0 / eps - 1e-9).ceil() as usize;
        for (i, block) in self.blocks.iter().enumerate() {
            if block.len() < min {
                return Err(format!("block {} has {} < {min} vertices", i + 1, block.len()));
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("block {} is not sorted by id", i + 1));
            }
            for (j, sigma) in perms.iter().enumerate() {
                let ranks: Vec<usize> = block.iter().map(|&b| sigma.rank(b)).collect();
                let up = ranks.windows(2).all(|w| w[0] < w[1]);
                let down = ranks.windows(2).all(|w| w[0] > w[1]);
                if !up && !down {
                    return Err(format!("block {} is not monotone under ranking {}", i + 1, j + 1));
                }
            }
        }
        if self.leftover.len() * self.leftover.len() > self.n {
            return Err(format!("leftover has {} vertices, more than sqrt({})", self.leftover.len(), self.n));
        }
        Ok(())
    }
}

/// Repeatedly peels off a block that is monotone under every ranking in
/// `perms` (one longest monotone subsequence per ranking, nested) until at
/// most `√n` vertices remain.
///
/// Fails if some block would come out smaller than `⌈1/ε⌉`; the error carries
/// [`max_admissible_k`] for reference.
pub fn es_partition(perms: &[RankingPermutation], eps: f64) -> Result<MonotoneBlocks> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let n = perms.first().map(RankingPermutation::len).ok_or_else(|| {
        Error::InvalidParameter("at least one ranking is required".into())
    })?;
    if let Some(p) = perms.iter().find(|p| p.len() != n) {
        return Err(Error::SizeMismatch(format!("rankings over {} and {n} vertices", p.len())));
    }
    let min = (1.0 / eps - 1e-9).ceil() as usize;
    let mut rest: Vec<usize> = (1..=n).collect();
    let mut blocks = Vec::new();
    while rest.len() * rest.len() > n {
        let mut block = rest.clone();
        for sigma in perms {
            let ranks: Vec<usize> = block.iter().map(|&b| sigma.rank(b)).collect();
            block = longest_monotone(&ranks).into_iter().map(|i| block[i]).collect();
        }
        if block.len() < min {
            return Err(Error::PartitionInfeasible {
                reason: format!(
                    "with {} vertices left, the best block under {} rankings has {} < {min} vertices",
                    rest.len(),
                    perms.len(),
                    block.len()
                ),
                max_admissible_k: max_admissible_k(n, eps),
            });
        }
        let mut in_block = vec![false; n + 1];
        block.iter().for_each(|&b| in_block[b] = true);
        rest.retain(|&b| !in_block[b]);
        blocks.push(block);
    }
    Ok(MonotoneBlocks { n, blocks, leftover: rest })
}
