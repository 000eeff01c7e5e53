//! String guessing with known history, and the reduction that turns an
//! online matcher into a guesser.
//!
//! The guesser sees one character per request only after committing to a
//! guess. The reduction encodes character `r` as a `c`-semi-complete block
//! whose B-ids are permuted by the `r`-th permutation of `[c]` in Lehmer
//! order. Before each request it forks the matcher and feeds the fork a block
//! in which every arrival sees exactly the still-free block vertices; if the
//! fork matches that block perfectly, the matching spells out a permutation
//! and hence a guess. Then the real block is fed to the real matcher.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::advice::AdviceTape;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::matching::Matching;
use crate::online::{OnlineMatcher, TapeOptimalMatcher};

pub fn factorial(c: usize) -> u64 {
    (1..=c as u64).product()
}

/// Bijection between `0..c!` and the permutations of `1..=c` (as vectors of
/// images), in Lehmer-code order: rank 0 is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermutationIndex {
    c: usize,
}

impl PermutationIndex {
    pub fn new(c: usize) -> Result<Self> {
        if !(1..=20).contains(&c) {
            return Err(Error::InvalidParameter(format!("block size must be in 1..=20, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn size(&self) -> u64 {
        factorial(self.c)
    }

    pub fn rank(&self, perm: &[usize]) -> Result<u64> {
        let c = self.c;
        if perm.len() != c {
            return Err(Error::NotAPermutation { len: perm.len(), reason: format!("expected length {c}") });
        }
        let mut seen = vec![false; c + 1];
        for &p in perm {
            if p == 0 || p > c || seen[p] {
                return Err(Error::NotAPermutation { len: c, reason: format!("bad or repeated entry {p}") });
            }
            seen[p] = true;
        }
        let mut r = 0u64;
        for i in 0..c {
            let smaller_later = perm[i + 1..].iter().filter(|&&q| q < perm[i]).count() as u64;
            r += smaller_later * factorial(c - 1 - i);
        }
        Ok(r)
    }

    pub fn unrank(&self, mut r: u64) -> Result<Vec<usize>> {
        if r >= self.size() {
            return Err(Error::InvalidParameter(format!("rank {r} out of range for c = {}", self.c)));
        }
        let mut pool: Vec<usize> = (1..=self.c).collect();
        let mut out = Vec::with_capacity(self.c);
        for i in (0..self.c).rev() {
            let f = factorial(i);
            out.push(pool.remove((r / f) as usize));
            r %= f;
        }
        Ok(out)
    }

    /// The table of all permutations in rank order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size()).map(|r| self.unrank(r).expect("rank in range"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgkhInstance {
    q: u32,
    target: Vec<u32>,
}

impl SgkhInstance {
    pub fn new(q: u32, target: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("alphabet size must be >= 2, got {q}")));
        }
        if let Some(&bad) = target.iter().find(|&&r| r >= q) {
            return Err(Error::InvalidParameter(format!("character {bad} outside alphabet of size {q}")));
        }
        Ok(Self { q, target })
    }

    pub fn random(q: u32, len: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = (0..len).map(|_| rng.gen_range(0..q.max(1))).collect();
        Self::new(q, target)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn target(&self) -> &[u32] {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    fn block_perms(&self, c: usize) -> Result<Vec<Vec<usize>>> {
        let idx = PermutationIndex::new(c)?;
        if u64::from(self.q) != idx.size() {
            return Err(Error::InvalidParameter(format!("alphabet size {} must equal {c}! = {}", self.q, idx.size())));
        }
        self.target.iter().map(|&r| idx.unrank(u64::from(r))).collect()
    }

    /// The matching instance: block `j` occupies ids `(j-1)c+1 ..= jc` on
    /// both sides, and its `k`-th arrival sees `offset + τ_j(l)` for `l ≥ k`.
    pub fn matching_instance(&self, c: usize) -> Result<BipartiteGraph> {
        let n = c * self.len();
        let mut edges = Vec::with_capacity(self.len() * c * (c + 1) / 2);
        for (j, tau) in self.block_perms(c)?.iter().enumerate() {
            let offset = j * c;
            for k in 1..=c {
                for l in k..=c {
                    edges.push((offset + k, offset + tau[l - 1]));
                }
            }
        }
        BipartiteGraph::new(n, n, &edges)
    }

    /// Tape for [`TapeOptimalMatcher`] encoding the instance's unique
    /// perfect matching.
    pub fn optimal_tape(&self, c: usize) -> Result<AdviceTape> {
        let perms = self.block_perms(c)?;
        let mates = perms.iter().enumerate().flat_map(|(j, tau)| tau.iter().map(move |&t| Some(j * c + t)));
        Ok(TapeOptimalMatcher::encode(mates))
    }
}

#[derive(Debug, Clone)]
pub struct SgkhReport {
    /// The guess per request; `None` when the simulated block was not matched
    /// perfectly and no permutation could be read off.
    pub predictions: Vec<Option<u32>>,
    pub correct: usize,
    /// Whether the real matcher matched each block perfectly.
    pub perfect_blocks: Vec<bool>,
    pub graph: BipartiteGraph,
    pub matching: Matching,
    pub requests: usize,
    pub advice_bits: usize,
}

impl SgkhReport {
    /// Blocks where "guessed right" and "matched perfectly" disagree.
    pub fn equivalence_violations(&self, instance: &SgkhInstance) -> Vec<usize> {
        (0..self.predictions.len())
            .filter(|&j| (self.predictions[j] == Some(instance.target[j])) != self.perfect_blocks[j])
            .collect()
    }

    pub fn predicted_string(&self) -> String {
        self.predictions
            .iter()
            .map(|p| p.map_or_else(|| "?".to_string(), |r| r.to_string()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn check_choice(a: usize, choice: Option<usize>, neighbors: &[usize], taken: &[bool]) -> Result<()> {
    if let Some(b) = choice {
        if neighbors.binary_search(&b).is_err() {
            return Err(Error::ProtocolViolation(format!("a{a} matched to non-neighbor b{b}")));
        }
        if taken[b] {
            return Err(Error::ProtocolViolation(format!("a{a} matched to taken b{b}")));
        }
    }
    Ok(())
}

/// Runs the reduction with alphabet size `c!`.
pub fn sgkh_reduction_run<M: OnlineMatcher>(alg: M, instance: &SgkhInstance, c: usize) -> Result<SgkhReport> {
    let idx = PermutationIndex::new(c)?;
    let perms = instance.block_perms(c)?;
    let graph = instance.matching_instance(c)?;
    let n = graph.n();
    let mut alg = alg;
    let mut taken = vec![false; n + 1];
    let mut matching = Matching::new(n, n);
    let mut predictions = Vec::with_capacity(instance.len());
    let mut perfect_blocks = Vec::with_capacity(instance.len());

    for (j, tau) in perms.iter().enumerate() {
        let offset = j * c;

        let mut sim = alg.clone();
        let mut sim_taken = taken.clone();
        let mut seen = Vec::with_capacity(c);
        for k in 1..=c {
            let a = offset + k;
            let free: Vec<usize> = (offset + 1..=offset + c).filter(|&b| !sim_taken[b]).collect();
            let choice = sim.arrive(a, &free)?;
            check_choice(a, choice, &free, &sim_taken)?;
            if let Some(b) = choice {
                sim_taken[b] = true;
                seen.push(b - offset);
            }
        }
        let prediction = if seen.len() == c { Some(idx.rank(&seen)? as u32) } else { None };
        predictions.push(prediction);

        let mut matched = 0;
        for k in 1..=c {
            let a = offset + k;
            let choice = alg.arrive(a, graph.neighbors(a))?;
            check_choice(a, choice, graph.neighbors(a), &taken)?;
            if let Some(b) = choice {
                taken[b] = true;
                matching.insert(a, b)?;
                matched += 1;
            }
        }
        debug_assert_eq!(tau.len(), c);
        perfect_blocks.push(matched == c);
    }

    let correct = predictions.iter().zip(instance.target()).filter(|(p, &r)| **p == Some(r)).count();
    Ok(SgkhReport {
        predictions,
        correct,
        perfect_blocks,
        requests: n,
        advice_bits: alg.advice_bits_read(),
        graph,
        matching,
    })
}

/// q-ary entropy, with `0 · log 0 = 0`.
pub fn entropy_q(q: u64, p: f64) -> f64 {
    let ln_q = (q as f64).ln();
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    let first = if p <= 0.0 { 0.0 } else { p * ((q - 1) as f64).ln() };
    (first - xlogx(p) - xlogx(1.0 - p)) / ln_q
}

/// Advice bits per request forced on any deterministic `ρ`-competitive
/// matcher through the reduction with blocks of size `c`.
pub fn advice_lb_per_request(c: usize, rho: f64) -> Result<f64> {
    if !(3..=20).contains(&c) {
        return Err(Error::InvalidParameter(format!("block size must be in 3..=20, got {c}")));
    }
    let q = factorial(c);
    let low = 1.0 - 1.0 / c as f64 + 1.0 / q as f64;
    if !(rho >= low - 1e-12 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside the valid interval [{low}, 1) for c = {c}")));
    }
    let alpha = 1.0 - (1.0 - rho) * c as f64;
    Ok((1.0 - entropy_q(q, 1.0 - alpha)) / 2.0 * (c as f64).log2())
}
