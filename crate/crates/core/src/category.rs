//! Category algorithms: Ranking under a coarse category map.
//!
//! * [`randomized_category`] draws every category uniformly with exactly `k`
//!   random bits, for `k·m` bits per run.
//! * [`advice_category_oracle`] / [`advice_category_online`] use one advice
//!   bit per B-vertex: category 1 for vertices left unmatched by Ranking under
//!   the identity ranking, category 2 for the rest.
//!
//! The closed forms for the randomized guarantee live here too.

use num::{BigInt, BigRational, One};

use crate::advice::AdviceTape;
use crate::bits::BitSource;
use crate::engine::ranking_run;
use crate::error::Result;
use crate::graph::{BipartiteGraph, Vertex};
use crate::matching::Matching;
use crate::order::{check_category_bits, ArrivalOrder, CategoryAssignment, RankingPermutation};

#[derive(Debug, Clone)]
pub struct CategoryRun {
    pub matching: Matching,
    pub categories: CategoryAssignment,
    pub sigma: RankingPermutation,
    pub bits_used: u64,
}

impl CategoryRun {
    /// `(size of B_i, matched vertices of B_i)` for `i = 1..=2^k`.
    pub fn category_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); 1 << self.categories.k()];
        for (i, &c) in self.categories.as_slice().iter().enumerate() {
            let slot = &mut counts[c as usize - 1];
            slot.0 += 1;
            if self.matching.mate_of_b(i + 1).is_some() {
                slot.1 += 1;
            }
        }
        counts
    }
}

/// Draws `c(b)` for `b = 1..=m` in order, each as `1 +` a `k`-bit big-endian
/// integer, then runs Ranking under `σ_c`. Requires `2^k < m`.
pub fn randomized_category<S: BitSource>(
    g: &BipartiteGraph,
    pi: &ArrivalOrder,
    k: u32,
    src: &mut S,
) -> Result<CategoryRun> {
    check_category_bits(k, g.m())?;
    let before = src.bits_consumed();
    let mut cats = Vec::with_capacity(g.m());
    for _ in 0..g.m() {
        cats.push(src.next_bits(k)? as u32 + 1);
    }
    let categories = CategoryAssignment::new(k, cats)?;
    let sigma = RankingPermutation::from_categories(categories.as_slice());
    let matching = ranking_run(g, pi, &sigma);
    Ok(CategoryRun { matching, categories, sigma, bits_used: src.bits_consumed() - before })
}

/// `1 − (2^k/(2^k+1))^(2^k)`, the expected competitive ratio guaranteed for
/// [`randomized_category`].
pub fn category_ratio_bound(k: u32) -> f64 {
    assert!(k >= 1);
    let q = (1u64 << k) as f64;
    1.0 - (q / (q + 1.0)).powf(q)
}

/// [`category_ratio_bound`] in exact rational arithmetic.
pub fn category_ratio_bound_exact(k: u32) -> BigRational {
    assert!((1..=16).contains(&k), "exact form is limited to k <= 16");
    let q = 1usize << k;
    let num = BigInt::from(q).pow(q as u32);
    let den = BigInt::from(q + 1).pow(q as u32);
    BigRational::one() - BigRational::new(num, den)
}

/// `S_i = 2^k · (1 − (2^k/(2^k+1))^i)`, the smallest value of
/// `x_1 + … + x_i` compatible with `x_1 ≥ 1 − 1/(2^k+1)` and
/// `1 − x_i ≤ 2^{-k} Σ_{j≤i} x_j`.
pub fn partial_sum_bound(k: u32, i: u32) -> f64 {
    assert!(k >= 1);
    let q = (1u64 << k) as f64;
    q * (1.0 - (q / (q + 1.0)).powi(i as i32))
}

/// Ranking with `σ(b) = b`, the run the advice oracle inspects.
pub fn identity_ranking(g: &BipartiteGraph, pi: &ArrivalOrder) -> Matching {
    ranking_run(g, pi, &RankingPermutation::identity(g.m()))
}

/// Writes `m` advice bits, bit `b` set iff `b` is matched by Ranking under the
/// identity ranking (bit 0 = category 1, bit 1 = category 2). No maximum
/// matching is needed.
pub fn advice_category_oracle(g: &BipartiteGraph, pi: &ArrivalOrder) -> AdviceTape {
    let m_g = identity_ranking(g, pi);
    let mut tape = AdviceTape::new();
    for b in 1..=g.m() {
        tape.write_bit(m_g.mate_of_b(b).is_some());
    }
    tape
}

/// Reads one bit per B-vertex, builds `σ_c` and runs Ranking.
pub fn advice_category_online(
    g: &BipartiteGraph,
    pi: &ArrivalOrder,
    tape: &mut AdviceTape,
) -> Result<Matching> {
    let mut cats = Vec::with_capacity(g.m());
    for _ in 0..g.m() {
        cats.push(if tape.read_bit()? { 2 } else { 1 });
    }
    let sigma = RankingPermutation::from_categories(&cats);
    Ok(ranking_run(g, pi, &sigma))
}

/// The vertex classes of the 3/5 analysis recomputed from one run: `A_2`/`B_2`
/// are matched by the identity run `M_G`, `A_1`/`B_1` are not, starred sets
/// are intersected with a maximum matching, and `M_ij` counts output edges
/// from `A_i` to `B_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AdviceBreakdown {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub a1_star: usize,
    pub b1_star: usize,
    pub m11: usize,
    pub m12: usize,
    pub m21: usize,
    pub m22: usize,
    pub identity_size: usize,
    pub output_size: usize,
    pub optimum: usize,
}

impl AdviceBreakdown {
    pub fn compute(g: &BipartiteGraph, m_g: &Matching, output: &Matching, optimum: &Matching) -> Self {
        let mut out = AdviceBreakdown {
            identity_size: m_g.len(),
            output_size: output.len(),
            optimum: optimum.len(),
            ..Default::default()
        };
        for a in 1..=g.n() {
            let class2 = m_g.is_matched(Vertex::A(a));
            if class2 {
                out.a2 += 1;
            } else {
                out.a1 += 1;
                if optimum.is_matched(Vertex::A(a)) {
                    out.a1_star += 1;
                }
            }
            if let Some(b) = output.mate_of_a(a) {
                let b_class2 = m_g.is_matched(Vertex::B(b));
                match (class2, b_class2) {
                    (false, false) => out.m11 += 1,
                    (false, true) => out.m12 += 1,
                    (true, false) => out.m21 += 1,
                    (true, true) => out.m22 += 1,
                }
            }
        }
        for b in 1..=g.m() {
            if m_g.is_matched(Vertex::B(b)) {
                out.b2 += 1;
            } else {
                out.b1 += 1;
                if optimum.is_matched(Vertex::B(b)) {
                    out.b1_star += 1;
                }
            }
        }
        out
    }

    /// The structural facts the 3/5 argument relies on; returns the first
    /// one that fails.
    pub fn check(&self) -> std::result::Result<(), String> {
        if self.m11 != 0 {
            return Err(format!("M11 has {} edges", self.m11));
        }
        if 2 * self.m21 < self.b1_star {
            return Err(format!("|M21| = {} < |B1*|/2 = {}/2", self.m21, self.b1_star));
        }
        if self.m22 + self.m21 != self.a2 {
            return Err(format!("|M22| = {} != |A2| - |M21| = {} - {}", self.m22, self.a2, self.m21));
        }
        if self.output_size < self.identity_size {
            return Err(format!("|M| = {} < |M_G| = {}", self.output_size, self.identity_size));
        }
        if 5 * self.output_size < 3 * self.optimum {
            return Err(format!("|M| = {} below 3/5 of {}", self.output_size, self.optimum));
        }
        Ok(())
    }
}
