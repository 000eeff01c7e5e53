//! Derandomization by covering: trade the random string of a randomized
//! algorithm for a short index into a small set of good strings.
//!
//! For a finite input family, the ratio matrix holds the competitive ratio of
//! every (input, random string) pair, and `E` is its minimum row mean. Some
//! column must then average at least `E` over any set of rows, so repeatedly
//! taking the best column for the still-uncovered rows and marking every row
//! it serves at ratio `≥ (1 − ε)E` covers the family. The advice is the
//! position, within the chosen strings, of a string covering the input.

use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::advice::{bit_width, AdviceTape};
use crate::bits::{bits_of, FixedBits};
use crate::category::randomized_category;
use crate::engine::kvv_run;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::lowerbounds::PermutationIndex;
use crate::matching::{max_matching, Matching};
use crate::order::ArrivalOrder;

/// Matrix size cap for [`build_ratio_matrix`].
pub const MAX_MATRIX_ENTRIES: u128 = 1 << 22;

/// A randomized algorithm whose random bits are an explicit argument.
pub trait BitStringAlgorithm: Sync {
    /// Length of the random string used on `g`.
    fn random_bits(&self, g: &BipartiteGraph) -> usize;

    fn run(&self, g: &BipartiteGraph, pi: &ArrivalOrder, bits: &[bool]) -> Result<Matching>;
}

/// [`randomized_category`] with parameter `k`: `k·m` bits.
#[derive(Debug, Clone, Copy)]
pub struct CategoryAlgorithm {
    pub k: u32,
}

impl BitStringAlgorithm for CategoryAlgorithm {
    fn random_bits(&self, g: &BipartiteGraph) -> usize {
        self.k as usize * g.m()
    }

    fn run(&self, g: &BipartiteGraph, pi: &ArrivalOrder, bits: &[bool]) -> Result<Matching> {
        Ok(randomized_category(g, pi, self.k, &mut FixedBits::new(bits))?.matching)
    }
}

/// [`kvv_run`] fed from a fixed string of `Σ_{i=2..m} ⌈log₂ i⌉` bits. For
/// `m ≤ 2` no draw is ever rejected; on larger `m` a string whose rejection
/// sampling runs dry is reported as an error.
#[derive(Debug, Clone, Copy)]
pub struct KvvAlgorithm;

impl BitStringAlgorithm for KvvAlgorithm {
    fn random_bits(&self, g: &BipartiteGraph) -> usize {
        (2..=g.m() as u64).map(|i| bit_width(i - 1) as usize).sum()
    }

    fn run(&self, g: &BipartiteGraph, pi: &ArrivalOrder, bits: &[bool]) -> Result<Matching> {
        Ok(kvv_run(g, pi, &mut FixedBits::new(bits))?.matching)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInput {
    pub graph: BipartiteGraph,
    pub pi: ArrivalOrder,
}

/// `g` under every arrival order, in lexicographic order of `π`.
pub fn arrival_order_family(g: &BipartiteGraph) -> Result<Vec<FamilyInput>> {
    let idx = PermutationIndex::new(g.n())?;
    idx.iter().map(|order| Ok(FamilyInput { graph: g.clone(), pi: ArrivalOrder::new(order)? })).collect()
}

/// Every bipartite graph on `n × m` vertices (by adjacency bit pattern)
/// under every arrival order.
pub fn all_inputs_family(n: usize, m: usize) -> Result<Vec<FamilyInput>> {
    if n * m > 16 {
        return Err(Error::InvalidParameter(format!("{n}x{m} has too many graphs to enumerate")));
    }
    let mut out = Vec::new();
    for pattern in 0u64..(1 << (n * m)) {
        let rows: Vec<u64> = (0..n).map(|a| (pattern >> (a * m)) & ((1 << m) - 1)).collect();
        let g = BipartiteGraph::from_row_masks(n, m, &rows);
        out.extend(arrival_order_family(&g)?);
    }
    Ok(out)
}

/// Exact ratios: row `i` holds the matched sizes `num[i][j]` over the common
/// denominator `den[i] = |M*|` (a row with `|M*| = 0` is all ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioMatrix {
    r: usize,
    num: Vec<Vec<u32>>,
    den: Vec<u32>,
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl RatioMatrix {
    pub fn rows(&self) -> usize {
        self.num.len()
    }

    pub fn cols(&self) -> usize {
        1 << self.r
    }

    /// Random-string length.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        ratio(u64::from(self.num[i][j]), u64::from(self.den[i]))
    }

    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        f64::from(self.num[i][j]) / f64::from(self.den[i])
    }

    pub fn row_mean(&self, i: usize) -> BigRational {
        let total: u64 = self.num[i].iter().map(|&x| u64::from(x)).sum();
        ratio(total, u64::from(self.den[i]) * self.cols() as u64)
    }

    /// `E`: the minimum row mean.
    pub fn expected_ratio(&self) -> BigRational {
        (0..self.rows()).map(|i| self.row_mean(i)).min().unwrap_or_else(BigRational::one)
    }

    /// The random string of column `j`.
    pub fn string(&self, j: usize) -> Vec<bool> {
        bits_of(j as u64, self.r)
    }

    /// Whether `A[i][j] ≥ threshold`, exactly.
    fn at_least(&self, i: usize, j: usize, threshold: &BigRational) -> bool {
        BigRational::from_integer(BigInt::from(self.num[i][j])) >= threshold * BigInt::from(self.den[i])
    }
}

/// Replays `alg` on every input under every `r`-bit string, `r` taken from
/// the first input; all inputs must use the same `r`.
pub fn build_ratio_matrix<A: BitStringAlgorithm>(family: &[FamilyInput], alg: &A) -> Result<RatioMatrix> {
    let r = family.first().map_or(0, |x| alg.random_bits(&x.graph));
    if let Some(x) = family.iter().find(|x| alg.random_bits(&x.graph) != r) {
        return Err(Error::SizeMismatch(format!(
            "inputs need {} and {r} random bits",
            alg.random_bits(&x.graph)
        )));
    }
    let entries = if r >= 64 { u128::MAX } else { family.len() as u128 * (1u128 << r) };
    if entries > MAX_MATRIX_ENTRIES {
        return Err(Error::BudgetExceeded { entries, limit: MAX_MATRIX_ENTRIES });
    }
    let den: Vec<u32> = family.iter().map(|x| max_matching(&x.graph).len() as u32).collect();
    let cols: Vec<Vec<u32>> = (0..1usize << r)
        .into_par_iter()
        .map(|j| {
            let bits = bits_of(j as u64, r);
            family
                .iter()
                .zip(&den)
                .map(|(x, &d)| {
                    let got = alg.run(&x.graph, &x.pi, &bits)?;
                    Ok(if d == 0 { 1 } else { got.len() as u32 })
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<_>>()?;
    let num = (0..family.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let den = den.into_iter().map(|d| d.max(1)).collect();
    Ok(RatioMatrix { r, num, den })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverIteration {
    pub column: usize,
    pub uncovered_before: usize,
    pub newly_covered: usize,
    /// `Σ_{uncovered i} A[i][column]`, as a float for reporting.
    pub column_sum: f64,
}

#[derive(Debug, Clone)]
pub struct CoveringSet {
    r: usize,
    eps: BigRational,
    expected: BigRational,
    /// Chosen columns, in selection order.
    pub strings: Vec<usize>,
    /// `cover[i]` is the position in `strings` serving input `i`.
    pub cover: Vec<usize>,
    pub iterations: Vec<CoverIteration>,
}

impl CoveringSet {
    pub fn expected_ratio(&self) -> &BigRational {
        &self.expected
    }

    /// `(1 − ε)E`.
    pub fn threshold(&self) -> BigRational {
        (BigRational::one() - &self.eps) * &self.expected
    }

    /// Width of the advice index: `⌈log₂|W|⌉`.
    pub fn index_bits(&self) -> u32 {
        bit_width(self.strings.len().saturating_sub(1) as u64)
    }

    pub fn string(&self, pos: usize) -> Vec<bool> {
        bits_of(self.strings[pos] as u64, self.r)
    }

    /// `δ = (1 − E + εE)/E`.
    pub fn delta(&self) -> Option<f64> {
        let e = self.expected.to_f64()?;
        let eps = self.eps.to_f64()?;
        (e > 0.0).then(|| (1.0 - e + eps * e) / e)
    }

    /// `⌈log I / log δ⌉`, defined only for `δ > 1`.
    pub fn classical_iteration_bound(&self) -> Option<usize> {
        let delta = self.delta().filter(|&d| d > 1.0)?;
        let rows = self.cover.len() as f64;
        Some(((rows.ln() / delta.ln()) - 1e-9).ceil().max(1.0) as usize)
    }

    /// Every input is served by its string at ratio `≥ (1 − ε)E`.
    pub fn validate(&self, mat: &RatioMatrix) -> std::result::Result<(), String> {
        let t = self.threshold();
        for (i, &pos) in self.cover.iter().enumerate() {
            let j = *self.strings.get(pos).ok_or_else(|| format!("input {i} points past W"))?;
            if !mat.at_least(i, j, &t) {
                return Err(format!("input {i} gets {} < threshold under column {j}", mat.entry(i, j)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CoveringSet {
    /// Audit manifest: one line per chosen string with the inputs it covers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# E={} eps={} strings={}", self.expected, self.eps, self.strings.len())?;
        for (pos, &j) in self.strings.iter().enumerate() {
            let tape = AdviceTape::from_bits(bits_of(j as u64, self.r));
            let inputs: Vec<String> =
                (0..self.cover.len()).filter(|&i| self.cover[i] == pos).map(|i| i.to_string()).collect();
            writeln!(f, "{pos} {tape} | {}", inputs.join(" "))?;
        }
        Ok(())
    }
}

/// `x` as the decimal it prints as, so `0.2` becomes exactly `1/5`.
fn decimal_rational(x: f64) -> BigRational {
    let text = x.to_string();
    let (int, frac) = text.split_once('.').unwrap_or((&text, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("plain decimal");
    BigRational::new(digits, num::pow(BigInt::from(10), frac.len()))
}

/// Greedy covering with the best column for the uncovered rows each round.
///
/// Each round is checked against two facts that follow from `E` being the
/// minimum row mean: the chosen column's sum over the `U` uncovered rows is
/// at least `|U|·E`, and it covers at least `|U|·εE/(1 − E + εE)` of them.
/// A violation means the matrix or this code is wrong, and is returned as an
/// error.
pub fn build_covering_set(mat: &RatioMatrix, eps: f64) -> Result<CoveringSet> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let eps_q = decimal_rational(eps);
    let expected = mat.expected_ratio();
    let threshold = (BigRational::one() - &eps_q) * &expected;
    let rows = mat.rows();
    let mut cover = vec![usize::MAX; rows];
    let mut uncovered: Vec<usize> = (0..rows).collect();
    let mut strings = Vec::new();
    let mut iterations = Vec::new();

    while !uncovered.is_empty() {
        // column sums over uncovered rows, exactly
        let mut best: Option<(usize, BigRational)> = None;
        for j in 0..mat.cols() {
            let sum = uncovered.iter().fold(BigRational::zero(), |acc, &i| acc + mat.entry(i, j));
            if best.as_ref().is_none_or(|(_, b)| sum > *b) {
                best = Some((j, sum));
            }
        }
        let (column, sum) = best.expect("at least one column");
        let u = BigInt::from(uncovered.len());
        if sum < &expected * &u {
            return Err(Error::InvalidParameter(format!(
                "averaging failed: best column sum {sum} below |U|·E over {} rows",
                uncovered.len()
            )));
        }
        let (hit, miss): (Vec<usize>, Vec<usize>) =
            uncovered.iter().partition(|&&i| mat.at_least(i, column, &threshold));
        let h = BigInt::from(hit.len());
        let one = BigRational::one();
        if BigRational::from_integer(h) * (&one - &expected + &eps_q * &expected) < &eps_q * &expected * &u
            || hit.is_empty()
        {
            return Err(Error::InvalidParameter(format!(
                "column {column} covers only {} of {} rows",
                hit.len(),
                uncovered.len()
            )));
        }
        debug_assert!(!strings.contains(&column));
        for &i in &hit {
            cover[i] = strings.len();
        }
        iterations.push(CoverIteration {
            column,
            uncovered_before: uncovered.len(),
            newly_covered: hit.len(),
            column_sum: sum.to_f64().unwrap_or(f64::NAN),
        });
        strings.push(column);
        uncovered = miss;
    }
    Ok(CoveringSet { r: mat.r, eps: eps_q, expected, strings, cover, iterations })
}

/// Writes `n`, `m` self-delimited, then the position in `W` of the string
/// that covers `input`.
pub fn derandomized_oracle(cover: &CoveringSet, family: &[FamilyInput], input: &FamilyInput) -> Result<AdviceTape> {
    let i = family.iter().position(|x| x == input).ok_or(Error::NotInFamily)?;
    let mut tape = AdviceTape::new();
    tape.write_self_delimited(input.graph.n() as u64);
    tape.write_self_delimited(input.graph.m() as u64);
    tape.write_fixed(cover.cover[i] as u64, cover.index_bits())?;
    Ok(tape)
}

/// Reads the index and runs `alg` with the selected string.
pub fn derandomized_online<A: BitStringAlgorithm>(
    cover: &CoveringSet,
    alg: &A,
    g: &BipartiteGraph,
    pi: &ArrivalOrder,
    tape: &mut AdviceTape,
) -> Result<Matching> {
    let n = tape.read_self_delimited()? as usize;
    let m = tape.read_self_delimited()? as usize;
    if (n, m) != (g.n(), g.m()) {
        return Err(Error::AdviceInconsistency(format!("tape is for {n}x{m}, input is {}x{}", g.n(), g.m())));
    }
    let pos = tape.read_fixed(cover.index_bits())? as usize;
    if pos >= cover.strings.len() {
        return Err(Error::AdviceInconsistency(format!("index {pos} past {} strings", cover.strings.len())));
    }
    alg.run(g, pi, &cover.string(pos))
}
