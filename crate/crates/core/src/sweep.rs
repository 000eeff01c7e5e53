//! Exhaustive invariant sweeps over all small bipartite graphs.
//!
//! Relabeling A by arrival time and B by rank turns any `(G, π, σ)` into an
//! isomorphic `(G′, id, id)`, and the family of all graphs on `n × m`
//! vertices is closed under relabeling. So sweeping every adjacency pattern
//! with identity orders covers every triple. Arrival orders are still
//! enumerated explicitly for the advice check at small `n`, since that
//! algorithm's tie-breaking depends on B-ids.
//!
//! The kernels work on adjacency bit rows (bit `j` = B-vertex `j+1`) and
//! never allocate; [`crate::engine`] is the reference they are tested
//! against.

use std::fmt;

use rayon::prelude::*;

const NONE: u8 = u8::MAX;
/// Largest side length the kernels support.
pub const MAX_SIDE: usize = 8;

type Mates = [u8; MAX_SIDE];

/// Ranking with A arriving in row order and B ranked by bit position.
/// `skip_a` drops one A-row; bits in `removed_b` are unavailable.
fn ranking_bits(rows: &[u64], skip_a: Option<usize>, removed_b: u64) -> Mates {
    let mut taken = removed_b;
    let mut mate = [NONE; MAX_SIDE];
    for (a, &row) in rows.iter().enumerate() {
        if Some(a) == skip_a {
            continue;
        }
        let avail = row & !taken;
        if avail != 0 {
            let b = avail.trailing_zeros();
            taken |= 1 << b;
            mate[a] = b as u8;
        }
    }
    mate
}

fn matched_count(mate: &Mates) -> u32 {
    mate.iter().filter(|&&b| b != NONE).count() as u32
}

fn augment(a: usize, rows: &[u64], mate_b: &mut Mates, seen: &mut u64) -> bool {
    let mut cand = rows[a] & !*seen;
    while cand != 0 {
        let b = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        *seen |= 1 << b;
        if mate_b[b] == NONE || augment(mate_b[b] as usize, rows, mate_b, seen) {
            mate_b[b] = a as u8;
            return true;
        }
    }
    false
}

/// Maximum matching size by augmenting paths.
fn max_matching_bits(rows: &[u64]) -> u32 {
    let mut mate_b = [NONE; MAX_SIDE];
    let mut size = 0;
    for a in 0..rows.len() {
        let mut seen = 0;
        if augment(a, rows, &mut mate_b, &mut seen) {
            size += 1;
        }
    }
    size
}

fn inverse(mate: &Mates) -> Mates {
    let mut inv = [NONE; MAX_SIDE];
    for (a, &b) in mate.iter().enumerate() {
        if b != NONE {
            inv[b as usize] = a as u8;
        }
    }
    inv
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    B,
}

/// Whether the symmetric difference of `m1` (with `start`) and `m2`
/// (without it) is empty or one alternating path beginning at `start`.
fn single_path_from(m1: &Mates, m2: &Mates, start: (Side, usize)) -> bool {
    let total = (0..MAX_SIDE)
        .filter(|&a| m1[a] != NONE && m1[a] != m2[a])
        .chain((0..MAX_SIDE).filter(|&a| m2[a] != NONE && m2[a] != m1[a]))
        .count();
    let (inv1, inv2) = (inverse(m1), inverse(m2));
    let (mut side, mut v) = start;
    let mut use_first = true;
    let mut walked = 0;
    loop {
        let (mate, inv, other) = if use_first { (m1, &inv1, m2) } else { (m2, &inv2, m1) };
        let (a, b) = match side {
            Side::A if mate[v] != NONE => (v, mate[v] as usize),
            Side::B if inv[v] != NONE => (inv[v] as usize, v),
            _ => break,
        };
        if other[a] as usize == b {
            return false;
        }
        walked += 1;
        if walked > 2 * MAX_SIDE {
            return false;
        }
        (side, v) = match side {
            Side::A => (Side::B, b),
            Side::B => (Side::A, a),
        };
        use_first = !use_first;
    }
    walked == total
}

/// Moves bit `from` down to position `to < from`, shifting the bits in
/// between up by one.
fn promote_bits(row: u64, from: u32, to: u32) -> u64 {
    let below = (1u64 << to) - 1;
    let span = ((1u64 << from) - 1) & !below;
    let above = !((1u64 << (from + 1)) - 1);
    (row & below) | ((row & span) << 1) | (row & above) | (((row >> from) & 1) << to)
}

/// Inverse of [`promote_bits`] on a single position.
fn demote_position(y: u8, from: u8, to: u8) -> u8 {
    if y == to {
        from
    } else if y > to && y <= from {
        y - 1
    } else {
        y
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub example: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), ..Self::default() }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }

    fn merge(mut self, other: SuiteReport) -> Self {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.example.is_none() {
            self.example = other.example;
        }
        self
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checked, {} violations", self.name, self.checked, self.violations)?;
        if let Some(e) = &self.example {
            write!(f, " (first: {e})")?;
        }
        Ok(())
    }
}

/// Results of [`exhaustive_sweep`], one report per property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    /// Ranking on `G` and `G − v` differ by nothing or one alternating path
    /// starting at `v`.
    pub monotonicity: SuiteReport,
    /// After promoting an unmatched `b`, every previously matched A-vertex
    /// stays matched, to `b` itself or to a vertex ranked no worse than its
    /// old mate.
    pub upgrade: SuiteReport,
    /// The same with ranks compared under the new ranking.
    pub upgrade_new_ranks: SuiteReport,
    /// The statement with no exception for the promoted vertex; expected to
    /// fail, kept for the record.
    pub upgrade_literal: SuiteReport,
    /// `5|M| ≥ 3|M*|` and `|M| ≥ |M_G|` for the one-bit-per-B advice
    /// algorithm.
    pub three_fifths: SuiteReport,
    /// `2|Greedy| ≥ |M*|`.
    pub greedy_half: SuiteReport,
}

impl SweepReport {
    pub fn suites(&self) -> [&SuiteReport; 6] {
        [
            &self.monotonicity,
            &self.upgrade,
            &self.upgrade_new_ranks,
            &self.upgrade_literal,
            &self.three_fifths,
            &self.greedy_half,
        ]
    }

    fn empty() -> Self {
        Self {
            monotonicity: SuiteReport::new("monotonicity"),
            upgrade: SuiteReport::new("upgrade"),
            upgrade_new_ranks: SuiteReport::new("upgrade (new ranks)"),
            upgrade_literal: SuiteReport::new("upgrade (literal)"),
            three_fifths: SuiteReport::new("advice 3/5"),
            greedy_half: SuiteReport::new("greedy half"),
        }
    }

    fn merge(self, o: SweepReport) -> Self {
        Self {
            monotonicity: self.monotonicity.merge(o.monotonicity),
            upgrade: self.upgrade.merge(o.upgrade),
            upgrade_new_ranks: self.upgrade_new_ranks.merge(o.upgrade_new_ranks),
            upgrade_literal: self.upgrade_literal.merge(o.upgrade_literal),
            three_fifths: self.three_fifths.merge(o.three_fifths),
            greedy_half: self.greedy_half.merge(o.greedy_half),
        }
    }
}

fn describe(rows: &[u64], m: usize, extra: &str) -> String {
    let rows: Vec<String> = rows.iter().map(|r| format!("{:0w$b}", r, w = m)).collect();
    format!("rows [{}] (bit j = b{{j+1}}) {extra}", rows.join(" "))
}

/// Advice algorithm on rows already in arrival order: returns
/// `(|M_G|, |M|)`.
fn three_fifths_run(rows: &[u64], m: usize) -> (u32, u32) {
    let mg = ranking_bits(rows, None, 0);
    let matched_b = mg.iter().filter(|&&b| b != NONE).fold(0u64, |acc, &b| acc | 1 << b);
    // σ_c: unmatched B first, then matched, each in id order
    let mut pos = [0u8; MAX_SIDE];
    let mut next = 0;
    for pass in [false, true] {
        for (b, slot) in pos.iter_mut().enumerate().take(m) {
            if (matched_b >> b & 1 == 1) == pass {
                *slot = next;
                next += 1;
            }
        }
    }
    let mut permuted = [0u64; MAX_SIDE];
    for (a, &row) in rows.iter().enumerate() {
        let mut bits = row;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            permuted[a] |= 1 << pos[b];
        }
    }
    let out = ranking_bits(&permuted[..rows.len()], None, 0);
    (matched_count(&mg), matched_count(&out))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permutations(n, &mut perm, &mut out);
    out
}

fn heap_permutations(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(perm.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, perm, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        perm.swap(j, k - 1);
    }
}

fn check_graph(rows: &[u64], m: usize, orders: &[Vec<usize>], r: &mut SweepReport) {
    let n = rows.len();
    let opt = max_matching_bits(rows);
    let base = ranking_bits(rows, None, 0);
    let size = matched_count(&base);
    r.greedy_half.record(2 * size >= opt, || describe(rows, m, &format!("greedy {size}, opt {opt}")));

    for a in 0..n {
        let without = ranking_bits(rows, Some(a), 0);
        r.monotonicity.record(single_path_from(&base, &without, (Side::A, a)), || {
            describe(rows, m, &format!("remove a{}", a + 1))
        });
    }
    for b in 0..m {
        let without = ranking_bits(rows, None, 1 << b);
        r.monotonicity.record(single_path_from(&base, &without, (Side::B, b)), || {
            describe(rows, m, &format!("remove b{}", b + 1))
        });
    }

    let matched_b = base.iter().filter(|&&b| b != NONE).fold(0u64, |acc, &b| acc | 1 << b);
    let mut promoted = [0u64; MAX_SIDE];
    for b in (0..m as u32).filter(|&b| matched_b >> b & 1 == 0) {
        for to in 0..b {
            for (a, &row) in rows.iter().enumerate() {
                promoted[a] = promote_bits(row, b, to);
            }
            let after = ranking_bits(&promoted[..n], None, 0);
            let (mut ok, mut ok_new, mut ok_literal) = (true, true, true);
            for a in 0..n {
                if base[a] == NONE {
                    continue;
                }
                if after[a] == NONE {
                    (ok, ok_new, ok_literal) = (false, false, false);
                    continue;
                }
                let old_rank = base[a];
                let new_id = demote_position(after[a], b as u8, to as u8);
                ok &= new_id == b as u8 || new_id <= old_rank;
                ok_literal &= new_id <= old_rank;
                // old mate's position under the new ranking
                let old_in_new = if old_rank >= to as u8 && old_rank < b as u8 { old_rank + 1 } else { old_rank };
                ok_new &= after[a] <= old_in_new;
            }
            let what = || describe(rows, m, &format!("promote b{} to rank {}", b + 1, to + 1));
            r.upgrade.record(ok, what);
            r.upgrade_new_ranks.record(ok_new, what);
            r.upgrade_literal.record(ok_literal, what);
        }
    }

    let mut arranged = [0u64; MAX_SIDE];
    for order in orders {
        for (t, &a) in order.iter().enumerate() {
            arranged[t] = rows[a];
        }
        let (mg, got) = three_fifths_run(&arranged[..n], m);
        r.three_fifths.record(5 * got >= 3 * opt && got >= mg, || {
            describe(rows, m, &format!("arrival {order:?}: |M_G| {mg}, |M| {got}, opt {opt}"))
        });
    }
}

/// Every property on every graph with `1 ≤ n ≤ max_n`, `1 ≤ m ≤ max_m`.
/// The advice check additionally runs every arrival order when
/// `n ≤ orders_max_n`.
pub fn exhaustive_sweep(max_n: usize, max_m: usize, orders_max_n: usize) -> SweepReport {
    assert!(max_n <= MAX_SIDE && max_m <= MAX_SIDE && max_n * max_m <= 36, "sweep too large");
    let mut total = SweepReport::empty();
    for n in 1..=max_n {
        let orders = if n <= orders_max_n { permutations(n) } else { vec![(0..n).collect()] };
        for m in 1..=max_m {
            let patterns = 1u64 << (n * m);
            let mask = (1u64 << m) - 1;
            let part = (0..patterns)
                .into_par_iter()
                .fold(SweepReport::empty, |mut acc, p| {
                    let mut rows = [0u64; MAX_SIDE];
                    for (a, row) in rows.iter_mut().enumerate().take(n) {
                        *row = (p >> (a * m)) & mask;
                    }
                    check_graph(&rows[..n], m, &orders, &mut acc);
                    acc
                })
                .reduce(SweepReport::empty, SweepReport::merge);
            total = total.merge(part);
        }
    }
    total
}
