//! Arrival orders `π`, rankings `σ` and category maps `c`.
//!
//! Both permutation types serialize as a single line of whitespace-separated
//! 1-based integers: an [`ArrivalOrder`] lists the A-vertices in arrival
//! order, a [`RankingPermutation`] lists `σ(1) σ(2) … σ(m)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Subgraph;

fn check_permutation(values: &[usize]) -> Result<()> {
    let len = values.len();
    let mut seen = vec![false; len + 1];
    for &v in values {
        if v == 0 || v > len {
            return Err(Error::NotAPermutation { len, reason: format!("{v} out of range") });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotAPermutation { len, reason: format!("{v} repeated") });
        }
    }
    Ok(())
}

fn parse_line(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|e| Error::Parse { line: 1, msg: format!("bad integer `{tok}`: {e}") })
        })
        .collect()
}

fn write_line(f: &mut fmt::Formatter<'_>, values: &[usize]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// `π`: the order in which A-vertices arrive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrivalOrder {
    order: Vec<usize>,
}

impl ArrivalOrder {
    /// `order[t]` is the A-vertex arriving at step `t + 1`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_permutation(&order)?;
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Self {
        Self { order: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied()
    }

    /// `time[a - 1]` is the 0-based step at which `a` arrives.
    pub fn arrival_times(&self) -> Vec<usize> {
        let mut time = vec![0; self.order.len()];
        for (t, &a) in self.order.iter().enumerate() {
            time[a - 1] = t;
        }
        time
    }

    /// The order restricted to the A-vertices kept in `sub`, in subgraph ids.
    pub fn restrict(&self, sub: &Subgraph) -> ArrivalOrder {
        Self { order: self.order.iter().filter_map(|&a| sub.local_a(a)).collect() }
    }
}

impl fmt::Display for ArrivalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_line(f, &self.order)
    }
}

impl FromStr for ArrivalOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_line(s)?)
    }
}

/// `σ`: the rank of every B-vertex; lower ranks are preferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankingPermutation {
    rank: Vec<usize>,
}

impl RankingPermutation {
    /// `ranks[b - 1] = σ(b)`.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        check_permutation(&ranks)?;
        Ok(Self { rank: ranks })
    }

    /// `order[r - 1]` is the B-vertex of rank `r`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        check_permutation(order)?;
        let mut rank = vec![0; order.len()];
        for (i, &b) in order.iter().enumerate() {
            rank[b - 1] = i + 1;
        }
        Ok(Self { rank })
    }

    pub fn identity(m: usize) -> Self {
        Self { rank: (1..=m).collect() }
    }

    pub fn reverse(m: usize) -> Self {
        Self { rank: (1..=m).rev().collect() }
    }

    /// `σ_c`: lower category first, ties by ascending vertex id. Categories
    /// may be any integers; only their relative order matters.
    pub fn from_categories(categories: &[u32]) -> Self {
        let mut order: Vec<usize> = (1..=categories.len()).collect();
        // stable: equal categories keep ascending id order
        order.sort_by_key(|&b| categories[b - 1]);
        let mut rank = vec![0; order.len()];
        for (i, &b) in order.iter().enumerate() {
            rank[b - 1] = i + 1;
        }
        Self { rank }
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, b: usize) -> usize {
        self.rank[b - 1]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// B-vertices from most to least preferred.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.rank.len()];
        for (i, &r) in self.rank.iter().enumerate() {
            order[r - 1] = i + 1;
        }
        order
    }

    /// The ranking restricted to the B-vertices kept in `sub`, re-ranked
    /// `1..` while preserving relative order.
    pub fn restrict(&self, sub: &Subgraph) -> RankingPermutation {
        let order: Vec<usize> = self.order().into_iter().filter_map(|b| sub.local_b(b)).collect();
        Self::from_order(&order).expect("restriction of a permutation is a permutation")
    }

    /// Moves `b` to rank `new_rank <= σ(b)`, shifting the vertices in between
    /// one rank down.
    pub fn promote(&self, b: usize, new_rank: usize) -> Result<RankingPermutation> {
        let old = self.rank(b);
        if new_rank == 0 || new_rank > old {
            return Err(Error::InvalidParameter(format!(
                "cannot promote b{b} from rank {old} to rank {new_rank}"
            )));
        }
        let mut order = self.order();
        order.remove(old - 1);
        order.insert(new_rank - 1, b);
        Self::from_order(&order)
    }
}

impl fmt::Display for RankingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_line(f, &self.rank)
    }
}

impl FromStr for RankingPermutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_ranks(parse_line(s)?)
    }
}

/// `c: [m] → {1..2^k}` with `2^k < m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryAssignment {
    k: u32,
    categories: Vec<u32>,
}

impl CategoryAssignment {
    pub fn new(k: u32, categories: Vec<u32>) -> Result<Self> {
        let m = categories.len();
        check_category_bits(k, m)?;
        let top = 1u64 << k;
        if let Some(&c) = categories.iter().find(|&&c| c == 0 || u64::from(c) > top) {
            return Err(Error::InvalidParameter(format!("category {c} outside 1..={top}")));
        }
        Ok(Self { k, categories })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> usize {
        self.categories.len()
    }

    pub fn category(&self, b: usize) -> u32 {
        self.categories[b - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.categories
    }
}

/// Rejects `k = 0` and `2^k >= m`.
pub(crate) fn check_category_bits(k: u32, m: usize) -> Result<()> {
    if k == 0 || k >= 63 || (1u64 << k) >= m as u64 {
        return Err(Error::InvalidParameter(format!(
            "category algorithms need k >= 1 and 2^k < m (k = {k}, m = {m})"
        )));
    }
    Ok(())
}

/// `σ_c`: `σ_c(b1) < σ_c(b2)` iff `c(b1) < c(b2)`, or the categories tie and `b1 < b2`.
pub fn category_to_permutation(c: &CategoryAssignment) -> RankingPermutation {
    RankingPermutation::from_categories(c.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BipartiteGraph, Vertex};

    #[test]
    fn category_order_is_forced() {
        let c = CategoryAssignment::new(1, vec![2, 1, 2]).unwrap();
        let sigma = category_to_permutation(&c);
        assert_eq!(sigma.order(), vec![2, 1, 3]);
        let same = CategoryAssignment::new(1, vec![1, 1, 1]).unwrap();
        assert_eq!(category_to_permutation(&same), RankingPermutation::identity(3));
    }

    #[test]
    fn recategorising_one_vertex_keeps_the_others_in_order() {
        let base = vec![2, 1, 3, 4, 1, 2, 4, 3, 1];
        let sigma = RankingPermutation::from_categories(&base);
        for b in 1..=base.len() {
            for c in 1..=4 {
                let mut changed = base.clone();
                changed[b - 1] = c;
                let sigma2 = RankingPermutation::from_categories(&changed);
                let keep = |s: &RankingPermutation| {
                    s.order().into_iter().filter(|&x| x != b).collect::<Vec<_>>()
                };
                assert_eq!(keep(&sigma), keep(&sigma2));
            }
        }
    }

    #[test]
    fn category_assignment_checks() {
        assert!(CategoryAssignment::new(1, vec![1, 2]).is_err()); // 2^1 = m
        assert!(CategoryAssignment::new(0, vec![1, 1, 1]).is_err());
        assert!(CategoryAssignment::new(1, vec![1, 3, 1]).is_err());
        assert!(CategoryAssignment::new(2, vec![4, 1, 2, 3, 1]).is_ok());
    }

    #[test]
    fn permutations_validate_and_serialize() {
        assert!(ArrivalOrder::new(vec![1, 1]).is_err());
        assert!(ArrivalOrder::new(vec![0, 1]).is_err());
        let pi: ArrivalOrder = "3 1 2".parse().unwrap();
        assert_eq!(pi.arrival_times(), vec![1, 2, 0]);
        assert_eq!(pi.to_string(), "3 1 2");
        let sigma: RankingPermutation = "2 3 1".parse().unwrap();
        assert_eq!(sigma.order(), vec![3, 1, 2]);
        assert_eq!(RankingPermutation::from_order(&[3, 1, 2]).unwrap(), sigma);
        assert!("1 2 x".parse::<RankingPermutation>().is_err());
    }

    #[test]
    fn promote_and_restrict() {
        let sigma = RankingPermutation::identity(4);
        let p = sigma.promote(4, 2).unwrap();
        assert_eq!(p.order(), vec![1, 4, 2, 3]);
        assert!(sigma.promote(2, 3).is_err());

        let g = BipartiteGraph::empty(3, 4);
        let sub = g.remove_vertex(Vertex::B(2)).unwrap();
        let r = p.restrict(&sub);
        // remaining parent order 1,4,3 -> local ids 1,3,2
        assert_eq!(r.order(), vec![1, 3, 2]);
        let sub = g.remove_vertex(Vertex::A(1)).unwrap();
        let pi = ArrivalOrder::new(vec![3, 1, 2]).unwrap().restrict(&sub);
        assert_eq!(pi.as_slice(), &[2, 1]);
    }
}
