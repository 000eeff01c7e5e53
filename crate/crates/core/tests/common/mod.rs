#![allow(dead_code)]

use advmatch::graph::BipartiteGraph;
use advmatch::matching::Matching;

/// Maximum matching size by trying every way to match or skip each
/// A-vertex. Exponential; only for tiny graphs.
pub fn brute_force_max(g: &BipartiteGraph) -> usize {
    fn go(g: &BipartiteGraph, a: usize, used: &mut Vec<bool>) -> usize {
        if a > g.n() {
            return 0;
        }
        let mut best = go(g, a + 1, used);
        for &b in g.neighbors(a) {
            if !used[b] {
                used[b] = true;
                best = best.max(1 + go(g, a + 1, used));
                used[b] = false;
            }
        }
        best
    }
    go(g, 1, &mut vec![false; g.m() + 1])
}

/// Every graph on `n × m` vertices, as adjacency bit rows.
pub fn all_graphs(n: usize, m: usize) -> impl Iterator<Item = BipartiteGraph> {
    (0u64..1 << (n * m)).map(move |p| {
        let rows: Vec<u64> = (0..n).map(|a| (p >> (a * m)) & ((1 << m) - 1)).collect();
        BipartiteGraph::from_row_masks(n, m, &rows)
    })
}

pub fn is_valid_matching(g: &BipartiteGraph, m: &Matching) -> bool {
    m.validate(g).is_ok()
}

/// Prints one acceptance line and returns whether it passed.
pub fn report(id: u32, title: &str, pass: bool, detail: &str) -> bool {
    println!("criterion {id} [{}] {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

/// All orders of `1..=n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    advmatch::lowerbounds::PermutationIndex::new(n).unwrap().iter().collect()
}

/// A seeded shuffle of `1..=n`.
pub fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    v
}
