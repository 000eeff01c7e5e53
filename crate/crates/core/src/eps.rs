//! A `(1 − ε)`-competitive matching algorithm driven by `O(n/ε⁵)` advice bits.
//!
//! The oracle runs a multi-pass augmenting-path algorithm in which every
//! pass `i` is Greedy on an induced subgraph `G[A_i ∪ B_i]`, scanning edges
//! by arrival time of the A-endpoint and then by ascending B-id. That edge
//! order is available online, so the online side can replay every pass in
//! the background. The final matching only ever uses edges produced by some
//! pass, so per A-vertex it is enough to say which pass supplied its edge.
//!
//! Passes:
//!
//! 1. Greedy on all of `G`.
//! 2. Phases. Each phase layers the graph by shortest alternating distance
//!    from the free A-vertices, keeps only vertices on a shortest augmenting
//!    path of at most `L = ⌈1/ε⌉` matched edges, and grows vertex-disjoint
//!    alternating paths one layer at a time. A layer extension is one Greedy
//!    pass between the path frontier and the next layer's B-vertices. Paths
//!    that reach a free B-vertex are augmented when the phase ends. Pruning
//!    guarantees at least one augmentation per phase.
//!
//! Phases stop once the matching reaches `⌈(1 − ε)|M*|⌉`, when no augmenting
//! path with at most `L` matched edges remains (then `|M| ≥ (L+1)/(L+2)·|M*|`),
//! or after `⌈4/ε²⌉` phases.
//!
//! Tape layout, bit-exact: self-delimited `n`, `m`, `P`; `P` blocks of `n`
//! membership bits for `A_i` then `m` for `B_i`, in vertex-id order; then
//! `j(a)` for every A-vertex in *arrival* order, each `⌈log₂(P+1)⌉` bits wide.

use std::fmt;

use crate::advice::{bit_width, self_delimited_len, AdviceTape};
use crate::engine::greedy_edge_run;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::matching::{max_matching, Matching};
use crate::order::ArrivalOrder;

const FREE: usize = 0;

/// `P ≤ PASS_CONSTANT / ε⁵` for every admissible ε.
pub const PASS_CONSTANT: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsParams {
    epsilon: f64,
}

impl EpsParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `L = ⌈1/ε⌉`: augmenting paths searched have at most `L` matched edges.
    pub fn max_path_matched_edges(&self) -> usize {
        ceil_tol(1.0 / self.epsilon)
    }

    pub fn phase_budget(&self) -> usize {
        ceil_tol(4.0 / (self.epsilon * self.epsilon))
    }

    /// Upper bound on the number of passes: one for the initial Greedy plus
    /// at most `L + 1` layer extensions per phase.
    pub fn pass_bound(&self) -> usize {
        1 + self.phase_budget() * (self.max_path_matched_edges() + 1)
    }

    /// Smallest matching size meeting `(1 − ε)·opt`.
    pub fn required_size(&self, opt: usize) -> usize {
        ceil_tol((1.0 - self.epsilon) * opt as f64)
    }
}

// ceil that ignores float noise just above an integer
fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Closed-form advice budget: the header, `P_max` membership blocks and the
/// `j(a)` fields, with `P_max = pass_bound(ε)`. Every tape the oracle writes
/// fits in it.
pub fn advice_budget(n: usize, m: usize, params: &EpsParams) -> usize {
    let p = params.pass_bound();
    self_delimited_len(n as u64)
        + self_delimited_len(m as u64)
        + self_delimited_len(p as u64)
        + p * (n + m)
        + n * bit_width(p as u64) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pass {
    /// Sorted A-ids of `A_i`.
    pub a_set: Vec<usize>,
    /// Sorted B-ids of `B_i`.
    pub b_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassPlan {
    pub n: usize,
    pub m: usize,
    pub passes: Vec<Pass>,
    /// `final_index[a - 1] = j(a)`; 0 when `a` ends unmatched.
    pub final_index: Vec<usize>,
}

impl PassPlan {
    pub fn pass_count(&self) -> usize {
        self.passes.len()
    }

    pub fn write_tape(&self, pi: &ArrivalOrder) -> AdviceTape {
        let p = self.passes.len();
        let mut tape = AdviceTape::new();
        tape.write_self_delimited(self.n as u64);
        tape.write_self_delimited(self.m as u64);
        tape.write_self_delimited(p as u64);
        for pass in &self.passes {
            write_membership(&mut tape, &pass.a_set, self.n);
            write_membership(&mut tape, &pass.b_set, self.m);
        }
        let width = bit_width(p as u64);
        for a in pi.iter() {
            tape.write_fixed(self.final_index[a - 1] as u64, width).expect("index fits its width");
        }
        tape
    }
}

fn write_membership(tape: &mut AdviceTape, members: &[usize], len: usize) {
    let mut bits = vec![false; len];
    for &v in members {
        bits[v - 1] = true;
    }
    for bit in bits {
        tape.write_bit(bit);
    }
}

impl fmt::Display for PassPlan {
    /// Diagnostic dump: one line per pass, `index | A_i ids | B_i ids`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# n={} m={} passes={}", self.n, self.m, self.passes.len())?;
        let join = |ids: &[usize]| ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        for (i, pass) in self.passes.iter().enumerate() {
            writeln!(f, "{} | {} | {}", i + 1, join(&pass.a_set), join(&pass.b_set))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EpsOutcome {
    pub plan: PassPlan,
    pub tape: AdviceTape,
    pub matching: Matching,
    /// `M_i` for every pass, in pass order.
    pub pass_matchings: Vec<Matching>,
    pub phases: usize,
    pub optimum: usize,
}

/// Greedy on `G[A' ∪ B']` in the online edge order.
fn greedy_pass(g: &BipartiteGraph, pi: &ArrivalOrder, in_a: &[bool], in_b: &[bool]) -> Matching {
    let mut out = Matching::new(g.n(), g.m());
    for a in pi.iter() {
        if !in_a[a] {
            continue;
        }
        if let Some(&b) = g.neighbors(a).iter().find(|&&b| in_b[b] && out.mate_of_b(b).is_none()) {
            out.insert_unchecked(a, b);
        }
    }
    out
}

/// The same pass computed the long way: induced subgraph, explicit edge
/// order, offline Greedy, lift back to the parent ids.
pub fn replay_pass(g: &BipartiteGraph, pi: &ArrivalOrder, pass: &Pass) -> Result<Matching> {
    let sub = g.induced_subgraph(&pass.a_set, &pass.b_set)?;
    let local_pi = pi.restrict(&sub);
    let omega: Vec<(usize, usize)> = local_pi
        .iter()
        .flat_map(|a| sub.graph.neighbors(a).iter().map(move |&b| (a, b)))
        .collect();
    Ok(greedy_edge_run(&sub.graph, &omega)?.lift(&sub, g.n(), g.m()))
}

/// Vertices on shortest augmenting paths: `a[t]` holds A-vertices at
/// alternating distance `t` (in matched edges), `b[t]` the B-vertices one
/// unmatched edge further.
struct Layers {
    a: Vec<Vec<usize>>,
    b: Vec<Vec<usize>>,
}

fn shortest_path_layers(
    g: &BipartiteGraph,
    mate_a: &[usize],
    mate_b: &[usize],
    max_matched: usize,
) -> Option<Layers> {
    let (n, m) = (g.n(), g.m());
    let mut b_depth = vec![usize::MAX; m + 1];
    let mut a_layers: Vec<Vec<usize>> = vec![(1..=n).filter(|&a| mate_a[a] == FREE).collect()];
    let mut b_layers: Vec<Vec<usize>> = Vec::new();
    loop {
        let t = b_layers.len();
        let mut next_b = Vec::new();
        for &a in &a_layers[t] {
            for &b in g.neighbors(a) {
                if b_depth[b] == usize::MAX {
                    b_depth[b] = t;
                    next_b.push(b);
                }
            }
        }
        if next_b.is_empty() {
            return None;
        }
        let found = next_b.iter().any(|&b| mate_b[b] == FREE);
        b_layers.push(next_b);
        if found {
            break;
        }
        if t == max_matched {
            return None;
        }
        a_layers.push(b_layers[t].iter().map(|&b| mate_b[b]).collect());
    }

    // Prune backwards to vertices that still reach a free B-vertex.
    let d = b_layers.len() - 1;
    let mut useful_b = vec![false; m + 1];
    let mut useful_a = vec![false; n + 1];
    for t in (0..=d).rev() {
        for &b in &b_layers[t] {
            useful_b[b] = if t == d { mate_b[b] == FREE } else { useful_a[mate_b[b]] };
        }
        for &a in &a_layers[t] {
            useful_a[a] = g.neighbors(a).iter().any(|&b| b_depth[b] == t && useful_b[b]);
        }
    }
    let a = a_layers.into_iter().map(|l| l.into_iter().filter(|&x| useful_a[x]).collect()).collect();
    let b = b_layers.into_iter().map(|l| l.into_iter().filter(|&x| useful_b[x]).collect()).collect();
    Some(Layers { a, b })
}

fn mask(len: usize, members: &[usize]) -> Vec<bool> {
    let mut out = vec![false; len + 1];
    for &v in members {
        out[v] = true;
    }
    out
}

/// Runs the multi-pass algorithm with full knowledge of the input and
/// writes the advice.
pub fn eps_oracle(g: &BipartiteGraph, pi: &ArrivalOrder, params: &EpsParams) -> EpsOutcome {
    assert_eq!(pi.len(), g.n(), "arrival order must cover A");
    let (n, m) = (g.n(), g.m());
    let optimum = max_matching(g).len();
    let target = params.required_size(optimum);
    let max_matched = params.max_path_matched_edges();

    let mut passes = Vec::new();
    let mut pass_matchings: Vec<Matching> = Vec::new();
    let run_pass = |passes: &mut Vec<Pass>, results: &mut Vec<Matching>, a_set: Vec<usize>, b_set: Vec<usize>| {
        results.push(greedy_pass(g, pi, &mask(n, &a_set), &mask(m, &b_set)));
        passes.push(Pass { a_set, b_set });
        results.len()
    };

    run_pass(&mut passes, &mut pass_matchings, (1..=n).collect(), (1..=m).collect());
    let mut mate_a = vec![FREE; n + 1];
    let mut mate_b = vec![FREE; m + 1];
    let mut source = vec![0usize; n + 1];
    let mut size = 0;
    for (a, b) in pass_matchings[0].pairs() {
        mate_a[a] = b;
        mate_b[b] = a;
        source[a] = 1;
        size += 1;
    }

    let mut phases = 0;
    while size < target && phases < params.phase_budget() {
        let Some(layers) = shortest_path_layers(g, &mate_a, &mate_b, max_matched) else {
            break;
        };
        phases += 1;
        let d = layers.b.len() - 1;
        // path_of[a]: index into `paths` of the path whose frontier is `a`
        let mut path_of = vec![usize::MAX; n + 1];
        let mut paths: Vec<Vec<(usize, usize, usize)>> = Vec::new();
        let mut frontier = layers.a[0].clone();
        for &a in &frontier {
            path_of[a] = paths.len();
            paths.push(Vec::new());
        }
        let mut complete = Vec::new();
        for t in 0..=d {
            if frontier.is_empty() {
                break;
            }
            frontier.sort_unstable();
            let mut b_set = layers.b[t].clone();
            b_set.sort_unstable();
            let idx = run_pass(&mut passes, &mut pass_matchings, frontier.clone(), b_set);
            let mut next = Vec::new();
            for (a, b) in pass_matchings[idx - 1].pairs() {
                let p = path_of[a];
                paths[p].push((a, b, idx));
                if t < d {
                    let a2 = mate_b[b];
                    path_of[a2] = p;
                    next.push(a2);
                } else {
                    complete.push(p);
                }
            }
            frontier = next;
        }
        debug_assert!(!complete.is_empty(), "pruned layers always yield a path");
        for p in complete {
            for &(a, b, idx) in &paths[p] {
                mate_a[a] = b;
                mate_b[b] = a;
                source[a] = idx;
            }
            size += 1;
        }
    }

    let mut matching = Matching::new(n, m);
    let mut final_index = vec![0; n];
    for a in 1..=n {
        if mate_a[a] != FREE {
            matching.insert_unchecked(a, mate_a[a]);
            final_index[a - 1] = source[a];
        }
    }
    let plan = PassPlan { n, m, passes, final_index };
    let tape = plan.write_tape(pi);
    EpsOutcome { plan, tape, matching, pass_matchings, phases, optimum }
}

/// The online side: reads the pass structure, replays every Greedy pass as
/// A-vertices arrive, and matches `a` along pass `j(a)`.
pub fn eps_online(g: &BipartiteGraph, pi: &ArrivalOrder, tape: &mut AdviceTape) -> Result<Matching> {
    let (n, m) = (g.n(), g.m());
    let tn = tape.read_self_delimited()? as usize;
    let tm = tape.read_self_delimited()? as usize;
    if (tn, tm) != (n, m) {
        return Err(Error::AdviceInconsistency(format!(
            "tape describes a {tn}x{tm} instance, input is {n}x{m}"
        )));
    }
    let p = tape.read_self_delimited()? as usize;
    let mut in_a = Vec::with_capacity(p);
    let mut in_b = Vec::with_capacity(p);
    for _ in 0..p {
        let mut a_mask = vec![false; n + 1];
        for slot in a_mask.iter_mut().skip(1) {
            *slot = tape.read_bit()?;
        }
        let mut b_mask = vec![false; m + 1];
        for slot in b_mask.iter_mut().skip(1) {
            *slot = tape.read_bit()?;
        }
        in_a.push(a_mask);
        in_b.push(b_mask);
    }
    let width = bit_width(p as u64);

    let mut taken = vec![vec![false; m + 1]; p];
    let mut pass_mate = vec![FREE; p];
    let mut out = Matching::new(n, m);
    for a in pi.iter() {
        for i in 0..p {
            pass_mate[i] = FREE;
            if !in_a[i][a] {
                continue;
            }
            if let Some(&b) = g.neighbors(a).iter().find(|&&b| in_b[i][b] && !taken[i][b]) {
                taken[i][b] = true;
                pass_mate[i] = b;
            }
        }
        let j = tape.read_fixed(width)? as usize;
        if j == 0 {
            continue;
        }
        if j > p {
            return Err(Error::AdviceInconsistency(format!("j(a{a}) = {j} but only {p} passes")));
        }
        let b = pass_mate[j - 1];
        if b == FREE {
            return Err(Error::AdviceInconsistency(format!("a{a} is unmatched in pass {j}")));
        }
        out.insert(a, b).map_err(|e| Error::AdviceInconsistency(format!("pass {j} edge ({a}, {b}): {e}")))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> BipartiteGraph {
        BipartiteGraph::new(2, 2, &[(1, 1), (1, 2), (2, 1)]).unwrap()
    }

    #[test]
    fn params() {
        assert!(EpsParams::new(0.0).is_err());
        assert!(EpsParams::new(1.0).is_err());
        assert!(EpsParams::new(f64::NAN).is_err());
        let p = EpsParams::new(0.1).unwrap();
        assert_eq!(p.max_path_matched_edges(), 10);
        assert_eq!(p.required_size(5), 5);
        let p = EpsParams::new(0.2).unwrap();
        assert_eq!(p.required_size(5), 4);
        assert_eq!(p.required_size(0), 0);
        for e in [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.6, 0.9, 0.99] {
            let p = EpsParams::new(e).unwrap();
            assert!(p.pass_bound() as f64 <= PASS_CONSTANT / e.powi(5), "eps = {e}");
        }
    }

    #[test]
    fn finds_the_length_three_augmenting_path() {
        let g = two_by_two();
        let pi = ArrivalOrder::identity(2);
        let out = eps_oracle(&g, &pi, &EpsParams::new(0.1).unwrap());
        assert_eq!(out.matching.len(), 2);
        // greedy, then one phase with two layer extensions
        assert_eq!(out.plan.pass_count(), 3);
        assert_eq!(out.phases, 1);
        let mut tape = out.tape.clone();
        assert_eq!(eps_online(&g, &pi, &mut tape).unwrap(), out.matching);
        assert_eq!(tape.bits_read(), tape.bits_written());
    }

    #[test]
    fn large_epsilon_keeps_greedy() {
        let g = two_by_two();
        let out = eps_oracle(&g, &ArrivalOrder::identity(2), &EpsParams::new(0.6).unwrap());
        assert_eq!(out.plan.pass_count(), 1);
        assert_eq!(out.matching.len(), 1);
    }

    #[test]
    fn all_zero_indices_give_the_empty_matching() {
        let g = two_by_two();
        let pi = ArrivalOrder::identity(2);
        let mut plan = eps_oracle(&g, &pi, &EpsParams::new(0.1).unwrap()).plan;
        plan.final_index.iter_mut().for_each(|j| *j = 0);
        let mut tape = plan.write_tape(&pi);
        assert!(eps_online(&g, &pi, &mut tape).unwrap().is_empty());
    }

    #[test]
    fn inconsistent_advice_is_detected() {
        let g = two_by_two();
        let pi = ArrivalOrder::identity(2);
        let plan = PassPlan {
            n: 2,
            m: 2,
            passes: vec![Pass { a_set: vec![1], b_set: vec![1] }],
            final_index: vec![0, 1], // a2 is not in pass 1
        };
        let mut tape = plan.write_tape(&pi);
        assert!(matches!(eps_online(&g, &pi, &mut tape), Err(Error::AdviceInconsistency(_))));

        let other = BipartiteGraph::new(3, 2, &[(1, 1)]).unwrap();
        let mut tape = plan.write_tape(&pi);
        assert!(matches!(
            eps_online(&other, &ArrivalOrder::identity(3), &mut tape),
            Err(Error::AdviceInconsistency(_))
        ));

        let mut short = AdviceTape::from_bits(plan.write_tape(&pi).bits()[..5].to_vec());
        assert!(matches!(eps_online(&g, &pi, &mut short), Err(Error::TapeUnderrun { .. })));
    }

    #[test]
    fn budget_shape() {
        let p = EpsParams::new(0.2).unwrap();
        let (b100, b200) = (advice_budget(100, 100, &p), advice_budget(200, 200, &p));
        assert!(b200 <= 2 * b100 && b200 + 64 >= 2 * b100, "{b100} {b200}");
        let coarse = advice_budget(100, 100, &EpsParams::new(0.5).unwrap());
        let fine = advice_budget(100, 100, &EpsParams::new(0.25).unwrap());
        assert!(fine > coarse && fine <= 32 * coarse);
    }

    #[test]
    fn plan_dump() {
        let g = two_by_two();
        let plan = eps_oracle(&g, &ArrivalOrder::identity(2), &EpsParams::new(0.1).unwrap()).plan;
        let text = plan.to_string();
        assert!(text.starts_with("# n=2 m=2 passes=3\n1 | 1 2 | 1 2\n"), "{text}");
    }
}
