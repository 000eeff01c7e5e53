//! Instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::lowerbounds::{h_gadget, ranking_lb_instance, semi_complete};
use crate::order::{ArrivalOrder, RankingPermutation};

use super::config::KeyValues;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaChoice {
    Identity,
    Reverse,
    Random,
}

impl std::str::FromStr for SigmaChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::Identity),
            "reverse" => Ok(Self::Reverse),
            "random" => Ok(Self::Random),
            other => Err(Error::InvalidParameter(format!("unknown ranking `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    SemiComplete { c: usize },
    HGadget { z: usize },
    /// Every edge independently with probability `p`.
    RandomBipartite { n: usize, m: usize, p: f64 },
    /// A hidden perfect matching plus `extra_edges` other random edges.
    PerfectRandom { n: usize, extra_edges: usize },
    /// The anti-Ranking instance for one ranking, identity arrival order.
    RankingLb { n: usize, eps: f64, sigma: SigmaChoice },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let name: String = kv.require("generator")?;
        let kind = match name.as_str() {
            "semi_complete" => GeneratorKind::SemiComplete { c: kv.require("c")? },
            "h_gadget" => GeneratorKind::HGadget { z: kv.require("z")? },
            "random_bipartite" => {
                GeneratorKind::RandomBipartite { n: kv.require("n")?, m: kv.require("m")?, p: kv.require("p")? }
            }
            "perfect_random" => {
                GeneratorKind::PerfectRandom { n: kv.require("n")?, extra_edges: kv.require("extra_edges")? }
            }
            "ranking_lb" => GeneratorKind::RankingLb {
                n: kv.require("n")?,
                eps: kv.require("lb_eps")?,
                sigma: kv.typed("sigma")?.unwrap_or(SigmaChoice::Identity),
            },
            other => return Err(Error::InvalidParameter(format!("unknown generator `{other}`"))),
        };
        Ok(Self { kind, seed: kv.typed("graph_seed")?.unwrap_or(0) })
    }

    pub fn generate(&self) -> Result<BipartiteGraph> {
        generate(&self.kind, self.seed)
    }
}

/// Builds the instance; identical `(kind, seed)` give identical graphs.
pub fn generate(kind: &GeneratorKind, seed: u64) -> Result<BipartiteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        GeneratorKind::SemiComplete { c } => semi_complete(c),
        GeneratorKind::HGadget { z } => h_gadget(z),
        GeneratorKind::RandomBipartite { n, m, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
            }
            let edges: Vec<(usize, usize)> = (1..=n)
                .flat_map(|a| (1..=m).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            BipartiteGraph::new(n, m, &edges)
        }
        GeneratorKind::PerfectRandom { n, extra_edges } => {
            let room = n * n - n;
            if extra_edges > room {
                return Err(Error::InvalidParameter(format!("at most {room} extra edges fit, asked for {extra_edges}")));
            }
            let mut planted: Vec<usize> = (1..=n).collect();
            planted.shuffle(&mut rng);
            let mut present = vec![vec![false; n + 1]; n + 1];
            let mut edges = Vec::with_capacity(n + extra_edges);
            for (i, &b) in planted.iter().enumerate() {
                present[i + 1][b] = true;
                edges.push((i + 1, b));
            }
            while edges.len() < n + extra_edges {
                let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                if !present[a][b] {
                    present[a][b] = true;
                    edges.push((a, b));
                }
            }
            BipartiteGraph::new(n, n, &edges)
        }
        GeneratorKind::RankingLb { n, eps, sigma } => {
            let sigma = match sigma {
                SigmaChoice::Identity => RankingPermutation::identity(n),
                SigmaChoice::Reverse => RankingPermutation::reverse(n),
                SigmaChoice::Random => {
                    let mut order: Vec<usize> = (1..=n).collect();
                    order.shuffle(&mut rng);
                    RankingPermutation::from_order(&order)?
                }
            };
            Ok(ranking_lb_instance(&[sigma], &ArrivalOrder::identity(n), eps)?.graph)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::max_matching;

    #[test]
    fn examples() {
        assert_eq!(generate(&GeneratorKind::SemiComplete { c: 5 }, 0).unwrap().edge_count(), 15);
        let kind = GeneratorKind::PerfectRandom { n: 10, extra_edges: 5 };
        let g = generate(&kind, 3).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(max_matching(&g).len(), 10);
        assert_eq!(g, generate(&kind, 3).unwrap());
        assert_ne!(g, generate(&kind, 4).unwrap());
        let lb = generate(&GeneratorKind::RankingLb { n: 64, eps: 0.5, sigma: SigmaChoice::Identity }, 0).unwrap();
        assert_eq!(max_matching(&lb).len(), 64);
        let dense = generate(&GeneratorKind::RandomBipartite { n: 4, m: 6, p: 1.0 }, 1).unwrap();
        assert_eq!(dense.edge_count(), 24);
        assert!(generate(&GeneratorKind::PerfectRandom { n: 3, extra_edges: 7 }, 0).is_err());
    }
}
