//! Online bipartite matching with random bits and with advice.
//!
//! Graphs, matchings and orders live in [`graph`], [`matching`] and
//! [`order`]. [`engine`] runs Ranking and its randomized form. The advice
//! algorithms are in [`category`] and [`eps`], lower-bound constructions in
//! [`lowerbounds`], and [`derand`] turns a randomized algorithm into an
//! advice algorithm on a finite family. [`harness`] and [`sweep`] drive
//! experiments and exhaustive checks.

pub mod advice;
pub mod bits;
pub mod category;
pub mod derand;
pub mod engine;
pub mod eps;
pub mod error;
pub mod graph;
pub mod harness;
pub mod lowerbounds;
pub mod matching;
pub mod online;
pub mod order;
pub mod sweep;

pub use error::{Error, Result};

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ranking.md")]
    mod ranking {}
    #[doc = include_str!("../../../book/src/advice.md")]
    mod advice {}
    #[doc = include_str!("../../../book/src/category.md")]
    mod category {}
    #[doc = include_str!("../../../book/src/eps_scheme.md")]
    mod eps_scheme {}
    #[doc = include_str!("../../../book/src/lower_bounds.md")]
    mod lower_bounds {}
    #[doc = include_str!("../../../book/src/derandomization.md")]
    mod derandomization {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
}
