//! Constructions behind the lower bounds, and closed-form bound evaluators.
//!
//! Nothing here certifies a lower bound. The builders produce the hard
//! instances and every structural property they rely on is checked
//! explicitly, so a broken construction shows up as a failed check.

mod gadget;
mod monotone;
mod ranking_lb;
mod string_guessing;

pub use gadget::{h_gadget, h_gadget_witness, semi_complete};
pub use monotone::{es_partition, longest_monotone, max_admissible_k, MonotoneBlocks};
pub use ranking_lb::{ranking_lb_instance, RankingLbInstance};
pub use string_guessing::{
    advice_lb_per_request, entropy_q, factorial, sgkh_reduction_run, PermutationIndex, SgkhInstance, SgkhReport,
};
