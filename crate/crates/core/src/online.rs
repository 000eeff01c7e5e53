//! Online matchers driven one arrival at a time.
//!
//! Unlike the batch runners in [`crate::engine`], an [`OnlineMatcher`] is fed
//! by an environment that may choose each neighborhood adaptively. Matchers
//! are `Clone` so an environment can fork one, simulate a continuation, and
//! discard the fork without touching the original.

use crate::advice::AdviceTape;
use crate::error::{Error, Result};

pub trait OnlineMatcher: Clone {
    /// `a` arrives with `neighbors` (free or not, sorted by id). Returns the
    /// B-vertex it is matched to, if any.
    fn arrive(&mut self, a: usize, neighbors: &[usize]) -> Result<Option<usize>>;

    fn advice_bits_read(&self) -> usize {
        0
    }
}

/// Matches each arrival to its smallest-id free neighbor.
#[derive(Debug, Clone, Default)]
pub struct GreedyMatcher {
    taken: Vec<bool>,
}

impl GreedyMatcher {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineMatcher for GreedyMatcher {
    fn arrive(&mut self, _a: usize, neighbors: &[usize]) -> Result<Option<usize>> {
        let pick = neighbors.iter().copied().find(|&b| !self.taken.get(b).copied().unwrap_or(false));
        if let Some(b) = pick {
            if self.taken.len() <= b {
                self.taken.resize(b + 1, false);
            }
            self.taken[b] = true;
        }
        Ok(pick)
    }
}

/// Follows its tape blindly: one self-delimited B-id per arrival, 0 meaning
/// "leave unmatched". Given a tape that encodes an optimal matching it is
/// optimal.
#[derive(Debug, Clone)]
pub struct TapeOptimalMatcher {
    tape: AdviceTape,
}

impl TapeOptimalMatcher {
    pub fn new(mut tape: AdviceTape) -> Self {
        tape.rewind();
        Self { tape }
    }

    /// The tape this matcher expects for a given sequence of mates.
    pub fn encode<I: IntoIterator<Item = Option<usize>>>(mates: I) -> AdviceTape {
        let mut tape = AdviceTape::new();
        for mate in mates {
            tape.write_self_delimited(mate.unwrap_or(0) as u64);
        }
        tape
    }
}

impl OnlineMatcher for TapeOptimalMatcher {
    fn arrive(&mut self, a: usize, neighbors: &[usize]) -> Result<Option<usize>> {
        let b = self.tape.read_self_delimited()? as usize;
        if b == 0 {
            return Ok(None);
        }
        if neighbors.binary_search(&b).is_err() {
            return Err(Error::AdviceInconsistency(format!("advice pairs a{a} with non-neighbor b{b}")));
        }
        Ok(Some(b))
    }

    fn advice_bits_read(&self) -> usize {
        self.tape.bits_read()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_takes_smallest_free() {
        let mut g = GreedyMatcher::new();
        assert_eq!(g.arrive(1, &[2, 3]).unwrap(), Some(2));
        let fork = g.clone();
        assert_eq!(g.arrive(2, &[2, 3]).unwrap(), Some(3));
        assert_eq!(g.arrive(3, &[2, 3]).unwrap(), None);
        let mut fork = fork;
        assert_eq!(fork.arrive(2, &[2]).unwrap(), None);
    }

    #[test]
    fn tape_matcher_follows_advice() {
        let tape = TapeOptimalMatcher::encode([Some(2), None, Some(1)]);
        let mut t = TapeOptimalMatcher::new(tape);
        assert_eq!(t.arrive(1, &[1, 2]).unwrap(), Some(2));
        assert_eq!(t.arrive(2, &[1]).unwrap(), None);
        assert_eq!(t.arrive(3, &[1]).unwrap(), Some(1));
        assert!(matches!(t.arrive(4, &[1]), Err(Error::TapeUnderrun { .. })));

        let mut bad = TapeOptimalMatcher::new(TapeOptimalMatcher::encode([Some(5)]));
        assert!(matches!(bad.arrive(1, &[1, 2]), Err(Error::AdviceInconsistency(_))));
    }
}
