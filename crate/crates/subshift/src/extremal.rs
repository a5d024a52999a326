//! Exact extremal continued-fraction tails over a subshift.
//!
//! Over all one-sided infinite admissible continuations from a context, the
//! value `[t₁; t₂, …]` is maximized (resp. minimized) by the greedy digit
//! choice in the alternating order: pick the largest feasible first digit,
//! then the smallest, and so on — larger first digits dominate regardless of
//! what follows, so the greedy choice is strictly optimal at every step. The
//! greedy walk is deterministic and enters a cycle, so the extremal tail is
//! eventually periodic and its value is an exact quadratic irrational.

use crate::graph::{BlockGraph, StateId};
use cf_core::{Mobius, QuadExt, Word};
use std::collections::HashMap;
use std::rc::Rc;

/// Which end of the value order to chase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Max,
    Min,
}

impl Dir {
    fn flip(self) -> Dir {
        match self {
            Dir::Max => Dir::Min,
            Dir::Min => Dir::Max,
        }
    }
}

/// An eventually periodic one-sided digit stream with its exact value
/// `[d₁; d₂, …]`.
#[derive(Clone, Debug)]
pub struct ExtremalTail {
    pub prefix: Vec<u8>,
    pub period: Word,
    pub value: QuadExt,
}

impl ExtremalTail {
    pub fn digits(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&self.prefix);
        while out.len() < n {
            out.extend_from_slice(self.period.digits());
        }
        out.truncate(n);
        out
    }
}

/// Memoized extremal-tail oracle for one graph.
pub struct TailOracle {
    pub graph: Rc<BlockGraph>,
    memo: HashMap<(StateId, Dir), ExtremalTail>,
}

impl TailOracle {
    pub fn new(graph: Rc<BlockGraph>) -> Self {
        TailOracle {
            graph,
            memo: HashMap::new(),
        }
    }

    /// Extremal tail leaving `state`; None when no infinite continuation
    /// exists.
    pub fn tail(&mut self, state: StateId, dir: Dir) -> Option<ExtremalTail> {
        if !self.graph.live[state as usize] {
            return None;
        }
        if let Some(t) = self.memo.get(&(state, dir)) {
            return Some(t.clone());
        }
        // deterministic walk until a (state, dir) pair repeats or a memoized
        // entry is hit
        let mut digits: Vec<u8> = Vec::new();
        let mut seen: HashMap<(StateId, Dir), usize> = HashMap::new();
        let mut cur = state;
        let mut d = dir;
        let result = loop {
            if let Some(t) = self.memo.get(&(cur, d)) {
                let mut prefix = digits.clone();
                prefix.extend_from_slice(&t.prefix);
                let value = tail_value(&prefix, &t.period);
                break ExtremalTail {
                    prefix,
                    period: t.period.clone(),
                    value,
                };
            }
            if let Some(&at) = seen.get(&(cur, d)) {
                let period = Word::new(digits[at..].to_vec()).unwrap();
                let prefix = digits[..at].to_vec();
                let value = tail_value(&prefix, &period);
                break ExtremalTail {
                    prefix,
                    period,
                    value,
                };
            }
            seen.insert((cur, d), digits.len());
            // greedy digit in the current direction, restricted to live moves
            let pick = match d {
                Dir::Max => (1..=self.graph.alphabet)
                    .rev()
                    .find(|&dg| self.graph.successor_live(cur, dg).is_some()),
                Dir::Min => (1..=self.graph.alphabet)
                    .find(|&dg| self.graph.successor_live(cur, dg).is_some()),
            };
            let dg = pick.expect("live state has a live successor");
            let nxt = self.graph.successor_live(cur, dg).unwrap();
            digits.push(dg);
            cur = nxt;
            d = d.flip();
        };
        // memoize the start and every state along the prefix
        self.memo.insert((state, dir), result.clone());
        let mut cur = state;
        let mut d = dir;
        for i in 0..result.prefix.len() {
            cur = self.graph.successor_live(cur, result.prefix[i]).unwrap();
            d = d.flip();
            if !self.memo.contains_key(&(cur, d)) {
                let rest_prefix = result.prefix[i + 1..].to_vec();
                let value = tail_value(&rest_prefix, &result.period);
                self.memo.insert(
                    (cur, d),
                    ExtremalTail {
                        prefix: rest_prefix,
                        period: result.period.clone(),
                        value,
                    },
                );
            }
        }
        Some(result)
    }

    /// Extremal value of `[t₁; t₂, …]` over admissible continuations after
    /// `context` (read from the root when the far side is unconstrained).
    pub fn tail_after(&mut self, context: &[u8], dir: Dir) -> Option<ExtremalTail> {
        let s = self.graph.context_state(context)?;
        self.tail(s, dir)
    }
}

/// Exact value of `[p₁; p₂, …]` for the eventually periodic stream
/// prefix·period^∞.
pub fn tail_value(prefix: &[u8], period: &Word) -> QuadExt {
    let fix = Mobius::of_word(period.digits()).fixed_point();
    Mobius::of_word(prefix).apply_quad(&fix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ForbiddenSet;

    #[test]
    fn free_extremal_alternates() {
        let f = ForbiddenSet::empty(3);
        let g = Rc::new(BlockGraph::build(&f));
        let mut o = TailOracle::new(g);
        let t = o.tail_after(&[], Dir::Max).unwrap();
        assert_eq!(t.digits(4), vec![3, 1, 3, 1]);
        let t = o.tail_after(&[], Dir::Min).unwrap();
        assert_eq!(t.digits(4), vec![1, 3, 1, 3]);
    }

    #[test]
    fn restricted_min_tail_after_context() {
        // no 121212/212121: the minimal tail from "1" is [0;1,1,2,1,2,1, …]
        // i.e. the largest [t…]; chase Max of [t₁;…] after context "1"... the
        // value [0;1,…] is minimized when [1;…] is maximized
        let f = ForbiddenSet::from_strs(&["121212"], 2).unwrap().normalize();
        let g = Rc::new(BlockGraph::build(&f));
        let mut o = TailOracle::new(g);
        // tail continuing context "1" maximizing [t₁;t₂…]
        let t = o.tail_after(&[1], Dir::Max).unwrap();
        // greedy: 2,1,2,1 then blocked from completing 121212 (the context
        // digit counts), so the fifth digit drops to 1
        assert_eq!(t.digits(5), [2, 1, 2, 1, 1]);
    }

    #[test]
    fn dead_context_gives_none() {
        let f = ForbiddenSet::from_strs(&["11"], 1).unwrap().normalize();
        let g = Rc::new(BlockGraph::build(&f));
        let mut o = TailOracle::new(g);
        assert!(o.tail_after(&[1], Dir::Max).is_none());
    }
}
