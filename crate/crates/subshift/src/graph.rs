//! Deterministic presentation of a finite-type subshift.
//!
//! States are the proper prefixes of forbidden words (the failure-function
//! automaton of the set); reading a digit moves to the longest suffix of the
//! extended context that is again a prefix of a forbidden word, and dies when
//! a forbidden word is completed. Bi-infinite admissible sequences correspond
//! exactly to bi-infinite walks on the essential part (states with both an
//! infinite past and an infinite future).

use crate::ForbiddenSet;
use cf_core::Word;
use std::collections::{HashMap, VecDeque};

pub type StateId = u32;

#[derive(Clone)]
pub struct BlockGraph {
    pub alphabet: u8,
    pub states: Vec<Word>,
    index: HashMap<Word, StateId>,
    /// step[state][digit-1] = successor, or None when the digit completes a
    /// forbidden word.
    step: Vec<Vec<Option<StateId>>>,
    /// Can extend to an infinite admissible future.
    pub live: Vec<bool>,
    /// Can be reached from an infinite admissible past.
    pub colive: Vec<bool>,
    /// live ∧ colive: lies on a bi-infinite walk.
    pub essential: Vec<bool>,
    /// Strongly-connected component id (on the full graph), by Tarjan order.
    pub scc: Vec<u32>,
    pub scc_count: u32,
}

impl BlockGraph {
    pub fn root(&self) -> StateId {
        0
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn successor(&self, s: StateId, digit: u8) -> Option<StateId> {
        debug_assert!((1..=self.alphabet).contains(&digit));
        self.step[s as usize][digit as usize - 1]
    }

    /// Successor restricted to states with an admissible infinite future.
    pub fn successor_live(&self, s: StateId, digit: u8) -> Option<StateId> {
        self.successor(s, digit)
            .filter(|&t| self.live[t as usize])
    }

    /// State after reading `digits` from `from`; None if a forbidden word
    /// completes along the way.
    pub fn walk(&self, from: StateId, digits: &[u8]) -> Option<StateId> {
        let mut s = from;
        for &d in digits {
            s = self.successor(s, d)?;
        }
        Some(s)
    }

    /// State encoding the constraint left by `context` on what may follow it.
    /// Reading from the root is correct for a word whose left end is free.
    pub fn context_state(&self, context: &[u8]) -> Option<StateId> {
        self.walk(self.root(), context)
    }

    /// Build from a normalized forbidden set.
    pub fn build(f: &ForbiddenSet) -> BlockGraph {
        debug_assert!(f.is_normalized(), "graph expects a normalized set");
        let alphabet = f.alphabet;
        // states: all proper prefixes of forbidden words
        let mut states: Vec<Word> = vec![Word::default()];
        let mut index: HashMap<Word, StateId> = HashMap::new();
        index.insert(Word::default(), 0);
        for w in &f.words {
            for k in 1..w.len() {
                let p = Word::new(w.digits()[..k].to_vec()).unwrap();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), states.len() as StateId);
                    states.push(p);
                }
            }
        }
        let n = states.len();
        let mut step = vec![vec![None; alphabet as usize]; n];
        for (i, s) in states.iter().enumerate() {
            'digit: for d in 1..=alphabet {
                let mut ext = s.digits().to_vec();
                ext.push(d);
                // completing a forbidden word kills the transition
                for w in &f.words {
                    if w.len() <= ext.len() && ext[ext.len() - w.len()..] == *w.digits() {
                        continue 'digit;
                    }
                }
                // longest suffix that is again a state
                for start in 0..=ext.len() {
                    let suf = Word::new(ext[start..].to_vec()).unwrap();
                    if let Some(&t) = index.get(&suf) {
                        step[i][d as usize - 1] = Some(t);
                        break;
                    }
                }
            }
        }
        let mut g = BlockGraph {
            alphabet,
            states,
            index,
            step,
            live: vec![false; n],
            colive: vec![false; n],
            essential: vec![false; n],
            scc: vec![0; n],
            scc_count: 0,
        };
        g.compute_liveness();
        g.compute_scc();
        g
    }

    fn compute_liveness(&mut self) {
        let n = self.num_states();
        // live: prune states with no successor until stable
        let mut live = vec![true; n];
        loop {
            let mut changed = false;
            for s in 0..n {
                if live[s]
                    && !self.step[s]
                        .iter()
                        .any(|t| t.is_some_and(|t| live[t as usize]))
                {
                    live[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // colive: prune states with no predecessor until stable
        let mut colive = vec![true; n];
        loop {
            let mut has_pred = vec![false; n];
            for s in 0..n {
                if colive[s] {
                    for t in self.step[s].iter().flatten() {
                        if colive[*t as usize] {
                            has_pred[*t as usize] = true;
                        }
                    }
                }
            }
            let mut changed = false;
            for s in 0..n {
                if colive[s] && !has_pred[s] {
                    colive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for s in 0..n {
            self.live[s] = live[s];
            self.colive[s] = colive[s];
            self.essential[s] = live[s] && colive[s];
        }
    }

    fn compute_scc(&mut self) {
        // iterative Tarjan
        let n = self.num_states();
        let mut index_of = vec![u32::MAX; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut next_index = 0u32;
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        for root in 0..n as u32 {
            if index_of[root as usize] != u32::MAX {
                continue;
            }
            let mut call: Vec<(u32, usize)> = vec![(root, 0)];
            while let Some(&mut (v, ref mut ei)) = call.last_mut() {
                if *ei == 0 {
                    index_of[v as usize] = next_index;
                    low[v as usize] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v as usize] = true;
                }
                let succs: Vec<u32> = self.step[v as usize].iter().flatten().copied().collect();
                if *ei < succs.len() {
                    let w = succs[*ei];
                    *ei += 1;
                    if index_of[w as usize] == u32::MAX {
                        call.push((w, 0));
                    } else if on_stack[w as usize] {
                        low[v as usize] = low[v as usize].min(index_of[w as usize]);
                    }
                } else {
                    if low[v as usize] == index_of[v as usize] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            comp[w as usize] = count;
                            if w == v {
                                break;
                            }
                        }
                        count += 1;
                    }
                    call.pop();
                    if let Some(&mut (u, _)) = call.last_mut() {
                        low[u as usize] = low[u as usize].min(low[v as usize]);
                    }
                }
            }
        }
        self.scc = comp;
        self.scc_count = count;
    }

    /// Is the subshift empty (no bi-infinite admissible sequence)?
    pub fn is_empty_shift(&self) -> bool {
        !self.essential.iter().any(|&e| e)
    }

    /// Transitivity: the essential part is nonempty and forms a single
    /// strongly-connected component.
    pub fn is_transitive(&self) -> bool {
        let mut comp = None;
        let mut any = false;
        for s in 0..self.num_states() {
            if self.essential[s] {
                any = true;
                match comp {
                    None => comp = Some(self.scc[s]),
                    Some(c) if c != self.scc[s] => return false,
                    _ => {}
                }
            }
        }
        // a lone component must actually cycle (it does: essential ⇒ live)
        any
    }

    /// Is `w` a factor of some bi-infinite admissible sequence?
    pub fn is_factor(&self, w: &Word) -> bool {
        (0..self.num_states() as StateId).any(|s| {
            self.colive[s as usize]
                && match self.walk(s, w.digits()) {
                    Some(t) => self.live[t as usize],
                    None => false,
                }
        })
    }

    /// Digits admissible after `context` on a live path.
    pub fn admissible_next(&self, state: StateId) -> Vec<u8> {
        (1..=self.alphabet)
            .filter(|&d| self.successor_live(state, d).is_some())
            .collect()
    }

    /// States from which the constant tail `a a a …` stays admissible.
    pub fn accepts_constant_tail(&self, a: u8) -> Vec<bool> {
        let n = self.num_states();
        let mut ok = vec![false; n];
        for s in 0..n as StateId {
            let mut seen = vec![false; n];
            let mut cur = s;
            let good = loop {
                match self.successor(cur, a) {
                    None => break false,
                    Some(t) => {
                        if seen[t as usize] {
                            break true;
                        }
                        seen[t as usize] = true;
                        cur = t;
                    }
                }
            };
            ok[s as usize] = good;
        }
        ok
    }
}

/// Transitivity verdict together with optional connection witnesses.
#[derive(Clone, Debug)]
pub struct TransitivityReport {
    pub transitive: bool,
    pub empty: bool,
    pub essential_states: usize,
    pub witnesses: Option<Vec<(Word, Option<Word>)>>,
}

/// Decide transitivity by strong connectivity of the essential part; when a
/// letter `a` with admissible constant tail is supplied, also search the
/// per-forbidden-word repair witnesses τ_w with w⁻τ_w·aaa… admissible.
pub fn is_transitive(f: &ForbiddenSet, witness_letter: Option<u8>) -> TransitivityReport {
    let f = f.normalize();
    let g = BlockGraph::build(&f);
    let transitive = g.is_transitive();
    let witnesses = witness_letter.map(|a| {
        connect_witnesses(&f, a)
            .map(|m| m.into_iter().collect())
            .unwrap_or_default()
    });
    TransitivityReport {
        transitive,
        empty: g.is_empty_shift(),
        essential_states: g.essential.iter().filter(|&&e| e).count(),
        witnesses,
    }
}

/// For each forbidden word w, the shortest τ with `w⁻ τ aaa…` admissible
/// (w⁻ = w without its last letter), or None within the depth cap.
/// Fails if the constant sequence aaa… is itself inadmissible.
pub fn connect_witnesses(
    f: &ForbiddenSet,
    a: u8,
) -> Result<Vec<(Word, Option<Word>)>, crate::SubshiftError> {
    let f = f.normalize();
    let g = BlockGraph::build(&f);
    let accepts = g.accepts_constant_tail(a);
    if !accepts[g.root() as usize] {
        return Err(crate::SubshiftError::ConstantTailForbidden(a));
    }
    let cap = 4 * f.max_len().max(1);
    let mut out = Vec::new();
    for w in &f.words {
        let prefix = &w.digits()[..w.len() - 1];
        let start = g
            .context_state(prefix)
            .expect("w⁻ is admissible by factor-minimality");
        // BFS over (state) for the shortest digit word reaching a
        // constant-tail acceptor
        let mut seen = vec![false; g.num_states()];
        let mut queue: VecDeque<(StateId, Vec<u8>)> = VecDeque::new();
        queue.push_back((start, Vec::new()));
        seen[start as usize] = true;
        let mut found = None;
        while let Some((s, path)) = queue.pop_front() {
            if accepts[s as usize] {
                found = Some(Word::new(path).unwrap_or_default());
                break;
            }
            if path.len() >= cap {
                continue;
            }
            for d in 1..=g.alphabet {
                if let Some(t) = g.successor(s, d) {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        let mut p = path.clone();
                        p.push(d);
                        queue.push_back((t, p));
                    }
                }
            }
        }
        out.push((w.clone(), found));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fset(words: &[&str], a: u8) -> ForbiddenSet {
        ForbiddenSet::from_strs(words, a).unwrap().normalize()
    }

    #[test]
    fn full_shift_transitive() {
        let f = ForbiddenSet::empty(3);
        let g = BlockGraph::build(&f);
        assert!(g.is_transitive());
        assert_eq!(g.num_states(), 1);
    }

    #[test]
    fn split_shift_not_transitive() {
        // no 12 nor 21: two frozen constant sequences
        let g = BlockGraph::build(&fset(&["12", "21"], 2));
        assert!(!g.is_transitive());
        assert!(!g.is_empty_shift());
    }

    #[test]
    fn no_121_212_transitive() {
        let f = fset(&["121", "212"], 2);
        let g = BlockGraph::build(&f);
        assert!(g.is_transitive());
        // the advertised repair witnesses exist
        let ws = connect_witnesses(&f, 1).unwrap();
        for (_, tau) in ws {
            assert!(tau.is_some());
        }
    }

    #[test]
    fn empty_shift_detected() {
        // over {1}: forbidding 11 kills everything
        let g = BlockGraph::build(&fset(&["11"], 1));
        assert!(g.is_empty_shift());
        assert!(!g.is_transitive());
    }

    #[test]
    fn factor_check() {
        let g = BlockGraph::build(&fset(&["11"], 2));
        assert!(g.is_factor(&Word::parse("1212").unwrap()));
        assert!(!g.is_factor(&Word::parse("11").unwrap()));
        // 1 is a factor, 111 is not
        assert!(g.is_factor(&Word::parse("1").unwrap()));
        assert!(!g.is_factor(&Word::parse("111").unwrap()));
    }

    #[test]
    fn witness_example_122_1() {
        // forbid 121,212; for w=121, w⁻=12, τ="2" gives 122·111… admissible
        let f = fset(&["121", "212"], 2);
        let ws = connect_witnesses(&f, 1).unwrap();
        let w121 = Word::parse("121").unwrap();
        let tau = ws.iter().find(|(w, _)| *w == w121).unwrap().1.clone();
        assert_eq!(tau, Some(Word::parse("2").unwrap()));
    }
}
