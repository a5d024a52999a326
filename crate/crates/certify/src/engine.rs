//! Exhaustive forced-extension search with certified pruning.
//!
//! A node is *refuted* when no extension of it can satisfy the goal's target
//! property. The engine explores children over all admissible digits, locks a
//! side into a periodic tail when the same period repeats enough times and
//! every one-period deviation is refuted uniformly (a Möbius-orbit hull
//! argument covers all repetition depths at once), and compares the exact
//! values of fully locked limits. A closed tree is a proof; a surviving
//! explicit sequence is a counterexample; hitting the node cap is honest
//! failure.

use crate::node::{mobius_range, recip_range, Bounds, LambdaRange, Node, SideState, TailRange};
use cf_core::dp::{markov_value_dp, DoublyPeriodicWord};
use cf_core::{MarkedWord, Mobius, Val, Word};
use std::cmp::Ordering;
use std::rc::Rc;
use subshift::{BlockGraph, Dir, ForbiddenSet};

/// What the search must refute or verify.
#[derive(Clone)]
pub enum Goal {
    /// Refute: some extension has m = λ₀ ∈ (lo, hi).
    ExcludeInterval { lo: Val, hi: Val },
    /// Refute: some extension (within the ambient subshift) has m < bound.
    MinAtLeast { bound: Val },
    /// Verify: every extension with λ₀ > lo (within the ambient subshift)
    /// contains `claim` at the mark, up to transposition.
    ForcedBlock { lo: Val, claim: MarkedWord },
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Every branch was refuted (or, for ForcedBlock, matched the claim).
    Closed,
    /// An explicit fully periodic witness defeats the goal.
    Counterexample { witness: String, value: Val },
    /// Budget or period caps hit; surviving frontier sample attached.
    Inconclusive { reason: String, frontier: Vec<String> },
}

#[derive(Clone, Debug, Default)]
pub struct Transcript {
    pub nodes: usize,
    pub max_len: usize,
    pub locks: usize,
    pub cut_failures: usize,
    pub prunes_value: usize,
    pub prunes_position: usize,
    pub prunes_dead: usize,
    pub matched_claims: usize,
}

pub struct EngineCfg {
    pub node_cap: usize,
    pub max_period: usize,
    /// Repetition length (digits) required before attempting a side lock.
    pub lock_reps_margin: usize,
}

impl Default for EngineCfg {
    fn default() -> Self {
        EngineCfg {
            node_cap: 10_000_000,
            max_period: 64,
            lock_reps_margin: 2,
        }
    }
}

pub struct Engine {
    pub ambient: ForbiddenSet,
    pub bounds: Bounds,
    pub alphabet: u8,
    pub cfg: EngineCfg,
    pub transcript: Transcript,
}

impl Engine {
    pub fn new(ambient: &ForbiddenSet, cfg: EngineCfg) -> Engine {
        let ambient = ambient.normalize();
        let graph = Rc::new(BlockGraph::build(&ambient));
        let max_len = ambient.max_len();
        Engine {
            alphabet: ambient.alphabet,
            bounds: Bounds::new(graph, max_len),
            ambient,
            cfg,
            transcript: Transcript::default(),
        }
    }

    /// Run the search from the given roots.
    pub fn run(&mut self, roots: Vec<Node>, goal: &Goal) -> Outcome {
        let mut stack: Vec<Node> = roots;
        while let Some(node) = stack.pop() {
            self.transcript.nodes += 1;
            self.transcript.max_len = self.transcript.max_len.max(node.len());
            if std::env::var("ENGINE_TRACE").is_ok() && self.transcript.nodes % 500 == 0 {
                eprintln!("[{}] len={} stack={} node={}", self.transcript.nodes, node.len(), stack.len(), node.render());
            }
            if self.transcript.nodes > self.cfg.node_cap {
                return Outcome::Inconclusive {
                    reason: format!("node cap {} reached", self.cfg.node_cap),
                    frontier: stack.iter().rev().take(5).map(|n| n.render()).collect(),
                };
            }
            match self.process(&node, goal) {
                Step::Refuted => {}
                Step::Matched => {
                    self.transcript.matched_claims += 1;
                }
                Step::Counterexample { witness, value } => {
                    return Outcome::Counterexample { witness, value }
                }
                Step::Expand(children) => stack.extend(children),
                Step::Stuck(reason) => {
                    return Outcome::Inconclusive {
                        reason,
                        frontier: vec![node.render()],
                    }
                }
            }
        }
        Outcome::Closed
    }

    fn process(&mut self, node: &Node, goal: &Goal) -> Step {
        let trace = std::env::var("ENGINE_TRACE").is_ok();
        macro_rules! tr { ($m:expr) => { if trace { eprintln!("  phase {}", $m); } } }
        tr!("tails");
        // side tails; a dead side refutes the node outright
        let right_tail = match self.bounds.right_tail_range(node) {
            Some(t) => t,
            None => {
                self.transcript.prunes_dead += 1;
                return Step::Refuted;
            }
        };
        let left_tail = match self.bounds.left_tail_range(node) {
            Some(t) => t,
            None => {
                self.transcript.prunes_dead += 1;
                return Step::Refuted;
            }
        };

        if let Goal::ForcedBlock { claim, .. } = goal {
            if contains_claim(node, claim) {
                return Step::Matched;
            }
        }

        tr!("lambda0");
        let l0 = self.bounds.lambda_mark(node, &right_tail, &left_tail);
        tr!("value_prune");
        if let Some(step) = self.value_prune(goal, &l0) {
            return step;
        }
        tr!("position_prune");
        if let Some(step) = self.position_prune(node, goal, &right_tail, &left_tail, &l0) {
            return step;
        }
        tr!("locked/extend");

        // fully locked: a single explicit doubly periodic sequence remains
        if let (SideState::Locked(_), SideState::Locked(_)) = (&node.left, &node.right) {
            return self.resolve_limit(node, goal, &l0);
        }

        // try to lock either open side into its repeating period
        if matches!(node.right, SideState::Open) {
            if let Some(step) = self.try_lock(node, goal) {
                return step;
            }
        }
        if matches!(node.left, SideState::Open) {
            let t = node.transposed();
            if let Some(step) = self.try_lock(&t, goal) {
                return match step {
                    Step::Expand(children) => Step::Expand(
                        children.into_iter().map(|c| c.transposed()).collect(),
                    ),
                    other => other,
                };
            }
        }

        // extend the side contributing the wider λ₀ enclosure; the width of a
        // side's contribution shrinks with its distance from the mark, so the
        // shorter arm is the wider one
        let extend_right = match (&node.left, &node.right) {
            (SideState::Locked(_), SideState::Open) => true,
            (SideState::Open, SideState::Locked(_)) => false,
            _ => {
                let rd = node.len() - 1 - node.mark;
                let ld = node.mark;
                rd <= ld
            }
        };
        let oriented = if extend_right {
            node.clone()
        } else {
            node.transposed()
        };

        // plain extension
        let ctx = self.bounds_context(&oriented);
        let mut children = Vec::new();
        for d in 1..=self.alphabet {
            if !self.bounds.digit_admissible(&ctx, d) {
                continue;
            }
            let mut child = oriented.clone();
            child.digits.push(d);
            child.depth += 1;
            children.push(if extend_right {
                child
            } else {
                child.transposed()
            });
        }
        Step::Expand(children)
    }

    fn bounds_context(&self, node: &Node) -> Vec<u8> {
        // admissibility context for a new right digit; a locked left side
        // matters only when the center is shorter than the longest window
        if node.len() + 1 < self.bounds.max_len {
            if let SideState::Locked(q) = &node.left {
                let mut ctx = Vec::new();
                while ctx.len() < self.bounds.max_len {
                    for &d in q.digits().iter().rev() {
                        ctx.push(d);
                    }
                }
                ctx.reverse();
                ctx.extend_from_slice(&node.digits);
                return ctx;
            }
        }
        node.digits.clone()
    }

    /// λ₀-range pruning vs the goal.
    fn value_prune(&mut self, goal: &Goal, l0: &LambdaRange) -> Option<Step> {
        match goal {
            Goal::ExcludeInterval { lo, hi } => {
                if l0.hi.cmp_exact(lo) != Ordering::Greater
                    || l0.lo.cmp_exact(hi) != Ordering::Less
                {
                    self.transcript.prunes_value += 1;
                    return Some(Step::Refuted);
                }
                None
            }
            Goal::MinAtLeast { bound } => {
                if l0.lo.cmp_exact(bound) != Ordering::Less {
                    self.transcript.prunes_value += 1;
                    return Some(Step::Refuted);
                }
                None
            }
            Goal::ForcedBlock { lo, .. } => {
                if l0.hi.cmp_exact(lo) != Ordering::Greater {
                    self.transcript.prunes_value += 1;
                    return Some(Step::Refuted);
                }
                None
            }
        }
    }

    /// Side-position pruning: a position whose λ lower bound already clears
    /// the goal's ceiling refutes every extension.
    fn position_prune(
        &mut self,
        node: &Node,
        goal: &Goal,
        right_tail: &TailRange,
        left_tail: &TailRange,
        l0: &LambdaRange,
    ) -> Option<Step> {
        let ceiling: Option<&Val> = match goal {
            Goal::ExcludeInterval { hi, .. } => Some(hi),
            Goal::MinAtLeast { bound } => Some(bound),
            Goal::ForcedBlock { .. } => None,
        };
        let sup_not_at_mark = matches!(goal, Goal::ExcludeInterval { .. });
        for pos in 0..node.len() {
            if pos == node.mark {
                // for MinAtLeast the mark is an ordinary position
                if !matches!(goal, Goal::MinAtLeast { .. }) {
                    continue;
                }
            }
            let lj = self.bounds.lambda_at(node, pos, right_tail, left_tail);
            if let Some(c) = ceiling {
                if lj.lo.cmp_exact(c) != Ordering::Less {
                    self.transcript.prunes_position += 1;
                    return Some(Step::Refuted);
                }
            }
            if sup_not_at_mark && lj.lo.cmp_exact(&l0.hi) == Ordering::Greater {
                self.transcript.prunes_position += 1;
                return Some(Step::Refuted);
            }
        }
        // one period of positions inside a locked tail
        for (side_right, state) in [(true, &node.right), (false, &node.left)] {
            if let SideState::Locked(p) = state {
                for off in 0..p.len() {
                    let lj = self.lambda_locked_zone(node, side_right, off, right_tail, left_tail);
                    if let Some(c) = ceiling {
                        if lj.lo.cmp_exact(c) != Ordering::Less {
                            self.transcript.prunes_position += 1;
                            return Some(Step::Refuted);
                        }
                    }
                    if sup_not_at_mark && lj.lo.cmp_exact(&l0.hi) == Ordering::Greater {
                        self.transcript.prunes_position += 1;
                        return Some(Step::Refuted);
                    }
                }
            }
        }
        None
    }

    /// λ at offset `off` into a locked periodic zone.
    fn lambda_locked_zone(
        &self,
        node: &Node,
        side_right: bool,
        off: usize,
        right_tail: &TailRange,
        left_tail: &TailRange,
    ) -> LambdaRange {
        let n = if side_right {
            node.clone()
        } else {
            node.transposed()
        };
        let lt = if side_right {
            left_tail.clone()
        } else {
            right_tail.clone()
        };
        let p = match &n.right {
            SideState::Locked(p) => p.clone(),
            _ => unreachable!(),
        };
        // extend the center virtually by p[0..=off]
        let mark = n.digits.len() + off;
        let mut digits = n.digits.clone();
        digits.extend_from_slice(&p.digits()[..=off]);
        let rot = p.rotate_left((off + 1) % p.len());
        let virt = Node {
            digits,
            mark,
            left: n.left.clone(),
            right: SideState::Locked(rot.clone()),
            depth: n.depth,
        };
        let vr = TailRange::exact(Mobius::of_word(rot.digits()).fixed_point());
        self.bounds.lambda_at(&virt, virt.mark, &vr, &lt)
    }

    /// Attempt to lock the right side of `node` (already oriented) into its
    /// trailing period. Succeeds only when every one-period deviation class
    /// is refuted uniformly over all repetition depths.
    fn try_lock(&mut self, node: &Node, goal: &Goal) -> Option<Step> {
        if matches!(node.right, SideState::Locked(_)) {
            return None;
        }
        if let Goal::ForcedBlock { claim, .. } = goal {
            // deviators are refuted by value alone, which is only complete
            // once the claim's span is pinned down
            let spans = node.mark >= claim.mark
                && node.mark + (claim.word.len() - claim.mark) <= node.len();
            if !spans {
                return None;
            }
        }
        let suffix_budget = node.len().saturating_sub(node.mark + 1);
        'lens: for l in 1..=self.cfg.max_period.min(suffix_budget / 2) {
            let d = &node.digits;
            let n = d.len();
            if d[n - l..] != d[n - 2 * l..n - l] {
                continue;
            }
            let p = Word::new(d[n - l..].to_vec()).unwrap();
            // skip non-minimal multiples of a shorter repetition
            if p.minimal_period().len() != l {
                continue;
            }
            // even-length working period, and enough pure repetitions behind
            // the deviation window to make its constraints depth-independent
            let pp = if l % 2 == 0 { p.clone() } else { p.concat(&p) };
            let pad_reps = (48 / pp.len() + 2).max(2);
            let need = (pad_reps + 1) * pp.len() + self.bounds.max_len;
            let reps_avail = {
                let mut k = 0usize;
                while d.len() >= (k + 1) * l && d[d.len() - (k + 1) * l..d.len() - k * l] == *p.digits()
                {
                    k += 1;
                }
                k * l
            };
            // the repetition zone must stay strictly right of the mark
            if reps_avail < need || node.len() - reps_avail <= node.mark {
                continue; // keep unrolling first
            }
            let fix = Mobius::of_word(pp.digits()).fixed_point();
            // deviation classes: continuation = pp^k · pp[0..o] · d · (anything)
            for o in 0..pp.len() {
                for dg in 1..=self.alphabet {
                    if dg == pp.digits()[o] {
                        continue;
                    }
                    if !self.deviator_refuted(node, &pp, o, dg, &fix, goal, pad_reps) {
                        self.transcript.cut_failures += 1;
                        continue 'lens;
                    }
                }
            }
            self.transcript.locks += 1;
            let mut child = node.clone();
            child.right = SideState::Locked(p);
            child.depth += 1;
            return Some(Step::Expand(vec![child]));
        }
        None
    }

    /// Refute every extension that follows the period k more times and then
    /// breaks it at offset `o` with digit `dg`, uniformly in k ≥ 0.
    #[allow(clippy::too_many_arguments)]
    fn deviator_refuted(
        &mut self,
        node: &Node,
        pp: &Word,
        o: usize,
        dg: u8,
        fix: &cf_core::QuadExt,
        goal: &Goal,
        pad_reps: usize,
    ) -> bool {
        // admissibility of the deviation window behind pure repetitions
        let mut zone: Vec<u8> = Vec::new();
        while zone.len() < self.bounds.max_len + pp.len() {
            zone.extend_from_slice(pp.digits());
        }
        zone.extend_from_slice(&pp.digits()[..o]);
        zone.push(dg);
        let dev_state = match self.bounds.graph.context_state(&zone) {
            Some(s) => s,
            None => return true, // completes a forbidden word: not in the space
        };
        // tail value range after the deviation
        let (tmin, tmax) = {
            let lo = self.bounds.oracle.tail(dev_state, Dir::Min);
            let hi = self.bounds.oracle.tail(dev_state, Dir::Max);
            match (lo, hi) {
                (Some(a), Some(b)) => (a.value, b.value),
                _ => return true, // no infinite continuation
            }
        };
        // value range at the start of the deviation block (tail space):
        // [pp[0..o], dg, continuation…]
        let mut dev_digits = pp.digits()[..o].to_vec();
        dev_digits.push(dg);
        let dev_range = mobius_range(
            &dev_digits,
            &TailRange {
                lo: tmin,
                hi: tmax,
                exact: false,
            },
        );
        // hull over all repetition depths: the period map is an increasing
        // contraction with fixed point `fix`, so every orbit stays inside
        let hull = TailRange {
            lo: if dev_range.lo.cmp_exact(fix) == Ordering::Less {
                dev_range.lo.clone()
            } else {
                fix.clone()
            },
            hi: if dev_range.hi.cmp_exact(fix) == Ordering::Greater {
                dev_range.hi.clone()
            } else {
                fix.clone()
            },
            exact: false,
        };
        // λ-bounds of the whole class: same central word, tail range = hull
        let left_tail = match self.bounds.left_tail_range(node) {
            Some(t) => t,
            None => return true,
        };
        let l0 = self.bounds.lambda_mark(node, &hull, &left_tail);
        match goal {
            Goal::ExcludeInterval { lo, hi } => {
                if l0.hi.cmp_exact(lo) != Ordering::Greater
                    || l0.lo.cmp_exact(hi) != Ordering::Less
                {
                    return true;
                }
                // positions within the central word, class-uniform
                for pos in 0..node.len() {
                    if pos == node.mark {
                        continue;
                    }
                    let lj = self.bounds.lambda_at(node, pos, &hull, &left_tail);
                    if lj.lo.cmp_exact(hi) != Ordering::Less
                        || lj.lo.cmp_exact(&l0.hi) == Ordering::Greater
                    {
                        return true;
                    }
                }
                // positions inside the deviation zone, uniform over k: left
                // part bounded through the pure-period context
                self.zone_position_refutes(node, pp, o, dg, dev_state, pad_reps, |lj_lo| {
                    lj_lo.cmp_exact(hi) != Ordering::Less
                })
            }
            Goal::MinAtLeast { bound } => {
                if l0.lo.cmp_exact(bound) != Ordering::Less {
                    return true;
                }
                for pos in 0..node.len() {
                    let lj = self.bounds.lambda_at(node, pos, &hull, &left_tail);
                    if lj.lo.cmp_exact(bound) != Ordering::Less {
                        return true;
                    }
                }
                self.zone_position_refutes(node, pp, o, dg, dev_state, pad_reps, |lj_lo| {
                    lj_lo.cmp_exact(bound) != Ordering::Less
                })
            }
            Goal::ForcedBlock { lo, .. } => {
                // deviators must still be value-refuted; claims were already
                // checked on the node itself
                l0.hi.cmp_exact(lo) != Ordering::Greater
            }
        }
    }

    /// Try to refute a deviation class via a position inside the repetition
    /// zone or the deviation itself; bounds are uniform in the repetition
    /// depth because the position's left context is dominated through pure
    /// period repetitions and the node's own left bound.
    #[allow(clippy::too_many_arguments)]
    fn zone_position_refutes(
        &mut self,
        node: &Node,
        pp: &Word,
        o: usize,
        dg: u8,
        dev_state: subshift::StateId,
        pad_reps: usize,
        refutes: impl Fn(&Val) -> bool,
    ) -> bool {
        // window: several full periods + partial + deviation digit, so that
        // positions near the deviation see a long exact context on the left
        let mut win: Vec<u8> = Vec::new();
        for _ in 0..pad_reps {
            win.extend_from_slice(pp.digits());
        }
        win.extend_from_slice(&pp.digits()[..o]);
        win.push(dg);
        // right-tail value range after the deviation
        let (rt_lo, rt_hi) = {
            let lo = self.bounds.oracle.tail(dev_state, Dir::Min);
            let hi = self.bounds.oracle.tail(dev_state, Dir::Max);
            match (lo, hi) {
                (Some(a), Some(b)) => (a.value, b.value),
                _ => return true,
            }
        };
        for pos in 0..win.len() {
            // right part: [win[pos]; win[pos+1..], tail]
            let right = mobius_range(
                &win[pos..],
                &TailRange {
                    lo: rt_lo.clone(),
                    hi: rt_hi.clone(),
                    exact: false,
                },
            );
            // left part: digits win[..pos] reversed, then unboundedly many
            // period repetitions — bound by the subshift extremal from the
            // reversed pure-period context
            let mut left_digits: Vec<u8> = win[..pos].to_vec();
            // prepend enough period reps to saturate the автомат state
            let mut reps: Vec<u8> = Vec::new();
            while reps.len() < self.bounds.max_len + pp.len() {
                let mut block = pp.digits().to_vec();
                block.extend_from_slice(&reps);
                reps = block;
            }
            let mut full: Vec<u8> = reps;
            full.extend_from_slice(&left_digits);
            left_digits = full;
            left_digits.reverse();
            let ls = match self.bounds.graph.context_state(&left_digits) {
                Some(s) => s,
                None => return true,
            };
            let (lt_lo, lt_hi) = {
                let lo = self.bounds.oracle.tail(ls, Dir::Min);
                let hi = self.bounds.oracle.tail(ls, Dir::Max);
                match (lo, hi) {
                    (Some(a), Some(b)) => (a.value, b.value),
                    _ => return true,
                }
            };
            let left = recip_range(&mobius_range(
                &left_digits,
                &TailRange {
                    lo: lt_lo,
                    hi: lt_hi,
                    exact: false,
                },
            ));
            let lj_lo = Val::new(right.lo.clone(), left.lo.clone());
            if refutes(&lj_lo) {
                return true;
            }
        }
        let _ = node;
        false
    }

    /// Both sides locked: one explicit doubly periodic sequence remains.
    fn resolve_limit(&mut self, node: &Node, goal: &Goal, l0: &LambdaRange) -> Step {
        let (lp, rp) = match (&node.left, &node.right) {
            (SideState::Locked(a), SideState::Locked(b)) => (a.clone(), b.clone()),
            _ => unreachable!(),
        };
        let dp = DoublyPeriodicWord::new(lp, node.word(), rp).expect("nonempty periods");
        let (m, _) = markov_value_dp(&dp).expect("exact markov value");
        debug_assert!(l0.exact);
        match goal {
            Goal::ExcludeInterval { lo, hi } => {
                let inside = m.lo.cmp_exact(lo) == Ordering::Greater
                    && m.lo.cmp_exact(hi) == Ordering::Less;
                if inside {
                    Step::Counterexample {
                        witness: node.render(),
                        value: m.lo,
                    }
                } else {
                    Step::Refuted
                }
            }
            Goal::MinAtLeast { bound } => {
                if m.lo.cmp_exact(bound) == Ordering::Less {
                    Step::Counterexample {
                        witness: node.render(),
                        value: m.lo,
                    }
                } else {
                    Step::Refuted
                }
            }
            Goal::ForcedBlock { lo, claim } => {
                if l0.hi.cmp_exact(lo) != Ordering::Greater {
                    Step::Refuted
                } else if contains_claim(node, claim) {
                    Step::Matched
                } else {
                    Step::Counterexample {
                        witness: node.render(),
                        value: l0.lo.clone(),
                    }
                }
            }
        }
    }
}

fn width_f64(r: &TailRange) -> f64 {
    (r.hi.to_f64() - r.lo.to_f64()).abs()
}

/// Does the node's central word contain the claim block (or its transpose)
/// with the claim's mark aligned at the node's mark?
pub fn contains_claim(node: &Node, claim: &MarkedWord) -> bool {
    let fits = |c: &MarkedWord| -> bool {
        if node.mark < c.mark {
            return false;
        }
        let start = node.mark - c.mark;
        let end = start + c.word.len();
        if end > node.digits.len() {
            return false;
        }
        node.digits[start..end] == *c.word.digits()
    };
    fits(claim) || fits(&claim.transpose())
}

enum Step {
    Refuted,
    Matched,
    Counterexample { witness: String, value: Val },
    Expand(Vec<Node>),
    Stuck(String),
}
