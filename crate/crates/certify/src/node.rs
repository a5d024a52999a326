//! Search nodes: a finite marked central word with constrained or locked
//! tails, and exact λ bounds over all admissible extensions.

use cf_core::{Mobius, QuadExt, Val, Word};
use std::rc::Rc;
use subshift::{BlockGraph, Dir, TailOracle};

/// How a side of the central word continues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideState {
    /// Any admissible continuation within the ambient subshift.
    Open,
    /// Committed periodic continuation. For the right side the tail reads
    /// p[0], p[1], … outward; for the left side it reads q[last], q[last-1],
    /// … outward (i.e. the tail is …qqq in natural order).
    Locked(Word),
}

/// A central word with a marked position and side constraints.
#[derive(Clone, Debug)]
pub struct Node {
    pub digits: Vec<u8>,
    pub mark: usize,
    pub left: SideState,
    pub right: SideState,
    pub depth: u32,
}

impl Node {
    pub fn root(digits: Vec<u8>, mark: usize) -> Node {
        Node {
            digits,
            mark,
            left: SideState::Open,
            right: SideState::Open,
            depth: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    /// Mirror image: left and right swap, the mark reflects, periods reverse.
    pub fn transposed(&self) -> Node {
        let mut digits = self.digits.clone();
        digits.reverse();
        Node {
            digits,
            mark: self.digits.len() - 1 - self.mark,
            left: match &self.right {
                SideState::Open => SideState::Open,
                SideState::Locked(p) => SideState::Locked(p.transpose()),
            },
            right: match &self.left {
                SideState::Open => SideState::Open,
                SideState::Locked(p) => SideState::Locked(p.transpose()),
            },
            depth: self.depth,
        }
    }

    pub fn word(&self) -> Word {
        Word::new(self.digits.clone()).expect("digits valid")
    }

    /// Render like `<q>…d₀*…<p>` for reports.
    pub fn render(&self) -> String {
        let mut s = String::new();
        if let SideState::Locked(p) = &self.left {
            s.push('<');
            s.push_str(&p.to_string());
            s.push('>');
        }
        for (i, d) in self.digits.iter().enumerate() {
            s.push((b'0' + d) as char);
            if i == self.mark {
                s.push('*');
            }
        }
        if let SideState::Locked(p) = &self.right {
            s.push('<');
            s.push_str(&p.to_string());
            s.push('>');
        }
        s
    }
}

/// Value range of a one-sided tail, as exact endpoints.
#[derive(Clone, Debug)]
pub struct TailRange {
    pub lo: QuadExt,
    pub hi: QuadExt,
    pub exact: bool,
}

impl TailRange {
    pub fn exact(x: QuadExt) -> Self {
        TailRange {
            lo: x.clone(),
            hi: x,
            exact: true,
        }
    }
}

/// λ range over all admissible extensions of a node.
#[derive(Clone, Debug)]
pub struct LambdaRange {
    pub lo: Val,
    pub hi: Val,
    pub exact: bool,
}

/// Bound evaluator tied to one ambient graph.
pub struct Bounds {
    pub graph: Rc<BlockGraph>,
    pub oracle: TailOracle,
    pub max_len: usize,
}

impl Bounds {
    pub fn new(graph: Rc<BlockGraph>, max_len: usize) -> Self {
        let oracle = TailOracle::new(graph.clone());
        Bounds {
            graph,
            oracle,
            max_len,
        }
    }

    /// Context digits constraining the right tail: locked-left unroll (enough
    /// to saturate the automaton state) plus the central digits.
    fn right_context(&self, node: &Node) -> Vec<u8> {
        let mut ctx = Vec::new();
        if let SideState::Locked(q) = &node.left {
            let need = self.max_len + 1;
            let mut tail = Vec::new();
            while tail.len() < need {
                // natural order …qq ends with q[last]; build backwards
                for &d in q.digits().iter().rev() {
                    tail.push(d);
                    if tail.len() >= need {
                        break;
                    }
                }
            }
            tail.reverse();
            ctx.extend_from_slice(&tail);
        }
        ctx.extend_from_slice(&node.digits);
        ctx
    }

    fn left_context(&self, node: &Node) -> Vec<u8> {
        self.right_context(&node.transposed())
    }

    /// Range of tail values `[t₁; t₂, …]` over admissible continuations to
    /// the right of the whole central word; None when no infinite admissible
    /// continuation exists (every extension dies).
    pub fn right_tail_range(&mut self, node: &Node) -> Option<TailRange> {
        match &node.right {
            SideState::Locked(p) => Some(TailRange::exact(
                Mobius::of_word(p.digits()).fixed_point(),
            )),
            SideState::Open => {
                let ctx = self.right_context(node);
                let s = self.graph.context_state(&ctx)?;
                let lo = self.oracle.tail(s, Dir::Min)?.value;
                let hi = self.oracle.tail(s, Dir::Max)?.value;
                Some(TailRange {
                    lo,
                    hi,
                    exact: false,
                })
            }
        }
    }

    pub fn left_tail_range(&mut self, node: &Node) -> Option<TailRange> {
        self.right_tail_range(&node.transposed())
    }

    /// λ at offset `pos` (index into digits) over all admissible extensions,
    /// given precomputed side tail ranges.
    pub fn lambda_at(
        &self,
        node: &Node,
        pos: usize,
        right_tail: &TailRange,
        left_tail: &TailRange,
    ) -> LambdaRange {
        let right = mobius_range(&node.digits[pos..], right_tail);
        let mut left_digits: Vec<u8> = node.digits[..pos].to_vec();
        left_digits.reverse();
        let left = recip_range(&mobius_range(&left_digits, left_tail));
        LambdaRange {
            lo: Val::new(right.lo.clone(), left.lo.clone()),
            hi: Val::new(right.hi, left.hi),
            exact: right_tail.exact && left_tail.exact,
        }
    }

    /// λ at the mark.
    pub fn lambda_mark(
        &self,
        node: &Node,
        right_tail: &TailRange,
        left_tail: &TailRange,
    ) -> LambdaRange {
        self.lambda_at(node, node.mark, right_tail, left_tail)
    }

    /// Is the central word plus one digit still admissible (suffix windows
    /// only; the rest was checked when the node was built)?
    pub fn digit_admissible(&self, context: &[u8], d: u8) -> bool {
        let from = context.len().saturating_sub(self.max_len.saturating_sub(1));
        let mut window = context[from..].to_vec();
        window.push(d);
        // only windows ending at the new digit are new
        self.graph_ambient_ok(&window)
    }

    fn graph_ambient_ok(&self, window_ending_at_new: &[u8]) -> bool {
        // check every suffix of the window against the forbidden words via
        // the automaton: a transition exists iff no forbidden word completes
        let n = window_ending_at_new.len();
        let prefix = &window_ending_at_new[..n - 1];
        match self.graph.context_state(prefix) {
            Some(s) => self
                .graph
                .successor(s, window_ending_at_new[n - 1])
                .is_some(),
            None => false,
        }
    }
}

/// Apply `[d₀; d₁, …, dₙ, t]` to a tail-value range.
pub fn mobius_range(digits: &[u8], tail: &TailRange) -> TailRange {
    let m = Mobius::of_word(digits);
    let a = m.apply_quad(&tail.lo);
    let b = m.apply_quad(&tail.hi);
    if tail.exact {
        return TailRange {
            lo: a.clone(),
            hi: a,
            exact: true,
        };
    }
    if m.det_sign() >= 0 {
        TailRange {
            lo: a,
            hi: b,
            exact: false,
        }
    } else {
        TailRange {
            lo: b,
            hi: a,
            exact: false,
        }
    }
}

/// `[0; stream]` from a stream-value range (reciprocal reverses order).
pub fn recip_range(r: &TailRange) -> TailRange {
    let m = Mobius::reciprocal();
    TailRange {
        lo: m.apply_quad(&r.hi),
        hi: m.apply_quad(&r.lo),
        exact: r.exact,
    }
}
