//! Maximal-gap certification.
//!
//! A gap claim (ν, μ) is PASSed by (i) checking both endpoints are Markov
//! values attained at their marks, (ii) verifying an ambient ledger of words
//! that force a λ position ≥ μ for every extension, (iii) verifying trigger
//! words whose minimal containing Markov value is ≥ μ, and (iv) an exhaustive
//! forced-extension search refuting any sequence with m = λ₀ inside the open
//! interval over the remaining subshift. By shift-invariance and compactness,
//! excluding mark-attaining sequences excludes the whole interval from the
//! spectrum.

use crate::engine::{Engine, EngineCfg, Goal, Outcome, Transcript};
use crate::node::Node;
use cf_core::dp::{markov_of_biseq, markov_value_dp, DoublyPeriodicWord};
use cf_core::{bound_all_extensions, MarkedBiSeq, MarkedWord, Val, Word};
use std::cmp::Ordering;
use subshift::ForbiddenSet;

#[derive(Clone, Debug)]
pub struct GapSpec {
    pub name: String,
    pub nu: MarkedBiSeq,
    pub mu: MarkedBiSeq,
    pub alphabet: u8,
    /// Words with a position whose λ is ≥ μ for every extension.
    pub ambient: Vec<Word>,
    /// Words whose minimal containing Markov value is ≥ μ, with the claimed
    /// attaining sequence.
    pub triggers: Vec<TriggerSpec>,
}

#[derive(Clone, Debug)]
pub struct TriggerSpec {
    pub word: Word,
    pub witness: MarkedBiSeq,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Pass,
    Fail { detail: String },
    Inconclusive { detail: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug)]
pub struct GapReport {
    pub verdict: Verdict,
    pub lo: Val,
    pub hi: Val,
    pub checks: Vec<(String, bool, String)>,
    pub transcript: Transcript,
}

/// A word excludes values below `ceiling` when some position's λ is at least
/// `ceiling` for every bi-infinite extension; returns such a position.
pub fn exclusion_position(word: &Word, alphabet: u8, ceiling: &Val) -> Option<usize> {
    (0..word.len()).find(|&pos| {
        let m = MarkedWord::new(word.clone(), pos).unwrap();
        let b = bound_all_extensions(&m, alphabet);
        b.lo.cmp_exact(ceiling) != Ordering::Less
    })
}

pub fn certify_gap(spec: &GapSpec, cfg: EngineCfg) -> GapReport {
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    let mut fail: Option<String> = None;

    // endpoints: exact values, attained at the mark
    let (m_nu, _, nu_at_mark) = markov_of_biseq(&spec.nu).expect("nu determined");
    let (m_mu, _, mu_at_mark) = markov_of_biseq(&spec.mu).expect("mu determined");
    let lo = m_nu.lo.clone();
    let hi = m_mu.lo.clone();
    checks.push((
        "endpoint ν attained at mark".into(),
        nu_at_mark,
        format!("ν = {}", m_nu.decimal(10)),
    ));
    checks.push((
        "endpoint μ attained at mark".into(),
        mu_at_mark,
        format!("μ = {}", m_mu.decimal(10)),
    ));
    let ordered = lo.cmp_exact(&hi) == Ordering::Less;
    checks.push(("ν < μ".into(), ordered, String::new()));
    if !(nu_at_mark && mu_at_mark && ordered) {
        fail = Some("endpoint checks failed".into());
    }

    // fast negative control: hunt for an explicit periodic value inside
    if fail.is_none() {
        if let Some((witness, value)) = hunt_periodic_inside(&lo, &hi, spec.alphabet) {
            return GapReport {
                verdict: Verdict::Fail {
                    detail: format!(
                        "explicit spectrum point inside the interval: m({witness}) = {}",
                        value.to_f64()
                    ),
                },
                lo,
                hi,
                checks,
                transcript: Transcript::default(),
            };
        }
    }

    // ambient ledger
    for w in &spec.ambient {
        let pos = exclusion_position(w, spec.alphabet, &hi);
        let ok = pos.is_some();
        checks.push((
            format!("ambient word {w} forces λ ≥ μ"),
            ok,
            pos.map(|p| format!("at offset {p}")).unwrap_or_default(),
        ));
        if !ok && fail.is_none() {
            fail = Some(format!("ambient word {w} not verifiable"));
        }
    }

    // triggers: minimal containing value ≥ μ, certified by search
    let base =
        ForbiddenSet::new(spec.ambient.iter().cloned(), spec.alphabet).expect("ambient words");
    let mut transcript = Transcript::default();
    for t in &spec.triggers {
        let ok = verify_trigger(t, &base, &hi, &cfg, &mut transcript, &mut checks);
        if !ok && fail.is_none() {
            fail = Some(format!("trigger {} not certified", t.word));
        }
    }

    if let Some(detail) = fail {
        return GapReport {
            verdict: Verdict::Fail { detail },
            lo,
            hi,
            checks,
            transcript,
        };
    }

    // main exclusion search over the remaining subshift
    let mut full = spec.ambient.clone();
    full.extend(spec.triggers.iter().map(|t| t.word.clone()));
    let ambient = ForbiddenSet::new(full, spec.alphabet).expect("ambient words");
    let mut engine = Engine::new(&ambient, cfg);
    let roots: Vec<Node> = (1..=spec.alphabet).map(|d| Node::root(vec![d], 0)).collect();
    let outcome = engine.run(
        roots,
        &Goal::ExcludeInterval {
            lo: lo.clone(),
            hi: hi.clone(),
        },
    );
    let mut transcript_main = engine.transcript.clone();
    transcript_main.nodes += transcript.nodes;
    let verdict = match outcome {
        Outcome::Closed => Verdict::Pass,
        Outcome::Counterexample { witness, value } => Verdict::Fail {
            detail: format!("witness {witness} with value {:.12}", value.to_f64()),
        },
        Outcome::Inconclusive { reason, frontier } => Verdict::Inconclusive {
            detail: format!("{reason}; surviving: {}", frontier.join(" | ")),
        },
    };
    GapReport {
        verdict,
        lo,
        hi,
        checks,
        transcript: transcript_main,
    }
}

fn verify_trigger(
    t: &TriggerSpec,
    base: &ForbiddenSet,
    hi: &Val,
    cfg: &EngineCfg,
    transcript: &mut Transcript,
    checks: &mut Vec<(String, bool, String)>,
) -> bool {
    // witness really contains the word, avoids the base ledger, and its
    // Markov value is ≥ μ
    let (dpw, _) = match DoublyPeriodicWord::from_biseq(&t.witness) {
        Ok(x) => x,
        Err(_) => return false,
    };
    let window = dpw
        .p1
        .repeat(3)
        .concat(&dpw.tau)
        .concat(&dpw.p2.repeat(3));
    let contains = window.contains_factor(&t.word)
        || window.contains_factor(&t.word.transpose());
    let (mval, _) = markov_value_dp(&dpw).expect("markov of witness");
    let ge = mval.lo.cmp_exact(hi) != Ordering::Less;
    // search: nothing containing the word goes below the witness value
    let mut engine = Engine::new(base, EngineCfg { ..*cfg });
    let root = Node::root(t.word.digits().to_vec(), 0);
    let outcome = engine.run(
        vec![root],
        &Goal::MinAtLeast {
            bound: mval.lo.clone(),
        },
    );
    transcript.nodes += engine.transcript.nodes;
    let closed = matches!(outcome, Outcome::Closed);
    let ok = contains && ge && closed;
    checks.push((
        format!("trigger {} minimal value ≥ μ", t.word),
        ok,
        format!(
            "m(witness) = {}, contains={contains}, search {}",
            mval.decimal(9),
            match &outcome {
                Outcome::Closed => "closed".to_string(),
                Outcome::Counterexample { witness, value } =>
                    format!("counterexample {witness} = {:.10}", value.to_f64()),
                Outcome::Inconclusive { reason, .. } => format!("inconclusive: {reason}"),
            }
        ),
    ));
    ok
}

/// Deterministic hunt for an explicit purely periodic Markov value inside an
/// open interval: enumerate short periods with a float prefilter and confirm
/// hits exactly. Finds witnesses inside dense regions quickly; silent on true
/// gaps.
pub fn hunt_periodic_inside(lo: &Val, hi: &Val, alphabet: u8) -> Option<(String, Val)> {
    let lof = lo.to_f64();
    let hif = hi.to_f64();
    for len in 2..=9usize {
        let mut digits = vec![1u8; len];
        loop {
            // skip rotations: only lexicographically-least representatives
            if is_least_rotation(&digits) {
                let est = approx_periodic_markov(&digits);
                if est > lof - 1e-7 && est < hif + 1e-7 {
                    let p = Word::new(digits.clone()).unwrap();
                    let dp = DoublyPeriodicWord::periodic(p.clone()).unwrap();
                    if let Ok((m, w)) = markov_value_dp(&dp) {
                        if m.lo.cmp_exact(lo) == Ordering::Greater
                            && m.lo.cmp_exact(hi) == Ordering::Less
                        {
                            let off = match w {
                                cf_core::dp::Witness::Window(o) => o % p.len(),
                                _ => 0,
                            };
                            let rot = p.rotate_left(off);
                            let mut s = String::from("<");
                            for (i, d) in rot.digits().iter().enumerate() {
                                s.push((b'0' + d) as char);
                                if i == 0 {
                                    s.push('*');
                                }
                            }
                            s.push('>');
                            return Some((s, m.lo));
                        }
                    }
                }
            }
            if !advance_odometer(&mut digits, alphabet) {
                break;
            }
        }
    }
    None
}

/// Lexicographic successor over {1..alphabet}^len; false when wrapped.
fn advance_odometer(digits: &mut [u8], alphabet: u8) -> bool {
    for i in (0..digits.len()).rev() {
        if digits[i] < alphabet {
            digits[i] += 1;
            for d in digits.iter_mut().skip(i + 1) {
                *d = 1;
            }
            return true;
        }
        digits[i] = 1;
    }
    false
}

fn is_least_rotation(d: &[u8]) -> bool {
    let n = d.len();
    (1..n).all(|k| {
        let rot = |i: usize| d[(i + k) % n];
        for i in 0..n {
            match d[i].cmp(&rot(i)) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        true
    })
}

/// Float estimate of m over all rotations of a period.
fn approx_periodic_markov(p: &[u8]) -> f64 {
    let n = p.len();
    let at = |i: i64| p[i.rem_euclid(n as i64) as usize] as f64;
    let mut best = f64::MIN;
    for r in 0..n as i64 {
        let mut right = 0.0f64;
        for k in (1..=60).rev() {
            right = 1.0 / (at(r + k) + right);
        }
        let mut left = 0.0f64;
        for k in (1..=60).rev() {
            left = 1.0 / (at(r - k) + left);
        }
        best = best.max(at(r) + right + left);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use cf_core::parse_word;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| Word::parse(s).unwrap()).collect()
    }

    #[test]
    fn hall_ray_interval_fails_with_witness() {
        let spec = GapSpec {
            name: "hall-ray-negative".into(),
            // endpoints only delimit the claimed interval; values ~4.6, ~4.61
            nu: parse_word("<23111*>").unwrap(),
            mu: parse_word("<13111*>").unwrap(),
            alphabet: 4,
            ambient: vec![],
            triggers: vec![],
        };
        // sanity: the two endpoint values bracket (4.6, 4.61)?
        let report = certify_gap(&spec, EngineCfg::default());
        // regardless of the exact endpoint values, a dense region must either
        // fail endpoint checks or produce a witness
        assert!(
            !report.verdict.is_pass(),
            "dense interval must not certify: {:?}",
            report.verdict
        );
    }
}
