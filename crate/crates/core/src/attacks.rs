//! Key-recovery attacks that read only public transcripts: brute-force
//! discrete log and conjugacy search, the decomposition-to-factorization
//! reduction, the normal-subgroup shortcut, commutator probes and a greedy
//! length-based descent.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::platform::{square_and_multiply, Element, Platform, Shape, SubgroupGens};
use crate::problems::factorization_decide_bounded;
use crate::search::{Ball, Search};
use crate::transcript::{Party, Transcript};
use crate::word::Word;

/// Enumeration depth for generic subgroup membership checks.
pub const MEMBERSHIP_BOUND: usize = 6;

/// Outcome of an attack on one transcript.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AttackReport {
    pub attack: String,
    pub success: bool,
    pub recovered_key: Option<Element>,
    pub multiplications: u64,
    pub candidates: u64,
    pub notes: Vec<String>,
}

impl AttackReport {
    fn new(attack: &str) -> Self {
        Self {
            attack: attack.to_string(),
            success: false,
            recovered_key: None,
            multiplications: 0,
            candidates: 0,
            notes: Vec::new(),
        }
    }

    fn recovered(mut self, key: Element) -> Self {
        self.success = true;
        self.recovered_key = Some(key);
        self
    }

    fn failed(mut self, why: impl Into<String>) -> Self {
        self.success = false;
        self.recovered_key = None;
        self.notes.push(why.into());
        self
    }

    /// Flat `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("attack: {}\nsuccess: {}\n", self.attack, self.success);
        match &self.recovered_key {
            Some(k) => out.push_str(&format!("recovered_key: {k}\n")),
            None => out.push_str("recovered_key: -\n"),
        }
        out.push_str(&format!("multiplications: {}\ncandidates: {}\n", self.multiplications, self.candidates));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Least `n ∈ 1..=bound` with `g^n = target`; work is the number of powers tried.
pub fn brute_force_dlog(g: &Element, target: &Element, bound: u64) -> Search<u64> {
    let mut acc = g.clone();
    for n in 1..=bound {
        if &acc == target {
            return Search { witness: Some(n), work: n };
        }
        acc = acc.mul(g);
    }
    Search { witness: None, work: bound }
}

/// Breadth-first conjugacy search: the first expression `x` over `gens` (and
/// inverses) of length `≤ max_len`, shortest then lexicographic, with
/// `u^x = v`. Expressions are deduplicated by value, so the search is
/// complete up to its bound.
pub fn brute_force_csp(u: &Element, v: &Element, gens: &SubgroupGens, max_len: usize) -> Result<Search<Word>> {
    brute_force_csp_multi(&[CspInstance { u: u.clone(), v: v.clone() }], gens, max_len)
}

/// Simultaneous conjugacy search over several instances sharing one solution.
pub fn brute_force_csp_multi(instances: &[CspInstance], gens: &SubgroupGens, max_len: usize) -> Result<Search<Word>> {
    csp_search_filtered(instances, gens, max_len, |_| true)
}

/// Like [`brute_force_csp_multi`], keeping only solutions that also pass
/// `accept` (used to check a candidate against the rest of a transcript).
pub fn csp_search_filtered(
    instances: &[CspInstance],
    gens: &SubgroupGens,
    max_len: usize,
    accept: impl Fn(&Element) -> bool,
) -> Result<Search<Word>> {
    let id = gens.platform().identity();
    let (ball, hit) =
        Ball::explore(&id, gens.gens(), true, max_len, |x| instances.iter().all(|i| i.solved_by(x)) && accept(x))?;
    let rank = gens.len();
    Ok(Search { witness: hit.map(|i| Word::from_parts(rank, ball.path(i))), work: ball.len() as u64 })
}

/// A conjugacy search instance: find `x` with `u^x = v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CspInstance {
    pub u: Element,
    pub v: Element,
}

impl CspInstance {
    pub fn solved_by(&self, x: &Element) -> bool {
        self.u.conj(x) == self.v
    }
}

/// `w'' = w^{-1} w'`. If `w' = a w b` then `w'' = (w^{-1} a w) · b`.
pub fn decomposition_to_factorization(w: &Element, w_prime: &Element) -> Element {
    w.inv().mul(w_prime)
}

/// For `A` normal, `w'' = (1, w'')` is a factorization as soon as `w'' ∈ A`.
pub fn normal_subgroup_attack(w_double_prime: &Element, a: &SubgroupGens) -> Result<(Element, Element)> {
    if !a.contains(w_double_prime, MEMBERSHIP_BOUND) {
        return Err(Error::AttackFailed("w'' is not in the subgroup A; it is not normal in this platform".into()));
    }
    Ok((w_double_prime.identity_like(), w_double_prime.clone()))
}

/// `a1 · P_B · a2` for any pair solving Alice's equation `a1 w a2 = P_A`.
pub fn key_from_decomposition_solution(a1: &Element, a2: &Element, bob_msg: &Element) -> Element {
    a1.mul(bob_msg).mul(a2)
}

/// From `w' = a w b` and a known `b1 ∈ B` commuting with `a`:
/// `[w', b1] b1^{-1} = ((b1^{-1})^w)^b`, a conjugacy instance solved by `b`.
pub fn commutator_probe_decomposition(w_prime: &Element, b1: &Element, w: &Element) -> CspInstance {
    let u = b1.inv().conj(w);
    CspInstance { u, v: w_prime.commutator(b1).mul(&b1.inv()) }
}

/// From `w' = a b` and `b1 ∈ B` commuting with `a`:
/// `[w', b1] b1^{-1} = (b1^{-1})^b`.
pub fn commutator_probe_factorization(w_prime: &Element, b1: &Element) -> CspInstance {
    CspInstance { u: b1.inv(), v: w_prime.commutator(b1).mul(&b1.inv()) }
}

/// From `w' = w^a` and `b` commuting with `a`: `[w', b] b^{-1} = ((b^{-1})^w)^a`.
pub fn commutator_probe_csp(w_prime: &Element, b: &Element, w: &Element) -> CspInstance {
    CspInstance { u: b.inv().conj(w), v: w_prime.commutator(b).mul(&b.inv()) }
}

/// Number of pairs `(a1, a2)` of distinct subgroup elements reachable by
/// expressions of length `≤ bound` with `a1 w a2 = target`.
pub fn uniqueness_check(w: &Element, target: &Element, a: &SubgroupGens, bound: usize) -> Result<usize> {
    let id = a.platform().identity();
    let (ball, _) = Ball::explore(&id, a.gens(), true, bound, |_| false)?;
    let values: std::collections::HashSet<&Element> = ball.elements().collect();
    let w_inv = w.inv();
    Ok(ball
        .elements()
        .filter(|a1| {
            let a2 = w_inv.mul(&a1.inv()).mul(target);
            values.contains(&a2)
        })
        .count())
}

/// Greedily undoes the conjugation in `conjugates[j] = bases[j]^x`, peeling
/// the generator (or inverse) of `gens` that most shortens the total length.
/// Returns `x` if the descent reaches the bases exactly.
fn peel_conjugator(
    bases: &[Element],
    conjugates: &[Element],
    gens: &SubgroupGens,
    max_iters: usize,
    report: &mut AttackReport,
) -> Option<Element> {
    let steps: Vec<Element> = gens.gens().iter().flat_map(|g| [g.clone(), g.inv()]).collect();
    let mut current = conjugates.to_vec();
    let mut x = gens.platform().identity();
    let total = |cs: &[Element]| cs.iter().map(Element::word_length).sum::<usize>();
    for _ in 0..max_iters {
        if current == bases {
            return Some(x);
        }
        let cur_len = total(&current);
        let mut best: Option<(usize, usize, Vec<Element>)> = None;
        for (i, s) in steps.iter().enumerate() {
            report.candidates += 1;
            let s_inv = s.inv();
            // c = s^{-1} c' s with c' one step closer to the base
            let next: Vec<Element> = current.iter().map(|c| c.conj(&s_inv)).collect();
            report.multiplications += 2 * next.len() as u64;
            let l = total(&next);
            if best.as_ref().is_none_or(|(bl, _, _)| l < *bl) {
                best = Some((l, i, next));
            }
        }
        let (l, i, next) = best?;
        if l >= cur_len {
            return None;
        }
        x = steps[i].mul(&x);
        current = next;
    }
    (current == bases).then_some(x)
}

/// Length-based attack on an AAG transcript over a free platform: recovers
/// `x` from `b_j^x` and `y` from `a_i^y` by greedy descent and forms
/// `x^{-1} y^{-1} x y`.
pub fn length_based_attack(t: &Transcript, a: &SubgroupGens, b: &SubgroupGens, max_iters: usize) -> AttackReport {
    let report = AttackReport::new("length-based");
    if t.protocol() != "aag" {
        return report.failed(format!("length-based descent targets aag transcripts, not {}", t.protocol()));
    }
    if !matches!(t.platform(), Platform::Free { .. } | Platform::DirectProduct { .. }) {
        return report.failed("platform has no word length");
    }
    let mut report = report;
    let b_x = t.messages(Party::Alice, "conj");
    let a_y = t.messages(Party::Bob, "conj");
    let Some(x) = peel_conjugator(b.gens(), &b_x, a, max_iters, &mut report) else {
        return report.failed("descent on Alice's conjugates stalled");
    };
    let Some(y) = peel_conjugator(a.gens(), &a_y, b, max_iters, &mut report) else {
        return report.failed("descent on Bob's conjugates stalled");
    };
    report.recovered(x.commutator(&y))
}

/// Rebuilds a published subgroup, recognizing direct factors and matrix
/// blocks so that membership tests are structural.
pub fn subgroup_from_transcript(t: &Transcript, label: &str) -> Result<SubgroupGens> {
    let gens = t.public_values(label);
    let shape = infer_shape(t.platform(), &gens);
    SubgroupGens::with_shape(t.platform().clone(), gens, shape)
}

pub fn infer_shape(platform: &Platform, gens: &[Element]) -> Shape {
    match *platform {
        Platform::DirectProduct { .. } => {
            if gens.iter().all(|g| matches!(g, Element::Pair(_, r) if r.is_empty())) {
                Shape::LeftFactor
            } else if gens.iter().all(|g| matches!(g, Element::Pair(l, _) if l.is_empty())) {
                Shape::RightFactor
            } else {
                Shape::Generic
            }
        }
        Platform::Matrix { n, .. } if n % 2 == 0 => {
            let k = n / 2;
            if gens.iter().all(|g| matches!(g, Element::Matrix(m) if m.is_upper_block(k))) {
                Shape::UpperBlock(k)
            } else if gens.iter().all(|g| matches!(g, Element::Matrix(m) if m.is_lower_block(k))) {
                Shape::LowerBlock(k)
            } else {
                Shape::Generic
            }
        }
        _ => Shape::Generic,
    }
}

/// Attack methods available on transcripts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AttackMethod {
    Dlog,
    Csp,
    DecompFactor,
    Normal,
    CommutatorProbe,
    LengthBased,
}

impl AttackMethod {
    pub const ALL: [AttackMethod; 6] = [
        AttackMethod::Dlog,
        AttackMethod::Csp,
        AttackMethod::DecompFactor,
        AttackMethod::Normal,
        AttackMethod::CommutatorProbe,
        AttackMethod::LengthBased,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackMethod::Dlog => "dlog",
            AttackMethod::Csp => "csp",
            AttackMethod::DecompFactor => "decomp-factor",
            AttackMethod::Normal => "normal",
            AttackMethod::CommutatorProbe => "commutator-probe",
            AttackMethod::LengthBased => "length-based",
        }
    }
}

impl fmt::Display for AttackMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttackMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown attack method `{s}`")))
    }
}

fn unsupported(method: AttackMethod, t: &Transcript) -> Error {
    Error::Setup(format!("method {method} does not apply to {} transcripts", t.protocol()))
}

/// Runs `method` against a transcript. Fails with a setup error when the
/// method does not apply to the transcript's protocol; otherwise always
/// returns a report, successful or not.
pub fn run_attack(t: &Transcript, method: AttackMethod, bound: usize) -> Result<AttackReport> {
    let mut report = AttackReport::new(method.name());
    match (method, t.protocol()) {
        (AttackMethod::Dlog, proto @ ("dh" | "elgamal")) => {
            let g = t.public_value("g")?;
            let (alice_pub, bob_pub) = if proto == "dh" {
                (t.message(Party::Alice, "power")?, t.message(Party::Bob, "power")?)
            } else {
                (t.message(Party::Alice, "pk")?, t.message(Party::Bob, "ct2")?)
            };
            // exponent 0 gives the identity
            let s = if alice_pub.is_identity() {
                Search { witness: Some(0), work: 0 }
            } else {
                brute_force_dlog(g, &alice_pub, bound as u64)
            };
            report.multiplications = s.work;
            report.candidates = s.work;
            Ok(match s.witness {
                Some(a) => {
                    let (key, mults) = square_and_multiply(&bob_pub, a);
                    report.multiplications += mults as u64;
                    report.notes.push(format!("alice exponent {a}"));
                    report.recovered(key)
                }
                None => report.failed(format!("no exponent up to {bound}")),
            })
        }
        (AttackMethod::Csp, "ko-lee") => {
            let w = t.public_value("w")?;
            let a = subgroup_from_transcript(t, "a-gen")?;
            let pa = t.message(Party::Alice, "msg")?;
            let pb = t.message(Party::Bob, "msg")?;
            let s = brute_force_csp(w, &pa, &a, bound)?;
            report.candidates = s.work;
            Ok(match s.witness {
                Some(expr) => {
                    let x = crate::platform::eval_word(&a, &expr)?;
                    report.notes.push(format!("conjugator expression {expr}"));
                    report.recovered(pb.conj(&x))
                }
                None => report.failed(format!("no conjugator within length {bound}")),
            })
        }
        (AttackMethod::Csp, "aag") => {
            let a = subgroup_from_transcript(t, "a-gen")?;
            let b = subgroup_from_transcript(t, "b-gen")?;
            let solve = |bases: &SubgroupGens, conj: Vec<Element>, over: &SubgroupGens| {
                let inst: Vec<CspInstance> =
                    bases.gens().iter().zip(conj).map(|(u, v)| CspInstance { u: u.clone(), v }).collect();
                brute_force_csp_multi(&inst, over, bound)
            };
            let sx = solve(&b, t.messages(Party::Alice, "conj"), &a)?;
            let sy = solve(&a, t.messages(Party::Bob, "conj"), &b)?;
            report.candidates = sx.work + sy.work;
            Ok(match (sx.witness, sy.witness) {
                (Some(ex), Some(ey)) => {
                    let x = crate::platform::eval_word(&a, &ex)?;
                    let y = crate::platform::eval_word(&b, &ey)?;
                    report.recovered(x.commutator(&y))
                }
                _ => report.failed(format!("no simultaneous conjugator within length {bound}")),
            })
        }
        (AttackMethod::DecompFactor, "decomp") => {
            let w = t.public_value("w")?;
            let a = subgroup_from_transcript(t, "a-gen")?;
            let pa = t.message(Party::Alice, "msg")?;
            let pb = t.message(Party::Bob, "msg")?;
            let w2 = decomposition_to_factorization(w, &pa);
            let s = factorization_decide_bounded(&w2, &a.conjugated(w), &a, bound)?;
            report.candidates = s.work;
            Ok(match s.witness {
                Some((x, y)) => {
                    // x = w^{-1} a1 w
                    let a1 = w.mul(&x).mul(&w.inv());
                    report.recovered(key_from_decomposition_solution(&a1, &y, &pb))
                }
                None => report.failed(format!("no factorization of w^-1 w' within length {bound}")),
            })
        }
        (AttackMethod::Normal, "decomp") => {
            let w = t.public_value("w")?;
            let a = subgroup_from_transcript(t, "a-gen")?;
            let pa = t.message(Party::Alice, "msg")?;
            let pb = t.message(Party::Bob, "msg")?;
            let w2 = decomposition_to_factorization(w, &pa);
            report.multiplications = 1;
            Ok(match normal_subgroup_attack(&w2, &a) {
                Ok((a1, a2)) => report.recovered(key_from_decomposition_solution(&a1, &a2, &pb)),
                Err(e) => report.failed(e.to_string()),
            })
        }
        (AttackMethod::CommutatorProbe, proto @ ("twisted" | "factor" | "ko-lee")) => {
            let a = subgroup_from_transcript(t, "a-gen")?;
            let b = subgroup_from_transcript(t, "b-gen")?;
            let pa = t.message(Party::Alice, "msg")?;
            let pb = t.message(Party::Bob, "msg")?;
            Ok(match proto {
                "twisted" => {
                    // P_A = a1 w b1: recover b1 ∈ B, then a1 = P_A b1^{-1} w^{-1}
                    let w = t.public_value("w")?;
                    let probes: Vec<CspInstance> =
                        b.gens().iter().map(|c| commutator_probe_decomposition(&pa, c, w)).collect();
                    // solutions differ by centralizer elements; keep one whose cofactor lies in A
                    let w_inv = w.inv();
                    let s = csp_search_filtered(&probes, &b, bound, |x| {
                        a.contains(&pa.mul(&x.inv()).mul(&w_inv), MEMBERSHIP_BOUND)
                    })?;
                    report.candidates = s.work;
                    match s.witness {
                        Some(expr) => {
                            let b1 = crate::platform::eval_word(&b, &expr)?;
                            let a1 = pa.mul(&b1.inv()).mul(&w_inv);
                            report.recovered(a1.mul(&pb).mul(&b1))
                        }
                        None => report.failed(format!("probes unsolved within length {bound}")),
                    }
                }
                "factor" => {
                    // P_A = a1 b1: recover b1, key b1 P_B a1
                    let probes: Vec<CspInstance> =
                        b.gens().iter().map(|c| commutator_probe_factorization(&pa, c)).collect();
                    let s =
                        csp_search_filtered(&probes, &b, bound, |x| a.contains(&pa.mul(&x.inv()), MEMBERSHIP_BOUND))?;
                    report.candidates = s.work;
                    match s.witness {
                        Some(expr) => {
                            let b1 = crate::platform::eval_word(&b, &expr)?;
                            let a1 = pa.mul(&b1.inv());
                            report.recovered(b1.mul(&pb).mul(&a1))
                        }
                        None => report.failed(format!("probes unsolved within length {bound}")),
                    }
                }
                _ => {
                    // P_A = w^a with a ∈ A; probe with every generator of B
                    let w = t.public_value("w")?;
                    let mut probes: Vec<CspInstance> =
                        b.gens().iter().map(|c| commutator_probe_csp(&pa, c, w)).collect();
                    probes.push(CspInstance { u: w.clone(), v: pa.clone() });
                    let s = brute_force_csp_multi(&probes, &a, bound)?;
                    report.candidates = s.work;
                    match s.witness {
                        Some(expr) => {
                            let x = crate::platform::eval_word(&a, &expr)?;
                            report.recovered(pb.conj(&x))
                        }
                        None => report.failed(format!("probes unsolved within length {bound}")),
                    }
                }
            })
        }
        (AttackMethod::LengthBased, "aag") => {
            let a = subgroup_from_transcript(t, "a-gen")?;
            let b = subgroup_from_transcript(t, "b-gen")?;
            Ok(length_based_attack(t, &a, &b, bound))
        }
        _ => Err(unsupported(method, t)),
    }
}
