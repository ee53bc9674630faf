//! Bounded deciders for subset-sum, knapsack, submonoid membership, Post
//! correspondence, twisted conjugacy and factorization over platform groups.
//!
//! Everything here is exhaustive at small size or explicitly bounded; an
//! absent witness from a bounded search means "none within the bound".

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::platform::{Element, Platform, SubgroupGens};
use crate::search::{guard_check, reduced_word_count, Ball, Search};
use crate::tietze::GenMap;
use crate::word::{for_each_reduced_word, Letter, Word};

/// Largest `k` accepted by [`ssp_decide`].
pub const SSP_MAX_K: usize = 24;

/// Elements `g_1..g_k`, a target and an optional bound, plus raw auxiliary
/// lines for problem-specific data.
///
/// Text form: `platform: <header>`, `elem: <payload>` lines,
/// `target: <payload>`, optional `bound: N`; any other `key: value` line is
/// kept in `aux`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProblemInstance {
    pub platform: Platform,
    pub elems: Vec<Element>,
    pub target: Element,
    pub bound: Option<usize>,
    pub aux: Vec<(String, String)>,
}

impl ProblemInstance {
    pub fn new(platform: Platform, elems: Vec<Element>, target: Element) -> Result<Self> {
        if let Some(bad) = elems.iter().chain([&target]).find(|e| !platform.owns(e)) {
            return Err(Error::Parse(format!("{bad:?} is not an element of {platform}")));
        }
        Ok(Self { platform, elems, target, bound: None, aux: Vec::new() })
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn aux_values(&self, key: &str) -> Vec<&str> {
        self.aux.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut platform: Option<Platform> = None;
        let mut elems = Vec::new();
        let mut target = None;
        let mut bound = None;
        let mut aux = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) =
                line.split_once(':').ok_or_else(|| Error::Parse(format!("expected `key: value`, got `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "platform" => platform = Some(value.parse()?),
                "elem" | "target" => {
                    let pf = platform.as_ref().ok_or_else(|| Error::Parse("`platform:` must come first".into()))?;
                    let e = pf.parse_element(value)?;
                    if key.trim() == "elem" {
                        elems.push(e);
                    } else {
                        target = Some(e);
                    }
                }
                "bound" => {
                    let b: usize = value.parse().map_err(|_| Error::Parse(format!("bad bound `{value}`")))?;
                    if b == 0 {
                        return Err(Error::Parse("bound must be positive".into()));
                    }
                    bound = Some(b);
                }
                other => aux.push((other.to_string(), value.to_string())),
            }
        }
        let platform = platform.ok_or_else(|| Error::Parse("missing `platform:` line".into()))?;
        let target = target.ok_or_else(|| Error::Parse("missing `target:` line".into()))?;
        Ok(Self { platform, elems, target, bound, aux })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("platform: {}\n", self.platform);
        for e in &self.elems {
            let _ = writeln!(out, "elem: {e}");
        }
        let _ = writeln!(out, "target: {}", self.target);
        if let Some(b) = self.bound {
            let _ = writeln!(out, "bound: {b}");
        }
        for (k, v) in &self.aux {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }
}

/// Ordered product `g_1^{e_1} ⋯ g_k^{e_k}`.
pub fn eval_exponents(inst: &ProblemInstance, exps: &[u64]) -> Element {
    inst.elems.iter().zip(exps).fold(inst.platform.identity(), |acc, (g, &e)| acc.mul(&g.pow(e as i64)))
}

/// Subset sum: `g = g_1^{ε_1} ⋯ g_k^{ε_k}` with `ε_i ∈ {0, 1}`. Exhaustive
/// over all `2^k` selections, `ε_1 = 0` branch first.
pub fn ssp_decide(inst: &ProblemInstance) -> Result<Search<Vec<u8>>> {
    let k = inst.k();
    if k > SSP_MAX_K {
        return Err(Error::Bound(format!("subset sum with k = {k} exceeds the limit of {SSP_MAX_K}")));
    }
    let mut eps = vec![0u8; k];
    let mut work = 0;
    let found = ssp_dfs(inst, 0, &inst.platform.identity(), &mut eps, &mut work);
    Ok(Search { witness: found.then_some(eps), work })
}

fn ssp_dfs(inst: &ProblemInstance, i: usize, acc: &Element, eps: &mut [u8], work: &mut u64) -> bool {
    if i == inst.k() {
        *work += 1;
        return *acc == inst.target;
    }
    eps[i] = 0;
    if ssp_dfs(inst, i + 1, acc, eps, work) {
        return true;
    }
    eps[i] = 1;
    if ssp_dfs(inst, i + 1, &acc.mul(&inst.elems[i]), eps, work) {
        return true;
    }
    eps[i] = 0;
    false
}

/// Knapsack with exponents in `0..=exp_bound`. Bounded: an absent witness
/// says nothing about larger exponents.
pub fn kp_decide_bounded(inst: &ProblemInstance, exp_bound: u64) -> Result<Search<Vec<u64>>> {
    let k = inst.k();
    let states = (exp_bound as u128 + 1).checked_pow(k as u32).unwrap_or(u128::MAX);
    guard_check(states, "knapsack")?;
    let powers: Vec<Vec<Element>> = inst
        .elems
        .iter()
        .map(|g| {
            let mut row = vec![g.identity_like()];
            for _ in 0..exp_bound {
                row.push(row.last().expect("nonempty").mul(g));
            }
            row
        })
        .collect();
    let mut exps = vec![0u64; k];
    let mut work = 0;
    let found = kp_dfs(inst, &powers, 0, &inst.platform.identity(), &mut exps, &mut work);
    Ok(Search { witness: found.then_some(exps), work })
}

fn kp_dfs(
    inst: &ProblemInstance,
    powers: &[Vec<Element>],
    i: usize,
    acc: &Element,
    exps: &mut [u64],
    work: &mut u64,
) -> bool {
    if i == inst.k() {
        *work += 1;
        return *acc == inst.target;
    }
    for (e, p) in powers[i].iter().enumerate() {
        exps[i] = e as u64;
        if kp_dfs(inst, powers, i + 1, &acc.mul(p), exps, work) {
            return true;
        }
    }
    exps[i] = 0;
    false
}

/// Submonoid membership: shortest product `g_{i1} ⋯ g_{is}` (`s ≤ len_bound`)
/// equal to the target, found breadth-first with deduplication. The witness
/// lists 1-based generator indices.
pub fn smp_decide_bounded(inst: &ProblemInstance, len_bound: usize) -> Result<Search<Vec<usize>>> {
    let target = &inst.target;
    let (ball, hit) = Ball::explore(&inst.platform.identity(), &inst.elems, false, len_bound, |e| e == target)?;
    Ok(Search { witness: hit.map(|i| ball.path(i).into_iter().map(|l| l as usize).collect()), work: ball.len() as u64 })
}

/// Product of the listed 1-based generators.
pub fn eval_sequence(inst: &ProblemInstance, seq: &[usize]) -> Element {
    seq.iter().fold(inst.platform.identity(), |acc, &i| acc.mul(&inst.elems[i - 1]))
}

/// Free group or free monoid semantics for [`gpcp_bounded_search`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GpcpMode {
    /// Terms may use inverses; equality after free reduction.
    Group,
    /// Positive terms; equality letter by letter.
    Monoid,
}

fn substitute_raw(images: &[Word], t: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::new();
    for &l in t {
        let img = images[l.unsigned_abs() as usize - 1].letters();
        if l > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(img.iter().rev().map(|x| -x));
        }
    }
    out
}

/// Bounded Post correspondence: the first term `t` of length `≤ bound`
/// (shortest first, then lexicographic) with `a · t(u) = b · t(v)`.
pub fn gpcp_bounded_search(
    u: &[Word],
    v: &[Word],
    a: &Word,
    b: &Word,
    bound: usize,
    mode: GpcpMode,
) -> Result<Search<Word>> {
    let k = u.len();
    if k == 0 || v.len() != k {
        return Err(Error::Rank(format!("u and v must be nonempty tuples of equal size, got {} and {}", k, v.len())));
    }
    let rank = u.iter().chain(v).chain([a, b]).map(|w| w.rank().max(w.max_generator())).max().unwrap_or(1).max(1);
    let count = match mode {
        GpcpMode::Group => reduced_word_count(k, bound),
        GpcpMode::Monoid => (0..=bound as u32).map(|l| (k as u128).saturating_pow(l)).sum(),
    };
    guard_check(count, "Post correspondence terms")?;
    if mode == GpcpMode::Monoid {
        if let Some(w) = u.iter().chain(v).chain([a, b]).find(|w| w.letters().iter().any(|&l| l < 0)) {
            return Err(Error::Range(format!("monoid instance contains the inverse letter in {w}")));
        }
    }
    let check = |t: &[Letter]| -> bool {
        let mut left = a.letters().to_vec();
        left.extend(substitute_raw(u, t));
        let mut right = b.letters().to_vec();
        right.extend(substitute_raw(v, t));
        match mode {
            GpcpMode::Monoid => left == right,
            GpcpMode::Group => {
                Word::from_parts(rank, left).free_reduce() == Word::from_parts(rank, right).free_reduce()
            }
        }
    };
    let mut work = 0u64;
    let mut witness = None;
    match mode {
        GpcpMode::Group => for_each_reduced_word(k, bound, |t| {
            work += 1;
            if check(t) {
                witness = Some(t.to_vec());
                return false;
            }
            true
        }),
        GpcpMode::Monoid => {
            let mut buf = Vec::new();
            for len in 0..=bound {
                if positive_words(k, len, &mut buf, &mut |t| {
                    work += 1;
                    if check(t) {
                        witness = Some(t.to_vec());
                        return false;
                    }
                    true
                }) {
                    continue;
                }
                break;
            }
        }
    }
    Ok(Search { witness: witness.map(|t| Word::from_parts(k, t)), work })
}

fn positive_words(k: usize, len: usize, buf: &mut Vec<Letter>, visit: &mut dyn FnMut(&[Letter]) -> bool) -> bool {
    if buf.len() == len {
        return visit(buf);
    }
    for l in 1..=k as Letter {
        buf.push(l);
        let go = positive_words(k, len, buf, visit);
        buf.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Bounded twisted conjugacy: the first reduced `w` of length `≤ bound`
/// with `u · φ(w) = ψ(w) · v`.
pub fn twisted_conjugacy_bounded(u: &Word, v: &Word, phi: &GenMap, psi: &GenMap, bound: usize) -> Result<Search<Word>> {
    let rank = phi.from_gens();
    if phi.to_gens() != rank || psi.from_gens() != rank || psi.to_gens() != rank {
        return Err(Error::Rank("twisted conjugacy needs endomorphisms of one free group".into()));
    }
    let u = u.with_rank(rank)?;
    let v = v.with_rank(rank)?;
    guard_check(reduced_word_count(rank, bound), "twisted conjugacy")?;
    let mut work = 0u64;
    let mut witness = None;
    let mut failure = None;
    for_each_reduced_word(rank, bound, |letters| {
        work += 1;
        let w = Word::from_parts(rank, letters.to_vec());
        let ok = phi.apply(&w).and_then(|pw| {
            let left = u.multiply(&pw)?;
            let right = psi.apply(&w)?.multiply(&v)?;
            Ok(left == right)
        });
        match ok {
            Ok(true) => {
                witness = Some(w);
                false
            }
            Ok(false) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Search { witness, work })
}

/// Factorization `w = a · b` with `a ∈ A`, `b ∈ B` given by expressions of
/// length `≤ len_bound`, by meet in the middle: the `B`-ball is indexed by
/// value and probed with `a^{-1} w` for each `a` in the `A`-ball.
pub fn factorization_decide_bounded(
    w: &Element,
    a: &SubgroupGens,
    b: &SubgroupGens,
    len_bound: usize,
) -> Result<Search<(Element, Element)>> {
    let id = a.platform().identity();
    let (ball_b, _) = Ball::explore(&id, b.gens(), true, len_bound, |_| false)?;
    let index: HashMap<&Element, usize> = ball_b.elements().enumerate().map(|(i, e)| (e, i)).collect();
    let (ball_a, _) = Ball::explore(&id, a.gens(), true, len_bound, |_| false)?;
    let mut work = ball_b.len() as u64;
    for x in ball_a.elements() {
        work += 1;
        let rest = x.inv().mul(w);
        if let Some(&j) = index.get(&rest) {
            return Ok(Search { witness: Some((x.clone(), ball_b.element(j).clone())), work });
        }
    }
    Ok(Search { witness: None, work })
}

/// Naive double enumeration, for cross-checking the meet-in-the-middle search.
pub fn factorization_naive(
    w: &Element,
    a: &SubgroupGens,
    b: &SubgroupGens,
    len_bound: usize,
) -> Result<Search<(Element, Element)>> {
    let id = a.platform().identity();
    let (ball_a, _) = Ball::explore(&id, a.gens(), true, len_bound, |_| false)?;
    let (ball_b, _) = Ball::explore(&id, b.gens(), true, len_bound, |_| false)?;
    guard_check(ball_a.len() as u128 * ball_b.len() as u128, "naive factorization")?;
    let mut work = 0u64;
    for x in ball_a.elements() {
        for y in ball_b.elements() {
            work += 1;
            if &x.mul(y) == w {
                return Ok(Search { witness: Some((x.clone(), y.clone())), work });
            }
        }
    }
    Ok(Search { witness: None, work })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    fn free_elem(s: &str, rank: usize) -> Element {
        Element::Free(Word::parse(s, rank).unwrap())
    }

    #[test]
    fn ssp_basic_cases() {
        let pf = Platform::free(2).unwrap();
        let g1 = free_elem("1", 2);
        let g2 = free_elem("2", 2);
        let id = ProblemInstance::new(pf.clone(), vec![g1.clone(), g2.clone()], pf.identity()).unwrap();
        assert_eq!(ssp_decide(&id).unwrap().witness, Some(vec![0, 0]));
        // g2·g1 has the right abelianization but the wrong order
        let swapped = ProblemInstance::new(pf.clone(), vec![g1.clone(), g2.clone()], g2.mul(&g1)).unwrap();
        assert_eq!(ssp_decide(&swapped).unwrap().witness, None);
        let ordered = ProblemInstance::new(pf.clone(), vec![g1.clone(), g2.clone()], g1.mul(&g2)).unwrap();
        assert_eq!(ssp_decide(&ordered).unwrap().witness, Some(vec![1, 1]));
        let big = ProblemInstance::new(pf.clone(), vec![g1; 25], pf.identity()).unwrap();
        assert!(matches!(ssp_decide(&big), Err(Error::Bound(_))));
    }

    #[test]
    fn kp_planted_and_bounded() {
        let pf = Platform::cyclic(23, 5).unwrap();
        let g = pf.generators()[0].clone();
        let inst = ProblemInstance::new(pf.clone(), vec![g.clone(), g.pow(2)], g.pow(3)).unwrap();
        let s = kp_decide_bounded(&inst, 3).unwrap();
        assert_eq!(eval_exponents(&inst, s.witness.as_ref().unwrap()), g.pow(3));
        let free = Platform::free(2).unwrap();
        let x = free_elem("1", 2);
        let planted = ProblemInstance::new(free, vec![x.clone(), free_elem("2", 2)], x.pow(4)).unwrap();
        assert_eq!(kp_decide_bounded(&planted, 4).unwrap().witness, Some(vec![4, 0]));
        assert_eq!(kp_decide_bounded(&planted, 3).unwrap().witness, None);
        assert!(matches!(kp_decide_bounded(&planted, 1 << 13), Err(Error::Bound(_))));
    }

    #[test]
    fn smp_monotone_in_bound() {
        let pf = Platform::permutation(4).unwrap();
        let mut rng = seeded(2);
        let gens: Vec<Element> = (0..2).map(|_| pf.random_element(&mut rng).unwrap()).collect();
        let target = gens[0].mul(&gens[1]).mul(&gens[0]);
        let inst = ProblemInstance::new(pf, gens, target.clone()).unwrap();
        let s = smp_decide_bounded(&inst, 3).unwrap();
        let seq = s.witness.unwrap();
        assert!(seq.len() <= 3);
        assert_eq!(eval_sequence(&inst, &seq), target);
        for b in seq.len()..8 {
            assert!(smp_decide_bounded(&inst, b).unwrap().found());
        }
    }

    #[test]
    fn gpcp_cases() {
        let u = [Word::parse("1,2", 2).unwrap()];
        let v = [Word::parse("2,1", 2).unwrap()];
        let a = Word::parse("1", 2).unwrap();
        let s = gpcp_bounded_search(&u, &v, &a, &a, 3, GpcpMode::Group).unwrap();
        assert_eq!(s.witness.unwrap().len(), 0);
        // t = x1: x1·(x2 x1) = (x1 x2)·x1
        let b = Word::parse("1,2", 2).unwrap();
        let u2 = [Word::parse("2,1", 2).unwrap()];
        let v2 = [Word::parse("1", 2).unwrap()];
        let found = gpcp_bounded_search(&u2, &v2, &a, &b, 2, GpcpMode::Group).unwrap().witness.unwrap();
        let lhs = a.concat(&GenMap::new(2, u2.to_vec()).unwrap().apply(&found).unwrap()).unwrap().free_reduce();
        let rhs = b.concat(&GenMap::new(2, v2.to_vec()).unwrap().apply(&found).unwrap()).unwrap().free_reduce();
        assert_eq!(lhs, rhs);
        let mono = gpcp_bounded_search(&u2, &v2, &a, &b, 3, GpcpMode::Monoid).unwrap();
        assert!(mono.witness.is_some());
    }

    #[test]
    fn twisted_identity_maps_reduce_to_conjugacy() {
        let id = GenMap::identity(2);
        let u = Word::parse("1,2", 2).unwrap();
        assert_eq!(twisted_conjugacy_bounded(&u, &u, &id, &id, 2).unwrap().witness.unwrap().len(), 0);
        let x = Word::parse("2", 2).unwrap();
        let v = u.conjugate(&x).unwrap();
        let w = twisted_conjugacy_bounded(&u, &v, &id, &id, 2).unwrap().witness.unwrap();
        assert_eq!(u.conjugate(&w).unwrap(), v);
    }

    #[test]
    fn factorization_identity_and_agreement() {
        let pf = Platform::matrix(4, 5).unwrap();
        let mut rng = seeded(11);
        let (a, b) = crate::platform::block_commuting_subgroups(4, 5, 2, 2, &mut rng).unwrap();
        let s = factorization_decide_bounded(&pf.identity(), &a, &b, 2).unwrap();
        let (x, y) = s.witness.unwrap();
        assert!(x.is_identity() && y.is_identity());
        for _ in 0..5 {
            let w =
                if rng.gen_bool(0.5) { a.gens()[0].mul(&b.gens()[1]) } else { pf.random_element(&mut rng).unwrap() };
            let mitm = factorization_decide_bounded(&w, &a, &b, 2).unwrap();
            let naive = factorization_naive(&w, &a, &b, 2).unwrap();
            assert_eq!(mitm.found(), naive.found());
        }
    }

    #[test]
    fn instance_text_roundtrip() {
        let pf = Platform::cyclic(23, 5).unwrap();
        let mut inst = ProblemInstance::new(pf.clone(), pf.generators(), pf.identity()).unwrap();
        inst.bound = Some(4);
        inst.aux.push(("note".into(), "x".into()));
        assert_eq!(ProblemInstance::parse(&inst.to_text()).unwrap(), inst);
        assert!(ProblemInstance::parse("elem: 3\n").is_err());
    }
}
