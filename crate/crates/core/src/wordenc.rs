//! Bit encryption built on the word problem.
//!
//! Alice publishes two presentations over the same alphabet: one a
//! disguised trivial group, the other a disguised free group. A bit is a
//! pair of words, one random and one equal to 1 in its group. Only Alice
//! knows which presentation is trivial; she decides triviality on the free
//! side by mapping back through her secret chain and freely reducing.

use std::ops::RangeInclusive;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homomorphic::{apply_randomize_move, RandomizeMove};
use crate::keyfile::{section, split_sections, write_section};
use crate::rng::trial_stream;
use crate::tietze::{random_chain, ChainConfig, Presentation, TietzeChain};
use crate::word::{random_reduced_word, random_word, Word};

/// Move budget for [`algorithm1`].
pub const ALGORITHM1_MOVE_BUDGET: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SeedKind {
    /// `⟨x_1..x_r | x_1, …, x_r⟩`
    Trivial,
    /// `⟨x_1..x_r | ⟩`
    Infinite,
}

impl SeedKind {
    fn name(self) -> &'static str {
        match self {
            SeedKind::Trivial => "trivial",
            SeedKind::Infinite => "infinite",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(SeedKind::Trivial),
            "infinite" => Ok(SeedKind::Infinite),
            _ => Err(Error::Parse(format!("unknown seed kind `{s}`"))),
        }
    }

    fn seed(self, rank: usize) -> Result<Presentation> {
        match self {
            SeedKind::Trivial => Presentation::trivial(rank),
            SeedKind::Infinite => Presentation::free(rank),
        }
    }
}

/// A presentation obtained from a seed by a secret chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DisguisedGroup {
    pub chain: TietzeChain,
    pub kind: SeedKind,
}

impl DisguisedGroup {
    pub fn generate<R: Rng + ?Sized>(kind: SeedKind, rank: usize, cfg: &ChainConfig, rng: &mut R) -> Result<Self> {
        Ok(Self { chain: random_chain(&kind.seed(rank)?, cfg, rng)?, kind })
    }

    pub fn public(&self) -> &Presentation {
        self.chain.end()
    }

    pub fn rank(&self) -> usize {
        self.chain.start().n_gens()
    }

    /// Exact word problem: always true in the trivial group, otherwise
    /// `φ⁻¹(w)` must freely reduce to the empty word.
    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        match self.kind {
            SeedKind::Trivial => Ok(true),
            SeedKind::Infinite => Ok(self.chain.phi_inv().apply(w)?.is_empty()),
        }
    }
}

/// Random word built letter by letter (not reduced).
pub fn algorithm0<R: Rng + ?Sized>(pres: &Presentation, len_range: RangeInclusive<usize>, rng: &mut R) -> Result<Word> {
    random_word(pres.n_gens(), len_range, rng)
}

/// Whether an unfilled remainder can still be closed exactly: even
/// remainders by `hh⁻¹`, odd ones by an odd relator.
fn closable(rem: usize, min_odd: Option<usize>) -> bool {
    rem.is_multiple_of(2) || min_odd.is_some_and(|m| rem >= m)
}

/// A word equal to 1, built from insertions of `hh⁻¹` and conjugated
/// relators `g⁻¹r^{±1}g` at random places, with the (unreduced) length
/// drawn uniformly from the lengths in `len_range` that the relators can
/// reach (odd lengths need an odd relator).
pub fn algorithm1_recorded<R: Rng + ?Sized>(
    pres: &Presentation,
    len_range: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<(Word, Vec<RandomizeMove>)> {
    if len_range.is_empty() {
        return Err(Error::Range(format!("empty length range {len_range:?}")));
    }
    let n = pres.n_gens();
    let rels = pres.relators();
    let min_odd = rels.iter().map(Word::len).filter(|l| l % 2 == 1).min();
    // odd lengths need an odd relator; draw among the reachable lengths only
    let reachable: Vec<usize> = len_range.clone().filter(|&l| closable(l, min_odd)).collect();
    if reachable.is_empty() {
        return Err(Error::Length(format!("no length in {len_range:?} is reachable from these relators")));
    }
    let target = reachable[rng.gen_range(0..reachable.len())];
    let mut w = Word::identity(n);
    let mut moves = Vec::new();
    for _ in 0..ALGORITHM1_MOVE_BUDGET {
        let rem = target - w.len();
        if rem == 0 {
            return Ok((w, moves));
        }
        // candidate pieces as (relator or None, conjugator/h length)
        let mut pieces: Vec<(Option<usize>, usize)> = Vec::new();
        for h in 1..=3usize {
            if 2 * h <= rem && closable(rem - 2 * h, min_odd) {
                pieces.push((None, h));
            }
        }
        for (i, r) in rels.iter().enumerate() {
            for g in 0..=2usize {
                let piece = r.len() + 2 * g;
                if !r.is_empty() && piece <= rem && closable(rem - piece, min_odd) {
                    pieces.push((Some(i), g));
                }
            }
        }
        let use_relator =
            pieces.iter().any(|p| p.0.is_some()) && (rng.gen_bool(0.5) || pieces.iter().all(|p| p.0.is_some()));
        let pool: Vec<&(Option<usize>, usize)> = pieces.iter().filter(|p| p.0.is_some() == use_relator).collect();
        let Some(&&(rel, l)) = pool.get(rng.gen_range(0..pool.len().max(1))) else {
            break;
        };
        let pos = rng.gen_range(0..=w.len());
        let mv = match rel {
            None => RandomizeMove::InsertTrivial { pos, h: random_reduced_word(n, l, rng) },
            Some(relator) => RandomizeMove::InsertRelator {
                pos,
                relator,
                conj: random_reduced_word(n, l, rng),
                inverse: rng.gen_bool(0.5),
            },
        };
        w = apply_randomize_move(&w, pres, &mv)?;
        moves.push(mv);
    }
    if w.len() == target {
        return Ok((w, moves));
    }
    Err(Error::Length(format!("could not build a trivial word of length {target} from these relators")))
}

pub fn algorithm1<R: Rng + ?Sized>(pres: &Presentation, len_range: RangeInclusive<usize>, rng: &mut R) -> Result<Word> {
    algorithm1_recorded(pres, len_range, rng).map(|(w, _)| w)
}

/// The two published presentations `Γ1`, `Γ2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrickPublic {
    pub gamma1: Presentation,
    pub gamma2: Presentation,
}

/// Both secret chains; `groups[0]` belongs to `Γ1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrickPrivate {
    pub groups: [DisguisedGroup; 2],
}

impl TrickPrivate {
    /// 0 when `Γ1` is the trivial group, 1 when `Γ2` is.
    pub fn trivial_index(&self) -> usize {
        if self.groups[0].kind == SeedKind::Trivial {
            0
        } else {
            1
        }
    }

    pub fn public(&self) -> TrickPublic {
        TrickPublic { gamma1: self.groups[0].public().clone(), gamma2: self.groups[1].public().clone() }
    }
}

/// Chain shape used by [`trick_treat_keygen`]: `chain_len` moves, T1 words
/// of length 2..=3, relators capped at 6 letters.
pub fn trick_chain_config(chain_len: usize) -> ChainConfig {
    ChainConfig { moves: chain_len, t1_len: 2..=3, max_relator_len: 6 }
}

/// Disguises a trivial and a free seed of rank `rank` with chains of equal
/// shape and publishes them in random order.
pub fn trick_treat_keygen<R: Rng + ?Sized>(
    rank: usize,
    chain_len: usize,
    rng: &mut R,
) -> Result<(TrickPublic, TrickPrivate)> {
    if rank < 2 {
        return Err(Error::Rank(format!("rank must be at least 2, got {rank}")));
    }
    let cfg = trick_chain_config(chain_len);
    let trivial = DisguisedGroup::generate(SeedKind::Trivial, rank, &cfg, rng)?;
    let free = DisguisedGroup::generate(SeedKind::Infinite, rank, &cfg, rng)?;
    let groups = if rng.gen_bool(0.5) { [trivial, free] } else { [free, trivial] };
    let private = TrickPrivate { groups };
    Ok((private.public(), private))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitCiphertext {
    pub w1: Word,
    pub w2: Word,
}

impl BitCiphertext {
    /// Two word lines.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.w1, self.w2)
    }

    pub fn parse(text: &str, public: &TrickPublic) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.len() != 2 {
            return Err(Error::Parse(format!("expected 2 word lines, got {}", lines.len())));
        }
        Ok(Self {
            w1: Word::parse(lines[0], public.gamma1.n_gens())?,
            w2: Word::parse(lines[1], public.gamma2.n_gens())?,
        })
    }
}

/// Bit 1: `w1` random, `w2 = 1` in `G2`. Bit 0: `w1 = 1` in `G1`, `w2` random.
pub fn trick_treat_encrypt<R: Rng + ?Sized>(
    bit: u8,
    public: &TrickPublic,
    len_range: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<BitCiphertext> {
    match bit {
        1 => {
            let w1 = algorithm0(&public.gamma1, len_range.clone(), rng)?;
            let w2 = algorithm1(&public.gamma2, len_range, rng)?;
            Ok(BitCiphertext { w1, w2 })
        }
        0 => {
            let w1 = algorithm1(&public.gamma1, len_range.clone(), rng)?;
            let w2 = algorithm0(&public.gamma2, len_range, rng)?;
            Ok(BitCiphertext { w1, w2 })
        }
        other => Err(Error::Range(format!("bit must be 0 or 1, got {other}"))),
    }
}

/// Alice reads only the component sent to the infinite group: if it is
/// trivial there, Bob must have built it on purpose.
pub fn trick_treat_decrypt(ct: &BitCiphertext, private: &TrickPrivate) -> Result<u8> {
    let infinite = 1 - private.trivial_index();
    if infinite == 1 {
        Ok(if private.groups[1].is_trivial(&ct.w2)? { 1 } else { 0 })
    } else {
        Ok(if private.groups[0].is_trivial(&ct.w1)? { 0 } else { 1 })
    }
}

/// What an unbounded adversary learns from the word problem.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EveCase {
    /// (1) `w1 = 1` in `G1` and `w2 = 1` in `G2`
    Both,
    /// (2) only `w1 = 1`
    FirstOnly,
    /// (3) only `w2 = 1`
    SecondOnly,
    /// neither; cannot arise from honest encryption
    Neither,
}

/// Encryption emulation with a word-problem oracle `oracle(i, w)` for
/// `G_{i+1}`. Cases (2)/(3) decode deterministically, case (1) is a coin.
pub fn eve_emulation_attack<R, F>(ct: &BitCiphertext, oracle: F, rng: &mut R) -> Result<(u8, EveCase)>
where
    R: Rng + ?Sized,
    F: Fn(usize, &Word) -> Result<bool>,
{
    let t1 = oracle(0, &ct.w1)?;
    let t2 = oracle(1, &ct.w2)?;
    let case = match (t1, t2) {
        (true, true) => EveCase::Both,
        (true, false) => EveCase::FirstOnly,
        (false, true) => EveCase::SecondOnly,
        (false, false) => EveCase::Neither,
    };
    let guess = match case {
        EveCase::FirstOnly => 0,
        EveCase::SecondOnly => 1,
        EveCase::Both | EveCase::Neither => rng.gen_range(0..=1),
    };
    Ok((guess, case))
}

/// Ground-truth oracle from Alice's secrets, standing in for an adversary
/// with unbounded resources.
pub fn ground_truth_oracle(private: &TrickPrivate) -> impl Fn(usize, &Word) -> Result<bool> + '_ {
    move |i, w| private.groups[i].is_trivial(w)
}

/// Tallies of a Monte-Carlo run.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct TrialStats {
    pub trials: u64,
    pub alice_correct: u64,
    pub eve_correct: u64,
    /// Counts for cases (1), (2), (3) and the impossible fourth.
    pub cases: [u64; 4],
}

impl TrialStats {
    fn merge(mut self, o: TrialStats) -> TrialStats {
        self.trials += o.trials;
        self.alice_correct += o.alice_correct;
        self.eve_correct += o.eve_correct;
        for i in 0..4 {
            self.cases[i] += o.cases[i];
        }
        self
    }

    fn rate(&self, x: u64) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            x as f64 / self.trials as f64
        }
    }

    pub fn alice_accuracy(&self) -> f64 {
        self.rate(self.alice_correct)
    }

    pub fn eve_accuracy(&self) -> f64 {
        self.rate(self.eve_correct)
    }

    pub fn case_frequency(&self, case: EveCase) -> f64 {
        self.rate(self.cases[case_index(case)])
    }
}

fn case_index(c: EveCase) -> usize {
    match c {
        EveCase::Both => 0,
        EveCase::FirstOnly => 1,
        EveCase::SecondOnly => 2,
        EveCase::Neither => 3,
    }
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub trials: u64,
    pub rank: usize,
    pub chain_len: usize,
    pub len_range: RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self { trials: 5000, rank: 3, chain_len: 6, len_range: 16..=32, seed: 1 }
    }
}

/// One trial: fresh keys, a uniform bit, Alice's decryption and Eve's guess.
pub fn run_trial(cfg: &TrialConfig, index: u64) -> Result<TrialStats> {
    let mut rng = trial_stream(cfg.seed, index);
    let (public, private) = trick_treat_keygen(cfg.rank, cfg.chain_len, &mut rng)?;
    let bit = rng.gen_range(0..=1u8);
    let ct = trick_treat_encrypt(bit, &public, cfg.len_range.clone(), &mut rng)?;
    let alice = trick_treat_decrypt(&ct, &private)?;
    let (eve, case) = eve_emulation_attack(&ct, ground_truth_oracle(&private), &mut rng)?;
    let mut cases = [0; 4];
    cases[case_index(case)] = 1;
    Ok(TrialStats { trials: 1, alice_correct: (alice == bit) as u64, eve_correct: (eve == bit) as u64, cases })
}

/// Runs trials in parallel; each trial draws from its own split stream so
/// results do not depend on scheduling.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialStats> {
    (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).try_reduce(TrialStats::default, |a, b| Ok(a.merge(b)))
}

/// Fraction of bit-0 encryptions Alice misreads at exact length `len`.
pub fn decryption_error_rate(rank: usize, chain_len: usize, len: usize, trials: u64, seed: u64) -> Result<f64> {
    let errors: u64 = (0..trials)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let mut rng = trial_stream(seed, i);
            let (public, private) = trick_treat_keygen(rank, chain_len, &mut rng)?;
            let ct = trick_treat_encrypt(0, &public, len..=len, &mut rng)?;
            Ok((trick_treat_decrypt(&ct, &private)? != 0) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(errors as f64 / trials as f64)
}

impl TrickPublic {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_section(&mut out, "gamma1", &self.gamma1.to_text());
        write_section(&mut out, "gamma2", &self.gamma2.to_text());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s = split_sections(text)?;
        let public = Self { gamma1: section(&s, "gamma1")?.parse()?, gamma2: section(&s, "gamma2")?.parse()? };
        if public.gamma1.n_gens() != public.gamma2.n_gens() {
            return Err(Error::Parse("the two presentations use different alphabets".into()));
        }
        Ok(public)
    }
}

impl TrickPrivate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.groups.iter().enumerate() {
            write_section(
                &mut out,
                &format!("group{}", i + 1),
                &format!("kind: {}\nrank: {}\n", g.kind.name(), g.rank()),
            );
            write_section(&mut out, &format!("chain{}", i + 1), &g.chain.moves_text());
        }
        out
    }

    /// Rebuilds both groups by replaying their chains from the seeds.
    pub fn parse(text: &str) -> Result<Self> {
        let s = split_sections(text)?;
        let group = |i: usize| -> Result<DisguisedGroup> {
            let head = section(&s, &format!("group{i}"))?;
            let mut kind = None;
            let mut rank = None;
            for line in head.lines() {
                match line.split_once(':') {
                    Some(("kind", v)) => kind = Some(SeedKind::parse(v.trim())?),
                    Some(("rank", v)) => rank = v.trim().parse::<usize>().ok(),
                    _ => return Err(Error::Parse(format!("bad line `{line}` in [group{i}]"))),
                }
            }
            let kind = kind.ok_or_else(|| Error::Parse("missing kind".into()))?;
            let rank = rank.ok_or_else(|| Error::Parse("missing rank".into()))?;
            let moves = TietzeChain::parse_moves(section(&s, &format!("chain{i}"))?)?;
            Ok(DisguisedGroup { chain: TietzeChain::replay(&kind.seed(rank)?, &moves)?, kind })
        };
        let groups = [group(1)?, group(2)?];
        if groups[0].kind == groups[1].kind {
            return Err(Error::Parse("private key must hold one trivial and one infinite group".into()));
        }
        Ok(Self { groups })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn algorithm1_hits_exact_lengths() {
        let mut rng = seeded(2);
        let (_, private) = trick_treat_keygen(3, 6, &mut rng).unwrap();
        for g in &private.groups {
            for len in [0usize, 2, 7, 16, 31] {
                match algorithm1(g.public(), len..=len, &mut rng) {
                    Ok(w) => {
                        assert_eq!(w.len(), len);
                        assert!(g.is_trivial(&w).unwrap());
                    }
                    Err(Error::Length(_)) => assert!(len % 2 == 1, "even length {len} must be reachable"),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn zero_length_is_empty() {
        let p = Presentation::trivial(2).unwrap();
        let (w, moves) = algorithm1_recorded(&p, 0..=0, &mut seeded(1)).unwrap();
        assert!(w.is_empty() && moves.is_empty());
    }

    #[test]
    fn chain_len_zero_publishes_seeds() {
        let (public, private) = trick_treat_keygen(2, 0, &mut seeded(5)).unwrap();
        let t = private.trivial_index();
        let pres = [&public.gamma1, &public.gamma2];
        assert_eq!(pres[t], &Presentation::trivial(2).unwrap());
        assert_eq!(pres[1 - t], &Presentation::free(2).unwrap());
    }

    #[test]
    fn keys_text_roundtrip() {
        let (public, private) = trick_treat_keygen(3, 9, &mut seeded(6)).unwrap();
        assert_eq!(TrickPublic::parse(&public.to_text()).unwrap(), public);
        assert_eq!(TrickPrivate::parse(&private.to_text()).unwrap(), private);
    }

    #[test]
    fn empty_random_component_reads_as_one() {
        let private = TrickPrivate {
            groups: [
                DisguisedGroup { chain: TietzeChain::new(Presentation::trivial(2).unwrap()), kind: SeedKind::Trivial },
                DisguisedGroup { chain: TietzeChain::new(Presentation::free(2).unwrap()), kind: SeedKind::Infinite },
            ],
        };
        let ct = BitCiphertext { w1: Word::identity(2), w2: Word::identity(2) };
        assert_eq!(trick_treat_decrypt(&ct, &private).unwrap(), 1);
    }
}
