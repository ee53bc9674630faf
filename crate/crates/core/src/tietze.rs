//! Finite presentations, Tietze transformations and the isomorphisms they
//! induce.
//!
//! Relator indices are 0-based in the API and 1-based in text files.
//! Generator indices are 1-based everywhere, matching word letters.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::word::{random_reduced_word, Letter, Word};

/// `⟨x_1..x_n | r_1, r_2, …⟩` with reduced relators over exactly `n` letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    n_gens: usize,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators of smaller rank are widened; all are freely reduced.
    pub fn new(n_gens: usize, relators: Vec<Word>) -> Result<Self> {
        if n_gens == 0 {
            return Err(Error::Rank("a presentation needs at least one generator".into()));
        }
        let relators = relators
            .into_iter()
            .map(|r| {
                if r.rank() > n_gens && r.max_generator() > n_gens {
                    return Err(Error::Rank(format!("relator {r} mentions a generator beyond x{n_gens}")));
                }
                Ok(r.with_rank(n_gens)?.free_reduce())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_gens, relators })
    }

    /// `⟨x_1..x_r | ⟩`.
    pub fn free(rank: usize) -> Result<Self> {
        Self::new(rank, Vec::new())
    }

    /// `⟨x_1..x_r | x_1, …, x_r⟩`.
    pub fn trivial(rank: usize) -> Result<Self> {
        let rels = (1..=rank as Letter).map(|i| Word::from_parts(rank, vec![i])).collect();
        Self::new(rank, rels)
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator(&self, i: usize) -> Result<&Word> {
        self.relators
            .get(i)
            .ok_or_else(|| Error::Move(format!("relator index {i} out of range (have {})", self.relators.len())))
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Keeps the relators at the listed positions, in their original order.
    pub fn discard_relators(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Move("must keep at least one relator".into()));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.relators.len()) {
            return Err(Error::Move(format!("relator index {bad} out of range")));
        }
        Ok(Self { n_gens: self.n_gens, relators: keep.iter().map(|&i| self.relators[i].clone()).collect() })
    }

    /// Appends relators (widened and reduced like [`Presentation::new`]).
    pub fn with_added_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut rels = self.relators.clone();
        rels.extend_from_slice(extra);
        Self::new(self.n_gens, rels)
    }

    /// `generators: N` followed by one `relator: <word>` line per relator.
    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.n_gens);
        for r in &self.relators {
            out.push_str(&format!("relator: {r}\n"));
        }
        out
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut n_gens = None;
        let mut raw = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            if let Some(v) = line.strip_prefix("generators:") {
                let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("bad generator count `{v}`")))?;
                n_gens = Some(n);
            } else if let Some(v) = line.strip_prefix("relator:") {
                raw.push(v.trim().to_string());
            } else {
                return Err(Error::Parse(format!("unexpected presentation line `{line}`")));
            }
        }
        let n = n_gens.ok_or_else(|| Error::Parse("missing `generators:` line".into()))?;
        let rels = raw.iter().map(|r| Word::parse(r, n)).collect::<Result<Vec<_>>>()?;
        Presentation::new(n, rels).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} gens |", self.n_gens)?;
        for (i, r) in self.relators.iter().enumerate() {
            write!(f, "{} {r}", if i == 0 { "" } else { ";" })?;
        }
        write!(f, " >")
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A map on generators: `x_i ↦ images[i-1]`, a word over `to_gens` letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenMap {
    from_gens: usize,
    to_gens: usize,
    images: Vec<Word>,
}

impl GenMap {
    pub fn new(to_gens: usize, images: Vec<Word>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Rank("a map needs at least one source generator".into()));
        }
        if to_gens == 0 {
            return Err(Error::Rank("target alphabet is empty".into()));
        }
        let images = images
            .into_iter()
            .map(|w| {
                if w.max_generator() > to_gens {
                    return Err(Error::Rank(format!("image {w} exceeds target rank {to_gens}")));
                }
                Ok(w.with_rank(to_gens)?.free_reduce())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { from_gens: images.len(), to_gens, images })
    }

    pub fn identity(n: usize) -> Self {
        let images = (1..=n as Letter).map(|i| Word::from_parts(n, vec![i])).collect();
        Self { from_gens: n, to_gens: n, images }
    }

    pub fn from_gens(&self) -> usize {
        self.from_gens
    }

    pub fn to_gens(&self) -> usize {
        self.to_gens
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of the 1-based generator `i`.
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        *self == GenMap::identity(self.from_gens)
    }

    /// Substitutes images letter by letter and freely reduces.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() > self.from_gens && w.max_generator() > self.from_gens {
            return Err(Error::Rank(format!("word {w} is not over the {} source generators", self.from_gens)));
        }
        let mut letters: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                letters.extend_from_slice(img.letters());
            } else {
                letters.extend(img.letters().iter().rev().map(|x| -x));
            }
        }
        Ok(Word::from_parts(self.to_gens, letters).free_reduce())
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &GenMap) -> Result<GenMap> {
        if self.to_gens != next.from_gens {
            return Err(Error::Rank(format!(
                "cannot compose: {} target gens vs {} source gens",
                self.to_gens, next.from_gens
            )));
        }
        let images = self.images.iter().map(|w| next.apply(w)).collect::<Result<Vec<_>>>()?;
        Ok(GenMap { from_gens: self.from_gens, to_gens: next.to_gens, images })
    }

    /// `map: i -> <word>` lines.
    pub fn to_text(&self) -> String {
        self.images.iter().enumerate().map(|(i, w)| format!("map: {} -> {w}\n", i + 1)).collect()
    }

    /// Parses `map:` lines; the target rank must be supplied.
    pub fn parse(text: &str, to_gens: usize) -> Result<GenMap> {
        let mut images = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let body =
                line.strip_prefix("map:").ok_or_else(|| Error::Parse(format!("expected `map:` line, got `{line}`")))?;
            let (idx, word) =
                body.split_once("->").ok_or_else(|| Error::Parse(format!("expected `i -> word`, got `{line}`")))?;
            let idx: usize = idx.trim().parse().map_err(|_| Error::Parse(format!("bad index in `{line}`")))?;
            if idx != images.len() + 1 {
                return Err(Error::Parse(format!("map lines out of order at `{line}`")));
            }
            images.push(Word::parse(word.trim(), to_gens)?);
        }
        GenMap::new(to_gens, images).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Applies a generator map to a word.
pub fn apply_map(m: &GenMap, w: &Word) -> Result<Word> {
    m.apply(w)
}

/// Elementary free-group automorphisms with explicit inverses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Automorphism {
    Swap(usize, usize),
    Invert(usize),
    /// `x_i ↦ x_j^{±1} x_i`, the sign carried by `j`.
    LeftMul {
        i: usize,
        j: Letter,
    },
    /// `x_i ↦ x_i x_j^{±1}`.
    RightMul {
        i: usize,
        j: Letter,
    },
}

impl Automorphism {
    pub fn inverse(&self) -> Automorphism {
        match *self {
            Automorphism::LeftMul { i, j } => Automorphism::LeftMul { i, j: -j },
            Automorphism::RightMul { i, j } => Automorphism::RightMul { i, j: -j },
            other => other,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let in_range = |g: usize| (1..=n).contains(&g);
        let ok = match *self {
            Automorphism::Swap(i, j) => in_range(i) && in_range(j),
            Automorphism::Invert(i) => in_range(i),
            Automorphism::LeftMul { i, j } | Automorphism::RightMul { i, j } => {
                if j.unsigned_abs() as usize == i {
                    return Err(Error::Move(format!("multiplying x{i} by itself is not an automorphism")));
                }
                in_range(i) && j != 0 && in_range(j.unsigned_abs() as usize)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Move(format!("{self:?} refers to a generator outside 1..={n}")))
        }
    }

    /// The automorphism as a generator map on `n` letters.
    pub fn as_map(&self, n: usize) -> Result<GenMap> {
        self.validate(n)?;
        let mut images: Vec<Vec<Letter>> = (1..=n as Letter).map(|i| vec![i]).collect();
        match *self {
            Automorphism::Swap(i, j) => images.swap(i - 1, j - 1),
            Automorphism::Invert(i) => images[i - 1] = vec![-(i as Letter)],
            Automorphism::LeftMul { i, j } => images[i - 1] = vec![j, i as Letter],
            Automorphism::RightMul { i, j } => images[i - 1] = vec![i as Letter, j],
        }
        Ok(GenMap { from_gens: n, to_gens: n, images: images.into_iter().map(|l| Word::from_parts(n, l)).collect() })
    }
}

/// The T4′ rewrites of a single relator `r_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RelatorAction {
    /// `r_i^{-1}`
    Inv,
    /// `r_i r_j`
    MulRight(usize),
    /// `r_i r_j^{-1}`
    MulRightInv(usize),
    /// `r_j r_i`
    MulLeft(usize),
    /// `r_j^{-1} r_i`
    MulLeftInv(usize),
    /// `x_k^{-1} r_i x_k`
    Conj(usize),
    /// `x_k r_i x_k^{-1}`
    ConjInv(usize),
}

impl RelatorAction {
    pub fn inverse(&self) -> RelatorAction {
        match *self {
            RelatorAction::Inv => RelatorAction::Inv,
            RelatorAction::MulRight(j) => RelatorAction::MulRightInv(j),
            RelatorAction::MulRightInv(j) => RelatorAction::MulRight(j),
            RelatorAction::MulLeft(j) => RelatorAction::MulLeftInv(j),
            RelatorAction::MulLeftInv(j) => RelatorAction::MulLeft(j),
            RelatorAction::Conj(k) => RelatorAction::ConjInv(k),
            RelatorAction::ConjInv(k) => RelatorAction::Conj(k),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            RelatorAction::Inv => "inv",
            RelatorAction::MulRight(_) => "mul_right",
            RelatorAction::MulRightInv(_) => "mul_right_inv",
            RelatorAction::MulLeft(_) => "mul_left",
            RelatorAction::MulLeftInv(_) => "mul_left_inv",
            RelatorAction::Conj(_) => "conj",
            RelatorAction::ConjInv(_) => "conj_inv",
        }
    }
}

/// One Tietze transformation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Move {
    /// Introduce `y = s` as a new last generator; the relator `y s^{-1}` is
    /// placed first.
    T1(Word),
    /// Cancel generator `generator` using relator `relator`.
    T2 {
        relator: usize,
        generator: usize,
    },
    T3(Automorphism),
    T4 {
        relator: usize,
        action: RelatorAction,
    },
}

/// Chain-file syntax: `t1 <word>`, `t2 <rel> <gen>`, `t3 swap i j`,
/// `t3 invert i`, `t3 left i j`, `t3 right i j`, `t4 <rel> <action> [j|k]`.
/// Relator numbers are 1-based.
impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::T1(s) => write!(f, "t1 {s}"),
            Move::T2 { relator, generator } => write!(f, "t2 {} {generator}", relator + 1),
            Move::T3(Automorphism::Swap(i, j)) => write!(f, "t3 swap {i} {j}"),
            Move::T3(Automorphism::Invert(i)) => write!(f, "t3 invert {i}"),
            Move::T3(Automorphism::LeftMul { i, j }) => write!(f, "t3 left {i} {j}"),
            Move::T3(Automorphism::RightMul { i, j }) => write!(f, "t3 right {i} {j}"),
            Move::T4 { relator, action } => {
                write!(f, "t4 {} {}", relator + 1, action.name())?;
                match *action {
                    RelatorAction::Inv => Ok(()),
                    RelatorAction::MulRight(j)
                    | RelatorAction::MulRightInv(j)
                    | RelatorAction::MulLeft(j)
                    | RelatorAction::MulLeftInv(j) => write!(f, " {}", j + 1),
                    RelatorAction::Conj(k) | RelatorAction::ConjInv(k) => write!(f, " {k}"),
                }
            }
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad move line `{line}`"));
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| -> Result<usize> { toks.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let signed = |i: usize| -> Result<Letter> { toks.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let rel = |i: usize| -> Result<usize> { num(i)?.checked_sub(1).ok_or_else(bad) };
        let mv = match toks.first().copied() {
            Some("t1") if toks.len() == 2 => Move::T1(Word::parse_infer(toks[1])?),
            Some("t2") if toks.len() == 3 => Move::T2 { relator: rel(1)?, generator: num(2)? },
            Some("t3") => match (toks.get(1).copied(), toks.len()) {
                (Some("swap"), 4) => Move::T3(Automorphism::Swap(num(2)?, num(3)?)),
                (Some("invert"), 3) => Move::T3(Automorphism::Invert(num(2)?)),
                (Some("left"), 4) => Move::T3(Automorphism::LeftMul { i: num(2)?, j: signed(3)? }),
                (Some("right"), 4) => Move::T3(Automorphism::RightMul { i: num(2)?, j: signed(3)? }),
                _ => return Err(bad()),
            },
            Some("t4") => {
                let relator = rel(1)?;
                let action = match (toks.get(2).copied(), toks.len()) {
                    (Some("inv"), 3) => RelatorAction::Inv,
                    (Some("mul_right"), 4) => RelatorAction::MulRight(rel(3)?),
                    (Some("mul_right_inv"), 4) => RelatorAction::MulRightInv(rel(3)?),
                    (Some("mul_left"), 4) => RelatorAction::MulLeft(rel(3)?),
                    (Some("mul_left_inv"), 4) => RelatorAction::MulLeftInv(rel(3)?),
                    (Some("conj"), 4) => RelatorAction::Conj(num(3)?),
                    (Some("conj_inv"), 4) => RelatorAction::ConjInv(num(3)?),
                    _ => return Err(bad()),
                };
                Move::T4 { relator, action }
            }
            _ => return Err(bad()),
        };
        Ok(mv)
    }
}

/// Maps induced by one move: `forward` old → new, `backward` new → old.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepMaps {
    pub forward: GenMap,
    pub backward: GenMap,
}

impl StepMaps {
    fn identity(n: usize) -> Self {
        Self { forward: GenMap::identity(n), backward: GenMap::identity(n) }
    }
}

/// T1: adds generator `y = x_{n+1}` and the relator `y s^{-1}` in front.
pub fn t1_introduce(p: &Presentation, s: &Word) -> Result<(Presentation, StepMaps)> {
    let n = p.n_gens;
    if s.max_generator() > n {
        return Err(Error::Rank(format!("{s} is not a word over x1..x{n}")));
    }
    let s = s.with_rank(n)?.free_reduce();
    let m = n + 1;
    let s_wide = s.with_rank(m)?;
    let mut def = vec![m as Letter];
    def.extend(s_wide.invert().letters());
    let mut relators = vec![Word::from_parts(m, def)];
    relators.extend(p.relators.iter().map(|r| r.with_rank(m).expect("widening")));
    let forward =
        GenMap { from_gens: n, to_gens: m, images: (1..=n as Letter).map(|i| Word::from_parts(m, vec![i])).collect() };
    let mut back_images: Vec<Word> = (1..=n as Letter).map(|i| Word::from_parts(n, vec![i])).collect();
    back_images.push(s);
    let backward = GenMap { from_gens: m, to_gens: n, images: back_images };
    Ok((Presentation { n_gens: m, relators }, StepMaps { forward, backward }))
}

/// T2: removes `generator` using `relator`, which must mention it exactly
/// once while no other relator mentions it at all.
pub fn t2_cancel(p: &Presentation, relator: usize, generator: usize) -> Result<(Presentation, StepMaps)> {
    let n = p.n_gens;
    if generator == 0 || generator > n {
        return Err(Error::Move(format!("generator x{generator} does not exist")));
    }
    if n == 1 {
        return Err(Error::Move("cannot cancel the only generator".into()));
    }
    let r = p.relator(relator)?;
    let hits: Vec<usize> = r
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.unsigned_abs() as usize == generator)
        .map(|(i, _)| i)
        .collect();
    if hits.len() != 1 {
        return Err(Error::Move(format!(
            "relator {} mentions x{generator} {} times, expected exactly once",
            relator + 1,
            hits.len()
        )));
    }
    if let Some(other) = p.relators.iter().enumerate().position(|(i, q)| i != relator && q.mentions(generator)) {
        return Err(Error::Move(format!("relator {} also mentions x{generator}", other + 1)));
    }
    // r = u y^e v, so y^e = u^{-1} v^{-1}
    let pos = hits[0];
    let e = r.letters()[pos].signum();
    let u = Word::from_parts(n, r.letters()[..pos].to_vec());
    let v = Word::from_parts(n, r.letters()[pos + 1..].to_vec());
    let y_pow = u.invert().multiply(&v.invert())?;
    let value = if e > 0 { y_pow } else { y_pow.invert() };

    let shrink = |l: Letter| -> Letter {
        let g = l.unsigned_abs() as usize;
        if g > generator {
            l - l.signum()
        } else {
            l
        }
    };
    let m = n - 1;
    let reindex = |w: &Word| Word::from_parts(m, w.letters().iter().map(|&l| shrink(l)).collect());
    let relators = p.relators.iter().enumerate().filter(|&(i, _)| i != relator).map(|(_, q)| reindex(q)).collect();
    let forward_images = (1..=n)
        .map(|g| if g == generator { reindex(&value) } else { Word::from_parts(m, vec![shrink(g as Letter)]) })
        .collect();
    let backward_images = (1..=m)
        .map(|g| Word::from_parts(n, vec![if g >= generator { g as Letter + 1 } else { g as Letter }]))
        .collect();
    Ok((
        Presentation { n_gens: m, relators },
        StepMaps {
            forward: GenMap { from_gens: n, to_gens: m, images: forward_images },
            backward: GenMap { from_gens: m, to_gens: n, images: backward_images },
        },
    ))
}

/// T3: rewrites every relator through an elementary automorphism `α`; the
/// forward map is `α`, the backward map `α^{-1}`.
pub fn t3_automorphism(p: &Presentation, a: &Automorphism) -> Result<(Presentation, StepMaps)> {
    let forward = a.as_map(p.n_gens)?;
    let backward = a.inverse().as_map(p.n_gens)?;
    let relators = p.relators.iter().map(|r| forward.apply(r)).collect::<Result<Vec<_>>>()?;
    Ok((Presentation { n_gens: p.n_gens, relators }, StepMaps { forward, backward }))
}

/// T4′: rewrites relator `i`; generators do not move.
pub fn t4p_modify(p: &Presentation, i: usize, action: &RelatorAction) -> Result<(Presentation, StepMaps)> {
    let r = p.relator(i)?.clone();
    let other = |j: usize| -> Result<Word> {
        if j == i {
            return Err(Error::Move(format!("relator {} cannot be combined with itself", i + 1)));
        }
        p.relator(j).cloned()
    };
    let gen = |k: usize| -> Result<Word> {
        if k == 0 || k > p.n_gens {
            return Err(Error::Move(format!("conjugator x{k} does not exist")));
        }
        Ok(Word::from_parts(p.n_gens, vec![k as Letter]))
    };
    let new = match *action {
        RelatorAction::Inv => r.invert(),
        RelatorAction::MulRight(j) => r.multiply(&other(j)?)?,
        RelatorAction::MulRightInv(j) => r.multiply(&other(j)?.invert())?,
        RelatorAction::MulLeft(j) => other(j)?.multiply(&r)?,
        RelatorAction::MulLeftInv(j) => other(j)?.invert().multiply(&r)?,
        RelatorAction::Conj(k) => r.conjugate(&gen(k)?)?,
        RelatorAction::ConjInv(k) => r.conjugate(&gen(k)?.invert())?,
    };
    let mut relators = p.relators.clone();
    relators[i] = new;
    Ok((Presentation { n_gens: p.n_gens, relators }, StepMaps::identity(p.n_gens)))
}

pub fn apply_move(p: &Presentation, mv: &Move) -> Result<(Presentation, StepMaps)> {
    match mv {
        Move::T1(s) => t1_introduce(p, s),
        Move::T2 { relator, generator } => t2_cancel(p, *relator, *generator),
        Move::T3(a) => t3_automorphism(p, a),
        Move::T4 { relator, action } => t4p_modify(p, *relator, action),
    }
}

/// A recorded sequence of moves with the composed isomorphisms
/// `phi: start → end` and `phi_inv: end → start`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TietzeChain {
    start: Presentation,
    moves: Vec<Move>,
    end: Presentation,
    phi: GenMap,
    phi_inv: GenMap,
}

impl TietzeChain {
    pub fn new(start: Presentation) -> Self {
        let n = start.n_gens;
        Self { end: start.clone(), start, moves: Vec::new(), phi: GenMap::identity(n), phi_inv: GenMap::identity(n) }
    }

    pub fn replay(start: &Presentation, moves: &[Move]) -> Result<Self> {
        let mut chain = TietzeChain::new(start.clone());
        for mv in moves {
            chain.push(mv.clone())?;
        }
        Ok(chain)
    }

    /// Applies a move to the current end and extends both maps.
    pub fn push(&mut self, mv: Move) -> Result<()> {
        // T1 words are stored over the current alphabet so text replays compare equal
        let mv = match mv {
            Move::T1(s) if s.max_generator() <= self.end.n_gens => {
                Move::T1(s.with_rank(self.end.n_gens)?.free_reduce())
            }
            other => other,
        };
        let (end, step) = apply_move(&self.end, &mv)?;
        self.phi = self.phi.then(&step.forward)?;
        self.phi_inv = step.backward.then(&self.phi_inv)?;
        self.end = end;
        self.moves.push(mv);
        Ok(())
    }

    pub fn start(&self) -> &Presentation {
        &self.start
    }

    pub fn end(&self) -> &Presentation {
        &self.end
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn phi(&self) -> &GenMap {
        &self.phi
    }

    pub fn phi_inv(&self) -> &GenMap {
        &self.phi_inv
    }

    /// One move per line.
    pub fn moves_text(&self) -> String {
        self.moves.iter().map(|m| format!("{m}\n")).collect()
    }

    pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
        text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::parse).collect()
    }
}

/// Replays the chain from its start and returns `(phi, phi_inv)`.
pub fn compose_chain(chain: &TietzeChain) -> Result<(GenMap, GenMap)> {
    let replayed = TietzeChain::replay(&chain.start, &chain.moves)?;
    if replayed.end != chain.end {
        return Err(Error::Move("replay does not reproduce the recorded end presentation".into()));
    }
    Ok((replayed.phi, replayed.phi_inv))
}

/// Breaks long relators into short pieces by introducing generators for
/// prefixes.
///
/// Only relators of the input (not the new definitions) are cut. Each cut
/// takes the longest over-long relator `r = s·t` (lowest index on ties),
/// introduces `y = s` with T1 and rewrites `r` to `y·t` with T4′. Preferred
/// cut points are syllable boundaries in `max_len-1 ..= limit-1` where
/// `limit = max(max_len, 4)`; a cut is taken only if the relator's share of
/// total length stays within twice its original length.
pub fn break_relators(p: &Presentation, max_len: usize) -> Result<TietzeChain> {
    if max_len < 3 {
        return Err(Error::Range(format!("max_len must be at least 3, got {max_len}")));
    }
    let limit = max_len.max(4);
    let mut chain = TietzeChain::new(p.clone());
    // per current relator position: Some((original length, cuts so far)) for input relators
    let mut origin: Vec<Option<(usize, usize)>> = p.relators.iter().map(|r| Some((r.len(), 0))).collect();
    let min_steps = |len: usize| if len > max_len { (len - max_len).div_ceil(limit - 2) } else { 0 };

    loop {
        let rels = chain.end().relators();
        let target = (0..rels.len())
            .filter(|&i| origin[i].is_some() && rels[i].len() > max_len)
            .max_by(|&a, &b| rels[a].len().cmp(&rels[b].len()).then(b.cmp(&a)));
        let Some(i) = target else { break };
        let r = rels[i].clone();
        let len = r.len();
        let (orig_len, done) = origin[i].expect("input relator");

        let boundaries = (1..len).filter(|&b| r.letters()[b] != r.letters()[b - 1]);
        let mut candidates: Vec<usize> = boundaries.filter(|&b| b + 1 >= max_len && b < limit).take(1).collect();
        candidates.push(max_len - 1);
        candidates.push(limit - 1);
        let within_budget = |k: usize| 2 * (done + 1) + 2 * min_steps(len - k + 1) <= orig_len;
        let cut = match candidates.iter().copied().find(|&k| k >= 2 && k < len && within_budget(k)) {
            Some(k) => k,
            None if len <= limit => {
                // already short enough for the hard bound; leave it
                origin[i] = None;
                continue;
            }
            None => limit - 1,
        };
        let prefix = Word::from_parts(r.rank(), r.letters()[..cut].to_vec());
        chain.push(Move::T1(prefix))?;
        chain.push(Move::T4 { relator: i + 1, action: RelatorAction::MulLeft(0) })?;
        origin.insert(0, None);
        origin[i + 1] = Some((orig_len, done + 1));
    }
    Ok(chain)
}

/// Shape of a random disguising chain.
#[derive(Clone, Debug)]
pub struct ChainConfig {
    /// Number of moves; every third move (starting with the first) is T1.
    pub moves: usize,
    /// Length range of the words introduced by T1.
    pub t1_len: std::ops::RangeInclusive<usize>,
    /// T3/T4′ moves that would push a relator beyond this length are redrawn.
    pub max_relator_len: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { moves: 9, t1_len: 2..=3, max_relator_len: 8 }
    }
}

const MOVE_REDRAWS: usize = 32;

/// Extends `chain` by random T1/T3/T4′ moves. Replay-deterministic.
pub fn extend_random<R: Rng + ?Sized>(chain: &mut TietzeChain, cfg: &ChainConfig, rng: &mut R) -> Result<()> {
    for step in 0..cfg.moves {
        let n = chain.end().n_gens();
        if step % 3 == 0 {
            let len = rng.gen_range(cfg.t1_len.clone());
            chain.push(Move::T1(random_reduced_word(n, len, rng)))?;
            continue;
        }
        let cap = cfg.max_relator_len.max(chain.end().max_relator_len());
        let mut chosen = None;
        for _ in 0..MOVE_REDRAWS {
            let mv = random_shuffle_move(chain.end(), rng);
            let (next, _) = apply_move(chain.end(), &mv)?;
            if next.relators().iter().all(|r| !r.is_empty() && r.len() <= cap) {
                chosen = Some(mv);
                break;
            }
        }
        // length-preserving fallback
        let mv = chosen.unwrap_or_else(|| {
            let i = rng.gen_range(1..=n);
            Move::T3(Automorphism::Invert(i))
        });
        chain.push(mv)?;
    }
    Ok(())
}

/// A random chain of `cfg.moves` moves from `start`.
pub fn random_chain<R: Rng + ?Sized>(start: &Presentation, cfg: &ChainConfig, rng: &mut R) -> Result<TietzeChain> {
    let mut chain = TietzeChain::new(start.clone());
    extend_random(&mut chain, cfg, rng)?;
    Ok(chain)
}

fn random_signed<R: Rng + ?Sized>(n: usize, avoid: usize, rng: &mut R) -> Letter {
    loop {
        let j = rng.gen_range(1..=n);
        if j != avoid {
            return if rng.gen_bool(0.5) { j as Letter } else { -(j as Letter) };
        }
    }
}

fn random_other<R: Rng + ?Sized>(k: usize, avoid: usize, rng: &mut R) -> usize {
    loop {
        let j = rng.gen_range(0..k);
        if j != avoid {
            return j;
        }
    }
}

fn random_shuffle_move<R: Rng + ?Sized>(p: &Presentation, rng: &mut R) -> Move {
    let n = p.n_gens();
    let k = p.relators().len();
    let use_t3 = k == 0 || rng.gen_bool(0.5);
    if use_t3 {
        let i = rng.gen_range(1..=n);
        let options: &[u8] = if n >= 2 { &[0, 1, 2, 3] } else { &[1] };
        return Move::T3(match options.choose(rng).copied().unwrap_or(1) {
            0 => Automorphism::Swap(i, random_signed(n, i, rng).unsigned_abs() as usize),
            1 => Automorphism::Invert(i),
            2 => Automorphism::LeftMul { i, j: random_signed(n, i, rng) },
            _ => Automorphism::RightMul { i, j: random_signed(n, i, rng) },
        });
    }
    let i = rng.gen_range(0..k);
    let g = rng.gen_range(1..=n);
    let action = match rng.gen_range(0..if k >= 2 { 7 } else { 3 }) {
        0 => RelatorAction::Inv,
        1 => RelatorAction::Conj(g),
        2 => RelatorAction::ConjInv(g),
        3 => RelatorAction::MulRight(random_other(k, i, rng)),
        4 => RelatorAction::MulRightInv(random_other(k, i, rng)),
        5 => RelatorAction::MulLeft(random_other(k, i, rng)),
        _ => RelatorAction::MulLeftInv(random_other(k, i, rng)),
    };
    Move::T4 { relator: i, action }
}

/// The presentation `⟨x1,x2,x3 | x1²x2³, x1x2²x1⁻¹x3⟩` used in the examples.
pub fn example_presentation() -> Presentation {
    Presentation::new(3, vec![Word::from_parts(3, vec![1, 1, 2, 2, 2]), Word::from_parts(3, vec![1, 2, 2, -1, 3])])
        .expect("valid")
}

/// The scripted chain taking [`example_presentation`] to
/// `⟨x1..x6 | x6⁻¹x4x2, x1⁻¹x5x2², x4⁻¹x5², x6x2², x1x5⁻¹x3⟩`.
pub fn example_chain_moves() -> Vec<Move> {
    use RelatorAction::*;
    let w = |rank: usize, l: &[Letter]| Word::from_parts(rank, l.to_vec());
    vec![
        Move::T1(w(3, &[1, 1])),
        Move::T4 { relator: 1, action: MulLeft(0) },
        Move::T1(w(4, &[1, 2, 2])),
        Move::T4 { relator: 3, action: MulLeft(0) },
        Move::T3(Automorphism::Swap(1, 5)),
        Move::T1(w(5, &[4, 2])),
        Move::T4 { relator: 3, action: MulLeft(0) },
        Move::T4 { relator: 0, action: Inv },
        Move::T4 { relator: 0, action: Conj(6) },
        Move::T4 { relator: 1, action: Inv },
        Move::T4 { relator: 1, action: Conj(1) },
        Move::T4 { relator: 2, action: Inv },
        Move::T4 { relator: 2, action: Conj(4) },
    ]
}
