//! Words over a finite generating alphabet.
//!
//! A letter `i > 0` stands for the generator `x_i`, `i < 0` for `x_{|i|}^{-1}`.
//! Every word carries the rank of its alphabet so mismatched products are
//! caught instead of silently widening.

use std::fmt;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::error::{Error, Result};

/// A signed generator index.
pub type Letter = i32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    /// Builds a word after checking every letter against `rank`.
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Rank("alphabet rank must be positive".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(Error::Rank("letter 0 is not a generator".into()));
            }
            if l.unsigned_abs() as usize > rank {
                return Err(Error::Rank(format!("letter {l} exceeds rank {rank}")));
            }
        }
        Ok(Self { rank, letters })
    }

    pub(crate) fn from_parts(rank: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= rank));
        Self { rank, letters }
    }

    pub fn identity(rank: usize) -> Self {
        Self { rank, letters: Vec::new() }
    }

    /// The single-letter word `x_i^{±1}`.
    pub fn letter(rank: usize, letter: Letter) -> Result<Self> {
        Self::new(rank, vec![letter])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != -p[1])
    }

    /// Largest generator index mentioned (0 for the empty word).
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn mentions(&self, generator: usize) -> bool {
        self.letters.iter().any(|l| l.unsigned_abs() as usize == generator)
    }

    /// Same letters over a different alphabet size.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        Self::new(rank, self.letters.clone())
    }

    /// Removes adjacent `x x^{-1}` pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        Self { rank: self.rank, letters: reduce_letters(&self.letters) }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Result<Self> {
        self.check_rank(other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Self { rank: self.rank, letters })
    }

    /// Reduced product `self · other`.
    pub fn multiply(&self, other: &Word) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = reduce_letters(&self.letters);
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Self { rank: self.rank, letters: out })
    }

    /// Reduced inverse.
    pub fn invert(&self) -> Self {
        let letters = reduce_letters(&self.letters).into_iter().rev().map(|l| -l).collect();
        Self { rank: self.rank, letters }
    }

    /// Formal inverse: reversed and sign-flipped, no reduction.
    pub fn formal_inverse(&self) -> Self {
        Self { rank: self.rank, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// `x^{-1} · self · x`, reduced.
    pub fn conjugate(&self, x: &Word) -> Result<Self> {
        x.invert().multiply(self)?.multiply(x)
    }

    /// `self^k` for a signed exponent.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.invert() } else { self.free_reduce() };
        let mut out = Self::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base).expect("same rank");
        }
        out
    }

    /// Splices `piece` in front of position `pos` without reducing.
    pub fn insert_at(&self, pos: usize, piece: &Word) -> Result<Self> {
        self.check_rank(piece)?;
        if pos > self.len() {
            return Err(Error::Range(format!("insert position {pos} beyond length {}", self.len())));
        }
        let mut letters = Vec::with_capacity(self.len() + piece.len());
        letters.extend_from_slice(&self.letters[..pos]);
        letters.extend_from_slice(&piece.letters);
        letters.extend_from_slice(&self.letters[pos..]);
        Ok(Self { rank: self.rank, letters })
    }

    /// Parses the comma-separated text form; `e` is the empty word.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let letters = parse_letters(text)?;
        Self::new(rank, letters).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses with the rank inferred as the largest mentioned generator.
    pub fn parse_infer(text: &str) -> Result<Self> {
        let letters = parse_letters(text)?;
        let rank = letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(1);
        Self::new(rank, letters).map_err(|e| Error::Parse(e.to_string()))
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::Rank(format!("rank {} vs rank {}", self.rank, other.rank)));
        }
        Ok(())
    }
}

/// Reduced product of two words.
pub fn multiply(a: &Word, b: &Word) -> Result<Word> {
    a.multiply(b)
}

/// Reduced commutator `x^{-1} y^{-1} x y`.
pub fn commutator(x: &Word, y: &Word) -> Result<Word> {
    x.invert().multiply(&y.invert())?.multiply(x)?.multiply(y)
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

pub(crate) fn reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    for &l in letters {
        push_reduced(&mut out, l);
    }
    out
}

fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let text = text.trim();
    if text == "e" {
        return Ok(Vec::new());
    }
    if text.is_empty() {
        return Err(Error::Parse("empty text; the identity is written `e`".into()));
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let l: Letter = tok.parse().map_err(|_| Error::Parse(format!("bad token `{tok}`")))?;
            if l == 0 {
                return Err(Error::Parse("zero is not a letter".into()));
            }
            Ok(l)
        })
        .collect()
}

/// Canonical text: comma-separated signed indices, `e` when empty.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}; {}]", self.rank, self)
    }
}

/// Samples a word letter by letter. The length is uniform over `len_range`
/// and each letter uniform over the `2·rank` signed indices. The result is
/// NOT reduced.
pub fn random_word<R: Rng + ?Sized>(rank: usize, len_range: RangeInclusive<usize>, rng: &mut R) -> Result<Word> {
    if rank == 0 {
        return Err(Error::Rank("alphabet rank must be positive".into()));
    }
    if len_range.is_empty() {
        return Err(Error::Range(format!("empty length range {len_range:?}")));
    }
    let len = rng.gen_range(len_range);
    let letters = (0..len).map(|_| random_letter(rank, rng)).collect();
    Ok(Word::from_parts(rank, letters))
}

/// Samples a freely reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = random_letter(rank, rng);
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    Word::from_parts(rank, letters)
}

pub(crate) fn random_letter<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> Letter {
    let i = rng.gen_range(0..2 * rank) as Letter;
    let g = i / 2 + 1;
    if i % 2 == 0 {
        g
    } else {
        -g
    }
}

/// Letters in enumeration order: `1, -1, 2, -2, …`.
pub(crate) fn alphabet(rank: usize) -> Vec<Letter> {
    (1..=rank as Letter).flat_map(|g| [g, -g]).collect()
}

/// Visits every freely reduced word of length `0..=max_len` over `rank`
/// generators, shortest first, lexicographic within a length using the
/// letter order of [`alphabet`]. The visitor returns `false` to stop.
pub fn for_each_reduced_word<F>(rank: usize, max_len: usize, mut visit: F)
where
    F: FnMut(&[Letter]) -> bool,
{
    let letters = alphabet(rank);
    let mut buf: Vec<Letter> = Vec::with_capacity(max_len);
    for len in 0..=max_len {
        if !visit_len(&letters, len, &mut buf, &mut visit) {
            return;
        }
    }
}

fn visit_len<F>(letters: &[Letter], len: usize, buf: &mut Vec<Letter>, visit: &mut F) -> bool
where
    F: FnMut(&[Letter]) -> bool,
{
    if buf.len() == len {
        return visit(buf);
    }
    for &l in letters {
        if buf.last() == Some(&-l) {
            continue;
        }
        buf.push(l);
        let keep_going = visit_len(letters, len, buf, visit);
        buf.pop();
        if !keep_going {
            return false;
        }
    }
    true
}
