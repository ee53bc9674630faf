//! Platform groups with exact normal forms.
//!
//! Every [`Element`] is stored in normal form, so equality is payload
//! equality: reduced words for free groups (and pairs of reduced words for
//! a direct product of two free groups), residues for `Z_p^*`, image lists
//! for permutations, reduced entries for `GL(n, Z_p)`.

pub mod matrix;
pub mod modular;
pub mod perm;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::word::{random_reduced_word, Word};
pub use matrix::Matrix;
pub use perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Free(Word),
    /// Element of `F(left) × F(right)`.
    Pair(Word, Word),
    Residue {
        value: u64,
        modulus: u64,
    },
    Perm(Perm),
    Matrix(Matrix),
}

impl Element {
    /// Group product. Panics when the operands live on different platforms.
    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Free(a), Element::Free(b)) => Element::Free(a.multiply(b).expect("free rank mismatch")),
            (Element::Pair(a1, a2), Element::Pair(b1, b2)) => Element::Pair(
                a1.multiply(b1).expect("left rank mismatch"),
                a2.multiply(b2).expect("right rank mismatch"),
            ),
            (Element::Residue { value: a, modulus: p }, Element::Residue { value: b, modulus: q }) => {
                assert_eq!(p, q, "modulus mismatch");
                Element::Residue { value: modular::mul_mod(*a, *b, *p), modulus: *p }
            }
            (Element::Perm(a), Element::Perm(b)) => Element::Perm(a.compose(b)),
            (Element::Matrix(a), Element::Matrix(b)) => Element::Matrix(a.mul(b)),
            (a, b) => panic!("cannot multiply elements of different platforms: {a:?} · {b:?}"),
        }
    }

    pub fn inv(&self) -> Element {
        match self {
            Element::Free(w) => Element::Free(w.invert()),
            Element::Pair(a, b) => Element::Pair(a.invert(), b.invert()),
            Element::Residue { value, modulus } => Element::Residue {
                value: modular::inv_mod_prime(*value, *modulus).expect("residue is a unit"),
                modulus: *modulus,
            },
            Element::Perm(p) => Element::Perm(p.inverse()),
            Element::Matrix(m) => Element::Matrix(m.inverse().expect("matrix is invertible")),
        }
    }

    /// Identity of the platform this element lives on.
    pub fn identity_like(&self) -> Element {
        match self {
            Element::Free(w) => Element::Free(Word::identity(w.rank())),
            Element::Pair(a, b) => Element::Pair(Word::identity(a.rank()), Word::identity(b.rank())),
            Element::Residue { modulus, .. } => Element::Residue { value: 1, modulus: *modulus },
            Element::Perm(p) => Element::Perm(Perm::identity(p.degree())),
            Element::Matrix(m) => Element::Matrix(Matrix::identity(m.size(), m.modulus())),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Free(w) => w.is_empty(),
            Element::Pair(a, b) => a.is_empty() && b.is_empty(),
            Element::Residue { value, .. } => *value == 1,
            Element::Perm(p) => p.is_identity(),
            Element::Matrix(m) => m.is_identity(),
        }
    }

    /// `x^{-1} · self · x`.
    pub fn conj(&self, x: &Element) -> Element {
        x.inv().mul(self).mul(x)
    }

    /// `self^{-1} y^{-1} self y`.
    pub fn commutator(&self, y: &Element) -> Element {
        self.inv().mul(&y.inv()).mul(self).mul(y)
    }

    pub fn commutes_with(&self, other: &Element) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Signed power by repeated squaring.
    pub fn pow(&self, k: i64) -> Element {
        let base = if k < 0 { self.inv() } else { self.clone() };
        square_and_multiply(&base, k.unsigned_abs()).0
    }

    /// `self^n` as an `n`-fold product, for cross-checks.
    pub fn pow_naive(&self, n: u64) -> Element {
        (0..n).fold(self.identity_like(), |acc, _| acc.mul(self))
    }

    /// Length function used by length-based heuristics (reduced word length
    /// on free platforms, zero elsewhere).
    pub fn word_length(&self) -> usize {
        match self {
            Element::Free(w) => w.len(),
            Element::Pair(a, b) => a.len() + b.len(),
            _ => 0,
        }
    }

    /// Serialized payload, bit-exact for transcripts.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Free(w) => write!(f, "{w}"),
            Element::Pair(a, b) => write!(f, "{a}|{b}"),
            Element::Residue { value, .. } => write!(f, "{value}"),
            Element::Perm(p) => write!(f, "{p}"),
            Element::Matrix(m) => write!(f, "{m}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Free(w) => write!(f, "{w:?}"),
            Element::Pair(a, b) => write!(f, "Pair[{a}|{b}]"),
            Element::Residue { value, modulus } => write!(f, "{value} mod {modulus}"),
            Element::Perm(p) => write!(f, "{p:?}"),
            Element::Matrix(m) => write!(f, "{m:?}"),
        }
    }
}

/// `g^n` by right-to-left binary exponentiation, returning the number of
/// group multiplications performed.
///
/// For `n = 22` this computes `g^16 · g^4 · g^2` from the squares
/// `g^2, g^4, g^8, g^16`: four squarings and two products.
pub fn square_and_multiply(g: &Element, n: u64) -> (Element, usize) {
    let mut acc: Option<Element> = None;
    let mut base = g.clone();
    let mut count = 0;
    let mut rest = n;
    while rest > 0 {
        if rest & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => {
                    count += 1;
                    a.mul(&base)
                }
            });
        }
        rest >>= 1;
        if rest > 0 {
            base = base.mul(&base);
            count += 1;
        }
    }
    (acc.unwrap_or_else(|| g.identity_like()), count)
}

/// A concrete platform group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Platform {
    Free {
        rank: usize,
    },
    /// `F(left) × F(right)`; generators `x_1..x_left` live in the first
    /// factor, `x_{left+1}..` in the second.
    DirectProduct {
        left: usize,
        right: usize,
    },
    /// `Z_p^*` with a distinguished element `g` of recorded order.
    Cyclic {
        p: u64,
        g: u64,
        order: u64,
    },
    Permutation {
        degree: usize,
    },
    Matrix {
        n: usize,
        p: u64,
    },
}

impl Platform {
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Rank("free rank must be positive".into()));
        }
        Ok(Platform::Free { rank })
    }

    pub fn direct_product(left: usize, right: usize) -> Result<Self> {
        if left == 0 || right == 0 {
            return Err(Error::Rank("both factors need positive rank".into()));
        }
        Ok(Platform::DirectProduct { left, right })
    }

    pub fn cyclic(p: u64, g: u64) -> Result<Self> {
        if !modular::is_prime(p) {
            return Err(Error::Setup(format!("{p} is not prime")));
        }
        if g.is_multiple_of(p) {
            return Err(Error::Setup("generator must be a unit".into()));
        }
        Ok(Platform::Cyclic { p, g: g % p, order: modular::multiplicative_order(g % p, p) })
    }

    pub fn permutation(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Setup("degree must be positive".into()));
        }
        Ok(Platform::Permutation { degree })
    }

    pub fn matrix(n: usize, p: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Setup("matrix size must be positive".into()));
        }
        if !modular::is_prime(p) {
            return Err(Error::Setup(format!("{p} is not prime")));
        }
        Ok(Platform::Matrix { n, p })
    }

    pub fn identity(&self) -> Element {
        match *self {
            Platform::Free { rank } => Element::Free(Word::identity(rank)),
            Platform::DirectProduct { left, right } => Element::Pair(Word::identity(left), Word::identity(right)),
            Platform::Cyclic { p, .. } => Element::Residue { value: 1, modulus: p },
            Platform::Permutation { degree } => Element::Perm(Perm::identity(degree)),
            Platform::Matrix { n, p } => Element::Matrix(Matrix::identity(n, p)),
        }
    }

    /// Standard generating list.
    pub fn generators(&self) -> Vec<Element> {
        match *self {
            Platform::Free { rank } => {
                (1..=rank as i32).map(|i| Element::Free(Word::from_parts(rank, vec![i]))).collect()
            }
            Platform::DirectProduct { left, right } => {
                let l =
                    (1..=left as i32).map(|i| Element::Pair(Word::from_parts(left, vec![i]), Word::identity(right)));
                let r =
                    (1..=right as i32).map(|i| Element::Pair(Word::identity(left), Word::from_parts(right, vec![i])));
                l.chain(r).collect()
            }
            Platform::Cyclic { p, g, .. } => vec![Element::Residue { value: g, modulus: p }],
            Platform::Permutation { degree } => {
                if degree == 1 {
                    return vec![self.identity()];
                }
                let swap = Perm::from_cycles(degree, &[&[1, 2]]).expect("valid");
                let cycle: Vec<usize> = (1..=degree).collect();
                let long = Perm::from_cycles(degree, &[&cycle]).expect("valid");
                vec![Element::Perm(swap), Element::Perm(long)]
            }
            Platform::Matrix { n, p } => {
                // transvections I + E_ij together with diag(ζ, 1, …, 1) generate GL(n, p)
                let mut gens = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let mut m = Matrix::identity(n, p);
                            m.set(i, j, 1);
                            gens.push(Element::Matrix(m));
                        }
                    }
                }
                if p > 2 {
                    let zeta = (2..p).find(|&z| modular::multiplicative_order(z, p) == p - 1).unwrap_or(1);
                    let mut m = Matrix::identity(n, p);
                    m.set(0, 0, zeta);
                    gens.push(Element::Matrix(m));
                }
                gens
            }
        }
    }

    /// Generators as a [`SubgroupGens`] spanning the whole platform.
    pub fn whole_group(&self) -> SubgroupGens {
        SubgroupGens::new(self.clone(), self.generators()).expect("nonempty")
    }

    /// A random element; free platforms draw reduced words of length 4..=8.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Element> {
        Ok(match *self {
            Platform::Free { rank } => {
                let len = rng.gen_range(4..=8);
                Element::Free(random_reduced_word(rank, len, rng))
            }
            Platform::DirectProduct { left, right } => {
                let l = rng.gen_range(2..=6);
                let r = rng.gen_range(2..=6);
                Element::Pair(random_reduced_word(left, l, rng), random_reduced_word(right, r, rng))
            }
            Platform::Cyclic { p, g, order } => {
                let k = rng.gen_range(0..order);
                Element::Residue { value: modular::pow_mod(g, k, p), modulus: p }
            }
            Platform::Permutation { degree } => {
                let mut images: Vec<usize> = (1..=degree).collect();
                for i in (1..degree).rev() {
                    let j = rng.gen_range(0..=i);
                    images.swap(i, j);
                }
                Element::Perm(Perm::from_images(&images)?)
            }
            Platform::Matrix { n, p } => Element::Matrix(Matrix::random_invertible(n, p, rng)?),
        })
    }

    /// Parses a serialized payload of this platform.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        match *self {
            Platform::Free { rank } => Ok(Element::Free(Word::parse(text, rank)?.free_reduce())),
            Platform::DirectProduct { left, right } => {
                let (a, b) =
                    text.split_once('|').ok_or_else(|| Error::Parse(format!("expected `u|v`, got `{text}`")))?;
                Ok(Element::Pair(Word::parse(a, left)?.free_reduce(), Word::parse(b, right)?.free_reduce()))
            }
            Platform::Cyclic { p, .. } => {
                let v: u64 = text.parse().map_err(|_| Error::Parse(format!("bad residue `{text}`")))?;
                if v == 0 || v >= p {
                    return Err(Error::Parse(format!("residue {v} outside [1, {}]", p - 1)));
                }
                Ok(Element::Residue { value: v, modulus: p })
            }
            Platform::Permutation { degree } => {
                let perm = Perm::parse(text)?;
                if perm.degree() != degree {
                    return Err(Error::Parse(format!("expected degree {degree}")));
                }
                Ok(Element::Perm(perm))
            }
            Platform::Matrix { n, p } => {
                let m = Matrix::parse(text, n, p)?;
                if !m.is_invertible() {
                    return Err(Error::Parse("matrix is singular".into()));
                }
                Ok(Element::Matrix(m))
            }
        }
    }

    /// Whether `e` is a well-formed element of this platform.
    pub fn owns(&self, e: &Element) -> bool {
        match (self, e) {
            (Platform::Free { rank }, Element::Free(w)) => w.rank() == *rank,
            (Platform::DirectProduct { left, right }, Element::Pair(a, b)) => a.rank() == *left && b.rank() == *right,
            (Platform::Cyclic { p, .. }, Element::Residue { modulus, .. }) => modulus == p,
            (Platform::Permutation { degree }, Element::Perm(q)) => q.degree() == *degree,
            (Platform::Matrix { n, p }, Element::Matrix(m)) => m.size() == *n && m.modulus() == *p,
            _ => false,
        }
    }
}

/// Header text: `free rank=R`, `dprod left=L right=R`, `cyclic p=P g=G`,
/// `perm degree=M`, `matrix n=N p=P`.
impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Platform::Free { rank } => write!(f, "free rank={rank}"),
            Platform::DirectProduct { left, right } => write!(f, "dprod left={left} right={right}"),
            Platform::Cyclic { p, g, .. } => write!(f, "cyclic p={p} g={g}"),
            Platform::Permutation { degree } => write!(f, "perm degree={degree}"),
            Platform::Matrix { n, p } => write!(f, "matrix n={n} p={p}"),
        }
    }
}

impl FromStr for Platform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or_else(|| Error::Parse("empty platform header".into()))?;
        let mut params = std::collections::BTreeMap::new();
        for kv in parts {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad parameter `{kv}`")))?;
            let v: u64 = v.parse().map_err(|_| Error::Parse(format!("bad value in `{kv}`")))?;
            params.insert(k.to_string(), v);
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| Error::Parse(format!("missing `{k}=`")));
        match kind {
            "free" => Platform::free(get("rank")? as usize),
            "dprod" => Platform::direct_product(get("left")? as usize, get("right")? as usize),
            "cyclic" => Platform::cyclic(get("p")?, get("g")?),
            "perm" => Platform::permutation(get("degree")? as usize),
            "matrix" => Platform::matrix(get("n")? as usize, get("p")?),
            other => Err(Error::Parse(format!("unknown platform `{other}`"))),
        }
        .map_err(|e| Error::Parse(e.to_string()))
    }
}

/// How subgroup membership can be tested.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Shape {
    /// No structure known; membership falls back to bounded enumeration.
    Generic,
    /// The first factor of a direct product.
    LeftFactor,
    /// The second factor of a direct product.
    RightFactor,
    /// Matrices `diag(X, I)` with `X` of the given size.
    UpperBlock(usize),
    /// Matrices `diag(I, Y)` with the identity block of the given size.
    LowerBlock(usize),
}

/// Generators of a subgroup of a platform.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupGens {
    platform: Platform,
    gens: Vec<Element>,
    shape: Shape,
}

impl SubgroupGens {
    pub fn new(platform: Platform, gens: Vec<Element>) -> Result<Self> {
        Self::with_shape(platform, gens, Shape::Generic)
    }

    pub fn with_shape(platform: Platform, gens: Vec<Element>, shape: Shape) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Setup("subgroup needs at least one generator".into()));
        }
        if let Some(bad) = gens.iter().find(|g| !platform.owns(g)) {
            return Err(Error::Setup(format!("{bad:?} is not an element of {platform}")));
        }
        Ok(Self { platform, gens, shape })
    }

    pub fn platform(&self) -> &Platform {
        &self.platform
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Every generator of `self` commutes with every generator of `other`.
    pub fn commutes_with(&self, other: &SubgroupGens) -> bool {
        self.gens.iter().all(|a| other.gens.iter().all(|b| a.commutes_with(b)))
    }

    /// Generators commute pairwise.
    pub fn is_commutative(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Conjugate subgroup `A^w` (generators conjugated, structure forgotten).
    pub fn conjugated(&self, w: &Element) -> SubgroupGens {
        SubgroupGens {
            platform: self.platform.clone(),
            gens: self.gens.iter().map(|g| g.conj(w)).collect(),
            shape: Shape::Generic,
        }
    }

    /// Membership test. Structured shapes use an exact structural check of
    /// the ambient block/factor; generic subgroups enumerate expressions up
    /// to `bound` letters.
    pub fn contains(&self, e: &Element, bound: usize) -> bool {
        match (self.shape, e) {
            (Shape::LeftFactor, Element::Pair(_, b)) => b.is_empty(),
            (Shape::RightFactor, Element::Pair(a, _)) => a.is_empty(),
            (Shape::UpperBlock(k), Element::Matrix(m)) => m.is_upper_block(k),
            (Shape::LowerBlock(k), Element::Matrix(m)) => m.is_lower_block(k),
            _ => {
                let mut found = false;
                crate::word::for_each_reduced_word(self.gens.len(), bound, |letters| {
                    let w = Word::from_parts(self.gens.len(), letters.to_vec());
                    let v = eval_word(self, &w).expect("rank fits");
                    found = &v == e;
                    !found
                });
                found
            }
        }
    }
}

/// Substitutes `gens[i]` for letter `i` (inverse for negative letters).
pub fn eval_word(gens: &SubgroupGens, w: &Word) -> Result<Element> {
    if w.rank() > gens.len() {
        return Err(Error::Rank(format!("word over {} letters, only {} generators", w.rank(), gens.len())));
    }
    let inverses: Vec<Element> = gens.gens.iter().map(Element::inv).collect();
    let mut acc = gens.platform.identity();
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize - 1;
        acc = if l > 0 { acc.mul(&gens.gens[i]) } else { acc.mul(&inverses[i]) };
    }
    Ok(acc)
}

/// Complementary block subgroups of `GL(n, Z_p)`: `A = ⟨diag(M_i, I)⟩`,
/// `B = ⟨diag(I, N_j)⟩` with random invertible blocks of size `n/2`.
pub fn block_commuting_subgroups<R: Rng + ?Sized>(
    n: usize,
    p: u64,
    count_a: usize,
    count_b: usize,
    rng: &mut R,
) -> Result<(SubgroupGens, SubgroupGens)> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Setup(format!("block size needs even n >= 4, got {n}")));
    }
    if count_a == 0 || count_b == 0 {
        return Err(Error::Setup("each subgroup needs a generator".into()));
    }
    let platform = Platform::matrix(n, p)?;
    let half = n / 2;
    let id = Matrix::identity(half, p);
    let mut a = Vec::with_capacity(count_a);
    for _ in 0..count_a {
        a.push(Element::Matrix(Matrix::block_diag(&Matrix::random_invertible(half, p, rng)?, &id)));
    }
    let mut b = Vec::with_capacity(count_b);
    for _ in 0..count_b {
        b.push(Element::Matrix(Matrix::block_diag(&id, &Matrix::random_invertible(half, p, rng)?)));
    }
    Ok((
        SubgroupGens::with_shape(platform.clone(), a, Shape::UpperBlock(half))?,
        SubgroupGens::with_shape(platform, b, Shape::LowerBlock(half))?,
    ))
}

/// Basis of the centralizer algebra `{X : Xg = gX}` over `Z_p`.
pub fn centralizer_basis(g: &Matrix) -> Vec<Matrix> {
    let n = g.size();
    let p = g.modulus();
    // unknown X_{ab} sits in column a*n + b; equation (i, j) reads
    // sum_l X_{il} g_{lj} - g_{il} X_{lj} = 0
    let mut rows = vec![vec![0u64; n * n]; n * n];
    for i in 0..n {
        for j in 0..n {
            let row = &mut rows[i * n + j];
            for l in 0..n {
                let c = i * n + l;
                row[c] = (row[c] + g.get(l, j)) % p;
                let c = l * n + j;
                row[c] = (row[c] + p - g.get(i, l)) % p;
            }
        }
    }
    matrix::nullspace(rows, n * n, p).into_iter().map(|v| Matrix::new(n, p, v).expect("reduced entries")).collect()
}

/// `k` random invertible matrices commuting with `g`, drawn from the
/// solution space of `Xg - gX = 0`.
pub fn matrix_centralizer_sample<R: Rng + ?Sized>(g: &Matrix, k: usize, rng: &mut R) -> Result<SubgroupGens> {
    if !g.is_invertible() {
        return Err(Error::Setup("centralizer target must be invertible".into()));
    }
    let n = g.size();
    let p = g.modulus();
    let basis = centralizer_basis(g);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let mut found = None;
        for _ in 0..matrix::INVERTIBLE_RETRY_BUDGET {
            let x = basis.iter().fold(Matrix::zero(n, p), |acc, b| acc.add(&b.scale(rng.gen_range(0..p))));
            if x.is_invertible() {
                found = Some(x);
                break;
            }
        }
        let x = found.ok_or_else(|| Error::Sampling("no invertible centralizer element within budget".into()))?;
        out.push(Element::Matrix(x));
    }
    SubgroupGens::new(Platform::matrix(n, p)?, out)
}

/// `count` random invertible polynomials in `base`; they commute pairwise.
pub fn polynomial_subgroup<R: Rng + ?Sized>(base: &Matrix, count: usize, rng: &mut R) -> Result<SubgroupGens> {
    let n = base.size();
    let p = base.modulus();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..matrix::INVERTIBLE_RETRY_BUDGET {
            let mut power = Matrix::identity(n, p);
            let mut acc = Matrix::zero(n, p);
            for _ in 0..n {
                acc = acc.add(&power.scale(rng.gen_range(0..p)));
                power = power.mul(base);
            }
            if acc.is_invertible() {
                found = Some(acc);
                break;
            }
        }
        let m = found.ok_or_else(|| Error::Sampling("no invertible polynomial within budget".into()))?;
        out.push(Element::Matrix(m));
    }
    SubgroupGens::new(Platform::matrix(n, p)?, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn sample_platforms() -> Vec<Platform> {
        vec![
            Platform::free(3).unwrap(),
            Platform::direct_product(2, 2).unwrap(),
            Platform::cyclic(23, 5).unwrap(),
            Platform::permutation(6).unwrap(),
            Platform::matrix(3, 7).unwrap(),
        ]
    }

    #[test]
    fn eval_word_examples() {
        let free = Platform::free(2).unwrap().whole_group();
        let w = Word::new(2, vec![1, -2]).unwrap();
        assert_eq!(eval_word(&free, &w).unwrap(), Element::Free(w.clone()));

        let cyc = Platform::cyclic(23, 5).unwrap().whole_group();
        let w = Word::new(1, vec![1, 1]).unwrap();
        assert_eq!(eval_word(&cyc, &w).unwrap(), Element::Residue { value: 25 % 23, modulus: 23 });

        for pf in sample_platforms() {
            let gens = pf.whole_group();
            assert_eq!(eval_word(&gens, &Word::identity(1)).unwrap(), pf.identity());
        }
        let too_wide = Word::new(3, vec![3]).unwrap();
        assert!(matches!(eval_word(&cyc, &too_wide), Err(Error::Rank(_))));
    }

    #[test]
    fn square_and_multiply_examples() {
        let mut rng = seeded(22);
        for pf in sample_platforms() {
            let g = pf.random_element(&mut rng).unwrap();
            let (fast, count) = square_and_multiply(&g, 22);
            assert_eq!(fast, g.pow_naive(22));
            assert!(count <= 9);
            assert_eq!(square_and_multiply(&g, 0).0, pf.identity());
        }
        let g = Element::Residue { value: 5, modulus: 23 };
        assert_eq!(square_and_multiply(&g, 22).0, Element::Residue { value: 1, modulus: 23 });
    }

    #[test]
    fn block_subgroups_commute_and_replay() {
        let (a, b) = block_commuting_subgroups(4, 5, 3, 3, &mut seeded(7)).unwrap();
        assert!(a.commutes_with(&b));
        let (a2, b2) = block_commuting_subgroups(4, 5, 3, 3, &mut seeded(7)).unwrap();
        assert_eq!((a, b), (a2, b2));
        assert!(block_commuting_subgroups(3, 5, 1, 1, &mut seeded(7)).is_err());
    }

    #[test]
    fn block_product_is_diagonal_pair() {
        let m = Matrix::new(2, 5, vec![1, 2, 3, 4]).unwrap();
        let nn = Matrix::new(2, 5, vec![2, 0, 1, 1]).unwrap();
        let id = Matrix::identity(2, 5);
        let prod = Matrix::block_diag(&m, &id).mul(&Matrix::block_diag(&id, &nn));
        assert_eq!(prod, Matrix::block_diag(&m, &nn));
    }

    #[test]
    fn centralizer_samples_commute() {
        let mut rng = seeded(11);
        for _ in 0..10 {
            let g = Matrix::random_invertible(3, 7, &mut rng).unwrap();
            let basis = centralizer_basis(&g);
            // identity and g always solve Xg = gX
            let span_has = |x: &Matrix| x.mul(&g) == g.mul(x);
            assert!(span_has(&Matrix::identity(3, 7)) && span_has(&g));
            assert!(!basis.is_empty());
            let sample = matrix_centralizer_sample(&g, 4, &mut rng).unwrap();
            for x in sample.gens() {
                let Element::Matrix(x) = x else { unreachable!() };
                assert!(x.mul(&g).sub(&g.mul(x)).is_zero());
            }
        }
    }

    #[test]
    fn identity_centralizer_is_everything() {
        let id = Matrix::identity(3, 5);
        assert_eq!(centralizer_basis(&id).len(), 9);
    }

    #[test]
    fn parse_roundtrip_per_platform() {
        let mut rng = seeded(5);
        for pf in sample_platforms() {
            let e = pf.random_element(&mut rng).unwrap();
            assert_eq!(pf.parse_element(&e.to_text()).unwrap(), e);
            assert_eq!(pf.to_string().parse::<Platform>().unwrap(), pf);
        }
    }

    #[test]
    fn structural_membership() {
        let pf = Platform::direct_product(2, 2).unwrap();
        let gens = pf.generators();
        let left = SubgroupGens::with_shape(pf.clone(), gens[..2].to_vec(), Shape::LeftFactor).unwrap();
        assert!(left.contains(&gens[0].mul(&gens[1]), 0));
        assert!(!left.contains(&gens[2], 0));
        let free = Platform::free(2).unwrap();
        let x1 = SubgroupGens::new(free.clone(), vec![free.generators()[0].clone()]).unwrap();
        assert!(x1.contains(&free.generators()[0].pow(3), 3));
        assert!(!x1.contains(&free.generators()[1], 3));
    }
}
