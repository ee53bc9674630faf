//! Two-party key exchange and public-key protocols as seeded session runs.
//!
//! Every session returns its public [`Transcript`], both parties' keys and
//! (for tests only) the secrets each party drew.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::platform::modular::pow_mod;
use crate::platform::{
    block_commuting_subgroups, eval_word, matrix_centralizer_sample, polynomial_subgroup, square_and_multiply, Element,
    Matrix, Platform, Shape, SubgroupGens,
};
use crate::tietze::GenMap;
use crate::transcript::{Party, Transcript};
use crate::word::{random_reduced_word, random_word, Word};

/// Default expression length for private subgroup elements.
pub const DEFAULT_EXPR_LEN: RangeInclusive<usize> = 8..=16;

/// A private subgroup element kept as an expression in the generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupExpr {
    pub expr: Word,
    pub value: Element,
}

impl SubgroupExpr {
    pub fn new(gens: &SubgroupGens, expr: Word) -> Result<Self> {
        let value = eval_word(gens, &expr)?;
        Ok(Self { expr, value })
    }

    pub fn random<R: Rng + ?Sized>(gens: &SubgroupGens, len: RangeInclusive<usize>, rng: &mut R) -> Result<Self> {
        Self::new(gens, random_word(gens.len(), len, rng)?)
    }

    /// The expression evaluated on other generators, e.g. conjugated ones.
    pub fn eval_on(&self, gens: &SubgroupGens) -> Result<Element> {
        eval_word(gens, &self.expr)
    }
}

/// Result of one session.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SessionOutcome {
    pub transcript: Transcript,
    pub key_alice: Element,
    pub key_bob: Element,
    /// Private elements by name, for test introspection only.
    pub secrets: Vec<(String, Element)>,
    /// Private integers (exponents) by name.
    pub exponents: Vec<(String, u64)>,
    pub warnings: Vec<String>,
}

impl SessionOutcome {
    fn new(transcript: Transcript, key_alice: Element, key_bob: Element) -> Self {
        Self { transcript, key_alice, key_bob, secrets: Vec::new(), exponents: Vec::new(), warnings: Vec::new() }
    }

    fn secret(mut self, name: &str, e: &Element) -> Self {
        self.secrets.push((name.to_string(), e.clone()));
        self
    }

    fn exponent(mut self, name: &str, v: u64) -> Self {
        self.exponents.push((name.to_string(), v));
        self
    }

    pub fn keys_agree(&self) -> bool {
        self.key_alice == self.key_bob
    }

    /// Looks up a retained secret; panics when absent (test helper).
    pub fn secret_value(&self, name: &str) -> &Element {
        &self.secrets.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no secret `{name}`")).1
    }

    pub fn exponent_value(&self, name: &str) -> u64 {
        self.exponents.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no exponent `{name}`")).1
    }
}

fn cyclic_params(platform: &Platform) -> Result<(u64, u64, u64)> {
    match *platform {
        Platform::Cyclic { p, g, order } => Ok((p, g, order)),
        _ => Err(Error::Setup(format!("{platform} is not a cyclic platform"))),
    }
}

fn residue(value: u64, p: u64) -> Element {
    Element::Residue { value, modulus: p }
}

/// Diffie-Hellman with the given exponents.
pub fn dh_with_exponents(platform: &Platform, a: u64, b: u64) -> Result<SessionOutcome> {
    let (p, g, _) = cyclic_params(platform)?;
    let g = residue(g, p);
    let (ga, _) = square_and_multiply(&g, a);
    let (gb, _) = square_and_multiply(&g, b);
    let mut t = Transcript::new("dh", platform.clone());
    t.publish("g", &g);
    t.send(Party::Alice, "power", &ga);
    t.send(Party::Bob, "power", &gb);
    let key_alice = square_and_multiply(&gb, a).0;
    let key_bob = square_and_multiply(&ga, b).0;
    Ok(SessionOutcome::new(t, key_alice, key_bob).exponent("a", a).exponent("b", b))
}

/// Diffie-Hellman with exponents uniform in `[0, ord(g))`.
pub fn dh_exchange<R: Rng + ?Sized>(platform: &Platform, rng: &mut R) -> Result<SessionOutcome> {
    let (_, _, order) = cyclic_params(platform)?;
    let a = rng.gen_range(0..order);
    let b = rng.gen_range(0..order);
    dh_with_exponents(platform, a, b)
}

/// ElGamal key pair: private `a`, public `c = g^a`.
pub fn elgamal_keygen<R: Rng + ?Sized>(platform: &Platform, rng: &mut R) -> Result<(u64, Element)> {
    let (p, g, order) = cyclic_params(platform)?;
    let a = rng.gen_range(1..order.max(2));
    Ok((a, residue(pow_mod(g, a, p), p)))
}

/// `(m · c^b, g^b)` for a fresh `b ∈ [1, ord(g))`; also returns `b`.
pub fn elgamal_encrypt_with<R: Rng + ?Sized>(
    platform: &Platform,
    c: &Element,
    m: &Element,
    rng: &mut R,
) -> Result<((Element, Element), u64)> {
    let (p, g, order) = cyclic_params(platform)?;
    if !platform.owns(m) || !platform.owns(c) {
        return Err(Error::Setup("plaintext or key is not in the platform group".into()));
    }
    let b = rng.gen_range(1..order.max(2));
    let mask = square_and_multiply(c, b).0;
    Ok(((m.mul(&mask), residue(pow_mod(g, b, p), p)), b))
}

pub fn elgamal_encrypt<R: Rng + ?Sized>(
    platform: &Platform,
    c: &Element,
    m: &Element,
    rng: &mut R,
) -> Result<(Element, Element)> {
    elgamal_encrypt_with(platform, c, m, rng).map(|(ct, _)| ct)
}

/// `m = (m c^b) · ((g^b)^a)^{-1}`.
pub fn elgamal_decrypt(a: u64, ct: &(Element, Element)) -> Element {
    let mask = square_and_multiply(&ct.1, a).0;
    ct.0.mul(&mask.inv())
}

/// Alice publishes `c = g^a`; Bob encrypts a random message. The shared
/// key is the mask `g^{ab}`.
pub fn elgamal_session<R: Rng + ?Sized>(platform: &Platform, rng: &mut R) -> Result<SessionOutcome> {
    let (a, c) = elgamal_keygen(platform, rng)?;
    let (p, _, _) = cyclic_params(platform)?;
    let m = residue(rng.gen_range(1..p), p);
    let ((c1, c2), b) = elgamal_encrypt_with(platform, &c, &m, rng)?;
    let mut t = Transcript::new("elgamal", platform.clone());
    t.publish("g", &platform.generators()[0]);
    t.send(Party::Alice, "pk", &c);
    t.send(Party::Bob, "ct1", &c1);
    t.send(Party::Bob, "ct2", &c2);
    let key_alice = square_and_multiply(&c2, a).0;
    let key_bob = square_and_multiply(&c, b).0;
    let decrypted = elgamal_decrypt(a, &(c1, c2));
    Ok(SessionOutcome::new(t, key_alice, key_bob)
        .exponent("a", a)
        .exponent("b", b)
        .secret("m", &m)
        .secret("decrypted", &decrypted))
}

/// Public data of the protocols built on two subgroups.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupSetup {
    pub platform: Platform,
    pub w: Element,
    pub a: SubgroupGens,
    pub b: SubgroupGens,
}

impl SubgroupSetup {
    fn publish(&self, t: &mut Transcript) {
        t.publish("w", &self.w);
        for g in self.a.gens() {
            t.publish("a-gen", g);
        }
        for g in self.b.gens() {
            t.publish("b-gen", g);
        }
    }

    fn require_commuting(&self) -> Result<()> {
        if self.a.commutes_with(&self.b) {
            Ok(())
        } else {
            Err(Error::Setup("subgroups A and B do not commute elementwise".into()))
        }
    }
}

/// Elementwise-commuting subgroups: complementary blocks of `GL(n, p)`,
/// or the two factors of a direct product of free groups.
pub fn commuting_setup<R: Rng + ?Sized>(platform: &Platform, gens_each: usize, rng: &mut R) -> Result<SubgroupSetup> {
    let (a, b) = match *platform {
        Platform::Matrix { n, p } => block_commuting_subgroups(n, p, gens_each, gens_each, rng)?,
        Platform::DirectProduct { left, .. } => {
            let gens = platform.generators();
            let (l, r) = gens.split_at(left);
            (
                SubgroupGens::with_shape(platform.clone(), l.to_vec(), Shape::LeftFactor)?,
                SubgroupGens::with_shape(platform.clone(), r.to_vec(), Shape::RightFactor)?,
            )
        }
        _ => return Err(Error::Setup(format!("no commuting subgroups known for {platform}"))),
    };
    let w = platform.random_element(rng)?;
    Ok(SubgroupSetup { platform: platform.clone(), w, a, b })
}

/// `A = ⟨x1, x2⟩`, `B = ⟨x3, x4⟩` on a free platform of rank ≥ 4; random
/// pairs of elements elsewhere.
pub fn aag_setup<R: Rng + ?Sized>(platform: &Platform, rng: &mut R) -> Result<SubgroupSetup> {
    let (a, b) = match *platform {
        Platform::Free { rank } if rank >= 4 => {
            let g = platform.generators();
            (g[0..2].to_vec(), g[2..4].to_vec())
        }
        Platform::Free { .. } => return Err(Error::Setup("AAG on a free platform needs rank at least 4".into())),
        _ => {
            let mut draw = || -> Result<Vec<Element>> { (0..2).map(|_| platform.random_element(rng)).collect() };
            (draw()?, draw()?)
        }
    };
    Ok(SubgroupSetup {
        platform: platform.clone(),
        w: platform.identity(),
        a: SubgroupGens::new(platform.clone(), a)?,
        b: SubgroupGens::new(platform.clone(), b)?,
    })
}

/// Two commutative subgroups that need not commute with each other:
/// polynomials in one random matrix each, or powers of one element each.
pub fn commutative_setup<R: Rng + ?Sized>(platform: &Platform, gens_each: usize, rng: &mut R) -> Result<SubgroupSetup> {
    let (a, b) = match *platform {
        Platform::Matrix { n, p } => {
            let m = Matrix::random_invertible(n, p, rng)?;
            let nn = Matrix::random_invertible(n, p, rng)?;
            (polynomial_subgroup(&m, gens_each, rng)?, polynomial_subgroup(&nn, gens_each, rng)?)
        }
        _ => {
            let u = platform.random_element(rng)?;
            let v = platform.random_element(rng)?;
            let powers = |x: &Element| (1..=gens_each as i64).map(|k| x.pow(k)).collect::<Vec<_>>();
            (SubgroupGens::new(platform.clone(), powers(&u))?, SubgroupGens::new(platform.clone(), powers(&v))?)
        }
    };
    let w = platform.random_element(rng)?;
    Ok(SubgroupSetup { platform: platform.clone(), w, a, b })
}

/// Ko-Lee: Alice sends `w^a`, Bob sends `w^b`, key `w^{ab}`.
pub fn ko_lee_exchange<R: Rng + ?Sized>(
    setup: &SubgroupSetup,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let a = SubgroupExpr::random(&setup.a, len.clone(), rng)?;
    let b = SubgroupExpr::random(&setup.b, len, rng)?;
    ko_lee_with(setup, &a.value, &b.value)
}

pub fn ko_lee_with(setup: &SubgroupSetup, a: &Element, b: &Element) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let wa = setup.w.conj(a);
    let wb = setup.w.conj(b);
    let mut t = Transcript::new("ko-lee", setup.platform.clone());
    setup.publish(&mut t);
    t.send(Party::Alice, "msg", &wa);
    t.send(Party::Bob, "msg", &wb);
    let key_alice = wb.conj(a);
    let key_bob = wa.conj(b);
    Ok(SessionOutcome::new(t, key_alice, key_bob).secret("a", a).secret("b", b))
}

/// Anshel-Anshel-Goldfeld with private expressions `x` over `A`, `y` over `B`.
pub fn aag_exchange<R: Rng + ?Sized>(
    setup: &SubgroupSetup,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    let x = SubgroupExpr::random(&setup.a, len.clone(), rng)?;
    let y = SubgroupExpr::random(&setup.b, len, rng)?;
    aag_with(setup, &x, &y)
}

pub fn aag_with(setup: &SubgroupSetup, x: &SubgroupExpr, y: &SubgroupExpr) -> Result<SessionOutcome> {
    let pf = &setup.platform;
    let mut t = Transcript::new("aag", pf.clone());
    for g in setup.a.gens() {
        t.publish("a-gen", g);
    }
    for g in setup.b.gens() {
        t.publish("b-gen", g);
    }
    let b_x: Vec<Element> = setup.b.gens().iter().map(|b| b.conj(&x.value)).collect();
    for e in &b_x {
        t.send(Party::Alice, "conj", e);
    }
    let a_y: Vec<Element> = setup.a.gens().iter().map(|a| a.conj(&y.value)).collect();
    for e in &a_y {
        t.send(Party::Bob, "conj", e);
    }
    // x(a_1^y, …) = x^y, then K = x^{-1} x^y
    let x_y = x.eval_on(&SubgroupGens::new(pf.clone(), a_y)?)?;
    let key_alice = x.value.inv().mul(&x_y);
    // y(b_1^x, …) = y^x, then K = (y^{-1} y^x)^{-1}
    let y_x = y.eval_on(&SubgroupGens::new(pf.clone(), b_x)?)?;
    let key_bob = y.value.inv().mul(&y_x).inv();
    Ok(SessionOutcome::new(t, key_alice, key_bob).secret("x", &x.value).secret("y", &y.value))
}

const SECRET_REDRAWS: usize = 16;

/// A private subgroup element; expressions that collapse to the identity
/// are redrawn, since a trivial factor publishes the other one.
fn draw(gens: &SubgroupGens, len: &RangeInclusive<usize>, rng: &mut (impl Rng + ?Sized)) -> Result<Element> {
    let mut value = SubgroupExpr::random(gens, len.clone(), rng)?.value;
    for _ in 0..SECRET_REDRAWS {
        if !value.is_identity() {
            break;
        }
        value = SubgroupExpr::random(gens, len.clone(), rng)?.value;
    }
    Ok(value)
}

/// Alice sends `a1 w a2`, Bob `b1 w b2`; key `a1 b1 w b2 a2`.
pub fn decomposition_exchange<R: Rng + ?Sized>(
    setup: &SubgroupSetup,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let a1 = draw(&setup.a, &len, rng)?;
    let a2 = draw(&setup.a, &len, rng)?;
    let b1 = draw(&setup.b, &len, rng)?;
    let b2 = draw(&setup.b, &len, rng)?;
    decomposition_with(setup, [&a1, &a2], [&b1, &b2])
}

pub fn decomposition_with(setup: &SubgroupSetup, a: [&Element; 2], b: [&Element; 2]) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let w = &setup.w;
    let pa = a[0].mul(w).mul(a[1]);
    let pb = b[0].mul(w).mul(b[1]);
    let mut t = Transcript::new("decomp", setup.platform.clone());
    setup.publish(&mut t);
    t.send(Party::Alice, "msg", &pa);
    t.send(Party::Bob, "msg", &pb);
    let key_alice = a[0].mul(&pb).mul(a[1]);
    let key_bob = b[0].mul(&pa).mul(b[1]);
    Ok(SessionOutcome::new(t, key_alice, key_bob)
        .secret("a1", a[0])
        .secret("a2", a[1])
        .secret("b1", b[0])
        .secret("b2", b[1]))
}

/// Alice sends `a1 w b1`, Bob `b2 w a2`; key `a1 b2 w a2 b1`.
pub fn twisted_exchange<R: Rng + ?Sized>(
    setup: &SubgroupSetup,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let a1 = draw(&setup.a, &len, rng)?;
    let b1 = draw(&setup.b, &len, rng)?;
    let b2 = draw(&setup.b, &len, rng)?;
    let a2 = draw(&setup.a, &len, rng)?;
    twisted_with(setup, [&a1, &b1], [&b2, &a2])
}

pub fn twisted_with(setup: &SubgroupSetup, alice: [&Element; 2], bob: [&Element; 2]) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let w = &setup.w;
    let (a1, b1) = (alice[0], alice[1]);
    let (b2, a2) = (bob[0], bob[1]);
    let pa = a1.mul(w).mul(b1);
    let pb = b2.mul(w).mul(a2);
    let mut t = Transcript::new("twisted", setup.platform.clone());
    setup.publish(&mut t);
    t.send(Party::Alice, "msg", &pa);
    t.send(Party::Bob, "msg", &pb);
    let key_alice = a1.mul(&pb).mul(b1);
    let key_bob = b2.mul(&pa).mul(a2);
    Ok(SessionOutcome::new(t, key_alice, key_bob).secret("a1", a1).secret("b1", b1).secret("b2", b2).secret("a2", a2))
}

/// Centralizer variant over `GL(n, p)`. `a1`/`b2` default to random
/// invertible matrices; each party publishes `k` generators of a sampled
/// subgroup of its element's centralizer.
#[allow(clippy::too_many_arguments)]
pub fn centralizer_exchange_with<R: Rng + ?Sized>(
    platform: &Platform,
    w: &Element,
    a1: Option<Matrix>,
    b2: Option<Matrix>,
    k: usize,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    let Platform::Matrix { n, p } = *platform else {
        return Err(Error::Setup("the centralizer protocol needs a matrix platform".into()));
    };
    let a1 = match a1 {
        Some(m) => m,
        None => Matrix::random_invertible(n, p, rng)?,
    };
    let alice_gens = matrix_centralizer_sample(&a1, k, rng)?;
    let b2 = match b2 {
        Some(m) => m,
        None => Matrix::random_invertible(n, p, rng)?,
    };
    let bob_gens = matrix_centralizer_sample(&b2, k, rng)?;
    let a2 = draw(&bob_gens, &len, rng)?;
    let b1 = draw(&alice_gens, &len, rng)?;
    let (a1, b2) = (Element::Matrix(a1), Element::Matrix(b2));

    let mut t = Transcript::new("centralizer", platform.clone());
    t.publish("w", w);
    for g in alice_gens.gens() {
        t.send(Party::Alice, "c-gen", g);
    }
    for g in bob_gens.gens() {
        t.send(Party::Bob, "c-gen", g);
    }
    let pa = a1.mul(w).mul(&a2);
    t.send(Party::Alice, "msg", &pa);
    let pb = b1.mul(w).mul(&b2);
    t.send(Party::Bob, "msg", &pb);
    let key_alice = a1.mul(&pb).mul(&a2);
    let key_bob = b1.mul(&pa).mul(&b2);
    Ok(SessionOutcome::new(t, key_alice, key_bob)
        .secret("a1", &a1)
        .secret("a2", &a2)
        .secret("b1", &b1)
        .secret("b2", &b2))
}

pub fn centralizer_exchange<R: Rng + ?Sized>(
    platform: &Platform,
    k: usize,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    let w = platform.random_element(rng)?;
    centralizer_exchange_with(platform, &w, None, None, k, len, rng)
}

/// Alice sends `a1 w b1`, Bob `a2 w b2`; key `a1 a2 w b2 b1`.
pub fn commutative_subgroups_exchange<R: Rng + ?Sized>(
    setup: &SubgroupSetup,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    if !setup.a.is_commutative() || !setup.b.is_commutative() {
        return Err(Error::Setup("A and B must each be commutative".into()));
    }
    let a1 = draw(&setup.a, &len, rng)?;
    let b1 = draw(&setup.b, &len, rng)?;
    let a2 = draw(&setup.a, &len, rng)?;
    let b2 = draw(&setup.b, &len, rng)?;
    let w = &setup.w;
    let pa = a1.mul(w).mul(&b1);
    let pb = a2.mul(w).mul(&b2);
    let mut t = Transcript::new("commutative", setup.platform.clone());
    setup.publish(&mut t);
    t.send(Party::Alice, "msg", &pa);
    t.send(Party::Bob, "msg", &pb);
    let key_alice = a1.mul(&pb).mul(&b1);
    let key_bob = a2.mul(&pa).mul(&b2);
    Ok(SessionOutcome::new(t, key_alice, key_bob)
        .secret("a1", &a1)
        .secret("b1", &b1)
        .secret("a2", &a2)
        .secret("b2", &b2))
}

/// Alice sends `a1 b1`, Bob `a2 b2`; Alice's key `b1 (a2 b2) a1`, Bob's
/// `a2 (a1 b1) b2`.
pub fn factorization_exchange<R: Rng + ?Sized>(
    setup: &SubgroupSetup,
    len: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<SessionOutcome> {
    setup.require_commuting()?;
    let a1 = draw(&setup.a, &len, rng)?;
    let b1 = draw(&setup.b, &len, rng)?;
    let a2 = draw(&setup.a, &len, rng)?;
    let b2 = draw(&setup.b, &len, rng)?;
    let pa = a1.mul(&b1);
    let pb = a2.mul(&b2);
    let mut t = Transcript::new("factor", setup.platform.clone());
    setup.publish(&mut t);
    t.send(Party::Alice, "msg", &pa);
    t.send(Party::Bob, "msg", &pb);
    let key_alice = b1.mul(&pb).mul(&a1);
    let key_bob = a2.mul(&pa).mul(&b2);
    Ok(SessionOutcome::new(t, key_alice, key_bob)
        .secret("a1", &a1)
        .secret("b1", &b1)
        .secret("a2", &a2)
        .secret("b2", &b2))
}

/// An endomorphism usable in the semidirect-product protocol.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Endomorphism {
    /// `x ↦ h^{-1} x h`
    Inner(Element),
    /// Generator images on a free platform.
    FreeMap(GenMap),
}

/// `φ_h(x) = h^{-1} x h`.
pub fn inner_automorphism(h: &Element) -> Result<Endomorphism> {
    if let Element::Matrix(m) = h {
        if !m.is_invertible() {
            return Err(Error::Setup("conjugating matrix is not invertible".into()));
        }
    }
    Ok(Endomorphism::Inner(h.clone()))
}

impl Endomorphism {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (Endomorphism::Inner(h), _) => Ok(x.conj(h)),
            (Endomorphism::FreeMap(m), Element::Free(w)) => {
                if m.from_gens() != w.rank() || m.to_gens() != w.rank() {
                    return Err(Error::Rank("endomorphism rank differs from the platform".into()));
                }
                Ok(Element::Free(m.apply(w)?))
            }
            (Endomorphism::FreeMap(_), _) => Err(Error::Setup("generator maps act on free platforms only".into())),
        }
    }

    pub fn apply_times(&self, x: &Element, k: u64) -> Result<Element> {
        if let Endomorphism::Inner(h) = self {
            return Ok(x.conj(&h.pow(k as i64)));
        }
        let mut cur = x.clone();
        for _ in 0..k {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// First component of `(g, φ)^m`: `φ^{m-1}(g) ⋯ φ(g) · g`.
pub fn semidirect_power(g: &Element, phi: &Endomorphism, m: u64) -> Result<Element> {
    if m == 0 {
        return Ok(g.identity_like());
    }
    let mut acc = g.clone();
    for _ in 1..m {
        acc = phi.apply(&acc)?.mul(g);
    }
    Ok(acc)
}

/// `h^{-k} (h g)^k`, the inner-automorphism closed form of
/// [`semidirect_power`].
pub fn semidirect_closed_form(g: &Element, h: &Element, k: u64) -> Element {
    h.pow(-(k as i64)).mul(&h.mul(g).pow(k as i64))
}

/// Alice sends `a = (g, φ)^m` first component, Bob `b = (g, φ)^n`; keys
/// `φ^m(b) a` and `φ^n(a) b`.
pub fn semidirect_exchange(
    platform: &Platform,
    g: &Element,
    phi: &Endomorphism,
    m: u64,
    n: u64,
) -> Result<SessionOutcome> {
    if m == 0 || n == 0 {
        return Err(Error::Setup("private exponents must be positive".into()));
    }
    let mut warnings = Vec::new();
    let mut t = Transcript::new("semidirect", platform.clone());
    t.publish("g", g);
    match phi {
        Endomorphism::Inner(h) => {
            if h.commutes_with(g) {
                let msg = "h and hg commute: the inner automorphism fixes g and the key leaks".to_string();
                log::warn!("{msg}");
                warnings.push(msg);
            }
            t.publish("h", h);
        }
        Endomorphism::FreeMap(map) => {
            for img in map.images() {
                t.publish("phi", &Element::Free(img.clone()));
            }
        }
    }
    let a = semidirect_power(g, phi, m)?;
    let b = semidirect_power(g, phi, n)?;
    t.send(Party::Alice, "first", &a);
    t.send(Party::Bob, "first", &b);
    let key_alice = phi.apply_times(&b, m)?.mul(&a);
    let key_bob = phi.apply_times(&a, n)?.mul(&b);
    let mut out = SessionOutcome::new(t, key_alice, key_bob).exponent("m", m).exponent("n", n);
    out.warnings = warnings;
    Ok(out)
}

/// Random public `g`, `h` and private exponents in `1..=max_exp`; on free
/// platforms `φ` is a random generator map with images of length 1..=2.
pub fn semidirect_session<R: Rng + ?Sized>(platform: &Platform, max_exp: u64, rng: &mut R) -> Result<SessionOutcome> {
    let g = platform.random_element(rng)?;
    let phi = match *platform {
        Platform::Free { rank } => {
            let images = (0..rank).map(|_| random_reduced_word(rank, rng.gen_range(1..=2), rng)).collect();
            Endomorphism::FreeMap(GenMap::new(rank, images)?)
        }
        _ => inner_automorphism(&platform.random_element(rng)?)?,
    };
    let m = rng.gen_range(1..=max_exp.max(1));
    let n = rng.gen_range(1..=max_exp.max(1));
    semidirect_exchange(platform, &g, &phi, m, n)
}

/// Protocol selector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Protocol {
    Dh,
    ElGamal,
    KoLee,
    Aag,
    Decomposition,
    Twisted,
    Centralizer,
    Commutative,
    Factorization,
    Semidirect,
}

impl Protocol {
    pub const ALL: [Protocol; 10] = [
        Protocol::Dh,
        Protocol::ElGamal,
        Protocol::KoLee,
        Protocol::Aag,
        Protocol::Decomposition,
        Protocol::Twisted,
        Protocol::Centralizer,
        Protocol::Commutative,
        Protocol::Factorization,
        Protocol::Semidirect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Dh => "dh",
            Protocol::ElGamal => "elgamal",
            Protocol::KoLee => "ko-lee",
            Protocol::Aag => "aag",
            Protocol::Decomposition => "decomp",
            Protocol::Twisted => "twisted",
            Protocol::Centralizer => "centralizer",
            Protocol::Commutative => "commutative",
            Protocol::Factorization => "factor",
            Protocol::Semidirect => "semidirect",
        }
    }

    /// Desk-scale default platform.
    pub fn default_platform(self) -> Platform {
        match self {
            Protocol::Dh | Protocol::ElGamal => Platform::Cyclic { p: 23, g: 5, order: 22 },
            Protocol::Aag => Platform::Free { rank: 4 },
            Protocol::Semidirect => Platform::Matrix { n: 3, p: 1009 },
            _ => Platform::Matrix { n: 4, p: 5 },
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::Parse(format!("unknown protocol `{s}`")))
    }
}

/// Session knobs shared by [`run_session`].
#[derive(Clone, Debug)]
pub struct SessionParams {
    pub expr_len: RangeInclusive<usize>,
    pub subgroup_gens: usize,
    pub centralizer_gens: usize,
    pub semidirect_max_exp: u64,
}

impl Default for SessionParams {
    fn default() -> Self {
        Self { expr_len: DEFAULT_EXPR_LEN, subgroup_gens: 3, centralizer_gens: 3, semidirect_max_exp: 50 }
    }
}

/// Runs one session of `protocol` on `platform`, drawing the public setup
/// from the same stream.
pub fn run_session<R: Rng + ?Sized>(
    protocol: Protocol,
    platform: &Platform,
    params: &SessionParams,
    rng: &mut R,
) -> Result<SessionOutcome> {
    let len = params.expr_len.clone();
    match protocol {
        Protocol::Dh => dh_exchange(platform, rng),
        Protocol::ElGamal => elgamal_session(platform, rng),
        Protocol::KoLee => ko_lee_exchange(&commuting_setup(platform, params.subgroup_gens, rng)?, len, rng),
        Protocol::Aag => aag_exchange(&aag_setup(platform, rng)?, len, rng),
        Protocol::Decomposition => {
            decomposition_exchange(&commuting_setup(platform, params.subgroup_gens, rng)?, len, rng)
        }
        Protocol::Twisted => twisted_exchange(&commuting_setup(platform, params.subgroup_gens, rng)?, len, rng),
        Protocol::Centralizer => centralizer_exchange(platform, params.centralizer_gens, len, rng),
        Protocol::Commutative => {
            commutative_subgroups_exchange(&commutative_setup(platform, params.subgroup_gens, rng)?, len, rng)
        }
        Protocol::Factorization => {
            factorization_exchange(&commuting_setup(platform, params.subgroup_gens, rng)?, len, rng)
        }
        Protocol::Semidirect => semidirect_session(platform, params.semidirect_max_exp, rng),
    }
}
