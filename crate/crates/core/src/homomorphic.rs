//! Public-key encryption through a secret isomorphism `φ: G → H`.
//!
//! Bob maps his plaintext word through the public `φ` and scrambles the
//! result inside `Ĥ` (the presentation `H` with some relators dropped).
//! Alice maps back with the private `φ⁻¹` and canonicalizes by evaluating
//! in a permutation representation of `G`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::keyfile::{section, split_sections, write_section};
use crate::platform::Perm;
use crate::tietze::{break_relators, extend_random, ChainConfig, GenMap, Move, Presentation, TietzeChain};
use crate::word::{random_reduced_word, Letter, Word};

/// Permutation images of the generators of a presentation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermImages {
    images: Vec<Perm>,
}

impl PermImages {
    pub fn new(images: Vec<Perm>) -> Result<Self> {
        let Some(first) = images.first() else {
            return Err(Error::Keygen("no generator images".into()));
        };
        if images.iter().any(|p| p.degree() != first.degree()) {
            return Err(Error::Keygen("generator images have different degrees".into()));
        }
        Ok(Self { images })
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images[0].degree()
    }

    /// Evaluates a word; products compose left to right.
    pub fn eval(&self, w: &Word) -> Result<Perm> {
        if w.max_generator() > self.images.len() {
            return Err(Error::Rank(format!("word {w} uses generators beyond x{}", self.images.len())));
        }
        let mut acc = Perm::identity(self.degree());
        for &l in w.letters() {
            let p = &self.images[l.unsigned_abs() as usize - 1];
            acc = if l > 0 { acc.compose(p) } else { acc.compose(&p.inverse()) };
        }
        Ok(acc)
    }

    /// Whether every relator evaluates to the identity.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        p.n_gens() == self.images.len() && p.relators().iter().all(|r| self.eval(r).is_ok_and(|x| x.is_identity()))
    }

    /// One `image: <one-line notation>` line per generator.
    pub fn to_text(&self) -> String {
        self.images.iter().map(|p| format!("image: {p}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let images = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                let body =
                    l.strip_prefix("image:").ok_or_else(|| Error::Parse(format!("expected `image:`, got `{l}`")))?;
                Perm::parse(body)
            })
            .collect::<Result<Vec<_>>>()?;
        PermImages::new(images).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `A_5 = ⟨a, b | a², b³, (ab)⁵⟩`.
pub fn a5_presentation() -> Presentation {
    let w = |l: &[Letter]| Word::new(2, l.to_vec()).expect("valid");
    Presentation::new(2, vec![w(&[1, 1]), w(&[2, 2, 2]), w(&[1, 2, 1, 2, 1, 2, 1, 2, 1, 2])]).expect("valid")
}

/// `a = (1 2)(3 4)`, `b = (1 3 5)`; `ab = (1 2 3 4 5)`.
pub fn a5_images() -> PermImages {
    let a = Perm::from_cycles(5, &[&[1, 2], &[3, 4]]).expect("valid");
    let b = Perm::from_cycles(5, &[&[1, 3, 5]]).expect("valid");
    PermImages::new(vec![a, b]).expect("valid")
}

/// Images of `⟨x1,x2,x3 | x1²x2³, x1x2²x1⁻¹x3⟩` in `A_5`: `x1 ↦ a`, `x2 ↦ b`,
/// `x3 ↦ a b⁻² a⁻¹`. This group is infinite, so the map is a homomorphism
/// rather than a faithful representation.
pub fn example_images() -> PermImages {
    let a5 = a5_images();
    let (a, b) = (a5.images()[0].clone(), a5.images()[1].clone());
    let b_inv = b.inverse();
    let x3 = a.compose(&b_inv).compose(&b_inv).compose(&a.inverse());
    PermImages::new(vec![a, b, x3]).expect("valid")
}

/// Key pair of the worked example: the scripted chain on
/// [`example_presentation`](crate::tietze::example_presentation) with the
/// last relator `x1x5⁻¹x3` withheld from `Ĥ`.
pub fn example_keys() -> HomKeyPair {
    let chain = TietzeChain::replay(&crate::tietze::example_presentation(), &crate::tietze::example_chain_moves())
        .expect("scripted chain is valid");
    keypair_from_chain(chain, example_images(), &[4]).expect("valid")
}

/// Scripted scrambling of `φ(x1x2) = x5x2` in the example `Ĥ`, ending at
/// `x5²x4⁻¹x5x4x2x6⁻¹x2`.
pub fn example_randomize_script() -> Vec<RandomizeMove> {
    vec![
        RandomizeMove::InsertTrivial { pos: 0, h: Word::from_parts(6, vec![4]) },
        RandomizeMove::Substitute { pos: 0, relator: 2, occurrence: 0 },
        RandomizeMove::InsertTrivial { pos: 4, h: Word::from_parts(6, vec![6]) },
        RandomizeMove::Substitute { pos: 4, relator: 0, occurrence: 0 },
    ]
}

/// Applies a recorded script of moves.
pub fn apply_randomize_script(w: &Word, pres: &Presentation, script: &[RandomizeMove]) -> Result<Word> {
    script.iter().try_fold(w.with_rank(pres.n_gens())?, |cur, mv| apply_randomize_move(&cur, pres, mv))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPublicKey {
    pub phi: GenMap,
    pub g: Presentation,
    pub h_hat: Presentation,
    pub images: PermImages,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPrivateKey {
    pub phi_inv: GenMap,
    pub h: Presentation,
    pub chain: TietzeChain,
    /// Relator indices of `H` left out of `Ĥ`, ascending.
    pub discarded: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomKeyPair {
    pub public: HomPublicKey,
    pub private: HomPrivateKey,
}

/// Knobs for [`hom_keygen`].
#[derive(Clone, Debug)]
pub struct HomConfig {
    /// Relator-breaking length; `None` skips the breaking stage.
    pub break_len: Option<usize>,
    pub chain: ChainConfig,
    pub discard_count: usize,
}

impl Default for HomConfig {
    fn default() -> Self {
        Self { break_len: Some(3), chain: ChainConfig::default(), discard_count: 1 }
    }
}

/// Assembles a key pair from an already built chain.
pub fn keypair_from_chain(chain: TietzeChain, images: PermImages, discarded: &[usize]) -> Result<HomKeyPair> {
    let g = chain.start().clone();
    if !images.satisfies(&g) {
        return Err(Error::Keygen("generator images do not satisfy every relator of G".into()));
    }
    let h = chain.end().clone();
    let mut discarded = discarded.to_vec();
    discarded.sort_unstable();
    discarded.dedup();
    if discarded.iter().any(|&i| i >= h.relators().len()) {
        return Err(Error::Keygen("discarded relator index out of range".into()));
    }
    if discarded.len() >= h.relators().len() && !h.relators().is_empty() {
        return Err(Error::Keygen("cannot discard every relator of H".into()));
    }
    let keep: Vec<usize> = (0..h.relators().len()).filter(|i| !discarded.contains(i)).collect();
    let h_hat = if keep.is_empty() { h.clone() } else { h.discard_relators(&keep)? };
    Ok(HomKeyPair {
        public: HomPublicKey { phi: chain.phi().clone(), g, h_hat, images },
        private: HomPrivateKey { phi_inv: chain.phi_inv().clone(), h, chain, discarded },
    })
}

/// Builds `H` by breaking the relators of `G` and applying random moves,
/// then drops `discard_count` random relators to publish `Ĥ`.
pub fn hom_keygen<R: Rng + ?Sized>(
    g: &Presentation,
    images: PermImages,
    cfg: &HomConfig,
    rng: &mut R,
) -> Result<HomKeyPair> {
    if !images.satisfies(g) {
        return Err(Error::Keygen("generator images do not satisfy every relator of G".into()));
    }
    let mut chain = match cfg.break_len {
        Some(len) => break_relators(g, len)?,
        None => TietzeChain::new(g.clone()),
    };
    extend_random(&mut chain, &cfg.chain, rng)?;
    let n_rel = chain.end().relators().len();
    if cfg.discard_count > 0 && cfg.discard_count >= n_rel {
        return Err(Error::Keygen(format!("cannot discard {} of {n_rel} relators", cfg.discard_count)));
    }
    let discarded = rand::seq::index::sample(rng, n_rel, cfg.discard_count).into_vec();
    keypair_from_chain(chain, images, &discarded)
}

/// One scrambling step inside a presentation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RandomizeMove {
    /// Insert `h h⁻¹` in front of position `pos`.
    InsertTrivial { pos: usize, h: Word },
    /// Insert `g⁻¹ r^{±1} g` in front of position `pos`.
    InsertRelator { pos: usize, relator: usize, conj: Word, inverse: bool },
    /// Replace the letter at `pos` by the rest of a relator rotation that
    /// starts with it: if `ℓ v` is a rotation of `r^{±1}` then `ℓ = v⁻¹`.
    /// `occurrence` counts matches in `r` first, then in `r⁻¹`.
    Substitute { pos: usize, relator: usize, occurrence: usize },
}

fn substitutions(letter: Letter, r: &Word) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for rel in [r.letters().to_vec(), r.invert().into_letters()] {
        for q in 0..rel.len() {
            if rel[q] == letter {
                let rest: Vec<Letter> = rel[q + 1..].iter().chain(&rel[..q]).copied().collect();
                out.push(rest.iter().rev().map(|x| -x).collect());
            }
        }
    }
    out
}

/// Applies one move; the result is not reduced.
pub fn apply_randomize_move(w: &Word, pres: &Presentation, mv: &RandomizeMove) -> Result<Word> {
    let n = pres.n_gens();
    let w =
        if w.max_generator() <= n { w.with_rank(n)? } else { return Err(Error::Rank(format!("{w} exceeds x{n}"))) };
    match mv {
        RandomizeMove::InsertTrivial { pos, h } => {
            let h = h.with_rank(n)?;
            w.insert_at(*pos, &h.concat(&h.formal_inverse())?)
        }
        RandomizeMove::InsertRelator { pos, relator, conj, inverse } => {
            let r = pres.relator(*relator)?;
            let r = if *inverse { r.formal_inverse() } else { r.clone() };
            let g = conj.with_rank(n)?;
            w.insert_at(*pos, &g.formal_inverse().concat(&r)?.concat(&g)?)
        }
        RandomizeMove::Substitute { pos, relator, occurrence } => {
            let letter = *w
                .letters()
                .get(*pos)
                .ok_or_else(|| Error::Range(format!("position {pos} beyond word length {}", w.len())))?;
            let options = substitutions(letter, pres.relator(*relator)?);
            let repl = options
                .get(*occurrence)
                .ok_or_else(|| Error::Range(format!("relator {relator} has no occurrence {occurrence} of {letter}")))?;
            let mut letters = w.letters()[..*pos].to_vec();
            letters.extend_from_slice(repl);
            letters.extend_from_slice(&w.letters()[pos + 1..]);
            Word::new(n, letters)
        }
    }
}

/// Draws a random move for the current word.
pub fn random_randomize_move<R: Rng + ?Sized>(w: &Word, pres: &Presentation, rng: &mut R) -> RandomizeMove {
    let n = pres.n_gens();
    let k = pres.relators().len();
    let pos = rng.gen_range(0..=w.len());
    let kind = if k == 0 { 0 } else { rng.gen_range(0..3) };
    if kind == 2 && !w.is_empty() {
        // scan positions left to right from a random offset for a substitutable letter
        let start = rng.gen_range(0..w.len());
        let r = rng.gen_range(0..k);
        for off in 0..w.len() {
            let p = (start + off) % w.len();
            let count = substitutions(w.letters()[p], &pres.relators()[r]).len();
            if count > 0 {
                return RandomizeMove::Substitute { pos: p, relator: r, occurrence: rng.gen_range(0..count) };
            }
        }
    }
    if kind >= 1 {
        let conj_len = rng.gen_range(0..=2);
        return RandomizeMove::InsertRelator {
            pos,
            relator: rng.gen_range(0..k),
            conj: random_reduced_word(n, conj_len, rng),
            inverse: rng.gen_bool(0.5),
        };
    }
    let h_len = rng.gen_range(1..=2);
    RandomizeMove::InsertTrivial { pos, h: random_reduced_word(n, h_len, rng) }
}

/// Applies `steps` random moves and returns the word with the move record.
pub fn randomize_word_recorded<R: Rng + ?Sized>(
    w: &Word,
    pres: &Presentation,
    steps: usize,
    rng: &mut R,
) -> Result<(Word, Vec<RandomizeMove>)> {
    let mut cur = w.with_rank(pres.n_gens())?;
    let mut moves = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mv = random_randomize_move(&cur, pres, rng);
        cur = apply_randomize_move(&cur, pres, &mv)?;
        moves.push(mv);
    }
    Ok((cur, moves))
}

/// A word equal to `w` in the group presented by `pres`.
pub fn randomize_word<R: Rng + ?Sized>(w: &Word, pres: &Presentation, steps: usize, rng: &mut R) -> Result<Word> {
    randomize_word_recorded(w, pres, steps, rng).map(|(w, _)| w)
}

/// `φ(w_g)` scrambled by `steps` moves inside `Ĥ`.
pub fn hom_encrypt<R: Rng + ?Sized>(pk: &HomPublicKey, w_g: &Word, steps: usize, rng: &mut R) -> Result<Word> {
    if w_g.max_generator() > pk.g.n_gens() {
        return Err(Error::Rank(format!("plaintext {w_g} is not over the generators of G")));
    }
    let image = pk.phi.apply(w_g)?;
    randomize_word(&image, &pk.h_hat, steps, rng)
}

/// `φ⁻¹(ct)` as a word over the generators of `G`.
pub fn hom_decrypt_word(sk: &HomPrivateKey, ct: &Word) -> Result<Word> {
    if ct.max_generator() > sk.h.n_gens() {
        return Err(Error::Rank(format!("ciphertext {ct} is not over the generators of H")));
    }
    sk.phi_inv.apply(ct)
}

/// Canonical plaintext: the permutation of `φ⁻¹(ct)`.
pub fn hom_decrypt(keys: &HomKeyPair, ct: &Word) -> Result<Perm> {
    keys.public.images.eval(&hom_decrypt_word(&keys.private, ct)?)
}

/// Generators of `Ĥ` that no `φ(x_i)` mentions. A nonempty answer is a hint
/// (not a proof) that `φ` may fail to be onto.
pub fn unmentioned_generators(pk: &HomPublicKey) -> Vec<usize> {
    (1..=pk.h_hat.n_gens()).filter(|&g| pk.phi.images().iter().all(|w| !w.mentions(g))).collect()
}

impl HomPublicKey {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_section(&mut out, "G", &self.g.to_text());
        write_section(&mut out, "H_hat", &self.h_hat.to_text());
        write_section(&mut out, "phi", &self.phi.to_text());
        write_section(&mut out, "images", &self.images.to_text());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s = split_sections(text)?;
        let g: Presentation = section(&s, "G")?.parse()?;
        let h_hat: Presentation = section(&s, "H_hat")?.parse()?;
        let phi = GenMap::parse(section(&s, "phi")?, h_hat.n_gens())?;
        let images = PermImages::parse(section(&s, "images")?)?;
        if phi.from_gens() != g.n_gens() || images.images().len() != g.n_gens() {
            return Err(Error::Parse("public key blocks disagree on the generators of G".into()));
        }
        Ok(Self { phi, g, h_hat, images })
    }
}

impl HomPrivateKey {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_section(&mut out, "H", &self.h.to_text());
        write_section(&mut out, "phi_inv", &self.phi_inv.to_text());
        write_section(&mut out, "start", &self.chain.start().to_text());
        write_section(&mut out, "chain", &self.chain.moves_text());
        let d: Vec<String> = self.discarded.iter().map(|i| (i + 1).to_string()).collect();
        write_section(
            &mut out,
            "discarded",
            &format!("relators: {}\n", if d.is_empty() { "-".into() } else { d.join(" ") }),
        );
        out
    }

    /// Parses and replays the chain; the replay must reproduce `H` and `φ⁻¹`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = split_sections(text)?;
        let h: Presentation = section(&s, "H")?.parse()?;
        let start: Presentation = section(&s, "start")?.parse()?;
        let moves: Vec<Move> = TietzeChain::parse_moves(section(&s, "chain")?)?;
        let chain = TietzeChain::replay(&start, &moves)?;
        let phi_inv = GenMap::parse(section(&s, "phi_inv")?, start.n_gens())?;
        if chain.end() != &h || chain.phi_inv() != &phi_inv {
            return Err(Error::Parse("private key chain does not replay to the stored H and phi_inv".into()));
        }
        let d = section(&s, "discarded")?.trim();
        let d = d.strip_prefix("relators:").ok_or_else(|| Error::Parse("bad [discarded] block".into()))?.trim();
        let discarded = if d == "-" {
            Vec::new()
        } else {
            d.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .and_then(|i| i.checked_sub(1))
                        .ok_or_else(|| Error::Parse(format!("bad index `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self { phi_inv, h, chain, discarded })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::tietze::{example_chain_moves, example_presentation};

    fn w(rank: usize, l: &[Letter]) -> Word {
        Word::new(rank, l.to_vec()).unwrap()
    }

    #[test]
    fn a5_images_satisfy_relators() {
        let imgs = a5_images();
        assert!(imgs.satisfies(&a5_presentation()));
        assert_eq!(imgs.eval(&w(2, &[1, 2])).unwrap().order(), 5);
        assert!(example_images().satisfies(&example_presentation()));
    }

    #[test]
    fn bad_images_rejected() {
        let imgs = PermImages::new(vec![Perm::from_cycles(5, &[&[1, 2, 3]]).unwrap(), a5_images().images()[1].clone()])
            .unwrap();
        let err = hom_keygen(&a5_presentation(), imgs, &HomConfig::default(), &mut seeded(1)).unwrap_err();
        assert!(matches!(err, Error::Keygen(_)));
    }

    #[test]
    fn trivial_keygen_is_identity() {
        let cfg =
            HomConfig { break_len: None, chain: ChainConfig { moves: 0, ..ChainConfig::default() }, discard_count: 0 };
        let keys = hom_keygen(&a5_presentation(), a5_images(), &cfg, &mut seeded(3)).unwrap();
        assert!(keys.public.phi.is_identity());
        assert_eq!(keys.public.h_hat, a5_presentation());
    }

    #[test]
    fn example_substitutions() {
        let keys = keypair_from_chain(
            TietzeChain::replay(&example_presentation(), &example_chain_moves()).unwrap(),
            example_images(),
            &[4],
        )
        .unwrap();
        let h_hat = &keys.public.h_hat;
        assert_eq!(substitutions(4, &h_hat.relators()[2]), vec![vec![5, 5]]);
        assert_eq!(substitutions(6, &h_hat.relators()[0])[0], vec![4, 2]);
    }

    #[test]
    fn example_script_ciphertext() {
        let keys = example_keys();
        let m = w(3, &[1, 2]);
        let image = keys.public.phi.apply(&m).unwrap();
        assert_eq!(image.to_string(), "5,2");
        let ct = apply_randomize_script(&image, &keys.public.h_hat, &example_randomize_script()).unwrap();
        assert_eq!(ct.to_string(), "5,5,-4,5,4,2,-6,2");
        assert_eq!(hom_decrypt_word(&keys.private, &ct).unwrap(), m);
    }

    #[test]
    fn keys_text_roundtrip() {
        let keys = hom_keygen(&a5_presentation(), a5_images(), &HomConfig::default(), &mut seeded(8)).unwrap();
        assert_eq!(HomPublicKey::parse(&keys.public.to_text()).unwrap(), keys.public);
        assert_eq!(HomPrivateKey::parse(&keys.private.to_text()).unwrap(), keys.private);
    }

    #[test]
    fn encrypt_decrypt_roundtrip() {
        let mut rng = seeded(12);
        let keys = hom_keygen(&a5_presentation(), a5_images(), &HomConfig::default(), &mut rng).unwrap();
        for _ in 0..50 {
            let len = rng.gen_range(0..10);
            let m = crate::word::random_word(2, len..=len, &mut rng).unwrap();
            let ct = hom_encrypt(&keys.public, &m, 6, &mut rng).unwrap();
            assert_eq!(hom_decrypt(&keys, &ct).unwrap(), a5_images().eval(&m).unwrap());
        }
    }
}
