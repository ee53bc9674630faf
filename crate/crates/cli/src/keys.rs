//! Key, ciphertext and decryption commands for the two encryption schemes.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Subcommand, ValueEnum};
use gtc_core::homomorphic::{
    a5_images, a5_presentation, example_images, example_keys, hom_decrypt, hom_decrypt_word, hom_encrypt, hom_keygen,
    HomConfig, HomKeyPair, HomPrivateKey, HomPublicKey,
};
use gtc_core::rng::seeded;
use gtc_core::tietze::{example_presentation, ChainConfig};
use gtc_core::wordenc::{
    eve_emulation_attack, ground_truth_oracle, trick_treat_decrypt, trick_treat_encrypt, trick_treat_keygen,
    BitCiphertext, TrickPrivate, TrickPublic,
};
use gtc_core::Word;

use crate::{emit, read, SeedArg};

#[derive(Subcommand)]
pub enum WpCommand {
    /// Disguise a trivial and a free group and publish both presentations
    Keygen {
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        chain_len: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        private: PathBuf,
    },
    /// Encrypt one bit as a pair of words
    Encrypt {
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        bit: u8,
        #[arg(long, default_value_t = 16)]
        min_len: usize,
        #[arg(long, default_value_t = 32)]
        max_len: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Decrypt {
        #[arg(long)]
        private: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
    },
    /// Encryption emulation with a ground-truth word-problem oracle
    Attack {
        #[arg(long)]
        private: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
}

pub fn wp_encrypt(cmd: WpCommand) -> Result<u8> {
    match cmd {
        WpCommand::Keygen { rank, chain_len, seed, public, private } => {
            let (pk, sk) = trick_treat_keygen(rank, chain_len, &mut seeded(seed.seed))?;
            emit(Some(&public), &pk.to_text())?;
            emit(Some(&private), &sk.to_text())?;
            println!("rank={rank} chain_len={chain_len} seed={}", seed.seed);
        }
        WpCommand::Encrypt { public, bit, min_len, max_len, seed, out } => {
            if min_len > max_len {
                bail!("min-len exceeds max-len");
            }
            let pk = TrickPublic::parse(&read(&public)?)?;
            let ct = trick_treat_encrypt(bit, &pk, min_len..=max_len, &mut seeded(seed.seed))?;
            emit(out.as_deref(), &ct.to_text())?;
        }
        WpCommand::Decrypt { private, ciphertext } => {
            let sk = TrickPrivate::parse(&read(&private)?)?;
            let ct = BitCiphertext::parse(&read(&ciphertext)?, &sk.public())?;
            println!("bit: {}", trick_treat_decrypt(&ct, &sk)?);
        }
        WpCommand::Attack { private, ciphertext, seed } => {
            let sk = TrickPrivate::parse(&read(&private)?)?;
            let ct = BitCiphertext::parse(&read(&ciphertext)?, &sk.public())?;
            let (guess, case) = eve_emulation_attack(&ct, ground_truth_oracle(&sk), &mut seeded(seed.seed))?;
            println!("guess: {guess}\ncase: {case:?}");
        }
    }
    Ok(0)
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HomGroup {
    /// A5 with its faithful degree-5 representation
    A5,
    /// The three-generator example group, random chain
    Example,
    /// The fixed example key pair
    Scripted,
}

#[derive(Subcommand)]
pub enum HomCommand {
    Keygen {
        #[arg(long, value_enum, default_value = "a5")]
        group: HomGroup,
        /// Relator-breaking length; 0 skips breaking
        #[arg(long, default_value_t = 3)]
        break_len: usize,
        #[arg(long, default_value_t = 9)]
        chain_len: usize,
        #[arg(long, default_value_t = 1)]
        discard: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        private: PathBuf,
    },
    Encrypt {
        #[arg(long)]
        public: PathBuf,
        /// Plaintext word over the generators of G
        #[arg(long, allow_hyphen_values = true)]
        plaintext: String,
        /// Scrambling moves
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Decrypt {
        #[arg(long)]
        public: PathBuf,
        #[arg(long)]
        private: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
    },
}

pub fn hom(cmd: HomCommand) -> Result<u8> {
    match cmd {
        HomCommand::Keygen { group, break_len, chain_len, discard, seed, public, private } => {
            let keys = match group {
                HomGroup::Scripted => example_keys(),
                HomGroup::A5 | HomGroup::Example => {
                    let (g, images) = match group {
                        HomGroup::A5 => (a5_presentation(), a5_images()),
                        _ => (example_presentation(), example_images()),
                    };
                    let cfg = HomConfig {
                        break_len: (break_len > 0).then_some(break_len),
                        chain: ChainConfig { moves: chain_len, ..ChainConfig::default() },
                        discard_count: discard,
                    };
                    hom_keygen(&g, images, &cfg, &mut seeded(seed.seed))?
                }
            };
            emit(Some(&public), &keys.public.to_text())?;
            emit(Some(&private), &keys.private.to_text())?;
            println!("G: {}\nH_hat: {}", keys.public.g, keys.public.h_hat);
        }
        HomCommand::Encrypt { public, plaintext, steps, seed, out } => {
            let pk = HomPublicKey::parse(&read(&public)?)?;
            let m = Word::parse(&plaintext, pk.g.n_gens())?;
            let ct = hom_encrypt(&pk, &m, steps, &mut seeded(seed.seed))?;
            emit(out.as_deref(), &format!("{ct}\n"))?;
        }
        HomCommand::Decrypt { public, private, ciphertext } => {
            let pk = HomPublicKey::parse(&read(&public)?)?;
            let sk = HomPrivateKey::parse(&read(&private)?)?;
            let text = read(&ciphertext)?;
            let ct = Word::parse(text.trim(), sk.h.n_gens())?;
            let keys = HomKeyPair { public: pk, private: sk };
            println!("word: {}", hom_decrypt_word(&keys.private, &ct)?);
            println!("permutation: {}", hom_decrypt(&keys, &ct)?);
        }
    }
    Ok(0)
}
