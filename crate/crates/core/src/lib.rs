//! Group-based key exchange over concrete platform groups, public-key
//! encryption disguised by Tietze transformations, and brute-force attacks
//! against both.

pub mod attacks;
pub mod error;
pub mod homomorphic;
pub mod keyfile;
pub mod platform;
pub mod problems;
pub mod protocols;
pub mod rng;
pub mod search;
pub mod tietze;
pub mod transcript;
pub mod word;
pub mod wordenc;

pub use error::{Error, Result};
pub use platform::{Element, Platform, SubgroupGens};
pub use word::Word;
