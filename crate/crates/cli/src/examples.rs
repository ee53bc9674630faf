//! Golden replay of the scripted chain, relator breaking and encryption.

use anyhow::Result;
use gtc_core::homomorphic::{apply_randomize_script, example_keys, example_randomize_script, hom_decrypt_word};
use gtc_core::tietze::{break_relators, example_chain_moves, example_presentation, GenMap, TietzeChain};
use gtc_core::Word;

const PHI: [&str; 3] = ["5", "2", "3"];
const PHI_INV: [&str; 6] = ["1,2,2", "2", "3", "1,1", "1", "1,1,2"];
const H_RELATORS: [&str; 5] = ["-6,4,2", "-1,5,2,2", "-4,5,5", "6,2,2", "1,-5,3"];
const PLAINTEXT: &str = "1,2";
const CIPHERTEXT: &str = "5,5,-4,5,4,2,-6,2";
const BROKEN_LENGTHS: [usize; 5] = [3, 3, 3, 3, 4];

fn images(m: &GenMap) -> Vec<String> {
    m.images().iter().map(Word::to_string).collect()
}

struct Checker {
    mismatches: usize,
}

impl Checker {
    fn check(&mut self, name: &str, expected: &[String], got: &[String]) {
        if expected == got {
            println!("{name}: ok");
        } else {
            self.mismatches += 1;
            println!("{name}: MISMATCH");
            println!("  expected: {}", expected.join(" | "));
            println!("  got:      {}", got.join(" | "));
        }
    }
}

fn owned<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

pub fn run() -> Result<u8> {
    let mut c = Checker { mismatches: 0 };
    let g = example_presentation();
    println!("G: {g}");

    let chain = TietzeChain::replay(&g, &example_chain_moves())?;
    print!("{}", chain.phi().to_text().replace("map:", "phi:"));
    print!("{}", chain.phi_inv().to_text().replace("map:", "phi_inv:"));
    println!("H: {}", chain.end());
    c.check("phi", &owned(&PHI), &images(chain.phi()));
    c.check("phi_inv", &owned(&PHI_INV), &images(chain.phi_inv()));
    c.check("H relators", &owned(&H_RELATORS), &owned(chain.end().relators()));

    let broken = break_relators(&g, 3)?;
    let h = broken.end();
    let mut lens: Vec<usize> = h.relators().iter().map(Word::len).collect();
    lens.sort_unstable();
    println!("broken: {h}");
    c.check("broken generators", &["6".into()], &[h.n_gens().to_string()]);
    c.check("broken relator lengths", &owned(&BROKEN_LENGTHS), &owned(&lens));
    let within = h.total_length() <= 2 * g.total_length();
    c.check("broken total length at most doubled", &["true".into()], &[within.to_string()]);

    let keys = example_keys();
    let m = Word::parse(PLAINTEXT, g.n_gens())?;
    let image = keys.public.phi.apply(&m)?;
    let ct = apply_randomize_script(&image, &keys.public.h_hat, &example_randomize_script())?;
    println!("plaintext: {m}");
    println!("phi(plaintext): {image}");
    println!("ciphertext: {ct}");
    c.check("ciphertext", &[CIPHERTEXT.into()], &[ct.to_string()]);
    let back = hom_decrypt_word(&keys.private, &ct)?;
    println!("decrypted: {back}");
    c.check("decrypted", &[PLAINTEXT.into()], &[back.to_string()]);

    if c.mismatches == 0 {
        println!("all golden values match");
        Ok(0)
    } else {
        println!("{} golden mismatches", c.mismatches);
        Ok(1)
    }
}
