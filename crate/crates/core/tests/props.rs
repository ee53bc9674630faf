use gtc_core::platform::{square_and_multiply, Platform};
use gtc_core::rng::trial_stream;
use gtc_core::tietze::{random_chain, ChainConfig, Presentation, TietzeChain};
use gtc_core::word::random_word;
use gtc_core::Word;
use proptest::prelude::*;

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let r = rank as i32;
    proptest::collection::vec((1..=r, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }), 0..=max_len)
}

fn platforms() -> Vec<Platform> {
    vec![
        Platform::free(3).unwrap(),
        Platform::direct_product(2, 3).unwrap(),
        Platform::cyclic(1009, 11).unwrap(),
        Platform::permutation(6).unwrap(),
        Platform::matrix(3, 7).unwrap(),
    ]
}

proptest! {
    #[test]
    fn free_reduction_is_idempotent_and_reduced(l in letters(3, 20)) {
        let w = Word::new(3, l).unwrap();
        let r = w.free_reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(r.len() % 2, w.len() % 2);
    }

    #[test]
    fn word_group_axioms(a in letters(3, 10), b in letters(3, 10), c in letters(3, 10)) {
        let (a, b, c) = (Word::new(3, a).unwrap(), Word::new(3, b).unwrap(), Word::new(3, c).unwrap());
        let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.multiply(&a.invert()).unwrap().is_empty());
        prop_assert_eq!(a.invert().invert(), a.free_reduce());
        prop_assert_eq!(a.multiply(&Word::identity(3)).unwrap(), a.free_reduce());
    }

    #[test]
    fn word_text_roundtrip(l in letters(4, 15)) {
        let w = Word::new(4, l).unwrap();
        prop_assert_eq!(Word::parse(&w.to_string(), 4).unwrap(), w);
    }

    #[test]
    fn platform_group_axioms(seed in 0u64..10_000, which in 0usize..5) {
        let pf = platforms().swap_remove(which);
        let mut rng = trial_stream(60, seed);
        let a = pf.random_element(&mut rng).unwrap();
        let b = pf.random_element(&mut rng).unwrap();
        let c = pf.random_element(&mut rng).unwrap();
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_identity());
        prop_assert!(a.inv().mul(&a).is_identity());
        prop_assert_eq!(a.mul(&pf.identity()), a.clone());
        prop_assert_eq!(pf.parse_element(&a.to_text()).unwrap(), a.clone());
        prop_assert!(pf.owns(&a));
    }

    #[test]
    fn fast_powers_match_naive(seed in 0u64..1000, n in 0u64..70, which in 0usize..5) {
        let pf = platforms().swap_remove(which);
        let mut rng = trial_stream(61, seed);
        let g = pf.random_element(&mut rng).unwrap();
        let (fast, mults) = square_and_multiply(&g, n);
        prop_assert_eq!(fast, g.pow_naive(n));
        let bits = 64 - n.leading_zeros() as usize;
        prop_assert!(mults <= 2 * bits);
    }

    #[test]
    fn chains_replay_and_invert(seed in 0u64..500, moves in 0usize..15) {
        let mut rng = trial_stream(62, seed);
        let start = Presentation::new(2, vec![Word::parse("1,1,2,-1", 2).unwrap()]).unwrap();
        let cfg = ChainConfig { moves, ..ChainConfig::default() };
        let chain = random_chain(&start, &cfg, &mut rng).unwrap();
        prop_assert_eq!(TietzeChain::replay(&start, chain.moves()).unwrap(), chain.clone());
        let parsed = TietzeChain::parse_moves(&chain.moves_text()).unwrap();
        prop_assert_eq!(TietzeChain::replay(&start, &parsed).unwrap(), chain.clone());
        // on a free G, φ⁻¹ ∘ φ is the identity on reduced words
        let free = Presentation::free(2).unwrap();
        let fchain = random_chain(&free, &cfg, &mut rng).unwrap();
        for _ in 0..5 {
            let w = random_word(2, 0..=8, &mut rng).unwrap();
            let back = fchain.phi_inv().apply(&fchain.phi().apply(&w).unwrap()).unwrap();
            prop_assert_eq!(back, w.free_reduce());
        }
    }
}
