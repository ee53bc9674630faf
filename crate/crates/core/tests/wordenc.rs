use gtc_core::rng::seeded;
use gtc_core::wordenc::{
    algorithm1, decryption_error_rate, eve_emulation_attack, ground_truth_oracle, run_trials, trick_treat_decrypt,
    trick_treat_encrypt, trick_treat_keygen, EveCase, TrialConfig,
};

#[test]
fn legitimate_decryption_roundtrip() {
    let mut rng = seeded(70);
    for _ in 0..40 {
        let (public, private) = trick_treat_keygen(3, 6, &mut rng).unwrap();
        assert_eq!(public.gamma1.n_gens(), public.gamma2.n_gens());
        for bit in [0u8, 1] {
            let ct = trick_treat_encrypt(bit, &public, 16..=32, &mut rng).unwrap();
            let got = trick_treat_decrypt(&ct, &private).unwrap();
            // bit 1 pairs a random word of the infinite group with one that is
            // trivial there: decryption can err only on bit 0
            if bit == 1 {
                assert_eq!(got, 1);
            }
        }
    }
}

#[test]
fn algorithm1_lengths_are_exact() {
    let mut rng = seeded(71);
    let (public, _) = trick_treat_keygen(3, 6, &mut rng).unwrap();
    for len in [0usize, 1, 2, 7, 16, 33] {
        for p in [&public.gamma1, &public.gamma2] {
            match algorithm1(p, len..=len, &mut rng) {
                Ok(w) => assert_eq!(w.len(), len),
                Err(_) => assert!(len % 2 == 1, "even length {len} must be reachable"),
            }
        }
    }
    // a wide range always yields something
    for p in [&public.gamma1, &public.gamma2] {
        for _ in 0..50 {
            let w = algorithm1(p, 16..=32, &mut rng).unwrap();
            assert!((16..=32).contains(&w.len()));
        }
    }
}

#[test]
fn eve_cases_follow_the_oracle() {
    let mut rng = seeded(72);
    let (public, private) = trick_treat_keygen(2, 3, &mut rng).unwrap();
    for _ in 0..50 {
        let ct = trick_treat_encrypt(1, &public, 16..=24, &mut rng).unwrap();
        let (guess, case) = eve_emulation_attack(&ct, ground_truth_oracle(&private), &mut rng).unwrap();
        assert_ne!(case, EveCase::Neither);
        if case != EveCase::Both {
            assert_eq!(guess, 1);
        }
    }
}

#[test]
fn monte_carlo_matches_three_quarters() {
    let cfg = TrialConfig { trials: 3000, seed: 73, ..TrialConfig::default() };
    let stats = run_trials(&cfg).unwrap();
    assert_eq!(stats.trials, 3000);
    assert!((0.71..=0.79).contains(&stats.eve_accuracy()), "eve {}", stats.eve_accuracy());
    assert!((0.45..=0.55).contains(&stats.case_frequency(EveCase::Both)));
    assert!(stats.alice_accuracy() >= 0.99, "alice {}", stats.alice_accuracy());
    assert_eq!(stats.case_frequency(EveCase::Neither), 0.0);
}

#[test]
fn monte_carlo_is_deterministic() {
    let cfg = TrialConfig { trials: 200, seed: 74, ..TrialConfig::default() };
    assert_eq!(run_trials(&cfg).unwrap(), run_trials(&cfg).unwrap());
}

#[test]
fn decryption_errors_shrink_with_length() {
    let rates: Vec<f64> =
        [2usize, 4, 8, 16].iter().map(|&len| decryption_error_rate(2, 0, len, 20_000, 75).unwrap()).collect();
    for pair in rates.windows(2) {
        assert!(pair[1] < pair[0], "{rates:?}");
    }
}
