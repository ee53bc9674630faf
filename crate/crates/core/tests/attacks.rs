use gtc_core::attacks::{
    brute_force_csp, commutator_probe_csp, commutator_probe_decomposition, commutator_probe_factorization,
    decomposition_to_factorization, key_from_decomposition_solution, length_based_attack, normal_subgroup_attack,
    run_attack, subgroup_from_transcript, uniqueness_check, AttackMethod, AttackReport,
};
use gtc_core::platform::{block_commuting_subgroups, eval_word, Element, Platform, SubgroupGens};
use gtc_core::protocols::{
    aag_setup, aag_with, commuting_setup, decomposition_exchange, decomposition_with, run_session, Protocol,
    SessionOutcome, SessionParams, SubgroupExpr,
};
use gtc_core::rng::{seeded, trial_stream};
use gtc_core::word::random_reduced_word;
use gtc_core::{Error, Word};
use rand::Rng;

/// Success must mean the true key; returns whether the attack succeeded.
fn verify(report: &AttackReport, out: &SessionOutcome) -> bool {
    if report.success {
        assert_eq!(report.recovered_key.as_ref(), Some(&out.key_alice), "false success: {}", report.to_text());
    }
    report.success
}

fn block_setup(rng: &mut impl Rng) -> (Platform, SubgroupGens, SubgroupGens) {
    let (a, b) = block_commuting_subgroups(4, 5, 3, 3, rng).unwrap();
    (Platform::matrix(4, 5).unwrap(), a, b)
}

fn draw(gens: &SubgroupGens, len: usize, rng: &mut impl Rng) -> Element {
    SubgroupExpr::random(gens, len..=len, rng).unwrap().value
}

#[test]
fn reduction_identities_hold_exactly() {
    let mut rng = seeded(1);
    let (pf, a_gens, b_gens) = block_setup(&mut rng);
    for _ in 0..1000 {
        let w = pf.random_element(&mut rng).unwrap();
        let a = draw(&a_gens, 6, &mut rng);
        let b = draw(&b_gens, 6, &mut rng);
        let b1 = draw(&b_gens, 3, &mut rng);

        let awb = a.mul(&w).mul(&b);
        assert_eq!(decomposition_to_factorization(&w, &awb), a.conj(&w).mul(&b));

        let inst = commutator_probe_decomposition(&awb, &b1, &w);
        assert!(inst.solved_by(&b));

        let inst = commutator_probe_factorization(&a.mul(&b), &b1);
        assert!(inst.solved_by(&b));

        let inst = commutator_probe_csp(&w.conj(&a), &b1, &w);
        assert!(inst.solved_by(&a));
    }
}

#[test]
fn probe_with_identity_secret_has_equal_sides() {
    let mut rng = seeded(2);
    let (pf, a_gens, b_gens) = block_setup(&mut rng);
    let w = pf.random_element(&mut rng).unwrap();
    let a = draw(&a_gens, 4, &mut rng);
    let b1 = draw(&b_gens, 3, &mut rng);
    let inst = commutator_probe_decomposition(&a.mul(&w), &b1, &w);
    assert_eq!(inst.u, inst.v);
    let inst = commutator_probe_factorization(&a, &b1);
    assert_eq!(inst.u, inst.v);
    let inst = commutator_probe_csp(&w, &b1, &w);
    assert_eq!(inst.u, inst.v);
}

#[test]
fn csp_recovers_planted_conjugators() {
    let mut rng = seeded(3);
    let (pf, a_gens, _) = block_setup(&mut rng);
    for _ in 0..20 {
        let u = pf.random_element(&mut rng).unwrap();
        let expr = random_reduced_word(a_gens.len(), 3, &mut rng);
        let x = eval_word(&a_gens, &expr).unwrap();
        let v = u.conj(&x);
        let s = brute_force_csp(&u, &v, &a_gens, 3).unwrap();
        let found = s.witness.expect("complete up to the bound");
        assert!(found.len() <= 3);
        assert_eq!(u.conj(&eval_word(&a_gens, &found).unwrap()), v);
    }
}

#[test]
fn probe_instances_are_solved_by_brute_force() {
    let mut rng = seeded(4);
    let (pf, a_gens, b_gens) = block_setup(&mut rng);
    for _ in 0..20 {
        let w = pf.random_element(&mut rng).unwrap();
        let a = draw(&a_gens, 5, &mut rng);
        let b = draw(&b_gens, 2, &mut rng);
        let b1 = b_gens.gens()[0].clone();
        let wp = a.mul(&w).mul(&b);
        let inst = commutator_probe_decomposition(&wp, &b1, &w);
        let s = brute_force_csp(&inst.u, &inst.v, &b_gens, 2).unwrap();
        let b_hat = eval_word(&b_gens, &s.witness.unwrap()).unwrap();
        // any solution acts on the probe exactly like b
        assert_eq!(inst.u.conj(&b_hat), inst.u.conj(&b));

        let inst = commutator_probe_factorization(&a.mul(&b), &b1);
        let s = brute_force_csp(&inst.u, &inst.v, &b_gens, 2).unwrap();
        assert!(inst.solved_by(&eval_word(&b_gens, &s.witness.unwrap()).unwrap()));

        let a_short = draw(&a_gens, 2, &mut rng);
        let inst = commutator_probe_csp(&w.conj(&a_short), &b1, &w);
        let s = brute_force_csp(&inst.u, &inst.v, &a_gens, 2).unwrap();
        assert!(inst.solved_by(&eval_word(&a_gens, &s.witness.unwrap()).unwrap()));
    }
}

#[test]
fn normal_subgroup_pipeline_on_direct_products() {
    let pf = Platform::direct_product(3, 3).unwrap();
    for i in 0..200 {
        let mut rng = trial_stream(10, i);
        let setup = commuting_setup(&pf, 3, &mut rng).unwrap();
        let out = decomposition_exchange(&setup, 8..=16, &mut rng).unwrap();
        let report = run_attack(&out.transcript, AttackMethod::Normal, 0).unwrap();
        assert!(verify(&report, &out), "session {i}");
    }
}

#[test]
fn normal_subgroup_attack_fails_on_block_matrices() {
    let pf = Platform::matrix(4, 5).unwrap();
    for i in 0..200 {
        let mut rng = trial_stream(11, i);
        let out = run_session(Protocol::Decomposition, &pf, &SessionParams::default(), &mut rng).unwrap();
        let t = &out.transcript;
        let w = t.public_value("w").unwrap();
        let pa = t.message(gtc_core::transcript::Party::Alice, "msg").unwrap();
        let a = subgroup_from_transcript(t, "a-gen").unwrap();
        let err = normal_subgroup_attack(&decomposition_to_factorization(w, &pa), &a).unwrap_err();
        assert!(matches!(err, Error::AttackFailed(_)));
        let report = run_attack(t, AttackMethod::Normal, 0).unwrap();
        assert!(!verify(&report, &out));
        assert!(report.notes.iter().any(|n| n.contains("attack failed")));
    }
}

#[test]
fn any_solving_pair_gives_the_key() {
    let pf = Platform::direct_product(2, 2).unwrap();
    for i in 0..100 {
        let mut rng = trial_stream(12, i);
        let setup = commuting_setup(&pf, 2, &mut rng).unwrap();
        let out = decomposition_exchange(&setup, 6..=10, &mut rng).unwrap();
        let (a1, a2) = (out.secret_value("a1"), out.secret_value("a2"));
        let pb = out.transcript.message(gtc_core::transcript::Party::Bob, "msg").unwrap();
        assert_eq!(key_from_decomposition_solution(a1, a2, &pb), out.key_alice);
        // c ∈ A commuting with w: a power of w's left component
        let Element::Pair(wl, wr) = &setup.w else { unreachable!() };
        let k = rng.gen_range(1..=3);
        let c = Element::Pair(wl.pow(k), Word::identity(wr.rank()));
        let (b1, b2) = (a1.mul(&c), c.inv().mul(a2));
        assert_eq!(
            b1.mul(&setup.w).mul(&b2),
            out.transcript.message(gtc_core::transcript::Party::Alice, "msg").unwrap()
        );
        if !c.is_identity() {
            assert_ne!(&b1, a1);
        }
        assert_eq!(key_from_decomposition_solution(&b1, &b2, &pb), out.key_alice);
        // a random pair that does not solve Alice's equation
        let x = pf.random_element(&mut rng).unwrap();
        if x.mul(&setup.w).mul(a2) != a1.mul(&setup.w).mul(a2) {
            assert_ne!(key_from_decomposition_solution(&x, a2, &pb), out.key_alice);
        }
    }
}

#[test]
fn uniqueness_counts() {
    let pf = Platform::free(3).unwrap();
    let x = |i: i32| Element::Free(Word::new(3, vec![i]).unwrap());
    let a = SubgroupGens::new(pf.clone(), vec![x(1)]).unwrap();
    let w = x(3);
    let target = x(1).pow(2).mul(&w).mul(&x(1).pow(-1));
    assert_eq!(uniqueness_check(&w, &target, &a, 4).unwrap(), 1);
    assert_eq!(uniqueness_check(&w, &x(2), &a, 4).unwrap(), 0);

    let dp = Platform::direct_product(2, 2).unwrap();
    let mut rng = seeded(13);
    let setup = commuting_setup(&dp, 2, &mut rng).unwrap();
    let a1 = setup.a.gens()[0].clone();
    let target = a1.mul(&setup.w).mul(&setup.a.gens()[1]);
    assert!(uniqueness_check(&setup.w, &target, &setup.a, 3).unwrap() > 1);
}

#[test]
fn length_based_attack_on_free_aag() {
    let pf = Platform::free(4).unwrap();
    let mut wins = 0;
    for i in 0..100 {
        let mut rng = trial_stream(14, i);
        let setup = aag_setup(&pf, &mut rng).unwrap();
        let x = SubgroupExpr::random(&setup.a, 1..=4, &mut rng).unwrap();
        let y = SubgroupExpr::random(&setup.b, 1..=4, &mut rng).unwrap();
        let out = aag_with(&setup, &x, &y).unwrap();
        let report = length_based_attack(&out.transcript, &setup.a, &setup.b, 64);
        wins += verify(&report, &out) as u32;
    }
    assert!(wins > 90, "{wins}/100");

    let mut rng = seeded(15);
    let setup = aag_setup(&pf, &mut rng).unwrap();
    let one_a = SubgroupExpr::new(&setup.a, Word::identity(2)).unwrap();
    let one_b = SubgroupExpr::new(&setup.b, Word::identity(2)).unwrap();
    let out = aag_with(&setup, &one_a, &one_b).unwrap();
    let report = length_based_attack(&out.transcript, &setup.a, &setup.b, 0);
    assert!(verify(&report, &out));
}

#[test]
fn length_based_attack_never_claims_false_success() {
    // overlapping supports make the descent unreliable; only honesty is checked
    let pf = Platform::free(2).unwrap();
    for i in 0..50 {
        let mut rng = trial_stream(16, i);
        let gens = |rng: &mut _| {
            let v: Vec<Element> = (0..2).map(|_| pf.random_element(rng).unwrap()).collect();
            SubgroupGens::new(pf.clone(), v).unwrap()
        };
        let a = gens(&mut rng);
        let b = gens(&mut rng);
        let setup = gtc_core::protocols::SubgroupSetup { platform: pf.clone(), w: pf.identity(), a, b };
        let x = SubgroupExpr::random(&setup.a, 2..=6, &mut rng).unwrap();
        let y = SubgroupExpr::random(&setup.b, 2..=6, &mut rng).unwrap();
        let out = aag_with(&setup, &x, &y).unwrap();
        verify(&length_based_attack(&out.transcript, &setup.a, &setup.b, 32), &out);
    }
}

#[test]
fn transcript_attacks_on_block_matrix_sessions() {
    let pf = Platform::matrix(4, 5).unwrap();
    let params = SessionParams::default();
    let cases = [
        (Protocol::KoLee, AttackMethod::Csp, 12),
        (Protocol::KoLee, AttackMethod::CommutatorProbe, 12),
        (Protocol::Twisted, AttackMethod::CommutatorProbe, 12),
        (Protocol::Factorization, AttackMethod::CommutatorProbe, 12),
        (Protocol::Decomposition, AttackMethod::DecompFactor, 12),
    ];
    for (proto, method, bound) in cases {
        let mut wins = 0;
        for i in 0..20 {
            let mut rng = trial_stream(17, i);
            let out = run_session(proto, &pf, &params, &mut rng).unwrap();
            let report = run_attack(&out.transcript, method, bound).unwrap();
            wins += verify(&report, &out) as u32;
        }
        assert!(wins >= 18, "{proto} / {method}: {wins}/20");
    }
}

#[test]
fn dlog_and_csp_on_small_platforms() {
    let pf = Platform::cyclic(23, 5).unwrap();
    for i in 0..20 {
        let mut rng = trial_stream(18, i);
        let out = run_session(Protocol::Dh, &pf, &SessionParams::default(), &mut rng).unwrap();
        assert!(verify(&run_attack(&out.transcript, AttackMethod::Dlog, 22).unwrap(), &out));
        let out = run_session(Protocol::ElGamal, &pf, &SessionParams::default(), &mut rng).unwrap();
        assert!(verify(&run_attack(&out.transcript, AttackMethod::Dlog, 22).unwrap(), &out));
    }
    let sym = Platform::permutation(5).unwrap();
    for i in 0..10 {
        let mut rng = trial_stream(19, i);
        let setup = aag_setup(&sym, &mut rng).unwrap();
        let x = SubgroupExpr::random(&setup.a, 8..=16, &mut rng).unwrap();
        let y = SubgroupExpr::random(&setup.b, 8..=16, &mut rng).unwrap();
        let out = aag_with(&setup, &x, &y).unwrap();
        let report = run_attack(&out.transcript, AttackMethod::Csp, 12).unwrap();
        assert!(verify(&report, &out) || report.notes.iter().any(|n| n.contains("no simultaneous")));
    }
}

#[test]
fn decomp_factor_on_direct_product_with_short_secrets() {
    let pf = Platform::direct_product(2, 2).unwrap();
    for i in 0..20 {
        let mut rng = trial_stream(20, i);
        let setup = commuting_setup(&pf, 2, &mut rng).unwrap();
        let a: Vec<Element> = (0..2).map(|_| draw(&setup.a, 2, &mut rng)).collect();
        let b: Vec<Element> = (0..2).map(|_| draw(&setup.b, 2, &mut rng)).collect();
        let out = decomposition_with(&setup, [&a[0], &a[1]], [&b[0], &b[1]]).unwrap();
        let report = run_attack(&out.transcript, AttackMethod::DecompFactor, 4).unwrap();
        assert!(verify(&report, &out), "session {i}: {}", report.to_text());
    }
}
