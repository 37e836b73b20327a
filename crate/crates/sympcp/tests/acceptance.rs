//! End-to-end acceptance suite.
//!
//! Each test exercises one headline behavior of the crate at full scale,
//! asserts exact expected values, and enforces a wall-clock budget. Run
//! with `cargo test -p sympcp --test acceptance -- --nocapture` to see one
//! line per criterion.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sympcp::floyd::{
    build_sympcp, check_derivation, derivation_to_solution, solution_to_derivation, Derivation,
    Presentation, RewriteWitness,
};
use sympcp::freeness::{
    build_gamma, extract_pcp_solution, factor_blocks, find_relation, matrix_relation_check,
    relation_from_solution, relation_from_solution_symmetric, verify_relation, GammaRelation,
    GammaTag,
};
use sympcp::matrix::{
    binary_value, build_matrices, mat_mul, matrix_to_pair, pair_to_matrix, quaternary_value,
    verify_embedding, Mat3, StringPair,
};
use sympcp::search::{enumerate_solutions, solve, SearchLimits, SearchOutcome};
use sympcp::words::{Alphabet, PcpInstance, PcpSolution, Word};

fn pass(number: usize, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {number} ({name}) took {elapsed:?}, budget {budget:?}"
    );
    println!("[acceptance] {number} {name}: PASS ({elapsed:.2?})");
}

fn doubling() -> PcpInstance {
    PcpInstance::parse(Alphabet::binary(), &[("00", "0")]).unwrap()
}

fn doubling_closure() -> PcpInstance {
    PcpInstance::parse(Alphabet::binary(), &[("00", "0"), ("0", "00")]).unwrap()
}

fn tags(texts: &[&str]) -> Vec<GammaTag> {
    texts.iter().map(|t| t.parse().unwrap()).collect()
}

fn relation(p: &[&str], q: &[&str]) -> GammaRelation {
    GammaRelation::new(tags(p), tags(q))
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> Word {
    let len = rng.random_range(1..=max_len);
    let symbols = (0..len)
        .map(|_| rng.random_range(0..alphabet.size() as u32))
        .collect();
    alphabet.word_from_indices(symbols).unwrap()
}

/// A random valid instance with up to `max_pairs` pairs; retries until the
/// sampled pairs are non-trivial and distinct.
fn random_instance(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_pairs: usize,
    max_len: usize,
) -> PcpInstance {
    loop {
        let k = rng.random_range(1..=max_pairs);
        let pairs = (0..k)
            .map(|_| {
                (
                    random_word(rng, alphabet, max_len),
                    random_word(rng, alphabet, max_len),
                )
            })
            .collect();
        if let Ok(inst) = PcpInstance::new(alphabet.clone(), pairs) {
            return inst;
        }
    }
}

/// A random symmetric instance with at most `max_k` pairs after closure.
fn random_symmetric_instance(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_base: usize,
    max_len: usize,
    max_k: usize,
) -> PcpInstance {
    loop {
        let closed = random_instance(rng, alphabet, max_base, max_len).symmetric_closure();
        if closed.k() <= max_k {
            return closed;
        }
    }
}

/// Rejection-samples until the brute-force oracle confirms a solution of
/// length at most `horizon`; keeps the sampled distribution honest without
/// consulting the solver under test.
fn random_solvable_symmetric_instance(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_base: usize,
    max_len: usize,
    max_k: usize,
    horizon: usize,
) -> PcpInstance {
    loop {
        let inst = random_symmetric_instance(rng, alphabet, max_base, max_len, max_k);
        if !enumerate_solutions(&inst, horizon).unwrap().is_empty() {
            return inst;
        }
    }
}

/// The shared corpus of criteria 3 and 5: the doubling closure plus twenty
/// seeded random symmetric instances (k <= 4, word length <= 3, half of
/// them known solvable), paired with whatever solution the bounded solver
/// finds.
fn symmetric_corpus_with_solutions() -> Vec<(PcpInstance, Option<PcpSolution>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let binary = Alphabet::binary();
    let mut instances = vec![doubling_closure()];
    instances.extend((0..10).map(|_| random_symmetric_instance(&mut rng, &binary, 2, 3, 4)));
    instances
        .extend((0..10).map(|_| random_solvable_symmetric_instance(&mut rng, &binary, 2, 3, 4, 6)));
    // Within length 8 these limits cannot truncate below the oracle's
    // length-6 horizon, so planted instances are always found solvable.
    let limits = SearchLimits::new(8, 20, 1 << 16).unwrap();
    instances
        .into_iter()
        .map(|inst| {
            let sol = solve(&inst, &limits).unwrap().found().cloned();
            (inst, sol)
        })
        .collect()
}

#[test]
fn criterion_1_golden_relation_suite() {
    let started = Instant::now();
    let gens = build_gamma(&doubling()).unwrap();
    let expected_gens = [
        ("eps2", ("", "2")),
        ("u:0", ("00", "20")),
        ("ubar:0", ("00", "203")),
        ("v:0", ("0", "02")),
        ("vbar:0", ("0", "03")),
    ];
    for (gen, (tag, (w, j))) in gens.iter().zip(expected_gens) {
        assert_eq!(gen.tag().to_string(), tag);
        assert_eq!(gen.pair(), &StringPair::parse(w, j).unwrap());
    }

    let suite = [
        (
            relation(
                &["u:0", "eps2", "eps2", "vbar:0"],
                &["eps2", "v:0", "ubar:0"],
            ),
            ("000", "202203"),
        ),
        (
            relation(
                &["u:0", "eps2", "eps2", "v:0"],
                &["eps2", "v:0", "u:0", "eps2"],
            ),
            ("000", "202202"),
        ),
        (
            relation(
                &["u:0", "ubar:0", "eps2", "v:0", "vbar:0"],
                &["eps2", "v:0", "vbar:0", "u:0", "ubar:0"],
            ),
            ("000000", "2020320203"),
        ),
    ];
    for (rel, (w, j)) in &suite {
        assert_eq!(verify_relation(&gens, rel), Ok(true), "{rel}");
        let expected = StringPair::parse(w, j).unwrap();
        let product = rel
            .p
            .iter()
            .map(|t| {
                gens.iter()
                    .find(|g| g.tag() == *t)
                    .expect("suite tags are generators")
                    .pair()
                    .clone()
            })
            .fold(StringPair::empty(), |acc, p| acc.concat(&p));
        assert_eq!(product, expected, "{rel}");
    }
    pass(1, "golden-relation-suite", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_counterexample_divergence() {
    let started = Instant::now();
    // The one-pair instance is unsolvable outright...
    let limits = SearchLimits::new(12, 16, 1 << 18).unwrap();
    let outcome = solve(&doubling(), &limits).unwrap();
    assert!(
        matches!(outcome, SearchOutcome::ProvedUnsolvable(_)),
        "expected an unsolvability proof, got {outcome:?}"
    );

    // ...yet its generators satisfy a relation within total product
    // length 12, whose factorization spells a solution of the closure.
    let gens = build_gamma(&doubling()).unwrap();
    let rel_limits = SearchLimits::new(12, 16, 1 << 20).unwrap();
    let outcome = find_relation(&gens, &rel_limits).unwrap();
    let rel = outcome.found().expect("a relation within length 12");
    assert_eq!(verify_relation(&gens, rel), Ok(true));
    let fact = factor_blocks(&doubling(), rel).unwrap();
    let extracted = extract_pcp_solution(&fact);
    assert_eq!(
        doubling_closure().check_solution(&extracted),
        Ok(true),
        "extracted {extracted:?}"
    );
    pass(
        2,
        "counterexample-divergence",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_3_solution_relation_round_trip() {
    let started = Instant::now();
    let corpus = symmetric_corpus_with_solutions();
    assert!(corpus[0].1.is_some(), "the doubling closure is solvable");
    let mut checked = 0;
    for (inst, sol) in &corpus {
        let Some(sol) = sol else { continue };
        let gens = build_gamma(inst).unwrap();

        let rel = relation_from_solution(inst, sol).unwrap();
        assert_eq!(verify_relation(&gens, &rel), Ok(true), "{rel}");

        let sym = relation_from_solution_symmetric(inst, sol).unwrap();
        assert_eq!(verify_relation(&gens, &sym), Ok(true), "{sym}");

        let fact = factor_blocks(inst, &rel).unwrap();
        assert_eq!(&extract_pcp_solution(&fact), sol);
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} solvable instances in corpus");
    pass(
        3,
        "solution-relation-round-trip",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_4_randomized_matrix_embedding() {
    let started = Instant::now();
    // Fixed product check on the doubling closure first.
    let matrices = build_matrices(&doubling_closure()).unwrap();
    let expected = Mat3::from_u64([[8, 0, 0], [0, 1, 0], [0, 866, 1024]]);
    let u0_ubar1 = mat_mul(&matrices.per_pair()[0].u, &matrices.per_pair()[1].ubar);
    let l_v0_vbar1 = mat_mul(
        &mat_mul(matrices.l(), &matrices.per_pair()[0].v),
        &matrices.per_pair()[1].vbar,
    );
    assert_eq!(u0_ubar1, expected);
    assert_eq!(l_v0_vbar1, expected);
    assert_eq!(
        matrix_to_pair(&expected).unwrap(),
        StringPair::parse("000", "20213").unwrap()
    );

    // 10 instances x 100 seeded sequences of length <= 8: decoding the
    // matrix product must give the concatenated pair, and re-encoding the
    // pair must give the product back.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for trial in 0..10 {
        let inst = random_instance(&mut rng, &Alphabet::binary(), 3, 3);
        let report = verify_embedding(&inst, 100, 8, 0xab5e_0000 + trial).unwrap();
        assert_eq!(report.trials, 100);
        assert!(
            report.passed(),
            "embedding failures on {inst:?}: {:?}",
            report.failures
        );
    }
    pass(
        4,
        "randomized-matrix-embedding",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_5_matrix_relation_transfer() {
    let started = Instant::now();
    // The fixed identity on the doubling closure: the products of
    // u:0 eps2 eps2 v:0 and eps2 v:0 u:0 eps2 agree as matrices.
    let closure = doubling_closure();
    let matrices = build_matrices(&closure).unwrap();
    let l = matrices.l();
    let u0 = &matrices.per_pair()[0].u;
    let v0 = &matrices.per_pair()[0].v;
    let lhs = mat_mul(&mat_mul(&mat_mul(u0, l), l), v0);
    let rhs = mat_mul(&mat_mul(&mat_mul(l, v0), u0), l);
    assert_eq!(lhs, rhs);
    let fixed = relation(
        &["u:0", "eps2", "eps2", "v:0"],
        &["eps2", "v:0", "u:0", "eps2"],
    );
    assert_eq!(matrix_relation_check(&closure, &fixed), Ok(true));

    // Both derived relations of every solved corpus instance transfer to
    // exact matrix identities.
    for (inst, sol) in &symmetric_corpus_with_solutions() {
        let Some(sol) = sol else { continue };
        let rel = relation_from_solution(inst, sol).unwrap();
        assert_eq!(matrix_relation_check(inst, &rel), Ok(true), "{rel}");
        let sym = relation_from_solution_symmetric(inst, sol).unwrap();
        assert_eq!(matrix_relation_check(inst, &sym), Ok(true), "{sym}");
    }
    pass(
        5,
        "matrix-relation-transfer",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_word_problem_reduction_end_to_end() {
    let started = Instant::now();
    let letters = Alphabet::new(["a", "b"]).unwrap();
    let pres = Presentation::parse(letters, &[("ab", "ba")]).unwrap();
    let x = pres.word("aab").unwrap();
    let y = pres.word("aba").unwrap();

    let inst = build_sympcp(&pres, &x, &y).unwrap();
    // 2|B| + 2 letter copies, 2|R| relation pairs, 4 end pairs.
    assert_eq!(inst.k(), 14);
    assert!(inst.is_symmetric());

    let d = Derivation::new(
        vec![x.clone(), y.clone()],
        vec![Some(RewriteWitness {
            position: 1,
            relation: 0,
        })],
    )
    .unwrap();
    let sol = derivation_to_solution(&pres, &d).unwrap();
    assert_eq!(inst.check_solution(&sol), Ok(true));

    let back = solution_to_derivation(&pres, &x, &y, &sol).unwrap();
    assert_eq!(check_derivation(&pres, &back), Ok(true));
    assert_eq!(back.first(), &x);
    assert_eq!(back.last(), &y);

    let limits = SearchLimits::new(40, 24, 1 << 20).unwrap();
    let found = solve(&inst, &limits).unwrap();
    let found = found.found().expect("the derived instance is solvable");
    assert_eq!(inst.check_solution(found), Ok(true));
    pass(
        6,
        "word-problem-reduction-end-to-end",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_binary_recoding_preserves_outcomes() {
    let started = Instant::now();

    // The derived word-problem instance, solved both raw (8 symbols) and
    // block-coded over 0/1 (code length 3): same witness.
    let letters = Alphabet::new(["a", "b"]).unwrap();
    let pres = Presentation::parse(letters, &[("ab", "ba")]).unwrap();
    let inst = build_sympcp(
        &pres,
        &pres.word("aab").unwrap(),
        &pres.word("aba").unwrap(),
    )
    .unwrap();
    let coded = inst.binary_code().unwrap();
    assert_eq!(coded.alphabet(), &Alphabet::binary());
    assert!(coded.is_symmetric());
    let raw_outcome = solve(&inst, &SearchLimits::new(40, 24, 1 << 20).unwrap()).unwrap();
    let coded_outcome = solve(&coded, &SearchLimits::new(40, 72, 1 << 21).unwrap()).unwrap();
    let raw_found = raw_outcome.found().expect("solvable");
    let coded_found = coded_outcome.found().expect("solvable after recoding");
    assert_eq!(raw_found, coded_found);

    // Five random symmetric instances over a three-letter alphabet
    // (code length 2): found/not-found always agrees, witnesses too.
    let abc = Alphabet::new(["a", "b", "c"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for _ in 0..5 {
        let inst = random_symmetric_instance(&mut rng, &abc, 2, 2, 4);
        let coded = inst.binary_code().unwrap();
        let raw = solve(&inst, &SearchLimits::new(8, 30, 1 << 18).unwrap()).unwrap();
        let coded = solve(&coded, &SearchLimits::new(8, 60, 1 << 19).unwrap()).unwrap();
        match (raw.found(), coded.found()) {
            (Some(a), Some(b)) => assert_eq!(a, b, "witness mismatch on {inst:?}"),
            (None, None) => {}
            (a, b) => panic!("outcome mismatch on {inst:?}: raw {a:?}, coded {b:?}"),
        }
    }
    pass(
        7,
        "binary-recoding-preserves-outcomes",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_solver_matches_enumeration_oracle() {
    let started = Instant::now();
    // Within length 6 the overhang and state limits below cannot truncate
    // (word lengths <= 3), so the solver is complete there and must agree
    // with brute-force enumeration exactly.
    let limits = SearchLimits::new(6, 20, 1 << 18).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let binary = Alphabet::binary();
    let mut solvable = 0;
    for trial in 0..50 {
        // Unconstrained samples are mostly unsolvable, so alternate with
        // rejection-sampled solvable ones to exercise the witness check.
        let inst = if trial % 2 == 0 {
            random_instance(&mut rng, &binary, 3, 3)
        } else {
            loop {
                let candidate = random_instance(&mut rng, &binary, 3, 3);
                if !enumerate_solutions(&candidate, 6).unwrap().is_empty() {
                    break candidate;
                }
            }
        };
        let oracle = enumerate_solutions(&inst, 6).unwrap();
        let outcome = solve(&inst, &limits).unwrap();
        match oracle.first() {
            Some(first) => {
                assert_eq!(
                    outcome.found(),
                    Some(first),
                    "solver disagrees with oracle on {inst:?}"
                );
                solvable += 1;
            }
            None => assert!(
                outcome.found().is_none(),
                "solver found a ghost solution on {inst:?}: {outcome:?}"
            ),
        }
    }
    assert!(solvable >= 25, "only {solvable} solvable instances sampled");
    pass(
        8,
        "solver-matches-enumeration-oracle",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_9_valuation_recurrences_and_decode_identities() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let binary = Alphabet::binary();
    let quaternary = Alphabet::quaternary();
    let word = |rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize| {
        let len = rng.random_range(0..=max_len);
        let symbols = (0..len)
            .map(|_| rng.random_range(0..alphabet.size() as u32))
            .collect();
        alphabet.word_from_indices(symbols).unwrap()
    };

    // beta(wu) = beta(w) + 2^{|w|} beta(u), and the same shape in base 4.
    for _ in 0..10_000 {
        let w = word(&mut rng, &binary, 12);
        let u = word(&mut rng, &binary, 12);
        let lhs = binary_value(&w.concat(&u).unwrap()).unwrap();
        let rhs = binary_value(&w).unwrap()
            + sympcp::matrix::Nat::from(2u32).pow(w.len() as u32) * binary_value(&u).unwrap();
        assert_eq!(lhs, rhs);

        let j = word(&mut rng, &quaternary, 10);
        let k = word(&mut rng, &quaternary, 10);
        let lhs = quaternary_value(&j.concat(&k).unwrap()).unwrap();
        let rhs = quaternary_value(&j).unwrap()
            + sympcp::matrix::Nat::from(4u32).pow(j.len() as u32) * quaternary_value(&k).unwrap();
        assert_eq!(lhs, rhs);
    }

    // Decoding inverts encoding on 10^4 random pairs.
    for _ in 0..10_000 {
        let pair =
            StringPair::new(word(&mut rng, &binary, 12), word(&mut rng, &quaternary, 12)).unwrap();
        assert_eq!(matrix_to_pair(&pair_to_matrix(&pair)).unwrap(), pair);
    }
    pass(
        9,
        "valuation-recurrences-and-decode-identities",
        started,
        Duration::from_secs(10),
    );
}
