mod common;

use common::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftlab_core::admissible::{
    count_admissible, count_admissible_with, enumerate_admissible, CountMethod,
};
use shiftlab_core::entropy::{cyclic_microstate_count, transfer_matrix_entropy};
use shiftlab_core::{AdmissibilityLevel, GroupSpec, SearchConfig};

const LOCAL0: AdmissibilityLevel = AdmissibilityLevel::LocalMargin(0);

#[test]
fn search_count_matches_brute_filter_on_random_sfts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = SearchConfig::default();
    for _ in 0..40 {
        let k = rng.gen_range(2..=3);
        let words = random_words(&mut rng, k);
        let spec = sft(k, &words);
        let n = rng.gen_range(1..=7);
        let mut sites: Vec<i64> = (-5..=5).collect();
        while sites.len() > n {
            sites.remove(rng.gen_range(0..sites.len()));
        }
        let want = brute_local(k, &words, &sites).len();
        let got =
            count_admissible_with(&spec, &zset(&sites), LOCAL0, CountMethod::Search, &cfg).unwrap();
        assert_eq!(got, BigUint::from(want), "words {words:?} on {sites:?}");
    }
}

#[test]
fn margin_counts_match_projected_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = SearchConfig::default();
    for _ in 0..30 {
        let words = random_words(&mut rng, 2);
        let spec = sft(2, &words);
        let sites: Vec<i64> = (0..rng.gen_range(1..=5)).collect();
        for r in 0..=3u32 {
            let want = brute_margin(2, &words, &sites, r as i64);
            let got = enumerate_admissible(
                &spec,
                &zset(&sites),
                AdmissibilityLevel::LocalMargin(r),
                &cfg,
            )
            .unwrap();
            let got: std::collections::BTreeSet<Vec<u16>> =
                got.iter().map(|p| p.values()).collect();
            assert_eq!(got, want, "words {words:?}, r = {r}");
        }
    }
}

#[test]
fn exact_counts_match_long_extension_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let cfg = SearchConfig::default();
    for _ in 0..30 {
        let k = rng.gen_range(2..=3);
        let words = random_words(&mut rng, k);
        let spec = sft(k, &words);
        for n in 1..=6usize {
            let f = GroupSpec::Lattice { dim: 1 }
                .folner_window(n as u32)
                .unwrap();
            let got = count_admissible(&spec, &f, AdmissibilityLevel::ExactZ, &cfg).unwrap();
            assert_eq!(
                got,
                BigUint::from(brute_exact(k, &words, n)),
                "words {words:?}, n = {n}"
            );
        }
    }
}

#[test]
fn cyclic_counts_match_brute_force_on_both_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cfg = SearchConfig::default();
    for _ in 0..12 {
        let words = random_words(&mut rng, 2);
        let spec = sft(2, &words);
        // n <= 12 is counted directly, larger n by dynamic programming.
        for n in [1usize, 2, 3, 5, 12, 13, 15] {
            for beta in 0..=2u64 {
                let got = cyclic_microstate_count(&spec, n, beta, &cfg).unwrap().count;
                assert_eq!(
                    got,
                    BigUint::from(brute_cyclic(2, &words, n, beta as usize)),
                    "{words:?} n={n} beta={beta}"
                );
            }
        }
    }
}

#[test]
fn golden_mean_closed_forms() {
    let spec = sft(2, &[vec![1, 1]]);
    let cfg = SearchConfig::default();
    let phi: f64 = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((transfer_matrix_entropy(&spec, 1).unwrap() - phi.ln()).abs() < 1e-9);
    // Fibonacci counts on intervals, Lucas numbers on cycles.
    let (mut a, mut b) = (1u64, 2u64);
    for n in 1..=20u32 {
        let f = GroupSpec::Lattice { dim: 1 }.folner_window(n).unwrap();
        assert_eq!(
            count_admissible(&spec, &f, AdmissibilityLevel::ExactZ, &cfg).unwrap(),
            BigUint::from(b)
        );
        (a, b) = (b, a + b);
    }
    for (n, lucas) in [(4usize, 7u64), (16, 2207), (20, 15127)] {
        assert_eq!(
            cyclic_microstate_count(&spec, n, 0, &cfg).unwrap().count,
            BigUint::from(lucas)
        );
    }
}
