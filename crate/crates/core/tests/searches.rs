mod common;

use common::*;
use num_bigint::BigUint;
use shiftlab_core::admissible::CountMethod;
use shiftlab_core::entropy::transfer_matrix_entropy;
use shiftlab_core::tmp::{
    find_interchangeable_pair, homoclinic_count, homoclinic_search, strong_tmp_scan,
    HomoclinicOutcome, MarginSide, PairOutcome,
};
use shiftlab_core::{zoo, AdmissibilityLevel, GroupSpec, SearchConfig};

#[test]
fn linear_homoclinic_counts_agree_with_search() {
    let cfg = SearchConfig::default();
    for (spec, max_radius) in [(zoo::five_dot_cross(), 2u32), (zoo::ledrappier(), 2)] {
        for radius in 0..=max_radius {
            for margin in [Some(0), Some(1), None] {
                let fast =
                    homoclinic_count(&spec, 0, radius, margin, CountMethod::Auto, &cfg).unwrap();
                let slow =
                    homoclinic_count(&spec, 0, radius, margin, CountMethod::Search, &cfg).unwrap();
                assert_eq!(
                    fast,
                    slow,
                    "{:?} radius {radius} margin {margin:?}",
                    spec.name()
                );
                let found = matches!(
                    homoclinic_search(&spec, 0, radius, margin, &cfg).unwrap(),
                    HomoclinicOutcome::Witness(w) if w.validate(&spec).unwrap()
                );
                assert_eq!(found, fast > BigUint::from(1u32));
            }
        }
    }
}

#[test]
fn short_margins_admit_spurious_cross_perturbations() {
    let cfg = SearchConfig::default();
    let cross = zoo::five_dot_cross();
    // Only the constraint at e fits inside B_1, leaving a 4-dimensional kernel.
    let n = homoclinic_count(&cross, 0, 1, Some(0), CountMethod::Auto, &cfg).unwrap();
    assert_eq!(n, BigUint::from(16u32));
}

#[test]
fn positive_entropy_z_sfts_with_tmp_have_pairs() {
    let cfg = SearchConfig::default();
    let z = GroupSpec::Lattice { dim: 1 };
    let exact = AdmissibilityLevel::ExactZ;
    let specs = [
        zoo::full_shift(z, 2).unwrap(),
        zoo::full_shift(z, 3).unwrap(),
        zoo::golden_mean(),
        sft(2, &[vec![1, 1, 1]]),
        sft(3, &[vec![0, 1], vec![2, 2]]),
    ];
    let mut checked = 0;
    for spec in specs {
        let margin = z.ball(1).unwrap();
        let supports = [zset(&[0]), zset(&[0, 1])];
        let scan =
            strong_tmp_scan(&spec, &margin, &supports, 1, exact, MarginSide::Right, &cfg).unwrap();
        let h = transfer_matrix_entropy(&spec, 1).unwrap();
        if !(scan.all_hold() && h > 1e-9) {
            continue;
        }
        let found = (1..=3).any(|r| {
            let a = zset(&[0]);
            let w = a.thicken(&z, r).unwrap();
            matches!(
                find_interchangeable_pair(&spec, &a, &w, exact, &cfg).unwrap(),
                PairOutcome::Witness(p) if p.validate(&spec, &cfg).unwrap()
            )
        });
        assert!(found, "{:?}", spec.rule());
        checked += 1;
    }
    assert!(checked >= 4, "only {checked} systems qualified");
}

#[test]
fn ledrappier_has_zero_entropy_side() {
    let cfg = SearchConfig::default();
    let spec = zoo::ledrappier();
    for radius in 0..=4 {
        assert!(matches!(
            homoclinic_search(&spec, 0, radius, None, &cfg).unwrap(),
            HomoclinicOutcome::NoneUpToScale { .. }
        ));
    }
}
