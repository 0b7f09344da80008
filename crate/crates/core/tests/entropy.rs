use entropic_core::entropy::{
    entropies_sequential, entropies_sequential_3, entropy_after_collapse, entropy_distinct, entropy_nats, pinched_operator,
    shannon_entropy, variance_relations,
};
use entropic_core::state::{luders_map, random_mixed_state, random_observable, random_state, wigner_joint_3};
use entropic_core::{DensityOperator, HermitianObservable, LogBase, ProbabilityDistribution};
use proptest::prelude::*;

struct Instance {
    rho: DensityOperator<f64>,
    a: HermitianObservable<f64>,
    b: HermitianObservable<f64>,
    c: HermitianObservable<f64>,
}

fn instance(seed: u64, min_dim: usize, max_dim: usize) -> Instance {
    let dim = min_dim + (seed % (max_dim - min_dim + 1) as u64) as usize;
    let rho = if seed.is_multiple_of(3) {
        random_mixed_state(dim, 1 + (seed as usize) % dim, seed).unwrap()
    } else {
        random_state(dim, seed).unwrap()
    };
    let obs = |k: u64| {
        if (seed + k).is_multiple_of(4) {
            entropic_core::state::random_degenerate_observable(dim, seed * 7 + k).unwrap()
        } else {
            random_observable(dim, seed * 7 + k).unwrap()
        }
    };
    Instance { rho, a: obs(1), b: obs(2), c: obs(3) }
}

#[test]
fn sequential_entropy_relations() {
    for seed in 0..200 {
        let Instance { rho, a, b, c } = instance(seed, 2, 5);
        let two = entropies_sequential(&rho, &a, &b).unwrap();
        assert!(two.subadditivity_slack() >= -1e-9, "seed {seed}");
        assert!(two.s_joint >= two.s_a - 1e-9 && two.s_joint >= two.s_b - 1e-9, "seed {seed}");
        let three = entropies_sequential_3(&rho, &a, &b, &c).unwrap();
        let s_c = three.s_c.unwrap();
        assert!(three.s_a + three.s_b + s_c >= three.s_joint - 1e-9, "seed {seed}");
        assert!(three.strong_subadditivity_slack().unwrap() >= -1e-9, "seed {seed}");
        // Marginal entropies never exceed log of the outcome count.
        assert!(two.s_a <= (a.num_outcomes() as f64).ln() + 1e-12);
        assert!(two.s_b <= (b.num_outcomes() as f64).ln() + 1e-12);
    }
}

#[test]
fn identities_for_marginal_entropies() {
    for seed in 0..200 {
        let Instance { rho, a, b, c } = instance(seed, 2, 5);
        let report = entropies_sequential(&rho, &a, &b).unwrap();
        let collapsed = luders_map(&rho, &a).unwrap();
        assert!((report.s_a - entropy_distinct(&rho, &a).unwrap()).abs() <= 1e-12);
        assert!((report.s_a - entropy_distinct(&collapsed, &a).unwrap()).abs() <= 1e-12);
        assert!((report.s_b - entropy_distinct(&collapsed, &b).unwrap()).abs() <= 1e-12);
        assert!((report.s_b - entropy_after_collapse(&rho, &a, &b).unwrap()).abs() <= 1e-12);

        let three = entropies_sequential_3(&rho, &a, &b, &c).unwrap();
        let twice = luders_map(&collapsed, &b).unwrap();
        assert!((three.s_c.unwrap() - entropy_distinct(&twice, &c).unwrap()).abs() <= 1e-12, "seed {seed}");
    }
}

#[test]
fn joint_entropy_matches_table() {
    for seed in 0..50 {
        let Instance { rho, a, b, c } = instance(seed, 2, 4);
        let joint = wigner_joint_3(&rho, &a, &b, &c).unwrap();
        let report = entropies_sequential_3(&rho, &a, &b, &c).unwrap();
        assert!((report.s_joint - entropy_nats(joint.table())).abs() <= 1e-12);
        assert!((report.s_bc.unwrap() - entropy_nats(joint.marginalize(&[1, 2]).table())).abs() <= 1e-12);
    }
}

#[test]
fn variance_relations_hold() {
    for seed in 0..500 {
        let Instance { rho, a, b, .. } = instance(seed, 2, 6);
        let v = variance_relations(&rho, &a, &b).unwrap();
        assert!(v.robertson_slack() >= -1e-9, "seed {seed}: {}", v.robertson_slack());
        assert!(v.successive_slack() >= -1e-9, "seed {seed}: {}", v.successive_slack());
        assert!(v.var_a >= 0.0 && v.var_b >= 0.0);
        let commutator = a.matrix().commutator(&v.c_of_b);
        assert!(commutator.max_abs() <= 1e-10, "seed {seed}");
    }
}

#[test]
fn pinched_operator_is_sum_of_blocks() {
    let Instance { a, b, .. } = instance(5, 4, 4);
    let c = pinched_operator(&a, b.matrix());
    let direct = a
        .projectors()
        .iter()
        .fold(entropic_core::ComplexMatrix::zeros(4), |acc, p| &acc + &(&(p * b.matrix()) * p));
    assert!((&c - &direct).max_abs() <= 1e-14);
}

#[test]
fn base_two_is_a_rescaling() {
    for seed in 0..20 {
        let Instance { rho, a, b, .. } = instance(seed, 2, 4);
        let nats = entropies_sequential(&rho, &a, &b).unwrap();
        let bits = nats.in_base(LogBase::bits());
        assert!((bits.s_joint - nats.s_joint / std::f64::consts::LN_2).abs() <= 1e-12);
        assert_eq!(bits.log_base, 2.0);
    }
}

proptest! {
    #[test]
    fn entropy_is_bounded_and_finite(raw in prop::collection::vec(0.0f64..1.0, 1..12)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let p = ProbabilityDistribution::new(raw.iter().map(|w| w / total).collect()).unwrap();
        let h = shannon_entropy(&p, LogBase::natural());
        prop_assert!(h.is_finite());
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (p.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn tiny_negative_roundoff_is_clipped(k in 2usize..10, eps in 0.0f64..1e-12) {
        let mut w = vec![1.0 / (k - 1) as f64; k - 1];
        w.push(-eps);
        let p = ProbabilityDistribution::from_raw(w).unwrap();
        prop_assert!(p.weights().iter().all(|&x| x >= 0.0));
        prop_assert!(shannon_entropy(&p, LogBase::natural()).is_finite());
    }
}
