use permcover_core::group::{make_cyclic, make_dihedral, make_product, FactorProfile};
use permcover_core::perm::{distance_to_code, linf_distance, PartialPlacement, Permutation};
use permcover_core::solver::{radius_bruteforce, SolverConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=10).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
}

proptest! {
    #[test]
    fn metric_axioms((f, g, h) in triple()) {
        let d = |a: &Permutation, b: &Permutation| linf_distance(a, b).unwrap();
        prop_assert_eq!(d(&f, &g), d(&g, &f));
        prop_assert_eq!(d(&f, &f), 0);
        prop_assert_eq!(d(&f, &g) == 0, f == g);
        prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h));
    }

    #[test]
    fn right_invariance((f, g, h) in triple()) {
        let lhs = linf_distance(&f.compose(&h).unwrap(), &g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, linf_distance(&f, &g).unwrap());
    }

    #[test]
    fn conjugation_keeps_cycle_type((f, g, _h) in triple()) {
        let c = Permutation::conjugate(&g, &f).unwrap();
        prop_assert_eq!(c.cycle_type(), f.cycle_type());
    }

    #[test]
    fn inverse_and_text_round_trip(f in (1usize..=12).prop_flat_map(perm)) {
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
        let back: Permutation = f.to_string().parse().unwrap();
        prop_assert_eq!(&back, &f);
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), f);
    }
}

#[test]
fn left_multiplication_can_change_distance() {
    let f = Permutation::identity(3);
    let g: Permutation = "[2,1,3]".parse().unwrap();
    let h: Permutation = "[3,2,1]".parse().unwrap();
    assert_eq!(linf_distance(&f, &g).unwrap(), 1);
    let hf = h.compose(&f).unwrap();
    let hg = h.compose(&g).unwrap();
    assert_eq!(linf_distance(&hf, &hg).unwrap(), 1);
    let h: Permutation = "[1,3,2]".parse().unwrap();
    let hf = h.compose(&f).unwrap();
    let hg = h.compose(&g).unwrap();
    assert_eq!(linf_distance(&hf, &hg).unwrap(), 2);
}

#[test]
fn distance_never_exceeds_radius() {
    let codes = [
        make_cyclic(7).unwrap(),
        make_dihedral(7).unwrap(),
        make_product(&FactorProfile::new(vec![4, 3]).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for code in &codes {
        let r = radius_bruteforce(code, &SolverConfig::default()).unwrap().value;
        for _ in 0..2000 {
            let f = PartialPlacement::new(7).complete_random(&mut rng);
            assert!(distance_to_code(&f, code).unwrap() <= r);
        }
    }
}

#[test]
fn placements_reject_collisions() {
    let mut p = PartialPlacement::new(5);
    p.assign(2, 5).unwrap();
    assert!(p.assign(2, 4).is_err());
    assert!(p.assign(3, 5).is_err());
    assert!(p.assign(6, 1).is_err());
    assert_eq!(p.complete().to_vec(), vec![1, 5, 2, 3, 4]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        assert!(p.is_extended_by(&p.complete_random(&mut rng)));
    }
}
