use atlas_core::action::{coset_action, DEFAULT_INDEX_CAP};
use atlas_core::{m11, PermGroup, Permutation};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[test]
fn symmetric_and_alternating_orders() {
    for n in 3..=12usize {
        let t = Permutation::from_cycles(n, &[vec![0, 1]]).unwrap();
        let c = Permutation::from_cycles(n, &[(0..n).collect()]).unwrap();
        let s = PermGroup::from_generators(n, vec![t, c]).unwrap();
        assert_eq!(s.order_u64(), factorial(n as u64), "S{n}");
        assert_eq!(
            s.derived_subgroup().order_u64(),
            factorial(n as u64) / 2,
            "A{n}"
        );
    }
}

#[test]
fn embedded_generators_pass_startup_checks() {
    let g = m11::m11();
    let v = m11::validate(&g).unwrap();
    assert_eq!(v.order, 7920);
    assert!(v.simple);
    assert_eq!(v.transitivity, 4);
    assert!(m11::load_validated().is_ok());
}

#[test]
fn broken_generators_fail_validation() {
    // Dropping one generator leaves a cyclic group of order 11.
    let g = PermGroup::from_generators(11, vec![m11::generators()[0].clone()]).unwrap();
    let v = m11::validate(&g).unwrap();
    assert!(!v.passed());
}

fn random_subgroup(parent: &PermGroup, rng: &mut ChaCha8Rng) -> PermGroup {
    let k = rng.gen_range(1..=3);
    let gens: Vec<Permutation> = (0..k).map(|_| parent.random_element(rng)).collect();
    PermGroup::from_generators(parent.degree(), gens).unwrap()
}

#[test]
fn bsgs_order_on_random_subgroups() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g11 = m11::m11();
    let classes = atlas_core::enumerate_subgroup_classes(&g11, Default::default()).unwrap();
    let twelve = classes.iter().find(|c| c.index == 12).unwrap();
    let g12 = coset_action(&g11, &twelve.representative, DEFAULT_INDEX_CAP)
        .unwrap()
        .image()
        .clone();
    let s9 = PermGroup::from_generators(
        9,
        vec![
            Permutation::from_cycles(9, &[vec![0, 1]]).unwrap(),
            Permutation::from_cycles(9, &[(0..9).collect()]).unwrap(),
        ],
    )
    .unwrap();
    let parents = [&g11, &g12, &s9];
    for i in 0..50 {
        let parent = parents[i % parents.len()];
        let h = random_subgroup(parent, &mut rng);
        let product: BigUint = h
            .orbit_lengths()
            .iter()
            .map(|&l| BigUint::from(l))
            .product();
        assert_eq!(h.order(), product, "subgroup {i}");
        assert!(h.verify_strong_generators(), "subgroup {i}");
        assert!(h.is_subgroup_of(parent));
        let randomized =
            PermGroup::with_order_bound(h.generators().to_vec(), &parent.order()).unwrap();
        assert_eq!(randomized.order(), h.order(), "subgroup {i}");
        if h.order_u64() <= 20_000 {
            assert_eq!(
                h.elements(20_000).unwrap().len() as u64,
                h.order_u64(),
                "subgroup {i}"
            );
        }
    }
}

#[test]
fn membership_and_stabilizers_agree() {
    let g = m11::m11();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let stab = g.point_stabilizer(0).unwrap();
    assert_eq!(stab.order_u64(), 720);
    let set = g.setwise_stabilizer(&[0, 1, 2, 3, 4]).unwrap();
    for _ in 0..200 {
        let x = g.random_element(&mut rng);
        assert!(g.contains(&x));
        assert_eq!(stab.contains(&x), x.apply(0) == 0);
        let fixes_set = (0..5).all(|p| x.apply(p) < 5);
        assert_eq!(set.contains(&x), fixes_set);
    }
    let odd = Permutation::from_cycles(11, &[vec![0, 1]]).unwrap();
    assert!(!g.contains(&odd));
}
