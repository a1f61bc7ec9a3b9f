mod common;

use atlas_core::action::{orbit_pairing, suborbits, transitivity_degree};
use atlas_core::Error;

#[test]
fn coset_actions_are_faithful_and_transitive() {
    let f = common::m11_fixture();
    for (c, a) in f.classes.iter().zip(&f.actions) {
        assert_eq!(a.degree() as u64, c.index);
        if c.index > 1 {
            assert!(a.image().is_transitive());
            // M11 is simple, so every nontrivial action is faithful.
            assert_eq!(a.kernel_order(), 1);
            assert_eq!(a.image().order_u64(), 7920);
        }
    }
}

#[test]
fn transitivity_of_the_small_actions() {
    let f = common::m11_fixture();
    assert_eq!(transitivity_degree(f.of_index(11)[0]), 4);
    assert_eq!(transitivity_degree(f.of_index(12)[0]), 3);
    assert_eq!(transitivity_degree(f.of_index(22)[0]), 1);
}

#[test]
fn pairing_is_an_involution_on_all_actions_up_to_144_points() {
    let f = common::m11_fixture();
    let mut systems = 0;
    for a in f.actions.iter().filter(|a| (2..=144).contains(&a.degree())) {
        let sub = suborbits(a, 0, a).unwrap();
        let p = orbit_pairing(a, &sub).unwrap();
        assert_eq!(sub.orbits.iter().map(Vec::len).sum::<usize>(), a.degree());
        for i in 0..sub.len() {
            assert_eq!(p[p[i]], i);
            assert_eq!(sub.orbits[i].len(), sub.orbits[p[i]].len());
        }
        assert_eq!(p[sub.orbit_index[0]], sub.orbit_index[0]);
        // Direct check against the definition with witnesses.
        let orbit = a.image().orbit_of(0).unwrap();
        for (i, o) in sub.orbits.iter().enumerate() {
            let g = orbit.witness(o[0]).unwrap();
            assert_eq!(sub.orbit_index[g.inverse().apply(0)], p[i]);
        }
        systems += 1;
    }
    assert_eq!(systems, 11);
}

#[test]
fn suborbits_of_the_55_point_action() {
    let f = common::m11_fixture();
    let a = f.of_index(55)[0];
    let sub = suborbits(a, 0, a).unwrap();
    let mut sizes: Vec<usize> = sub.orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 18, 36]);
    assert_eq!(sub.stabilizer_order, 144);
}

#[test]
fn pairing_needs_one_action() {
    let f = common::m11_fixture();
    let a = f.of_index(11)[0];
    let b = f.of_index(12)[0];
    let sub = suborbits(a, 0, b).unwrap();
    assert!(!sub.same_action());
    assert!(matches!(
        orbit_pairing(b, &sub),
        Err(Error::PairingNeedsSameAction)
    ));
}
