mod common;

use std::collections::BTreeMap;

use atlas_core::analytics::{
    default_t_cap, intersection_numbers, lambda_cascade, max_t_lambda, DEFAULT_INTERSECTION_CAP,
};
use atlas_core::canon::{aut_order_report, iso_classes, CanonOptions};
use atlas_core::design::{
    build_design, thm1_parameters, DesignCollector, IncidenceStructure, SweepOptions,
};
use atlas_core::GroupAction;

fn sweep(n: u64, block_sizes: (usize, usize)) -> Vec<(IncidenceStructure, &'static GroupAction)> {
    sweep_t(n, block_sizes, 2, 1)
}

/// Designs from every subgroup class of order at least `min_order`.
fn sweep_t(
    n: u64,
    block_sizes: (usize, usize),
    min_t: usize,
    min_order: u64,
) -> Vec<(IncidenceStructure, &'static GroupAction)> {
    let f = common::m11_fixture();
    let mut out = Vec::new();
    for omega2 in f.of_index(n) {
        let mut col = DesignCollector::new(omega2, min_t).unwrap();
        let opts = SweepOptions {
            max_suborbits: 24,
            block_sizes: Some(block_sizes),
            min_t,
        };
        for a in f
            .actions
            .iter()
            .filter(|a| 7920 / a.degree() as u64 >= min_order)
        {
            match col.sweep(a, &opts) {
                Ok(_) | Err(atlas_core::Error::Budget(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        out.extend(col.into_designs().into_iter().map(|d| (d, omega2)));
    }
    out
}

/// Counts blocks through every t-subset directly.
fn brute_force_lambda(d: &IncidenceStructure, t: usize) -> Option<u64> {
    let v = d.v();
    let mut sets: Vec<u128> = Vec::new();
    for b in d.blocks() {
        sets.push(b.iter().fold(0u128, |m, &x| m | 1 << x));
    }
    let mut lambda = None;
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        let s = idx.iter().fold(0u128, |m, &x| m | 1 << x);
        let c = sets.iter().filter(|&&b| b & s == s).count() as u64;
        match lambda {
            None => lambda = Some(c),
            Some(l) if l != c => return None,
            _ => {}
        }
        let mut i = t;
        loop {
            if i == 0 {
                return lambda;
            }
            i -= 1;
            if idx[i] < v - t + i {
                idx[i] += 1;
                for j in i + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn small_degree_table() {
    let expected: BTreeMap<&str, (usize, usize, &str)> = [
        ("3-(11,3,1)", (165, 1, "39916800")),
        ("4-(11,4,1)", (330, 1, "39916800")),
        ("4-(11,5,1)", (66, 1, "7920")),
        ("4-(11,5,6)", (396, 1, "7920")),
        ("3-(12,3,1)", (220, 1, "479001600")),
        ("3-(12,4,3)", (165, 1, "7920")),
        ("3-(12,4,6)", (330, 1, "7920")),
        ("3-(12,5,6)", (132, 1, "7920")),
        ("3-(12,5,30)", (660, 1, "7920")),
        ("3-(12,6,2)", (22, 1, "7920")),
        ("3-(12,6,10)", (110, 1, "7920")),
        ("5-(12,6,6)", (792, 1, "95040")),
        ("2-(22,7,36)", (396, 1, "7920")),
        ("2-(22,7,180)", (1980, 1, "7920")),
        ("2-(22,7,360)", (3960, 3, "7920")),
        ("2-(22,7,720)", (7920, 2, "7920")),
        ("3-(22,7,18)", (792, 1, "15840")),
        ("3-(22,7,90)", (3960, 3, "15840")),
        ("3-(22,7,180)", (7920, 1, "7920")),
    ]
    .into_iter()
    .collect();
    let opts = CanonOptions::default();
    let mut got = BTreeMap::new();
    for n in [11u64, 12, 22] {
        let mut rows: BTreeMap<String, Vec<(IncidenceStructure, &GroupAction)>> = BTreeMap::new();
        for (d, omega2) in sweep(n, (3, n as usize / 2)) {
            let td = max_t_lambda(&d, default_t_cap(d.v())).unwrap();
            if td.t >= 2 {
                let key = format!("{}-({},{},{})", td.t, d.v(), d.k(), td.lambda());
                rows.entry(key).or_default().push((d, omega2));
            }
        }
        for (key, members) in rows {
            let designs: Vec<IncidenceStructure> = members.iter().map(|m| m.0.clone()).collect();
            let iso = iso_classes(&designs, &opts).unwrap();
            assert!(iso.unresolved.is_empty());
            let mut auts: Vec<String> = iso
                .classes
                .iter()
                .map(|c| {
                    let (d, omega2) = &members[c[0]];
                    aut_order_report(d, omega2.image_generators(), &opts)
                        .unwrap()
                        .aut_order
                        .to_string()
                })
                .collect();
            auts.dedup();
            got.insert(key, (designs[0].b(), iso.classes.len(), auts));
        }
    }
    assert_eq!(got.len(), 19, "{:?}", got.keys().collect::<Vec<_>>());
    for (key, (b, count, aut)) in expected {
        let row = got.get(key).unwrap_or_else(|| panic!("missing {key}"));
        assert_eq!((row.0, row.1), (b, count), "{key}");
        assert_eq!(row.2, vec![aut.to_string()], "{key}");
    }
}

#[test]
fn stabilizer_formulas_match_direct_counts() {
    let f = common::m11_fixture();
    let mut checked = 0;
    let mut pool = Vec::new();
    // Every orbit union is a 1-design, so this covers all structures on 11
    // and 12 points; the larger degrees keep the bigger point stabilizers.
    for n in [11u64, 12] {
        pool.extend(sweep_t(n, (1, n as usize - 1), 1, 1));
    }
    pool.extend(sweep_t(22, (1, 11), 1, 2));
    // Table rows on 22 points, including those from the trivial subgroup.
    pool.extend(sweep(22, (3, 11)));
    for n in [55u64, 66] {
        pool.extend(sweep_t(n, (1, 4), 1, 4));
    }
    for (d, omega2) in &pool {
        let p = &d.provenance[0];
        let omega1 = &f.actions[p.omega1_class.unwrap()];
        let subset: Vec<usize> = (0..64).filter(|&i| p.orbit_mask >> i & 1 == 1).collect();
        let th = thm1_parameters(omega1, 0, omega2, &subset).unwrap();
        let r = d.replication().unwrap();
        assert_eq!(
            (th.n, th.k, th.r, th.b),
            (d.v() as u64, d.k() as u64, r as u64, d.b() as u64)
        );
        assert_eq!(d.b() * d.k(), d.v() * r);
        // The provenance regenerates the same block set.
        let again = build_design(omega1, 0, omega2, &subset).unwrap();
        assert_eq!(again.blocks(), d.blocks());
        checked += 1;
    }
    assert!(checked > 300, "{checked}");
}

#[test]
fn strength_agrees_with_brute_force() {
    for (d, _) in sweep(12, (3, 6)) {
        let td = max_t_lambda(&d, 5).unwrap();
        assert_eq!(brute_force_lambda(&d, td.t), Some(td.lambda()));
        if td.t < 5 && td.t < d.k() {
            assert_eq!(brute_force_lambda(&d, td.t + 1), None);
        }
        let cascade = lambda_cascade(td.t, d.v(), d.k(), td.lambda()).unwrap();
        assert_eq!(cascade, td.lambdas);
    }
}

#[test]
fn full_orbit_union_is_degenerate_and_never_a_row() {
    let f = common::m11_fixture();
    for n in [11u64, 12, 22, 55] {
        let omega2 = f.of_index(n)[0];
        for omega1 in f.actions.iter().take(20) {
            let sub = atlas_core::action::suborbits(omega1, 0, omega2).unwrap();
            let all: Vec<usize> = (0..sub.len()).collect();
            let d = build_design(omega1, 0, omega2, &all).unwrap();
            assert!(d.is_degenerate());
            assert_eq!((d.v(), d.k(), d.b()), (n as usize, n as usize, 1));
            assert_eq!(d.replication().unwrap(), 1);
        }
    }
    // No degenerate structure survives a sweep with the default sizes.
    assert!(sweep(12, (3, 6)).iter().all(|(d, _)| !d.is_degenerate()));
}

#[test]
fn twelve_point_design_with_two_intersection_numbers() {
    let d = sweep(12, (6, 6))
        .into_iter()
        .map(|(d, _)| d)
        .find(|d| d.b() == 22)
        .unwrap();
    assert_eq!(max_t_lambda(&d, 5).unwrap().lambda(), 2);
    let prof = intersection_numbers(&d, DEFAULT_INTERSECTION_CAP).unwrap();
    assert!(prof.sizes.len() <= 2);
    assert_eq!(prof.quasi_symmetric(), Some((0, 3)));
}

#[test]
fn steiner_system_on_eleven_points() {
    let d = sweep(11, (5, 5))
        .into_iter()
        .map(|(d, _)| d)
        .find(|d| d.b() == 66)
        .unwrap();
    let td = max_t_lambda(&d, 5).unwrap();
    assert_eq!((td.t, td.lambda()), (4, 1));
    // Two blocks share at most three points, and every size up to three
    // except zero occurs.
    let prof = intersection_numbers(&d, DEFAULT_INTERSECTION_CAP).unwrap();
    assert_eq!(
        prof.sizes.keys().copied().collect::<Vec<_>>(),
        vec![1, 2, 3]
    );
    assert_eq!(prof.quasi_symmetric(), None);
}
