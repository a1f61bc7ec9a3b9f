//! Backtrack searches over a stabilizer chain: setwise stabilizers and
//! subgroup conjugacy.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{orbit_under, PermGroup};
use crate::perm::Permutation;

/// Elements enumerated for brute-force fallbacks are capped here.
pub const ELEMENT_LIMIT: u64 = 100_000;

pub(crate) fn setwise_stabilizer(group: &PermGroup, set: &[usize]) -> Result<PermGroup> {
    let n = group.degree();
    let mut in_set = vec![false; n];
    for &x in set {
        if x >= n {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: n,
            });
        }
        in_set[x] = true;
    }
    let size = in_set.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Ok(group.clone());
    }
    // Base the search on the smaller side so every constrained point is a
    // base point.
    let prefix: Vec<usize> = if size * 2 <= n {
        (0..n).filter(|&x| in_set[x]).collect()
    } else {
        (0..n).filter(|&x| !in_set[x]).collect()
    };
    let work = group.rebase(&prefix);
    let depth = work.depth();
    let mut found: Vec<Permutation> = Vec::new();

    for l in (0..depth).rev() {
        let b = work.level_base(l);
        let mut k_orbit = vec![false; n];
        for x in orbit_under(&found, n, b) {
            k_orbit[x] = true;
        }
        let candidates: Vec<usize> = work.level_orbit(l).iter().map(|&x| x as usize).collect();
        for gamma in candidates {
            if k_orbit[gamma] || in_set[gamma] != in_set[b] {
                continue;
            }
            let u = work.level_transversal(l, gamma);
            if let Some(g) = extend_to_stabilizer(&work, l + 1, u, &in_set) {
                found.push(g);
                k_orbit.iter_mut().for_each(|x| *x = false);
                for x in orbit_under(&found, n, b) {
                    k_orbit[x] = true;
                }
            }
        }
    }
    PermGroup::from_generators(n, found)
}

/// Finds `g = v * h` with `v` in the stabilizer of the first `level` base
/// points that maps the set onto itself.
fn extend_to_stabilizer(
    work: &PermGroup,
    level: usize,
    h: Permutation,
    in_set: &[bool],
) -> Option<Permutation> {
    if level == work.depth() {
        let ok = (0..in_set.len()).all(|x| !in_set[x] || in_set[h.apply(x)]);
        return ok.then_some(h);
    }
    let b = work.level_base(level);
    for &delta in work.level_orbit(level) {
        let delta = delta as usize;
        let image = h.apply(delta);
        if in_set[image] != in_set[b] {
            continue;
        }
        let next = work.level_transversal(level, delta).then(&h);
        if let Some(g) = extend_to_stabilizer(work, level + 1, next, in_set) {
            return Some(g);
        }
    }
    None
}

/// Reference implementation: filters every element of the group.
pub fn setwise_stabilizer_by_filter(group: &PermGroup, set: &[usize]) -> Result<PermGroup> {
    let n = group.degree();
    let mut in_set = vec![false; n];
    for &x in set {
        if x >= n {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: n,
            });
        }
        in_set[x] = true;
    }
    let mut stab = PermGroup::trivial(n);
    for g in group.elements(ELEMENT_LIMIT)? {
        if set.iter().all(|&x| in_set[g.apply(x)]) {
            stab.extend(g);
        }
    }
    Ok(stab)
}

/// Frequencies of element orders; `None` above the enumeration limit.
pub fn element_order_profile(group: &PermGroup) -> Option<BTreeMap<u64, u64>> {
    let els = group.elements(ELEMENT_LIMIT).ok()?;
    let mut m = BTreeMap::new();
    for g in els {
        *m.entry(g.order()).or_insert(0) += 1;
    }
    Some(m)
}

fn orbit_lengths(g: &PermGroup) -> Vec<usize> {
    let mut v: Vec<usize> = g.orbits().iter().map(Vec::len).collect();
    v.sort_unstable();
    v
}

/// Returns `g` in `group` with `h^g = k`, or `None`.
pub fn are_conjugate(
    group: &PermGroup,
    h: &PermGroup,
    k: &PermGroup,
) -> Result<Option<Permutation>> {
    if !h.is_subgroup_of(group) {
        return Err(Error::NotSubgroup("first argument".into()));
    }
    if !k.is_subgroup_of(group) {
        return Err(Error::NotSubgroup("second argument".into()));
    }
    if h.order() != k.order() || orbit_lengths(h) != orbit_lengths(k) {
        return Ok(None);
    }
    if element_order_profile(h) != element_order_profile(k) {
        return Ok(None);
    }
    let hgens: Vec<&Permutation> = h.generators().iter().filter(|g| !g.is_identity()).collect();
    for g in group.elements(ELEMENT_LIMIT)? {
        if hgens.iter().all(|x| k.contains(&x.conjugate_by(&g))) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}
