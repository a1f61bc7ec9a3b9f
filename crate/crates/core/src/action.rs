//! Transitive actions on right cosets, suborbits and orbit pairing.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{orbits_under, PermGroup};
use crate::perm::Permutation;
use crate::search::ELEMENT_LIMIT;

/// Default cap on the index of a coset action.
pub const DEFAULT_INDEX_CAP: u64 = 10_000;

/// A transitive action of `source` on the right cosets of `subgroup`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    source: PermGroup,
    subgroup: PermGroup,
    /// Id of the subgroup class this action was built from, when known.
    pub class_id: Option<usize>,
    degree: usize,
    image_generators: Vec<Permutation>,
    image: PermGroup,
    kernel_order: u64,
    cosets: Option<CosetData>,
}

/// Coset representatives in point order, used to map arbitrary elements.
#[derive(Clone, Debug)]
struct CosetData {
    reps: Vec<Permutation>,
    sub_elements: Vec<Permutation>,
    lookup: HashMap<Permutation, usize>,
}

impl CosetData {
    fn canon(&self, x: &Permutation) -> Permutation {
        self.sub_elements
            .iter()
            .map(|h| h.then(x))
            .min()
            .expect("nonempty subgroup")
    }

    fn image_of(&self, g: &Permutation) -> Permutation {
        let images = self
            .reps
            .iter()
            .map(|r| self.lookup[&self.canon(&r.then(g))] as u32)
            .collect();
        Permutation::from_images_unchecked(images)
    }
}

impl GroupAction {
    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn subgroup(&self) -> &PermGroup {
        &self.subgroup
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Images of the source generators, in the same order.
    pub fn image_generators(&self) -> &[Permutation] {
        &self.image_generators
    }

    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel_order
    }

    pub fn source_order(&self) -> u64 {
        self.source.order_u64()
    }

    /// Image of an element of the source group, available for coset
    /// actions and for actions whose images are the source generators.
    pub fn image_of(&self, g: &Permutation) -> Option<Permutation> {
        if let Some(c) = &self.cosets {
            return Some(c.image_of(g));
        }
        (self.image_generators == self.source.generators()).then(|| g.clone())
    }

    /// Generators of the stabilizer of `alpha` inside the source group, when
    /// they can be read off the coset representatives.
    pub fn stabilizer_in_source(&self, alpha: usize) -> Option<Vec<Permutation>> {
        let c = self.cosets.as_ref()?;
        let r = c.reps.get(alpha)?;
        let r_inv = r.inverse();
        Some(
            self.subgroup
                .generators()
                .iter()
                .map(|h| r_inv.then(h).then(r))
                .collect(),
        )
    }

    fn shares_source(&self, other: &GroupAction) -> bool {
        self.source.generators() == other.source.generators()
    }

    /// Wraps an existing transitive permutation representation (for example
    /// the natural one). `images[i]` must be the image of source generator `i`.
    pub fn from_images(source: &PermGroup, images: Vec<Permutation>) -> Result<GroupAction> {
        if images.len() != source.generators().len() || images.is_empty() {
            return Err(Error::Invalid(
                "one image per source generator required".into(),
            ));
        }
        let degree = images[0].degree();
        let bound = source.order();
        let image = PermGroup::with_order_bound(images.clone(), &bound)?;
        if !image.is_transitive() {
            return Err(Error::Invalid("action is not transitive".into()));
        }
        let kernel_order = source.order_u64() / image.order_u64();
        let subgroup = PermGroup::trivial(source.degree());
        Ok(GroupAction {
            source: source.clone(),
            subgroup,
            class_id: None,
            degree,
            image_generators: images,
            image,
            kernel_order,
            cosets: None,
        })
    }

    pub fn descriptor(&self) -> ActionDescriptor {
        let sub = suborbits(self, 0, self).expect("same action");
        let mut sizes: Vec<usize> = sub.orbits.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        ActionDescriptor {
            subgroup_order: self.source_order() / self.degree as u64,
            index: self.degree as u64,
            degree: self.degree,
            transitivity_degree: transitivity_degree(self),
            suborbit_sizes: sizes,
        }
    }
}

/// Summary of an action for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDescriptor {
    pub subgroup_order: u64,
    pub index: u64,
    pub degree: usize,
    pub transitivity_degree: usize,
    pub suborbit_sizes: Vec<usize>,
}

/// Action of `group` on the right cosets of `subgroup` by right
/// multiplication. Cosets are ordered by their lexicographically least
/// element; coset 0 is the subgroup itself.
pub fn coset_action(
    group: &PermGroup,
    subgroup: &PermGroup,
    index_cap: u64,
) -> Result<GroupAction> {
    if !subgroup.is_subgroup_of(group) {
        return Err(Error::NotSubgroup("coset action".into()));
    }
    let g_order = group.order();
    let h_order = subgroup.order();
    let index = &g_order / &h_order;
    if index > BigUint::from(index_cap) {
        return Err(Error::IndexCap {
            index: index.to_string().parse().unwrap_or(u64::MAX),
            cap: index_cap,
        });
    }
    let h_elems = subgroup.elements(ELEMENT_LIMIT)?;
    let canon = |x: &Permutation| -> Permutation {
        h_elems
            .iter()
            .map(|h| h.then(x))
            .min()
            .expect("nonempty subgroup")
    };
    let gens = group.generators().to_vec();
    let start = Permutation::identity(group.degree());
    let mut reps = vec![start.clone()];
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    seen.insert(start, 0);
    let mut i = 0;
    while i < reps.len() {
        for s in &gens {
            let y = canon(&reps[i].then(s));
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), reps.len());
                reps.push(y);
            }
        }
        i += 1;
    }
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| reps[a].cmp(&reps[b]));
    let mut position = vec![0usize; reps.len()];
    for (pos, &r) in order.iter().enumerate() {
        position[r] = pos;
    }
    let degree = reps.len();
    let mut image_generators = Vec::with_capacity(gens.len());
    for s in &gens {
        let mut images = vec![0u32; degree];
        for (r, rep) in reps.iter().enumerate() {
            let target = seen[&canon(&rep.then(s))];
            images[position[r]] = position[target] as u32;
        }
        image_generators.push(Permutation::from_images_unchecked(images));
    }
    let image = if image_generators.is_empty() {
        PermGroup::trivial(degree)
    } else {
        PermGroup::with_order_bound(image_generators.clone(), &g_order)?
    };
    let kernel_order = group.order_u64() / image.order_u64();
    let mut sorted_reps = vec![Permutation::identity(group.degree()); degree];
    for (r, rep) in reps.into_iter().enumerate() {
        sorted_reps[position[r]] = rep;
    }
    let lookup = sorted_reps
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    Ok(GroupAction {
        source: group.clone(),
        subgroup: subgroup.clone(),
        class_id: None,
        degree,
        image_generators,
        image,
        kernel_order,
        cosets: Some(CosetData {
            reps: sorted_reps,
            sub_elements: h_elems,
            lookup,
        }),
    })
}

/// Largest `t` for which `group` is `t`-transitive on its points; a group of
/// degree at most one is assigned 0.
pub fn transitivity_of(group: &PermGroup) -> usize {
    let n = group.degree();
    if n <= 1 {
        return 0;
    }
    let mut fixed: Vec<usize> = Vec::new();
    let mut t = 0;
    while fixed.len() < n {
        let stab = if fixed.is_empty() {
            group.clone()
        } else {
            group.pointwise_stabilizer(&fixed).expect("points in range")
        };
        let next = (0..n).find(|x| !fixed.contains(x)).unwrap();
        let orbit = stab.orbit_of(next).expect("in range");
        if orbit.len() != n - fixed.len() {
            break;
        }
        t += 1;
        fixed.push(next);
    }
    t
}

pub fn transitivity_degree(action: &GroupAction) -> usize {
    transitivity_of(action.image())
}

/// Orbits of a point stabilizer of one action on the points of another.
#[derive(Clone, Debug)]
pub struct Suborbits {
    pub alpha: usize,
    /// Orbits on the second action's points, sorted, ordered by least point.
    pub orbits: Vec<Vec<usize>>,
    /// `orbit_index[x]` is the orbit containing point `x`.
    pub orbit_index: Vec<usize>,
    /// Order of the stabilizer of `alpha` in the source group.
    pub stabilizer_order: u64,
    /// Generators of that stabilizer as permutations of the second action.
    pub stabilizer_generators: Vec<Permutation>,
    same_action: bool,
}

impl Suborbits {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn same_action(&self) -> bool {
        self.same_action
    }
}

/// Joint action on the disjoint union of two actions' point sets.
pub(crate) fn combined_group(a1: &GroupAction, a2: &GroupAction) -> Result<PermGroup> {
    if !a1.shares_source(a2) {
        return Err(Error::SourceMismatch);
    }
    let m = a1.degree;
    let n = a2.degree;
    let gens: Vec<Permutation> = a1
        .image_generators
        .iter()
        .zip(&a2.image_generators)
        .map(|(g1, g2)| {
            let mut images: Vec<u32> = g1.images().to_vec();
            images.extend(g2.images().iter().map(|&x| x + m as u32));
            Permutation::from_images_unchecked(images)
        })
        .collect();
    if gens.is_empty() {
        return Ok(PermGroup::trivial(m + n));
    }
    PermGroup::with_order_bound(gens, &a1.source.order())
}

/// Restriction of a permutation of `m + n` points to the last `n`.
pub(crate) fn restrict_tail(p: &Permutation, m: usize) -> Permutation {
    Permutation::from_images_unchecked(p.images()[m..].iter().map(|&x| x - m as u32).collect())
}

/// Orbits of `G_alpha` (stabilizer in the first action) on the points of the
/// second action.
pub fn suborbits(omega1: &GroupAction, alpha: usize, omega2: &GroupAction) -> Result<Suborbits> {
    if alpha >= omega1.degree {
        return Err(Error::PointOutOfRange {
            point: alpha,
            degree: omega1.degree,
        });
    }
    let m = omega1.degree;
    let n = omega2.degree;
    let same = omega1.shares_source(omega2)
        && omega1.degree == omega2.degree
        && omega1.image_generators == omega2.image_generators;
    let direct = if !omega1.shares_source(omega2) {
        return Err(Error::SourceMismatch);
    } else if same {
        None
    } else {
        omega1.stabilizer_in_source(alpha).and_then(|hs| {
            hs.iter()
                .map(|h| omega2.image_of(h))
                .collect::<Option<Vec<Permutation>>>()
        })
    };
    let stabilizer_generators: Vec<Permutation> = if same {
        omega1.image.point_stabilizer(alpha)?.strong_generators()
    } else if let Some(gens) = direct {
        gens
    } else {
        let joint = combined_group(omega1, omega2)?;
        joint
            .point_stabilizer(alpha)?
            .strong_generators()
            .iter()
            .map(|g| restrict_tail(g, m))
            .collect()
    };
    let orbits = orbits_under(&stabilizer_generators, n);
    let mut orbit_index = vec![0; n];
    for (i, o) in orbits.iter().enumerate() {
        for &x in o {
            orbit_index[x] = i;
        }
    }
    Ok(Suborbits {
        alpha,
        orbits,
        orbit_index,
        stabilizer_order: omega1.source_order() / m as u64,
        stabilizer_generators,
        same_action: same,
    })
}

/// Pairing on suborbits: `pairing[i]` is the index of the orbit paired with
/// orbit `i`, i.e. the orbit containing `alpha g^-1` for any `g` with
/// `alpha g` in orbit `i`.
pub fn orbit_pairing(action: &GroupAction, sub: &Suborbits) -> Result<Vec<usize>> {
    if !sub.same_action || sub.orbit_index.len() != action.degree {
        return Err(Error::PairingNeedsSameAction);
    }
    let orbit = action.image.orbit_of(sub.alpha)?;
    Ok(sub
        .orbits
        .iter()
        .map(|o| {
            let g = orbit.witness(o[0]).expect("transitive action");
            let back = g.inverse().apply(sub.alpha);
            sub.orbit_index[back]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::m11::m11;

    fn natural(g: &PermGroup) -> GroupAction {
        GroupAction::from_images(g, g.generators().to_vec()).unwrap()
    }

    #[test]
    fn point_stabilizer_action_has_degree_11() {
        let g = m11();
        let h = g.point_stabilizer(0).unwrap();
        let a = coset_action(&g, &h, DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(a.degree(), 11);
        assert_eq!(a.kernel_order(), 1);
        assert_eq!(transitivity_degree(&a), 4);
        assert!(a.image().is_transitive());
    }

    #[test]
    fn whole_group_gives_degree_one() {
        let g = m11();
        let a = coset_action(&g, &g, DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(a.degree(), 1);
        assert_eq!(a.kernel_order(), 7920);
        assert_eq!(transitivity_degree(&a), 0);
    }

    #[test]
    fn index_cap_enforced() {
        let g = m11();
        let h = g.pointwise_stabilizer(&[0, 1]).unwrap();
        assert!(matches!(
            coset_action(&g, &h, 100),
            Err(Error::IndexCap {
                index: 110,
                cap: 100
            })
        ));
        let bad = PermGroup::new(vec![Permutation::parse("(0,1)", 11).unwrap()]).unwrap();
        assert!(matches!(
            coset_action(&g, &bad, DEFAULT_INDEX_CAP),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn natural_suborbits() {
        let g = m11();
        let a = natural(&g);
        let s = suborbits(&a, 0, &a).unwrap();
        assert_eq!(s.orbits, vec![vec![0], (1..11).collect::<Vec<_>>()]);
        assert_eq!(s.stabilizer_order, 720);
        assert_eq!(orbit_pairing(&a, &s).unwrap(), vec![0, 1]);
    }

    #[test]
    fn cross_action_suborbits_partition_points() {
        let g = m11();
        let a11 = natural(&g);
        let pairs = g.setwise_stabilizer(&[0, 1]).unwrap();
        let a55 = coset_action(&g, &pairs, DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(a55.degree(), 55);
        let s = suborbits(&a55, 0, &a11).unwrap();
        let total: usize = s.orbits.iter().map(Vec::len).sum();
        assert_eq!(total, 11);
        let mut sizes: Vec<usize> = s.orbits.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 9]);
        assert!(matches!(
            orbit_pairing(&a11, &s),
            Err(Error::PairingNeedsSameAction)
        ));
    }

    #[test]
    fn trivial_stabilizer_gives_singletons() {
        let g = m11();
        let reg = coset_action(&g, &PermGroup::trivial(11), DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(reg.degree(), 7920);
        let a11 = natural(&g);
        let s = suborbits(&reg, 0, &a11).unwrap();
        assert_eq!(s.orbits.len(), 11);
        assert_eq!(transitivity_degree(&reg), 1);
    }

    #[test]
    fn mismatched_sources_rejected() {
        let g = m11();
        let s5 = PermGroup::new(vec![
            Permutation::parse("(0,1,2,3,4)", 5).unwrap(),
            Permutation::parse("(0,1)", 5).unwrap(),
        ])
        .unwrap();
        let a = natural(&g);
        let b = natural(&s5);
        assert!(matches!(suborbits(&a, 0, &b), Err(Error::SourceMismatch)));
    }
}
