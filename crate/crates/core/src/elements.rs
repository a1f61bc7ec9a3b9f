//! Explicit element tables for small permutation groups (|G| ≤ 10^5).
//!
//! Subgroups are handled as bitsets over element indices, which keeps the
//! subgroup-lattice code free of repeated Schreier–Sims runs.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::search::ELEMENT_LIMIT;

/// A subset of the element table.
pub type ElemSet = FixedBitSet;

#[derive(Debug)]
enum Index {
    Packed(FxHashMap<u64, u32>),
    General(FxHashMap<Permutation, u32>),
}

/// All elements of a group, sorted lexicographically by image array (the
/// identity is element 0).
#[derive(Debug)]
pub struct ElementTable {
    group: PermGroup,
    elements: Vec<Permutation>,
    index: Index,
    orders: Vec<u32>,
    inverse: Vec<u32>,
}

fn pack(p: &Permutation) -> u64 {
    p.images()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << (4 * i)))
}

impl ElementTable {
    pub fn new(group: &PermGroup) -> Result<Self> {
        let mut elements = group.elements(ELEMENT_LIMIT)?;
        elements.sort_unstable();
        let index = if group.degree() <= 16 {
            Index::Packed(
                elements
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (pack(p), i as u32))
                    .collect(),
            )
        } else {
            Index::General(
                elements
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.clone(), i as u32))
                    .collect(),
            )
        };
        let mut table = ElementTable {
            group: group.clone(),
            orders: elements.iter().map(|p| p.order() as u32).collect(),
            inverse: Vec::new(),
            elements,
            index,
        };
        table.inverse = (0..table.len())
            .map(|i| table.index_of(&table.elements[i].inverse()).unwrap())
            .collect();
        Ok(table)
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u32> {
        match &self.index {
            Index::Packed(m) => m.get(&pack(p)).copied(),
            Index::General(m) => m.get(p).copied(),
        }
    }

    pub fn order_of(&self, i: u32) -> u32 {
        self.orders[i as usize]
    }

    pub fn inverse_of(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.elements[a as usize].then(&self.elements[b as usize]);
        self.index_of(&p).expect("closed under multiplication")
    }

    /// `g^-1 h g`.
    #[inline]
    pub fn conj(&self, h: u32, g: u32) -> u32 {
        let p = self.elements[h as usize].conjugate_by(&self.elements[g as usize]);
        self.index_of(&p).expect("closed under conjugation")
    }

    pub fn empty_set(&self) -> ElemSet {
        FixedBitSet::with_capacity(self.len())
    }

    /// Subgroup generated by the given element indices.
    pub fn closure(&self, gens: &[u32]) -> ElemSet {
        let mut set = self.empty_set();
        set.insert(0);
        let mut list = vec![0u32];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !set.contains(y as usize) {
                    set.insert(y as usize);
                    list.push(y);
                }
            }
            i += 1;
        }
        set
    }

    /// A small generating set for a subgroup given as a bitset: elements are
    /// taken greedily by decreasing order.
    pub fn generators_of(&self, set: &ElemSet) -> Vec<u32> {
        let mut members: Vec<u32> = set.ones().map(|i| i as u32).collect();
        members.sort_by_key(|&i| (std::cmp::Reverse(self.orders[i as usize]), i));
        let target = set.count_ones(..);
        let mut gens = Vec::new();
        let mut closure = self.closure(&[]);
        for x in members {
            if closure.count_ones(..) == target {
                break;
            }
            if !closure.contains(x as usize) {
                gens.push(x);
                closure = self.closure(&gens);
            }
        }
        gens
    }

    pub fn to_perm_group(&self, set: &ElemSet) -> PermGroup {
        let gens: Vec<Permutation> = self
            .generators_of(set)
            .into_iter()
            .map(|i| self.elements[i as usize].clone())
            .collect();
        let order = num_bigint::BigUint::from(set.count_ones(..));
        if gens.is_empty() {
            return PermGroup::trivial(self.group.degree());
        }
        PermGroup::with_order_bound(gens, &order).expect("uniform degree")
    }

    pub fn from_perm_group(&self, h: &PermGroup) -> Option<ElemSet> {
        let gens: Option<Vec<u32>> = h.generators().iter().map(|g| self.index_of(g)).collect();
        Some(self.closure(&gens?))
    }

    /// Conjugate of a subgroup by element `g`.
    pub fn conjugate_set(&self, set: &ElemSet, g: u32) -> ElemSet {
        let mut out = self.empty_set();
        for h in set.ones() {
            out.insert(self.conj(h as u32, g) as usize);
        }
        out
    }

    /// Normalizer of a subgroup (as a bitset), testing generator images.
    pub fn normalizer(&self, set: &ElemSet) -> ElemSet {
        let gens = self.generators_of(set);
        let mut out = self.empty_set();
        for g in 0..self.len() as u32 {
            if gens.iter().all(|&h| set.contains(self.conj(h, g) as usize)) {
                out.insert(g as usize);
            }
        }
        out
    }

    /// Representatives of right cosets `N g` of the subgroup `n`.
    pub fn right_transversal(&self, n: &ElemSet) -> Vec<u32> {
        let members: Vec<u32> = n.ones().map(|i| i as u32).collect();
        let mut covered = self.empty_set();
        let mut reps = Vec::new();
        for g in 0..self.len() as u32 {
            if covered.contains(g as usize) {
                continue;
            }
            reps.push(g);
            for &x in &members {
                covered.insert(self.mul(x, g) as usize);
            }
        }
        reps
    }

    /// Conjugacy classes of elements, each as sorted indices; ordered by
    /// (element order, smallest index).
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let gens: Vec<u32> = self
            .group
            .generators()
            .iter()
            .filter_map(|g| self.index_of(g))
            .collect();
        let mut seen = self.empty_set();
        let mut classes = Vec::new();
        for x in 0..self.len() as u32 {
            if seen.contains(x as usize) {
                continue;
            }
            seen.insert(x as usize);
            let mut class = vec![x];
            let mut i = 0;
            while i < class.len() {
                let y = class[i];
                for &g in &gens {
                    let z = self.conj(y, g);
                    if !seen.contains(z as usize) {
                        seen.insert(z as usize);
                        class.push(z);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes.sort_by_key(|c| (self.orders[c[0] as usize], c[0]));
        classes
    }
}
