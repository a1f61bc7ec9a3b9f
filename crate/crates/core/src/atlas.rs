//! Conjugacy classes of subgroups of a small permutation group.
//!
//! Enumeration combines three passes:
//! 1. perfect subgroups, found as closures of element pairs whose first
//!    member runs over conjugacy class representatives;
//! 2. cyclic extension: `H < K` with `H` normal in `K` of prime index,
//!    starting from the trivial group and every perfect class;
//! 3. deduplication against a table holding every conjugate of every class
//!    found so far.
//!
//! The derived series of any subgroup ends in a perfect group, and the
//! subgroup is reached from that term by a chain of prime-index normal
//! extensions, so the passes are complete.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::elements::{ElemSet, ElementTable};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::search::ELEMENT_LIMIT;

/// Conjugacy-invariant summary used to order and bucket classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    /// `(element order, count)` pairs in increasing order.
    pub element_orders: Vec<(u32, u32)>,
    /// Derived length; `None` for non-solvable groups.
    pub derived_length: Option<usize>,
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: PermGroup,
    pub order: u64,
    pub index: u64,
    pub class_size: u64,
    pub normalizer_order: u64,
    pub solvable: bool,
    pub fingerprint: Fingerprint,
    elements: ElemSet,
}

impl SubgroupClass {
    pub fn elements(&self) -> &ElemSet {
        &self.elements
    }
}

/// Limits for enumeration.
#[derive(Clone, Copy, Debug)]
pub struct AtlasBudget {
    /// Largest group order accepted.
    pub max_group_order: u64,
    /// Cap on the number of stored subgroups (all conjugates counted).
    pub max_subgroups: usize,
}

impl Default for AtlasBudget {
    fn default() -> Self {
        AtlasBudget {
            max_group_order: ELEMENT_LIMIT,
            max_subgroups: 2_000_000,
        }
    }
}

/// Working state: the element table and every subgroup seen so far.
pub struct Lattice {
    table: ElementTable,
    budget: AtlasBudget,
    known: FxHashMap<ElemSet, usize>,
    classes: Vec<SubgroupClass>,
}

impl Lattice {
    pub fn new(group: &PermGroup, budget: AtlasBudget) -> Result<Self> {
        let order = group.order();
        if order > num_bigint::BigUint::from(budget.max_group_order) {
            return Err(Error::GroupTooLarge {
                order: order.to_string(),
                limit: budget.max_group_order,
            });
        }
        Ok(Lattice {
            table: ElementTable::new(group)?,
            budget,
            known: FxHashMap::default(),
            classes: Vec::new(),
        })
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    fn group_order(&self) -> u64 {
        self.table.len() as u64
    }

    /// Class id of a subgroup given by its elements.
    pub fn class_of(&self, set: &ElemSet) -> Option<usize> {
        self.known.get(set).copied()
    }

    /// Registers a subgroup; returns the new class id, or `None` if it is
    /// conjugate to a known class.
    fn register(&mut self, set: ElemSet) -> Result<Option<usize>> {
        if self.known.contains_key(&set) {
            return Ok(None);
        }
        let class = self.make_class(set)?;
        let id = self.classes.len();
        let normalizer = self.table.normalizer(&class.elements);
        for g in self.table.right_transversal(&normalizer) {
            let conj = self.table.conjugate_set(&class.elements, g);
            self.known.insert(conj, id);
        }
        if self.known.len() > self.budget.max_subgroups {
            return Err(Error::Budget(format!(
                "more than {} subgroups stored",
                self.budget.max_subgroups
            )));
        }
        self.classes.push(class);
        Ok(Some(id))
    }

    fn make_class(&self, set: ElemSet) -> Result<SubgroupClass> {
        let order = set.count_ones(..) as u64;
        let representative = self.table.to_perm_group(&set);
        let normalizer_order = self.table.normalizer(&set).count_ones(..) as u64;
        let mut hist: BTreeMap<u32, u32> = BTreeMap::new();
        for i in set.ones() {
            *hist.entry(self.table.order_of(i as u32)).or_insert(0) += 1;
        }
        let derived_length = representative.derived_length();
        Ok(SubgroupClass {
            order,
            index: self.group_order() / order,
            class_size: self.group_order() / normalizer_order,
            normalizer_order,
            solvable: derived_length.is_some(),
            fingerprint: Fingerprint {
                element_orders: hist.into_iter().collect(),
                derived_length,
            },
            representative,
            elements: set,
        })
    }

    /// Subgroups `K` with `H` normal of prime index in `K`, for `H` given by
    /// its elements. Returned sets are distinct but not conjugacy-reduced.
    fn prime_extensions(&self, h: &ElemSet) -> Vec<ElemSet> {
        let t = &self.table;
        let normalizer = t.normalizer(h);
        let members: Vec<u32> = h.ones().map(|i| i as u32).collect();
        let mut covered = h.clone();
        let mut out = Vec::new();
        for g in normalizer.ones() {
            if covered.contains(g) {
                continue;
            }
            let g = g as u32;
            let mut x = g;
            let mut m = 1u32;
            while !h.contains(x as usize) {
                x = t.mul(x, g);
                m += 1;
            }
            if !is_prime(m) {
                continue;
            }
            let mut k = h.clone();
            let mut power = 0u32;
            for _ in 1..m {
                power = if power == 0 { g } else { t.mul(power, g) };
                for &y in &members {
                    k.insert(t.mul(y, power) as usize);
                }
            }
            covered.union_with(&k);
            out.push(k);
        }
        out
    }

    /// One cyclic-extension step from the given classes; result is reduced
    /// up to conjugacy among itself and sorted by (order, fingerprint).
    pub fn cyclic_extension_step(&self, layer: &[SubgroupClass]) -> Result<Vec<SubgroupClass>> {
        let mut local = Lattice {
            table: ElementTable::new(self.table.group())?,
            budget: self.budget,
            known: FxHashMap::default(),
            classes: Vec::new(),
        };
        for class in layer {
            for k in self.prime_extensions(&class.elements) {
                local.register(k)?;
            }
        }
        let mut out = local.classes;
        sort_classes(&mut out);
        Ok(out)
    }

    /// Classes of perfect subgroups whose orders lie in `target_orders`.
    pub fn perfect_subgroup_search(&mut self, target_orders: &[u64]) -> Result<Vec<SubgroupClass>> {
        let n = self.group_order();
        for &t in target_orders {
            if t == 0 || !n.is_multiple_of(t) {
                return Err(Error::Invalid(format!("{t} does not divide {n}")));
            }
        }
        let mut found_ids = Vec::new();
        if target_orders.contains(&n) && self.table.group().is_perfect() {
            let mut whole = self.table.empty_set();
            whole.insert_range(..);
            if let Some(id) = self.register(whole.clone())? {
                found_ids.push(id);
            } else if let Some(id) = self.class_of(&whole) {
                found_ids.push(id);
            }
        }
        let wanted: Vec<u64> = target_orders
            .iter()
            .copied()
            .filter(|&t| t != n && t > 1)
            .collect();
        if !wanted.is_empty() {
            let reps: Vec<u32> = self
                .table
                .conjugacy_classes()
                .iter()
                .map(|c| c[0])
                .filter(|&x| x != 0)
                .collect();
            let divides_target = |o: u64| wanted.iter().any(|&t| t % o == 0);
            for &x in &reps {
                if !divides_target(self.table.order_of(x) as u64) {
                    continue;
                }
                for y in 1..self.table.len() as u32 {
                    if !divides_target(self.table.order_of(y) as u64) {
                        continue;
                    }
                    let xy = self.table.mul(x, y);
                    if !divides_target(self.table.order_of(xy) as u64) {
                        continue;
                    }
                    let pg = PermGroup::new(vec![
                        self.table.element(x).clone(),
                        self.table.element(y).clone(),
                    ])?;
                    let order = pg.order_u64();
                    if !wanted.contains(&order) {
                        continue;
                    }
                    let set = self.table.closure(&[x, y]);
                    if let Some(&id) = self.known.get(&set) {
                        if !found_ids.contains(&id)
                            && self.classes[id].order == order
                            && self.classes[id].representative.is_perfect()
                        {
                            found_ids.push(id);
                        }
                        continue;
                    }
                    if !pg.is_perfect() {
                        continue;
                    }
                    if let Some(id) = self.register(set)? {
                        found_ids.push(id);
                    }
                }
            }
        }
        let mut out: Vec<SubgroupClass> = found_ids
            .into_iter()
            .filter(|&id| target_orders.contains(&self.classes[id].order))
            .map(|id| self.classes[id].clone())
            .collect();
        sort_classes(&mut out);
        Ok(out)
    }

    /// Full enumeration of subgroup classes.
    pub fn enumerate(&mut self) -> Result<Vec<SubgroupClass>> {
        let n = self.group_order();
        let mut trivial = self.table.empty_set();
        trivial.insert(0);
        self.register(trivial)?;
        let perfect_orders: Vec<u64> = divisors(n)
            .into_iter()
            .filter(|&d| distinct_prime_factors(d) >= 3)
            .collect();
        self.perfect_subgroup_search(&perfect_orders)?;

        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| Reverse((c.order, i)))
            .collect();
        while let Some(Reverse((_, id))) = heap.pop() {
            let base = self.classes[id].elements.clone();
            for k in self.prime_extensions(&base) {
                if let Some(new_id) = self.register(k)? {
                    heap.push(Reverse((self.classes[new_id].order, new_id)));
                }
            }
        }
        let mut out = self.classes.clone();
        sort_classes(&mut out);
        Ok(out)
    }
}

fn sort_classes(classes: &mut [SubgroupClass]) {
    classes.sort_by(|a, b| {
        (a.order, &a.fingerprint, a.class_size).cmp(&(b.order, &b.fingerprint, b.class_size))
    });
}

fn is_prime(m: u32) -> bool {
    m >= 2
        && (2..m)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn distinct_prime_factors(mut n: u64) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            count += 1;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// All conjugacy classes of subgroups of `group`.
pub fn enumerate_subgroup_classes(
    group: &PermGroup,
    budget: AtlasBudget,
) -> Result<Vec<SubgroupClass>> {
    Lattice::new(group, budget)?.enumerate()
}

/// One row of an expected atlas: classes of a given order and index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtlasRow {
    pub order: u64,
    pub index: u64,
    pub multiplicity: usize,
}

/// Row-level differences between a computed and an expected atlas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasDiff {
    pub computed_rows: usize,
    pub expected_rows: usize,
    /// `(order, index, computed multiplicity, expected multiplicity)`.
    pub mismatches: Vec<(u64, u64, usize, usize)>,
}

impl AtlasDiff {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Groups classes into `(order, index, multiplicity)` rows.
pub fn atlas_rows(classes: &[SubgroupClass]) -> Vec<AtlasRow> {
    let mut m: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for c in classes {
        *m.entry((c.order, c.index)).or_insert(0) += 1;
    }
    m.into_iter()
        .map(|((order, index), multiplicity)| AtlasRow {
            order,
            index,
            multiplicity,
        })
        .collect()
}

pub fn verify_atlas(classes: &[SubgroupClass], expected: &[AtlasRow]) -> AtlasDiff {
    let computed = atlas_rows(classes);
    let mut exp: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for r in expected {
        *exp.entry((r.order, r.index)).or_insert(0) += r.multiplicity;
    }
    let mut got: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for r in &computed {
        got.insert((r.order, r.index), r.multiplicity);
    }
    let mut keys: Vec<(u64, u64)> = exp.keys().chain(got.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mismatches = keys
        .into_iter()
        .filter_map(|k| {
            let c = got.get(&k).copied().unwrap_or(0);
            let e = exp.get(&k).copied().unwrap_or(0);
            (c != e).then_some((k.0, k.1, c, e))
        })
        .collect();
    AtlasDiff {
        computed_rows: classes.len(),
        expected_rows: expected.iter().map(|r| r.multiplicity).sum(),
        mismatches,
    }
}

/// Reads `order,index,multiplicity` CSV (header line required).
pub fn parse_expected_csv(text: &str) -> Result<Vec<AtlasRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if i == 0 || line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(Error::Invalid(format!("line {}: expected 3 fields", i + 1)));
        }
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| Error::Invalid(format!("line {}: bad number {s:?}", i + 1)))
        };
        rows.push(AtlasRow {
            order: num(f[0])?,
            index: num(f[1])?,
            multiplicity: num(f[2])? as usize,
        });
    }
    Ok(rows)
}
