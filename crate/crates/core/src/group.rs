//! Permutation groups held as a base and strong generating set.
//!
//! The stabilizer chain is built by Schreier–Sims. When an upper bound on
//! the group order is known, random elements are sifted first; reaching the
//! bound certifies the chain (the product of basic orbit lengths of a
//! partial chain never exceeds the order of the group it generates). If the
//! bound is not reached the deterministic algorithm finishes the job.

use std::collections::VecDeque;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

const NOT_IN_ORBIT: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;
/// Transversals are materialised when `orbit_len * degree` stays below this.
const EXPLICIT_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    inv_gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// Schreier tree: label of the generator that reached each point.
    tree: Vec<u32>,
    explicit: Option<Vec<Option<(Permutation, Permutation)>>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut lvl = Level {
            base,
            gens: Vec::new(),
            inv_gens: Vec::new(),
            orbit: Vec::new(),
            tree: vec![NOT_IN_ORBIT; degree],
            explicit: None,
        };
        lvl.rebuild_orbit();
        lvl
    }

    fn push_gen(&mut self, g: Permutation) {
        self.inv_gens.push(g.inverse());
        self.gens.push(g);
        self.rebuild_orbit();
    }

    fn rebuild_orbit(&mut self) {
        self.explicit = None;
        self.tree.iter_mut().for_each(|t| *t = NOT_IN_ORBIT);
        self.orbit.clear();
        self.tree[self.base] = ROOT;
        self.orbit.push(self.base as u32);
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i] as usize;
            for (label, g) in self.gens.iter().enumerate() {
                let y = g.apply(x);
                if self.tree[y] == NOT_IN_ORBIT {
                    self.tree[y] = label as u32;
                    self.orbit.push(y as u32);
                }
            }
            i += 1;
        }
    }

    #[inline]
    fn contains(&self, x: usize) -> bool {
        self.tree[x] != NOT_IN_ORBIT
    }

    /// `g <- g * u_x^-1` where `u_x` maps the base point to `x`.
    fn strip_step(&self, x: usize, g: &mut Permutation) {
        if let Some(exp) = &self.explicit {
            let (_, inv) = exp[x].as_ref().expect("point in orbit");
            g.then_assign(inv);
            return;
        }
        let mut y = x;
        while self.tree[y] != ROOT {
            let label = self.tree[y] as usize;
            g.then_assign(&self.inv_gens[label]);
            y = self.inv_gens[label].apply(y);
        }
    }

    /// The transversal element mapping the base point to `x`.
    fn transversal(&self, x: usize) -> Permutation {
        if let Some(exp) = &self.explicit {
            return exp[x].as_ref().expect("point in orbit").0.clone();
        }
        let mut labels = Vec::new();
        let mut y = x;
        while self.tree[y] != ROOT {
            let label = self.tree[y] as usize;
            labels.push(label);
            y = self.inv_gens[label].apply(y);
        }
        let mut u = Permutation::identity(self.tree.len());
        for &label in labels.iter().rev() {
            u.then_assign(&self.gens[label]);
        }
        u
    }

    fn materialise(&mut self) {
        let degree = self.tree.len();
        if self.explicit.is_some() || self.orbit.len() * degree > EXPLICIT_LIMIT {
            return;
        }
        let mut exp: Vec<Option<(Permutation, Permutation)>> = vec![None; degree];
        exp[self.base] = Some((Permutation::identity(degree), Permutation::identity(degree)));
        // BFS order guarantees the parent is filled first.
        for &x in &self.orbit[1..] {
            let x = x as usize;
            let label = self.tree[x] as usize;
            let parent = self.inv_gens[label].apply(x);
            let (pu, _) = exp[parent].as_ref().unwrap();
            let u = pu.then(&self.gens[label]);
            let inv = u.inverse();
            exp[x] = Some((u, inv));
        }
        self.explicit = Some(exp);
    }
}

/// A permutation group with a base and strong generating set.
///
/// Immutable once built; safe to share across threads.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: Vec<Level>,
}

/// An orbit together with a Schreier tree over the group generators.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub points: Vec<usize>,
    root: usize,
    labels: Vec<u32>,
    gens: Vec<Permutation>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.labels[x] != NOT_IN_ORBIT
    }

    /// A group element mapping the orbit's root to `x`.
    pub fn witness(&self, x: usize) -> Option<Permutation> {
        if !self.contains(x) {
            return None;
        }
        let mut labels = Vec::new();
        let mut y = x;
        while self.labels[y] != ROOT {
            let l = self.labels[y] as usize;
            labels.push(l);
            y = self.gens[l].inverse().apply(y);
        }
        let mut u = Permutation::identity(self.labels.len());
        for &l in labels.iter().rev() {
            u.then_assign(&self.gens[l]);
        }
        debug_assert_eq!(u.apply(self.root), x);
        Some(u)
    }
}

/// Orbit of `point` under the group generated by `gens` (degree `degree`).
pub fn orbit_under(gens: &[Permutation], degree: usize, point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut out = vec![point];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

/// Orbit partition of `{0..degree}` under `gens`; each orbit sorted, orbits
/// ordered by least element.
pub fn orbits_under(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for p in 0..degree {
        if seen[p] {
            continue;
        }
        let mut orb = orbit_under(gens, degree, p);
        for &x in &orb {
            seen[x] = true;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: Vec::new(),
        }
    }

    /// Deterministic Schreier–Sims on `gens`.
    pub fn new(gens: Vec<Permutation>) -> Result<Self> {
        let degree = check_degrees(&gens)?;
        Ok(Self::build(degree, gens, &[], None))
    }

    /// As [`PermGroup::new`] for a possibly empty generator list.
    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(Self::build(degree, gens, &[], None))
    }

    /// Builds the chain, using `order_bound` (an upper bound on the order)
    /// to accelerate construction with random sifting.
    pub fn with_order_bound(gens: Vec<Permutation>, order_bound: &BigUint) -> Result<Self> {
        let degree = check_degrees(&gens)?;
        Ok(Self::build(degree, gens, &[], Some(order_bound)))
    }

    /// Builds the chain with a base starting with `prefix`.
    pub fn with_base_prefix(
        degree: usize,
        gens: Vec<Permutation>,
        prefix: &[usize],
        order_bound: Option<&BigUint>,
    ) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        for &p in prefix {
            if p >= degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
        }
        Ok(Self::build(degree, gens, prefix, order_bound))
    }

    fn build(
        degree: usize,
        generators: Vec<Permutation>,
        prefix: &[usize],
        order_bound: Option<&BigUint>,
    ) -> Self {
        let strong: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut base: Vec<usize> = Vec::new();
        for &p in prefix {
            if !base.contains(&p) {
                base.push(p);
            }
        }
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().unwrap());
            }
        }
        let mut chain: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
        for lvl in chain.iter_mut() {
            lvl.gens.clear();
        }
        for g in &strong {
            for (l, lvl) in chain.iter_mut().enumerate() {
                lvl.gens.push(g.clone());
                lvl.inv_gens.push(g.inverse());
                if g.apply(base[l]) != base[l] {
                    break;
                }
            }
        }
        for lvl in chain.iter_mut() {
            lvl.rebuild_orbit();
        }
        let mut group = PermGroup {
            degree,
            generators,
            chain,
        };
        let done = match order_bound {
            Some(bound) if !group.chain.is_empty() => group.random_schreier_sims(bound),
            _ => false,
        };
        if !done && !group.chain.is_empty() {
            let top = group.chain.len() - 1;
            group.schreier_sims(top);
        }
        for lvl in group.chain.iter_mut() {
            lvl.materialise();
        }
        group
    }

    /// Holt's SCHREIERSIMS starting the scan at level `start`.
    fn schreier_sims(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let lvl = i as usize;
            let mut restart: Option<usize> = None;
            'scan: for oi in 0..self.chain[lvl].orbit.len() {
                let beta = self.chain[lvl].orbit[oi] as usize;
                let u_beta = self.chain[lvl].transversal(beta);
                for si in 0..self.chain[lvl].gens.len() {
                    let s = &self.chain[lvl].gens[si];
                    let beta_s = s.apply(beta);
                    let mut h = u_beta.then(s);
                    self.chain[lvl].strip_step(beta_s, &mut h);
                    if h.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip(h, lvl + 1);
                    if j < self.chain.len() || !h.is_identity() {
                        if j == self.chain.len() {
                            let b = h.first_moved_point().unwrap();
                            self.chain.push(Level::new(b, self.degree));
                        }
                        for l in lvl + 1..=j {
                            self.chain[l].push_gen(h.clone());
                        }
                        restart = Some(j);
                        break 'scan;
                    }
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts random elements until the order bound is met. Returns whether
    /// the bound was reached (which certifies the chain).
    fn random_schreier_sims(&mut self, bound: &BigUint) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e_ed0f_b5a5);
        let mut pool: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        if pool.is_empty() {
            return false;
        }
        let seeds = pool.len();
        while pool.len() < 10 {
            let g = pool[pool.len() % seeds].clone();
            pool.push(g);
        }
        let mut acc = Permutation::identity(self.degree);
        let step = |pool: &mut Vec<Permutation>, acc: &mut Permutation, rng: &mut ChaCha8Rng| {
            let n = pool.len();
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let prod = if rng.gen_bool(0.5) {
                pool[i].then(&pool[j])
            } else {
                pool[j].then(&pool[i])
            };
            pool[i] = prod;
            acc.then_assign(&pool[i]);
        };
        for _ in 0..50 {
            step(&mut pool, &mut acc, &mut rng);
        }
        let mut misses = 0;
        while self.order() < *bound {
            step(&mut pool, &mut acc, &mut rng);
            let (h, j) = self.strip(acc.clone(), 0);
            if j < self.chain.len() || !h.is_identity() {
                if j == self.chain.len() {
                    let b = h.first_moved_point().unwrap();
                    self.chain.push(Level::new(b, self.degree));
                }
                for l in 0..=j {
                    self.chain[l].push_gen(h.clone());
                }
                misses = 0;
            } else {
                misses += 1;
                if misses > 64 {
                    return false;
                }
            }
        }
        self.order() == *bound
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where stripping stopped (`chain.len()` if it passed every level).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.chain.len() {
            let lvl = &self.chain[l];
            let beta = g.apply(lvl.base);
            if !lvl.contains(beta) {
                return (g, l);
            }
            lvl.strip_step(beta, &mut g);
        }
        (g, self.chain.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for lvl in &self.chain {
            for g in &lvl.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Basic orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.orbit.len()).collect()
    }

    /// Basic orbit at level `level`.
    pub fn fundamental_orbit(&self, level: usize) -> Vec<usize> {
        self.chain[level]
            .orbit
            .iter()
            .map(|&x| x as usize)
            .collect()
    }

    /// Transversal element at `level` mapping the base point to `point`.
    pub fn transversal(&self, level: usize, point: usize) -> Option<Permutation> {
        let lvl = &self.chain[level];
        lvl.contains(point).then(|| lvl.transversal(point))
    }

    pub fn order(&self) -> BigUint {
        self.chain.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    /// Order as `u64`; panics for groups beyond `u64`.
    pub fn order_u64(&self) -> u64 {
        self.chain.iter().fold(1u64, |acc, l| {
            acc.checked_mul(l.orbit.len() as u64)
                .expect("group order exceeds u64")
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.chain.iter().all(|l| l.orbit.len() == 1)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(p.clone(), 0);
        j == self.chain.len() && h.is_identity()
    }

    /// Residue of sifting `p` through the whole chain.
    pub fn sift(&self, p: &Permutation) -> Permutation {
        self.strip(p.clone(), 0).0
    }

    pub fn orbit_of(&self, point: usize) -> Result<Orbit> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut labels = vec![NOT_IN_ORBIT; self.degree];
        labels[point] = ROOT;
        let mut points = vec![point];
        let mut i = 0;
        while i < points.len() {
            let x = points[i];
            for (l, g) in gens.iter().enumerate() {
                let y = g.apply(x);
                if labels[y] == NOT_IN_ORBIT {
                    labels[y] = l as u32;
                    points.push(y);
                }
            }
            i += 1;
        }
        Ok(Orbit {
            points,
            root: point,
            labels,
            gens,
        })
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_under(&self.generators, self.degree)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || orbit_under(&self.generators, self.degree, 0).len() == self.degree
    }

    /// The subgroup generated by strong generators below `level`.
    fn chain_tail(&self, level: usize) -> PermGroup {
        let chain: Vec<Level> = self.chain[level.min(self.chain.len())..].to_vec();
        let generators = chain.first().map(|l| l.gens.clone()).unwrap_or_default();
        PermGroup {
            degree: self.degree,
            generators,
            chain,
        }
    }

    /// Same group, base beginning with `prefix`.
    pub fn rebase(&self, prefix: &[usize]) -> PermGroup {
        if self.base().starts_with(prefix) {
            return self.clone();
        }
        let order = self.order();
        Self::build(self.degree, self.generators.clone(), prefix, Some(&order))
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let g = self.rebase(&[point]);
        Ok(g.chain_tail(1))
    }

    /// Pointwise stabilizer of a sequence of points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        for &p in points {
            if p >= self.degree {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: self.degree,
                });
            }
        }
        let mut prefix: Vec<usize> = Vec::new();
        for &p in points {
            if !prefix.contains(&p) {
                prefix.push(p);
            }
        }
        let g = self.rebase(&prefix);
        Ok(g.chain_tail(prefix.len()))
    }

    /// All elements; intended for groups of at most `limit` elements.
    pub fn elements(&self, limit: u64) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::GroupTooLarge {
                order: order.to_string(),
                limit,
            });
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for lvl in self.chain.iter().rev() {
            let trans: Vec<Permutation> = lvl
                .orbit
                .iter()
                .map(|&x| lvl.transversal(x as usize))
                .collect();
            let mut next = Vec::with_capacity(out.len() * trans.len());
            for r in &out {
                for u in &trans {
                    next.push(r.then(u));
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lvl in self.chain.iter().rev() {
            let x = lvl.orbit[rng.gen_range(0..lvl.orbit.len())] as usize;
            g.then_assign(&lvl.transversal(x));
        }
        g
    }

    /// Adds a generator, keeping the chain complete. Returns `false` when `g`
    /// was already a member.
    pub fn extend(&mut self, g: Permutation) -> bool {
        if self.contains(&g) {
            return false;
        }
        self.generators.push(g.clone());
        if self.chain.is_empty() {
            let b = g.first_moved_point().unwrap();
            self.chain.push(Level::new(b, self.degree));
        }
        self.chain[0].push_gen(g);
        self.schreier_sims(0);
        for lvl in self.chain.iter_mut() {
            lvl.materialise();
        }
        true
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Smallest normal subgroup of `self` containing `gens`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> PermGroup {
        let mut n = PermGroup::trivial(self.degree);
        let mut queue: VecDeque<Permutation> = gens.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            if n.extend(x.clone()) {
                for g in &self.generators {
                    queue.push_back(x.conjugate_by(g));
                }
            }
        }
        n
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.inverse().then(&b.inverse()).then(a).then(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Number of steps for the derived series to reach the trivial group,
    /// or `None` when it stabilises at a non-trivial perfect group.
    pub fn derived_length(&self) -> Option<usize> {
        let mut cur = self.clone();
        let mut steps = 0;
        while !cur.is_trivial() {
            let next = cur.derived_subgroup();
            if next.order() == cur.order() {
                return None;
            }
            cur = next;
            steps += 1;
        }
        Some(steps)
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_length().is_some()
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    /// Subgroup stabilizing `set` setwise, by backtracking over the chain.
    ///
    /// The empty set and the full point set both return the whole group.
    pub fn setwise_stabilizer(&self, set: &[usize]) -> Result<PermGroup> {
        crate::search::setwise_stabilizer(self, set)
    }

    pub(crate) fn level_base(&self, l: usize) -> usize {
        self.chain[l].base
    }

    pub(crate) fn level_orbit(&self, l: usize) -> &[u32] {
        &self.chain[l].orbit
    }

    pub(crate) fn level_transversal(&self, l: usize, x: usize) -> Permutation {
        self.chain[l].transversal(x)
    }

    pub(crate) fn depth(&self) -> usize {
        self.chain.len()
    }

    /// Checks that every strong generator sifts to the identity.
    pub fn verify_strong_generators(&self) -> bool {
        self.chain
            .iter()
            .flat_map(|l| l.gens.iter())
            .all(|g| self.contains(g))
    }
}

fn check_degrees(gens: &[Permutation]) -> Result<usize> {
    let first = gens.first().ok_or(Error::NoGenerators)?;
    let degree = first.degree();
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    Ok(degree)
}
