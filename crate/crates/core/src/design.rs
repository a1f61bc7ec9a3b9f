//! Block-transitive designs built from unions of suborbits, and the
//! regular graphs obtained from pairing-closed unions.

use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::action::{orbit_pairing, suborbits, GroupAction, Suborbits};
use crate::error::{Error, Result};
use crate::group::orbit_under;
use crate::perm::Permutation;

/// Where a design came from: the two subgroup classes and the chosen
/// suborbits (bit `i` set when orbit `i` is part of the base block).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub omega1_class: Option<usize>,
    pub omega2_class: Option<usize>,
    pub orbit_mask: u64,
}

/// A simple incidence structure with blocks of constant size. Blocks are
/// sorted point lists, kept in lexicographic order without repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    k: usize,
    blocks: Vec<Vec<u32>>,
    degenerate: bool,
    pub provenance: Vec<Provenance>,
}

impl IncidenceStructure {
    pub fn new(v: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut out: Vec<Vec<u32>> = Vec::with_capacity(blocks.len());
        let mut k = None;
        for mut b in blocks {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSubset("block repeats a point".into()));
            }
            if let Some(&x) = b.iter().find(|&&x| x as usize >= v) {
                return Err(Error::PointOutOfRange {
                    point: x as usize,
                    degree: v,
                });
            }
            match k {
                None => k = Some(b.len()),
                Some(k) if k != b.len() => {
                    return Err(Error::NotUniform(format!(
                        "block sizes {k} and {}",
                        b.len()
                    )))
                }
                _ => {}
            }
            out.push(b);
        }
        out.sort_unstable();
        out.dedup();
        Ok(IncidenceStructure {
            v,
            k: k.unwrap_or(0),
            degenerate: out.len() == 1 && k == Some(v),
            blocks: out,
            provenance: Vec::new(),
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// True for the single-block structure whose block is every point.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Number of blocks through each point.
    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for b in &self.blocks {
            for &x in b {
                deg[x as usize] += 1;
            }
        }
        deg
    }

    /// Common replication number; fails when points have different degrees.
    pub fn replication(&self) -> Result<usize> {
        let deg = self.point_degrees();
        match deg.first() {
            None => Ok(0),
            Some(&r) if deg.iter().all(|&d| d == r) => Ok(r),
            Some(_) => Err(Error::NotUniform("replication number varies".into())),
        }
    }

    /// Whether the point permutation maps the block set onto itself.
    pub fn is_invariant_under(&self, p: &Permutation) -> bool {
        if p.degree() != self.v {
            return false;
        }
        self.blocks.iter().all(|b| {
            let mut img: Vec<u32> = b.iter().map(|&x| p.apply(x as usize) as u32).collect();
            img.sort_unstable();
            self.blocks.binary_search(&img).is_ok()
        })
    }

    /// `v b k` on the first line, then one block per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.v, self.b(), self.k);
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse {
            text: text.lines().next().unwrap_or("").to_string(),
            reason: reason.to_string(),
        };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| parse_err("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err("bad header")))
            .collect::<Result<_>>()?;
        let [v, b, k] = header[..] else {
            return Err(parse_err("header must be `v b k`"));
        };
        let blocks: Vec<Vec<u32>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse().map_err(|_| parse_err("bad point")))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let d = IncidenceStructure::new(v, blocks)?;
        if d.b() != b || (b > 0 && d.k != k) {
            return Err(parse_err("header does not match blocks"));
        }
        Ok(d)
    }
}

/// A simple regular graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UGraph {
    rows: Vec<FixedBitSet>,
    degree: usize,
}

impl UGraph {
    /// Builds a graph from neighbour lists, checking symmetry, the absence
    /// of loops and regularity.
    pub fn from_neighbors(neighbors: &[Vec<u32>]) -> Result<Self> {
        let v = neighbors.len();
        let mut rows = vec![FixedBitSet::with_capacity(v); v];
        for (x, ns) in neighbors.iter().enumerate() {
            for &y in ns {
                let y = y as usize;
                if y >= v {
                    return Err(Error::PointOutOfRange {
                        point: y,
                        degree: v,
                    });
                }
                if y == x {
                    return Err(Error::Invalid(format!("loop at vertex {x}")));
                }
                rows[x].insert(y);
            }
        }
        for x in 0..v {
            for y in rows[x].ones() {
                if !rows[y].contains(x) {
                    return Err(Error::Invalid(format!("edge {x}-{y} is not symmetric")));
                }
            }
        }
        let degree = rows.first().map_or(0, |r| r.count_ones(..));
        if rows.iter().any(|r| r.count_ones(..) != degree) {
            return Err(Error::NotUniform("graph is not regular".into()));
        }
        Ok(UGraph { rows, degree })
    }

    pub fn v(&self) -> usize {
        self.rows.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[x].ones()
    }

    pub fn row(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn edge_count(&self) -> usize {
        self.v() * self.degree / 2
    }

    pub fn complement(&self) -> UGraph {
        let v = self.v();
        let rows = (0..v)
            .map(|x| {
                let mut r = self.rows[x].clone();
                r.toggle_range(..);
                r.set(x, false);
                r
            })
            .collect();
        UGraph {
            rows,
            degree: v.saturating_sub(1 + self.degree),
        }
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.v()
            && (0..self.v()).all(|x| {
                let px = p.apply(x);
                self.rows[x]
                    .ones()
                    .all(|y| self.rows[px].contains(p.apply(y)))
            })
    }
}

fn union_of(sub: &Suborbits, subset: &[usize]) -> Result<Vec<u32>> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty orbit subset".into()));
    }
    let mut seen = vec![false; sub.len()];
    let mut delta = Vec::new();
    for &i in subset {
        if i >= sub.len() {
            return Err(Error::InvalidSubset(format!(
                "orbit {i} out of range ({} orbits)",
                sub.len()
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidSubset(format!("orbit {i} listed twice")));
        }
        delta.extend(sub.orbits[i].iter().map(|&x| x as u32));
    }
    delta.sort_unstable();
    Ok(delta)
}

/// Orbit of a block under the given point permutations.
pub fn block_orbit(gens: &[Permutation], block: &[u32]) -> Vec<Vec<u32>> {
    let mut start = block.to_vec();
    start.sort_unstable();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(b) = queue.pop_front() {
        for g in gens {
            let mut img: Vec<u32> = b.iter().map(|&x| g.apply(x as usize) as u32).collect();
            img.sort_unstable();
            if seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
        out.push(b);
    }
    out
}

/// The structure with base block `Δ2` (union of the chosen orbits of the
/// stabilizer of `alpha` on the second action) and block set `{Δ2 g}`.
/// Choosing every orbit gives the flagged single-block structure.
pub fn build_design(
    omega1: &GroupAction,
    alpha: usize,
    omega2: &GroupAction,
    orbit_subset: &[usize],
) -> Result<IncidenceStructure> {
    let sub = suborbits(omega1, alpha, omega2)?;
    let delta = union_of(&sub, orbit_subset)?;
    let blocks = block_orbit(omega2.image_generators(), &delta);
    let mut d = IncidenceStructure::new(omega2.degree(), blocks)?;
    d.provenance.push(Provenance {
        omega1_class: omega1.class_id,
        omega2_class: omega2.class_id,
        orbit_mask: orbit_subset
            .iter()
            .fold(0u64, |m, &i| m | 1u64.checked_shl(i as u32).unwrap_or(0)),
    });
    Ok(d)
}

/// Point count, block size, replication number and block count predicted
/// from stabilizer orders alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Parameters {
    pub n: u64,
    pub k: u64,
    pub r: u64,
    pub b: u64,
}

pub fn thm1_parameters(
    omega1: &GroupAction,
    alpha: usize,
    omega2: &GroupAction,
    orbit_subset: &[usize],
) -> Result<Thm1Parameters> {
    let sub = suborbits(omega1, alpha, omega2)?;
    let delta = union_of(&sub, orbit_subset)?;
    let order = omega1.source_order();
    let m = omega1.degree() as u64;
    let n = omega2.degree() as u64;
    let g_alpha = order / m;
    let pts: Vec<usize> = delta.iter().map(|&x| x as usize).collect();
    let g_delta = omega2.image().setwise_stabilizer(&pts)?.order_u64() * omega2.kernel_order();
    let mut sum = 0u64;
    for &i in orbit_subset {
        let rep = sub.orbits[i][0];
        // |alpha G_delta| by a direct orbit computation where possible, else
        // through |G_delta| / |G_alpha ∩ G_delta|.
        let direct = omega2.stabilizer_in_source(rep).and_then(|hs| {
            hs.iter()
                .map(|h| omega1.image_of(h))
                .collect::<Option<Vec<Permutation>>>()
        });
        sum += match direct {
            Some(gens) => orbit_under(&gens, omega1.degree(), alpha).len() as u64,
            None => order * sub.orbits[i].len() as u64 / (n * g_alpha),
        };
    }
    Ok(Thm1Parameters {
        n,
        k: delta.len() as u64,
        r: g_alpha * sum / g_delta,
        b: m * g_alpha / g_delta,
    })
}

/// The graph whose neighbourhood of `alpha` is the union of the chosen
/// suborbits, transported to every vertex by the group.
pub fn build_graph_candidate(
    action: &GroupAction,
    alpha: usize,
    orbit_subset: &[usize],
) -> Result<UGraph> {
    let sub = suborbits(action, alpha, action)?;
    let pairing = orbit_pairing(action, &sub)?;
    let own = sub.orbit_index[alpha];
    if orbit_subset.contains(&own) {
        return Err(Error::InvalidSubset(
            "subset contains the orbit of alpha".into(),
        ));
    }
    if let Some(&i) = orbit_subset
        .iter()
        .find(|&&i| i < pairing.len() && !orbit_subset.contains(&pairing[i]))
    {
        return Err(Error::InvalidSubset(format!(
            "orbit {i} is not paired inside the subset"
        )));
    }
    let delta = union_of(&sub, orbit_subset)?;
    orbital_graph(action, alpha, &delta)
}

pub(crate) fn orbital_graph(action: &GroupAction, alpha: usize, delta: &[u32]) -> Result<UGraph> {
    let orbit = action.image().orbit_of(alpha)?;
    let n = action.degree();
    let mut neighbors = vec![Vec::new(); n];
    for (x, ns) in neighbors.iter_mut().enumerate() {
        let g = orbit
            .witness(x)
            .ok_or_else(|| Error::Invalid("action is not transitive".into()))?;
        *ns = delta.iter().map(|&y| g.apply(y as usize) as u32).collect();
    }
    UGraph::from_neighbors(&neighbors)
}

/// Limits for a suborbit-union sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Sweeps with more suborbits than this are refused.
    pub max_suborbits: usize,
    /// Only base blocks with size in this inclusive range are kept.
    pub block_sizes: Option<(usize, usize)>,
    /// With 2 or more, base blocks that cannot give a 2-design are skipped
    /// before the block orbit is built.
    pub min_t: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            max_suborbits: 24,
            block_sizes: None,
            min_t: 1,
        }
    }
}

/// Counters from one sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepStats {
    pub suborbits: usize,
    pub subsets_visited: u64,
    pub candidates: u64,
    pub new_designs: usize,
}

/// Images of bit masks under a point permutation, one byte at a time.
struct MaskMap {
    table: Vec<[u128; 256]>,
}

impl MaskMap {
    fn new(p: &Permutation) -> Self {
        let n = p.degree();
        let bytes = n.div_ceil(8);
        let mut table = vec![[0u128; 256]; bytes];
        for (byte, t) in table.iter_mut().enumerate() {
            for (value, slot) in t.iter_mut().enumerate() {
                let mut out = 0u128;
                for bit in 0..8 {
                    let x = byte * 8 + bit;
                    if value >> bit & 1 == 1 && x < n {
                        out |= 1u128 << p.apply(x);
                    }
                }
                *slot = out;
            }
        }
        MaskMap { table }
    }

    #[inline]
    fn apply(&self, mask: u128) -> u128 {
        let mut out = 0;
        for (byte, t) in self.table.iter().enumerate() {
            let v = (mask >> (8 * byte)) as u8;
            if v != 0 {
                out |= t[v as usize];
            }
        }
        out
    }
}

struct Collected {
    blocks: Vec<u128>,
    provenance: Vec<Provenance>,
}

/// Accumulates designs on the points of one action over sweeps with
/// several first actions, merging identical block sets.
pub struct DesignCollector {
    n: usize,
    omega2: GroupAction,
    maps: Vec<MaskMap>,
    // Orbit id of each unordered pair and the orbit sizes.
    pair_orbit: Vec<u32>,
    pair_orbit_sizes: Vec<u64>,
    min_t: usize,
    seen: FxHashMap<u128, usize>,
    designs: Vec<Collected>,
}

fn pair_index(n: usize, x: usize, y: usize) -> usize {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    a * n + b
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

impl DesignCollector {
    pub fn new(omega2: &GroupAction, min_t: usize) -> Result<Self> {
        let n = omega2.degree();
        if n > 128 {
            return Err(Error::Invalid(format!(
                "suborbit sweeps support at most 128 points, got {n}"
            )));
        }
        let gens = omega2.image_generators().to_vec();
        let (pair_orbit, pair_orbit_sizes) = if min_t >= 2 {
            let mut parent: Vec<u32> = (0..(n * n) as u32).collect();
            for g in &gens {
                for x in 0..n {
                    for y in x + 1..n {
                        let a = find(&mut parent, pair_index(n, x, y) as u32);
                        let b = find(&mut parent, pair_index(n, g.apply(x), g.apply(y)) as u32);
                        if a != b {
                            parent[a.max(b) as usize] = a.min(b);
                        }
                    }
                }
            }
            let mut ids: FxHashMap<u32, u32> = FxHashMap::default();
            let mut orbit = vec![u32::MAX; n * n];
            let mut sizes = Vec::new();
            for x in 0..n {
                for y in x + 1..n {
                    let root = find(&mut parent, pair_index(n, x, y) as u32);
                    let next = ids.len() as u32;
                    let id = *ids.entry(root).or_insert(next);
                    if id as usize == sizes.len() {
                        sizes.push(0);
                    }
                    sizes[id as usize] += 1;
                    orbit[x * n + y] = id;
                    orbit[y * n + x] = id;
                }
            }
            (orbit, sizes)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(DesignCollector {
            n,
            omega2: omega2.clone(),
            maps: gens.iter().map(MaskMap::new).collect(),
            pair_orbit,
            pair_orbit_sizes,
            min_t,
            seen: FxHashMap::default(),
            designs: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }

    fn orbit_of_mask(&self, mask: u128) -> Vec<u128> {
        let mut out = vec![mask];
        let mut local: FxHashMap<u128, ()> = FxHashMap::default();
        local.insert(mask, ());
        let mut i = 0;
        while i < out.len() {
            let b = out[i];
            for m in &self.maps {
                let img = m.apply(b);
                if local.insert(img, ()).is_none() {
                    out.push(img);
                }
            }
            i += 1;
        }
        out
    }

    /// Sweeps all unions of suborbits of the stabilizer of point 0 of
    /// `omega1`, keeping the ones allowed by `opts`.
    pub fn sweep(&mut self, omega1: &GroupAction, opts: &SweepOptions) -> Result<SweepStats> {
        let omega2_degree = self.n;
        if omega1.degree() == 0 {
            return Err(Error::Invalid("empty first action".into()));
        }
        let sub = suborbits(omega1, 0, &self.omega2)?;
        let s = sub.len();
        let cap = opts.max_suborbits.min(64);
        if s > cap {
            return Err(Error::Budget(format!(
                "{s} suborbits exceed the sweep cap of {cap}"
            )));
        }
        let sizes: Vec<usize> = sub.orbits.iter().map(Vec::len).collect();
        let masks: Vec<u128> = sub
            .orbits
            .iter()
            .map(|o| o.iter().fold(0u128, |m, &x| m | 1u128 << x))
            .collect();
        let full: u128 = if omega2_degree == 128 {
            u128::MAX
        } else {
            (1u128 << omega2_degree) - 1
        };
        let (lo, hi) = opts.block_sizes.unwrap_or((1, omega2_degree));
        let use_pairs = self.min_t.max(opts.min_t) >= 2;
        let j = self.pair_orbit_sizes.len();
        if use_pairs && j == 0 && omega2_degree > 1 {
            return Err(Error::Invalid(
                "collector was built without pair orbits; create it with min_t >= 2".into(),
            ));
        }
        // contrib[(a * s + b) * j + o]: pairs {x, y} with x in orbit a, y in
        // orbit b lying in pair orbit o (unordered within one orbit).
        let mut contrib = vec![0u32; if use_pairs { s * s * j } else { 0 }];
        if use_pairs {
            for a in 0..s {
                for b in a..s {
                    for &x in &sub.orbits[a] {
                        for &y in &sub.orbits[b] {
                            if a == b && y <= x {
                                continue;
                            }
                            let o = self.pair_orbit[x * omega2_degree + y] as usize;
                            contrib[(a * s + b) * j + o] += 1;
                            if a != b {
                                contrib[(b * s + a) * j + o] += 1;
                            }
                        }
                    }
                }
            }
        }
        let mut suffix = vec![0usize; s + 1];
        for i in (0..s).rev() {
            suffix[i] = suffix[i + 1] + sizes[i];
        }
        let mut st = SweepState {
            chosen: Vec::new(),
            mask: 0,
            size: 0,
            counts: vec![0u64; j],
            stats: SweepStats {
                suborbits: s,
                ..SweepStats::default()
            },
        };
        let ctx = SweepCtx {
            s,
            j,
            sizes: &sizes,
            masks: &masks,
            suffix: &suffix,
            contrib: &contrib,
            use_pairs,
            lo,
            hi,
            full,
            provenance: (omega1.class_id, self.omega2.class_id),
        };
        self.descend(&ctx, 0, &mut st);
        Ok(st.stats)
    }

    fn descend(&mut self, ctx: &SweepCtx, i: usize, st: &mut SweepState) {
        if st.size > ctx.hi || st.size + ctx.suffix[i] < ctx.lo {
            return;
        }
        if i == ctx.s {
            st.stats.subsets_visited += 1;
            self.leaf(ctx, st);
            return;
        }
        self.descend(ctx, i + 1, st);
        if st.size + ctx.sizes[i] > ctx.hi {
            return;
        }
        if ctx.use_pairs {
            let row = |b: usize| &ctx.contrib[(i * ctx.s + b) * ctx.j..(i * ctx.s + b + 1) * ctx.j];
            for (c, &d) in st.counts.iter_mut().zip(row(i)) {
                *c += d as u64;
            }
            for &b in &st.chosen {
                for (c, &d) in st.counts.iter_mut().zip(row(b)) {
                    *c += d as u64;
                }
            }
        }
        st.chosen.push(i);
        st.mask |= ctx.masks[i];
        st.size += ctx.sizes[i];
        self.descend(ctx, i + 1, st);
        st.size -= ctx.sizes[i];
        st.mask &= !ctx.masks[i];
        st.chosen.pop();
        if ctx.use_pairs {
            let row = |b: usize| &ctx.contrib[(i * ctx.s + b) * ctx.j..(i * ctx.s + b + 1) * ctx.j];
            for (c, &d) in st.counts.iter_mut().zip(row(i)) {
                *c -= d as u64;
            }
            for &b in &st.chosen {
                for (c, &d) in st.counts.iter_mut().zip(row(b)) {
                    *c -= d as u64;
                }
            }
        }
    }

    fn leaf(&mut self, ctx: &SweepCtx, st: &mut SweepState) {
        if st.mask == 0 || st.mask == ctx.full || st.size < ctx.lo {
            return;
        }
        if ctx.use_pairs {
            let c0 = st.counts[0];
            let s0 = self.pair_orbit_sizes[0];
            let balanced = st
                .counts
                .iter()
                .zip(&self.pair_orbit_sizes)
                .all(|(&c, &sz)| c * s0 == c0 * sz);
            if !balanced {
                return;
            }
        }
        st.stats.candidates += 1;
        let prov = Provenance {
            omega1_class: ctx.provenance.0,
            omega2_class: ctx.provenance.1,
            orbit_mask: st.chosen.iter().fold(0u64, |m, &i| m | 1 << i),
        };
        if let Some(&id) = self.seen.get(&st.mask) {
            let p = &mut self.designs[id].provenance;
            if !p.contains(&prov) {
                p.push(prov);
            }
            return;
        }
        let blocks = self.orbit_of_mask(st.mask);
        let id = self.designs.len();
        for &b in &blocks {
            self.seen.insert(b, id);
        }
        self.designs.push(Collected {
            blocks,
            provenance: vec![prov],
        });
        st.stats.new_designs += 1;
    }

    /// The collected designs in discovery order.
    pub fn into_designs(self) -> Vec<IncidenceStructure> {
        let n = self.n;
        self.designs
            .into_iter()
            .map(|c| {
                let blocks = c
                    .blocks
                    .iter()
                    .map(|&m| (0..n as u32).filter(|&x| m >> x & 1 == 1).collect())
                    .collect();
                let mut d = IncidenceStructure::new(n, blocks).expect("orbit of one block");
                d.provenance = c.provenance;
                d
            })
            .collect()
    }
}

struct SweepCtx<'a> {
    s: usize,
    j: usize,
    sizes: &'a [usize],
    masks: &'a [u128],
    suffix: &'a [usize],
    contrib: &'a [u32],
    use_pairs: bool,
    lo: usize,
    hi: usize,
    full: u128,
    provenance: (Option<usize>, Option<usize>),
}

struct SweepState {
    chosen: Vec<usize>,
    mask: u128,
    size: usize,
    counts: Vec<u64>,
    stats: SweepStats,
}

/// Every distinct design from nonempty proper unions of suborbits.
pub fn enumerate_designs(
    omega1: &GroupAction,
    omega2: &GroupAction,
    opts: &SweepOptions,
) -> Result<Vec<IncidenceStructure>> {
    let mut c = DesignCollector::new(omega2, opts.min_t)?;
    c.sweep(omega1, opts)?;
    Ok(c.into_designs())
}
