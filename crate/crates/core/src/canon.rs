//! Canonical labelling and automorphism groups of vertex-coloured graphs by
//! individualization and refinement. Designs are handled through their
//! point/block incidence graphs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::design::{IncidenceStructure, UGraph};
use crate::error::{Error, Result};
use crate::group::{orbits_under, PermGroup};
use crate::perm::Permutation;

/// An undirected graph with an ordered partition of its vertices into
/// colour classes (class `c` holds the vertices with colour `c`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    adj: Vec<Vec<u32>>,
    colors: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(mut adj: Vec<Vec<u32>>, colors: Vec<u32>) -> Result<Self> {
        let n = adj.len();
        if colors.len() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: colors.len(),
            });
        }
        for (x, ns) in adj.iter_mut().enumerate() {
            ns.sort_unstable();
            ns.dedup();
            if let Some(&y) = ns.iter().find(|&&y| y as usize >= n || y as usize == x) {
                return Err(Error::Invalid(format!("bad neighbour {y} of vertex {x}")));
            }
        }
        for x in 0..n {
            for &y in &adj[x] {
                if adj[y as usize].binary_search(&(x as u32)).is_err() {
                    return Err(Error::Invalid(format!("edge {x}-{y} is not symmetric")));
                }
            }
        }
        Ok(ColoredGraph { adj, colors })
    }

    pub fn from_ugraph(g: &UGraph) -> Self {
        let adj = (0..g.v())
            .map(|x| g.neighbors(x).map(|y| y as u32).collect())
            .collect();
        ColoredGraph {
            adj,
            colors: vec![0; g.v()],
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, x: usize) -> &[u32] {
        &self.adj[x]
    }

    pub fn color(&self, x: usize) -> u32 {
        self.colors[x]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The graph with vertex `x` renamed to `p(x)`.
    pub fn relabel(&self, p: &Permutation) -> ColoredGraph {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        let mut colors = vec![0; n];
        for x in 0..n {
            let px = p.apply(x);
            colors[px] = self.colors[x];
            adj[px] = self.adj[x]
                .iter()
                .map(|&y| p.apply(y as usize) as u32)
                .collect();
            adj[px].sort_unstable();
        }
        ColoredGraph { adj, colors }
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.n()
            && (0..self.n()).all(|x| {
                let px = p.apply(x);
                self.colors[px] == self.colors[x]
                    && self.adj[x].len() == self.adj[px].len()
                    && self.adj[x].iter().all(|&y| {
                        self.adj[px]
                            .binary_search(&(p.apply(y as usize) as u32))
                            .is_ok()
                    })
            })
    }
}

/// Bipartite incidence graph: points `0..v` (colour 0), then blocks
/// (colour 1).
pub fn encode_design(d: &IncidenceStructure) -> ColoredGraph {
    let v = d.v();
    let n = v + d.b();
    let mut adj = vec![Vec::new(); n];
    for (i, b) in d.blocks().iter().enumerate() {
        for &x in b {
            adj[x as usize].push((v + i) as u32);
            adj[v + i].push(x);
        }
    }
    let colors = (0..n).map(|x| u32::from(x >= v)).collect();
    ColoredGraph { adj, colors }
}

/// Limits for one canonical labelling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonOptions {
    pub max_vertices: usize,
    pub max_nodes: u64,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions {
            max_vertices: 10_000,
            max_nodes: 5_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// Serialized canonical graph: vertex count, colour class sizes, then
    /// the sorted neighbour positions of each canonical position.
    pub bytes: Vec<u8>,
    /// `labeling[i]` is the input vertex placed at canonical position `i`.
    pub labeling: Vec<u32>,
    pub generators: Vec<Permutation>,
    pub aut_order: BigUint,
    pub nodes: u64,
}

impl CanonicalForm {
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ordered partition of the vertices; cells are identified by their first
/// position.
#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    cell: Vec<u32>,
    end: Vec<u32>,
    cells: usize,
}

struct Scratch {
    count: Vec<u32>,
    touched: Vec<u32>,
    in_queue: Vec<bool>,
}

impl Partition {
    fn from_colors(colors: &[u32]) -> (Partition, Vec<u32>) {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&x| (colors[x as usize], x));
        let mut pos = vec![0u32; n];
        let mut cell = vec![0u32; n];
        let mut end = vec![0u32; n];
        let mut starts = Vec::new();
        let mut i = 0;
        while i < n {
            let c = colors[lab[i] as usize];
            let mut j = i;
            while j < n && colors[lab[j] as usize] == c {
                j += 1;
            }
            for p in i..j {
                cell[p] = i as u32;
                pos[lab[p] as usize] = p as u32;
            }
            end[i] = j as u32;
            starts.push(i as u32);
            i = j;
        }
        let cells = starts.len();
        (
            Partition {
                lab,
                pos,
                cell,
                end,
                cells,
            },
            starts,
        )
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<u32> {
        let n = self.lab.len();
        let mut best: Option<(u32, u32)> = None;
        let mut p = 0;
        while p < n {
            let e = self.end[p];
            let size = e - p as u32;
            if size > 1 && best.is_none_or(|(_, s)| size < s) {
                best = Some((p as u32, size));
            }
            p = e as usize;
        }
        best.map(|(c, _)| c)
    }

    fn individualize(&mut self, v: u32) -> u32 {
        let p = self.pos[v as usize];
        let c = self.cell[p as usize];
        let other = self.lab[c as usize];
        self.lab.swap(c as usize, p as usize);
        self.pos[v as usize] = c;
        self.pos[other as usize] = p;
        let e = self.end[c as usize];
        self.end[c as usize] = c + 1;
        for q in c + 1..e {
            self.cell[q as usize] = c + 1;
        }
        self.end[c as usize + 1] = e;
        self.cells += 1;
        c
    }

    /// Equitable refinement; returns a hash of the splitting history.
    fn refine(&mut self, g: &ColoredGraph, initial: &[u32], sc: &mut Scratch) -> u64 {
        let mut trace = 0x51_7cc1_b727_220a_u64;
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &c in initial {
            if !sc.in_queue[c as usize] {
                sc.in_queue[c as usize] = true;
                queue.push_back(c);
            }
        }
        let mut cells_touched: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            sc.in_queue[w as usize] = false;
            if self.is_discrete() {
                continue;
            }
            let we = self.end[w as usize];
            for p in w..we {
                let v = self.lab[p as usize];
                for &u in &g.adj[v as usize] {
                    if sc.count[u as usize] == 0 {
                        sc.touched.push(u);
                    }
                    sc.count[u as usize] += 1;
                }
            }
            cells_touched.clear();
            cells_touched.extend(
                sc.touched
                    .iter()
                    .map(|&u| self.cell[self.pos[u as usize] as usize]),
            );
            cells_touched.sort_unstable();
            cells_touched.dedup();
            for &c in &cells_touched {
                let e = self.end[c as usize];
                if e - c == 1 {
                    trace = mix(
                        trace,
                        (c as u64) << 32 | sc.count[self.lab[c as usize] as usize] as u64,
                    );
                    continue;
                }
                let count = &sc.count;
                self.lab[c as usize..e as usize].sort_by_key(|&x| count[x as usize]);
                let lo = count[self.lab[c as usize] as usize];
                let hi = count[self.lab[e as usize - 1] as usize];
                if lo == hi {
                    trace = mix(trace, (c as u64) << 32 | lo as u64);
                    continue;
                }
                let mut frags: Vec<(u32, u32)> = Vec::new();
                let mut s = c;
                for p in c..e {
                    let x = self.lab[p as usize];
                    self.pos[x as usize] = p;
                    if p > s && count[x as usize] != count[self.lab[p as usize - 1] as usize] {
                        frags.push((s, p));
                        s = p;
                    }
                }
                frags.push((s, e));
                for &(fs, fe) in &frags {
                    for p in fs..fe {
                        self.cell[p as usize] = fs;
                    }
                    self.end[fs as usize] = fe;
                    trace = mix(
                        trace,
                        (fs as u64) << 40
                            | ((fe - fs) as u64) << 20
                            | count[self.lab[fs as usize] as usize] as u64,
                    );
                }
                self.cells += frags.len() - 1;
                if sc.in_queue[c as usize] {
                    for &(fs, _) in &frags[1..] {
                        sc.in_queue[fs as usize] = true;
                        queue.push_back(fs);
                    }
                } else {
                    let mut largest = 0;
                    for (i, &(fs, fe)) in frags.iter().enumerate() {
                        if fe - fs > frags[largest].1 - frags[largest].0 {
                            largest = i;
                        }
                    }
                    for (i, &(fs, _)) in frags.iter().enumerate() {
                        if i != largest {
                            sc.in_queue[fs as usize] = true;
                            queue.push_back(fs);
                        }
                    }
                }
            }
            for &u in &sc.touched {
                sc.count[u as usize] = 0;
            }
            sc.touched.clear();
        }
        mix(trace, self.cells as u64)
    }
}

struct Leaf {
    lab: Vec<u32>,
    cert: Vec<u32>,
    traces: Vec<u64>,
    path: Vec<u32>,
}

struct Search<'g> {
    g: &'g ColoredGraph,
    sc: Scratch,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Permutation>,
    nodes: u64,
    max_nodes: u64,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'g> Search<'g> {
    fn certificate(&self, part: &Partition) -> Vec<u32> {
        let g = self.g;
        let mut cert = Vec::with_capacity(g.n() + 2 * g.edge_count());
        let mut row: Vec<u32> = Vec::new();
        for &v in &part.lab {
            row.clear();
            row.extend(g.adj[v as usize].iter().map(|&u| part.pos[u as usize]));
            row.sort_unstable();
            cert.push(row.len() as u32);
            cert.extend_from_slice(&row);
        }
        cert
    }

    fn automorphism(&mut self, from: &[u32], to: &[u32]) {
        let mut images = vec![0u32; from.len()];
        for (a, b) in from.iter().zip(to) {
            images[*a as usize] = *b;
        }
        let p = Permutation::from_images_unchecked(images);
        debug_assert!(self.g.is_automorphism(&p));
        if !p.is_identity() {
            self.gens.push(p);
        }
    }

    /// Explores the node reached by `path`; returns the depth to jump back
    /// to after an automorphism was found below.
    fn explore(
        &mut self,
        part: Partition,
        path: &mut Vec<u32>,
        traces: &mut Vec<u64>,
        first_eq: bool,
        best_cmp: Ordering,
    ) -> Result<Option<usize>> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget(format!(
                "canonical labelling exceeded {} search nodes at depth {} with {} cells",
                self.max_nodes,
                path.len(),
                part.cells
            )));
        }
        let depth = path.len();
        if part.is_discrete() {
            return Ok(self.leaf(part, path, traces, first_eq, best_cmp));
        }
        let target = part.target_cell().expect("non-discrete partition");
        let mut children: Vec<u32> =
            part.lab[target as usize..part.end[target as usize] as usize].to_vec();
        children.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut orbit_of: Vec<u32> = Vec::new();
        let mut gens_seen = usize::MAX;
        for &w in &children {
            if !explored.is_empty() {
                if gens_seen != self.gens.len() {
                    gens_seen = self.gens.len();
                    orbit_of = self.stabilizer_orbits(path);
                }
                if explored
                    .iter()
                    .any(|&e| orbit_of[e as usize] == orbit_of[w as usize])
                {
                    continue;
                }
            }
            explored.push(w);
            let mut child = part.clone();
            let c = child.individualize(w);
            let t = child.refine(self.g, &[c], &mut self.sc);
            let child_first_eq = first_eq
                && self
                    .first
                    .as_ref()
                    .is_none_or(|f| f.traces.get(depth) == Some(&t));
            let child_cmp = match (best_cmp, &self.best) {
                (Ordering::Equal, Some(b)) => match b.traces.get(depth) {
                    Some(bt) => t.cmp(bt),
                    None => Ordering::Greater,
                },
                (o, _) => o,
            };
            if self.first.is_some() && !child_first_eq && child_cmp == Ordering::Less {
                continue;
            }
            path.push(w);
            traces.push(t);
            let jump = self.explore(child, path, traces, child_first_eq, child_cmp)?;
            path.pop();
            traces.pop();
            if let Some(j) = jump {
                if j < depth {
                    return Ok(Some(j));
                }
            }
        }
        Ok(None)
    }

    fn leaf(
        &mut self,
        part: Partition,
        path: &[u32],
        traces: &[u64],
        first_eq: bool,
        best_cmp: Ordering,
    ) -> Option<usize> {
        let cert = self.certificate(&part);
        let make = |cert: Vec<u32>| Leaf {
            lab: part.lab.clone(),
            cert,
            traces: traces.to_vec(),
            path: path.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first = Some(make(cert.clone()));
            self.best = Some(make(cert));
            return None;
        };
        if first_eq && first.traces.len() == traces.len() && first.cert == cert {
            let from = first.lab.clone();
            let jump = common_prefix(path, &first.path);
            self.automorphism(&from, &part.lab);
            return Some(jump);
        }
        let best = self.best.as_ref().expect("set with first");
        let order = match best_cmp {
            Ordering::Equal => traces
                .len()
                .cmp(&best.traces.len())
                .then_with(|| cert.cmp(&best.cert)),
            o => o,
        };
        match order {
            Ordering::Equal => {
                let from = best.lab.clone();
                let jump = common_prefix(path, &best.path);
                self.automorphism(&from, &part.lab);
                Some(jump)
            }
            Ordering::Greater => {
                self.best = Some(make(cert));
                None
            }
            Ordering::Less => None,
        }
    }

    /// Orbit labels under the found automorphisms fixing `path` pointwise.
    fn stabilizer_orbits(&self, path: &[u32]) -> Vec<u32> {
        let n = self.g.n();
        let fixing: Vec<Permutation> = self
            .gens
            .iter()
            .filter(|g| path.iter().all(|&x| g.apply(x as usize) == x as usize))
            .cloned()
            .collect();
        let mut label = vec![0u32; n];
        for (i, orbit) in orbits_under(&fixing, n).iter().enumerate() {
            for &x in orbit {
                label[x] = i as u32;
            }
        }
        label
    }
}

fn run_search(g: &ColoredGraph, opts: &CanonOptions) -> Result<CanonicalForm> {
    let n = g.n();
    let (mut part, starts) = Partition::from_colors(&g.colors);
    let mut sc = Scratch {
        count: vec![0; n],
        touched: Vec::new(),
        in_queue: vec![false; n],
    };
    part.refine(g, &starts, &mut sc);
    let mut search = Search {
        g,
        sc,
        first: None,
        best: None,
        gens: Vec::new(),
        nodes: 0,
        max_nodes: opts.max_nodes,
    };
    if n > 0 {
        let mut path = Vec::new();
        let mut traces = Vec::new();
        search.explore(part, &mut path, &mut traces, true, Ordering::Equal)?;
    }
    let best = search.best.take();
    let first_path = search
        .first
        .as_ref()
        .map(|f| f.path.clone())
        .unwrap_or_default();
    let labeling = best.as_ref().map(|b| b.lab.clone()).unwrap_or_default();
    let cert = best.map(|b| b.cert).unwrap_or_default();

    // Order bound from the orbits along the first path, then an exact check
    // through a stabilizer chain.
    let mut bound = BigUint::from(1u32);
    for d in 0..first_path.len() {
        let fixing: Vec<Permutation> = search
            .gens
            .iter()
            .filter(|p| {
                first_path[..d]
                    .iter()
                    .all(|&x| p.apply(x as usize) == x as usize)
            })
            .cloned()
            .collect();
        let orbit = crate::group::orbit_under(&fixing, n, first_path[d] as usize);
        bound *= BigUint::from(orbit.len());
    }
    let aut_order = if search.gens.is_empty() {
        BigUint::from(1u32)
    } else {
        PermGroup::with_order_bound(search.gens.clone(), &bound)?.order()
    };
    if aut_order != bound {
        return Err(Error::Invalid(format!(
            "automorphism group order {aut_order} disagrees with search bound {bound}"
        )));
    }

    let mut sizes: BTreeMap<u32, u32> = BTreeMap::new();
    for &c in &g.colors {
        *sizes.entry(c).or_default() += 1;
    }
    let mut words: Vec<u32> = vec![n as u32, sizes.len() as u32];
    words.extend(sizes.values());
    words.extend(cert);
    let bytes = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    Ok(CanonicalForm {
        bytes,
        labeling,
        generators: search.gens,
        aut_order,
        nodes: search.nodes,
    })
}

/// Canonical form, automorphism generators and automorphism group order.
pub fn canonical_form(g: &ColoredGraph, opts: &CanonOptions) -> Result<CanonicalForm> {
    if g.n() > opts.max_vertices {
        return Err(Error::CanonCap {
            vertices: g.n(),
            cap: opts.max_vertices,
        });
    }
    // The search recurses once per individualized vertex.
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(64 << 20)
            .spawn_scoped(s, || run_search(g, opts))
            .expect("spawn canonical search")
            .join()
            .expect("canonical search panicked")
    })
}

/// Automorphism group of a design acting on its points.
#[derive(Clone, Debug)]
pub struct AutReport {
    pub aut_order: BigUint,
    pub generators: Vec<Permutation>,
    pub digest: String,
}

/// Computes the full automorphism group of a design and checks that every
/// permutation in `expected` (e.g. the constructing group's generators on
/// the points) is among its automorphisms.
pub fn aut_order_report(
    d: &IncidenceStructure,
    expected: &[Permutation],
    opts: &CanonOptions,
) -> Result<AutReport> {
    if let Some(p) = expected.iter().find(|p| !d.is_invariant_under(p)) {
        return Err(Error::Containment(format!(
            "{p} does not preserve the block set"
        )));
    }
    let form = canonical_form(&encode_design(d), opts)?;
    let v = d.v();
    let generators: Vec<Permutation> = form
        .generators
        .iter()
        .map(|g| Permutation::from_images_unchecked(g.images()[..v].to_vec()))
        .filter(|g| !g.is_identity())
        .collect();
    Ok(AutReport {
        aut_order: form.aut_order.clone(),
        generators,
        digest: form.digest(),
    })
}

/// Partition of structures into isomorphism classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClasses {
    /// Indices into the input, each class sorted, classes ordered by their
    /// smallest member.
    pub classes: Vec<Vec<usize>>,
    /// Members that could not be canonized; each may or may not be new.
    pub unresolved: Vec<usize>,
}

impl IsoClasses {
    /// Lower and upper bound on the number of classes.
    pub fn count_range(&self) -> (usize, usize) {
        let lo = self
            .classes
            .len()
            .max(usize::from(!self.unresolved.is_empty()));
        (lo, self.classes.len() + self.unresolved.len())
    }
}

/// Cheap isomorphism invariant: parameters plus the sorted per-block
/// profiles of intersection sizes with all other blocks.
pub fn design_invariant(d: &IncidenceStructure) -> u64 {
    let mut h = mix(0, d.v() as u64);
    h = mix(h, d.b() as u64);
    h = mix(h, d.k() as u64);
    if d.b() > 20_000 {
        return h;
    }
    let v = d.v();
    let words = v.div_ceil(64);
    let sets: Vec<Vec<u64>> = d
        .blocks()
        .iter()
        .map(|b| {
            let mut w = vec![0u64; words];
            for &x in b {
                w[x as usize / 64] |= 1 << (x % 64);
            }
            w
        })
        .collect();
    let mut profiles: Vec<u64> = sets
        .iter()
        .map(|a| {
            let mut hist = vec![0u32; d.k() + 1];
            for b in &sets {
                let c: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                hist[c as usize] += 1;
            }
            hist.iter().fold(0u64, |h, &c| mix(h, c as u64))
        })
        .collect();
    profiles.sort_unstable();
    for p in profiles {
        h = mix(h, p);
    }
    h
}

/// Groups structures into isomorphism classes: bucket by invariants, then
/// compare canonical forms inside buckets with more than one member.
pub fn iso_classes(structures: &[IncidenceStructure], opts: &CanonOptions) -> Result<IsoClasses> {
    iso_classes_by(structures, |d| {
        Ok(canonical_form(&encode_design(d), opts)?.digest())
    })
}

/// Same as [`iso_classes`] with the canonical key supplied by the caller,
/// e.g. from a cache. Cap and budget errors from `key` mark a structure
/// unresolved.
pub fn iso_classes_by<F>(structures: &[IncidenceStructure], mut key: F) -> Result<IsoClasses>
where
    F: FnMut(&IncidenceStructure) -> Result<String>,
{
    if let Some(first) = structures.first() {
        if structures
            .iter()
            .any(|d| (d.v(), d.b(), d.k()) != (first.v(), first.b(), first.k()))
        {
            return Err(Error::Invalid("iso_classes needs equal (v, b, k)".into()));
        }
    }
    let mut buckets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, d) in structures.iter().enumerate() {
        buckets.entry(design_invariant(d)).or_default().push(i);
    }
    let mut out = IsoClasses::default();
    for members in buckets.into_values() {
        if members.len() == 1 {
            out.classes.push(members);
            continue;
        }
        let mut by_form: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for i in members {
            match key(&structures[i]) {
                Ok(f) => by_form.entry(f).or_default().push(i),
                Err(Error::CanonCap { .. }) | Err(Error::Budget(_)) => out.unresolved.push(i),
                Err(e) => return Err(e),
            }
        }
        out.classes.extend(by_form.into_values());
    }
    out.classes.sort();
    out.unresolved.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(u32, u32)]) -> ColoredGraph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        ColoredGraph::new(adj, vec![0; n]).unwrap()
    }

    fn petersen() -> ColoredGraph {
        let mut e = Vec::new();
        for i in 0..5u32 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        graph(10, &e)
    }

    fn triangular(n: u32) -> ColoredGraph {
        let pairs: Vec<(u32, u32)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let mut e = Vec::new();
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                if a == c || a == d || b == c || b == d {
                    e.push((i as u32, j as u32));
                }
            }
        }
        graph(pairs.len(), &e)
    }

    fn random_relabel(g: &ColoredGraph, rng: &mut ChaCha8Rng) -> ColoredGraph {
        // Shuffle within colour classes only.
        let n = g.n();
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut by_color: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for x in 0..n {
            by_color.entry(g.color(x)).or_default().push(x as u32);
        }
        for members in by_color.values() {
            let mut shuffled = members.clone();
            shuffled.shuffle(rng);
            for (a, b) in members.iter().zip(&shuffled) {
                images[*a as usize] = *b;
            }
        }
        g.relabel(&Permutation::from_images(images).unwrap())
    }

    #[test]
    fn small_automorphism_groups() {
        let opts = CanonOptions::default();
        assert_eq!(
            canonical_form(&petersen(), &opts).unwrap().aut_order,
            BigUint::from(120u32)
        );
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(
            canonical_form(&c5, &opts).unwrap().aut_order,
            BigUint::from(10u32)
        );
        let empty = ColoredGraph::new(vec![Vec::new(); 6], vec![0; 6]).unwrap();
        assert_eq!(
            canonical_form(&empty, &opts).unwrap().aut_order,
            BigUint::from(720u32)
        );
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(
            canonical_form(&path, &opts).unwrap().aut_order,
            BigUint::from(2u32)
        );
    }

    #[test]
    fn triangular_graph_has_symmetric_group() {
        let f = canonical_form(&triangular(11), &CanonOptions::default()).unwrap();
        assert_eq!(f.aut_order, BigUint::from(39_916_800u64));
        for g in &f.generators {
            assert!(triangular(11).is_automorphism(g));
        }
    }

    #[test]
    fn relabelling_keeps_the_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [petersen(), triangular(7)] {
            let base = canonical_form(&g, &CanonOptions::default()).unwrap();
            for _ in 0..20 {
                let h = random_relabel(&g, &mut rng);
                let f = canonical_form(&h, &CanonOptions::default()).unwrap();
                assert_eq!(f.bytes, base.bytes);
                assert_eq!(f.aut_order, base.aut_order);
            }
        }
    }

    #[test]
    fn non_isomorphic_graphs_differ() {
        let opts = CanonOptions::default();
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let two_triangles = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let a = canonical_form(&c6, &opts).unwrap();
        let b = canonical_form(&two_triangles, &opts).unwrap();
        assert_ne!(a.bytes, b.bytes);
        assert_eq!(b.aut_order, BigUint::from(72u32));
    }

    #[test]
    fn colours_are_respected() {
        let opts = CanonOptions::default();
        let mut adj = vec![Vec::new(); 4];
        for (a, b) in [(0u32, 1u32), (2, 3)] {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let g = ColoredGraph::new(adj.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(
            canonical_form(&g, &opts).unwrap().aut_order,
            BigUint::from(2u32)
        );
        let h = ColoredGraph::new(adj, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(
            canonical_form(&g, &opts).unwrap().bytes,
            canonical_form(&h, &opts).unwrap().bytes
        );
    }

    #[test]
    fn design_encoding_and_caps() {
        let fano = IncidenceStructure::new(
            7,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5],
            ],
        )
        .unwrap();
        let g = encode_design(&fano);
        assert_eq!(g.n(), 14);
        assert_eq!(g.edge_count(), 21);
        let r = aut_order_report(&fano, &[], &CanonOptions::default()).unwrap();
        assert_eq!(r.aut_order, BigUint::from(168u32));
        let bad = Permutation::parse("(0,1)", 7).unwrap();
        assert!(matches!(
            aut_order_report(&fano, &[bad], &CanonOptions::default()),
            Err(Error::Containment(_))
        ));
        let tight = CanonOptions {
            max_vertices: 10,
            ..CanonOptions::default()
        };
        assert!(matches!(
            canonical_form(&g, &tight),
            Err(Error::CanonCap { .. })
        ));
    }

    #[test]
    fn iso_classes_merge_copies() {
        let a = IncidenceStructure::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let b = IncidenceStructure::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let c = IncidenceStructure::new(4, vec![vec![0, 1], vec![1, 2]]);
        assert!(c.is_ok());
        let classes = iso_classes(&[a.clone(), b, a], &CanonOptions::default()).unwrap();
        assert_eq!(classes.classes, vec![vec![0, 1, 2]]);
        assert_eq!(classes.count_range(), (1, 1));
    }
}
