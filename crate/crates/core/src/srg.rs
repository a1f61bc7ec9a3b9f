//! Search for strongly regular orbital graphs of a transitive action.
//!
//! A union of pairing classes of suborbits gives a symmetric relation whose
//! square is determined by the intersection numbers of the orbital scheme,
//! so strong regularity can be decided without building the graph.

use serde::{Deserialize, Serialize};

use crate::action::{orbit_pairing, suborbits, GroupAction};
use crate::analytics::{srg_check, srg_feasibility, SrgParams};
use crate::design::{orbital_graph, UGraph};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Suborbits of a transitive action grouped into pairing classes, with the
/// class-level intersection numbers.
#[derive(Clone, Debug)]
pub struct OrbitalScheme {
    pub n: usize,
    /// Suborbits of the stabilizer of point 0.
    pub orbits: Vec<Vec<usize>>,
    /// Each class is a self-paired suborbit or a pair of paired ones;
    /// the class of point 0 itself is left out.
    pub classes: Vec<Vec<usize>>,
    pub class_sizes: Vec<usize>,
    // weights[(c * q + a) * q + b]: two-step walks 0 -> z -> beta_c with the
    // first step in class a and the second in class b, summed symmetrically.
    weights: Vec<u32>,
}

impl OrbitalScheme {
    pub fn new(action: &GroupAction) -> Result<Self> {
        let n = action.degree();
        let sub = suborbits(action, 0, action)?;
        let pairing = orbit_pairing(action, &sub)?;
        let own = sub.orbit_index[0];
        let mut class_of_orbit = vec![usize::MAX; sub.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..sub.len() {
            if i == own || class_of_orbit[i] != usize::MAX {
                continue;
            }
            let mut c = vec![i];
            if pairing[i] != i {
                c.push(pairing[i]);
            }
            for &x in &c {
                class_of_orbit[x] = classes.len();
            }
            classes.push(c);
        }
        let q = classes.len();
        let class_sizes: Vec<usize> = classes
            .iter()
            .map(|c| c.iter().map(|&i| sub.orbits[i].len()).sum())
            .collect();

        // Inverse witnesses: inv[x] maps x back to 0.
        let orbit = action.image().orbit_of(0)?;
        let inv: Vec<Permutation> = (0..n)
            .map(|x| {
                orbit
                    .witness(x)
                    .map(|g| g.inverse())
                    .ok_or_else(|| Error::Invalid("action is not transitive".into()))
            })
            .collect::<Result<_>>()?;
        let class_of_point = |x: usize| class_of_orbit[sub.orbit_index[x]];
        let mut weights = vec![0u32; q * q * q];
        for (c, members) in classes.iter().enumerate() {
            let beta = sub.orbits[members[0]][0];
            for (z, zinv) in inv.iter().enumerate() {
                let a = class_of_point(z);
                let b = class_of_point(zinv.apply(beta));
                if a == usize::MAX || b == usize::MAX {
                    continue;
                }
                weights[(c * q + a) * q + b] += 1;
            }
            for a in 0..q {
                for b in a + 1..q {
                    let s = weights[(c * q + a) * q + b] + weights[(c * q + b) * q + a];
                    weights[(c * q + a) * q + b] = s;
                    weights[(c * q + b) * q + a] = s;
                }
            }
        }
        Ok(OrbitalScheme {
            n,
            orbits: sub.orbits,
            classes,
            class_sizes,
            weights,
        })
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    fn w(&self, c: usize, a: usize, b: usize) -> u32 {
        let q = self.classes.len();
        self.weights[(c * q + a) * q + b]
    }

    /// Common neighbour counts of 0 and a vertex of each class for the
    /// graph made of the given classes.
    pub fn common_neighbours(&self, chosen: &[usize]) -> Vec<u64> {
        (0..self.class_count())
            .map(|c| {
                let mut f = 0u64;
                for (i, &a) in chosen.iter().enumerate() {
                    f += self.w(c, a, a) as u64;
                    for &b in &chosen[i + 1..] {
                        f += self.w(c, a, b) as u64;
                    }
                }
                f
            })
            .collect()
    }

    /// Suborbit indices making up the given classes.
    pub fn orbit_subset(&self, chosen: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = chosen
            .iter()
            .flat_map(|&c| self.classes[c].iter().copied())
            .collect();
        v.sort_unstable();
        v
    }
}

/// Limits for the search over unions of pairing classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgSearchOptions {
    /// Only valencies up to `(v - 1) / 2` are searched when set; the others
    /// are complements.
    pub half_valency: bool,
    pub max_nodes: u64,
}

impl Default for SrgSearchOptions {
    fn default() -> Self {
        SrgSearchOptions {
            half_valency: true,
            max_nodes: 2_000_000_000,
        }
    }
}

/// A strongly regular orbital graph found by the search.
#[derive(Clone, Debug)]
pub struct SrgCandidate {
    pub params: SrgParams,
    pub classes: Vec<usize>,
    pub orbit_subset: Vec<usize>,
    pub graph: UGraph,
}

/// Counters from one search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgSearchStats {
    pub classes: usize,
    pub valencies_tried: usize,
    pub nodes: u64,
}

struct Dfs<'a> {
    scheme: &'a OrbitalScheme,
    order: Vec<usize>,
    pos: Vec<usize>,
    suffix: Vec<usize>,
    k: usize,
    lambda: u64,
    mu: u64,
    chosen: Vec<usize>,
    in_set: Vec<bool>,
    f: Vec<u64>,
    found: Vec<Vec<usize>>,
    nodes: u64,
    max_nodes: u64,
}

impl Dfs<'_> {
    fn run(&mut self, i: usize, size: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget(format!(
                "strongly regular search exceeded {} nodes",
                self.max_nodes
            )));
        }
        if size == self.k {
            let ok = (0..self.f.len())
                .all(|c| self.f[c] == if self.in_set[c] { self.lambda } else { self.mu });
            if ok {
                let mut s = self.chosen.clone();
                s.sort_unstable();
                self.found.push(s);
            }
            return Ok(());
        }
        if i == self.order.len() || size + self.suffix[i] < self.k {
            return Ok(());
        }
        let c = self.order[i];
        let cap = self.lambda.max(self.mu);
        // Include class c.
        if size + self.scheme.class_sizes[c] <= self.k {
            let q = self.scheme.class_count();
            for l in 0..q {
                let mut d = self.scheme.w(l, c, c) as u64;
                for &b in &self.chosen {
                    d += self.scheme.w(l, c, b) as u64;
                }
                self.f[l] += d;
            }
            self.chosen.push(c);
            self.in_set[c] = true;
            let bounded = (0..q).all(|l| {
                let decided = self.pos[l] <= i;
                let limit = if !decided {
                    cap
                } else if self.in_set[l] {
                    self.lambda
                } else {
                    self.mu
                };
                self.f[l] <= limit
            });
            if bounded {
                self.run(i + 1, size + self.scheme.class_sizes[c])?;
            }
            self.in_set[c] = false;
            self.chosen.pop();
            for l in 0..q {
                let mut d = self.scheme.w(l, c, c) as u64;
                for &b in &self.chosen {
                    d += self.scheme.w(l, c, b) as u64;
                }
                self.f[l] -= d;
            }
        }
        // Exclude class c: its count can only grow from here.
        if self.f[c] <= self.mu {
            self.run(i + 1, size)?;
        }
        Ok(())
    }
}

/// All unions of pairing classes giving a strongly regular graph with
/// `mu > 0`, valency filtered through the integrality conditions first.
pub fn search_srgs(
    action: &GroupAction,
    opts: &SrgSearchOptions,
) -> Result<(Vec<SrgCandidate>, SrgSearchStats)> {
    let scheme = OrbitalScheme::new(action)?;
    let v = scheme.n as u64;
    let q = scheme.class_count();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(scheme.class_sizes[c]), c));
    let mut pos = vec![0usize; q];
    for (i, &c) in order.iter().enumerate() {
        pos[c] = i;
    }
    let mut suffix = vec![0usize; q + 1];
    for i in (0..q).rev() {
        suffix[i] = suffix[i + 1] + scheme.class_sizes[order[i]];
    }
    // Reachable valencies via subset sums.
    let total = suffix[0];
    let mut reachable = vec![false; total + 1];
    reachable[0] = true;
    for &s in &scheme.class_sizes {
        for x in (s..=total).rev() {
            if reachable[x - s] {
                reachable[x] = true;
            }
        }
    }
    let k_max = if opts.half_valency {
        (scheme.n.saturating_sub(1)) / 2
    } else {
        total
    };
    let mut stats = SrgSearchStats {
        classes: q,
        ..SrgSearchStats::default()
    };
    let mut out = Vec::new();
    for (k, _) in reachable
        .iter()
        .enumerate()
        .take(k_max.min(total) + 1)
        .skip(1)
        .filter(|(_, &r)| r)
    {
        for (lambda, mu) in srg_feasibility(v, k as u64) {
            stats.valencies_tried += 1;
            let mut dfs = Dfs {
                scheme: &scheme,
                order: order.clone(),
                pos: pos.clone(),
                suffix: suffix.clone(),
                k,
                lambda,
                mu,
                chosen: Vec::new(),
                in_set: vec![false; q],
                f: vec![0; q],
                found: Vec::new(),
                nodes: 0,
                max_nodes: opts.max_nodes.saturating_sub(stats.nodes),
            };
            dfs.run(0, 0)?;
            stats.nodes += dfs.nodes;
            for classes in dfs.found {
                let orbit_subset = scheme.orbit_subset(&classes);
                let mut delta: Vec<u32> = orbit_subset
                    .iter()
                    .flat_map(|&i| scheme.orbits[i].iter().map(|&x| x as u32))
                    .collect();
                delta.sort_unstable();
                let graph = orbital_graph(action, 0, &delta)?;
                let params = srg_check(&graph).params().ok_or_else(|| {
                    Error::Invalid("intersection numbers disagree with the graph".into())
                })?;
                if (params.lambda, params.mu) != (lambda, mu) {
                    return Err(Error::Invalid(
                        "search parameters disagree with the graph".into(),
                    ));
                }
                out.push(SrgCandidate {
                    params,
                    classes,
                    orbit_subset,
                    graph,
                });
            }
        }
    }
    Ok((out, stats))
}
