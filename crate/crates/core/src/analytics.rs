//! Exact t-design, intersection-number and strong-regularity checks.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::design::{IncidenceStructure, UGraph};
use crate::error::{Error, Result};

/// Default cap on the number of blocks for the pairwise intersection pass.
pub const DEFAULT_INTERSECTION_CAP: usize = 20_000;

/// The largest `t` for which a structure is a `t`-design, with `lambdas[s]`
/// the number of blocks through any `s` points for `s = 0..=t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TDesign {
    pub t: usize,
    pub lambdas: Vec<u64>,
}

impl TDesign {
    pub fn lambda(&self) -> u64 {
        self.lambdas[self.t]
    }
}

/// The `t` cap used by the table sweeps: 5 up to 22 points, 3 above.
pub fn default_t_cap(v: usize) -> usize {
    if v <= 22 {
        5
    } else {
        3
    }
}

fn binomials(n: usize, t: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; t + 2]; n + 1];
    for row in c.iter_mut() {
        row[0] = 1;
    }
    for i in 1..=n {
        for j in 1..=t + 1 {
            c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
        }
    }
    c
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of blocks through each `t`-subset, indexed by colex rank.
fn coverage(d: &IncidenceStructure, t: usize, c: &[Vec<u64>]) -> Vec<u32> {
    let total = c[d.v()][t] as usize;
    let mut counts = vec![0u32; total];
    let mut idx: Vec<usize> = (0..t).collect();
    for b in d.blocks() {
        if b.len() < t {
            continue;
        }
        for (i, x) in idx.iter_mut().enumerate() {
            *x = i;
        }
        loop {
            let rank: u64 = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| c[b[j] as usize][i + 1])
                .sum();
            counts[rank as usize] += 1;
            let mut i = t;
            while i > 0 && idx[i - 1] == b.len() - t + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..t {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    counts
}

/// Largest `t <= t_cap` with constant coverage of `t`-subsets, found by
/// counting every `t`-subset.
pub fn max_t_lambda(d: &IncidenceStructure, t_cap: usize) -> Result<TDesign> {
    let r = d.replication()?;
    let cap = t_cap.min(d.k()).min(d.v());
    let c = binomials(d.v(), cap.max(1));
    let mut lambdas = vec![d.b() as u64, r as u64];
    if d.v() == 0 || d.b() == 0 {
        return Ok(TDesign {
            t: 0,
            lambdas: vec![0],
        });
    }
    for t in 2..=cap {
        let counts = coverage(d, t, &c);
        let first = counts[0];
        if counts.iter().any(|&x| x != first) {
            break;
        }
        lambdas.push(first as u64);
    }
    if cap == 0 {
        lambdas.truncate(1);
    }
    Ok(TDesign {
        t: lambdas.len() - 1,
        lambdas,
    })
}

/// `lambda_s = lambda_t * C(v-s, t-s) / C(k-s, t-s)` for `s = 0..=t`;
/// fails when some value is not an integer.
pub fn lambda_cascade(t: usize, v: usize, k: usize, lambda: u64) -> Result<Vec<u64>> {
    if t > k || k > v {
        return Err(Error::Inadmissible(format!(
            "need t <= k <= v, got t={t} k={k} v={v}"
        )));
    }
    (0..=t)
        .map(|s| {
            let num = lambda as u128 * binom((v - s) as u64, (t - s) as u64);
            let den = binom((k - s) as u64, (t - s) as u64);
            if !num.is_multiple_of(den) {
                Err(Error::Inadmissible(format!(
                    "lambda_{s} = {num}/{den} for {t}-({v},{k},{lambda})"
                )))
            } else {
                u64::try_from(num / den)
                    .map_err(|_| Error::Inadmissible(format!("lambda_{s} overflows")))
            }
        })
        .collect()
}

/// Multiset of block intersection sizes over unordered pairs of blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    pub sizes: BTreeMap<usize, u64>,
}

impl IntersectionProfile {
    /// `(x, y)` with `x <= y` when at most two sizes occur.
    pub fn quasi_symmetric(&self) -> Option<(usize, usize)> {
        let keys: Vec<usize> = self.sizes.keys().copied().collect();
        match keys[..] {
            [x] => Some((x, x)),
            [x, y] => Some((x, y)),
            _ => None,
        }
    }
}

pub fn intersection_numbers(d: &IncidenceStructure, cap: usize) -> Result<IntersectionProfile> {
    if d.b() > cap {
        return Err(Error::Budget(format!(
            "{} blocks exceed the intersection cap of {cap}",
            d.b()
        )));
    }
    let sets: Vec<FixedBitSet> = d
        .blocks()
        .iter()
        .map(|b| {
            let mut s = FixedBitSet::with_capacity(d.v());
            for &x in b {
                s.insert(x as usize);
            }
            s
        })
        .collect();
    let mut sizes = BTreeMap::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            *sizes
                .entry(sets[i].intersection_count(&sets[j]))
                .or_insert(0) += 1;
        }
    }
    Ok(IntersectionProfile { sizes })
}

/// Parameters `(v, k, lambda, mu)` of a strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    pub fn satisfies_identity(&self) -> bool {
        self.k * (self.k - self.lambda - 1) == (self.v - self.k - 1) * self.mu
    }
}

impl std::fmt::Display for SrgParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SrgVerdict {
    Srg(SrgParams),
    /// Empty, complete, or a disjoint union of cliques.
    Degenerate(String),
    NotStronglyRegular,
}

impl SrgVerdict {
    pub fn params(&self) -> Option<SrgParams> {
        match self {
            SrgVerdict::Srg(p) => Some(*p),
            _ => None,
        }
    }
}

pub fn srg_check(g: &UGraph) -> SrgVerdict {
    let v = g.v();
    let k = g.degree();
    if k == 0 {
        return SrgVerdict::Degenerate("no edges".into());
    }
    if k + 1 == v {
        return SrgVerdict::Degenerate("complete graph".into());
    }
    let mut lambda = None;
    let mut mu = None;
    for x in 0..v {
        for y in x + 1..v {
            let common = g.row(x).intersection_count(g.row(y)) as u64;
            let slot = if g.is_adjacent(x, y) {
                &mut lambda
            } else {
                &mut mu
            };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return SrgVerdict::NotStronglyRegular,
                _ => {}
            }
        }
    }
    let p = SrgParams {
        v: v as u64,
        k: k as u64,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    };
    if p.mu == 0 {
        return SrgVerdict::Degenerate("disjoint union of cliques".into());
    }
    debug_assert!(p.satisfies_identity());
    SrgVerdict::Srg(p)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `(lambda, mu)` pairs with `mu >= 1` passing `k(k-lambda-1) = (v-k-1)mu`
/// and integrality of the eigenvalue multiplicities.
pub fn srg_feasibility(v: u64, k: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if k == 0 || k + 1 >= v {
        return out;
    }
    for lambda in 0..k {
        let lhs = k * (k - lambda - 1);
        let rest = v - k - 1;
        if !lhs.is_multiple_of(rest) {
            continue;
        }
        let mu = lhs / rest;
        if mu == 0 || mu > k {
            continue;
        }
        let (l, m, ki, vi) = (lambda as i64, mu as i64, k as i64, v as i64);
        let disc = (l - m) * (l - m) + 4 * (ki - m);
        let root = isqrt(disc as u64) as i64;
        let num = 2 * ki + (vi - 1) * (l - m);
        let ok = if root * root == disc {
            // f, g = ((v-1) -+ num/root) / 2
            num % root == 0 && {
                let q = num / root;
                let f2 = (vi - 1) - q;
                let g2 = (vi - 1) + q;
                f2 >= 0 && g2 >= 0 && f2 % 2 == 0 && g2 % 2 == 0
            }
        } else {
            num == 0 && (vi - 1) % 2 == 0
        };
        if ok {
            out.push((lambda, mu));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> UGraph {
        let ns: Vec<Vec<u32>> = (0..n)
            .map(|i| vec![((i + 1) % n) as u32, ((i + n - 1) % n) as u32])
            .collect();
        UGraph::from_neighbors(&ns).unwrap()
    }

    fn triangular(n: usize) -> UGraph {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let ns: Vec<Vec<u32>> = pairs
            .iter()
            .map(|&(a, b)| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, &(c, d))| {
                        (a, b) != (c, d) && (a == c || a == d || b == c || b == d)
                    })
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        UGraph::from_neighbors(&ns).unwrap()
    }

    fn complete_design(v: usize, k: usize) -> IncidenceStructure {
        let mut blocks = Vec::new();
        let mut idx: Vec<u32> = (0..k as u32).collect();
        loop {
            blocks.push(idx.clone());
            let mut i = k;
            while i > 0 && idx[i - 1] as usize == v - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
        IncidenceStructure::new(v, blocks).unwrap()
    }

    #[test]
    fn complete_designs_reach_t_equal_k() {
        let d = complete_design(7, 3);
        let t = max_t_lambda(&d, 5).unwrap();
        assert_eq!(t.t, 3);
        assert_eq!(t.lambdas, vec![35, 15, 5, 1]);
    }

    #[test]
    fn fano_plane_is_2_design() {
        let blocks = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        let d = IncidenceStructure::new(7, blocks).unwrap();
        let t = max_t_lambda(&d, 3).unwrap();
        assert_eq!((t.t, t.lambda()), (2, 1));
        let p = intersection_numbers(&d, 100).unwrap();
        assert_eq!(p.quasi_symmetric(), Some((1, 1)));
    }

    #[test]
    fn non_uniform_replication_rejected() {
        let d = IncidenceStructure::new(3, vec![vec![0, 1], vec![0, 2]]).unwrap();
        assert!(matches!(max_t_lambda(&d, 2), Err(Error::NotUniform(_))));
    }

    #[test]
    fn cascade_values() {
        assert_eq!(lambda_cascade(4, 11, 5, 1).unwrap(), vec![66, 30, 12, 4, 1]);
        assert_eq!(lambda_cascade(3, 22, 7, 18).unwrap()[..3], [792, 252, 72]);
        assert_eq!(lambda_cascade(2, 7, 3, 1).unwrap()[2], 1);
        assert!(lambda_cascade(2, 8, 3, 1).is_err());
    }

    #[test]
    fn intersections_of_small_structures() {
        let single = IncidenceStructure::new(4, vec![vec![0, 1]]).unwrap();
        assert!(intersection_numbers(&single, 10).unwrap().sizes.is_empty());
        let disjoint = IncidenceStructure::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(intersection_numbers(&disjoint, 10).unwrap().sizes[&0], 1);
        assert!(intersection_numbers(&complete_design(6, 3), 5).is_err());
    }

    #[test]
    fn srg_checks() {
        assert_eq!(
            srg_check(&cycle(5)).params(),
            Some(SrgParams {
                v: 5,
                k: 2,
                lambda: 0,
                mu: 1
            })
        );
        assert_eq!(srg_check(&cycle(6)), SrgVerdict::NotStronglyRegular);
        let t11 = srg_check(&triangular(11)).params().unwrap();
        assert_eq!((t11.v, t11.k, t11.lambda, t11.mu), (55, 18, 9, 4));
        let t12 = srg_check(&triangular(12)).params().unwrap();
        assert_eq!((t12.v, t12.k, t12.lambda, t12.mu), (66, 20, 10, 4));
        let k2s = UGraph::from_neighbors(&[vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert!(matches!(srg_check(&k2s), SrgVerdict::Degenerate(_)));
        assert!(matches!(srg_check(&cycle(3)), SrgVerdict::Degenerate(_)));
    }

    #[test]
    fn feasibility_lists() {
        assert!(srg_feasibility(55, 18).contains(&(9, 4)));
        assert!(srg_feasibility(330, 63).contains(&(24, 9)));
        assert!(srg_feasibility(5, 2).contains(&(0, 1)));
        assert!(srg_feasibility(144, 66).contains(&(30, 30)));
        for (l, m) in srg_feasibility(100, 22) {
            assert_eq!(22 * (22 - l - 1), (100 - 22 - 1) * m);
        }
        assert!(srg_feasibility(5, 4).is_empty());
    }
}
