use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use atlas_core::action::{coset_action, ActionDescriptor, GroupAction, DEFAULT_INDEX_CAP};
use atlas_core::analytics::{default_t_cap, max_t_lambda};
use atlas_core::canon::{canonical_form, encode_design, iso_classes_by, ColoredGraph};
use atlas_core::design::{DesignCollector, IncidenceStructure, SweepOptions, UGraph};
use atlas_core::perm::parse_group_file;
use atlas_core::srg::{search_srgs, SrgSearchOptions};
use atlas_core::{enumerate_subgroup_classes, m11, AtlasBudget, Error, PermGroup, SubgroupClass};
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::cache::{content_key, Cache};
use crate::config::{RowFilter, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{Report, ReportKind, ReportRow};

/// Group, subgroup atlas and lazily built coset actions for one run.
pub struct Session {
    pub config: RunConfig,
    pub group: PermGroup,
    pub classes: Vec<SubgroupClass>,
    pub cache: Cache,
    actions: Vec<OnceLock<GroupAction>>,
    pool: rayon::ThreadPool,
}

impl Session {
    /// Loads the group, builds the atlas and opens the cache under the
    /// output directory.
    pub fn new(config: RunConfig) -> CliResult<Self> {
        let cache = Cache::open(config.output_dir.join("cache"))?;
        Self::with_cache(config, cache)
    }

    pub fn with_cache(config: RunConfig, cache: Cache) -> CliResult<Self> {
        config.validate()?;
        let group = match config.group_path() {
            None => m11::load_validated()?,
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let (degree, gens) = parse_group_file(&text)?;
                PermGroup::from_generators(degree, gens)?
            }
        };
        let classes = enumerate_subgroup_classes(&group, AtlasBudget::default())?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let actions = (0..classes.len()).map(|_| OnceLock::new()).collect();
        Ok(Session {
            config,
            group,
            classes,
            cache,
            actions,
            pool,
        })
    }

    pub fn group_order(&self) -> u64 {
        self.group.order_u64()
    }

    /// Coset action on the given subgroup class, tagged with the class id.
    pub fn action(&self, class: usize) -> CliResult<&GroupAction> {
        if let Some(a) = self.actions[class].get() {
            return Ok(a);
        }
        let mut a = coset_action(
            &self.group,
            &self.classes[class].representative,
            DEFAULT_INDEX_CAP,
        )?;
        a.class_id = Some(class);
        Ok(self.actions[class].get_or_init(|| a))
    }

    pub fn classes_of_index(&self, index: u64) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].index == index)
            .collect()
    }

    fn check_degrees(&self, degrees: &[u64]) -> CliResult<Vec<u64>> {
        let mut degrees = degrees.to_vec();
        degrees.sort_unstable();
        degrees.dedup();
        for &n in &degrees {
            if n < 2 || self.classes_of_index(n).is_empty() {
                return Err(CliError::Config(format!(
                    "no transitive action of degree {n} (not the index of a proper subgroup)"
                )));
            }
        }
        Ok(degrees)
    }

    /// One row per subgroup class.
    pub fn subgroup_table(&self) -> String {
        let mut s = String::from("| class | order | index | class size | normalizer order | solvable |\n|---|---|---|---|---|---|\n");
        for (i, c) in self.classes.iter().enumerate() {
            let _ = writeln!(
                s,
                "| {i} | {} | {} | {} | {} | {} |",
                c.order, c.index, c.class_size, c.normalizer_order, c.solvable
            );
        }
        s
    }

    /// Descriptors of the transitive actions up to `max_degree` points.
    pub fn action_table(&self, max_degree: u64) -> CliResult<Vec<(usize, ActionDescriptor)>> {
        let ids: Vec<usize> = (0..self.classes.len())
            .filter(|&i| (2..=max_degree).contains(&self.classes[i].index))
            .collect();
        ids.into_iter()
            .map(|i| Ok((i, self.action(i)?.descriptor())))
            .collect()
    }

    fn canon_key(
        &self,
        cfg: &RunConfig,
        kind: &str,
        text: &str,
        g: impl FnOnce() -> ColoredGraph,
    ) -> atlas_core::Result<(String, String)> {
        let key = content_key(kind, text);
        let opts = cfg.canon_options();
        self.cache
            .get_or_compute(&key, || {
                let f = canonical_form(&g(), &opts)?;
                Ok((f.digest(), f.aut_order.to_string()))
            })
            .map(|e| (e.digest, e.aut_order))
            .map_err(|e| match e {
                CliError::Core(e) => e,
                other => Error::Invalid(other.to_string()),
            })
    }
}

struct SweepPlan {
    omega1: Vec<usize>,
    block_sizes: (usize, usize),
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

fn sweep_plans(s: &Session, cfg: &RunConfig, v: u64) -> Vec<SweepPlan> {
    let floor: Vec<usize> = (0..s.classes.len())
        .filter(|&i| s.classes[i].order >= cfg.min_omega1_order)
        .collect();
    let default_sizes = (cfg.min_block_size, v as usize / 2);
    if cfg.rows.is_empty() {
        return vec![SweepPlan {
            omega1: floor,
            block_sizes: default_sizes,
        }];
    }
    cfg.rows
        .iter()
        .map(|f| match (f.k, f.lambda) {
            (Some(k), Some(lambda)) => {
                // A full row pins the block count, hence the order of the
                // block stabilizer; only that class can contribute new blocks.
                let t = f.t.unwrap_or(cfg.min_t) as u64;
                let order = s.group_order();
                let stab = (|| {
                    let num = lambda.checked_mul(binomial(v, t)?)?;
                    let den = binomial(k as u64, t)?;
                    if den == 0 || num % den != 0 {
                        return None;
                    }
                    let b = num / den;
                    (b > 0 && order.is_multiple_of(b)).then(|| order / b)
                })();
                SweepPlan {
                    omega1: floor
                        .iter()
                        .copied()
                        .filter(|&i| Some(s.classes[i].order) == stab)
                        .collect(),
                    block_sizes: (k, k),
                }
            }
            (Some(k), None) => SweepPlan {
                omega1: floor.clone(),
                block_sizes: (k, k),
            },
            _ => SweepPlan {
                omega1: floor.clone(),
                block_sizes: default_sizes,
            },
        })
        .collect()
}

fn row_key_text(t: usize, v: usize, k: usize, lambda: u64) -> String {
    format!("{t}-({v},{k},{lambda})")
}

/// Numeric ascending, distinct; anything unparsed (a capped search) goes last.
fn sort_orders(orders: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut rest = BTreeSet::new();
    let mut set = BTreeSet::new();
    for o in orders {
        match o.parse::<BigUint>() {
            Ok(n) => {
                set.insert(n);
            }
            Err(_) => {
                rest.insert(o);
            }
        }
    }
    set.into_iter().map(|o| o.to_string()).chain(rest).collect()
}

/// Sweeps every (point-stabilizer class, block class) pair for each
/// requested degree and classifies the resulting designs up to isomorphism.
pub fn run_design_classification(s: &Session, cfg: &RunConfig) -> CliResult<Report> {
    cfg.validate()?;
    let degrees = s.check_degrees(&cfg.degrees)?;
    let mut report = Report::new(ReportKind::Designs);
    let order = s.group_order();
    for v in degrees {
        let mut pool: Vec<IncidenceStructure> = Vec::new();
        let mut incomplete_b: BTreeSet<u64> = BTreeSet::new();
        let plans = sweep_plans(s, cfg, v);
        for j in s.classes_of_index(v) {
            let mut col = DesignCollector::new(s.action(j)?, cfg.min_t)?;
            for plan in &plans {
                let opts = SweepOptions {
                    max_suborbits: cfg.max_suborbits,
                    block_sizes: Some(plan.block_sizes),
                    min_t: cfg.min_t,
                };
                for &i in &plan.omega1 {
                    match col.sweep(s.action(i)?, &opts) {
                        Ok(_) => {}
                        Err(Error::Budget(msg)) => {
                            let b = order / s.classes[i].order;
                            report.warnings.push(format!(
                                "degree {v}: subgroup class {i} (order {}) not swept, rows with {b} blocks may be incomplete: {msg}",
                                s.classes[i].order
                            ));
                            incomplete_b.insert(b);
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            pool.extend(col.into_designs());
        }
        if cfg.min_omega1_order > 1 {
            report.notes.push(format!(
                "degree {v}: subgroups of order below {} not swept, designs with more than {} blocks are not listed",
                cfg.min_omega1_order,
                order / cfg.min_omega1_order
            ));
        }

        let t_cap = cfg.t_cap.unwrap_or_else(|| default_t_cap(v as usize));
        let (k_lo, k_hi) = (cfg.min_block_size, v as usize / 2);
        // Rows come out by t descending, then k, then lambda.
        let mut groups: BTreeMap<(Reverse<usize>, usize, u64), Vec<IncidenceStructure>> = BTreeMap::new();
        for d in pool {
            if d.is_degenerate() || d.k() < k_lo || d.k() > k_hi {
                continue;
            }
            let td = max_t_lambda(&d, t_cap)?;
            if td.t < cfg.min_t {
                continue;
            }
            let lambda = td.lambda();
            if !cfg.rows.is_empty()
                && !cfg
                    .rows
                    .iter()
                    .any(|f: &RowFilter| f.matches(td.t, d.k(), lambda))
            {
                continue;
            }
            groups.entry((Reverse(td.t), d.k(), lambda)).or_default().push(d);
        }
        let groups: Vec<_> = groups.into_iter().collect();
        let rows: Vec<CliResult<(ReportRow, Option<String>)>> = s.pool.install(|| {
            groups
                .par_iter()
                .map(|((Reverse(t), k, lambda), designs)| {
                    let key = |d: &IncidenceStructure| {
                        s.canon_key(cfg, "design", &d.to_text(), || encode_design(d)).map(|(digest, _)| digest)
                    };
                    let iso = iso_classes_by(designs, key)?;
                    let mut orders = Vec::new();
                    let mut provenance = Vec::new();
                    for c in &iso.classes {
                        let d = &designs[c[0]];
                        match s.canon_key(cfg, "design", &d.to_text(), || encode_design(d)) {
                            Ok((_, aut)) => orders.push(aut),
                            Err(Error::CanonCap { .. } | Error::Budget(_)) => orders.push("unknown".into()),
                            Err(e) => return Err(e.into()),
                        }
                        if let Some(p) = d.provenance.first() {
                            let id = |c: Option<usize>| c.map_or("?".to_string(), |c| c.to_string());
                            provenance.push(format!("{}:{}:{:#x}", id(p.omega1_class), id(p.omega2_class), p.orbit_mask));
                        }
                    }
                    let (lo, hi) = iso.count_range();
                    let b = designs[0].b() as u64;
                    let parameters = row_key_text(*t, v as usize, *k, *lambda);
                    let unknown = orders.iter().filter(|o| *o == "unknown").count();
                    let warning = if !iso.unresolved.is_empty() {
                        Some(format!("{parameters}: {} designs hit the canonical form cap", iso.unresolved.len()))
                    } else if unknown > 0 {
                        Some(format!("{parameters}: {unknown} automorphism orders hit the canonical form cap"))
                    } else {
                        None
                    };
                    let row = ReportRow {
                        parameters,
                        blocks: Some(b),
                        count: lo,
                        lower_bound: lo != hi || incomplete_b.contains(&b),
                        aut_orders: sort_orders(orders),
                        provenance,
                    };
                    Ok((row, warning))
                })
                .collect()
        });
        for r in rows {
            let (row, warning) = r?;
            report.rows.push(row);
            report.warnings.extend(warning);
        }
    }
    Ok(report)
}

fn graph_text(g: &UGraph) -> String {
    let mut s = format!("{} {}\n", g.v(), g.degree());
    for x in 0..g.v() {
        let row: Vec<String> = g.neighbors(x).map(|y| y.to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Strongly regular orbital graphs of every requested action, one row per
/// parameter set after removing isomorphic copies.
pub fn run_srg_search(s: &Session, cfg: &RunConfig) -> CliResult<Report> {
    cfg.validate()?;
    let max = cfg.max_graph_degree;
    if let Some(&n) = cfg.degrees.iter().find(|&&n| n > max) {
        return Err(CliError::Config(format!(
            "degree {n} is above max_graph_degree {max}"
        )));
    }
    let ids: Vec<usize> = if cfg.degrees.is_empty() {
        (0..s.classes.len())
            .filter(|&i| (2..=max).contains(&s.classes[i].index))
            .collect()
    } else {
        s.check_degrees(&cfg.degrees)?
            .into_iter()
            .flat_map(|n| s.classes_of_index(n))
            .collect()
    };
    for &i in &ids {
        s.action(i)?;
    }
    let opts = SrgSearchOptions::default();
    let found: Vec<CliResult<_>> = s.pool.install(|| {
        ids.par_iter()
            .map(|&i| {
                let a = s.action(i)?;
                match search_srgs(a, &opts) {
                    Ok((cands, _)) => {
                        let mut out = Vec::new();
                        for c in cands {
                            let (digest, aut) =
                                s.canon_key(cfg, "graph", &graph_text(&c.graph), || {
                                    ColoredGraph::from_ugraph(&c.graph)
                                })?;
                            let orbits: Vec<String> =
                                c.orbit_subset.iter().map(|o| o.to_string()).collect();
                            out.push((c.params, digest, aut, format!("{i}:{}", orbits.join("+"))));
                        }
                        Ok(Ok(out))
                    }
                    Err(Error::Budget(msg)) => Ok(Err(format!("subgroup class {i}: {msg}"))),
                    Err(e) => Err(e.into()),
                }
            })
            .collect()
    });
    let mut report = Report::new(ReportKind::Graphs);
    let mut seen = BTreeSet::new();
    let mut rows: BTreeMap<(u64, u64, u64, u64), ReportRow> = BTreeMap::new();
    for r in found {
        let list = match r? {
            Ok(list) => list,
            Err(w) => {
                report.warnings.push(w);
                continue;
            }
        };
        for (p, digest, aut, prov) in list {
            if !seen.insert(digest) {
                continue;
            }
            let row = rows
                .entry((p.v, p.k, p.lambda, p.mu))
                .or_insert_with(|| ReportRow {
                    parameters: p.to_string(),
                    blocks: None,
                    count: 0,
                    lower_bound: false,
                    aut_orders: Vec::new(),
                    provenance: Vec::new(),
                });
            row.count += 1;
            row.aut_orders.push(aut);
            row.provenance.push(prov);
        }
    }
    let incomplete = !report.warnings.is_empty();
    for mut row in rows.into_values() {
        row.aut_orders = sort_orders(std::mem::take(&mut row.aut_orders));
        row.lower_bound = incomplete;
        report.rows.push(row);
    }
    Ok(report)
}
