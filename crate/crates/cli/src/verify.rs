//! Diff of computed tables against the transcribed fixtures.

use std::collections::BTreeMap;

use atlas_core::atlas::{parse_expected_csv, verify_atlas};
use serde::Deserialize;

use crate::config::{RowFilter, RunConfig};
use crate::error::{CliError, CliResult};
use crate::pipeline::{run_design_classification, run_srg_search, Session};
use crate::report::Report;

pub const SUBGROUPS: &str = include_str!("../fixtures/subgroups.csv");
pub const DESIGNS_SMALL: &str = include_str!("../fixtures/designs_small.csv");
pub const DESIGNS_LARGE: &str = include_str!("../fixtures/designs_large.csv");
pub const GRAPHS: &str = include_str!("../fixtures/graphs.csv");

#[derive(Clone, Debug, Deserialize)]
pub struct DesignFixture {
    pub parameters: String,
    pub blocks: u64,
    pub count: usize,
    pub aut_order: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Exact,
    AtLeast,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SpotFixture {
    pub parameters: String,
    pub count: usize,
    pub bound: Bound,
    pub aut_order: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GraphFixture {
    pub parameters: String,
    pub count: usize,
    pub aut_order: String,
}

fn read_fixture<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> CliResult<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Fixture {
            name: name.into(),
            reason: e.to_string(),
        })
}

pub fn design_fixtures() -> CliResult<Vec<DesignFixture>> {
    read_fixture("designs_small", DESIGNS_SMALL)
}

pub fn spot_fixtures() -> CliResult<Vec<SpotFixture>> {
    read_fixture("designs_large", DESIGNS_LARGE)
}

pub fn graph_fixtures() -> CliResult<Vec<GraphFixture>> {
    read_fixture("graphs", GRAPHS)
}

/// Splits `t-(v,k,lambda)`.
pub fn parse_design_parameters(text: &str) -> CliResult<(usize, u64, usize, u64)> {
    let bad = || CliError::Fixture {
        name: "parameters".into(),
        reason: format!("cannot read {text:?}"),
    };
    let (t, rest) = text.split_once("-(").ok_or_else(bad)?;
    let nums: Vec<u64> = rest
        .trim_end_matches(')')
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    if nums.len() != 3 {
        return Err(bad());
    }
    let t: usize = t.trim().parse().map_err(|_| bad())?;
    Ok((t, nums[0], nums[1] as usize, nums[2]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Verification {
    pub checks: Vec<Check>,
    pub budget_exceeded: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when everything matched, 2 when a cap cut a sweep short, 1 for a
    /// plain mismatch.
    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else if self.budget_exceeded {
            2
        } else {
            1
        }
    }
}

pub fn check_subgroups(s: &Session) -> CliResult<Check> {
    let expected = parse_expected_csv(SUBGROUPS)?;
    let diff = verify_atlas(&s.classes, &expected);
    let passed = s.classes.len() == 39 && diff.mismatches.is_empty();
    Ok(Check {
        name: "subgroup atlas".into(),
        passed,
        detail: format!(
            "{} classes, {} rows, {} mismatched",
            s.classes.len(),
            diff.computed_rows,
            diff.mismatches.len()
        ),
    })
}

/// Compares every row of `report` with the fixtures, both ways.
fn diff_rows(report: &Report, expected: &[(String, Option<u64>, usize, String)]) -> Vec<String> {
    let mut problems = Vec::new();
    let want: BTreeMap<&str, _> = expected.iter().map(|e| (e.0.as_str(), e)).collect();
    for r in &report.rows {
        match want.get(r.parameters.as_str()) {
            None => problems.push(format!("unexpected row {}", r.parameters)),
            Some((_, blocks, count, aut)) => {
                if r.blocks != *blocks
                    || r.count != *count
                    || r.lower_bound
                    || r.aut_orders != [aut.clone()]
                {
                    problems.push(format!(
                        "{}: got blocks {:?} count {} aut {:?}",
                        r.parameters,
                        r.blocks,
                        r.count_text(),
                        r.aut_orders
                    ));
                }
            }
        }
    }
    for e in expected {
        if report.row(&e.0).is_none() {
            problems.push(format!("missing row {}", e.0));
        }
    }
    problems
}

fn summarize(name: &str, rows: usize, problems: Vec<String>) -> Check {
    Check {
        name: name.into(),
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{rows} rows matched")
        } else {
            problems.join("; ")
        },
    }
}

pub fn check_designs(s: &Session, base: &RunConfig, out: &mut Verification) -> CliResult<Check> {
    let cfg = RunConfig {
        degrees: vec![11, 12, 22],
        rows: Vec::new(),
        ..base.clone()
    };
    let report = run_design_classification(s, &cfg)?;
    out.budget_exceeded |= !report.is_exact();
    let expected: Vec<_> = design_fixtures()?
        .into_iter()
        .map(|f| (f.parameters, Some(f.blocks), f.count, f.aut_order))
        .collect();
    Ok(summarize(
        "designs v <= 22",
        report.rows.len(),
        diff_rows(&report, &expected),
    ))
}

/// Targeted sweep for one row of the larger tables.
pub fn check_spot_row(
    s: &Session,
    base: &RunConfig,
    row: &SpotFixture,
    out: &mut Verification,
) -> CliResult<Check> {
    let (t, v, k, lambda) = parse_design_parameters(&row.parameters)?;
    let cfg = RunConfig {
        degrees: vec![v],
        rows: vec![RowFilter {
            t: Some(t),
            k: Some(k),
            lambda: Some(lambda),
        }],
        max_suborbits: 64,
        ..base.clone()
    };
    let report = run_design_classification(s, &cfg)?;
    let got = report.row(&row.parameters);
    let (passed, detail) = match (got, row.bound) {
        (None, _) => (false, "no designs found".to_string()),
        (Some(r), Bound::Exact) => {
            out.budget_exceeded |= r.lower_bound;
            let aut_ok = row
                .aut_order
                .as_ref()
                .is_none_or(|a| r.aut_orders == [a.clone()]);
            (
                r.count == row.count && !r.lower_bound && aut_ok,
                format!(
                    "count {} (want {}), aut {:?}",
                    r.count_text(),
                    row.count,
                    r.aut_orders
                ),
            )
        }
        (Some(r), Bound::AtLeast) => (
            r.count >= row.count,
            format!("count {} (want at least {})", r.count_text(), row.count),
        ),
    };
    Ok(Check {
        name: row.parameters.clone(),
        passed,
        detail,
    })
}

pub fn check_graphs(s: &Session, base: &RunConfig, out: &mut Verification) -> CliResult<Check> {
    let cfg = RunConfig {
        degrees: Vec::new(),
        ..base.clone()
    };
    let report = run_srg_search(s, &cfg)?;
    out.budget_exceeded |= !report.is_exact();
    let expected: Vec<_> = graph_fixtures()?
        .into_iter()
        .map(|f| (f.parameters, None, f.count, f.aut_order))
        .collect();
    Ok(summarize(
        "strongly regular graphs",
        report.rows.len(),
        diff_rows(&report, &expected),
    ))
}

/// Runs every fixture diff.
pub fn verify_all(s: &Session, base: &RunConfig) -> CliResult<Verification> {
    let mut out = Verification::default();
    let c = check_subgroups(s)?;
    out.checks.push(c);
    let c = check_designs(s, base, &mut out)?;
    out.checks.push(c);
    for row in spot_fixtures()? {
        let c = check_spot_row(s, base, &row, &mut out)?;
        out.checks.push(c);
    }
    let c = check_graphs(s, base, &mut out)?;
    out.checks.push(c);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(design_fixtures().unwrap().len(), 19);
        assert_eq!(graph_fixtures().unwrap().len(), 5);
        let spots = spot_fixtures().unwrap();
        assert!(spots.iter().any(|r| r.bound == Bound::AtLeast));
        assert!(spots
            .iter()
            .all(|r| parse_design_parameters(&r.parameters).is_ok()));
        let t1 = parse_expected_csv(SUBGROUPS).unwrap();
        assert_eq!(t1.iter().map(|r| r.multiplicity).sum::<usize>(), 39);
    }

    #[test]
    fn parameter_text() {
        assert_eq!(
            parse_design_parameters("3-(22,7,18)").unwrap(),
            (3, 22, 7, 18)
        );
        assert!(parse_design_parameters("(22,7,18)").is_err());
    }
}
