use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Restricts the classification to rows with these parameters. Unset
/// fields match anything.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowFilter {
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub lambda: Option<u64>,
}

impl RowFilter {
    pub fn matches(&self, t: usize, k: usize, lambda: u64) -> bool {
        self.t.is_none_or(|x| x == t)
            && self.k.is_none_or(|x| x == k)
            && self.lambda.is_none_or(|x| x == lambda)
    }

    /// Parses shorthand such as `k=3` or `t=2,k=6,lambda=20`.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut f = RowFilter::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("row filter {part:?} needs key=value")))?;
            let bad = || CliError::Config(format!("row filter {part:?}: bad number"));
            match key.trim() {
                "t" => f.t = Some(value.trim().parse().map_err(|_| bad())?),
                "k" => f.k = Some(value.trim().parse().map_err(|_| bad())?),
                "lambda" => f.lambda = Some(value.trim().parse().map_err(|_| bad())?),
                other => {
                    return Err(CliError::Config(format!(
                        "unknown row filter key {other:?}"
                    )))
                }
            }
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `"M11"` for the embedded generators, otherwise a generator file.
    pub group: String,
    /// Degrees of the point actions to work on; for the graph search an
    /// empty list means every transitive action up to `max_graph_degree`.
    pub degrees: Vec<u64>,
    /// Largest t tried when computing design strength. Unset picks a cap
    /// from the number of points.
    pub t_cap: Option<usize>,
    /// Smallest strength kept in a table.
    pub min_t: usize,
    /// Largest number of suborbits a sweep enumerates subsets of.
    pub max_suborbits: usize,
    /// Point-stabilizer actions whose subgroup is smaller than this are not
    /// swept for blocks.
    pub min_omega1_order: u64,
    /// Smallest block size kept; the largest is half the points, larger
    /// blocks give complements.
    pub min_block_size: usize,
    pub canon_max_vertices: usize,
    pub canon_max_nodes: u64,
    pub max_graph_degree: u64,
    pub output_dir: PathBuf,
    pub threads: usize,
    pub rows: Vec<RowFilter>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "M11".into(),
            degrees: Vec::new(),
            t_cap: None,
            min_t: 2,
            max_suborbits: 24,
            min_omega1_order: 1,
            min_block_size: 3,
            canon_max_vertices: 10_000,
            canon_max_nodes: 5_000_000,
            max_graph_degree: 450,
            output_dir: PathBuf::from("atlas-out"),
            threads: 1,
            rows: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks the caps; degrees are checked against the group later.
    pub fn validate(&self) -> CliResult<()> {
        let caps = [
            ("max_suborbits", self.max_suborbits as u64),
            ("min_t", self.min_t as u64),
            ("min_omega1_order", self.min_omega1_order),
            ("min_block_size", self.min_block_size as u64),
            ("canon_max_vertices", self.canon_max_vertices as u64),
            ("canon_max_nodes", self.canon_max_nodes),
            ("max_graph_degree", self.max_graph_degree),
            ("threads", self.threads as u64),
        ];
        for (name, value) in caps {
            if value == 0 {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        if self.max_suborbits > 64 {
            return Err(CliError::Config("max_suborbits is at most 64".into()));
        }
        if let Some(0) = self.t_cap {
            return Err(CliError::Config("t_cap must be positive".into()));
        }
        Ok(())
    }

    pub fn group_path(&self) -> Option<&Path> {
        (!self.group.eq_ignore_ascii_case("m11")).then(|| Path::new(self.group.as_str()))
    }

    pub fn canon_options(&self) -> atlas_core::canon::CanonOptions {
        atlas_core::canon::CanonOptions {
            max_vertices: self.canon_max_vertices,
            max_nodes: self.canon_max_nodes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig {
            degrees: vec![11, 12, 22],
            ..RunConfig::default()
        };
        c.rows.push(RowFilter {
            t: Some(2),
            k: Some(6),
            lambda: None,
        });
        let back = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("degreez = [11]").is_err());
    }

    #[test]
    fn zero_caps_rejected() {
        let c = RunConfig {
            max_suborbits: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn row_filter_shorthand() {
        let f = RowFilter::parse("k=3").unwrap();
        assert!(f.matches(2, 3, 4) && !f.matches(2, 4, 4));
        let f = RowFilter::parse("t=2, k=6, lambda=20").unwrap();
        assert_eq!(
            f,
            RowFilter {
                t: Some(2),
                k: Some(6),
                lambda: Some(20)
            }
        );
        assert!(RowFilter::parse("q=1").is_err());
    }

    #[test]
    fn group_source() {
        assert_eq!(RunConfig::default().group_path(), None);
        let c = RunConfig {
            group: "gens.txt".into(),
            ..RunConfig::default()
        };
        assert_eq!(c.group_path(), Some(Path::new("gens.txt")));
    }
}
