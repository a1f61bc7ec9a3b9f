use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use atlas_cli::verify::verify_all;
use atlas_cli::{
    emit_report, run_design_classification, run_srg_search, CliError, CliResult, Format, Report,
    RowFilter, RunConfig, Session,
};
use atlas_core::atlas::atlas_rows;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "atlas",
    version,
    about = "Subgroups, transitive designs and strongly regular graphs of a permutation group"
)]
struct Cli {
    /// TOML run config; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Overrides {
    /// `M11` or a generator file.
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true, value_delimiter = ',')]
    degrees: Option<Vec<u64>>,
    #[arg(long, global = true)]
    t_cap: Option<usize>,
    #[arg(long, global = true)]
    min_t: Option<usize>,
    #[arg(long, global = true)]
    max_suborbits: Option<usize>,
    #[arg(long, global = true)]
    min_omega1_order: Option<u64>,
    #[arg(long, global = true)]
    min_block_size: Option<usize>,
    #[arg(long, global = true)]
    canon_max_vertices: Option<usize>,
    #[arg(long, global = true)]
    canon_max_nodes: Option<u64>,
    #[arg(long, global = true)]
    max_graph_degree: Option<u64>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Row filter such as `k=3` or `t=2,k=6,lambda=20`; repeatable.
    #[arg(long = "row", global = true)]
    rows: Vec<String>,
    /// Output formats; all three when omitted.
    #[arg(long = "format", global = true, value_enum)]
    formats: Vec<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conjugacy classes of subgroups.
    Subgroups,
    /// Transitive actions with their suborbit lengths.
    Actions,
    /// Design sweep and classification for the configured degrees.
    Designs,
    /// Strongly regular orbital graphs.
    Srg,
    /// Diff computed tables against the bundled fixtures.
    Verify,
}

fn build_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let o = &cli.overrides;
    if let Some(x) = &o.group {
        c.group = x.clone();
    }
    if let Some(x) = &o.degrees {
        c.degrees = x.clone();
    }
    if o.t_cap.is_some() {
        c.t_cap = o.t_cap;
    }
    macro_rules! set {
        ($($f:ident),*) => {$(if let Some(x) = o.$f.clone() { c.$f = x; })*};
    }
    set!(
        min_t,
        max_suborbits,
        min_omega1_order,
        min_block_size,
        canon_max_vertices,
        canon_max_nodes,
        max_graph_degree,
        output_dir,
        threads
    );
    if !o.rows.is_empty() {
        c.rows = o
            .rows
            .iter()
            .map(|r| RowFilter::parse(r))
            .collect::<CliResult<_>>()?;
    }
    c.validate()?;
    Ok(c)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Timestamps and counters go to a sidecar so the reports stay byte-stable.
fn write_log(
    session: &Session,
    stem: &str,
    started: Instant,
    report: Option<&Report>,
) -> CliResult<()> {
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut text = format!(
        "finished_unix {now}\nelapsed_ms {}\ncache_hits {}\ncache_misses {}\ncache_discarded {}\n",
        started.elapsed().as_millis(),
        session.cache.hits(),
        session.cache.misses(),
        session.cache.discarded()
    );
    if let Some(r) = report {
        for w in &r.warnings {
            text.push_str(&format!("warning {w}\n"));
        }
    }
    write_file(
        &session.config.output_dir.join(format!("{stem}.log")),
        &text,
    )
}

fn run(cli: Cli) -> CliResult<u8> {
    let started = Instant::now();
    let config = build_config(&cli)?;
    let formats = if cli.overrides.formats.is_empty() {
        vec![Format::Csv, Format::Json, Format::Markdown]
    } else {
        cli.overrides.formats.clone()
    };
    let session = Session::new(config.clone())?;
    let out_dir = config.output_dir.clone();
    match cli.command {
        Command::Subgroups => {
            print!("{}", session.subgroup_table());
            let mut csv = String::from("order,index,multiplicity\n");
            for r in atlas_rows(&session.classes) {
                csv.push_str(&format!("{},{},{}\n", r.order, r.index, r.multiplicity));
            }
            write_file(&out_dir.join("subgroups.csv"), &csv)?;
            write_log(&session, "subgroups", started, None)?;
            Ok(0)
        }
        Command::Actions => {
            println!("| class | degree | subgroup order | transitivity | suborbit lengths |\n|---|---|---|---|---|");
            for (i, d) in session.action_table(config.max_graph_degree)? {
                let lens: Vec<String> = d.suborbit_sizes.iter().map(|x| x.to_string()).collect();
                println!(
                    "| {i} | {} | {} | {} | {} |",
                    d.degree,
                    d.subgroup_order,
                    d.transitivity_degree,
                    lens.join(" ")
                );
            }
            Ok(0)
        }
        Command::Designs | Command::Srg => {
            let (report, stem) = if matches!(cli.command, Command::Designs) {
                (run_design_classification(&session, &config)?, "designs")
            } else {
                (run_srg_search(&session, &config)?, "srg")
            };
            let paths = emit_report(&report, &out_dir, stem, &formats)?;
            print!("{}", atlas_cli::report::to_markdown(&report));
            for p in paths {
                log::info!("wrote {}", p.display());
            }
            write_log(&session, stem, started, Some(&report))?;
            Ok(if report.warnings.is_empty() { 0 } else { 2 })
        }
        Command::Verify => {
            let v = verify_all(&session, &config)?;
            for c in &v.checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            write_log(&session, "verify", started, None)?;
            Ok(v.exit_code())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
