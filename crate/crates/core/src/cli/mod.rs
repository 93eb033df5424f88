// Copyright 2026 The Compadv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


//! The `compadv` command line.

mod files;
mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::advisor::{tune, AdvisorError, AdvisorOptions, Enumeration, Recommendation, SearchStep, Selection};
use crate::compression::PAGE_SIZE;
use crate::data::{compute_stats, ingest_csv, read_schema_file, value, write_csv, DataError, SyntheticSpec};
use crate::estimate::{
    all_sampled_cost, execute_plan, plan_exact, plan_greedy, AccuracyRequirement, EstimateError, NodeState,
};
use crate::sampling::SampleManager;

pub use files::{ConfigFile, IndexesFile, Pages, TableSource, WorkloadFile};
pub use output::{render, Format, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

/// Where `tune` leaves its result for `report`.
pub const DEFAULT_STATE: &str = ".compadv/last_recommendation.json";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::Infeasible { .. } => CliError::Infeasible(format!(
                "{e}; loosen the requirement (larger tolerance or lower confidence) or add larger fractions to f_grid"
            )),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AdvisorError> for CliError {
    fn from(e: AdvisorError) -> Self {
        match e {
            AdvisorError::Estimate(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "compadv", version, about = "Compression-aware index advisor")]
struct Cli {
    /// Output as line-delimited JSON records or aligned tables.
    #[arg(long, global = true, value_enum, default_value = "jsonl")]
    format: Format,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Sampling seed; overrides the configuration file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy)]
struct Accuracy(f64, f64);

impl std::str::FromStr for Accuracy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (e, q) = s.split_once(',').ok_or_else(|| format!("expected e,q, got '{s}'"))?;
        let e = e.trim().parse().map_err(|_| format!("bad tolerance '{e}'"))?;
        let q = q.trim().parse().map_err(|_| format!("bad confidence '{q}'"))?;
        Ok(Accuracy(e, q))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a CSV file and print its statistics.
    Ingest {
        csv: PathBuf,
        schema: PathBuf,
        /// Also write the statistics as JSON.
        #[arg(long)]
        stats_out: Option<PathBuf>,
    },
    /// Generate a synthetic table from a JSON spec.
    Generate {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the CSV path with a `.schema` extension.
        #[arg(long)]
        schema_out: Option<PathBuf>,
    },
    /// Plan and run compressed size estimation for a list of indexes.
    EstimateSize {
        #[arg(long)]
        indexes: PathBuf,
        #[arg(long = "error-tolerance")]
        error_tolerance: f64,
        #[arg(long)]
        confidence: f64,
        #[arg(long)]
        exact_plan: bool,
    },
    /// Recommend indexes for a workload within a storage budget.
    Tune {
        #[arg(long)]
        workload: PathBuf,
        /// Pages, or bytes with a KB, MB or GB suffix.
        #[arg(long)]
        budget: Pages,
        /// `skyline` or `topk:K`.
        #[arg(long, default_value = "skyline")]
        selection: Selection,
        /// `pure`, `density` or `backtrack`.
        #[arg(long, default_value = "backtrack")]
        enumeration: Enumeration,
        /// Select ignoring compression, then compress.
        #[arg(long)]
        staged: bool,
        /// Size estimation accuracy as `e,q`.
        #[arg(long)]
        accuracy: Option<Accuracy>,
        /// Where to keep the result for `report`.
        #[arg(long, default_value = DEFAULT_STATE)]
        save: PathBuf,
    },
    /// Print the last saved recommendation again.
    Report {
        #[arg(long, default_value = DEFAULT_STATE)]
        input: PathBuf,
    },
}

/// Runs the command line with the process's standard streams.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run_cli_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let config: ConfigFile = match &cli.config {
        Some(p) => files::read_json(p)?,
        None => ConfigFile::default(),
    };
    config.validate()?;
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    let records = match cli.command {
        Command::Ingest { csv, schema, stats_out } => ingest(&csv, &schema, stats_out.as_deref())?,
        Command::Generate { spec, out: csv, schema_out } => generate(&spec, &csv, schema_out)?,
        Command::EstimateSize {
            indexes,
            error_tolerance,
            confidence,
            exact_plan,
        } => {
            let req = AccuracyRequirement::new(error_tolerance, confidence).map_err(|e| CliError::Input(e.to_string()))?;
            estimate_size(&indexes, req, exact_plan, &config, seed)?
        }
        Command::Tune {
            workload,
            budget,
            selection,
            enumeration,
            staged,
            accuracy,
            save,
        } => {
            let file: WorkloadFile = files::read_json(&workload)?;
            let loaded = files::load_tables(&file.tables, &base_dir(&workload), config.error_model)?;
            let mut opts = AdvisorOptions::new(budget.0);
            opts.selection = selection;
            opts.enumeration = enumeration;
            opts.staged = staged;
            if let Some(Accuracy(e, q)) = accuracy {
                opts.accuracy = AccuracyRequirement::new(e, q).map_err(|e| CliError::Input(e.to_string()))?;
            }
            opts.seed = seed;
            opts.candidates = file.candidates.clone();
            opts.pinned = file.pinned_sizes();
            opts.f_grid = config.f_grid();
            opts.params = config.cost.clone();
            let rec = tune(&file.statements, &loaded.tables, &loaded.ctx, &opts)?;
            if let Some(dir) = save.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(&save, serde_json::to_string_pretty(&rec).expect("serializable"))?;
            recommendation_records(&rec)
        }
        Command::Report { input } => {
            let rec: Recommendation = files::read_json(&input)?;
            recommendation_records(&rec)
        }
    };
    render(&records, cli.format, out)?;
    Ok(())
}

fn ingest(csv: &Path, schema: &Path, stats_out: Option<&Path>) -> Result<Vec<Record>, CliError> {
    let cols = read_schema_file(schema)?;
    let table = ingest_csv(csv, &cols)?;
    let stats = compute_stats(&table, &[])?;
    if let Some(p) = stats_out {
        fs::write(p, serde_json::to_string_pretty(&stats).expect("serializable"))?;
    }
    let mut recs = vec![Record::new("table")
        .field("table", table.name())
        .field("rows", table.rows())
        .field("columns", table.columns().len())
        .field("row_width", table.row_width())];
    for c in table.columns() {
        let s = stats.column(&c.name)?;
        recs.push(
            Record::new("column")
                .field("column", &c.name)
                .field("type", c.ty.to_string())
                .field("distinct", s.distinct_count)
                .field("null_fraction", s.null_fraction)
                .field("min", value::render(c.ty, &s.min))
                .field("max", value::render(c.ty, &s.max)),
        );
    }
    Ok(recs)
}

fn generate(spec: &Path, csv: &Path, schema_out: Option<PathBuf>) -> Result<Vec<Record>, CliError> {
    let spec: SyntheticSpec = files::read_json(spec)?;
    let table = crate::data::generate_synthetic(&spec)?;
    let file = fs::File::create(csv)?;
    write_csv(&table, std::io::BufWriter::new(file))?;
    let schema_path = schema_out.unwrap_or_else(|| csv.with_extension("schema"));
    let schema: String = table
        .columns()
        .iter()
        .map(|c| format!("{}:{}\n", c.name, c.ty))
        .collect();
    fs::write(&schema_path, schema)?;
    Ok(vec![Record::new("generated")
        .field("table", table.name())
        .field("rows", table.rows())
        .field("csv", csv.display().to_string())
        .field("schema", schema_path.display().to_string())])
}

fn estimate_size(
    path: &Path,
    req: AccuracyRequirement,
    exact: bool,
    config: &ConfigFile,
    seed: u64,
) -> Result<Vec<Record>, CliError> {
    let file: IndexesFile = files::read_json(path)?;
    let loaded = files::load_tables(&file.tables, &base_dir(path), config.error_model)?;
    let grid = config.f_grid();
    let plan = if exact {
        plan_exact(&file.indexes, &[], req, &grid, &loaded.ctx)?
    } else {
        plan_greedy(&file.indexes, &[], req, &grid, &loaded.ctx)?
    };
    let mut samples = SampleManager::new(seed);
    for t in &loaded.tables {
        samples.add_table(t.clone());
    }
    let estimates = execute_plan(&plan, &samples, &loaded.ctx)?;
    let baseline = all_sampled_cost(&file.indexes, &[], plan.f, &loaded.ctx)?;
    let mut recs = vec![Record::new("plan")
        .field("planner", if exact { "exact" } else { "greedy" })
        .field("f", plan.f)
        .field("e", req.e)
        .field("q", req.q)
        .field("total_cost", plan.total_cost)
        .field("all_sampled_cost", baseline)];
    let nodes = plan.nodes();
    for def in &file.indexes {
        let Some(i) = plan.graph.find(def) else { continue };
        let id = &plan.graph.nodes[i].id;
        let Some(node) = nodes.iter().find(|n| &n.index == id) else { continue };
        let est = estimates.get(id);
        let state = match node.state {
            NodeState::None => "NONE",
            NodeState::Exact => "EXACT",
            NodeState::Sampled => "SAMPLED",
            NodeState::Deduced(_) => "DEDUCED",
        };
        recs.push(
            Record::new("estimate")
                .field("index", def.id())
                .field("state", state)
                .field("deduction", node.deduction)
                .field("inputs", node.inputs.join("; "))
                .field("pages", est.map(|e| e.pages))
                .field("uncompressed_pages", est.map(|e| e.uncompressed_pages))
                .field("cf", est.map(|e| e.cf))
                .field("err_mean", node.err_mean)
                .field("err_stddev", node.err_var.sqrt())
                .field("prob_within", node.prob_within)
                .field("low_confidence", est.is_some_and(|e| e.low_confidence)),
        );
    }
    Ok(recs)
}

fn recommendation_records(rec: &Recommendation) -> Vec<Record> {
    let mut recs = vec![Record::new("recommendation")
        .field("staged", rec.staged)
        .field("budget_pages", rec.budget_pages)
        .field("budget_bytes", rec.budget_pages * PAGE_SIZE as f64)
        .field("total_pages", rec.total_pages)
        .field("cost_before", rec.cost_before)
        .field("cost_after", rec.cost_after)
        .field("improvement", rec.improvement)
        .field("candidates", rec.candidates)
        .field("sample_fraction", rec.estimation.as_ref().map(|e| e.f))
        .field("estimation_cost", rec.estimation.as_ref().map(|e| e.cost))];
    for ix in rec.configuration.indexes() {
        let e = &ix.estimate;
        let provenance = match &e.provenance {
            crate::estimate::Provenance::Exact => "EXACT".to_string(),
            crate::estimate::Provenance::Sampled { f } => format!("SAMPLED f={f}"),
            crate::estimate::Provenance::Deduced { method, .. } => format!("DEDUCED {method:?}"),
        };
        recs.push(
            Record::new("index")
                .field("index", ix.def.id())
                .field("method", ix.def.method.name())
                .field("pages", e.pages)
                .field("uncompressed_pages", e.uncompressed_pages)
                .field("cf", e.cf)
                .field("err_mean", e.err_mean)
                .field("err_stddev", e.stddev())
                .field("provenance", provenance),
        );
    }
    for (n, step) in rec.trace.iter().enumerate() {
        let r = Record::new("step").field("n", n + 1);
        recs.push(match step {
            SearchStep::Add { index, benefit, score, cost } => r
                .field("action", "add")
                .field("index", index)
                .field("detail", format!("benefit={benefit} score={score}"))
                .field("cost", cost),
            SearchStep::Backtrack { wanted, replaced, cost } => r
                .field("action", "backtrack")
                .field("index", wanted)
                .field(
                    "detail",
                    replaced
                        .iter()
                        .map(|(a, b)| format!("{a} -> {b}"))
                        .collect::<Vec<_>>()
                        .join("; "),
                )
                .field("cost", cost),
            SearchStep::Compress { from, to, cost } => r
                .field("action", "compress")
                .field("index", to)
                .field("detail", format!("from {from}"))
                .field("cost", cost),
        });
    }
    recs
}
