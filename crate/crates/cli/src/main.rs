//! `hcitm`: generate hypergraphs, select seeds and run experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hcitm::gen::{GeneratorKind, GeneratorSpec};
use hcitm::harness::{
    cmd_bench, cmd_curve, cmd_generate, cmd_select, cmd_trace_hci, BenchSpec, ExperimentSpec,
    InputSpec, SelectionSettings,
};
use hcitm::seedsel::{Algorithm, DEFAULT_ACTIVATION_RATIO, DEFAULT_HCI_ORDER};

#[derive(Parser)]
#[command(
    name = "hcitm",
    version,
    about = "Threshold-model seed selection on hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random hypergraph and its JSON sidecar.
    Generate(GenerateArgs),
    /// Run selectors and write per-run records.
    Select(ExperimentArgs),
    /// Write the Q(q) activation curve of each run.
    Curve(ExperimentArgs),
    /// Trace HCI values of the seeds picked by HCI-TM at orders 1 and 2.
    TraceHci(ExperimentArgs),
    /// Time selectors over a sweep of sizes and fit the log-log slope.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: GeneratorKind,
    #[arg(long)]
    nodes: usize,
    /// Defaults to 0.3 N for ER and 0.5 N otherwise.
    #[arg(long)]
    edges: Option<usize>,
    /// Mean hyperdegree (er), power-law exponent (sf) or edge size (kuf).
    #[arg(long)]
    param: f64,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hyperedge-list output; the sidecar goes next to it as `.json`.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment file; flags given alongside override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Hyperedge-list file to read.
    #[arg(long, conflicts_with = "generator")]
    input: Option<PathBuf>,
    /// Threshold for files without a `%threshold` line, or for generation.
    #[arg(long)]
    threshold: Option<f64>,
    /// Generate a fresh hypergraph per repetition instead of reading one.
    #[arg(long = "generator", value_parser = parse_kind)]
    generator: Option<GeneratorKind>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long)]
    param: Option<f64>,
    /// Comma-separated: hcitm, hhd, hhda, np, npa, pagerank, ra.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algorithms: Option<Vec<Algorithm>>,
    /// Target active fraction.
    #[arg(long)]
    ratio: Option<f64>,
    /// HCI order for HCI-TM.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Master seed all run seeds derive from.
    #[arg(long)]
    seed: Option<u64>,
    /// Keep the whole hypergraph instead of its giant component.
    #[arg(long)]
    no_giant: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_kind, default_value = "er")]
    kind: GeneratorKind,
    /// Comma-separated node counts (at least three).
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3.0)]
    param: f64,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "hcitm")]
    algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = DEFAULT_ACTIVATION_RATIO)]
    ratio: f64,
    #[arg(long, default_value_t = DEFAULT_HCI_ORDER)]
    order: usize,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
}

fn parse_kind(s: &str) -> Result<GeneratorKind, String> {
    s.parse()
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
        .map_err(|e: hcitm::seedsel::SelectError| e.to_string())
}

impl ExperimentArgs {
    fn into_spec(self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_file(path)
                .with_context(|| format!("reading {}", path.display()))?,
            None => {
                let input = self.input_spec(None)?;
                ExperimentSpec::new(input, "out")
            }
        };
        if self.config.is_some() && (self.input.is_some() || self.generator.is_some()) {
            spec.input = self.input_spec(Some(&spec.input))?;
        }
        if let Some(a) = self.algorithms {
            spec.algorithms = a;
        }
        if let Some(r) = self.ratio {
            spec.selection.activation_ratio = r;
        }
        if let Some(o) = self.order {
            spec.selection.hci_order = o;
        }
        if let Some(r) = self.repetitions {
            spec.repetitions = r;
        }
        if let Some(s) = self.seed {
            spec.master_seed = s;
        }
        if self.no_giant {
            spec.giant_component = false;
        }
        if let Some(out) = self.out {
            spec.output_dir = out;
        }
        spec.validate()?;
        Ok(spec)
    }

    fn input_spec(&self, base: Option<&InputSpec>) -> Result<InputSpec> {
        if let Some(path) = &self.input {
            return Ok(InputSpec::File {
                path: path.clone(),
                threshold: self.threshold,
            });
        }
        let Some(kind) = self.generator else {
            return base
                .cloned()
                .context("give --input FILE, --generator KIND or --config FILE");
        };
        Ok(InputSpec::Generator {
            kind,
            nodes: self.nodes.context("--generator needs --nodes")?,
            edges: self.edges,
            param: self.param.context("--generator needs --param")?,
            threshold: self.threshold.unwrap_or(0.5),
        })
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let mut spec =
                GeneratorSpec::with_default_edges(a.kind, a.nodes, a.param, a.threshold, a.seed);
            if let Some(m) = a.edges {
                spec.edges = m;
            }
            let g = cmd_generate(&spec, &a.out)?;
            println!(
                "wrote {} ({} nodes, {} hyperedges, {} dropped)",
                a.out.display(),
                g.metadata.realized_nodes,
                g.metadata.realized_edges,
                g.metadata.dropped_edges
            );
        }
        Command::Select(a) => {
            let spec = a.into_spec()?;
            for r in cmd_select(&spec)? {
                println!(
                    "{:<8} rep {:<3} seeds {:<6} q {:.5} Q {:.5}{}",
                    r.algorithm.name(),
                    r.repetition,
                    r.seed_count,
                    r.q,
                    r.activation,
                    if r.exhausted { " (exhausted)" } else { "" }
                );
            }
            println!("results in {}", spec.output_dir.display());
        }
        Command::Curve(a) => {
            let spec = a.into_spec()?;
            let records = cmd_curve(&spec)?;
            println!("{} curves in {}", records.len(), spec.output_dir.display());
        }
        Command::TraceHci(a) => {
            let spec = a.into_spec()?;
            for t in cmd_trace_hci(&spec)? {
                println!(
                    "rep {:<3} order {} seeds {:<6} peak at {}",
                    t.repetition,
                    t.order,
                    t.rows.len(),
                    t.peak()
                );
            }
            println!("traces in {}", spec.output_dir.display());
        }
        Command::Bench(a) => {
            let spec = BenchSpec {
                kind: a.kind,
                sizes: a.sizes,
                param: a.param,
                threshold: a.threshold,
                algorithms: a.algorithms,
                selection: SelectionSettings {
                    activation_ratio: a.ratio,
                    hci_order: a.order,
                },
                repetitions: a.repetitions,
                master_seed: a.seed,
                output_dir: a.out,
            };
            let report = cmd_bench(&spec)?;
            for (alg, s) in &report.scaling {
                println!("{:<8} slope {:.3}", alg.name(), s.slope);
            }
            println!("results in {}", spec.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
