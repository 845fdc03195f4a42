//! Experiment orchestration behind the `hcitm` command line: generation,
//! selection runs, Q(q) curves, HCI traces and timing sweeps.
//!
//! Every run draws its randomness from one master seed through
//! [`derive_seed`]. Output files carry the experiment description (JSON
//! directly, CSV as a leading `#` line) and keep wall-clock data in separate
//! `*_timing.csv` files, so reruns reproduce everything else byte for byte.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{generate, GenError, Generated, GeneratorKind, GeneratorSpec};
use crate::hci::{score0, score1, score2};
use crate::hypergraph::{
    giant_component, load_hyperedge_list, write_hyperedge_list, Hypergraph, HypergraphError,
};
use crate::seedsel::{
    hci_tm_select_observed, select, Algorithm, HistoryPoint, RoundEvent, SelectError,
    SelectionConfig, SelectionResult, DEFAULT_ACTIVATION_RATIO, DEFAULT_HCI_ORDER,
};

/// Stream tag for hypergraph generation.
pub const STREAM_GRAPH: u64 = 1;
/// Stream tag for selector randomness.
pub const STREAM_SELECT: u64 = 2;
/// Stream tag for benchmark hypergraphs.
pub const STREAM_BENCH: u64 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

/// Per-run seed: a ChaCha8 generator keyed by `master`, positioned on
/// stream `(tag << 32) | index`, yields its first 64-bit word.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream((tag << 32) | (index & 0xffff_ffff));
    rng.next_u64()
}

/// Where an experiment's hypergraph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum InputSpec {
    /// A fresh random hypergraph per repetition. `edges` defaults to the
    /// family's experiment ratio (0.3 N for ER, 0.5 N otherwise).
    Generator {
        kind: GeneratorKind,
        nodes: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edges: Option<usize>,
        param: f64,
        threshold: f64,
    },
    /// A hyperedge-list file, shared by all repetitions.
    File {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        threshold: Option<f64>,
    },
}

impl InputSpec {
    fn generator_spec(&self, rng_seed: u64) -> Option<GeneratorSpec> {
        match *self {
            InputSpec::Generator {
                kind,
                nodes,
                edges,
                param,
                threshold,
            } => {
                let mut spec =
                    GeneratorSpec::with_default_edges(kind, nodes, param, threshold, rng_seed);
                if let Some(m) = edges {
                    spec.edges = m;
                }
                Some(spec)
            }
            InputSpec::File { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectionSettings {
    pub activation_ratio: f64,
    pub hci_order: usize,
}

impl Default for SelectionSettings {
    fn default() -> Self {
        SelectionSettings {
            activation_ratio: DEFAULT_ACTIVATION_RATIO,
            hci_order: DEFAULT_HCI_ORDER,
        }
    }
}

impl SelectionSettings {
    pub fn config(&self, rng_seed: u64) -> SelectionConfig {
        SelectionConfig {
            activation_ratio: self.activation_ratio,
            hci_order: self.hci_order,
            rng_seed,
        }
    }
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::HciTm]
}

fn default_repetitions() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// One experiment, as read from a TOML config file or assembled from flags.
///
/// ```toml
/// algorithms = ["hcitm", "hhda", "ra"]
/// repetitions = 10
/// master_seed = 42
/// output_dir = "runs/er"
///
/// [input]
/// source = "generator"
/// kind = "er"
/// nodes = 5000
/// param = 3.0
/// threshold = 0.5
///
/// [selection]
/// activation_ratio = 0.9
/// hci_order = 2
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub input: InputSpec,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub selection: SelectionSettings,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Restrict every run to the giant component first.
    #[serde(default = "default_true")]
    pub giant_component: bool,
    /// Not echoed into outputs, so the same experiment written to two
    /// places yields identical files.
    #[serde(default = "default_output", skip_serializing)]
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn new(input: InputSpec, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentSpec {
            input,
            algorithms: default_algorithms(),
            selection: SelectionSettings::default(),
            repetitions: 1,
            master_seed: 0,
            giant_component: true,
            output_dir: output_dir.into(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a config file; a relative input path is taken relative to it.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut spec = Self::from_toml(&text)?;
        if let InputSpec::File { path: input, .. } = &mut spec.input {
            if input.is_relative() {
                if let Some(dir) = path.parent() {
                    *input = dir.join(&*input);
                }
            }
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(HarnessError::Invalid(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Invalid("no algorithms given".into()));
        }
        self.selection.config(0).validate()?;
        Ok(())
    }

    fn echo(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// The hypergraph one repetition runs on.
#[derive(Debug, Clone)]
pub struct PreparedGraph {
    pub graph: Hypergraph,
    pub graph_seed: Option<u64>,
    pub source_nodes: usize,
    pub source_edges: usize,
    pub dropped_edges: usize,
}

pub fn prepare_graph(spec: &ExperimentSpec, repetition: usize) -> Result<PreparedGraph> {
    let (graph, graph_seed, dropped) = match &spec.input {
        InputSpec::File { path, threshold } => {
            let file = File::open(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            (
                load_hyperedge_list(std::io::BufReader::new(file), *threshold)?,
                None,
                0,
            )
        }
        input => {
            let seed = derive_seed(spec.master_seed, STREAM_GRAPH, repetition as u64);
            let g = generate(&input.generator_spec(seed).expect("generator input"))?;
            (g.graph, Some(seed), g.metadata.dropped_edges)
        }
    };
    let (source_nodes, source_edges) = (graph.node_count(), graph.edge_count());
    let graph = if spec.giant_component {
        giant_component(&graph).graph
    } else {
        graph
    };
    Ok(PreparedGraph {
        graph,
        graph_seed,
        source_nodes,
        source_edges,
        dropped_edges: dropped,
    })
}

/// One (algorithm, repetition) run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub repetition: usize,
    pub graph_seed: Option<u64>,
    pub selection_seed: u64,
    pub source_nodes: usize,
    pub source_edges: usize,
    pub dropped_edges: usize,
    pub nodes: usize,
    pub edges: usize,
    /// Seed node labels in selection order.
    pub seeds: Vec<u64>,
    pub seed_count: usize,
    pub q: f64,
    #[serde(rename = "Q")]
    pub activation: f64,
    pub exhausted: bool,
    #[serde(rename = "Q_history")]
    pub history: Vec<HistoryPoint>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub started_unix_ms: u128,
}

impl RunRecord {
    fn new(
        prepared: &PreparedGraph,
        repetition: usize,
        selection_seed: u64,
        result: SelectionResult,
        started: u128,
    ) -> Self {
        let h = &prepared.graph;
        RunRecord {
            algorithm: result.algorithm,
            repetition,
            graph_seed: prepared.graph_seed,
            selection_seed,
            source_nodes: prepared.source_nodes,
            source_edges: prepared.source_edges,
            dropped_edges: prepared.dropped_edges,
            nodes: h.node_count(),
            edges: h.edge_count(),
            seeds: result.seeds.iter().map(|&i| h.label(i)).collect(),
            seed_count: result.seed_count(),
            q: result.q(),
            activation: result.activation(),
            exhausted: result.exhausted,
            history: result.history,
            elapsed: result.elapsed,
            started_unix_ms: started,
        }
    }
}

fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis())
}

fn selection_seed(spec: &ExperimentSpec, repetition: usize) -> u64 {
    derive_seed(spec.master_seed, STREAM_SELECT, repetition as u64)
}

/// Runs every (algorithm, repetition) pair in parallel and returns the
/// records ordered by algorithm (as listed) then repetition.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let graphs: Vec<PreparedGraph> = (0..spec.repetitions)
        .into_par_iter()
        .map(|r| prepare_graph(spec, r))
        .collect::<Result<_>>()?;
    let jobs: Vec<(Algorithm, usize)> = spec
        .algorithms
        .iter()
        .flat_map(|&a| (0..spec.repetitions).map(move |r| (a, r)))
        .collect();
    jobs.into_par_iter()
        .map(|(alg, r)| {
            let seed = selection_seed(spec, r);
            let started = unix_ms();
            let result = select(&graphs[r].graph, alg, &spec.selection.config(seed))?;
            Ok(RunRecord::new(&graphs[r], r, seed, result, started))
        })
        .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let file = File::create(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(BufWriter::new(file))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// CSV writer whose first line is `# <spec json>`.
fn csv_with_spec(path: &Path, echo: &str) -> Result<csv::Writer<BufWriter<File>>> {
    let mut w = create(path)?;
    writeln!(w, "# {echo}").map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(w))
}

fn write_timing(path: &Path, echo: &str, records: &[RunRecord]) -> Result<()> {
    let mut w = csv_with_spec(path, echo)?;
    w.write_record(["algorithm", "repetition", "started_unix_ms", "elapsed_ms"])?;
    for r in records {
        w.write_record([
            r.algorithm.name().to_string(),
            r.repetition.to_string(),
            r.started_unix_ms.to_string(),
            format!("{:.3}", r.elapsed.as_secs_f64() * 1e3),
        ])?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

#[derive(Serialize)]
struct SelectReport<'a> {
    spec: &'a ExperimentSpec,
    master_seed: u64,
    records: &'a [RunRecord],
}

/// Writes the hypergraph file and its JSON sidecar (same stem, `.json`).
pub fn cmd_generate(spec: &GeneratorSpec, path: &Path) -> Result<Generated> {
    let generated = generate(spec)?;
    let echo = serde_json::to_string(spec)?;
    let mut w = create(path)?;
    write_hyperedge_list(&generated.graph, &mut w, &[format!("generator {echo}")])?;
    w.flush().map_err(io_err(path))?;
    let sidecar = path.with_extension("json");
    let mut w = create(&sidecar)?;
    generated.metadata.write_json(&mut w)?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(io_err(&sidecar))?;
    Ok(generated)
}

/// Runs the experiment and writes `select.json` (full records),
/// `select_summary.csv` and `select_timing.csv` into the output directory.
pub fn cmd_select(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    let records = run_experiment(spec)?;
    let dir = &spec.output_dir;
    let echo = spec.echo()?;

    let path = dir.join("select.json");
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(
        &mut w,
        &SelectReport {
            spec,
            master_seed: spec.master_seed,
            records: &records,
        },
    )?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(&path))?;

    let path = dir.join("select_summary.csv");
    let mut w = csv_with_spec(&path, &echo)?;
    w.write_record([
        "algorithm",
        "repetition",
        "nodes",
        "edges",
        "seed_count",
        "q",
        "Q",
        "exhausted",
    ])?;
    for r in &records {
        w.write_record([
            r.algorithm.name().to_string(),
            r.repetition.to_string(),
            r.nodes.to_string(),
            r.edges.to_string(),
            r.seed_count.to_string(),
            r.q.to_string(),
            r.activation.to_string(),
            r.exhausted.to_string(),
        ])?;
    }
    w.flush().map_err(io_err(&path))?;

    write_timing(&dir.join("select_timing.csv"), &echo, &records)?;
    Ok(records)
}

pub fn curve_file_name(algorithm: Algorithm, repetition: usize) -> String {
    format!("curve_{}_{repetition}.csv", algorithm.name())
}

/// Writes one `seed_count,q,Q` activation curve per (algorithm, repetition).
pub fn cmd_curve(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    let records = run_experiment(spec)?;
    let echo = spec.echo()?;
    for r in &records {
        let path = spec
            .output_dir
            .join(curve_file_name(r.algorithm, r.repetition));
        let mut w = csv_with_spec(&path, &echo)?;
        w.write_record(["seed_count", "q", "Q"])?;
        for p in &r.history {
            w.write_record([
                p.seed_count.to_string(),
                p.q.to_string(),
                p.activation.to_string(),
            ])?;
        }
        w.flush().map_err(io_err(&path))?;
    }
    write_timing(&spec.output_dir.join("curve_timing.csv"), &echo, &records)?;
    Ok(records)
}

/// HCI values of one seed at the moment HCI-TM picked it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub index: usize,
    pub node: u64,
    pub hci0: u64,
    pub hci1: u64,
    pub hci2: u64,
}

/// One HCI-TM run of a given order, traced seed by seed.
#[derive(Debug, Clone, PartialEq)]
pub struct HciTrace {
    pub repetition: usize,
    pub order: usize,
    pub rows: Vec<TraceRow>,
}

/// 1-based index of the first maximum of `values`, or 0 if empty.
pub fn peak_index(values: impl IntoIterator<Item = u64>) -> usize {
    let mut best: Option<(u64, usize)> = None;
    for (k, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, k + 1));
        }
    }
    best.map_or(0, |(_, k)| k)
}

impl HciTrace {
    /// Peak position of the trace's own-order column.
    pub fn peak(&self) -> usize {
        peak_index(self.rows.iter().map(|r| match self.order {
            0 => r.hci0,
            1 => r.hci1,
            _ => r.hci2,
        }))
    }
}

pub fn trace_hci_run(h: &Hypergraph, cfg: &SelectionConfig, repetition: usize) -> Result<HciTrace> {
    let mut rows = Vec::new();
    hci_tm_select_observed(h, cfg, |ev| {
        if let RoundEvent::Picked {
            index, node, state, ..
        } = ev
        {
            rows.push(TraceRow {
                index,
                node: h.label(node),
                hci0: score0(h, state, node),
                hci1: score1(h, state, node),
                hci2: score2(h, state, node),
            });
        }
    })?;
    Ok(HciTrace {
        repetition,
        order: cfg.hci_order,
        rows,
    })
}

pub fn trace_file_name(repetition: usize) -> String {
    format!("trace_hci_{repetition}.csv")
}

/// Per repetition, runs HCI-TM at orders 1 and 2 and writes
/// `order,index,node,hci0,hci1,hci2` for every pick of both runs. Returned
/// traces are ordered by repetition, then order.
pub fn cmd_trace_hci(spec: &ExperimentSpec) -> Result<Vec<HciTrace>> {
    spec.validate()?;
    let traces: Vec<HciTrace> = (0..spec.repetitions)
        .into_par_iter()
        .map(|r| {
            let prepared = prepare_graph(spec, r)?;
            let seed = selection_seed(spec, r);
            [1, 2]
                .into_iter()
                .map(|order| {
                    let cfg = SelectionConfig {
                        hci_order: order,
                        ..spec.selection.config(seed)
                    };
                    trace_hci_run(&prepared.graph, &cfg, r)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let echo = spec.echo()?;
    for r in 0..spec.repetitions {
        let path = spec.output_dir.join(trace_file_name(r));
        let mut w = csv_with_spec(&path, &echo)?;
        w.write_record(["order", "index", "node", "hci0", "hci1", "hci2"])?;
        for t in traces.iter().filter(|t| t.repetition == r) {
            for row in &t.rows {
                w.write_record([
                    t.order.to_string(),
                    row.index.to_string(),
                    row.node.to_string(),
                    row.hci0.to_string(),
                    row.hci1.to_string(),
                    row.hci2.to_string(),
                ])?;
            }
        }
        w.flush().map_err(io_err(&path))?;
    }
    Ok(traces)
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

/// Median time per size and the fitted `log10 T` vs `log10 N` slope.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    /// `(N, median seconds)`.
    pub points: Vec<(usize, f64)>,
    pub slope: f64,
}

/// Times `run(size, repetition)` over the sweep, sequentially. `run`
/// returns the duration it wants counted.
pub fn time_sweep<F>(sizes: &[usize], repetitions: usize, mut run: F) -> Result<Scaling>
where
    F: FnMut(usize, usize) -> Result<Duration>,
{
    if sizes.len() < 3 {
        return Err(HarnessError::Invalid(format!(
            "a sweep needs at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    if repetitions == 0 {
        return Err(HarnessError::Invalid(
            "repetitions must be at least 1".into(),
        ));
    }
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let times = (0..repetitions)
            .map(|r| run(n, r).map(|d| d.as_secs_f64()))
            .collect::<Result<Vec<_>>>()?;
        points.push((n, median(times)));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, t)| ((n as f64).log10(), t.max(f64::MIN_POSITIVE).log10()))
        .collect();
    let slope = least_squares_slope(&logs)
        .ok_or_else(|| HarnessError::Invalid("sizes must differ".into()))?;
    Ok(Scaling { points, slope })
}

/// A timing sweep over generated hypergraphs of growing size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub kind: GeneratorKind,
    pub sizes: Vec<usize>,
    pub param: f64,
    pub threshold: f64,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub selection: SelectionSettings,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output", skip_serializing)]
    pub output_dir: PathBuf,
}

/// Non-timing facts of one benchmark run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub nodes: usize,
    pub edges: usize,
    pub repetition: usize,
    pub seed_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub scaling: Vec<(Algorithm, Scaling)>,
}

/// Times each selector on the giant component of a generated hypergraph
/// per size (selection loop only) and fits the log-log slope. Writes
/// `bench.csv` (non-timing), `bench_timing.csv` and `bench_slopes.csv`.
pub fn cmd_bench(spec: &BenchSpec) -> Result<BenchReport> {
    if spec.algorithms.is_empty() {
        return Err(HarnessError::Invalid("no algorithms given".into()));
    }
    let mut rows = Vec::new();
    let mut scaling = Vec::new();
    for &alg in &spec.algorithms {
        let result = time_sweep(&spec.sizes, spec.repetitions, |n, r| {
            let size_index = spec.sizes.iter().position(|&s| s == n).unwrap_or(0) as u64;
            let seed = derive_seed(
                spec.master_seed,
                STREAM_BENCH,
                (size_index << 16) | r as u64,
            );
            let gspec =
                GeneratorSpec::with_default_edges(spec.kind, n, spec.param, spec.threshold, seed);
            let graph = giant_component(&generate(&gspec)?.graph).graph;
            let out = select(&graph, alg, &spec.selection.config(seed))?;
            rows.push(BenchRow {
                algorithm: alg,
                nodes: graph.node_count(),
                edges: graph.edge_count(),
                repetition: r,
                seed_count: out.seed_count(),
            });
            Ok(out.elapsed)
        })?;
        scaling.push((alg, result));
    }

    let echo = serde_json::to_string(spec)?;
    let dir = &spec.output_dir;
    let path = dir.join("bench.csv");
    let mut w = csv_with_spec(&path, &echo)?;
    w.write_record(["algorithm", "N", "M", "repetition", "seed_count"])?;
    for r in &rows {
        w.write_record([
            r.algorithm.name().to_string(),
            r.nodes.to_string(),
            r.edges.to_string(),
            r.repetition.to_string(),
            r.seed_count.to_string(),
        ])?;
    }
    w.flush().map_err(io_err(&path))?;

    let path = dir.join("bench_timing.csv");
    let mut w = csv_with_spec(&path, &echo)?;
    w.write_record(["algorithm", "N", "log10_N", "log10_T", "seconds"])?;
    for (alg, s) in &scaling {
        for &(n, t) in &s.points {
            w.write_record([
                alg.name().to_string(),
                n.to_string(),
                format!("{:.6}", (n as f64).log10()),
                format!("{:.6}", t.log10()),
                format!("{t:.6}"),
            ])?;
        }
    }
    w.flush().map_err(io_err(&path))?;

    let path = dir.join("bench_slopes.csv");
    let mut w = csv_with_spec(&path, &echo)?;
    w.write_record(["algorithm", "slope"])?;
    for (alg, s) in &scaling {
        w.write_record([alg.name().to_string(), format!("{:.4}", s.slope)])?;
    }
    w.flush().map_err(io_err(&path))?;

    Ok(BenchReport { rows, scaling })
}

/// Busy work whose cost does not depend on anything; calibrates
/// [`time_sweep`].
pub fn constant_work(iterations: u64) -> Duration {
    let start = Instant::now();
    let mut x = 0x9e37_79b9_7f4a_7c15u64;
    for i in 0..iterations {
        x = std::hint::black_box(x.rotate_left(7) ^ i).wrapping_mul(0x2545_f491_4f6c_dd1d);
    }
    std::hint::black_box(x);
    start.elapsed()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        assert_eq!(
            derive_seed(42, STREAM_GRAPH, 3),
            derive_seed(42, STREAM_GRAPH, 3)
        );
        let seeds: std::collections::BTreeSet<u64> = (0..100)
            .map(|r| derive_seed(42, STREAM_SELECT, r))
            .collect();
        assert_eq!(seeds.len(), 100);
        assert_ne!(
            derive_seed(42, STREAM_GRAPH, 0),
            derive_seed(42, STREAM_SELECT, 0)
        );
        assert_ne!(
            derive_seed(42, STREAM_GRAPH, 0),
            derive_seed(43, STREAM_GRAPH, 0)
        );
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [1.0f64, 2.0, 3.0]
            .iter()
            .map(|&x| (x, 1.5 * x - 2.0))
            .collect();
        assert!((least_squares_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(least_squares_slope(&[(1.0, 1.0)]), None);
        assert_eq!(least_squares_slope(&[(1.0, 1.0), (1.0, 2.0)]), None);
    }

    #[test]
    fn peak_takes_first_maximum() {
        assert_eq!(peak_index([1, 5, 3, 5]), 2);
        assert_eq!(peak_index([]), 0);
    }

    #[test]
    fn sweep_needs_three_sizes() {
        let err = time_sweep(&[10, 20], 1, |_, _| Ok(Duration::ZERO)).unwrap_err();
        assert!(matches!(err, HarnessError::Invalid(_)));
    }

    #[test]
    fn toml_config_parses_with_defaults() {
        let spec = ExperimentSpec::from_toml(
            r#"
            algorithms = ["hcitm", "hhda", "ra"]
            repetitions = 3
            master_seed = 9

            [input]
            source = "generator"
            kind = "er"
            nodes = 100
            param = 3.0
            threshold = 0.5
            "#,
        )
        .unwrap();
        assert_eq!(
            spec.algorithms,
            vec![Algorithm::HciTm, Algorithm::Hhda, Algorithm::Random]
        );
        assert_eq!(spec.selection, SelectionSettings::default());
        assert!(spec.giant_component);
        assert_eq!(spec.input.generator_spec(1).unwrap().edges, 30);
    }

    #[test]
    fn toml_config_rejects_bad_values() {
        let base = "[input]\nsource = \"file\"\npath = \"x\"\n";
        assert!(matches!(
            ExperimentSpec::from_toml(&format!("algorithms = [\"nope\"]\n{base}")),
            Err(HarnessError::Toml(_))
        ));
        assert!(matches!(
            ExperimentSpec::from_toml(&format!("repetitions = 0\n{base}")),
            Err(HarnessError::Invalid(_))
        ));
    }

    #[test]
    fn experiment_records_cover_cross_product() {
        let input = InputSpec::Generator {
            kind: GeneratorKind::Er,
            nodes: 200,
            edges: None,
            param: 3.0,
            threshold: 0.5,
        };
        let mut spec = ExperimentSpec::new(input, "unused");
        spec.algorithms = vec![Algorithm::Hhd, Algorithm::HciTm];
        spec.repetitions = 3;
        let records = run_experiment(&spec).unwrap();
        let keys: Vec<(Algorithm, usize)> = records
            .iter()
            .map(|r| (r.algorithm, r.repetition))
            .collect();
        assert_eq!(
            keys,
            vec![
                (Algorithm::Hhd, 0),
                (Algorithm::Hhd, 1),
                (Algorithm::Hhd, 2),
                (Algorithm::HciTm, 0),
                (Algorithm::HciTm, 1),
                (Algorithm::HciTm, 2)
            ]
        );
        assert_ne!(records[0].graph_seed, records[1].graph_seed);
        assert_eq!(records[0].graph_seed, records[3].graph_seed);
        for r in &records {
            assert!(r.activation >= 0.9);
            assert!(r
                .history
                .windows(2)
                .all(|w| w[0].activation <= w[1].activation));
        }
    }
}
