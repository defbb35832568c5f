//! Argument parsing and dispatch for the `pentaks` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use pentaks_core::magical::{tailor_pentagram, tailor_with_symmetric, DEFAULT_EPSILON};
use pentaks_core::golden::REGULAR_SIN_SQ;
use pentaks_core::orthograph::{canonical_ks_subgraph, cabello18, classical_max, induced_pentagons};
use pentaks_core::paradoxes::{
    hardy_construct, maximize_ks_probability, AvGame, HardyParams, HARDY_RESTARTS, HARDY_SEED,
};
use pentaks_core::pentagram3::{build_family, FamilyGrid, PentagramParams};
use pentaks_core::pentagram4::{cabello_pentagon_spectra, SEARCH_BUDGET, SEARCH_SEED};

use crate::error::{AppError, Result};
use crate::formats::{from_value, read_graph, read_json, read_state, GraphJson, PentagramJson, StateVectorJson};
use crate::manifest::RunManifest;
use crate::{parallel, reports};

#[derive(Debug, Parser)]
#[command(name = "pentaks", version, about = "Pentagram operators and Kochen-Specker contextuality")]
pub struct Cli {
    /// Write the result to this file (plus a `.manifest.json` beside it) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Indented JSON with numbers rounded to 6 significant digits.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of a family member or of a pentagram read from a file.
    Spectrum(SpectrumArgs),
    /// Grid scan of the 3D family as CSV, or its extremum as JSON.
    ScanFamily(ScanArgs),
    /// Pentagram tailored to a 3D state.
    Tailor(TailorArgs),
    /// Classical maximum of a graph's 0/1 assignments.
    Color(GraphArg),
    /// Induced pentagons of a graph.
    Pentagons(GraphArg),
    /// Maximum post-selection probability on the Kochen-Specker subgraph.
    KsMax(KsMaxArgs),
    /// Simulated three-box game.
    AvGame(GameArgs),
    /// Hardy's graph, at given parameters or maximized.
    Hardy(HardyArgs),
    /// Four-dimensional pentagram searches.
    Four(FourArgs),
    /// Haar-random scan for states that no pentagon of a graph catches.
    Conjecture(ConjectureArgs),
    /// Checks a graph, state or pentagram file.
    Validate(ValidateArgs),
    /// Prints a built-in graph in the graph JSON format.
    Graph(GraphExportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "pentagram", requires = "b")]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nu: f64,
    /// Pentagram JSON file; replaces the family parameters.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub pentagram: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Points per angle over `[0, pi/2]`.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Points per phase over `[0, 2 pi)`; defaults to `--grid`.
    #[arg(long)]
    pub phase_points: Option<usize>,
    /// Report the smallest overlap sum instead of the table.
    #[arg(long, conflicts_with = "maximize")]
    pub minimize: bool,
    /// Report the largest top eigenvalue instead of the table.
    #[arg(long)]
    pub maximize: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TailorArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Rotate the regular pentagram instead of a nearly degenerate one.
    #[arg(long, conflicts_with = "epsilon")]
    pub regular: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArg {
    pub graph: PathBuf,
    /// Comma-separated node labels or indices to weight; all nodes by default.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<String>>,
}

#[derive(Debug, Args, Serialize)]
pub struct KsMaxArgs {
    /// Restrict the upper pentagon to real vectors.
    #[arg(long)]
    pub real: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GameArgs {
    #[arg(long)]
    pub runs: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct HardyArgs {
    #[arg(long)]
    pub maximize: bool,
    #[arg(long, default_value_t = HARDY_RESTARTS, requires = "maximize")]
    pub restarts: usize,
    #[arg(long, default_value_t = HARDY_SEED, requires = "maximize")]
    pub seed: u64,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "maximize", conflicts_with = "maximize")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "maximize", conflicts_with = "maximize")]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "maximize", conflicts_with = "maximize")]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "maximize", conflicts_with = "maximize")]
    pub chi: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("search").required(true).multiple(false)))]
pub struct FourArgs {
    #[arg(long, group = "search")]
    pub separable_regular: bool,
    #[arg(long, group = "search")]
    pub entangled_regular: bool,
    /// Every induced pentagon of the 18-ray set with its spectrum, as CSV.
    #[arg(long, group = "search")]
    pub cabello_pentagons: bool,
    #[arg(long, default_value_t = SEARCH_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value_t = SEARCH_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConjectureArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    pub file: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinGraph {
    /// The 18 rays in nine bases of four.
    Cabello18,
    /// The realized eight-node Kochen-Specker subgraph.
    Ks,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphExportArgs {
    #[arg(value_enum)]
    pub name: BuiltinGraph,
}

/// JSON text as printed by the binary, newline included.
pub fn render_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let text = if pretty {
        let mut v = serde_json::to_value(value).expect("reports serialize");
        round_numbers(&mut v);
        serde_json::to_string_pretty(&v)
    } else {
        serde_json::to_string(value)
    };
    text.expect("reports serialize") + "\n"
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("checked");
            let r: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
            if let Some(m) = serde_json::Number::from_f64(r) {
                *n = m;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

struct Sink<'a> {
    out: Option<&'a Path>,
    pretty: bool,
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    fn write_text(&mut self, text: &str, manifest: RunManifest) -> Result<()> {
        match self.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| AppError::io(path, e))?;
                manifest.write_beside(path)?;
            }
            None => self.stdout.write_all(text.as_bytes()).map_err(|e| AppError::io("<stdout>", e))?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, value: &T, manifest: RunManifest) -> Result<()> {
        let text = render_json(value, self.pretty);
        self.write_text(&text, manifest)
    }

    /// Rows are streamed; the manifest is written once the table is complete.
    fn csv<F>(&mut self, manifest: RunManifest, fill: F) -> Result<()>
    where
        F: FnOnce(&mut csv::Writer<&mut dyn Write>) -> Result<()>,
    {
        match self.out {
            Some(path) => {
                let file = std::fs::File::create(path).map_err(|e| AppError::io(path, e))?;
                let mut buffered = std::io::BufWriter::new(file);
                {
                    let mut w = csv::Writer::from_writer(&mut buffered as &mut dyn Write);
                    fill(&mut w)?;
                    w.flush().map_err(|e| AppError::io(path, e))?;
                }
                buffered.flush().map_err(|e| AppError::io(path, e))?;
                manifest.write_beside(path)?;
            }
            None => {
                let out: &mut dyn Write = &mut *self.stdout;
                let mut w = csv::Writer::from_writer(out);
                fill(&mut w)?;
                w.flush().map_err(|e| AppError::io("<stdout>", e))?;
            }
        }
        Ok(())
    }
}

fn manifest<T: Serialize>(command: &str, args: &T) -> RunManifest {
    let mut m = RunManifest::new(command);
    if let Ok(Value::Object(map)) = serde_json::to_value(args) {
        for (k, v) in map {
            m = m.param(&k, v);
        }
    }
    m
}

fn weight_set(graph: &pentaks_core::orthograph::OrthogonalityGraph, weights: &Option<Vec<String>>) -> Result<Vec<usize>> {
    let Some(names) = weights else {
        return Ok((0..graph.node_count()).collect());
    };
    names
        .iter()
        .map(|name| {
            let name = name.trim();
            graph
                .labels()
                .iter()
                .position(|l| l == name)
                .or_else(|| name.parse::<usize>().ok().filter(|&i| i < graph.node_count()))
                .ok_or_else(|| AppError::field("weights", format!("`{name}` is not a node label or index")))
        })
        .collect()
}

/// Executes one parsed command line, writing results to `--out` or `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let mut sink = Sink { out: cli.out.as_deref(), pretty: cli.pretty, stdout };
    match &cli.command {
        Command::Spectrum(args) => {
            let m = manifest("spectrum", args);
            let report = match &args.pentagram {
                Some(path) => {
                    let p = read_json::<PentagramJson>(path)?.to_pentagram()?;
                    reports::spectrum_report(None, &p)
                }
                None => {
                    let (a, b) = (args.a.expect("required by clap"), args.b.expect("required by clap"));
                    let params = PentagramParams::new(a, b, args.mu, args.nu)?;
                    reports::spectrum_report(Some(&params), &build_family(&params)?)
                }
            };
            sink.json(&report, m)
        }
        Command::ScanFamily(args) => {
            let m = manifest("scan-family", args);
            let grid = FamilyGrid { angle_points: args.grid, phase_points: args.phase_points.unwrap_or(args.grid) };
            if grid.angle_points < 2 || grid.phase_points < 1 {
                return Err(AppError::field("grid", "needs at least 2 angle points and 1 phase point"));
            }
            let pool = parallel::pool()?;
            if args.maximize {
                let e = parallel::max_eigenvalue_over_family(&pool, grid)?;
                return sink.json(&reports::extremum_report("lambda_max", &e), m);
            }
            if args.minimize {
                let e = parallel::overlap_minimum(&pool, grid)?;
                return sink.json(&reports::extremum_report("A", &e), m);
            }
            sink.csv(m, |w| {
                w.write_record(reports::SCAN_HEADER)?;
                parallel::scan_family(&pool, grid, |s| {
                    w.write_record(reports::scan_record(s).map(|x| x.to_string()))?;
                    Ok(())
                })
            })
        }
        Command::Tailor(args) => {
            let m = manifest("tailor", args);
            let psi = read_state(&args.state)?;
            let t = if args.regular {
                tailor_with_symmetric(&psi, REGULAR_SIN_SQ.sqrt())?
            } else {
                tailor_pentagram(&psi, args.epsilon)?
            };
            sink.json(&reports::tailor_report(&t), m)
        }
        Command::Color(args) => {
            let m = manifest("color", args);
            let graph = read_graph(&args.graph)?;
            let weights = weight_set(&graph, &args.weights)?;
            let result = classical_max(&graph, &weights)?;
            sink.json(&reports::color_report(&graph, &weights, &result), m)
        }
        Command::Pentagons(args) => {
            let m = manifest("pentagons", args);
            let graph = read_graph(&args.graph)?;
            sink.json(&reports::pentagons_report(&graph, &induced_pentagons(&graph)), m)
        }
        Command::KsMax(args) => {
            let m = manifest("ks-max", args);
            sink.json(&reports::ks_max_report(&maximize_ks_probability(args.real)?), m)
        }
        Command::AvGame(args) => {
            let m = manifest("av-game", args).seed(args.seed);
            let stats = parallel::av_game(&parallel::pool()?, &AvGame::canonical(), args.runs, args.seed)?;
            sink.json(&reports::game_report(&stats), m)
        }
        Command::Hardy(args) => {
            let mut m = manifest("hardy", args);
            let report = if args.maximize {
                m = m.seed(args.seed);
                let o = parallel::hardy_maximize(&parallel::pool()?, args.restarts, args.seed)?;
                reports::hardy_report(&hardy_construct(&o.params)?, Some(&o))
            } else {
                let p = HardyParams {
                    alpha: args.alpha.expect("required by clap"),
                    phi: args.phi.expect("required by clap"),
                    beta: args.beta.expect("required by clap"),
                    chi: args.chi.expect("required by clap"),
                };
                reports::hardy_report(&hardy_construct(&p)?, None)
            };
            sink.json(&report, m)
        }
        Command::Four(args) => {
            if args.cabello_pentagons {
                let m = manifest("four", args);
                let graph = cabello18();
                return sink.csv(m, |w| {
                    w.write_record(reports::PENTAGON_CSV_HEADER)?;
                    for (p, s) in cabello_pentagon_spectra() {
                        w.write_record(reports::pentagon_record(&graph, &p, &s))?;
                    }
                    Ok(())
                });
            }
            let m = manifest("four", args).seed(args.seed);
            let pool = parallel::pool()?;
            if args.separable_regular {
                let c = parallel::separable_regular(&pool, args.budget, args.seed)?;
                sink.json(&reports::pentagram4_report(&c, None), m)
            } else {
                let classes = parallel::entangled_regular(&pool, args.budget, args.seed)?;
                let out: Vec<_> = classes.iter().map(|(c, n)| reports::pentagram4_report(c, Some(*n))).collect();
                sink.json(&out, m)
            }
        }
        Command::Conjecture(args) => {
            let m = manifest("conjecture", args).seed(args.seed);
            let graph = read_graph(&args.graph)?;
            let r = parallel::conjecture_scan(&parallel::pool()?, &graph, args.samples, args.seed)?;
            sink.json(&reports::conjecture_report(&r), m)
        }
        Command::Validate(args) => {
            let m = manifest("validate", args);
            let report = validate(&args.file)?;
            sink.json(&report, m)
        }
        Command::Graph(args) => {
            let m = manifest("graph", args);
            let graph = match args.name {
                BuiltinGraph::Cabello18 => cabello18(),
                BuiltinGraph::Ks => canonical_ks_subgraph().graph().clone(),
            };
            sink.json(&GraphJson::from(&graph), m)
        }
    }
}

/// Detects the file kind from its top-level keys and validates it fully.
pub fn validate(path: &Path) -> Result<reports::ValidateReport> {
    let value: Value = read_json(path)?;
    let Value::Object(map) = &value else {
        return Err(AppError::field("(top level)", "expected a JSON object"));
    };
    if map.contains_key("nodes") {
        let g: GraphJson = from_value(path, value)?;
        Ok(reports::validate_graph_report(&g.to_graph()?))
    } else if map.contains_key("vectors") {
        let p: PentagramJson = from_value(path, value)?;
        Ok(reports::validate_pentagram_report(&p.to_pentagram()?))
    } else if map.contains_key("re") {
        let s: StateVectorJson = from_value(path, value)?;
        Ok(reports::validate_state_report(&s.to_state("state")?))
    } else {
        Err(AppError::field("(top level)", "expected `nodes` (graph), `vectors` (pentagram) or `re` (state)"))
    }
}
