//! `spillover` — command-line front end.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a computation is
//! out of reach (oracle caps, infeasible programs). Failures are reported
//! as one JSON object on standard error.

mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use spillover::families::classify;
use spillover::network::NetworkFile;
use spillover::{
    anchored_optimal, center_align, center_collapse, circle_block, dominating_pairs, empty_optimal, evaluate,
    example2_experiment, exhaustive_optimal, extend, extend_pairs_to_circle, make_family, parse_rational,
    public_optimal, render, replicate_to_empty, sweep_values, symmetry_merge, Construction, Experiment, FamilySpec,
    Instance, Network, OracleOptions, StellarShape, SweepOptions, SweepReport,
};

/// Environment variable overriding the anchored oracle's class cap.
const CAP_ENV: &str = "PERSUASION_CAP";

#[derive(Parser, Debug)]
#[command(name = "spillover", version, about = "Exact Bayesian persuasion on networks with information spillovers")]
struct Cli {
    /// Write the primary output to this file instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or recognise network families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Evaluate an experiment on a network.
    Eval {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        experiment: PathBuf,
        /// Print only the value.
        #[arg(long)]
        value: bool,
    },
    /// List information-dominating pairs as `i>j` (1-based).
    Dominate {
        #[arg(long)]
        network: PathBuf,
    },
    /// Write one of the canonical optimal experiments.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[command(flatten)]
        inst: OptionalInstanceArgs,
    },
    /// Value-preserving experiment transformations.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Add links that remove every dominating pair.
    Extend {
        /// pairs-to-circle, stellar, halo, constellation, galaxy or clusters.
        construction: String,
        #[command(flatten)]
        inst: InstanceArgs,
        /// Index of the component the construction works on.
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Exact small-instance optimum with a witness experiment.
    Oracle {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Mode::Anchored)]
        mode: Mode,
        /// Largest number of receiver classes (anchored mode).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Best known values along a chain of extensions, as CSV.
    Sweep {
        #[arg(long, num_args = 1.., required = true)]
        chain: Vec<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        prior: String,
        #[arg(long)]
        allow_boundary: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Reproduce a worked example end to end.
    Repro {
        #[arg(value_enum)]
        which: Repro,
    },
    /// Run randomized invariant checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Write a member of a family as network JSON.
    Make {
        #[arg(value_enum)]
        kind: FamilyKind,
        #[arg(long)]
        n: Option<usize>,
        /// Disjoint pairs, e.g. `0-1,2-3`.
        #[arg(long)]
        pairs: Option<String>,
        /// Stellar shape, e.g. `(()(()()))`.
        #[arg(long)]
        shape: Option<String>,
        /// Number of constellation centers.
        #[arg(long)]
        centers: Option<usize>,
        /// Galaxy component sizes, e.g. `3,4`.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Recognise the family of a network.
    Check {
        #[arg(long)]
        network: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum TransformCommand {
    /// Merge the messages of two receivers with equal closed neighbourhoods.
    Merge {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        experiment: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Re-encode windows so the experiment works without links.
    Replicate {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        experiment: PathBuf,
    },
    /// Give a star center the composite of its leaves' messages.
    CenterCollapse(StarArgs),
    /// Switch a star center to x wherever its leaves all see x.
    CenterAlign(StarArgs),
}

#[derive(Args, Debug)]
struct StarArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    #[arg(long)]
    experiment: PathBuf,
    #[arg(long, default_value_t = 0)]
    component: usize,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    k: usize,
    /// Prior probability of state X, as `a/b`.
    #[arg(long)]
    prior: String,
    /// Accept the boundary prior k/(n+k).
    #[arg(long)]
    allow_boundary: bool,
}

#[derive(Args, Debug)]
struct OptionalInstanceArgs {
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    prior: Option<String>,
    #[arg(long)]
    allow_boundary: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyKind {
    Empty,
    Pairs,
    Circle,
    Star,
    Stellar,
    Halo,
    Constellation,
    Galaxy,
    Clusters,
    Complete,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConstructKind {
    EmptyOpt,
    PublicOpt,
    CircleBlock,
    Example2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Anchored,
    Exhaustive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Repro {
    Figure1,
    Example2,
}

#[derive(Debug)]
enum CliError {
    Lib(spillover::Error),
    Io { path: PathBuf, message: String },
    Usage(String),
    Selftest(String),
}

impl From<spillover::Error> for CliError {
    fn from(e: spillover::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_capacity() => 3,
            _ => 2,
        }
    }

    fn diagnostic(&self) -> serde_json::Value {
        let (kind, message) = match self {
            CliError::Lib(e) => {
                let debug = format!("{e:?}");
                let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
                (kind, e.to_string())
            }
            CliError::Io { path, message } => ("Io".to_string(), format!("{}: {message}", path.display())),
            CliError::Usage(m) => ("Usage".to_string(), m.clone()),
            CliError::Selftest(m) => ("SelftestFailed".to_string(), m.clone()),
        };
        json!({ "error": kind, "message": message, "exit_code": self.exit_code() })
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })
}

fn read_network(path: &Path) -> CliResult<Network> {
    Ok(Network::from_json(&read(path)?)?)
}

fn read_experiment(path: &Path) -> CliResult<Experiment> {
    Ok(Experiment::from_json(&read(path)?)?)
}

fn instance(args: &InstanceArgs) -> CliResult<Instance> {
    let g = read_network(&args.network)?;
    Ok(Instance::new(g, parse_rational(&args.prior)?, args.k, args.allow_boundary)?)
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn oracle_options(cap: Option<usize>) -> CliResult<OracleOptions> {
    let mut options = OracleOptions::default();
    if let Ok(text) = std::env::var(CAP_ENV) {
        options.cap = text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{CAP_ENV} must be a non-negative integer, got {text:?}")))?;
    }
    if let Some(cap) = cap {
        options.cap = cap;
    }
    Ok(options)
}

fn parse_pairs(text: &str) -> CliResult<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once('-')
                .ok_or_else(|| CliError::Usage(format!("pair {p:?} is not of the form a-b")))?;
            let num = |s: &str| s.trim().parse().map_err(|_| CliError::Usage(format!("bad receiver index {s:?}")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

#[allow(clippy::too_many_arguments)]
fn family_spec(
    kind: FamilyKind,
    n: Option<usize>,
    pairs: Option<String>,
    shape: Option<String>,
    centers: Option<usize>,
    sizes: Vec<usize>,
    q: Option<usize>,
    p: Option<usize>,
) -> CliResult<FamilySpec> {
    let parse_shape = |s: Option<String>| -> CliResult<StellarShape> { Ok(StellarShape::parse(&require(s, "shape")?)?) };
    Ok(match kind {
        FamilyKind::Empty => FamilySpec::Empty { n: require(n, "n")? },
        FamilyKind::Pairs => FamilySpec::Pairs { n: require(n, "n")?, pairs: parse_pairs(&require(pairs, "pairs")?)? },
        FamilyKind::Circle => FamilySpec::Circle { n: require(n, "n")? },
        FamilyKind::Star => FamilySpec::Star { n: require(n, "n")? },
        FamilyKind::Stellar => FamilySpec::Stellar { shape: parse_shape(shape)? },
        FamilyKind::Halo => FamilySpec::Halo { n: require(n, "n")? },
        FamilyKind::Constellation => {
            FamilySpec::Constellation { centers: require(centers, "centers")?, shape: parse_shape(shape)? }
        }
        FamilyKind::Galaxy if sizes.is_empty() => return Err(CliError::Usage("missing --sizes".into())),
        FamilyKind::Galaxy => FamilySpec::Galaxy { sizes },
        FamilyKind::Clusters => FamilySpec::Clusters { q: require(q, "q")?, p: require(p, "p")? },
        FamilyKind::Complete => FamilySpec::Complete { n: require(n, "n")? },
    })
}

fn figure1_chain() -> CliResult<Vec<Network>> {
    let pairs = make_family(&FamilySpec::Pairs { n: 9, pairs: vec![(0, 1), (2, 3), (4, 5), (6, 8)] })?;
    let circle = extend_pairs_to_circle(&pairs)?.extended;
    Ok(vec![make_family(&FamilySpec::Empty { n: 9 })?, pairs, circle, make_family(&FamilySpec::Complete { n: 9 })?])
}

fn sweep_csv(report: &SweepReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(["label", "edge_count", "value_lower", "value_upper", "certified", "source"]).map_err(io)?;
    for r in &report.records {
        let label = serde_json::to_value(&r.label).expect("label serializes");
        let label = label["kind"].as_str().unwrap_or("other").to_string();
        w.write_record([
            label,
            r.edge_count.to_string(),
            render(&r.value_lower),
            render(&r.value_upper),
            r.certified.to_string(),
            r.source.as_str().to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv is UTF-8"))
}

fn run(cli: Cli) -> CliResult<String> {
    Ok(match cli.command {
        Command::Family(FamilyCommand::Make { kind, n, pairs, shape, centers, sizes, q, p }) => {
            let g = make_family(&family_spec(kind, n, pairs, shape, centers, sizes, q, p)?)?;
            let label = classify(&g);
            pretty(&g.to_file(Some(label)))
        }
        Command::Family(FamilyCommand::Check { network }) => {
            let file: NetworkFile = serde_json::from_str(&read(&network)?)
                .map_err(|e| spillover::Error::Parse(format!("network JSON: {e}")))?;
            let declared = file.family.clone();
            let label = classify(&file.into_network()?);
            let matches = declared.as_ref().map(|d| *d == label);
            pretty(&json!({ "family": label, "declared": declared, "declared_matches": matches }))
        }
        Command::Eval { inst, experiment, value } => {
            let inst = instance(&inst)?;
            let report = evaluate(&read_experiment(&experiment)?, &inst)?;
            if value {
                format!("{}\n", render(&report.value))
            } else {
                pretty(&report)
            }
        }
        Command::Dominate { network } => {
            let report = dominating_pairs(&read_network(&network)?);
            let mut out: String = report.pairs.iter().map(|(i, j)| format!("{}>{}\n", i + 1, j + 1)).collect();
            out.push_str(&format!("count: {}\n", report.count));
            out
        }
        Command::Construct { kind, inst } => {
            let canonical = if let ConstructKind::Example2 = kind {
                example2_experiment()?.canonical
            } else {
                let inst = Instance::new(
                    read_network(&require(inst.network, "network")?)?,
                    parse_rational(&require(inst.prior, "prior")?)?,
                    require(inst.k, "k")?,
                    inst.allow_boundary,
                )?;
                match kind {
                    ConstructKind::EmptyOpt => empty_optimal(&inst)?,
                    ConstructKind::PublicOpt => public_optimal(&inst)?,
                    ConstructKind::CircleBlock => circle_block(&inst)?,
                    ConstructKind::Example2 => unreachable!(),
                }
            };
            canonical.experiment.to_json() + "\n"
        }
        Command::Transform(t) => {
            let out = match t {
                TransformCommand::Merge { network, experiment, i, j } => {
                    symmetry_merge(&read_experiment(&experiment)?, &read_network(&network)?, i, j)?
                }
                TransformCommand::Replicate { network, experiment } => {
                    replicate_to_empty(&read_experiment(&experiment)?, &read_network(&network)?)?
                }
                TransformCommand::CenterCollapse(a) => {
                    center_collapse(&read_experiment(&a.experiment)?, &instance(&a.inst)?, a.component)?
                }
                TransformCommand::CenterAlign(a) => {
                    center_align(&read_experiment(&a.experiment)?, &instance(&a.inst)?, a.component)?
                }
            };
            out.experiment.to_json() + "\n"
        }
        Command::Extend { construction, inst, component } => {
            let construction = Construction::parse(&construction)?;
            let inst = instance(&inst)?;
            pretty(&extend(construction, inst.network(), inst.k(), component)?)
        }
        Command::Oracle { inst, mode, cap } => {
            let inst = instance(&inst)?;
            let result = match mode {
                Mode::Anchored => anchored_optimal(&inst, &oracle_options(cap)?)?,
                Mode::Exhaustive => exhaustive_optimal(&inst)?,
            };
            pretty(&result)
        }
        Command::Sweep { chain, k, prior, allow_boundary, cap } => {
            let networks = chain.iter().map(|p| read_network(p)).collect::<CliResult<Vec<_>>>()?;
            let first = networks.first().cloned().ok_or_else(|| CliError::Usage("empty chain".into()))?;
            let inst = Instance::new(first, parse_rational(&prior)?, k, allow_boundary)?;
            let report = sweep_values(&inst, &networks, &SweepOptions { oracle: oracle_options(cap)? })?;
            sweep_csv(&report)?
        }
        Command::Repro { which: Repro::Figure1 } => {
            let chain = figure1_chain()?;
            let inst = Instance::new(chain[0].clone(), spillover::rat(1, 3), 5, false)?;
            let report = sweep_values(&inst, &chain, &SweepOptions { oracle: oracle_options(None)? })?;
            sweep_csv(&report)?
        }
        Command::Repro { which: Repro::Example2 } => {
            let ex = example2_experiment()?;
            let base = ex.instance.with_network(ex.base.clone())?;
            let before = anchored_optimal(&base, &oracle_options(None)?)?;
            let after = evaluate(&ex.canonical.experiment, &ex.instance)?;
            let bridge = spillover::EXAMPLE2_BRIDGE;
            pretty(&json!({
                "n": ex.instance.n(),
                "k": ex.instance.k(),
                "prior": render(ex.instance.prior_x()),
                "bridge": [bridge.0, bridge.1],
                "base_value_lower": render(&before.lower_bound),
                "base_value_upper": render(&before.upper_bound),
                "extended_value": render(&after.value),
                "extended_dominating_pairs": dominating_pairs(&ex.extended).pairs,
                "experiment": ex.canonical.experiment,
            }))
        }
        Command::Selftest { seed, cases } => {
            let summary = selftest::run(seed, cases);
            let text = pretty(&summary);
            if !summary.passed() {
                return Err(CliError::Selftest(text));
            }
            text
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| match &out {
        Some(path) => fs::write(path, &text).map_err(|e| CliError::Io { path: path.clone(), message: e.to_string() }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string())),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code())
        }
    }
}
