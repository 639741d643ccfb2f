use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use invbraid::coxeter::preset;
use invbraid::engine::{
    build_forest, equivalent_over_hat, extract_relations, minimize, EngineConfig,
};
use invbraid::families::{FamilyParams, Registry};
use invbraid::json::{to_canonical_string, ForestJson, RelationJson, SystemFile, SystemJson};
use invbraid::numfield::INFINITY;
use invbraid::parabolic::{covering_report, is_parabolic_config, Catalog, ConfigSpec};
use invbraid::report::{span, verify, SpanOptions, VerifyOptions};
use invbraid::{Error, TwistedSystem};

/// Braid relations for involution words in twisted Coxeter systems.
#[derive(Parser)]
#[command(name = "invbraid", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Type, e.g. A, B, D, H, I (rank is then m), affine-C or ~C, 2xA.
    #[arg(long = "type", value_name = "TYPE", required_unless_present = "system")]
    kind: Option<String>,
    #[arg(long, required_unless_present = "system")]
    rank: Option<usize>,
    /// id, reverse, flip, mirror, rotate, or a label swap such as 0-1.
    #[arg(long, default_value = "id")]
    twist: String,
    /// JSON system file instead of a preset.
    #[arg(long, conflicts_with = "kind")]
    system: Option<PathBuf>,
    /// Generator order from least to greatest, as comma-separated labels.
    #[arg(long)]
    order: Option<String>,
}

impl SystemArgs {
    fn build(&self) -> Result<TwistedSystem, Error> {
        let sys = match (&self.system, &self.kind, self.rank) {
            (Some(path), _, _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                SystemFile::parse(&text)?
            }
            (None, Some(kind), Some(rank)) => preset(kind, rank, &self.twist)?,
            _ => return Err(Error::Parse("need --type and --rank, or --system".into())),
        };
        match &self.order {
            None => Ok(sys),
            Some(text) => {
                let order = text
                    .split(',')
                    .map(|l| sys.gen(l.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                sys.with_order(order)
            }
        }
    }
}

#[derive(Args)]
struct EngineArgs {
    /// Descent-elimination iterations before giving up.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    /// Extension depth for implication checks.
    #[arg(long, default_value_t = 2)]
    depth: usize,
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        EngineConfig {
            budget: self.budget,
            ..EngineConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build every forest, extract and minimize the induced relations.
    Span {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Relation families the minimal set must be implied by.
        #[arg(long, default_value = "hat-plus")]
        relations: String,
        /// Length bound for families that enumerate elements.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Check that a relation set spans every set of involution words.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value = "hat-plus")]
        relations: String,
        /// Hat-length bound; required for affine types.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Dump the forest for one pair.
    Forest {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// The pair as two comma-separated labels.
        #[arg(long)]
        pair: String,
    },
    /// Print a relation family.
    Relations {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value = "hat-plus")]
        relations: String,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Check a catalog configuration, e.g. B5, D7', 2A9, 2(A5xA5).
    Config {
        name: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Covering report for a catalog case such as C1 or D2.
    Cover {
        case: String,
        #[arg(long)]
        rank: usize,
    },
}

enum Failure {
    Verification(String),
    Algorithm(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFiniteTree(_)
            | Error::Budget { .. }
            | Error::ClassLimit { .. }
            | Error::Precondition(_) => Failure::Algorithm(e.to_string()),
            Error::Field(_) | Error::MissingVariable(_) => Failure::Algorithm(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let text = to_canonical_string(value)?;
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct RelationsReport {
    system: SystemJson,
    relations: String,
    list: Vec<RelationJson>,
}

#[derive(Serialize)]
struct ConfigReport {
    name: String,
    system: SystemJson,
    window: Vec<String>,
    pair: [String; 2],
    parabolic: bool,
    vertices: usize,
    violations: Vec<usize>,
    relations: Vec<RelationJson>,
    minimal: Vec<RelationJson>,
    table: Option<RelationJson>,
    matches_table: Option<bool>,
}

#[derive(Serialize)]
struct CoverPair {
    pair: [String; 2],
    config: Option<String>,
    image: Option<Vec<String>>,
}

#[derive(Serialize)]
struct CoverReport {
    case: String,
    system: SystemJson,
    configurations: Vec<String>,
    pairs: Vec<CoverPair>,
    covered: bool,
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let registry = Registry::builtin();
    match &cli.command {
        Command::Span {
            system,
            engine,
            relations,
            bound,
        } => {
            let sys = system.build()?;
            let opts = SpanOptions {
                engine: engine.config(),
                depth: engine.depth,
                reference: relations.clone(),
                params: FamilyParams { bound: *bound },
            };
            let report = span(&sys, &opts, &registry)?;
            emit(&cli.out, &report)?;
            if !report.implied_by_reference {
                return Err(Failure::Verification(format!(
                    "minimal relations not implied by {relations}"
                )));
            }
        }
        Command::Verify {
            system,
            relations,
            bound,
        } => {
            let sys = system.build()?;
            let opts = VerifyOptions {
                bound: *bound,
                relations: relations.clone(),
            };
            let report = verify(&sys, &opts, &registry)?;
            emit(&cli.out, &report)?;
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(Failure::Verification(format!(
                    "failed: {}",
                    failed.join(", ")
                )));
            }
        }
        Command::Forest {
            system,
            engine,
            pair,
        } => {
            let sys = system.build()?;
            let gens = pair
                .split(',')
                .map(|l| sys.gen(l.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let [s, t] = gens[..] else {
                return Err(Failure::Input(format!(
                    "--pair needs two labels, got {pair:?}"
                )));
            };
            let m = sys.m(s, t);
            if s == t || m <= 2 || m == INFINITY {
                return Err(Failure::Input(format!(
                    "--pair {pair}: forests need 2 < m(s,t) < ∞"
                )));
            }
            let forest = build_forest(&sys, s, t, &engine.config())?;
            let rels = extract_relations(&sys, &forest);
            emit(&cli.out, &ForestJson::new(&sys, &forest, &rels))?;
        }
        Command::Relations {
            system,
            relations,
            bound,
        } => {
            let sys = system.build()?;
            let list = registry.resolve(relations, &sys, &FamilyParams { bound: *bound })?;
            let report = RelationsReport {
                system: SystemJson::new(&sys),
                relations: relations.clone(),
                list: RelationJson::list(&sys, &list),
            };
            emit(&cli.out, &report)?;
        }
        Command::Config { name, engine } => {
            let catalog = Catalog::builtin();
            let spec = catalog.config(name)?;
            let cfg = is_parabolic_config(&spec, &engine.config())?;
            let sys = &spec.bounded.system;
            let relations = cfg.relations();
            let minimal = minimize(sys, &relations, engine.depth)?;
            let table = catalog.table_relation(name)?;
            let matches_table = match &table {
                Some(row) => Some(equivalent_over_hat(
                    sys,
                    &minimal,
                    std::slice::from_ref(row),
                    engine.depth,
                )?),
                None => None,
            };
            let mut window: Vec<_> = spec.bounded.j.iter().copied().collect();
            sys.sort_gens(&mut window);
            let report = ConfigReport {
                name: name.clone(),
                system: SystemJson::new(sys),
                window: window.iter().map(|&g| sys.label(g).to_string()).collect(),
                pair: [sys.label(spec.s).to_string(), sys.label(spec.t).to_string()],
                parabolic: cfg.is_parabolic(),
                vertices: cfg.forest.len(),
                violations: cfg.violations.clone(),
                relations: RelationJson::list(sys, &relations),
                minimal: RelationJson::list(sys, &minimal),
                table: table.as_ref().map(|r| RelationJson::new(sys, r)),
                matches_table,
            };
            emit(&cli.out, &report)?;
            if !report.parabolic || report.matches_table == Some(false) {
                return Err(Failure::Verification(format!("{name} did not check out")));
            }
        }
        Command::Cover { case, rank } => {
            let catalog = Catalog::builtin();
            let c = catalog
                .covering_case(case)
                .ok_or_else(|| Failure::Input(format!("unknown covering case {case:?}")))?;
            let target = preset(&c.kind, *rank, &c.twist)?;
            let names = c.configurations_for(*rank);
            let specs = names
                .iter()
                .map(|n| catalog.config(n))
                .collect::<Result<Vec<ConfigSpec>, _>>()?;
            let entries = covering_report(&target, &specs);
            let pairs: Vec<CoverPair> = entries
                .iter()
                .map(|e| CoverPair {
                    pair: [
                        target.label(e.pair.0).to_string(),
                        target.label(e.pair.1).to_string(),
                    ],
                    config: e.config.clone(),
                    image: e
                        .embedding
                        .as_ref()
                        .map(|m| m.map.iter().map(|&g| target.label(g).to_string()).collect()),
                })
                .collect();
            let covered = pairs.iter().all(|p| p.config.is_some());
            let report = CoverReport {
                case: case.clone(),
                system: SystemJson::new(&target),
                configurations: names,
                pairs,
                covered,
            };
            emit(&cli.out, &report)?;
            if !covered {
                return Err(Failure::Verification(format!(
                    "{case} at rank {rank} has uncovered pairs"
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("invbraid: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("invbraid: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Algorithm(m)) => {
            eprintln!("invbraid: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("invbraid: {m}");
            ExitCode::from(3)
        }
    }
}
