//! Command-line front end.
//!
//! Exit codes: 0 when the relation holds or the check passes, 1 when it
//! does not, 2 on unreadable or invalid input.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use statrel::ancillarity::{
    enumerate_ancillaries_with_limit, maximal_ancillaries_with_limit, DEFAULT_ENUMERATION_LIMIT,
};
use statrel::closure::{build_relation_graph, equivalence_classes};
use statrel::demo::{self, DemoName};
use statrel::search::{search_maximal_with, SearchConfig};
use statrel::{
    condition_on_cell, conditionality_chain, minimal_sufficient_partition, mixture_chain, relate, verify_chain,
    ChainCertificate, Error, Experiment, InferenceBase, RelationKind, StatisticPartition,
};

#[derive(Parser)]
#[command(name = "statrel", version, about = "Exact relations between finite inference bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Four conditionality links through two-layer models.
    Efm,
    /// Conditionality, sufficiency, conditionality through a mixture.
    Birnbaum,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one relation between two inference bases.
    Relate {
        /// L, S, C, C-durbin or G.
        kind: RelationKind,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// Build a chain certificate for a likelihood-related pair.
    Prove {
        #[arg(long, value_enum)]
        method: Method,
        file1: PathBuf,
        file2: PathBuf,
        /// Where to write the certificate JSON.
        out: PathBuf,
    },
    /// Check every link of a chain certificate.
    Verify { cert: PathBuf },
    /// Recompute a built-in worked example.
    Demo { name: DemoName },
    /// Print the minimal sufficient partition of an experiment or base.
    Msuf { file: PathBuf },
    /// List ancillary partitions, one JSON array per line.
    Ancillaries {
        file: PathBuf,
        /// Only the maximal ones.
        #[arg(long)]
        maximal: bool,
        /// Largest sample space to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
    },
    /// Condition a base on the observed cell of an ancillary partition.
    Condition {
        file: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Relation graph and equivalence classes over a directory of bases.
    Closure {
        #[arg(long)]
        universe: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "L,S,C,G")]
        kinds: Vec<RelationKind>,
    },
    /// Stream experiments with at least two maximal ancillaries.
    SearchMaximal {
        #[arg(long)]
        x_size: usize,
        #[arg(long)]
        theta_size: usize,
        #[arg(long)]
        denominator: u32,
        #[arg(long)]
        limit: Option<usize>,
        /// Lift the default size bounds.
        #[arg(long)]
        allow_large: bool,
    },
}

/// A failed command: the message for stderr and the exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(context: impl Display, err: impl Display) -> Failure {
    Failure {
        code: 2,
        message: format!("{context}: {err}"),
    }
}

fn negative(message: impl Display) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

// Construction failures that mean "the inputs are not related" exit 1;
// anything else is treated as bad input.
fn engine_error(err: Error) -> Failure {
    match err {
        Error::NotLikelihoodRelated(_) | Error::DegenerateSampleSpace(_) => negative(err),
        _ => input_error("error", err),
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(path.display(), e))
}

fn load_base(path: &Path) -> Result<InferenceBase, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| input_error(path.display(), e))
}

// Accepts a bare experiment or an inference base.
fn load_experiment(path: &Path) -> Result<Experiment, Failure> {
    let text = read(path)?;
    if let Ok(base) = serde_json::from_str::<InferenceBase>(&text) {
        return Ok(base.experiment().clone());
    }
    serde_json::from_str(&text).map_err(|e| input_error(path.display(), e))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("library types always serialize")
}

fn cmd_relate(kind: RelationKind, file1: &Path, file2: &Path) -> Outcome {
    let (i1, i2) = (load_base(file1)?, load_base(file2)?);
    match relate(kind, &i1, &i2).map_err(engine_error)? {
        Ok(witness) => {
            println!("{}", json(&witness));
            Ok(0)
        }
        Err(reason) => {
            println!("not related: {reason}");
            Ok(1)
        }
    }
}

fn cmd_prove(method: Method, file1: &Path, file2: &Path, out: &Path) -> Outcome {
    let (i1, i2) = (load_base(file1)?, load_base(file2)?);
    let cert = match method {
        Method::Efm => conditionality_chain(&i1, &i2),
        Method::Birnbaum => mixture_chain(&i1, &i2),
    }
    .map_err(engine_error)?;
    fs::write(out, cert.to_json_pretty() + "\n").map_err(|e| input_error(out.display(), e))?;
    let kinds: Vec<String> = cert.kinds().iter().map(ToString::to_string).collect();
    println!(
        "wrote {} links [{}] to {}",
        cert.links.len(),
        kinds.join(", "),
        out.display()
    );
    Ok(0)
}

fn cmd_verify(path: &Path) -> Outcome {
    let cert = ChainCertificate::from_json(&read(path)?).map_err(|e| input_error(path.display(), e))?;
    let report = verify_chain(&cert);
    println!("{report}");
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_demo(name: DemoName) -> Outcome {
    let report = demo::run(name).map_err(|e| negative(format!("demo {name} could not run: {e}")))?;
    println!("{report}");
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_msuf(path: &Path) -> Outcome {
    let e = load_experiment(path)?;
    println!("{}", json(&minimal_sufficient_partition(&e)));
    Ok(0)
}

fn cmd_ancillaries(path: &Path, maximal: bool, limit: usize) -> Outcome {
    let e = load_experiment(path)?;
    let found = if maximal {
        maximal_ancillaries_with_limit(&e, limit)
    } else {
        enumerate_ancillaries_with_limit(&e, limit)
    }
    .map_err(engine_error)?;
    for p in found {
        println!("{}", json(&p));
    }
    Ok(0)
}

fn cmd_condition(path: &Path, partition: &Path) -> Outcome {
    let base = load_base(path)?;
    let p: StatisticPartition =
        serde_json::from_str(&read(partition)?).map_err(|e| input_error(partition.display(), e))?;
    let conditioned = condition_on_cell(&base, &p).map_err(|e| input_error("cannot condition", e))?;
    println!("{}", conditioned.to_json());
    Ok(0)
}

fn cmd_closure(dir: &Path, kinds: &[RelationKind]) -> Outcome {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| input_error(dir.display(), e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    let universe = files.iter().map(|f| load_base(f)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = files
        .iter()
        .map(|f| {
            f.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
        .collect();
    let edges = build_relation_graph(&universe, kinds).map_err(engine_error)?;
    for e in &edges {
        println!(
            "{}",
            serde_json::json!({"left": names[e.left], "right": names[e.right], "kind": e.kind})
        );
    }
    for class in equivalence_classes(&universe, &edges).map_err(engine_error)? {
        let members: Vec<&str> = class.iter().map(|&i| names[i].as_str()).collect();
        println!("{}", serde_json::json!({ "class": members }));
    }
    Ok(0)
}

fn cmd_search(config: SearchConfig) -> Outcome {
    search_maximal_with(&config, |hit| println!("{}", json(&hit.experiment))).map_err(engine_error)?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Relate { kind, file1, file2 } => cmd_relate(kind, &file1, &file2),
        Command::Prove {
            method,
            file1,
            file2,
            out,
        } => cmd_prove(method, &file1, &file2, &out),
        Command::Verify { cert } => cmd_verify(&cert),
        Command::Demo { name } => cmd_demo(name),
        Command::Msuf { file } => cmd_msuf(&file),
        Command::Ancillaries { file, maximal, limit } => cmd_ancillaries(&file, maximal, limit),
        Command::Condition { file, partition } => cmd_condition(&file, &partition),
        Command::Closure { universe, kinds } => cmd_closure(&universe, &kinds),
        Command::SearchMaximal {
            x_size,
            theta_size,
            denominator,
            limit,
            allow_large,
        } => cmd_search(SearchConfig {
            x_size,
            theta_size,
            denominator,
            limit,
            allow_large,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
