//! Command-line front-end: argument parsing, dispatch and exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abelian::{
    coset_transversal, free_extension, higher_power, pull_back, push_forward, AbelianNnSft, GroupExpr, Quotient,
    SubgroupLattice,
};
use crate::corpus::run_corpus;
use crate::error::Error;
use crate::periods::{has_aperiodic_point, multiples, structural_bound};
use crate::realizer::realize;
use crate::report::RunReport;
use crate::semilinear::parse_set;
use crate::tileset::{prune_essential, TilesetGraph};
use crate::z2::{
    aperiodicity_probe, check_torus, period_vector_graph, periodize, search_torus, stabilizer_lattice, Nn2Sft,
    PeriodVector, ProbeReport, TorusConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ABSENT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "stablab", version, about = "Periods and stabilizers of nearest-neighbor subshifts of finite type")]
#[command(after_help = "Exit codes: 0 success, 1 usage or parse error, 2 not realizable or absent, 3 unknown at bound.\n\
                        STABLAB_THREADS caps the number of worker threads.")]
pub struct Cli {
    /// Print the run report as JSON instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Set of multiples and aperiodic-point flag of a tileset graph.
    Analyze {
        path: PathBuf,
        /// Period bound used to certify the set (defaults to the structural bound).
        #[arg(long)]
        bound: Option<u64>,
        /// Write the pruned graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build a tileset graph whose set of multiples is the given set.
    Realize {
        /// Set expression such as "{2,3}" or "{0} + 3(N+2)".
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Recompute the set of multiples of the result and compare.
        #[arg(long)]
        verify: bool,
        #[arg(long, requires = "verify")]
        bound: Option<u64>,
    },
    /// Bounded search for periodic or vector-stabilized configurations.
    Probe {
        sft: PathBuf,
        #[arg(long)]
        bound: usize,
    },
    /// Torus witness for a configuration stabilized by a vector.
    Periodize {
        sft: PathBuf,
        /// Period vector `p,q`.
        #[arg(long, allow_hyphen_values = true)]
        vector: PeriodVector,
    },
    /// Valid configuration on a `p × q` torus.
    Search {
        sft: PathBuf,
        /// Torus size `p,q`.
        #[arg(long, value_parser = parse_pair)]
        torus: (usize, usize),
    },
    /// Forbidden-pattern constructions over abelian groups.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long = "in")]
        input: PathBuf,
        /// Quotient `G / <gens>` for pull-back and push-forward.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Target rank for free-ext.
        #[arg(long)]
        dim: Option<usize>,
        /// Finite-index sublattice generators for higher-power, e.g. "(2,0),(0,1)".
        #[arg(long)]
        lattice: Option<String>,
        /// Coset representatives for higher-power (defaults to the standard transversal).
        #[arg(long)]
        reps: Option<String>,
    },
    /// Seeded run over generated instances; prints the golden report.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the golden report (timing excluded) to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    FreeExt,
    HigherPower,
    PullBack,
    PushForward,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (a, b) = inner.split_once(',').ok_or_else(|| format!("expected `p,q`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("bad width `{a}`: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad height `{b}`: {e}"))?;
    Ok((a, b))
}

/// What a subcommand produced: report results, human-readable lines, exit code.
struct Outcome {
    results: Value,
    text: Vec<String>,
    code: i32,
}

impl Outcome {
    fn ok(results: Value, text: Vec<String>) -> Self {
        Outcome { results, text, code: EXIT_OK }
    }
}

struct Failure {
    message: String,
    code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotRealizable(_) => EXIT_ABSENT,
            _ => EXIT_USAGE,
        };
        Failure { message: e.to_string(), code }
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure { message: format!("{}: {e}", path.display()), code: EXIT_USAGE }
}

fn read(path: &Path, inputs: &mut Vec<Vec<u8>>) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    inputs.push(text.clone().into_bytes());
    Ok(text)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_fail(path, e))
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure { message: format!("{}: {e}", path.display()), code: EXIT_USAGE }
}

/// Runs the binary on `args` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let start = Instant::now();
    let mut inputs: Vec<Vec<u8>> = vec![];
    match dispatch(&cli.command, &mut inputs) {
        Ok(outcome) => {
            let refs: Vec<&[u8]> = inputs.iter().map(Vec::as_slice).collect();
            let report = RunReport::new(args[1..].to_vec(), &refs, outcome.results, start.elapsed().as_millis());
            if cli.json {
                let _ = writeln!(stdout, "{}", report.to_json());
            } else {
                for line in &outcome.text {
                    let _ = writeln!(stdout, "{line}");
                }
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, inputs: &mut Vec<Vec<u8>>) -> Result<Outcome, Failure> {
    match cmd {
        Command::Analyze { path, bound, dot } => analyze(path, *bound, dot.as_deref(), inputs),
        Command::Realize { set, out, dot, verify, bound } => {
            inputs.push(set.clone().into_bytes());
            cmd_realize(set, out.as_deref(), dot.as_deref(), *verify, *bound)
        }
        Command::Probe { sft, bound } => {
            let sft = load_sft(sft, inputs)?;
            Ok(probe(&sft, *bound))
        }
        Command::Periodize { sft, vector } => {
            let sft = load_sft(sft, inputs)?;
            Ok(cmd_periodize(&sft, *vector))
        }
        Command::Search { sft, torus } => {
            let sft = load_sft(sft, inputs)?;
            cmd_search(&sft, torus.0, torus.1)
        }
        Command::Construct { kind, input, group, out, dim, lattice, reps } => {
            let text = read(input, inputs)?;
            let x = AbelianNnSft::parse(&text).map_err(in_file(input))?;
            if let Some(g) = group {
                inputs.push(g.clone().into_bytes());
            }
            let y = construct(*kind, &x, group.as_deref(), *dim, lattice.as_deref(), reps.as_deref())?;
            let rendered = y.to_string();
            let mut text = vec![];
            match out {
                Some(path) => {
                    write(path, &rendered)?;
                    text.push(format!("wrote {} ({} letters, {} rules)", path.display(), y.letter_count(), y.patterns().len()));
                }
                None => text.push(rendered.trim_end().to_string()),
            }
            let results = json!({
                "group": y.group().to_string(),
                "letters": y.letter_count(),
                "rules": y.patterns().len(),
                "sft": rendered,
            });
            Ok(Outcome::ok(results, text))
        }
        Command::Corpus { seed, out } => {
            inputs.push(seed.to_le_bytes().to_vec());
            let results = run_corpus(*seed);
            if let Some(path) = out {
                let golden = RunReport::new(vec!["corpus".into(), "--seed".into(), seed.to_string()], &[&seed.to_le_bytes()], results.clone(), 0);
                write(path, &golden.to_golden())?;
            }
            let text = vec![serde_json::to_string_pretty(&results).expect("corpus serializes")];
            Ok(Outcome::ok(results, text))
        }
    }
}

fn load_sft(path: &Path, inputs: &mut Vec<Vec<u8>>) -> Result<Nn2Sft, Failure> {
    let text = read(path, inputs)?;
    Nn2Sft::parse(&text).map_err(in_file(path))
}

fn analyze(path: &Path, bound: Option<u64>, dot: Option<&Path>, inputs: &mut Vec<Vec<u8>>) -> Result<Outcome, Failure> {
    let text = read(path, inputs)?;
    let g = TilesetGraph::parse(&text).map_err(in_file(path))?;
    let pruned = prune_essential(&g);
    if let Some(dot) = dot {
        write(dot, &pruned.to_dot())?;
    }
    if pruned.is_empty() {
        let results = json!({ "empty": true, "vertices": g.vertex_count(), "essential_vertices": 0 });
        return Ok(Outcome::ok(results, vec!["EMPTY".into()]));
    }
    let bound = bound.unwrap_or_else(|| structural_bound(&pruned));
    let m = multiples(&pruned, bound)?;
    let aperiodic = has_aperiodic_point(&pruned)?;
    let results = json!({
        "empty": false,
        "vertices": g.vertex_count(),
        "essential_vertices": pruned.vertex_count(),
        "bound": bound,
        "multiples": m.to_string(),
        "aperiodic_point": aperiodic,
    });
    let text = vec![format!("M = {m}"), format!("aperiodic point: {}", if aperiodic { "yes" } else { "no" })];
    Ok(Outcome::ok(results, text))
}

fn cmd_realize(
    set: &str,
    out: Option<&Path>,
    dot: Option<&Path>,
    verify: bool,
    bound: Option<u64>,
) -> Result<Outcome, Failure> {
    let target = parse_set(set)?;
    let g = realize(&target)?;
    let mut text = vec![];
    match out {
        Some(path) => {
            write(path, &g.to_string())?;
            text.push(format!("wrote {} ({} vertices, {} edges)", path.display(), g.vertex_count(), g.edge_count()));
        }
        None => text.push(g.to_string().trim_end().to_string()),
    }
    if let Some(path) = dot {
        write(path, &g.to_dot())?;
    }
    let mut results = json!({
        "target": target.to_string(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "graph": g.to_string(),
    });
    let mut code = EXIT_OK;
    if verify {
        let bound = bound.unwrap_or_else(|| structural_bound(&g));
        let m = multiples(&g, bound)?;
        let ok = m.equal_sl(&target);
        results["verified"] = json!(ok);
        results["multiples"] = json!(m.to_string());
        text.push(if ok { format!("verified: M = {m}") } else { format!("MISMATCH: M = {m}, expected {target}") });
        if !ok {
            code = EXIT_USAGE;
        }
    }
    Ok(Outcome { results, text, code })
}

fn witness_json(sft: &Nn2Sft, cfg: &TorusConfig) -> Value {
    serde_json::to_value(cfg.to_witness(sft)).expect("witness serializes")
}

fn probe(sft: &Nn2Sft, bound: usize) -> Outcome {
    let report = aperiodicity_probe(sft, bound);
    let mut results = json!({ "outcome": report.outcome(), "bound": bound });
    let mut text = vec![report.outcome().to_string()];
    if let Some(w) = report.witness() {
        let wj = witness_json(sft, w);
        results["witness"] = wj.clone();
        results["stabilizer"] = json!(stabilizer_lattice(w));
        text.push(wj.to_string());
    }
    let code = match &report {
        ProbeReport::VectorStabilizedFound { vector, .. } => {
            results["vector"] = json!(vector.to_string());
            text.insert(1, format!("vector {vector}"));
            EXIT_OK
        }
        ProbeReport::Unknown { skipped, .. } => {
            let skipped: Vec<String> = skipped.iter().map(|v| v.to_string()).collect();
            if !skipped.is_empty() {
                text.push(format!("skipped: {}", skipped.join(" ")));
            }
            results["skipped"] = json!(skipped);
            EXIT_UNKNOWN
        }
        _ => EXIT_OK,
    };
    Outcome { results, text, code }
}

fn cmd_periodize(sft: &Nn2Sft, v: PeriodVector) -> Outcome {
    let blocks = prune_essential(&period_vector_graph(sft, v)).vertex_count();
    match periodize(sft, v) {
        Some(cfg) => {
            let wj = witness_json(sft, &cfg);
            let results = json!({
                "vector": v.to_string(),
                "witness": wj,
                "stabilizer": stabilizer_lattice(&cfg),
                "essential_blocks": blocks,
            });
            Outcome::ok(results, vec![wj.to_string()])
        }
        None => Outcome {
            results: json!({ "vector": v.to_string(), "witness": Value::Null }),
            text: vec![format!("no configuration is stabilized by {v}")],
            code: EXIT_ABSENT,
        },
    }
}

fn cmd_search(sft: &Nn2Sft, p: usize, q: usize) -> Result<Outcome, Failure> {
    if p == 0 || q == 0 {
        return Err(Failure { message: "torus sides must be positive".into(), code: EXIT_USAGE });
    }
    Ok(match search_torus(sft, p, q) {
        Some(cfg) => {
            debug_assert!(check_torus(sft, &cfg).map(|v| v.is_empty()).unwrap_or(false));
            let wj = witness_json(sft, &cfg);
            let results = json!({ "torus": [p, q], "witness": wj, "stabilizer": stabilizer_lattice(&cfg) });
            Outcome::ok(results, vec![wj.to_string()])
        }
        None => Outcome {
            results: json!({ "torus": [p, q], "witness": Value::Null }),
            text: vec![format!("no valid configuration on the {p}x{q} torus")],
            code: EXIT_ABSENT,
        },
    })
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code: EXIT_USAGE }
}

/// Parses a list of elements of `x`'s group, e.g. "(2,0),(0,1)".
fn elements(x: &AbelianNnSft, text: &str) -> Result<Vec<Vec<i64>>, Failure> {
    let expr = GroupExpr::parse(&format!("{} / <{text}>", x.group()))?;
    Ok(expr.subgroup.unwrap_or_default())
}

fn quotient(group: Option<&str>) -> Result<Quotient, Failure> {
    let group = group.ok_or_else(|| usage("--group `G / <gens>` is required"))?;
    let expr = GroupExpr::parse(group)?;
    if !expr.ambient.is_free() {
        return Err(usage(format!("ambient group of `{group}` must be free")));
    }
    let gens = expr.subgroup.ok_or_else(|| usage(format!("`{group}` names no subgroup")))?;
    Ok(Quotient::new(expr.ambient.dim(), gens)?)
}

fn construct(
    kind: ConstructKind,
    x: &AbelianNnSft,
    group: Option<&str>,
    dim: Option<usize>,
    lattice: Option<&str>,
    reps: Option<&str>,
) -> Result<AbelianNnSft, Failure> {
    Ok(match kind {
        ConstructKind::FreeExt => free_extension(x, dim.ok_or_else(|| usage("free-ext needs --dim"))?)?,
        ConstructKind::HigherPower => {
            let gens = elements(x, lattice.ok_or_else(|| usage("higher-power needs --lattice"))?)?;
            let l = SubgroupLattice::new(x.group().dim(), gens)?;
            let reps = match reps {
                Some(r) => elements(x, r)?,
                None => coset_transversal(&l)?,
            };
            higher_power(x, &l, &reps)?
        }
        ConstructKind::PullBack => pull_back(x, &quotient(group)?)?,
        ConstructKind::PushForward => push_forward(x, &quotient(group)?)?,
    })
}

/// Sizes the global thread pool from `STABLAB_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var("STABLAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = std::iter::once("stablab").chain(args.iter().copied()).map(String::from).collect();
        let code = run(args, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn realize_exit_codes() {
        let (code, out, _) = run_str(&["realize", "{0} + 3(N+2)", "--verify"]);
        assert_eq!(code, 0);
        assert!(out.contains("verified"));
        let (code, _, err) = run_str(&["realize", "2N*"]);
        assert_eq!(code, EXIT_ABSENT);
        assert!(err.contains("must contain 0"), "{err}");
        let (code, _, _) = run_str(&["realize", "{2,"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(run_str(&["--help"]).0, 0);
        assert_eq!(run_str(&["--version"]).0, 0);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("2,3"), Ok((2, 3)));
        assert_eq!(parse_pair("(1, 4)"), Ok((1, 4)));
        assert!(parse_pair("2").is_err());
    }
}
