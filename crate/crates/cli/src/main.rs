//! `wonder`: stratifications, abelianization traces and stabilizer checks for
//! finite groups of rational matrices.
//!
//! Exit codes: 0 pass, 1 violation found, 2 operational error.

mod spec;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wonder_core::batyrev::{batyrev_trace, cross_check_oracle, verify_trace};
use wonder_core::export::{lattice_doc, lattice_dot, lattice_table, trace_table};
use wonder_core::par::Execution;
use wonder_core::stratification::{y_family, y_lattice};
use wonder_core::verify::{
    abelian_suite, criterion_report, question_check, question_scan, solvable_min_check, QuestionVerdict,
    StratificationKind, SuiteBudget, SuiteModes, VerificationReport,
};
use wonder_core::wonderful::{building_set_max, chains};
use wonder_core::WonderError;

use spec::{GroupSpec, DEFAULT_SAMPLES, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "wonder",
    version,
    about = "Wonderful blowups of finite linear group actions, computed exactly"
)]
struct Cli {
    /// Group specification document (JSON); `-` reads standard input.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Preset expression instead of a document, e.g. `s4_perm4` or `prod(3,2)`.
    #[arg(long, global = true, conflicts_with = "spec")]
    preset: Option<String>,
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Stabilizer,
    Y,
}

impl From<Kind> for StratificationKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Stabilizer => StratificationKind::Stabilizer,
            Kind::Y => StratificationKind::Y,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    AbelianMax,
    SolvableMin,
    Criterion,
    Question,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Chains,
    Arcs,
    Search,
}

#[derive(Subcommand)]
enum Command {
    /// Stratum lattice: elements, dimensions, stabilizer orders, Hasse edges.
    Strata {
        #[arg(long, value_enum, default_value = "stabilizer")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Staged abelianization trace with its structural checks.
    Trace {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Arc samples per virtual point for the oracle cross-check (0 skips it).
        #[arg(long, default_value_t = 2)]
        oracle_samples: usize,
        #[arg(long, env = "WONDER_SEED")]
        seed: Option<u64>,
    },
    /// Runs one of the verification suites.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, value_enum, default_value = "stabilizer")]
        kind: Kind,
        /// Arc samples for the abelian suite.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, env = "WONDER_SEED")]
        seed: Option<u64>,
        /// Abelian-suite modes (default: all three).
        #[arg(long, value_enum, value_delimiter = ',')]
        modes: Vec<Mode>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Bounded scan for groups whose fixed spaces are all coordinate subspaces.
    ScanQuestion {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        candidates: usize,
        #[arg(long, env = "WONDER_SEED")]
        seed: Option<u64>,
        /// JSON list of extra generator sets to include.
        #[arg(long)]
        extra: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Hasse diagram of a stratum lattice in DOT.
    ExportDot {
        #[arg(long, value_enum, default_value = "stabilizer")]
        kind: Kind,
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Core(WonderError),
    Usage(String),
}

impl From<WonderError> for Failure {
    fn from(e: WonderError) -> Self {
        Failure::Core(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(s) => write!(f, "{s}"),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn load(cli: &Cli) -> Result<GroupSpec, Failure> {
    match (&cli.spec, &cli.preset) {
        (Some(p), _) => Ok(spec::parse_document(&read_input(p)?)?),
        (None, Some(e)) => Ok(spec::from_preset_expr(e)?),
        (None, None) => Err(Failure::Usage("pass --spec FILE or --preset NAME".into())),
    }
}

fn emit_json<T: Serialize>(value: &T) {
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(
        std::io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn kind_label(k: Kind) -> &'static str {
    match k {
        Kind::Stabilizer => "stabilizer",
        Kind::Y => "y",
    }
}

fn seed_of(flag: Option<u64>, spec: &GroupSpec) -> u64 {
    flag.or(spec.caps.seed).unwrap_or(DEFAULT_SEED)
}

fn cmd_strata(cli: &Cli, kind: Kind, format: Format) -> CmdResult {
    let s = load(cli)?;
    let lattice = StratificationKind::from(kind).lattice(&s.model, s.caps.subgroup_order())?;
    match format {
        Format::Json => emit_json(&lattice_doc(&s.model.name, kind_label(kind), &lattice)),
        Format::Dot => print!("{}", lattice_dot(&s.model.name, kind_label(kind), &lattice)),
        Format::Table => print!("{}", lattice_table(&lattice)),
    }
    Ok(true)
}

fn cmd_trace(cli: &Cli, format: Format, oracle_samples: usize, seed: Option<u64>, exec: Execution) -> CmdResult {
    let s = load(cli)?;
    let fam = y_family(&s.model, s.caps.subgroup_order())?;
    let trace = batyrev_trace(s.model.ambient_dim(), &fam);
    let checks = verify_trace(&trace, &s.model.group);
    let oracle = if oracle_samples > 0 {
        Some(cross_check_oracle(&trace, oracle_samples, seed_of(seed, &s), exec)?)
    } else {
        None
    };
    match format {
        Format::Json => emit_json(&json!({
            "model": s.model.name,
            "trace": trace,
            "checks": checks,
            "oracle": oracle,
        })),
        _ => {
            print!("{}", trace_table(&trace));
            for c in &checks.checks {
                println!("{:<20} {}", c.name, if c.passed { "ok" } else { "FAILED" });
            }
            if oracle.is_some() {
                println!("{:<20} ok", "oracle");
            }
            println!("verdict: {}", if checks.passed { "PASS" } else { "FAIL" });
        }
    }
    Ok(checks.passed)
}

fn print_report(r: &VerificationReport, format: Format) {
    if format == Format::Json {
        emit_json(r);
        return;
    }
    println!(
        "{} {} {} ({}): {} violations",
        if r.passed { "PASS" } else { "FAIL" },
        r.theorem,
        r.model,
        r.kind,
        r.violations.len()
    );
    for v in &r.violations {
        println!("  {}: {}", v.check, v.detail);
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    cli: &Cli,
    theorem: Theorem,
    kind: Kind,
    samples: Option<usize>,
    seed: Option<u64>,
    modes: &[Mode],
    format: Format,
    exec: Execution,
) -> CmdResult {
    let s = load(cli)?;
    let m = &s.model;
    match theorem {
        Theorem::AbelianMax => {
            let skind = StratificationKind::from(kind);
            let lattice = skind.lattice(m, s.caps.subgroup_order())?;
            let longest = chains(&building_set_max(&lattice))
                .iter()
                .map(|c| c.len())
                .max()
                .unwrap_or(0);
            if longest > s.caps.chain_size() {
                return Err(WonderError::CapExceeded {
                    what: "chain size",
                    cap: s.caps.chain_size(),
                }
                .into());
            }
            let modes = if modes.is_empty() {
                SuiteModes::ALL
            } else {
                SuiteModes {
                    chains: modes.contains(&Mode::Chains),
                    arcs: modes.contains(&Mode::Arcs),
                    search: modes.contains(&Mode::Search),
                }
            };
            let budget = SuiteBudget {
                samples: samples.or(s.caps.samples).unwrap_or(DEFAULT_SAMPLES),
                subgroup_order_cap: s.caps.subgroup_order(),
            };
            let r = abelian_suite(m, skind, modes, budget, seed_of(seed, &s), exec)?;
            print_report(&r, format);
            Ok(r.passed)
        }
        Theorem::SolvableMin => {
            let r = solvable_min_check(m, s.caps.subgroup_order())?;
            print_report(&r, format);
            Ok(r.passed)
        }
        Theorem::Criterion => {
            // the centers of the Y-stratification blowup
            let lattice = y_lattice(m, &y_family(m, s.caps.subgroup_order())?);
            let r = criterion_report(m, lattice.elements());
            print_report(&r, format);
            Ok(r.passed)
        }
        Theorem::Question => {
            let q = question_check(&m.group);
            if format == Format::Json {
                emit_json(&json!({ "model": m.name, "report": q }));
            } else {
                println!("{}: verdict {}", m.name, serde_json::to_value(q.verdict).expect("enum"));
                println!("group order {}, solvable {}", q.group_order, q.solvable);
                if let Some(w) = &q.witness {
                    println!("witness kernel {} (not a coordinate subspace)", w.kernel.describe());
                }
            }
            Ok(q.verdict != QuestionVerdict::Candidate)
        }
    }
}

fn cmd_scan(
    dim: usize,
    candidates: usize,
    seed: Option<u64>,
    extra: Option<&PathBuf>,
    format: Format,
    exec: Execution,
) -> CmdResult {
    let extra_sets = match extra {
        Some(p) => spec::parse_generator_sets(&read_input(p)?)?,
        None => Vec::new(),
    };
    let r = question_scan(dim, candidates, seed.unwrap_or(DEFAULT_SEED), &extra_sets, exec)?;
    if format == Format::Json {
        emit_json(&r);
    } else {
        for e in &r.extra {
            println!(
                "extra candidate {}: order {}, {}",
                e.index,
                e.group_order,
                serde_json::to_value(e.verdict).expect("enum")
            );
        }
        for n in &r.skipped {
            println!("skipped: {n}");
        }
        println!("{}", r.summary);
    }
    Ok(r.candidates.is_empty())
}

fn cmd_export_dot(cli: &Cli, kind: Kind, output: Option<&PathBuf>) -> CmdResult {
    let s = load(cli)?;
    let lattice = StratificationKind::from(kind).lattice(&s.model, s.caps.subgroup_order())?;
    let dot = lattice_dot(&s.model.name, kind_label(kind), &lattice);
    match output {
        Some(p) => std::fs::write(p, dot).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{dot}"),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match &cli.command {
        Command::Strata { kind, format } => cmd_strata(&cli, *kind, *format),
        Command::Trace {
            format,
            oracle_samples,
            seed,
        } => cmd_trace(&cli, *format, *oracle_samples, *seed, exec),
        Command::Verify {
            theorem,
            kind,
            samples,
            seed,
            modes,
            format,
        } => cmd_verify(&cli, *theorem, *kind, *samples, *seed, modes, *format, exec),
        Command::ScanQuestion {
            dim,
            candidates,
            seed,
            extra,
            format,
        } => cmd_scan(*dim, *candidates, *seed, extra.as_ref(), *format, exec),
        Command::ExportDot { kind, output } => cmd_export_dot(&cli, *kind, output.as_ref()),
    };
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_status(&result))
}

fn exit_status(result: &CmdResult) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_statuses() {
        assert_eq!(exit_status(&Ok(true)), 0);
        assert_eq!(exit_status(&Ok(false)), 1);
        assert_eq!(exit_status(&Err(Failure::Usage("x".into()))), 2);
        assert_eq!(exit_status(&Err(WonderError::Parse("x".into()).into())), 2);
    }
}
