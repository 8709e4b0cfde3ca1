use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use quon_core::check::{Tolerance, DEFAULT_FLOAT_TOLERANCE};
use quon_core::number::solve_series_coefficients;
use quon_core::{Deformation, FockSpace, JLevel, Scalar, Surd};
use quonlab::config::resolve_q_list;
use quonlab::eval::Context;
use quonlab::export;
use quonlab::{parse_identity_for, run_plan, BackendKind, QList, RunConfig};

#[derive(Parser)]
#[command(
    name = "quonlab",
    version,
    about = "Verify quon algebra identities on truncated Fock spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites over the q list.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides output.report_json.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Overrides output.summary.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Overrides the float tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check one identity, e.g. "comm[Jp, Jm] == 2*J0".
    Check {
        /// Twice the level j.
        #[arg(long = "j")]
        twice_j: u32,
        /// `p/q` for the exact backend, a decimal for the float one.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        backend: Option<BackendKind>,
        #[arg(long, default_value_t = DEFAULT_FLOAT_TOLERANCE)]
        tol: f64,
        expression: String,
    },
    /// Print the Gram matrix of one sector.
    Gram {
        #[arg(long = "j")]
        twice_j: u32,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        backend: Option<BackendKind>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Solve the number-operator series coefficients through order K.
    Coeffs {
        #[arg(long)]
        order: usize,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long)]
        backend: Option<BackendKind>,
    },
    /// Print the Clebsch-Gordan table of j1 ⊗ j2.
    Cg {
        #[arg(long = "j1")]
        twice_j1: u32,
        #[arg(long = "j2")]
        twice_j2: u32,
    },
}

fn single_q(text: &str, backend: Option<BackendKind>) -> Result<QList> {
    Ok(resolve_q_list(&[text], backend)?)
}

fn run(
    config: PathBuf,
    report: Option<PathBuf>,
    summary: Option<PathBuf>,
    tol: Option<f64>,
) -> Result<bool> {
    let mut cfg = RunConfig::load(&config)?;
    if tol.is_some() {
        cfg.tolerance = tol;
    }
    let mut plan = cfg.validate()?;
    plan.output.report_json = report.or(plan.output.report_json);
    plan.output.summary = summary.or(plan.output.summary);
    let rep = run_plan(&plan);
    let text = rep.to_text();
    print!("{}", text);
    if let Some(path) = &plan.output.report_json {
        std::fs::write(path, rep.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &plan.output.summary {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(rep.all_passed())
}

fn check_with<S: quon_core::SqrtScalar + std::fmt::Display>(
    level: JLevel,
    q: S,
    nmax: usize,
    text: &str,
    tol: Tolerance,
) -> Result<bool> {
    let identity = parse_identity_for(text, level).map_err(|e| {
        let caret = caret_line(text, e.at.line, e.at.column);
        anyhow::anyhow!("{}\n{}", e, caret)
    })?;
    let ctx = Context::new(FockSpace::new(level, nmax, Deformation::new(q)?))?;
    let c = ctx.check(&identity, tol)?;
    println!("{}  {}", if c.passed { "PASS" } else { "FAIL" }, identity);
    for s in &c.sectors {
        println!(
            "  sector {}: residual {:.3e}{}",
            s.sector,
            s.residual.abs(),
            if s.exact_zero { " (exact zero)" } else { "" }
        );
    }
    Ok(c.passed)
}

fn caret_line(text: &str, line: usize, column: usize) -> String {
    let src = text.lines().nth(line - 1).unwrap_or("");
    format!("  {}\n  {}^", src, " ".repeat(column.saturating_sub(1)))
}

fn check(
    twice_j: u32,
    q: &str,
    nmax: usize,
    backend: Option<BackendKind>,
    tol: f64,
    text: &str,
) -> Result<bool> {
    let level = JLevel::new(twice_j);
    match single_q(q, backend)? {
        QList::Exact(v) => check_with(
            level,
            Surd::from_rational(&v[0]),
            nmax,
            text,
            Tolerance::Exact,
        ),
        QList::Float(v) => check_with(level, v[0], nmax, text, Tolerance::Relative(tol)),
    }
}

fn gram(
    twice_j: u32,
    q: &str,
    n: usize,
    backend: Option<BackendKind>,
    format: Format,
) -> Result<()> {
    let level = JLevel::new(twice_j);
    fn emit<S: Scalar + std::fmt::Display>(s: &FockSpace<S>, n: usize, format: Format) {
        match format {
            Format::Csv => print!("{}", export::gram_csv(s, n)),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&export::gram_json(s, n)).expect("json")
            ),
        }
    }
    match single_q(q, backend)? {
        QList::Exact(v) => emit(
            &FockSpace::new(level, n, Deformation::new(v[0].clone())?),
            n,
            format,
        ),
        QList::Float(v) => emit(
            &FockSpace::new(level, n, Deformation::new(v[0])?),
            n,
            format,
        ),
    }
    Ok(())
}

fn coeffs(order: usize, q: &str, backend: Option<BackendKind>) -> Result<()> {
    if order == 0 {
        bail!("order must be at least 1");
    }
    let table = match single_q(q, backend)? {
        QList::Exact(v) => export::coefficients_json(&solve_series_coefficients(
            order,
            &Deformation::new(v[0].clone())?,
        )?),
        QList::Float(v) => {
            export::coefficients_json(&solve_series_coefficients(order, &Deformation::new(v[0])?)?)
        }
    };
    println!("{}", serde_json::to_string_pretty(&table)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            report,
            summary,
            tol,
        } => run(config, report, summary, tol),
        Command::Check {
            twice_j,
            q,
            nmax,
            backend,
            tol,
            expression,
        } => check(twice_j, &q, nmax, backend, tol, &expression),
        Command::Gram {
            twice_j,
            q,
            n,
            backend,
            format,
        } => gram(twice_j, &q, n, backend, format).map(|_| true),
        Command::Coeffs { order, q, backend } => coeffs(order, &q, backend).map(|_| true),
        Command::Cg { twice_j1, twice_j2 } => {
            println!(
                "{}",
                serde_json::to_string_pretty(&export::cg_json(twice_j1, twice_j2)).expect("json")
            );
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
