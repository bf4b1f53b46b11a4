//! `whirl`: build and verify whirling knight's tour artefacts from the shell.
//!
//! Exit codes: 0 for a positive answer (valid, feasible, found), 1 for a
//! definite negative, 2 for usage or data errors. Summaries are printed as
//! `key=value` lines; JSON documents go to `--out`, or to stdout when no
//! output path is given (the summary then moves to stderr).

use clap::{Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use whirl_core::render::{self, Format};
use whirl_core::tours::{Progress, TourJson};
use whirl_core::{
    build_digraph, build_n3_certificate, build_t1, build_t2, check_reduction, lp_feasible, search_tour,
    verify_certificate, verify_tour, FarkasCertificate, SearchOptions, WhirlError,
};

#[derive(Parser)]
#[command(name = "whirl", version, about = "Whirling knight's tours: certificates, LP decisions, search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the whirling digraph and write it as JSON.
    Digraph {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build or verify a Farkas certificate.
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
    /// Decide feasibility of the cycle-cover LP at coil count c.
    Lp {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        c: i64,
    },
    /// Search for or verify a whirling tour.
    Tour {
        #[command(subcommand)]
        action: TourAction,
    },
    /// Draw a digraph, certificate, tour or cover file (or an empty board).
    Render {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    T1,
    T2,
    N3,
    File,
}

#[derive(Subcommand)]
enum CertAction {
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<i64>,
        /// Override the certificate's coil count.
        #[arg(long)]
        c: Option<i64>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TourAction {
    Search {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        coil: Option<i64>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

type CmdResult = Result<ExitCode, WhirlError>;

fn read(path: &Path) -> Result<String, WhirlError> {
    fs::read_to_string(path).map_err(|e| WhirlError::Parse(format!("{}: {e}", path.display())))
}

/// Write a document to `out`, or to stdout when absent; returns where summaries should go.
fn emit(doc: &str, out: Option<&Path>) -> Result<Summary, WhirlError> {
    match out {
        Some(p) => {
            fs::write(p, format!("{doc}\n")).map_err(|e| WhirlError::Parse(format!("{}: {e}", p.display())))?;
            Ok(Summary::Stdout)
        }
        None => {
            println!("{doc}");
            Ok(Summary::Stderr)
        }
    }
}

#[derive(Clone, Copy)]
enum Summary {
    Stdout,
    Stderr,
}

impl Summary {
    fn line(self, s: &str) {
        match self {
            Summary::Stdout => println!("{s}"),
            Summary::Stderr => eprintln!("{s}"),
        }
    }
}

fn require_n(n: Option<i64>) -> Result<i64, WhirlError> {
    n.ok_or_else(|| WhirlError::Parse("--n is required for this family".into()))
}

fn certificate_for(family: Family, n: Option<i64>, input: Option<&Path>) -> Result<FarkasCertificate, WhirlError> {
    match family {
        Family::T1 => build_t1(require_n(n)?),
        Family::T2 => build_t2(require_n(n)?),
        Family::N3 => Ok(build_n3_certificate()),
        Family::File => {
            let path = input.ok_or_else(|| WhirlError::Parse("--in is required for --family file".into()))?;
            FarkasCertificate::from_json(&read(path)?)
        }
    }
}

fn cmd_digraph(n: i64, out: Option<&Path>) -> CmdResult {
    let g = build_digraph(n)?;
    let summary = emit(&g.to_json(), out)?;
    summary.line(&format!("n={} vertices={} arcs={}", n, g.vertex_count(), g.arcs().len()));
    Ok(ExitCode::SUCCESS)
}

fn cmd_cert(action: CertAction) -> CmdResult {
    match action {
        CertAction::Build { family, n, out } => {
            let cert = certificate_for(family, n, None)?;
            let summary = emit(&cert.to_json(), out.as_deref())?;
            summary.line(&format!("n={} c={} gamma={} rhs={}", cert.n, cert.c, cert.gamma, cert.rhs()));
            Ok(ExitCode::SUCCESS)
        }
        CertAction::Verify { family, n, c, input } => {
            let mut cert = certificate_for(family, n, input.as_deref())?;
            if let Some(c) = c {
                cert.c = c;
            }
            let g = build_digraph(cert.n)?;
            let report = verify_certificate(&g, &cert)?;
            let max_lhs = report.max_lhs.map_or("none".to_string(), |m| m.to_string());
            println!(
                "n={} c={} valid={} rhs={} max_lhs={} violations={}",
                cert.n,
                cert.c,
                report.valid,
                report.rhs,
                max_lhs,
                report.violations.len()
            );
            for (arc, lhs) in &report.violations {
                println!(
                    "violation arc={} u={},{} v={},{} w={} lhs={}",
                    arc.id, arc.tail.i, arc.tail.j, arc.head.i, arc.head.j, arc.w, lhs
                );
            }
            Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn cmd_lp(n: i64, c: i64) -> CmdResult {
    let g = build_digraph(n)?;
    let decision = lp_feasible(&g, c)?;
    println!("{}", decision.to_json());
    Ok(if decision.feasible { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn worker_threads() -> usize {
    std::env::var("WHIRL_THREADS").ok().and_then(|s| s.parse().ok()).filter(|&t| t >= 1).unwrap_or(1)
}

fn cmd_tour(action: TourAction) -> CmdResult {
    match action {
        TourAction::Search { n, coil, budget, seed, out } => {
            let g = build_digraph(n)?;
            let sink = |p: Progress| eprintln!("progress {p}");
            let opts = SearchOptions {
                coil_target: coil,
                budget,
                seed,
                threads: worker_threads(),
                progress_every: 1_000_000,
                progress: Some(&sink),
            };
            let outcome = search_tour(&g, &opts)?;
            match outcome.tour {
                Some(tour) => {
                    debug_assert!(check_reduction(&g, &tour)?);
                    let summary = emit(&tour.to_json(n), out.as_deref())?;
                    summary.line(&format!("found=true coil={} nodes={}", tour.coil, outcome.nodes));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("found=false nodes={} exhausted={}", outcome.nodes, outcome.exhausted);
                    Ok(ExitCode::from(1))
                }
            }
        }
        TourAction::Verify { input } => {
            let doc = TourJson::parse(&read(&input)?)?;
            let g = build_digraph(doc.n)?;
            match verify_tour(&g, &doc.cells()) {
                Ok(tour) => {
                    let reduction = check_reduction(&g, &tour)?;
                    let agrees = tour.coil == doc.coil;
                    println!(
                        "valid={} coil={} declared_coil={} reduction={}",
                        agrees && reduction,
                        tour.coil,
                        doc.coil,
                        reduction
                    );
                    Ok(if agrees && reduction { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                Err(WhirlError::InvalidTour(why)) => {
                    println!("valid=false reason=\"{why}\"");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn cmd_render(input: Option<&Path>, n: Option<i64>, format: &str, out: Option<&Path>) -> CmdResult {
    let format: Format = format.parse()?;
    let panels = match (input, n) {
        (Some(path), _) => render::panels_from_json(&read(path)?)?,
        (None, Some(n)) => render::board_panels(n),
        (None, None) => return Err(WhirlError::Parse("render needs --in or --n".into())),
    };
    let text = render::render(&panels, format)?;
    match out {
        Some(p) => fs::write(p, &text).map_err(|e| WhirlError::Parse(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Digraph { n, out } => cmd_digraph(n, out.as_deref()),
        Command::Cert { action } => cmd_cert(action),
        Command::Lp { n, c } => cmd_lp(n, c),
        Command::Tour { action } => cmd_tour(action),
        Command::Render { input, n, format, out } => cmd_render(input.as_deref(), n, &format, out.as_deref()),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
