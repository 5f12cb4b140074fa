//! `eulerwedge` command-line front end.

mod cmd;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use eulerwedge::causal::Space;
use eulerwedge::par::Execution;

use cmd::model::Demo;
use input::{Context, InputError};
use report::{render, render_text, Report, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "eulerwedge", version, about = "Euler elements, wedge orders and standard subspaces")]
struct Cli {
    /// Seed for every randomized search and sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, env = "EULERWEDGE_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Tolerance for integrality of ad-eigenvalues.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eigen_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Run independent cases on the thread pool.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Euler nodes of an irreducible root system.
    Classify {
        #[arg(long)]
        family: String,
        /// A rank or an inclusive range `A-B`.
        #[arg(long)]
        rank: String,
    },
    /// Grading, involution and ideal report for an element of a Lie algebra.
    Analyze {
        /// `builtin:NAME` or a TOML file.
        #[arg(long)]
        algebra: String,
        /// Comma-separated coordinates; repeat for a batch.
        #[arg(long, required = true, allow_hyphen_values = true)]
        h: Vec<String>,
    },
    #[command(subcommand)]
    Cone(ConeCmd),
    #[command(subcommand)]
    Wedge(WedgeCmd),
    #[command(subcommand)]
    Geom(GeomCmd),
    #[command(subcommand)]
    Stdsp(StdspCmd),
    #[command(subcommand)]
    Net(NetCmd),
    /// Grid models at two resolutions.
    Model {
        #[arg(value_enum)]
        model: Model,
        #[arg(long = "N", alias = "n", default_value_t = 256)]
        n: usize,
        #[arg(long, value_enum)]
        demo: Demo,
        /// Half-width of the affine window.
        #[arg(long, default_value_t = eulerwedge::models::AFF_HALF_WIDTH)]
        half_width: f64,
    },
    /// Compare the classification against the embedded tables.
    Tables {
        #[arg(long, default_value = "eulelts2,symmeuler")]
        check: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    U1,
    Aff,
}

#[derive(Subcommand)]
enum ConeCmd {
    /// Membership of a point in a cone file.
    Member {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Graded parts of an invariant cone.
    Parts {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
}

#[derive(Subcommand)]
enum WedgeCmd {
    Act { input: PathBuf },
    Dual { input: PathBuf },
    Leq { input: PathBuf },
}

#[derive(Subcommand)]
enum GeomCmd {
    WedgeMember {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    Positivity {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    Compress {
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Minkowski,
    DeSitter,
}

#[derive(Subcommand)]
enum StdspCmd {
    FromModular { input: PathBuf },
    ToModular { input: PathBuf },
    Complement { input: PathBuf },
    Intersect { input: PathBuf },
    Tensor { input: PathBuf },
}

#[derive(Subcommand)]
enum NetCmd {
    Hmax { scene: PathBuf },
    Hmin { scene: PathBuf },
    Report { scene: PathBuf },
}

fn dispatch(ctx: &mut Context, command: &Command) -> cmd::Outcome {
    match command {
        Command::Classify { family, rank } => cmd::classify::run(ctx, family, rank),
        Command::Analyze { algebra, h } => cmd::analyze::run(ctx, algebra, h),
        Command::Cone(ConeCmd::Member { cone, x }) => cmd::cone::member(ctx, cone, x),
        Command::Cone(ConeCmd::Parts { cone, algebra, h }) => cmd::cone::parts(ctx, cone, algebra, h),
        Command::Wedge(WedgeCmd::Act { input }) => cmd::wedge::act(ctx, input),
        Command::Wedge(WedgeCmd::Dual { input }) => cmd::wedge::dual(ctx, input),
        Command::Wedge(WedgeCmd::Leq { input }) => cmd::wedge::leq(ctx, input),
        Command::Geom(GeomCmd::WedgeMember { x }) => cmd::geom::wedge_member(x),
        Command::Geom(GeomCmd::Flow { x, t }) => cmd::geom::flow_point(x, *t),
        Command::Geom(GeomCmd::Positivity { space, x }) => {
            let space = match space {
                SpaceArg::Minkowski => Space::Minkowski,
                SpaceArg::DeSitter => Space::DeSitter,
            };
            cmd::geom::positivity(space, x)
        }
        Command::Geom(GeomCmd::Compress { g, samples }) => cmd::geom::compress(ctx, g, *samples),
        Command::Stdsp(StdspCmd::FromModular { input }) => cmd::stdsp::from_modular(ctx, input),
        Command::Stdsp(StdspCmd::ToModular { input }) => cmd::stdsp::to_modular(ctx, input),
        Command::Stdsp(StdspCmd::Complement { input }) => cmd::stdsp::complement(ctx, input),
        Command::Stdsp(StdspCmd::Intersect { input }) => cmd::stdsp::intersect(ctx, input),
        Command::Stdsp(StdspCmd::Tensor { input }) => cmd::stdsp::tensor_product(ctx, input),
        Command::Net(NetCmd::Hmax { scene }) => cmd::net::hmax(ctx, scene),
        Command::Net(NetCmd::Hmin { scene }) => cmd::net::hmin(ctx, scene),
        Command::Net(NetCmd::Report { scene }) => cmd::net::report(ctx, scene),
        Command::Model { model: Model::U1, n, demo, .. } => cmd::model::u1(*n, *demo),
        Command::Model { model: Model::Aff, n, demo, half_width } => cmd::model::aff(*n, *half_width, *demo),
        Command::Tables { check } => cmd::tables::run(check),
    }
}

/// Exit code for a failed command: 2 for malformed input or I/O, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    let input = err.chain().any(|e| {
        e.is::<InputError>() || e.is::<std::io::Error>() || e.is::<serde_json::Error>() || e.is::<toml::de::Error>()
    });
    if input {
        2
    } else {
        1
    }
}

/// Stable code: `IoError`, `ParseError`, or the variant name of the innermost error.
fn error_code(err: &anyhow::Error) -> String {
    if err.chain().any(|e| e.is::<std::io::Error>()) {
        return "IoError".into();
    }
    if err.chain().any(|e| e.is::<InputError>() || e.is::<serde_json::Error>() || e.is::<toml::de::Error>()) {
        return "ParseError".into();
    }
    let debug = format!("{:?}", err.root_cause());
    let code: String = debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
    if code.is_empty() {
        "Error".into()
    } else {
        code
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let command: Vec<String> = argv.iter().skip(1).cloned().collect();
    let mut ctx = Context {
        seed: cli.seed,
        tol: cli.tol,
        eigen_tol: cli.eigen_tol,
        exec: if cli.parallel { Execution::Parallel } else { Execution::Sequential },
        inputs: Vec::new(),
    };
    match dispatch(&mut ctx, &cli.command) {
        Ok((results, code)) => {
            let text = match cli.format {
                Format::Text => cmd::classify::text_table(&results).unwrap_or_else(|| render_text(&results)),
                Format::Json => {
                    let report = Report {
                        inputs_digest: report::digest(&command, &ctx.inputs),
                        command,
                        results,
                        tolerances: json!({ "tol": ctx.tol, "eigen_tol": ctx.eigen_tol }),
                        seed: ctx.seed,
                    };
                    render(&report.to_value())
                }
            };
            print!("{text}");
            ExitCode::from(code)
        }
        Err(err) => {
            let code = exit_code(&err);
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "error": { "code": error_code(&err), "message": format!("{err:#}"), "exit_code": code },
                "version": env!("CARGO_PKG_VERSION"),
            });
            print!("{}", render(&v));
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
