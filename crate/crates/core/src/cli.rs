//! Command-line front end: lattice JSON in, analyses and verification
//! reports out, with stable exit codes (0 pass, 1 bad input, 2 failed
//! verification) and a versioned JSON schema.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::fock::{checks, delta_coefficients, Window};
use crate::fusion::{analyze, verify_ring_axioms, FusionContext};
use crate::lattice::{validate_lattice_i64, Lattice, LatticeFile};
use crate::rep::{sector_dim, verify_sector_identities};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Cocycle,
    Ring,
    Fock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    FusionTable { verify: bool },
    Verify,
    Series,
}

/// Fully resolved invocation, detached from flag parsing.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub lattice_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub trunc: u32,
    pub max_degree: u32,
    pub verify_suites: Vec<Suite>,
}

#[derive(Parser)]
#[command(
    name = "lattice-fusion",
    about = "Module labels, fusion rules and twisted-operator checks for even lattices",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Validate a lattice and report its module-label census.
    Analyze {
        /// Lattice file: JSON {"gram": [[...]]}
        lattice_path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the full fusion table of the lattice.
    FusionTable {
        lattice_path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also run the ring-axiom suite; exit 2 unless it all passes.
        #[arg(long)]
        verify: bool,
    },
    /// Run verification suites against a lattice.
    Verify {
        lattice_path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Suites to run; defaults to all of them.
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        /// Seed for the randomized cocycle trials.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weight truncation for the operator checks (>= 1).
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        trunc: u32,
    },
    /// Print the conjugation-series coefficients c_{mn}.
    Series {
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

impl Cli {
    fn into_config(self) -> RunConfig {
        match self.command {
            CliCommand::Analyze {
                lattice_path,
                format,
            } => RunConfig {
                command: Command::Analyze,
                lattice_path: Some(lattice_path),
                format,
                seed: 0,
                trunc: 3,
                max_degree: 0,
                verify_suites: Vec::new(),
            },
            CliCommand::FusionTable {
                lattice_path,
                format,
                verify,
            } => RunConfig {
                command: Command::FusionTable { verify },
                lattice_path: Some(lattice_path),
                format,
                seed: 0,
                trunc: 3,
                max_degree: 0,
                verify_suites: Vec::new(),
            },
            CliCommand::Verify {
                lattice_path,
                format,
                suites,
                seed,
                trunc,
            } => {
                let mut verify_suites = if suites.is_empty() {
                    vec![Suite::Cocycle, Suite::Ring, Suite::Fock]
                } else {
                    suites
                };
                verify_suites.sort();
                verify_suites.dedup();
                RunConfig {
                    command: Command::Verify,
                    lattice_path: Some(lattice_path),
                    format,
                    seed,
                    trunc,
                    max_degree: 0,
                    verify_suites,
                }
            }
            CliCommand::Series { max_degree, format } => RunConfig {
                command: Command::Series,
                lattice_path: None,
                format,
                seed: 0,
                trunc: 3,
                max_degree,
                verify_suites: Vec::new(),
            },
        }
    }
}

#[derive(Serialize)]
struct CheckJson {
    name: String,
    pass: bool,
    detail: String,
}

fn report_json(rep: &Report) -> Vec<CheckJson> {
    rep.checks
        .iter()
        .map(|c| CheckJson {
            name: c.name.clone(),
            pass: c.pass,
            detail: c.detail.clone(),
        })
        .collect()
}

fn load_lattice(cfg: &RunConfig) -> Result<Lattice, String> {
    let path = cfg
        .lattice_path
        .as_ref()
        .expect("lattice-consuming command");
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let file: LatticeFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e))?;
    validate_lattice_i64(&file.gram).map_err(|e| format!("{}: {}", path.display(), e))
}

#[derive(Serialize)]
struct AnalyzeJson {
    schema: u32,
    command: &'static str,
    rank: usize,
    det: String,
    untwisted_labels: usize,
    twisted_labels: usize,
    twisted_dim: usize,
}

fn run_analyze(cfg: &RunConfig, ctx: &FusionContext) -> i32 {
    let untwisted = ctx.disc.reps.len();
    let twisted = ctx.chars.len();
    let dim = sector_dim(&ctx.group);
    match cfg.format {
        Format::Text => {
            println!("rank {}", ctx.lattice.rank());
            println!("det {}", ctx.lattice.det());
            println!("untwisted modules {}", untwisted);
            println!("twisted modules {}", twisted);
            println!("twisted dim {}", dim);
        }
        Format::Json => {
            let out = AnalyzeJson {
                schema: 1,
                command: "analyze",
                rank: ctx.lattice.rank(),
                det: ctx.lattice.det().to_string(),
                untwisted_labels: untwisted,
                twisted_labels: twisted,
                twisted_dim: dim,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
    }
    EXIT_OK
}

#[derive(Serialize)]
struct FusionTableJson {
    schema: u32,
    command: &'static str,
    labels: Vec<String>,
    table: Vec<Vec<Vec<String>>>,
    verify: Option<Vec<CheckJson>>,
}

fn run_fusion_table(cfg: &RunConfig, ctx: &FusionContext, verify: bool) -> Result<i32, String> {
    let labels = ctx.enumerate_labels();
    let table = ctx.fusion_table().map_err(|e| e.to_string())?;
    let rep = if verify {
        Some(verify_ring_axioms(ctx).map_err(|e| e.to_string())?)
    } else {
        None
    };
    match cfg.format {
        Format::Text => {
            for (i, a) in labels.iter().enumerate() {
                for (j, b) in labels.iter().enumerate() {
                    let sum: Vec<String> = table[i][j].iter().map(|l| l.to_string()).collect();
                    println!("{} x {} = {}", a, b, sum.join(" + "));
                }
            }
            if let Some(rep) = &rep {
                print!("{}", rep);
            }
        }
        Format::Json => {
            let out = FusionTableJson {
                schema: 1,
                command: "fusion-table",
                labels: labels.iter().map(|l| l.to_string()).collect(),
                table: table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|sum| sum.iter().map(|l| l.to_string()).collect())
                            .collect()
                    })
                    .collect(),
                verify: rep.as_ref().map(report_json),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
    }
    match rep {
        Some(rep) if !rep.all_pass() => Ok(EXIT_VERIFY),
        _ => Ok(EXIT_OK),
    }
}

/// The operator-identity suite over every coset of the discriminant group:
/// the matrix identities of the eta-maps, the L(-1)-derivative property,
/// Heisenberg covariance, and the commutator identity of the twisted and
/// untwisted module operators, all at the configured truncation.
fn fock_suite(lat: &Lattice, ctx: &FusionContext, trunc: u32) -> Result<Report, String> {
    let win = Window::from_i64(-4, 4);
    let alpha: Vec<i64> = {
        let mut a = vec![0i64; lat.rank()];
        a[0] = 1;
        a
    };
    let mut rep = Report::new();
    for lam in &ctx.disc.reps {
        let coords: Vec<String> = lam.coords.iter().map(|c| c.to_string()).collect();
        let tag = format!("lambda=({})", coords.join(","));
        let sub = verify_sector_identities(&ctx.group, &ctx.chars, &ctx.chars[0], lam)
            .map_err(|e| e.to_string())?;
        rep.merge(prefix_report(sub, &format!("sector identities {}", tag)));
        let sub = checks::check_l_minus1_derivative(lat, lam, trunc as i64, &win)
            .map_err(|e| e.to_string())?;
        rep.merge(prefix_report(sub, &format!("derivative {}", tag)));
        let sub =
            checks::check_heisenberg_covariance(lat, lam, &win).map_err(|e| e.to_string())?;
        rep.merge(prefix_report(sub, &format!("covariance {}", tag)));
        let sub =
            checks::check_twisted_jacobi(lat, &alpha, lam, &win).map_err(|e| e.to_string())?;
        rep.merge(prefix_report(sub, &format!("jacobi {}", tag)));
    }
    Ok(rep)
}

fn prefix_report(rep: Report, prefix: &str) -> Report {
    let mut out = Report::new();
    for mut c in rep.checks {
        c.name = format!("{}: {}", prefix, c.name);
        out.push(c);
    }
    out
}

#[derive(Serialize)]
struct VerifyJson {
    schema: u32,
    command: &'static str,
    seed: u64,
    trunc: u32,
    suites: BTreeMap<String, Vec<CheckJson>>,
    all_pass: bool,
}

fn run_verify(cfg: &RunConfig, lat: &Lattice, ctx: &FusionContext) -> Result<i32, String> {
    let mut suites: BTreeMap<String, Report> = BTreeMap::new();
    for suite in &cfg.verify_suites {
        let (name, rep) = match suite {
            Suite::Cocycle => (
                "cocycle",
                crate::cocycle::verify_cocycle_identities(
                    lat,
                    ctx.group.cocycle(),
                    1000,
                    cfg.seed,
                ),
            ),
            Suite::Ring => ("ring", verify_ring_axioms(ctx).map_err(|e| e.to_string())?),
            Suite::Fock => ("fock", fock_suite(lat, ctx, cfg.trunc)?),
        };
        suites.insert(name.to_string(), rep);
    }
    let all_pass = suites.values().all(|r| r.all_pass());
    match cfg.format {
        Format::Text => {
            for (name, rep) in &suites {
                println!("[suite {}]", name);
                print!("{}", rep);
            }
            println!("{}", if all_pass { "ALL PASS" } else { "FAILURES" });
        }
        Format::Json => {
            let out = VerifyJson {
                schema: 1,
                command: "verify",
                seed: cfg.seed,
                trunc: cfg.trunc,
                suites: suites
                    .iter()
                    .map(|(k, v)| (k.clone(), report_json(v)))
                    .collect(),
                all_pass,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Serialize)]
struct SeriesJson {
    schema: u32,
    command: &'static str,
    max_degree: u32,
    coefficients: Vec<Vec<String>>,
}

fn run_series(cfg: &RunConfig) -> i32 {
    let c = delta_coefficients(cfg.max_degree as usize);
    match cfg.format {
        Format::Text => {
            for (m, row) in c.iter().enumerate() {
                for (n, v) in row.iter().enumerate() {
                    println!("c[{}][{}] = {}", m, n, v);
                }
            }
        }
        Format::Json => {
            let out = SeriesJson {
                schema: 1,
                command: "series",
                max_degree: cfg.max_degree,
                coefficients: c
                    .iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect())
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
    }
    EXIT_OK
}

pub fn run(cfg: &RunConfig) -> i32 {
    if cfg.command == Command::Series {
        return run_series(cfg);
    }
    let lat = match load_lattice(cfg) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_INPUT;
        }
    };
    let ctx = match analyze(&lat) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_INPUT;
        }
    };
    let res = match cfg.command {
        Command::Analyze => Ok(run_analyze(cfg, &ctx)),
        Command::FusionTable { verify } => run_fusion_table(cfg, &ctx, verify),
        Command::Verify => run_verify(cfg, &lat, &ctx),
        Command::Series => unreachable!("handled above"),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_INPUT
        }
    }
}

pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into_config()),
        Err(e) => {
            // Help and version requests are success paths.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            code
        }
    }
}
