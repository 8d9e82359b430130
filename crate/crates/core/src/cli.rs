//! Command-line front end. Exit codes: 0 all identities hold, 1 a mismatch
//! was found, 2 error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::description::{fixture, parse_module_file, Module};
use crate::error::{Error, Result};
use crate::graded::{box_module_of_ideal, matlis_dual, MonomialIdeal};
use crate::oracle::{oracle_series, OracleConfig, OracleSource};
use crate::quot::quot_series;
use crate::series::TruncSeries;
use crate::verify::{check_cor, check_dtpt, check_dual, check_locfree, check_main, IdentityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "quotcount", version, about = "Euler characteristics of Quot schemes of monomial modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Truncation order N of every series.
    #[arg(long, global = true, default_value_t = 6)]
    order: usize,

    /// Largest length handled by the point-counting oracle.
    #[arg(long, global = true, default_value_t = 2)]
    n_max: usize,

    /// Primes for point counting, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
    primes: Vec<u64>,

    /// Oracle dimension cap.
    #[arg(long, global = true, default_value_t = 14)]
    cap: usize,

    #[arg(long, global = true, env = "QUOTCOUNT_WORKERS", default_value_t = 1)]
    workers: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, clap::Args)]
struct ModuleArgs {
    /// Module description file (JSON).
    #[arg(long, conflicts_with = "fixture")]
    module: Option<PathBuf>,

    /// Built-in fixture name.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quot series of the box model of A (plane partitions).
    Hilb,
    /// Quot series of a module.
    Quot {
        #[command(flatten)]
        module: ModuleArgs,
        /// Use the Matlis dual of a finite module instead.
        #[arg(long)]
        dual: bool,
    },
    /// Ext^1(M, A) as a box module.
    Ext1 {
        #[command(flatten)]
        module: ModuleArgs,
    },
    CheckMain {
        #[command(flatten)]
        module: ModuleArgs,
    },
    CheckDtpt {
        /// Curve description file.
        #[arg(long, conflicts_with = "fixture")]
        curve: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
    },
    CheckCor {
        #[command(flatten)]
        module: ModuleArgs,
        /// Partner module R*; defaults to the module itself.
        #[arg(long, conflicts_with = "dual_fixture")]
        dual: Option<PathBuf>,
        #[arg(long)]
        dual_fixture: Option<String>,
    },
    CheckDual {
        #[command(flatten)]
        module: ModuleArgs,
    },
    CheckLocfree {
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub order: usize,
    pub oracle: OracleConfig,
    pub workers: usize,
    pub format: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self> {
        for (i, &p) in cli.primes.iter().enumerate() {
            if p < 2 || cli.primes[..i].contains(&p) {
                return Err(Error::InvalidArgument(format!("primes must be distinct and at least 2, got {:?}", cli.primes)));
            }
        }
        let workers = cli.workers.max(1);
        Ok(RunConfig {
            order: cli.order,
            oracle: OracleConfig { primes: cli.primes.clone(), n_max: cli.n_max, cap: cli.cap, workers },
            workers,
            format: cli.format,
        })
    }
}

fn load(path: Option<&PathBuf>, name: Option<&str>) -> Result<Module> {
    match (path, name) {
        (Some(p), _) => parse_module_file(p),
        (None, Some(n)) => fixture(n)?.resolve(),
        (None, None) => Err(Error::InvalidArgument("pass --module FILE or --fixture NAME".into())),
    }
}

#[derive(Serialize)]
struct SeriesOutput<'a> {
    series: &'a TruncSeries,
    notes: Vec<String>,
}

enum Output {
    Series(TruncSeries, Vec<String>),
    Json(serde_json::Value, String),
    Report(IdentityReport),
}

fn module_series(m: &Module, cfg: &RunConfig, dual: bool) -> Result<(TruncSeries, Vec<String>)> {
    let boxes = m.box_module(cfg.order.max(1))?;
    if dual {
        let d = matlis_dual(&boxes)?;
        return Ok((quot_series(&d, cfg.order)?, vec!["Matlis dual, order-ideal enumeration".into()]));
    }
    if boxes.is_multiplicity_free() {
        return Ok((quot_series(&boxes, cfg.order)?, vec!["order-ideal enumeration".into()]));
    }
    let pres = m.presentation()?;
    let s = oracle_series(OracleSource::Cokernel(&pres), cfg.order, &cfg.oracle)?;
    Ok((s, vec![format!("point counts over {:?}, value at p = 1, clipped at n = {}", cfg.oracle.primes, cfg.oracle.n_max.min(cfg.order))]))
}

fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Output> {
    Ok(match &cli.command {
        Command::Hilb => {
            let a = box_module_of_ideal(&MonomialIdeal::unit_ideal(), cfg.order.max(1))?;
            Output::Series(quot_series(&a, cfg.order)?, vec!["plane partitions by order-ideal enumeration".into()])
        }
        Command::Quot { module, dual } => {
            let m = load(module.module.as_ref(), module.fixture.as_deref())?;
            let (s, notes) = module_series(&m, cfg, *dual)?;
            Output::Series(s, notes)
        }
        Command::Ext1 { module } => {
            let m = load(module.module.as_ref(), module.fixture.as_deref())?;
            let e = m.ext1(cfg.order.max(1))?;
            let mut table = format!("{} boxes, {:?}\n", e.len(), e.truncation());
            for b in e.boxes() {
                table.push_str(&format!("  {:?} color {} slot {}\n", b.weight, b.color, b.slot));
            }
            Output::Json(serde_json::to_value(&e).expect("box modules serialize"), table)
        }
        Command::CheckMain { module } => {
            let m = load(module.module.as_ref(), module.fixture.as_deref())?;
            Output::Report(check_main(&m, cfg.order, &cfg.oracle)?)
        }
        Command::CheckDtpt { curve, fixture } => {
            let m = load(curve.as_ref(), fixture.as_deref())?;
            let profile = m
                .curve_profile()
                .ok_or_else(|| Error::InvalidArgument("check-dtpt needs a description of kind \"curve\"".into()))?;
            Output::Report(check_dtpt(profile, cfg.order)?)
        }
        Command::CheckCor { module, dual, dual_fixture } => {
            let r = load(module.module.as_ref(), module.fixture.as_deref())?;
            let rstar = if dual.is_some() || dual_fixture.is_some() {
                load(dual.as_ref(), dual_fixture.as_deref())?
            } else {
                r.clone()
            };
            Output::Report(check_cor(&r, &rstar)?.report)
        }
        Command::CheckDual { module } => {
            let m = load(module.module.as_ref(), module.fixture.as_deref())?;
            Output::Report(check_dual(&m.box_module(cfg.order.max(1))?, cfg.workers)?)
        }
        Command::CheckLocfree { rank } => Output::Report(check_locfree(*rank, cfg.order)?),
    })
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| execute(&cli, &cfg).map(|o| (cfg, o)));
    let (cfg, output) = match result {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let (text, code) = match output {
        Output::Series(s, notes) => match cfg.format {
            Format::Json => (serde_json::to_string_pretty(&SeriesOutput { series: &s, notes }).expect("series serialize"), 0),
            Format::Table => (format!("{s}"), 0),
        },
        Output::Json(v, table) => match cfg.format {
            Format::Json => (serde_json::to_string_pretty(&v).expect("json values serialize"), 0),
            Format::Table => (table.trim_end().to_string(), 0),
        },
        Output::Report(r) => {
            let code = if r.matches { 0 } else { 1 };
            match cfg.format {
                Format::Json => (r.to_json(), code),
                Format::Table => (r.to_string().trim_end().to_string(), code),
            }
        }
    };
    if writeln!(out, "{text}").is_err() {
        return 2;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("quotcount").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn hilb_default() {
        let (code, out, _) = call(&["hilb", "--format", "table"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1 + q + 3q^2 + 6q^3 + 13q^4 + 24q^5 + 48q^6 + O(q^7)");
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(call(&["nonsense"]).0, 2);
        assert_eq!(call(&["quot"]).0, 2);
        let (code, _, err) = call(&["check-main", "--fixture", "bad-hd2"]);
        assert_eq!(code, 2);
        assert!(err.contains("hd exceeds 1"));
        assert_eq!(call(&["hilb", "--primes", "2,2,3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn check_commands() {
        assert_eq!(call(&["check-dtpt", "--fixture", "line", "--order", "5"]).0, 0);
        assert_eq!(call(&["check-locfree", "--rank", "2", "--order", "4"]).0, 0);
        assert_eq!(call(&["check-cor", "--fixture", "rank2-R"]).0, 0);
        assert_eq!(call(&["check-dual", "--fixture", "fat-point"]).0, 0);
        assert_eq!(call(&["check-main", "--fixture", "rank2-R", "--order", "2"]).0, 0);
        assert_eq!(call(&["check-dtpt", "--fixture", "rank2-R"]).0, 2);
    }

    #[test]
    fn cor_mismatch_exit_code() {
        let (code, out, _) = call(&["check-cor", "--fixture", "rank2-R", "--dual-fixture", "free-r2"]);
        assert_eq!(code, 1, "{out}");
    }
}
