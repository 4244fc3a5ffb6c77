//! The `hodge` command line: single integrals, series tables and the
//! verification suites.

pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hodge_core::arith::bernoulli;
use hodge_core::closed::{c_closed_series, C_closed};
use hodge_core::hodge::{HodgeEngine, HodgeKey};
use hodge_core::intersect::KappaPsiKey;
use hodge_core::localize::C_localized;
use hodge_core::series::{KPoly, Series};
use hodge_core::{Error, Rat};

use report::{render, Check, Format, SuiteReport};
use suites::{expand, run_suite, Bounds, Suite};

/// Stack for evaluation threads; the reductions recurse deeply at high genus.
pub const STACK_BYTES: usize = 256 << 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hodge",
    version,
    about = "Exact Hodge integrals and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Worker threads for verify suites.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,

    /// Leave elapsed times out of reports.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Load cached integrals from PATH before running and write them back after.
    #[arg(long, global = true, value_name = "PATH")]
    cache_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bernoulli numbers B_m with B_1 = -1/2.
    Bern {
        indices: Vec<usize>,
        /// Print B_0 through B_N.
        #[arg(long, value_name = "N")]
        upto: Option<usize>,
    },
    /// ψ intersection number <τ_k1 ... τ_kn>_g.
    Psi {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        exps: Vec<u32>,
    },
    /// Integral of κ classes (relative dualizing) against ψ classes.
    Kappa {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        exps: Vec<u32>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        kappas: Vec<u32>,
    },
    /// Hodge integral of ψ and λ classes; `--lambdas 1,1,1` is λ_1^3.
    Hodge {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        psi: Vec<u32>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        lambdas: Vec<u32>,
    },
    /// Generating series through t^ORDER.
    Series {
        #[arg(value_enum)]
        which: SeriesKind,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// ξ for `fxi`.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        xi: i64,
    },
    /// Multiple-cover contribution C(g, d).
    Cover {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        degree: i64,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Option<Suite>,
        #[arg(long = "suite", value_enum, conflicts_with = "suite")]
        suite_flag: Option<Suite>,
        #[arg(long)]
        max_genus: Option<u32>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        order: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    /// f_0 from engine integrals.
    F0,
    /// F(t, k) from engine integrals.
    #[value(name = "F")]
    BigF,
    /// Σ c_g t^{2g} from Bernoulli numbers.
    C,
    /// f_ξ from engine integrals.
    Fxi,
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(s, || execute(cli, out, err))
            .expect("spawn evaluation thread")
            .join()
            .expect("evaluation thread panicked")
    })
}

fn execute(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32 {
    let engine = HodgeEngine::new();
    let result = load_cache(&engine, cli.cache_file.as_deref())
        .and_then(|()| dispatch(&cli, &engine))
        .and_then(|(text, ok)| {
            if let Some(path) = &cli.cache_file {
                save_cache(&engine, path)?;
            }
            Ok((text, ok))
        });
    match result {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn load_cache(e: &HodgeEngine, path: Option<&Path>) -> Result<(), Failure> {
    let Some(path) = path else { return Ok(()) };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(io) if io.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(io) => return Err(Failure::Usage(format!("{}: {io}", path.display()))),
    };
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || {
            Failure::Usage(format!(
                "{}:{}: malformed cache line",
                path.display(),
                n + 1
            ))
        };
        let (key, value) = line.split_once('\t').ok_or_else(bad)?;
        let value: Rat = value.trim().parse().map_err(|_| bad())?;
        e.import_entry(key, value).map_err(|_| bad())?;
    }
    Ok(())
}

fn save_cache(e: &HodgeEngine, path: &Path) -> Result<(), Failure> {
    let mut text = String::new();
    for (k, v) in e.export_cache() {
        text.push_str(&format!("{k}\t{v}\n"));
    }
    fs::write(path, text).map_err(|io| Failure::Usage(format!("{}: {io}", path.display())))
}

/// A single computed value in the requested format.
fn value_output(format: Format, key: &str, v: &Rat) -> String {
    match format {
        Format::Text => format!("{v}\n"),
        Format::Json => format!(
            "{}\n",
            serde_json::json!({ "key": key, "value": v.to_string() })
        ),
        Format::Csv => csv_table(&["key", "value"], [[key.to_string(), v.to_string()]]),
    }
}

fn csv_table<R, const N: usize>(header: &[&str; N], rows: R) -> String
where
    R: IntoIterator<Item = [String; N]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn dispatch(cli: &Cli, e: &HodgeEngine) -> Result<(String, bool), Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Bern { indices, upto } => {
            let mut idx = indices.clone();
            if let Some(n) = upto {
                idx.extend(0..=*n);
            }
            if idx.is_empty() {
                return Err(Failure::Usage("give at least one index or --upto".into()));
            }
            let vals = idx
                .iter()
                .map(|&m| Ok((m, bernoulli(m)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let text = match fmt {
                Format::Text => vals.iter().map(|(_, v)| format!("{v}\n")).collect(),
                Format::Json => {
                    let arr: Vec<_> = vals
                        .iter()
                        .map(|(m, v)| serde_json::json!({ "m": m, "value": v.to_string() }))
                        .collect();
                    format!("{}\n", serde_json::Value::Array(arr))
                }
                Format::Csv => csv_table(
                    &["m", "value"],
                    vals.iter().map(|(m, v)| [m.to_string(), v.to_string()]),
                ),
            };
            Ok((text, true))
        }
        Command::Psi { genus, exps } => {
            let v = e.intersector().psi(*genus, exps)?;
            let key = HodgeKey::new(*genus, exps.clone(), vec![], vec![])?;
            Ok((value_output(fmt, &key.to_string(), &v), true))
        }
        Command::Kappa {
            genus,
            exps,
            kappas,
        } => {
            let key = KappaPsiKey::new(*genus, exps.clone(), kappas.clone())?;
            let v = e.intersector().kappa_psi_integral(&key);
            Ok((value_output(fmt, &key.to_string(), &v), true))
        }
        Command::Hodge {
            genus,
            psi,
            lambdas,
        } => {
            let v = e.hodge(*genus, psi, lambdas)?;
            let mut l = lambdas.clone();
            l.sort_unstable_by(|a, b| b.cmp(a));
            let key = format!(
                "{genus}|psi:{}|lambda:{}",
                join(&sorted_desc(psi)),
                join(&l)
            );
            Ok((value_output(fmt, &key, &v), true))
        }
        Command::Series { which, order, xi } => series_output(e, *which, *order, *xi, fmt),
        Command::Cover { genus, degree } => {
            let closed = C_closed(*genus, *degree)?;
            let local = C_localized(e, *genus, *degree)?;
            let key = format!("C({genus},{degree})");
            if closed != local {
                let report = SuiteReport {
                    suite: "cover".into(),
                    checks: vec![Check::new(key, local, closed)],
                    elapsed_ms: None,
                };
                return Ok((render(&[report], fmt), false));
            }
            Ok((value_output(fmt, &key, &local), true))
        }
        Command::Verify {
            suite,
            suite_flag,
            max_genus,
            max_degree,
            order,
        } => {
            let suite = suite
                .or(*suite_flag)
                .ok_or_else(|| Failure::Usage("name a suite, e.g. `verify all`".into()))?;
            let bounds = Bounds {
                max_genus: *max_genus,
                max_degree: *max_degree,
                order: *order,
            };
            let reports = expand(suite)
                .into_iter()
                .map(|s| run_suite(s, bounds, e, cli.threads as usize, !cli.no_timing))
                .collect::<Result<Vec<_>, Error>>()?;
            let ok = reports.iter().all(|r| r.passed());
            Ok((render(&reports, fmt), ok))
        }
    }
}

fn sorted_desc(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn series_output(
    e: &HodgeEngine,
    which: SeriesKind,
    order: usize,
    xi: i64,
    fmt: Format,
) -> Result<(String, bool), Failure> {
    let genus = (order / 2) as u32;
    if which != SeriesKind::C && genus == 0 {
        return Err(Failure::Usage("order must be at least 2".into()));
    }
    // engine series stop at an even power; an odd order gets one more zero
    let pad = |s: Series| -> Result<Series, Failure> {
        let mut c = s.coeffs().to_vec();
        c.resize(order + 1, Rat::zero());
        Ok(Series::new(c)?)
    };
    let plain = match which {
        SeriesKind::F0 => Some(pad(e.capped_lambda_series(0, genus)?)?),
        SeriesKind::Fxi => Some(pad(e.capped_lambda_series(xi, genus)?)?),
        SeriesKind::C => Some(c_closed_series(order)?),
        SeriesKind::BigF => None,
    };
    if let Some(s) = plain {
        let text = match fmt {
            Format::Json => format!("{}\n", serde_json::to_string(&s).expect("series serialize")),
            Format::Text => s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| format!("t^{i}\t{c}\n"))
                .collect(),
            Format::Csv => csv_table(
                &["power", "coeff"],
                s.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| [i.to_string(), c.to_string()]),
            ),
        };
        return Ok((text, true));
    }
    let f = e.f_table(genus)?;
    let mut rows: Vec<KPoly> = f.coeffs().to_vec();
    rows.resize(order + 1, KPoly::zero());
    let text = match fmt {
        Format::Json => format!(
            "{}\n",
            serde_json::json!({ "order": order, "coeffs": rows })
        ),
        Format::Text => rows
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let cs: Vec<String> = p.coeffs().iter().map(Rat::to_string).collect();
                format!("t^{i}\t[{}]\n", cs.join(", "))
            })
            .collect(),
        Format::Csv => csv_table(
            &["power", "k_degree", "coeff"],
            rows.iter().enumerate().flat_map(|(i, p)| {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(move |(j, c)| [i.to_string(), j.to_string(), c.to_string()])
            }),
        ),
    };
    Ok((text, true))
}
