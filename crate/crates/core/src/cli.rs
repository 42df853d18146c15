//! The `hyperposet` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::rational_string;
use crate::bounds::bounds_table;
use crate::error::{Error, Result};
use crate::extremal::{ex_exact_cached, la_exact_cached, ExOptions, LaOptions, ResultCache};
use crate::family::{lubell, shifted_lubell, SetFamily};
use crate::hypermatrix::HyperMatrix;
use crate::poset::{dimension, enumerate_patterns, realizer_to_matrix, DimensionLimits, Poset};
use crate::verify::{run_all, run_suite, Suite, SuiteReport, VerifyOptions};

/// Version of the JSON output layout.
pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "hyperposet", version, about = "Forbidden subposets, forbidden hypermatrices and exact small cases")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for memoized exact results.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Allow exhaustive searches beyond the default size caps.
    #[arg(long, global = true)]
    cap_override: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a poset given as a JSON file or a built-in name (chain:3, diamond, ...).
    Poset {
        #[command(subcommand)]
        action: PosetAction,
    },
    /// All 2-dimensional matrix patterns of a poset.
    Patterns {
        #[arg(long)]
        poset: String,
    },
    /// Exact ex_d for a forbidden matrix or a set of them.
    Ex(ExArgs),
    /// Exact La(n, P) or La#(n, P).
    La {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poset: String,
        #[arg(long, value_enum, default_value_t = Mode::Weak)]
        mode: Mode,
    },
    /// Lubell function of a family, or its shifted variant.
    Lubell {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        shifted: Option<usize>,
    },
    /// Table of upper-bound coefficients for a poset.
    Bounds {
        #[arg(long)]
        poset: String,
    },
    /// Run self-check suites.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum PosetAction {
    Info { poset: String },
    Matrix { poset: String },
    Dimension { poset: String },
}

#[derive(Args, Debug)]
struct ExArgs {
    /// Side lengths, e.g. 3,3 or 2,2,2.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Matrix JSON file, or identity:k for the k x ... x k identity.
    #[arg(long, conflicts_with = "pattern_set", required_unless_present = "pattern_set")]
    pattern: Option<String>,
    /// Directory of matrix JSON files, or poset:<p> for all patterns of a poset.
    #[arg(long)]
    pattern_set: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Weak,
    Induced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Countp,
    Counta,
    Doublecount,
    Lw,
    Blocks,
    Mt,
    TardosDiamond,
}

/// A command's result: the JSON body and its TSV rendering.
struct Output {
    json: Value,
    tsv: Vec<Vec<String>>,
    failed: bool,
}

impl Output {
    fn ok(json: Value, tsv: Vec<Vec<String>>) -> Self {
        Output { json, tsv, failed: false }
    }
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 when a verification fails, 2 on usage errors and malformed input.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let text = match cli.format {
                Format::Json => {
                    let mut body = json!({ "schema": SCHEMA });
                    if let (Value::Object(dst), Value::Object(src)) = (&mut body, o.json) {
                        dst.extend(src);
                    }
                    serde_json::to_string_pretty(&body).expect("values serialize") + "\n"
                }
                Format::Tsv => o.tsv.iter().map(|r| r.join("\t") + "\n").collect(),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            if o.failed {
                let _ = writeln!(err, "verification failed; see the counterexample in the output");
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Poset { action } => poset_cmd(action),
        Command::Patterns { poset } => patterns_cmd(poset),
        Command::Ex(args) => ex_cmd(cli, args),
        Command::La { n, poset, mode } => la_cmd(cli, *n, poset, *mode),
        Command::Lubell { family, shifted } => lubell_cmd(family, *shifted),
        Command::Bounds { poset } => bounds_cmd(poset),
        Command::Verify { suite, trials } => verify_cmd(cli, *suite, *trials),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// A poset from a JSON file if the argument names one, else a built-in.
fn load_poset(arg: &str) -> Result<Poset> {
    let path = Path::new(arg);
    if path.is_file() {
        with_path(path, read(path)?.parse())
    } else {
        Poset::builtin(arg)
    }
}

fn load_matrix(path: &Path) -> Result<HyperMatrix> {
    with_path(path, read(path)?.parse())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn matrix_rows(m: &HyperMatrix) -> Vec<String> {
    m.ones()
        .map(|c| c.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect()
}

fn poset_cmd(action: &PosetAction) -> Result<Output> {
    match action {
        PosetAction::Info { poset } => {
            let p = load_poset(poset)?;
            let height = p.height()?;
            let incomparable = p.incomparable_pairs().len();
            let file = p.to_file();
            let tsv = vec![
                vec!["elements".into(), p.len().to_string()],
                vec!["height".into(), height.to_string()],
                vec!["relations".into(), p.relation_count().to_string()],
                vec!["incomparable_pairs".into(), incomparable.to_string()],
                vec!["chain".into(), p.is_chain().to_string()],
            ];
            Ok(Output::ok(
                json!({
                    "command": "poset info",
                    "poset": file,
                    "elements": p.len(),
                    "height": height,
                    "relations": p.relation_count(),
                    "incomparable_pairs": incomparable,
                    "chain": p.is_chain(),
                }),
                tsv,
            ))
        }
        PosetAction::Dimension { poset } | PosetAction::Matrix { poset } => {
            let p = load_poset(poset)?;
            let (d, r) = dimension(&p, DimensionLimits::default())?;
            let labelled = r.labelled(&p);
            let mut tsv = vec![vec!["dimension".into(), d.to_string()]];
            tsv.extend(labelled.iter().map(|o| {
                let mut row = vec!["order".to_string()];
                row.extend(o.iter().cloned());
                row
            }));
            let mut body = json!({
                "command": "poset dimension",
                "dimension": d,
                "realizer": labelled,
            });
            if matches!(action, PosetAction::Matrix { .. }) {
                let m = realizer_to_matrix(&p, &r)?;
                tsv.push({
                    let mut row = vec!["ones".to_string()];
                    row.extend(matrix_rows(&m));
                    row
                });
                body["command"] = json!("poset matrix");
                body["matrix"] = to_value(&m);
            }
            Ok(Output::ok(body, tsv))
        }
    }
}

fn patterns_cmd(poset: &str) -> Result<Output> {
    let p = load_poset(poset)?;
    let pats = enumerate_patterns(&p, 2)?;
    let tsv = pats
        .iter()
        .map(|m| {
            let mut row = vec![format!("{}x{}", m.dims()[0], m.dims()[1])];
            row.extend(matrix_rows(m));
            row
        })
        .collect();
    Ok(Output::ok(
        json!({"command": "patterns", "count": pats.len(), "patterns": pats}),
        tsv,
    ))
}

fn cache(cli: &Cli) -> Result<Option<ResultCache>> {
    if cli.no_cache {
        return Ok(None);
    }
    let dir = match &cli.cache_dir {
        Some(d) => d.clone(),
        None => {
            let base = std::env::var_os("XDG_CACHE_HOME")
                .map(PathBuf::from)
                .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")));
            match base {
                Some(b) => b.join("hyperposet"),
                None => return Ok(None),
            }
        }
    };
    ResultCache::new(dir).map(Some)
}

fn load_patterns(args: &ExArgs) -> Result<Vec<HyperMatrix>> {
    let d = args.dims.len();
    if let Some(spec) = &args.pattern {
        if let Some(k) = spec.strip_prefix("identity:") {
            let k = k
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad size in {spec:?}")))?;
            return Ok(vec![HyperMatrix::identity(k, d)?]);
        }
        return Ok(vec![load_matrix(Path::new(spec))?]);
    }
    let spec = args.pattern_set.as_deref().expect("clap requires one of the two");
    if let Some(p) = spec.strip_prefix("poset:") {
        return enumerate_patterns(&load_poset(p)?, d);
    }
    let dir = Path::new(spec);
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidArgument(format!("{}: no .json pattern files", dir.display())));
    }
    files.iter().map(|f| load_matrix(f)).collect()
}

fn ex_cmd(cli: &Cli, args: &ExArgs) -> Result<Output> {
    let patterns = load_patterns(args)?;
    let opts = ExOptions {
        cap_override: cli.cap_override,
        ..Default::default()
    };
    let cache = cache(cli)?;
    let (res, _) = ex_exact_cached(cache.as_ref(), &args.dims, &patterns, opts)?;
    let mut row = vec![res.value.to_string()];
    row.extend(matrix_rows(&res.witness));
    Ok(Output::ok(
        json!({
            "command": "ex",
            "dims": args.dims,
            "patterns": patterns.len(),
            "value": res.value,
            "witness": res.witness,
        }),
        vec![row],
    ))
}

fn la_cmd(cli: &Cli, n: usize, poset: &str, mode: Mode) -> Result<Output> {
    let p = load_poset(poset)?;
    let induced = mode == Mode::Induced;
    let opts = LaOptions {
        cap_override: cli.cap_override,
        ..Default::default()
    };
    let cache = cache(cli)?;
    let (res, _) = la_exact_cached(cache.as_ref(), n, &p, induced, opts)?;
    let members = res.witness.members();
    let mut row = vec![res.value.to_string()];
    row.extend(members.iter().map(|s| format!("{{{}}}", s.iter().map(usize::to_string).collect::<Vec<_>>().join(","))));
    Ok(Output::ok(
        json!({
            "command": "la",
            "n": n,
            "mode": if induced { "induced" } else { "weak" },
            "poset": p.to_file(),
            "value": res.value,
            "witness": res.witness,
        }),
        vec![row],
    ))
}

fn lubell_cmd(path: &Path, shifted: Option<usize>) -> Result<Output> {
    let f: SetFamily = with_path(path, read(path)?.parse())?;
    let v = match shifted {
        Some(d) => shifted_lubell(&f, d)?,
        None => lubell(&f),
    };
    let s = rational_string(&v);
    Ok(Output::ok(
        json!({"command": "lubell", "n": f.n(), "members": f.len(), "shift": shifted, "value": s}),
        vec![vec![s]],
    ))
}

fn bounds_cmd(poset: &str) -> Result<Output> {
    let p = load_poset(poset)?;
    let table = bounds_table(&p, DimensionLimits::default())?;
    let mut tsv = vec![vec!["name".into(), "parameter".into(), "coefficient".into(), "note".into()]];
    tsv.extend(table.entries.iter().map(|e| {
        vec![
            e.name.clone(),
            e.parameter.clone().unwrap_or_default(),
            e.coefficient.clone(),
            e.note.clone().unwrap_or_default(),
        ]
    }));
    let mut body = to_value(&table);
    body["command"] = json!("bounds");
    Ok(Output::ok(body, tsv))
}

fn verify_cmd(cli: &Cli, suite: SuiteArg, trials: Option<usize>) -> Result<Output> {
    let opts = VerifyOptions {
        seed: cli.seed,
        trials,
        cap_override: cli.cap_override,
    };
    let reports: Vec<SuiteReport> = match suite {
        SuiteArg::All => run_all(&opts)?,
        other => {
            let name = other
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string();
            vec![run_suite(name.parse::<Suite>()?, &opts)?]
        }
    };
    let passed = reports.iter().all(|r| r.passed);
    let tsv = reports
        .iter()
        .map(|r| {
            vec![
                r.suite.clone(),
                if r.passed { "pass" } else { "FAIL" }.to_string(),
                r.checks.to_string(),
                r.failures.to_string(),
            ]
        })
        .collect();
    Ok(Output {
        json: json!({"command": "verify", "seed": cli.seed, "passed": passed, "suites": reports}),
        tsv,
        failed: !passed,
    })
}
