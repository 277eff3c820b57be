use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use fqhyper::bounds::{self, BoundsError};
use fqhyper::geometry::GeometryError;
use fqhyper::groebner::DEFAULT_DEGREE_CAP;
use fqhyper::projgeom::{LinearSubspace, ProjPoint};
use fqhyper::search::{self, FamilySpec, SearchError, SearchJob, SearchSummary};
use fqhyper::{Field, Hypersurface};
use serde_json::{json, Value};

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_CONTRADICTION: u8 = 4;
const EXIT_QUARANTINE: u8 = 5;

/// Hypersurfaces over finite fields: counts, bounds, tangent sections and searches.
#[derive(Parser)]
#[command(name = "fqhyper", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Shard {
    index: u64,
    count: u64,
}

impl FromStr for Shard {
    type Err = String;
    fn from_str(s: &str) -> Result<Shard, String> {
        let (i, n) = s.split_once('/').ok_or("expected i/S")?;
        let index: u64 = i.trim().parse().map_err(|_| "bad shard index")?;
        let count: u64 = n.trim().parse().map_err(|_| "bad shard count")?;
        if count == 0 || index >= count {
            return Err(format!("shard index must satisfy 0 <= i < S, got {index}/{count}"));
        }
        Ok(Shard { index, count })
    }
}

/// Inclusive range `a..b`, a list `a,b,c`, or a single value.
#[derive(Clone, Debug)]
struct Values(Vec<u64>);

impl FromStr for Values {
    type Err = String;
    fn from_str(s: &str) -> Result<Values, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad number {t:?}"));
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err("empty range".into());
            }
            return Ok(Values((a..=b).collect()));
        }
        s.split(',').map(num).collect::<Result<_, _>>().map(Values)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one hypersurface.
    Analyze {
        /// Polynomial file (`-` for stdin).
        file: PathBuf,
        #[arg(long)]
        field: String,
        /// Fail with a precondition error if X is singular.
        #[arg(long)]
        require_nonsingular: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// theta(n, d, q) for odd n >= 3.
    Theta {
        n: u32,
        d: u32,
        q: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Bound table over a parameter grid. Values of q that are not prime
    /// powers are skipped.
    Table {
        #[arg(long)]
        n: Values,
        #[arg(long)]
        d: Values,
        #[arg(long)]
        q: Values,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run or resume a family search.
    Search {
        /// Family JSON file.
        family: PathBuf,
        #[arg(long, default_value_t = 0)]
        threshold: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "0/1")]
        shard: Shard,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 20)]
        checkpoint_every: u64,
        /// Worker threads (0: all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u32,
        /// Stop after this many candidates of the shard (resumable).
        #[arg(long)]
        halt_after: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Merge shard outputs into the output of an unsharded run.
    Merge {
        /// Shard record files; summaries are read from `<file>.summary.json`.
        #[arg(required = true)]
        parts: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Plane-pencil statistics around a line of a threefold in P^4.
    Pencil {
        file: PathBuf,
        #[arg(long)]
        field: String,
        /// Two points spanning the line, e.g. `--line (1:0:0:0:0) --line (0:1:0:0:0)`.
        #[arg(long, num_args = 1, required = true)]
        line: Vec<String>,
        /// Point of the line used for epsilon.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a built-in family as JSON (`flagship` or `quadrics`).
    Family { name: String },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl std::fmt::Display) -> Failure {
    Failure { code, message: message.to_string() }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Failure {
        let code = match e {
            GeometryError::Poly(_) | GeometryError::NotHomogeneous | GeometryError::ZeroPolynomial => EXIT_PARSE,
            _ => EXIT_PRECONDITION,
        };
        fail(code, e)
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Failure {
        let code = match e {
            SearchError::Family(_) | SearchError::Json(_) => EXIT_PARSE,
            _ => EXIT_PRECONDITION,
        };
        fail(code, e)
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| fail(EXIT_PRECONDITION, e))
    } else {
        std::fs::read_to_string(path).map_err(|e| fail(EXIT_PRECONDITION, format!("{}: {e}", path.display())))
    }
}

fn parse_field(s: &str) -> Result<Field, Failure> {
    s.parse().map_err(|e| fail(EXIT_PARSE, format!("field {s:?}: {e}")))
}

fn load(file: &Path, field: &str) -> Result<Hypersurface, Failure> {
    let f = parse_field(field)?;
    let text = read_input(file)?;
    Hypersurface::parse(&f, text.trim(), None).map_err(Failure::from)
}

fn to_json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn analyze(file: &Path, field: &str, require_nonsingular: bool, format: Format) -> Result<u8, Failure> {
    let x = load(file, field)?;
    let f = x.field().clone();
    let (report, contradiction) = match bounds::report(&x) {
        Ok(r) => (r, None),
        Err(BoundsError::Contradiction { report, reason }) => (*report, Some(reason)),
        Err(BoundsError::Geometry(e)) => return Err(e.into()),
        Err(e) => return Err(fail(EXIT_PRECONDITION, e)),
    };
    if require_nonsingular && !report.nonsingular {
        return Err(fail(EXIT_PRECONDITION, "hypersurface is singular"));
    }
    let sections: Vec<Value> = x
        .tangent_sections()
        .iter()
        .map(|r| {
            json!({
                "point": r.point.format(&f),
                "is_cone": r.is_cone,
                "order": r.order,
                "cone_base": r.cone_base.as_ref().map(|y| y.poly().to_string()),
                "cone_base_count": r.cone_base_count(),
                "cone_base_nonsingular": r.cone_base.as_ref().map(|_| r.cone_base_nonsingular().unwrap_or(false)),
            })
        })
        .collect();
    let lines: Vec<Vec<String>> = x
        .lines_in()
        .iter()
        .map(|l| l.rows().iter().map(|r| ProjPoint::new(&f, r.clone()).expect("nonzero row").format(&f)).collect())
        .collect();
    let out = json!({
        "input": {
            "field": f.to_string(),
            "polynomial": x.poly().to_string(),
            "ambient_dim": x.ambient_dim(),
            "degree": x.degree(),
        },
        "report": report,
        "contradiction": contradiction,
        "tangent_sections": sections,
        "thas_invariant": report.thas_invariant,
        "lines": lines,
    });
    match format {
        Format::Json => println!("{}", to_json_string(&out)),
        _ => {
            let mut s = String::new();
            let opt = |v: &Value| if v.is_null() { "n/a".to_string() } else { v.to_string() };
            let r = &out["report"];
            writeln!(s, "X: {} = 0 in P^{} over F_{}", x.poly(), x.ambient_dim(), f.order()).unwrap();
            writeln!(s, "points: {}", report.point_count).unwrap();
            writeln!(s, "nonsingular: {}", report.nonsingular).unwrap();
            writeln!(s, "thas invariant: {}", report.thas_invariant).unwrap();
            writeln!(s, "theta: {} (equality: {})", opt(&r["theta"]), opt(&r["theta_equality"])).unwrap();
            writeln!(s, "k-bound: {}", opt(&r["k_bound"])).unwrap();
            writeln!(s, "elementary bound: {}", report.elementary_bound).unwrap();
            let cones = sections.iter().filter(|v| v["is_cone"] == true).count();
            writeln!(s, "cone points: {cones} of {}", sections.len()).unwrap();
            writeln!(s, "lines: {}", lines.len()).unwrap();
            if let Some(c) = &contradiction {
                writeln!(s, "CONTRADICTION: {c}").unwrap();
            }
            print!("{s}");
        }
    }
    Ok(if contradiction.is_some() { EXIT_CONTRADICTION } else { 0 })
}

fn theta_cmd(n: u32, d: u32, q: u64, format: Format) -> Result<u8, Failure> {
    let v = bounds::theta(n, d, q).map_err(|e| fail(EXIT_PRECONDITION, e))?;
    match format {
        Format::Json => println!("{}", json!({ "n": n, "d": d, "q": q, "theta": bounds::BigCount(v) })),
        _ => println!("{v}"),
    }
    Ok(0)
}

fn table(ns: &[u64], ds: &[u64], qs: &[u64], format: Format) -> Result<u8, Failure> {
    let mut rows = Vec::new();
    for &n in ns {
        for &d in ds {
            for &q in qs {
                if fqhyper::field::prime_power(q).is_none() {
                    continue;
                }
                let (n, d) = (n as u32, d as u32);
                let theta = bounds::theta(n, d, q).ok();
                let k0 = bounds::k_bound(n, d, q, 0).map_err(|e| fail(EXIT_PRECONDITION, e))?;
                let el = bounds::elementary_bound(n, d, q).map_err(|e| fail(EXIT_PRECONDITION, e))?;
                rows.push((n, d, q, theta, k0, el));
            }
        }
    }
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .into_iter()
                .map(|(n, d, q, t, k0, el)| {
                    json!({
                        "n": n, "d": d, "q": q,
                        "theta": t.map(bounds::BigCount),
                        "k_bound_0": bounds::BigCount(k0),
                        "elementary_bound": bounds::BigCount(el),
                    })
                })
                .collect();
            println!("{}", to_json_string(&Value::Array(v)));
        }
        _ => {
            println!("n,d,q,theta,k_bound_0,elementary_bound");
            for (n, d, q, t, k0, el) in rows {
                println!("{n},{d},{q},{},{k0},{el}", t.map(|t| t.to_string()).unwrap_or_default());
            }
        }
    }
    Ok(0)
}

fn summary_path(records: &Path) -> PathBuf {
    let mut s = records.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

fn print_summary(s: &SearchSummary, format: Format) {
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(s).expect("serializable"));
        return;
    }
    let c = &s.counters;
    println!(
        "shard={}/{} complete={} candidates={} rejected_stage1_count={} rejected_rational_singular={} \
         rejected_groebner_singular={} quarantined={} extremal={} exceptional={} singular_over_f_q={} \
         singular_over_f_q2={} singular_over_f_q3={} fingerprint={}",
        s.shard_index,
        s.shard_count,
        s.complete,
        c.candidates,
        c.rejected_stage1_count,
        c.rejected_rational_singular,
        c.rejected_groebner_singular,
        c.quarantined,
        c.extremal,
        c.exceptional,
        c.singular_found_over[0],
        c.singular_found_over[1],
        c.singular_found_over[2],
        s.fingerprint
    );
}

fn finish(s: &SearchSummary, out: &Path, format: Format) -> Result<u8, Failure> {
    search::write_summary(&summary_path(out), s)?;
    print_summary(s, format);
    Ok(if s.counters.quarantined > 0 { EXIT_QUARANTINE } else { 0 })
}

fn read_family(path: &Path) -> Result<FamilySpec, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("family file: {e}")))
}

fn pencil(file: &Path, field: &str, line: &[String], point: Option<&str>, format: Format) -> Result<u8, Failure> {
    let x = load(file, field)?;
    let f = x.field().clone();
    if line.len() != 2 {
        return Err(fail(EXIT_PARSE, "--line must be given exactly twice"));
    }
    let pts =
        line.iter().map(|s| ProjPoint::parse(&f, s).map_err(|e| fail(EXIT_PARSE, e))).collect::<Result<Vec<_>, _>>()?;
    let l = LinearSubspace::span_points(&f, &pts).map_err(|e| fail(EXIT_PARSE, e))?;
    let designated = point.map(|s| ProjPoint::parse(&f, s).map_err(|e| fail(EXIT_PARSE, e))).transpose()?;
    let stats = x.pencil_stats(&l, designated.as_ref())?;
    let nonsingular = x.is_nonsingular()?;
    let cone_points = x.cone_points().len();
    let hypotheses = nonsingular && x.degree() as u64 <= x.q() && cone_points == 0;
    let mut v = stats.to_json(&f);
    v["nonsingular"] = json!(nonsingular);
    v["cone_points"] = json!(cone_points);
    v["bound_hypotheses_hold"] = json!(hypotheses);
    let violated = hypotheses && !(stats.within_omega_bound() && stats.within_sigma_bound());
    match format {
        Format::Json => println!("{}", to_json_string(&v)),
        _ => {
            println!("line: {} {}", v["line"][0], v["line"][1]);
            println!("delta: {}", stats.delta);
            println!("omega: {} (bound {})", stats.omega, stats.omega_bound());
            println!("sigma: {} (bound {})", stats.sigma, stats.sigma_bound());
            println!("epsilon: {} at {}", stats.epsilon, stats.designated.format(&f));
            println!("bound hypotheses hold: {hypotheses}");
        }
    }
    Ok(if violated { EXIT_CONTRADICTION } else { 0 })
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { file, field, require_nonsingular, format } => {
            analyze(&file, &field, require_nonsingular, format)
        }
        Command::Theta { n, d, q, format } => theta_cmd(n, d, q, format),
        Command::Table { n, d, q, format } => table(&n.0, &d.0, &q.0, format),
        Command::Search {
            family,
            threshold,
            out,
            shard,
            checkpoint,
            checkpoint_every,
            threads,
            degree_cap,
            halt_after,
            format,
        } => {
            let mut job = SearchJob::new(read_family(&family)?, threshold, &out);
            job.shard_index = shard.index;
            job.shard_count = shard.count;
            job.checkpoint = checkpoint;
            job.checkpoint_every = checkpoint_every;
            job.threads = threads;
            job.degree_cap = degree_cap;
            job.halt_after = halt_after;
            let s = search::run(&job)?;
            finish(&s, &out, format)
        }
        Command::Merge { parts, out, format } => {
            let shards = parts
                .iter()
                .map(|p| Ok((search::read_summary(&summary_path(p))?, p.clone())))
                .collect::<Result<Vec<_>, SearchError>>()?;
            let s = search::merge(&shards, &out)?;
            finish(&s, &out, format)
        }
        Command::Pencil { file, field, line, point, format } => pencil(&file, &field, &line, point.as_deref(), format),
        Command::Family { name } => {
            let spec = match name.as_str() {
                "flagship" => FamilySpec::flagship(),
                "quadrics" => FamilySpec::quadrics(),
                other => return Err(fail(EXIT_PARSE, format!("unknown family {other:?}"))),
            };
            println!("{}", serde_json::to_string_pretty(&spec).expect("serializable"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
