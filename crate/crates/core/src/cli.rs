//! The `tamari` command line.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::crosssection::{cross_section, cross_section_bar, g, InternalIndex};
use crate::enumerate::Limits;
use crate::error::{Error, Result};
use crate::io::{canonical_json, Cache, EnumerationFile, Kind};
use crate::simplicial::{validate, Triangulation, TriangulationJson};
use crate::subset::format_family;
use crate::verify::{verify_enumerations, VerifyReport, DEFAULT_GRID, EXTENDED_GRID};
use crate::witness::{build_q_t, even_fullness_chain, odd_preimage};
use crate::zonotopal::{inversion_set_of, Cubillage, CubillageJson};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tamari", version, about = "Higher Bruhat orders, higher Stasheff-Tamari orders and the cross-section map g")]
pub struct Cli {
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cache directory for enumerated posets
    #[arg(long, global = true, env = "TAMARI_CACHE", default_value = ".tamari-cache")]
    pub cache_dir: PathBuf,
    /// Skip the cache entirely
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub max_elements: usize,
    #[arg(long, global = true)]
    pub max_seconds: Option<u64>,
    /// Write the main artifact here instead of stdout
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate B(n, δ+1) or S(n, δ) into the cache
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Apply g or ḡ to a cubillage and audit the characterizations
    Map {
        #[arg(long, conflicts_with = "gbar", required_unless_present = "gbar")]
        g: bool,
        #[arg(long)]
        gbar: bool,
        /// Cubillage JSON
        #[arg(long)]
        input: PathBuf,
        /// Also look the image up by internal simplices in the enumerated S(n, δ)
        #[arg(long)]
        index: bool,
    },
    /// Check that g is a quotient map of posets
    Verify {
        #[arg(long, requires = "delta")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        delta: Option<usize>,
        /// Add the extended cells to the default grid
        #[arg(long, conflicts_with = "n")]
        extend: bool,
    },
    /// Constructive pre-images and exchange schedules
    Witness {
        #[command(subcommand)]
        which: WitnessCommand,
    },
    /// Summarize a cubillage, triangulation or enumeration file
    Inspect { input: PathBuf },
    /// Render an enumerated poset as a Hasse diagram
    Export {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = true)]
        dot: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// A cubillage Q with g(Q) = T
    Surject {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        /// Triangulation JSON
        #[arg(long)]
        tri: PathBuf,
    },
    /// Exchange schedule from Q_T to Q_T' for a cover T ⋖ T' (even δ)
    Full {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
}

/// Outcome of a command: the artifact and whether it certifies success.
struct Outcome {
    body: String,
    pass: bool,
}

impl Outcome {
    fn json<T: Serialize + ?Sized>(v: &T, pass: bool) -> Result<Self> {
        Ok(Outcome { body: canonical_json(v)?, pass })
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::LimitExceeded { .. } => "limit_exceeded",
        Error::ScheduleFailed { .. } => "schedule_failed",
        Error::SearchExhausted(_) => "search_exhausted",
        Error::Internal(_) | Error::Cyclic(_) => "internal",
        Error::Io(_) => "io",
        Error::Json(_) | Error::Parse(_) => "parse",
        _ => "invalid_input",
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::InvalidParameters(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result.and_then(|o| emit(&cli, o, out)) {
        Ok(code) => code,
        Err(e) => {
            let msg = json!({"error": error_kind(&e), "message": e.to_string()});
            let _ = writeln!(err, "{msg}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn emit(cli: &Cli, o: Outcome, out: &mut dyn Write) -> Result<i32> {
    match &cli.out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, &o.body)?;
        }
        None => out.write_all(o.body.as_bytes())?,
    }
    Ok(if o.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn limits(cli: &Cli) -> Result<Limits> {
    if cli.max_elements == 0 || cli.max_seconds == Some(0) {
        return Err(Error::InvalidParameters("limits must be positive".into()));
    }
    Ok(Limits { max_elements: Some(cli.max_elements), max_time: cli.max_seconds.map(Duration::from_secs) })
}

fn check_nd(n: usize, delta: usize) -> Result<()> {
    if delta == 0 || n < delta + 1 || n > 31 {
        return Err(Error::InvalidParameters(format!("need 1 <= δ and δ+1 <= n <= 31, got n={n}, δ={delta}")));
    }
    Ok(())
}

fn enumeration_file(cli: &Cli, kind: Kind, n: usize, delta: usize) -> Result<(EnumerationFile, bool)> {
    check_nd(n, delta)?;
    let lim = limits(cli)?;
    let cache = Cache::new(&cli.cache_dir);
    if !cli.no_cache {
        if let Some(f) = cache.load(kind, n, delta)? {
            return Ok((f, true));
        }
    }
    let f = match kind {
        Kind::Bruhat => EnumerationFile::from_bruhat(&crate::zonotopal::enumerate_bruhat(n, delta + 1, &lim)?)?,
        Kind::Hst => EnumerationFile::from_hst(&crate::simplicial::enumerate_hst(n, delta, &lim)?)?,
    };
    if !cli.no_cache {
        cache.store(&f)?;
    }
    Ok((f, false))
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T> {
    let s = fs::read_to_string(p)?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn read_triangulation(p: &Path, n: Option<usize>, delta: Option<usize>) -> Result<Triangulation> {
    let t = Triangulation::from_json(&read_json::<TriangulationJson>(p)?)?;
    if n.is_some_and(|n| n != t.n()) || delta.is_some_and(|d| d != t.delta()) {
        return Err(Error::Mismatch(format!("{} is a triangulation of C({}, {})", p.display(), t.n(), t.delta())));
    }
    let report = validate(&t);
    if !report.valid {
        return Err(Error::InvalidTriangulation(report.violations.join("; ")));
    }
    Ok(t)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Enumerate { kind, n, delta, format } => cmd_enumerate(cli, *kind, *n, *delta, *format),
        Command::Map { g, input, index, .. } => cmd_map(cli, *g, input, *index),
        Command::Verify { n, delta, extend } => cmd_verify(cli, *n, *delta, *extend),
        Command::Witness { which } => cmd_witness(which),
        Command::Inspect { input } => cmd_inspect(input),
        Command::Export { kind, n, delta, .. } => cmd_export(cli, *kind, *n, *delta),
    }
}

fn cmd_enumerate(cli: &Cli, kind: Kind, n: usize, delta: usize, format: Format) -> Result<Outcome> {
    let (f, hit) = enumeration_file(cli, kind, n, delta)?;
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(&f)?;
            if cli.out.is_none() {
                // summary on stdout, full file via --out or the cache
                v = json!({
                    "kind": kind,
                    "n": n,
                    "delta": delta,
                    "elements": f.elements.len(),
                    "covers": f.poset.covers.len(),
                    "cache_hit": hit,
                    "path": if cli.no_cache { Value::Null } else { Value::from(Cache::new(&cli.cache_dir).path(kind, n, delta).display().to_string()) },
                });
            }
            Outcome::json(&v, true)
        }
        Format::Text => {
            let mut body = String::new();
            for k in &f.poset.elements {
                body.push_str(k);
                body.push('\n');
            }
            Ok(Outcome { body, pass: true })
        }
        Format::Dot => cmd_export(cli, kind, n, delta),
    }
}

fn cmd_map(cli: &Cli, use_g: bool, input: &Path, index: bool) -> Result<Outcome> {
    let q = Cubillage::from_json(&read_json::<CubillageJson>(input)?)?;
    if use_g {
        let ix = if index {
            let e = enumeration_file(cli, Kind::Hst, q.n(), q.delta())?.0.to_hst()?;
            Some(InternalIndex::new(&e))
        } else {
            None
        };
        let r = cross_section(&q, ix.as_ref())?;
        let pass = r.valid && r.agree;
        Outcome::json(&json!({"direction": "g", "source": q.to_json(true)?, "audit": r}), pass)
    } else {
        let r = cross_section_bar(&q)?;
        let pass = r.valid && r.agree;
        Outcome::json(&json!({"direction": "gbar", "source": q.to_json(true)?, "audit": r}), pass)
    }
}

fn cmd_verify(cli: &Cli, n: Option<usize>, delta: Option<usize>, extend: bool) -> Result<Outcome> {
    let cells: Vec<(usize, usize)> = match (n, delta) {
        (Some(n), Some(d)) => vec![(d, n)],
        _ => {
            let mut v = DEFAULT_GRID.to_vec();
            if extend {
                v.extend_from_slice(EXTENDED_GRID);
            }
            v
        }
    };
    let mut reports: Vec<VerifyReport> = Vec::new();
    for (d, n) in cells {
        let b = enumeration_file(cli, Kind::Bruhat, n, d)?.0.to_bruhat()?;
        let s = enumeration_file(cli, Kind::Hst, n, d)?.0.to_hst()?;
        reports.push(verify_enumerations(&b, &s)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    Outcome::json(&json!({"cells": reports, "pass": pass}), pass)
}

fn cmd_witness(which: &WitnessCommand) -> Result<Outcome> {
    match which {
        WitnessCommand::Surject { n, delta, tri } => {
            let t = read_triangulation(tri, *n, *delta)?;
            let (q, route) = if t.delta() % 2 == 0 { (build_q_t(&t)?, "U(T)") } else { (odd_preimage(&t)?, "completion") };
            let image = g(&q)?;
            let pass = image == t;
            Outcome::json(
                &json!({"route": route, "cubillage": q.to_json(true)?, "image": image, "image_matches": pass}),
                pass,
            )
        }
        WitnessCommand::Full { n, delta, from, to } => {
            let t = read_triangulation(from, *n, *delta)?;
            let u = read_triangulation(to, *n, *delta)?;
            let s = even_fullness_chain(&t, &u)?;
            s.replay()?;
            let v = json!({
                "n": t.n(),
                "delta": t.delta(),
                "flip_set": s.flip_set,
                "start": s.start.to_json(false)?,
                "end": s.end.to_json(false)?,
                "steps": s.steps,
            });
            Outcome::json(&v, true)
        }
    }
}

fn cmd_inspect(input: &Path) -> Result<Outcome> {
    let v: Value = read_json(input)?;
    let mut lines: Vec<String> = Vec::new();
    let mut pass = true;
    if v.get("format_version").is_some() {
        let f: EnumerationFile = serde_json::from_value(v)?;
        let poset = match f.kind {
            Kind::Bruhat => f.to_bruhat()?.poset,
            Kind::Hst => f.to_hst()?.poset,
        };
        lines.push(format!("enumeration {} n={} delta={}", f.kind, f.n, f.delta));
        lines.push(format!("elements {}", poset.len()));
        lines.push(format!("covers {}", poset.covers().len()));
        lines.push(format!("minimum {}", poset.key(poset.minimal_elements()[0])));
        lines.push(format!("maximum {}", poset.key(poset.maximal_elements()[0])));
    } else if v.get("spectrum").is_some() {
        let q = Cubillage::from_json(&serde_json::from_value(v)?)?;
        lines.push(format!("cubillage of Z({}, {})", q.n(), q.dim()));
        lines.push(format!("spectrum {}", q.spectrum().len()));
        lines.push(format!("internal {}", format_family(&q.internal_spectrum())));
        lines.push(format!("inversion set {}", format_family(&inversion_set_of(&q)?.members)));
        if q.dim() >= 2 {
            lines.push(format!("g {}", g(&q)?));
        }
    } else if v.get("simplices").is_some() {
        let t = Triangulation::from_json(&serde_json::from_value(v)?)?;
        let r = validate(&t);
        pass = r.valid;
        lines.push(format!("triangulation of C({}, {})", t.n(), t.delta()));
        lines.push(format!("simplices {}", t));
        lines.push(format!("internal {}", format_family(&t.internal_simplices())));
        lines.push(format!("valid {}", r.valid));
        lines.extend(r.violations);
    } else {
        return Err(Error::Parse(format!("{}: not a cubillage, triangulation or enumeration", input.display())));
    }
    let mut body = lines.join("\n");
    body.push('\n');
    Ok(Outcome { body, pass })
}

fn cmd_export(cli: &Cli, kind: Kind, n: usize, delta: usize) -> Result<Outcome> {
    let (f, _) = enumeration_file(cli, kind, n, delta)?;
    let poset = crate::poset::FinitePoset::from_json(f.poset.clone())?;
    let name = match kind {
        Kind::Bruhat => format!("B_{}_{}", n, delta + 1),
        Kind::Hst => format!("S_{n}_{delta}"),
    };
    let body = poset.to_dot(&name, &|i| poset.key(i).to_string());
    Ok(Outcome { body, pass: true })
}
