//! Command implementations for the `adlv` binary. Every command returns its
//! complete output as a string so that results are byte-for-byte
//! reproducible and easy to test.

mod class_spec;
mod svg;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use adlv_core::affine_weyl::AffElt;
use adlv_core::hecke_cocenter::{poly_to_json, CacheFile};
use adlv_core::linalg::fmt_rat;
use adlv_core::root_datum::{preset_names, ExplicitDatum};
use adlv_core::selfcheck::{Criterion, Selfcheck, Window};
use adlv_core::{
    adlv::csv_header, AdlvEngine, AdlvReport, CocenterEngine, ConjClass, Error, Limits, PivotRule,
    Result, RootDatum, SigmaClass,
};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

pub use class_spec::parse_class_spec;

#[derive(Parser, Debug)]
#[command(
    name = "adlv",
    version,
    about = "Affine Deligne-Lusztig varieties via class polynomials"
)]
pub struct Cli {
    /// Named root datum, e.g. SL3, PGL2, C2, GL4, A2-sc.
    #[arg(short = 'p', long, global = true)]
    pub preset: Option<String>,
    /// Root datum given as an explicit JSON file.
    #[arg(long, global = true, conflicts_with = "preset")]
    pub datum: Option<PathBuf>,
    /// Maximal length of enumerated elements.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Bound on the free part of the Kottwitz invariant.
    #[arg(long, global = true, default_value_t = 0)]
    pub kappa_window: i64,
    /// Bound on <ν, 2ρ> for enumerated σ-conjugacy classes.
    #[arg(long, global = true)]
    pub nu_bound: Option<usize>,
    /// JSON-lines cache of class polynomials, read and extended.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Maximal number of reduction nodes.
    #[arg(long, global = true)]
    pub limit_nodes: Option<u64>,
    /// Maximal number of memoized class decompositions.
    #[arg(long, global = true)]
    pub limit_memo: Option<usize>,
    /// canonical, reversed, or seeded:N.
    #[arg(long, global = true, default_value = "canonical", value_parser = PivotRule::from_str)]
    pub pivot: PivotRule,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the available presets.
    Presets,
    /// Conjugacy classes with minimal length at most --max-len.
    Classes {
        /// Only straight classes with <ν, 2ρ> at most --nu-bound.
        #[arg(long)]
        straight: bool,
    },
    /// Class polynomials of one element.
    Classpoly { element: String },
    /// Dimension report for X_w(b).
    Adlv {
        element: String,
        /// `kappa=[..] nu=[..]`, `basic kappa=[..]` or `of <element>`.
        class: String,
    },
    /// Reports for every w with ℓ(w) ≤ --max-len and every b in the window.
    Scan {
        /// Restrict to one class b.
        #[arg(long)]
        class: Option<String>,
    },
    /// Rank-2 alcove picture of X_w(b) for all w up to --max-len.
    Svg { class: String },
    /// Run the cross-check suites.
    Selfcheck {
        /// Comma-separated criteria, e.g. C1,C4.
        #[arg(long, value_delimiter = ',', value_parser = Criterion::from_str)]
        only: Vec<Criterion>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// What the binary prints and the status it exits with.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, status: 0 }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

const DEFAULT_MAX_LEN: usize = 4;

impl Cli {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(n) = self.limit_nodes {
            l.max_nodes = n;
        }
        if let Some(n) = self.limit_memo {
            l.max_memo_entries = n;
        }
        l
    }

    fn max_len(&self) -> usize {
        self.max_len.unwrap_or(DEFAULT_MAX_LEN)
    }

    fn nu_bound(&self) -> usize {
        self.nu_bound.unwrap_or_else(|| self.max_len())
    }

    fn datum(&self) -> Result<RootDatum> {
        match (&self.preset, &self.datum) {
            (Some(p), _) => RootDatum::preset(p),
            (None, Some(path)) => {
                ExplicitDatum::from_json(&std::fs::read_to_string(path)?)?.build()
            }
            (None, None) => Err(Error::Precondition("give --preset or --datum".into())),
        }
    }

    fn engine(&self) -> Result<AdlvEngine> {
        let d = Arc::new(self.datum()?);
        let cocenter = CocenterEngine::for_datum(d, self.limits(), self.pivot);
        Ok(AdlvEngine::new(Arc::new(cocenter)))
    }

    fn require_format(&self, allowed: &[Format]) -> Result<()> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "format {:?} is not available for this command",
                self.format
            )))
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Error::Precondition("--jobs must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Presets => Ok(Output::ok(preset_names().join("\n") + "\n")),
        Command::Classes { straight } => cmd_classes(cli, *straight).map(Output::ok),
        Command::Classpoly { element } => cmd_classpoly(cli, element).map(Output::ok),
        Command::Adlv { element, class } => cmd_adlv(cli, element, class).map(Output::ok),
        Command::Scan { class } => cmd_scan(cli, class.as_deref()).map(Output::ok),
        Command::Svg { class } => cmd_svg(cli, class).map(Output::ok),
        Command::Selfcheck { only } => cmd_selfcheck(cli, only),
    }
}

fn kappa_json(k: &[i64]) -> Value {
    k.iter().copied().collect()
}

fn nu_strings(c: &ConjClass) -> Vec<String> {
    c.invariant.newton.0.iter().map(fmt_rat).collect()
}

fn cmd_classes(cli: &Cli, straight: bool) -> Result<String> {
    cli.require_format(&[Format::Json, Format::Csv])?;
    let e = cli.engine()?;
    let reg = e.registry();
    let classes = if straight {
        reg.straight_classes(cli.nu_bound(), cli.kappa_window)?
    } else {
        reg.enumerate_classes(cli.max_len(), cli.kappa_window)?
    };
    Ok(match cli.format {
        Format::Csv => {
            let mut out = String::from("id,length,kappa,nu,straight\n");
            for c in &classes {
                let k: Vec<String> = c.invariant.kappa.0.iter().map(i64::to_string).collect();
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.id,
                    c.min_length,
                    k.join(" "),
                    nu_strings(c).join(" "),
                    c.straight
                )
                .unwrap();
            }
            out
        }
        _ => {
            let rows: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "length": c.min_length,
                        "kappa": kappa_json(&c.invariant.kappa.0),
                        "nu": nu_strings(c),
                        "straight": c.straight,
                    })
                })
                .collect();
            pretty(&Value::Array(rows))
        }
    })
}

/// Indented JSON, except that arrays of scalars (and arrays of those, such
/// as polynomial term lists) stay on one line.
fn pretty(v: &Value) -> String {
    let mut out = String::new();
    write_json(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| {
            !x.is_object()
                && (!x.is_array()
                    || x.as_array()
                        .unwrap()
                        .iter()
                        .all(|y| !y.is_array() && !y.is_object()))
        }),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_json(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_json(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// Cache bound to one engine: preloads on open, appends on save.
struct Cache {
    file: Option<CacheFile>,
}

impl Cache {
    fn open(cli: &Cli, e: &AdlvEngine) -> Result<Self> {
        let Some(path) = &cli.cache else {
            return Ok(Cache { file: None });
        };
        let d = e.datum();
        let file = CacheFile::open(path, d.hash())?;
        for (key, polys) in file.entries() {
            let w = d
                .parse_element(key)
                .map_err(|err| Error::Integrity(format!("cache key {key:?}: {err}")))?;
            e.cocenter().preload(&w, polys)?;
        }
        Ok(Cache { file: Some(file) })
    }

    fn save(&mut self, e: &AdlvEngine, elements: &[AffElt]) -> Result<()> {
        let Some(file) = &mut self.file else {
            return Ok(());
        };
        let mut sorted: Vec<&AffElt> = elements.iter().collect();
        sorted.sort();
        sorted.dedup();
        let decs = sorted
            .into_iter()
            .map(|w| e.cocenter().class_polynomials(w))
            .collect::<Result<Vec<_>>>()?;
        file.append(e.datum(), &decs)?;
        Ok(())
    }
}

fn cmd_classpoly(cli: &Cli, element: &str) -> Result<String> {
    cli.require_format(&[Format::Json, Format::Csv])?;
    let e = cli.engine()?;
    let d = e.datum().clone();
    let mut cache = Cache::open(cli, &e)?;
    let w = d.parse_element(element)?;
    let dec = e.cocenter().class_polynomials(&w)?;
    cache.save(&e, std::slice::from_ref(&w))?;
    Ok(match cli.format {
        Format::Csv => {
            let mut out = String::from("class_id,len_O,kappa,nu,f\n");
            for (id, t) in &dec.terms {
                let k: Vec<String> = t
                    .class
                    .invariant
                    .kappa
                    .0
                    .iter()
                    .map(i64::to_string)
                    .collect();
                writeln!(
                    out,
                    "{id},{},{},{},{}",
                    t.class.min_length,
                    k.join(" "),
                    nu_strings(&t.class).join(" "),
                    t.poly
                )
                .unwrap();
            }
            out
        }
        _ => {
            let terms: Vec<Value> = dec
                .terms
                .iter()
                .map(|(id, t)| {
                    json!({
                        "class_id": id,
                        "len_O": t.class.min_length,
                        "kappa": kappa_json(&t.class.invariant.kappa.0),
                        "nu": nu_strings(&t.class),
                        "f": poly_to_json(&t.poly),
                        "f_text": t.poly.to_string(),
                    })
                })
                .collect();
            pretty(&json!({
                "w": d.encode(&w),
                "length": d.length(&w),
                "datum_hash": d.hash(),
                "terms": terms,
            }))
        }
    })
}

fn emit_reports(cli: &Cli, reports: &[AdlvReport]) -> String {
    match cli.format {
        Format::Csv => {
            let mut out = String::from(csv_header());
            out.push('\n');
            for r in reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
        _ => {
            if let [r] = reports {
                pretty(&r.to_json())
            } else {
                pretty(&Value::Array(
                    reports.iter().map(AdlvReport::to_json).collect(),
                ))
            }
        }
    }
}

fn cmd_adlv(cli: &Cli, element: &str, class: &str) -> Result<String> {
    cli.require_format(&[Format::Json, Format::Csv])?;
    let e = cli.engine()?;
    let mut cache = Cache::open(cli, &e)?;
    let w = e.datum().parse_element(element)?;
    let b = parse_class_spec(&e, class)?;
    let r = e.full_report(&w, &b)?;
    cache.save(&e, std::slice::from_ref(&w))?;
    Ok(emit_reports(cli, &[r]))
}

/// Classes `b` of a scan: the given one, or every class whose straight
/// representative has `<ν, 2ρ> ≤ nu_bound` within the κ-window.
fn scan_classes(cli: &Cli, e: &AdlvEngine, class: Option<&str>) -> Result<Vec<Arc<SigmaClass>>> {
    if let Some(spec) = class {
        return Ok(vec![parse_class_spec(e, spec)?]);
    }
    e.registry()
        .straight_classes(cli.nu_bound(), cli.kappa_window)?
        .iter()
        .map(|c| e.sigma_class_from_invariant(&c.invariant))
        .collect()
}

fn scan_elements(cli: &Cli, e: &AdlvEngine) -> Result<Vec<AffElt>> {
    let mut out = Vec::new();
    for kappa in e.datum().pi_one_window(cli.kappa_window) {
        let levels = e.registry().coset_levels(&kappa, cli.max_len())?;
        out.extend(levels.iter().flatten().cloned());
    }
    out.sort_by_key(|w| (e.datum().length(w), w.clone()));
    Ok(out)
}

fn cmd_scan(cli: &Cli, class: Option<&str>) -> Result<String> {
    cli.require_format(&[Format::Json, Format::Csv])?;
    let e = cli.engine()?;
    let mut cache = Cache::open(cli, &e)?;
    let classes = scan_classes(cli, &e, class)?;
    let elements = scan_elements(cli, &e)?;
    let pairs: Vec<(&AffElt, &Arc<SigmaClass>)> = elements
        .iter()
        .flat_map(|w| classes.iter().map(move |b| (w, b)))
        .collect();
    let reports = pairs
        .par_iter()
        .map(|(w, b)| e.full_report(w, b))
        .collect::<Result<Vec<_>>>()?;
    cache.save(&e, &elements)?;
    Ok(emit_reports(cli, &reports))
}

fn cmd_svg(cli: &Cli, class: &str) -> Result<String> {
    cli.require_format(&[Format::Json, Format::Svg])?;
    let e = cli.engine()?;
    let mut cache = Cache::open(cli, &e)?;
    let b = parse_class_spec(&e, class)?;
    let levels = e
        .registry()
        .coset_levels(&b.invariant.kappa, cli.max_len())?;
    let elements: Vec<AffElt> = levels.iter().flatten().cloned().collect();
    let reports = elements
        .par_iter()
        .map(|w| e.dim_adlv(w, &b))
        .collect::<Result<Vec<_>>>()?;
    cache.save(&e, &elements)?;
    svg::render(e.datum(), &b, &elements, &reports)
}

fn cmd_selfcheck(cli: &Cli, only: &[Criterion]) -> Result<Output> {
    let mut window = Window {
        limits: cli.limits(),
        ..Window::default()
    };
    if let Some(p) = &cli.preset {
        window.presets = vec![p.clone()];
    }
    if let Some(n) = cli.max_len {
        window.max_len = n;
    }
    if let Some(n) = cli.nu_bound {
        window.nu_bound = n;
    }
    let sc = Selfcheck::new(window);
    let criteria: &[Criterion] = if only.is_empty() {
        &Criterion::ALL
    } else {
        only
    };
    let mut text = String::new();
    let mut status = 0;
    for &c in criteria {
        let o = sc.run(c);
        writeln!(text, "{}", o.summary()).unwrap();
        for n in &o.notes {
            writeln!(text, "    note: {n}").unwrap();
        }
        for f in &o.failures {
            writeln!(text, "    {f}").unwrap();
        }
        if !o.passed() {
            status = 4;
        }
    }
    Ok(Output { text, status })
}
