//! Command-line front end.
//!
//! Every command prints one JSON document `{provenance, result}` (or
//! `{provenance, error}`). Weight commands take either `--weight "a,b|c"` or
//! `--input FILE`; a file yields an array with one entry per weight, in input
//! order, where failed entries carry `{error: {kind, message}}` instead of a
//! result. Exit codes: 0 success, 2 invalid input, 3 failed computation.

use std::path::PathBuf;
use std::sync::Once;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::atypicality::atypicality_degree;
use crate::characters::{
    fragmentation, g0_decomposition_typical, module_character, simple_character, FormalCharacter, ModuleKind,
    SupermoduleDescriptor,
};
use crate::dstwist::{ds_simple, twist_root_datum, SuperchargeDescriptor};
use crate::error::{Error, Result};
use crate::linalg::C;
use crate::indices::{default_betas, index_of_character, superdimension, twisted_rank, FugacityPoint};
use crate::oscillator::{
    bps_report, build_generators, check_family, fmt_c, formal_kernel, index_family, norm_series, norm_series_minus,
    oscillator_indices,
    parse_gaussian, parse_state,
};
use crate::rational::{fmt_q, qr};
use crate::rootdata::{Parity, RootDatum};
use crate::unitarity::region_classify;
use crate::weights::Weight;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

/// Environment variable holding the worker thread count for batch input.
pub const THREADS_ENV: &str = "SLMN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "slmn", version, about = "Weight combinatorics for sl(m|n) highest-weight supermodules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Algebra {
    /// `p,q,n` for su(p,q|n)
    #[arg(long, value_name = "P,Q,N")]
    algebra: String,
}

#[derive(Args, Debug, Clone)]
struct Target {
    #[command(flatten)]
    algebra: Algebra,
    /// Inline weight, e.g. "-1,0|1"
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input", required_unless_present = "input")]
    weight: Option<String>,
    /// JSON file: an array of weights (strings or {"lambda", "mu"} objects), or {"weights": [...]}
    #[arg(long)]
    input: Option<PathBuf>,
    /// JSON output (the default; accepted for symmetry with --tsv)
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModuleArg {
    Verma,
    Kac,
    Gverma,
    /// Simple module, through the recombination recursion
    Simple,
    Oscillator,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive roots, simple roots and ρ
    Rootdata(Algebra),
    /// Unitarity region of each weight
    Classify {
        #[command(flatten)]
        target: Target,
        /// Tab-separated table instead of JSON
        #[arg(long)]
        tsv: bool,
    },
    /// Vanishing odd roots and the degree of atypicality
    Atypicality {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        tsv: bool,
    },
    /// g₀-constituents of the Kac module
    Decompose {
        #[command(flatten)]
        target: Target,
    },
    /// Composition factors of the Kac module at a boundary weight
    Fragment {
        #[command(flatten)]
        target: Target,
    },
    /// Truncated formal character
    Character {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "kac")]
        module: ModuleArg,
        #[arg(long, default_value_t = 8)]
        depth: i64,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
        /// Report the supercharacter instead
        #[arg(long = "super")]
        super_: bool,
    },
    /// Character-valued Witten index
    Index {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "kac")]
        module: ModuleArg,
        /// e.g. '{"roots":[[2,1]]}' (1-based indices)
        #[arg(long)]
        supercharge: String,
        /// e.g. '{"q_values":["1/2"]}'; every value defaults to 1/2
        #[arg(long)]
        fugacity: Option<String>,
        #[arg(long, default_value_t = 12)]
        depth: i64,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
    },
    /// Formal superdimension
    Superdim {
        #[command(flatten)]
        target: Target,
    },
    /// Duflo–Serganova twist of a simple module
    Twist {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        supercharge: String,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
    },
    /// The su(1,1|1) oscillator model on a truncated Fock space
    Oscillator {
        #[command(subcommand)]
        command: OscillatorCommand,
    },
}

#[derive(Subcommand, Debug)]
enum OscillatorCommand {
    /// Indices of both sectors for Q and S
    Indices {
        #[arg(long = "N", default_value_t = 12)]
        n: usize,
    },
    /// The family Q_(r,t) = rQ − tS
    Family {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long = "N", default_value_t = 12)]
        n: usize,
        /// Order of the norm series partial sum
        #[arg(long, default_value_t = 100)]
        order: usize,
    },
    /// Annihilator dimension of a state among the odd generators
    Bps {
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        #[arg(long = "N", default_value_t = 12)]
        n: usize,
    },
}

/// Parses `p,q,n`.
pub fn parse_algebra(s: &str) -> Result<RootDatum> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Option<Vec<i64>> = parts.iter().map(|t| t.parse().ok()).collect();
    match nums.as_deref() {
        Some(&[p, q, n]) => RootDatum::new(p, q, n),
        _ => Err(Error::InvalidAlgebra(format!("expected p,q,n, got {s:?}"))),
    }
}

fn error_json(e: &Error) -> Value {
    json!({"kind": e.kind(), "message": e.to_string()})
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_COMPUTATION
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

fn configure_threads() {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        if let Some(k) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
            // Fails only if a pool already exists, in which case it is kept.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
        }
    });
}

/// One entry of an input file, kept raw until it is parsed.
fn parse_entry(v: &Value, datum: &RootDatum) -> Result<Weight> {
    let w = match v {
        Value::String(s) => Weight::parse(s)?,
        Value::Object(_) => serde_json::from_value::<Weight>(v.clone()).map_err(|e| Error::ParseWeight {
            input: v.to_string(),
            reason: e.to_string(),
        })?,
        _ => {
            return Err(Error::ParseWeight {
                input: v.to_string(),
                reason: "expected a string or a {\"lambda\", \"mu\"} object".into(),
            })
        }
    };
    w.check_dims(datum)?;
    Ok(w)
}

fn read_entries(path: &PathBuf) -> Result<Vec<Value>> {
    let bad = |reason: String| Error::ParseWeight { input: path.display().to_string(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    match doc {
        Value::Array(xs) => Ok(xs),
        Value::Object(mut o) => match o.remove("weights") {
            Some(Value::Array(xs)) => Ok(xs),
            _ => Err(bad("object input needs a \"weights\" array".into())),
        },
        _ => Err(bad("expected a JSON array of weights".into())),
    }
}

enum Outcome {
    Single(Result<Value>),
    Batch(Vec<Result<Value>>),
}

/// Applies `f` to the inline weight or to every file entry, in parallel for
/// files, with results in input order. Each result gains a `weight` field.
fn for_weights<F>(target: &Target, datum: &RootDatum, f: F) -> Result<Outcome>
where
    F: Fn(&Weight) -> Result<Value> + Sync,
{
    let tag = |w: &Weight, r: Result<Value>| {
        r.map(|mut v| {
            if let Value::Object(o) = &mut v {
                o.insert("weight".into(), to_value(w));
            }
            v
        })
    };
    if let Some(s) = &target.weight {
        let w = Weight::parse_for(s, datum)?;
        return Ok(Outcome::Single(tag(&w, f(&w))));
    }
    let path = target.input.as_ref().expect("clap requires --weight or --input");
    let entries = read_entries(path)?;
    configure_threads();
    let results = entries
        .par_iter()
        .map(|e| {
            let w = parse_entry(e, datum)?;
            tag(&w, f(&w))
        })
        .collect();
    Ok(Outcome::Batch(results))
}

fn character_of(
    module: ModuleArg,
    lam: &Weight,
    parity: Parity,
    datum: &RootDatum,
    depth: i64,
) -> Result<FormalCharacter> {
    let kind = match module {
        ModuleArg::Simple => {
            let ch = simple_character(lam, datum, depth)?;
            return Ok(FormalCharacter { parity, ..ch });
        }
        ModuleArg::Verma => ModuleKind::Verma,
        ModuleArg::Kac => ModuleKind::Kac,
        ModuleArg::Gverma => ModuleKind::GeneralizedVerma,
        ModuleArg::Oscillator => ModuleKind::Oscillator,
    };
    let desc = SupermoduleDescriptor { kind, highest_weight: lam.clone(), parity };
    module_character(&desc, datum, depth)
}

fn parse_supercharge(s: &str, datum: &RootDatum) -> Result<SuperchargeDescriptor> {
    let x = SuperchargeDescriptor::parse_json(s)?;
    x.validate(datum)?;
    Ok(x)
}

fn rootdata_json(datum: &RootDatum) -> Value {
    let labels = |rs: &[crate::Root]| rs.iter().map(|r| r.label(datum.m)).collect::<Vec<_>>();
    json!({
        "m": datum.m,
        "n": datum.n,
        "p": datum.p,
        "q": datum.q,
        "rank": datum.rank(),
        "defect": datum.defect,
        "positive_roots": to_value(&datum.positive_roots()),
        "even_positive": labels(&datum.even_positive),
        "odd_positive": labels(&datum.odd_positive),
        "compact_positive": labels(&datum.compact_positive),
        "noncompact_positive": labels(&datum.noncompact_positive),
        "simple_roots": labels(&datum.simple_roots),
        "rho": to_value(&datum.rho),
    })
}

fn classify_one(w: &Weight, datum: &RootDatum) -> Result<Value> {
    Ok(to_value(&region_classify(w, datum)?))
}

fn atypicality_one(w: &Weight, datum: &RootDatum) -> Value {
    let rep = atypicality_degree(w, datum);
    let mut v = to_value(&rep);
    let labels = |rs: &[crate::Root]| rs.iter().map(|r| r.label(datum.m)).collect::<Vec<_>>();
    v["vanishing_labels"] = json!(labels(&rep.vanishing_roots));
    v["witness_labels"] = json!(labels(&rep.witness));
    v
}

fn family_json(r: &C, t: &C, n: usize, order: usize) -> Result<Value> {
    let gens = build_generators(n)?;
    let check = check_family(r, t, &gens)?;
    let index = match index_family(r, t) {
        Ok((plus, minus)) => json!({"plus": plus, "minus": minus}),
        Err(Error::MarginalCircle) => json!("marginal"),
        Err(e) => return Err(e),
    };
    let kernel = match formal_kernel(r, t, n) {
        Ok(k) => to_value(&k),
        Err(Error::Unsupported(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    let series = |s: Result<_>| match s {
        Ok(s) => Ok(to_value(&s)),
        Err(Error::MarginalCircle) | Err(Error::Unsupported(_)) => Ok(Value::Null),
        Err(e) => Err(e),
    };
    let series = json!({
        "plus": series(norm_series(r, t, order))?,
        "minus": series(norm_series_minus(r, t, order))?,
    });
    Ok(json!({
        "r": fmt_c(r),
        "t": fmt_c(t),
        "n": n,
        "index": index,
        "checks": to_value(&check),
        "formal_kernel": kernel,
        "norm_series": series,
    }))
}

fn tsv_escape(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

fn classify_tsv(entries: &[Result<Value>]) -> String {
    let mut out = String::from("index\tweight\tregion\tatypicality\tpartial\terror\n");
    for (i, e) in entries.iter().enumerate() {
        match e {
            Ok(v) => out.push_str(&format!(
                "{i}\t{}\t{}\t{}\t{}\t\n",
                weight_str(&v["weight"]),
                v["region"].as_str().unwrap_or(""),
                v["atypicality"],
                v["partial"]
            )),
            Err(err) => out.push_str(&format!("{i}\t\t\t\t\t{}\n", tsv_escape(&err.to_string()))),
        }
    }
    out
}

fn atypicality_tsv(entries: &[Result<Value>]) -> String {
    let mut out = String::from("index\tweight\tdegree\tvanishing\terror\n");
    for (i, e) in entries.iter().enumerate() {
        match e {
            Ok(v) => {
                let labels: Vec<&str> =
                    v["vanishing_labels"].as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
                out.push_str(&format!("{i}\t{}\t{}\t{}\t\n", weight_str(&v["weight"]), v["degree"], labels.join(",")));
            }
            Err(err) => out.push_str(&format!("{i}\t\t\t\t{}\n", tsv_escape(&err.to_string()))),
        }
    }
    out
}

fn weight_str(v: &Value) -> String {
    serde_json::from_value::<Weight>(v.clone()).map(|w| w.to_string()).unwrap_or_default()
}

struct Job {
    command: String,
    algebra: Option<String>,
    input: Value,
    options: Value,
}

fn provenance(job: &Job) -> Value {
    let algebra = job.algebra.as_deref().and_then(|s| parse_algebra(s).ok()).map(|d| {
        json!({"p": d.p, "q": d.q, "n": d.n, "label": d.to_string()})
    });
    json!({
        "tool": "slmn",
        "version": env!("CARGO_PKG_VERSION"),
        "command": job.command,
        "algebra": algebra,
        "input": job.input,
        "options": job.options,
    })
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json");
    s.push('\n');
    s
}

fn target_input(t: &Target) -> Value {
    match (&t.weight, &t.input) {
        (Some(w), _) => json!({"weight": w}),
        (None, Some(p)) => json!({"file": p.display().to_string()}),
        _ => Value::Null,
    }
}

fn job_for(command: &str, target: Option<&Target>, algebra: Option<&str>, options: Value) -> Job {
    Job {
        command: command.into(),
        algebra: algebra.map(str::to_string).or_else(|| target.map(|t| t.algebra.algebra.clone())),
        input: target.map(target_input).unwrap_or(Value::Null),
        options,
    }
}

enum Output {
    Json(Value),
    Outcome(Outcome),
    Tsv(Outcome, fn(&[Result<Value>]) -> String),
}

fn dispatch(cmd: &Command) -> (Job, Result<Output>) {
    match cmd {
        Command::Rootdata(a) => {
            let job = job_for("rootdata", None, Some(&a.algebra), json!({}));
            (job, parse_algebra(&a.algebra).map(|d| Output::Json(rootdata_json(&d))))
        }
        Command::Classify { target, tsv } => {
            let job = job_for("classify", Some(target), None, json!({"tsv": tsv}));
            let out = weights_job(target, classify_one).map(|o| wrap(o, *tsv, classify_tsv));
            (job, out)
        }
        Command::Atypicality { target, tsv } => {
            let job = job_for("atypicality", Some(target), None, json!({"tsv": tsv}));
            let out = weights_job(target, |w, d| Ok(atypicality_one(w, d))).map(|o| wrap(o, *tsv, atypicality_tsv));
            (job, out)
        }
        Command::Decompose { target } => {
            let job = job_for("decompose", Some(target), None, json!({}));
            let out = weights_job(target, |w, d| Ok(to_value(&g0_decomposition_typical(w, d)?)));
            (job, out.map(Output::Outcome))
        }
        Command::Fragment { target } => {
            let job = job_for("fragment", Some(target), None, json!({}));
            let out = weights_job(target, |w, d| Ok(json!({"factors": to_value(&fragmentation(w, d)?)})));
            (job, out.map(Output::Outcome))
        }
        Command::Character { target, module, depth, parity, super_ } => {
            let opts = json!({"module": module, "depth": depth, "parity": parity, "super": super_});
            let job = job_for("character", Some(target), None, opts);
            let (module, depth, parity, super_) = (*module, *depth, Parity::from(*parity), *super_);
            let out = weights_job(target, move |w, d| {
                let ch = character_of(module, w, parity, d, depth)?;
                let ch = if super_ { ch.supercharacter(d) } else { ch };
                Ok(to_value(&ch.to_json()))
            });
            (job, out.map(Output::Outcome))
        }
        Command::Index { target, module, supercharge, fugacity, depth, parity } => {
            let opts = json!({
                "module": module,
                "supercharge": supercharge,
                "fugacity": fugacity,
                "depth": depth,
                "parity": parity,
                "betas": default_betas().iter().map(fmt_q).collect::<Vec<_>>(),
            });
            let job = job_for("index", Some(target), None, opts);
            let out = index_job(target, *module, supercharge, fugacity.as_deref(), *depth, (*parity).into());
            (job, out.map(Output::Outcome))
        }
        Command::Superdim { target } => {
            let job = job_for("superdim", Some(target), None, json!({}));
            let out = weights_job(target, |w, d| Ok(to_value(&superdimension(w, d)?)));
            (job, out.map(Output::Outcome))
        }
        Command::Twist { target, supercharge, parity } => {
            let job = job_for("twist", Some(target), None, json!({"supercharge": supercharge, "parity": parity}));
            let parity = Parity::from(*parity);
            let out = parse_algebra(&target.algebra.algebra).and_then(|d| {
                let x = parse_supercharge(supercharge, &d)?;
                let summary = to_value(&twist_root_datum(&d, &x)?.summary());
                for_weights(target, &d, |w| {
                    Ok(json!({"twist": summary, "ds": to_value(&ds_simple(w, parity, &x, &d)?)}))
                })
            });
            (job, out.map(Output::Outcome))
        }
        Command::Oscillator { command } => oscillator_dispatch(command),
    }
}

fn wrap(o: Outcome, tsv: bool, f: fn(&[Result<Value>]) -> String) -> Output {
    if tsv {
        Output::Tsv(o, f)
    } else {
        Output::Outcome(o)
    }
}

fn weights_job<F>(target: &Target, f: F) -> Result<Outcome>
where
    F: Fn(&Weight, &RootDatum) -> Result<Value> + Sync,
{
    let d = parse_algebra(&target.algebra.algebra)?;
    for_weights(target, &d, |w| f(w, &d))
}

fn index_job(
    target: &Target,
    module: ModuleArg,
    supercharge: &str,
    fugacity: Option<&str>,
    depth: i64,
    parity: Parity,
) -> Result<Outcome> {
    let d = parse_algebra(&target.algebra.algebra)?;
    let x = parse_supercharge(supercharge, &d)?;
    let fug = match fugacity {
        Some(s) => FugacityPoint::parse_json(s)?,
        None => FugacityPoint::new(vec![qr(1, 2); twisted_rank(&twist_root_datum(&d, &x)?)]),
    };
    let betas = default_betas();
    for_weights(target, &d, |w| {
        let ch = character_of(module, w, parity, &d, depth)?;
        Ok(to_value(&index_of_character(&ch, &x, &fug, &d, &betas)?))
    })
}

fn gaussian(s: &str) -> Result<C> {
    parse_gaussian(s).ok_or_else(|| Error::ParseWeight {
        input: s.to_string(),
        reason: "expected a Gaussian rational such as 1, -1/2, 2i or 1+3i".into(),
    })
}

fn oscillator_dispatch(cmd: &OscillatorCommand) -> (Job, Result<Output>) {
    let (name, opts, out) = match cmd {
        OscillatorCommand::Indices { n } => {
            ("oscillator indices", json!({"N": n}), oscillator_indices(*n).map(|r| to_value(&r)))
        }
        OscillatorCommand::Family { r, t, n, order } => {
            let out = gaussian(r).and_then(|rc| family_json(&rc, &gaussian(t)?, *n, *order));
            ("oscillator family", json!({"r": r, "t": t, "N": n, "order": order}), out)
        }
        OscillatorCommand::Bps { state, n } => {
            let out = build_generators(*n).and_then(|g| {
                let v = parse_state(state, &g.fock)?;
                Ok(to_value(&bps_report(&v, &g)?))
            });
            ("oscillator bps", json!({"state": state, "N": n}), out)
        }
    };
    let job = Job { command: name.into(), algebra: None, input: Value::Null, options: opts };
    (job, out.map(Output::Json))
}

fn entry_json(r: &Result<Value>) -> Value {
    match r {
        Ok(v) => v.clone(),
        Err(e) => json!({"error": error_json(e)}),
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code with everything that would be printed to stdout.
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let (job, out) = dispatch(&cli.command);
    let prov = provenance(&job);
    let fail = |e: &Error| (exit_code(e), render(&json!({"provenance": prov, "error": error_json(e)})));
    match out {
        Err(e) => fail(&e),
        Ok(Output::Json(v)) | Ok(Output::Outcome(Outcome::Single(Ok(v)))) => {
            (EXIT_OK, render(&json!({"provenance": prov, "result": v})))
        }
        Ok(Output::Outcome(Outcome::Single(Err(e)))) => fail(&e),
        Ok(Output::Outcome(Outcome::Batch(rs))) => {
            let arr: Vec<Value> = rs.iter().map(entry_json).collect();
            (EXIT_OK, render(&json!({"provenance": prov, "result": arr})))
        }
        Ok(Output::Tsv(o, f)) => match o {
            Outcome::Single(Err(e)) => fail(&e),
            Outcome::Single(Ok(v)) => (EXIT_OK, f(&[Ok(v)])),
            Outcome::Batch(rs) => (EXIT_OK, f(&rs)),
        },
    }
}
