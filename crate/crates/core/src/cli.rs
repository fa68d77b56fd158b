//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for bad input, 2 when a reproduced table or a
//! certified property does not hold.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::atlas::{self, EnumerationSpec, Shape};
use crate::criterion::{self, DivisorData, DEFAULT_BOUND};
use crate::cycles::{self, format_combination, Cycle, Point, SingularityClass};
use crate::error::{Error, Result};
use crate::graph::{make_an, make_dn, make_en, DualGraph, EnTypeDescriptor};
use crate::lattice::{parse_rational, rational_from_json, Rational, Vector};
use crate::tables;
use crate::zariski::{self, CurveLattice, Divisor};

#[derive(Debug, Parser)]
#[command(name = "surfsing", version, about = "Invariants of normal surface singularities")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a point and report delta_x.
    Classify(PointArgs),
    /// Print delta_x only.
    Delta(PointArgs),
    /// Print the fundamental cycle.
    Fundcycle(PointArgs),
    /// Zariski decomposition over a declared curve lattice.
    Zariski(ZariskiArgs),
    /// Evaluate the freeness criterion for a scenario file.
    Check {
        /// Scenario JSON file.
        scenario: String,
    },
    /// Regenerate every table and compare cell by cell.
    Tables,
    /// Enumerate chain, fork and star graphs (CSV), or certify them.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Graph document (JSON).
    graph: Option<String>,
    /// Chain with the given weights, e.g. "2,3,2".
    #[arg(long, value_name = "WEIGHTS")]
    an: Option<String>,
    /// Fork: chain weights, then the two leaf weights, e.g. "2,3;2,2".
    #[arg(long, value_name = "CHAIN;LEAVES")]
    dn: Option<String>,
    /// E-type TYPE (1-15) with central weight MU.
    #[arg(long, num_args = 2, value_names = ["TYPE", "MU"])]
    en: Option<Vec<u32>>,
    /// A smooth point.
    #[arg(long)]
    smooth: bool,
}

#[derive(Debug, Args)]
struct ZariskiArgs {
    /// Lattice file: {"ids": [...], "matrix": [[...]]}.
    #[arg(long)]
    lattice: String,
    /// D.C for every declared curve, e.g. "C1=-1,C2=1".
    #[arg(long, conflicts_with = "coefficients")]
    pairings: Option<String>,
    /// D^2, used with --pairings.
    #[arg(long, allow_hyphen_values = true)]
    d2: Option<String>,
    /// Coefficients of D over the lattice, e.g. "C1=1,C2=1/2".
    #[arg(long)]
    coefficients: Option<String>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long, default_value_t = 4)]
    max_vertices: usize,
    #[arg(long, default_value_t = 4)]
    max_weight: u32,
    /// Comma-separated subset of chain, fork, star3.
    #[arg(long, default_value = "chain,fork,star3")]
    shapes: String,
    /// Certify delta_x <= 2 over the enumeration instead of printing CSV.
    #[arg(long)]
    certify: bool,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    Input(Error),
    /// A reproduced property does not hold; the report still goes to stdout.
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Run = std::result::Result<String, Failure>;

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(Failure::Input(e)) => Outcome {
            code: if matches!(e, Error::NotEffective(_)) { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error [{}]: {e}\n", e.code()),
        },
        Err(Failure::Invariant(stdout)) => Outcome {
            code: 2,
            stdout,
            stderr: "error: reproduced values do not match\n".into(),
        },
    }
}

fn dispatch(cli: &Cli) -> Run {
    match &cli.command {
        Command::Classify(p) => classify(&point(p)?, cli.json),
        Command::Delta(p) => delta(&point(p)?, cli.json),
        Command::Fundcycle(p) => fundcycle(&point(p)?, cli.json),
        Command::Zariski(z) => zariski_cmd(z, cli.json),
        Command::Check { scenario } => check(scenario, cli.json),
        Command::Tables => tables_cmd(cli.json),
        Command::Enumerate(e) => enumerate(e, cli.json),
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
}

fn weights(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad weight {w:?}")))
        })
        .collect()
}

fn point(p: &PointArgs) -> Result<Point> {
    let given = [p.graph.is_some(), p.an.is_some(), p.dn.is_some(), p.en.is_some(), p.smooth];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::InvalidInput(
            "give exactly one of GRAPH, --an, --dn, --en, --smooth".into(),
        ));
    }
    if p.smooth {
        return Ok(Point::Smooth);
    }
    let g = if let Some(path) = &p.graph {
        DualGraph::parse(&read(path)?)?
    } else if let Some(an) = &p.an {
        make_an(&weights(an)?)?
    } else if let Some(dn) = &p.dn {
        let (chain, leaves) = dn
            .split_once(';')
            .ok_or_else(|| Error::InvalidInput("--dn expects CHAIN;W',W''".into()))?;
        let leaves = weights(leaves)?;
        let [a, b] = leaves[..] else {
            return Err(Error::InvalidInput("--dn needs exactly two leaf weights".into()));
        };
        make_dn(&weights(chain)?, a, b)?
    } else {
        let en = p.en.as_ref().expect("one source is present");
        make_en(&EnTypeDescriptor::new(en[0], en[1])?)?
    };
    Ok(Point::Singular(g))
}

fn cycle_json(c: &Cycle) -> Value {
    let map: Map<String, Value> = c
        .labels()
        .iter()
        .zip(c.coefficients().iter())
        .map(|(id, x)| (id.clone(), Value::String(x.to_string())))
        .collect();
    Value::Object(map)
}

fn class_json(class: &SingularityClass) -> Value {
    json!({
        "kind": class.kind.to_string(),
        "delta_x": class.delta_x.to_string(),
        "discrepancy": class.discrepancy.as_ref().map(cycle_json),
        "fundamental_cycle": class.fundamental_cycle.as_ref().map(cycle_json),
    })
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

fn classify(p: &Point, json: bool) -> Run {
    let class = cycles::classify(p)?;
    Ok(if json {
        to_json(&class_json(&class))
    } else {
        format!("{}, delta_x = {}\n", class.kind, class.delta_x)
    })
}

fn delta(p: &Point, json: bool) -> Run {
    let d = cycles::delta_x(p)?;
    Ok(if json {
        to_json(&json!({ "delta_x": d.to_string() }))
    } else {
        format!("{d}\n")
    })
}

fn fundcycle(p: &Point, json: bool) -> Run {
    let Point::Singular(g) = p else {
        return Err(Error::InvalidInput("a smooth point has no exceptional curves".into()).into());
    };
    let z = cycles::fundamental_cycle(g)?;
    Ok(if json {
        to_json(&json!({ "fundamental_cycle": cycle_json(&z) }))
    } else {
        format!("{z}\n")
    })
}

/// `"C1=-1, C2=1/2"` into a map; every key must be a declared curve.
fn assignments(text: &str) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected ID=VALUE, got {part:?}")))?;
        out.insert(k.trim().to_string(), parse_rational(v)?);
    }
    Ok(out)
}

fn aligned(lattice: &CurveLattice, values: &BTreeMap<String, Rational>, missing_ok: bool) -> Result<Vector> {
    for k in values.keys() {
        if lattice.index_of(k).is_none() {
            return Err(Error::UnknownVertex(k.clone()));
        }
    }
    lattice
        .ids()
        .iter()
        .map(|id| match values.get(id) {
            Some(v) => Ok(v.clone()),
            None if missing_ok => Ok(Rational::default()),
            None => Err(Error::MissingPairing(id.clone())),
        })
        .collect()
}

fn zariski_cmd(z: &ZariskiArgs, json: bool) -> Run {
    let lattice = CurveLattice::parse(&read(&z.lattice)?)?;
    let d = match (&z.pairings, &z.coefficients) {
        (Some(p), None) => {
            let d2 = z.d2.as_deref().map(parse_rational).transpose()?;
            Divisor::functional(aligned(&lattice, &assignments(p)?, false)?, d2)
        }
        (None, Some(c)) => Divisor::Coefficients(aligned(&lattice, &assignments(c)?, true)?),
        _ => {
            return Err(Error::InvalidInput("give --pairings or --coefficients".into()).into());
        }
    };
    let dec = zariski::zariski_decompose(&d, &lattice)?;
    if !zariski::verify_decomposition(&d, &dec, &lattice) {
        return Err(Failure::Invariant("decomposition failed verification\n".into()));
    }
    let ids = lattice.ids();
    let support: Vec<String> = dec.support.iter().map(|&i| ids[i].clone()).collect();
    let per_curve = |v: &Vector| -> Map<String, Value> {
        ids.iter()
            .zip(v.iter())
            .map(|(id, x)| (id.clone(), Value::String(x.to_string())))
            .collect()
    };
    if json {
        return Ok(to_json(&json!({
            "support": support,
            "negative": per_curve(&dec.negative),
            "positive_pairings": per_curve(&dec.positive_pairings),
            "positive": dec.positive.as_ref().map(per_curve),
            "positive_square": dec.positive_square.as_ref().map(|x| x.to_string()),
        })));
    }
    let mut out = String::new();
    out.push_str(&format!("N = {}\n", format_combination(ids, dec.negative.coords())));
    if let Some(p) = &dec.positive {
        out.push_str(&format!("P = {}\n", format_combination(ids, p.coords())));
    }
    let pairs: Vec<String> = ids
        .iter()
        .zip(dec.positive_pairings.iter())
        .map(|(id, x)| format!("{id}={x}"))
        .collect();
    out.push_str(&format!("P.C: {}\n", pairs.join(", ")));
    out.push_str(&format!("support: {}\n", support.join(", ")));
    if let Some(p2) = &dec.positive_square {
        out.push_str(&format!("P^2 = {p2}\n"));
    }
    Ok(out)
}

fn scenario_point(value: &Value) -> Result<Point> {
    match value {
        Value::String(s) if s == "smooth" => Ok(Point::Smooth),
        Value::Object(obj) => {
            let g = obj
                .get("graph")
                .ok_or_else(|| Error::InvalidInput("point must be \"smooth\" or {\"graph\": ...}".into()))?;
            Ok(Point::Singular(DualGraph::parse(&g.to_string())?))
        }
        _ => Err(Error::InvalidInput("point must be \"smooth\" or {\"graph\": ...}".into())),
    }
}

fn check(path: &str, json: bool) -> Run {
    let value: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::InvalidInput(format!("scenario: {e}")))?;
    let field = |name: &str| {
        value
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("scenario: missing {name:?}")))
    };
    let point = scenario_point(field("point")?)?;
    let class = cycles::classify(&point)?;
    let d2 = rational_from_json(field("D2")?)?;
    let pairings = field("pairings")?
        .as_object()
        .ok_or_else(|| Error::InvalidInput("scenario: pairings must be an object".into()))?
        .iter()
        .map(|(k, v)| Ok((k.clone(), rational_from_json(v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let curves = CurveLattice::from_json(field("curves")?)?;
    let through_x: Vec<String> = match value.get("through_x") {
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidInput(format!("scenario: through_x: {e}")))?,
        None => curves.ids().to_vec(),
    };
    let bound = match value.get("bound") {
        Some(v) => v
            .as_u64()
            .and_then(|b| u32::try_from(b).ok())
            .ok_or_else(|| Error::InvalidInput("scenario: bound must be a non-negative integer".into()))?,
        None => DEFAULT_BOUND,
    };
    let d = DivisorData::new(d2, pairings);
    let verdict = criterion::freeness_verdict(&class, &d, &curves, &through_x, bound)?;
    let sufficient = criterion::corollary2_check(&class.delta_x, &d);

    if json {
        let witnesses: Vec<Value> = verdict
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "E": verdict.describe(w),
                    "coefficients": w.coefficients,
                    "DE": w.de.to_string(),
                    "E2": w.e2.to_string(),
                })
            })
            .collect();
        return Ok(to_json(&json!({
            "point": class.kind.to_string(),
            "delta_x": class.delta_x.to_string(),
            "verdict": format!("{:?}", verdict.kind),
            "caveat": verdict.caveat,
            "curves": verdict.curves,
            "witnesses": witnesses,
            "sufficient_bounds": sufficient,
        })));
    }
    let mut out = format!(
        "point: {}, delta_x = {}\nverdict: {:?}\ncaveat: {}\n",
        class.kind, class.delta_x, verdict.kind, verdict.caveat
    );
    for w in &verdict.witnesses {
        out.push_str(&format!(
            "witness: E = {}, D.E = {}, E^2 = {}\n",
            verdict.describe(w),
            w.de,
            w.e2
        ));
    }
    out.push_str(&format!(
        "sufficient bounds (D^2 > delta_x, D.C >= delta_x/2): {sufficient}\n"
    ));
    Ok(out)
}

fn tables_cmd(json: bool) -> Run {
    let report = tables::reproduce_tables()?;
    let text = if json {
        let mut s = report.render_json();
        s.push('\n');
        s
    } else {
        report.render_text()
    };
    if report.all_pass() {
        Ok(text)
    } else {
        Err(Failure::Invariant(text))
    }
}

fn enumerate(e: &EnumerateArgs, json: bool) -> Run {
    let shapes = e
        .shapes
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Shape>>>()?;
    let spec = EnumerationSpec::new(e.max_vertices, e.max_weight, &shapes)?;
    if !e.certify {
        let mut buf = Vec::new();
        atlas::write_csv(&spec, &mut buf)?;
        return Ok(String::from_utf8(buf).expect("csv output is utf-8"));
    }
    let report = atlas::certify_prop1(&spec);
    let text = if json {
        to_json(&serde_json::to_value(&report).expect("reports always serialize"))
    } else {
        report.render_text()
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Invariant(text))
    }
}
