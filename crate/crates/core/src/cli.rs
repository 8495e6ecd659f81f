//! Command-line front end. Every subcommand builds one JSON document; the
//! `csv` and `table` formats flatten the document's row list.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::catalog::{b_range_report, simples, solve_b_range, twisted_ch3_poly, twisted_top};
use crate::charges::{central_charge, z_surface};
use crate::chern::{euler_pairing_surface, twist};
use crate::error::{Error, Result};
use crate::inequalities::{
    bg_discriminant, bg_strong_margin, bg_threefold_margin, bg_weak_surface, support_norm, support_ratio_sq,
};
use crate::lattice::{CanonicalData, ChernVector, ContractionKind, ContractionModel, TiParams};
use crate::rational::{fmt_q, parse_q, Q};
use crate::sequiv::decompose;
use crate::slopes::{mu, nu, trichotomy};
use crate::walls::{
    family_charge_at, phase_order_family, solve_wall_param, stability_verdict, wall_function, ModuliName,
    ModuliObject,
};

/// Exit status when a computation succeeded but disagrees with a published value.
pub const EXIT_DISCREPANCY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "perverse-stab", version, about = "Exact stability-condition numerics on extremal contractions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection data of a contraction model
    Model(ModelArgs),
    /// Simple objects of the perverse heart, with their twisted ch3 polynomials
    Catalog(CatalogArgs),
    /// Range of b on which every simple has positive twisted ch3
    Brange(ModelArgs),
    /// Twisted Chern character e^{-bD} ch
    Twist(ClassArgs),
    /// Central charge
    Charge(ClassArgs),
    /// Slope mu, tilt slope nu and the tilted-heart trichotomy
    Slope(ClassArgs),
    /// Bogomolov-Gieseker margins
    Bg(BgArgs),
    /// Support-property norm and ratio ||v||^2 / |Z(v)|^2 (surface)
    Norm(ClassArgs),
    /// Euler pairing chi(v, w) on the surface
    Chi(ChiArgs),
    /// Decompositions of a class into catalog simples
    Sequiv(SequivArgs),
    /// Phase ordering, walls and stability verdicts in the surface family
    Wall(WallArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// surface, TI, TII, TIII, TIV or TV
    #[arg(long)]
    kind: ContractionKind,
    /// Degree w = omega^2 (surface) or omega.l (3-fold) of the polarisation
    #[arg(long, default_value = "1", value_parser = rational)]
    w: Q,
    /// Type I only: f*w . D^2
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    fw_dsq: Option<Q>,
    /// Type I only: (f*w)^2 . D
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    fw2_d: Option<Q>,
    /// Type I only: D^3
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    d_cube: Option<Q>,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Also report the twisted top degree of every simple at this b
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Q>,
}

#[derive(Args, Debug)]
struct ClassArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Class as JSON, e.g. '{"ch0":"0","ch1":{"C":"1"},"ch2":"1/2"}'; repeatable
    #[arg(long = "class", required = true)]
    classes: Vec<String>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Q>,
}

#[derive(Args, Debug)]
struct BgArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// Constant C_omega of the strengthened surface inequality
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    c_omega: Option<Q>,
    /// Right-hand side of the strengthened inequality
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    threshold: Q,
}

#[derive(Args, Debug)]
struct ChiArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// K_Y . w, needed when the pairing sees the global canonical class
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    ky_omega: Option<Q>,
    /// chi(O_X), needed for pairings of two positive-rank classes
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    chi_ox: Option<Q>,
}

#[derive(Args, Debug)]
struct SequivArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// `point` or a class JSON
    #[arg(long, default_value = "point")]
    target: String,
    /// Twist parameter; defaults to a rational inside the b-range
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Q>,
}

#[derive(Args, Debug)]
struct WallArgs {
    #[arg(long, default_value = "surface")]
    kind: ContractionKind,
    #[arg(long, default_value = "1", value_parser = rational)]
    w: Q,
    /// Two classes to compare; without them the verdict table is printed
    #[arg(long = "class")]
    classes: Vec<String>,
    /// Moduli objects for the verdict table (default: all)
    #[arg(long = "which")]
    which: Vec<String>,
    /// Family parameter; the verdict table defaults to t = -1, 0, 1
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    t: Option<Q>,
}

fn rational(s: &str) -> std::result::Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

impl ModelArgs {
    fn build(&self) -> Result<ContractionModel> {
        let any_ti = self.fw_dsq.is_some() || self.fw2_d.is_some() || self.d_cube.is_some();
        if self.kind == ContractionKind::TI {
            let mut p = TiParams::default();
            if let Some(x) = &self.fw_dsq {
                p.fw_dsq = x.clone();
            }
            if let Some(x) = &self.fw2_d {
                p.fw2_d = x.clone();
            }
            if let Some(x) = &self.d_cube {
                p.d_cube = x.clone();
            }
            ContractionModel::type_i(self.w.clone(), p)
        } else if any_ti {
            Err(Error::Parse("--fw-dsq, --fw2-d and --d-cube apply to --kind TI only".into()))
        } else {
            ContractionModel::new(self.kind, self.w.clone())
        }
    }
}

fn parse_class(model: &ContractionModel, text: &str) -> Result<ChernVector> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed class JSON {text:?}: {e}")))?;
    model.class_from_json(&value)
}

fn parse_classes(model: &ContractionModel, texts: &[String]) -> Result<Vec<ChernVector>> {
    texts.iter().map(|t| parse_class(model, t)).collect()
}

fn require_b<'a>(model: &ContractionModel, b: &'a Option<Q>) -> Result<&'a Q> {
    b.as_ref()
        .ok_or_else(|| Error::Parse(format!("--b is required for {} classes", model.kind())))
}

/// A finished command: its JSON document, which member holds the rows for
/// flat output, and the exit status.
struct Outcome {
    doc: Value,
    rows: Option<&'static str>,
    status: i32,
}

impl Outcome {
    fn ok(doc: Value, rows: Option<&'static str>) -> Self {
        Outcome { doc, rows, status: 0 }
    }
}

fn per_class(
    model: &ContractionModel,
    texts: &[String],
    f: impl Fn(&ChernVector) -> Result<Map<String, Value>>,
) -> Result<Outcome> {
    let mut results = Vec::new();
    for v in parse_classes(model, texts)? {
        let mut row = f(&v)?;
        row.insert("class".into(), model.class_to_json(&v));
        results.push(Value::Object(row));
    }
    Ok(Outcome::ok(json!({"kind": model.kind().label(), "results": results}), Some("results")))
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn cmd_catalog(a: &CatalogArgs) -> Result<Outcome> {
    let model = a.model.build()?;
    let mut rows = Vec::new();
    for s in simples(&model)? {
        let mut row = obj(s.to_json(&model));
        if !model.is_surface() && !s.is_point() {
            row.insert("twisted_ch3".into(), twisted_ch3_poly(&model, &s)?.to_json());
        }
        if let Some(b) = &a.b {
            row.insert("twisted_top".into(), Value::String(fmt_q(&twisted_top(&model, &s.shifted(), b)?)));
        }
        rows.push(Value::Object(row));
    }
    Ok(Outcome::ok(json!({"kind": model.kind().label(), "simples": rows}), Some("simples")))
}

fn cmd_brange(a: &ModelArgs) -> Result<Outcome> {
    let model = a.build()?;
    let report = b_range_report(&model)?;
    let status = if report.has_discrepancy() { EXIT_DISCREPANCY } else { 0 };
    Ok(Outcome { doc: report.to_json(), rows: Some("intervals"), status })
}

fn cmd_twist(a: &ClassArgs) -> Result<Outcome> {
    let model = a.model.build()?;
    let b = require_b(&model, &a.b)?;
    per_class(&model, &a.classes, |v| {
        Ok(obj(json!({"b": fmt_q(b), "twisted": model.class_to_json(&twist(&model, v, b)?)})))
    })
}

fn cmd_charge(a: &ClassArgs) -> Result<Outcome> {
    let model = a.model.build()?;
    // b is irrelevant on the surface
    let b = if model.is_surface() { a.b.clone().unwrap_or_else(Q::zero) } else { require_b(&model, &a.b)?.clone() };
    per_class(&model, &a.classes, |v| {
        let z = central_charge(&model, &b, v)?;
        let phase = if z.is_zero() {
            Value::Null
        } else {
            z.phase_key()?.exact_phase().map_or(Value::Null, |p| Value::String(fmt_q(&p)))
        };
        Ok(obj(json!({"re": fmt_q(&z.re), "im": fmt_q(&z.im), "exact_phase": phase})))
    })
}

fn cmd_slope(a: &ClassArgs) -> Result<Outcome> {
    let model = a.model.build()?;
    per_class(&model, &a.classes, |v| {
        let mut row = Map::new();
        let m = if v.ch0.is_negative() { Value::Null } else { Value::String(mu(&model, v)?.to_string()) };
        row.insert("mu".into(), m);
        if let (false, Some(b)) = (model.is_surface(), &a.b) {
            let t = nu(&model, b, v)?;
            row.insert("nu".into(), Value::String(t.slope.to_string()));
            row.insert("im".into(), Value::String(fmt_q(&t.im)));
            row.insert("trichotomy".into(), Value::String(trichotomy(&model, b, v)?.label().into()));
        }
        Ok(row)
    })
}

fn cmd_bg(a: &BgArgs) -> Result<Outcome> {
    let model = a.class.model.build()?;
    per_class(&model, &a.class.classes, |v| {
        let mut row = Map::new();
        row.insert("discriminant".into(), bg_discriminant(&model, v)?.to_json());
        if model.is_surface() {
            row.insert("weak".into(), bg_weak_surface(&model, v)?.to_json());
            if let Some(c) = &a.c_omega {
                row.insert("strong".into(), bg_strong_margin(&model, v, c, &a.threshold)?.to_json());
            }
        } else if let Some(b) = &a.class.b {
            if v.ch0.is_positive() {
                row.insert("threefold".into(), bg_threefold_margin(&model, b, v)?.to_json());
            }
        }
        Ok(row)
    })
}

fn cmd_norm(a: &ClassArgs) -> Result<Outcome> {
    let model = a.model.build()?;
    per_class(&model, &a.classes, |v| {
        let z = z_surface(&model, v)?;
        let ratio = if z.is_zero() { Value::Null } else { Value::String(fmt_q(&support_ratio_sq(&model, v)?)) };
        Ok(obj(json!({"norm": fmt_q(&support_norm(&model, v)?), "ratio_sq": ratio})))
    })
}

fn cmd_chi(a: &ChiArgs) -> Result<Outcome> {
    let mut model = a.class.model.build()?;
    match (&a.ky_omega, &a.chi_ox) {
        (None, None) => {}
        (Some(k), Some(c)) => model = model.with_canonical(CanonicalData { ky_omega: k.clone(), chi_ox: c.clone() }),
        _ => return Err(Error::Parse("--ky-omega and --chi-ox must be given together".into())),
    }
    let vs = parse_classes(&model, &a.class.classes)?;
    let [v, w] = vs.as_slice() else {
        return Err(Error::Parse(format!("chi takes exactly two --class arguments, got {}", vs.len())));
    };
    let chi = euler_pairing_surface(&model, v, w)?;
    Ok(Outcome::ok(
        json!({
            "kind": model.kind().label(),
            "v": model.class_to_json(v),
            "w": model.class_to_json(w),
            "chi": fmt_q(&chi),
        }),
        None,
    ))
}

fn cmd_sequiv(a: &SequivArgs) -> Result<Outcome> {
    let model = a.model.build()?;
    let target = if a.target.eq_ignore_ascii_case("point") {
        model.point_class()
    } else {
        parse_class(&model, &a.target)?
    };
    let b = match (&a.b, model.is_surface()) {
        (Some(b), _) => b.clone(),
        (None, true) => Q::zero(),
        (None, false) => solve_b_range(&model)?
            .sample_rationals(1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Parse("empty b-range; pass --b explicitly".into()))?,
    };
    let d = decompose(&model, &target, &b)?;
    let mut doc = obj(d.to_json());
    doc.insert("kind".into(), Value::String(model.kind().label().into()));
    doc.insert("b".into(), Value::String(fmt_q(&b)));
    doc.insert("target".into(), model.class_to_json(&target));
    Ok(Outcome::ok(Value::Object(doc), Some("solutions")))
}

fn cmd_wall(a: &WallArgs) -> Result<Outcome> {
    let model = ContractionModel::new(a.kind, a.w.clone())?;
    model.require_surface()?;
    if !a.classes.is_empty() {
        let vs = parse_classes(&model, &a.classes)?;
        let [va, vb] = vs.as_slice() else {
            return Err(Error::Parse(format!("wall compares exactly two --class arguments, got {}", vs.len())));
        };
        let w = wall_function(&model, va, vb)?;
        let mut doc = obj(solve_wall_param(&model, va, vb)?.to_json());
        doc.insert("wall_function".into(), json!(w.iter().map(fmt_q).collect::<Vec<_>>()));
        if let Some(t) = &a.t {
            let ord = phase_order_family(&model, va, vb, t)?;
            let series = |v: &ChernVector| -> Result<Value> {
                let (re, im) = family_charge_at(&model, v, t)?;
                Ok(json!({"re": re.to_string(), "im": im.to_string()}))
            };
            doc.insert("t".into(), Value::String(fmt_q(t)));
            doc.insert("order".into(), Value::String(format!("{ord:?}")));
            doc.insert("charges".into(), json!([series(va)?, series(vb)?]));
        }
        return Ok(Outcome::ok(Value::Object(doc), None));
    }
    let names: Vec<ModuliName> = if a.which.is_empty() {
        ModuliName::ALL.to_vec()
    } else {
        a.which.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let ts = match &a.t {
        Some(t) => vec![t.clone()],
        None => vec![Q::from_integer((-1).into()), Q::zero(), Q::from_integer(1.into())],
    };
    let mut rows = Vec::new();
    for name in names {
        let o = ModuliObject::build(&model, name)?;
        for t in &ts {
            rows.push(json!({
                "object": name.label(),
                "t": fmt_q(t),
                "sub": o.sub.name,
                "quotient": o.quotient.name,
                "split": o.split,
                "verdict": stability_verdict(&model, &o, t)?.label(),
            }));
        }
    }
    Ok(Outcome::ok(json!({"kind": model.kind().label(), "verdicts": rows}), Some("verdicts")))
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Model(a) => Ok(Outcome::ok(a.build()?.to_json(), None)),
        Command::Catalog(a) => cmd_catalog(a),
        Command::Brange(a) => cmd_brange(a),
        Command::Twist(a) => cmd_twist(a),
        Command::Charge(a) => cmd_charge(a),
        Command::Slope(a) => cmd_slope(a),
        Command::Bg(a) => cmd_bg(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Chi(a) => cmd_chi(a),
        Command::Sequiv(a) => cmd_sequiv(a),
        Command::Wall(a) => cmd_wall(a),
    }
}

fn flatten_into(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten_into(&key(k), x, out)),
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten_into(&key(&i.to_string()), x, out)),
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

/// Header and cells of the flat view of a document.
fn flat_rows(doc: &Value, rows: Option<&str>) -> (Vec<String>, Vec<Vec<String>>) {
    let items: Vec<&Value> = match rows.and_then(|k| doc.get(k)).and_then(Value::as_array) {
        Some(xs) => xs.iter().collect(),
        None => vec![doc],
    };
    let flat: Vec<Map<String, Value>> = items
        .iter()
        .map(|v| {
            let mut m = Map::new();
            flatten_into("", v, &mut m);
            m
        })
        .collect();
    let mut header: Vec<String> = flat.iter().flat_map(|m| m.keys().cloned()).collect();
    header.sort();
    header.dedup();
    let cell = |v: Option<&Value>| match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    };
    let body = flat.iter().map(|m| header.iter().map(|h| cell(m.get(h))).collect()).collect();
    (header, body)
}

fn render(out: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&out.doc).expect("serialisable") + "\n"),
        Format::Csv => {
            let (header, body) = flat_rows(&out.doc, out.rows);
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Parse(format!("csv output: {e}"));
            w.write_record(&header).map_err(io)?;
            for r in &body {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv output: {e}")))?;
            Ok(String::from_utf8(bytes).expect("utf-8 csv"))
        }
        Format::Table => {
            let (header, body) = flat_rows(&out.doc, out.rows);
            let widths: Vec<usize> = (0..header.len())
                .map(|i| body.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut s = line(&header);
            s += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
            for r in &body {
                s += &line(r);
            }
            Ok(s)
        }
    }
}

/// Runs the CLI, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let code = if matches!(e.kind(), DisplayHelp | DisplayVersion) { 0 } else { 1 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command).and_then(|o| render(&o, cli.format).map(|s| (s, o))) {
        Ok((text, outcome)) => {
            let _ = out.write_all(text.as_bytes());
            // csv and table rows drop the notes, so always surface them here
            if outcome.status == EXIT_DISCREPANCY {
                for note in outcome.doc["notes"].as_array().into_iter().flatten() {
                    let _ = writeln!(err, "discrepancy: {}", note.as_str().unwrap_or_default());
                }
            }
            outcome.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
