//! The `ordlab` command line.
//!
//! [`run`] parses an argument vector and returns the exit code with the text
//! that should go to stdout and stderr, so the binary is a thin wrapper and the
//! whole surface can be exercised in-process.

use std::cmp::Ordering;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::action::{act, fixed_point, orbit_witness, stabilizer_generator, OrbitWitness};
use crate::cones::{cone_axioms_check, cone_from_action, identify, ConeDescriptor, ConeTag, Membership};
use crate::equivalence::{reduce, reduction_roundtrip_check, tail_equivalent, witness_to_group, DigitWord, TailWitness};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::json::{
    base_point_from_json, base_point_to_json, cone_from_json, cone_to_json, digit_word_to_json,
    element_from_json, element_to_json, nadic_from_json, nadic_to_json, tail_decision_to_json,
};
use crate::numeric::{format_rat, NAdic};
use crate::realization::RealizationStage;
use crate::reals::{compare_to_rat, digits, BasePoint, DEFAULT_BUDGET};
use crate::suite::{run_suite, Outcome, SuiteConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "ordlab", version, about = "Exact computations with left-orderings of BS(1,n)")]
struct Cli {
    /// Group parameter n >= 2.
    #[arg(long, global = true, default_value_t = 2)]
    n: u64,
    /// Digit budget for stream-backed points.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
    budget: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn parse_budget(s: &str) -> std::result::Result<usize, String> {
    let b: usize = s.parse().map_err(|_| format!("{s:?} is not a positive integer"))?;
    if b < 16 {
        return Err("budget must be at least 16".into());
    }
    Ok(b)
}

#[derive(Args, Debug)]
struct ConeArgs {
    /// Cone tag such as Pinf+-, P+ or Q++, or a cone JSON object.
    #[arg(long)]
    cone: String,
    /// Base point literal: rat:p/q, quad:u,v,d, stream:sqrt:D, ...
    #[arg(long)]
    base: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form of an element of Z[1/n].
    Normalize { value: String },
    /// Sum, difference or product of two elements of Z[1/n].
    Nadic {
        #[arg(value_parser = ["add", "sub", "mul", "cmp"])]
        op: String,
        x: String,
        y: String,
    },
    /// Product of two group elements.
    Mul { g: String, h: String },
    Inv { g: String },
    /// Normal form of a word in a, A, b, B.
    Parse { word: String },
    /// Elements of the word-metric ball.
    Ball {
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// The first elements of the fixed enumeration.
    Enumerate {
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Image of a point under an element.
    Act {
        #[arg(long)]
        elem: String,
        #[arg(long)]
        point: String,
    },
    /// Fixed point of an element with s != 0.
    Fix { g: String },
    /// Generator of the stabilizer of a rational.
    Stab { x: String },
    /// Element sending one point to the other, if any.
    OrbitEq { x: String, y: String },
    /// Sign of a point, or its comparison with a rational.
    Compare { x: String, q: String },
    /// Leading base-n digits of the fractional part of a point.
    Digits {
        x: String,
        #[arg(long, default_value_t = 32)]
        count: usize,
    },
    Member {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long)]
        elem: String,
    },
    /// Cone of the reversed ordering.
    Reverse {
        #[command(flatten)]
        cone: ConeArgs,
    },
    /// The conjugate cone g P g^-1.
    Conjugate {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long)]
        by: String,
    },
    /// Compare two elements in the ordering of a cone.
    Order {
        #[command(flatten)]
        cone: ConeArgs,
        g: String,
        h: String,
    },
    /// Membership in the cone induced by a sequence of points.
    ConeFromAction {
        /// Points separated by ';'.
        #[arg(long)]
        points: String,
        #[arg(long)]
        elem: String,
    },
    /// Recover tag and base point from membership queries.
    Identify {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value_t = 4)]
        precision: u32,
    },
    /// Check the cone axioms on a ball.
    CheckCone {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 5)]
        radius: usize,
    },
    /// Tags of the first elements of the enumeration.
    Realize {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 64)]
        stage: usize,
    },
    /// Digit word of the fractional part.
    Reduce { x: String },
    /// Tail equivalence of the digit words of two points.
    TailEq { x: String, y: String },
    /// Group element from a tail shift (p, q).
    Witness {
        x: String,
        y: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Send x along g, then rebuild an element from the digit words alone.
    Roundtrip {
        x: String,
        #[arg(long)]
        elem: String,
    },
    /// Run the whole invariant suite.
    CheckAll {
        #[arg(long, default_value_t = 5)]
        radius: usize,
        /// Irrational base points, separated by ';'.
        #[arg(long, default_value = "quad:0,1,2;quad:0,1,3")]
        irrational: String,
        /// Rational base points, separated by ';'.
        #[arg(long, default_value = "rat:0;rat:1/3;rat:5/6")]
        rational: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        stage: usize,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

/// What a command produced: a JSON value, optionally a table for csv/text, and a status.
struct Report {
    value: Value,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
    code: i32,
}

impl Report {
    fn new(value: Value) -> Self {
        Report {
            value,
            table: None,
            code: EXIT_OK,
        }
    }

    fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }
}

struct Ctx {
    group: Group,
    n: u32,
    budget: usize,
    seed: u64,
}

impl Ctx {
    fn element(&self, text: &str) -> Result<GroupElement> {
        let t = text.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Json(e.to_string()))?;
            element_from_json(&v, self.n)
        } else {
            self.group.parse_word(t)
        }
    }

    fn point(&self, text: &str) -> Result<BasePoint> {
        let t = text.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Json(e.to_string()))?;
            base_point_from_json(&v, self.n, self.budget)
        } else {
            BasePoint::parse_literal(t, self.n, self.budget)
        }
    }

    fn points(&self, list: &str) -> Result<Vec<BasePoint>> {
        list.split(';').filter(|s| !s.trim().is_empty()).map(|s| self.point(s)).collect()
    }

    fn nadic(&self, text: &str) -> Result<NAdic> {
        let t = text.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Json(e.to_string()))?;
            nadic_from_json(&v, self.n)
        } else {
            NAdic::parse(t, self.n)
        }
    }

    fn cone(&self, args: &ConeArgs) -> Result<ConeDescriptor> {
        let t = args.cone.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Json(e.to_string()))?;
            return cone_from_json(&v, self.n, self.budget);
        }
        let tag: ConeTag = t.parse()?;
        let base = args.base.as_deref().map(|b| self.point(b)).transpose()?;
        ConeDescriptor::new(tag, base)
    }
}

fn membership_json(m: Membership) -> (Value, i32) {
    match m {
        Membership::Yes => (json!(true), EXIT_OK),
        Membership::No => (json!(false), EXIT_OK),
        Membership::Unknown => (Value::Null, EXIT_UNKNOWN),
    }
}

fn execute(cmd: Command, ctx: &Ctx) -> Result<Report> {
    let n = ctx.n;
    Ok(match cmd {
        Command::Normalize { value } => {
            let x = ctx.nadic(&value)?;
            let mut v = nadic_to_json(&x);
            v["text"] = json!(x.to_text());
            Report::new(v)
        }
        Command::Nadic { op, x, y } => {
            let (x, y) = (ctx.nadic(&x)?, ctx.nadic(&y)?);
            match op.as_str() {
                "add" => Report::new(nadic_to_json(&(&x + &y))),
                "sub" => Report::new(nadic_to_json(&(&x - &y))),
                "mul" => Report::new(nadic_to_json(&(&x * &y))),
                _ => Report::new(json!({ "cmp": ordering_name(x.cmp(&y)) })),
            }
        }
        Command::Mul { g, h } => Report::new(element_to_json(&ctx.element(&g)?.mul(&ctx.element(&h)?))),
        Command::Inv { g } => Report::new(element_to_json(&ctx.element(&g)?.inv())),
        Command::Parse { word } => Report::new(element_to_json(&ctx.group.parse_word(&word)?)),
        Command::Ball { radius } => element_list(ctx.group.ball(radius).iter()),
        Command::Enumerate { count } => element_list(ctx.group.enumeration().take(count).collect::<Vec<_>>().iter()),
        Command::Act { elem, point } => {
            Report::new(base_point_to_json(&act(&ctx.element(&elem)?, &ctx.point(&point)?)?))
        }
        Command::Fix { g } => Report::new(json!({ "fixed": format_rat(&fixed_point(&ctx.element(&g)?)?) })),
        Command::Stab { x } => {
            let p = ctx.point(&x)?;
            let q = p
                .as_rat()
                .ok_or_else(|| Error::InvalidBasePoint(format!("{p} is not rational; its stabilizer is trivial")))?;
            Report::new(element_to_json(&stabilizer_generator(q, n)))
        }
        Command::OrbitEq { x, y } => match orbit_witness(&ctx.point(&x)?, &ctx.point(&y)?, n)? {
            OrbitWitness::Witness(g) => Report::new(json!({ "equivalent": true, "witness": element_to_json(&g) })),
            OrbitWitness::NotEquivalent => Report::new(json!({ "equivalent": false })),
        },
        Command::Compare { x, q } => {
            let q = crate::numeric::parse_rat(&q)?;
            let s = compare_to_rat(&ctx.point(&x)?, &q);
            let code = if s == crate::reals::Sign::Unknown { EXIT_UNKNOWN } else { EXIT_OK };
            Report::new(json!({ "sign": format!("{s:?}").to_lowercase() })).with_code(code)
        }
        Command::Digits { x, count } => {
            let d = digits(&ctx.point(&x)?, n, count)?;
            let mut v = json!({ "digits": DigitWord::render(&d.digits, n) });
            if n > 10 {
                v["digits"] = json!(d.digits);
            }
            if let Some((pre, period)) = d.periodicity {
                v["preperiod"] = json!(pre);
                v["period"] = json!(period);
            }
            Report::new(v)
        }
        Command::Member { cone, elem } => {
            let (m, code) = membership_json(ctx.cone(&cone)?.member(&ctx.element(&elem)?));
            Report::new(json!({ "member": m })).with_code(code)
        }
        Command::Reverse { cone } => Report::new(cone_to_json(&ctx.cone(&cone)?.reverse())),
        Command::Conjugate { cone, by } => Report::new(cone_to_json(&ctx.cone(&cone)?.conjugate(&ctx.element(&by)?))),
        Command::Order { cone, g, h } => match ctx.cone(&cone)?.order_compare(&ctx.element(&g)?, &ctx.element(&h)?) {
            Some(o) => Report::new(json!({ "order": ordering_name(o) })),
            None => Report::new(json!({ "order": null })).with_code(EXIT_UNKNOWN),
        },
        Command::ConeFromAction { points, elem } => {
            let (m, code) = membership_json(cone_from_action(&ctx.points(&points)?, &ctx.element(&elem)?)?);
            Report::new(json!({ "member": m })).with_code(code)
        }
        Command::Identify { cone, radius, precision } => {
            let c = ctx.cone(&cone)?;
            let id = identify(&c, ctx.group, radius, precision)?;
            let r = |x: &Option<crate::numeric::Rat>| x.as_ref().map(format_rat);
            Report::new(json!({
                "tags": id.tags.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "lower": r(&id.lower),
                "upper": r(&id.upper),
                "interval": id.interval.as_ref().map(|(a, b)| vec![format_rat(a), format_rat(b)]),
                "width": r(&id.width()),
                "exact_base": r(&id.exact_base),
                "queries": id.queries,
            }))
        }
        Command::CheckCone { cone, radius } => {
            let c = ctx.cone(&cone)?;
            let r = cone_axioms_check(&c, ctx.group, radius);
            let code = if r.violation.is_some() {
                EXIT_VIOLATION
            } else if !r.inconclusive.is_empty() {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
            Report::new(json!({
                "cone": cone_to_json(&c),
                "radius": r.radius,
                "elements": r.elements,
                "members": r.members,
                "products_checked": r.products_checked,
                "violation": r.violation.as_ref().map(ToString::to_string),
                "inconclusive": r.inconclusive.len(),
                "passed": r.passed(),
            }))
            .with_code(code)
        }
        Command::Realize { cone, stage } => {
            let c = ctx.cone(&cone)?;
            let st = RealizationStage::build(&c, ctx.group, stage)?;
            let order = st.sorted_indices();
            let entries: Vec<Value> = order
                .iter()
                .map(|&i| json!({ "index": i, "element": element_to_json(st.element(i)), "tag": st.tag(i).to_text() }))
                .collect();
            let rows = order
                .iter()
                .map(|&i| {
                    vec![
                        i.to_string(),
                        st.element(i).to_string(),
                        st.tag(i).to_text(),
                        st.tag(i).to_f64().to_string(),
                    ]
                })
                .collect();
            Report::new(json!({ "cone": cone_to_json(&c), "stage": st.len(), "entries": entries }))
                .with_table(&["index", "element", "tag", "approx"], rows)
        }
        Command::Reduce { x } => Report::new(digit_word_to_json(&reduce(&ctx.point(&x)?, n, ctx.budget)?, n)),
        Command::TailEq { x, y } => {
            let a = reduce(&ctx.point(&x)?, n, ctx.budget)?;
            let b = reduce(&ctx.point(&y)?, n, ctx.budget)?;
            let d = tail_equivalent(&a, &b);
            let code = if d == crate::equivalence::TailDecision::Unknown { EXIT_UNKNOWN } else { EXIT_OK };
            Report::new(tail_decision_to_json(&d)).with_code(code)
        }
        Command::Witness { x, y, p, q } => {
            let g = witness_to_group(&ctx.point(&x)?, &ctx.point(&y)?, TailWitness { p, q }, n)?;
            Report::new(element_to_json(&g))
        }
        Command::Roundtrip { x, elem } => {
            let p = ctx.point(&x)?;
            let q = p
                .as_rat()
                .ok_or_else(|| Error::InvalidBasePoint("roundtrip needs a rational point".into()))?;
            let r = reduction_roundtrip_check(q, &ctx.element(&elem)?);
            Report::new(json!({
                "x": format_rat(&r.x),
                "y": format_rat(&r.y),
                "witness": r.witness.map(|w| json!({ "p": w.p, "q": w.q })),
                "reconstructed": r.reconstructed.as_ref().map(element_to_json),
                "passed": r.passed,
            }))
            .with_code(if r.passed { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::CheckAll {
            radius,
            irrational,
            rational,
            samples,
            stage,
        } => {
            let mut cfg = SuiteConfig::new(n);
            cfg.radius = radius;
            cfg.seed = ctx.seed;
            cfg.samples = samples;
            cfg.stage = stage;
            cfg.irrational_bases = ctx.points(&irrational)?;
            cfg.rational_bases = ctx.points(&rational)?;
            if cfg.irrational_bases.iter().any(BasePoint::is_rational) || !cfg.rational_bases.iter().all(BasePoint::is_rational) {
                return Err(Error::InvalidBasePoint("irrational and rational base lists are mixed up".into()));
            }
            if cfg.irrational_bases.is_empty() || cfg.rational_bases.is_empty() {
                return Err(Error::InvalidBasePoint("need at least one base of each kind".into()));
            }
            let results = run_suite(&cfg);
            let code = if results.iter().any(|r| r.outcome == Outcome::Fail) {
                EXIT_VIOLATION
            } else if results.iter().any(|r| r.outcome == Outcome::Unknown) {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
            let outcome = |o: Outcome| match o {
                Outcome::Pass => "pass",
                Outcome::Fail => "fail",
                Outcome::Unknown => "unknown",
            };
            let value = json!({
                "n": n,
                "seed": ctx.seed,
                "checks": results
                    .iter()
                    .map(|r| json!({ "name": r.name, "outcome": outcome(r.outcome), "detail": r.detail }))
                    .collect::<Vec<_>>(),
            });
            let rows = results
                .iter()
                .map(|r| vec![r.name.clone(), outcome(r.outcome).to_string(), r.detail.clone()])
                .collect();
            Report::new(value).with_table(&["check", "outcome", "detail"], rows).with_code(code)
        }
    })
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn element_list<'a>(elements: impl Iterator<Item = &'a GroupElement>) -> Report {
    let elements: Vec<&GroupElement> = elements.collect();
    let rows = elements
        .iter()
        .map(|g| vec![g.r().to_text(), g.s().to_string(), g.to_word()])
        .collect();
    Report::new(Value::Array(elements.iter().map(|g| element_to_json(g)).collect())).with_table(&["r", "s", "word"], rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "unknown".into(),
        other => other.to_string(),
    }
}

/// Top-level keys and values, for commands without a natural table.
fn key_values(v: &Value) -> Vec<Vec<String>> {
    match v {
        Value::Object(m) => m.iter().map(|(k, v)| vec![k.clone(), scalar_text(v)]).collect(),
        other => vec![vec!["value".into(), scalar_text(other)]],
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", report.value),
        Format::Csv => {
            let (header, rows) = match &report.table {
                Some((h, r)) => (h.clone(), r.clone()),
                None => (vec!["key".into(), "value".into()], key_values(&report.value)),
            };
            let mut out = String::new();
            for row in std::iter::once(&header).chain(&rows) {
                out.push_str(&row.iter().map(|s| csv_field(s)).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let (header, rows) = match &report.table {
                Some((h, r)) => (Some(h.clone()), r.clone()),
                None => (None, key_values(&report.value)),
            };
            let all: Vec<&Vec<String>> = header.iter().chain(&rows).collect();
            let cols = all.iter().map(|r| r.len()).max().unwrap_or(0);
            let widths: Vec<usize> = (0..cols)
                .map(|c| all.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
                .collect();
            let mut out = String::new();
            for row in all {
                let line: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } | Error::Undecided => EXIT_UNKNOWN,
        Error::InconsistentOracle(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let group = match Group::new(cli.n) {
        Ok(g) => g,
        Err(e) => {
            return Output {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let ctx = Ctx {
        group,
        n: group.n(),
        budget: cli.budget,
        seed: cli.seed,
    };
    match execute(cli.command, &ctx) {
        Ok(report) => Output {
            code: report.code,
            stdout: render(&report, cli.format),
            stderr: String::new(),
        },
        Err(e) => Output {
            code: error_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
