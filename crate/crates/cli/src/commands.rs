//! Command dispatch: turns a [`CommandRequest`] into rendered output and an
//! exit code.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;

use fresco_core::fresco::{
    a_matrix_from_presentation, bernstein_element, bpoly_to_element, cofactor_poly, divide_right,
    element_to_bpoly, exact_sequence_bpoly, expand_presentation, is_geometric, saturate_bernstein,
    GeometricVerdict, SaturationConfig,
};
use fresco_core::gaussmanin::{self, DEFAULT_CLOSURE_BOUND};
use fresco_core::poles::{check_fond3, maximal_pole, ScriptOp};
use fresco_core::rational::parse_rational;
use fresco_core::{
    AbModulePresentation, BernsteinPoly, Error, FrescoPresentation, HomogeneousElement,
    LedgerFamily, MonomialInput, Poly, Rational,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::eval::{evaluate, EvalOptions, Value as EvalValue};
use crate::parser::{parse_expression, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Normalize,
    Bpoly,
    Belem,
    Divide,
    ExactSeq,
    FromPi,
    Saturate,
    Gm,
    Poles,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Normalize,
        Command::Bpoly,
        Command::Belem,
        Command::Divide,
        Command::ExactSeq,
        Command::FromPi,
        Command::Saturate,
        Command::Gm,
        Command::Poles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Bpoly => "bpoly",
            Command::Belem => "belem",
            Command::Divide => "divide",
            Command::ExactSeq => "exact-seq",
            Command::FromPi => "from-pi",
            Command::Saturate => "saturate",
            Command::Gm => "gm",
            Command::Poles => "poles",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Commands whose single job consumes two inputs.
    fn is_binary(self) -> bool {
        matches!(self, Command::Divide | Command::ExactSeq)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub precision: usize,
    pub max_iter: usize,
    pub format: Format,
    pub laurent_window: u32,
    /// Accept `b^-n` in expressions.
    pub laurent: bool,
    /// `bpoly --factors 2,1` builds the element from a λ-list.
    pub factors: Option<String>,
    /// Rank of the quotient for `exact-seq`; defaults to `deg B_H`.
    pub rank_h: Option<u32>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision: 32,
            max_iter: 64,
            format: Format::Text,
            laurent_window: 16,
            laurent: false,
            factors: None,
            rank_h: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandRequest {
    pub command: Command,
    /// Inline expressions, inline JSON, file paths or `-` for stdin.
    pub inputs: Vec<String>,
    pub options: Options,
}

/// What the process should print and return.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error {0}")]
    Syntax(#[from] ParseError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) | CliError::Json(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Core(Error::Parse(_)) => EXIT_PARSE,
            CliError::Core(e) if e.is_exhaustion() => EXIT_EXHAUSTED,
            CliError::Core(_) | CliError::Io { .. } => EXIT_DOMAIN,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax(_) => "ParseError",
            CliError::Json(_) => "JsonError",
            CliError::Io { .. } => "IoError",
            CliError::Usage(_) => "UsageError",
            CliError::Core(e) => e.kind(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A successful result in both renderings.
struct Rendered {
    text: String,
    json: Value,
}

/// Runs a request. Independent jobs run on separate threads; output keeps
/// the input order and the exit code is the largest one among the jobs.
pub fn execute(req: &CommandRequest) -> Outcome {
    let jobs = match split_jobs(req) {
        Ok(jobs) => jobs,
        Err(e) => return finish(req.options.format, vec![Err(e)]),
    };
    let results: Vec<CliResult<Rendered>> = if jobs.len() == 1 {
        vec![run_job(req.command, &jobs[0], &req.options)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|job| scope.spawn(|| run_job(req.command, job, &req.options)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("command thread panicked"))
                .collect()
        })
    };
    finish(req.options.format, results)
}

fn split_jobs(req: &CommandRequest) -> CliResult<Vec<Vec<String>>> {
    let stdin_uses = req.inputs.iter().filter(|s| s.as_str() == "-").count();
    if stdin_uses > 1 {
        return Err(CliError::Usage("standard input can be used at most once".into()));
    }
    let payloads: Vec<String> = req.inputs.iter().map(|s| load(s)).collect::<CliResult<_>>()?;
    if req.command == Command::Bpoly && req.options.factors.is_some() {
        if !payloads.is_empty() {
            return Err(CliError::Usage("bpoly takes either an expression or --factors".into()));
        }
        return Ok(vec![vec![]]);
    }
    if payloads.is_empty() {
        return Err(CliError::Usage(format!("{} needs an input", req.command.name())));
    }
    if req.command.is_binary() {
        if payloads.len() == 1 {
            return Ok(vec![payloads]);
        }
        if !payloads.len().is_multiple_of(2) {
            return Err(CliError::Usage(format!(
                "{} takes its inputs in pairs",
                req.command.name()
            )));
        }
        return Ok(payloads.chunks(2).map(|c| c.to_vec()).collect());
    }
    Ok(payloads.into_iter().map(|p| vec![p]).collect())
}

/// Resolves an input argument to its payload text.
fn load(input: &str) -> CliResult<String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })?;
        return Ok(s);
    }
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        return Ok(input.to_string());
    }
    let path = Path::new(input);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: input.into(), message: e.to_string() });
    }
    Ok(input.to_string())
}

fn finish(format: Format, results: Vec<CliResult<Rendered>>) -> Outcome {
    let exit_code = results
        .iter()
        .map(|r| r.as_ref().map_or_else(|e| e.exit_code(), |_| EXIT_OK))
        .max()
        .unwrap_or(EXIT_OK);
    let mut out = Outcome { exit_code, ..Outcome::default() };
    match format {
        Format::Json => {
            let mut values: Vec<Value> = results
                .into_iter()
                .map(|r| r.map_or_else(|e| e.to_json(), |ok| ok.json))
                .collect();
            let v = if values.len() == 1 { values.remove(0) } else { Value::Array(values) };
            out.stdout = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            out.stdout.push('\n');
        }
        Format::Text => {
            let mut first = true;
            for r in results {
                match r {
                    Ok(ok) => {
                        if !first {
                            out.stdout.push('\n');
                        }
                        first = false;
                        out.stdout.push_str(&ok.text);
                        if !ok.text.ends_with('\n') {
                            out.stdout.push('\n');
                        }
                    }
                    Err(e) => {
                        let _ = writeln!(out.stderr, "error [{}]: {e}", e.kind());
                    }
                }
            }
        }
    }
    out
}

fn run_job(command: Command, payloads: &[String], opts: &Options) -> CliResult<Rendered> {
    match command {
        Command::Normalize => normalize(&payloads[0], opts),
        Command::Bpoly => bpoly(payloads.first().map(String::as_str), opts),
        Command::Belem => belem(&payloads[0]),
        Command::Divide => divide(payloads, opts),
        Command::ExactSeq => exact_seq(payloads, opts),
        Command::FromPi => from_pi(&payloads[0], opts),
        Command::Saturate => saturate(&payloads[0], opts),
        Command::Gm => gm(&payloads[0]),
        Command::Poles => poles(&payloads[0]),
    }
}

fn eval_options(opts: &Options) -> EvalOptions {
    EvalOptions {
        laurent: opts.laurent,
        laurent_window: opts.laurent_window,
        precision: opts.precision,
    }
}

/// A payload holding text: bare text, a JSON string, or `{"expr": …}`.
fn text_payload(payload: &str, key: &str) -> CliResult<String> {
    let trimmed = payload.trim();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)?;
        return v
            .get(key)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| CliError::Usage(format!("expected an object with a string field \"{key}\"")));
    }
    if trimmed.starts_with('"') {
        return Ok(serde_json::from_str::<String>(trimmed)?);
    }
    Ok(trimmed.to_string())
}

fn eval_text(payload: &str, opts: &Options) -> CliResult<EvalValue> {
    let text = text_payload(payload, "expr")?;
    Ok(evaluate(&parse_expression(&text)?, &eval_options(opts))?)
}

fn homogeneous(payload: &str, opts: &Options) -> CliResult<HomogeneousElement> {
    let e = eval_text(payload, opts)?.into_exact()?;
    Ok(HomogeneousElement::from_element(&e)?)
}

fn bpoly_of_text(payload: &str) -> CliResult<BernsteinPoly> {
    Ok(text_payload(payload, "bpoly")?.parse::<BernsteinPoly>()?)
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}

fn verdict_json(v: &GeometricVerdict) -> Value {
    json!({
        "status": v.status.as_str(),
        "rational_roots": rats(&v.rational_roots),
        "unfactored_part": v.unfactored_part.expanded("x"),
    })
}

fn normalize(payload: &str, opts: &Options) -> CliResult<Rendered> {
    let v = eval_text(payload, opts)?;
    let text = v.render();
    Ok(Rendered { json: json!({ "normal_form": text }), text })
}

fn bpoly(payload: Option<&str>, opts: &Options) -> CliResult<Rendered> {
    let p = match (&opts.factors, payload) {
        (Some(list), _) => {
            let lambdas = list
                .split(',')
                .map(|s| parse_rational(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            if lambdas.is_empty() {
                return Err(CliError::Usage("--factors needs at least one value".into()));
            }
            bernstein_element(&lambdas)
        }
        (None, Some(text)) => homogeneous(text, opts)?,
        (None, None) => return Err(CliError::Usage("bpoly needs an expression".into())),
    };
    let b = element_to_bpoly(&p)?;
    let roots = b.rational_roots();
    let text = format!("P = {}\nB(x) = {}\n", p, b);
    Ok(Rendered {
        text,
        json: json!({
            "element": p.to_string(),
            "bpoly": b.to_string(),
            "expanded": b.poly().expanded("x"),
            "degree": b.degree(),
            "roots": rats(&roots),
        }),
    })
}

fn belem(payload: &str) -> CliResult<Rendered> {
    let b = bpoly_of_text(payload)?;
    let p = bpoly_to_element(&b, b.degree())?;
    Ok(Rendered {
        text: format!("{p}\n"),
        json: json!({ "bpoly": b.to_string(), "element": p.to_string() }),
    })
}

/// `divide Q P`, or one JSON object `{"q": …, "p": …}`.
fn pair(payloads: &[String], first: &str, second: &str) -> CliResult<(String, String)> {
    if let [a, b] = payloads {
        return Ok((a.clone(), b.clone()));
    }
    let v: Value = serde_json::from_str(payloads[0].trim())
        .map_err(|_| CliError::Usage(format!("expected two inputs or {{\"{first}\": …, \"{second}\": …}}")))?;
    let get = |k: &str| {
        v.get(k)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| CliError::Usage(format!("missing string field \"{k}\"")))
    };
    Ok((get(first)?, get(second)?))
}

fn divide(payloads: &[String], opts: &Options) -> CliResult<Rendered> {
    let (qt, pt) = pair(payloads, "q", "p")?;
    let q = homogeneous(&qt, opts)?;
    let p = homogeneous(&pt, opts)?;
    let w = divide_right(&q, &p)?;
    let c = cofactor_poly(&w, q.degree(), p.degree())?;
    Ok(Rendered {
        text: format!("W = {w}\nC(x) = {c}\n"),
        json: json!({ "quotient": w.to_string(), "cofactor": c.to_string() }),
    })
}

fn exact_seq(payloads: &[String], opts: &Options) -> CliResult<Rendered> {
    let (ft, ht) = pair(payloads, "bf", "bh")?;
    let bf = bpoly_of_text(&ft)?;
    let bh = bpoly_of_text(&ht)?;
    let rank_h = opts.rank_h.unwrap_or(bh.degree());
    let bg = exact_sequence_bpoly(&bf, &bh, rank_h)?;
    Ok(Rendered {
        text: format!("B_G(x) = {bg}\n"),
        json: json!({ "bpoly": bg.to_string(), "rank_h": rank_h }),
    })
}

fn from_pi(payload: &str, opts: &Options) -> CliResult<Rendered> {
    let p: FrescoPresentation = serde_json::from_str(payload)?;
    let pi = expand_presentation(&p, opts.precision)?;
    let (init, degree) = pi.initial_form()?;
    let b = element_to_bpoly(&HomogeneousElement::from_element(&init)?)?;
    let verdict = is_geometric(&b);
    let text = format!(
        "Pi = {pi}\ninitial form (degree {degree}) = {init}\nB(x) = {b}\ngeometric: {}\n",
        verdict.status.as_str()
    );
    Ok(Rendered {
        text,
        json: json!({
            "pi": pi.to_string(),
            "initial_form": init.to_string(),
            "initial_degree": degree,
            "bpoly": b.to_string(),
            "geometric": verdict_json(&verdict),
        }),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SaturateInput {
    Module(AbModulePresentation),
    Fresco(FrescoPresentation),
}

fn saturate(payload: &str, opts: &Options) -> CliResult<Rendered> {
    let v: Value = serde_json::from_str(payload)?;
    let module = if v.get("a_matrix").is_some() {
        serde_json::from_value::<AbModulePresentation>(v)?
    } else {
        match serde_json::from_value::<SaturateInput>(v)? {
            SaturateInput::Module(m) => m,
            SaturateInput::Fresco(p) => a_matrix_from_presentation(&p, opts.precision)?,
        }
    };
    let config = SaturationConfig {
        max_iter: opts.max_iter,
        laurent_window: opts.laurent_window,
        precision: opts.precision,
    };
    let r = saturate_bernstein(&module, &config)?;
    let render = |p: &Poly| match BernsteinPoly::new(p.clone()) {
        Ok(b) => b.to_string(),
        Err(_) => p.expanded("x"),
    };
    let verdict = BernsteinPoly::new(r.min_poly.clone()).ok().map(|b| is_geometric(&b));
    let mut text = format!(
        "char_poly = {}\nmin_poly = {}\niterations = {}\n",
        render(&r.char_poly),
        render(&r.min_poly),
        r.iterations
    );
    if let Some(v) = &verdict {
        let _ = writeln!(text, "geometric: {}", v.status.as_str());
    }
    Ok(Rendered {
        text,
        json: json!({
            "rank": module.rank(),
            "char_poly": render(&r.char_poly),
            "min_poly": render(&r.min_poly),
            "iterations": r.iterations,
            "geometric": verdict.as_ref().map(verdict_json),
        }),
    })
}

fn gm(payload: &str) -> CliResult<Rendered> {
    let input: MonomialInput = serde_json::from_str(payload)?;
    let r = gaussmanin::run_bounded(&input, DEFAULT_CLOSURE_BOUND)?;
    Ok(Rendered { text: r.report(&input), json: r.to_json() })
}

#[derive(Deserialize)]
struct PolesJob {
    ledger: LedgerFamily,
    #[serde(default)]
    script: Vec<ScriptOp>,
    check: Option<CheckJob>,
}

#[derive(Deserialize)]
struct CheckJob {
    presentation: FrescoPresentation,
    d: u32,
}

fn poles(payload: &str) -> CliResult<Rendered> {
    let job: PolesJob = serde_json::from_str(payload)?;
    let mut family = job.ledger;
    let mut text = format!("initial:\n{family}\n");
    let mut steps = Vec::new();
    for op in &job.script {
        family = op.apply(&family)?;
        let _ = write!(text, "after {op}:\n{family}\n");
        steps.push(json!({ "op": op.to_string(), "family": family }));
    }
    let maximal = maximal_pole(&family);
    match &maximal {
        Some(m) => {
            let _ = writeln!(text, "maximal pole: {} of order {} (h = {})", m.location, m.order, m.h);
        }
        None => text.push_str("maximal pole: none\n"),
    }
    let mut check_json = Value::Null;
    if let Some(check) = &job.check {
        let c = check_fond3(&family, &check.presentation, check.d)?;
        let _ = writeln!(
            text,
            "check: holds = {}, witnesses = {:?}",
            c.holds, c.witnesses
        );
        check_json = json!({ "holds": c.holds, "witnesses": c.witnesses });
    }
    Ok(Rendered {
        text,
        json: json!({
            "steps": steps,
            "family": family,
            "maximal": maximal.map(|m| json!({
                "loc": m.location.to_string(),
                "order": m.order,
                "h": m.h,
            })),
            "check": check_json,
        }),
    })
}
