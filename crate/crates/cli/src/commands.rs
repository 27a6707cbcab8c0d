//! Command dispatch: specs in, a JSON report and an exit code out.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use valring::algebra::Gamma;
use valring::fields::{Element, Stage, DEFAULT_PRECISION};
use valring::lattice::approx::{approx_decompose_add, approx_decompose_mult, localization_cuts};
use valring::lattice::classify::{classify, og_nontrivial};
use valring::lattice::compat::Answer;
use valring::lattice::definability::{ax_membership, Definable};
use valring::lattice::henselian::q_henselian;
use valring::lattice::pipeline::{definable_valuation_report, Attempt, FailedHypothesis};
use valring::lattice::ValuationRingRef;
use valring::subgroups::{subgroup_member, MembershipVerdict, SubgroupDescriptor};
use valring::topology::{vtop_report, FailureKind};
use valring::Error;

use crate::parse::{parse_specs_with, SpecError, Specs};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDECIDED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "valring", version, about = "Valuation rings induced by subgroups of valued fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Precision (digits or coefficients) for fields given without `:prec=`.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub prec: u32,
    /// Sampled trials per property check.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// No summary line on stdout when writing to `--json`.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Case distinction for G and the induced ring O_G.
    Classify { field: String, subgroup: String },
    /// Whether O_G is nontrivial.
    Og { field: String, subgroup: String },
    /// Whether a chain ring is q-henselian.
    Henselian {
        field: String,
        q: u64,
        /// Chain index of the ring; defaults to the finest one.
        #[arg(long)]
        ring: Option<usize>,
    },
    /// The existential formula for Z_q against the valuation.
    Ax { field: String, element: String },
    /// Sampled check of the V-topology axioms on balls or on B_G.
    Vtop { field: String, subgroup: Option<String> },
    /// Weak approximation for the first two primes of Q[p,l].
    Approx { field: String, element: String, m: i64, n: i64 },
    /// Subgroup membership with a witness or certificate.
    Member { field: String, subgroup: String, element: String },
    /// Search for a definable nontrivial valuation.
    Pipeline { field: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Classify { .. } => "classify",
            Self::Og { .. } => "og",
            Self::Henselian { .. } => "henselian",
            Self::Ax { .. } => "ax",
            Self::Vtop { .. } => "vtop",
            Self::Approx { .. } => "approx",
            Self::Member { .. } => "member",
            Self::Pipeline { .. } => "pipeline",
        }
    }

    /// The spec line handed to the parser.
    fn spec_text(&self) -> String {
        let parts: Vec<&str> = match self {
            Self::Classify { field, subgroup } | Self::Og { field, subgroup } => vec![field, subgroup],
            Self::Henselian { field, .. } | Self::Pipeline { field } => vec![field],
            Self::Ax { field, element } | Self::Approx { field, element, .. } => vec![field, element],
            Self::Vtop { field, subgroup } => std::iter::once(field).chain(subgroup).map(String::as_str).collect(),
            Self::Member { field, subgroup, element } => vec![field, subgroup, element],
        };
        parts.join(" ")
    }
}

/// A finished run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
    pub summary: String,
}

impl Outcome {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

enum Failure {
    Input(String),
    Spec(SpecError),
    Undecided(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted(_) | Error::Undecided(_) | Error::ImproperSubgroup(_) | Error::NoSimpleRoot(_) => {
                Failure::Undecided(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// The result payload, its exit code and a one-line summary.
type Done = (Value, i32, String);

pub fn execute(cmd: &Command, opts: &Options) -> Outcome {
    let text = cmd.spec_text();
    let mut report = json!({
        "schema": SCHEMA,
        "command": cmd.name(),
        "input": text,
        "precision": opts.prec,
        "trials": opts.trials,
        "seed": opts.seed,
    });
    let parsed = parse_specs_with(&text, opts.prec);
    if let Ok(specs) = &parsed {
        report["field"] = json!(specs.field.to_string());
        report["precision"] = json!(specs.field.precision());
    }
    let (exit_code, summary) = match parsed.map_err(Failure::from).and_then(|s| dispatch(cmd, &s, opts)) {
        Ok((result, code, summary)) => {
            report["result"] = result;
            (code, summary)
        }
        Err(Failure::Spec(e)) => {
            report["error"] = match &e {
                SpecError::Parse { line, column, message } => {
                    json!({"kind": "parse", "line": line, "column": column, "message": message})
                }
                SpecError::Semantic { message } => json!({"kind": "semantic", "message": message}),
            };
            (EXIT_INPUT, e.to_string())
        }
        Err(Failure::Input(msg)) => {
            report["error"] = json!({"kind": "input", "message": msg});
            (EXIT_INPUT, format!("input error: {msg}"))
        }
        Err(Failure::Undecided(msg)) => {
            report["undecided"] = json!(msg);
            (EXIT_UNDECIDED, format!("undecided: {msg}"))
        }
    };
    report["exit_code"] = json!(exit_code);
    Outcome { report, exit_code, summary: format!("{}: {summary}", cmd.name()) }
}

fn need_subgroup(specs: &Specs) -> Result<&SubgroupDescriptor, Failure> {
    specs.subgroup.as_ref().ok_or_else(|| Failure::Input("missing subgroup".into()))
}

fn need_element(specs: &Specs) -> Result<&Element, Failure> {
    match specs.elements.as_slice() {
        [e] => Ok(&e.element),
        _ => Err(Failure::Input(format!("expected one element, got {}", specs.elements.len()))),
    }
}

fn code_if(undecided: bool) -> i32 {
    if undecided {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    }
}

fn dispatch(cmd: &Command, specs: &Specs, opts: &Options) -> Result<Done, Failure> {
    let field = &specs.field;
    let (trials, seed) = (opts.trials, opts.seed);
    match cmd {
        Command::Classify { .. } => {
            let g = need_subgroup(specs)?;
            let r = classify(field, g, trials, seed)?;
            let unknown = r.evidence.iter().any(|e| e.answer == Answer::Unknown);
            let summary = format!("{:?}, O_G = {}", r.case, r.og_ring);
            Ok((to_value(&r), code_if(unknown), summary))
        }
        Command::Og { .. } => {
            let g = need_subgroup(specs)?;
            let r = og_nontrivial(field, g, trials, seed)?;
            let v = to_value(&r);
            let summary = format!("O_G is {}", v["answer"].as_str().unwrap_or("?"));
            Ok((v, EXIT_OK, summary))
        }
        Command::Henselian { q, ring, .. } => {
            let chain = ValuationRingRef::chain(field);
            let idx = ring.unwrap_or(chain.len() - 1);
            let o = chain
                .get(idx)
                .ok_or_else(|| Failure::Input(format!("chain index {idx} out of range 0..{}", chain.len())))?;
            match q_henselian(o, *q, trials, seed) {
                Ok(r) => {
                    let summary = format!("{} is {q}-henselian: {:?}", r.ring, r.answer);
                    Ok((to_value(&r), code_if(r.answer == Answer::Unknown), summary))
                }
                Err(Error::HypothesisViolation(msg)) => Ok((
                    json!({"ring": o.name(), "chain_index": idx, "q": q, "hypothesis_violation": msg}),
                    EXIT_OK,
                    format!("hypothesis violation: {msg}"),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Ax { .. } => {
            let x = need_element(specs)?;
            let ax = ax_membership(x)?;
            let zq = x.is_zero() || x.val_at(Stage::PAdicIntegers)?.ge(&Gamma::int(0));
            let summary = format!("ax_member = {ax}, zq_member = {zq}");
            Ok((json!({"x": x, "ax_member": ax, "zq_member": zq, "agree": ax == zq}), EXIT_OK, summary))
        }
        Command::Vtop { .. } => {
            let r = vtop_report(field, specs.subgroup.as_ref(), trials, seed)?;
            let open = r.count(FailureKind::NoWitnessFound) + r.count(FailureKind::Undecided);
            let failed: Vec<String> = r.axioms.iter().filter(|a| !a.passed()).map(|a| format!("{:?}", a.axiom)).collect();
            let summary = match failed.is_empty() {
                true => "all six axioms pass".to_string(),
                false => format!("failing: {} ({} refuted entries listed)", failed.join(", "), r.count(FailureKind::Refuted)),
            };
            Ok((to_value(&r), code_if(open > 0), summary))
        }
        Command::Approx { m, n, .. } => approx(specs, *m, *n),
        Command::Member { .. } => {
            let g = need_subgroup(specs)?;
            let x = need_element(specs)?;
            let v = subgroup_member(x, g)?;
            let summary = match v.as_bool() {
                Some(b) => format!("member = {b}"),
                None => "unknown".into(),
            };
            let undecided = matches!(v, MembershipVerdict::Unknown { .. });
            Ok((json!({"x": x, "subgroup": g, "verdict": v}), code_if(undecided), summary))
        }
        Command::Pipeline { .. } => {
            let r = definable_valuation_report(field, trials, seed);
            let engine = r
                .attempts
                .iter()
                .any(|a| matches!(a, Attempt::Failure { hypothesis: FailedHypothesis::Engine, .. }));
            let open = engine || r.definable == Some(Definable::OutOfScope);
            let summary = match (&r.q, &r.og_ring, &r.definable) {
                (Some(q), Some(o), Some(d)) => format!("q = {q}, O_G = {o}, definable: {d:?}"),
                _ => "no nontrivial O_G for the candidate primes".into(),
            };
            Ok((to_value(&r), code_if(open), summary))
        }
    }
}

fn approx(specs: &Specs, m: i64, n: i64) -> Result<Done, Failure> {
    let field = &specs.field;
    let primes = match field.kind() {
        valring::fields::FieldKind::RationalsAt { primes } if primes.len() >= 2 => (primes[0], primes[1]),
        _ => return Err(Failure::Input(format!("approx needs Q[p,l] with two primes, got {field}"))),
    };
    let x = need_element(specs)?;
    let xr = x.as_rational().expect("rational field").clone();
    let (a1, a2) = localization_cuts(field, primes.0, m, primes.1, n)?;
    let (y1, y2) = approx_decompose_add(&xr, &a1, &a2)?;
    let additive_ok = y1.add(&y2)? == *x && a1.member(&y1)? && a2.member(&y2)?;
    let mut result = json!({
        "x": x,
        "a1": a1.to_string(),
        "a2": a2.to_string(),
        "additive": {"y1": y1, "y2": y2, "reconstructs": additive_ok},
    });
    let mut ok = additive_ok;
    if !x.is_zero() {
        let (e1, e2) = approx_decompose_mult(&xr, &a1, &a2)?;
        let one = Element::one(field);
        let back = one.add(&e2)?.div(&one.add(&e1)?)?;
        let mult_ok = back == *x && a1.member(&e1)? && a2.member(&e2)?;
        result["multiplicative"] = json!({"e1": e1, "e2": e2, "reconstructs": mult_ok});
        ok &= mult_ok;
    }
    Ok((result, EXIT_OK, format!("decompositions reconstruct x: {ok}")))
}
