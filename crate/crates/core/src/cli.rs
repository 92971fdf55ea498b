//! Command implementations shared by the `pointscheme` binary and its tests.
//!
//! Every command returns a [`CommandOutput`] carrying both a JSON document
//! (with a reproducibility header) and the plain-text rendering.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::chow::{gamma_class, multidegree_table, multidegree_tuple, point_count};
use crate::error::Error;
use crate::ffield_enum::{
    compare_seeded, enumerate_gamma, tuple_strings, ComparisonReport, ComparisonStatus, ScanConfig,
};
use crate::relations::format::RelationFile;
use crate::relations::{is_member, random_split_relations, SplitRelation, DEFAULT_RETRY_BUDGET};
use crate::scalar::{FieldScalar, FieldSpec};
use crate::shapes::AlgebraShape;
use crate::split_oracle::{count_choice_functions, profile_census, realize_points};
use crate::verify::{run_suite, SweepBounds};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Precondition(#[from] Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => EXIT_USAGE,
            CommandError::Precondition(_) => EXIT_PRECONDITION,
            CommandError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

pub type CommandResult = Result<CommandOutput, CommandError>;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub json: Value,
    pub text: String,
    /// Set when the command ran but a check inside it failed.
    pub failed: Option<String>,
}

impl CommandOutput {
    fn ok(json: Value, text: String) -> Self {
        CommandOutput {
            json,
            text,
            failed: None,
        }
    }
}

fn header(command: &str, shape: Option<&AlgebraShape>, seed: Option<u64>, field: Option<FieldSpec>) -> Value {
    json!({
        "tool": "pointscheme",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "shape": shape,
        "seed": seed,
        "field": field.map(|f| f.to_string()),
    })
}

fn wrap(header: Value, result: Value) -> Value {
    json!({ "header": header, "result": result })
}

/// Integers that fit in `i64` become JSON numbers, larger ones strings.
fn int_json(value: &BigInt) -> Value {
    i64::try_from(value).map_or_else(|_| json!(value.to_string()), |v| json!(v))
}

pub fn parse_shape(text: &str) -> Result<AlgebraShape, CommandError> {
    text.parse().map_err(|e: Error| CommandError::Usage(e.to_string()))
}

pub fn parse_field(text: &str) -> Result<FieldSpec, CommandError> {
    text.parse().map_err(|e: Error| CommandError::Usage(e.to_string()))
}

pub fn expected_dim(shape: &AlgebraShape) -> CommandResult {
    let defect = shape.window_count();
    let result = json!({
        "defect": defect,
        "ambient_dim": shape.ambient_dim(),
        "expected_dim": shape.expected_dim(),
        "stable": shape.is_stable(),
        "over_determined": shape.expected_dim() < 0,
    });
    let mut text = format!(
        "shape           {shape}\ndefect          {defect}\nn(r-1)          {}\nexpected dim    {}\nstable          {}\n",
        shape.ambient_dim(),
        shape.expected_dim(),
        shape.is_stable()
    );
    if shape.expected_dim() < 0 {
        text.push_str("note            over-determined: expected dimension is negative\n");
    }
    Ok(CommandOutput::ok(
        wrap(header("expected-dim", Some(shape), None, None), result),
        text,
    ))
}

pub fn count(shape: &AlgebraShape) -> CommandResult {
    let value = point_count::<BigInt>(shape)?;
    let result = json!({
        "count": int_json(&value),
        "provenance": {
            "method": "coefficient of e_1^(r-1)...e_n^(r-1) in the product of window classes",
            "defect": shape.window_count(),
            "ambient_dim": shape.ambient_dim(),
        },
    });
    let text = format!("{value}\n");
    Ok(CommandOutput::ok(wrap(header("count", Some(shape), None, None), result), text))
}

pub fn chow_class(shape: &AlgebraShape) -> CommandResult {
    let class = gamma_class::<BigInt>(shape)?;
    let result = serde_json::to_value(&class).expect("classes serialize");
    Ok(CommandOutput::ok(
        wrap(header("chow-class", Some(shape), None, None), result),
        format!("{class}\n"),
    ))
}

pub fn multidegree(shape: &AlgebraShape) -> CommandResult {
    let table = multidegree_table::<BigInt>(shape)?;
    let tuple = if shape.expected_dim() == 1 {
        Some(multidegree_tuple::<BigInt>(shape)?)
    } else {
        None
    };
    let result = json!({
        "expected_dim": shape.expected_dim(),
        "table": table
            .iter()
            .map(|(exp, c)| json!({"exp": exp, "coeff": c.to_string()}))
            .collect::<Vec<_>>(),
        "tuple": tuple.as_ref().map(|t| t.iter().map(int_json).collect::<Vec<_>>()),
    });
    let mut text = String::new();
    match &tuple {
        Some(t) => {
            let shown: Vec<String> = t.iter().map(ToString::to_string).collect();
            writeln!(text, "({})", shown.join(",")).unwrap();
        }
        None => {
            for (exp, c) in table.iter().rev() {
                let shown: Vec<String> = exp.iter().map(ToString::to_string).collect();
                writeln!(text, "({}) {c}", shown.join(",")).unwrap();
            }
        }
    }
    Ok(CommandOutput::ok(
        wrap(header("multidegree", Some(shape), None, None), result),
        text,
    ))
}

fn oracle_in<S: FieldScalar>(shape: &AlgebraShape, seed: u64, field: FieldSpec) -> CommandResult {
    let chow = point_count::<BigInt>(shape)?;
    let count = count_choice_functions(shape)?;
    let census = profile_census(shape)?;
    let class = gamma_class::<BigInt>(shape)?;
    let census_matches = census.len() == class.len()
        && census
            .iter()
            .all(|(p, c)| class.coefficient(&p.0).ok() == Some(BigInt::from(*c)));

    let splits: Vec<SplitRelation<S>> = random_split_relations(shape, seed, DEFAULT_RETRY_BUDGET)?;
    let tuples = realize_points(&splits, shape)?;
    let tensors: Vec<_> = splits.iter().map(SplitRelation::to_tensor).collect();
    let all_members = tuples
        .iter()
        .map(|t| is_member(&tensors, shape.n(), t))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|m| m);
    let agrees = census_matches
        && all_members
        && BigInt::from(count) == chow
        && BigInt::from(tuples.len()) == chow;
    let verdict = if agrees { "MATCH" } else { "MISMATCH" };

    let forms: Vec<Vec<Vec<String>>> = splits
        .iter()
        .map(|s| {
            s.factors()
                .iter()
                .map(|f| f.coeffs().iter().map(ToString::to_string).collect())
                .collect()
        })
        .collect();
    let result = json!({
        "count": tuples.len(),
        "chow_count": int_json(&chow),
        "choice_functions": count,
        "census": census
            .iter()
            .map(|(p, c)| json!({"profile": p.0, "count": c}))
            .collect::<Vec<_>>(),
        "relations": forms,
        "points": tuples.iter().map(|t| tuple_strings(t)).collect::<Vec<_>>(),
        "all_members": all_members,
        "verdict": verdict,
    });
    let mut text = String::new();
    writeln!(text, "shape        {shape}").unwrap();
    writeln!(text, "field        {field}, seed {seed}").unwrap();
    writeln!(text, "chow count   {chow}").unwrap();
    writeln!(text, "choices      {count}").unwrap();
    writeln!(text, "realized     {} distinct tuples", tuples.len()).unwrap();
    for t in &tuples {
        let shown: Vec<String> = t.iter().map(ToString::to_string).collect();
        writeln!(text, "  {}", shown.join(" ")).unwrap();
    }
    writeln!(text, "verdict      {verdict}").unwrap();
    let mut out = CommandOutput::ok(
        wrap(header("oracle", Some(shape), Some(seed), Some(field)), result),
        text,
    );
    if !agrees {
        out.failed = Some(format!("oracle disagrees with the Chow count for {shape}"));
    }
    Ok(out)
}

pub fn oracle(shape: &AlgebraShape, seed: u64, field: FieldSpec) -> CommandResult {
    crate::with_field!(field, S => oracle_in::<S>(shape, seed, field))
}

fn report_output(
    report: &ComparisonReport,
    shape: &AlgebraShape,
    seed: Option<u64>,
    field: FieldSpec,
    show_tuples: bool,
) -> CommandOutput {
    let mut shown = report.clone();
    if !show_tuples {
        shown.tuples = None;
    }
    let result = serde_json::to_value(&shown).expect("reports serialize");
    let status = serde_json::to_value(report.status).expect("status serializes");
    let mut text = format!(
        "{} {} tuples over F_{}\n",
        status.as_str().unwrap_or_default(),
        report.count,
        report.p
    );
    if let Some(reason) = &report.reason {
        writeln!(text, "reason: {reason}").unwrap();
    }
    if let Some(tuples) = shown.tuples.as_ref() {
        for t in tuples {
            let pts: Vec<String> = t.iter().map(|c| format!("({})", c.join(":"))).collect();
            writeln!(text, "  {}", pts.join(" ")).unwrap();
        }
    }
    let mut out = CommandOutput::ok(wrap(header("ff-enum", Some(shape), seed, Some(field)), result), text);
    if report.status == ComparisonStatus::Mismatch {
        out.failed = Some("finite-field scan disagrees with realized points".into());
    }
    out
}

fn ff_seeded<S: FieldScalar>(
    shape: &AlgebraShape,
    seed: u64,
    field: FieldSpec,
    config: &ScanConfig,
    show_tuples: bool,
) -> CommandResult {
    let report = compare_seeded::<S>(shape, seed, config)?;
    Ok(report_output(&report, shape, Some(seed), field, show_tuples))
}

fn ff_file<S: FieldScalar>(
    file: &RelationFile,
    shape: &AlgebraShape,
    field: FieldSpec,
    config: &ScanConfig,
    show_tuples: bool,
) -> CommandResult {
    let relations = file.relations::<S>()?;
    if file.r != shape.r() {
        return Err(Error::DimensionMismatch {
            expected: shape.r(),
            found: file.r,
        }
        .into());
    }
    let tensors: Vec<_> = relations.iter().map(|r| r.to_tensor()).collect();
    let found = enumerate_gamma(&tensors, shape.r(), shape.n(), config)?;
    let report = ComparisonReport {
        status: ComparisonStatus::Skipped,
        count: found.len(),
        p: field.order().unwrap_or(0),
        seed: None,
        reason: Some("no split realization to compare against; scan only".into()),
        tuples: Some(found.iter().map(|t| tuple_strings(t)).collect()),
        realized_count: 0,
    };
    Ok(report_output(&report, shape, None, field, show_tuples))
}

/// Exhaustive scan over `F_p`. With a relation file the file's relations
/// are scanned; otherwise seeded split relations are compared against
/// their realized points.
pub fn ff_enum(
    shape: &AlgebraShape,
    relations: Option<&str>,
    seed: u64,
    field: FieldSpec,
    config: &ScanConfig,
    show_tuples: bool,
) -> CommandResult {
    if field == FieldSpec::Rationals {
        return Err(CommandError::Usage("ff-enum needs --field Fp:<p>".into()));
    }
    match relations {
        Some(text) => {
            let file = RelationFile::parse(text)?;
            let declared = file.field_spec()?;
            if declared != field {
                return Err(Error::FieldMismatch {
                    expected: field.to_string(),
                    found: declared.to_string(),
                }
                .into());
            }
            crate::with_field!(field, S => ff_file::<S>(&file, shape, field, config, show_tuples))
        }
        None => crate::with_field!(field, S => ff_seeded::<S>(shape, seed, field, config, show_tuples)),
    }
}

pub fn verify(bounds: &SweepBounds, seed: u64) -> CommandResult {
    let lines = run_suite(bounds, seed)?;
    let mut text = String::new();
    for line in &lines {
        writeln!(
            text,
            "{} {}  [{}]",
            line.name,
            if line.passed { "OK" } else { "FAIL" },
            line.detail
        )
        .unwrap();
    }
    let failures: Vec<&str> = lines.iter().filter(|l| !l.passed).map(|l| l.name.as_str()).collect();
    let result = json!({
        "checks": lines
            .iter()
            .map(|l| json!({"name": l.name, "passed": l.passed, "detail": l.detail}))
            .collect::<Vec<_>>(),
        "all_passed": failures.is_empty(),
    });
    let mut out = CommandOutput::ok(wrap(header("verify", None, Some(seed), None), result), text);
    if !failures.is_empty() {
        out.failed = Some(failures.join(", "));
    }
    Ok(out)
}
