//! JSON inputs and reports for the command-line driver.
//!
//! Every report has the shape `{command, inputs, results, schema_version}`
//! with keys sorted, rationals as `"p/q"` strings and a trailing newline,
//! so identical inputs give identical bytes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::covering::{covering_number, existence_via_covering, CoveringError, CoveringProblem};
use crate::function::PointFunction;
use crate::group::{group_topologies_with_cap, product_group, FiniteGroup, FiniteTopGroup, GroupError, Side, MAX_ORDER};
use crate::measure::{
    canonical_haar, fubini_check, haar_ratio, haar_solution_space, is_haar, pullback, pushforward, FiniteMeasure,
    MeasureError,
};
use crate::plane::{
    counterexample_bk, haar_v, regularity_gap, translate_v, BkWitness, Bound, CylinderSet, Interval, IntervalUnion,
    Length, PlaneError, Rect,
};
use crate::quotient::{quotient, verify_borel_statements};
use crate::rational::{format_decimal, format_rational, int, parse_rational, ParseRationalError, Rational};
use crate::topology::{FiniteSpace, Subset, TopologyError};

pub const SCHEMA_VERSION: u64 = 1;

/// Default order cap for group inputs.
pub const DEFAULT_MAX_ORDER: usize = MAX_ORDER;

/// Atom count up to which `construct` lists every `(K, U)` pair.
pub const TABLE_ATOM_LIMIT: usize = 5;

/// Digits after the point in decimal renderings of plane quantities.
const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Enumerate,
    VerifyHaar,
    Construct,
    Quotient,
    Counterexample,
    Fubini,
    Plane,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Enumerate,
        Command::VerifyHaar,
        Command::Construct,
        Command::Quotient,
        Command::Counterexample,
        Command::Fubini,
        Command::Plane,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Enumerate => "enumerate",
            Command::VerifyHaar => "verify-haar",
            Command::Construct => "construct",
            Command::Quotient => "quotient",
            Command::Counterexample => "counterexample",
            Command::Fubini => "fubini",
            Command::Plane => "plane",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ReportError::UnknownCommand(s.to_owned()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("unsupported schema_version {0}")]
    SchemaVersion(u64),
    #[error("group order {order} exceeds the cap of {max}")]
    OrderCap { order: usize, max: usize },
    #[error("invalid rational `{text}`: {source}")]
    Rational { text: String, source: ParseRationalError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("thread pool: {0}")]
    Threads(String),
}

impl ReportError {
    pub fn kind(&self) -> &'static str {
        match self {
            ReportError::UnknownCommand(_) => "unknown_command",
            ReportError::Json(_) => "malformed_json",
            ReportError::Schema(_) => "invalid_input",
            ReportError::SchemaVersion(_) => "schema_version",
            ReportError::OrderCap { .. } => "order_cap",
            ReportError::Rational { .. } => "invalid_rational",
            ReportError::Group(_) => "invalid_group",
            ReportError::Topology(_) => "invalid_topology",
            ReportError::Measure(_) => "invalid_measure",
            ReportError::Covering(_) => "invalid_covering",
            ReportError::Plane(_) => "invalid_plane_input",
            ReportError::Threads(_) => "threads",
        }
    }

    /// Structured details for the error document, when there are any.
    fn details(&self) -> Value {
        match self {
            ReportError::Group(GroupError::NotAssociative { a, b, c }) => json!({ "triple": [a, b, c] }),
            ReportError::Group(GroupError::NoInverse(x)) => json!({ "element": x }),
            ReportError::Group(GroupError::EntryOutOfRange { a, b, value }) => {
                json!({ "pair": [a, b], "value": value })
            }
            ReportError::Group(GroupError::NotContinuousMultiplication { x, y, open }) => {
                json!({ "pair": [x, y], "open": open })
            }
            ReportError::Group(GroupError::NotContinuousInversion { x, open }) => {
                json!({ "element": x, "open": open })
            }
            ReportError::OrderCap { order, max } => json!({ "order": order, "max": max }),
            ReportError::Covering(CoveringError::EmptyInterior(s)) => json!({ "set": s }),
            _ => Value::Null,
        }
    }

    /// The document written to stderr on failure.
    pub fn to_json(&self) -> Value {
        let mut error = Map::new();
        error.insert("kind".into(), json!(self.kind()));
        error.insert("message".into(), json!(self.to_string()));
        let details = self.details();
        if !details.is_null() {
            error.insert("details".into(), details);
        }
        json!({ "error": error })
    }
}

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_order: usize,
    /// Overrides the input's probe bound for `counterexample`.
    pub probe_bound: Option<Rational>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, probe_bound: None, threads: None }
    }
}

/// A finished report and whether every check in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub document: Value,
    pub passed: bool,
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.document).expect("reports are plain JSON");
        text.push('\n');
        text
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Parses `input` and builds the report for `command`.
pub fn run(command: Command, input: &str, options: &RunOptions) -> Result<Report, ReportError> {
    let value: Value = serde_json::from_str(input).map_err(|e| ReportError::Json(e.to_string()))?;
    let Value::Object(mut fields) = value else {
        return Err(ReportError::Schema("input must be a JSON object".into()));
    };
    match fields.remove("schema_version") {
        None => {}
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(Value::Number(n)) => return Err(ReportError::SchemaVersion(n.as_u64().unwrap_or(0))),
        Some(_) => return Err(ReportError::Schema("schema_version must be a number".into())),
    }
    let inputs = Value::Object(fields);
    let build = || -> Result<(Value, bool), ReportError> {
        match command {
            Command::Enumerate => enumerate(&inputs, options),
            Command::VerifyHaar => verify_haar(&inputs, options),
            Command::Construct => construct(&inputs, options),
            Command::Quotient => quotient_report(&inputs, options),
            Command::Counterexample => counterexample(&inputs, options),
            Command::Fubini => fubini(&inputs, options),
            Command::Plane => plane(&inputs),
        }
    };
    let (results, passed) = match options.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ReportError::Threads(e.to_string()))?
            .install(build)?,
        None => build()?,
    };
    let document = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command.as_str(),
        "inputs": inputs,
        "results": results,
    });
    Ok(Report { document, passed })
}

fn from_value<T: DeserializeOwned>(value: &Value, what: &str) -> Result<T, ReportError> {
    T::deserialize(value).map_err(|e| ReportError::Schema(format!("{what}: {e}")))
}

fn rational(text: &str) -> Result<Rational, ReportError> {
    parse_rational(text).map_err(|source| ReportError::Rational { text: text.to_owned(), source })
}

fn rat(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

fn rats(values: &[Rational]) -> Value {
    values.iter().map(rat).collect()
}

/// Exact and decimal forms, for plane quantities.
fn exact_and_decimal(value: &Rational) -> Value {
    json!({ "exact": format_rational(value), "decimal": format_decimal(value, DECIMAL_DIGITS) })
}

fn subset(points: &[usize], n: usize) -> Result<Subset, ReportError> {
    if let Some(&bad) = points.iter().find(|&&p| p >= n) {
        return Err(ReportError::Schema(format!("point {bad} is outside 0..{n}")));
    }
    Ok(points.iter().copied().collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSpec {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    order: Option<usize>,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySpec {
    family: String,
    #[serde(default)]
    params: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SizeParams {
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductParams {
    factors: [Value; 2],
}

fn check_order(order: usize, max: usize) -> Result<(), ReportError> {
    let cap = max.min(MAX_ORDER);
    if order > cap {
        Err(ReportError::OrderCap { order, max: cap })
    } else {
        Ok(())
    }
}

/// A group from `{"table": ...}` or `{"family": ..., "params": ...}`.
fn parse_group(value: &Value, max_order: usize) -> Result<FiniteGroup, ReportError> {
    let Some(fields) = value.as_object() else {
        return Err(ReportError::Schema("group must be an object".into()));
    };
    if fields.contains_key("table") {
        let spec: TableSpec = from_value(value, "group")?;
        check_order(spec.table.len(), max_order)?;
        if let Some(order) = spec.order {
            if order != spec.table.len() {
                return Err(ReportError::Schema(format!(
                    "order {order} does not match {} table rows",
                    spec.table.len()
                )));
            }
        }
        let name = spec.name.unwrap_or_else(|| format!("G{}", spec.table.len()));
        return Ok(FiniteGroup::from_table(name, spec.table)?);
    }
    if !fields.contains_key("family") {
        return Err(ReportError::Schema("group needs `table` or `family`".into()));
    }
    let spec: FamilySpec = from_value(value, "group")?;
    let params = spec.params.unwrap_or(Value::Null);
    let size = |scale: usize| -> Result<usize, ReportError> {
        let p: SizeParams = from_value(&params, "params")?;
        if p.n == 0 {
            return Err(ReportError::Schema("params.n must be positive".into()));
        }
        check_order(p.n.saturating_mul(scale), max_order)?;
        Ok(p.n)
    };
    let no_params = |group: FiniteGroup| -> Result<FiniteGroup, ReportError> {
        if !params.is_null() {
            return Err(ReportError::Schema(format!("family {} takes no params", spec.family)));
        }
        check_order(group.order(), max_order)?;
        Ok(group)
    };
    match spec.family.as_str() {
        "cyclic" => Ok(FiniteGroup::cyclic(size(1)?)),
        "dihedral" => {
            let n = size(2)?;
            if n < 3 {
                return Err(ReportError::Schema("dihedral groups need n >= 3".into()));
            }
            Ok(FiniteGroup::dihedral(n))
        }
        "symmetric3" => no_params(FiniteGroup::symmetric3()),
        "quaternion8" => no_params(FiniteGroup::quaternion8()),
        "trivial" => no_params(FiniteGroup::trivial()),
        "product" => {
            let p: ProductParams = from_value(&params, "params")?;
            let a = parse_group(&p.factors[0], max_order)?;
            let b = parse_group(&p.factors[1], max_order)?;
            check_order(a.order() * b.order(), max_order)?;
            Ok(FiniteGroup::direct_product(&a, &b)?)
        }
        other => Err(ReportError::Schema(format!("unknown family `{other}`"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologySpec {
    #[serde(default)]
    normal_subgroup: Option<Vec<usize>>,
    #[serde(default)]
    opens: Option<Vec<Vec<usize>>>,
}

fn parse_topgroup(group: FiniteGroup, value: &Value) -> Result<FiniteTopGroup, ReportError> {
    let spec: TopologySpec = from_value(value, "topology")?;
    let n = group.order();
    match (spec.normal_subgroup, spec.opens) {
        (Some(points), None) => Ok(FiniteTopGroup::with_normal_subgroup(group, subset(&points, n)?)?),
        (None, Some(opens)) => {
            let opens = opens.iter().map(|o| subset(o, n)).collect::<Result<Vec<_>, _>>()?;
            let space = FiniteSpace::from_opens(n, opens)?;
            Ok(FiniteTopGroup::new(group, space)?)
        }
        _ => Err(ReportError::Schema("topology needs exactly one of `normal_subgroup` or `opens`".into())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureSpec {
    atom_masses: Vec<String>,
}

fn parse_measure(g: &FiniteTopGroup, value: Option<&Value>) -> Result<FiniteMeasure, ReportError> {
    match value {
        None => Ok(canonical_haar(g)),
        Some(v) => {
            let spec: MeasureSpec = from_value(v, "measure")?;
            let masses = spec.atom_masses.iter().map(|m| rational(m)).collect::<Result<Vec<_>, _>>()?;
            Ok(FiniteMeasure::new(g, masses)?)
        }
    }
}

fn group_summary(g: &FiniteGroup) -> Value {
    json!({ "name": g.name(), "order": g.order(), "abelian": g.is_abelian() })
}

fn topgroup_summary(g: &FiniteTopGroup) -> Value {
    json!({
        "normal_subgroup": g.identity_closure(),
        "atoms": g.atoms().atoms(),
        "hausdorff": g.is_hausdorff(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumerateInput {
    group: Value,
}

fn enumerate(inputs: &Value, options: &RunOptions) -> Result<(Value, bool), ReportError> {
    let input: EnumerateInput = from_value(inputs, "enumerate input")?;
    let group = parse_group(&input.group, options.max_order)?;
    let topologies = group_topologies_with_cap(&group, options.max_order)?;
    let rows = topologies
        .par_iter()
        .map(|g| -> Result<(Value, bool), ReportError> {
            let space = haar_solution_space(g)?;
            let mu = canonical_haar(g);
            let left = is_haar(g, &mu, Side::Left)?;
            let right = is_haar(g, &mu, Side::Right)?;
            let ok = space.dimension == 1 && left.is_left_haar() && right.is_right_haar();
            let mut row = topgroup_summary(g);
            let fields = row.as_object_mut().unwrap();
            fields.insert("haar_dimension".into(), json!(space.dimension));
            fields.insert("canonical_haar".into(), rats(mu.masses()));
            fields.insert("is_left_haar".into(), json!(left.is_left_haar()));
            fields.insert("is_right_haar".into(), json!(right.is_right_haar()));
            fields.insert("exhaustive".into(), json!(left.exhaustive));
            Ok((row, ok))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().all(|(_, ok)| *ok);
    let results = json!({
        "group": group_summary(&group),
        "count": rows.len(),
        "topologies": rows.into_iter().map(|(row, _)| row).collect::<Vec<_>>(),
    });
    Ok((results, passed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyInput {
    group: Value,
    topology: Value,
    measure: Value,
    #[serde(default)]
    side: Option<Side>,
}

fn verify_haar(inputs: &Value, options: &RunOptions) -> Result<(Value, bool), ReportError> {
    let input: VerifyInput = from_value(inputs, "verify-haar input")?;
    let group = parse_group(&input.group, options.max_order)?;
    let g = parse_topgroup(group.clone(), &input.topology)?;
    let mu = parse_measure(&g, Some(&input.measure))?;
    let side = input.side.unwrap_or(Side::Left);
    let report = is_haar(&g, &mu, side)?;
    let results = json!({
        "group": group_summary(&group),
        "topology": topgroup_summary(&g),
        "masses": rats(mu.masses()),
        "side": side,
        "is_haar": report.is_haar(),
        "is_left_haar": report.is_left_haar(),
        "is_right_haar": report.is_right_haar(),
        "checks": report,
    });
    Ok((results, report.is_haar()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructInput {
    group: Value,
    topology: Value,
    k0: Vec<usize>,
}

/// Nonempty closed sets and open identity neighbourhoods tabulated by
/// `construct`.
fn table_sets(g: &FiniteTopGroup, k0: Subset) -> (Vec<Subset>, Vec<Subset>, bool) {
    let atoms = g.atoms();
    let k = atoms.len();
    let n = g.identity_closure();
    let all = g.group().elements();
    if k <= TABLE_ATOM_LIMIT {
        let closed: Vec<Subset> = (1..1u64 << k).map(|m| atoms.union_of(m)).collect();
        // Opens are unions of atoms; those containing the identity contain N.
        let opens: Vec<Subset> = closed.iter().copied().filter(|u| n.is_subset(*u)).collect();
        return (sorted(closed), sorted(opens), false);
    }
    let mut closed: Vec<Subset> = atoms.atoms().to_vec();
    closed.extend([k0, all]);
    (sorted(closed), sorted(vec![n, all]), true)
}

fn sorted(mut sets: Vec<Subset>) -> Vec<Subset> {
    sets.sort_by_key(|s| (s.len(), s.mask()));
    sets.dedup();
    sets
}

fn construct(inputs: &Value, options: &RunOptions) -> Result<(Value, bool), ReportError> {
    let input: ConstructInput = from_value(inputs, "construct input")?;
    let group = parse_group(&input.group, options.max_order)?;
    let g = parse_topgroup(group.clone(), &input.topology)?;
    let k0 = subset(&input.k0, g.order())?;
    let mu = existence_via_covering(&g, k0)?;

    let (closed, opens, truncated) = table_sets(&g, k0);
    let pairs: Vec<(Subset, Subset)> = closed.iter().flat_map(|&k| opens.iter().map(move |&u| (k, u))).collect();
    let table = pairs
        .par_iter()
        .map(|&(k, u)| -> Result<Value, ReportError> {
            let sol = covering_number(CoveringProblem { group: &g, k, s: u })?;
            Ok(json!({ "k": k, "u": u, "count": sol.count, "translates": sol.translates }))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let canonical = canonical_haar(&g);
    let scalar = haar_ratio(&g, &canonical, &mu)?;
    let results = json!({
        "group": group_summary(&group),
        "topology": topgroup_summary(&g),
        "k0": k0,
        "table": table,
        "table_truncated": truncated,
        "masses": rats(mu.masses()),
        "canonical_haar": rats(canonical.masses()),
        "scalar": scalar.as_ref().map(rat),
    });
    Ok((results, scalar.is_some()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientInput {
    group: Value,
    topology: Value,
    #[serde(default)]
    measure: Option<Value>,
}

fn quotient_report(inputs: &Value, options: &RunOptions) -> Result<(Value, bool), ReportError> {
    let input: QuotientInput = from_value(inputs, "quotient input")?;
    let group = parse_group(&input.group, options.max_order)?;
    let g = parse_topgroup(group.clone(), &input.topology)?;
    let mu = parse_measure(&g, input.measure.as_ref())?;
    let q = quotient(&g)?;
    let borel = verify_borel_statements(&q);
    let pushed = pushforward(&q, &mu)?;
    let back = pullback(&q, &pushed)?;
    let round_trip = back == mu && pushforward(&q, &back)? == pushed;
    let base_haar = is_haar(&g, &mu, Side::Left)?.is_left_haar();
    let pushed_haar = is_haar(q.quotient(), &pushed, Side::Left)?.is_left_haar();
    let statements = q.statements();
    let passed = statements.all_hold() && borel.all_hold() && round_trip && base_haar == pushed_haar;
    let results = json!({
        "group": group_summary(&group),
        "topology": topgroup_summary(&g),
        "quotient": {
            "name": q.quotient().group().name(),
            "order": q.quotient().order(),
            "labels": q.labels(),
            "table": q.quotient().group().table(),
        },
        "projection": q.projection(),
        "statements": statements,
        "borel_statements": borel,
        "measure": {
            "masses": rats(mu.masses()),
            "pushforward": rats(pushed.masses()),
            "pullback_of_pushforward": rats(back.masses()),
            "round_trip": round_trip,
            "is_left_haar": base_haar,
            "pushforward_is_left_haar": pushed_haar,
        },
    });
    Ok((results, passed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CounterexampleInput {
    c: String,
    #[serde(default)]
    probe_bound: Option<String>,
}

/// Probe bound used when neither the flag nor the input sets one.
pub const DEFAULT_PROBE_BOUND: i64 = 10;

fn rect(r: &Rect) -> Value {
    json!({ "x": [rat(&r.x_lo), rat(&r.x_hi)], "y": [rat(&r.y_lo), rat(&r.y_hi)] })
}

fn counterexample(inputs: &Value, options: &RunOptions) -> Result<(Value, bool), ReportError> {
    let input: CounterexampleInput = from_value(inputs, "counterexample input")?;
    let c = rational(&input.c)?;
    let probe_bound = match (&options.probe_bound, &input.probe_bound) {
        (Some(flag), _) => flag.clone(),
        (None, Some(text)) => rational(text)?,
        (None, None) => int(DEFAULT_PROBE_BOUND),
    };
    let cert = counterexample_bk(&c, &probe_bound)?;
    let witness = match &cert.witness {
        BkWitness::Translates { probe_bound, count, translates, total } => json!({
            "kind": "disjoint_translates",
            "probe_bound": rat(probe_bound),
            "count": count,
            "translates": translates.iter().map(rect).collect::<Vec<_>>(),
            "container": { "x": ["0/1", "1/1"], "y": "R" },
            "total": exact_and_decimal(total),
        }),
        BkWitness::GridCover { window, cells, cell_mass, total } => json!({
            "kind": "grid_cover",
            "window": window,
            "cells": cells,
            "cell_mass": rat(cell_mass),
            "total": exact_and_decimal(total),
        }),
    };
    let results = json!({
        "c": rat(&cert.input_mass),
        "probe_bound": rat(&probe_bound),
        "verdict": cert.verdict.as_str(),
        "witness": witness,
        "verified": true,
    });
    Ok((results, true))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorInput {
    group: Value,
    topology: Value,
    #[serde(default)]
    measure: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FubiniInput {
    left: FactorInput,
    right: FactorInput,
    function: Vec<String>,
}

fn fubini(inputs: &Value, options: &RunOptions) -> Result<(Value, bool), ReportError> {
    let input: FubiniInput = from_value(inputs, "fubini input")?;
    let factor = |f: &FactorInput| -> Result<(FiniteTopGroup, FiniteMeasure), ReportError> {
        let group = parse_group(&f.group, options.max_order)?;
        let g = parse_topgroup(group, &f.topology)?;
        let mu = parse_measure(&g, f.measure.as_ref())?;
        Ok((g, mu))
    };
    let (g, mu) = factor(&input.left)?;
    let (h, lam) = factor(&input.right)?;
    check_order(g.order() * h.order(), options.max_order)?;
    let values = input.function.iter().map(|v| rational(v)).collect::<Result<Vec<_>, _>>()?;
    let f = PointFunction::new(values);
    let product = product_group(&g, &h)?;
    let continuous = f.len() == product.order() && f.is_continuous(product.space());
    let outcome = fubini_check(&g, &h, &f, &mu, &lam)?;
    let results = json!({
        "left": { "group": group_summary(g.group()), "topology": topgroup_summary(&g), "masses": rats(mu.masses()) },
        "right": { "group": group_summary(h.group()), "topology": topgroup_summary(&h), "masses": rats(lam.masses()) },
        "continuous": continuous,
        "lhs": rat(&outcome.lhs),
        "rhs": rat(&outcome.rhs),
        "equal": outcome.agrees(),
    });
    Ok((results, outcome.agrees()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalSpec {
    lo: String,
    hi: String,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderSpec {
    intervals: Vec<IntervalSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiftSpec {
    a: String,
    b: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneInput {
    set: CylinderSpec,
    #[serde(default)]
    eps: Option<String>,
    #[serde(default)]
    shift: Option<ShiftSpec>,
}

/// Default `eps` for the regularity check.
const DEFAULT_EPS: (i64, i64) = (1, 10);

fn bound(text: &str) -> Result<Bound, ReportError> {
    match text {
        "-inf" => Ok(Bound::NegInf),
        "inf" | "+inf" => Ok(Bound::PosInf),
        _ => Ok(Bound::Finite(rational(text)?)),
    }
}

fn bound_json(b: &Bound) -> Value {
    match b {
        Bound::NegInf => json!("-inf"),
        Bound::Finite(v) => rat(v),
        Bound::PosInf => json!("+inf"),
    }
}

fn cylinder_json(e: &CylinderSet) -> Value {
    let intervals: Vec<Value> = e
        .base
        .intervals()
        .iter()
        .map(|i| {
            json!({
                "lo": bound_json(i.lo()),
                "hi": bound_json(i.hi()),
                "lo_closed": i.lo_closed(),
                "hi_closed": i.hi_closed(),
            })
        })
        .collect();
    json!({ "intervals": intervals })
}

fn length_json(l: &Length) -> Value {
    match l {
        Length::Finite(v) => exact_and_decimal(v),
        Length::Infinite => json!("infinite"),
    }
}

fn plane(inputs: &Value) -> Result<(Value, bool), ReportError> {
    let input: PlaneInput = from_value(inputs, "plane input")?;
    let intervals = input
        .set
        .intervals
        .iter()
        .map(|s| Ok(Interval::new(bound(&s.lo)?, bound(&s.hi)?, s.lo_closed, s.hi_closed)?))
        .collect::<Result<Vec<_>, ReportError>>()?;
    let e = CylinderSet::new(IntervalUnion::new(intervals));
    let eps = match &input.eps {
        Some(text) => rational(text)?,
        None => Rational::new(DEFAULT_EPS.0.into(), DEFAULT_EPS.1.into()),
    };
    let measure = haar_v(&e);
    let mut passed = true;
    let mut results = Map::new();
    results.insert("set".into(), cylinder_json(&e));
    results.insert("haar_v".into(), length_json(&measure));
    results.insert("closed_compact".into(), json!(e.is_closed_compact()));
    results.insert("open".into(), json!(e.is_open()));

    if let Some(shift) = &input.shift {
        let (a, b) = (rational(&shift.a)?, rational(&shift.b)?);
        let moved = translate_v(&e, &a, &b);
        let invariant = haar_v(&moved) == measure;
        passed &= invariant;
        results.insert(
            "translate".into(),
            json!({ "set": cylinder_json(&moved), "haar_v": length_json(&haar_v(&moved)), "invariant": invariant }),
        );
    }

    let regularity = match regularity_gap(&e, &eps) {
        Ok((inner, outer)) => {
            let total = measure.finite().expect("bounded base").clone();
            let inner_gap = &total - haar_v(&inner).finite().expect("bounded inner");
            let outer_gap = haar_v(&outer).finite().expect("bounded outer") - &total;
            let within = inner_gap <= eps && outer_gap <= eps;
            passed &= within;
            json!({
                "eps": rat(&eps),
                "bounded": true,
                "inner": cylinder_json(&inner),
                "outer": cylinder_json(&outer),
                "inner_gap": exact_and_decimal(&inner_gap),
                "outer_gap": exact_and_decimal(&outer_gap),
                "within_eps": within,
            })
        }
        Err(PlaneError::UnboundedBase { inner }) => json!({
            "eps": rat(&eps),
            "bounded": false,
            "inner": cylinder_json(&inner),
            "inner_mass": length_json(&haar_v(&inner)),
        }),
        Err(other) => return Err(other.into()),
    };
    results.insert("regularity".into(), regularity);
    Ok((Value::Object(results), passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(command: Command, input: &str) -> Result<Report, ReportError> {
        run(command, input, &RunOptions::default())
    }

    const Z4_HALF: &str = r#""group": {"family": "cyclic", "params": {"n": 4}}, "topology": {"normal_subgroup": [0, 2]}"#;

    #[test]
    fn verify_haar_passes_and_fails() {
        let ok = run_text(Command::VerifyHaar, &format!(r#"{{{Z4_HALF}, "measure": {{"atom_masses": ["1/1", "1/1"]}}}}"#))
            .unwrap();
        assert!(ok.passed);
        assert_eq!(ok.document["results"]["is_left_haar"], json!(true));
        let bad = run_text(Command::VerifyHaar, &format!(r#"{{{Z4_HALF}, "measure": {{"atom_masses": ["1/1", "2/1"]}}}}"#))
            .unwrap();
        assert_eq!(bad.exit_code(), 1);
        let w = &bad.document["results"]["checks"]["witnesses"][0];
        assert_eq!(w["set"], json!([0, 2]));
        assert_eq!(w["element"], json!(1));
    }

    #[test]
    fn enumerate_counts() {
        for (spec, count) in [
            (r#"{"family": "cyclic", "params": {"n": 4}}"#, 3),
            (r#"{"family": "symmetric3"}"#, 3),
            (r#"{"family": "trivial"}"#, 1),
        ] {
            let r = run_text(Command::Enumerate, &format!(r#"{{"group": {spec}}}"#)).unwrap();
            assert!(r.passed);
            assert_eq!(r.document["results"]["count"], json!(count));
        }
    }

    #[test]
    fn construct_scalars() {
        let r = run_text(Command::Construct, &format!(r#"{{{Z4_HALF}, "k0": [0, 2]}}"#)).unwrap();
        assert_eq!(r.document["results"]["scalar"], json!("1/1"));
        let r = run_text(Command::Construct, &format!(r#"{{{Z4_HALF}, "k0": [0, 1, 2, 3]}}"#)).unwrap();
        assert_eq!(r.document["results"]["scalar"], json!("1/2"));
        let r = run_text(
            Command::Construct,
            r#"{"group": {"family": "trivial"}, "topology": {"normal_subgroup": [0]}, "k0": [0]}"#,
        )
        .unwrap();
        assert_eq!(r.document["results"]["table"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn input_errors() {
        let err = run_text(Command::Enumerate, r#"{"group": {"family": "cyclic", "params": {"n": 4}}, "extra": 1}"#);
        assert_eq!(err.unwrap_err().kind(), "invalid_input");
        let err = run_text(Command::Enumerate, r#"{"group": {"table": [[0, 1], [0, 1]]}}"#).unwrap_err();
        assert_eq!(err.kind(), "invalid_group");
        let err = run_text(Command::Enumerate, r#"{"schema_version": 2, "group": {"family": "trivial"}}"#);
        assert_eq!(err.unwrap_err().kind(), "schema_version");
        let err = run_text(Command::Construct, &format!(r#"{{{Z4_HALF}, "k0": []}}"#)).unwrap_err();
        assert_eq!(err.kind(), "invalid_covering");
        let err = run_text(Command::Counterexample, r#"{"c": "-1/2"}"#).unwrap_err();
        assert_eq!(err.kind(), "invalid_plane_input");
    }

    #[test]
    fn order_cap_is_enforced() {
        let options = RunOptions { max_order: 5, ..RunOptions::default() };
        let err = run(Command::Enumerate, r#"{"group": {"family": "cyclic", "params": {"n": 6}}}"#, &options);
        assert!(matches!(err, Err(ReportError::OrderCap { order: 6, max: 5 })));
    }

    #[test]
    fn counterexample_zero_branch() {
        let r = run_text(Command::Counterexample, r#"{"c": "0/1"}"#).unwrap();
        assert!(r.passed);
        assert_eq!(r.document["results"]["verdict"], json!("NonzeroViolated"));
    }

    #[test]
    fn plane_report() {
        let r = run_text(
            Command::Plane,
            r#"{"set": {"intervals": [{"lo": "0", "hi": "1", "lo_closed": false, "hi_closed": false}]},
                "eps": "1/10", "shift": {"a": "3", "b": "-7"}}"#,
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.document["results"]["haar_v"]["exact"], json!("1/1"));
        assert_eq!(r.document["results"]["regularity"]["inner"]["intervals"][0]["lo"], json!("1/20"));
    }

    #[test]
    fn rendering_is_stable() {
        let input = format!(r#"{{{Z4_HALF}, "measure": {{"atom_masses": ["1", "1"]}}}}"#);
        let a = run(Command::VerifyHaar, &input, &RunOptions { threads: Some(1), ..RunOptions::default() }).unwrap();
        let b = run(Command::VerifyHaar, &input, &RunOptions { threads: Some(4), ..RunOptions::default() }).unwrap();
        assert_eq!(a.render(), b.render());
        assert!(a.render().ends_with("}\n"));
    }
}
