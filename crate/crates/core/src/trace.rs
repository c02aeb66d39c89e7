//! Cross-perspective trace reports and requirement queries.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{codes, sort_diagnostics, Diagnostic};
use crate::id::ElementId;
use crate::index::{ElementRef, ModelIndex};
use crate::model::*;
use crate::validate::{is_allocated, trace_kinds_ok};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KnowledgeReuse {
    pub block: ElementId,
    pub knowledge: ElementId,
}

/// Allocation coverage and link health across perspectives. Every list is
/// sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceReport {
    pub unallocated_functions: Vec<ElementId>,
    pub unallocated_features: Vec<ElementId>,
    pub dangling_links: Vec<TraceLink>,
    pub orphan_requirements: Vec<ElementId>,
    pub knowledge_reuse: Vec<KnowledgeReuse>,
}

impl TraceReport {
    /// Number of findings, knowledge reuse excluded.
    pub fn findings(&self) -> usize {
        self.unallocated_functions.len()
            + self.unallocated_features.len()
            + self.dangling_links.len()
            + self.orphan_requirements.len()
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for id in &self.unallocated_functions {
            out.push(Diagnostic::new(
                codes::TR_UNALLOCATED_FUNCTION,
                Some(id),
                "function is allocated to no structural block",
            ));
        }
        for id in &self.unallocated_features {
            out.push(Diagnostic::new(
                codes::TR_UNALLOCATED_FEATURE,
                Some(id),
                "feature is allocated to no structural block",
            ));
        }
        for link in &self.dangling_links {
            out.push(Diagnostic::new(
                codes::TR_DANGLING,
                Some(&link.id),
                format!("{:?} link `{}` → `{}` has unsuitable endpoints", link.kind, link.source, link.target),
            ));
        }
        for id in &self.orphan_requirements {
            out.push(Diagnostic::new(
                codes::TR_ORPHAN_REQUIREMENT,
                Some(id),
                "requirement constrains nothing",
            ));
        }
        sort_diagnostics(&mut out);
        out
    }
}

pub fn build_trace_report(model: &Model) -> TraceReport {
    let index = ModelIndex::new(model);
    let mut report = TraceReport::default();
    for b in &model.functional.blocks {
        if is_allocated(model, &index, &b.id) {
            continue;
        }
        match b.kind {
            FpBlockKind::Function => report.unallocated_functions.push(b.id.clone()),
            FpBlockKind::Feature => report.unallocated_features.push(b.id.clone()),
        }
    }
    let mut reuse = BTreeSet::new();
    for t in &model.traces {
        let ok = match (index.get(t.source.as_str()), index.get(t.target.as_str())) {
            (Some(s), Some(d)) => trace_kinds_ok(t.kind, &s, &d),
            _ => false,
        };
        if !ok {
            report.dangling_links.push(t.clone());
            continue;
        }
        if t.kind == TraceKind::References {
            if let (Some(ElementRef::SpBlock(_)), Some(ElementRef::Knowledge(_))) =
                (index.get(t.source.as_str()), index.get(t.target.as_str()))
            {
                reuse.insert(KnowledgeReuse {
                    block: t.source.clone(),
                    knowledge: t.target.clone(),
                });
            }
        }
    }
    report.orphan_requirements = model
        .quality
        .iter()
        .filter(|r| r.targets.is_empty())
        .map(|r| r.id.clone())
        .collect();
    report.unallocated_functions.sort();
    report.unallocated_features.sort();
    report.dangling_links.sort_by(|a, b| a.id.cmp(&b.id));
    report.orphan_requirements.sort();
    report.knowledge_reuse = reuse.into_iter().collect();
    report
}

// ----------------------------------------------------------------- queries

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = "=", alias = "==")]
    Eq,
    #[serde(rename = "≠", alias = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "≤", alias = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "≥", alias = ">=")]
    Ge,
    #[serde(rename = "contains")]
    Contains,
}

impl Op {
    pub const ALL: [Op; 7] = [Op::Eq, Op::Ne, Op::Lt, Op::Le, Op::Gt, Op::Ge, Op::Contains];

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Ne => "≠",
            Op::Lt => "<",
            Op::Le => "≤",
            Op::Gt => ">",
            Op::Ge => "≥",
            Op::Contains => "contains",
        }
    }

    fn accepts(self, ord: Ordering) -> bool {
        match self {
            Op::Eq => ord == Ordering::Equal,
            Op::Ne => ord != Ordering::Equal,
            Op::Lt => ord == Ordering::Less,
            Op::Le => ord != Ordering::Greater,
            Op::Gt => ord == Ordering::Greater,
            Op::Ge => ord != Ordering::Less,
            Op::Contains => false,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Op {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "=" | "==" => Op::Eq,
            "≠" | "!=" => Op::Ne,
            "<" => Op::Lt,
            "≤" | "<=" => Op::Le,
            ">" => Op::Gt,
            "≥" | ">=" => Op::Ge,
            "contains" => Op::Contains,
            other => return Err(QueryError::UnknownOperator(other.to_string())),
        })
    }
}

/// One condition `field op value` over requirement fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Predicate {
    pub field: String,
    pub op: Op,
    pub value: String,
}

impl Predicate {
    pub fn new(field: &str, op: Op, value: &str) -> Self {
        Predicate {
            field: field.into(),
            op,
            value: value.into(),
        }
    }
}

impl FromStr for Predicate {
    type Err = QueryError;

    /// Parses `field op value`, e.g. `satisfiability>=0.5` or
    /// `stereotypes contains Safety Requirement`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        const SYMBOLS: [&str; 10] = ["<=", ">=", "!=", "==", "≤", "≥", "≠", "=", "<", ">"];
        if let Some(pos) = s.find(" contains ") {
            return Ok(Predicate::new(s[..pos].trim(), Op::Contains, s[pos + 10..].trim()));
        }
        let found = SYMBOLS
            .iter()
            .filter_map(|sym| s.find(sym).map(|p| (p, *sym)))
            .min_by_key(|&(p, sym)| (p, usize::MAX - sym.len()));
        let Some((pos, sym)) = found else {
            return Err(QueryError::Malformed(s.to_string()));
        };
        let field = s[..pos].trim();
        if field.is_empty() {
            return Err(QueryError::Malformed(s.to_string()));
        }
        Ok(Predicate::new(field, sym.parse()?, s[pos + sym.len()..].trim()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "error")]
pub enum QueryError {
    UnknownField { field: String },
    InvalidValue { field: String, value: String },
    UnsupportedOperator { field: String, op: Op },
    UnknownOperator(String),
    Malformed(String),
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::UnknownField { field } => write!(f, "unknown requirement field `{field}`"),
            QueryError::InvalidValue { field, value } => {
                write!(f, "`{value}` is not a valid value for `{field}`")
            }
            QueryError::UnsupportedOperator { field, op } => {
                write!(f, "operator `{op}` does not apply to `{field}`")
            }
            QueryError::UnknownOperator(op) => write!(f, "unknown operator `{op}`"),
            QueryError::Malformed(text) => write!(f, "cannot parse predicate `{text}`"),
        }
    }
}

/// Field names accepted by [`query_requirements`].
pub const QUERY_FIELDS: [&str; 14] = [
    "id",
    "priority",
    "name",
    "text",
    "satisfiability",
    "futureAvailability",
    "stereotypes",
    "level",
    "assignee",
    "parent",
    "parentType",
    "targets",
    "reasoning",
    "version",
];

enum Compiled {
    Number(fn(&Requirement) -> Option<f64>, f64),
    Availability(FutureAvailability),
    Text(fn(&Requirement) -> Option<String>, String, bool),
    List(fn(&Requirement) -> Vec<String>, String),
}

fn parse_availability(value: &str) -> Option<FutureAvailability> {
    if value.eq_ignore_ascii_case("now") {
        return Some(FutureAvailability::Now);
    }
    value.parse().ok().map(FutureAvailability::Year)
}

fn compile_predicate(p: &Predicate) -> Result<(Op, Compiled), QueryError> {
    let invalid = || QueryError::InvalidValue {
        field: p.field.clone(),
        value: p.value.clone(),
    };
    let number = |get: fn(&Requirement) -> Option<f64>| -> Result<Compiled, QueryError> {
        let v: f64 = p.value.parse().map_err(|_| invalid())?;
        if v.is_nan() {
            return Err(invalid());
        }
        Ok(Compiled::Number(get, v))
    };
    let text = |get: fn(&Requirement) -> Option<String>, fold: bool| Compiled::Text(get, p.value.clone(), fold);
    let compiled = match p.field.as_str() {
        "id" => text(|r| Some(r.id.as_str().into()), false),
        "name" => text(|r| Some(r.name.clone()), false),
        "text" => text(|r| Some(r.text.clone()), false),
        "reasoning" => text(|r| Some(r.reasoning.clone()), false),
        "version" => text(|r| Some(r.version.clone()), false),
        "parent" => text(|r| r.parent.as_ref().map(|p| p.as_str().into()), false),
        "level" => text(|r| Some(r.level.name().into()), true),
        "assignee" => text(|r| r.assignee.as_ref().map(|a| a.name().into()), true),
        "parentType" => text(
            |r| {
                r.parent_type.map(|t| {
                    match t {
                        ParentChildType::Decomposition => "decomposition",
                        ParentChildType::Refinement => "refinement",
                    }
                    .into()
                })
            },
            true,
        ),
        "priority" => number(|r| r.priority.map(|p| p as f64))?,
        "satisfiability" => number(|r| Some(r.satisfiability))?,
        "futureAvailability" => Compiled::Availability(parse_availability(&p.value).ok_or_else(invalid)?),
        "stereotypes" => Compiled::List(|r| r.stereotypes.clone(), p.value.clone()),
        "targets" => Compiled::List(
            |r| r.targets.iter().map(|t| t.as_str().into()).collect(),
            p.value.clone(),
        ),
        _ => return Err(QueryError::UnknownField { field: p.field.clone() }),
    };
    let unsupported = || QueryError::UnsupportedOperator {
        field: p.field.clone(),
        op: p.op,
    };
    match (&compiled, p.op) {
        (Compiled::Number(..) | Compiled::Availability(_), Op::Contains) => return Err(unsupported()),
        (Compiled::List(..), Op::Lt | Op::Le | Op::Gt | Op::Ge) => return Err(unsupported()),
        _ => {}
    }
    Ok((p.op, compiled))
}

fn matches(op: Op, c: &Compiled, r: &Requirement) -> bool {
    match c {
        Compiled::Number(get, v) => match get(r) {
            Some(x) => x.partial_cmp(v).is_some_and(|o| op.accepts(o)),
            None => op == Op::Ne,
        },
        Compiled::Availability(v) => op.accepts(r.future_availability.cmp(v)),
        Compiled::Text(get, v, fold) => match get(r) {
            None => op == Op::Ne,
            Some(x) => {
                let (x, v) = if *fold {
                    (x.to_lowercase(), v.to_lowercase())
                } else {
                    (x, v.clone())
                };
                if op == Op::Contains {
                    x.contains(v.as_str())
                } else {
                    op.accepts(x.as_str().cmp(v.as_str()))
                }
            }
        },
        Compiled::List(get, v) => {
            let has = get(r).iter().any(|x| x == v);
            if op == Op::Ne {
                !has
            } else {
                has
            }
        }
    }
}

/// Requirements satisfying every predicate, ordered by id.
///
/// Text fields compare as strings (`level`, `assignee` and `parentType`
/// case-insensitively), `priority` and `satisfiability` as numbers and
/// `futureAvailability` with `now` before any year. On list fields
/// `=` and `contains` test membership and `≠` its absence. An absent
/// optional value satisfies only `≠`.
pub fn query_requirements<'m>(model: &'m Model, predicates: &[Predicate]) -> Result<Vec<&'m Requirement>, QueryError> {
    let compiled = predicates
        .iter()
        .map(compile_predicate)
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<&Requirement> = model
        .quality
        .iter()
        .filter(|r| compiled.iter().all(|(op, c)| matches(*op, c, r)))
        .collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(rows)
}
