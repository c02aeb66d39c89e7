//! Reading and writing `.imog.json` documents.
//!
//! The canonical form has object keys in byte order, arrays in model order,
//! two-space indentation and a trailing newline. `Constrains` trace links are
//! never written: they are derived from `Requirement::targets` on load.

use std::fmt::Write as _;

use imog_core::diagnostic::tally;
use imog_core::{validate_model, Diagnostic, ElementId, Model, ModelIndex, TraceKind};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Failure to read a document. Exactly one class per failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error", rename_all = "camelCase")]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at `{path}`: expected {expected}, got {got}")]
    Schema { path: String, expected: String, got: String },
    #[error("duplicate id `{id}`")]
    DuplicateId { id: ElementId },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SerializeError {
    #[error("model has {} error(s); first: {}", tally(.0).0, .0.iter().find(|d| d.is_error()).map(|d| d.to_string()).unwrap_or_default())]
    InvalidModel(Vec<Diagnostic>),
}

pub fn parse_document(text: &str) -> Result<Model, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let mut model: Model = serde_path_to_error::deserialize(&value).map_err(|e| {
        let path = e.path().to_string();
        let (expected, got) = split_message(&strip_position(&e.inner().to_string()));
        ParseError::Schema { path, expected, got }
    })?;
    if let Some(i) = model.traces.iter().position(|t| t.kind == TraceKind::Constrains) {
        return Err(ParseError::Schema {
            path: format!("traces[{i}].kind"),
            expected: "`references` or `allocate` (constrains links come from requirement targets)".into(),
            got: "`constrains`".into(),
        });
    }
    if let Some(dup) = ModelIndex::new(&model).duplicates().first() {
        return Err(ParseError::DuplicateId { id: dup.id().clone() });
    }
    model.sync_constrains_links();
    Ok(model)
}

/// The document tree of a model, without validation.
pub fn document_value(model: &Model) -> Value {
    let mut stored = model.clone();
    stored.traces.retain(|t| t.kind != TraceKind::Constrains);
    serde_json::to_value(&stored).expect("model types serialize to JSON")
}

/// Canonical text of a model. Refuses models with Error diagnostics.
pub fn serialize_document(model: &Model) -> Result<String, SerializeError> {
    let diagnostics = validate_model(model);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(SerializeError::InvalidModel(diagnostics));
    }
    Ok(canonical_text(&document_value(model)))
}

/// Pretty-prints with sorted keys regardless of how the map was built.
pub fn canonical_text(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Array(items) if !items.is_empty() => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            newline(out, depth);
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            let mut entries: Vec<_> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            out.push('{');
            for (i, (key, item)) in entries.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
            }
            newline(out, depth);
            out.push('}');
        }
        scalar => {
            let _ = write!(out, "{scalar}");
        }
    }
}

fn newline(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// Splits a serde message into what the schema wanted and what was found.
fn split_message(message: &str) -> (String, String) {
    if let Some(rest) = message.strip_prefix("missing field ") {
        return (format!("field {rest}"), "nothing".into());
    }
    if let Some(rest) = message.strip_prefix("unknown field ") {
        return match rest.split_once(", expected ") {
            Some((field, expected)) => (expected.into(), format!("unknown field {field}")),
            None => ("no further fields".into(), format!("unknown field {rest}")),
        };
    }
    for prefix in ["invalid type: ", "invalid value: ", "unknown variant ", "invalid length "] {
        if let Some(rest) = message.strip_prefix(prefix) {
            if let Some((got, expected)) = rest.split_once(", expected ") {
                return (expected.into(), got.into());
            }
        }
    }
    (message.to_string(), "an invalid value".into())
}
