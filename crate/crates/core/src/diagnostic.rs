//! Uniform finding record emitted by every checker, plus the code registry.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_id: Option<ElementId>,
    pub message: String,
}

impl Diagnostic {
    /// Builds a diagnostic whose severity comes from the registry entry.
    pub fn new(code: &str, element_id: Option<&ElementId>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: codes::severity_of(code),
            code: code.into(),
            element_id: element_id.cloned(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.severity, self.code)?;
        if let Some(id) = &self.element_id {
            write!(f, " [{id}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Orders diagnostics by code, then element id, then message.
pub fn sort_diagnostics(diagnostics: &mut Vec<Diagnostic>) {
    diagnostics.sort_by(|a, b| {
        (a.code.as_str(), &a.element_id, a.message.as_str()).cmp(&(
            b.code.as_str(),
            &b.element_id,
            b.message.as_str(),
        ))
    });
    diagnostics.dedup();
}

/// Counts of errors and warnings, in that order.
pub fn tally(diagnostics: &[Diagnostic]) -> (usize, usize) {
    diagnostics.iter().fold((0, 0), |(e, w), d| match d.severity {
        Severity::Error => (e + 1, w),
        Severity::Warning => (e, w + 1),
        Severity::Info => (e, w),
    })
}

/// Stable diagnostic codes. Each code has exactly one severity.
pub mod codes {
    use super::Severity;

    pub const MC_EMPTY_ID: &str = "MC-EMPTYID";
    pub const MC_DUP_ID: &str = "MC-DUPID";
    pub const MC_DANGLING: &str = "MC-DANGLING";
    pub const MC_LEVEL: &str = "MC-LEVEL";
    pub const MC_PROP_NAME: &str = "MC-PROPNAME";
    pub const MC_PROP_DUP: &str = "MC-PROPDUP";
    pub const MC_PROP_KIND: &str = "MC-PROPKIND";
    pub const MC_VERSION: &str = "MC-VERSION";

    pub const ST_ELEMENT: &str = "ST-ELEMENT";

    pub const FP_NAME: &str = "FP-NAME";
    pub const FP_ENDPOINT: &str = "FP-ENDPOINT";
    pub const FP_ARITY: &str = "FP-ARITY";
    pub const FP_CARD: &str = "FP-CARD";
    pub const FP_REFINEMENT_CARD: &str = "FP-REFCARD";
    pub const FP_VP: &str = "FP-VP";
    pub const FP_VP_DERIVATION: &str = "FP-VPDERIV";
    pub const FP_VP_CYCLE: &str = "FP-VPCYCLE";
    pub const FP_FOREST: &str = "FP-FOREST";
    pub const FP_ROOT: &str = "FP-ROOT";
    pub const FP_GROUP: &str = "FP-GROUP";

    pub const QP_SATISFIABILITY: &str = "QP-SAT";
    pub const QP_CYCLE: &str = "QP-CYCLE";
    pub const QP_STATUS: &str = "QP-STATUS";
    pub const QP_PARENT: &str = "QP-PARENT";
    pub const QP_TARGET: &str = "QP-TARGET";

    pub const SP_NAME: &str = "SP-NAME";
    pub const SP_VARIANT: &str = "SP-VARIANT";
    pub const SP_DISJOINT: &str = "SP-DISJOINT";
    pub const SP_SELECTED: &str = "SP-SELECTED";
    pub const SP_REFINEMENT_GROUP: &str = "SP-REFGROUP";
    pub const SP_SSE_IO: &str = "SP-SSEIO";
    pub const SP_SSE_COMMON: &str = "SP-SSECOMMON";
    pub const SP_CHANNEL: &str = "SP-CHANNEL";
    pub const SP_EFFECT: &str = "SP-EFFECT";
    pub const SP_PROP: &str = "SP-PROP";
    pub const SP_REQ_CONFLICT: &str = "SP-REQCONFLICT";

    pub const KP_ENTRY: &str = "KP-ENTRY";

    pub const TR_KIND: &str = "TR-KIND";
    pub const TR_CONSTRAINS: &str = "TR-CONSTRAINS";
    pub const TR_UNALLOCATED_FUNCTION: &str = "TR-UNALLOCFN";
    pub const TR_UNALLOCATED_FEATURE: &str = "TR-UNALLOCFEAT";
    pub const TR_DANGLING: &str = "TR-DANGLING";
    pub const TR_ORPHAN_REQUIREMENT: &str = "TR-ORPHANREQ";

    /// `(code, severity, meaning)` for every code any checker may emit.
    pub const REGISTRY: &[(&str, Severity, &str)] = &[
        (MC_EMPTY_ID, Severity::Error, "element id is empty"),
        (MC_DUP_ID, Severity::Error, "element id used more than once in the model"),
        (MC_DANGLING, Severity::Error, "reference to an id that does not exist"),
        (MC_LEVEL, Severity::Error, "custom abstraction level empty or shadowing a predefined level"),
        (MC_PROP_NAME, Severity::Error, "property name is empty"),
        (MC_PROP_DUP, Severity::Error, "property name repeated within one owner"),
        (MC_PROP_KIND, Severity::Error, "Availability/Feasibility property with the wrong value kind"),
        (MC_VERSION, Severity::Error, "unsupported imogVersion"),
        (ST_ELEMENT, Severity::Error, "identifiable element with empty category or text"),
        (FP_NAME, Severity::Error, "functional block with empty name"),
        (FP_ENDPOINT, Severity::Error, "functional relation endpoint has the wrong element kind"),
        (FP_ARITY, Severity::Error, "wrong number of children for the relation kind"),
        (FP_CARD, Severity::Error, "Or cardinality missing, misplaced or outside 1 <= min <= max <= children"),
        (FP_REFINEMENT_CARD, Severity::Error, "refinement-typed Or relation without cardinality [1,1]"),
        (FP_VP, Severity::Error, "variation point misplaced or option labels not matching the children"),
        (FP_VP_DERIVATION, Severity::Error, "derivation between variation points with different option labels"),
        (FP_VP_CYCLE, Severity::Error, "derivation relations form a cycle"),
        (FP_FOREST, Severity::Error, "block with several parents or on a parent-child cycle"),
        (FP_ROOT, Severity::Error, "root with a parent, or parentless block that is not a root"),
        (FP_GROUP, Severity::Error, "group with fewer than two distinct functional blocks"),
        (QP_SATISFIABILITY, Severity::Error, "satisfiability outside [0, 1]"),
        (QP_CYCLE, Severity::Error, "requirement parent chain is cyclic"),
        (QP_STATUS, Severity::Error, "more than one requirement status stereotype"),
        (QP_PARENT, Severity::Error, "requirement parent is not a requirement"),
        (QP_TARGET, Severity::Error, "requirement target is not a functional or structural block"),
        (SP_NAME, Severity::Error, "structural element with empty name"),
        (SP_VARIANT, Severity::Error, "variant parent reference inconsistent with ownership"),
        (SP_DISJOINT, Severity::Error, "property declared by a block and its refinement groups more than once"),
        (SP_SELECTED, Severity::Error, "selected variant or refinement is not a member"),
        (SP_REFINEMENT_GROUP, Severity::Error, "refinement group without refinement blocks"),
        (SP_SSE_IO, Severity::Error, "solution space input and output properties overlap"),
        (SP_SSE_COMMON, Severity::Info, "variant solution space shares more than one property and replaces the base one"),
        (SP_CHANNEL, Severity::Error, "channel endpoint is not a structural block, or channel has a direction"),
        (SP_EFFECT, Severity::Error, "effect type present on a non-effect relation or missing on an effect"),
        (SP_PROP, Severity::Warning, "requirement attribute differs from the block's effective property"),
        (SP_REQ_CONFLICT, Severity::Error, "two confirmed requirements on one block disagree on an attribute"),
        (KP_ENTRY, Severity::Error, "knowledge entry with empty name or type"),
        (TR_KIND, Severity::Error, "trace link endpoints of the wrong kind"),
        (TR_CONSTRAINS, Severity::Error, "constrains link not mirrored by a requirement target"),
        (TR_UNALLOCATED_FUNCTION, Severity::Warning, "function allocated to no structural block"),
        (TR_UNALLOCATED_FEATURE, Severity::Info, "feature allocated to no structural block"),
        (TR_DANGLING, Severity::Error, "trace link whose endpoints miss the kind constraints"),
        (TR_ORPHAN_REQUIREMENT, Severity::Warning, "requirement without targets"),
    ];

    /// Severity registered for `code`. Unknown codes are errors.
    pub fn severity_of(code: &str) -> Severity {
        REGISTRY
            .iter()
            .find(|(c, _, _)| *c == code)
            .map(|(_, s, _)| *s)
            .unwrap_or(Severity::Error)
    }

    pub fn is_registered(code: &str) -> bool {
        REGISTRY.iter().any(|(c, _, _)| *c == code)
    }
}
