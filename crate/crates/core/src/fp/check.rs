use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree::{BasicFeatureTree, CrossTreeKind, EdgeKind};
use super::{Configuration, FpError};
use crate::id::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Rule {
    RootNotSelected,
    ParentNotSelected,
    MandatoryMissing,
    ExactlyOne,
    Cardinality,
    Require,
    Exclude,
    VariationPointChoice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub rule: Rule,
    pub element: ElementId,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "status", content = "violations")]
pub enum Validity {
    Valid,
    Invalid(Vec<Violation>),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Validity::Valid => &[],
            Validity::Invalid(v) => v,
        }
    }
}

/// Checks a configuration against the tree rules one by one.
pub fn is_valid_configuration(tree: &BasicFeatureTree, cfg: &Configuration) -> Result<Validity, FpError> {
    let set = tree.block_set(cfg)?;
    let selected = |i: usize| set.contains(i);
    let mut violations = Vec::new();
    let mut violate = |rule: Rule, element: &ElementId, message: String| {
        violations.push(Violation {
            rule,
            element: element.clone(),
            message,
        })
    };

    for (i, node) in tree.nodes.iter().enumerate() {
        if node.root && !selected(i) {
            violate(Rule::RootNotSelected, &node.id, format!("root `{}` not selected", node.id));
        }
        if let Some(p) = node.parent {
            if selected(i) && !selected(p) {
                violate(
                    Rule::ParentNotSelected,
                    &node.id,
                    format!("`{}` selected without its parent `{}`", node.id, tree.id(p)),
                );
            }
        }
    }

    for edge in &tree.edges {
        if !selected(edge.parent) {
            continue;
        }
        let chosen = edge.children.iter().filter(|&&c| selected(c)).count();
        let name = edge
            .variation_point
            .as_ref()
            .map(|vp| vp.label.clone())
            .unwrap_or_else(|| String::from(edge.relation.as_str()));
        match edge.kind {
            EdgeKind::Mandatory => {
                if chosen == 0 {
                    let child = tree.id(edge.children[0]);
                    violate(
                        Rule::MandatoryMissing,
                        child,
                        format!("mandatory `{child}` missing under `{}`", tree.id(edge.parent)),
                    );
                }
            }
            EdgeKind::Optional => {}
            EdgeKind::AlternativeGroup => {
                if chosen != 1 {
                    violate(
                        Rule::ExactlyOne,
                        &edge.relation,
                        format!("exactly one option of \"{name}\" must be selected, {chosen} are"),
                    );
                }
            }
            EdgeKind::OrGroup { min, max } => {
                if chosen < min as usize || chosen > max as usize {
                    violate(
                        Rule::Cardinality,
                        &edge.relation,
                        format!("\"{name}\" allows [{min},{max}] options, {chosen} selected"),
                    );
                }
            }
        }
    }

    for c in &tree.cross_tree {
        let (from, to) = (tree.id(c.from), tree.id(c.to));
        match c.kind {
            CrossTreeKind::Require if selected(c.from) && !selected(c.to) => violate(
                Rule::Require,
                &c.origin,
                format!("`{from}` requires `{to}`"),
            ),
            CrossTreeKind::Exclude if selected(c.from) && selected(c.to) => violate(
                Rule::Exclude,
                &c.origin,
                format!("`{from}` excludes `{to}`"),
            ),
            _ => {}
        }
    }

    for (vp_id, label) in &cfg.vp_choices {
        let (edge, vp) = tree
            .variation_point(vp_id.as_str())
            .ok_or_else(|| FpError::UnknownId(vp_id.clone()))?;
        match vp.option_labels.iter().position(|l| l == label) {
            None => violate(
                Rule::VariationPointChoice,
                vp_id,
                format!("\"{}\" has no option \"{label}\"", vp.label),
            ),
            Some(pos) => {
                let child = edge.children[pos];
                if !selected(child) {
                    violate(
                        Rule::VariationPointChoice,
                        vp_id,
                        format!(
                            "option \"{label}\" of \"{}\" chosen but `{}` not selected",
                            vp.label,
                            tree.id(child)
                        ),
                    );
                }
            }
        }
    }

    Ok(if violations.is_empty() {
        Validity::Valid
    } else {
        Validity::Invalid(violations)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::normalize;
    use crate::testing::escooter_context;

    const BASE: [&str; 7] = [
        "fp.root",
        "fp.driving",
        "fp.damping",
        "fp.showingInsurance",
        "fp.simple",
        "fp.carrying",
        "fp.balancing",
    ];

    #[test]
    fn valid_configuration() {
        let tree = normalize(&escooter_context(), false);
        assert_eq!(is_valid_configuration(&tree, &Configuration::of(BASE)).unwrap(), Validity::Valid);
    }

    #[test]
    fn two_alternatives_violate_exactly_one() {
        let tree = normalize(&escooter_context(), false);
        let cfg = Configuration::of(BASE.iter().copied().chain(["fp.comfort"]));
        let v = is_valid_configuration(&tree, &cfg).unwrap();
        assert_eq!(v.violations().len(), 1);
        assert_eq!(v.violations()[0].rule, Rule::ExactlyOne);
        assert!(v.violations()[0].message.contains("\"E-Scooter Type\""));
    }

    #[test]
    fn empty_selection_misses_root() {
        let tree = normalize(&escooter_context(), false);
        let v = is_valid_configuration(&tree, &Configuration::default()).unwrap();
        assert_eq!(v.violations()[0].rule, Rule::RootNotSelected);
    }

    #[test]
    fn unknown_id() {
        let tree = normalize(&escooter_context(), false);
        assert_eq!(
            is_valid_configuration(&tree, &Configuration::of(["nope"])),
            Err(FpError::UnknownId("nope".into()))
        );
    }

    #[test]
    fn vp_choice_must_match_selection() {
        let tree = normalize(&escooter_context(), false);
        let mut cfg = Configuration::of(BASE);
        cfg.vp_choices.insert("vp.type".into(), "Comfort".into());
        let v = is_valid_configuration(&tree, &cfg).unwrap();
        assert_eq!(v.violations()[0].rule, Rule::VariationPointChoice);
        cfg.vp_choices.insert("vp.type".into(), "Simple".into());
        assert!(is_valid_configuration(&tree, &cfg).unwrap().is_valid());
    }
}
