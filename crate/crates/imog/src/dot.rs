//! Graphviz export of one perspective.
//!
//! Legend (also written as a comment block at the top of every graph):
//!
//! | element | rendering |
//! |---|---|
//! | functional block | box, filled by level: context `#fff3b0`, system `#c8e6c9`, component `#e1bee7`; functions have rounded corners |
//! | Mandatory | solid edge, filled dot head |
//! | Optional | solid edge, hollow dot head |
//! | Alternative | solid edge to a junction (small diamond) labelled with the variation point, then one edge per child labelled with its option |
//! | Or | solid edge to a junction (small circle) labelled `[min,max]`, then one edge per child |
//! | Require | dashed edge labelled `requires` |
//! | Exclude | dashed edge, tee heads on both ends, labelled `excludes` |
//! | VP derivation | dotted edge between junctions labelled `derives` |
//! | custom relation | dotted edge labelled with its type |
//! | group | note node with dotted, headless edges to its members |
//! | structural block | box filled by level; variants dashed |
//! | decomposition | solid edge with diamond tail from the whole to the part |
//! | variant | dashed edge labelled `variant` |
//! | refinement group / refinement | folder / component nodes; the selected refinement edge is bold |
//! | Channel / Arrow / Effect | bold headless / solid / dashed red edge |
//! | requirement | note node |
//! | requirement parent-child | solid edge labelled with the parent type |
//! | constrains | dashed edge labelled `«constrains»` to an ellipse for the target |

use std::collections::BTreeSet;
use std::fmt::Write as _;

use imog_core::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
#[derive(clap::ValueEnum)]
pub enum DotPerspective {
    Functional,
    Structural,
    Quality,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DotError {
    #[error("the {0:?} perspective has no elements")]
    EmptyPerspective(DotPerspective),
}

const LEGEND: &str = "\
  // legend
  //   box fill: context #fff3b0, system #c8e6c9, component #e1bee7
  //   mandatory: head dot / optional: head odot
  //   alternative: diamond junction, edges labelled by option
  //   or: circle junction labelled [min,max]
  //   requires: dashed / excludes: dashed, tee both ends
  //   derives: dotted between junctions / custom: dotted, labelled
  //   decomposition: diamond tail / variant: dashed
  //   channel: bold, no head / effect: dashed red
  //   constrains: dashed, labelled
";

pub fn export_dot(model: &Model, perspective: DotPerspective) -> Result<String, DotError> {
    let mut g = Graph::default();
    match perspective {
        DotPerspective::Functional => {
            if model.functional.blocks.is_empty() {
                return Err(DotError::EmptyPerspective(perspective));
            }
            functional(&mut g, model);
        }
        DotPerspective::Structural => {
            if ModelIndex::new(model).sp_blocks().next().is_none() {
                return Err(DotError::EmptyPerspective(perspective));
            }
            for top in &model.structural.top_models {
                decomposition(&mut g, None, top);
            }
        }
        DotPerspective::Quality => {
            if model.quality.is_empty() {
                return Err(DotError::EmptyPerspective(perspective));
            }
            quality(&mut g, model);
        }
    }
    let name = match perspective {
        DotPerspective::Functional => "functional",
        DotPerspective::Structural => "structural",
        DotPerspective::Quality => "quality",
    };
    Ok(g.finish(name))
}

#[derive(Default)]
struct Graph {
    body: String,
    declared: BTreeSet<String>,
    clusters: usize,
}

impl Graph {
    fn node(&mut self, id: &str, attrs: &[(&str, &str)]) {
        if self.declared.insert(id.to_string()) {
            let _ = writeln!(self.body, "  {} [{}];", quote(id), attr_list(attrs));
        }
    }

    fn edge(&mut self, from: &str, to: &str, attrs: &[(&str, &str)]) {
        let _ = write!(self.body, "  {} -> {}", quote(from), quote(to));
        if attrs.is_empty() {
            self.body.push_str(";\n");
        } else {
            let _ = writeln!(self.body, " [{}];", attr_list(attrs));
        }
    }

    fn finish(self, name: &str) -> String {
        format!(
            "digraph {name} {{\n{LEGEND}  rankdir=TB;\n  node [fontname=\"Helvetica\", style=filled, fillcolor=white];\n  edge [fontname=\"Helvetica\"];\n{}}}\n",
            self.body
        )
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn attr_list(attrs: &[(&str, &str)]) -> String {
    attrs
        .iter()
        .map(|(k, v)| format!("{k}={}", quote(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn level_color(level: &AbstractionLevel) -> &'static str {
    match level {
        AbstractionLevel::Context => "#fff3b0",
        AbstractionLevel::System => "#c8e6c9",
        AbstractionLevel::Component => "#e1bee7",
        AbstractionLevel::Custom(_) => "white",
    }
}

fn functional(g: &mut Graph, model: &Model) {
    let fp = &model.functional;
    for b in &fp.blocks {
        let style = match b.kind {
            FpBlockKind::Function => "filled,rounded",
            _ => "filled",
        };
        let periph = if fp.roots.contains(&b.id) { "2" } else { "1" };
        g.node(
            b.id.as_str(),
            &[("label", &b.name), ("shape", "box"), ("style", style), ("fillcolor", level_color(&b.level)), ("peripheries", periph)],
        );
    }
    // junction of each relation owning a variation point, for derivations
    let junction_of = |vp: &ElementId| {
        fp.relations
            .iter()
            .find(|r| r.variation_point.as_ref().is_some_and(|v| &v.id == vp))
            .map(|r| r.id.as_str().to_string())
    };
    for r in &fp.relations {
        let (p, id) = (r.parent.as_str(), r.id.as_str());
        match &r.kind {
            FpRelationKind::Mandatory | FpRelationKind::Optional => {
                let head = if r.kind == FpRelationKind::Mandatory { "dot" } else { "odot" };
                for c in &r.children {
                    g.edge(p, c.as_str(), &[("arrowhead", head), ("id", id)]);
                }
            }
            FpRelationKind::Alternative | FpRelationKind::Or => {
                let (shape, label) = if r.kind == FpRelationKind::Or {
                    let card = r.cardinality.unwrap_or(Cardinality::new(1, r.children.len() as u32));
                    ("circle", card.to_string())
                } else {
                    ("diamond", r.variation_point.as_ref().map(|v| v.label.clone()).unwrap_or_default())
                };
                g.node(id, &[("label", ""), ("shape", shape), ("width", "0.15"), ("fillcolor", "black")]);
                g.edge(p, id, &[("label", &label), ("arrowhead", "none")]);
                for (i, c) in r.children.iter().enumerate() {
                    let option = r
                        .variation_point
                        .as_ref()
                        .and_then(|v| v.option_labels.get(i))
                        .map(String::as_str)
                        .unwrap_or("");
                    if option.is_empty() {
                        g.edge(id, c.as_str(), &[]);
                    } else {
                        g.edge(id, c.as_str(), &[("label", option)]);
                    }
                }
            }
            FpRelationKind::Require => {
                for c in &r.children {
                    g.edge(p, c.as_str(), &[("style", "dashed"), ("label", "requires"), ("id", id)]);
                }
            }
            FpRelationKind::Exclude => {
                for c in &r.children {
                    g.edge(
                        p,
                        c.as_str(),
                        &[("style", "dashed"), ("label", "excludes"), ("dir", "both"), ("arrowhead", "tee"), ("arrowtail", "tee"), ("id", id)],
                    );
                }
            }
            FpRelationKind::VpDerivation => {
                let from = junction_of(&r.parent);
                for c in &r.children {
                    if let (Some(from), Some(to)) = (from.as_deref(), junction_of(c)) {
                        g.edge(from, &to, &[("style", "dotted"), ("label", "derives"), ("id", id)]);
                    }
                }
            }
            FpRelationKind::CustomConstraint(t) | FpRelationKind::Custom1to1(t) => {
                for c in &r.children {
                    g.edge(p, c.as_str(), &[("style", "dotted"), ("label", t), ("id", id)]);
                }
            }
            FpRelationKind::CustomVp(t) => {
                let from = junction_of(&r.parent);
                for c in &r.children {
                    if let (Some(from), Some(to)) = (from.as_deref(), junction_of(c)) {
                        g.edge(from, &to, &[("style", "dotted"), ("label", t), ("id", id)]);
                    }
                }
            }
        }
    }
    for grp in &fp.groups {
        let label = if grp.enabled { "group" } else { "group (disabled)" };
        g.node(grp.id.as_str(), &[("label", label), ("shape", "note")]);
        for m in &grp.members {
            g.edge(grp.id.as_str(), m.as_str(), &[("style", "dotted"), ("arrowhead", "none")]);
        }
    }
}

fn decomposition(g: &mut Graph, owner: Option<&str>, d: &DecompositionModel) {
    for e in &d.elements {
        element(g, owner, e);
    }
}

fn element(g: &mut Graph, owner: Option<&str>, e: &StructuralElement) {
    match e {
        StructuralElement::Block(b) => {
            sp_block(g, b, false);
            if let Some(o) = owner {
                g.edge(o, b.id.as_str(), &[("dir", "back"), ("arrowtail", "diamond")]);
            }
        }
        StructuralElement::Relation(r) => {
            let mut attrs: Vec<(&str, &str)> = vec![("id", r.id.as_str())];
            if let Some(l) = &r.label {
                attrs.push(("label", l));
            }
            match r.kind {
                SpRelationKind::Channel => attrs.extend([("style", "bold"), ("arrowhead", "none")]),
                SpRelationKind::Arrow => {}
                SpRelationKind::Effect => attrs.extend([("style", "dashed"), ("color", "red")]),
            }
            if r.direction == Some(Direction::Bidirectional) {
                attrs.push(("dir", "both"));
            }
            g.edge(r.source.as_str(), r.target.as_str(), &attrs);
        }
        StructuralElement::Package(p) => {
            g.clusters += 1;
            let _ = writeln!(g.body, "  subgraph cluster_{} {{\n    label={};", g.clusters, quote(&p.name));
            for inner in &p.elements {
                element(g, owner, inner);
            }
            g.body.push_str("  }\n");
        }
        StructuralElement::Note(_) => {}
    }
}

fn sp_block(g: &mut Graph, b: &SpBlock, variant: bool) {
    let style = if variant { "filled,dashed" } else { "filled" };
    g.node(b.id.as_str(), &[("label", &b.name), ("shape", "box"), ("style", style), ("fillcolor", level_color(&b.level))]);
    let id = b.id.as_str();
    if let Some(d) = &b.decomposition {
        decomposition(g, Some(id), d);
    }
    refinement_groups(g, id, &b.refinement_groups);
    for v in &b.variants {
        sp_block(g, v, true);
        let bold = b.selected_variant.as_ref() == Some(&v.id);
        let mut attrs = vec![("style", if bold { "dashed,bold" } else { "dashed" }), ("label", "variant")];
        if bold {
            attrs.push(("penwidth", "2"));
        }
        g.edge(id, v.id.as_str(), &attrs);
    }
}

fn refinement_groups(g: &mut Graph, owner: &str, groups: &[RefinementGroup]) {
    for grp in groups {
        g.node(grp.id.as_str(), &[("label", &grp.name), ("shape", "folder")]);
        g.edge(owner, grp.id.as_str(), &[("arrowhead", "empty")]);
        for r in &grp.blocks {
            g.node(r.id.as_str(), &[("label", &r.name), ("shape", "component")]);
            if grp.selected_refinement.as_ref() == Some(&r.id) {
                g.edge(grp.id.as_str(), r.id.as_str(), &[("style", "bold")]);
            } else {
                g.edge(grp.id.as_str(), r.id.as_str(), &[]);
            }
            refinement_groups(g, r.id.as_str(), &r.refinement_groups);
        }
    }
}

fn quality(g: &mut Graph, model: &Model) {
    let index = ModelIndex::new(model);
    for r in &model.quality {
        let label = format!("{}: {}\nsat {}", r.id, r.name, r.satisfiability);
        g.node(r.id.as_str(), &[("label", &label), ("shape", "note"), ("fillcolor", level_color(&r.level))]);
    }
    for r in &model.quality {
        if let Some(p) = &r.parent {
            let kind = match r.parent_type {
                Some(ParentChildType::Refinement) => "refinement",
                _ => "decomposition",
            };
            g.edge(p.as_str(), r.id.as_str(), &[("label", kind)]);
        }
    }
    for r in &model.quality {
        for t in &r.targets {
            if model.requirement(t.as_str()).is_none() {
                let name = match index.get(t.as_str()) {
                    Some(ElementRef::FpBlock(b)) => b.name.clone(),
                    Some(ElementRef::SpBlock(b)) => b.name.clone(),
                    _ => t.as_str().to_string(),
                };
                g.node(t.as_str(), &[("label", &name), ("shape", "ellipse")]);
            }
            g.edge(r.id.as_str(), t.as_str(), &[("style", "dashed"), ("label", "«constrains»")]);
        }
    }
}
