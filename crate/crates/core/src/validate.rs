//! Whole-model structural validation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::diagnostic::{codes, sort_diagnostics, Diagnostic};
use crate::graph::cyclic_components;
use crate::id::ElementId;
use crate::index::{ElementRef, ModelIndex};
use crate::model::*;

/// Checks every invariant of the model. Returns all violations ordered by
/// code, then element id; an empty list means the model is valid.
pub fn validate_model(model: &Model) -> Vec<Diagnostic> {
    let index = ModelIndex::new(model);
    let mut v = Validator {
        index: &index,
        out: Vec::new(),
    };
    v.version(model);
    v.ids();
    v.strategy(model);
    v.functional(model);
    v.quality(model);
    v.structural();
    v.knowledge(model);
    v.traces(model);
    let mut out = v.out;
    sort_diagnostics(&mut out);
    out
}

struct Validator<'i, 'a> {
    index: &'i ModelIndex<'a>,
    out: Vec<Diagnostic>,
}

impl<'i, 'a> Validator<'i, 'a> {
    fn emit(&mut self, code: &str, id: &ElementId, message: impl Into<alloc::string::String>) {
        self.out.push(Diagnostic::new(code, Some(id), message));
    }

    fn version(&mut self, model: &'a Model) {
        if model.imog_version != IMOG_VERSION {
            self.out.push(Diagnostic::new(
                codes::MC_VERSION,
                None,
                format!("imogVersion `{}` is not `{IMOG_VERSION}`", model.imog_version),
            ));
        }
    }

    fn ids(&mut self) {
        for element in self.index.all() {
            if element.id().is_empty() {
                self.emit(
                    codes::MC_EMPTY_ID,
                    element.id(),
                    format!("{} has an empty id", element.kind_name()),
                );
            }
        }
        for dup in self.index.duplicates() {
            self.emit(
                codes::MC_DUP_ID,
                dup.id(),
                format!("id `{}` is used more than once ({})", dup.id(), dup.kind_name()),
            );
        }
    }

    /// Reports a missing id and returns the element when present.
    fn lookup(&mut self, owner: &ElementId, target: &ElementId, role: &str) -> Option<ElementRef<'a>> {
        let found = self.index.get(target.as_str());
        if found.is_none() {
            self.emit(
                codes::MC_DANGLING,
                owner,
                format!("{role} `{target}` does not exist"),
            );
        }
        found
    }

    fn level(&mut self, owner: &ElementId, level: &AbstractionLevel) {
        if let AbstractionLevel::Custom(name) = level {
            if name.trim().is_empty() {
                self.emit(codes::MC_LEVEL, owner, "custom abstraction level has an empty name");
            } else if AbstractionLevel::PREDEFINED
                .iter()
                .any(|p| p.eq_ignore_ascii_case(name))
            {
                self.emit(
                    codes::MC_LEVEL,
                    owner,
                    format!("custom abstraction level `{name}` shadows a predefined level"),
                );
            }
        }
    }

    fn properties(&mut self, owner: &ElementId, properties: &[Property]) {
        let mut seen = BTreeSet::new();
        for p in properties {
            if p.name.is_empty() {
                self.emit(codes::MC_PROP_NAME, owner, "property with an empty name");
                continue;
            }
            if !seen.insert(p.name.as_str()) {
                self.emit(
                    codes::MC_PROP_DUP,
                    owner,
                    format!("property `{}` is declared twice", p.name),
                );
            }
            match p.name.as_str() {
                AVAILABILITY_PROPERTY if matches!(p.value, Scalar::Bool(_)) => self.emit(
                    codes::MC_PROP_KIND,
                    owner,
                    "Availability must be a year or timestamp",
                ),
                FEASIBILITY_PROPERTY => match p.value {
                    Scalar::Number(n) if (0.0..=1.0).contains(&n) => {}
                    _ => self.emit(
                        codes::MC_PROP_KIND,
                        owner,
                        format!("Feasibility must be a number in [0, 1], got {}", p.value),
                    ),
                },
                _ => {}
            }
        }
    }

    fn strategy(&mut self, model: &'a Model) {
        for div in &model.strategy {
            for e in &div.embedded_elements {
                if e.category.trim().is_empty() || e.text.trim().is_empty() {
                    self.emit(
                        codes::ST_ELEMENT,
                        &e.id,
                        "identifiable element needs a category and a text",
                    );
                }
            }
        }
    }

    // ------------------------------------------------------------ functional

    fn functional(&mut self, model: &'a Model) {
        let fp = &model.functional;
        for b in &fp.blocks {
            if b.name.trim().is_empty() {
                self.emit(codes::FP_NAME, &b.id, "functional block has an empty name");
            }
            self.level(&b.id, &b.level);
            self.properties(&b.id, &b.custom_properties);
        }
        for r in &fp.relations {
            self.fp_relation(r);
        }
        self.forest(model);
        self.vp_cycles(model);
        for g in &fp.groups {
            self.group(g);
        }
    }

    fn fp_relation(&mut self, r: &'a FpRelation) {
        let endpoints = core::iter::once(&r.parent).chain(r.children.iter());
        if r.kind.is_vp_relation() {
            for id in endpoints {
                if let Some(found) = self.lookup(&r.id, id, "endpoint") {
                    if !matches!(found, ElementRef::VariationPoint { .. }) {
                        self.emit(
                            codes::FP_ENDPOINT,
                            &r.id,
                            format!("`{id}` is a {}, not a variation point", found.kind_name()),
                        );
                    }
                }
            }
        } else {
            for id in endpoints {
                if let Some(found) = self.lookup(&r.id, id, "endpoint") {
                    if !matches!(found, ElementRef::FpBlock(_)) {
                        self.emit(
                            codes::FP_ENDPOINT,
                            &r.id,
                            format!("`{id}` is a {}, not a functional block", found.kind_name()),
                        );
                    }
                }
            }
        }

        let n = r.children.len();
        if r.kind.is_group() {
            if n < 2 {
                self.emit(
                    codes::FP_ARITY,
                    &r.id,
                    format!("{} relation needs at least two children, has {n}", r.kind.name()),
                );
            }
        } else if n != 1 {
            self.emit(
                codes::FP_ARITY,
                &r.id,
                format!("{} relation needs exactly one child, has {n}", r.kind.name()),
            );
        }

        match (&r.kind, r.cardinality) {
            (FpRelationKind::Or, None) => {
                self.emit(codes::FP_CARD, &r.id, "Or relation without cardinality")
            }
            (FpRelationKind::Or, Some(c)) => {
                if c.min > c.max {
                    self.emit(codes::FP_CARD, &r.id, format!("min ≤ max violated in {c}"));
                } else if c.min < 1 {
                    self.emit(codes::FP_CARD, &r.id, format!("min must be at least 1 in {c}"));
                } else if c.max as usize > n {
                    self.emit(
                        codes::FP_CARD,
                        &r.id,
                        format!("max exceeds the {n} children in {c}"),
                    );
                }
                if r.pc_type == Some(ParentChildType::Refinement) && c != Cardinality::new(1, 1) {
                    self.emit(
                        codes::FP_REFINEMENT_CARD,
                        &r.id,
                        format!("refinement Or relation must have cardinality [1,1], has {c}"),
                    );
                }
            }
            (_, Some(c)) => self.emit(
                codes::FP_CARD,
                &r.id,
                format!("cardinality {c} on a {} relation", r.kind.name()),
            ),
            (_, None) => {}
        }

        if let Some(vp) = &r.variation_point {
            if !r.kind.is_group() {
                self.emit(
                    codes::FP_VP,
                    &r.id,
                    format!("variation point on a {} relation", r.kind.name()),
                );
            }
            if vp.option_labels.len() != n {
                self.emit(
                    codes::FP_VP,
                    &vp.id,
                    format!(
                        "{} option labels for {n} children",
                        vp.option_labels.len()
                    ),
                );
            }
            let distinct: BTreeSet<_> = vp.option_labels.iter().collect();
            if distinct.len() != vp.option_labels.len() {
                self.emit(codes::FP_VP, &vp.id, "option labels are not pairwise distinct");
            }
        }

        if r.kind == FpRelationKind::VpDerivation && r.children.len() == 1 {
            let source = self.index.variation_point(r.parent.as_str());
            let target = self.index.variation_point(r.children[0].as_str());
            if let (Some((src, _)), Some((dst, _))) = (source, target) {
                let a: BTreeSet<_> = src.option_labels.iter().collect();
                let b: BTreeSet<_> = dst.option_labels.iter().collect();
                if a != b {
                    self.emit(
                        codes::FP_VP_DERIVATION,
                        &r.id,
                        format!(
                            "variation points `{}` and `{}` offer different options",
                            src.id, dst.id
                        ),
                    );
                }
            }
        }
    }

    fn forest(&mut self, model: &'a Model) {
        let fp = &model.functional;
        let mut parents: BTreeMap<&ElementId, Vec<&ElementId>> = BTreeMap::new();
        for r in fp.relations.iter().filter(|r| r.kind.is_parent_child()) {
            for c in &r.children {
                parents.entry(c).or_default().push(&r.parent);
            }
        }
        for (child, ps) in &parents {
            if ps.len() > 1 {
                self.emit(
                    codes::FP_FOREST,
                    child,
                    format!("block has {} parent relations", ps.len()),
                );
            }
        }

        let edges: Vec<(&ElementId, &ElementId)> = parents
            .iter()
            .flat_map(|(c, ps)| ps.iter().map(move |p| (*p, *c)))
            .collect();
        for cycle in cyclic_components(&edges) {
            self.emit(
                codes::FP_FOREST,
                cycle[0],
                format!("parent-child cycle through {}", join(&cycle)),
            );
        }

        let mut roots = BTreeSet::new();
        for root in &fp.roots {
            if !roots.insert(root) {
                self.emit(codes::FP_ROOT, root, "root listed twice");
                continue;
            }
            match self.index.get(root.as_str()) {
                None => self.emit(
                    codes::MC_DANGLING,
                    root,
                    format!("root `{root}` does not exist"),
                ),
                Some(ElementRef::FpBlock(_)) => {
                    if parents.contains_key(root) {
                        self.emit(codes::FP_ROOT, root, "root block has a parent relation");
                    }
                }
                Some(other) => self.emit(
                    codes::FP_ENDPOINT,
                    root,
                    format!("root `{root}` is a {}", other.kind_name()),
                ),
            }
        }
        for b in &fp.blocks {
            if !parents.contains_key(&b.id) && !roots.contains(&b.id) {
                self.emit(
                    codes::FP_ROOT,
                    &b.id,
                    "block has no parent relation and is not a root",
                );
            }
        }
    }

    fn vp_cycles(&mut self, model: &'a Model) {
        let edges: Vec<(&ElementId, &ElementId)> = model
            .functional
            .relations
            .iter()
            .filter(|r| r.kind == FpRelationKind::VpDerivation)
            .flat_map(|r| r.children.iter().map(move |c| (&r.parent, c)))
            .collect();
        for cycle in cyclic_components(&edges) {
            self.emit(
                codes::FP_VP_CYCLE,
                cycle[0],
                format!("derivation cycle through {}", join(&cycle)),
            );
        }
    }

    fn group(&mut self, g: &FpGroup) {
        let distinct: BTreeSet<_> = g.members.iter().collect();
        if distinct.len() != g.members.len() {
            self.emit(codes::FP_GROUP, &g.id, "group lists a member twice");
        }
        if distinct.len() < 2 {
            self.emit(codes::FP_GROUP, &g.id, "group needs at least two members");
        }
        for m in &g.members {
            if let Some(found) = self.lookup(&g.id, m, "member") {
                if !matches!(found, ElementRef::FpBlock(_)) {
                    self.emit(
                        codes::FP_GROUP,
                        &g.id,
                        format!("member `{m}` is a {}", found.kind_name()),
                    );
                }
            }
        }
    }

    // --------------------------------------------------------------- quality

    fn quality(&mut self, model: &'a Model) {
        let mut parent_edges = Vec::new();
        for r in &model.quality {
            if !(0.0..=1.0).contains(&r.satisfiability) {
                self.emit(
                    codes::QP_SATISFIABILITY,
                    &r.id,
                    format!("satisfiability {} is outside [0, 1]", r.satisfiability),
                );
            }
            let statuses = r
                .stereotypes
                .iter()
                .filter(|s| stereotypes::STATUSES.contains(&s.as_str()))
                .count();
            if statuses > 1 {
                self.emit(
                    codes::QP_STATUS,
                    &r.id,
                    format!("{statuses} status stereotypes, at most one allowed"),
                );
            }
            self.level(&r.id, &r.level);
            self.properties(&r.id, &r.custom_attributes);
            if let Some(parent) = &r.parent {
                if let Some(found) = self.lookup(&r.id, parent, "parent") {
                    if matches!(found, ElementRef::Requirement(_)) {
                        parent_edges.push((parent, &r.id));
                    } else {
                        self.emit(
                            codes::QP_PARENT,
                            &r.id,
                            format!("parent `{parent}` is a {}", found.kind_name()),
                        );
                    }
                }
            }
            for t in &r.targets {
                if let Some(found) = self.lookup(&r.id, t, "target") {
                    if !matches!(found, ElementRef::FpBlock(_) | ElementRef::SpBlock(_)) {
                        self.emit(
                            codes::QP_TARGET,
                            &r.id,
                            format!("target `{t}` is a {}", found.kind_name()),
                        );
                    }
                }
            }
        }
        for cycle in cyclic_components(&parent_edges) {
            self.emit(
                codes::QP_CYCLE,
                cycle[0],
                format!("parent cycle through {}", join(&cycle)),
            );
        }
    }

    // ------------------------------------------------------------ structural

    fn structural(&mut self) {
        let index = self.index;
        for element in index.all() {
            match *element {
                ElementRef::SpBlock(b) => self.sp_block(b),
                ElementRef::SpRelation(r) => self.sp_relation(r),
                ElementRef::RefinementGroup(g) => self.refinement_group(g),
                ElementRef::RefinementBlock(rb) => {
                    if rb.name.trim().is_empty() {
                        self.emit(codes::SP_NAME, &rb.id, "refinement block has an empty name");
                    }
                    self.properties(&rb.id, &rb.properties);
                    self.disjoint(&rb.id, &rb.properties, &rb.refinement_groups);
                }
                _ => {}
            }
        }
    }

    fn sp_block(&mut self, b: &SpBlock) {
        if b.name.trim().is_empty() {
            self.emit(codes::SP_NAME, &b.id, "structural block has an empty name");
        }
        self.level(&b.id, &b.level);
        self.properties(&b.id, &b.properties);
        self.disjoint(&b.id, &b.properties, &b.refinement_groups);

        let owner = self
            .index
            .sp_placement(b.id.as_str())
            .and_then(|p| p.variant_of);
        match (owner, &b.parent_block) {
            (Some(owner), Some(parent)) if *parent == owner.id => {}
            (Some(owner), _) => self.emit(
                codes::SP_VARIANT,
                &b.id,
                format!("variant of `{}` must set parentBlock to it", owner.id),
            ),
            (None, Some(parent)) => self.emit(
                codes::SP_VARIANT,
                &b.id,
                format!("parentBlock `{parent}` does not own this block as a variant"),
            ),
            (None, None) => {}
        }

        if let Some(sel) = &b.selected_variant {
            if !b.variants.iter().any(|v| v.id == *sel) {
                self.emit(
                    codes::SP_SELECTED,
                    &b.id,
                    format!("selected variant `{sel}` is not a variant of this block"),
                );
            }
        }

        if let Some(sse) = &b.sse {
            let inputs: BTreeSet<_> = sse.input_properties.iter().collect();
            if let Some(both) = sse.output_properties.iter().find(|o| inputs.contains(o)) {
                self.emit(
                    codes::SP_SSE_IO,
                    &b.id,
                    format!("`{both}` is both an input and an output"),
                );
            }
            for v in &b.variants {
                if let Some(vsse) = &v.sse {
                    let base: BTreeSet<&str> = sse.property_names().collect();
                    let common: BTreeSet<&str> =
                        vsse.property_names().filter(|n| base.contains(n)).collect();
                    if common.len() > 1 {
                        self.emit(
                            codes::SP_SSE_COMMON,
                            &v.id,
                            format!(
                                "solution space shares {} properties with `{}` and replaces it when selected",
                                common.len(),
                                b.id
                            ),
                        );
                    }
                }
            }
        }
    }

    /// Property names of the owner and each of its refinement groups must be
    /// pairwise disjoint. Blocks inside one group are alternatives and may
    /// repeat names among themselves.
    fn disjoint(&mut self, owner: &ElementId, own: &[Property], groups: &[RefinementGroup]) {
        let mut claimed: BTreeMap<alloc::string::String, &str> = BTreeMap::new();
        for p in own {
            claimed.entry(p.name.clone()).or_insert("the block itself");
        }
        for g in groups {
            let mut names = BTreeSet::new();
            group_property_names(g, &mut names);
            for name in names {
                if let Some(previous) = claimed.get(&name) {
                    self.emit(
                        codes::SP_DISJOINT,
                        owner,
                        format!(
                            "property `{name}` declared by refinement group `{}` and by {previous}",
                            g.name
                        ),
                    );
                } else {
                    claimed.insert(name, g.name.as_str());
                }
            }
        }
    }

    fn refinement_group(&mut self, g: &RefinementGroup) {
        if g.name.trim().is_empty() {
            self.emit(codes::SP_NAME, &g.id, "refinement group has an empty name");
        }
        if g.blocks.is_empty() {
            self.emit(codes::SP_REFINEMENT_GROUP, &g.id, "refinement group has no blocks");
        }
        if let Some(sel) = &g.selected_refinement {
            if !g.blocks.iter().any(|b| b.id == *sel) {
                self.emit(
                    codes::SP_SELECTED,
                    &g.id,
                    format!("selected refinement `{sel}` is not in this group"),
                );
            }
        }
    }

    fn sp_relation(&mut self, r: &SpRelation) {
        let source = self.lookup(&r.id, &r.source, "source");
        let target = self.lookup(&r.id, &r.target, "target");
        self.properties(&r.id, &r.properties);
        match r.kind {
            SpRelationKind::Channel => {
                for (end, found) in [(&r.source, source), (&r.target, target)] {
                    if let Some(found) = found {
                        if !matches!(found, ElementRef::SpBlock(_)) {
                            self.emit(
                                codes::SP_CHANNEL,
                                &r.id,
                                format!("channel endpoint `{end}` is a {}", found.kind_name()),
                            );
                        }
                    }
                }
                if r.direction.is_some() {
                    self.emit(codes::SP_CHANNEL, &r.id, "channels carry no direction");
                }
                if r.effect_type.is_some() || r.endpoint_type.is_some() {
                    self.emit(codes::SP_EFFECT, &r.id, "effect attributes on a channel");
                }
            }
            SpRelationKind::Arrow => {
                if r.effect_type.is_some() || r.endpoint_type.is_some() {
                    self.emit(codes::SP_EFFECT, &r.id, "effect attributes on an arrow relation");
                }
            }
            SpRelationKind::Effect => {
                if r.effect_type.is_none() {
                    self.emit(codes::SP_EFFECT, &r.id, "effect relation without effect type");
                }
            }
        }
    }

    // -------------------------------------------------------------- knowledge

    fn knowledge(&mut self, model: &'a Model) {
        for k in &model.knowledge {
            if k.name.trim().is_empty() || k.entry_type.trim().is_empty() {
                self.emit(codes::KP_ENTRY, &k.id, "knowledge entry needs a name and a type");
            }
            self.properties(&k.id, &k.properties);
        }
    }

    // ----------------------------------------------------------------- traces

    fn traces(&mut self, model: &'a Model) {
        let mut mirrored: BTreeSet<(&ElementId, &ElementId)> = BTreeSet::new();
        for t in &model.traces {
            let source = self.lookup(&t.id, &t.source, "source");
            let target = self.lookup(&t.id, &t.target, "target");
            if let (Some(s), Some(d)) = (source, target) {
                if !trace_kinds_ok(t.kind, &s, &d) {
                    self.emit(
                        codes::TR_KIND,
                        &t.id,
                        format!(
                            "{:?} link from {} to {}",
                            t.kind,
                            s.kind_name(),
                            d.kind_name()
                        ),
                    );
                }
            }
            if t.kind == TraceKind::Constrains {
                let listed = model
                    .requirement(t.source.as_str())
                    .is_some_and(|r| r.targets.contains(&t.target));
                if listed {
                    mirrored.insert((&t.source, &t.target));
                } else {
                    self.emit(
                        codes::TR_CONSTRAINS,
                        &t.id,
                        format!("`{}` does not list `{}` as a target", t.source, t.target),
                    );
                }
            }
        }
        for r in &model.quality {
            for target in &r.targets {
                if !mirrored.contains(&(&r.id, target)) {
                    self.emit(
                        codes::TR_CONSTRAINS,
                        &r.id,
                        format!("target `{target}` has no constrains link"),
                    );
                }
            }
        }

        for f in model
            .functional
            .blocks
            .iter()
            .filter(|b| b.kind == FpBlockKind::Function)
        {
            if !is_allocated(model, self.index, &f.id) {
                self.emit(
                    codes::TR_UNALLOCATED_FUNCTION,
                    &f.id,
                    format!("function `{}` is allocated to no structural block", f.name),
                );
            }
        }
    }
}

fn group_property_names(group: &RefinementGroup, names: &mut BTreeSet<alloc::string::String>) {
    for rb in &group.blocks {
        names.extend(rb.properties.iter().map(|p| p.name.clone()));
        for g in &rb.refinement_groups {
            group_property_names(g, names);
        }
    }
}

/// Whether a trace link's endpoints have the kinds its relation requires.
pub(crate) fn trace_kinds_ok(kind: TraceKind, source: &ElementRef<'_>, target: &ElementRef<'_>) -> bool {
    match kind {
        TraceKind::Allocate => {
            matches!(source, ElementRef::FpBlock(_)) && matches!(target, ElementRef::SpBlock(_))
        }
        TraceKind::Constrains => {
            matches!(source, ElementRef::Requirement(_))
                && matches!(target, ElementRef::FpBlock(_) | ElementRef::SpBlock(_))
        }
        TraceKind::References => matches!(
            (source, target),
            (ElementRef::FpBlock(_), ElementRef::Identifiable(_))
                | (ElementRef::SpBlock(_), ElementRef::Knowledge(_))
        ),
    }
}

pub(crate) fn is_allocated(model: &Model, index: &ModelIndex<'_>, block: &ElementId) -> bool {
    model.traces.iter().any(|t| {
        t.kind == TraceKind::Allocate && t.source == *block && index.sp_block(t.target.as_str()).is_some()
    })
}

fn join(ids: &[&ElementId]) -> alloc::string::String {
    let parts: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
    parts.join(" → ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::Severity;
    use crate::testing::*;
    use alloc::string::String;

    fn codes_of(m: &Model) -> Vec<String> {
        let mut c: Vec<String> = validate_model(m)
            .into_iter()
            .filter(|d| d.severity != Severity::Info)
            .map(|d| d.code)
            .collect();
        c.dedup();
        c
    }

    fn relation<'m>(m: &'m mut Model, id: &str) -> &'m mut FpRelation {
        m.functional.relations.iter_mut().find(|r| r.id == id).unwrap()
    }

    #[test]
    fn or_cardinality_inverted() {
        let mut m = escooter_context();
        relation(&mut m, "rel.choice").cardinality = Some(Cardinality::new(2, 1));
        let d = validate_model(&m);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, codes::FP_CARD);
        assert!(d[0].message.contains("min ≤ max violated"));
        assert!(d[0].is_error());
    }

    #[test]
    fn derivation_cycle() {
        let mut m = escooter_full();
        m.functional
            .relations
            .push(rel("rel.back", FpRelationKind::VpDerivation, "vp.damper", &["vp.type"]));
        assert_eq!(codes_of(&m), [codes::FP_VP_CYCLE]);
    }

    #[test]
    fn single_mutations() {
        type Mutation = fn(&mut Model);
        let cases: &[(&str, Mutation)] = &[
            (codes::MC_DUP_ID, |m| {
                let mut k = m.knowledge[0].clone();
                k.id = "goal.affordable".into();
                m.knowledge.push(k);
            }),
            (codes::MC_DANGLING, |m| m.traces.push(TraceLink::new("t.x", TraceKind::References, "fp.root", "nowhere"))),
            (codes::MC_VERSION, |m| m.imog_version = "0.9".into()),
            (codes::FP_NAME, |m| m.functional.blocks[2].name = String::new()),
            (codes::FP_ARITY, |m| {
                m.functional.relations.push(rel(
                    "rel.r2",
                    FpRelationKind::Require,
                    "fp.simple",
                    &["fp.carrying", "fp.balancing"],
                ))
            }),
            (codes::FP_VP, |m| {
                relation(m, "rel.choice").variation_point = Some(vp("vp.choice", "Use", &["Carry", "Balance"]));
            }),
            (codes::FP_VP_DERIVATION, |m| {
                relation(m, "rel.damperType").variation_point.as_mut().unwrap().option_labels[1] = "Luxury".into();
            }),
            (codes::FP_ROOT, |m| m.functional.roots.push("fp.driving".into())),
            (codes::QP_SATISFIABILITY, |m| m.quality[0].satisfiability = 1.5),
            (codes::QP_CYCLE, |m| {
                m.quality[1].parent = Some("3".into());
                m.quality[1].parent_type = Some(ParentChildType::Decomposition);
            }),
            (codes::QP_STATUS, |m| m.quality[0].stereotypes.push("Proposed".into())),
            (codes::SP_SELECTED, |m| {
                if let StructuralElement::Block(b) = &mut m.structural.top_models[0].elements[2] {
                    b.selected_variant = Some("sp.driver".into());
                }
            }),
            (codes::SP_DISJOINT, |m| {
                if let StructuralElement::Block(b) = &mut m.structural.top_models[0].elements[2] {
                    b.properties.push(num("Material", 1.0, "x"));
                }
            }),
            (codes::KP_ENTRY, |m| m.knowledge[0].entry_type = String::new()),
            (codes::TR_KIND, |m| m.traces.push(TraceLink::new("t.bad", TraceKind::Allocate, "fn.braking", "1"))),
            (codes::TR_UNALLOCATED_FUNCTION, |m| m.traces.retain(|t| t.id != "al.braking")),
        ];
        let mut failures = Vec::new();
        for (code, mutate) in cases {
            let mut m = escooter_full();
            mutate(&mut m);
            let got = codes_of(&m);
            if got != [*code] {
                failures.push(alloc::format!("{code}: {got:?}"));
            }
        }
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn idempotent() {
        let m = escooter_full();
        assert_eq!(validate_model(&m), validate_model(&m));
    }

    #[test]
    fn fixtures_are_clean() {
        assert_eq!(validate_model(&Model::default()), []);
        assert_eq!(validate_model(&escooter_context()), []);
        assert_eq!(validate_model(&escooter_context_fixture()), []);
        // the comfort variant replaces the base solution space: informational only
        for m in [escooter_full(), escooter_variants()] {
            let d = validate_model(&m);
            assert_eq!(d.len(), 1, "{d:?}");
            assert_eq!(d[0].code, codes::SP_SSE_COMMON);
            assert_eq!(d[0].severity, Severity::Info);
        }
    }
}
