//! Abstraction-level filtering.
//!
//! A view keeps the elements whose level is selected. Relations, groups and
//! trace links survive only when every endpoint survives. Elements without a
//! level (strategy elements, knowledge entries) are always kept. Refinement
//! groups follow their owning block, and a variant is dropped with its base
//! block.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::id::ElementId;
use crate::model::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterError {
    EmptyFilter,
}

impl fmt::Display for FilterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterError::EmptyFilter => f.write_str("at least one abstraction level is required"),
        }
    }
}

/// Read-only projection of a model onto a set of abstraction levels.
#[derive(Debug, Clone)]
pub struct ModelView<'a> {
    model: &'a Model,
    levels: BTreeSet<AbstractionLevel>,
    retained: BTreeSet<&'a str>,
}

pub fn filter_by_abstraction_level<'a>(
    model: &'a Model,
    levels: &BTreeSet<AbstractionLevel>,
) -> Result<ModelView<'a>, FilterError> {
    if levels.is_empty() {
        return Err(FilterError::EmptyFilter);
    }
    let mut view = ModelView {
        model,
        levels: levels.clone(),
        retained: BTreeSet::new(),
    };
    view.collect();
    Ok(view)
}

/// Every abstraction level used by some element of the model.
pub fn levels_in(model: &Model) -> BTreeSet<AbstractionLevel> {
    let mut levels: BTreeSet<AbstractionLevel> = model
        .functional
        .blocks
        .iter()
        .map(|b| b.level.clone())
        .chain(model.quality.iter().map(|r| r.level.clone()))
        .collect();
    let index = crate::index::ModelIndex::new(model);
    levels.extend(index.sp_blocks().map(|b| b.level.clone()));
    levels
}

impl<'a> ModelView<'a> {
    fn keep(&mut self, id: &'a ElementId) {
        self.retained.insert(id.as_str());
    }

    fn collect(&mut self) {
        let model = self.model;
        for div in &model.strategy {
            for e in &div.embedded_elements {
                self.keep(&e.id);
            }
        }
        for b in &model.functional.blocks {
            if self.levels.contains(&b.level) {
                self.keep(&b.id);
            }
        }
        // Block relations first so that variation points exist before the
        // relations between them are considered.
        for r in model.functional.relations.iter().filter(|r| !r.kind.is_vp_relation()) {
            if self.all_retained(core::iter::once(&r.parent).chain(&r.children)) {
                self.keep(&r.id);
                if let Some(vp) = &r.variation_point {
                    self.keep(&vp.id);
                }
            }
        }
        for r in model.functional.relations.iter().filter(|r| r.kind.is_vp_relation()) {
            if self.all_retained(core::iter::once(&r.parent).chain(&r.children)) {
                self.keep(&r.id);
            }
        }
        for g in &model.functional.groups {
            if self.all_retained(g.members.iter()) {
                self.keep(&g.id);
            }
        }
        for r in &model.quality {
            if self.levels.contains(&r.level) {
                self.keep(&r.id);
            }
        }
        let mut relations = Vec::new();
        for top in &model.structural.top_models {
            self.collect_elements(&top.elements, &mut relations);
        }
        for r in relations {
            if self.contains(r.source.as_str()) && self.contains(r.target.as_str()) {
                self.keep(&r.id);
            }
        }
        for k in &model.knowledge {
            self.keep(&k.id);
        }
        for t in &model.traces {
            if self.contains(t.source.as_str()) && self.contains(t.target.as_str()) {
                self.keep(&t.id);
            }
        }
    }

    fn collect_elements(&mut self, elements: &'a [StructuralElement], relations: &mut Vec<&'a SpRelation>) {
        for e in elements {
            match e {
                StructuralElement::Block(b) => self.collect_block(b, relations),
                StructuralElement::Relation(r) => relations.push(r),
                StructuralElement::Package(p) => self.collect_elements(&p.elements, relations),
                StructuralElement::Note(_) => {}
            }
        }
    }

    fn collect_block(&mut self, b: &'a SpBlock, relations: &mut Vec<&'a SpRelation>) {
        if self.levels.contains(&b.level) {
            self.keep(&b.id);
            for g in &b.refinement_groups {
                self.keep_group(g);
            }
            for v in &b.variants {
                self.collect_block(v, relations);
            }
        }
        if let Some(d) = &b.decomposition {
            self.collect_elements(&d.elements, relations);
        }
    }

    fn keep_group(&mut self, g: &'a RefinementGroup) {
        self.keep(&g.id);
        for rb in &g.blocks {
            self.keep(&rb.id);
            for nested in &rb.refinement_groups {
                self.keep_group(nested);
            }
        }
    }

    fn all_retained<'x>(&self, mut ids: impl Iterator<Item = &'x ElementId>) -> bool {
        ids.all(|id| self.retained.contains(id.as_str()))
    }

    pub fn model(&self) -> &'a Model {
        self.model
    }

    pub fn levels(&self) -> &BTreeSet<AbstractionLevel> {
        &self.levels
    }

    pub fn contains(&self, id: &str) -> bool {
        self.retained.contains(id)
    }

    /// Ids of every retained element, sorted.
    pub fn retained_ids(&self) -> impl Iterator<Item = &'a str> + '_ {
        self.retained.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.retained.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retained.is_empty()
    }

    pub fn fp_blocks(&self) -> impl Iterator<Item = &'a FpBlock> + '_ {
        self.model
            .functional
            .blocks
            .iter()
            .filter(|b| self.contains(b.id.as_str()))
    }

    pub fn fp_relations(&self) -> impl Iterator<Item = &'a FpRelation> + '_ {
        self.model
            .functional
            .relations
            .iter()
            .filter(|r| self.contains(r.id.as_str()))
    }

    pub fn requirements(&self) -> impl Iterator<Item = &'a Requirement> + '_ {
        self.model
            .quality
            .iter()
            .filter(|r| self.contains(r.id.as_str()))
    }

    /// Materializes the view as a standalone model.
    ///
    /// Functional blocks that lose their parent relation become roots, and
    /// retained structural elements nested in a dropped block are lifted into
    /// the nearest retained container. References to dropped elements are
    /// removed.
    pub fn to_model(&self) -> Model {
        let m = self.model;
        let blocks: Vec<FpBlock> = self.fp_blocks().cloned().collect();
        let relations: Vec<FpRelation> = self.fp_relations().cloned().collect();
        let has_parent: BTreeSet<&ElementId> = relations
            .iter()
            .filter(|r| r.kind.is_parent_child())
            .flat_map(|r| r.children.iter())
            .collect();
        let mut roots: Vec<ElementId> = m
            .functional
            .roots
            .iter()
            .filter(|r| self.contains(r.as_str()))
            .cloned()
            .collect();
        for b in &blocks {
            if !has_parent.contains(&b.id) && !roots.contains(&b.id) {
                roots.push(b.id.clone());
            }
        }
        let functional = FunctionalModel {
            groups: m
                .functional
                .groups
                .iter()
                .filter(|g| self.contains(g.id.as_str()))
                .cloned()
                .collect(),
            blocks,
            relations,
            roots,
        };

        let quality = self
            .requirements()
            .map(|r| {
                let mut r = r.clone();
                r.targets.retain(|t| self.contains(t.as_str()));
                if r.parent.as_ref().is_some_and(|p| !self.contains(p.as_str())) {
                    r.parent = None;
                    r.parent_type = None;
                }
                r
            })
            .collect();

        let structural = StructuralModel {
            top_models: m
                .structural
                .top_models
                .iter()
                .map(|d| DecompositionModel {
                    elements: self.project_elements(&d.elements),
                })
                .collect(),
        };

        let mut out = Model {
            imog_version: m.imog_version.clone(),
            strategy: m.strategy.clone(),
            functional,
            quality,
            structural,
            knowledge: m.knowledge.clone(),
            traces: m
                .traces
                .iter()
                .filter(|t| self.contains(t.id.as_str()))
                .cloned()
                .collect(),
        };
        out.sync_constrains_links();
        out
    }

    fn project_elements(&self, elements: &[StructuralElement]) -> Vec<StructuralElement> {
        let mut out = Vec::new();
        for e in elements {
            match e {
                StructuralElement::Block(b) => {
                    if self.contains(b.id.as_str()) {
                        out.push(StructuralElement::Block(self.project_block(b)));
                    } else if let Some(d) = &b.decomposition {
                        out.extend(self.project_elements(&d.elements));
                    }
                }
                StructuralElement::Relation(r) => {
                    if self.contains(r.id.as_str()) {
                        out.push(e.clone());
                    }
                }
                StructuralElement::Package(p) => out.push(StructuralElement::Package(Package {
                    name: p.name.clone(),
                    elements: self.project_elements(&p.elements),
                })),
                StructuralElement::Note(_) => out.push(e.clone()),
            }
        }
        out
    }

    fn project_block(&self, b: &SpBlock) -> SpBlock {
        let mut b = b.clone();
        b.decomposition = b.decomposition.map(|d| DecompositionModel {
            elements: self.project_elements(&d.elements),
        });
        b.variants = b
            .variants
            .iter()
            .filter(|v| self.contains(v.id.as_str()))
            .map(|v| self.project_block(v))
            .collect();
        if b
            .selected_variant
            .as_ref()
            .is_some_and(|s| !self.contains(s.as_str()))
        {
            b.selected_variant = None;
        }
        b
    }
}
