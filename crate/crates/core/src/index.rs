//! Id lookup across every perspective of a model.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Perspective {
    Strategy,
    Functional,
    Quality,
    Structural,
    Knowledge,
    /// Trace links belong to no single perspective.
    Traces,
}

impl fmt::Display for Perspective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Perspective::Strategy => "strategy",
            Perspective::Functional => "functional",
            Perspective::Quality => "quality",
            Perspective::Structural => "structural",
            Perspective::Knowledge => "knowledge",
            Perspective::Traces => "traces",
        };
        f.write_str(name)
    }
}

/// Borrowed handle to any identifiable element of a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementRef<'a> {
    Identifiable(&'a IdentifiableElement),
    FpBlock(&'a FpBlock),
    FpRelation(&'a FpRelation),
    VariationPoint { vp: &'a VariationPoint, relation: &'a FpRelation },
    FpGroup(&'a FpGroup),
    Requirement(&'a Requirement),
    SpBlock(&'a SpBlock),
    SpRelation(&'a SpRelation),
    RefinementGroup(&'a RefinementGroup),
    RefinementBlock(&'a RefinementBlock),
    Knowledge(&'a KnowledgeEntry),
    Trace(&'a TraceLink),
}

impl<'a> ElementRef<'a> {
    pub fn perspective(&self) -> Perspective {
        match self {
            ElementRef::Identifiable(_) => Perspective::Strategy,
            ElementRef::FpBlock(_)
            | ElementRef::FpRelation(_)
            | ElementRef::VariationPoint { .. }
            | ElementRef::FpGroup(_) => Perspective::Functional,
            ElementRef::Requirement(_) => Perspective::Quality,
            ElementRef::SpBlock(_)
            | ElementRef::SpRelation(_)
            | ElementRef::RefinementGroup(_)
            | ElementRef::RefinementBlock(_) => Perspective::Structural,
            ElementRef::Knowledge(_) => Perspective::Knowledge,
            ElementRef::Trace(_) => Perspective::Traces,
        }
    }

    pub fn id(&self) -> &'a ElementId {
        match self {
            ElementRef::Identifiable(e) => &e.id,
            ElementRef::FpBlock(e) => &e.id,
            ElementRef::FpRelation(e) => &e.id,
            ElementRef::VariationPoint { vp, .. } => &vp.id,
            ElementRef::FpGroup(e) => &e.id,
            ElementRef::Requirement(e) => &e.id,
            ElementRef::SpBlock(e) => &e.id,
            ElementRef::SpRelation(e) => &e.id,
            ElementRef::RefinementGroup(e) => &e.id,
            ElementRef::RefinementBlock(e) => &e.id,
            ElementRef::Knowledge(e) => &e.id,
            ElementRef::Trace(e) => &e.id,
        }
    }

    /// Short kind name used in messages.
    pub fn kind_name(&self) -> &'static str {
        match self {
            ElementRef::Identifiable(_) => "identifiable element",
            ElementRef::FpBlock(b) => match b.kind {
                FpBlockKind::Feature => "feature",
                FpBlockKind::Function => "function",
            },
            ElementRef::FpRelation(_) => "functional relation",
            ElementRef::VariationPoint { .. } => "variation point",
            ElementRef::FpGroup(_) => "group",
            ElementRef::Requirement(_) => "requirement",
            ElementRef::SpBlock(_) => "structural block",
            ElementRef::SpRelation(_) => "structural relation",
            ElementRef::RefinementGroup(_) => "refinement group",
            ElementRef::RefinementBlock(_) => "refinement block",
            ElementRef::Knowledge(_) => "knowledge entry",
            ElementRef::Trace(_) => "trace link",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LookupError {
    NotFound(ElementId),
}

impl fmt::Display for LookupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LookupError::NotFound(id) => write!(f, "no element with id `{id}`"),
        }
    }
}

/// Where a structural block sits: owning variant parent, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpPlacement<'a> {
    pub variant_of: Option<&'a SpBlock>,
}

/// All ids of a model mapped to their elements. The first occurrence of an
/// id wins; later occurrences are recorded in `duplicates`.
#[derive(Debug, Clone)]
pub struct ModelIndex<'a> {
    elements: BTreeMap<&'a str, ElementRef<'a>>,
    sp_placement: BTreeMap<&'a str, SpPlacement<'a>>,
    duplicates: Vec<ElementRef<'a>>,
    order: Vec<ElementRef<'a>>,
}

impl<'a> ModelIndex<'a> {
    pub fn new(model: &'a Model) -> Self {
        let mut index = ModelIndex {
            elements: BTreeMap::new(),
            sp_placement: BTreeMap::new(),
            duplicates: Vec::new(),
            order: Vec::new(),
        };
        for div in &model.strategy {
            for e in &div.embedded_elements {
                index.insert(ElementRef::Identifiable(e));
            }
        }
        for b in &model.functional.blocks {
            index.insert(ElementRef::FpBlock(b));
        }
        for r in &model.functional.relations {
            index.insert(ElementRef::FpRelation(r));
            if let Some(vp) = &r.variation_point {
                index.insert(ElementRef::VariationPoint { vp, relation: r });
            }
        }
        for g in &model.functional.groups {
            index.insert(ElementRef::FpGroup(g));
        }
        for r in &model.quality {
            index.insert(ElementRef::Requirement(r));
        }
        for top in &model.structural.top_models {
            index.insert_decomposition(top);
        }
        for k in &model.knowledge {
            index.insert(ElementRef::Knowledge(k));
        }
        for t in &model.traces {
            index.insert(ElementRef::Trace(t));
        }
        index
    }

    fn insert(&mut self, element: ElementRef<'a>) {
        self.order.push(element);
        let key = element.id().as_str();
        if self.elements.contains_key(key) {
            self.duplicates.push(element);
        } else {
            self.elements.insert(key, element);
        }
    }

    fn insert_decomposition(&mut self, decomposition: &'a DecompositionModel) {
        self.insert_elements(&decomposition.elements);
    }

    fn insert_elements(&mut self, elements: &'a [StructuralElement]) {
        for element in elements {
            match element {
                StructuralElement::Block(b) => self.insert_sp_block(b, None),
                StructuralElement::Relation(r) => self.insert(ElementRef::SpRelation(r)),
                StructuralElement::Package(p) => self.insert_elements(&p.elements),
                StructuralElement::Note(_) => {}
            }
        }
    }

    fn insert_sp_block(&mut self, block: &'a SpBlock, variant_of: Option<&'a SpBlock>) {
        self.insert(ElementRef::SpBlock(block));
        self.sp_placement
            .entry(block.id.as_str())
            .or_insert(SpPlacement { variant_of });
        for group in &block.refinement_groups {
            self.insert_refinement_group(group);
        }
        if let Some(d) = &block.decomposition {
            self.insert_decomposition(d);
        }
        for v in &block.variants {
            self.insert_sp_block(v, Some(block));
        }
    }

    fn insert_refinement_group(&mut self, group: &'a RefinementGroup) {
        self.insert(ElementRef::RefinementGroup(group));
        for rb in &group.blocks {
            self.insert(ElementRef::RefinementBlock(rb));
            for g in &rb.refinement_groups {
                self.insert_refinement_group(g);
            }
        }
    }

    pub fn get(&self, id: &str) -> Option<ElementRef<'a>> {
        self.elements.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<ElementRef<'a>, LookupError> {
        self.get(id).ok_or_else(|| LookupError::NotFound(id.into()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.elements.contains_key(id)
    }

    pub fn fp_block(&self, id: &str) -> Option<&'a FpBlock> {
        match self.get(id)? {
            ElementRef::FpBlock(b) => Some(b),
            _ => None,
        }
    }

    pub fn sp_block(&self, id: &str) -> Option<&'a SpBlock> {
        match self.get(id)? {
            ElementRef::SpBlock(b) => Some(b),
            _ => None,
        }
    }

    pub fn variation_point(&self, id: &str) -> Option<(&'a VariationPoint, &'a FpRelation)> {
        match self.get(id)? {
            ElementRef::VariationPoint { vp, relation } => Some((vp, relation)),
            _ => None,
        }
    }

    pub fn sp_placement(&self, id: &str) -> Option<SpPlacement<'a>> {
        self.sp_placement.get(id).copied()
    }

    /// Elements whose id was already taken by an earlier element.
    pub fn duplicates(&self) -> &[ElementRef<'a>] {
        &self.duplicates
    }

    /// Every element in document order, duplicates included.
    pub fn all(&self) -> &[ElementRef<'a>] {
        &self.order
    }

    /// Every structural block (variants included) in document order.
    pub fn sp_blocks(&self) -> impl Iterator<Item = &'a SpBlock> + '_ {
        self.order.iter().filter_map(|e| match e {
            ElementRef::SpBlock(b) => Some(*b),
            _ => None,
        })
    }
}

/// Looks up the element carrying `id`.
pub fn resolve_reference<'a>(model: &'a Model, id: &str) -> Result<ElementRef<'a>, LookupError> {
    ModelIndex::new(model).resolve(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_has_nothing() {
        let model = Model::default();
        assert_eq!(resolve_reference(&model, "x"), Err(LookupError::NotFound("x".into())));
    }

    #[test]
    fn requirement_is_tagged_quality() {
        let mut model = Model::default();
        model
            .quality
            .push(Requirement::new("r1", "Speed", 1.0, AbstractionLevel::Context));
        let handle = resolve_reference(&model, "r1").unwrap();
        assert_eq!(handle.perspective(), Perspective::Quality);
        assert!(matches!(handle, ElementRef::Requirement(r) if r.name == "Speed"));
    }

    #[test]
    fn nested_structural_elements_are_indexed() {
        let mut variant = SpBlock::new("v", "Variant", AbstractionLevel::System);
        variant.parent_block = Some("b".into());
        let mut block = SpBlock::new("b", "Base", AbstractionLevel::System);
        block.variants.push(variant);
        block.refinement_groups.push(RefinementGroup {
            id: "g".into(),
            name: "Conductor".into(),
            blocks: alloc::vec![RefinementBlock {
                id: "rb".into(),
                name: "Copper".into(),
                description: Default::default(),
                stereotype: None,
                properties: Vec::new(),
                refinement_groups: Vec::new(),
                discussion: Vec::new(),
                version: Default::default(),
            }],
            selected_refinement: None,
        });
        let mut model = Model::default();
        model.structural.top_models.push(DecompositionModel {
            elements: alloc::vec![StructuralElement::Package(Package {
                name: "p".into(),
                elements: alloc::vec![StructuralElement::Block(block)],
            })],
        });
        let index = ModelIndex::new(&model);
        assert!(matches!(index.get("rb"), Some(ElementRef::RefinementBlock(_))));
        assert_eq!(index.sp_placement("v").unwrap().variant_of.unwrap().id, "b");
        assert!(index.sp_placement("b").unwrap().variant_of.is_none());
        assert_eq!(index.sp_blocks().count(), 2);
    }

    #[test]
    fn duplicates_are_recorded() {
        let mut model = Model::default();
        model.functional.blocks.push(FpBlock::new(
            "a",
            "A",
            FpBlockKind::Feature,
            AbstractionLevel::Context,
        ));
        model
            .quality
            .push(Requirement::new("a", "dup", 0.5, AbstractionLevel::Context));
        let index = ModelIndex::new(&model);
        assert_eq!(index.duplicates().len(), 1);
        assert!(matches!(index.get("a"), Some(ElementRef::FpBlock(_))));
    }
}
