use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;
use crate::index::ModelIndex;
use crate::model::*;

/// What-if choices for variants and refinements. Entries override the
/// `selectedVariant` / `selectedRefinement` defaults stored in the model.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionState {
    #[serde(default)]
    pub variant_choices: BTreeMap<ElementId, ElementId>,
    #[serde(default)]
    pub refinement_choices: BTreeMap<ElementId, ElementId>,
}

impl SelectionState {
    pub fn with_variant(mut self, block: &str, variant: &str) -> Self {
        self.variant_choices.insert(block.into(), variant.into());
        self
    }

    pub fn with_refinement(mut self, group: &str, refinement: &str) -> Self {
        self.refinement_choices.insert(group.into(), refinement.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Origin {
    Base,
    Variant,
    Refinement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EffectiveProperty {
    pub name: String,
    pub value: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub origin: Origin,
    /// The block, variant or refinement block that declared it.
    pub source: ElementId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RuleKind {
    VariantOverwrite,
    NestedVariant,
    PropertyAdded,
    PropertyOverwritten,
    SseExtended,
    SseReplaced,
    DecompositionUnion,
    RefinementGroupAdded,
    RefinementGroupOverwritten,
    RefinementOvertaken,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AppliedRule {
    pub rule: RuleKind,
    /// Element whose selection triggered the rule.
    pub source: ElementId,
    pub detail: String,
}

/// A structural block after its variant and refinement selections apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EffectiveBlock {
    pub id: ElementId,
    pub name: String,
    pub description: String,
    pub level: AbstractionLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stereotype: Option<SpStereotype>,
    pub discussion: Vec<String>,
    pub version: String,
    pub properties: Vec<EffectiveProperty>,
    pub decomposition: DecompositionModel,
    /// Solution space descriptions in effect, base first.
    pub sse: Vec<SolutionSpaceDescription>,
    pub refinement_groups: Vec<RefinementGroup>,
    /// Referenced internal models, the selected variant's first.
    pub internal_model_refs: Vec<String>,
    /// Selected variant chain, outermost first.
    pub applied_variants: Vec<ElementId>,
    pub provenance: Vec<AppliedRule>,
}

impl EffectiveBlock {
    pub fn property(&self, name: &str) -> Option<&EffectiveProperty> {
        self.properties.iter().find(|p| p.name == name)
    }

    fn base(block: &SpBlock) -> Self {
        EffectiveBlock {
            id: block.id.clone(),
            name: block.name.clone(),
            description: block.description.clone(),
            level: block.level.clone(),
            stereotype: block.stereotype.clone(),
            discussion: block.discussion.clone(),
            version: block.version.clone(),
            properties: block
                .properties
                .iter()
                .map(|p| EffectiveProperty {
                    name: p.name.clone(),
                    value: p.value.clone(),
                    unit: p.unit.clone(),
                    origin: Origin::Base,
                    source: block.id.clone(),
                })
                .collect(),
            decomposition: block.decomposition.clone().unwrap_or_default(),
            sse: block.sse.iter().cloned().collect(),
            refinement_groups: block.refinement_groups.clone(),
            internal_model_refs: block.internal_model_ref.iter().cloned().collect(),
            applied_variants: Vec::new(),
            provenance: Vec::new(),
        }
    }

    fn log(&mut self, rule: RuleKind, source: &ElementId, detail: String) {
        self.provenance.push(AppliedRule {
            rule,
            source: source.clone(),
            detail,
        });
    }

    /// Inserts or overwrites by name, logging which happened.
    fn put_property(&mut self, property: EffectiveProperty, trigger: &ElementId) {
        match self.properties.iter_mut().find(|p| p.name == property.name) {
            Some(existing) => {
                let detail = format!(
                    "`{}` = {} overwrites {}",
                    property.name, property.value, existing.value
                );
                *existing = property;
                self.log(RuleKind::PropertyOverwritten, trigger, detail);
            }
            None => {
                let detail = format!("`{}` = {}", property.name, property.value);
                self.properties.push(property);
                self.log(RuleKind::PropertyAdded, trigger, detail);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "error", content = "id")]
pub enum SpError {
    UnknownId(ElementId),
    IllegalSelection(ElementId),
}

impl fmt::Display for SpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpError::UnknownId(id) => write!(f, "unknown structural element `{id}`"),
            SpError::IllegalSelection(owner) => {
                write!(f, "selection for `{owner}` names no member of it")
            }
        }
    }
}

/// Applies variant and refinement selections to a structural block.
///
/// With a variant selected (explicitly or by the stored default), the
/// variant is first resolved on its own, so its own selected variant applies
/// before it. The result then
/// 1. overwrites name, discussion, version, description, level and stereotype,
/// 2. extends the properties, a same-named variant property overwriting,
/// 3. extends the solution space descriptions when base and variant share at
///    most one property name, and otherwise replaces them,
/// 4. appends the variant decomposition without merging same-named blocks,
/// 5. adds refinement groups, a same-named variant group replacing the base one.
///
/// Finally the selected block of every effective refinement group hands its
/// properties to the block, recursing through nested groups.
pub fn resolve_effective_block(
    model: &Model,
    block_id: &str,
    sel: &SelectionState,
) -> Result<EffectiveBlock, SpError> {
    let index = ModelIndex::new(model);
    resolve_with_index(&index, block_id, sel)
}

pub(crate) fn resolve_with_index(
    index: &ModelIndex<'_>,
    block_id: &str,
    sel: &SelectionState,
) -> Result<EffectiveBlock, SpError> {
    check_selection(index, sel)?;
    let block = index
        .sp_block(block_id)
        .ok_or_else(|| SpError::UnknownId(block_id.into()))?;
    let mut visiting = BTreeSet::new();
    let mut eff = merge_variants(block, sel, &mut visiting)?;
    let groups = eff.refinement_groups.clone();
    for g in &groups {
        overtake(&mut eff, g, sel);
    }
    Ok(eff)
}

fn check_selection(index: &ModelIndex<'_>, sel: &SelectionState) -> Result<(), SpError> {
    for (owner, variant) in &sel.variant_choices {
        let block = index
            .sp_block(owner.as_str())
            .ok_or_else(|| SpError::UnknownId(owner.clone()))?;
        if !block.variants.iter().any(|v| v.id == *variant) {
            return Err(SpError::IllegalSelection(owner.clone()));
        }
    }
    for (group, refinement) in &sel.refinement_choices {
        let g = match index.get(group.as_str()) {
            Some(crate::index::ElementRef::RefinementGroup(g)) => g,
            _ => return Err(SpError::UnknownId(group.clone())),
        };
        if !g.blocks.iter().any(|b| b.id == *refinement) {
            return Err(SpError::IllegalSelection(group.clone()));
        }
    }
    Ok(())
}

fn merge_variants<'m>(
    block: &'m SpBlock,
    sel: &SelectionState,
    visiting: &mut BTreeSet<&'m str>,
) -> Result<EffectiveBlock, SpError> {
    if !visiting.insert(block.id.as_str()) {
        return Err(SpError::IllegalSelection(block.id.clone()));
    }
    let mut eff = EffectiveBlock::base(block);
    let choice = sel
        .variant_choices
        .get(&block.id)
        .or(block.selected_variant.as_ref());
    let Some(choice) = choice else {
        return Ok(eff);
    };
    let variant = block
        .variants
        .iter()
        .find(|v| v.id == *choice)
        .ok_or_else(|| SpError::IllegalSelection(block.id.clone()))?;
    let inner = merge_variants(variant, sel, visiting)?;
    let vid = &variant.id;

    eff.provenance.extend(inner.provenance.iter().cloned());
    if let Some(nested) = inner.applied_variants.first() {
        eff.log(
            RuleKind::NestedVariant,
            vid,
            format!("`{vid}` keeps its own selection `{nested}`"),
        );
    }

    // 1. overwrite
    eff.log(
        RuleKind::VariantOverwrite,
        vid,
        format!("name `{}` overwrites `{}`", inner.name, eff.name),
    );
    eff.name = inner.name.clone();
    eff.discussion = inner.discussion.clone();
    eff.version = inner.version.clone();
    eff.description = inner.description.clone();
    eff.level = inner.level.clone();
    eff.stereotype = inner.stereotype.clone();

    // 2. properties
    for p in &inner.properties {
        eff.put_property(
            EffectiveProperty {
                origin: Origin::Variant,
                ..p.clone()
            },
            vid,
        );
    }

    // 3. solution space
    if !inner.sse.is_empty() {
        let base: BTreeSet<&str> = eff.sse.iter().flat_map(|s| s.property_names()).collect();
        let theirs: BTreeSet<&str> = inner.sse.iter().flat_map(|s| s.property_names()).collect();
        let common = base.intersection(&theirs).count();
        if common <= 1 {
            eff.log(
                RuleKind::SseExtended,
                vid,
                format!("{common} common propert{}", if common == 1 { "y" } else { "ies" }),
            );
            eff.sse.extend(inner.sse.iter().cloned());
        } else {
            eff.log(
                RuleKind::SseReplaced,
                vid,
                format!("{common} common properties"),
            );
            eff.sse = inner.sse.clone();
        }
    }

    // 4. decomposition
    if !inner.decomposition.elements.is_empty() {
        eff.log(
            RuleKind::DecompositionUnion,
            vid,
            format!("{} element(s) appended", inner.decomposition.elements.len()),
        );
        eff.decomposition
            .elements
            .extend(inner.decomposition.elements.iter().cloned());
    }

    // 5. refinement groups
    for g in &inner.refinement_groups {
        match eff.refinement_groups.iter_mut().find(|b| b.name == g.name) {
            Some(existing) => {
                let detail = format!("group `{}` replaces `{}`", g.id, existing.id);
                *existing = g.clone();
                eff.log(RuleKind::RefinementGroupOverwritten, vid, detail);
            }
            None => {
                eff.refinement_groups.push(g.clone());
                eff.log(RuleKind::RefinementGroupAdded, vid, format!("group `{}`", g.id));
            }
        }
    }

    let mut refs = inner.internal_model_refs.clone();
    refs.append(&mut eff.internal_model_refs);
    eff.internal_model_refs = refs;

    eff.applied_variants = core::iter::once(vid.clone())
        .chain(inner.applied_variants.iter().cloned())
        .collect();
    visiting.remove(block.id.as_str());
    Ok(eff)
}

/// Hands the selected refinement's properties to the block, then recurses
/// into the groups nested in that refinement.
fn overtake(eff: &mut EffectiveBlock, group: &RefinementGroup, sel: &SelectionState) {
    let choice = sel
        .refinement_choices
        .get(&group.id)
        .or(group.selected_refinement.as_ref());
    let Some(rb) = choice.and_then(|c| group.blocks.iter().find(|b| b.id == *c)) else {
        return;
    };
    eff.log(
        RuleKind::RefinementOvertaken,
        &rb.id,
        format!("`{}` selected in group `{}`", rb.name, group.name),
    );
    for p in &rb.properties {
        eff.put_property(
            EffectiveProperty {
                name: p.name.clone(),
                value: p.value.clone(),
                unit: p.unit.clone(),
                origin: Origin::Refinement,
                source: rb.id.clone(),
            },
            &rb.id,
        );
    }
    for nested in &rb.refinement_groups {
        overtake(eff, nested, sel);
    }
}

/// Resolves every structural block of the model, variants included.
pub fn resolve_all(model: &Model, sel: &SelectionState) -> Result<BTreeMap<ElementId, EffectiveBlock>, SpError> {
    let index = ModelIndex::new(model);
    let mut out = BTreeMap::new();
    for b in index.sp_blocks() {
        out.insert(b.id.clone(), resolve_with_index(&index, b.id.as_str(), sel)?);
    }
    Ok(out)
}
