//! Domain types for the five perspectives of a model and the trace links
//! between them.
//!
//! Field names serialize in camelCase; optional and empty collection fields
//! are omitted on output so that a document has exactly one canonical form.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;

/// The document format version this crate reads and writes.
pub const IMOG_VERSION: &str = "1.4";

/// A row of the grid. Custom levels extend the three predefined ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AbstractionLevel {
    Context,
    System,
    Component,
    Custom(String),
}

impl AbstractionLevel {
    pub const PREDEFINED: [&'static str; 3] = ["context", "system", "component"];

    /// Parses `context`, `system`, `component` (case-insensitive); anything
    /// else becomes a custom level.
    pub fn parse(text: &str) -> Self {
        match text.to_ascii_lowercase().as_str() {
            "context" => AbstractionLevel::Context,
            "system" => AbstractionLevel::System,
            "component" => AbstractionLevel::Component,
            _ => AbstractionLevel::Custom(text.into()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            AbstractionLevel::Context => "context",
            AbstractionLevel::System => "system",
            AbstractionLevel::Component => "component",
            AbstractionLevel::Custom(name) => name,
        }
    }
}

impl fmt::Display for AbstractionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A property or attribute value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Scalar::Number(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Number(n) => write!(f, "{n}"),
            Scalar::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Property {
    pub name: String,
    pub value: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

impl Property {
    pub fn new(name: impl Into<String>, value: Scalar, unit: Option<&str>) -> Self {
        Property {
            name: name.into(),
            value,
            unit: unit.map(String::from),
        }
    }
}

/// Predefined property carrying an availability timestamp or year.
pub const AVAILABILITY_PROPERTY: &str = "Availability";
/// Predefined property carrying a feasibility estimate in `[0, 1]`.
pub const FEASIBILITY_PROPERTY: &str = "Feasibility";

// ---------------------------------------------------------------- strategy

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct IdentifiableElement {
    pub id: ElementId,
    pub category: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discussion: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StrategyDiv {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Rich text, stored verbatim.
    #[serde(default)]
    pub html_content: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embedded_elements: Vec<IdentifiableElement>,
}

// -------------------------------------------------------------- functional

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FpBlockKind {
    Feature,
    Function,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FpBlock {
    pub id: ElementId,
    pub name: String,
    pub kind: FpBlockKind,
    pub level: AbstractionLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_block_type: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub custom_properties: Vec<Property>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub user_stories: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discussion: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
}

impl FpBlock {
    pub fn new(id: impl Into<ElementId>, name: &str, kind: FpBlockKind, level: AbstractionLevel) -> Self {
        FpBlock {
            id: id.into(),
            name: name.into(),
            kind,
            level,
            custom_block_type: None,
            description: String::new(),
            custom_properties: Vec::new(),
            user_stories: Vec::new(),
            discussion: Vec::new(),
            version: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FpRelationKind {
    Mandatory,
    Optional,
    Alternative,
    Or,
    Require,
    Exclude,
    CustomConstraint(String),
    #[serde(rename = "custom1to1")]
    Custom1to1(String),
    VpDerivation,
    CustomVp(String),
}

impl FpRelationKind {
    /// Parent-child kinds place their children under the parent in the tree.
    pub fn is_parent_child(&self) -> bool {
        matches!(
            self,
            FpRelationKind::Mandatory
                | FpRelationKind::Optional
                | FpRelationKind::Alternative
                | FpRelationKind::Or
                | FpRelationKind::Custom1to1(_)
        )
    }

    /// Kinds connecting variation points rather than blocks.
    pub fn is_vp_relation(&self) -> bool {
        matches!(self, FpRelationKind::VpDerivation | FpRelationKind::CustomVp(_))
    }

    pub fn is_group(&self) -> bool {
        matches!(self, FpRelationKind::Alternative | FpRelationKind::Or)
    }

    pub fn name(&self) -> &str {
        match self {
            FpRelationKind::Mandatory => "mandatory",
            FpRelationKind::Optional => "optional",
            FpRelationKind::Alternative => "alternative",
            FpRelationKind::Or => "or",
            FpRelationKind::Require => "require",
            FpRelationKind::Exclude => "exclude",
            FpRelationKind::CustomConstraint(_) => "customConstraint",
            FpRelationKind::Custom1to1(_) => "custom1to1",
            FpRelationKind::VpDerivation => "vpDerivation",
            FpRelationKind::CustomVp(_) => "customVp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ParentChildType {
    Decomposition,
    Refinement,
}

/// Inclusive bounds on how many children of an Or relation are chosen.
/// Written as a two-element array `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Cardinality {
    pub min: u32,
    pub max: u32,
}

impl Cardinality {
    pub fn new(min: u32, max: u32) -> Self {
        Cardinality { min, max }
    }
}

impl From<[u32; 2]> for Cardinality {
    fn from([min, max]: [u32; 2]) -> Self {
        Cardinality { min, max }
    }
}

impl From<Cardinality> for [u32; 2] {
    fn from(c: Cardinality) -> Self {
        [c.min, c.max]
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.min, self.max)
    }
}

/// Labelled choice attached to an Alternative or Or relation. The i-th option
/// label names the i-th child of the owning relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VariationPoint {
    pub id: ElementId,
    pub label: String,
    pub option_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FpRelation {
    pub id: ElementId,
    pub kind: FpRelationKind,
    /// Parent block, constraint source, or source variation point.
    pub parent: ElementId,
    /// Child blocks, constraint target, or target variation point.
    pub children: Vec<ElementId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc_type: Option<ParentChildType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<Cardinality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation_point: Option<VariationPoint>,
}

impl FpRelation {
    pub fn new(id: impl Into<ElementId>, kind: FpRelationKind, parent: impl Into<ElementId>, children: &[&str]) -> Self {
        FpRelation {
            id: id.into(),
            kind,
            parent: parent.into(),
            children: children.iter().map(|c| ElementId::from(*c)).collect(),
            pc_type: None,
            cardinality: None,
            variation_point: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FpGroup {
    pub id: ElementId,
    pub members: Vec<ElementId>,
    pub enabled: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FunctionalModel {
    pub blocks: Vec<FpBlock>,
    pub relations: Vec<FpRelation>,
    pub groups: Vec<FpGroup>,
    pub roots: Vec<ElementId>,
}

// ----------------------------------------------------------------- quality

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FutureAvailability {
    Now,
    Year(i32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Assignee {
    Oem,
    Tier1,
    Tier2,
    Custom(String),
}

impl Assignee {
    pub fn name(&self) -> &str {
        match self {
            Assignee::Oem => "oem",
            Assignee::Tier1 => "tier1",
            Assignee::Tier2 => "tier2",
            Assignee::Custom(name) => name,
        }
    }
}

/// Predefined requirement stereotypes. Any other string is a custom one.
pub mod stereotypes {
    pub const QUALITY_REQUIREMENT: &str = "Quality Requirement";
    pub const PERFORMANCE_REQUIREMENT: &str = "Performance Requirement";
    pub const TECHNICAL_PROFESSIONAL_GUESS: &str = "Technical Professional Guess";
    pub const USER_NEED: &str = "User Need";
    pub const CONSTRAINT: &str = "Constraint";
    pub const SAFETY_REQUIREMENT: &str = "Safety Requirement";
    pub const SECURITY_REQUIREMENT: &str = "Security Requirement";
    pub const LEGAL_CONSTRAINT: &str = "Legal Constraint";
    pub const TECHNOLOGY_REQUIREMENT: &str = "Technology Requirement";
    pub const DISCARDED: &str = "Discarded";
    pub const PROPOSED: &str = "Proposed";
    pub const CONFIRMED: &str = "Confirmed";

    pub const CATEGORIES: [&str; 9] = [
        QUALITY_REQUIREMENT,
        PERFORMANCE_REQUIREMENT,
        TECHNICAL_PROFESSIONAL_GUESS,
        USER_NEED,
        CONSTRAINT,
        SAFETY_REQUIREMENT,
        SECURITY_REQUIREMENT,
        LEGAL_CONSTRAINT,
        TECHNOLOGY_REQUIREMENT,
    ];

    pub const STATUSES: [&str; 3] = [DISCARDED, PROPOSED, CONFIRMED];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RequirementStatus {
    Discarded,
    Proposed,
    Confirmed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Requirement {
    pub id: ElementId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<i64>,
    pub name: String,
    pub text: String,
    pub satisfiability: f64,
    pub future_availability: FutureAvailability,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stereotypes: Vec<String>,
    pub level: AbstractionLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignee: Option<Assignee>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<ElementId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_type: Option<ParentChildType>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<ElementId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub custom_attributes: Vec<Property>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub reasoning: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discussion: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
}

impl Requirement {
    pub fn new(id: impl Into<ElementId>, name: &str, satisfiability: f64, level: AbstractionLevel) -> Self {
        Requirement {
            id: id.into(),
            priority: None,
            name: name.into(),
            text: String::new(),
            satisfiability,
            future_availability: FutureAvailability::Now,
            stereotypes: Vec::new(),
            level,
            assignee: None,
            parent: None,
            parent_type: None,
            targets: Vec::new(),
            custom_attributes: Vec::new(),
            reasoning: String::new(),
            discussion: Vec::new(),
            version: String::new(),
        }
    }

    /// The status stereotype, `Confirmed` when none is given.
    pub fn status(&self) -> RequirementStatus {
        for s in &self.stereotypes {
            match s.as_str() {
                stereotypes::DISCARDED => return RequirementStatus::Discarded,
                stereotypes::PROPOSED => return RequirementStatus::Proposed,
                stereotypes::CONFIRMED => return RequirementStatus::Confirmed,
                _ => {}
            }
        }
        RequirementStatus::Confirmed
    }
}

// -------------------------------------------------------------- structural

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SpStereotype {
    Environment,
    Innovation,
    Logic,
    Service,
    Part,
    Hardware,
    Software,
    Custom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RefinementStereotype {
    Technology,
    MissionProfile,
    Application,
    Custom(String),
}

/// Opaque multivariate relation over block properties. Only the declared
/// property name lists take part in any analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SolutionSpaceDescription {
    pub payload: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub input_properties: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub output_properties: Vec<String>,
}

impl SolutionSpaceDescription {
    /// Declared inputs followed by declared outputs.
    pub fn property_names(&self) -> impl Iterator<Item = &str> {
        self.input_properties
            .iter()
            .chain(self.output_properties.iter())
            .map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RefinementBlock {
    pub id: ElementId,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stereotype: Option<RefinementStereotype>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<Property>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refinement_groups: Vec<RefinementGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discussion: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RefinementGroup {
    pub id: ElementId,
    pub name: String,
    pub blocks: Vec<RefinementBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_refinement: Option<ElementId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SpBlock {
    pub id: ElementId,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub level: AbstractionLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stereotype: Option<SpStereotype>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<Property>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sse: Option<SolutionSpaceDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub internal_model_ref: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionModel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refinement_groups: Vec<RefinementGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<SpBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_block: Option<ElementId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_variant: Option<ElementId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discussion: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
}

impl SpBlock {
    pub fn new(id: impl Into<ElementId>, name: &str, level: AbstractionLevel) -> Self {
        SpBlock {
            id: id.into(),
            name: name.into(),
            description: String::new(),
            level,
            stereotype: None,
            properties: Vec::new(),
            sse: None,
            internal_model_ref: None,
            decomposition: None,
            refinement_groups: Vec::new(),
            variants: Vec::new(),
            parent_block: None,
            selected_variant: None,
            discussion: Vec::new(),
            version: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SpRelationKind {
    Channel,
    Arrow,
    Effect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Direction {
    Unidirectional,
    Bidirectional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EffectType {
    Desired,
    Undesired,
    Misuse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SpRelation {
    pub id: ElementId,
    pub kind: SpRelationKind,
    pub source: ElementId,
    pub target: ElementId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stereotype: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<Property>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect_type: Option<EffectType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint_type: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discussion: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
}

impl SpRelation {
    pub fn new(id: impl Into<ElementId>, kind: SpRelationKind, source: &str, target: &str) -> Self {
        SpRelation {
            id: id.into(),
            kind,
            source: source.into(),
            target: target.into(),
            direction: None,
            label: None,
            description: String::new(),
            stereotype: None,
            properties: Vec::new(),
            effect_type: None,
            endpoint_type: None,
            notes: Vec::new(),
            discussion: Vec::new(),
            version: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Package {
    pub name: String,
    #[serde(default)]
    pub elements: Vec<StructuralElement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Note {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StructuralElement {
    Block(SpBlock),
    Relation(SpRelation),
    Package(Package),
    Note(Note),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DecompositionModel {
    pub elements: Vec<StructuralElement>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StructuralModel {
    pub top_models: Vec<DecompositionModel>,
}

// --------------------------------------------------------------- knowledge

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct KnowledgeEntry {
    pub id: ElementId,
    pub name: String,
    #[serde(rename = "type")]
    pub entry_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_of_availability: Option<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<Property>,
}

// ------------------------------------------------------------------ traces

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TraceKind {
    References,
    Constrains,
    Allocate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TraceLink {
    pub id: ElementId,
    pub kind: TraceKind,
    pub source: ElementId,
    pub target: ElementId,
}

impl TraceLink {
    pub fn new(id: impl Into<ElementId>, kind: TraceKind, source: &str, target: &str) -> Self {
        TraceLink {
            id: id.into(),
            kind,
            source: source.into(),
            target: target.into(),
        }
    }
}

// ------------------------------------------------------------------- model

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Model {
    pub imog_version: String,
    pub strategy: Vec<StrategyDiv>,
    pub functional: FunctionalModel,
    pub quality: Vec<Requirement>,
    pub structural: StructuralModel,
    pub knowledge: Vec<KnowledgeEntry>,
    pub traces: Vec<TraceLink>,
}

impl Default for Model {
    fn default() -> Self {
        Model {
            imog_version: IMOG_VERSION.into(),
            strategy: Vec::new(),
            functional: FunctionalModel::default(),
            quality: Vec::new(),
            structural: StructuralModel::default(),
            knowledge: Vec::new(),
            traces: Vec::new(),
        }
    }
}

impl Model {
    /// Id of the `<<constrains>>` link materialized for `targets[index]` of a
    /// requirement.
    pub fn constrains_link_id(requirement: &ElementId, index: usize) -> ElementId {
        ElementId::new(alloc::format!("{requirement}/constrains/{index}"))
    }

    /// Replaces every `Constrains` trace link with one link per requirement
    /// target, so that `Requirement::targets` stays the single source.
    pub fn sync_constrains_links(&mut self) {
        self.traces.retain(|t| t.kind != TraceKind::Constrains);
        for req in &self.quality {
            for (i, target) in req.targets.iter().enumerate() {
                self.traces.push(TraceLink {
                    id: Model::constrains_link_id(&req.id, i),
                    kind: TraceKind::Constrains,
                    source: req.id.clone(),
                    target: target.clone(),
                });
            }
        }
    }

    pub fn fp_block(&self, id: &str) -> Option<&FpBlock> {
        self.functional.blocks.iter().find(|b| b.id == id)
    }

    pub fn requirement(&self, id: &str) -> Option<&Requirement> {
        self.quality.iter().find(|r| r.id == id)
    }
}
