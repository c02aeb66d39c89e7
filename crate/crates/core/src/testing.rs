//! Model builders shared by unit tests.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::*;

pub fn feature(id: &str, name: &str) -> FpBlock {
    FpBlock::new(id, name, FpBlockKind::Feature, AbstractionLevel::Context)
}

pub fn rel(id: &str, kind: FpRelationKind, parent: &str, children: &[&str]) -> FpRelation {
    FpRelation::new(id, kind, parent, children)
}

pub fn vp(id: &str, label: &str, options: &[&str]) -> VariationPoint {
    VariationPoint {
        id: id.into(),
        label: label.into(),
        option_labels: options.iter().map(|o| String::from(*o)).collect(),
    }
}

/// Context level of the e-scooter feature model.
pub fn escooter_context() -> Model {
    let mut m = Model::default();
    let fp = &mut m.functional;
    fp.blocks = vec![
        feature("fp.root", "Providing mobility with an e-scooter"),
        feature("fp.driving", "Driving"),
        feature("fp.damping", "Damping"),
        feature("fp.showingInsurance", "Showing Insurance"),
        feature("fp.loadingCapacity", "Loading Capacity"),
        feature("fp.simple", "Simple"),
        feature("fp.comfort", "Comfort"),
        feature("fp.carrying", "Carrying"),
        feature("fp.balancing", "Balancing"),
        feature("fp.maintaining", "Maintaining"),
    ];
    fp.roots = vec!["fp.root".into()];
    let mut alt = rel("rel.type", FpRelationKind::Alternative, "fp.root", &["fp.simple", "fp.comfort"]);
    alt.variation_point = Some(vp("vp.type", "E-Scooter Type", &["Simple", "Comfort"]));
    let mut or = rel(
        "rel.choice",
        FpRelationKind::Or,
        "fp.root",
        &["fp.carrying", "fp.balancing", "fp.maintaining"],
    );
    or.cardinality = Some(Cardinality::new(2, 3));
    fp.relations = vec![
        rel("rel.driving", FpRelationKind::Mandatory, "fp.root", &["fp.driving"]),
        rel("rel.damping", FpRelationKind::Mandatory, "fp.root", &["fp.damping"]),
        rel("rel.insurance", FpRelationKind::Mandatory, "fp.root", &["fp.showingInsurance"]),
        rel("rel.loading", FpRelationKind::Optional, "fp.root", &["fp.loadingCapacity"]),
        alt,
        or,
    ];
    m
}

pub fn prop(name: &str, value: Scalar, unit: Option<&str>) -> Property {
    Property::new(name, value, unit)
}

pub fn num(name: &str, value: f64, unit: &str) -> Property {
    prop(name, Scalar::Number(value), Some(unit))
}

pub fn sse(inputs: &[&str], outputs: &[&str]) -> SolutionSpaceDescription {
    SolutionSpaceDescription {
        payload: String::from("<PMML/>"),
        input_properties: inputs.iter().map(|s| String::from(*s)).collect(),
        output_properties: outputs.iter().map(|s| String::from(*s)).collect(),
    }
}

pub fn refinement(id: &str, name: &str, properties: Vec<Property>) -> RefinementBlock {
    RefinementBlock {
        id: id.into(),
        name: name.into(),
        description: String::new(),
        stereotype: None,
        properties,
        refinement_groups: Vec::new(),
        discussion: Vec::new(),
        version: String::new(),
    }
}

pub fn group(id: &str, name: &str, blocks: Vec<RefinementBlock>, selected: Option<&str>) -> RefinementGroup {
    RefinementGroup {
        id: id.into(),
        name: name.into(),
        blocks,
        selected_refinement: selected.map(Into::into),
    }
}

pub fn sp(id: &str, name: &str) -> SpBlock {
    SpBlock::new(id, name, AbstractionLevel::Context)
}

/// Structural model with a base block, two variants and a variant of a
/// variant.
pub fn escooter_variants() -> Model {
    let mut motor = SpBlock::new("sp.motor", "Motor", AbstractionLevel::System);
    motor.refinement_groups = vec![group(
        "rg.conductor",
        "Conductor",
        vec![
            refinement("rb.copper", "Copper", vec![num("Conductivity", 59.6, "MS/m")]),
            refinement("rb.iron", "Iron", vec![num("Conductivity", 10.0, "MS/m")]),
        ],
        None,
    )];

    let mut comfort_plus = sp("sp.comfortPlus", "Comfort+ E-Scooter");
    comfort_plus.parent_block = Some("sp.comfort".into());
    comfort_plus.properties = vec![num("Weight", 16.0, "kg"), prop("Heated", Scalar::Bool(true), None)];
    comfort_plus.internal_model_ref = Some("comfort-plus.sysml".into());

    let mut comfort = sp("sp.comfort", "Comfort E-Scooter");
    comfort.parent_block = Some("sp.escooter".into());
    comfort.description = String::from("Suspension and a larger battery");
    comfort.stereotype = Some(SpStereotype::Innovation);
    comfort.properties = vec![num("Weight", 15.0, "kg"), prop("Suspension", Scalar::Bool(true), None)];
    comfort.sse = Some(sse(&["Weight", "Power"], &["Speed", "Comfort"]));
    comfort.internal_model_ref = Some("comfort.sysml".into());
    comfort.decomposition = Some(DecompositionModel {
        elements: vec![
            StructuralElement::Block(SpBlock::new("sp.comfortMotor", "Motor", AbstractionLevel::System)),
            StructuralElement::Block(SpBlock::new("sp.damper", "Damper", AbstractionLevel::System)),
        ],
    });
    comfort.refinement_groups = vec![group(
        "rg.comfortFrame",
        "Frame",
        vec![refinement("rb.carbon", "Carbon", vec![prop("Material", Scalar::Text("Carbon".into()), None)])],
        Some("rb.carbon"),
    )];
    comfort.variants = vec![comfort_plus];
    comfort.selected_variant = Some("sp.comfortPlus".into());

    let mut simple = sp("sp.simple", "Simple E-Scooter");
    simple.parent_block = Some("sp.escooter".into());
    simple.properties = vec![num("Price", 300.0, "EUR")];
    simple.sse = Some(sse(&["Weight"], &["Range"]));

    let mut base = sp("sp.escooter", "E-Scooter");
    base.description = String::from("Electric kick scooter");
    base.version = String::from("1");
    base.properties = vec![num("Weight", 12.0, "kg"), num("MaxSpeed", 20.0, "km/h")];
    base.sse = Some(sse(&["Weight", "Power"], &["Speed"]));
    base.internal_model_ref = Some("escooter.sysml".into());
    base.decomposition = Some(DecompositionModel {
        elements: vec![
            StructuralElement::Block(motor),
            StructuralElement::Block(SpBlock::new("sp.battery", "Battery", AbstractionLevel::System)),
        ],
    });
    base.refinement_groups = vec![group(
        "rg.frame",
        "Frame",
        vec![
            refinement("rb.alu", "Aluminium", vec![prop("Material", Scalar::Text("Aluminium".into()), None)]),
            refinement("rb.steel", "Steel", vec![prop("Material", Scalar::Text("Steel".into()), None)]),
        ],
        None,
    )];
    base.variants = vec![simple, comfort];

    let mut m = Model::default();
    m.structural.top_models = vec![DecompositionModel {
        elements: vec![StructuralElement::Block(base)],
    }];
    m
}

pub fn load(text: &str) -> Model {
    let mut m: Model = serde_json::from_str(text).unwrap();
    m.sync_constrains_links();
    m
}

pub fn escooter_full() -> Model {
    load(include_str!("../../../fixtures/escooter.imog.json"))
}

pub fn escooter_context_fixture() -> Model {
    load(include_str!("../../../fixtures/escooter-context.imog.json"))
}
