use imog::{canonical_text, export_dot, parse_document, serialize_document, DotPerspective, ParseError};
use imog_core::*;
use proptest::prelude::*;
use serde_json::Value;

const FIXTURES: [(&str, &str); 2] = [
    ("escooter", include_str!("../../../fixtures/escooter.imog.json")),
    ("escooter-context", include_str!("../../../fixtures/escooter-context.imog.json")),
];

fn full() -> Model {
    parse_document(FIXTURES[0].1).unwrap()
}

#[test]
fn fixtures_round_trip() {
    for (name, text) in FIXTURES {
        let m = parse_document(text).unwrap();
        let out = serialize_document(&m).unwrap();
        assert_eq!(parse_document(&out).unwrap(), m, "{name}");
        assert_eq!(serialize_document(&parse_document(&out).unwrap()).unwrap(), out, "{name}");
        assert_eq!(out, text, "{name}: fixture is not in canonical form");
    }
}

#[test]
fn escooter_fp_shape() {
    let m = parse_document(FIXTURES[1].1).unwrap();
    let count = |k: FpRelationKind| m.functional.relations.iter().filter(|r| r.kind == k).count();
    assert_eq!(m.functional.roots.len(), 1);
    assert_eq!(count(FpRelationKind::Mandatory), 3);
    assert_eq!(count(FpRelationKind::Optional), 1);
    assert_eq!(count(FpRelationKind::Alternative), 1);
    assert_eq!(count(FpRelationKind::Or), 1);
    let alt = m.functional.relations.iter().find(|r| r.kind == FpRelationKind::Alternative).unwrap();
    let vp = alt.variation_point.as_ref().unwrap();
    assert_eq!(vp.label, "E-Scooter Type");
    assert_eq!(vp.option_labels, ["Simple", "Comfort"]);
    let or = m.functional.relations.iter().find(|r| r.kind == FpRelationKind::Or).unwrap();
    assert_eq!(or.cardinality, Some(Cardinality::new(2, 3)));
    let names: Vec<&str> = or.children.iter().map(|c| m.fp_block(c.as_str()).unwrap().name.as_str()).collect();
    assert_eq!(names, ["Carrying", "Balancing", "Maintaining"]);
}

#[test]
fn constrains_links_are_derived() {
    let m = full();
    let derived = m.traces.iter().filter(|t| t.kind == TraceKind::Constrains).count();
    let targets: usize = m.quality.iter().map(|r| r.targets.len()).sum();
    assert_eq!(derived, targets);
    assert!(!serialize_document(&m).unwrap().contains("\"constrains\""));
}

#[test]
fn functional_dot() {
    let dot = export_dot(&full(), DotPerspective::Functional).unwrap();
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains(" -> ")).collect();
    assert_eq!(edges.iter().filter(|l| l.contains("label=\"[2,3]\"")).count(), 1);
    assert_eq!(edges.iter().filter(|l| l.contains("label=\"E-Scooter Type\"")).count(), 1);
    assert!(edges.iter().any(|l| l.starts_with("  \"rel.type\" -> \"fp.simple\" [label=\"Simple\"]")));
    assert!(edges.iter().any(|l| l.contains("derives")));
    for b in &full().functional.blocks {
        assert!(dot.contains(&format!("  \"{}\" [label=", b.id)), "{} missing", b.id);
    }
}

#[test]
fn quality_dot_edges() {
    let m = full();
    let dot = export_dot(&m, DotPerspective::Quality).unwrap();
    let edges = dot.lines().filter(|l| l.contains(" -> ")).count();
    let parents = m.quality.iter().filter(|r| r.parent.is_some()).count();
    let targets: usize = m.quality.iter().map(|r| r.targets.len()).sum();
    assert_eq!(edges, parents + targets);
    assert!(dot.contains("\"3\" -> \"fp.carrying\""));
}

#[test]
fn structural_dot() {
    let dot = export_dot(&full(), DotPerspective::Structural).unwrap();
    assert!(dot.contains("\"sp.escooter\" -> \"sp.motor\" [dir=\"back\", arrowtail=\"diamond\"]"));
    assert!(dot.contains("\"sp.comfort\" -> \"sp.comfortPlus\" [style=\"dashed,bold\""));
    assert!(dot.contains("\"rg.conductor\" -> \"rb.copper\" [style=\"bold\"]"));
    assert!(dot.contains("\"sp.driver\" -> \"sp.escooter\" [id=\"sp.handlebar\", label=\"steering\", style=\"bold\", arrowhead=\"none\"]"));
    assert_eq!(dot, export_dot(&full(), DotPerspective::Structural).unwrap());
}

#[test]
fn dot_is_balanced() {
    for p in [DotPerspective::Functional, DotPerspective::Structural, DotPerspective::Quality] {
        let dot = export_dot(&full(), p).unwrap();
        assert_eq!(dot.matches('{').count(), dot.matches('}').count());
        assert_eq!(dot.matches('"').count() % 2, 0);
    }
}

/// Every key path below `v`, with whether its value is an object.
fn object_paths(v: &Value, prefix: String, out: &mut Vec<(String, bool)>) {
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                out.push((p.clone(), item.is_object()));
                object_paths(item, p, out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                object_paths(item, format!("{prefix}[{i}]"), out);
            }
        }
        _ => {}
    }
}

fn at_path<'v>(v: &'v mut Value, path: &str) -> &'v mut Value {
    let mut cur = v;
    for part in path.split('.') {
        let (key, indices) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        cur = cur.get_mut(key).unwrap();
        for idx in indices.split(['[', ']']).filter(|s| !s.is_empty()) {
            cur = cur.get_mut(idx.parse::<usize>().unwrap()).unwrap();
        }
    }
    cur
}

fn schema_path(text: &str) -> String {
    match parse_document(text) {
        Err(ParseError::Schema { path, .. }) => path,
        other => panic!("expected a schema error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wrong_values_are_located(pick: prop::sample::Index) {
        let mut doc: Value = serde_json::from_str(FIXTURES[0].1).unwrap();
        let mut paths = Vec::new();
        object_paths(&doc, String::new(), &mut paths);
        let target = paths[pick.index(paths.len())].0.clone();
        *at_path(&mut doc, &target) = serde_json::json!({"unexpected": true});
        let path = schema_path(&canonical_text(&doc));
        prop_assert!(target.starts_with(&path) || path.starts_with(&target), "error at `{path}` for a change at `{target}`");
    }

    #[test]
    fn unknown_keys_are_located(pick: prop::sample::Index) {
        let mut doc: Value = serde_json::from_str(FIXTURES[0].1).unwrap();
        let mut paths = vec![(String::new(), true)];
        object_paths(&doc, String::new(), &mut paths);
        let objects: Vec<String> = paths.into_iter().filter(|p| p.1).map(|p| p.0).collect();
        let owner = objects[pick.index(objects.len())].clone();
        let obj = if owner.is_empty() { &mut doc } else { at_path(&mut doc, &owner) };
        obj.as_object_mut().unwrap().insert("zzUnknown".into(), Value::Bool(true));
        let path = schema_path(&canonical_text(&doc));
        let full = if owner.is_empty() { "zzUnknown".to_string() } else { format!("{owner}.zzUnknown") };
        prop_assert!(full.starts_with(&path), "error at `{path}` for a key at `{full}`");
    }

    #[test]
    fn serialization_is_canonical(keep in prop::collection::vec(any::<bool>(), 4)) {
        // equal models, built differently, give the same bytes
        let mut m = full();
        let mut reqs = m.quality.clone();
        reqs.retain({
            let mut i = 0;
            move |_| { i += 1; keep[i - 1] }
        });
        m.quality = reqs;
        m.functional.relations.retain(|r| r.kind != FpRelationKind::Require);
        let kept: Vec<ElementId> = m.quality.iter().map(|r| r.id.clone()).collect();
        m.quality.iter_mut().for_each(|r| if r.parent.as_ref().is_some_and(|p| !kept.contains(p)) { r.parent = None; r.parent_type = None; });
        m.sync_constrains_links();
        prop_assume!(validate_model(&m).iter().all(|d| !d.is_error()));
        let text = serialize_document(&m).unwrap();
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_document(&back.clone()).unwrap(), text);
    }
}
