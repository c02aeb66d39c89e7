//! Random functional models and a brute-force configuration oracle that
//! reads the model directly, without the normalized tree.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use imog_core::*;
use proptest::prelude::*;

/// Per-block genes: (parent pick, relation pick, id scramble).
#[derive(Debug, Clone)]
pub struct Genes {
    pub blocks: Vec<(u8, u8, u8)>,
    pub cross: Vec<(u8, u8, bool)>,
    pub group: Option<(u8, u8, bool)>,
    pub cards: Vec<(u8, u8)>,
    pub derive: bool,
}

pub fn genes(max_blocks: usize) -> impl Strategy<Value = Genes> {
    (
        prop::collection::vec(any::<(u8, u8, u8)>(), 1..=max_blocks),
        prop::collection::vec(any::<(u8, u8, bool)>(), 0..3),
        prop::option::of(any::<(u8, u8, bool)>()),
        prop::collection::vec(any::<(u8, u8)>(), 4),
        any::<bool>(),
    )
        .prop_map(|(blocks, cross, group, cards, derive)| Genes {
            blocks,
            cross,
            group,
            cards,
            derive,
        })
}

/// Builds a model satisfying every functional invariant. Ids are scrambled
/// so that id order differs from tree order.
pub fn build(g: &Genes) -> Model {
    let n = g.blocks.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (g.blocks[i].2, i));
    let mut name = vec![String::new(); n];
    for (rank, &i) in order.iter().enumerate() {
        name[i] = format!("b{rank:02}");
    }

    let mut m = Model::default();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut kind: Vec<u8> = vec![0; n];
    for i in 0..n {
        m.functional.blocks.push(FpBlock::new(
            name[i].as_str(),
            &name[i],
            FpBlockKind::Feature,
            AbstractionLevel::Context,
        ));
        let (p, k, _) = g.blocks[i];
        // block 0 is a root; any later block becomes a second root rarely
        if i == 0 || p % 16 == 15 {
            m.functional.roots.push(name[i].as_str().into());
        } else {
            parent[i] = Some(p as usize % i);
            kind[i] = k % 4;
        }
    }

    let mut rel_no = 0;
    let mut next_id = |prefix: &str| {
        rel_no += 1;
        format!("{prefix}{rel_no:02}")
    };
    let mut alternatives: Vec<(String, usize)> = Vec::new();
    let mut card_pick = g.cards.iter().cycle();
    for p in 0..n {
        let children: Vec<usize> = (0..n).filter(|&c| parent[c] == Some(p)).collect();
        let mut grouped: Vec<usize> = Vec::new();
        for &c in &children {
            match kind[c] {
                0 => m.functional.relations.push(FpRelation::new(
                    next_id("m"),
                    FpRelationKind::Mandatory,
                    name[p].as_str(),
                    &[&name[c]],
                )),
                1 => m.functional.relations.push(FpRelation::new(
                    next_id("o"),
                    FpRelationKind::Optional,
                    name[p].as_str(),
                    &[&name[c]],
                )),
                _ => grouped.push(c),
            }
        }
        if grouped.len() == 1 {
            m.functional.relations.push(FpRelation::new(
                next_id("o"),
                FpRelationKind::Optional,
                name[p].as_str(),
                &[&name[grouped[0]]],
            ));
        } else if grouped.len() >= 2 {
            let ids: Vec<&str> = grouped.iter().map(|&c| name[c].as_str()).collect();
            let len = grouped.len() as u32;
            if kind[grouped[0]] == 2 {
                let id = next_id("a");
                let mut r = FpRelation::new(id.as_str(), FpRelationKind::Alternative, name[p].as_str(), &ids);
                r.variation_point = Some(VariationPoint {
                    id: format!("vp.{id}").into(),
                    label: format!("Choice {id}"),
                    option_labels: (0..len).map(|j| format!("o{j}")).collect(),
                });
                alternatives.push((format!("vp.{id}"), grouped.len()));
                m.functional.relations.push(r);
            } else {
                let &(a, b) = card_pick.next().unwrap();
                let min = 1 + a as u32 % len;
                let max = min + b as u32 % (len - min + 1);
                let mut r = FpRelation::new(next_id("r"), FpRelationKind::Or, name[p].as_str(), &ids);
                r.cardinality = Some(Cardinality::new(min, max));
                m.functional.relations.push(r);
            }
        }
    }

    for &(a, b, require) in &g.cross {
        let (a, b) = (a as usize % n, b as usize % n);
        if a == b {
            continue;
        }
        let k = if require {
            FpRelationKind::Require
        } else {
            FpRelationKind::Exclude
        };
        m.functional
            .relations
            .push(FpRelation::new(next_id("x"), k, name[a].as_str(), &[&name[b]]));
    }

    if g.derive {
        // derivations only run forward through the list, so they stay acyclic
        'outer: for (i, (src, len)) in alternatives.iter().enumerate() {
            for (dst, len2) in &alternatives[i + 1..] {
                if len == len2 {
                    m.functional.relations.push(FpRelation::new(
                        next_id("d"),
                        FpRelationKind::VpDerivation,
                        src.as_str(),
                        &[dst],
                    ));
                    break 'outer;
                }
            }
        }
    }

    if let Some((a, b, enabled)) = g.group {
        let (a, b) = (a as usize % n, b as usize % n);
        if a != b {
            m.functional.groups.push(FpGroup {
                id: "g".into(),
                members: vec![name[a].as_str().into(), name[b].as_str().into()],
                enabled,
            });
        }
    }
    m
}

/// Whether `selected` is a valid configuration, read straight off the model.
pub fn oracle_valid(m: &Model, selected: &BTreeSet<&str>, groups: bool) -> bool {
    let on = |id: &ElementId| selected.contains(id.as_str());
    if !m.functional.roots.iter().all(on) {
        return false;
    }
    let vps: BTreeMap<&str, &FpRelation> = m
        .functional
        .relations
        .iter()
        .filter_map(|r| r.variation_point.as_ref().map(|vp| (vp.id.as_str(), r)))
        .collect();
    for r in &m.functional.relations {
        let chosen = r.children.iter().filter(|c| on(c)).count() as u32;
        let parent_on = on(&r.parent);
        if r.kind.is_parent_child() && chosen > 0 && !parent_on {
            return false;
        }
        let ok = match &r.kind {
            FpRelationKind::Mandatory => !parent_on || chosen == 1,
            FpRelationKind::Alternative => !parent_on || chosen == 1,
            FpRelationKind::Or => {
                let c = r.cardinality.unwrap_or(Cardinality::new(1, r.children.len() as u32));
                !parent_on || (c.min..=c.max).contains(&chosen)
            }
            FpRelationKind::Require => !parent_on || chosen == 1,
            FpRelationKind::Exclude => !parent_on || chosen == 0,
            FpRelationKind::VpDerivation => {
                let src = vps[r.parent.as_str()];
                let dst = vps[r.children[0].as_str()];
                let (sv, dv) = (
                    src.variation_point.as_ref().unwrap(),
                    dst.variation_point.as_ref().unwrap(),
                );
                sv.option_labels.iter().enumerate().all(|(i, label)| {
                    let j = dv.option_labels.iter().position(|l| l == label).unwrap();
                    !on(&src.children[i]) || on(&dst.children[j])
                })
            }
            _ => true,
        };
        if !ok {
            return false;
        }
    }
    if groups {
        for g in m.functional.groups.iter().filter(|g| g.enabled) {
            let count = g.members.iter().filter(|x| on(x)).count();
            if count != 0 && count != g.members.len() {
                return false;
            }
        }
    }
    true
}

/// Every valid configuration, by filtering the powerset.
pub fn oracle_configurations(m: &Model, groups: bool) -> Vec<BTreeSet<String>> {
    let ids: Vec<&str> = m.functional.blocks.iter().map(|b| b.id.as_str()).collect();
    assert!(ids.len() <= 16, "oracle is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << ids.len()) {
        let set: BTreeSet<&str> = (0..ids.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ids[i])
            .collect();
        if oracle_valid(m, &set, groups) {
            out.push(set.into_iter().map(String::from).collect());
        }
    }
    out.sort();
    out
}

pub fn as_sets(configs: &[fp::Configuration]) -> Vec<BTreeSet<String>> {
    let mut v: Vec<BTreeSet<String>> = configs
        .iter()
        .map(|c| c.selected.iter().map(|id| id.as_str().to_string()).collect())
        .collect();
    v.sort();
    v
}

/// Adds two labelled two-way alternatives under the first root, the first
/// deriving the second.
pub fn with_derivation(mut m: Model, parent_pick: u8) -> Model {
    let n = m.functional.blocks.len();
    let parent = m.functional.blocks[parent_pick as usize % n].id.clone();
    for id in ["dx1", "dx2", "dy1", "dy2"] {
        m.functional
            .blocks
            .push(FpBlock::new(id, id, FpBlockKind::Feature, AbstractionLevel::Context));
    }
    for (rel, vp, kids) in [("dA", "vp.dA", ["dx1", "dx2"]), ("dB", "vp.dB", ["dy2", "dy1"])] {
        let mut r = FpRelation::new(rel, FpRelationKind::Alternative, parent.as_str(), &kids);
        let labels = if rel == "dA" { ["L", "R"] } else { ["R", "L"] };
        r.variation_point = Some(VariationPoint {
            id: vp.into(),
            label: rel.into(),
            option_labels: labels.iter().map(|s| s.to_string()).collect(),
        });
        m.functional.relations.push(r);
    }
    m.functional
        .relations
        .push(FpRelation::new("dD", FpRelationKind::VpDerivation, "vp.dA", &["vp.dB"]));
    m
}
