use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;
use crate::model::{Cardinality, FpRelationKind, Model, VariationPoint};

/// Per-edge semantics of the basic feature tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeKind {
    Mandatory,
    Optional,
    AlternativeGroup,
    OrGroup { min: u32, max: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeNode {
    pub id: ElementId,
    pub parent: Option<usize>,
    pub root: bool,
}

/// One parent-child relation. Mandatory and optional edges have a single
/// child; group edges have two or more.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeEdge {
    pub relation: ElementId,
    pub kind: EdgeKind,
    pub parent: usize,
    pub children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation_point: Option<VariationPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CrossTreeKind {
    Require,
    Exclude,
}

/// `from` requires (or excludes) `to`. `origin` is the relation, group or
/// derivation the constraint was produced from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossTreeConstraint {
    pub kind: CrossTreeKind,
    pub from: usize,
    pub to: usize,
    pub origin: ElementId,
}

/// A relation that normalization did not turn into a constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IgnoredRelation {
    pub relation: ElementId,
    pub kind: String,
    pub reason: String,
}

/// Plain feature tree: a forest with per-edge kinds and require/exclude
/// cross-tree constraints. Nodes are sorted by id, so node `i` is also bit
/// `i` of a configuration bitvector.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BasicFeatureTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
    pub cross_tree: Vec<CrossTreeConstraint>,
    pub ignored: Vec<IgnoredRelation>,
}

impl BasicFeatureTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes
            .binary_search_by(|n| n.id.as_str().cmp(id))
            .ok()
    }

    pub fn id(&self, index: usize) -> &ElementId {
        &self.nodes[index].id
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.root).map(|(i, _)| i)
    }

    pub fn count_edges(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// The edge owning a variation point, with the point itself.
    pub fn variation_point(&self, id: &str) -> Option<(&TreeEdge, &VariationPoint)> {
        self.edges.iter().find_map(|e| match &e.variation_point {
            Some(vp) if vp.id == id => Some((e, vp)),
            _ => None,
        })
    }
}

/// Translates the Functional Perspective of a valid model into a basic
/// feature tree.
///
/// Alternative and Or relations become groups. Custom 1-to-1 relations keep
/// only their structural meaning (the child needs its parent) and behave like
/// optional edges. With `groups_enabled`, every enabled group adds a require
/// constraint in both directions between each pair of members. Each
/// derivation between variation points adds, per shared option label, a
/// require from the source's option child to the target's option child.
/// Custom constraints and custom variation point relations are listed in
/// `ignored`.
pub fn normalize(model: &Model, groups_enabled: bool) -> BasicFeatureTree {
    let fp = &model.functional;
    let mut ids: Vec<&ElementId> = fp.blocks.iter().map(|b| &b.id).collect();
    ids.sort();
    ids.dedup();
    let position: BTreeMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let mut tree = BasicFeatureTree {
        nodes: ids
            .iter()
            .map(|id| TreeNode {
                id: (*id).clone(),
                parent: None,
                root: fp.roots.contains(id),
            })
            .collect(),
        ..Default::default()
    };
    let at = |id: &ElementId| position.get(id.as_str()).copied();

    let mut vp_children: BTreeMap<&str, (&VariationPoint, Vec<usize>)> = BTreeMap::new();

    for r in &fp.relations {
        let kind = match &r.kind {
            FpRelationKind::Mandatory => Some(EdgeKind::Mandatory),
            FpRelationKind::Optional => Some(EdgeKind::Optional),
            FpRelationKind::Alternative => Some(EdgeKind::AlternativeGroup),
            FpRelationKind::Or => {
                let c = r
                    .cardinality
                    .unwrap_or(Cardinality::new(1, r.children.len() as u32));
                Some(EdgeKind::OrGroup { min: c.min, max: c.max })
            }
            FpRelationKind::Custom1to1(t) => {
                tree.ignored.push(IgnoredRelation {
                    relation: r.id.clone(),
                    kind: format!("custom1to1:{t}"),
                    reason: "custom relations are not analysed; child kept as optional".into(),
                });
                Some(EdgeKind::Optional)
            }
            FpRelationKind::Require | FpRelationKind::Exclude => {
                let kind = if r.kind == FpRelationKind::Require {
                    CrossTreeKind::Require
                } else {
                    CrossTreeKind::Exclude
                };
                if let (Some(from), Some(to)) = (at(&r.parent), r.children.first().and_then(at)) {
                    tree.cross_tree.push(CrossTreeConstraint {
                        kind,
                        from,
                        to,
                        origin: r.id.clone(),
                    });
                }
                None
            }
            FpRelationKind::CustomConstraint(t) | FpRelationKind::CustomVp(t) => {
                tree.ignored.push(IgnoredRelation {
                    relation: r.id.clone(),
                    kind: format!("{}:{t}", r.kind.name()),
                    reason: "custom relations are not analysed".into(),
                });
                None
            }
            FpRelationKind::VpDerivation => None,
        };
        let Some(kind) = kind else { continue };
        let Some(parent) = at(&r.parent) else { continue };
        let children: Vec<usize> = r.children.iter().filter_map(at).collect();
        for &c in &children {
            tree.nodes[c].parent = Some(parent);
        }
        if let Some(vp) = &r.variation_point {
            vp_children.insert(vp.id.as_str(), (vp, children.clone()));
        }
        tree.edges.push(TreeEdge {
            relation: r.id.clone(),
            kind,
            parent,
            children,
            variation_point: r.variation_point.clone(),
        });
    }

    for r in fp
        .relations
        .iter()
        .filter(|r| r.kind == FpRelationKind::VpDerivation)
    {
        let Some(target) = r.children.first() else { continue };
        let (Some((src, src_children)), Some((dst, dst_children))) =
            (vp_children.get(r.parent.as_str()), vp_children.get(target.as_str()))
        else {
            continue;
        };
        for (i, label) in src.option_labels.iter().enumerate() {
            let Some(j) = dst.option_labels.iter().position(|l| l == label) else {
                continue;
            };
            if let (Some(&from), Some(&to)) = (src_children.get(i), dst_children.get(j)) {
                tree.cross_tree.push(CrossTreeConstraint {
                    kind: CrossTreeKind::Require,
                    from,
                    to,
                    origin: r.id.clone(),
                });
            }
        }
    }

    if groups_enabled {
        for g in fp.groups.iter().filter(|g| g.enabled) {
            let members: Vec<usize> = g.members.iter().filter_map(at).collect();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    for (from, to) in [(a, b), (b, a)] {
                        tree.cross_tree.push(CrossTreeConstraint {
                            kind: CrossTreeKind::Require,
                            from,
                            to,
                            origin: g.id.clone(),
                        });
                    }
                }
            }
        }
    }

    tree
}
