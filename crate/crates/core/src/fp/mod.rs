//! Configuration semantics and analyses for the Functional Perspective.
//!
//! A model is first normalized into a [`BasicFeatureTree`]. Every analysis
//! then works on the exact set of valid configurations, produced by an
//! ordered backtracking search. Roots are always selected, and a child is
//! never selected without its parent.

mod check;
mod enumerate;
mod propagate;
mod tree;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::id::ElementId;

pub use check::{is_valid_configuration, Rule, Validity, Violation};
pub use enumerate::{
    count_configurations, dead_blocks, enumerate_configurations, is_void, Count, Enumeration,
    EnumerationCap, DEFAULT_MAX_BLOCKS,
};
pub use propagate::{propagate, Conflict, PropagationResult};
pub use tree::{
    normalize, BasicFeatureTree, CrossTreeConstraint, CrossTreeKind, EdgeKind, IgnoredRelation,
    TreeEdge, TreeNode,
};

/// A selection of functional blocks plus the option chosen at each
/// variation point of an Alternative relation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Configuration {
    pub selected: BTreeSet<ElementId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vp_choices: BTreeMap<ElementId, String>,
}

impl Configuration {
    pub fn of<'s>(ids: impl IntoIterator<Item = &'s str>) -> Self {
        Configuration {
            selected: ids.into_iter().map(ElementId::from).collect(),
            vp_choices: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Decision {
    In,
    Out,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::In => "in",
            Decision::Out => "out",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FpError {
    UnknownId(ElementId),
    CapExceeded { blocks: usize, max_blocks: usize },
}

impl fmt::Display for FpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpError::UnknownId(id) => write!(f, "unknown functional block `{id}`"),
            FpError::CapExceeded { blocks, max_blocks } => write!(
                f,
                "{blocks} blocks exceed the enumeration cap of {max_blocks}; set a configuration limit or raise the cap"
            ),
        }
    }
}

/// Fixed-width set of tree node indices.
///
/// Ordering is lexicographic over the node sequence with unselected before
/// selected, i.e. node 0 is the most significant position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSet {
    words: Vec<u64>,
}

impl BlockSet {
    pub fn empty(len: usize) -> Self {
        BlockSet {
            words: alloc::vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BlockSet::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn intersect_with(&mut self, other: &BlockSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BlockSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }
}

impl Ord for BlockSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let first = diff.trailing_zeros();
                return if a >> first & 1 == 1 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.words.len().cmp(&other.words.len())
    }
}

impl PartialOrd for BlockSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BasicFeatureTree {
    /// Expands a node set into a configuration, filling the option chosen at
    /// each variation point of a selected Alternative parent.
    pub fn configuration(&self, set: &BlockSet) -> Configuration {
        let selected = set.iter().map(|i| self.nodes[i].id.clone()).collect();
        let mut vp_choices = BTreeMap::new();
        for edge in &self.edges {
            let Some(vp) = &edge.variation_point else { continue };
            if edge.kind != EdgeKind::AlternativeGroup || !set.contains(edge.parent) {
                continue;
            }
            if let Some(pos) = edge.children.iter().position(|&c| set.contains(c)) {
                if let Some(label) = vp.option_labels.get(pos) {
                    vp_choices.insert(vp.id.clone(), label.clone());
                }
            }
        }
        Configuration { selected, vp_choices }
    }

    /// Node set of a configuration's selected blocks.
    pub fn block_set(&self, cfg: &Configuration) -> Result<BlockSet, FpError> {
        let mut set = BlockSet::empty(self.len());
        for id in &cfg.selected {
            let i = self
                .index_of(id.as_str())
                .ok_or_else(|| FpError::UnknownId(id.clone()))?;
            set.insert(i);
        }
        Ok(set)
    }
}
