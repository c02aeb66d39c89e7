use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree::{BasicFeatureTree, CrossTreeKind, EdgeKind};
use super::{BlockSet, Configuration, FpError};
use crate::id::ElementId;

/// Largest tree enumerated without an explicit configuration limit.
pub const DEFAULT_MAX_BLOCKS: usize = 64;

/// Bounds on exhaustive enumeration.
///
/// Trees larger than `max_blocks` are refused unless `max_configurations`
/// bounds the output. Analyses that need the complete set (dead blocks,
/// propagation) always refuse trees larger than `max_blocks`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumerationCap {
    pub max_blocks: usize,
    pub max_configurations: Option<usize>,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap {
            max_blocks: DEFAULT_MAX_BLOCKS,
            max_configurations: None,
        }
    }
}

impl EnumerationCap {
    pub fn limit(max_configurations: usize) -> Self {
        EnumerationCap {
            max_configurations: Some(max_configurations),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Enumeration {
    pub configurations: Vec<Configuration>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Count {
    pub count: u64,
    pub truncated: bool,
}

/// Boolean constraint over tree node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Clause {
    Set(usize),
    Unset(usize),
    Implies(usize, usize),
    Excludes(usize, usize),
    Card {
        parent: usize,
        children: Vec<usize>,
        min: u32,
        max: u32,
    },
}

impl Clause {
    fn vars(&self) -> Vec<usize> {
        match self {
            Clause::Set(v) | Clause::Unset(v) => alloc::vec![*v],
            Clause::Implies(a, b) | Clause::Excludes(a, b) => alloc::vec![*a, *b],
            Clause::Card { parent, children, .. } => {
                let mut v = children.clone();
                v.push(*parent);
                v
            }
        }
    }
}

/// A clause with a human-readable account of where it came from.
#[derive(Debug, Clone)]
pub(crate) struct Described {
    pub clause: Clause,
    pub description: String,
}

/// Translates the tree into clauses.
pub(crate) fn compile(tree: &BasicFeatureTree) -> Vec<Described> {
    let mut out = Vec::new();
    for (i, node) in tree.nodes.iter().enumerate() {
        if node.root {
            out.push(Described {
                clause: Clause::Set(i),
                description: format!("root `{}` is always selected", node.id),
            });
        }
        if let Some(p) = node.parent {
            out.push(Described {
                clause: Clause::Implies(i, p),
                description: format!("`{}` needs its parent `{}`", node.id, tree.id(p)),
            });
        }
    }
    for edge in &tree.edges {
        let parent = tree.id(edge.parent);
        match edge.kind {
            EdgeKind::Mandatory => out.push(Described {
                clause: Clause::Implies(edge.parent, edge.children[0]),
                description: format!(
                    "mandatory relation `{}`: `{parent}` needs `{}`",
                    edge.relation,
                    tree.id(edge.children[0])
                ),
            }),
            EdgeKind::Optional => {}
            EdgeKind::AlternativeGroup => out.push(Described {
                clause: Clause::Card {
                    parent: edge.parent,
                    children: edge.children.clone(),
                    min: 1,
                    max: 1,
                },
                description: format!(
                    "alternative relation `{}`: exactly one option under `{parent}`",
                    edge.relation
                ),
            }),
            EdgeKind::OrGroup { min, max } => out.push(Described {
                clause: Clause::Card {
                    parent: edge.parent,
                    children: edge.children.clone(),
                    min,
                    max,
                },
                description: format!(
                    "or relation `{}`: [{min},{max}] options under `{parent}`",
                    edge.relation
                ),
            }),
        }
    }
    for c in &tree.cross_tree {
        let (from, to) = (tree.id(c.from), tree.id(c.to));
        out.push(match c.kind {
            CrossTreeKind::Require => Described {
                clause: Clause::Implies(c.from, c.to),
                description: format!("`{}`: `{from}` requires `{to}`", c.origin),
            },
            CrossTreeKind::Exclude => Described {
                clause: Clause::Excludes(c.from, c.to),
                description: format!("`{}`: `{from}` excludes `{to}`", c.origin),
            },
        });
    }
    out
}

/// Depth-first search with unit propagation. Free nodes are branched on in
/// index order, unselected first; propagation only fixes values that are
/// the sole feasible choice under the current prefix, so solutions still
/// arrive in ascending [`BlockSet`] order.
pub(crate) struct Search<'c> {
    clauses: Vec<&'c Clause>,
    watches: Vec<Vec<usize>>,
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

impl<'c> Search<'c> {
    pub fn new(len: usize, clauses: impl IntoIterator<Item = &'c Clause>) -> Self {
        let clauses: Vec<&Clause> = clauses.into_iter().collect();
        let mut watches = alloc::vec![Vec::new(); len];
        for (ci, c) in clauses.iter().enumerate() {
            for v in c.vars() {
                if !watches[v].contains(&ci) {
                    watches[v].push(ci);
                }
            }
        }
        Search {
            clauses,
            watches,
            assign: alloc::vec![None; len],
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    /// Calls `visit` with each solution until it returns `false`.
    pub fn run(&mut self, visit: &mut dyn FnMut(&BlockSet) -> bool) {
        let consistent = (0..self.clauses.len()).all(|ci| self.unit(ci)) && self.propagate();
        if consistent {
            self.descend(0, visit);
        }
        self.undo(0);
    }

    pub fn satisfiable(&mut self) -> bool {
        let mut found = false;
        self.run(&mut |_| {
            found = true;
            false
        });
        found
    }

    fn set(&mut self, var: usize, value: bool) -> bool {
        match self.assign[var] {
            Some(current) => current == value,
            None => {
                self.assign[var] = Some(value);
                self.trail.push(var);
                self.queue.push(var);
                true
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.assign[v] = None;
        }
        self.queue.clear();
    }

    /// Checks one clause, fixing any variable it forces. `false` on conflict.
    fn unit(&mut self, ci: usize) -> bool {
        let clause: &'c Clause = self.clauses[ci];
        match *clause {
            Clause::Set(v) => self.set(v, true),
            Clause::Unset(v) => self.set(v, false),
            Clause::Implies(a, b) => match (self.assign[a], self.assign[b]) {
                (Some(true), _) => self.set(b, true),
                (_, Some(false)) => self.set(a, false),
                _ => true,
            },
            Clause::Excludes(a, b) => match (self.assign[a], self.assign[b]) {
                (Some(true), _) => self.set(b, false),
                (_, Some(true)) => self.set(a, false),
                _ => true,
            },
            Clause::Card {
                parent,
                ref children,
                min,
                max,
            } => {
                let (mut on, mut open) = (0u32, 0u32);
                for &c in children {
                    match self.assign[c] {
                        Some(true) => on += 1,
                        None => open += 1,
                        Some(false) => {}
                    }
                }
                let infeasible = on > max || on + open < min;
                match self.assign[parent] {
                    Some(false) => true,
                    None => !infeasible || self.set(parent, false),
                    Some(true) if infeasible => false,
                    Some(true) if on == max && open > 0 => children
                        .iter()
                        .all(|&c| self.assign[c].is_some() || self.set(c, false)),
                    Some(true) if on + open == min && open > 0 => children
                        .iter()
                        .all(|&c| self.assign[c].is_some() || self.set(c, true)),
                    Some(true) => true,
                }
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            for k in 0..self.watches[v].len() {
                let ci = self.watches[v][k];
                if !self.unit(ci) {
                    return false;
                }
            }
        }
        true
    }

    fn descend(&mut self, mut var: usize, visit: &mut dyn FnMut(&BlockSet) -> bool) -> bool {
        while var < self.assign.len() && self.assign[var].is_some() {
            var += 1;
        }
        if var == self.assign.len() {
            let mut set = BlockSet::empty(self.assign.len());
            for (i, a) in self.assign.iter().enumerate() {
                if *a == Some(true) {
                    set.insert(i);
                }
            }
            return visit(&set);
        }
        for value in [false, true] {
            let mark = self.trail.len();
            let ok = self.set(var, value) && self.propagate();
            if ok && !self.descend(var + 1, visit) {
                self.undo(mark);
                return false;
            }
            self.undo(mark);
        }
        true
    }
}

pub(crate) fn require_complete(tree: &BasicFeatureTree, cap: &EnumerationCap) -> Result<(), FpError> {
    if tree.len() > cap.max_blocks {
        return Err(FpError::CapExceeded {
            blocks: tree.len(),
            max_blocks: cap.max_blocks,
        });
    }
    Ok(())
}

fn check_cap(tree: &BasicFeatureTree, cap: &EnumerationCap) -> Result<(), FpError> {
    if cap.max_configurations.is_none() {
        require_complete(tree, cap)?;
    }
    Ok(())
}

/// Every valid configuration, in ascending order of the bitvector over
/// id-sorted blocks. Stops after `cap.max_configurations` and sets
/// `truncated` when more exist.
pub fn enumerate_configurations(tree: &BasicFeatureTree, cap: &EnumerationCap) -> Result<Enumeration, FpError> {
    check_cap(tree, cap)?;
    let compiled = compile(tree);
    let mut search = Search::new(tree.len(), compiled.iter().map(|d| &d.clause));
    let mut configurations = Vec::new();
    let mut truncated = false;
    search.run(&mut |set| {
        if cap.max_configurations.is_some_and(|m| configurations.len() >= m) {
            truncated = true;
            return false;
        }
        configurations.push(tree.configuration(set));
        true
    });
    Ok(Enumeration {
        configurations,
        truncated,
    })
}

/// Number of valid configurations, with the same cap semantics as
/// [`enumerate_configurations`].
pub fn count_configurations(tree: &BasicFeatureTree, cap: &EnumerationCap) -> Result<Count, FpError> {
    check_cap(tree, cap)?;
    let compiled = compile(tree);
    let mut search = Search::new(tree.len(), compiled.iter().map(|d| &d.clause));
    let mut count = 0u64;
    let mut truncated = false;
    search.run(&mut |_| {
        if cap.max_configurations.is_some_and(|m| count >= m as u64) {
            truncated = true;
            return false;
        }
        count += 1;
        true
    });
    Ok(Count { count, truncated })
}

/// Blocks that appear in no valid configuration. In a void tree every
/// block is dead.
pub fn dead_blocks(tree: &BasicFeatureTree, cap: &EnumerationCap) -> Result<BTreeSet<ElementId>, FpError> {
    require_complete(tree, cap)?;
    let compiled = compile(tree);
    let mut search = Search::new(tree.len(), compiled.iter().map(|d| &d.clause));
    let mut alive = BlockSet::empty(tree.len());
    search.run(&mut |set| {
        alive.union_with(set);
        true
    });
    Ok((0..tree.len())
        .filter(|&i| !alive.contains(i))
        .map(|i| tree.id(i).clone())
        .collect())
}

/// Whether the tree admits no valid configuration. Stops at the first
/// solution, so no cap applies.
pub fn is_void(tree: &BasicFeatureTree) -> bool {
    let compiled = compile(tree);
    let mut search = Search::new(tree.len(), compiled.iter().map(|d| &d.clause));
    !search.satisfiable()
}
