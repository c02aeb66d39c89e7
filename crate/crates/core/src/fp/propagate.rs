use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::enumerate::{compile, require_complete, Clause, Search};
use super::tree::BasicFeatureTree;
use super::{BlockSet, Decision, EnumerationCap, FpError};
use crate::id::ElementId;

/// Explanation of a decision set that no valid configuration satisfies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Conflict {
    /// A minimal subset of the decisions that is already unsatisfiable.
    pub decisions: BTreeMap<ElementId, Decision>,
    /// Tree constraints each of which, if dropped, would make that subset
    /// satisfiable.
    pub constraints: Vec<String>,
    pub message: String,
}

/// Consequences of a set of decisions. Without a conflict, `forced_in` holds
/// the blocks selected in every consistent configuration and `forced_out` the
/// blocks selected in none. With a conflict both are empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropagationResult {
    pub forced_in: BTreeSet<ElementId>,
    pub forced_out: BTreeSet<ElementId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict: Option<Conflict>,
    /// Number of valid configurations consistent with the decisions.
    pub remaining: u64,
}

/// Filters the complete set of valid configurations by the decisions and
/// reports which blocks the survivors agree on.
pub fn propagate(
    tree: &BasicFeatureTree,
    decisions: &BTreeMap<ElementId, Decision>,
    cap: &EnumerationCap,
) -> Result<PropagationResult, FpError> {
    require_complete(tree, cap)?;
    let mut wanted = Vec::with_capacity(decisions.len());
    for (id, d) in decisions {
        let i = tree
            .index_of(id.as_str())
            .ok_or_else(|| FpError::UnknownId(id.clone()))?;
        wanted.push((i, *d));
    }

    let compiled = compile(tree);
    let mut search = Search::new(tree.len(), compiled.iter().map(|d| &d.clause));
    let mut all_of = BlockSet::full(tree.len());
    let mut any_of = BlockSet::empty(tree.len());
    let mut remaining = 0u64;
    search.run(&mut |set| {
        let consistent = wanted
            .iter()
            .all(|&(i, d)| set.contains(i) == (d == Decision::In));
        if consistent {
            remaining += 1;
            all_of.intersect_with(set);
            any_of.union_with(set);
        }
        true
    });

    if remaining == 0 {
        return Ok(PropagationResult {
            conflict: Some(explain(tree, decisions, &wanted)),
            ..Default::default()
        });
    }

    Ok(PropagationResult {
        forced_in: all_of.iter().map(|i| tree.id(i).clone()).collect(),
        forced_out: (0..tree.len())
            .filter(|&i| !any_of.contains(i))
            .map(|i| tree.id(i).clone())
            .collect(),
        conflict: None,
        remaining,
    })
}

fn unit(i: usize, d: Decision) -> Clause {
    match d {
        Decision::In => Clause::Set(i),
        Decision::Out => Clause::Unset(i),
    }
}

fn explain(
    tree: &BasicFeatureTree,
    decisions: &BTreeMap<ElementId, Decision>,
    wanted: &[(usize, Decision)],
) -> Conflict {
    let compiled = compile(tree);
    let satisfiable = |skip: Option<usize>, kept: &[(usize, Decision)]| {
        let units: Vec<Clause> = kept.iter().map(|&(i, d)| unit(i, d)).collect();
        let clauses = compiled
            .iter()
            .enumerate()
            .filter(|(ci, _)| Some(*ci) != skip)
            .map(|(_, c)| &c.clause)
            .chain(units.iter());
        Search::new(tree.len(), clauses).satisfiable()
    };

    // Deletion-based shrinking: drop each decision whose removal keeps the
    // rest unsatisfiable.
    let mut kept: Vec<(usize, Decision)> = wanted.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if satisfiable(None, &trial) {
            i += 1;
        } else {
            kept = trial;
        }
    }

    let constraints: Vec<String> = (0..compiled.len())
        .filter(|&ci| satisfiable(Some(ci), &kept))
        .map(|ci| compiled[ci].description.clone())
        .collect();

    let core: BTreeMap<ElementId, Decision> = kept
        .iter()
        .map(|&(i, d)| (tree.id(i).clone(), d))
        .collect();
    let listed: Vec<String> = core.iter().map(|(id, d)| format!("{id}={d}")).collect();
    let message = if kept.is_empty() {
        String::from("the model admits no valid configuration")
    } else {
        format!(
            "no valid configuration satisfies {} (of {} decisions)",
            listed.join(", "),
            decisions.len()
        )
    };
    Conflict {
        decisions: core,
        constraints,
        message,
    }
}
