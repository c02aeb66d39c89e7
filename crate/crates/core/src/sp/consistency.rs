use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::EffectiveBlock;
use crate::diagnostic::{codes, sort_diagnostics, Diagnostic};
use crate::id::ElementId;
use crate::index::ModelIndex;
use crate::model::*;

fn show(value: &Scalar, unit: &Option<String>) -> String {
    match unit {
        Some(u) => format!("{value} {u}"),
        None => format!("{value}"),
    }
}

/// Structural blocks a requirement reaches, directly or through the
/// allocation of a functional target.
fn reached_blocks<'m>(model: &'m Model, index: &ModelIndex<'m>, req: &'m Requirement) -> BTreeSet<&'m ElementId> {
    let mut out = BTreeSet::new();
    for t in &req.targets {
        if index.sp_block(t.as_str()).is_some() {
            out.insert(t);
        } else if index.fp_block(t.as_str()).is_some() {
            for link in &model.traces {
                if link.kind == TraceKind::Allocate
                    && link.source == *t
                    && index.sp_block(link.target.as_str()).is_some()
                {
                    out.insert(&link.target);
                }
            }
        }
    }
    out
}

/// Compares requirement attributes against effective block properties by
/// exact name. A differing value or unit is a warning; two confirmed
/// requirements disagreeing about the same attribute of one block is an
/// error. Discarded requirements are ignored.
pub fn check_sp_consistency(model: &Model, resolved: &BTreeMap<ElementId, EffectiveBlock>) -> Vec<Diagnostic> {
    let index = ModelIndex::new(model);
    let mut out = Vec::new();
    let mut confirmed: BTreeMap<&ElementId, Vec<(&Requirement, &Property)>> = BTreeMap::new();

    for req in &model.quality {
        let status = req.status();
        if status == RequirementStatus::Discarded || req.custom_attributes.is_empty() {
            continue;
        }
        for block in reached_blocks(model, &index, req) {
            if status == RequirementStatus::Confirmed {
                let entry = confirmed.entry(block).or_default();
                entry.extend(req.custom_attributes.iter().map(|a| (req, a)));
            }
            let Some(eff) = resolved.get(block) else { continue };
            for attr in &req.custom_attributes {
                let Some(p) = eff.property(&attr.name) else { continue };
                if p.value != attr.value || p.unit != attr.unit {
                    out.push(Diagnostic::new(
                        codes::SP_PROP,
                        Some(&req.id),
                        format!(
                            "expects `{}` = {} but `{}` has {}",
                            attr.name,
                            show(&attr.value, &attr.unit),
                            block,
                            show(&p.value, &p.unit)
                        ),
                    ));
                }
            }
        }
    }

    for (block, attrs) in &confirmed {
        for (i, (ra, a)) in attrs.iter().enumerate() {
            for (rb, b) in &attrs[i + 1..] {
                if ra.id != rb.id && a.name == b.name && (a.value != b.value || a.unit != b.unit) {
                    out.push(Diagnostic::new(
                        codes::SP_REQ_CONFLICT,
                        Some(block),
                        format!(
                            "`{}` demands `{}` = {}, `{}` demands {}",
                            ra.id,
                            a.name,
                            show(&a.value, &a.unit),
                            rb.id,
                            show(&b.value, &b.unit)
                        ),
                    ));
                }
            }
        }
    }
    sort_diagnostics(&mut out);
    out
}
