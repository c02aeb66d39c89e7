//! Variant and refinement resolution for the Structural Perspective.

mod consistency;
mod resolve;

pub use consistency::check_sp_consistency;
pub use resolve::{
    resolve_all, resolve_effective_block, AppliedRule, EffectiveBlock, EffectiveProperty, Origin,
    RuleKind, SelectionState, SpError,
};
