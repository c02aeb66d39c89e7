//! Core model and analyses for the Innovation Modeling Grid.
//!
//! The crate is `no_std` with `alloc`. Parsing, file formats and the
//! command line live in the `imog` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostic;
pub mod filter;
pub mod fp;
mod graph;
pub mod id;
pub mod index;
pub mod model;
pub mod sp;
#[cfg(test)]
mod testing;
pub mod trace;
pub mod validate;

pub use diagnostic::{codes, Diagnostic, Severity};
pub use filter::{filter_by_abstraction_level, levels_in, FilterError, ModelView};
pub use id::ElementId;
pub use index::{resolve_reference, ElementRef, LookupError, ModelIndex, Perspective};
pub use model::*;
pub use validate::validate_model;
