//! Document format, diagram export, command line and HTTP service for
//! Innovation Modeling Grid models. The engines live in `imog-core`.

pub mod cli;
pub mod dot;
pub mod io;
pub mod service;

pub use dot::{export_dot, DotError, DotPerspective};
pub use io::{canonical_text, parse_document, serialize_document, ParseError, SerializeError};
