//! Standard-library companion to `qdissect-core`: the product-string parser,
//! JSON report shapes, and scan-family file loading used by the `qdissect`
//! binary. The algebra itself lives in the core crate.

pub mod families;
pub mod parser;
pub mod report;
