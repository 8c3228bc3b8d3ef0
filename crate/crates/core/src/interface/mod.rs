//! Bundled catalog, the result document and its text rendering.

mod catalog;
mod document;

pub use catalog::{catalog, catalog_lookup, CatalogEntry};
pub use document::{
    compute, render_text, verify_random, ComputeOptions, DeltaGroup, InputEcho, RandomVerification, ResultDocument,
    Verification,
};
