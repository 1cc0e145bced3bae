//! Cross-language static dependency extractor for Kotlin-style and
//! Java-style sources.
//!
//! Source files are parsed into a unified entity tree, thirteen kinds
//! of dependency relations (including Kotlin-exclusive delegation and
//! extension) are resolved via multi-round type inference with
//! synthetic-accessor bridging for Java-to-Kotlin property calls, and
//! results are emitted as per-relation and file-matrix reports tagged
//! with language pairs.

pub mod cli;
pub mod emit;
pub mod harness;
pub mod ir;
pub mod java;
pub mod kotlin;
pub mod lexer;
pub mod model;
pub mod pipeline;
pub mod registry;
pub mod resolver;
