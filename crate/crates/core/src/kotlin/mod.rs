//! Kotlin frontend: subset parser, entity builder, and implicit
//! accessor synthesis.

pub mod ast;
mod build;
mod parser;

pub use build::{build_kotlin_entities, synthesize_accessors};
pub use parser::parse_kotlin;

use crate::ir::{FileBuild, IrIds};
use crate::lexer::ParseError;
use crate::model::{Diagnostic, EntityTree, ModelError};
use crate::registry::{ParsedFile, ProcessorDescriptor};

pub fn descriptor() -> ProcessorDescriptor {
    ProcessorDescriptor {
        language_name: "kotlin",
        extensions: &[".kt"],
        parse_entry,
        build_entry,
    }
}

fn parse_entry(source: &str, path: &str) -> Result<(ParsedFile, Vec<Diagnostic>), ParseError> {
    let (ast, diagnostics) = parse_kotlin(source, path)?;
    Ok((ParsedFile::Kotlin(ast), diagnostics))
}

fn build_entry(
    parsed: &ParsedFile,
    path: &str,
    tree: &mut EntityTree,
    ids: &mut IrIds,
) -> Result<FileBuild, ModelError> {
    match parsed {
        ParsedFile::Kotlin(ast) => build_kotlin_entities(ast, path, tree, ids),
        ParsedFile::Java(_) => unreachable!("kotlin build entry received a java parse"),
    }
}
