//! Java frontend mirroring the legacy Java path: subset parser and
//! entity builder.

pub mod ast;
mod build;
mod parser;

pub use build::build_java_entities;
pub use parser::parse_java;

use crate::ir::{FileBuild, IrIds};
use crate::lexer::ParseError;
use crate::model::{Diagnostic, EntityTree, ModelError};
use crate::registry::{ParsedFile, ProcessorDescriptor};

pub fn descriptor() -> ProcessorDescriptor {
    ProcessorDescriptor {
        language_name: "java",
        extensions: &[".java"],
        parse_entry,
        build_entry,
    }
}

fn parse_entry(source: &str, path: &str) -> Result<(ParsedFile, Vec<Diagnostic>), ParseError> {
    let (ast, diagnostics) = parse_java(source, path)?;
    Ok((ParsedFile::Java(ast), diagnostics))
}

fn build_entry(
    parsed: &ParsedFile,
    path: &str,
    tree: &mut EntityTree,
    ids: &mut IrIds,
) -> Result<FileBuild, ModelError> {
    match parsed {
        ParsedFile::Java(ast) => build_java_entities(ast, path, tree, ids),
        ParsedFile::Kotlin(_) => unreachable!("java build entry received a kotlin parse"),
    }
}
