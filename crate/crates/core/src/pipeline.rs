//! Four-stage extraction pipeline: Source File Parsing, Entity
//! Extraction, Dependency Relation Extraction, and Result Output, with
//! per-stage wall time reported on the console.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;
use walkdir::WalkDir;

use crate::cli::CliRequest;
use crate::emit::{self, EmitError};
use crate::ir::IrIds;
use crate::model::{Diagnostic, EntityTree, ModelError, RelationStore};
use crate::registry::{LanguageRegistry, ParsedFile, ProcessorDescriptor, RegistryError};
use crate::resolver::{self, InferenceConfig};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("cannot read `{path}`: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("no source files found under `{0}`")]
    NoSourceFiles(String),
    #[error("no source files parsed (all {0} candidate files failed)")]
    NoFilesParsed(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Emit(#[from] EmitError),
}

#[derive(Debug, Clone, Default)]
pub struct StageTimings {
    pub parsing: Duration,
    pub entity_extraction: Duration,
    pub relation_extraction: Duration,
    pub result_output: Duration,
    pub total: Duration,
}

impl StageTimings {
    pub const STAGE_NAMES: [&'static str; 4] = [
        "Source File Parsing",
        "Entity Extraction",
        "Dependency Relation Extraction",
        "Result Output",
    ];

    pub fn render(&self) -> String {
        format!(
            "{}: {:.3}s\n{}: {:.3}s\n{}: {:.3}s\n{}: {:.3}s\nTotal: {:.3}s\n",
            Self::STAGE_NAMES[0],
            self.parsing.as_secs_f64(),
            Self::STAGE_NAMES[1],
            self.entity_extraction.as_secs_f64(),
            Self::STAGE_NAMES[2],
            self.relation_extraction.as_secs_f64(),
            Self::STAGE_NAMES[3],
            self.result_output.as_secs_f64(),
            self.total.as_secs_f64(),
        )
    }
}

/// Everything the analysis stages produce, before emission.
#[derive(Debug)]
pub struct AnalysisOutcome {
    pub tree: EntityTree,
    pub store: RelationStore,
    pub rounds_used: usize,
    pub diagnostics: Vec<Diagnostic>,
    pub analyzed: Vec<String>,
    pub skipped: Vec<(String, String)>,
    pub timings: StageTimings,
}

#[derive(Debug)]
pub struct PipelineReport {
    pub timings: StageTimings,
    pub analyzed: Vec<String>,
    pub skipped: Vec<(String, String)>,
    pub diagnostics: Vec<Diagnostic>,
    pub outputs: Vec<PathBuf>,
    pub entity_count: usize,
    pub relation_count: usize,
    pub rounds_used: usize,
}

fn matches_extensions(path: &Path, processors: &[&ProcessorDescriptor]) -> bool {
    let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
        return false;
    };
    let dotted = format!(".{ext}");
    processors
        .iter()
        .any(|p| p.extensions.contains(&dotted.as_str()))
}

fn list_dir(
    dir: &Path,
    recursive: bool,
    processors: &[&ProcessorDescriptor],
    out: &mut Vec<PathBuf>,
) -> Result<(), PipelineError> {
    let depth = if recursive { usize::MAX } else { 1 };
    for entry in WalkDir::new(dir).max_depth(depth).sort_by_file_name() {
        let entry = entry.map_err(|e| PipelineError::Unreadable {
            path: dir.display().to_string(),
            source: e.into(),
        })?;
        if entry.file_type().is_file() && matches_extensions(entry.path(), processors) {
            out.push(entry.path().to_path_buf());
        }
    }
    Ok(())
}

/// Files to analyze, sorted lexicographically by path regardless of
/// filesystem order. Without `auto_include` only the source directory
/// itself (and each include path) is listed; with it the walk recurses.
pub fn discover_sources(
    src: &Path,
    includes: &[PathBuf],
    auto_include: bool,
    processors: &[&ProcessorDescriptor],
) -> Result<Vec<PathBuf>, PipelineError> {
    if !src.exists() {
        return Err(PipelineError::Unreadable {
            path: src.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "path does not exist"),
        });
    }
    let mut out = Vec::new();
    list_dir(src, auto_include, processors, &mut out)?;
    for include in includes {
        if include.is_file() {
            if matches_extensions(include, processors) {
                out.push(include.clone());
            }
        } else {
            list_dir(include, auto_include, processors, &mut out)?;
        }
    }
    out.sort_by_key(|p| p.display().to_string());
    out.dedup();
    Ok(out)
}

/// Runs stages 1-3 over the given files: parse, build entities, resolve
/// relations. Files that fail to parse are skipped with a diagnostic.
pub fn analyze(
    registry: &LanguageRegistry,
    lang: &str,
    files: &[PathBuf],
    config: &InferenceConfig,
) -> Result<AnalysisOutcome, PipelineError> {
    let processors = registry.processors_for_request(lang)?;
    let mut timings = StageTimings::default();
    let mut diagnostics = Vec::new();
    let mut skipped = Vec::new();

    // Stage 1: Source File Parsing.
    let start = Instant::now();
    let mut parsed: Vec<(String, ParsedFile)> = Vec::new();
    for path in files {
        let display = path_string(path);
        let source = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                skipped.push((display, e.to_string()));
                continue;
            }
        };
        let Some(descriptor) = processors.iter().find(|p| matches_extensions(path, &[p])) else {
            continue;
        };
        match (descriptor.parse_entry)(&source, &display) {
            Ok((file, mut diags)) => {
                diagnostics.append(&mut diags);
                parsed.push((display, file));
            }
            Err(e) => {
                diagnostics.push(Diagnostic {
                    path: display.clone(),
                    line: e.line,
                    message: format!("parse error: {} (file skipped)", e.message),
                });
                skipped.push((display, e.to_string()));
            }
        }
    }
    timings.parsing = start.elapsed();
    if parsed.is_empty() {
        if files.is_empty() {
            return Err(PipelineError::NoSourceFiles(String::new()));
        }
        return Err(PipelineError::NoFilesParsed(files.len()));
    }

    // Stage 2: Entity Extraction.
    let start = Instant::now();
    let mut tree = EntityTree::with_builtins();
    let mut ids = IrIds::new();
    let mut bodies = Vec::new();
    let mut analyzed = Vec::new();
    for (path, file) in &parsed {
        let descriptor = match file {
            ParsedFile::Kotlin(_) => registry.by_language("kotlin"),
            ParsedFile::Java(_) => registry.by_language("java"),
        }
        .expect("parsed files come from registered processors");
        let build = (descriptor.build_entry)(file, path, &mut tree, &mut ids)?;
        bodies.extend(build.bodies);
        analyzed.push(path.clone());
    }
    timings.entity_extraction = start.elapsed();

    // Stage 3: Dependency Relation Extraction.
    let start = Instant::now();
    let resolution = resolver::resolve_all(&mut tree, &bodies, config)?;
    timings.relation_extraction = start.elapsed();
    diagnostics.extend(resolution.diagnostics.clone());

    Ok(AnalysisOutcome {
        tree,
        store: resolution.store,
        rounds_used: resolution.inference.rounds_used,
        diagnostics,
        analyzed,
        skipped,
        timings,
    })
}

fn path_string(path: &Path) -> String {
    path.display().to_string().replace('\\', "/")
}

/// Full run: discovery, the three analysis stages, and Result Output.
pub fn run_pipeline(request: &CliRequest) -> Result<PipelineReport, PipelineError> {
    let total_start = Instant::now();
    let registry = LanguageRegistry::with_default_processors();
    let processors = registry.processors_for_request(&request.lang)?;
    let files = discover_sources(
        &request.src,
        &request.includes,
        request.auto_include,
        &processors,
    )?;
    if files.is_empty() {
        return Err(PipelineError::NoSourceFiles(
            request.src.display().to_string(),
        ));
    }

    let config = InferenceConfig::default();
    let mut outcome = analyze(&registry, &request.lang, &files, &config)?;

    // Stage 4: Result Output.
    let start = Instant::now();
    let options = request.emit_options()?;
    let outputs = emit::write_outputs(&outcome.tree, &outcome.store, &options)?;
    outcome.timings.result_output = start.elapsed();
    outcome.timings.total = total_start.elapsed();

    Ok(PipelineReport {
        timings: outcome.timings,
        analyzed: outcome.analyzed,
        skipped: outcome.skipped,
        diagnostics: outcome.diagnostics,
        outputs,
        entity_count: outcome.tree.len(),
        relation_count: outcome.store.len(),
        rounds_used: outcome.rounds_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_match_the_four_stage_split() {
        let timings = StageTimings::default();
        let rendered = timings.render();
        for name in StageTimings::STAGE_NAMES {
            assert!(rendered.contains(name), "missing stage `{name}`");
        }
        assert!(rendered.contains("Total:"));
    }

    #[test]
    fn discovery_is_sorted_and_extension_filtered() {
        let registry = LanguageRegistry::with_default_processors();
        let processors = registry.processors_for_request("kotlin").unwrap();
        let files =
            discover_sources(Path::new("fixtures/corpus"), &[], false, &processors).unwrap();
        assert!(!files.is_empty());
        let names: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(names
            .iter()
            .all(|n| n.ends_with(".kt") || n.ends_with(".java")));
    }

    #[test]
    fn java_only_request_skips_kotlin_files() {
        let registry = LanguageRegistry::with_default_processors();
        let processors = registry.processors_for_request("java").unwrap();
        let files =
            discover_sources(Path::new("fixtures/corpus"), &[], false, &processors).unwrap();
        assert!(files
            .iter()
            .all(|p| p.display().to_string().ends_with(".java")));
    }

    #[test]
    fn missing_source_directory_is_unreadable() {
        let registry = LanguageRegistry::with_default_processors();
        let processors = registry.processors_for_request("kotlin").unwrap();
        let err = discover_sources(
            Path::new("fixtures/does_not_exist"),
            &[],
            false,
            &processors,
        )
        .unwrap_err();
        assert!(matches!(err, PipelineError::Unreadable { .. }));
    }
}
