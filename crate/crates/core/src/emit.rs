//! Serializes extraction results: a detail JSON with entities and
//! relations, a file-level matrix JSON in the variables/cells shape, a
//! dot graph for visualization, and an id-to-name map file. All
//! emission is deterministic: identical inputs yield identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::model::{
    pair_label, EntityKind, EntityTree, FileLocation, RelationStore, SourceLanguage, UseSite,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    File,
    Structure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamePattern {
    Dot,
    Unix,
}

#[derive(Debug, Clone)]
pub struct EmitOptions {
    pub format: OutputFormat,
    pub granularity: Granularity,
    pub show_language: bool,
    pub strip_leading_path: bool,
    pub emit_name_map: bool,
    pub output_dir: PathBuf,
    pub output_name: String,
    pub name_pattern: NamePattern,
}

impl EmitOptions {
    pub fn validate(&self) -> Result<(), EmitError> {
        if self.granularity == Granularity::Structure && self.format != OutputFormat::Json {
            return Err(EmitError::InvalidOptions(
                "granularity `structure` is valid only with format `json`".to_string(),
            ));
        }
        Ok(())
    }

    fn render_name(&self, qualified_name: &str) -> String {
        match self.name_pattern {
            NamePattern::Dot => qualified_name.to_string(),
            NamePattern::Unix => qualified_name.replace('.', "/"),
        }
    }
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("failed to write `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    InvalidOptions(String),
}

#[derive(Serialize)]
struct DetailDoc {
    entities: Vec<DetailEntity>,
    relations: Vec<DetailRelation>,
}

#[derive(Serialize)]
struct DetailEntity {
    id: u32,
    name: String,
    #[serde(rename = "qualifiedName")]
    qualified_name: String,
    kind: EntityKind,
    language: SourceLanguage,
    parent: Option<u32>,
    location: Option<FileLocation>,
    flags: DetailFlags,
}

#[derive(Serialize)]
struct DetailFlags {
    extension: bool,
    synthetic: bool,
}

#[derive(Serialize)]
struct DetailRelation {
    source: u32,
    target: u32,
    kind: String,
    weight: u32,
    #[serde(rename = "languagePair")]
    language_pair: (SourceLanguage, SourceLanguage),
    locations: Vec<UseSite>,
}

#[derive(Serialize)]
struct MatrixDoc {
    variables: Vec<String>,
    cells: Vec<MatrixCell>,
}

#[derive(Serialize)]
struct MatrixCell {
    src: usize,
    dest: usize,
    values: BTreeMap<String, u64>,
}

fn to_pretty_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

/// Longest common leading directory prefix of the given paths
/// (directory-boundary aware; the file name itself is never stripped).
fn common_dir_prefix(paths: &[&str]) -> usize {
    let dirs: Vec<Vec<&str>> = paths
        .iter()
        .map(|p| {
            let mut parts: Vec<&str> = p.split('/').collect();
            parts.pop();
            parts
        })
        .collect();
    let Some(first) = dirs.first() else { return 0 };
    let mut common = first.len();
    for d in &dirs[1..] {
        let mut k = 0;
        while k < common && k < d.len() && d[k] == first[k] {
            k += 1;
        }
        common = k;
    }
    if common == 0 {
        0
    } else {
        first[..common].iter().map(|part| part.len() + 1).sum()
    }
}

fn display_paths(tree: &EntityTree, options: &EmitOptions) -> BTreeMap<String, String> {
    let files = tree.files();
    let raw: Vec<&str> = files
        .iter()
        .filter_map(|&f| tree.entity(f).location.as_ref().map(|l| l.path.as_str()))
        .collect();
    let strip = if options.strip_leading_path {
        common_dir_prefix(&raw)
    } else {
        0
    };
    raw.iter()
        .map(|&p| (p.to_string(), p[strip.min(p.len())..].to_string()))
        .collect()
}

/// File-level dependency matrix: a lexicographically ordered variables
/// list and sparse cells of per-kind counts. Self-cells are omitted.
pub fn emit_matrix(store: &RelationStore, tree: &EntityTree, options: &EmitOptions) -> Vec<u8> {
    let display = display_paths(tree, options);
    let mut variables: Vec<String> = display.values().cloned().collect();
    variables.sort();
    let index: BTreeMap<&str, usize> = variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();

    let mut cells: BTreeMap<(usize, usize), BTreeMap<String, u64>> = BTreeMap::new();
    for relation in store.iter() {
        let (Some(src_path), Some(dest_path)) = (
            tree.file_path_of(relation.source),
            tree.file_path_of(relation.target),
        ) else {
            continue;
        };
        if src_path == dest_path {
            continue;
        }
        let (Some(src_display), Some(dest_display)) =
            (display.get(src_path), display.get(dest_path))
        else {
            continue;
        };
        let (src, dest) = (index[src_display.as_str()], index[dest_display.as_str()]);
        let mut key = relation.kind.as_str().to_string();
        if options.show_language {
            key.push('(');
            key.push_str(&pair_label(relation.language_pair));
            key.push(')');
        }
        *cells
            .entry((src, dest))
            .or_default()
            .entry(key)
            .or_insert(0) += u64::from(relation.weight);
    }

    let doc = MatrixDoc {
        variables,
        cells: cells
            .into_iter()
            .map(|((src, dest), values)| MatrixCell { src, dest, values })
            .collect(),
    };
    to_pretty_bytes(&doc)
}

/// Unaggregated detail view: all entities ordered by id and all
/// relations ordered by (source, target, kind).
pub fn emit_detail(tree: &EntityTree, store: &RelationStore, options: &EmitOptions) -> Vec<u8> {
    let entities = tree
        .entities()
        .map(|e| DetailEntity {
            id: e.id.0,
            name: e.name.clone(),
            qualified_name: options.render_name(&e.qualified_name),
            kind: e.kind,
            language: e.language,
            parent: e.parent.map(|p| p.0),
            location: e.location.clone(),
            flags: DetailFlags {
                extension: e.is_extension,
                synthetic: e.is_synthetic,
            },
        })
        .collect();
    let relations = store
        .iter()
        .map(|r| DetailRelation {
            source: r.source.0,
            target: r.target.0,
            kind: r.kind.as_str().to_string(),
            weight: r.weight,
            language_pair: r.language_pair,
            locations: r.locations.clone(),
        })
        .collect();
    to_pretty_bytes(&DetailDoc {
        entities,
        relations,
    })
}

/// Graph description with one node per file and one edge per cross-file
/// relation pair, attributed with the language pair.
pub fn emit_graph(store: &RelationStore, tree: &EntityTree, options: &EmitOptions) -> Vec<u8> {
    let display = display_paths(tree, options);
    let mut nodes: Vec<String> = display.values().cloned().collect();
    nodes.sort();

    let mut edges: BTreeMap<(String, String), String> = BTreeMap::new();
    for relation in store.iter() {
        let (Some(src_path), Some(dest_path)) = (
            tree.file_path_of(relation.source),
            tree.file_path_of(relation.target),
        ) else {
            continue;
        };
        if src_path == dest_path {
            continue;
        }
        let (Some(src_display), Some(dest_display)) =
            (display.get(src_path), display.get(dest_path))
        else {
            continue;
        };
        let src_file = tree
            .file_by_path(src_path)
            .expect("located file is indexed");
        let dest_file = tree
            .file_by_path(dest_path)
            .expect("located file is indexed");
        let label = format!(
            "{}->{}",
            tree.entity(src_file).language,
            tree.entity(dest_file).language
        );
        edges
            .entry((src_display.clone(), dest_display.clone()))
            .or_insert(label);
    }

    let mut out = String::from("digraph dependencies {\n");
    for node in &nodes {
        out.push_str(&format!("    \"{node}\";\n"));
    }
    for ((src, dest), label) in &edges {
        out.push_str(&format!(
            "    \"{src}\" -> \"{dest}\" [label=\"{label}\"];\n"
        ));
    }
    out.push_str("}\n");
    out.into_bytes()
}

/// Plain JSON id-to-qualified-name map.
pub fn emit_name_map(tree: &EntityTree, options: &EmitOptions) -> Vec<u8> {
    let map: BTreeMap<String, String> = tree
        .entities()
        .map(|e| (e.id.0.to_string(), options.render_name(&e.qualified_name)))
        .collect();
    to_pretty_bytes(&map)
}

/// Writes the outputs selected by the options under the output
/// directory; returns the written paths.
pub fn write_outputs(
    tree: &EntityTree,
    store: &RelationStore,
    options: &EmitOptions,
) -> Result<Vec<PathBuf>, EmitError> {
    options.validate()?;
    fs::create_dir_all(&options.output_dir).map_err(|source| EmitError::Io {
        path: options.output_dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    let primary = match (options.format, options.granularity) {
        (OutputFormat::Json, Granularity::File) => (
            emit_matrix(store, tree, options),
            format!("{}.json", options.output_name),
        ),
        (OutputFormat::Json, Granularity::Structure) => (
            emit_detail(tree, store, options),
            format!("{}.json", options.output_name),
        ),
        (OutputFormat::Dot, _) => (
            emit_graph(store, tree, options),
            format!("{}.dot", options.output_name),
        ),
    };
    written.push(write_file(&options.output_dir, &primary.1, &primary.0)?);
    if options.emit_name_map {
        let bytes = emit_name_map(tree, options);
        written.push(write_file(
            &options.output_dir,
            &format!("{}-map.json", options.output_name),
            &bytes,
        )?);
    }
    Ok(written)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, EmitError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|source| EmitError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}
