//! Language-agnostic data model shared by every other module: entities,
//! dependency relations, the entity tree, and its lookup indices.
//!
//! The tree is built single-writer during entity extraction and resolution;
//! afterwards it is immutable and safe to share for concurrent reads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense, run-scoped entity identifier. Ids are assigned contiguously
/// starting at 0 and never change for the rest of the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityKind {
    File,
    Package,
    Type,
    Function,
    Property,
    Variable,
    Parameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceLanguage {
    Kotlin,
    Java,
    /// Reserved for the synthetic built-in type entities.
    Builtin,
}

impl fmt::Display for SourceLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SourceLanguage::Kotlin => "kotlin",
            SourceLanguage::Java => "java",
            SourceLanguage::Builtin => "builtin",
        };
        f.write_str(s)
    }
}

/// Span of a declaration in a source file; 1-based lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileLocation {
    pub path: String,
    #[serde(rename = "startLine")]
    pub start_line: u32,
    #[serde(rename = "endLine")]
    pub end_line: u32,
}

/// A single point of use; relations carry one per occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UseSite {
    pub path: String,
    pub line: u32,
}

/// An occurrence of a type name, carrying its raw text and, once
/// inference succeeds, the resolved entity id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRef {
    pub raw_name: String,
    pub resolved: Option<EntityId>,
    pub use_site: UseSite,
}

impl TypeRef {
    pub fn new(raw_name: impl Into<String>, path: impl Into<String>, line: u32) -> Self {
        TypeRef {
            raw_name: raw_name.into(),
            resolved: None,
            use_site: UseSite {
                path: path.into(),
                line,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entity {
    pub id: EntityId,
    pub name: String,
    pub qualified_name: String,
    pub kind: EntityKind,
    pub language: SourceLanguage,
    pub parent: Option<EntityId>,
    pub location: Option<FileLocation>,
    pub is_extension: bool,
    /// Present iff `is_extension`.
    pub receiver_type: Option<TypeRef>,
    /// True for generated accessors and built-ins.
    pub is_synthetic: bool,
    /// Delegation target (`by` clause) for classes and properties.
    pub delegates_to: Option<TypeRef>,
    pub raw_supertypes: Vec<TypeRef>,
    /// Declared return type for functions; declared type for
    /// properties, variables, and parameters.
    pub raw_return_type: Option<TypeRef>,
    pub raw_parameter_types: Vec<TypeRef>,
}

/// An [`Entity`] before interning; the id and qualified name are
/// assigned by [`EntityTree::intern`].
#[derive(Debug, Clone)]
pub struct EntityProto {
    pub name: String,
    pub kind: EntityKind,
    pub language: SourceLanguage,
    pub parent: Option<EntityId>,
    pub location: Option<FileLocation>,
    pub is_extension: bool,
    pub receiver_type: Option<TypeRef>,
    pub is_synthetic: bool,
    pub delegates_to: Option<TypeRef>,
    pub raw_supertypes: Vec<TypeRef>,
    pub raw_return_type: Option<TypeRef>,
    pub raw_parameter_types: Vec<TypeRef>,
}

impl EntityProto {
    pub fn new(name: impl Into<String>, kind: EntityKind, language: SourceLanguage) -> Self {
        EntityProto {
            name: name.into(),
            kind,
            language,
            parent: None,
            location: None,
            is_extension: false,
            receiver_type: None,
            is_synthetic: false,
            delegates_to: None,
            raw_supertypes: Vec::new(),
            raw_return_type: None,
            raw_parameter_types: Vec::new(),
        }
    }

    pub fn with_parent(mut self, parent: EntityId) -> Self {
        self.parent = Some(parent);
        self
    }

    pub fn with_location(mut self, location: FileLocation) -> Self {
        self.location = Some(location);
        self
    }
}

/// Closed taxonomy of dependency relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    Import,
    Contain,
    Extend,
    Implement,
    Call,
    Create,
    Cast,
    Annotation,
    Use,
    Parameter,
    Return,
    Delegate,
    Extension,
}

impl RelationKind {
    pub const ALL: [RelationKind; 13] = [
        RelationKind::Import,
        RelationKind::Contain,
        RelationKind::Extend,
        RelationKind::Implement,
        RelationKind::Call,
        RelationKind::Create,
        RelationKind::Cast,
        RelationKind::Annotation,
        RelationKind::Use,
        RelationKind::Parameter,
        RelationKind::Return,
        RelationKind::Delegate,
        RelationKind::Extension,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::Import => "Import",
            RelationKind::Contain => "Contain",
            RelationKind::Extend => "Extend",
            RelationKind::Implement => "Implement",
            RelationKind::Call => "Call",
            RelationKind::Create => "Create",
            RelationKind::Cast => "Cast",
            RelationKind::Annotation => "Annotation",
            RelationKind::Use => "Use",
            RelationKind::Parameter => "Parameter",
            RelationKind::Return => "Return",
            RelationKind::Delegate => "Delegate",
            RelationKind::Extension => "Extension",
        }
    }

    /// Delegate and Extension never occur with a Java source entity.
    pub fn kotlin_only_source(self) -> bool {
        matches!(self, RelationKind::Delegate | RelationKind::Extension)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// (source language, target language), always one of the four
/// kotlin/java pairs; a Builtin endpoint adopts the other side's language.
pub type LanguagePair = (SourceLanguage, SourceLanguage);

pub fn pair_label(pair: LanguagePair) -> String {
    format!("{}->{}", pair.0, pair.1)
}

/// A typed, weighted, located edge between two entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyRelation {
    pub source: EntityId,
    pub target: EntityId,
    pub kind: RelationKind,
    /// Count of occurrences; always equals `locations.len()`.
    pub weight: u32,
    pub locations: Vec<UseSite>,
    pub language_pair: LanguagePair,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(
        "duplicate entity `{qualified_name}` (first declared at {}, redeclared at {})",
        fmt_loc(first),
        fmt_loc(second)
    )]
    DuplicateEntity {
        qualified_name: String,
        first: Option<FileLocation>,
        second: Option<FileLocation>,
    },
    #[error("relation kind {kind} cannot have the Java entity `{entity}` as its source")]
    TaxonomyViolation { kind: RelationKind, entity: String },
    #[error("unknown entity id {0}")]
    UnknownEntity(EntityId),
}

fn fmt_loc(loc: &Option<FileLocation>) -> String {
    match loc {
        Some(l) => format!("{}:{}", l.path, l.start_line),
        None => "<no location>".to_string(),
    }
}

/// One import directive of a file, kept per-file for scope resolution
/// and the Import relation.
#[derive(Debug, Clone)]
pub struct ImportDirective {
    pub raw_path: String,
    pub line: u32,
    pub wildcard: bool,
    pub is_static: bool,
    pub resolved: Option<EntityId>,
}

impl ImportDirective {
    pub fn last_segment(&self) -> &str {
        self.raw_path.rsplit('.').next().unwrap_or(&self.raw_path)
    }
}

/// Shape of a function-type parameter (`Bar.() -> Int`), kept aside so
/// receiver-typed lambda arguments can be bound during inference.
#[derive(Debug, Clone)]
pub struct FnTypeShape {
    pub receiver: Option<TypeRef>,
    pub params: Vec<TypeRef>,
    pub ret: Option<TypeRef>,
}

/// Built-in types interned first in every tree, in this order. Each row
/// unifies the Kotlin spelling with its Java counterpart.
pub const BUILTIN_TYPES: [(&str, &[&str]); 9] = [
    ("Any", &["Any", "Object"]),
    ("Boolean", &["Boolean", "boolean"]),
    ("Char", &["Char", "char"]),
    ("Double", &["Double", "double"]),
    ("Float", &["Float", "float"]),
    ("Int", &["Int", "int"]),
    ("Long", &["Long", "long"]),
    ("String", &["String"]),
    ("Unit", &["Unit", "void"]),
];

/// The id-indexed, scope-indexed forest of all entities across all
/// parsed files plus built-in and synthetic entities.
#[derive(Debug, Default)]
pub struct EntityTree {
    entities: Vec<Entity>,
    by_qualified_name: HashMap<String, EntityId>,
    children: HashMap<EntityId, Vec<EntityId>>,
    builtins: BTreeMap<String, EntityId>,
    file_by_path: HashMap<String, EntityId>,
    imports: HashMap<EntityId, Vec<ImportDirective>>,
    annotations: Vec<(EntityId, TypeRef)>,
    interfaces: HashMap<EntityId, ()>,
    mutable_properties: HashMap<EntityId, ()>,
    accessor_property: HashMap<EntityId, EntityId>,
    fn_type_params: HashMap<(EntityId, usize), FnTypeShape>,
    extensions_by_receiver: BTreeMap<EntityId, Vec<EntityId>>,
}

impl EntityTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fresh tree with the built-in types interned (ids 0..8).
    pub fn with_builtins() -> Self {
        let mut tree = Self::new();
        for (canonical, aliases) in BUILTIN_TYPES {
            let mut proto = EntityProto::new(canonical, EntityKind::Type, SourceLanguage::Builtin);
            proto.is_synthetic = true;
            let id = tree
                .intern(proto)
                .expect("builtin interning cannot collide");
            for alias in aliases {
                tree.builtins.insert((*alias).to_string(), id);
            }
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.index()]
    }

    pub fn entity_mut(&mut self, id: EntityId) -> &mut Entity {
        &mut self.entities[id.index()]
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = EntityId> {
        (0..self.entities.len() as u32).map(EntityId)
    }

    pub fn children(&self, id: EntityId) -> &[EntityId] {
        self.children.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn by_qualified_name(&self, qn: &str) -> Option<EntityId> {
        self.by_qualified_name.get(qn).copied()
    }

    pub fn builtin(&self, name: &str) -> Option<EntityId> {
        self.builtins.get(name).copied()
    }

    pub fn is_builtin(&self, id: EntityId) -> bool {
        self.entity(id).language == SourceLanguage::Builtin
    }

    /// File entities in id order.
    pub fn files(&self) -> Vec<EntityId> {
        self.entities
            .iter()
            .filter(|e| e.kind == EntityKind::File)
            .map(|e| e.id)
            .collect()
    }

    pub fn file_by_path(&self, path: &str) -> Option<EntityId> {
        self.file_by_path.get(path).copied()
    }

    /// Interns a new entity, assigning the next dense id and computing
    /// the qualified name from the parent chain.
    pub fn intern(&mut self, proto: EntityProto) -> Result<EntityId, ModelError> {
        let qualified_name = match proto.parent {
            Some(p) => {
                let parent_qn = &self.entity(p).qualified_name;
                if parent_qn.is_empty() {
                    proto.name.clone()
                } else {
                    format!("{parent_qn}.{}", proto.name)
                }
            }
            None => proto.name.clone(),
        };
        let indexed = !proto.is_synthetic || proto.language == SourceLanguage::Builtin;
        if indexed {
            if let Some(&existing) = self.by_qualified_name.get(&qualified_name) {
                return Err(ModelError::DuplicateEntity {
                    qualified_name,
                    first: self.entity(existing).location.clone(),
                    second: proto.location,
                });
            }
        }
        let id = EntityId(self.entities.len() as u32);
        if indexed {
            self.by_qualified_name.insert(qualified_name.clone(), id);
        }
        if let Some(p) = proto.parent {
            self.children.entry(p).or_default().push(id);
        }
        if proto.kind == EntityKind::File {
            if let Some(loc) = &proto.location {
                self.file_by_path.insert(loc.path.clone(), id);
            }
        }
        self.entities.push(Entity {
            id,
            name: proto.name,
            qualified_name,
            kind: proto.kind,
            language: proto.language,
            parent: proto.parent,
            location: proto.location,
            is_extension: proto.is_extension,
            receiver_type: proto.receiver_type,
            is_synthetic: proto.is_synthetic,
            delegates_to: proto.delegates_to,
            raw_supertypes: proto.raw_supertypes,
            raw_return_type: proto.raw_return_type,
            raw_parameter_types: proto.raw_parameter_types,
        });
        Ok(id)
    }

    /// Returns the package entity with the given dotted name, interning
    /// it on first use. The default (unnamed) package has an empty name.
    pub fn intern_package(&mut self, name: &str, language: SourceLanguage) -> EntityId {
        if let Some(id) = self.by_qualified_name(name) {
            if self.entity(id).kind == EntityKind::Package {
                return id;
            }
        }
        self.intern(EntityProto::new(name, EntityKind::Package, language))
            .expect("package names are get-or-intern")
    }

    /// Scope-based name lookup: the scope's children, then ancestors'
    /// children, then imports of the enclosing file, then built-ins.
    pub fn lookup(&self, scope: EntityId, name: &str) -> Option<EntityId> {
        let mut enclosing_path: Option<&str> = None;
        let mut cursor = Some(scope);
        while let Some(current) = cursor {
            let entity = self.entity(current);
            if enclosing_path.is_none() {
                if let Some(loc) = &entity.location {
                    enclosing_path = Some(&loc.path);
                }
            }
            for &child in self.children(current) {
                if self.entity(child).name == name {
                    return Some(child);
                }
            }
            cursor = entity.parent;
        }
        if let Some(path) = enclosing_path {
            if let Some(file) = self.file_by_path(path) {
                for import in self.imports(file) {
                    if !import.wildcard && import.last_segment() == name {
                        if let Some(target) = import.resolved {
                            return Some(target);
                        }
                    }
                }
            }
        }
        self.builtin(name)
    }

    /// Nearest source file path an entity belongs to (walking parents);
    /// None for built-ins and packages.
    pub fn file_path_of(&self, id: EntityId) -> Option<&str> {
        let mut cursor = Some(id);
        while let Some(current) = cursor {
            let entity = self.entity(current);
            if let Some(loc) = &entity.location {
                return Some(&loc.path);
            }
            cursor = entity.parent;
        }
        None
    }

    pub fn add_import(&mut self, file: EntityId, directive: ImportDirective) {
        self.imports.entry(file).or_default().push(directive);
    }

    pub fn imports(&self, file: EntityId) -> &[ImportDirective] {
        self.imports.get(&file).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn imports_mut(&mut self, file: EntityId) -> Option<&mut Vec<ImportDirective>> {
        self.imports.get_mut(&file)
    }

    pub fn add_annotation(&mut self, target: EntityId, annotation: TypeRef) {
        self.annotations.push((target, annotation));
    }

    pub fn annotations(&self) -> &[(EntityId, TypeRef)] {
        &self.annotations
    }

    pub fn annotations_mut(&mut self) -> &mut Vec<(EntityId, TypeRef)> {
        &mut self.annotations
    }

    pub fn mark_interface(&mut self, id: EntityId) {
        self.interfaces.insert(id, ());
    }

    pub fn is_interface(&self, id: EntityId) -> bool {
        self.interfaces.contains_key(&id)
    }

    pub fn set_mutable_property(&mut self, id: EntityId) {
        self.mutable_properties.insert(id, ());
    }

    pub fn is_mutable_property(&self, id: EntityId) -> bool {
        self.mutable_properties.contains_key(&id)
    }

    /// Links a synthetic accessor to the property it was generated for,
    /// so relations through the accessor can attribute the property.
    pub fn link_accessor(&mut self, accessor: EntityId, property: EntityId) {
        self.accessor_property.insert(accessor, property);
    }

    pub fn accessor_property(&self, accessor: EntityId) -> Option<EntityId> {
        self.accessor_property.get(&accessor).copied()
    }

    pub fn set_fn_type_param(&mut self, function: EntityId, index: usize, shape: FnTypeShape) {
        self.fn_type_params.insert((function, index), shape);
    }

    pub fn fn_type_param(&self, function: EntityId, index: usize) -> Option<&FnTypeShape> {
        self.fn_type_params.get(&(function, index))
    }

    pub fn fn_type_param_keys(&self) -> Vec<(EntityId, usize)> {
        let mut keys: Vec<_> = self.fn_type_params.keys().copied().collect();
        keys.sort();
        keys
    }

    pub fn fn_type_param_mut(
        &mut self,
        function: EntityId,
        index: usize,
    ) -> Option<&mut FnTypeShape> {
        self.fn_type_params.get_mut(&(function, index))
    }

    /// Makes an extension function visible to lookups on its receiver type.
    pub fn register_extension(&mut self, receiver: EntityId, function: EntityId) {
        self.extensions_by_receiver
            .entry(receiver)
            .or_default()
            .push(function);
    }

    pub fn extensions_on(&self, receiver: EntityId) -> &[EntityId] {
        self.extensions_by_receiver
            .get(&receiver)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Aggregated relation store keyed by (source, target, kind); iteration
/// order is the sorted key order.
#[derive(Debug, Default)]
pub struct RelationStore {
    relations: BTreeMap<(EntityId, EntityId, RelationKind), DependencyRelation>,
}

impl RelationStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one occurrence: creates the (source, target, kind)
    /// relation with weight 1, or increments the weight and appends the
    /// location.
    pub fn record(
        &mut self,
        tree: &EntityTree,
        source: EntityId,
        target: EntityId,
        kind: RelationKind,
        at: UseSite,
    ) -> Result<(), ModelError> {
        let source_lang = tree.entity(source).language;
        let target_lang = tree.entity(target).language;
        if kind.kotlin_only_source() && source_lang == SourceLanguage::Java {
            return Err(ModelError::TaxonomyViolation {
                kind,
                entity: tree.entity(source).qualified_name.clone(),
            });
        }
        let pair = (
            coerce_language(source_lang, target_lang),
            coerce_language(target_lang, source_lang),
        );
        let entry = self
            .relations
            .entry((source, target, kind))
            .or_insert_with(|| DependencyRelation {
                source,
                target,
                kind,
                weight: 0,
                locations: Vec::new(),
                language_pair: pair,
            });
        entry.weight += 1;
        entry.locations.push(at);
        Ok(())
    }

    pub fn get(
        &self,
        source: EntityId,
        target: EntityId,
        kind: RelationKind,
    ) -> Option<&DependencyRelation> {
        self.relations.get(&(source, target, kind))
    }

    /// Relations in (source, target, kind) order.
    pub fn iter(&self) -> impl Iterator<Item = &DependencyRelation> {
        self.relations.values()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.relations.values().map(|r| u64::from(r.weight)).sum()
    }
}

/// A Builtin endpoint adopts the other endpoint's language so every
/// relation carries one of the four kotlin/java pairs.
fn coerce_language(lang: SourceLanguage, other: SourceLanguage) -> SourceLanguage {
    match (lang, other) {
        (SourceLanguage::Builtin, SourceLanguage::Builtin) => SourceLanguage::Kotlin,
        (SourceLanguage::Builtin, o) => o,
        (l, _) => l,
    }
}

/// Cross-cutting non-fatal finding surfaced to the console.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub line: u32,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.path, self.line, self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn loc(path: &str, line: u32) -> FileLocation {
        FileLocation {
            path: path.to_string(),
            start_line: line,
            end_line: line,
        }
    }

    fn site(path: &str, line: u32) -> UseSite {
        UseSite {
            path: path.to_string(),
            line,
        }
    }

    #[test]
    fn first_interned_entity_gets_id_zero() {
        let mut tree = EntityTree::new();
        let id = tree
            .intern(EntityProto::new(
                "Bar",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        assert_eq!(id, EntityId(0));
    }

    #[test]
    fn builtins_intern_in_fixed_alphabetical_order() {
        let tree = EntityTree::with_builtins();
        assert_eq!(tree.len(), 9);
        assert_eq!(tree.entity(EntityId(0)).name, "Any");
        assert_eq!(tree.entity(EntityId(5)).name, "Int");
        assert_eq!(tree.entity(EntityId(8)).name, "Unit");
        // Java spellings unify onto the same entities.
        assert_eq!(tree.builtin("int"), tree.builtin("Int"));
        assert_eq!(tree.builtin("void"), tree.builtin("Unit"));
        assert_eq!(tree.builtin("Object"), tree.builtin("Any"));
    }

    #[test]
    fn qualified_name_concatenates_parent_chain() {
        let mut tree = EntityTree::new();
        let bar = tree
            .intern(EntityProto::new(
                "Bar",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let x = tree
            .intern(
                EntityProto::new("x", EntityKind::Property, SourceLanguage::Kotlin)
                    .with_parent(bar),
            )
            .unwrap();
        assert_eq!(tree.entity(x).qualified_name, "Bar.x");
    }

    #[test]
    fn duplicate_qualified_name_is_rejected_with_both_locations() {
        let mut tree = EntityTree::new();
        let pkg = tree.intern_package("demo", SourceLanguage::Kotlin);
        tree.intern(
            EntityProto::new("Foo", EntityKind::Type, SourceLanguage::Kotlin)
                .with_parent(pkg)
                .with_location(loc("a.kt", 1)),
        )
        .unwrap();
        let err = tree
            .intern(
                EntityProto::new("Foo", EntityKind::Type, SourceLanguage::Kotlin)
                    .with_parent(pkg)
                    .with_location(loc("b.kt", 3)),
            )
            .unwrap_err();
        match err {
            ModelError::DuplicateEntity {
                qualified_name,
                first,
                second,
            } => {
                assert_eq!(qualified_name, "demo.Foo");
                assert_eq!(first.unwrap().path, "a.kt");
                assert_eq!(second.unwrap().path, "b.kt");
            }
            other => panic!("expected DuplicateEntity, got {other:?}"),
        }
    }

    #[test]
    fn lookup_prefers_receiver_scope_over_sibling_class() {
        // Bar.x and Foo.x both exist; a lookup scoped to Bar must find Bar.x.
        let mut tree = EntityTree::with_builtins();
        let bar = tree
            .intern(EntityProto::new(
                "Bar",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let bar_x = tree
            .intern(
                EntityProto::new("x", EntityKind::Property, SourceLanguage::Kotlin)
                    .with_parent(bar),
            )
            .unwrap();
        let foo = tree
            .intern(EntityProto::new(
                "Foo",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        tree.intern(
            EntityProto::new("x", EntityKind::Property, SourceLanguage::Kotlin).with_parent(foo),
        )
        .unwrap();
        assert_eq!(tree.lookup(bar, "x"), Some(bar_x));
    }

    #[test]
    fn lookup_falls_back_to_builtins_and_reports_misses() {
        let mut tree = EntityTree::with_builtins();
        let scope = tree
            .intern(EntityProto::new(
                "Foo",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        assert_eq!(tree.lookup(scope, "Int"), tree.builtin("Int"));
        assert_eq!(tree.lookup(scope, "zzz"), None);
    }

    #[test]
    fn lookup_consults_imports_of_the_enclosing_file() {
        let mut tree = EntityTree::with_builtins();
        let other_pkg = tree.intern_package("lib", SourceLanguage::Java);
        let target = tree
            .intern(
                EntityProto::new("Codec", EntityKind::Type, SourceLanguage::Java)
                    .with_parent(other_pkg),
            )
            .unwrap();
        let pkg = tree.intern_package("app", SourceLanguage::Kotlin);
        let file = tree
            .intern(
                EntityProto::new("main.kt", EntityKind::File, SourceLanguage::Kotlin)
                    .with_parent(pkg)
                    .with_location(loc("src/main.kt", 1)),
            )
            .unwrap();
        tree.add_import(
            file,
            ImportDirective {
                raw_path: "lib.Codec".to_string(),
                line: 2,
                wildcard: false,
                is_static: false,
                resolved: Some(target),
            },
        );
        let class = tree
            .intern(
                EntityProto::new("Main", EntityKind::Type, SourceLanguage::Kotlin)
                    .with_parent(pkg)
                    .with_location(loc("src/main.kt", 3)),
            )
            .unwrap();
        assert_eq!(tree.lookup(class, "Codec"), Some(target));
    }

    #[test]
    fn record_aggregates_same_triple_into_one_relation() {
        let mut tree = EntityTree::with_builtins();
        let a = tree
            .intern(EntityProto::new(
                "a",
                EntityKind::Function,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let b = tree
            .intern(EntityProto::new(
                "b",
                EntityKind::Function,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let mut store = RelationStore::new();
        store
            .record(&tree, a, b, RelationKind::Call, site("f.kt", 4))
            .unwrap();
        store
            .record(&tree, a, b, RelationKind::Call, site("f.kt", 9))
            .unwrap();
        assert_eq!(store.len(), 1);
        let rel = store.get(a, b, RelationKind::Call).unwrap();
        assert_eq!(rel.weight, 2);
        assert_eq!(rel.locations.len(), 2);
    }

    #[test]
    fn cross_language_pair_is_derived_from_endpoints() {
        let mut tree = EntityTree::with_builtins();
        let java_fn = tree
            .intern(EntityProto::new(
                "func",
                EntityKind::Function,
                SourceLanguage::Java,
            ))
            .unwrap();
        let kotlin_getter = tree
            .intern(EntityProto::new(
                "getX",
                EntityKind::Function,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let mut store = RelationStore::new();
        store
            .record(
                &tree,
                java_fn,
                kotlin_getter,
                RelationKind::Call,
                site("F.java", 3),
            )
            .unwrap();
        let rel = store
            .get(java_fn, kotlin_getter, RelationKind::Call)
            .unwrap();
        assert_eq!(
            rel.language_pair,
            (SourceLanguage::Java, SourceLanguage::Kotlin)
        );
    }

    #[test]
    fn java_sourced_delegate_is_a_taxonomy_violation() {
        let mut tree = EntityTree::with_builtins();
        let java_class = tree
            .intern(EntityProto::new(
                "Legacy",
                EntityKind::Type,
                SourceLanguage::Java,
            ))
            .unwrap();
        let target = tree
            .intern(EntityProto::new(
                "Backing",
                EntityKind::Type,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let mut store = RelationStore::new();
        let err = store
            .record(
                &tree,
                java_class,
                target,
                RelationKind::Delegate,
                site("L.java", 1),
            )
            .unwrap_err();
        assert!(matches!(err, ModelError::TaxonomyViolation { .. }));
    }

    #[test]
    fn builtin_target_adopts_source_language_for_the_pair() {
        let mut tree = EntityTree::with_builtins();
        let int = tree.builtin("Int").unwrap();
        let f = tree
            .intern(EntityProto::new(
                "twice",
                EntityKind::Function,
                SourceLanguage::Kotlin,
            ))
            .unwrap();
        let mut store = RelationStore::new();
        store
            .record(&tree, f, int, RelationKind::Extension, site("e.kt", 1))
            .unwrap();
        let rel = store.get(f, int, RelationKind::Extension).unwrap();
        assert_eq!(
            rel.language_pair,
            (SourceLanguage::Kotlin, SourceLanguage::Kotlin)
        );
    }

    proptest! {
        /// Sum of weights equals the number of raw occurrences fed in,
        /// and weight always equals the number of stored locations.
        #[test]
        fn weight_accounting_matches_occurrences(occurrences in proptest::collection::vec((0u32..4, 0u32..4, 0usize..3, 1u32..50), 0..60)) {
            let mut tree = EntityTree::with_builtins();
            let mut ids = Vec::new();
            for i in 0..4 {
                ids.push(
                    tree.intern(EntityProto::new(
                        format!("f{i}"),
                        EntityKind::Function,
                        SourceLanguage::Kotlin,
                    ))
                    .unwrap(),
                );
            }
            let kinds = [RelationKind::Call, RelationKind::Use, RelationKind::Create];
            let mut store = RelationStore::new();
            for (s, t, k, line) in &occurrences {
                store
                    .record(&tree, ids[*s as usize], ids[*t as usize], kinds[*k], site("p.kt", *line))
                    .unwrap();
            }
            prop_assert_eq!(store.total_weight(), occurrences.len() as u64);
            for rel in store.iter() {
                prop_assert_eq!(rel.weight as usize, rel.locations.len());
            }
        }

        /// Interned children keep declaration order and the qualified
        /// name concatenation invariant.
        #[test]
        fn children_preserve_declaration_order(names in proptest::collection::vec("[a-z]{1,6}", 1..8)) {
            let mut tree = EntityTree::new();
            let parent = tree
                .intern(EntityProto::new("Owner", EntityKind::Type, SourceLanguage::Kotlin))
                .unwrap();
            let mut interned = Vec::new();
            for (i, name) in names.iter().enumerate() {
                // Suffix with the index so qualified names never collide.
                let child = tree
                    .intern(
                        EntityProto::new(format!("{name}{i}"), EntityKind::Property, SourceLanguage::Kotlin)
                            .with_parent(parent),
                    )
                    .unwrap();
                interned.push(child);
            }
            prop_assert_eq!(tree.children(parent), interned.as_slice());
            for id in &interned {
                let e = tree.entity(*id);
                prop_assert_eq!(e.qualified_name.clone(), format!("Owner.{}", e.name));
            }
        }
    }
}
