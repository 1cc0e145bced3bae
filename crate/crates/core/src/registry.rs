//! The plug-in seam: language processors self-describe and register
//! into a central registry consulted by the pipeline. Registration is
//! explicit at startup; the registry is frozen afterwards and safe for
//! concurrent reads.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ir::{FileBuild, IrIds};
use crate::java::ast::JFile;
use crate::kotlin::ast::KtFile;
use crate::lexer::ParseError;
use crate::model::{Diagnostic, EntityTree, ModelError};

/// Frontend output of the parse stage, before entity extraction.
#[derive(Debug)]
pub enum ParsedFile {
    Kotlin(KtFile),
    Java(JFile),
}

pub type ParseFn = fn(&str, &str) -> Result<(ParsedFile, Vec<Diagnostic>), ParseError>;
pub type BuildFn =
    fn(&ParsedFile, &str, &mut EntityTree, &mut IrIds) -> Result<FileBuild, ModelError>;

/// Self-description of one language frontend.
#[derive(Clone)]
pub struct ProcessorDescriptor {
    pub language_name: &'static str,
    pub extensions: &'static [&'static str],
    pub parse_entry: ParseFn,
    pub build_entry: BuildFn,
}

impl std::fmt::Debug for ProcessorDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProcessorDescriptor")
            .field("language_name", &self.language_name)
            .field("extensions", &self.extensions)
            .finish()
    }
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("extension `{extension}` already claimed by `{existing}` (rejected `{rejected}`)")]
    RegistryConflict {
        extension: String,
        existing: String,
        rejected: String,
    },
    #[error("unknown language `{requested}`; available: {}", available.join(", "))]
    UnknownLanguage {
        requested: String,
        available: Vec<String>,
    },
}

#[derive(Debug, Default)]
pub struct LanguageRegistry {
    by_name: BTreeMap<String, ProcessorDescriptor>,
    by_extension: BTreeMap<String, String>,
}

impl LanguageRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with the Kotlin and Java processors registered.
    pub fn with_default_processors() -> Self {
        let mut registry = Self::new();
        registry
            .register(crate::kotlin::descriptor())
            .expect("kotlin registers first");
        registry
            .register(crate::java::descriptor())
            .expect("java extensions are free");
        registry
    }

    pub fn register(&mut self, descriptor: ProcessorDescriptor) -> Result<(), RegistryError> {
        for ext in descriptor.extensions {
            if let Some(existing) = self.by_extension.get(*ext) {
                return Err(RegistryError::RegistryConflict {
                    extension: (*ext).to_string(),
                    existing: existing.clone(),
                    rejected: descriptor.language_name.to_string(),
                });
            }
        }
        for ext in descriptor.extensions {
            self.by_extension
                .insert((*ext).to_string(), descriptor.language_name.to_string());
        }
        self.by_name
            .insert(descriptor.language_name.to_string(), descriptor);
        Ok(())
    }

    pub fn by_language(&self, name: &str) -> Option<&ProcessorDescriptor> {
        self.by_name.get(name)
    }

    pub fn for_extension(&self, extension: &str) -> Option<&ProcessorDescriptor> {
        self.by_extension
            .get(extension)
            .and_then(|lang| self.by_name.get(lang))
    }

    pub fn languages(&self) -> Vec<String> {
        self.by_name.keys().cloned().collect()
    }

    /// Processors active for a requested language. A Kotlin request
    /// implies the Java processor too, so mixed Kotlin-Java projects are
    /// analyzed jointly.
    pub fn processors_for_request(
        &self,
        requested: &str,
    ) -> Result<Vec<&ProcessorDescriptor>, RegistryError> {
        match requested {
            "kotlin" if self.by_name.contains_key("kotlin") => {
                let mut out = vec![self.by_name.get("kotlin").unwrap()];
                if let Some(java) = self.by_name.get("java") {
                    out.push(java);
                }
                Ok(out)
            }
            other => match self.by_name.get(other) {
                Some(descriptor) => Ok(vec![descriptor]),
                None => Err(RegistryError::UnknownLanguage {
                    requested: other.to_string(),
                    available: self.languages(),
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kotlin_and_java_register_and_are_retrievable() {
        let registry = LanguageRegistry::with_default_processors();
        assert!(registry.by_language("kotlin").is_some());
        assert!(registry.by_language("java").is_some());
        assert_eq!(
            registry.for_extension(".kt").unwrap().language_name,
            "kotlin"
        );
        assert_eq!(
            registry.for_extension(".java").unwrap().language_name,
            "java"
        );
    }

    #[test]
    fn second_claim_on_an_extension_conflicts() {
        let mut registry = LanguageRegistry::with_default_processors();
        let mut dup = crate::java::descriptor();
        dup.language_name = "java2";
        dup.extensions = &[".kt"];
        let err = registry.register(dup).unwrap_err();
        assert!(matches!(err, RegistryError::RegistryConflict { .. }));
    }

    #[test]
    fn empty_registry_misses() {
        let registry = LanguageRegistry::new();
        assert!(registry.by_language("kotlin").is_none());
    }

    #[test]
    fn kotlin_request_implies_java() {
        let registry = LanguageRegistry::with_default_processors();
        let procs = registry.processors_for_request("kotlin").unwrap();
        let names: Vec<_> = procs.iter().map(|p| p.language_name).collect();
        assert_eq!(names, vec!["kotlin", "java"]);
    }

    #[test]
    fn java_request_is_java_only() {
        let registry = LanguageRegistry::with_default_processors();
        let procs = registry.processors_for_request("java").unwrap();
        let names: Vec<_> = procs.iter().map(|p| p.language_name).collect();
        assert_eq!(names, vec!["java"]);
    }

    #[test]
    fn registration_order_does_not_affect_lookups() {
        let mut forward = LanguageRegistry::new();
        forward.register(crate::kotlin::descriptor()).unwrap();
        forward.register(crate::java::descriptor()).unwrap();
        let mut reverse = LanguageRegistry::new();
        reverse.register(crate::java::descriptor()).unwrap();
        reverse.register(crate::kotlin::descriptor()).unwrap();
        for registry in [&forward, &reverse] {
            assert_eq!(
                registry.for_extension(".kt").unwrap().language_name,
                "kotlin"
            );
            assert_eq!(
                registry.for_extension(".java").unwrap().language_name,
                "java"
            );
            let names: Vec<_> = registry
                .processors_for_request("kotlin")
                .unwrap()
                .iter()
                .map(|p| p.language_name)
                .collect();
            assert_eq!(names, vec!["kotlin", "java"]);
        }
    }

    #[test]
    fn unknown_language_lists_available_names() {
        let registry = LanguageRegistry::with_default_processors();
        let err = registry.processors_for_request("ruby").unwrap_err();
        match err {
            RegistryError::UnknownLanguage {
                requested,
                available,
            } => {
                assert_eq!(requested, "ruby");
                assert_eq!(available, vec!["java".to_string(), "kotlin".to_string()]);
            }
            other => panic!("expected UnknownLanguage, got {other:?}"),
        }
    }
}
