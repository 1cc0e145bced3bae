//! Command-line argument contract.

use std::path::PathBuf;

use clap::Parser;

use crate::emit::{EmitError, EmitOptions, Granularity, NamePattern, OutputFormat};

#[derive(Debug, Parser)]
#[command(
    name = "kjdeps",
    about = "Cross-language static dependency extractor for Kotlin and Java sources",
    disable_help_flag = true
)]
pub struct CliRequest {
    /// The language of project files
    pub lang: String,
    /// The directory to be analyzed
    pub src: PathBuf,
    /// The output file name
    pub output: String,
    /// Auto include all paths under the source path
    #[arg(long = "auto-include")]
    pub auto_include: bool,
    /// Show this message and exit
    #[arg(short = 'h', long = "help", action = clap::ArgAction::Help)]
    help: Option<bool>,
    /// The files of searching path
    #[arg(short = 'i', long = "include", value_name = "PATH")]
    pub includes: Vec<PathBuf>,
    /// The output directory
    #[arg(short = 'd', long = "dir", default_value = ".")]
    pub output_dir: PathBuf,
    /// The output format
    #[arg(short = 'f', long = "format", default_value = "json")]
    pub format: String,
    /// Granularity of dependency
    #[arg(short = 'g', long = "granularity", default_value = "file")]
    pub granularity: String,
    /// Strip the leading path
    #[arg(short = 's', long = "strip-leading-path")]
    pub strip_leading_path: bool,
    /// Show language info in dependency type
    #[arg(long = "show-language")]
    pub show_language: bool,
    /// Output dependency map file
    #[arg(short = 'm', long = "n-map-files")]
    pub emit_name_map: bool,
    /// The name path separators
    #[arg(short = 'p', long = "namepattern", default_value = "dot")]
    pub name_pattern: String,
}

/// Parses an argv slice (excluding the program name) into a request.
pub fn parse_args<I, S>(argv: I) -> Result<CliRequest, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut full = vec!["kjdeps".to_string()];
    full.extend(argv.into_iter().map(Into::into));
    CliRequest::try_parse_from(full)
}

impl CliRequest {
    pub fn emit_options(&self) -> Result<EmitOptions, EmitError> {
        let format = match self.format.as_str() {
            "json" => OutputFormat::Json,
            "dot" => OutputFormat::Dot,
            other => {
                return Err(EmitError::InvalidOptions(format!(
                    "unknown format `{other}` (expected `json` or `dot`)"
                )))
            }
        };
        let granularity = match self.granularity.as_str() {
            "file" => Granularity::File,
            "structure" => Granularity::Structure,
            other => {
                return Err(EmitError::InvalidOptions(format!(
                    "unknown granularity `{other}` (expected `file` or `structure`)"
                )))
            }
        };
        let name_pattern = match self.name_pattern.as_str() {
            "dot" => NamePattern::Dot,
            "unix" => NamePattern::Unix,
            other => {
                return Err(EmitError::InvalidOptions(format!(
                    "unknown name pattern `{other}` (expected `dot` or `unix`)"
                )))
            }
        };
        let options = EmitOptions {
            format,
            granularity,
            show_language: self.show_language,
            strip_leading_path: self.strip_leading_path,
            emit_name_map: self.emit_name_map,
            output_dir: self.output_dir.clone(),
            output_name: self.output.clone(),
            name_pattern,
        };
        options.validate()?;
        Ok(options)
    }
}
