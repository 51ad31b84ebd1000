//! The `xnose` command line: `scan`, `eval` and `stats`.
//!
//! Exit codes: 0 success, 2 fatal error (I/O, configuration, schema),
//! 3 when `scan --fail-on-smell` finds anything.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::detectors::DetectorConfig;
use crate::model::ModelConfig;
use crate::report::{
    evaluate, parse_ground_truth, render_evaluation, render_findings, render_stats, statistics, to_canonical_json,
    ProjectReport,
};
use crate::scan::{scan, ScanOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FATAL: i32 = 2;
pub const EXIT_SMELLS: i32 = 3;

/// Name of the environment variable consulted when `--config` is absent.
pub const CONFIG_ENV: &str = "XNOSE_CONFIG";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "xnose", version, about = "Detect test smells in C# xUnit test suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan a directory (or a single file) and report smells.
    Scan {
        path: PathBuf,
        /// TOML or JSON configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 3 when any smell is found.
        #[arg(long)]
        fail_on_smell: bool,
        /// Worker threads.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: Option<u16>,
    },
    /// Score a scan report against hand-labeled ground truth.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Prevalence and co-occurrence over a directory of scan reports.
    Stats {
        #[arg(long)]
        reports: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// The `[output]` section of a configuration file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub fail_on_smell: Option<bool>,
    pub jobs: Option<usize>,
}

/// A configuration file: `[model]`, `[detectors]` and `[output]` sections,
/// all optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub model: ModelConfig,
    pub detectors: DetectorConfig,
    pub output: OutputConfig,
}

/// Effective settings for a scan after merging defaults, file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub model: ModelConfig,
    pub detectors: DetectorConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub fail_on_smell: bool,
    pub jobs: Option<usize>,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self::merge(FileConfig::default(), ScanFlags::default())
    }
}

/// Scan options given on the command line; `None`/`false` defers to the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanFlags {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub fail_on_smell: bool,
    pub jobs: Option<usize>,
}

impl CliConfig {
    pub fn merge(file: FileConfig, flags: ScanFlags) -> Self {
        Self {
            model: file.model,
            detectors: file.detectors,
            format: flags.format.or(file.output.format).unwrap_or_default(),
            out: flags.out.or(file.output.out),
            fail_on_smell: flags.fail_on_smell || file.output.fail_on_smell.unwrap_or(false),
            jobs: flags.jobs.or(file.output.jobs),
        }
    }
}

/// Reads a configuration file: JSON when the extension is `.json`, TOML otherwise.
pub fn load_config_file(path: &Path) -> Result<FileConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    let cfg: FileConfig = parsed.map_err(|e| format!("invalid config {}: {e}", path.display()))?;
    cfg.detectors
        .validate()
        .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
    Ok(cfg)
}

/// Merges defaults, the config file (`--config`, else `env_config`) and flags.
pub fn load_config(config: Option<&Path>, env_config: Option<&Path>, flags: ScanFlags) -> Result<CliConfig, String> {
    let file = match config.or(env_config) {
        Some(path) => load_config_file(path)?,
        None => FileConfig::default(),
    };
    Ok(CliConfig::merge(file, flags))
}

/// Runs the CLI, reading `XNOSE_CONFIG` from the process environment.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    run_with_env(args, env_config.as_deref(), stdout, stderr)
}

/// Like [`run`] with the config-file fallback passed explicitly.
pub fn run_with_env<I, T>(args: I, env_config: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_FATAL
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Scan {
            path,
            config,
            format,
            out,
            fail_on_smell,
            jobs,
        } => {
            let flags = ScanFlags {
                format,
                out,
                fail_on_smell,
                jobs: jobs.map(usize::from),
            };
            cmd_scan(&path, config.as_deref(), env_config, flags, stdout, stderr)
        }
        Command::Eval { pred, truth, format } => cmd_eval(&pred, &truth, format, stdout, stderr),
        Command::Stats { reports, format } => cmd_stats(&reports, format, stdout),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(stderr, "xnose: {message}");
            EXIT_FATAL
        }
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), String> {
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| format!("cannot write output: {e}"))
}

fn cmd_scan(
    path: &Path,
    config: Option<&Path>,
    env_config: Option<&Path>,
    flags: ScanFlags,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, String> {
    let cfg = load_config(config, env_config, flags)?;
    let options = ScanOptions {
        model: cfg.model,
        detectors: cfg.detectors,
        jobs: cfg.jobs,
    };
    let report = scan(path, &options).map_err(|e| e.to_string())?;
    for d in &report.diagnostics {
        let _ = writeln!(stderr, "{d}");
    }
    let artifact = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => render_findings(&report),
    };
    match &cfg.out {
        Some(out) => fs::write(out, artifact).map_err(|e| format!("cannot write {}: {e}", out.display()))?,
        None => emit(stdout, &artifact)?,
    }
    Ok(if cfg.fail_on_smell && !report.findings.is_empty() {
        EXIT_SMELLS
    } else {
        EXIT_OK
    })
}

fn read(path: &Path, what: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {what} {}: {e}", path.display()))
}

fn cmd_eval(pred: &Path, truth: &Path, format: Format, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, String> {
    let report = ProjectReport::from_json(&read(pred, "predictions")?)
        .map_err(|e| format!("{}: not a scan report: {e}", pred.display()))?;
    let truth_entries = parse_ground_truth(&read(truth, "ground truth")?).map_err(|e| format!("{}: {e}", truth.display()))?;
    let metrics = evaluate(&report.findings, &truth_entries);
    for d in &metrics.diagnostics {
        let _ = writeln!(stderr, "xnose: {d}");
    }
    let artifact = match format {
        Format::Json => to_canonical_json(&metrics),
        Format::Text => render_evaluation(&metrics),
    };
    emit(stdout, &artifact)?;
    Ok(EXIT_OK)
}

fn cmd_stats(dir: &Path, format: Format, stdout: &mut dyn Write) -> Result<i32, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("cannot read {}: {e}", dir.display()))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(format!("no report files (*.json) in {}", dir.display()));
    }
    let reports = paths
        .iter()
        .map(|p| ProjectReport::from_json(&read(p, "report")?).map_err(|e| format!("{}: not a scan report: {e}", p.display())))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = statistics(&reports);
    let artifact = match format {
        Format::Json => to_canonical_json(&stats),
        Format::Text => render_stats(&stats),
    };
    emit(stdout, &artifact)?;
    Ok(EXIT_OK)
}
