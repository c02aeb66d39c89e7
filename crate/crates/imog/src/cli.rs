//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 the model or the request has errors (including
//! unparseable documents and conflicting decisions), 2 usage errors, 3 file
//! system failures.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use imog_core::diagnostic::tally;
use imog_core::fp::{self, Decision, EnumerationCap, DEFAULT_MAX_BLOCKS};
use imog_core::sp::{resolve_effective_block, EffectiveBlock, Origin, SelectionState};
use imog_core::trace::{build_trace_report, query_requirements, Predicate, TraceReport};
use imog_core::*;
use serde::Serialize;

use crate::dot::{export_dot, DotPerspective};
use crate::io::parse_document;
use crate::service::{self, ServiceConfig};

/// Environment variable overriding the enumeration block cap.
pub const CAP_VAR: &str = "IMOG_CAP";

#[derive(Debug, Parser)]
#[command(name = "imog", version, about = "Check, analyse and serve Innovation Modeling Grid models")]
pub struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report every diagnostic of a model.
    Validate { file: PathBuf },
    /// Functional perspective analyses.
    #[command(subcommand)]
    Fp(FpCommand),
    /// Structural perspective resolution.
    #[command(subcommand)]
    Sp(SpCommand),
    /// Cross-perspective trace checks.
    #[command(subcommand)]
    Trace(TraceCommand),
    /// Quality perspective queries.
    #[command(subcommand)]
    Qp(QpCommand),
    /// Diagram export.
    #[command(subcommand)]
    Export(ExportCommand),
    /// Serve one model over HTTP for the configurator UI.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct FpArgs {
    pub file: PathBuf,
    /// Keep only these abstraction levels (repeatable or comma separated).
    #[arg(long = "level", value_delimiter = ',')]
    pub levels: Vec<String>,
    /// Apply enabled groups before the analysis.
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub groups: Toggle,
}

#[derive(Debug, Subcommand)]
pub enum FpCommand {
    /// Number of valid configurations.
    Count {
        #[command(flatten)]
        fp: FpArgs,
        /// Stop after this many configurations.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// List valid configurations in canonical order.
    Enumerate {
        #[command(flatten)]
        fp: FpArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Blocks that occur in no valid configuration.
    Dead {
        #[command(flatten)]
        fp: FpArgs,
    },
    /// Whether the model has no valid configuration.
    Void {
        #[command(flatten)]
        fp: FpArgs,
    },
    /// Consequences of selecting or deselecting blocks.
    Propagate {
        #[command(flatten)]
        fp: FpArgs,
        /// Block id to select. A block name is accepted when unique.
        #[arg(long = "in")]
        include: Vec<String>,
        /// Block id to deselect.
        #[arg(long = "out")]
        exclude: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpCommand {
    /// Effective block after variant and refinement selections.
    Resolve {
        file: PathBuf,
        block: String,
        /// Variant selection as BLOCK=VARIANT.
        #[arg(long = "variant", value_parser = pair)]
        variants: Vec<(String, String)>,
        /// Refinement selection as GROUP=REFINEMENT.
        #[arg(long = "refine", value_parser = pair)]
        refinements: Vec<(String, String)>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TraceCommand {
    /// Unallocated functions and features, dangling links, orphan requirements.
    Report { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum QpCommand {
    /// Requirements matching every predicate, e.g. `--where "satisfiability >= 1"`.
    Query {
        file: PathBuf,
        #[arg(long = "where")]
        predicates: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportCommand {
    /// Graphviz DOT text of one perspective.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DotPerspective::Functional)]
        perspective: DotPerspective,
        #[arg(long = "level", value_delimiter = ',')]
        levels: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8377")]
    pub bind: SocketAddr,
    /// Directory of static UI assets served at `/`.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
    #[arg(long = "level", value_delimiter = ',')]
    pub levels: Vec<String>,
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub groups: Toggle,
}

fn pair(text: &str) -> Result<(String, String), String> {
    match text.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.into(), v.into())),
        _ => Err(format!("expected KEY=VALUE, got `{text}`")),
    }
}

#[derive(Debug)]
enum Failure {
    Errors(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Errors(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Errors(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut buf = Vec::new();
    let result = execute(&cli, &mut buf);
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "imog: {}", f.message());
            f.code()
        }
    }
}

fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Validate { file } => {
            let model = load(file)?;
            let diagnostics = validate_model(&model);
            let (errors, warnings) = tally(&diagnostics);
            if json {
                emit_json(out, &diagnostics);
            } else {
                for d in &diagnostics {
                    line(out, d);
                }
                line(out, format!("{errors} errors, {warnings} warnings"));
            }
            Ok(if errors > 0 { 1 } else { 0 })
        }
        Command::Fp(cmd) => fp_command(cmd, json, out),
        Command::Sp(SpCommand::Resolve { file, block, variants, refinements }) => {
            let model = checked(file)?;
            let mut sel = SelectionState::default();
            for (b, v) in variants {
                sel = sel.with_variant(b, v);
            }
            for (g, r) in refinements {
                sel = sel.with_refinement(g, r);
            }
            let eff = resolve_effective_block(&model, block, &sel).map_err(|e| Failure::Errors(e.to_string()))?;
            if json {
                emit_json(out, &eff);
            } else {
                render_effective(out, &eff);
            }
            Ok(0)
        }
        Command::Trace(TraceCommand::Report { file }) => {
            let model = checked(file)?;
            let report = build_trace_report(&model);
            if json {
                emit_json(out, &report);
            } else {
                render_trace(out, &model, &report);
            }
            Ok(0)
        }
        Command::Qp(QpCommand::Query { file, predicates }) => {
            let model = checked(file)?;
            let preds = predicates
                .iter()
                .map(|p| p.parse::<Predicate>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let hits = query_requirements(&model, &preds).map_err(|e| Failure::Usage(e.to_string()))?;
            if json {
                emit_json(out, &hits);
            } else {
                for r in &hits {
                    line(out, format!("{}\t{}\t{}", r.id, r.satisfiability, r.name));
                }
                line(out, format!("{} requirement(s)", hits.len()));
            }
            Ok(0)
        }
        Command::Export(ExportCommand::Dot { file, perspective, levels }) => {
            let model = filtered(checked(file)?, levels)?;
            let dot = export_dot(&model, *perspective).map_err(|e| Failure::Errors(e.to_string()))?;
            if json {
                emit_json(out, &dot);
            } else {
                out.extend_from_slice(dot.as_bytes());
            }
            Ok(0)
        }
        Command::Serve(args) => {
            let model = checked(&args.file)?;
            let config = ServiceConfig {
                path: Some(args.file.clone()),
                levels: parse_levels(&args.levels),
                groups: args.groups == Toggle::On,
                cap: cap(None)?,
                ui_dir: args.ui_dir.clone(),
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
            runtime
                .block_on(service::serve(model, config, args.bind))
                .map_err(|e| Failure::Io(format!("{}: {e}", args.bind)))?;
            Ok(0)
        }
    }
}

fn fp_command(cmd: &FpCommand, json: bool, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let (args, limit) = match cmd {
        FpCommand::Count { fp, limit } | FpCommand::Enumerate { fp, limit } => (fp, *limit),
        FpCommand::Dead { fp } | FpCommand::Void { fp } | FpCommand::Propagate { fp, .. } => (fp, None),
    };
    let model = filtered(checked(&args.file)?, &args.levels)?;
    let tree = fp::normalize(&model, args.groups == Toggle::On);
    let cap = cap(limit)?;
    let engine = |e: fp::FpError| Failure::Errors(e.to_string());
    match cmd {
        FpCommand::Count { .. } => {
            let count = fp::count_configurations(&tree, &cap).map_err(engine)?;
            if json {
                emit_json(out, &count);
            } else if count.truncated {
                line(out, format!("{} (truncated)", count.count));
            } else {
                line(out, count.count);
            }
        }
        FpCommand::Enumerate { .. } => {
            let all = fp::enumerate_configurations(&tree, &cap).map_err(engine)?;
            if json {
                emit_json(out, &all);
            } else {
                for c in &all.configurations {
                    let ids: Vec<&str> = c.selected.iter().map(ElementId::as_str).collect();
                    line(out, ids.join(" "));
                }
                let more = if all.truncated { " (truncated)" } else { "" };
                line(out, format!("{} configuration(s){more}", all.configurations.len()));
            }
        }
        FpCommand::Dead { .. } => {
            let dead = fp::dead_blocks(&tree, &cap).map_err(engine)?;
            if json {
                emit_json(out, &dead);
            } else {
                for id in &dead {
                    line(out, named(&model, id));
                }
                line(out, format!("{} dead block(s)", dead.len()));
            }
        }
        FpCommand::Void { .. } => {
            let void = fp::is_void(&tree);
            if json {
                emit_json(out, &void);
            } else {
                line(out, if void { "void" } else { "not void" });
            }
        }
        FpCommand::Propagate { include, exclude, .. } => {
            let mut decisions = BTreeMap::new();
            for (keys, d) in [(include, Decision::In), (exclude, Decision::Out)] {
                for key in keys {
                    if decisions.insert(block_id(&model, key)?, d).is_some() {
                        return Err(Failure::Usage(format!("`{key}` is decided twice")));
                    }
                }
            }
            let result = fp::propagate(&tree, &decisions, &cap).map_err(engine)?;
            if json {
                emit_json(out, &result);
            } else if let Some(c) = &result.conflict {
                line(out, format!("conflict: {}", c.message));
                for (id, d) in &c.decisions {
                    line(out, format!("  decision {} = {d}", named(&model, id)));
                }
                for s in &c.constraints {
                    line(out, format!("  constraint {s}"));
                }
            } else {
                line(out, "forced-in:");
                for id in &result.forced_in {
                    line(out, format!("  {}", named(&model, id)));
                }
                line(out, "forced-out:");
                for id in &result.forced_out {
                    line(out, format!("  {}", named(&model, id)));
                }
                line(out, format!("remaining: {}", result.remaining));
            }
            if result.conflict.is_some() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// An id, or the id of the only block carrying that name.
fn block_id(model: &Model, key: &str) -> Result<ElementId, Failure> {
    if model.fp_block(key).is_some() {
        return Ok(key.into());
    }
    let named: Vec<&FpBlock> = model.functional.blocks.iter().filter(|b| b.name == key).collect();
    match named.as_slice() {
        [b] => Ok(b.id.clone()),
        [] => Err(Failure::Usage(format!("no functional block with id or name `{key}`"))),
        _ => Err(Failure::Usage(format!("name `{key}` is ambiguous; use a block id"))),
    }
}

fn named(model: &Model, id: &ElementId) -> String {
    match model.fp_block(id.as_str()) {
        Some(b) => format!("{id} ({})", b.name),
        None => id.to_string(),
    }
}

fn cap(limit: Option<usize>) -> Result<EnumerationCap, Failure> {
    let max_blocks = match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{CAP_VAR} must be a non-negative integer, got `{v}`")))?,
        Err(_) => DEFAULT_MAX_BLOCKS,
    };
    Ok(EnumerationCap { max_blocks, max_configurations: limit })
}

fn load(path: &Path) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::Errors(format!("{}: {e}", path.display())))
}

/// Loads a model and refuses it when it has Error diagnostics.
fn checked(path: &Path) -> Result<Model, Failure> {
    let model = load(path)?;
    let errors: Vec<String> = validate_model(&model)
        .into_iter()
        .filter(Diagnostic::is_error)
        .map(|d| d.to_string())
        .collect();
    if errors.is_empty() {
        Ok(model)
    } else {
        Err(Failure::Errors(format!(
            "{}: {} error(s), run `imog validate`\n  {}",
            path.display(),
            errors.len(),
            errors.join("\n  ")
        )))
    }
}

pub(crate) fn parse_levels(levels: &[String]) -> BTreeSet<AbstractionLevel> {
    levels
        .iter()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(AbstractionLevel::parse)
        .collect()
}

fn filtered(model: Model, levels: &[String]) -> Result<Model, Failure> {
    let levels = parse_levels(levels);
    if levels.is_empty() {
        return Ok(model);
    }
    let view = filter_by_abstraction_level(&model, &levels).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(view.to_model())
}

fn line(out: &mut Vec<u8>, text: impl std::fmt::Display) {
    let _ = writeln!(out, "{text}");
}

fn emit_json<T: Serialize + ?Sized>(out: &mut Vec<u8>, value: &T) {
    serde_json::to_writer_pretty(&mut *out, value).expect("report types serialize");
    out.push(b'\n');
}

fn render_effective(out: &mut Vec<u8>, eff: &EffectiveBlock) {
    line(out, format!("{} {}", eff.id, eff.name));
    if !eff.applied_variants.is_empty() {
        let ids: Vec<&str> = eff.applied_variants.iter().map(ElementId::as_str).collect();
        line(out, format!("variants: {}", ids.join(" > ")));
    }
    line(out, "properties:");
    for p in &eff.properties {
        let unit = p.unit.as_deref().map(|u| format!(" {u}")).unwrap_or_default();
        let origin = match p.origin {
            Origin::Base => "base",
            Origin::Variant => "variant",
            Origin::Refinement => "refinement",
        };
        line(out, format!("  {} = {}{unit}\t[{origin} {}]", p.name, p.value, p.source));
    }
    for (i, s) in eff.sse.iter().enumerate() {
        line(
            out,
            format!("sse {}: in [{}] out [{}]", i + 1, s.input_properties.join(", "), s.output_properties.join(", ")),
        );
    }
    let parts: Vec<String> = eff
        .decomposition
        .elements
        .iter()
        .map(|e| match e {
            StructuralElement::Block(b) => b.name.clone(),
            StructuralElement::Relation(r) => format!("~{}", r.id),
            StructuralElement::Package(p) => format!("[{}]", p.name),
            StructuralElement::Note(_) => "note".into(),
        })
        .collect();
    if !parts.is_empty() {
        line(out, format!("decomposition: {}", parts.join(", ")));
    }
    for g in &eff.refinement_groups {
        let selected = g.selected_refinement.as_ref().map(ElementId::as_str).unwrap_or("-");
        line(out, format!("refinement group {} ({}): {selected}", g.name, g.id));
    }
    for r in &eff.internal_model_refs {
        line(out, format!("internal model: {r}"));
    }
    for rule in &eff.provenance {
        line(out, format!("  applied {:?} from {}: {}", rule.rule, rule.source, rule.detail));
    }
}

fn render_trace(out: &mut Vec<u8>, model: &Model, report: &TraceReport) {
    line(out, format!("unallocated functions: {}", report.unallocated_functions.len()));
    for id in &report.unallocated_functions {
        line(out, format!("  {}", named(model, id)));
    }
    line(out, format!("unallocated features: {}", report.unallocated_features.len()));
    for id in &report.unallocated_features {
        line(out, format!("  {}", named(model, id)));
    }
    line(out, format!("dangling links: {}", report.dangling_links.len()));
    for t in &report.dangling_links {
        line(out, format!("  {} {:?} {} -> {}", t.id, t.kind, t.source, t.target));
    }
    line(out, format!("orphan requirements: {}", report.orphan_requirements.len()));
    for id in &report.orphan_requirements {
        line(out, format!("  {id}"));
    }
    line(out, format!("knowledge reuse: {}", report.knowledge_reuse.len()));
    for k in &report.knowledge_reuse {
        line(out, format!("  {} uses {}", k.block, k.knowledge));
    }
}
