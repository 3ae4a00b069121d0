use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use similar::TextDiff;

use kchlint_core::evalharness::{evaluate, load_dataset, EvalOptions};
use kchlint_core::{fix_with, parse, validate, Diagnostic, FixOptions, KnowledgeBase};

use crate::args::{FixMode, Format, KbCommand};
use crate::kb;

pub const CLEAN: u8 = 0;
pub const FOUND: u8 = 1;
pub const ERROR: u8 = 2;

fn report_error(err: &anyhow::Error) {
    eprintln!("kchlint: {err:#}");
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

/// Runs `f` over `paths` on a few threads; results come back in input order.
fn map_ordered<T: Send>(paths: &[PathBuf], f: impl Fn(&Path) -> T + Sync) -> Vec<T> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(paths.len()).max(1);
    let chunk = paths.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> =
            paths.chunks(chunk).map(|part| scope.spawn(|| part.iter().map(|p| f(p)).collect::<Vec<T>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn read_source(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

#[derive(Serialize)]
struct FileDiagnostic<'a> {
    file: String,
    #[serde(flatten)]
    diagnostic: &'a Diagnostic,
}

fn records<'a>(path: &Path, diags: &'a [Diagnostic]) -> impl Iterator<Item = FileDiagnostic<'a>> {
    let file = path.display().to_string();
    diags.iter().map(move |d| FileDiagnostic { file: file.clone(), diagnostic: d })
}

pub fn check(paths: &[PathBuf], kb: &KnowledgeBase, format: Format, timing: bool) -> ExitCode {
    let started = Instant::now();
    let results = map_ordered(paths, |path| -> Result<Vec<Diagnostic>> {
        let source = read_source(path)?;
        let module = parse(&source).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        Ok(validate(&module, kb))
    });
    let elapsed = started.elapsed();

    let mut code = CLEAN;
    let mut json = Vec::new();
    for (path, result) in paths.iter().zip(&results) {
        match result {
            Ok(diags) => {
                if !diags.is_empty() {
                    code = code.max(FOUND);
                }
                match format {
                    Format::Text => {
                        for d in diags {
                            println!("{}:{}", path.display(), d.render());
                        }
                    }
                    Format::Json => json.extend(records(path, diags)),
                }
            }
            Err(e) => {
                report_error(e);
                code = ERROR;
            }
        }
    }
    if format == Format::Json {
        print_json(&json);
    }
    if timing {
        eprintln!("checked {} file(s) in {:.3}s", paths.len(), elapsed.as_secs_f64());
    }
    ExitCode::from(code)
}

#[derive(Serialize)]
struct FixRecord<'a> {
    file: String,
    changed: bool,
    applied: &'a [Diagnostic],
    unfixed: &'a [Diagnostic],
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed_source: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diff: Option<String>,
}

fn unified_diff(path: &Path, before: &str, after: &str) -> String {
    let name = path.display().to_string();
    TextDiff::from_lines(before, after).unified_diff().header(&format!("a/{name}"), &format!("b/{name}")).to_string()
}

/// Replaces `path` by writing a sibling temporary file and renaming it over.
fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    let permissions = fs::metadata(path)?.permissions();
    fs::set_permissions(tmp.path(), permissions)?;
    tmp.persist(path).with_context(|| format!("cannot replace {}", path.display()))?;
    Ok(())
}

pub fn fix(
    paths: &[PathBuf],
    kb: &KnowledgeBase,
    mode: FixMode,
    options: FixOptions,
    format: Format,
    timing: bool,
) -> ExitCode {
    let started = Instant::now();
    let results = map_ordered(paths, |path| -> Result<(String, kchlint_core::FixResult)> {
        let source = read_source(path)?;
        let result = fix_with(&source, kb, options);
        if let Some(e) = &result.parse_failure {
            return Err(anyhow!("{}: {e}", path.display()));
        }
        Ok((source, result))
    });

    let mut code = CLEAN;
    let mut json = Vec::new();
    for (path, result) in paths.iter().zip(&results) {
        let (source, fixed) = match result {
            Ok(r) => r,
            Err(e) => {
                report_error(e);
                code = ERROR;
                continue;
            }
        };
        if !fixed.applied.is_empty() || !fixed.unfixed.is_empty() {
            code = code.max(FOUND);
        }
        let diff = (mode.diff && fixed.changed()).then(|| unified_diff(path, source, &fixed.fixed_source));
        if mode.in_place && fixed.changed() {
            if let Err(e) = write_atomically(path, &fixed.fixed_source) {
                report_error(&e);
                code = ERROR;
                continue;
            }
        }
        let print_source = !mode.diff && !mode.in_place;
        match format {
            Format::Text => {
                if let Some(d) = &diff {
                    print!("{d}");
                }
                if print_source {
                    print!("{}", fixed.fixed_source);
                }
            }
            Format::Json => json.push(FixRecord {
                file: path.display().to_string(),
                changed: fixed.changed(),
                applied: &fixed.applied,
                unfixed: &fixed.unfixed,
                fixed_source: print_source.then_some(fixed.fixed_source.as_str()),
                diff,
            }),
        }
        eprintln!("{}: applied {}, unfixed {}", path.display(), fixed.applied.len(), fixed.unfixed.len());
        for d in &fixed.unfixed {
            eprintln!("{}:{}", path.display(), d.render());
        }
    }
    if format == Format::Json {
        print_json(&json);
    }
    if timing {
        eprintln!("fixed {} file(s) in {:.3}s", paths.len(), started.elapsed().as_secs_f64());
    }
    ExitCode::from(code)
}

pub fn eval(dataset: &Path, kb: &KnowledgeBase, options: FixOptions, format: Format, timing: bool) -> ExitCode {
    let samples = match load_dataset(dataset) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("kchlint: {e}");
            return ExitCode::from(ERROR);
        }
    };
    let report = evaluate(&samples, kb, EvalOptions { fix: options, timing });
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => print_json(&report),
    }
    ExitCode::from(CLEAN)
}

#[derive(Serialize)]
struct LibraryView<'a> {
    module_path: &'a str,
    version: &'a str,
    canonical_alias: Option<&'a str>,
    callables: Vec<&'a str>,
    object_methods: BTreeMap<&'a str, Vec<&'a str>>,
}

fn sorted<'a>(names: impl IntoIterator<Item = &'a String>) -> Vec<&'a str> {
    let mut v: Vec<&str> = names.into_iter().map(String::as_str).collect();
    v.sort_unstable();
    v
}

pub fn kb_command(action: &KbCommand, extra: &[PathBuf], format: Format) -> ExitCode {
    match run_kb(action, extra, format) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e);
            ExitCode::from(ERROR)
        }
    }
}

fn run_kb(action: &KbCommand, extra: &[PathBuf], format: Format) -> Result<u8> {
    match action {
        KbCommand::Validate { manifests } => {
            let mut code = CLEAN;
            for path in manifests {
                match kb::load_file(path) {
                    Ok(loaded) => println!(
                        "{}: ok, {} libraries, {} callables",
                        path.display(),
                        loaded.libraries().count(),
                        loaded.callable_count()
                    ),
                    Err(e) => {
                        report_error(&e);
                        code = ERROR;
                    }
                }
            }
            Ok(code)
        }
        KbCommand::Merge { manifests, output } => {
            let mut merged = KnowledgeBase::empty();
            for path in manifests {
                merged = merged.merge(&kb::load_file(path)?);
            }
            fs::write(output, merged.to_json()).with_context(|| format!("cannot write {}", output.display()))?;
            eprintln!("wrote {} ({} libraries)", output.display(), merged.libraries().count());
            Ok(CLEAN)
        }
        KbCommand::Show { library } => {
            let kb = kb::resolve(extra)?;
            let lib = kb.library(library).ok_or_else(|| anyhow!("library `{library}` is not in the knowledge base"))?;
            let view = LibraryView {
                module_path: &lib.module_path,
                version: &lib.version,
                canonical_alias: lib.canonical_alias.as_deref(),
                callables: sorted(&lib.callables),
                object_methods: lib.object_methods.iter().map(|(t, m)| (t.as_str(), sorted(m))).collect(),
            };
            match format {
                Format::Json => print_json(&view),
                Format::Text => {
                    println!("{} {}", view.module_path, view.version);
                    if let Some(alias) = view.canonical_alias {
                        println!("alias {alias}");
                    }
                    println!("callables ({})", view.callables.len());
                    for c in &view.callables {
                        println!("  {c}");
                    }
                    for (ty, methods) in &view.object_methods {
                        println!("{ty} methods ({})", methods.len());
                        for m in methods {
                            println!("  {m}");
                        }
                    }
                }
            }
            Ok(CLEAN)
        }
    }
}
