//! Command-line front end.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    self, check_theorems, classify, explore, ExplorationBounds, Value, Verdict,
};
use crate::corpus;
use crate::model::{from_json, to_json, validate, Collaboration};
use crate::parser::{parse, pretty, ParseError};
use crate::semantics::Net;
use crate::structure::is_well_structured_process;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "bpmnc", version, about = "Check BPMN collaborations for well-structuredness, safeness and soundness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Largest exact token count per sequence edge.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub edge_cap: u32,
    /// Largest exact token count per message.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub msg_cap: u32,
    /// Maximum number of explored states.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub state_cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print the structural reduction log.
    #[arg(long, global = true)]
    pub explain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Ws,
    Safeness,
    Soundness,
    MrSoundness,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every checker and report the classification.
    Classify { input: PathBuf },
    /// Check one property.
    Check {
        #[arg(long, value_enum)]
        property: Property,
        /// Check a single pool in isolation.
        #[arg(long)]
        pool: Option<String>,
        input: PathBuf,
    },
    /// Print the witness trace of a violated property.
    Trace {
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        pool: Option<String>,
        input: PathBuf,
    },
    /// Explore the state space and print statistics or a graph.
    Explore {
        #[arg(long)]
        pool: Option<String>,
        input: PathBuf,
    },
    /// Pretty-print a model.
    Fmt { input: PathBuf },
    /// Check the bundled examples against their pinned verdicts.
    Corpus,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit status.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let color = std::env::var("BPMNC_COLOR").map(|v| v == "1").unwrap_or(false);
    let mut io = Io { stdin, out, err, color };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            code
        }
    }
}

struct Failure(i32, String);

type CliResult = Result<i32, Failure>;

impl GlobalArgs {
    fn bounds(&self) -> ExplorationBounds {
        ExplorationBounds {
            edge_cap: self.edge_cap,
            msg_cap: self.msg_cap,
            state_cap: usize::try_from(self.state_cap).unwrap_or(usize::MAX),
        }
    }
}

fn read_input(path: &PathBuf, io: &mut Io<'_>) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io.stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure(EXIT_IO, format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load(path: &PathBuf, io: &mut Io<'_>) -> Result<Collaboration, Failure> {
    let text = read_input(path, io)?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if is_json {
        let model = from_json(&text).map_err(|e| Failure(EXIT_DATA, e.to_string()))?;
        let errors: Vec<String> =
            validate(&model).into_iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
        if !errors.is_empty() {
            return Err(Failure(EXIT_DATA, errors.join("\n")));
        }
        return Ok(model);
    }
    parse(&text).map_err(|e| match e {
        ParseError::Syntax(s) => Failure(EXIT_DATA, format!("syntax error at {s}")),
        ParseError::Validation(ds) => Failure(
            EXIT_DATA,
            format!("invalid model:\n{}", ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")),
        ),
    })
}

fn exit_for(v: Value) -> i32 {
    match v {
        Value::Holds => EXIT_OK,
        Value::Violated => EXIT_VIOLATED,
        Value::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn paint(word: &str, color: bool) -> String {
    if !color {
        return word.to_string();
    }
    let code = match word {
        "holds" => "32",
        "violated" => "31",
        _ => "33",
    };
    format!("\x1b[{code}m{word}\x1b[0m")
}

fn write_out(io: &mut Io<'_>, text: &str) -> CliResult {
    io.out
        .write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_IO, format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

fn explain_text(model: &Collaboration, pool: Option<&str>) -> String {
    let mut s = String::new();
    for p in model.pools.iter().filter(|p| pool.is_none_or(|n| n == p.name)) {
        s.push_str(&format!("pool {}:\n", p.name));
        for line in is_well_structured_process(&p.process).explain().lines() {
            s.push_str(&format!("  {line}\n"));
        }
    }
    s
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Ws => "ws",
        Property::Safeness => "safeness",
        Property::Soundness => "soundness",
        Property::MrSoundness => "mr-soundness",
    }
}

fn verdict_for(model: &Collaboration, property: Property, pool: Option<&str>, bounds: &ExplorationBounds) -> Result<Verdict, Failure> {
    if let Some(name) = pool {
        let p = model.pool(name).ok_or_else(|| Failure(EXIT_USAGE, format!("no pool named `{name}`")))?;
        return match property {
            Property::Ws => Ok(Verdict::from_bool(is_well_structured_process(&p.process).well_structured)),
            Property::Safeness => Ok(analysis::is_safe_process(&p.name, &p.process, bounds)),
            Property::Soundness => Ok(analysis::is_sound_process(&p.name, &p.process, bounds)),
            Property::MrSoundness => {
                Err(Failure(EXIT_USAGE, "message-relaxed soundness applies to whole collaborations".into()))
            }
        };
    }
    Ok(match property {
        Property::Ws => Verdict::from_bool(crate::structure::is_well_structured_collaboration(model)),
        Property::Safeness => analysis::is_safe_collaboration(model, bounds),
        Property::Soundness => analysis::is_sound_collaboration(model, bounds),
        Property::MrSoundness => analysis::is_mr_sound_collaboration(model, bounds),
    })
}

fn verdict_json(property: Property, pool: Option<&str>, v: &Verdict) -> serde_json::Value {
    json!({
        "property": property_name(property),
        "scope": pool.unwrap_or("collaboration"),
        "value": v.value,
        "saturated": v.saturated,
        "witness": v.witness.as_ref().map(|w| w.lines()),
        "note": v.note,
    })
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> CliResult {
    let g = &cli.global;
    let bounds = g.bounds();
    match &cli.command {
        Command::Classify { input } => {
            let model = load(input, io)?;
            let report = classify(&model, &bounds).map_err(|e| Failure(EXIT_SOFTWARE, e.to_string()))?;
            let mut text = match g.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).unwrap()),
                Format::Text => {
                    let mut t = report.to_text();
                    if io.color {
                        for w in ["holds", "violated", "inconclusive"] {
                            t = t.replace(&format!("={w}"), &format!("={}", paint(w, true)));
                        }
                    }
                    for (k, lines) in report.witnesses() {
                        t.push_str(&format!("witness {k}:\n"));
                        for l in lines {
                            t.push_str(&format!("  {l}\n"));
                        }
                    }
                    t
                }
                Format::Dot => return Err(Failure(EXIT_USAGE, "classify has no dot output".into())),
            };
            if g.explain {
                text.push_str(&explain_text(&model, None));
            }
            write_out(io, &text)
        }
        Command::Check { property, pool, input } => {
            let model = load(input, io)?;
            let v = verdict_for(&model, *property, pool.as_deref(), &bounds)?;
            let mut text = match g.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&verdict_json(*property, pool.as_deref(), &v)).unwrap()),
                Format::Text => {
                    let mut t = format!("{}: {}", property_name(*property), paint(&v.value.to_string(), io.color));
                    if v.saturated {
                        t.push_str(" (saturated)");
                    }
                    t.push('\n');
                    if let Some(note) = &v.note {
                        t.push_str(&format!("note: {note}\n"));
                    }
                    if let Some(w) = &v.witness {
                        t.push_str("witness:\n");
                        for l in w.lines() {
                            t.push_str(&format!("  {l}\n"));
                        }
                    }
                    t
                }
                Format::Dot => return Err(Failure(EXIT_USAGE, "check has no dot output".into())),
            };
            if g.explain {
                text.push_str(&explain_text(&model, pool.as_deref()));
            }
            write_out(io, &text)?;
            Ok(exit_for(v.value))
        }
        Command::Trace { property, pool, input } => {
            let model = load(input, io)?;
            let v = verdict_for(&model, *property, pool.as_deref(), &bounds)?;
            let text = match &v.witness {
                Some(w) => w.to_string(),
                None => "no witness\n".to_string(),
            };
            write_out(io, &text)?;
            Ok(exit_for(v.value))
        }
        Command::Explore { pool, input } => {
            let model = load(input, io)?;
            let net = match pool {
                Some(name) => {
                    let p = model.pool(name).ok_or_else(|| Failure(EXIT_USAGE, format!("no pool named `{name}`")))?;
                    Net::process(&p.name, &p.process)
                }
                None => Net::collaboration(&model),
            };
            let lts = explore(&net, &bounds).map_err(|e| Failure(EXIT_INCONCLUSIVE, e.to_string()))?;
            let text = match g.format {
                Format::Dot => lts.to_dot(&net, |c| (0..net.pools.len()).all(|p| net.is_cs_sound(p, c))),
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "states": lts.len(),
                        "arcs": lts.arcs.len(),
                        "truncated": lts.truncated.iter().filter(|&&t| t).count(),
                        "saturated": lts.saturated(),
                    }))
                    .unwrap()
                ),
                Format::Text => format!(
                    "states: {}\narcs: {}\ntruncated: {}\nsaturated: {}\n",
                    lts.len(),
                    lts.arcs.len(),
                    lts.truncated.iter().filter(|&&t| t).count(),
                    lts.saturated()
                ),
            };
            write_out(io, &text)
        }
        Command::Fmt { input } => {
            let model = load(input, io)?;
            let text = match g.format {
                Format::Json => format!("{}\n", to_json(&model)),
                Format::Text => pretty(&model),
                Format::Dot => {
                    let mut s = String::new();
                    for p in &model.pools {
                        s.push_str(&is_well_structured_process(&p.process).residue.to_dot(&p.name));
                    }
                    s
                }
            };
            write_out(io, &text)
        }
        Command::Corpus => {
            let expected = corpus::expected();
            let mut all_ok = true;
            let mut lines = Vec::new();
            let mut models = Vec::new();
            for (name, model) in corpus::load() {
                let report = classify(&model, &bounds).map_err(|e| Failure(EXIT_SOFTWARE, format!("{name}: {e}")))?;
                let drift = corpus::compare(&expected.get(&name).cloned().unwrap_or_default(), &report);
                all_ok &= drift.is_empty();
                lines.push(json!({"model": name, "region": report.region, "ok": drift.is_empty(), "drift": drift}));
                models.push((name, model));
            }
            let theorems = check_theorems(&models, &bounds);
            all_ok &= theorems.iter().all(|t| t.passed);
            let text = match g.format {
                Format::Json => {
                    let th: Vec<_> = theorems
                        .iter()
                        .map(|t| json!({"claim": t.claim.to_string(), "passed": t.passed, "models": t.models}))
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&json!({"models": lines, "claims": th})).unwrap())
                }
                _ => {
                    let mut s = String::new();
                    for l in &lines {
                        let status = if l["ok"].as_bool().unwrap() { "ok" } else { "DRIFT" };
                        s.push_str(&format!("{status} {} {}\n", l["model"].as_str().unwrap(), l["region"].as_str().unwrap()));
                        for d in l["drift"].as_array().unwrap() {
                            s.push_str(&format!("  {}\n", d.as_str().unwrap()));
                        }
                    }
                    for t in &theorems {
                        s.push_str(&format!("{t}\n"));
                    }
                    s
                }
            };
            write_out(io, &text)?;
            Ok(if all_ok { EXIT_OK } else { EXIT_VIOLATED })
        }
    }
}
