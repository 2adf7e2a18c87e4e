//! Command-line interface: validate, convert, trace, parse-term.
//!
//! Exit codes: 0 success, 1 validation/conversion/input errors, 2
//! resource truncation during trace exploration.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bpmn::{parse_diagram, validate, Diagram, FlowNode, FlowNodeKind, ProcessGraph, TaskKind};
use crate::calculus::{canonical, parse_term, print_label, print_term, Name, PrivType, Process, System, Term};
use crate::convert::{convert_collaboration, ConversionConfig, ConversionOutput};
use crate::emit::{load_config, render_module, LoadedConfig};
use crate::semantics::{explore_tau, maximal_traces, TraceError};

#[derive(Debug, Parser)]
#[command(name = "privcal", version, about = "BPMN to Privacy Calculus compiler and analyzer")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a BPMN file against the structural conventions.
    Validate {
        /// BPMN XML file.
        input: PathBuf,
    },
    /// Translate a BPMN file and emit the module.
    Convert {
        /// BPMN XML file.
        input: PathBuf,
        /// Configuration file (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate, close the system with phantom drivers, and list the
    /// maximal silent traces.
    Trace {
        /// BPMN XML file.
        input: PathBuf,
        /// Configuration file (JSON).
        #[arg(long)]
        config: PathBuf,
        /// State budget for exploration.
        #[arg(long, default_value_t = 10_000)]
        max_states: usize,
        /// Depth budget for exploration.
        #[arg(long, default_value_t = 1_000)]
        max_depth: usize,
        /// Print every trace instead of the count.
        #[arg(long)]
        all_traces: bool,
    },
    /// Parse a term file and print its canonical form.
    ParseTerm {
        /// Term file in the concrete syntax.
        input: PathBuf,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run() -> i32 {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Validate { input } => cmd_validate(&input),
        Command::Convert { input, config, output } => cmd_convert(&input, &config, output.as_deref()),
        Command::Trace { input, config, max_states, max_depth, all_traces } => {
            cmd_trace(&input, &config, max_states, max_depth, all_traces)
        }
        Command::ParseTerm { input } => cmd_parse_term(&input),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_diagram(path: &Path) -> Result<Diagram, String> {
    let text = read(path)?;
    parse_diagram(text.as_bytes()).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<LoadedConfig, String> {
    load_config(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_validate(input: &Path) -> Result<i32, String> {
    let diagram = load_diagram(input)?;
    let violations = validate(&diagram);
    for v in &violations {
        println!("{} {} {}", v.code, v.node_or_flow, v.message);
    }
    Ok(if violations.is_empty() { 0 } else { 1 })
}

fn cmd_convert(input: &Path, config: &Path, output: Option<&Path>) -> Result<i32, String> {
    let diagram = load_diagram(input)?;
    let cfg = load(config)?;
    let out = convert_collaboration(&diagram, &cfg.conversion).map_err(|e| e.to_string())?;
    let text = render_module(&out, &cfg.emit);
    match output {
        None => print!("{text}"),
        Some(path) => write_atomic(path, &text)?,
    }
    Ok(0)
}

/// Writes via a sibling temp file and a rename, so readers never see a
/// partial module.
fn write_atomic(path: &Path, text: &str) -> Result<(), String> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
    fs::rename(&tmp, path).map_err(|e| format!("cannot rename to {}: {e}", path.display()))
}

fn cmd_parse_term(input: &Path) -> Result<i32, String> {
    let text = read(input)?;
    let term = parse_term(text.trim()).map_err(|e| format!("{}: {e}", input.display()))?;
    println!("{}", print_term(&canonical(&term)));
    Ok(0)
}

fn cmd_trace(
    input: &Path,
    config: &Path,
    max_states: usize,
    max_depth: usize,
    all_traces: bool,
) -> Result<i32, String> {
    let diagram = load_diagram(input)?;
    let cfg = load(config)?;
    let out = convert_collaboration(&diagram, &cfg.conversion).map_err(|e| e.to_string())?;
    let mut truncated = false;
    let systems = closed_systems(&diagram, &out, &cfg.conversion);
    let many = systems.len() > 1;
    for (scenario, system) in systems {
        if many {
            println!("[{scenario}]");
        }
        let graph = explore_tau(&Term::System(system), max_states, max_depth);
        if graph.truncated {
            eprintln!("exploration truncated (max_states {max_states}, max_depth {max_depth})");
            truncated = true;
            continue;
        }
        match maximal_traces(&graph) {
            Err(TraceError::GraphCyclic) => {
                return Err("transition graph is cyclic; traces are infinite".into())
            }
            Err(TraceError::GraphTruncated) => unreachable!("checked above"),
            Ok(traces) => {
                if all_traces {
                    for t in &traces {
                        let labels: Vec<String> = t.iter().map(print_label).collect();
                        println!("trace: {}", labels.join(" "));
                    }
                } else {
                    println!("{} trace(s)", traces.len());
                }
            }
        }
    }
    Ok(if truncated { 2 } else { 0 })
}

/// Closes a converted system for silent-only exploration: every used
/// phantom channel gets a driver (incoming direction, `(new v:T)E!<v>.0`)
/// or a sink (outgoing direction, `F(m:T).0`) in an environment process.
/// Drivers on context-variable channels send concrete domain values, one
/// closed system per value combination.
pub fn closed_systems(
    diagram: &Diagram,
    out: &ConversionOutput,
    cfg: &ConversionConfig,
) -> Vec<(String, System)> {
    let mut drivers: Vec<Process> = vec![];
    let mut sinks: Vec<Process> = vec![];
    // (channel, domain) pairs whose value choice is enumerated.
    let mut enumerated: Vec<(String, Vec<String>)> = vec![];
    for (node_id, ph) in &cfg.phantoms {
        let channel = Name::free(&ph.channel);
        if !out.context.contains_key(&channel) {
            continue;
        }
        let Some(node) = find_node(diagram, node_id) else { continue };
        if phantom_is_incoming(&node.kind) {
            match &ph.message_type {
                PrivType::ContextVar { domain, .. } => {
                    enumerated.push((ph.channel.clone(), domain.clone()));
                }
                ty => drivers.push(Process::new_name(
                    "v",
                    ty.clone(),
                    Process::output(channel, Name::free("v"), Process::Empty),
                )),
            }
        } else {
            sinks.push(Process::input(channel, "m", ph.message_type.clone(), Process::Empty));
        }
    }

    let mut scenarios: Vec<(String, Vec<Process>)> = vec![(String::new(), vec![])];
    for (channel, domain) in &enumerated {
        let mut next = vec![];
        for (desc, procs) in &scenarios {
            for value in domain {
                let mut procs = procs.clone();
                procs.push(Process::output(
                    Name::free(channel),
                    Name::free(value),
                    Process::Empty,
                ));
                let desc = if desc.is_empty() {
                    format!("{channel}={value}")
                } else {
                    format!("{desc} {channel}={value}")
                };
                next.push((desc, procs));
            }
        }
        scenarios = next;
    }

    let env_group = cfg
        .process_meta
        .values()
        .map(|m| m.group.clone())
        .reduce(crate::calculus::Group::union)
        .unwrap_or_else(|| crate::calculus::Group::role("Env"));
    scenarios
        .into_iter()
        .map(|(desc, value_drivers)| {
            let mut procs = drivers.clone();
            procs.extend(value_drivers);
            procs.extend(sinks.iter().cloned());
            let desc = if desc.is_empty() { "default".to_string() } else { desc };
            let system = if procs.is_empty() {
                out.system.clone()
            } else {
                System::par(
                    out.system.clone(),
                    System::lift(env_group.clone(), "env", Process::par_all(procs)),
                )
            };
            (desc, system)
        })
        .collect()
}

/// Whether a phantom flow on this node kind points into the node.
fn phantom_is_incoming(kind: &FlowNodeKind) -> bool {
    matches!(
        kind,
        FlowNodeKind::StartEvent { is_message: true }
            | FlowNodeKind::IntermediateCatchEvent
            | FlowNodeKind::Task { task_kind: TaskKind::Receive }
    )
}

fn find_node<'a>(diagram: &'a Diagram, id: &str) -> Option<&'a FlowNode> {
    fn in_graph<'a>(g: &'a ProcessGraph, id: &str) -> Option<&'a FlowNode> {
        if let Some(n) = g.nodes.get(id) {
            return Some(n);
        }
        g.nodes.values().find_map(|n| match &n.kind {
            FlowNodeKind::SubProcess { body, .. } => in_graph(body, id),
            _ => None,
        })
    }
    match diagram {
        Diagram::SingleProcess(p) => in_graph(p, id),
        Diagram::Collaboration { participants, .. } => {
            participants.iter().find_map(|p| match &p.body {
                crate::bpmn::ParticipantBody::Process(g) => in_graph(g, id),
                crate::bpmn::ParticipantBody::BlackBox => None,
            })
        }
    }
}
