//! Line-oriented netlist and schedule listings.
//!
//! ```text
//! netlist HA inputs=2 outputs=2 cells=5 depth=3
//! input 0 a
//! input 1 b
//! node 0 nor g1=a g2=b cond=- cycle=0 at=0.0.0.0
//! node 1 cnor g1=~a g2=~a cond=~b cycle=0 at=0.1.0.0
//! output s n4
//! ```
//!
//! A signal is an input name, `~name` for its free complement, `nID` for a
//! node, or the constants `0` and `1`. `cnor` marks a conditionally pulsed
//! cell. The `cycle` and `at` columns are informational and ignored when
//! parsing.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, ensure, Context, Result};
use slim_core::compiler::{Node, NorNetlist, Schedule, Signal};

fn signal_text(n: &NorNetlist, s: Signal) -> String {
    match s {
        Signal::Input(i) => n.inputs[i].clone(),
        Signal::InputNot(i) => format!("~{}", n.inputs[i]),
        Signal::Node(i) => format!("n{i}"),
        Signal::Const(b) => u8::from(b).to_string(),
    }
}

fn parse_signal(inputs: &[String], text: &str) -> Result<Signal> {
    match text {
        "0" => return Ok(Signal::Const(false)),
        "1" => return Ok(Signal::Const(true)),
        _ => {}
    }
    let find = |name: &str| inputs.iter().position(|x| x == name);
    if let Some(name) = text.strip_prefix('~') {
        return find(name).map(Signal::InputNot).ok_or_else(|| anyhow!("unknown input `{name}`"));
    }
    if let Some(i) = find(text) {
        return Ok(Signal::Input(i));
    }
    text.strip_prefix('n')
        .and_then(|id| id.parse().ok())
        .map(Signal::Node)
        .ok_or_else(|| anyhow!("unrecognised signal `{text}`"))
}

/// Listing of a bare netlist; scheduling columns are omitted.
pub fn write_netlist(name: &str, n: &NorNetlist) -> String {
    render(name, n, None)
}

pub fn write_schedule(name: &str, s: &Schedule) -> String {
    render(name, &s.netlist, Some(s))
}

fn render(name: &str, n: &NorNetlist, s: Option<&Schedule>) -> String {
    let mut out = format!(
        "netlist {name} inputs={} outputs={} cells={} depth={}\n",
        n.inputs.len(),
        n.outputs.len(),
        n.cell_count(),
        n.depth()
    );
    for (i, x) in n.inputs.iter().enumerate() {
        writeln!(out, "input {i} {x}").unwrap();
    }
    for (i, node) in n.nodes.iter().enumerate() {
        let op = if node.cond.is_some() { "cnor" } else { "nor" };
        let cond = node.cond.map_or_else(|| "-".to_string(), |c| signal_text(n, c));
        write!(
            out,
            "node {i} {op} g1={} g2={} cond={cond}",
            signal_text(n, node.gates[0]),
            signal_text(n, node.gates[1])
        )
        .unwrap();
        if let Some(s) = s {
            write!(out, " cycle={} at={}", s.node_cycle[i], s.node_addr[i]).unwrap();
        }
        out.push('\n');
    }
    for (name, sig) in &n.outputs {
        writeln!(out, "output {name} {}", signal_text(n, *sig)).unwrap();
    }
    out
}

fn keyed<'a>(fields: &[&'a str], key: &str) -> Result<&'a str> {
    let prefix = format!("{key}=");
    fields.iter().find_map(|f| f.strip_prefix(&prefix)).ok_or_else(|| anyhow!("missing `{key}=`"))
}

pub fn parse_netlist(text: &str) -> Result<NorNetlist> {
    let mut n = NorNetlist { inputs: Vec::new(), nodes: Vec::new(), outputs: Vec::new() };
    let mut saw_header = false;
    for (ln, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let ctx = || format!("listing line {}", ln + 1);
        match fields.first().copied() {
            None => continue,
            Some("netlist") => saw_header = true,
            Some("input") => {
                ensure!(fields.len() == 3, "{}: expected `input INDEX NAME`", ctx());
                let idx: usize = fields[1].parse().with_context(ctx)?;
                ensure!(idx == n.inputs.len(), "{}: inputs must be listed in order", ctx());
                n.inputs.push(fields[2].to_string());
            }
            Some("node") => {
                ensure!(fields.len() >= 6, "{}: short node line", ctx());
                let id: usize = fields[1].parse().with_context(ctx)?;
                ensure!(id == n.nodes.len(), "{}: nodes must be listed in order", ctx());
                let g1 = parse_signal(&n.inputs, keyed(&fields, "g1").with_context(ctx)?).with_context(ctx)?;
                let g2 = parse_signal(&n.inputs, keyed(&fields, "g2").with_context(ctx)?).with_context(ctx)?;
                let cond = match keyed(&fields, "cond").with_context(ctx)? {
                    "-" => None,
                    c => Some(parse_signal(&n.inputs, c).with_context(ctx)?),
                };
                match (fields[2], cond.is_some()) {
                    ("nor", false) | ("cnor", true) => {}
                    (op, _) => bail!("{}: op `{op}` does not match cond", ctx()),
                }
                n.nodes.push(Node { gates: [g1, g2], cond });
            }
            Some("output") => {
                ensure!(fields.len() == 3, "{}: expected `output NAME SIGNAL`", ctx());
                let sig = parse_signal(&n.inputs, fields[2]).with_context(ctx)?;
                n.outputs.push((fields[1].to_string(), sig));
            }
            Some(other) if other.starts_with('#') => {}
            Some(other) => bail!("{}: unknown record `{other}`", ctx()),
        }
    }
    ensure!(saw_header, "listing has no `netlist` header");
    n.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(n)
}
