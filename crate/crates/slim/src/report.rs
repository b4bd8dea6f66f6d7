//! Report assembly: the EDP comparison and the gate library summary, as
//! JSON-serialisable structs and as aligned text.

use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use serde::Serialize;
use slim_core::compiler::{netlist_for, schedule, Gate};
use slim_core::perf::{
    cpu_workload_edp, slim_workload_edp, switch_event_energy, CpuWorkload, EdpRatios, EdpReport, EventConvention,
};
use slim_core::sobel::SobelEngine;

use crate::config::{events_name, Config};

/// Published figures the model is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdpReference {
    pub cpu_data_transfer_edp: f64,
    pub cpu_compute_edp: f64,
    pub cpu_overall_edp: f64,
    pub slim_data_transfer_edp: f64,
    pub slim_compute_edp: f64,
    pub slim_overall_edp: f64,
    pub data_transfer_ratio: f64,
    pub compute_ratio: f64,
    pub overall_ratio: f64,
}

pub const EDP_REFERENCE: EdpReference = EdpReference {
    cpu_data_transfer_edp: 1.31e-1,
    cpu_compute_edp: 2.48e5,
    cpu_overall_edp: 2.48e5,
    slim_data_transfer_edp: 1.68e-4,
    slim_compute_edp: 5.41e3,
    slim_overall_edp: 5.41e3,
    data_transfer_ratio: 783.44,
    compute_ratio: 45.89,
    overall_ratio: 45.89,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub header: String,
    pub notes: Vec<String>,
    pub cpu: EdpReport,
    pub slim: EdpReport,
    pub ratios: EdpRatios,
    pub reference: EdpReference,
}

impl Comparison {
    pub fn new(header: String, cpu: EdpReport, slim: EdpReport) -> Comparison {
        let ratios = EdpRatios::of(&cpu, &slim);
        Comparison {
            header,
            notes: vec![
                "SLIM figures are derived from the switch-event and read model".to_string(),
                "CPU+DRAM per-instruction and transfer energies are calibration constants".to_string(),
            ],
            cpu,
            slim,
            ratios,
            reference: EDP_REFERENCE,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises") + "\n"
    }

    pub fn table(&self) -> String {
        let mut out = format!("# {}\n", self.header);
        let w = 16;
        writeln!(out, "{:<14}{:>w$}{:>w$}{:>w$}", "EDP (pJ*s)", "Data Transfer", "Compute", "Overall").unwrap();
        for r in [&self.cpu, &self.slim] {
            writeln!(
                out,
                "{:<14}{:>w$}{:>w$}{:>w$}",
                r.system,
                sci(r.data_transfer_edp),
                sci(r.compute_edp),
                sci(r.overall_edp)
            )
            .unwrap();
        }
        let q = &self.ratios;
        writeln!(out, "{:<14}{:>w$.2}{:>w$.2}{:>w$.2}", "Ratio", q.data_transfer, q.compute, q.overall).unwrap();
        let p = &self.reference;
        writeln!(
            out,
            "{:<14}{:>w$}{:>w$}{:>w$}",
            "ref CPU+DRAM",
            sci(p.cpu_data_transfer_edp),
            sci(p.cpu_compute_edp),
            sci(p.cpu_overall_edp)
        )
        .unwrap();
        writeln!(
            out,
            "{:<14}{:>w$}{:>w$}{:>w$}",
            "ref SLIM",
            sci(p.slim_data_transfer_edp),
            sci(p.slim_compute_edp),
            sci(p.slim_overall_edp)
        )
        .unwrap();
        writeln!(
            out,
            "{:<14}{:>w$.2}{:>w$.2}{:>w$.2}",
            "ref Ratio", p.data_transfer_ratio, p.compute_ratio, p.overall_ratio
        )
        .unwrap();
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        out
    }
}

/// `1.2345E+03` style, two exponent digits.
pub fn sci(v: f64) -> String {
    let s = format!("{v:.2E}");
    match s.split_once('E') {
        Some((m, e)) => {
            let exp: i32 = e.parse().unwrap_or(0);
            format!("{m}E{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
        }
        None => s,
    }
}

/// SLIM versus CPU+DRAM on the nominal edge-detection workload of
/// `sobel_ops` output pixels.
pub fn edp_comparison(cfg: &Config, sobel_ops: u64) -> Result<Comparison> {
    let engine = SobelEngine::new(&cfg.slim, cfg.events).map_err(|e| anyhow!("{e}"))?;
    let slim = slim_workload_edp(&engine.nominal_workload(sobel_ops), &cfg.slim).map_err(|e| anyhow!("{e}"))?;
    let cpu = cpu_workload_edp(&CpuWorkload::sobel(sobel_ops), &cfg.cpu).map_err(|e| anyhow!("{e}"))?;
    let header =
        format!("edge-detection workload: {sobel_ops} outputs x (9 MUL4 + 9 ADD4), events={}", events_name(cfg.events));
    Ok(Comparison::new(header, cpu, slim))
}

/// Reference cells, normalised energy and latency per library gate.
pub fn gate_reference(g: Gate) -> Option<(usize, f64, usize)> {
    match g {
        Gate::Nor => Some((1, 1.0, 1)),
        Gate::Or => Some((2, 2.0, 2)),
        Gate::Nand => Some((4, 2.0, 3)),
        Gate::And => Some((3, 1.75, 2)),
        Gate::Xor => Some((5, 3.0, 3)),
        Gate::Xnor => Some((4, 2.75, 3)),
        Gate::HalfAdder => Some((5, 3.37, 4)),
        Gate::FullAdder => Some((9, 6.0, 6)),
        Gate::Not => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateRow {
    pub gate: String,
    pub cells: usize,
    pub energy: f64,
    pub latency: usize,
    pub ref_cells: Option<usize>,
    pub ref_energy: Option<f64>,
    pub ref_latency: Option<usize>,
}

pub fn gate_rows(cfg: &Config, convention: EventConvention) -> Result<Vec<GateRow>> {
    Gate::ALL
        .iter()
        .map(|&g| {
            let n = netlist_for(g);
            let s = schedule(&n, &cfg.slim.geometry).map_err(|e| anyhow!("{e}"))?;
            let r = gate_reference(g);
            Ok(GateRow {
                gate: g.name().to_string(),
                cells: n.cell_count(),
                energy: switch_event_energy(&n, convention).map_err(|e| anyhow!("{e}"))?,
                latency: s.depth(),
                ref_cells: r.map(|r| r.0),
                ref_energy: r.map(|r| r.1),
                ref_latency: r.map(|r| r.2),
            })
        })
        .collect()
}

pub fn gate_table(rows: &[GateRow], convention: EventConvention) -> String {
    let mut out =
        format!("# gate library, energy = mean switch events per evaluation, events={}\n", events_name(convention));
    writeln!(out, "{:<6}{:>7}{:>9}{:>9}{:>10}{:>9}{:>9}", "gate", "cells", "ref", "energy", "ref", "latency", "ref")
        .unwrap();
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
    for r in rows {
        writeln!(
            out,
            "{:<6}{:>7}{:>9}{:>9.3}{:>10}{:>9}{:>9}",
            r.gate,
            r.cells,
            opt(r.ref_cells.map(|v| v.to_string())),
            r.energy,
            opt(r.ref_energy.map(|v| format!("{v}x"))),
            r.latency,
            opt(r.ref_latency.map(|v| v.to_string())),
        )
        .unwrap();
    }
    out.push_str("note: latency is NOR levels on the critical path; no row is adjusted to match its reference\n");
    out
}
