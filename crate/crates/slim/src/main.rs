use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use slim::config::{parse_events, parse_refresh, Config};
use slim::report::{edp_comparison, gate_rows, gate_table, Comparison};
use slim::{dump, listing, pgm};
use slim_core::array::{Address, SlimArray};
use slim_core::bitcell::{Activity, Bitcell, CellOp};
use slim_core::compiler::{
    build_csa_multiplier, build_ripple_adder, build_ripple_adder_with_carry, netlist_for, schedule, Gate, NorNetlist,
};
use slim_core::device::{decode_conductance, sample_conductance, PulseKind, SlimLevel};
use slim_core::perf::{cpu_workload_edp, CpuWorkload};
use slim_core::sobel::{convention_note, quantize_4bit, sobel_reference, sobel_slim, KernelVariant};

#[derive(Parser)]
#[command(name = "slim", version, about = "Logic-in-memory array simulator")]
struct Cli {
    /// Configuration file, or `default` for the shipped defaults.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Refresh policy, overriding the configuration.
    #[arg(long, global = true, value_parser = parse_refresh)]
    refresh: Option<slim_core::array::RefreshPolicy>,
    /// Switch-event convention, overriding the configuration.
    #[arg(long, global = true, value_parser = parse_events)]
    events: Option<slim_core::perf::EventConvention>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Gx,
    Gy,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a pulse sequence to one cell and print the state trace.
    Pulse {
        /// Start state: 11, 10, 01 or 00.
        #[arg(long, default_value = "01")]
        from: String,
        /// Repeat the whole sequence this many times.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Pulses, e.g. `P3 P2 P2 P1`.
        #[arg(required = true)]
        pulses: Vec<String>,
    },
    /// Memory-mode write of one bit.
    Write {
        #[arg(long)]
        addr: String,
        #[arg(long)]
        bit: u8,
        /// Array dump to load and update; created if absent.
        #[arg(long)]
        array: Option<PathBuf>,
    },
    /// Read one cell, optionally sampling its analog conductance.
    Read {
        #[arg(long)]
        addr: String,
        #[arg(long)]
        array: Option<PathBuf>,
        /// Noisy conductance samples to draw and decode.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Single-cell logic operation: NOT_A, NOT_B, OR, NOR, AND or NAND.
    Logic {
        #[arg(long)]
        op: String,
        #[arg(long)]
        addr: String,
        #[arg(long)]
        a: u8,
        #[arg(long)]
        b: u8,
        #[arg(long)]
        array: Option<PathBuf>,
    },
    /// Emit the netlist and schedule of a library gate or arithmetic block
    /// (`add`, `add-carry`, `mul`).
    Compile {
        name: String,
        #[arg(long, default_value_t = 4)]
        width: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cells, switch events and latency of the gate library.
    GateReport {
        #[arg(long)]
        json: bool,
    },
    /// Edge detection on the simulated array.
    Sobel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "gx")]
        kernel: Kernel,
        /// Output image; `.ascii.pgm` selects P2.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report destination.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// EDP comparison for the nominal edge-detection workload.
    Edp {
        #[arg(long, default_value_t = 4096)]
        sobel_ops: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_address(s: &str) -> Result<Address> {
    let parts: Vec<usize> = s
        .split('.')
        .map(|p| p.parse().map_err(|_| anyhow!("bad address `{s}` (expected bank.mat.row.col)")))
        .collect::<Result<_>>()?;
    match parts[..] {
        [bank, mat, row, col] => Ok(Address::new(bank, mat, row, col)),
        _ => bail!("bad address `{s}` (expected bank.mat.row.col)"),
    }
}

fn parse_bit(v: u8) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => bail!("bit must be 0 or 1, got {v}"),
    }
}

fn open_array(path: Option<&Path>, cfg: &Config) -> Result<SlimArray> {
    match path {
        Some(p) if p.exists() => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            dump::load(&text, cfg.refresh).with_context(|| format!("loading {}", p.display()))
        }
        _ => SlimArray::new(cfg.slim.geometry, cfg.refresh).map_err(|e| anyhow!("{e}")),
    }
}

fn save_array(path: Option<&Path>, array: &SlimArray) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, dump::save(array)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn block(name: &str, width: usize) -> Result<NorNetlist> {
    let n = match name.to_ascii_lowercase().as_str() {
        "add" => build_ripple_adder(width),
        "add-carry" => build_ripple_adder_with_carry(width),
        "mul" => build_csa_multiplier(width),
        _ => return Ok(netlist_for(Gate::from_name(name)?)),
    };
    Ok(n?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SobelReport<'a> {
    width: usize,
    height: usize,
    kernel: &'static str,
    reference_match: bool,
    memory_preserved: bool,
    comparison: &'a Comparison,
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(r) = cli.refresh {
        cfg.refresh = r;
    }
    if let Some(e) = cli.events {
        cfg.events = e;
    }
    match cli.command {
        Command::Pulse { from, repeat, pulses } => {
            let start = SlimLevel::from_label(&from).ok_or_else(|| anyhow!("unknown state `{from}`"))?;
            let kinds: Vec<PulseKind> = pulses
                .iter()
                .map(|p| PulseKind::from_name(p).ok_or_else(|| anyhow!("unknown pulse `{p}` (P1, P2 or P3)")))
                .collect::<Result<_>>()?;
            let mut cell = Bitcell::new(start);
            let mut act = Activity::default();
            println!("cycle step pulse from to memory logic");
            for cycle in 0..repeat {
                for (step, kind) in kinds.iter().enumerate() {
                    let before = cell.state;
                    cell.pulse(*kind, &mut act);
                    let (m, l) = slim_core::device::decode(cell.state);
                    println!("{cycle} {step} {kind:?} {before} {} {} {}", cell.state, m as u8, l as u8);
                }
            }
            println!("# pulses={} transitions={}", act.pulses(), act.transitions);
        }
        Command::Write { addr, bit, array } => {
            let addr = parse_address(&addr)?;
            let mut arr = open_array(array.as_deref(), &cfg)?;
            arr.memory_write(addr, parse_bit(bit)?).map_err(|e| anyhow!("{e}"))?;
            println!("{addr} {}", arr.state(addr).map_err(|e| anyhow!("{e}"))?);
            save_array(array.as_deref(), &arr)?;
        }
        Command::Read { addr, array, samples } => {
            let addr = parse_address(&addr)?;
            let mut arr = open_array(array.as_deref(), &cfg)?;
            let (m, l) = arr.read_cell(addr).map_err(|e| anyhow!("{e}"))?;
            let state = arr.state(addr).map_err(|e| anyhow!("{e}"))?;
            println!("{addr} state={state} memory={} logic={}", m as u8, l as u8);
            if samples > 0 {
                let mut rng = cfg.analog.rng();
                let mut correct = 0;
                for _ in 0..samples {
                    let g = sample_conductance(state, &cfg.analog, &mut rng).map_err(|e| anyhow!("{e}"))?;
                    correct += (decode_conductance(g, &cfg.analog) == state) as usize;
                }
                println!("samples={samples} decoded_correctly={correct}");
            }
        }
        Command::Logic { op, addr, a, b, array } => {
            let cell_op = CellOp::from_name(&op).ok_or_else(|| anyhow!("unknown op `{op}`"))?;
            let addr = parse_address(&addr)?;
            let mut arr = open_array(array.as_deref(), &cfg)?;
            let out = arr.logic_op_at(addr, cell_op, parse_bit(a)?, parse_bit(b)?).map_err(|e| anyhow!("{e}"))?;
            let state = arr.state(addr).map_err(|e| anyhow!("{e}"))?;
            println!("{cell_op}({a},{b}) = {} at {addr} state={state}", out as u8);
            save_array(array.as_deref(), &arr)?;
        }
        Command::Compile { name, width, out } => {
            let n = block(&name, width)?;
            let s = schedule(&n, &cfg.slim.geometry)?;
            emit(&listing::write_schedule(&name, &s), out.as_deref())?;
        }
        Command::GateReport { json } => {
            let rows = gate_rows(&cfg, cfg.events)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                print!("{}", gate_table(&rows, cfg.events));
            }
        }
        Command::Sobel { input, kernel, out, report } => {
            let variant = match kernel {
                Kernel::Gx => KernelVariant::Gx,
                Kernel::Gy => KernelVariant::Gy,
                Kernel::Both => KernelVariant::Both,
            };
            let img = pgm::read(&input)?;
            let img4 = match img.bit_depth {
                8 => quantize_4bit(&img)?,
                4 => img,
                d => bail!("input must be 8-bit or 4-bit, found {d}-bit"),
            };
            let mut arr = SlimArray::new(cfg.slim.geometry, cfg.refresh).map_err(|e| anyhow!("{e}"))?;
            let plane = arr.memory_plane();
            let (edges, slim_edp) = sobel_slim(&img4, variant, &mut arr, &cfg.slim, cfg.events)?;
            let pixels = (img4.width * img4.height) as u64;
            let cpu_edp = cpu_workload_edp(&CpuWorkload::sobel(pixels), &cfg.cpu).map_err(|e| anyhow!("{e}"))?;
            let header = format!("{} events={}", convention_note(variant), slim::config::events_name(cfg.events));
            let cmp = Comparison::new(header, cpu_edp, slim_edp);
            let summary = SobelReport {
                width: img4.width,
                height: img4.height,
                kernel: variant.name(),
                reference_match: edges == sobel_reference(&img4, variant)?,
                memory_preserved: arr.memory_plane() == plane,
                comparison: &cmp,
            };
            if let Some(p) = out {
                pgm::write(&p, &edges)?;
            }
            if let Some(p) = report {
                let json = serde_json::to_string_pretty(&summary)? + "\n";
                std::fs::write(&p, json).with_context(|| format!("writing {}", p.display()))?;
            }
            print!("{}", cmp.table());
            println!("reference_match={} memory_preserved={}", summary.reference_match, summary.memory_preserved);
        }
        Command::Edp { sobel_ops, report, json } => {
            let cmp = edp_comparison(&cfg, sobel_ops)?;
            if let Some(p) = report {
                std::fs::write(&p, cmp.to_json()).with_context(|| format!("writing {}", p.display()))?;
            }
            if json {
                print!("{}", cmp.to_json());
            } else {
                print!("{}", cmp.table());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
