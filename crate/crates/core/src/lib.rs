//! Simultaneous logic-in-memory on a 4-state 2T-1R OxRAM array.
//!
//! Layers, bottom up:
//!
//! - [`device`]: the four-rung resistance ladder, pulse transitions and the
//!   analog conductance bands.
//! - [`bitcell`]: gate-controlled logic pulses, memory write, read, refresh.
//! - [`array`]: banks of Mats, the controller with built-in refresh and
//!   Tag-byte driven row refresh.
//! - [`compiler`]: NOR-only netlists, ASAP scheduling onto array cells,
//!   execution on the simulated array.
//! - [`perf`]: switch-event energy, latency and EDP for SLIM and a CPU+DRAM
//!   baseline.
//! - [`sobel`]: the 4-bit Sobel edge-detection case study.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod array;
pub mod bitcell;
pub mod compiler;
pub mod device;
pub mod perf;
pub mod sobel;

pub use array::{parallel_capacity, Address, ArrayGeometry, RefreshPolicy, SlimArray};
pub use bitcell::{Activity, Bitcell, CellOp, GateDrive};
pub use compiler::{execute, netlist_for, schedule, Gate, NorNetlist, Schedule, Signal};
pub use device::{apply_pulse, decode, AnalogConfig, Pulse, PulseKind, SlimLevel};
pub use perf::{
    cpu_workload_edp, slim_workload_edp, CpuPerfParams, CpuWorkload, EdpReport, EventConvention, SlimPerfParams,
};
pub use sobel::{quantize_4bit, sobel_reference, sobel_slim, Image, KernelVariant, SobelEngine, SobelKernel};
