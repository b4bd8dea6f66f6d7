//! NOR-based synthesis onto SLIM cells.
//!
//! A [`NorNetlist`] is a DAG of cell operations. Every node is one bitcell that
//! starts at logic `1` and receives a single RESET pulse gated by two signals
//! and an optional pulse condition, so it computes `!(cond & (s1 | s2))`.
//! Primary inputs and their complements are free peripheral drives; the
//! complement of an intermediate node costs an inverter cell.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::array::{parallel_capacity, Address, ArrayError, ArrayGeometry, SlimArray};
use crate::bitcell::GateDrive;

/// Exhaustive checks enumerate at most `2^MAX_EXHAUSTIVE_INPUTS` combinations.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Signal {
    Input(usize),
    /// Complement of a primary input, driven by the periphery.
    InputNot(usize),
    Node(usize),
    Const(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Node {
    pub gates: [Signal; 2],
    /// Pulse condition. `None` means the pulse is always asserted.
    pub cond: Option<Signal>,
}

impl Node {
    pub fn sources(&self) -> impl Iterator<Item = Signal> + '_ {
        self.gates.iter().copied().chain(self.cond)
    }

    pub fn eval(&self, value: impl Fn(Signal) -> bool) -> bool {
        let fires = self.cond.is_none_or(&value) && (value(self.gates[0]) || value(self.gates[1]));
        !fires
    }

    pub fn is_inverter(&self) -> bool {
        self.gates[0] == self.gates[1] && self.cond.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompileError {
    UnknownGate(String),
    InvalidWidth,
    /// A node refers to itself, a later node, or an unknown input.
    BadSource {
        node: usize,
        source: Signal,
    },
    BadOutput {
        name: String,
        source: Signal,
    },
    TooManyInputs {
        inputs: usize,
    },
    InputCountMismatch {
        expected: usize,
        got: usize,
    },
    CapacityExceeded {
        cycle: usize,
        needed: usize,
        capacity: usize,
    },
    Array(ArrayError),
}

impl fmt::Display for CompileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompileError::UnknownGate(g) => write!(f, "unknown gate '{g}'"),
            CompileError::InvalidWidth => f.write_str("width must be >= 1"),
            CompileError::BadSource { node, source } => write!(f, "node n{node} has invalid source {source:?}"),
            CompileError::BadOutput { name, source } => write!(f, "output {name} has invalid source {source:?}"),
            CompileError::TooManyInputs { inputs } => {
                write!(f, "{inputs} inputs exceed the exhaustive limit of {MAX_EXHAUSTIVE_INPUTS}")
            }
            CompileError::InputCountMismatch { expected, got } => {
                write!(f, "expected {expected} input bits, got {got}")
            }
            CompileError::CapacityExceeded { cycle, needed, capacity } => {
                write!(f, "cycle {cycle} needs {needed} cells but only {capacity} are available")
            }
            CompileError::Array(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CompileError {}

impl From<ArrayError> for CompileError {
    fn from(e: ArrayError) -> Self {
        CompileError::Array(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NorNetlist {
    pub inputs: Vec<String>,
    pub nodes: Vec<Node>,
    pub outputs: Vec<(String, Signal)>,
}

impl NorNetlist {
    pub fn cell_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn validate(&self) -> Result<(), CompileError> {
        let ok = |s: Signal, limit: usize| match s {
            Signal::Input(i) | Signal::InputNot(i) => i < self.inputs.len(),
            Signal::Node(n) => n < limit,
            Signal::Const(_) => true,
        };
        for (id, node) in self.nodes.iter().enumerate() {
            if let Some(source) = node.sources().find(|s| !ok(*s, id)) {
                return Err(CompileError::BadSource { node: id, source });
            }
        }
        for (name, s) in &self.outputs {
            if !ok(*s, self.nodes.len()) {
                return Err(CompileError::BadOutput { name: name.clone(), source: *s });
            }
        }
        Ok(())
    }

    /// Value of every node for one input assignment.
    pub fn node_values(&self, inputs: &[bool]) -> Result<Vec<bool>, CompileError> {
        if inputs.len() != self.inputs.len() {
            return Err(CompileError::InputCountMismatch { expected: self.inputs.len(), got: inputs.len() });
        }
        let mut values: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = node.eval(|s| resolve(s, inputs, &values));
            values.push(v);
        }
        Ok(values)
    }

    pub fn evaluate(&self, inputs: &[bool]) -> Result<Vec<bool>, CompileError> {
        let values = self.node_values(inputs)?;
        Ok(self.outputs.iter().map(|(_, s)| resolve(*s, inputs, &values)).collect())
    }

    /// Logic level of every node; primary signals sit at level 0.
    pub fn levels(&self) -> Vec<usize> {
        let mut levels: Vec<usize> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let deepest = node
                .sources()
                .map(|s| match s {
                    Signal::Node(n) => levels[n],
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            levels.push(deepest + 1);
        }
        levels
    }

    pub fn depth(&self) -> usize {
        self.levels().into_iter().max().unwrap_or(0)
    }

    /// `copies` independent instances side by side. Input and output names
    /// gain a `#k` suffix; instance `k`'s inputs follow instance `k - 1`'s.
    pub fn replicate(&self, copies: usize) -> NorNetlist {
        let (ni, nn) = (self.inputs.len(), self.nodes.len());
        let shift = |s: Signal, k: usize| match s {
            Signal::Input(i) => Signal::Input(i + k * ni),
            Signal::InputNot(i) => Signal::InputNot(i + k * ni),
            Signal::Node(n) => Signal::Node(n + k * nn),
            c => c,
        };
        let mut out = NorNetlist::default();
        for k in 0..copies {
            out.inputs.extend(self.inputs.iter().map(|n| format!("{n}#{k}")));
            out.nodes.extend(self.nodes.iter().map(|node| Node {
                gates: [shift(node.gates[0], k), shift(node.gates[1], k)],
                cond: node.cond.map(|c| shift(c, k)),
            }));
            out.outputs.extend(self.outputs.iter().map(|(n, s)| (format!("{n}#{k}"), shift(*s, k))));
        }
        out
    }
}

fn resolve(s: Signal, inputs: &[bool], nodes: &[bool]) -> bool {
    match s {
        Signal::Input(i) => inputs[i],
        Signal::InputNot(i) => !inputs[i],
        Signal::Node(n) => nodes[n],
        Signal::Const(c) => c,
    }
}

/// Incremental netlist construction from NOR-only building blocks.
#[derive(Debug, Default)]
pub struct NetlistBuilder {
    netlist: NorNetlist,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, name: impl Into<String>) -> Signal {
        self.netlist.inputs.push(name.into());
        Signal::Input(self.netlist.inputs.len() - 1)
    }

    pub fn inputs(&mut self, prefix: &str, n: usize) -> Vec<Signal> {
        (0..n).map(|i| self.input(format!("{prefix}{i}"))).collect()
    }

    pub fn output(&mut self, name: impl Into<String>, s: Signal) {
        self.netlist.outputs.push((name.into(), s));
    }

    pub fn cell(&mut self, g1: Signal, g2: Signal, cond: Option<Signal>) -> Signal {
        self.netlist.nodes.push(Node { gates: [g1, g2], cond });
        Signal::Node(self.netlist.nodes.len() - 1)
    }

    pub fn nor(&mut self, a: Signal, b: Signal) -> Signal {
        self.cell(a, b, None)
    }

    pub fn inv(&mut self, a: Signal) -> Signal {
        self.nor(a, a)
    }

    /// `NOR` + inverter.
    pub fn or(&mut self, a: Signal, b: Signal) -> Signal {
        let n = self.nor(a, b);
        self.inv(n)
    }

    /// Inverted operands into a `NOR`: three cells.
    pub fn and(&mut self, a: Signal, b: Signal) -> Signal {
        let na = self.inv(a);
        let nb = self.inv(b);
        self.nor(na, nb)
    }

    pub fn nand(&mut self, a: Signal, b: Signal) -> Signal {
        let x = self.and(a, b);
        self.inv(x)
    }

    /// Five-cell XOR. Returns `(a ^ b, a & b)`; the AND term is free.
    pub fn xor_and(&mut self, a: Signal, b: Signal) -> (Signal, Signal) {
        let na = self.inv(a);
        let nb = self.inv(b);
        let both = self.nor(na, nb);
        let neither = self.nor(a, b);
        (self.nor(both, neither), both)
    }

    /// `(sum, carry)`.
    pub fn half_adder(&mut self, a: Signal, b: Signal) -> (Signal, Signal) {
        self.xor_and(a, b)
    }

    /// Nine-NOR full adder. Returns `(sum, carry)`.
    pub fn full_adder(&mut self, a: Signal, b: Signal, c: Signal) -> (Signal, Signal) {
        let n1 = self.nor(a, b);
        let n2 = self.nor(a, n1);
        let n3 = self.nor(b, n1);
        let xnor_ab = self.nor(n2, n3);
        let n5 = self.nor(xnor_ab, c);
        let n6 = self.nor(xnor_ab, n5);
        let n7 = self.nor(c, n5);
        let sum = self.nor(n6, n7);
        let carry = self.nor(n1, n5);
        (sum, carry)
    }

    /// Adds whatever operands are present in one column.
    fn column_add(
        &mut self,
        x: Option<Signal>,
        y: Option<Signal>,
        z: Option<Signal>,
    ) -> (Option<Signal>, Option<Signal>) {
        match (x, y, z) {
            (Some(a), Some(b), Some(c)) => {
                let (s, c) = self.full_adder(a, b, c);
                (Some(s), Some(c))
            }
            (Some(a), Some(b), None) | (Some(a), None, Some(b)) | (None, Some(a), Some(b)) => {
                let (s, c) = self.half_adder(a, b);
                (Some(s), Some(c))
            }
            (Some(a), None, None) | (None, Some(a), None) | (None, None, Some(a)) => (Some(a), None),
            (None, None, None) => (None, None),
        }
    }

    /// Ripple-carry addition of two little-endian words. Returns the sum
    /// bits (same length as the longer word) and the carry out.
    pub fn ripple_add(
        &mut self,
        xs: &[Option<Signal>],
        ys: &[Option<Signal>],
        carry_in: Option<Signal>,
    ) -> (Vec<Option<Signal>>, Option<Signal>) {
        let width = xs.len().max(ys.len());
        let mut carry = carry_in;
        let mut sum = Vec::with_capacity(width);
        for i in 0..width {
            let (s, c) = self.column_add(xs.get(i).copied().flatten(), ys.get(i).copied().flatten(), carry);
            sum.push(s);
            carry = c;
        }
        (sum, carry)
    }

    /// Carry-save array multiplication. Partial products come from AND
    /// cells; each further row is reduced with full/half adders whose carries
    /// are saved for the next row; a final ripple-carry stage resolves the
    /// upper half. Returns `xs.len() + ys.len()` product bits.
    pub fn csa_multiply(&mut self, xs: &[Signal], ys: &[Signal]) -> Vec<Option<Signal>> {
        let (n, m) = (xs.len(), ys.len());
        let width = n + m;
        if n == 0 || m == 0 {
            return vec![None; width];
        }
        let mut sum: Vec<Option<Signal>> = vec![None; width + 1];
        let mut carry: Vec<Option<Signal>> = vec![None; width + 1];
        for (j, x) in xs.iter().enumerate() {
            sum[j] = Some(self.and(*x, ys[0]));
        }
        for (i, y) in ys.iter().enumerate().skip(1) {
            let mut next_carry: Vec<Option<Signal>> = vec![None; width + 1];
            for (j, x) in xs.iter().enumerate() {
                let col = i + j;
                let pp = self.and(*x, *y);
                let (s, c) = self.column_add(Some(pp), sum[col], carry[col]);
                sum[col] = s;
                next_carry[col + 1] = c;
            }
            // Columns below `i` are final; carries there were consumed above.
            carry = next_carry;
        }
        let low = m;
        let (upper, _) = self.ripple_add(&sum[low..width], &carry[low..width], None);
        let mut product = sum[..low].to_vec();
        product.extend(upper);
        product.truncate(width);
        product
    }

    pub fn finish(self) -> Result<NorNetlist, CompileError> {
        self.netlist.validate()?;
        Ok(self.netlist)
    }
}

fn materialize(s: Option<Signal>) -> Signal {
    s.unwrap_or(Signal::Const(false))
}

/// Library blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Gate {
    Not,
    Nor,
    Or,
    Nand,
    And,
    Xor,
    Xnor,
    HalfAdder,
    FullAdder,
}

impl Gate {
    pub const ALL: [Gate; 9] = [
        Gate::Not,
        Gate::Nor,
        Gate::Or,
        Gate::Nand,
        Gate::And,
        Gate::Xor,
        Gate::Xnor,
        Gate::HalfAdder,
        Gate::FullAdder,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Gate::Not => "NOT",
            Gate::Nor => "NOR",
            Gate::Or => "OR",
            Gate::Nand => "NAND",
            Gate::And => "AND",
            Gate::Xor => "XOR",
            Gate::Xnor => "XNOR",
            Gate::HalfAdder => "HA",
            Gate::FullAdder => "FA",
        }
    }

    pub fn from_name(name: &str) -> Result<Gate, CompileError> {
        Gate::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| CompileError::UnknownGate(name.to_string()))
    }

    /// Boolean reference for the block's outputs, in output order.
    pub fn truth(self, inputs: &[bool]) -> Vec<bool> {
        let a = inputs[0];
        let b = inputs.get(1).copied().unwrap_or(false);
        match self {
            Gate::Not => vec![!a],
            Gate::Nor => vec![!(a | b)],
            Gate::Or => vec![a | b],
            Gate::Nand => vec![!(a & b)],
            Gate::And => vec![a & b],
            Gate::Xor => vec![a ^ b],
            Gate::Xnor => vec![a == b],
            Gate::HalfAdder => vec![a ^ b, a & b],
            Gate::FullAdder => {
                let c = inputs[2];
                vec![a ^ b ^ c, (a & b) | (c & (a ^ b))]
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical library netlist for `gate`.
pub fn netlist_for(gate: Gate) -> NorNetlist {
    let mut b = NetlistBuilder::new();
    let x = b.input("a");
    match gate {
        Gate::Not => {
            let y = b.inv(x);
            b.output("y", y);
        }
        Gate::FullAdder => {
            let y = b.input("b");
            let c = b.input("cin");
            let (s, co) = b.full_adder(x, y, c);
            b.output("sum", s);
            b.output("cout", co);
        }
        _ => {
            let y = b.input("b");
            match gate {
                Gate::Nor => {
                    let o = b.nor(x, y);
                    b.output("y", o);
                }
                Gate::Or => {
                    let o = b.or(x, y);
                    b.output("y", o);
                }
                Gate::And => {
                    let o = b.and(x, y);
                    b.output("y", o);
                }
                Gate::Nand => {
                    let o = b.nand(x, y);
                    b.output("y", o);
                }
                Gate::Xor => {
                    let (o, _) = b.xor_and(x, y);
                    b.output("y", o);
                }
                Gate::Xnor => {
                    let both = b.nor(Signal::InputNot(0), Signal::InputNot(1));
                    let neither = b.nor(x, y);
                    let xor = b.nor(both, neither);
                    let o = b.inv(xor);
                    b.output("y", o);
                }
                Gate::HalfAdder => {
                    let (s, c) = b.half_adder(x, y);
                    b.output("sum", s);
                    b.output("carry", c);
                }
                Gate::Not | Gate::FullAdder => unreachable!(),
            }
        }
    }
    b.finish().expect("library netlists are well formed")
}

/// `width`-bit ripple-carry adder: inputs `a0..`, `b0..`; outputs `s0..` and `cout`.
/// The first stage is a half adder.
pub fn build_ripple_adder(width: usize) -> Result<NorNetlist, CompileError> {
    ripple_adder(width, false)
}

/// As [`build_ripple_adder`] with an extra `cin` input and a full adder first stage.
pub fn build_ripple_adder_with_carry(width: usize) -> Result<NorNetlist, CompileError> {
    ripple_adder(width, true)
}

fn ripple_adder(width: usize, carry_in: bool) -> Result<NorNetlist, CompileError> {
    if width == 0 {
        return Err(CompileError::InvalidWidth);
    }
    let mut b = NetlistBuilder::new();
    let xs: Vec<_> = b.inputs("a", width).into_iter().map(Some).collect();
    let ys: Vec<_> = b.inputs("b", width).into_iter().map(Some).collect();
    let cin = carry_in.then(|| b.input("cin"));
    let (sum, cout) = b.ripple_add(&xs, &ys, cin);
    for (i, s) in sum.into_iter().enumerate() {
        b.output(format!("s{i}"), materialize(s));
    }
    b.output("cout", materialize(cout));
    b.finish()
}

/// `width` x `width` carry-save multiplier: inputs `a0..`, `b0..`; outputs `p0..p{2w-1}`.
pub fn build_csa_multiplier(width: usize) -> Result<NorNetlist, CompileError> {
    if width == 0 {
        return Err(CompileError::InvalidWidth);
    }
    let mut b = NetlistBuilder::new();
    let xs = b.inputs("a", width);
    let ys = b.inputs("b", width);
    for (i, p) in b.csa_multiply(&xs, &ys).into_iter().enumerate() {
        b.output(format!("p{i}"), materialize(p));
    }
    b.finish()
}

/// One node placed on the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Placement {
    pub node: usize,
    pub addr: Address,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub netlist: NorNetlist,
    pub geometry: ArrayGeometry,
    /// `cycles[c]` holds the nodes evaluated in cycle `c`.
    pub cycles: Vec<Vec<Placement>>,
    /// `routes[c]`: nodes read back and re-driven as gate signals before cycle `c`.
    pub routes: Vec<Vec<usize>>,
    /// Cycle of each node.
    pub node_cycle: Vec<usize>,
    pub node_addr: Vec<Address>,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.cycles.len()
    }

    /// Cells touched by one execution.
    pub fn footprint(&self) -> usize {
        self.node_addr.len()
    }
}

/// ASAP level scheduling with round-robin Mat placement.
///
/// A cycle may use one row in each Mat. Mats are visited bank-interleaved,
/// and a Mat row is never reused inside one schedule, so every node keeps
/// its value until the execution ends.
pub fn schedule(netlist: &NorNetlist, geometry: &ArrayGeometry) -> Result<Schedule, CompileError> {
    netlist.validate()?;
    let capacity = parallel_capacity(geometry, 1, 1)?;
    let levels = netlist.levels();
    let depth = levels.iter().copied().max().unwrap_or(0);
    let mut by_cycle: Vec<Vec<usize>> = vec![Vec::new(); depth];
    for (node, level) in levels.iter().enumerate() {
        by_cycle[level - 1].push(node);
    }

    let mats = geometry.mats();
    let mut next_row = vec![0usize; mats];
    let mut cursor = 0usize;
    let mut node_addr = vec![Address::default(); netlist.nodes.len()];
    let mut node_cycle = vec![0usize; netlist.nodes.len()];
    let mut cycles = Vec::with_capacity(depth);

    for (cycle, nodes) in by_cycle.iter().enumerate() {
        if nodes.len() > capacity {
            return Err(CompileError::CapacityExceeded { cycle, needed: nodes.len(), capacity });
        }
        let mut placed = Vec::with_capacity(nodes.len());
        let mut pending = nodes.iter().copied().peekable();
        let mut visited = 0;
        while pending.peek().is_some() {
            if visited == mats {
                let available = placed.len();
                return Err(CompileError::CapacityExceeded { cycle, needed: nodes.len(), capacity: available });
            }
            let order = cursor % mats;
            cursor += 1;
            visited += 1;
            let bank = order % geometry.banks;
            let mat = order / geometry.banks;
            let flat = geometry.mat_index(bank, mat);
            if next_row[flat] == geometry.mat_rows {
                continue;
            }
            let row = next_row[flat];
            next_row[flat] += 1;
            for col in 0..geometry.mat_cols {
                let Some(node) = pending.next() else { break };
                let addr = Address::new(bank, mat, row, col);
                node_addr[node] = addr;
                node_cycle[node] = cycle;
                placed.push(Placement { node, addr });
            }
        }
        cycles.push(placed);
    }

    let routes = cycles
        .iter()
        .map(|placed| {
            let set: BTreeSet<usize> = placed
                .iter()
                .flat_map(|p| netlist.nodes[p.node].sources())
                .filter_map(|s| match s {
                    Signal::Node(n) => Some(n),
                    _ => None,
                })
                .collect();
            set.into_iter().collect()
        })
        .collect();

    Ok(Schedule { netlist: netlist.clone(), geometry: *geometry, cycles, routes, node_cycle, node_addr })
}

/// Runs a schedule on the array. Node results stay in their cells; outputs
/// and inter-cycle operands are obtained with ordinary reads.
pub fn execute(schedule: &Schedule, array: &mut SlimArray, inputs: &[bool]) -> Result<Vec<bool>, CompileError> {
    let netlist = &schedule.netlist;
    if inputs.len() != netlist.inputs.len() {
        return Err(CompileError::InputCountMismatch { expected: netlist.inputs.len(), got: inputs.len() });
    }
    if *array.geometry() != schedule.geometry {
        return Err(CompileError::Array(ArrayError::InvalidGeometry("schedule was built for another geometry")));
    }
    let mut routed = vec![false; netlist.nodes.len()];
    for (placed, routes) in schedule.cycles.iter().zip(&schedule.routes) {
        for &n in routes {
            routed[n] = array.read_cell(schedule.node_addr[n])?.1;
        }
        for p in placed {
            let node = &netlist.nodes[p.node];
            let v = |s: Signal| resolve(s, inputs, &routed);
            let drive = GateDrive::reset(v(node.gates[0]), v(node.gates[1]), node.cond.is_none_or(v));
            array.primitive_at(p.addr, drive)?;
        }
    }
    netlist
        .outputs
        .iter()
        .map(|(_, s)| match *s {
            Signal::Node(n) => Ok(array.read_cell(schedule.node_addr[n])?.1),
            other => Ok(resolve(other, inputs, &[])),
        })
        .collect()
}

/// Iterates every assignment of `n` bits, little-endian by input index.
pub fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

/// Exhaustive comparison of a netlist against a reference function.
pub fn verify_equivalence<F>(netlist: &NorNetlist, oracle: F) -> Result<bool, CompileError>
where
    F: Fn(&[bool]) -> Vec<bool>,
{
    let k = netlist.inputs.len();
    if k > MAX_EXHAUSTIVE_INPUTS {
        return Err(CompileError::TooManyInputs { inputs: k });
    }
    for x in assignments(k) {
        if netlist.evaluate(&x)? != oracle(&x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Little-endian bits of `value`.
pub fn to_bits(value: u64, width: usize) -> impl Iterator<Item = bool> {
    (0..width).map(move |i| value >> i & 1 == 1)
}

pub fn from_bits(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |acc, (i, b)| acc | (*b as u64) << i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::RefreshPolicy;

    fn operands(a: u64, b: u64, w: usize) -> Vec<bool> {
        to_bits(a, w).chain(to_bits(b, w)).collect()
    }

    #[test]
    fn cell_counts() {
        let expect = [
            (Gate::Not, 1),
            (Gate::Nor, 1),
            (Gate::Or, 2),
            (Gate::Nand, 4),
            (Gate::And, 3),
            (Gate::Xor, 5),
            (Gate::Xnor, 4),
            (Gate::HalfAdder, 5),
            (Gate::FullAdder, 9),
        ];
        for (g, n) in expect {
            assert_eq!(netlist_for(g).cell_count(), n, "{g}");
        }
    }

    #[test]
    fn depths() {
        let expect = [
            (Gate::Nor, 1),
            (Gate::Or, 2),
            (Gate::And, 2),
            (Gate::Nand, 3),
            (Gate::Xor, 3),
            (Gate::Xnor, 3),
            (Gate::HalfAdder, 3),
            (Gate::FullAdder, 6),
        ];
        let geom = ArrayGeometry::default();
        for (g, d) in expect {
            let n = netlist_for(g);
            assert_eq!(n.depth(), d, "{g}");
            assert_eq!(schedule(&n, &geom).unwrap().depth(), d, "{g}");
        }
        assert_eq!(NorNetlist::default().depth(), 0);
    }

    #[test]
    fn library_truth_tables() {
        for g in Gate::ALL {
            assert!(verify_equivalence(&netlist_for(g), |x| g.truth(x)).unwrap(), "{g}");
        }
        assert!(verify_equivalence(&netlist_for(Gate::Nor), |x| vec![!(x[0] || x[1])]).unwrap());
        assert!(verify_equivalence(&netlist_for(Gate::Xnor), |x| vec![x[0] == x[1]]).unwrap());
    }

    #[test]
    fn corrupted_netlist_is_caught() {
        let mut n = netlist_for(Gate::Xor);
        n.nodes[4].gates[1] = Signal::Input(0);
        assert!(!verify_equivalence(&n, |x| Gate::Xor.truth(x)).unwrap());
    }

    #[test]
    fn too_many_inputs() {
        let n = netlist_for(Gate::Nor).replicate(11);
        assert_eq!(verify_equivalence(&n, |_| vec![]), Err(CompileError::TooManyInputs { inputs: 22 }));
    }

    #[test]
    fn unknown_gate() {
        assert_eq!(Gate::from_name("mux"), Err(CompileError::UnknownGate("mux".into())));
        assert_eq!(Gate::from_name("ha"), Ok(Gate::HalfAdder));
    }

    #[test]
    fn validation_rejects_forward_references() {
        let n = NorNetlist {
            inputs: vec!["a".into()],
            nodes: vec![Node { gates: [Signal::Node(0), Signal::Input(0)], cond: None }],
            outputs: vec![],
        };
        assert!(matches!(n.validate(), Err(CompileError::BadSource { node: 0, .. })));
        let n = NorNetlist { inputs: vec![], nodes: vec![], outputs: vec![("y".into(), Signal::Input(0))] };
        assert!(matches!(n.validate(), Err(CompileError::BadOutput { .. })));
    }

    #[test]
    fn adder_small_cases() {
        let add = build_ripple_adder(4).unwrap();
        let out = add.evaluate(&operands(2, 3, 4)).unwrap();
        assert_eq!(from_bits(&out[..4]), 5);
        assert!(!out[4]);
        let out = add.evaluate(&operands(15, 1, 4)).unwrap();
        assert_eq!(from_bits(&out[..4]), 0);
        assert!(out[4]);
        assert_eq!(build_ripple_adder(0), Err(CompileError::InvalidWidth));
        assert_eq!(build_csa_multiplier(0), Err(CompileError::InvalidWidth));
    }

    #[test]
    fn multiplier_small_cases() {
        let mul = build_csa_multiplier(4).unwrap();
        assert_eq!(mul.outputs.len(), 8);
        assert_eq!(from_bits(&mul.evaluate(&operands(3, 5, 4)).unwrap()), 15);
        assert_eq!(from_bits(&mul.evaluate(&operands(15, 15, 4)).unwrap()), 225);
    }

    #[test]
    fn multiplier_other_widths() {
        for w in 1..=3 {
            let mul = build_csa_multiplier(w).unwrap();
            for a in 0..1u64 << w {
                for b in 0..1u64 << w {
                    assert_eq!(from_bits(&mul.evaluate(&operands(a, b, w)).unwrap()), a * b, "w={w}");
                }
            }
        }
    }

    #[test]
    fn adder_with_carry_in() {
        let add = build_ripple_adder_with_carry(4).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                for c in [false, true] {
                    let mut x = operands(a, b, 4);
                    x.push(c);
                    assert_eq!(from_bits(&add.evaluate(&x).unwrap()), a + b + c as u64);
                }
            }
        }
    }

    #[test]
    fn execution_examples() {
        let geom = ArrayGeometry::default();
        let mut arr = SlimArray::new(geom, RefreshPolicy::Lazy).unwrap();
        let ha = schedule(&netlist_for(Gate::HalfAdder), &geom).unwrap();
        assert_eq!(execute(&ha, &mut arr, &[true, true]).unwrap(), [false, true]);
        let fa = schedule(&netlist_for(Gate::FullAdder), &geom).unwrap();
        assert_eq!(execute(&fa, &mut arr, &[true, true, true]).unwrap(), [true, true]);
        assert!(matches!(execute(&fa, &mut arr, &[true]), Err(CompileError::InputCountMismatch { .. })));
    }

    #[test]
    fn schedule_respects_dependencies_and_rows() {
        let geom = ArrayGeometry::default();
        let n = build_csa_multiplier(4).unwrap();
        let s = schedule(&n, &geom).unwrap();
        for (id, node) in n.nodes.iter().enumerate() {
            for src in node.sources() {
                if let Signal::Node(p) = src {
                    assert!(s.node_cycle[p] < s.node_cycle[id]);
                }
            }
        }
        let distinct: BTreeSet<_> = s.node_addr.iter().collect();
        assert_eq!(distinct.len(), n.cell_count());
        for placed in &s.cycles {
            let mut rows = alloc::collections::BTreeMap::new();
            for p in placed {
                let r = rows.entry((p.addr.bank, p.addr.mat)).or_insert(p.addr.row);
                assert_eq!(*r, p.addr.row, "one row per Mat per cycle");
            }
        }
    }

    #[test]
    fn schedule_capacity_exceeded() {
        let geom = ArrayGeometry { mats_per_bank: 1, banks: 1, ..Default::default() };
        let wide = netlist_for(Gate::Nor).replicate(9);
        assert_eq!(
            schedule(&wide, &geom).unwrap_err(),
            CompileError::CapacityExceeded { cycle: 0, needed: 9, capacity: 8 }
        );
        let deep = netlist_for(Gate::FullAdder).replicate(3);
        assert!(schedule(&deep, &geom).is_err());
    }

    #[test]
    fn replicate_evaluates_independently() {
        let n = netlist_for(Gate::Xor).replicate(3);
        assert_eq!(n.cell_count(), 15);
        assert_eq!(n.evaluate(&[true, false, true, true, false, false]).unwrap(), [true, false, false]);
    }
}
