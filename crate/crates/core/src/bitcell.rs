//! 2T-1R bitcell: one OxRAM element behind two parallel NMOS access paths.
//!
//! Logic operands are loaded on the two transistor gates. A RESET pulse on
//! `V2` reaches the OxRAM whenever either transistor conducts, so one pulse
//! evaluates `!(cond & (g1 | g2))` into the logic bit while the memory bit
//! stays inside its sense region.

use core::fmt;
use core::ops::AddAssign;

use crate::device::{apply_pulse, decode, Pulse, PulseKind, SlimLevel};

/// Gate voltage modelling a logic `1` during a logic RESET.
pub const GATE_ON_VOLTS: f64 = 10.0;
/// Gate voltage used for compliance-limited SET and refresh.
pub const GATE_COMPLIANCE_VOLTS: f64 = 4.0;

/// Upper bound on RESET pulses in a write-0 verify loop.
pub const MAX_VERIFY_PULSES: u32 = 4;

/// Counters for energy accounting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Activity {
    pub reads: u64,
    pub p1: u64,
    pub p2: u64,
    pub p3: u64,
    /// Pulses that actually changed the level.
    pub transitions: u64,
    /// Subset of `transitions` caused by refresh pulses.
    pub refresh_transitions: u64,
    /// P2 issued to an already absolute cell.
    pub p2_on_absolute: u64,
    /// P3 issued to a cell in a logic state.
    pub p3_on_logic: u64,
}

impl Activity {
    pub fn pulses(&self) -> u64 {
        self.p1 + self.p2 + self.p3
    }

    fn record(&mut self, kind: PulseKind, before: SlimLevel, changed: bool) {
        match (kind, before.is_absolute()) {
            (PulseKind::P2, true) => self.p2_on_absolute += 1,
            (PulseKind::P3, false) => self.p3_on_logic += 1,
            _ => {}
        }
        match kind {
            PulseKind::P1 => self.p1 += 1,
            PulseKind::P2 => self.p2 += 1,
            PulseKind::P3 => self.p3 += 1,
        }
        if changed {
            self.transitions += 1;
        }
    }
}

impl AddAssign for Activity {
    fn add_assign(&mut self, o: Activity) {
        self.reads += o.reads;
        self.p1 += o.p1;
        self.p2 += o.p2;
        self.p3 += o.p3;
        self.transitions += o.transitions;
        self.refresh_transitions += o.refresh_transitions;
        self.p2_on_absolute += o.p2_on_absolute;
        self.p3_on_logic += o.p3_on_logic;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Terminal {
    V1,
    V2,
}

/// Drive applied to the cell for one logic pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateDrive {
    pub g1: bool,
    pub g2: bool,
    /// Whether the programming pulse is actually asserted on `terminal`.
    pub pulse: bool,
    pub terminal: Terminal,
}

impl GateDrive {
    /// RESET on `V2` gated by the two operands.
    pub const fn reset(g1: bool, g2: bool, pulse: bool) -> GateDrive {
        GateDrive { g1, g2, pulse, terminal: Terminal::V2 }
    }

    pub const fn fires(&self) -> bool {
        self.pulse && (self.g1 || self.g2)
    }

    /// `(V_G1, V_G2)` in volts.
    pub fn gate_volts(&self) -> (f64, f64) {
        let v = |g: bool| if g { GATE_ON_VOLTS } else { 0.0 };
        (v(self.g1), v(self.g2))
    }

    /// Refresh drive: both gates at compliance voltage, P2 on `V1`.
    pub const REFRESH_VOLTS: (f64, f64) = (GATE_COMPLIANCE_VOLTS, GATE_COMPLIANCE_VOLTS);
}

/// Single-cell program schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CellOp {
    NotA,
    NotB,
    Or,
    Nor,
    And,
    Nand,
}

impl CellOp {
    pub const ALL: [CellOp; 6] = [CellOp::NotA, CellOp::NotB, CellOp::Or, CellOp::Nor, CellOp::And, CellOp::Nand];

    /// Gate and pulse-condition assignment. Complements of `a` and `b` come
    /// from the periphery.
    pub const fn drive(self, a: bool, b: bool) -> GateDrive {
        match self {
            CellOp::NotA => GateDrive::reset(a, a, true),
            CellOp::NotB => GateDrive::reset(b, b, true),
            CellOp::Or => GateDrive::reset(!a, !a, !b),
            CellOp::Nor => GateDrive::reset(a, b, true),
            CellOp::And => GateDrive::reset(!a, !b, true),
            CellOp::Nand => GateDrive::reset(a, a, b),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            CellOp::NotA => "NOT_A",
            CellOp::NotB => "NOT_B",
            CellOp::Or => "OR",
            CellOp::Nor => "NOR",
            CellOp::And => "AND",
            CellOp::Nand => "NAND",
        }
    }

    pub fn from_name(name: &str) -> Option<CellOp> {
        CellOp::ALL.into_iter().find(|op| op.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for CellOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitcellError {
    /// Logic was requested on a cell in a logic state; refresh it first.
    NotAbsolute(SlimLevel),
    /// The logic drive must put the RESET pulse on `V2`.
    WrongTerminal,
    /// Write-0 verify loop did not converge.
    VerifyFailure { pulses: u32, state: SlimLevel },
}

impl fmt::Display for BitcellError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitcellError::NotAbsolute(s) => write!(f, "logic operation on non-absolute state '{s}'"),
            BitcellError::WrongTerminal => f.write_str("logic pulse must be applied on V2"),
            BitcellError::VerifyFailure { pulses, state } => {
                write!(f, "write verify failed after {pulses} pulses (state '{state}')")
            }
        }
    }
}

impl core::error::Error for BitcellError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bitcell {
    pub state: SlimLevel,
}

impl Default for Bitcell {
    fn default() -> Self {
        Bitcell { state: SlimLevel::S01 }
    }
}

impl Bitcell {
    pub const fn new(state: SlimLevel) -> Bitcell {
        Bitcell { state }
    }

    /// Applies one pulse and records it.
    pub fn pulse(&mut self, kind: PulseKind, act: &mut Activity) {
        let next = apply_pulse(self.state, Pulse::new(kind));
        act.record(kind, self.state, next != self.state);
        self.state = next;
    }

    fn sense(&self, act: &mut Activity) -> SlimLevel {
        act.reads += 1;
        self.state
    }

    /// One pulse of SLIM logic. Returns the resulting logic bit.
    pub fn slim_primitive(&mut self, drive: GateDrive, act: &mut Activity) -> Result<bool, BitcellError> {
        if drive.terminal != Terminal::V2 {
            return Err(BitcellError::WrongTerminal);
        }
        if !self.state.is_absolute() {
            return Err(BitcellError::NotAbsolute(self.state));
        }
        if drive.fires() {
            self.pulse(PulseKind::P3, act);
        }
        Ok(self.state.logic_bit())
    }

    pub fn slim_nor(&mut self, a: bool, b: bool, act: &mut Activity) -> Result<bool, BitcellError> {
        self.slim_primitive(CellOp::Nor.drive(a, b), act)
    }

    pub fn cell_op(&mut self, op: CellOp, a: bool, b: bool, act: &mut Activity) -> Result<bool, BitcellError> {
        self.slim_primitive(op.drive(a, b), act)
    }

    /// Program the absolute state for `bit`, with read-verify.
    pub fn memory_write(&mut self, bit: bool, act: &mut Activity) -> Result<(), BitcellError> {
        let target = SlimLevel::absolute(bit);
        let current = self.sense(act);
        if current == target {
            return Ok(());
        }
        if bit {
            let kind = if current == SlimLevel::S10 { PulseKind::P2 } else { PulseKind::P1 };
            self.pulse(kind, act);
            return Ok(());
        }
        if current == SlimLevel::S00 {
            self.pulse(PulseKind::P2, act);
            return Ok(());
        }
        let mut pulses = 0;
        while self.sense(act) != target {
            if pulses == MAX_VERIFY_PULSES {
                return Err(BitcellError::VerifyFailure { pulses, state: self.state });
            }
            self.pulse(PulseKind::P3, act);
            pulses += 1;
        }
        Ok(())
    }

    /// P2 without the preceding read. Caller has already sensed the cell.
    pub(crate) fn restore(&mut self, act: &mut Activity) -> bool {
        if self.state.is_absolute() {
            return false;
        }
        let before = act.transitions;
        self.pulse(PulseKind::P2, act);
        act.refresh_transitions += act.transitions - before;
        true
    }

    /// Read, then P2 if the cell holds a logic `0`. Returns whether a pulse was issued.
    pub fn refresh(&mut self, act: &mut Activity) -> bool {
        self.sense(act);
        self.restore(act)
    }

    /// `(memory_bit, logic_bit)`; one read event.
    pub fn read(&self, act: &mut Activity) -> (bool, bool) {
        decode(self.sense(act))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SlimLevel::*;

    fn op_oracle(op: CellOp, a: bool, b: bool) -> bool {
        match op {
            CellOp::NotA => !a,
            CellOp::NotB => !b,
            CellOp::Or => a || b,
            CellOp::Nor => !(a || b),
            CellOp::And => a && b,
            CellOp::Nand => !(a && b),
        }
    }

    const BITS: [bool; 2] = [false, true];

    #[test]
    fn primitive_examples() {
        let mut act = Activity::default();
        let mut c = Bitcell::new(S11);
        assert_eq!(c.slim_primitive(GateDrive::reset(false, false, true), &mut act), Ok(true));
        assert_eq!(c.state, S11);

        let mut c = Bitcell::new(S01);
        assert_eq!(c.slim_primitive(GateDrive::reset(true, false, true), &mut act), Ok(false));
        assert_eq!(c.state, S00);

        let mut c = Bitcell::new(S11);
        c.slim_primitive(GateDrive::reset(true, true, true), &mut act).unwrap();
        assert_eq!(c.state, S10);
        assert!(c.state.memory_bit());

        let mut c = Bitcell::new(S01);
        assert_eq!(c.slim_primitive(GateDrive::reset(true, true, false), &mut act), Ok(true));
        assert_eq!(c.state, S01);
    }

    #[test]
    fn primitive_rejects_logic_states_and_v1() {
        let mut act = Activity::default();
        for s in [S10, S00] {
            let mut c = Bitcell::new(s);
            assert_eq!(c.slim_nor(false, false, &mut act), Err(BitcellError::NotAbsolute(s)));
        }
        let mut c = Bitcell::new(S11);
        let drive = GateDrive { terminal: Terminal::V1, ..GateDrive::reset(true, true, true) };
        assert_eq!(c.slim_primitive(drive, &mut act), Err(BitcellError::WrongTerminal));
        assert_eq!(act, Activity::default());
    }

    #[test]
    fn nor_examples() {
        let mut act = Activity::default();
        for (a, b, want) in [(false, false, true), (false, true, false), (true, true, false)] {
            let mut c = Bitcell::new(S11);
            assert_eq!(c.slim_nor(a, b, &mut act), Ok(want));
        }
    }

    #[test]
    fn cell_op_examples() {
        let mut act = Activity::default();
        let mut c = Bitcell::new(S11);
        assert_eq!(c.cell_op(CellOp::And, true, true, &mut act), Ok(true));
        assert_eq!(act.pulses(), 0);
        let mut c = Bitcell::new(S11);
        assert_eq!(c.cell_op(CellOp::Nand, true, true, &mut act), Ok(false));
        assert_eq!(c.state, S10);
        let mut c = Bitcell::new(S01);
        assert_eq!(c.cell_op(CellOp::Or, false, false, &mut act), Ok(false));
    }

    #[test]
    fn cell_ops_match_boolean_oracle_and_preserve_memory() {
        for op in CellOp::ALL {
            for init in SlimLevel::ABSOLUTE {
                for a in BITS {
                    for b in BITS {
                        let mut act = Activity::default();
                        let mut c = Bitcell::new(init);
                        let out = c.cell_op(op, a, b, &mut act).unwrap();
                        assert_eq!(out, op_oracle(op, a, b), "{op} a={a} b={b} from {init}");
                        assert_eq!(c.state.logic_bit(), out);
                        assert_eq!(c.state.memory_bit(), init.memory_bit());
                        assert!(act.pulses() <= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_exhaustive_drive_space() {
        for init in SlimLevel::ABSOLUTE {
            for g1 in BITS {
                for g2 in BITS {
                    for pulse in BITS {
                        let mut act = Activity::default();
                        let mut c = Bitcell::new(init);
                        let out = c.slim_primitive(GateDrive::reset(g1, g2, pulse), &mut act).unwrap();
                        assert_eq!(out, !(pulse && (g1 || g2)));
                        assert_eq!(c.state.memory_bit(), init.memory_bit());
                    }
                }
            }
        }
    }

    #[test]
    fn write_examples() {
        let mut act = Activity::default();
        let mut c = Bitcell::new(S11);
        c.memory_write(false, &mut act).unwrap();
        assert_eq!(c.state, S01);
        assert_eq!(act.p3, 2);

        let mut act = Activity::default();
        let mut c = Bitcell::new(S00);
        c.memory_write(true, &mut act).unwrap();
        assert_eq!((c.state, act.p1, act.pulses()), (S11, 1, 1));

        let mut act = Activity::default();
        let mut c = Bitcell::new(S00);
        c.memory_write(false, &mut act).unwrap();
        assert_eq!((c.state, act.p2, act.pulses()), (S01, 1, 1));

        let mut act = Activity::default();
        let mut c = Bitcell::new(S11);
        c.memory_write(true, &mut act).unwrap();
        assert_eq!((c.state, act.pulses()), (S11, 0));

        let mut act = Activity::default();
        let mut c = Bitcell::new(S10);
        c.memory_write(true, &mut act).unwrap();
        assert_eq!((c.state, act.p2), (S11, 1));
    }

    #[test]
    fn write_then_read_from_every_state() {
        for init in SlimLevel::ALL {
            for bit in BITS {
                let mut act = Activity::default();
                let mut c = Bitcell::new(init);
                c.memory_write(bit, &mut act).unwrap();
                assert!(act.pulses() <= 2);
                let once = c;
                c.memory_write(bit, &mut act).unwrap();
                assert_eq!(c, once);
                assert_eq!(c.read(&mut act), (bit, true));
            }
        }
    }

    #[test]
    fn refresh_examples() {
        for (init, want, pulses) in [(S10, S11, 1), (S00, S01, 1), (S11, S11, 0), (S01, S01, 0)] {
            let mut act = Activity::default();
            let mut c = Bitcell::new(init);
            c.refresh(&mut act);
            assert_eq!(c.state, want);
            assert_eq!(act.p2, pulses);
            assert_eq!(act.refresh_transitions, pulses);
            let again = c;
            c.refresh(&mut act);
            assert_eq!(c, again);
        }
    }

    #[test]
    fn read_counts_one_event() {
        let mut act = Activity::default();
        assert_eq!(Bitcell::new(S11).read(&mut act), (true, true));
        assert_eq!(Bitcell::new(S10).read(&mut act), (true, false));
        assert_eq!(Bitcell::new(S00).read(&mut act), (false, false));
        assert_eq!(act.reads, 3);
    }

    #[test]
    fn op_names_round_trip() {
        for op in CellOp::ALL {
            assert_eq!(CellOp::from_name(op.name()), Some(op));
        }
        assert_eq!(CellOp::from_name("xor"), None);
    }
}
