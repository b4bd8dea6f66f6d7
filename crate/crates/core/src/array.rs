//! Banked SLIM array and its controller.
//!
//! The array is split into banks of 8x8 Mats. Every logic command first senses
//! the target cell and refreshes it if it still holds a logic `0`, so logic
//! is legal on any starting state. Each Mat carries a Tag-byte with one bit per
//! row; a set bit means the row's last operation was logic and the row may hold
//! non-absolute states. Periodic row refresh is driven by those tags.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitcell::{Activity, Bitcell, BitcellError, CellOp, GateDrive};
use crate::device::SlimLevel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArrayGeometry {
    pub mat_rows: usize,
    pub mat_cols: usize,
    pub mats_per_bank: usize,
    pub banks: usize,
}

impl Default for ArrayGeometry {
    /// 4 kB: 16 banks of 32 Mats, each Mat 8x8.
    fn default() -> Self {
        ArrayGeometry { mat_rows: 8, mat_cols: 8, mats_per_bank: 32, banks: 16 }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<(), ArrayError> {
        if self.mat_rows == 0 || self.mat_cols == 0 || self.mats_per_bank == 0 || self.banks == 0 {
            return Err(ArrayError::InvalidGeometry("all dimensions must be non-zero"));
        }
        if self.mat_rows > 8 {
            return Err(ArrayError::InvalidGeometry("a Tag-byte covers at most 8 rows"));
        }
        if self.mat_cols > 64 {
            return Err(ArrayError::InvalidGeometry("a Mat row is at most 64 bits wide"));
        }
        Ok(())
    }

    pub const fn mats(&self) -> usize {
        self.mats_per_bank * self.banks
    }

    pub const fn cells_per_mat(&self) -> usize {
        self.mat_rows * self.mat_cols
    }

    pub const fn total_cells(&self) -> usize {
        self.mats() * self.cells_per_mat()
    }

    /// Single-bit logic ops per cycle: one row in every Mat.
    pub const fn parallel_bits(&self) -> usize {
        self.mats() * self.mat_cols
    }

    pub fn contains(&self, a: Address) -> bool {
        a.bank < self.banks && a.mat < self.mats_per_bank && a.row < self.mat_rows && a.col < self.mat_cols
    }

    /// Flat Mat index, bank-major.
    pub const fn mat_index(&self, bank: usize, mat: usize) -> usize {
        bank * self.mats_per_bank + mat
    }

    pub fn cell_index(&self, a: Address) -> Result<usize, ArrayError> {
        if !self.contains(a) {
            return Err(ArrayError::AddressOutOfBounds(a));
        }
        Ok(self.mat_index(a.bank, a.mat) * self.cells_per_mat() + a.row * self.mat_cols + a.col)
    }

    pub fn address_of(&self, index: usize) -> Address {
        let per_mat = self.cells_per_mat();
        let mat_flat = index / per_mat;
        let within = index % per_mat;
        Address {
            bank: mat_flat / self.mats_per_bank,
            mat: mat_flat % self.mats_per_bank,
            row: within / self.mat_cols,
            col: within % self.mat_cols,
        }
    }

    fn row_mask(&self) -> u8 {
        if self.mat_rows == 8 {
            0xFF
        } else {
            (1u8 << self.mat_rows) - 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Address {
    pub bank: usize,
    pub mat: usize,
    pub row: usize,
    pub col: usize,
}

impl Address {
    pub const fn new(bank: usize, mat: usize, row: usize, col: usize) -> Address {
        Address { bank, mat, row, col }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}.{}", self.bank, self.mat, self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RefreshPolicy {
    /// Refresh a Mat row-by-row once every row of it has been used for logic.
    #[default]
    Lazy,
    /// Refresh every dirty row on each tick.
    Eager,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ControllerMode {
    Memory,
    Logic,
    Read,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrayError {
    AddressOutOfBounds(Address),
    WordTooWide { width: usize, cols: usize },
    InvalidGeometry(&'static str),
    InvalidWidth,
    Bitcell(BitcellError),
}

impl fmt::Display for ArrayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrayError::AddressOutOfBounds(a) => write!(f, "address {a} out of bounds"),
            ArrayError::WordTooWide { width, cols } => {
                write!(f, "word of {width} bits does not fit a {cols}-column Mat row")
            }
            ArrayError::InvalidGeometry(why) => write!(f, "invalid geometry: {why}"),
            ArrayError::InvalidWidth => {
                f.write_str("operation bit width and pipeline depth must be >= 1 and fit the array")
            }
            ArrayError::Bitcell(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ArrayError {}

impl From<BitcellError> for ArrayError {
    fn from(e: BitcellError) -> Self {
        ArrayError::Bitcell(e)
    }
}

/// Both planes of a word read in one pass. Bit `i` is column `base.col + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Word {
    pub memory: u64,
    pub logic: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlimArray {
    geometry: ArrayGeometry,
    cells: Vec<Bitcell>,
    tags: Vec<u8>,
    policy: RefreshPolicy,
    activity: Activity,
    mode_counts: [u64; 3],
    last_mode: Option<ControllerMode>,
}

impl SlimArray {
    /// All cells start at `01` (memory `0`, refreshed).
    pub fn new(geometry: ArrayGeometry, policy: RefreshPolicy) -> Result<SlimArray, ArrayError> {
        geometry.validate()?;
        Ok(SlimArray {
            geometry,
            cells: vec![Bitcell::default(); geometry.total_cells()],
            tags: vec![0; geometry.mats()],
            policy,
            activity: Activity::default(),
            mode_counts: [0; 3],
            last_mode: None,
        })
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn policy(&self) -> RefreshPolicy {
        self.policy
    }

    pub fn set_policy(&mut self, policy: RefreshPolicy) {
        self.policy = policy;
    }

    pub fn activity(&self) -> Activity {
        self.activity
    }

    /// Returns the accumulated activity and resets the counters.
    pub fn take_activity(&mut self) -> Activity {
        core::mem::take(&mut self.activity)
    }

    pub fn last_mode(&self) -> Option<ControllerMode> {
        self.last_mode
    }

    /// Commands issued per mode: `[memory, logic, read]`.
    pub fn mode_counts(&self) -> [u64; 3] {
        self.mode_counts
    }

    fn enter(&mut self, mode: ControllerMode) {
        self.mode_counts[mode as usize] += 1;
        self.last_mode = Some(mode);
    }

    pub fn state(&self, addr: Address) -> Result<SlimLevel, ArrayError> {
        Ok(self.cells[self.geometry.cell_index(addr)?].state)
    }

    /// Direct state override, for loading dumps and seeding tests. Not a
    /// controller command; no activity is recorded.
    pub fn set_state(&mut self, addr: Address, state: SlimLevel) -> Result<(), ArrayError> {
        let i = self.geometry.cell_index(addr)?;
        self.cells[i].state = state;
        Ok(())
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = SlimLevel> + '_ {
        self.cells.iter().map(|c| c.state)
    }

    pub fn memory_plane(&self) -> Vec<bool> {
        self.states().map(SlimLevel::memory_bit).collect()
    }

    pub fn tag(&self, bank: usize, mat: usize) -> Result<u8, ArrayError> {
        self.check_mat(bank, mat)?;
        Ok(self.tags[self.geometry.mat_index(bank, mat)])
    }

    pub fn set_tag(&mut self, bank: usize, mat: usize, tag: u8) -> Result<(), ArrayError> {
        self.check_mat(bank, mat)?;
        let i = self.geometry.mat_index(bank, mat);
        self.tags[i] = tag & self.geometry.row_mask();
        Ok(())
    }

    fn check_mat(&self, bank: usize, mat: usize) -> Result<(), ArrayError> {
        if self.geometry.contains(Address::new(bank, mat, 0, 0)) {
            Ok(())
        } else {
            Err(ArrayError::AddressOutOfBounds(Address::new(bank, mat, 0, 0)))
        }
    }

    /// Whether every row tagged clean holds only absolute states.
    pub fn tags_sound(&self) -> bool {
        let g = self.geometry;
        self.cells.chunks(g.cells_per_mat()).zip(&self.tags).all(|(mat, tag)| {
            mat.chunks(g.mat_cols)
                .enumerate()
                .all(|(row, cells)| tag & (1 << row) != 0 || cells.iter().all(|c| c.state.is_absolute()))
        })
    }

    pub fn read_cell(&mut self, addr: Address) -> Result<(bool, bool), ArrayError> {
        let i = self.geometry.cell_index(addr)?;
        self.enter(ControllerMode::Read);
        Ok(self.cells[i].read(&mut self.activity))
    }

    pub fn memory_write(&mut self, addr: Address, bit: bool) -> Result<(), ArrayError> {
        let i = self.geometry.cell_index(addr)?;
        self.enter(ControllerMode::Memory);
        self.cells[i].memory_write(bit, &mut self.activity)?;
        Ok(())
    }

    /// Logic with built-in refresh: sense, restore if needed, then pulse.
    pub fn primitive_at(&mut self, addr: Address, drive: GateDrive) -> Result<bool, ArrayError> {
        let i = self.geometry.cell_index(addr)?;
        self.enter(ControllerMode::Logic);
        let cell = &mut self.cells[i];
        cell.refresh(&mut self.activity);
        let out = cell.slim_primitive(drive, &mut self.activity)?;
        self.tags[self.geometry.mat_index(addr.bank, addr.mat)] |= 1 << addr.row;
        Ok(out)
    }

    pub fn logic_op_at(&mut self, addr: Address, op: CellOp, a: bool, b: bool) -> Result<bool, ArrayError> {
        self.primitive_at(addr, op.drive(a, b))
    }

    fn word_span(&self, base: Address, width: usize) -> Result<(), ArrayError> {
        if width > self.geometry.mat_cols {
            return Err(ArrayError::WordTooWide { width, cols: self.geometry.mat_cols });
        }
        self.geometry.cell_index(base)?;
        if width > 0 {
            let last = Address { col: base.col + width - 1, ..base };
            self.geometry.cell_index(last)?;
        }
        Ok(())
    }

    /// Writes the low `width` bits of `value` into one Mat row starting at `base`.
    pub fn mem_write_word(&mut self, base: Address, value: u64, width: usize) -> Result<(), ArrayError> {
        self.word_span(base, width)?;
        for i in 0..width {
            self.memory_write(Address { col: base.col + i, ..base }, value >> i & 1 == 1)?;
        }
        Ok(())
    }

    pub fn read_word(&mut self, base: Address, width: usize) -> Result<Word, ArrayError> {
        self.word_span(base, width)?;
        let mut word = Word { memory: 0, logic: 0 };
        for i in 0..width {
            let (m, l) = self.read_cell(Address { col: base.col + i, ..base })?;
            word.memory |= (m as u64) << i;
            word.logic |= (l as u64) << i;
        }
        Ok(word)
    }

    /// Refreshes every cell of a row and clears its tag bit. Returns P2 pulses issued.
    pub fn refresh_row(&mut self, bank: usize, mat: usize, row: usize) -> Result<usize, ArrayError> {
        let base = Address::new(bank, mat, row, 0);
        let start = self.geometry.cell_index(base)?;
        self.enter(ControllerMode::Logic);
        let mut pulses = 0;
        for cell in &mut self.cells[start..start + self.geometry.mat_cols] {
            pulses += cell.refresh(&mut self.activity) as usize;
        }
        self.tags[self.geometry.mat_index(bank, mat)] &= !(1 << row);
        Ok(pulses)
    }

    /// Applies the refresh policy to every Mat. Returns the number of rows
    /// refreshed, one row per cycle.
    pub fn refresh_policy_tick(&mut self) -> usize {
        let g = self.geometry;
        let full = g.row_mask();
        let mut rows = 0;
        for bank in 0..g.banks {
            for mat in 0..g.mats_per_bank {
                let tag = self.tags[g.mat_index(bank, mat)];
                let due = match self.policy {
                    RefreshPolicy::Lazy => tag == full,
                    RefreshPolicy::Eager => tag != 0,
                };
                if !due {
                    continue;
                }
                for row in (0..g.mat_rows).filter(|r| tag & (1 << r) != 0) {
                    self.refresh_row(bank, mat, row).expect("in bounds");
                    rows += 1;
                }
            }
        }
        rows
    }
}

/// Maximum concurrent operations of `op_bit_width` bits when at most
/// `pipeline_depth` operations share the pipeline.
pub fn parallel_capacity(
    geometry: &ArrayGeometry,
    op_bit_width: usize,
    pipeline_depth: usize,
) -> Result<usize, ArrayError> {
    geometry.validate()?;
    let bits = geometry.parallel_bits();
    if op_bit_width == 0 || pipeline_depth == 0 || op_bit_width > bits {
        return Err(ArrayError::InvalidWidth);
    }
    Ok((bits / op_bit_width / pipeline_depth).max(1))
}
