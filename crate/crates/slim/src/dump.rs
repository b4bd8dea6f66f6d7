//! Text dump of the array state.
//!
//! ```text
//! slim-array banks=16 mats_per_bank=32 mat_rows=8 mat_cols=8
//! 0 0 00 01 01 11 ... (one symbol per cell, row-major)
//! ```
//!
//! After the header there is one line per Mat: bank, Mat, the Tag-byte in
//! hex, then every cell state as `11`, `10`, `01` or `00`.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, ensure, Context, Result};
use slim_core::array::{ArrayGeometry, RefreshPolicy, SlimArray};
use slim_core::device::SlimLevel;

const MAGIC: &str = "slim-array";

pub fn save(array: &SlimArray) -> String {
    let g = *array.geometry();
    let mut out = format!(
        "{MAGIC} banks={} mats_per_bank={} mat_rows={} mat_cols={}\n",
        g.banks, g.mats_per_bank, g.mat_rows, g.mat_cols
    );
    let states: Vec<SlimLevel> = array.states().collect();
    for (m, cells) in states.chunks(g.cells_per_mat()).enumerate() {
        let (bank, mat) = (m / g.mats_per_bank, m % g.mats_per_bank);
        write!(out, "{bank} {mat} {:02x}", array.tag(bank, mat).expect("in bounds")).unwrap();
        for s in cells {
            write!(out, " {}", s.label()).unwrap();
        }
        out.push('\n');
    }
    out
}

fn header_field(parts: &[&str], key: &str) -> Result<usize> {
    let prefix = format!("{key}=");
    let v = parts.iter().find_map(|p| p.strip_prefix(&prefix)).ok_or_else(|| anyhow!("dump header lacks `{key}`"))?;
    v.parse().with_context(|| format!("bad `{key}` in dump header"))
}

pub fn load(text: &str, policy: RefreshPolicy) -> Result<SlimArray> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| anyhow!("empty array dump"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    ensure!(parts.first() == Some(&MAGIC), "not an array dump (missing `{MAGIC}` header)");
    let g = ArrayGeometry {
        banks: header_field(&parts, "banks")?,
        mats_per_bank: header_field(&parts, "mats_per_bank")?,
        mat_rows: header_field(&parts, "mat_rows")?,
        mat_cols: header_field(&parts, "mat_cols")?,
    };
    let mut array = SlimArray::new(g, policy).map_err(|e| anyhow!("{e}"))?;
    let mut seen = vec![false; g.mats()];
    for (n, line) in lines {
        let ctx = || format!("dump line {}", n + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        ensure!(fields.len() == 3 + g.cells_per_mat(), "{}: expected {} cell states", ctx(), g.cells_per_mat());
        let bank: usize = fields[0].parse().with_context(ctx)?;
        let mat: usize = fields[1].parse().with_context(ctx)?;
        ensure!(bank < g.banks && mat < g.mats_per_bank, "{}: Mat {bank}.{mat} out of range", ctx());
        let index = g.mat_index(bank, mat);
        ensure!(!seen[index], "{}: Mat {bank}.{mat} listed twice", ctx());
        seen[index] = true;
        let tag = u8::from_str_radix(fields[2], 16).with_context(ctx)?;
        array.set_tag(bank, mat, tag).map_err(|e| anyhow!("{}: {e}", ctx()))?;
        for (i, sym) in fields[3..].iter().enumerate() {
            let state = SlimLevel::from_label(sym).ok_or_else(|| anyhow!("{}: bad state `{sym}`", ctx()))?;
            let addr = g.address_of(index * g.cells_per_mat() + i);
            array.set_state(addr, state).map_err(|e| anyhow!("{e}"))?;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        bail!("dump lacks Mat {}.{}", missing / g.mats_per_bank, missing % g.mats_per_bank);
    }
    Ok(array)
}

#[cfg(test)]
mod tests {
    use super::*;
    use slim_core::array::Address;
    use slim_core::bitcell::CellOp;

    fn small() -> ArrayGeometry {
        ArrayGeometry { mat_rows: 4, mat_cols: 4, mats_per_bank: 2, banks: 2 }
    }

    #[test]
    fn round_trip_preserves_states_and_tags() {
        let mut a = SlimArray::new(small(), RefreshPolicy::Lazy).unwrap();
        a.memory_write(Address::new(1, 0, 2, 3), true).unwrap();
        a.logic_op_at(Address::new(0, 1, 1, 1), CellOp::Nor, false, true).unwrap();
        let text = save(&a);
        let b = load(&text, RefreshPolicy::Lazy).unwrap();
        assert_eq!(save(&b), text);
        assert_eq!(b.states().collect::<Vec<_>>(), a.states().collect::<Vec<_>>());
        assert_eq!(b.tag(0, 1).unwrap(), a.tag(0, 1).unwrap());
    }

    #[test]
    fn rejects_truncated_dump() {
        let a = SlimArray::new(small(), RefreshPolicy::Lazy).unwrap();
        let text = save(&a);
        let cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(load(&cut, RefreshPolicy::Lazy).unwrap_err().to_string().contains("lacks Mat"));
        assert!(load("hello", RefreshPolicy::Lazy).is_err());
    }
}
