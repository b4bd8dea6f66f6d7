//! `key = value` configuration files.
//!
//! A file either lists every key, or starts from the shipped defaults with
//! `base = default` and overrides some of them. Unknown keys and missing
//! keys are errors that name the key.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use slim_core::array::RefreshPolicy;
use slim_core::device::AnalogConfig;
use slim_core::perf::{CpuOp, CpuPerfParams, EventConvention, OpCost, SlimPerfParams};

/// The shipped default configuration file.
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.cfg");

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    pub analog: AnalogConfig,
    pub refresh: RefreshPolicy,
    pub events: EventConvention,
    pub slim: SlimPerfParams,
    pub cpu: CpuPerfParams,
}

enum Field<'a> {
    Real(&'a mut f64),
    Count(&'a mut usize),
    Seed(&'a mut u64),
    Refresh(&'a mut RefreshPolicy),
    Events(&'a mut EventConvention),
}

pub fn parse_refresh(s: &str) -> Result<RefreshPolicy> {
    match s {
        "lazy" => Ok(RefreshPolicy::Lazy),
        "eager" => Ok(RefreshPolicy::Eager),
        _ => bail!("unknown refresh policy `{s}` (expected lazy or eager)"),
    }
}

pub fn refresh_name(p: RefreshPolicy) -> &'static str {
    match p {
        RefreshPolicy::Lazy => "lazy",
        RefreshPolicy::Eager => "eager",
    }
}

pub fn parse_events(s: &str) -> Result<EventConvention> {
    match s {
        "exclude-refresh" => Ok(EventConvention::ExcludeRefresh),
        "include-refresh" => Ok(EventConvention::IncludeRefresh),
        _ => bail!("unknown event convention `{s}` (expected exclude-refresh or include-refresh)"),
    }
}

pub fn events_name(e: EventConvention) -> &'static str {
    match e {
        EventConvention::ExcludeRefresh => "exclude-refresh",
        EventConvention::IncludeRefresh => "include-refresh",
    }
}

const BAND_KEYS: [&str; 4] = ["band_center_0", "band_center_1", "band_center_2", "band_center_3"];
const THRESHOLD_KEYS: [&str; 3] = ["threshold_1", "threshold_2", "threshold_3"];
const SIGMA_KEYS: [&str; 4] = ["sigma_0", "sigma_1", "sigma_2", "sigma_3"];

impl Config {
    fn fields(&mut self) -> Vec<(&'static str, Field<'_>)> {
        let Config { analog, refresh, events, slim, cpu } = self;
        let mut out = Vec::new();
        for (k, v) in BAND_KEYS.iter().zip(analog.band_centers.iter_mut()) {
            out.push((*k, Field::Real(v)));
        }
        for (k, v) in THRESHOLD_KEYS.iter().zip(analog.thresholds.iter_mut()) {
            out.push((*k, Field::Real(v)));
        }
        for (k, v) in SIGMA_KEYS.iter().zip(analog.noise_sigma.iter_mut()) {
            out.push((*k, Field::Real(v)));
        }
        out.push(("seed", Field::Seed(&mut analog.seed)));
        out.push(("refresh", Field::Refresh(refresh)));
        out.push(("events", Field::Events(events)));
        let g = &mut slim.geometry;
        out.push(("array.mat_rows", Field::Count(&mut g.mat_rows)));
        out.push(("array.mat_cols", Field::Count(&mut g.mat_cols)));
        out.push(("array.mats_per_bank", Field::Count(&mut g.mats_per_bank)));
        out.push(("array.banks", Field::Count(&mut g.banks)));
        out.push(("slim.switching_energy_pj", Field::Real(&mut slim.switching_energy_pj)));
        out.push(("slim.read_energy_pj", Field::Real(&mut slim.read_energy_pj)));
        out.push(("slim.switching_latency_s", Field::Real(&mut slim.switching_latency_s)));
        out.push(("slim.op_bit_width", Field::Count(&mut slim.op_bit_width)));
        out.push(("slim.pipeline_depth", Field::Count(&mut slim.pipeline_depth)));
        out.push(("slim.bus_width_bits", Field::Count(&mut slim.bus_width_bits)));
        out.push(("slim.result_bits", Field::Count(&mut slim.result_bits)));
        out.push(("cpu.clock_hz", Field::Real(&mut cpu.clock_hz)));
        for (op, cost) in CpuOp::ALL.iter().zip(cpu.ops.iter_mut()) {
            let cost = cost.get_or_insert(OpCost { cycles: 0.0, energy_pj: 0.0 });
            out.push((op.cycles_key(), Field::Real(&mut cost.cycles)));
            out.push((op.energy_key(), Field::Real(&mut cost.energy_pj)));
        }
        out.push(("cpu.bus_width_bits", Field::Count(&mut cpu.bus_width_bits)));
        out.push(("cpu.data_bits", Field::Count(&mut cpu.data_bits)));
        out.push(("cpu.dram_transfer_energy_pj", Field::Real(&mut cpu.dram_transfer_energy_pj)));
        out.push(("cpu.dram_transfer_latency_s", Field::Real(&mut cpu.dram_transfer_latency_s)));
        out.push(("cpu.miss_rate", Field::Real(&mut cpu.miss_rate)));
        out.push(("cpu.miss_penalty_cycles", Field::Real(&mut cpu.miss_penalty_cycles)));
        out.push(("cpu.miss_penalty_energy_pj", Field::Real(&mut cpu.miss_penalty_energy_pj)));
        out
    }

    /// Every recognised key, in file order.
    pub fn keys() -> Vec<&'static str> {
        Config::default().fields().into_iter().map(|(k, _)| k).collect()
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", n + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                bail!("line {}: duplicate key `{k}`", n + 1);
            }
        }
        let complete = match entries.remove("base").as_deref() {
            None | Some("empty") => true,
            Some("default") => false,
            Some(other) => bail!("unknown base `{other}` (expected default or empty)"),
        };
        let mut cfg = Config::default();
        for (key, field) in cfg.fields() {
            let Some(value) = entries.remove(key) else {
                if complete {
                    bail!("missing configuration key `{key}`");
                }
                continue;
            };
            let bad = || format!("invalid value `{value}` for `{key}`");
            match field {
                Field::Real(x) => *x = value.parse().with_context(bad)?,
                Field::Count(x) => *x = value.parse().with_context(bad)?,
                Field::Seed(x) => *x = value.parse().with_context(bad)?,
                Field::Refresh(x) => *x = parse_refresh(&value).with_context(bad)?,
                Field::Events(x) => *x = parse_events(&value).with_context(bad)?,
            }
        }
        if let Some(key) = entries.keys().next() {
            bail!("unknown configuration key `{key}`");
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.analog.validate().map_err(|e| anyhow!("{e}"))?;
        self.slim.validate().map_err(|e| anyhow!("{e}"))?;
        self.slim.geometry.validate().map_err(|e| anyhow!("{e}"))?;
        self.cpu.validate().map_err(|e| anyhow!("{e}"))?;
        Ok(())
    }

    /// `default` selects the shipped file; anything else is a path.
    pub fn load(source: Option<&str>) -> Result<Config> {
        match source {
            None | Some("default") => Config::parse(DEFAULT_CONFIG).context("shipped default config"),
            Some(path) => Config::read(Path::new(path)),
        }
    }

    pub fn read(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// A complete file that parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut copy = self.clone();
        let mut out = String::from("base = empty\n");
        for (key, field) in copy.fields() {
            let value = match field {
                Field::Real(x) => format!("{x:?}"),
                Field::Count(x) => x.to_string(),
                Field::Seed(x) => x.to_string(),
                Field::Refresh(x) => refresh_name(*x).to_string(),
                Field::Events(x) => events_name(*x).to_string(),
            };
            writeln!(out, "{key} = {value}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_matches_library_defaults() {
        assert_eq!(Config::parse(DEFAULT_CONFIG).unwrap(), Config::default());
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = Config::default();
        cfg.slim.switching_energy_pj = 12.5;
        cfg.refresh = RefreshPolicy::Eager;
        cfg.analog.seed = 99;
        assert_eq!(Config::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn missing_key_is_named() {
        let text: String =
            DEFAULT_CONFIG.lines().filter(|l| !l.starts_with("cpu.add.energy_pj")).collect::<Vec<_>>().join("\n");
        let err = Config::parse(&text).unwrap_err().to_string();
        assert!(err.contains("cpu.add.energy_pj"), "{err}");
    }

    #[test]
    fn base_default_fills_gaps() {
        let cfg = Config::parse("base = default\nslim.read_energy_pj = 0.5\n").unwrap();
        assert_eq!(cfg.slim.read_energy_pj, 0.5);
        assert_eq!(cfg.cpu, CpuPerfParams::default());
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(Config::parse("base = default\nbogus = 1").unwrap_err().to_string().contains("bogus"));
        assert!(Config::parse("base = default\nseed = x").is_err());
        assert!(Config::parse("base = default\nno equals sign").is_err());
        assert!(Config::parse("base = default\nthreshold_1 = 600e-9").is_err());
    }

    #[test]
    fn every_key_present_in_shipped_file() {
        for key in Config::keys() {
            assert!(DEFAULT_CONFIG.lines().any(|l| l.split('=').next().unwrap().trim() == key), "{key}");
        }
    }
}
