//! Four-level resistance ladder of the bilayer OxRAM element.
//!
//! Each rung jointly encodes a memory bit (LRS/HRS sense region) and a logic
//! bit. Programming pulses move the device along the ladder; the analog layer
//! maps rungs onto conductance bands read through a three-threshold comparator.

use core::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Default programming pulse width in seconds.
pub const DEFAULT_PULSE_WIDTH: f64 = 7e-3;

/// One of the four programmed states, ordered by conductance.
///
/// The label is `<memory><logic>`: `11` and `10` sit in the low-resistance
/// (memory `1`) sense region, `01` and `00` in the high-resistance region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[repr(u8)]
pub enum SlimLevel {
    S00 = 0,
    S01 = 1,
    S10 = 2,
    S11 = 3,
}

impl SlimLevel {
    pub const ALL: [SlimLevel; 4] = [SlimLevel::S00, SlimLevel::S01, SlimLevel::S10, SlimLevel::S11];

    /// States a logic operation may start from.
    pub const ABSOLUTE: [SlimLevel; 2] = [SlimLevel::S11, SlimLevel::S01];

    pub const fn from_index(level: u8) -> Option<SlimLevel> {
        match level {
            0 => Some(SlimLevel::S00),
            1 => Some(SlimLevel::S01),
            2 => Some(SlimLevel::S10),
            3 => Some(SlimLevel::S11),
            _ => None,
        }
    }

    pub const fn index(self) -> u8 {
        self as u8
    }

    /// `true` for the LRS states `11` and `10`.
    pub const fn memory_bit(self) -> bool {
        self.index() >= 2
    }

    pub const fn logic_bit(self) -> bool {
        self.index() % 2 == 1
    }

    /// `11` or `01`: logic bit set, ready for a logic operation.
    pub const fn is_absolute(self) -> bool {
        self.logic_bit()
    }

    /// The absolute state holding `memory` as its stored bit.
    pub const fn absolute(memory: bool) -> SlimLevel {
        if memory {
            SlimLevel::S11
        } else {
            SlimLevel::S01
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            SlimLevel::S00 => "00",
            SlimLevel::S01 => "01",
            SlimLevel::S10 => "10",
            SlimLevel::S11 => "11",
        }
    }

    pub fn from_label(label: &str) -> Option<SlimLevel> {
        match label {
            "00" => Some(SlimLevel::S00),
            "01" => Some(SlimLevel::S01),
            "10" => Some(SlimLevel::S10),
            "11" => Some(SlimLevel::S11),
            _ => None,
        }
    }
}

impl fmt::Display for SlimLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PulseKind {
    /// Strong SET: drives the cell straight to `11`.
    P1,
    /// Weak SET: one rung up. Used for refresh.
    P2,
    /// RESET: one rung down.
    P3,
}

impl PulseKind {
    pub const fn increases_conductance(self) -> bool {
        matches!(self, PulseKind::P1 | PulseKind::P2)
    }

    pub fn from_name(name: &str) -> Option<PulseKind> {
        match name {
            "P1" | "p1" => Some(PulseKind::P1),
            "P2" | "p2" => Some(PulseKind::P2),
            "P3" | "p3" => Some(PulseKind::P3),
            _ => None,
        }
    }
}

impl fmt::Display for PulseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseKind::P1 => "P1",
            PulseKind::P2 => "P2",
            PulseKind::P3 => "P3",
        })
    }
}

/// A programming stimulus. Amplitude and width are carried for reporting;
/// the ladder transition depends on `kind` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pulse {
    pub kind: PulseKind,
    /// Volts. Unknown unless supplied by the caller.
    pub amplitude: Option<f64>,
    /// Seconds.
    pub width: f64,
}

impl Pulse {
    pub const fn new(kind: PulseKind) -> Pulse {
        Pulse { kind, amplitude: None, width: DEFAULT_PULSE_WIDTH }
    }

    pub const P1: Pulse = Pulse::new(PulseKind::P1);
    pub const P2: Pulse = Pulse::new(PulseKind::P2);
    pub const P3: Pulse = Pulse::new(PulseKind::P3);
}

impl From<PulseKind> for Pulse {
    fn from(kind: PulseKind) -> Self {
        Pulse::new(kind)
    }
}

/// Ladder transition. Total; saturates at both ends.
pub fn apply_pulse(state: SlimLevel, pulse: Pulse) -> SlimLevel {
    match pulse.kind {
        PulseKind::P1 => SlimLevel::S11,
        PulseKind::P2 => SlimLevel::from_index((state.index() + 1).min(3)).unwrap(),
        PulseKind::P3 => SlimLevel::from_index(state.index().saturating_sub(1)).unwrap(),
    }
}

/// `(memory_bit, logic_bit)` from a single sense.
pub fn decode(state: SlimLevel) -> (bool, bool) {
    (state.memory_bit(), state.logic_bit())
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeviceError {
    /// Band centers and thresholds do not strictly interleave.
    BandsNotInterleaved,
    /// A noise sigma is negative or not finite.
    InvalidSigma(usize),
}

impl fmt::Display for DeviceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviceError::BandsNotInterleaved => {
                f.write_str("analog config: thresholds must strictly interleave band centers")
            }
            DeviceError::InvalidSigma(i) => write!(f, "analog config: sigma_{i} must be finite and >= 0"),
        }
    }
}

impl core::error::Error for DeviceError {}

/// Conductance bands for the four rungs, in siemens.
///
/// The defaults space the band centers 400 nS apart with thresholds at the
/// midpoints, so each threshold is 200 nS (> 7 sigma) from its neighbours at
/// the worst device-to-device spread of 28 nS.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalogConfig {
    pub band_centers: [f64; 4],
    /// `thresholds[i]` separates level `i` from level `i + 1`.
    pub thresholds: [f64; 3],
    pub noise_sigma: [f64; 4],
    pub seed: u64,
}

/// Worst device-to-device conductance sigma.
pub const SIGMA_D2D: f64 = 28e-9;
/// Worst cycle-to-cycle conductance sigma.
pub const SIGMA_C2C: f64 = 7.35e-9;

impl Default for AnalogConfig {
    fn default() -> Self {
        AnalogConfig {
            band_centers: [100e-9, 500e-9, 900e-9, 1300e-9],
            thresholds: [300e-9, 700e-9, 1100e-9],
            noise_sigma: [SIGMA_D2D; 4],
            seed: 0x5117,
        }
    }
}

impl AnalogConfig {
    pub fn noiseless(mut self) -> Self {
        self.noise_sigma = [0.0; 4];
        self
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        let c = &self.band_centers;
        let t = &self.thresholds;
        let chain = [c[0], t[0], c[1], t[1], c[2], t[2], c[3]];
        if chain.iter().any(|v| !v.is_finite()) || chain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DeviceError::BandsNotInterleaved);
        }
        for (i, s) in self.noise_sigma.iter().enumerate() {
            if !s.is_finite() || *s < 0.0 {
                return Err(DeviceError::InvalidSigma(i));
            }
        }
        Ok(())
    }

    /// Seeded generator for stochastic reads.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Smallest distance from any band center to an adjacent threshold,
    /// in units of that band's sigma. Infinite when noise is off.
    pub fn min_separation_sigmas(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for level in 0..4 {
            let sigma = self.noise_sigma[level];
            if sigma == 0.0 {
                continue;
            }
            let c = self.band_centers[level];
            if level > 0 {
                worst = worst.min((c - self.thresholds[level - 1]) / sigma);
            }
            if level < 3 {
                worst = worst.min((self.thresholds[level] - c) / sigma);
            }
        }
        worst
    }
}

/// Noise-free conductance of a rung.
pub fn conductance_of(state: SlimLevel, cfg: &AnalogConfig) -> Result<f64, DeviceError> {
    cfg.validate()?;
    Ok(cfg.band_centers[state.index() as usize])
}

/// One stochastic read: band center plus Gaussian noise of that band's sigma.
pub fn sample_conductance<R: Rng + ?Sized>(
    state: SlimLevel,
    cfg: &AnalogConfig,
    rng: &mut R,
) -> Result<f64, DeviceError> {
    cfg.validate()?;
    let level = state.index() as usize;
    let normal =
        Normal::new(cfg.band_centers[level], cfg.noise_sigma[level]).map_err(|_| DeviceError::InvalidSigma(level))?;
    Ok(normal.sample(rng))
}

/// Threshold comparator. A value equal to a threshold belongs to the upper band.
pub fn decode_conductance(g: f64, cfg: &AnalogConfig) -> SlimLevel {
    let above = cfg.thresholds.iter().filter(|t| g >= **t).count();
    SlimLevel::from_index(above as u8).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use SlimLevel::*;

    #[test]
    fn pulse_examples() {
        assert_eq!(apply_pulse(S11, Pulse::P3), S10);
        assert_eq!(apply_pulse(S00, Pulse::P2), S01);
        assert_eq!(apply_pulse(S01, Pulse::P1), S11);
        assert_eq!(apply_pulse(S00, Pulse::P3), S00);
        assert_eq!(apply_pulse(S11, Pulse::P2), S11);
        // modelled for totality only
        assert_eq!(apply_pulse(S01, Pulse::P2), S10);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(S10), (true, false));
        assert_eq!(decode(S01), (false, true));
        assert_eq!(decode(S00), (false, false));
        assert_eq!(decode(S11), (true, true));
    }

    #[test]
    fn level_invariants() {
        for s in SlimLevel::ALL {
            assert_eq!(s.memory_bit(), s.index() >= 2);
            assert_eq!(s.logic_bit(), s.index() % 2 == 1);
            assert_eq!(SlimLevel::from_label(s.label()), Some(s));
        }
        let absolute: alloc::vec::Vec<_> = SlimLevel::ALL.into_iter().filter(|s| s.is_absolute()).collect();
        assert_eq!(absolute, [S01, S11]);
        assert_eq!(SlimLevel::from_index(4), None);
    }

    #[test]
    fn pulse_defaults() {
        for p in [Pulse::P1, Pulse::P2, Pulse::P3] {
            assert_eq!(p.width, 7e-3);
        }
        assert!(PulseKind::P1.increases_conductance());
        assert!(PulseKind::P2.increases_conductance());
        assert!(!PulseKind::P3.increases_conductance());
    }

    #[test]
    fn ladder_moves_at_most_one_rung_except_p1() {
        for s in SlimLevel::ALL {
            for k in [PulseKind::P2, PulseKind::P3] {
                let t = apply_pulse(s, k.into());
                assert!((t.index() as i8 - s.index() as i8).abs() <= 1);
            }
            assert_eq!(apply_pulse(s, Pulse::P1), S11);
        }
    }

    #[test]
    fn refresh_round_trip_and_preservation() {
        for s in SlimLevel::ABSOLUTE {
            let logic = apply_pulse(s, Pulse::P3);
            assert_eq!(logic.memory_bit(), s.memory_bit());
            assert_eq!(apply_pulse(logic, Pulse::P2), s);
        }
    }

    #[test]
    fn noiseless_round_trip() {
        let cfg = AnalogConfig::default().noiseless();
        for s in SlimLevel::ALL {
            let g = conductance_of(s, &cfg).unwrap();
            assert_eq!(g, cfg.band_centers[s.index() as usize]);
            assert_eq!(decode_conductance(g, &cfg), s);
        }
    }

    #[test]
    fn threshold_ties_go_up() {
        let cfg = AnalogConfig::default();
        assert_eq!(decode_conductance(cfg.band_centers[2], &cfg), S10);
        assert_eq!(decode_conductance(cfg.thresholds[1], &cfg), S10);
        assert_eq!(decode_conductance(cfg.thresholds[1] + 1e-15, &cfg), S10);
        assert_eq!(decode_conductance(cfg.thresholds[1] - 1e-15, &cfg), S01);
        assert_eq!(decode_conductance(-1.0, &cfg), S00);
        assert_eq!(decode_conductance(1.0, &cfg), S11);
    }

    #[test]
    fn rejects_bad_bands() {
        let mut cfg = AnalogConfig::default();
        cfg.thresholds[1] = cfg.band_centers[2];
        assert_eq!(conductance_of(S11, &cfg), Err(DeviceError::BandsNotInterleaved));
        let mut cfg = AnalogConfig::default();
        cfg.noise_sigma[3] = -1.0;
        assert_eq!(cfg.validate(), Err(DeviceError::InvalidSigma(3)));
    }

    #[test]
    fn default_bands_are_well_separated() {
        assert!(AnalogConfig::default().min_separation_sigmas() >= 6.0);
        assert!(AnalogConfig::default().noiseless().min_separation_sigmas().is_infinite());
    }

    #[test]
    fn stochastic_reads_are_seeded() {
        let cfg = AnalogConfig::default();
        let mut a = cfg.rng();
        let mut b = cfg.rng();
        for s in SlimLevel::ALL {
            assert_eq!(sample_conductance(s, &cfg, &mut a).unwrap(), sample_conductance(s, &cfg, &mut b).unwrap());
        }
    }
}
