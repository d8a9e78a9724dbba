//! Self-contained scenario descriptions: array geometry, propagation
//! paths, detector settings, and the angular sweep grid, plus the built-in
//! presets the command-line harness exposes.
//!
//! A [`Scenario`] is plain data — everything needed to reproduce a run —
//! and (de)serializes through serde when the `serde` feature is enabled,
//! which is how the harness reads and writes TOML scenario files.

use alloc::vec::Vec;
use core::str::FromStr;

use crate::channel::{multipath_channel, ChannelMatrix, PathSpec};
use crate::error::{Error, Result};
use crate::geometry::{incidence_from_look, ArrayConfig};

/// How composite beampattern gains are scaled for presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum NormalizationMode {
    /// Fixed constant K = 1/M²; unit gain at the steered direction when
    /// the waveform is unprojected.
    FixedK,
    /// Rescale so the swept pattern peaks at exactly 0 dB.
    Peak,
}

impl NormalizationMode {
    /// Stable lowercase name, matching the serialized form.
    pub fn name(&self) -> &'static str {
        match self {
            NormalizationMode::FixedK => "fixed_k",
            NormalizationMode::Peak => "peak",
        }
    }
}

impl FromStr for NormalizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed_k" => Ok(NormalizationMode::FixedK),
            "peak" => Ok(NormalizationMode::Peak),
            _ => Err(Error::InvalidArgument(
                "unknown normalization; expected fixed_k or peak",
            )),
        }
    }
}

/// Uniform angular grid, inclusive of both endpoints when the step lands
/// on them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(deny_unknown_fields)
)]
pub struct SweepGrid {
    /// First angle in degrees.
    pub lo_deg: f64,
    /// Last reachable angle in degrees.
    pub hi_deg: f64,
    /// Grid spacing in degrees.
    pub step_deg: f64,
}

impl SweepGrid {
    /// Check bounds: angles within [−90°, 90°], positive step, lo ≤ hi.
    pub fn validate(&self) -> Result<()> {
        if !self.lo_deg.is_finite() || !self.hi_deg.is_finite() || !self.step_deg.is_finite() {
            return Err(Error::InvalidArgument("sweep grid must be finite"));
        }
        if self.lo_deg > self.hi_deg {
            return Err(Error::InvalidArgument(
                "sweep grid start must not exceed its end",
            ));
        }
        if self.lo_deg < -90.0 || self.hi_deg > 90.0 {
            return Err(Error::InvalidArgument(
                "sweep grid must stay within [-90, 90] degrees",
            ));
        }
        if !(self.step_deg > 0.0) {
            return Err(Error::InvalidArgument("sweep step must be positive"));
        }
        Ok(())
    }

    /// Materialize the grid angles. The point count is
    /// ⌊(hi − lo)/step⌋ + 1 with a small slack so binary representations
    /// of decimal steps still include the endpoint; accumulated rounding
    /// is clamped back to `hi_deg` so no angle exceeds the stated range.
    pub fn angles(&self) -> Vec<f64> {
        let count = libm::floor((self.hi_deg - self.lo_deg) / self.step_deg + 1e-9) as usize + 1;
        (0..count)
            .map(|i| (self.lo_deg + i as f64 * self.step_deg).min(self.hi_deg))
            .collect()
    }
}

/// Built-in scenarios reproducing the reference geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Two sea-surface paths toward −7° and −6°, wide blocked sector
    /// [−10°, −3°], full −90°…90° pattern sweep.
    Fig1a,
    /// Paths toward −3° and −2° with a tight blocked sector [−5°, −2°];
    /// probes the gap between eigen-nulling and sector blocking.
    Fig1b,
    /// Same geometry as [`Preset::Fig1a`] but swept only across the
    /// blocked sector [−10°, −3°] for detection curves.
    Fig2,
}

impl Preset {
    /// Stable lowercase name used on the command line and in file names.
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2 => "fig2",
        }
    }

    /// All built-in presets, in display order.
    pub const ALL: [Preset; 3] = [Preset::Fig1a, Preset::Fig1b, Preset::Fig2];
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1a" => Ok(Preset::Fig1a),
            "fig1b" => Ok(Preset::Fig1b),
            "fig2" => Ok(Preset::Fig2),
            _ => Err(Error::InvalidArgument(
                "unknown preset; expected fig1a, fig1b, or fig2",
            )),
        }
    }
}

/// Complete description of one simulation run.
///
/// Field order keeps scalars ahead of nested tables so the serialized
/// TOML stays valid (values may not follow a table header).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(deny_unknown_fields)
)]
pub struct Scenario {
    /// Hypothesized target look angle in degrees.
    pub target_angle_deg: f64,
    /// Sector [lo, hi] (degrees) blocked by the sector-nulling method.
    pub blocked_sector_deg: [f64; 2],
    /// Detector false-alarm probability.
    pub pfa: f64,
    /// Per-element SNR |α|²/σ_n² in dB.
    pub snr_db: f64,
    /// Base seed for Monte Carlo reproduction.
    pub seed: u64,
    /// Beampattern normalization mode.
    pub normalization: NormalizationMode,
    /// Radar (transmit) array.
    pub radar: ArrayConfig,
    /// Base-station (victim) array.
    pub bs: ArrayConfig,
    /// Angular sweep grid for patterns and angle-swept detection curves.
    pub sweep_grid: SweepGrid,
    /// Propagation paths from the radar to the base station.
    pub paths: Vec<PathSpec>,
}

impl Scenario {
    /// Build one of the reference scenarios.
    ///
    /// Shared geometry: a 32-element radar and 4-element base station,
    /// both half-wavelength arrays at λ = 0.0857 m, direct path 10 km
    /// with a 25 m longer surface bounce at half amplitude, P_FA = 10⁻³,
    /// 20 dB SNR, broadside target.
    pub fn preset(which: Preset) -> Scenario {
        let radar = ArrayConfig {
            num_elements: 32,
            normalized_spacing: 0.5,
            carrier_wavelength: 0.0857,
        };
        let bs = ArrayConfig {
            num_elements: 4,
            normalized_spacing: 0.5,
            carrier_wavelength: 0.0857,
        };
        let (look_a, look_b, blocked, sweep) = match which {
            Preset::Fig1a => (
                -7.0,
                -6.0,
                [-10.0, -3.0],
                SweepGrid {
                    lo_deg: -90.0,
                    hi_deg: 90.0,
                    step_deg: 0.1,
                },
            ),
            Preset::Fig1b => (
                -3.0,
                -2.0,
                [-5.0, -2.0],
                SweepGrid {
                    lo_deg: -90.0,
                    hi_deg: 90.0,
                    step_deg: 0.1,
                },
            ),
            Preset::Fig2 => (
                -7.0,
                -6.0,
                [-10.0, -3.0],
                SweepGrid {
                    lo_deg: -10.0,
                    hi_deg: -3.0,
                    step_deg: 0.1,
                },
            ),
        };
        let paths = alloc::vec![
            PathSpec {
                attenuation: 1.0,
                base_distance: 10_000.0,
                radar_incidence_deg: incidence_from_look(look_a),
                bs_incidence_deg: 85.0,
            },
            PathSpec {
                attenuation: 0.5,
                base_distance: 10_025.0,
                radar_incidence_deg: incidence_from_look(look_b),
                bs_incidence_deg: 95.0,
            },
        ];
        Scenario {
            target_angle_deg: 0.0,
            blocked_sector_deg: blocked,
            pfa: 1e-3,
            snr_db: 20.0,
            seed: 0,
            normalization: NormalizationMode::FixedK,
            radar,
            bs,
            sweep_grid: sweep,
            paths,
        }
    }

    /// Validate every component and their mutual consistency.
    pub fn validate(&self) -> Result<()> {
        self.radar.validate()?;
        self.bs.validate()?;
        let rel = (self.radar.carrier_wavelength - self.bs.carrier_wavelength).abs()
            / self.radar.carrier_wavelength;
        if !(rel <= 1e-12) {
            return Err(Error::InvalidArgument(
                "radar and base-station arrays must share one carrier wavelength",
            ));
        }
        if self.paths.is_empty() {
            return Err(Error::InvalidArgument(
                "scenario needs at least one propagation path",
            ));
        }
        for p in &self.paths {
            p.validate()?;
        }
        let [lo, hi] = self.blocked_sector_deg;
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < -90.0 || hi > 90.0 {
            return Err(Error::InvalidArgument(
                "blocked sector must be an ordered interval within [-90, 90] degrees",
            ));
        }
        if !(self.target_angle_deg.abs() <= 90.0) {
            return Err(Error::InvalidArgument(
                "target angle must lie in [-90, 90] degrees",
            ));
        }
        if !(self.pfa > 0.0 && self.pfa < 1.0) {
            return Err(Error::InvalidArgument(
                "false-alarm probability must lie strictly inside (0, 1)",
            ));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::InvalidArgument("SNR must be finite"));
        }
        self.sweep_grid.validate()
    }

    /// Assemble the interference channel implied by the path list.
    pub fn to_channel(&self) -> Result<ChannelMatrix> {
        multipath_channel(&self.paths, &self.radar, &self.bs)
    }

    /// Per-element SNR on a linear scale.
    pub fn snr_linear(&self) -> f64 {
        libm::pow(10.0, self.snr_db / 10.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_share_core_geometry() {
        for which in Preset::ALL {
            let s = Scenario::preset(which);
            s.validate().unwrap();
            assert_eq!(s.radar.num_elements, 32);
            assert_eq!(s.bs.num_elements, 4);
            assert_eq!(s.radar.carrier_wavelength, 0.0857);
            assert_eq!(s.paths.len(), 2);
            assert_eq!(s.paths[0].base_distance, 10_000.0);
            assert_eq!(s.paths[1].base_distance, 10_025.0);
            assert_eq!(s.target_angle_deg, 0.0);
            assert_eq!(s.pfa, 1e-3);
        }
    }

    #[test]
    fn preset_specific_fields() {
        let a = Scenario::preset(Preset::Fig1a);
        assert_eq!(a.paths[0].radar_incidence_deg, 83.0);
        assert_eq!(a.paths[1].radar_incidence_deg, 84.0);
        assert_eq!(a.blocked_sector_deg, [-10.0, -3.0]);
        assert_eq!(a.sweep_grid.angles().len(), 1801);

        let b = Scenario::preset(Preset::Fig1b);
        assert_eq!(b.paths[0].radar_incidence_deg, 87.0);
        assert_eq!(b.paths[1].radar_incidence_deg, 88.0);
        assert_eq!(b.blocked_sector_deg, [-5.0, -2.0]);

        let c = Scenario::preset(Preset::Fig2);
        assert_eq!(c.paths[0].radar_incidence_deg, 83.0);
        assert_eq!(c.sweep_grid.angles().len(), 71);
        assert_eq!(c.sweep_grid.lo_deg, -10.0);
        assert_eq!(c.sweep_grid.hi_deg, -3.0);
    }

    #[test]
    fn sweep_grid_materialization() {
        let g = SweepGrid {
            lo_deg: 0.0,
            hi_deg: 1.0,
            step_deg: 0.3,
        };
        let angles = g.angles();
        assert_eq!(angles.len(), 4);
        assert_eq!(angles[0], 0.0);
        assert!((angles[3] - 0.9).abs() < 1e-12);

        // A decimal step whose multiples overshoot by rounding still
        // lands exactly count points, none beyond the end.
        let full = SweepGrid {
            lo_deg: -90.0,
            hi_deg: 90.0,
            step_deg: 0.1,
        };
        let angles = full.angles();
        assert_eq!(angles.len(), 1801);
        assert!(angles.iter().all(|&t| (-90.0..=90.0).contains(&t)));
        assert_eq!(*angles.last().unwrap(), 90.0);
    }

    #[test]
    fn sweep_grid_rejections() {
        let base = SweepGrid {
            lo_deg: 0.0,
            hi_deg: 1.0,
            step_deg: 0.1,
        };
        assert!(base.validate().is_ok());
        assert!(SweepGrid { lo_deg: 2.0, ..base }.validate().is_err());
        assert!(SweepGrid { step_deg: 0.0, ..base }.validate().is_err());
        assert!(SweepGrid { lo_deg: -91.0, ..base }.validate().is_err());
        assert!(SweepGrid { hi_deg: 90.5, ..base }.validate().is_err());
        assert!(SweepGrid { step_deg: f64::NAN, ..base }.validate().is_err());
    }

    #[test]
    fn scenario_validation_rejections() {
        let good = Scenario::preset(Preset::Fig1a);

        let mut s = good.clone();
        s.paths.clear();
        assert!(s.validate().is_err());

        let mut s = good.clone();
        s.bs.carrier_wavelength = 0.086;
        assert!(s.validate().is_err());

        let mut s = good.clone();
        s.pfa = 1.0;
        assert!(s.validate().is_err());

        let mut s = good.clone();
        s.blocked_sector_deg = [-3.0, -10.0];
        assert!(s.validate().is_err());

        let mut s = good.clone();
        s.target_angle_deg = 95.0;
        assert!(s.validate().is_err());

        let mut s = good.clone();
        s.snr_db = f64::INFINITY;
        assert!(s.validate().is_err());

        let mut s = good;
        s.sweep_grid.step_deg = -0.1;
        assert!(s.validate().is_err());
    }

    #[test]
    fn channel_assembly_matches_the_path_list() {
        let s = Scenario::preset(Preset::Fig1a);
        let h = s.to_channel().unwrap();
        assert_eq!(h.entries.nrows(), 4);
        assert_eq!(h.entries.ncols(), 32);
        assert_eq!(h.num_paths, 2);
    }

    #[test]
    fn snr_conversion() {
        let mut s = Scenario::preset(Preset::Fig1a);
        assert!((s.snr_linear() - 100.0).abs() < 1e-12);
        s.snr_db = 0.0;
        assert_eq!(s.snr_linear(), 1.0);
        s.snr_db = -10.0;
        assert!((s.snr_linear() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn name_round_trips() {
        for which in Preset::ALL {
            assert_eq!(which.name().parse::<Preset>().unwrap(), which);
        }
        assert!("fig3".parse::<Preset>().is_err());
        for mode in [NormalizationMode::FixedK, NormalizationMode::Peak] {
            assert_eq!(mode.name().parse::<NormalizationMode>().unwrap(), mode);
        }
        assert!("db".parse::<NormalizationMode>().is_err());
    }
}
