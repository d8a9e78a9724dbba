//! Experiment runners: translate a scenario plus a nulling method into
//! beampattern sweeps, detection curves, suppression ratios, and the
//! combined multi-file run behind the `all` subcommand.
//!
//! One quadratic-form convention threads through everything here: the
//! pattern and detector probe the waveform coherence through `Rᵀ`, and
//! transposition conjugates steering phases, so probing angle θ reads the
//! projector's response at −θ. The scenario's `blocked_sector_deg`
//! describes angles as the *receiver* sees them; this module hands the
//! sector-nulling projector the mirrored interval so the blocked angles
//! come out where the scenario says.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use coexsim_core::beampattern::{sweep, BeampatternResult};
use coexsim_core::detection::{
    beam_response, calibrated_reflectivity, monte_carlo_pd, probability_of_detection,
    DetectionCurve, DetectionParams, DetectionPoint, SweepVariable,
};
use coexsim_core::linalg::c64;
use coexsim_core::nulling::{
    eigen_null_projector, spatial_null_projector, ProjectionMatrix,
    DEFAULT_SPATIAL_GRID_STEP_DEG,
};
use coexsim_core::scenario::{NormalizationMode, Scenario};
use coexsim_core::tolerances::RANK_REL_TOL;
use coexsim_core::waveform::{
    coherence, generate_orthogonal, project_waveform, CoherenceMatrix, WaveformBlock,
};

use crate::error::{CliError, Result};
use crate::outputs::{
    beampattern_csv, detection_csv, suppression_csv, write_atomic, RunReport,
};
use crate::scenario_file::scenario_digest;

/// How (or whether) the transmit waveform is nulled before use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Null-space projection from the channel's singular vectors.
    Eigen,
    /// Sector nulling over a sampled steering dictionary.
    Spatial,
    /// No projection; the unmodified orthogonal waveform.
    None,
}

impl Method {
    /// Stable lowercase name used in flags and file names.
    pub fn name(&self) -> &'static str {
        match self {
            Method::Eigen => "eigen",
            Method::Spatial => "spatial",
            Method::None => "none",
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(Method::Eigen),
            "spatial" => Ok(Method::Spatial),
            "none" => Ok(Method::None),
            other => Err(CliError::InvalidInput(format!(
                "unknown method {other:?}; expected eigen, spatial, or none"
            ))),
        }
    }
}

/// Samples per block: at least 128, and never fewer than the element
/// count (orthogonal waveforms need L ≥ M).
pub fn block_length(num_elements: usize) -> usize {
    num_elements.max(128)
}

/// Build the projector a method prescribes for this scenario.
pub fn build_projector(s: &Scenario, method: Method) -> Result<ProjectionMatrix> {
    match method {
        Method::Eigen => {
            let h = s.to_channel()?;
            Ok(eigen_null_projector(&h, RANK_REL_TOL)?)
        }
        Method::Spatial => {
            // Mirrored interval: see the module docs. Blocking [lo, hi]
            // on the receiver side nulls steering vectors over [−hi, −lo].
            let [lo, hi] = s.blocked_sector_deg;
            Ok(spatial_null_projector(
                (-hi, -lo),
                DEFAULT_SPATIAL_GRID_STEP_DEG,
                &s.radar,
            )?)
        }
        Method::None => Ok(ProjectionMatrix::identity(s.radar.num_elements)),
    }
}

/// A scenario with its method resolved into concrete transmit-side state.
pub struct Prepared {
    /// The validated scenario this state came from.
    pub scenario: Scenario,
    /// The nulling method that produced it.
    pub method: Method,
    /// The projector applied to the waveform.
    pub projector: ProjectionMatrix,
    /// Projected waveform block X̃ = P·X.
    pub block: WaveformBlock,
    /// Waveform coherence R̃ = X̃X̃ᴴ/L.
    pub coherence: CoherenceMatrix,
}

/// Validate the scenario and build projector, block, and coherence.
pub fn prepare(s: &Scenario, method: Method) -> Result<Prepared> {
    s.validate()?;
    let projector = build_projector(s, method)?;
    let x = generate_orthogonal(s.radar.num_elements, block_length(s.radar.num_elements))?;
    let block = project_waveform(&projector, &x)?;
    let coherence = coherence(&block)?;
    Ok(Prepared {
        scenario: s.clone(),
        method,
        projector,
        block,
        coherence,
    })
}

/// Ratio ‖H·P‖_F / ‖H‖_F: how much interference amplitude survives the
/// projection, over the channel's whole row space.
pub fn channel_suppression(s: &Scenario, projector: &ProjectionMatrix) -> Result<f64> {
    let h = s.to_channel()?;
    let before = h.entries.frobenius_norm();
    if before == 0.0 {
        return Err(CliError::Numeric(
            "channel matrix is zero; suppression undefined".into(),
        ));
    }
    Ok(h.entries.mul(&projector.entries).frobenius_norm() / before)
}

/// Sweep the composite pattern over the scenario grid, applying the
/// scenario's normalization mode.
pub fn run_beampattern(p: &Prepared) -> Result<BeampatternResult> {
    let s = &p.scenario;
    let grid = s.sweep_grid.angles();
    let mut result = sweep(&p.coherence, s.target_angle_deg, &grid, &s.radar)?;
    if s.normalization == NormalizationMode::Peak {
        result.normalize_to_peak()?;
    }
    Ok(result)
}

/// SNR sweep used by the `--sweep snr` detection mode: −30 … +10 dB in
/// 0.5 dB steps at the scenario's target angle.
pub const SNR_SWEEP_DB: (f64, f64, f64) = (-30.0, 10.0, 0.5);

/// Decorrelated per-point seed so every Monte Carlo point draws an
/// independent stream while the whole curve stays reproducible.
fn point_seed(base: u64, index: u64) -> u64 {
    // splitmix64 of base + (index+1)·golden-ratio increment.
    let mut z = base.wrapping_add((index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Compute one detection point at beam response `xi` and linear SNR.
fn detection_point(
    p: &Prepared,
    theta_deg: f64,
    xi: f64,
    snr: f64,
    mc_trials: u64,
    seed: u64,
) -> Result<DetectionPoint> {
    let s = &p.scenario;
    let rho = snr * xi * xi;
    let pd_analytic = probability_of_detection(rho, s.pfa)?;
    let pd_monte_carlo = if mc_trials > 0 {
        // Reflectivity calibrated so the trials' exact noncentrality is ρ.
        let noise_power = 1.0;
        let m = s.radar.num_elements;
        let alpha = calibrated_reflectivity(rho, noise_power, p.block.num_samples, m, xi)?;
        let params = DetectionParams::new(theta_deg, c64(alpha, 0.0), noise_power, s.pfa)?;
        Some(monte_carlo_pd(&params, &p.block, &s.radar, mc_trials, seed)?)
    } else {
        None
    };
    Ok(DetectionPoint {
        abscissa: f64::NAN, // caller fills in the sweep coordinate
        pd_analytic,
        pd_monte_carlo,
    })
}

/// Detection-probability curve for a prepared method, swept over angle
/// (the scenario grid at the scenario SNR) or over SNR (fixed target
/// angle, [`SNR_SWEEP_DB`]). `seed` feeds the per-point Monte Carlo
/// streams when `mc_trials > 0`.
pub fn run_detection(
    p: &Prepared,
    variable: SweepVariable,
    mc_trials: u64,
    seed: u64,
) -> Result<DetectionCurve> {
    if p.method == Method::None {
        return Err(CliError::InvalidInput(
            "detection needs a nulling method; choose eigen or spatial".into(),
        ));
    }
    let s = &p.scenario;
    let mut points = Vec::new();
    match variable {
        SweepVariable::AngleDeg => {
            let snr = s.snr_linear();
            for (i, theta) in s.sweep_grid.angles().into_iter().enumerate() {
                let xi = beam_response(&p.coherence, &s.radar, theta)?;
                let mut point =
                    detection_point(p, theta, xi, snr, mc_trials, point_seed(seed, i as u64))?;
                point.abscissa = theta;
                points.push(point);
            }
        }
        SweepVariable::SnrDb => {
            let theta = s.target_angle_deg;
            let xi = beam_response(&p.coherence, &s.radar, theta)?;
            let (lo, hi, step) = SNR_SWEEP_DB;
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            for i in 0..count {
                let snr_db = (lo + i as f64 * step).min(hi);
                let snr = 10f64.powf(snr_db / 10.0);
                let mut point =
                    detection_point(p, theta, xi, snr, mc_trials, point_seed(seed, i as u64))?;
                point.abscissa = snr_db;
                points.push(point);
            }
        }
    }
    Ok(DetectionCurve { variable, points })
}

// ── Combined run ─────────────────────────────────────────────────────────

/// Bound the embedded suppression check asserts for the eigen method.
pub const EIGEN_SUPPRESSION_BOUND: f64 = 1e-10;

/// Gain (dB) at the grid point nearest `theta`, but only when that point
/// is within half a grid step — an angle outside the swept window has no
/// meaningful pattern value.
fn db_at(pattern: &BeampatternResult, theta: f64, half_step: f64) -> Option<f64> {
    pattern
        .points
        .iter()
        .min_by(|a, b| {
            (a.theta_deg - theta)
                .abs()
                .partial_cmp(&(b.theta_deg - theta).abs())
                .unwrap()
        })
        .filter(|p| (p.theta_deg - theta).abs() <= half_step)
        .map(|p| p.gain_db)
}

fn monotone_nondecreasing(curve: &DetectionCurve) -> bool {
    curve
        .points
        .windows(2)
        .all(|w| w[1].pd_analytic >= w[0].pd_analytic - 1e-9)
}

fn pd_in_range(curve: &DetectionCurve) -> bool {
    curve.points.iter().all(|p| {
        (0.0..=1.0).contains(&p.pd_analytic)
            && p.pd_monte_carlo.is_none_or(|mc| (0.0..=1.0).contains(&mc))
    })
}

/// Count of angles where the analytic curve is pinned to the false-alarm
/// floor (within +0.01) — the method's blind set on this grid.
fn blind_angles(curve: &DetectionCurve, pfa: f64) -> usize {
    curve
        .points
        .iter()
        .filter(|p| p.pd_analytic <= pfa + 0.01)
        .count()
}

/// Run every experiment, write the output files, and summarize.
///
/// Files written into `out_dir` (all floats `{:.11e}`, so two runs of the
/// same scenario are byte-identical):
///
/// - `beampattern_none.csv`, `beampattern_eigen.csv`,
///   `beampattern_spatial.csv`
/// - `detection_angle_eigen.csv`, `detection_angle_spatial.csv`
/// - `detection_snr_eigen.csv`, `detection_snr_spatial.csv`
/// - `suppression.csv`
/// - `report.toml` — digest, metrics, checks; every metric is
///   recomputable from the CSVs above
///
/// Embedded checks (eigen suppression bound, SNR-curve monotonicity,
/// probability range) run on the produced results; a violated check
/// fails with exit code 4 after all files are written.
pub fn run_all(s: &Scenario, out_dir: &Path, mc_trials: u64, seed: u64) -> Result<RunReport> {
    let digest = scenario_digest(s)?;
    let mut output_paths: Vec<String> = Vec::new();
    let mut metrics: BTreeMap<String, f64> = BTreeMap::new();
    let mut checks: BTreeMap<String, bool> = BTreeMap::new();

    let write = |name: &str, content: String, output_paths: &mut Vec<String>| -> Result<()> {
        write_atomic(&out_dir.join(name), content.as_bytes())?;
        output_paths.push(name.to_string());
        Ok(())
    };

    // Patterns for all three methods.
    let none = prepare(s, Method::None)?;
    let eigen = prepare(s, Method::Eigen)?;
    let spatial = prepare(s, Method::Spatial)?;
    let pattern_none = run_beampattern(&none)?;
    let pattern_eigen = run_beampattern(&eigen)?;
    let pattern_spatial = run_beampattern(&spatial)?;
    write("beampattern_none.csv", beampattern_csv(&pattern_none), &mut output_paths)?;
    write("beampattern_eigen.csv", beampattern_csv(&pattern_eigen), &mut output_paths)?;
    write(
        "beampattern_spatial.csv",
        beampattern_csv(&pattern_spatial),
        &mut output_paths,
    )?;

    // Detection curves for the two nulling methods.
    let angle_eigen = run_detection(&eigen, SweepVariable::AngleDeg, mc_trials, seed)?;
    let angle_spatial = run_detection(&spatial, SweepVariable::AngleDeg, mc_trials, seed)?;
    let snr_eigen = run_detection(&eigen, SweepVariable::SnrDb, mc_trials, seed)?;
    let snr_spatial = run_detection(&spatial, SweepVariable::SnrDb, mc_trials, seed)?;
    write("detection_angle_eigen.csv", detection_csv(&angle_eigen), &mut output_paths)?;
    write(
        "detection_angle_spatial.csv",
        detection_csv(&angle_spatial),
        &mut output_paths,
    )?;
    write("detection_snr_eigen.csv", detection_csv(&snr_eigen), &mut output_paths)?;
    write("detection_snr_spatial.csv", detection_csv(&snr_spatial), &mut output_paths)?;

    // Suppression ratios.
    let sup_eigen = channel_suppression(s, &eigen.projector)?;
    let sup_spatial = channel_suppression(s, &spatial.projector)?;
    let sup_none = channel_suppression(s, &none.projector)?;
    write(
        "suppression.csv",
        suppression_csv(&[
            ("none", sup_none),
            ("eigen", sup_eigen),
            ("spatial", sup_spatial),
        ]),
        &mut output_paths,
    )?;

    // Metrics — each directly recomputable from one of the CSVs.
    metrics.insert("suppression_eigen".into(), sup_eigen);
    metrics.insert("suppression_spatial".into(), sup_spatial);
    let half_step = 0.5 * s.sweep_grid.step_deg + 1e-9;
    if let Some(target_none) = db_at(&pattern_none, s.target_angle_deg, half_step) {
        if let Some(target_eigen) = db_at(&pattern_eigen, s.target_angle_deg, half_step) {
            metrics.insert("mainlobe_drop_db_eigen".into(), target_eigen - target_none);
        }
        if let Some(target_spatial) = db_at(&pattern_spatial, s.target_angle_deg, half_step) {
            metrics.insert(
                "mainlobe_drop_db_spatial".into(),
                target_spatial - target_none,
            );
        }
    }
    // Worst (shallowest) eigen null across the stored path directions;
    // the look angle of a path is its incidence minus 90°.
    let worst_null = s
        .paths
        .iter()
        .filter_map(|path| db_at(&pattern_eigen, path.radar_incidence_deg - 90.0, half_step))
        .fold(f64::NEG_INFINITY, f64::max);
    if worst_null.is_finite() {
        metrics.insert("eigen_null_depth_db".into(), worst_null);
    }
    metrics.insert(
        "blind_angles_eigen".into(),
        blind_angles(&angle_eigen, s.pfa) as f64,
    );
    metrics.insert(
        "blind_angles_spatial".into(),
        blind_angles(&angle_spatial, s.pfa) as f64,
    );

    // Embedded checks.
    checks.insert(
        "eigen_suppression_within_bound".into(),
        sup_eigen <= EIGEN_SUPPRESSION_BOUND,
    );
    checks.insert(
        "snr_curves_monotone".into(),
        monotone_nondecreasing(&snr_eigen) && monotone_nondecreasing(&snr_spatial),
    );
    checks.insert(
        "pd_in_unit_interval".into(),
        [&angle_eigen, &angle_spatial, &snr_eigen, &snr_spatial]
            .iter()
            .all(|c| pd_in_range(c)),
    );

    output_paths.push("report.toml".to_string());
    let report = RunReport {
        scenario_digest: digest,
        metrics,
        output_paths,
        checks,
    };
    write_atomic(&out_dir.join("report.toml"), report.to_toml()?.as_bytes())?;

    if let Some((name, _)) = report.checks.iter().find(|(_, ok)| !**ok) {
        return Err(CliError::CheckFailed(format!(
            "embedded check {name:?} failed; see {}",
            out_dir.join("report.toml").display()
        )));
    }
    Ok(report)
}

/// Output file name for a single-experiment run.
pub fn single_output_name(kind: &str, method: Method) -> PathBuf {
    PathBuf::from(format!("{kind}_{}.csv", method.name()))
}
