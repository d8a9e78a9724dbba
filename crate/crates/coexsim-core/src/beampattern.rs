//! Composite transmit–receive beampattern evaluation.
//!
//! For steer angle θ_D, probe angle θ, waveform coherence R and
//! normalization constant K the composite gain is
//!
//! ```text
//! G(θ, θ_D) = K · |aᴴ(θ) Rᵀ a(θ_D)|² / (aᴴ(θ_D) Rᵀ a(θ_D)) · |aᴴ(θ) a(θ_D)|² / M
//! ```
//!
//! — a transmit factor shaped by the (possibly projected) waveform
//! correlation and a receive factor that is the plain array factor. The
//! product form resolves the ambiguity of looking at either pattern alone:
//! a direction must be attenuated on transmit *and* receive to disappear
//! from the composite.
//!
//! With K = 1/M² (the default) an unprojected orthogonal waveform peaks at
//! exactly 1 (0 dB) at θ = θ_D; [`BeampatternResult::normalize_to_peak`]
//! offers per-sweep peak normalization instead.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{steering_vector, ArrayConfig};
use crate::linalg::C64;
use crate::tolerances::{DB_FLOOR_DB, DB_FLOOR_LINEAR, PATTERN_DENOM_GUARD};
use crate::waveform::CoherenceMatrix;

/// One evaluated sweep angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternPoint {
    /// Probe angle θ in degrees.
    pub theta_deg: f64,
    /// Linear power gain G(θ, θ_D) ≥ 0.
    pub gain: f64,
    /// 10·log₁₀(gain), floored at −300 dB for vanishing gains.
    pub gain_db: f64,
}

/// A swept beampattern.
#[derive(Debug, Clone, PartialEq)]
pub struct BeampatternResult {
    /// Successfully evaluated grid points, in sweep order.
    pub points: Vec<PatternPoint>,
    /// Angles where evaluation failed (degenerate steer-direction
    /// response); recorded instead of aborting the sweep.
    pub gaps: Vec<f64>,
    /// Steer angle θ_D in degrees.
    pub steer_angle_deg: f64,
    /// Normalization constant K the gains were computed with.
    pub normalization: f64,
}

/// Default normalization K = 1/M²: the unprojected orthogonal-waveform
/// pattern then peaks at exactly 0 dB at the steer angle.
pub fn default_normalization(num_elements: usize) -> f64 {
    1.0 / (num_elements as f64 * num_elements as f64)
}

/// Convert a linear power gain to decibels with the documented floor.
fn to_db(gain: f64) -> f64 {
    if gain <= DB_FLOOR_LINEAR {
        DB_FLOOR_DB
    } else {
        10.0 * libm::log10(gain)
    }
}

/// Inner product aᴴ(θ₁)·a(θ₂).
fn steering_inner(a1: &[C64], a2: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a1.iter().zip(a2) {
        acc += x.conj() * y;
    }
    acc
}

/// Evaluate the composite gain G(θ, θ_D) for one probe angle.
///
/// Fails when the steered transmit response aᴴ(θ_D)Rᵀa(θ_D) is numerically
/// zero — the waveform carries no power toward θ_D, so the pattern is
/// undefined there (this happens when a projector removed the steer
/// direction itself).
pub fn composite_gain(
    r: &CoherenceMatrix,
    theta_deg: f64,
    theta_d_deg: f64,
    normalization: f64,
    cfg: &ArrayConfig,
) -> Result<f64> {
    if !(normalization > 0.0) || !normalization.is_finite() {
        return Err(Error::InvalidArgument(
            "pattern normalization constant must be positive and finite",
        ));
    }
    let m = cfg.num_elements;
    if r.entries.nrows() != m || r.entries.ncols() != m {
        return Err(Error::InvalidArgument(
            "coherence matrix size does not match the array",
        ));
    }
    let a_probe = steering_vector(cfg, theta_deg)?;
    let a_steer = steering_vector(cfg, theta_d_deg)?;

    // aᴴ(θ_D)·Rᵀ·a(θ_D) is real for Hermitian R; it is the transmit power
    // the waveform actually delivers toward the steer direction.
    let steer_response = r.entries.quad_transposed(&a_steer.entries, &a_steer.entries).re;
    if steer_response <= PATTERN_DENOM_GUARD {
        return Err(Error::Numeric(
            "steer direction carries no transmit power; pattern undefined there",
        ));
    }
    let cross = r.entries.quad_transposed(&a_probe.entries, &a_steer.entries);
    let receive = steering_inner(&a_probe.entries, &a_steer.entries);
    let gain = normalization * (cross.norm_sqr() / steer_response)
        * (receive.norm_sqr() / m as f64);
    Ok(gain.max(0.0))
}

/// Sweep the composite gain over a probe-angle grid with the default
/// K = 1/M² normalization.
///
/// Per-angle failures (see [`composite_gain`]) become `gaps` entries in the
/// result rather than aborting the whole sweep; callers that require a
/// complete pattern should check that `gaps` is empty.
pub fn sweep(
    r: &CoherenceMatrix,
    theta_d_deg: f64,
    grid_deg: &[f64],
    cfg: &ArrayConfig,
) -> Result<BeampatternResult> {
    if grid_deg.is_empty() {
        return Err(Error::InvalidArgument("sweep grid must be nonempty"));
    }
    let normalization = default_normalization(cfg.num_elements);
    let mut points = Vec::with_capacity(grid_deg.len());
    let mut gaps = Vec::new();
    for &theta in grid_deg {
        match composite_gain(r, theta, theta_d_deg, normalization, cfg) {
            Ok(gain) => points.push(PatternPoint {
                theta_deg: theta,
                gain,
                gain_db: to_db(gain),
            }),
            Err(_) => gaps.push(theta),
        }
    }
    Ok(BeampatternResult {
        points,
        gaps,
        steer_angle_deg: theta_d_deg,
        normalization,
    })
}

impl BeampatternResult {
    /// Largest linear gain over the sweep, if any point was evaluated.
    pub fn peak_gain(&self) -> Option<f64> {
        self.points
            .iter()
            .map(|p| p.gain)
            .fold(None, |acc, g| Some(acc.map_or(g, |a: f64| a.max(g))))
    }

    /// Rescale the sweep so its peak sits at exactly 1 (0 dB), adjusting
    /// the recorded normalization constant to match. Fails when there is no
    /// positive peak to normalize against.
    pub fn normalize_to_peak(&mut self) -> Result<()> {
        let peak = self.peak_gain().unwrap_or(0.0);
        if !(peak > 0.0) {
            return Err(Error::InvalidArgument(
                "cannot peak-normalize an empty or all-zero sweep",
            ));
        }
        let inv = 1.0 / peak;
        for p in &mut self.points {
            p.gain *= inv;
            p.gain_db = to_db(p.gain);
        }
        self.normalization *= inv;
        Ok(())
    }
}

// ── Tests ────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{multipath_channel, PathSpec};
    use crate::geometry::incidence_from_look;
    use crate::linalg::CMat;
    use crate::nulling::{eigen_null_projector, spatial_null_projector};
    use crate::tolerances::RANK_REL_TOL;
    use crate::waveform::{coherence, generate_orthogonal, project_waveform};
    use proptest::prelude::*;

    fn cfg(m: usize) -> ArrayConfig {
        ArrayConfig::new(m, 0.5, 0.0857).unwrap()
    }

    fn identity_r(m: usize) -> CoherenceMatrix {
        CoherenceMatrix {
            entries: CMat::identity(m),
        }
    }

    /// Eigen-nulled coherence for the two-path look-angle geometry
    /// (−7° LoS, −6° reflection).
    fn eigen_nulled_r(m: usize) -> CoherenceMatrix {
        let paths = [
            PathSpec {
                attenuation: 1.0,
                base_distance: 10_000.0,
                radar_incidence_deg: incidence_from_look(-7.0),
                bs_incidence_deg: 85.0,
            },
            PathSpec {
                attenuation: 0.5,
                base_distance: 10_025.0,
                radar_incidence_deg: incidence_from_look(-6.0),
                bs_incidence_deg: 95.0,
            },
        ];
        let bs = ArrayConfig::new(4, 0.5, 0.0857).unwrap();
        let h = multipath_channel(&paths, &cfg(m), &bs).unwrap();
        let p = eigen_null_projector(&h, RANK_REL_TOL).unwrap();
        let x = generate_orthogonal(m, 2 * m).unwrap();
        coherence(&project_waveform(&p, &x).unwrap()).unwrap()
    }

    #[test]
    fn steered_gain_of_orthogonal_waveform_is_unity() {
        for m in [1usize, 4, 8, 32] {
            let g = composite_gain(
                &identity_r(m),
                17.0,
                17.0,
                default_normalization(m),
                &cfg(m),
            )
            .unwrap();
            assert!((g - 1.0).abs() < 1e-12, "M = {m}: {g}");
        }
    }

    #[test]
    fn array_factor_null_is_deep() {
        // First Dirichlet-kernel zero of an 8-element λ/2 array steered
        // broadside: sin θ = 1/(MΔ) = 1/4.
        let theta = libm::asin(0.25).to_degrees();
        let g = composite_gain(&identity_r(8), theta, 0.0, default_normalization(8), &cfg(8))
            .unwrap();
        assert!(g <= 1e-20, "null gain {g:e}");
    }

    #[test]
    fn eigen_nulled_pattern_suppresses_the_path_directions() {
        let r = eigen_nulled_r(8);
        let k = default_normalization(8);
        let peak = composite_gain(&r, 0.0, 0.0, k, &cfg(8)).unwrap();
        for blocked in [-7.0, -6.0] {
            let g = composite_gain(&r, blocked, 0.0, k, &cfg(8)).unwrap();
            assert!(g <= 1e-8 * peak, "gain at {blocked}°: {g:e} vs peak {peak:e}");
        }
    }

    #[test]
    fn degenerate_steer_direction_is_an_error() {
        // Block the steer direction itself. The sector is symmetric about
        // 0°, so the angle mirroring introduced by the transpose in the
        // gain expression maps it onto itself.
        let p = spatial_null_projector((-2.0, 2.0), 0.5, &cfg(8)).unwrap();
        let x = generate_orthogonal(8, 32).unwrap();
        let r = coherence(&project_waveform(&p, &x).unwrap()).unwrap();
        let err = composite_gain(&r, 10.0, 0.0, default_normalization(8), &cfg(8));
        assert!(matches!(err, Err(Error::Numeric(_))));
    }

    #[test]
    fn sweep_turns_degenerate_points_into_gaps() {
        let p = spatial_null_projector((-2.0, 2.0), 0.5, &cfg(8)).unwrap();
        let x = generate_orthogonal(8, 32).unwrap();
        let r = coherence(&project_waveform(&p, &x).unwrap()).unwrap();
        let grid = [-5.0, 0.0, 5.0];
        let result = sweep(&r, 0.0, &grid, &cfg(8)).unwrap();
        assert!(result.points.is_empty());
        assert_eq!(result.gaps, grid);
    }

    #[test]
    fn single_point_sweep_at_the_steer_angle_reads_zero_db() {
        let result = sweep(&identity_r(8), 12.0, &[12.0], &cfg(8)).unwrap();
        assert_eq!(result.points.len(), 1);
        assert!(result.points[0].gain_db.abs() < 1e-9);
        assert!(result.gaps.is_empty());
    }

    #[test]
    fn sweep_rejects_an_empty_grid() {
        assert!(sweep(&identity_r(4), 0.0, &[], &cfg(4)).is_err());
    }

    #[test]
    fn broadside_pattern_is_symmetric() {
        let r = identity_r(8);
        let grid: Vec<f64> = (0..=180).map(|i| -90.0 + i as f64).collect();
        let result = sweep(&r, 0.0, &grid, &cfg(8)).unwrap();
        let n = result.points.len();
        for i in 0..n / 2 {
            let lhs = result.points[i].gain;
            let rhs = result.points[n - 1 - i].gain;
            assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.max(rhs).max(1e-30),
                "asymmetry at ±{}°",
                result.points[n - 1 - i].theta_deg
            );
        }
    }

    #[test]
    fn identity_coherence_reduces_to_the_array_factor_closed_form() {
        let m = 8;
        let k = default_normalization(m);
        let a_cfg = cfg(m);
        let grid: Vec<f64> = (0..=360).map(|i| -90.0 + 0.5 * i as f64).collect();
        let result = sweep(&identity_r(m), -20.0, &grid, &a_cfg).unwrap();
        for p in &result.points {
            let probe = steering_vector(&a_cfg, p.theta_deg).unwrap();
            let steer = steering_vector(&a_cfg, -20.0).unwrap();
            let inner = steering_inner(&probe.entries, &steer.entries).norm_sqr();
            let closed = k * inner * inner / (m * m) as f64;
            assert!(
                (p.gain - closed).abs() <= 1e-10 * closed.max(1e-30),
                "closed form off at {}°",
                p.theta_deg
            );
        }
    }

    #[test]
    fn gain_is_homogeneous_in_the_coherence_scale() {
        // |aᴴRᵀa_D|² grows quadratically and the transmit-power denominator
        // linearly, so the raw gain scales linearly with c — and the
        // peak-normalized pattern is therefore scale invariant.
        let r = eigen_nulled_r(8);
        let c = 7.3;
        let scaled = CoherenceMatrix {
            entries: r.entries.scale(crate::linalg::c64(c, 0.0)),
        };
        let k = default_normalization(8);
        for theta in [-30.0, -7.0, 0.0, 15.0] {
            let g0 = composite_gain(&r, theta, 0.0, k, &cfg(8)).unwrap();
            let g1 = composite_gain(&scaled, theta, 0.0, k, &cfg(8)).unwrap();
            // Additive floor: gains at nulled directions are pure roundoff
            // (~1e−33) where ratios are meaningless.
            assert!((g1 - c * g0).abs() <= 1e-10 * c * g0 + 1e-30);
        }

        let grid: Vec<f64> = (0..=180).map(|i| -90.0 + i as f64).collect();
        let mut p0 = sweep(&r, 0.0, &grid, &cfg(8)).unwrap();
        let mut p1 = sweep(&scaled, 0.0, &grid, &cfg(8)).unwrap();
        p0.normalize_to_peak().unwrap();
        p1.normalize_to_peak().unwrap();
        for (a, b) in p0.points.iter().zip(&p1.points) {
            assert!((a.gain - b.gain).abs() <= 1e-10 * a.gain + 1e-30);
        }
    }

    #[test]
    fn peak_normalization_moves_the_peak_to_zero_db() {
        let r = eigen_nulled_r(8);
        let grid: Vec<f64> = (0..=180).map(|i| -90.0 + i as f64).collect();
        let mut result = sweep(&r, 0.0, &grid, &cfg(8)).unwrap();
        let k_before = result.normalization;
        let peak_before = result.peak_gain().unwrap();
        result.normalize_to_peak().unwrap();
        assert!((result.peak_gain().unwrap() - 1.0).abs() < 1e-12);
        assert!((result.normalization - k_before / peak_before).abs() <= 1e-15);
        let best = result
            .points
            .iter()
            .map(|p| p.gain_db)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(best.abs() < 1e-9);
    }

    #[test]
    fn vanishing_gains_hit_the_db_floor() {
        let theta = libm::asin(0.25).to_degrees();
        let result = sweep(&identity_r(8), 0.0, &[theta], &cfg(8)).unwrap();
        assert_eq!(result.points[0].gain_db, DB_FLOOR_DB);
    }

    proptest! {
        #[test]
        fn gains_are_nonnegative_and_bounded_at_identity(
            theta in -90.0f64..=90.0,
            theta_d in -80.0f64..=80.0,
        ) {
            let g = composite_gain(
                &identity_r(8),
                theta,
                theta_d,
                default_normalization(8),
                &cfg(8),
            )
            .unwrap();
            prop_assert!(g >= 0.0);
            // With R = I the steered peak is the global maximum (value 1).
            prop_assert!(g <= 1.0 + 1e-12);
        }
    }
}
