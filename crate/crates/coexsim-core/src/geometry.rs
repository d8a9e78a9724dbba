//! Uniform linear arrays: configurations, spatial signatures, steering
//! vectors, and the angle conventions tying the channel model to the
//! pattern/detector sweeps.
//!
//! Two angle conventions coexist in this crate and both appear below:
//!
//! - **Incidence angles** φ (degrees from the array *axis*) describe
//!   propagation paths in the channel model and enter phases through the
//!   direction cosine Ω = cos φ. Broadside is φ = 90°.
//! - **Look angles** θ (degrees from *broadside*) describe where the radar
//!   steers or scans and enter phases through sin θ.
//!
//! [`incidence_from_look`] converts between them; its doc comment explains
//! why the offset is +θ rather than −θ.
//!
//! All phases use the negative-exponent convention e^{−j2πx}.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{cis, CMat, C64};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Geometry of one uniform linear array.
///
/// Spacing is *normalized*: the physical element pitch is
/// `normalized_spacing · carrier_wavelength` meters. Half-wavelength
/// spacing (0.5) keeps the array free of grating lobes over the full
/// visible region.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ArrayConfig {
    /// Number of elements (M for the radar array, N for the base station).
    pub num_elements: usize,
    /// Element pitch in carrier wavelengths (Δ).
    pub normalized_spacing: f64,
    /// Carrier wavelength λ_c in meters.
    pub carrier_wavelength: f64,
}

impl ArrayConfig {
    /// Validated constructor.
    pub fn new(num_elements: usize, normalized_spacing: f64, carrier_wavelength: f64) -> Result<Self> {
        let cfg = ArrayConfig {
            num_elements,
            normalized_spacing,
            carrier_wavelength,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check the field invariants (element count ≥ 1, positive finite
    /// spacing and wavelength).
    pub fn validate(&self) -> Result<()> {
        if self.num_elements < 1 {
            return Err(Error::InvalidArgument("array needs at least one element"));
        }
        if !(self.normalized_spacing > 0.0) || !self.normalized_spacing.is_finite() {
            return Err(Error::InvalidArgument(
                "normalized element spacing must be positive and finite",
            ));
        }
        if !(self.carrier_wavelength > 0.0) || !self.carrier_wavelength.is_finite() {
            return Err(Error::InvalidArgument(
                "carrier wavelength must be positive and finite",
            ));
        }
        Ok(())
    }
}

/// Direction cosine Ω = cos φ of an incidence angle given in degrees.
pub fn direction_cosine(incidence_deg: f64) -> f64 {
    libm::cos(incidence_deg.to_radians())
}

/// Convert a radar look angle θ (degrees from broadside) into the incidence
/// angle φ (degrees from the array axis) of a path arriving from that look
/// direction: φ = 90° + θ.
///
/// The offset is +θ rather than −θ for a subtle reason: the beampattern and
/// detector expressions probe the waveform coherence matrix through a
/// *plain* (non-conjugating) transpose, which mirrors the conjugated array
/// phases — a projector that nulls the signature at cos φ produces its
/// pattern null at the look angle θ satisfying sin θ = −cos φ. Choosing
/// φ = 90° + θ (so cos φ = −sin θ) therefore places the transmit-pattern
/// and detection nulls at the look angle the path was specified with, which
/// is what a scenario author expects.
pub fn incidence_from_look(theta_deg: f64) -> f64 {
    90.0 + theta_deg
}

// ── Spatial signatures ───────────────────────────────────────────────────

/// Unit-norm phase-progression vector e_l(Ω) of an l-element ULA for
/// direction cosine Ω.
///
/// Entry k (1-based) is (1/√l)·e^{−j2π(k−1)ΔΩ}; the 1/√l factor makes the
/// vector an orthonormal-friendly basis direction, so a rank-1 channel
/// built from two signatures carries its amplitude in an explicit scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialSignature {
    /// The l complex entries, Euclidean norm 1.
    pub entries: Vec<C64>,
    /// Ω = cos φ of the represented direction.
    pub direction_cosine: f64,
}

/// Build the unit spatial signature e_l(Ω).
///
/// Rejects `l = 0` and direction cosines outside [−1, 1] (those do not
/// correspond to any physical incidence angle).
pub fn spatial_signature(l: usize, spacing: f64, omega: f64) -> Result<SpatialSignature> {
    if l < 1 {
        return Err(Error::InvalidArgument(
            "spatial signature needs at least one element",
        ));
    }
    if !(omega.abs() <= 1.0) {
        return Err(Error::InvalidArgument(
            "direction cosine must lie in [-1, 1]",
        ));
    }
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidArgument(
            "normalized element spacing must be positive and finite",
        ));
    }
    let scale = 1.0 / libm::sqrt(l as f64);
    let entries = (0..l)
        .map(|k| cis(-2.0 * core::f64::consts::PI * k as f64 * spacing * omega) * scale)
        .collect();
    Ok(SpatialSignature {
        entries,
        direction_cosine: omega,
    })
}

// ── Steering vectors ─────────────────────────────────────────────────────

/// Unnormalized steering vector a(θ) toward look angle θ.
///
/// Entry k (1-based) is e^{−j2π(k−1)Δ sin θ}; the first entry is exactly 1
/// and every entry has unit magnitude, so ‖a‖² = M and aᴴ(θ)a(θ) = M.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    /// The M complex unit-magnitude entries.
    pub entries: Vec<C64>,
    /// Look angle θ in degrees from broadside.
    pub look_angle_deg: f64,
}

/// Build the steering vector a(θ) for `cfg`'s array.
///
/// Look angles are restricted to the visible region [−90°, 90°].
pub fn steering_vector(cfg: &ArrayConfig, theta_deg: f64) -> Result<SteeringVector> {
    cfg.validate()?;
    if !(theta_deg.abs() <= 90.0) {
        return Err(Error::InvalidArgument(
            "look angle must lie in [-90, 90] degrees",
        ));
    }
    let s = libm::sin(theta_deg.to_radians());
    let entries = (0..cfg.num_elements)
        .map(|k| cis(-2.0 * core::f64::consts::PI * k as f64 * cfg.normalized_spacing * s))
        .collect();
    Ok(SteeringVector {
        entries,
        look_angle_deg: theta_deg,
    })
}

/// Transmit–receive steering matrix A(θ) = a(θ)·a(θ)ᵀ of a colocated
/// monostatic array (plain transpose — A is complex symmetric, not
/// Hermitian, and has rank 1).
pub fn steering_matrix(cfg: &ArrayConfig, theta_deg: f64) -> Result<CMat> {
    let a = steering_vector(cfg, theta_deg)?;
    let m = a.entries.len();
    Ok(CMat::from_fn(m, m, |i, j| a.entries[i] * a.entries[j]))
}

// ── Tests ────────────────────────────────────────────────────────────────
