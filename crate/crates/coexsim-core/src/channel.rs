//! The radar→base-station interference channel.
//!
//! Each propagation path (direct line of sight, or a sea-surface
//! reflection) contributes a rank-one term: with equal per-pair attenuation
//! a, base distance d between the two reference elements, and incidence
//! angles φ_M (radar) and φ_N (BS), the gain from radar element k to BS
//! element i is
//!
//! ```text
//! h_ik = a · e^{−j2π d_ik / λ_c},
//! d_ik = d + (i−1)·Δ_N·λ_c·cos φ_N − (k−1)·Δ_M·λ_c·cos φ_M,
//! ```
//!
//! the first-order (parallel-ray) expansion of the element-pair distance.
//! Collecting the per-element phase progressions into unit spatial
//! signatures turns the N×M path matrix into an outer product
//!
//! ```text
//! H = a·√(NM)·e^{−j2πd/λ_c} · e_N(Ω_N) · e_M(Ω_M)*ᵀ,   Ω = cos φ,
//! ```
//!
//! and the overall channel is the sum of such terms over all paths. The
//! physically interesting regime here is one LoS path plus at most one
//! reflection, but the sum is implemented for any path count.

use crate::error::{Error, Result};
use crate::geometry::{direction_cosine, spatial_signature, ArrayConfig};
use crate::linalg::{cis, CMat, C64};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// One propagation path between the radar and the BS.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct PathSpec {
    /// Real amplitude attenuation a, equal for all element pairs.
    pub attenuation: f64,
    /// Path length d in meters between radar element 1 and BS element 1.
    pub base_distance: f64,
    /// Incidence angle φ_M at the radar array, degrees from the array axis.
    ///
    /// Use [`crate::geometry::incidence_from_look`] to derive this from a
    /// broadside look angle.
    pub radar_incidence_deg: f64,
    /// Incidence angle φ_N at the BS array, degrees from the array axis.
    pub bs_incidence_deg: f64,
}

impl PathSpec {
    /// Check the field invariants: positive attenuation and distance,
    /// incidence angles strictly inside (0°, 180°) so both direction
    /// cosines are interior points of [−1, 1].
    pub fn validate(&self) -> Result<()> {
        if !(self.attenuation > 0.0) || !self.attenuation.is_finite() {
            return Err(Error::InvalidArgument(
                "path attenuation must be positive and finite",
            ));
        }
        if !(self.base_distance > 0.0) || !self.base_distance.is_finite() {
            return Err(Error::InvalidArgument(
                "path base distance must be positive and finite",
            ));
        }
        for angle in [self.radar_incidence_deg, self.bs_incidence_deg] {
            if !(angle > 0.0 && angle < 180.0) {
                return Err(Error::InvalidArgument(
                    "path incidence angles must lie strictly inside (0, 180) degrees",
                ));
            }
        }
        Ok(())
    }
}

/// N×M interference channel matrix H (rows: BS elements, columns: radar
/// elements) together with the number of paths that built it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    /// The complex gain matrix H.
    pub entries: CMat,
    /// Number of constituent propagation paths.
    pub num_paths: usize,
}

/// Shared precondition checks for the per-element operations.
fn check_element_indices(
    path: &PathSpec,
    i: usize,
    k: usize,
    radar_cfg: &ArrayConfig,
    bs_cfg: &ArrayConfig,
) -> Result<()> {
    path.validate()?;
    radar_cfg.validate()?;
    bs_cfg.validate()?;
    check_shared_carrier(radar_cfg, bs_cfg)?;
    if i < 1 || i > bs_cfg.num_elements {
        return Err(Error::InvalidArgument("BS element index out of range"));
    }
    if k < 1 || k > radar_cfg.num_elements {
        return Err(Error::InvalidArgument("radar element index out of range"));
    }
    Ok(())
}

/// Both arrays must share one carrier; the channel phases make no sense
/// otherwise.
fn check_shared_carrier(radar_cfg: &ArrayConfig, bs_cfg: &ArrayConfig) -> Result<()> {
    let (a, b) = (radar_cfg.carrier_wavelength, bs_cfg.carrier_wavelength);
    if (a - b).abs() > 1e-12 * a.abs() {
        return Err(Error::InvalidArgument(
            "radar and BS arrays must share one carrier wavelength",
        ));
    }
    Ok(())
}

/// First-order distance between BS element i and radar element k (1-based)
/// along `path`:
/// d_ik = d + (i−1)·Δ_N·λ_c·cos φ_N − (k−1)·Δ_M·λ_c·cos φ_M.
pub fn pairwise_distance(
    path: &PathSpec,
    i: usize,
    k: usize,
    radar_cfg: &ArrayConfig,
    bs_cfg: &ArrayConfig,
) -> Result<f64> {
    check_element_indices(path, i, k, radar_cfg, bs_cfg)?;
    let lambda = radar_cfg.carrier_wavelength;
    let bs_term = (i - 1) as f64
        * bs_cfg.normalized_spacing
        * lambda
        * direction_cosine(path.bs_incidence_deg);
    let radar_term = (k - 1) as f64
        * radar_cfg.normalized_spacing
        * lambda
        * direction_cosine(path.radar_incidence_deg);
    Ok(path.base_distance + bs_term - radar_term)
}

/// Complex baseband gain h_ik = a·e^{−j2π d_ik/λ_c} for one element pair.
///
/// The phase is evaluated in factored form,
/// e^{−j2πd/λ}·e^{−j2π(i−1)Δ_N Ω_N}·e^{+j2π(k−1)Δ_M Ω_M}, rather than by
/// exponentiating d_ik directly: d is often 10⁵–10⁶ wavelengths, and
/// rounding d_ik/λ_c at that magnitude would wipe out the sub-wavelength
/// element offsets that carry all of the spatial structure. Factoring keeps
/// each term's phase argument either shared (the d term, identical for all
/// pairs) or small, and makes this entry agree with the rank-one
/// construction in [`los_channel`] to machine precision.
pub fn element_gain(
    path: &PathSpec,
    i: usize,
    k: usize,
    radar_cfg: &ArrayConfig,
    bs_cfg: &ArrayConfig,
) -> Result<C64> {
    check_element_indices(path, i, k, radar_cfg, bs_cfg)?;
    let base = cis(-TWO_PI * path.base_distance / radar_cfg.carrier_wavelength);
    let bs_phase = cis(
        -TWO_PI * (i - 1) as f64 * bs_cfg.normalized_spacing
            * direction_cosine(path.bs_incidence_deg),
    );
    let radar_phase = cis(
        TWO_PI * (k - 1) as f64 * radar_cfg.normalized_spacing
            * direction_cosine(path.radar_incidence_deg),
    );
    Ok(base * bs_phase * radar_phase * path.attenuation)
}

/// Rank-one channel of a single path:
/// H = a·√(NM)·e^{−j2πd/λ_c}·e_N(Ω_N)·e_M(Ω_M)*ᵀ.
pub fn los_channel(
    path: &PathSpec,
    radar_cfg: &ArrayConfig,
    bs_cfg: &ArrayConfig,
) -> Result<ChannelMatrix> {
    path.validate()?;
    radar_cfg.validate()?;
    bs_cfg.validate()?;
    check_shared_carrier(radar_cfg, bs_cfg)?;
    let n = bs_cfg.num_elements;
    let m = radar_cfg.num_elements;
    let e_n = spatial_signature(
        n,
        bs_cfg.normalized_spacing,
        direction_cosine(path.bs_incidence_deg),
    )?;
    let e_m = spatial_signature(
        m,
        radar_cfg.normalized_spacing,
        direction_cosine(path.radar_incidence_deg),
    )?;
    let coeff = cis(-TWO_PI * path.base_distance / radar_cfg.carrier_wavelength)
        * (path.attenuation * libm::sqrt((n * m) as f64));
    let entries = CMat::from_fn(n, m, |i, k| coeff * e_n.entries[i] * e_m.entries[k].conj());
    Ok(ChannelMatrix {
        entries,
        num_paths: 1,
    })
}

/// Sum of rank-one path channels: H = Σᵢ Hᵢ over all paths.
///
/// Accepts any nonempty path list; the numerical rank of the result is at
/// most min(N, M, number of distinct signature pairs).
pub fn multipath_channel(
    paths: &[PathSpec],
    radar_cfg: &ArrayConfig,
    bs_cfg: &ArrayConfig,
) -> Result<ChannelMatrix> {
    if paths.is_empty() {
        return Err(Error::InvalidArgument(
            "channel needs at least one propagation path",
        ));
    }
    let mut total = CMat::zeros(bs_cfg.num_elements, radar_cfg.num_elements);
    for path in paths {
        let h = los_channel(path, radar_cfg, bs_cfg)?;
        total = total.add(&h.entries);
    }
    Ok(ChannelMatrix {
        entries: total,
        num_paths: paths.len(),
    })
}

// ── Tests ────────────────────────────────────────────────────────────────
