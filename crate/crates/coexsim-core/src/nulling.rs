//! Projection matrices that keep radar energy out of the interference
//! channel, plus the MVDR receive beamformer.
//!
//! Two constructions are compared throughout the crate:
//!
//! - **Eigen-nulling** decomposes the channel H = U·Σ̃·Vᴴ, zeroes the
//!   singular-value weights of the q dominant right singular directions
//!   (σ′_u = 0 for u ≤ q, 1 for u > q), and forms P = V·Σ̃′·Vᴴ — the
//!   orthogonal projector onto the channel's numerical null space. Radar
//!   waveforms multiplied by P produce (numerically) zero power at the BS
//!   while losing only q of M transmit dimensions.
//! - **Spatial nulling** blocks an angular *sector* instead: steering
//!   vectors sampled across the blocked interval form a dictionary B, and
//!   the projector is onto the orthogonal complement of span(B). This is
//!   the baseline the eigen approach is measured against — it spends far
//!   more degrees of freedom than the channel actually occupies.
//!
//! Both produce a [`ProjectionMatrix`]: Hermitian, idempotent, eigenvalues
//! in {0, 1}, trace equal to the retained dimension count.

use alloc::vec::Vec;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::geometry::{steering_vector, ArrayConfig};
use crate::linalg::{self, CMat, C64};
use crate::tolerances::RANK_REL_TOL;
use crate::waveform::CoherenceMatrix;

/// Default angular sampling step (degrees) for the spatial-nulling
/// dictionary. Half a degree keeps adjacent dictionary columns well inside
/// a beamwidth of every array size used here, so the sector is blocked
/// continuously, not just at the sampled angles.
pub const DEFAULT_SPATIAL_GRID_STEP_DEG: f64 = 0.5;

/// Singular value decomposition of a channel matrix, H = U·diag(σ̃)·Vᴴ.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left singular vectors, N×N unitary.
    pub left_vectors: CMat,
    /// Singular values σ̃₁ ≥ … ≥ σ̃_p ≥ 0, p = min(N, M).
    pub singular_values: Vec<f64>,
    /// Right singular vectors, M×M unitary.
    pub right_vectors: CMat,
}

/// Decompose an N×M matrix.
pub fn decompose(h: &CMat) -> Result<SvdResult> {
    let f = linalg::svd(h)?;
    Ok(SvdResult {
        left_vectors: f.u,
        singular_values: f.sigma,
        right_vectors: f.v,
    })
}

/// Hermitian idempotent projector P together with its retained dimension
/// count (trace).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    /// M×M projector entries.
    pub entries: CMat,
    /// Dimension of the retained subspace, M − q = trace(P).
    pub nullity: usize,
}

impl ProjectionMatrix {
    /// The do-nothing projector (q = 0).
    pub fn identity(m: usize) -> Self {
        ProjectionMatrix {
            entries: CMat::identity(m),
            nullity: m,
        }
    }
}

/// Count the singular values that are numerically nonzero: those exceeding
/// `tolerance · σ̃₁`. An all-zero (or empty) spectrum has rank 0.
///
/// The relative threshold makes the count invariant under scaling of the
/// underlying matrix, which a strict "> 0" test is not in floating point.
pub fn effective_rank(singular_values: &[f64], tolerance: f64) -> usize {
    let largest = match singular_values.first() {
        Some(&s) if s > 0.0 => s,
        _ => return 0,
    };
    singular_values
        .iter()
        .filter(|&&s| s > tolerance * largest)
        .count()
}

/// Form the projector P = V·Σ̃′·Vᴴ that suppresses the first q right
/// singular directions: Σ̃′ is diagonal with σ′_u = 0 for u ≤ q and 1 for
/// u > q (indices beyond p = min(N, M), whose singular values are
/// identically zero, are retained).
pub fn projection_matrix(svd: &SvdResult, q: usize) -> Result<ProjectionMatrix> {
    let m = svd.right_vectors.nrows();
    if q > m {
        return Err(Error::InvalidArgument(
            "cannot null more directions than the array has elements",
        ));
    }
    let sigma_mod = CMat::from_fn(m, m, |i, j| {
        if i == j && i >= q {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = &svd.right_vectors;
    let entries = v.mul(&sigma_mod).mul(&v.adjoint());
    Ok(ProjectionMatrix {
        entries,
        nullity: m - q,
    })
}

/// Eigen-nulling projector of a channel: SVD → effective rank → projector.
///
/// A zero channel has rank 0 and yields the identity (nothing to null).
pub fn eigen_null_projector(h: &ChannelMatrix, tolerance: f64) -> Result<ProjectionMatrix> {
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidArgument(
            "rank tolerance must be positive and finite",
        ));
    }
    let svd = decompose(&h.entries)?;
    let q = effective_rank(&svd.singular_values, tolerance);
    projection_matrix(&svd, q)
}

/// Sector-blocking projector: sample a(θ) over the blocked interval at
/// `grid_step` degrees, stack the samples as columns of a dictionary B, and
/// project onto the orthogonal complement of span(B) — the null space of
/// Bᴴ. The span dimension is measured with the same relative singular-value
/// threshold as eigen-nulling ([`RANK_REL_TOL`]).
///
/// A zero-width interval blocks exactly one steering direction.
pub fn spatial_null_projector(
    blocked_deg: (f64, f64),
    grid_step_deg: f64,
    radar_cfg: &ArrayConfig,
) -> Result<ProjectionMatrix> {
    radar_cfg.validate()?;
    let (lo, hi) = blocked_deg;
    if !(lo <= hi) {
        return Err(Error::InvalidArgument(
            "blocked sector must satisfy lo <= hi",
        ));
    }
    if !(lo >= -90.0 && hi <= 90.0) {
        return Err(Error::InvalidArgument(
            "blocked sector must lie inside [-90, 90] degrees",
        ));
    }
    if !(grid_step_deg > 0.0) || !grid_step_deg.is_finite() {
        return Err(Error::InvalidArgument(
            "spatial grid step must be positive and finite",
        ));
    }
    let m = radar_cfg.num_elements;
    // Inclusive sampling of [lo, hi]; the 1e−9 slack absorbs accumulated
    // representation error so an endpoint that is an exact multiple of the
    // step is not dropped.
    let count = (libm::floor((hi - lo) / grid_step_deg + 1e-9) as usize) + 1;
    let mut dictionary = CMat::zeros(m, count);
    for j in 0..count {
        let theta = lo + j as f64 * grid_step_deg;
        let a = steering_vector(radar_cfg, theta.min(90.0))?;
        for i in 0..m {
            *dictionary.at_mut(i, j) = a.entries[i];
        }
    }
    let f = linalg::svd(&dictionary)?;
    let r = effective_rank(&f.sigma, RANK_REL_TOL);
    // P = I − Σ_{u ≤ r} u_u·u_uᴴ over the dictionary's occupied directions.
    let mut entries = CMat::identity(m);
    for u in 0..r {
        let col = f.u.col(u);
        for i in 0..m {
            for j in 0..m {
                let v = entries.at(i, j) - col[i] * col[j].conj();
                *entries.at_mut(i, j) = v;
            }
        }
    }
    Ok(ProjectionMatrix {
        entries,
        nullity: m - r,
    })
}

/// Beamformer weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamWeights {
    /// The M complex weights w.
    pub entries: Vec<C64>,
}

/// Minimum variance distortionless response weights
/// w = R⁻¹x / (xᴴR⁻¹x): the unique minimizer of wᴴRw subject to wᴴx = 1.
///
/// R must be comfortably invertible (smallest singular value above
/// 1e−12 · largest); no regularization is applied here, so callers facing
/// ill-conditioned covariances must add diagonal loading before the call.
pub fn mvdr_weights(r: &CoherenceMatrix, x: &[C64]) -> Result<BeamWeights> {
    let m = r.entries.nrows();
    if r.entries.ncols() != m {
        return Err(Error::InvalidArgument("covariance matrix must be square"));
    }
    if x.len() != m {
        return Err(Error::InvalidArgument(
            "constraint vector length must match the covariance size",
        ));
    }
    if x.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Err(Error::InvalidArgument("constraint vector must be nonzero"));
    }
    let spectrum = linalg::svd(&r.entries)?;
    let largest = spectrum.sigma.first().copied().unwrap_or(0.0);
    let smallest = spectrum.sigma.last().copied().unwrap_or(0.0);
    if smallest <= 1e-12 * largest {
        return Err(Error::Numeric(
            "covariance numerically singular; add diagonal loading upstream",
        ));
    }
    let unnormalized = linalg::solve(&r.entries, x)?;
    let mut denom = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(&unnormalized) {
        denom += xi.conj() * wi;
    }
    // xᴴR⁻¹x > 0 for Hermitian positive definite R; the singularity check
    // above keeps it well away from zero.
    let inv = C64::new(1.0, 0.0) / denom;
    Ok(BeamWeights {
        entries: unnormalized.into_iter().map(|w| w * inv).collect(),
    })
}

// ── Tests ────────────────────────────────────────────────────────────────
