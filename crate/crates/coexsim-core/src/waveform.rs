//! Radar waveform blocks: orthogonal generation, coherence matrices, and
//! projector application.
//!
//! A waveform block X is an M×L matrix — one row per transmit element, one
//! column per time sample x(n). Its coherence matrix R = (1/L)·X·Xᴴ
//! captures everything the beampattern and detector need to know about the
//! transmitted signals; orthogonal waveforms give R = I, and projecting the
//! block through P gives R̃ = P·R·Pᴴ (= P itself when R = I and P is a
//! Hermitian idempotent projector).

use crate::error::{Error, Result};
use crate::linalg::{cis, CMat, C64};
use crate::nulling::ProjectionMatrix;

/// Default number of samples per block. Comfortably above the largest
/// element counts exercised here (orthogonality needs L ≥ M) while keeping
/// Monte Carlo detection loops fast.
pub const DEFAULT_NUM_SAMPLES: usize = 128;

/// One block of transmitted radar waveforms.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformBlock {
    /// M×L sample matrix; row m is the waveform of transmit element m.
    pub samples: CMat,
    /// Number of time samples L (mirror of `samples.ncols()`).
    pub num_samples: usize,
}

/// Time-averaged waveform cross-correlation R = (1/L)·X·Xᴴ.
///
/// Hermitian positive semidefinite by construction; exactly the identity
/// for an orthogonal block.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceMatrix {
    /// M×M Hermitian PSD matrix R.
    pub entries: CMat,
}

/// Generate a deterministic orthogonal waveform block.
///
/// Row m, sample n (both 1-based) is e^{+j2π(m−1)(n−1)/L}: each element
/// transmits a sampled complex exponential at its own discrete frequency,
/// which makes the rows exactly orthogonal for any L ≥ M (geometric-sum
/// cancellation) with unit per-sample power.
pub fn generate_orthogonal(num_elements: usize, num_samples: usize) -> Result<WaveformBlock> {
    if num_elements < 1 {
        return Err(Error::InvalidArgument(
            "waveform block needs at least one element",
        ));
    }
    if num_samples < num_elements {
        return Err(Error::InvalidArgument(
            "orthogonal waveforms need at least as many samples as elements",
        ));
    }
    let step = 2.0 * core::f64::consts::PI / num_samples as f64;
    let samples = CMat::from_fn(num_elements, num_samples, |m, n| {
        cis(step * (m * n) as f64)
    });
    Ok(WaveformBlock {
        samples,
        num_samples,
    })
}

/// Compute the coherence matrix R = (1/L)·X·Xᴴ of a block.
pub fn coherence(block: &WaveformBlock) -> Result<CoherenceMatrix> {
    let l = block.samples.ncols();
    if l < 1 {
        return Err(Error::InvalidArgument("waveform block has no samples"));
    }
    let scale = C64::new(1.0 / l as f64, 0.0);
    let entries = block.samples.mul(&block.samples.adjoint()).scale(scale);
    Ok(CoherenceMatrix { entries })
}

/// Apply a projection matrix to a block column-wise: X̃ = P·X.
///
/// This is how nulling constraints reach the transmitted signal — every
/// time sample is projected into the projector's retained subspace.
pub fn project_waveform(p: &ProjectionMatrix, block: &WaveformBlock) -> Result<WaveformBlock> {
    if p.entries.ncols() != block.samples.nrows() {
        return Err(Error::InvalidArgument(
            "projector size does not match waveform element count",
        ));
    }
    Ok(WaveformBlock {
        samples: p.entries.mul(&block.samples),
        num_samples: block.num_samples,
    })
}

// ── Tests ────────────────────────────────────────────────────────────────
