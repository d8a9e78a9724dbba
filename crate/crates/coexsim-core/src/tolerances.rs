//! Numeric tolerances shared across modules.
//!
//! Every threshold that decides "is this zero / degenerate / converged"
//! lives here with its justification, so there are no ad-hoc magic numbers
//! scattered through the numerics. Tolerances that are private to a single
//! algorithm (e.g. the Jacobi sweep stopping test) stay in their module.

/// Relative cutoff deciding which singular values count as nonzero.
///
/// A singular value σ_u is treated as zero when σ_u ≤ `RANK_REL_TOL` · σ₁.
/// A strict "> 0" test is meaningless in floating point: a rank-2 channel
/// built from two rank-one terms carries trailing singular values at the
/// 1e−16·σ₁ rounding floor. 1e−8 sits ~8 orders of magnitude above that
/// floor and ~8 below any physically meaningful mode, and is scale-invariant
/// because it is relative to σ₁.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Guard below which the beampattern / GLRT denominator aᴴ(θ_D) Rᵀ a(θ_D)
/// is considered fully nulled and the expression undefined.
///
/// The denominator is ‖·‖²-like and O(M) ≈ 1e1–1e2 for live directions;
/// a projector that nulls the steering direction leaves residuals at the
/// (1e−16·M)² ≈ 1e−28 rounding floor. 1e−12 separates the two regimes by
/// many orders of magnitude on either side.
pub const PATTERN_DENOM_GUARD: f64 = 1e-12;

/// Linear gains below this report the dB floor instead of log10(0) = −∞.
///
/// Exact pattern nulls produce gains at the squared-rounding floor
/// (≈ 1e−32); anything below 1e−30 is indistinguishable from an exact zero
/// and is clamped so CSV output stays finite.
pub const DB_FLOOR_LINEAR: f64 = 1e-30;

/// The dB value reported for gains below [`DB_FLOOR_LINEAR`].
///
/// −300 dB sits just below 10·log10(1e−30) and well outside any plottable
/// range, so floored points are visually and numerically unmistakable.
pub const DB_FLOOR_DB: f64 = -300.0;

#[cfg(test)]
mod tests {
    use super::*;

    /// The cutoffs must keep their relative ordering: the rank cutoff is a
    /// relative test far above floating-point noise, the denominator guard
    /// sits below it, and the dB floor is below everything a squared
    /// residual can reach.
    #[test]
    fn tolerance_ordering_is_sane() {
        assert!(RANK_REL_TOL > f64::EPSILON * 100.0);
        assert!(PATTERN_DENOM_GUARD < RANK_REL_TOL);
        assert!(DB_FLOOR_LINEAR < PATTERN_DENOM_GUARD * PATTERN_DENOM_GUARD);
        assert!(DB_FLOOR_DB <= 10.0 * libm::log10(DB_FLOOR_LINEAR));
    }

    #[test]
    fn all_tolerances_positive_where_required() {
        assert!(RANK_REL_TOL > 0.0);
        assert!(PATTERN_DENOM_GUARD > 0.0);
        assert!(DB_FLOOR_LINEAR > 0.0);
        assert!(DB_FLOOR_DB.is_finite());
    }
}
