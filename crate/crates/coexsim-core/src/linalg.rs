//! Dense complex matrices and the two factorizations the simulator needs.
//!
//! Everything here is sized for arrays of at most a few hundred antenna
//! elements, so the implementations favor accuracy, determinism, and
//! `no_std` portability over asymptotic speed:
//!
//! - [`svd`] is a one-sided complex Jacobi iteration. Jacobi SVD is slower
//!   than bidiagonalization-based methods but converges to high relative
//!   accuracy, needs no shifts or deflation heuristics, and is ~150 lines of
//!   dependency-free code — all singular vectors come out as accumulated
//!   plane rotations, so `U` and `V` are unitary to working precision by
//!   construction.
//! - [`solve`] is Gaussian elimination with partial pivoting, used only for
//!   the small Hermitian systems behind MVDR weights.
//!
//! Matrices are row-major [`CMat`] values; complex scalars are
//! [`num_complex::Complex<f64>`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::error::{Error, Result};

/// Complex double-precision scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// e^{jφ} for a real phase φ (radians).
#[inline]
pub fn cis(phase: f64) -> C64 {
    Complex::new(libm::cos(phase), libm::sin(phase))
}

// ── Matrix type ──────────────────────────────────────────────────────────

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    nrows: usize,
    ncols: usize,
    data: Vec<C64>,
}

impl CMat {
    /// All-zeros matrix.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CMat {
            nrows,
            ncols,
            data: vec![C64::new(0.0, 0.0); nrows * ncols],
        }
    }

    /// n×n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from an entry function `f(row, col)`.
    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        CMat { nrows, ncols, data }
    }

    /// Number of rows.
    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Entry (i, j) by value.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.data[i * self.ncols + j]
    }

    /// Mutable access to entry (i, j).
    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[i * self.ncols + j]
    }

    /// Matrix product `self · rhs`.
    ///
    /// Panics on dimension mismatch — shapes are a programming error here,
    /// not a runtime condition (all shapes in this crate are derived from
    /// validated configurations).
    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(
            self.ncols, rhs.nrows,
            "matrix product dimension mismatch: {}x{} · {}x{}",
            self.nrows, self.ncols, rhs.nrows, rhs.ncols
        );
        let mut out = CMat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let aik = self.at(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let v = out.at(i, j) + aik * rhs.at(k, j);
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    /// Matrix–vector product `self · x`.
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.ncols, x.len(), "matrix–vector dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.nrows];
        for i in 0..self.nrows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.ncols {
                acc += self.at(i, j) * x[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.ncols, self.nrows, |i, j| self.at(j, i).conj())
    }

    /// Plain (non-conjugating) transpose.
    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.ncols, self.nrows, |i, j| self.at(j, i))
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        CMat::from_fn(self.nrows, self.ncols, |i, j| self.at(i, j) + rhs.at(i, j))
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        CMat::from_fn(self.nrows, self.ncols, |i, j| self.at(i, j) - rhs.at(i, j))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: C64) -> CMat {
        CMat::from_fn(self.nrows, self.ncols, |i, j| self.at(i, j) * c)
    }

    /// Matrix trace (sum of diagonal entries).
    pub fn trace(&self) -> C64 {
        let n = self.nrows.min(self.ncols);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            acc += self.at(i, i);
        }
        acc
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for z in &self.data {
            acc += z.norm_sqr();
        }
        libm::sqrt(acc)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for z in &self.data {
            let a = z.norm();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Largest entrywise difference `max |self − rhs|`.
    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut m = 0.0f64;
        for (a, b) in self.data.iter().zip(&rhs.data) {
            let d = (a - b).norm();
            if d > m {
                m = d;
            }
        }
        m
    }

    /// Quadratic form through the plain transpose: `xᴴ · selfᵀ · y`.
    ///
    /// Several pattern/detector expressions probe the waveform coherence
    /// matrix through its transpose; evaluating Σᵢⱼ conj(xᵢ) A[j,i] yⱼ
    /// directly avoids materializing the transposed matrix.
    pub fn quad_transposed(&self, x: &[C64], y: &[C64]) -> C64 {
        assert_eq!(self.ncols, x.len(), "quad_transposed: x length mismatch");
        assert_eq!(self.nrows, y.len(), "quad_transposed: y length mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..self.nrows {
            let mut row = C64::new(0.0, 0.0);
            // Σᵢ conj(xᵢ)·A[j,i]
            for i in 0..self.ncols {
                row += x[i].conj() * self.at(j, i);
            }
            acc += row * y[j];
        }
        acc
    }

    /// Bilinear form with both vectors conjugated: `xᴴ · self · conj(y)`.
    ///
    /// This is the matched-filter pairing used by the GLRT numerator.
    pub fn conj_quad(&self, x: &[C64], y: &[C64]) -> C64 {
        assert_eq!(self.nrows, x.len(), "conj_quad: x length mismatch");
        assert_eq!(self.ncols, y.len(), "conj_quad: y length mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.nrows {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..self.ncols {
                row += self.at(i, j) * y[j].conj();
            }
            acc += x[i].conj() * row;
        }
        acc
    }

    /// Column j as a vector.
    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.nrows).map(|i| self.at(i, j)).collect()
    }
}

// ── Singular value decomposition ─────────────────────────────────────────

/// Result of [`svd`]: `a = u · diag(sigma) · vᴴ` with `u` (m×m) and `v`
/// (n×n) unitary and `sigma` (length min(m, n)) nonincreasing and ≥ 0.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors, m×m unitary.
    pub u: CMat,
    /// Singular values, length min(m, n), sorted descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors, n×n unitary.
    pub v: CMat,
}

/// Jacobi sweep stopping test: a column pair counts as orthogonal when
/// |⟨w_p, w_q⟩| ≤ JACOBI_TOL·‖w_p‖‖w_q‖. 1e−14 is ~50× machine epsilon;
/// normalized singular vectors then satisfy |u_pᴴ u_q| ≤ 1e−14 regardless
/// of the singular-value magnitudes.
const JACOBI_TOL: f64 = 1e-14;

/// Absolute term of the pair test, relative to ‖A‖_F². Whenever the input
/// has more columns than rank, the surplus columns collapse toward zero
/// while keeping generic mutual angles at their own ever-shrinking scale,
/// so a purely relative test keeps rotating them down into underflow and
/// the sweep never terminates. Inner products below this floor are pure
/// rounding noise and freeze instead; affected column norms stay below
/// ~1e−15·‖A‖_F, i.e. at roundoff level.
const JACOBI_ABS_FLOOR: f64 = 1e-30;

/// Columns whose final norm falls below this fraction of σ_max carry no
/// trustworthy direction — they are accumulated roundoff (and were frozen
/// by the absolute pair test before becoming mutually orthogonal). They
/// are replaced through basis completion rather than normalized into U.
const U_NEGLIGIBLE_REL: f64 = 1e-13;

/// Hard cap on Jacobi sweeps. Cyclic Jacobi converges quadratically once
/// off-diagonal mass is small; well-conditioned inputs need < 10 sweeps and
/// anything beyond 60 signals a genuine numerical problem.
const MAX_SWEEPS: usize = 60;

/// Full singular value decomposition by one-sided complex Jacobi rotations.
///
/// The iteration orthogonalizes the columns of a working copy `W` of `a` by
/// unitary 2×2 rotations applied on the right, accumulating the same
/// rotations into `V`. At convergence `W = U · diag(σ) · (scale)`, so the
/// nonzero columns of `W` normalize into left singular vectors; the left
/// basis is completed to a full unitary `U` with Gram–Schmidt against
/// identity seed vectors.
///
/// Errors with [`Error::Numeric`] if the sweep limit is exhausted.
pub fn svd(a: &CMat) -> Result<Svd> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut w = a.clone();
    let mut v = CMat::identity(n);

    // Overall scale for the absolute part of the pair test.
    let mut scale2 = 0.0f64;
    for i in 0..m {
        for j in 0..n {
            scale2 += w.at(i, j).norm_sqr();
        }
    }

    // Cyclic-by-rows sweeps over all column pairs (p, q), p < q.
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                // Hermitian 2×2 Gram block of columns p, q:
                //   [ alpha   gamma ]
                //   [ conj(g) beta  ]
                let mut alpha = 0.0f64;
                let mut beta = 0.0f64;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..m {
                    let wp = w.at(i, p);
                    let wq = w.at(i, q);
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                // Negated-polarity skip so a NaN (which should not occur,
                // but would otherwise rotate forever) also falls through.
                if !(g > JACOBI_TOL * libm::sqrt(alpha * beta) + JACOBI_ABS_FLOOR * scale2) {
                    continue;
                }
                rotated = true;

                // Rotation angle zeroing the Gram off-diagonal:
                // tan(2θ) = 2|γ| / (α − β), solved in the numerically stable
                // tangent form; ψ carries the phase of γ.
                let tau = (alpha - beta) / (2.0 * g);
                let t = {
                    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sign / (libm::fabs(tau) + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let phase = gamma / g; // e^{jψ}
                let sp = phase * s; //  s·e^{jψ}
                let spc = phase.conj() * s; //  s·e^{−jψ}

                // Columns [w_p, w_q] ← [w_p, w_q] · G with
                // G = [[c, −s e^{jψ}], [s e^{−jψ}, c]].
                for i in 0..m {
                    let wp = w.at(i, p);
                    let wq = w.at(i, q);
                    *w.at_mut(i, p) = wp * c + wq * spc;
                    *w.at_mut(i, q) = wq * c - wp * sp;
                }
                for i in 0..n {
                    let vp = v.at(i, p);
                    let vq = v.at(i, q);
                    *v.at_mut(i, p) = vp * c + vq * spc;
                    *v.at_mut(i, q) = vq * c - vp * sp;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("svd: Jacobi iteration did not converge"));
    }

    // Column norms are the (unsorted) singular values.
    let mut norms: Vec<f64> = (0..n)
        .map(|j| {
            let mut acc = 0.0;
            for i in 0..m {
                acc += w.at(i, j).norm_sqr();
            }
            libm::sqrt(acc)
        })
        .collect();

    // Stable descending order by norm.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("norms are finite"));
    let w_sorted = CMat::from_fn(m, n, |i, j| w.at(i, order[j]));
    let v_sorted = CMat::from_fn(n, n, |i, j| v.at(i, order[j]));
    norms = order.iter().map(|&j| norms[j]).collect();

    // Left singular vectors: normalized nonzero columns of W, completed to
    // an orthonormal basis of C^m with Gram–Schmidt over identity seeds.
    let sigma_max = norms.first().copied().unwrap_or(0.0);
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    for j in 0..n.min(m) {
        // Roundoff-level columns carry no usable direction; leave them
        // for the completion pass instead of normalizing noise.
        if norms[j] > sigma_max * U_NEGLIGIBLE_REL {
            let inv = 1.0 / norms[j];
            u_cols.push((0..m).map(|i| w_sorted.at(i, j) * inv).collect());
        } else {
            break;
        }
    }
    complete_orthonormal_basis(&mut u_cols, m);
    let u = CMat::from_fn(m, m, |i, j| u_cols[j][i]);

    let mut sigma: Vec<f64> = norms.into_iter().take(m.min(n)).collect();
    // Columns beyond min(m, n)−1 of a wide matrix contribute nothing;
    // clamp any denormal leftovers of exact cancellations to zero.
    for s in sigma.iter_mut() {
        if *s < sigma_max * 1e-250 {
            *s = 0.0;
        }
    }

    Ok(Svd {
        u,
        sigma,
        v: v_sorted,
    })
}

/// Extend `cols` (orthonormal, possibly empty) to a full orthonormal basis
/// of C^dim using identity seed vectors and twice-iterated Gram–Schmidt.
fn complete_orthonormal_basis(cols: &mut Vec<Vec<C64>>, dim: usize) {
    let mut seed = 0usize;
    while cols.len() < dim && seed < dim {
        let mut cand: Vec<C64> = (0..dim)
            .map(|i| {
                if i == seed {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        // Two projection passes keep orthogonality at working precision
        // even when the seed is nearly inside the current span.
        for _ in 0..2 {
            for u in cols.iter() {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..dim {
                    proj += u[i].conj() * cand[i];
                }
                for i in 0..dim {
                    cand[i] -= proj * u[i];
                }
            }
        }
        let norm = libm::sqrt(cand.iter().map(|z| z.norm_sqr()).sum());
        if norm > 1e-3 {
            let inv = 1.0 / norm;
            for z in cand.iter_mut() {
                *z *= inv;
            }
            cols.push(cand);
        }
        seed += 1;
    }
    assert_eq!(cols.len(), dim, "basis completion exhausted its seeds");
}

// ── Linear solve ─────────────────────────────────────────────────────────

/// Solve `a · x = b` by Gaussian elimination with partial pivoting.
///
/// Errors with [`Error::Numeric`] when a pivot falls below 1e−300 in
/// magnitude (structurally singular input). Callers needing a
/// condition-number guarantee must check singular values themselves; this
/// routine only refuses exact breakdown.
pub fn solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidArgument("solve: matrix must be square"));
    }
    if b.len() != n {
        return Err(Error::InvalidArgument(
            "solve: right-hand side length mismatch",
        ));
    }
    let mut m = a.clone();
    let mut x: Vec<C64> = b.to_vec();

    for k in 0..n {
        // Partial pivot: largest magnitude in column k at or below row k.
        let mut piv = k;
        let mut best = m.at(k, k).norm();
        for i in (k + 1)..n {
            let v = m.at(i, k).norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best < 1e-300 {
            return Err(Error::Numeric("solve: singular matrix"));
        }
        if piv != k {
            for j in 0..n {
                let a = m.at(k, j);
                let b2 = m.at(piv, j);
                *m.at_mut(k, j) = b2;
                *m.at_mut(piv, j) = a;
            }
            x.swap(k, piv);
        }
        let inv = C64::new(1.0, 0.0) / m.at(k, k);
        for i in (k + 1)..n {
            let factor = m.at(i, k) * inv;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in k..n {
                let v = m.at(i, j) - factor * m.at(k, j);
                *m.at_mut(i, j) = v;
            }
            let update = factor * x[k];
            x[i] -= update;
        }
    }

    // Back substitution.
    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in (k + 1)..n {
            acc -= m.at(k, j) * x[j];
        }
        x[k] = acc / m.at(k, k);
    }
    Ok(x)
}

// ── Tests ────────────────────────────────────────────────────────────────
