//! Small quantum cohomology of `G(k, n)` in the wedge (Satake) model.
//!
//! `QH(G(k, n))` at `q` is the antisymmetric part of `QH(P^{n-1})^{(x) k}` at
//! `(-1)^{k-1} q`. Multiplication by `c_1 = n sigma_1` therefore has the
//! eigenvalues `u_{i_1} + ... + u_{i_k}`, sums of `k` distinct canonical
//! coordinates of the projective space.

mod eigen;
mod wedge;

use num_complex::Complex;

pub use eigen::{schur, DenseMatrix, Schur};
pub use wedge::{p_ell_operator, WedgeBasis, WedgeOperator, MAX_BASIS};

use crate::{Error, Real, Result};

/// Default cap on the dimension handed to the dense eigensolver.
pub const DEFAULT_EIGEN_GUARD: usize = 3000;

/// Eigenvalues (with multiplicity) and the Schur backward error.
#[derive(Clone, Debug)]
pub struct SpectrumResult<T> {
    pub eigenvalues: Vec<Complex<T>>,
    pub max_residual: T,
}

/// Canonical coordinates of `P^{n-1}` at the point `t sigma_1` shifted by
/// `(k_parity - 1) pi i`:
/// `u_h = n exp((t + (k_parity - 1) pi i) / n) zeta_n^{h-1}`, `h = 1..n`.
pub fn projective_coordinates<T: Real>(n: usize, t: T, k_parity: usize) -> Vec<Complex<T>> {
    let prefactor = coordinate_prefactor(n, t, k_parity);
    let w = T::TAU() / T::of_usize(n);
    (0..n)
        .map(|h| prefactor * Complex::from_polar(T::one(), w * T::of_usize(h)))
        .collect()
}

fn coordinate_prefactor<T: Real>(n: usize, t: T, k: usize) -> Complex<T> {
    let nf = T::of_usize(n);
    let arg = Complex::new(t, T::PI() * T::of_usize(k.saturating_sub(1))) / nf;
    arg.exp() * nf
}

/// Canonical coordinates of `G(k, n)` at `t sigma_1`: for every ascending
/// `k`-tuple, `n exp((t + (k-1) pi i)/n) (zeta^{i_1} + ... + zeta^{i_k})`.
/// Returned in lexicographic order of the tuples, with multiplicity.
pub fn grassmannian_coordinates_closed<T: Real>(
    n: usize,
    k: usize,
    t: T,
) -> Result<Vec<Complex<T>>> {
    let basis = WedgeBasis::new(n, k)?;
    let prefactor = coordinate_prefactor(n, t, k);
    let w = T::TAU() / T::of_usize(n);
    let roots: Vec<Complex<T>> = (0..n)
        .map(|h| Complex::from_polar(T::one(), w * T::of_usize(h)))
        .collect();
    Ok(basis
        .states()
        .map(|s| prefactor * s.iter().map(|&i| roots[i]).sum::<Complex<T>>())
        .collect())
}

/// Spectrum of an arbitrary wedge operator scaled by `scale`.
pub fn operator_spectrum<T: Real>(
    op: &WedgeOperator<T>,
    scale: T,
    tol: T,
    guard: usize,
) -> Result<SpectrumResult<T>> {
    let dim = op.dim();
    if dim > guard {
        return Err(Error::ResourceLimit(format!(
            "dimension {dim} exceeds the dense eigensolver guard {guard}"
        )));
    }
    let mut a = op.to_dense();
    for i in 0..dim {
        for j in 0..dim {
            a[(i, j)] = a[(i, j)] * scale;
        }
    }
    let s = schur(&a)?;
    let max_residual = s.backward_error(&a);
    if !(max_residual <= tol) {
        return Err(Error::NoConvergence(format!(
            "backward error {max_residual} above tolerance {tol}"
        )));
    }
    Ok(SpectrumResult {
        eigenvalues: s.eigenvalues(),
        max_residual,
    })
}

/// Eigenvalues of `c_1 * (-) = n sigma_1 * (-)` on `QH(G(k, n))` at `q`.
pub fn c1_spectrum<T: Real>(b: &WedgeBasis, q: Complex<T>, tol: T) -> Result<SpectrumResult<T>> {
    c1_spectrum_guarded(b, q, tol, DEFAULT_EIGEN_GUARD)
}

pub fn c1_spectrum_guarded<T: Real>(
    b: &WedgeBasis,
    q: Complex<T>,
    tol: T,
    guard: usize,
) -> Result<SpectrumResult<T>> {
    if b.len() > guard {
        return Err(Error::ResourceLimit(format!(
            "dimension {} exceeds the dense eigensolver guard {guard}",
            b.len()
        )));
    }
    let op = p_ell_operator(b, 1, q)?;
    operator_spectrum(&op, T::of_usize(b.n()), tol, guard)
}

/// Greedy nearest-neighbour matching between two multisets.
#[derive(Clone, Debug)]
pub struct MatchReport<T> {
    pub matches: bool,
    pub max_distance: T,
    /// `pairs[i] = j`: closed value `i` matched to eigenvalue `j`.
    pub pairs: Vec<usize>,
    pub closed_has_repeat: bool,
    pub spectrum_has_repeat: bool,
    pub max_residual: T,
}

/// Greedily pairs every element of `reference` with its nearest unused
/// element of `values`; returns the assignment and the largest distance.
pub fn greedy_match<T: Real>(reference: &[Complex<T>], values: &[Complex<T>]) -> (Vec<usize>, T) {
    assert_eq!(reference.len(), values.len());
    let mut used = vec![false; values.len()];
    let mut pairs = Vec::with_capacity(reference.len());
    let mut worst = T::zero();
    for r in reference {
        let mut best: Option<(usize, T)> = None;
        for (j, v) in values.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (r - v).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.expect("equal lengths");
        used[j] = true;
        pairs.push(j);
        worst = worst.max(d);
    }
    (pairs, worst)
}

/// Whether two entries lie within `threshold` of each other.
pub fn has_repeated_value<T: Real>(values: &[Complex<T>], threshold: T) -> bool {
    values
        .iter()
        .enumerate()
        .any(|(i, a)| values[i + 1..].iter().any(|b| (a - b).norm() <= threshold))
}

/// Relative tie threshold used for repeated-value detection, scaled by `n`.
pub const TIE_THRESHOLD: f64 = 1e-6;

/// Compares the `c_1` spectrum at `q = 1` with the closed-form coordinates at
/// `t = 0`; matching succeeds when every matched pair is within `tol * n`.
pub fn spectrum_matches_closed<T: Real>(n: usize, k: usize, tol: T) -> Result<MatchReport<T>> {
    spectrum_matches_closed_guarded(n, k, tol, DEFAULT_EIGEN_GUARD)
}

pub fn spectrum_matches_closed_guarded<T: Real>(
    n: usize,
    k: usize,
    tol: T,
    guard: usize,
) -> Result<MatchReport<T>> {
    let b = WedgeBasis::new(n, k)?;
    // the residual tolerance is independent of the matching tolerance
    let residual_tol = T::epsilon().sqrt();
    let spec = c1_spectrum_guarded(&b, Complex::new(T::one(), T::zero()), residual_tol, guard)?;
    let closed = grassmannian_coordinates_closed(n, k, T::zero())?;
    let (pairs, max_distance) = greedy_match(&closed, &spec.eigenvalues);
    let nf = T::of_usize(n);
    let tie = T::of(TIE_THRESHOLD) * nf;
    Ok(MatchReport {
        matches: max_distance <= tol * nf,
        max_distance,
        pairs,
        closed_has_repeat: has_repeated_value(&closed, tie),
        spectrum_has_repeat: has_repeated_value(&spec.eigenvalues, tie),
        max_residual: spec.max_residual,
    })
}
