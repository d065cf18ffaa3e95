use num_complex::Complex;

use super::eigen::DenseMatrix;
use crate::coalescence::binomial;
use crate::{Error, Real, Result};

/// Largest wedge basis the crate will materialise.
pub const MAX_BASIS: u64 = 20_000_000;

/// The `k`-subsets of `{0, ..., n-1}` in lexicographic order. State
/// `(i_1 < ... < i_k)` stands for `sigma^{i_1} ^ ... ^ sigma^{i_k}` in the
/// `k`-th wedge power of `H(P^{n-1})`.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    n: usize,
    k: usize,
    states: Vec<usize>,
    // binom[a][b] = C(a, b) for a <= n
    binom: Vec<Vec<u64>>,
}

impl WedgeBasis {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k < 1 || k >= n {
            return Err(Error::invalid(format!(
                "wedge basis needs 1 <= k < n, got n = {n}, k = {k}"
            )));
        }
        let size = binomial(n as u64, k as u64);
        if size > MAX_BASIS {
            return Err(Error::ResourceLimit(format!(
                "C({n}, {k}) = {size} exceeds the basis guard {MAX_BASIS}"
            )));
        }
        let mut states = Vec::with_capacity(size as usize * k);
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            states.extend_from_slice(&cur);
            // next combination in lexicographic order
            let mut i = k;
            while i > 0 && cur[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
        let binom = (0..=n)
            .map(|a| {
                (0..=n)
                    .map(|b| {
                        if b <= a {
                            binomial(a as u64, b as u64)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(WedgeBasis {
            n,
            k,
            states,
            binom,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.states.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, index: usize) -> &[usize] {
        &self.states[index * self.k..(index + 1) * self.k]
    }

    pub fn states(&self) -> impl Iterator<Item = &[usize]> {
        self.states.chunks_exact(self.k)
    }

    /// Lexicographic rank of a strictly ascending tuple.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.k
            || tuple.windows(2).any(|w| w[0] >= w[1])
            || tuple.last().is_some_and(|&e| e >= self.n)
        {
            return None;
        }
        let mut rank = 0u64;
        let mut prev: Option<usize> = None;
        for (j, &c) in tuple.iter().enumerate() {
            let from = prev.map_or(0, |p| p + 1);
            for v in from..c {
                rank += self.binom[self.n - 1 - v][self.k - 1 - j];
            }
            prev = Some(c);
        }
        Some(rank as usize)
    }
}

/// Sparse matrix of quantum multiplication by `p_ell` on the wedge basis.
/// Entry `(row, col, c)` means state `col` maps to `c` times state `row`.
#[derive(Clone, Debug)]
pub struct WedgeOperator<T> {
    pub basis: WedgeBasis,
    pub ell: usize,
    pub q: Complex<T>,
    pub entries: Vec<(usize, usize, Complex<T>)>,
}

/// Quantum multiplication by the power sum `p_ell = x_1^ell + ... + x_k^ell`.
///
/// Each slot of a state is raised by `ell`; exponents reaching `n` wrap
/// around through `sigma^n = (-1)^{k-1} q` in `QH(P^{n-1})`, repeated
/// exponents vanish, and the tuple is re-sorted with its permutation sign.
pub fn p_ell_operator<T: Real>(
    b: &WedgeBasis,
    ell: usize,
    q: Complex<T>,
) -> Result<WedgeOperator<T>> {
    let (n, k) = (b.n, b.k);
    if ell < 1 || ell >= n {
        return Err(Error::invalid(format!(
            "ell = {ell} outside [1, {}]",
            n - 1
        )));
    }
    let q_twisted = if (k - 1) % 2 == 0 { q } else { -q };
    let one = Complex::new(T::one(), T::zero());
    let mut entries = Vec::with_capacity(b.len() * k);
    let mut target = vec![0usize; k];
    for (col, state) in b.states().enumerate() {
        for j in 0..k {
            let old = state[j];
            let raised = old + ell;
            let (new, mut coeff) = if raised >= n {
                (raised - n, q_twisted)
            } else {
                (raised, one)
            };
            if state.contains(&new) {
                continue;
            }
            let (lo, hi) = (old.min(new), old.max(new));
            let crossed = state.iter().filter(|&&x| x > lo && x < hi).count();
            if crossed % 2 == 1 {
                coeff = -coeff;
            }
            target.copy_from_slice(state);
            target[j] = new;
            target.sort_unstable();
            let row = b.index_of(&target).expect("target is a valid state");
            if coeff.re != T::zero() || coeff.im != T::zero() {
                entries.push((row, col, coeff));
            }
        }
    }
    Ok(WedgeOperator {
        basis: b.clone(),
        ell,
        q,
        entries,
    })
}

impl<T: Real> WedgeOperator<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.dim());
        for &(r, c, v) in &self.entries {
            m[(r, c)] = m[(r, c)] + v;
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        self.entries
            .iter()
            .filter(|(r, c, _)| r == c)
            .fold(Complex::new(T::zero(), T::zero()), |acc, e| acc + e.2)
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        for &(r, c, v) in &self.entries {
            y[r] = y[r] + v * x[c];
        }
        y
    }
}
