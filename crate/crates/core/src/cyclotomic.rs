//! Exact arithmetic for sums of distinct `n`-th roots of unity.
//!
//! A sum `zeta_n^{e_1} + ... + zeta_n^{e_k}` is represented by its integer
//! coordinates in the power basis `{1, x, ..., x^{phi(n)-1}}` of
//! `Z[x] / Phi_n(x)`. Two sums are equal as complex numbers exactly when
//! their coordinate vectors coincide.

use num_complex::Complex;

use crate::primes::PrimeTable;
use crate::{Error, Result};

/// Largest modulus the reducer accepts.
pub const MAX_MODULUS: usize = 64;

/// Integer polynomial, coefficients in ascending degree.
type Poly = Vec<i64>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Exact division by a monic divisor; panics if the remainder is nonzero.
fn div_exact(num: &Poly, den: &Poly) -> Poly {
    let mut rem = num.clone();
    let dd = den.len() - 1;
    debug_assert_eq!(*den.last().unwrap(), 1);
    if rem.len() <= dd {
        return vec![0];
    }
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    trim(&mut quot);
    quot
}

/// `Phi_n(x)` by dividing `x^n - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: usize) -> Poly {
    assert!(n >= 1);
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = div_exact(&p, &cyclotomic_polynomial(d));
    }
    p
}

/// Reduction table of `x^j mod Phi_n` for every `0 <= j < n`.
#[derive(Clone, Debug)]
pub struct CyclotomicReducer {
    n: usize,
    phi_n: usize,
    poly: Poly,
    rows: Vec<Vec<i64>>,
}

impl CyclotomicReducer {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(Error::ResourceLimit(format!(
                "modulus {n} outside the exact range [2, {MAX_MODULUS}]"
            )));
        }
        let poly = cyclotomic_polynomial(n);
        let phi_n = poly.len() - 1;
        let mut rows = Vec::with_capacity(n);
        let mut cur = vec![0i64; phi_n];
        cur[0] = 1;
        for _ in 0..n {
            rows.push(cur.clone());
            // multiply by x, then eliminate x^phi_n using the monic Phi_n
            let top = cur[phi_n - 1];
            for i in (1..phi_n).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for i in 0..phi_n {
                cur[i] -= top * poly[i];
            }
        }
        Ok(CyclotomicReducer {
            n,
            phi_n,
            poly,
            rows,
        })
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    /// Degree of `Phi_n`, Euler's totient of `n`.
    pub fn phi_n(&self) -> usize {
        self.phi_n
    }

    /// Coefficients of `Phi_n`, ascending.
    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }

    /// Coordinates of `x^j mod Phi_n`; `j` is taken modulo `n`.
    pub fn row(&self, j: usize) -> &[i64] {
        &self.rows[j % self.n]
    }

    /// The nontrivial rows, `j` in `[phi_n, n)`.
    pub fn reduction_rows(&self) -> &[Vec<i64>] {
        &self.rows[self.phi_n..]
    }

    /// Exact sum of `zeta_n^e` over a set of distinct exponents in `[0, n)`.
    pub fn root_sum(&self, exponents: &[usize]) -> Result<RootSum> {
        let mut sorted = exponents.to_vec();
        sorted.sort_unstable();
        if let Some(&e) = sorted.iter().find(|&&e| e >= self.n) {
            return Err(Error::invalid(format!(
                "exponent {e} outside [0, {})",
                self.n
            )));
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate exponent in root sum"));
        }
        let mut reduced = vec![0i64; self.phi_n];
        for &e in &sorted {
            for (acc, &c) in reduced.iter_mut().zip(&self.rows[e]) {
                *acc += c;
            }
        }
        Ok(RootSum {
            n: self.n,
            exponents: sorted,
            reduced,
        })
    }

    /// Reduces an arbitrary integer polynomial modulo `Phi_n`.
    pub fn reduce_poly(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.phi_n];
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (acc, &r) in out.iter_mut().zip(self.row(j)) {
                    *acc += c * r;
                }
            }
        }
        out
    }
}

/// A sum of distinct `n`-th roots of unity with its exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSum {
    n: usize,
    exponents: Vec<usize>,
    reduced: Vec<i64>,
}

impl RootSum {
    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn reduced(&self) -> &[i64] {
        &self.reduced
    }

    pub fn is_zero(&self) -> bool {
        self.reduced.iter().all(|&c| c == 0)
    }

    /// Floating point value, for diagnostics only.
    pub fn to_complex(&self) -> Complex<f64> {
        let w = 2.0 * std::f64::consts::PI / self.n as f64;
        self.exponents
            .iter()
            .map(|&e| Complex::from_polar(1.0, w * e as f64))
            .sum()
    }
}

/// Exact equality of two root sums with the same modulus.
pub fn sums_equal(a: &RootSum, b: &RootSum) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::invalid(format!(
            "modulus mismatch: {} vs {}",
            a.n, b.n
        )));
    }
    Ok(a.reduced == b.reduced)
}

/// Whether `n` is `k`-balancing, i.e. some `k` distinct `n`-th roots of unity
/// sum to zero. Decided by membership of both `k` and `n - k` in the
/// numerical semigroup generated by the prime divisors of `n`.
pub fn is_k_balancing(t: &PrimeTable, n: u64, k: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::invalid(format!("n must be >= 2, got {n}")));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} outside [0, {n}]")));
    }
    let gens = t.distinct_prime_factors(n)?;
    let reach = semigroup_members(&gens, n as usize);
    Ok(reach[k as usize] && reach[(n - k) as usize])
}

/// `reach[m]` is true iff `m` is a nonnegative integer combination of `gens`.
fn semigroup_members(gens: &[u64], bound: usize) -> Vec<bool> {
    let mut reach = vec![false; bound + 1];
    reach[0] = true;
    for m in 1..=bound {
        reach[m] = gens
            .iter()
            .any(|&g| g as usize <= m && reach[m - g as usize]);
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn small_reducers() {
        let r4 = CyclotomicReducer::new(4).unwrap();
        assert_eq!(r4.phi_n(), 2);
        assert_eq!(r4.polynomial(), &[1, 0, 1]);
        assert_eq!(r4.row(2), &[-1, 0]);
        assert_eq!(r4.row(3), &[0, -1]);

        let r3 = CyclotomicReducer::new(3).unwrap();
        assert_eq!(r3.phi_n(), 2);
        assert_eq!(r3.row(2), &[-1, -1]);

        let r2 = CyclotomicReducer::new(2).unwrap();
        assert_eq!(r2.phi_n(), 1);
        assert_eq!(r2.row(1), &[-1]);
        assert_eq!(r2.reduction_rows(), &[vec![-1]]);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            CyclotomicReducer::new(1),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            CyclotomicReducer::new(65),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn degree_is_totient_and_rows_are_congruent() {
        for n in 2..=MAX_MODULUS {
            let r = CyclotomicReducer::new(n).unwrap();
            let totient = (1..=n).filter(|&j| gcd(j, n) == 1).count();
            assert_eq!(r.phi_n(), totient, "n = {n}");
            // x^j - row(j) must be a multiple of Phi_n
            for j in r.phi_n()..n {
                let mut diff = vec![0i64; j + 1];
                diff[j] = 1;
                for (i, &c) in r.row(j).iter().enumerate() {
                    diff[i] -= c;
                }
                let q = div_exact(&diff, &r.polynomial().to_vec());
                let mut back = poly_mul(&q, r.polynomial());
                back.resize(j + 1, 0);
                assert_eq!(back, diff, "n = {n}, j = {j}");
            }
        }
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn root_sums() {
        let r4 = CyclotomicReducer::new(4).unwrap();
        assert_eq!(r4.root_sum(&[0, 2]).unwrap().reduced(), &[0, 0]);
        let r5 = CyclotomicReducer::new(5).unwrap();
        assert_eq!(r5.root_sum(&[0]).unwrap().reduced(), &[1, 0, 0, 0]);
        let r6 = CyclotomicReducer::new(6).unwrap();
        assert!(r6.root_sum(&[0, 2, 4]).unwrap().is_zero());

        assert!(r4.root_sum(&[0, 0]).is_err());
        assert!(r4.root_sum(&[4]).is_err());
    }

    #[test]
    fn equality() {
        let r4 = CyclotomicReducer::new(4).unwrap();
        let a = r4.root_sum(&[0, 2]).unwrap();
        let b = r4.root_sum(&[1, 3]).unwrap();
        assert!(sums_equal(&a, &b).unwrap());
        assert!(sums_equal(&a, &a).unwrap());

        let r5 = CyclotomicReducer::new(5).unwrap();
        let c = r5.root_sum(&[0, 1]).unwrap();
        let d = r5.root_sum(&[0, 2]).unwrap();
        assert!(!sums_equal(&c, &d).unwrap());
        assert!(sums_equal(&a, &c).is_err());
    }

    #[test]
    fn balancing_examples() {
        let t = PrimeTable::new(100).unwrap();
        assert!(is_k_balancing(&t, 6, 3).unwrap());
        assert!(!is_k_balancing(&t, 5, 2).unwrap());
        assert!(is_k_balancing(&t, 4, 2).unwrap());
        assert!(is_k_balancing(&t, 7, 0).unwrap());
        assert!(is_k_balancing(&t, 7, 7).unwrap());
        assert!(is_k_balancing(&t, 4, 5).is_err());
    }

    /// Exhaustive search for a vanishing k-subset, lexicographic DFS.
    fn exhaustive_vanishing(r: &CyclotomicReducer, k: usize) -> bool {
        fn go(r: &CyclotomicReducer, start: usize, left: usize, acc: &mut Vec<i64>) -> bool {
            if left == 0 {
                return acc.iter().all(|&c| c == 0);
            }
            for e in start..=r.modulus() - left {
                for (a, &c) in acc.iter_mut().zip(r.row(e)) {
                    *a += c;
                }
                let hit = go(r, e + 1, left - 1, acc);
                for (a, &c) in acc.iter_mut().zip(r.row(e)) {
                    *a -= c;
                }
                if hit {
                    return true;
                }
            }
            false
        }
        let mut acc = vec![0; r.phi_n()];
        go(r, 0, k, &mut acc)
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn balancing_matches_exhaustive_search() {
        let t = PrimeTable::new(100).unwrap();
        for n in 2..=30u64 {
            let r = CyclotomicReducer::new(n as usize).unwrap();
            for k in 0..=n {
                if binom(n, k) > 1_000_000 {
                    continue;
                }
                assert_eq!(
                    is_k_balancing(&t, n, k).unwrap(),
                    exhaustive_vanishing(&r, k as usize),
                    "n = {n}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn prime_moduli_have_no_vanishing_proper_subsets() {
        for n in [2usize, 3, 5, 7, 11, 13] {
            let r = CyclotomicReducer::new(n).unwrap();
            for k in 1..n {
                assert!(!exhaustive_vanishing(&r, k), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn zero_iff_numerically_zero() {
        let r = CyclotomicReducer::new(12).unwrap();
        for mask in 0u32..(1 << 12) {
            let exps: Vec<usize> = (0..12).filter(|i| mask >> i & 1 == 1).collect();
            let s = r.root_sum(&exps).unwrap();
            let z = s.to_complex().norm() < 1e-9 * exps.len().max(1) as f64;
            assert_eq!(s.is_zero(), z, "{exps:?}");
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rotation_is_multiplication_by_x(n in 2usize..=40, mask in any::<u64>()) {
            let r = CyclotomicReducer::new(n).unwrap();
            let exps: Vec<usize> = (0..n).filter(|i| mask >> (i % 64) & 1 == 1).collect();
            let s = r.root_sum(&exps).unwrap();
            let rotated: Vec<usize> = exps.iter().map(|e| (e + 1) % n).collect();
            let s_rot = r.root_sum(&rotated).unwrap();
            // x * reduced, then reduce
            let mut shifted = vec![0i64; r.phi_n() + 1];
            for (i, &c) in s.reduced().iter().enumerate() {
                shifted[i + 1] = c;
            }
            prop_assert_eq!(r.reduce_poly(&shifted), s_rot.reduced().to_vec());
        }
    }
}
