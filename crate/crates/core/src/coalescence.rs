//! Coalescence of canonical coordinates on `G(k, n)`.
//!
//! `G(k, n)` is coalescing iff `P1(n) <= k <= n - P1(n)`. The closed form is
//! cross-checked by [`is_coalescing_oracle`], which enumerates every
//! `k`-subset of `n`-th roots of unity and looks for two distinct subsets
//! with the same exact sum.

use std::collections::HashMap;
use std::io::Write;

use crate::cyclotomic::CyclotomicReducer;
use crate::primes::PrimeTable;
use crate::{Error, Result};

/// Default cap on `C(n, k)` for the exhaustive oracle.
pub const DEFAULT_ORACLE_GUARD: u64 = 20_000_000;

fn check_n(t: &PrimeTable, n: u64) -> Result<()> {
    if n < 2 || n > t.limit() {
        return Err(Error::invalid(format!(
            "n = {n} outside [2, {}]",
            t.limit()
        )));
    }
    Ok(())
}

/// Closed-form coalescence criterion.
pub fn is_coalescing(t: &PrimeTable, k: u64, n: u64) -> Result<bool> {
    check_n(t, n)?;
    if k < 1 || k >= n {
        return Err(Error::invalid(format!("k = {k} outside [1, {}]", n - 1)));
    }
    let p1 = t.spf(n as usize);
    Ok(p1 <= k && k + p1 <= n)
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Two distinct exponent sets with the same root sum.
pub type Collision = (Vec<usize>, Vec<usize>);

/// Injective linear encoding of reduced vectors into `i128`, when the
/// coordinate ranges allow it.
struct PackedKeys {
    deltas: Vec<i128>,
}

impl PackedKeys {
    fn new(r: &CyclotomicReducer) -> Option<Self> {
        let n = r.modulus();
        let phi = r.phi_n();
        // |coordinate c of any subset sum| <= sum_j |row_j[c]|
        let bounds: Vec<i128> = (0..phi)
            .map(|c| (0..n).map(|j| r.row(j)[c].unsigned_abs() as i128).sum())
            .collect();
        let mut weights = Vec::with_capacity(phi);
        let mut w: i128 = 1;
        for &b in &bounds {
            weights.push(w);
            w = w.checked_mul(2 * b + 1)?;
            if w > 1i128 << 120 {
                return None;
            }
        }
        let deltas = (0..n)
            .map(|j| {
                r.row(j)
                    .iter()
                    .zip(&weights)
                    .map(|(&c, &w)| c as i128 * w)
                    .sum()
            })
            .collect();
        Some(PackedKeys { deltas })
    }
}

fn mask_to_subset(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Enumerates `k`-subsets of `[0, n)` in lexicographic order and returns the
/// first pair of subsets whose root sums coincide.
pub fn find_collision(r: &CyclotomicReducer, k: usize, guard: u64) -> Result<Option<Collision>> {
    let n = r.modulus();
    if k < 1 || k >= n {
        return Err(Error::invalid(format!("k = {k} outside [1, {}]", n - 1)));
    }
    let count = binomial(n as u64, k as u64);
    if count > guard {
        return Err(Error::ResourceLimit(format!(
            "C({n}, {k}) = {count} subsets exceeds the oracle guard {guard}"
        )));
    }
    let hit = match PackedKeys::new(r) {
        Some(keys) => {
            let mut seen = HashMap::with_capacity(count as usize);
            dfs_packed(&keys, n, k, 0, 0, 0, 0, &mut seen)
        }
        None => {
            let mut seen = HashMap::with_capacity(count as usize);
            let mut acc = vec![0i64; r.phi_n()];
            dfs_vec(r, k, 0, 0, 0, &mut acc, &mut seen)
        }
    };
    Ok(hit.map(|(a, b)| (mask_to_subset(a), mask_to_subset(b))))
}

#[allow(clippy::too_many_arguments)]
fn dfs_packed(
    keys: &PackedKeys,
    n: usize,
    k: usize,
    depth: usize,
    start: usize,
    key: i128,
    mask: u64,
    seen: &mut HashMap<i128, u64>,
) -> Option<(u64, u64)> {
    if depth == k {
        return seen.insert(key, mask).map(|prev| (prev, mask));
    }
    for e in start..=n - (k - depth) {
        let hit = dfs_packed(
            keys,
            n,
            k,
            depth + 1,
            e + 1,
            key + keys.deltas[e],
            mask | 1 << e,
            seen,
        );
        if hit.is_some() {
            return hit;
        }
    }
    None
}

fn dfs_vec(
    r: &CyclotomicReducer,
    k: usize,
    depth: usize,
    start: usize,
    mask: u64,
    acc: &mut Vec<i64>,
    seen: &mut HashMap<Vec<i64>, u64>,
) -> Option<(u64, u64)> {
    if depth == k {
        if let Some(&prev) = seen.get(acc) {
            return Some((prev, mask));
        }
        seen.insert(acc.clone(), mask);
        return None;
    }
    for e in start..=r.modulus() - (k - depth) {
        for (a, &c) in acc.iter_mut().zip(r.row(e)) {
            *a += c;
        }
        let hit = dfs_vec(r, k, depth + 1, e + 1, mask | 1 << e, acc, seen);
        for (a, &c) in acc.iter_mut().zip(r.row(e)) {
            *a -= c;
        }
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Exhaustive coalescence test with the default guard.
pub fn is_coalescing_oracle(r: &CyclotomicReducer, k: u64, n: u64) -> Result<bool> {
    is_coalescing_oracle_guarded(r, k, n, DEFAULT_ORACLE_GUARD)
}

pub fn is_coalescing_oracle_guarded(
    r: &CyclotomicReducer,
    k: u64,
    n: u64,
    guard: u64,
) -> Result<bool> {
    if r.modulus() as u64 != n {
        return Err(Error::invalid(format!(
            "reducer modulus {} does not match n = {n}",
            r.modulus()
        )));
    }
    Ok(find_collision(r, k as usize, guard)?.is_some())
}

/// Number of `k` in `[1, n-1]` with `G(k, n)` not coalescing:
/// `n - 1` for prime `n`, `2 (P1(n) - 1)` otherwise.
#[inline]
pub fn l_tilde(t: &PrimeTable, n: usize) -> u64 {
    let p1 = t.spf(n);
    if p1 as usize == n {
        p1 - 1
    } else {
        2 * (p1 - 1)
    }
}

/// Per-`n` summary of which Grassmannians `G(k, n)` coalesce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalescenceRecord {
    pub n: u64,
    pub p1: u64,
    /// Inclusive `[P1(n), n - P1(n)]`; `None` when empty.
    pub coalescing_interval: Option<(u64, u64)>,
    pub l_tilde: u64,
    pub nc_set: Vec<u64>,
}

pub fn coalescence_record(t: &PrimeTable, n: u64) -> Result<CoalescenceRecord> {
    check_n(t, n)?;
    let p1 = t.spf(n as usize);
    let coalescing_interval = (2 * p1 <= n).then_some((p1, n - p1));
    let nc_set: Vec<u64> = (1..n)
        .filter(|&k| match coalescing_interval {
            Some((lo, hi)) => k < lo || k > hi,
            None => true,
        })
        .collect();
    Ok(CoalescenceRecord {
        n,
        p1,
        coalescing_interval,
        l_tilde: nc_set.len() as u64,
        nc_set,
    })
}

/// `sum_{k=2}^{n} l~(k) = 2(1 - n) + pi_0(n) - pi_1(n) + 2 sum_{j=2}^{n} P1(j)`.
pub fn nc_partial_sum(t: &PrimeTable, n: u64) -> Result<u64> {
    check_n(t, n)?;
    let pi0 = t.pi(n as f64)? as i128;
    let pi1 = t.prime_power_sum(n as f64, 1)? as i128;
    let spf_sum = t.spf_prefix_sum(n)? as i128;
    let total = 2 * (1 - n as i128) + pi0 - pi1 + 2 * spf_sum;
    Ok(total as u64)
}

/// Partial sum divided by its asymptotic `n^2 / (2 log n)`.
pub fn rareness_ratio(t: &PrimeTable, n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "rareness ratio needs n >= 3, got {n}"
        )));
    }
    let s = nc_partial_sum(t, n)? as f64;
    let nf = n as f64;
    Ok(s / (nf * nf / (2.0 * nf.ln())))
}

/// `sum_{k <= n, k composite} l~(k)`.
pub fn composite_nc_sum(t: &PrimeTable, n: u64) -> Result<u64> {
    check_n(t, n)?;
    // composites contribute 2 (P1 - 1); subtract the prime part of prefix_spf
    let pi0 = t.pi(n as f64)?;
    let pi1 = t.prime_power_sum(n as f64, 1)?;
    let composites = (n - 1) - pi0;
    Ok(2 * (t.spf_prefix_sum(n)? - pi1) - 2 * composites)
}

/// Finite-`n` sample `log(sum_{composite k <= n} l~(k)) / log n`.
pub fn sigma_bar_estimate(t: &PrimeTable, n: u64) -> Result<f64> {
    if n < 4 {
        return Err(Error::invalid(format!(
            "sigma estimate needs n >= 4, got {n}"
        )));
    }
    let s = composite_nc_sum(t, n)? as f64;
    Ok(s.ln() / (n as f64).ln())
}

/// Rows `n = 2..=n_max`; entry `k - 1` of a row is the coalescing flag of
/// `G(k, n)`.
pub fn triangle_map(t: &PrimeTable, n_max: u64) -> Result<Vec<Vec<bool>>> {
    if n_max < 2 {
        return Err(Error::invalid(format!("n_max must be >= 2, got {n_max}")));
    }
    check_n(t, n_max)?;
    (2..=n_max)
        .map(|n| (1..n).map(|k| is_coalescing(t, k, n)).collect())
        .collect()
}

/// CSV with header `n,k,coalescing` and one `0`/`1` line per `(n, k)`.
pub fn write_triangle_csv<W: Write>(rows: &[Vec<bool>], mut w: W) -> std::io::Result<()> {
    writeln!(w, "n,k,coalescing")?;
    for (i, row) in rows.iter().enumerate() {
        let n = i + 2;
        for (j, &flag) in row.iter().enumerate() {
            writeln!(w, "{},{},{}", n, j + 1, flag as u8)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::new(1000).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let t = table();
        assert!(is_coalescing(&t, 2, 4).unwrap());
        for k in 1..7 {
            assert!(!is_coalescing(&t, k, 7).unwrap());
        }
        for n in 2..50 {
            assert!(!is_coalescing(&t, 1, n).unwrap());
        }
        assert!(is_coalescing(&t, 0, 4).is_err());
        assert!(is_coalescing(&t, 4, 4).is_err());
        assert!(is_coalescing(&t, 1, 1001).is_err());
    }

    #[test]
    fn oracle_examples() {
        let r4 = CyclotomicReducer::new(4).unwrap();
        let (a, b) = find_collision(&r4, 2, DEFAULT_ORACLE_GUARD)
            .unwrap()
            .unwrap();
        assert_eq!(a, vec![0, 2]);
        assert_eq!(b, vec![1, 3]);
        let r5 = CyclotomicReducer::new(5).unwrap();
        assert!(!is_coalescing_oracle(&r5, 2, 5).unwrap());
        let r6 = CyclotomicReducer::new(6).unwrap();
        assert!(is_coalescing_oracle(&r6, 3, 6).unwrap());
        assert!(is_coalescing_oracle(&r6, 3, 7).is_err());
    }

    #[test]
    fn oracle_guard() {
        let r = CyclotomicReducer::new(20).unwrap();
        assert!(matches!(
            is_coalescing_oracle_guarded(&r, 10, 20, 1000),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn packed_and_vector_keys_agree() {
        for n in 2..=14usize {
            let r = CyclotomicReducer::new(n).unwrap();
            let keys = PackedKeys::new(&r).unwrap();
            for k in 1..n {
                let packed = dfs_packed(&keys, n, k, 0, 0, 0, 0, &mut HashMap::new());
                let mut acc = vec![0; r.phi_n()];
                let plain = dfs_vec(&r, k, 0, 0, 0, &mut acc, &mut HashMap::new());
                assert_eq!(packed, plain, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn records() {
        let t = table();
        let r5 = coalescence_record(&t, 5).unwrap();
        assert_eq!(r5.l_tilde, 4);
        assert_eq!(r5.nc_set, vec![1, 2, 3, 4]);
        assert_eq!(r5.coalescing_interval, None);
        let r4 = coalescence_record(&t, 4).unwrap();
        assert_eq!(r4.l_tilde, 2);
        assert_eq!(r4.nc_set, vec![1, 3]);
        let r9 = coalescence_record(&t, 9).unwrap();
        assert_eq!(r9.l_tilde, 4);
        assert_eq!(r9.nc_set, vec![1, 2, 7, 8]);
        assert_eq!(r9.coalescing_interval, Some((3, 6)));
        assert!(coalescence_record(&t, 1).is_err());
    }

    #[test]
    fn record_invariants() {
        let t = table();
        for n in 2..=1000u64 {
            let r = coalescence_record(&t, n).unwrap();
            let width = r.coalescing_interval.map_or(0, |(lo, hi)| hi - lo + 1);
            assert_eq!(r.l_tilde + width, n - 1);
            assert_eq!(r.l_tilde, l_tilde(&t, n as usize));
            if t.is_prime(n) {
                assert_eq!(r.l_tilde, n - 1);
            } else {
                assert_eq!(r.l_tilde, 2 * (r.p1 - 1));
            }
        }
    }

    #[test]
    fn partial_sums() {
        let t = table();
        assert_eq!(nc_partial_sum(&t, 2).unwrap(), 1);
        assert_eq!(nc_partial_sum(&t, 5).unwrap(), 9);
        assert_eq!(nc_partial_sum(&t, 10).unwrap(), 25);
        let mut prev = 0;
        for n in 2..=1000u64 {
            let s = nc_partial_sum(&t, n).unwrap();
            assert_eq!(s - prev, l_tilde(&t, n as usize));
            prev = s;
        }
    }

    #[test]
    fn sigma_and_rareness() {
        let t = table();
        assert!((sigma_bar_estimate(&t, 4).unwrap() - 0.5).abs() < 1e-15);
        assert!(sigma_bar_estimate(&t, 3).is_err());
        let r3 = rareness_ratio(&t, 3).unwrap();
        assert!(r3.is_finite() && r3 > 0.0);
        assert!(rareness_ratio(&t, 2).is_err());
        let direct: u64 = (4..=1000usize)
            .filter(|&n| !t.is_prime(n as u64))
            .map(|n| l_tilde(&t, n))
            .sum();
        assert_eq!(composite_nc_sum(&t, 1000).unwrap(), direct);
    }

    #[test]
    fn triangle_rows() {
        let t = table();
        let rows = triangle_map(&t, 7).unwrap();
        assert_eq!(rows[0], vec![false]);
        assert_eq!(rows[2], vec![false, true, false]);
        assert!(rows[5].iter().all(|&c| !c));
        assert!(triangle_map(&t, 1).is_err());

        let mut out = Vec::new();
        write_triangle_csv(&triangle_map(&t, 2).unwrap(), &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n,k,coalescing\n2,1,0\n");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn symmetric_and_interval(n in 2u64..1000, k in 1u64..1000) {
            let t = PrimeTable::new(1000).unwrap();
            prop_assume!(k < n);
            prop_assert_eq!(is_coalescing(&t, k, n).unwrap(), is_coalescing(&t, n - k, n).unwrap());
            if is_coalescing(&t, k, n).unwrap() {
                let (lo, hi) = (k.min(n - k), k.max(n - k));
                for j in lo..=hi {
                    prop_assert!(is_coalescing(&t, j, n).unwrap());
                }
            }
        }
    }
}
