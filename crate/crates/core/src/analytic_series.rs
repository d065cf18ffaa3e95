//! Riemann zeta, truncated Euler products, prime zeta and the Dirichlet
//! series `L~(s) = sum_{n >= 2} l~(n) n^{-s}` of the non-coalescing counts.
//!
//! Every infinite sum is returned as a [`SeriesValue`]: the computed value
//! together with a bound on the truncation (and floating point) error.

use num_complex::Complex;
use rayon::prelude::*;

use crate::coalescence::l_tilde;
use crate::primes::PrimeTable;
use crate::{Error, Real, Result};

/// Value of a truncated series with a certified error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    pub tail_bound: T,
    pub terms_used: usize,
}

/// Number of Bernoulli correction terms in Euler–Maclaurin.
const EM_TERMS: usize = 10;

/// `B_2, B_4, ..., B_22`.
const BERNOULLI: [f64; EM_TERMS + 1] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// Imaginary parts beyond this are rejected by the prime zeta evaluator.
pub const PRIME_ZETA_MAX_IM: f64 = 10.0;

/// Primes below this bound are peeled off before taking `log zeta`.
const LOG_ZETA_PEEL: u64 = 1000;

fn cx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `n^{-s}` for a positive integer `n`.
#[inline]
fn pow_neg<T: Real>(n: u64, s: Complex<T>) -> Complex<T> {
    let ln = T::from_u64(n).unwrap().ln();
    (-s * ln).exp()
}

fn check_target<T: Real>(target: T) -> Result<()> {
    if !(target >= T::error_floor()) {
        return Err(Error::invalid(format!(
            "target error {target} below the floor {}",
            T::error_floor()
        )));
    }
    Ok(())
}

/// Euler–Maclaurin pieces at cut `n`: the correction terms and the remainder
/// bound `|T_{M+1} (s + 2M + 1) / (sigma + 2M + 1)|`.
fn em_tail<T: Real>(s: Complex<T>, n: u64) -> (Complex<T>, T) {
    let nf = T::from_u64(n).unwrap();
    let n_pow = pow_neg(n, s); // N^{-s}
    let mut sum = n_pow * nf / (s - cx(T::one())) + n_pow * T::of(0.5);
    // rising product s (s+1) ... (s + 2j - 2), N^{1 - s - 2j}, (2j)!
    let mut rising = s;
    let mut n_term = n_pow / nf; // N^{-s-1}
    let mut fact = T::of(2.0);
    let inv_n2 = T::one() / (nf * nf);
    let mut last = cx(T::zero());
    for j in 1..=EM_TERMS + 1 {
        let term = rising * n_term * (T::of(BERNOULLI[j - 1]) / fact);
        if j <= EM_TERMS {
            sum = sum + term;
        } else {
            last = term;
        }
        let a = T::of_usize(2 * j - 1);
        let b = T::of_usize(2 * j);
        rising = rising * (s + cx(a)) * (s + cx(b));
        n_term = n_term * inv_n2;
        fact = fact * (b + T::one()) * (b + T::of(2.0));
    }
    let m = T::of_usize(2 * EM_TERMS + 1);
    let bound = last.norm() * (s + cx(m)).norm() / (s.re + m);
    (sum, bound)
}

/// Riemann zeta by Euler–Maclaurin summation with ten Bernoulli terms.
pub fn zeta<T: Real>(s: Complex<T>, target_abs_err: T) -> Result<SeriesValue<T>> {
    check_target(target_abs_err)?;
    if (s - cx(T::one())).norm() < T::of(1e-8) {
        return Err(Error::Pole(format!("zeta has a pole at s = 1, got {s}")));
    }
    if !(s.re > T::of(0.05)) {
        return Err(Error::UnsupportedDomain(format!(
            "zeta evaluator needs Re(s) > 0.05, got {s}"
        )));
    }
    let half = target_abs_err * T::of(0.5);
    let mut n: u64 = 8.max((s.norm().to_f64().unwrap() / 2.0).ceil() as u64);
    let (tail, bound) = loop {
        let (tail, bound) = em_tail(s, n);
        if bound <= half || n > 1 << 24 {
            break (tail, bound);
        }
        n = n + n / 2 + 1;
    };
    // exp(-s log m) loses about |s| log m + 2 ulps; each addition one ulp
    // of the running sum
    let mut head = tail;
    let mut ulps = tail.norm() * T::of(4.0);
    for m in (1..n).rev() {
        let t = pow_neg(m, s);
        let lm = T::from_u64(m).unwrap().ln();
        head = head + t;
        ulps = ulps + t.norm() * (lm * s.norm() + T::of(2.0)) + head.norm();
    }
    let value = head;
    let rounding = T::epsilon() * ulps;
    let tail_bound = bound + rounding;
    if tail_bound > target_abs_err {
        return Err(Error::UnsupportedDomain(format!(
            "cannot reach error {target_abs_err} at s = {s} (bound {tail_bound})"
        )));
    }
    Ok(SeriesValue {
        value,
        tail_bound,
        terms_used: n as usize - 1 + EM_TERMS,
    })
}

/// `zeta` on the real axis; same code path as the complex evaluator.
pub fn zeta_real<T: Real>(s: T, target_abs_err: T) -> Result<SeriesValue<T>> {
    zeta(cx(s), target_abs_err)
}

fn primes_upto(t: &PrimeTable, cut: f64) -> Result<&[u32]> {
    if cut > t.limit() as f64 {
        return Err(Error::invalid(format!(
            "cut {cut} exceeds the sieve limit {}",
            t.limit()
        )));
    }
    let count = t.pi(cut.max(0.0))? as usize;
    Ok(&t.primes()[..count])
}

/// Truncated Euler product `prod_{p <= kcut} (1 - p^{-s})^{-1}`.
pub fn zeta_truncated<T: Real>(s: Complex<T>, kcut: f64, t: &PrimeTable) -> Result<Complex<T>> {
    if s.re == T::zero() && s.im == T::zero() {
        return Err(Error::invalid(
            "truncated Euler product is undefined at s = 0",
        ));
    }
    let mut prod = cx(T::one());
    for &p in primes_upto(t, kcut)? {
        let factor = cx(T::one()) - pow_neg(p as u64, s);
        if factor.norm() <= T::epsilon() * T::of(64.0) {
            return Err(Error::SingularProduct(p as u64));
        }
        prod = prod / factor;
    }
    Ok(prod)
}

/// Partial prime zeta `sum_{p <= kcut} p^{-s}`.
pub fn prime_zeta_partial<T: Real>(s: Complex<T>, kcut: f64, t: &PrimeTable) -> Result<Complex<T>> {
    let terms: Vec<Complex<T>> = primes_upto(t, kcut)?
        .iter()
        .map(|&p| pow_neg(p as u64, s))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `log zeta(w)` on the branch given by the Euler product: small primes are
/// peeled off exactly, and the principal logarithm is only applied to the
/// remaining factor, which stays in the right half-plane.
fn log_zeta<T: Real>(w: Complex<T>, target: T, t: &PrimeTable) -> Result<(Complex<T>, T)> {
    let z = zeta(w, target)?;
    let peel = LOG_ZETA_PEEL.min(t.limit());
    let mut peeled = cx(T::zero());
    let mut rest = z.value;
    for &p in primes_upto(t, peel as f64)? {
        let f = cx(T::one()) - pow_neg(p as u64, w);
        peeled = peeled - f.ln();
        rest = rest * f;
    }
    // |rest - 1| <= sum_{m > peel} m^{-sigma}
    let sigma = w.re;
    let pf = T::from_u64(peel).unwrap();
    let rest_dev = pf.powf(T::one() - sigma) / (sigma - T::one());
    if w.im != T::zero() && rest_dev >= T::one() {
        return Err(Error::UnsupportedDomain(format!(
            "branch of log zeta not certified at w = {w}"
        )));
    }
    if rest.re <= T::zero() {
        return Err(Error::UnsupportedDomain(format!(
            "log zeta branch crossing at w = {w}"
        )));
    }
    let err = z.tail_bound / (z.value.norm() - z.tail_bound);
    Ok((peeled + rest.ln(), err))
}

/// Prime zeta `P(s) = sum_{n >= 1} mu(n)/n log zeta(n s)`.
pub fn prime_zeta<T: Real>(
    s: Complex<T>,
    target_abs_err: T,
    t: &PrimeTable,
) -> Result<SeriesValue<T>> {
    check_target(target_abs_err)?;
    if !(s.re > T::one()) {
        return Err(Error::UnsupportedDomain(format!(
            "prime zeta needs Re(s) > 1, got {s}"
        )));
    }
    if s.im.abs() > T::of(PRIME_ZETA_MAX_IM) {
        return Err(Error::UnsupportedDomain(format!(
            "prime zeta restricted to |Im(s)| <= {PRIME_ZETA_MAX_IM}, got {s}"
        )));
    }
    let sigma = s.re;
    let two = T::of(2.0);
    // tail after N terms: sum_{n > N} 2^{-n sigma} (1 + 2/(n sigma - 1)) / n
    let tail_after = |big_n: usize| -> T {
        let m = T::of_usize(big_n + 1);
        let x = m * sigma;
        let lead = two.powf(-x) * (T::one() + two / (x - T::one())) / m;
        lead / (T::one() - two.powf(-sigma))
    };
    let mut terms = 1usize;
    while tail_after(terms) > target_abs_err * T::of(0.5) {
        terms += 1;
    }
    if terms as u64 > t.limit() {
        return Err(Error::invalid(format!(
            "prime zeta needs Möbius values up to {terms}, sieve limit is {}",
            t.limit()
        )));
    }
    // the n-th logarithm is divided by n, so its budget may grow with n
    let budget = |n: usize| -> T {
        let b = if n == 1 {
            target_abs_err * T::of(0.25)
        } else {
            target_abs_err * T::of_usize(n) / T::of_usize(4 * terms)
        };
        b.max(T::error_floor())
    };
    let mut value = cx(T::zero());
    let mut err = tail_after(terms);
    for n in 1..=terms {
        let mu = t.mobius(n as u64)?;
        if mu == 0 {
            continue;
        }
        let nf = T::of_usize(n);
        let (lz, e) = log_zeta(s * nf, budget(n), t)?;
        value = value + lz * (T::of(mu as f64) / nf);
        err = err + e / nf;
    }
    Ok(SeriesValue {
        value,
        tail_bound: err,
        terms_used: terms,
    })
}

/// Sum in a fixed binary tree, independent of thread count.
pub fn pairwise_sum<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    match xs.len() {
        0 => cx(T::zero()),
        1 => xs[0],
        n if n <= 16 => xs.iter().fold(cx(T::zero()), |a, &b| a + b),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

const BLOCK: usize = 1 << 14;

/// Block-parallel deterministic sum of `term(n)` over `lo..=hi`; returns the
/// sum and the sum of absolute values.
fn dirichlet_sum<T, F>(lo: u64, hi: u64, term: F) -> (Complex<T>, T)
where
    T: Real,
    F: Fn(u64) -> Complex<T> + Sync,
{
    if hi < lo {
        return (cx(T::zero()), T::zero());
    }
    let count = (hi - lo + 1) as usize;
    let blocks: Vec<(Complex<T>, T)> = (0..count.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let start = lo + (b * BLOCK) as u64;
            let end = (start + BLOCK as u64 - 1).min(hi);
            let terms: Vec<Complex<T>> = (start..=end).map(&term).collect();
            let abs: Vec<Complex<T>> = terms.iter().map(|z| cx(z.norm())).collect();
            (pairwise_sum(&terms), pairwise_sum(&abs).re)
        })
        .collect();
    let sums: Vec<Complex<T>> = blocks.iter().map(|b| b.0).collect();
    let abss: Vec<Complex<T>> = blocks.iter().map(|b| cx(b.1)).collect();
    (pairwise_sum(&sums), pairwise_sum(&abss).re)
}

/// Rounding allowance for a pairwise sum of `count` terms each computed as
/// `exp(-s log n)`.
fn rounding_bound<T: Real>(s: Complex<T>, count: u64, abs_sum: T) -> T {
    let lg = T::from_u64(count.max(2)).unwrap().ln();
    T::epsilon() * T::of(4.0) * (lg * (s.norm() + T::one()) + T::of(8.0)) * abs_sum
}

/// `sum_{n > cut} n^{a - sigma} <= cut^{a + 1 - sigma} / (sigma - a - 1)`.
pub fn power_tail_bound<T: Real>(sigma: T, a: T, cut: u64) -> T {
    let c = T::from_u64(cut).unwrap();
    c.powf(a + T::one() - sigma) / (sigma - a - T::one())
}

fn require_half_plane<T: Real>(s: Complex<T>, what: &str) -> Result<()> {
    if !(s.re > T::of(2.0)) {
        return Err(Error::UnsupportedDomain(format!(
            "{what} diverges for Re(s) <= 2, got s = {s}"
        )));
    }
    Ok(())
}

fn check_cut(t: &PrimeTable, cut: u64) -> Result<()> {
    if cut < 2 || cut > t.limit() {
        return Err(Error::invalid(format!(
            "cut {cut} outside [2, {}]",
            t.limit()
        )));
    }
    Ok(())
}

/// Direct partial sum `sum_{n=2}^{ncut} l~(n) n^{-s}`; since `l~(n) <= n - 1`
/// the tail is at most `ncut^{2 - sigma} / (sigma - 2)`.
pub fn l_tilde_direct<T: Real>(s: Complex<T>, ncut: u64, t: &PrimeTable) -> Result<SeriesValue<T>> {
    require_half_plane(s, "L~(s)")?;
    check_cut(t, ncut)?;
    let (value, abs) = dirichlet_sum(2, ncut, |n| {
        pow_neg(n, s) * T::from_u64(l_tilde(t, n as usize)).unwrap()
    });
    let tail = power_tail_bound(s.re, T::one(), ncut);
    Ok(SeriesValue {
        value,
        tail_bound: tail + rounding_bound(s, ncut, abs),
        terms_used: ncut as usize - 1,
    })
}

/// Prime-indexed representation
/// `L~(s) = sum_p (p-1)/p^s (2 zeta(s) / zeta(s, p-1) - 1)` truncated at
/// `pcut`.
pub fn l_tilde_prime_series<T: Real>(
    s: Complex<T>,
    pcut: f64,
    t: &PrimeTable,
) -> Result<SeriesValue<T>> {
    require_half_plane(s, "L~(s)")?;
    let primes = primes_upto(t, pcut)?;
    let z = zeta(s, T::of(1e-13).max(T::error_floor()))?;
    let sigma = s.re;

    let mut euler = cx(T::one()); // zeta(s, p - 1)
    let mut terms = Vec::with_capacity(primes.len());
    let mut weight = T::zero(); // sum (p-1) p^{-sigma}
    let mut rounding = T::zero();
    for (i, &p) in primes.iter().enumerate() {
        let pu = p as u64;
        let pw = pow_neg(pu, s);
        let lead = pw * T::from_u64(pu - 1).unwrap();
        let term = lead * (z.value * T::of(2.0) / euler - cx(T::one()));
        rounding = rounding + term.norm() * T::of_usize(i + 16);
        weight = weight + lead.norm();
        terms.push(term);
        euler = euler / (cx(T::one()) - pw);
    }
    let value = pairwise_sum(&terms);

    // next prime is at least pcut + 1
    let next = (pcut.floor() as u64).max(1) + 1;
    let nf = T::from_u64(next).unwrap();
    let excess = nf.powf(-sigma) + nf.powf(T::one() - sigma) / (sigma - T::one());
    let tail = (nf.powf(T::one() - sigma) + power_tail_bound(sigma, T::one(), next))
        * (T::one() + T::of(2.0) * excess);
    // |1 / zeta(s, p-1)| <= zeta(sigma) / zeta(2 sigma)
    let zs = zeta_real(sigma, T::of(1e-10).max(T::error_floor()))?
        .value
        .re;
    let z2s = zeta_real(sigma * T::of(2.0), T::of(1e-10).max(T::error_floor()))?
        .value
        .re;
    let zeta_err = T::of(2.0) * z.tail_bound * weight * zs / z2s;
    let float_err = rounding * T::epsilon() * T::of(8.0);
    Ok(SeriesValue {
        value,
        tail_bound: tail + zeta_err + float_err,
        terms_used: primes.len(),
    })
}

/// Discrepancy `|sum_{n <= cut} (l(n) + l~(n)) n^{-s} - (zeta(s-1) - zeta(s))|`
/// where `l(n) = (n - 1) - l~(n)` counts the coalescing `k`.
///
/// Since `l(n) + l~(n) = n - 1` the full series equals `zeta(s-1) - zeta(s)`;
/// the discrepancy is bounded by [`power_tail_bound`]`(sigma, 1, cut)`.
pub fn duality_check<T: Real>(s: Complex<T>, cut: u64, t: &PrimeTable) -> Result<T> {
    require_half_plane(s, "duality series")?;
    check_cut(t, cut)?;
    let (partial, _) = dirichlet_sum(2, cut, |n| {
        let nc = l_tilde(t, n as usize);
        let coalescing = (n - 1) - nc;
        pow_neg(n, s) * T::from_u64(coalescing + nc).unwrap()
    });
    let target = T::of(1e-13).max(T::error_floor());
    let z1 = zeta(s - cx(T::one()), target)?;
    let z0 = zeta(s, target)?;
    Ok((partial - (z1.value - z0.value)).norm())
}

/// `L~(s)` split as `P(s-1) - P(s)` (primes, via prime zeta) plus the
/// composite part `sum_{composite n} 2 (P1(n) - 1) n^{-s}`, whose tail past
/// `ncut` is at most `2 ncut^{3/2 - sigma} / (sigma - 3/2)` because
/// `P1(n) <= n^{1/2}` for composite `n`.
pub fn l_tilde_split<T: Real>(s: Complex<T>, ncut: u64, t: &PrimeTable) -> Result<SeriesValue<T>> {
    require_half_plane(s, "L~(s)")?;
    check_cut(t, ncut)?;
    let target = T::of(1e-12).max(T::error_floor());
    let p_shift = prime_zeta(s - cx(T::one()), target, t)?;
    let p_plain = prime_zeta(s, target, t)?;
    let (composite, abs) = dirichlet_sum(2, ncut, |n| {
        if t.is_prime(n) {
            cx(T::zero())
        } else {
            pow_neg(n, s) * T::from_u64(2 * (t.spf(n as usize) - 1)).unwrap()
        }
    });
    let tail = T::of(2.0) * power_tail_bound(s.re, T::of(0.5), ncut);
    Ok(SeriesValue {
        value: p_shift.value - p_plain.value + composite,
        tail_bound: tail + p_shift.tail_bound + p_plain.tail_bound + rounding_bound(s, ncut, abs),
        terms_used: ncut as usize - 1 + p_shift.terms_used + p_plain.terms_used,
    })
}

/// One rung of the `s -> 2+` ladder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePoint<T> {
    pub epsilon: T,
    pub value: T,
    pub tail_bound: T,
    /// `|L~(2 + eps) - log(1/eps)|`.
    pub deviation: T,
}

/// Evaluates `L~(2 + eps)` for each `eps` and its distance from
/// `log(1/eps)`. The composite tail must stay below a tenth of `log(1/eps)`.
pub fn singularity_probe<T: Real>(
    epsilons: &[T],
    ncut: u64,
    t: &PrimeTable,
) -> Result<Vec<ProbePoint<T>>> {
    epsilons
        .iter()
        .map(|&eps| {
            if !(eps >= T::of(0.01) && eps < T::one()) {
                return Err(Error::invalid(format!("epsilon {eps} outside [0.01, 1)")));
            }
            let s = cx(T::of(2.0) + eps);
            check_cut(t, ncut)?;
            let log_inv = -eps.ln();
            let allowed = log_inv * T::of(0.1);
            let composite_tail = T::of(2.0) * power_tail_bound(s.re, T::of(0.5), ncut);
            if composite_tail > allowed {
                return Err(Error::InsufficientCut {
                    epsilon: eps.to_f64().unwrap(),
                    tail: composite_tail.to_f64().unwrap(),
                    allowed: allowed.to_f64().unwrap(),
                });
            }
            let v = l_tilde_split(s, ncut, t)?;
            Ok(ProbePoint {
                epsilon: eps,
                value: v.value.re,
                tail_bound: v.tail_bound,
                deviation: (v.value.re - log_inv).abs(),
            })
        })
        .collect()
}
