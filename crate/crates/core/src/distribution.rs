//! Counting functions built on the smallest prime factor: rough numbers
//! `Phi(x, y)`, the Buchstab function, `H(x, y)`, `H^(x)` and their
//! comparison with de Bruijn's estimate and `li(x)`.

use std::collections::HashMap;
use std::io::Write;

use crate::coalescence::{is_coalescing, l_tilde};
use crate::primes::PrimeTable;
use crate::{Error, Real, Result};

fn floor_in_table(t: &PrimeTable, x: f64, what: &str) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid(format!(
            "{what}: x = {x} must be finite and >= 0"
        )));
    }
    let n = x.floor() as u64;
    if n > t.limit() {
        return Err(Error::invalid(format!(
            "{what}: x = {x} exceeds the sieve limit {}",
            t.limit()
        )));
    }
    Ok(n)
}

/// Legendre's `phi(x, a)`: integers in `[1, x]` free of the first `a` primes.
struct Legendre<'a> {
    t: &'a PrimeTable,
    memo: HashMap<(u64, usize), u64>,
}

impl Legendre<'_> {
    fn phi(&mut self, x: u64, a: usize) -> u64 {
        let primes = self.t.primes();
        if a == 0 {
            return x;
        }
        if a == 1 {
            return x - x / 2;
        }
        let pa = primes[a - 1] as u64;
        if pa >= x {
            return x.min(1);
        }
        // all survivors but 1 are primes once p_{a+1}^2 > x
        if let Some(&next) = primes.get(a) {
            let next = next as u64;
            if next * next > x {
                return 1 + self.t.pi(x as f64).expect("x within table") - a as u64;
            }
        }
        if x < 1 << 16 {
            if let Some(&v) = self.memo.get(&(x, a)) {
                return v;
            }
        }
        let v = self.phi(x, a - 1) - self.phi(x / pa, a - 1);
        if x < 1 << 16 {
            self.memo.insert((x, a), v);
        }
        v
    }
}

/// `Phi(x, y) = #{2 <= n <= x : P1(n) > y}` by Legendre's recursion.
pub fn rough_count(t: &PrimeTable, x: f64, y: f64) -> Result<u64> {
    if !(y > 0.0) {
        return Err(Error::invalid(format!("rough_count needs y > 0, got {y}")));
    }
    let n = floor_in_table(t, x, "rough_count")?;
    if n < 2 {
        return Ok(0);
    }
    // primes up to min(y, x) are enough: larger primes cannot divide n <= x
    let a = t.pi(y.min(n as f64))? as usize;
    let mut l = Legendre {
        t,
        memo: HashMap::new(),
    };
    Ok(l.phi(n, a) - 1)
}

/// `Phi(x, y)` by scanning the smallest prime factors.
pub fn rough_count_direct(t: &PrimeTable, x: f64, y: f64) -> Result<u64> {
    let n = floor_in_table(t, x, "rough_count_direct")?;
    Ok((2..=n as usize).filter(|&m| t.spf(m) as f64 > y).count() as u64)
}

fn check_h_args(t: &PrimeTable, x: f64, y: f64) -> Result<u64> {
    if !(y >= 2.0 && y <= x) {
        return Err(Error::invalid(format!(
            "H(x, y) needs 2 <= y <= x, got x = {x}, y = {y}"
        )));
    }
    floor_in_table(t, x, "H(x, y)")
}

/// `H(x, y) = #{2 <= n <= x : l~(n) > y}` by direct scan.
pub fn h_count_direct(t: &PrimeTable, x: f64, y: f64) -> Result<u64> {
    let n = check_h_args(t, x, y)?;
    Ok((2..=n as usize)
        .filter(|&m| l_tilde(t, m) as f64 > y)
        .count() as u64)
}

/// `H(x, y) = Phi(x, y/2 + 1) - [pi_0(y + 1) - pi_0(y/2 + 1)]`.
///
/// Composites have `l~(n) = 2(P1(n) - 1)`, so they are counted by the rough
/// numbers; `Phi` also counts the primes in `(y/2 + 1, y + 1]`, whose
/// `l~(p) = p - 1` does not exceed `y`, and those are removed. The prime
/// strip is capped at `x` because `Phi` never sees primes above `x`.
pub fn h_count_identity(t: &PrimeTable, x: f64, y: f64) -> Result<u64> {
    let n = check_h_args(t, x, y)?;
    let half = y / 2.0 + 1.0;
    let rough = rough_count(t, n as f64, half)?;
    let strip = t.pi((y + 1.0).min(n as f64))? - t.pi(half.min(n as f64))?;
    Ok(rough - strip)
}

/// `H^(x) = H(x, 2 sqrt(x))`.
pub fn h_hat(t: &PrimeTable, x: f64) -> Result<u64> {
    if !(x >= 4.0) {
        return Err(Error::invalid(format!("H^(x) needs x >= 4, got {x}")));
    }
    h_count_direct(t, x, 2.0 * x.sqrt())
}

/// Variant counting `n <= x` such that `G(k, n)` is not coalescing for every
/// `1 <= k <= [sqrt(x)] + 1` with `k < n`. Composites always have a coalescing
/// `k = P1(n) <= sqrt(x)`, so this is `pi_0(x)`; it exceeds [`h_hat`] by the
/// primes up to `2 sqrt(x) + 1`.
pub fn h_hat_intro(t: &PrimeTable, x: f64) -> Result<u64> {
    if !(x >= 4.0) {
        return Err(Error::invalid(format!("H^(x) needs x >= 4, got {x}")));
    }
    let n = floor_in_table(t, x, "H^(x)")?;
    let kmax = x.sqrt().floor() as u64 + 1;
    let mut count = 0;
    for m in 2..=n {
        let mut all_nc = true;
        for k in 1..=kmax.min(m - 1) {
            if is_coalescing(t, k, m)? {
                all_nc = false;
                break;
            }
        }
        count += all_nc as u64;
    }
    Ok(count)
}

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Logarithmic integral `li(x) = gamma + log log x + sum_k (log x)^k / (k k!)`.
pub fn li<T: Real>(x: T, target_abs_err: T) -> Result<T> {
    if !(x > T::one()) || !x.is_finite() {
        return Err(Error::invalid(format!("li(x) needs finite x > 1, got {x}")));
    }
    if !(target_abs_err > T::zero()) {
        return Err(Error::invalid(format!(
            "target error must be positive, got {target_abs_err}"
        )));
    }
    let l = x.ln();
    let mut sum = T::zero();
    let mut power = T::one(); // l^k / k!
    let mut k = 1usize;
    loop {
        let kf = T::of_usize(k);
        power = power * l / kf;
        let term = power / kf;
        sum = sum + term;
        // later terms shrink at least by r = l k / (k + 1)^2
        let k1 = T::of_usize(k + 1);
        let r = l * kf / (k1 * k1);
        if r < T::one() {
            let tail = term * r / (T::one() - r);
            if tail < target_abs_err * T::of(0.5) || tail <= sum * T::epsilon() {
                break;
            }
        }
        k += 1;
        if k > 10_000 {
            return Err(Error::NoConvergence(format!("li({x}) series")));
        }
    }
    Ok(T::EULER_GAMMA + l.ln() + sum)
}

/// `omega(u)` sampled on a uniform grid, with `u omega(u) = 1` on `[1, 2]`
/// and `(u omega(u))' = omega(u - 1)` beyond.
#[derive(Clone, Debug)]
pub struct BuchstabTable<T> {
    step: T,
    u_max: T,
    per_unit: usize,
    values: Vec<T>,
}

/// Default grid step.
pub const BUCHSTAB_STEP: f64 = 1e-3;
/// Default upper end of the table.
pub const BUCHSTAB_U_MAX: f64 = 40.0;

impl<T: Real> BuchstabTable<T> {
    /// Integrates on `[1, u_max]` with step `1/round(1/step)`, so integers
    /// are grid points. `v = u omega` does not appear on the right-hand side,
    /// so an RK4 step reduces to Simpson's rule on the delayed history; the
    /// midpoint history is a cubic interpolant kept inside one unit interval,
    /// where `omega` is smooth.
    pub fn new(step: T, u_max: T) -> Result<Self> {
        if !(step > T::zero() && step <= T::of(0.1)) {
            return Err(Error::invalid(format!(
                "Buchstab step {step} outside (0, 0.1]"
            )));
        }
        if !(u_max >= T::of(2.0) && u_max <= T::of(1000.0)) {
            return Err(Error::invalid(format!(
                "Buchstab u_max {u_max} outside [2, 1000]"
            )));
        }
        let per_unit = (T::one() / step).round().to_usize().unwrap().max(4);
        let h = T::one() / T::of_usize(per_unit);
        let len = ((u_max - T::one()) * T::of_usize(per_unit))
            .ceil()
            .to_usize()
            .unwrap()
            + 1;
        let mut values = Vec::with_capacity(len);
        let u_at = |i: usize| T::one() + T::of_usize(i) * h;
        for i in 0..len.min(per_unit + 1) {
            values.push(T::one() / u_at(i));
        }
        let mut v = T::one(); // u omega(u) at u = 2
        for i in per_unit + 1..len {
            // step from u_{i-1} to u_i; omega(u - 1) lives at index i - per_unit
            let lo = i - 1 - per_unit;
            let f0 = values[lo];
            let f1 = values[lo + 1];
            let fm = Self::midpoint(&values, per_unit, lo, u_at);
            v = v + h / T::of(6.0) * (f0 + T::of(4.0) * fm + f1);
            values.push(v / u_at(i));
        }
        Ok(Self {
            step: h,
            u_max,
            per_unit,
            values,
        })
    }

    /// `omega` at the midpoint of grid cell `[lo, lo + 1]`.
    fn midpoint(values: &[T], per_unit: usize, lo: usize, u_at: impl Fn(usize) -> T) -> T {
        let u = (u_at(lo) + u_at(lo + 1)) * T::of(0.5);
        if u <= T::of(2.0) {
            return T::one() / u;
        }
        let cell_start = lo - lo % per_unit;
        let base = (lo.max(cell_start + 1) - 1).min(cell_start + per_unit - 3);
        let x = Self::offset(u, u_at(base), u_at(base + 1) - u_at(base));
        lagrange4(&values[base..base + 4], x)
    }

    fn offset(u: T, u0: T, h: T) -> T {
        (u - u0) / h
    }

    /// Default table: step `1e-3` up to `u = 40`.
    pub fn standard() -> Self {
        Self::new(T::of(BUCHSTAB_STEP), T::of(BUCHSTAB_U_MAX)).expect("valid defaults")
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn u_max(&self) -> T {
        self.u_max
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `omega(u)` for `1 <= u <= u_max`.
    pub fn omega(&self, u: T) -> Result<T> {
        if !(u >= T::one() && u <= self.u_max) {
            return Err(Error::TableRange {
                value: u.to_f64().unwrap_or(f64::NAN),
                lo: 1.0,
                hi: self.u_max.to_f64().unwrap(),
            });
        }
        if u <= T::of(2.0) {
            return Ok(T::one() / u);
        }
        let pos = (u - T::one()) / self.step;
        let i = pos.floor().to_usize().unwrap().min(self.values.len() - 1);
        if pos == pos.floor() {
            return Ok(self.values[i]);
        }
        let cell_start = i - i % self.per_unit;
        let last = self.values.len() - 4;
        let base = (i.max(cell_start + 1) - 1)
            .min(cell_start + self.per_unit - 3)
            .min(last);
        Ok(lagrange4(
            &self.values[base..base + 4],
            pos - T::of_usize(base),
        ))
    }
}

/// Cubic Lagrange interpolation through `ys` at nodes `0, 1, 2, 3`.
fn lagrange4<T: Real>(ys: &[T], x: T) -> T {
    let (one, two, three) = (T::one(), T::of(2.0), T::of(3.0));
    let six = T::of(6.0);
    let l0 = -(x - one) * (x - two) * (x - three) / six;
    let l1 = x * (x - two) * (x - three) / two;
    let l2 = -x * (x - one) * (x - three) / two;
    let l3 = x * (x - one) * (x - two) / six;
    ys[0] * l0 + ys[1] * l1 + ys[2] * l2 + ys[3] * l3
}

/// Observed `H(x, y)` next to the de Bruijn style prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeBruijnGauge {
    pub observed: u64,
    pub predicted: f64,
    pub rel_err: f64,
}

/// Ratio `x / y` below which the gauge is not evaluated.
pub const DEBRUIJN_MIN_RATIO: f64 = 10.0;

/// Compares `H(x, y)` with
/// `x / zeta(1, y/2 + 1) * e^gamma * omega(log x / log(y/2 + 1))` minus the
/// primes in `(y/2 + 1, y + 1]`. Returns `None` when `x / y < 10`.
pub fn debruijn_gauge(
    t: &PrimeTable,
    tbl: &BuchstabTable<f64>,
    x: f64,
    y: f64,
) -> Result<Option<DeBruijnGauge>> {
    if !(y >= 4.0 && x >= y) {
        return Err(Error::invalid(format!(
            "gauge needs x >= y >= 4, got x = {x}, y = {y}"
        )));
    }
    if x / y < DEBRUIJN_MIN_RATIO {
        return Ok(None);
    }
    let observed = h_count_direct(t, x, y)?;
    let z = y / 2.0 + 1.0;
    // 1 / zeta(1, z) = prod_{p <= z} (1 - 1/p)
    let count = t.pi(z)? as usize;
    let inv_mertens: f64 = t.primes()[..count]
        .iter()
        .map(|&p| 1.0 - 1.0 / p as f64)
        .product();
    let u = x.ln() / z.ln();
    let omega = tbl.omega(u)?;
    let strip = (t.pi(y + 1.0)? - t.pi(z)?) as f64;
    let predicted = x * inv_mertens * EULER_GAMMA.exp() * omega - strip;
    let rel_err = if observed == 0 {
        f64::INFINITY
    } else {
        (observed as f64 - predicted).abs() / observed as f64
    };
    Ok(Some(DeBruijnGauge {
        observed,
        predicted,
        rel_err,
    }))
}

/// `H^(x) - li(x)` and its size relative to `x^theta log x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub x: f64,
    pub h_hat: u64,
    pub li: f64,
    pub diff: f64,
    pub normalized: f64,
}

pub fn rh_envelope(t: &PrimeTable, x: f64, theta: f64) -> Result<Envelope> {
    if !(x >= 1e3) {
        return Err(Error::invalid(format!("envelope needs x >= 1000, got {x}")));
    }
    if !(0.5..=1.0).contains(&theta) {
        return Err(Error::invalid(format!(
            "theta must lie in [0.5, 1], got {theta}"
        )));
    }
    let h = h_hat(t, x)?;
    let l = li(x, 1e-6)?;
    let diff = h as f64 - l;
    Ok(Envelope {
        x,
        h_hat: h,
        li: l,
        diff,
        normalized: diff.abs() / (x.powf(theta) * x.ln()),
    })
}

/// One line of the `H` comparison CSV.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HRow {
    pub x: u64,
    pub y: u64,
    pub direct: u64,
    pub identity: u64,
}

pub fn h_row(t: &PrimeTable, x: u64, y: u64) -> Result<HRow> {
    Ok(HRow {
        x,
        y,
        direct: h_count_direct(t, x as f64, y as f64)?,
        identity: h_count_identity(t, x as f64, y as f64)?,
    })
}

pub fn write_h_csv<W: Write>(rows: &[HRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "x,y,H_direct,H_identity")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.x, r.y, r.direct, r.identity)?;
    }
    Ok(())
}

pub fn write_envelope_csv<W: Write>(rows: &[Envelope], mut w: W) -> std::io::Result<()> {
    writeln!(w, "x,H_hat,li,diff,normalized")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{:.6},{:.6},{:.6}",
            r.x, r.h_hat, r.li, r.diff, r.normalized
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> PrimeTable {
        PrimeTable::new(100_000).unwrap()
    }

    #[test]
    fn rough_examples() {
        let t = table();
        assert_eq!(rough_count(&t, 10.0, 2.0).unwrap(), 4);
        assert_eq!(rough_count(&t, 10.0, 3.0).unwrap(), 2);
        assert_eq!(rough_count(&t, 10.0, 10.0).unwrap(), 0);
        assert_eq!(rough_count(&t, 10.0, 0.5).unwrap(), 9);
        assert!(rough_count(&t, 1e6, 3.0).is_err());
    }

    #[test]
    fn rough_matches_scan() {
        let t = table();
        for x in (2..=3000u64).step_by(7) {
            let root = (x as f64).sqrt() as u64;
            for y in 2..=root + 2 {
                assert_eq!(
                    rough_count(&t, x as f64, y as f64).unwrap(),
                    rough_count_direct(&t, x as f64, y as f64).unwrap(),
                    "x={x} y={y}"
                );
            }
        }
        assert_eq!(
            rough_count(&t, 1e5, 50.0).unwrap(),
            rough_count_direct(&t, 1e5, 50.0).unwrap()
        );
    }

    #[test]
    fn h_examples() {
        let t = table();
        assert_eq!(h_count_direct(&t, 10.0, 3.0).unwrap(), 3);
        assert_eq!(h_count_direct(&t, 10.0, 9.0).unwrap(), 0);
        assert_eq!(h_count_direct(&t, 2.0, 2.0).unwrap(), 0);
        assert_eq!(h_count_identity(&t, 10.0, 3.0).unwrap(), 3);
        assert_eq!(
            h_count_identity(&t, 100.0, 10.0).unwrap(),
            h_count_direct(&t, 100.0, 10.0).unwrap()
        );
        for x in 2..40u64 {
            let xf = x as f64;
            assert_eq!(
                h_count_identity(&t, xf, xf).unwrap(),
                h_count_direct(&t, xf, xf).unwrap()
            );
        }
        assert!(h_count_direct(&t, 10.0, 11.0).is_err());
        assert!(h_count_direct(&t, 10.0, 1.0).is_err());
    }

    #[test]
    fn h_hat_examples() {
        let t = table();
        assert_eq!(h_hat(&t, 100.0).unwrap(), 17);
        assert_eq!(h_hat(&t, 16.0).unwrap(), 2);
        assert_eq!(h_hat(&t, 4.0).unwrap(), 0);
        for x in [1e3, 1e4, 5e4] {
            let want = t.pi(x).unwrap() - t.pi(2.0 * x.sqrt() + 1.0).unwrap();
            assert_eq!(h_hat(&t, x).unwrap(), want);
            let intro = h_hat_intro(&t, x).unwrap();
            assert_eq!(intro, t.pi(x).unwrap());
            assert_eq!(
                intro - h_hat(&t, x).unwrap(),
                t.pi(2.0 * x.sqrt() + 1.0).unwrap()
            );
        }
    }

    #[test]
    fn buchstab_values() {
        let tbl = BuchstabTable::<f64>::standard();
        assert_eq!(tbl.omega(1.5).unwrap(), 2.0 / 3.0);
        assert_eq!(tbl.omega(2.0).unwrap(), 0.5);
        let w3 = (1.0 + 2f64.ln()) / 3.0;
        assert!((tbl.omega(3.0).unwrap() - w3).abs() < 1e-9);
        assert!((tbl.omega(10.0).unwrap() - 0.561_459_483_567).abs() < 1e-4);
        assert!(tbl.omega(0.5).is_err());
        assert!(tbl.omega(41.0).is_err());
        // on [2, 3]: omega(u) = (1 + log(u - 1)) / u
        for u in [2.1234, 2.5, 2.999] {
            let exact = (1.0 + (u - 1.0f64).ln()) / u;
            assert!((tbl.omega(u).unwrap() - exact).abs() < 1e-10, "u={u}");
        }
        // on [3, 4]: u omega(u) = 1 + log 2 + int_3^u (1 + log(t - 2))/(t - 1) dt;
        // oracle by composite Simpson with a fine step
        let u = 3.7;
        let f = |s: f64| (1.0 + (s - 2.0).ln()) / (s - 1.0);
        let m = 20_000;
        let h = (u - 3.0) / m as f64;
        let mut acc = f(3.0) + f(u);
        for i in 1..m {
            acc += f(3.0 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let exact = (1.0 + 2f64.ln() + acc * h / 3.0) / u;
        assert!((tbl.omega(u).unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn buchstab_invariants() {
        let tbl = BuchstabTable::<f64>::standard();
        let h = tbl.step();
        for (i, &w) in tbl.values().iter().enumerate() {
            let u = 1.0 + i as f64 * h;
            if u >= 2.0 {
                assert!((0.5..=1.0).contains(&w), "u={u} w={w}");
            }
        }
        // local step: u w(u) - (u - h) w(u - h) against Simpson on w(t - 1)
        for &u in &[5.5, 7.25, 12.0] {
            let a = u * tbl.omega(u).unwrap() - (u - h) * tbl.omega(u - h).unwrap();
            let w = |s: f64| tbl.omega(s - 1.0).unwrap();
            let b = h / 6.0 * (w(u - h) + 4.0 * w(u - h / 2.0) + w(u));
            assert!((a - b).abs() <= 10.0 * h.powi(4));
        }
        let t32 = BuchstabTable::<f32>::new(1e-3, 12.0).unwrap();
        assert!((t32.omega(10.0).unwrap() - 0.561_459_5).abs() < 1e-3);
    }

    #[test]
    fn li_values() {
        assert!((li(2.0f64, 1e-12).unwrap() - 1.045_163_780_117).abs() < 1e-9);
        assert!((li(1e6f64, 1e-6).unwrap() - 78_627.549).abs() < 1e-2);
        assert!(li(1.0, 1e-9).is_err());
        // additivity against an independent Simpson quadrature of 1/log t
        let (a, b) = (2.0f64, 50.0f64);
        let m = 20_000;
        let h = (b - a) / m as f64;
        let g = |s: f64| 1.0 / s.ln();
        let mut acc = g(a) + g(b);
        for i in 1..m {
            acc += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let quad = acc * h / 3.0;
        assert!((li(b, 1e-12).unwrap() - li(a, 1e-12).unwrap() - quad).abs() < 1e-9);
    }

    #[test]
    fn envelope_values() {
        let t = PrimeTable::new(1_000_000).unwrap();
        let e = rh_envelope(&t, 1e6, 0.5).unwrap();
        assert_eq!(e.h_hat, 78_195);
        assert!((e.diff + 432.5).abs() < 1.0);
        assert!((e.normalized - 0.0313).abs() < 1e-3);
        let e4 = rh_envelope(&t, 1e4, 0.5).unwrap();
        assert!(e4.normalized <= 1.0);
        assert!(rh_envelope(&t, 1e6, 1.0).unwrap().normalized <= e.normalized);
        assert!(rh_envelope(&t, 500.0, 0.5).is_err());
        assert!(rh_envelope(&t, 1e4, 0.4).is_err());
    }

    #[test]
    fn debruijn() {
        let t = PrimeTable::new(1_000_000).unwrap();
        let tbl = BuchstabTable::standard();
        let g = debruijn_gauge(&t, &tbl, 1e6, 100.0).unwrap().unwrap();
        assert!(g.rel_err <= 0.15, "{g:?}");
        let g = debruijn_gauge(&t, &tbl, 1e6, 10.0).unwrap().unwrap();
        assert!(g.rel_err <= 0.25, "{g:?}");
        assert!(debruijn_gauge(&t, &tbl, 100.0, 100.0).unwrap().is_none());
    }

    #[test]
    fn csv_shapes() {
        let t = table();
        let rows = vec![h_row(&t, 10, 3).unwrap()];
        let mut buf = Vec::new();
        write_h_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,y,H_direct,H_identity\n10,3,3,3\n"
        );
    }

    proptest! {
        #[test]
        fn h_nonincreasing_in_y(x in 10u64..5000, y in 2u64..100) {
            let t = PrimeTable::new(5000).unwrap();
            let y = y.min(x - 1);
            let a = h_count_direct(&t, x as f64, y as f64).unwrap();
            let b = h_count_direct(&t, x as f64, (y + 1) as f64).unwrap();
            prop_assert!(b <= a);
            prop_assert_eq!(h_count_identity(&t, x as f64, y as f64).unwrap(), a);
        }
    }
}
