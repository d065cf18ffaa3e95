//! Sieve infrastructure: primality, smallest prime factor, Möbius function
//! and the prefix sums `pi_0`, `pi_1` and `sum P1`.

use std::io::{Read, Write};

use crate::{Error, Result};

/// Largest sieve the crate agrees to allocate.
pub const MAX_LIMIT: u64 = 100_000_000;

const CACHE_MAGIC: &[u8; 5] = b"CLAB1";

/// Immutable sieve table up to `limit`.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: usize,
    is_prime: Vec<u64>,
    spf: Vec<u32>,
    primes: Vec<u32>,
    prefix_pi0: Vec<u32>,
    prefix_pi1: Vec<u64>,
    prefix_spf: Vec<u64>,
}

impl PrimeTable {
    /// Linear sieve up to and including `limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!(
                "sieve limit must be >= 2, got {limit}"
            )));
        }
        if limit > MAX_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "sieve limit {limit} exceeds the guard {MAX_LIMIT}"
            )));
        }
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self::from_spf(limit, spf, primes))
    }

    fn from_spf(limit: usize, spf: Vec<u32>, primes: Vec<u32>) -> Self {
        let mut is_prime = vec![0u64; limit / 64 + 1];
        for &p in &primes {
            is_prime[p as usize / 64] |= 1 << (p as usize % 64);
        }
        let mut prefix_pi0 = vec![0u32; limit + 1];
        let mut prefix_pi1 = vec![0u64; limit + 1];
        let mut prefix_spf = vec![0u64; limit + 1];
        for n in 2..=limit {
            let prime = spf[n] as usize == n;
            prefix_pi0[n] = prefix_pi0[n - 1] + prime as u32;
            prefix_pi1[n] = prefix_pi1[n - 1] + if prime { n as u64 } else { 0 };
            prefix_spf[n] = prefix_spf[n - 1] + spf[n] as u64;
        }
        PrimeTable {
            limit,
            is_prime,
            spf,
            primes,
            prefix_pi0,
            prefix_pi1,
            prefix_spf,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n as usize <= self.limit && self.is_prime[n as usize / 64] >> (n % 64) & 1 == 1
    }

    fn check(&self, n: u64, lo: u64) -> Result<usize> {
        if n < lo || n > self.limit as u64 {
            return Err(Error::invalid(format!(
                "{n} outside [{lo}, {}]",
                self.limit
            )));
        }
        Ok(n as usize)
    }

    fn floor_arg(&self, x: f64) -> Result<usize> {
        if !x.is_finite() || x > self.limit as f64 {
            return Err(Error::invalid(format!(
                "argument {x} exceeds the sieve limit {}",
                self.limit
            )));
        }
        Ok(if x < 0.0 { 0 } else { x.floor() as usize })
    }

    /// `P1(n)`, the least prime dividing `n`.
    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        let n = self.check(n, 2)?;
        Ok(self.spf[n] as u64)
    }

    /// Unchecked `P1(n)` for hot loops; `n` must lie in `[2, limit]`.
    #[inline]
    pub fn spf(&self, n: usize) -> u64 {
        self.spf[n] as u64
    }

    /// `pi_alpha(floor(x)) = sum_{p <= x} p^alpha` for `alpha` in `{0, 1}`.
    pub fn prime_power_sum(&self, x: f64, alpha: u32) -> Result<u64> {
        let n = self.floor_arg(x)?;
        match alpha {
            0 => Ok(self.prefix_pi0[n.min(self.limit)] as u64),
            1 => Ok(self.prefix_pi1[n.min(self.limit)]),
            _ => Err(Error::invalid(format!("alpha must be 0 or 1, got {alpha}"))),
        }
    }

    /// Prime counting function `pi_0(floor(x))`.
    pub fn pi(&self, x: f64) -> Result<u64> {
        self.prime_power_sum(x, 0)
    }

    /// `sum_{2 <= j <= n} P1(j)`.
    pub fn spf_prefix_sum(&self, n: u64) -> Result<u64> {
        if n < 2 {
            return Ok(0);
        }
        let n = self.check(n, 2)?;
        Ok(self.prefix_spf[n])
    }

    /// Möbius function by walking the smallest-prime-factor chain.
    pub fn mobius(&self, n: u64) -> Result<i8> {
        let mut m = self.check(n, 1)?;
        let mut mu = 1i8;
        while m > 1 {
            let p = self.spf[m] as usize;
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            mu = -mu;
        }
        Ok(mu)
    }

    /// Distinct prime factors of `n`, ascending.
    pub fn distinct_prime_factors(&self, n: u64) -> Result<Vec<u64>> {
        let mut m = self.check(n, 1)?;
        let mut out = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            out.push(p as u64);
            while m % p == 0 {
                m /= p;
            }
        }
        Ok(out)
    }

    /// Serialises the sieve: magic `CLAB1`, the limit as 8-byte little
    /// endian, the primality bit words, then the smallest prime factors as
    /// 4-byte little endian integers.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&(self.limit as u64).to_le_bytes())?;
        for word in &self.is_prime {
            w.write_all(&word.to_le_bytes())?;
        }
        for &s in &self.spf {
            w.write_all(&s.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8)?;
        let limit = u64::from_le_bytes(buf8);
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(Error::Cache(format!("limit {limit} out of range")));
        }
        let limit = limit as usize;
        let mut bits = vec![0u64; limit / 64 + 1];
        for word in bits.iter_mut() {
            r.read_exact(&mut buf8)?;
            *word = u64::from_le_bytes(buf8);
        }
        let mut spf = vec![0u32; limit + 1];
        let mut buf4 = [0u8; 4];
        for s in spf.iter_mut() {
            r.read_exact(&mut buf4)?;
            *s = u32::from_le_bytes(buf4);
        }
        let mut primes = Vec::new();
        for n in 2..=limit {
            let s = spf[n] as usize;
            let flagged = bits[n / 64] >> (n % 64) & 1 == 1;
            if s < 2 || n % s != 0 || flagged != (s == n) {
                return Err(Error::Cache(format!("inconsistent entry at {n}")));
            }
            if s == n {
                primes.push(n as u32);
            }
        }
        Ok(Self::from_spf(limit, spf, primes))
    }
}
