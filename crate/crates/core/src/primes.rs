//! Primes `p > 3`, the standing hypothesis of every congruence checked here.

use std::fmt;

use crate::error::{Error, Result};
use crate::modular::PRIME_CAP;

/// A prime strictly greater than 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(n: u64) -> Result<Self> {
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
        if n <= 3 {
            return Err(Error::Hypothesis(n));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `(p - 1) / 2`
    pub fn half(self) -> u64 {
        (self.0 - 1) / 2
    }

    /// `(-1)^((p-1)/2)` read off `p mod 4`.
    pub fn half_sign_is_negative(self) -> bool {
        self.0 % 4 == 3
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d <= n / d {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Inclusive bounds for a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Range {
                what: "lo",
                value: lo,
                limit: format!("range start must not exceed its end {hi}"),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }
}

const SEGMENT: u64 = 1 << 16;

/// Ascending primes `> 3` of a range, sieved one fixed-size segment at a time.
#[derive(Debug, Clone)]
pub struct SegmentedPrimes {
    base: Vec<u64>,
    next_lo: u64,
    hi: u64,
    found: Vec<u64>,
    pos: usize,
}

impl SegmentedPrimes {
    fn new(range: PrimeRange) -> Self {
        let limit = isqrt(range.hi);
        let base = small_sieve(limit);
        Self {
            base,
            next_lo: range.lo.max(5),
            hi: range.hi,
            found: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) -> bool {
        self.found.clear();
        self.pos = 0;
        while self.found.is_empty() && self.next_lo <= self.hi {
            let lo = self.next_lo;
            let hi = (lo + SEGMENT - 1).min(self.hi);
            let mut composite = vec![false; (hi - lo + 1) as usize];
            for &q in &self.base {
                if q * q > hi {
                    break;
                }
                let mut start = (q * q).max(lo.div_ceil(q) * q);
                while start <= hi {
                    composite[(start - lo) as usize] = true;
                    start += q;
                }
            }
            self.found.extend(
                composite
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !c)
                    .map(|(off, _)| lo + off as u64)
                    .filter(|&n| n > 3),
            );
            self.next_lo = hi + 1;
        }
        !self.found.is_empty()
    }
}

impl Iterator for SegmentedPrimes {
    type Item = OddPrime;

    fn next(&mut self) -> Option<OddPrime> {
        if self.pos == self.found.len() && !self.fill() {
            return None;
        }
        let p = self.found[self.pos];
        self.pos += 1;
        Some(OddPrime(p))
    }
}

/// Every prime `p > 3` with `lo <= p <= hi`, ascending.
pub fn primes_in_range(range: PrimeRange) -> Result<SegmentedPrimes> {
    if range.hi >= PRIME_CAP {
        return Err(Error::Range {
            what: "hi",
            value: range.hi,
            limit: format!("scans are limited to p < {PRIME_CAP}"),
        });
    }
    Ok(SegmentedPrimes::new(range))
}

/// Convenience: all primes `5 <= p <= n`.
pub fn primes_up_to(n: u64) -> Vec<OddPrime> {
    match PrimeRange::new(5, n.max(5)).and_then(primes_in_range) {
        Ok(it) => it.filter(|p| p.get() <= n).collect(),
        Err(_) => Vec::new(),
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}
