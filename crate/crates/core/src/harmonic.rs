//! Harmonic-type sums of modular inverses.
//!
//! Single sums are taken modulo `p^2` where the reduction chain needs
//! that precision, double sums modulo `p`. Each double sum runs in O(p)
//! with a prefix sum over the inner index; [`naive_double_sum_oracle`]
//! is the O(p^2) enumeration they are tested against.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::modular::{add_mod, batch_inverse_values, inv_mod_raw, mul_mod, sub_mod, Modulus, Residue};
use crate::primes::OddPrime;

/// Largest prime the quadratic oracle accepts.
pub const ORACLE_LIMIT: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
    Any,
}

impl Parity {
    pub fn admits(self, n: u64) -> bool {
        match self {
            Parity::Odd => n % 2 == 1,
            Parity::Even => n % 2 == 0,
            Parity::Any => true,
        }
    }

    /// Parity of `p - n` given the parity of `n`, for odd `p`.
    pub fn reflect(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
            Parity::Any => Parity::Any,
        }
    }
}

/// Strict order between the two summation indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `j < i`
    JBeforeI,
    /// `i < j`
    IBeforeJ,
}

impl Relation {
    pub fn flip(self) -> Relation {
        match self {
            Relation::JBeforeI => Relation::IBeforeJ,
            Relation::IBeforeJ => Relation::JBeforeI,
        }
    }
}

/// Index set `{(i, j) : 0 < i, j < p}` restricted by parity and a strict order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityFilter {
    pub parity_i: Parity,
    pub parity_j: Parity,
    pub relation: Relation,
}

impl ParityFilter {
    /// `0 < i < j < p`, `i` odd, `j` even.
    pub const ODD_BEFORE_EVEN: ParityFilter = ParityFilter {
        parity_i: Parity::Odd,
        parity_j: Parity::Even,
        relation: Relation::IBeforeJ,
    };

    /// `0 < j < i < p` with no parity restriction.
    pub const TRIANGLE: ParityFilter = ParityFilter {
        parity_i: Parity::Any,
        parity_j: Parity::Any,
        relation: Relation::JBeforeI,
    };

    pub const fn new(parity_i: Parity, parity_j: Parity, relation: Relation) -> Self {
        Self {
            parity_i,
            parity_j,
            relation,
        }
    }

    /// Image under `(i, j) -> (p - i, p - j)`: both parities flip and so
    /// does the order. Since `1/((p-i)(p-j)) = 1/(ij) mod p`, a filter and
    /// its reflection give the same double sum modulo `p`.
    pub fn reflect(self) -> Self {
        Self {
            parity_i: self.parity_i.reflect(),
            parity_j: self.parity_j.reflect(),
            relation: self.relation.flip(),
        }
    }

    /// Renames `i <-> j`. The unsigned sum is unchanged.
    pub fn transpose(self) -> Self {
        Self {
            parity_i: self.parity_j,
            parity_j: self.parity_i,
            relation: self.relation.flip(),
        }
    }

    pub fn admits(&self, i: u64, j: u64) -> bool {
        let ordered = match self.relation {
            Relation::JBeforeI => j < i,
            Relation::IBeforeJ => i < j,
        };
        ordered && self.parity_i.admits(i) && self.parity_j.admits(j)
    }

    /// Parities of the (larger, smaller) index.
    fn outer_inner(&self) -> (Parity, Parity) {
        match self.relation {
            Relation::JBeforeI => (self.parity_i, self.parity_j),
            Relation::IBeforeJ => (self.parity_j, self.parity_i),
        }
    }
}

/// Inverses of `1..p-1` for one prime, mod `p` eagerly and mod `p^2` on demand.
#[derive(Debug)]
pub struct HarmonicCache {
    prime: OddPrime,
    mod_p: Modulus,
    mod_p2: Modulus,
    inv_p: Vec<u64>,
    inv_p2: OnceLock<Vec<u64>>,
}

impl HarmonicCache {
    pub fn new(prime: OddPrime) -> Result<Self> {
        let mod_p = Modulus::new(prime, 1)?;
        let mod_p2 = Modulus::new(prime, 2)?;
        let inv_p = batch_inverse_values(prime.get() - 1, mod_p)?;
        Ok(Self {
            prime,
            mod_p,
            mod_p2,
            inv_p,
            inv_p2: OnceLock::new(),
        })
    }

    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    pub fn mod_p(&self) -> Modulus {
        self.mod_p
    }

    pub fn mod_p2(&self) -> Modulus {
        self.mod_p2
    }

    /// `1/i mod p` for `0 < i < p`.
    pub fn inv_p(&self, i: u64) -> u64 {
        self.inv_p[i as usize - 1]
    }

    /// `1/i mod p^2` for `0 < i < p`.
    pub fn inv_p2(&self, i: u64) -> u64 {
        self.inverses_p2()[i as usize - 1]
    }

    fn inverses_p2(&self) -> &[u64] {
        self.inv_p2.get_or_init(|| {
            batch_inverse_values(self.prime.get() - 1, self.mod_p2)
                .expect("1..p-1 are units mod p^2")
        })
    }

    fn sum_p2(&self, range: std::ops::RangeInclusive<u64>, sign: impl Fn(u64) -> bool) -> Residue {
        let m = self.mod_p2.m();
        let inv = self.inverses_p2();
        let total = range.fold(0u64, |acc, i| {
            let t = inv[i as usize - 1];
            if sign(i) {
                sub_mod(acc, t, m)
            } else {
                add_mod(acc, t, m)
            }
        });
        self.mod_p2.residue(total)
    }

    /// `sum_{i=1}^{(p-1)/2} 1/i mod p^2`
    pub fn harmonic_half(&self) -> Residue {
        self.sum_p2(1..=self.prime.half(), |_| false)
    }

    /// `sum_{i=1}^{p-1} (-1)^i / i mod p^2`
    pub fn alternating_harmonic(&self) -> Residue {
        self.sum_p2(1..=self.prime.get() - 1, |i| i % 2 == 1)
    }

    /// `sum_{i=1}^{p-1} 1/i mod p^2`; zero by Wolstenholme's theorem.
    pub fn full_harmonic(&self) -> Residue {
        self.sum_p2(1..=self.prime.get() - 1, |_| false)
    }

    /// `sum_{i=1}^{(p-1)/2} 1/i^2 mod p`
    pub fn inverse_square_sum_half(&self) -> Residue {
        let m = self.mod_p.m();
        let total = self.inv_p[..self.prime.half() as usize]
            .iter()
            .fold(0, |acc, &v| add_mod(acc, mul_mod(v, v, m), m));
        self.mod_p.residue(total)
    }

    /// `sum 1/i mod p` over `0 < i < p` of the given parity.
    pub fn parity_harmonic(&self, parity: Parity) -> Residue {
        let m = self.mod_p.m();
        let total = (1..self.prime.get())
            .filter(|&i| parity.admits(i))
            .fold(0, |acc, i| add_mod(acc, self.inv_p(i), m));
        self.mod_p.residue(total)
    }

    /// `sum 1/(ij) mod p` over the filtered index pairs.
    pub fn parity_double_sum(&self, filter: ParityFilter) -> Residue {
        let (outer, inner) = filter.outer_inner();
        self.prefix_double_sum(1..self.prime.get(), outer, inner, |_| false)
    }

    /// `sum_{0<j<i<p} (-1)^i / (ij) mod p`
    pub fn signed_double_sum(&self) -> Residue {
        self.prefix_double_sum(1..self.prime.get(), Parity::Any, Parity::Any, |i| i % 2 == 1)
    }

    /// `sum_{1<=j<i<=(p-1)/2} 1/(ij) mod p`
    pub fn triangular_half_double_sum(&self) -> Residue {
        self.prefix_double_sum(1..self.prime.half() + 1, Parity::Any, Parity::Any, |_| false)
    }

    /// One pass over the larger index; the smaller one is carried as a
    /// running sum of inverses with the inner parity.
    fn prefix_double_sum(
        &self,
        range: std::ops::Range<u64>,
        outer: Parity,
        inner: Parity,
        negate_outer: impl Fn(u64) -> bool,
    ) -> Residue {
        let m = self.mod_p.m();
        let mut prefix = 0u64;
        let mut total = 0u64;
        for n in range {
            let inv = self.inv_p(n);
            if outer.admits(n) {
                let term = mul_mod(inv, prefix, m);
                total = if negate_outer(n) {
                    sub_mod(total, term, m)
                } else {
                    add_mod(total, term, m)
                };
            }
            if inner.admits(n) {
                prefix = add_mod(prefix, inv, m);
            }
        }
        self.mod_p.residue(total)
    }
}

pub fn harmonic_half(p: OddPrime) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.harmonic_half())
}

pub fn alternating_harmonic(p: OddPrime) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.alternating_harmonic())
}

pub fn full_harmonic(p: OddPrime) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.full_harmonic())
}

pub fn inverse_square_sum_half(p: OddPrime) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.inverse_square_sum_half())
}

pub fn parity_double_sum(p: OddPrime, filter: ParityFilter) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.parity_double_sum(filter))
}

pub fn signed_double_sum(p: OddPrime) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.signed_double_sum())
}

pub fn triangular_half_double_sum(p: OddPrime) -> Result<Residue> {
    Ok(HarmonicCache::new(p)?.triangular_half_double_sum())
}

/// Direct two-loop enumeration of `sum (+-1) / (ij) mod p` over the filter,
/// with sign `(-1)^i` when `signed`. Each inverse comes from an independent
/// extended-Euclid call on the product `ij`.
pub fn naive_double_sum_oracle(p: OddPrime, filter: ParityFilter, signed: bool) -> Result<Residue> {
    let pv = p.get();
    if pv > ORACLE_LIMIT {
        return Err(Error::Range {
            what: "p",
            value: pv,
            limit: format!("the quadratic oracle is limited to p <= {ORACLE_LIMIT}"),
        });
    }
    let mut total: i64 = 0;
    for i in 1..pv {
        for j in 1..pv {
            if !filter.admits(i, j) {
                continue;
            }
            let inv = inv_mod_raw(i * j % pv, pv).expect("0 < i, j < p") as i64;
            if signed && i % 2 == 1 {
                total -= inv;
            } else {
                total += inv;
            }
        }
    }
    Ok(Modulus::new(p, 1)?.residue_i64(total))
}
