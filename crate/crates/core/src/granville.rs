//! Fermat quotients and the functions `q(x)`, `g(x)`, `G(x)`:
//!
//! ```text
//! q(x) = (x^p - (x-1)^p - 1) / p
//! g(x) = sum_{i=1}^{p-1} x^i / i          (mod p^2)
//! G(x) = sum_{i=1}^{p-1} x^i / i^2        (mod p)
//! ```
//!
//! `x` is always taken as its least nonnegative representative modulo `p`
//! before evaluation; `q(x)` and `g(x)` modulo `p^2` depend on that choice.

use crate::error::Result;
use crate::harmonic::HarmonicCache;
use crate::modular::{add_mod, exact_div_by_p, mul_mod, pow_mod, Modulus, Residue};
use crate::primes::OddPrime;

/// `q = (2^(p-1) - 1) / p`, kept modulo `p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermatQuotient {
    pub p: OddPrime,
    pub q: Residue,
}

/// `q(x) mod p^2`, `g(x) mod p^2` and `G(x) mod p` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GranvilleTriple {
    pub qx: Residue,
    pub gx: Residue,
    pub big_gx: Residue,
}

pub fn fermat_quotient_2(p: OddPrime) -> Result<FermatQuotient> {
    let m3 = Modulus::new(p, 3)?;
    let two = pow_mod(m3.residue(2), p.get() - 1);
    let q = exact_div_by_p(two - m3.one())?;
    Ok(FermatQuotient { p, q })
}

pub fn q_x(p: OddPrime, x: u64) -> Result<Residue> {
    let m3 = Modulus::new(p, 3)?;
    let x = x % p.get();
    let xm1 = m3.residue_i64(x as i64 - 1);
    let value = pow_mod(m3.residue(x), p.get()) - pow_mod(xm1, p.get()) - m3.one();
    exact_div_by_p(value)
}

pub fn g_x(p: OddPrime, x: u64) -> Result<Residue> {
    Ok(g_x_with(&HarmonicCache::new(p)?, x))
}

pub fn g_x_with(cache: &HarmonicCache, x: u64) -> Residue {
    let m2 = cache.mod_p2();
    let m = m2.m();
    let x = x % cache.prime().get();
    let mut power = 1u64;
    let mut total = 0u64;
    for i in 1..cache.prime().get() {
        power = mul_mod(power, x, m);
        total = add_mod(total, mul_mod(power, cache.inv_p2(i), m), m);
    }
    m2.residue(total)
}

#[allow(non_snake_case)]
pub fn G_x(p: OddPrime, x: u64) -> Result<Residue> {
    Ok(big_g_x_with(&HarmonicCache::new(p)?, x))
}

pub fn big_g_x_with(cache: &HarmonicCache, x: u64) -> Residue {
    let mp = cache.mod_p();
    let m = mp.m();
    let x = x % m;
    let mut power = 1u64;
    let mut total = 0u64;
    for i in 1..m {
        power = mul_mod(power, x, m);
        let inv = cache.inv_p(i);
        total = add_mod(total, mul_mod(power, mul_mod(inv, inv, m), m), m);
    }
    mp.residue(total)
}

pub fn granville_triple(cache: &HarmonicCache, x: u64) -> Result<GranvilleTriple> {
    Ok(GranvilleTriple {
        qx: q_x(cache.prime(), x)?,
        gx: g_x_with(cache, x),
        big_gx: big_g_x_with(cache, x),
    })
}

/// Both sides of `-G(x) = (q(x) + g(1-x)) / p (mod p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GranvilleSides {
    /// `(q(x) + g(1-x)) / p` and `-G(x)`, both mod `p`.
    Evaluated { quotient: Residue, neg_big_g: Residue },
    /// `q(x) + g(1-x)` was not a multiple of `p`.
    NotDivisible { bracket: Residue, neg_big_g: Residue },
}

impl GranvilleSides {
    pub fn holds(&self) -> bool {
        matches!(self, GranvilleSides::Evaluated { quotient, neg_big_g } if quotient == neg_big_g)
    }
}

pub fn granville_sides(cache: &HarmonicCache, x: u64) -> Result<GranvilleSides> {
    let p = cache.prime();
    let x = x % p.get();
    let one_minus_x = (1 + p.get() - x) % p.get();
    let bracket = q_x(p, x)? + g_x_with(cache, one_minus_x);
    let neg_big_g = -big_g_x_with(cache, x);
    Ok(match exact_div_by_p(bracket) {
        Ok(quotient) => GranvilleSides::Evaluated { quotient, neg_big_g },
        Err(_) => GranvilleSides::NotDivisible { bracket, neg_big_g },
    })
}

/// `q^2 mod p` and `-G(2) mod p`.
pub fn skula_sides(cache: &HarmonicCache) -> Result<(Residue, Residue)> {
    let q = fermat_quotient_2(cache.prime())?.q.reduce(1);
    Ok((q * q, -big_g_x_with(cache, 2)))
}

/// `2q mod p^2` and `-g(-1) + q^2 p mod p^2`.
pub fn rq_chain_sides(cache: &HarmonicCache) -> Result<(Residue, Residue)> {
    let p = cache.prime();
    let q = fermat_quotient_2(p)?.q;
    let m2 = cache.mod_p2();
    let q1 = q.reduce(1);
    let q_sq_p = m2.residue((q1 * q1).value() * p.get());
    let g_minus_one = g_x_with(cache, p.get() - 1);
    Ok((q + q, q_sq_p - g_minus_one))
}

/// `1 + 2qp + q^2 p^2 mod p^3` with `q mod p^2`, `q^2 mod p`.
pub fn bas_expansion(p: OddPrime) -> Result<Residue> {
    let q = fermat_quotient_2(p)?.q;
    let m3 = Modulus::new(p, 3)?;
    let pv = p.get();
    let q1 = q.reduce(1);
    Ok(m3.one() + m3.residue(2 * pv * q.value()) + m3.residue(pv * pv * (q1 * q1).value()))
}

/// `1 - g(-1) p + (1/2) g(-1)^2 p^2 mod p^3`.
pub fn skula_route_expansion(cache: &HarmonicCache) -> Residue {
    let p = cache.prime();
    let g = g_x_with(cache, p.get() - 1);
    let g1 = g.reduce(1);
    let half = cache.mod_p().residue(cache.inv_p(2));
    crate::binomials::assemble_p3(p, g, (g1 * g1 * half).value())
}
