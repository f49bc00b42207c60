//! Binomial coefficients modulo `p` and `p^3`.
//!
//! Three routes that never call each other:
//! - the product expansion `C(p,i) = (-1)^(i-1) (p/i) prod_{j<i} (1 - p/j)`,
//! - plain factorial ratios with every factor a unit (`top < p`),
//! - Lucas' theorem on base-`p` digits, checked against a valuation-stripped
//!   product for arbitrary arguments.

use crate::error::{Error, Result};
use crate::harmonic::HarmonicCache;
use crate::modular::{batch_inverse_values, inv_mod_raw, mul_mod, sub_mod, Modulus, Residue};
use crate::primes::OddPrime;

fn check_index(p: OddPrime, i: u64) -> Result<()> {
    if i == 0 || i >= p.get() {
        return Err(Error::Range {
            what: "i",
            value: i,
            limit: format!("need 1 <= i <= p - 1 = {}", p.get() - 1),
        });
    }
    Ok(())
}

/// `C(p, i) mod p^3` from the full product expansion, nothing truncated.
pub fn binom_p_i_expansion(p: OddPrime, i: u64) -> Result<Residue> {
    check_index(p, i)?;
    let m3 = Modulus::new(p, 3)?;
    let m = m3.m();
    let pv = p.get();
    let inv = batch_inverse_values(i, m3)?;
    let mut prod = 1u64;
    for &inv_j in &inv[..i as usize - 1] {
        prod = mul_mod(prod, sub_mod(1, mul_mod(pv, inv_j, m), m), m);
    }
    let lead = mul_mod(pv, inv[i as usize - 1], m);
    let value = mul_mod(lead, prod, m);
    Ok(m3.residue(if i % 2 == 0 { sub_mod(0, value, m) } else { value }))
}

/// `[C(p,1), ..., C(p,p-1)] mod p^3` by the same product expansion, sharing
/// the running product across `i`.
pub fn binom_p_row_expansion(p: OddPrime) -> Result<Vec<Residue>> {
    let m3 = Modulus::new(p, 3)?;
    let m = m3.m();
    let pv = p.get();
    let inv = batch_inverse_values(pv - 1, m3)?;
    let mut prod = 1u64;
    let mut row = Vec::with_capacity(inv.len());
    for (idx, &inv_i) in inv.iter().enumerate() {
        let i = idx as u64 + 1;
        let value = mul_mod(mul_mod(pv, inv_i, m), prod, m);
        row.push(m3.residue(if i % 2 == 0 { sub_mod(0, value, m) } else { value }));
        prod = mul_mod(prod, sub_mod(1, mul_mod(pv, inv_i, m), m), m);
    }
    Ok(row)
}

/// `[C(p,1), ..., C(p,p-1)] mod p^3` in the first-order form
/// `(-1)^i (-p/i + p^2 sum_{j<i} 1/(ij))`.
pub fn binom_p_row_truncated(p: OddPrime) -> Result<Vec<Residue>> {
    let m3 = Modulus::new(p, 3)?;
    let m = m3.m();
    let pv = p.get();
    let p2 = pv * pv;
    let inv = batch_inverse_values(pv - 1, m3)?;
    let mut prefix = 0u64;
    let mut row = Vec::with_capacity(inv.len());
    for (idx, &inv_i) in inv.iter().enumerate() {
        let i = idx as u64 + 1;
        let first = mul_mod(pv, inv_i, m);
        let second = mul_mod(p2, mul_mod(inv_i, prefix, m), m);
        let value = sub_mod(second, first, m);
        row.push(m3.residue(if i % 2 == 1 { sub_mod(0, value, m) } else { value }));
        prefix = (prefix + inv_i) % m;
    }
    Ok(row)
}

/// `C(top, bottom)` modulo any `p^k` when `top < p`, so that every factor
/// of `bottom!` is a unit.
pub fn binom_below_p(top: u64, bottom: u64, modulus: Modulus) -> Result<Residue> {
    if top >= modulus.p() {
        return Err(Error::Range {
            what: "top",
            value: top,
            limit: format!("factorial route needs top < p = {}", modulus.p()),
        });
    }
    if bottom > top {
        return Ok(modulus.zero());
    }
    let m = modulus.m();
    let (mut num, mut den) = (1u64, 1u64);
    for t in 1..=bottom {
        num = mul_mod(num, top - bottom + t, m);
        den = mul_mod(den, t, m);
    }
    let den_inv = inv_mod_raw(den, m).ok_or(Error::NotInvertible { value: den, modulus: m })?;
    Ok(modulus.residue(mul_mod(num, den_inv, m)))
}

/// `[C(p,1), ..., C(p,p-1)] mod p^3` via `C(p,i) = (p/i) C(p-1,i-1)` and the
/// factorial recurrence for `C(p-1, .)`.
pub fn binom_p_row_factorial(p: OddPrime) -> Result<Vec<Residue>> {
    let m3 = Modulus::new(p, 3)?;
    let m = m3.m();
    let pv = p.get();
    let inv = batch_inverse_values(pv - 1, m3)?;
    // lower = C(p-1, i-1)
    let mut lower = 1u64;
    let mut row = Vec::with_capacity(inv.len());
    for (idx, &inv_i) in inv.iter().enumerate() {
        let i = idx as u64 + 1;
        if i > 1 {
            lower = mul_mod(mul_mod(lower, pv - (i - 1), m), inv[idx - 1], m);
        }
        row.push(m3.residue(mul_mod(mul_mod(pv, inv_i, m), lower, m)));
    }
    Ok(row)
}

pub(crate) fn central_binom_in(p: OddPrime, modulus: Modulus) -> Residue {
    let m = modulus.m();
    let pv = p.get();
    let (mut num, mut den) = (1u64, 1u64);
    for i in 1..=p.half() {
        num = mul_mod(num, pv - i, m);
        den = mul_mod(den, i, m);
    }
    let den_inv = inv_mod_raw(den, m).expect("(p-1)/2 factorial is a unit");
    modulus.residue(mul_mod(num, den_inv, m))
}

/// `C(p-1, (p-1)/2) mod p^3`
pub fn central_binom_mod_p3(p: OddPrime) -> Result<Residue> {
    Ok(central_binom_in(p, Modulus::new(p, 3)?))
}

/// `(-1)^((p-1)/2) * x`
pub fn apply_half_sign(p: OddPrime, x: Residue) -> Residue {
    if p.half_sign_is_negative() {
        -x
    } else {
        x
    }
}

/// `1 - pH + (p^2/2) H^2 mod p^3`, `H` the half harmonic sum.
pub fn rh_expansion(p: OddPrime) -> Result<Residue> {
    Ok(rh_expansion_with(&HarmonicCache::new(p)?))
}

pub fn rh_expansion_with(cache: &HarmonicCache) -> Residue {
    let p = cache.prime();
    let h = cache.harmonic_half();
    let mp = cache.mod_p();
    let h1 = h.reduce(1);
    let half = mp.residue(cache.inv_p(2));
    assemble_p3(p, h, (h1 * h1 * half).value())
}

/// `1 - pH + p^2 (H^2/4 + S) mod p^3`, `S` the signed double sum.
pub fn lh_expansion(p: OddPrime) -> Result<Residue> {
    Ok(lh_expansion_with(&HarmonicCache::new(p)?))
}

pub fn lh_expansion_with(cache: &HarmonicCache) -> Residue {
    let p = cache.prime();
    let h = cache.harmonic_half();
    let mp = cache.mod_p();
    let h1 = h.reduce(1);
    let quarter = mp.residue(cache.inv_p(4));
    let quad = h1 * h1 * quarter + cache.signed_double_sum();
    assemble_p3(p, h, quad.value())
}

/// `1 - p*linear + p^2*quadratic mod p^3`, with `linear` taken mod `p^2` and
/// `quadratic` a value mod `p`.
pub(crate) fn assemble_p3(p: OddPrime, linear: Residue, quadratic: u64) -> Residue {
    let m3 = Modulus::new(p, 3).expect("linear term was built under the same cap");
    let pv = p.get();
    let one = m3.one();
    let lin = m3.residue(pv * linear.value());
    let quad = m3.residue(pv * pv * quadratic);
    one - lin + quad
}

/// `C(n, k) mod p` for `n < p` by a product and one inversion.
fn small_binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for t in 0..k {
        num = mul_mod(num, n - t, p);
        den = mul_mod(den, t + 1, p);
    }
    mul_mod(num, inv_mod_raw(den, p).expect("k! is a unit for k < p"), p)
}

/// `C(top, bottom) mod p` as a product of digit binomials in base `p`.
pub fn lucas_binom(top: u64, bottom: u64, p: OddPrime) -> Result<Residue> {
    let mp = Modulus::new(p, 1)?;
    let pv = p.get();
    let (mut n, mut k) = (top, bottom);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % pv, k % pv);
        if kd > nd {
            return Ok(mp.zero());
        }
        acc = mul_mod(acc, small_binom_mod_p(nd, kd, pv), pv);
        n /= pv;
        k /= pv;
    }
    Ok(mp.residue(acc))
}

/// `C(top, bottom) mod p` for any arguments: factors of `p` are stripped
/// from every numerator and denominator term and counted, and a positive
/// net count gives zero.
pub fn binom_mod_p_direct(top: u64, bottom: u64, p: OddPrime) -> Result<Residue> {
    let mp = Modulus::new(p, 1)?;
    if bottom > top {
        return Ok(mp.zero());
    }
    let pv = p.get();
    let k = bottom.min(top - bottom);
    let mut valuation: i64 = 0;
    let (mut num, mut den) = (1u64, 1u64);
    let strip = |mut x: u64, v: &mut i64, sign: i64| {
        while x % pv == 0 {
            x /= pv;
            *v += sign;
        }
        x % pv
    };
    for t in 1..=k {
        num = mul_mod(num, strip(top - k + t, &mut valuation, 1), pv);
        den = mul_mod(den, strip(t, &mut valuation, -1), pv);
    }
    if valuation > 0 {
        return Ok(mp.zero());
    }
    let den_inv = inv_mod_raw(den, pv).expect("stripped factors are units");
    Ok(mp.residue(mul_mod(num, den_inv, pv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_up_to;

    fn prime(p: u64) -> OddPrime {
        OddPrime::new(p).unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(binom_p_i_expansion(prime(5), 2).unwrap().value(), 10);
        assert_eq!(binom_p_i_expansion(prime(7), 1).unwrap().value(), 7);
        assert_eq!(binom_p_i_expansion(prime(7), 3).unwrap().value(), 35);
        assert!(binom_p_i_expansion(prime(7), 0).is_err());
        assert!(binom_p_i_expansion(prime(7), 7).is_err());
    }

    #[test]
    fn rows_agree_with_single_expansion() {
        for p in [5u64, 7, 11, 13, 97] {
            let row = binom_p_row_expansion(prime(p)).unwrap();
            for i in 1..p {
                assert_eq!(row[i as usize - 1], binom_p_i_expansion(prime(p), i).unwrap());
            }
        }
    }

    #[test]
    fn central_examples() {
        assert_eq!(central_binom_mod_p3(prime(5)).unwrap().value(), 6);
        assert_eq!(central_binom_mod_p3(prime(7)).unwrap().value(), 20);
        assert_eq!(central_binom_mod_p3(prime(11)).unwrap().value(), 252);
    }

    #[test]
    fn expansion_examples_rh_lh() {
        for (p, v) in [(5, 6), (7, 323), (11, 1079)] {
            assert_eq!(rh_expansion(prime(p)).unwrap().value(), v, "rh p={p}");
            assert_eq!(lh_expansion(prime(p)).unwrap().value(), v, "lh p={p}");
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(7, 2, prime(5)).unwrap().value(), 1);
        assert_eq!(lucas_binom(5, 1, prime(5)).unwrap().value(), 0);
        // 252 = 36 * 7
        assert_eq!(lucas_binom(10, 5, prime(7)).unwrap().value(), 0);
        assert_eq!(lucas_binom(3, 5, prime(7)).unwrap().value(), 0);
        assert_eq!(lucas_binom(0, 0, prime(7)).unwrap().value(), 1);
    }

    #[test]
    fn pascal_recurrence() {
        for p in primes_up_to(100) {
            let m3 = Modulus::new(p, 3).unwrap();
            let pv = p.get();
            for i in 1..pv {
                let lhs = binom_p_i_expansion(p, i).unwrap();
                let rhs = binom_below_p(pv - 1, i - 1, m3).unwrap() + binom_below_p(pv - 1, i, m3).unwrap();
                assert_eq!(lhs, rhs, "p={p} i={i}");
            }
        }
    }

    #[test]
    fn central_binomial_is_self_symmetric() {
        for p in primes_up_to(200) {
            let m3 = Modulus::new(p, 3).unwrap();
            let k = p.half();
            let via_factorial = binom_below_p(p.get() - 1, k, m3).unwrap();
            assert_eq!(via_factorial, binom_below_p(p.get() - 1, p.get() - 1 - k, m3).unwrap());
            assert_eq!(via_factorial, central_binom_mod_p3(p).unwrap());
        }
    }

    #[test]
    fn direct_route_handles_multiples_of_p() {
        let p = prime(5);
        // C(25, 5) = 53130 = 0 mod 5
        assert_eq!(binom_mod_p_direct(25, 5, p).unwrap().value(), 53130 % 5);
        // C(13, 6) = 1716
        assert_eq!(binom_mod_p_direct(13, 6, p).unwrap().value(), 1716 % 5);
        assert_eq!(binom_mod_p_direct(4, 6, p).unwrap().value(), 0);
    }
}
