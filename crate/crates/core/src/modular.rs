//! Exact arithmetic in `Z/p^k Z`.
//!
//! Every residue carries its modulus explicitly, so "1/i" modulo `p`
//! and "1/i" modulo `p^2` are different values of different types at
//! runtime. Products are formed in `u128`, which keeps `p^3` (and the
//! internal `p^4` used by the residual) exact under the caps below.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::primes::OddPrime;

/// Primes must be strictly below this bound for any `p^k` modulus, `k <= 3`.
pub const PRIME_CAP: u64 = 1 << 21;

/// Tighter bound for the `p^4` modulus used by the Morley residual.
pub const PRIME_CAP_P4: u64 = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    k: u32,
    m: u64,
}

impl Modulus {
    /// `p^k` for `k` in `1..=3`.
    pub fn new(p: OddPrime, k: u32) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return Err(Error::Range {
                what: "k",
                value: u64::from(k),
                limit: "prime powers 1..=3 only".into(),
            });
        }
        Self::build(p.get(), k, PRIME_CAP)
    }

    /// `p^4`, only used for the residual one power beyond Morley's congruence.
    pub(crate) fn fourth_power(p: OddPrime) -> Result<Self> {
        Self::build(p.get(), 4, PRIME_CAP_P4)
    }

    fn build(p: u64, k: u32, cap: u64) -> Result<Self> {
        if p >= cap {
            return Err(Error::Range {
                what: "p",
                value: p,
                limit: format!("p^{k} arithmetic requires p < {cap}"),
            });
        }
        Ok(Self { p, k, m: p.pow(k) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The modulus `p^j` for `1 <= j <= k`.
    pub fn lower(&self, j: u32) -> Modulus {
        assert!(
            (1..=self.k).contains(&j),
            "cannot lower p^{} to p^{}",
            self.k,
            j
        );
        Modulus {
            p: self.p,
            k: j,
            m: self.p.pow(j),
        }
    }

    pub fn residue(&self, value: u64) -> Residue {
        Residue {
            value: value % self.m,
            modulus: *self,
        }
    }

    /// Folds a signed integer into its least nonnegative representative.
    pub fn residue_i64(&self, value: i64) -> Residue {
        let v = i128::from(value).rem_euclid(i128::from(self.m));
        Residue {
            value: v as u64,
            modulus: *self,
        }
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// A canonical residue `0 <= value < p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Residue {
        pow_mod(self, exp)
    }

    pub fn inverse(self) -> Result<Residue> {
        mod_inverse(self)
    }

    /// Image under the projection `Z/p^k -> Z/p^j`.
    pub fn reduce(self, j: u32) -> Residue {
        self.modulus.lower(j).residue(self.value)
    }

    pub fn exact_div_by_p(self) -> Result<Residue> {
        exact_div_by_p(self)
    }

    fn check_same(&self, other: &Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed-modulus arithmetic: {} vs {}",
            self.modulus, other.modulus
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Residue) -> Residue {
        self.check_same(&rhs);
        Residue {
            value: add_mod(self.value, rhs.value, self.modulus.m),
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;

    fn sub(self, rhs: Residue) -> Residue {
        self.check_same(&rhs);
        Residue {
            value: sub_mod(self.value, rhs.value, self.modulus.m),
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Residue) -> Residue {
        self.check_same(&rhs);
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus.m),
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        Residue {
            value: sub_mod(0, self.value, self.modulus.m),
            modulus: self.modulus,
        }
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn pow_mod_raw(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Extended Euclid; `None` when `gcd(a, m) != 1`.
pub(crate) fn inv_mod_raw(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (i128::from(m), i128::from(a % m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(i128::from(m)) as u64)
}

pub fn mod_inverse(a: Residue) -> Result<Residue> {
    let m = a.modulus.m;
    inv_mod_raw(a.value, m)
        .map(|value| Residue {
            value,
            modulus: a.modulus,
        })
        .ok_or(Error::NotInvertible {
            value: a.value,
            modulus: m,
        })
}

pub fn pow_mod(base: Residue, exp: u64) -> Residue {
    Residue {
        value: pow_mod_raw(base.value, exp, base.modulus.m),
        modulus: base.modulus,
    }
}

/// Divides a multiple of `p` modulo `p^k` down to a residue modulo `p^(k-1)`.
pub fn exact_div_by_p(a: Residue) -> Result<Residue> {
    let Modulus { p, k, .. } = a.modulus;
    if k < 2 {
        return Err(Error::Range {
            what: "k",
            value: u64::from(k),
            limit: "exact division by p needs a modulus of at least p^2".into(),
        });
    }
    if a.value % p != 0 {
        return Err(Error::NotDivisible { value: a.value, p });
    }
    Ok(a.modulus.lower(k - 1).residue(a.value / p))
}

/// Inverses of `1..=n` as raw values; entry `i - 1` holds `1/i`.
pub(crate) fn batch_inverse_values(n: u64, modulus: Modulus) -> Result<Vec<u64>> {
    let Modulus { p, k, m } = modulus;
    if n >= p {
        return Err(Error::Range {
            what: "n",
            value: n,
            limit: format!("batch inversion needs n < p = {p}"),
        });
    }
    let n = n as usize;
    let mut inv = vec![0u64; n];
    if n == 0 {
        return Ok(inv);
    }
    if k == 1 {
        // inv[i] = -(m / i) * inv[m mod i]
        inv[0] = 1;
        for i in 2..=n as u64 {
            let r = (m % i) as usize;
            let v = mul_mod(m / i, inv[r - 1], m);
            inv[i as usize - 1] = sub_mod(0, v, m);
        }
        return Ok(inv);
    }
    // Prefix products, one inversion, then unwind.
    let mut prefix = vec![0u64; n];
    let mut acc = 1u64;
    for (i, slot) in prefix.iter_mut().enumerate() {
        acc = mul_mod(acc, i as u64 + 1, m);
        *slot = acc;
    }
    let mut running = inv_mod_raw(acc, m).ok_or(Error::NotInvertible { value: acc, modulus: m })?;
    for i in (1..n).rev() {
        inv[i] = mul_mod(running, prefix[i - 1], m);
        running = mul_mod(running, i as u64 + 1, m);
    }
    inv[0] = running;
    Ok(inv)
}

/// `[1/1, 1/2, ..., 1/n]` modulo `p^k` in O(n) multiplications.
pub fn batch_inverses(n: u64, modulus: Modulus) -> Result<Vec<Residue>> {
    Ok(batch_inverse_values(n, modulus)?
        .into_iter()
        .map(|value| Residue { value, modulus })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn modulus(p: u64, k: u32) -> Modulus {
        Modulus::new(OddPrime::new(p).unwrap(), k).unwrap()
    }

    #[test]
    fn inverse_examples() {
        for m in [modulus(5, 1), modulus(7, 3), modulus(101, 2)] {
            assert_eq!(mod_inverse(m.one()).unwrap().value(), 1);
        }
        assert_eq!(mod_inverse(modulus(5, 1).residue(2)).unwrap().value(), 3);
        assert_eq!(mod_inverse(modulus(5, 2).residue(2)).unwrap().value(), 13);
    }

    #[test]
    fn inverse_of_multiple_of_p_fails() {
        let m = modulus(7, 2);
        assert_eq!(
            mod_inverse(m.residue(14)),
            Err(Error::NotInvertible {
                value: 14,
                modulus: 49
            })
        );
        assert!(mod_inverse(m.zero()).is_err());
    }

    #[test]
    fn batch_examples() {
        let vals = |n, p, k| -> Vec<u64> {
            batch_inverses(n, modulus(p, k))
                .unwrap()
                .iter()
                .map(Residue::value)
                .collect()
        };
        assert_eq!(vals(4, 5, 1), vec![1, 3, 2, 4]);
        assert_eq!(vals(1, 7, 1), vec![1]);
        assert_eq!(vals(6, 7, 2), vec![1, 25, 33, 37, 10, 41]);
        assert!(vals(0, 7, 3).is_empty());
    }

    #[test]
    fn batch_rejects_n_at_or_above_p() {
        assert!(matches!(
            batch_inverses(5, modulus(5, 2)),
            Err(Error::Range { what: "n", .. })
        ));
    }

    #[test]
    fn batch_inverses_exhaustive_small_primes() {
        for p in crate::primes::primes_up_to(1000) {
            for k in [1, 2, 3] {
                let m = Modulus::new(p, k).unwrap();
                let inv = batch_inverse_values(p.get() - 1, m).unwrap();
                for (idx, &v) in inv.iter().enumerate() {
                    assert_eq!(mul_mod(v, idx as u64 + 1, m.m()), 1, "p={p} k={k} i={}", idx + 1);
                }
            }
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(pow_mod(modulus(5, 3).residue(2), 8).value(), 6);
        assert_eq!(pow_mod(modulus(11, 2).residue(7), 0).value(), 1);
        assert_eq!(pow_mod(modulus(7, 1).residue(2), 6).value(), 1);
    }

    #[test]
    fn exact_division_examples() {
        let m = modulus(5, 3);
        assert_eq!(exact_div_by_p(m.residue(250)).unwrap(), modulus(5, 2).zero());
        assert_eq!(exact_div_by_p(m.residue(30)).unwrap(), modulus(5, 2).residue(6));
        assert_eq!(
            exact_div_by_p(m.residue(7)),
            Err(Error::NotDivisible { value: 7, p: 5 })
        );
        assert!(exact_div_by_p(modulus(5, 1).residue(0)).is_err());
    }

    #[test]
    fn negative_values_fold_to_canonical() {
        let m = modulus(5, 3);
        assert_eq!(m.residue_i64(-1).value(), 124);
        assert_eq!(m.residue_i64(-250).value(), 0);
        assert_eq!((-m.residue(3)).value(), 122);
        assert_eq!((m.residue(3) - m.residue(4)).value(), 124);
    }

    #[test]
    fn cap_is_enforced() {
        // 2097143 is the largest prime below 2^21.
        let below = OddPrime::new(2_097_143).unwrap();
        assert!(Modulus::new(below, 3).is_ok());
        let above = OddPrime::new(2_097_169).unwrap();
        assert!(matches!(Modulus::new(above, 1), Err(Error::Range { what: "p", .. })));
        assert!(Modulus::fourth_power(OddPrime::new(32_749).unwrap()).is_ok());
        assert!(Modulus::fourth_power(OddPrime::new(32_771).unwrap()).is_err());
        assert!(Modulus::new(OddPrime::new(5).unwrap(), 4).is_err());
    }

    #[test]
    #[should_panic(expected = "mixed-modulus")]
    fn mixed_moduli_panic() {
        let _ = modulus(5, 1).one() + modulus(5, 2).one();
    }

    fn prime_strategy() -> impl Strategy<Value = OddPrime> {
        let primes = crate::primes::primes_up_to(50_000);
        proptest::sample::select(primes)
    }

    proptest! {
        #[test]
        fn inverse_is_involution(p in prime_strategy(), k in 1u32..=3, raw in any::<u64>()) {
            let m = Modulus::new(p, k).unwrap();
            let a = m.residue(raw);
            prop_assume!(a.value() % p.get() != 0);
            let inv = mod_inverse(a).unwrap();
            prop_assert_eq!(mul_mod(inv.value(), a.value(), m.m()), 1);
            prop_assert_eq!(mod_inverse(inv).unwrap(), a);
        }

        #[test]
        fn inversion_commutes_with_reduction(p in prime_strategy(), raw in any::<u64>()) {
            let m3 = Modulus::new(p, 3).unwrap();
            let a = m3.residue(raw);
            prop_assume!(a.value() % p.get() != 0);
            prop_assert_eq!(
                mod_inverse(a).unwrap().reduce(1),
                mod_inverse(a.reduce(1)).unwrap()
            );
        }

        #[test]
        fn pow_matches_iterated_multiplication(p in prime_strategy(), k in 1u32..=3, raw in any::<u64>(), exp in 0u64..=64) {
            let m = Modulus::new(p, k).unwrap();
            let base = m.residue(raw);
            let mut acc = m.one();
            for _ in 0..exp {
                acc = acc * base;
            }
            prop_assert_eq!(pow_mod(base, exp), acc);
        }
    }
}
