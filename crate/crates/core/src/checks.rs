//! Named checks for every congruence in the reduction chain, and the
//! per-prime report that collects them.
//!
//! A check never throws because its congruence failed: the witnesses go
//! into the report so that a failure can be inspected, whether it is an
//! arithmetic bug or a genuine exception.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::binomials::{
    apply_half_sign, binom_mod_p_direct, binom_p_row_expansion, binom_p_row_factorial,
    binom_p_row_truncated, central_binom_in, central_binom_mod_p3, lh_expansion_with, lucas_binom,
    rh_expansion_with,
};
use crate::error::{Error, Result};
use crate::granville::{
    bas_expansion, granville_sides, rq_chain_sides, skula_route_expansion, skula_sides,
    GranvilleSides,
};
use crate::harmonic::{HarmonicCache, Parity, ParityFilter, Relation};
use crate::modular::{exact_div_by_p, mul_mod, pow_mod, Modulus, Residue, PRIME_CAP_P4};
use crate::primes::OddPrime;

macro_rules! check_ids {
    ($($variant:ident => $name:literal, $k:literal;)*) => {
        /// Identifies one congruence. Names are stable and used verbatim by
        /// the CLI and the report formats.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($variant,)*
        }

        impl CheckId {
            /// Canonical order.
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }

            /// The `k` of the modulus `p^k` both witnesses live in.
            pub fn modulus_power(self) -> u32 {
                match self {
                    $(CheckId::$variant => $k,)*
                }
            }
        }

        impl FromStr for CheckId {
            type Err = UnknownCheck;

            fn from_str(s: &str) -> std::result::Result<Self, UnknownCheck> {
                match s {
                    $($name => Ok(CheckId::$variant),)*
                    _ => Err(UnknownCheck(s.to_string())),
                }
            }
        }
    };
}

check_ids! {
    Morley => "morley", 3;
    MorleyModP2 => "morley_mod_p2", 2;
    FermatLittle => "fermat_little", 1;
    Wilson => "wilson", 1;
    LucasSpot => "lucas_spot", 1;
    Wolstenholme => "wolstenholme", 2;
    Lemma1 => "lemma1", 1;
    Lemma2a => "lemma2a", 1;
    Lemma2b => "lemma2b", 2;
    Eq2Expansion => "eq2_expansion", 3;
    Eq3Lh => "eq3_lh", 3;
    Eq4Rh => "eq4_rh", 3;
    Eq5Reduction => "eq5_reduction", 1;
    ParityDecomposition => "parity_decomposition", 1;
    BasExact => "bas_exact", 3;
    GranvilleIdentity => "granville_identity", 1;
    Skula => "skula", 1;
    RqChain => "rq_chain", 2;
    SkulaRouteMorley => "skula_route_morley", 3;
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownCheck(pub String);

impl fmt::Display for UnknownCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown check `{}`", self.0)
    }
}

impl std::error::Error for UnknownCheck {}

/// Outcome of one check; `holds` is exactly `lhs == rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: CheckId,
    pub holds: bool,
    pub lhs: Residue,
    pub rhs: Residue,
    pub note: Option<String>,
}

impl CheckResult {
    pub fn compare(id: CheckId, lhs: Residue, rhs: Residue) -> Self {
        debug_assert_eq!(lhs.modulus(), rhs.modulus());
        debug_assert_eq!(lhs.modulus().k(), id.modulus_power(), "{id}");
        Self {
            id,
            holds: lhs == rhs,
            lhs,
            rhs,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<22} {:<5} lhs={} rhs={}",
            self.id.name(),
            if self.holds { "ok" } else { "FAIL" },
            self.lhs,
            self.rhs
        )?;
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub p: OddPrime,
    pub results: Vec<CheckResult>,
    /// Wall time per entry of `results`.
    pub timings: Vec<Duration>,
    /// `None` above the `p^4` arithmetic cap.
    pub morley_residual: Option<Residue>,
}

impl CongruenceReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds)
    }

    pub fn residual_is_zero(&self) -> bool {
        self.morley_residual.is_some_and(|r| r.is_zero())
    }

    pub fn elapsed(&self) -> Duration {
        self.timings.iter().sum()
    }

    pub fn result(&self, id: CheckId) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.id == id)
    }
}

/// Index pairs for `lucas_spot`, all derived from `p`.
pub fn lucas_spot_pairs(p: OddPrime) -> Vec<(u64, u64)> {
    let p = p.get();
    vec![
        (p + 2, 2),
        (2 * p + 3, p + 1),
        (p * p, p),
        (p * p - 1, (p - 1) / 2),
        (3 * p + 2, 2 * p + 1),
        (p * p + p + 1, p + 1),
    ]
}

/// Deterministic `x` sample for `granville_identity` inside a report; the
/// full sweep over `0..p` lives in the test suites.
pub fn granville_sample(p: OddPrime) -> Vec<u64> {
    let pv = p.get();
    let mut xs = vec![0, 1, 2, 3, (pv + 1) / 2, pv - 1];
    xs.sort_unstable();
    xs.dedup();
    xs
}

fn two_pow_2p_minus_2(p: OddPrime) -> Result<Residue> {
    let m3 = Modulus::new(p, 3)?;
    Ok(pow_mod(m3.residue(2), 2 * p.get() - 2))
}

/// `(-1)^((p-1)/2) C(p-1, (p-1)/2)` against `2^(2p-2)`, modulo `p^3`.
pub fn morley_check(p: OddPrime) -> Result<CheckResult> {
    let lhs = apply_half_sign(p, central_binom_mod_p3(p)?);
    Ok(CheckResult::compare(CheckId::Morley, lhs, two_pow_2p_minus_2(p)?))
}

/// `((-1)^((p-1)/2) C(p-1,(p-1)/2) - 2^(2p-2)) / p^3 mod p`, from both
/// sides evaluated modulo `p^4`.
pub fn morley_residual(p: OddPrime) -> Result<Residue> {
    let m4 = Modulus::fourth_power(p)?;
    let lhs = apply_half_sign(p, central_binom_in(p, m4));
    let rhs = pow_mod(m4.residue(2), 2 * p.get() - 2);
    let diff = lhs - rhs;
    exact_div_by_p(exact_div_by_p(exact_div_by_p(diff)?)?)
}

/// `(sum_{i even} 1/i)^2` against `sum_{0<j<i<p} (-1)^i/(ij)`, modulo `p`.
pub fn eq5_reduction_check(p: OddPrime) -> Result<CheckResult> {
    Evaluator::new(p)?.run(CheckId::Eq5Reduction)
}

/// `fermat_little`, `wilson` and `lucas_spot`.
pub fn classical_suite(p: OddPrime) -> Result<Vec<CheckResult>> {
    let ev = Evaluator::new(p)?;
    [CheckId::FermatLittle, CheckId::Wilson, CheckId::LucasSpot]
        .into_iter()
        .map(|id| ev.run(id))
        .collect()
}

/// Runs `checks` in order for one prime, sharing one [`HarmonicCache`].
pub fn full_report(p: OddPrime, checks: &[CheckId]) -> Result<CongruenceReport> {
    if checks.is_empty() {
        return Err(Error::EmptyChecks);
    }
    let ev = Evaluator::new(p)?;
    let mut results = Vec::with_capacity(checks.len());
    let mut timings = Vec::with_capacity(checks.len());
    for &id in checks {
        let start = Instant::now();
        results.push(ev.run(id)?);
        timings.push(start.elapsed());
    }
    let morley_residual = if p.get() < PRIME_CAP_P4 {
        morley_residual(p).ok()
    } else {
        None
    };
    Ok(CongruenceReport {
        p,
        results,
        timings,
        morley_residual,
    })
}

/// Evaluates checks for one prime; the harmonic tables are built at most
/// once, and only if some check needs them.
struct Evaluator {
    p: OddPrime,
    m1: Modulus,
    cache: OnceCell<HarmonicCache>,
}

impl Evaluator {
    fn new(p: OddPrime) -> Result<Self> {
        // Every check needs p^3 somewhere; fail on the cap before any work.
        Modulus::new(p, 3)?;
        Ok(Self {
            p,
            m1: Modulus::new(p, 1)?,
            cache: OnceCell::new(),
        })
    }

    fn cache(&self) -> &HarmonicCache {
        self.cache
            .get_or_init(|| HarmonicCache::new(self.p).expect("modulus already validated"))
    }

    fn run(&self, id: CheckId) -> Result<CheckResult> {
        let p = self.p;
        let cmp = |lhs, rhs| CheckResult::compare(id, lhs, rhs);
        Ok(match id {
            CheckId::Morley => morley_check(p)?,
            CheckId::MorleyModP2 => {
                let full = morley_check(p)?;
                cmp(full.lhs.reduce(2), full.rhs.reduce(2))
            }
            CheckId::FermatLittle => cmp(pow_mod(self.m1.residue(2), p.get() - 1), self.m1.one()),
            CheckId::Wilson => {
                let m = self.m1.m();
                let fact = (1..p.get()).fold(1u64, |acc, i| mul_mod(acc, i, m));
                cmp(self.m1.residue(fact), self.m1.residue_i64(-1))
            }
            CheckId::LucasSpot => self.lucas_spot()?,
            CheckId::Wolstenholme => {
                let c = self.cache();
                cmp(c.full_harmonic(), c.mod_p2().zero())
            }
            CheckId::Lemma1 => cmp(
                self.cache().parity_double_sum(ParityFilter::ODD_BEFORE_EVEN),
                self.m1.zero(),
            ),
            CheckId::Lemma2a => cmp(self.cache().inverse_square_sum_half(), self.m1.zero()),
            CheckId::Lemma2b => {
                let c = self.cache();
                cmp(c.alternating_harmonic(), c.harmonic_half())
            }
            CheckId::Eq2Expansion => self.eq2_expansion()?,
            CheckId::Eq3Lh => cmp(lh_expansion_with(self.cache()), two_pow_2p_minus_2(p)?),
            CheckId::Eq4Rh => cmp(
                apply_half_sign(p, central_binom_mod_p3(p)?),
                rh_expansion_with(self.cache()),
            ),
            CheckId::Eq5Reduction => {
                let c = self.cache();
                let even = c.parity_harmonic(Parity::Even);
                cmp(even * even, c.signed_double_sum())
            }
            CheckId::ParityDecomposition => self.parity_decomposition(),
            CheckId::BasExact => cmp(two_pow_2p_minus_2(p)?, bas_expansion(p)?),
            CheckId::GranvilleIdentity => self.granville_identity()?,
            CheckId::Skula => {
                let (lhs, rhs) = skula_sides(self.cache())?;
                cmp(lhs, rhs)
            }
            CheckId::RqChain => {
                let (lhs, rhs) = rq_chain_sides(self.cache())?;
                cmp(lhs, rhs)
            }
            CheckId::SkulaRouteMorley => {
                cmp(skula_route_expansion(self.cache()), two_pow_2p_minus_2(p)?)
            }
        })
    }

    fn lucas_spot(&self) -> Result<CheckResult> {
        let mut last = None;
        for (top, bottom) in lucas_spot_pairs(self.p) {
            let result = CheckResult::compare(
                CheckId::LucasSpot,
                lucas_binom(top, bottom, self.p)?,
                binom_mod_p_direct(top, bottom, self.p)?,
            )
            .with_note(format!("C({top},{bottom})"));
            if !result.holds {
                return Ok(result);
            }
            last = Some(result);
        }
        Ok(last.expect("pair set is non-empty"))
    }

    fn eq2_expansion(&self) -> Result<CheckResult> {
        let p = self.p;
        let expansion = binom_p_row_expansion(p)?;
        let factorial = binom_p_row_factorial(p)?;
        let truncated = binom_p_row_truncated(p)?;
        let id = CheckId::Eq2Expansion;
        for (idx, ((e, f), t)) in expansion.iter().zip(&factorial).zip(&truncated).enumerate() {
            let i = idx + 1;
            if e != f {
                return Ok(CheckResult::compare(id, *e, *f).with_note(format!("product vs factorial at i={i}")));
            }
            if t != e {
                return Ok(CheckResult::compare(id, *t, *e).with_note(format!("truncated vs product at i={i}")));
            }
        }
        let mid = p.half() as usize;
        Ok(CheckResult::compare(id, expansion[mid], factorial[mid]).with_note(format!("all i; shown i={}", mid + 1)))
    }

    fn parity_decomposition(&self) -> CheckResult {
        use Parity::{Even, Odd};
        use Relation::{IBeforeJ, JBeforeI};
        let c = self.cache();
        let sum = |pi, pj, rel| c.parity_double_sum(ParityFilter::new(pi, pj, rel));
        let signed = c.signed_double_sum();
        let four_term = sum(Even, Even, JBeforeI) - sum(Odd, Odd, JBeforeI) - sum(Odd, Even, JBeforeI)
            + sum(Even, Odd, JBeforeI);
        let id = CheckId::ParityDecomposition;
        if four_term != signed {
            return CheckResult::compare(id, four_term, signed).with_note("four-term split");
        }
        // Odd-odd pairs below the diagonal reflect onto even-even pairs above it.
        let two_term = sum(Odd, Even, IBeforeJ) - sum(Odd, Even, JBeforeI);
        CheckResult::compare(id, two_term, signed).with_note("after reflection")
    }

    fn granville_identity(&self) -> Result<CheckResult> {
        let id = CheckId::GranvilleIdentity;
        let mut shown = None;
        for x in granville_sample(self.p) {
            let result = match granville_sides(self.cache(), x)? {
                GranvilleSides::Evaluated { quotient, neg_big_g } => {
                    CheckResult::compare(id, quotient, neg_big_g).with_note(format!("x={x}"))
                }
                GranvilleSides::NotDivisible { bracket, neg_big_g } => {
                    CheckResult::compare(id, bracket.reduce(1), self.m1.zero())
                        .with_note(format!("x={x}: q(x)+g(1-x) = {bracket} is not divisible by p; -G(x) = {neg_big_g}"))
                }
            };
            if !result.holds {
                return Ok(result);
            }
            if x == 2 {
                shown = Some(result);
            }
        }
        Ok(shown.expect("x = 2 is always sampled"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u64) -> OddPrime {
        OddPrime::new(p).unwrap()
    }

    #[test]
    fn names_round_trip_in_canonical_order() {
        assert_eq!(CheckId::ALL.len(), 19);
        for &id in CheckId::ALL {
            assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        }
        assert_eq!(CheckId::ALL[0].name(), "morley");
        assert_eq!(CheckId::ALL[18].name(), "skula_route_morley");
        assert!("morely".parse::<CheckId>().is_err());
    }

    #[test]
    fn morley_examples() {
        for (p, v) in [(5, 6), (7, 323), (11, 1079)] {
            let r = morley_check(prime(p)).unwrap();
            assert!(r.holds);
            assert_eq!((r.lhs.value(), r.rhs.value()), (v, v));
        }
    }

    #[test]
    fn residual_examples() {
        assert_eq!(morley_residual(prime(5)).unwrap().value(), 3);
        assert_eq!(morley_residual(prime(7)).unwrap().value(), 2);
        assert!(morley_residual(prime(32_771)).is_err());
    }

    #[test]
    fn eq5_examples() {
        let r = eq5_reduction_check(prime(5)).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs.value(), 4);
        assert!(eq5_reduction_check(prime(7)).unwrap().holds);
        assert!(eq5_reduction_check(prime(13)).unwrap().holds);
    }

    #[test]
    fn classical_examples() {
        let suite = classical_suite(prime(5)).unwrap();
        assert!(suite.iter().all(|r| r.holds));
        assert_eq!(suite[1].id, CheckId::Wilson);
        assert_eq!(suite[1].lhs.value(), 4);
        assert!(classical_suite(prime(7)).unwrap()[0].holds);
        let pairs = lucas_spot_pairs(prime(5));
        assert!(pairs.contains(&(7, 2)));
        assert_eq!(lucas_binom(7, 2, prime(5)).unwrap().value(), 1);
    }

    #[test]
    fn full_report_at_five() {
        let report = full_report(prime(5), CheckId::ALL).unwrap();
        assert_eq!(report.results.len(), CheckId::ALL.len());
        for r in &report.results {
            assert!(r.holds, "{r}");
        }
        assert_eq!(report.morley_residual.unwrap().value(), 3);
        let ids: Vec<_> = report.results.iter().map(|r| r.id).collect();
        assert_eq!(ids, CheckId::ALL);
    }

    #[test]
    fn full_report_subset_and_errors() {
        let report = full_report(prime(7), &[CheckId::Morley]).unwrap();
        assert_eq!(report.results.len(), 1);
        assert_eq!(full_report(prime(7), &[]), Err(Error::EmptyChecks));
        assert!(matches!(
            full_report(prime(2_097_169), &[CheckId::Morley]),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn reports_are_deterministic_apart_from_timing() {
        let a = full_report(prime(101), CheckId::ALL).unwrap();
        let b = full_report(prime(101), CheckId::ALL).unwrap();
        assert_eq!(a.results, b.results);
        assert_eq!(a.morley_residual, b.morley_residual);
    }

    #[test]
    fn residual_is_absent_above_the_p4_cap() {
        let report = full_report(prime(32_771), &[CheckId::Morley]).unwrap();
        assert!(report.all_hold());
        assert!(report.morley_residual.is_none());
    }
}
