use morley_core::binomials::{
    apply_half_sign, binom_mod_p_direct, binom_p_row_expansion, central_binom_mod_p3,
    lh_expansion, lucas_binom, rh_expansion,
};
use morley_core::checks::{full_report, morley_check, CheckId};
use morley_core::granville::{
    fermat_quotient_2, granville_sides, rq_chain_sides, skula_route_expansion,
};
use morley_core::harmonic::{
    naive_double_sum_oracle, HarmonicCache, Parity, ParityFilter, Relation,
};
use morley_core::modular::{mod_inverse, pow_mod, Modulus};
use morley_core::primes::{primes_up_to, OddPrime};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_filters() -> Vec<ParityFilter> {
    let parities = [Parity::Odd, Parity::Even, Parity::Any];
    let mut out = Vec::new();
    for &pi in &parities {
        for &pj in &parities {
            for rel in [Relation::JBeforeI, Relation::IBeforeJ] {
                out.push(ParityFilter::new(pi, pj, rel));
            }
        }
    }
    out
}

fn oracle_primes() -> Vec<OddPrime> {
    let mut primes = primes_up_to(500);
    let upper: Vec<OddPrime> = primes_up_to(2000)
        .into_iter()
        .filter(|p| p.get() > 500)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f_726c_6579);
    primes.extend(upper.choose_multiple(&mut rng, 20).copied());
    primes
}

#[test]
fn lemma_2a_lemma_1_and_wolstenholme_to_ten_thousand() {
    for p in primes_up_to(10_000) {
        let c = HarmonicCache::new(p).unwrap();
        assert!(c.inverse_square_sum_half().is_zero(), "lemma2a p={p}");
        assert!(c.full_harmonic().is_zero(), "wolstenholme p={p}");
        assert!(c.parity_double_sum(ParityFilter::ODD_BEFORE_EVEN).is_zero(), "lemma1 p={p}");
    }
}

#[test]
fn lemma_2b_reflection_and_four_class_split() {
    use Parity::{Even, Odd};
    use Relation::{IBeforeJ, JBeforeI};
    for p in primes_up_to(2000) {
        let c = HarmonicCache::new(p).unwrap();
        assert_eq!(c.alternating_harmonic(), c.harmonic_half(), "p={p}");
        let sum = |pi, pj, rel| c.parity_double_sum(ParityFilter::new(pi, pj, rel));
        assert_eq!(sum(Odd, Odd, JBeforeI), sum(Even, Even, IBeforeJ), "reflection p={p}");
        let assembled = sum(Even, Even, JBeforeI) - sum(Odd, Odd, JBeforeI)
            - sum(Odd, Even, JBeforeI)
            + sum(Even, Odd, JBeforeI);
        assert_eq!(assembled, c.signed_double_sum(), "four-class p={p}");
    }
}

#[test]
fn lemma_1_proof_steps() {
    // S = sum_{i<j, i odd, j even} 1/(ij). Each displayed step is enumerated
    // directly with independent inverses.
    for p in primes_up_to(300) {
        let pv = p.get();
        let m = Modulus::new(p, 1).unwrap();
        let inv = |n: u64| mod_inverse(m.residue(n)).unwrap();
        let mut s = m.zero();
        let mut doubled = m.zero();
        let mut folded = m.zero();
        let mut reflected = m.zero();
        for i in (1..pv).step_by(2) {
            for j in ((i + 1)..pv).filter(|j| j % 2 == 0) {
                s = s + inv(i * j);
                doubled = doubled + inv(i * j) + inv((j - i) * j);
                folded = folded + inv(i * (j - i));
                reflected = reflected + inv(i * (pv - j));
            }
        }
        let mut odd_pairs = m.zero();
        for i in (1..pv).step_by(2) {
            for k in (1..pv).step_by(2).filter(|k| i + k < pv) {
                odd_pairs = odd_pairs + inv(i * k);
            }
        }
        let two = m.residue(2);
        assert_eq!(doubled, two * s, "p={p}");
        assert_eq!(folded, doubled, "p={p}");
        assert_eq!(odd_pairs, folded, "p={p}");
        assert_eq!(reflected, odd_pairs, "p={p}");
        assert_eq!(reflected, -s, "p={p}");
        assert!((m.residue(3) * s).is_zero(), "p={p}");
        assert!(s.is_zero(), "p={p}");
    }
}

#[test]
fn fast_double_sums_match_quadratic_oracle() {
    for p in oracle_primes() {
        let c = HarmonicCache::new(p).unwrap();
        for f in all_filters() {
            assert_eq!(
                c.parity_double_sum(f),
                naive_double_sum_oracle(p, f, false).unwrap(),
                "p={p} {f:?}"
            );
        }
        assert_eq!(
            c.signed_double_sum(),
            naive_double_sum_oracle(p, ParityFilter::TRIANGLE, true).unwrap(),
            "p={p}"
        );
    }
}

#[test]
fn triangular_half_sum_matches_enumeration() {
    for p in primes_up_to(500) {
        let c = HarmonicCache::new(p).unwrap();
        let m = c.mod_p();
        let mut total = m.zero();
        for i in 1..=p.half() {
            for j in 1..i {
                total = total + mod_inverse(m.residue(i * j)).unwrap();
            }
        }
        assert_eq!(c.triangular_half_double_sum(), total, "p={p}");
    }
}

#[test]
fn reduction_chain_identities_to_two_thousand() {
    for p in primes_up_to(2000) {
        let m3 = Modulus::new(p, 3).unwrap();
        let two = pow_mod(m3.residue(2), 2 * p.get() - 2);
        assert_eq!(lh_expansion(p).unwrap(), two, "eq3 p={p}");
        assert_eq!(
            apply_half_sign(p, central_binom_mod_p3(p).unwrap()),
            rh_expansion(p).unwrap(),
            "eq4 p={p}"
        );
    }
}

#[test]
fn lucas_agrees_with_exact_small_binomials() {
    fn exact(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut c = 1u128;
        for t in 0..k {
            c = c * u128::from(n - t) / u128::from(t + 1);
        }
        c
    }
    for p in primes_up_to(50) {
        for top in 0..=60u64 {
            for bottom in 0..=top {
                let want = (exact(top, bottom) % u128::from(p.get())) as u64;
                assert_eq!(lucas_binom(top, bottom, p).unwrap().value(), want, "C({top},{bottom}) p={p}");
                assert_eq!(binom_mod_p_direct(top, bottom, p).unwrap().value(), want);
            }
        }
    }
}

#[test]
fn fermat_quotient_and_bas_identity_to_ten_thousand() {
    for p in primes_up_to(10_000) {
        let m3 = Modulus::new(p, 3).unwrap();
        let q = fermat_quotient_2(p).unwrap().q;
        let pv = p.get();
        assert_eq!(
            m3.one() + m3.residue(pv * q.value()),
            pow_mod(m3.residue(2), pv - 1),
            "defining invariant p={p}"
        );
        let q1 = q.reduce(1);
        let bas = m3.one() + m3.residue(2 * pv * q.value()) + m3.residue(pv * pv * (q1 * q1).value());
        assert_eq!(bas, pow_mod(m3.residue(2), 2 * pv - 2), "bas p={p}");
    }
}

#[test]
fn granville_identity_for_every_x() {
    for p in primes_up_to(500) {
        let c = HarmonicCache::new(p).unwrap();
        for x in 0..p.get() {
            assert!(granville_sides(&c, x).unwrap().holds(), "p={p} x={x}");
        }
    }
}

#[test]
fn skula_route_chain_and_independence() {
    for p in primes_up_to(2000) {
        let c = HarmonicCache::new(p).unwrap();
        let (lhs, rhs) = rq_chain_sides(&c).unwrap();
        assert_eq!(lhs, rhs, "rq chain p={p}");
        let route = skula_route_expansion(&c);
        let m3 = Modulus::new(p, 3).unwrap();
        assert_eq!(route, pow_mod(m3.residue(2), 2 * p.get() - 2), "p={p}");
        assert_eq!(route, morley_check(p).unwrap().lhs, "p={p}");
    }
}

#[test]
fn theorem_suite_to_ten_thousand() {
    for p in primes_up_to(10_000) {
        let report = full_report(p, CheckId::ALL).unwrap();
        for r in &report.results {
            if r.id != CheckId::LucasSpot {
                assert!(r.holds, "p={p}: {r}");
            }
        }
        let full = report.result(CheckId::Morley).unwrap();
        let weak = report.result(CheckId::MorleyModP2).unwrap();
        assert!(!full.holds || weak.holds);
    }
}

#[test]
fn expansion_row_matches_pascal_by_addition() {
    // Additive Pascal triangle mod p^3: no inverses at all.
    for p in primes_up_to(120) {
        let pv = p.get() as usize;
        let m = p.get().pow(3);
        let mut row = vec![1u64];
        for n in 1..=pv {
            let mut next = vec![1u64; n + 1];
            for k in 1..n {
                next[k] = (row[k - 1] + row[k]) % m;
            }
            row = next;
        }
        let expansion = binom_p_row_expansion(p).unwrap();
        for i in 1..pv {
            assert_eq!(expansion[i - 1].value(), row[i], "p={p} i={i}");
        }
    }
}
