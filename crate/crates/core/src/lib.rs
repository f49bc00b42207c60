//! Exact modular verification of Morley's congruence
//!
//! ```text
//! (-1)^((p-1)/2) C(p-1, (p-1)/2) = 4^(p-1)  (mod p^3),  p > 3 prime
//! ```
//!
//! together with every intermediate congruence of its elementary proof
//! and of the route through Fermat quotients and Granville's identity.
//!
//! - [`modular`]: residues modulo `p`, `p^2`, `p^3` with explicit moduli
//! - [`primes`]: primes `p > 3`, segmented sieve
//! - [`harmonic`]: harmonic and parity-restricted double sums in O(p)
//! - [`binomials`]: `C(p, i)` and the central binomial mod `p^3`, Lucas mod `p`
//! - [`granville`]: Fermat quotients, `q(x)`, `g(x)`, `G(x)`
//! - [`checks`]: named checks and per-prime reports

pub mod binomials;
pub mod checks;
pub mod error;
pub mod granville;
pub mod harmonic;
pub mod modular;
pub mod primes;

pub use checks::{full_report, CheckId, CheckResult, CongruenceReport};
pub use error::{Error, Result};
pub use modular::{Modulus, Residue, PRIME_CAP, PRIME_CAP_P4};
pub use primes::{OddPrime, PrimeRange};
