//! Exact arithmetic on base-`g` palindromes.
//!
//! The crate is organized bottom-up:
//!
//! - [`digits`]: base-`g` expansions, palindrome enumeration and indexing,
//!   exact counts of `P_L` and `P(x)`, and the K-signature decomposition.
//! - [`modular`]: multiplicative order, inverses, divisor functions,
//!   prime generation and factorization, and the sieve modulus `Q(y)`.
//! - [`expsums`]: exponential sums over palindromes (direct and via the
//!   exact digit-product factorization), power-pair sums, and the bound
//!   checks built on them.
//! - [`counting`]: digit DP for exact residue-class counts, discrepancy,
//!   and the equidistribution checks for exact-length and cumulative ranges.
//! - [`primes`]: primality, the prime-palindrome census, and the truncated
//!   Brun sieve evaluation.
//! - [`cli`]: the `palindist` command-line surface and report serialization.
//!
//! Everything is deterministic. Counts are arbitrary-precision integers;
//! exponential sums that outgrow `f64` are carried in log-polar form
//! ([`LogComplex`]).

pub mod bigmath;
pub mod cli;
pub mod counting;
pub mod digits;
pub mod error;
pub mod expsums;
pub mod modular;
pub mod primes;
pub mod report;

pub use counting::{DecayFit, ResidueCountTable};
pub use digits::{DigitString, SignatureDecomp};
pub use error::{Error, Result};
pub use expsums::LogComplex;
pub use modular::Modulus;
pub use primes::{CensusReport, SieveEvaluation};
pub use report::{BoundId, BoundReport};
