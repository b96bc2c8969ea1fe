//! Exact arithmetic for p-adic families of nearly overconvergent modular forms.
//!
//! Everything is computed over `Z/p^N` or over the family ring
//! `(Z/p^N)[u]/(u^M)`, with q-expansions truncated at a fixed length — no
//! floats, no rounding, no hidden precision loss. A family form carries a
//! weight character `lambda = 1 + pu` interpolating the classical weights:
//! specializing `u` at `u_k = (exp(pk) - 1)/p` recovers weight `k` on the
//! nose, and every identity in the library is checked either exactly on all
//! stored digits or mod an explicitly stated power of p.
//!
//! The layers, bottom to top:
//!
//! * [`profile`] — the precision profile `(p, N, M, Q)` and its derived
//!   working precisions.
//! * [`padic`] — scalars mod `p^N`, family elements mod `(p^N, u^M)`, the
//!   shared [`padic::Coeff`] interface, and the exp/log kernels that convert
//!   between multiplicative and additive coordinates on principal units.
//! * [`qseries`] — truncated q-expansions over either coefficient ring, an
//!   exact integer layer for oracle computations, and the standard
//!   generators (Eisenstein series, `Delta`, `theta`).
//! * [`weight`] — weight characters: classical `z -> z^k`, the universal
//!   family character, evaluation, and the binomial section series.
//! * [`connection`] — splittings of the Hodge filtration, the differential
//!   operator `nabla` on vectors of q-expansions, and coordinate changes
//!   between splittings.
//! * [`hecke`] — `U_p`, `V_p`, and `T_ell` in diagonal coordinates,
//!   eigenvalue extraction, and the calibration search that pins down the
//!   lambda-entry of the connection matrix.
//! * [`verify`] — the named, deterministic verification suites.
//! * [`schema`] — versioned JSON interchange for all of the above.

pub mod connection;
pub mod error;
pub mod hecke;
pub mod padic;
pub mod profile;
pub mod qseries;
pub mod schema;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use padic::{Coeff, FamilyElement, PadicInt};
pub use profile::Profile;
pub use qseries::QSeries;
