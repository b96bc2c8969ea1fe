//! Working precision for every computation in this crate.
//!
//! A `Profile` fixes once and for all:
//!
//! * `p`   — an odd prime, at least 5 (so that exp converges on pZ_p);
//! * `n`   — p-adic precision: scalars live in Z/p^n;
//! * `m`   — weight-direction precision: families live in (Z/p^n)[u]/(u^m);
//! * `q`   — maximum number of stored q-expansion coefficients.
//!
//! There is no adaptive precision anywhere. Operations that would need
//! digits beyond the profile fail loudly with [`Error::Precision`].
//!
//! Internally, the exp/log kernels evaluate their series at the padded
//! modulus p^(n+pad), where `pad` bounds every division by a power of p
//! that can occur in a series term at precision n. Each term is computed
//! non-cumulatively as x^i · (unit part of the denominator)^{-1} / p^(v_p
//! of the denominator); the residue of x^i mod p^(n+pad) is genuinely
//! divisible by the required power, so the division is exact and results
//! are correct mod p^n with no hidden garbage. `Profile::new` rejects
//! parameters whose padded modulus overflows u64.

use crate::error::{Error, Result};
use crate::padic::zmod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Profile {
    p: u64,
    n: u32,
    m: u32,
    q: u32,
    modulus: u64,
    pad: u32,
    padded_modulus: u64,
}

impl Profile {
    /// Default working profile: p = 5, six p-digits, u^4 truncation,
    /// 64 q-expansion coefficients.
    pub fn default_profile() -> Profile {
        Profile::new(5, 6, 4, 64).expect("default profile is valid")
    }

    pub fn new(p: u64, n: u32, m: u32, q: u32) -> Result<Profile> {
        if p < 5 || !is_prime(p) {
            return Err(Error::Domain(format!(
                "p must be a prime >= 5 (exp/log kernels diverge below), got {p}"
            )));
        }
        if n < 1 {
            return Err(Error::Domain("p-adic precision n must be >= 1".into()));
        }
        if m < 1 {
            return Err(Error::Domain("family precision m must be >= 1".into()));
        }
        if q < 2 {
            return Err(Error::Domain("q-expansion length q must be >= 2".into()));
        }
        let modulus = zmod::pow_checked(p, n).ok_or_else(|| Error::Domain(format!(
            "p^n = {p}^{n} does not fit in 64 bits"
        )))?;
        let pad = series_pad(p, n);
        let padded_modulus = zmod::pow_checked(p, n + pad).ok_or_else(|| {
            Error::Precision {
                needed: n + pad,
                available: 63 / p.ilog2().max(1),
                context: format!(
                    "padded modulus p^(n+{pad}) for the exp/log kernel overflows u64; \
                     lower the p-adic precision n"
                ),
            }
        })?;
        Ok(Profile { p, n, m, q, modulus, pad, padded_modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// p-adic precision: scalars are residues mod p^n.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Weight-direction precision: families are truncated at u^m.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Maximum stored q-expansion length.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub(crate) fn pad(&self) -> u32 {
        self.pad
    }

    pub(crate) fn padded_modulus(&self) -> u64 {
        self.padded_modulus
    }

    /// p^digits for digits <= n.
    pub fn pow_p(&self, digits: u32) -> u64 {
        debug_assert!(digits <= self.n);
        zmod::pow_checked(self.p, digits).expect("within modulus range")
    }

    /// Guaranteed p-digits of wt(chi) after the universal family's u-truncation:
    /// specializing the truncated log of 1 + pu at a classical point misses the
    /// dropped tail sum_{i>=m} ±p^(i-1) u^i / i, of valuation
    /// min_{i>=m} (i - 1 - v_p(i)). Capped at n.
    pub fn wt_truncation_digits(&self) -> u32 {
        let mut best = self.n;
        // Beyond this range i - 1 - v_p(i) certainly exceeds n.
        for i in self.m..(self.m + 4 * self.n + 8) {
            let i = i as u64;
            let v = zmod::val_of(i, self.p);
            let digits = (i as i64 - 1 - v as i64).max(0) as u32;
            best = best.min(digits);
        }
        best
    }
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Extra digits needed so every series term of exp/log at precision n can be
/// computed by an exact division. Log terms x^i/i need v_p(i) digits for
/// i <= n + pad; exp terms x^i/i! need v_p(i!) digits for i below the cutoff
/// where terms vanish mod p^n.
fn series_pad(p: u64, n: u32) -> u32 {
    // log: smallest e with p^e > n + e covers v_p(i) for all i <= n + e.
    let mut pad_log = 0u32;
    loop {
        match zmod::pow_checked(p, pad_log) {
            Some(pe) if pe > (n + pad_log) as u64 => break,
            Some(_) => pad_log += 1,
            None => break, // astronomically large p: v_p(i) = 0 in range anyway
        }
    }
    // exp: terms with i >= ceil(n(p-1)/(p-2)) have i - v_p(i!) >= n, hence
    // vanish mod p^n; pad must cover v_p(i!) for i below that cutoff.
    let cutoff = ((n as u64 * (p - 1)) + (p - 3)) / (p - 2); // ceil
    let mut pad_exp = 0u32;
    let mut pe = p;
    while pe <= cutoff {
        pad_exp += (cutoff / pe) as u32;
        match pe.checked_mul(p) {
            Some(next) => pe = next,
            None => break,
        }
    }
    pad_log.max(pad_exp)
}
