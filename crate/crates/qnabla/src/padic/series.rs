//! Truncated exp/log kernels shared by scalars (m = 1) and families.
//!
//! Elements are coefficient vectors of length m over Z/p^n, i.e. members of
//! (Z/p^n)[u]/(u^m). Both series are evaluated at the profile's padded
//! modulus p^(n+pad) so that every division by a power of p is exact on
//! residues; see the `profile` module docs. Each term is formed from a fresh
//! power x^i (never by dividing a previously divided term), which is what
//! keeps garbage digits out of the low n digits.

use crate::error::{Error, Result};
use crate::profile::Profile;

use super::zmod;

pub(crate) fn conv(a: &[u64], b: &[u64], modulus: u64) -> Vec<u64> {
    let m = a.len();
    debug_assert_eq!(b.len(), m);
    let mut out = vec![0u64; m];
    for i in 0..m {
        if a[i] == 0 {
            continue;
        }
        for j in 0..m - i {
            out[i + j] = zmod::addm(out[i + j], zmod::mulm(a[i], b[j], modulus), modulus);
        }
    }
    out
}

fn min_val(x: &[u64], p: u64, cap: u32) -> u32 {
    x.iter().map(|&c| zmod::val_residue(c, p, cap)).min().unwrap_or(cap)
}

/// Divide every coefficient exactly by p^e; caller guarantees divisibility.
fn div_pow_p(x: &[u64], p: u64, e: u32) -> Vec<u64> {
    let q = zmod::pow_checked(p, e).expect("divisor fits");
    x.iter()
        .map(|&c| {
            debug_assert_eq!(c % q, 0, "series-internal division must be exact");
            c / q
        })
        .collect()
}

fn reduce(x: &[u64], modulus: u64) -> Vec<u64> {
    x.iter().map(|&c| c % modulus).collect()
}

/// log(x) = sum_{i>=1} -(-1)^i (x-1)^i / i, for v(x - 1) >= 1.
///
/// Result is correct mod p^n in every coefficient. Terms with
/// i > n + pad vanish mod p^n, so the loop stops there.
pub(crate) fn rlog(x: &[u64], profile: &Profile) -> Result<Vec<u64>> {
    let p = profile.p();
    let big = profile.padded_modulus();
    let mut t: Vec<u64> = x.to_vec();
    t[0] = zmod::subm(t[0], 1, big);
    if min_val(&t, p, 1) < 1 {
        return Err(Error::Domain(
            "plog requires v(x - 1) >= 1 in every family coefficient".into(),
        ));
    }
    let i_stop = profile.n() + profile.pad();
    let mut acc = vec![0u64; t.len()];
    let mut power = t.clone(); // t^i
    for i in 1..=(i_stop as u64) {
        let v = zmod::val_of(i, p);
        let unit_inv = zmod::invm(i / zmod::pow_checked(p, v).unwrap(), big)
            .expect("unit part is invertible");
        // power's residues are divisible by p^min(i, n+pad) >= p^v, so this is exact.
        let divided = div_pow_p(&power, p, v);
        let term: Vec<u64> = divided.iter().map(|&c| zmod::mulm(c, unit_inv, big)).collect();
        if i % 2 == 1 {
            for (a, t) in acc.iter_mut().zip(&term) {
                *a = zmod::addm(*a, *t, big);
            }
        } else {
            for (a, t) in acc.iter_mut().zip(&term) {
                *a = zmod::subm(*a, *t, big);
            }
        }
        if i < i_stop as u64 {
            power = conv(&power, &t, big);
        }
    }
    Ok(reduce(&acc, profile.modulus()))
}

/// exp(x) = sum_{i>=0} x^i / i!, for v(x) >= 1 (requires p >= 5).
pub(crate) fn rexp(x: &[u64], profile: &Profile) -> Result<Vec<u64>> {
    let p = profile.p();
    let big = profile.padded_modulus();
    if min_val(x, p, 1) < 1 {
        return Err(Error::Domain(
            "pexp requires v(x) >= 1 in every family coefficient".into(),
        ));
    }
    // Terms with i >= cutoff have v(x^i / i!) >= i - v_p(i!) >= n.
    let n = profile.n() as u64;
    let cutoff = (n * (p - 1) + (p - 3)) / (p - 2);
    let mut acc = vec![0u64; x.len()];
    acc[0] = 1;
    let mut power = x.to_vec(); // x^i
    let mut fact_unit: u64 = 1; // unit part of i! mod p^(n+pad)
    let mut fact_val: u32 = 0; // v_p(i!)
    for i in 1..cutoff.max(2) {
        let v = zmod::val_of(i, p);
        fact_val += v;
        fact_unit = zmod::mulm(fact_unit, i / zmod::pow_checked(p, v).unwrap(), big);
        let unit_inv = zmod::invm(fact_unit, big).expect("unit part is invertible");
        let divided = div_pow_p(&power, p, fact_val);
        for (a, c) in acc.iter_mut().zip(&divided) {
            *a = zmod::addm(*a, zmod::mulm(*c, unit_inv, big), big);
        }
        if i + 1 < cutoff.max(2) {
            power = conv(&power, x, big);
        }
    }
    Ok(reduce(&acc, profile.modulus()))
}
