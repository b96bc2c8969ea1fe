//! Residue arithmetic mod an arbitrary u64 modulus (u128 intermediates).

pub(crate) fn addm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn subm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + m as u128 - (b % m) as u128) % m as u128) as u64
}

pub(crate) fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powm(mut base: u64, mut exp: u64, m: u64) -> u64 {
    base %= m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, m);
        }
        base = mulm(base, base, m);
        exp >>= 1;
    }
    acc
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse mod m when gcd(a, m) = 1.
pub(crate) fn invm(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// v_p of a nonzero integer.
pub(crate) fn val_of(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// v_p of a residue mod p^cap; zero residue reports the full cap.
pub(crate) fn val_residue(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        cap
    } else {
        val_of(x, p).min(cap)
    }
}

pub(crate) fn pow_checked(p: u64, e: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Canonical least residue of a signed integer.
pub(crate) fn reduce_i128(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}
