//! q-expansions.
//!
//! Two layers:
//!
//! * [`ZSeries`] — exact integer q-expansions (i128 coefficients) used to
//!   generate the classical forms and to state integral identities with no
//!   modular reduction at all;
//! * [`QSeries<C>`] — truncated q-expansions over a p-adic coefficient ring,
//!   the working representation everywhere else.
//!
//! A `QSeries` knows how many coefficients it actually carries
//! (`prec() == coeffs.len() <= profile.q()`). Binary operations meet
//! precision (`min`), and Hecke operators shrink it honestly: there is no
//! way to read a coefficient nobody computed.
//!
//! Stored coefficient index n is the coefficient of q^n; generators fill
//! the full profile length.

use crate::error::{Error, Result};
use crate::padic::Coeff;
use crate::profile::Profile;

// ---------------------------------------------------------------------------
// exact integer layer

/// Exact integer q-expansion, coefficient of q^n at index n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSeries {
    pub coeffs: Vec<i128>,
}

impl ZSeries {
    pub fn zero(len: usize) -> ZSeries {
        ZSeries { coeffs: vec![0; len] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &ZSeries) -> ZSeries {
        let len = self.len().min(rhs.len());
        ZSeries {
            coeffs: (0..len).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, rhs: &ZSeries) -> ZSeries {
        let len = self.len().min(rhs.len());
        ZSeries {
            coeffs: (0..len).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, rhs: &ZSeries) -> ZSeries {
        let len = self.len().min(rhs.len());
        let mut out = vec![0i128; len];
        for i in 0..len {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..len - i {
                out[i + j] += self.coeffs[i] * rhs.coeffs[j];
            }
        }
        ZSeries { coeffs: out }
    }

    pub fn scale(&self, c: i128) -> ZSeries {
        ZSeries { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    /// theta = q d/dq.
    pub fn theta(&self) -> ZSeries {
        ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, &a)| a * n as i128)
                .collect(),
        }
    }

    /// Reduce into a p-adic coefficient ring, keeping at most the profile's
    /// q-expansion length.
    pub fn to_padic<C: Coeff>(&self, profile: Profile) -> QSeries<C> {
        let len = self.len().min(profile.q() as usize).max(1);
        QSeries {
            coeffs: (0..len)
                .map(|i| C::from_i128(profile, *self.coeffs.get(i).unwrap_or(&0)))
                .collect(),
            profile,
        }
    }
}

/// sigma_k(n) = sum of d^k over divisors d of n, exactly; errors on overflow
/// instead of wrapping (reachable only for very long high-weight series).
fn sigma(n: u64, k: u32) -> Result<i128> {
    let mut acc: i128 = 0;
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut pw: i128 = 1;
        for _ in 0..k {
            pw = pw.checked_mul(d as i128).ok_or_else(|| overflow(n, k))?;
        }
        acc = acc.checked_add(pw).ok_or_else(|| overflow(n, k))?;
    }
    Ok(acc)
}

fn overflow(n: u64, k: u32) -> Error {
    Error::Domain(format!(
        "sigma_{k}({n}) exceeds 128-bit exact integers; shorten the q-expansion"
    ))
}

/// 1 + c * sum_{n>=1} sigma_{k-1}(n) q^n for even k >= 2.
pub fn eisenstein_z(k: u32, c: i128, len: usize) -> Result<ZSeries> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "Eisenstein weight must be even and >= 2, got {k}"
        )));
    }
    let mut coeffs = vec![0i128; len.max(1)];
    coeffs[0] = 1;
    for (n, coeff) in coeffs.iter_mut().enumerate().skip(1) {
        *coeff = c
            .checked_mul(sigma(n as u64, k - 1)?)
            .ok_or_else(|| overflow(n as u64, k - 1))?;
    }
    Ok(ZSeries { coeffs })
}

pub fn e2_z(len: usize) -> ZSeries {
    eisenstein_z(2, -24, len).expect("weight 2 is valid")
}

pub fn e4_std_z(len: usize) -> ZSeries {
    eisenstein_z(4, 240, len).expect("weight 4 is valid")
}

pub fn e6_std_z(len: usize) -> ZSeries {
    eisenstein_z(6, -504, len).expect("weight 6 is valid")
}

/// Euler's function phi(q) = prod (1 - q^n), via the pentagonal number
/// series sum_k (-1)^k q^(k(3k-1)/2).
fn euler_phi_z(len: usize) -> ZSeries {
    let mut coeffs = vec![0i128; len.max(1)];
    coeffs[0] = 1;
    let mut k: i64 = 1;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 as usize >= coeffs.len() && e2 as usize >= coeffs.len() {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for e in [e1, e2] {
            if (e as usize) < coeffs.len() {
                coeffs[e as usize] += sign;
            }
        }
        k += 1;
    }
    ZSeries { coeffs }
}

/// Delta = q * prod (1 - q^n)^24, exactly.
pub fn delta_z(len: usize) -> ZSeries {
    let len = len.max(1);
    let phi = euler_phi_z(len);
    // phi^24 by squaring: (((phi^2)^2)... ) * adjustments.
    let p2 = phi.mul(&phi);
    let p4 = p2.mul(&p2);
    let p8 = p4.mul(&p4);
    let p16 = p8.mul(&p8);
    let p24 = p16.mul(&p8);
    let mut coeffs = vec![0i128; len];
    coeffs[1..].copy_from_slice(&p24.coeffs[..len - 1]);
    ZSeries { coeffs }
}

// ---------------------------------------------------------------------------
// p-adic layer

/// Truncated q-expansion over a p-adic coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries<C: Coeff> {
    coeffs: Vec<C>,
    profile: Profile,
}

impl<C: Coeff> QSeries<C> {
    /// Zero series at full profile length.
    pub fn zero(profile: Profile) -> QSeries<C> {
        QSeries {
            coeffs: vec![C::zero(profile); profile.q() as usize],
            profile,
        }
    }

    pub fn one(profile: Profile) -> QSeries<C> {
        let mut s = QSeries::zero(profile);
        s.coeffs[0] = C::one(profile);
        s
    }

    pub fn from_vec(profile: Profile, coeffs: Vec<C>) -> Result<QSeries<C>> {
        if coeffs.is_empty() || coeffs.len() > profile.q() as usize {
            return Err(Error::Domain(format!(
                "q-expansion length {} outside 1..={}",
                coeffs.len(),
                profile.q()
            )));
        }
        if coeffs.iter().any(|c| c.profile() != profile) {
            return Err(Error::Domain("coefficient profile mismatch".into()));
        }
        Ok(QSeries { coeffs, profile })
    }

    pub fn from_ints(profile: Profile, values: &[i64]) -> Result<QSeries<C>> {
        QSeries::from_vec(
            profile,
            values.iter().map(|&v| C::from_int(profile, v)).collect(),
        )
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    /// Number of known coefficients (q-adic precision).
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, len: usize) -> QSeries<C> {
        assert!(len >= 1 && len <= self.prec(), "cannot extend known coefficients");
        QSeries {
            coeffs: self.coeffs[..len].to_vec(),
            profile: self.profile,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &QSeries<C>) -> QSeries<C> {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        let len = self.prec().min(rhs.prec());
        QSeries {
            coeffs: (0..len).map(|i| self.coeffs[i].add(&rhs.coeffs[i])).collect(),
            profile: self.profile,
        }
    }

    pub fn sub(&self, rhs: &QSeries<C>) -> QSeries<C> {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        let len = self.prec().min(rhs.prec());
        QSeries {
            coeffs: (0..len).map(|i| self.coeffs[i].sub(&rhs.coeffs[i])).collect(),
            profile: self.profile,
        }
    }

    pub fn neg(&self) -> QSeries<C> {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            profile: self.profile,
        }
    }

    pub fn mul(&self, rhs: &QSeries<C>) -> QSeries<C> {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        let len = self.prec().min(rhs.prec());
        let mut out = vec![C::zero(self.profile); len];
        for i in 0..len {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..len - i {
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&rhs.coeffs[j]));
            }
        }
        QSeries { coeffs: out, profile: self.profile }
    }

    pub fn scale(&self, c: &C) -> QSeries<C> {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            profile: self.profile,
        }
    }

    pub fn scale_int(&self, c: i64) -> QSeries<C> {
        self.scale(&C::from_int(self.profile, c))
    }

    /// theta = q d/dq, the weight-raising derivation.
    pub fn theta(&self) -> QSeries<C> {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a.scale_int(n as i64))
                .collect(),
            profile: self.profile,
        }
    }

    /// Coefficientwise congruence mod p^digits over the shared known range.
    pub fn agrees_mod(&self, rhs: &QSeries<C>, digits: u32) -> bool {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        let len = self.prec().min(rhs.prec());
        (0..len).all(|i| self.coeffs[i].congruent_mod(&rhs.coeffs[i], digits))
    }
}

impl QSeries<crate::padic::FamilyElement> {
    /// Evaluate every coefficient at u = u0.
    pub fn specialize(&self, u0: &crate::padic::PadicInt) -> QSeries<crate::padic::PadicInt> {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c.specialize(u0)).collect(),
            profile: self.profile,
        }
    }
}

// ---------------------------------------------------------------------------
// generators over any coefficient ring

pub fn e2<C: Coeff>(profile: Profile) -> QSeries<C> {
    e2_z(profile.q() as usize).to_padic(profile)
}

pub fn e4_std<C: Coeff>(profile: Profile) -> QSeries<C> {
    e4_std_z(profile.q() as usize).to_padic(profile)
}

pub fn e6_std<C: Coeff>(profile: Profile) -> QSeries<C> {
    e6_std_z(profile.q() as usize).to_padic(profile)
}

/// Weight-4 Eisenstein series in the 120-normalization
/// (constant term 1, then 120, 1080, ...).
pub fn e4_paper<C: Coeff>(profile: Profile) -> Result<QSeries<C>> {
    Ok(eisenstein_z(4, 120, profile.q() as usize)?.to_padic(profile))
}

pub fn delta<C: Coeff>(profile: Profile) -> QSeries<C> {
    delta_z(profile.q() as usize).to_padic(profile)
}

/// Eisenstein series 1 + c * sum sigma_{k-1}(n) q^n with an explicit
/// normalization constant.
pub fn eisenstein_with<C: Coeff>(profile: Profile, k: u32, c: i64) -> Result<QSeries<C>> {
    Ok(eisenstein_z(k, c as i128, profile.q() as usize)?.to_padic(profile))
}

/// Standard integral normalizations: the constant making every coefficient
/// an integer. Weight 12 has no such normalization (the Bernoulli denominator
/// 691 survives), and odd/small weights are not modular.
pub fn std_normalization(k: u32) -> Result<i64> {
    match k {
        2 => Ok(-24),
        4 => Ok(240),
        6 => Ok(-504),
        8 => Ok(480),
        10 => Ok(-264),
        14 => Ok(-24),
        12 => Err(Error::Domain(
            "weight 12 Eisenstein has no integral sigma-normalization (denominator 691); \
             pass an explicit constant"
                .into(),
        )),
        other => Err(Error::Domain(format!(
            "no standard normalization for weight {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicInt;

    fn prof() -> Profile {
        Profile::default_profile()
    }

    #[test]
    fn sigma_anchors() {
        assert_eq!(sigma(6, 1).unwrap(), 12);
        assert_eq!(sigma(2, 5).unwrap(), 33);
        assert_eq!(sigma(4, 3).unwrap(), 73);
    }

    #[test]
    fn eisenstein_anchors() {
        let e4 = e4_std_z(8);
        assert_eq!(&e4.coeffs[..4], &[1, 240, 2160, 6720]);
        let e6 = e6_std_z(8);
        assert_eq!(&e6.coeffs[..3], &[1, -504, -16632]);
        let e2 = e2_z(8);
        assert_eq!(&e2.coeffs[..4], &[1, -24, -72, -96]);
    }

    #[test]
    fn delta_against_naive_product() {
        // Independent oracle: multiply out q * prod (1 - q^n)^24 directly.
        let len = 64;
        let mut prod = ZSeries::zero(len);
        prod.coeffs[0] = 1;
        for n in 1..len {
            for _ in 0..24 {
                let mut factor = ZSeries::zero(len);
                factor.coeffs[0] = 1;
                factor.coeffs[n] = -1;
                prod = prod.mul(&factor);
            }
        }
        let mut shifted = ZSeries::zero(len);
        for i in 1..len {
            shifted.coeffs[i] = prod.coeffs[i - 1];
        }
        assert_eq!(delta_z(len), shifted);
    }

    #[test]
    fn tau_anchors() {
        let d = delta_z(20);
        assert_eq!(&d.coeffs[..7], &[0, 1, -24, 252, -1472, 4830, -6048]);
        // Multiplicativity and the prime-power recursion at 2.
        assert_eq!(d.coeffs[6], d.coeffs[2] * d.coeffs[3]);
        assert_eq!(d.coeffs[16], 987136);
    }

    #[test]
    fn precision_meets_and_theta() {
        let pr = prof();
        let a: QSeries<PadicInt> = delta(pr);
        let b = a.truncate(10);
        assert_eq!(a.add(&b).prec(), 10);
        let t = a.theta();
        assert_eq!(t.coeff(2).value(), (15625 - 48));
        assert_eq!(t.coeff(3).value(), 756);
    }

    #[test]
    fn normalization_table() {
        assert_eq!(std_normalization(4).unwrap(), 240);
        assert_eq!(std_normalization(14).unwrap(), -24);
        assert!(std_normalization(12).is_err());
        assert!(std_normalization(5).is_err());
    }

    #[test]
    fn series_length_bounds() {
        let pr = prof();
        assert!(QSeries::<PadicInt>::from_ints(pr, &[]).is_err());
        let too_long = vec![0i64; pr.q() as usize + 1];
        assert!(QSeries::<PadicInt>::from_ints(pr, &too_long).is_err());
    }
}
