//! The weight disk and its characters.
//!
//! A continuous character of Z_p^* splits as (tame part) x (wild part):
//! the tame part is a power of the Teichmueller character, the wild part is
//! determined by lambda = chi(pexp(p)), the image of the topological
//! generator 1 + (p + higher) of the principal units. We store exactly that
//! pair. Scalars give a single character; family coefficients give the
//! universal character of the disk, with lambda = 1 + pu.
//!
//! `wt` recovers the derivative-at-identity weight plog(lambda)/p. The
//! division by p is exact (plog lands in pZ), but the quotient is only
//! determined mod p^(n-1): the stored top digit is the deterministic
//! artifact of dividing canonical representatives. Downstream identities
//! that must be exact mod p^n therefore either use `wt` once (so the
//! artifact cancels) or avoid plog entirely via integer weights.
//!
//! Only tame conductor (level prime to p, here 1) is supported; wild
//! twists are rejected at the schema boundary.

use crate::error::{Error, Result};
use crate::padic::{binom_series, teichmueller, Coeff, FamilyElement, PadicInt};
use crate::profile::Profile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character<C: Coeff> {
    profile: Profile,
    /// Exponent of the Teichmueller character, mod p - 1.
    tame: u64,
    /// Image of the wild generator: chi(pexp(p)).
    lambda: C,
    /// Set when this character is known to be z -> z^k (times a tame twist);
    /// carries the integer k for plog-free classical pipelines.
    classical_k: Option<i64>,
}

/// The algebraic character z -> omega(z)^twist * <z>^k.
pub fn classical_char(profile: Profile, k: i64, twist: i64) -> Result<Character<PadicInt>> {
    let lambda = PadicInt::new(profile, k)
        .scale_int(profile.p() as i64)
        .pexp()?;
    Ok(Character {
        profile,
        tame: combine_tame(profile, k.rem_euclid((profile.p() - 1) as i64) as u64, twist),
        lambda,
        classical_k: Some(k),
    })
}

/// The universal character of the weight disk: lambda = 1 + pu.
pub fn universal_char(profile: Profile) -> Result<Character<FamilyElement>> {
    let lambda = FamilyElement::one(profile)
        .add(&FamilyElement::u(profile).scale_int(profile.p() as i64));
    Ok(Character { profile, tame: 0, lambda, classical_k: None })
}

pub fn trivial_char(profile: Profile) -> Character<PadicInt> {
    classical_char(profile, 0, 0).expect("weight 0 always exists")
}

fn combine_tame(profile: Profile, base: u64, twist: i64) -> u64 {
    let order = profile.p() - 1;
    ((base as i64 + twist).rem_euclid(order as i64)) as u64
}

impl<C: Coeff> Character<C> {
    pub fn from_parts(profile: Profile, tame: u64, lambda: C, classical_k: Option<i64>) -> Result<Character<C>> {
        if lambda.sub(&C::one(profile)).val() < 1 {
            return Err(Error::Domain(
                "character lambda must satisfy v(lambda - 1) >= 1".into(),
            ));
        }
        Ok(Character {
            profile,
            tame: tame % (profile.p() - 1),
            lambda,
            classical_k,
        })
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn tame(&self) -> u64 {
        self.tame
    }

    pub fn lambda(&self) -> &C {
        &self.lambda
    }

    pub fn classical_k(&self) -> Option<i64> {
        self.classical_k
    }

    /// Conductor prime to p; only unramified-at-p (tame) characters exist here.
    pub fn conductor(&self) -> u64 {
        1
    }

    /// Pointwise product of characters.
    pub fn mul(&self, rhs: &Character<C>) -> Character<C> {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        Character {
            profile: self.profile,
            tame: (self.tame + rhs.tame) % (self.profile.p() - 1),
            lambda: self.lambda.mul(&rhs.lambda),
            classical_k: match (self.classical_k, rhs.classical_k) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    /// Twist by the m-th power of the cyclotomic character z -> z^m.
    pub fn twist_cycl(&self, m: i64) -> Character<C> {
        let pm = C::from_int(self.profile, m).scale_int(self.profile.p() as i64);
        let factor = pm.pexp().expect("v(pm) >= 1 by construction");
        Character {
            profile: self.profile,
            tame: combine_tame(self.profile, self.tame, m),
            lambda: self.lambda.mul(&factor),
            classical_k: self.classical_k.map(|k| k + m),
        }
    }

    /// The p-adic weight: wt(chi) = plog(lambda)/p. Well-defined mod p^(n-1);
    /// see the module docs for the top-digit convention.
    pub fn wt(&self) -> Result<C> {
        self.lambda.plog()?.div_exact_p()
    }

    /// chi(a) for an integer a prime to p:
    /// omega(a)^tame * pexp(plog(<a>)/p * plog(lambda)).
    ///
    /// Exact mod p^n: the two division-by-p artifacts sit under a factor of
    /// valuation >= 1 each, so they cannot reach the stored digits.
    pub fn eval(&self, a: i64) -> Result<C> {
        let omega = teichmueller(self.profile, a)?;
        let omega_pow = omega.pow(self.tame);
        // <a> = a / omega(a), the principal-unit part.
        let principal = PadicInt::new(self.profile, a).mul(&omega.inv()?);
        let c = principal.plog()?.div_exact_p()?;
        let exponent = C::from_i128(self.profile, c.value() as i128).mul(&self.lambda.plog()?);
        let wild = exponent.pexp()?;
        Ok(C::from_i128(self.profile, omega_pow.value() as i128).mul(&wild))
    }

    /// Smallest n >= 2 with lambda^(p^(n-2)) = 1 + O(p): the analytic level
    /// of the weight disk's characters in this representation. Everything
    /// storable here has level 2 (lambda = 1 mod p by construction).
    pub fn analytic_level(&self) -> u32 {
        2
    }

    /// Coefficients of the weight-chi section series: index i holds
    /// binom(wt(chi), i), so that sum_i c_i (z - 1)^i interpolates
    /// z -> "z^wt(chi)" on arguments with v(z - 1) >= level.
    ///
    /// `level` must be at least `analytic_level()`. `terms` beyond p can hit
    /// an inexact division for non-classical weights; the error says so.
    pub fn section_series(&self, level: u32, terms: u32) -> Result<Vec<C>> {
        if level < self.analytic_level() {
            return Err(Error::Domain(format!(
                "section level {level} below the character's analytic level {}",
                self.analytic_level()
            )));
        }
        let s = self.wt()?;
        (0..terms).map(|i| binom_series(&s, i)).collect()
    }
}

/// Evaluate a section series at z (arguments are expected to satisfy
/// v(z - 1) >= the level the series was built for).
pub fn eval_section<C: Coeff>(coeffs: &[C], z: &C) -> C {
    let profile = z.profile();
    let t = z.sub(&C::one(profile));
    let mut acc = C::zero(profile);
    let mut power = C::one(profile);
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            power = power.mul(&t);
        }
        acc = acc.add(&c.mul(&power));
    }
    acc
}

impl Character<FamilyElement> {
    /// Restrict the family character to the single weight at u = u0.
    pub fn specialize(&self, u0: &PadicInt) -> Character<PadicInt> {
        Character {
            profile: self.profile,
            tame: self.tame,
            lambda: self.lambda.specialize(u0),
            classical_k: None,
        }
    }
}

impl Character<PadicInt> {
    /// Re-tag a character as the classical weight k after verifying
    /// lambda = pexp(pk) exactly. The tame part is left untouched (weight
    /// interpolation never reads it).
    pub fn assume_classical(&self, k: i64) -> Result<Character<PadicInt>> {
        let expect = PadicInt::new(self.profile, k)
            .scale_int(self.profile.p() as i64)
            .pexp()?;
        if expect != self.lambda {
            return Err(Error::Domain(format!(
                "lambda does not match the classical weight {k}: {} vs {}",
                self.lambda.value(),
                expect.value()
            )));
        }
        Ok(Character { classical_k: Some(k), ..self.clone() })
    }
}
