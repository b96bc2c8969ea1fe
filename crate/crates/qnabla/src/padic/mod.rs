//! Fixed-precision p-adic scalars and one-variable families.
//!
//! [`PadicInt`] is a residue in Z/p^n. [`FamilyElement`] is a truncated
//! power series in (Z/p^n)[u]/(u^m) — the coordinate ring of a closed disk
//! in weight space, with the convention that the universal character's
//! lambda is 1 + pu. Both implement [`Coeff`], the coefficient interface
//! the rest of the crate is generic over.
//!
//! Design rules:
//!
//! * arithmetic is exact mod p^n; nothing rounds;
//! * dividing by p is a partial operation ([`Coeff::div_exact_p`]) that
//!   fails loudly when a coefficient is not divisible;
//! * `plog`/`pexp` are total on their classical domains (v(x-1) >= 1,
//!   v(x) >= 1) and exact mod p^n — see the `series` module for how;
//! * mixing profiles is a programming error and panics.

pub(crate) mod series;
pub(crate) mod zmod;

use crate::error::{Error, Result};
use crate::profile::Profile;

/// Coefficient ring interface: implemented by scalars and families.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn profile(&self) -> Profile;
    fn zero(profile: Profile) -> Self;
    fn one(profile: Profile) -> Self;
    fn from_i128(profile: Profile, v: i128) -> Self;
    /// Rebuild from stored digit vectors (schema layer). Length must match the ring.
    fn from_residues(profile: Profile, residues: &[u64]) -> Result<Self>;
    /// Canonical least-residue digit vector (length 1 for scalars, m for families).
    fn residues(&self) -> Vec<u64>;
    /// Tag used in serialized payloads.
    fn ring_tag() -> &'static str;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_zero(&self) -> bool;
    /// Unit in the coefficient ring (constant coefficient prime to p).
    fn is_unit(&self) -> bool;
    /// min over coefficients of v_p; full precision n for zero.
    fn val(&self) -> u32;
    fn inv(&self) -> Result<Self>;
    /// Exact division by p; errors with the digit deficit if any coefficient resists.
    fn div_exact_p(&self) -> Result<Self>;
    fn plog(&self) -> Result<Self>;
    fn pexp(&self) -> Result<Self>;
    /// Agreement of the low `digits` p-adic digits, coefficientwise.
    fn congruent_mod(&self, rhs: &Self, digits: u32) -> bool;

    fn from_int(profile: Profile, v: i64) -> Self {
        Self::from_i128(profile, v as i128)
    }
    fn scale_int(&self, v: i64) -> Self {
        self.mul(&Self::from_i128(self.profile(), v as i128))
    }
}

// ---------------------------------------------------------------------------
// scalars

/// A residue in Z/p^n, stored as its canonical least representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    value: u64,
    profile: Profile,
}

impl PadicInt {
    pub fn new(profile: Profile, value: i64) -> PadicInt {
        PadicInt {
            value: zmod::reduce_i128(value as i128, profile.modulus()),
            profile,
        }
    }

    pub(crate) fn from_raw(profile: Profile, value: u64) -> PadicInt {
        PadicInt { value: value % profile.modulus(), profile }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn pow(&self, mut e: u64) -> PadicInt {
        let m = self.profile.modulus();
        let mut base = self.value;
        let mut acc = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = zmod::mulm(acc, base, m);
            }
            base = zmod::mulm(base, base, m);
            e >>= 1;
        }
        PadicInt { value: acc, profile: self.profile }
    }
}

impl Coeff for PadicInt {
    fn profile(&self) -> Profile {
        self.profile
    }

    fn zero(profile: Profile) -> Self {
        PadicInt { value: 0, profile }
    }

    fn one(profile: Profile) -> Self {
        PadicInt { value: 1 % profile.modulus(), profile }
    }

    fn from_i128(profile: Profile, v: i128) -> Self {
        PadicInt { value: zmod::reduce_i128(v, profile.modulus()), profile }
    }

    fn from_residues(profile: Profile, residues: &[u64]) -> Result<Self> {
        if residues.len() != 1 {
            return Err(Error::Schema(format!(
                "scalar expects 1 residue, got {}",
                residues.len()
            )));
        }
        if residues[0] >= profile.modulus() {
            return Err(Error::Schema(format!(
                "residue {} out of range for modulus {}",
                residues[0],
                profile.modulus()
            )));
        }
        Ok(PadicInt { value: residues[0], profile })
    }

    fn residues(&self) -> Vec<u64> {
        vec![self.value]
    }

    fn ring_tag() -> &'static str {
        "zp"
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        PadicInt {
            value: zmod::addm(self.value, rhs.value, self.profile.modulus()),
            profile: self.profile,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        PadicInt {
            value: zmod::subm(self.value, rhs.value, self.profile.modulus()),
            profile: self.profile,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        PadicInt {
            value: zmod::mulm(self.value, rhs.value, self.profile.modulus()),
            profile: self.profile,
        }
    }

    fn neg(&self) -> Self {
        PadicInt {
            value: zmod::subm(0, self.value, self.profile.modulus()),
            profile: self.profile,
        }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.profile.p())
    }

    fn val(&self) -> u32 {
        zmod::val_residue(self.value, self.profile.p(), self.profile.n())
    }

    fn inv(&self) -> Result<Self> {
        zmod::invm(self.value, self.profile.modulus())
            .map(|value| PadicInt { value, profile: self.profile })
            .ok_or_else(|| Error::Domain(format!("{} is not a unit mod p^n", self.value)))
    }

    fn div_exact_p(&self) -> Result<Self> {
        if !self.value.is_multiple_of(self.profile.p()) {
            return Err(Error::Precision {
                needed: 1,
                available: 0,
                context: format!("exact division of {} by p = {}", self.value, self.profile.p()),
            });
        }
        // Quotient is well-defined only mod p^(n-1); the top digit of the
        // stored residue is the deterministic artifact of dividing the
        // canonical representative.
        Ok(PadicInt { value: self.value / self.profile.p(), profile: self.profile })
    }

    fn plog(&self) -> Result<Self> {
        let out = series::rlog(&[self.value], &self.profile)?;
        Ok(PadicInt { value: out[0], profile: self.profile })
    }

    fn pexp(&self) -> Result<Self> {
        let out = series::rexp(&[self.value], &self.profile)?;
        Ok(PadicInt { value: out[0], profile: self.profile })
    }

    fn congruent_mod(&self, rhs: &Self, digits: u32) -> bool {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        assert!(digits <= self.profile.n(), "cannot compare beyond stored precision");
        let q = self.profile.pow_p(digits);
        self.value % q == rhs.value % q
    }
}

impl std::ops::Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: PadicInt) -> PadicInt {
        Coeff::add(&self, &rhs)
    }
}

impl std::ops::Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: PadicInt) -> PadicInt {
        Coeff::sub(&self, &rhs)
    }
}

impl std::ops::Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: PadicInt) -> PadicInt {
        Coeff::mul(&self, &rhs)
    }
}

impl std::ops::Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        Coeff::neg(&self)
    }
}

// ---------------------------------------------------------------------------
// families

/// An element of (Z/p^n)[u]/(u^m): coefficient i is the u^i digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyElement {
    coeffs: Vec<u64>,
    profile: Profile,
}

impl FamilyElement {
    pub fn from_coeffs(profile: Profile, coeffs: &[i64]) -> FamilyElement {
        assert!(
            coeffs.len() <= profile.m() as usize,
            "family element longer than u-precision"
        );
        let mut c: Vec<u64> = coeffs
            .iter()
            .map(|&v| zmod::reduce_i128(v as i128, profile.modulus()))
            .collect();
        c.resize(profile.m() as usize, 0);
        FamilyElement { coeffs: c, profile }
    }

    /// The coordinate u itself.
    pub fn u(profile: Profile) -> FamilyElement {
        FamilyElement::from_coeffs(profile, &[0, 1])
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        PadicInt { value: self.coeffs[i], profile: self.profile }
    }

    /// Evaluate at u = u0 (Horner).
    pub fn specialize(&self, u0: &PadicInt) -> PadicInt {
        assert_eq!(self.profile, u0.profile, "profile mismatch");
        let m = self.profile.modulus();
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = zmod::addm(zmod::mulm(acc, u0.value, m), c, m);
        }
        PadicInt { value: acc, profile: self.profile }
    }
}

impl Coeff for FamilyElement {
    fn profile(&self) -> Profile {
        self.profile
    }

    fn zero(profile: Profile) -> Self {
        FamilyElement { coeffs: vec![0; profile.m() as usize], profile }
    }

    fn one(profile: Profile) -> Self {
        let mut coeffs = vec![0; profile.m() as usize];
        coeffs[0] = 1 % profile.modulus();
        FamilyElement { coeffs, profile }
    }

    fn from_i128(profile: Profile, v: i128) -> Self {
        let mut coeffs = vec![0; profile.m() as usize];
        coeffs[0] = zmod::reduce_i128(v, profile.modulus());
        FamilyElement { coeffs, profile }
    }

    fn from_residues(profile: Profile, residues: &[u64]) -> Result<Self> {
        if residues.len() != profile.m() as usize {
            return Err(Error::Schema(format!(
                "family expects {} residues, got {}",
                profile.m(),
                residues.len()
            )));
        }
        if let Some(&bad) = residues.iter().find(|&&r| r >= profile.modulus()) {
            return Err(Error::Schema(format!(
                "residue {bad} out of range for modulus {}",
                profile.modulus()
            )));
        }
        Ok(FamilyElement { coeffs: residues.to_vec(), profile })
    }

    fn residues(&self) -> Vec<u64> {
        self.coeffs.clone()
    }

    fn ring_tag() -> &'static str {
        "family"
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        let m = self.profile.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| zmod::addm(a, b, m))
            .collect();
        FamilyElement { coeffs, profile: self.profile }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        let m = self.profile.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| zmod::subm(a, b, m))
            .collect();
        FamilyElement { coeffs, profile: self.profile }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        FamilyElement {
            coeffs: series::conv(&self.coeffs, &rhs.coeffs, self.profile.modulus()),
            profile: self.profile,
        }
    }

    fn neg(&self) -> Self {
        let m = self.profile.modulus();
        FamilyElement {
            coeffs: self.coeffs.iter().map(|&c| zmod::subm(0, c, m)).collect(),
            profile: self.profile,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn is_unit(&self) -> bool {
        !self.coeffs[0].is_multiple_of(self.profile.p())
    }

    fn val(&self) -> u32 {
        let p = self.profile.p();
        let n = self.profile.n();
        self.coeffs
            .iter()
            .map(|&c| zmod::val_residue(c, p, n))
            .min()
            .unwrap_or(n)
    }

    fn inv(&self) -> Result<Self> {
        let m = self.profile.modulus();
        let c0 = zmod::invm(self.coeffs[0], m).ok_or_else(|| {
            Error::Domain("family inverse needs a unit constant coefficient".into())
        })?;
        // Back-substitution: b_k = -b_0 * sum_{i=1..k} a_i b_{k-i}.
        let mut out = vec![0u64; self.coeffs.len()];
        out[0] = c0;
        for k in 1..self.coeffs.len() {
            let mut s = 0u64;
            for i in 1..=k {
                s = zmod::addm(s, zmod::mulm(self.coeffs[i], out[k - i], m), m);
            }
            out[k] = zmod::subm(0, zmod::mulm(c0, s, m), m);
        }
        Ok(FamilyElement { coeffs: out, profile: self.profile })
    }

    fn div_exact_p(&self) -> Result<Self> {
        let p = self.profile.p();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c % p != 0 {
                return Err(Error::Precision {
                    needed: 1,
                    available: 0,
                    context: format!("exact division by p at family coefficient u^{i}"),
                });
            }
        }
        Ok(FamilyElement {
            coeffs: self.coeffs.iter().map(|&c| c / p).collect(),
            profile: self.profile,
        })
    }

    fn plog(&self) -> Result<Self> {
        Ok(FamilyElement {
            coeffs: series::rlog(&self.coeffs, &self.profile)?,
            profile: self.profile,
        })
    }

    fn pexp(&self) -> Result<Self> {
        Ok(FamilyElement {
            coeffs: series::rexp(&self.coeffs, &self.profile)?,
            profile: self.profile,
        })
    }

    fn congruent_mod(&self, rhs: &Self, digits: u32) -> bool {
        assert_eq!(self.profile, rhs.profile, "profile mismatch");
        assert!(digits <= self.profile.n(), "cannot compare beyond stored precision");
        let q = self.profile.pow_p(digits);
        self.coeffs
            .iter()
            .zip(&rhs.coeffs)
            .all(|(&a, &b)| a % q == b % q)
    }
}

impl std::ops::Add for FamilyElement {
    type Output = FamilyElement;
    fn add(self, rhs: FamilyElement) -> FamilyElement {
        Coeff::add(&self, &rhs)
    }
}

impl std::ops::Sub for FamilyElement {
    type Output = FamilyElement;
    fn sub(self, rhs: FamilyElement) -> FamilyElement {
        Coeff::sub(&self, &rhs)
    }
}

impl std::ops::Mul for FamilyElement {
    type Output = FamilyElement;
    fn mul(self, rhs: FamilyElement) -> FamilyElement {
        Coeff::mul(&self, &rhs)
    }
}

impl std::ops::Neg for FamilyElement {
    type Output = FamilyElement;
    fn neg(self) -> FamilyElement {
        Coeff::neg(&self)
    }
}

// ---------------------------------------------------------------------------
// named operations

/// Teichmueller lift: the unique (p-1)-st root of unity congruent to a mod p.
/// Computed by iterating x -> x^p, which is a contraction on units mod p^n
/// and stabilizes within n iterations.
pub fn teichmueller(profile: Profile, a: i64) -> Result<PadicInt> {
    let x0 = PadicInt::new(profile, a);
    if !x0.is_unit() {
        return Err(Error::Domain(format!(
            "teichmueller lift needs gcd(a, p) = 1, got a = {a}"
        )));
    }
    let mut x = x0;
    for _ in 0..=profile.n() {
        let next = x.pow(profile.p());
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    unreachable!("x -> x^p contracts units mod p^n within n iterations");
}

/// Generalized binomial coefficient binom(s, i) = s(s-1)...(s-i+1)/i! for a
/// p-adic (or family) weight s. The division by p^(v_p(i!)) must be exact on
/// the numerator; when it is not (generic family s with i >= p), the error
/// reports the missing digits rather than inventing them.
pub fn binom_series<C: Coeff>(s: &C, i: u32) -> Result<C> {
    let profile = s.profile();
    if i == 0 {
        return Ok(C::one(profile));
    }
    let mut num = C::one(profile);
    for j in 0..i {
        num = num.mul(&s.sub(&C::from_int(profile, j as i64)));
    }
    // i! = unit * p^v; invert the unit, divide exactly by p^v.
    let p = profile.p();
    let modulus = profile.modulus();
    let mut unit: u64 = 1;
    let mut v: u32 = 0;
    for j in 1..=(i as u64) {
        let vj = zmod::val_of(j, p);
        v += vj;
        unit = zmod::mulm(unit, j / zmod::pow_checked(p, vj).unwrap(), modulus);
    }
    let unit_inv = C::from_i128(profile, zmod::invm(unit, modulus).unwrap() as i128);
    let mut out = num.mul(&unit_inv);
    for step in 0..v {
        out = out.div_exact_p().map_err(|e| match e {
            Error::Precision { context, .. } => Error::Precision {
                needed: v,
                available: step,
                context: format!("binom_series(s, {i}): {context}"),
            },
            other => other,
        })?;
    }
    Ok(out)
}

/// The weight-space coordinate of the classical point k: u_k = (pexp(pk) - 1)/p,
/// so that the universal lambda = 1 + pu specializes to pexp(pk) at u = u_k.
///
/// The division by p costs a digit, so the exponential runs one digit above
/// the working precision and the quotient is correct on all n digits.
pub fn u_for_weight(profile: Profile, k: i64) -> Result<PadicInt> {
    let wide = Profile::new(profile.p(), profile.n() + 1, profile.m(), profile.q())?;
    let pk = PadicInt::new(wide, k).scale_int(wide.p() as i64);
    let u_wide = pk.pexp()?.sub(&PadicInt::one(wide)).div_exact_p()?;
    Ok(PadicInt::from_raw(profile, u_wide.value() % profile.modulus()))
}

/// Evaluate a family at u = u0 (also available as a method; free-function
/// form for pipelines over whole series).
pub fn specialize_family(x: &FamilyElement, u0: &PadicInt) -> PadicInt {
    x.specialize(u0)
}
