//! Nearly overconvergent forms and the weight-family connection.
//!
//! A form of type r is a vector (f_0, ..., f_r) of q-expansions; think of
//! f_0 as the holomorphic part and higher slots as coefficients against the
//! powers of the complementary direction fixed by a choice of splitting of
//! the Hodge filtration. A [`SplittingModel`] records that choice through
//! two q-expansions:
//!
//! * `alpha0` — the position of the split line (0 in diagonal/unit-root
//!   coordinates, E2/12 in Katz coordinates);
//! * `lambda` — the off-diagonal datum of the Gauss-Manin action in those
//!   coordinates: nabla sends slot b + 1 into slot b with factor
//!   (b + 1) * lambda.
//!
//! In coordinates s, the connection on a type-r form of weight chi is
//!
//! ```text
//! (nabla F)_b = theta(f_b) + (wt - 2b) * alpha0 * f_b
//!             + (wt - (b - 1)) * f_{b-1} + (b + 1) * lambda * f_{b+1}
//! ```
//!
//! of type r + 1 and weight chi * cycl^2. The single scalar `wt` is
//! computed once per call: the slot shifts are integers, which keeps the
//! one division-by-p artifact common to every slot, and is what makes the
//! classical/family comparison an exact identity rather than an
//! approximate one.
//!
//! `nabla_classical` is the same operator with wt replaced by the integer
//! weight of a classically-tagged character; it involves no p-adic log at
//! all and is the reference path for eigenvalue computations.
//!
//! Changing the splitting by alpha transforms components by
//! `f'_b = sum_{a >= b} binom(a, b) alpha^(a-b) f_a` and transforms the
//! model by `alpha0' = alpha0 + alpha`,
//! `lambda' = lambda - alpha^2 - (theta(alpha) + 2 alpha0 alpha)`. The sign
//! conventions here are the unique ones under which conjugation by the
//! coordinate change reproduces nabla in the new coordinates identically
//! (see `Sign` and the verification suites).

use crate::error::{Error, Result};
use crate::padic::{Coeff, FamilyElement, PadicInt};
use crate::profile::Profile;
use crate::qseries::{self, QSeries};
use crate::weight::Character;

/// Sign convention for the coordinate-change power: Plus uses (+alpha)^(a-b),
/// Minus uses (-alpha)^(a-b). Plus is the convention compatible with
/// `splitting_update`; Minus exists as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingModel<C: Coeff> {
    name: String,
    alpha0: QSeries<C>,
    lambda: QSeries<C>,
}

impl<C: Coeff> SplittingModel<C> {
    pub fn custom(name: &str, alpha0: QSeries<C>, lambda: QSeries<C>) -> SplittingModel<C> {
        assert_eq!(alpha0.profile(), lambda.profile(), "profile mismatch");
        SplittingModel { name: name.to_string(), alpha0, lambda }
    }

    /// Unit-root / diagonal coordinates: the connection acts with no
    /// alpha0 correction, and calibration finds lambda = 0 here.
    pub fn diagonal(profile: Profile) -> SplittingModel<C> {
        SplittingModel {
            name: "diagonal".into(),
            alpha0: QSeries::zero(profile),
            lambda: QSeries::zero(profile),
        }
    }

    /// Katz coordinates: alpha0 = E2/12. The companion lambda is forced by
    /// updating from diagonal coordinates: (E4 - 2 E2^2)/144, a quasimodular
    /// series (not a multiple of E4; see `serre` for the splitting that
    /// carries the classical scalar-multiple-of-E4 lambda).
    pub fn katz(profile: Profile) -> Result<SplittingModel<C>> {
        let inv12 = C::from_int(profile, 12).inv()?;
        let inv144 = C::from_int(profile, 144).inv()?;
        let e2: QSeries<C> = qseries::e2(profile);
        let e4: QSeries<C> = qseries::e4_std(profile);
        let alpha0 = e2.scale(&inv12);
        let lambda = e4.sub(&e2.mul(&e2).scale_int(2)).scale(&inv144);
        Ok(SplittingModel { name: "katz".into(), alpha0, lambda })
    }

    /// Serre-derivative coordinates: alpha0 = -E2/12, the splitting whose
    /// weight-k partial operator is the classical Serre derivative
    /// theta - (k/12) E2. Its lambda is the scalar multiple -E4/144.
    pub fn serre(profile: Profile) -> Result<SplittingModel<C>> {
        let inv12 = C::from_int(profile, 12).inv()?;
        let inv144 = C::from_int(profile, 144).inv()?;
        let e2: QSeries<C> = qseries::e2(profile);
        let e4: QSeries<C> = qseries::e4_std(profile);
        let alpha0 = e2.scale(&inv12).neg();
        let lambda = e4.scale(&inv144).neg();
        Ok(SplittingModel { name: "serre".into(), alpha0, lambda })
    }

    pub fn by_name(name: &str, profile: Profile) -> Result<SplittingModel<C>> {
        match name {
            "diagonal" => Ok(SplittingModel::diagonal(profile)),
            "katz" => SplittingModel::katz(profile),
            "serre" => SplittingModel::serre(profile),
            other => Err(Error::Domain(format!(
                "unknown splitting '{other}' (expected diagonal, katz, or serre)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha0(&self) -> &QSeries<C> {
        &self.alpha0
    }

    pub fn lambda(&self) -> &QSeries<C> {
        &self.lambda
    }

    pub fn profile(&self) -> Profile {
        self.alpha0.profile()
    }

    pub fn renamed(&self, name: &str) -> SplittingModel<C> {
        SplittingModel { name: name.into(), ..self.clone() }
    }
}

/// Move the splitting by alpha: alpha0 += alpha, and lambda picks up
/// -alpha^2 - (theta(alpha) + 2 alpha0 alpha). The correction term is the
/// weight-2 partial operator applied to alpha, reflecting that alpha
/// transforms as a weight-2 object.
pub fn splitting_update<C: Coeff>(
    s: &SplittingModel<C>,
    alpha: &QSeries<C>,
    new_name: &str,
) -> SplittingModel<C> {
    let alpha0 = s.alpha0.add(alpha);
    let correction = alpha
        .theta()
        .add(&s.alpha0.mul(alpha).scale_int(2));
    let lambda = s.lambda.sub(&alpha.mul(alpha)).sub(&correction);
    SplittingModel { name: new_name.to_string(), alpha0, lambda }
}

// ---------------------------------------------------------------------------
// forms

/// A nearly overconvergent form of type r: components (f_0, ..., f_r) in a
/// named system of splitting coordinates, with its weight character.
#[derive(Debug, Clone, PartialEq)]
pub struct NearlyOcForm<C: Coeff> {
    weight: Character<C>,
    splitting: String,
    components: Vec<QSeries<C>>,
}

impl<C: Coeff> NearlyOcForm<C> {
    pub fn new(
        weight: Character<C>,
        splitting: &str,
        components: Vec<QSeries<C>>,
    ) -> Result<NearlyOcForm<C>> {
        if components.is_empty() {
            return Err(Error::Domain("a form needs at least one component".into()));
        }
        let len = components[0].prec();
        for c in &components {
            if c.profile() != weight.profile() {
                return Err(Error::Domain("component profile mismatch".into()));
            }
            if c.prec() != len {
                return Err(Error::Domain(
                    "components must share one q-expansion length".into(),
                ));
            }
        }
        Ok(NearlyOcForm { weight, splitting: splitting.to_string(), components })
    }

    /// A type-0 form: a single q-expansion.
    pub fn from_series(
        series: QSeries<C>,
        weight: Character<C>,
        splitting: &str,
    ) -> Result<NearlyOcForm<C>> {
        NearlyOcForm::new(weight, splitting, vec![series])
    }

    pub fn r(&self) -> usize {
        self.components.len() - 1
    }

    pub fn weight(&self) -> &Character<C> {
        &self.weight
    }

    pub fn splitting(&self) -> &str {
        &self.splitting
    }

    pub fn components(&self) -> &[QSeries<C>] {
        &self.components
    }

    pub fn component(&self, b: usize) -> &QSeries<C> {
        &self.components[b]
    }

    pub fn profile(&self) -> Profile {
        self.weight.profile()
    }

    pub fn prec(&self) -> usize {
        self.components[0].prec()
    }

    pub fn agrees_mod(&self, rhs: &NearlyOcForm<C>, digits: u32) -> bool {
        self.components.len() == rhs.components.len()
            && self
                .components
                .iter()
                .zip(&rhs.components)
                .all(|(a, b)| a.agrees_mod(b, digits))
    }

    fn check_coordinates(&self, s: &SplittingModel<C>) -> Result<()> {
        if self.splitting != s.name {
            return Err(Error::Coordinates(format!(
                "form lives in '{}' coordinates but the splitting is '{}'",
                self.splitting, s.name
            )));
        }
        Ok(())
    }
}

impl NearlyOcForm<FamilyElement> {
    /// Restrict every coefficient to the single weight u = u0. The weight
    /// character loses its family nature; re-tag with `assume_classical`
    /// to continue on the classical path.
    pub fn specialize(&self, u0: &PadicInt) -> NearlyOcForm<PadicInt> {
        NearlyOcForm {
            weight: self.weight.specialize(u0),
            splitting: self.splitting.clone(),
            components: self.components.iter().map(|c| c.specialize(u0)).collect(),
        }
    }
}

impl NearlyOcForm<PadicInt> {
    /// Verify lambda against the classical weight k and tag the form.
    pub fn assume_classical(&self, k: i64) -> Result<NearlyOcForm<PadicInt>> {
        Ok(NearlyOcForm {
            weight: self.weight.assume_classical(k)?,
            splitting: self.splitting.clone(),
            components: self.components.clone(),
        })
    }
}

// ---------------------------------------------------------------------------
// partial operators and the connection

/// The weight-chi partial operator in coordinates s:
/// theta(f) + wt(chi) * alpha0 * f.
pub fn partial_chi<C: Coeff>(
    f: &QSeries<C>,
    chi: &Character<C>,
    s: &SplittingModel<C>,
) -> Result<QSeries<C>> {
    let wt = chi.wt()?;
    Ok(f.theta().add(&s.alpha0().mul(f).scale(&wt)))
}

/// The integer-weight partial operator: theta(f) + k * alpha0 * f.
/// Negative k gives the operators acting on dual slots.
pub fn partial_pow<C: Coeff>(f: &QSeries<C>, k: i64, s: &SplittingModel<C>) -> QSeries<C> {
    f.theta().add(&s.alpha0().mul(f).scale_int(k))
}

fn nabla_with_weight<C: Coeff>(
    form: &NearlyOcForm<C>,
    s: &SplittingModel<C>,
    wt_slot: impl Fn(i64) -> C,
) -> Result<NearlyOcForm<C>> {
    form.check_coordinates(s)?;
    let r = form.r();
    let mut out = Vec::with_capacity(r + 2);
    for b in 0..=(r + 1) {
        // theta(f_b) + (wt - 2b) alpha0 f_b
        let mut acc = if b <= r {
            let f_b = form.component(b);
            f_b.theta()
                .add(&s.alpha0().mul(f_b).scale(&wt_slot(2 * b as i64)))
        } else {
            // One slot past the top: only the lowering term contributes;
            // start from a zero series of the right length.
            QSeries::zero(form.profile()).truncate(form.prec())
        };
        // (wt - (b - 1)) f_{b-1}
        if b >= 1 {
            acc = acc.add(&form.component(b - 1).scale(&wt_slot(b as i64 - 1)));
        }
        // (b + 1) lambda f_{b+1}
        if b < r {
            acc = acc.add(&s.lambda().mul(form.component(b + 1)).scale_int(b as i64 + 1));
        }
        out.push(acc);
    }
    NearlyOcForm::new(form.weight().twist_cycl(2), &form.splitting, out)
}

/// The Gauss-Manin connection on a type-r form: type goes up by one, weight
/// twists by the square of the cyclotomic character. wt(chi) is computed
/// once and shifted by integers across slots.
pub fn nabla<C: Coeff>(
    form: &NearlyOcForm<C>,
    s: &SplittingModel<C>,
) -> Result<NearlyOcForm<C>> {
    let wt = form.weight().wt()?;
    let profile = form.profile();
    nabla_with_weight(form, s, |shift| {
        wt.sub(&C::from_int(profile, shift))
    })
}

/// The connection along the classical path: identical slot structure with
/// the integer weight k in place of wt(chi). No p-adic logarithm is
/// involved, so results are exact on all stored digits; this is the
/// reference operator for Hecke eigenvalue work.
pub fn nabla_classical<C: Coeff>(
    form: &NearlyOcForm<C>,
    s: &SplittingModel<C>,
) -> Result<NearlyOcForm<C>> {
    let k = form.weight().classical_k().ok_or_else(|| {
        Error::Domain("nabla_classical needs a classically-tagged weight".into())
    })?;
    let profile = form.profile();
    // The tag is metadata; verify it against lambda before trusting it.
    let expect = C::from_int(profile, k)
        .scale_int(profile.p() as i64)
        .pexp()?;
    if &expect != form.weight().lambda() {
        return Err(Error::Domain(format!(
            "classical tag k = {k} contradicts the stored lambda"
        )));
    }
    nabla_with_weight(form, s, |shift| C::from_int(profile, k - shift))
}

/// Iterate nabla_classical j times.
pub fn nabla_classical_iter<C: Coeff>(
    form: &NearlyOcForm<C>,
    s: &SplittingModel<C>,
    j: u32,
) -> Result<NearlyOcForm<C>> {
    let mut f = form.clone();
    for _ in 0..j {
        f = nabla_classical(&f, s)?;
    }
    Ok(f)
}

/// Rewrite a form in the coordinates reached by moving the splitting with
/// alpha: f'_b = sum_{a >= b} binom(a, b) (sign * alpha)^(a-b) f_a.
pub fn change_coordinates<C: Coeff>(
    form: &NearlyOcForm<C>,
    alpha: &QSeries<C>,
    sign: Sign,
    new_splitting: &str,
) -> NearlyOcForm<C> {
    let r = form.r();
    let step = match sign {
        Sign::Plus => alpha.clone(),
        Sign::Minus => alpha.neg(),
    };
    // powers[j] = (sign * alpha)^j at the form's q-precision.
    let mut powers: Vec<QSeries<C>> = Vec::with_capacity(r + 1);
    powers.push(QSeries::one(form.profile()).truncate(form.prec().min(form.profile().q() as usize)));
    for j in 1..=r {
        powers.push(powers[j - 1].mul(&step));
    }
    let mut components = Vec::with_capacity(r + 1);
    for b in 0..=r {
        let mut acc = form.component(b).clone();
        for a in (b + 1)..=r {
            let c = binomial(a, b) as i64;
            acc = acc.add(&powers[a - b].mul(form.component(a)).scale_int(c));
        }
        components.push(acc);
    }
    NearlyOcForm {
        weight: form.weight().clone(),
        splitting: new_splitting.to_string(),
        components,
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut acc: u64 = 1;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// Conjugation test for one splitting move: applying
/// (1 alpha; 0 1) o M_s o (1 -alpha; 0 1) to the column (x, y), where M_s is
/// the connection block in the weight-(1, -1) normalized basis
///
/// ```text
/// M_s = ( partial_1    lambda     )
///       ( 1            partial_-1 )
/// ```
///
/// must reproduce M_{s'} applied to (x, y) directly, where s' claims to be
/// the updated splitting. The basis weights are forced: x sits in weight 1
/// and y in weight -1, so the transvection alpha (a weight-2 series) maps
/// the y-line into the x-line homogeneously — at any other weight the
/// unipotent entry would have to scale with the weight and the displayed
/// identity would fail. Returns whether the identity holds exactly for
/// every pair; feeding a corrupted s' is the intended negative control.
pub fn matrix_identity_check<C: Coeff>(
    s: &SplittingModel<C>,
    s_updated: &SplittingModel<C>,
    alpha: &QSeries<C>,
    pairs: &[(QSeries<C>, QSeries<C>)],
) -> bool {
    let block = |m: &SplittingModel<C>, x: &QSeries<C>, y: &QSeries<C>| {
        (
            partial_pow(x, 1, m).add(&m.lambda().mul(y)),
            x.add(&partial_pow(y, -1, m)),
        )
    };
    pairs.iter().all(|(x, y)| {
        let x1 = x.sub(&alpha.mul(y));
        let (mid_top, mid_bot) = block(s, &x1, y);
        let lhs = (mid_top.add(&alpha.mul(&mid_bot)), mid_bot);
        let rhs = block(s_updated, x, y);
        lhs.0 == rhs.0 && lhs.1 == rhs.1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{classical_char, universal_char};

    fn prof() -> Profile {
        Profile::default_profile()
    }

    #[test]
    fn named_splittings_are_update_consistent() {
        let pr = prof();
        let diag: SplittingModel<PadicInt> = SplittingModel::diagonal(pr);
        let katz = SplittingModel::katz(pr).unwrap();
        let serre = SplittingModel::serre(pr).unwrap();
        let inv12 = PadicInt::new(pr, 12).inv().unwrap();
        let alpha = qseries::e2::<PadicInt>(pr).scale(&inv12);

        let up = splitting_update(&diag, &alpha, "katz");
        assert_eq!(up.alpha0(), katz.alpha0());
        assert_eq!(up.lambda(), katz.lambda());

        let down = splitting_update(&katz, &alpha.neg(), "diagonal");
        assert_eq!(down.alpha0(), diag.alpha0());
        assert_eq!(down.lambda(), diag.lambda());

        let to_serre = splitting_update(&diag, &alpha.neg(), "serre");
        assert_eq!(to_serre.alpha0(), serre.alpha0());
        assert_eq!(to_serre.lambda(), serre.lambda());
    }

    #[test]
    fn nabla_delta_in_diagonal_coordinates() {
        // nabla of Delta (weight 12, type 0) in diagonal coordinates is
        // (theta Delta, 12 Delta).
        let pr = prof();
        let diag: SplittingModel<PadicInt> = SplittingModel::diagonal(pr);
        let delta: QSeries<PadicInt> = qseries::delta(pr);
        let f = NearlyOcForm::from_series(
            delta.clone(),
            classical_char(pr, 12, 0).unwrap(),
            "diagonal",
        )
        .unwrap();
        let g = nabla_classical(&f, &diag).unwrap();
        assert_eq!(g.r(), 1);
        assert_eq!(g.component(0), &delta.theta());
        assert_eq!(g.component(1), &delta.scale_int(12));
        assert_eq!(g.weight().classical_k(), Some(14));
    }

    #[test]
    fn theta_delta_is_e2_delta() {
        // theta(Delta) = E2 * Delta: Delta's weight-12 Serre derivative vanishes.
        let pr = prof();
        let delta: QSeries<PadicInt> = qseries::delta(pr);
        let e2: QSeries<PadicInt> = qseries::e2(pr);
        assert_eq!(delta.theta(), e2.mul(&delta));
        // Equivalent statement: Delta's weight-12 Serre derivative
        // theta - 12 * (E2/12) vanishes.
        let serre: SplittingModel<PadicInt> = SplittingModel::serre(pr).unwrap();
        let killed = partial_pow(&delta, 12, &serre);
        assert!(killed.is_zero());
    }

    #[test]
    fn coordinate_round_trip_is_identity() {
        let pr = prof();
        let katz: SplittingModel<PadicInt> = SplittingModel::katz(pr).unwrap();
        let delta: QSeries<PadicInt> = qseries::delta(pr);
        let e4: QSeries<PadicInt> = qseries::e4_std(pr);
        let chi = classical_char(pr, 16, 0).unwrap();
        let f = NearlyOcForm::new(
            chi,
            "katz",
            vec![delta.mul(&e4), delta.clone(), e4.clone()],
        )
        .unwrap();
        let alpha = katz.alpha0().clone();
        let there = change_coordinates(&f, &alpha, Sign::Plus, "diagonal");
        let back = change_coordinates(&there, &alpha.neg(), Sign::Plus, "katz");
        assert_eq!(back, f);
    }

    #[test]
    fn coordinates_are_enforced() {
        let pr = prof();
        let katz: SplittingModel<PadicInt> = SplittingModel::katz(pr).unwrap();
        let f = NearlyOcForm::from_series(
            qseries::delta(pr),
            classical_char(pr, 12, 0).unwrap(),
            "diagonal",
        )
        .unwrap();
        match nabla_classical(&f, &katz) {
            Err(Error::Coordinates(_)) => {}
            other => panic!("expected coordinate error, got {other:?}"),
        }
    }

    #[test]
    fn nabla_matches_classical_route_for_integer_weights() {
        // Same operator through wt(chi) and through the integer k agree
        // everywhere except possibly the top p-digit (the division artifact).
        let pr = prof();
        let katz: SplittingModel<PadicInt> = SplittingModel::katz(pr).unwrap();
        let f = NearlyOcForm::from_series(
            qseries::delta(pr),
            classical_char(pr, 12, 0).unwrap(),
            "katz",
        )
        .unwrap();
        let a = nabla(&f, &katz).unwrap();
        let b = nabla_classical(&f, &katz).unwrap();
        assert!(a.agrees_mod(&b, pr.n() - 1));
    }

    #[test]
    fn family_nabla_runs() {
        let pr = prof();
        let katz: SplittingModel<FamilyElement> = SplittingModel::katz(pr).unwrap();
        let f = NearlyOcForm::from_series(
            qseries::delta::<FamilyElement>(pr),
            universal_char(pr).unwrap(),
            "katz",
        )
        .unwrap();
        let g = nabla(&f, &katz).unwrap();
        assert_eq!(g.r(), 1);
        assert_eq!(g.weight().classical_k(), None);
    }
}
