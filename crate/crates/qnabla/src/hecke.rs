//! Hecke operators on nearly overconvergent forms, eigenvalue extraction,
//! and the calibration search that pins down the diagonal lambda.
//!
//! All operators here act in diagonal (unit-root) coordinates only: the
//! component-by-component formulas below presuppose alpha0 = 0, and feeding
//! a form in any other coordinate system is a coordinate error (transform
//! it first). Operators shrink q-expansion precision honestly: reading
//! coefficient n of the output needs coefficient n*ell of the input.
//!
//! Componentwise, slot a of a type-r form transforms like a form of weight
//! k - 2a scaled by ell^a, which gives
//!
//! ```text
//! (U_p F)_a(n)   = p^a   * f_a(n p)
//! (V_p F)  (n)   = f(n / p)                          (type 0 only)
//! (T_ell F)_a(n) = ell^a * f_a(n ell)
//!                + chi(ell) * ell^(-(1+a)) * f_a(n / ell)
//! ```
//!
//! with f(x) = 0 when x is not an integer, and chi the weight character.
//! For a classical weight-k form of type 0 this is the textbook
//! a(n ell) + ell^(k-1) a(n / ell).

use crate::connection::{change_coordinates, nabla_classical_iter, splitting_update, NearlyOcForm, Sign, SplittingModel};
use crate::error::{Error, Result};
use crate::padic::{zmod, Coeff, PadicInt};
use crate::profile::Profile;
use crate::qseries::{self, QSeries};
use crate::weight::classical_char;

fn require_diagonal<C: Coeff>(form: &NearlyOcForm<C>, s: &SplittingModel<C>) -> Result<()> {
    if form.splitting() != s.name() {
        return Err(Error::Coordinates(format!(
            "form lives in '{}' coordinates but the splitting is '{}'",
            form.splitting(),
            s.name()
        )));
    }
    if !s.alpha0().is_zero() {
        return Err(Error::Coordinates(
            "Hecke operators are defined in diagonal coordinates (alpha0 = 0); \
             change coordinates first"
                .into(),
        ));
    }
    Ok(())
}

/// Scalar ell^e in the coefficient ring.
fn pow_scalar<C: Coeff>(profile: Profile, base: u64, e: u32) -> C {
    C::from_i128(
        profile,
        zmod::powm(base % profile.modulus(), e as u64, profile.modulus()) as i128,
    )
}

pub fn u_p<C: Coeff>(form: &NearlyOcForm<C>, s: &SplittingModel<C>) -> Result<NearlyOcForm<C>> {
    require_diagonal(form, s)?;
    let profile = form.profile();
    let p = profile.p() as usize;
    let len = form.prec().div_ceil(p);
    let mut components = Vec::with_capacity(form.r() + 1);
    for (a, f) in form.components().iter().enumerate() {
        let scale: C = pow_scalar(profile, profile.p(), a as u32);
        let coeffs = (0..len).map(|n| f.coeff(n * p).mul(&scale)).collect();
        components.push(QSeries::from_vec(profile, coeffs)?);
    }
    NearlyOcForm::new(form.weight().clone(), form.splitting(), components)
}

/// The p-Frobenius companion V_p with U_p V_p = id; only type 0 transforms
/// this simply.
pub fn v_p<C: Coeff>(form: &NearlyOcForm<C>, s: &SplittingModel<C>) -> Result<NearlyOcForm<C>> {
    require_diagonal(form, s)?;
    if form.r() != 0 {
        return Err(Error::Unsupported(
            "v_p is only defined on type-0 forms in this representation".into(),
        ));
    }
    let profile = form.profile();
    let p = profile.p() as usize;
    let f = form.component(0);
    let len = (form.prec() * p).min(profile.q() as usize);
    let coeffs = (0..len)
        .map(|n| {
            if n % p == 0 {
                f.coeff(n / p).clone()
            } else {
                C::zero(profile)
            }
        })
        .collect();
    NearlyOcForm::new(
        form.weight().clone(),
        form.splitting(),
        vec![QSeries::from_vec(profile, coeffs)?],
    )
}

pub fn t_ell<C: Coeff>(
    form: &NearlyOcForm<C>,
    s: &SplittingModel<C>,
    ell: u64,
) -> Result<NearlyOcForm<C>> {
    require_diagonal(form, s)?;
    let profile = form.profile();
    if ell == profile.p() {
        return Err(Error::Domain(
            "ell = p is the U_p / V_p territory, not T_ell".into(),
        ));
    }
    if ell < 2 || !is_prime(ell) {
        return Err(Error::Domain(format!("T_ell needs a prime ell, got {ell}")));
    }
    let chi_ell = form.weight().eval(ell as i64)?;
    let ell_inv = C::from_int(profile, ell as i64).inv()?;
    let lenl = ell as usize;
    let len = form.prec().div_ceil(lenl);
    let mut components = Vec::with_capacity(form.r() + 1);
    for (a, f) in form.components().iter().enumerate() {
        let raise: C = pow_scalar(profile, ell, a as u32);
        // chi(ell) * ell^-(1+a)
        let mut lower = chi_ell.mul(&ell_inv);
        for _ in 0..a {
            lower = lower.mul(&ell_inv);
        }
        let coeffs = (0..len)
            .map(|n| {
                let mut c = f.coeff(n * lenl).mul(&raise);
                if n % lenl == 0 {
                    c = c.add(&f.coeff(n / lenl).mul(&lower));
                }
                c
            })
            .collect();
        components.push(QSeries::from_vec(profile, coeffs)?);
    }
    NearlyOcForm::new(form.weight().clone(), form.splitting(), components)
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// eigenvalues

#[derive(Debug, Clone, PartialEq)]
pub enum EigenOutcome<C: Coeff> {
    Eigen(C),
    /// First place where transformed != mu * original, in scan order
    /// (component-major, then q-index).
    NotEigen { component: usize, index: usize },
}

/// Extract the scalar mu with transformed = mu * original, deciding it from
/// the first unit coefficient of the original and then verifying every
/// shared coefficient exactly.
pub fn eigenvalue<C: Coeff>(
    original: &NearlyOcForm<C>,
    transformed: &NearlyOcForm<C>,
) -> Result<EigenOutcome<C>> {
    if original.components().len() != transformed.components().len() {
        return Err(Error::Domain(
            "eigenvalue comparison needs forms of the same type".into(),
        ));
    }
    let shared = original.prec().min(transformed.prec());
    let mut mu: Option<C> = None;
    'scan: for (ci, f) in original.components().iter().enumerate() {
        for n in 0..shared {
            if f.coeff(n).is_unit() {
                let g = &transformed.components()[ci];
                mu = Some(g.coeff(n).mul(&f.coeff(n).inv()?));
                break 'scan;
            }
        }
    }
    let mu = mu.ok_or_else(|| {
        Error::Domain("no unit coefficient to normalize an eigenvalue against".into())
    })?;
    for (ci, (f, g)) in original
        .components()
        .iter()
        .zip(transformed.components())
        .enumerate()
    {
        for n in 0..shared {
            if g.coeff(n) != &mu.mul(f.coeff(n)) {
                return Ok(EigenOutcome::NotEigen { component: ci, index: n });
            }
        }
    }
    Ok(EigenOutcome::Eigen(mu))
}

// ---------------------------------------------------------------------------
// lambda calibration

/// Everything the calibration search pins down. `lambda_diagonal` is the
/// off-diagonal datum in unit-root coordinates; the other two are its
/// transports to the splittings at alpha0 = +E2/12 and -E2/12. The minus
/// side is where the classical scalar-multiple-of-E4 shape appears.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub lambda_diagonal: QSeries<PadicInt>,
    pub lambda_plus: QSeries<PadicInt>,
    pub lambda_minus: QSeries<PadicInt>,
    pub winner: (i64, i64),
    pub candidates_tested: usize,
}

/// The decision procedure behind the calibration: with candidate lambda in
/// diagonal coordinates, move to the +E2/12 splitting, apply the connection
/// twice to Delta (weight 12, type 0), come back to diagonal coordinates,
/// and test T_2-eigenness. The true lambda must reproduce the classical
/// eigenvalue of theta^2(Delta), namely -96 = 4 * (-24).
pub fn diagonal_lambda_is_consistent(
    profile: Profile,
    lambda: &QSeries<PadicInt>,
) -> Result<bool> {
    let s_d = SplittingModel::custom("diagonal", QSeries::zero(profile), lambda.clone());
    let inv12 = PadicInt::new(profile, 12).inv()?;
    let alpha = qseries::e2::<PadicInt>(profile).scale(&inv12);
    let s_k = splitting_update(&s_d, &alpha, "katz");
    let f = NearlyOcForm::from_series(
        qseries::delta::<PadicInt>(profile),
        classical_char(profile, 12, 0)?,
        "katz",
    )?;
    let g = nabla_classical_iter(&f, &s_k, 2)?;
    let h = change_coordinates(&g, &alpha.neg(), Sign::Plus, "diagonal");
    let t = t_ell(&h, &s_d, 2)?;
    Ok(eigenvalue(&h, &t)? == EigenOutcome::Eigen(PadicInt::new(profile, -96)))
}

/// Search lambda = (c1 * E4 + c2 * E2^2)/144 over |c1|, |c2| <= 6 for the
/// unique candidate consistent with classical Hecke theory. Errors if the
/// survivor is not unique.
pub fn calibrate_lambda(profile: Profile) -> Result<Calibration> {
    let inv144 = PadicInt::new(profile, 144).inv()?;
    let e4: QSeries<PadicInt> = qseries::e4_std(profile);
    let e2: QSeries<PadicInt> = qseries::e2(profile);
    let e2sq = e2.mul(&e2);
    let mut winners: Vec<((i64, i64), QSeries<PadicInt>)> = Vec::new();
    let mut tested = 0usize;
    for c1 in -6..=6i64 {
        for c2 in -6..=6i64 {
            let cand = e4
                .scale_int(c1)
                .add(&e2sq.scale_int(c2))
                .scale(&inv144);
            tested += 1;
            if diagonal_lambda_is_consistent(profile, &cand)? {
                winners.push(((c1, c2), cand));
            }
        }
    }
    match winners.len() {
        1 => {
            let ((c1, c2), lambda_diagonal) = winners.pop().unwrap();
            let s_d = SplittingModel::custom(
                "diagonal",
                QSeries::zero(profile),
                lambda_diagonal.clone(),
            );
            let inv12 = PadicInt::new(profile, 12).inv()?;
            let alpha = qseries::e2::<PadicInt>(profile).scale(&inv12);
            let lambda_plus = splitting_update(&s_d, &alpha, "katz").lambda().clone();
            let lambda_minus = splitting_update(&s_d, &alpha.neg(), "serre")
                .lambda()
                .clone();
            Ok(Calibration {
                lambda_diagonal,
                lambda_plus,
                lambda_minus,
                winner: (c1, c2),
                candidates_tested: tested,
            })
        }
        0 => Err(Error::Calibration(format!(
            "no candidate in the search box passes the eigenvalue test ({tested} tested)"
        ))),
        n => Err(Error::Calibration(format!(
            "{n} candidates pass the eigenvalue test; the pinning data is insufficient"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FamilyElement;
    use crate::qseries::{delta, e4_std};

    fn prof() -> Profile {
        Profile::default_profile()
    }

    fn diag() -> SplittingModel<PadicInt> {
        SplittingModel::diagonal(prof())
    }

    fn as_form(series: QSeries<PadicInt>, k: i64) -> NearlyOcForm<PadicInt> {
        NearlyOcForm::from_series(series, classical_char(prof(), k, 0).unwrap(), "diagonal")
            .unwrap()
    }

    #[test]
    fn classical_eigenforms() {
        let pr = prof();
        let s = diag();
        let e4 = as_form(e4_std::<PadicInt>(pr), 4);
        let te4 = t_ell(&e4, &s, 2).unwrap();
        assert_eq!(
            eigenvalue(&e4, &te4).unwrap(),
            EigenOutcome::Eigen(PadicInt::new(pr, 9))
        );
        let t3e4 = t_ell(&e4, &s, 3).unwrap();
        assert_eq!(
            eigenvalue(&e4, &t3e4).unwrap(),
            EigenOutcome::Eigen(PadicInt::new(pr, 28))
        );
        let d = as_form(delta::<PadicInt>(pr), 12);
        let td = t_ell(&d, &s, 2).unwrap();
        assert_eq!(
            eigenvalue(&d, &td).unwrap(),
            EigenOutcome::Eigen(PadicInt::new(pr, -24))
        );
    }

    #[test]
    fn hecke_shrinks_precision() {
        let pr = prof();
        let s = diag();
        let d = as_form(delta::<PadicInt>(pr), 12);
        assert_eq!(t_ell(&d, &s, 2).unwrap().prec(), 32);
        assert_eq!(t_ell(&d, &s, 3).unwrap().prec(), 22);
        assert_eq!(u_p(&d, &s).unwrap().prec(), 13);
    }

    #[test]
    fn up_vp_round_trip() {
        let pr = prof();
        let s = diag();
        let d = as_form(delta::<PadicInt>(pr), 12);
        let v = v_p(&d, &s).unwrap();
        assert_eq!(v.prec(), 64);
        let uv = u_p(&v, &s).unwrap();
        assert_eq!(uv.component(0), &d.component(0).truncate(13));
    }

    #[test]
    fn vp_needs_type_zero() {
        let pr = prof();
        let s = diag();
        let d = as_form(delta::<PadicInt>(pr), 12);
        let nabla_d = crate::connection::nabla_classical(&d, &s).unwrap();
        match v_p(&nabla_d, &s) {
            Err(Error::Unsupported(_)) => {}
            other => panic!("expected unsupported, got {other:?}"),
        }
    }

    #[test]
    fn ell_validation() {
        let pr = prof();
        let s = diag();
        let d = as_form(delta::<PadicInt>(pr), 12);
        assert!(matches!(t_ell(&d, &s, 5), Err(Error::Domain(_))));
        assert!(matches!(t_ell(&d, &s, 6), Err(Error::Domain(_))));
        assert!(matches!(t_ell(&d, &s, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn hecke_requires_diagonal_coordinates() {
        let pr = prof();
        let katz: SplittingModel<PadicInt> = SplittingModel::katz(pr).unwrap();
        let f = NearlyOcForm::from_series(
            delta::<PadicInt>(pr),
            classical_char(pr, 12, 0).unwrap(),
            "katz",
        )
        .unwrap();
        match t_ell(&f, &katz, 2) {
            Err(Error::Coordinates(_)) => {}
            other => panic!("expected coordinate error, got {other:?}"),
        }
    }

    #[test]
    fn not_eigen_reports_first_discrepancy() {
        let pr = prof();
        let s = diag();
        let e4 = as_form(e4_std::<PadicInt>(pr), 4);
        let d = as_form(delta::<PadicInt>(pr), 12);
        // E4 + Delta is not an eigenform of T_2.
        let sum = NearlyOcForm::from_series(
            e4.component(0).add(d.component(0)),
            classical_char(pr, 4, 0).unwrap(),
            "diagonal",
        )
        .unwrap();
        let t = t_ell(&sum, &s, 2).unwrap();
        match eigenvalue(&sum, &t).unwrap() {
            EigenOutcome::NotEigen { component: 0, index } => {
                assert!(index > 0, "constant term still matches");
            }
            other => panic!("expected NotEigen, got {other:?}"),
        }
    }

    #[test]
    fn family_t_ell_specializes_to_classical() {
        // T_ell commutes with specializing the family at a weight divisible
        // by p - 1 (where the universal character's tame part matches), up
        // to the u-truncation of the universal character's value at ell:
        // one digit above the weight-coordinate truncation.
        let pr = prof();
        let digits = (pr.wt_truncation_digits() + 1).min(pr.n());
        let s_fam: SplittingModel<FamilyElement> = SplittingModel::diagonal(pr);
        let s_sc: SplittingModel<PadicInt> = SplittingModel::diagonal(pr);
        let f = NearlyOcForm::from_series(
            delta::<FamilyElement>(pr),
            crate::weight::universal_char(pr).unwrap(),
            "diagonal",
        )
        .unwrap();
        for (k, ell) in [(8i64, 2u64), (8, 3), (4, 2), (12, 3)] {
            let tf = t_ell(&f, &s_fam, ell).unwrap();
            let uk = crate::padic::u_for_weight(pr, k).unwrap();
            let spec_then = tf.specialize(&uk);
            let then_spec = t_ell(
                &NearlyOcForm::from_series(
                    delta::<PadicInt>(pr),
                    crate::weight::universal_char(pr)
                        .unwrap()
                        .specialize(&uk)
                        .assume_classical(k)
                        .unwrap(),
                    "diagonal",
                )
                .unwrap(),
                &s_sc,
                ell,
            )
            .unwrap();
            assert!(spec_then.agrees_mod(&then_spec, digits), "k = {k}, ell = {ell}");
        }
    }

    #[test]
    fn calibration_finds_zero() {
        let pr = prof();
        let cal = calibrate_lambda(pr).unwrap();
        assert_eq!(cal.winner, (0, 0));
        assert!(cal.lambda_diagonal.is_zero());
        assert_eq!(cal.candidates_tested, 169);
        // Transported lambdas; the minus side is the classical one.
        let inv144 = PadicInt::new(pr, 144).inv().unwrap();
        let e4: QSeries<PadicInt> = e4_std(pr);
        let e2: QSeries<PadicInt> = qseries::e2(pr);
        assert_eq!(cal.lambda_minus, e4.scale(&inv144).neg());
        assert_eq!(
            cal.lambda_plus,
            e4.sub(&e2.mul(&e2).scale_int(2)).scale(&inv144)
        );
    }

    #[test]
    fn e4_candidate_is_refused() {
        let pr = prof();
        let e4: QSeries<PadicInt> = e4_std(pr);
        assert!(!diagonal_lambda_is_consistent(pr, &e4).unwrap());
    }
}
