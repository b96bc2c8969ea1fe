//! Named verification suites.
//!
//! Each suite runs a fixed, deterministic battery of checks (randomness is
//! seeded per suite) and returns a structured [`Report`]. The CLI renders
//! reports as JSON; the acceptance tests re-run them and assert. Two runs
//! on the same profile produce identical reports byte for byte.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connection::{
    change_coordinates, matrix_identity_check, nabla, nabla_classical, nabla_classical_iter,
    partial_chi, splitting_update, NearlyOcForm, Sign, SplittingModel,
};
use crate::error::{Error, Result};
use crate::hecke::{
    calibrate_lambda, diagonal_lambda_is_consistent, eigenvalue, t_ell, u_p, v_p, EigenOutcome,
};
use crate::padic::{u_for_weight, Coeff, FamilyElement, PadicInt};
use crate::profile::Profile;
use crate::qseries::{self, QSeries};
use crate::weight::{classical_char, universal_char};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: &str) -> Report {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

pub const SUITES: &[&str] = &[
    "ramanujan",
    "interpolation",
    "independence",
    "change-of-splitting",
    "hecke",
    "calibrate-lambda",
];

/// Run one named suite, or every suite in order for "all".
pub fn run_suite(name: &str, profile: Profile) -> Result<Vec<Report>> {
    // The frozen anchors reach into q^2-after-U_2 coefficients and the
    // calibration grid needs room to tell eigen series apart.
    if profile.q() < 16 {
        return Err(Error::Domain(format!(
            "verification suites need at least 16 stored q-coefficients, got {}",
            profile.q()
        )));
    }
    match name {
        "ramanujan" => Ok(vec![suite_ramanujan(profile)?]),
        "interpolation" => Ok(vec![suite_interpolation(profile)?]),
        "independence" => Ok(vec![suite_independence(profile)?]),
        "change-of-splitting" => Ok(vec![suite_change_of_splitting(profile)?]),
        "hecke" => Ok(vec![suite_hecke(profile)?]),
        "calibrate-lambda" => Ok(vec![suite_calibrate_lambda(profile)?]),
        "all" => SUITES
            .iter()
            .map(|s| run_suite(s, profile).map(|mut v| v.pop().unwrap()))
            .collect(),
        other => Err(Error::Domain(format!(
            "unknown suite '{other}' (expected one of {}, or all)",
            SUITES.join(", ")
        ))),
    }
}

// ---------------------------------------------------------------------------
// randomness helpers (all deterministic per seed)

fn rand_scalar(rng: &mut ChaCha8Rng, profile: Profile) -> PadicInt {
    PadicInt::from_raw(profile, rng.next_u64() % profile.modulus())
}

fn rand_family(rng: &mut ChaCha8Rng, profile: Profile) -> FamilyElement {
    let coeffs: Vec<u64> = (0..profile.m())
        .map(|_| rng.next_u64() % profile.modulus())
        .collect();
    FamilyElement::from_residues(profile, &coeffs).expect("residues in range")
}

fn rand_series_sc(rng: &mut ChaCha8Rng, profile: Profile, len: usize) -> QSeries<PadicInt> {
    QSeries::from_vec(profile, (0..len).map(|_| rand_scalar(rng, profile)).collect())
        .expect("length in range")
}

fn rand_series_fam(rng: &mut ChaCha8Rng, profile: Profile, len: usize) -> QSeries<FamilyElement> {
    QSeries::from_vec(profile, (0..len).map(|_| rand_family(rng, profile)).collect())
        .expect("length in range")
}

fn rand_form_sc(
    rng: &mut ChaCha8Rng,
    profile: Profile,
    r: usize,
    k: i64,
    splitting: &str,
) -> NearlyOcForm<PadicInt> {
    let len = profile.q() as usize;
    let components = (0..=r).map(|_| rand_series_sc(rng, profile, len)).collect();
    NearlyOcForm::new(
        classical_char(profile, k, 0).expect("classical character"),
        splitting,
        components,
    )
    .expect("well-formed")
}

fn rand_form_fam(
    rng: &mut ChaCha8Rng,
    profile: Profile,
    r: usize,
    splitting: &str,
) -> NearlyOcForm<FamilyElement> {
    let len = profile.q() as usize;
    let components = (0..=r).map(|_| rand_series_fam(rng, profile, len)).collect();
    NearlyOcForm::new(
        universal_char(profile).expect("universal character"),
        splitting,
        components,
    )
    .expect("well-formed")
}

// ---------------------------------------------------------------------------
// ramanujan

/// Integral weight-raising identities and generator presets.
pub fn suite_ramanujan(profile: Profile) -> Result<Report> {
    let mut rep = Report::new("ramanujan");
    let len = 64usize;
    let e2 = qseries::e2_z(len);
    let e4 = qseries::e4_std_z(len);
    let e6 = qseries::e6_std_z(len);
    let delta = qseries::delta_z(len);

    rep.check(
        "theta-e2",
        e2.theta().scale(12) == e2.mul(&e2).sub(&e4),
        "12 theta(E2) = E2^2 - E4 over exact integers to q^64",
    );
    rep.check(
        "theta-e4",
        e4.theta().scale(3) == e2.mul(&e4).sub(&e6),
        "3 theta(E4) = E2 E4 - E6 over exact integers to q^64",
    );
    rep.check(
        "theta-e6",
        e6.theta().scale(2) == e2.mul(&e6).sub(&e4.mul(&e4)),
        "2 theta(E6) = E2 E6 - E4^2 over exact integers to q^64",
    );
    rep.check(
        "theta-delta",
        delta.theta() == e2.mul(&delta),
        "theta(Delta) = E2 Delta over exact integers to q^64",
    );

    let presets_ok = {
        let paper4 = qseries::eisenstein_z(4, 120, 4)?;
        let std4 = qseries::eisenstein_z(4, 240, 4)?;
        let std6 = qseries::eisenstein_z(6, -504, 4)?;
        paper4.coeffs == vec![1, 120, 1080, 3360]
            && std4.coeffs == vec![1, 240, 2160, 6720]
            && std6.coeffs == vec![1, -504, -16632, -122976]
            && qseries::std_normalization(4)? == 240
            && qseries::std_normalization(6)? == -504
    };
    rep.check(
        "eisenstein-presets",
        presets_ok,
        "weight-4 presets (c = 120, c = 240) and weight-6 (c = -504) match their sigma sums",
    );

    let e2p: QSeries<PadicInt> = qseries::e2(profile);
    let e4p: QSeries<PadicInt> = qseries::e4_std(profile);
    let e6p: QSeries<PadicInt> = qseries::e6_std(profile);
    let dp: QSeries<PadicInt> = qseries::delta(profile);
    let modp = e2p.theta().scale_int(12) == e2p.mul(&e2p).sub(&e4p)
        && e4p.theta().scale_int(3) == e2p.mul(&e4p).sub(&e6p)
        && e6p.theta().scale_int(2) == e2p.mul(&e6p).sub(&e4p.mul(&e4p))
        && dp.theta() == e2p.mul(&dp);
    rep.check(
        "identities-mod-p",
        modp,
        "the four identities hold verbatim after reduction mod p^n",
    );

    rep.check(
        "tau-anchors",
        delta.coeffs[..7] == [0, 1, -24, 252, -1472, 4830, -6048]
            && delta.coeffs[6] == delta.coeffs[2] * delta.coeffs[3],
        "tau(1..6) anchors and tau(6) = tau(2) tau(3)",
    );
    Ok(rep)
}

// ---------------------------------------------------------------------------
// interpolation

/// Specializing the family connection at a classical weight versus running
/// the plog-free classical connection on the specialized form.
pub fn suite_interpolation(profile: Profile) -> Result<Report> {
    let mut rep = Report::new("interpolation");
    let digits = (profile.n() - 1).min(profile.wt_truncation_digits());
    let (plain, residual, valuation) = interpolation_battery(profile, 0x1417, 20)?;
    rep.check(
        "plain-agreement",
        plain,
        format!(
            "specialize(nabla) = nabla_classical(specialize) mod p^{digits} \
             on 20 random family forms, r in 0..=2, k in {{4, 6, 8, 12}}"
        ),
    );
    rep.check(
        "residual-identity",
        residual,
        "the full discrepancy is (W - k)(alpha0 f_b + f_{b-1}) minus the \
         evaluated u-truncation tails of the wt products, exact on every \
         stored digit: nothing else separates the two routes",
    );
    rep.check(
        "weight-truncation-valuation",
        valuation,
        format!(
            "v_p(W - k) >= {} at every tested weight",
            profile.wt_truncation_digits()
        ),
    );

    // A profile whose p-precision does not outrun the family truncation:
    // there the two routes agree mod p^(n-1) verbatim.
    let nb = (profile.wt_truncation_digits() + 1).min(profile.n());
    if nb >= 2 {
        let balanced = Profile::new(profile.p(), nb, profile.m(), profile.q().min(32))?;
        let (plain_b, residual_b, _) = interpolation_battery(balanced, 0x1418, 6)?;
        rep.check(
            "balanced-profile",
            plain_b && residual_b && balanced.wt_truncation_digits() >= nb - 1,
            format!(
                "at (p, n, m) = ({}, {}, {}) the agreement is mod p^(n-1) with \
                 no truncation allowance",
                balanced.p(),
                nb,
                balanced.m()
            ),
        );
    }
    Ok(rep)
}

/// A random family element whose u^i coefficient is divisible by p^i — the
/// decay every family threaded through lambda = 1 + pu actually has, and
/// the shape on which evaluation at a unit point stays meaningful.
fn rand_family_decay(rng: &mut ChaCha8Rng, profile: Profile) -> FamilyElement {
    let coeffs: Vec<u64> = (0..profile.m())
        .map(|i| {
            let scale = profile.pow_p(i.min(profile.n()));
            (rng.next_u64() % (profile.modulus() / scale)) * scale
        })
        .collect();
    FamilyElement::from_residues(profile, &coeffs).expect("residues in range")
}

fn rand_form_fam_decay(
    rng: &mut ChaCha8Rng,
    profile: Profile,
    r: usize,
) -> NearlyOcForm<FamilyElement> {
    let len = profile.q() as usize;
    let components = (0..=r)
        .map(|_| {
            QSeries::from_vec(
                profile,
                (0..len).map(|_| rand_family_decay(rng, profile)).collect(),
            )
            .expect("length in range")
        })
        .collect();
    NearlyOcForm::new(
        universal_char(profile).expect("universal character"),
        "katz",
        components,
    )
    .expect("well-formed")
}

/// Per q-coefficient, the terms of w * y that the family ring discards
/// (u-degree >= m), evaluated at the unit point via its power table.
fn truncation_tail(
    wt: &FamilyElement,
    y: &QSeries<FamilyElement>,
    powers: &[PadicInt],
) -> QSeries<PadicInt> {
    let profile = y.profile();
    let m = profile.m() as usize;
    let w = wt.residues();
    let coeffs = y
        .coeffs()
        .iter()
        .map(|c| {
            let cr = c.residues();
            let mut acc = PadicInt::new(profile, 0);
            for i in m..=(2 * m).saturating_sub(2) {
                let mut ci = PadicInt::new(profile, 0);
                for j in (i + 1).saturating_sub(m)..m.min(i + 1) {
                    ci = ci.add(
                        &PadicInt::from_raw(profile, w[j])
                            .mul(&PadicInt::from_raw(profile, cr[i - j])),
                    );
                }
                acc = acc.add(&ci.mul(&powers[i]));
            }
            acc
        })
        .collect();
    QSeries::from_vec(profile, coeffs).expect("length preserved")
}

/// Returns (plain agreement, exact residual identity, valuation bound).
fn interpolation_battery(profile: Profile, seed: u64, forms: usize) -> Result<(bool, bool, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s_fam: SplittingModel<FamilyElement> = SplittingModel::katz(profile)?;
    let s_sc: SplittingModel<PadicInt> = SplittingModel::katz(profile)?;
    let uni = universal_char(profile)?;
    let wt_fam = uni.wt()?;
    let weights = [4i64, 6, 8, 12];
    let digits = (profile.n() - 1).min(profile.wt_truncation_digits());
    let m = profile.m() as usize;

    let mut plain = true;
    let mut residual = true;
    let mut valuation = true;
    for i in 0..forms {
        let r = i % 3;
        let k = weights[i % 4];
        let f = rand_form_fam_decay(&mut rng, profile, r);
        let uk = u_for_weight(profile, k)?;
        let family_route = nabla(&f, &s_fam)?.specialize(&uk);
        let f_spec = f.specialize(&uk);
        let classical_route = nabla_classical(&f_spec.assume_classical(k)?, &s_sc)?;

        if !family_route.agrees_mod(&classical_route, digits) {
            plain = false;
        }
        let w = wt_fam.specialize(&uk);
        let dw = w.sub(&PadicInt::new(profile, k));
        if dw.val() < profile.wt_truncation_digits() {
            valuation = false;
        }
        let mut powers = vec![PadicInt::new(profile, 1)];
        for _ in 1..(2 * m).max(1) {
            powers.push(powers.last().unwrap().mul(&uk));
        }
        for b in 0..=(r + 1) {
            let mut rhs = QSeries::<PadicInt>::zero(profile).truncate(f.prec());
            let mut tail = QSeries::<PadicInt>::zero(profile).truncate(f.prec());
            if b <= r {
                rhs = rhs.add(&s_sc.alpha0().mul(f_spec.component(b)));
                tail = tail.add(&truncation_tail(
                    &wt_fam,
                    &s_fam.alpha0().mul(f.component(b)),
                    &powers,
                ));
            }
            if b >= 1 {
                rhs = rhs.add(f_spec.component(b - 1));
                tail = tail.add(&truncation_tail(&wt_fam, f.component(b - 1), &powers));
            }
            let rhs = rhs.scale(&dw).sub(&tail);
            let diff = family_route.component(b).sub(classical_route.component(b));
            if diff != rhs {
                residual = false;
            }
        }
    }
    Ok((plain, residual, valuation))
}

// ---------------------------------------------------------------------------
// independence

/// Changing coordinates commutes with the connection:
/// C_alpha(nabla_s F) = nabla_s'(C_alpha F) exactly, where s' = update(s, alpha).
pub fn suite_independence(profile: Profile) -> Result<Report> {
    let mut rep = Report::new("independence");
    let mut rng = ChaCha8Rng::seed_from_u64(0x1de9);
    let base_sc: SplittingModel<PadicInt> = SplittingModel::katz(profile)?;
    let base_fam: SplittingModel<FamilyElement> = SplittingModel::katz(profile)?;
    let weights = [3i64, 4, 7, 12, 0, 9, 5, 8, 11, 2];
    let len = profile.q() as usize;

    let mut classical_ok = true;
    let mut family_ok = true;
    let mut sign_pin = false;
    for (i, &weight) in weights.iter().enumerate() {
        let r = i % 3;

        let alpha = rand_series_sc(&mut rng, profile, len);
        let moved = splitting_update(&base_sc, &alpha, "moved");
        let f = rand_form_sc(&mut rng, profile, r, weight, "katz");
        let lhs = change_coordinates(&nabla(&f, &base_sc)?, &alpha, Sign::Plus, "moved");
        let rhs = nabla(&change_coordinates(&f, &alpha, Sign::Plus, "moved"), &moved)?;
        if lhs != rhs {
            classical_ok = false;
        }
        if i == 0 {
            // The opposite power sign must break the identity.
            let bad = change_coordinates(&nabla(&f, &base_sc)?, &alpha, Sign::Minus, "moved");
            sign_pin = bad != rhs;
        }

        let alpha_f = rand_series_fam(&mut rng, profile, len);
        let moved_f = splitting_update(&base_fam, &alpha_f, "moved");
        let ff = rand_form_fam(&mut rng, profile, r, "katz");
        let lhs_f = change_coordinates(&nabla(&ff, &base_fam)?, &alpha_f, Sign::Plus, "moved");
        let rhs_f = nabla(
            &change_coordinates(&ff, &alpha_f, Sign::Plus, "moved"),
            &moved_f,
        )?;
        if lhs_f != rhs_f {
            family_ok = false;
        }
    }
    rep.check(
        "classical-weights",
        classical_ok,
        "exact on all digits for 10 random alpha and forms, r in 0..=2",
    );
    rep.check(
        "universal-weight",
        family_ok,
        "exact on all digits for 10 random family alpha and family forms",
    );
    rep.check(
        "sign-pin",
        sign_pin,
        "the (-alpha)^(a-b) convention breaks the identity: the shipped sign \
         is forced, not chosen",
    );
    Ok(rep)
}

// ---------------------------------------------------------------------------
// change of splitting

pub fn suite_change_of_splitting(profile: Profile) -> Result<Report> {
    let mut rep = Report::new("change-of-splitting");
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    let s: SplittingModel<PadicInt> = SplittingModel::katz(profile)?;
    let len = profile.q() as usize;

    let mut matrix_ok = true;
    let mut negative_ok = false;
    for i in 0..10 {
        let alpha = rand_series_sc(&mut rng, profile, len);
        let moved = splitting_update(&s, &alpha, "moved");
        let pairs: Vec<_> = (0..3)
            .map(|_| {
                (
                    rand_series_sc(&mut rng, profile, len),
                    rand_series_sc(&mut rng, profile, len),
                )
            })
            .collect();
        if !matrix_identity_check(&s, &moved, &alpha, &pairs) {
            matrix_ok = false;
        }
        if i == 0 {
            let corrupted = SplittingModel::custom(
                "moved",
                moved.alpha0().clone(),
                moved.lambda().add(&QSeries::one(profile)),
            );
            negative_ok = !matrix_identity_check(&s, &corrupted, &alpha, &pairs);
        }
    }
    rep.check(
        "matrix-conjugation",
        matrix_ok,
        "(1 a; 0 1) M_s (1 -a; 0 1) = M_s' in the weight-(1, -1) basis for \
         10 random alpha, 3 random pairs each",
    );
    rep.check(
        "matrix-negative-control",
        negative_ok,
        "corrupting lambda' by +1 breaks the conjugation identity",
    );

    // Family lemma: the updated partial differs by wt(chi) * alpha, exactly.
    let s_fam: SplittingModel<FamilyElement> = SplittingModel::katz(profile)?;
    let uni = universal_char(profile)?;
    let wt = uni.wt()?;
    let mut lemma_ok = true;
    for _ in 0..5 {
        let alpha_f = rand_series_fam(&mut rng, profile, len);
        let f = rand_series_fam(&mut rng, profile, len);
        let moved_f = splitting_update(&s_fam, &alpha_f, "moved");
        let lhs = partial_chi(&f, &uni, &moved_f)?;
        let rhs = partial_chi(&f, &uni, &s_fam)?.add(&alpha_f.mul(&f).scale(&wt));
        if lhs != rhs {
            lemma_ok = false;
        }
    }
    rep.check(
        "family-lemma",
        lemma_ok,
        "partial_chi after the update = partial_chi + wt(chi) alpha f for the \
         universal character, exact on all digits",
    );

    // The three named splittings are one update apart.
    let diag: SplittingModel<PadicInt> = SplittingModel::diagonal(profile);
    let katz: SplittingModel<PadicInt> = SplittingModel::katz(profile)?;
    let serre: SplittingModel<PadicInt> = SplittingModel::serre(profile)?;
    let inv12 = PadicInt::new(profile, 12).inv()?;
    let e2_12 = qseries::e2::<PadicInt>(profile).scale(&inv12);
    let up = splitting_update(&diag, &e2_12, "katz");
    let down = splitting_update(&diag, &e2_12.neg(), "serre");
    rep.check(
        "named-splittings",
        up.alpha0() == katz.alpha0()
            && up.lambda() == katz.lambda()
            && down.alpha0() == serre.alpha0()
            && down.lambda() == serre.lambda(),
        "katz and serre coordinates are the +-E2/12 updates of diagonal",
    );

    // Round trip on forms.
    let f = rand_form_sc(&mut rng, profile, 2, 8, "katz");
    let alpha = rand_series_sc(&mut rng, profile, len);
    let there = change_coordinates(&f, &alpha, Sign::Plus, "moved");
    let back = change_coordinates(&there, &alpha.neg(), Sign::Plus, "katz");
    rep.check(
        "round-trip",
        back == f,
        "moving by alpha then -alpha restores a type-2 form exactly",
    );
    Ok(rep)
}

// ---------------------------------------------------------------------------
// hecke

pub fn suite_hecke(profile: Profile) -> Result<Report> {
    let mut rep = Report::new("hecke");
    let mut rng = ChaCha8Rng::seed_from_u64(0x4EC7);
    let s: SplittingModel<PadicInt> = SplittingModel::diagonal(profile);

    let e4_form = NearlyOcForm::from_series(
        qseries::e4_std::<PadicInt>(profile),
        classical_char(profile, 4, 0)?,
        "diagonal",
    )?;
    let delta_form = NearlyOcForm::from_series(
        qseries::delta::<PadicInt>(profile),
        classical_char(profile, 12, 0)?,
        "diagonal",
    )?;

    let t2e4 = eigenvalue(&e4_form, &t_ell(&e4_form, &s, 2)?)?;
    let t3e4 = eigenvalue(&e4_form, &t_ell(&e4_form, &s, 3)?)?;
    let t2d = eigenvalue(&delta_form, &t_ell(&delta_form, &s, 2)?)?;
    rep.check(
        "classical-eigenvalues",
        t2e4 == EigenOutcome::Eigen(PadicInt::new(profile, 9))
            && t3e4 == EigenOutcome::Eigen(PadicInt::new(profile, 28))
            && t2d == EigenOutcome::Eigen(PadicInt::new(profile, -24)),
        "T_2 E4 = 9 E4, T_3 E4 = 28 E4, T_2 Delta = -24 Delta",
    );

    // nabla(Delta) in diagonal coordinates: components and T_2 eigenvalue.
    let nd = nabla_classical(&delta_form, &s)?;
    let theta_delta = qseries::delta::<PadicInt>(profile).theta();
    let twelve_delta = qseries::delta::<PadicInt>(profile).scale_int(12);
    rep.check(
        "nabla-delta-components",
        nd.component(0) == &theta_delta && nd.component(1) == &twelve_delta,
        "nabla(Delta) = (theta Delta, 12 Delta) in diagonal coordinates",
    );
    let tnd = t_ell(&nd, &s, 2)?;
    let anchors = tnd.component(0).coeff(1) == &PadicInt::new(profile, -48)
        && tnd.component(0).coeff(2) == &PadicInt::new(profile, 2304)
        && tnd.component(1).coeff(1) == &PadicInt::new(profile, -576);
    rep.check(
        "nabla-delta-eigen",
        eigenvalue(&nd, &tnd)? == EigenOutcome::Eigen(PadicInt::new(profile, -48)) && anchors,
        "T_2 nabla(Delta) = -48 nabla(Delta), with frozen coefficient anchors \
         -48, 2304, -576",
    );

    let nd2 = nabla_classical_iter(&delta_form, &s, 2)?;
    rep.check(
        "nabla2-delta-eigen",
        eigenvalue(&nd2, &t_ell(&nd2, &s, 2)?)?
            == EigenOutcome::Eigen(PadicInt::new(profile, -96)),
        "T_2 nabla^2(Delta) = -96 nabla^2(Delta)",
    );

    // U_p V_p = id on type 0; V_p refuses higher type; T_p refuses ell = p.
    let v = v_p(&delta_form, &s)?;
    let uv = u_p(&v, &s)?;
    let expect_len = uv.prec();
    rep.check(
        "up-vp-identity",
        uv.component(0) == &delta_form.component(0).truncate(expect_len),
        "U_p(V_p(Delta)) returns Delta on the surviving precision",
    );
    rep.check(
        "vp-type-guard",
        matches!(v_p(&nd, &s), Err(Error::Unsupported(_))),
        "V_p on a type-1 form is reported unsupported",
    );
    rep.check(
        "ell-guards",
        matches!(t_ell(&delta_form, &s, profile.p()), Err(Error::Domain(_)))
            && matches!(t_ell(&delta_form, &s, 6), Err(Error::Domain(_))),
        "T_ell rejects ell = p and composite ell",
    );

    // T_ell nabla = ell * nabla T_ell, componentwise exact, all types.
    let ks = [4i64, 6, 9, 12, 3, 8];
    let mut commute_ok = true;
    for (i, &k) in ks.iter().enumerate() {
        let r = i % 3;
        let ell = [2u64, 3][i % 2];
        let f = rand_form_sc(&mut rng, profile, r, k, "diagonal");
        let lhs = t_ell(&nabla_classical(&f, &s)?, &s, ell)?;
        let rhs = nabla_classical(&t_ell(&f, &s, ell)?, &s)?;
        let ok = lhs
            .components()
            .iter()
            .zip(rhs.components())
            .all(|(a, b)| a == &b.scale_int(ell as i64));
        if !ok {
            commute_ok = false;
        }
    }
    rep.check(
        "nabla-commutation",
        commute_ok,
        "T_ell(nabla F) = ell * nabla(T_ell F) exactly, r in 0..=2, ell in {2, 3}",
    );

    // Deliberately non-eigen input is caught and located.
    let sum = NearlyOcForm::from_series(
        e4_form.component(0).add(delta_form.component(0)),
        classical_char(profile, 4, 0)?,
        "diagonal",
    )?;
    let outcome = eigenvalue(&sum, &t_ell(&sum, &s, 2)?)?;
    rep.check(
        "not-eigen-detected",
        matches!(outcome, EigenOutcome::NotEigen { component: 0, index } if index > 0),
        "E4 + Delta is flagged NotEigen with the first offending index",
    );
    Ok(rep)
}

// ---------------------------------------------------------------------------
// calibrate-lambda

pub fn suite_calibrate_lambda(profile: Profile) -> Result<Report> {
    let mut rep = Report::new("calibrate-lambda");
    let cal = calibrate_lambda(profile)?;
    rep.check(
        "unique-winner",
        cal.winner == (0, 0) && cal.lambda_diagonal.is_zero() && cal.candidates_tested == 169,
        format!(
            "the only candidate through (c1 E4 + c2 E2^2)/144, |c| <= 6, \
             consistent with T_2 on nabla^2(Delta) is (c1, c2) = {:?}: \
             lambda vanishes in diagonal coordinates",
            cal.winner
        ),
    );

    let inv144 = PadicInt::new(profile, 144).inv()?;
    let e4: QSeries<PadicInt> = qseries::e4_std(profile);
    let e2: QSeries<PadicInt> = qseries::e2(profile);
    let serre_expected = e4.scale(&inv144).neg();
    let scalar = *cal.lambda_minus.coeff(0);
    rep.check(
        "classical-lambda-at-minus-e2-12",
        cal.lambda_minus == serre_expected && cal.lambda_minus == e4.scale(&scalar),
        "transported to the -E2/12 splitting, lambda is the scalar multiple \
         -E4/144 of the standard E4",
    );

    let katz_expected = e4.sub(&e2.mul(&e2).scale_int(2)).scale(&inv144);
    let head = *cal.lambda_plus.coeff(0);
    rep.check(
        "quasimodular-lambda-at-plus-e2-12",
        cal.lambda_plus == katz_expected && cal.lambda_plus != e4.scale(&head),
        "at the +E2/12 splitting, lambda is (E4 - 2 E2^2)/144 and is not any \
         scalar multiple of E4",
    );

    rep.check(
        "e4-candidate-refused",
        !diagonal_lambda_is_consistent(profile, &e4)?,
        "lambda = E4 in diagonal coordinates contradicts the -96 eigenvalue",
    );

    let diag: SplittingModel<PadicInt> = SplittingModel::diagonal(profile);
    let katz: SplittingModel<PadicInt> = SplittingModel::katz(profile)?;
    let serre: SplittingModel<PadicInt> = SplittingModel::serre(profile)?;
    let inv12 = PadicInt::new(profile, 12).inv()?;
    let e2_12 = qseries::e2::<PadicInt>(profile).scale(&inv12);
    let up = splitting_update(&diag, &e2_12, "katz");
    let down = splitting_update(&diag, &e2_12.neg(), "serre");
    rep.check(
        "calibration-matches-named-splittings",
        cal.lambda_plus == *katz.lambda()
            && cal.lambda_minus == *serre.lambda()
            && up.lambda() == katz.lambda()
            && down.lambda() == serre.lambda(),
        "the shipped katz/serre models carry exactly the calibrated lambdas",
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_default_profile() {
        let profile = Profile::default_profile();
        for rep in run_suite("all", profile).unwrap() {
            assert!(
                rep.passed(),
                "suite {} failed: {:?}",
                rep.suite,
                rep.failed_names()
            );
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let profile = Profile::default_profile();
        let a = run_suite("all", profile).unwrap();
        let b = run_suite("all", profile).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", Profile::default_profile()).is_err());
    }
}
