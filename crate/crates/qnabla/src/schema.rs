//! Versioned JSON interchange.
//!
//! Every document is an envelope: a `header` echoing the full precision
//! profile plus the schema version, a `kind` tag, the coefficient `ring`,
//! and a kind-specific `payload`. Scalar q-expansions serialize as a flat
//! array of least residues; family q-expansions as an array of coefficient
//! arrays in the nilpotent variable. Round trips are the identity and two
//! serializations of equal values are byte-identical.

use serde::{Deserialize, Serialize};

use crate::connection::NearlyOcForm;
use crate::error::{Error, Result};
use crate::padic::{Coeff, FamilyElement, PadicInt};
use crate::profile::Profile;
use crate::qseries::QSeries;
use crate::verify::Report;
use crate::weight::Character;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "Q")]
    pub q: u32,
    pub schema: u32,
}

impl Header {
    pub fn of(profile: Profile) -> Header {
        Header {
            p: profile.p(),
            n: profile.n(),
            m: profile.m(),
            q: profile.q(),
            schema: SCHEMA_VERSION,
        }
    }

    pub fn to_profile(&self) -> Result<Profile> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema version {} not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        Profile::new(self.p, self.n, self.m, self.q)
    }
}

/// Coefficients of one q-expansion: flat residues for the scalar ring,
/// one residue array per coefficient for the family ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffsDto {
    Zp(Vec<u64>),
    Family(Vec<Vec<u64>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDto {
    pub tame: u64,
    /// Reserved for wild twists; only 0 is implemented.
    #[serde(default)]
    pub wild: u64,
    pub lambda: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_k: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDto {
    pub weight: CharacterDto,
    pub r: usize,
    pub splitting: String,
    pub components: Vec<CoeffsDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Payload {
    Qexp(CoeffsDto),
    Form(FormDto),
    Scalar(Vec<u64>),
    Reports(Vec<Report>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub header: Header,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(flatten)]
    pub payload: Payload,
}

/// A decoded envelope, dispatched over the coefficient ring.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoded {
    SeriesZp(QSeries<PadicInt>),
    SeriesFamily(QSeries<FamilyElement>),
    FormZp(NearlyOcForm<PadicInt>),
    FormFamily(NearlyOcForm<FamilyElement>),
    ScalarZp(PadicInt),
    ScalarFamily(FamilyElement),
}

impl Decoded {
    pub fn describe(&self) -> &'static str {
        match self {
            Decoded::SeriesZp(_) | Decoded::SeriesFamily(_) => "qexp",
            Decoded::FormZp(_) | Decoded::FormFamily(_) => "form",
            Decoded::ScalarZp(_) | Decoded::ScalarFamily(_) => "scalar",
        }
    }
}

// ---------------------------------------------------------------------------
// encoding

fn coeffs_dto<C: Coeff>(series: &QSeries<C>) -> CoeffsDto {
    if C::ring_tag() == "zp" {
        CoeffsDto::Zp(series.coeffs().iter().map(|c| c.residues()[0]).collect())
    } else {
        CoeffsDto::Family(series.coeffs().iter().map(|c| c.residues()).collect())
    }
}

fn character_dto<C: Coeff>(chi: &Character<C>) -> CharacterDto {
    CharacterDto {
        tame: chi.tame(),
        wild: 0,
        lambda: chi.lambda().residues(),
        classical_k: chi.classical_k(),
    }
}

pub fn envelope_qexp<C: Coeff>(series: &QSeries<C>) -> Envelope {
    Envelope {
        header: Header::of(series.profile()),
        ring: Some(C::ring_tag().into()),
        payload: Payload::Qexp(coeffs_dto(series)),
    }
}

pub fn envelope_form<C: Coeff>(form: &NearlyOcForm<C>) -> Envelope {
    Envelope {
        header: Header::of(form.profile()),
        ring: Some(C::ring_tag().into()),
        payload: Payload::Form(FormDto {
            weight: character_dto(form.weight()),
            r: form.r(),
            splitting: form.splitting().into(),
            components: form.components().iter().map(coeffs_dto).collect(),
        }),
    }
}

pub fn envelope_scalar<C: Coeff>(x: &C) -> Envelope {
    Envelope {
        header: Header::of(x.profile()),
        ring: Some(C::ring_tag().into()),
        payload: Payload::Scalar(x.residues()),
    }
}

pub fn envelope_reports(profile: Profile, reports: Vec<Report>) -> Envelope {
    Envelope {
        header: Header::of(profile),
        ring: None,
        payload: Payload::Reports(reports),
    }
}

pub fn to_json(envelope: &Envelope) -> String {
    let mut out = serde_json::to_string_pretty(envelope).expect("serializable");
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// decoding

fn series_zp(profile: Profile, coeffs: &[u64]) -> Result<QSeries<PadicInt>> {
    let cs = coeffs
        .iter()
        .map(|&v| PadicInt::from_residues(profile, &[v]))
        .collect::<Result<Vec<_>>>()?;
    QSeries::from_vec(profile, cs)
}

fn series_family(profile: Profile, coeffs: &[Vec<u64>]) -> Result<QSeries<FamilyElement>> {
    let cs = coeffs
        .iter()
        .map(|v| FamilyElement::from_residues(profile, v))
        .collect::<Result<Vec<_>>>()?;
    QSeries::from_vec(profile, cs)
}

fn check_ring(declared: &Option<String>, found: &str) -> Result<()> {
    match declared.as_deref() {
        None | Some("") => Ok(()),
        Some(r) if r == found => Ok(()),
        Some(r) => Err(Error::Schema(format!(
            "ring declared as '{r}' but the coefficients are shaped as '{found}'"
        ))),
    }
}

fn decode_series(env: &Envelope, coeffs: &CoeffsDto, profile: Profile) -> Result<Decoded> {
    match coeffs {
        CoeffsDto::Zp(v) => {
            check_ring(&env.ring, "zp")?;
            Ok(Decoded::SeriesZp(series_zp(profile, v)?))
        }
        CoeffsDto::Family(v) => {
            check_ring(&env.ring, "family")?;
            Ok(Decoded::SeriesFamily(series_family(profile, v)?))
        }
    }
}

fn character_zp(profile: Profile, dto: &CharacterDto) -> Result<Character<PadicInt>> {
    let lambda = PadicInt::from_residues(profile, &dto.lambda)?;
    Character::from_parts(profile, dto.tame, lambda, dto.classical_k)
}

fn character_family(profile: Profile, dto: &CharacterDto) -> Result<Character<FamilyElement>> {
    let lambda = FamilyElement::from_residues(profile, &dto.lambda)?;
    Character::from_parts(profile, dto.tame, lambda, dto.classical_k)
}

fn decode_form(env: &Envelope, dto: &FormDto, profile: Profile) -> Result<Decoded> {
    if dto.weight.wild != 0 {
        return Err(Error::Unsupported(
            "wild character twists are not implemented (wild must be 0)".into(),
        ));
    }
    if dto.components.is_empty() {
        return Err(Error::Schema("form has no components".into()));
    }
    if dto.r != dto.components.len() - 1 {
        return Err(Error::Schema(format!(
            "form declares r = {} but carries {} components",
            dto.r,
            dto.components.len()
        )));
    }
    let family = matches!(dto.components[0], CoeffsDto::Family(_));
    if family {
        check_ring(&env.ring, "family")?;
        let mut comps = Vec::with_capacity(dto.components.len());
        for c in &dto.components {
            match c {
                CoeffsDto::Family(v) => comps.push(series_family(profile, v)?),
                CoeffsDto::Zp(_) => {
                    return Err(Error::Schema(
                        "form mixes family and scalar components".into(),
                    ))
                }
            }
        }
        let weight = character_family(profile, &dto.weight)?;
        Ok(Decoded::FormFamily(NearlyOcForm::new(
            weight,
            &dto.splitting,
            comps,
        )?))
    } else {
        check_ring(&env.ring, "zp")?;
        let mut comps = Vec::with_capacity(dto.components.len());
        for c in &dto.components {
            match c {
                CoeffsDto::Zp(v) => comps.push(series_zp(profile, v)?),
                CoeffsDto::Family(_) => {
                    return Err(Error::Schema(
                        "form mixes family and scalar components".into(),
                    ))
                }
            }
        }
        let weight = character_zp(profile, &dto.weight)?;
        Ok(Decoded::FormZp(NearlyOcForm::new(
            weight,
            &dto.splitting,
            comps,
        )?))
    }
}

/// Parse an envelope from JSON and decode its payload into core types.
pub fn decode(json: &str) -> Result<(Profile, Decoded)> {
    let env: Envelope =
        serde_json::from_str(json).map_err(|e| Error::Schema(format!("malformed JSON: {e}")))?;
    let profile = env.header.to_profile()?;
    let decoded = match &env.payload {
        Payload::Qexp(coeffs) => decode_series(&env, coeffs, profile)?,
        Payload::Form(dto) => decode_form(&env, dto, profile)?,
        Payload::Scalar(residues) => {
            if residues.len() <= 1 {
                check_ring(&env.ring, "zp")?;
                Decoded::ScalarZp(PadicInt::from_residues(profile, residues)?)
            } else {
                check_ring(&env.ring, "family")?;
                Decoded::ScalarFamily(FamilyElement::from_residues(profile, residues)?)
            }
        }
        Payload::Reports(_) => {
            return Err(Error::Schema(
                "verification reports are output-only and cannot be used as input".into(),
            ))
        }
    };
    Ok((profile, decoded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries;
    use crate::weight::{classical_char, universal_char};

    fn profile() -> Profile {
        Profile::default_profile()
    }

    #[test]
    fn qexp_round_trip_is_identity() {
        let d: QSeries<PadicInt> = qseries::delta(profile());
        let json = to_json(&envelope_qexp(&d));
        let (p, decoded) = decode(&json).unwrap();
        assert_eq!(p, profile());
        assert_eq!(decoded, Decoded::SeriesZp(d));
    }

    #[test]
    fn scalar_qexp_payload_is_a_flat_integer_array() {
        let d: QSeries<PadicInt> = qseries::delta(profile());
        let json = to_json(&envelope_qexp(&d));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["payload"][0], 0);
        assert_eq!(v["payload"][1], 1);
        // -24 in least-residue form
        assert_eq!(v["payload"][2], 15601);
        assert_eq!(v["header"]["N"], 6);
        assert_eq!(v["header"]["schema"], 1);
    }

    #[test]
    fn form_round_trip_classical_and_family() {
        let d = NearlyOcForm::from_series(
            qseries::delta::<PadicInt>(profile()),
            classical_char(profile(), 12, 0).unwrap(),
            "katz",
        )
        .unwrap();
        let json = to_json(&envelope_form(&d));
        let (_, decoded) = decode(&json).unwrap();
        assert_eq!(decoded, Decoded::FormZp(d));

        let f = NearlyOcForm::from_series(
            qseries::delta::<FamilyElement>(profile()),
            universal_char(profile()).unwrap(),
            "katz",
        )
        .unwrap();
        let json = to_json(&envelope_form(&f));
        let (_, decoded) = decode(&json).unwrap();
        assert_eq!(decoded, Decoded::FormFamily(f));
    }

    #[test]
    fn serialization_is_deterministic() {
        let f = NearlyOcForm::from_series(
            qseries::e4_paper::<FamilyElement>(profile()).unwrap(),
            universal_char(profile()).unwrap(),
            "diagonal",
        )
        .unwrap();
        assert_eq!(to_json(&envelope_form(&f)), to_json(&envelope_form(&f)));
    }

    #[test]
    fn schema_version_mismatch_is_rejected() {
        let d: QSeries<PadicInt> = qseries::delta(profile());
        let json = to_json(&envelope_qexp(&d)).replace("\"schema\": 1", "\"schema\": 2");
        match decode(&json) {
            Err(Error::Schema(msg)) => assert!(msg.contains("schema version 2")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn wild_twist_is_rejected() {
        let d = NearlyOcForm::from_series(
            qseries::delta::<PadicInt>(profile()),
            classical_char(profile(), 12, 0).unwrap(),
            "katz",
        )
        .unwrap();
        let json = to_json(&envelope_form(&d))
            .replace("\"wild\": 0", "\"wild\": 1");
        match decode(&json) {
            Err(Error::Unsupported(msg)) => assert!(msg.contains("wild")),
            other => panic!("expected unsupported error, got {other:?}"),
        }
    }

    #[test]
    fn declared_ring_must_match_shape() {
        let d: QSeries<PadicInt> = qseries::delta(profile());
        let json = to_json(&envelope_qexp(&d)).replace("\"ring\": \"zp\"", "\"ring\": \"family\"");
        assert!(matches!(decode(&json), Err(Error::Schema(_))));
    }

    #[test]
    fn r_must_match_component_count() {
        let d = NearlyOcForm::from_series(
            qseries::delta::<PadicInt>(profile()),
            classical_char(profile(), 12, 0).unwrap(),
            "katz",
        )
        .unwrap();
        let json = to_json(&envelope_form(&d)).replace("\"r\": 0", "\"r\": 1");
        assert!(matches!(decode(&json), Err(Error::Schema(_))));
    }

    #[test]
    fn out_of_range_residue_is_rejected() {
        let json = format!(
            "{{\"header\":{{\"p\":5,\"N\":6,\"M\":4,\"Q\":64,\"schema\":1}},\
             \"ring\":\"zp\",\"kind\":\"qexp\",\"payload\":[0,{}]}}",
            u64::MAX
        );
        assert!(matches!(decode(&json), Err(Error::Schema(_))));
    }
}
