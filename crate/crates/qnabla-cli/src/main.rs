//! `qnabla` — exact p-adic modular form families on the command line.
//!
//! Every command reads and writes the versioned JSON envelope from
//! [`qnabla::schema`]. Generators (`eisenstein`, `delta`, `wt`, `verify`)
//! take their precision profile from the `--p/--prec-*` flags; consumers
//! (`theta`, `partial`, `nabla`, `hecke`, `specialize`, `change-coords`)
//! adopt the profile of their input envelope and reject conflicting flags.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 precision
//! error.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use qnabla::connection::{
    change_coordinates, nabla, nabla_classical, partial_chi, NearlyOcForm, Sign, SplittingModel,
};
use qnabla::hecke::{t_ell, u_p, v_p};
use qnabla::padic::u_for_weight;
use qnabla::qseries::{delta, e2, eisenstein_with, std_normalization};
use qnabla::schema::{self, Decoded, Envelope};
use qnabla::verify::run_suite;
use qnabla::weight::{classical_char, universal_char};
use qnabla::{Coeff, Error, PadicInt, Profile, QSeries, Result};

#[derive(Parser)]
#[command(name = "qnabla", version, about = "Exact p-adic families of nearly overconvergent modular forms")]
struct Cli {
    #[command(flatten)]
    profile: ProfileArgs,

    /// Input file holding a JSON envelope; "-" reads stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProfileArgs {
    /// Base prime (default 5).
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Stored p-adic digits N (default 6).
    #[arg(long, global = true)]
    prec_p: Option<u32>,

    /// Truncation order M in the family variable u (default 4).
    #[arg(long, global = true)]
    prec_u: Option<u32>,

    /// Stored q-expansion coefficients Q (default 64).
    #[arg(long, global = true)]
    prec_q: Option<u32>,
}

impl ProfileArgs {
    /// Profile for generator commands: flags with defaults filled in.
    fn build(&self) -> Result<Profile> {
        Profile::new(
            self.p.unwrap_or(5),
            self.prec_p.unwrap_or(6),
            self.prec_u.unwrap_or(4),
            self.prec_q.unwrap_or(64),
        )
    }

    /// Consumer commands work at the input envelope's profile; explicit
    /// flags may restate it but not contradict it.
    fn check_against(&self, found: Profile) -> Result<()> {
        let clash = |name: &str, given: u64, held: u64| -> Result<()> {
            if given != held {
                return Err(Error::Domain(format!(
                    "--{name} {given} conflicts with the input profile ({name} = {held})"
                )));
            }
            Ok(())
        };
        if let Some(p) = self.p {
            clash("p", p, found.p())?;
        }
        if let Some(n) = self.prec_p {
            clash("prec-p", n as u64, found.n() as u64)?;
        }
        if let Some(m) = self.prec_u {
            clash("prec-u", m as u64, found.m() as u64)?;
        }
        if let Some(q) = self.prec_q {
            clash("prec-q", q as u64, found.q() as u64)?;
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eisenstein series 1 + c * sum sigma_{k-1}(n) q^n.
    Eisenstein {
        /// Weight.
        #[arg(long)]
        k: u32,
        /// Normalization: "std" (integral sigma-normalization) or "paper"
        /// (the 120-normalization of weight 4).
        #[arg(long, default_value = "std", value_parser = ["paper", "std"])]
        norm: String,
        /// Explicit normalization constant, overriding --norm.
        #[arg(long, conflicts_with = "norm")]
        c: Option<i64>,
    },

    /// The discriminant cusp form.
    Delta,

    /// Apply theta = q d/dq to a q-expansion.
    Theta,

    /// The weight-raising partial operator theta + wt * alpha0 on a
    /// q-expansion.
    Partial {
        /// Weight character: "k:INT" or "universal".
        #[arg(long)]
        weight: String,
        /// Splitting coordinates: diagonal, katz, or serre.
        #[arg(long, default_value = "katz")]
        splitting: String,
    },

    /// Apply the connection r times; type goes up by one each step.
    Nabla {
        /// Number of applications.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Weight tag for bare q-expansion input: "k:INT" or "universal".
        /// Form input already carries its weight.
        #[arg(long)]
        weight: Option<String>,
        /// Splitting for bare q-expansion input (default katz). Form input
        /// already carries its splitting.
        #[arg(long)]
        splitting: Option<String>,
    },

    /// Hecke operators in diagonal coordinates.
    Hecke {
        /// Operator: up, vp, or tl.
        #[arg(long, value_parser = ["up", "vp", "tl"])]
        op: String,
        /// Prime for tl (must differ from p).
        #[arg(long)]
        ell: Option<u64>,
    },

    /// Evaluate a family object at the classical weight k.
    Specialize {
        /// Classical weight.
        #[arg(long)]
        k: i64,
    },

    /// The p-adic weight wt(chi) = plog(lambda)/p of a character.
    Wt {
        /// Weight character: "k:INT" or "universal".
        #[arg(long)]
        weight: String,
    },

    /// Move a form to a neighboring named splitting.
    ChangeCoords {
        /// Direction: "e2/12" or "-e2/12".
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },

    /// Run named verification suites and report every check.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum WeightSpec {
    Classical(i64),
    Universal,
}

fn parse_weight(s: &str) -> Result<WeightSpec> {
    if s == "universal" {
        return Ok(WeightSpec::Universal);
    }
    if let Some(rest) = s.strip_prefix("k:") {
        if let Ok(k) = rest.parse::<i64>() {
            return Ok(WeightSpec::Classical(k));
        }
    }
    Err(Error::Domain(format!(
        "bad weight '{s}': expected k:INT or universal"
    )))
}

fn read_input(path: &str) -> Result<String> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map(|_| buf)
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Error::Schema(format!("cannot read input '{path}': {e}")))
}

fn emit(env: &Envelope) {
    print!("{}", schema::to_json(env));
}

// ---------------------------------------------------------------------------
// per-command drivers, generic over the coefficient ring where possible

/// Apply the connection r times in the form's own coordinates, taking the
/// exact classical route whenever the weight is classically tagged.
fn nabla_iter<C: Coeff>(form: NearlyOcForm<C>, r: u32) -> Result<NearlyOcForm<C>> {
    let s = SplittingModel::by_name(form.splitting(), form.profile())?;
    let mut f = form;
    for _ in 0..r {
        f = if f.weight().classical_k().is_some() {
            nabla_classical(&f, &s)?
        } else {
            nabla(&f, &s)?
        };
    }
    Ok(f)
}

fn hecke_apply<C: Coeff>(
    form: &NearlyOcForm<C>,
    op: &str,
    ell: Option<u64>,
) -> Result<NearlyOcForm<C>> {
    let s = SplittingModel::diagonal(form.profile());
    match op {
        "tl" => {
            let ell = ell.ok_or_else(|| Error::Domain("--ell is required for --op tl".into()))?;
            t_ell(form, &s, ell)
        }
        other => {
            if ell.is_some() {
                return Err(Error::Domain("--ell only applies to --op tl".into()));
            }
            match other {
                "up" => u_p(form, &s),
                _ => v_p(form, &s),
            }
        }
    }
}

/// Map a named splitting and a +-E2/12 move to the named splitting it lands
/// on. The CLI stays inside the three named coordinate systems.
fn splitting_move(from: &str, dir: Sign) -> Result<&'static str> {
    match (from, dir) {
        ("diagonal", Sign::Plus) => Ok("katz"),
        ("diagonal", Sign::Minus) => Ok("serre"),
        ("katz", Sign::Minus) => Ok("diagonal"),
        ("serre", Sign::Plus) => Ok("diagonal"),
        _ => Err(Error::Domain(format!(
            "moving '{from}' by that alpha leaves the named splittings \
             (diagonal, katz, serre)"
        ))),
    }
}

fn change_coords_apply<C: Coeff>(form: &NearlyOcForm<C>, dir: Sign) -> Result<NearlyOcForm<C>> {
    let profile = form.profile();
    let step: QSeries<C> = e2(profile).scale(&C::from_int(profile, 12).inv()?);
    let to = splitting_move(form.splitting(), dir)?;
    Ok(change_coordinates(form, &step, dir, to))
}

fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Eisenstein { k, norm, c } => {
            let profile = cli.profile.build()?;
            let c = match c {
                Some(c) => *c,
                None if norm == "paper" => {
                    if *k != 4 {
                        return Err(Error::Domain(format!(
                            "the 120-normalization is a weight-4 convention; \
                             got k = {k} (use --norm std or an explicit --c)"
                        )));
                    }
                    120
                }
                None => std_normalization(*k)?,
            };
            let series: QSeries<PadicInt> = eisenstein_with(profile, *k, c)?;
            emit(&schema::envelope_qexp(&series));
        }

        Command::Delta => {
            let profile = cli.profile.build()?;
            emit(&schema::envelope_qexp(&delta::<PadicInt>(profile)));
        }

        Command::Theta => {
            let (profile, decoded) = schema::decode(&read_input(&cli.input)?)?;
            cli.profile.check_against(profile)?;
            match decoded {
                Decoded::SeriesZp(f) => emit(&schema::envelope_qexp(&f.theta())),
                Decoded::SeriesFamily(f) => emit(&schema::envelope_qexp(&f.theta())),
                other => {
                    return Err(Error::Domain(format!(
                        "theta acts on a bare q-expansion, got {}; use nabla for forms",
                        other.describe()
                    )))
                }
            }
        }

        Command::Partial { weight, splitting } => {
            let (profile, decoded) = schema::decode(&read_input(&cli.input)?)?;
            cli.profile.check_against(profile)?;
            match (decoded, parse_weight(weight)?) {
                (Decoded::SeriesZp(f), WeightSpec::Classical(k)) => {
                    let chi = classical_char(profile, k, 0)?;
                    let s = SplittingModel::by_name(splitting, profile)?;
                    emit(&schema::envelope_qexp(&partial_chi(&f, &chi, &s)?));
                }
                (Decoded::SeriesFamily(f), WeightSpec::Universal) => {
                    let chi = universal_char(profile)?;
                    let s = SplittingModel::by_name(splitting, profile)?;
                    emit(&schema::envelope_qexp(&partial_chi(&f, &chi, &s)?));
                }
                (Decoded::SeriesZp(_), WeightSpec::Universal) => {
                    return Err(Error::Domain(
                        "the universal weight needs family coefficients".into(),
                    ))
                }
                (Decoded::SeriesFamily(_), WeightSpec::Classical(_)) => {
                    return Err(Error::Domain(
                        "a classical weight k:INT applies to scalar coefficients; \
                         specialize first"
                            .into(),
                    ))
                }
                (other, _) => {
                    return Err(Error::Domain(format!(
                        "partial acts on a bare q-expansion, got {}",
                        other.describe()
                    )))
                }
            }
        }

        Command::Nabla {
            r,
            weight,
            splitting,
        } => {
            let (profile, decoded) = schema::decode(&read_input(&cli.input)?)?;
            cli.profile.check_against(profile)?;
            match decoded {
                Decoded::FormZp(f) => {
                    check_form_flags(&f, weight, splitting)?;
                    emit(&schema::envelope_form(&nabla_iter(f, *r)?));
                }
                Decoded::FormFamily(f) => {
                    check_form_flags(&f, weight, splitting)?;
                    emit(&schema::envelope_form(&nabla_iter(f, *r)?));
                }
                Decoded::SeriesZp(f) => {
                    let spec = weight_for_series(weight)?;
                    let WeightSpec::Classical(k) = spec else {
                        return Err(Error::Domain(
                            "the universal weight needs family coefficients".into(),
                        ));
                    };
                    let chi = classical_char(profile, k, 0)?;
                    let name = splitting.as_deref().unwrap_or("katz");
                    let form = NearlyOcForm::from_series(f, chi, name)?;
                    emit(&schema::envelope_form(&nabla_iter(form, *r)?));
                }
                Decoded::SeriesFamily(f) => {
                    let spec = weight_for_series(weight)?;
                    let WeightSpec::Universal = spec else {
                        return Err(Error::Domain(
                            "a classical weight k:INT applies to scalar coefficients; \
                             specialize first"
                                .into(),
                        ));
                    };
                    let chi = universal_char(profile)?;
                    let name = splitting.as_deref().unwrap_or("katz");
                    let form = NearlyOcForm::from_series(f, chi, name)?;
                    emit(&schema::envelope_form(&nabla_iter(form, *r)?));
                }
                other => {
                    return Err(Error::Domain(format!(
                        "nabla acts on a form or a bare q-expansion, got {}",
                        other.describe()
                    )))
                }
            }
        }

        Command::Hecke { op, ell } => {
            let (profile, decoded) = schema::decode(&read_input(&cli.input)?)?;
            cli.profile.check_against(profile)?;
            match decoded {
                Decoded::FormZp(f) => emit(&schema::envelope_form(&hecke_apply(&f, op, *ell)?)),
                Decoded::FormFamily(f) => {
                    emit(&schema::envelope_form(&hecke_apply(&f, op, *ell)?))
                }
                other => {
                    return Err(Error::Domain(format!(
                        "hecke acts on a form, got {}; wrap a q-expansion with \
                         nabla --r 0 first",
                        other.describe()
                    )))
                }
            }
        }

        Command::Specialize { k } => {
            let (profile, decoded) = schema::decode(&read_input(&cli.input)?)?;
            cli.profile.check_against(profile)?;
            let u0 = u_for_weight(profile, *k)?;
            match decoded {
                Decoded::SeriesFamily(f) => emit(&schema::envelope_qexp(&f.specialize(&u0))),
                Decoded::FormFamily(f) => emit(&schema::envelope_form(&f.specialize(&u0))),
                Decoded::ScalarFamily(x) => emit(&schema::envelope_scalar(&x.specialize(&u0))),
                other => {
                    return Err(Error::Domain(format!(
                        "specialize needs family coefficients, got a single-weight {}",
                        other.describe()
                    )))
                }
            }
        }

        Command::Wt { weight } => {
            let profile = cli.profile.build()?;
            match parse_weight(weight)? {
                WeightSpec::Classical(k) => {
                    let chi = classical_char(profile, k, 0)?;
                    emit(&schema::envelope_scalar(&chi.wt()?));
                }
                WeightSpec::Universal => {
                    let chi = universal_char(profile)?;
                    emit(&schema::envelope_scalar(&chi.wt()?));
                }
            }
        }

        Command::ChangeCoords { alpha } => {
            let dir = match alpha.as_str() {
                "e2/12" => Sign::Plus,
                "-e2/12" => Sign::Minus,
                other => {
                    return Err(Error::Domain(format!(
                        "bad alpha '{other}': expected e2/12 or -e2/12"
                    )))
                }
            };
            let (profile, decoded) = schema::decode(&read_input(&cli.input)?)?;
            cli.profile.check_against(profile)?;
            match decoded {
                Decoded::FormZp(f) => emit(&schema::envelope_form(&change_coords_apply(&f, dir)?)),
                Decoded::FormFamily(f) => {
                    emit(&schema::envelope_form(&change_coords_apply(&f, dir)?))
                }
                other => {
                    return Err(Error::Domain(format!(
                        "change-coords acts on a form, got {}",
                        other.describe()
                    )))
                }
            }
        }

        Command::Verify { suite } => {
            let profile = cli.profile.build()?;
            let reports = run_suite(suite, profile)?;
            let ok = reports.iter().all(|r| r.passed());
            emit(&schema::envelope_reports(profile, reports));
            return Ok(if ok { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn check_form_flags<C: Coeff>(
    form: &NearlyOcForm<C>,
    weight: &Option<String>,
    splitting: &Option<String>,
) -> Result<()> {
    if weight.is_some() {
        return Err(Error::Domain(
            "the input form already carries a weight; --weight applies to \
             bare q-expansions"
                .into(),
        ));
    }
    if let Some(s) = splitting {
        if s != form.splitting() {
            return Err(Error::Domain(format!(
                "--splitting {s} conflicts with the form's coordinates \
                 ({}); use change-coords to move it",
                form.splitting()
            )));
        }
    }
    Ok(())
}

fn weight_for_series(weight: &Option<String>) -> Result<WeightSpec> {
    match weight {
        Some(w) => parse_weight(w),
        None => Err(Error::Domain(
            "bare q-expansion input needs --weight (k:INT or universal)".into(),
        )),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precision { .. } => 3,
        Error::Verification(_) => 1,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_specs_parse() {
        assert!(matches!(parse_weight("k:12"), Ok(WeightSpec::Classical(12))));
        assert!(matches!(parse_weight("k:-2"), Ok(WeightSpec::Classical(-2))));
        assert!(matches!(parse_weight("universal"), Ok(WeightSpec::Universal)));
        assert!(parse_weight("12").is_err());
        assert!(parse_weight("k:x").is_err());
    }

    #[test]
    fn errors_map_to_documented_exit_codes() {
        assert_eq!(
            exit_code(&Error::Precision {
                needed: 2,
                available: 1,
                context: "x".into()
            }),
            3
        );
        assert_eq!(exit_code(&Error::Verification("x".into())), 1);
        assert_eq!(exit_code(&Error::Domain("x".into())), 2);
        assert_eq!(exit_code(&Error::Schema("x".into())), 2);
        assert_eq!(exit_code(&Error::Coordinates("x".into())), 2);
        assert_eq!(exit_code(&Error::Unsupported("x".into())), 2);
    }

    #[test]
    fn splitting_moves_stay_named() {
        assert_eq!(splitting_move("diagonal", Sign::Plus).unwrap(), "katz");
        assert_eq!(splitting_move("diagonal", Sign::Minus).unwrap(), "serre");
        assert_eq!(splitting_move("katz", Sign::Minus).unwrap(), "diagonal");
        assert_eq!(splitting_move("serre", Sign::Plus).unwrap(), "diagonal");
        assert!(splitting_move("katz", Sign::Plus).is_err());
        assert!(splitting_move("serre", Sign::Minus).is_err());
        assert!(splitting_move("custom", Sign::Plus).is_err());
    }
}
