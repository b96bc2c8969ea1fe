use std::io::Write;
use std::process::{Command, Output, Stdio};

use qnabla::padic::u_for_weight;
use qnabla::weight::universal_char;
use qnabla::{Coeff, Profile};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnabla"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qnabla"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn delta_example_output() {
    let out = run(&["delta", "--p", "5", "--prec-p", "6", "--prec-q", "16"]);
    let v = json(&out);
    assert_eq!(v["header"]["p"], 5);
    assert_eq!(v["header"]["N"], 6);
    assert_eq!(v["header"]["M"], 4);
    assert_eq!(v["header"]["Q"], 16);
    assert_eq!(v["header"]["schema"], 1);
    assert_eq!(v["ring"], "zp");
    assert_eq!(v["kind"], "qexp");
    // tau: 0, 1, -24, 252, -1472 as least residues mod 5^6
    assert_eq!(v["payload"][0], 0);
    assert_eq!(v["payload"][1], 1);
    assert_eq!(v["payload"][2], 15601);
    assert_eq!(v["payload"][3], 252);
    assert_eq!(v["payload"][4], 14153);
}

#[test]
fn identical_jobs_are_byte_identical() {
    let a = run(&["delta", "--prec-q", "32"]);
    let b = run(&["delta", "--prec-q", "32"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let a = run(&["verify", "--suite", "ramanujan", "--prec-q", "16"]);
    let b = run(&["verify", "--suite", "ramanujan", "--prec-q", "16"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eisenstein_normalizations() {
    let v = json(&run(&["eisenstein", "--k", "4", "--norm", "paper", "--prec-q", "8"]));
    assert_eq!(v["payload"][0], 1);
    assert_eq!(v["payload"][1], 120);
    assert_eq!(v["payload"][2], 1080);
    assert_eq!(v["payload"][3], 3360);

    let v = json(&run(&["eisenstein", "--k", "4", "--prec-q", "8"]));
    assert_eq!(v["payload"][1], 240);
    assert_eq!(v["payload"][2], 2160);

    // weight 12 has no integral sigma-normalization
    let out = run(&["eisenstein", "--k", "12", "--prec-q", "8"]);
    assert_eq!(code(&out), 2);
    // but an explicit constant works
    let v = json(&run(&["eisenstein", "--k", "12", "--c", "65520", "--prec-q", "8"]));
    assert_eq!(v["payload"][1], 65520 % 15625);

    // the 120-normalization is weight-4 only
    assert_eq!(code(&run(&["eisenstein", "--k", "6", "--norm", "paper"])), 2);
}

#[test]
fn wt_reports_the_exact_classical_weight() {
    let v = json(&run(&["wt", "--weight", "k:12"]));
    assert_eq!(v["kind"], "scalar");
    assert_eq!(v["ring"], "zp");
    assert_eq!(v["payload"][0], 12);
    assert_eq!(v["payload"].as_array().unwrap().len(), 1);

    // the universal weight agrees with the library value digit for digit
    let expect = universal_char(Profile::default_profile())
        .unwrap()
        .wt()
        .unwrap()
        .residues();
    let v = json(&run(&["wt", "--weight", "universal"]));
    let got: Vec<u64> = v["payload"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(got, expect);

    assert_eq!(code(&run(&["wt", "--weight", "12"])), 2);
}

#[test]
fn theta_pipes_between_invocations() {
    let d = run(&["delta", "--prec-q", "16"]);
    let v = json(&run_stdin(&["theta"], &d.stdout));
    // theta(delta) = q - 48 q^2 + 756 q^3 + ...
    assert_eq!(v["payload"][1], 1);
    assert_eq!(v["payload"][2], 15577);
    assert_eq!(v["payload"][3], 756);

    // theta refuses forms
    let form = run_stdin(
        &["nabla", "--weight", "k:12", "--splitting", "diagonal"],
        &d.stdout,
    );
    assert_eq!(code(&run_stdin(&["theta"], &form.stdout)), 2);
}

#[test]
fn nabla_wraps_a_bare_series_and_applies_the_connection() {
    let d = run(&["delta", "--prec-q", "16"]);

    // r = 0 canonicalizes: the single component is the input series
    let v = json(&run_stdin(
        &["nabla", "--r", "0", "--weight", "k:12", "--splitting", "diagonal"],
        &d.stdout,
    ));
    assert_eq!(v["kind"], "form");
    assert_eq!(v["payload"]["r"], 0);
    assert_eq!(v["payload"]["splitting"], "diagonal");
    assert_eq!(v["payload"]["weight"]["classical_k"], 12);
    let d_json = json(&d);
    assert_eq!(v["payload"]["components"][0], d_json["payload"]);

    // r = 1 in diagonal coordinates: (theta Delta, 12 Delta), weight 14
    let v = json(&run_stdin(
        &["nabla", "--weight", "k:12", "--splitting", "diagonal"],
        &d.stdout,
    ));
    assert_eq!(v["payload"]["r"], 1);
    assert_eq!(v["payload"]["weight"]["classical_k"], 14);
    assert_eq!(v["payload"]["components"][0][1], 1);
    assert_eq!(v["payload"]["components"][0][2], 15577);
    assert_eq!(v["payload"]["components"][1][1], 12);
    assert_eq!(v["payload"]["components"][1][2], 15337);

    // bare input without --weight is a usage error
    assert_eq!(code(&run_stdin(&["nabla"], &d.stdout)), 2);
    // form input must not restate --weight
    let form = run_stdin(
        &["nabla", "--weight", "k:12", "--splitting", "diagonal"],
        &d.stdout,
    );
    assert_eq!(
        code(&run_stdin(&["nabla", "--weight", "k:12"], &form.stdout)),
        2
    );
}

#[test]
fn hecke_t2_fixes_nabla_delta() {
    let d = run(&["delta", "--prec-q", "16"]);
    let form = run_stdin(
        &["nabla", "--weight", "k:12", "--splitting", "diagonal"],
        &d.stdout,
    );
    let v = json(&run_stdin(&["hecke", "--op", "tl", "--ell", "2"], &form.stdout));
    // T_2 (nabla Delta) = -48 nabla Delta
    assert_eq!(v["payload"]["components"][0][1], 15577);
    assert_eq!(v["payload"]["components"][0][2], 2304);
    assert_eq!(v["payload"]["components"][1][1], 15049);

    // U_p then V_p needs type 0; V_p on a type-1 form is refused
    assert_eq!(code(&run_stdin(&["hecke", "--op", "vp"], &form.stdout)), 2);
    // --ell only applies to tl
    assert_eq!(
        code(&run_stdin(&["hecke", "--op", "up", "--ell", "3"], &form.stdout)),
        2
    );
    // tl needs --ell
    assert_eq!(code(&run_stdin(&["hecke", "--op", "tl"], &form.stdout)), 2);
    // ell = p is U_p territory
    assert_eq!(
        code(&run_stdin(&["hecke", "--op", "tl", "--ell", "5"], &form.stdout)),
        2
    );
    // Hecke operators live in diagonal coordinates
    let katz = run_stdin(&["change-coords", "--alpha", "e2/12"], &form.stdout);
    assert_eq!(
        code(&run_stdin(&["hecke", "--op", "tl", "--ell", "2"], &katz.stdout)),
        2
    );
}

#[test]
fn change_coords_round_trip_is_byte_identical() {
    let d = run(&["delta", "--prec-q", "16"]);
    let form = run_stdin(
        &["nabla", "--weight", "k:12", "--splitting", "diagonal"],
        &d.stdout,
    );
    let katz = run_stdin(&["change-coords", "--alpha", "e2/12"], &form.stdout);
    let v = json(&katz);
    assert_eq!(v["payload"]["splitting"], "katz");
    let back = run_stdin(&["change-coords", "--alpha", "-e2/12"], &katz.stdout);
    assert_eq!(back.stdout, form.stdout);

    // moves that leave the named splittings are refused
    assert_eq!(
        code(&run_stdin(&["change-coords", "--alpha", "e2/12"], &katz.stdout)),
        2
    );
    assert_eq!(code(&run_stdin(&["change-coords", "--alpha", "e4"], &katz.stdout)), 2);
}

#[test]
fn specialize_evaluates_the_family_variable() {
    let fam = br#"{"header":{"p":5,"N":6,"M":4,"Q":64,"schema":1},"ring":"family","kind":"qexp","payload":[[7,0,0,0],[0,1,0,0]]}"#;
    let v = json(&run_stdin(&["specialize", "--k", "4"], fam));
    assert_eq!(v["ring"], "zp");
    let u4 = u_for_weight(Profile::default_profile(), 4).unwrap().value();
    assert_eq!(v["payload"][0], 7);
    assert_eq!(v["payload"][1], u4);

    // a scalar object has no family variable left
    let d = run(&["delta", "--prec-q", "16"]);
    assert_eq!(code(&run_stdin(&["specialize", "--k", "4"], &d.stdout)), 2);
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = run(&["verify", "--suite", "ramanujan", "--prec-q", "16"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["kind"], "reports");
    let checks = v["payload"][0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));

    // unknown suite is a usage error
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 2);
    // suites need room for their anchors
    assert_eq!(code(&run(&["verify", "--prec-q", "8"])), 2);
}

#[test]
fn input_profile_wins_over_conflicting_flags() {
    let d = run(&["delta", "--prec-q", "16"]);
    // restating the input profile is fine
    assert_eq!(code(&run_stdin(&["theta", "--prec-q", "16"], &d.stdout)), 0);
    // contradicting it is not
    assert_eq!(code(&run_stdin(&["theta", "--prec-q", "32"], &d.stdout)), 2);
    assert_eq!(code(&run_stdin(&["theta", "--p", "7"], &d.stdout)), 2);
}

#[test]
fn schema_version_gate() {
    let d = run(&["delta", "--prec-q", "16"]);
    let forged = String::from_utf8(d.stdout)
        .unwrap()
        .replace("\"schema\": 1", "\"schema\": 2");
    assert_eq!(code(&run_stdin(&["theta"], forged.as_bytes())), 2);
    assert_eq!(code(&run_stdin(&["theta"], b"not json")), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["delta", "--prec-q"])), 2);
    assert_eq!(code(&run(&["eisenstein"])), 2);
    // missing input file
    assert_eq!(code(&run(&["theta", "--input", "/no/such/file.json"])), 2);
}
