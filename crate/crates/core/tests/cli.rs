use std::process::Command;

use arcmeasure::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("arcmeasure").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).expect("valid JSON line")).collect()
}

#[test]
fn arc_lebesgue_example() {
    let (code, out, _) = invoke(&["arc", "--measure", "lebesgue", "--a", "0.2", "--b", "0.7", "--terms", "10"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert_eq!(r["command"], "arc");
    assert!((r["values"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(r["diagnostics"]["tail_estimate"].as_f64(), Some(0.0));
    assert!(r["oracle"].is_null());
}

#[test]
fn cdf_cantor_with_check() {
    let (code, out, _) = invoke(&["cdf", "--measure", "cantor", "--x", "0.25", "--terms", "100000", "--check"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    let v = r["values"]["value"].as_f64().unwrap();
    let o = r["oracle"].as_f64().unwrap();
    assert!((o - 1.0 / 3.0).abs() < 1e-15);
    assert!((v - o).abs() < 5e-3);
}

#[test]
fn atom_mixture_example() {
    let (code, out, _) = invoke(&[
        "atom",
        "--measure",
        "mix(0.5: dirac(1/3), 0.5: lebesgue)",
        "--x",
        "1/3",
        "--terms",
        "10000",
    ]);
    assert_eq!(code, 0);
    let v = records(&out)[0]["values"]["value"].as_f64().unwrap();
    assert!((v - 0.5).abs() < 0.01);
}

#[test]
fn numbers_have_seventeen_significant_digits() {
    let (_, out, _) = invoke(&["fejer", "--n", "63", "--t", "0.3"]);
    let line = out.lines().next().unwrap();
    let start = line.find("\"value_sum\":").unwrap() + "\"value_sum\":".len();
    let field: String = line[start..].chars().take_while(|c| *c != ',').collect();
    let mantissa = field.split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{field}");
}

#[test]
fn json_round_trips() {
    let (_, out, _) = invoke(&["cdf", "--measure", "density(0.4, 0.1)", "--grid", "8", "--terms", "100", "--check"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 9);
    for r in &recs {
        let text = serde_json::to_string(r).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, r);
        for key in ["command", "inputs", "values", "diagnostics", "oracle"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn csv_has_fixed_header() {
    let (code, out, _) = invoke(&["cantor", "--grid", "5", "--terms", "1000", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("command,inputs.x,inputs.terms,values.partial_sum"));
    let cols = lines[0].split(',').count();
    assert!(lines[1..].iter().all(|l| l.split(',').count() == cols));

    let (_, a, _) = invoke(&["arc", "--measure", "cantor", "--a", "0.1", "--b", "0.2", "--terms", "10", "--format", "csv"]);
    let (_, b, _) = invoke(&["arc", "--measure", "lebesgue", "--a", "0.3", "--b", "0.9", "--terms", "50", "--check", "--format", "csv"]);
    assert_eq!(a.lines().next(), b.lines().next());
}

#[test]
fn output_is_deterministic() {
    let args = ["cdf", "--measure", "atoms(0.2:0.5, 0.7:0.5)", "--grid", "20", "--terms", "5000", "--check"];
    let (_, first, _) = invoke(&args);
    for _ in 0..3 {
        assert_eq!(invoke(&args).1, first);
    }
    let ld = ["localdim", "--measure", "density(0.4, 0.1)", "--x", "0.5", "--rmax", "0.1", "--rmin", "1e-3", "--terms", "1000"];
    assert_eq!(invoke(&ld).1, invoke(&ld).1);
}

#[test]
fn exit_codes() {
    let (code, out, err) = invoke(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"));

    let (code, _, err) = invoke(&["arc", "--measure", "atoms(0.2:0.5)", "--a", "0", "--b", "1", "--terms", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("sum"), "{err}");

    let (code, _, _) = invoke(&["arc", "--measure", "lebesgue", "--a", "0.7", "--b", "0.2", "--terms", "5"]);
    assert_eq!(code, 2);

    let (code, _, err) = invoke(&[
        "arc", "--measure", "dirac(0.3)", "--a", "0.1", "--b", "0.5", "--terms", "10", "--limit-method", "continuous",
    ]);
    assert_eq!(code, 3, "{err}");

    let (code, _, _) = invoke(&["autocorr", "--measure", "dirac(0.3)", "--a", "0", "--b", "0.5", "--terms", "10"]);
    assert_eq!(code, 3);

    let (code, _, err) = invoke(&[
        "localdim", "--measure", "cantor", "--x", "0.5", "--rmax", "0.15", "--rmin", "0.01", "--points", "5", "--terms", "10000",
    ]);
    assert_eq!(code, 4);
    assert!(err.contains("radius"), "{err}");
}

#[test]
fn unsupported_oracle_is_reported_not_fatal() {
    let (code, out, _) = invoke(&["arc", "--measure", "conv(cantor, dirac(0.25))", "--a", "0.1", "--b", "0.4", "--terms", "100", "--check"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert!(r["oracle"].is_null());
    assert!(r["diagnostics"]["oracle_note"].as_str().unwrap().contains("Cantor"));
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("selftest"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = invoke(&["selftest", "--arcs", "5", "--terms", "2000"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.ends_with("PASS")).count(), 6);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_arcmeasure");
    let ok = Command::new(bin).args(["fejer", "--n", "1", "--t", "1/2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let line = String::from_utf8(ok.stdout).unwrap();
    let v: Value = serde_json::from_str(line.trim()).unwrap();
    assert!(v["values"]["value_closed"].as_f64().unwrap().abs() < 1e-15);

    let bad = Command::new(bin).args(["arc", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
