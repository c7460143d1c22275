use std::io::Write;
use std::process::{Command, Stdio};

use trisphere::catalog;
use trisphere::collapse::verify_certificate;
use trisphere::io::{collapse_certificate_from_node, parse_facets, parse_report, sphere_certificate_from_node, write_facets};
use trisphere::SimplicialComplex;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_trisphere"))
        .args(args)
        .env_remove("TRISPHERE_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn trisphere");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn field(report: &str, path: &[&str]) -> String {
    let mut node = parse_report(report).unwrap();
    for key in path {
        node = node.get(key).unwrap_or_else(|| panic!("missing {key}")).clone();
    }
    node.as_str().unwrap().to_string()
}

#[test]
fn certify_exported_sigma2() {
    let export = run(&["catalog", "--name", "Sigma2"], None);
    assert_eq!(export.code, 0);
    let r = run(&["certify", "-"], Some(&export.stdout));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(field(&r.stdout, &["certificate", "verdict"]), "combinatorial-sphere");

    let doc = parse_report(&r.stdout).unwrap();
    let cert = sphere_certificate_from_node(doc.get("certificate").unwrap()).unwrap();
    let k = SimplicialComplex::from_encoding(doc.get("input").unwrap().as_str().unwrap()).unwrap();
    assert!(cert.verify(&k));
}

#[test]
fn dunce_hat_not_collapsible() {
    let r = run(&["collapse", "--exhaustive", "DunceHat8"], None);
    assert_eq!(r.code, 2);
    assert_eq!(field(&r.stdout, &["verdict", "status"]), "not-collapsible-exhausted");
}

#[test]
fn collapse_certificate_from_report_replays() {
    let r = run(&["collapse", "Delta3_4"], None);
    assert_eq!(r.code, 0);
    let doc = parse_report(&r.stdout).unwrap();
    let cert = collapse_certificate_from_node(doc.get("verdict").unwrap().get("certificate").unwrap()).unwrap();
    assert!(verify_certificate(&catalog::get("Delta3_4").unwrap().complex, &cert));
}

#[test]
fn tiny_budget_is_inconclusive() {
    let r = run(&["collapse", "--budget", "1", "Delta3_4"], None);
    assert_eq!(r.code, 3);
    assert_eq!(field(&r.stdout, &["verdict", "status"]), "inconclusive-budget");
}

#[test]
fn census_closed6() {
    let r = run(&["census", "--spec", "closed6"], None);
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, &["census", "classes"]), "5");
    assert_eq!(field(&r.stdout, &["catalog_match", "perfect"]), "true");
}

#[test]
fn sampling_is_reproducible() {
    let args = ["census", "--samples", "300", "--seed", "7"];
    let a = run(&args, None);
    let b = run(&["--threads", "1", "census", "--samples", "300", "--seed", "7"], None);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(field(&a.stdout, &["seed"]), "7");
}

#[test]
fn rp2_export_round_trip() {
    let r = run(&["catalog", "--name", "RP2_6"], None);
    let parsed = parse_facets(&r.stdout).unwrap();
    assert_eq!(write_facets(&parsed.complex), r.stdout);
    assert_eq!(parsed.complex, catalog::rp2_6());
}

#[test]
fn negative_controls() {
    let r = run(&["certify", "RP2_6"], None);
    assert_eq!(r.code, 2);
    assert_eq!(field(&r.stdout, &["certificate", "reason"]), "not a Z2-homology sphere");
    let u = run(&["certify", "Upsilon1"], None);
    assert_eq!(u.code, 2);
    assert_eq!(field(&u.stdout, &["certificate", "reason"]), "not a combinatorial manifold");
}

#[test]
fn info_from_stdin() {
    let r = run(&["info", "-"], Some("1 2 3\n1 2 4\n"));
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, &["f_vector"]), "(4, 5, 2)");
    assert_eq!(field(&r.stdout, &["weak_pseudomanifold_with_boundary"]), "true");
}

#[test]
fn absorbed_facet_warns() {
    let r = run(&["homology", "-"], Some("1 2\n1 2 3\n"));
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"));
    assert_eq!(field(&r.stdout, &["input"]), "1,2,3");
}

#[test]
fn apply_move_on_rp2() {
    let r = run(&["apply-move", "RP2_6", "--a-set", "1,2,5,6"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(field(&r.stdout, &["move", "class"]), "singular-bs1");
    let result = SimplicialComplex::from_encoding(&field(&r.stdout, &["result"])).unwrap();
    assert_eq!(result, catalog::r_complex());
}

#[test]
fn inadmissible_move_is_an_error() {
    let r = run(&["apply-move", "octahedron", "--a-set", "1,2"], None);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error:"));
}

#[test]
fn proper_moves_listed() {
    let r = run(&["moves", "--filter", "proper", "Sigma2"], None);
    assert_eq!(r.code, 0);
    let doc = parse_report(&r.stdout).unwrap();
    let moves = doc.get("moves").unwrap().as_list().unwrap();
    assert_eq!(moves.len().to_string(), field(&r.stdout, &["count"]));
    assert!(moves.iter().any(|m| m.get("a_set").unwrap().as_str() == Some("2,3,4,6")));
}

#[test]
fn verify_suite_passes() {
    let r = run(&["verify", "--pairs", "10"], None);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(field(&r.stdout, &["passed"]), "true");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["collapse", "--frobnicate", "Delta3_4"], None).code, 1);
    assert_eq!(run(&["frobnicate"], None).code, 1);
    assert_eq!(run(&[], None).code, 1);
    assert_eq!(run(&["info", "no-such-file.txt"], None).code, 1);
    assert_eq!(run(&["--help"], None).code, 0);
}

#[test]
fn catalog_listing() {
    let r = run(&["catalog"], None);
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.stdout, &["entries", "DunceHat8"]), "(8, 24, 17)");
}
