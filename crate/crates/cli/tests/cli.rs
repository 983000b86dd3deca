use std::fs;
use std::path::{Path, PathBuf};

use tempfile::TempDir;

use polysolve_cli::{records, run, CountRecord, Origin, SolutionRecord, EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE};
use polysolve_core::fixtures;
use polysolve_core::macaulay::{solve_eigen, EigenConfig};
use polysolve_core::poly::parse_system;
use polysolve_core::solution::matching_distance;
use polysolve_core::Complex;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("polysolve").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn solve_json(file: &Path, method: &str) -> Vec<SolutionRecord> {
    let o = cli(&["solve", s(file), "--method", method, "--json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn points(recs: &[SolutionRecord]) -> Vec<Vec<Complex>> {
    recs.iter().map(|r| r.point()).collect()
}

fn has_point(recs: &[SolutionRecord], target: &[f64], tol: f64) -> bool {
    recs.iter().any(|r| r.coordinates.iter().zip(target).all(|(&[re, im], &t)| (re - t).hypot(im) <= tol))
}

fn count_json(dir: &TempDir, text: &str) -> (CountRecord, serde_json::Value) {
    let file = write(dir, "count.txt", text);
    let o = cli(&["count", s(&file), "--json"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    (serde_json::from_str(&o.stdout).unwrap(), serde_json::from_str(&o.stdout).unwrap())
}

#[test]
fn count_reports() {
    let dir = TempDir::new().unwrap();
    let (_, raw) = count_json(&dir, fixtures::MIXED_SUPPORTS);
    assert_eq!(raw, serde_json::json!({"bezout": 16, "bkk": 12}));
    let (_, raw) = count_json(&dir, fixtures::CURVES7);
    assert_eq!(raw, serde_json::json!({"bezout": 9, "kushnirenko": 6, "bkk": 6}));
    let (rec, _) = count_json(&dir, "vars: x\nx^5 - 3*x^2 + 1\n");
    assert_eq!(rec.bezout, 5);

    let file = write(&dir, "c.txt", fixtures::MIXED_SUPPORTS);
    let o = cli(&["count", s(&file)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("bezout: 16"));
    assert!(o.stdout.contains("bkk: 12"));
}

#[test]
fn curves_solved_by_every_method() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "curves.txt", fixtures::CURVES7);
    let mut sets = Vec::new();
    for method in ["eigen", "homotopy", "groebner-eigen"] {
        let recs = solve_json(&file, method);
        assert_eq!(recs.len(), 7, "{method}");
        assert!(recs.iter().all(|r| r.is_real));
        assert!(has_point(&recs, &[0.0, 0.0], 1e-8));
        assert!(has_point(&recs, &[1.0, 1.0], 1e-8));
        sets.push(points(&recs));
    }
    for other in &sets[1..] {
        assert!(matching_distance(&sets[0], other).unwrap() <= 1e-6);
    }
}

#[test]
fn methods_agree_on_fixtures() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [
        ("four", fixtures::FOUR_POINTS),
        ("robot", fixtures::ROBOT),
        ("mixed", fixtures::MIXED_SUPPORTS),
        ("curves", fixtures::CURVES7),
    ] {
        let file = write(&dir, name, text);
        let eig = points(&solve_json(&file, "eigen"));
        let hom = points(&solve_json(&file, "homotopy"));
        let d = matching_distance(&eig, &hom);
        assert!(d.is_some_and(|d| d <= 1e-6), "{name}: {d:?}");
    }
}

#[test]
fn four_points_by_eigenvalues() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "four.txt", fixtures::FOUR_POINTS);
    let recs = solve_json(&file, "eigen");
    assert_eq!(recs.len(), 4);
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            assert!(has_point(&recs, &[x, y], 1e-10));
        }
    }
    assert!(recs.iter().all(|r| matches!(r.provenance, Origin::Eigen(_))));

    let o = cli(&["solve", s(&file)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.starts_with("4 solutions\n"));
}

#[test]
fn unit_ideal_gives_no_solutions() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "inf.txt", "vars: x\nx\nx - 1\n");
    for method in ["eigen", "groebner-eigen"] {
        assert!(solve_json(&file, method).is_empty(), "{method}");
    }
}

#[test]
fn json_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "curves.txt", fixtures::CURVES7);
    let recs = solve_json(&file, "eigen");
    let direct = solve_eigen(&fixtures::curves7(), &EigenConfig::default()).unwrap();
    assert_eq!(recs, records(&direct));
    let again: Vec<SolutionRecord> = serde_json::from_str(&serde_json::to_string(&recs).unwrap()).unwrap();
    assert_eq!(again, recs);
    for (r, s) in recs.iter().zip(&direct.solutions) {
        assert!(r.point().iter().zip(&s.coordinates).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    }
}

#[test]
fn output_file_and_homotopy_provenance() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "robot.txt", fixtures::ROBOT);
    let out = dir.path().join("out.json");
    let o = cli(&["solve", s(&file), "--method", "homotopy", "--json", "--output", s(&out)]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    assert!(o.stderr.contains("4 paths"));
    let recs: Vec<SolutionRecord> = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| matches!(r.provenance, Origin::Path(_))));
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "vars: x, y\nx^2 + y\nx*y +* 1\n");
    let o = cli(&["solve", s(&bad)]);
    assert_eq!(o.code, EXIT_PARSE);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
    assert!(o.stderr.contains("column"), "{}", o.stderr);

    let o = cli(&["count", s(&dir.path().join("missing.txt"))]);
    assert_eq!(o.code, EXIT_PARSE);

    let o = cli(&["solve", s(&bad), "--method", "sideways"]);
    assert_eq!(o.code, EXIT_PARSE);

    let curve = write(&dir, "curve.txt", "vars: x, y\nx*y - 1\nx*y - 1\n");
    let o = cli(&["solve", s(&curve)]);
    assert_eq!(o.code, EXIT_NUMERICAL, "{}", o.stderr);

    let o = cli(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("lagrange"));
}

#[test]
fn groebner_basis_lines() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "four.txt", fixtures::FOUR_POINTS);
    let o = cli(&["groebner", s(&file), "--order", "grlex"]);
    assert_eq!(o.code, EXIT_OK);
    let text = format!("vars: x, y\n{}", o.stdout);
    let got = parse_system(&text).unwrap().system;
    let expected = parse_system("vars: x, y\ny^2 - 1\nx^2 - 1\n").unwrap().system;
    assert_eq!(got, expected);

    let o = cli(&["groebner", s(&file), "--eliminate", "1", "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<String> = serde_json::from_str(&o.stdout).unwrap();
    let got = parse_system(&format!("vars: x, y\n{}\n", lines.join("\n"))).unwrap().system;
    assert_eq!(got, parse_system("vars: x, y\nx^2 - 1\n").unwrap().system);
}

#[test]
fn lagrange_distance_to_circle() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "opt.txt", "vars: x1, x2\n(x1 - 2)^2 + (x2 - 3)^2\nx1^2 + x2^2 - 1\n");
    let built = dir.path().join("lagrange.txt");
    let o = cli(&["lagrange", s(&file), "--output", s(&built)]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let sys = parse_system(&fs::read_to_string(&built).unwrap()).unwrap().system;
    assert_eq!(sys.vars(), ["x1", "x2", "lambda1"]);
    assert_eq!(sys.polys().len(), 3);

    // Critical points of the distance from (2, 3) on the unit circle lie on
    // the line through the origin and (2, 3): ±(2, 3) / |(2, 3)|.
    let r = 13f64.sqrt();
    for method in ["eigen", "homotopy"] {
        let recs = solve_json(&built, method);
        assert_eq!(recs.len(), 2, "{method}");
        assert!(recs.iter().all(|r| r.is_real));
        for sign in [-1.0, 1.0] {
            let target = [sign * 2.0 / r, sign * 3.0 / r];
            assert!(recs.iter().any(|rec| {
                rec.coordinates[..2].iter().zip(&target).all(|(&[re, im], &t)| (re - t).hypot(im) <= 1e-8)
            }));
        }
    }
}

#[test]
fn lagrange_without_constraints() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "g.txt", "vars: x, y\nx^2 + x*y + y^2 - 3*x\n");
    let o = cli(&["lagrange", s(&file)]);
    assert_eq!(o.code, EXIT_OK);
    let sys = parse_system(&o.stdout).unwrap().system;
    assert_eq!(sys, parse_system("vars: x, y\n2*x + y - 3\nx + 2*y\n").unwrap().system);

    let file = write(&dir, "x2.txt", "vars: x\nx^2\n");
    let o = cli(&["lagrange", s(&file)]);
    let sys = parse_system(&o.stdout).unwrap().system;
    assert_eq!(sys, parse_system("vars: x\n2*x\n").unwrap().system);
    let grad = write(&dir, "grad.txt", &o.stdout);
    let recs = solve_json(&grad, "eigen");
    assert_eq!(recs.len(), 1);
    assert!(has_point(&recs, &[0.0], 1e-12));

    let clash = write(&dir, "clash.txt", "vars: x, lambda1\nx^2 + lambda1^2\nx - lambda1\n");
    let o = cli(&["lagrange", s(&clash)]);
    assert_eq!(o.code, EXIT_PARSE);
    assert!(o.stderr.contains("lambda1"));
}

#[test]
fn macaulay_dump_and_path_trace() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "four.txt", fixtures::FOUR_POINTS);
    let dump = dir.path().join("dump.csv");
    let o = cli(&["solve", s(&file), "--dump-macaulay", s(&dump)]);
    assert_eq!(o.code, EXIT_OK);
    let csv = fs::read_to_string(&dump).unwrap();
    for section in ["# macaulay", "# reduced", "# M_x", "# M_y"] {
        assert!(csv.contains(section), "{section}");
    }

    let o = cli(&["solve", s(&file), "--json", "--dump-macaulay"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.contains(&csv));
    let recs: Vec<SolutionRecord> = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(recs.len(), 4);

    let trace = dir.path().join("trace.csv");
    let o = cli(&["solve", s(&file), "--method", "homotopy", "--trace-paths", s(&trace)]);
    assert_eq!(o.code, EXIT_OK);
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("path,t,re_x,im_x,re_y,im_y,dt"));
    let mut paths: Vec<usize> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    paths.dedup();
    assert_eq!(paths, [0, 1, 2, 3]);
}

#[test]
fn quick_demos_pass() {
    for name in ["curves7", "robot", "wilkinson"] {
        let o = cli(&["demo", name]);
        assert_eq!(o.code, EXIT_OK, "{name}: {}", o.stdout);
        assert!(!o.stdout.contains("FAIL"));
    }
    let o = cli(&["demo", "robot", "--json"]);
    let report: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(report["demo"], "robot");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}
