use hrq_core::fixtures::{f1, f2, f4};
use hrq_core::io::{parse_instance, parse_matching, serialize_instance, serialize_matching};
use hrq_core::random::{random_instance, RandomParams};
use hrq_core::{check_stability, Instance};
use std::path::{Path, PathBuf};
use std::process::Command;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hrq(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hrq"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn inst_file(dir: &TempDir, name: &str, inst: &Instance) -> String {
    write(dir, name, &serialize_instance(inst))
        .to_str()
        .unwrap()
        .to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn f1_has_no_stable_matching_under_every_method() {
    let dir = TempDir::new().unwrap();
    let f = inst_file(&dir, "f1.json", &f1());
    for method in ["q2", "fpt", "brute", "auto", "ilp"] {
        let r = hrq(&["solve", &f, "--method", method]);
        assert_eq!(r.code, 1, "{method}: {}", r.stderr);
        assert!(r.stdout.contains("no stable matching"));
    }
    let r = hrq(&["enumerate", &f]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "[]\n"));
}

#[test]
fn f2_enumerate_and_count_open() {
    let dir = TempDir::new().unwrap();
    let inst = f2();
    let f = inst_file(&dir, "f2.json", &inst);
    let m1 = inst.matching(&[("h3", &["r1", "r2", "r3", "r4"])]).unwrap();
    let m2 = inst
        .matching(&[("h1", &["r1"]), ("h2", &["r2", "r3"])])
        .unwrap();
    let r = hrq(&["enumerate", &f]);
    assert_eq!(r.code, 0);
    let docs: Vec<serde_json::Value> = serde_json::from_str(&r.stdout).unwrap();
    let got: Vec<_> = docs
        .iter()
        .map(|d| parse_matching(&inst, &d.to_string()).unwrap())
        .collect();
    assert_eq!(got.len(), 2);
    assert!(got.contains(&m1) && got.contains(&m2));

    let r = hrq(&["solve", &f, "--count-open", "1"]);
    assert_eq!(
        (r.code, r.stdout.clone()),
        (0, serialize_matching(&inst, &m1))
    );
    let r = hrq(&["solve", &f, "--count-open", "2"]);
    assert_eq!(
        (r.code, r.stdout.clone()),
        (0, serialize_matching(&inst, &m2))
    );
    assert_eq!(hrq(&["solve", &f, "--count-open", "3"]).code, 1);
    let r = hrq(&["solve", &f, "--open", "h1,h2"]);
    assert_eq!(
        (r.code, r.stdout.clone()),
        (0, serialize_matching(&inst, &m2))
    );
    assert_eq!(hrq(&["solve", &f, "--open", "h1"]).code, 1);
    assert_eq!(hrq(&["solve", &f, "--open", "h9"]).code, 2);
    let m = inst.m().to_string();
    assert_eq!(hrq(&["solve", &f, "--count-closed", &m]).code, 1);
}

#[test]
fn f4_trace_contains_rotation() {
    let dir = TempDir::new().unwrap();
    let inst = f4();
    let f = inst_file(&dir, "f4.json", &inst);
    let log = dir.path().join("t.log");
    let r = hrq(&["solve", &f, "--method", "q2", "--trace", s(&log)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let expected = inst
        .matching(&[("h1", &["r3"]), ("h2", &["r1", "r2"])])
        .unwrap();
    assert_eq!(parse_matching(&inst, &r.stdout).unwrap(), expected);
    let trace = std::fs::read_to_string(&log).unwrap();
    assert!(trace.ends_with('\n'));
    let rotation = trace.lines().find(|l| l.starts_with("ROTATION")).unwrap();
    assert!(rotation.contains("r1") && rotation.contains("h1") && rotation.contains("r3"));
    // Tracing is a q2 feature only.
    assert_eq!(
        hrq(&["solve", &f, "--method", "fpt", "--trace", s(&log)]).code,
        2
    );
}

#[test]
fn check_reports_stability() {
    let dir = TempDir::new().unwrap();
    let inst = f2();
    let f = inst_file(&dir, "f2.json", &inst);
    let m1 = inst.matching(&[("h3", &["r1", "r2", "r3", "r4"])]).unwrap();
    let good = write(&dir, "m1.json", &serialize_matching(&inst, &m1));
    let r = hrq(&["check", &f, s(&good)]);
    assert_eq!(r.code, 0);
    let report: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["stable"], true);
    assert_eq!(report["feasible"], true);

    let empty = write(&dir, "empty.json", "[]\n");
    let r = hrq(&["check", &f, s(&empty)]);
    assert_eq!(r.code, 1);
    let report: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["stable"], false);
    assert!(!report["blocked_closed_hospitals"]
        .as_array()
        .unwrap()
        .is_empty());

    let dup = write(
        &dir,
        "dup.json",
        "[{\"resident\": \"r1\", \"hospital\": null},\n {\"resident\": \"r1\", \"hospital\": null}]",
    );
    let r = hrq(&["check", &f, s(&dup)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{ not json");
    assert_eq!(hrq(&["solve", s(&bad)]).code, 2);
    assert_eq!(hrq(&["solve", "/nonexistent/file.json"]).code, 2);
    assert_eq!(hrq(&["frobnicate"]).code, 2);
    // q2 refuses lower quotas above two.
    let g = hrq(&["generate", "sat", "--vars", "3"]);
    let sat = write(&dir, "sat.json", &g.stdout);
    let r = hrq(&["solve", s(&sat), "--method", "q2"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));
    assert_eq!(hrq(&["--help"]).code, 0);
}

#[test]
fn generate_writes_valid_instances() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["counterexample"],
        vec!["sat", "--vars", "3", "--seed", "4"],
        vec![
            "sat",
            "--vars",
            "2",
            "--relaxed",
            "--clauses",
            "1,2;-1,2;1,-2;-1,-2",
        ],
        vec!["mcis", "--demo"],
        vec!["mcis", "--colors", "2", "--per-color", "3", "--degree", "1"],
        vec!["clique", "--demo"],
        vec![
            "clique",
            "--vertices",
            "3",
            "--edges",
            "1-2,2-3,1-3",
            "--k",
            "3",
        ],
        vec!["smti", "--men", "2", "--women", "3", "--seed", "1"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let out = dir.path().join(format!("g{i}.json"));
        let mut full = vec!["generate"];
        full.extend(args.iter().copied());
        full.extend(["-o", s(&out)]);
        let r = hrq(&full);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        let text = std::fs::read_to_string(&out).unwrap();
        let inst = parse_instance(&text).unwrap();
        assert_eq!(serialize_instance(&inst), text);
    }
    let r = hrq(&["generate", "counterexample"]);
    assert_eq!(parse_instance(&r.stdout).unwrap(), f1());
    assert_eq!(hrq(&["generate", "sat", "--vars", "4"]).code, 2);
    assert_eq!(
        hrq(&["generate", "clique", "--vertices", "2", "--edges", "1-1"]).code,
        2
    );
}

#[test]
fn solve_generated_sat_instances() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("unsat.json");
    hrq(&[
        "generate",
        "sat",
        "--vars",
        "2",
        "--relaxed",
        "--clauses",
        "1,2;-1,2;1,-2;-1,-2",
        "-o",
        s(&out),
    ]);
    assert_eq!(hrq(&["solve", s(&out)]).code, 1);
    let out = dir.path().join("sat.json");
    hrq(&["generate", "sat", "--vars", "3", "-o", s(&out)]);
    let r = hrq(&["solve", s(&out)]);
    assert_eq!(r.code, 0);
    let inst = parse_instance(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let m = parse_matching(&inst, &r.stdout).unwrap();
    assert!(check_stability(&inst, &m).unwrap().stable);
}

#[test]
fn export_lp_models() {
    let dir = TempDir::new().unwrap();
    let ha = inst_file(&dir, "ha.json", &f1().as_house_allocation());
    let out = dir.path().join("m.lp");
    let r = hrq(&["export-lp", &ha, "-o", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lp = std::fs::read_to_string(&out).unwrap();
    assert!(lp.starts_with("Minimize\n") && lp.ends_with("End\n"));
    assert!(lp.contains("nobc_h0"));
    // The ranked F4 needs a guess.
    let f = inst_file(&dir, "f4.json", &f4());
    assert_eq!(hrq(&["export-lp", &f]).code, 2);
    let r = hrq(&["export-lp", &f, "--guess", "h1:r3,h2:r2!"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("Subject To"));
    assert_eq!(hrq(&["export-lp", &f, "--guess", "h1"]).code, 2);
}

/// `auto` never surfaces a wrong-variant error: every outcome is 0 or 1.
#[test]
fn auto_method_always_decides() {
    let dir = TempDir::new().unwrap();
    let families = [
        RandomParams::strict(6, 4, 2),
        RandomParams::strict(6, 4, 3),
        RandomParams::strict(6, 3, 3).with_ties(0.4),
        RandomParams::strict(6, 3, 2).with_ties(0.4).no_upper(),
        RandomParams::strict(6, 3, 3).house_allocation(),
    ];
    for (i, params) in families.iter().enumerate() {
        for seed in 0..8 {
            let inst = random_instance(seed, params);
            let f = inst_file(&dir, &format!("a{i}_{seed}.json"), &inst);
            let r = hrq(&["solve", &f]);
            assert!(
                r.code == 0 || r.code == 1,
                "family {i} seed {seed}: {}",
                r.stderr
            );
            let seq = hrq(&["--sequential", "solve", &f]);
            assert_eq!(seq.code, r.code);
            assert_eq!(seq.stdout, r.stdout);
        }
    }
}
