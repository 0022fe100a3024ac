use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pvk_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pvk"));
    cmd.current_dir(dir).args(args).env_remove("PVK_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn pvk");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf8"),
        stderr: String::from_utf8(out.stderr).expect("utf8"),
    }
}

struct Files(TempDir);

impl Files {
    fn new(files: &[(&str, &str)]) -> Self {
        let dir = tempfile::tempdir().expect("tempdir");
        for (name, content) in files {
            std::fs::write(dir.path().join(name), content).expect("write");
        }
        Files(dir)
    }

    fn run(&self, args: &[&str]) -> Run {
        pvk_in(self.0.path(), args, &[])
    }

    fn path(&self) -> PathBuf {
        self.0.path().to_path_buf()
    }
}

const S2: &str = "space S2\npoint bot\npoint top\nle bot top\n";
const D2: &str = "point a; point b\n";
const DIAMOND: &str = "point 0; point a; point b; point 1\nle 0 a; le 0 b; le a 1; le b 1\n";

#[test]
fn integrate_running_example() {
    let f = Files::new(&[
        ("s2.poset", S2),
        ("v.val", "1/2 @ bot\n1/2 @ top\n"),
        ("h.fun", "bot -> 1\ntop -> 3\n"),
    ]);
    let r = f.run(&["integrate", "--space", "s2.poset", "--valuation", "v.val", "--function", "h.fun"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "2\n"), "{}", r.stderr);
}

#[test]
fn integrate_infinite_value() {
    let f = Files::new(&[
        ("s2.poset", S2),
        ("v.val", "1/2 @ top\n"),
        ("h.fun", "bot -> 0\ntop -> inf\n"),
    ]);
    let r = f.run(&["integrate", "--space", "s2.poset", "--valuation", "v.val", "--function", "h.fun"]);
    assert_eq!(r.stdout, "inf\n");
}

#[test]
fn barycentre_of_diamond() {
    let f = Files::new(&[("m.poset", DIAMOND), ("v.val", "1/2 @ a\n1/2 @ b\n")]);
    let r = f.run(&["barycentre", "--lattice", "m.poset", "--valuation", "v.val"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "1\n"), "{}", r.stderr);
}

#[test]
fn eval_program() {
    let f = Files::new(&[("prog.pk", "space D {a b} mix 1/2: dirac a, 1/2: dirac b\n")]);
    let r = f.run(&["eval", "prog.pk"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "1/2 @ a\n1/2 @ b\n"));
}

#[test]
fn eval_equivalence() {
    let f = Files::new(&[
        ("p.pk", "space D {a b} bind x <- mix 1/3: dirac a, 1/3: dirac b; dirac x\n"),
        ("q.pk", "space D {a b} mix 1/3: dirac a, 1/3: dirac b\n"),
        ("r.pk", "space D {a b} dirac a\n"),
    ]);
    assert_eq!(f.run(&["eval", "p.pk", "--equiv", "q.pk"]).stdout, "equivalent\n");
    assert_eq!(f.run(&["eval", "p.pk", "--equiv", "r.pk"]).code, 1);
}

#[test]
fn opens_of_chain() {
    let f = Files::new(&[("s2.poset", S2)]);
    assert_eq!(f.run(&["opens", "--space", "s2.poset"]).stdout, "{}\n{top}\n{bot,top}\n");
}

#[test]
fn decompose_table() {
    let f = Files::new(&[("s2.poset", S2), ("t.vtab", "{} = 0\n{top} = 1/2\n{bot,top} = 1\n")]);
    let r = f.run(&["decompose", "--space", "s2.poset", "--table", "t.vtab"]);
    assert_eq!(r.stdout, "1/2 @ bot\n1/2 @ top\n");
}

#[test]
fn validate_reports_modularity() {
    let f = Files::new(&[("d2.poset", D2), ("t.vtab", "{} = 0\n{a} = 0\n{b} = 0\n{a,b} = 1\n")]);
    let r = f.run(&["validate", "--space", "d2.poset", "--table", "t.vtab"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("modularity violation"), "{}", r.stderr);
    let r = f.run(&["--inject-fault", "modularity", "validate", "--space", "d2.poset", "--table", "t.vtab"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "valid\n"));
}

#[test]
fn pushforward_example() {
    let f = Files::new(&[
        ("d2.poset", D2),
        ("s2.poset", S2),
        ("f.map", "a -> top\nb -> bot\n"),
        ("nu.val", "1/3 @ a\n1/2 @ b\n"),
    ]);
    let r = f.run(&[
        "pushforward", "--source", "d2.poset", "--target", "s2.poset", "--map", "f.map", "--valuation", "nu.val",
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "1/2 @ bot\n1/3 @ top\n"), "{}", r.stderr);
}

#[test]
fn pushforward_rejects_non_monotone_map() {
    let f = Files::new(&[("s2.poset", S2), ("f.map", "bot -> top\ntop -> bot\n"), ("nu.val", "1 @ bot\n")]);
    let r = f.run(&[
        "pushforward", "--source", "s2.poset", "--target", "s2.poset", "--map", "f.map", "--valuation", "nu.val",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not monotone"), "{}", r.stderr);
}

#[test]
fn bind_running_kernel() {
    let f = Files::new(&[
        ("s2.poset", S2),
        ("d2.poset", D2),
        ("f.ker", "point bot => 1/2 @ b\npoint top => 1/2 @ a, 1/2 @ b\n"),
        ("mu.val", "1/2 @ bot\n1/2 @ top\n"),
        ("g.ker", "point a => 1 @ top\npoint b => 1/2 @ bot\n"),
    ]);
    let base = ["bind", "--source", "s2.poset", "--target", "d2.poset", "--kernel", "f.ker", "--valuation", "mu.val"];
    let r = f.run(&[&base[..], &["--check"]].concat());
    assert_eq!((r.code, r.stdout.as_str()), (0, "1/4 @ a\n1/2 @ b\n"), "{}", r.stderr);
    // g†(1/4 a + 1/2 b) = 1/4 top + 1/4 bot
    let r = f.run(&[&base[..], &["--then", "g.ker", "--then-target", "s2.poset", "--check"]].concat());
    assert_eq!((r.code, r.stdout.as_str()), (0, "1/4 @ bot\n1/4 @ top\n"), "{}", r.stderr);
}

#[test]
fn bind_rejects_non_monotone_kernel() {
    let f = Files::new(&[
        ("s2.poset", S2),
        ("f.ker", "point bot => 1 @ top\npoint top => 1 @ bot\n"),
        ("mu.val", "1 @ bot\n"),
    ]);
    let r = f.run(&["bind", "--source", "s2.poset", "--target", "s2.poset", "--kernel", "f.ker", "--valuation", "mu.val"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
}

#[test]
fn dual_of_diamond() {
    let f = Files::new(&[("m.poset", DIAMOND)]);
    let r = f.run(&["dual", "--lattice", "m.poset"]);
    let want = "0: 0=0 a=inf b=inf 1=inf\n\
                a: 0=0 a=0 b=inf 1=inf\n\
                b: 0=0 a=inf b=0 1=inf\n\
                1: 0=0 a=0 b=0 1=0\n";
    assert_eq!(r.stdout, want);
}

#[test]
fn separate_on_diamond() {
    let f = Files::new(&[("m.poset", DIAMOND)]);
    let r = f.run(&["separate", "--lattice", "m.poset", "--convex", "0,a", "--open", "b,1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "x0 = a\n0 -> 0\na -> 0\nb -> inf\n1 -> inf\n");
    let r = f.run(&["separate", "--lattice", "m.poset", "--convex", "0,a", "--open", "a,1"]);
    assert_eq!(r.code, 1);
}

#[test]
fn parse_errors_carry_position_and_exit_2() {
    let f = Files::new(&[("bad.pk", "space D {a b}\nmix 1/2: dirac a, 1/2: dirac c\n"), ("s2.poset", S2)]);
    let r = f.run(&["eval", "bad.pk"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.stderr, "error: bad.pk:2:30: unknown point 'c'\n");
    let r = f.run(&["integrate", "--space", "missing.poset", "--valuation", "v.val", "--function", "h.fun"]);
    assert_eq!(r.code, 2);
    let r = f.run(&["opens"]);
    assert_eq!(r.code, 2);
}

#[test]
fn non_lattice_is_a_domain_error() {
    let f = Files::new(&[("d2.poset", D2), ("v.val", "1 @ a\n")]);
    let r = f.run(&["barycentre", "--lattice", "d2.poset", "--valuation", "v.val"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
}

#[test]
fn check_reports_are_deterministic() {
    let f = Files::new(&[]);
    let args = ["check", "--suite", "integral", "--max-size", "2", "--trials", "30", "--seed", "11"];
    let a = f.run(&args);
    let b = f.run(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("pvk check suite=integral max-size=2 trials=30 seed=11 prng=ChaCha8\n"));
    let c = pvk_in(&f.path(), &["check", "--suite", "integral", "--max-size", "2", "--trials", "30"], &[("PVK_SEED", "11")]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn json_report_has_one_record_per_law() {
    let f = Files::new(&[]);
    let r = f.run(&["check", "--suite", "topology", "--max-size", "2", "--format", "json"]);
    assert_eq!(r.code, 0);
    let recs: Vec<serde_json::Value> = r.stdout.lines().map(|l| serde_json::from_str(l).expect("json")).collect();
    assert_eq!(recs[0]["record"], "header");
    assert_eq!(recs[0]["prng"], "ChaCha8");
    let laws = recs.iter().filter(|v| v["record"] == "law").count();
    assert_eq!(recs.last().expect("summary")["laws"], laws);
    assert!(recs.iter().filter(|v| v["record"] == "law").all(|v| v["ok"] == true));
}

#[test]
fn injected_fault_is_caught_and_replayable() {
    let f = Files::new(&[]);
    let r = f.run(&["--inject-fault", "modularity", "check", "--suite", "valuation", "--max-size", "2", "--out", "cx"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL valuation/validator-rejects-non-modular"), "{}", r.stdout);
    let dir = f.path().join("cx/valuation-validator-rejects-non-modular");
    let replay = ["validate", "--space", "s.poset", "--table", "t.vtab"];
    let faulty = pvk_in(&dir, &[&["--inject-fault", "modularity"][..], &replay[..]].concat(), &[]);
    assert_eq!(faulty.stdout, "valid\n");
    let honest = pvk_in(&dir, &replay, &[]);
    assert_eq!(honest.code, 1);
}

#[test]
fn every_suite_passes_at_small_size() {
    let f = Files::new(&[]);
    let r = f.run(&["check", "--max-size", "2", "--trials", "40"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("lang/associativity"));
}
