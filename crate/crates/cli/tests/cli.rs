use std::path::Path;
use std::process::{Command, Output};

fn clari(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clari"))
        .args(args)
        .env_remove("CLARI_STDLIB")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn countermodel_for_double_negation_elimination() {
    let o = clari(&["countermodel", "-e", "nn a -> a", "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("countermodel for "), "{out}");
    let json: serde_json::Value =
        serde_json::from_str(out.lines().last().unwrap()).expect("last line is JSON");
    assert_eq!(json["size"], 3);
    assert_eq!(json["valuation"]["a"], 1);
    assert_eq!(json["leq"], serde_json::json!([[1, 1, 1], [0, 1, 1], [0, 0, 1]]));
    assert_ne!(json["value"], 2);
}

#[test]
fn countermodel_search_can_come_up_empty() {
    let o = clari(&["countermodel", "-e", "neg (and (neg a) (neg (neg a)))", "--max-size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("no countermodel of size at most 3"), "{}", stdout(&o));
}

#[test]
fn countermodel_usage_errors() {
    let o = clari(&["countermodel", "-e", "a", "--max-size", "7"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("E-USAGE"));
    let o = clari(&["countermodel", "-e", "Pi (n : Nat), bracket (eqN n n)"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn stdlib_tier_one_reports_counts() {
    let o = clari(&["stdlib", "--tier", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    let n: usize = last.split_whitespace().next().unwrap().parse().unwrap();
    assert!(n >= 25);
    assert_eq!(last, format!("{n} definitions checked, 0 failures"));
    assert!(!out.contains("unproven"));
}

#[test]
fn stdlib_tier_two_flags_statements() {
    let o = clari(&["stdlib", "--tier", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("unproven: WPVlaw3"));
    assert!(out.contains("unproven: gcdExists"));
    assert!(!out.contains("unproven: WPVlaw1"));
    let o = clari(&["stdlib", "--tier", "3"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn check_reports_mismatch_with_normal_forms() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "broken.ct", "def ok : Bool := true.\ndef bad : Nat := notB true.\n");
    let o = clari(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.matches("error[").count(), 1, "{err}");
    assert!(err.contains("broken.ct:2:18: error[E-MISMATCH]"), "{err}");
    assert!(err.contains("expected: Nat"), "{err}");
    assert!(err.contains("actual:   Bool"), "{err}");
}

#[test]
fn check_runs_commands_and_imports() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "lib.ct", "def two : Nat := succ (succ zero).\n");
    let f = write(
        dir.path(),
        "main.ct",
        "import \"lib.ct\".\ntheorem t : bracket (eqN two 2) := unit.\n#normalize add two two.\n#stable Pi (n : Nat), bracket (eqN n two).\n",
    );
    let o = clari(&["check", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("defined two"));
    assert!(out.contains("proved t"));
    assert!(out.contains("\nsucc (succ (succ (succ zero)))\n") || out.contains("\n4\n"), "{out}");
    assert!(out.contains("stable: "));
    assert!(out.trim_end().ends_with("ok: 1 definitions, 1 theorems, 0 statement-only"), "{out}");
}

#[test]
fn user_scripts_may_state_without_proof() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.ct", "statement s : Void.\n");
    let o = clari(&["check", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("stated s (statement-only, unproven)"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let parse = write(dir.path(), "p.ct", "def x : Bool := .\n");
    assert_eq!(clari(&["check", &parse]).status.code(), Some(2));
    assert_eq!(clari(&["normalize", "-e", "fun (x : "]).status.code(), Some(2));
    assert_eq!(clari(&["--fuel", "10", "normalize", "-e", "mul 10 10"]).status.code(), Some(3));
    assert_eq!(clari(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(clari(&["check", "/nonexistent/file.ct"]).status.code(), Some(4));
    assert_eq!(clari(&["stable", "-e", "Sum(Unit, Void)"]).status.code(), Some(1));
    assert_eq!(clari(&["normalize", "-e", "true zero"]).status.code(), Some(1));
    assert_eq!(clari(&["--help"]).status.code(), Some(0));
    assert_eq!(clari(&["--version"]).status.code(), Some(0));
}

#[test]
fn normalize_and_stable_subcommands() {
    let o = clari(&["normalize", "-e", "eqN 3 3"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = clari(&["normalize", "-e", "eqN 3 2"]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = clari(&["--no-stdlib", "normalize", "-e", "elimB (b. Bool, true, false, true)"]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = clari(&["stable", "-e", "Pi (n : Nat), bracket (eqN n zero)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("certificate: ")), "{out}");
    let o = clari(&["stable", "-e", "Sig (n : Nat), bracket (eqN n zero)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E-NOTSTABLE"));
}

#[test]
fn no_stdlib_hides_library_names() {
    let o = clari(&["--no-stdlib", "normalize", "-e", "neg Unit"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E-SCOPE"), "{}", stderr(&o));
}

#[test]
fn json_diagnostics_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.ct", "def bad : Bool := zero.\n");
    let o = clari(&["--json", "check", &f]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["code"], "E-MISMATCH");
    assert_eq!(v["startLine"], 1);
    assert_eq!(v["startCol"], 19);
    assert_eq!(v["expected"], "Bool");
    assert_eq!(v["actual"], "Nat");
    for key in ["message", "file", "endLine", "endCol"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(serde_json::from_str::<serde_json::Value>(&v.to_string()).unwrap(), v);

    let o = clari(&["--json", "normalize", "-e", "(("]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(v["code"], "E-PARSE");
}

#[test]
fn output_is_deterministic() {
    let args = ["countermodel", "-e", "Sum(a, neg a)", "--max-size", "4"];
    let a = clari(&args);
    let b = clari(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = clari(&["stable", "-e", "Pi (b : Bool), dn (bracket b)"]);
    let b = clari(&["stable", "-e", "Pi (b : Bool), dn (bracket b)"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stdlib_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_clari"))
        .args(["stdlib", "--tier", "1"])
        .env("CLARI_STDLIB", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4), "missing files are an I/O error");
    assert!(stderr(&o).contains("E-IO"));
}
