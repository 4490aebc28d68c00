use std::path::PathBuf;
use std::process::{Command, Output};

use alexstrat::fox::{AlexanderMatrix, AlexanderMatrixJson};
use alexstrat::Presentation;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.fp"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alexstrat"))
        .args(args)
        .env_remove("ALEXSTRAT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn matrix_prints_the_trefoil_column() {
    let o = run(&["matrix", fixture("trefoil").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "2 x 1 Alexander matrix\nx: 1 - t_x + t_x*t_y\ny: -t_x*t_y^-1 + t_x - t_x^2\n"
    );
    let q = run(&["matrix", fixture("trefoil").to_str().unwrap(), "--quotient"]);
    assert!(stdout(&q).contains("x: 1 - t + t^2"));
}

#[test]
fn matrix_json_round_trips() {
    for name in ["trefoil", "free2", "surface2", "conjugate_pencil_g3"] {
        let path = fixture(name);
        let o = run(&["matrix", path.to_str().unwrap(), "--json"]);
        assert!(o.status.success(), "{name}");
        let parsed: AlexanderMatrixJson = serde_json::from_str(&stdout(&o)).unwrap();
        let p: Presentation = std::fs::read_to_string(&path).unwrap().parse().unwrap();
        let m = AlexanderMatrix::new(&p);
        assert_eq!(parsed, m.to_json(), "{name}");
        assert_eq!(AlexanderMatrix::entries_from_json(&parsed).unwrap(), m.rows(), "{name}");
    }
}

#[test]
fn betti_reports_both_paths() {
    let t = fixture("trefoil");
    let o = run(&["betti", t.to_str().unwrap(), "--group", "6", "--images", "x:1;y:1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "b1 = 3 (formula) / 3 (oracle)\n");
    let o = run(&["betti", t.to_str().unwrap(), "--group", "5", "--images", "x:1;y:1"]);
    assert_eq!(stdout(&o), "b1 = 1 (formula) / 1 (oracle)\n");
    let o = run(&[
        "betti",
        "--presentation",
        "gens: x, y; rels: x y x^-1 y^-1",
        "--group",
        "2,2",
        "--images",
        "x:1,0;y:0,1",
    ]);
    assert_eq!(stdout(&o), "b1 = 2 (formula) / 2 (oracle)\n");
}

#[test]
fn betti_rejects_bad_epimorphisms() {
    let t = fixture("trefoil");
    let o = run(&["betti", t.to_str().unwrap(), "--group", "6", "--images", "x:1;y:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a homomorphism"));
    let o = run(&["betti", t.to_str().unwrap(), "--group", "6", "--images", "x:2;y:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not surjective"));
}

#[test]
fn torsion_scan_lists_sorted_characters() {
    let t = fixture("trefoil");
    let o = run(&["torsion-scan", t.to_str().unwrap(), "--stratum", "1", "--order", "6"]);
    assert_eq!(stdout(&o), "N=6,a=1,1\nN=6,a=5,5\n");
    let o = run(&["torsion-scan", t.to_str().unwrap(), "--stratum", "1", "--order", "6", "--jumping"]);
    assert_eq!(stdout(&o), "N=1,a=0,0 (trivial)\nN=6,a=1,1\nN=6,a=5,5\n");
    let o = run(&["torsion-scan", t.to_str().unwrap(), "--stratum", "1", "--order", "5"]);
    assert_eq!(stdout(&o), "");
}

#[test]
fn strata_at_a_character() {
    let t = fixture("trefoil");
    let o = run(&["strata", t.to_str().unwrap(), "--at", "N=6,a=1,1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 0);
    assert_eq!(v["depth"], 1);
    assert_eq!(v["character"]["modulus"], 6);
    let o = run(&["strata", t.to_str().unwrap(), "--at", "N=6,a=1,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kahler_check_exit_codes() {
    let o = run(&["kahler-check", fixture("conjugate_pencil_g3").to_str().unwrap(), "--max-degree", "2", "--max-order", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("status = OBSTRUCTED (within bounds)\n"));
    for name in ["trefoil", "surface1", "surface2", "surface3"] {
        let o = run(&["kahler-check", fixture(name).to_str().unwrap(), "--json"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["status"], "CONSISTENT", "{name}");
    }
}

#[test]
fn derive_and_abelianization() {
    let o = run(&["derive", fixture("trefoil").to_str().unwrap(), "--word", "x y^-1"]);
    assert_eq!(stdout(&o), "D_x(x y^-1) = 1\nD_y(x y^-1) = -t_x*t_y^-1\n");
    let o = run(&["abelianization", "-p", "gens: a, b; rels: a^2 b^4; a^6"]);
    // Relation matrix [[2, 4], [6, 0]]: entry gcd 2, |det| 24.
    assert_eq!(stdout(&o), "H1 = Z/2 + Z/12\nbetti = 0\ntorsion = [2, 12]\n");
    let o = run(&["abelianization", "-p", "gens: a, b; rels: a^2"]);
    assert_eq!(stdout(&o), "H1 = Z + Z/2\nbetti = 1\ntorsion = [2]\n");
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["matrix"]).status.code(), Some(1));
    let o = run(&["matrix", "-p", "gens: x; rels: x q"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 18"));
    assert_eq!(run(&["matrix", "/nonexistent.fp"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let path = fixture("f2xf2");
    let args = ["torsion-scan", path.to_str().unwrap(), "--stratum", "1", "--order", "4", "--json"];
    let base = stdout(&run(&args));
    assert!(!base.is_empty());
    for threads in ["1", "3"] {
        let o = Command::new(env!("CARGO_BIN_EXE_alexstrat"))
            .args(args)
            .env("ALEXSTRAT_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(stdout(&o), base);
    }
    assert_eq!(stdout(&run(&args)), base);
}
