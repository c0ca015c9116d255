use std::process::{Command, Output};

fn rhf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhf"))
        .args(args)
        .env_remove("RHF_TOLERANCE_PROFILE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn zeros_json_counts() {
    let out = rhf(&["zeros", "--lens", "quadratic", "--eta", "0.5+0i"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["counts"]["N"], 4);
    assert_eq!(v["counts"]["N_plus"], 3);
    assert_eq!(v["counts"]["N_minus"], 1);
    assert_eq!(v["zeros"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_input_names_the_field() {
    let out = rhf(&["zeros", "--lens", "mpw", "--eta", "1 + 2i"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--eta"));

    let out = rhf(&["zeros", "--lens", "mpw", "--eta", "0", "--tol-res", "-1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("tol_res"));

    let out = rhf(&["sweep", "--lens", "mpw", "--nx", "5000"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("4096"));

    let out = rhf(&["zeros", "--eta", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn bad_lens_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lens.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = rhf(&["zeros", "--input", path.to_str().unwrap(), "--eta", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--input"));
}

#[test]
fn profile_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rhf"))
        .args(["zeros", "--lens", "quadratic", "--eta", "0"])
        .env("RHF_TOLERANCE_PROFILE", "nonsense")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("nonsense"));
    let out = Command::new(env!("CARGO_BIN_EXE_rhf"))
        .args(["zeros", "--lens", "quadratic", "--eta", "0.5+0i"])
        .env("RHF_TOLERANCE_PROFILE", "fast")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn crossing_ledger() {
    let out = rhf(&["crossing", "--lens", "quadratic", "--path=-10+0i,0+0i"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let events = v["events"].as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["kind"], "fold");
    assert_eq!(events[0]["observed"]["total"], 2);

    let out = rhf(&["crossing", "--lens", "quadratic", "--path=-0.25+0i,1+0i"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn curves_and_caustics_csv() {
    let dir = tempfile::tempdir().unwrap();
    let crit = dir.path().join("crit.csv");
    let caus = dir.path().join("caus.csv");
    assert_eq!(code(&rhf(&["critical", "--lens", "mpw", "--csv", crit.to_str().unwrap()])), 0);
    assert_eq!(code(&rhf(&["caustics", "--lens", "mpw", "--csv", caus.to_str().unwrap()])), 0);
    let crit = std::fs::read_to_string(crit).unwrap();
    let caus = std::fs::read_to_string(caus).unwrap();
    assert!(crit.starts_with("curve_id,"));
    assert!(caus.starts_with("caustic_id,"));
    let cusps = caus.lines().skip(1).filter(|l| l.ends_with(",1")).count();
    assert!(cusps >= 3, "{cusps}");
}

#[test]
fn sweep_levels() {
    let out = rhf(&["sweep", "--lens", "mpw", "--nx", "24", "--ny", "24"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("count levels: {4, 6, 8, 10}"), "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 24 * 24);
}

#[test]
fn verify_exit_codes() {
    let out = rhf(&["verify", "--lens", "quadratic", "--samples", "4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = rhf(&["verify", "--lens", "quadratic", "--suite", "bogus"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn plot_is_deterministic_and_matches_census() {
    let dir = tempfile::tempdir().unwrap();
    let svg = |name: &str| dir.path().join(name);
    let args = |s: &str, j: &str| {
        vec![
            "plot".to_string(),
            "--lens".into(),
            "mpw".into(),
            "--eta".into(),
            "0.1+0.05i".into(),
            "--path=0+0i,0.3+0.1i".into(),
            "--svg".into(),
            svg(s).to_str().unwrap().into(),
            "--json".into(),
            svg(j).to_str().unwrap().into(),
        ]
    };
    for (s, j) in [("a.svg", "a.json"), ("b.svg", "b.json")] {
        let a = args(s, j);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(code(&rhf(&refs)), 0);
    }
    let a = std::fs::read(svg("a.svg")).unwrap();
    let b = std::fs::read(svg("b.svg")).unwrap();
    assert_eq!(a, b);
    assert_eq!(std::fs::read(svg("a.json")).unwrap(), std::fs::read(svg("b.json")).unwrap());
    let text = String::from_utf8(a).unwrap();
    let census: serde_json::Value = serde_json::from_slice(&std::fs::read(svg("a.json")).unwrap()).unwrap();
    let markers = text.matches("class=\"zero ").count();
    assert_eq!(markers, census["zeros"].as_array().unwrap().len());
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&rhf(&["--help"])), 0);
    assert_eq!(code(&rhf(&["--version"])), 0);
}
