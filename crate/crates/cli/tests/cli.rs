use std::fs;
use std::path::Path;
use std::process::Command;

const BASE: &str = r#"seed = 3

[params]
epsilon = 1.0
a = 1.0
b = 1.0
beta = 1.0

[domain]
length = 1.0
horizon = 0.5

[grid]
nx = 40
nt = 200

[problem]
bc = "dirichlet"
initial = { kind = "sine", amplitude = 1.0, wavenumber = 3.141592653589793 }

[sample]
x = [0.0, 0.25, 0.5]
t = [0.1, 1.0]
"#;

fn run(dir: &Path, config: &str, args: &[&str]) -> (i32, String) {
    let cfg = dir.join("scenario.toml");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_memdiff"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .env_remove("MEMDIFF_OUT_DIR")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

#[test]
fn verify_kernel_passes_on_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), BASE, &["verify", "kernel"]);
    assert_eq!(code, 0, "{err}");
    let lines = data_lines(&dir.path().join("out/verify_kernel.csv"));
    assert_eq!(lines[0], "report,name,t,x,lhs,rhs,margin,tolerance,status");
    assert!(lines.len() > 3);
    assert!(lines[1..]
        .iter()
        .all(|l| l.ends_with(",pass") || l.ends_with(",skipped")));
    let jsonl = fs::read_to_string(dir.path().join("out/verify_kernel.jsonl")).unwrap();
    let first: serde_json::Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
    assert_eq!(first["subcommand"], "verify kernel");
}

#[test]
fn negative_epsilon_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), &BASE.replace("epsilon = 1.0", "epsilon = -1.0"), &["solve"]);
    assert_eq!(code, 1);
    assert!(err.contains("epsilon"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_key_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(dir.path(), &BASE.replace("[grid]", "[grid]\nspeed = 2"), &["solve"]);
    assert_eq!(code, 1);
    assert!(!dir.path().join("out").exists());
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), BASE, &["compare"]);
    assert_eq!(code, 0, "{err}");
    let strict = format!("{BASE}\n[verify]\ntolerance = 1e-9\n");
    let (code, _) = run(dir.path(), &strict, &["compare"]);
    assert_eq!(code, 3);
    let lines = data_lines(&dir.path().join("out/compare_report.csv"));
    assert!(lines
        .iter()
        .any(|l| l.starts_with("green vs oracle,sup_relative") && l.ends_with(",fail")));
}

#[test]
fn non_convergence_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = BASE.replace("nt = 200", "nt = 200\nmax_iter = 1").replace(
        "[sample]",
        "source = { kind = \"polynomial\", coefficients = [0.0, 0.5] }\n\n[sample]",
    );
    let (code, err) = run(dir.path(), &cfg, &["solve"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn csv_is_deterministic_with_header_and_lf() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(dir.path(), BASE, &["kernel"]);
    assert_eq!(code, 0);
    let first = fs::read(dir.path().join("out/kernel.csv")).unwrap();
    let (code, _) = run(dir.path(), BASE, &["kernel"]);
    assert_eq!(code, 0);
    let second = fs::read(dir.path().join("out/kernel.csv")).unwrap();
    assert_eq!(first, second);

    let text = String::from_utf8(first).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.starts_with("# memdiff "));
    assert!(text.contains("# epsilon = 1.0"));
    let lines = data_lines(&dir.path().join("out/kernel.csv"));
    assert_eq!(lines[0], "x,t,K0,K1,K2");
    assert_eq!(lines.len(), 1 + 6);
    // 17 significant digits in scientific notation.
    let cell = lines[1].split(',').nth(2).unwrap();
    let mantissa = cell.split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17);
}

#[test]
fn solve_writes_field_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), BASE, &["solve"]);
    assert_eq!(code, 0, "{err}");
    let lines = data_lines(&dir.path().join("out/solve_field.csv"));
    assert_eq!(lines[0], "x,t,u");
    assert_eq!(lines.len(), 1 + 41 * 201);
    let report = fs::read_to_string(dir.path().join("out/solve_report.jsonl")).unwrap();
    let rec: serde_json::Value = serde_json::from_str(report.lines().nth(1).unwrap()).unwrap();
    assert!(rec["solve_report"]["final_delta"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.toml");
    fs::write(&cfg, BASE).unwrap();
    let target = dir.path().join("from_env");
    let status = Command::new(env!("CARGO_BIN_EXE_memdiff"))
        .args(["theta", "--config"])
        .arg(&cfg)
        .env("MEMDIFF_OUT_DIR", &target)
        .status()
        .unwrap();
    assert!(status.success());
    let lines = data_lines(&target.join("theta.csv"));
    assert_eq!(lines[0], "x,t,theta,theta_star,theta_x,theta_star_x");
}

#[test]
fn asympt_convolution_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "{BASE}\n[asympt]\nhorizons = [20.0, 40.0, 60.0]\ntolerance = 1e-4\npairs = [{{ chi = {{ kind = \"exponential\", offset = 2.0, amplitude = 1.0, rate = 1.0 }}, h = {{ kind = \"tanh\", amplitude = 1.0, rate = 1.0 }} }}]\n"
    );
    let (code, err) = run(dir.path(), &cfg, &["asympt"]);
    assert_eq!(code, 0, "{err}");
    let lines = data_lines(&dir.path().join("out/asympt.csv"));
    assert_eq!(lines[0], "pair,x,horizon,numeric,closed_form,deviation");
    assert_eq!(lines.len(), 4);
}

#[test]
fn fhn_needs_its_section() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), BASE, &["fhn"]);
    assert_eq!(code, 1);
    assert!(err.contains("[fhn]"), "{err}");
}

#[test]
fn shipped_scenarios_are_valid() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut seen = 0;
    for entry in fs::read_dir(&root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "toml") {
            continue;
        }
        let dir = tempfile::tempdir().unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_memdiff"))
            .args(["verify", "kernel", "--config"])
            .arg(&path)
            .arg("--out")
            .arg(dir.path())
            .env_remove("MEMDIFF_OUT_DIR")
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}: {}",
            path.display(),
            String::from_utf8_lossy(&out.stderr)
        );
        seen += 1;
    }
    assert!(seen >= 5);
}
