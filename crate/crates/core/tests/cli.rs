use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kicktop::cli::{load_config, Manifest, MANIFEST_FILE};
use kicktop::io::read_husimi_binary;

fn kicktop(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kicktop"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("KICKTOP_THREADS")
        .output()
        .unwrap()
}

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv" || e == "bin"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn identical_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["phase-portrait", "--kappa", "3.0", "--n-init", "50", "--kicks", "20", "--seed", "4"];
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(kicktop(&args, &a).status.success());
    assert!(kicktop(&args, &b).status.success());
    let (fa, fb) = (data_files(&a), data_files(&b));
    assert!(!fa.is_empty());
    assert_eq!(fa, fb);
}

#[test]
fn manifest_reruns_reproduce_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let args = ["survival", "--orbit", "P4", "--kappa", "1.5:3.5:5", "--j", "6:10", "--L", "20", "--per-kick"];
    let out = kicktop(&args, &first);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let manifest = Manifest::read(&first.join(MANIFEST_FILE)).unwrap();
    assert_eq!(manifest.command, "survival");
    for entry in &manifest.outputs {
        assert_eq!(fs::metadata(first.join(&entry.file)).unwrap().len(), entry.bytes);
    }
    assert_eq!(load_config(&first.join(MANIFEST_FILE)).unwrap().to_config_string(), manifest.config);

    let second = tmp.path().join("second");
    let manifest_path = first.join(MANIFEST_FILE);
    let rerun = kicktop(&["survival", "--config", manifest_path.to_str().unwrap()], &second);
    assert!(rerun.status.success(), "{}", String::from_utf8_lossy(&rerun.stderr));
    assert_eq!(data_files(&first), data_files(&second));
    let csv = String::from_utf8(fs::read(first.join("survival.csv")).unwrap()).unwrap();
    // 5 κ × 5 integer spins
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 25);
}

#[test]
fn config_files_and_flags_combine() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = tmp.path().join("run.conf");
    fs::write(&conf, "command = bifurcation\norbit = FP1\nkappa = 1:3:201\n").unwrap();
    let out = tmp.path().join("out");
    let run = kicktop(&["bifurcation", "--config", conf.to_str().unwrap(), "--orbit", "P4", "--kappa-range", "2.5:3.6:201"], &out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let csv = fs::read_to_string(out.join("bifurcation.csv")).unwrap();
    let crossing: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("#crossing="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((crossing - std::f64::consts::PI).abs() < 1e-6);

    let wrong = kicktop(&["catalog", "--config", conf.to_str().unwrap()], &tmp.path().join("w"));
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn exit_codes_and_cleanup() {
    let tmp = tempfile::tempdir().unwrap();

    let unknown = kicktop(&["catalog", "--kappa", "2", "--frobnicate"], &tmp.path().join("u"));
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("Usage"));

    let missing = tmp.path().join("missing");
    let no_root = kicktop(&["survival", "--orbit", "P2A", "--kappa", "1.5", "--j", "5", "--L", "5"], &missing);
    assert_eq!(no_root.status.code(), Some(3));
    assert!(!missing.exists());

    let bad_j = kicktop(&["survival", "--orbit", "FP1", "--kappa", "1.5", "--j", "2.25"], &tmp.path().join("j"));
    assert_eq!(bad_j.status.code(), Some(2));

    let threads = Command::new(env!("CARGO_BIN_EXE_kicktop"))
        .args(["catalog", "--kappa", "2"])
        .arg("--out-dir")
        .arg(tmp.path().join("t"))
        .env("KICKTOP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn absent_orbit_is_reported_before_running() {
    let tmp = tempfile::tempdir().unwrap();
    let out = kicktop(&["criteria", "--orbit", "P2B", "--kappa", "4.0", "--j", "10"], &tmp.path().join("c"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orbit does not exist below √2π"));
}

#[test]
fn husimi_binary_output_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("h");
    let out = kicktop(
        &["husimi", "--orbit", "P4", "--kappa", "1.5", "--j", "10", "--kicks", "2", "--format", "binary", "--n-theta", "24", "--n-phi", "48"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for k in 0..=2 {
        let bytes = fs::read(dir.join(format!("husimi_kick{k:04}.bin"))).unwrap();
        let grid = read_husimi_binary(bytes.as_slice()).unwrap();
        assert_eq!((grid.n_theta(), grid.n_phi()), (24, 48));
        assert!((grid.integral() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn heatmap_writes_grid_and_curve() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("hm");
    let out = kicktop(&["heatmap", "--orbit", "P2A", "--j", "1:6", "--kappa", "1.5:5:8", "--L", "10"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let grid = fs::read_to_string(dir.join("heatmap.csv")).unwrap();
    assert!(grid.starts_with("#orbit=P2A\n"));
    assert!(grid.contains("#L=10\n") && grid.contains("#bifurcation_kappa="));
    assert!(grid.lines().any(|l| l.starts_with("j,kappa,S")));
    // κ = 1.5 precedes the orbit's existence: empty S, not zero
    let empty = grid.lines().find_map(|l| {
        let f: Vec<&str> = l.split(',').collect();
        let (j, k) = (f[0].parse::<f64>().ok()?, f[1].parse::<f64>().ok()?);
        (j == 1.0 && k == 1.5).then(|| f[2].to_string())
    });
    assert_eq!(empty.as_deref(), Some(""));
    let curve = fs::read_to_string(dir.join("orthogonality_curve.csv")).unwrap();
    let rows: Vec<&str> = curve.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "kappa,j_min");
    assert_eq!(rows.len(), 1 + 8);
}
