use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn heralding(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heralding"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn csv_values(text: &str, column: usize) -> Vec<f64> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(column).unwrap().parse().unwrap())
        .collect()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn analytic_p0_at_the_balanced_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = heralding(&["analytic", "--quantity", "p0", "--pi-e", "0.5", "--mu", "0.5"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value = csv_values(&text, 3)[0];
    assert!((value - 0.183_939_720_585_721_17).abs() < 1e-12, "{value}");
    assert!(String::from_utf8(out.stderr).unwrap().contains("config.quantity=p0"));
}

#[test]
fn ground_state_never_clicks() {
    let dir = tempfile::tempdir().unwrap();
    let out = heralding(&["analytic", "--quantity", "p0", "--pi-e", "0"], dir.path());
    assert_eq!(csv_values(&String::from_utf8(out.stdout).unwrap(), 3), [1.0]);

    let out = heralding(
        &["simulate", "--scheme", "adaptive", "--pi-e", "0", "--n-traj", "50", "--t-max", "2"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let means = csv_values(&String::from_utf8(out.stdout).unwrap(), 1);
    assert_eq!(means.len(), 201);
    assert!(means.iter().all(|&m| m == 0.0));
}

#[test]
fn invalid_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["simulate", "--scheme", "counting", "--alpha", "1"][..],
        &["simulate", "--scheme", "fixed-lo"],
        &["simulate", "--scheme", "counting", "--mu", "1.5"],
        &["simulate", "--scheme", "adaptive", "--pi-e", "1"],
        &["simulate", "--scheme", "counting", "--p-jump-max", "0.5"],
        &["analytic", "--quantity", "pa", "--pi-e", "0:1:0"],
        &["figure", "--figure", "5", "--phom-mc", "--out-dir", "x"],
    ] {
        let out = heralding(args, dir.path());
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn optimizer_agrees_with_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = heralding(&["optimize-mu", "--pi-e", "0.05:0.95:10", "--verify", "--out", "mu.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("mu.csv")).unwrap();
    let mu = csv_values(&text, 1);
    assert_eq!(mu.len(), 10);
    assert!(mu.windows(2).all(|w| w[1] <= w[0]));
    assert!(dir.path().join("mu.csv.manifest.txt").exists());
}

#[test]
fn trajectory_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--scheme", "fixed-lo", "--alpha", "2", "--t-max", "3", "--seed", "7"];
    let a = heralding(&args, dir.path()).stdout;
    let b = heralding(&args, dir.path()).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,pe,event,alpha_re,alpha_im\n"));
    let seeded = heralding(&["simulate", "--scheme", "fixed-lo", "--alpha", "2", "--t-max", "3", "--seed", "8"], dir.path());
    assert_ne!(text.as_bytes(), seeded.stdout);
}

#[test]
fn figures_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["1", "2b", "3"] {
        let mut outputs = Vec::new();
        for threads in ["1", "3"] {
            let out_dir = format!("fig{fig}_{threads}");
            let out = heralding(
                &["--threads", threads, "figure", "--figure", fig, "--n-traj", "500", "--seed", "3", "--out-dir", &out_dir],
                dir.path(),
            );
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            outputs.push(read_dir_sorted(&dir.path().join(out_dir)));
        }
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1], "figure {fig}");
    }
}

#[test]
fn replay_regenerates_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = heralding(&["figure", "--figure", "2b", "--n-traj", "300", "--seed", "11", "--out-dir", "fig"], dir.path());
    assert!(out.status.success());
    let manifest = dir.path().join("fig/manifest.txt");
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("config.seed=11"));
    assert!(text.contains("config.n_traj=300"));
    assert_eq!(text.lines().filter(|l| l.starts_with("output=")).count(), 3);

    let ok = heralding(&["replay", "--verify", "fig/manifest.txt"], dir.path());
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));

    fs::write(dir.path().join("fig/trajectory.csv"), "tampered\n").unwrap();
    let bad = heralding(&["replay", "--verify", "fig/manifest.txt"], dir.path());
    assert!(!bad.status.success());
    assert!(String::from_utf8(bad.stderr).unwrap().contains("differs"));
}

#[test]
fn library_entry_point_parses_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pa.csv");
    heralding_cli::run_args(["heralding", "analytic", "--quantity", "pa", "--pi-e", "0.5", "--out", out.to_str().unwrap()]).unwrap();
    let pa = csv_values(&fs::read_to_string(&out).unwrap(), 3)[0];
    assert!((pa - 0.25 * (-1.0f64).exp()).abs() < 1e-12);
    assert!(heralding_cli::run_args(["heralding", "bogus"]).is_err());
}
