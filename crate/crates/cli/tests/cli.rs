//! End-to-end tests of the `pcm` binary: exit codes, config handling, and
//! the file formats it writes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pcm"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pcm_cli_{name}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SMALL_RECON: &str = "\
signal = pwconst1d
model = pcm_tv
m = 64
n = 32
resolution = 128
theta = 0.25
sigma = 0
seeds = 1,2
data = span
mu_t = 0
timing = zero
";

#[test]
fn project_runs_and_writes_artifacts() {
    let dir = tmp("project");
    let config = write_config(&dir, "c.cfg", SMALL_RECON);
    let out = dir.join("out");
    let status = bin()
        .args(["project", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{:?}", status);
    let csv = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,seed,sigma,ssim,psnr,snr,rela_err,wall_ms"
    );
    assert_eq!(lines.count(), 2);
    assert!(out.join("plan_seed1.txt").exists());
    assert!(out.join("truth.txt").exists());
    assert!(out.join("recon_pcm_tv_seed1.txt").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tmp("determinism");
    let config = write_config(&dir, "c.cfg", SMALL_RECON);
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["reconstruct", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(out_a.join("metrics.csv")).unwrap();
    let b = std::fs::read(out_b.join("metrics.csv")).unwrap();
    assert_eq!(a, b);
    let a = std::fs::read(out_a.join("recon_pcm_tv_seed2.txt")).unwrap();
    let b = std::fs::read(out_b.join("recon_pcm_tv_seed2.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tmp("badconfig");
    // resolution is not a power of two
    let config = write_config(
        &dir,
        "bad.cfg",
        "signal=pwconst1d\nmodel=pcm_tv\nm=8\nn=4\nresolution=100\nseeds=1\n",
    );
    let out = bin()
        .args(["reconstruct", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let missing = dir.join("nonexistent.cfg");
    let out = bin()
        .args(["reconstruct", "--config"])
        .arg(&missing)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn denoise_rejects_measurement_models() {
    let dir = tmp("denmismatch");
    let config = write_config(&dir, "c.cfg", SMALL_RECON);
    let out = bin()
        .args(["denoise", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn denoise_writes_pgm_images() {
    let dir = tmp("denoise2d");
    let config = write_config(
        &dir,
        "c.cfg",
        "signal = phantom2d\nmodel = tv_denoise\nresolution = 32\nsigma = 0.1\nseeds = 3\nmu_t = 0.4\nlambda_t = 4.0\nmax_iters = 80\ntiming = zero\n",
    );
    let out = dir.join("out");
    let status = bin()
        .args(["denoise", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let truth = std::fs::read_to_string(out.join("truth.pgm")).unwrap();
    assert!(truth.starts_with("P2\n32 32\n255\n"));
    assert!(out.join("noisy_seed3.pgm").exists());
    assert!(out.join("recon_tv_denoise_seed3.pgm").exists());
    let trace = std::fs::read_to_string(out.join("trace_tv_denoise_seed3.csv")).unwrap();
    assert!(trace.starts_with("iter,objective,rel_change,tv_violation,tfv_violation,gamma_size"));
}

#[test]
fn bench_fig4_prints_summary_and_writes_csv() {
    let dir = tmp("benchfig4");
    let out = dir.join("out");
    let result = bin()
        .args(["bench", "fig4", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("pcm_tv"), "stdout: {stdout}");
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("bench,sigma,model,seeds,ssim,psnr,snr,rela_err"));
    assert!(summary.contains("fig4"));
}

#[test]
fn bench_rejects_unknown_names() {
    let out = bin()
        .args(["bench", "table9", "--out"])
        .arg(tmp("benchbad").join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plan_files_have_full_precision() {
    let dir = tmp("planfmt");
    let config = write_config(&dir, "c.cfg", SMALL_RECON);
    let out = dir.join("out");
    bin()
        .args(["reconstruct", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    let plan = std::fs::read_to_string(out.join("plan_seed1.txt")).unwrap();
    let lines: Vec<&str> = plan.lines().collect();
    assert_eq!(lines.len(), 64);
    for line in &lines {
        let v: f64 = line.parse().unwrap();
        assert!(v.is_finite());
        // 17 significant digits in scientific notation
        assert!(line.contains('e') || line.contains('E'), "line {line:?}");
    }
}
