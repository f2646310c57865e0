use std::path::PathBuf;
use std::process::{Command, Output};

use twisted_emission::emission::{default_grid, scan, Channel, EmissionProblem};

const BIN: &str = env!("CARGO_BIN_EXE_twisted-emission");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("TWISTED_EMISSION_CONFIG")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twisted-emission-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

type Parsed = (Vec<(String, String)>, Vec<String>, Vec<Vec<f64>>);

/// Header pairs, column names and numeric rows of an emitted CSV file.
fn parse_csv(text: &str) -> Parsed {
    let mut meta = Vec::new();
    let mut lines = text.lines();
    let mut header = None;
    for line in lines.by_ref() {
        if let Some(kv) = line.strip_prefix("# ") {
            let (k, v) = kv.split_once('=').unwrap();
            meta.push((k.to_string(), v.to_string()));
        } else {
            header = Some(line);
            break;
        }
    }
    let names = header.unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (meta, names, rows)
}

#[test]
fn scan_defaults_round_trip() {
    let out = scratch("scan.csv");
    let o = run(&["scan", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("theta_pw=1.5307856524409"), "{stdout}");

    let (meta, names, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap());
    assert!(meta.contains(&("channel".into(), "twisted-exact".into())));
    assert_eq!(names, ["theta_p", "density_raw", "density_normalized"]);
    assert_eq!(rows.len(), 2000);

    // printed values recover the library result bit for bit
    let p = EmissionProblem::reference();
    let s = scan(
        &p,
        Channel::TwistedExact,
        &default_grid(&p, 2000, 1e-6).unwrap(),
    )
    .unwrap();
    for (row, i) in rows.iter().zip(0..) {
        assert_eq!(row[0].to_bits(), s.thetas[i].to_bits());
        assert_eq!(row[1].to_bits(), s.raw[i].to_bits());
        assert_eq!(row[2].to_bits(), s.values[i].to_bits());
    }
    let ones: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|r| r.1[2] == 1.0)
        .map(|r| r.0)
        .collect();
    assert!(!ones.is_empty());
}

#[test]
fn two_point_smoke_run() {
    let o = run(&["scan", "--channel", "planewave", "--grid", "1.50:1.56:2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, _, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 2);
}

#[test]
fn plane_wave_scan_peak() {
    let o = run(&["scan", "--channel", "planewave", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let peaks = v["peaks"].as_array().unwrap();
    assert_eq!(peaks.len(), 1);
    assert!((peaks[0].as_f64().unwrap() - 0.04f64.acos()).abs() < 1.1e-3);
    assert_eq!(v["columns"]["theta_p"].as_array().unwrap().len(), 2000);
}

#[test]
fn compare_reports_limit() {
    let o = run(&["compare", "--theta-a", "1e-3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, names, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(names, ["theta_p", "pw", "tw_quad", "tw_exact"]);
    for col in 1..4 {
        let max = rows.iter().map(|r| r[col]).fold(0.0, f64::max);
        assert_eq!(max, 1.0);
    }
    let stderr = String::from_utf8(o.stderr).unwrap();
    let dev: f64 = stderr
        .lines()
        .find_map(|l| l.strip_prefix("limit_deviation="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev < 0.01, "{dev}");
}

#[test]
fn ring_header_and_points() {
    let o = run(&["ring", "--kappa-b", "0.25", "--n-samples", "360"]);
    assert!(o.status.success());
    let (meta, names, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(names, ["kappa_x", "kappa_y"]);
    assert_eq!(rows.len(), 360);
    let get = |k: &str| {
        meta.iter()
            .find(|m| m.0 == k)
            .unwrap()
            .1
            .parse::<f64>()
            .unwrap()
    };
    let (cx, r) = (get("center_x"), get("radius"));
    assert_eq!(cx, -0.25);
    assert_eq!(get("center_y"), 0.0);
    for row in rows {
        assert!(((row[0] - cx).powi(2) + row[1].powi(2) - r * r).abs() < 1e-12);
    }
}

#[test]
fn centered_ring() {
    let o = run(&["ring", "--n-samples", "8"]);
    assert!(o.status.success());
    let (meta, _, _) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert!(
        meta.contains(&("center_x".into(), "-0".into()))
            || meta.contains(&("center_x".into(), "0".into()))
    );
}

#[test]
fn config_file_and_precedence() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "channel = planewave\ngrid = 1.50:1.56:11\n").unwrap();
    let o = run(&["scan", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let (meta, _, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 11);
    assert!(meta.contains(&("channel".into(), "planewave".into())));

    let o = Command::new(BIN)
        .args(["scan", "--grid", "1.50:1.56:5"])
        .env("TWISTED_EMISSION_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(o.status.success());
    let (meta, _, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 5);
    assert!(meta.contains(&("channel".into(), "planewave".into())));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["scan", "--grid", "0:1:1"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--sigma-e", "0"]).status.code(), Some(2));
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(
        run(&["scan", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    // a grid far from the plane-wave peak has no emission at all
    assert_eq!(
        run(&["scan", "--channel", "planewave", "--grid", "0.1:0.2:5"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_passes_and_catches_a_corrupted_closed_form() {
    let o = run(&["verify", "--level", "fast"]);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(o.status.success(), "{stdout}");
    assert!(stdout.lines().filter(|l| l.contains(" pass ")).count() >= 6);

    let o = run(&["verify", "--corrupt-closed-form"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stdout).unwrap().contains("FAIL"));
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        vec!["scan", "--format", "json"],
        vec!["compare", "--grid", "1.0:2.0:300"],
        vec!["ring", "--kappa-b", "0.3", "--seed", "7"],
    ] {
        let a = scratch("det-a");
        let b = scratch("det-b");
        for path in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            assert!(run(&full).status.success());
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{args:?}"
        );
    }
}
