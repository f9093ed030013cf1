use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn usflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usflab"))
        .args(args)
        .env_remove("USFLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn network_header(text: &str) -> (usize, usize) {
    let line = text
        .lines()
        .find(|l| l.starts_with("network "))
        .expect("network line");
    let mut it = line.split_whitespace().skip(1).map(|x| x.parse().unwrap());
    (it.next().unwrap(), it.next().unwrap())
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn generate_families() {
    let o = usflab(&["generate", "--family", "canopy", "--n", "2", "--k", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(network_header(&text), (7, 6));
    assert!(text.starts_with("# usflab "));
    assert!(text.contains("# seed: 0"));

    let o = usflab(&[
        "generate",
        "--family",
        "glued-canopy",
        "--n",
        "1",
        "--k1",
        "3",
        "--k2",
        "4",
    ]);
    assert_eq!(network_header(&stdout(&o)).0, 4);

    let o = usflab(&[
        "generate", "--family", "grid", "--d", "2", "--side", "3", "--wired",
    ]);
    let text = stdout(&o);
    // 9 interior vertices plus the wired vertex; 12 inner edges plus 12 boundary edges
    assert_eq!(network_header(&text), (10, 24));
    assert!(text.lines().any(|l| l == "wired 0"));
}

#[test]
fn generate_usage_errors() {
    assert_eq!(
        usflab(&["generate", "--family", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        usflab(&["generate", "--family", "grid", "--d", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        usflab(&["generate", "--family", "canopy", "--n", "2", "--k", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let out = out.to_str().unwrap();
    let args = [
        "sample",
        "--network",
        &fixture("wired_grid_2x2.net"),
        "--mode",
        "wusf-trunc",
        "--samples",
        "10",
        "--seed",
        "7",
        "--out",
        out,
    ];
    assert!(usflab(&args).status.success());
    let read_all = || {
        let mut names: Vec<_> = fs::read_dir(out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        names.sort();
        names
            .into_iter()
            .map(|p| (p.clone(), fs::read(p).unwrap()))
            .collect::<Vec<_>>()
    };
    let first = read_all();
    assert_eq!(first.len(), 11);
    assert!(fs::read_to_string(&first[1].0)
        .unwrap()
        .lines()
        .any(|l| l.starts_with("p ")));
    assert!(usflab(&args).status.success());
    assert_eq!(first, read_all());
}

#[test]
fn sample_ust_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = usflab(&[
        "sample",
        "--network",
        &fixture("triangle.net"),
        "--mode",
        "ust",
        "--samples",
        "10",
        "--out",
        out,
    ]);
    assert!(o.status.success());
    let manifest = fs::read_to_string(dir.path().join("manifest.csv")).unwrap();
    let rows: Vec<_> = manifest
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 10);
    for r in rows {
        assert!(r.ends_with(",2,1"), "{r}");
    }
    assert!(manifest.contains("# samples: 10"));
}

#[test]
fn wired_mode_needs_a_wired_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let o = usflab(&[
        "sample",
        "--network",
        &fixture("triangle.net"),
        "--mode",
        "wusf-trunc",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wired vertex"));
}

#[test]
fn verify_shipped_fixtures() {
    let o = usflab(&["verify", "--suite", "oracle", "--fixtures", &fixture("")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.starts_with("pass,oracle,weighted_triangle,kirchhoff-marginals")));
    assert!(!text.lines().any(|l| l.starts_with("fail,")));
}

#[test]
fn verify_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = usflab(&["verify", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no fixture"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = usflab(&["verify", "--suite", "bogus", "--fixtures", &fixture("")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(usflab(&[
        "sample",
        "--network",
        &fixture("triangle.net"),
        "--mode",
        "ust",
        "--out",
        out
    ])
    .status
    .success());
    let forest = dir.path().join("sample_000000.forest");
    let o = usflab(&[
        "stats",
        "--network",
        &fixture("triangle.net"),
        "--forests",
        forest.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        lines[0],
        "sample,component_id,size,frequency,ends_lb_r0,ends_lb_r1,ends_lb_r2,mean_log_conductance"
    );
    assert_eq!(lines.len(), 2);
    let cols: Vec<_> = lines[1].split(',').collect();
    assert_eq!(&cols[..4], &["0", "0", "3", "1.0"]);

    let o = usflab(&[
        "stats",
        "--network",
        &fixture("k4.net"),
        "--forests",
        forest.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not match"));
}

#[test]
fn stats_on_wired_forests() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let net = fixture("wired_grid_2x2.net");
    assert!(usflab(&[
        "sample",
        "--network",
        &net,
        "--mode",
        "wusf-trunc",
        "--samples",
        "4",
        "--out",
        out
    ])
    .status
    .success());
    let mut args = vec![
        "stats".to_string(),
        "--network".into(),
        net,
        "--steps".into(),
        "2000".into(),
        "--forests".into(),
    ];
    for i in 0..4 {
        args.push(
            dir.path()
                .join(format!("sample_{i:06}.forest"))
                .to_string_lossy()
                .into_owned(),
        );
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = usflab(&args);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    for sample in 0..4 {
        let sizes: usize = rows
            .iter()
            .filter(|r| r[0] == sample.to_string())
            .map(|r| r[2].parse::<usize>().unwrap())
            .sum();
        assert_eq!(sizes, 4);
    }
}
