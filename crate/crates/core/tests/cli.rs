use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use unirat::aaa::{aaa_fit, AaaConfig, Variant};
use unirat::cli::linspace;
use unirat::io::approximant_from_json;

fn unirat(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unirat"));
    cmd.args(args).env_remove("UNIRAT_SWEEP_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["fit", "--interval", "0", "0", "--out", out],
        vec!["fit", "--interval", "-1", "1", "--variant", "bogus", "--out", out],
        vec!["fit", "--interval", "-1", "1", "--n-test", "10", "--m-max", "10", "--out", out],
        vec!["fit", "--interval", "-1", "1", "--tol", "-1", "--out", out],
        vec!["fit", "--nodes", "/nonexistent/nodes.txt", "--out", out],
        vec!["figure", "3", "--out", out],
        vec!["fit", "--out", out],
        vec![],
    ] {
        assert_eq!(code(&unirat(&args, &[])), 2, "{args:?}");
    }
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1\n2\nnan\n").unwrap();
    let o = unirat(&["fit", "--nodes", bad.to_str().unwrap(), "--out", out], &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = unirat(&["fit", "--interval", "-1", "1", "--out", out], &[("UNIRAT_SWEEP_CAP", "zero")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn svd_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = unirat(
        &["fit", "--interval", "-5", "5", "--n-test", "200", "--out", dir.path().to_str().unwrap()],
        &[("UNIRAT_SWEEP_CAP", "1")],
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("numerical failure"));
    assert!(!dir.path().join("approximant.json").exists());
}

#[test]
fn fit_from_node_file() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = dir.path().join("nodes.csv");
    let x = linspace(-3.0, 3.0, 40);
    let mut text = String::from("# forty nodes\n");
    for v in &x {
        text += &format!("{v}\n");
    }
    fs::write(&nodes, text).unwrap();
    let out = dir.path().join("out");
    let o = unirat(
        &[
            "fit", "--nodes", nodes.to_str().unwrap(), "--m-max", "5", "--variant", "original",
            "--out", out.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&out.join("approximant.json"));
    assert_eq!(doc["kind"], "interpolatory");
    assert_eq!(doc["support"].as_array().unwrap().len(), 5);
    let metrics = json(&out.join("metrics.json"));
    assert_eq!(metrics["support_size"], 5);
    assert_eq!(metrics["degree"], 4);
    assert_eq!(metrics["n_test"], 40);
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next().unwrap(),
        "phase,step,m,x,max_error,sigma_min,degenerate,weight_peak"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn modified_lawson_fit_meets_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = unirat(
        &[
            "fit", "--interval", "-13.9", "13.9", "--n-test", "2000", "--tol", "1e-12",
            "--variant", "modified", "--lawson", "20", "--out", dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = json(&dir.path().join("metrics.json"));
    assert!(m["max_error"]["value"].as_f64().unwrap() <= 1e-12, "{m}");
    assert!(m["unitarity_deviation"]["value"].as_f64().unwrap() <= 1e-15);
    assert_eq!(m["pole_scan"]["flagged"], false);
    assert_eq!(m["kind"], "cayley_non_interpolatory");
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(trace.lines().filter(|l| l.starts_with("lawson,")).count(), 20);
}

#[test]
fn approximant_json_reloads_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for (variant, lawson) in [("original", "0"), ("modified", "0"), ("original", "3"), ("modified", "3")] {
        let out = dir.path().join(format!("{variant}{lawson}"));
        let o = unirat(
            &[
                "fit", "--interval", "-6", "6", "--n-test", "300", "--m-max", "10", "--tol", "0",
                "--variant", variant, "--lawson", lawson, "--out", out.to_str().unwrap(),
            ],
            &[],
        );
        assert_eq!(code(&o), 0);
        let loaded = approximant_from_json(&fs::read_to_string(out.join("approximant.json")).unwrap())
            .unwrap();
        let cfg = AaaConfig::new(10, variant.parse::<Variant>().unwrap())
            .tol(0.0)
            .lawson(lawson.parse().unwrap());
        let fit = aaa_fit(&linspace(-6.0, 6.0, 300), &cfg).unwrap();
        let mem = fit.final_approximant();
        assert_eq!(loaded.kind(), mem.kind());
        for x in linspace(-7.0, 7.0, 100) {
            let (a, b) = (loaded.eval(x).unwrap(), mem.eval(x).unwrap());
            assert_eq!(
                (a.re.to_bits(), a.im.to_bits()),
                (b.re.to_bits(), b.im.to_bits()),
                "{variant} lawson={lawson} x={x}"
            );
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| {
        let out = dir.path().join(name);
        let mut all: Vec<&str> = args.to_vec();
        all.extend(["--out", out.to_str().unwrap()]);
        assert_eq!(code(&unirat(&all, &[])), 0);
        out
    };
    let fit = ["fit", "--interval", "-10", "10", "--n-test", "500", "--lawson", "5"];
    let (a, b) = (run("a", &fit), run("b", &fit));
    for f in ["approximant.json", "trace.csv", "metrics.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let (a, b) = (run("f1", &["figure", "1"]), run("f2", &["figure", "1"]));
    assert_eq!(
        fs::read(a.join("figure1.csv")).unwrap(),
        fs::read(b.join("figure1.csv")).unwrap()
    );
}

#[test]
fn figure_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&unirat(&["figure", "1", "--out", out], &[])), 0);
    assert_eq!(code(&unirat(&["figure", "2", "--out", out], &[])), 0);

    let mut r = csv::Reader::from_path(dir.path().join("figure1.csv")).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["x", "abserr_pade13", "abserr_aaalawson_13_13"]
    );
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 10_001);
    for row in [&rows[0], &rows[10_000]] {
        assert!((1e-6..=1e-4).contains(&row[1]));
    }
    assert!(rows.iter().all(|row| row[2] <= 1e-12));

    let mut r = csv::Reader::from_path(dir.path().join("figure2.csv")).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["x", "unitdev_aaa_orig", "unitdev_aaa_mod", "unitdev_lawson_orig", "unitdev_lawson_mod"]
    );
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(rows.iter().all(|row| row[2] <= 1e-15 && row[4] <= 1e-15));
    let at35 = rows.iter().find(|row| row[0] == 35.0).unwrap();
    assert!(at35[1] >= 10.0 * at35[2] && at35[1] > at35[2]);
    let meta = json(&dir.path().join("figure2.json"));
    assert_eq!(meta["aaa_mod"]["degree"], 14);
    assert_eq!(meta["lawson_mod"]["degree"], 13);
}
