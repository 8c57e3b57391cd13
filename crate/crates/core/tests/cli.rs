use riembed::dsl::parse_space;
use riembed::norms::SpaceSpec;
use riembed::verify::local_ratio;
use riembed::GridFn;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn riembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riembed")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write_fn(dir: &Path, name: &str, f: &GridFn) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(f).unwrap()).unwrap();
    p.display().to_string()
}

#[test]
fn optimal_target_lebesgue() {
    let o = riembed(&["optimal-target", "L(2)", "--n", "3", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Lorentz(6,2) & L(2)"));

    let o = riembed(&["optimal-target", "L(5)", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["schema"], "riembed.report/1");
    assert_eq!(v["target"], "Linf & L(5)");
    assert_eq!(v["result"]["construction"], "Supercritical");
    assert!(v["result"]["trace"][0].as_str().unwrap().contains("L^inf"));
    for key in ["n", "m", "grid_min", "grid_max", "grid_points", "seed", "family", "count", "format"] {
        assert!(!v["config"][key].is_null(), "{key} missing from config");
    }
    assert_eq!(v["config"]["count"], 2000);
    let back = parse_space(v["target"].as_str().unwrap()).unwrap();
    assert_eq!(back, SpaceSpec::intersect(SpaceSpec::linf(), SpaceSpec::lebesgue(5.0)));
}

#[test]
fn optimal_target_orlicz_renders_lambda_e() {
    let o = riembed(&["optimal-target", "Orlicz(pow(2)@0,pow(2)@inf)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let target = parse_space(v["target"].as_str().unwrap()).unwrap();
    let SpaceSpec::LambdaA { young, .. } = target else { panic!("{target:?}") };
    let riembed::young::Regime::PowerLog { p, alpha, .. } = young.near_infinity() else { panic!() };
    assert!((p - 2.0).abs() < 1e-6 && alpha.abs() < 1e-6, "{p} {alpha}");
}

#[test]
fn norm_of_indicators() {
    let dir = tempfile::tempdir().unwrap();
    let f16 = write_fn(dir.path(), "chi16.json", &GridFn::indicator(16.0, 1.0));
    let f1 = write_fn(dir.path(), "chi1.json", &GridFn::indicator(1.0, 1.0));

    let o = riembed(&["norm", "L(2)", &f16]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4.00000000000");

    // ‖χ_(0,1)‖ in L^{6,2} is (∫_0^1 s^{2/6-1} ds)^{1/2} = 3^{1/2}.
    let o = riembed(&["norm", "Lorentz(6,2)", &f1]);
    let got: f64 = stdout(&o).trim().parse().unwrap();
    assert!((got - 3f64.sqrt()).abs() < 1e-10, "{got}");
}

#[test]
fn norm_with_capped_young_function() {
    let dir = tempfile::tempdir().unwrap();
    // 0.8 on (0,0.2), 0.3 on (0.2,0.5): ∫f = 0.31, so the Luxemburg norm is the sup.
    let f = GridFn::steps(vec![0.2, 0.5], vec![0.3]).unwrap().with_tails(Some(riembed::TailSpec::constant(0.8)), None).unwrap();
    let path = write_fn(dir.path(), "f.json", &f);
    let o = riembed(&["norm", "Orlicz(cap(1)@inf, pow(1)@0)", &path]);
    let got: f64 = stdout(&o).trim().parse().unwrap();
    assert!((got - 0.8).abs() < 1e-9, "{got}");
    // Here ∫g exceeds sup g = 0.9.
    let g = GridFn::steps(vec![0.2, 0.5, 4.0], vec![0.65, 0.5]).unwrap().with_tails(Some(riembed::TailSpec::constant(0.9)), None).unwrap();
    let path = write_fn(dir.path(), "g.json", &g);
    let o = riembed(&["norm", "Orlicz(cap(1)@inf, pow(1)@0)", &path]);
    let got: f64 = stdout(&o).trim().parse().unwrap();
    let integral = 0.9 * 0.2 + 0.65 * 0.3 + 0.5 * 3.5;
    assert!((got - integral).abs() < 1e-9 * integral, "{got}");
}

#[test]
fn check_optimal_pair_holds() {
    let o = riembed(&["check", "L(2)", "Lorentz(6,2) & L(2)", "--count", "2000", "--seed", "2024"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("R2: holds, C = ") && s.contains("R3: holds, C = "), "{s}");
}

#[test]
fn check_falsified_pair_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = riembed(&[
        "check",
        "L(2)",
        "L(7)",
        "--family",
        "power-log",
        "--count",
        "64",
        "--format",
        "json",
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["exit_code"], 2);
    assert_eq!(v["witness_paths"]["R2"], w.to_str().unwrap());
    assert_eq!(v["result"]["local"]["verdict"]["kind"], "Fails");
    let f: GridFn = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let r = local_ratio(&SpaceSpec::lebesgue(2.0), &SpaceSpec::lebesgue(7.0), 3, 1, &f);
    assert!(r > 1e3, "{r}");
}

#[test]
fn check_with_empty_budget_is_indeterminate() {
    let o = riembed(&["check", "L(2)", "L(2)", "--count", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_is_reproducible_under_a_thread_cap() {
    let args = ["check", "L(2)", "Lorentz(6,2) & L(2)", "--count", "200", "--format", "csv"];
    let a = riembed(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_riembed")).args(args).env("RIEMBED_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn zygmund_rows() {
    let o = riembed(&["zygmund", "--p", "2", "--alpha", "1.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["result"]["g"].as_str().unwrap().contains("pow(6,4.5)@inf"), "{}", v["result"]["g"]);
    assert!(v["result"]["e"].as_str().unwrap().contains("pow(2,1.5)@inf"), "{}", v["result"]["e"]);

    let o = riembed(&["zygmund", "--p", "3", "--alpha", "1"]);
    let s = stdout(&o);
    assert!(s.contains("G: t^3 near 0, exp(t^3) near inf"), "{s}");

    let o = riembed(&["zygmund", "--p", "3", "--alpha", "2"]);
    assert!(stdout(&o).contains("E: t^3 near 0, t^3 log^-1 loglog^-3 near inf"), "{}", stdout(&o));

    let o = riembed(&["zygmund", "--p", "3", "--alpha", "3", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["result"]["e"], "none");
    assert!(v["result"]["target"].as_str().unwrap().starts_with("Linf & "));
}

#[test]
fn errors_exit_with_one() {
    let o = riembed(&["optimal-target", "Lorentz(6,,2)"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position 10"), "{err}");

    let o = riembed(&["optimal-target", "Lorentz(1,2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inadmissible"));

    let o = riembed(&["optimal-target"]);
    assert_eq!(o.status.code(), Some(1));

    let o = riembed(&["optimal-target", "L(2)", "--grid-max", "100"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn out_flag_and_csv_plot_columns() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fn(dir.path(), "f.json", &GridFn::indicator(2.0, 1.0));
    let out = dir.path().join("plot.csv");
    let o = riembed(&["norm", "L(1)", &f, "--format", "csv", "--grid-points", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,f,f_star,norm");
    assert_eq!(lines.len(), 10);
    assert!(lines[1].ends_with(",2.00000000000"));
}
