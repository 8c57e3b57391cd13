//! Command-line front end.
//!
//! Every subcommand writes a report in the chosen format. In JSON mode the
//! report is one object tagged with [`SCHEMA`] and carries the full run
//! configuration, defaults included.

use crate::dsl::{parse_space, render_space, render_young};
use crate::error::{Error, Result};
use crate::funcrep::{rearrange, GridFn};
use crate::norms::{norm, SpaceSpec, Weight, WeightSegment};
use crate::optimal::{optimal_target, zygmund_table, ZygmundE};
use crate::verify::{critical_exponents, reduction_check, CheckOptions, EmbeddingReport, FamilyKind, TrialFamily, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA: &str = "riembed.report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "riembed", version, about = "Optimal rearrangement-invariant targets for Sobolev embeddings on R^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal target space of W^m X.
    OptimalTarget {
        /// Domain space, e.g. `L(2)` or `Orlicz(pow(2)@0,pow(2)@inf)`.
        space: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Numerical check of the one-dimensional inequalities for W^m X -> Y.
    Check {
        x: String,
        y: String,
        #[command(flatten)]
        run: RunArgs,
        /// Ratio above which a member counts as blow-up.
        #[arg(long, default_value_t = 1e3)]
        threshold: f64,
        /// Where to write the witness of a failure.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Norm of a function given as GridFn JSON.
    Norm {
        space: String,
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Zygmund-space row: optimal Orlicz target G and kernel E.
    Zygmund {
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Mixed,
    Steps,
    PowerLog,
    Indicators,
    Radial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RunArgs {
    /// Dimension.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    /// Order of derivatives.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Left end of the log grid used for plotted output.
    #[arg(long, default_value_t = 1e-8)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 1e8)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 161)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FamilyArg::Mixed)]
    pub family: FamilyArg,
    /// Number of trial functions.
    #[arg(long, default_value_t = 2000)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < 1 {
            return Err(Error::Precondition(format!("need n >= 2 and m >= 1, got n = {}, m = {}", self.n, self.m)));
        }
        if !(self.grid_min > 0.0 && self.grid_min <= 1e-4 && self.grid_max >= 1e4 && self.grid_max.is_finite()) {
            return Err(Error::Precondition(format!(
                "grid must span at least 4 decades on each side of 1, got [{:e}, {:e}]",
                self.grid_min, self.grid_max
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::Precondition("grid needs at least 2 points".into()));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let (a, b) = (self.grid_min.ln(), self.grid_max.ln());
        let k = self.grid_points - 1;
        (0..=k).map(|i| (a + (b - a) * i as f64 / k as f64).exp()).collect()
    }

    fn family(&self, x: &SpaceSpec) -> TrialFamily {
        let kind = match self.family {
            FamilyArg::Mixed => FamilyKind::Mixed { n: self.n, m: self.m, critical: critical_exponents(x) },
            FamilyArg::Steps => TrialFamily::steps(0, 0).kind,
            FamilyArg::PowerLog => TrialFamily::power_log(critical_exponents(x), 0, 0).kind,
            FamilyArg::Indicators => TrialFamily::indicators(0, 0).kind,
            FamilyArg::Radial => FamilyKind::RadialExtremals { n: self.n, m: self.m },
        };
        TrialFamily::new(kind, self.seed, self.count)
    }

    fn config(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["threads"] = json!(std::env::var("RIEMBED_THREADS").ok());
        v
    }
}

/// Prints `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let e = format!("{x:.11e}");
    let exp: i32 = e.split('e').nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    if (-5..=11).contains(&exp) {
        format!("{x:.prec$}", prec = (11 - exp) as usize)
    } else {
        e
    }
}

fn located(src: &str, e: Error) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("{msg}\n  {src}\n  {:>w$}", "^", w = pos + 1) },
        e => e,
    }
}

fn parse(src: &str) -> Result<SpaceSpec> {
    parse_space(src).map_err(|e| located(src, e))
}

fn envelope(command: &str, run: &RunArgs, extra: Value, result: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command, "config": run.config() });
    if let (Some(obj), Value::Object(x)) = (v.as_object_mut(), extra) {
        obj.extend(x);
    }
    v["result"] = result;
    v
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(run: &RunArgs, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Precondition(format!("cannot write output: {e}"));
    match &run.out {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
    }
}

fn optimal_cmd(src: &str, run: &RunArgs) -> Result<i32> {
    let x = parse(src)?;
    let t = optimal_target(&x, run.n, run.m)?;
    let target = render_space(&t.space);
    let text = match run.format {
        Format::Json => {
            let v = envelope(
                "optimal-target",
                run,
                json!({ "input": src, "target": target }),
                serde_json::to_value(&t).expect("serializable"),
            );
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            s += &format!("target,{}\n", csv_field(&target));
            s += &format!("construction,{:?}\n", t.construction);
            for line in t.trace.iter().chain(&t.notes) {
                s += &format!("trace,{}\n", csv_field(line));
            }
            s
        }
        Format::Table => {
            let mut s = format!("{target}\n  construction: {:?}\n", t.construction);
            for line in &t.trace {
                s += &format!("  - {line}\n");
            }
            for line in &t.notes {
                s += &format!("  note: {line}\n");
            }
            s
        }
    };
    emit(run, &text)?;
    Ok(EXIT_OK)
}

fn witness_path(run: &RunArgs, given: &Option<PathBuf>, which: &str) -> PathBuf {
    match (given, &run.out) {
        (Some(p), _) => p.clone(),
        (None, Some(out)) => {
            let mut s = out.clone().into_os_string();
            s.push(format!(".witness-{which}.json"));
            s.into()
        }
        (None, None) => std::env::temp_dir().join(format!("riembed-witness-{which}-{}.json", run.seed)),
    }
}

fn write_witness(path: &Path, f: &GridFn) -> Result<()> {
    let text = serde_json::to_string_pretty(f).expect("serializable");
    std::fs::write(path, text).map_err(|e| Error::Precondition(format!("cannot write witness {}: {e}", path.display())))
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Holds { .. } => "holds",
        Verdict::Fails { .. } => "fails",
        Verdict::Indeterminate { .. } => "indeterminate",
    }
}

fn check_cmd(xs: &str, ys: &str, run: &RunArgs, threshold: f64, witness: &Option<PathBuf>) -> Result<i32> {
    let x = parse(xs)?;
    let y = parse(ys)?;
    let family = run.family(&x);
    let opts = CheckOptions { threshold, ..CheckOptions::default() };
    let (local, far) = reduction_check(&x, &y, run.n, run.m, &family, opts)?;
    let reports = [&local, &far];

    let mut witnesses: Vec<(String, PathBuf)> = Vec::new();
    for r in reports {
        if let Verdict::Fails { witness: w, .. } = &r.verdict {
            let p = witness_path(run, witness, &r.inequality);
            write_witness(&p, w)?;
            witnesses.push((r.inequality.clone(), p));
        }
    }
    let code = if reports.iter().any(|r| r.verdict.fails()) {
        EXIT_FAILS
    } else if reports.iter().all(|r| r.verdict.holds()) {
        EXIT_OK
    } else {
        EXIT_INDETERMINATE
    };
    let path_of = |r: &EmbeddingReport| witnesses.iter().find(|w| w.0 == r.inequality).map(|w| w.1.display().to_string());

    let text = match run.format {
        Format::Json => {
            let paths: serde_json::Map<String, Value> = witnesses.iter().map(|(k, p)| (k.clone(), json!(p.display().to_string()))).collect();
            let v = envelope(
                "check",
                run,
                json!({ "x": xs, "y": ys, "threshold": threshold, "exit_code": code, "witness_paths": paths }),
                json!({ "local": local, "far": far }),
            );
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("inequality,verdict,constant,evaluated,skipped,size,running_sup\n");
            for r in reports {
                for t in &r.trace {
                    s += &format!(
                        "{},{},{},{},{},{},{}\n",
                        r.inequality,
                        verdict_name(&r.verdict),
                        sig12(r.constant),
                        r.evaluated,
                        r.skipped,
                        t.size,
                        sig12(t.sup)
                    );
                }
            }
            s
        }
        Format::Table => {
            let mut s = format!("W^{} {xs} -> {ys} on R^{}, family {} ({} members, seed {})\n", run.m, run.n, family.name(), run.count, run.seed);
            for r in reports {
                s += &format!("{}: {}", r.inequality, verdict_name(&r.verdict));
                match &r.verdict {
                    Verdict::Holds { constant } => s += &format!(", C = {}", sig12(*constant)),
                    Verdict::Fails { ratio, index, .. } => {
                        s += &format!(", ratio {} at member {index}", sig12(*ratio));
                        if let Some(p) = path_of(r) {
                            s += &format!(", witness {p}");
                        }
                    }
                    Verdict::Indeterminate { reason } => s += &format!(", {reason}"),
                }
                s += &format!(" [evaluated {}, skipped {}]\n", r.evaluated, r.skipped);
                let tr: Vec<String> = r.trace.iter().map(|t| format!("{}: {}", t.size, sig12(t.sup))).collect();
                if !tr.is_empty() {
                    s += &format!("  running sup {}\n", tr.join(", "));
                }
                s += &format!("  {}\n", r.note);
            }
            s
        }
    };
    emit(run, &text)?;
    Ok(code)
}

fn read_gridfn(path: &Path) -> Result<GridFn> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        if e.is_data() {
            Error::InvalidGridFn(format!("{}: {e}", path.display()))
        } else {
            Error::Parse { pos: e.column(), msg: format!("{}: {e}", path.display()) }
        }
    })
}

fn norm_cmd(src: &str, file: &Path, run: &RunArgs) -> Result<i32> {
    let x = parse(src)?;
    let f = read_gridfn(file)?;
    x.check_admissible()?;
    let v = norm(&x, &f)?;
    let text = match run.format {
        Format::Json => {
            let result = json!({ "norm": crate::extf64::Ext(v), "display": sig12(v) });
            let e = envelope("norm", run, json!({ "space": src, "file": file.display().to_string() }), result);
            serde_json::to_string_pretty(&e).expect("serializable") + "\n"
        }
        Format::Csv => {
            let fs = rearrange(&f)?;
            let mut s = String::from("s,f,f_star,norm\n");
            for t in run.grid() {
                s += &format!("{},{},{},{}\n", sig12(t), sig12(f.eval(t)), sig12(fs.eval(t)), sig12(v));
            }
            s
        }
        Format::Table => sig12(v) + "\n",
    };
    emit(run, &text)?;
    Ok(EXIT_OK)
}

fn zygmund_cmd(p: f64, alpha: f64, run: &RunArgs) -> Result<i32> {
    let row = zygmund_table(p, alpha, run.n, run.m)?;
    let (e_desc, target) = match &row.e {
        ZygmundE::Young { young } => {
            let theta = run.m as f64 / run.n as f64;
            let v = Weight::split_at_one(
                WeightSegment::new(0.0, 1.0, 1.0, -theta, 0.0),
                WeightSegment::new(1.0, f64::INFINITY, 1.0, 0.0, 0.0),
            );
            (render_young(young), SpaceSpec::LambdaA { young: young.clone(), weight: v })
        }
        ZygmundE::Supercritical { target } => ("none".to_string(), target.clone()),
    };
    let g = render_young(&row.g);
    let target = render_space(&target);
    let text = match run.format {
        Format::Json => {
            let v = envelope(
                "zygmund",
                run,
                json!({ "p": p, "alpha": alpha }),
                json!({ "row": row, "g": g, "e": e_desc, "target": target }),
            );
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => format!(
            "p,alpha,n,m,case,g,e,target\n{p},{alpha},{},{},{},{},{},{}\n",
            run.n,
            run.m,
            csv_field(&row.case),
            csv_field(&g),
            csv_field(&e_desc),
            csv_field(&target)
        ),
        Format::Table => format!(
            "case: {}\nG: {} near 0, {} near inf\nE: {}\ntarget: {target}\n",
            row.case,
            row.g.near_zero().describe(),
            row.g.near_infinity().describe(),
            match &row.e {
                ZygmundE::Young { young } => format!("{} near 0, {} near inf", young.near_zero().describe(), young.near_infinity().describe()),
                ZygmundE::Supercritical { .. } => "none (L^inf local part)".into(),
            }
        ),
    };
    emit(run, &text)?;
    Ok(EXIT_OK)
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::OptimalTarget { space, run } => {
            run.validate()?;
            optimal_cmd(space, run)
        }
        Command::Check { x, y, run, threshold, witness } => {
            run.validate()?;
            check_cmd(x, y, run, *threshold, witness)
        }
        Command::Norm { space, file, run } => {
            run.validate()?;
            norm_cmd(space, file, run)
        }
        Command::Zygmund { p, alpha, run } => {
            run.validate()?;
            zygmund_cmd(*p, *alpha, run)
        }
    }
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(4.0), "4.00000000000");
        assert_eq!(sig12(3f64.sqrt()), "1.73205080757");
        assert_eq!(sig12(0.00123), "0.00123000000000");
        assert_eq!(sig12(123456.0), "123456.000000");
        assert_eq!(sig12(9.9999999999999), "10.0000000000");
        assert_eq!(sig12(1e20), "1.00000000000e20");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn grid_span_is_enforced() {
        let run = |a: &[&str]| Cli::try_parse_from(a).unwrap();
        let c = run(&["riembed", "optimal-target", "L(2)", "--grid-min", "1e-3"]);
        let Command::OptimalTarget { run, .. } = c.command else { panic!() };
        assert!(run.validate().is_err());
    }

    #[test]
    fn parse_errors_point_at_the_column() {
        let e = parse("Lorentz(6,,2)").unwrap_err();
        let Error::Parse { pos, msg } = e else { panic!() };
        assert_eq!(pos, 10);
        assert!(msg.ends_with(&format!("{}^", " ".repeat(10))), "{msg}");
    }
}
