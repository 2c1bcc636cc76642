//! `prymcheck`: runs the exact verification pipeline from the command line.
//!
//! Exit status: 0 when every claim holds, 1 on a verification failure, 2 on
//! invalid invocation or input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use prym_core::cone::{certify_with, TestCurves};
use prym_core::divisor::{canonical_class, d9_class};
use prym_core::lp::{parse_lp, write_lp};
use prym_core::pencil::curve_row;
use prym_core::rational::{parse_q, Q};
use prym_core::report::{cone_report_json, verify_all, VerifyOptions};
use prym_core::taut::degeneracy_class;
use prym_core::Error;
use serde_json::{json, Value};

/// Directory that receives a copy of every JSON document, if set.
const OUT_DIR_VAR: &str = "PRYMCHECK_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "prymcheck", version, about = "Exact verification of the genus-9 Prym uniruledness computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every claim check and print a report.
    Verify {
        #[arg(long)]
        json: bool,
        /// Restrict to a module (divisor, grr, lattice, pencil, cone) or a claim id.
        #[arg(long)]
        only: Option<String>,
        /// Omit per-item timings so output is byte-for-byte reproducible.
        #[arg(long)]
        no_timing: bool,
        /// Override a test-curve pairing, e.g. `R.lambda=10`.
        #[arg(long, value_name = "KEY=VALUE")]
        perturb: Vec<String>,
        #[arg(long)]
        parallel: bool,
    },
    /// Print a divisor class with exact coefficients.
    Class {
        #[arg(value_enum)]
        name: ClassName,
        #[arg(long, default_value_t = 9)]
        genus: u32,
        /// Nonnegative δ₀″ correction of the Brill–Noether class.
        #[arg(long, value_name = "P/Q")]
        alpha: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run the moving-curve certifier and print the derivation.
    Certify {
        /// Write the LP in text form and check that it reads back identically.
        #[arg(long, value_name = "PATH")]
        emit_lp: Option<PathBuf>,
        #[arg(long, value_name = "KEY=VALUE")]
        perturb: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the intersection numbers of the test curves.
    Curves {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassName {
    Canonical,
    D9,
    Degeneracy,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGenus { .. }
            | Error::InvalidInput(_)
            | Error::UnknownLabel(_)
            | Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn emit_json(name: &str, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    println!("{text}");
    if let Some(dir) = std::env::var_os(OUT_DIR_VAR) {
        let dir = Path::new(&dir);
        fs::create_dir_all(dir)
            .and_then(|_| fs::write(dir.join(format!("{name}.json")), format!("{text}\n")))
            .map_err(|e| Failure::Usage(format!("cannot write to {}: {e}", dir.display())))?;
    }
    Ok(())
}

fn curves_with(perturb: &[String]) -> Result<TestCurves, Failure> {
    let mut curves = TestCurves::standard()?;
    for p in perturb {
        curves.perturb_str(p)?;
    }
    Ok(curves)
}

fn cmd_verify(json: bool, only: Option<String>, no_timing: bool, perturb: Vec<String>, parallel: bool) -> CmdResult {
    let report = verify_all(&VerifyOptions {
        only,
        perturbations: perturb,
        timing: !no_timing,
        parallel,
    })?;
    if json {
        emit_json("verify", &report.to_json())?;
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.passed())
}

fn cmd_class(name: ClassName, genus: u32, alpha: Option<String>, json: bool) -> CmdResult {
    let alpha: Q = match &alpha {
        Some(s) => parse_q(s)?,
        None => Q::from_integer(0.into()),
    };
    let fixed_genus = |what: &str| {
        if genus == 9 {
            Ok(())
        } else {
            Err(Failure::Usage(format!("the {what} class is only available for genus 9")))
        }
    };
    let (key, value, text) = match name {
        ClassName::Canonical => {
            let k = canonical_class(genus)?;
            ("canonical", k.to_json(), k.to_string())
        }
        ClassName::D9 => {
            fixed_genus("Brill–Noether")?;
            let d = d9_class(&alpha)?;
            ("d9", d.to_json(), d.to_string())
        }
        ClassName::Degeneracy => {
            fixed_genus("degeneracy")?;
            let z = degeneracy_class();
            ("degeneracy", z.to_json(), z.to_string())
        }
    };
    if json {
        emit_json(&format!("class-{key}"), &value)?;
    } else {
        println!("{text}");
    }
    Ok(true)
}

fn cmd_certify(emit_lp: Option<PathBuf>, perturb: Vec<String>, json: bool) -> CmdResult {
    let report = certify_with(&curves_with(&perturb)?)?;
    let mut round_trip = None;
    if let Some(path) = &emit_lp {
        let text = write_lp(&report.lp);
        fs::write(path, &text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        let back = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let ok = parse_lp(&back)? == report.lp;
        if !ok {
            return Err(Failure::Verification(format!("{} does not read back identically", path.display())));
        }
        round_trip = Some(path.display().to_string());
    }
    if json {
        let mut doc = cone_report_json(&report);
        doc["lp_file"] = json!(round_trip);
        emit_json("certify", &doc)?;
    } else {
        println!("R·K = {}", report.r_dot_k);
        for step in &report.steps {
            let mark = if step.holds { "ok" } else { "--" };
            println!("[{mark}] {:14} {}", step.id, step.statement);
        }
        println!("axioms:");
        for a in &report.axioms {
            println!("  {}: {}", a.id, a.statement);
        }
        println!("omitted LP variables: {}", report.omitted_variables.join(", "));
        if let Some(k) = &report.exact_ratio {
            println!("exact ratio bound on the reduced system: a ≤ ({k})·b0p");
        }
        println!("certificate sha256: {}", report.certificate_digest);
        if let Some(p) = &round_trip {
            println!("LP written to {p} (round trip ok)");
        }
        println!("{}", report.conclusion);
    }
    Ok(report.conclusion.established())
}

fn cmd_curves(json: bool) -> CmdResult {
    let curves = TestCurves::standard()?;
    let header = ["curve", "lambda", "delta0p", "delta0pp", "delta0ram", "delta1"];
    let rows: Vec<Vec<String>> = curves.named().iter().map(|(n, c)| curve_row(n, c)).collect();
    if json {
        let doc: Vec<Value> = rows
            .iter()
            .map(|r| Value::Object(header.iter().zip(r).map(|(h, v)| (h.to_string(), json!(v))).collect()))
            .collect();
        emit_json("curves", &Value::Array(doc))?;
    } else {
        let width = |k: usize| rows.iter().map(|r| r[k].len()).chain([header[k].len()]).max().unwrap_or(0);
        let widths: Vec<usize> = (0..header.len()).map(width).collect();
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        println!("{}", line(header.to_vec()));
        for r in &rows {
            println!("{}", line(r.iter().map(String::as_str).collect()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            json,
            only,
            no_timing,
            perturb,
            parallel,
        } => cmd_verify(json, only, no_timing, perturb, parallel),
        Command::Class { name, genus, alpha, json } => cmd_class(name, genus, alpha, json),
        Command::Certify { emit_lp, perturb, json } => cmd_certify(emit_lp, perturb, json),
        Command::Curves { json } => cmd_curves(json),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("prymcheck: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("prymcheck: {msg}");
            ExitCode::from(2)
        }
    }
}
