//! Command-line front end: validated JSON job configs in, CSV/JSON data out.
//!
//! Exit codes: 0 success, 1 runtime failure (numerics or io), 2 usage or
//! configuration error. Machine-readable errors go to stderr as one JSON
//! document; data outputs only ever go to files.

pub mod config;
pub mod jobs;
pub mod output;
pub mod validate;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::config::JobSpec;
use crate::jobs::JobError;
use crate::output::{fmt_complex, StagedOutputs};
use crate::validate::Violation;
use dp2ep_core::CoreError;

#[derive(Parser)]
#[command(
    name = "dp2ep",
    version,
    about = "Spectra, coalescence scans and non-unitary dynamics of open lattice models"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct JobArgs {
    /// JSON job config to run.
    #[arg(long)]
    config: PathBuf,
    /// Dotted-path config overrides, e.g. --set model.kappa=0.25
    /// (values parse as JSON, falling back to plain strings).
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
    /// Shorthand for overriding the job's primary output path.
    #[arg(long)]
    out: Option<String>,
    /// Directory relative output paths are resolved against (default ".").
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every eigenvalue cluster of one model.
    Spectrum(JobArgs),
    /// Rebuild the model across a κ sweep and track clusters.
    EpScan(JobArgs),
    /// Check the degeneracy-to-coalescence hypotheses and conclusion.
    TheoremCheck(JobArgs),
    /// Integrate the non-unitary dynamics, recording snapshots and fidelity.
    Evolve(JobArgs),
    /// Tabulate the ladder's analytic two-band dispersion and gap.
    LadderAnalytic(JobArgs),
    /// Validate a config and echo it with all defaults applied.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the canonical example configs into a directory.
    MakeFigures {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match cli.cmd {
        Command::Spectrum(args) => run_job("spectrum", &args),
        Command::EpScan(args) => run_job("ep_scan", &args),
        Command::TheoremCheck(args) => run_job("theorem_check", &args),
        Command::Evolve(args) => run_job("evolve", &args),
        Command::LadderAnalytic(args) => run_job("ladder_analytic", &args),
        Command::Validate { config } => run_validate(&config),
        Command::MakeFigures { out_dir } => run_make_figures(&out_dir),
    }
}

fn print_error(kind: &str, message: &str, violations: &[Violation]) {
    let mut err = Map::new();
    err.insert("kind".into(), json!(kind));
    err.insert("message".into(), json!(message));
    if !violations.is_empty() {
        err.insert(
            "violations".into(),
            Value::Array(
                violations
                    .iter()
                    .map(|v| json!({"path": v.path, "message": v.message}))
                    .collect(),
            ),
        );
    }
    let doc = Value::Object(Map::from_iter([("error".to_string(), Value::Object(err))]));
    eprintln!("{}", serde_json::to_string_pretty(&doc).expect("error json serializes"));
}

fn load_config_value(path: &Path) -> Result<Value, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            print_error("config", &format!("cannot read {}: {e}", path.display()), &[]);
            return Err(2);
        }
    };
    match serde_json::from_str::<Value>(&text) {
        Ok(v) => Ok(v),
        Err(e) => {
            print_error(
                "config",
                "config is not valid JSON",
                &[Violation { path: "$".into(), message: e.to_string() }],
            );
            Err(2)
        }
    }
}

/// Insert `new_value` at a dotted object path like `model.kappa`, creating
/// intermediate objects as needed.
fn set_path(root: &mut Value, dotted: &str, new_value: Value) -> Result<(), String> {
    let segments: Vec<&str> = dotted.split('.').collect();
    if dotted.is_empty() || segments.iter().any(|s| s.is_empty()) {
        return Err(format!("invalid override path \"{dotted}\""));
    }
    let (last, parents) = segments.split_last().expect("nonempty by the test above");
    let mut cur = root;
    for seg in parents {
        let map = cur
            .as_object_mut()
            .ok_or_else(|| format!("override path \"{dotted}\" crosses a non-object value"))?;
        cur = map.entry(seg.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    let map = cur
        .as_object_mut()
        .ok_or_else(|| format!("override path \"{dotted}\" crosses a non-object value"))?;
    map.insert(last.to_string(), new_value);
    Ok(())
}

fn apply_overrides(value: &mut Value, args: &JobArgs, expected_kind: &str) -> Result<(), i32> {
    for entry in &args.set {
        let Some((path, raw)) = entry.split_once('=') else {
            print_error("config", &format!("--set needs PATH=VALUE, got \"{entry}\""), &[]);
            return Err(2);
        };
        let parsed = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| json!(raw));
        if let Err(msg) = set_path(value, path, parsed) {
            print_error("config", &msg, &[]);
            return Err(2);
        }
    }
    if let Some(out) = &args.out {
        let key = JobSpec::primary_output_key(expected_kind);
        set_path(value, &format!("job.{key}"), json!(out)).expect("job.* paths are two objects");
    }
    Ok(())
}

fn run_job(expected_kind: &str, args: &JobArgs) -> i32 {
    let mut value = match load_config_value(&args.config) {
        Ok(v) => v,
        Err(code) => return code,
    };
    if let Err(code) = apply_overrides(&mut value, args, expected_kind) {
        return code;
    }
    let cfg = match validate::validate_value(&value) {
        Ok(cfg) => cfg,
        Err(violations) => {
            print_error("config", "config failed validation", &violations);
            return 2;
        }
    };
    if cfg.job.kind() != expected_kind {
        print_error(
            "config",
            &format!(
                "config describes a {} job, but the {} subcommand was invoked",
                cfg.job.kind(),
                expected_kind.replace('_', "-")
            ),
            &[],
        );
        return 2;
    }
    let out_dir = args.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    match jobs::execute(&cfg, &out_dir) {
        Ok(outcome) => {
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            if outcome.row_errors.is_empty() {
                0
            } else {
                let rows: Vec<Violation> = outcome
                    .row_errors
                    .iter()
                    .map(|r| Violation {
                        path: format!("kappa = {}", fmt_complex(r.kappa)),
                        message: r.message.clone(),
                    })
                    .collect();
                print_error(
                    "numerical",
                    &format!("{} sweep row(s) failed; the rest were written", rows.len()),
                    &rows,
                );
                1
            }
        }
        Err(JobError::Core(e)) => {
            let kind = match e {
                CoreError::InvalidSpec(_) | CoreError::Config(_) => "config",
                _ => "numerical",
            };
            print_error(kind, &e.to_string(), &[]);
            if kind == "config" {
                2
            } else {
                1
            }
        }
        Err(JobError::Io(e)) => {
            print_error("io", &e.to_string(), &[]);
            1
        }
    }
}

fn run_validate(config: &Path) -> i32 {
    let value = match load_config_value(config) {
        Ok(v) => v,
        Err(code) => return code,
    };
    match validate::validate_value(&value) {
        Ok(cfg) => {
            let echo = serde_json::to_value(&cfg).expect("a parsed config always serializes");
            println!("{}", serde_json::to_string_pretty(&echo).expect("json serializes"));
            0
        }
        Err(violations) => {
            print_error("config", "config failed validation", &violations);
            2
        }
    }
}

/// The four canonical configs: a ring κ sweep through the crossing-to-
/// coalescence transition, the ladder's gap near its critical coupling, the
/// dimerized-chain theorem check, and the cylinder funneling run.
pub const FIGURE_CONFIGS: [(&str, &str); 4] = [
    (
        "fig1_ring_ep_scan.json",
        r#"{
  "model": {"family": "ring_with_hop", "n_half": 6, "l0": 1, "r": 1, "kappa": 0.5},
  "job": {
    "type": "ep_scan",
    "kappa_values": [0, 0.05, 0.1, 0.5, 1, 2, 5],
    "output": "fig1_ring_ep_scan.csv"
  }
}
"#,
    ),
    (
        "fig2_ladder_gap.json",
        r#"{
  "model": {"family": "ladder", "n_rungs": 8, "j": 1.0, "n_max": 2},
  "job": {
    "type": "ladder_analytic",
    "n_max": "infinite",
    "k_count": 199,
    "output": "fig2_ladder_bands.csv",
    "summary_output": "fig2_ladder_summary.json"
  }
}
"#,
    ),
    (
        "fig3_ssh_theorem.json",
        r#"{
  "model": {"family": "ssh_chain", "n_cells": 20, "delta": 0.1, "kappa": 0.5},
  "job": {"type": "theorem_check", "tol": 1e-10, "output": "fig3_ssh_report.json"}
}
"#,
    ),
    (
        "fig4_cylinder_evolve.json",
        r#"{
  "model": {
    "family": "ssh_cylinder",
    "m_rows": 20,
    "n_cells": 100,
    "delta": 0.1,
    "j_inter": 1.0,
    "kappa": 0.5,
    "row_coupling": "staggered"
  },
  "job": {
    "type": "evolve",
    "times": [0, 100, 200, 800],
    "initial_state": {"type": "stripe_even_rows"},
    "fidelity_target": {"type": "cylinder_lo"},
    "fidelity_grid_dt": 5.0,
    "snapshots_output": "fig4_cylinder_snapshots.csv",
    "fidelity_output": "fig4_cylinder_fidelity.csv"
  }
}
"#,
    ),
];

fn run_make_figures(out_dir: &Path) -> i32 {
    let mut staged = StagedOutputs::new();
    for (name, text) in FIGURE_CONFIGS {
        if let Err(e) = staged.stage(&out_dir.join(name), text) {
            print_error("io", &e.to_string(), &[]);
            return 1;
        }
    }
    match staged.commit() {
        Ok(written) => {
            for path in written {
                println!("wrote {}", path.display());
            }
            0
        }
        Err(e) => {
            print_error("io", &e.to_string(), &[]);
            1
        }
    }
}
