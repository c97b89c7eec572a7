//! Command line front end: each subcommand builds an experiment config and
//! hands it to the harness.
//!
//! Exit codes: 0 success, 1 criterion or runtime failure, 2 usage error.

use latticegrow_core::harness::{run_acceptance, run_experiment, ExperimentConfig};
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "\
latticegrow <command> [flags]

commands:
  sim1d    --K <int> --periods <int> --seed <int> [--out-dir <dir>] [--log-steps]
  ages     --n <int> --reps <int> --seed <int> [--out-dir <dir>]
  dla      --steps <int> --seed <int> [--entry uniform|far-circle] [--rfactor <int>]
           [--snapshot-every <int>] [--out-dir <dir>]
  patches  --cluster <file.json> [--out-dir <dir>]
  phi      --cluster <file.json> --samples <int> --seed <int> [--out-dir <dir>]
  rwtest   --K <int> --N <int> --eta <float> --c <float> --trials <int> --seed <int>
           [--out-dir <dir>]
  couple   --policy 0|1|2 --draws <int> --seed <int> [--out-dir <dir>]
  accept   [--suite all|exact|ages|chain|coupling|dla|geometry|surgery|A1..A11]

The environment variable LATTICEGROW_OUT overrides the default output root.
All numeric inputs are decimal.";

struct Flags {
    values: HashMap<String, String>,
    switches: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut values = HashMap::new();
    let mut switches = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let Some(name) = arg.strip_prefix("--") else {
            return Err(format!("unexpected argument {arg}"));
        };
        if matches!(name, "log-steps") {
            switches.push(name.to_string());
            i += 1;
            continue;
        }
        let Some(value) = args.get(i + 1) else {
            return Err(format!("flag --{name} needs a value"));
        };
        values.insert(name.to_string(), value.clone());
        i += 2;
    }
    Ok(Flags { values, switches })
}

impl Flags {
    fn get<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String> {
        match self.values.get(name) {
            None => Ok(None),
            Some(raw) => {
                raw.parse::<T>().map(Some).map_err(|_| format!("bad value for --{name}: {raw}"))
            }
        }
    }

    fn require<T: std::str::FromStr>(&self, name: &str) -> Result<T, String> {
        self.get::<T>(name)?.ok_or(format!("missing required flag --{name}"))
    }

    fn known(&self, allowed: &[&str]) -> Result<(), String> {
        for key in self.values.keys().chain(self.switches.iter()) {
            if !allowed.contains(&key.as_str()) {
                return Err(format!("unknown flag --{key}"));
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}\n\n{USAGE}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &[String]) -> Result<ExitCode, String> {
    let Some(command) = args.first() else {
        return Err("no command given".into());
    };
    let flags = parse_flags(&args[1..])?;

    match command.as_str() {
        "sim1d" => {
            flags.known(&["K", "periods", "seed", "out", "out-dir", "log-steps"])?;
            let k: u32 = flags.require("K")?;
            if k < 2 {
                return Err("K must be at least 2".into());
            }
            let mut cfg = ExperimentConfig::new("sim1d", flags.require("seed")?);
            cfg.k = Some(k);
            cfg.periods = Some(flags.require("periods")?);
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            cfg.log_steps = Some(flags.switches.iter().any(|s| s == "log-steps"));
            let copy_to = flags.get::<PathBuf>("out")?;
            let record = run_experiment(&cfg);
            if let (Ok(rec), Some(target)) = (&record, copy_to) {
                let trace = rec
                    .artifacts
                    .iter()
                    .find(|p| p.file_name().is_some_and(|f| f == "trace.csv"))
                    .ok_or("trace artifact missing")?;
                std::fs::copy(trace, &target).map_err(|e| e.to_string())?;
                println!("wrote {}", target.display());
            }
            finish(record)
        }
        "ages" => {
            flags.known(&["n", "reps", "seed", "out-dir"])?;
            let mut cfg = ExperimentConfig::new("ages", flags.require("seed")?);
            cfg.n = Some(flags.require("n")?);
            cfg.reps = Some(flags.require("reps")?);
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            finish(run_experiment(&cfg))
        }
        "dla" => {
            flags.known(&["steps", "seed", "entry", "rfactor", "snapshot-every", "out-dir"])?;
            let mut cfg = ExperimentConfig::new("dla", flags.require("seed")?);
            cfg.steps = Some(flags.require("steps")?);
            cfg.snapshot_every = flags.get("snapshot-every")?;
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            let rfactor: i32 = flags.get("rfactor")?.unwrap_or(8);
            cfg.entry_method = match flags.get::<String>("entry")?.as_deref() {
                None | Some("far-circle") => {
                    Some(latticegrow_core::dla2d::EntryMethod::FarCircle { rfactor })
                }
                Some("uniform") => Some(latticegrow_core::dla2d::EntryMethod::Uniform),
                Some(other) => return Err(format!("unknown entry method {other}")),
            };
            finish(run_experiment(&cfg))
        }
        "patches" => {
            flags.known(&["cluster", "out-dir"])?;
            let mut cfg = ExperimentConfig::new("patches", 0);
            cfg.cluster_file = Some(flags.require("cluster")?);
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            finish(run_experiment(&cfg))
        }
        "phi" => {
            flags.known(&["cluster", "samples", "seed", "out-dir"])?;
            let mut cfg = ExperimentConfig::new("phi", flags.require("seed")?);
            cfg.cluster_file = Some(flags.require("cluster")?);
            cfg.reps = Some(flags.require("samples")?);
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            finish(run_experiment(&cfg))
        }
        "rwtest" => {
            flags.known(&["K", "N", "eta", "c", "trials", "seed", "out-dir"])?;
            let mut cfg = ExperimentConfig::new("rwtest", flags.require("seed")?);
            cfg.k = Some(flags.require("K")?);
            cfg.n = Some(flags.require("N")?);
            cfg.eta = flags.get("eta")?;
            cfg.c = flags.get("c")?;
            cfg.trials = Some(flags.require("trials")?);
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            finish(run_experiment(&cfg))
        }
        "couple" => {
            flags.known(&["policy", "draws", "seed", "out-dir"])?;
            let mut cfg = ExperimentConfig::new("couple", flags.require("seed")?);
            cfg.m = flags.get("policy")?;
            cfg.trials = flags.get("draws")?;
            cfg.out_dir = flags.get::<PathBuf>("out-dir")?;
            finish(run_experiment(&cfg))
        }
        "accept" => {
            flags.known(&["suite"])?;
            let suite = flags.get::<String>("suite")?.unwrap_or_else(|| "all".into());
            let results = run_acceptance(&suite);
            if results.is_empty() {
                return Err(format!("no criteria match suite {suite}"));
            }
            let mut hard_fail = false;
            for r in &results {
                println!("{}", r.line());
                hard_fail |= !r.passed && !r.soft;
            }
            Ok(if hard_fail { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        other => Err(format!("unknown command {other}")),
    }
}

fn finish(
    result: Result<latticegrow_core::harness::RunRecord, latticegrow_core::harness::HarnessError>,
) -> Result<ExitCode, String> {
    match result {
        Ok(record) => {
            for (name, ok) in &record.flags {
                println!("{name}: {ok}");
            }
            for artifact in &record.artifacts {
                println!("wrote {}", artifact.display());
            }
            if record.flags.iter().all(|(_, ok)| *ok) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Err(err) => {
            eprintln!("run failed: {err}");
            Ok(ExitCode::from(1))
        }
    }
}
