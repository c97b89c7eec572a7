use super::config::{config_hash, seed_sequence, ExperimentConfig, RunRecord};
use super::io::*;
use super::HarnessError;
use crate::coupling::{
    derive_stream, overshoot_probability_mc, uniformity_tests, AfterHighPolicy, AlternatePolicy,
    ParityPolicy, SelectionPolicy,
};
use crate::dla2d::{run_dla, DlaRunConfig, EntryMethod, WalkMode};
use crate::lattice1d::{run_model, Backend, ModelConfig};
use crate::rng::UniformStream;
use crate::stats::ks_distance;
use crate::surgery::{
    build_patch_decomposition, run_surgery_sample, verify_patch_geometry, verify_surgery,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn need<T: Copy>(v: Option<T>, name: &'static str) -> Result<T, HarnessError> {
    v.ok_or(HarnessError::MissingParameter(name))
}

/// Run one named experiment; artifacts land under a directory namespaced by
/// the config hash so no experiment can clobber another's outputs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunRecord, HarnessError> {
    let hash = config_hash(cfg);
    let dir = cfg.resolved_out_dir().join(format!("{}-{}", cfg.experiment, hash));
    std::fs::create_dir_all(&dir)?;
    let started = now_ms();
    let mut artifacts: Vec<PathBuf> = Vec::new();
    let mut flags: Vec<(String, bool)> = Vec::new();

    match cfg.experiment.as_str() {
        "sim1d" => {
            let model = ModelConfig {
                k: need(cfg.k, "k")?,
                periods: need(cfg.periods, "periods")?,
                seed: cfg.master_seed,
                stream_id: 0,
                backend: Backend::Fast,
                initial_sites: vec![0],
                initial_new: None,
                log_steps: cfg.log_steps.unwrap_or(false),
            };
            let trace = run_model(&model)?;
            let tpath = dir.join("trace.csv");
            write_trace_csv(&tpath, &trace)?;
            artifacts.push(tpath);
            if let Some(steps) = &trace.steps {
                let spath = dir.join("steps.jsonl");
                write_steps_jsonl(&spath, steps)?;
                artifacts.push(spath);
            }
            flags.push(("completed".into(), true));
        }
        "ages" => {
            let n = need(cfg.n, "n")?;
            let reps = need(cfg.reps, "reps")?;
            let seed = cfg.master_seed;
            let oldest: Vec<(u64, u64)> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let o = crate::ages::run_with_ages(n, seed, seed_sequence(seed, rep))
                        .expect("age run");
                    (rep, *o.last().expect("n >= 1"))
                })
                .collect();
            let apath = dir.join("ages.csv");
            write_ages_csv(&apath, n, &oldest)?;
            artifacts.push(apath);

            let scaled: Vec<f64> =
                oldest.iter().map(|&(_, o)| (n as f64 - o as f64) / (n as f64).sqrt()).collect();
            let ks_vs_exact =
                ks_distance(&scaled, |x| 1.0 - crate::ages::tail_exact(n, x.max(0.0)))?;
            let ks_vs_limit = ks_distance(&scaled, crate::ages::limit_cdf)?;
            #[derive(Serialize)]
            struct KsSummary {
                n: u64,
                reps: u64,
                ks_vs_exact: f64,
                ks_vs_limit: f64,
            }
            let spath = dir.join("ks.json");
            std::fs::write(
                &spath,
                serde_json::to_string_pretty(&KsSummary { n, reps, ks_vs_exact, ks_vs_limit })?,
            )?;
            artifacts.push(spath);
            flags.push(("completed".into(), true));
        }
        "dla" => {
            let run = run_dla(&DlaRunConfig {
                steps: need(cfg.steps, "steps")?,
                seed: cfg.master_seed,
                stream_id: 0,
                entry: cfg.entry_method.unwrap_or(EntryMethod::FarCircle { rfactor: 8 }),
                l_offset: cfg.l_offset.unwrap_or(2) as i32,
                snapshot_every: cfg.snapshot_every.unwrap_or(500),
                mode: WalkMode::Accelerated,
                step_cap: 100_000_000,
                keep_paths: false,
            })?;
            let tpath = dir.join("trace.csv");
            write_dla_trace_csv(&tpath, &run.snapshots)?;
            artifacts.push(tpath);
            let cpath = dir.join("cluster.json");
            write_cluster_json(&cpath, &run.cluster)?;
            artifacts.push(cpath);
            flags.push(("tracker_consistent".into(), run.tracker_consistent));
        }
        "patches" => {
            let cpath = cfg
                .cluster_file
                .clone()
                .ok_or(HarnessError::MissingParameter("cluster_file"))?;
            let cluster = read_cluster_json(&cpath)?;
            let decomp = build_patch_decomposition(&cluster)?;
            let report = verify_patch_geometry(&cluster, &decomp)?;

            #[derive(Serialize)]
            struct PatchJson {
                xi_l: (i32, i32),
                xi_m: (i32, i32),
                xi_r: (i32, i32),
                gamma_minus: Vec<(i32, i32)>,
                gamma_star: Vec<(i32, i32)>,
                gamma_plus: Vec<(i32, i32)>,
                arc: Vec<(i32, i32)>,
                interior: Vec<(i32, i32)>,
            }
            #[derive(Serialize)]
            struct DecompJson {
                contour: Vec<(i32, i32)>,
                u_indices: Vec<usize>,
                v_indices: Vec<usize>,
                patches: Vec<PatchJson>,
                geometry: crate::surgery::GeometryReport,
            }
            let out = DecompJson {
                contour: decomp.contour.points().to_vec(),
                u_indices: decomp.separators.u.clone(),
                v_indices: decomp.separators.v.clone(),
                patches: decomp
                    .patches
                    .iter()
                    .map(|p| {
                        let mut interior: Vec<(i32, i32)> = p.interior.iter().copied().collect();
                        interior.sort_unstable();
                        PatchJson {
                            xi_l: p.xi_l,
                            xi_m: p.xi_m,
                            xi_r: p.xi_r,
                            gamma_minus: p.gamma_minus.points().to_vec(),
                            gamma_star: p.gamma_star.points().to_vec(),
                            gamma_plus: p.gamma_plus.points().to_vec(),
                            arc: p.arc.clone(),
                            interior,
                        }
                    })
                    .collect(),
                geometry: report.clone(),
            };
            let ppath = dir.join("patches.json");
            std::fs::write(&ppath, serde_json::to_string_pretty(&out)?)?;
            artifacts.push(ppath);
            flags.push(("geometry_ok".into(), report.all_ok()));
        }
        "phi" => {
            let cpath = cfg
                .cluster_file
                .clone()
                .ok_or(HarnessError::MissingParameter("cluster_file"))?;
            let cluster = read_cluster_json(&cpath)?;
            let decomp = build_patch_decomposition(&cluster)?;
            let reps = cfg.reps.unwrap_or(10);
            let seed = cfg.master_seed;
            let samples: Vec<_> = (0..reps)
                .into_par_iter()
                .map(|r| run_surgery_sample(&cluster, &decomp, seed, r, 200_000_000))
                .collect::<Result<_, _>>()?;
            let rpath = dir.join("surgery.jsonl");
            {
                use std::io::Write;
                let mut f = std::io::BufWriter::new(std::fs::File::create(&rpath)?);
                for s in &samples {
                    writeln!(f, "{}", serde_json::to_string(&verify_surgery(s))?)?;
                }
            }
            artifacts.push(rpath);
            flags.push((
                "all_bounds_ok".into(),
                samples.iter().all(|s| verify_surgery(s).all_ok()),
            ));
        }
        "rwtest" => {
            let res = overshoot_probability_mc(
                cfg.c.unwrap_or(1.0),
                need(cfg.n, "n")?,
                need(cfg.k, "k")?,
                cfg.eta.unwrap_or(0.5),
                need(cfg.trials, "trials")?,
                cfg.master_seed,
            )?;
            let opath = dir.join("overshoot.json");
            std::fs::write(&opath, serde_json::to_string_pretty(&res)?)?;
            artifacts.push(opath);
            flags.push(("within_bound".into(), res.estimate <= res.bound));
        }
        "couple" => {
            let draws = cfg.trials.unwrap_or(1_000_000) as usize;
            let mut a = UniformStream::new(cfg.master_seed, 1);
            let mut b = UniformStream::new(cfg.master_seed, 2);
            let mut policy: Box<dyn SelectionPolicy> = match cfg.m.unwrap_or(0) {
                0 => Box::new(AfterHighPolicy::new(0.5)),
                1 => Box::new(AlternatePolicy::default()),
                _ => Box::new(ParityPolicy::default()),
            };
            let out = derive_stream(&mut a, &mut b, policy.as_mut(), draws)?;
            let rep = uniformity_tests(&out, 100)?;
            #[derive(Serialize)]
            struct CoupleReport {
                draws: usize,
                chi_square: f64,
                p_value: f64,
                lag1_autocorr: f64,
            }
            let rpath = dir.join("uniformity.json");
            std::fs::write(
                &rpath,
                serde_json::to_string_pretty(&CoupleReport {
                    draws: rep.n,
                    chi_square: rep.chi_square,
                    p_value: rep.p_value,
                    lag1_autocorr: rep.lag1_autocorr,
                })?,
            )?;
            artifacts.push(rpath);
            flags.push((
                "uniform".into(),
                rep.p_value > 0.001 && rep.lag1_autocorr.abs() < 0.005,
            ));
        }
        other => return Err(HarnessError::UnknownExperiment(other.to_string())),
    }

    let record = RunRecord {
        config_hash: hash,
        seed: cfg.master_seed,
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        artifacts,
        flags,
    };
    std::fs::write(dir.join("run_record.json"), serde_json::to_string_pretty(&record)?)?;
    std::fs::write(dir.join("config.json"), serde_json::to_string_pretty(cfg)?)?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sim1d_experiment_writes_deterministic_artifacts() {
        let dir = std::env::temp_dir().join("latticegrow-exp-test");
        let _ = std::fs::remove_dir_all(&dir);
        let mut cfg = ExperimentConfig::new("sim1d", 77);
        cfg.k = Some(2);
        cfg.periods = Some(200);
        cfg.out_dir = Some(dir.clone());
        let rec1 = run_experiment(&cfg).unwrap();
        let bytes1 = std::fs::read(&rec1.artifacts[0]).unwrap();
        let rec2 = run_experiment(&cfg).unwrap();
        let bytes2 = std::fs::read(&rec2.artifacts[0]).unwrap();
        assert_eq!(bytes1, bytes2, "artifacts must be byte-identical across reruns");
        assert_eq!(rec1.config_hash, rec2.config_hash);
    }

    #[test]
    fn unknown_experiment_is_rejected() {
        let cfg = ExperimentConfig::new("nope", 1);
        assert!(matches!(run_experiment(&cfg), Err(HarnessError::UnknownExperiment(_))));
    }
}
