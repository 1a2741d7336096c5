//! Algorithm dispatch shared by the solve, bench and identify commands.

use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;

use lfcs_core::baselines::{
    approx_solve, local_search_solve, rand_sample_solve, LocalSearchConfig, RandSampleConfig,
};
use lfcs_core::cmsa::{adapt_cmsa_solve, CmsaParams};
use lfcs_core::solver::{brute_force_oracle, solve_full_ilp};
use lfcs_core::{Instance, Solution, SolveStatus, TimeMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Approx,
    Rand,
    Ls2,
    Ls4,
    Ilp,
    Cmsa,
    Oracle,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Approx => "approx",
            Algo::Rand => "rand",
            Algo::Ls2 => "ls2",
            Algo::Ls4 => "ls4",
            Algo::Ilp => "ilp",
            Algo::Cmsa => "cmsa",
            Algo::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub time_limit: f64,
    pub seed: u64,
    pub n_rand: usize,
    pub time_mode: TimeMode,
    /// Trajectory log target for algorithms that keep one.
    pub log_path: Option<PathBuf>,
    /// Early exit once this objective is reached (known-optimum harnesses).
    pub target_obj: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            time_limit: 600.0,
            seed: 0,
            n_rand: 10_000,
            time_mode: TimeMode::Wall,
            log_path: None,
            target_obj: None,
        }
    }
}

/// One result row, mirroring the results CSV.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    pub sigma: usize,
    pub len_b: usize,
    pub k: usize,
    pub algo: Algo,
    pub seed: u64,
    pub obj: usize,
    pub time_to_best_s: f64,
    pub total_time_s: f64,
    pub status: &'static str,
}

pub const RESULTS_HEADER: &str =
    "instance,n,sigma,len_b,k,algo,seed,obj,time_to_best_s,total_time_s,status";

impl RunRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.6},{:.6},{}",
            self.instance,
            self.n,
            self.sigma,
            self.len_b,
            self.k,
            self.algo.name(),
            self.seed,
            self.obj,
            self.time_to_best_s,
            self.total_time_s,
            self.status
        )
    }
}

/// Runs one algorithm on one instance. The returned solution is `None` only
/// for the oracle, which proves a value without a witness.
pub fn run_algo(
    inst: &Instance,
    algo: Algo,
    opts: &RunOptions,
) -> Result<(RunRecord, Option<Solution>), lfcs_core::Error> {
    let wall = Instant::now();
    // In virtual mode the wall-clock algorithms report zero so reruns are
    // byte-identical.
    let measured = |w: &Instant| match opts.time_mode {
        TimeMode::Wall => w.elapsed().as_secs_f64(),
        TimeMode::Virtual => 0.0,
    };

    let (obj, time_to_best_s, total_time_s, status, solution) = match algo {
        Algo::Approx => {
            let s = approx_solve(inst);
            let t = measured(&wall);
            (s.obj, t, t, "heuristic", Some(s))
        }
        Algo::Rand => {
            let cfg = RandSampleConfig {
                n_rand: opts.n_rand,
                seed: opts.seed,
            };
            let s = rand_sample_solve(inst, &cfg);
            let t = measured(&wall);
            (s.obj, t, t, "heuristic", Some(s))
        }
        Algo::Ls2 | Algo::Ls4 => {
            let cfg = LocalSearchConfig {
                k: if algo == Algo::Ls2 { 2 } else { 4 },
                seed: opts.seed,
            };
            let s = local_search_solve(inst, &cfg, None);
            let t = measured(&wall);
            (s.obj, t, t, "heuristic", Some(s))
        }
        Algo::Ilp => {
            let out = solve_full_ilp(inst, opts.time_limit, None, opts.time_mode);
            let status = match out.status {
                SolveStatus::Optimal => "optimal",
                SolveStatus::CutoffImproved => "cutoff",
                SolveStatus::TimeLimit => "time-limit",
            };
            (
                out.solution.obj,
                out.t_solve,
                out.t_solve,
                status,
                Some(out.solution),
            )
        }
        Algo::Cmsa => {
            let mut params = CmsaParams::for_instance(inst, opts.time_limit, opts.seed);
            params.time_mode = opts.time_mode;
            params.log_path = opts.log_path.clone();
            params.target_obj = opts.target_obj;
            let run = adapt_cmsa_solve(inst, &params);
            let ttb = run.trajectory.last().map_or(0.0, |&(t, _)| t);
            let total = match opts.time_mode {
                TimeMode::Wall => wall.elapsed().as_secs_f64(),
                TimeMode::Virtual => ttb.max(run.trajectory.first().map_or(0.0, |&(t, _)| t)),
            };
            (run.solution.obj, ttb, total.max(ttb), "heuristic", Some(run.solution))
        }
        Algo::Oracle => {
            let obj = brute_force_oracle(inst)?;
            let t = measured(&wall);
            (obj, t, t, "exact", None)
        }
    };

    let record = RunRecord {
        instance: inst.name.clone(),
        n: inst.n(),
        sigma: inst.sigma().len(),
        len_b: inst.b().len(),
        k: inst.k(),
        algo,
        seed: opts.seed,
        obj,
        time_to_best_s,
        total_time_s,
        status,
    };
    debug_assert!(record.time_to_best_s <= record.total_time_s + 1e-9);
    Ok((record, solution))
}
