//! The self-adaptive construct-merge-solve-adapt loop.
//!
//! Each iteration constructs `n_a` randomized variations of the best-so-far
//! solution, merges their components into a restricted pool, solves the pool
//! exactly with a time limit and an incumbent cutoff, and adapts the
//! mutation threshold `alpha_bsf` and the construction count `n_a` from the
//! outcome of the solve.

use std::io::Write;
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::rand_sample_construct;
use crate::clock::{Stopwatch, TimeMode};
use crate::instance::Instance;
use crate::solution::Solution;
use crate::solver::{solve_restricted, ComponentPool};

/// Alpha values are tracked in exact micro-units so that thousands of
/// `alpha_red / 10` increments cannot drift.
const MICRO: f64 = 1e-6;

/// Virtual work units charged per solution construction.
const CONSTRUCT_TICKS: u64 = 100;

/// Safety cap on the construction count; Algorithm plateaus could otherwise
/// grow it without bound.
const NA_CAP: usize = 64;

#[derive(Debug, Clone)]
pub struct CmsaParams {
    pub alpha_lb: f64,
    pub alpha_ub: f64,
    pub alpha_red: f64,
    /// Time limit per subproblem solve, in seconds.
    pub t_ilp: f64,
    /// Fraction of `t_ilp` below which a solve counts as "easy".
    pub t_prop: f64,
    /// Overall time limit in seconds.
    pub time_limit: f64,
    pub seed: u64,
    pub time_mode: TimeMode,
    /// Optional early exit once this objective is reached; used by harnesses
    /// that know the optimum.
    pub target_obj: Option<usize>,
    /// Optional trajectory log ("t<TAB>obj" lines).
    pub log_path: Option<PathBuf>,
}

impl CmsaParams {
    /// Tuned defaults for instances with n <= 100.
    pub fn small(time_limit: f64, seed: u64) -> Self {
        CmsaParams {
            alpha_lb: 0.2,
            alpha_ub: 1.0,
            alpha_red: 0.05,
            t_ilp: 10.0,
            t_prop: 0.7,
            time_limit,
            seed,
            time_mode: TimeMode::Wall,
            target_obj: None,
            log_path: None,
        }
    }

    /// Tuned defaults for larger instances.
    pub fn large(time_limit: f64, seed: u64) -> Self {
        CmsaParams {
            alpha_lb: 0.25,
            alpha_ub: 0.95,
            alpha_red: 0.1,
            t_ilp: 30.0,
            t_prop: 0.2,
            time_limit,
            seed,
            time_mode: TimeMode::Wall,
            target_obj: None,
            log_path: None,
        }
    }

    /// Profile selection by instance size.
    pub fn for_instance(inst: &Instance, time_limit: f64, seed: u64) -> Self {
        if inst.n() <= 100 {
            CmsaParams::small(time_limit, seed)
        } else {
            CmsaParams::large(time_limit, seed)
        }
    }
}

#[derive(Debug, Clone)]
pub struct CmsaRun {
    pub solution: Solution,
    /// Incumbent records (seconds, objective), non-decreasing in objective.
    pub trajectory: Vec<(f64, usize)>,
    pub iterations: usize,
}

/// Quality-preserving randomized swap of deletion positions followed by LCS
/// re-derivation. Each deleted position is, with probability
/// `1 - alpha_bsf`, swapped for a uniformly drawn unused position of the
/// same symbol; positions without a replacement candidate are skipped. The
/// deletion cardinality is preserved exactly.
pub fn modify_components(
    inst: &Instance,
    s_bsf: &Solution,
    alpha_bsf: f64,
    rng: &mut impl Rng,
) -> Solution {
    let mut member = vec![false; inst.n() + 1];
    for &p in &s_bsf.del_positions {
        member[p] = true;
    }
    let mut working = s_bsf.del_positions.clone();
    for slot in 0..working.len() {
        let i = s_bsf.del_positions[slot];
        if rng.gen::<f64>() > alpha_bsf {
            let sym = inst.a_at(i);
            let candidates: Vec<usize> = inst
                .positions_of(sym)
                .into_iter()
                .filter(|&p| !member[p])
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let replacement = candidates[rng.gen_range(0..candidates.len())];
            member[i] = false;
            member[replacement] = true;
            working[slot] = replacement;
        }
    }
    Solution::evaluated(inst, &working).expect("swaps preserve per-symbol counts")
}

/// The main loop. Returns the best solution, its incumbent trajectory and
/// the iteration count.
pub fn adapt_cmsa_solve(inst: &Instance, params: &CmsaParams) -> CmsaRun {
    let mut sw = Stopwatch::start(params.time_mode);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let alpha_lb = (params.alpha_lb / MICRO).round() as i64;
    let alpha_ub = (params.alpha_ub / MICRO).round() as i64;
    let alpha_red = (params.alpha_red / MICRO).round() as i64;

    let mut s_bsf = rand_sample_construct(inst, &mut rng);
    sw.tick(CONSTRUCT_TICKS);
    let mut trajectory = vec![(sw.elapsed_s(), s_bsf.obj)];

    let mut alpha = alpha_lb;
    let mut n_a: usize = 1;
    let mut iterations = 0;
    let mut na_warned = false;

    let target_hit = |s: &Solution| params.target_obj.is_some_and(|t| s.obj >= t);

    while sw.elapsed_s() < params.time_limit && !target_hit(&s_bsf) {
        iterations += 1;
        let alpha_f = alpha as f64 * MICRO;

        let mut pool_solutions = vec![s_bsf.clone()];
        for _ in 0..n_a {
            if sw.elapsed_s() >= params.time_limit {
                break;
            }
            let s = modify_components(inst, &s_bsf, alpha_f, &mut rng);
            sw.tick(CONSTRUCT_TICKS);
            if s.obj > s_bsf.obj {
                s_bsf = s.clone();
                trajectory.push((sw.elapsed_s(), s_bsf.obj));
            }
            pool_solutions.push(s);
        }

        let pool = ComponentPool::merge(pool_solutions.iter());
        let out = solve_restricted(
            inst,
            &pool,
            params.t_ilp,
            Some(s_bsf.obj),
            params.time_mode,
            None,
        );
        sw.tick(out.nodes);

        if out.t_solve < params.t_prop * params.t_ilp && alpha > alpha_lb {
            alpha = (alpha - alpha_red).max(alpha_lb);
        }

        let s_prime = out.solution;
        if s_prime.obj > s_bsf.obj {
            // Re-derive the optimal chain for the adopted deletion set; the
            // pool-restricted chain need not be LCS-optimal.
            s_bsf = Solution::evaluated(inst, &s_prime.del_positions)
                .expect("solver respects budgets");
            trajectory.push((sw.elapsed_s(), s_bsf.obj));
            n_a = 1;
            alpha = alpha_ub;
        } else if s_prime.obj < s_bsf.obj {
            if n_a == 1 {
                alpha = (alpha + alpha_red / 10).min(alpha_ub);
            } else {
                n_a = 1;
                alpha = alpha_ub;
            }
        } else if n_a < NA_CAP {
            n_a += 1;
        } else if !na_warned {
            log::warn!("construction count capped at {NA_CAP} on {}", inst.name);
            na_warned = true;
        }
    }

    if let Some(path) = &params.log_path {
        if let Ok(mut f) = std::fs::File::create(path) {
            for (t, obj) in &trajectory {
                let _ = writeln!(f, "{t:.6}\t{obj}");
            }
        }
    }

    CmsaRun {
        solution: s_bsf,
        trajectory,
        iterations,
    }
}
