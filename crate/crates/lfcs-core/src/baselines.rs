//! Literature baselines: the 3/5-approximation, randomized greedy sampling
//! and the windowed hill-climbing local search.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, Multiset};
use crate::lcs;
use crate::solution::Solution;

#[derive(Debug, Clone, Copy)]
pub struct RandSampleConfig {
    pub n_rand: usize,
    pub seed: u64,
}

impl Default for RandSampleConfig {
    fn default() -> Self {
        RandSampleConfig {
            n_rand: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LocalSearchConfig {
    /// Window width; 2 and 4 are the benchmark settings, any k >= 1 works.
    pub k: usize,
    pub seed: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig { k: 2, seed: 0 }
    }
}

/// Left-to-right scan over `a_prime`: a position is taken iff its symbol is
/// still available in the running copy of the multiset, which is then
/// decremented. Returns 1-based positions into `a_prime`.
pub fn greedy_match(a_prime: &[u8], m: &Multiset) -> Vec<usize> {
    let mut budget = m.clone();
    let mut taken = Vec::new();
    for (i, &sym) in a_prime.iter().enumerate() {
        if budget.take(sym) {
            taken.push(i + 1);
        }
    }
    taken
}

/// The 3/5-approximation: match an LCS of `A` and `B`, then greedily match
/// the leftover symbols of `A` against the multiset. The final objective is
/// recomputed through a fresh evaluation, which can only improve it.
pub fn approx_solve(inst: &Instance) -> Solution {
    let (_, chain) = lcs::lcs(inst.a(), inst.b());
    let matched: Vec<usize> = chain.iter().map(|&(i, _)| i).collect();
    // Residual string and its original coordinates.
    let mut residual = Vec::new();
    let mut orig = Vec::new();
    for p in 1..=inst.n() {
        if !matched.contains(&p) {
            residual.push(inst.a_at(p));
            orig.push(p);
        }
    }
    let dels: Vec<usize> = greedy_match(&residual, inst.m())
        .into_iter()
        .map(|p| orig[p - 1])
        .collect();
    Solution::evaluated(inst, &dels).expect("greedy match respects budgets")
}

/// One randomized construction: for each symbol, delete
/// `min(count_A(sigma), |M_sigma|)` of its occurrences chosen uniformly
/// without replacement, then evaluate.
pub fn rand_sample_construct(inst: &Instance, rng: &mut impl Rng) -> Solution {
    let mut dels = Vec::new();
    for sym in inst.m().symbols() {
        let positions = inst.positions_of(sym);
        let c = positions.len().min(inst.m().count(sym));
        if c == 0 {
            continue;
        }
        for idx in rand::seq::index::sample(rng, positions.len(), c) {
            dels.push(positions[idx]);
        }
    }
    Solution::evaluated(inst, &dels).expect("sampled deletions respect budgets")
}

/// Best of `n_rand` independent constructions, ties broken by first
/// occurrence.
pub fn rand_sample_solve(inst: &Instance, cfg: &RandSampleConfig) -> Solution {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = rand_sample_construct(inst, &mut rng);
    for _ in 1..cfg.n_rand {
        let s = rand_sample_construct(inst, &mut rng);
        if s.obj > best.obj {
            best = s;
        }
    }
    best
}

/// Windowed hill-climbing (the Sk local search).
///
/// Sweeps all length-k windows of `A`; for each window every deletion
/// pattern replaces the incumbent's flags at the window positions,
/// budget-infeasible candidates are skipped and any improvement is accepted
/// immediately. Sweeps repeat until one completes with no improvement. When
/// no start is given, the best of the default randomized-sampling run is
/// refined, so the search strictly dominates plain sampling under the same
/// seed.
pub fn local_search_solve(
    inst: &Instance,
    cfg: &LocalSearchConfig,
    start: Option<Solution>,
) -> Solution {
    let mut incumbent = start.unwrap_or_else(|| {
        rand_sample_solve(
            inst,
            &RandSampleConfig {
                seed: cfg.seed,
                ..RandSampleConfig::default()
            },
        )
    });
    let n = inst.n();
    let k = cfg.k.min(n);
    if n == 0 || k == 0 {
        return incumbent;
    }

    let mut counts_a = [0usize; 256];
    for &s in inst.a() {
        counts_a[s as usize] += 1;
    }

    loop {
        let mut improved = false;
        for w in 1..=(n - k + 1) {
            let mut flags = vec![false; n + 1];
            for &p in &incumbent.del_positions {
                flags[p] = true;
            }
            for pattern in 0u32..(1 << k) {
                let mut cand = flags.clone();
                for off in 0..k {
                    cand[w + off] = pattern & (1 << off) != 0;
                }
                // Budget pre-check.
                let mut used = [0usize; 256];
                let mut feasible = true;
                for p in 1..=n {
                    if cand[p] {
                        let s = inst.a_at(p) as usize;
                        used[s] += 1;
                        if used[s] > inst.m().count(s as u8) {
                            feasible = false;
                            break;
                        }
                    }
                }
                if !feasible {
                    continue;
                }
                let dels: Vec<usize> = (1..=n).filter(|&p| cand[p]).collect();
                let s = Solution::evaluated(inst, &dels).expect("pre-checked budget");
                if s.obj > incumbent.obj {
                    incumbent = s;
                    improved = true;
                    // First improvement: keep sweeping from the next window
                    // with the new incumbent.
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    incumbent
}
