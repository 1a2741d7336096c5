//! Exact solving over component pools: a branch-and-bound over matching
//! chains for the full model and for restricted subproblems, plus the
//! exhaustive oracle used by the tests.
//!
//! The key structural fact: once a matching chain is fixed, the optimal
//! deletions decouple per symbol. For a chain `X` the best deletion count is
//! `sum_over_sigma min(|M_sigma|, a_sigma - u_sigma(X))`, where `a_sigma`
//! counts deletable pool positions of that symbol and `u_sigma(X)` those
//! occupied by the chain. Only chain choices need branching; the bound at a
//! node adds the longest possible chain extension and the current deletion
//! closure, both monotone upper bounds, so pruning is admissible.

use crate::baselines;
use crate::clock::{Stopwatch, TimeMode};
use crate::error::Error;
use crate::instance::Instance;
use crate::lcs::all_matchings;
use crate::solution::Solution;

/// Merged component sets defining a restricted subproblem.
#[derive(Debug, Clone, Default)]
pub struct ComponentPool {
    /// Deduplicated matching pairs, sorted by (i, j).
    pub match_b: Vec<(usize, usize)>,
    /// Deduplicated deletable positions of `A`, sorted.
    pub match_am: Vec<usize>,
}

impl ComponentPool {
    /// Union of the component sets of a solution set.
    pub fn merge<'a>(solutions: impl IntoIterator<Item = &'a Solution>) -> Self {
        let mut match_b = Vec::new();
        let mut match_am = Vec::new();
        for s in solutions {
            match_b.extend_from_slice(&s.match_pairs);
            match_am.extend_from_slice(&s.del_positions);
        }
        match_b.sort_unstable();
        match_b.dedup();
        match_am.sort_unstable();
        match_am.dedup();
        ComponentPool { match_b, match_am }
    }

    /// The unrestricted pool: all matchings of `A` and `B` plus every
    /// position whose symbol has a positive fill budget.
    pub fn full(inst: &Instance) -> Self {
        let match_b = all_matchings(inst.a(), inst.b()).pairs().to_vec();
        let match_am = (1..=inst.n())
            .filter(|&p| inst.m().count(inst.a_at(p)) > 0)
            .collect();
        ComponentPool { match_b, match_am }
    }

    pub fn is_empty(&self) -> bool {
        self.match_b.is_empty() && self.match_am.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The search tree was exhausted; the solution is provably best over the
    /// pool.
    Optimal,
    /// Stopped early after finding a solution better than the cutoff.
    CutoffImproved,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub solution: Solution,
    /// Seconds spent in the solve (virtual in [`TimeMode::Virtual`]).
    pub t_solve: f64,
    pub status: SolveStatus,
    pub nodes: u64,
}

struct Search<'a> {
    inst: &'a Instance,
    /// Pool pairs sorted by (i asc, j desc).
    pairs: Vec<(usize, usize)>,
    /// Longest chain in the pool starting with pair `p`.
    chain_from: Vec<usize>,
    /// match_am membership, indexed by 1-based position.
    deletable: Vec<bool>,
    /// Sorted deletable positions per symbol.
    am_by_symbol: [Vec<usize>; 256],
    /// Remaining deletable occurrences per symbol (a_sigma - u_sigma).
    avail: [usize; 256],
    /// Running deletion closure sum.
    del_bound: usize,

    chain: Vec<usize>,
    best: Solution,
    cutoff: Option<usize>,
    limit_s: f64,
    sw: Stopwatch,
    nodes: u64,
    stopped: Option<SolveStatus>,
}

const TIME_CHECK_MASK: u64 = 0xFF;

impl<'a> Search<'a> {
    fn new(
        inst: &'a Instance,
        pool: &ComponentPool,
        limit_s: f64,
        cutoff: Option<usize>,
        mode: TimeMode,
        warm: Option<&Solution>,
    ) -> Self {
        let mut pairs = pool.match_b.clone();
        pairs.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));

        let p = pairs.len();
        let mut chain_from = vec![1usize; p];
        for u in (0..p).rev() {
            let (i, j) = pairs[u];
            let mut best_ext = 0;
            for v in u + 1..p {
                let (x, y) = pairs[v];
                if x > i && y > j {
                    best_ext = best_ext.max(chain_from[v]);
                }
            }
            chain_from[u] = 1 + best_ext;
        }

        let mut deletable = vec![false; inst.n() + 1];
        let mut am_by_symbol: [Vec<usize>; 256] = std::array::from_fn(|_| Vec::new());
        let mut avail = [0usize; 256];
        for &pos in &pool.match_am {
            deletable[pos] = true;
            let sym = inst.a_at(pos) as usize;
            am_by_symbol[sym].push(pos);
            avail[sym] += 1;
        }
        let mut del_bound = 0;
        for sym in 0..256 {
            del_bound += avail[sym].min(inst.m().count(sym as u8));
        }

        let best = warm.cloned().unwrap_or_else(Solution::empty);

        Search {
            inst,
            pairs,
            chain_from,
            deletable,
            am_by_symbol,
            avail,
            del_bound,
            chain: Vec::new(),
            best,
            cutoff,
            limit_s,
            sw: Stopwatch::start(mode),
            nodes: 0,
            stopped: None,
        }
    }

    fn recompute_del_bound(&self) -> usize {
        (0..256)
            .map(|s| self.avail[s].min(self.inst.m().count(s as u8)))
            .sum()
    }

    /// Materializes the best deletions for the current chain: per symbol the
    /// smallest free positions, up to the closure count.
    fn materialize(&self) -> Solution {
        let chain: Vec<(usize, usize)> = self.chain.iter().map(|&u| self.pairs[u]).collect();
        let on_chain: Vec<usize> = chain.iter().map(|&(i, _)| i).collect();
        let mut dels = Vec::new();
        for sym in 0..256usize {
            let take = self.avail[sym].min(self.inst.m().count(sym as u8));
            if take == 0 {
                continue;
            }
            dels.extend(
                self.am_by_symbol[sym]
                    .iter()
                    .filter(|p| !on_chain.contains(p))
                    .take(take),
            );
        }
        Solution::from_parts(dels, chain)
    }

    fn occupy(&mut self, pos: usize, delta: isize) {
        if !self.deletable[pos] {
            return;
        }
        let sym = self.inst.a_at(pos) as usize;
        let budget = self.inst.m().count(sym as u8);
        let before = self.avail[sym].min(budget);
        if delta > 0 {
            self.avail[sym] -= 1;
        } else {
            self.avail[sym] += 1;
        }
        let after = self.avail[sym].min(budget);
        self.del_bound = self.del_bound + after - before;
    }

    fn dfs(&mut self, last: Option<usize>) {
        if self.stopped.is_some() {
            return;
        }
        self.nodes += 1;
        self.sw.tick(1);
        if self.nodes & TIME_CHECK_MASK == 0 && self.sw.elapsed_s() >= self.limit_s {
            self.stopped = Some(SolveStatus::TimeLimit);
            return;
        }

        let value = self.chain.len() + self.del_bound;
        if value > self.best.obj {
            self.best = self.materialize();
            debug_assert_eq!(self.best.obj, value);
        }
        // The incumbent may beat the cutoff from the warm start alone.
        if let Some(c) = self.cutoff {
            if self.best.obj > c {
                self.stopped = Some(SolveStatus::CutoffImproved);
                return;
            }
        }

        let (li, lj, start) = match last {
            Some(u) => (self.pairs[u].0, self.pairs[u].1, u + 1),
            None => (0, 0, 0),
        };

        let mut ext = 0;
        for v in start..self.pairs.len() {
            let (x, y) = self.pairs[v];
            if x > li && y > lj {
                ext = ext.max(self.chain_from[v]);
            }
        }
        if self.chain.len() + ext + self.del_bound <= self.best.obj {
            return;
        }

        for v in start..self.pairs.len() {
            let (x, y) = self.pairs[v];
            if x <= li || y <= lj {
                continue;
            }
            if self.chain.len() + self.chain_from[v] + self.del_bound <= self.best.obj {
                continue;
            }
            self.chain.push(v);
            self.occupy(x, 1);
            self.dfs(Some(v));
            self.occupy(x, -1);
            self.chain.pop();
            if self.stopped.is_some() {
                return;
            }
        }
    }
}

/// Maximizes deletions plus chain length over the components of `pool`,
/// within `time_limit_s` seconds. With a `cutoff`, the search stops as soon
/// as a solution strictly better than the cutoff is found. A warm-start
/// solution (whose components must come from the pool) seeds the incumbent.
pub fn solve_restricted(
    inst: &Instance,
    pool: &ComponentPool,
    time_limit_s: f64,
    cutoff: Option<usize>,
    mode: TimeMode,
    warm: Option<&Solution>,
) -> SolverOutcome {
    let mut search = Search::new(inst, pool, time_limit_s, cutoff, mode, warm);
    debug_assert_eq!(search.del_bound, search.recompute_del_bound());
    search.dfs(None);
    let status = search.stopped.unwrap_or(SolveStatus::Optimal);
    SolverOutcome {
        solution: search.best,
        t_solve: search.sw.elapsed_s(),
        status,
        nodes: search.nodes,
    }
}

/// The standalone exact competitor: solve over the unrestricted pool. A
/// deterministic heuristic warm start seeds the incumbent.
pub fn solve_full_ilp(
    inst: &Instance,
    time_limit_s: f64,
    cutoff: Option<usize>,
    mode: TimeMode,
) -> SolverOutcome {
    let pool = ComponentPool::full(inst);
    let warm = baselines::approx_solve(inst);
    solve_restricted(inst, &pool, time_limit_s, cutoff, mode, Some(&warm))
}

const ORACLE_MAX_N: usize = 20;

/// Exhaustive reference: max over all budget-feasible deletion subsets of
/// `|D| + LCS(A \ D, B)`, with a length-only LCS recurrence independent of
/// the engine in [`crate::lcs`].
pub fn brute_force_oracle(inst: &Instance) -> Result<usize, Error> {
    let n = inst.n();
    if n > ORACLE_MAX_N {
        return Err(Error::InstanceTooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let b = inst.b();
    let m = b.len();
    let mut best = 0;
    let mut residual = Vec::with_capacity(n);
    let mut cur = vec![0usize; m + 1];
    let mut prev = vec![0usize; m + 1];
    'subsets: for mask in 0u32..(1 << n) {
        let mut used = [0usize; 256];
        residual.clear();
        for p in 1..=n {
            let sym = inst.a_at(p);
            if mask & (1 << (p - 1)) != 0 {
                used[sym as usize] += 1;
                if used[sym as usize] > inst.m().count(sym) {
                    continue 'subsets;
                }
            } else {
                residual.push(sym);
            }
        }
        // Two-row LCS length.
        prev.iter_mut().for_each(|v| *v = 0);
        for &x in &residual {
            cur[0] = 0;
            for j in 1..=m {
                cur[j] = if x == b[j - 1] {
                    prev[j - 1] + 1
                } else {
                    prev[j].max(cur[j - 1])
                };
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        best = best.max(mask.count_ones() as usize + prev[m]);
    }
    Ok(best)
}
