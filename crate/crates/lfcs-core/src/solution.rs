//! Solution representation, the objective function and feasibility checks.
//!
//! A solution consists of the deleted positions of `A` (matched against the
//! fill multiset) and a non-conflicting matching chain between the residual
//! string and `B`. The objective is the number of deletions plus the chain
//! length; `evaluate` recomputes the chain as an optimal LCS of the residual.

use crate::error::Error;
use crate::instance::Instance;
use crate::lcs;

/// True iff two matching pairs cannot coexist in a common subsequence:
/// they are different and cross or share a coordinate.
pub fn in_conflict(p: (usize, usize), q: (usize, usize)) -> bool {
    p != q && ((p.0 <= q.0 && p.1 >= q.1) || (p.0 >= q.0 && p.1 <= q.1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Sorted 1-based positions of `A` deleted into the multiset.
    pub del_positions: Vec<usize>,
    /// Matching chain in original `A` coordinates, strictly increasing in
    /// both coordinates.
    pub match_pairs: Vec<(usize, usize)>,
    pub obj: usize,
}

impl Solution {
    /// The empty solution (valid for any instance).
    pub fn empty() -> Self {
        Solution {
            del_positions: Vec::new(),
            match_pairs: Vec::new(),
            obj: 0,
        }
    }

    /// Builds a solution from raw component sets with `obj = r + |pairs|`.
    /// No chain-optimality claim is made; see [`CheckMode::Structural`].
    pub fn from_parts(mut del_positions: Vec<usize>, match_pairs: Vec<(usize, usize)>) -> Self {
        del_positions.sort_unstable();
        del_positions.dedup();
        let obj = del_positions.len() + match_pairs.len();
        Solution {
            del_positions,
            match_pairs,
            obj,
        }
    }

    /// Evaluates a deletion set against an instance, deriving an optimal
    /// chain for the residual string.
    pub fn evaluated(inst: &Instance, del_positions: &[usize]) -> Result<Self, Error> {
        let (obj, chain) = evaluate(inst, del_positions)?;
        let mut dels = del_positions.to_vec();
        dels.sort_unstable();
        dels.dedup();
        Ok(Solution {
            del_positions: dels,
            match_pairs: chain,
            obj,
        })
    }

    /// Number of deleted positions (`r`).
    pub fn r(&self) -> usize {
        self.del_positions.len()
    }
}

/// Objective evaluation: `r + LCS(A \ dels, B)`, returning the value and one
/// optimal chain expressed in original `A` coordinates. Deterministic for a
/// fixed input (traceback tie-breaking is fixed in [`crate::lcs`]).
pub fn evaluate(
    inst: &Instance,
    del_positions: &[usize],
) -> Result<(usize, Vec<(usize, usize)>), Error> {
    let n = inst.n();
    let mut dels = del_positions.to_vec();
    dels.sort_unstable();
    dels.dedup();
    for &p in &dels {
        if p == 0 || p > n {
            return Err(Error::IndexOutOfRange { pos: p, len: n });
        }
    }
    // Per-symbol deletion budget.
    let mut used = [0usize; 256];
    for &p in &dels {
        let s = inst.a_at(p);
        used[s as usize] += 1;
        if used[s as usize] > inst.m().count(s) {
            return Err(Error::BudgetViolation {
                symbol: s,
                used: used[s as usize],
                budget: inst.m().count(s),
            });
        }
    }
    // Residual string with a map back to original coordinates.
    let mut residual = Vec::with_capacity(n - dels.len());
    let mut orig_pos = Vec::with_capacity(n - dels.len());
    let mut d = 0;
    for p in 1..=n {
        if d < dels.len() && dels[d] == p {
            d += 1;
        } else {
            residual.push(inst.a_at(p));
            orig_pos.push(p);
        }
    }
    let (len, chain) = lcs::lcs(&residual, inst.b());
    let chain: Vec<(usize, usize)> = chain
        .into_iter()
        .map(|(i, j)| (orig_pos[i - 1], j))
        .collect();
    Ok((dels.len() + len, chain))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// `obj` must equal the value recomputed by `evaluate`.
    Strict,
    /// `obj` must equal `r + |match_pairs|`; used for heuristic intermediate
    /// states whose chain is not claimed to be LCS-optimal.
    Structural,
}

/// Verifies all solution invariants against an instance. Returns the verdict
/// together with a list of diagnostics for each violated invariant.
pub fn check_solution(inst: &Instance, s: &Solution, mode: CheckMode) -> (bool, Vec<String>) {
    let mut diags = Vec::new();
    let n = inst.n();
    let m = inst.m_len();

    for &p in &s.del_positions {
        if p == 0 || p > n {
            diags.push(format!("deletion position {p} out of range 1..={n}"));
        }
    }
    if s.del_positions.windows(2).any(|w| w[0] >= w[1]) {
        diags.push("del_positions not sorted strictly ascending".to_string());
    }

    let mut used = [0usize; 256];
    for &p in &s.del_positions {
        if p >= 1 && p <= n {
            used[inst.a_at(p) as usize] += 1;
        }
    }
    for sym in inst.sigma() {
        if used[sym as usize] > inst.m().count(sym) {
            diags.push(format!(
                "budget violated for '{}': {} > {}",
                sym as char,
                used[sym as usize],
                inst.m().count(sym)
            ));
        }
    }

    for w in s.match_pairs.windows(2) {
        if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
            diags.push(format!(
                "pairs {:?} and {:?} not strictly increasing",
                w[0], w[1]
            ));
        }
    }
    for &(i, j) in &s.match_pairs {
        if i == 0 || i > n || j == 0 || j > m {
            diags.push(format!("pair ({i},{j}) out of range"));
        } else if inst.a_at(i) != inst.b()[j - 1] {
            diags.push(format!("pair ({i},{j}) symbols differ"));
        }
    }
    for &(i, _) in &s.match_pairs {
        if s.del_positions.binary_search(&i).is_ok() {
            diags.push(format!("position {i} both deleted and matched"));
        }
    }

    match mode {
        CheckMode::Structural => {
            if s.obj != s.r() + s.match_pairs.len() {
                diags.push(format!(
                    "obj {} != r + |pairs| = {}",
                    s.obj,
                    s.r() + s.match_pairs.len()
                ));
            }
        }
        CheckMode::Strict => match evaluate(inst, &s.del_positions) {
            Ok((obj, _)) => {
                if s.obj != obj {
                    diags.push(format!("obj {} != evaluated value {obj}", s.obj));
                }
            }
            Err(e) => diags.push(format!("evaluate failed: {e}")),
        },
    }

    (diags.is_empty(), diags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::example1;

    const EX1_DELS: [usize; 11] = [4, 5, 6, 7, 8, 9, 10, 12, 13, 15, 16];

    #[test]
    fn conflict_predicate() {
        assert!(!in_conflict((1, 1), (2, 2)));
        assert!(in_conflict((3, 4), (3, 5)));
        assert!(in_conflict((2, 5), (4, 3)));
        // Symmetric, irreflexive.
        assert!(in_conflict((4, 3), (2, 5)));
        assert!(!in_conflict((3, 4), (3, 4)));
    }

    #[test]
    fn evaluate_example1() {
        let inst = example1();
        let (obj, chain) = evaluate(&inst, &EX1_DELS).unwrap();
        assert_eq!(obj, 15);
        assert_eq!(chain, vec![(1, 1), (2, 2), (3, 4), (14, 5)]);
    }

    #[test]
    fn evaluate_no_deletions_is_plain_lcs() {
        let inst = example1();
        let (obj, _) = evaluate(&inst, &[]).unwrap();
        let (len, _) = lcs::lcs(inst.a(), inst.b());
        assert_eq!(obj, len);
    }

    #[test]
    fn evaluate_tiny() {
        let inst = Instance::parse("t", "AA\nA\nA\n").unwrap();
        let (obj, _) = evaluate(&inst, &[1]).unwrap();
        assert_eq!(obj, 2);
    }

    #[test]
    fn evaluate_rejects_budget_violation() {
        let inst = example1();
        // Two 'D' deletions but |M_D| = 1: position 15 is the only D, so use
        // a duplicate-free over-budget set of 'C' instead (|M_C| = 1).
        let err = evaluate(&inst, &[6, 11]).unwrap_err();
        assert!(matches!(err, Error::BudgetViolation { symbol: b'C', .. }));
    }

    #[test]
    fn evaluate_rejects_bad_position() {
        let inst = example1();
        assert!(matches!(
            evaluate(&inst, &[17]).unwrap_err(),
            Error::IndexOutOfRange { .. }
        ));
        assert!(matches!(
            evaluate(&inst, &[0]).unwrap_err(),
            Error::IndexOutOfRange { .. }
        ));
    }

    #[test]
    fn check_published_solution() {
        let inst = example1();
        let s = Solution::evaluated(&inst, &EX1_DELS).unwrap();
        assert_eq!(s.obj, 15);
        let (ok, diags) = check_solution(&inst, &s, CheckMode::Strict);
        assert!(ok, "{diags:?}");
    }

    #[test]
    fn check_rejects_overlap() {
        let inst = example1();
        let s = Solution {
            del_positions: vec![1],
            match_pairs: vec![(1, 1)],
            obj: 2,
        };
        let (ok, diags) = check_solution(&inst, &s, CheckMode::Structural);
        assert!(!ok);
        assert!(diags.iter().any(|d| d.contains("both deleted and matched")));
    }

    #[test]
    fn check_rejects_budget() {
        let inst = example1();
        let s = Solution::from_parts(vec![6, 11], vec![]);
        let (ok, diags) = check_solution(&inst, &s, CheckMode::Structural);
        assert!(!ok, "{diags:?}");
    }
}
