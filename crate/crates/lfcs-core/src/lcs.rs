//! Dynamic-programming LCS with traceback, plus a longest-chain routine over
//! an arbitrary set of matching pairs.
//!
//! Both routines return 1-based index pairs and use the same tie-breaking:
//! among optimal chains, the one whose pairs are lexicographically smallest
//! by (first-string index, second-string index) is produced. This keeps
//! component extraction deterministic across runs.

/// A deduplicated set of matching pairs `(i, j)` with `X[i] = Y[j]`.
#[derive(Debug, Clone, Default)]
pub struct MatchSet {
    pairs: Vec<(usize, usize)>,
}

impl MatchSet {
    /// Builds a set from arbitrary pairs; duplicates are dropped and the
    /// result is sorted by `(i, j)`.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        MatchSet { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `C_i`: positions of the second string matched to position `i`.
    pub fn matched_to_first(&self, i: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .filter(|&&(p, _)| p == i)
            .map(|&(_, q)| q)
            .collect()
    }

    /// `C^j`: positions of the first string matched to position `j`.
    pub fn matched_to_second(&self, j: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .filter(|&&(_, q)| q == j)
            .map(|&(p, _)| p)
            .collect()
    }
}

/// All symbol-equal index pairs between `a` and `b` (the full set `R`).
pub fn all_matchings(a: &[u8], b: &[u8]) -> MatchSet {
    let mut pairs = Vec::new();
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if x == y {
                pairs.push((i + 1, j + 1));
            }
        }
    }
    MatchSet::new(pairs)
}

/// LCS length and a witness chain, `O(|x|·|y|)` time and memory.
pub fn lcs(x: &[u8], y: &[u8]) -> (usize, Vec<(usize, usize)>) {
    let n = x.len();
    let m = y.len();
    // suf[i][j] = LCS length of x[i..] and y[j..].
    let w = m + 1;
    let mut suf = vec![0u32; (n + 1) * w];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            suf[i * w + j] = if x[i] == y[j] {
                1 + suf[(i + 1) * w + j + 1]
            } else {
                suf[(i + 1) * w + j].max(suf[i * w + j + 1])
            };
        }
    }
    let total = suf[0] as usize;

    // Greedy traceback: repeatedly take the lexicographically smallest pair
    // that still permits an optimal completion. Rows are never revisited, so
    // the scan is O(nm) overall.
    let mut chain = Vec::with_capacity(total);
    let mut need = suf[0];
    let (mut i, mut j) = (0usize, 0usize);
    while need > 0 {
        let mut found = false;
        while i < n {
            let mut jj = j;
            while jj < m {
                if x[i] == y[jj] && 1 + suf[(i + 1) * w + jj + 1] == need {
                    chain.push((i + 1, jj + 1));
                    i += 1;
                    j = jj + 1;
                    need -= 1;
                    found = true;
                    break;
                }
                jj += 1;
            }
            if found {
                break;
            }
            i += 1;
        }
        debug_assert!(found, "traceback lost an optimal chain");
        if !found {
            break;
        }
    }
    (total, chain)
}

/// Maximum-cardinality chain (strictly increasing in both coordinates) over
/// `pool`, avoiding first-string positions in `forbidden_first`.
///
/// Pairs are sorted by (i ascending, j descending) and a patience-style
/// longest-increasing-subsequence over the j values does the rest; the sort
/// order makes "at most one pair per i" implicit. `O(P log P)`.
pub fn longest_chain(pool: &MatchSet, forbidden_first: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let mut pairs: Vec<(usize, usize)> = pool
        .pairs()
        .iter()
        .filter(|&&(i, _)| !forbidden_first.contains(&i))
        .copied()
        .collect();
    pairs.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));

    // tails[k]: index into `pairs` of the pair with the smallest j ending an
    // increasing subsequence of length k+1.
    let mut tails: Vec<usize> = Vec::new();
    let mut prev: Vec<usize> = vec![usize::MAX; pairs.len()];
    for (idx, &(_, j)) in pairs.iter().enumerate() {
        let pos = tails.partition_point(|&t| pairs[t].1 < j);
        if pos > 0 {
            prev[idx] = tails[pos - 1];
        }
        if pos == tails.len() {
            tails.push(idx);
        } else {
            tails[pos] = idx;
        }
    }
    let mut chain = Vec::with_capacity(tails.len());
    if let Some(&last) = tails.last() {
        let mut cur = last;
        loop {
            chain.push(pairs[cur]);
            if prev[cur] == usize::MAX {
                break;
            }
            cur = prev[cur];
        }
        chain.reverse();
    }
    (chain.len(), chain)
}
