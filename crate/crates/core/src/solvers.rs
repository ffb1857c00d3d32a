//! Reference minimizers that run against any [`QueryOracle`].

use crate::error::{guard, Error, Result};
use crate::oracle::{check_symmetric, QueryOracle, SetFunction, ValueOracle};
use crate::rational::Rational;
use crate::subset::{Subset, MAX_N};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub min_value: Rational,
    pub argmin: Subset,
    pub queries_used: usize,
}

fn keep_best(best: &mut Option<(Rational, Subset)>, v: Rational, s: Subset) {
    if best.as_ref().is_none_or(|(b, _)| v < *b) {
        *best = Some((v, s));
    }
}

/// Queries every in-scope subset once, in bitmask order.
pub fn brute_force_sfm(oracle: &mut dyn QueryOracle, nontrivial: bool) -> Result<SolverResult> {
    let n = oracle.ground_size();
    guard("brute-force SFM", n, MAX_N)?;
    if nontrivial && n < 2 {
        return Err(Error::Degenerate("no non-trivial subsets when n = 1".into()));
    }
    let start = oracle.queries_used();
    let mut best = None;
    for s in Subset::all(n).filter(|s| !nontrivial || s.is_nontrivial()) {
        let v = oracle.query(s)?;
        keep_best(&mut best, v, s);
    }
    let (min_value, argmin) = best.expect("scope is non-empty");
    Ok(SolverResult {
        min_value,
        argmin,
        queries_used: oracle.queries_used() - start,
    })
}

/// Non-trivial SFM by constrained brute force: for every `i`, minimize over
/// sets containing `i` and missing its cyclic successor, then its cyclic
/// predecessor.
pub fn nontrivial_via_reduction(oracle: &mut dyn QueryOracle) -> Result<SolverResult> {
    let n = oracle.ground_size();
    guard("non-trivial reduction", n, MAX_N)?;
    if n < 2 {
        return Err(Error::InvalidSize("non-trivial SFM needs n >= 2".into()));
    }
    let start = oracle.queries_used();
    let mut best = None;
    for i in 1..=n {
        let succ = i % n + 1;
        let pred = if i == 1 { n } else { i - 1 };
        let excluded: &[usize] = if succ == pred { &[succ] } else { &[succ, pred] };
        for &j in excluded {
            let free = Subset::full(n).without(i).without(j);
            for s in free.subsets() {
                let s = s.with(i);
                let v = oracle.query(s)?;
                keep_best(&mut best, v, s);
            }
        }
    }
    let (min_value, argmin) = best.expect("n >= 2");
    Ok(SolverResult {
        min_value,
        argmin,
        queries_used: oracle.queries_used() - start,
    })
}

/// Queyranne's pendant-pair algorithm for non-trivial symmetric SFM.
///
/// Each phase orders the current groups greedily by the key
/// `f(W ∪ u) - f(u)`, records the last group `u` as a candidate cut, and
/// merges it into the second-to-last group. The caller asserts symmetry.
pub fn queyranne_minimize(oracle: &mut dyn QueryOracle) -> Result<SolverResult> {
    let n = oracle.ground_size();
    if n < 2 {
        return Err(Error::InvalidSize("non-trivial SFM needs n >= 2".into()));
    }
    let start = oracle.queries_used();
    let mut groups: Vec<Subset> = (1..=n).map(|i| Subset::singleton(n, i)).collect();
    let mut best: Option<(Rational, Subset)> = None;

    while groups.len() >= 2 {
        let k = groups.len();
        let mut alone = Vec::with_capacity(k);
        for &g in &groups {
            alone.push(oracle.query(g)?);
        }
        let mut order = vec![0usize];
        let mut placed = vec![false; k];
        placed[0] = true;
        let mut w = groups[0];
        while order.len() < k {
            let mut pick: Option<(Rational, usize)> = None;
            for u in (0..k).filter(|&u| !placed[u]) {
                let key = oracle.query(w.union(groups[u]))? - &alone[u];
                if pick.as_ref().is_none_or(|(b, _)| key < *b) {
                    pick = Some((key, u));
                }
            }
            let (_, u) = pick.expect("an unplaced group remains");
            placed[u] = true;
            order.push(u);
            w = w.union(groups[u]);
        }
        let last = order[k - 1];
        let second = order[k - 2];
        keep_best(&mut best, alone[last].clone(), groups[last]);
        let merged = groups[second].union(groups[last]);
        groups[second] = merged;
        groups.remove(last);
    }
    let (min_value, argmin) = best.expect("at least one phase ran");
    Ok(SolverResult {
        min_value,
        argmin,
        queries_used: oracle.queries_used() - start,
    })
}

/// Verifies symmetry exhaustively (`n <= 12`) and then runs Queyranne's
/// algorithm on a fresh counting oracle.
pub fn queyranne_minimize_checked<F: SetFunction>(f: F) -> Result<SolverResult> {
    let n = f.ground_size();
    guard("symmetry verification", n, 12)?;
    if let Some(s) = check_symmetric(&f)? {
        return Err(Error::NotSymmetric(s));
    }
    queyranne_minimize(&mut ValueOracle::new(f))
}
