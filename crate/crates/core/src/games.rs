//! Full plays of the two adversary games against a few reference solvers.

use rand::Rng;

use crate::error::{Error, Result};
use crate::generators::rng;
use crate::hard_instances::{
    adversary_pairs, co_pair, make_pair_family, pairs, solve_permutation_family, Adversary2n, FamilyMember,
    FinalizedGame, Verdict,
};
use crate::oracle::{QueryOracle, QueryTranscript, ValueOracle};
use crate::rational::{int, Rational};
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Query every subset in scope, answer the smallest value seen.
    Brute,
    /// The `2n`-query solver for the permutation family.
    TwoN,
    /// A solver cut off one query short of what it needs.
    Truncated,
    /// Seeded random queries, one short of the lower bound.
    Random,
}

/// Passes queries through until `left` hits zero.
pub struct Budgeted<'a> {
    inner: &'a mut dyn QueryOracle,
    left: usize,
}

impl<'a> Budgeted<'a> {
    pub fn new(inner: &'a mut dyn QueryOracle, budget: usize) -> Self {
        Self { inner, left: budget }
    }
}

impl QueryOracle for Budgeted<'_> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn query(&mut self, s: Subset) -> Result<Rational> {
        if self.left == 0 {
            return Err(Error::Degenerate("query budget exhausted".into()));
        }
        self.left -= 1;
        self.inner.query(s)
    }
    fn transcript(&self) -> &QueryTranscript {
        self.inner.transcript()
    }
}

/// Checks `distinct_important <= decoy_count + 2` after every answer.
struct Watched<'a> {
    adv: &'a mut Adversary2n,
    held: bool,
}

impl QueryOracle for Watched<'_> {
    fn ground_size(&self) -> usize {
        self.adv.n()
    }
    fn query(&mut self, s: Subset) -> Result<Rational> {
        let (v, _) = self.adv.answer(s)?;
        self.held &= self.adv.distinct_important() <= self.adv.decoy_count() + 2;
        Ok(v)
    }
    fn transcript(&self) -> &QueryTranscript {
        self.adv.transcript()
    }
}

fn min_seen(t: &QueryTranscript) -> Rational {
    t.entries().iter().map(|(_, v)| v.clone()).min().unwrap_or_else(|| int(0))
}

fn random_subset(r: &mut impl Rng, n: usize) -> Subset {
    Subset::new(n, r.gen_range(0..(1u32 << n))).expect("mask is in range")
}

#[derive(Debug, Clone)]
pub struct Game2nReport {
    pub n: usize,
    pub guess: Rational,
    pub queries_used: usize,
    pub distinct_important: usize,
    pub decoy_count: usize,
    pub finalized: FinalizedGame,
    /// Every answer matches the finalized instance.
    pub replay_consistent: bool,
    /// `distinct_important <= decoy_count + 2` held after every answer.
    pub counting_invariant: bool,
}

impl Game2nReport {
    /// Too few queries (total or important) must end with the solver fooled.
    pub fn lower_bound_holds(&self) -> bool {
        let starved = self.queries_used < 2 * self.n || self.distinct_important < self.n + 1;
        !starved || self.finalized.verdict == Verdict::Fooled
    }

    pub fn passed(&self) -> bool {
        self.replay_consistent && self.counting_invariant && self.lower_bound_holds()
    }
}

/// Plays the permutation-family game with a custom solver that returns its
/// guess. Solver errors end the game with the smallest value seen as guess.
pub fn play_2n_with(
    n: usize,
    solver: impl FnOnce(&mut dyn QueryOracle) -> Result<Rational>,
) -> Result<Game2nReport> {
    let mut adv = Adversary2n::new(n)?;
    let mut watched = Watched { adv: &mut adv, held: true };
    let guess = match solver(&mut watched) {
        Ok(g) => g,
        Err(Error::Degenerate(_)) => min_seen(watched.transcript()),
        Err(e) => return Err(e),
    };
    let held = watched.held;
    let finalized = adv.finalize(&guess);
    Ok(Game2nReport {
        n,
        queries_used: adv.queries_used(),
        distinct_important: adv.distinct_important(),
        decoy_count: adv.decoy_count(),
        replay_consistent: adv.transcript().replay_against(&finalized.instance).is_none(),
        counting_invariant: held,
        guess,
        finalized,
    })
}

pub fn play_2n(n: usize, strategy: Strategy, seed: u64) -> Result<Game2nReport> {
    play_2n_with(n, |o| match strategy {
        Strategy::Brute => {
            for s in Subset::all(n) {
                o.query(s)?;
            }
            Ok(min_seen(o.transcript()))
        }
        Strategy::TwoN => solve_permutation_family(o).map(|(v, _)| v),
        Strategy::Truncated => solve_permutation_family(&mut Budgeted::new(o, 2 * n - 1)).map(|(v, _)| v),
        Strategy::Random => {
            let mut r = rng(seed);
            for _ in 0..2 * n - 1 {
                o.query(random_subset(&mut r, n))?;
            }
            Ok(min_seen(o.transcript()))
        }
    })
}

#[derive(Debug, Clone)]
pub struct PairsReport {
    pub n: usize,
    pub guess: Rational,
    pub queries_used: usize,
    /// Distinct co-pair sets `[n] \ {i, j}` among the queries.
    pub co_pair_queries: usize,
    pub fooled_by: Option<FamilyMember>,
    pub fooling_min: Option<Rational>,
    /// The fooling instance reproduces every recorded answer.
    pub fooling_consistent: bool,
}

impl PairsReport {
    pub fn passed(&self) -> bool {
        let total = self.n * (self.n - 1) / 2;
        self.fooling_consistent && (self.co_pair_queries >= total || self.fooled_by.is_some())
    }
}

/// Plays the pair-family game: the solver sees the base function and the
/// adversary then looks for a family member that contradicts the guess.
pub fn play_pairs_with(
    n: usize,
    solver: impl FnOnce(&mut dyn QueryOracle) -> Result<Rational>,
) -> Result<PairsReport> {
    let family = make_pair_family(n)?;
    let mut oracle = ValueOracle::new(family.base().clone());
    let guess = match solver(&mut oracle) {
        Ok(g) => g,
        Err(Error::Degenerate(_)) => min_seen(oracle.transcript()),
        Err(e) => return Err(e),
    };
    let transcript = oracle.transcript().clone();
    let co_pair_queries = pairs(n).filter(|&(i, j)| transcript.contains(co_pair(n, i, j))).count();
    let fooling = adversary_pairs(&family, &transcript, &guess)?;
    let fooling_consistent = fooling
        .as_ref()
        .is_none_or(|f| transcript.replay_against(&f.instance).is_none() && f.nontrivial_min != guess);
    Ok(PairsReport {
        n,
        queries_used: transcript.len(),
        co_pair_queries,
        fooled_by: fooling.as_ref().map(|f| f.member),
        fooling_min: fooling.map(|f| f.nontrivial_min),
        fooling_consistent,
        guess,
    })
}

pub fn play_pairs(n: usize, strategy: Strategy, seed: u64) -> Result<PairsReport> {
    let total = n * (n - 1) / 2;
    play_pairs_with(n, |o| match strategy {
        Strategy::Brute | Strategy::TwoN => {
            for s in Subset::all(n).filter(|s| s.is_nontrivial()) {
                o.query(s)?;
            }
            Ok(min_seen(o.transcript()))
        }
        Strategy::Truncated => {
            for (i, j) in pairs(n).take(total - 1) {
                o.query(co_pair(n, i, j))?;
            }
            Ok(int(0))
        }
        Strategy::Random => {
            let mut r = rng(seed);
            while o.queries_used() < total - 1 {
                let s = random_subset(&mut r, n);
                if s.is_nontrivial() {
                    o.query(s)?;
                }
            }
            Ok(min_seen(o.transcript()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_n_game() {
        for n in 3..=8 {
            let r = play_2n(n, Strategy::TwoN, 0).unwrap();
            assert!(r.passed());
            assert_eq!(r.finalized.verdict, Verdict::Correct);
            assert_eq!(r.queries_used, 2 * n);
            for s in [Strategy::Truncated, Strategy::Random] {
                let r = play_2n(n, s, 7).unwrap();
                assert!(r.passed(), "n = {n}, {s:?}");
                assert_eq!(r.finalized.verdict, Verdict::Fooled);
            }
        }
        let r = play_2n(6, Strategy::Brute, 0).unwrap();
        assert!(r.passed() && r.queries_used >= 12);
        assert_eq!(r.finalized.verdict, Verdict::Correct);
    }

    #[test]
    fn pairs_game() {
        for n in 4..=7 {
            let r = play_pairs(n, Strategy::Brute, 0).unwrap();
            assert!(r.passed() && r.fooled_by.is_none() && r.guess == int(0));
            for s in [Strategy::Truncated, Strategy::Random] {
                let r = play_pairs(n, s, 3).unwrap();
                assert!(r.passed() && r.fooled_by.is_some(), "n = {n}, {s:?}");
            }
        }
    }
}
