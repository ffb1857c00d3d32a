//! The permutation family `f_σ^c`, its adaptive adversary, and the matching
//! `2n`-query solver.
//!
//! The chain sets are `R_i = {σ(1), ..., σ(i)}` for `0 <= i <= n`. On a chain
//! set the function is `-c_i`; on any other set `S` it is
//! `(|S| - j(S)) * (n + 2 - j(S))` with `j(S)` the largest `j` such that
//! `R_j ⊆ S`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{QueryOracle, QueryTranscript, SetFunction};
use crate::rational::{int, Rational};
use crate::subset::{Subset, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationInstance {
    n: usize,
    /// `sigma[k - 1] = σ(k)`.
    sigma: Vec<usize>,
    /// `c[i]` for `0 <= i <= n`.
    c: Vec<u8>,
}

fn off_chain_value(n: usize, size: usize, j: usize) -> Rational {
    int(((size - j) * (n + 2 - j)) as i64)
}

impl PermutationInstance {
    pub fn new(sigma: Vec<usize>, c: Vec<u8>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSize(format!("permutation length {n}")));
        }
        let mut seen = vec![false; n + 1];
        for &e in &sigma {
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidInstance(format!(
                    "sigma {sigma:?} is not a permutation of 1..={n}"
                )));
            }
            seen[e] = true;
        }
        if c.len() != n + 1 || c.iter().any(|&x| x > 1) {
            return Err(Error::InvalidInstance(format!(
                "c must have n + 1 = {} entries in {{0, 1}}, got {c:?}",
                n + 1
            )));
        }
        Ok(Self { n, sigma, c })
    }

    pub fn identity(n: usize, c: Vec<u8>) -> Result<Self> {
        Self::new((1..=n).collect(), c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn c(&self) -> &[u8] {
        &self.c
    }

    /// `R_i`.
    pub fn chain_set(&self, i: usize) -> Subset {
        Subset::from_elems(self.n, &self.sigma[..i]).expect("sigma validated")
    }

    /// Position of element `e` in σ, i.e. `σ^{-1}(e)`.
    pub fn position(&self, e: usize) -> usize {
        self.sigma.iter().position(|&x| x == e).expect("sigma validated") + 1
    }

    /// `j(S)`: the length of the longest chain prefix contained in `s`.
    pub fn chain_depth(&self, s: Subset) -> usize {
        self.sigma.iter().take_while(|&&e| s.contains(e)).count()
    }

    /// Minimum over all sets: `min_i(-c_i)`, since off-chain values are positive.
    pub fn true_min(&self) -> Rational {
        if self.c.contains(&1) {
            int(-1)
        } else {
            int(0)
        }
    }

    /// Smallest `R_i` attaining the minimum.
    pub fn argmin(&self) -> Subset {
        let i = self.c.iter().position(|&x| x == 1).unwrap_or(0);
        self.chain_set(i)
    }
}

impl SetFunction for PermutationInstance {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, s: Subset) -> Rational {
        let j = self.chain_depth(s);
        if s.len() == j {
            int(-(self.c[j] as i64))
        } else {
            off_chain_value(self.n, s.len(), j)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryClass {
    Important,
    Useless,
    Decoy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Fooled,
    Correct,
}

/// Adaptive adversary that fixes σ and c only as queries force it to.
#[derive(Debug, Clone)]
pub struct Adversary2n {
    n: usize,
    partial_sigma: Vec<usize>,
    partial_c: Vec<Option<u8>>,
    distinct_important: BTreeSet<Subset>,
    decoy_count: usize,
    transcript: QueryTranscript,
    classes: Vec<QueryClass>,
}

impl Adversary2n {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSize(format!("adversary ground set {n}")));
        }
        Ok(Self {
            n,
            partial_sigma: Vec::new(),
            partial_c: vec![None; n + 1],
            distinct_important: BTreeSet::new(),
            decoy_count: 0,
            transcript: QueryTranscript::new(),
            classes: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partial_sigma(&self) -> &[usize] {
        &self.partial_sigma
    }

    pub fn partial_c(&self) -> &[Option<u8>] {
        &self.partial_c
    }

    pub fn distinct_important(&self) -> usize {
        self.distinct_important.len()
    }

    pub fn decoy_count(&self) -> usize {
        self.decoy_count
    }

    pub fn classes(&self) -> &[QueryClass] {
        &self.classes
    }

    fn prefix(&self, len: usize) -> Subset {
        Subset::from_elems(self.n, &self.partial_sigma[..len]).expect("distinct elements")
    }

    fn chain_index(&self, s: Subset) -> Option<usize> {
        if s.is_full() {
            // [n] = R_n whatever σ turns out to be
            return Some(self.n);
        }
        let i = self.partial_sigma.len();
        (s.len() <= i && self.prefix(s.len()) == s).then_some(s.len())
    }

    pub fn answer(&mut self, s: Subset) -> Result<(Rational, QueryClass)> {
        if s.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: s.n(),
            });
        }
        let i = self.partial_sigma.len();
        let (value, class) = if let Some(j) = self.chain_index(s) {
            self.partial_c[j] = Some(0);
            self.distinct_important.insert(s);
            (int(0), QueryClass::Important)
        } else if !self.prefix(i).is_subset_of(s) {
            let j = self
                .partial_sigma
                .iter()
                .take_while(|&&e| s.contains(e))
                .count();
            (off_chain_value(self.n, s.len(), j), QueryClass::Useless)
        } else {
            // R_i ⊊ S ≠ [n]: extend σ with the smallest absent element.
            let fresh = s.complement().elements().next().expect("S is not [n]");
            self.partial_sigma.push(fresh);
            self.decoy_count += 1;
            (off_chain_value(self.n, s.len(), i), QueryClass::Decoy)
        };
        self.transcript.push(s, value.clone());
        self.classes.push(class);
        Ok((value, class))
    }

    /// Completes σ and c against `guess` and judges it.
    pub fn finalize(&self, guess: &Rational) -> FinalizedGame {
        let fill = if self.distinct_important.len() < self.n + 1 && *guess == int(0) {
            1
        } else {
            0
        };
        let c: Vec<u8> = self.partial_c.iter().map(|x| x.unwrap_or(fill)).collect();
        let mut sigma = self.partial_sigma.clone();
        sigma.extend((1..=self.n).filter(|e| !self.partial_sigma.contains(e)));
        let instance = PermutationInstance::new(sigma, c).expect("completion is valid");
        let true_min = instance.true_min();
        let verdict = if *guess == true_min {
            Verdict::Correct
        } else {
            Verdict::Fooled
        };
        FinalizedGame {
            instance,
            true_min,
            verdict,
        }
    }
}

impl QueryOracle for Adversary2n {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn query(&mut self, s: Subset) -> Result<Rational> {
        self.answer(s).map(|(v, _)| v)
    }
    fn transcript(&self) -> &QueryTranscript {
        &self.transcript
    }
}

#[derive(Debug, Clone)]
pub struct FinalizedGame {
    pub instance: PermutationInstance,
    pub true_min: Rational,
    pub verdict: Verdict,
}

/// Recovers σ from the `n - 1` co-singletons `[n] \ {i}`, `i != 1`, then
/// queries all `n + 1` chain sets. Exactly `2n` queries.
pub fn solve_permutation_family(oracle: &mut dyn QueryOracle) -> Result<(Rational, Subset)> {
    let n = oracle.ground_size();
    let mut sigma = vec![0usize; n];
    for e in 2..=n {
        let v = oracle.query(Subset::full(n).without(e))?;
        let pos = if v <= int(0) {
            n
        } else {
            (1..n)
                .find(|&k| off_chain_value(n, n - 1, k - 1) == v)
                .ok_or_else(|| {
                    Error::Inconsistent(format!("f([n] \\ {{{e}}}) = {v} matches no position"))
                })?
        };
        if sigma[pos - 1] != 0 {
            return Err(Error::Inconsistent(format!(
                "elements {} and {e} both decode to position {pos}",
                sigma[pos - 1]
            )));
        }
        sigma[pos - 1] = e;
    }
    let hole = sigma.iter().position(|&x| x == 0).expect("one slot is left");
    sigma[hole] = 1;

    let mut best: Option<(Rational, Subset)> = None;
    for i in 0..=n {
        let r = Subset::from_elems(n, &sigma[..i])?;
        let v = oracle.query(r)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, r));
        }
    }
    Ok(best.expect("n + 1 >= 1 chain sets"))
}
