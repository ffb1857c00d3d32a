//! Set functions, the counting value oracle, and exhaustive structural checks.

use std::collections::BTreeSet;

use crate::error::{guard, Error, Result};
use crate::rational::Rational;
use crate::subset::{Subset, MAX_N};

/// A set function `f: 2^[n] -> Q` evaluated without any accounting.
pub trait SetFunction {
    fn ground_size(&self) -> usize;
    fn value(&self, s: Subset) -> Rational;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: Subset) -> Rational {
        (**self).value(s)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: Subset) -> Rational {
        (**self).value(s)
    }
}

/// Adapts a closure into a [`SetFunction`].
pub struct FnFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(Subset) -> Rational> FnFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(Subset) -> Rational> SetFunction for FnFunction<F> {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn value(&self, s: Subset) -> Rational {
        (self.f)(s)
    }
}

/// Append-only record of answered queries. Duplicates are kept.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryTranscript {
    entries: Vec<(Subset, Rational)>,
}

impl QueryTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: Subset, v: Rational) {
        self.entries.push((s, v));
    }

    pub fn entries(&self) -> &[(Subset, Rational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distinct(&self) -> BTreeSet<Subset> {
        self.entries.iter().map(|(s, _)| *s).collect()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.entries.iter().any(|(t, _)| *t == s)
    }

    /// First entry whose recorded answer differs from `f`, if any.
    pub fn replay_against<F: SetFunction + ?Sized>(&self, f: &F) -> Option<(Subset, Rational)> {
        self.entries
            .iter()
            .find(|(s, v)| f.value(*s) != *v)
            .map(|(s, v)| (*s, v.clone()))
    }
}

/// Anything that answers value queries and keeps a transcript of them.
///
/// Solvers are written against this trait so they can play against a fixed
/// function or an adaptive adversary without change.
pub trait QueryOracle {
    fn ground_size(&self) -> usize;
    fn query(&mut self, s: Subset) -> Result<Rational>;
    fn transcript(&self) -> &QueryTranscript;

    fn queries_used(&self) -> usize {
        self.transcript().len()
    }
}

/// Counting wrapper around a fixed [`SetFunction`].
pub struct ValueOracle<F> {
    f: F,
    transcript: QueryTranscript,
}

impl<F: SetFunction> ValueOracle<F> {
    pub fn new(f: F) -> Self {
        Self {
            f,
            transcript: QueryTranscript::new(),
        }
    }

    pub fn evaluate(&mut self, s: Subset) -> Result<Rational> {
        let n = self.f.ground_size();
        if s.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: s.n(),
            });
        }
        let v = self.f.value(s);
        self.transcript.push(s, v.clone());
        Ok(v)
    }

    pub fn counter(&self) -> usize {
        self.transcript.len()
    }

    pub fn function(&self) -> &F {
        &self.f
    }

    pub fn into_parts(self) -> (F, QueryTranscript) {
        (self.f, self.transcript)
    }
}

impl<F: SetFunction> QueryOracle for ValueOracle<F> {
    fn ground_size(&self) -> usize {
        self.f.ground_size()
    }
    fn query(&mut self, s: Subset) -> Result<Rational> {
        self.evaluate(s)
    }
    fn transcript(&self) -> &QueryTranscript {
        &self.transcript
    }
}

/// Values of `f` on all `2^n` subsets, indexed by bitmask.
pub fn value_table<F: SetFunction + ?Sized>(f: &F) -> Result<Vec<Rational>> {
    let n = f.ground_size();
    guard("value table", n, MAX_N)?;
    Ok(Subset::all(n).map(|s| f.value(s)).collect())
}

/// Exhaustive check of `f(X ∪ Y) + f(X ∩ Y) <= f(X) + f(Y)`.
///
/// Returns `None` when `f` is submodular, otherwise the first violating pair
/// in bitmask order.
pub fn check_submodular<F: SetFunction + ?Sized>(f: &F) -> Result<Option<(Subset, Subset)>> {
    let n = f.ground_size();
    guard("submodularity check", n, 16)?;
    let table = value_table(f)?;
    let size = 1u32 << n;
    for x in 0..size {
        for y in (x + 1)..size {
            // comparable pairs hold with equality
            if x & y == x || x & y == y {
                continue;
            }
            let lhs = &table[(x | y) as usize] + &table[(x & y) as usize];
            let rhs = &table[x as usize] + &table[y as usize];
            if lhs > rhs {
                return Ok(Some((Subset::raw(n, x), Subset::raw(n, y))));
            }
        }
    }
    Ok(None)
}

/// Exhaustive check of diminishing returns:
/// `f(S ∪ {i}) - f(S) <= f(T ∪ {i}) - f(T)` for `T ⊆ S`, `i ∉ S`.
///
/// Returns the first violating `(S, T, i)`.
pub fn check_diminishing_returns<F: SetFunction + ?Sized>(
    f: &F,
) -> Result<Option<(Subset, Subset, usize)>> {
    let n = f.ground_size();
    guard("diminishing-returns check", n, 12)?;
    let table = value_table(f)?;
    for s in Subset::all(n) {
        for i in s.complement().elements() {
            let gain_s = &table[s.with(i).bits() as usize] - &table[s.bits() as usize];
            for t in s.subsets() {
                let gain_t = &table[t.with(i).bits() as usize] - &table[t.bits() as usize];
                if gain_s > gain_t {
                    return Ok(Some((s, t, i)));
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustive check of `f(S) = f([n] \ S)`; returns the first asymmetric `S`.
pub fn check_symmetric<F: SetFunction + ?Sized>(f: &F) -> Result<Option<Subset>> {
    let n = f.ground_size();
    guard("symmetry check", n, 20)?;
    Ok(Subset::all(n).find(|&s| f.value(s) != f.value(s.complement())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn square_of_size(n: usize) -> FnFunction<impl Fn(Subset) -> Rational> {
        FnFunction::new(n, |s: Subset| int((s.len() * s.len()) as i64))
    }

    #[test]
    fn counter_and_transcript_track_queries() {
        let mut o = ValueOracle::new(square_of_size(3));
        let s = Subset::from_elems(3, &[1, 2]).unwrap();
        assert_eq!(o.evaluate(s).unwrap(), int(4));
        assert_eq!(o.evaluate(s).unwrap(), int(4));
        assert_eq!(o.counter(), 2);
        assert_eq!(o.transcript().distinct().len(), 1);
        assert!(o.transcript().replay_against(o.function()).is_none());
    }

    #[test]
    fn size_mismatch_is_rejected_without_counting() {
        let mut o = ValueOracle::new(square_of_size(3));
        let err = o.evaluate(Subset::empty(4)).unwrap_err();
        assert_eq!(err, Error::SizeMismatch { expected: 3, found: 4 });
        assert_eq!(o.counter(), 0);
    }

    #[test]
    fn square_of_size_violates_at_first_disjoint_pair() {
        let v = check_submodular(&square_of_size(3)).unwrap().unwrap();
        assert_eq!(v, (Subset::from_elems(3, &[1]).unwrap(), Subset::from_elems(3, &[2]).unwrap()));
        assert!(check_diminishing_returns(&square_of_size(3)).unwrap().is_some());
    }

    #[test]
    fn cardinality_is_asymmetric_at_empty_set() {
        let f = FnFunction::new(4, |s: Subset| int(s.len() as i64));
        assert_eq!(check_symmetric(&f).unwrap(), Some(Subset::empty(4)));
        assert!(check_submodular(&f).unwrap().is_none());
    }

    #[test]
    fn guards() {
        let f = FnFunction::new(17, |_s: Subset| int(0));
        assert!(matches!(check_submodular(&f), Err(Error::EnumerationLimit { .. })));
        let g = FnFunction::new(21, |_s: Subset| int(0));
        assert!(matches!(check_symmetric(&g), Err(Error::EnumerationLimit { .. })));
    }
}
