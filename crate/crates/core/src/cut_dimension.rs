//! Generalized cut dimension: the rank of the indicator vectors of all
//! minimizers of a weight-based function, and the base-set argument that
//! bounds it by `n + 1` when trivial minimizers are allowed.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{guard, Error, Result};
use crate::linalg::{RowSpace, Vector};
use crate::oracle::SetFunction;
use crate::rational::{one, zero, Rational};
use crate::subset::{Subset, MAX_N};
use crate::weight_based::WeightBasedFunction;

/// `v^S`: 1 on hyperedges active at `S` that carry positive weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndicatorVector(Vec<u8>);

impl IndicatorVector {
    pub fn coords(&self) -> &[u8] {
        &self.0
    }

    pub fn to_rationals(&self) -> Vector {
        self.0.iter().map(|&x| if x == 1 { one() } else { zero() }).collect()
    }

    pub fn dot(&self, z: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(z)
            .filter(|(&x, _)| x == 1)
            .fold(zero(), |acc, (_, y)| acc + y)
    }
}

pub fn indicator_vector(f: &WeightBasedFunction, s: Subset) -> IndicatorVector {
    let active = f.system().active_set(s);
    IndicatorVector(
        f.weights()
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, w)| u8::from(active.contains(i) && !w.is_zero()))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerFamily {
    /// Sorted by bitmask.
    pub sets: Vec<Subset>,
    pub min_value: Rational,
    pub nontrivial: bool,
}

impl MinimizerFamily {
    pub fn contains(&self, s: Subset) -> bool {
        self.sets.binary_search(&s).is_ok()
    }
}

/// Subsets a minimization ranges over: everything, or everything but `∅` and `[n]`.
pub fn in_scope(n: usize, nontrivial: bool) -> impl Iterator<Item = Subset> {
    Subset::all(n).filter(move |s| !nontrivial || s.is_nontrivial())
}

pub fn enumerate_minimizers(f: &WeightBasedFunction, nontrivial: bool) -> Result<MinimizerFamily> {
    let n = f.ground_size();
    guard("minimizer enumeration", n, MAX_N)?;
    if nontrivial && n < 2 {
        return Err(Error::Degenerate("no non-trivial subsets when n = 1".into()));
    }
    let mut best: Option<Rational> = None;
    let mut sets = Vec::new();
    for s in in_scope(n, nontrivial) {
        let v = f.value(s);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => sets.push(s),
            _ => {
                best = Some(v);
                sets.clear();
                sets.push(s);
            }
        }
    }
    Ok(MinimizerFamily {
        sets,
        min_value: best.expect("scope is non-empty"),
        nontrivial,
    })
}

#[derive(Debug, Clone)]
pub struct CutDimension {
    pub d: usize,
    /// Minimizers whose indicator vectors form a basis, chosen greedily in sorted order.
    pub basis: Vec<Subset>,
    pub family: MinimizerFamily,
}

/// Greedy independent subfamily of `sets` (in the given order).
pub fn greedy_basis(f: &WeightBasedFunction, sets: &[Subset]) -> Vec<Subset> {
    let mut space = RowSpace::new(f.system().m());
    sets.iter()
        .copied()
        .filter(|&s| space.insert(&indicator_vector(f, s).to_rationals()))
        .collect()
}

pub fn cut_dimension(f: &WeightBasedFunction, nontrivial: bool) -> Result<CutDimension> {
    guard("hyperedge count", f.system().m(), 4096)?;
    let family = enumerate_minimizers(f, nontrivial)?;
    let basis = greedy_basis(f, &family.sets);
    Ok(CutDimension {
        d: basis.len(),
        basis,
        family,
    })
}

/// `S_i` = intersection of all minimizers containing `i`, plus `∅` when it minimizes.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSets {
    pub per_element: Vec<Option<Subset>>,
    pub include_empty: bool,
}

impl BaseSets {
    /// The distinct base sets, sorted.
    pub fn sets(&self) -> Vec<Subset> {
        let mut out: BTreeSet<Subset> = self.per_element.iter().flatten().copied().collect();
        if self.include_empty {
            out.insert(Subset::empty(self.per_element.len()));
        }
        out.into_iter().collect()
    }
}

pub fn compute_base_sets(fam: &MinimizerFamily, n: usize) -> BaseSets {
    let per_element = (1..=n)
        .map(|i| {
            fam.sets
                .iter()
                .filter(|s| s.contains(i))
                .copied()
                .reduce(Subset::intersection)
        })
        .collect();
    BaseSets {
        per_element,
        include_empty: fam.contains(Subset::empty(n)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpanBoundFailure {
    /// `S ∪ T` or `S ∩ T` is missing from the family.
    NotClosed(Subset, Subset),
    /// `S ≠ ∪_{i∈S} S_i`.
    NotUnionOfBaseSets(Subset),
    /// `v^{S∪T} + v^{S∩T} ≠ v^S + v^T`.
    ModularIdentity(Subset, Subset),
    /// `v^S` is outside the span of the base-set vectors.
    NotInSpan(Subset),
    /// Rank exceeds the number of base sets, or that number exceeds `n + 1`.
    RankBound { d: usize, base_count: usize },
}

#[derive(Debug, Clone)]
pub struct SpanBoundReport {
    pub family: MinimizerFamily,
    pub base_sets: BaseSets,
    pub base_count: usize,
    pub d: usize,
    pub failure: Option<SpanBoundFailure>,
}

impl SpanBoundReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks, on the trivial-allowed minimizer family, closure under union and
/// intersection, the union-of-base-sets decomposition, the modular identity on
/// indicator vectors, and that base-set vectors span every minimizer vector.
pub fn verify_span_bound(f: &WeightBasedFunction) -> Result<SpanBoundReport> {
    guard("span-bound verification", f.ground_size(), 16)?;
    let family = enumerate_minimizers(f, false)?;
    verify_span_bound_for(f, family)
}

/// Same checks against an arbitrary family, e.g. a non-trivial one (where
/// closure is expected to fail).
pub fn verify_span_bound_for(f: &WeightBasedFunction, family: MinimizerFamily) -> Result<SpanBoundReport> {
    let n = f.ground_size();
    guard("span-bound verification", n, 16)?;
    let base_sets = compute_base_sets(&family, n);
    let bases = base_sets.sets();
    let mut space = RowSpace::new(f.system().m());
    for &b in &bases {
        space.insert(&indicator_vector(f, b).to_rationals());
    }
    let d = greedy_basis(f, &family.sets).len();
    let failure = span_failure(f, &family, &base_sets, &space).or_else(|| {
        (d > bases.len() || bases.len() > n + 1).then_some(SpanBoundFailure::RankBound {
            d,
            base_count: bases.len(),
        })
    });
    Ok(SpanBoundReport {
        base_count: bases.len(),
        family,
        base_sets,
        d,
        failure,
    })
}

fn span_failure(
    f: &WeightBasedFunction,
    family: &MinimizerFamily,
    base_sets: &BaseSets,
    space: &RowSpace,
) -> Option<SpanBoundFailure> {
    let sets = &family.sets;
    for (k, &s) in sets.iter().enumerate() {
        for &t in &sets[k..] {
            if !family.contains(s.union(t)) || !family.contains(s.intersection(t)) {
                return Some(SpanBoundFailure::NotClosed(s, t));
            }
        }
    }
    let n = f.ground_size();
    for &s in sets {
        let rebuilt = s
            .elements()
            .filter_map(|i| base_sets.per_element[i - 1])
            .fold(Subset::empty(n), Subset::union);
        if rebuilt != s {
            return Some(SpanBoundFailure::NotUnionOfBaseSets(s));
        }
    }
    let vecs: Vec<IndicatorVector> = sets.iter().map(|&s| indicator_vector(f, s)).collect();
    for (a, &s) in sets.iter().enumerate() {
        for (b, &t) in sets.iter().enumerate().skip(a) {
            let u = indicator_vector(f, s.union(t));
            let i = indicator_vector(f, s.intersection(t));
            let holds = (0..u.0.len()).all(|e| u.0[e] + i.0[e] == vecs[a].0[e] + vecs[b].0[e]);
            if !holds {
                return Some(SpanBoundFailure::ModularIdentity(s, t));
            }
        }
    }
    sets.iter()
        .zip(&vecs)
        .find(|(_, v)| !space.contains(&v.to_rationals()))
        .map(|(&s, _)| SpanBoundFailure::NotInSpan(s))
}

/// Expected non-trivial cut dimension of the star-matching graph:
/// `3(n-1)/2` for odd `n`, `3n/2 - 2` for even `n`.
pub fn star_matching_expected_dimension(n: usize) -> usize {
    if n % 2 == 1 {
        3 * (n - 1) / 2
    } else {
        3 * n / 2 - 2
    }
}

/// Value gap helper shared with the perturbation module: the in-scope values
/// sorted and deduplicated.
pub(crate) fn distinct_values(f: &WeightBasedFunction, nontrivial: bool) -> Vec<Rational> {
    let set: BTreeSet<Rational> = in_scope(f.ground_size(), nontrivial).map(|s| f.value(s)).collect();
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::linalg::rank;
    use crate::weight_based::{build_star_matching_graph, GraphMode, WeightedGraph};

    fn s(n: usize, e: &[usize]) -> Subset {
        Subset::from_elems(n, e).unwrap()
    }

    fn star(n: usize) -> WeightBasedFunction {
        WeightBasedFunction::from_graph(&build_star_matching_graph(n).unwrap())
    }

    fn parallel_paths() -> WeightBasedFunction {
        let g = WeightedGraph::from_triples(
            4,
            GraphMode::St { s: 1, t: 4, directed: false },
            [(1, 2, int(1)), (1, 3, int(1)), (2, 4, int(1)), (3, 4, int(1))],
        )
        .unwrap();
        WeightBasedFunction::from_graph(&g)
    }

    #[test]
    fn triangle_indicator_vectors() {
        let f = star(3);
        assert_eq!(indicator_vector(&f, s(3, &[2])).coords(), &[1, 0, 1]);
        assert_eq!(indicator_vector(&f, s(3, &[3])).coords(), &[0, 1, 1]);
        assert_eq!(indicator_vector(&f, s(3, &[2, 3])).coords(), &[1, 1, 0]);
        assert_eq!(indicator_vector(&f, Subset::empty(3)).coords(), &[0, 0, 0]);
    }

    #[test]
    fn zero_weight_masks_coordinate() {
        let g = WeightedGraph::from_triples(
            3,
            GraphMode::Undirected,
            [(1, 2, int(1)), (1, 3, int(1)), (2, 3, int(1)), (2, 1, int(0))],
        )
        .unwrap();
        let f = WeightBasedFunction::from_graph(&g);
        assert_eq!(indicator_vector(&f, s(3, &[2])).coords(), &[1, 0, 1, 0]);
    }

    #[test]
    fn star_matching_minimizers_n5() {
        let fam = enumerate_minimizers(&star(5), true).unwrap();
        assert_eq!(fam.min_value, int(2));
        assert_eq!(fam.sets.len(), 12);
        // {w_1} = {2}, {w'_1} = {3}, {w_1, w'_1} = {2,3} and complements
        for e in [&[2][..], &[3], &[2, 3], &[4], &[5], &[4, 5]] {
            let t = s(5, e);
            assert!(fam.contains(t) && fam.contains(t.complement()));
        }
    }

    #[test]
    fn trivial_family_is_empty_and_full() {
        let fam = enumerate_minimizers(&star(5), false).unwrap();
        assert_eq!(fam.sets, vec![Subset::empty(5), Subset::full(5)]);
        assert_eq!(fam.min_value, int(0));
    }

    #[test]
    fn parallel_paths_family_and_dimension() {
        let f = parallel_paths();
        let fam = enumerate_minimizers(&f, false).unwrap();
        assert_eq!(fam.sets.len(), 4);
        assert_eq!(fam.min_value, int(2));
        let cd = cut_dimension(&f, false).unwrap();
        assert_eq!(cd.d, 3);
        assert_eq!(cd.basis, vec![Subset::empty(2), s(2, &[1]), s(2, &[2])]);
        let bs = compute_base_sets(&fam, 2);
        assert_eq!(bs.per_element, vec![Some(s(2, &[1])), Some(s(2, &[2]))]);
        assert_eq!(bs.sets(), vec![Subset::empty(2), s(2, &[1]), s(2, &[2])]);
        let rep = verify_span_bound(&f).unwrap();
        assert!(rep.passed(), "{:?}", rep.failure);
    }

    #[test]
    fn base_sets_of_singleton_families() {
        let full = MinimizerFamily { sets: vec![Subset::full(3)], min_value: int(0), nontrivial: false };
        let bs = compute_base_sets(&full, 3);
        assert_eq!(bs.sets(), vec![Subset::full(3)]);
        let empty = MinimizerFamily { sets: vec![Subset::empty(3)], min_value: int(0), nontrivial: false };
        let bs = compute_base_sets(&empty, 3);
        assert!(bs.per_element.iter().all(Option::is_none));
        assert_eq!(bs.sets(), vec![Subset::empty(3)]);
    }

    #[test]
    fn star_matching_dimensions() {
        for n in 3..=9 {
            let cd = cut_dimension(&star(n), true).unwrap();
            assert_eq!(cd.d, star_matching_expected_dimension(n), "n = {n}");
        }
        assert_eq!(star_matching_expected_dimension(4), 4);
        assert_eq!(star_matching_expected_dimension(7), 9);
    }

    #[test]
    fn nontrivial_family_is_not_closed() {
        let f = star(6);
        let fam = enumerate_minimizers(&f, true).unwrap();
        let rep = verify_span_bound_for(&f, fam).unwrap();
        assert!(matches!(rep.failure, Some(SpanBoundFailure::NotClosed(_, _))));
    }

    #[test]
    fn rank_is_invariant_under_scaling() {
        let f = star(6);
        let scaled = f
            .with_weights(f.weights().scaled(&crate::rational::ratio(7, 3)).unwrap())
            .unwrap();
        let a = cut_dimension(&f, true).unwrap();
        let b = cut_dimension(&scaled, true).unwrap();
        assert_eq!(a.family.sets, b.family.sets);
        assert_eq!(a.d, b.d);
        let rows: Vec<Vector> = a.family.sets.iter().map(|&t| indicator_vector(&f, t).to_rationals()).collect();
        assert_eq!(rank(&rows), a.d);
    }

    #[test]
    fn nontrivial_needs_two_elements() {
        let g = WeightedGraph::from_triples(1, GraphMode::Undirected, []).unwrap();
        let f = WeightBasedFunction::from_graph(&g);
        assert!(matches!(enumerate_minimizers(&f, true), Err(Error::Degenerate(_))));
    }
}
