//! Cost-based functions `f(S) = Σ_{i∈S} f({i}) - Σ_{T⊆S} c(T)` and the
//! `C(n,2) + 1` pair family built from them.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::oracle::{QueryTranscript, SetFunction};
use crate::rational::{int, Rational};
use crate::subset::{Subset, MAX_N};

/// A cost-based set function with a sparse cost map.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBasedInstance {
    n: usize,
    singletons: Vec<Rational>,
    cost: BTreeMap<Subset, Rational>,
}

impl CostBasedInstance {
    /// Zero costs are dropped; negative costs or costs on sets of size at most
    /// one are rejected.
    pub fn new(
        n: usize,
        singletons: Vec<Rational>,
        cost: impl IntoIterator<Item = (Subset, Rational)>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSize(format!("cost-based ground set {n}")));
        }
        if singletons.len() != n {
            return Err(Error::InvalidInstance(format!(
                "expected {n} singleton values, got {}",
                singletons.len()
            )));
        }
        let mut map = BTreeMap::new();
        for (t, c) in cost {
            if t.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: t.n(),
                });
            }
            if c.is_negative() {
                return Err(Error::InvalidInstance(format!("cost of {t} is negative")));
            }
            if c == int(0) {
                continue;
            }
            if t.len() <= 1 {
                return Err(Error::InvalidInstance(format!(
                    "cost of {t} must be zero for sets of size <= 1"
                )));
            }
            *map.entry(t).or_insert_with(|| int(0)) += c;
        }
        Ok(Self {
            n,
            singletons,
            cost: map,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn singletons(&self) -> &[Rational] {
        &self.singletons
    }

    pub fn cost(&self) -> &BTreeMap<Subset, Rational> {
        &self.cost
    }

    pub fn cost_of(&self, t: Subset) -> Rational {
        self.cost.get(&t).cloned().unwrap_or_else(|| int(0))
    }
}

impl SetFunction for CostBasedInstance {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, s: Subset) -> Rational {
        let gains = s
            .elements()
            .fold(int(0), |acc, i| acc + &self.singletons[i - 1]);
        self.cost
            .iter()
            .filter(|(t, _)| t.is_subset_of(s))
            .fold(gains, |acc, (_, c)| acc - c)
    }
}

/// The base function `f` together with every variant `f_ij`, `i < j`.
///
/// `f` and `f_ij` differ only on `[n] \ {i, j}`: there `f` is `n - 2` and
/// `f_ij` is `-1`. The non-trivial minimum of `f` is 0, of every `f_ij` it is -1.
#[derive(Debug, Clone)]
pub struct PairFamily {
    n: usize,
    base: CostBasedInstance,
    variants: BTreeMap<(usize, usize), CostBasedInstance>,
}

/// `[n] \ {i, j}`.
pub fn co_pair(n: usize, i: usize, j: usize) -> Subset {
    Subset::full(n).without(i).without(j)
}

pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| ((i + 1)..=n).map(move |j| (i, j)))
}

/// Requires `n >= 4`: at `n = 3` the co-pair sets are singletons, which may
/// not carry cost.
pub fn make_pair_family(n: usize) -> Result<PairFamily> {
    if !(4..=MAX_N).contains(&n) {
        return Err(Error::InvalidSize(format!("pair family needs 4 <= n <= {MAX_N}, got {n}")));
    }
    let ones = vec![int(1); n];
    let nn = n as i64;
    let full = Subset::full(n);

    let mut base_cost: Vec<(Subset, Rational)> =
        (1..=n).map(|i| (full.without(i), int(nn - 1))).collect();
    base_cost.push((full, int(2 * nn)));
    let base = CostBasedInstance::new(n, ones.clone(), base_cost)?;

    let mut variants = BTreeMap::new();
    for (i, j) in pairs(n) {
        let mut cost = vec![(co_pair(n, i, j), int(nn - 1))];
        cost.extend(
            (1..=n)
                .filter(|&k| k != i && k != j)
                .map(|k| (full.without(k), int(nn - 1))),
        );
        cost.push((full, int(3 * nn - 1)));
        variants.insert((i, j), CostBasedInstance::new(n, ones.clone(), cost)?);
    }
    Ok(PairFamily { n, base, variants })
}

impl PairFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &CostBasedInstance {
        &self.base
    }

    pub fn variant(&self, i: usize, j: usize) -> Option<&CostBasedInstance> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.variants.get(&key)
    }

    pub fn variants(&self) -> &BTreeMap<(usize, usize), CostBasedInstance> {
        &self.variants
    }
}

/// Which member of the pair family the adversary settles on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMember {
    Base,
    Pair(usize, usize),
}

#[derive(Debug, Clone)]
pub struct FoolingInstance {
    pub member: FamilyMember,
    pub instance: CostBasedInstance,
    /// Non-trivial minimum of `instance`, which differs from the guess.
    pub nontrivial_min: Rational,
}

/// The adversary that answers every query with the base function.
///
/// Returns a member of the family consistent with `transcript` whose
/// non-trivial minimum differs from `guess`, or `None` when no such member
/// exists (every co-pair set was queried and the guess is 0).
pub fn adversary_pairs(
    family: &PairFamily,
    transcript: &QueryTranscript,
    guess: &Rational,
) -> Result<Option<FoolingInstance>> {
    let n = family.n;
    if let Some((s, v)) = transcript.replay_against(&family.base) {
        return Err(Error::Inconsistent(format!(
            "recorded f({s}) = {v} but the base function gives {}",
            family.base.value(s)
        )));
    }
    let base = || FoolingInstance {
        member: FamilyMember::Base,
        instance: family.base.clone(),
        nontrivial_min: int(0),
    };
    if *guess != int(0) && *guess != int(-1) {
        return Ok(Some(base()));
    }
    let open = pairs(n).find(|&(i, j)| !transcript.contains(co_pair(n, i, j)));
    Ok(match (open, *guess == int(0)) {
        (Some((i, j)), true) => Some(FoolingInstance {
            member: FamilyMember::Pair(i, j),
            instance: family.variants[&(i, j)].clone(),
            nontrivial_min: int(-1),
        }),
        (_, false) => Some(base()),
        (None, true) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{check_submodular, QueryOracle, ValueOracle};
    use crate::rational::ratio;

    fn s(n: usize, e: &[usize]) -> Subset {
        Subset::from_elems(n, e).unwrap()
    }

    #[test]
    fn base_values() {
        let fam = make_pair_family(4).unwrap();
        let f = fam.base();
        assert_eq!(f.value(s(4, &[1, 2])), int(2));
        assert_eq!(f.value(s(4, &[1, 2, 3])), int(0));
        assert_eq!(f.value(Subset::full(4)), int(-16));
    }

    #[test]
    fn variant_values() {
        let fam = make_pair_family(4).unwrap();
        let f12 = fam.variant(1, 2).unwrap();
        assert_eq!(f12.value(s(4, &[3, 4])), int(-1));
        assert_eq!(f12.value(s(4, &[2, 3])), int(2));
        assert_eq!(f12.value(s(4, &[1, 3, 4])), int(0));
        assert_eq!(f12.value(Subset::full(4)), int(-16));
    }

    #[test]
    fn variants_differ_from_base_at_one_set() {
        for n in 4..=6 {
            let fam = make_pair_family(n).unwrap();
            for (&(i, j), v) in fam.variants() {
                let diff: Vec<Subset> = Subset::all(n)
                    .filter(|&t| v.value(t) != fam.base().value(t))
                    .collect();
                assert_eq!(diff, vec![co_pair(n, i, j)]);
            }
        }
    }

    #[test]
    fn rejects_invalid_costs() {
        let single = (s(3, &[1]), int(1));
        assert!(CostBasedInstance::new(3, vec![int(1); 3], [single]).is_err());
        let neg = (s(3, &[1, 2]), int(-1));
        assert!(CostBasedInstance::new(3, vec![int(1); 3], [neg]).is_err());
        assert!(make_pair_family(3).is_err());
    }

    #[test]
    fn random_cost_based_is_submodular() {
        // Costs on all pairs and triples of [4] with small positive weights.
        let cost: Vec<(Subset, Rational)> = Subset::all(4)
            .filter(|t| t.len() >= 2)
            .map(|t| (t, ratio(t.bits() as i64 % 5, 3)))
            .collect();
        let f = CostBasedInstance::new(4, vec![int(2), int(-1), ratio(1, 2), int(0)], cost).unwrap();
        assert!(check_submodular(&f).unwrap().is_none());
    }

    #[test]
    fn adversary_choices() {
        let n = 4;
        let fam = make_pair_family(n).unwrap();
        let mut o = ValueOracle::new(fam.base().clone());
        for (i, j) in pairs(n).filter(|&p| p != (3, 4)) {
            o.evaluate(co_pair(n, i, j)).unwrap();
        }
        let t = o.transcript();
        assert_eq!(t.len(), 5);
        let f0 = adversary_pairs(&fam, t, &int(0)).unwrap().unwrap();
        assert_eq!(f0.member, FamilyMember::Pair(3, 4));
        assert!(t.replay_against(&f0.instance).is_none());
        let f1 = adversary_pairs(&fam, t, &int(-1)).unwrap().unwrap();
        assert_eq!(f1.member, FamilyMember::Base);
        let f7 = adversary_pairs(&fam, t, &int(7)).unwrap().unwrap();
        assert_eq!(f7.member, FamilyMember::Base);

        o.evaluate(co_pair(n, 3, 4)).unwrap();
        assert!(adversary_pairs(&fam, o.transcript(), &int(0)).unwrap().is_none());
        assert!(adversary_pairs(&fam, o.transcript(), &int(-1)).unwrap().is_some());
    }

    #[test]
    fn adversary_rejects_foreign_transcript() {
        let fam = make_pair_family(4).unwrap();
        let mut t = QueryTranscript::new();
        t.push(s(4, &[3, 4]), int(-1));
        assert!(matches!(adversary_pairs(&fam, &t, &int(0)), Err(Error::Inconsistent(_))));
    }
}
