//! Perturbation witnesses for weight-based functions.
//!
//! For a weight-based `f` with cut dimension `d`, any `d - 1` queries leave a
//! direction `z` in the span of the minimizer indicator vectors that the
//! queries cannot see. Moving the weights slightly along `±z` keeps every
//! answer and changes the minimum. Conversely the `d` basis minimizers pin
//! every minimizer's value for all nearby weights.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cut_dimension::{
    cut_dimension, distinct_values, in_scope, indicator_vector, IndicatorVector, MinimizerFamily,
};
use crate::error::{guard, Error, Result};
use crate::linalg::{dot, express_in_span, nullspace, rank, Vector};
use crate::oracle::SetFunction;
use crate::rational::{int, ratio, Rational};
use crate::subset::Subset;
use crate::weight_based::{WeightBasedFunction, WeightVector};

/// Weights `w'` with `w'_i ∈ [(1-ε0) w_i, (1+ε0) w_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationBox {
    pub w: WeightVector,
    pub epsilon0: Rational,
    /// Second-smallest minus smallest in-scope value; `None` when every in-scope set minimizes.
    pub gap: Option<Rational>,
}

impl PerturbationBox {
    pub fn contains(&self, w_prime: &[Rational]) -> bool {
        let lo = int(1) - &self.epsilon0;
        let hi = int(1) + &self.epsilon0;
        w_prime.len() == self.w.len()
            && self.w.as_slice().iter().zip(w_prime).all(|(w, x)| {
                !x.is_negative() && *x >= &lo * w && *x <= &hi * w
            })
    }
}

pub fn compute_epsilon0(f: &WeightBasedFunction, nontrivial: bool) -> Result<PerturbationBox> {
    let w = f.weights().clone();
    if w.is_all_zero() {
        return Err(Error::Degenerate("all weights are zero".into()));
    }
    let values = distinct_values(f, nontrivial);
    let gap = (values.len() >= 2).then(|| &values[1] - &values[0]);
    let epsilon0 = match &gap {
        None => ratio(1, 2),
        Some(delta) => {
            let e = delta / (int(4) * w.total());
            e.min(int(1))
        }
    };
    Ok(PerturbationBox { w, epsilon0, gap })
}

/// The greedy basis of minimizers; querying them fixes every minimizer's value
/// for every function in the box.
pub fn determining_basis(f: &WeightBasedFunction, nontrivial: bool) -> Result<Vec<Subset>> {
    Ok(cut_dimension(f, nontrivial)?.basis)
}

/// Predicts `g(S)` from `g` on `basis` via `v^S = Σ c_i v^{S_i}`. `None` when
/// `v^S` is outside the span.
pub fn predict_from_basis(
    f: &WeightBasedFunction,
    basis: &[Subset],
    basis_values: &[Rational],
    s: Subset,
) -> Option<Rational> {
    let vecs: Vec<Vector> = basis.iter().map(|&b| indicator_vector(f, b).to_rationals()).collect();
    let c = express_in_span(&vecs, &indicator_vector(f, s).to_rationals())?;
    Some(dot(&c, basis_values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `w' = w + εz`
    Plus,
    /// `w' = w - εz`
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub z: Vector,
    pub epsilon: Rational,
    pub sign: Sign,
    pub w_prime: WeightVector,
    /// Minimum of the perturbed function over the same scope.
    pub changed_min: Rational,
}

/// Everything about `f` that witness construction reuses across query sets.
pub struct PerturbationContext<'a> {
    f: &'a WeightBasedFunction,
    nontrivial: bool,
    family: MinimizerFamily,
    basis: Vec<Subset>,
    basis_vectors: Vec<IndicatorVector>,
    pbox: PerturbationBox,
}

impl<'a> PerturbationContext<'a> {
    pub fn new(f: &'a WeightBasedFunction, nontrivial: bool) -> Result<Self> {
        let cd = cut_dimension(f, nontrivial)?;
        let pbox = compute_epsilon0(f, nontrivial)?;
        let basis_vectors = cd.basis.iter().map(|&b| indicator_vector(f, b)).collect();
        Ok(Self {
            f,
            nontrivial,
            family: cd.family,
            basis: cd.basis,
            basis_vectors,
            pbox,
        })
    }

    pub fn d(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Subset] {
        &self.basis
    }

    pub fn family(&self) -> &MinimizerFamily {
        &self.family
    }

    pub fn perturbation_box(&self) -> &PerturbationBox {
        &self.pbox
    }

    fn scope_min(&self, g: &WeightBasedFunction) -> Rational {
        in_scope(g.ground_size(), self.nontrivial)
            .map(|s| g.value(s))
            .min()
            .expect("scope is non-empty")
    }

    pub fn find_witness(&self, queries: &[Subset]) -> Result<Option<Witness>> {
        let n = self.f.ground_size();
        if let Some(bad) = queries.iter().find(|q| q.n() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        let d = self.d();
        if d == 0 {
            return Ok(None);
        }
        let basis_rats: Vec<Vector> = self.basis_vectors.iter().map(IndicatorVector::to_rationals).collect();
        // Coefficients β over the basis such that every query vector annihilates Σ β_i v^{S_i}.
        let constraints: Vec<Vector> = queries
            .iter()
            .map(|&t| {
                let q = indicator_vector(self.f, t);
                basis_rats.iter().map(|b| q.dot(b)).collect()
            })
            .collect();
        let kernel = nullspace(&constraints, d);
        if kernel.is_empty() {
            return Ok(None);
        }
        let beta: Vector = (0..d)
            .map(|i| kernel.iter().fold(int(0), |acc, k| acc + &k[i]))
            .collect();
        let m = self.f.system().m();
        let mut z: Vector = (0..m)
            .map(|e| {
                basis_rats
                    .iter()
                    .zip(&beta)
                    .fold(int(0), |acc, (b, c)| acc + &b[e] * c)
            })
            .collect();
        let Some(lead) = z.iter().find(|x| !x.is_zero()).cloned() else {
            return Ok(None);
        };
        for x in z.iter_mut() {
            *x = &*x / &lead;
        }

        let Some(moved) = self
            .family
            .sets
            .iter()
            .map(|&s| indicator_vector(self.f, s).dot(&z))
            .find(|p| !p.is_zero())
        else {
            return Ok(None);
        };
        let sign = if moved.is_positive() { Sign::Minus } else { Sign::Plus };

        let w = self.pbox.w.as_slice();
        let min_w = w.iter().filter(|x| x.is_positive()).min().expect("some weight is positive");
        let max_z = z.iter().map(Rational::abs).max().expect("m > 0");
        let sum_z = z.iter().fold(int(0), |acc, x| acc + x.abs());
        let gap = self.pbox.gap.clone().unwrap_or_else(|| ratio(1, 2));
        let epsilon = (&self.pbox.epsilon0 * min_w / max_z).min(gap / (int(2) * sum_z));

        let w_prime: Vector = w
            .iter()
            .zip(&z)
            .map(|(wi, zi)| match sign {
                Sign::Plus => wi + &epsilon * zi,
                Sign::Minus => wi - &epsilon * zi,
            })
            .collect();
        let w_prime = WeightVector::new(w_prime)?;
        let g = self.f.with_weights(w_prime.clone())?;
        let changed_min = self.scope_min(&g);
        Ok(Some(Witness {
            z,
            epsilon,
            sign,
            w_prime,
            changed_min,
        }))
    }

    /// Checks every witness invariant; the error names the first that fails.
    pub fn check_witness(&self, wit: &Witness, queries: &[Subset]) -> std::result::Result<(), String> {
        let w = self.pbox.w.as_slice();
        if wit.z.iter().all(Zero::is_zero) {
            return Err("z is zero".into());
        }
        if let Some(i) = (0..w.len()).find(|&i| w[i].is_zero() && !wit.z[i].is_zero()) {
            return Err(format!("z is nonzero on zero-weight hyperedge {i}"));
        }
        if !self.pbox.contains(wit.w_prime.as_slice()) {
            return Err("perturbed weights leave the box".into());
        }
        let g = self
            .f
            .with_weights(wit.w_prime.clone())
            .map_err(|e| e.to_string())?;
        if let Some(t) = queries.iter().find(|&&t| g.value(t) != self.f.value(t)) {
            return Err(format!("query {t} changed value"));
        }
        let g_min = self.scope_min(&g);
        if g_min != wit.changed_min {
            return Err("recorded changed minimum is stale".into());
        }
        if g_min == self.family.min_value {
            return Err("minimum did not change".into());
        }
        let escaped = in_scope(g.ground_size(), self.nontrivial)
            .find(|&s| g.value(s) == g_min && !self.family.contains(s));
        if let Some(s) = escaped {
            return Err(format!("{s} minimizes g but not f"));
        }
        Ok(())
    }
}

pub fn find_witness(
    f: &WeightBasedFunction,
    nontrivial: bool,
    queries: &[Subset],
) -> Result<Option<Witness>> {
    PerturbationContext::new(f, nontrivial)?.find_witness(queries)
}

/// `d × d` Gram matrix `A A^T` of the basis indicator vectors.
pub fn gram_matrix(f: &WeightBasedFunction, basis: &[Subset]) -> Vec<Vector> {
    let vecs: Vec<Vector> = basis.iter().map(|&b| indicator_vector(f, b).to_rationals()).collect();
    vecs.iter()
        .map(|a| vecs.iter().map(|b| dot(a, b)).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub d: usize,
    pub trials: usize,
    pub witnesses_found: usize,
    /// The determining basis admits no witness.
    pub basis_blocks: bool,
    pub gram_rank: usize,
    /// One line per failed trial or check.
    pub failures: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Draws `trials` random `(d-1)`-query sets (trial `t` seeded with `seed + t`)
/// and requires a valid witness for each, then requires none for the basis.
pub fn verify_equivalence(
    f: &WeightBasedFunction,
    nontrivial: bool,
    trials: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    let n = f.ground_size();
    guard("perturbation equivalence check", n, 12)?;
    let ctx = PerturbationContext::new(f, nontrivial)?;
    let d = ctx.d();
    let m = f.system().m();

    let outcomes: Vec<std::result::Result<(), String>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            if d == 0 {
                return Ok(());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let queries: Vec<Subset> = (0..d - 1)
                .map(|_| Subset::raw(n, rng.gen_range(0..(1u32 << n))))
                .collect();
            let rows: Vec<Vector> = queries
                .iter()
                .map(|&q| indicator_vector(f, q).to_rationals())
                .collect();
            let dim_x = m - rank(&rows);
            if dim_x + d <= m {
                return Err(format!("trial {t}: dim X + dim Y = {} <= m = {m}", dim_x + d));
            }
            match ctx.find_witness(&queries) {
                Ok(Some(w)) => ctx
                    .check_witness(&w, &queries)
                    .map_err(|e| format!("trial {t}: {e}")),
                Ok(None) => Err(format!("trial {t}: no witness for {queries:?}")),
                Err(e) => Err(format!("trial {t}: {e}")),
            }
        })
        .collect();

    let mut failures: Vec<String> = outcomes.iter().filter_map(|o| o.clone().err()).collect();
    let witnesses_found = if d == 0 { 0 } else { outcomes.iter().filter(|o| o.is_ok()).count() };

    let basis_blocks = ctx.find_witness(ctx.basis())?.is_none();
    if !basis_blocks {
        failures.push("the determining basis admits a witness".into());
    }
    let gram_rank = rank(&gram_matrix(f, ctx.basis()));
    if gram_rank != d {
        failures.push(format!("Gram matrix has rank {gram_rank}, expected {d}"));
    }
    Ok(EquivalenceReport {
        d,
        trials,
        witnesses_found,
        basis_blocks,
        gram_rank,
        failures,
    })
}
