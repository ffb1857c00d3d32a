//! Seeded random instances. The same seed always yields the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hard_instances::PermutationInstance;
use crate::rational::{ratio, Rational};
use crate::weight_based::{GraphMode, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive rational `p/q` with `1 <= p <= 6`, `1 <= q <= 4`.
pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

fn maybe_edge(rng: &mut impl Rng, density: f64) -> Option<Rational> {
    rng.gen_bool(density).then(|| positive_rational(rng))
}

/// Each unordered pair gets an edge with probability `density`.
pub fn random_undirected_graph(rng: &mut impl Rng, n: usize, density: f64) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if let Some(w) = maybe_edge(rng, density) {
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::from_triples(n, GraphMode::Undirected, edges)
}

/// Each ordered pair gets an edge with probability `density`.
pub fn random_directed_graph(rng: &mut impl Rng, n: usize, density: f64) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            if u != v {
                if let Some(w) = maybe_edge(rng, density) {
                    edges.push((u, v, w));
                }
            }
        }
    }
    WeightedGraph::from_triples(n, GraphMode::Directed, edges)
}

/// s-t graph with `ground` non-terminals; `s = 1`, `t = ground + 2`.
pub fn random_st_graph(rng: &mut impl Rng, ground: usize, density: f64, directed: bool) -> Result<WeightedGraph> {
    let nv = ground + 2;
    let mut edges = Vec::new();
    for u in 1..=nv {
        for v in 1..=nv {
            let wanted = if directed { u != v } else { u < v };
            if wanted {
                if let Some(w) = maybe_edge(rng, density) {
                    edges.push((u, v, w));
                }
            }
        }
    }
    WeightedGraph::from_triples(nv, GraphMode::St { s: 1, t: nv, directed }, edges)
}

pub fn random_permutation_instance(rng: &mut impl Rng, n: usize) -> Result<PermutationInstance> {
    let mut sigma: Vec<usize> = (1..=n).collect();
    sigma.shuffle(rng);
    let c = (0..=n).map(|_| rng.gen_range(0..=1u8)).collect();
    PermutationInstance::new(sigma, c)
}
