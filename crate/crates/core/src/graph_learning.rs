//! Reconstructing graphs from cut queries.
//!
//! Undirected graphs are learned exactly from singleton and pair queries.
//! Directed graphs are only determined up to directed cycles, so the learner
//! returns a certificate instead of a claim of exactness. For s-t cuts a
//! kernel vector shows that terminal-adjacent weights cannot be learned.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::error::{guard, Error, Result};
use crate::oracle::{QueryOracle, SetFunction};
use crate::rational::{int, ratio, zero, Rational};
use crate::subset::Subset;
use crate::weight_based::{Edge, GraphMode, WeightBasedFunction, WeightedGraph};

/// Total weight per vertex pair, with parallel edges summed and zero pairs
/// dropped. Undirected pairs are keyed as `(min, max)`.
pub fn weight_map(g: &WeightedGraph) -> BTreeMap<(usize, usize), Rational> {
    let mut out: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for e in g.edges() {
        let key = if g.is_directed() {
            (e.tail, e.head)
        } else {
            (e.tail.min(e.head), e.tail.max(e.head))
        };
        *out.entry(key).or_insert_with(zero) += &e.weight;
    }
    out.retain(|_, w| !w.is_zero());
    out
}

fn graph_from_map(n: usize, mode: GraphMode, map: &BTreeMap<(usize, usize), Rational>) -> Result<WeightedGraph> {
    let edges = map
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(&(tail, head), w)| Edge {
            tail,
            head,
            weight: w.clone(),
        })
        .collect();
    WeightedGraph::new(n, mode, edges)
}

/// Memoizes oracle answers so repeated sets cost one query.
struct Cached<'a> {
    oracle: &'a mut dyn QueryOracle,
    seen: BTreeMap<Subset, Rational>,
}

impl<'a> Cached<'a> {
    fn new(oracle: &'a mut dyn QueryOracle) -> Self {
        Self {
            oracle,
            seen: BTreeMap::new(),
        }
    }

    fn get(&mut self, s: Subset) -> Result<Rational> {
        if let Some(v) = self.seen.get(&s) {
            return Ok(v.clone());
        }
        let v = self.oracle.query(s)?;
        self.seen.insert(s, v.clone());
        Ok(v)
    }
}

/// Pair weights `(f(u) + f(v) - f(uv)) / 2` of a symmetric cut-like function,
/// for `u < v`.
fn pair_weights(n: usize, mut f: impl FnMut(Subset) -> Result<Rational>) -> Result<BTreeMap<(usize, usize), Rational>> {
    let singles = (1..=n)
        .map(|u| f(Subset::singleton(n, u)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = BTreeMap::new();
    for u in 1..=n {
        for v in u + 1..=n {
            let both = f(Subset::singleton(n, u).with(v))?;
            let w = (&singles[u - 1] + &singles[v - 1] - both) / int(2);
            if w.is_negative() {
                return Err(Error::NotACutFunction(format!("pair ({u}, {v}) would get weight {w}")));
            }
            out.insert((u, v), w);
        }
    }
    Ok(out)
}

/// Learns an undirected weighted graph from its cut function with
/// `N + C(N, 2)` queries. Zero-weight pairs are omitted from the result.
pub fn learn_undirected(oracle: &mut dyn QueryOracle) -> Result<WeightedGraph> {
    let n = oracle.ground_size();
    let weights = pair_weights(n, |s| oracle.query(s))?;
    graph_from_map(n, GraphMode::Undirected, &weights)
}

/// Shift `+amount` on every forward edge `cycle[i] -> cycle[i+1]` (wrapping)
/// and `-amount` on the matching reverse edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleShift {
    pub cycle: Vec<usize>,
    pub amount: Rational,
}

/// Applies a cycle shift to a directed graph. Fails if a weight would go
/// negative.
pub fn apply_cycle_shift(g: &WeightedGraph, shift: &CycleShift) -> Result<WeightedGraph> {
    if g.mode() != GraphMode::Directed {
        return Err(Error::InvalidInstance("cycle shifts need a directed graph".into()));
    }
    let n = g.n_vertices();
    let c = &shift.cycle;
    if c.len() < 2 || c.iter().any(|&v| v == 0 || v > n) {
        return Err(Error::InvalidInstance(format!("bad cycle {c:?}")));
    }
    let mut map = weight_map(g);
    for i in 0..c.len() {
        let (a, b) = (c[i], c[(i + 1) % c.len()]);
        *map.entry((a, b)).or_insert_with(zero) += &shift.amount;
        *map.entry((b, a)).or_insert_with(zero) -= &shift.amount;
    }
    if let Some(((a, b), w)) = map.iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::InvalidInstance(format!("shift drives ({a}, {b}) to {w}")));
    }
    graph_from_map(n, GraphMode::Directed, &map)
}

#[derive(Debug, Clone)]
pub struct CycleEquivalenceCertificate {
    /// A graph matching every queried pair sum and degree.
    pub learned: WeightedGraph,
    /// Exhaustive agreement with the oracle; only checked when `N <= 12`.
    pub agrees_on_all_cuts: bool,
    /// Shifts that carry `learned` to `canonical`, applied in order.
    pub residual: Vec<CycleShift>,
    /// `learned` with every directed cycle of its net flow cancelled.
    pub canonical: WeightedGraph,
    pub learning_queries: usize,
}

/// Learns a directed graph up to directed-cycle equivalence.
///
/// Pair sums come from the symmetrized function `f(S) + f(V \ S)`, out-degrees
/// from `f({u})` and in-degrees from `f(V \ {u})`. An orientation of each pair
/// sum that meets the out-degrees is found by exact max-flow.
pub fn learn_directed_up_to_cycles(oracle: &mut dyn QueryOracle) -> Result<CycleEquivalenceCertificate> {
    let n = oracle.ground_size();
    let start = oracle.queries_used();
    let (sums, out_deg, in_deg) = {
        let mut cache = Cached::new(oracle);
        let sums = pair_weights(n, |s| Ok(cache.get(s)? + cache.get(s.complement())?))?;
        let mut out_deg = Vec::with_capacity(n);
        let mut in_deg = Vec::with_capacity(n);
        for u in 1..=n {
            let single = Subset::singleton(n, u);
            out_deg.push(cache.get(single)?);
            in_deg.push(cache.get(single.complement())?);
        }
        (sums, out_deg, in_deg)
    };
    let learning_queries = oracle.queries_used() - start;

    for u in 1..=n {
        let incident = sums
            .iter()
            .filter(|(&(a, b), _)| a == u || b == u)
            .fold(zero(), |acc, (_, w)| acc + w);
        if incident != &out_deg[u - 1] + &in_deg[u - 1] || out_deg[u - 1].is_negative() || in_deg[u - 1].is_negative() {
            return Err(Error::NotACutFunction(format!("degrees at vertex {u} do not match pair sums")));
        }
    }

    let oriented = orient_pairs(n, &sums, &out_deg)?;
    let learned = graph_from_map(n, GraphMode::Directed, &oriented)?;
    let (canonical, residual) = cancel_net_cycles(&learned)?;

    let agrees_on_all_cuts = if n <= 12 {
        let f = WeightBasedFunction::from_graph(&learned);
        let mut ok = true;
        for s in Subset::all(n) {
            if oracle.query(s)? != f.value(s) {
                ok = false;
                break;
            }
        }
        ok
    } else {
        false
    };

    Ok(CycleEquivalenceCertificate {
        learned,
        agrees_on_all_cuts,
        residual,
        canonical,
        learning_queries,
    })
}

/// Splits each pair sum into the two directions so that out-degrees match.
///
/// Network: source -> pair node (capacity = pair sum) -> either endpoint ->
/// sink (capacity = out-degree). Flow into `u` from pair `{u, v}` is the
/// weight of `u -> v`.
fn orient_pairs(
    n: usize,
    sums: &BTreeMap<(usize, usize), Rational>,
    out_deg: &[Rational],
) -> Result<BTreeMap<(usize, usize), Rational>> {
    let pairs: Vec<((usize, usize), Rational)> = sums
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(&k, w)| (k, w.clone()))
        .collect();
    let p = pairs.len();
    let source = 0;
    let vertex = |u: usize| 1 + p + (u - 1);
    let sink = 1 + p + n;
    let mut net = FlowNetwork::new(sink + 1);
    for (i, ((a, b), w)) in pairs.iter().enumerate() {
        net.add(source, 1 + i, w.clone());
        net.add(1 + i, vertex(*a), w.clone());
        net.add(1 + i, vertex(*b), w.clone());
    }
    for u in 1..=n {
        net.add(vertex(u), sink, out_deg[u - 1].clone());
    }
    let total = pairs.iter().fold(zero(), |acc, (_, w)| acc + w);
    let demand = out_deg.iter().fold(zero(), |acc, w| acc + w);
    let flow = net.max_flow(source, sink);
    if flow != total || flow != demand {
        return Err(Error::NotACutFunction("no orientation meets the out-degrees".into()));
    }
    let mut out = BTreeMap::new();
    for (i, ((a, b), _)) in pairs.iter().enumerate() {
        out.insert((*a, *b), net.flow(1 + i, vertex(*a)));
        out.insert((*b, *a), net.flow(1 + i, vertex(*b)));
    }
    Ok(out)
}

/// Dense Edmonds-Karp over exact rationals.
struct FlowNetwork {
    cap: Vec<Vec<Rational>>,
    flow: Vec<Vec<Rational>>,
}

impl FlowNetwork {
    fn new(size: usize) -> Self {
        Self {
            cap: vec![vec![zero(); size]; size],
            flow: vec![vec![zero(); size]; size],
        }
    }

    fn add(&mut self, a: usize, b: usize, c: Rational) {
        self.cap[a][b] += c;
    }

    fn residual(&self, a: usize, b: usize) -> Rational {
        &self.cap[a][b] - &self.flow[a][b]
    }

    fn flow(&self, a: usize, b: usize) -> Rational {
        self.flow[a][b].clone()
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> Rational {
        let size = self.cap.len();
        let mut total = zero();
        loop {
            let mut prev = vec![usize::MAX; size];
            prev[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(a) = queue.pop_front() {
                for b in 0..size {
                    if prev[b] == usize::MAX && self.residual(a, b).is_positive() {
                        prev[b] = a;
                        queue.push_back(b);
                    }
                }
            }
            if prev[sink] == usize::MAX {
                return total;
            }
            let mut push: Option<Rational> = None;
            let mut b = sink;
            while b != source {
                let r = self.residual(prev[b], b);
                push = Some(push.map_or(r.clone(), |p| p.min(r)));
                b = prev[b];
            }
            let push = push.expect("path has an edge");
            let mut b = sink;
            while b != source {
                let a = prev[b];
                self.flow[a][b] += &push;
                self.flow[b][a] -= &push;
                b = a;
            }
            total += push;
        }
    }
}

/// Repeatedly finds a directed cycle in the net flow `w(u,v) - w(v,u)` and
/// cancels it. Deterministic: searches from the smallest vertex first.
fn cancel_net_cycles(g: &WeightedGraph) -> Result<(WeightedGraph, Vec<CycleShift>)> {
    let n = g.n_vertices();
    let mut current = g.clone();
    let mut shifts = Vec::new();
    loop {
        let map = weight_map(&current);
        let get = |a: usize, b: usize| map.get(&(a, b)).cloned().unwrap_or_else(zero);
        let mut net = vec![vec![zero(); n + 1]; n + 1];
        for a in 1..=n {
            for b in 1..=n {
                if a != b {
                    net[a][b] = get(a, b) - get(b, a);
                }
            }
        }
        let Some(cycle) = find_positive_cycle(n, &net) else {
            return Ok((current, shifts));
        };
        let bottleneck = (0..cycle.len())
            .map(|i| net[cycle[i]][cycle[(i + 1) % cycle.len()]].clone())
            .min()
            .expect("cycle is non-empty");
        let shift = CycleShift {
            cycle: cycle.iter().rev().copied().collect(),
            amount: bottleneck / int(2),
        };
        current = apply_cycle_shift(&current, &shift)?;
        shifts.push(shift);
    }
}

fn find_positive_cycle(n: usize, net: &[Vec<Rational>]) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n + 1];
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(u: usize, n: usize, net: &[Vec<Rational>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[u] = 1;
        stack.push(u);
        for v in 1..=n {
            if !net[u][v].is_positive() {
                continue;
            }
            if state[v] == 1 {
                let at = stack.iter().position(|&x| x == v).expect("v is on the stack");
                return Some(stack[at..].to_vec());
            }
            if state[v] == 0 {
                if let Some(c) = dfs(v, n, net, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[u] = 2;
        None
    }
    (1..=n).find_map(|u| if state[u] == 0 { dfs(u, n, net, &mut state, &mut stack) } else { None })
}

/// First subset (bitmask order) on which the two graphs' cut values differ.
pub fn cut_equivalent(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<Option<Subset>> {
    if g1.n_vertices() != g2.n_vertices() || g1.mode() != g2.mode() {
        return Err(Error::InvalidInstance("graphs differ in vertex set or mode".into()));
    }
    let n = g1.ground_size();
    guard("cut equivalence", n, 12)?;
    let (f1, f2) = (WeightBasedFunction::from_graph(g1), WeightBasedFunction::from_graph(g2));
    Ok(Subset::all(n).find(|&s| f1.value(s) != f2.value(s)))
}

/// A vector orthogonal to every s-t query vector that still moves the weight
/// of edge `(s, special_vertex)`.
///
/// Coordinates are `(w_1, w'_1, ..., w_k, w'_k)` where `w_u` weighs `(s, u)`
/// and `w'_u` weighs `(u, t)`. Since `beta` is also 1 on `w'_u*`, the same
/// vector certifies the `(u*, t)` edge.
#[derive(Debug, Clone, PartialEq)]
pub struct StKernelVector {
    pub beta: Vec<Rational>,
    pub special_vertex: usize,
    pub k: usize,
}

/// Coefficients of the query `S ∪ {s}` over the terminal-adjacent weights.
pub fn st_query_vector(k: usize, s: Subset) -> Vec<Rational> {
    let mut alpha = vec![zero(); 2 * k];
    for u in 1..=k {
        let slot = if s.contains(u) { 2 * (u - 1) + 1 } else { 2 * (u - 1) };
        alpha[slot] = int(1);
    }
    alpha
}

/// Unit vector on `w_u`.
pub fn source_edge_unit(k: usize, u: usize) -> Vec<Rational> {
    let mut e = vec![zero(); 2 * k];
    e[2 * (u - 1)] = int(1);
    e
}

fn kernel_with_offdiagonal(k: usize, u_star: usize, off: Rational) -> Vec<Rational> {
    (0..2 * k)
        .map(|i| if i / 2 + 1 == u_star { int(1) } else { off.clone() })
        .collect()
}

/// Builds the kernel vector. With one non-terminal vertex both weights are
/// pinned by `f(∅)` and `f({u})`, which is reported as `Degenerate`.
pub fn st_kernel_vector(k: usize, u_star: usize) -> Result<StKernelVector> {
    if k < 2 {
        return Err(Error::Degenerate(
            "k < 2: the terminal-adjacent weights are determinable".into(),
        ));
    }
    if !(1..=k).contains(&u_star) {
        return Err(Error::InvalidInstance(format!("vertex {u_star} outside 1..={k}")));
    }
    let beta = kernel_with_offdiagonal(k, u_star, ratio(-1, k as i64 - 1));
    Ok(StKernelVector {
        beta,
        special_vertex: u_star,
        k,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StKernelReport {
    pub k: usize,
    pub special_vertex: usize,
    /// First query set with a nonzero inner product, if any.
    pub first_nonorthogonal: Option<Subset>,
    pub unit_inner_product: Rational,
    /// `<alpha_S, beta>` when the off-diagonal entry is `-1/k` instead; it is
    /// the same for every `S`.
    pub offdiagonal_one_over_k: Rational,
}

impl StKernelReport {
    pub fn passed(&self) -> bool {
        self.first_nonorthogonal.is_none() && self.unit_inner_product == int(1)
    }
}

/// Scans all `2^k` query vectors exactly.
pub fn verify_st_kernel(kv: &StKernelVector) -> Result<StKernelReport> {
    let k = kv.k;
    guard("s-t kernel scan", k, 20)?;
    let dot = |a: &[Rational], b: &[Rational]| crate::linalg::dot(a, b);
    let first_nonorthogonal =
        Subset::all(k).find(|&s| !dot(&st_query_vector(k, s), &kv.beta).is_zero());
    let naive = kernel_with_offdiagonal(k, kv.special_vertex, ratio(-1, k as i64));
    Ok(StKernelReport {
        k,
        special_vertex: kv.special_vertex,
        first_nonorthogonal,
        unit_inner_product: dot(&source_edge_unit(k, kv.special_vertex), &kv.beta),
        offdiagonal_one_over_k: dot(&st_query_vector(k, Subset::empty(k)), &naive),
    })
}

/// Two s-t graphs with identical answers to every s-t cut query but different
/// weight on `(s, u*)`: all-ones weights, and all-ones plus the kernel vector.
///
/// Vertex layout: `s = 1`, non-terminal `u` is vertex `u + 1`, `t = k + 2`.
pub fn indistinguishable_pair(k: usize, u_star: usize) -> Result<(WeightedGraph, WeightedGraph)> {
    let kv = st_kernel_vector(k, u_star)?;
    let (s, t) = (1, k + 2);
    let mode = GraphMode::St { s, t, directed: false };
    let build = |w: &dyn Fn(usize) -> Rational| {
        let edges = (1..=k).flat_map(|u| [(s, u + 1, w(2 * (u - 1))), (u + 1, t, w(2 * (u - 1) + 1))]);
        WeightedGraph::from_triples(k + 2, mode, edges)
    };
    let base = build(&|_| int(1))?;
    let moved = build(&|i| int(1) + &kv.beta[i])?;
    Ok((base, moved))
}
