//! Weight-based set functions `f(S) = Σ_{i ∈ h(S)} w_i` and the cut systems
//! that graphs induce.

use num_traits::{Signed, Zero};

use crate::error::{guard, Error, Result};
use crate::oracle::SetFunction;
use crate::rational::{int, Rational};
use crate::subset::{Subset, MAX_N};

/// Bitset over hyperedge indices `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActiveSet {
    words: Vec<u64>,
}

impl ActiveSet {
    pub fn empty(m: usize) -> Self {
        Self {
            words: vec![0; m.div_ceil(64)],
        }
    }

    pub fn from_indices(m: usize, idx: &[usize]) -> Self {
        let mut s = Self::empty(m);
        for &i in idx {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(k * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

/// Graph orientation and cut convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    /// Ground set is `V`; an edge is cut when exactly one endpoint lies in `S`.
    Undirected,
    /// Ground set is `V`; an edge is cut when its tail is in `S` and head is not.
    Directed,
    /// Ground set is `V \ {s, t}`; cuts are taken at `S ∪ {s}`.
    St { s: usize, t: usize, directed: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: Rational,
}

/// A weighted graph on vertices `1..=n_vertices`. Parallel edges are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    mode: GraphMode,
}

impl WeightedGraph {
    pub fn new(n_vertices: usize, mode: GraphMode, edges: Vec<Edge>) -> Result<Self> {
        if n_vertices == 0 || n_vertices > MAX_N + 2 {
            return Err(Error::InvalidSize(format!("graph with {n_vertices} vertices")));
        }
        let in_range = |v: usize| (1..=n_vertices).contains(&v);
        for e in &edges {
            if !in_range(e.tail) || !in_range(e.head) {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) has an endpoint outside 1..={n_vertices}",
                    e.tail, e.head
                )));
            }
            if e.tail == e.head {
                return Err(Error::InvalidInstance(format!("self-loop at {}", e.tail)));
            }
            if e.weight.is_negative() {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) has negative weight",
                    e.tail, e.head
                )));
            }
        }
        match mode {
            GraphMode::St { s, t, .. } => {
                if !in_range(s) || !in_range(t) || s == t {
                    return Err(Error::InvalidInstance(format!("bad terminals s = {s}, t = {t}")));
                }
                if n_vertices < 3 {
                    return Err(Error::InvalidSize("s-t graph needs a non-terminal vertex".into()));
                }
            }
            _ if n_vertices > MAX_N => {
                return Err(Error::InvalidSize(format!("graph with {n_vertices} vertices")));
            }
            _ => {}
        }
        Ok(Self {
            n_vertices,
            edges,
            mode,
        })
    }

    /// Convenience constructor from `(tail, head, weight)` triples.
    pub fn from_triples(
        n_vertices: usize,
        mode: GraphMode,
        edges: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(tail, head, weight)| Edge { tail, head, weight })
            .collect();
        Self::new(n_vertices, mode, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn is_directed(&self) -> bool {
        match self.mode {
            GraphMode::Undirected => false,
            GraphMode::Directed => true,
            GraphMode::St { directed, .. } => directed,
        }
    }

    /// Vertex represented by each ground element, in order.
    pub fn ground_vertices(&self) -> Vec<usize> {
        match self.mode {
            GraphMode::St { s, t, .. } => (1..=self.n_vertices).filter(|&v| v != s && v != t).collect(),
            _ => (1..=self.n_vertices).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_vertices().len()
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().fold(int(0), |a, e| a + &e.weight)
    }
}

#[derive(Debug, Clone)]
struct GraphRule {
    // per edge: (tail vertex bit, head vertex bit) in a u32 vertex mask
    endpoints: Vec<(u32, u32)>,
    directed: bool,
    ground_bits: Vec<u32>,
    source_bits: u32,
}

impl GraphRule {
    fn side(&self, s: Subset) -> u32 {
        s.elements()
            .fold(self.source_bits, |acc, i| acc | self.ground_bits[i - 1])
    }

    fn active(&self, s: Subset) -> ActiveSet {
        let side = self.side(s);
        let mut out = ActiveSet::empty(self.endpoints.len());
        for (k, &(tb, hb)) in self.endpoints.iter().enumerate() {
            let tail_in = side & tb != 0;
            let head_in = side & hb != 0;
            let cut = if self.directed {
                tail_in && !head_in
            } else {
                tail_in != head_in
            };
            if cut {
                out.insert(k);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
enum ActiveRule {
    Table(Vec<ActiveSet>),
    Graph(GraphRule),
}

/// The active-set map `h: 2^[n] -> 2^[m]`.
#[derive(Debug, Clone)]
pub struct HyperedgeSystem {
    n: usize,
    m: usize,
    rule: ActiveRule,
}

impl HyperedgeSystem {
    /// Extensional system; `table[bits]` lists `h(S)` for the subset with that bitmask.
    pub fn from_table(n: usize, m: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSize(format!("hyperedge system over {n} elements")));
        }
        if table.len() != 1 << n {
            return Err(Error::InvalidInstance(format!(
                "table has {} rows, expected 2^{n}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().flatten().find(|&&i| i >= m) {
            return Err(Error::InvalidInstance(format!("hyperedge index {bad} >= m = {m}")));
        }
        let rows = table.iter().map(|r| ActiveSet::from_indices(m, r)).collect();
        Ok(Self {
            n,
            m,
            rule: ActiveRule::Table(rows),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_extensional(&self) -> bool {
        matches!(self.rule, ActiveRule::Table(_))
    }

    pub fn active_set(&self, s: Subset) -> ActiveSet {
        match &self.rule {
            ActiveRule::Table(rows) => rows[s.bits() as usize].clone(),
            ActiveRule::Graph(g) => g.active(s),
        }
    }

    /// `h(S)` as sorted hyperedge indices.
    pub fn active(&self, s: Subset) -> Vec<usize> {
        self.active_set(s).indices()
    }

    /// Materializes the full table. Only sensible for small `n`.
    pub fn to_extensional(&self) -> Result<Self> {
        guard("extensional table", self.n, 20)?;
        let table = Subset::all(self.n).map(|s| self.active(s)).collect();
        Self::from_table(self.n, self.m, table)
    }
}

/// Non-negative weights, one per hyperedge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(w: Vec<Rational>) -> Result<Self> {
        if let Some(i) = w.iter().position(Signed::is_negative) {
            return Err(Error::InvalidInstance(format!("weight {i} is negative")));
        }
        Ok(Self(w))
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(int(0), |a, w| a + w)
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &Rational) -> Result<Self> {
        Self::new(self.0.iter().map(|w| w * k).collect())
    }
}

pub fn eval_weight_based(sys: &HyperedgeSystem, w: &WeightVector, s: Subset) -> Result<Rational> {
    if w.len() != sys.m {
        return Err(Error::LengthMismatch {
            expected: sys.m,
            found: w.len(),
        });
    }
    if s.n() != sys.n {
        return Err(Error::SizeMismatch {
            expected: sys.n,
            found: s.n(),
        });
    }
    let ws = w.as_slice();
    Ok(sys
        .active_set(s)
        .indices()
        .into_iter()
        .fold(int(0), |acc, i| acc + &ws[i]))
}

/// A hyperedge system paired with its weights, usable as a [`SetFunction`].
#[derive(Debug, Clone)]
pub struct WeightBasedFunction {
    sys: HyperedgeSystem,
    w: WeightVector,
}

impl WeightBasedFunction {
    pub fn new(sys: HyperedgeSystem, w: WeightVector) -> Result<Self> {
        if w.len() != sys.m {
            return Err(Error::LengthMismatch {
                expected: sys.m,
                found: w.len(),
            });
        }
        Ok(Self { sys, w })
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        let (sys, w) = cut_system_from_graph(g);
        Self { sys, w }
    }

    pub fn system(&self) -> &HyperedgeSystem {
        &self.sys
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    pub fn with_weights(&self, w: WeightVector) -> Result<Self> {
        Self::new(self.sys.clone(), w)
    }
}

impl SetFunction for WeightBasedFunction {
    fn ground_size(&self) -> usize {
        self.sys.n
    }

    fn value(&self, s: Subset) -> Rational {
        eval_weight_based(&self.sys, &self.w, s).expect("lengths validated at construction")
    }
}

/// Hyperedges are the graph's edges in input order.
pub fn cut_system_from_graph(g: &WeightedGraph) -> (HyperedgeSystem, WeightVector) {
    let bit = |v: usize| 1u32 << (v - 1);
    let ground = g.ground_vertices();
    let source_bits = match g.mode {
        GraphMode::St { s, .. } => bit(s),
        _ => 0,
    };
    let rule = GraphRule {
        endpoints: g.edges.iter().map(|e| (bit(e.tail), bit(e.head))).collect(),
        directed: g.is_directed(),
        ground_bits: ground.iter().map(|&v| bit(v)).collect(),
        source_bits,
    };
    let sys = HyperedgeSystem {
        n: ground.len(),
        m: g.edges.len(),
        rule: ActiveRule::Graph(rule),
    };
    let w = WeightVector(g.edges.iter().map(|e| e.weight.clone()).collect());
    (sys, w)
}

/// Exhaustive check of `h(S ∩ T) ⊎ h(S ∪ T) ⊆ h(S) ⊎ h(T)` (multiset union).
///
/// Returns the first violating `(S, T)` in bitmask order.
pub fn check_weight_based_condition(sys: &HyperedgeSystem) -> Result<Option<(Subset, Subset)>> {
    let n = sys.n;
    guard("weight-based condition check", n, 12)?;
    let table: Vec<ActiveSet> = Subset::all(n).map(|s| sys.active_set(s)).collect();
    let size = 1u32 << n;
    for a in 0..size {
        for b in a..size {
            let (hs, ht) = (&table[a as usize], &table[b as usize]);
            let (hi, hu) = (&table[(a & b) as usize], &table[(a | b) as usize]);
            let bad = hs.words.iter().zip(&ht.words).zip(hi.words.iter().zip(&hu.words)).any(
                |((&s, &t), (&i, &u))| {
                    // per bit: i + u <= s + t
                    let both_lhs = i & u & !(s & t);
                    let one_lhs = (i | u) & !(s | t);
                    both_lhs | one_lhs != 0
                },
            );
            if bad {
                return Ok(Some((Subset::raw(n, a), Subset::raw(n, b))));
            }
        }
    }
    Ok(None)
}

/// Star on `v` plus a perfect matching on the leaves, with unit weights.
///
/// For odd `n = 2a + 1` the vertices are `v = 1` and `w_i = 2i`, `w'_i = 2i + 1`;
/// edges are listed per `i` as `(v, w_i)`, `(v, w'_i)`, `(w_i, w'_i)`. For even
/// `n` the `(n - 1)`-vertex graph gets an extra vertex `n` joined to `v` by an
/// edge of weight 2, listed last.
pub fn build_star_matching_graph(n: usize) -> Result<WeightedGraph> {
    if !(3..=MAX_N).contains(&n) {
        return Err(Error::InvalidSize(format!("star-matching graph needs 3 <= n <= {MAX_N}, got {n}")));
    }
    let odd = if n % 2 == 1 { n } else { n - 1 };
    let a = (odd - 1) / 2;
    let mut edges = Vec::with_capacity(3 * a + 1);
    for i in 1..=a {
        let (w, wp) = (2 * i, 2 * i + 1);
        edges.push((1, w, int(1)));
        edges.push((1, wp, int(1)));
        edges.push((w, wp, int(1)));
    }
    if n.is_multiple_of(2) {
        edges.push((1, n, int(2)));
    }
    WeightedGraph::from_triples(n, GraphMode::Undirected, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{check_submodular, check_symmetric};
    use crate::rational::ratio;

    fn s(n: usize, e: &[usize]) -> Subset {
        Subset::from_elems(n, e).unwrap()
    }

    pub(crate) fn triangle() -> WeightedGraph {
        build_star_matching_graph(3).unwrap()
    }

    pub(crate) fn parallel_paths() -> WeightedGraph {
        // s = 1, a = 2, b = 3, t = 4
        WeightedGraph::from_triples(
            4,
            GraphMode::St { s: 1, t: 4, directed: false },
            [(1, 2, int(1)), (1, 3, int(1)), (2, 4, int(1)), (3, 4, int(1))],
        )
        .unwrap()
    }

    #[test]
    fn triangle_values() {
        let (sys, w) = cut_system_from_graph(&triangle());
        assert_eq!(sys.active(s(3, &[2])), vec![0, 2]);
        assert_eq!(eval_weight_based(&sys, &w, s(3, &[2])).unwrap(), int(2));
        assert_eq!(eval_weight_based(&sys, &w, Subset::empty(3)).unwrap(), int(0));
        assert_eq!(sys.active(s(3, &[2, 3])), vec![0, 1]);
        let w2 = WeightVector::new(vec![ratio(1, 2), int(1), ratio(3, 2)]).unwrap();
        assert_eq!(eval_weight_based(&sys, &w2, s(3, &[2])).unwrap(), int(2));
        let short = WeightVector::new(vec![int(1)]).unwrap();
        assert!(matches!(
            eval_weight_based(&sys, &short, Subset::empty(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn directed_cycle() {
        let g = WeightedGraph::from_triples(
            3,
            GraphMode::Directed,
            [(1, 2, int(1)), (2, 3, int(1)), (3, 1, int(1))],
        )
        .unwrap();
        let f = WeightBasedFunction::from_graph(&g);
        assert_eq!(f.system().active(s(3, &[1])), vec![0]);
        assert_eq!(f.value(s(3, &[1])), int(1));
        assert!(check_symmetric(&f).unwrap().is_none());
    }

    #[test]
    fn st_cut_at_source() {
        let f = WeightBasedFunction::from_graph(&parallel_paths());
        assert_eq!(f.ground_size(), 2);
        assert_eq!(f.system().active(Subset::empty(2)), vec![0, 1]);
        assert_eq!(f.value(Subset::empty(2)), int(2));
        assert_eq!(f.value(Subset::full(2)), int(2));
    }

    #[test]
    fn graph_validation() {
        let u = GraphMode::Undirected;
        assert!(WeightedGraph::from_triples(3, u, [(1, 1, int(1))]).is_err());
        assert!(WeightedGraph::from_triples(3, u, [(1, 4, int(1))]).is_err());
        assert!(WeightedGraph::from_triples(3, u, [(1, 2, int(-1))]).is_err());
        let st = GraphMode::St { s: 2, t: 2, directed: false };
        assert!(WeightedGraph::from_triples(3, st, []).is_err());
        assert!(build_star_matching_graph(2).is_err());
    }

    #[test]
    fn multiset_condition_counts_duplicates() {
        let sys = HyperedgeSystem::from_table(2, 1, vec![vec![0], vec![0], vec![0], vec![0]]).unwrap();
        assert!(check_weight_based_condition(&sys).unwrap().is_none());
        // h(∅) = h([2]) = {0}, singletons empty: intersection/union count 2 > 0
        let bad = HyperedgeSystem::from_table(2, 1, vec![vec![0], vec![], vec![], vec![0]]).unwrap();
        assert_eq!(
            check_weight_based_condition(&bad).unwrap(),
            Some((s(2, &[1]), s(2, &[2])))
        );
    }

    #[test]
    fn star_matching_shapes() {
        let g5 = build_star_matching_graph(5).unwrap();
        assert_eq!(g5.edges().len(), 6);
        let g4 = build_star_matching_graph(4).unwrap();
        assert_eq!(g4.edges().len(), 4);
        assert_eq!(g4.edges()[3], Edge { tail: 1, head: 4, weight: int(2) });
        for n in 3..=12 {
            let f = WeightBasedFunction::from_graph(&build_star_matching_graph(n).unwrap());
            let min = Subset::all(n)
                .filter(|t| t.is_nontrivial())
                .map(|t| f.value(t))
                .min()
                .unwrap();
            assert_eq!(min, int(2), "n = {n}");
        }
    }

    #[test]
    fn graph_systems_are_weight_based_and_submodular() {
        for g in [triangle(), parallel_paths(), build_star_matching_graph(6).unwrap()] {
            let f = WeightBasedFunction::from_graph(&g);
            assert!(check_weight_based_condition(f.system()).unwrap().is_none());
            assert!(check_submodular(&f).unwrap().is_none());
        }
    }

    #[test]
    fn extensional_agrees_with_rule() {
        let (sys, _) = cut_system_from_graph(&build_star_matching_graph(7).unwrap());
        let ext = sys.to_extensional().unwrap();
        assert!(ext.is_extensional());
        for t in Subset::all(7) {
            assert_eq!(sys.active(t), ext.active(t));
        }
    }
}
