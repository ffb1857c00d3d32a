//! JSON wire formats. Rationals travel as `"p/q"` strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hard_instances::{CostBasedInstance, PermutationInstance};
use crate::perturbation::{Sign, Witness};
use crate::rational::{parse_pq, to_pq, Rational};
use crate::subset::Subset;
use crate::weight_based::{Edge, GraphMode, WeightedGraph};

#[derive(Debug, Serialize, Deserialize)]
struct GraphWire {
    n_vertices: usize,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    directed: Option<bool>,
    edges: Vec<(usize, usize, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum InstanceWire {
    Permutation {
        n: usize,
        sigma: Vec<usize>,
        c: Vec<u8>,
    },
    CostBased {
        n: usize,
        singletons: Vec<String>,
        cost: Vec<(u32, String)>,
    },
}

/// Anything the CLI accepts through `--instance`.
#[derive(Debug, Clone)]
pub enum Instance {
    Graph(WeightedGraph),
    Permutation(PermutationInstance),
    CostBased(CostBasedInstance),
}

fn bad(e: impl std::fmt::Display) -> Error {
    Error::InvalidInstance(e.to_string())
}

pub fn pq_array(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(to_pq(r))).collect())
}

pub fn subset_json(s: Subset) -> Value {
    json!({ "bits": s.bits(), "elements": s.elements().collect::<Vec<_>>() })
}

pub fn graph_to_json(g: &WeightedGraph) -> Value {
    let (mode, s, t, directed) = match g.mode() {
        GraphMode::Undirected => ("undirected", None, None, None),
        GraphMode::Directed => ("directed", None, None, None),
        GraphMode::St { s, t, directed } => ("st", Some(s), Some(t), Some(directed)),
    };
    let wire = GraphWire {
        n_vertices: g.n_vertices(),
        mode: mode.into(),
        s,
        t,
        directed,
        edges: g.edges().iter().map(|e| (e.tail, e.head, to_pq(&e.weight))).collect(),
    };
    serde_json::to_value(wire).expect("graph serializes")
}

fn graph_from_wire(w: GraphWire) -> Result<WeightedGraph> {
    let mode = match (w.mode.as_str(), w.s, w.t) {
        ("undirected", ..) => GraphMode::Undirected,
        ("directed", ..) => GraphMode::Directed,
        ("st", Some(s), Some(t)) => GraphMode::St {
            s,
            t,
            directed: w.directed.unwrap_or(false),
        },
        ("st", ..) => return Err(bad("mode \"st\" needs both \"s\" and \"t\"")),
        (m, ..) => return Err(bad(format!("unknown graph mode {m:?}"))),
    };
    let edges = w
        .edges
        .into_iter()
        .map(|(tail, head, wt)| Ok(Edge { tail, head, weight: parse_pq(&wt)? }))
        .collect::<Result<Vec<_>>>()?;
    WeightedGraph::new(w.n_vertices, mode, edges)
}

pub fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    graph_from_wire(serde_json::from_str(text).map_err(bad)?)
}

pub fn permutation_to_json(p: &PermutationInstance) -> Value {
    json!({ "kind": "permutation", "n": p.n(), "sigma": p.sigma(), "c": p.c() })
}

pub fn cost_based_to_json(f: &CostBasedInstance) -> Value {
    let cost: Vec<Value> = f.cost().iter().map(|(t, c)| json!([t.bits(), to_pq(c)])).collect();
    json!({
        "kind": "cost_based",
        "n": f.n(),
        "singletons": pq_array(f.singletons()),
        "cost": cost,
    })
}

pub fn instance_to_json(inst: &Instance) -> Value {
    match inst {
        Instance::Graph(g) => graph_to_json(g),
        Instance::Permutation(p) => permutation_to_json(p),
        Instance::CostBased(f) => cost_based_to_json(f),
    }
}

/// Graph JSON has no `"kind"` field; instance JSON does.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let raw: Value = serde_json::from_str(text).map_err(bad)?;
    if raw.get("kind").is_none() {
        let wire: GraphWire = serde_json::from_value(raw).map_err(bad)?;
        return graph_from_wire(wire).map(Instance::Graph);
    }
    match serde_json::from_value(raw).map_err(bad)? {
        InstanceWire::Permutation { n, sigma, c } => {
            if sigma.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: sigma.len(),
                });
            }
            PermutationInstance::new(sigma, c).map(Instance::Permutation)
        }
        InstanceWire::CostBased { n, singletons, cost } => {
            let singletons = singletons.iter().map(|s| parse_pq(s)).collect::<Result<Vec<_>>>()?;
            let cost = cost
                .into_iter()
                .map(|(bits, c)| Ok((Subset::new(n, bits)?, parse_pq(&c)?)))
                .collect::<Result<Vec<_>>>()?;
            CostBasedInstance::new(n, singletons, cost).map(Instance::CostBased)
        }
    }
}

pub fn witness_to_json(w: &Witness) -> Value {
    json!({
        "z": pq_array(&w.z),
        "epsilon": to_pq(&w.epsilon),
        "sign": match w.sign { Sign::Plus => "+", Sign::Minus => "-" },
        "w_prime": pq_array(w.w_prime.as_slice()),
        "changed_min": to_pq(&w.changed_min),
    })
}
