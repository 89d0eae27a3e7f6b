//! De Bruijn graphs `G_ℓ(p)` and the weighted subgraphs induced by
//! frequency vectors.
//!
//! Vertices of `G_ℓ(p)` are the `ℓ^p` words of length `p`, edges the
//! `ℓ^(p+1)` words of length `p+1`; edge `a·u·b` runs from `a·u` to `u·b`.
//! Everything is addressed by rank arithmetic, so graphs are never stored.

mod circuits;
mod euler;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::freqspace::{word_of, FrequencyVector};
use crate::seqcore::Alphabet;

pub use circuits::{
    count_sequences_up_to, enumerate_sequences_capped, enumerate_sequences_with_frequency,
    DEFAULT_MAX_LENGTH,
};
pub use euler::{count_debruijn_sequences, count_eulerian_cycles, determinant, Multigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeBruijnGraph {
    alphabet: Alphabet,
    order: usize,
}

impl DeBruijnGraph {
    pub fn new(alphabet: Alphabet, order: usize) -> Result<Self> {
        alphabet.pow(order + 1)?;
        Ok(DeBruijnGraph { alphabet, order })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Vertex word length `p`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertex_count(&self) -> u64 {
        self.alphabet.pow(self.order).expect("checked at construction")
    }

    pub fn edge_count(&self) -> u64 {
        self.vertex_count() * self.alphabet.size() as u64
    }

    /// `(tail, head)` ranks of an edge: its first and last `p` letters.
    #[inline]
    pub fn edge_endpoints(&self, edge: u64) -> (u64, u64) {
        let l = self.alphabet.size() as u64;
        (edge / l, edge % self.vertex_count())
    }

    pub fn out_edges(&self, vertex: u64) -> impl Iterator<Item = u64> {
        let l = self.alphabet.size() as u64;
        (0..l).map(move |b| vertex * l + b)
    }

    pub fn in_edges(&self, vertex: u64) -> impl Iterator<Item = u64> {
        let l = self.alphabet.size() as u64;
        let dim = self.vertex_count();
        (0..l).map(move |a| a * dim + vertex)
    }

    /// The whole graph with unit multiplicities. Vertex `i` is rank `i`.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        let edges = (0..self.edge_count())
            .map(|e| {
                let (t, h) = self.edge_endpoints(e);
                (t as usize, h as usize)
            })
            .collect();
        Multigraph::new(self.vertex_count() as usize, edges)
    }

    pub fn vertex_label(&self, vertex: u64) -> String {
        if self.order == 0 {
            return "·".to_string();
        }
        self.alphabet.format_word(&word_of(vertex, self.order, self.alphabet))
    }
}

/// Subgraph of `G_ℓ(p)` carrying the edge weights `Z̄` of a level-`(p+1)`
/// frequency vector (weight = number of traversals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSubgraph {
    graph: DeBruijnGraph,
    weights: FrequencyVector,
}

/// One weighted edge of a [`WeightedSubgraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedEdge {
    pub rank: u64,
    pub tail: u64,
    pub head: u64,
    pub weight: u64,
}

pub fn subgraph_from_frequency(z: &FrequencyVector) -> Result<WeightedSubgraph> {
    if z.level() == 0 {
        return domain("edge weights need a vector of level >= 1");
    }
    Ok(WeightedSubgraph {
        graph: DeBruijnGraph::new(z.alphabet(), z.level() - 1)?,
        weights: z.clone(),
    })
}

impl WeightedSubgraph {
    pub fn base(&self) -> &DeBruijnGraph {
        &self.graph
    }

    pub fn weights(&self) -> &FrequencyVector {
        &self.weights
    }

    /// Edges with non-zero weight, by increasing rank.
    pub fn edges(&self) -> Vec<WeightedEdge> {
        self.weights
            .nonzero()
            .into_iter()
            .map(|(rank, weight)| {
                let (tail, head) = self.graph.edge_endpoints(rank);
                WeightedEdge { rank, tail, head, weight }
            })
            .collect()
    }

    /// Vertices touched by a non-zero edge.
    pub fn vertices(&self) -> BTreeSet<u64> {
        self.edges().iter().flat_map(|e| [e.tail, e.head]).collect()
    }

    /// `(out-weight, in-weight)` per touched vertex.
    pub fn vertex_flows(&self) -> BTreeMap<u64, (u64, u64)> {
        let mut flows: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
        for e in self.edges() {
            flows.entry(e.tail).or_default().0 += e.weight;
            flows.entry(e.head).or_default().1 += e.weight;
        }
        flows
    }

    /// In-weight equals out-weight at every vertex.
    pub fn is_balanced(&self) -> bool {
        self.vertex_flows().values().all(|(o, i)| o == i)
    }

    /// Whether the undirected support of the non-zero edges is connected.
    /// The empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        let edges = self.edges();
        if edges.is_empty() {
            return false;
        }
        let mut index: HashMap<u64, usize> = HashMap::new();
        for e in &edges {
            for v in [e.tail, e.head] {
                let next = index.len();
                index.entry(v).or_insert(next);
            }
        }
        let mut dsu = DisjointSets::new(index.len());
        let mut components = index.len();
        for e in &edges {
            if dsu.union(index[&e.tail], index[&e.head]) {
                components -= 1;
            }
        }
        components == 1
    }

    /// Dense `L·diag(Z̄)·R`: entry `[head][tail]` is the total weight of the
    /// edges from `tail` to `head`. Only for graphs with at most 256 vertices.
    pub fn weighted_adjacency(&self) -> Result<Vec<Vec<u64>>> {
        let dim = self.graph.vertex_count();
        if dim > 256 {
            return Err(Error::Resource(format!("dense adjacency of {dim} vertices")));
        }
        let mut m = vec![vec![0u64; dim as usize]; dim as usize];
        for e in self.edges() {
            m[e.head as usize][e.tail as usize] += e.weight;
        }
        Ok(m)
    }

    /// Graphviz rendering; vertices labeled by their words, edges by weight.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph subgraph {\n");
        for v in self.vertices() {
            let label = self.graph.vertex_label(v);
            let _ = writeln!(out, "  v{v} [label=\"{label}\"];");
        }
        for e in self.edges() {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.tail, e.head, e.weight);
        }
        out.push_str("}\n");
        out
    }
}

/// Multigraph obtained by contracting every doubled edge of a subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultigraphMinor {
    graph: Multigraph,
    classes: Vec<Vec<u64>>,
}

impl MultigraphMinor {
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    /// Original vertex ranks merged into each minor vertex.
    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    /// Dense adjacency `[tail][head]` with multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        self.graph.adjacency()
    }

    /// Eulerian circuits of the minor. A minor with a single vertex and no
    /// edges (every edge doubled along one closed trail) counts as one.
    pub fn euler_count(&self) -> Result<num_bigint::BigUint> {
        if self.graph.edges().is_empty() && self.classes.len() == 1 {
            return Ok(1u32.into());
        }
        count_eulerian_cycles(&self.graph)
    }
}

/// Contracts the weight-2 edges of a subgraph whose weights are all at most
/// 2. Each doubled edge must be the only way out of its tail and the only
/// way into its head, so that contracting it loses no routing choice.
pub fn contract_doubled_edges(g: &WeightedSubgraph) -> Result<MultigraphMinor> {
    let edges = g.edges();
    if let Some(e) = edges.iter().find(|e| e.weight > 2) {
        return domain(format!("edge {} has weight {} > 2", e.rank + 1, e.weight));
    }
    let flows = g.vertex_flows();
    let vertices: Vec<u64> = flows.keys().copied().collect();
    let index: HashMap<u64, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dsu = DisjointSets::new(vertices.len());
    for e in edges.iter().filter(|e| e.weight == 2) {
        if flows[&e.tail].0 != 2 || flows[&e.head].1 != 2 {
            return domain(format!(
                "doubled edge {} is not forced: tail out-weight {}, head in-weight {}",
                e.rank + 1,
                flows[&e.tail].0,
                flows[&e.head].1
            ));
        }
        dsu.union(index[&e.tail], index[&e.head]);
    }
    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        let root = dsu.find(i);
        let c = *class_of.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(v);
    }
    let minor_edges = edges
        .iter()
        .filter(|e| e.weight == 1)
        .map(|e| (class_of[&dsu.find(index[&e.tail])], class_of[&dsu.find(index[&e.head])]))
        .collect();
    Ok(MultigraphMinor {
        graph: Multigraph::new(classes.len(), minor_edges)?,
        classes,
    })
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns whether two distinct sets were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
