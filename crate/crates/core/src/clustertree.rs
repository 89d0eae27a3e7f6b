//! Hierarchical cluster tree of all necklaces of length `n`.
//!
//! The root is the level-0 vector `[n]`. Children of a node are the
//! connected lowerings of its vector, so every node is a cluster of
//! `p`-close sequences and the leaves partition the necklaces.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::debruijn::enumerate_sequences_capped;
use crate::error::{domain, Error, Result};
use crate::freqspace::FrequencyVector;
use crate::lowering::{count_members_capped, count_members_up_to, lower};
use crate::seqcore::{Alphabet, CyclicSequence};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeOptions {
    /// Deepest level to refine; nodes there become leaves with their full
    /// member count.
    pub max_p: Option<usize>,
    /// Binary only: keep the level-1 clusters with at most `⌊n/2⌋` ones.
    pub half_tree: bool,
    /// Overrides [`default_max_n`].
    pub max_n: Option<u64>,
}

/// Default cap on `n`: 16 for binary, 9 for ternary, and the largest `n`
/// with `ℓ^n ≤ 3^9` beyond that.
pub fn default_max_n(alphabet: Alphabet) -> u64 {
    match alphabet.size() {
        2 => 16,
        3 => 9,
        l => {
            let mut n = 1;
            while (l as u64).pow(n + 1) <= 19_683 {
                n += 1;
            }
            n as u64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterNode {
    #[serde(rename = "p")]
    pub level: usize,
    pub freq: FrequencyVector,
    #[serde(with = "crate::decimal")]
    pub count: BigUint,
    #[serde(default)]
    pub children: Vec<ClusterNode>,
}

impl ClusterNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Necklaces in this cluster, enumerated on demand.
    pub fn members(&self) -> Result<Vec<CyclicSequence>> {
        enumerate_sequences_capped(&self.freq, self.freq.length(), usize::MAX)
    }

    fn visit<'a>(&'a self, out: &mut Vec<&'a ClusterNode>) {
        out.push(self);
        for c in &self.children {
            c.visit(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTree {
    pub n: u64,
    pub l: Alphabet,
    pub root: ClusterNode,
}

impl ClusterTree {
    /// All nodes in depth-first pre-order.
    pub fn nodes(&self) -> Vec<&ClusterNode> {
        let mut out = Vec::new();
        self.root.visit(&mut out);
        out
    }

    pub fn leaves(&self) -> Vec<&ClusterNode> {
        self.nodes().into_iter().filter(|n| n.is_leaf()).collect()
    }

    /// Deepest level of a node with at least two children.
    pub fn max_branching_level(&self) -> Option<usize> {
        self.nodes()
            .into_iter()
            .filter(|n| n.children.len() >= 2)
            .map(|n| n.level)
            .max()
    }

    pub fn depth(&self) -> usize {
        self.nodes().into_iter().map(|n| n.level).max().unwrap_or(0)
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Json => serde_json::to_string_pretty(self).expect("tree serializes"),
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Newick => self.to_newick(),
        }
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid tree document: {e}")))
    }

    fn to_dot(&self) -> String {
        let mut out = String::from("digraph cluster_tree {\n  node [shape=circle];\n");
        let mut next = 0usize;
        dot_node(&self.root, &mut next, &mut out);
        out.push_str("}\n");
        out
    }

    fn to_newick(&self) -> String {
        let mut out = String::new();
        newick_node(&self.root, &mut out);
        out.push(';');
        out
    }
}

fn dot_node(node: &ClusterNode, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let style = if node.is_leaf() && node.count.is_one() {
        ", style=filled, fillcolor=black, fontcolor=white"
    } else {
        ""
    };
    let _ = writeln!(out, "  n{id} [label=\"{}\"{style}];", node.count);
    for child in &node.children {
        let cid = dot_node(child, next, out);
        let _ = writeln!(out, "  n{id} -> n{cid};");
    }
    id
}

fn newick_node(node: &ClusterNode, out: &mut String) {
    if !node.children.is_empty() {
        out.push('(');
        for (i, child) in node.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            newick_node(child, out);
            out.push_str(":1");
        }
        out.push(')');
    }
    let _ = write!(out, "{}", node.count);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    Newick,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "newick" => Ok(ExportFormat::Newick),
            other => Err(Error::Usage(format!("unknown tree format {other:?}"))),
        }
    }
}

pub fn build_tree(n: u64, alphabet: Alphabet, options: &TreeOptions) -> Result<ClusterTree> {
    build_tree_with_progress(n, alphabet, options, |_, _| {})
}

/// As [`build_tree`], calling `progress(done, total)` as each level-1
/// subtree completes.
pub fn build_tree_with_progress(
    n: u64,
    alphabet: Alphabet,
    options: &TreeOptions,
    progress: impl Fn(usize, usize) + Sync,
) -> Result<ClusterTree> {
    if n == 0 {
        return domain("sequence length must be positive");
    }
    let cap = options.max_n.unwrap_or_else(|| default_max_n(alphabet));
    if n > cap {
        return Err(Error::Resource(format!(
            "tree for n = {n} over {} letters exceeds the cap n <= {cap}",
            alphabet.size()
        )));
    }
    if options.half_tree && alphabet.size() != 2 {
        return domain("the half tree is defined for the binary alphabet");
    }
    let root_freq = FrequencyVector::from_dense(0, alphabet, &[n])?;
    let mut first = lower(&root_freq)?;
    if options.half_tree {
        first.retain(|z| z.get(1) <= n / 2);
    }
    let builder = Builder { n, max_p: options.max_p };
    let root = if options.max_p == Some(0) {
        let count = first.iter().map(|z| builder.full_count(z)).sum::<Result<BigUint>>()?;
        ClusterNode { level: 0, freq: root_freq, count, children: Vec::new() }
    } else {
        let done = AtomicUsize::new(0);
        let total = first.len();
        let children = first
            .into_par_iter()
            .map(|z| {
                let node = builder.node(z, 1);
                progress(done.fetch_add(1, Ordering::SeqCst) + 1, total);
                node
            })
            .collect::<Result<Vec<_>>>()?;
        let count = children.iter().map(|c| &c.count).sum();
        ClusterNode { level: 0, freq: root_freq, count, children }
    };
    Ok(ClusterTree { n, l: alphabet, root })
}

struct Builder {
    n: u64,
    max_p: Option<usize>,
}

impl Builder {
    fn full_count(&self, z: &FrequencyVector) -> Result<BigUint> {
        count_members_capped(z, self.n)
    }

    fn node(&self, freq: FrequencyVector, level: usize) -> Result<ClusterNode> {
        if self.max_p == Some(level) {
            let count = self.full_count(&freq)?;
            return Ok(ClusterNode { level, freq, count, children: Vec::new() });
        }
        let next = lower(&freq)?;
        if next.len() == 1 && count_members_up_to(&freq, self.n, 2)? == 1 {
            return Ok(ClusterNode { level, freq, count: BigUint::one(), children: Vec::new() });
        }
        let children = next
            .into_par_iter()
            .map(|z| self.node(z, level + 1))
            .collect::<Result<Vec<_>>>()?;
        let count = children.iter().map(|c| &c.count).fold(BigUint::zero(), |a, b| a + b);
        Ok(ClusterNode { level, freq, count, children })
    }
}

/// `⌊(n-3)/2⌋ + 1`, the deepest branching level predicted for binary
/// sequences of prime length. `None` for `n < 3`.
pub fn pmax_formula(n: u64) -> Option<usize> {
    (n >= 3).then(|| ((n - 3) / 2 + 1) as usize)
}

/// Observed maximal branching level of the full binary tree against
/// [`pmax_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PmaxReport {
    pub n: u64,
    pub observed: Option<usize>,
    pub predicted: Option<usize>,
}

impl PmaxReport {
    pub fn matches(&self) -> bool {
        self.observed == self.predicted
    }
}

pub fn pmax_report(n: u64) -> Result<PmaxReport> {
    let tree = build_tree(n, Alphabet::BINARY, &TreeOptions::default())?;
    Ok(PmaxReport { n, observed: tree.max_branching_level(), predicted: pmax_formula(n) })
}
