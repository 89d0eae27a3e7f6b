//! Exact Eulerian circuit counting by the BEST theorem.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use super::DisjointSets;
use crate::error::{domain, Result};
use crate::seqcore::factorial;

/// Directed multigraph with distinguishable edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(t, h)) = edges.iter().find(|&&(t, h)| t >= vertex_count || h >= vertex_count) {
            return domain(format!("edge {t}->{h} leaves the {vertex_count}-vertex range"));
        }
        Ok(Multigraph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(t, _) in &self.edges {
            d[t] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(_, h) in &self.edges {
            d[h] += 1;
        }
        d
    }

    /// Dense adjacency `[tail][head]` with multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.vertex_count]; self.vertex_count];
        for &(t, h) in &self.edges {
            m[t][h] += 1;
        }
        m
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Number of Eulerian circuits (up to rotation) of a connected balanced
/// multigraph: `Co_1[D - A] · Π (d_out(v) - 1)!`, where the cofactor drops
/// the row and column of the first vertex that carries edges. Vertices
/// without edges are ignored.
pub fn count_eulerian_cycles(g: &Multigraph) -> Result<BigUint> {
    let outs = g.out_degrees();
    let ins = g.in_degrees();
    if let Some(v) = (0..g.vertex_count).find(|&v| outs[v] != ins[v]) {
        return domain(format!("vertex {v} is unbalanced: out {} in {}", outs[v], ins[v]));
    }
    let active: Vec<usize> = (0..g.vertex_count).filter(|&v| outs[v] > 0).collect();
    if active.is_empty() {
        return domain("graph has no edges");
    }
    let mut local = vec![usize::MAX; g.vertex_count];
    for (i, &v) in active.iter().enumerate() {
        local[v] = i;
    }
    let mut dsu = DisjointSets::new(active.len());
    let mut components = active.len();
    for &(t, h) in &g.edges {
        if dsu.union(local[t], local[h]) {
            components -= 1;
        }
    }
    if components != 1 {
        return domain(format!("graph has {components} weakly connected components"));
    }

    let size = active.len() - 1;
    let mut laplacian = vec![vec![BigInt::zero(); size]; size];
    for i in 0..size {
        laplacian[i][i] = BigInt::from(outs[active[i + 1]]);
    }
    for &(t, h) in &g.edges {
        let (t, h) = (local[t], local[h]);
        if t > 0 && h > 0 {
            laplacian[t - 1][h - 1] -= 1;
        }
    }
    let trees = determinant(laplacian);
    let trees = match trees.sign() {
        Sign::Minus => unreachable!("arborescence count cannot be negative"),
        _ => trees.magnitude().clone(),
    };
    Ok(active
        .iter()
        .fold(trees, |acc, &v| acc * factorial(outs[v] as u64 - 1)))
}

/// Number of `ℓ`-ary de Bruijn sequences of order `p`:
/// `(ℓ!)^(ℓ^(p-1)) / ℓ^p`.
pub fn count_debruijn_sequences(l: u64, p: u32) -> BigUint {
    assert!(p >= 1, "order must be positive");
    let blocks = l.pow(p - 1) as u32;
    factorial(l).pow(blocks) / BigUint::from(l).pow(p)
}
