//! Counting binary two-fold de Bruijn sequences: cyclic sequences of length
//! `2^(p+1)` in which every length-`p` word occurs exactly twice.
//!
//! With `Y = [2,…,2]` each lowering block `m` (edges `0u0, 0u1, 1u0, 1u1`)
//! admits three solutions: all ones (uniform), `(2,0,0,2)` (upper) and
//! `(0,2,2,0)` (lower). Contracting the doubled edges of a connected
//! configuration with `k` uniform blocks leaves a minor on `2k` vertices.
//!
//! [`count_twofold`] assembles `Σ_k Co(k) Φ(k)`, where `Φ(k)` counts connected
//! configurations and `Co(k)` is the circuit count of the minor
//! `Q'_(2k) = q† ⊗ 1_k ⊗ q`. That assumes the minor depends on `k` alone,
//! which fails from `p = 3` on; [`count_twofold_exact`] counts the circuits of
//! every minor instead and agrees with brute force.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::debruijn::{contract_doubled_edges, determinant, subgraph_from_frequency, DisjointSets};
use crate::error::{domain, Error, Result};
use crate::freqspace::{project_word, FrequencyVector};
use crate::seqcore::{enumerate_necklaces_capped, Alphabet};

/// Largest `p` for which the `3^(2^(p-1))` configurations are enumerated by
/// default.
pub const DEFAULT_MAX_P: usize = 5;

/// Largest `p` accepted by [`count_twofold_bruteforce`].
pub const BRUTEFORCE_MAX_P: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockChoice {
    /// `(1,1,1,1)`
    Uniform,
    /// `(2,0,0,2)`
    Upper,
    /// `(0,2,2,0)`
    Lower,
}

impl BlockChoice {
    fn weights(self) -> [u64; 4] {
        match self {
            BlockChoice::Uniform => [1, 1, 1, 1],
            BlockChoice::Upper => [2, 0, 0, 2],
            BlockChoice::Lower => [0, 2, 2, 0],
        }
    }
}

/// One admissible solution per block `m = 1..2^(p-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TwoFoldConfiguration {
    p: usize,
    blocks: Vec<BlockChoice>,
}

fn block_count(p: usize) -> Result<usize> {
    if p == 0 || p > 24 {
        return domain(format!("order p = {p} outside 1..=24"));
    }
    Ok(1 << (p - 1))
}

impl TwoFoldConfiguration {
    pub fn new(p: usize, blocks: Vec<BlockChoice>) -> Result<Self> {
        let expected = block_count(p)?;
        if blocks.len() != expected {
            return domain(format!("order {p} needs {expected} blocks, got {}", blocks.len()));
        }
        Ok(TwoFoldConfiguration { p, blocks })
    }

    /// Configuration number `index` in base 3, block 1 as the leading digit
    /// (0 = uniform, 1 = upper, 2 = lower).
    pub fn from_index(p: usize, mut index: u64) -> Result<Self> {
        let count = block_count(p)?;
        let mut blocks = vec![BlockChoice::Uniform; count];
        for slot in blocks.iter_mut().rev() {
            *slot = match index % 3 {
                0 => BlockChoice::Uniform,
                1 => BlockChoice::Upper,
                _ => BlockChoice::Lower,
            };
            index /= 3;
        }
        if index != 0 {
            return domain("configuration index out of range");
        }
        Ok(TwoFoldConfiguration { p, blocks })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[BlockChoice] {
        &self.blocks
    }

    pub fn uniform_blocks(&self) -> usize {
        self.blocks.iter().filter(|&&b| b == BlockChoice::Uniform).count()
    }

    /// Weights of `Z̄` by 0-based edge rank.
    fn weights(&self) -> Vec<u64> {
        let half = 1usize << self.p;
        let mut z = vec![0u64; 2 * half];
        for (u, b) in self.blocks.iter().enumerate() {
            let [a, b2, c, d] = b.weights();
            z[2 * u] = a;
            z[2 * u + 1] = b2;
            z[half + 2 * u] = c;
            z[half + 2 * u + 1] = d;
        }
        z
    }

    /// The level-`(p+1)` frequency vector `Z̄`.
    pub fn expand(&self) -> Result<FrequencyVector> {
        FrequencyVector::from_dense(self.p + 1, Alphabet::BINARY, &self.weights())
    }

    /// Whether `Z̄` has a 2 at its first or last entry, which always splits
    /// off a constant loop.
    pub fn is_pruned(&self) -> bool {
        self.blocks.first() == Some(&BlockChoice::Upper) || self.blocks.last() == Some(&BlockChoice::Upper)
    }

    /// Connectivity of the subgraph by union-find on the `2^p` vertices.
    pub fn is_connected(&self) -> bool {
        let mask = (1usize << self.p) - 1;
        let mut dsu = DisjointSets::new(mask + 1);
        let mut components = mask + 1;
        for (e, &w) in self.weights().iter().enumerate() {
            if w > 0 && dsu.union(e >> 1, e & mask) {
                components -= 1;
            }
        }
        // every vertex carries flow 2, so all of them are present
        components == 1
    }
}

fn check_k(p: usize, k: usize) -> Result<usize> {
    let blocks = block_count(p)?;
    if k > blocks {
        return domain(format!("k = {k} exceeds 2^(p-1) = {blocks}"));
    }
    Ok(blocks)
}

/// `2^(2^(p-1) - k) · C(2^(p-1), k)`: configurations with `k` uniform blocks.
pub fn permutation_count(p: usize, k: usize) -> Result<BigUint> {
    let blocks = check_k(p, k)?;
    let mut binom = BigUint::one();
    for i in 0..k {
        binom = binom * BigUint::from(blocks - i) / BigUint::from(i + 1);
    }
    Ok(binom << (blocks - k))
}

/// `Φ(k)` for `k = 0..=2^(p-1)`, by enumerating all configurations.
/// With `prune`, configurations flagged by [`TwoFoldConfiguration::is_pruned`]
/// are skipped without a connectivity test.
pub fn phi_table(p: usize, prune: bool) -> Result<Vec<BigUint>> {
    phi_table_capped(p, prune, DEFAULT_MAX_P)
}

pub fn phi_table_capped(p: usize, prune: bool, max_p: usize) -> Result<Vec<BigUint>> {
    let blocks = block_count(p)?;
    if p > max_p {
        return Err(Error::Resource(format!(
            "enumerating 3^{blocks} configurations for p = {p} exceeds the cap p <= {max_p}"
        )));
    }
    let total = 3u64.pow(blocks as u32);
    let tally = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; blocks + 1],
            |mut acc, index| {
                let c = TwoFoldConfiguration::from_index(p, index).expect("index in range");
                if !(prune && c.is_pruned()) && c.is_connected() {
                    acc[c.uniform_blocks()] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; blocks + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(tally.into_iter().map(BigUint::from).collect())
}

/// `Φ(k)`: connected configurations with exactly `k` uniform blocks.
pub fn phi(p: usize, k: usize) -> Result<BigUint> {
    check_k(p, k)?;
    Ok(phi_table(p, true)?.swap_remove(k))
}

/// The `2k × 2k` minor adjacency `Q'_(2k) = q† ⊗ 1_k ⊗ q`, indexed
/// `[head][tail]`.
pub fn minor_adjacency(k: usize) -> Vec<Vec<u64>> {
    let mut q = vec![vec![0u64; 2 * k]; 2 * k];
    for i in 0..k {
        for b in 0..2 {
            for c in 0..2 {
                q[2 * i + b][c * k + i] = 1;
            }
        }
    }
    q
}

/// `Co_1[2·1_(2k) - Q'_(2k)]` by exact determinant; `1` for `k = 0`.
pub fn minor_cofactor(k: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    let q = minor_adjacency(k);
    let minor: Vec<Vec<BigInt>> = (1..2 * k)
        .map(|r| {
            (1..2 * k)
                .map(|c| {
                    let diag = if r == c { 2 } else { 0 };
                    BigInt::from(diag) - BigInt::from(q[r][c])
                })
                .collect()
        })
        .collect();
    determinant(minor)
        .to_biguint()
        .expect("Laplacian cofactors are non-negative")
}

/// 2-adic valuation of `k`.
pub fn gamma0(k: usize) -> u32 {
    k.trailing_zeros()
}

/// `β = 2k - 1 - (k / 2^γ₀) Σ_(j=0..γ₀) 2^j`.
pub fn beta(k: usize) -> i64 {
    let g = gamma0(k);
    let odd = (k >> g) as i64;
    2 * k as i64 - 1 - odd * ((1i64 << (g + 1)) - 1)
}

/// The closed form `2^(2k-β)/(4k) · Π_(j=0..β/2-1) (1 + 4 cos²(2πj/β))`,
/// evaluated literally. Agrees with [`minor_cofactor`] only for some `k`.
pub fn cofactor_closed_form(k: usize) -> f64 {
    assert!(k >= 1, "closed form needs k >= 1");
    let b = beta(k);
    let mut product = 1.0;
    for j in 0..(b / 2).max(0) {
        let c = (2.0 * std::f64::consts::PI * j as f64 / b as f64).cos();
        product *= 1.0 + 4.0 * c * c;
    }
    2f64.powi((2 * k as i64 - b) as i32) / (4 * k) as f64 * product
}

/// `(1/2k) d/dλ det[λ - Q'_(2k)]` at `λ = 2` using the stated factorization
/// `(λ-2) λ^(2k-1) Π_(j<β) (1 - λ⁻¹ e^(2πij/β))`.
pub fn cofactor_from_secular(k: usize) -> f64 {
    assert!(k >= 1, "secular form needs k >= 1");
    let b = beta(k);
    let mut product = Complex64::new(1.0, 0.0);
    for j in 0..b.max(0) {
        let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / b as f64);
        product *= Complex64::new(1.0, 0.0) - root / 2.0;
    }
    2f64.powi(2 * k as i32 - 1) * product.re / (2 * k) as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoFoldRow {
    pub k: usize,
    #[serde(with = "crate::decimal")]
    pub perm_no: BigUint,
    #[serde(with = "crate::decimal")]
    pub phi: BigUint,
    #[serde(with = "crate::decimal")]
    pub cofactor: BigUint,
}

/// Rows `k = 0..=2^(p-1)` of PermNo, Φ and Co.
pub fn twofold_table(p: usize) -> Result<Vec<TwoFoldRow>> {
    twofold_table_capped(p, DEFAULT_MAX_P)
}

pub fn twofold_table_capped(p: usize, max_p: usize) -> Result<Vec<TwoFoldRow>> {
    let phis = phi_table_capped(p, true, max_p)?;
    phis.into_iter()
        .enumerate()
        .map(|(k, phi)| {
            Ok(TwoFoldRow { k, perm_no: permutation_count(p, k)?, phi, cofactor: minor_cofactor(k) })
        })
        .collect()
}

/// `N_p = Σ_k Co(k) Φ(k)`.
pub fn count_twofold(p: usize) -> Result<BigUint> {
    count_twofold_capped(p, DEFAULT_MAX_P)
}

pub fn count_twofold_capped(p: usize, max_p: usize) -> Result<BigUint> {
    Ok(assemble(&twofold_table_capped(p, max_p)?))
}

/// `Σ Co·Φ` over table rows.
pub fn assemble(rows: &[TwoFoldRow]) -> BigUint {
    rows.iter().map(|r| &r.cofactor * &r.phi).sum()
}

/// Counts two-fold sequences directly: canonical binary words of length
/// `2^(p+1)` (as bit patterns) whose level-`p` windows all occur twice.
pub fn count_twofold_bruteforce(p: usize) -> Result<BigUint> {
    if p == 0 || p > BRUTEFORCE_MAX_P {
        return Err(Error::Resource(format!(
            "brute force over 2^(2^(p+1)) words supports 1 <= p <= {BRUTEFORCE_MAX_P}"
        )));
    }
    let n = 1u32 << (p + 1);
    let full: u64 = (1u64 << n) - 1;
    let windows = 1usize << p;
    let count = (0..=full)
        .into_par_iter()
        .filter(|&w| {
            let rotate = |x: u64, r: u32| ((x << r) | (x >> (n - r))) & full;
            if (1..n).any(|r| rotate(w, r) > w) {
                return false;
            }
            let mut seen = vec![0u8; windows];
            for i in 0..n {
                let window = (rotate(w, i) >> (n - p as u32)) as usize;
                seen[window] += 1;
                if seen[window] > 2 {
                    return false;
                }
            }
            true
        })
        .count();
    Ok(BigUint::from(count))
}

/// Number of `f`-fold `ℓ`-ary de Bruijn sequences of order `p`: necklaces of
/// length `f·ℓ^p` whose level-`p` vector is `f` everywhere. Exploratory
/// oracle limited by the necklace enumeration cap.
pub fn count_ffold_bruteforce(alphabet: Alphabet, f: u64, p: usize, max_bits: f64) -> Result<BigUint> {
    if f == 0 || p == 0 {
        return domain("f and p must be positive");
    }
    let n = f * alphabet.pow(p)?;
    let necklaces = enumerate_necklaces_capped(n as usize, alphabet, max_bits)?;
    let mut count = BigUint::zero();
    for s in &necklaces {
        let z = project_word(s.symbols(), alphabet, p)?;
        if z.support_size() as u64 == alphabet.pow(p)? && z.max_entry() == f {
            count += 1u32;
        }
    }
    Ok(count)
}

/// Largest `p` for which [`exact_contributions`] runs by default.
pub const EXACT_MAX_P: usize = 4;

/// Per `k`, the total number of sequences realizing connected configurations
/// with `k` uniform blocks, from the Eulerian circuits of each contracted
/// minor. Unlike `Co(k)·Φ(k)` this does not assume the minor depends on `k`
/// alone.
pub fn exact_contributions(p: usize) -> Result<Vec<BigUint>> {
    exact_contributions_capped(p, EXACT_MAX_P)
}

pub fn exact_contributions_capped(p: usize, max_p: usize) -> Result<Vec<BigUint>> {
    let blocks = block_count(p)?;
    if p > max_p {
        return Err(Error::Resource(format!(
            "per-configuration circuit counts for p = {p} exceed the cap p <= {max_p}"
        )));
    }
    let per_config = (0..3u64.pow(blocks as u32))
        .into_par_iter()
        .map(|index| {
            let c = TwoFoldConfiguration::from_index(p, index)?;
            if c.is_pruned() || !c.is_connected() {
                return Ok(None);
            }
            Ok(Some((c.uniform_blocks(), minor_circuits(&c)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![BigUint::zero(); blocks + 1];
    for (k, count) in per_config.into_iter().flatten() {
        out[k] += count;
    }
    Ok(out)
}

/// Sum of [`exact_contributions`].
pub fn count_twofold_exact(p: usize) -> Result<BigUint> {
    Ok(exact_contributions(p)?.into_iter().sum())
}

/// Eulerian circuits of the contracted minor of a connected configuration.
pub fn minor_circuits(c: &TwoFoldConfiguration) -> Result<BigUint> {
    contract_doubled_edges(&subgraph_from_frequency(&c.expand()?)?)?.euler_count()
}

/// Connected configurations whose minor circuit count differs from
/// `minor_cofactor(k)`, with the actual count.
pub fn cofactor_mismatches(p: usize) -> Result<Vec<(TwoFoldConfiguration, BigUint)>> {
    let blocks = block_count(p)?;
    if p > EXACT_MAX_P {
        return Err(Error::Resource(format!("mismatch scan supports p <= {EXACT_MAX_P}")));
    }
    let mut out = Vec::new();
    for index in 0..3u64.pow(blocks as u32) {
        let c = TwoFoldConfiguration::from_index(p, index)?;
        if !c.is_connected() {
            continue;
        }
        let got = minor_circuits(&c)?;
        if got != minor_cofactor(c.uniform_blocks()) {
            out.push((c, got));
        }
    }
    Ok(out)
}
