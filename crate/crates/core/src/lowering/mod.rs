//! The lowering operator: all level-`(p+1)` frequency vectors that raise to a
//! given level-`p` vector `Y`.
//!
//! Write a level-`(p+1)` word as `a·u·b` with `u` of length `p-1`. The
//! conditions `R_p Z̄ = Y` and `L_p Z̄ = Y` fix, for every middle word `u`,
//! the row sums `Y[a·u]` and column sums `Y[u·b]` of the `ℓ×ℓ` table
//! `Z̄[a·u·b]`. Blocks with different `u` are independent, so step one
//! enumerates non-negative tables per block and takes their product. Step
//! two keeps the vectors whose de Bruijn subgraph is connected.

pub mod wavelet;

use num_bigint::BigUint;

use crate::debruijn::{
    count_sequences_up_to, enumerate_sequences_capped, subgraph_from_frequency, DEFAULT_MAX_LENGTH,
};
use crate::error::{domain, Result};
use crate::freqspace::FrequencyVector;

/// Step one: every non-negative integer `Z̄` with `R_p Z̄ = Y` and
/// `L_p Z̄ = Y`, in lexicographic order. Empty when `Y` is not flow balanced.
pub fn solve_step1(y: &FrequencyVector) -> Result<Vec<FrequencyVector>> {
    let alphabet = y.alphabet();
    let l = alphabet.size() as u64;
    let p = y.level();
    if p == 0 {
        let mut out = Vec::new();
        let mut parts = vec![0u64; l as usize];
        compositions(y.length(), 0, &mut parts, &mut |c| {
            out.push(FrequencyVector::from_dense(1, alphabet, c))
        });
        let mut out = out.into_iter().collect::<Result<Vec<_>>>()?;
        out.sort();
        return Ok(out);
    }

    let middle = alphabet.pow(p - 1)?;
    let mut blocks: Vec<u64> = y
        .nonzero()
        .into_iter()
        .flat_map(|(r, _)| [r % middle, r / l])
        .collect();
    blocks.sort_unstable();
    blocks.dedup();

    // per block: list of tables, each flattened row-major as ℓ² counts
    let mut tables = Vec::with_capacity(blocks.len());
    for &u in &blocks {
        let rows: Vec<u64> = (0..l).map(|a| y.get(a * middle + u)).collect();
        let cols: Vec<u64> = (0..l).map(|b| y.get(u * l + b)).collect();
        if rows.iter().sum::<u64>() != cols.iter().sum::<u64>() {
            return Ok(Vec::new());
        }
        let found = contingency_tables(&rows, &cols);
        tables.push(found);
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; blocks.len()];
    loop {
        let entries = blocks.iter().zip(&choice).enumerate().flat_map(|(i, (&u, &c))| {
            let table = &tables[i][c];
            (0..l * l).map(move |cell| {
                let (a, b) = (cell / l, cell % l);
                ((a * middle + u) * l + b, table[cell as usize])
            })
        });
        out.push(FrequencyVector::from_entries(p + 1, alphabet, entries.collect::<Vec<_>>())?);
        // odometer over blocks
        let mut i = 0;
        loop {
            if i == choice.len() {
                out.sort();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < tables[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Lowering operator: step-one candidates whose subgraph is connected. This is
/// exactly the set `{project(s, p+1) : project(s, p) = Y}`.
pub fn lower(y: &FrequencyVector) -> Result<Vec<FrequencyVector>> {
    let mut out = Vec::new();
    for z in solve_step1(y)? {
        if subgraph_from_frequency(&z)?.is_connected() {
            out.push(z);
        }
    }
    Ok(out)
}

/// Number of necklaces realizing `z`; zero when its subgraph is disconnected.
pub fn count_members(z: &FrequencyVector) -> Result<BigUint> {
    count_members_capped(z, DEFAULT_MAX_LENGTH)
}

pub fn count_members_capped(z: &FrequencyVector, max_length: u64) -> Result<BigUint> {
    Ok(BigUint::from(enumerate_sequences_capped(z, max_length, usize::MAX)?.len()))
}

/// `min(count_members(z), limit)`, stopping the search early.
pub fn count_members_up_to(z: &FrequencyVector, max_length: u64, limit: usize) -> Result<usize> {
    count_sequences_up_to(z, max_length, limit)
}

/// Binary block coefficients `(c_(2m-1), c_(2m))` of a level-`(p+1)` vector,
/// one pair per block `m = 1..2^(p-1)`:
/// `c_(2m-1) = Z̄[0u0] - Y[0u]/2` and `c_(2m) = Z̄[1u0] - Y[1u]/2`.
pub fn binary_block_coefficients(z: &FrequencyVector) -> Result<Vec<(f64, f64)>> {
    if z.alphabet().size() != 2 || z.level() < 2 {
        return domain("block coefficients need a binary vector of level at least 2");
    }
    let p = z.level() - 1;
    let middle = 1u64 << (p - 1);
    let y = crate::freqspace::raise(z)?;
    Ok((0..middle)
        .map(|u| {
            let low = z.get(u * 2) as f64 - y.get(u) as f64 / 2.0;
            let high = z.get((middle + u) * 2) as f64 - y.get(middle + u) as f64 / 2.0;
            (low, high)
        })
        .collect())
}

fn compositions(rest: u64, at: usize, parts: &mut [u64], emit: &mut impl FnMut(&[u64])) {
    if at + 1 == parts.len() {
        parts[at] = rest;
        emit(parts);
        return;
    }
    for v in 0..=rest {
        parts[at] = v;
        compositions(rest - v, at + 1, parts, emit);
    }
}

/// All non-negative integer matrices with the given row and column sums,
/// flattened row-major.
fn contingency_tables(rows: &[u64], cols: &[u64]) -> Vec<Vec<u64>> {
    let l = rows.len();
    let mut out = Vec::new();
    let mut table = vec![0u64; l * l];
    let mut col_left = cols.to_vec();
    fill(0, rows[0], rows, &mut col_left, &mut table, &mut out);
    out
}

fn fill(
    cell: usize,
    row_left: u64,
    rows: &[u64],
    col_left: &mut [u64],
    table: &mut [u64],
    out: &mut Vec<Vec<u64>>,
) {
    let l = rows.len();
    let (a, b) = (cell / l, cell % l);
    if b == l - 1 {
        // last cell of the row takes the remainder
        if row_left > col_left[b] {
            return;
        }
        table[cell] = row_left;
        col_left[b] -= row_left;
        if a == l - 1 {
            out.push(table.to_vec());
        } else {
            fill(cell + 1, rows[a + 1], rows, col_left, table, out);
        }
        col_left[b] += row_left;
        return;
    }
    // the remaining columns of this row must absorb what is left
    let capacity_after: u64 = col_left[b + 1..].iter().sum();
    let low = row_left.saturating_sub(capacity_after);
    let high = row_left.min(col_left[b]);
    for v in low..=high {
        table[cell] = v;
        col_left[b] -= v;
        fill(cell + 1, row_left - v, rows, col_left, table, out);
        col_left[b] += v;
    }
}
