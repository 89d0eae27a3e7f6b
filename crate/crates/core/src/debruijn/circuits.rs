//! Explicit enumeration of the necklaces realizing a frequency vector.
//!
//! Every closed walk that uses edge `j` exactly `Z̄_j` times spells one
//! cyclic sequence. Walks are generated by backtracking from a fixed start
//! edge (every necklace has a rotation beginning there) and deduplicated
//! after canonicalization.

use std::collections::{BTreeSet, HashMap};

use super::subgraph_from_frequency;
use crate::error::{domain, Error, Result};
use crate::freqspace::FrequencyVector;
use crate::seqcore::{canonicalize, enumerate_necklaces_capped, Alphabet, CyclicSequence};

/// Default cap on the sequence length for explicit enumeration.
pub const DEFAULT_MAX_LENGTH: u64 = 20;

/// All necklaces `s` with `project(s, p) = z`, where `p` is the level of `z`.
/// Empty when the induced subgraph is disconnected.
pub fn enumerate_sequences_with_frequency(z: &FrequencyVector) -> Result<Vec<CyclicSequence>> {
    enumerate_sequences_capped(z, DEFAULT_MAX_LENGTH, usize::MAX)
}

/// Number of realizing necklaces, stopping early once `limit` are found.
pub fn count_sequences_up_to(z: &FrequencyVector, max_length: u64, limit: usize) -> Result<usize> {
    Ok(enumerate_sequences_capped(z, max_length, limit)?.len())
}

/// As [`enumerate_sequences_with_frequency`], with an explicit length cap
/// and an early stop after `limit` distinct necklaces. Results are sorted by
/// descending index.
pub fn enumerate_sequences_capped(
    z: &FrequencyVector,
    max_length: u64,
    limit: usize,
) -> Result<Vec<CyclicSequence>> {
    let n = z.length();
    if n == 0 {
        return domain("frequency vector is empty");
    }
    if n > max_length {
        return Err(Error::Resource(format!(
            "enumeration of sequences of length {n} exceeds the cap {max_length}"
        )));
    }
    if z.level() == 0 {
        let bits = n as f64 * (z.alphabet().size() as f64).log2();
        let mut all = enumerate_necklaces_capped(n as usize, z.alphabet(), bits)?;
        all.truncate(limit);
        return Ok(all);
    }
    let g = subgraph_from_frequency(z)?;
    if !g.is_balanced() {
        return domain("frequency vector is not flow balanced");
    }
    if !g.is_connected() {
        return Ok(Vec::new());
    }

    let edges = g.edges();
    let mut vertex_index: HashMap<u64, usize> = HashMap::new();
    for e in &edges {
        for v in [e.tail, e.head] {
            let next = vertex_index.len();
            vertex_index.entry(v).or_insert(next);
        }
    }
    let lead = z.alphabet().pow(z.level() - 1)?;
    let mut walk = Walk {
        alphabet: z.alphabet(),
        out: vec![Vec::new(); vertex_index.len()],
        remaining: edges.iter().map(|e| e.weight).collect(),
        letters: Vec::with_capacity(n as usize),
        found: BTreeSet::new(),
        length: n as usize,
        limit,
    };
    for (i, e) in edges.iter().enumerate() {
        let first = (e.rank / lead) as u8;
        walk.out[vertex_index[&e.tail]].push((i, vertex_index[&e.head], first));
    }
    // start from the highest-ranked edge
    let start = edges.len() - 1;
    walk.remaining[start] -= 1;
    walk.letters.push((edges[start].rank / lead) as u8);
    walk.extend(vertex_index[&edges[start].head]);
    Ok(walk.found.into_iter().rev().collect())
}

struct Walk {
    alphabet: Alphabet,
    /// Per vertex: (edge, head vertex, first letter of the edge word).
    out: Vec<Vec<(usize, usize, u8)>>,
    remaining: Vec<u64>,
    letters: Vec<u8>,
    found: BTreeSet<CyclicSequence>,
    length: usize,
    limit: usize,
}

impl Walk {
    fn extend(&mut self, at: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if self.letters.len() == self.length {
            let s = canonicalize(&self.letters, self.alphabet).expect("letters come from the alphabet");
            self.found.insert(s);
            return;
        }
        for k in 0..self.out[at].len() {
            let (edge, head, letter) = self.out[at][k];
            if self.remaining[edge] == 0 {
                continue;
            }
            self.remaining[edge] -= 1;
            self.letters.push(letter);
            self.extend(head);
            self.letters.pop();
            self.remaining[edge] += 1;
        }
    }
}
