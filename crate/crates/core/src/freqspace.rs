//! Frequency vectors of cyclic windows and the operators acting on them.
//!
//! A level-`p` frequency vector of a length-`n` sequence has `ℓ^p` entries;
//! entry `j` (1-based) counts the cyclic windows `[β_1..β_p]` with
//! `j = 1 + Σ β_k ℓ^(p-k)`. Internally entries are addressed by the 0-based
//! *rank* `j - 1`.
//!
//! Projection is computed by sliding a cyclic window, raising by summing
//! consecutive blocks of `ℓ` entries. No operator matrix is ever built.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::seqcore::{Alphabet, CyclicSequence};

/// Vectors with more than this many entries are stored sparsely.
pub const DENSE_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Counts {
    Dense(Vec<u64>),
    /// Never holds zero counts.
    Sparse(BTreeMap<u64, u64>),
}

/// Counts of length-`p` cyclic windows of a length-`n` sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencyVector {
    level: usize,
    length: u64,
    alphabet: Alphabet,
    counts: Counts,
}

/// 1-based index `1 + Σ β_k ℓ^(p-k)` of a window.
pub fn word_index(window: &[u8], alphabet: Alphabet) -> Result<u64> {
    Ok(rank_of(window, alphabet)? + 1)
}

/// Window of length `p` with 1-based index `j`.
pub fn index_word(j: u64, p: usize, alphabet: Alphabet) -> Result<Vec<u8>> {
    let dim = alphabet.pow(p)?;
    if j == 0 || j > dim {
        return domain(format!("index {j} outside 1..={dim}"));
    }
    Ok(word_of(j - 1, p, alphabet))
}

/// 0-based rank of a window.
pub fn rank_of(window: &[u8], alphabet: Alphabet) -> Result<u64> {
    alphabet.check_word(window)?;
    alphabet.pow(window.len())?;
    let l = alphabet.size() as u64;
    Ok(window.iter().fold(0u64, |acc, &a| acc * l + a as u64))
}

/// Window of length `p` with 0-based rank `rank`.
pub fn word_of(rank: u64, p: usize, alphabet: Alphabet) -> Vec<u8> {
    let l = alphabet.size() as u64;
    let mut out = vec![0u8; p];
    let mut rest = rank;
    for slot in out.iter_mut().rev() {
        *slot = (rest % l) as u8;
        rest /= l;
    }
    out
}

impl FrequencyVector {
    /// Builds a vector from `(rank, count)` pairs; repeated ranks accumulate.
    pub fn from_entries(
        level: usize,
        alphabet: Alphabet,
        entries: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self> {
        let dim = alphabet.pow(level)?;
        let mut map = BTreeMap::new();
        for (rank, count) in entries {
            if rank >= dim {
                return domain(format!("rank {rank} outside level-{level} range 0..{dim}"));
            }
            if count > 0 {
                *map.entry(rank).or_insert(0) += count;
            }
        }
        let length = map.values().sum();
        let counts = if dim <= DENSE_LIMIT {
            let mut dense = vec![0u64; dim as usize];
            for (rank, count) in map {
                dense[rank as usize] = count;
            }
            Counts::Dense(dense)
        } else {
            Counts::Sparse(map)
        };
        Ok(FrequencyVector { level, length, alphabet, counts })
    }

    pub fn from_dense(level: usize, alphabet: Alphabet, values: &[u64]) -> Result<Self> {
        let dim = alphabet.pow(level)?;
        if values.len() as u64 != dim {
            return domain(format!(
                "level-{level} vector over {} letters needs {dim} entries, got {}",
                alphabet.size(),
                values.len()
            ));
        }
        Self::from_entries(level, alphabet, values.iter().enumerate().map(|(r, &c)| (r as u64, c)))
    }

    /// Dense constructor inferring the level from the number of entries.
    pub fn from_dense_auto(alphabet: Alphabet, values: &[u64]) -> Result<Self> {
        let l = alphabet.size() as u64;
        let mut level = 0;
        let mut dim = 1u64;
        while dim < values.len() as u64 {
            dim *= l;
            level += 1;
        }
        Self::from_dense(level, alphabet, values)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Sequence length `n`, the sum of all entries.
    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Number of entries `ℓ^p`.
    pub fn dimension(&self) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.len() as u64,
            Counts::Sparse(_) => self.alphabet.pow(self.level).expect("checked at construction"),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.counts, Counts::Dense(_))
    }

    /// Count at 0-based `rank`.
    pub fn get(&self, rank: u64) -> u64 {
        match &self.counts {
            Counts::Dense(v) => v.get(rank as usize).copied().unwrap_or(0),
            Counts::Sparse(m) => m.get(&rank).copied().unwrap_or(0),
        }
    }

    /// Non-zero entries as `(rank, count)` in increasing rank order.
    pub fn nonzero(&self) -> Vec<(u64, u64)> {
        match &self.counts {
            Counts::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(r, &c)| (r as u64, c))
                .collect(),
            Counts::Sparse(m) => m.iter().map(|(&r, &c)| (r, c)).collect(),
        }
    }

    pub fn support_size(&self) -> usize {
        match &self.counts {
            Counts::Dense(v) => v.iter().filter(|&&c| c > 0).count(),
            Counts::Sparse(m) => m.len(),
        }
    }

    pub fn to_dense(&self) -> Vec<u64> {
        match &self.counts {
            Counts::Dense(v) => v.clone(),
            Counts::Sparse(m) => {
                let mut out = vec![0u64; self.dimension() as usize];
                for (&r, &c) in m {
                    out[r as usize] = c;
                }
                out
            }
        }
    }

    pub fn max_entry(&self) -> u64 {
        self.nonzero().into_iter().map(|(_, c)| c).max().unwrap_or(0)
    }
}

impl Ord for FrequencyVector {
    /// Shape first, then lexicographic order of the full entry lists.
    fn cmp(&self, other: &Self) -> Ordering {
        let shape = (self.alphabet, self.level, self.length).cmp(&(other.alphabet, other.level, other.length));
        if shape != Ordering::Equal {
            return shape;
        }
        if let (Counts::Dense(a), Counts::Dense(b)) = (&self.counts, &other.counts) {
            return a.cmp(b);
        }
        let (a, b) = (self.nonzero(), other.nonzero());
        for (&(ra, ca), &(rb, cb)) in a.iter().zip(&b) {
            // a non-zero entry at a smaller rank beats a zero there
            match rb.cmp(&ra).then(ca.cmp(&cb)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for FrequencyVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for FrequencyVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct OneBased<'a>(&'a BTreeMap<u64, u64>);
        impl Serialize for OneBased<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (rank, count) in self.0 {
                    map.serialize_entry(&(rank + 1).to_string(), count)?;
                }
                map.end()
            }
        }

        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("p", &self.level)?;
        map.serialize_entry("n", &self.length)?;
        map.serialize_entry("l", &self.alphabet.size())?;
        match &self.counts {
            Counts::Dense(v) => map.serialize_entry("dense", v)?,
            Counts::Sparse(m) => map.serialize_entry("sparse", &OneBased(m))?,
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireVector {
    p: Option<usize>,
    n: Option<u64>,
    l: Option<usize>,
    dense: Option<Vec<u64>>,
    sparse: Option<BTreeMap<String, u64>>,
}

impl WireVector {
    fn build(self) -> Result<FrequencyVector> {
        let alphabet = Alphabet::new(self.l.unwrap_or(2))?;
        let fv = match (self.dense, self.sparse) {
            (Some(dense), None) => match self.p {
                Some(p) => FrequencyVector::from_dense(p, alphabet, &dense)?,
                None => FrequencyVector::from_dense_auto(alphabet, &dense)?,
            },
            (None, Some(sparse)) => {
                let p = self.p.ok_or_else(|| Error::Domain("sparse vector needs \"p\"".into()))?;
                let entries = sparse
                    .into_iter()
                    .map(|(k, c)| match k.parse::<u64>() {
                        Ok(j) if j >= 1 => Ok((j - 1, c)),
                        _ => domain(format!("invalid 1-based index {k:?}")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                FrequencyVector::from_entries(p, alphabet, entries)?
            }
            _ => return domain("exactly one of \"dense\" or \"sparse\" is required"),
        };
        if let Some(n) = self.n {
            if n != fv.length {
                return domain(format!("entries sum to {}, but n = {n}", fv.length));
            }
        }
        Ok(fv)
    }
}

impl<'de> Deserialize<'de> for FrequencyVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        WireVector::deserialize(deserializer)?.build().map_err(D::Error::custom)
    }
}

/// Level-`p` frequency vector of a cyclic word (not necessarily canonical).
pub fn project_word(word: &[u8], alphabet: Alphabet, p: usize) -> Result<FrequencyVector> {
    let n = word.len();
    if n == 0 {
        return domain("cannot project an empty word");
    }
    if p > n {
        return domain(format!("window length {p} exceeds sequence length {n}"));
    }
    alphabet.check_word(word)?;
    let dim = alphabet.pow(p)?;
    let l = alphabet.size() as u64;
    let mut rank = word[..p].iter().fold(0u64, |acc, &a| acc * l + a as u64);
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        entries.push((rank, 1));
        if p > 0 {
            rank = (rank * l + word[(i + p) % n] as u64) % dim;
        }
    }
    FrequencyVector::from_entries(p, alphabet, entries)
}

/// Level-`p` frequency vector of a cyclic sequence, `0 <= p <= n`.
pub fn project(s: &CyclicSequence, p: usize) -> Result<FrequencyVector> {
    project_word(s.symbols(), s.alphabet(), p)
}

/// Raising operator `R_p`: level `p+1` to level `p` by summing each block of
/// `ℓ` consecutive entries (dropping the last window letter).
pub fn raise(x: &FrequencyVector) -> Result<FrequencyVector> {
    if x.level == 0 {
        return domain("cannot raise a level-0 vector");
    }
    let l = x.alphabet.size() as u64;
    FrequencyVector::from_entries(
        x.level - 1,
        x.alphabet,
        x.nonzero().into_iter().map(|(r, c)| (r / l, c)),
    )
}

/// Incidence operator `L_p`: sums over the first window letter.
pub fn drop_first(x: &FrequencyVector) -> Result<FrequencyVector> {
    if x.level == 0 {
        return domain("cannot reduce a level-0 vector");
    }
    let dim = x.alphabet.pow(x.level - 1)?;
    FrequencyVector::from_entries(
        x.level - 1,
        x.alphabet,
        x.nonzero().into_iter().map(|(r, c)| (r % dim, c)),
    )
}

fn check_pair(a: &CyclicSequence, b: &CyclicSequence) -> Result<()> {
    if a.len() != b.len() || a.alphabet() != b.alphabet() {
        return domain(format!(
            "sequences differ in shape: n={} l={} versus n={} l={}",
            a.len(),
            a.alphabet().size(),
            b.len(),
            b.alphabet().size()
        ));
    }
    Ok(())
}

/// Whether `a` and `b` share their level-`p` frequency vector.
pub fn p_close(a: &CyclicSequence, b: &CyclicSequence, p: usize) -> Result<bool> {
    check_pair(a, b)?;
    Ok(project(a, p)? == project(b, p)?)
}

/// Largest `p` with `a ∼p b`, for distinct necklaces.
pub fn gamma_max(a: &CyclicSequence, b: &CyclicSequence) -> Result<usize> {
    check_pair(a, b)?;
    if a == b {
        return domain("gamma_max is defined for distinct sequences only");
    }
    // closeness is inherited by smaller p, so the first mismatch decides
    let n = a.len();
    for p in 1..=n {
        if project(a, p)? != project(b, p)? {
            return Ok(p - 1);
        }
    }
    unreachable!("distinct necklaces differ at level n")
}

/// The same value computed from the level-`n` vectors through the raising
/// chain `R_p ⋯ R_(n-1)`.
pub fn gamma_max_by_raising(a: &CyclicSequence, b: &CyclicSequence) -> Result<usize> {
    check_pair(a, b)?;
    if a == b {
        return domain("gamma_max is defined for distinct sequences only");
    }
    let n = a.len();
    let mut x = project(a, n)?;
    let mut y = project(b, n)?;
    for p in (0..n).rev() {
        x = raise(&x)?;
        y = raise(&y)?;
        if x == y {
            return Ok(p);
        }
    }
    unreachable!("level-0 vectors always agree")
}

/// `d(a,b) = e^(-γ_max)`, and exactly `0` when `a = b`.
pub fn ultrametric_distance(a: &CyclicSequence, b: &CyclicSequence) -> Result<f64> {
    check_pair(a, b)?;
    if a == b {
        return Ok(0.0);
    }
    Ok((-(gamma_max(a, b)? as f64)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::canonicalize;

    fn seq(word: &[u8]) -> CyclicSequence {
        canonicalize(word, Alphabet::BINARY).unwrap()
    }

    fn dense(v: &[u64]) -> FrequencyVector {
        FrequencyVector::from_dense_auto(Alphabet::BINARY, v).unwrap()
    }

    #[test]
    fn word_indices() {
        let a = Alphabet::BINARY;
        assert_eq!(word_index(&[0, 1], a).unwrap(), 2);
        assert_eq!(word_index(&[1, 0], a).unwrap(), 3);
        assert_eq!(word_index(&[0, 0, 0, 0], a).unwrap(), 1);
        assert_eq!(index_word(3, 2, a).unwrap(), vec![1, 0]);
        assert!(word_index(&[2], a).is_err());
        assert!(index_word(0, 2, a).is_err());
        assert!(index_word(5, 2, a).is_err());
    }

    #[test]
    fn projection_examples() {
        let s = seq(&[0, 0, 1]);
        assert_eq!(project(&s, 2).unwrap().to_dense(), vec![1, 1, 1, 0]);
        assert_eq!(project(&s, 1).unwrap().to_dense(), vec![2, 1]);
        assert_eq!(project(&s, 0).unwrap().to_dense(), vec![3]);
        let zeros = seq(&[0; 6]);
        assert_eq!(project(&zeros, 3).unwrap().nonzero(), vec![(0, 6)]);
        assert!(matches!(project(&s, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn raising_examples() {
        assert_eq!(raise(&dense(&[1, 1, 1, 0])).unwrap().to_dense(), vec![2, 1]);
        assert_eq!(raise(&dense(&[2, 2, 2, 2])).unwrap().to_dense(), vec![4, 4]);
        let s = seq(&[1, 1, 0, 1, 0]);
        for p in 0..5 {
            assert_eq!(raise(&project(&s, p + 1).unwrap()).unwrap(), project(&s, p).unwrap());
            assert_eq!(drop_first(&project(&s, p + 1).unwrap()).unwrap(), project(&s, p).unwrap());
        }
        assert!(raise(&dense(&[3])).is_err());
    }

    #[test]
    fn closeness_and_distance() {
        let a = seq(&[0, 0, 1, 0, 1]);
        let b = seq(&[0, 0, 0, 1, 1]);
        assert!(p_close(&a, &b, 1).unwrap());
        assert!(!p_close(&a, &b, 2).unwrap());
        assert_eq!(gamma_max(&a, &b).unwrap(), 1);
        assert_eq!(gamma_max_by_raising(&a, &b).unwrap(), 1);
        assert!((ultrametric_distance(&a, &b).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(ultrametric_distance(&a, &a).unwrap(), 0.0);
        assert!(gamma_max(&a, &a).is_err());
        assert!(p_close(&a, &seq(&[0, 1]), 1).is_err());
    }

    #[test]
    fn sparse_storage_above_limit() {
        let word: Vec<u8> = (0..14).map(|i| (i * 7 % 3 == 0) as u8).collect();
        let s = seq(&word);
        let x = project(&s, 13).unwrap();
        assert!(!x.is_dense());
        assert_eq!(x.length(), 14);
        assert!(project(&s, 12).unwrap().is_dense());
        assert_eq!(raise(&x).unwrap(), project(&s, 12).unwrap());
    }

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = [dense(&[0, 2, 1, 1]), dense(&[1, 1, 1, 1]), dense(&[0, 2, 0, 2])];
        v.sort();
        assert_eq!(v[0].to_dense(), vec![0, 2, 0, 2]);
        assert_eq!(v[2].to_dense(), vec![1, 1, 1, 1]);
        let a = FrequencyVector::from_entries(13, Alphabet::BINARY, [(0, 1), (5, 1)]).unwrap();
        let b = FrequencyVector::from_entries(13, Alphabet::BINARY, [(0, 1), (7, 1)]).unwrap();
        assert!(a > b);
    }

    #[test]
    fn json_forms() {
        let x = dense(&[2, 2, 2, 2]);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"p":2,"n":8,"l":2,"dense":[2,2,2,2]}"#);
        let back: FrequencyVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);

        let s = FrequencyVector::from_entries(13, Alphabet::BINARY, [(0, 2), (3, 2)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"p":13,"n":4,"l":2,"sparse":{"1":2,"4":2}}"#);
        assert_eq!(serde_json::from_str::<FrequencyVector>(&text).unwrap(), s);

        let short: FrequencyVector = serde_json::from_str(r#"{"dense":[1,1,1,0]}"#).unwrap();
        assert_eq!(short.level(), 2);
        assert!(serde_json::from_str::<FrequencyVector>(r#"{"p":2,"n":9,"dense":[2,2,2,2]}"#).is_err());
        assert!(serde_json::from_str::<FrequencyVector>(r#"{"p":2,"dense":[2,2,2]}"#).is_err());
    }
}
