//! Alphabets, cyclic sequences and their canonical representatives.
//!
//! A cyclic sequence is a word considered up to rotation. The canonical
//! representative is the rotation that is lexicographically maximal when
//! letters compare by value, which is the same as the rotation maximizing the
//! index `1 + Σ a_k ℓ^(n-k)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default cap on `n·log2(ℓ)` for explicit necklace enumeration.
pub const DEFAULT_ENUMERATION_BITS: f64 = 24.0;

/// Alphabet of `size` letters, written `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub struct Alphabet(u16);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if !(2..=256).contains(&size) {
            return domain(format!("alphabet size must lie in 2..=256, got {size}"));
        }
        Ok(Alphabet(size as u16))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn check_word(self, word: &[u8]) -> Result<()> {
        match word.iter().find(|&&a| a as usize >= self.size()) {
            Some(a) => domain(format!("letter {a} is outside the {}-letter alphabet", self.0)),
            None => Ok(()),
        }
    }

    /// `ℓ^p`, or an error if it does not fit in a `u64`.
    pub fn pow(self, p: usize) -> Result<u64> {
        u32::try_from(p)
            .ok()
            .and_then(|p| (self.0 as u64).checked_pow(p))
            .ok_or_else(|| Error::Resource(format!("{}^{p} overflows a 64-bit index", self.0)))
    }

    /// Parses a word written as a digit string (`ℓ ≤ 10`) or as
    /// comma-separated integers.
    pub fn parse_word(self, text: &str) -> Result<Vec<u8>> {
        let text = text.trim();
        let word: Vec<u8> = if text.contains(',') || self.size() > 10 {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Domain(format!("invalid letter {tok:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Domain(format!("invalid letter {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        if word.is_empty() {
            return domain("empty word");
        }
        self.check_word(&word)?;
        Ok(word)
    }

    pub fn format_word(self, word: &[u8]) -> String {
        if self.size() <= 10 {
            word.iter().map(|&a| char::from(b'0' + a)).collect()
        } else {
            let parts: Vec<String> = word.iter().map(u8::to_string).collect();
            parts.join(",")
        }
    }
}

impl TryFrom<u16> for Alphabet {
    type Error = Error;

    fn try_from(size: u16) -> Result<Self> {
        Alphabet::new(size as usize)
    }
}

impl From<Alphabet> for u16 {
    fn from(a: Alphabet) -> u16 {
        a.0
    }
}

/// A necklace, stored as its canonical (maximal) rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicSequence {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl CyclicSequence {
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index `1 + Σ a_k ℓ^(n-k)` of the stored word.
    pub fn index(&self) -> BigUint {
        let base = BigUint::from(self.alphabet.size());
        let value = self
            .symbols
            .iter()
            .fold(BigUint::zero(), |acc, &a| acc * &base + BigUint::from(a));
        value + 1u32
    }

    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        canonicalize(&alphabet.parse_word(text)?, alphabet)
    }
}

impl fmt::Display for CyclicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_word(&self.symbols))
    }
}

/// Start of the lexicographically maximal rotation (two-pointer scan, O(n)).
pub fn max_rotation_start(word: &[u8]) -> usize {
    let n = word.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = word[(i + k) % n];
        let b = word[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a < b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

pub fn canonicalize(word: &[u8], alphabet: Alphabet) -> Result<CyclicSequence> {
    if word.is_empty() {
        return domain("cannot canonicalize an empty word");
    }
    alphabet.check_word(word)?;
    Ok(CyclicSequence {
        alphabet,
        symbols: rotate(word, max_rotation_start(word)),
    })
}

/// Whether `word` is already its own maximal rotation.
pub fn is_canonical(word: &[u8]) -> bool {
    word.is_empty() || rotate(word, max_rotation_start(word)) == word
}

fn rotate(word: &[u8], k: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(word.len());
    out.extend_from_slice(&word[k..]);
    out.extend_from_slice(&word[..k]);
    out
}

/// Raw cyclic shift by `k` positions to the left (`[a1..an] -> [a2..an,a1]`
/// for `k = 1`). Negative `k` shifts right. The result is not re-canonicalized.
pub fn shift(s: &CyclicSequence, k: i64) -> Vec<u8> {
    let n = s.len() as i64;
    rotate(&s.symbols, k.rem_euclid(n) as usize)
}

/// Smallest `d | n` with `shift(s, d) = s`.
pub fn minimal_period(s: &CyclicSequence) -> usize {
    word_period(&s.symbols)
}

pub(crate) fn word_period(word: &[u8]) -> usize {
    let n = word.len();
    // prefix function: the smallest period of the linear word is n - fail[n-1]
    let mut fail = vec![0usize; n];
    for i in 1..n {
        let mut k = fail[i - 1];
        while k > 0 && word[i] != word[k] {
            k = fail[k - 1];
        }
        if word[i] == word[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

pub fn euler_totient(d: u64) -> u64 {
    assert!(d >= 1, "totient is defined for d >= 1");
    let mut rest = d;
    let mut phi = d;
    let mut q = 2u64;
    while q * q <= rest {
        if rest.is_multiple_of(q) {
            while rest.is_multiple_of(q) {
                rest /= q;
            }
            phi -= phi / q;
        }
        q += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    phi
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of necklaces of length `n` over `ℓ` letters:
/// `(1/n) Σ_{d|n} φ(d) ℓ^(n/d)`.
pub fn necklace_count(n: u64, l: u64) -> BigUint {
    assert!(n >= 1, "necklace length must be positive");
    let base = BigUint::from(l);
    let total = divisors(n)
        .into_iter()
        .fold(BigUint::zero(), |acc, d| acc + base.pow((n / d) as u32) * euler_totient(d));
    total / n
}

/// All necklaces of length `n`, sorted by descending index. Refuses when
/// `n·log2(ℓ)` exceeds [`DEFAULT_ENUMERATION_BITS`].
pub fn enumerate_necklaces(n: usize, alphabet: Alphabet) -> Result<Vec<CyclicSequence>> {
    enumerate_necklaces_capped(n, alphabet, DEFAULT_ENUMERATION_BITS)
}

pub fn enumerate_necklaces_capped(
    n: usize,
    alphabet: Alphabet,
    max_bits: f64,
) -> Result<Vec<CyclicSequence>> {
    if n == 0 {
        return domain("necklace length must be positive");
    }
    let bits = n as f64 * (alphabet.size() as f64).log2();
    if bits > max_bits {
        return Err(Error::Resource(format!(
            "enumerating necklaces of length {n} over {} letters needs {bits:.1} bits (cap {max_bits})",
            alphabet.size()
        )));
    }
    // Fredricksen-Kessler-Maiorana generates lexicographically minimal
    // necklaces in increasing order; complementing every letter turns them
    // into maximal representatives in decreasing order.
    let top = (alphabet.size() - 1) as u8;
    let mut word = vec![0u8; n];
    let mut out = Vec::new();
    let complement = |w: &[u8]| CyclicSequence {
        alphabet,
        symbols: w.iter().map(|&a| top - a).collect(),
    };
    out.push(complement(&word));
    while let Some(i) = word.iter().rposition(|&a| a < top) {
        word[i] += 1;
        for j in i + 1..n {
            word[j] = word[j - (i + 1)];
        }
        if n.is_multiple_of(i + 1) {
            out.push(complement(&word));
        }
    }
    Ok(out)
}

/// Letter counts `[a_1..a_ℓ]` of a level-1 cluster.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition(Vec<u64>);

impl Composition {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return domain("a composition needs at least two parts");
        }
        if counts.iter().all(|&a| a == 0) {
            return domain("a composition must sum to n >= 1");
        }
        Ok(Composition(counts))
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Number of necklaces with the given letter counts, by Burnside's lemma:
/// `(1/n) Σ_{d | gcd} φ(d) (n/d)! / Π (a_j/d)!`.
pub fn level1_cluster_size(c: &Composition) -> BigUint {
    let n = c.total();
    let g = c.parts().iter().fold(0u64, |g, &a| g.gcd(&a));
    let total = divisors(g).into_iter().fold(BigUint::zero(), |acc, d| {
        let denom = c
            .parts()
            .iter()
            .fold(BigUint::one(), |acc, &a| acc * factorial(a / d));
        acc + factorial(n / d) / denom * euler_totient(d)
    });
    total / n
}
