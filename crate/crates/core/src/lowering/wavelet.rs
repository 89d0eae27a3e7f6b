//! Orthonormal wavelet basis on `V_(ℓ^p)` and numerical checks of how the
//! raising and incidence operators act on it.
//!
//! The integer solver in the parent module never uses this; the basis is a
//! verification layer for the block decomposition.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::freqspace::{drop_first, raise, FrequencyVector};
use crate::seqcore::Alphabet;

/// Largest space the dense basis is built for.
pub const MAX_DIMENSION: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveletLabel {
    /// `ψ_(0,j) = ℓ^(-p/2) χ_j ⊗ q ⊗ … ⊗ q`, `j = 0..ℓ-1`.
    Scaling { j: usize },
    /// `ψ_(γ,j,α) = ℓ^(-(p-γ)/2) e_(α_1) ⊗ … ⊗ e_(α_γ) ⊗ χ_j ⊗ q ⊗ … ⊗ q`,
    /// `γ = 1..p-1`, `j = 1..ℓ-1`.
    Detail { gamma: usize, j: usize, alpha: Vec<u8> },
}

impl WaveletLabel {
    pub fn gamma(&self) -> usize {
        match self {
            WaveletLabel::Scaling { .. } => 0,
            WaveletLabel::Detail { gamma, .. } => *gamma,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WaveletBasis {
    alphabet: Alphabet,
    level: usize,
    labels: Vec<WaveletLabel>,
    vectors: Vec<Vec<Complex64>>,
}

/// Entry `i` of the Fourier vector `χ_j`.
fn chi(l: usize, j: usize, i: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (i * j) as f64 / l as f64)
}

impl WaveletBasis {
    pub fn new(alphabet: Alphabet, level: usize) -> Result<Self> {
        if level == 0 {
            return domain("the wavelet basis needs level at least 1");
        }
        let dim = alphabet.pow(level)?;
        if dim > MAX_DIMENSION {
            return domain(format!("wavelet basis of dimension {dim} exceeds {MAX_DIMENSION}"));
        }
        let l = alphabet.size();
        let mut labels: Vec<WaveletLabel> = (0..l).map(|j| WaveletLabel::Scaling { j }).collect();
        for gamma in 1..level {
            let prefixes = alphabet.pow(gamma)?;
            for j in 1..l {
                for rank in 0..prefixes {
                    let alpha = crate::freqspace::word_of(rank, gamma, alphabet);
                    labels.push(WaveletLabel::Detail { gamma, j, alpha });
                }
            }
        }
        let vectors = labels.iter().map(|label| build(alphabet, level, label)).collect();
        Ok(WaveletBasis { alphabet, level, labels, vectors })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[WaveletLabel] {
        &self.labels
    }

    pub fn vector(&self, label: &WaveletLabel) -> Option<&[Complex64]> {
        self.labels.iter().position(|l| l == label).map(|i| self.vectors[i].as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WaveletLabel, &[Complex64])> {
        self.labels.iter().zip(self.vectors.iter().map(Vec::as_slice))
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (k, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((inner(a, b) - target).norm());
            }
        }
        worst
    }

    /// Coefficients `ψ† x` of a real vector, in label order.
    pub fn coefficients(&self, x: &[f64]) -> Vec<Complex64> {
        self.vectors.iter().map(|v| inner_real(v, x)).collect()
    }
}

fn build(alphabet: Alphabet, level: usize, label: &WaveletLabel) -> Vec<Complex64> {
    let l = alphabet.size();
    let dim = l.pow(level as u32);
    let (gamma, j, alpha): (usize, usize, &[u8]) = match label {
        WaveletLabel::Scaling { j } => (0, *j, &[]),
        WaveletLabel::Detail { gamma, j, alpha } => (*gamma, *j, alpha),
    };
    let scale = (l as f64).powf(-((level - gamma) as f64) / 2.0);
    let tail = l.pow((level - gamma - 1) as u32);
    let prefix = alpha.iter().fold(0usize, |acc, &a| acc * l + a as usize);
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..l {
        let base = (prefix * l + i) * tail;
        for slot in &mut v[base..base + tail] {
            *slot = chi(l, j, i) * scale;
        }
    }
    v
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn inner_real(a: &[Complex64], b: &[f64]) -> Complex64 {
    a.iter().zip(b).map(|(x, &y)| x.conj() * y).sum()
}

/// Sum over the last letter (`R`) applied to a complex vector.
fn apply_raise(l: usize, v: &[Complex64]) -> Vec<Complex64> {
    v.chunks(l).map(|c| c.iter().sum()).collect()
}

/// Sum over the first letter (`L`) applied to a complex vector.
fn apply_drop_first(l: usize, v: &[Complex64]) -> Vec<Complex64> {
    let rest = v.len() / l;
    (0..rest).map(|r| (0..l).map(|a| v[a * rest + r]).sum()).collect()
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn norm_max(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest error in `R ψ^(p+1)_(p,·) = 0` and `R ψ^(p+1)_(γ,·) = √ℓ ψ^(p)_(γ,·)`
/// for `γ < p`.
pub fn raise_action_defect(alphabet: Alphabet, level: usize) -> Result<f64> {
    let upper = WaveletBasis::new(alphabet, level + 1)?;
    let lower = WaveletBasis::new(alphabet, level)?;
    let l = alphabet.size();
    let root = (l as f64).sqrt();
    let mut worst: f64 = 0.0;
    for (label, v) in upper.iter() {
        let image = apply_raise(l, v);
        let err = if label.gamma() == level {
            norm_max(&image)
        } else {
            let target: Vec<Complex64> = lower.vector(label).expect("label exists one level up").iter().map(|x| x * root).collect();
            distance(&image, &target)
        };
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Largest error in the incidence rules: `L ψ^(p+1)_(0,0) = √ℓ ψ^(p)_(0,0)`,
/// `L ψ^(p+1)_(0,j) = 0` for `j ≥ 1`, and
/// `L ψ^(p+1)_(γ,j,(β,α)) = ψ^(p)_(γ-1,j,α)`.
pub fn drop_action_defect(alphabet: Alphabet, level: usize) -> Result<f64> {
    let upper = WaveletBasis::new(alphabet, level + 1)?;
    let lower = WaveletBasis::new(alphabet, level)?;
    let l = alphabet.size();
    let root = (l as f64).sqrt();
    let mut worst: f64 = 0.0;
    for (label, v) in upper.iter() {
        let image = apply_drop_first(l, v);
        let err = match label {
            WaveletLabel::Scaling { j: 0 } => {
                let target: Vec<Complex64> = lower.vector(label).unwrap().iter().map(|x| x * root).collect();
                distance(&image, &target)
            }
            WaveletLabel::Scaling { .. } => norm_max(&image),
            WaveletLabel::Detail { gamma, j, alpha } => {
                let target = if *gamma == 1 {
                    WaveletLabel::Scaling { j: *j }
                } else {
                    WaveletLabel::Detail { gamma: gamma - 1, j: *j, alpha: alpha[1..].to_vec() }
                };
                distance(&image, lower.vector(&target).unwrap())
            }
        };
        worst = worst.max(err);
    }
    Ok(worst)
}

fn real(x: &FrequencyVector) -> Vec<f64> {
    x.to_dense().into_iter().map(|c| c as f64).collect()
}

fn check_level(z: &FrequencyVector) -> Result<usize> {
    if z.level() < 2 {
        return domain("wavelet checks need a vector of level at least 2");
    }
    Ok(z.level() - 1)
}

/// For `Z̄` at level `p+1` and `Y = R Z̄`: largest error in
/// `ψ^(p)† Y = √ℓ ψ^(p+1)† Z̄` over all labels with `γ < p`.
pub fn coefficient_defect(z: &FrequencyVector) -> Result<f64> {
    let p = check_level(z)?;
    let y = raise(z)?;
    let upper = WaveletBasis::new(z.alphabet(), p + 1)?;
    let lower = WaveletBasis::new(z.alphabet(), p)?;
    let root = (z.alphabet().size() as f64).sqrt();
    let (zv, yv) = (real(z), real(&y));
    let mut worst: f64 = 0.0;
    for (label, v) in lower.iter() {
        let lhs = inner_real(v, &yv);
        let rhs = inner_real(upper.vector(label).unwrap(), &zv) * root;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// The block equation: `Y - X ⊗ q / ℓ` equals the sum over `j, α` of
/// `(Σ_β C_(p,j,(β,α))) ψ^(p)_(p-1,j,α)`, where `X = L Y` and `C` are the
/// top-level coefficients of `Z̄`. Requires `L Z̄ = R Z̄`.
pub fn main_equation_defect(z: &FrequencyVector) -> Result<f64> {
    let p = check_level(z)?;
    let y = raise(z)?;
    if drop_first(z)? != y {
        return domain("vector is not flow balanced");
    }
    let l = z.alphabet().size();
    let x = drop_first(&y)?;
    let upper = WaveletBasis::new(z.alphabet(), p + 1)?;
    let lower = WaveletBasis::new(z.alphabet(), p)?;
    let zv = real(z);
    let xv = real(&x);
    let yv = real(&y);
    let mut lhs: Vec<Complex64> = (0..yv.len())
        .map(|i| Complex64::new(yv[i] - xv[i / l] / l as f64, 0.0))
        .collect();
    for (label, v) in upper.iter().filter(|(label, _)| label.gamma() == p) {
        let WaveletLabel::Detail { j, alpha, .. } = label else {
            unreachable!("top level labels are details")
        };
        let c = inner_real(v, &zv);
        let target = if p == 1 {
            WaveletLabel::Scaling { j: *j }
        } else {
            WaveletLabel::Detail { gamma: p - 1, j: *j, alpha: alpha[1..].to_vec() }
        };
        for (slot, w) in lhs.iter_mut().zip(lower.vector(&target).unwrap()) {
            *slot -= c * w;
        }
    }
    Ok(norm_max(&lhs))
}

/// Reconstruction `Z̄ = Y ⊗ q / ℓ + Σ C_(p,j,·) ψ^(p+1)_(p,j,·)`.
pub fn reconstruction_defect(z: &FrequencyVector) -> Result<f64> {
    let p = check_level(z)?;
    let y = raise(z)?;
    let l = z.alphabet().size();
    let upper = WaveletBasis::new(z.alphabet(), p + 1)?;
    let zv = real(z);
    let yv = real(&y);
    let mut rebuilt: Vec<Complex64> = (0..zv.len())
        .map(|i| Complex64::new(yv[i / l] / l as f64, 0.0))
        .collect();
    for (_, v) in upper.iter().filter(|(label, _)| label.gamma() == p) {
        let c = inner_real(v, &zv);
        for (slot, w) in rebuilt.iter_mut().zip(v) {
            *slot += c * w;
        }
    }
    let target: Vec<Complex64> = zv.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Ok(distance(&rebuilt, &target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freqspace::project;
    use crate::seqcore::canonicalize;

    const TOL: f64 = 1e-9;

    #[test]
    fn sizes_and_orthonormality() {
        for l in 2..=4 {
            let alphabet = Alphabet::new(l).unwrap();
            for p in 1..=4 {
                let basis = WaveletBasis::new(alphabet, p).unwrap();
                assert_eq!(basis.len(), l.pow(p as u32));
                assert!(basis.orthonormality_defect() < TOL, "l={l} p={p}");
            }
        }
    }

    #[test]
    fn haar_like_binary_level_two() {
        let basis = WaveletBasis::new(Alphabet::BINARY, 2).unwrap();
        let constant = basis.vector(&WaveletLabel::Scaling { j: 0 }).unwrap();
        assert!(constant.iter().all(|x| (x - Complex64::new(0.5, 0.0)).norm() < TOL));
        let detail = basis
            .vector(&WaveletLabel::Detail { gamma: 1, j: 1, alpha: vec![1] })
            .unwrap();
        let expect = [0.0, 0.0, 1.0, -1.0].map(|x| x / 2f64.sqrt());
        for (a, b) in detail.iter().zip(expect) {
            assert!((a - Complex64::new(b, 0.0)).norm() < TOL);
        }
    }

    #[test]
    fn operator_actions() {
        for l in 2..=4 {
            let alphabet = Alphabet::new(l).unwrap();
            for p in 1..=3 {
                assert!(raise_action_defect(alphabet, p).unwrap() < TOL, "raise l={l} p={p}");
                assert!(drop_action_defect(alphabet, p).unwrap() < TOL, "drop l={l} p={p}");
            }
        }
    }

    #[test]
    fn block_equations_on_projections() {
        let ternary = Alphabet::new(3).unwrap();
        let samples = [
            canonicalize(&[1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0], Alphabet::BINARY).unwrap(),
            canonicalize(&[2, 0, 1, 1, 0, 2, 2, 1], ternary).unwrap(),
        ];
        for s in &samples {
            for p in 1..=4 {
                let z = project(s, p + 1).unwrap();
                assert!(coefficient_defect(&z).unwrap() < TOL);
                assert!(main_equation_defect(&z).unwrap() < TOL);
                assert!(reconstruction_defect(&z).unwrap() < TOL);
            }
        }
    }
}
