//! Gaussian coefficient ensembles and reproducible sampling.
//!
//! A [`CoefficientScheme`] fixes the deterministic weights `c_J`; a sample is
//! `f = Σ a_J c_J x^j1 y^j2` with `a_J` i.i.d. standard normal. The normals
//! come from a ChaCha8 stream keyed by `(master_seed, trial)` with one stream
//! id per monomial, so trial `k` is the same no matter which worker draws it.

use std::fmt;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::polynomial::PolySample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Kostlan,
    KacSquare,
    Custom,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Kostlan => "kostlan",
            Self::KacSquare => "kac",
            Self::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientScheme {
    kind: SchemeKind,
    degree: usize,
    side: usize,
    weights: Vec<f64>,
}

impl CoefficientScheme {
    /// `c_J = sqrt(d! / (j1! j2! (d - j1 - j2)!))` on the triangle `j1 + j2 <= d`.
    pub fn kostlan(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        let side = degree + 1;
        let lf = |n: usize| libm::lgamma(n as f64 + 1.0);
        let mut weights = vec![0.0; side * side];
        for j1 in 0..=degree {
            for j2 in 0..=degree - j1 {
                let ln_multinomial = lf(degree) - lf(j1) - lf(j2) - lf(degree - j1 - j2);
                weights[j1 * side + j2] = (0.5 * ln_multinomial).exp();
            }
        }
        Ok(Self { kind: SchemeKind::Kostlan, degree, side, weights })
    }

    /// Unit weights on the square `0 <= j1, j2 <= d`.
    pub fn kac_square(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        let side = degree + 1;
        Ok(Self { kind: SchemeKind::KacSquare, degree, side, weights: vec![1.0; side * side] })
    }

    /// Explicit weight table. The degree is the largest total degree present.
    pub fn custom<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let entries: Vec<_> = entries.into_iter().collect();
        let degree = entries.iter().map(|((a, b), _)| a + b).max().unwrap_or(0);
        if degree == 0 {
            return Err(Error::invalid("custom scheme needs a term of positive degree"));
        }
        let side = degree + 1;
        let mut weights = vec![0.0; side * side];
        for ((j1, j2), w) in entries {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(format!("weight for ({j1}, {j2}) must be finite and positive")));
            }
            weights[j1 * side + j2] = w;
        }
        Ok(Self { kind: SchemeKind::Custom, degree, side, weights })
    }

    /// Parses the `j1 j2 weight` table format; blank lines and `#` comments are skipped.
    pub fn parse_custom(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse { line: n + 1, msg: msg.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err("expected `j1 j2 weight`"));
            }
            let j1 = fields[0].parse().map_err(|_| parse_err("bad j1"))?;
            let j2 = fields[1].parse().map_err(|_| parse_err("bad j2"))?;
            let w: f64 = fields[2].parse().map_err(|_| parse_err("bad weight"))?;
            entries.push(((j1, j2), w));
        }
        Self::custom(entries)
    }

    pub fn from_custom_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_custom(&std::fs::read_to_string(path)?)
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    /// The ensemble parameter `d` (the bidegree bound for Kac).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Degree of the homogenized curve: `d` for Kostlan and custom tables, `2d` for Kac.
    pub fn homogenization_degree(&self) -> usize {
        match self.kind {
            SchemeKind::KacSquare => 2 * self.degree,
            _ => self.degree,
        }
    }

    pub fn weight(&self, j1: usize, j2: usize) -> f64 {
        if j1 < self.side && j2 < self.side {
            self.weights[j1 * self.side + j2]
        } else {
            0.0
        }
    }

    /// `((j1, j2), c_J)` over the support.
    pub fn support(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let side = self.side;
        self.weights.iter().enumerate().filter(|(_, &w)| w > 0.0).map(move |(k, &w)| ((k / side, k % side), w))
    }
}

/// Keyed source of per-trial coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleStream {
    pub master_seed: u64,
}

impl SampleStream {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    /// The standard normal `a_J` for monomial `(j1, j2)` of `trial`.
    pub fn normal(&self, trial: u64, j1: usize, j2: usize) -> f64 {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&trial.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(((j1 as u64) << 32) | j2 as u64);
        StandardNormal.sample(&mut rng)
    }
}

/// Draws trial `trial` of `scheme`: coefficient `(j1, j2)` is `a_J c_J`.
pub fn sample(scheme: &CoefficientScheme, stream: &SampleStream, trial: u64) -> PolySample {
    let side = scheme.side;
    let mut coeffs = vec![0.0; side * side];
    for ((j1, j2), w) in scheme.support() {
        coeffs[j1 * side + j2] = w * stream.normal(trial, j1, j2);
    }
    PolySample::from_dense(scheme.homogenization_degree(), side, coeffs, trial)
        .expect("a Gaussian sample has nonzero leading terms with probability one")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kostlan_degree_one_weights() {
        let s = CoefficientScheme::kostlan(1).unwrap();
        for (j1, j2) in [(0, 0), (1, 0), (0, 1)] {
            assert!((s.weight(j1, j2) - 1.0).abs() < 1e-15);
        }
        assert_eq!(s.weight(1, 1), 0.0);
    }

    #[test]
    fn kostlan_weights_are_multinomials() {
        let s = CoefficientScheme::kostlan(4).unwrap();
        // 4!/(1! 2! 1!) = 12
        assert!((s.weight(1, 2).powi(2) - 12.0).abs() < 1e-12);
        assert!((s.weight(2, 2).powi(2) - 6.0).abs() < 1e-12);
        let big = CoefficientScheme::kostlan(300).unwrap();
        assert!(big.support().all(|(_, w)| w.is_finite() && w > 0.0));
    }

    #[test]
    fn kac_support_is_square() {
        let s = CoefficientScheme::kac_square(3).unwrap();
        assert_eq!(s.support().count(), 16);
        assert_eq!(s.homogenization_degree(), 6);
        assert_eq!(s.weight(3, 3), 1.0);
    }

    #[test]
    fn same_seed_and_trial_is_bitwise_identical() {
        let s = CoefficientScheme::kostlan(6).unwrap();
        let stream = SampleStream::new(42);
        let a = sample(&s, &stream, 17);
        let b = sample(&s, &stream, 17);
        assert_eq!(a, b);
        let c = sample(&s, &stream, 18);
        assert_ne!(a, c);
        let d = sample(&s, &SampleStream::new(43), 17);
        assert_ne!(a, d);
    }

    #[test]
    fn monomials_draw_from_distinct_streams() {
        let stream = SampleStream::new(1);
        let v: Vec<f64> = [(0, 0), (1, 0), (0, 1), (1, 1)].iter().map(|&(a, b)| stream.normal(5, a, b)).collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                assert_ne!(v[i].to_bits(), v[j].to_bits());
            }
        }
    }

    #[test]
    fn custom_table_parses() {
        let s = CoefficientScheme::parse_custom("# weights\n0 0 1.0\n1 0 2.0\n0 2 0.5 # tail\n\n").unwrap();
        assert_eq!(s.kind(), SchemeKind::Custom);
        assert_eq!(s.degree(), 2);
        assert_eq!(s.weight(1, 0), 2.0);
        assert!(CoefficientScheme::parse_custom("0 0 -1\n1 0 1").is_err());
        assert!(CoefficientScheme::parse_custom("0 0\n").is_err());
        assert!(matches!(CoefficientScheme::parse_custom("0 0 1\nx 0 1"), Err(Error::Parse { line: 2, .. })));
    }
}
