//! Multi-indices, color vectors and slicing.
//!
//! A [`MultiIndex`] is the tuple (k₁,…,k_r) of positive exponents; positions
//! are 1-based in the public API to match the k₁…k_r convention used
//! throughout. Colors are stored as exact residues a mod N encoding the
//! root of unity μ = exp(2πi·a/N), so conjugation and inversion stay exact.

use crate::error::{Error, Result};
use std::fmt;

/// Ordered tuple of positive integer exponents. The empty index is a
/// first-class value: every sum evaluator maps it to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    parts: Vec<u32>,
}

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&k| k == 0) {
            return Err(Error::Parameter("index parts must be >= 1".into()));
        }
        Ok(MultiIndex { parts })
    }

    pub fn empty() -> Self {
        MultiIndex { parts: Vec::new() }
    }

    /// {m}_r — the exponent m repeated r times.
    pub fn repeat(m: u32, r: usize) -> Self {
        MultiIndex { parts: vec![m; r] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&k| k as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Admissible means r = 0 or k_r > 1.
    pub fn is_admissible(&self) -> bool {
        self.parts.last().map_or(true, |&k| k > 1)
    }

    pub fn reversed(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.reverse();
        MultiIndex { parts }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        MultiIndex { parts }
    }

    /// Append one exponent at the end.
    pub fn push(&self, k: u32) -> Self {
        let mut parts = self.parts.clone();
        parts.push(k);
        MultiIndex { parts }
    }

    /// k_[1,j] — the first j entries (1-based, j = 0 gives the empty index).
    pub fn prefix(&self, j: usize) -> Self {
        MultiIndex {
            parts: self.parts[..j.min(self.parts.len())].to_vec(),
        }
    }

    /// k_(j,r] — entries j+1..r.
    pub fn suffix_after(&self, j: usize) -> Self {
        MultiIndex {
            parts: self.parts[j.min(self.parts.len())..].to_vec(),
        }
    }

    /// k_[1,j) — entries 1..j-1.
    pub fn prefix_open(&self, j: usize) -> Self {
        if j == 0 {
            return Self::empty();
        }
        self.prefix(j - 1)
    }

    /// Entrywise sum k + n with a composition of the same depth.
    pub fn add_composition(&self, comp: &[u32]) -> Self {
        debug_assert_eq!(comp.len(), self.parts.len());
        MultiIndex {
            parts: self
                .parts
                .iter()
                .zip(comp)
                .map(|(&k, &n)| k + n)
                .collect(),
        }
    }

    /// General slice per the four interval conventions. Degenerate empty
    /// ranges yield the empty index; ranges reaching outside 1..r are
    /// rejected.
    pub fn slice(&self, rng: &SliceRange) -> Result<Self> {
        let r = self.parts.len() as i64;
        if rng.lo > rng.hi + 1 {
            return Err(Error::Range(format!(
                "slice {rng} is reversed beyond the degenerate conventions"
            )));
        }
        let (start, end) = rng.half_open();
        if start >= end {
            // Degenerate forms like (j, j], [j+1, j] and (j, j) are empty.
            return Ok(Self::empty());
        }
        if start < 1 || end > r + 1 {
            return Err(Error::Range(format!(
                "slice {rng} reaches outside positions 1..{r}"
            )));
        }
        Ok(MultiIndex {
            parts: self.parts[(start - 1) as usize..(end - 1) as usize].to_vec(),
        })
    }

    /// Comma-separated positive integers, e.g. "2,1,3". The empty string
    /// denotes the empty index.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for (i, tok) in t.split(',').enumerate() {
            let k: u32 = tok.trim().parse().map_err(|_| Error::Parse {
                pos: i,
                msg: format!("expected positive integer, got {tok:?}"),
            })?;
            if k == 0 {
                return Err(Error::Parse {
                    pos: i,
                    msg: "index parts must be >= 1".into(),
                });
            }
            parts.push(k);
        }
        Ok(MultiIndex { parts })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// End conventions for a slice. CC = [i,j], CO = [i,j), OC = (i,j], OO = (i,j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ends {
    ClosedClosed,
    ClosedOpen,
    OpenClosed,
    OpenOpen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceRange {
    pub lo: i64,
    pub hi: i64,
    pub ends: Ends,
}

impl SliceRange {
    pub fn new(lo: i64, hi: i64, ends: Ends) -> Self {
        SliceRange { lo, hi, ends }
    }

    /// 1-based half-open [start, end) covering the same positions.
    fn half_open(&self) -> (i64, i64) {
        match self.ends {
            Ends::ClosedClosed => (self.lo, self.hi + 1),
            Ends::ClosedOpen => (self.lo, self.hi),
            Ends::OpenClosed => (self.lo + 1, self.hi + 1),
            Ends::OpenOpen => (self.lo + 1, self.hi),
        }
    }
}

impl fmt::Display for SliceRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = match self.ends {
            Ends::ClosedClosed => ('[', ']'),
            Ends::ClosedOpen => ('[', ')'),
            Ends::OpenClosed => ('(', ']'),
            Ends::OpenOpen => ('(', ')'),
        };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

/// Colors of a multi-index at level N: exponent residues a_i with
/// μ_i = exp(2πi·a_i/N). Length must match the depth of the paired index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorVector {
    level: u32,
    exps: Vec<u32>,
}

impl ColorVector {
    pub fn new(level: u32, exps: Vec<u32>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Parameter("color level must be >= 1".into()));
        }
        let exps = exps.into_iter().map(|a| a % level).collect();
        Ok(ColorVector { level, exps })
    }

    pub fn trivial(level: u32, len: usize) -> Self {
        ColorVector {
            level,
            exps: vec![0; len],
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// All colors equal to 1.
    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    /// Residue of μ₁⋯μ_r.
    pub fn product_residue(&self) -> u32 {
        self.exps.iter().fold(0u32, |acc, &a| (acc + a) % self.level)
    }

    /// μ ↦ μ⁻¹, i.e. a ↦ −a mod N.
    pub fn inverted(&self) -> Self {
        ColorVector {
            level: self.level,
            exps: self
                .exps
                .iter()
                .map(|&a| if a == 0 { 0 } else { self.level - a })
                .collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        let mut exps = self.exps.clone();
        exps.reverse();
        ColorVector {
            level: self.level,
            exps,
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let mut exps = self.exps.clone();
        exps.extend_from_slice(&other.exps);
        Ok(ColorVector {
            level: self.level,
            exps,
        })
    }

    pub fn push(&self, a: u32) -> Self {
        let mut exps = self.exps.clone();
        exps.push(a % self.level);
        ColorVector {
            level: self.level,
            exps,
        }
    }

    pub fn prefix(&self, j: usize) -> Self {
        ColorVector {
            level: self.level,
            exps: self.exps[..j.min(self.exps.len())].to_vec(),
        }
    }

    pub fn suffix_after(&self, j: usize) -> Self {
        ColorVector {
            level: self.level,
            exps: self.exps[j.min(self.exps.len())..].to_vec(),
        }
    }

    pub fn prefix_open(&self, j: usize) -> Self {
        if j == 0 {
            return ColorVector {
                level: self.level,
                exps: Vec::new(),
            };
        }
        self.prefix(j - 1)
    }

    /// Colored index (k, μ) converges iff (k_r, μ_r) ≠ (1, 1).
    pub fn admissible_with(&self, k: &MultiIndex) -> bool {
        match (k.parts().last(), self.exps.last()) {
            (None, _) => true,
            (Some(&kr), Some(&ar)) => kr > 1 || ar != 0,
            (Some(&kr), None) => kr > 1,
        }
    }

    /// "a1,a2,...@N" grammar; "@N" alone is the empty vector at level N.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let (list, lvl) = t.rsplit_once('@').ok_or(Error::Parse {
            pos: 0,
            msg: "colors must end with @N".into(),
        })?;
        let level: u32 = lvl.trim().parse().map_err(|_| Error::Parse {
            pos: t.len() - lvl.len(),
            msg: format!("bad level {lvl:?}"),
        })?;
        if level == 0 {
            return Err(Error::Parse {
                pos: 0,
                msg: "level must be >= 1".into(),
            });
        }
        let list = list.trim();
        if list.is_empty() {
            return ColorVector::new(level, Vec::new());
        }
        let mut exps = Vec::new();
        for (i, tok) in list.split(',').enumerate() {
            let raw: i64 = tok.trim().parse().map_err(|_| Error::Parse {
                pos: i,
                msg: format!("expected integer residue, got {tok:?}"),
            })?;
            exps.push(raw.rem_euclid(level as i64) as u32);
        }
        ColorVector::new(level, exps)
    }
}

impl fmt::Display for ColorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "@{}", self.level)
    }
}

/// weight and depth as a pair, matching the (|k|, dep k) notation.
pub fn weight_depth(k: &MultiIndex) -> (u64, usize) {
    (k.weight(), k.depth())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(parts: &[u32]) -> MultiIndex {
        MultiIndex::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn weight_depth_basics() {
        assert_eq!(weight_depth(&mi(&[1, 2])), (3, 2));
        assert_eq!(weight_depth(&MultiIndex::empty()), (0, 0));
        assert_eq!(weight_depth(&MultiIndex::repeat(1, 5)), (5, 5));
    }

    #[test]
    fn reverse_is_involutive() {
        assert_eq!(mi(&[1, 2, 3]).reversed(), mi(&[3, 2, 1]));
        assert_eq!(MultiIndex::empty().reversed(), MultiIndex::empty());
        assert_eq!(mi(&[4, 1]).reversed().reversed(), mi(&[4, 1]));
    }

    #[test]
    fn slices_match_paper_conventions() {
        let k = mi(&[5, 7, 9]);
        let s = k
            .slice(&SliceRange::new(1, 2, Ends::ClosedClosed))
            .unwrap();
        assert_eq!(s, mi(&[5, 7]));

        let e = k.slice(&SliceRange::new(0, 1, Ends::OpenOpen)).unwrap();
        assert_eq!(e, MultiIndex::empty());

        let k2 = mi(&[2, 1, 3]);
        let s2 = k2.slice(&SliceRange::new(1, 3, Ends::OpenClosed)).unwrap();
        assert_eq!(s2, mi(&[1, 3]));

        assert!(k.slice(&SliceRange::new(3, 1, Ends::ClosedClosed)).is_err());
        assert!(k.slice(&SliceRange::new(2, 9, Ends::ClosedClosed)).is_err());
    }

    #[test]
    fn prefix_suffix_reconstruct() {
        let k = mi(&[2, 1, 3, 4]);
        for j in 0..=k.depth() {
            let joined = k.prefix(j).concat(&k.suffix_after(j));
            assert_eq!(joined, k);
            assert_eq!(
                k.prefix(j).weight() + k.suffix_after(j).weight(),
                k.weight()
            );
        }
    }

    #[test]
    fn parsing_round_trips() {
        assert_eq!(MultiIndex::parse("2,1,3").unwrap(), mi(&[2, 1, 3]));
        assert_eq!(MultiIndex::parse("").unwrap(), MultiIndex::empty());
        assert!(MultiIndex::parse("2,0").is_err());
        assert!(MultiIndex::parse("2,x").is_err());

        let c = ColorVector::parse("1,3@4").unwrap();
        assert_eq!(c.level(), 4);
        assert_eq!(c.exps(), &[1, 3]);
        assert_eq!(c.inverted().exps(), &[3, 1]);
        assert_eq!(c.product_residue(), 0);
        assert!(ColorVector::parse("1,2").is_err());
    }

    #[test]
    fn colored_admissibility() {
        let k = mi(&[1]);
        let minus_one = ColorVector::new(2, vec![1]).unwrap();
        let plus_one = ColorVector::new(2, vec![0]).unwrap();
        assert!(minus_one.admissible_with(&k));
        assert!(!plus_one.admissible_with(&k));
        assert!(plus_one.admissible_with(&mi(&[2])));
    }
}
