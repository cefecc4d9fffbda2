//! Quasi-shuffle (stuffle) and shuffle algebras on index words, optionally
//! colored, and the decomposition of an arbitrary word into admissible words
//! times powers of the divergent letter.
//!
//! Words are stored in ascending-index order: the last letter is the
//! outermost summation variable, so the divergent letter is the trailing
//! y_{1,1} (stuffle) or trailing x₁ (shuffle) and all decompositions peel
//! from the right.

use crate::error::{Error, Result};
use crate::exact::Frac;
use crate::indices::{ColorVector, MultiIndex};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Stuffle letter y_{k,a}: exponent k ≥ 1 with color residue a mod level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YLetter {
    pub k: u32,
    pub a: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YWord {
    level: u32,
    letters: Vec<YLetter>,
}

impl YWord {
    pub fn new(level: u32, letters: Vec<YLetter>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Parameter("level must be >= 1".into()));
        }
        if letters.iter().any(|l| l.k == 0 || l.a >= level) {
            return Err(Error::Parameter("bad y-letter".into()));
        }
        Ok(YWord { level, letters })
    }

    pub fn empty(level: u32) -> Self {
        YWord {
            level,
            letters: Vec::new(),
        }
    }

    pub fn from_index(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<Self> {
        match colors {
            None => YWord::new(
                1,
                k.parts().iter().map(|&k| YLetter { k, a: 0 }).collect(),
            ),
            Some(c) => {
                if c.len() != k.depth() {
                    return Err(Error::Parameter(
                        "color vector length must match depth".into(),
                    ));
                }
                YWord::new(
                    c.level(),
                    k.parts()
                        .iter()
                        .zip(c.exps())
                        .map(|(&k, &a)| YLetter { k, a })
                        .collect(),
                )
            }
        }
    }

    pub fn to_index(&self) -> (MultiIndex, ColorVector) {
        let k = MultiIndex::new(self.letters.iter().map(|l| l.k).collect()).unwrap();
        let c = ColorVector::new(self.level, self.letters.iter().map(|l| l.a).collect()).unwrap();
        (k, c)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn letters(&self) -> &[YLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.letters.iter().map(|l| l.k as u64).sum()
    }

    /// Admissible: last letter ≠ y_{1,1} (exponent 1 with trivial color).
    pub fn is_admissible(&self) -> bool {
        self.letters.last().map_or(true, |l| l.k > 1 || l.a != 0)
    }

    fn split_last(&self) -> Option<(YWord, YLetter)> {
        let mut letters = self.letters.clone();
        let last = letters.pop()?;
        Some((
            YWord {
                level: self.level,
                letters,
            },
            last,
        ))
    }

    fn appended(&self, l: YLetter) -> YWord {
        let mut letters = self.letters.clone();
        letters.push(l);
        YWord {
            level: self.level,
            letters,
        }
    }

    fn trailing_divergent(&self) -> usize {
        self.letters
            .iter()
            .rev()
            .take_while(|l| l.k == 1 && l.a == 0)
            .count()
    }
}

impl fmt::Display for YWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y:")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if self.level > 1 {
                write!(f, "{}@{}", l.k, l.a)?;
            } else {
                write!(f, "{}", l.k)?;
            }
        }
        if self.level > 1 {
            write!(f, "@N={}", self.level)?;
        }
        Ok(())
    }
}

/// Shuffle letter: x₀, or x_c for the root-of-unity residue c (c = 0 is x₁).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XLetter {
    X0,
    Xc(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XWord {
    level: u32,
    letters: Vec<XLetter>,
}

impl XWord {
    pub fn new(level: u32, letters: Vec<XLetter>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Parameter("level must be >= 1".into()));
        }
        for l in &letters {
            if let XLetter::Xc(c) = l {
                if *c >= level {
                    return Err(Error::Parameter("x-letter residue out of range".into()));
                }
            }
        }
        Ok(XWord { level, letters })
    }

    pub fn empty(level: u32) -> Self {
        XWord {
            level,
            letters: Vec::new(),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn letters(&self) -> &[XLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Weight = word length: each letter carries weight 1.
    pub fn weight(&self) -> u64 {
        self.letters.len() as u64
    }

    /// Admissible: does not end in the divergent letter x₁ = x_{c=0}.
    pub fn is_admissible(&self) -> bool {
        !matches!(self.letters.last(), Some(XLetter::Xc(0)))
    }

    fn split_last(&self) -> Option<(XWord, XLetter)> {
        let mut letters = self.letters.clone();
        let last = letters.pop()?;
        Some((
            XWord {
                level: self.level,
                letters,
            },
            last,
        ))
    }

    fn appended(&self, l: XLetter) -> XWord {
        let mut letters = self.letters.clone();
        letters.push(l);
        XWord {
            level: self.level,
            letters,
        }
    }

    fn trailing_divergent(&self) -> usize {
        self.letters
            .iter()
            .rev()
            .take_while(|l| matches!(l, XLetter::Xc(0)))
            .count()
    }
}

impl fmt::Display for XWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x:")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match l {
                XLetter::X0 => write!(f, "0")?,
                XLetter::Xc(0) => write!(f, "1")?,
                XLetter::Xc(c) => write!(f, "1@{c}")?,
            }
        }
        if self.level > 1 {
            write!(f, "@N={}", self.level)?;
        }
        Ok(())
    }
}

/// Finite formal linear combination of words with exact rational
/// coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WordPoly<W: Ord + Clone> {
    terms: BTreeMap<W, Frac>,
}

impl<W: Ord + Clone> WordPoly<W> {
    pub fn zero() -> Self {
        WordPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(w: W) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Frac::one());
        WordPoly { terms }
    }

    pub fn term(w: W, c: Frac) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn add_term(&mut self, w: W, c: Frac) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Frac::from_int(-1)))
    }

    pub fn scale(&self, c: &Frac) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        WordPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x * c))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W, &Frac)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &W) -> Frac {
        self.terms.get(w).cloned().unwrap_or_else(Frac::zero)
    }
}

fn bilinear<W: Ord + Clone>(
    a: &WordPoly<W>,
    b: &WordPoly<W>,
    f: &mut impl FnMut(&W, &W) -> WordPoly<W>,
) -> WordPoly<W> {
    let mut out = WordPoly::zero();
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            let p = f(u, v);
            let c = cu * cv;
            for (w, cw) in &p.terms {
                out.add_term(w.clone(), cw * &c);
            }
        }
    }
    out
}

fn stuffle_words(u: &YWord, v: &YWord) -> WordPoly<YWord> {
    if u.is_empty() {
        return WordPoly::unit(v.clone());
    }
    if v.is_empty() {
        return WordPoly::unit(u.clone());
    }
    let (u1, a) = u.split_last().unwrap();
    let (v1, b) = v.split_last().unwrap();
    let mut out = WordPoly::zero();
    for (w, c) in stuffle_words(&u1, v).terms {
        out.add_term(w.appended(a), c);
    }
    for (w, c) in stuffle_words(u, &v1).terms {
        out.add_term(w.appended(b), c);
    }
    let merged = YLetter {
        k: a.k + b.k,
        a: (a.a + b.a) % u.level,
    };
    for (w, c) in stuffle_words(&u1, &v1).terms {
        out.add_term(w.appended(merged), c);
    }
    out
}

/// Quasi-shuffle product, bilinear over the ℚ-span of y-words. Colored
/// letters merge with color multiplication (residue addition).
pub fn stuffle(a: &WordPoly<YWord>, b: &WordPoly<YWord>) -> Result<WordPoly<YWord>> {
    check_levels(a, b, |w: &YWord| w.level)?;
    Ok(bilinear(a, b, &mut |u, v| stuffle_words(u, v)))
}

fn shuffle_words(u: &XWord, v: &XWord) -> WordPoly<XWord> {
    if u.is_empty() {
        return WordPoly::unit(v.clone());
    }
    if v.is_empty() {
        return WordPoly::unit(u.clone());
    }
    let (u1, a) = u.split_last().unwrap();
    let (v1, b) = v.split_last().unwrap();
    let mut out = WordPoly::zero();
    for (w, c) in shuffle_words(&u1, v).terms {
        out.add_term(w.appended(a), c);
    }
    for (w, c) in shuffle_words(u, &v1).terms {
        out.add_term(w.appended(b), c);
    }
    out
}

/// Shuffle product on binary (iterated-integral) words.
pub fn shuffle(a: &WordPoly<XWord>, b: &WordPoly<XWord>) -> Result<WordPoly<XWord>> {
    check_levels(a, b, |w: &XWord| w.level)?;
    Ok(bilinear(a, b, &mut |u, v| shuffle_words(u, v)))
}

fn check_levels<W: Ord + Clone>(
    a: &WordPoly<W>,
    b: &WordPoly<W>,
    level: impl Fn(&W) -> u32,
) -> Result<()> {
    let mut seen: Option<u32> = None;
    for (w, _) in a.terms.iter().chain(b.terms.iter()) {
        let l = level(w);
        match seen {
            None => seen = Some(l),
            Some(s) if s != l => return Err(Error::LevelMismatch(s, l)),
            _ => {}
        }
    }
    Ok(())
}

/// y₁^{*j}, the j-th stuffle power of the divergent letter.
pub fn y1_stuffle_power(level: u32, j: u32) -> WordPoly<YWord> {
    let y1 = WordPoly::unit(YWord::new(level, vec![YLetter { k: 1, a: 0 }]).unwrap());
    let mut acc = WordPoly::unit(YWord::empty(level));
    for _ in 0..j {
        acc = stuffle(&acc, &y1).unwrap();
    }
    acc
}

/// x₁^{ш j}.
pub fn x1_shuffle_power(level: u32, j: u32) -> WordPoly<XWord> {
    let x1 = WordPoly::unit(XWord::new(level, vec![XLetter::Xc(0)]).unwrap());
    let mut acc = WordPoly::unit(XWord::empty(level));
    for _ in 0..j {
        acc = shuffle(&acc, &x1).unwrap();
    }
    acc
}

/// Polynomial in the divergent letter: slot j holds the admissible
/// combination paired with the j-th product power of the letter.
pub type Decomposition<W> = Vec<WordPoly<W>>;

fn add_into<W: Ord + Clone>(acc: &mut Decomposition<W>, j: usize, p: &WordPoly<W>, c: &Frac) {
    while acc.len() <= j {
        acc.push(WordPoly::zero());
    }
    for (w, cw) in p.terms() {
        acc[j].add_term(w.clone(), cw * c);
    }
}

#[allow(clippy::type_complexity)]
fn decompose_generic<W: Ord + Clone + std::hash::Hash>(
    w: &W,
    memo: &mut HashMap<W, Decomposition<W>>,
    is_admissible: &dyn Fn(&W) -> bool,
    trailing: &dyn Fn(&W) -> usize,
    drop_last: &dyn Fn(&W) -> W,
    mul_divergent: &dyn Fn(&W) -> WordPoly<W>,
) -> Decomposition<W> {
    if let Some(d) = memo.get(w) {
        return d.clone();
    }
    let d = if is_admissible(w) {
        vec![WordPoly::unit(w.clone())]
    } else {
        let t = trailing(w);
        let u = drop_last(w);
        // u * y₁ = t·w + S, where S has a strictly shorter divergent tail.
        let su = mul_divergent(&u);
        let s = su.sub(&WordPoly::unit(w.clone()).scale(&Frac::from_int(t as i64)));
        let inv_t = Frac::from_ratio(1, t as i64).unwrap();
        let mut acc: Decomposition<W> = Vec::new();
        // (1/t)·(decompose(u)·T − decompose(S))
        let du = decompose_generic(&u, memo, is_admissible, trailing, drop_last, mul_divergent);
        for (j, p) in du.iter().enumerate() {
            add_into(&mut acc, j + 1, p, &inv_t);
        }
        for (sw, sc) in s.terms() {
            let ds =
                decompose_generic(sw, memo, is_admissible, trailing, drop_last, mul_divergent);
            let c = &(-sc) * &inv_t;
            for (j, p) in ds.iter().enumerate() {
                add_into(&mut acc, j, p, &c);
            }
        }
        acc
    };
    memo.insert(w.clone(), d.clone());
    d
}

/// Decompose a stuffle word as w = Σ_j w_j * y₁^{*j} with every w_j a
/// combination of admissible words. Slot j of the result is w_j.
pub fn stuffle_decompose(w: &YWord) -> Decomposition<YWord> {
    let level = w.level;
    let y1 = YWord::new(level, vec![YLetter { k: 1, a: 0 }]).unwrap();
    let mut memo = HashMap::new();
    decompose_generic(
        w,
        &mut memo,
        &|w: &YWord| w.is_admissible(),
        &|w: &YWord| w.trailing_divergent(),
        &|w: &YWord| w.split_last().unwrap().0,
        &|u: &YWord| stuffle_words(u, &y1),
    )
}

/// Decompose a shuffle word as w = Σ_j w_j ш x₁^{ш j}.
pub fn shuffle_decompose(w: &XWord) -> Decomposition<XWord> {
    let level = w.level;
    let x1 = XWord::new(level, vec![XLetter::Xc(0)]).unwrap();
    let mut memo = HashMap::new();
    decompose_generic(
        w,
        &mut memo,
        &|w: &XWord| w.is_admissible(),
        &|w: &XWord| w.trailing_divergent(),
        &|w: &XWord| w.split_last().unwrap().0,
        &|u: &XWord| shuffle_words(u, &x1),
    )
}

/// Index (k₁,…,k_r) with colors μ to the ascending iterated-integral word
/// x_{b₁}x₀^{k₁−1} ⋯ x_{b_r}x₀^{k_r−1}, where b_i encodes (μ_i⋯μ_r)^{−1}.
pub fn encode_binary(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<XWord> {
    let level = colors.map_or(1, |c| c.level());
    if let Some(c) = colors {
        if c.len() != k.depth() {
            return Err(Error::Parameter(
                "color vector length must match depth".into(),
            ));
        }
    }
    let mut letters = Vec::new();
    let exps = colors.map(|c| c.exps().to_vec()).unwrap_or_default();
    for (i, &ki) in k.parts().iter().enumerate() {
        let tail: u32 = if colors.is_some() {
            exps[i..].iter().fold(0u32, |s, &a| (s + a) % level)
        } else {
            0
        };
        let b = if tail == 0 { 0 } else { level - tail };
        letters.push(XLetter::Xc(b));
        for _ in 1..ki {
            letters.push(XLetter::X0);
        }
    }
    XWord::new(level, letters)
}

/// Inverse of [`encode_binary`]. Fails when the word does not start with a
/// non-x₀ letter.
pub fn decode_binary(w: &XWord) -> Result<(MultiIndex, ColorVector)> {
    if w.letters.is_empty() {
        return Ok((
            MultiIndex::empty(),
            ColorVector::new(w.level, Vec::new())?,
        ));
    }
    if matches!(w.letters.first(), Some(XLetter::X0)) {
        return Err(Error::Decode("word starts with x0".into()));
    }
    let mut bs: Vec<u32> = Vec::new();
    let mut ks: Vec<u32> = Vec::new();
    for l in &w.letters {
        match l {
            XLetter::Xc(c) => {
                bs.push(*c);
                ks.push(1);
            }
            XLetter::X0 => {
                *ks.last_mut().unwrap() += 1;
            }
        }
    }
    let level = w.level;
    let r = bs.len();
    let mut exps = vec![0u32; r];
    for i in 0..r {
        let next = if i + 1 < r { bs[i + 1] } else { 0 };
        exps[i] = (next + level - bs[i]) % level;
    }
    Ok((MultiIndex::new(ks)?, ColorVector::new(level, exps)?))
}

#[derive(Clone, Debug)]
pub enum ParsedWord {
    Y(YWord),
    X(XWord),
}

/// Word literal grammar: "y:2,1", "x:1,0,1"; colored letters as "k@a" with a
/// trailing "@N=4".
pub fn parse_word(text: &str) -> Result<ParsedWord> {
    let t = text.trim();
    let (kind, rest) = t.split_once(':').ok_or(Error::Parse {
        pos: 0,
        msg: "word literal must start with y: or x:".into(),
    })?;
    let (body, level) = match rest.rsplit_once("@N=") {
        Some((b, l)) => (
            b,
            l.parse::<u32>().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad level {l:?}"),
            })?,
        ),
        None => (rest, 1),
    };
    if level == 0 {
        return Err(Error::Parse {
            pos: 0,
            msg: "level must be >= 1".into(),
        });
    }
    let parse_tok = |tok: &str| -> Result<(u32, u32)> {
        let (ks, cs) = match tok.split_once('@') {
            Some((k, c)) => (k, Some(c)),
            None => (tok, None),
        };
        let k: u32 = ks.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("bad letter {tok:?}"),
        })?;
        let a: u32 = match cs {
            Some(c) => c.trim().parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad color {tok:?}"),
            })?,
            None => 0,
        };
        Ok((k, a % level))
    };
    match kind {
        "y" => {
            let mut letters = Vec::new();
            if !body.trim().is_empty() {
                for tok in body.split(',') {
                    let (k, a) = parse_tok(tok)?;
                    letters.push(YLetter { k, a });
                }
            }
            Ok(ParsedWord::Y(YWord::new(level, letters)?))
        }
        "x" => {
            let mut letters = Vec::new();
            if !body.trim().is_empty() {
                for tok in body.split(',') {
                    let (k, a) = parse_tok(tok)?;
                    match k {
                        0 => letters.push(XLetter::X0),
                        1 => letters.push(XLetter::Xc(a)),
                        _ => {
                            return Err(Error::Parse {
                                pos: 0,
                                msg: "x-word tokens must be 0 or 1[@a]".into(),
                            })
                        }
                    }
                }
            }
            Ok(ParsedWord::X(XWord::new(level, letters)?))
        }
        other => Err(Error::Parse {
            pos: 0,
            msg: format!("unknown word kind {other:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yw(ks: &[u32]) -> YWord {
        YWord::new(1, ks.iter().map(|&k| YLetter { k, a: 0 }).collect()).unwrap()
    }

    fn xw(bits: &[u8]) -> XWord {
        XWord::new(
            1,
            bits.iter()
                .map(|&b| if b == 0 { XLetter::X0 } else { XLetter::Xc(0) })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn stuffle_matches_hand_computation() {
        // y2 * y1 = y1y2 + y2y1 + y3
        let p = stuffle(&WordPoly::unit(yw(&[2])), &WordPoly::unit(yw(&[1]))).unwrap();
        assert_eq!(p.coeff(&yw(&[1, 2])), Frac::one());
        assert_eq!(p.coeff(&yw(&[2, 1])), Frac::one());
        assert_eq!(p.coeff(&yw(&[3])), Frac::one());
        assert_eq!(p.num_terms(), 3);

        // y1 * y1 = 2 y1y1 + y2
        let q = stuffle(&WordPoly::unit(yw(&[1])), &WordPoly::unit(yw(&[1]))).unwrap();
        assert_eq!(q.coeff(&yw(&[1, 1])), Frac::from_int(2));
        assert_eq!(q.coeff(&yw(&[2])), Frac::one());
        assert_eq!(q.num_terms(), 2);

        // empty word is the unit
        let u = stuffle(&WordPoly::unit(YWord::empty(1)), &WordPoly::unit(yw(&[2, 1]))).unwrap();
        assert_eq!(u, WordPoly::unit(yw(&[2, 1])));
    }

    #[test]
    fn shuffle_matches_hand_computation() {
        // x1 ш x1 = 2 x1x1
        let p = shuffle(&WordPoly::unit(xw(&[1])), &WordPoly::unit(xw(&[1]))).unwrap();
        assert_eq!(p.coeff(&xw(&[1, 1])), Frac::from_int(2));
        assert_eq!(p.num_terms(), 1);

        // x1 ш x1x0 = 2 x1x1x0 + x1x0x1
        let q = shuffle(&WordPoly::unit(xw(&[1])), &WordPoly::unit(xw(&[1, 0]))).unwrap();
        assert_eq!(q.coeff(&xw(&[1, 1, 0])), Frac::from_int(2));
        assert_eq!(q.coeff(&xw(&[1, 0, 1])), Frac::one());
        assert_eq!(q.num_terms(), 2);

        let u = shuffle(&WordPoly::unit(XWord::empty(1)), &WordPoly::unit(xw(&[1, 0]))).unwrap();
        assert_eq!(u, WordPoly::unit(xw(&[1, 0])));
    }

    #[test]
    fn stuffle_decomposition_examples() {
        // y1 = ∅ * y1
        let d = stuffle_decompose(&yw(&[1]));
        assert_eq!(d.len(), 2);
        assert!(d[0].is_zero());
        assert_eq!(d[1], WordPoly::unit(YWord::empty(1)));

        // y2y1 = y2 * y1 − (y1y2 + y3)
        let d = stuffle_decompose(&yw(&[2, 1]));
        assert_eq!(d[1], WordPoly::unit(yw(&[2])));
        assert_eq!(d[0].coeff(&yw(&[1, 2])), Frac::from_int(-1));
        assert_eq!(d[0].coeff(&yw(&[3])), Frac::from_int(-1));

        // y1y1 = (y1*y1 − y2)/2
        let d = stuffle_decompose(&yw(&[1, 1]));
        assert_eq!(
            d[2].coeff(&YWord::empty(1)),
            Frac::from_ratio(1, 2).unwrap()
        );
        assert_eq!(d[0].coeff(&yw(&[2])), Frac::from_ratio(-1, 2).unwrap());
    }

    #[test]
    fn shuffle_decomposition_examples() {
        let d = shuffle_decompose(&xw(&[1]));
        assert_eq!(d[1], WordPoly::unit(XWord::empty(1)));

        // x1x0x1 = x1x0 ш x1 − 2·x1x1x0
        let d = shuffle_decompose(&xw(&[1, 0, 1]));
        assert_eq!(d[1], WordPoly::unit(xw(&[1, 0])));
        assert_eq!(d[0].coeff(&xw(&[1, 1, 0])), Frac::from_int(-2));

        // x1x1 = (x1 ш x1)/2
        let d = shuffle_decompose(&xw(&[1, 1]));
        assert_eq!(
            d[2].coeff(&XWord::empty(1)),
            Frac::from_ratio(1, 2).unwrap()
        );
    }

    #[test]
    fn decomposition_reconstructs_and_is_admissible() {
        for parts in [
            vec![1u32],
            vec![1, 1],
            vec![2, 1],
            vec![1, 2, 1],
            vec![1, 1, 1],
            vec![3, 1, 1],
            vec![2, 1, 1, 1],
        ] {
            let w = yw(&parts);
            let d = stuffle_decompose(&w);
            let mut rec = WordPoly::zero();
            for (j, p) in d.iter().enumerate() {
                for (u, _) in p.terms() {
                    assert!(u.is_admissible());
                }
                let pw = stuffle(p, &y1_stuffle_power(1, j as u32)).unwrap();
                rec = rec.add(&pw);
            }
            assert_eq!(rec, WordPoly::unit(w));
        }
        for bits in [
            vec![1u8],
            vec![1, 1],
            vec![1, 0, 1],
            vec![1, 1, 0, 1],
            vec![1, 0, 1, 1],
        ] {
            let w = xw(&bits);
            let d = shuffle_decompose(&w);
            let mut rec = WordPoly::zero();
            for (j, p) in d.iter().enumerate() {
                for (u, _) in p.terms() {
                    assert!(u.is_admissible());
                }
                let pw = shuffle(p, &x1_shuffle_power(1, j as u32)).unwrap();
                rec = rec.add(&pw);
            }
            assert_eq!(rec, WordPoly::unit(w));
        }
    }

    #[test]
    fn binary_encoding_round_trips() {
        let k12 = MultiIndex::parse("1,2").unwrap();
        assert_eq!(encode_binary(&k12, None).unwrap(), xw(&[1, 1, 0]));
        let k21 = MultiIndex::parse("2,1").unwrap();
        assert_eq!(encode_binary(&k21, None).unwrap(), xw(&[1, 0, 1]));
        let (k, c) = decode_binary(&xw(&[1, 0, 0])).unwrap();
        assert_eq!(k, MultiIndex::parse("3").unwrap());
        assert!(c.is_trivial());
        assert!(decode_binary(&xw(&[0, 1])).is_err());

        // colored round trip at level 4
        let k = MultiIndex::parse("2,1").unwrap();
        let c = ColorVector::parse("1,3@4").unwrap();
        let w = encode_binary(&k, Some(&c)).unwrap();
        let (k2, c2) = decode_binary(&w).unwrap();
        assert_eq!(k2, k);
        assert_eq!(c2, c);
    }

    #[test]
    fn colored_stuffle_merges_colors() {
        let a = YWord::new(2, vec![YLetter { k: 1, a: 1 }]).unwrap();
        let p = stuffle(&WordPoly::unit(a.clone()), &WordPoly::unit(a)).unwrap();
        // y_{1,-1} * y_{1,-1} = 2 y_{1,-1}y_{1,-1} + y_{2,+1}
        let merged = YWord::new(2, vec![YLetter { k: 2, a: 0 }]).unwrap();
        let pair = YWord::new(2, vec![YLetter { k: 1, a: 1 }, YLetter { k: 1, a: 1 }]).unwrap();
        assert_eq!(p.coeff(&pair), Frac::from_int(2));
        assert_eq!(p.coeff(&merged), Frac::one());
    }

    #[test]
    fn word_parsing() {
        match parse_word("y:2,1").unwrap() {
            ParsedWord::Y(w) => assert_eq!(w, yw(&[2, 1])),
            _ => panic!(),
        }
        match parse_word("x:1,0,1").unwrap() {
            ParsedWord::X(w) => assert_eq!(w, xw(&[1, 0, 1])),
            _ => panic!(),
        }
        match parse_word("y:2@1,1@3@N=4").unwrap() {
            ParsedWord::Y(w) => {
                assert_eq!(w.level(), 4);
                assert_eq!(w.letters()[0], YLetter { k: 2, a: 1 });
                assert_eq!(w.letters()[1], YLetter { k: 1, a: 3 });
            }
            _ => panic!(),
        }
        assert!(parse_word("z:1").is_err());
    }
}
