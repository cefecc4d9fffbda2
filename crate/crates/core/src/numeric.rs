//! Certified evaluation of convergent (colored) multiple zeta values and the
//! regularization polynomials ζ_*^T and ζ_ш^T.
//!
//! Convergent values are computed from the iterated-integral representation
//! split at the midpoint of the path: every factor becomes a generalized
//! polylogarithm at 1/2, a series with geometric tails that certify easily.
//! Conditionally convergent colored series (k = 1 with a nontrivial color)
//! need no special casing under this representation. Color levels up to 12
//! are supported; beyond that the midpoint series no longer converge.

use crate::bounded::{working_prec, BoundedComplex, BoundedReal, NumField};
use crate::consts::{alt_zeta_zero, ln2, root_of_unity};
use crate::error::{Error, Result};
use crate::exact::{ExactValue, Frac};
use crate::hurwitz::{self, Bound, IntervalSpec};
use crate::indices::{ColorVector, MultiIndex};
use crate::words::{
    decode_binary, encode_binary, shuffle_decompose, stuffle_decompose, WordPoly, XLetter, XWord,
    YWord,
};
use crate::bigfloat::BigFloat;
use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

pub const MAX_LEVEL: u32 = 12;
const MIN_EPS: f64 = 1e-15;
const CACHE_CAP: usize = 1 << 20;

fn validate_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::Parameter("eps must be positive".into()));
    }
    if eps < MIN_EPS {
        return Err(Error::Precision(format!(
            "eps {eps:e} below the supported floor {MIN_EPS:e}"
        )));
    }
    Ok(())
}

fn check_eps_reached(err: f64, eps: f64) -> Result<()> {
    if err > eps {
        return Err(Error::Precision(format!(
            "achieved bound {err:e} exceeds requested eps {eps:e}"
        )));
    }
    Ok(())
}

/// Letters of the midpoint-series alphabet: x₀, a root of unity, or one
/// minus a root of unity (the image of a root letter under t ↦ 1−t).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CLetter {
    Zero,
    Root(u32),
    OneMinusRoot(u32),
}

fn c_value_cplx(l: CLetter, level: u32) -> BoundedComplex {
    match l {
        CLetter::Zero => unreachable!("zero letter has no c-value"),
        CLetter::Root(b) => root_of_unity(b, level),
        CLetter::OneMinusRoot(b) => BoundedComplex::one().sub(&root_of_unity(b, level)),
    }
}

fn c_value_real(l: CLetter, level: u32) -> BoundedReal {
    // only levels 1 and 2 reach this path
    match l {
        CLetter::Zero => unreachable!(),
        CLetter::Root(0) => BoundedReal::one(),
        CLetter::Root(1) if level == 2 => BoundedReal::from_i64(-1),
        CLetter::OneMinusRoot(1) if level == 2 => BoundedReal::from_i64(2),
        _ => unreachable!("letter {l:?} invalid at level {level}"),
    }
}

/// |c| lower bound as f64, for the convergence ratio ρ = (1/2)/|c|.
fn c_abs_lb(l: CLetter, level: u32) -> f64 {
    match l {
        CLetter::Zero => unreachable!(),
        CLetter::Root(_) => 1.0,
        CLetter::OneMinusRoot(b) => {
            let ang = std::f64::consts::PI * b as f64 / level as f64;
            2.0 * ang.sin().abs() * 0.999
        }
    }
}

/// Group a letter string into (lead letter, multiplicity) pairs; the lead of
/// each block must be non-zero.
fn group_blocks(letters: &[CLetter]) -> Vec<(CLetter, u32)> {
    let mut out: Vec<(CLetter, u32)> = Vec::new();
    for &l in letters {
        match l {
            CLetter::Zero => out.last_mut().expect("leading zero letter").1 += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

/// Generalized polylog Σ_{n₁<⋯<n_d} Π v_i^{n_i}/n_i^{k_i} with certified
/// geometric tail. `rho` must upper-bound every |v_i⋯v_d|.
fn multi_polylog<F: NumField>(vs: &[(F, u32)], rho: f64) -> F {
    let d = vs.len();
    if d == 0 {
        return F::one();
    }
    assert!(rho < 0.985, "midpoint series must converge (rho = {rho})");
    let prec = working_prec() as f64;
    // pick the truncation point: rho^n · n^(d-1) ≤ 2^-(prec+16)
    let target = -(prec + 16.0) * std::f64::consts::LN_2;
    let mut p = (8 * d).max(32) as f64;
    for _ in 0..4 {
        p = (target - (d as f64 - 1.0) * p.ln()) / rho.ln();
        p = p.max((8 * d).max(32) as f64);
    }
    let pmax = p.ceil() as i64 + 1;

    let mut pow: Vec<F> = vs.iter().map(|_| F::one()).collect();
    let mut pref: Vec<F> = (0..=d).map(|_| F::zero()).collect();
    pref[0] = F::one();
    for n in 1..=pmax {
        for i in (1..=d).rev() {
            pow[i - 1] = pow[i - 1].mul(&vs[i - 1].0);
            let term = pow[i - 1]
                .mul(&F::recip_ipow(n, vs[i - 1].1))
                .mul(&pref[i - 1]);
            pref[i] = pref[i].add(&term);
        }
    }
    // tail ≤ Σ_{n>P} rho^n n^{d-1}: ratio ≤ rho·(1+1/P)^{d-1} < 1
    let ratio = rho * (1.0 + 1.0 / pmax as f64).powi(d as i32 - 1);
    let t0 = rho.powf(pmax as f64 + 1.0) * ((pmax + 1) as f64).powi(d as i32 - 1);
    let tail = t0 / (1.0 - ratio) * 1.01;
    let tail_bf = BigFloat::from_f64(tail).round_up_coarse();
    pref.pop().unwrap().add_err_ub(&tail_bf)
}

/// Value of the midpoint factor P(word; 1/2) in field F.
fn polylog_half<F: NumField>(
    letters: &[CLetter],
    level: u32,
    cval: &dyn Fn(CLetter, u32) -> F,
) -> F {
    if letters.is_empty() {
        return F::one();
    }
    let blocks = group_blocks(letters);
    let d = blocks.len();
    let half = Frac::from_ratio(1, 2).unwrap();
    // v_i = c_{i+1}/c_i, with c_{d+1} = 1/2
    let mut vs: Vec<(F, u32)> = Vec::with_capacity(d);
    let mut rho: f64 = 0.0;
    for i in 0..d {
        let ci = cval(blocks[i].0, level);
        let next = if i + 1 < d {
            cval(blocks[i + 1].0, level)
        } else {
            F::from_frac(&half)
        };
        vs.push((next.div(&ci), blocks[i].1));
        // |v_i ⋯ v_d| = (1/2)/|c_i|
        let r = 0.5 / c_abs_lb(blocks[i].0, level);
        rho = rho.max(r);
    }
    multi_polylog(&vs, rho)
}

/// τ(reverse(suffix)) and the sign (−1)^{#letters with a nontrivial root}.
fn dual_word(suffix: &[CLetter]) -> (Vec<CLetter>, bool) {
    let mut out = Vec::with_capacity(suffix.len());
    let mut neg = false;
    for &l in suffix.iter().rev() {
        out.push(match l {
            CLetter::Zero => CLetter::Root(0),
            CLetter::Root(0) => CLetter::Zero,
            CLetter::Root(b) => {
                neg = !neg;
                CLetter::OneMinusRoot(b)
            }
            CLetter::OneMinusRoot(_) => unreachable!("dual of a dual letter"),
        });
    }
    (out, neg)
}

/// Midpoint-split evaluation of an admissible colored MZV given as an
/// iterated-integral word.
fn eval_word_split<F: NumField>(
    letters: &[CLetter],
    level: u32,
    cval: &dyn Fn(CLetter, u32) -> F,
) -> F {
    let n = letters.len();
    let mut total = F::zero();
    for j in 0..=n {
        let pre = polylog_half(&letters[..j], level, cval);
        let (dual, neg) = dual_word(&letters[j..]);
        let duv = polylog_half(&dual, level, cval);
        let term = pre.mul(&duv);
        total = if neg { total.sub(&term) } else { total.add(&term) };
    }
    total
}

fn xword_to_cletters(w: &XWord) -> Vec<CLetter> {
    w.letters()
        .iter()
        .map(|l| match l {
            XLetter::X0 => CLetter::Zero,
            XLetter::Xc(b) => CLetter::Root(*b),
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct LiKey {
    parts: Vec<u32>,
    exps: Vec<u32>,
    level: u32,
}

static LI_REAL: LazyLock<RwLock<HashMap<LiKey, BoundedReal>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static LI_CPLX: LazyLock<RwLock<HashMap<LiKey, BoundedComplex>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn li_key(k: &MultiIndex, colors: Option<&ColorVector>) -> LiKey {
    LiKey {
        parts: k.parts().to_vec(),
        exps: colors.map(|c| c.exps().to_vec()).unwrap_or_default(),
        level: colors.map_or(1, |c| c.level()),
    }
}

fn admissibility(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<()> {
    let ok = match colors {
        None => k.is_admissible(),
        Some(c) => c.admissible_with(k),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotAdmissible(format!(
            "{k} with colors {} diverges",
            colors.map(|c| c.to_string()).unwrap_or_else(|| "1".into())
        )))
    }
}

/// Convergent colored MZV Li(k;μ) through the real path (levels 1, 2).
pub(crate) fn li_real(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<BoundedReal> {
    debug_assert!(colors.map_or(1, |c| c.level()) <= 2);
    admissibility(k, colors)?;
    if k.is_empty() {
        return Ok(BoundedReal::one());
    }
    let key = li_key(k, colors);
    if let Some(v) = LI_REAL.read().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let w = encode_binary(k, colors)?;
    let letters = xword_to_cletters(&w);
    let v = eval_word_split(&letters, w.level(), &c_value_real);
    let mut tab = LI_REAL.write().unwrap();
    if tab.len() < CACHE_CAP {
        tab.insert(key, v.clone());
    }
    Ok(v)
}

/// Convergent colored MZV Li(k;μ) at any supported level.
pub(crate) fn li_cplx(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<BoundedComplex> {
    let level = colors.map_or(1, |c| c.level());
    if level <= 2 {
        return Ok(BoundedComplex::from_real(li_real(k, colors)?));
    }
    if level > MAX_LEVEL {
        return Err(Error::Parameter(format!(
            "color level {level} exceeds the midpoint evaluator limit {MAX_LEVEL}"
        )));
    }
    admissibility(k, colors)?;
    if k.is_empty() {
        return Ok(BoundedComplex::one());
    }
    let key = li_key(k, colors);
    if let Some(v) = LI_CPLX.read().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let w = encode_binary(k, colors)?;
    let letters = xword_to_cletters(&w);
    let v = eval_word_split(&letters, w.level(), &c_value_cplx);
    let mut tab = LI_CPLX.write().unwrap();
    if tab.len() < CACHE_CAP {
        tab.insert(key, v.clone());
    }
    Ok(v)
}

/// Star value via inclusion–exclusion over merge patterns of the gaps;
/// merged letters multiply their colors.
pub(crate) fn li_star_cplx(
    k: &MultiIndex,
    colors: Option<&ColorVector>,
) -> Result<BoundedComplex> {
    admissibility(k, colors)?;
    let r = k.depth();
    if r == 0 {
        return Ok(BoundedComplex::one());
    }
    let level = colors.map_or(1, |c| c.level());
    let mut total = BoundedComplex::zero();
    for mask in 0u32..(1 << (r - 1)) {
        let mut parts: Vec<u32> = vec![k.parts()[0]];
        let mut exps: Vec<u32> = vec![colors.map_or(0, |c| c.exps()[0])];
        for i in 1..r {
            if mask & (1 << (i - 1)) != 0 {
                // merge slot i into the previous block
                *parts.last_mut().unwrap() += k.parts()[i];
                let e = exps.last_mut().unwrap();
                *e = (*e + colors.map_or(0, |c| c.exps()[i])) % level;
            } else {
                parts.push(k.parts()[i]);
                exps.push(colors.map_or(0, |c| c.exps()[i]));
            }
        }
        let mk = MultiIndex::new(parts)?;
        let mc = colors.map(|_| ColorVector::new(level, exps).unwrap());
        total = total.add(&li_cplx(&mk, mc.as_ref())?);
    }
    Ok(total)
}

pub(crate) fn li_star_real(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<BoundedReal> {
    let v = li_star_cplx(k, colors)?;
    Ok(v.re)
}

/// ζ(k) for an admissible index with |result − ζ(k)| ≤ eps certified.
pub fn zeta(k: &MultiIndex, eps: f64) -> Result<BoundedReal> {
    validate_eps(eps)?;
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.to_string()));
    }
    let v = li_real(k, None)?;
    check_eps_reached(v.err_f64(), eps)?;
    Ok(v)
}

/// ζ*(k), same contract as [`zeta`].
pub fn zeta_star(k: &MultiIndex, eps: f64) -> Result<BoundedReal> {
    validate_eps(eps)?;
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.to_string()));
    }
    let v = li_star_real(k, None)?;
    check_eps_reached(v.err_f64(), eps)?;
    Ok(v)
}

/// Colored MZV Li(k;μ) with (k_r, μ_r) ≠ (1,1).
pub fn colored_li(k: &MultiIndex, colors: &ColorVector, eps: f64) -> Result<BoundedComplex> {
    validate_eps(eps)?;
    if colors.len() != k.depth() {
        return Err(Error::Parameter("color length mismatch".into()));
    }
    if !colors.admissible_with(k) {
        return Err(Error::Divergent(format!("({k};{colors}) has (1,1) tail")));
    }
    let v = li_cplx(k, Some(colors))?;
    check_eps_reached(v.err_ub_f64(), eps)?;
    Ok(v)
}

/// Colored star value.
pub fn colored_li_star(k: &MultiIndex, colors: &ColorVector, eps: f64) -> Result<BoundedComplex> {
    validate_eps(eps)?;
    if !colors.admissible_with(k) {
        return Err(Error::Divergent(format!("({k};{colors}) has (1,1) tail")));
    }
    let v = li_star_cplx(k, Some(colors))?;
    check_eps_reached(v.err_ub_f64(), eps)?;
    Ok(v)
}

/// Alternating Riemann zeta ζ̄(s) = (1−2^{1−s})ζ(s) for s ≥ 2, ln 2 at s = 1,
/// exactly 1/2 at s = 0.
pub fn alt_zeta(s: u32, eps: f64) -> Result<BoundedReal> {
    validate_eps(eps)?;
    let v = match s {
        0 => BoundedReal::from_frac(&alt_zeta_zero()),
        1 => ln2(),
        _ => {
            // Li(s; -1) = -ζ̄(s)
            let colors = ColorVector::new(2, vec![1])?;
            let k = MultiIndex::new(vec![s])?;
            li_real(&k, Some(&colors))?.neg()
        }
    };
    check_eps_reached(v.err_f64(), eps)?;
    Ok(v)
}

/// Polynomial in the regularization variable T with certified coefficients.
#[derive(Clone, Debug)]
pub struct RegPoly<F: NumField> {
    coeffs: Vec<F>,
}

pub type RegPolyReal = RegPoly<BoundedReal>;
pub type RegPolyCplx = RegPoly<BoundedComplex>;

impl<F: NumField> RegPoly<F> {
    pub fn zero() -> Self {
        RegPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        RegPoly { coeffs: vec![c] }
    }

    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        RegPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> F {
        self.coeff(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        RegPoly { coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::from_frac(&Frac::from_int(-1))))
    }

    pub fn scale(&self, c: &F) -> Self {
        RegPoly {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn scale_frac(&self, c: &Frac) -> Self {
        RegPoly {
            coeffs: self.coeffs.iter().map(|x| x.scale_frac(c)).collect(),
        }
    }

    /// Horner evaluation at T = t with bound propagation.
    pub fn eval(&self, t: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// Largest coefficient magnitude upper bound, as f64.
    pub fn max_coeff_ub_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs_ub().to_f64())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient error bound, as f64.
    pub fn max_err_ub_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.err_ub().to_f64())
            .fold(0.0, f64::max)
    }
}

impl RegPolyReal {
    pub fn render(&self, sig: usize) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let cs = c.to_decimal(sig);
            match i {
                0 => parts.push(cs),
                1 => parts.push(format!("({cs})·T")),
                _ => parts.push(format!("({cs})·T^{i}")),
            }
        }
        parts.join(" + ")
    }
}

impl RegPolyCplx {
    pub fn render(&self, sig: usize) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let cs = c.to_decimal(sig);
            match i {
                0 => parts.push(cs),
                1 => parts.push(format!("({cs})·T")),
                _ => parts.push(format!("({cs})·T^{i}")),
            }
        }
        parts.join(" + ")
    }
}

impl<F: NumField> fmt::Display for RegPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poly of degree {}", self.degree())
    }
}

fn eval_ypoly_cplx(p: &WordPoly<YWord>) -> Result<BoundedComplex> {
    let mut acc = BoundedComplex::zero();
    for (w, c) in p.terms() {
        let (k, colors) = w.to_index();
        let cv = if w.level() == 1 { None } else { Some(&colors) };
        acc = acc.add(&li_cplx(&k, cv)?.scale_frac(c));
    }
    Ok(acc)
}

fn eval_xpoly_cplx(p: &WordPoly<XWord>) -> Result<BoundedComplex> {
    let mut acc = BoundedComplex::zero();
    for (w, c) in p.terms() {
        let (k, colors) = decode_binary(w)?;
        let cv = if w.level() == 1 { None } else { Some(&colors) };
        acc = acc.add(&li_cplx(&k, cv)?.scale_frac(c));
    }
    Ok(acc)
}

/// Stuffle regularization ζ_*^T(k;μ) as a polynomial in T.
pub fn reg_stuffle_colored(
    k: &MultiIndex,
    colors: Option<&ColorVector>,
    eps: f64,
) -> Result<RegPolyCplx> {
    validate_eps(eps)?;
    let w = YWord::from_index(k, colors)?;
    let dec = stuffle_decompose(&w);
    let mut coeffs = Vec::with_capacity(dec.len());
    for slot in &dec {
        coeffs.push(eval_ypoly_cplx(slot)?);
    }
    let p = RegPoly::from_coeffs(coeffs);
    check_eps_reached(p.max_err_ub_f64(), eps)?;
    Ok(p)
}

/// Shuffle regularization ζ_ш^T(k;μ).
pub fn reg_shuffle_colored(
    k: &MultiIndex,
    colors: Option<&ColorVector>,
    eps: f64,
) -> Result<RegPolyCplx> {
    validate_eps(eps)?;
    let w = encode_binary(k, colors)?;
    let dec = shuffle_decompose(&w);
    let mut coeffs = Vec::with_capacity(dec.len());
    for slot in &dec {
        coeffs.push(eval_xpoly_cplx(slot)?);
    }
    let p = RegPoly::from_coeffs(coeffs);
    check_eps_reached(p.max_err_ub_f64(), eps)?;
    Ok(p)
}

fn real_part_poly(p: RegPolyCplx) -> RegPolyReal {
    RegPoly::from_coeffs(p.coeffs().iter().map(|c| c.re.clone()).collect())
}

/// Level-1 stuffle regularization polynomial.
pub fn reg_stuffle(k: &MultiIndex, eps: f64) -> Result<RegPolyReal> {
    Ok(real_part_poly(reg_stuffle_colored(k, None, eps)?))
}

/// Level-1 shuffle regularization polynomial.
pub fn reg_shuffle(k: &MultiIndex, eps: f64) -> Result<RegPolyReal> {
    Ok(real_part_poly(reg_shuffle_colored(k, None, eps)?))
}

/// ζ_(0,M)(k), exact. The T-substitution partner is ζ_(0,M)(1).
pub fn truncated_zeta(k: &MultiIndex, m: u64) -> Result<Frac> {
    if m < 1 {
        return Err(Error::Parameter("M must be >= 1".into()));
    }
    let iv = if m == 1 {
        // empty summation range
        return Ok(if k.is_empty() { Frac::one() } else { Frac::zero() });
    } else {
        IntervalSpec::open(0, m as i64)?
    };
    match hurwitz::eval_finite(k, &iv, &Frac::zero(), false, None)? {
        ExactValue::Rat(f) => Ok(f),
        ExactValue::Cplx(_) => Err(Error::Internal("uncolored sum came back complex".into())),
    }
}

/// ζ_(0,M)(k) in certified floating point, for large M.
pub fn truncated_zeta_float(k: &MultiIndex, m: u64) -> BoundedReal {
    hurwitz::window_sum_field::<BoundedReal>(k.parts(), 1, m as i64 - 1, false, &|_, _| None)
}

/// Window value at s = 0 with possibly infinite ends, as a certified
/// complex number. Finite windows evaluate exactly; semi-infinite tails
/// reduce to convergent MZVs through the truncation identity and
/// reflection.
pub fn window_value_num(
    k: &MultiIndex,
    colors: Option<&ColorVector>,
    m1: Bound,
    m2: Bound,
) -> Result<BoundedComplex> {
    if k.is_empty() {
        return Ok(BoundedComplex::one());
    }
    match (m1, m2) {
        (Bound::Finite(a), Bound::Finite(b)) => {
            if a >= b {
                return Ok(BoundedComplex::zero());
            }
            let iv = IntervalSpec::open(a, b)?;
            Ok(hurwitz::eval_finite(k, &iv, &Frac::zero(), false, colors)?.to_complex())
        }
        (Bound::Finite(a), Bound::PosInf) => {
            if a < 0 {
                return Err(Error::Precondition(
                    "window (a, inf) needs a >= 0 to avoid the pole at 0".into(),
                ));
            }
            admissibility(k, colors)?;
            if a == 0 {
                return li_cplx(k, colors);
            }
            // truncation: Li_(a,inf)(k) = Σ_j (−1)^j Li*_(0,a](rev prefix)·Li(suffix)
            let head = IntervalSpec::half_open(0, a)?;
            let r = k.depth();
            let mut acc = BoundedComplex::zero();
            for j in 0..=r {
                let pre_rev = k.prefix(j).reversed();
                let suf = k.suffix_after(j);
                let (cpre, csuf) = match colors {
                    Some(c) => (Some(c.prefix(j).reversed()), Some(c.suffix_after(j))),
                    None => (None, None),
                };
                let a_v = hurwitz::eval_finite(&pre_rev, &head, &Frac::zero(), true, cpre.as_ref())?
                    .to_complex();
                let b_v = li_cplx(&suf, csuf.as_ref())?;
                let term = a_v.mul(&b_v);
                acc = if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            Ok(acc)
        }
        (Bound::NegInf, Bound::Finite(b)) => {
            // reflect onto (−b, +inf)
            if b > 0 {
                return Err(Error::Precondition(
                    "window (-inf, b) needs b <= 0 to avoid the pole at 0".into(),
                ));
            }
            let rc = colors.map(|c| c.reversed().inverted());
            let v = window_value_num(&k.reversed(), rc.as_ref(), Bound::Finite(-b), Bound::PosInf)?;
            if k.weight() % 2 == 1 {
                Ok(v.neg())
            } else {
                Ok(v)
            }
        }
        _ => Err(Error::InfiniteInterval("doubly infinite window".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts::pi;

    fn mi(t: &str) -> MultiIndex {
        MultiIndex::parse(t).unwrap()
    }

    #[test]
    fn zeta_two_three_and_euler() {
        let z2 = zeta(&mi("2"), 1e-12).unwrap();
        let pi2_6 = pi().mul(&pi()).scale_frac(&Frac::from_ratio(1, 6).unwrap());
        assert!(z2.sub(&pi2_6).consistent_with_zero());
        assert!(z2.err_f64() < 1e-40);

        let z3 = zeta(&mi("3"), 1e-12).unwrap();
        assert!((z3.to_f64() - 1.2020569031595942854).abs() < 1e-15);

        // Euler: ζ(1,2) = ζ(3), two independent code paths
        let z12 = zeta(&mi("1,2"), 1e-12).unwrap();
        assert!(z12.sub(&z3).consistent_with_zero());

        // stuffle: ζ(2,2) = (ζ(2)² − ζ(4))/2
        let z22 = zeta(&mi("2,2"), 1e-12).unwrap();
        let z4 = zeta(&mi("4"), 1e-12).unwrap();
        let rhs = z2
            .mul(&z2)
            .sub(&z4)
            .scale_frac(&Frac::from_ratio(1, 2).unwrap());
        assert!(z22.sub(&rhs).consistent_with_zero());
    }

    #[test]
    fn star_values() {
        let s22 = zeta_star(&mi("2,2"), 1e-12).unwrap();
        let z22 = zeta(&mi("2,2"), 1e-12).unwrap();
        let z4 = zeta(&mi("4"), 1e-12).unwrap();
        assert!(s22.sub(&z22.add(&z4)).consistent_with_zero());

        let sq = zeta_star(&mi("5"), 1e-12).unwrap();
        let zq = zeta(&mi("5"), 1e-12).unwrap();
        assert!(sq.sub(&zq).consistent_with_zero());

        let s12 = zeta_star(&mi("1,2"), 1e-12).unwrap();
        let z12 = zeta(&mi("1,2"), 1e-12).unwrap();
        let z3 = zeta(&mi("3"), 1e-12).unwrap();
        assert!(s12.sub(&z12.add(&z3)).consistent_with_zero());
    }

    #[test]
    fn alternating_values() {
        let l1 = colored_li(&mi("1"), &ColorVector::parse("1@2").unwrap(), 1e-10).unwrap();
        assert!((l1.re.to_f64() + std::f64::consts::LN_2).abs() < 1e-20);
        assert!(l1.im.consistent_with_zero());

        let l2 = colored_li(&mi("2"), &ColorVector::parse("1@2").unwrap(), 1e-10).unwrap();
        let target = pi()
            .mul(&pi())
            .scale_frac(&Frac::from_ratio(-1, 12).unwrap());
        assert!(l2.re.sub(&target).consistent_with_zero());

        // N=1 colors reduce to the plain zeta
        let n1 = colored_li(&mi("2"), &ColorVector::parse("0@1").unwrap(), 1e-12).unwrap();
        let z2 = zeta(&mi("2"), 1e-12).unwrap();
        assert!(n1.re.sub(&z2).consistent_with_zero());

        assert!(matches!(
            alt_zeta(0, 1e-12),
            Ok(v) if v.to_f64() == 0.5
        ));
        let a1 = alt_zeta(1, 1e-12).unwrap();
        assert!((a1.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let a2 = alt_zeta(2, 1e-12).unwrap();
        let pi2_12 = pi().mul(&pi()).scale_frac(&Frac::from_ratio(1, 12).unwrap());
        assert!(a2.sub(&pi2_12).consistent_with_zero());
    }

    #[test]
    fn conditionally_convergent_colored_depth2() {
        // Li(1,1;−1,−1) against a direct partial sum with alternating tail
        let colors = ColorVector::parse("1,1@2").unwrap();
        let v = colored_li(&mi("1,1"), &colors, 1e-10).unwrap();
        let mut direct = 0.0f64;
        let mut inner = 0.0f64;
        let nmax = 2_000_001i64;
        let mut tail_probe = 0.0;
        for n in 1..nmax {
            if n > 1 {
                inner += f64::powi(-1.0, (n - 1) as i32) / (n - 1) as f64;
            }
            let t = f64::powi(-1.0, n as i32) / n as f64 * inner;
            direct += t;
            tail_probe = t.abs();
        }
        assert!(
            (v.re.to_f64() - direct).abs() < 50.0 * tail_probe,
            "split {} vs direct {}",
            v.re.to_f64(),
            direct
        );
        assert!(v.im.consistent_with_zero());
    }

    #[test]
    fn colored_level4_against_partial_sums() {
        // Li(3; i): fast absolute convergence, partial sum to 1e-7
        let colors = ColorVector::parse("1@4").unwrap();
        let v = colored_li(&mi("3"), &colors, 1e-10).unwrap();
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for n in 1..3000i64 {
            let ph = match n.rem_euclid(4) {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            let w = (n as f64).powi(3);
            re += ph.0 / w;
            im += ph.1 / w;
        }
        assert!((v.re.to_f64() - re).abs() < 1e-6);
        assert!((v.im.to_f64() - im).abs() < 1e-6);
    }

    #[test]
    fn admissibility_and_eps_guards() {
        assert!(matches!(
            zeta(&mi("2,1"), 1e-12),
            Err(Error::NotAdmissible(_))
        ));
        assert!(matches!(zeta(&mi("2"), 1e-16), Err(Error::Precision(_))));
        let bad = ColorVector::parse("0@2").unwrap();
        assert!(matches!(
            colored_li(&mi("1"), &bad, 1e-10),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn regularization_polynomials() {
        // ζ_*^T(1) = T
        let p = reg_stuffle(&mi("1"), 1e-12).unwrap();
        assert_eq!(p.degree(), 1);
        assert!(p.coeff(0).consistent_with_zero());
        assert!(p.coeff(1).sub(&BoundedReal::one()).consistent_with_zero());

        // ζ_*^T(1,1) = (T² − ζ(2))/2
        let p = reg_stuffle(&mi("1,1"), 1e-12).unwrap();
        let z2 = zeta(&mi("2"), 1e-12).unwrap();
        assert!(p
            .coeff(0)
            .add(&z2.scale_frac(&Frac::from_ratio(1, 2).unwrap()))
            .consistent_with_zero());
        assert!(p.coeff(1).consistent_with_zero());
        assert!((p.coeff(2).to_f64() - 0.5).abs() < 1e-30);

        // ζ_*^T(2,1) = ζ(2)T − ζ(1,2) − ζ(3)
        let p = reg_stuffle(&mi("2,1"), 1e-12).unwrap();
        let z12 = zeta(&mi("1,2"), 1e-12).unwrap();
        let z3 = zeta(&mi("3"), 1e-12).unwrap();
        assert!(p.coeff(0).add(&z12.add(&z3)).consistent_with_zero());
        assert!(p.coeff(1).sub(&z2).consistent_with_zero());

        // ζ_ш^T(1) = T, ζ_ш^T(1,1) = T²/2, ζ_ш^T(2,1) = ζ(2)T − 2ζ(1,2)
        let p = reg_shuffle(&mi("1"), 1e-12).unwrap();
        assert!(p.coeff(1).sub(&BoundedReal::one()).consistent_with_zero());
        let p = reg_shuffle(&mi("1,1"), 1e-12).unwrap();
        assert!(p.coeff(0).consistent_with_zero());
        assert!((p.coeff(2).to_f64() - 0.5).abs() < 1e-30);
        let p = reg_shuffle(&mi("2,1"), 1e-12).unwrap();
        assert!(p
            .coeff(0)
            .add(&z12.mul_i64(2))
            .consistent_with_zero());
        assert!(p.coeff(1).sub(&z2).consistent_with_zero());

        // admissible index: degree 0, constant = ζ(k), both kinds agree
        let ps = reg_stuffle(&mi("3"), 1e-12).unwrap();
        let pw = reg_shuffle(&mi("3"), 1e-12).unwrap();
        assert_eq!(ps.degree(), 0);
        assert!(ps
            .constant_term()
            .sub(&pw.constant_term())
            .consistent_with_zero());
    }

    #[test]
    fn truncated_values() {
        assert_eq!(
            truncated_zeta(&mi("1,2"), 4).unwrap(),
            Frac::from_ratio(5, 12).unwrap()
        );
        assert_eq!(truncated_zeta(&mi("1"), 2).unwrap(), Frac::one());
        assert_eq!(truncated_zeta(&mi("2,1"), 1).unwrap(), Frac::zero());
        let f = truncated_zeta_float(&mi("1,2"), 4);
        assert!((f.to_f64() - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn window_values_with_infinite_ends() {
        // ζ_(2,inf)(2) = ζ(2) − 1 − 1/4
        let v = window_value_num(&mi("2"), None, Bound::Finite(2), Bound::PosInf).unwrap();
        let z2 = zeta(&mi("2"), 1e-12).unwrap();
        let expect = z2.sub(&BoundedReal::from_frac(&Frac::from_ratio(5, 4).unwrap()));
        assert!(v.re.sub(&expect).consistent_with_zero());

        // reflection side: ζ_(-inf,0)(2) = ζ(2)
        let v = window_value_num(&mi("2"), None, Bound::NegInf, Bound::Finite(0)).unwrap();
        assert!(v.re.sub(&z2).consistent_with_zero());

        // finite fallback matches eval_finite
        let v = window_value_num(&mi("1,2"), None, Bound::Finite(0), Bound::Finite(4)).unwrap();
        assert!((v.re.to_f64() - 5.0 / 12.0).abs() < 1e-15);
    }
}
