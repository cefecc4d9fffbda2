//! Finite multiple Hurwitz zeta values over integer windows, exact in
//! rational arithmetic for color levels 1 and 2 and certified complex
//! otherwise, plus executable forms of the six window identities
//! (translation, decomposition, reflection, antipode, truncation,
//! expansion).
//!
//! The sum evaluated here is Σ x₁^{n₁}⋯x_r^{n_r} / ((n₁+s)^{k₁}⋯(n_r+s)^{k_r})
//! over m₁ < n₁ < ⋯ < n_r < m₂, with ≤ replacing < under the star flag and
//! the right end per the half-open flag. One kernel serves all variants so
//! identities that mix them share a single code path.

use crate::bounded::{BoundedComplex, NumField};
use crate::consts::root_of_unity;
use crate::error::{Error, Result};
use crate::exact::{binom_neg, ExactValue, Frac};
use crate::indices::{ColorVector, MultiIndex};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

/// One endpoint of a summation window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => write!(f, "inf"),
        }
    }
}

/// Summation window (m₁,m₂) or (m₁,m₂], m₁ < m₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    pub m1: Bound,
    pub m2: Bound,
    pub right_closed: bool,
}

impl IntervalSpec {
    pub fn new(m1: Bound, m2: Bound, right_closed: bool) -> Result<Self> {
        let ok = match (m1, m2) {
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
            (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, Bound::PosInf) => false,
            (Bound::PosInf, _) | (_, Bound::NegInf) => false,
            _ => true,
        };
        if !ok {
            return Err(Error::Parameter(format!(
                "interval requires m1 < m2, got ({m1},{m2})"
            )));
        }
        if right_closed && m2 == Bound::PosInf {
            return Err(Error::Parameter("(m1, +inf] is not a window".into()));
        }
        Ok(IntervalSpec {
            m1,
            m2,
            right_closed,
        })
    }

    pub fn open(m1: i64, m2: i64) -> Result<Self> {
        Self::new(Bound::Finite(m1), Bound::Finite(m2), false)
    }

    pub fn half_open(m1: i64, m2: i64) -> Result<Self> {
        Self::new(Bound::Finite(m1), Bound::Finite(m2), true)
    }

    pub fn is_finite(&self) -> bool {
        matches!((self.m1, self.m2), (Bound::Finite(_), Bound::Finite(_)))
    }

    /// Inclusive integer range of summands, when finite.
    pub fn summands(&self) -> Result<(i64, i64)> {
        match (self.m1, self.m2) {
            (Bound::Finite(a), Bound::Finite(b)) => {
                let hi = if self.right_closed { b } else { b - 1 };
                Ok((a + 1, hi))
            }
            _ => Err(Error::InfiniteInterval(self.to_string())),
        }
    }

    pub fn translate(&self, n: i64) -> Result<Self> {
        let sh = |b: Bound| match b {
            Bound::Finite(v) => Bound::Finite(v + n),
            other => other,
        };
        IntervalSpec::new(sh(self.m1), sh(self.m2), self.right_closed)
    }

    /// "(m1,m2)" or "(m1,m2]", with "inf"/"-inf" allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let bytes = t.as_bytes();
        if bytes.len() < 5 || bytes[0] != b'(' {
            return Err(Error::Parse {
                pos: 0,
                msg: "interval must look like (m1,m2) or (m1,m2]".into(),
            });
        }
        let right_closed = match bytes[bytes.len() - 1] {
            b')' => false,
            b']' => true,
            _ => {
                return Err(Error::Parse {
                    pos: t.len() - 1,
                    msg: "interval must end with ) or ]".into(),
                })
            }
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = inner.split_once(',').ok_or(Error::Parse {
            pos: 1,
            msg: "interval needs two comma-separated endpoints".into(),
        })?;
        let parse_bound = |tok: &str| -> Result<Bound> {
            match tok.trim() {
                "inf" | "+inf" => Ok(Bound::PosInf),
                "-inf" => Ok(Bound::NegInf),
                v => v
                    .parse::<i64>()
                    .map(Bound::Finite)
                    .map_err(|_| Error::Parse {
                        pos: 0,
                        msg: format!("bad endpoint {v:?}"),
                    }),
            }
        };
        IntervalSpec::new(parse_bound(a)?, parse_bound(b)?, right_closed)
    }
}

impl fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}{}",
            self.m1,
            self.m2,
            if self.right_closed { "]" } else { ")" }
        )
    }
}

fn check_colors(k: &MultiIndex, colors: Option<&ColorVector>) -> Result<()> {
    if let Some(c) = colors {
        if c.len() != k.depth() {
            return Err(Error::Parameter(format!(
                "color vector {c} does not match depth {}",
                k.depth()
            )));
        }
    }
    Ok(())
}

/// Detect a pole: some summand n in [lo, hi] has n + s = 0.
fn pole_check(lo: i64, hi: i64, s: &Frac, depth: usize) -> Result<()> {
    if depth == 0 || lo > hi {
        return Ok(());
    }
    let red = s.reduced();
    if red.denom().is_one() {
        let neg: BigInt = -red.numer().clone();
        if neg >= BigInt::from(lo) && neg <= BigInt::from(hi) {
            let n = i64::try_from(&neg).map_err(|_| Error::Internal("pole index".into()))?;
            return Err(Error::PoleHit {
                n,
                s: red.to_string(),
            });
        }
    }
    Ok(())
}

/// Exact DP over the window for levels 1 and 2: colors contribute a sign
/// (−1)^{a·n} per slot.
fn window_sum_rat(
    parts: &[u32],
    signs: Option<&[u32]>,
    lo: i64,
    hi: i64,
    star: bool,
    s: &Frac,
) -> Result<Frac> {
    let r = parts.len();
    if r == 0 {
        return Ok(Frac::one());
    }
    if lo > hi {
        return Ok(Frac::zero());
    }
    pole_check(lo, hi, s, r)?;
    // pref[j] = sum over tuples of the first j slots with n_j at or below
    // the scan position.
    let mut pref: Vec<Frac> = vec![Frac::zero(); r + 1];
    pref[0] = Frac::one();
    let mut adds: Vec<Frac> = vec![Frac::zero(); r + 1];
    for n in lo..=hi {
        let base = {
            let num = BigInt::from(n) * s.denom() + s.numer();
            Frac::new(num, s.denom().clone())?
        };
        if star {
            for j in 1..=r {
                let mut f = base.pow(parts[j - 1]).recip()?;
                if signs.is_some_and(|sg| sg[j - 1] == 1 && n.rem_euclid(2) == 1) {
                    f = -&f;
                }
                let add = &f * &pref[j - 1];
                pref[j] = &pref[j] + &add;
            }
        } else {
            for j in 1..=r {
                let mut f = base.pow(parts[j - 1]).recip()?;
                if signs.is_some_and(|sg| sg[j - 1] == 1 && n.rem_euclid(2) == 1) {
                    f = -&f;
                }
                adds[j] = &f * &pref[j - 1];
            }
            for j in 1..=r {
                pref[j] = &pref[j] + &adds[j];
            }
        }
    }
    Ok(pref.pop().unwrap())
}

/// Certified DP over the window in an arbitrary scalar field; `weight`
/// supplies the color factor x_j^n for slot j at summand n.
pub(crate) fn window_sum_field<F: NumField>(
    parts: &[u32],
    lo: i64,
    hi: i64,
    star: bool,
    weight: &dyn Fn(usize, i64) -> Option<F>,
) -> F {
    let r = parts.len();
    if r == 0 {
        return F::one();
    }
    if lo > hi {
        return F::zero();
    }
    let mut pref: Vec<F> = (0..=r).map(|_| F::zero()).collect();
    pref[0] = F::one();
    let mut adds: Vec<F> = (0..=r).map(|_| F::zero()).collect();
    for n in lo..=hi {
        if star {
            for j in 1..=r {
                let mut f = F::recip_ipow(n, parts[j - 1]);
                if let Some(w) = weight(j - 1, n) {
                    f = f.mul(&w);
                }
                pref[j] = pref[j].add(&f.mul(&pref[j - 1]));
            }
        } else {
            for j in 1..=r {
                let mut f = F::recip_ipow(n, parts[j - 1]);
                if let Some(w) = weight(j - 1, n) {
                    f = f.mul(&w);
                }
                adds[j] = f.mul(&pref[j - 1]);
            }
            for j in 1..=r {
                pref[j] = pref[j].add(&adds[j]);
            }
        }
    }
    pref.pop().unwrap()
}

/// Complex DP used for color levels ≥ 3 (shift folded in exactly).
fn window_sum_cplx(
    parts: &[u32],
    colors: &ColorVector,
    lo: i64,
    hi: i64,
    star: bool,
    s: &Frac,
) -> Result<BoundedComplex> {
    let r = parts.len();
    if r == 0 {
        return Ok(BoundedComplex::one());
    }
    if lo > hi {
        return Ok(BoundedComplex::zero());
    }
    pole_check(lo, hi, s, r)?;
    let level = colors.level();
    let roots: Vec<BoundedComplex> = (0..level).map(|a| root_of_unity(a, level)).collect();
    let mut pref: Vec<BoundedComplex> = (0..=r).map(|_| BoundedComplex::zero()).collect();
    pref[0] = BoundedComplex::one();
    let mut adds: Vec<BoundedComplex> = (0..=r).map(|_| BoundedComplex::zero()).collect();
    for n in lo..=hi {
        let base = {
            let num = BigInt::from(n) * s.denom() + s.numer();
            Frac::new(num, s.denom().clone())?
        };
        let mut factors: Vec<BoundedComplex> = Vec::with_capacity(r);
        for j in 0..r {
            let rec = BoundedComplex::from_frac(&base.pow(parts[j]).recip()?);
            let a = colors.exps()[j];
            let residue = (a as i64 * n).rem_euclid(level as i64) as u32;
            factors.push(rec.mul(&roots[residue as usize]));
        }
        if star {
            for j in 1..=r {
                pref[j] = pref[j].add(&factors[j - 1].mul(&pref[j - 1]));
            }
        } else {
            for j in 1..=r {
                adds[j] = factors[j - 1].mul(&pref[j - 1]);
            }
            for j in 1..=r {
                pref[j] = pref[j].add(&adds[j]);
            }
        }
    }
    Ok(pref.pop().unwrap())
}

/// ζ or Li over a finite window, exact where the color level permits.
/// Empty summation range gives 0; the empty index gives 1.
pub fn eval_finite(
    k: &MultiIndex,
    iv: &IntervalSpec,
    s: &Frac,
    star: bool,
    colors: Option<&ColorVector>,
) -> Result<ExactValue> {
    check_colors(k, colors)?;
    if k.is_empty() {
        return Ok(ExactValue::one());
    }
    let (lo, hi) = iv.summands()?;
    match colors {
        None => Ok(ExactValue::Rat(window_sum_rat(
            k.parts(),
            None,
            lo,
            hi,
            star,
            s,
        )?)),
        Some(c) if c.level() <= 2 => Ok(ExactValue::Rat(window_sum_rat(
            k.parts(),
            Some(c.exps()),
            lo,
            hi,
            star,
            s,
        )?)),
        Some(c) => Ok(ExactValue::Cplx(window_sum_cplx(
            k.parts(),
            c,
            lo,
            hi,
            star,
            s,
        )?)),
    }
}

/// (μ₁⋯μ_r)^e as an exact value.
pub fn color_power(colors: Option<&ColorVector>, e: i64) -> ExactValue {
    match colors {
        None => ExactValue::one(),
        Some(c) => {
            let level = c.level();
            let p = c.product_residue();
            let residue = (p as i64 * e).rem_euclid(level as i64) as u32;
            if level <= 2 {
                if residue == 1 {
                    ExactValue::Rat(Frac::from_int(-1))
                } else {
                    ExactValue::one()
                }
            } else {
                ExactValue::Cplx(root_of_unity(residue, level))
            }
        }
    }
}

/// Translation residual: ζ_(m₁,m₂)(k;s) − (x₁⋯x_r)^{−n}·ζ_(m₁+n,m₂+n)(k;s−n).
pub fn check_translation(
    k: &MultiIndex,
    iv: &IntervalSpec,
    s: &Frac,
    n: i64,
    colors: Option<&ColorVector>,
) -> Result<ExactValue> {
    let lhs = eval_finite(k, iv, s, false, colors)?;
    let shifted = eval_finite(k, &iv.translate(n)?, &(s - &Frac::from_int(n)), false, colors)?;
    let rhs = color_power(colors, -n).mul(&shifted);
    Ok(lhs.sub(&rhs))
}

/// Decomposition residuals for both printed forms: the (m₁,n] split and the
/// (m₁,n)-plus-pinned-n_j split. Exact zeros expected.
pub fn check_decomposition(
    k: &MultiIndex,
    iv: &IntervalSpec,
    s: &Frac,
    n: i64,
    colors: Option<&ColorVector>,
) -> Result<[ExactValue; 2]> {
    let (m1, m2) = match (iv.m1.finite(), iv.m2.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InfiniteInterval(iv.to_string())),
    };
    if iv.right_closed {
        return Err(Error::Precondition(
            "decomposition is stated for open windows".into(),
        ));
    }
    if !(m1 < n && n < m2) {
        return Err(Error::Precondition(format!(
            "need m1 < n < m2, got {m1} < {n} < {m2}"
        )));
    }
    check_colors(k, colors)?;
    let r = k.depth();
    let lhs = eval_finite(k, iv, s, false, colors)?;

    let left_closed = IntervalSpec::half_open(m1, n)?;
    let left_open = if m1 < n {
        IntervalSpec::open(m1, n).ok()
    } else {
        None
    };
    let right = IntervalSpec::open(n, m2)?;

    let mut form1 = ExactValue::zero();
    let mut form2 = ExactValue::zero();
    for j in 0..=r {
        let pre = k.prefix(j);
        let suf = k.suffix_after(j);
        let (cpre, csuf) = match colors {
            Some(c) => (Some(c.prefix(j)), Some(c.suffix_after(j))),
            None => (None, None),
        };
        let right_v = eval_finite(&suf, &right, s, false, csuf.as_ref())?;
        let a = eval_finite(&pre, &left_closed, s, false, cpre.as_ref())?;
        form1 = form1.add(&a.mul(&right_v));
        let b = match &left_open {
            Some(lo_iv) => eval_finite(&pre, lo_iv, s, false, cpre.as_ref())?,
            None => unreachable!("m1 < n is a precondition"),
        };
        form2 = form2.add(&b.mul(&right_v));
    }
    // pinned n_j = n terms of the second form
    let sn = &Frac::from_int(n) + s;
    if sn.is_zero() {
        return Err(Error::PoleHit {
            n,
            s: s.reduced().to_string(),
        });
    }
    for j in 1..=r {
        let pre = k.prefix(j - 1);
        let suf = k.suffix_after(j);
        let (cpre, csuf) = match colors {
            Some(c) => (Some(c.prefix(j - 1)), Some(c.suffix_after(j))),
            None => (None, None),
        };
        let a = eval_finite(&pre, left_open.as_ref().unwrap(), s, false, cpre.as_ref())?;
        let b = eval_finite(&suf, &right, s, false, csuf.as_ref())?;
        let mut pin = ExactValue::Rat(sn.pow(k.parts()[j - 1]).recip()?);
        if let Some(c) = colors {
            // x_j^n factor on the pinned slot
            let single = ColorVector::new(c.level(), vec![c.exps()[j - 1]]).unwrap();
            pin = pin.mul(&color_power(Some(&single), n));
        }
        form2 = form2.add(&pin.mul(&a).mul(&b));
    }
    Ok([lhs.sub(&form1), lhs.sub(&form2)])
}

/// Reflection residual:
/// ζ_(m₁,m₂)(k;s) − (−1)^{|k|} ζ_(−m₂,−m₁)(reverse k;−s), colors reversed
/// and inverted.
pub fn check_reflection(
    k: &MultiIndex,
    iv: &IntervalSpec,
    s: &Frac,
    colors: Option<&ColorVector>,
) -> Result<ExactValue> {
    let (m1, m2) = match (iv.m1.finite(), iv.m2.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InfiniteInterval(iv.to_string())),
    };
    if iv.right_closed {
        return Err(Error::Precondition(
            "reflection is stated for open windows".into(),
        ));
    }
    let lhs = eval_finite(k, iv, s, false, colors)?;
    let refl = IntervalSpec::open(-m2, -m1)?;
    let rc = colors.map(|c| c.reversed().inverted());
    let rhs = eval_finite(&k.reversed(), &refl, &(-s), false, rc.as_ref())?;
    let sign = if k.weight() % 2 == 1 {
        Frac::from_int(-1)
    } else {
        Frac::one()
    };
    Ok(lhs.sub(&rhs.scale(&sign)))
}

/// Antipode residual:
/// Σ_j (−1)^j ζ*_(m₁,m₂)(k_j,…,k₁;s)·ζ_(m₁,m₂)(k_{j+1},…,k_r;s).
pub fn check_antipode(
    k: &MultiIndex,
    iv: &IntervalSpec,
    s: &Frac,
    colors: Option<&ColorVector>,
) -> Result<ExactValue> {
    check_colors(k, colors)?;
    let r = k.depth();
    let mut acc = ExactValue::zero();
    for j in 0..=r {
        let pre_rev = k.prefix(j).reversed();
        let suf = k.suffix_after(j);
        let (cpre, csuf) = match colors {
            Some(c) => (Some(c.prefix(j).reversed()), Some(c.suffix_after(j))),
            None => (None, None),
        };
        let star = eval_finite(&pre_rev, iv, s, true, cpre.as_ref())?;
        let plain = eval_finite(&suf, iv, s, false, csuf.as_ref())?;
        let term = star.mul(&plain);
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// Truncation residual for 0 < m₁ < m₂:
/// ζ_(m₁,m₂)(k;s) − Σ_j (−1)^j ζ*_(0,m₁](k_j,…,k₁;s)·ζ_(0,m₂)(k_{j+1},…;s).
pub fn check_truncation(
    k: &MultiIndex,
    m1: i64,
    m2: i64,
    s: &Frac,
    colors: Option<&ColorVector>,
) -> Result<ExactValue> {
    if !(0 < m1 && m1 < m2) {
        return Err(Error::Precondition(format!(
            "need 0 < m1 < m2, got {m1}, {m2}"
        )));
    }
    check_colors(k, colors)?;
    let lhs = eval_finite(k, &IntervalSpec::open(m1, m2)?, s, false, colors)?;
    let head = IntervalSpec::half_open(0, m1)?;
    let tail = IntervalSpec::open(0, m2)?;
    let r = k.depth();
    let mut rhs = ExactValue::zero();
    for j in 0..=r {
        let pre_rev = k.prefix(j).reversed();
        let suf = k.suffix_after(j);
        let (cpre, csuf) = match colors {
            Some(c) => (Some(c.prefix(j).reversed()), Some(c.suffix_after(j))),
            None => (None, None),
        };
        let a = eval_finite(&pre_rev, &head, s, true, cpre.as_ref())?;
        let b = eval_finite(&suf, &tail, s, false, csuf.as_ref())?;
        let term = a.mul(&b);
        rhs = if j % 2 == 0 {
            rhs.add(&term)
        } else {
            rhs.sub(&term)
        };
    }
    Ok(lhs.sub(&rhs))
}

/// All compositions of m into r nonnegative parts, in lexicographic order.
pub fn compositions(m: u32, r: usize) -> Vec<Vec<u32>> {
    fn rec(m: u32, r: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 0 {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if r == 1 {
            cur.push(m);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=m {
            cur.push(v);
            rec(m - v, r - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, r, &mut Vec::new(), &mut out);
    out
}

/// Π binom(−k_l, n_l) over a composition, exact.
pub fn binom_product(k: &MultiIndex, comp: &[u32]) -> Frac {
    let mut v = BigInt::one();
    for (&kl, &nl) in k.parts().iter().zip(comp) {
        v *= binom_neg(kl, nl);
    }
    Frac::from_bigint(v)
}

/// Expansion coefficients: coefficient of s^m is
/// Σ_{|n|=m} Π binom(−k_l,n_l)·ζ_(m₁,m₂)(k+n). Requires a window that does
/// not straddle 0.
pub fn expansion_coeffs(
    k: &MultiIndex,
    iv: &IntervalSpec,
    max_order: u32,
    colors: Option<&ColorVector>,
) -> Result<Vec<ExactValue>> {
    let (m1, m2) = match (iv.m1.finite(), iv.m2.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InfiniteInterval(iv.to_string())),
    };
    if !(m2 <= 0 || m1 >= 0) {
        return Err(Error::Precondition(format!(
            "expansion needs m1 < m2 <= 0 or 0 <= m1 < m2, got ({m1},{m2})"
        )));
    }
    check_colors(k, colors)?;
    let r = k.depth();
    let mut out = Vec::with_capacity(max_order as usize + 1);
    for m in 0..=max_order {
        let mut acc = ExactValue::zero();
        for comp in compositions(m, r) {
            let c = binom_product(k, &comp);
            let v = eval_finite(&k.add_composition(&comp), iv, &Frac::zero(), false, colors)?;
            acc = acc.add(&v.scale(&c));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Independent oracle for the expansion coefficients: per-summand series
/// multiplication through the window DP, never enumerating compositions.
/// Levels 1 and 2 only.
pub fn expansion_coeffs_direct(
    k: &MultiIndex,
    iv: &IntervalSpec,
    max_order: u32,
    colors: Option<&ColorVector>,
) -> Result<Vec<Frac>> {
    let (m1, m2) = match (iv.m1.finite(), iv.m2.finite()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InfiniteInterval(iv.to_string())),
    };
    if !(m2 <= 0 || m1 >= 0) {
        return Err(Error::Precondition("window straddles 0".into()));
    }
    check_colors(k, colors)?;
    if colors.is_some_and(|c| c.level() > 2) {
        return Err(Error::Precondition(
            "direct expansion oracle is exact-only (level <= 2)".into(),
        ));
    }
    let r = k.depth();
    let mm = max_order as usize;
    let zero_poly = || vec![Frac::zero(); mm + 1];
    if r == 0 {
        let mut p = zero_poly();
        p[0] = Frac::one();
        return Ok(p);
    }
    let (lo, hi) = iv.summands()?;
    let mut pref: Vec<Vec<Frac>> = (0..=r).map(|_| zero_poly()).collect();
    pref[0][0] = Frac::one();
    let mut adds: Vec<Vec<Frac>> = (0..=r).map(|_| zero_poly()).collect();
    for n in lo..=hi {
        for j in 1..=r {
            // series of x^n/(n+s)^{k_j} at s=0: Σ_t binom(-k,t) s^t/n^{k+t}
            let kj = k.parts()[j - 1];
            let mut fac: Vec<Frac> = Vec::with_capacity(mm + 1);
            for t in 0..=mm {
                let mut c =
                    Frac::new(binom_neg(kj, t as u32), BigInt::from(n).pow(kj + t as u32))?;
                if colors.is_some_and(|cv| cv.exps()[j - 1] == 1 && n.rem_euclid(2) == 1) {
                    c = -&c;
                }
                fac.push(c);
            }
            for t in 0..=mm {
                let mut acc = Frac::zero();
                for u in 0..=t {
                    if !pref[j - 1][t - u].is_zero() {
                        acc = &acc + &(&fac[u] * &pref[j - 1][t - u]);
                    }
                }
                adds[j][t] = acc;
            }
        }
        for j in 1..=r {
            for t in 0..=mm {
                pref[j][t] = &pref[j][t] + &adds[j][t];
            }
        }
    }
    Ok(pref.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(text: &str) -> MultiIndex {
        MultiIndex::parse(text).unwrap()
    }

    fn fr(p: i64, q: i64) -> Frac {
        Frac::from_ratio(p, q).unwrap()
    }

    fn rat(v: &ExactValue) -> Frac {
        v.as_rat().unwrap().clone()
    }

    #[test]
    fn eval_examples() {
        let v = eval_finite(
            &mi("1,2"),
            &IntervalSpec::open(0, 4).unwrap(),
            &Frac::zero(),
            false,
            None,
        )
        .unwrap();
        assert_eq!(rat(&v), fr(5, 12));

        let v = eval_finite(
            &mi("1,1"),
            &IntervalSpec::half_open(0, 2).unwrap(),
            &Frac::zero(),
            true,
            None,
        )
        .unwrap();
        assert_eq!(rat(&v), fr(7, 4));

        let v = eval_finite(
            &mi("2"),
            &IntervalSpec::open(0, 3).unwrap(),
            &fr(1, 2),
            false,
            None,
        )
        .unwrap();
        assert_eq!(rat(&v), fr(136, 225));
    }

    #[test]
    fn empty_conventions() {
        let one = eval_finite(
            &MultiIndex::empty(),
            &IntervalSpec::open(5, 6).unwrap(),
            &Frac::zero(),
            false,
            None,
        )
        .unwrap();
        assert_eq!(rat(&one), Frac::one());
        let zero = eval_finite(
            &mi("2"),
            &IntervalSpec::open(0, 1).unwrap(),
            &Frac::zero(),
            false,
            None,
        )
        .unwrap();
        assert!(zero.is_exact_zero());
    }

    #[test]
    fn pole_detection() {
        let err = eval_finite(
            &mi("2"),
            &IntervalSpec::open(0, 3).unwrap(),
            &Frac::from_int(-1),
            false,
            None,
        );
        assert!(matches!(err, Err(Error::PoleHit { n: 1, .. })));
    }

    #[test]
    fn translation_zero() {
        for (k, iv, s, n) in [
            ("2", IntervalSpec::open(0, 3).unwrap(), fr(1, 2), 1i64),
            ("1,2", IntervalSpec::open(0, 4).unwrap(), Frac::zero(), -3),
            ("1", IntervalSpec::open(0, 2).unwrap(), fr(1, 5), 7),
        ] {
            let res = check_translation(&mi(k), &iv, &s, n, None).unwrap();
            assert!(res.is_exact_zero(), "translation failed for {k}");
        }
    }

    #[test]
    fn decomposition_zero_and_pole() {
        let res = check_decomposition(
            &mi("1,2"),
            &IntervalSpec::open(0, 5).unwrap(),
            &fr(1, 3),
            2,
            None,
        )
        .unwrap();
        assert!(res[0].is_exact_zero() && res[1].is_exact_zero());

        let res = check_decomposition(
            &mi("1,1,2"),
            &IntervalSpec::open(0, 6).unwrap(),
            &Frac::zero(),
            3,
            None,
        )
        .unwrap();
        assert!(res[0].is_exact_zero() && res[1].is_exact_zero());

        let err = check_decomposition(
            &mi("3"),
            &IntervalSpec::open(-2, 4).unwrap(),
            &Frac::zero(),
            0,
            None,
        );
        assert!(matches!(err, Err(Error::PoleHit { .. })));
    }

    #[test]
    fn reflection_zero() {
        for (k, iv, s) in [
            ("1", IntervalSpec::open(0, 3).unwrap(), fr(1, 4)),
            ("2,3", IntervalSpec::open(-5, 5).unwrap(), fr(1, 2)),
            ("1,2", IntervalSpec::open(0, 4).unwrap(), fr(1, 7)),
        ] {
            let res = check_reflection(&mi(k), &iv, &s, None).unwrap();
            assert!(res.is_exact_zero(), "reflection failed for {k}");
        }
    }

    #[test]
    fn antipode_zero_with_stated_terms() {
        // terms for k=(1,2), window (0,3), s=0: 1/4 − 15/8 + 13/8
        let iv = IntervalSpec::open(0, 3).unwrap();
        let z = eval_finite(&mi("1,2"), &iv, &Frac::zero(), false, None).unwrap();
        assert_eq!(rat(&z), fr(1, 4));
        let s1 = eval_finite(&mi("1"), &iv, &Frac::zero(), true, None).unwrap();
        let p1 = eval_finite(&mi("2"), &iv, &Frac::zero(), false, None).unwrap();
        assert_eq!(rat(&s1.mul(&p1)), fr(15, 8));
        let s2 = eval_finite(&mi("2,1"), &iv, &Frac::zero(), true, None).unwrap();
        assert_eq!(rat(&s2), fr(13, 8));

        assert!(check_antipode(&mi("1,2"), &iv, &Frac::zero(), None)
            .unwrap()
            .is_exact_zero());
        assert!(check_antipode(
            &mi("1"),
            &IntervalSpec::open(0, 9).unwrap(),
            &Frac::zero(),
            None
        )
        .unwrap()
        .is_exact_zero());
        assert!(check_antipode(
            &mi("2,2,2"),
            &IntervalSpec::open(0, 5).unwrap(),
            &fr(1, 2),
            None
        )
        .unwrap()
        .is_exact_zero());
    }

    #[test]
    fn truncation_zero() {
        assert!(check_truncation(&mi("1,2"), 2, 6, &Frac::zero(), None)
            .unwrap()
            .is_exact_zero());
        assert!(check_truncation(&mi("4"), 1, 3, &fr(1, 3), None)
            .unwrap()
            .is_exact_zero());
        assert!(check_truncation(&mi("1,1"), 3, 4, &Frac::zero(), None)
            .unwrap()
            .is_exact_zero());
        assert!(check_truncation(&mi("2"), 0, 3, &Frac::zero(), None).is_err());
    }

    #[test]
    fn expansion_coefficients() {
        let iv = IntervalSpec::open(0, 3).unwrap();
        let cs = expansion_coeffs(&mi("2"), &iv, 1, None).unwrap();
        assert_eq!(rat(&cs[0]), fr(5, 4));
        assert_eq!(rat(&cs[1]), fr(-9, 4));

        // route B agrees with route A
        let iv5 = IntervalSpec::open(0, 5).unwrap();
        let direct = expansion_coeffs_direct(&mi("1,2"), &iv5, 4, None).unwrap();
        let comp = expansion_coeffs(&mi("1,2"), &iv5, 4, None).unwrap();
        for (a, b) in direct.iter().zip(&comp) {
            assert_eq!(a, b.as_rat().unwrap());
        }

        assert!(expansion_coeffs(&mi("2"), &IntervalSpec::open(-2, 3).unwrap(), 1, None).is_err());
    }

    #[test]
    fn colored_level2_reduces_and_flips_signs() {
        let iv = IntervalSpec::open(0, 4).unwrap();
        let k = mi("1,2");
        let trivial = ColorVector::new(2, vec![0, 0]).unwrap();
        let a = eval_finite(&k, &iv, &Frac::zero(), false, Some(&trivial)).unwrap();
        assert_eq!(rat(&a), fr(5, 12));

        let level1 = ColorVector::new(1, vec![0, 0]).unwrap();
        let b = eval_finite(&k, &iv, &Frac::zero(), false, Some(&level1)).unwrap();
        assert_eq!(rat(&b), fr(5, 12));

        // alternating window sum: Σ_{0<n<4} (-1)^n/n = -1 + 1/2 - 1/3
        let alt = ColorVector::new(2, vec![1]).unwrap();
        let c = eval_finite(&mi("1"), &iv, &Frac::zero(), false, Some(&alt)).unwrap();
        assert_eq!(rat(&c), fr(-5, 6));
    }

    #[test]
    fn colored_identities_level2() {
        let k = mi("1,2");
        let colors = ColorVector::new(2, vec![1, 1]).unwrap();
        let iv = IntervalSpec::open(0, 5).unwrap();
        assert!(check_translation(&k, &iv, &fr(1, 3), 2, Some(&colors))
            .unwrap()
            .is_exact_zero());
        assert!(check_reflection(&k, &iv, &fr(1, 3), Some(&colors))
            .unwrap()
            .is_exact_zero());
        let d = check_decomposition(&k, &iv, &fr(1, 3), 2, Some(&colors)).unwrap();
        assert!(d[0].is_exact_zero() && d[1].is_exact_zero());
        assert!(check_antipode(&k, &iv, &fr(1, 3), Some(&colors))
            .unwrap()
            .is_exact_zero());
        assert!(check_truncation(&k, 2, 6, &fr(1, 3), Some(&colors))
            .unwrap()
            .is_exact_zero());
    }

    #[test]
    fn colored_identities_level4() {
        // complex branch: residuals are consistent with zero within bounds
        let k = mi("1,2");
        let colors = ColorVector::new(4, vec![1, 3]).unwrap();
        let iv = IntervalSpec::open(0, 5).unwrap();
        let t = check_translation(&k, &iv, &fr(1, 3), 2, Some(&colors)).unwrap();
        match t {
            ExactValue::Cplx(z) => assert!(z.abs_ub_f64() < 1e-50),
            _ => panic!("expected complex"),
        }
        let r = check_reflection(&k, &iv, &fr(1, 3), Some(&colors)).unwrap();
        assert!(r.to_complex().abs_ub_f64() < 1e-50);
        let d = check_decomposition(&k, &iv, &fr(1, 3), 2, Some(&colors)).unwrap();
        assert!(d[0].to_complex().abs_ub_f64() < 1e-50);
        assert!(d[1].to_complex().abs_ub_f64() < 1e-50);
    }

    #[test]
    fn interval_parsing() {
        let iv = IntervalSpec::parse("(0,4)").unwrap();
        assert_eq!(iv, IntervalSpec::open(0, 4).unwrap());
        let iv = IntervalSpec::parse("(-3,7]").unwrap();
        assert!(iv.right_closed);
        let iv = IntervalSpec::parse("(0,inf)").unwrap();
        assert_eq!(iv.m2, Bound::PosInf);
        assert!(IntervalSpec::parse("(4,1)").is_err());
        assert!(IntervalSpec::parse("(1,inf]").is_err());
    }
}
