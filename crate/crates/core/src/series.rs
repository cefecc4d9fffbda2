//! Taylor and Laurent expansions of finite multiple Hurwitz zeta values at
//! integer centers, the cot/csc kernel expansions, the 1/s^q re-expansion,
//! and residue assembly for the contour-integral identities.
//!
//! Residues are read off symbolically from truncated Laurent products in
//! (s−n): three series are multiplied exactly and one coefficient is taken,
//! so no numeric differentiation enters anywhere.

use crate::bounded::BoundedReal;
use crate::consts::{alt_zeta_even, sin_cos_pi_frac, zeta_even};
use crate::error::{Error, Result};
use crate::exact::{binom_neg, ExactValue, Frac};
use crate::hurwitz::{binom_product, compositions, Bound, IntervalSpec};
use crate::indices::{ColorVector, MultiIndex};
use crate::numeric::window_value_num;
use std::collections::BTreeMap;

/// Is the center strictly inside the pole strip (−m₂, −m₁)?
fn center_in_strip(iv: &IntervalSpec, n: i64) -> bool {
    let above = match iv.m2 {
        Bound::PosInf => true,
        Bound::Finite(b) => n > -b,
        Bound::NegInf => false,
    };
    let below = match iv.m1 {
        Bound::NegInf => true,
        Bound::Finite(a) => n < -a,
        Bound::PosInf => false,
    };
    above && below
}

fn shift_bound(b: Bound, n: i64) -> Bound {
    match b {
        Bound::Finite(v) => Bound::Finite(v + n),
        other => other,
    }
}

/// Window value at s = 0: exact for finite windows, certified complex for
/// semi-infinite ones.
fn window_value(
    k: &MultiIndex,
    colors: Option<&ColorVector>,
    m1: Bound,
    m2: Bound,
) -> Result<ExactValue> {
    match (m1, m2) {
        (Bound::Finite(a), Bound::Finite(b)) => {
            if a >= b {
                return Ok(if k.is_empty() {
                    ExactValue::one()
                } else {
                    ExactValue::zero()
                });
            }
            crate::hurwitz::eval_finite(k, &IntervalSpec::open(a, b)?, &Frac::zero(), false, colors)
        }
        _ => Ok(ExactValue::Cplx(window_value_num(k, colors, m1, m2)?)),
    }
}

/// Colored prefactor (μ₁⋯μ_r)^{−n}.
fn prefactor(colors: Option<&ColorVector>, n: i64) -> ExactValue {
    crate::hurwitz::color_power(colors, -n)
}

/// Taylor coefficients at an integer center outside the pole strip:
/// coefficient of (s−n)^m is
/// (μ₁⋯μ_r)^{−n} Σ_{|c|=m} Π binom(−k_l,c_l) · ζ_(n+m₁,n+m₂)(k+c).
pub fn taylor_at(
    k: &MultiIndex,
    iv: &IntervalSpec,
    n: i64,
    max_order: u32,
    colors: Option<&ColorVector>,
) -> Result<Vec<ExactValue>> {
    if center_in_strip(iv, n) {
        return Err(Error::Precondition(format!(
            "center {n} lies inside the pole strip of {iv}; use laurent_at"
        )));
    }
    let m1 = shift_bound(iv.m1, n);
    let m2 = shift_bound(iv.m2, n);
    let pf = prefactor(colors, n);
    let r = k.depth();
    let mut out = Vec::with_capacity(max_order as usize + 1);
    for m in 0..=max_order {
        let mut acc = ExactValue::zero();
        for comp in compositions(m, r) {
            let c = binom_product(k, &comp);
            let v = window_value(&k.add_composition(&comp), colors, m1, m2)?;
            acc = acc.add(&v.scale(&c));
        }
        out.push(pf.mul(&acc));
    }
    Ok(out)
}

/// Laurent expansion at a center strictly inside the pole strip.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    pub center: i64,
    /// a_m for m = 0..=max_order
    pub regular: Vec<ExactValue>,
    /// per slot j = 1..r: the pole order k_j and b_{m,j} for m = 0..=max_order
    pub principal: Vec<(u32, Vec<ExactValue>)>,
}

impl LaurentSeries {
    /// Evaluate the truncated series at s = center + t.
    pub fn eval_at(&self, t: &Frac) -> Result<ExactValue> {
        let mut acc = ExactValue::zero();
        let mut tp = Frac::one();
        for a in &self.regular {
            acc = acc.add(&a.scale(&tp));
            tp = &tp * t;
        }
        for (kj, bs) in &self.principal {
            let mut tp = t.pow(*kj).recip()?;
            for b in bs {
                acc = acc.add(&b.scale(&tp));
                tp = &tp * t;
            }
        }
        Ok(acc)
    }

    /// Magnitude bound of the order-`m` term at radius |t| (sum of absolute
    /// values of the order-m pieces).
    pub fn order_term_mag(&self, m: u32, t_abs: &Frac) -> f64 {
        let mut acc = t_abs.pow(m).to_f64().abs() * self.regular[m as usize].mag_f64();
        for (kj, bs) in &self.principal {
            let p = m as i64 - *kj as i64;
            let w = if p >= 0 {
                t_abs.pow(p as u32).to_f64()
            } else {
                t_abs.pow((-p) as u32).recip().unwrap().to_f64()
            };
            acc += w.abs() * bs[m as usize].mag_f64();
        }
        acc
    }
}

/// Laurent coefficients per the two double-sum formulas; the colored case
/// carries the (μ₁⋯μ_r)^{−n} prefactor.
pub fn laurent_at(
    k: &MultiIndex,
    iv: &IntervalSpec,
    n: i64,
    max_order: u32,
    colors: Option<&ColorVector>,
) -> Result<LaurentSeries> {
    if !center_in_strip(iv, n) {
        return Err(Error::Precondition(format!(
            "center {n} lies outside the pole strip of {iv}; use taylor_at"
        )));
    }
    let r = k.depth();
    let lo = shift_bound(iv.m1, n); // n + m1 (< 0)
    let hi = shift_bound(iv.m2, n); // n + m2 (> 0)
    let pf = prefactor(colors, n);

    let slice_val = |kk: &MultiIndex,
                     cc: Option<&ColorVector>,
                     comp: &[u32],
                     left: bool|
     -> Result<ExactValue> {
        let shifted = kk.add_composition(comp);
        if left {
            window_value(&shifted, cc, lo, Bound::Finite(0))
        } else {
            window_value(&shifted, cc, Bound::Finite(0), hi)
        }
    };

    let mut regular = Vec::with_capacity(max_order as usize + 1);
    for m in 0..=max_order {
        let mut acc = ExactValue::zero();
        for comp in compositions(m, r) {
            let c = binom_product(k, &comp);
            let mut inner = ExactValue::zero();
            for j in 0..=r {
                let (cpre, csuf) = match colors {
                    Some(cv) => (Some(cv.prefix(j)), Some(cv.suffix_after(j))),
                    None => (None, None),
                };
                let left = slice_val(&k.prefix(j), cpre.as_ref(), &comp[..j], true)?;
                let right = slice_val(&k.suffix_after(j), csuf.as_ref(), &comp[j..], false)?;
                inner = inner.add(&left.mul(&right));
            }
            acc = acc.add(&inner.scale(&c));
        }
        regular.push(pf.mul(&acc));
    }

    let mut principal = Vec::with_capacity(r);
    for j in 1..=r {
        let mut bs = Vec::with_capacity(max_order as usize + 1);
        for m in 0..=max_order {
            let mut acc = ExactValue::zero();
            // compositions over the r−1 slots l ≠ j
            for comp in compositions(m, r - 1) {
                let pre_comp = &comp[..j - 1];
                let suf_comp = &comp[j - 1..];
                let mut c = Frac::one();
                for (idx, &nl) in pre_comp.iter().enumerate() {
                    c = &c * &Frac::from_bigint(binom_neg(k.parts()[idx], nl));
                }
                for (idx, &nl) in suf_comp.iter().enumerate() {
                    c = &c * &Frac::from_bigint(binom_neg(k.parts()[j + idx], nl));
                }
                let (cpre, csuf) = match colors {
                    Some(cv) => (Some(cv.prefix_open(j)), Some(cv.suffix_after(j))),
                    None => (None, None),
                };
                let left = slice_val(&k.prefix_open(j), cpre.as_ref(), pre_comp, true)?;
                let right = slice_val(&k.suffix_after(j), csuf.as_ref(), suf_comp, false)?;
                acc = acc.add(&left.mul(&right).scale(&c));
            }
            bs.push(pf.mul(&acc));
        }
        principal.push((k.parts()[j - 1], bs));
    }

    Ok(LaurentSeries {
        center: n,
        regular,
        principal,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Cot,
    Csc,
}

/// Expansion of π·cot(πs) or π/sin(πs) at an integer center: the
/// coefficient of (s−n)^{2k−1} is −2ζ(2k), respectively 2(−1)^n ζ̄(2k).
#[derive(Clone, Debug)]
pub struct KernelExpansion {
    pub kind: KernelKind,
    pub center: i64,
    /// coefficient of (s−n)^{2k−1}, k = 0..=max_order
    pub coeffs: Vec<BoundedReal>,
}

impl KernelExpansion {
    /// The residue-term coefficient (of 1/(s−n)): exactly 1 for cot,
    /// exactly (−1)^n for csc.
    pub fn leading(&self) -> &BoundedReal {
        &self.coeffs[0]
    }

    /// Truncated evaluation at s = center + t.
    pub fn eval_at(&self, t: &BoundedReal) -> BoundedReal {
        let t2 = t.mul(t);
        let mut pw = BoundedReal::one().div(t);
        let mut acc = BoundedReal::zero();
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&pw));
            pw = pw.mul(&t2);
        }
        acc
    }
}

pub fn kernel_expand(kind: KernelKind, n: i64, max_order: u32) -> KernelExpansion {
    let mut coeffs = Vec::with_capacity(max_order as usize + 1);
    for k in 0..=max_order {
        let c = match kind {
            KernelKind::Cot => zeta_even(k).mul_i64(-2),
            KernelKind::Csc => {
                let s = if n.rem_euclid(2) == 0 { 2 } else { -2 };
                alt_zeta_even(k).mul_i64(s)
            }
        };
        coeffs.push(c);
    }
    KernelExpansion {
        kind,
        center: n,
        coeffs,
    }
}

/// Direct kernel value π·cot(πs) or π/sin(πs) at exact rational s, for
/// cross-checking the expansions.
pub fn kernel_direct(kind: KernelKind, s: &Frac) -> Result<BoundedReal> {
    let (sin, cos) = sin_cos_pi_frac(s);
    if sin.consistent_with_zero() {
        return Err(Error::PoleHit {
            n: 0,
            s: s.reduced().to_string(),
        });
    }
    let pi = crate::consts::pi();
    match kind {
        KernelKind::Cot => Ok(pi.mul(&cos).div(&sin)),
        KernelKind::Csc => Ok(pi.div(&sin)),
    }
}

/// 1/s^q re-expanded at a nonzero center: coefficient of (s−n)^k is
/// binom(−q,k)/n^{q+k}.
pub fn inverse_power_expand(q: u32, n: i64, max_order: u32) -> Result<Vec<Frac>> {
    if q < 2 {
        return Err(Error::Parameter("q must be > 1".into()));
    }
    if n == 0 {
        return Err(Error::Parameter(
            "center 0 is the pole of 1/s^q itself".into(),
        ));
    }
    let mut out = Vec::with_capacity(max_order as usize + 1);
    for k in 0..=max_order {
        let c = Frac::new(
            binom_neg(q, k),
            num_bigint::BigInt::from(n).pow(q + k),
        )?;
        out.push(c);
    }
    Ok(out)
}

/// Sparse Laurent polynomial in t = s−n used during residue assembly.
type LaurentMap = BTreeMap<i64, ExactValue>;

fn convolve_coeff(a: &LaurentMap, b: &LaurentMap, lo: i64, hi: i64, target: i64) -> ExactValue {
    let mut acc = ExactValue::zero();
    for (oa, ca) in a {
        if *oa < lo || *oa > hi {
            continue;
        }
        if let Some(cb) = b.get(&(target - oa)) {
            acc = acc.add(&ca.mul(cb));
        }
    }
    acc
}

/// Residue of π·cot(πs)·ζ_(m₁,m₂)(k;s)/s^q at s = n, assembled from the
/// three truncated expansions. Case classification follows the center
/// against the pole strip.
pub fn residue_at(q: u32, k: &MultiIndex, iv: &IntervalSpec, n: i64) -> Result<ExactValue> {
    if q < 2 {
        return Err(Error::Parameter("q must be > 1".into()));
    }
    let inside = center_in_strip(iv, n);
    let max_kj = k.parts().iter().copied().max().unwrap_or(0) as i64;

    // zeta series orders: inside → [−max_kj, hi], outside → [0, hi]
    let zeta_min = if inside { -max_kj } else { 0 };
    // kernel min −1; inverse-power min: 0 for n ≠ 0, −q for n = 0
    let inv_min = if n == 0 { -(q as i64) } else { 0 };
    // orders needed so that products can land on −1
    let zeta_hi = -1 - (-1) - inv_min; // = −inv_min
    let kernel_hi = -1 - zeta_min - inv_min + 1;
    let inv_hi = -1 - zeta_min - (-1);

    let mut zeta_series: LaurentMap = BTreeMap::new();
    if inside {
        let ls = laurent_at(k, iv, n, zeta_hi.max(0) as u32, None)
            .map_err(|e| Error::Internal(format!("classification said Laurent: {e}")))?;
        for (m, a) in ls.regular.iter().enumerate() {
            let e = zeta_series.entry(m as i64).or_insert_with(ExactValue::zero);
            *e = e.add(a);
        }
        for (kj, bs) in &ls.principal {
            for (m, b) in bs.iter().enumerate() {
                let ord = m as i64 - *kj as i64;
                let e = zeta_series.entry(ord).or_insert_with(ExactValue::zero);
                *e = e.add(b);
            }
        }
    } else {
        let ts = taylor_at(k, iv, n, zeta_hi.max(0) as u32, None)
            .map_err(|e| Error::Internal(format!("classification said Taylor: {e}")))?;
        for (m, a) in ts.iter().enumerate() {
            zeta_series.insert(m as i64, a.clone());
        }
    }

    let mut kernel: LaurentMap = BTreeMap::new();
    let kmax = (kernel_hi.max(0) as u32).div_euclid(2) + 1;
    for kk in 0..=kmax {
        let c = if kk == 0 {
            ExactValue::one() // −2ζ(0) = 1
        } else {
            ExactValue::Cplx(crate::bounded::BoundedComplex::from_real(
                zeta_even(kk).mul_i64(-2),
            ))
        };
        kernel.insert(2 * kk as i64 - 1, c);
    }

    let mut inv: LaurentMap = BTreeMap::new();
    if n == 0 {
        inv.insert(-(q as i64), ExactValue::one());
    } else {
        for kk in 0..=(inv_hi.max(0) as u32) {
            inv.insert(
                kk as i64,
                ExactValue::Rat(Frac::new(
                    binom_neg(q, kk),
                    num_bigint::BigInt::from(n).pow(q + kk),
                )?),
            );
        }
    }

    // coefficient of t^{-1} in kernel·zeta·inv
    let mut zk: LaurentMap = BTreeMap::new();
    for (oa, ca) in &kernel {
        for (ob, cb) in &zeta_series {
            let o = oa + ob;
            if o <= 1 - inv_min {
                let e = zk.entry(o).or_insert_with(ExactValue::zero);
                *e = e.add(&ca.mul(cb));
            }
        }
    }
    Ok(convolve_coeff(&zk, &inv, i64::MIN / 2, i64::MAX / 2, -1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::zeta;

    fn mi(t: &str) -> MultiIndex {
        MultiIndex::parse(t).unwrap()
    }

    fn fr(p: i64, q: i64) -> Frac {
        Frac::from_ratio(p, q).unwrap()
    }

    #[test]
    fn taylor_matches_expansion() {
        let iv = IntervalSpec::open(0, 3).unwrap();
        let ts = taylor_at(&mi("2"), &iv, 0, 1, None).unwrap();
        assert_eq!(ts[0].as_rat().unwrap(), &fr(5, 4));
        assert_eq!(ts[1].as_rat().unwrap(), &fr(-9, 4));

        let ts = taylor_at(&mi("1,2"), &IntervalSpec::open(0, 4).unwrap(), 0, 0, None).unwrap();
        assert_eq!(ts[0].as_rat().unwrap(), &fr(5, 12));

        // recentered at n = −5: order-0 term is ζ_(−5,−2)(2) = 1/16 + 1/9
        let ts = taylor_at(&mi("2"), &iv, -5, 0, None).unwrap();
        assert_eq!(ts[0].as_rat().unwrap(), &fr(25, 144));

        // center inside the strip is rejected
        assert!(taylor_at(&mi("2"), &iv, -1, 1, None).is_err());
    }

    #[test]
    fn taylor_series_reproduces_values() {
        // evaluate the order-10 Taylor series at s = n + 1/10 and compare
        let iv = IntervalSpec::open(0, 3).unwrap();
        let n = -4i64;
        let ts = taylor_at(&mi("2,1"), &iv, n, 10, None).unwrap();
        let t = fr(1, 10);
        let mut acc = ExactValue::zero();
        let mut tp = Frac::one();
        for c in &ts {
            acc = acc.add(&c.scale(&tp));
            tp = &tp * &t;
        }
        let s = &Frac::from_int(n) + &t;
        let direct = crate::hurwitz::eval_finite(&mi("2,1"), &iv, &s, false, None).unwrap();
        let diff = acc.sub(&direct);
        assert!(diff.mag_f64() < 1e-9);
    }

    #[test]
    fn laurent_examples() {
        let iv = IntervalSpec::open(0, 3).unwrap();
        let ls = laurent_at(&mi("2"), &iv, -1, 2, None).unwrap();
        assert_eq!(ls.principal.len(), 1);
        assert_eq!(ls.principal[0].0, 2);
        assert_eq!(ls.principal[0].1[0].as_rat().unwrap(), &Frac::one());
        assert_eq!(ls.regular[0].as_rat().unwrap(), &Frac::one());

        // k=(1), window (0,3), center −2: 1/t − Σ t^m
        let ls = laurent_at(&mi("1"), &iv, -2, 3, None).unwrap();
        assert_eq!(ls.principal[0].1[0].as_rat().unwrap(), &Frac::one());
        for m in 0..=3usize {
            assert_eq!(ls.regular[m].as_rat().unwrap(), &fr(-1, 1), "a_{m}");
        }
        // direct evaluation agrees at t = 1/10
        let v = ls.eval_at(&fr(1, 10)).unwrap();
        let direct = crate::hurwitz::eval_finite(
            &mi("1"),
            &iv,
            &(&Frac::from_int(-2) + &fr(1, 10)),
            false,
            None,
        )
        .unwrap();
        let diff = v.sub(&direct).mag_f64();
        assert!(diff < 2e-4, "diff {diff}"); // dominated by t^4 tail

        assert!(laurent_at(&mi("2"), &iv, 1, 2, None).is_err());
    }

    #[test]
    fn laurent_depth1_infinite_window_shape() {
        // ζ(k;s) at a negative center: pole term 1/(s−n)^k with coefficient
        // exactly 1, a_m = binom(−k,m)(ζ_(n,0)(k+m) + ζ(k+m))
        let iv = IntervalSpec::new(Bound::Finite(0), Bound::PosInf, false).unwrap();
        let ls = laurent_at(&mi("3"), &iv, -2, 2, None).unwrap();
        assert_eq!(ls.principal.len(), 1);
        assert_eq!(ls.principal[0].0, 3);
        assert!(matches!(&ls.principal[0].1[0], ExactValue::Cplx(z) if
            (z.re.to_f64() - 1.0).abs() < 1e-40 && z.im.consistent_with_zero()));
        for m in 1..=2usize {
            assert!(ls.principal[0].1[m].mag_f64() < 1e-40);
        }
        // a_0 = ζ_(−2,0)(3) + ζ(3) = −1 − 1/8... recheck: entries −1: 1/(−1)³ = −1
        let z3 = zeta(&mi("3"), 1e-12).unwrap();
        let expect = z3.sub(&BoundedReal::one());
        match &ls.regular[0] {
            ExactValue::Cplx(z) => assert!(z.re.sub(&expect).consistent_with_zero()),
            _ => panic!("expected numeric coefficient"),
        }
    }

    #[test]
    fn kernel_expansions() {
        let cot = kernel_expand(KernelKind::Cot, 0, 40);
        assert_eq!(cot.leading().to_f64(), 1.0);
        assert!(cot.leading().err().is_zero());

        let csc = kernel_expand(KernelKind::Csc, 3, 40);
        assert_eq!(csc.leading().to_f64(), -1.0);

        // numeric agreement at s = n + t
        for (kind, n) in [(KernelKind::Cot, 0i64), (KernelKind::Cot, -2), (KernelKind::Csc, 1)] {
            let ke = kernel_expand(kind, n, 40);
            for t_num in [1i64, -2, 3] {
                let t = fr(t_num, 10);
                let s = &Frac::from_int(n) + &t;
                let direct = kernel_direct(kind, &s).unwrap();
                let approx = ke.eval_at(&BoundedReal::from_frac(&t));
                let diff = direct.sub(&approx);
                assert!(
                    diff.to_f64().abs() < 1e-10,
                    "{kind:?} at {n}+{t}: {}",
                    diff.to_f64()
                );
            }
        }
    }

    #[test]
    fn inverse_power_examples() {
        assert_eq!(
            inverse_power_expand(2, 1, 2).unwrap(),
            vec![fr(1, 1), fr(-2, 1), fr(3, 1)]
        );
        assert_eq!(inverse_power_expand(3, -1, 0).unwrap()[0], fr(-1, 1));
        assert_eq!(inverse_power_expand(2, 2, 1).unwrap()[1], fr(-1, 4));
        assert!(inverse_power_expand(2, 0, 1).is_err());
        assert!(inverse_power_expand(1, 1, 1).is_err());
    }

    #[test]
    fn residue_case1_closed_form() {
        let iv = IntervalSpec::open(0, 3).unwrap();
        // n = 5 is outside the closure: residue = ζ_(5+0,5+3)(k)/5^q
        let r = residue_at(2, &mi("2"), &iv, 5).unwrap();
        let w = crate::hurwitz::eval_finite(
            &mi("2"),
            &IntervalSpec::open(5, 8).unwrap(),
            &Frac::zero(),
            false,
            None,
        )
        .unwrap();
        let expect = w.scale(&fr(1, 25));
        assert!(r.sub(&expect).mag_f64() < 1e-40);
        match r {
            ExactValue::Rat(v) => assert_eq!(v, expect.as_rat().unwrap().clone()),
            _ => panic!("case-1 residue at n≠0 must be exact"),
        }
    }

    #[test]
    fn residue_sum_vanishes() {
        // Σ over all integer poles of π·cot(πs)·ζ_(0,3)(2;s)/s² is zero;
        // truncate at |n| ≤ 20 and bound the tail by monotone envelopes.
        let iv = IntervalSpec::open(0, 3).unwrap();
        let nmax = 20i64;
        let mut acc = ExactValue::zero();
        for n in -nmax..=nmax {
            acc = acc.add(&residue_at(2, &mi("2"), &iv, n).unwrap());
        }
        // |ζ_(n,n+3)(2)| ≤ 2/(|n|−3)² for |n| > 20, so the tail is below
        // Σ_{|n|>20} 2/((|n|−3)²·n²) < 8/(20−3)³
        let tail = 8.0 / ((nmax as f64 - 3.0).powi(3));
        let mag = acc.mag_f64();
        assert!(mag < tail, "residue sum {mag} vs tail allowance {tail}");
    }

    #[test]
    fn residue_at_zero_case1() {
        // window (0,3): n = 0 is on the boundary (outside the open strip):
        // Res = −2 Σ_{2k+m=q} c_m ζ(2k) with c_m the Taylor coefficients
        let iv = IntervalSpec::open(0, 3).unwrap();
        let r = residue_at(2, &mi("2"), &iv, 0).unwrap();
        let ts = taylor_at(&mi("2"), &iv, 0, 2, None).unwrap();
        // q=2: (k,m) ∈ {(0,2),(1,0)}: −2[ζ(0)c_2 + ζ(2)c_0] = c_2 − 2ζ(2)c_0
        let z2 = zeta(&mi("2"), 1e-12).unwrap();
        let expect = ts[2]
            .to_complex()
            .re
            .sub(&z2.mul(&ts[0].to_complex().re).mul_i64(2));
        assert!(r.to_complex().re.sub(&expect).consistent_with_zero());
    }
}
