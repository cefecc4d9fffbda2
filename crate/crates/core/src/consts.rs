//! Self-computed certified constants and elementary functions: π (Machin),
//! ln 2, sin/cos on a reduced range, ln, Bernoulli numbers, the even zeta
//! values ζ(2k) and their alternating companions, and roots of unity.
//!
//! ζ(0) = −1/2 and ζ̄(0) = 1/2 are the two hard conventions the residue
//! formulas depend on; they live here and nowhere else.

use crate::bigfloat::BigFloat;
use crate::bounded::{working_prec, BoundedComplex, BoundedReal};
use crate::exact::{binom, Frac};
use num_bigint::BigInt;
use num_integer::Integer;
use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

/// ζ(0) = −1/2, the constant term convention of the cot-kernel expansion.
pub fn zeta_zero() -> Frac {
    Frac::from_ratio(-1, 2).unwrap()
}

/// ζ̄(0) = 1/2, the csc-kernel companion.
pub fn alt_zeta_zero() -> Frac {
    Frac::from_ratio(1, 2).unwrap()
}

fn cache<T: Clone>(lock: &RwLock<HashMap<u32, T>>, key: u32, f: impl FnOnce() -> T) -> T {
    if let Some(v) = lock.read().unwrap().get(&key) {
        return v.clone();
    }
    let v = f();
    lock.write().unwrap().insert(key, v.clone());
    v
}

static PI: RwLock<Option<BoundedReal>> = RwLock::new(None);
static LN2: RwLock<Option<BoundedReal>> = RwLock::new(None);

/// atan(1/x) for integer x ≥ 2, by the alternating Taylor series with the
/// tail bounded by the first omitted term.
fn atan_inv(x: i64) -> BoundedReal {
    let p = working_prec();
    let cut = BigFloat::pow2(-(p as i64) - 16);
    let mut sum = BoundedReal::zero();
    let mut j = 0u32;
    loop {
        let term = BoundedReal::recip_ipow(x, 2 * j + 1)
            .scale_frac(&Frac::from_ratio(1, (2 * j + 1) as i64).unwrap());
        let t = if j % 2 == 0 { term.clone() } else { term.neg() };
        sum = sum.add(&t);
        if term.abs_ub().cmp_value(&cut) == std::cmp::Ordering::Less {
            return sum.add_tail_err(term.abs_ub());
        }
        j += 1;
    }
}

impl BoundedReal {
    pub(crate) fn add_tail_err(&self, tail: BigFloat) -> BoundedReal {
        BoundedReal::with_err(self.value().clone(), self.err().add_up(&tail))
    }
}

pub fn pi() -> BoundedReal {
    if let Some(v) = PI.read().unwrap().as_ref() {
        return v.clone();
    }
    // Machin: π = 16·atan(1/5) − 4·atan(1/239)
    let v = atan_inv(5).mul_i64(16).sub(&atan_inv(239).mul_i64(4));
    *PI.write().unwrap() = Some(v.clone());
    v
}

pub fn ln2() -> BoundedReal {
    if let Some(v) = LN2.read().unwrap().as_ref() {
        return v.clone();
    }
    // ln 2 = Σ_{k≥1} 1/(k·2^k), tail < 1/(K·2^K)
    let p = working_prec();
    let kmax = p + 24;
    let mut sum = BoundedReal::zero();
    for k in 1..=kmax as i64 {
        let t = BoundedReal::exact(BigFloat::pow2(-k))
            .scale_frac(&Frac::from_ratio(1, k).unwrap());
        sum = sum.add(&t);
    }
    let v = sum.add_tail_err(BigFloat::pow2(-(kmax as i64)));
    *LN2.write().unwrap() = Some(v.clone());
    v
}

/// sin and cos for |x| ≤ 1.7, which covers arguments reduced to a quarter
/// period. Alternating series with certified tails.
pub fn sin_cos(x: &BoundedReal) -> (BoundedReal, BoundedReal) {
    assert!(
        x.abs_ub_f64() <= 1.7,
        "sin_cos expects a range-reduced argument"
    );
    let p = working_prec();
    let cut = BigFloat::pow2(-(p as i64) - 16);
    let x2 = x.mul(x);

    let mut sin = x.clone();
    let mut term = x.clone();
    let mut j = 0i64;
    loop {
        // t_{j+1} = -t_j·x²/((2j+2)(2j+3))
        term = term
            .mul(&x2)
            .neg()
            .scale_frac(&Frac::from_ratio(1, (2 * j + 2) * (2 * j + 3)).unwrap());
        sin = sin.add(&term);
        j += 1;
        if term.abs_ub().cmp_value(&cut) == std::cmp::Ordering::Less {
            sin = sin.add_tail_err(term.abs_ub());
            break;
        }
    }

    let mut cos = BoundedReal::one();
    let mut term = BoundedReal::one();
    let mut j = 0i64;
    loop {
        term = term
            .mul(&x2)
            .neg()
            .scale_frac(&Frac::from_ratio(1, (2 * j + 1) * (2 * j + 2)).unwrap());
        cos = cos.add(&term);
        j += 1;
        if term.abs_ub().cmp_value(&cut) == std::cmp::Ordering::Less {
            cos = cos.add_tail_err(term.abs_ub());
            break;
        }
    }
    (sin, cos)
}

/// sin(πs) and cos(πs) for exact rational s, reduced through the integer
/// part so only |π·frac(s)| ≤ π/2 reaches the series.
pub fn sin_cos_pi_frac(s: &Frac) -> (BoundedReal, BoundedReal) {
    // s = n + f with f ∈ [-1/2, 1/2]: sin(πs) = (-1)^n sin(πf), likewise cos.
    let two_s = s.mul_int(2).reduced();
    // nearest integer to s
    let n_near: BigInt = {
        let num = two_s.numer() + two_s.denom();
        let den = two_s.denom() * BigInt::from(2);
        num.div_floor(&den)
    };
    let n_frac = Frac::from_bigint(n_near.clone());
    let f = s - &n_frac;
    let x = pi().mul(&BoundedReal::from_frac(&f));
    let (sf, cf) = sin_cos(&x);
    let odd = (n_near % BigInt::from(2)).magnitude() > &num_bigint::BigUint::from(0u32);
    if odd {
        (sf.neg(), cf.neg())
    } else {
        (sf, cf)
    }
}

/// Natural log of a positive value, via power-of-two reduction plus the
/// atanh series at y = (m−1)/(m+1) ≤ 1/3.
pub fn ln_pos(x: &BoundedReal) -> BoundedReal {
    let lb = x.abs_lb();
    assert!(
        !x.value().is_negative() && !lb.is_zero(),
        "ln of a value not bounded away from zero"
    );
    let p = working_prec();
    let g = x.value().mag_exp() - 1;
    let m = BoundedReal::exact(x.value().shl(-g)); // in [1, 2)
    let y = m
        .sub(&BoundedReal::one())
        .div(&m.add(&BoundedReal::one()));
    let y2 = y.mul(&y);
    let cut = BigFloat::pow2(-(p as i64) - 16);
    let mut sum = BoundedReal::zero();
    let mut pow = y.clone();
    let mut j = 0i64;
    loop {
        let t = pow.scale_frac(&Frac::from_ratio(1, 2 * j + 1).unwrap());
        sum = sum.add(&t);
        pow = pow.mul(&y2);
        j += 1;
        if pow.abs_ub().cmp_value(&cut) == std::cmp::Ordering::Less {
            // tail ≤ Σ y^{2i+1} ≤ y^{2J+1}/(1−y²) ≤ 2·y^{2J+1} for y ≤ 1/3
            sum = sum.add_tail_err(pow.abs_ub().shl(1));
            break;
        }
    }
    let ln_m = sum.mul_i64(2);
    let mut out = ln_m.add(&ln2().mul_i64(g));
    // input error: |d ln x| ≤ err/|x|
    if !x.err().is_zero() {
        let (extra, _) = x.err().div_rounded(&lb, 32);
        out = out.add_tail_err(extra.round_up_coarse());
    }
    out
}

static BERNOULLI: RwLock<Vec<Frac>> = RwLock::new(Vec::new());

/// Bernoulli number B_n (B_1 = −1/2 convention), exact.
pub fn bernoulli(n: usize) -> Frac {
    {
        let tab = BERNOULLI.read().unwrap();
        if n < tab.len() {
            return tab[n].clone();
        }
    }
    let mut tab = BERNOULLI.write().unwrap();
    if tab.is_empty() {
        tab.push(Frac::one());
    }
    while tab.len() <= n {
        let m = tab.len(); // computing B_m
        let mut acc = Frac::zero();
        for (j, bj) in tab.iter().enumerate() {
            let c = Frac::from_bigint(binom(m as u64 + 1, j as u64));
            acc = &acc + &(&c * bj);
        }
        let bm = &(-&acc) * &Frac::from_ratio(1, m as i64 + 1).unwrap();
        tab.push(bm);
    }
    tab[n].clone()
}

static ZETA_EVEN: LazyLock<RwLock<HashMap<u32, BoundedReal>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// ζ(2k) for k ≥ 0; k = 0 yields the exact −1/2.
pub fn zeta_even(k: u32) -> BoundedReal {
    if k == 0 {
        return BoundedReal::from_frac(&zeta_zero());
    }
    let memo = &ZETA_EVEN;
    cache(memo, k, || {
        // ζ(2k) = (−1)^{k+1} B_{2k} (2π)^{2k} / (2·(2k)!)
        let b = bernoulli(2 * k as usize);
        let two_pi = pi().mul_i64(2);
        let mut fact = Frac::one();
        for i in 1..=(2 * k as i64) {
            fact = fact.mul_int(i);
        }
        let mut c = &b * &fact.recip().unwrap();
        c = &c * &Frac::from_ratio(1, 2).unwrap();
        if k % 2 == 0 {
            c = -&c;
        }
        two_pi.powi(2 * k).scale_frac(&c)
    })
}

/// ζ̄(2k) = (1 − 2^{1−2k}) ζ(2k); ζ̄(0) = 1/2 exactly.
pub fn alt_zeta_even(k: u32) -> BoundedReal {
    if k == 0 {
        return BoundedReal::from_frac(&alt_zeta_zero());
    }
    let factor = &Frac::one() - &Frac::new(BigInt::from(2), BigInt::from(2).pow(2 * k)).unwrap();
    zeta_even(k).scale_frac(&factor)
}

static ROOTS: LazyLock<RwLock<HashMap<(u32, u32), BoundedComplex>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// exp(2πi·a/N) with certified bounds.
pub fn root_of_unity(a: u32, level: u32) -> BoundedComplex {
    let a = a % level;
    if let Some(v) = ROOTS.read().unwrap().get(&(a, level)) {
        return v.clone();
    }
    let v = {
        // Reduce 2π·a/N to a quadrant: θ = (π/2)·q + φ, |φ| ≤ π/4.
        let q = ((8 * a + level) / (2 * level)) % 4; // round(4a/N) mod 4
        let f = &Frac::from_ratio(2 * a as i64, level as i64).unwrap()
            - &Frac::from_ratio(q as i64, 2).unwrap();
        let phi = pi().mul(&BoundedReal::from_frac(&f));
        let (s, c) = sin_cos(&phi);
        match q {
            0 => BoundedComplex::new(c, s),
            1 => BoundedComplex::new(s.neg(), c),
            2 => BoundedComplex::new(c.neg(), s.neg()),
            _ => BoundedComplex::new(s, c.neg()),
        }
    };
    ROOTS
        .write()
        .unwrap()
        .insert((a, level), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_ln2_match_f64() {
        assert!((pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(pi().err_f64() < 1e-60);
        assert!((ln2().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn sin_cos_pi_rational() {
        let (s, c) = sin_cos_pi_frac(&Frac::from_ratio(1, 6).unwrap());
        assert!((s.to_f64() - 0.5).abs() < 1e-15);
        assert!((c.to_f64() - 0.75f64.sqrt()).abs() < 1e-15);
        let (s2, _) = sin_cos_pi_frac(&Frac::from_ratio(7, 2).unwrap());
        assert!((s2.to_f64() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn ln_values() {
        let x = BoundedReal::from_i64(10);
        assert!((ln_pos(&x).to_f64() - 10f64.ln()).abs() < 1e-15);
        let y = BoundedReal::from_frac(&Frac::from_ratio(1, 3).unwrap());
        assert!((ln_pos(&y).to_f64() + 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_and_even_zeta() {
        assert_eq!(bernoulli(2), Frac::from_ratio(1, 6).unwrap());
        assert_eq!(bernoulli(4), Frac::from_ratio(-1, 30).unwrap());
        assert_eq!(bernoulli(12), Frac::from_ratio(-691, 2730).unwrap());
        let z2 = zeta_even(1);
        let pi2_6 = pi().mul(&pi()).scale_frac(&Frac::from_ratio(1, 6).unwrap());
        assert!(z2.sub(&pi2_6).consistent_with_zero());
        assert!((zeta_even(2).to_f64() - 1.0823232337111382).abs() < 1e-14);
        assert_eq!(zeta_even(0).to_f64(), -0.5);
        assert_eq!(alt_zeta_even(0).to_f64(), 0.5);
        assert!((alt_zeta_even(1).to_f64() - 0.8224670334241132).abs() < 1e-14);
    }

    #[test]
    fn roots_of_unity_table() {
        let i = root_of_unity(1, 4);
        assert!(i.re.consistent_with_zero());
        assert!((i.im.to_f64() - 1.0).abs() < 1e-20);
        let w = root_of_unity(1, 3);
        assert!((w.re.to_f64() + 0.5).abs() < 1e-15);
        assert!((w.im.to_f64() - 0.75f64.sqrt()).abs() < 1e-15);
        let m1 = root_of_unity(1, 2);
        assert!((m1.re.to_f64() + 1.0).abs() < 1e-20);
        assert!(m1.im.consistent_with_zero());
    }
}
