//! Certified numeric containers: values carry an absolute error bound that
//! every operation propagates conservatively. The working precision is a
//! process-wide set-once parameter (default 256 bits ≈ 77 digits).

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::exact::Frac;
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

static WORKING_PREC: OnceLock<u32> = OnceLock::new();

pub fn working_prec() -> u32 {
    *WORKING_PREC.get_or_init(|| 256)
}

/// Set the working precision in bits before any numeric work happens.
/// Re-setting to the already-active value is a no-op.
pub fn set_working_precision_bits(bits: u32) -> Result<()> {
    let bits = bits.clamp(96, 8192);
    let cur = *WORKING_PREC.get_or_init(|| bits);
    if cur != bits {
        return Err(Error::Precision(format!(
            "working precision already fixed at {cur} bits"
        )));
    }
    Ok(())
}

/// Real number with a certified absolute error bound.
#[derive(Clone, Debug)]
pub struct BoundedReal {
    v: BigFloat,
    err: BigFloat,
}

impl BoundedReal {
    pub fn exact(v: BigFloat) -> Self {
        BoundedReal {
            v,
            err: BigFloat::zero(),
        }
    }

    pub fn with_err(v: BigFloat, err: BigFloat) -> Self {
        debug_assert!(!err.is_negative());
        BoundedReal { v, err }
    }

    pub fn zero() -> Self {
        Self::exact(BigFloat::zero())
    }

    pub fn one() -> Self {
        Self::exact(BigFloat::from_i64(1))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::exact(BigFloat::from_i64(n))
    }

    pub fn from_frac(f: &Frac) -> Self {
        let p = working_prec();
        let num = BigFloat::from_bigint(f.numer().clone());
        let den = BigFloat::from_bigint(f.denom().clone());
        let (v, err) = num.div_rounded(&den, p);
        BoundedReal {
            v,
            err: err.round_up_coarse(),
        }
    }

    pub fn value(&self) -> &BigFloat {
        &self.v
    }

    pub fn err(&self) -> &BigFloat {
        &self.err
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = working_prec();
        let (v, r) = self.v.add_rounded(&o.v, p);
        let err = self.err.add_up(&o.err).add_up(&r);
        BoundedReal { v, err }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        BoundedReal {
            v: self.v.neg(),
            err: self.err.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        BoundedReal {
            v: self.v.abs(),
            err: self.err.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = working_prec();
        let (v, r) = self.v.mul_rounded(&o.v, p);
        // |a|·eb + |b|·ea + ea·eb + rounding, all rounded upward
        let err = self
            .v
            .abs()
            .mul_up(&o.err)
            .add_up(&o.v.abs().mul_up(&self.err))
            .add_up(&self.err.mul_up(&o.err))
            .add_up(&r);
        BoundedReal { v, err }
    }

    /// Division; the divisor must be bounded away from zero by its own
    /// error bound. Interior code only divides by such values.
    pub fn div(&self, o: &Self) -> Self {
        let p = working_prec();
        let denom_lb = o.abs_lb_strict();
        let (v, r) = self.v.div_rounded(&o.v, p);
        let num_err = self.err.add_up(&v.abs().mul_up(&o.err));
        let err = num_err.div_up(&denom_lb).add_up(&r);
        BoundedReal { v, err }
    }

    /// Lower bound on |value|, required positive.
    fn abs_lb_strict(&self) -> BigFloat {
        // inflate the error by one coarse ulp so the subtraction below is a
        // true lower bound even after its own rounding
        let (d, dr) = self.v.abs().sub_rounded(&self.err, 64);
        let (lb, _) = d.sub_rounded(&dr, 64);
        assert!(
            !lb.is_negative() && !lb.is_zero(),
            "division by a value not bounded away from zero"
        );
        lb
    }

    pub fn scale_frac(&self, f: &Frac) -> Self {
        self.mul(&BoundedReal::from_frac(f))
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul(&BoundedReal::from_i64(n))
    }

    /// 1/n^k for nonzero integer n.
    pub fn recip_ipow(n: i64, k: u32) -> Self {
        let p = working_prec();
        let den = BigFloat::from_bigint(num_bigint::BigInt::from(n).pow(k));
        let (v, err) = BigFloat::from_i64(1).div_rounded(&den, p);
        BoundedReal {
            v,
            err: err.round_up_coarse(),
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = BoundedReal::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Upper bound on |value|.
    pub fn abs_ub(&self) -> BigFloat {
        self.v.abs().add_up(&self.err)
    }

    /// Lower bound on |value| (clamped at zero).
    pub fn abs_lb(&self) -> BigFloat {
        let (l, _) = self.v.abs().sub_rounded(&self.err, 64);
        if l.is_negative() {
            BigFloat::zero()
        } else {
            l
        }
    }

    pub fn abs_ub_f64(&self) -> f64 {
        self.abs_ub().to_f64()
    }

    pub fn err_f64(&self) -> f64 {
        self.err.to_f64()
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }

    /// True when the interval [v-err, v+err] contains zero.
    pub fn consistent_with_zero(&self) -> bool {
        self.v.abs().cmp_value(&self.err) != Ordering::Greater
    }

    /// Certified |value| ≤ t.
    pub fn abs_le_f64(&self, t: f64) -> bool {
        self.abs_ub_f64() <= t
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        format!("{}±{}", self.v.to_decimal(sig), self.err.to_decimal(2))
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(25))
    }
}

/// Complex number with certified componentwise error bounds.
#[derive(Clone, Debug)]
pub struct BoundedComplex {
    pub re: BoundedReal,
    pub im: BoundedReal,
}

impl BoundedComplex {
    pub fn new(re: BoundedReal, im: BoundedReal) -> Self {
        BoundedComplex { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BoundedReal::zero(), BoundedReal::zero())
    }

    pub fn one() -> Self {
        Self::new(BoundedReal::one(), BoundedReal::zero())
    }

    pub fn from_real(re: BoundedReal) -> Self {
        Self::new(re, BoundedReal::zero())
    }

    pub fn from_frac(f: &Frac) -> Self {
        Self::from_real(BoundedReal::from_frac(f))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_real(BoundedReal::from_i64(n))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self::new(re, im)
    }

    pub fn div(&self, o: &Self) -> Self {
        let n2 = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        let num = self.mul(&o.conj());
        Self::new(num.re.div(&n2), num.im.div(&n2))
    }

    pub fn scale(&self, c: &BoundedReal) -> Self {
        Self::new(self.re.mul(c), self.im.mul(c))
    }

    pub fn scale_frac(&self, f: &Frac) -> Self {
        let c = BoundedReal::from_frac(f);
        self.scale(&c)
    }

    pub fn recip_ipow_c(n: i64, k: u32) -> Self {
        Self::from_real(BoundedReal::recip_ipow(n, k))
    }

    pub fn is_real_within_err(&self) -> bool {
        self.im.consistent_with_zero()
    }

    /// Upper bound on |z| via |re| + |im| (≥ the Euclidean norm).
    pub fn abs_ub(&self) -> BigFloat {
        self.re.abs_ub().add_up(&self.im.abs_ub())
    }

    pub fn abs_ub_f64(&self) -> f64 {
        self.abs_ub().to_f64()
    }

    pub fn err_ub_f64(&self) -> f64 {
        self.re.err().add_up(self.im.err()).to_f64()
    }

    pub fn consistent_with_zero(&self) -> bool {
        self.re.consistent_with_zero() && self.im.consistent_with_zero()
    }

    pub fn abs_le_f64(&self, t: f64) -> bool {
        self.abs_ub_f64() <= t
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        if self.im.value().is_zero() && self.im.err().is_zero() {
            self.re.to_decimal(sig)
        } else {
            format!("{} + ({})i", self.re.to_decimal(sig), self.im.to_decimal(sig))
        }
    }
}

impl fmt::Display for BoundedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(25))
    }
}

/// Shared surface for the real and complex certified scalars, so the
/// evaluation kernels can be written once.
pub trait NumField: Clone + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_frac(f: &Frac) -> Self;
    fn recip_ipow(n: i64, k: u32) -> Self;
    fn abs_ub(&self) -> BigFloat;
    fn err_ub(&self) -> BigFloat;
    fn scale_frac(&self, f: &Frac) -> Self;
    fn add_err_ub(&self, extra: &BigFloat) -> Self;
}

impl NumField for BoundedReal {
    fn zero() -> Self {
        BoundedReal::zero()
    }
    fn one() -> Self {
        BoundedReal::one()
    }
    fn add(&self, o: &Self) -> Self {
        BoundedReal::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BoundedReal::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BoundedReal::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        BoundedReal::div(self, o)
    }
    fn neg(&self) -> Self {
        BoundedReal::neg(self)
    }
    fn from_frac(f: &Frac) -> Self {
        BoundedReal::from_frac(f)
    }
    fn recip_ipow(n: i64, k: u32) -> Self {
        BoundedReal::recip_ipow(n, k)
    }
    fn abs_ub(&self) -> BigFloat {
        BoundedReal::abs_ub(self)
    }
    fn err_ub(&self) -> BigFloat {
        self.err().clone()
    }
    fn scale_frac(&self, f: &Frac) -> Self {
        BoundedReal::scale_frac(self, f)
    }
    fn add_err_ub(&self, extra: &BigFloat) -> Self {
        BoundedReal::with_err(self.value().clone(), self.err().add_up(extra))
    }
}

impl NumField for BoundedComplex {
    fn zero() -> Self {
        BoundedComplex::zero()
    }
    fn one() -> Self {
        BoundedComplex::one()
    }
    fn add(&self, o: &Self) -> Self {
        BoundedComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BoundedComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BoundedComplex::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        BoundedComplex::div(self, o)
    }
    fn neg(&self) -> Self {
        BoundedComplex::neg(self)
    }
    fn from_frac(f: &Frac) -> Self {
        BoundedComplex::from_frac(f)
    }
    fn recip_ipow(n: i64, k: u32) -> Self {
        BoundedComplex::recip_ipow_c(n, k)
    }
    fn abs_ub(&self) -> BigFloat {
        BoundedComplex::abs_ub(self)
    }
    fn err_ub(&self) -> BigFloat {
        self.re.err().add_up(self.im.err())
    }
    fn scale_frac(&self, f: &Frac) -> Self {
        BoundedComplex::scale_frac(self, f)
    }
    fn add_err_ub(&self, extra: &BigFloat) -> Self {
        BoundedComplex::new(self.re.add_err_ub(extra), self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_propagation_is_conservative() {
        let third = BoundedReal::from_frac(&Frac::from_ratio(1, 3).unwrap());
        let x = third.mul(&third).mul_i64(9); // should be 1
        let one = BoundedReal::one();
        assert!(x.sub(&one).consistent_with_zero());
        assert!(x.err_f64() < 1e-60);
    }

    #[test]
    fn complex_multiplication() {
        // (1+2i)(3-1i) = 5 + 5i
        let a = BoundedComplex::new(BoundedReal::from_i64(1), BoundedReal::from_i64(2));
        let b = BoundedComplex::new(BoundedReal::from_i64(3), BoundedReal::from_i64(-1));
        let p = a.mul(&b);
        assert!((p.re.to_f64() - 5.0).abs() < 1e-12);
        assert!((p.im.to_f64() - 5.0).abs() < 1e-12);
        let q = p.div(&b);
        assert!(q.sub(&a).consistent_with_zero());
    }
}
