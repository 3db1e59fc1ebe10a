//! Fixed-point arbitrary-precision real arithmetic.
//!
//! A [`BigFloat`] stores an integer mantissa `m` at a fixed binary scale `P`,
//! representing the real number `m / 2^P`. Addition and subtraction are exact;
//! multiplication, division and the elementary functions round to the working
//! scale. Every public producer in this crate that returns a `BigFloat` at a
//! requested [`Precision`] of `P` bits computes internally with guard bits and
//! guarantees an absolute error at most `2^(8-P)`.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};

use crate::numth::Rat;

/// Working precision in bits; at least 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Self {
        assert!(bits >= 64, "precision must be at least 64 bits");
        Precision(bits)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    /// Internal working precision: requested bits plus guard bits.
    pub(crate) fn guarded(&self) -> u32 {
        self.0 + 64
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Fixed-point real number: `mantissa / 2^scale`.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    scale: u32,
}

impl BigFloat {
    pub fn zero(scale: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), scale }
    }

    pub fn one(scale: u32) -> Self {
        BigFloat { mantissa: BigInt::one() << scale, scale }
    }

    pub fn from_i64(n: i64, scale: u32) -> Self {
        BigFloat { mantissa: BigInt::from(n) << scale, scale }
    }

    pub fn from_rat(x: &Rat, scale: u32) -> Self {
        let num = x.numer() << scale;
        let q = divide_round(&num, x.denom());
        BigFloat { mantissa: q, scale }
    }

    pub fn from_bigint(n: &BigInt, scale: u32) -> Self {
        BigFloat { mantissa: n << scale, scale }
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(self.mantissa.clone(), BigInt::one() << self.scale)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        if bits <= 52 {
            return self.mantissa.to_f64().unwrap_or(0.0) / libm::exp2(self.scale as f64);
        }
        let shift = bits - 52;
        let top = (&self.mantissa >> shift).to_f64().unwrap_or(0.0);
        top * libm::exp2((shift - self.scale as i64) as f64)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), scale: self.scale }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -&self.mantissa, scale: self.scale }
    }

    /// Change scale, rounding to nearest when reducing.
    pub fn with_scale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            BigFloat { mantissa: &self.mantissa << (scale - self.scale), scale }
        } else {
            let shift = self.scale - scale;
            BigFloat { mantissa: shift_round(&self.mantissa, shift), scale }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.scale, rhs.scale);
        BigFloat { mantissa: &self.mantissa + &rhs.mantissa, scale: self.scale }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.scale, rhs.scale);
        BigFloat { mantissa: &self.mantissa - &rhs.mantissa, scale: self.scale }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.scale, rhs.scale);
        let prod = &self.mantissa * &rhs.mantissa;
        BigFloat { mantissa: shift_round(&prod, self.scale), scale: self.scale }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigFloat { mantissa: &self.mantissa * BigInt::from(k), scale: self.scale }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.scale, rhs.scale);
        assert!(!rhs.is_zero(), "division by zero BigFloat");
        let num = &self.mantissa << self.scale;
        let q = divide_round(&num, &rhs.mantissa);
        BigFloat { mantissa: q, scale: self.scale }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0);
        let q = divide_round(&self.mantissa, &BigInt::from(k));
        BigFloat { mantissa: q, scale: self.scale }
    }

    pub fn shl(&self, k: u32) -> Self {
        BigFloat { mantissa: &self.mantissa << k, scale: self.scale }
    }

    pub fn shr(&self, k: u32) -> Self {
        BigFloat { mantissa: shift_round(&self.mantissa, k), scale: self.scale }
    }

    pub fn cmp_abs(&self, rhs: &Self) -> Ordering {
        self.mantissa.abs().cmp(&rhs.mantissa.abs())
    }

    /// `|self| <= 2^e`
    pub fn abs_le_pow2(&self, e: i64) -> bool {
        let bound_exp = e + self.scale as i64;
        if bound_exp < 0 {
            return self.mantissa.is_zero();
        }
        self.mantissa.abs() <= (BigInt::one() << (bound_exp as u64))
    }

    /// Floor of log2 of |self|, or None if zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            return None;
        }
        Some(self.mantissa.bits() as i64 - 1 - self.scale as i64)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let target = &self.mantissa << self.scale;
        BigFloat { mantissa: target.sqrt(), scale: self.scale }
    }

    /// Decimal string with `digits` fractional digits, rounded.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let ten = BigInt::from(10u32).pow(digits);
        let scaled = &self.mantissa * &ten;
        let q = divide_round(&scaled, &(BigInt::one() << self.scale));
        let neg = q.sign() == Sign::Minus;
        let q = q.abs();
        let s = q.to_string();
        let (int_part, frac_part) = if s.len() > digits as usize {
            let split = s.len() - digits as usize;
            (String::from(&s[..split]), String::from(&s[split..]))
        } else {
            let mut frac = String::new();
            for _ in 0..(digits as usize - s.len()) {
                frac.push('0');
            }
            frac.push_str(&s);
            (String::from("0"), frac)
        };
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part);
        if digits > 0 {
            out.push('.');
            out.push_str(&frac_part);
        }
        out
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        debug_assert_eq!(self.scale, other.scale);
        self.mantissa == other.mantissa
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        debug_assert_eq!(self.scale, other.scale);
        Some(self.mantissa.cmp(&other.mantissa))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.scale as f64 * 0.30103) as u32;
        write!(f, "{}", self.to_decimal_string(digits.min(80)))
    }
}

fn shift_round(n: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return n.clone();
    }
    let half = BigInt::one() << (k - 1);
    let adj = if n.sign() == Sign::Minus { -&half } else { half };
    (n + adj) >> k
}

fn divide_round(num: &BigInt, den: &BigInt) -> BigInt {
    let q = num / den;
    let r = num - &q * den;
    if (&r * 2u32).abs() >= den.abs() {
        if (r.sign() == Sign::Minus) == (den.sign() == Sign::Minus) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Elementary transcendental functions at a fixed working scale.
///
/// All functions return values with absolute error a small multiple of the
/// last place `2^-scale`; callers add guard bits to absorb this.
pub struct RealOps {
    scale: u32,
}

impl RealOps {
    pub fn new(scale: u32) -> Self {
        RealOps { scale }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn from_rat(&self, x: &Rat) -> BigFloat {
        BigFloat::from_rat(x, self.scale)
    }

    pub fn from_i64(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.scale)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::zero(self.scale)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::one(self.scale)
    }

    /// pi by Machin's formula: `pi = 16 atan(1/5) - 4 atan(1/239)`.
    pub fn pi(&self) -> BigFloat {
        let a = self.atan_inv(5);
        let b = self.atan_inv(239);
        a.mul_i64(16).sub(&b.mul_i64(4))
    }

    /// arctan(1/q) for integer q >= 2, alternating Taylor series.
    fn atan_inv(&self, q: i64) -> BigFloat {
        let scale = self.scale;
        let q2 = q * q;
        let mut term = BigFloat::one(scale).div_i64(q);
        let mut acc = term.clone();
        let mut k: i64 = 1;
        loop {
            term = term.div_i64(q2);
            if term.is_zero() {
                break;
            }
            let contrib = term.div_i64(2 * k + 1);
            if k % 2 == 1 {
                acc = acc.sub(&contrib);
            } else {
                acc = acc.add(&contrib);
            }
            if contrib.abs_le_pow2(-(scale as i64)) {
                break;
            }
            k += 1;
        }
        acc
    }

    /// ln 2 = 2 atanh(1/3).
    pub fn ln2(&self) -> BigFloat {
        self.atanh_inv(3).mul_i64(2)
    }

    fn atanh_inv(&self, q: i64) -> BigFloat {
        let scale = self.scale;
        let q2 = q * q;
        let mut term = BigFloat::one(scale).div_i64(q);
        let mut acc = term.clone();
        let mut k: i64 = 1;
        loop {
            term = term.div_i64(q2);
            if term.is_zero() {
                break;
            }
            let contrib = term.div_i64(2 * k + 1);
            acc = acc.add(&contrib);
            if contrib.abs_le_pow2(-(scale as i64)) {
                break;
            }
            k += 1;
        }
        acc
    }

    /// Natural logarithm for x > 0: reduce `x = y * 2^k` with `y` in `[1, 2)`,
    /// then `ln y = 2 atanh((y-1)/(y+1))`.
    pub fn ln(&self, x: &BigFloat) -> BigFloat {
        assert!(!x.is_negative() && !x.is_zero(), "ln requires x > 0");
        let scale = self.scale;
        let e = x.log2_floor().unwrap();
        let y = if e >= 0 { x.shr(e as u32) } else { x.shl((-e) as u32) };
        let one = BigFloat::one(scale);
        let t = y.sub(&one).div(&y.add(&one));
        let t2 = t.mul(&t);
        let mut term = t.clone();
        let mut acc = t.clone();
        let mut k: i64 = 1;
        loop {
            term = term.mul(&t2);
            if term.is_zero() {
                break;
            }
            let contrib = term.div_i64(2 * k + 1);
            acc = acc.add(&contrib);
            if contrib.abs_le_pow2(-(scale as i64)) {
                break;
            }
            k += 1;
        }
        let lny = acc.mul_i64(2);
        if e == 0 {
            lny
        } else {
            lny.add(&self.ln2().mul_i64(e))
        }
    }

    /// exp(x) with argument reduction by repeated halving.
    pub fn exp(&self, x: &BigFloat) -> BigFloat {
        let scale = self.scale;
        let bits_above = x.log2_floor().map(|b| b + 8).unwrap_or(0).max(0) as u32;
        let r = x.shr(bits_above);
        let mut term = BigFloat::one(scale);
        let mut acc = BigFloat::one(scale);
        let mut k: i64 = 1;
        loop {
            term = term.mul(&r).div_i64(k);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
            if term.abs_le_pow2(-(scale as i64)) {
                break;
            }
            k += 1;
        }
        for _ in 0..bits_above {
            acc = acc.mul(&acc);
        }
        acc
    }

    /// x^y = exp(y ln x) for x > 0.
    pub fn pow(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        if y.is_zero() {
            return BigFloat::one(self.scale);
        }
        self.exp(&self.ln(x).mul(y))
    }

    /// x^s for rational s and rational x > 0. Integer exponents of moderate
    /// size short-circuit to exact rational powering.
    pub fn pow_rat(&self, x: &Rat, s: &Rat) -> BigFloat {
        assert!(x.is_positive(), "pow_rat requires x > 0");
        if s.is_integer() {
            if let Some(e) = s.numer().to_i64() {
                if e.unsigned_abs() <= 4096 {
                    let mut acc = Rat::one();
                    for _ in 0..e.unsigned_abs() {
                        acc *= x;
                    }
                    if e < 0 {
                        acc = acc.recip();
                    }
                    return self.from_rat(&acc);
                }
            }
        }
        let xb = self.from_rat(x);
        let sb = self.from_rat(s);
        self.pow(&xb, &sb)
    }
}

/// First-order jet `(f, df/ds)` for differentiating scalar expressions with
/// respect to a parameter s.
#[derive(Clone, Debug)]
pub struct Jet {
    pub val: BigFloat,
    pub ds: BigFloat,
}

impl Jet {
    pub fn constant(val: BigFloat) -> Self {
        let scale = val.scale();
        Jet { val, ds: BigFloat::zero(scale) }
    }

    /// The jet of the variable s itself.
    pub fn variable(val: BigFloat) -> Self {
        let scale = val.scale();
        Jet { val, ds: BigFloat::one(scale) }
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        Jet { val: self.val.add(&rhs.val), ds: self.ds.add(&rhs.ds) }
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        Jet { val: self.val.sub(&rhs.val), ds: self.ds.sub(&rhs.ds) }
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        Jet {
            val: self.val.mul(&rhs.val),
            ds: self.val.mul(&rhs.ds).add(&self.ds.mul(&rhs.val)),
        }
    }

    pub fn div(&self, rhs: &Jet) -> Jet {
        let val = self.val.div(&rhs.val);
        let ds = self.ds.sub(&val.mul(&rhs.ds)).div(&rhs.val);
        Jet { val, ds }
    }

    pub fn neg(&self) -> Jet {
        Jet { val: self.val.neg(), ds: self.ds.neg() }
    }

    pub fn mul_i64(&self, k: i64) -> Jet {
        Jet { val: self.val.mul_i64(k), ds: self.ds.mul_i64(k) }
    }

    pub fn div_i64(&self, k: i64) -> Jet {
        Jet { val: self.val.div_i64(k), ds: self.ds.div_i64(k) }
    }

    /// `b^u` for a positive constant base with given power `b^u0` and log
    /// `ln b`: derivative is `u' ln(b) b^u0`.
    pub fn pow_const_base(b_pow_u0: BigFloat, ln_b: &BigFloat, u: &Jet) -> Jet {
        let ds = u.ds.mul(ln_b).mul(&b_pow_u0);
        Jet { val: b_pow_u0, ds }
    }
}

/// Continued-fraction rational reconstruction: a convergent `p/q` of `x`
/// with `q <= max_den` and `|x - p/q| < tol`, or `None`.
pub fn rational_snap(x: &BigFloat, max_den: &BigInt, tol: &Rat) -> Option<Rat> {
    let target = x.to_rat();
    let mut best: Option<Rat> = None;
    let mut num = target.numer().clone();
    let mut den = target.denom().clone();
    let mut p_prev = BigInt::one();
    let mut q_prev = BigInt::zero();
    let mut p = num.div_euclid(&den);
    let mut q = BigInt::one();
    let mut rem = &num - &p * &den;
    let check = |p: &BigInt, q: &BigInt, best: &mut Option<Rat>| {
        let cand = Rat::new(p.clone(), q.clone());
        if (&cand - &target).abs() < *tol {
            *best = Some(cand);
        }
    };
    check(&p, &q, &mut best);
    while !rem.is_zero() {
        num = den;
        den = rem;
        let a = num.div_euclid(&den);
        rem = &num - &a * &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        if &q > max_den {
            break;
        }
        check(&p, &q, &mut best);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::{rat, rat_int};

    const S: u32 = 192;

    #[test]
    fn arithmetic_roundtrip() {
        let ops = RealOps::new(S);
        let a = ops.from_rat(&rat(22, 7));
        let b = ops.from_rat(&rat(-3, 11));
        let c = a.mul(&b).div(&b);
        assert!(c.sub(&a).abs_le_pow2(-(S as i64) + 4));
    }

    #[test]
    fn pi_matches_reference() {
        let ops = RealOps::new(S);
        let pi = ops.pi();
        assert!((pi.to_f64() - core::f64::consts::PI).abs() < 1e-15);
        // 40-digit reference: 3.141592653589793238462643383279502884197
        let reference = Rat::new(
            "3141592653589793238462643383279502884197".parse().unwrap(),
            BigInt::from(10u32).pow(39),
        );
        let diff = pi.sub(&ops.from_rat(&reference));
        assert!(diff.abs_le_pow2(-128), "pi mismatch: {:e}", diff.to_f64());
    }

    #[test]
    fn ln_exp_inverse() {
        let ops = RealOps::new(S);
        for v in [rat(3, 2), rat_int(2), rat(10, 3), rat_int(100)] {
            let x = ops.from_rat(&v);
            let y = ops.exp(&ops.ln(&x));
            assert!(y.sub(&x).abs_le_pow2(-(S as i64) + 24), "v={v}");
        }
        let ln2 = ops.ln2();
        let ln2b = ops.ln(&ops.from_i64(2));
        assert!(ln2.sub(&ln2b).abs_le_pow2(-(S as i64) + 8));
        assert!((ln2.to_f64() - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn pow_rat_matches_f64() {
        let ops = RealOps::new(S);
        let got = ops.pow_rat(&rat(7, 2), &rat(-5, 2)).to_f64();
        assert!((got - 3.5f64.powf(-2.5)).abs() < 1e-12);
        let got2 = ops.pow_rat(&rat(3, 2), &rat_int(-3)).to_f64();
        assert!((got2 - 1.5f64.powi(-3)).abs() < 1e-15);
    }

    #[test]
    fn sqrt_works() {
        let ops = RealOps::new(S);
        let x = ops.from_i64(5);
        let r = x.sqrt();
        assert!(r.mul(&r).sub(&x).abs_le_pow2(-(S as i64) + 8));
    }

    #[test]
    fn jets_differentiate() {
        let ops = RealOps::new(S);
        // d/ds [s^2] at s=3 is 6
        let s = Jet::variable(ops.from_i64(3));
        let s2 = s.mul(&s);
        assert!((s2.ds.to_f64() - 6.0).abs() < 1e-15);
        // d/ds [2^s] at s=1 is 2 ln 2
        let ln2 = ops.ln2();
        let s1 = Jet::variable(ops.from_i64(1));
        let val = ops.exp(&ln2.mul(&s1.val));
        let p = Jet::pow_const_base(val, &ln2, &s1);
        assert!((p.ds.to_f64() - 2.0 * core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn snap_examples() {
        let ops = RealOps::new(S);
        let x = ops.from_rat(&rat(333333333333i64, 1000000000000i64));
        let snapped =
            rational_snap(&x, &BigInt::from(1000000u64), &rat(1, 1000000000)).expect("snaps");
        assert_eq!(snapped, rat(1, 3));

        let pi = ops.pi();
        let r = rational_snap(&pi, &BigInt::from(1000u64), &rat(1, 1_000_000_000_000i64));
        assert!(r.is_none());

        let x = ops.from_rat(&rat(13, 12));
        let snapped =
            rational_snap(&x, &BigInt::from(1000u64), &rat(1, 1_000_000_000i64)).unwrap();
        assert_eq!(snapped, rat(13, 12));
    }

    #[test]
    fn decimal_rendering() {
        let ops = RealOps::new(S);
        let x = ops.from_rat(&rat(-7, 4));
        assert_eq!(x.to_decimal_string(3), "-1.750");
        let y = ops.from_rat(&rat(1, 8));
        assert_eq!(y.to_decimal_string(4), "0.1250");
    }
}
