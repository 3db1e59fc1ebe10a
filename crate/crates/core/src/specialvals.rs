//! Arbitrary-precision evaluation of zeta and L-functions and their
//! s-derivatives, together with exact rational special values.
//!
//! A single Euler-Maclaurin engine, run on first-order jets in the variable s,
//! produces the Hurwitz zeta `zeta(s, x)`, its s-derivative, the digamma
//! function, and from those the Dirichlet L-series of real quadratic
//! characters. Truncation parameters are chosen adaptively so the certified
//! remainder stays below the requested precision with margin.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{rational_snap, BigFloat, Jet, Precision, RealOps};
use crate::numth::{
    bernoulli_seq, gen_bernoulli, rat, rat_int, sigma1, FundamentalDiscriminant, QuadChar, Rat,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialError {
    /// The Hurwitz zeta has its pole at s = 1.
    PoleAtOne,
    /// The requested certified error could not be reached within the
    /// truncation budget.
    PrecisionUnreachable,
    /// Argument outside the supported domain.
    DomainError,
}

impl fmt::Display for SpecialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialError::PoleAtOne => write!(f, "zeta(s, x) has a pole at s = 1"),
            SpecialError::PrecisionUnreachable => {
                write!(f, "certified error bound unreachable within truncation budget")
            }
            SpecialError::DomainError => write!(f, "argument outside supported domain"),
        }
    }
}

/// Jet-valued Euler-Maclaurin sum for the Hurwitz zeta.
///
/// Returns `(value, d/ds value)` of `zeta(s, x)` for rational `s != 1` and
/// rational `x > 0`, certified to absolute error `2^-err_bits` in the value
/// slot and `2^-(err_bits - 8)` in the derivative slot.
fn hurwitz_em(
    ops: &RealOps,
    s: &Rat,
    x: &Rat,
    err_bits: u32,
    bern: &[Rat],
) -> Result<Jet, SpecialError> {
    if s.is_one() {
        return Err(SpecialError::PoleAtOne);
    }
    if !x.is_positive() {
        return Err(SpecialError::DomainError);
    }
    let t = err_bits as i64;
    // Base point: N chosen so the Bernoulli tail decays geometrically before
    // the truncation order hits 2*pi*(x+N).
    let s_abs = s.abs().to_integer().to_i64().unwrap_or(64).unsigned_abs();
    let mut n_terms: u64 = (t as u64 / 4).max(16).max(s_abs + 2);
    loop {
        match hurwitz_em_fixed(ops, s, x, n_terms, err_bits, bern) {
            Some(jet) => return Ok(jet),
            None => {
                n_terms *= 2;
                if n_terms > 1 << 22 {
                    return Err(SpecialError::PrecisionUnreachable);
                }
            }
        }
    }
}

/// One Euler-Maclaurin attempt with a fixed base point `N`; `None` means the
/// correction terms stopped decreasing before reaching the target, so the
/// caller should retry with a larger `N`.
fn hurwitz_em_fixed(
    ops: &RealOps,
    s: &Rat,
    x: &Rat,
    n_terms: u64,
    err_bits: u32,
    bern: &[Rat],
) -> Option<Jet> {
    let target = -(err_bits as i64) - 8;
    let s_jet_at = |exp: &Rat| -> Rat { exp.clone() };
    let _ = s_jet_at;

    // Power sum: sum_{k=0}^{N-1} (x+k)^(-s), with d/ds = -ln(x+k) (x+k)^(-s).
    let mut sum = Jet::constant(ops.zero());
    let minus_s = -s.clone();
    for k in 0..n_terms {
        let base = x + rat_int(k as i64);
        let p = ops.pow_rat(&base, &minus_s);
        let lnb = ops.ln(&ops.from_rat(&base));
        let term = Jet { val: p.clone(), ds: lnb.mul(&p).neg() };
        sum = sum.add(&term);
    }

    let big = x + rat_int(n_terms as i64); // N + x
    let ln_big = ops.ln(&ops.from_rat(&big));

    // Tail head: (x+N)^(1-s)/(s-1) + (x+N)^(-s)/2, via jets.
    let s_jet = Jet {
        val: ops.from_rat(s),
        ds: ops.one(),
    };
    let one = Jet::constant(ops.one());
    let one_minus_s = one.sub(&s_jet);
    let pow_1ms = Jet::pow_const_base(
        ops.pow_rat(&big, &(Rat::one() - s)),
        &ln_big,
        &one_minus_s,
    );
    let s_minus_1 = s_jet.sub(&one);
    sum = sum.add(&pow_1ms.div(&s_minus_1));

    let minus_s_jet = s_jet.neg();
    let pow_ms = Jet::pow_const_base(ops.pow_rat(&big, &minus_s.clone()), &ln_big, &minus_s_jet);
    sum = sum.add(&pow_ms.div_i64(2));

    // Bernoulli corrections: sum_j B_{2j}/(2j)! (s)_{2j-1} (x+N)^{-s-2j+1}.
    // (s)_{2j-1} = s (s+1) ... (s+2j-2) built incrementally as a jet.
    let inv_big2 = ops.from_rat(&(Rat::one() / (&big * &big)));
    let mut pow_term = Jet::pow_const_base(
        ops.pow_rat(&big, &(Rat::one() - s)),
        &ln_big,
        &one_minus_s,
    ); // (x+N)^{1-s}; term j uses (x+N)^{-s-2j+1} = this / (x+N)^{2j}
    let mut poch = s_jet.clone(); // after j=1 loop iteration this is (s)_{1} = s
    let mut factorial = Rat::one(); // (2j)!
    let mut prev_mag: Option<i64> = None;
    let m_max = (bern.len() - 1) / 2;
    for j in 1..=m_max {
        // update factorial to (2j)!
        factorial *= rat_int((2 * j as i64 - 1) * 2 * j as i64);
        // pow_term: multiply by (x+N)^{-2}
        pow_term = Jet {
            val: pow_term.val.mul(&inv_big2),
            ds: pow_term.ds.mul(&inv_big2),
        };
        if j > 1 {
            // extend Pochhammer by (s + 2j - 3)(s + 2j - 2)
            let a = s_jet.add(&Jet::constant(ops.from_i64(2 * j as i64 - 3)));
            let b = s_jet.add(&Jet::constant(ops.from_i64(2 * j as i64 - 2)));
            poch = poch.mul(&a).mul(&b);
        }
        let coeff = ops.from_rat(&(&bern[2 * j] / &factorial));
        let term = Jet {
            val: coeff.mul(&poch.val).mul(&pow_term.val),
            ds: coeff.mul(&poch.val.mul(&pow_term.ds).add(&poch.ds.mul(&pow_term.val))),
        };
        sum = sum.add(&term);
        // Magnitude of this correction controls the certified remainder: for
        // real s the remainder is bounded by the next correction term, and the
        // terms must be decreasing for the bound to apply.
        let mag = term
            .val
            .log2_floor()
            .unwrap_or(i64::MIN / 2)
            .max(term.ds.log2_floor().unwrap_or(i64::MIN / 2));
        if mag <= target {
            return Some(sum);
        }
        if let Some(prev) = prev_mag {
            if mag >= prev {
                return None; // diverging regime; need larger N
            }
        }
        prev_mag = Some(mag);
    }
    None
}

fn bernoulli_for(err_bits: u32) -> Vec<Rat> {
    // Enough even Bernoulli numbers for the corrections at the adaptive N.
    let m = ((err_bits as usize) / 2 + 24).max(32);
    bernoulli_seq(2 * m)
}

/// Hurwitz zeta `zeta(s, x)` for rational `s != 1` and `x` in `(0, 1]`
/// (any positive rational is accepted), certified to `2^(8 - prec)`.
pub fn hurwitz_zeta(s: &Rat, x: &Rat, prec: Precision) -> Result<BigFloat, SpecialError> {
    let ops = RealOps::new(prec.guarded());
    let bern = bernoulli_for(prec.guarded());
    let jet = hurwitz_em(&ops, s, x, prec.bits() + 32, &bern)?;
    Ok(jet.val.with_scale(prec.bits()))
}

/// `d/ds zeta(s, x)`.
pub fn hurwitz_zeta_ds(s: &Rat, x: &Rat, prec: Precision) -> Result<BigFloat, SpecialError> {
    let ops = RealOps::new(prec.guarded());
    let bern = bernoulli_for(prec.guarded());
    let jet = hurwitz_em(&ops, s, x, prec.bits() + 32, &bern)?;
    Ok(jet.ds.with_scale(prec.bits()))
}

/// Riemann zeta at rational `s != 1`.
pub fn zeta(s: &Rat, prec: Precision) -> Result<BigFloat, SpecialError> {
    hurwitz_zeta(s, &Rat::one(), prec)
}

/// `zeta'(s)` at rational `s != 1`.
pub fn zeta_prime(s: &Rat, prec: Precision) -> Result<BigFloat, SpecialError> {
    hurwitz_zeta_ds(s, &Rat::one(), prec)
}

/// Digamma `psi(x)` for rational x > 0 by Euler-Maclaurin.
pub fn digamma(x: &Rat, prec: Precision) -> Result<BigFloat, SpecialError> {
    let ops = RealOps::new(prec.guarded());
    let bern = bernoulli_for(prec.guarded());
    let err_bits = prec.bits() + 32;
    let mut n_terms: u64 = (err_bits as u64 / 4).max(16);
    loop {
        match digamma_fixed(&ops, x, n_terms, err_bits, &bern) {
            Some(v) => return Ok(v.with_scale(prec.bits())),
            None => {
                n_terms *= 2;
                if n_terms > 1 << 22 {
                    return Err(SpecialError::PrecisionUnreachable);
                }
            }
        }
    }
}

fn digamma_fixed(
    ops: &RealOps,
    x: &Rat,
    n_terms: u64,
    err_bits: u32,
    bern: &[Rat],
) -> Option<BigFloat> {
    let target = -(err_bits as i64) - 8;
    // psi(x) = ln(x+N) - 1/(2(x+N)) - sum_{k<N} 1/(x+k) - sum_j B_{2j}/(2j (x+N)^{2j})
    let big = x + rat_int(n_terms as i64);
    let mut acc = ops.ln(&ops.from_rat(&big));
    acc = acc.sub(&ops.from_rat(&(Rat::one() / (&big * rat_int(2)))));
    let mut harmonic = Rat::zero();
    for k in 0..n_terms {
        harmonic += Rat::one() / (x + rat_int(k as i64));
    }
    acc = acc.sub(&ops.from_rat(&harmonic));
    let inv_big2 = Rat::one() / (&big * &big);
    let mut powr = Rat::one();
    let mut prev_mag: Option<i64> = None;
    let m_max = (bern.len() - 1) / 2;
    for j in 1..=m_max {
        powr *= &inv_big2;
        let term = &bern[2 * j] / (rat_int(2 * j as i64)) * &powr;
        let termf = ops.from_rat(&term);
        acc = acc.sub(&termf);
        let mag = termf.log2_floor().unwrap_or(i64::MIN / 2);
        if mag <= target {
            return Some(acc);
        }
        if let Some(prev) = prev_mag {
            if mag >= prev {
                return None;
            }
        }
        prev_mag = Some(mag);
    }
    None
}

/// Euler-Mascheroni constant, primary route: `gamma = -psi(1)`.
pub fn euler_gamma(prec: Precision) -> Result<BigFloat, SpecialError> {
    Ok(digamma(&Rat::one(), prec)?.neg())
}

/// Euler-Mascheroni constant by the Brent-McMillan Bessel-series algorithm;
/// an independent second route used as a cross-check oracle.
pub fn euler_gamma_brent_mcmillan(prec: Precision) -> Result<BigFloat, SpecialError> {
    // the (A,B)-form error is O(e^{-4n}); fixed-point headroom must absorb
    // the e^{2n} peak of the Bessel-type terms.
    let n = libm::ceil((prec.bits() as f64 + 48.0) * 0.693147 / 4.0) as i64 + 4;
    let scale = prec.guarded() + (3 * n as u32) + 32;
    let ops = RealOps::new(scale);
    let nf = ops.from_i64(n);
    let mut a_term = ops.one(); // (n^k / k!)^2 at k=0
    let mut a_sum = ops.zero(); // sum a_term * H_k
    let mut b_sum = ops.one();
    let mut h = ops.zero();
    let mut k: i64 = 1;
    loop {
        // update term: *= (n/k)^2
        a_term = a_term.mul(&nf).mul(&nf).div_i64(k).div_i64(k);
        h = h.add(&ops.one().div_i64(k));
        let contrib_b = a_term.clone();
        let contrib_a = a_term.mul(&h);
        a_sum = a_sum.add(&contrib_a);
        b_sum = b_sum.add(&contrib_b);
        if k > 2 * n && contrib_a.abs_le_pow2(-(scale as i64) + 2) {
            break;
        }
        k += 1;
        if k > 100_000 {
            return Err(SpecialError::PrecisionUnreachable);
        }
    }
    let gamma = a_sum.div(&b_sum).sub(&ops.ln(&nf));
    Ok(gamma.with_scale(prec.bits()))
}

/// `zeta'(-1)` via the functional equation:
/// `zeta'(-1) = -(1/12) (ln 2pi + gamma - 1 - zeta'(2)/zeta(2))`.
pub fn zeta_prime_minus1(prec: Precision) -> Result<BigFloat, SpecialError> {
    let work = Precision::new(prec.bits() + 16);
    let ops = RealOps::new(work.guarded());
    let two_pi = ops.pi().mul_i64(2);
    let ln_2pi = ops.ln(&two_pi).with_scale(work.bits());
    let gamma = euler_gamma(work)?;
    let z2 = zeta(&rat_int(2), work)?;
    let zp2 = zeta_prime(&rat_int(2), work)?;
    let one = BigFloat::one(work.bits());
    let bracket = ln_2pi.add(&gamma).sub(&one).sub(&zp2.div(&z2));
    Ok(bracket.div_i64(-12).with_scale(prec.bits()))
}

/// Dirichlet L-function `L(s, chi_F)` for rational `s > 0`, via
/// `L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)`; at `s = 1` the digamma
/// route is used (the pole cancels since the character is nontrivial).
pub fn dirichlet_l(
    s: &Rat,
    d: &FundamentalDiscriminant,
    prec: Precision,
) -> Result<BigFloat, SpecialError> {
    if !s.is_positive() {
        return Err(SpecialError::DomainError);
    }
    let chi = QuadChar::new(*d);
    let q = d.value() as i64;
    let work = prec.guarded();
    let ops = RealOps::new(work);
    if s.is_one() {
        // L(1, chi) = -q^{-1} sum_a chi(a) psi(a/q)
        let inner_prec = Precision::new(prec.bits() + 32);
        let mut acc = ops.zero();
        for a in 1..q {
            let c = chi.eval(a);
            if c == 0 {
                continue;
            }
            let psi = digamma(&rat(a, q), inner_prec)?.with_scale(work);
            acc = if c > 0 { acc.sub(&psi) } else { acc.add(&psi) };
        }
        return Ok(acc.div_i64(q).with_scale(prec.bits()));
    }
    let bern = bernoulli_for(work);
    let err_bits = prec.bits() + 32;
    let mut acc = Jet::constant(ops.zero());
    for a in 1..q {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let jet = hurwitz_em(&ops, s, &rat(a, q), err_bits, &bern)?;
        acc = if c > 0 { acc.add(&jet) } else { acc.sub(&jet) };
    }
    // multiply by q^{-s}
    let qpow = ops.pow_rat(&rat_int(q), &(-s.clone()));
    Ok(acc.val.mul(&qpow).with_scale(prec.bits()))
}

/// `d/ds L(s, chi_F)` for rational `s > 0, s != 1`.
pub fn dirichlet_l_ds(
    s: &Rat,
    d: &FundamentalDiscriminant,
    prec: Precision,
) -> Result<BigFloat, SpecialError> {
    if !s.is_positive() || s.is_one() {
        return Err(SpecialError::DomainError);
    }
    let chi = QuadChar::new(*d);
    let q = d.value() as i64;
    let work = prec.guarded();
    let ops = RealOps::new(work);
    let bern = bernoulli_for(work);
    let err_bits = prec.bits() + 32;
    let mut acc = Jet::constant(ops.zero());
    for a in 1..q {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let jet = hurwitz_em(&ops, s, &rat(a, q), err_bits, &bern)?;
        acc = if c > 0 { acc.add(&jet) } else { acc.sub(&jet) };
    }
    // d/ds [q^{-s} f(s)] = q^{-s} (f'(s) - ln q f(s))
    let qpow = ops.pow_rat(&rat_int(q), &(-s.clone()));
    let lnq = ops.ln(&ops.from_i64(q));
    let out = qpow.mul(&acc.ds.sub(&lnq.mul(&acc.val)));
    Ok(out.with_scale(prec.bits()))
}

/// Logarithmic derivative of the Dedekind zeta of the real quadratic field at
/// `s = 2`: `zeta'(2)/zeta(2) + L'(2, chi_F)/L(2, chi_F)`.
pub fn zeta_f_logderiv_at_2(
    d: &FundamentalDiscriminant,
    prec: Precision,
) -> Result<BigFloat, SpecialError> {
    let work = Precision::new(prec.bits() + 16);
    let two = rat_int(2);
    let z = zeta(&two, work)?;
    let zp = zeta_prime(&two, work)?;
    let l = dirichlet_l(&two, d, work)?;
    let lp = dirichlet_l_ds(&two, d, work)?;
    Ok(zp.div(&z).add(&lp.div(&l)).with_scale(prec.bits()))
}

/// Exact `zeta_F(-1) = B_{2,chi_F} / 24` via the generalized Bernoulli number.
pub fn zeta_f_minus1(d: &FundamentalDiscriminant) -> Rat {
    let chi = QuadChar::new(*d);
    gen_bernoulli(&chi, 2) / rat_int(24)
}

/// Exact `zeta_F(-1)` by Siegel's classical divisor sum:
/// `(1/60) sum_{b^2 < d, b^2 = d mod 4} sigma_1((d - b^2)/4)`.
pub fn siegel_zeta_f_minus1(d: &FundamentalDiscriminant) -> Rat {
    let dv = d.value() as i64;
    let mut total: u64 = 0;
    let mut b = -(libm::sqrt(dv as f64) as i64) - 1;
    while b * b >= dv {
        b += 1;
    }
    while b * b < dv {
        if (dv - b * b) % 4 == 0 {
            total += sigma1(((dv - b * b) / 4) as u64);
        }
        b += 1;
    }
    Rat::new(BigInt::from(total), BigInt::from(60))
}

/// `zeta_F(2) = zeta(2) L(2, chi_F)`, numerically.
pub fn zeta_f_at_2(d: &FundamentalDiscriminant, prec: Precision) -> Result<BigFloat, SpecialError> {
    let work = Precision::new(prec.bits() + 16);
    let z = zeta(&rat_int(2), work)?;
    let l = dirichlet_l(&rat_int(2), d, work)?;
    Ok(z.mul(&l).with_scale(prec.bits()))
}

/// The rationality witness `zeta_F(2) d^{3/2} / pi^4`, snapped to a rational
/// with denominator at most `max_den` at absolute tolerance `tol`.
///
/// The exact value, forced by the functional equation, is `4 zeta_F(-1)`.
pub fn zeta_f_rationality_witness(
    d: &FundamentalDiscriminant,
    prec: Precision,
    max_den: &BigInt,
    tol: &Rat,
) -> Result<Option<Rat>, SpecialError> {
    let work = Precision::new(prec.bits() + 16);
    let ops = RealOps::new(work.guarded());
    let zf2 = zeta_f_at_2(d, work)?.with_scale(work.guarded());
    let dv = d.value() as i64;
    let d32 = ops.from_i64(dv).sqrt().mul(&ops.from_i64(dv));
    let pi = ops.pi();
    let pi4 = pi.mul(&pi);
    let pi4 = pi4.mul(&pi4);
    let witness = zf2.mul(&d32).div(&pi4).with_scale(prec.bits());
    Ok(rational_snap(&witness, max_den, tol))
}

pub use crate::bigfloat::rational_snap as snap;
