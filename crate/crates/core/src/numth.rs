//! Exact number-theory kernel: big rationals, primes, Kronecker and Hilbert
//! symbols, Bernoulli and generalized Bernoulli numbers.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for small integers as rationals.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumthError {
    /// The integer is not a fundamental discriminant of a real quadratic field.
    NotFundamental(i64),
    /// Zero argument where a nonzero rational is required.
    ZeroArgument,
}

impl fmt::Display for NumthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumthError::NotFundamental(d) => {
                write!(f, "{d} is not a fundamental discriminant of a real quadratic field")
            }
            NumthError::ZeroArgument => write!(f, "argument must be nonzero"),
        }
    }
}

/// Deterministic Miller-Rabin primality test, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Trial-division factorization; intended for the small integers that occur as
/// discriminants and levels.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, k: u32| {
        if k > 0 {
            out.push((p, k));
        }
    };
    let mut k = 0;
    while n % 2 == 0 {
        n /= 2;
        k += 1;
    }
    push(2, k);
    let mut p = 3u64;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        push(p, k);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// Sum-of-divisors function sigma_1.
pub fn sigma1(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .map(|(p, k)| {
            let mut s = 1u64;
            let mut pk = 1u64;
            for _ in 0..k {
                pk *= p;
                s += pk;
            }
            s
        })
        .product()
}

fn is_squarefree(n: u64) -> bool {
    factor(n).into_iter().all(|(_, k)| k == 1)
}

/// Fundamental discriminant of a real quadratic field: a positive integer
/// `d > 1` with either `d ≡ 1 mod 4` squarefree, or `d = 4m` with
/// `m ≡ 2, 3 mod 4` squarefree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalDiscriminant(u64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self, NumthError> {
        if d > 1 && is_fundamental(d as u64) {
            Ok(FundamentalDiscriminant(d as u64))
        } else {
            Err(NumthError::NotFundamental(d))
        }
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_fundamental(d: u64) -> bool {
    if d % 4 == 1 {
        is_squarefree(d)
    } else if d % 4 == 0 {
        let m = d / 4;
        (m % 4 == 2 || m % 4 == 3) && is_squarefree(m)
    } else {
        false
    }
}

/// All fundamental discriminants `1 < d < bound`, ascending.
pub fn fundamental_discriminants_below(bound: u64) -> Vec<FundamentalDiscriminant> {
    (2..bound)
        .filter(|&d| is_fundamental(d))
        .map(FundamentalDiscriminant)
        .collect()
}

/// The even quadratic character attached to a real quadratic field,
/// `chi(x) = (d/x)` as a Kronecker symbol. Completely multiplicative with
/// period `d`, and `chi(-1) = +1` since `d > 0`.
#[derive(Clone, Copy, Debug)]
pub struct QuadChar {
    modulus: FundamentalDiscriminant,
}

impl QuadChar {
    pub fn new(modulus: FundamentalDiscriminant) -> Self {
        QuadChar { modulus }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus.value()
    }

    pub fn eval(&self, x: i64) -> i32 {
        kronecker_i64(self.modulus.value() as i64, x)
    }
}

/// Kronecker symbol `(a|n)`, extended to all integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1i32;
    if n.sign() == Sign::Minus {
        n = -n;
        if a.sign() == Sign::Minus {
            result = -result;
        }
    }
    // Factor out twos from n; (a|2) depends on a mod 8.
    let mut twos = 0u32;
    while n.is_even() {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a.is_even() {
            return 0;
        }
        if twos % 2 == 1 {
            let r = (&a % 8i32 + 8i32) % 8i32;
            let r: i32 = r.try_into().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Now n is odd and positive: Jacobi symbol with reciprocity.
    if n.is_one() {
        return result;
    }
    a = ((&a % &n) + &n) % &n;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = (&n % 8i32).try_into().map(|r: i32| r).unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        let ra: i32 = (&a % 4i32).try_into().unwrap();
        let rn: i32 = (&n % 4i32).try_into().unwrap();
        if ra == 3 && rn == 3 {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

pub fn kronecker_i64(a: i64, n: i64) -> i32 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// A place of the rationals: a finite prime or the archimedean place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "oo"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Hilbert symbol `(a, b)_v` for nonzero rationals: `+1` iff
/// `z^2 = a x^2 + b y^2` has a nontrivial solution over the completion at `v`.
///
/// At odd primes the classical tame formula is used; at `v = 2` the symbol is
/// decided by an exhaustive primitive-solvability search modulo a power of two
/// past the Hensel lifting threshold.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> Result<i32, NumthError> {
    if a.is_zero() || b.is_zero() {
        return Err(NumthError::ZeroArgument);
    }
    // Multiply by denominator squares: the symbol only depends on square classes.
    let ai = a.numer() * a.denom();
    let bi = b.numer() * b.denom();
    Ok(match place {
        Place::Infinity => {
            if ai.sign() == Sign::Minus && bi.sign() == Sign::Minus {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => hilbert_two(&ai, &bi),
        Place::Prime(p) => hilbert_odd(&ai, &bi, p),
    })
}

fn split_valuation(x: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut v = 0u32;
    let mut u = x.clone();
    while (&u % &p).is_zero() {
        u /= &p;
        v += 1;
    }
    (v, u)
}

fn hilbert_odd(a: &BigInt, b: &BigInt, p: u64) -> i32 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    let pb = BigInt::from(p);
    let mut result = 1i32;
    if alpha % 2 == 1 && beta % 2 == 1 {
        // (-1|p)
        if p % 4 == 3 {
            result = -result;
        }
    }
    if beta % 2 == 1 {
        result *= kronecker(&u, &pb);
    }
    if alpha % 2 == 1 {
        result *= kronecker(&v, &pb);
    }
    result
}

/// Hilbert symbol at 2 by brute-force isotropy of `z^2 - a x^2 - b y^2` over
/// the 2-adic integers: search primitive solutions modulo `2^k` where `k`
/// exceeds the valuations of `a` and `b` by the explicit lifting margin.
fn hilbert_two(a: &BigInt, b: &BigInt) -> i32 {
    // Reduce valuations modulo squares so the search modulus stays small.
    let (va, ua) = split_valuation(a, 2);
    let (vb, ub) = split_valuation(b, 2);
    let a_red = &ua * BigInt::from(1i64 << (va % 2));
    let b_red = &ub * BigInt::from(1i64 << (vb % 2));
    let k = (va % 2) + (vb % 2) + 5;
    let modulus: i64 = 1 << k;
    let am = ((&a_red % modulus + modulus) % modulus).try_into().map(|x: i64| x).unwrap();
    let bm = ((&b_red % modulus + modulus) % modulus).try_into().map(|x: i64| x).unwrap();
    for x in 0..modulus {
        for y in 0..modulus {
            for z in 0..modulus {
                if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                    continue;
                }
                if (z * z - am * x * x - bm * y * y).rem_euclid(modulus) == 0 {
                    return 1;
                }
            }
        }
    }
    -1
}

/// The places that can carry a nontrivial Hilbert symbol for `(a, b)`:
/// infinity, 2, and the odd primes dividing the numerator or denominator of
/// either argument.
pub fn relevant_places(a: &Rat, b: &Rat) -> Vec<Place> {
    let mut primes: Vec<u64> = Vec::new();
    let mut push_primes = |x: &BigInt| {
        if let Ok(v) = u64::try_from(x.abs().clone()) {
            for (p, _) in factor(v) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
    };
    push_primes(a.numer());
    push_primes(a.denom());
    push_primes(b.numer());
    push_primes(b.denom());
    if !primes.contains(&2) {
        primes.push(2);
    }
    primes.sort_unstable();
    let mut places = Vec::with_capacity(primes.len() + 1);
    places.push(Place::Infinity);
    places.extend(primes.into_iter().map(Place::Prime));
    places
}

/// Bernoulli numbers `B_0 .. B_n` with the `B_1 = -1/2` convention, by the
/// defining recurrence `sum_k C(n+1, k) B_k = 0`.
pub fn bernoulli_seq(n: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n + 1);
    b.push(Rat::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(Rat::zero());
            continue;
        }
        // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
        let mut acc = Rat::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for k in 0..m {
            if !b[k].is_zero() {
                acc += &b[k] * Rat::from_integer(binom.clone());
            }
            // C(m+1, k+1) = C(m+1, k) * (m+1-k) / (k+1)
            binom = binom * BigInt::from((m + 1 - k) as u64) / BigInt::from((k + 1) as u64);
        }
        b.push(-acc / Rat::from_integer(BigInt::from((m + 1) as u64)));
    }
    b
}

/// Bernoulli number `B_n`, `B_1 = -1/2` convention.
pub fn bernoulli(n: usize) -> Rat {
    bernoulli_seq(n).pop().unwrap()
}

/// Generalized Bernoulli number `B_{n,chi} = q^{n-1} sum_{a=1}^{q} chi(a) B_n(a/q)`
/// where `B_n(x)` is the Bernoulli polynomial and `q` the conductor.
pub fn gen_bernoulli(chi: &QuadChar, n: u32) -> Rat {
    assert!(n >= 1, "gen_bernoulli requires n >= 1");
    let q = chi.modulus() as i64;
    let b = bernoulli_seq(n as usize);
    // B_n(x) = sum_k C(n,k) B_k x^{n-k}
    let mut total = Rat::zero();
    for a in 1..=q {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let x = rat(a, q);
        let mut poly = Rat::zero();
        let mut binom = BigInt::one();
        for k in 0..=(n as usize) {
            // term: C(n,k) B_k x^{n-k}
            let e = n as usize - k;
            let xe = pow_rat(&x, e as u32);
            poly += Rat::from_integer(binom.clone()) * &b[k] * xe;
            if k < n as usize {
                binom = binom * BigInt::from((n as usize - k) as u64) / BigInt::from((k + 1) as u64);
            }
        }
        let signed = if c > 0 { poly } else { -poly };
        total += signed;
    }
    let qn = pow_rat(&rat_int(q), n - 1);
    qn * total
}

pub fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}
