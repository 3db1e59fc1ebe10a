//! Quaternion algebras `(a,b / Q)`, their ramification sets, deterministic
//! selection of a rational algebra with prescribed ramification, and the
//! associated four-dimensional quadratic space.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::numth::{
    hilbert_symbol, is_prime, kronecker_i64, rat_int, FundamentalDiscriminant, NumthError, Place,
    Rat,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuatError {
    /// Both structure constants negative: the algebra is definite.
    DefiniteAlgebra,
    /// A requested prime is split in the quadratic field, or otherwise invalid.
    InvalidPrime(u64),
    /// Empty or repeated prime list.
    BadPrimeList,
    /// No structure constants found within the search height bound.
    SearchBoundExceeded,
    Numth(NumthError),
}

impl fmt::Display for QuatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuatError::DefiniteAlgebra => write!(f, "definite quaternion algebra rejected"),
            QuatError::InvalidPrime(p) => write!(f, "invalid prime {p} for this discriminant"),
            QuatError::BadPrimeList => write!(f, "prime list must be nonempty and distinct"),
            QuatError::SearchBoundExceeded => write!(f, "search height bound exceeded"),
            QuatError::Numth(e) => write!(f, "{e}"),
        }
    }
}

impl From<NumthError> for QuatError {
    fn from(e: NumthError) -> Self {
        QuatError::Numth(e)
    }
}

/// Quaternion algebra with basis `1, i, j, k`, `i^2 = a`, `j^2 = b`,
/// `k = ij = -ji`, so `k^2 = -ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub a: Rat,
    pub b: Rat,
}

impl QuaternionAlgebra {
    pub fn new(a: Rat, b: Rat) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::Numth(NumthError::ZeroArgument));
        }
        Ok(QuaternionAlgebra { a, b })
    }

    pub fn elt(&self, coords: [Rat; 4]) -> QuatElt {
        QuatElt { coords }
    }

    pub fn one(&self) -> QuatElt {
        self.elt([rat_int(1), rat_int(0), rat_int(0), rat_int(0)])
    }

    /// Product in the basis `1, i, j, k`.
    pub fn mul(&self, x: &QuatElt, y: &QuatElt) -> QuatElt {
        let (a, b) = (&self.a, &self.b);
        let [w1, x1, y1, z1] = &x.coords;
        let [w2, x2, y2, z2] = &y.coords;
        let ab = a * b;
        let w = w1 * w2 + a * (x1 * x2) + b * (y1 * y2) - &ab * (z1 * z2);
        let xi = w1 * x2 + x1 * w2 - b * (y1 * z2) + b * (z1 * y2);
        let yj = w1 * y2 + y1 * w2 + a * (x1 * z2) - a * (z1 * x2);
        let zk = w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2;
        QuatElt { coords: [w, xi, yj, zk] }
    }

    /// Main involution: `1, i, j, k -> 1, -i, -j, -k`.
    pub fn conj(&self, x: &QuatElt) -> QuatElt {
        let [w, xi, yj, zk] = &x.coords;
        QuatElt { coords: [w.clone(), -xi, -yj, -zk] }
    }

    /// Reduced norm: `Nrd(x) = x conj(x) = w^2 - a x^2 - b y^2 + ab z^2`.
    pub fn nrd(&self, x: &QuatElt) -> Rat {
        let [w, xi, yj, zk] = &x.coords;
        w * w - &self.a * (xi * xi) - &self.b * (yj * yj) + &self.a * &self.b * (zk * zk)
    }

    /// Reduced trace: `Trd(x) = x + conj(x) = 2w`.
    pub fn trd(&self, x: &QuatElt) -> Rat {
        &x.coords[0] * rat_int(2)
    }
}

/// Element of a quaternion algebra in the `1, i, j, k` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatElt {
    pub coords: [Rat; 4],
}

/// Finite set of ramified places; always of even cardinality by the product
/// formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationSet {
    pub places: Vec<Place>,
}

impl RamificationSet {
    pub fn contains(&self, p: Place) -> bool {
        self.places.contains(&p)
    }

    pub fn finite_primes(&self) -> Vec<u64> {
        self.places
            .iter()
            .filter_map(|p| match p {
                Place::Prime(q) => Some(*q),
                Place::Infinity => None,
            })
            .collect()
    }

    pub fn is_indefinite(&self) -> bool {
        !self.contains(Place::Infinity)
    }
}

/// The set of places where the algebra is division:
/// `{ v : (a, b)_v = -1 }` over infinity and the primes dividing `2ab`.
pub fn ramified_places(alg: &QuaternionAlgebra) -> RamificationSet {
    let mut places = Vec::new();
    for v in crate::numth::relevant_places(&alg.a, &alg.b) {
        if hilbert_symbol(&alg.a, &alg.b, v).unwrap() == -1 {
            places.push(v);
        }
    }
    RamificationSet { places }
}

const SEARCH_HEIGHT_BOUND: i64 = 10_000;

fn is_squarefree_i64(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        while m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Deterministic choice of an indefinite rational quaternion algebra whose
/// finite ramification is the given split primes, padded by the smallest
/// non-split prime when the count is odd. Searches squarefree `(a, b)` by
/// increasing `max(|a|, |b|)`.
pub fn find_b0(
    d: &FundamentalDiscriminant,
    split_primes: &[u64],
) -> Result<QuaternionAlgebra, QuatError> {
    if split_primes.is_empty() {
        return Err(QuatError::BadPrimeList);
    }
    let mut seen = Vec::new();
    for &p in split_primes {
        if seen.contains(&p) {
            return Err(QuatError::BadPrimeList);
        }
        seen.push(p);
        if !is_prime(p) || kronecker_i64(d.value() as i64, p as i64) != 1 {
            return Err(QuatError::InvalidPrime(p));
        }
    }
    let mut target: Vec<u64> = split_primes.to_vec();
    if target.len() % 2 == 1 {
        // pad with the least prime that is non-split in the quadratic field
        let mut q = 2u64;
        loop {
            if is_prime(q)
                && kronecker_i64(d.value() as i64, q as i64) != 1
                && !target.contains(&q)
            {
                break;
            }
            q += 1;
        }
        target.push(q);
    }
    target.sort_unstable();
    let mut target_places: Vec<Place> = target.iter().map(|&p| Place::Prime(p)).collect();
    target_places.sort_unstable();

    for h in 1..=SEARCH_HEIGHT_BOUND {
        for a in -h..=h {
            for b in -h..=h {
                if a.abs().max(b.abs()) != h || a == 0 || b == 0 {
                    continue;
                }
                if a < 0 && b < 0 {
                    continue; // definite
                }
                if !is_squarefree_i64(a) || !is_squarefree_i64(b) {
                    continue;
                }
                let alg = QuaternionAlgebra { a: rat_int(a), b: rat_int(b) };
                let ram = ramified_places(&alg);
                let mut got = ram.places.clone();
                got.sort_unstable();
                if got == target_places {
                    return Ok(alg);
                }
            }
        }
    }
    Err(QuatError::SearchBoundExceeded)
}

/// Gram matrix of the four-dimensional quadratic space attached to an
/// indefinite algebra and a real quadratic discriminant:
/// `diag(1, -d a, -d b, d a b)`, of signature (2,2) with determinant
/// congruent to `d` modulo squares.
pub fn v0_gram(alg: &QuaternionAlgebra, d: &FundamentalDiscriminant) -> Result<[Rat; 4], QuatError> {
    if alg.a.is_negative() && alg.b.is_negative() {
        return Err(QuatError::DefiniteAlgebra);
    }
    let dv = rat_int(d.value() as i64);
    Ok([
        rat_int(1),
        -&dv * &alg.a,
        -&dv * &alg.b,
        &dv * &alg.a * &alg.b,
    ])
}

/// Signature of a diagonal form.
pub fn diag_signature(diag: &[Rat]) -> (usize, usize) {
    let pos = diag.iter().filter(|x| x.is_positive()).count();
    let neg = diag.iter().filter(|x| x.is_negative()).count();
    (pos, neg)
}
