//! Discriminant forms of even lattices and the Weil representation of the
//! metaplectic group on the group ring of the discriminant group.
//!
//! Here a lattice matrix is read as the *bilinear* gram matrix of an even
//! lattice (even diagonal); the quadratic form on cosets is
//! `q(mu) = mu^T G mu mod 2Z`, valued in `Q/2Z`, so that the theta exponents
//! are `q/2 mod 1`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::clifford::QuadLattice;
use crate::linalg::smith_normal_form;
use crate::numth::{rat_int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeilError {
    /// Discriminant forms here require an even lattice.
    EvenLatticeRequired,
    /// Unimodular or degenerate input where a finite group was expected.
    DegenerateLattice,
}

impl fmt::Display for WeilError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeilError::EvenLatticeRequired => write!(f, "even lattice required"),
            WeilError::DegenerateLattice => write!(f, "lattice must be nondegenerate"),
        }
    }
}

/// `e(x) = exp(2 pi i x)` for rational x.
pub fn e_of(x: &Rat) -> Complex64 {
    let frac = x - x.floor();
    let t = 2.0 * core::f64::consts::PI * frac.numer().to_f64().unwrap_or(0.0)
        / frac.denom().to_f64().unwrap_or(1.0);
    Complex64::new(libm::cos(t), libm::sin(t))
}

/// Finite quadratic group `L'/L` of an even lattice, with its `Q/2Z`-valued
/// quadratic form and `Q/Z`-valued bilinear form.
#[derive(Debug)]
pub struct DiscriminantForm {
    n: usize,
    gram: Vec<Vec<i64>>,
    /// Cyclic orders `d_1 | d_2 | ...`, nontrivial entries only.
    pub cyclic_orders: Vec<u64>,
    /// Canonical coset representatives in `L tensor Q`, coordinates in `[0,1)`.
    pub elements: Vec<Vec<Rat>>,
}

impl DiscriminantForm {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Canonical representative: coordinates reduced into `[0, 1)`.
    pub fn canonical(&self, v: &[Rat]) -> Vec<Rat> {
        v.iter().map(|x| x - x.floor()).collect()
    }

    pub fn index_of(&self, v: &[Rat]) -> usize {
        let c = self.canonical(v);
        self.elements
            .iter()
            .position(|e| *e == c)
            .expect("vector is not in the dual lattice")
    }

    pub fn neg_index(&self, idx: usize) -> usize {
        let neg: Vec<Rat> = self.elements[idx].iter().map(|x| -x.clone()).collect();
        self.index_of(&neg)
    }

    pub fn add_indices(&self, a: usize, b: usize) -> usize {
        let sum: Vec<Rat> = self.elements[a]
            .iter()
            .zip(&self.elements[b])
            .map(|(x, y)| x + y)
            .collect();
        self.index_of(&sum)
    }

    /// Quadratic value `q(mu) = mu^T G mu`, reduced into `[0, 2)` (mod 2Z).
    pub fn qval(&self, idx: usize) -> Rat {
        let mu = &self.elements[idx];
        let mut acc = Rat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += &mu[i] * &mu[j] * rat_int(self.gram[i][j]);
            }
        }
        let two = rat_int(2);
        let m = &acc - (&acc / &two).floor() * &two;
        m
    }

    /// Bilinear value `b(mu, nu) = mu^T G nu` reduced into `[0, 1)` (mod Z).
    pub fn bval(&self, a: usize, b: usize) -> Rat {
        let mu = &self.elements[a];
        let nu = &self.elements[b];
        let mut acc = Rat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += &mu[i] * &nu[j] * rat_int(self.gram[i][j]);
            }
        }
        &acc - acc.floor()
    }

    /// Smallest positive integer `N` with `N q(mu) in 2Z` for all `mu`.
    pub fn level(&self) -> u64 {
        let mut level = BigInt::one();
        for idx in 0..self.order() {
            let q = self.qval(idx);
            // need N q = 0 mod 2: N = lcm(level, den(q/... )): q/2 must become integral
            let half = q / rat_int(2);
            let den = half.denom().clone();
            level = num_integer::Integer::lcm(&level, &den);
        }
        level.to_u64().unwrap()
    }
}

/// Build the discriminant form from the bilinear gram matrix of an even,
/// nondegenerate lattice.
pub fn discriminant_form(lat: &QuadLattice) -> Result<DiscriminantForm, WeilError> {
    let n = lat.rank();
    let gram = lat.gram_rows();
    for i in 0..n {
        if gram[i][i].rem_euclid(2) != 0 {
            return Err(WeilError::EvenLatticeRequired);
        }
    }
    let gram_big: Vec<Vec<BigInt>> = gram
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let det = lat.det();
    if det.is_zero() {
        return Err(WeilError::DegenerateLattice);
    }
    let smith = smith_normal_form(&gram_big);
    // L'/L is generated by mu_i = V e_i / d_i for the nontrivial d_i.
    let mut orders = Vec::new();
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for (i, d) in smith.diag.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        orders.push(d.to_u64().expect("order fits u64"));
        let gen: Vec<Rat> = (0..n)
            .map(|r| Rat::new(smith.v[r][i].clone(), d.clone()))
            .collect();
        gens.push(gen);
    }
    // enumerate all elements
    let mut elements: Vec<Vec<Rat>> = Vec::new();
    let total: u64 = orders.iter().product::<u64>().max(1);
    for mut idx in 0..total {
        let mut v = vec![Rat::zero(); n];
        for (gi, &d) in orders.iter().enumerate() {
            let a = idx % d;
            idx /= d;
            for r in 0..n {
                v[r] += rat_int(a as i64) * &gens[gi][r];
            }
        }
        let canon: Vec<Rat> = v.iter().map(|x| x - x.floor()).collect();
        elements.push(canon);
    }
    elements.sort();
    elements.dedup();
    debug_assert_eq!(elements.len() as u64, total);
    debug_assert_eq!(BigInt::from(total), det.abs());
    Ok(DiscriminantForm { n, gram, cyclic_orders: orders, elements })
}

/// Vector in the group ring of the discriminant group, indexed like
/// `DiscriminantForm::elements`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlVector {
    pub coeffs: Vec<Complex64>,
}

impl SlVector {
    pub fn zero(dim: usize) -> Self {
        SlVector { coeffs: vec![Complex64::new(0.0, 0.0); dim] }
    }

    pub fn basis(dim: usize, idx: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coeffs[idx] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_rational(v: &[Rat]) -> Self {
        SlVector {
            coeffs: v
                .iter()
                .map(|x| {
                    Complex64::new(
                        x.numer().to_f64().unwrap_or(0.0) / x.denom().to_f64().unwrap_or(1.0),
                        0.0,
                    )
                })
                .collect(),
        }
    }
}

/// The standard generator matrices of the Weil representation:
/// `T` diagonal with phases `e(q(mu)/2)`, and `S` the normalized finite
/// Fourier transform with the signature eighth root of unity.
pub struct WeilMatrices {
    pub t: Vec<Vec<Complex64>>,
    pub s: Vec<Vec<Complex64>>,
    pub signature_mod8: u32,
}

pub fn weil_matrices(d: &DiscriminantForm, signature: (usize, usize)) -> WeilMatrices {
    let n = d.order();
    let (bplus, bminus) = signature;
    let sig = (bplus as i64 - bminus as i64).rem_euclid(8) as u32;
    let mut t = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        let q = d.qval(i);
        t[i][i] = e_of(&(q / rat_int(2)));
    }
    // S e_mu = phase / sqrt(|D|) sum_nu e(-(mu, nu)) e_nu
    let phase = e_of(&Rat::new(
        BigInt::from(bminus as i64 - bplus as i64),
        BigInt::from(8),
    ));
    let norm = 1.0 / libm::sqrt(n as f64);
    let mut s = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for mu in 0..n {
        for nu in 0..n {
            let b = d.bval(mu, nu);
            s[nu][mu] = phase * norm * e_of(&(-b));
        }
    }
    WeilMatrices { t, s, signature_mod8: sig }
}

pub fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_vec(a: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn mat_sub_norm(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

pub fn is_unitary(a: &[Vec<Complex64>], tol: f64) -> bool {
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += a[k][i].conj() * a[k][j];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            if (acc - Complex64::new(expected, 0.0)).norm() > tol {
                return false;
            }
        }
    }
    true
}

pub fn mat_pow(a: &[Vec<Complex64>], e: u32) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for _ in 0..e {
        out = mat_mul(&out, a);
    }
    out
}

/// Milgram defect: `| sum_mu e(q(mu)/2) - sqrt(|D|) e(sig/8) |`.
pub fn milgram_defect(d: &DiscriminantForm, signature: (usize, usize)) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d.order() {
        acc += e_of(&(d.qval(i) / rat_int(2)));
    }
    let sig = signature.0 as i64 - signature.1 as i64;
    let expected =
        libm::sqrt(d.order() as f64) * e_of(&Rat::new(BigInt::from(sig), BigInt::from(8)));
    (acc - expected).norm()
}

/// Standard even test lattices used across the verification suites.
pub mod lattices {
    use super::QuadLattice;
    use alloc::vec;

    /// Hyperbolic plane `U`.
    pub fn hyperbolic() -> QuadLattice {
        QuadLattice::new(2, vec![0, 1, 1, 0])
    }

    /// Even lattice of signature (2,2) and determinant 5:
    /// `U + [[2,1],[1,-2]]`, whose discriminant character is the quadratic
    /// character of discriminant 5.
    pub fn sig22_det5() -> QuadLattice {
        QuadLattice::new(
            4,
            vec![
                0, 1, 0, 0, //
                1, 0, 0, 0, //
                0, 0, 2, 1, //
                0, 0, 1, -2,
            ],
        )
    }

    /// Signature (3,2) extension by a rank-one lattice with `q(e) = 1`
    /// (bilinear gram entry 2), matching the tensor split of theta series.
    pub fn sig32_det5() -> QuadLattice {
        QuadLattice::new(
            5,
            vec![
                0, 1, 0, 0, 0, //
                1, 0, 0, 0, 0, //
                0, 0, 2, 1, 0, //
                0, 0, 1, -2, 0, //
                0, 0, 0, 0, 2,
            ],
        )
    }

    /// `[[2]]`: discriminant group Z/2, the Jacobi theta lattice.
    pub fn rank1_two() -> QuadLattice {
        QuadLattice::new(1, vec![2])
    }

    /// diag(2, -2): Milgram sum with trivial total phase.
    pub fn diag2_m2() -> QuadLattice {
        QuadLattice::new(2, vec![2, 0, 0, -2])
    }
}
