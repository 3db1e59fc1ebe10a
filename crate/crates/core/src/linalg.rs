//! Exact linear algebra over the rationals and the integers, sized for the
//! small matrices that occur in lattice and Clifford computations.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numth::Rat;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if *self.at(i, j) != -self.at(j, i).clone() {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by fraction-free Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = Rat::one();
        for col in 0..n {
            // pivot
            let mut piv = None;
            for r in col..n {
                if !m[r * n + col].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let piv = match piv {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = m[col * n + col].clone();
            det *= &p;
            for r in (col + 1)..n {
                let factor = &m[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = &factor * &m[col * n + j];
                    m[r * n + j] -= sub;
                }
            }
        }
        det
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let mut piv = None;
            for r in rank..rows {
                if !m[r * cols + col].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            if let Some(piv) = piv {
                if piv != rank {
                    for j in 0..cols {
                        m.swap(piv * cols + j, rank * cols + j);
                    }
                }
                let p = m[rank * cols + col].clone();
                for r in 0..rows {
                    if r != rank && !m[r * cols + col].is_zero() {
                        let factor = &m[r * cols + col] / &p;
                        for j in 0..cols {
                            let sub = &factor * &m[rank * cols + j];
                            m[r * cols + j] -= sub;
                        }
                    }
                }
                rank += 1;
                if rank == rows {
                    break;
                }
            }
        }
        rank
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            let mut piv = None;
            for row in r..rows {
                if !m[row * cols + col].is_zero() {
                    piv = Some(row);
                    break;
                }
            }
            if let Some(piv) = piv {
                if piv != r {
                    for j in 0..cols {
                        m.swap(piv * cols + j, r * cols + j);
                    }
                }
                let p = m[r * cols + col].clone();
                for j in 0..cols {
                    m[r * cols + j] /= p.clone();
                }
                for row in 0..rows {
                    if row != r && !m[row * cols + col].is_zero() {
                        let factor = m[row * cols + col].clone();
                        for j in 0..cols {
                            let sub = &factor * &m[r * cols + j];
                            m[row * cols + j] -= sub;
                        }
                    }
                }
                pivot_col_of_row.push(col);
                r += 1;
                if r == rows {
                    break;
                }
            }
        }
        let pivot_cols = pivot_col_of_row;
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); cols];
            v[free] = Rat::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[row * cols + free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, by rational
    /// congruence diagonalization.
    pub fn symmetric_inertia(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        let mut active: Vec<usize> = (0..n).collect();
        while let Some(&first) = active.first() {
            // find a nonzero diagonal entry among active indices
            let diag_pivot = active.iter().copied().find(|&i| !m[idx(i, i)].is_zero());
            let pivot = match diag_pivot {
                Some(p) => p,
                None => {
                    // all active diagonals zero: look for off-diagonal entry
                    let mut found = None;
                    'outer: for (ai, &i) in active.iter().enumerate() {
                        for &j in active.iter().skip(ai + 1) {
                            if !m[idx(i, j)].is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    match found {
                        None => {
                            zero += active.len();
                            break;
                        }
                        Some((i, j)) => {
                            // congruence e_i <- e_i + e_j makes diagonal nonzero
                            for k in 0..n {
                                let add = m[idx(k, j)].clone();
                                m[idx(k, i)] += add;
                            }
                            for k in 0..n {
                                let add = m[idx(j, k)].clone();
                                m[idx(i, k)] += add;
                            }
                            i
                        }
                    }
                }
            };
            let _ = first;
            let p = m[idx(pivot, pivot)].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != pivot);
            // clear row/column of pivot within active block
            for &i in active.clone().iter() {
                if m[idx(i, pivot)].is_zero() {
                    continue;
                }
                let factor = &m[idx(i, pivot)] / &p;
                // e_i <- e_i - factor * e_pivot (congruence)
                for k in 0..n {
                    let sub = &factor * &m[idx(pivot, k)];
                    m[idx(i, k)] -= sub;
                }
                for k in 0..n {
                    let sub = &factor * &m[idx(k, pivot)];
                    m[idx(k, i)] -= sub;
                }
            }
        }
        (pos, neg, zero)
    }
}

/// Smith normal form of an integer matrix: returns the diagonal entries
/// `d_1 | d_2 | ...` (nonnegative) together with unimodular `U, V` such that
/// `U A V = D`.
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> Smith {
    let rows = a.len();
    let cols = a[0].len();
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = identity(rows);
    let mut v: Vec<Vec<BigInt>> = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // find smallest nonzero entry in the remaining block and move to (t, t)
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() {
                        let better = match &best {
                            None => true,
                            Some((bi, bj)) => m[i][j].abs() < m[*bi][*bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let (bi, bj) = match best {
                None => {
                    // remaining block is zero
                    for i in t..rows.min(cols) {
                        let _ = i;
                    }
                    return finish(m, u, v, rows, cols);
                }
                Some(b) => b,
            };
            m.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut m, t, bj);
            swap_cols(&mut v, t, bj);

            // reduce column and row
            let mut clean = true;
            for i in (t + 1)..rows {
                if !m[i][t].is_zero() {
                    let q = &m[i][t] / &m[t][t];
                    row_sub(&mut m, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    if !m[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !m[t][j].is_zero() {
                    let q = &m[t][j] / &m[t][t];
                    col_sub(&mut m, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    if !m[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                // ensure divisibility of the remaining block
                let mut fixed = true;
                'div: for i in (t + 1)..rows {
                    for j in (t + 1)..cols {
                        if !(&m[i][j] % &m[t][t]).is_zero() {
                            // add row i to row t to force another reduction round
                            let row = m[i].clone();
                            for (k, val) in row.into_iter().enumerate() {
                                m[t][k] += val;
                            }
                            let urow = u[i].clone();
                            for (k, val) in urow.into_iter().enumerate() {
                                u[t][k] += val;
                            }
                            fixed = false;
                            break 'div;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        t += 1;
    }
    finish(m, u, v, rows, cols)
}

fn finish(
    mut m: Vec<Vec<BigInt>>,
    mut u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
) -> Smith {
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -m[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
        diag.push(m[t][t].clone());
    }
    Smith { diag, u, v }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = m[source].clone();
    for (k, val) in src.into_iter().enumerate() {
        m[target][k] -= q * val;
    }
}

fn col_sub(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let sub = q * &row[source];
        row[target] -= sub;
    }
}
