//! Exact Gaussian elimination and integer lattice bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Rat, RatMat, RatVec};

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: RatMat,
    pub pivots: Vec<usize>,
}

pub fn rref(a: &RatMat) -> Rref {
    let mut m = a.clone();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = m.get(p, j).clone();
                m.set(p, j, m.get(r, j).clone());
                m.set(r, j, tmp);
            }
        }
        let inv = m.get(r, c).recip().expect("pivot is nonzero");
        for j in c..cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..cols {
                let v = m.get(i, j) - &f * m.get(r, j);
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, pivots }
}

/// Solution set `particular + span(kernel)` of a linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSet {
    pub particular: RatVec,
    pub kernel: Vec<RatVec>,
}

impl AffineSet {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Solves `a x = b`; `None` when the system is inconsistent.
pub fn solve_affine(a: &RatMat, b: &RatVec) -> Option<AffineSet> {
    let n = a.ncols();
    let aug = a.with_column(b);
    let Rref { matrix, pivots } = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = RatVec::zeros(n);
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = matrix.get(r, n).clone();
    }
    let kernel = kernel_from_rref(&matrix, &pivots, n);
    Some(AffineSet { particular, kernel })
}

/// Rational basis of `{x : a x = 0}`, one vector per free column.
pub fn nullspace(a: &RatMat) -> Vec<RatVec> {
    let Rref { matrix, pivots } = rref(a);
    kernel_from_rref(&matrix, &pivots, a.ncols())
}

fn kernel_from_rref(m: &RatMat, pivots: &[usize], n: usize) -> Vec<RatVec> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = RatVec::zeros(n);
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m.get(r, f);
            }
            v
        })
        .collect()
}

pub fn rank(a: &RatMat) -> usize {
    rref(a).pivots.len()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &RatMat) -> Option<RatMat> {
    let n = a.nrows();
    if n != a.ncols() {
        return None;
    }
    let mut aug = RatMat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n + i, Rat::one());
    }
    let Rref { matrix, pivots } = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, matrix.get(i, n + j).clone());
        }
    }
    Some(inv)
}

/// Unique solution of a square system, `None` when singular.
pub fn solve_square(a: &RatMat, b: &RatVec) -> Option<RatVec> {
    if a.nrows() != a.ncols() {
        return None;
    }
    let set = solve_affine(a, b)?;
    if set.kernel.is_empty() {
        Some(set.particular)
    } else {
        None
    }
}

pub fn is_in_row_space(a: &RatMat, v: &RatVec) -> bool {
    solve_affine(&a.transpose(), v).is_some()
}

fn to_int_row(v: &RatVec) -> Vec<BigInt> {
    let p = v.primitive();
    p.iter().map(|x| x.numer().clone()).collect()
}

fn int_to_rat(v: &[BigInt]) -> RatVec {
    v.iter().map(|x| Rat::from_bigint(x.clone())).collect()
}

/// Column operations making `rows` lower echelon; returns the unimodular transform `v`
/// (as columns) and the rank. The first `rank` columns of `rows * v` carry the pivots.
fn column_echelon(rows: &[Vec<BigInt>], n: usize) -> (Vec<Vec<BigInt>>, usize) {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pc = 0;
    for i in 0..m.len() {
        if pc == n {
            break;
        }
        loop {
            let best = (pc..n)
                .filter(|&j| !m[i][j].is_zero())
                .min_by(|&a, &b| m[i][a].abs().cmp(&m[i][b].abs()));
            let Some(best) = best else { break };
            swap_cols(&mut m, &mut v, pc, best);
            let mut done = true;
            for j in pc + 1..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[i][pc]);
                sub_col(&mut m, &mut v, j, pc, &q);
                if !m[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !m[i][pc].is_zero() {
            pc += 1;
        }
    }
    (v, pc)
}

fn swap_cols(m: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
    v.swap(a, b);
}

fn sub_col(m: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let d = &row[k] * q;
        row[j] -= d;
    }
    let col_k = v[k].clone();
    for (x, y) in v[j].iter_mut().zip(col_k) {
        *x -= y * q;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
pub fn row_hnf(rows: &[RatVec], n: usize) -> Vec<RatVec> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(to_int_row).collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..n {
        loop {
            let best = (0..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            let pivot = m.swap_remove(best);
            let mut clean = true;
            for row in m.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let q = row[c].div_floor(&pivot[c]);
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= y * &q;
                }
                if !row[c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                let mut p = pivot;
                if p[c].is_negative() {
                    for x in p.iter_mut() {
                        *x = -x.clone();
                    }
                }
                out.push(p);
                break;
            }
            m.push(pivot);
        }
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    for k in 0..out.len() {
        let c = out[k].iter().position(|x| !x.is_zero()).expect("nonzero pivot row");
        let pivot = out[k].clone();
        for row in out.iter_mut().take(k) {
            let q = row[c].div_floor(&pivot[c]);
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= y * &q;
            }
        }
    }
    out.iter().map(|r| int_to_rat(r)).collect()
}

/// Basis of the saturated lattice `ker(a) ∩ Z^n`, in Hermite normal form.
pub fn kernel_lattice(a: &RatMat) -> Vec<RatVec> {
    let n = a.ncols();
    let rows: Vec<Vec<BigInt>> = a.rows_iter().map(|r| to_int_row(&r)).collect();
    let (v, r) = column_echelon(&rows, n);
    let basis: Vec<RatVec> = v[r..].iter().map(|c| int_to_rat(c)).collect();
    row_hnf(&basis, n)
}

fn det(rows: &[RatVec]) -> Rat {
    let n = rows.len();
    let Ok(m) = RatMat::from_rows(n, rows.to_vec()) else {
        return Rat::zero();
    };
    let mut m = m;
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            for j in 0..n {
                let t = m.get(p, j).clone();
                m.set(p, j, m.get(c, j).clone());
                m.set(c, j, t);
            }
            d = -d;
        }
        let piv = m.get(c, c).clone();
        d *= &piv;
        for i in c + 1..n {
            let f = m.get(i, c) / &piv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = m.get(i, j) - &f * m.get(c, j);
                m.set(i, j, v);
            }
        }
    }
    d
}

/// Vectors completing a saturated lattice basis to a basis of `Z^n`.
///
/// Coordinate vectors are preferred when they suffice, so quotient coordinates
/// stay readable.
pub fn lattice_complement(basis: &[RatVec], n: usize) -> Vec<RatVec> {
    let k = basis.len();
    for combo in itertools::Itertools::combinations(0..n, n - k) {
        let mut rows = basis.to_vec();
        rows.extend(combo.iter().map(|&j| RatVec::unit(n, j)));
        if det(&rows).abs() == Rat::one() {
            return combo.iter().map(|&j| RatVec::unit(n, j)).collect();
        }
    }
    let rows: Vec<Vec<BigInt>> = basis.iter().map(to_int_row).collect();
    let (v, _) = column_echelon(&rows, n);
    let mut vm = RatMat::zeros(n, n);
    for (j, col) in v.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            vm.set(i, j, Rat::from_bigint(x.clone()));
        }
    }
    let inv = inverse(&vm).expect("unimodular transform");
    (k..n).map(|i| inv.row_vec(i)).collect()
}
