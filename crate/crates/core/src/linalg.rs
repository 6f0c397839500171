//! Dense exact linear algebra over rationals and integers.
//!
//! Matrices are row-major `Vec<Vec<Rational>>`. Sizes here are tiny (tens of
//! rows), so plain Gaussian elimination is used throughout.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form and the list of pivot columns.
pub fn rref(m: &[Vec<Rational>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m).1.len()
}

/// A basis of `{x : M x = 0}`, where `cols` is the number of columns of `M`
/// (needed when `M` has no rows).
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Matrix {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `M x = b`, or `None` if inconsistent. Free variables are
/// set to zero.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[row][cols].clone();
    }
    Some(x)
}

pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn transpose(m: &[Vec<Rational>], cols: usize) -> Matrix {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| crate::rational::dot(row, v)).collect()
}

/// A subgroup of `Z^n` kept in echelon form, built one generator at a time.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    n: usize,
    rows: Vec<Option<Vec<BigInt>>>,
}

impl IntegerLattice {
    pub fn new(n: usize) -> Self {
        IntegerLattice { n, rows: vec![None; n] }
    }

    pub fn insert(&mut self, v: &[i64]) {
        self.insert_big(v.iter().map(|&x| BigInt::from(x)).collect());
    }

    pub fn insert_big(&mut self, mut v: Vec<BigInt>) {
        debug_assert_eq!(v.len(), self.n);
        for c in 0..self.n {
            if v[c].is_zero() {
                continue;
            }
            let Some(row) = self.rows[c].take() else {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                self.rows[c] = Some(v);
                return;
            };
            // unimodular combination: new pivot gcd, remainder zero at c
            let e = row[c].extended_gcd(&v[c]);
            let (a, b) = (&row[c] / &e.gcd, &v[c] / &e.gcd);
            let mut pivot: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &e.x * r + &e.y * x).collect();
            let rem: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &b * r - &a * x).collect();
            if pivot[c].is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
            }
            self.rows[c] = Some(pivot);
            v = rem;
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    /// `[Z^n : L]`, or `None` when `L` has rank below `n`.
    pub fn index(&self) -> Option<BigInt> {
        let mut d = BigInt::one();
        for (c, r) in self.rows.iter().enumerate() {
            d *= r.as_ref()?[c].abs();
        }
        Some(d)
    }
}

/// Index of the subgroup of `Z^n` generated by integer vectors, or `None`
/// if they do not span a full-rank lattice.
pub fn lattice_index(gens: &[Vec<BigInt>], n: usize) -> Option<BigInt> {
    let mut lat = IntegerLattice::new(n);
    for g in gens {
        lat.insert_big(g.clone());
    }
    lat.index()
}
