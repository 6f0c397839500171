//! Double description: extreme rays of `{x : A x >= 0}`.

use num_traits::{Signed, Zero};

use crate::linalg;
use crate::rational::{dot, primitive, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DdError {
    /// The constraint matrix has rank below the ambient dimension, so the
    /// cone contains a line.
    Lineality,
}

struct Ray {
    v: Vec<Rational>,
    tight: Vec<bool>,
}

/// Extreme rays of the pointed cone `{x in Q^n : a . x >= 0 for all rows a}`,
/// as primitive integer vectors in lexicographic order. An empty result
/// means the cone is `{0}`.
pub fn extreme_rays(rows: &[Vec<Rational>], n: usize) -> Result<Vec<Vec<Rational>>, DdError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let rows: Vec<&Vec<Rational>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();

    // greedy basis of n independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut acc: Vec<Vec<Rational>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push((*r).clone());
        if linalg::rank(&acc) > basis.len() {
            basis.push(i);
            if basis.len() == n {
                break;
            }
        } else {
            acc.pop();
        }
    }
    if basis.len() < n {
        return Err(DdError::Lineality);
    }

    let a0: Vec<Vec<Rational>> = basis.iter().map(|&i| rows[i].clone()).collect();
    let inv = linalg::inverse(&a0).expect("independent rows");
    let mut processed: Vec<usize> = basis.clone();
    let mut rays: Vec<Ray> = (0..n)
        .map(|j| {
            let col: Vec<Rational> = (0..n).map(|i| inv[i][j].clone()).collect();
            let mut tight = vec![false; rows.len()];
            for (k, &b) in basis.iter().enumerate() {
                tight[b] = k != j;
            }
            Ray { v: primitive(&col), tight }
        })
        .collect();

    for (idx, a) in rows.iter().enumerate() {
        if basis.contains(&idx) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        if n >= 2 {
            for &p in &pos {
                for &q in &neg {
                    let common: Vec<usize> = processed
                        .iter()
                        .copied()
                        .filter(|&k| rays[p].tight[k] && rays[q].tight[k])
                        .collect();
                    if common.len() + 2 < n {
                        continue;
                    }
                    let sub: Vec<Vec<Rational>> = common.iter().map(|&k| rows[k].clone()).collect();
                    if linalg::rank(&sub) != n - 2 {
                        continue;
                    }
                    let sp = &vals[p];
                    let sq = -&vals[q];
                    let v: Vec<Rational> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(x, y)| sp * x + &sq * y)
                        .collect();
                    let mut tight = vec![false; rows.len()];
                    for &k in &common {
                        tight[k] = true;
                    }
                    tight[idx] = true;
                    next.push(Ray { v: primitive(&v), tight });
                }
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight[idx] = true;
            }
            next.push(r);
        }
        rays = next;
        processed.push(idx);
    }

    let mut out: Vec<Vec<Rational>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
