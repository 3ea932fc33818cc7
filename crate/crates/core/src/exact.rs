//! Exact values of `F_n^(d)`.
//!
//! Two routes: a dense table built with a length-`d` sliding window, and
//! single terms through powers of the `d x d` companion matrix.

use std::ops::Index;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::order::Order;

/// `F_0 ..= F_n_max` for a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigIntegerSequence {
    d: Order,
    values: Vec<BigUint>,
}

impl BigIntegerSequence {
    pub fn order(&self) -> Order {
        self.d
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// `F_n`, with the zero convention for `n <= 0`. `None` past the table end.
    pub fn get(&self, n: i64) -> Option<BigUint> {
        if n <= 0 {
            return Some(BigUint::zero());
        }
        self.values.get(n as usize).cloned()
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

impl Index<usize> for BigIntegerSequence {
    type Output = BigUint;

    fn index(&self, n: usize) -> &BigUint {
        &self.values[n]
    }
}

/// Dense table `F_0, ..., F_{n_max}`.
pub fn fib_sequence(d: Order, n_max: i64) -> Result<BigIntegerSequence> {
    if n_max < 0 {
        return Err(Error::NegativeLength(n_max));
    }
    let n_max = n_max as usize;
    let d_len = d.get();
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(BigUint::zero());
    if n_max >= 1 {
        values.push(BigUint::one());
    }
    // window = F_{n-1} + ... + F_{n-d}, maintained incrementally
    let mut window = BigUint::one();
    for n in 2..=n_max {
        let next = window.clone();
        window += &next;
        if n > d_len {
            window -= &values[n - d_len];
        }
        values.push(next);
    }
    Ok(BigIntegerSequence { d, values })
}

type Matrix = Vec<Vec<BigUint>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![BigUint::zero(); n]; n];
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

/// `[[1, 1, ..., 1], [1, 0, ..., 0], ..., [0, ..., 1, 0]]`.
fn companion(d: usize) -> Matrix {
    let mut m = vec![vec![BigUint::zero(); d]; d];
    for v in m[0].iter_mut() {
        *v = BigUint::one();
    }
    for i in 1..d {
        m[i][i - 1] = BigUint::one();
    }
    m
}

/// `F_n` by binary exponentiation of the companion matrix. Zero for `n <= 0`.
pub fn fib_at(d: Order, n: i64) -> BigUint {
    if n <= 0 {
        return BigUint::zero();
    }
    // State (F_k, F_{k-1}, ..., F_{k-d+1}) advances by one step per
    // multiplication; starting at k = 1 the state is e_1, so F_n is the
    // (0, 0) entry of C^(n-1).
    let d = d.get();
    let mut exp = (n - 1) as u64;
    let mut base = companion(d);
    let mut acc: Option<Matrix> = None;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => mat_mul(&a, &base),
            });
        }
        exp >>= 1;
        if exp > 0 {
            base = mat_mul(&base, &base);
        }
    }
    match acc {
        None => BigUint::one(),
        Some(m) => m[0][0].clone(),
    }
}
