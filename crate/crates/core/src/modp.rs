//! Exact rank computations after substituting random values for the `q_ij`
//! in a large prime field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_rational::Ratio;

use crate::scalars::{pair_count, PhaseExp, PhaseScalar};

pub const P: u64 = (1 << 61) - 1;

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

pub fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

pub fn from_i64(x: i64) -> u64 {
    let m = x.rem_euclid(P as i64);
    m as u64
}

/// Random nonzero values for the `q_ij`, `i < j ≤ n`.
#[derive(Debug, Clone)]
pub struct QPoint {
    values: Vec<u64>,
}

impl QPoint {
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        QPoint { values: (0..pair_count(n.max(2))).map(|_| rng.gen_range(2..P)).collect() }
    }

    pub fn eval(&self, e: &PhaseExp) -> u64 {
        let mut r = 1;
        for (k, x) in e.raw().iter().enumerate() {
            if *x == 0 {
                continue;
            }
            let v = self.values[k];
            let v = if *x > 0 { v } else { inv(v) };
            r = mul(r, pow(v, x.unsigned_abs() as u64));
        }
        r
    }

    /// Value of an exact phase scalar; denominators must be prime to `P`.
    pub fn eval_scalar(&self, s: &PhaseScalar<Ratio<i64>>) -> u64 {
        let mut acc = 0;
        for (e, c) in s.terms() {
            let c = mul(from_i64(*c.numer()), inv(from_i64(*c.denom())));
            acc = add(acc, mul(c, self.eval(e)));
        }
        acc
    }
}

/// Rank of a matrix over F_P by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let iv = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = mul(*x, iv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = sub(*x, mul(f, *y));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_and_rank() {
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(from_i64(-1), P - 1);
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(vec![vec![1, 2], vec![0, 4], vec![3, 3]]), 2);
        let pt = QPoint::random(3, 1);
        let e = PhaseExp::q_pow(1, 2, 3).mul(&PhaseExp::q_pow(1, 2, -3));
        assert_eq!(pt.eval(&e), 1);
        assert_eq!(mul(pt.eval(&PhaseExp::q(2, 3)), pt.eval(&PhaseExp::q(3, 2))), 1);
    }
}
