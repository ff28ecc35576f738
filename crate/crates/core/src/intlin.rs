//! Integer linear algebra at desk scale: Hermite and Smith normal forms,
//! integer kernels, ranks and exact rational solves.
//!
//! Matrices are `Vec<Vec<i64>>` in row-major order.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

pub type IMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &[Vec<i64>], ncols: usize) -> IMatrix {
    (0..ncols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], bcols: usize) -> IMatrix {
    a.iter().map(|r| (0..bcols).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_vec(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

fn row_axpy(a: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    let s = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(s) {
        *x -= k * y;
    }
}

/// Row-style Hermite normal form. Returns `(H, U)` with `U` unimodular,
/// `U·A = H`, `H` in echelon form with positive pivots and entries above a
/// pivot reduced into `[0, pivot)`. Zero rows of `H` come last.
pub fn hnf_with_transform(a: &[Vec<i64>], ncols: usize) -> (IMatrix, IMatrix) {
    let m = a.len();
    let mut h: IMatrix = a.to_vec();
    let mut u = identity(m);
    let mut row = 0;
    for col in 0..ncols {
        if row >= m {
            break;
        }
        loop {
            let piv = (row..m).filter(|&r| h[r][col] != 0).min_by_key(|&r| h[r][col].abs());
            let piv = match piv {
                Some(p) => p,
                None => break,
            };
            h.swap(row, piv);
            u.swap(row, piv);
            let mut done = true;
            for r in (row + 1)..m {
                if h[r][col] != 0 {
                    let q = Integer::div_floor(&h[r][col], &h[row][col]);
                    row_axpy(&mut h, r, row, q);
                    row_axpy(&mut u, r, row, q);
                    if h[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[row][col] == 0 {
            continue;
        }
        if h[row][col] < 0 {
            for x in h[row].iter_mut() {
                *x = -*x;
            }
            for x in u[row].iter_mut() {
                *x = -*x;
            }
        }
        let p = h[row][col];
        for r in 0..row {
            let q = Integer::div_floor(&h[r][col], &p);
            row_axpy(&mut h, r, row, q);
            row_axpy(&mut u, r, row, q);
        }
        row += 1;
    }
    (h, u)
}

pub fn hnf(a: &[Vec<i64>], ncols: usize) -> IMatrix {
    hnf_with_transform(a, ncols).0
}

/// Rank over ℚ.
pub fn rank(a: &[Vec<i64>], ncols: usize) -> usize {
    hnf(a, ncols).iter().filter(|r| r.iter().any(|x| *x != 0)).count()
}

/// Basis of `{v ∈ ℤ^m : vᵀA = 0}` in Hermite normal form.
pub fn left_kernel(a: &[Vec<i64>], ncols: usize) -> IMatrix {
    let (h, u) = hnf_with_transform(a, ncols);
    let basis: IMatrix = h.iter().zip(u).filter(|(r, _)| r.iter().all(|x| *x == 0)).map(|(_, v)| v).collect();
    if basis.is_empty() {
        return basis;
    }
    hnf(&basis, a.len()).into_iter().filter(|r| r.iter().any(|x| *x != 0)).collect()
}

/// Basis of `{x ∈ ℤ^n : A x = 0}` in Hermite normal form.
pub fn right_kernel(a: &[Vec<i64>], ncols: usize) -> IMatrix {
    left_kernel(&transpose(a, ncols), a.len())
}

/// Reduces `v` against an HNF basis `b` so that entries in pivot columns lie
/// in `[0, pivot)`.
pub fn reduce_modulo(v: &[i64], b: &[Vec<i64>]) -> Vec<i64> {
    let mut out = v.to_vec();
    for row in b {
        if let Some(c) = row.iter().position(|x| *x != 0) {
            let q = Integer::div_floor(&out[c], &row[c]);
            for (x, y) in out.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
    }
    out
}

/// Smith normal form `U·A·V = D` with unimodular `U`, `V` and the diagonal
/// of `D` non-negative with each entry dividing the next. Returns
/// `(D, U, V)`.
pub fn smith(a: &[Vec<i64>], ncols: usize) -> (IMatrix, IMatrix, IMatrix) {
    let m = a.len();
    let n = ncols;
    let mut d: IMatrix = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j] != 0 && best.map(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()).unwrap_or(true) {
                    best = Some((i, j));
                }
            }
        }
        let (pi, pj) = match best {
            Some(p) => p,
            None => break,
        };
        d.swap(t, pi);
        u.swap(t, pi);
        for r in d.iter_mut() {
            r.swap(t, pj);
        }
        for r in v.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in (t + 1)..m {
            if d[i][t] != 0 {
                let q = Integer::div_floor(&d[i][t], &d[t][t]);
                row_axpy(&mut d, i, t, q);
                row_axpy(&mut u, i, t, q);
                if d[i][t] != 0 {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..n {
            if d[t][j] != 0 {
                let q = Integer::div_floor(&d[t][j], &d[t][t]);
                for r in d.iter_mut() {
                    r[j] -= q * r[t];
                }
                for r in v.iter_mut() {
                    r[j] -= q * r[t];
                }
                if d[t][j] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold in any trailing entry not divisible by the pivot
        let p = d[t][t];
        let bad = ((t + 1)..m).find(|&i| ((t + 1)..n).any(|j| d[i][j] % p != 0));
        if let Some(i) = bad {
            row_axpy(&mut d, t, i, -1);
            row_axpy(&mut u, t, i, -1);
            continue;
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    (d, u, v)
}

/// Determinant by fraction-free elimination.
pub fn det(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|x| *x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match ((k + 1)..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

pub type Q = Ratio<i64>;

/// Solves `A x = b` over ℚ for square invertible `A`.
pub fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, y)| r.iter().map(|x| Q::from_integer(*x)).chain(std::iter::once(Q::from_integer(*y))).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                let src = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(src) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

/// True if the rows of `a` are linearly independent over ℚ.
pub fn independent(a: &[Vec<i64>], ncols: usize) -> bool {
    rank(a, ncols) == a.len()
}

pub fn abs_max(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_small() {
        let a = vec![vec![2, 4], vec![1, 3]];
        let (h, u) = hnf_with_transform(&a, 2);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(mat_mul(&u, &a, 2), h);
        assert_eq!(det(&u).abs(), 1);
    }

    #[test]
    fn kernels() {
        // orbifold generators 2e1-e2, e2, e1
        let m = vec![vec![2, -1], vec![0, 1], vec![1, 0]];
        assert_eq!(left_kernel(&m, 2), vec![vec![1, 1, -2]]);
        let c = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, -1]];
        assert_eq!(left_kernel(&c, 3), vec![vec![1, 1, -1, -1]]);
        assert!(left_kernel(&identity(3), 3).is_empty());
        assert_eq!(right_kernel(&[vec![1, 1, 0]], 3), vec![vec![1, -1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn smith_small() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (d, u, v) = smith(&a, 3);
        assert_eq!(d, vec![vec![2, 0, 0], vec![0, 6, 0], vec![0, 0, 12]]);
        assert_eq!(mat_mul(&mat_mul(&u, &a, 3), &v, 3), d);
    }

    #[test]
    fn det_and_solve() {
        assert_eq!(det(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(det(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]]), -5);
        let x = solve_rational(&[vec![2, 0], vec![0, 4]], &[1, 1]).unwrap();
        assert_eq!(x, vec![Q::new(1, 2), Q::new(1, 4)]);
        assert!(solve_rational(&[vec![1, 1], vec![1, 1]], &[0, 1]).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, IMatrix)> {
        (1usize..5, 1usize..5).prop_flat_map(|(m, n)| {
            prop::collection::vec(prop::collection::vec(-6i64..7, n), m).prop_map(move |a| (m, n, a))
        })
    }

    proptest! {
        #[test]
        fn hnf_transform_is_consistent((_m, n, a) in small_matrix()) {
            let (h, u) = hnf_with_transform(&a, n);
            prop_assert_eq!(mat_mul(&u, &a, n), h);
            prop_assert_eq!(det(&u).abs(), 1);
        }

        #[test]
        fn left_kernel_annihilates((m, n, a) in small_matrix()) {
            let k = left_kernel(&a, n);
            prop_assert_eq!(k.len() + rank(&a, n), m);
            for v in &k {
                let at = transpose(&a, n);
                prop_assert!(mat_vec(&at, v).iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn smith_transform_is_consistent((m, n, a) in small_matrix()) {
            let (d, u, v) = smith(&a, n);
            prop_assert_eq!(mat_mul(&mat_mul(&u, &a, n), &v, n), d.clone());
            for i in 0..m {
                for j in 0..n {
                    if i != j { prop_assert_eq!(d[i][j], 0); }
                }
            }
            let diag: Vec<i64> = (0..m.min(n)).map(|i| d[i][i]).collect();
            for w in diag.windows(2) {
                prop_assert!(w[0] >= 0);
                if w[0] == 0 { prop_assert_eq!(w[1], 0); } else { prop_assert_eq!(w[1] % w[0], 0); }
            }
        }
    }
}
