//! Small exact matrix helpers shared by the algebra and orbit code.

use std::collections::HashMap;

use num::{BigRational, Zero};

use crate::scalars::Scalar;

pub type ScalarMatrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> ScalarMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &ScalarMatrix, b: &ScalarMatrix) -> ScalarMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..inner {
                if a[i][k].is_zero() || b[k][j].is_zero() {
                    continue;
                }
                cell.add_assign_ref(&(&a[i][k] * &b[k][j]));
            }
        }
    }
    out
}

/// Division-free determinant by Laplace expansion memoized on column subsets.
pub fn determinant(m: &ScalarMatrix) -> Scalar {
    let n = m.len();
    assert!(n <= 20, "determinant helper is meant for small matrices");
    let mut memo: HashMap<u32, Scalar> = HashMap::new();
    minor(m, 0, &mut memo)
}

fn minor(m: &ScalarMatrix, used: u32, memo: &mut HashMap<u32, Scalar>) -> Scalar {
    let n = m.len();
    let row = used.count_ones() as usize;
    if row == n {
        return Scalar::one();
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let mut acc = Scalar::zero();
    let mut pos = 0;
    for col in 0..n {
        if used & (1 << col) != 0 {
            continue;
        }
        let entry = &m[row][col];
        if !entry.is_zero() {
            let sub = minor(m, used | (1 << col), memo);
            let term = entry * &sub;
            if pos % 2 == 0 {
                acc.add_assign_ref(&term);
            } else {
                acc.add_assign_ref(&-&term);
            }
        }
        pos += 1;
    }
    memo.insert(used, acc.clone());
    acc
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in rank + 1..nrows {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pivot;
            for k in col..ncols {
                let d = &f * &m[rank][k];
                m[i][k] -= d;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
