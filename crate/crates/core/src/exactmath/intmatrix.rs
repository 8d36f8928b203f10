//! Integer matrices with arbitrary-precision entries and exact lattice kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows_i64(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: BigInt = (0..self.cols).map(|l| self.get(i, l) * other.get(l, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `num/den` for `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * &two))
}

/// Pairwise size reduction: repeatedly subtract rounded projections until no
/// vector can be shortened by another. The lattice is unchanged.
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = dot(&basis[j], &basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let q = round_div(&dot(&basis[i], &basis[j]), &nj);
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(x, y)| x - &q * y)
                    .collect();
                if dot(&cand, &cand) < dot(&basis[i], &basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Basis (as columns) of the integer lattice `{v in Z^cols : M v = 0}`.
///
/// Row-reduces `[M^T | I]` with unimodular integer operations (Euclidean
/// steps only, no division), so rows whose left block vanishes carry an exact
/// lattice basis of the kernel. The basis is then size-reduced.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols;
    // row r: (M^T row r | e_r)
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..n)
        .map(|r| {
            let left = (0..m.rows).map(|i| m.get(i, r).clone()).collect();
            let mut right = vec![BigInt::zero(); n];
            right[r] = BigInt::one();
            (left, right)
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..m.rows {
        if pivot_row == n {
            break;
        }
        loop {
            // smallest nonzero |entry| among remaining rows
            let best = (pivot_row..n)
                .filter(|&r| !rows[r].0[col].is_zero())
                .min_by(|&a, &b| rows[a].0[col].abs().cmp(&rows[b].0[col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..n {
                if rows[r].0[col].is_zero() {
                    continue;
                }
                let q = rows[r].0[col].div_floor(&rows[pivot_row].0[col]);
                let (head, tail) = rows.split_at_mut(r);
                let piv = &head[pivot_row];
                let tgt = &mut tail[0];
                for (x, y) in tgt.0.iter_mut().zip(&piv.0) {
                    *x -= &q * y;
                }
                for (x, y) in tgt.1.iter_mut().zip(&piv.1) {
                    *x -= &q * y;
                }
                if !tgt.0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (pivot_row..n).any(|r| !rows[r].0[col].is_zero()) {
            pivot_row += 1;
        }
    }

    let mut basis: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|(l, _)| l.iter().all(Zero::is_zero))
        .map(|(_, r)| r)
        .collect();
    size_reduce(&mut basis);
    let k = IntMatrix::from_columns(n, &basis);
    debug_assert!(m.mul(&k).is_zero());
    k
}

/// Rank over the rationals (fraction-free elimination).
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let g = a[rank][col].clone();
            for j in col..m.cols {
                let v = &a[r][j] * &g - &a[rank][j] * &f;
                a[r][j] = v;
            }
            let c = a[r].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !c.is_zero() && !c.is_one() {
                for x in &mut a[r] {
                    *x /= &c;
                }
            }
        }
        rank += 1;
    }
    rank
}
