//! Dense matrices over `F_p` with Gaussian elimination.

use super::field::Zp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    zp: Zp,
    rows: usize,
    cols: usize,
    data: Vec<u64>, // row-major, canonical residues
}

impl FpMatrix {
    pub fn zeros(zp: Zp, rows: usize, cols: usize) -> Self {
        FpMatrix {
            zp,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(zp: Zp, n: usize) -> Self {
        let mut m = Self::zeros(zp, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from signed entries, reducing them into `0..p`.
    pub fn from_rows_i64(zp: Zp, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(zp, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, zp.from_i64(v));
            }
        }
        m
    }

    pub fn zp(&self) -> Zp {
        self.zp
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.zp.p());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Appends a row (length must equal `cols`).
    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.zp.mul_add(acc, a, b))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// `row[target] -= factor * row[pivot]`, only touching columns `from..`.
    #[inline]
    fn eliminate(&mut self, target: usize, pivot: usize, factor: u64, from: usize) {
        let zp = self.zp;
        let c = self.cols;
        let neg = zp.neg(factor);
        let (t, p) = if target < pivot {
            let (head, tail) = self.data.split_at_mut(pivot * c);
            (&mut head[target * c..(target + 1) * c], &tail[..c])
        } else {
            let (head, tail) = self.data.split_at_mut(target * c);
            (&mut tail[..c], &head[pivot * c..(pivot + 1) * c])
        };
        for (x, &y) in t[from..].iter_mut().zip(&p[from..]) {
            *x = zp.mul_add(*x, neg, y);
        }
    }

    fn reduce_in_place(&mut self, full: bool) -> Vec<usize> {
        let zp = self.zp;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, col) != 0) else {
                continue;
            };
            self.swap_rows(r, piv);
            let inv = zp.inv(self.get(r, col));
            for x in &mut self.row_mut(r)[col..] {
                *x = zp.mul(*x, inv);
            }
            let start = if full { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, col);
                if f != 0 {
                    self.eliminate(i, r, f, col);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        self.reduce_in_place(true)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce_in_place(false).len()
    }

    /// Right null space basis; see [`kernel_fp`].
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        kernel_fp(self)
    }
}

/// Basis of `{v : M v = 0}`. One vector per non-pivot column `f` of the RREF:
/// `v[f] = 1`, `v[pivot_i] = -rref[i][f]`, all other entries zero.
pub fn kernel_fp(m: &FpMatrix) -> Vec<Vec<u64>> {
    let zp = m.zp;
    let mut r = m.clone();
    let pivots = r.rref();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis: Vec<Vec<u64>> = (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0; m.cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = zp.neg(r.get(i, f));
            }
            v
        })
        .collect();
    #[cfg(debug_assertions)]
    {
        assert_eq!(pivots.len() + basis.len(), m.cols);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_has_trivial_kernel() {
        let m = FpMatrix::identity(Zp::new(7), 3);
        assert!(kernel_fp(&m).is_empty());
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let m = FpMatrix::zeros(Zp::new(7), 2, 3);
        assert_eq!(kernel_fp(&m).len(), 3);
    }

    #[test]
    fn all_ones_row() {
        let m = FpMatrix::from_rows_i64(Zp::new(7), &[vec![1, 1, 1]]);
        assert_eq!(kernel_fp(&m), vec![vec![6, 1, 0], vec![6, 0, 1]]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..7, cols in 1usize..7, seed in any::<u64>()) {
            let zp = Zp::new(13);
            let mut s = seed;
            let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                // bias towards zeros so that rank deficiency is common
                let v = (s >> 33) % 26;
                if v >= 13 { 0 } else { v as i64 }
            }).collect()).collect();
            let m = FpMatrix::from_rows_i64(zp, &data);
            let k = kernel_fp(&m);
            prop_assert_eq!(m.rank() + k.len(), cols);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }
}
