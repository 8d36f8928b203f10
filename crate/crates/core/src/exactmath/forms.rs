//! Homogeneous forms in three and two variables over `F_p`.
//!
//! Monomial order for ternary forms of degree `k` is graded-lexicographic with
//! `x > y > z`: `x^k, x^{k-1}y, x^{k-1}z, x^{k-2}y^2, ...`. The monomial
//! `x^i y^j z^l` sits at index `(k-i)(k-i+1)/2 + (k-i-j)`.
//!
//! Binary forms of degree `k` store the coefficient of `s^{k-i} t^i` at index `i`.

use super::field::Zp;

pub fn num_monomials(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

#[inline]
pub fn monomial_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i + j <= k);
    (k - i) * (k - i + 1) / 2 + (k - i - j)
}

/// Exponent triples in storage order.
pub fn monomials(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(num_monomials(k));
    for i in (0..=k).rev() {
        for j in (0..=k - i).rev() {
            out.push([i, j, k - i - j]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinForm {
    zp: Zp,
    coeffs: Vec<u64>,
}

impl BinForm {
    pub fn new(zp: Zp, coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form has at least one coefficient");
        debug_assert!(coeffs.iter().all(|&c| c < zp.p()));
        BinForm { zp, coeffs }
    }

    pub fn zero(zp: Zp, k: usize) -> Self {
        BinForm {
            zp,
            coeffs: vec![0; k + 1],
        }
    }

    /// `a*s + b*t`
    pub fn linear(zp: Zp, a: u64, b: u64) -> Self {
        Self::new(zp, vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let zp = self.zp;
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = zp.mul_add(out[i + j], a, b);
            }
        }
        BinForm { zp, coeffs: out }
    }

    pub fn add_scaled(&mut self, other: &BinForm, c: u64) {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x = self.zp.mul_add(*x, c, y);
        }
    }

    pub fn eval(&self, s: u64, t: u64) -> u64 {
        let zp = self.zp;
        let k = self.degree() as u64;
        self.coeffs.iter().enumerate().fold(0, |acc, (i, &c)| {
            let term = zp.mul(zp.pow(s, k - i as u64), zp.pow(t, i as u64));
            zp.mul_add(acc, c, term)
        })
    }
}

/// Parametrization of the line `a x + b y + c z = 0` used by [`HomForm3::restrict_to_line`]:
/// the coordinate of largest index with nonzero coefficient is solved for, the
/// other two become the parameters `(s, t)` in order.
///
/// Returns the images of `x, y, z` as binary linear forms.
pub fn line_parametrization(zp: Zp, line: [u64; 3]) -> [BinForm; 3] {
    let [a, b, c] = line;
    let lin = |u, v| BinForm::linear(zp, u, v);
    if c != 0 {
        let ic = zp.inv(c);
        [
            lin(1, 0),
            lin(0, 1),
            lin(zp.neg(zp.mul(a, ic)), zp.neg(zp.mul(b, ic))),
        ]
    } else if b != 0 {
        let ib = zp.inv(b);
        [lin(1, 0), lin(zp.neg(zp.mul(a, ib)), 0), lin(0, 1)]
    } else {
        assert!(a != 0, "zero linear form does not define a line");
        [lin(0, 0), lin(1, 0), lin(0, 1)]
    }
}

/// Point of the line with parameters `(s, t)`; inverse of [`line_parametrization`].
pub fn line_point(zp: Zp, line: [u64; 3], s: u64, t: u64) -> [u64; 3] {
    let par = line_parametrization(zp, line);
    [par[0].eval(s, t), par[1].eval(s, t), par[2].eval(s, t)]
}

/// Images of every degree-`k` monomial under a line parametrization, in storage order.
pub fn restricted_monomials(zp: Zp, line: [u64; 3], k: usize) -> Vec<BinForm> {
    let par = line_parametrization(zp, line);
    let powers: Vec<Vec<BinForm>> = par
        .iter()
        .map(|l| {
            let mut v = vec![BinForm::new(zp, vec![1])];
            for e in 1..=k {
                let next = v[e - 1].mul(l);
                v.push(next);
            }
            v
        })
        .collect();
    monomials(k)
        .into_iter()
        .map(|[i, j, l]| powers[0][i].mul(&powers[1][j]).mul(&powers[2][l]))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomForm3 {
    zp: Zp,
    degree: usize,
    coeffs: Vec<u64>,
}

impl HomForm3 {
    pub fn new(zp: Zp, degree: usize, coeffs: Vec<u64>) -> Self {
        assert_eq!(coeffs.len(), num_monomials(degree));
        debug_assert!(coeffs.iter().all(|&c| c < zp.p()));
        HomForm3 { zp, degree, coeffs }
    }

    pub fn zero(zp: Zp, degree: usize) -> Self {
        Self::new(zp, degree, vec![0; num_monomials(degree)])
    }

    pub fn constant(zp: Zp, c: u64) -> Self {
        Self::new(zp, 0, vec![zp.reduce(c)])
    }

    /// `a x + b y + c z`
    pub fn linear(zp: Zp, l: [u64; 3]) -> Self {
        Self::new(zp, 1, l.to_vec())
    }

    pub fn monomial(zp: Zp, e: [usize; 3], c: u64) -> Self {
        let k = e[0] + e[1] + e[2];
        let mut f = Self::zero(zp, k);
        f.coeffs[monomial_index(k, e[0], e[1])] = zp.reduce(c);
        f
    }

    pub fn zp(&self) -> Zp {
        self.zp
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> u64 {
        debug_assert_eq!(e[0] + e[1] + e[2], self.degree);
        self.coeffs[monomial_index(self.degree, e[0], e[1])]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &HomForm3) -> HomForm3 {
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.zp.add(a, b))
            .collect();
        HomForm3::new(self.zp, self.degree, coeffs)
    }

    pub fn sub(&self, other: &HomForm3) -> HomForm3 {
        assert_eq!(self.degree, other.degree, "subtracting forms of different degrees");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.zp.sub(a, b))
            .collect();
        HomForm3::new(self.zp, self.degree, coeffs)
    }

    pub fn scale(&self, c: u64) -> HomForm3 {
        let coeffs = self.coeffs.iter().map(|&a| self.zp.mul(a, c)).collect();
        HomForm3::new(self.zp, self.degree, coeffs)
    }

    pub fn mul(&self, other: &HomForm3) -> HomForm3 {
        let zp = self.zp;
        let (k1, k2) = (self.degree, other.degree);
        let k = k1 + k2;
        let m2 = monomials(k2);
        let mut out = vec![0; num_monomials(k)];
        for (a, [i1, j1, _]) in self.coeffs.iter().zip(monomials(k1)) {
            if *a == 0 {
                continue;
            }
            for (b, &[i2, j2, _]) in other.coeffs.iter().zip(&m2) {
                if *b == 0 {
                    continue;
                }
                let idx = monomial_index(k, i1 + i2, j1 + j2);
                out[idx] = zp.mul_add(out[idx], *a, *b);
            }
        }
        HomForm3::new(zp, k, out)
    }

    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        let zp = self.zp;
        let k = self.degree;
        let pw: Vec<Vec<u64>> = pt
            .iter()
            .map(|&c| {
                let mut v = vec![1u64; k + 1];
                for e in 1..=k {
                    v[e] = zp.mul(v[e - 1], c);
                }
                v
            })
            .collect();
        self.coeffs
            .iter()
            .zip(monomials(k))
            .fold(0, |acc, (&c, [i, j, l])| {
                zp.mul_add(acc, c, zp.mul(zp.mul(pw[0][i], pw[1][j]), pw[2][l]))
            })
    }

    /// Restriction to the line `line · (x,y,z) = 0` through the documented
    /// parametrization; the result has the same degree.
    pub fn restrict_to_line(&self, line: [u64; 3]) -> BinForm {
        let images = restricted_monomials(self.zp, line, self.degree);
        let mut out = BinForm::zero(self.zp, self.degree);
        for (&c, img) in self.coeffs.iter().zip(&images) {
            if c != 0 {
                out.add_scaled(img, c);
            }
        }
        out
    }

    /// Exact quotient by a nonzero linear form, or `None` if it does not divide.
    pub fn div_linear(&self, line: [u64; 3]) -> Option<HomForm3> {
        let zp = self.zp;
        if self.degree == 0 {
            return self.is_zero().then(|| self.clone());
        }
        // divide by the leading variable in order x > y > z
        let (lead, lc) = match line {
            [a, _, _] if a != 0 => (0, a),
            [_, b, _] if b != 0 => (1, b),
            [_, _, c] => {
                assert!(c != 0, "zero linear form");
                (2, c)
            }
        };
        let ilc = zp.inv(lc);
        let k = self.degree;
        let mut rem = self.coeffs.clone();
        let mut q = vec![0; num_monomials(k - 1)];
        // storage order is descending for x then y, so leading terms come first
        for (idx, e) in monomials(k).into_iter().enumerate() {
            let c = rem[idx];
            if c == 0 || e[lead] == 0 {
                continue;
            }
            let mut qe = e;
            qe[lead] -= 1;
            let qc = zp.mul(c, ilc);
            q[monomial_index(k - 1, qe[0], qe[1])] = qc;
            for (v, &lv) in line.iter().enumerate() {
                if lv == 0 {
                    continue;
                }
                let mut te = qe;
                te[v] += 1;
                let ti = monomial_index(k, te[0], te[1]);
                rem[ti] = zp.sub(rem[ti], zp.mul(qc, lv));
            }
        }
        rem.iter().all(|&c| c == 0).then(|| HomForm3::new(zp, k - 1, q))
    }

    /// `F(M v)` where row `r` of `m` gives the image of the `r`-th variable as a linear form.
    pub fn substitute_linear(&self, m: [[u64; 3]; 3]) -> HomForm3 {
        let zp = self.zp;
        let k = self.degree;
        let vars: Vec<HomForm3> = m.iter().map(|r| HomForm3::linear(zp, *r)).collect();
        let powers: Vec<Vec<HomForm3>> = vars
            .iter()
            .map(|l| {
                let mut v = vec![HomForm3::constant(zp, 1)];
                for e in 1..=k {
                    let next = v[e - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = HomForm3::zero(zp, k);
        for (&c, [i, j, l]) in self.coeffs.iter().zip(monomials(k)) {
            if c == 0 {
                continue;
            }
            let t = powers[0][i].mul(&powers[1][j]).mul(&powers[2][l]);
            for (o, &tc) in out.coeffs.iter_mut().zip(&t.coeffs) {
                *o = zp.mul_add(*o, c, tc);
            }
        }
        out
    }

    /// Formal partial derivative in variable `v` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, v: usize) -> HomForm3 {
        let zp = self.zp;
        let k = self.degree;
        if k == 0 {
            return HomForm3::zero(zp, 0);
        }
        let mut out = HomForm3::zero(zp, k - 1);
        for (&c, e) in self.coeffs.iter().zip(monomials(k)) {
            if c == 0 || e[v] == 0 {
                continue;
            }
            let mut d = e;
            d[v] -= 1;
            let idx = monomial_index(k - 1, d[0], d[1]);
            out.coeffs[idx] = zp.mul_add(out.coeffs[idx], c, e[v] as u64 % zp.p());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zp() -> Zp {
        Zp::new(101)
    }

    #[test]
    fn index_matches_enumeration() {
        for k in 0..8 {
            for (idx, [i, j, _]) in monomials(k).into_iter().enumerate() {
                assert_eq!(monomial_index(k, i, j), idx);
            }
        }
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    }

    #[test]
    fn restriction_examples() {
        let zp = zp();
        let x = HomForm3::linear(zp, [1, 0, 0]);
        assert!(x.restrict_to_line([1, 0, 0]).is_zero());

        let x_plus_y = HomForm3::linear(zp, [1, 1, 0]);
        let r = x_plus_y.restrict_to_line([1, zp.neg(1), 0]);
        assert_eq!(r.coeffs(), &[2, 0]);

        let x2 = x.mul(&x);
        assert_eq!(x2.restrict_to_line([0, 0, 1]).coeffs(), &[1, 0, 0]);
    }

    #[test]
    fn division_by_linear_form() {
        let zp = zp();
        let l = HomForm3::linear(zp, [3, 0, 7]);
        let g = HomForm3::new(zp, 2, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(l.mul(&g).div_linear([3, 0, 7]), Some(g.clone()));
        assert_eq!(g.div_linear([3, 0, 7]), None);
        let y = HomForm3::linear(zp, [0, 1, 0]);
        assert_eq!(y.mul(&g).div_linear([0, 1, 0]), Some(g));
    }

    fn arb_form(k: usize) -> impl Strategy<Value = HomForm3> {
        proptest::collection::vec(0u64..101, num_monomials(k))
            .prop_map(move |c| HomForm3::new(Zp::new(101), k, c))
    }

    proptest! {
        #[test]
        fn restriction_is_multiplicative(f in arb_form(3), g in arb_form(2), l in proptest::array::uniform3(0u64..101)) {
            prop_assume!(l != [0, 0, 0]);
            let lhs = f.mul(&g).restrict_to_line(l);
            let rhs = f.restrict_to_line(l).mul(&g.restrict_to_line(l));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn restriction_agrees_with_evaluation(f in arb_form(4), l in proptest::array::uniform3(0u64..101), s in 0u64..101, t in 0u64..101) {
            prop_assume!(l != [0, 0, 0]);
            let zp = Zp::new(101);
            let pt = line_point(zp, l, s, t);
            let on_line = (0..3).fold(0, |acc, i| zp.mul_add(acc, l[i], pt[i]));
            prop_assert_eq!(on_line, 0);
            prop_assert_eq!(f.restrict_to_line(l).eval(s, t), f.eval(pt));
        }

        #[test]
        fn substitution_agrees_with_evaluation(f in arb_form(3), m in proptest::array::uniform9(0u64..101), pt in proptest::array::uniform3(0u64..101)) {
            let zp = Zp::new(101);
            let rows = [[m[0], m[1], m[2]], [m[3], m[4], m[5]], [m[6], m[7], m[8]]];
            let img: Vec<u64> = rows.iter().map(|r| (0..3).fold(0, |acc, i| zp.mul_add(acc, r[i], pt[i]))).collect();
            prop_assert_eq!(f.substitute_linear(rows).eval(pt), f.eval([img[0], img[1], img[2]]));
        }
    }
}
