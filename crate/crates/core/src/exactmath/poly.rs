//! Dense univariate polynomials over `F_p` (coefficient `i` is the `x^i` term).

use rand::Rng;

use super::field::Zp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    zp: Zp,
    c: Vec<u64>,
}

impl Poly {
    pub fn new(zp: Zp, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { zp, c }
    }

    pub fn zero(zp: Zp) -> Self {
        Poly { zp, c: vec![] }
    }

    pub fn x(zp: Zp) -> Self {
        Poly::new(zp, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| self.zp.mul_add(a, acc, x))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.zp.add(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0)))
            .collect();
        Poly::new(self.zp, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.zp.sub(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0)))
            .collect();
        Poly::new(self.zp, c)
    }

    pub fn scale(&self, s: u64) -> Poly {
        Poly::new(self.zp, self.c.iter().map(|&a| self.zp.mul(a, s)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.zp);
        }
        let mut out = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = self.zp.mul_add(out[i + j], a, b);
            }
        }
        Poly::new(self.zp, out)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.zp.inv(self.lead()))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let zp = self.zp;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = zp.inv(d.lead());
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(zp), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = zp.mul(r[i + dd], inv);
            q[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &dj) in d.c.iter().enumerate() {
                r[i + j] = zp.sub(r[i + j], zp.mul(coef, dj));
            }
        }
        r.truncate(dd);
        (Poly::new(zp, q), Poly::new(zp, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::new(self.zp, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in `F_p`, ascending. The zero polynomial has no
    /// well-defined root set and is rejected.
    pub fn roots<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let zp = self.zp;
        let f = self.monic();
        if f.degree() == Some(0) {
            return vec![];
        }
        // product of the distinct linear factors: gcd(f, x^p - x)
        let xp = Poly::x(zp).powmod(zp.p(), &f);
        let g = f.gcd(&xp.sub(&Poly::x(zp)));
        let mut out = Vec::new();
        split_linear(&g, rng, &mut out);
        out.sort_unstable();
        out
    }

    /// Interpolating polynomial through `(xs[i], ys[i])`, distinct `xs`.
    pub fn interpolate(zp: Zp, xs: &[u64], ys: &[u64]) -> Poly {
        assert_eq!(xs.len(), ys.len());
        // Newton divided differences
        let n = xs.len();
        let mut coef = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = zp.sub(coef[i], coef[i - 1]);
                let den = zp.sub(xs[i], xs[i - j]);
                coef[i] = zp.mul(num, zp.inv(den));
            }
        }
        let mut p = Poly::zero(zp);
        for i in (0..n).rev() {
            // p = p * (x - xs[i]) + coef[i]
            p = p
                .mul(&Poly::new(zp, vec![zp.neg(xs[i]), 1]))
                .add(&Poly::new(zp, vec![coef[i]]));
        }
        p
    }
}

/// Splits a monic product of distinct linear factors (Cantor–Zassenhaus).
fn split_linear<R: Rng>(g: &Poly, rng: &mut R, out: &mut Vec<u64>) {
    let zp = g.zp;
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(zp.neg(g.c[0]));
            return;
        }
        _ => {}
    }
    if zp.p() == 2 {
        // only happens for tiny test fields; brute force is fine
        out.extend((0..2).filter(|&x| g.eval(x) == 0));
        return;
    }
    loop {
        let a = rng.gen_range(0..zp.p());
        let h = Poly::new(zp, vec![a, 1]).powmod((zp.p() - 1) / 2, g);
        let d = g.gcd(&h.sub(&Poly::new(zp, vec![1])));
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < g.degree().unwrap() {
            let (q, _) = g.divrem(&d);
            split_linear(&d, rng, out);
            split_linear(&q.monic(), rng, out);
            return;
        }
    }
}

/// Resultant of two polynomials given with formal degrees `da`, `db`
/// (coefficients beyond the actual degree are treated as zero leading terms).
pub fn resultant(a: &Poly, da: usize, b: &Poly, db: usize) -> u64 {
    let zp = a.zp;
    if a.degree().map_or(true, |d| d < da) || b.degree().map_or(true, |d| d < db) {
        // a dropped leading coefficient: fall back to the Sylvester determinant
        return sylvester_det(a, da, b, db);
    }
    // Euclid with the classical sign and leading-coefficient bookkeeping
    let mut acc = 1u64;
    let (mut f, mut df) = (a.clone(), da);
    let (mut g, mut dg) = (b.clone(), db);
    loop {
        if dg == 0 {
            return zp.mul(acc, zp.pow(g.lead(), df as u64));
        }
        let r = f.rem(&g);
        let Some(dr) = r.degree() else { return 0 };
        // res(f, g) = (-1)^{df dg} lc(g)^{df - dr} res(g, r)
        if df % 2 == 1 && dg % 2 == 1 {
            acc = zp.neg(acc);
        }
        acc = zp.mul(acc, zp.pow(g.lead(), (df - dr) as u64));
        f = g;
        df = dg;
        g = r;
        dg = dr;
    }
}

fn sylvester_det(a: &Poly, da: usize, b: &Poly, db: usize) -> u64 {
    use super::fpmatrix::FpMatrix;
    let zp = a.zp;
    let n = da + db;
    if n == 0 {
        return 1;
    }
    let mut m = FpMatrix::zeros(zp, n, n);
    let coef = |p: &Poly, i: usize| p.c.get(i).copied().unwrap_or(0);
    for r in 0..db {
        for i in 0..=da {
            m.set(r, r + da - i, coef(a, i));
        }
    }
    for r in 0..da {
        for i in 0..=db {
            m.set(db + r, r + db - i, coef(b, i));
        }
    }
    det(m)
}

fn det(mut m: super::fpmatrix::FpMatrix) -> u64 {
    let zp = m.zp();
    let n = m.rows();
    let mut d = 1u64;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| m.get(r, col) != 0) else {
            return 0;
        };
        if p != col {
            for j in 0..n {
                let (x, y) = (m.get(col, j), m.get(p, j));
                m.set(col, j, y);
                m.set(p, j, x);
            }
            d = zp.neg(d);
        }
        let pv = m.get(col, col);
        d = zp.mul(d, pv);
        let inv = zp.inv(pv);
        for r in col + 1..n {
            let f = zp.mul(m.get(r, col), inv);
            if f == 0 {
                continue;
            }
            for j in col..n {
                let v = zp.sub(m.get(r, j), zp.mul(f, m.get(col, j)));
                m.set(r, j, v);
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn from_roots(zp: Zp, roots: &[u64]) -> Poly {
        roots.iter().fold(Poly::new(zp, vec![1]), |acc, &r| {
            acc.mul(&Poly::new(zp, vec![zp.neg(r), 1]))
        })
    }

    #[test]
    fn roots_of_split_polynomial() {
        let zp = Zp::new(1_048_583);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = from_roots(zp, &[5, 5, 17, 1_000_000, 3]);
        // an irreducible quadratic factor x^2 - nonresidue contributes nothing
        let nonres = (2..).find(|&a| zp.pow(a, (zp.p() - 1) / 2) != 1).unwrap();
        let f = f.mul(&Poly::new(zp, vec![zp.neg(nonres), 0, 1]));
        assert_eq!(f.roots(&mut rng), vec![3, 5, 17, 1_000_000]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let zp = Zp::new(97);
        let f = Poly::new(zp, vec![3, 0, 5, 1]);
        let xs: Vec<u64> = (10..14).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| f.eval(x)).collect();
        assert_eq!(Poly::interpolate(zp, &xs, &ys), f);
    }

    #[test]
    fn resultant_detects_common_roots() {
        let zp = Zp::new(101);
        let a = from_roots(zp, &[1, 2, 3]);
        let b = from_roots(zp, &[3, 7]);
        let c = from_roots(zp, &[4, 7]);
        assert_eq!(resultant(&a, 3, &b, 2), 0);
        // product of root differences
        let expect = [1u64, 2, 3].iter().fold(1, |acc, &r| {
            [4u64, 7].iter().fold(acc, |acc, &s| zp.mul(acc, zp.sub(r, s)))
        });
        assert_eq!(resultant(&a, 3, &c, 2), expect);
        assert_eq!(sylvester_det(&a, 3, &c, 2), expect);
        let a2 = a.scale(5);
        assert_eq!(resultant(&a2, 3, &c, 2), sylvester_det(&a2, 3, &c, 2));
        assert_eq!(resultant(&c, 2, &a2, 3), sylvester_det(&c, 2, &a2, 3));
    }
}
