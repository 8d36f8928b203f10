//! Logarithmic derivations of an arrangement over prime fields, and the
//! free / nearly free classification built on them.
//!
//! A derivation `θ = P∂x + Q∂y + R∂z` of degree `k` is tangent to the line with
//! covector `v` when `v·(P,Q,R)` vanishes on that line. The Euler derivation
//! `(x, y, z)` is tangent to everything; `h0(k)` counts tangent derivations of
//! degree `k` modulo its multiples, so a free arrangement with exponents
//! `(e1, e2)` has `h0(k) = binom(k-e1+2, 2) + binom(k-e2+2, 2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{concrete_equation, Line, Rua};
use crate::combinatorics::{c2, inner_triples, singular_points, PointKey};
use crate::error::{Error, Result};
use crate::exactmath::forms::{line_parametrization, line_point, monomials, num_monomials, restricted_monomials};
use crate::exactmath::{certification_fields, BinForm, FpMatrix, HomForm3, Poly, PrimeField, Zp};

const SEED: u64 = 0x7472_6961_7272;

fn binom2(m: i64) -> i64 {
    if m < 2 {
        0
    } else {
        m * (m - 1) / 2
    }
}

/// Sections of a free bundle with exponents `(e1, e2)` twisted by `k`.
pub fn free_model_h0(e1: usize, e2: usize, k: usize) -> i64 {
    let k = k as i64;
    binom2(k - e1 as i64 + 2) + binom2(k - e2 as i64 + 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub p: HomForm3,
    pub q: HomForm3,
    pub r: HomForm3,
}

impl Derivation {
    pub fn euler(zp: Zp) -> Self {
        Derivation {
            p: HomForm3::linear(zp, [1, 0, 0]),
            q: HomForm3::linear(zp, [0, 1, 0]),
            r: HomForm3::linear(zp, [0, 0, 1]),
        }
    }

    fn from_vector(zp: Zp, k: usize, v: &[u64]) -> Self {
        let m = num_monomials(k);
        Derivation {
            p: HomForm3::new(zp, k, v[..m].to_vec()),
            q: HomForm3::new(zp, k, v[m..2 * m].to_vec()),
            r: HomForm3::new(zp, k, v[2 * m..].to_vec()),
        }
    }

    pub fn degree(&self) -> usize {
        self.p.degree()
    }

    pub fn components(&self) -> [&HomForm3; 3] {
        [&self.p, &self.q, &self.r]
    }

    /// `θ(l) = l_x P + l_y Q + l_z R`.
    pub fn apply(&self, l: [u64; 3]) -> HomForm3 {
        self.p.scale(l[0]).add(&self.q.scale(l[1])).add(&self.r.scale(l[2]))
    }

    pub fn is_tangent_to(&self, l: [u64; 3]) -> bool {
        self.apply(l).restrict_to_line(l).is_zero()
    }

    pub fn eval(&self, pt: [u64; 3]) -> [u64; 3] {
        [self.p.eval(pt), self.q.eval(pt), self.r.eval(pt)]
    }

    /// The 2×2 minors of `[(x,y,z); (P,Q,R)]`: `xQ-yP`, `xR-zP`, `yR-zQ`.
    pub fn euler_minors(&self) -> [HomForm3; 3] {
        let zp = self.p.zp();
        let v = |i: usize| {
            let mut l = [0; 3];
            l[i] = 1;
            HomForm3::linear(zp, l)
        };
        let [x, y, z] = [v(0), v(1), v(2)];
        [
            x.mul(&self.q).sub(&y.mul(&self.p)),
            x.mul(&self.r).sub(&z.mul(&self.p)),
            y.mul(&self.r).sub(&z.mul(&self.q)),
        ]
    }

    pub fn is_euler_multiple(&self) -> bool {
        self.euler_minors().iter().all(HomForm3::is_zero)
    }

    fn combine(zp: Zp, basis: &[Derivation], coeffs: &[u64]) -> Derivation {
        let k = basis[0].degree();
        let mut out = Derivation {
            p: HomForm3::zero(zp, k),
            q: HomForm3::zero(zp, k),
            r: HomForm3::zero(zp, k),
        };
        for (d, &c) in basis.iter().zip(coeffs) {
            out.p = out.p.add(&d.p.scale(c));
            out.q = out.q.add(&d.q.scale(c));
            out.r = out.r.add(&d.r.scale(c));
        }
        out
    }

    /// Determinant of the rows `(x,y,z)`, `self`, `other`.
    pub fn saito_determinant(&self, other: &Derivation) -> HomForm3 {
        let zp = self.p.zp();
        let x = HomForm3::linear(zp, [1, 0, 0]);
        let y = HomForm3::linear(zp, [0, 1, 0]);
        let z = HomForm3::linear(zp, [0, 0, 1]);
        let qr = self.q.mul(&other.r).sub(&self.r.mul(&other.q));
        let pr = self.p.mul(&other.r).sub(&self.r.mul(&other.p));
        let pq = self.p.mul(&other.q).sub(&self.q.mul(&other.p));
        x.mul(&qr).sub(&y.mul(&pr)).add(&z.mul(&pq))
    }

    /// Coefficient vectors of the three components, centered for display.
    pub fn to_signed(&self) -> [Vec<i64>; 3] {
        let zp = self.p.zp();
        self.components().map(|f| f.coeffs().iter().map(|&c| zp.centered(c)).collect())
    }
}

/// Tangency conditions of one arrangement over one field.
pub struct Oracle {
    field: PrimeField,
    forms: Vec<[u64; 3]>,
}

impl Oracle {
    pub fn new(a: &Rua, field: &PrimeField) -> Result<Self> {
        Ok(Oracle {
            field: *field,
            forms: a.line_forms(field)?,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn zp(&self) -> Zp {
        self.field.zp()
    }

    pub fn line_forms(&self) -> &[[u64; 3]] {
        &self.forms
    }

    pub fn line_count(&self) -> usize {
        self.forms.len()
    }

    /// Rows: one per line and coefficient of the restricted `v·θ`.
    /// Columns: coefficients of `P`, then `Q`, then `R`.
    fn system(&self, k: usize) -> FpMatrix {
        let zp = self.zp();
        let m = num_monomials(k);
        let mut mat = FpMatrix::zeros(zp, self.forms.len() * (k + 1), 3 * m);
        for (li, &v) in self.forms.iter().enumerate() {
            let imgs = restricted_monomials(zp, v, k);
            for (mi, img) in imgs.iter().enumerate() {
                for (i, &c) in img.coeffs().iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let row = li * (k + 1) + i;
                    for (comp, &vc) in v.iter().enumerate() {
                        if vc != 0 {
                            mat.set(row, comp * m + mi, zp.mul(vc, c));
                        }
                    }
                }
            }
        }
        mat
    }

    pub fn derivation_dim(&self, k: usize) -> usize {
        3 * num_monomials(k) - self.system(k).rank()
    }

    pub fn h0(&self, k: usize) -> i64 {
        self.derivation_dim(k) as i64 - binom2(k as i64 + 1)
    }

    /// Basis of the tangent derivations of degree `k`.
    pub fn basis(&self, k: usize) -> Vec<Derivation> {
        let zp = self.zp();
        let out: Vec<Derivation> = self
            .system(k)
            .kernel()
            .iter()
            .map(|v| Derivation::from_vector(zp, k, v))
            .collect();
        debug_assert!(out.iter().all(|d| self.forms.iter().all(|&l| d.is_tangent_to(l))));
        out
    }

    /// Smallest degree with a section not coming from the Euler derivation.
    pub fn mdr(&self) -> usize {
        let bound = self.forms.len().saturating_sub(1).max(1);
        (1..=bound)
            .find(|&k| self.h0(k) > 0)
            .expect("a tangent derivation exists in degree lines-1")
    }

    /// A random tangent derivation of degree `k` that is not an Euler multiple.
    pub fn generic_section(&self, k: usize, rng: &mut ChaCha8Rng) -> Option<Derivation> {
        let basis = self.basis(k);
        if basis.is_empty() {
            return None;
        }
        let zp = self.zp();
        for _ in 0..8 {
            let coeffs: Vec<u64> = (0..basis.len()).map(|_| rng.gen_range(1..zp.p())).collect();
            let d = Derivation::combine(zp, &basis, &coeffs);
            if !d.is_euler_multiple() {
                return Some(d);
            }
        }
        None
    }

    pub fn equation(&self) -> HomForm3 {
        let zp = self.zp();
        self.forms
            .iter()
            .fold(HomForm3::constant(zp, 1), |acc, &l| acc.mul(&HomForm3::linear(zp, l)))
    }

    /// Searches for `θ1` of degree `e1`, `θ2` of degree `e2` with
    /// `det(θ_E, θ1, θ2) = s·f`, `s ≠ 0`, from seeded random combinations.
    pub fn saito_certificate_at(&self, e1: usize, e2: usize, rng: &mut ChaCha8Rng) -> Option<SaitoCertificate> {
        if e1 + e2 + 1 != self.forms.len() {
            return None;
        }
        let zp = self.zp();
        let b1 = self.basis(e1);
        let b2 = if e1 == e2 { b1.clone() } else { self.basis(e2) };
        if b1.is_empty() || b2.is_empty() {
            return None;
        }
        let f = self.equation();
        let (lead_idx, &lead) = f.coeffs().iter().enumerate().find(|(_, &c)| c != 0)?;
        for _ in 0..6 {
            let c1: Vec<u64> = (0..b1.len()).map(|_| rng.gen_range(0..zp.p())).collect();
            let c2: Vec<u64> = (0..b2.len()).map(|_| rng.gen_range(0..zp.p())).collect();
            let t1 = Derivation::combine(zp, &b1, &c1);
            let t2 = Derivation::combine(zp, &b2, &c2);
            let det = t1.saito_determinant(&t2);
            let s = zp.mul(det.coeffs()[lead_idx], zp.inv(lead));
            if s != 0 && det == f.scale(s) {
                return Some(SaitoCertificate {
                    degrees: (e1, e2),
                    theta1: t1,
                    theta2: t2,
                    scalar: s,
                });
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoCertificate {
    pub degrees: (usize, usize),
    pub theta1: Derivation,
    pub theta2: Derivation,
    pub scalar: u64,
}

pub fn derivation_dim(a: &Rua, field: &PrimeField, k: usize) -> Result<usize> {
    Ok(Oracle::new(a, field)?.derivation_dim(k))
}

pub fn h0_log(a: &Rua, field: &PrimeField, k: usize) -> Result<i64> {
    Ok(Oracle::new(a, field)?.h0(k))
}

/// `(k, dim D(A)_k, h0(k))` for `k = 0..=k_max`.
pub fn dim_profile(a: &Rua, field: &PrimeField, k_max: usize) -> Result<Vec<(usize, usize, i64)>> {
    let o = Oracle::new(a, field)?;
    Ok((0..=k_max)
        .map(|k| {
            let d = o.derivation_dim(k);
            (k, d, d as i64 - binom2(k as i64 + 1))
        })
        .collect())
}

pub fn mdr(a: &Rua, field: &PrimeField) -> Result<usize> {
    Ok(Oracle::new(a, field)?.mdr())
}

fn rng_for(field: &PrimeField, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ field.p().rotate_left(17) ^ salt)
}

/// Certificate at the candidate degrees `(mdr, lines-1-mdr)`.
pub fn saito_certificate(a: &Rua, field: &PrimeField) -> Result<Option<SaitoCertificate>> {
    let o = Oracle::new(a, field)?;
    let e1 = o.mdr();
    let e2 = match (o.line_count() - 1).checked_sub(e1) {
        Some(e2) => e2,
        None => return Ok(None),
    };
    Ok(o.saito_certificate_at(e1, e2, &mut rng_for(field, 1)))
}

pub fn saito_certificate_at(a: &Rua, field: &PrimeField, e1: usize, e2: usize) -> Result<Option<SaitoCertificate>> {
    let o = Oracle::new(a, field)?;
    Ok(o.saito_certificate_at(e1, e2, &mut rng_for(field, 1)))
}

// ---------------------------------------------------------------------------
// Base locus of a section

fn normalize(zp: Zp, pt: [u64; 3]) -> [u64; 3] {
    let lead = pt.iter().copied().find(|&c| c != 0).expect("projective point has a nonzero coordinate");
    let inv = zp.inv(lead);
    pt.map(|c| zp.mul(c, inv))
}

fn same_point(zp: Zp, a: [u64; 3], b: [u64; 3]) -> bool {
    normalize(zp, a) == normalize(zp, b)
}

/// Projective common zeros `(s:t)` of binary forms; `None` when all vanish identically.
fn binary_common_zeros(zp: Zp, forms: &[BinForm], rng: &mut ChaCha8Rng) -> Option<Vec<(u64, u64)>> {
    let nonzero: Vec<&BinForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    // (1:0): every coefficient of s^k vanishes
    if nonzero.iter().all(|f| f.coeffs()[0] == 0) {
        out.push((1, 0));
    }
    // t = 1: coefficient of s^{k-i} t^i goes to power k-i
    let g = nonzero
        .iter()
        .map(|f| {
            let k = f.degree();
            let mut c = vec![0; k + 1];
            for (i, &v) in f.coeffs().iter().enumerate() {
                c[k - i] = v;
            }
            Poly::new(zp, c)
        })
        .reduce(|a, b| a.gcd(&b))
        .unwrap();
    if g.degree().unwrap_or(0) > 0 {
        out.extend(g.roots(rng).into_iter().map(|s| (s, 1)));
    }
    Some(out)
}

fn invert3(zp: Zp, m: [[u64; 3]; 3]) -> Option<[[u64; 3]; 3]> {
    let c = |i: usize, j: usize| m[i][j];
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        zp.sub(zp.mul(c(r0, c0), c(r1, c1)), zp.mul(c(r0, c1), c(r1, c0)))
    };
    let det = (0..3).fold(0, |acc, j| zp.mul_add(acc, c(0, j), cof(0, j)));
    if det == 0 {
        return None;
    }
    let inv = zp.inv(det);
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = zp.mul(cof(j, i), inv);
        }
    }
    Some(out)
}

fn apply3(zp: Zp, m: [[u64; 3]; 3], v: [u64; 3]) -> [u64; 3] {
    m.map(|row| (0..3).fold(0, |acc, i| zp.mul_add(acc, row[i], v[i])))
}

/// `θ` in coordinates `u` with `x = g u`: components `g⁻¹ θ(g u)`.
fn transform(theta: &Derivation, g: [[u64; 3]; 3], ginv: [[u64; 3]; 3]) -> Derivation {
    let comps = theta.components().map(|c| c.substitute_linear(g));
    let row = |r: [u64; 3]| comps[0].scale(r[0]).add(&comps[1].scale(r[1])).add(&comps[2].scale(r[2]));
    Derivation {
        p: row(ginv[0]),
        q: row(ginv[1]),
        r: row(ginv[2]),
    }
}

/// Part of affine degree `d` of `H(s, t, 1)`, indexed by the power of `t`.
fn affine_part(h: &HomForm3, d: usize) -> Vec<u64> {
    let k = h.degree();
    let mut out = vec![0; d + 1];
    if d > k {
        return out;
    }
    for j in 0..=d {
        out[j] = h.coeff([d - j, j, k - d]);
    }
    out
}

/// Local zero test at a point where `m >= 2` lines of the arrangement meet:
/// the section vanishes there iff the local vector field has no linear part
/// and, for `m >= 3`, its degree `m-1` part is radial.
fn vanishes_at_multiple_point(theta: &Derivation, q: [u64; 3], m: usize) -> bool {
    let zp = theta.p.zp();
    // basis completing q: replace the standard vector at q's first nonzero slot
    let piv = q.iter().position(|&c| c != 0).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != piv).collect();
    let mut cols = [[0u64; 3]; 3];
    cols[0][others[0]] = 1;
    cols[1][others[1]] = 1;
    cols[2] = q;
    let g = [
        [cols[0][0], cols[1][0], cols[2][0]],
        [cols[0][1], cols[1][1], cols[2][1]],
        [cols[0][2], cols[1][2], cols[2][2]],
    ];
    let ginv = invert3(zp, g).expect("completed basis is invertible");
    let t = transform(theta, g, ginv);
    let field_part = |d: usize| -> (Vec<u64>, Vec<u64>) {
        let p = affine_part(&t.p, d);
        let qq = affine_part(&t.q, d);
        let mut v1 = p;
        let mut v2 = qq;
        if d >= 1 {
            let r = affine_part(&t.r, d - 1);
            for j in 0..d {
                v1[j] = zp.sub(v1[j], r[j]);
                v2[j + 1] = zp.sub(v2[j + 1], r[j]);
            }
        }
        (v1, v2)
    };
    let (c1, c2) = field_part(0);
    if c1[0] != 0 || c2[0] != 0 {
        return false;
    }
    let (l1, l2) = field_part(1);
    if l1.iter().chain(&l2).any(|&c| c != 0) {
        return false;
    }
    if m >= 3 {
        let d = m - 1;
        let (h1, h2) = field_part(d);
        // s·V2 - t·V1 = 0
        let mut rad = vec![0u64; d + 2];
        for j in 0..=d {
            rad[j] = zp.add(rad[j], h2[j]);
            rad[j + 1] = zp.sub(rad[j + 1], h1[j]);
        }
        if rad.iter().any(|&c| c != 0) {
            return false;
        }
    }
    true
}

/// Zero test at a point lying on exactly one line `l`: with `θ(l) = u·l`,
/// the section vanishes iff `θ - u·θ_E` vanishes at the point.
fn smooth_correction(theta: &Derivation, l: [u64; 3]) -> Derivation {
    let zp = theta.p.zp();
    let u = theta.apply(l).div_linear(l).expect("tangent derivation: θ(l) divisible by l");
    let e = Derivation::euler(zp);
    Derivation {
        p: theta.p.sub(&u.mul(&e.p)),
        q: theta.q.sub(&u.mul(&e.q)),
        r: theta.r.sub(&u.mul(&e.r)),
    }
}

fn random_invertible(zp: Zp, rng: &mut ChaCha8Rng) -> ([[u64; 3]; 3], [[u64; 3]; 3]) {
    loop {
        let mut g = [[0u64; 3]; 3];
        for row in &mut g {
            for c in row.iter_mut() {
                *c = rng.gen_range(0..zp.p());
            }
        }
        if let Some(inv) = invert3(zp, g) {
            return (g, inv);
        }
    }
}

/// Zeros of the minors away from the arrangement, by a resultant in generic coordinates.
fn off_arrangement_zeros(
    theta: &Derivation,
    line_forms: &[[u64; 3]],
    f: &HomForm3,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<[u64; 3]>> {
    let zp = theta.p.zp();
    let mut minors = theta.euler_minors().to_vec();
    if minors.iter().all(HomForm3::is_zero) {
        return None;
    }
    // strip arrangement lines along which θ is radial
    for &l in line_forms {
        while minors.iter().all(|m| m.degree() > 0 && m.restrict_to_line(l).is_zero()) {
            minors = minors.iter().map(|m| m.div_linear(l).expect("restriction vanished")).collect();
        }
    }
    let minors: Vec<HomForm3> = minors.into_iter().filter(|m| !m.is_zero()).collect();
    let d = minors[0].degree();
    if d == 0 {
        return Some(vec![]);
    }
    let eval_all = |pt: [u64; 3]| minors.iter().all(|m| m.eval(pt) == 0);
    for _attempt in 0..4 {
        let (g, _) = random_invertible(zp, rng);
        let moved: Vec<HomForm3> = minors.iter().map(|m| m.substitute_linear(g)).collect();
        let combo = |rng: &mut ChaCha8Rng| {
            moved.iter().fold(HomForm3::zero(zp, d), |acc, m| acc.add(&m.scale(rng.gen_range(1..zp.p()))))
        };
        let h1 = combo(rng);
        let h2 = combo(rng);
        // column in t of H(s, t, 1) as a polynomial in t
        let in_t = |h: &HomForm3, s: u64| -> Poly {
            let mut c = vec![0u64; d + 1];
            for (&coef, [i, j, _]) in h.coeffs().iter().zip(monomials(d)) {
                if coef != 0 {
                    c[j] = zp.mul_add(c[j], coef, zp.pow(s, i as u64));
                }
            }
            Poly::new(zp, c)
        };
        let npts = d * d + 1;
        let xs: Vec<u64> = (0..npts as u64).map(|i| i + 1).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&s| crate::exactmath::poly::resultant(&in_t(&h1, s), d, &in_t(&h2, s), d))
            .collect();
        let res = Poly::interpolate(zp, &xs, &ys);
        if res.is_zero() {
            continue;
        }
        let mut found: Vec<[u64; 3]> = Vec::new();
        let push = |pt: [u64; 3], found: &mut Vec<[u64; 3]>| {
            let orig = apply3(zp, g, pt);
            if eval_all(orig) && f.eval(orig) != 0 && !found.iter().any(|&p| same_point(zp, p, orig)) {
                found.push(normalize(zp, orig));
            }
        };
        for s in res.roots(rng) {
            let polys: Vec<Poly> = moved.iter().map(|m| in_t(m, s)).filter(|p| !p.is_zero()).collect();
            let gcd = polys.iter().skip(1).fold(polys.first().cloned().unwrap_or(Poly::zero(zp)), |a, b| a.gcd(b));
            if polys.is_empty() {
                // whole fibre is a zero: not isolated
                return None;
            }
            if gcd.degree().unwrap_or(0) > 0 {
                for t in gcd.roots(rng) {
                    push([s, t, 1], &mut found);
                }
            }
        }
        // the line u_z = 0 of the moved coordinates
        let on_inf: Vec<BinForm> = moved.iter().map(|m| m.restrict_to_line([0, 0, 1])).collect();
        match binary_common_zeros(zp, &on_inf, rng) {
            None => return None,
            Some(z) => {
                for (s, t) in z {
                    push(line_point(zp, [0, 0, 1], s, t), &mut found);
                }
            }
        }
        return Some(found);
    }
    None
}

/// Points where a tangent, non-Euler derivation vanishes as a section of the
/// logarithmic bundle. `None` when the zero set is not finite.
///
/// Off the arrangement a zero is a point where `θ` is proportional to the
/// position vector. On a line it must additionally satisfy the local
/// conditions of the logarithmic frame there.
pub fn section_base_locus(a: &Rua, field: &PrimeField, theta: &Derivation) -> Result<Option<Vec<[u64; 3]>>> {
    let zp = field.zp();
    let zeta = a.zeta_in(field)?;
    let forms = a.line_forms(field)?;
    let f = concrete_equation(a, field)?;
    let mut rng = rng_for(field, 2);
    let minor_degree = theta.degree() + 1;
    if (minor_degree * minor_degree + 1) as u64 >= zp.p() {
        // too few interpolation nodes for the resultant
        return section_base_locus_bruteforce(a, field, theta).map(Some);
    }
    let Some(mut out) = off_arrangement_zeros(theta, &forms, &f, &mut rng) else {
        return Ok(None);
    };
    let sing: Vec<([u64; 3], usize)> = singular_points(a)
        .iter()
        .map(|p| (p.key.coords(field, zeta), p.multiplicity()))
        .collect();
    for &(q, m) in &sing {
        if vanishes_at_multiple_point(theta, q, m) {
            out.push(normalize(zp, q));
        }
    }
    for &l in &forms {
        let corr = smooth_correction(theta, l);
        let restricted: Vec<BinForm> = corr.components().iter().map(|c| c.restrict_to_line(l)).collect();
        let Some(zs) = binary_common_zeros(zp, &restricted, &mut rng) else {
            return Ok(None);
        };
        for (s, t) in zs {
            let q = line_point(zp, l, s, t);
            if !sing.iter().any(|&(p, _)| same_point(zp, p, q)) {
                out.push(normalize(zp, q));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(Some(out))
}

/// Exhaustive version of [`section_base_locus`] over all points of `P²(F_p)`.
/// Only sensible for small `p`.
pub fn section_base_locus_bruteforce(a: &Rua, field: &PrimeField, theta: &Derivation) -> Result<Vec<[u64; 3]>> {
    let zp = field.zp();
    let p = zp.p();
    assert!(p < 10_000, "exhaustive scan over P^2(F_{p}) is too large");
    let forms = a.line_forms(field)?;
    let minors = theta.euler_minors();
    let corrections: Vec<Derivation> = forms.iter().map(|&l| smooth_correction(theta, l)).collect();
    let mut out = Vec::new();
    let mut visit = |pt: [u64; 3]| {
        if !minors.iter().all(|m| m.eval(pt) == 0) {
            return;
        }
        let on: Vec<usize> = (0..forms.len())
            .filter(|&i| (0..3).fold(0, |acc, c| zp.mul_add(acc, forms[i][c], pt[c])) == 0)
            .collect();
        let zero = match on.len() {
            0 => true,
            1 => corrections[on[0]].eval(pt) == [0, 0, 0],
            m => vanishes_at_multiple_point(theta, pt, m),
        };
        if zero {
            out.push(pt);
        }
    };
    visit([1, 0, 0]);
    for y in 0..p {
        visit([y, 1, 0]);
    }
    for x in 0..p {
        for y in 0..p {
            visit([x, y, 1]);
        }
    }
    let mut out: Vec<[u64; 3]> = out.into_iter().map(|q| normalize(zp, q)).collect();
    out.sort_unstable();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FreenessClass {
    Free { exponents: (usize, usize) },
    NearlyFree { exponents: (usize, usize), jumping_point: [u64; 3] },
    Other,
}

impl FreenessClass {
    pub fn name(&self) -> &'static str {
        match self {
            FreenessClass::Free { .. } => "free",
            FreenessClass::NearlyFree { .. } => "nearly_free",
            FreenessClass::Other => "other",
        }
    }

    pub fn exponents(&self) -> Option<(usize, usize)> {
        match *self {
            FreenessClass::Free { exponents } | FreenessClass::NearlyFree { exponents, .. } => Some(exponents),
            FreenessClass::Other => None,
        }
    }

    /// Splitting type on a generic line: the exponents when free, and
    /// `(mdr, lines - 1 - mdr)` when nearly free.
    pub fn generic_splitting(&self) -> Option<(usize, usize)> {
        match *self {
            FreenessClass::Free { exponents } => Some(exponents),
            FreenessClass::NearlyFree { exponents: (d1, d2), .. } => Some((d1, d2 - 1)),
            FreenessClass::Other => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, FreenessClass::Free { .. })
    }

    /// Class and exponents, ignoring field-dependent point coordinates.
    pub fn same_kind(&self, other: &FreenessClass) -> bool {
        self.name() == other.name() && self.exponents() == other.exponents()
    }
}

/// Outcome over a single field.
#[derive(Clone, Debug)]
pub struct PrimeAnalysis {
    pub field: PrimeField,
    pub mdr: usize,
    pub class: FreenessClass,
    pub certificate: Option<SaitoCertificate>,
    /// Base locus of a generic minimal section, when computed.
    pub base_locus: Option<Vec<[u64; 3]>>,
}

pub fn classify_over(a: &Rua, field: &PrimeField) -> Result<PrimeAnalysis> {
    let o = Oracle::new(a, field)?;
    let nl = o.line_count() as i64;
    let c2v = c2(a);
    let r = o.mdr();
    let gap = r as i64 * (nl - 1 - r as i64);
    let mut rng = rng_for(field, 3);
    let mut out = PrimeAnalysis {
        field: *field,
        mdr: r,
        class: FreenessClass::Other,
        certificate: None,
        base_locus: None,
    };
    if gap == c2v {
        let e2 = (nl - 1) as usize - r;
        if let Some(cert) = o.saito_certificate_at(r, e2, &mut rng) {
            let (e1, e2) = (r.min(e2), r.max(e2));
            out.class = FreenessClass::Free { exponents: (e1, e2) };
            out.certificate = Some(cert);
        }
    } else if gap == c2v - 1 {
        if let Some(theta) = o.generic_section(r, &mut rng) {
            let locus = section_base_locus(a, field, &theta)?;
            if let Some(pts) = &locus {
                if pts.len() == 1 {
                    out.class = FreenessClass::NearlyFree {
                        exponents: (r, nl as usize - r),
                        jumping_point: pts[0],
                    };
                }
            }
            out.base_locus = locus;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAgreement {
    pub p: u64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub class: FreenessClass,
    pub mdr: usize,
    pub c2: i64,
    pub primes: Vec<PrimeAgreement>,
    pub certificate: Option<(usize, usize)>,
}

impl FreenessReport {
    pub fn all_agree(&self) -> bool {
        self.primes.iter().all(|p| p.agree)
    }
}

/// JSON shape of a report.
#[derive(Serialize, Deserialize)]
struct ReportJson {
    class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponents: Option<(usize, usize)>,
    mdr: usize,
    c2: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    generic_splitting: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jumping_point: Option<[u64; 3]>,
    primes: Vec<PrimeAgreement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<(usize, usize)>,
    characteristic_note: String,
}

pub const CHARACTERISTIC_NOTE: &str =
    "freeness is certified over each listed prime field p ≡ 1 (mod n); agreement across primes is evidence for characteristic 0, not a proof";

impl Serialize for FreenessReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let jp = match &self.class {
            FreenessClass::NearlyFree { jumping_point, .. } => Some(*jumping_point),
            _ => None,
        };
        ReportJson {
            class: self.class.name().to_string(),
            exponents: self.class.exponents(),
            mdr: self.mdr,
            c2: self.c2,
            generic_splitting: self.class.generic_splitting(),
            jumping_point: jp,
            primes: self.primes.clone(),
            certificate: self.certificate,
            characteristic_note: CHARACTERISTIC_NOTE.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreenessReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ReportJson::deserialize(d)?;
        let class = match (j.class.as_str(), j.exponents, j.jumping_point) {
            ("free", Some(e), _) => FreenessClass::Free { exponents: e },
            ("nearly_free", Some(e), Some(p)) => FreenessClass::NearlyFree {
                exponents: e,
                jumping_point: p,
            },
            ("other", _, _) => FreenessClass::Other,
            (c, ..) => return Err(serde::de::Error::custom(format!("malformed class {c}"))),
        };
        Ok(FreenessReport {
            class,
            mdr: j.mdr,
            c2: j.c2,
            primes: j.primes,
            certificate: j.certificate,
        })
    }
}

/// Classifies over the first `primes` certification fields; the first
/// field's verdict is reported and every field is compared with it.
pub fn classify(a: &Rua, primes: usize) -> Result<FreenessReport> {
    assert!(primes >= 1, "at least one prime is needed");
    let fields = certification_fields(a.n(), primes);
    let runs: Vec<PrimeAnalysis> = fields.iter().map(|f| classify_over(a, f)).collect::<Result<_>>()?;
    Ok(report_from(a, &runs))
}

pub fn report_from(a: &Rua, runs: &[PrimeAnalysis]) -> FreenessReport {
    let first = &runs[0];
    FreenessReport {
        class: first.class.clone(),
        mdr: first.mdr,
        c2: c2(a),
        primes: runs
            .iter()
            .map(|r| PrimeAgreement {
                p: r.field.p(),
                agree: r.class.same_kind(&first.class) && r.mdr == first.mdr,
            })
            .collect(),
        certificate: first.certificate.as_ref().map(|c| c.degrees),
    }
}

// ---------------------------------------------------------------------------
// Restriction to a line

/// Exponents of the multiarrangement induced on `line`: each point `p` of the
/// arrangement on it gets multiplicity `m_p - 1`.
pub fn ziegler_exponents(a: &Rua, field: &PrimeField, line: Line) -> Result<(usize, usize)> {
    if !a.contains(line) {
        return Err(Error::LineNotPresent(line.to_string()));
    }
    let zp = field.zp();
    let lines = a.lines();
    let forms = a.line_forms(field)?;
    let h_idx = lines.iter().position(|&l| l == line).unwrap();
    let h = forms[h_idx];
    let par = line_parametrization(zp, h);
    // restriction of each other line: a binary linear form, grouped by proportionality
    let mut groups: Vec<([u64; 2], usize)> = Vec::new();
    for (i, &l) in forms.iter().enumerate() {
        if i == h_idx {
            continue;
        }
        let mut r = [0u64; 2];
        for c in 0..3 {
            let pc = par[c].coeffs();
            r[0] = zp.mul_add(r[0], l[c], pc[0]);
            r[1] = zp.mul_add(r[1], l[c], pc[1]);
        }
        let lead = if r[0] != 0 { r[0] } else { r[1] };
        let inv = zp.inv(lead);
        let r = r.map(|c| zp.mul(c, inv));
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1 += 1,
            None => groups.push((r, 1)),
        }
    }
    let total: usize = groups.iter().map(|g| g.1).sum();
    let dim = |d: usize| -> usize {
        // unknowns: P (d+1 coefficients) then Q
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for &([a1, b1], mu) in &groups {
            // new variables (σ, τ) with τ = a1 s + b1 t
            let (s_img, t_img) = if b1 != 0 {
                let ib = zp.inv(b1);
                (BinForm::linear(zp, 1, 0), BinForm::linear(zp, zp.neg(zp.mul(a1, ib)), ib))
            } else {
                (BinForm::linear(zp, 0, zp.inv(a1)), BinForm::linear(zp, 1, 0))
            };
            let mut spow = vec![BinForm::new(zp, vec![1])];
            let mut tpow = vec![BinForm::new(zp, vec![1])];
            for e in 1..=d {
                spow.push(spow[e - 1].mul(&s_img));
                tpow.push(tpow[e - 1].mul(&t_img));
            }
            let imgs: Vec<BinForm> = (0..=d).map(|i| spow[d - i].mul(&tpow[i])).collect();
            for tau_pow in 0..mu.min(d + 1) {
                let mut row = vec![0u64; 2 * (d + 1)];
                for (i, img) in imgs.iter().enumerate() {
                    let c = img.coeffs()[tau_pow];
                    row[i] = zp.mul(a1, c);
                    row[d + 1 + i] = zp.mul(b1, c);
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return 2 * (d + 1);
        }
        let mut m = FpMatrix::zeros(zp, 0, 2 * (d + 1));
        for r in rows {
            m.push_row(&r);
        }
        2 * (d + 1) - m.rank()
    };
    let d1 = (0..=total).find(|&d| dim(d) > 0).expect("derivations exist in degree Σμ");
    let d2 = total - d1;
    debug_assert_eq!(dim(d2), d2 - d1 + 2);
    Ok((d1.min(d2), d1.max(d2)))
}

/// Dimension of degree-`d` forms vanishing at every inner triple point.
pub fn curves_through_t(a: &Rua, field: &PrimeField, d: usize) -> Result<usize> {
    let zeta = a.zeta_in(field)?;
    let zp = field.zp();
    let [ea, eb, _] = a.exps();
    let pts: Vec<[u64; 3]> = inner_triples(a)
        .iter()
        .map(|t| PointKey::Inner([ea[t[0]], eb[t[1]], 0]).coords(field, zeta))
        .collect();
    let mons = monomials(d);
    let mut m = FpMatrix::zeros(zp, pts.len(), mons.len());
    for (r, &pt) in pts.iter().enumerate() {
        for (c, &e) in mons.iter().enumerate() {
            m.set(r, c, HomForm3::monomial(zp, e, 1).eval(pt));
        }
    }
    Ok(mons.len() - m.rank())
}
