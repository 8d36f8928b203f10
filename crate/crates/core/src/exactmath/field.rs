//! Prime fields carrying a root of unity of prescribed order.

use serde::{Deserialize, Serialize};

/// Arithmetic modulo an odd prime `p < 2^32`.
///
/// Reduction uses a precomputed Barrett constant so the hot elimination loops
/// never execute a hardware division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zp {
    p: u64,
    barrett: u64,
}

impl Zp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32), "modulus {p} out of range");
        Zp {
            p,
            barrett: u64::MAX / p,
        }
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    /// Reduces any `x < 2^64`.
    #[inline(always)]
    pub fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    /// `a + b*c`
    #[inline(always)]
    pub fn mul_add(self, a: u64, b: u64, c: u64) -> u64 {
        self.reduce(a + b * c)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    /// Embeds a signed integer.
    pub fn from_i64(self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    /// Centered representative in `(-p/2, p/2]`, handy for printing.
    pub fn centered(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// A prime field `F_p` together with an element `zeta` of exact order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
    n: u64,
    zeta: u64,
    generator: u64,
}

impl PrimeField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn zeta(&self) -> u64 {
        self.zeta
    }

    /// The primitive root the field was built from.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn zp(&self) -> Zp {
        Zp::new(self.p)
    }

    /// `zeta^e` for any integer exponent (taken mod `n`).
    pub fn zeta_pow(&self, e: i64) -> u64 {
        let e = e.rem_euclid(self.n as i64) as u64;
        self.zp().pow(self.zeta, e)
    }

    /// A primitive `m`-th root of unity for any `m | n`.
    pub fn root_of_order(&self, m: u64) -> Option<u64> {
        if m == 0 || self.n % m != 0 {
            return None;
        }
        Some(self.zp().pow(self.zeta, self.n / m))
    }
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if m == q {
            return true;
        }
        if m % q == 0 {
            return false;
        }
    }
    let mut d = 17u64;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let zp = Zp::new(p);
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| zp.pow(g, (p - 1) / q) != 1))
        .expect("every prime has a primitive root")
}

/// Smallest odd prime `p >= min_p` with `p > n` and `p ≡ 1 (mod n)`, paired with
/// `zeta = g^((p-1)/n)` for the smallest primitive root `g`.
pub fn find_field(n: u64, min_p: u64) -> PrimeField {
    assert!(n >= 1, "root-of-unity order must be positive");
    let lower = min_p.max(n + 1).max(3);
    // first candidate ≡ 1 (mod n) that is >= lower
    let mut cand = lower + (1 + n - lower % n) % n;
    loop {
        if cand % 2 == 1 && is_prime(cand) {
            let g = primitive_root(cand);
            let zeta = Zp::new(cand).pow(g, (cand - 1) / n);
            return PrimeField {
                p: cand,
                n,
                zeta,
                generator: g,
            };
        }
        cand += n;
    }
}

/// The `count` fields used for multi-prime certification: the `i`-th is
/// `find_field(n, 2^20 * i)`.
pub fn certification_fields(n: u64, count: usize) -> Vec<PrimeField> {
    let mut out: Vec<PrimeField> = Vec::with_capacity(count);
    for i in 1..=count as u64 {
        let mut f = find_field(n, (1 << 20) * i);
        // n large enough that two windows collide: step past the previous prime
        while out.iter().any(|g| g.p == f.p) {
            f = find_field(n, f.p + 1);
        }
        out.push(f);
    }
    out
}
