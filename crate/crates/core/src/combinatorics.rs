//! Incidence data of a triangular arrangement, decided purely from exponent
//! arithmetic modulo `n` (never from field coordinates).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::arrangement::{complement_in, rescaled, Family, InnerLines, Line, Rua, Side, TrSignature, Vertex};
use crate::error::{Error, Result};
use crate::exactmath::{field::is_prime, PrimeField};

/// Inner triple points as index triples into the sorted exponent lists.
pub type TripleSet = Vec<[usize; 3]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Vertex,
    OnSide,
    Inner,
}

/// Identity of an intersection point in exponent terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKey {
    Vertex(Vertex),
    /// An inner line meeting the side it crosses away from the vertices.
    OnSide(Family, u64),
    /// The point where `A(α)`, `B(β)`, `C(γ)` would meet, `α+β+γ ≡ 0`.
    Inner([u64; 3]),
}

impl PointKey {
    pub fn kind(self) -> PointKind {
        match self {
            PointKey::Vertex(_) => PointKind::Vertex,
            PointKey::OnSide(..) => PointKind::OnSide,
            PointKey::Inner(_) => PointKind::Inner,
        }
    }

    /// Projective coordinates over a field containing the arrangement's roots of unity.
    pub fn coords(self, field: &PrimeField, zeta: u64) -> [u64; 3] {
        let zp = field.zp();
        let z = |e: u64| zp.pow(zeta, e);
        match self {
            PointKey::Vertex(v) => v.coords(),
            PointKey::OnSide(Family::A, e) => [z(e), 1, 0],
            PointKey::OnSide(Family::B, e) => [0, z(e), 1],
            PointKey::OnSide(Family::C, e) => [1, 0, z(e)],
            PointKey::Inner([a, b, _]) => [z(a + b), z(b), 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub key: PointKey,
    pub lines: Vec<Line>,
}

impl SingularPoint {
    pub fn kind(&self) -> PointKind {
        self.key.kind()
    }

    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakCombinatorics {
    pub lines: usize,
    pub t: BTreeMap<usize, usize>,
}

impl WeakCombinatorics {
    pub fn get(&self, m: usize) -> usize {
        self.t.get(&m).copied().unwrap_or(0)
    }
}

fn find(list: &[u64], e: u64) -> Option<usize> {
    list.binary_search(&e).ok()
}

fn neg_sum(n: u64, a: u64, b: u64) -> u64 {
    (2 * n - a - b) % n
}

/// All `(i, j, k)` with `ea[i] + eb[j] + ec[k] ≡ 0 (mod n)`, lexicographic.
pub fn triples_of(n: u64, exps: &[Vec<u64>; 3]) -> TripleSet {
    let mut out = Vec::new();
    for (i, &a) in exps[0].iter().enumerate() {
        for (j, &b) in exps[1].iter().enumerate() {
            if let Some(k) = find(&exps[2], neg_sum(n, a, b)) {
                out.push([i, j, k]);
            }
        }
    }
    out
}

pub fn count_triples(lines: &InnerLines) -> usize {
    triples_of(lines.n, &lines.exps).len()
}

pub fn inner_triples(a: &Rua) -> TripleSet {
    triples_of(a.n(), a.exps())
}

/// Every intersection point with all lines through it. Vertices first, then
/// side points, then inner points in key order.
pub fn singular_points(a: &Rua) -> Vec<SingularPoint> {
    let n = a.n();
    let [ea, eb, ec] = a.exps();
    let sides = a.sides();
    let mut out = Vec::new();
    for v in Vertex::ALL {
        let f = v.family();
        let mut lines: Vec<Line> = a.family(f).iter().map(|&e| Line::Inner(f, e)).collect();
        lines.extend(v.sides().into_iter().filter(|&s| sides.contains(s)).map(Line::Side));
        if lines.len() >= 2 {
            out.push(SingularPoint {
                key: PointKey::Vertex(v),
                lines,
            });
        }
    }
    for f in Family::ALL {
        let s = f.opposite_side();
        if sides.contains(s) {
            for &e in a.family(f) {
                out.push(SingularPoint {
                    key: PointKey::OnSide(f, e),
                    lines: vec![Line::Inner(f, e), Line::Side(s)],
                });
            }
        }
    }
    let mut inner = Vec::new();
    for &x in ea {
        for &y in eb {
            let z = neg_sum(n, x, y);
            let mut lines = vec![Line::Inner(Family::A, x), Line::Inner(Family::B, y)];
            if find(ec, z).is_some() {
                lines.push(Line::Inner(Family::C, z));
            }
            inner.push(SingularPoint {
                key: PointKey::Inner([x, y, z]),
                lines,
            });
        }
    }
    for &x in ea {
        for &z in ec {
            let y = neg_sum(n, x, z);
            if find(eb, y).is_none() {
                inner.push(SingularPoint {
                    key: PointKey::Inner([x, y, z]),
                    lines: vec![Line::Inner(Family::A, x), Line::Inner(Family::C, z)],
                });
            }
        }
    }
    for &y in eb {
        for &z in ec {
            let x = neg_sum(n, y, z);
            if find(ea, x).is_none() {
                inner.push(SingularPoint {
                    key: PointKey::Inner([x, y, z]),
                    lines: vec![Line::Inner(Family::B, y), Line::Inner(Family::C, z)],
                });
            }
        }
    }
    inner.sort_by_key(|p| p.key);
    out.extend(inner);
    debug_assert_eq!(pair_count(&out), binom2(a.line_count()));
    out
}

fn binom2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

fn pair_count(points: &[SingularPoint]) -> usize {
    points.iter().map(|p| binom2(p.multiplicity())).sum()
}

/// Checks `Σ binom(m_p, 2) = binom(lines, 2)`.
pub fn pair_count_identity(a: &Rua) -> bool {
    pair_count(&singular_points(a)) == binom2(a.line_count())
}

pub fn t_vector(a: &Rua) -> WeakCombinatorics {
    let mut t = BTreeMap::new();
    for p in singular_points(a) {
        *t.entry(p.multiplicity()).or_insert(0) += 1;
    }
    let w = WeakCombinatorics {
        lines: a.line_count(),
        t,
    };
    assert_eq!(
        w.t.iter().map(|(&m, &c)| c * binom2(m)).sum::<usize>(),
        binom2(w.lines),
        "pair-count identity violated for {a}"
    );
    w
}

/// `binom(N-1, 2) - Σ binom(m_p - 1, 2)`; cross-checked against the
/// signature formula `ab+bc+ca-a-b-c+1-|T|` when all sides are present.
pub fn c2(a: &Rua) -> i64 {
    let nl = a.line_count() as i64;
    let mut v = (nl - 1) * (nl - 2) / 2;
    for p in singular_points(a) {
        let m = p.multiplicity() as i64;
        v -= (m - 1) * (m - 2) / 2;
    }
    if a.has_all_sides() {
        assert_eq!(v, c2_signature(a), "c2 mismatch for {a}");
    }
    v
}

/// `ab+bc+ca-a-b-c+1-|T|` for an arrangement with all three sides.
pub fn c2_signature(a: &Rua) -> i64 {
    let [x, y, z] = [a.ea().len() as i64 + 1, a.eb().len() as i64 + 1, a.ec().len() as i64 + 1];
    x * y + y * z + z * x - x - y - z + 1 - inner_triples(a).len() as i64
}

/// Orientation of a complete-intersection grid: every inner line of `first`
/// meets every inner line of `second` in a triple point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiGrid {
    pub first: Family,
    pub second: Family,
    pub dims: (usize, usize),
}

/// Grid test for one ordered pair of families (both must be non-empty).
pub fn ci_grid_for(a: &Rua, first: Family, second: Family) -> Option<CiGrid> {
    let (e1, e2) = (a.family(first), a.family(second));
    if e1.is_empty() || e2.is_empty() {
        return None;
    }
    let t = inner_triples(a);
    if t.len() != e1.len() * e2.len() {
        return None;
    }
    let mut seen = vec![false; e1.len() * e2.len()];
    for tr in &t {
        let (i, j) = (tr[first.index()], tr[second.index()]);
        seen[i * e2.len() + j] = true;
    }
    seen.iter().all(|&s| s).then_some(CiGrid {
        first,
        second,
        dims: (e1.len(), e2.len()),
    })
}

pub fn is_ci_grid(a: &Rua) -> Option<CiGrid> {
    [(Family::A, Family::B), (Family::A, Family::C), (Family::B, Family::C)]
        .into_iter()
        .find_map(|(f, g)| ci_grid_for(a, f, g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirzebruchCheck {
    pub applicable: bool,
    pub holds: bool,
    pub slack: i64,
}

/// `t_2 + t_3 >= n + Σ_{i>=1} i t_{i+4}`, applicable when `t_n = t_{n-1} = t_{n-2} = 0`.
pub fn hirzebruch_check(a: &Rua) -> HirzebruchCheck {
    let w = t_vector(a);
    let n = w.lines;
    let applicable = (n.saturating_sub(2)..=n).all(|m| w.get(m) == 0);
    if !applicable {
        return HirzebruchCheck {
            applicable,
            holds: false,
            slack: 0,
        };
    }
    let lhs = (w.get(2) + w.get(3)) as i64;
    let rhs = n as i64 + w.t.iter().filter(|(&m, _)| m >= 5).map(|(&m, &c)| (m as i64 - 4) * c as i64).sum::<i64>();
    HirzebruchCheck {
        applicable,
        holds: lhs >= rhs,
        slack: lhs - rhs,
    }
}

/// Signature plus triple incidences, lines indexed by position in each family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CombinatoricsFile", into = "CombinatoricsFile")]
pub struct AbstractCombinatorics {
    sig: TrSignature,
    triples: TripleSet,
}

/// On-disk form; triple indices are 1-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinatoricsFile {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub sides: Vec<Side>,
    pub triples: Vec<[usize; 3]>,
}

impl TryFrom<CombinatoricsFile> for AbstractCombinatorics {
    type Error = Error;

    fn try_from(f: CombinatoricsFile) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(f.triples.len());
        for t in f.triples {
            if t.contains(&0) {
                return Err(Error::InvalidCombinatorics(format!("triple {t:?} is not 1-based")));
            }
            zero_based.push(t.map(|x| x - 1));
        }
        AbstractCombinatorics::new(
            TrSignature {
                a: f.a,
                b: f.b,
                c: f.c,
                sides: f.sides.into_iter().collect(),
            },
            zero_based,
        )
    }
}

impl From<AbstractCombinatorics> for CombinatoricsFile {
    fn from(c: AbstractCombinatorics) -> Self {
        CombinatoricsFile {
            a: c.sig.a,
            b: c.sig.b,
            c: c.sig.c,
            sides: c.sig.sides.iter().collect(),
            triples: c.triples.iter().map(|t| t.map(|x| x + 1)).collect(),
        }
    }
}

impl AbstractCombinatorics {
    /// Checks index bounds and duplicates only; geometric consistency is the
    /// realization module's business (see [`AbstractCombinatorics::violations`]).
    pub fn new(sig: TrSignature, mut triples: TripleSet) -> Result<Self> {
        if sig.a == 0 || sig.b == 0 || sig.c == 0 {
            return Err(Error::InvalidSignature("a, b, c must be positive".into()));
        }
        let bounds = [sig.a - 1, sig.b - 1, sig.c - 1];
        for t in &triples {
            if (0..3).any(|f| t[f] >= bounds[f]) {
                return Err(Error::InvalidCombinatorics(format!(
                    "triple {:?} out of range for {:?}",
                    t.map(|x| x + 1),
                    bounds
                )));
            }
        }
        triples.sort_unstable();
        if let Some(w) = triples.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidCombinatorics(format!("duplicate triple {:?}", w[0].map(|x| x + 1))));
        }
        Ok(AbstractCombinatorics { sig, triples })
    }

    pub fn signature(&self) -> TrSignature {
        self.sig
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Inner line counts per family.
    pub fn family_sizes(&self) -> [usize; 3] {
        [self.sig.a - 1, self.sig.b - 1, self.sig.c - 1]
    }

    /// Human-readable reasons why no arrangement can have these incidences:
    /// two triples sharing two lines, or more triples than the smallest grid allows.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (f, g) in [(0, 1), (0, 2), (1, 2)] {
            let mut seen = HashMap::new();
            for t in &self.triples {
                if let Some(prev) = seen.insert((t[f], t[g]), *t) {
                    out.push(format!(
                        "triples {:?} and {:?} share two lines",
                        prev.map(|x| x + 1),
                        t.map(|x| x + 1)
                    ));
                }
            }
        }
        let s = self.family_sizes();
        let bound = (s[0] * s[1]).min(s[0] * s[2]).min(s[1] * s[2]);
        if self.triples.len() > bound {
            out.push(format!("{} triples exceed the bound {bound}", self.triples.len()));
        }
        out
    }
}

pub fn extract_combinatorics(a: &Rua) -> AbstractCombinatorics {
    AbstractCombinatorics::new(crate::arrangement::tr_signature(a), inner_triples(a)).expect("extracted triples are in range")
}

/// Number of inner triple points on each inner line, per family in exponent order.
pub fn triples_per_line(a: &Rua) -> [Vec<usize>; 3] {
    let mut out = [vec![0; a.ea().len()], vec![0; a.eb().len()], vec![0; a.ec().len()]];
    for t in inner_triples(a) {
        for f in 0..3 {
            out[f][t[f]] += 1;
        }
    }
    out
}

/// Pairwise incidence: which point each pair of lines meets in.
struct Incidence {
    mult: Vec<usize>,
    point_of: Vec<Vec<u32>>,
    profile: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(a: &Rua) -> Self {
        let lines = a.lines();
        let idx: HashMap<Line, usize> = lines.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let pts = singular_points(a);
        let n = lines.len();
        let mut point_of = vec![vec![u32::MAX; n]; n];
        let mut profile = vec![Vec::new(); n];
        let mut mult = Vec::with_capacity(pts.len());
        for (pid, p) in pts.iter().enumerate() {
            mult.push(p.multiplicity());
            let ids: Vec<usize> = p.lines.iter().map(|l| idx[l]).collect();
            for &i in &ids {
                profile[i].push(p.multiplicity());
                for &j in &ids {
                    if i != j {
                        point_of[i][j] = pid as u32;
                    }
                }
            }
        }
        for p in &mut profile {
            p.sort_unstable();
        }
        Incidence {
            mult,
            point_of,
            profile,
        }
    }
}

struct IsoSearch<'a> {
    a: &'a Incidence,
    b: &'a Incidence,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    fwd: Vec<u32>,
    back: Vec<u32>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let l = self.order[depth];
        for m in 0..self.b.profile.len() {
            if self.used[m] || self.b.profile[m] != self.a.profile[l] {
                continue;
            }
            let mut assigned = Vec::new();
            let mut ok = true;
            for &lp in &self.order[..depth] {
                let mp = self.image[lp];
                let p = self.a.point_of[l][lp] as usize;
                let q = self.b.point_of[m][mp] as usize;
                if self.a.mult[p] != self.b.mult[q] {
                    ok = false;
                    break;
                }
                if self.fwd[p] == u32::MAX {
                    if self.back[q] != u32::MAX {
                        ok = false;
                        break;
                    }
                    self.fwd[p] = q as u32;
                    self.back[q] = p as u32;
                    assigned.push(p);
                } else if self.fwd[p] as usize != q {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.image[l] = m;
                self.used[m] = true;
                if self.extend(depth + 1) {
                    return true;
                }
                self.used[m] = false;
            }
            for p in assigned {
                self.back[self.fwd[p] as usize] = u32::MAX;
                self.fwd[p] = u32::MAX;
            }
        }
        false
    }
}

/// Whether the intersection lattices are isomorphic, by backtracking over
/// line bijections that respect per-line multiplicity profiles and induce a
/// consistent bijection of points.
pub fn same_combinatorics(a: &Rua, b: &Rua) -> bool {
    if a.line_count() != b.line_count() || t_vector(a) != t_vector(b) {
        return false;
    }
    let (ia, ib) = (Incidence::new(a), Incidence::new(b));
    let mut pa = ia.profile.clone();
    let mut pb = ib.profile.clone();
    pa.sort();
    pb.sort();
    if pa != pb {
        return false;
    }
    // rarest profiles first, then lines sharing high-multiplicity points
    let mut class_size: HashMap<&Vec<usize>, usize> = HashMap::new();
    for p in &ia.profile {
        *class_size.entry(p).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..ia.profile.len()).collect();
    order.sort_by_key(|&l| (class_size[&ia.profile[l]], std::cmp::Reverse(ia.profile[l].clone())));
    let n = order.len();
    let mut s = IsoSearch {
        a: &ia,
        b: &ib,
        order,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        fwd: vec![u32::MAX; ia.mult.len()],
        back: vec![u32::MAX; ib.mult.len()],
    };
    s.extend(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementStats {
    pub t_rem: usize,
    pub identity_holds: bool,
}

/// Triple count of the complement in `full_monomial(big_n)` and the identity
/// `|T| = N² - (N+2)(a+b+c-3) - 3 + ab+ac+bc - |T_rem|`.
pub fn complement_stats(a: &Rua, big_n: u64) -> Result<ComplementStats> {
    if !a.has_all_sides() {
        return Err(Error::InvalidSignature("complement statistics need all three sides".into()));
    }
    let comp = complement_in(a, big_n)?;
    let t_rem = count_triples(&comp);
    let t = triples_of(big_n, &rescaled(a, big_n)?).len() as i64;
    let [x, y, z] = [a.ea().len() as i64 + 1, a.eb().len() as i64 + 1, a.ec().len() as i64 + 1];
    let nn = big_n as i64;
    let rhs = nn * nn - (nn + 2) * (x + y + z - 3) - 3 + x * y + x * z + y * z - t_rem as i64;
    Ok(ComplementStats {
        t_rem,
        identity_holds: t == rhs,
    })
}

/// Numbers of lines removed from each family of `full_monomial(big_n)` to reach signature `(a, b, c)`.
fn removal_sizes(big_n: u64, a: usize, b: usize, c: usize) -> Option<[usize; 3]> {
    let full = big_n as usize + 1;
    if a == 0 || b == 0 || c == 0 || a > full || b > full || c > full {
        return None;
    }
    Some([full - a, full - b, full - c])
}

fn subsets_containing_zero(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    // choose k-1 more elements among 1..n
    fn rec(start: usize, n: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for e in start..=n - left {
            rec(e + 1, n, left - 1, acc | 1 << e, out);
        }
    }
    rec(1, n, k - 1, 1, &mut out);
    out
}

/// Sum of the `k` smallest values of the representation function of `R1 + R2`
/// (that is the fewest triples a third set of size `k` can close).
fn fewest_closed(n: usize, r1: u64, r2: u64, k: usize, rho: &mut [u32]) -> u64 {
    rho.iter_mut().for_each(|x| *x = 0);
    for x in 0..n {
        if r1 >> x & 1 == 0 {
            continue;
        }
        for y in 0..n {
            if r2 >> y & 1 == 1 {
                rho[(x + y) % n] += 1;
            }
        }
    }
    rho.sort_unstable();
    rho[..k].iter().map(|&v| v as u64).sum()
}

/// Largest `big_n` for which [`min_trem`] searches exhaustively.
pub const MIN_TREM_SEARCH_LIMIT: u64 = 13;

/// Exhaustive minimum of `|T_rem|` over all ways of deleting inner lines from
/// `full_monomial(big_n)` down to signature `(a, b, c)`. Translations let the
/// first two removed sets contain 0; the third set is chosen optimally.
pub fn min_trem_bruteforce(big_n: u64, a: usize, b: usize, c: usize) -> Option<u64> {
    let mut r = removal_sizes(big_n, a, b, c)?;
    if big_n > 63 {
        return None;
    }
    r.sort_unstable();
    let n = big_n as usize;
    if r[0] == 0 {
        return Some(0);
    }
    let s1 = subsets_containing_zero(n, r[0]);
    let s2 = subsets_containing_zero(n, r[1]);
    let mut rho = vec![0u32; n];
    let mut best = u64::MAX;
    for &x in &s1 {
        for &y in &s2 {
            best = best.min(fewest_closed(n, x, y, r[2], &mut rho));
            if best == 0 {
                return Some(0);
            }
        }
    }
    Some(best)
}

/// Same quantity for prime `big_n`, from arithmetic progressions: the most
/// popular sums of two intervals are as concentrated as possible, so the
/// complement of the top `N - r3` sums is the cheapest third set.
fn min_trem_prime(big_n: u64, r: [usize; 3]) -> u64 {
    let n = big_n as usize;
    let mut r = r;
    r.sort_unstable();
    let ival = |k: usize| (0..k).fold(0u64, |acc, e| acc | 1 << e);
    let mut rho = vec![0u32; n];
    if n > 63 {
        // interval sums have a closed form; avoid the bitmask width limit
        let mut rho: Vec<u64> = vec![0; n];
        for x in 0..r[0] {
            for y in 0..r[1] {
                rho[(x + y) % n] += 1;
            }
        }
        rho.sort_unstable();
        return rho[..r[2]].iter().sum();
    }
    fewest_closed(n, ival(r[0]), ival(r[1]), r[2], &mut rho)
}

/// The fewest inner triple points the complement of a signature-`(a, b, c)`
/// sub-arrangement of `full_monomial(big_n)` can have.
///
/// Exact by search for `big_n <= MIN_TREM_SEARCH_LIMIT`, and by the interval
/// construction for prime `big_n`; `None` otherwise or for impossible signatures.
pub fn min_trem(big_n: u64, a: usize, b: usize, c: usize) -> Option<u64> {
    let r = removal_sizes(big_n, a, b, c)?;
    if big_n <= MIN_TREM_SEARCH_LIMIT {
        min_trem_bruteforce(big_n, a, b, c)
    } else if is_prime(big_n) {
        Some(if r.contains(&0) { 0 } else { min_trem_prime(big_n, r) })
    } else {
        None
    }
}

/// Complement triple count reached by the interval construction: two families
/// lose the lines with exponents `0..r_i` and `0..r_j`, the third loses the
/// lines closing the fewest triples with them. Best of the three choices of
/// third family. `None` for impossible signatures.
///
/// For prime `big_n` this is the true minimum; for composite `big_n` it can
/// exceed [`min_trem`], since a subgroup can absorb more sums.
pub fn interval_trem(big_n: u64, a: usize, b: usize, c: usize) -> Option<u64> {
    let r = removal_sizes(big_n, a, b, c)?;
    let n = big_n as usize;
    let mut best = u64::MAX;
    for third in 0..3 {
        let (i, j) = [(1, 2), (0, 2), (0, 1)][third];
        let mut rho = vec![0u64; n];
        for x in 0..r[i] {
            for y in 0..r[j] {
                rho[(x + y) % n] += 1;
            }
        }
        rho.sort_unstable();
        best = best.min(rho[..r[third]].iter().sum());
    }
    Some(best)
}

/// The closed form from the balanced analysis: 0 when `2N <= a+b+c-3`,
/// otherwise `floor(r²/4)` with `r = 2N+3-a-b-c`. It only bounds the true
/// minimum from above when no family is left intact.
pub fn min_trem_closed_form(big_n: u64, a: usize, b: usize, c: usize) -> u64 {
    let s = (a + b + c) as i64;
    let nn = big_n as i64;
    if 2 * nn <= s - 3 {
        0
    } else {
        let r = 2 * nn + 3 - s;
        (r * r / 4) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{delete_lines, full_monomial, make_rua, Sides};

    pub fn a0() -> Rua {
        let del: Vec<Line> = [
            Line::Inner(Family::A, 2),
            Line::Inner(Family::A, 4),
            Line::Inner(Family::B, 0),
            Line::Inner(Family::B, 1),
            Line::Inner(Family::C, 0),
            Line::Inner(Family::C, 5),
        ]
        .to_vec();
        delete_lines(&full_monomial(6), &del).unwrap()
    }

    pub fn a1() -> Rua {
        let del = [Line::Inner(Family::A, 0), Line::Inner(Family::B, 0), Line::Inner(Family::C, 0)];
        delete_lines(&full_monomial(5), &del).unwrap()
    }

    fn triangle() -> Rua {
        make_rua(1, vec![], vec![], vec![], Sides::ALL).unwrap()
    }

    fn tv(a: &Rua) -> Vec<(usize, usize)> {
        t_vector(a).t.into_iter().collect()
    }

    #[test]
    fn twin_pair_exponents() {
        assert_eq!(a0().ea(), &[0, 1, 3, 5]);
        assert_eq!(a0().eb(), &[2, 3, 4, 5]);
        assert_eq!(a0().ec(), &[1, 2, 3, 4]);
        assert_eq!(a1().ea(), &[1, 2, 3, 4]);
    }

    #[test]
    fn triples_examples() {
        assert_eq!(inner_triples(&full_monomial(2)).len(), 4);
        assert_eq!(inner_triples(&a0()).len(), 12);
        assert_eq!(inner_triples(&a1()).len(), 12);
        assert!(inner_triples(&triangle()).is_empty());
    }

    #[test]
    fn point_examples() {
        let pts = singular_points(&triangle());
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.multiplicity() == 2 && p.kind() == PointKind::Vertex));
        assert_eq!(tv(&full_monomial(2)), vec![(2, 6), (3, 4), (4, 3)]);
        assert_eq!(tv(&a0()), vec![(2, 24), (3, 12), (6, 3)]);
        assert_eq!(t_vector(&a0()), t_vector(&a1()));
    }

    #[test]
    fn c2_examples() {
        assert_eq!(c2(&full_monomial(5)), 66);
        assert_eq!(c2(&a0()), 49);
        assert_eq!(c2(&a1()), 49);
        assert_eq!(c2(&triangle()), 1);
    }

    #[test]
    fn grid_examples() {
        for n in 1..6 {
            let g = is_ci_grid(&full_monomial(n)).unwrap();
            assert_eq!(g.dims, (n as usize, n as usize));
        }
        assert_eq!(is_ci_grid(&a1()), None);
        let e = make_rua(3, vec![0, 1], vec![0, 1], vec![0, 1, 2], Sides::ALL).unwrap();
        assert_eq!(is_ci_grid(&e).unwrap().dims, (2, 2));
    }

    #[test]
    fn hirzebruch_examples() {
        let h = hirzebruch_check(&a0());
        assert!(h.applicable && h.holds);
        assert_eq!(h.slack, 15);
        assert!(!hirzebruch_check(&triangle()).applicable);
        let h = hirzebruch_check(&full_monomial(2));
        assert_eq!((h.applicable, h.holds, h.slack), (true, true, 1));
    }

    #[test]
    fn lattice_isomorphism() {
        assert!(same_combinatorics(&a0(), &a0()));
        assert!(!same_combinatorics(&a0(), &a1()));
        let shifted = make_rua(2, vec![0, 1], vec![0, 1], vec![0, 1], Sides::ALL).unwrap();
        assert!(same_combinatorics(&full_monomial(2), &shifted));
        // shifting A by +1 and B by -1 keeps every exponent sum
        let x = make_rua(5, vec![0, 1], vec![2], vec![3, 4], Sides::ALL).unwrap();
        let y = make_rua(5, vec![1, 2], vec![1], vec![3, 4], Sides::ALL).unwrap();
        assert!(same_combinatorics(&x, &y));
        // a relabeling of families is a lattice isomorphism too
        let x = make_rua(7, vec![1, 2], vec![3], vec![4, 6], Sides::ALL).unwrap();
        let y = make_rua(7, vec![3], vec![4, 6], vec![1, 2], Sides::ALL).unwrap();
        assert!(same_combinatorics(&x, &y));
    }

    #[test]
    fn diagonal_partitions() {
        let mut p0: Vec<Vec<usize>> = triples_per_line(&a0()).into_iter().collect();
        let p1 = triples_per_line(&a1());
        assert!(p1.iter().all(|f| f == &vec![3, 3, 3, 3]));
        p0.iter_mut().for_each(|v| v.sort_unstable());
        p0.sort();
        assert_eq!(p0, vec![vec![2, 3, 3, 4], vec![3, 3, 3, 3], vec![3, 3, 3, 3]]);
        assert!(triples_per_line(&triangle()).iter().all(Vec::is_empty));
    }

    #[test]
    fn complement_examples() {
        let s = complement_stats(&a0(), 6).unwrap();
        assert_eq!((s.t_rem, s.identity_holds), (0, true));
        let s = complement_stats(&a1(), 5).unwrap();
        assert_eq!((s.t_rem, s.identity_holds), (1, true));
        for n in 1..6 {
            let s = complement_stats(&full_monomial(n), n).unwrap();
            assert_eq!((s.t_rem, s.identity_holds), (0, true));
        }
    }

    #[test]
    fn min_trem_examples() {
        assert_eq!(min_trem(6, 5, 5, 5), Some(0));
        assert_eq!(min_trem(5, 5, 5, 5), Some(0));
        assert_eq!(min_trem(5, 4, 4, 4), Some(0));
        assert_eq!(min_trem_closed_form(5, 4, 4, 4), 0);
        // subgroup {0, 2} of Z/4 beats every interval
        assert_eq!(min_trem(4, 3, 3, 3), Some(0));
        assert_eq!(min_trem_closed_form(4, 3, 3, 3), 1);
    }

    #[test]
    fn interval_minimum_matches_search_for_primes() {
        for p in [5u64, 7, 11] {
            for a in 1..=p as usize + 1 {
                for b in a..=p as usize + 1 {
                    for c in b..=p as usize + 1 {
                        let r = removal_sizes(p, a, b, c).unwrap();
                        let formula = if r.contains(&0) { 0 } else { min_trem_prime(p, r) };
                        assert_eq!(Some(formula), min_trem_bruteforce(p, a, b, c), "p={p} {a},{b},{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn combinatorics_file_round_trip() {
        let c = extract_combinatorics(&full_monomial(2));
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with(r#"{"a":3,"b":3,"c":3,"sides":["X","Y","Z"],"triples":[[1,1,1],"#));
        let back: AbstractCombinatorics = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<AbstractCombinatorics>(r#"{"a":2,"b":2,"c":2,"sides":[],"triples":[[0,1,1]]}"#).is_err());
    }
}
