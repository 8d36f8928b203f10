//! Combinatorial freeness predictors and the constructions they are tested on:
//! complement minimality for arrangements with all sides, the case table for
//! arrangements missing sides, greedy deletion paths, complete-intersection
//! examples, addition-deletion bookkeeping and the free / nearly free pairs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{
    delete_lines, full_monomial, make_rua, tr_signature, Family, Line, Rua, Sides, TrSignature,
};
use crate::combinatorics::{
    c2, ci_grid_for, complement_stats, inner_triples, interval_trem, min_trem, singular_points,
};
use crate::error::{Error, Result};
use crate::freeness::{classify, FreenessClass};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Prediction {
    PredictFree { exponents: (usize, usize) },
    PredictNotFree,
    NotApplicable { reason: String },
}

impl Prediction {
    fn free(e1: usize, e2: usize) -> Self {
        Prediction::PredictFree {
            exponents: (e1.min(e2), e1.max(e2)),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Prediction::PredictFree { .. })
    }

    pub fn exponents(&self) -> Option<(usize, usize)> {
        match self {
            Prediction::PredictFree { exponents } => Some(*exponents),
            _ => None,
        }
    }

    /// Free predictions must match class and exponents; a not-free prediction
    /// matches anything that is not free.
    pub fn agrees_with(&self, class: &FreenessClass) -> bool {
        match self {
            Prediction::PredictFree { exponents } => class.is_free() && class.exponents() == Some(*exponents),
            Prediction::PredictNotFree => !class.is_free(),
            Prediction::NotApplicable { .. } => false,
        }
    }
}

/// Integer roots of `e² - (lines-1)e + c2`, the only possible exponents.
fn exponent_roots(lines: usize, c2: i64) -> Option<(usize, usize)> {
    let s = lines as i64 - 1;
    let disc = s * s - 4 * c2;
    if disc < 0 {
        return None;
    }
    let r = disc.isqrt();
    if r * r != disc || (s - r) % 2 != 0 || s - r < 0 {
        return None;
    }
    Some((((s - r) / 2) as usize, ((s + r) / 2) as usize))
}

/// Freeness predicted from how few triple points the complement of `a` inside
/// `full_monomial(big_n)` has.
///
/// The arrangement is predicted free when its complement has no more triple
/// points than the interval construction reaches, and the Chern polynomial
/// splits over the integers; the exponents are its roots.
pub fn predict_free_complete(a: &Rua, big_n: u64) -> Result<Prediction> {
    if !a.has_all_sides() {
        return Ok(Prediction::NotApplicable {
            reason: "arrangement is missing a side".into(),
        });
    }
    let stats = complement_stats(a, big_n)?;
    let [sa, sb, sc] = tr_signature(a).abc();
    let Some(bound) = interval_trem(big_n, sa, sb, sc) else {
        return Ok(Prediction::NotApplicable {
            reason: format!("signature ({sa},{sb},{sc}) does not fit in N={big_n}"),
        });
    };
    if stats.t_rem as u64 > bound {
        return Ok(Prediction::PredictNotFree);
    }
    Ok(match exponent_roots(a.line_count(), c2(a)) {
        Some((e1, e2)) => Prediction::free(e1, e2),
        None => Prediction::PredictNotFree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionStep {
    pub deleted: Line,
    pub t_rem: usize,
    pub signature: TrSignature,
}

/// Deletes `quota[f]` inner lines of each family, every step taking a line
/// whose removal leaves the fewest complement triples (ties drawn from `rng`).
fn greedy_deletions(
    mut cur: Rua,
    big_n: u64,
    mut quota: [usize; 3],
    rng: &mut ChaCha8Rng,
    steps: &mut Vec<DeletionStep>,
) -> Result<Rua> {
    while quota.iter().any(|&q| q > 0) {
        let mut best: Vec<(Line, Rua, (usize, usize))> = Vec::new();
        for f in Family::ALL.into_iter().filter(|f| quota[f.index()] > 0) {
            for &e in cur.family(f) {
                let l = Line::Inner(f, e);
                let Ok(next) = delete_lines(&cur, &[l]) else { continue };
                let key = (complement_stats(&next, big_n)?.t_rem, sumset_spread(&next));
                match best.first().map(|b| b.2) {
                    Some(m) if key > m => {}
                    Some(m) if key == m => best.push((l, next, key)),
                    _ => best = vec![(l, next, key)],
                }
            }
        }
        let (l, next, (t, _)) = best
            .choose(rng)
            .cloned()
            .ok_or_else(|| Error::ConstructionFailed(format!("no deletable line left in {cur}")))?;
        quota[l.family().expect("inner line").index()] -= 1;
        steps.push(DeletionStep {
            deleted: l,
            t_rem: t,
            signature: tr_signature(&next),
        });
        cur = next;
    }
    Ok(cur)
}

/// Total size of the pairwise sumsets of the deleted exponents. Ties on the
/// triple count go to deletions that stay clustered, since scattered removals
/// close more triples later.
fn sumset_spread(a: &Rua) -> usize {
    let n = a.n();
    let removed: Vec<Vec<u64>> = a
        .exps()
        .iter()
        .map(|kept| (0..n).filter(|e| kept.binary_search(e).is_err()).collect())
        .collect();
    let mut total = 0;
    for (f, g) in [(0, 1), (1, 2), (0, 2)] {
        let sums: BTreeSet<u64> = removed[f]
            .iter()
            .flat_map(|x| removed[g].iter().map(move |y| (x + y) % n))
            .collect();
        total += sums.len();
    }
    total
}

fn removal_quota(big_n: u64, a: usize, b: usize, c: usize) -> Result<[usize; 3]> {
    let full = big_n as usize + 1;
    let sig = [a, b, c];
    if big_n == 0 || sig.iter().any(|&s| s == 0 || s > full) {
        return Err(Error::InvalidSignature(format!(
            "({a},{b},{c}) is not a signature inside full_monomial({big_n})"
        )));
    }
    Ok(sig.map(|s| full - s))
}

/// Greedy paths tried before settling for the best one found.
const GREEDY_RESTARTS: u64 = 64;

/// Greedy path from `full_monomial(big_n)` down to signature `(a, b, c)`.
///
/// Every step deletes a line minimizing the complement triple count. A step
/// minimum can still lead to a worse end, so paths are retried with further
/// tie-breaks until one reaches the interval construction's count.
pub fn greedy_free_path(big_n: u64, a: usize, b: usize, c: usize, seed: u64) -> Result<(Vec<DeletionStep>, Rua)> {
    let quota = removal_quota(big_n, a, b, c)?;
    let target = interval_trem(big_n, a, b, c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<DeletionStep>, Rua)> = None;
    for _ in 0..GREEDY_RESTARTS {
        let mut steps = Vec::new();
        let end = greedy_deletions(full_monomial(big_n), big_n, quota, &mut rng, &mut steps)?;
        let t = steps.last().map_or(0, |s| s.t_rem);
        if best.as_ref().is_none_or(|(b, _)| b.last().map_or(0, |s| s.t_rem) > t) {
            best = Some((steps, end));
        }
        if target.is_none_or(|m| t as u64 <= m) {
            break;
        }
    }
    Ok(best.expect("at least one path"))
}

fn grid(a: &Rua, f: Family, g: Family) -> bool {
    ci_grid_for(a, f, g).is_some()
}

fn both_sides_missing(a: &Rua, f: Family) -> bool {
    f.vertex().sides().iter().all(|&s| !a.sides().contains(s))
}

/// One labeling of the vertices: `roles[0]` plays `A`, `roles[1]` plays `B`
/// and `roles[2]` plays `C`. Vertex sizes count the lines through the vertex
/// in the complete arrangement, sides included.
fn uncomplete_case(a: &Rua, roles: [Family; 3]) -> Option<(usize, usize)> {
    let [fa, fb, fc] = roles;
    let size = |f: Family| a.family(f).len() + 1;
    let (sa, sb, sc) = (size(fa), size(fb), size(fc));
    let t = inner_triples(a).len();
    let ci = grid(a, fa, fb);
    let all_eq = sa == sb && sb == sc;
    let e = match a.sides().len() {
        // the missing side is (AB): it passes through the first two roles
        2 => {
            let ab = !a.sides().contains(fc.opposite_side());
            (ab && ci).then(|| (sc, sa + sb - 2))
        }
        // both missing sides meet at the vertex of the first role; b <= c
        1 => {
            if !both_sides_missing(a, fa) || sb > sc {
                None
            } else if sa == 2 {
                // restriction to the single inner line through that vertex
                (t + 1 == sb).then(|| (sb, sc - 1))
            } else {
                (sb == sc && ci).then(|| (sc, sa + sb - 3))
            }
        }
        // a <= b <= c; adding back the side opposite the first vertex gives
        // the two-sides case with exponents (a, b+c-3)
        0 if sa + 4 <= sb + sc => {
            if sa == 2 {
                (t + 1 == sb && (sb == 2 || sc == 3)).then(|| (2, sb + sc - 4))
            } else {
                (all_eq && ci).then(|| (sa, 2 * sa - 4))
            }
        }
        0 => match (sa, sb, sc) {
            (2, 2, 2) => (t == 0).then_some((1, 1)),
            (2, 2, 3) => (t == 1).then_some((1, 2)),
            (3, 3, 3) => ci.then_some((2, 3)),
            _ => None,
        },
        _ => None,
    }?;
    (e.0 + e.1 + 1 == a.line_count()).then_some(e)
}

/// Freeness of an arrangement missing one to three sides, from the inner
/// triple points and the vertex sizes.
///
/// One side missing: free iff the triple points form a grid between the two
/// families whose vertices the missing side joins. Two sides missing at a
/// vertex of size `a`, other sizes `b <= c`: for `a = 2` free iff there are
/// `b - 1` triple points, otherwise free iff `b = c` and the triple points
/// form an `(a-1) x (b-1)` grid. No side: reduced to the two-sides case by
/// adding back the side opposite the smallest vertex, plus the small cases
/// `(2,2,2)`, `(2,2,3)` and `(3,3,3)`. Every family needs an inner line.
pub fn predict_free_uncomplete(a: &Rua) -> Prediction {
    if a.has_all_sides() {
        return Prediction::NotApplicable {
            reason: "arrangement has all three sides".into(),
        };
    }
    if let Some(f) = Family::ALL.into_iter().find(|&f| a.family(f).is_empty()) {
        return Prediction::NotApplicable {
            reason: format!("no inner line through the vertex of family {f:?}"),
        };
    }
    let size = |f: Family| a.family(f).len();
    let perms = [
        [Family::A, Family::B, Family::C],
        [Family::A, Family::C, Family::B],
        [Family::B, Family::A, Family::C],
        [Family::B, Family::C, Family::A],
        [Family::C, Family::A, Family::B],
        [Family::C, Family::B, Family::A],
    ];
    // two sides missing fixes the first role; otherwise sizes are sorted
    let sorted = |p: &[Family; 3]| a.sides().len() == 1 || (size(p[0]) <= size(p[1]) && size(p[1]) <= size(p[2]));
    perms
        .into_iter()
        .filter(sorted)
        .find_map(|p| uncomplete_case(a, p))
        .map_or(Prediction::PredictNotFree, |(e1, e2)| Prediction::free(e1, e2))
}

/// Freeness prediction for any arrangement: the complement rule in `big_n`
/// when all sides are present, the case table otherwise.
pub fn predict(a: &Rua, big_n: u64) -> Result<Prediction> {
    if a.has_all_sides() {
        predict_free_complete(a, big_n)
    } else {
        Ok(predict_free_uncomplete(a))
    }
}

/// The arrangement whose triple points form an `(a-1) x (b-1)` grid, built with
/// modulus `c - 1`: the first two families take consecutive exponents, the third
/// takes every residue.
pub fn ci_example(a: usize, b: usize, c: usize) -> Result<Rua> {
    if c < 2 || a < 2 || b < 2 || a > c || b > c {
        return Err(Error::InvalidSignature(format!(
            "complete-intersection example needs 2 <= a, b <= c, got ({a},{b},{c})"
        )));
    }
    let n = (c - 1) as u64;
    make_rua(
        n,
        (0..a as u64 - 1).collect(),
        (0..b as u64 - 1).collect(),
        (0..n).collect(),
        Sides::ALL,
    )
}

/// Exponents after deleting a line meeting the rest in `t` points, from the
/// addition-deletion theorem. When both rules apply the second exponent drops.
pub fn addition_deletion(exponents: (usize, usize), t: usize) -> Option<(usize, usize)> {
    let (d1, d2) = exponents;
    if t == d1 + 1 && d2 > 0 {
        Some((d1, d2 - 1))
    } else if t == d2 + 1 && d1 > 0 {
        Some((d1 - 1, d2))
    } else {
        None
    }
}

/// Number of other lines' intersection points on `l`.
pub fn points_on_line(a: &Rua, l: Line) -> Result<usize> {
    if !a.contains(l) {
        return Err(Error::LineNotPresent(l.to_string()));
    }
    Ok(singular_points(a).iter().filter(|p| p.lines.contains(&l)).count())
}

/// The free / nearly free pair with equal weak combinatorics, both of type `(5,5,5)`.
pub fn twin_pair() -> (Rua, Rua) {
    let free = make_rua(6, vec![0, 1, 3, 5], vec![2, 3, 4, 5], vec![1, 2, 3, 4], Sides::ALL)
        .expect("free member is valid");
    let nearly = delete_lines(
        &full_monomial(5),
        &[Line::Inner(Family::A, 0), Line::Inner(Family::B, 0), Line::Inner(Family::C, 0)],
    )
    .expect("nearly free member is valid");
    (free, nearly)
}

/// A free and a nearly free arrangement of type `(2k+1, 2k+1, 2k+1)`, both with
/// `3k²` inner triple points.
///
/// The free member comes from a greedy path in `full_monomial(3k)`. The nearly
/// free member deletes `k-1` lines per family from `full_monomial(3k-1)`: greedy
/// steps first, and last a third-family line through the meeting point of two
/// already deleted lines, which drops one more triple point.
pub fn nearly_free_family(k: usize) -> Result<(Rua, Rua)> {
    if k < 2 {
        return Err(Error::InvalidSignature(format!("family index k must be at least 2, got {k}")));
    }
    let n = 2 * k + 1;
    let triples = 3 * k * k;
    let check = |a: &Rua, what: &str| {
        let t = inner_triples(a).len();
        if t == triples {
            Ok(())
        } else {
            Err(Error::ConstructionFailed(format!("{what} member has {t} triple points, expected {triples}")))
        }
    };

    let (_, free) = greedy_free_path(3 * k as u64, n, n, n, 0)?;
    check(&free, "free")?;

    let big_n = 3 * k as u64 - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut steps = Vec::new();
    let before = greedy_deletions(full_monomial(big_n), big_n, [k - 1, k - 1, k - 2], &mut rng, &mut steps)?;
    let base = complement_stats(&before, big_n)?.t_rem;
    let removed = |f: Family| -> Vec<u64> { (0..big_n).filter(|e| !before.family(f).contains(e)).collect() };
    let mut through: Vec<u64> = Vec::new();
    for &x in &removed(Family::A) {
        for &y in &removed(Family::B) {
            through.push((2 * big_n - x - y) % big_n);
        }
    }
    through.sort_unstable();
    through.dedup();
    let nearly = through
        .into_iter()
        .filter(|g| before.ec().contains(g))
        .filter_map(|g| delete_lines(&before, &[Line::Inner(Family::C, g)]).ok())
        .find(|cand| complement_stats(cand, big_n).is_ok_and(|s| s.t_rem == base + 1))
        .ok_or_else(|| Error::ConstructionFailed("no third-family line through a deleted crossing".into()))?;
    check(&nearly, "nearly free")?;
    Ok((free, nearly))
}

/// One line of an enumeration report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub arrangement: crate::arrangement::RuaFile,
    pub signature: TrSignature,
    pub t_rem: Option<usize>,
    pub min_trem: Option<u64>,
    pub prediction: Prediction,
    pub oracle_class: FreenessClass,
    pub agree: bool,
}

/// Prediction against the oracle for one arrangement inside `full_monomial(big_n)`.
pub fn evaluate(a: &Rua, big_n: u64, primes: usize) -> Result<EnumerationRecord> {
    let prediction = predict(a, big_n)?;
    let report = classify(a, primes)?;
    let sig = tr_signature(a);
    let (t_rem, min) = if a.has_all_sides() {
        (
            Some(complement_stats(a, big_n)?.t_rem),
            min_trem(big_n, sig.a, sig.b, sig.c),
        )
    } else {
        (None, None)
    };
    Ok(EnumerationRecord {
        arrangement: a.clone().into(),
        signature: sig,
        t_rem,
        min_trem: min,
        agree: prediction.agrees_with(&report.class),
        prediction,
        oracle_class: report.class,
    })
}

/// Every valid sub-arrangement of `full_monomial(big_n)` whose side set is in
/// `sides`, in the order of the inner-line subset index (then side order).
pub fn sub_arrangements(big_n: u64, sides: &[Sides]) -> Vec<Rua> {
    let n = big_n as usize;
    assert!(3 * n < 64, "enumeration limited to N <= 21");
    let mut out = Vec::new();
    for mask in 0u64..1 << (3 * n) {
        let fam = |f: usize| -> Vec<u64> { (0..big_n).filter(|&e| mask >> (f * n + e as usize) & 1 == 1).collect() };
        for &s in sides {
            if let Ok(a) = make_rua(big_n, fam(0), fam(1), fam(2), s) {
                out.push(a);
            }
        }
    }
    out
}

/// The seven side sets with at least one side missing.
pub fn missing_side_sets() -> Vec<Sides> {
    Sides::all_subsets().filter(|s| *s != Sides::ALL).collect()
}
