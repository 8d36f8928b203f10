//! Realizing abstract triangular combinatorics by a root-of-unity arrangement.
//!
//! Exponents are unknowns `v_i` (first family), `w_j`, `t_k`. Every prescribed
//! triple gives `v_i + w_j + t_k = 0`; every other triple and every pair of lines
//! in one family gives a linear form that must not vanish. Integer solutions
//! are sampled from the kernel lattice, and a modulus larger than twice every
//! form value turns them into exponents. Targets whose lines only separate
//! with torsion (the full monomial grid, for one) are searched modulo `n`
//! directly, over increasing `n`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{make_rua, Family, Rua};
use crate::combinatorics::{extract_combinatorics, same_combinatorics, AbstractCombinatorics};
use crate::error::{Error, Result};
use crate::exactmath::{integer_kernel, IntMatrix};
use crate::freeness::{classify, FreenessReport};

/// Sample rounds; the coefficient bound doubles after each.
const ROUNDS: usize = 8;
const SAMPLES_PER_ROUND: usize = 64;
/// Largest modulus tried when integer solutions cannot separate the lines.
const MODULUS_CAP: u64 = 256;
const SAMPLES_PER_MODULUS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationProblem {
    pub target: AbstractCombinatorics,
    pub bound: u64,
    pub seed: u64,
}

impl RealizationProblem {
    pub fn new(target: AbstractCombinatorics, seed: u64) -> Self {
        RealizationProblem { target, bound: 2, seed }
    }
}

/// A relation every solution of the triple equations satisfies although the
/// target forbids it. Line indices are 1-based, as in combinatorics files.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum ForcedRelation {
    /// Two lines of one family would coincide.
    Coincident { family: Family, lines: [usize; 2] },
    /// Three lines would meet although the triple is not prescribed.
    ExtraTriple { lines: [usize; 3] },
}

impl fmt::Display for ForcedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForcedRelation::Coincident { family, lines } => {
                write!(f, "lines {} and {} of family {family:?} coincide", lines[0], lines[1])
            }
            ForcedRelation::ExtraTriple { lines } => {
                write!(f, "lines {:?} are concurrent", lines)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    /// `line_map[f][i]` is the position of target line `i` of family `f` among
    /// the sorted exponents of the arrangement.
    Realized {
        rua: crate::arrangement::RuaFile,
        line_map: [Vec<usize>; 3],
    },
    Forced { relations: Vec<ForcedRelation> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationResult {
    pub outcome: Outcome,
    pub attempts: usize,
    pub modulus: Option<u64>,
}

impl RealizationResult {
    pub fn rua(&self) -> Option<Rua> {
        match &self.outcome {
            Outcome::Realized { rua, .. } => Some(Rua::try_from(rua.clone()).expect("realized arrangements are valid")),
            Outcome::Forced { .. } => None,
        }
    }
}

/// A linear form in the exponent unknowns, as (variable, coefficient) pairs.
type Form = Vec<(usize, i64)>;

struct System {
    sizes: [usize; 3],
    offsets: [usize; 3],
    equalities: Vec<Form>,
    forbidden: Vec<(ForcedRelation, Form)>,
}

impl System {
    fn new(c: &AbstractCombinatorics) -> Self {
        let sizes = c.family_sizes();
        let offsets = [0, sizes[0], sizes[0] + sizes[1]];
        let var = |f: usize, i: usize| offsets[f] + i;
        let triple_form = |t: [usize; 3]| -> Form { (0..3).map(|f| (var(f, t[f]), 1)).collect() };
        let equalities = c.triples().iter().map(|&t| triple_form(t)).collect();
        let prescribed: BTreeSet<[usize; 3]> = c.triples().iter().copied().collect();
        let mut forbidden = Vec::new();
        for (f, fam) in Family::ALL.into_iter().enumerate() {
            for i in 0..sizes[f] {
                for j in i + 1..sizes[f] {
                    forbidden.push((
                        ForcedRelation::Coincident {
                            family: fam,
                            lines: [i + 1, j + 1],
                        },
                        vec![(var(f, i), 1), (var(f, j), -1)],
                    ));
                }
            }
        }
        for i in 0..sizes[0] {
            for j in 0..sizes[1] {
                for k in 0..sizes[2] {
                    if !prescribed.contains(&[i, j, k]) {
                        forbidden.push((
                            ForcedRelation::ExtraTriple {
                                lines: [i + 1, j + 1, k + 1],
                            },
                            triple_form([i, j, k]),
                        ));
                    }
                }
            }
        }
        System {
            sizes,
            offsets,
            equalities,
            forbidden,
        }
    }

    fn vars(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .equalities
            .iter()
            .map(|form| {
                let mut r = vec![0; self.vars()];
                for &(v, c) in form {
                    r[v] += c;
                }
                r
            })
            .collect();
        IntMatrix::from_rows_i64(self.vars(), &rows)
    }

    /// Generators of `{x : Mx = 0 mod n}`, the projection of the kernel of
    /// `[M | nI]`.
    fn lattice_mod(&self, n: u64) -> Vec<Vec<BigInt>> {
        let r = self.equalities.len();
        let v = self.vars();
        let rows: Vec<Vec<i64>> = self
            .equalities
            .iter()
            .enumerate()
            .map(|(i, form)| {
                let mut row = vec![0; v + r];
                for &(var, c) in form {
                    row[var] += c;
                }
                row[v + i] = n as i64;
                row
            })
            .collect();
        integer_kernel(&IntMatrix::from_rows_i64(v + r, &rows))
            .columns()
            .into_iter()
            .map(|mut c| {
                c.truncate(v);
                c
            })
            .collect()
    }

    /// The kernel lattice basis, checked against the always-present solution
    /// `v = -1, w = 2, t = -1`.
    fn kernel(&self) -> Vec<Vec<BigInt>> {
        let m = self.matrix();
        let k = integer_kernel(&m);
        let mut balanced = vec![BigInt::from(-1); self.vars()];
        for x in &mut balanced[self.offsets[1]..self.offsets[2]] {
            *x = BigInt::from(2);
        }
        assert!(m.mul_vec(&balanced).iter().all(Zero::is_zero), "balanced vector must solve the triple equations");
        assert!(self.vars() == 0 || k.cols() > 0, "kernel cannot be trivial");
        k.columns()
    }
}

fn eval(form: &Form, x: &[i128]) -> i128 {
    form.iter().map(|&(v, c)| c as i128 * x[v]).sum()
}

fn eval_big(form: &Form, x: &[BigInt]) -> BigInt {
    form.iter().map(|&(v, c)| BigInt::from(c) * &x[v]).sum()
}

/// Forbidden forms vanishing on every integer solution: those in the rational
/// row space of the triple equations.
fn rationally_forced(sys: &System, kernel: &[Vec<BigInt>]) -> Vec<usize> {
    (0..sys.forbidden.len())
        .filter(|&i| kernel.iter().all(|u| eval_big(&sys.forbidden[i].1, u).is_zero()))
        .collect()
}

/// Whether a form is an integer combination of the triple equations, so that
/// it vanishes on every solution modulo every `n`.
fn integrally_forced(sys: &System, form: &Form) -> bool {
    let r = sys.equalities.len();
    let mut cols: Vec<Vec<i64>> = sys
        .equalities
        .iter()
        .chain(std::iter::once(form))
        .map(|f| {
            let mut c = vec![0; sys.vars()];
            for &(v, k) in f {
                c[v] += k;
            }
            c
        })
        .collect();
    // rows of the matrix are the variables
    let rows: Vec<Vec<i64>> = (0..sys.vars()).map(|v| cols.iter_mut().map(|c| c[v]).collect()).collect();
    let k = integer_kernel(&IntMatrix::from_rows_i64(r + 1, &rows));
    let g = k.columns().iter().fold(BigInt::zero(), |acc, c| acc.gcd(&c[r]));
    g == BigInt::from(1)
}

fn forced_in(sys: &System, kernel: &[Vec<BigInt>]) -> Vec<ForcedRelation> {
    rationally_forced(sys, kernel)
        .into_iter()
        .filter(|&i| integrally_forced(sys, &sys.forbidden[i].1))
        .map(|i| sys.forbidden[i].0.clone())
        .collect()
}

/// Relations among distinct lines that hold in every solution of the triple
/// equations, over the integers and modulo every `n`. Empty when the target
/// passes this necessary consistency condition.
pub fn forced_relations(c: &AbstractCombinatorics) -> Vec<ForcedRelation> {
    let sys = System::new(c);
    forced_in(&sys, &sys.kernel())
}

/// Exponents per family in target order, reduced mod `n`, when they realize
/// the target exactly.
fn verify(c: &AbstractCombinatorics, sys: &System, x: &[i128], n: u64) -> Option<(Rua, [Vec<usize>; 3])> {
    let m = n as i128;
    let exps: [Vec<u64>; 3] =
        [0, 1, 2].map(|f| (0..sys.sizes[f]).map(|i| x[sys.offsets[f] + i].rem_euclid(m) as u64).collect());
    let prescribed: BTreeSet<[usize; 3]> = c.triples().iter().copied().collect();
    for i in 0..sys.sizes[0] {
        for j in 0..sys.sizes[1] {
            for k in 0..sys.sizes[2] {
                let meets = (exps[0][i] + exps[1][j] + exps[2][k]) % n == 0;
                if meets != prescribed.contains(&[i, j, k]) {
                    return None;
                }
            }
        }
    }
    let sig = c.signature();
    let rua = make_rua(n, exps[0].clone(), exps[1].clone(), exps[2].clone(), sig.sides).ok()?;
    let line_map = [0, 1, 2].map(|f| {
        exps[f]
            .iter()
            .map(|e| rua.exps()[f].binary_search(e).expect("exponent present"))
            .collect::<Vec<_>>()
    });
    // the arrangement's own combinatorics, relabeled into target order
    let ext = extract_combinatorics(&rua);
    let mut back: Vec<[usize; 3]> = ext
        .triples()
        .iter()
        .map(|t| [0, 1, 2].map(|f| line_map[f].iter().position(|&p| p == t[f]).expect("line mapped")))
        .collect();
    back.sort_unstable();
    assert_eq!(back, c.triples(), "realized triples differ from the target");
    assert_eq!(ext.signature(), sig);
    Some((rua, line_map))
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A root-of-unity arrangement with exactly the target's combinatorics, or
/// the relations that rule every such arrangement out.
pub fn realize_as_rua(problem: &RealizationProblem) -> Result<RealizationResult> {
    let c = &problem.target;
    let sys = System::new(c);
    let kernel = sys.kernel();
    let forced = forced_in(&sys, &kernel);
    if !forced.is_empty() {
        return Ok(RealizationResult {
            outcome: Outcome::Forced { relations: forced },
            attempts: 0,
            modulus: None,
        });
    }
    let mut attempts = 0;
    if rationally_forced(&sys, &kernel).is_empty() {
        if let Some(res) = sample_integral(c, &sys, &kernel, problem, &mut attempts)? {
            return Ok(res);
        }
    }
    if let Some(res) = sample_modular(c, &sys, problem.seed, &mut attempts) {
        return Ok(res);
    }
    Err(Error::SamplingExhausted { attempts })
}

fn realized(rua: Rua, line_map: [Vec<usize>; 3], attempts: usize) -> RealizationResult {
    let n = rua.n();
    RealizationResult {
        outcome: Outcome::Realized {
            rua: rua.into(),
            line_map,
        },
        attempts,
        modulus: Some(n),
    }
}

/// Integer solutions with every forbidden form nonzero, reduced modulo twice
/// the largest form value plus one.
fn sample_integral(
    c: &AbstractCombinatorics,
    sys: &System,
    kernel: &[Vec<BigInt>],
    problem: &RealizationProblem,
    attempts: &mut usize,
) -> Result<Option<RealizationResult>> {
    let kernel: Vec<Vec<i128>> = kernel
        .iter()
        .map(|u| u.iter().map(|v| v.to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidCombinatorics("kernel entries out of range".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    let mut bound = problem.bound.max(1) as i128;
    for _ in 0..ROUNDS {
        for _ in 0..SAMPLES_PER_ROUND {
            *attempts += 1;
            let mut x = vec![0i128; sys.vars()];
            for u in &kernel {
                let coef = rng.gen_range(-bound..=bound);
                for (xi, ui) in x.iter_mut().zip(u) {
                    *xi += coef * ui;
                }
            }
            let values: Vec<i128> = sys.forbidden.iter().map(|(_, f)| eval(f, &x)).collect();
            if values.contains(&0) {
                continue;
            }
            let big_m = values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
            let n = u64::try_from(2 * big_m + 1)
                .map_err(|_| Error::InvalidCombinatorics("modulus out of range".into()))?;
            // smaller moduli are kept when they still realize the target
            for d in divisors(n) {
                if let Some((rua, line_map)) = verify(c, sys, &x, d) {
                    return Ok(Some(realized(rua, line_map, *attempts)));
                }
            }
            // with every form bounded by M < n nothing can vanish mod n
            unreachable!("modulus {n} failed to realize a solution with nonzero forms");
        }
        bound *= 2;
    }
    Ok(None)
}

/// Uniform samples of the solutions modulo `n`, for `n` up to the cap.
fn sample_modular(c: &AbstractCombinatorics, sys: &System, seed: u64, attempts: &mut usize) -> Option<RealizationResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let widest = sys.sizes.iter().copied().max().unwrap_or(0) as u64;
    for n in widest.max(1)..=MODULUS_CAP {
        let m = BigInt::from(n);
        let gens: Vec<Vec<i128>> = sys
            .lattice_mod(n)
            .iter()
            .map(|u| u.iter().map(|v| v.mod_floor(&m).to_i128().expect("reduced entry")).collect())
            .collect();
        for _ in 0..SAMPLES_PER_MODULUS {
            *attempts += 1;
            let mut x = vec![0i128; sys.vars()];
            for u in &gens {
                let coef = rng.gen_range(0..n as i128);
                for (xi, ui) in x.iter_mut().zip(u) {
                    *xi = (*xi + coef * ui) % n as i128;
                }
            }
            if let Some((rua, line_map)) = verify(c, sys, &x, n) {
                return Some(realized(rua, line_map, *attempts));
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct TeraoPair {
    pub original: FreenessReport,
    pub rua: FreenessReport,
    pub realized: crate::arrangement::RuaFile,
    pub lattice_match: bool,
    pub classes_match: bool,
}

/// Realizes the combinatorics of `a` afresh and classifies both arrangements.
pub fn terao_pair(a: &Rua, primes: usize, seed: u64) -> Result<TeraoPair> {
    let res = realize_as_rua(&RealizationProblem::new(extract_combinatorics(a), seed))?;
    let Some(b) = res.rua() else {
        return Err(Error::InvalidCombinatorics(format!("combinatorics of {a} reported forced relations")));
    };
    let original = classify(a, primes)?;
    let rua = classify(&b, primes)?;
    Ok(TeraoPair {
        lattice_match: same_combinatorics(a, &b),
        classes_match: original.class.same_kind(&rua.class),
        original,
        rua,
        realized: b.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::twin_pair;
    use crate::arrangement::{full_monomial, Sides, TrSignature};
    use crate::freeness::FreenessClass;

    fn target(abc: [usize; 3], triples: &[[usize; 3]]) -> AbstractCombinatorics {
        let sig = TrSignature {
            a: abc[0],
            b: abc[1],
            c: abc[2],
            sides: Sides::ALL,
        };
        AbstractCombinatorics::new(sig, triples.iter().map(|t| t.map(|x| x - 1)).collect()).unwrap()
    }

    fn realized(c: &AbstractCombinatorics) -> Rua {
        realize_as_rua(&RealizationProblem::new(c.clone(), 0)).unwrap().rua().unwrap()
    }

    #[test]
    fn small_targets() {
        let empty = target([2, 2, 2], &[]);
        let r = realized(&empty);
        assert!(extract_combinatorics(&r).triples().is_empty());
        let single = target([2, 2, 2], &[[1, 1, 1]]);
        let r = realized(&single);
        assert_eq!((r.ea()[0] + r.eb()[0] + r.ec()[0]) % r.n(), 0);
        assert_eq!(extract_combinatorics(&r), single);
    }

    #[test]
    fn forced_example() {
        let c = target([3, 3, 3], &[[1, 1, 1], [1, 1, 2], [1, 2, 1], [1, 2, 2]]);
        let forced = forced_relations(&c);
        assert!(forced.contains(&ForcedRelation::Coincident {
            family: Family::B,
            lines: [1, 2]
        }));
        assert!(forced.contains(&ForcedRelation::Coincident {
            family: Family::C,
            lines: [1, 2]
        }));
        let res = realize_as_rua(&RealizationProblem::new(c, 0)).unwrap();
        assert!(matches!(res.outcome, Outcome::Forced { .. }));
        assert!(forced_relations(&target([2, 2, 2], &[])).is_empty());
        assert!(forced_relations(&extract_combinatorics(&full_monomial(3))).is_empty());
    }

    #[test]
    fn twin_pair_realizations() {
        let (a0, a1) = twin_pair();
        for a in [a0, a1] {
            let r = realized(&extract_combinatorics(&a));
            assert!(same_combinatorics(&a, &r));
        }
    }

    #[test]
    fn deterministic() {
        let c = extract_combinatorics(&twin_pair().0);
        let p = RealizationProblem::new(c, 11);
        assert_eq!(realize_as_rua(&p).unwrap(), realize_as_rua(&p).unwrap());
    }

    #[test]
    fn terao_pairs() {
        let (a0, a1) = twin_pair();
        let p = terao_pair(&a0, 1, 0).unwrap();
        assert!(p.lattice_match && p.classes_match);
        assert_eq!(p.rua.class, FreenessClass::Free { exponents: (7, 7) });
        let p = terao_pair(&a1, 1, 0).unwrap();
        assert!(p.lattice_match && p.classes_match);
        assert_eq!(p.rua.class.name(), "nearly_free");
        let tri = make_rua(1, vec![], vec![], vec![], Sides::ALL).unwrap();
        let p = terao_pair(&tri, 1, 0).unwrap();
        assert_eq!(p.rua.class, FreenessClass::Free { exponents: (1, 1) });
    }
}
