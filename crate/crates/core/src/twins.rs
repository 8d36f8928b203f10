//! Checks on pairs of arrangements with equal weak combinatorics where one
//! member is free and the other is not.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{nearly_free_family, twin_pair};
use crate::arrangement::{Rua, RuaFile};
use crate::combinatorics::{inner_triples, same_combinatorics, t_vector, triples_per_line, WeakCombinatorics};
use crate::error::Result;
use crate::exactmath::certification_fields;
use crate::freeness::{classify, curves_through_t, section_base_locus, FreenessClass, FreenessReport, Oracle};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub free: RuaFile,
    pub nearly_free: RuaFile,
    pub t_vector: WeakCombinatorics,
    pub free_report: FreenessReport,
    pub nearly_free_report: FreenessReport,
    pub checks: Vec<PairCheck>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&PairCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct Checks(Vec<PairCheck>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(PairCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn expect<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, got: T, want: T) {
        let detail = format!("got {got:?}, expected {want:?}");
        self.push(name, got == want, detail);
    }
}

/// Base locus of a generic minimal section over the first field, `None` when
/// not finite.
fn minimal_section_zeros(a: &Rua) -> Result<Option<Vec<[u64; 3]>>> {
    let field = certification_fields(a.n(), 1)[0];
    let o = Oracle::new(a, &field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(field.p());
    match o.generic_section(o.mdr(), &mut rng) {
        Some(theta) => section_base_locus(a, &field, &theta),
        None => Ok(None),
    }
}

fn sorted_partitions(a: &Rua) -> Vec<Vec<usize>> {
    let mut p: Vec<Vec<usize>> = triples_per_line(a)
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    p.sort();
    p
}

fn common_checks(free: &Rua, nearly: &Rua, primes: usize) -> Result<(PairReport, Checks)> {
    let mut checks = Checks(Vec::new());
    let (tf, tn) = (t_vector(free), t_vector(nearly));
    checks.expect("equal weak combinatorics", &tn, &tf);
    checks.push(
        "non-isomorphic lattices",
        !same_combinatorics(free, nearly),
        "intersection lattices compared by exhaustive relabeling",
    );
    let rf = classify(free, primes)?;
    let rn = classify(nearly, primes)?;
    checks.push(
        "free member certified",
        rf.class.is_free() && rf.certificate.is_some(),
        format!("class {:?}, certificate degrees {:?}", rf.class, rf.certificate),
    );
    let zeros = minimal_section_zeros(free)?;
    checks.push(
        "free member: minimal section has no zeros",
        zeros.as_ref().is_some_and(Vec::is_empty),
        format!("base locus {zeros:?}"),
    );
    checks.push(
        "second member nearly free",
        matches!(rn.class, FreenessClass::NearlyFree { .. }),
        format!("class {:?}", rn.class),
    );
    checks.expect("equal c2", rn.c2, rf.c2);
    checks.push(
        "all primes agree",
        rf.all_agree() && rn.all_agree(),
        format!("{:?} / {:?}", rf.primes, rn.primes),
    );
    let report = PairReport {
        free: free.clone().into(),
        nearly_free: nearly.clone().into(),
        t_vector: tf,
        free_report: rf,
        nearly_free_report: rn,
        checks: Vec::new(),
    };
    Ok((report, checks))
}

/// Every claim about the `(5,5,5)` pair: weak combinatorics, classes,
/// certificate, jumping point, cubics through the triple points and the
/// triple counts along the lines.
pub fn verify_twin_pair(primes: usize) -> Result<PairReport> {
    let (free, nearly) = twin_pair();
    let (mut report, mut checks) = common_checks(&free, &nearly, primes)?;
    let w = &report.t_vector;
    checks.expect("t_2, t_3, t_6", [w.get(2), w.get(3), w.get(6)], [24, 12, 3]);
    checks.expect("free exponents", report.free_report.class.exponents(), Some((7, 7)));
    let jp = match report.nearly_free_report.class {
        FreenessClass::NearlyFree { jumping_point, .. } => Some(jumping_point),
        _ => None,
    };
    checks.expect("jumping point", jp, Some([1, 1, 1]));
    checks.expect("mdr of the nearly free member", report.nearly_free_report.mdr, 6);
    checks.expect("c2", report.free_report.c2, 49);
    let cubics = |a: &Rua| -> Result<usize> { curves_through_t(a, &certification_fields(a.n(), 1)[0], 3) };
    checks.expect("cubics through the triple points", (cubics(&free)?, cubics(&nearly)?), (0, 1));
    checks.expect(
        "triple points per line, free member",
        sorted_partitions(&free),
        vec![vec![2, 3, 3, 4], vec![3, 3, 3, 3], vec![3, 3, 3, 3]],
    );
    checks.expect("triple points per line, nearly free member", sorted_partitions(&nearly), vec![vec![3, 3, 3, 3]; 3]);
    report.checks = checks.0;
    Ok(report)
}

/// The pair of type `(2k+1, 2k+1, 2k+1)` from [`nearly_free_family`].
pub fn verify_family_pair(k: usize, primes: usize) -> Result<PairReport> {
    let (free, nearly) = nearly_free_family(k)?;
    let (mut report, mut checks) = common_checks(&free, &nearly, primes)?;
    checks.expect("triple points", inner_triples(&free).len(), 3 * k * k);
    checks.expect("free exponents", report.free_report.class.exponents(), Some((3 * k + 1, 3 * k + 1)));
    checks.expect("mdr of the nearly free member", report.nearly_free_report.mdr, 3 * k);
    report.checks = checks.0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twin_pair_passes() {
        let r = verify_twin_pair(2).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(r.checks.len() >= 14);
    }

    #[test]
    fn family_pair_passes() {
        let r = verify_family_pair(2, 1).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
    }
}
