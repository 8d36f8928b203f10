use proptest::prelude::*;
use triarr::arrangement::{complement_in, delete_lines, full_monomial, make_rua, Family, Line, Rua, Side, Sides};
use triarr::combinatorics::{
    c2, c2_signature, complement_stats, extract_combinatorics, inner_triples, pair_count_identity, same_combinatorics,
    t_vector,
};
use triarr::exactmath::certification_fields;
use triarr::freeness::{classify, free_model_h0, h0_log, ziegler_exponents, FreenessClass};
use triarr::realization::{realize_as_rua, RealizationProblem};

fn subset(n: u64, mask: u32) -> Vec<u64> {
    (0..n).filter(|&e| mask >> e & 1 == 1).collect()
}

/// Valid arrangements with modulus up to `max_n`; `all_sides` pins the side set.
fn rua(max_n: u64, all_sides: bool) -> impl Strategy<Value = Rua> {
    (1..=max_n, any::<[u32; 3]>(), 0u8..8).prop_filter_map("degenerate arrangement", move |(n, m, s)| {
        let sides = if all_sides {
            Sides::ALL
        } else {
            Sides::all_subsets().nth(s as usize).unwrap()
        };
        make_rua(n, subset(n, m[0]), subset(n, m[1]), subset(n, m[2]), sides).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pair_count_identity_holds(a in rua(9, false)) {
        prop_assert!(pair_count_identity(&a));
        let w = t_vector(&a);
        prop_assert_eq!(w.lines, a.line_count());
    }

    #[test]
    fn c2_from_multiplicities_matches_signature_formula(a in rua(9, true)) {
        prop_assert_eq!(c2(&a), c2_signature(&a));
    }

    #[test]
    fn triple_points_bounded_by_every_pair_of_families(a in rua(9, false)) {
        let t = inner_triples(&a).len();
        let [x, y, z] = a.exps().clone().map(|f| f.len());
        prop_assert!(t <= x * y && t <= y * z && t <= x * z);
    }

    #[test]
    fn complement_round_trip(a in rua(6, true), k in 1u64..3) {
        let big_n = a.n() * k;
        let comp = complement_in(&a, big_n).unwrap();
        let lines: Vec<Line> = Family::ALL
            .into_iter()
            .flat_map(|f| comp.exps[f.index()].iter().map(move |&e| Line::Inner(f, e)))
            .collect();
        let back = delete_lines(&full_monomial(big_n), &lines).unwrap();
        prop_assert!(same_combinatorics(&a, &back));
        prop_assert!(complement_stats(&a, big_n).unwrap().identity_holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_arrangements_follow_the_two_generator_model(a in rua(6, false)) {
        let report = classify(&a, 1).unwrap();
        if let FreenessClass::Free { exponents: (e1, e2) } = report.class {
            prop_assert_eq!(e1 + e2 + 1, a.line_count());
            prop_assert_eq!((e1 * e2) as i64, report.c2);
            let field = certification_fields(a.n(), 1)[0];
            for k in 0..=e1 + e2 {
                prop_assert_eq!(h0_log(&a, &field, k).unwrap(), free_model_h0(e1, e2, k), "k = {}", k);
            }
        }
    }

    #[test]
    fn restriction_exponents_sum_to_lines_minus_one(a in rua(6, false)) {
        let field = certification_fields(a.n(), 1)[0];
        let class = classify(&a, 1).unwrap().class;
        for l in a.lines() {
            let (d1, d2) = ziegler_exponents(&a, &field, l).unwrap();
            prop_assert_eq!(d1 + d2 + 1, a.line_count());
            if let FreenessClass::Free { exponents } = class {
                prop_assert_eq!((d1, d2), exponents, "line {}", l);
            }
        }
    }

    #[test]
    fn classification_agrees_across_primes(a in rua(6, false)) {
        let report = classify(&a, 2).unwrap();
        prop_assert!(report.all_agree(), "{:?}", report.primes);
    }

    #[test]
    fn realization_reproduces_the_lattice(a in rua(7, false)) {
        let res = realize_as_rua(&RealizationProblem::new(extract_combinatorics(&a), 0)).unwrap();
        let b = res.rua().expect("combinatorics of an arrangement are never forced");
        prop_assert!(same_combinatorics(&a, &b));
    }
}

#[test]
fn side_lines_restrict_like_the_full_arrangement() {
    let field = certification_fields(3, 1)[0];
    for s in Side::ALL {
        assert_eq!(ziegler_exponents(&full_monomial(3), &field, Line::Side(s)).unwrap(), (4, 7));
    }
}
