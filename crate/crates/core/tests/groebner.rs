use std::time::Instant;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polysolve_core::fixtures;
use polysolve_core::groebner::{
    buchberger, divide, eliminate, groebner_normal_form, leading_monomial, GroebnerError, PAIR_CAP,
};
use polysolve_core::macaulay::{multiplication_matrix, quotient_basis, solve_eigen, solve_with_basis, EigenConfig};
use polysolve_core::poly::{parse_polynomial, parse_system};
use polysolve_core::scalar::rat;
use polysolve_core::solution::matching_distance;
use polysolve_core::{Monomial, MonomialOrder, PolySystem, Polynomial, Rational};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn xy(s: &str) -> Polynomial<Rational> {
    parse_polynomial(s, &names(&["x", "y"])).unwrap()
}

fn mono(e: &[u32]) -> Monomial {
    Monomial::new(e.to_vec())
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Polynomial<Rational> {
    let mut terms = Vec::new();
    for m in Monomial::up_to_degree(n, d) {
        if rng.gen_bool(0.6) {
            terms.push((m, rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
        }
    }
    Polynomial::from_terms(n, terms).unwrap()
}

#[test]
fn four_points_standard_monomials_and_normal_form() {
    let sys = fixtures::four_points();
    let gb = buchberger(&sys, &MonomialOrder::grlex(2)).unwrap();
    assert_eq!(gb.generators(), &[xy("y^2 - 1"), xy("x^2 - 1")]);
    assert_eq!(gb.standard_monomials().unwrap(), [mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 1]), mono(&[1, 1])]);
    assert_eq!(groebner_normal_form(&xy("x^3"), &gb), xy("x"));
    for b in gb.standard_monomials().unwrap() {
        let p = Polynomial::monomial(b, rat(1, 1));
        assert_eq!(gb.normal_form(&p), p);
    }
}

#[test]
fn division_by_reduced_rows_leaves_x() {
    let rows = ["x^3 - x", "x^2*y - y", "x*y^2 - x", "y^3 - y", "x^2 - 1", "y^2 - 1"].map(xy);
    let d = divide(&xy("x^3"), &rows, &MonomialOrder::grlex(2));
    assert_eq!(d.remainder, xy("x"));
    assert_eq!(d.quotients[0], xy("1"));
    for (i, g) in rows.iter().enumerate() {
        let d = divide(g, &rows, &MonomialOrder::grlex(2));
        assert!(d.remainder.is_zero(), "row {i}");
    }
}

#[test]
fn agrees_with_macaulay_quotient_basis() {
    let sys = fixtures::four_points();
    let gb = buchberger(&sys, &MonomialOrder::grlex(2)).unwrap();
    let from_gb = gb.quotient_basis().unwrap();
    let from_macaulay = quotient_basis(&sys, 0).unwrap().basis;
    assert_eq!(from_gb.monomials(), from_macaulay.monomials());
    for k in 0..2 {
        let x = Polynomial::var(2, k);
        assert_eq!(
            multiplication_matrix(&from_gb, &x).unwrap(),
            multiplication_matrix(&from_macaulay, &x).unwrap()
        );
    }
}

#[test]
fn univariate_standard_monomials() {
    let sys = fixtures::wilkinson();
    let gb = buchberger(&sys, &MonomialOrder::grevlex(1)).unwrap();
    assert_eq!(gb.len(), 1);
    let expected: Vec<Monomial> = (0..12).map(|k| mono(&[k])).collect();
    assert_eq!(gb.standard_monomials().unwrap(), expected);
}

#[test]
fn positive_dimensional_quotient_is_reported() {
    let sf = parse_system("vars: x, y\nx*y - 1\n").unwrap();
    let gb = buchberger(&sf.system, &MonomialOrder::grevlex(2)).unwrap();
    assert!(matches!(gb.standard_monomials(), Err(GroebnerError::NotZeroDimensional(_))));
}

#[test]
fn normal_form_kills_the_ideal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (sys, order) in [
        (fixtures::four_points(), MonomialOrder::grlex(2)),
        (fixtures::curves7(), MonomialOrder::grevlex(2)),
        (fixtures::robot(), MonomialOrder::lex(2)),
    ] {
        let gb = buchberger(&sys, &order).unwrap();
        assert!(gb.satisfies_buchberger_criterion());
        for f in sys.polys() {
            assert!(gb.normal_form(f).is_zero());
        }
        for _ in 0..20 {
            let mut combo = Polynomial::zero(2);
            for f in sys.polys() {
                combo = combo + &random_poly(&mut rng, 2, 2) * f;
            }
            assert!(gb.normal_form(&combo).is_zero());
        }
        let lms = gb.leading_monomials();
        for _ in 0..10 {
            let g = random_poly(&mut rng, 2, 5);
            let r = gb.normal_form(&g);
            assert_eq!(gb.normal_form(&r), r);
            assert!(r.terms().all(|(m, _)| lms.iter().all(|l| !l.divides(m))));
            let h = random_poly(&mut rng, 2, 4);
            let lhs = gb.normal_form(&(&g * &h));
            let rhs = gb.normal_form(&(&r * &gb.normal_form(&h)));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn generators_are_reduced_and_monic() {
    let order = MonomialOrder::grevlex(2);
    let gb = buchberger(&fixtures::curves7(), &order).unwrap();
    let lms = gb.leading_monomials();
    for (i, g) in gb.generators().iter().enumerate() {
        let lm = leading_monomial(g, &order).unwrap();
        assert_eq!(g.coefficient(&lm), rat(1, 1));
        for (j, l) in lms.iter().enumerate() {
            if i != j {
                assert!(g.terms().all(|(m, _)| !l.divides(m)));
            }
        }
    }
    for w in lms.windows(2) {
        assert_eq!(order.cmp(&w[0], &w[1]), std::cmp::Ordering::Less);
    }
}

#[test]
fn quotient_dimension_matches_eigen_solution_count() {
    for sys in [fixtures::four_points(), fixtures::curves7(), fixtures::robot()] {
        let gb = buchberger(&sys, &MonomialOrder::grevlex(2)).unwrap();
        let delta = gb.standard_monomials().unwrap().len();
        let sols = solve_eigen(&sys, &EigenConfig::default()).unwrap();
        assert_eq!(delta, sols.len());
    }
}

#[test]
fn eigen_solve_from_groebner_basis() {
    let sys = fixtures::curves7();
    let config = EigenConfig::default();
    let gb = buchberger(&sys, &MonomialOrder::grevlex(2)).unwrap();
    let via_gb = solve_with_basis(&sys, &gb.quotient_basis().unwrap(), &config).unwrap();
    let via_macaulay = solve_eigen(&sys, &config).unwrap();
    assert_eq!(via_gb.len(), 7);
    assert!(matching_distance(&via_gb.points(), &via_macaulay.points()).unwrap() < 1e-8);
}

#[test]
fn elimination_ideals() {
    let gens = eliminate(&fixtures::four_points(), 1).unwrap();
    assert_eq!(gens, [xy("x^2 - 1")]);
    // Both roots of the eliminant are projections of actual solutions.
    for x in [-1, 1] {
        for g in &gens {
            assert_eq!(g.evaluate(&[rat(x, 1), rat(0, 1)]).unwrap(), rat(0, 1));
        }
    }

    let line = parse_system("vars: x, y\nx - y\n").unwrap();
    assert!(eliminate(&line.system, 1).unwrap().is_empty());

    let cubic = parse_system("vars: x, y, z\ny - x^2\nz - x^3\n").unwrap();
    let gens = eliminate(&cubic.system, 2).unwrap();
    let target = parse_polynomial("y - x^2", &names(&["x", "y", "z"])).unwrap();
    assert!(gens.contains(&target));
    for t in -3..=3 {
        let pt = [rat(t, 1), rat(t * t, 1), rat(t * t * t, 1)];
        assert!(gens.iter().all(|g| g.evaluate(&pt).unwrap() == rat(0, 1)));
    }

    assert!(matches!(eliminate(&line.system, 3), Err(GroebnerError::BadElimination { keep: 3, nvars: 2 })));
}

#[test]
fn clebsch_lines_basis_counts() {
    let start = Instant::now();
    let sys = fixtures::clebsch_lines();
    let gb = buchberger(&sys, &MonomialOrder::grlex(4)).unwrap();
    assert_eq!(gb.len(), 23);
    assert_eq!(gb.standard_monomials().unwrap().len(), 27);
    assert!(gb.satisfies_buchberger_criterion());
    for f in sys.polys() {
        assert!(gb.normal_form(f).is_zero());
    }
    assert!(start.elapsed().as_secs() < 600);
}

fn small_poly() -> impl Strategy<Value = Polynomial<Rational>> {
    prop::collection::vec(((0u32..4, 0u32..4), -6i64..=6, 1i64..=4), 1..6).prop_map(|terms| {
        Polynomial::from_terms(2, terms.into_iter().map(|((a, b), n, d)| (mono(&[a, b]), rat(n, d)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_identity(g in small_poly(), divisors in prop::collection::vec(small_poly(), 1..4)) {
        let order = MonomialOrder::grevlex(2);
        let d = divide(&g, &divisors, &order);
        let mut total = d.remainder.clone();
        for (q, f) in d.quotients.iter().zip(&divisors) {
            total = total + q * f;
        }
        prop_assert_eq!(total, g);
        for f in &divisors {
            if let Some(lm) = leading_monomial(f, &order) {
                prop_assert!(d.remainder.terms().all(|(m, _)| !lm.divides(m)));
            }
        }
    }

    #[test]
    fn random_bases_satisfy_buchberger_criterion(a in small_poly(), b in small_poly()) {
        let sys = PolySystem::unnamed(vec![a, b]).unwrap();
        match buchberger(&sys, &MonomialOrder::grevlex(2)) {
            Ok(gb) => {
                prop_assert!(gb.satisfies_buchberger_criterion());
                for f in sys.polys() {
                    prop_assert!(gb.normal_form(f).is_zero());
                }
            }
            Err(e) => prop_assert_eq!(e, GroebnerError::PairCap(PAIR_CAP)),
        }
    }
}
