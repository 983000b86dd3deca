use polysolve_core::poly::{clebsch_lines_system, parse_system};
use polysolve_core::root_counts::{convex_hull, count_report, mixed_volume, normalized_volume, Support};
use proptest::prelude::*;

/// Twice the area of the convex hull of planar points (monotone chain + shoelace).
fn twice_area(points: &[Vec<i64>]) -> i64 {
    let mut p: Vec<(i64, i64)> = points.iter().map(|v| (v[0], v[1])).collect();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return 0;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    let hull: Vec<_> = lower.into_iter().chain(upper).collect();
    let mut s = 0;
    for i in 0..hull.len() {
        let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
        s += a.0 * b.1 - a.1 * b.0;
    }
    s.abs()
}

fn pairwise_sums(a: &Support, b: &Support) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for p in a.points() {
        for q in b.points() {
            out.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    out
}

fn support(n: usize, max_pts: usize, range: i64) -> impl Strategy<Value = Support> {
    proptest::collection::vec(proptest::collection::vec(0..range, n), 1..max_pts)
        .prop_map(move |pts| Support::new(n, pts).unwrap())
}

#[test]
fn mixed_supports_sum_volume() {
    let a1 = Support::new(2, vec![vec![0, 0], vec![3, 1], vec![1, 3]]).unwrap();
    let a2 = Support::new(2, vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]]).unwrap();
    let sum = convex_hull(&a1).unwrap().minkowski_sum(&convex_hull(&a2).unwrap()).unwrap();
    assert_eq!(sum.normalized_volume() as i64, twice_area(&pairwise_sums(&a1, &a2)));
    // Vol(A1 + A2) = Vol(A1) + Vol(A2) + MV / 2!
    let v1 = normalized_volume(&a1).unwrap();
    let v2 = normalized_volume(&a2).unwrap();
    assert_eq!(sum.normalized_volume(), v1 + v2 + 2 * 12);
}

#[test]
fn clebsch_lines_counts() {
    let r = count_report(&clebsch_lines_system()).unwrap();
    assert_eq!(r.bezout, 81);
    assert_eq!(r.bkk, Some(45));
    assert_eq!(r.kushnirenko, None);
}

#[test]
fn fixture_reports() {
    let curves = parse_system(
        "vars: x, y\n-7*x - 9*y - 10*x^2 + 17*x*y + 10*y^2 + 16*x^2*y - 17*x*y^2\n\
         2*x - 5*y + 5*x^2 + 5*x*y + 5*y^2 - 6*x^2*y - 6*x*y^2\n",
    )
    .unwrap();
    let r = count_report(&curves.system).unwrap();
    assert_eq!((r.bezout, r.kushnirenko, r.bkk), (9, Some(6), Some(6)));

    let mixed = parse_system("vars: x, y\n1 + 2*x^3*y - 3*x*y^3\n3 + 2*x^2 - y^2 + 5*x^2*y^2\n").unwrap();
    let r = count_report(&mixed.system).unwrap();
    assert_eq!((r.bezout, r.kushnirenko, r.bkk), (16, None, Some(12)));

    let robot = parse_system("vars: x, y\nx^2 + y^2 - 1\n(1 - x)^2 + (1 - y)^2 - 1\n").unwrap();
    let r = count_report(&robot.system).unwrap();
    assert_eq!(r.bezout, 4);
    for rep in [&r] {
        if let (Some(k), Some(b)) = (rep.kushnirenko, rep.bkk) {
            assert!(b <= k && k <= rep.bezout);
        }
    }

    let overdetermined = parse_system("vars: x\nx^2 - 1\nx^3 - x\n").unwrap();
    let r = count_report(&overdetermined.system).unwrap();
    assert_eq!((r.bezout, r.bkk), (3, None));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn planar_mixed_volume_matches_area_formula(a in support(2, 6, 5), b in support(2, 6, 5)) {
        let mv = mixed_volume(&[a.clone(), b.clone()]).unwrap() as i64;
        let oracle = twice_area(&pairwise_sums(&a, &b)) - twice_area(a.points()) - twice_area(b.points());
        prop_assert_eq!(2 * mv, oracle);
    }

    #[test]
    fn mixed_volume_of_equal_supports_is_volume(a in support(3, 7, 4)) {
        prop_assert_eq!(mixed_volume(&[a.clone(), a.clone(), a.clone()]).unwrap(), normalized_volume(&a).unwrap());
    }

    #[test]
    fn mixed_volume_symmetric(a in support(3, 5, 3), b in support(3, 5, 3), c in support(3, 5, 3)) {
        let base = mixed_volume(&[a.clone(), b.clone(), c.clone()]).unwrap();
        for perm in [[&a, &c, &b], [&b, &a, &c], [&b, &c, &a], [&c, &a, &b], [&c, &b, &a]] {
            let s: Vec<Support> = perm.iter().map(|s| (*s).clone()).collect();
            prop_assert_eq!(mixed_volume(&s).unwrap(), base);
        }
    }

    #[test]
    fn mixed_volume_translation_invariant(
        a in support(2, 6, 4),
        b in support(2, 6, 4),
        v in proptest::collection::vec(-3i64..4, 2),
    ) {
        prop_assert_eq!(mixed_volume(&[a.translate(&v), b.clone()]).unwrap(), mixed_volume(&[a, b]).unwrap());
    }

    #[test]
    fn triangulation_covers_hull(a in support(3, 9, 4)) {
        let p = convex_hull(&a).unwrap();
        if p.is_full_dimensional() {
            prop_assert_eq!(p.simplex_volumes().iter().sum::<u128>(), p.normalized_volume());
        } else {
            prop_assert_eq!(p.normalized_volume(), 0);
        }
        for v in p.vertices() {
            prop_assert!(a.points().contains(v));
        }
    }

    #[test]
    fn planar_hull_volume_matches_shoelace(a in support(2, 10, 6)) {
        prop_assert_eq!(normalized_volume(&a).unwrap() as i64, twice_area(a.points()));
    }
}
