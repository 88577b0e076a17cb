use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use nilgrowth::checks::matrix_product;
use nilgrowth::growth::{fit_exponent, phi_upper_series, power_grid, GrowthSeries};
use nilgrowth::metric::{coordinate_bounds_table, enumerate_ball, DEFAULT_LIMIT};
use nilgrowth::quotient::{
    detect_ball_certified, detect_in_ball, find_violation, solve_min_weights, LatticeSubgroup,
};
use nilgrowth::series::{
    coordinate_weight, element_weight, lower_central_series, nilpotency_class, terraced_bound,
    upper_central_series, validate_terraced, CoordinateSubgroup,
};
use nilgrowth::{Element, GeneratingSet, Group, GroupSpec};

fn catalog() -> Vec<Group> {
    GroupSpec::catalog().iter().map(|(_, s)| Group::new(s).unwrap()).collect()
}

fn element(group: &Group, raw: &[i64]) -> Element {
    group.from_ints(&raw[..group.dim()]).unwrap()
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1000i64..=1000, 15)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law_matches_matrices(idx in 0usize..9, a in coords(), b in coords(), c in coords()) {
        let g = &catalog()[idx];
        let (a, b, c) = (element(g, &a), element(g, &b), element(g, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, matrix_product(&a, &b));
        prop_assert!((&a * &a.inv()).is_identity());
        prop_assert_eq!(a.pow(3), &(&a * &a) * &a);
        prop_assert_eq!(a.pow(-2), a.inv().pow(2));
    }

    #[test]
    fn erasure_is_a_homomorphism(a in coords(), b in coords()) {
        let u5 = Group::new(&GroupSpec::Unipotent(5)).unwrap();
        let gm = Group::new(&GroupSpec::gamma()).unwrap();
        let project = |g: &Element| {
            let v: Vec<BigInt> = gm.coords().iter()
                .map(|c| g.coords()[u5.coord_index(0, c.pos).unwrap()].clone())
                .collect();
            gm.from_coords(v).unwrap()
        };
        let (a, b) = (element(&u5, &a), element(&u5, &b));
        prop_assert_eq!(project(&(&a * &b)), &project(&a) * &project(&b));
    }

    #[test]
    fn lattice_subgroups_are_normal(idx in 0usize..8, choice in prop::collection::vec(0usize..5, 15),
                                     g in coords(), h in coords()) {
        let group = &catalog()[idx];
        let pool = [1u64, 2, 4, 8, 16];
        let moduli: Vec<BigInt> = choice[..group.dim()].iter().map(|&i| BigInt::from(pool[i])).collect();
        match find_violation(group, &moduli) {
            Some(con) => {
                let (x, y) = con.counterexample(group, &moduli);
                let member = |e: &Element| e.coords().iter().zip(&moduli).all(|(v, m)| (v % m).sign() == num_bigint::Sign::NoSign);
                prop_assert!(member(&x));
                prop_assert!(!member(&(&x * &y)) || !member(&x.conjugate_by(&y).unwrap()));
            }
            None => {
                let sub = LatticeSubgroup::new(group, moduli.clone()).unwrap();
                let gv: Vec<BigInt> = g[..group.dim()].iter().zip(&moduli).map(|(&x, m)| m * x).collect();
                let n = group.from_coords(gv).unwrap();
                let h = element(group, &h);
                prop_assert!(sub.contains(&n));
                prop_assert!(sub.contains(&n.conjugate_by(&h).unwrap()));
                prop_assert_eq!(sub.residues(&(&h * &n)), sub.residues(&h));
                prop_assert_eq!(sub.index(), moduli.iter().product::<BigInt>());
            }
        }
    }

    #[test]
    fn certified_implies_exhaustive(idx in 0usize..3, n in 1u32..=4, m in 1u64..=60) {
        let group = Group::parse(["z", "z^2", "heisenberg"][idx]).unwrap();
        let gens = group.default_gens();
        let sub = LatticeSubgroup::uniform(&group, &BigInt::from(m)).unwrap();
        let cert = detect_ball_certified(&group, &gens, n as u64, &sub).unwrap();
        let wide = enumerate_ball(&group, &gens, 2 * n, DEFAULT_LIMIT).unwrap();
        let exact = detect_in_ball(&wide, &sub).unwrap();
        prop_assert!(!cert.detected || exact.detected);
    }

    #[test]
    fn commutator_identities(idx in 0usize..9, a in coords(), b in coords()) {
        let g = &catalog()[idx];
        let (a, b) = (element(g, &a), element(g, &b));
        let ab = a.commutator(&b).unwrap();
        prop_assert_eq!(ab.inv(), b.commutator(&a).unwrap());
        prop_assert_eq!(&ab * &(&b * &a), &a * &b);
    }
}

#[test]
fn ball_invariants() {
    for spec in ["z^2", "heisenberg", "heisenberg * z", "u(4)", "gamma"] {
        let g = Group::parse(spec).unwrap();
        let gens = g.default_gens();
        let ball = enumerate_ball(&g, &gens, 3, DEFAULT_LIMIT).unwrap();
        assert_eq!(ball.length_of(&g.identity()), Some(0));
        for e in ball.elements() {
            let l = ball.length_of(&e).unwrap();
            assert_eq!(ball.length_of(&e.inv()), Some(l), "{spec}: inverse of {e}");
            for s in gens.symmetric() {
                if let Some(l2) = ball.length_of(&(&e * &s)) {
                    assert!(l2 <= l + 1 && l <= l2 + 1);
                } else {
                    assert_eq!(l, 3);
                }
            }
        }
    }
}

#[test]
fn balls_grow_with_the_generating_set() {
    let h = Group::parse("heisenberg").unwrap();
    let small = GeneratingSet::parse(&h, "x, y").unwrap();
    let large = h.default_gens();
    let a = enumerate_ball(&h, &small, 5, DEFAULT_LIMIT).unwrap();
    let b = enumerate_ball(&h, &large, 5, DEFAULT_LIMIT).unwrap();
    assert!(a.len() < b.len());
    for e in a.elements() {
        assert!(b.length_of(&e).unwrap() <= a.length_of(&e).unwrap());
    }
}

#[test]
fn balls_do_not_depend_on_thread_count() {
    let g = Group::parse("u(4)").unwrap();
    let gens = g.default_gens();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| enumerate_ball(&g, &gens, 6, DEFAULT_LIMIT).unwrap().sorted_entries())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn bounds_are_sound_against_enumeration() {
    for g in catalog() {
        let gens = g.default_gens();
        let mut radius = 8;
        let ball = loop {
            match enumerate_ball(&g, &gens, radius, 2_000_000) {
                Ok(b) => break b,
                Err(_) => radius -= 1,
            }
        };
        let table = coordinate_bounds_table(&g, &gens, radius as u64);
        let mut attained = vec![BigInt::from(0); g.dim()];
        for (coords, len) in ball.entries() {
            for (c, v) in coords.iter().enumerate() {
                assert!(v.abs() <= table[len as usize].bounds[c], "{g}: {} at length {len}", g.coord_name(c));
                if v.abs() > attained[c] {
                    attained[c] = v.abs();
                }
            }
        }
        assert!(radius >= 3, "{g} only enumerable to radius {radius}");
        assert!(attained.iter().all(|a| a > &BigInt::from(0)));
    }
}

#[test]
fn bound_degree_matches_coordinate_weight() {
    for g in catalog() {
        let gens = g.default_gens();
        let table = coordinate_bounds_table(&g, &gens, 256);
        for c in 0..g.dim() {
            let pts = [32u64, 64, 128, 256].iter().map(|&n| (n, table[n as usize].bounds[c].clone())).collect();
            let fit = fit_exponent(&GrowthSeries::new("b", "test", pts).unwrap(), None).unwrap();
            let w = coordinate_weight(&g, c).unwrap() as f64;
            assert!((fit.slope - w).abs() < 0.2, "{g} {}: slope {} weight {w}", g.coord_name(c), fit.slope);
        }
    }
}

#[test]
fn series_invariants() {
    for g in catalog() {
        let lower = lower_central_series(&g).unwrap();
        let upper = upper_central_series(&g).unwrap();
        let c = nilpotency_class(&g).unwrap();
        assert_eq!(lower.len(), c + 1);
        assert_eq!(upper.len(), c + 1);
        for k in 0..c {
            assert!(lower[k + 1].is_subgroup_of(&lower[k]));
            assert!(upper[k].is_subgroup_of(&upper[k + 1]));
        }
        assert!(lower[c].is_trivial());
        assert!(lower[c - 1].is_subgroup_of(&upper[1]));
        assert_eq!(upper[c].dim(), g.dim());
        for idx in 0..g.dim() {
            assert_eq!(element_weight(&g.basis(idx)).unwrap(), coordinate_weight(&g, idx).unwrap());
        }
        assert_eq!(terraced_bound(c, g.dim(), &vec![0; c.saturating_sub(1)]).unwrap(), c * g.dim());
        let trivial = vec![CoordinateSubgroup::trivial(&g); c.saturating_sub(1)];
        assert!(validate_terraced(&g, &trivial).is_ok());
    }
    let u5 = Group::new(&GroupSpec::Unipotent(5)).unwrap();
    assert_eq!(Group::new(&GroupSpec::gamma()).unwrap().dim(), u5.dim() - 2);
}

#[test]
fn solver_exponents_match_theory() {
    for spec in ["z", "z^2", "z^3", "heisenberg", "u(4)", "u(5)"] {
        let g = Group::parse(spec).unwrap();
        let b = solve_min_weights(&g).unwrap().exponent;
        assert_eq!(b, nilpotency_class(&g).unwrap() * g.dim(), "{spec}");
    }
    let gm = Group::parse("gamma").unwrap();
    let h2 = CoordinateSubgroup::from_entries(&gm, 0, &[(1, 2), (1, 3)]).unwrap();
    let filt = validate_terraced(&gm, &[CoordinateSubgroup::trivial(&gm), h2]).unwrap();
    assert!(filt.is_maximal());
    assert_eq!(solve_min_weights(&gm).unwrap().exponent, filt.bound().unwrap());
}

#[test]
fn index_is_multiplicative_over_products() {
    let pairs = [("heisenberg", "z"), ("z", "z"), ("u(4)", "heisenberg")];
    for (a, b) in pairs {
        let (ga, gb) = (Group::parse(a).unwrap(), Group::parse(b).unwrap());
        let gp = Group::new(&GroupSpec::product(vec![ga.spec().clone(), gb.spec().clone()])).unwrap();
        for n in [2u64, 3, 5] {
            let sa = nilgrowth::quotient::certified_graded_subgroup(&ga, &ga.default_gens(), n).unwrap();
            let sb = nilgrowth::quotient::certified_graded_subgroup(&gb, &gb.default_gens(), n).unwrap();
            let moduli: Vec<BigInt> = sa.moduli().iter().chain(sb.moduli()).cloned().collect();
            let sp = LatticeSubgroup::new(&gp, moduli).unwrap();
            assert_eq!(sp.index(), sa.index() * sb.index());
            let direct = nilgrowth::quotient::certified_graded_subgroup(&gp, &gp.default_gens(), n).unwrap();
            assert_eq!(direct.index(), sp.index(), "{a} x {b} at n = {n}");
        }
    }
}

#[test]
fn phi_series_properties() {
    for g in catalog() {
        let gens = g.default_gens();
        let ns = power_grid(1, 32);
        let s = phi_upper_series(&g, &gens, &ns).unwrap();
        assert_eq!(s, phi_upper_series(&g, &gens, &ns).unwrap());
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        assert_eq!(s, single.install(|| phi_upper_series(&g, &gens, &ns).unwrap()));
        for w in s.points().windows(2) {
            assert!(w[0].1 <= w[1].1, "{g}: not monotone");
        }
        for &(n, ref v) in s.points() {
            if let Ok(ball) = enumerate_ball(&g, &gens, n as u32, 500_000) {
                assert!(*v >= BigInt::from(ball.len()), "{g}: phi below |B({n})|");
            }
        }
    }
}
