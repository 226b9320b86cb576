use cutlab::aggregation::{
    aggregation_closure_outer, alpha_ratio, knapsack_hull_cuts, one_row_closure, ClosureApprox, MultiplierParams, Ratio,
};
use cutlab::cuts::{aggregate, cg_cut, AggregateOptions, Cut, Provenance};
use cutlab::geometry::hull::{in_hull, vertices_inside};
use cutlab::geometry::{
    enumerate_vertices, enumerate_vertices_by_bases, project_polytope, solve_lp, sq_distance, sq_distance_by_faces,
    Constraint, Direction, HPolytope, VPolytope,
};
use cutlab::instance::generate::{generate, generate_polytope, GenSpec};
use cutlab::rational::{self, int, rat, Rational};
use cutlab::selection::{select, CutPool, Policy};
use cutlab::sparsity::sparse_closure;
use cutlab::verify::integer_points;
use cutlab::Caps;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

/// Box `[0, 3]^n` cut by a few random rows.
fn boxed_polytope(n: usize, rows: &[(Vec<i64>, i64)]) -> HPolytope {
    let mut p = HPolytope::cube(n, int(0), int(3));
    for (a, b) in rows {
        p.rows.push(Constraint::le(a.iter().map(|&v| int(v)).collect(), rat(*b, 2)));
    }
    p
}

fn rows_strategy(n: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, n), 0i64..=12), 0..4)
}

fn sorted(mut v: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_optimum_is_best_vertex(
        (n, rows, c) in (2usize..=3).prop_flat_map(|n| (Just(n), rows_strategy(n), prop::collection::vec(-4i64..=4, n)))
    ) {
        let p = boxed_polytope(n, &rows);
        let c: Vec<Rational> = c.into_iter().map(int).collect();
        let verts = enumerate_vertices(&p, &caps()).unwrap();
        let lp = solve_lp(&p, false, &c, Direction::Maximize).unwrap();
        if verts.is_empty() {
            prop_assert!(!lp.is_optimal());
        } else {
            let best = verts.vertices.iter().map(|v| rational::dot(&c, v)).max().unwrap();
            prop_assert_eq!(lp.value, best);
            prop_assert!(p.contains(&lp.vertex));
        }
    }

    #[test]
    fn dd_matches_basis_enumeration(
        (n, rows) in (2usize..=3).prop_flat_map(|n| (Just(n), rows_strategy(n)))
    ) {
        let p = boxed_polytope(n, &rows);
        let a = enumerate_vertices(&p, &caps()).unwrap();
        let b = enumerate_vertices_by_bases(&p, &caps()).unwrap();
        prop_assert_eq!(sorted(a.vertices), sorted(b.vertices));
    }

    #[test]
    fn wolfe_matches_face_enumeration(
        n in 2usize..=4,
        t in 1usize..=6,
        seed in 0u64..1000,
        x in prop::collection::vec(-4i64..=8, 4),
    ) {
        let t = t.min(1 << n);
        let p = generate_polytope(n, t, seed).unwrap();
        let x: Vec<Rational> = x[..n].iter().map(|&v| rat(v, 4)).collect();
        let d = sq_distance(&x, &p).unwrap();
        prop_assert!(d.certify(&x, &p));
        prop_assert_eq!(d.sq_dist, sq_distance_by_faces(&x, &p, &caps()).unwrap());
    }

    #[test]
    fn projection_commutes_with_hull(
        n in 2usize..=5,
        t in 1usize..=8,
        seed in 0u64..1000,
        mask in 1u32..32,
    ) {
        let t = t.min(1 << n);
        let p = generate_polytope(n, t, seed).unwrap();
        let support: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        prop_assume!(!support.is_empty());
        let proj = project_polytope(&p, &support, &caps()).unwrap();
        let images: Vec<Vec<Rational>> =
            p.vertices.iter().map(|v| support.iter().map(|&j| v[j].clone()).collect()).collect();
        for v in &proj.vertices {
            prop_assert!(images.contains(v));
        }
        for y in &images {
            prop_assert!(in_hull(&proj.vertices, y).unwrap());
        }
    }

    #[test]
    fn sparse_closures_nest(n in 2usize..=4, t in 1usize..=6, seed in 0u64..1000) {
        let t = t.min(1 << n);
        let p = generate_polytope(n, t, seed).unwrap();
        let mut outer: Option<HPolytope> = None;
        for k in 1..=n {
            let h = sparse_closure(&p, k, &caps()).unwrap();
            prop_assert!(vertices_inside(&p, &h));
            let inner = enumerate_vertices(&h, &caps()).unwrap();
            if let Some(o) = &outer {
                prop_assert!(vertices_inside(&inner, o));
            }
            if k == n {
                prop_assert_eq!(sorted(inner.vertices), sorted(p.vertices.clone()));
            }
            outer = Some(h);
        }
    }

    #[test]
    fn cg_cuts_are_valid(
        n in 2usize..=4,
        m in 1usize..=3,
        seed in 0u64..10_000,
        lambda in prop::collection::vec((0i64..=5, 1i64..=5), 3),
    ) {
        let inst = generate(&GenSpec::RandomPacking { n, m, coeff_max: 6, ub: 3 }, seed).unwrap();
        let lambda: Vec<Rational> = lambda[..m].iter().map(|&(p, q)| rat(p, q)).collect();
        let cut = cg_cut(&aggregate(&inst, &lambda, AggregateOptions::le()).unwrap(), &inst.vars).unwrap();
        for x in integer_points(&inst).unwrap() {
            prop_assert!(cut.is_satisfied(&x));
        }
    }

    #[test]
    fn knapsack_cuts_are_valid(n in 2usize..=4, seed in 0u64..10_000) {
        let inst = generate(&GenSpec::SignPattern { n, m: 2, coeff_max: 5, ub: 2 }, seed).unwrap();
        let pts = integer_points(&inst).unwrap();
        for row in &inst.rows {
            for c in knapsack_hull_cuts(row, &inst.vars, &caps()).unwrap() {
                prop_assert!(pts.iter().all(|x| c.is_satisfied(x)));
            }
        }
    }

    #[test]
    fn closures_are_sandwiched(n in 2usize..=3, m in 1usize..=3, seed in 0u64..10_000) {
        let inst = generate(&GenSpec::RandomPacking { n, m, coeff_max: 5, ub: 2 }, seed).unwrap();
        let lp = ClosureApprox::lp(&inst);
        let one = one_row_closure(&inst, &caps()).unwrap();
        let agg = aggregation_closure_outer(&inst, &MultiplierParams::default(), 8, seed, &caps()).unwrap();
        for x in integer_points(&inst).unwrap() {
            prop_assert!(agg.contains(&x));
        }
        for v in agg.vertices(&caps()).unwrap() {
            prop_assert!(one.contains(&v));
        }
        for v in one.vertices(&caps()).unwrap() {
            prop_assert!(lp.contains(&v));
        }
        let same = alpha_ratio(&one, &one, Direction::Maximize, 4, seed, &caps()).unwrap();
        prop_assert!(matches!(same.ratio, Ratio::Finite(ref r) if r.is_one()) || same.ratio == Ratio::Undefined);
    }

    #[test]
    fn selection_respects_k_and_tau(
        cuts in prop::collection::vec((prop::collection::vec(-4i64..=4, 3), -4i64..=4), 1..10),
        k in 1usize..=4,
        tau_num in 1i64..=10,
        scale in 1i64..=7,
    ) {
        let x = vec![int(1), rat(1, 2), int(2)];
        let mut pool = CutPool::new(vec![x.clone()]);
        let mut scaled = CutPool::new(vec![x.clone()]);
        for (a, b) in &cuts {
            let a: Vec<Rational> = a.iter().map(|&v| int(v)).collect();
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            let c = Cut::le(a, rat(*b, 2), Provenance::new("p"));
            if pool.push(c.clone()) {
                scaled.cuts.push(c.scaled(&rat(scale, 3)).unwrap());
            }
        }
        let mut policy = Policy::default_for(3);
        policy.k = k;
        policy.tau = rat(tau_num, 10);
        let out = select(&pool, &x, &policy, None).unwrap();
        prop_assert!(out.len() <= k);
        let tau_sq = &policy.tau * &policy.tau;
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                let d = rational::dot(&a.cut.coeffs, &b.cut.coeffs);
                let cos = &d * &d / (rational::sq_norm(&a.cut.coeffs) * rational::sq_norm(&b.cut.coeffs));
                prop_assert!(cos <= tau_sq);
            }
        }
        let again = select(&scaled, &x, &policy, None).unwrap();
        let idx = |v: &[cutlab::selection::ScoredCut]| v.iter().map(|s| s.index).collect::<Vec<_>>();
        prop_assert_eq!(idx(&out), idx(&again));
    }
}

#[test]
fn vpolytope_roundtrip_through_facets() {
    let p = VPolytope::new(2, vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
    let h = sparse_closure(&p, 2, &caps()).unwrap();
    let v = enumerate_vertices(&h, &caps()).unwrap();
    assert_eq!(sorted(v.vertices), sorted(p.vertices));
}
