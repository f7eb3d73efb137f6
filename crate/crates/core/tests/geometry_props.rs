//! Property tests for the polytope layer: hull monotonicity, hull
//! 1-Lipschitzness, and the Hausdorff metric axioms on random bodies.
//! Everything is exact, so assertions are equalities and inequalities with
//! no tolerance.

use proptest::prelude::*;

use bigramsey::geometry::{PointD, SymPolytope};
use bigramsey::scalar::Scalar;

fn coord() -> impl Strategy<Value = Scalar> {
    (-8i64..=8).prop_map(|n| Scalar::ratio(n, 8))
}

fn point(dim: usize) -> impl Strategy<Value = PointD> {
    prop::collection::vec(coord(), dim).prop_map(|c| PointD::new(c).unwrap())
}

fn points(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<PointD>> {
    prop::collection::vec(point(dim), 1..=max_len)
}

fn dims() -> impl Strategy<Value = usize> {
    1usize..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_contains_its_inputs((_d, pts) in dims().prop_flat_map(|d| (Just(d), points(d, 5)))) {
        let hull = SymPolytope::sc_hull(&pts).unwrap();
        for p in &pts {
            prop_assert!(hull.contains(p).unwrap());
            prop_assert!(hull.contains(&p.negated()).unwrap());
        }
    }

    #[test]
    fn hull_is_monotone((_d, pts, extra) in dims().prop_flat_map(|d| (Just(d), points(d, 4), points(d, 3)))) {
        // A ⊆ B ⇒ sc(A) ⊆ sc(B), tested via generator containment.
        let small = SymPolytope::sc_hull(&pts).unwrap();
        let mut all = pts.clone();
        all.extend(extra);
        let big = SymPolytope::sc_hull(&all).unwrap();
        for g in small.generators() {
            prop_assert!(big.contains(g).unwrap());
        }
    }

    #[test]
    fn hulls_are_one_lipschitz_in_their_point_lists(
        (_d, pairs) in dims().prop_flat_map(|d| {
            let pair = (point(d), point(d));
            (Just(d), prop::collection::vec(pair, 1..=4))
        })
    ) {
        // d_H(sc(A), sc(B)) ≤ max_i ‖a_i − b_i‖∞ for matched lists.
        let a: Vec<PointD> = pairs.iter().map(|(x, _)| x.clone()).collect();
        let b: Vec<PointD> = pairs.iter().map(|(_, y)| y.clone()).collect();
        let ha = SymPolytope::sc_hull(&a).unwrap();
        let hb = SymPolytope::sc_hull(&b).unwrap();
        let bound = pairs
            .iter()
            .map(|(x, y)| x.sup_dist(y).unwrap())
            .fold(Scalar::zero(), Scalar::max);
        prop_assert!(ha.hausdorff(&hb).unwrap() <= bound);
    }

    #[test]
    fn hausdorff_is_an_exact_metric(
        (_d, a, b, c) in dims().prop_flat_map(|d| (Just(d), points(d, 4), points(d, 4), points(d, 4)))
    ) {
        let p = SymPolytope::sc_hull(&a).unwrap();
        let q = SymPolytope::sc_hull(&b).unwrap();
        let r = SymPolytope::sc_hull(&c).unwrap();
        let pq = p.hausdorff(&q).unwrap();
        prop_assert_eq!(&pq, &q.hausdorff(&p).unwrap());
        prop_assert_eq!(pq.is_zero(), p == q);
        let qr = q.hausdorff(&r).unwrap();
        let pr = p.hausdorff(&r).unwrap();
        prop_assert!(pr <= &pq + &qr);
    }

    #[test]
    fn gauge_agrees_with_membership((_d, pts, q) in dims().prop_flat_map(|d| (Just(d), points(d, 4), point(d)))) {
        let hull = SymPolytope::sc_hull(&pts).unwrap();
        let inside = hull.contains(&q).unwrap();
        let gauge = hull.gauge(&q).unwrap();
        match gauge {
            Some(g) => prop_assert_eq!(inside, g <= Scalar::one()),
            None => prop_assert!(!inside),
        }
        // Membership also matches a zero point-to-body distance.
        prop_assert_eq!(inside, hull.point_dist(&q).unwrap().is_zero());
    }
}
