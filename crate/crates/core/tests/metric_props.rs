use hyperdyn::{directed_distance, hausdorff_distance, min_gap, PointSet, Rational};
use proptest::prelude::*;

/// Hausdorff distance straight from the definition: the least candidate
/// `e` (a pairwise distance) such that every point of each set has a point of
/// the other within any radius above `e`, found by bisection on the sorted
/// candidates.
fn hausdorff_by_definition(a: &PointSet, b: &PointSet) -> Rational {
    let covered = |e: &Rational, x: &PointSet, y: &PointSet| {
        x.iter().all(|p| y.iter().any(|q| p.dist(q) <= *e))
    };
    let ok = |e: &Rational| covered(e, a, b) && covered(e, b, a);
    let mut cands: Vec<Rational> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| p.dist(q)))
        .collect();
    cands.push(Rational::zero());
    cands.sort();
    cands.dedup();
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(&cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo].clone()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-64i64..=64, 1i64..=64).prop_map(|(n, d)| Rational::new(n, d))
}

fn point_set() -> impl Strategy<Value = PointSet> {
    prop::collection::vec(rational(), 1..=12).prop_map(PointSet::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn agrees_with_definition(a in point_set(), b in point_set()) {
        prop_assert_eq!(hausdorff_distance(&a, &b).unwrap(), hausdorff_by_definition(&a, &b));
    }

    #[test]
    fn metric_axioms(a in point_set(), b in point_set(), c in point_set()) {
        let d = |x: &PointSet, y: &PointSet| hausdorff_distance(x, y).unwrap();
        prop_assert!(!d(&a, &b).is_negative());
        prop_assert_eq!(d(&a, &b).is_zero(), a == b);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn union_is_closer(a in point_set(), b in point_set()) {
        let ab = a.union(&b);
        prop_assert!(hausdorff_distance(&a, &b).unwrap() >= hausdorff_distance(&a, &ab).unwrap());
    }

    #[test]
    fn directed_is_zero_on_subsets(a in point_set(), b in point_set()) {
        let ab = a.union(&b);
        prop_assert!(directed_distance(&a, &ab).unwrap().is_zero());
    }

    #[test]
    fn min_gap_is_smallest_pairwise(a in point_set()) {
        let brute = a.iter().enumerate()
            .flat_map(|(i, p)| a.iter().skip(i + 1).map(move |q| p.dist(q)))
            .min();
        prop_assert_eq!(min_gap(&a).ok(), brute);
    }
}
