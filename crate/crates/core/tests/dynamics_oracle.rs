use hyperdyn::dynamics::{
    build_finite_system, build_theorem2_system, build_translation_example, classify_all,
    compact_invariant_sets, escape_witness, expansive_delta, hyper_expansive_verdict,
    FixedPointClass,
};
use hyperdyn::oracle::{
    auto_horizon, is_induced_fixed, orbit_separation, separation_constant, separation_curve,
    window_size,
};
use hyperdyn::{hausdorff_distance, realize_window, PointRef, PointSet, Rational, SymbolicSystem};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn catalog() -> Vec<(&'static str, SymbolicSystem)> {
    vec![
        ("t2_01", build_theorem2_system(&[r(0, 1), r(1, 1)]).unwrap()),
        ("t2_0h1", build_theorem2_system(&[r(0, 1), r(1, 2), r(1, 1)]).unwrap()),
        (
            "t2_quarters",
            build_theorem2_system(&[r(0, 1), r(1, 3), r(2, 3), r(1, 1)]).unwrap(),
        ),
        ("translation", build_translation_example()),
        ("two_cycle", build_finite_system(&[vec![r(0, 1), r(1, 1)]]).unwrap()),
        (
            "cycle_and_fixed",
            build_finite_system(&[vec![r(0, 1), r(1, 1)], vec![r(2, 1)]]).unwrap(),
        ),
    ]
}

/// Direct scan with the metric module: every pair, every time step.
fn brute_force(system: &SymbolicSystem, m: u64, n: u64, nested: bool) -> (Rational, u64, u64) {
    let w = realize_window(system, m);
    let full = (1u64 << w.len()) - 1;
    let mut best: Option<(Rational, u64, u64)> = None;
    for a in 1..=full {
        for b in a + 1..=full {
            if nested && a & b != a {
                continue;
            }
            let c = orbit_separation(system, &w.subset(a), &w.subset(b), n).unwrap();
            if best.as_ref().map_or(true, |x| c < x.0) {
                best = Some((c, a, b));
            }
        }
    }
    best.unwrap()
}

#[test]
fn mask_engine_matches_brute_force() {
    for (name, s) in catalog() {
        let m = 1;
        if window_size(&s, m) > 6 {
            continue;
        }
        for n in [0, 1, auto_horizon(&s, m)] {
            for nested in [true, false] {
                let rep = separation_constant(&s, m, n, nested).unwrap();
                let (c, a, b) = brute_force(&s, m, n, nested);
                assert_eq!(rep.c, c, "{name} N={n} nested={nested}");
                assert_eq!(rep.witness_masks, (a, b), "{name} N={n} nested={nested}");
            }
        }
    }
}

#[test]
fn witness_attains_c() {
    for (name, s) in catalog() {
        for m in 1..=3 {
            if window_size(&s, m) > 13 {
                continue;
            }
            let n = auto_horizon(&s, m);
            let rep = separation_constant(&s, m, n, true).unwrap();
            let (a, b) = &rep.witness;
            assert!(a.is_subset(b) && a != b, "{name}");
            assert_eq!(orbit_separation(&s, a, b, n).unwrap(), rep.c, "{name} M={m}");
        }
    }
}

#[test]
fn nested_pairs_suffice() {
    for (name, s) in catalog() {
        for m in 1..=2 {
            if window_size(&s, m) > 10 {
                continue;
            }
            let n = auto_horizon(&s, m);
            let nested = separation_constant(&s, m, n, true).unwrap();
            let all = separation_constant(&s, m, n, false).unwrap();
            assert!(nested.c >= all.c, "{name}");
            assert_eq!(nested.c, all.c, "{name} M={m}");
        }
    }
}

#[test]
fn hyper_expansive_systems_pass_the_oracle() {
    for (name, s) in catalog() {
        let v = hyper_expansive_verdict(&s);
        let Some(delta) = v.delta() else { continue };
        let half = delta / &r(2, 1);
        for m in 1..=4 {
            if window_size(&s, m) > 13 {
                continue;
            }
            let rep = separation_constant(&s, m, auto_horizon(&s, m), true).unwrap();
            assert!(rep.c >= *delta, "{name} M={m}: c={} < delta={delta}", rep.c);
            assert!(rep.c >= half, "{name}");
        }
    }
}

#[test]
fn translation_curve_decreases_below_witness_bound() {
    let s = build_translation_example();
    let schedule: Vec<(u64, u64)> = (2..=5).map(|m| (m, auto_horizon(&s, m))).collect();
    let reps = separation_curve(&s, &schedule, true).unwrap();
    for w in reps.windows(2) {
        assert!(w[1].c < w[0].c);
    }
    for rep in &reps {
        let m = rep.m as i64;
        assert!(rep.c <= r(1, 2 * m));
        let (a, b) = escape_witness(&s, PointRef::Limit(0), rep.m).unwrap();
        assert_eq!(rep.witness, (a, b));
    }
    assert_eq!(separation_curve(&s, &schedule, true).unwrap(), reps);
}

#[test]
fn translation_fixed_horizon_bound() {
    let s = build_translation_example();
    let rep = separation_constant(&s, 4, 8, true).unwrap();
    assert!(rep.c <= r(1, 8));
}

#[test]
fn escape_witness_separation_vanishes() {
    let s = build_translation_example();
    for j in 1..=8i64 {
        let m = 1u64 << j;
        let (a, b) = escape_witness(&s, PointRef::Limit(0), m).unwrap();
        for n in [m, 2 * m, 4 * m] {
            let c = orbit_separation(&s, &a, &b, n).unwrap();
            assert!(c < Rational::pow2(-j), "j={j} N={n}");
        }
    }
}

/// Attracting/repelling read off the orbits of nearby window points under
/// `f^k`.
fn dynamic_class(s: &SymbolicSystem, p: PointRef, k: i64) -> &'static str {
    let x0 = s.value(p);
    let radius = classify_all(s)
        .iter()
        .filter(|(q, _)| *q != p)
        .map(|(q, _)| s.value(*q).dist(&x0) / r(2, 1))
        .min()
        .unwrap_or_else(Rational::one);
    let w = realize_window(s, 4);
    let near: Vec<PointRef> = w
        .refs()
        .iter()
        .copied()
        .filter(|&q| q != p && s.value(q).dist(&x0) < radius)
        .collect();
    let tends = |q: PointRef, dir: i64| s.value(s.iterate(q, dir * k * 40)).dist(&x0) < Rational::pow2(-10);
    let fwd = near.iter().all(|&q| tends(q, 1));
    let bwd = near.iter().all(|&q| tends(q, -1));
    let any_fwd = near.iter().any(|&q| tends(q, 1));
    let any_bwd = near.iter().any(|&q| tends(q, -1));
    match (fwd, bwd, any_fwd, any_bwd) {
        _ if near.is_empty() => "both_isolated",
        (true, false, _, false) => "attractor",
        (false, true, false, _) => "repeller",
        _ => "neither",
    }
}

#[test]
fn classification_matches_orbits_under_powers() {
    for (name, s) in catalog() {
        for (p, class) in classify_all(&s) {
            for k in 1..=3 {
                assert_eq!(dynamic_class(&s, p, k), class.label(), "{name} {p:?} k={k}");
            }
        }
    }
}

#[test]
fn attractor_basins_hold() {
    for (name, s) in catalog() {
        for (p, class) in classify_all(&s) {
            let (gamma, dir) = match class {
                FixedPointClass::Attractor { gamma } => (gamma, 1),
                FixedPointClass::Repeller { gamma } => (gamma, -1),
                _ => continue,
            };
            let x0 = s.value(p);
            for &q in realize_window(&s, 6).refs() {
                if s.value(q).dist(&x0) < gamma {
                    let far = s.value(s.iterate(q, dir * 60));
                    assert!(far.dist(&x0) < Rational::pow2(-12), "{name}");
                }
            }
        }
    }
}

#[test]
fn omega_is_the_recurrent_part_of_the_window() {
    for (name, s) in catalog() {
        let v = hyper_expansive_verdict(&s);
        let m = 3;
        let n = auto_horizon(&s, m).max(4) as i64;
        let w = realize_window(&s, m);
        // Smallest positive distance among all window points and their
        // iterates: closer than that means equal.
        let mut cloud: Vec<Rational> = Vec::new();
        for &q in w.refs() {
            for t in -n..=n {
                cloud.push(s.value(s.iterate(q, t)));
            }
        }
        let eps = hyperdyn::min_gap(&PointSet::new(cloud)).unwrap();
        for &q in w.refs() {
            let x = s.value(q);
            let recurrent = (1..=n).any(|t| s.value(s.iterate(q, t)).dist(&x) < eps);
            assert_eq!(recurrent, v.omega.contains(&x), "{name} {x}");
        }
    }
}

#[test]
fn invariant_sets_are_invariant() {
    for (name, s) in catalog() {
        let sets = compact_invariant_sets(&s, 64).unwrap();
        for set in &sets {
            let inner = set.realize(&s, 8);
            let outer = set.realize(&s, 16);
            for t in -8i64..=8 {
                let image = PointSet::new(inner.iter().map(|x| {
                    let q = s.locate(x).unwrap();
                    s.value(s.iterate(q, t))
                }));
                assert!(image.is_subset(&outer), "{name}");
                for x in &image {
                    assert!(set.contains_value(&s, x), "{name}");
                }
            }
            if set.is_finite(&s) {
                assert!(is_induced_fixed(&s, &inner, 8).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn fixed_window_subsets_are_listed() {
    for (name, s) in catalog() {
        let m = 1;
        if window_size(&s, m) > 10 {
            continue;
        }
        let w = realize_window(&s, m);
        let sets = compact_invariant_sets(&s, 64).unwrap();
        let finite: Vec<PointSet> = sets
            .iter()
            .filter(|x| x.is_finite(&s) || x.chains.is_empty())
            .map(|x| x.realize(&s, m))
            .collect();
        for mask in 1..(1u64 << w.len()) {
            let sub = w.subset(mask);
            if is_induced_fixed(&s, &sub, 4).unwrap() {
                assert!(finite.contains(&sub), "{name}: {sub:?}");
            }
        }
    }
}

#[test]
fn delta_examples() {
    let t = build_theorem2_system(&[r(0, 1), r(1, 3), r(2, 3), r(1, 1)]).unwrap();
    assert_eq!(expansive_delta(&t).unwrap(), r(1, 18));
    let s = build_theorem2_system(&[r(0, 1), r(1, 1)]).unwrap();
    let d = hausdorff_distance(&PointSet::new([r(1, 2)]), &PointSet::new([r(2, 3)])).unwrap();
    assert!(expansive_delta(&s).unwrap() <= d);
}
