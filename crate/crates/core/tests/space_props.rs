use hyperdyn::dynamics::{build_finite_system, build_theorem2_system, build_translation_example};
use hyperdyn::space::ChainKind;
use hyperdyn::{realize_window, PointRef, Rational, SymbolicSystem};

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
        (
            "cycle_and_fixed",
            build_finite_system(&[vec![r(0, 1), r(1, 1)], vec![r(2, 1)]]).unwrap(),
        ),
    ]
}

fn bi_infinite(s: &SymbolicSystem) -> Vec<(usize, usize, usize)> {
    s.chains()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match &c.kind {
            ChainKind::BiInfinite { alpha, omega, .. } => Some((i, *alpha, *omega)),
            ChainKind::Periodic { .. } => None,
        })
        .collect()
}

#[test]
fn windows_grow_and_stay_injective() {
    for (name, s) in catalog() {
        let mut prev = realize_window(&s, 1);
        for m in 2..=12 {
            let w = realize_window(&s, m);
            assert!(prev.points().is_subset(w.points()), "{name} M={m}");
            assert_eq!(w.refs().len(), w.len(), "{name}");
            let mut images = w.images().to_vec();
            images.sort();
            images.dedup();
            assert_eq!(images.len(), w.len(), "{name} M={m}: window map not injective");
            prev = w;
        }
    }
}

#[test]
fn chains_converge_to_anchors() {
    for (name, s) in catalog() {
        for (c, alpha, omega) in bi_infinite(&s) {
            let at = |k: i64| s.value(PointRef::Chain { chain: c, index: k });
            let a = s.value(PointRef::Limit(alpha));
            let o = s.value(PointRef::Limit(omega));
            for j in 1..=20i64 {
                let e = Rational::pow2(-j);
                let reach = |d: &dyn Fn(i64) -> Rational| {
                    let mut k = 1i64;
                    while d(k) >= e {
                        k *= 2;
                    }
                    k
                };
                assert!(reach(&|k| at(k).dist(&o)) <= 1 << (j + 1), "{name} j={j}");
                assert!(reach(&|k| at(-k).dist(&a)) <= 1 << (j + 1), "{name} j={j}");
            }
            for k in 1..64 {
                assert!(at(k + 1).dist(&o) < at(k).dist(&o), "{name} k={k}");
                assert!(at(-k - 1).dist(&a) < at(-k).dist(&a), "{name} k={k}");
            }
        }
    }
}

#[test]
fn map_is_continuous_at_anchors() {
    for (name, s) in catalog() {
        for (c, alpha, omega) in bi_infinite(&s) {
            let image_of = |p: PointRef| s.value(s.image(p));
            let fa = image_of(PointRef::Limit(alpha));
            let fo = image_of(PointRef::Limit(omega));
            for j in 1..=16i64 {
                let k = 1i64 << (j + 1);
                let fwd = image_of(PointRef::Chain { chain: c, index: k });
                let bwd = image_of(PointRef::Chain { chain: c, index: -k });
                assert!(fwd.dist(&fo) < Rational::pow2(-j), "{name} j={j}");
                assert!(bwd.dist(&fa) < Rational::pow2(-j), "{name} j={j}");
            }
        }
    }
}

#[test]
fn isolation_balls_are_empty() {
    for (name, s) in catalog() {
        let fine = realize_window(&s, 128);
        for &p in realize_window(&s, 6).refs() {
            let x = s.value(p);
            match s.isolation_radius(p) {
                Ok(radius) => {
                    assert!(radius.is_positive(), "{name}");
                    let others = fine.points().iter().filter(|y| **y != x);
                    for y in others {
                        assert!(y.dist(&x) >= radius, "{name} {x}: {y} inside ball");
                    }
                }
                Err(_) => {
                    let nearest = fine
                        .points()
                        .iter()
                        .filter(|y| **y != x)
                        .map(|y| y.dist(&x))
                        .min()
                        .unwrap();
                    assert!(nearest < Rational::pow2(-6), "{name} {x} reported non-isolated");
                }
            }
        }
    }
}
