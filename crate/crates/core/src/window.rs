//! Exact finite truncations of a symbolic system.

use crate::metric::PointSet;
use crate::rational::Rational;
use crate::space::{ChainKind, PointRef, SymbolicSystem};

/// Limit values, all periodic points, and bi-infinite chain points with
/// `|k| <= m`. Images are true images under the map and may lie outside the
/// window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    m: u64,
    points: PointSet,
    refs: Vec<PointRef>,
    images: Vec<Rational>,
}

pub fn realize_window(system: &SymbolicSystem, m: u64) -> Window {
    assert!(m >= 1, "window size must be positive");
    let mut entries: Vec<(Rational, PointRef)> = Vec::new();
    for i in 0..system.limits().len() {
        let p = PointRef::Limit(i);
        entries.push((system.value(p), p));
    }
    let span = m as i64;
    for (ci, c) in system.chains().iter().enumerate() {
        let range = match &c.kind {
            ChainKind::BiInfinite { .. } => -span..=span,
            ChainKind::Periodic { cycle } => 0..=(cycle.len() as i64 - 1),
        };
        for index in range {
            let p = PointRef::Chain { chain: ci, index };
            entries.push((system.value(p), p));
        }
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let images = entries
        .iter()
        .map(|(_, p)| system.value(system.image(*p)))
        .collect();
    let (values, refs): (Vec<Rational>, Vec<PointRef>) = entries.into_iter().unzip();
    let points = PointSet::from_sorted(values).expect("validated systems have distinct points");
    Window {
        m,
        points,
        refs,
        images,
    }
}

impl Window {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Symbolic names, aligned with `points()`.
    pub fn refs(&self) -> &[PointRef] {
        &self.refs
    }

    /// `f(x)` for each window point, aligned with `points()`.
    pub fn images(&self) -> &[Rational] {
        &self.images
    }

    /// Exact image of a window point, if `x` is one.
    pub fn map(&self, x: &Rational) -> Option<&Rational> {
        let i = self.points.points().binary_search(x).ok()?;
        Some(&self.images[i])
    }

    /// The window points selected by a bit mask over the sorted points.
    pub fn subset(&self, mask: u64) -> PointSet {
        let pts = self.points.points();
        PointSet::from_sorted(
            (0..pts.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pts[i].clone())
                .collect(),
        )
        .expect("subsequence of a sorted set")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::parse_space;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn logistic_window_m1() {
        let s = parse_space(
            r#"{"limits":[{"id":"a","value":"0"},{"id":"b","value":"1"}],
                "limit_perm":{"a":"a","b":"b"},
                "chains":[{"id":"c","kind":"bi_infinite","alpha":"a","omega":"b",
                           "generator":{"kind":"logistic","p":"0","q":"1"}}]}"#,
        )
        .unwrap();
        let w = realize_window(&s, 1);
        let expect = PointSet::new([r(0, 1), r(1, 3), r(1, 2), r(2, 3), r(1, 1)]);
        assert_eq!(w.points(), &expect);
        // f(2/3) = 4/5 lies outside the window.
        assert_eq!(w.map(&r(2, 3)), Some(&r(4, 5)));
        assert_eq!(w.map(&r(0, 1)), Some(&r(0, 1)));
        assert_eq!(w.subset(0b00110), PointSet::new([r(1, 3), r(1, 2)]));
    }
}
