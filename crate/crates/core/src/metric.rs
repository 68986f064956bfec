//! Finite point sets on the line and the Hausdorff metric between them.
//!
//! For nonempty finite `A`, `B` the Hausdorff distance
//!
//! ```text
//! d_H(A, B) = inf { e > 0 : A ⊂ B_e(B) and B ⊂ B_e(A) }
//! ```
//!
//! (open balls) is attained as `max(h(A, B), h(B, A))` with
//! `h(A, B) = max_{a ∈ A} min_{b ∈ B} |a - b|`: the set of admissible `e` is
//! the open ray above that max-min value, and every candidate is one of the
//! finitely many pairwise distances.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A strictly increasing finite list of rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<Rational>,
}

impl PointSet {
    /// Sorts and deduplicates.
    pub fn new<I: IntoIterator<Item = Rational>>(points: I) -> Self {
        let mut points: Vec<Rational> = points.into_iter().collect();
        points.sort();
        points.dedup();
        PointSet { points }
    }

    /// Accepts only input that is already strictly increasing.
    pub fn from_sorted(points: Vec<Rational>) -> Result<Self> {
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(
                "point set must be strictly increasing".to_string(),
            ));
        }
        Ok(PointSet { points })
    }

    pub fn empty() -> Self {
        PointSet::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.points.iter()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet::new(self.points.iter().chain(other.points.iter()).cloned())
    }

    pub fn first(&self) -> Option<&Rational> {
        self.points.first()
    }

    pub fn last(&self) -> Option<&Rational> {
        self.points.last()
    }

    /// Distance from `x` to the nearest point of the set. `None` when empty.
    pub fn distance_to(&self, x: &Rational) -> Option<Rational> {
        let idx = match self.points.binary_search(x) {
            Ok(_) => return Some(Rational::zero()),
            Err(i) => i,
        };
        let left = idx.checked_sub(1).map(|i| x.dist(&self.points[i]));
        let right = self.points.get(idx).map(|p| x.dist(p));
        match (left, right) {
            (Some(l), Some(r)) => Some(if l <= r { l } else { r }),
            (l, r) => l.or(r),
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points.iter()).finish()
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<Rational>::deserialize(deserializer)?;
        PointSet::from_sorted(points).map_err(serde::de::Error::custom)
    }
}

impl FromIterator<Rational> for PointSet {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        PointSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Directed distance `max_{a ∈ A} min_{b ∈ B} |a - b|`.
pub fn directed_distance(a: &PointSet, b: &PointSet) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCompactSet);
    }
    let mut best = Rational::zero();
    for x in a {
        let d = b.distance_to(x).expect("nonempty");
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Hausdorff distance between two nonempty finite subsets of the line.
pub fn hausdorff_distance(a: &PointSet, b: &PointSet) -> Result<Rational> {
    let ab = directed_distance(a, b)?;
    let ba = directed_distance(b, a)?;
    Ok(if ab >= ba { ab } else { ba })
}

/// Smallest difference between consecutive points.
pub fn min_gap(a: &PointSet) -> Result<Rational> {
    a.points()
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .ok_or(Error::GapUndefined)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn set(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(n, d)| r(n, d)))
    }

    #[test]
    fn identity_case() {
        let a = set(&[(0, 1), (1, 2)]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), Rational::zero());
    }

    #[test]
    fn singleton_against_pair() {
        let a = set(&[(0, 1)]);
        let b = set(&[(0, 1), (1, 1)]);
        assert_eq!(directed_distance(&a, &b).unwrap(), Rational::zero());
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), Rational::one());
    }

    #[test]
    fn interleaved_sets() {
        let a = set(&[(0, 1), (1, 2)]);
        let b = set(&[(1, 3), (1, 1)]);
        assert_eq!(directed_distance(&a, &b).unwrap(), r(1, 3));
        assert_eq!(directed_distance(&b, &a).unwrap(), r(1, 2));
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), r(1, 2));
    }

    #[test]
    fn empty_sets_are_rejected() {
        let a = set(&[(0, 1)]);
        let e = PointSet::empty();
        assert_eq!(hausdorff_distance(&a, &e), Err(Error::EmptyCompactSet));
        assert_eq!(hausdorff_distance(&e, &a), Err(Error::EmptyCompactSet));
    }

    #[test]
    fn min_gap_examples() {
        assert_eq!(min_gap(&set(&[(0, 1), (1, 2), (1, 1)])).unwrap(), r(1, 2));
        assert_eq!(min_gap(&set(&[(1, 3), (1, 2), (1, 1)])).unwrap(), r(1, 6));
        assert_eq!(min_gap(&set(&[(0, 1), (1, 1)])).unwrap(), Rational::one());
        assert_eq!(min_gap(&set(&[(0, 1)])), Err(Error::GapUndefined));
    }

    #[test]
    fn from_sorted_rejects_duplicates() {
        assert!(PointSet::from_sorted(vec![r(0, 1), r(0, 1)]).is_err());
        assert!(PointSet::from_sorted(vec![r(1, 1), r(0, 1)]).is_err());
    }

    #[test]
    fn json_is_array_of_strings() {
        let a = set(&[(1, 2), (-3, 4), (2, 1)]);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"["-3/4","1/2","2"]"#);
        let back: PointSet = serde_json::from_str(r#"["-3/4","1/2","2"]"#).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<PointSet>(r#"["1","0"]"#).is_err());
    }
}
