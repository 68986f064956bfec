//! Periodic-point classification, verdicts and expansive constants for
//! symbolic systems.
//!
//! Every limit point of a valid system is fixed, so a limit point's type is
//! read off from the chains anchored at it: chains whose forward limit is `p`
//! flow in, chains whose backward limit is `p` flow out. A system is
//! hyper-expansive exactly when no limit point has both.

use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::ChainGenerator;
use crate::metric::{min_gap, PointSet};
use crate::rational::Rational;
use crate::space::{point_at, ChainKind, LimitPoint, OrbitChain, PointRef, SymbolicSystem};

/// Largest `k` accepted by [`shift_periodic_count`].
pub const MAX_SHIFT_WORD: u32 = 20;

// ---------------------------------------------------------------------------
// Catalog constructions

/// Limit points `p_1 < ... < p_n`, all fixed, with one logistic chain in each
/// gap. Chains in odd gaps move right and chains in even gaps move left, so
/// `p_j` is a repeller for odd `j` and an attractor for even `j`.
pub fn build_theorem2_system(values: &[Rational]) -> Result<SymbolicSystem> {
    if values.len() < 2 {
        return Err(Error::InvalidParams(
            "need at least two limit values".into(),
        ));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "limit values must be strictly increasing".into(),
        ));
    }
    let limits: Vec<LimitPoint> = values
        .iter()
        .enumerate()
        .map(|(i, v)| LimitPoint {
            id: format!("p{}", i + 1),
            value: v.clone(),
        })
        .collect();
    let chains = (0..values.len() - 1)
        .map(|i| {
            // Gap j = i + 1 lies between limits i and i + 1.
            let (alpha, omega) = if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) };
            OrbitChain {
                id: format!("c{}", i + 1),
                kind: ChainKind::BiInfinite {
                    alpha,
                    omega,
                    generator: ChainGenerator::logistic(
                        values[alpha].clone(),
                        values[omega].clone(),
                    ),
                },
            }
        })
        .collect();
    let n = values.len();
    SymbolicSystem::new(limits, (0..n).collect(), chains)
}

/// `{0} ∪ {1/m : m >= 1}` with a single orbit `y_k ↦ y_{k+1}` through all
/// of `{1/m}`, where `y_k = 1/(2k)` for `k >= 1` and `y_k = 1/(1 - 2k)` for
/// `k <= 0`. Expansive, but not hyper-expansive.
pub fn build_translation_example() -> SymbolicSystem {
    let limits = vec![LimitPoint {
        id: "0".into(),
        value: Rational::zero(),
    }];
    let chains = vec![OrbitChain {
        id: "y".into(),
        kind: ChainKind::BiInfinite {
            alpha: 0,
            omega: 0,
            generator: ChainGenerator::interleaved(Rational::zero(), Rational::one()),
        },
    }];
    SymbolicSystem::new(limits, vec![0], chains).expect("catalog system is valid")
}

/// A finite space made of the given periodic cycles (each listed in orbit
/// order).
pub fn build_finite_system(cycles: &[Vec<Rational>]) -> Result<SymbolicSystem> {
    let chains = cycles
        .iter()
        .enumerate()
        .map(|(i, cycle)| OrbitChain {
            id: format!("z{}", i + 1),
            kind: ChainKind::Periodic {
                cycle: cycle.clone(),
            },
        })
        .collect();
    SymbolicSystem::new(Vec::new(), Vec::new(), chains)
        .map_err(|e| Error::InvalidParams(e.to_string()))
}

// ---------------------------------------------------------------------------
// Classification

/// Type of a periodic point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPointClass {
    /// Every point within `gamma` converges to the orbit in forward time.
    Attractor { gamma: Rational },
    /// The same for backward time.
    Repeller { gamma: Rational },
    /// An isolated periodic point.
    BothIsolated,
    /// Chains accumulate on both sides of time: `into` has its forward limit
    /// here, `out_of` its backward limit. Possibly the same chain.
    Neither { into: usize, out_of: usize },
}

impl FixedPointClass {
    pub fn label(&self) -> &'static str {
        match self {
            FixedPointClass::Attractor { .. } => "attractor",
            FixedPointClass::Repeller { .. } => "repeller",
            FixedPointClass::BothIsolated => "both_isolated",
            FixedPointClass::Neither { .. } => "neither",
        }
    }

    /// Short tag used in graph exports.
    pub fn letter(&self) -> char {
        match self {
            FixedPointClass::Attractor { .. } => 'A',
            FixedPointClass::Repeller { .. } => 'R',
            FixedPointClass::BothIsolated => 'I',
            FixedPointClass::Neither { .. } => 'N',
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        !matches!(self, FixedPointClass::Neither { .. })
    }
}

impl fmt::Display for FixedPointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_periodic_point(system: &SymbolicSystem, p: PointRef) -> Result<FixedPointClass> {
    let i = match system.normalize(p) {
        PointRef::Limit(i) => i,
        q @ PointRef::Chain { .. } => {
            return match system.period(q) {
                Some(_) => Ok(FixedPointClass::BothIsolated),
                None => Err(Error::NotPeriodic(system.value(q).to_string())),
            };
        }
    };
    let mut into = None;
    let mut out_of = None;
    for (ci, c) in system.chains().iter().enumerate() {
        if let ChainKind::BiInfinite { alpha, omega, .. } = c.kind {
            if omega == i && into.is_none() {
                into = Some(ci);
            }
            if alpha == i && out_of.is_none() {
                out_of = Some(ci);
            }
        }
    }
    match (into, out_of) {
        (Some(into), Some(out_of)) => Ok(FixedPointClass::Neither { into, out_of }),
        (Some(_), None) => Ok(FixedPointClass::Attractor {
            gamma: basin_radius(system, i),
        }),
        (None, Some(_)) => Ok(FixedPointClass::Repeller {
            gamma: basin_radius(system, i),
        }),
        (None, None) => unreachable!("validated systems anchor every limit point"),
    }
}

/// Half the distance to the nearest other periodic point, shrunk further if a
/// chain not anchored at `p` comes closer.
fn basin_radius(system: &SymbolicSystem, i: usize) -> Rational {
    let x = &system.limits()[i].value;
    let mut best: Option<Rational> = None;
    let mut offer = |d: Rational| {
        if best.as_ref().map_or(true, |b| d < *b) {
            best = Some(d);
        }
    };
    for q in system.periodic_points() {
        if q != PointRef::Limit(i) {
            offer(x.dist(&system.value(q)) / Rational::from_integer(2));
        }
    }
    for c in system.chains() {
        if let ChainKind::BiInfinite {
            alpha,
            omega,
            generator,
        } = &c.kind
        {
            if *alpha != i && *omega != i {
                let br = generator.locate(x);
                for (_, v) in br.below.iter().chain(br.above.iter()) {
                    offer(x.dist(v));
                }
            }
        }
    }
    best.unwrap_or_else(Rational::one)
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotReason {
    NonHyperbolicPeriodic { point: Rational },
    /// Unreachable for finitely generated systems; kept for completeness of
    /// the report format.
    InfinitelyManyOrbits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictResult {
    HyperExpansive { delta: Rational },
    Not { reason: NotReason },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub result: VerdictResult,
    /// The non-wandering set: all periodic points, increasing.
    pub omega: PointSet,
    pub orbit_count: usize,
}

impl Verdict {
    pub fn is_hyper_expansive(&self) -> bool {
        matches!(self.result, VerdictResult::HyperExpansive { .. })
    }

    pub fn delta(&self) -> Option<&Rational> {
        match &self.result {
            VerdictResult::HyperExpansive { delta } => Some(delta),
            VerdictResult::Not { .. } => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match &self.result {
            VerdictResult::HyperExpansive { delta } => {
                map.serialize_entry("result", "hyper_expansive")?;
                map.serialize_entry("delta", delta)?;
            }
            VerdictResult::Not { reason } => {
                map.serialize_entry("result", "not")?;
                match reason {
                    NotReason::NonHyperbolicPeriodic { point } => {
                        let mut r = std::collections::BTreeMap::new();
                        r.insert("non_hyperbolic_periodic", point);
                        map.serialize_entry("reason", &r)?;
                    }
                    NotReason::InfinitelyManyOrbits => {
                        map.serialize_entry("reason", "infinitely_many_orbits")?;
                    }
                }
            }
        }
        map.serialize_entry("omega", &self.omega)?;
        map.serialize_entry("orbit_count", &self.orbit_count)?;
        map.end()
    }
}

/// Classification of every periodic point, in increasing order of value.
pub fn classify_all(system: &SymbolicSystem) -> Vec<(PointRef, FixedPointClass)> {
    system
        .periodic_points()
        .into_iter()
        .map(|p| {
            let class = classify_periodic_point(system, p).expect("periodic by construction");
            (p, class)
        })
        .collect()
}

pub fn hyper_expansive_verdict(system: &SymbolicSystem) -> Verdict {
    let periodic = system.periodic_points();
    let omega = PointSet::new(periodic.iter().map(|&p| system.value(p)));
    let orbit_count = system.orbit_count();
    let offender = classify_all(system)
        .into_iter()
        .find(|(_, c)| !c.is_hyperbolic());
    let result = match offender {
        Some((p, _)) => VerdictResult::Not {
            reason: NotReason::NonHyperbolicPeriodic {
                point: system.value(p),
            },
        },
        None => VerdictResult::HyperExpansive {
            delta: delta_unchecked(system, &omega),
        },
    };
    Verdict {
        result,
        omega,
        orbit_count,
    }
}

/// `min(δ₁, δ₂)`: `δ₁` is half the smallest gap between periodic points and
/// `δ₂` the smallest isolation radius of a chain representative (index 0).
/// A vacuous term is `+∞`; if both are vacuous the constant is 1.
pub fn expansive_delta(system: &SymbolicSystem) -> Result<Rational> {
    let v = hyper_expansive_verdict(system);
    match v.result {
        VerdictResult::HyperExpansive { delta } => Ok(delta),
        VerdictResult::Not { reason } => Err(Error::NotHyperExpansive(match reason {
            NotReason::NonHyperbolicPeriodic { point } => {
                format!("periodic point {point} is neither attracting nor repelling")
            }
            NotReason::InfinitelyManyOrbits => "infinitely many orbits".into(),
        })),
    }
}

fn delta_unchecked(system: &SymbolicSystem, omega: &PointSet) -> Rational {
    let d1 = periodic_half_gap(omega);
    let d2 = system
        .wandering_chains()
        .map(|c| {
            system
                .isolation_radius(PointRef::Chain { chain: c, index: 0 })
                .expect("chain points are isolated")
        })
        .min();
    match (d1, d2) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => Rational::one(),
    }
}

/// `δ₁`: half the minimum gap between periodic points, if there are two.
pub fn periodic_half_gap(omega: &PointSet) -> Option<Rational> {
    min_gap(omega).ok().map(|g| g / Rational::from_integer(2))
}

/// The constructive pair for a non-hyperbolic limit point `p`: with `a` on a
/// chain flowing out of `p` and `b` on one flowing in, `A = {f^M(b),
/// f^-M(a)}` and `B = A ∪ {p}`. Both sets collapse onto `p` in both time
/// directions, so their separation tends to zero with `M`.
pub fn escape_witness(system: &SymbolicSystem, p: PointRef, m: u64) -> Result<(PointSet, PointSet)> {
    let (into, out_of) = match classify_periodic_point(system, p)? {
        FixedPointClass::Neither { into, out_of } => (into, out_of),
        other => {
            return Err(Error::InvalidParams(format!(
                "{} is a {other}, not a non-hyperbolic point",
                system.value(p)
            )))
        }
    };
    let m = m as i64;
    let a = PointSet::new([
        point_at(&system.chains()[into], m),
        point_at(&system.chains()[out_of], -m),
    ]);
    let b = a.union(&PointSet::new([system.value(p)]));
    Ok((a, b))
}

// ---------------------------------------------------------------------------
// Invariant sets

/// A closed invariant set: a union of limit cycles and whole chains whose
/// anchors it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantSet {
    pub limits: Vec<usize>,
    pub chains: Vec<usize>,
}

impl InvariantSet {
    pub fn contains(&self, p: PointRef) -> bool {
        match p {
            PointRef::Limit(i) => self.limits.contains(&i),
            PointRef::Chain { chain, .. } => self.chains.contains(&chain),
        }
    }

    pub fn contains_value(&self, system: &SymbolicSystem, x: &Rational) -> bool {
        system.locate(x).is_some_and(|p| self.contains(p))
    }

    pub fn is_finite(&self, system: &SymbolicSystem) -> bool {
        self.chains.iter().all(|&c| system.chains()[c].is_periodic())
    }

    /// Limit points, periodic chains, and bi-infinite chain points with
    /// `|k| <= m`.
    pub fn realize(&self, system: &SymbolicSystem, m: u64) -> PointSet {
        let mut pts: Vec<Rational> = self
            .limits
            .iter()
            .map(|&i| system.limits()[i].value.clone())
            .collect();
        for &c in &self.chains {
            let chain = &system.chains()[c];
            match &chain.kind {
                ChainKind::Periodic { cycle } => pts.extend(cycle.iter().cloned()),
                ChainKind::BiInfinite { .. } => {
                    let m = m as i64;
                    pts.extend((-m..=m).map(|k| point_at(chain, k)));
                }
            }
        }
        PointSet::new(pts)
    }
}

/// All nonempty closed invariant sets, ordered by limit-cycle mask and then by
/// chain mask. Fails when there are more than `cap`.
pub fn compact_invariant_sets(system: &SymbolicSystem, cap: usize) -> Result<Vec<InvariantSet>> {
    let cycles = system.limit_cycles();
    let n_chains = system.chains().len();
    let too_many = |lower_bound: u128| Error::CapExceeded { lower_bound, cap };
    // Every nonempty choice of limit cycles is already an invariant set.
    if cycles.len() >= 127 {
        return Err(too_many(u128::MAX));
    }
    let limit_sets = (1u128 << cycles.len()) - 1;
    if limit_sets > cap as u128 {
        return Err(too_many(limit_sets));
    }
    let mut cycle_of = vec![0usize; system.limits().len()];
    for (ci, cyc) in cycles.iter().enumerate() {
        for &i in cyc {
            cycle_of[i] = ci;
        }
    }
    let allowed = |lmask: u64| -> Vec<usize> {
        (0..n_chains)
            .filter(|&c| match &system.chains()[c].kind {
                ChainKind::Periodic { .. } => true,
                ChainKind::BiInfinite { alpha, omega, .. } => {
                    lmask >> cycle_of[*alpha] & 1 == 1 && lmask >> cycle_of[*omega] & 1 == 1
                }
            })
            .collect()
    };
    let mut total: u128 = 0;
    for lmask in 0..(1u64 << cycles.len()) {
        let k = allowed(lmask).len() as u32;
        let here = if k >= 127 { u128::MAX } else { 1u128 << k };
        total = total.saturating_add(here);
    }
    let total = total - 1;
    if total > cap as u128 {
        return Err(too_many(total));
    }
    let mut out = Vec::with_capacity(total as usize);
    for lmask in 0..(1u64 << cycles.len()) {
        let limits: Vec<usize> = {
            let mut v: Vec<usize> = (0..cycles.len())
                .filter(|ci| lmask >> ci & 1 == 1)
                .flat_map(|ci| cycles[ci].iter().copied())
                .collect();
            v.sort_unstable();
            v
        };
        let free = allowed(lmask);
        for cmask in 0..(1u64 << free.len()) {
            if lmask == 0 && cmask == 0 {
                continue;
            }
            let chains = (0..free.len())
                .filter(|b| cmask >> b & 1 == 1)
                .map(|b| free[b])
                .collect();
            out.push(InvariantSet {
                limits: limits.clone(),
                chains,
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Shift and minimality helpers

/// Number of points of period dividing `k` for the full 2-shift, counted by
/// enumerating binary words of length `k` and checking that `k` cyclic shifts
/// return each one to itself.
pub fn shift_periodic_count(k: u32) -> Result<u64> {
    if k == 0 || k > MAX_SHIFT_WORD {
        return Err(Error::InvalidParams(format!(
            "word length must be in 1..={MAX_SHIFT_WORD}"
        )));
    }
    let mask = (1u64 << k) - 1;
    let rotate = |w: u64| ((w << 1) | (w >> (k - 1))) & mask;
    let count = (0..=mask)
        .filter(|&w| {
            let mut v = w;
            for _ in 0..k {
                v = rotate(v);
            }
            v == w
        })
        .count();
    Ok(count as u64)
}

/// Smallest `n` such that `{x, f(x), ..., f^n(x)}` is `eps`-dense in the
/// periodic orbit through `orbit`.
pub fn eps_dense_segment(
    system: &SymbolicSystem,
    orbit: PointRef,
    x: &Rational,
    eps: &Rational,
) -> Result<usize> {
    if !eps.is_positive() {
        return Err(Error::InvalidParams("eps must be positive".into()));
    }
    let period = system
        .period(orbit)
        .ok_or_else(|| Error::NotPeriodic(system.value(orbit).to_string()))?;
    let k: Vec<Rational> = (0..period as i64)
        .map(|n| system.value(system.iterate(orbit, n)))
        .collect();
    let start = k
        .iter()
        .position(|y| y == x)
        .ok_or_else(|| Error::NotInOrbit(x.to_string()))?;
    let mut seen: Vec<&Rational> = Vec::new();
    for n in 0..period {
        seen.push(&k[(start + n) % period]);
        if k.iter().all(|y| seen.iter().any(|s| s.dist(y) < *eps)) {
            return Ok(n);
        }
    }
    unreachable!("the full orbit is dense in itself")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn theorem2_two_limits() {
        let s = build_theorem2_system(&[r(0, 1), r(1, 1)]).unwrap();
        assert_eq!(s.value(PointRef::Chain { chain: 0, index: 0 }), r(1, 2));
        assert_eq!(s.value(PointRef::Chain { chain: 0, index: 1 }), r(2, 3));
        assert!(matches!(
            classify_periodic_point(&s, PointRef::Limit(0)).unwrap(),
            FixedPointClass::Repeller { .. }
        ));
        assert!(matches!(
            classify_periodic_point(&s, PointRef::Limit(1)).unwrap(),
            FixedPointClass::Attractor { .. }
        ));
        let v = hyper_expansive_verdict(&s);
        assert_eq!(v.delta(), Some(&r(1, 6)));
        assert_eq!(v.orbit_count, 3);
    }

    #[test]
    fn theorem2_middle_limit_attracts() {
        let s = build_theorem2_system(&[r(0, 1), r(1, 2), r(1, 1)]).unwrap();
        assert!(matches!(
            classify_periodic_point(&s, PointRef::Limit(1)).unwrap(),
            FixedPointClass::Attractor { gamma } if gamma == r(1, 4)
        ));
        assert_eq!(expansive_delta(&s).unwrap(), r(1, 12));
    }

    #[test]
    fn theorem2_rejects_bad_limits() {
        assert!(build_theorem2_system(&[r(1, 1), r(0, 1)]).is_err());
        assert!(build_theorem2_system(&[r(0, 1)]).is_err());
    }

    #[test]
    fn translation_example() {
        let s = build_translation_example();
        let y = |k| s.value(PointRef::Chain { chain: 0, index: k });
        assert_eq!((y(0), y(1), y(-1)), (r(1, 1), r(1, 2), r(1, 3)));
        assert_eq!(
            classify_periodic_point(&s, PointRef::Limit(0)).unwrap(),
            FixedPointClass::Neither { into: 0, out_of: 0 }
        );
        let v = hyper_expansive_verdict(&s);
        assert_eq!(
            v.result,
            VerdictResult::Not {
                reason: NotReason::NonHyperbolicPeriodic { point: r(0, 1) }
            }
        );
        assert!(matches!(expansive_delta(&s), Err(Error::NotHyperExpansive(_))));
        let (a, b) = escape_witness(&s, PointRef::Limit(0), 3).unwrap();
        assert_eq!(a, PointSet::new([r(1, 6), r(1, 7)]));
        assert_eq!(b, PointSet::new([r(0, 1), r(1, 6), r(1, 7)]));
    }

    #[test]
    fn finite_cycles() {
        let s = build_finite_system(&[vec![r(0, 1), r(1, 1)]]).unwrap();
        let p = PointRef::Chain { chain: 0, index: 1 };
        assert_eq!(classify_periodic_point(&s, p).unwrap(), FixedPointClass::BothIsolated);
        assert_eq!(expansive_delta(&s).unwrap(), r(1, 2));
        assert_eq!(eps_dense_segment(&s, p, &r(0, 1), &r(1, 4)).unwrap(), 1);
        assert_eq!(eps_dense_segment(&s, p, &r(0, 1), &r(2, 1)).unwrap(), 0);
        assert!(matches!(
            eps_dense_segment(&s, p, &r(1, 2), &r(1, 4)),
            Err(Error::NotInOrbit(_))
        ));
    }

    #[test]
    fn not_periodic_errors() {
        let s = build_translation_example();
        let p = PointRef::Chain { chain: 0, index: 2 };
        assert!(matches!(classify_periodic_point(&s, p), Err(Error::NotPeriodic(_))));
        assert!(matches!(
            eps_dense_segment(&s, p, &r(1, 4), &r(1, 4)),
            Err(Error::NotPeriodic(_))
        ));
    }

    #[test]
    fn invariant_set_counts() {
        let t2 = build_theorem2_system(&[r(0, 1), r(1, 1)]).unwrap();
        let sets = compact_invariant_sets(&t2, 100).unwrap();
        assert_eq!(sets.len(), 4);
        assert_eq!(compact_invariant_sets(&build_translation_example(), 100).unwrap().len(), 2);
        let f = build_finite_system(&[vec![r(0, 1), r(1, 1)], vec![r(2, 1)]]).unwrap();
        assert_eq!(compact_invariant_sets(&f, 100).unwrap().len(), 3);
        assert_eq!(
            compact_invariant_sets(&t2, 3),
            Err(Error::CapExceeded {
                lower_bound: 4,
                cap: 3
            })
        );
    }

    #[test]
    fn shift_counts() {
        assert_eq!(shift_periodic_count(1).unwrap(), 2);
        assert_eq!(shift_periodic_count(3).unwrap(), 8);
        assert_eq!(shift_periodic_count(10).unwrap(), 1024);
        assert!(shift_periodic_count(0).is_err());
        assert!(shift_periodic_count(21).is_err());
    }

    #[test]
    fn verdict_json() {
        let v = hyper_expansive_verdict(&build_theorem2_system(&[r(0, 1), r(1, 1)]).unwrap());
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"result":"hyper_expansive","delta":"1/6","omega":["0","1"],"orbit_count":3}"#
        );
        let v = hyper_expansive_verdict(&build_translation_example());
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"result":"not","reason":{"non_hyperbolic_periodic":"0"},"omega":["0"],"orbit_count":2}"#
        );
    }
}
