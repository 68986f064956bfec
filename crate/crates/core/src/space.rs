//! Symbolic countable compact subsets of the line with a homeomorphism.
//!
//! A [`SymbolicSystem`] is a finite set of limit points plus finitely many
//! chains of isolated points. A bi-infinite chain is one wandering orbit: the
//! map sends index `k` to `k + 1`, so the chain leaves its α-anchor and
//! accumulates on its ω-anchor. A periodic chain is a finite cycle of isolated
//! points, rotated by one step.
//!
//! Because the map only ever moves a chain point along its own chain, points
//! near an anchor `p` are sent to points near `p`, and continuity forces every
//! anchor to be fixed. Every limit point is an anchor (otherwise it would be
//! isolated), so a consistent `limit_perm` is the identity; anything else is
//! rejected at parse time.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::ChainGenerator;
use crate::metric::PointSet;
use crate::rational::Rational;

/// How many indices on each side are checked for overlap between chains
/// whose ranges intersect.
pub const OVERLAP_CHECK_SPAN: i64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitPoint {
    pub id: String,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainKind {
    BiInfinite {
        alpha: usize,
        omega: usize,
        generator: ChainGenerator,
    },
    Periodic {
        cycle: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitChain {
    pub id: String,
    pub kind: ChainKind,
}

impl OrbitChain {
    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, ChainKind::Periodic { .. })
    }
}

/// A point of `X`, named symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointRef {
    Limit(usize),
    /// For periodic chains the index is reduced modulo the cycle length.
    Chain { chain: usize, index: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicSystem {
    limits: Vec<LimitPoint>,
    /// `limit_perm[i]` is the index of the image of limit `i`.
    limit_perm: Vec<usize>,
    chains: Vec<OrbitChain>,
}

// ---------------------------------------------------------------------------
// JSON document form

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub limits: Vec<LimitPoint>,
    pub limit_perm: BTreeMap<String, String>,
    pub chains: Vec<ChainDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub id: String,
    pub kind: ChainKindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<ChainGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKindTag {
    BiInfinite,
    Periodic,
}

/// Parses and validates a space-description JSON document.
pub fn parse_space(json: &str) -> Result<SymbolicSystem> {
    let doc: SpaceDocument =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    SymbolicSystem::from_document(doc)
}

impl SymbolicSystem {
    pub fn from_document(doc: SpaceDocument) -> Result<Self> {
        let mut ids = BTreeMap::new();
        for (i, l) in doc.limits.iter().enumerate() {
            if ids.insert(l.id.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate limit id {:?}", l.id)));
            }
        }
        let lookup = |id: &str| {
            ids.get(id)
                .copied()
                .ok_or_else(|| Error::InvalidSpace(format!("unknown limit id {id:?}")))
        };
        let mut limit_perm = vec![usize::MAX; doc.limits.len()];
        for (from, to) in &doc.limit_perm {
            let f = lookup(from)?;
            limit_perm[f] = lookup(to)?;
        }
        if let Some(i) = limit_perm.iter().position(|&t| t == usize::MAX) {
            return Err(Error::InconsistentPerm(format!(
                "no image for limit {:?}",
                doc.limits[i].id
            )));
        }
        let mut chains = Vec::with_capacity(doc.chains.len());
        for c in doc.chains {
            let kind = match c.kind {
                ChainKindTag::BiInfinite => {
                    if c.cycle.is_some() {
                        return Err(Error::InvalidSpace(format!(
                            "bi_infinite chain {:?} has a cycle",
                            c.id
                        )));
                    }
                    let (Some(alpha), Some(omega), Some(generator)) = (c.alpha, c.omega, c.generator)
                    else {
                        return Err(Error::InvalidSpace(format!(
                            "bi_infinite chain {:?} needs alpha, omega and generator",
                            c.id
                        )));
                    };
                    ChainKind::BiInfinite {
                        alpha: lookup(&alpha)?,
                        omega: lookup(&omega)?,
                        generator,
                    }
                }
                ChainKindTag::Periodic => {
                    if c.alpha.is_some() || c.omega.is_some() || c.generator.is_some() {
                        return Err(Error::InvalidSpace(format!(
                            "periodic chain {:?} takes only a cycle",
                            c.id
                        )));
                    }
                    let Some(cycle) = c.cycle else {
                        return Err(Error::InvalidSpace(format!(
                            "periodic chain {:?} needs a cycle",
                            c.id
                        )));
                    };
                    ChainKind::Periodic { cycle }
                }
            };
            chains.push(OrbitChain { id: c.id, kind });
        }
        SymbolicSystem::new(doc.limits, limit_perm, chains)
    }

    pub fn to_document(&self) -> SpaceDocument {
        let limit_perm = self
            .limit_perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.limits[i].id.clone(), self.limits[j].id.clone()))
            .collect();
        let chains = self
            .chains
            .iter()
            .map(|c| match &c.kind {
                ChainKind::BiInfinite {
                    alpha,
                    omega,
                    generator,
                } => ChainDocument {
                    id: c.id.clone(),
                    kind: ChainKindTag::BiInfinite,
                    alpha: Some(self.limits[*alpha].id.clone()),
                    omega: Some(self.limits[*omega].id.clone()),
                    generator: Some(generator.clone()),
                    cycle: None,
                },
                ChainKind::Periodic { cycle } => ChainDocument {
                    id: c.id.clone(),
                    kind: ChainKindTag::Periodic,
                    alpha: None,
                    omega: None,
                    generator: None,
                    cycle: Some(cycle.clone()),
                },
            })
            .collect();
        SpaceDocument {
            limits: self.limits.clone(),
            limit_perm,
            chains,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }

    /// Validating constructor.
    pub fn new(
        limits: Vec<LimitPoint>,
        limit_perm: Vec<usize>,
        chains: Vec<OrbitChain>,
    ) -> Result<Self> {
        let sys = SymbolicSystem {
            limits,
            limit_perm,
            chains,
        };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<()> {
        if self.limits.is_empty() && self.chains.is_empty() {
            return Err(Error::InvalidSpace("empty space".into()));
        }
        if self.limits.windows(2).any(|w| w[0].value >= w[1].value) {
            return Err(Error::InvalidSpace(
                "limit values must be strictly increasing".into(),
            ));
        }
        let n = self.limits.len();
        if self.limit_perm.len() != n || self.limit_perm.iter().any(|&j| j >= n) {
            return Err(Error::InconsistentPerm("not a map on the limits".into()));
        }
        let mut seen = vec![false; n];
        for &j in &self.limit_perm {
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InconsistentPerm("not a permutation".into()));
            }
        }
        let mut chain_ids = HashSet::new();
        for c in &self.chains {
            if !chain_ids.insert(c.id.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate chain id {:?}", c.id)));
            }
        }
        let mut anchored = vec![false; n];
        for c in &self.chains {
            match &c.kind {
                ChainKind::BiInfinite {
                    alpha,
                    omega,
                    generator,
                } => {
                    generator.validate()?;
                    if !generator.is_two_sided() {
                        return Err(Error::InvalidSpace(format!(
                            "chain {:?}: bi-infinite chains need a two-sided generator",
                            c.id
                        )));
                    }
                    let back = generator.backward_limit().expect("two-sided");
                    let fwd = generator.forward_limit();
                    if back != self.limits[*alpha].value || fwd != self.limits[*omega].value {
                        return Err(Error::AnchorMismatch(format!(
                            "chain {:?} converges to {back} / {fwd} but is anchored at {} / {}",
                            c.id, self.limits[*alpha].value, self.limits[*omega].value
                        )));
                    }
                    anchored[*alpha] = true;
                    anchored[*omega] = true;
                    for l in &self.limits {
                        if generator.index_of(&l.value).is_some() {
                            return Err(Error::Overlap(format!(
                                "chain {:?} passes through limit {:?}",
                                c.id, l.id
                            )));
                        }
                    }
                }
                ChainKind::Periodic { cycle } => {
                    if cycle.is_empty() {
                        return Err(Error::InvalidSpace(format!("chain {:?}: empty cycle", c.id)));
                    }
                    let distinct: HashSet<&Rational> = cycle.iter().collect();
                    if distinct.len() != cycle.len() {
                        return Err(Error::Overlap(format!(
                            "chain {:?}: repeated cycle point",
                            c.id
                        )));
                    }
                    for x in cycle {
                        if self.limits.iter().any(|l| l.value == *x) {
                            return Err(Error::Overlap(format!(
                                "chain {:?}: cycle point {x} is a limit point",
                                c.id
                            )));
                        }
                    }
                }
            }
        }
        if let Some(i) = anchored.iter().position(|a| !a) {
            return Err(Error::InvalidSpace(format!(
                "limit {:?} anchors no chain, so it is not an accumulation point",
                self.limits[i].id
            )));
        }
        // Continuity at each anchor: the chains near p stay near p.
        for (i, &j) in self.limit_perm.iter().enumerate() {
            if i != j {
                return Err(Error::InconsistentPerm(format!(
                    "limit {:?} is mapped to {:?}, but the chains accumulating at it are \
                     carried along themselves and keep accumulating at {:?}",
                    self.limits[i].id, self.limits[j].id, self.limits[i].id
                )));
            }
        }
        self.check_disjoint()
    }

    fn check_disjoint(&self) -> Result<()> {
        // Periodic points against every other chain.
        for (ci, c) in self.chains.iter().enumerate() {
            let ChainKind::Periodic { cycle } = &c.kind else {
                continue;
            };
            for x in cycle {
                for (di, d) in self.chains.iter().enumerate() {
                    if di == ci {
                        continue;
                    }
                    let hit = match &d.kind {
                        ChainKind::Periodic { cycle } => cycle.contains(x),
                        ChainKind::BiInfinite { generator, .. } => generator.index_of(x).is_some(),
                    };
                    if hit {
                        return Err(Error::Overlap(format!(
                            "chains {:?} and {:?} share the point {x}",
                            c.id, d.id
                        )));
                    }
                }
            }
        }
        // Bi-infinite pairs with intersecting ranges: exact membership test of
        // each term near the middle of one chain against the other.
        let bi: Vec<(usize, &ChainGenerator)> = self
            .chains
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match &c.kind {
                ChainKind::BiInfinite { generator, .. } => Some((i, generator)),
                _ => None,
            })
            .collect();
        for (a, &(ia, ga)) in bi.iter().enumerate() {
            for &(ib, gb) in &bi[a + 1..] {
                if !ranges_intersect(ga, gb) {
                    continue;
                }
                for k in -OVERLAP_CHECK_SPAN..=OVERLAP_CHECK_SPAN {
                    let x = ga.term(k);
                    if gb.index_of(&x).is_some() {
                        return Err(Error::Overlap(format!(
                            "chains {:?} and {:?} share the point {x}",
                            self.chains[ia].id, self.chains[ib].id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> &[LimitPoint] {
        &self.limits
    }

    pub fn chains(&self) -> &[OrbitChain] {
        &self.chains
    }

    pub fn limit_perm(&self) -> &[usize] {
        &self.limit_perm
    }

    pub fn limit_index(&self, id: &str) -> Option<usize> {
        self.limits.iter().position(|l| l.id == id)
    }

    pub fn chain_index(&self, id: &str) -> Option<usize> {
        self.chains.iter().position(|c| c.id == id)
    }

    /// Exact coordinate of a point.
    pub fn value(&self, p: PointRef) -> Rational {
        match p {
            PointRef::Limit(i) => self.limits[i].value.clone(),
            PointRef::Chain { chain, index } => point_at(&self.chains[chain], index),
        }
    }

    /// `f^n(p)` for any integer `n`.
    pub fn iterate(&self, p: PointRef, n: i64) -> PointRef {
        match p {
            PointRef::Limit(mut i) => {
                let period = self.limit_period(i) as i64;
                for _ in 0..n.rem_euclid(period) {
                    i = self.limit_perm[i];
                }
                PointRef::Limit(i)
            }
            PointRef::Chain { chain, index } => match &self.chains[chain].kind {
                ChainKind::BiInfinite { .. } => PointRef::Chain {
                    chain,
                    index: index + n,
                },
                ChainKind::Periodic { cycle } => PointRef::Chain {
                    chain,
                    index: (index + n).rem_euclid(cycle.len() as i64),
                },
            },
        }
    }

    pub fn image(&self, p: PointRef) -> PointRef {
        self.iterate(p, 1)
    }

    pub fn preimage(&self, p: PointRef) -> PointRef {
        self.iterate(p, -1)
    }

    fn limit_period(&self, i: usize) -> usize {
        let mut j = self.limit_perm[i];
        let mut n = 1;
        while j != i {
            j = self.limit_perm[j];
            n += 1;
        }
        n
    }

    /// Length of the periodic orbit through `p`, or `None` for wandering points.
    pub fn period(&self, p: PointRef) -> Option<usize> {
        match p {
            PointRef::Limit(i) => Some(self.limit_period(i)),
            PointRef::Chain { chain, .. } => match &self.chains[chain].kind {
                ChainKind::BiInfinite { .. } => None,
                ChainKind::Periodic { cycle } => Some(cycle.len()),
            },
        }
    }

    /// Canonical form: periodic indices reduced.
    pub fn normalize(&self, p: PointRef) -> PointRef {
        self.iterate(p, 0)
    }

    /// Finds the symbolic name of a coordinate, if it belongs to `X`.
    pub fn locate(&self, x: &Rational) -> Option<PointRef> {
        if let Some(i) = self.limits.iter().position(|l| l.value == *x) {
            return Some(PointRef::Limit(i));
        }
        for (ci, c) in self.chains.iter().enumerate() {
            match &c.kind {
                ChainKind::Periodic { cycle } => {
                    if let Some(i) = cycle.iter().position(|y| y == x) {
                        return Some(PointRef::Chain {
                            chain: ci,
                            index: i as i64,
                        });
                    }
                }
                ChainKind::BiInfinite { generator, .. } => {
                    if let Some(k) = generator.index_of(x) {
                        return Some(PointRef::Chain {
                            chain: ci,
                            index: k,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn locate_or_err(&self, x: &Rational) -> Result<PointRef> {
        self.locate(x).ok_or_else(|| Error::NotInSpace(x.to_string()))
    }

    /// Every periodic point, sorted by coordinate.
    pub fn periodic_points(&self) -> Vec<PointRef> {
        let mut out: Vec<PointRef> = (0..self.limits.len()).map(PointRef::Limit).collect();
        for (ci, c) in self.chains.iter().enumerate() {
            if let ChainKind::Periodic { cycle } = &c.kind {
                out.extend((0..cycle.len()).map(|i| PointRef::Chain {
                    chain: ci,
                    index: i as i64,
                }));
            }
        }
        out.sort_by_key(|&p| self.value(p));
        out
    }

    /// Indices of bi-infinite chains.
    pub fn wandering_chains(&self) -> impl Iterator<Item = usize> + '_ {
        self.chains
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_periodic())
            .map(|(i, _)| i)
    }

    /// Cycles of `limit_perm`, each listed from its smallest index.
    pub fn limit_cycles(&self) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.limits.len()];
        let mut out = Vec::new();
        for start in 0..self.limits.len() {
            if done[start] {
                continue;
            }
            let mut cyc = vec![start];
            done[start] = true;
            let mut j = self.limit_perm[start];
            while j != start {
                done[j] = true;
                cyc.push(j);
                j = self.limit_perm[j];
            }
            out.push(cyc);
        }
        out
    }

    /// Number of orbits: one per chain plus one per limit cycle.
    pub fn orbit_count(&self) -> usize {
        self.chains.len() + self.limit_cycles().len()
    }

    /// Exact distance from an isolated point to the rest of `X`.
    ///
    /// Candidates are the limit values, the periodic points, and for every
    /// bi-infinite chain the nearest terms on each side located by monotone
    /// search. A chain's unattained infimum near an anchor is dominated by the
    /// anchor itself, which is a limit value.
    pub fn isolation_radius(&self, p: PointRef) -> Result<Rational> {
        if let PointRef::Limit(i) = p {
            return Err(Error::NotIsolated(self.limits[i].value.to_string()));
        }
        let x = self.value(p);
        let mut best: Option<Rational> = None;
        let mut offer = |d: Rational| {
            if d.is_positive() && best.as_ref().map_or(true, |b| d < *b) {
                best = Some(d);
            }
        };
        for l in &self.limits {
            offer(x.dist(&l.value));
        }
        for c in &self.chains {
            match &c.kind {
                ChainKind::Periodic { cycle } => {
                    for y in cycle {
                        offer(x.dist(y));
                    }
                }
                ChainKind::BiInfinite { generator, .. } => {
                    let br = generator.locate(&x);
                    if let Some((_, v)) = br.below {
                        offer(x.dist(&v));
                    }
                    if let Some((_, v)) = br.above {
                        offer(x.dist(&v));
                    }
                }
            }
        }
        // A one-point space has no competitor; any radius isolates it.
        Ok(best.unwrap_or_else(Rational::one))
    }
}

/// Exact coordinate of the `k`-th point of a chain (periodic chains take `k`
/// modulo the cycle length).
pub fn point_at(chain: &OrbitChain, k: i64) -> Rational {
    match &chain.kind {
        ChainKind::BiInfinite { generator, .. } => generator.term(k),
        ChainKind::Periodic { cycle } => cycle[k.rem_euclid(cycle.len() as i64) as usize].clone(),
    }
}

fn ranges_intersect(a: &ChainGenerator, b: &ChainGenerator) -> bool {
    let span = |g: &ChainGenerator| {
        let x = g.backward_limit().expect("two-sided");
        let y = g.forward_limit();
        let t = g.term(0);
        let lo = x.min_ref(&y).min_ref(&t).clone();
        let hi = x.max_ref(&y).max_ref(&t).clone();
        (lo, hi)
    };
    let (alo, ahi) = span(a);
    let (blo, bhi) = span(b);
    alo < bhi && blo < ahi
}

/// Convenience for building point sets from symbolic refs.
pub fn point_set(system: &SymbolicSystem, refs: impl IntoIterator<Item = PointRef>) -> PointSet {
    PointSet::new(refs.into_iter().map(|p| system.value(p)))
}
