//! Cantor–Bendixson machinery on finite-depth space trees.
//!
//! A [`SpaceTree`] describes a countable compact subset of the line as a
//! finite list of root points, each carrying convergent sequences of child
//! points. Children are produced by a [`Template`]: every child gets the same
//! *relative* shape, namely sequences `c + (t - c)/j` heading from the child
//! `c` toward a fixed fraction of the way to one of its siblings. Depth is
//! finite, so the space has finite Cantor–Bendixson rank.
//!
//! The derived set keeps exactly the nodes that carry at least one sequence;
//! sequences whose children are all leaves disappear, the rest keep their
//! generator and lose one template layer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{ChainGenerator, Side};
use crate::metric::PointSet;
use crate::rational::Rational;

/// Largest depth accepted by [`build_adjacent_example`].
pub const MAX_ADJACENT_DEPTH: u32 = 6;
/// Largest per-sequence truncation accepted by [`build_adjacent_example`].
pub const MAX_ADJACENT_TAIL: u64 = 64;

fn default_start() -> i64 {
    1
}

fn is_default_start(s: &i64) -> bool {
    *s == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceTree {
    pub roots: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub value: Rational,
    #[serde(default)]
    pub attached: Vec<Sequence>,
}

/// A sequence of children accumulating at its node from `side`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sequence {
    pub side: Side,
    /// One-sided generator whose limit is the node value.
    pub generator: ChainGenerator,
    /// First index present. Lower indices of the generator are not points of
    /// this sequence (they may still serve as siblings for templates).
    #[serde(default = "default_start", skip_serializing_if = "is_default_start")]
    pub start: i64,
    /// Shape of every child; `None` means the children are isolated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub child_template: Option<Template>,
    /// Number of terms kept when realizing the tree.
    pub truncate_at: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Template {
    pub attached: Vec<TemplateSequence>,
}

/// Which sibling a child's own sequence heads toward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Toward {
    /// The sibling at index `m - 1`, farther from the parent's limit.
    Outward,
    /// The sibling at index `m + 1`, nearer to the parent's limit.
    Inward,
}

/// For the child `c = term(m)`, the sequence `c + (t - c)/j`, `j >= start`,
/// with `t = c + fraction * (sibling - c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSequence {
    pub toward: Toward,
    pub fraction: Rational,
    #[serde(default = "default_start", skip_serializing_if = "is_default_start")]
    pub start: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub child_template: Option<Template>,
    pub truncate_at: u64,
}

/// Finite Cantor–Bendixson degrees plus a marker for the adjacent-pair family
/// whose union has degree `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrdinalDescriptor {
    Finite(u32),
    OmegaFamily,
}

impl Serialize for OrdinalDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OrdinalDescriptor::Finite(k) => s.serialize_u32(*k),
            OrdinalDescriptor::OmegaFamily => s.serialize_str("omega"),
        }
    }
}

impl PartialOrd for OrdinalDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalDescriptor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use OrdinalDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), OmegaFamily) => std::cmp::Ordering::Less,
            (OmegaFamily, Finite(_)) => std::cmp::Ordering::Greater,
            (OmegaFamily, OmegaFamily) => std::cmp::Ordering::Equal,
        }
    }
}

impl Template {
    fn depth(&self) -> u32 {
        self.attached
            .iter()
            .map(|s| 1 + s.child_template.as_ref().map_or(0, Template::depth))
            .max()
            .unwrap_or(0)
    }

    /// The concrete sequences of the child with index `m` in `parent`.
    fn instantiate(&self, parent: &ChainGenerator, m: i64) -> Vec<Sequence> {
        let c = parent.term(m);
        self.attached
            .iter()
            .map(|ts| {
                let sibling = match ts.toward {
                    Toward::Outward => parent.term(m - 1),
                    Toward::Inward => parent.term(m + 1),
                };
                let target = &c + &(&ts.fraction * &(&sibling - &c));
                let generator = ChainGenerator::harmonic(c.clone(), target);
                Sequence {
                    side: generator.side(),
                    generator,
                    start: ts.start,
                    child_template: ts.child_template.clone(),
                    truncate_at: ts.truncate_at,
                }
            })
            .collect()
    }

    fn validate(&self, parent_start: i64) -> Result<()> {
        for ts in &self.attached {
            if !(ts.fraction.is_positive() && ts.fraction <= Rational::one()) {
                return Err(Error::InvalidSpace(format!(
                    "template fraction {} outside (0, 1]",
                    ts.fraction
                )));
            }
            if ts.start < 1 || ts.truncate_at < 1 {
                return Err(Error::InvalidSpace("template start and truncate_at must be >= 1".into()));
            }
            if ts.toward == Toward::Outward && parent_start < 2 {
                return Err(Error::InvalidSpace(
                    "outward templates need the parent sequence to start at index >= 2".into(),
                ));
            }
            if let Some(t) = &ts.child_template {
                t.validate(ts.start)?;
            }
        }
        Ok(())
    }

    fn derived(&self) -> Option<Template> {
        let attached: Vec<TemplateSequence> = self
            .attached
            .iter()
            .filter_map(|ts| {
                let child = ts.child_template.as_ref()?;
                Some(TemplateSequence {
                    child_template: child.derived(),
                    ..ts.clone()
                })
            })
            .collect();
        (!attached.is_empty()).then_some(Template { attached })
    }
}

impl Sequence {
    /// The child node with index `m`.
    pub fn child(&self, m: i64) -> Node {
        Node {
            value: self.generator.term(m),
            attached: self
                .child_template
                .as_ref()
                .map(|t| t.instantiate(&self.generator, m))
                .unwrap_or_default(),
        }
    }

    /// Closed interval containing every point of the sequence's subtree,
    /// including the node value.
    fn hull(&self) -> (Rational, Rational) {
        let a = self.generator.forward_limit();
        let far = self.generator.term((self.start - 1).max(1));
        let near = self.generator.term(self.start);
        let ext = if a.dist(&far) > a.dist(&near) { far } else { near };
        if a <= ext {
            (a, ext)
        } else {
            (ext, a)
        }
    }

    fn validate(&self, node: &Rational) -> Result<()> {
        self.generator.validate()?;
        if self.generator.is_two_sided() {
            return Err(Error::InvalidSpace(
                "tree sequences need a one-sided generator".into(),
            ));
        }
        if self.generator.forward_limit() != *node {
            return Err(Error::AnchorMismatch(format!(
                "sequence converges to {} but is attached to {node}",
                self.generator.forward_limit()
            )));
        }
        if self.generator.side() != self.side {
            return Err(Error::InvalidSpace(format!(
                "sequence at {node} declared {:?} but approaches from {:?}",
                self.side,
                self.generator.side()
            )));
        }
        if self.start < 1 || self.truncate_at < 1 {
            return Err(Error::InvalidSpace("start and truncate_at must be >= 1".into()));
        }
        if let Some(t) = &self.child_template {
            t.validate(self.start)?;
        }
        Ok(())
    }

    fn derived(&self) -> Option<Sequence> {
        let t = self.child_template.as_ref()?;
        Some(Sequence {
            child_template: t.derived(),
            ..self.clone()
        })
    }
}

impl Node {
    pub fn leaf(value: Rational) -> Self {
        Node {
            value,
            attached: Vec::new(),
        }
    }

    pub fn is_isolated(&self) -> bool {
        self.attached.is_empty()
    }

    fn depth(&self) -> u32 {
        self.attached
            .iter()
            .map(|s| 1 + s.child_template.as_ref().map_or(0, Template::depth))
            .max()
            .unwrap_or(0)
    }

    fn derived(&self) -> Option<Node> {
        if self.attached.is_empty() {
            return None;
        }
        Some(Node {
            value: self.value.clone(),
            attached: self.attached.iter().filter_map(Sequence::derived).collect(),
        })
    }

    fn realize_into(&self, out: &mut Vec<Rational>, m: Option<u64>) {
        out.push(self.value.clone());
        for s in &self.attached {
            let n = m.unwrap_or(s.truncate_at) as i64;
            for idx in s.start..s.start + n {
                s.child(idx).realize_into(out, m);
            }
        }
    }

    fn realize_near_into(
        &self,
        out: &mut Vec<Rational>,
        lo: &Rational,
        hi: &Rational,
        m: u64,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if *lo <= self.value && self.value <= *hi {
            out.push(self.value.clone());
        }
        for s in &self.attached {
            let (hlo, hhi) = s.hull();
            if hhi < *lo || *hi < hlo {
                continue;
            }
            let last = s.start + m as i64 - 1;
            // Children whose subtrees can meet [lo, hi]: the terms inside the
            // interval plus one neighbour on each side (subtrees reach at most
            // to an adjacent sibling).
            let idx_of = |x: &Rational| {
                let b = s.generator.locate(x);
                [b.exact, b.below.map(|p| p.0), b.above.map(|p| p.0)]
            };
            let mut ids: Vec<i64> = idx_of(lo).into_iter().chain(idx_of(hi)).flatten().collect();
            // Terms are monotone toward the limit; an interval containing the
            // limit reaches every index past the first hit.
            let limit = s.generator.forward_limit();
            let reaches_limit = *lo <= limit && limit <= *hi;
            let (first, stop) = if ids.is_empty() {
                if reaches_limit {
                    (s.start, last)
                } else {
                    continue;
                }
            } else {
                ids.sort_unstable();
                let first = (ids[0] - 1).max(s.start);
                let stop = if reaches_limit { last } else { (ids[ids.len() - 1] + 1).min(last) };
                (first, stop)
            };
            for idx in first..=stop {
                if out.len() >= cap {
                    return;
                }
                s.child(idx).realize_near_into(out, lo, hi, m, cap);
            }
        }
    }
}

impl SpaceTree {
    pub fn finite(points: impl IntoIterator<Item = Rational>) -> Self {
        SpaceTree {
            roots: points.into_iter().map(Node::leaf).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let t: SpaceTree = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn validate(&self) -> Result<()> {
        for node in &self.roots {
            validate_node(node)?;
        }
        // Distinctness of realized points at a moderate truncation.
        let mut pts = Vec::new();
        for node in &self.roots {
            node.realize_into(&mut pts, Some(8));
        }
        let n = pts.len();
        pts.sort();
        pts.dedup();
        if pts.len() != n {
            return Err(Error::Overlap("tree realizes a point twice".into()));
        }
        Ok(())
    }

    /// Nesting depth: 0 for finite trees.
    pub fn depth(&self) -> u32 {
        self.roots.iter().map(Node::depth).max().unwrap_or(0)
    }

    /// True when no node carries a sequence.
    pub fn is_finite(&self) -> bool {
        self.roots.iter().all(Node::is_isolated)
    }

    /// Realized points with each sequence truncated at its own `truncate_at`.
    pub fn realize(&self) -> PointSet {
        let mut pts = Vec::new();
        for node in &self.roots {
            node.realize_into(&mut pts, None);
        }
        PointSet::new(pts)
    }

    /// Realized points keeping the first `m` terms of every sequence.
    pub fn realize_uniform(&self, m: u64) -> PointSet {
        let mut pts = Vec::new();
        for node in &self.roots {
            node.realize_into(&mut pts, Some(m));
        }
        PointSet::new(pts)
    }

    /// The points of `realize_uniform(m)` lying in `[lo, hi]`, found without
    /// materialising subtrees that cannot meet the interval.
    pub fn realize_uniform_within(&self, lo: &Rational, hi: &Rational, m: u64) -> PointSet {
        self.sample_uniform_within(lo, hi, m, usize::MAX)
    }

    /// Like [`SpaceTree::realize_uniform_within`], but stops after `cap`
    /// points (in traversal order).
    pub fn sample_uniform_within(
        &self,
        lo: &Rational,
        hi: &Rational,
        m: u64,
        cap: usize,
    ) -> PointSet {
        let mut pts = Vec::new();
        for node in &self.roots {
            node.realize_near_into(&mut pts, lo, hi, m, cap);
        }
        PointSet::new(pts)
    }
}

fn validate_node(node: &Node) -> Result<()> {
    let mut sides = Vec::new();
    for s in &node.attached {
        s.validate(&node.value)?;
        if sides.contains(&s.side) {
            return Err(Error::Overlap(format!(
                "two sequences accumulate at {} from the same side",
                node.value
            )));
        }
        sides.push(s.side);
    }
    Ok(())
}

/// The tree of accumulation points.
///
/// Survival is decided on the input tree: a node survives iff it carries a
/// sequence; a sequence survives iff its children carry sequences.
pub fn derived_set(tree: &SpaceTree) -> SpaceTree {
    SpaceTree {
        roots: tree.roots.iter().filter_map(Node::derived).collect(),
    }
}

/// `λ` with `acu^λ(X) ≠ ∅` and `acu^{λ+1}(X) = ∅`, where `acu^0(X) = X`.
pub fn limit_degree(tree: &SpaceTree) -> Result<OrdinalDescriptor> {
    if tree.is_empty() {
        return Err(Error::InvalidParams("limit degree of the empty space".into()));
    }
    let mut cur = derived_set(tree);
    let mut lambda = 0;
    while !cur.is_empty() {
        lambda += 1;
        cur = derived_set(&cur);
    }
    Ok(OrdinalDescriptor::Finite(lambda))
}

/// Whether the space carries a hyper-expansive homeomorphism, with the
/// cardinality of its derived set (`None` when infinite).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmitsReport {
    pub admits: bool,
    pub card_acu: Option<usize>,
}

/// True iff `acu(X)` is empty or finite with at least two points.
pub fn admits_hyper_expansive(tree: &SpaceTree) -> AdmitsReport {
    let acu = derived_set(tree);
    let card_acu = acu.is_finite().then(|| acu.roots.len());
    let admits = matches!(card_acu, Some(n) if n != 1);
    AdmitsReport { admits, card_acu }
}

/// The same decision phrased through the limit degree: `d(X) <= 1` and
/// `|acu(X)| != 1`.
pub fn admits_hyper_expansive_by_degree(tree: &SpaceTree) -> Result<bool> {
    let d = limit_degree(tree)?;
    let card = admits_hyper_expansive(tree).card_acu;
    Ok(d <= OrdinalDescriptor::Finite(1) && card != Some(1))
}

/// Countable compact spaces admit expansive homeomorphisms exactly when their
/// limit degree is not a limit ordinal. Finite degrees always qualify.
pub fn admits_expansive_kp(d: OrdinalDescriptor) -> bool {
    match d {
        OrdinalDescriptor::Finite(_) => true,
        OrdinalDescriptor::OmegaFamily => false,
    }
}

/// Consecutive pairs of a sorted set. For windows of an infinite space these
/// include pairs created by truncation; see [`symbolic_adjacent_pairs`].
pub fn adjacent_pairs(a: &PointSet) -> Vec<(Rational, Rational)> {
    a.points()
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect()
}

/// Adjacent pairs of the uniform realization that are adjacent in the true
/// space: pairs abutting a side on which a node accumulates are dropped.
pub fn symbolic_adjacent_pairs(tree: &SpaceTree, m: u64) -> Vec<(Rational, Rational)> {
    let mut accum: Vec<(Rational, Side)> = Vec::new();
    fn collect(node: &Node, m: u64, out: &mut Vec<(Rational, Side)>) {
        for s in &node.attached {
            out.push((node.value.clone(), s.side));
            for idx in s.start..s.start + m as i64 {
                collect(&s.child(idx), m, out);
            }
        }
    }
    for node in &tree.roots {
        collect(node, m, &mut accum);
    }
    let has = |x: &Rational, side: Side| accum.iter().any(|(v, s)| v == x && *s == side);
    adjacent_pairs(&tree.realize_uniform(m))
        .into_iter()
        .filter(|(a, b)| !has(a, Side::Right) && !has(b, Side::Left))
        .collect()
}

/// The depth-`k` stage of the adjacent-pair construction together with the
/// restriction windows `[0, 1/n]`, `n = 1..=k`, used at each stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacentExample {
    pub tree: SpaceTree,
    pub stage_windows: Vec<Rational>,
}

/// Builds `A_k`, where `A_0 = {0} ∪ {1/m}` and stage `n` inserts
/// `{a + (b - a)/j}` into every adjacent pair `(a, b)` of `A_{n-1} ∩ [0, 1/n]`.
///
/// Only pairs whose right end is at most `1/n` are refined at stage `n`, so
/// the subtree under `1/m` is refined `min(k, m - 1)` times and the whole
/// subtree of a given child is refined uniformly. The tree therefore consists
/// of the root `0` (children `m > k`, fully refined), the leaf `1`, and
/// explicit roots `1/m` for `2 <= m <= k`. The `j = 1` term of each insertion
/// is `b` itself, so inserted sequences start at `j = 2`.
pub fn build_adjacent_example(depth: u32, tail: u64) -> Result<AdjacentExample> {
    if depth > MAX_ADJACENT_DEPTH || tail == 0 || tail > MAX_ADJACENT_TAIL {
        return Err(Error::ResourceBound(format!(
            "adjacent example needs depth <= {MAX_ADJACENT_DEPTH} and 1 <= tail <= {MAX_ADJACENT_TAIL}"
        )));
    }
    fn refinement(levels: u32, tail: u64) -> Option<Template> {
        (levels > 0).then(|| Template {
            attached: vec![TemplateSequence {
                toward: Toward::Outward,
                fraction: Rational::one(),
                start: 2,
                child_template: refinement(levels - 1, tail),
                truncate_at: tail,
            }],
        })
    }
    let recip = |m: i64| Rational::new(1, m);
    let k = depth as i64;
    let mut roots = vec![Node {
        value: Rational::zero(),
        attached: vec![Sequence {
            side: Side::Right,
            generator: ChainGenerator::harmonic(Rational::zero(), Rational::one()),
            start: k + 1,
            child_template: refinement(depth, tail),
            truncate_at: tail,
        }],
    }];
    if k >= 1 {
        roots.push(Node::leaf(Rational::one()));
    }
    for m in 2..=k {
        let generator = ChainGenerator::harmonic(recip(m), recip(m - 1));
        roots.push(Node {
            value: recip(m),
            attached: vec![Sequence {
                side: generator.side(),
                generator,
                start: 2,
                child_template: refinement((m - 2) as u32, tail),
                truncate_at: tail,
            }],
        });
    }
    roots.sort_by(|a, b| a.value.cmp(&b.value));
    let tree = SpaceTree { roots };
    tree.validate()?;
    Ok(AdjacentExample {
        tree,
        stage_windows: (1..=k).map(recip).collect(),
    })
}

/// `{0} ∪ {1/m : m >= 1}` as a tree.
pub fn harmonic_tree(tail: u64) -> SpaceTree {
    SpaceTree {
        roots: vec![Node {
            value: Rational::zero(),
            attached: vec![Sequence {
                side: Side::Right,
                generator: ChainGenerator::harmonic(Rational::zero(), Rational::one()),
                start: 1,
                child_template: None,
                truncate_at: tail,
            }],
        }],
    }
}

/// Limits `values[0] < ... < values[n-1]`, each with one sequence toward its
/// neighbour (the first and last from the inside, the others from the right),
/// i.e. a space whose derived set is exactly `values`.
pub fn limits_tree(values: &[Rational], tail: u64) -> Result<SpaceTree> {
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("limit values must be strictly increasing".into()));
    }
    let n = values.len();
    let mut roots = Vec::with_capacity(n);
    for (i, v) in values.iter().enumerate() {
        let target = if i + 1 < n {
            v + &((&values[i + 1] - v) / Rational::from_integer(3))
        } else if i > 0 {
            v - &((v - &values[i - 1]) / Rational::from_integer(3))
        } else {
            v + &Rational::one()
        };
        let generator = ChainGenerator::harmonic(v.clone(), target);
        roots.push(Node {
            value: v.clone(),
            attached: vec![Sequence {
                side: generator.side(),
                generator,
                start: 1,
                child_template: None,
                truncate_at: tail,
            }],
        });
    }
    let tree = SpaceTree { roots };
    tree.validate()?;
    Ok(tree)
}
