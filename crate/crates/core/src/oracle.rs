//! Brute-force separation oracle on finite windows of the hyperspace.
//!
//! Subsets of a window are bit masks over its sorted points (bit `i` is the
//! `i`-th smallest point). For each time `t` with `|t| <= N` the exact
//! pairwise distances `D_t` of the iterated window points are ranked once,
//! globally, so every later comparison is an integer comparison. Then
//!
//! ```text
//! m_t[A][b] = min_{a ∈ A} D_t[b][a]             (DP over masks)
//! g[A][b]   = max_{|t| <= N} m_t[A][b]
//! sep(A, B) = max( max_{b ∈ B∖A} g[A][b], max_{a ∈ A∖B} g[B][a] )
//! ```
//!
//! because `f^t` is injective and the directed distance from `f^t A` to
//! `f^t B` only sees points of `A ∖ B`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::dynamics::periodic_half_gap;
use crate::error::{Error, Result};
use crate::metric::{hausdorff_distance, PointSet};
use crate::rational::Rational;
use crate::space::{point_at, ChainKind, PointRef, SymbolicSystem};
use crate::window::{realize_window, Window};

/// Hard ceiling on window size.
pub const WINDOW_HARD_CAP: usize = 16;

/// Ceiling for the unrestricted (all pairs) scan.
pub const ALL_PAIRS_CAP: usize = 13;

pub const WINDOW_ENV: &str = "HYPERDYN_MAX_WINDOW";

/// Window bound in effect: `HYPERDYN_MAX_WINDOW` if set and valid, never
/// above [`WINDOW_HARD_CAP`].
pub fn max_window() -> usize {
    std::env::var(WINDOW_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(WINDOW_HARD_CAP, |v| v.min(WINDOW_HARD_CAP))
}

/// `sup_{|n| <= N} d_H(f^n A, f^n B)`.
pub fn orbit_separation(
    system: &SymbolicSystem,
    a: &PointSet,
    b: &PointSet,
    n: u64,
) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCompactSet);
    }
    let locate = |s: &PointSet| -> Result<Vec<PointRef>> {
        s.iter().map(|x| system.locate_or_err(x)).collect()
    };
    let (ra, rb) = (locate(a)?, locate(b)?);
    let image = |refs: &[PointRef], t: i64| {
        PointSet::new(refs.iter().map(|&p| system.value(system.iterate(p, t))))
    };
    let n = n as i64;
    let mut best = Rational::zero();
    for t in -n..=n {
        let d = hausdorff_distance(&image(&ra, t), &image(&rb, t))?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Smallest horizon `N` after which every bi-infinite window point is
/// strictly within `eps` of its forward anchor and, `N` steps back, of its
/// backward anchor. `eps` is half the smallest gap between periodic points,
/// or with fewer than two of them half the distance from the window chain
/// points to the periodic points.
pub fn auto_horizon(system: &SymbolicSystem, m: u64) -> u64 {
    let periodic = PointSet::new(system.periodic_points().into_iter().map(|p| system.value(p)));
    let span = m as i64;
    let chains: Vec<_> = system
        .chains()
        .iter()
        .filter_map(|c| match &c.kind {
            ChainKind::BiInfinite { generator, .. } => Some((c, generator)),
            ChainKind::Periodic { .. } => None,
        })
        .collect();
    if chains.is_empty() {
        return 0;
    }
    let eps = periodic_half_gap(&periodic).unwrap_or_else(|| {
        let nearest = chains
            .iter()
            .flat_map(|(c, _)| (-span..=span).map(move |k| point_at(c, k)))
            .map(|x| periodic.distance_to(&x).expect("limits exist"))
            .min()
            .expect("window chain points exist");
        nearest / Rational::from_integer(2)
    });
    let mut horizon = 0i64;
    for (_, g) in chains {
        let fwd = g.forward_tail_bound(&eps);
        let back = g.backward_tail_bound(&eps).expect("two-sided");
        horizon = horizon.max(fwd + span).max(back + span);
    }
    horizon.max(0) as u64
}

/// Outcome of a window scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub m: u64,
    pub n: u64,
    pub nested_only: bool,
    pub c: Rational,
    pub witness: (PointSet, PointSet),
    /// Bit masks of the witness over the sorted window.
    pub witness_masks: (u64, u64),
    pub pairs: u64,
}

impl Serialize for SeparationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Witness<'a> {
            #[serde(rename = "A")]
            a: &'a PointSet,
            #[serde(rename = "B")]
            b: &'a PointSet,
        }
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("M", &self.m)?;
        map.serialize_entry("N", &self.n)?;
        map.serialize_entry("nested_only", &self.nested_only)?;
        map.serialize_entry("c", &self.c)?;
        map.serialize_entry(
            "witness",
            &Witness {
                a: &self.witness.0,
                b: &self.witness.1,
            },
        )?;
        map.serialize_entry("pairs", &self.pairs)?;
        map.end()
    }
}

/// Minimum orbit separation over pairs of distinct nonempty window subsets
/// (only `A ⊊ B` when `nested_only`). Ties go to the smallest `(A, B)` in
/// numeric mask order.
pub fn separation_constant(
    system: &SymbolicSystem,
    m: u64,
    n: u64,
    nested_only: bool,
) -> Result<SeparationReport> {
    if m == 0 {
        return Err(Error::InvalidParams("window size must be positive".into()));
    }
    let bound = if nested_only {
        max_window()
    } else {
        max_window().min(ALL_PAIRS_CAP)
    };
    let size = window_size(system, m);
    if size > bound {
        return Err(Error::ResourceBound(format!(
            "window has {size} points, bound is {bound}"
        )));
    }
    let window = realize_window(system, m);
    let w = window.len();
    if w < 2 {
        return Err(Error::InvalidParams(
            "window needs at least two points".into(),
        ));
    }
    let table = SeparationTable::build(system, &window, n);
    let (rank, a, b, pairs) = if nested_only {
        table.scan_nested()
    } else {
        table.scan_all()
    };
    Ok(SeparationReport {
        m,
        n,
        nested_only,
        c: table.values[rank as usize].clone(),
        witness: (window.subset(a), window.subset(b)),
        witness_masks: (a, b),
        pairs,
    })
}

/// Reports for each `(M, N)` in order.
pub fn separation_curve(
    system: &SymbolicSystem,
    schedule: &[(u64, u64)],
    nested_only: bool,
) -> Result<Vec<SeparationReport>> {
    schedule
        .iter()
        .map(|&(m, n)| separation_constant(system, m, n, nested_only))
        .collect()
}

/// Number of points `realize_window(system, m)` would produce.
pub fn window_size(system: &SymbolicSystem, m: u64) -> usize {
    let per_chain = 2 * m as usize + 1;
    system.limits().len()
        + system
            .chains()
            .iter()
            .map(|c| match &c.kind {
                ChainKind::BiInfinite { .. } => per_chain,
                ChainKind::Periodic { cycle } => cycle.len(),
            })
            .sum::<usize>()
}

/// True when `f^t(S) = S` for every `|t| <= n`.
pub fn is_induced_fixed(system: &SymbolicSystem, s: &PointSet, n: u64) -> Result<bool> {
    let refs: Vec<PointRef> = s.iter().map(|x| system.locate_or_err(x)).collect::<Result<_>>()?;
    let n = n as i64;
    Ok((-n..=n).all(|t| {
        PointSet::new(refs.iter().map(|&p| system.value(system.iterate(p, t)))) == *s
    }))
}

// ---------------------------------------------------------------------------
// Mask engine

struct SeparationTable {
    w: usize,
    /// Distinct distances, increasing; ranks index into it.
    values: Vec<Rational>,
    /// `g[A * w + b]`, rank of `max_t min_{a ∈ A} D_t[b][a]`.
    g: Vec<u32>,
}

impl SeparationTable {
    fn build(system: &SymbolicSystem, window: &Window, n: u64) -> Self {
        let w = window.len();
        let n = n as i64;
        let times: Vec<i64> = (-n..=n).collect();
        let dists: Vec<Vec<Rational>> = times
            .par_iter()
            .map(|&t| {
                let pts: Vec<Rational> = window
                    .refs()
                    .iter()
                    .map(|&p| system.value(system.iterate(p, t)))
                    .collect();
                let mut d = Vec::with_capacity(w * w);
                for x in &pts {
                    for y in &pts {
                        d.push(x.dist(y));
                    }
                }
                d
            })
            .collect();
        let mut values: Vec<Rational> = dists.iter().flatten().cloned().collect();
        values.sort();
        values.dedup();
        let ranked: Vec<Vec<u32>> = dists
            .par_iter()
            .map(|d| {
                d.iter()
                    .map(|x| values.binary_search(x).expect("present") as u32)
                    .collect()
            })
            .collect();
        let size = 1usize << w;
        let g = ranked
            .par_iter()
            .map(|d| {
                // m[A][b] with m[∅][b] = +∞.
                let mut m = vec![u32::MAX; size * w];
                for a in 1..size {
                    let low = a.trailing_zeros() as usize;
                    let rest = a & (a - 1);
                    for b in 0..w {
                        m[a * w + b] = m[rest * w + b].min(d[b * w + low]);
                    }
                }
                m
            })
            .reduce(
                || vec![0u32; size * w],
                |mut x, y| {
                    for (p, q) in x.iter_mut().zip(y) {
                        *p = (*p).max(q);
                    }
                    x
                },
            );
        SeparationTable { w, values, g }
    }

    fn g(&self, a: usize, b: usize) -> u32 {
        self.g[a * self.w + b]
    }

    /// `(rank, A, B, pairs)` over `∅ ≠ A ⊊ B`.
    fn scan_nested(&self) -> (u32, u64, u64, u64) {
        let w = self.w;
        let full = (1usize << w) - 1;
        (1..=full)
            .into_par_iter()
            .map_init(
                || vec![0u32; 1 << w],
                |h, a| {
                    let comp = full ^ a;
                    let mut best: Option<(u32, u64, u64)> = None;
                    let mut pairs = 0u64;
                    // Nonempty submasks of comp in increasing order, so that
                    // c & (c - 1) is always computed before c.
                    let mut c = comp.wrapping_neg() & comp;
                    h[0] = 0;
                    while c != 0 {
                        let low = c.trailing_zeros() as usize;
                        let v = h[c & (c - 1)].max(self.g(a, low));
                        h[c] = v;
                        pairs += 1;
                        let key = (v, a as u64, (a | c) as u64);
                        if best.map_or(true, |b| key < b) {
                            best = Some(key);
                        }
                        c = (c.wrapping_sub(comp)) & comp;
                    }
                    (best, pairs)
                },
            )
            .reduce(|| (None, 0), merge)
            .into_report()
    }

    /// `(rank, A, B, pairs)` over unordered distinct nonempty pairs, listed
    /// with `A < B`.
    fn scan_all(&self) -> (u32, u64, u64, u64) {
        let w = self.w;
        let full = (1usize << w) - 1;
        let side = |x: usize, y: usize| -> u32 {
            // max over points of y outside x of g[x][·]
            let mut r = 0u32;
            let mut rest = y & !x;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                r = r.max(self.g(x, b));
                rest &= rest - 1;
            }
            r
        };
        (1..=full)
            .into_par_iter()
            .map(|a| {
                let mut best: Option<(u32, u64, u64)> = None;
                let mut pairs = 0u64;
                for b in a + 1..=full {
                    let v = side(a, b).max(side(b, a));
                    pairs += 1;
                    let key = (v, a as u64, b as u64);
                    if best.map_or(true, |x| key < x) {
                        best = Some(key);
                    }
                }
                (best, pairs)
            })
            .reduce(|| (None, 0), merge)
            .into_report()
    }
}

type Partial = (Option<(u32, u64, u64)>, u64);

fn merge(x: Partial, y: Partial) -> Partial {
    let best = match (x.0, y.0) {
        (Some(p), Some(q)) => Some(match p.cmp(&q) {
            Ordering::Greater => q,
            _ => p,
        }),
        (p, q) => p.or(q),
    };
    (best, x.1 + y.1)
}

trait IntoReport {
    fn into_report(self) -> (u32, u64, u64, u64);
}

impl IntoReport for Partial {
    fn into_report(self) -> (u32, u64, u64, u64) {
        let (rank, a, b) = self.0.expect("at least one pair");
        (rank, a, b, self.1)
    }
}
