//! Closed-form generators for the convergent sequences that make up chains.
//!
//! Each generator is monotone in a *parameter* `u` and converges to an exact
//! rational limit, which is what lets us evaluate, invert and search chains
//! without ever materialising them:
//!
//! | kind          | index domain | term                                   |
//! |---------------|--------------|----------------------------------------|
//! | `harmonic`    | `m >= 1`     | `a + (b - a) / m`                      |
//! | `logistic`    | `k ∈ Z`      | `p + (q - p) * 2^k / (1 + 2^k)`        |
//! | `explicit_head` | `m >= 1`   | listed head, then the tail generator   |
//! | `interleaved` | `k ∈ Z`      | `anchor + scale / m(k)`, `m(k) = 2k` for `k >= 1`, `1 - 2k` for `k <= 0` |
//!
//! `interleaved` enumerates `{anchor + scale/m : m >= 1}` bijectively by `Z`,
//! so a single orbit can run through a one-sided sequence in both time
//! directions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChainGenerator {
    Harmonic {
        a: Rational,
        b: Rational,
    },
    Logistic {
        p: Rational,
        q: Rational,
    },
    ExplicitHead {
        head: Vec<Rational>,
        tail: Box<ChainGenerator>,
    },
    Interleaved {
        anchor: Rational,
        scale: Rational,
    },
}

/// Which side of its limit a one-sided sequence approaches from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Nearest terms around a probe value, by index. Only attained terms are
/// reported: a side whose infimum is the (unattained) limit is `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bracket {
    pub below: Option<(i64, Rational)>,
    pub exact: Option<i64>,
    pub above: Option<(i64, Rational)>,
}

impl ChainGenerator {
    pub fn harmonic(a: Rational, b: Rational) -> Self {
        ChainGenerator::Harmonic { a, b }
    }

    pub fn logistic(p: Rational, q: Rational) -> Self {
        ChainGenerator::Logistic { p, q }
    }

    pub fn interleaved(anchor: Rational, scale: Rational) -> Self {
        ChainGenerator::Interleaved { anchor, scale }
    }

    /// Indexed by all of `Z` (usable for bi-infinite orbits).
    pub fn is_two_sided(&self) -> bool {
        matches!(
            self,
            ChainGenerator::Logistic { .. } | ChainGenerator::Interleaved { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChainGenerator::Harmonic { a, b } => {
                if a == b {
                    return Err(Error::InvalidSpace("harmonic generator with a = b".into()));
                }
            }
            ChainGenerator::Logistic { p, q } => {
                if p == q {
                    return Err(Error::InvalidSpace("logistic generator with p = q".into()));
                }
            }
            ChainGenerator::Interleaved { scale, .. } => {
                if scale.is_zero() {
                    return Err(Error::InvalidSpace(
                        "interleaved generator with zero scale".into(),
                    ));
                }
            }
            ChainGenerator::ExplicitHead { head, tail } => {
                if tail.is_two_sided() {
                    return Err(Error::InvalidSpace(
                        "explicit_head tail must be one-sided".into(),
                    ));
                }
                tail.validate()?;
                if head.is_empty() {
                    return Err(Error::InvalidSpace("explicit_head with empty head".into()));
                }
                // The concatenation must stay strictly monotone in the tail's
                // direction, which makes it injective with the tail's limit.
                let incr = tail.increasing();
                let first_tail = tail.param_value(1);
                let seq: Vec<&Rational> = head.iter().chain(std::iter::once(&first_tail)).collect();
                let ok = seq
                    .windows(2)
                    .all(|w| if incr { w[0] < w[1] } else { w[0] > w[1] });
                if !ok {
                    return Err(Error::InvalidSpace(
                        "explicit_head terms are not monotone toward the tail".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Smallest valid index, `None` for two-sided generators.
    pub fn first_index(&self) -> Option<i64> {
        if self.is_two_sided() {
            None
        } else {
            Some(1)
        }
    }

    /// The term with the given index. Panics on an index outside the domain.
    pub fn term(&self, index: i64) -> Rational {
        self.param_value(self.param_of_index(index))
    }

    /// Limit as the index tends to `+∞`.
    pub fn forward_limit(&self) -> Rational {
        match self {
            ChainGenerator::Harmonic { a, .. } => a.clone(),
            ChainGenerator::Logistic { q, .. } => q.clone(),
            ChainGenerator::ExplicitHead { tail, .. } => tail.forward_limit(),
            ChainGenerator::Interleaved { anchor, .. } => anchor.clone(),
        }
    }

    /// Limit as the index tends to `-∞`; `None` for one-sided generators.
    pub fn backward_limit(&self) -> Option<Rational> {
        match self {
            ChainGenerator::Logistic { p, .. } => Some(p.clone()),
            ChainGenerator::Interleaved { anchor, .. } => Some(anchor.clone()),
            _ => None,
        }
    }

    /// Side from which a one-sided sequence approaches its limit.
    pub fn side(&self) -> Side {
        if self.increasing() {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Exact index of `x` among the terms, if it is one.
    pub fn index_of(&self, x: &Rational) -> Option<i64> {
        self.locate(x).exact
    }

    /// Nearest terms on each side of `x` (and `x`'s own index if it is a term).
    pub fn locate(&self, x: &Rational) -> Bracket {
        let incr = self.increasing();
        // Normalised comparison: s(u) is increasing in u.
        let below_target = |u: i64| {
            let v = self.param_value(u);
            if incr {
                v < *x
            } else {
                v > *x
            }
        };
        let lim_hi = self.param_limit_hi();
        let past_hi = if incr { *x >= lim_hi } else { *x <= lim_hi };
        if past_hi {
            // Every term is strictly on the near side of x; the nearest is the
            // unattained limit.
            return self.bracket_from_candidates(x, &[]);
        }
        let u0 = match self.param_lo() {
            Some(lo) => {
                if !below_target(lo) {
                    lo
                } else {
                    first_true(lo + 1, |u| !below_target(u))
                }
            }
            None => {
                let lim_lo = self.param_limit_lo().expect("two-sided");
                let before_lo = if incr { *x <= lim_lo } else { *x >= lim_lo };
                if before_lo {
                    return self.bracket_from_candidates(x, &[]);
                }
                if below_target(0) {
                    first_true(1, |u| !below_target(u))
                } else {
                    // Walk downward to a parameter that is below the target.
                    let mut step = 1i64;
                    while !below_target(-step) {
                        step = step.checked_mul(2).expect("search overflow");
                    }
                    first_true_between(-step, 0, |u| !below_target(u))
                }
            }
        };
        let mut cands = vec![u0, u0 + 1];
        if self.param_lo().map_or(true, |lo| u0 > lo) {
            cands.push(u0 - 1);
        }
        self.bracket_from_candidates(x, &cands)
    }

    fn bracket_from_candidates(&self, x: &Rational, params: &[i64]) -> Bracket {
        let mut out = Bracket::default();
        for &u in params {
            let v = self.param_value(u);
            let idx = self.index_of_param(u);
            if v == *x {
                out.exact = Some(idx);
            } else if v < *x {
                if out.below.as_ref().map_or(true, |(_, b)| v > *b) {
                    out.below = Some((idx, v));
                }
            } else if out.above.as_ref().map_or(true, |(_, a)| v < *a) {
                out.above = Some((idx, v));
            }
        }
        out
    }

    /// Smallest `K >= 0` (or `>= first_index`) such that every term with
    /// index `>= K` is strictly within `eps` of the forward limit.
    pub fn forward_tail_bound(&self, eps: &Rational) -> i64 {
        let lim = self.forward_limit();
        let start = self.first_index().unwrap_or(0);
        let close = |k: i64| self.term(k).dist(&lim) < *eps;
        match self {
            // Both halves of an interleaved enumeration shrink with |k|, but
            // the forward half is only k >= 1.
            ChainGenerator::Interleaved { .. } => first_true(1, close),
            _ => first_true(start, close),
        }
    }

    /// Smallest `K >= 0` such that every term with index `<= -K` is strictly
    /// within `eps` of the backward limit. `None` for one-sided generators.
    pub fn backward_tail_bound(&self, eps: &Rational) -> Option<i64> {
        let lim = self.backward_limit()?;
        Some(first_true(0, |k| self.term(-k).dist(&lim) < *eps))
    }

    // Parameter machinery: `param_value` is strictly monotone in `u`.

    fn increasing(&self) -> bool {
        match self {
            ChainGenerator::Harmonic { a, b } => b < a,
            ChainGenerator::Logistic { p, q } => p < q,
            ChainGenerator::ExplicitHead { tail, .. } => tail.increasing(),
            ChainGenerator::Interleaved { scale, .. } => scale.is_negative(),
        }
    }

    fn param_lo(&self) -> Option<i64> {
        match self {
            ChainGenerator::Logistic { .. } => None,
            _ => Some(1),
        }
    }

    fn param_limit_hi(&self) -> Rational {
        self.forward_limit()
    }

    fn param_limit_lo(&self) -> Option<Rational> {
        match self {
            ChainGenerator::Logistic { p, .. } => Some(p.clone()),
            _ => None,
        }
    }

    fn param_value(&self, u: i64) -> Rational {
        match self {
            ChainGenerator::Harmonic { a, b } => {
                assert!(u >= 1, "harmonic index must be >= 1");
                a + &((b - a) / Rational::from_integer(u))
            }
            ChainGenerator::Logistic { p, q } => {
                // 2^k / (1 + 2^k), written to keep numbers small for k < 0.
                let t = if u >= 0 {
                    let pw = Rational::pow2(u);
                    &pw / &(Rational::one() + &pw)
                } else {
                    (Rational::one() + Rational::pow2(-u)).recip()
                };
                p + &((q - p) * t)
            }
            ChainGenerator::ExplicitHead { head, tail } => {
                assert!(u >= 1, "explicit_head index must be >= 1");
                let n = head.len() as i64;
                if u <= n {
                    head[(u - 1) as usize].clone()
                } else {
                    tail.param_value(u - n)
                }
            }
            ChainGenerator::Interleaved { anchor, scale } => {
                assert!(u >= 1, "interleaved parameter must be >= 1");
                anchor + &(scale / &Rational::from_integer(u))
            }
        }
    }

    fn param_of_index(&self, index: i64) -> i64 {
        match self {
            ChainGenerator::Interleaved { .. } => {
                if index >= 1 {
                    2 * index
                } else {
                    1 - 2 * index
                }
            }
            _ => index,
        }
    }

    fn index_of_param(&self, u: i64) -> i64 {
        match self {
            ChainGenerator::Interleaved { .. } => {
                if u % 2 == 0 {
                    u / 2
                } else {
                    (1 - u) / 2
                }
            }
            _ => u,
        }
    }
}

/// First `u >= lo` where a monotone predicate (false...true) holds.
/// The predicate must eventually become true.
pub(crate) fn first_true(lo: i64, pred: impl Fn(i64) -> bool) -> i64 {
    if pred(lo) {
        return lo;
    }
    let mut step = 1i64;
    let mut last_false = lo;
    loop {
        let probe = lo.checked_add(step).expect("search overflow");
        if pred(probe) {
            return first_true_between(last_false, probe, pred);
        }
        last_false = probe;
        step = step.checked_mul(2).expect("search overflow");
    }
}

/// Given `pred(lo) == false` and `pred(hi) == true`, the first true in `(lo, hi]`.
fn first_true_between(mut lo: i64, mut hi: i64, pred: impl Fn(i64) -> bool) -> i64 {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
