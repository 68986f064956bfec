//! Exact analysis of hyper-expansive homeomorphisms on countable compact
//! subsets of the real line.
//!
//! A homeomorphism `f` is hyper-expansive when the induced map on the
//! hyperspace of nonempty compact subsets (with the Hausdorff metric) is
//! expansive. The crate decides this property for symbolic rank-one systems
//! via the orbit/attractor–repeller characterization ([`dynamics`]), decides
//! which spaces admit such maps via Cantor–Bendixson data ([`cb_rank`]), and
//! cross-checks verdicts with a brute-force separation oracle on finite
//! windows of the hyperspace ([`oracle`]).
//!
//! Expansiveness of `f` itself is the statement that the singletons
//! `F_1 = {{x}}` form an isolated invariant set of the induced map; the
//! hyperspace version asks that *all* distinct compact sets separate.
//!
//! All arithmetic is exact ([`Rational`]).

pub mod cb_rank;
pub mod dynamics;
pub mod error;
pub mod generator;
pub mod metric;
pub mod oracle;
pub mod rational;
pub mod space;
pub mod window;

pub use error::{Error, Result};
pub use generator::{ChainGenerator, Side};
pub use metric::{directed_distance, hausdorff_distance, min_gap, PointSet};
pub use rational::Rational;
pub use space::{parse_space, point_at, PointRef, SymbolicSystem};
pub use window::{realize_window, Window};
