//! Counting and probability bounds for acute and obtuse triangles.
//!
//! * [`geom`]: triangle classification and per-class counts of point sets.
//! * [`exact_bounds`]: big-integer recurrences forcing non-acute triples.
//! * [`special_fn`]: log-gamma, incomplete beta and adaptive quadrature.
//! * [`sphere`]: obtuse probability of random triangles on S^{d-1}.
//! * [`constructions`]: distributions with few obtuse triangles.
//! * [`mc`] and [`dist`]: seeded, sharded Monte Carlo estimation.
//! * [`search`]: annealing for small point sets and exact enumeration.

// negated float comparisons below reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod dist;
pub mod error;
pub mod exact_bounds;
pub mod geom;
pub mod mc;
pub mod search;
pub mod special_fn;
pub mod sphere;

pub use error::{Error, Result};
pub use geom::{classify_triangle, ClassCounts, Configuration, PointD, TriangleClass};
