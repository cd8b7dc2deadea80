//! Random constructions with few obtuse triangles.
//!
//! [`arc_triple`] spreads mass over three short arcs near the vertices of a
//! nearly right triangle in the plane. [`self_similar`] places the same
//! pattern on a sphere cap and nests scaled copies of it in 3D, with the
//! depth drawn from a geometric law.

pub mod arc_triple;
pub mod fixed_point;
pub mod self_similar;

use serde::{Deserialize, Serialize};

use crate::geom::ClassCounts;

pub use arc_triple::{ArcTripleGeometry, ArcTripleParams, PatternReport};
pub use fixed_point::{fixed_point_acute, maximize_acute, maximize_acute_in, FixedPointOptimum};
pub use self_similar::{LevelReport, SelfSimilarLayout, SelfSimilarParams};

/// Which of the three arcs a point was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcLabel {
    A,
    B,
    C,
}

impl ArcLabel {
    pub const ALL: [ArcLabel; 3] = [ArcLabel::A, ArcLabel::B, ArcLabel::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> ArcLabel {
        ArcLabel::ALL[i % 3]
    }

    fn letter(self) -> char {
        match self {
            ArcLabel::A => 'A',
            ArcLabel::B => 'B',
            ArcLabel::C => 'C',
        }
    }
}

/// The ten unordered label patterns of a triple.
pub const PATTERNS: [&str; 10] = [
    "AAA", "BBB", "CCC", "ABC", "AAB", "AAC", "BBA", "BBC", "CCA", "CCB",
];

/// Pattern name of a labelled triple: repeated letter first, `ABC` when all differ.
pub fn pattern_name(labels: [ArcLabel; 3]) -> &'static str {
    let mut count = [0usize; 3];
    for l in labels {
        count[l.index()] += 1;
    }
    if let Some(i) = count.iter().position(|&c| c == 3) {
        return PATTERNS[i];
    }
    if count.iter().all(|&c| c == 1) {
        return "ABC";
    }
    let twice = ArcLabel::from_index(count.iter().position(|&c| c == 2).unwrap_or(0));
    let once = ArcLabel::from_index(count.iter().position(|&c| c == 1).unwrap_or(0));
    let name = [twice.letter(), twice.letter(), once.letter()];
    PATTERNS
        .iter()
        .find(|p| p.chars().eq(name.iter().copied()))
        .copied()
        .unwrap_or("ABC")
}

pub fn pattern_index(name: &str) -> usize {
    PATTERNS.iter().position(|p| *p == name).unwrap_or(3)
}

/// Class counts for one pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRow {
    pub pattern: String,
    pub counts: ClassCounts,
}
