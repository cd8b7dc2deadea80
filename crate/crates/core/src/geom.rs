//! Points, configurations and triangle classification.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default angular tolerance used by [`classify_triangle`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// A point in d-dimensional Euclidean space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointD(Vec<f64>);

impl PointD {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall {
                min: 2,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(PointD(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for PointD {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleClass {
    Acute,
    Right,
    Obtuse,
    Degenerate,
}

impl TriangleClass {
    pub const ALL: [TriangleClass; 4] = [
        TriangleClass::Acute,
        TriangleClass::Right,
        TriangleClass::Obtuse,
        TriangleClass::Degenerate,
    ];

    pub fn is_acute(self) -> bool {
        self == TriangleClass::Acute
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TriangleClass::Acute => "acute",
            TriangleClass::Right => "right",
            TriangleClass::Obtuse => "obtuse",
            TriangleClass::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for TriangleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-class triangle counts for a configuration or a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub acute: u64,
    pub right: u64,
    pub obtuse: u64,
    pub degenerate: u64,
}

impl ClassCounts {
    pub fn add(&mut self, class: TriangleClass) {
        match class {
            TriangleClass::Acute => self.acute += 1,
            TriangleClass::Right => self.right += 1,
            TriangleClass::Obtuse => self.obtuse += 1,
            TriangleClass::Degenerate => self.degenerate += 1,
        }
    }

    pub fn merge(&mut self, other: &ClassCounts) {
        self.acute += other.acute;
        self.right += other.right;
        self.obtuse += other.obtuse;
        self.degenerate += other.degenerate;
    }

    pub fn get(&self, class: TriangleClass) -> u64 {
        match class {
            TriangleClass::Acute => self.acute,
            TriangleClass::Right => self.right,
            TriangleClass::Obtuse => self.obtuse,
            TriangleClass::Degenerate => self.degenerate,
        }
    }

    pub fn total(&self) -> u64 {
        self.acute + self.right + self.obtuse + self.degenerate
    }

    pub fn non_acute(&self) -> u64 {
        self.total() - self.acute
    }
}

/// Classification together with the smallest |cos| over the three vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classified {
    pub class: TriangleClass,
    pub margin: f64,
}

fn check_triangle(a: &[f64], b: &[f64], c: &[f64]) -> Result<()> {
    let d = a.len();
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d });
    }
    for p in [b, c] {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    for (i, p) in [a, b, c].into_iter().enumerate() {
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
    }
    Ok(())
}

/// Classify the triangle `abc`.
///
/// `tol` is an angular tolerance: the triangle is degenerate when the sine
/// of its largest angle is at most `tol`, and right when some vertex has
/// |cos| at most `tol`. Being scale free, it stays meaningful for very thin
/// triangles.
pub fn classify_triangle(a: &[f64], b: &[f64], c: &[f64], tol: f64) -> Result<TriangleClass> {
    Ok(classify_with_margin(a, b, c, tol)?.class)
}

pub fn classify_with_margin(a: &[f64], b: &[f64], c: &[f64], tol: f64) -> Result<Classified> {
    check_triangle(a, b, c)?;
    if !(tol >= 0.0) {
        return Err(Error::invalid("tol", "must be non-negative"));
    }
    Ok(classify_unchecked(a, b, c, tol))
}

/// Classification without input validation; inputs must be finite and of equal length.
pub fn classify_unchecked(a: &[f64], b: &[f64], c: &[f64], tol: f64) -> Classified {
    let (mut ab2, mut ac2, mut bc2) = (0.0, 0.0, 0.0);
    let (mut dot_a, mut dot_b, mut dot_c) = (0.0, 0.0, 0.0);
    for i in 0..a.len() {
        let ab = b[i] - a[i];
        let ac = c[i] - a[i];
        let bc = c[i] - b[i];
        ab2 += ab * ab;
        ac2 += ac * ac;
        bc2 += bc * bc;
        dot_a += ab * ac;
        dot_b -= ab * bc;
        dot_c += ac * bc;
    }
    if ab2 == 0.0 || ac2 == 0.0 || bc2 == 0.0 {
        return Classified {
            class: TriangleClass::Degenerate,
            margin: 0.0,
        };
    }
    let cos = [
        dot_a / (ab2 * ac2).sqrt(),
        dot_b / (ab2 * bc2).sqrt(),
        dot_c / (ac2 * bc2).sqrt(),
    ];
    let (mut widest, mut min_cos) = (0, cos[0]);
    for (i, &v) in cos.iter().enumerate().skip(1) {
        if v < min_cos {
            widest = i;
            min_cos = v;
        }
    }
    // sin of the widest angle is only worth computing carefully near collinearity
    if min_cos * min_cos > 1.0 - 1e-4 {
        let (o, p, q) = match widest {
            0 => (a, b, c),
            1 => (b, a, c),
            _ => (c, a, b),
        };
        if vertex_sine(o, p, q) <= tol {
            return Classified {
                class: TriangleClass::Degenerate,
                margin: 0.0,
            };
        }
    }
    let margin = cos.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let class = if margin <= tol {
        TriangleClass::Right
    } else if min_cos < 0.0 {
        TriangleClass::Obtuse
    } else {
        TriangleClass::Acute
    };
    Classified { class, margin }
}

// sine of the angle at `o` via the Lagrange identity, which has no cancellation
fn vertex_sine(o: &[f64], p: &[f64], q: &[f64]) -> f64 {
    let d = o.len();
    let (mut cross2, mut u2, mut v2) = (0.0, 0.0, 0.0);
    for i in 0..d {
        let ui = p[i] - o[i];
        let vi = q[i] - o[i];
        u2 += ui * ui;
        v2 += vi * vi;
        for j in (i + 1)..d {
            let w = ui * (q[j] - o[j]) - (p[j] - o[j]) * vi;
            cross2 += w * w;
        }
    }
    (cross2 / (u2 * v2)).sqrt()
}

/// A finite point set in a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub dim: usize,
    pub points: Vec<PointD>,
}

impl Configuration {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: dim });
        }
        let mut out = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
            out.push(PointD(p));
        }
        Ok(Configuration { dim, points: out })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Errors unless there are at least three pairwise distinct points.
    pub fn validate(&self) -> Result<()> {
        if self.points.len() < 3 {
            return Err(Error::TooFewPoints {
                min: 3,
                got: self.points.len(),
            });
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: p.dim(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
            for (j, q) in self.points.iter().enumerate().take(i) {
                if p == q {
                    return Err(Error::DuplicatePoints { first: j, second: i });
                }
            }
        }
        Ok(())
    }
}

/// Count triangles of each class over all triples of `config`.
pub fn count_classes(config: &Configuration, tol: f64) -> Result<ClassCounts> {
    config.validate()?;
    if !(tol >= 0.0) {
        return Err(Error::invalid("tol", "must be non-negative"));
    }
    let pts = &config.points;
    let mut counts = ClassCounts::default();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for k in (j + 1)..pts.len() {
                counts.add(classify_unchecked(&pts[i], &pts[j], &pts[k], tol).class);
            }
        }
    }
    Ok(counts)
}

pub fn count_nonacute(config: &Configuration, tol: f64) -> Result<u64> {
    Ok(count_classes(config, tol)?.non_acute())
}

/// A coordinate that is either an exact rational or a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Coord {
    Exact(BigRational),
    Float(f64),
}

impl Coord {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Exact(r) => rational_to_f64(r),
            Coord::Float(x) => *x,
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl FromStr for Coord {
    type Err = Error;

    /// Accepts `p/q`, integers and finite decimals, all parsed exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad coordinate `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Coord::Exact(BigRational::new(n, d)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let mut r = BigRational::new(digits, scale);
        if neg {
            r = -r;
        }
        Ok(Coord::Exact(r))
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(i) => Ok(Coord::Exact(BigRational::from_integer(i.into()))),
            Raw::Num(x) => Ok(Coord::Float(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Coord {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Coord::Exact(r) => ser.serialize_str(&r.to_string()),
            Coord::Float(x) => ser.serialize_f64(*x),
        }
    }
}

/// On-disk configuration: `{"dim": d, "points": [[..], ..]}`.
///
/// JSON strings and integers are exact rationals; other JSON numbers are floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub dim: usize,
    pub points: Vec<Vec<Coord>>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let cf: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cf.check()?;
        Ok(cf)
    }

    fn check(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::DimensionTooSmall {
                min: 2,
                got: self.dim,
            });
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| matches!(c, Coord::Float(x) if !x.is_finite())) {
                return Err(Error::NonFinite { index: i });
            }
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.iter().all(|c| matches!(c, Coord::Exact(_))))
    }

    pub fn to_configuration(&self) -> Result<Configuration> {
        let cfg = Configuration::new(
            self.points
                .iter()
                .map(|p| p.iter().map(Coord::to_f64).collect())
                .collect(),
        )?;
        if cfg.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: cfg.dim,
            });
        }
        Ok(cfg)
    }

    /// Exact rational coordinates; floats are converted to their exact binary value.
    pub fn exact_points(&self) -> Result<Vec<Vec<BigRational>>> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.iter()
                    .map(|c| match c {
                        Coord::Exact(r) => Ok(r.clone()),
                        Coord::Float(x) => {
                            BigRational::from_f64(*x).ok_or(Error::NonFinite { index: i })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_configuration(cfg: &Configuration) -> Self {
        ConfigFile {
            dim: cfg.dim,
            points: cfg
                .points
                .iter()
                .map(|p| p.iter().map(|&x| Coord::Float(x)).collect())
                .collect(),
        }
    }
}

/// Exact classification with rational arithmetic.
pub fn classify_exact(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> TriangleClass {
    let zero = BigRational::zero();
    let mut lens = [zero.clone(), zero.clone(), zero.clone()];
    let mut dots = [zero.clone(), zero.clone(), zero];
    for i in 0..a.len() {
        let ab = &b[i] - &a[i];
        let ac = &c[i] - &a[i];
        let bc = &c[i] - &b[i];
        lens[0] += &ab * &ab;
        lens[1] += &ac * &ac;
        lens[2] += &bc * &bc;
        dots[0] += &ab * &ac;
        dots[1] -= &ab * &bc;
        dots[2] += &ac * &bc;
    }
    if lens.iter().any(Zero::is_zero) {
        return TriangleClass::Degenerate;
    }
    // collinear iff the Gram determinant at a vertex vanishes
    let gram = &lens[0] * &lens[1] - &dots[0] * &dots[0];
    if gram.is_zero() {
        return TriangleClass::Degenerate;
    }
    if dots.iter().any(Zero::is_zero) {
        TriangleClass::Right
    } else if dots.iter().any(Signed::is_negative) {
        TriangleClass::Obtuse
    } else {
        TriangleClass::Acute
    }
}

/// Exact per-class counts for a configuration given with rational coordinates.
pub fn count_classes_exact(points: &[Vec<BigRational>]) -> Result<ClassCounts> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            min: 3,
            got: points.len(),
        });
    }
    for i in 0..points.len() {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoints { first: j, second: i });
            }
        }
    }
    let mut counts = ClassCounts::default();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            for k in (j + 1)..points.len() {
                counts.add(classify_exact(&points[i], &points[j], &points[k]));
            }
        }
    }
    Ok(counts)
}
