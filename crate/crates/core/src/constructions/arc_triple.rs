//! Three short arcs near the vertices of a nearly right planar triangle.
//!
//! With A = (0, 0) and C = (1, 0), the angle at A is π/2 - alpha and the
//! angle at C is `apex_angle`. The arc through A is centred at C, the arc
//! through C at B and the arc through B at A, with lengths delta,
//! eps·delta and eps²·delta. Two points on the same arc are equidistant from
//! the centre vertex, which makes the mixed patterns nearly isosceles.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{pattern_index, pattern_name, ArcLabel, PatternRow, PATTERNS};
use crate::error::{Error, Result};
use crate::geom::{classify_unchecked, ClassCounts};
use crate::mc::{run_shards, shard_rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArcTripleParams {
    /// Deficit of the angle at A below a right angle.
    pub alpha: f64,
    /// Length of the arc through A.
    pub delta: f64,
    /// Ratio between successive arc lengths.
    pub eps: f64,
    /// Angle of the triangle at C.
    pub apex_angle: f64,
}

impl Default for ArcTripleParams {
    fn default() -> Self {
        ArcTripleParams::schedule(1)
    }
}

impl ArcTripleParams {
    pub const DEFAULT_APEX: f64 = 0.1;

    pub fn new(alpha: f64, delta: f64, eps: f64) -> Self {
        ArcTripleParams {
            alpha,
            delta,
            eps,
            apex_angle: Self::DEFAULT_APEX,
        }
    }

    /// Level `k` of a parameter sequence whose obtuse rate decreases toward 4/9:
    /// eps = 0.2 / 2^k, delta = eps³/4, alpha = 0.6·delta.
    pub fn schedule(level: u32) -> Self {
        let eps = 0.2 / f64::from(1u32 << level.min(20));
        let delta = eps * eps * eps / 4.0;
        ArcTripleParams::new(0.6 * delta, delta, eps)
    }

    pub fn validate(&self) -> Result<()> {
        let quarter = std::f64::consts::FRAC_PI_4;
        if !(self.apex_angle > 0.0 && self.apex_angle < quarter) {
            return Err(Error::invalid("apex_angle", "must lie in (0, pi/4)"));
        }
        if !(self.alpha > 0.0 && self.alpha < self.apex_angle) {
            return Err(Error::invalid("alpha", "must lie in (0, apex_angle)"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::invalid("eps", "must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 0.1) {
            return Err(Error::invalid("delta", "must lie in (0, 0.1)"));
        }
        Ok(())
    }
}

/// A circular arc given by its midpoint, its centre and its length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub vertex: [f64; 2],
    pub centre: [f64; 2],
    pub length: f64,
}

impl Arc {
    pub fn radius(&self) -> f64 {
        (self.vertex[0] - self.centre[0]).hypot(self.vertex[1] - self.centre[1])
    }

    /// Point at signed arc-length `s` from the midpoint.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        let v = [self.vertex[0] - self.centre[0], self.vertex[1] - self.centre[1]];
        let t = s / self.radius();
        let h = (0.5 * t).sin();
        let (sin_t, vers) = (t.sin(), 2.0 * h * h);
        // vertex + R(t)v - v, written so the offset keeps full precision
        [
            self.vertex[0] - vers * v[0] - sin_t * v[1],
            self.vertex[1] - vers * v[1] + sin_t * v[0],
        ]
    }
}

/// Concrete triangle and arcs for a parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcTripleGeometry {
    pub params: ArcTripleParams,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    /// Arcs indexed by [`ArcLabel::index`].
    pub arcs: [Arc; 3],
}

impl ArcTripleGeometry {
    pub fn new(params: ArcTripleParams) -> Result<Self> {
        params.validate()?;
        let ArcTripleParams {
            alpha,
            delta,
            eps,
            apex_angle,
        } = params;
        let a = [0.0, 0.0];
        let c = [1.0, 0.0];
        // law of sines with the angle at B equal to π/2 + alpha - apex_angle
        let ab = apex_angle.sin() / (apex_angle - alpha).cos();
        let b = [ab * alpha.sin(), ab * alpha.cos()];
        let arcs = [
            Arc {
                vertex: a,
                centre: c,
                length: delta,
            },
            Arc {
                vertex: b,
                centre: a,
                length: eps * eps * delta,
            },
            Arc {
                vertex: c,
                centre: b,
                length: eps * delta,
            },
        ];
        for arc in &arcs {
            if arc.length / arc.radius() > std::f64::consts::FRAC_PI_8 {
                return Err(Error::invalid("delta", "arc too long for its radius"));
            }
        }
        Ok(ArcTripleGeometry { params, a, b, c, arcs })
    }

    pub fn arc(&self, label: ArcLabel) -> &Arc {
        &self.arcs[label.index()]
    }

    /// Interior angles at A, B and C.
    pub fn angles(&self) -> [f64; 3] {
        let p = &self.params;
        [
            std::f64::consts::FRAC_PI_2 - p.alpha,
            std::f64::consts::FRAC_PI_2 + p.alpha - p.apex_angle,
            p.apex_angle,
        ]
    }

    /// Pick an arc uniformly, then a point uniformly by arc length.
    pub fn sample_labeled<R: Rng + ?Sized>(&self, rng: &mut R) -> (ArcLabel, [f64; 2]) {
        let label = ArcLabel::from_index(rng.random_range(0..3));
        let arc = self.arc(label);
        let s = (rng.random::<f64>() - 0.5) * arc.length;
        (label, arc.point_at(s))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.sample_labeled(rng).1.to_vec()
    }
}

/// Class counts split by arc pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub params: ArcTripleParams,
    pub samples: u64,
    pub seed: u64,
    pub rows: Vec<PatternRow>,
    pub overall: ClassCounts,
}

impl PatternReport {
    pub fn row(&self, pattern: &str) -> Option<&ClassCounts> {
        self.rows.iter().find(|r| r.pattern == pattern).map(|r| &r.counts)
    }

    pub fn obtuse_rate(&self) -> f64 {
        self.overall.obtuse as f64 / self.overall.total().max(1) as f64
    }

    /// Non-acute fraction within a pattern divided by eps.
    pub fn scaled_nonacute(&self, pattern: &str) -> Option<f64> {
        let c = self.row(pattern)?;
        if c.total() == 0 {
            return None;
        }
        Some(c.non_acute() as f64 / c.total() as f64 / self.params.eps)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("pattern,n,acute,right,obtuse,degenerate\n");
        for r in &self.rows {
            let c = &r.counts;
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.pattern,
                c.total(),
                c.acute,
                c.right,
                c.obtuse,
                c.degenerate
            ));
        }
        out
    }
}

/// Sample `samples` triples and tabulate classes per pattern.
pub fn pattern_report(
    params: ArcTripleParams,
    samples: u64,
    seed: u64,
    workers: usize,
    tol: f64,
) -> Result<PatternReport> {
    let geo = ArcTripleGeometry::new(params)?;
    let shards = run_shards(samples, workers, |shard, _first, count| {
        let mut rng = shard_rng(seed, shard);
        let mut rows = [ClassCounts::default(); 10];
        for _ in 0..count {
            let (la, a) = geo.sample_labeled(&mut rng);
            let (lb, b) = geo.sample_labeled(&mut rng);
            let (lc, c) = geo.sample_labeled(&mut rng);
            let class = classify_unchecked(&a, &b, &c, tol).class;
            rows[pattern_index(pattern_name([la, lb, lc]))].add(class);
        }
        Ok(rows)
    })?;
    let mut rows = [ClassCounts::default(); 10];
    for shard in &shards {
        for (acc, part) in rows.iter_mut().zip(shard) {
            acc.merge(part);
        }
    }
    let mut overall = ClassCounts::default();
    rows.iter().for_each(|r| overall.merge(r));
    Ok(PatternReport {
        params,
        samples,
        seed,
        rows: PATTERNS
            .iter()
            .zip(rows)
            .map(|(p, counts)| PatternRow {
                pattern: (*p).to_string(),
                counts,
            })
            .collect(),
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{classify_triangle, TriangleClass};

    #[test]
    fn base_triangle_is_acute_with_requested_angles() {
        let g = ArcTripleGeometry::new(ArcTripleParams::new(0.01, 0.01, 0.01)).unwrap();
        assert_eq!(classify_triangle(&g.a, &g.b, &g.c, 0.0).unwrap(), TriangleClass::Acute);
        let ab = [g.b[0] - g.a[0], g.b[1] - g.a[1]];
        let cos_a = ab[0] / ab[0].hypot(ab[1]);
        assert!((cos_a - 0.01f64.sin()).abs() < 1e-15);
        let angles = g.angles();
        assert!((angles.iter().sum::<f64>() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn arc_points_stay_on_circle() {
        let g = ArcTripleGeometry::new(ArcTripleParams::new(0.01, 0.01, 0.1)).unwrap();
        for arc in &g.arcs {
            let r = arc.radius();
            for &s in &[-0.5, -0.1, 0.0, 0.3, 0.5] {
                let p = arc.point_at(s * arc.length);
                let d = (p[0] - arc.centre[0]).hypot(p[1] - arc.centre[1]);
                assert!((d - r).abs() < 1e-14);
            }
            // tangent at the midpoint is perpendicular to the radius
            let p = arc.point_at(1e-6 * arc.length);
            let t = [p[0] - arc.vertex[0], p[1] - arc.vertex[1]];
            let v = [arc.vertex[0] - arc.centre[0], arc.vertex[1] - arc.centre[1]];
            let cos = (t[0] * v[0] + t[1] * v[1]) / (t[0].hypot(t[1]) * v[0].hypot(v[1]));
            assert!(cos.abs() < 1e-5);
        }
    }

    #[test]
    fn validation() {
        assert!(ArcTripleParams::new(0.0, 0.01, 0.1).validate().is_err());
        assert!(ArcTripleParams::new(0.01, 0.01, 1.0).validate().is_err());
        assert!(ArcTripleParams::new(0.2, 0.01, 0.1).validate().is_err());
        assert!(ArcTripleParams::schedule(2).validate().is_ok());
    }
}
