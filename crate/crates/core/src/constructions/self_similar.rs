//! Nested copies of the three-arc pattern on a sphere cap in R³.
//!
//! A unit-level layout puts A, B, C on the unit sphere as a spherical triangle
//! with a right angle at A, side AC of length `2·cap_half_angle` and angle
//! `apex_angle` at C, then rotates it so the plane through A, B, C is
//! horizontal. Each arc is the orbit of its vertex under rotation about the
//! axis through the origin and the partner vertex, so same-arc pairs are
//! exactly equidistant from the partner. A sample draws a level j from a
//! geometric law with parameter p, capped at `max_depth`, and scales the
//! unit-level point by rho^j.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fixed_point::fixed_point_acute;
use super::ArcLabel;
use crate::error::{Error, Result};
use crate::geom::{classify_unchecked, ClassCounts};
use crate::mc::{run_shards, shard_rng};

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn unit(a: V3) -> V3 {
    scale(a, 1.0 / dot(a, a).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelfSimilarParams {
    /// Probability of stopping at each level.
    pub p: f64,
    /// Scale factor between consecutive levels.
    pub rho: f64,
    /// Half the angular length of side AC.
    pub cap_half_angle: f64,
    /// Ratio between successive arc lengths.
    pub eps: f64,
    /// Length of the arc through A, relative to the chord |AC|.
    pub delta: f64,
    /// Spherical angle at C.
    pub apex_angle: f64,
    /// Deepest level; the geometric tail beyond it is folded onto it.
    pub max_depth: u32,
}

impl Default for SelfSimilarParams {
    fn default() -> Self {
        SelfSimilarParams {
            p: super::maximize_acute().map(|o| o.p).unwrap_or(0.8),
            rho: 1e-9,
            cap_half_angle: 0.4,
            eps: 0.1,
            delta: 3e-4,
            apex_angle: 0.1,
            max_depth: 12,
        }
    }
}

impl SelfSimilarParams {
    pub fn validate(&self) -> Result<()> {
        let quarter = std::f64::consts::FRAC_PI_4;
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::invalid("p", "must lie in (0, 1]"));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::invalid("rho", "must lie in (0, 1)"));
        }
        if !(self.cap_half_angle > 0.0 && self.cap_half_angle < quarter) {
            return Err(Error::invalid("cap_half_angle", "must lie in (0, pi/4)"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::invalid("eps", "must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 0.1) {
            return Err(Error::invalid("delta", "must lie in (0, 0.1)"));
        }
        if !(self.apex_angle > 0.0 && self.apex_angle < quarter) {
            return Err(Error::invalid("apex_angle", "must lie in (0, pi/4)"));
        }
        if self.max_depth > 64 || f64::from(self.max_depth) * self.rho.log10() < -250.0 {
            return Err(Error::invalid("max_depth", "deepest level would underflow"));
        }
        Ok(())
    }

    /// Probability mass of levels at or beyond `max_depth` under the uncapped law.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.p).powi(self.max_depth as i32)
    }
}

/// Unit-level points and arcs, indexed by [`ArcLabel::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarLayout {
    pub params: SelfSimilarParams,
    pub vertices: [V3; 3],
    /// Rotation axis of each arc: the unit vector of its partner vertex.
    pub axes: [V3; 3],
    pub lengths: [f64; 3],
    ln_rho: f64,
}

const PARTNER: [usize; 3] = [2, 0, 1];

impl SelfSimilarLayout {
    pub fn new(params: SelfSimilarParams) -> Result<Self> {
        params.validate()?;
        let side_ac = 2.0 * params.cap_half_angle;
        // right spherical triangle at A: tan|AB| = tan(C) sin|AC|
        let side_ab = (params.apex_angle.tan() * side_ac.sin()).atan();
        let a0 = [1.0, 0.0, 0.0];
        let b0 = [side_ab.cos(), 0.0, side_ab.sin()];
        let c0 = [side_ac.cos(), side_ac.sin(), 0.0];
        let mut n = unit(cross(sub(b0, a0), sub(c0, a0)));
        if dot(n, a0) < 0.0 {
            n = scale(n, -1.0);
        }
        let e1 = unit(sub(a0, scale(n, dot(a0, n))));
        let e2 = cross(n, e1);
        let to_frame = |v: V3| [dot(v, e1), dot(v, e2), dot(v, n)];
        let vertices = [to_frame(a0), to_frame(b0), to_frame(c0)];
        let chord = dot(sub(vertices[0], vertices[2]), sub(vertices[0], vertices[2])).sqrt();
        let base = params.delta * chord;
        let lengths = [base, params.eps * params.eps * base, params.eps * base];
        let axes = [vertices[PARTNER[0]], vertices[PARTNER[1]], vertices[PARTNER[2]]];
        Ok(SelfSimilarLayout {
            params,
            vertices,
            axes,
            lengths,
            ln_rho: params.rho.ln(),
        })
    }

    /// Unit-level point on arc `label` at signed arc length `s` from its vertex.
    pub fn arc_point(&self, label: ArcLabel, s: f64) -> V3 {
        let i = label.index();
        let x = self.vertices[i];
        let k = self.axes[i];
        let radial = sub(x, scale(k, dot(k, x)));
        let t = s / dot(radial, radial).sqrt();
        let h = (0.5 * t).sin();
        // Rodrigues rotation as vertex + offset
        let kx = cross(k, x);
        let st = t.sin();
        let vers = 2.0 * h * h;
        [
            x[0] + st * kx[0] - vers * radial[0],
            x[1] + st * kx[1] - vers * radial[1],
            x[2] + st * kx[2] - vers * radial[2],
        ]
    }

    pub fn sample_level<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let p = self.params.p;
        if p >= 1.0 {
            return 0;
        }
        let u: f64 = rng.random();
        let j = ((1.0 - u).ln() / (1.0 - p).ln()).floor();
        if j >= f64::from(self.params.max_depth) {
            self.params.max_depth
        } else {
            j as u32
        }
    }

    pub fn sample_leveled<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, ArcLabel, V3) {
        let level = self.sample_level(rng);
        let label = ArcLabel::from_index(rng.random_range(0..3));
        let s = (rng.random::<f64>() - 0.5) * self.lengths[label.index()];
        let pt = self.arc_point(label, s);
        let r = (f64::from(level) * self.ln_rho).exp();
        (level, label, scale(pt, r))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.sample_leveled(rng).2.to_vec()
    }
}

/// Class counts split by how many points of a triple sit at the shallowest level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub params: SelfSimilarParams,
    pub samples: u64,
    pub seed: u64,
    /// All three at the shallowest level.
    pub same: ClassCounts,
    /// Exactly two at the shallowest level.
    pub two_shallow: ClassCounts,
    /// Exactly one at the shallowest level.
    pub one_shallow: ClassCounts,
    pub overall: ClassCounts,
    /// Acute rate rebuilt from the per-pattern rates and the level law.
    pub accounting_acute: f64,
    /// (measured acute - accounting_acute) in binomial standard errors.
    pub accounting_z: f64,
    /// Acute rate predicted with pattern rates 5/9, 1 and 0.
    pub model_acute: f64,
}

fn rate(c: &ClassCounts) -> f64 {
    if c.total() == 0 {
        0.0
    } else {
        c.acute as f64 / c.total() as f64
    }
}

impl LevelReport {
    pub fn acute_rate(&self) -> f64 {
        rate(&self.overall)
    }

    pub fn obtuse_rate(&self) -> f64 {
        self.overall.obtuse as f64 / self.overall.total().max(1) as f64
    }
}

pub fn level_report(
    params: SelfSimilarParams,
    samples: u64,
    seed: u64,
    workers: usize,
    tol: f64,
) -> Result<LevelReport> {
    let layout = SelfSimilarLayout::new(params)?;
    let shards = run_shards(samples, workers, |shard, _first, count| {
        let mut rng = shard_rng(seed, shard);
        let mut by = [ClassCounts::default(); 3];
        for _ in 0..count {
            let (la, _, a) = layout.sample_leveled(&mut rng);
            let (lb, _, b) = layout.sample_leveled(&mut rng);
            let (lc, _, c) = layout.sample_leveled(&mut rng);
            let top = la.min(lb).min(lc);
            let shallow = [la, lb, lc].iter().filter(|&&l| l == top).count();
            by[3 - shallow].add(classify_unchecked(&a, &b, &c, tol).class);
        }
        Ok(by)
    })?;
    let mut by = [ClassCounts::default(); 3];
    for s in &shards {
        for (acc, part) in by.iter_mut().zip(s) {
            acc.merge(part);
        }
    }
    let mut overall = ClassCounts::default();
    by.iter().for_each(|c| overall.merge(c));
    let p = params.p;
    let q = 1.0 - p;
    let norm = 3.0 - 3.0 * p + p * p;
    // pattern weights divided by 1 - q^3 = p·norm
    let accounting_acute =
        (p * p * rate(&by[0]) + 3.0 * p * q * rate(&by[1]) + 3.0 * q * q * rate(&by[2])) / norm;
    let measured = rate(&overall);
    let se = (measured * (1.0 - measured) / overall.total().max(1) as f64).sqrt();
    let diff = measured - accounting_acute;
    let accounting_z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(LevelReport {
        params,
        samples,
        seed,
        same: by[0],
        two_shallow: by[1],
        one_shallow: by[2],
        overall,
        accounting_acute,
        accounting_z,
        model_acute: fixed_point_acute(p)?,
    })
}
