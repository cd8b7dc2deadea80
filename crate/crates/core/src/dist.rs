//! Serializable descriptions of point distributions and their samplers.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{ArcTripleGeometry, ArcTripleParams, SelfSimilarLayout, SelfSimilarParams};
use crate::error::{Error, Result};
use crate::sphere::sample_sphere_into;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum DistributionSpec {
    ArcTriple(ArcTripleParams),
    SelfSimilar(SelfSimilarParams),
    Sphere(SphereParams),
    Arc(ArcParams),
    Mixture(MixtureParams),
}

/// Uniform on the unit sphere S^{dim-1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereParams {
    pub dim: u32,
}

/// Uniform by length on a planar circular arc centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcParams {
    pub radius: f64,
    /// Angular length in radians.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureParams {
    pub components: Vec<MixtureComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub spec: DistributionSpec,
}

impl DistributionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn sampler(&self) -> Result<Sampler> {
        Sampler::new(self)
    }
}

/// A validated, ready-to-sample distribution.
#[derive(Debug, Clone)]
pub enum Sampler {
    ArcTriple(ArcTripleGeometry),
    SelfSimilar(SelfSimilarLayout),
    Sphere(usize),
    Arc(ArcParams),
    Mixture {
        cumulative: Vec<f64>,
        parts: Vec<Sampler>,
        dim: usize,
    },
}

impl Sampler {
    pub fn new(spec: &DistributionSpec) -> Result<Self> {
        Ok(match spec {
            DistributionSpec::ArcTriple(p) => Sampler::ArcTriple(ArcTripleGeometry::new(*p)?),
            DistributionSpec::SelfSimilar(p) => Sampler::SelfSimilar(SelfSimilarLayout::new(*p)?),
            DistributionSpec::Sphere(p) => {
                if p.dim < 2 {
                    return Err(Error::DimensionTooSmall {
                        min: 2,
                        got: p.dim as usize,
                    });
                }
                Sampler::Sphere(p.dim as usize)
            }
            DistributionSpec::Arc(p) => {
                if !(p.radius > 0.0 && p.radius.is_finite()) {
                    return Err(Error::invalid("radius", "must be finite and positive"));
                }
                if !(p.angle > 0.0 && p.angle <= std::f64::consts::TAU) {
                    return Err(Error::invalid("angle", "must lie in (0, 2pi]"));
                }
                Sampler::Arc(*p)
            }
            DistributionSpec::Mixture(m) => {
                if m.components.is_empty() {
                    return Err(Error::invalid("components", "mixture is empty"));
                }
                let mut parts = Vec::with_capacity(m.components.len());
                let mut cumulative = Vec::with_capacity(m.components.len());
                let mut total = 0.0;
                for c in &m.components {
                    if !(c.weight >= 0.0 && c.weight.is_finite()) {
                        return Err(Error::invalid("weight", "must be finite and non-negative"));
                    }
                    total += c.weight;
                    cumulative.push(total);
                    parts.push(Sampler::new(&c.spec)?);
                }
                if !(total > 0.0) {
                    return Err(Error::invalid("weight", "weights sum to zero"));
                }
                cumulative.iter_mut().for_each(|w| *w /= total);
                let dim = parts[0].dim();
                if let Some(bad) = parts.iter().find(|p| p.dim() != dim) {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: bad.dim(),
                    });
                }
                Sampler::Mixture {
                    cumulative,
                    parts,
                    dim,
                }
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Sampler::ArcTriple(_) | Sampler::Arc(_) => 2,
            Sampler::SelfSimilar(_) => 3,
            Sampler::Sphere(d) => *d,
            Sampler::Mixture { dim, .. } => *dim,
        }
    }

    /// Draw one point into `out`, which must have length [`Sampler::dim`].
    pub fn sample_into<R: Rng + ?Sized>(&self, out: &mut [f64], rng: &mut R) {
        match self {
            Sampler::ArcTriple(g) => out.copy_from_slice(&g.sample_labeled(rng).1),
            Sampler::SelfSimilar(l) => out.copy_from_slice(&l.sample_leveled(rng).2),
            Sampler::Sphere(_) => sample_sphere_into(out, rng),
            Sampler::Arc(p) => {
                let t = p.angle * rng.random::<f64>();
                out[0] = p.radius * t.cos();
                out[1] = p.radius * t.sin();
            }
            Sampler::Mixture {
                cumulative, parts, ..
            } => {
                let u: f64 = rng.random();
                let i = cumulative.partition_point(|&c| c <= u).min(parts.len() - 1);
                parts[i].sample_into(out, rng);
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        self.sample_into(&mut v, rng);
        v
    }
}
