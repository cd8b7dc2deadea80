//! Simulated annealing for point sets with few non-acute triangles, and exact
//! enumeration for certifying the configurations it finds.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_bounds::{closed_form_2d, closed_form_3d};
use crate::geom::{
    classify_unchecked, count_classes, count_classes_exact, ClassCounts, Classified, ConfigFile,
    Configuration, Coord, TriangleClass, DEFAULT_TOL,
};
use crate::mc::{map_indexed, shard_rng};
use crate::sphere::sample_sphere_into;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Count right, obtuse and degenerate triples.
    #[default]
    NonAcute,
    /// Count obtuse and degenerate triples only; right triangles are free.
    StrictObtuse,
}

impl SearchMode {
    pub fn counts(self, class: TriangleClass) -> bool {
        match self {
            SearchMode::NonAcute => class != TriangleClass::Acute,
            SearchMode::StrictObtuse => {
                matches!(class, TriangleClass::Obtuse | TriangleClass::Degenerate)
            }
        }
    }

    pub fn count(self, counts: &ClassCounts) -> u64 {
        match self {
            SearchMode::NonAcute => counts.non_acute(),
            SearchMode::StrictObtuse => counts.obtuse + counts.degenerate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchParams {
    pub n: usize,
    pub d: usize,
    pub iterations: u64,
    pub restarts: u32,
    pub initial_temperature: f64,
    /// Temperature multiplier per iteration.
    pub cooling: f64,
    /// Move scale at the first iteration, as a fraction of the diameter.
    pub scale_start: f64,
    /// Move scale at the last iteration, as a fraction of the diameter.
    pub scale_end: f64,
    pub seed: u64,
    pub mode: SearchMode,
    /// Use named configurations for the first restarts when they fit (n, d).
    pub warm_starts: bool,
    pub tol: f64,
    pub workers: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            n: 4,
            d: 2,
            iterations: 50_000,
            restarts: 10,
            initial_temperature: 1.0,
            cooling: 0.9999,
            scale_start: 0.3,
            scale_end: 1e-4,
            seed: 0,
            mode: SearchMode::NonAcute,
            warm_starts: true,
            tol: DEFAULT_TOL,
            workers: 1,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::TooFewPoints { min: 3, got: self.n });
        }
        if self.n > 64 {
            return Err(Error::invalid("n", "at most 64 points"));
        }
        if self.d < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: self.d });
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::invalid("cooling", "must lie in (0, 1)"));
        }
        if !(self.initial_temperature > 0.0) {
            return Err(Error::invalid("initial_temperature", "must be positive"));
        }
        if !(self.scale_start > 0.0 && self.scale_end > 0.0) {
            return Err(Error::invalid("scale", "move scales must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts", "must be at least 1"));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::invalid("tol", "must be non-negative"));
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers", "must be at least 1"));
        }
        Ok(())
    }
}

/// Forced non-acute count for n points when d is 2 or 3, zero below the base size.
pub fn forced_nonacute_bound(n: usize, d: usize) -> Option<u64> {
    let closed = match d {
        2 if n >= 4 => closed_form_2d(n as u64).ok()?,
        3 if n >= 6 => closed_form_3d(n as u64).ok()?,
        2 | 3 => return Some(0),
        _ => return None,
    };
    u64::try_from(closed).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub params: SearchParams,
    pub best: Configuration,
    pub best_count: u64,
    pub counts: ClassCounts,
    pub min_margin: f64,
    pub bound: Option<u64>,
    pub gap: Option<i64>,
    pub best_restart: u32,
    /// Start used by each restart: a named configuration or `random`.
    pub starts: Vec<String>,
    /// Best count found by each restart.
    pub restart_best: Vec<u64>,
    /// Running minimum of `restart_best`.
    pub best_so_far: Vec<u64>,
}

/// `n` points in the plane spanned by the first two axes, on the unit circle.
pub fn regular_polygon(n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            let mut p = vec![0.0; d];
            p[0] = t.cos();
            p[1] = t.sin();
            p
        })
        .collect()
}

/// The 2d points ±e_i.
pub fn cross_polytope(d: usize) -> Vec<Vec<f64>> {
    let mut pts = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; d];
            p[i] = s;
            pts.push(p);
        }
    }
    pts
}

/// Named configurations with exact coordinates where they exist.
pub fn named_configuration(name: &str, n: usize, d: usize) -> Result<ConfigFile> {
    let exact = |v: f64| Coord::Exact(num_rational::BigRational::from_integer((v as i64).into()));
    match name {
        "square" => Ok(exact_file(2, &cross_polytope(2), exact)),
        "octahedron" => Ok(exact_file(3, &cross_polytope(3), exact)),
        "cross-polytope" => Ok(exact_file(d, &cross_polytope(d), exact)),
        "regular-polygon" => {
            if n < 3 {
                return Err(Error::TooFewPoints { min: 3, got: n });
            }
            Ok(ConfigFile::from_configuration(&Configuration::new(regular_polygon(n, d.max(2)))?))
        }
        other => Err(Error::invalid("name", format!("unknown configuration `{other}`"))),
    }
}

fn exact_file(d: usize, pts: &[Vec<f64>], f: impl Fn(f64) -> Coord) -> ConfigFile {
    ConfigFile {
        dim: d,
        points: pts.iter().map(|p| p.iter().map(|&x| f(x)).collect()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Exact,
    Tolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactCount {
    pub counts: ClassCounts,
    pub method: CountMethod,
    /// Tolerance used when `method` is `tolerance`.
    pub tol: Option<f64>,
}

/// Count classes exactly when every coordinate is rational, else by tolerance.
pub fn enumerate_exact(config: &ConfigFile, tol: f64) -> Result<ExactCount> {
    if config.is_exact() {
        Ok(ExactCount {
            counts: count_classes_exact(&config.exact_points()?)?,
            method: CountMethod::Exact,
            tol: None,
        })
    } else {
        Ok(ExactCount {
            counts: count_classes(&config.to_configuration()?, tol)?,
            method: CountMethod::Tolerance,
            tol: Some(tol),
        })
    }
}

fn warm_starts(n: usize, d: usize) -> Vec<(&'static str, Vec<Vec<f64>>)> {
    let mut out = Vec::new();
    if n == 2 * d {
        out.push(("cross-polytope", cross_polytope(d)));
    }
    if d == 2 {
        out.push(("regular-polygon", regular_polygon(n, d)));
    }
    out
}

struct Annealer<'a> {
    params: &'a SearchParams,
    points: Vec<Vec<f64>>,
    triples: Vec<[usize; 3]>,
    through: Vec<Vec<usize>>,
    state: Vec<Classified>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    count: u64,
    margin: f64,
}

impl Score {
    fn energy(self) -> f64 {
        self.count as f64 - 0.5 * self.margin
    }

    fn better_than(self, other: Score) -> bool {
        self.count < other.count || (self.count == other.count && self.margin > other.margin)
    }
}

impl<'a> Annealer<'a> {
    fn new(params: &'a SearchParams, points: Vec<Vec<f64>>) -> Self {
        let n = points.len();
        let mut triples = Vec::new();
        let mut through = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for v in [i, j, k] {
                        through[v].push(triples.len());
                    }
                    triples.push([i, j, k]);
                }
            }
        }
        let mut a = Annealer {
            params,
            points,
            triples,
            through,
            state: Vec::new(),
        };
        a.state = (0..a.triples.len()).map(|t| a.classify(t)).collect();
        a
    }

    fn classify(&self, t: usize) -> Classified {
        let [i, j, k] = self.triples[t];
        classify_unchecked(&self.points[i], &self.points[j], &self.points[k], self.params.tol)
    }

    fn score(&self) -> Score {
        let mode = self.params.mode;
        let mut count = 0;
        let mut margin = f64::INFINITY;
        for c in &self.state {
            count += u64::from(mode.counts(c.class));
            margin = margin.min(c.margin);
        }
        Score { count, margin }
    }

    fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[..i] {
                let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                best = best.max(d2);
            }
        }
        best.sqrt().max(1e-12)
    }

    fn run<R: Rng>(mut self, rng: &mut R) -> (Vec<Vec<f64>>, Score) {
        let p = self.params;
        let mut current = self.score();
        let mut best = current;
        let mut best_points = self.points.clone();
        let mut temperature = p.initial_temperature;
        let mut diameter = self.diameter();
        let last = p.iterations.saturating_sub(1).max(1) as f64;
        let ratio = p.scale_end / p.scale_start;
        let mut saved = Vec::new();
        for it in 0..p.iterations {
            if it % 1024 == 0 {
                diameter = self.diameter();
            }
            let sigma = diameter * p.scale_start * ratio.powf(it as f64 / last);
            let i = rng.random_range(0..self.points.len());
            let old = self.points[i].clone();
            for x in self.points[i].iter_mut() {
                *x += sigma * rng.sample::<f64, _>(StandardNormal);
            }
            saved.clear();
            for &t in &self.through[i] {
                saved.push(self.state[t]);
                self.state[t] = self.classify(t);
            }
            let proposed = self.score();
            let delta = proposed.energy() - current.energy();
            if delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp() {
                current = proposed;
                if current.better_than(best) {
                    best = current;
                    best_points.clone_from(&self.points);
                }
            } else {
                self.points[i] = old;
                for (&t, &c) in self.through[i].iter().zip(&saved) {
                    self.state[t] = c;
                }
            }
            temperature *= p.cooling;
        }
        (best_points, best)
    }
}

fn uniform_ball<R: Rng>(n: usize, d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let mut v = vec![0.0; d];
            sample_sphere_into(&mut v, rng);
            let r = rng.random::<f64>().powf(1.0 / d as f64);
            v.iter_mut().for_each(|x| *x *= r);
            v
        })
        .collect()
}

/// Anneal `params.restarts` independent starts and keep the best.
pub fn search_min(params: &SearchParams) -> Result<SearchResult> {
    params.validate()?;
    let warm = if params.warm_starts {
        warm_starts(params.n, params.d)
    } else {
        Vec::new()
    };
    let runs = map_indexed(u64::from(params.restarts), params.workers, |r| {
        let mut rng = shard_rng(params.seed, r);
        let (name, start) = match warm.get(r as usize) {
            Some((name, pts)) => (name.to_string(), pts.clone()),
            None => ("random".to_string(), uniform_ball(params.n, params.d, &mut rng)),
        };
        let (points, score) = Annealer::new(params, start).run(&mut rng);
        Ok((name, points, score))
    })?;
    let mut best_idx = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.2.better_than(runs[best_idx].2) {
            best_idx = i;
        }
    }
    let restart_best: Vec<u64> = runs.iter().map(|r| r.2.count).collect();
    let best_so_far = restart_best
        .iter()
        .scan(u64::MAX, |m, &c| {
            *m = (*m).min(c);
            Some(*m)
        })
        .collect();
    let (_, points, score) = &runs[best_idx];
    let best = Configuration::new(points.clone())?;
    let counts = count_all(&best, params.tol);
    let best_count = params.mode.count(&counts);
    if best_count != score.count {
        return Err(Error::Invariant(format!(
            "recount gives {best_count}, annealer tracked {}",
            score.count
        )));
    }
    let bound = forced_nonacute_bound(params.n, params.d);
    if params.mode == SearchMode::NonAcute {
        if let Some(b) = bound {
            if best_count < b {
                return Err(Error::Invariant(format!(
                    "{best_count} non-acute triples is below the forced {b} for n={}, d={}",
                    params.n, params.d
                )));
            }
        }
    }
    Ok(SearchResult {
        params: *params,
        best,
        best_count,
        counts,
        min_margin: score.margin,
        bound,
        gap: bound.map(|b| best_count as i64 - b as i64),
        best_restart: best_idx as u32,
        starts: runs.iter().map(|r| r.0.clone()).collect(),
        restart_best,
        best_so_far,
    })
}

// like count_classes but tolerant of coincident points, which the annealer may produce
fn count_all(cfg: &Configuration, tol: f64) -> ClassCounts {
    let pts = &cfg.points;
    let mut counts = ClassCounts::default();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for k in (j + 1)..pts.len() {
                counts.add(classify_unchecked(&pts[i], &pts[j], &pts[k], tol).class);
            }
        }
    }
    counts
}
