use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use obtuse_core::constructions::arc_triple::pattern_report;
use obtuse_core::constructions::fixed_point::scan;
use obtuse_core::constructions::self_similar::level_report;
use obtuse_core::constructions::maximize_acute;
use obtuse_core::dist::{DistributionSpec, SphereParams};
use obtuse_core::exact_bounds::{limit_bound, LimitBound, Trajectory};
use obtuse_core::geom::{ConfigFile, DEFAULT_TOL};
use obtuse_core::mc::{estimate, Estimate, McConfig};
use obtuse_core::search::{enumerate_exact, named_configuration, search_min, SearchMode, SearchParams};
use obtuse_core::sphere::{asymptotic_sphere, obtuse_prob_sphere, DEFAULT_QUAD_TOL};
use serde::Serialize;
use serde_json::{json, Value};

use crate::manifest::{Report, RunManifest};
use crate::{emit, CliError, CliResult, Common, Format};

fn manifest(name: &str, params: Value, common: &Common) -> (RunManifest, u64) {
    let seed = common.seed();
    let mut m = RunManifest::new(name, params, seed);
    if let Some(p) = &common.out {
        m.outputs.push(p.display().to_string());
    }
    (m, seed)
}

fn json_report<T: Serialize>(m: &RunManifest, result: T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Report { manifest: m, result })?;
    s.push('\n');
    Ok(s)
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Six significant digits for console tables.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn sig3(x: f64) -> String {
    format!("{x:.2e}")
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// CSV: emit every `stride`-th record plus the last.
    #[arg(long, default_value_t = 1000)]
    stride: u64,
    #[command(flatten)]
    common: Common,
}

pub fn bound(a: BoundArgs) -> CliResult<()> {
    if a.stride == 0 {
        return Err(CliError::Usage("--stride must be positive".into()));
    }
    let params = json!({"dim": a.dim, "n_max": a.n_max, "format": format!("{:?}", a.format).to_lowercase(), "stride": a.stride});
    let (m, _) = manifest("bound", params, &a.common);
    let summary = limit_bound(a.dim, a.n_max)?;
    let text = match a.format {
        Format::Json => json_report(&m, &summary)?,
        Format::Csv => {
            let mut out = m.csv_header();
            out.push_str("d,n,t_n,ratio_exact_num,ratio_exact_den,ratio_float\n");
            for rec in Trajectory::new(a.dim, a.n_max)? {
                if (rec.n - summary.base_n) % a.stride != 0 && rec.n != a.n_max {
                    continue;
                }
                let r = rec.ratio();
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    rec.d,
                    rec.n,
                    rec.t_n,
                    r.numer(),
                    r.denom(),
                    rec.ratio_f64()
                ));
            }
            out
        }
        Format::Text => {
            format!(
                "d={} base={} n_max={}\nlower bound    {}\nupper envelope {}\nasymptotic     {}\nnaive          {}\n",
                summary.d,
                summary.base_n,
                summary.n_max,
                sig6(summary.lower_bound),
                sig6(summary.upper_envelope),
                sig6(summary.asymptotic),
                sig6(summary.naive)
            )
        }
    };
    emit(a.common.out.as_deref(), &text)
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Dimensions as `lo..hi` (inclusive) or a comma list.
    #[arg(long, default_value = "4..8")]
    dims: String,
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    common: Common,
}

pub fn parse_dims(s: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Usage(format!("bad --dims `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

pub fn table(a: TableArgs) -> CliResult<()> {
    let dims = parse_dims(&a.dims)?;
    let params = json!({"dims": dims, "n_max": a.n_max});
    let (m, _) = manifest("table", params, &a.common);
    let rows: Vec<LimitBound> = dims
        .iter()
        .map(|&d| limit_bound(d, a.n_max))
        .collect::<Result<_, _>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut out = m.csv_header();
            out.push_str("d,base_n,n_max,lower_bound,lower_bound_3sf,upper_envelope,asymptotic,naive,ratio_to_naive\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.d,
                    r.base_n,
                    r.n_max,
                    r.lower_bound,
                    sig3(r.lower_bound),
                    r.upper_envelope,
                    r.asymptotic,
                    r.naive,
                    r.lower_bound / r.naive
                ));
            }
            out
        }
        Format::Json => json_report(&m, &rows)?,
        Format::Text => {
            let mut out = format!(
                "{:>3} {:>8} {:>12} {:>12} {:>12} {:>12} {:>9}\n",
                "d", "base", "lower", "upper", "asymptotic", "naive", "x naive"
            );
            for r in &rows {
                out.push_str(&format!(
                    "{:>3} {:>8} {:>12} {:>12} {:>12} {:>12} {:>9}\n",
                    r.d,
                    r.base_n,
                    sig6(r.lower_bound),
                    sig6(r.upper_envelope),
                    sig6(r.asymptotic),
                    sig6(r.naive),
                    sig6(r.lower_bound / r.naive)
                ));
            }
            out
        }
    };
    emit(a.common.out.as_deref(), &text)
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[arg(long)]
    dim: u32,
    /// Monte Carlo triples to draw as a cross-check; 0 skips it.
    #[arg(long, default_value_t = 0)]
    mc_samples: u64,
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Serialize)]
struct SphereResult {
    d: u32,
    quadrature: f64,
    asymptotic: f64,
    relative_gap: f64,
    mc: Option<Estimate>,
}

pub fn sphere(a: SphereArgs, workers: usize) -> CliResult<()> {
    let params = json!({"dim": a.dim, "mc_samples": a.mc_samples, "tol": a.tol});
    let (m, seed) = manifest("sphere", params, &a.common);
    let quadrature = obtuse_prob_sphere(a.dim, a.tol)?;
    let asymptotic = asymptotic_sphere(a.dim)?;
    let mc = if a.mc_samples > 0 {
        let spec = DistributionSpec::Sphere(SphereParams { dim: a.dim });
        Some(estimate(&spec, &McConfig::new(a.mc_samples, seed).workers(workers))?)
    } else {
        None
    };
    let result = SphereResult {
        d: a.dim,
        quadrature,
        asymptotic,
        relative_gap: (quadrature / asymptotic - 1.0).abs(),
        mc,
    };
    emit(a.common.out.as_deref(), &json_report(&m, &result)?)
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// DistributionSpec JSON file.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Also write a per-pattern CSV (arc_triple) or per-level JSON (self_similar).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Append one summary row per run to this CSV.
    #[arg(long)]
    csv_append: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

pub fn mc(a: McArgs, workers: usize) -> CliResult<()> {
    let spec = DistributionSpec::from_json(&read(&a.spec)?)?;
    let params = json!({
        "spec": spec,
        "spec_path": a.spec.display().to_string(),
        "samples": a.samples,
        "tol": a.tol,
    });
    let (mut m, seed) = manifest("mc", params, &a.common);
    for p in [&a.report, &a.csv_append].into_iter().flatten() {
        m.outputs.push(p.display().to_string());
    }
    let cfg = McConfig {
        samples: a.samples,
        seed,
        workers,
        tol: a.tol,
    };
    let est = estimate(&spec, &cfg)?;
    if let Some(path) = &a.report {
        let text = match &spec {
            DistributionSpec::ArcTriple(p) => {
                let r = pattern_report(*p, a.samples, seed, workers, a.tol)?;
                format!("{}{}", m.csv_header(), r.to_csv())
            }
            DistributionSpec::SelfSimilar(p) => {
                json_report(&m, level_report(*p, a.samples, seed, workers, a.tol)?)?
            }
            _ => {
                return Err(CliError::Usage(
                    "--report needs an arc_triple or self_similar spec".into(),
                ))
            }
        };
        emit(Some(path), &text)?;
    }
    if let Some(path) = &a.csv_append {
        append_row(path, &est)?;
    }
    emit(a.common.out.as_deref(), &json_report(&m, &est)?)
}

fn append_row(path: &Path, est: &Estimate) -> CliResult<()> {
    let fresh = !path.exists();
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut text = String::new();
    if fresh {
        text.push_str("spec,samples,seed,acute,right,obtuse,degenerate,p_hat,ci95_lo,ci95_hi\n");
    }
    let c = &est.counts;
    text.push_str(&format!(
        "\"{}\",{},{},{},{},{},{},{},{},{}\n",
        serde_json::to_string(&est.spec)?.replace('"', "\"\""),
        est.samples,
        est.seed,
        c.acute,
        c.right,
        c.obtuse,
        c.degenerate,
        est.p_hat,
        est.ci95[0],
        est.ci95[1]
    ));
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Args)]
pub struct FixedPointArgs {
    /// Emit x(p) on a grid as CSV.
    #[arg(long, conflicts_with = "optimize")]
    scan: bool,
    /// Emit the maximiser as JSON (the default).
    #[arg(long)]
    optimize: bool,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[command(flatten)]
    common: Common,
}

pub fn fixedpoint(a: FixedPointArgs) -> CliResult<()> {
    let params = json!({"scan": a.scan, "steps": a.steps});
    let (m, _) = manifest("fixedpoint", params, &a.common);
    let text = if a.scan {
        let mut out = m.csv_header();
        out.push_str("p,acute,obtuse\n");
        for (p, x) in scan(1.0 / a.steps.max(1) as f64, 1.0, a.steps.max(1) - 1)? {
            out.push_str(&format!("{p},{x},{}\n", 1.0 - x));
        }
        out
    } else {
        json_report(&m, maximize_acute()?)?
    };
    emit(a.common.out.as_deref(), &text)
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum, default_value = "non-acute")]
    mode: ModeArg,
    #[arg(long, default_value_t = 10)]
    restarts: u32,
    #[arg(long, default_value_t = 50_000)]
    iterations: u64,
    #[arg(long, default_value_t = 1.0)]
    temperature: f64,
    #[arg(long, default_value_t = 0.9999)]
    cooling: f64,
    /// Start every restart from a random configuration.
    #[arg(long)]
    no_warm_starts: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ModeArg {
    NonAcute,
    StrictObtuse,
}

pub fn search(a: SearchArgs, workers: usize) -> CliResult<()> {
    let seed = a.common.seed();
    let params = SearchParams {
        n: a.n,
        d: a.dim,
        iterations: a.iterations,
        restarts: a.restarts,
        initial_temperature: a.temperature,
        cooling: a.cooling,
        seed,
        mode: match a.mode {
            ModeArg::NonAcute => SearchMode::NonAcute,
            ModeArg::StrictObtuse => SearchMode::StrictObtuse,
        },
        warm_starts: !a.no_warm_starts,
        tol: a.tol,
        workers,
        ..Default::default()
    };
    let common = Common {
        seed: Some(seed),
        out: a.common.out.clone(),
    };
    let (m, _) = manifest("search", serde_json::to_value(params)?, &common);
    let result = search_min(&params)?;
    emit(a.common.out.as_deref(), &json_report(&m, &result)?)
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Configuration JSON, or the output of `search`.
    #[arg(long, conflicts_with = "named", required_unless_present = "named")]
    config: Option<PathBuf>,
    /// square, octahedron, cross-polytope or regular-polygon.
    #[arg(long)]
    named: Option<String>,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

/// Accepts a bare configuration or a search report holding one under `result.best`.
pub fn load_config(text: &str) -> CliResult<ConfigFile> {
    let v: Value = serde_json::from_str(text)?;
    let inner = v.pointer("/result/best").cloned().unwrap_or(v);
    Ok(ConfigFile::from_json(&inner.to_string())?)
}

pub fn enumerate(a: EnumerateArgs) -> CliResult<()> {
    let config = match (&a.config, &a.named) {
        (Some(path), _) => load_config(&read(path)?)?,
        (None, Some(name)) => named_configuration(name, a.n, a.dim)?,
        (None, None) => return Err(CliError::Usage("need --config or --named".into())),
    };
    let params = json!({
        "config": a.config.as_ref().map(|p| p.display().to_string()),
        "named": a.named,
        "n": a.n,
        "dim": a.dim,
        "tol": a.tol,
    });
    let (m, _) = manifest("enumerate", params, &a.common);
    let counts = enumerate_exact(&config, a.tol)?;
    let result = json!({
        "points": config.points.len(),
        "dim": config.dim,
        "counts": counts.counts,
        "method": counts.method,
        "tol": counts.tol,
        "configuration": config,
    });
    emit(a.common.out.as_deref(), &json_report(&m, result)?)
}
