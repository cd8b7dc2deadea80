//! Log-gamma, log-beta, the regularized incomplete beta function and
//! adaptive Gauss-Kronrod quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// above this the Stirling series beats Lanczos
const STIRLING_MIN: f64 = 10.0;

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid("x", format!("ln_gamma needs finite x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x);
    }
    if x < 0.5 {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// ln Γ(x) - [(x - 1/2) ln x - x + ln √(2π)] for x >= 10.
fn stirling_tail(x: f64) -> f64 {
    // B_2k / (2k (2k-1)) for k = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let r = 1.0 / x;
    let r2 = r * r;
    let mut acc = 0.0;
    for &c in C.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

/// ln B(a, b) for a, b > 0, accurate when one or both arguments are large.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(name, format!("ln_beta needs finite positive arguments, got {v}")));
        }
    }
    Ok(ln_beta_pos(a, b))
}

fn ln_beta_pos(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let s = lo + hi;
    if hi < STIRLING_MIN {
        return ln_gamma_pos(lo) + ln_gamma_pos(hi) - ln_gamma_pos(s);
    }
    let corr = stirling_tail(hi) - stirling_tail(s);
    if lo < STIRLING_MIN {
        // ln Γ(hi) - ln Γ(hi + lo) expanded so the large terms cancel analytically
        return ln_gamma_pos(lo) - (hi - 0.5) * (lo / hi).ln_1p() - lo * s.ln() + lo + corr;
    }
    LN_SQRT_2PI - 0.5 * s.ln()
        + (lo - 0.5) * (lo / s).ln()
        + (hi - 0.5) * (-lo / s).ln_1p()
        + stirling_tail(lo)
        + corr
}

const CF_MAX_ITER: usize = 20_000;
const CF_EPS: f64 = 1e-15;
const CF_TINY: f64 = 1e-300;

/// Regularized incomplete beta I_z(a, b) for z in [0, 1], a, b > 0.
pub fn reg_inc_beta(z: f64, a: f64, b: f64) -> Result<f64> {
    reg_inc_beta_split(z, 1.0 - z, a, b)
}

/// I_z(a, b) where the caller supplies `w = 1 - z` exactly.
///
/// Passing both halves avoids cancellation when z is close to 1.
pub fn reg_inc_beta_split(z: f64, w: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) || !(0.0..=1.0).contains(&w) {
        return Err(Error::invalid("z", format!("must lie in [0, 1], got {z}")));
    }
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(name, format!("must be finite and positive, got {v}")));
        }
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if w == 0.0 {
        return Ok(1.0);
    }
    let log_front = a * z.ln() + b * w.ln() - ln_beta_pos(a, b);
    if z <= (a + 1.0) / (a + b + 2.0) {
        let cf = beta_cf(z, a, b).ok_or(Error::BetaNoConvergence { z, a, b })?;
        Ok((log_front.exp() * cf / a).clamp(0.0, 1.0))
    } else {
        let cf = beta_cf(w, b, a).ok_or(Error::BetaNoConvergence { z, a, b })?;
        Ok((1.0 - log_front.exp() * cf / b).clamp(0.0, 1.0))
    }
}

// modified Lentz evaluation of the continued fraction for I_x(a, b)
fn beta_cf(x: f64, a: f64, b: f64) -> Option<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Some(h);
        }
    }
    None
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

/// Subinterval budget for [`integrate`].
pub const MAX_SEGMENTS: usize = 4000;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes, centre last
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = fc * K15_WEIGHTS[7];
    let mut gauss = fc * G7_WEIGHTS[3];
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += K15_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G7_WEIGHTS[i / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrate `f` over [lo, hi] to absolute tolerance `tol`.
///
/// Globally adaptive: the segment with the largest error estimate is bisected
/// until the summed estimate is within `tol`. Ties go to the leftmost segment,
/// so the result is deterministic.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Integral> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid("interval", format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let mut segs = vec![gauss_kronrod(&mut f, lo, hi)];
    let mut evaluations = 15;
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let abs_err: f64 = segs.iter().map(|s| s.err).sum();
        if !value.is_finite() {
            return Err(Error::IntegrationBudget {
                estimate: value,
                abs_err,
            });
        }
        if abs_err <= tol {
            return Ok(Integral {
                value,
                abs_err,
                evaluations,
            });
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::IntegrationBudget {
                estimate: value,
                abs_err,
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .fold(0, |w, (i, s)| if s.err > segs[w].err { i } else { w });
        let s = segs[worst];
        let mid = 0.5 * (s.lo + s.hi);
        if !(s.lo < mid && mid < s.hi) {
            return Err(Error::IntegrationBudget {
                estimate: value,
                abs_err,
            });
        }
        segs[worst] = gauss_kronrod(&mut f, s.lo, mid);
        segs.insert(worst + 1, gauss_kronrod(&mut f, mid, s.hi));
        evaluations += 30;
    }
}
