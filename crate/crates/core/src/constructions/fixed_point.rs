//! Acute probability of the nested construction as a function of the level
//! parameter p, and its maximum.
//!
//! The acute probability x solves x = 3(1-p)p² + (1-p)³x + (5/9)p³, where
//! 5/9 is the acute rate of three points at the same level and triples with
//! two shallow points are always acute.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SAME_LEVEL_ACUTE: f64 = 5.0 / 9.0;

/// Acute probability x(p) for p in (0, 1].
pub fn fixed_point_acute(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1], got {p}")));
    }
    // numerator and 1 - (1-p)^3 both carry a factor p
    let q = 1.0 - p;
    Ok((3.0 * q * p + SAME_LEVEL_ACUTE * p * p) / (3.0 - 3.0 * p + p * p))
}

// sign of x'(p): N'D - ND' with x = N/D after cancelling p
fn slope_sign_term(p: f64) -> f64 {
    let n = 3.0 * p * (1.0 - p) + SAME_LEVEL_ACUTE * p * p;
    let dn = 3.0 - 6.0 * p + 2.0 * SAME_LEVEL_ACUTE * p;
    let d = 3.0 - 3.0 * p + p * p;
    let dd = -3.0 + 2.0 * p;
    dn * d - n * dd
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOptimum {
    pub p: f64,
    pub acute: f64,
    pub obtuse: f64,
    pub iterations: u32,
}

/// Maximise x(p) over (0, 1).
pub fn maximize_acute() -> Result<FixedPointOptimum> {
    maximize_acute_in(0.0, 1.0)
}

/// Maximise x(p) over the bracket [lo, hi], which must contain the maximiser.
///
/// x is unimodal, so bisection on the sign of its slope shrinks the bracket
/// to 1e-12 without the sqrt(eps) floor of comparing function values.
pub fn maximize_acute_in(lo: f64, hi: f64) -> Result<FixedPointOptimum> {
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::invalid("bracket", format!("need 0 <= lo < hi <= 1, got [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    if slope_sign_term(a) <= 0.0 || slope_sign_term(b) >= 0.0 {
        return Err(Error::invalid("bracket", "does not contain the maximiser"));
    }
    let mut iterations = 0;
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if slope_sign_term(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
        iterations += 1;
    }
    let p = 0.5 * (a + b);
    let acute = fixed_point_acute(p)?;
    Ok(FixedPointOptimum {
        p,
        acute,
        obtuse: 1.0 - acute,
        iterations,
    })
}

/// x(p) on an even grid of `steps` + 1 points over [lo, hi] ∩ (0, 1].
pub fn scan(lo: f64, hi: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    if !(0.0 < lo && lo < hi && hi <= 1.0) || steps == 0 {
        return Err(Error::invalid("range", "need 0 < lo < hi <= 1 and steps > 0"));
    }
    (0..=steps)
        .map(|i| {
            let p = lo + (hi - lo) * i as f64 / steps as f64;
            Ok((p, fixed_point_acute(p)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert!((fixed_point_acute(1.0).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!(fixed_point_acute(1e-9).unwrap() < 1e-8);
        assert!(fixed_point_acute(0.0).is_err());
    }

    #[test]
    fn solves_the_fixed_point_equation() {
        for &p in &[0.1, 0.5, 0.8, 0.95] {
            let x = fixed_point_acute(p).unwrap();
            let q = 1.0 - p;
            let rhs = 3.0 * q * p * p + q * q * q * x + 5.0 / 9.0 * p * p * p;
            assert!((x - rhs).abs() < 1e-15, "p={p}");
        }
    }

    #[test]
    fn bad_bracket() {
        assert!(maximize_acute_in(0.9, 1.0).is_err());
        assert!(maximize_acute_in(0.5, 0.4).is_err());
    }
}
