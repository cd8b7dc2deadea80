//! Obtuse probability for three independent uniform points on S^{d-1}.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::special_fn::{integrate, ln_gamma, reg_inc_beta_split};

/// Default absolute tolerance for [`obtuse_prob_sphere`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

fn check_dim(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d as usize });
    }
    Ok(())
}

/// P(obtuse | the first two points are at angle `theta`) on S^{d-1}.
///
/// Each of the three obtuse events is the third point landing in a spherical
/// cap, and cap masses are incomplete beta values.
pub fn obtuse_given_angle(theta: f64, d: u32) -> Result<f64> {
    check_dim(d)?;
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::invalid("theta", format!("must lie in [0, pi], got {theta}")));
    }
    let a = 0.5 * (d as f64 - 1.0);
    let (s, c) = (0.5 * theta).sin_cos();
    let (sin2, cos2) = (s * s, c * c);
    // obtuse at the third point: one cap about the pair's midpoint direction
    let at_third = 0.5 * reg_inc_beta_split(sin2, cos2, a, 0.5)?;
    // obtuse at either of the pair: two equal caps
    let at_pair = reg_inc_beta_split(cos2, sin2, a, 0.5)?;
    Ok((at_third + at_pair).clamp(0.0, 1.0))
}

/// ln of the normaliser ∫_0^π sin^{d-2}θ dθ = √π Γ((d-1)/2) / Γ(d/2).
fn ln_angle_norm(d: u32) -> Result<f64> {
    let d = d as f64;
    Ok(0.5 * std::f64::consts::PI.ln() + ln_gamma(0.5 * (d - 1.0))? - ln_gamma(0.5 * d)?)
}

/// Density of the angle between two uniform points on S^{d-1}.
pub fn angle_density(theta: f64, d: u32) -> Result<f64> {
    check_dim(d)?;
    if d == 2 {
        return Ok(std::f64::consts::FRAC_1_PI);
    }
    let ln_norm = ln_angle_norm(d)?;
    Ok(((d as f64 - 2.0) * theta.sin().ln() - ln_norm).exp())
}

/// P(three uniform points on S^{d-1} form an obtuse triangle), by quadrature.
pub fn obtuse_prob_sphere(d: u32, tol: f64) -> Result<f64> {
    check_dim(d)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let ln_norm = if d == 2 { std::f64::consts::PI.ln() } else { ln_angle_norm(d)? };
    let power = d as f64 - 2.0;
    let mut failure = None;
    let integrand = |theta: f64| {
        let w = if power == 0.0 {
            (-ln_norm).exp()
        } else {
            (power * theta.sin().ln() - ln_norm).exp()
        };
        if w == 0.0 {
            return 0.0;
        }
        match obtuse_given_angle(theta, d) {
            Ok(p) => p * w,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate(integrand, 0.0, std::f64::consts::PI, tol);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r?.value.clamp(0.0, 1.0))
}

/// Large-d approximation (3/2) I_{1/2}((d-1)/2, 1/2), exact angle θ = π/2.
pub fn asymptotic_sphere(d: u32) -> Result<f64> {
    check_dim(d)?;
    Ok(1.5 * reg_inc_beta_split(0.5, 0.5, 0.5 * (d as f64 - 1.0), 0.5)?)
}

/// A uniform point on S^{d-1}: a normalised standard Gaussian vector.
pub fn sample_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let mut v = vec![0.0; d];
    sample_sphere_into(&mut v, rng);
    v
}

pub fn sample_sphere_into<R: Rng + ?Sized>(out: &mut [f64], rng: &mut R) {
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let inv = 1.0 / norm2.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_three_quarters() {
        assert!((obtuse_prob_sphere(2, 1e-12).unwrap() - 0.75).abs() < 1e-10);
    }

    #[test]
    fn two_sphere_is_half() {
        assert!((obtuse_prob_sphere(3, 1e-12).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn given_angle_on_two_sphere() {
        // on S^2, I_x(1, 1/2) = 1 - sqrt(1 - x)
        for &t in &[0.3f64, 1.0, 2.0, 3.0] {
            let want = 0.5 * (1.0 - (0.5 * t).cos()) + 1.0 - (0.5 * t).sin();
            let got = obtuse_given_angle(t, 3).unwrap();
            assert!((got - want).abs() < 1e-14, "theta={t}");
        }
        assert!((obtuse_given_angle(std::f64::consts::PI, 3).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_dim() {
        assert!(obtuse_prob_sphere(1, 1e-12).is_err());
        assert!(asymptotic_sphere(0).is_err());
    }

    #[test]
    fn samples_are_unit() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for d in [2, 3, 10] {
            let v = sample_sphere(d, &mut rng);
            let n: f64 = v.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }
}
