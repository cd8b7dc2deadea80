//! Exact lower bounds on the number of non-acute triangles.
//!
//! Starting from the largest acute-free base size in dimension d, each added
//! point forces `t(n+1) = ceil(t(n) (n+1) / (n-2))` non-acute triples. All
//! arithmetic is on big integers so the trajectory can run to n = 10^6 and beyond.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BigCount = BigUint;

/// Correction term of the 3D closed form, indexed by n mod 11.
pub const K_TABLE: [i64; 11] = [0, 2, 4, 5, 4, 0, 3, 1, 4, 0, -1];

/// C(n, 3) as a big integer.
pub fn binom3(n: u64) -> BigCount {
    if n < 3 {
        return BigCount::zero();
    }
    let n = BigUint::from(n);
    let m1 = &n - 1u32;
    let m2 = &n - 2u32;
    n * m1 * m2 / 6u32
}

/// One step of the recurrence: the forced count at n+1 from the count at n.
pub fn recursion_step(t: &BigCount, n: u64) -> Result<BigCount> {
    if n < 3 {
        return Err(Error::invalid("n", format!("recurrence needs n >= 3, got {n}")));
    }
    // ceil(t (n+1) / (n-2)) without leaving the integers
    let num = t * (n + 1) + (n - 3);
    Ok(num / (n - 2))
}

/// Forced count in the plane: (C(n,3) - floor(n/3)) / 3, for n >= 4.
pub fn closed_form_2d(n: u64) -> Result<BigCount> {
    if n < 4 {
        return Err(Error::invalid("n", format!("planar closed form needs n >= 4, got {n}")));
    }
    let num = binom3(n) - BigUint::from(n / 3);
    let (q, r) = num.div_rem(&BigUint::from(3u32));
    if !r.is_zero() {
        return Err(Error::Invariant(format!("planar closed form not integral at n={n}")));
    }
    Ok(q)
}

/// Forced count in space: (C(n,3) - 2n + k[n mod 11]) / 11, for n >= 6.
pub fn closed_form_3d(n: u64) -> Result<BigCount> {
    if n < 6 {
        return Err(Error::invalid("n", format!("spatial closed form needs n >= 6, got {n}")));
    }
    let num = BigInt::from(binom3(n)) - BigInt::from(2 * n) + BigInt::from(K_TABLE[(n % 11) as usize]);
    let (q, r) = num.div_rem(&BigInt::from(11));
    if !r.is_zero() {
        return Err(Error::Invariant(format!("spatial closed form not integral at n={n}")));
    }
    q.to_biguint()
        .ok_or_else(|| Error::Invariant(format!("negative closed form at n={n}")))
}

/// Largest acute-free size and its forced count in dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCase {
    pub d: u32,
    pub n_start: u64,
    pub t_start: u64,
}

impl BaseCase {
    pub fn for_dim(d: u32) -> Result<Self> {
        let n_start = match d {
            0 | 1 => return Err(Error::DimensionTooSmall { min: 2, got: d as usize }),
            2 => 4,
            3 => 6,
            4..=63 => 1u64 << d,
            _ => return Err(Error::invalid("d", format!("base size 2^{d} does not fit in u64"))),
        };
        Ok(BaseCase { d, n_start, t_start: 1 })
    }
}

/// Forced count `t_n` at size `n` together with C(n,3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRecord {
    pub d: u32,
    pub n: u64,
    pub t_n: BigCount,
    pub triples: BigCount,
}

impl BoundRecord {
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.t_n.clone().into(), self.triples.clone().into())
    }

    pub fn ratio_f64(&self) -> f64 {
        ratio_to_f64(&self.t_n, &self.triples)
    }
}

/// Correctly scaled float value of `num/den` even when both overflow f64.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits().max(num.bits()).saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Iterator over the bound trajectory from the base case upward.
#[derive(Debug, Clone)]
pub struct Trajectory {
    d: u32,
    n: u64,
    t: BigCount,
    n_max: u64,
}

impl Trajectory {
    pub fn new(d: u32, n_max: u64) -> Result<Self> {
        let base = BaseCase::for_dim(d)?;
        if n_max < base.n_start {
            return Err(Error::invalid(
                "n_max",
                format!("must be at least the base size {}", base.n_start),
            ));
        }
        Ok(Trajectory {
            d,
            n: base.n_start,
            t: BigCount::from(base.t_start),
            n_max,
        })
    }
}

impl Iterator for Trajectory {
    type Item = BoundRecord;

    fn next(&mut self) -> Option<BoundRecord> {
        if self.n > self.n_max {
            return None;
        }
        let rec = BoundRecord {
            d: self.d,
            n: self.n,
            t_n: self.t.clone(),
            triples: binom3(self.n),
        };
        if self.n < self.n_max {
            self.t = recursion_step(&self.t, self.n).expect("n >= 4 on every trajectory");
        }
        self.n += 1;
        Some(rec)
    }
}

/// Limit of the trajectory at `n_max` with a rigorous envelope above it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitBound {
    pub d: u32,
    pub base_n: u64,
    pub n_max: u64,
    #[serde(with = "biguint_str")]
    pub t_n: BigCount,
    pub lower_bound: f64,
    pub upper_envelope: f64,
    pub asymptotic: f64,
    pub naive: f64,
}

/// Run the recurrence to `n_max`, checking monotonicity exactly at every step.
pub fn limit_bound(d: u32, n_max: u64) -> Result<LimitBound> {
    let base = BaseCase::for_dim(d)?;
    if n_max < base.n_start {
        return Err(Error::invalid(
            "n_max",
            format!("must be at least the base size {}", base.n_start),
        ));
    }
    let mut t = BigCount::from(base.t_start);
    for n in base.n_start..n_max {
        let next = recursion_step(&t, n)?;
        // t(n+1)/C(n+1,3) >= t(n)/C(n,3)  <=>  t(n+1) (n-2) >= t(n) (n+1)
        if &next * (n - 2) < &t * (n + 1) {
            return Err(Error::Invariant(format!("bound ratio decreased at n={n}")));
        }
        t = next;
    }
    let triples = binom3(n_max);
    if t > triples {
        return Err(Error::Invariant(format!("forced count exceeds C(n,3) at n={n_max}")));
    }
    let lower_bound = ratio_to_f64(&t, &triples);
    let tail = if n_max >= 3 {
        3.0 / ((n_max - 1) as f64 * (n_max - 2) as f64)
    } else {
        f64::INFINITY
    };
    Ok(LimitBound {
        d,
        base_n: base.n_start,
        n_max,
        t_n: t,
        lower_bound,
        upper_envelope: (lower_bound + tail).min(1.0),
        asymptotic: rational_to_f64(&asymptotic_bound(d)?),
        naive: rational_to_f64(&naive_bound(d)?),
    })
}

/// Closed-form limit 3 / ((2^d - 1)(2^d - 2)) of the recurrence started at 2^d points.
pub fn asymptotic_bound(d: u32) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d as usize });
    }
    let n = BigInt::one() << d;
    let den = (&n - 1) * (&n - 2);
    Ok(BigRational::new(BigInt::from(3), den))
}

/// One forced non-acute triple among C(N, 3), with N the base size for d.
pub fn naive_bound(d: u32) -> Result<BigRational> {
    let base = BaseCase::for_dim(d)?;
    Ok(BigRational::new(BigInt::one(), BigInt::from(binom3(base.n_start))))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let neg = r.numer() < &BigInt::zero();
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let v = ratio_to_f64(num, den);
    if neg {
        -v
    } else {
        v
    }
}

mod biguint_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
