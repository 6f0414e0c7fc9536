//! Hyperbolic geometry in the upper half-space model: isometry types, complex
//! translation lengths, orbit distances, ball volumes and genus bounds.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadfield::QuadRat;

/// Absolute tolerance used when deciding whether a floating trace is real or equal to ±2.
pub const TRACE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Classifies from the (sign-ambiguous) trace. A trace of ±2 is parabolic
/// unless the caller knows the matrix is `±I`.
pub fn classify(trace: Complex64, is_identity: Option<bool>) -> IsometryClass {
    classify_with_tolerance(trace, is_identity, TRACE_TOLERANCE)
}

pub fn classify_with_tolerance(trace: Complex64, is_identity: Option<bool>, tol: f64) -> IsometryClass {
    if trace.im.abs() > tol {
        return IsometryClass::Loxodromic;
    }
    let x = trace.re.abs();
    if (x - 2.0).abs() <= tol {
        if is_identity == Some(true) {
            IsometryClass::Identity
        } else {
            IsometryClass::Parabolic
        }
    } else if x < 2.0 {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Loxodromic
    }
}

/// Exact classification of an element of `PSL_2(K)` from its trace.
pub fn classify_exact(trace: &QuadRat, is_identity: Option<bool>) -> IsometryClass {
    if !trace.is_rational() {
        return IsometryClass::Loxodromic;
    }
    // rational trace a/q: compare a^2 with 4 q^2
    let a = trace.num().a();
    let q = trace.den_int();
    let (lhs, rhs) = (a * a, 4 * q * q);
    if lhs == rhs {
        if is_identity == Some(true) {
            IsometryClass::Identity
        } else {
            IsometryClass::Parabolic
        }
    } else if lhs < rhs {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Loxodromic
    }
}

/// `λ = ℓ + iθ` with `2 cosh(λ/2) = ±trace`, `ℓ >= 0`, `θ ∈ (-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexLength {
    pub length: f64,
    pub rotation: f64,
}

fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

pub fn translation_length(trace: Complex64) -> Result<ComplexLength> {
    if classify(trace, None) != IsometryClass::Loxodromic {
        return Err(Error::NotLoxodromic(format!("trace {trace}")));
    }
    let mut lambda = (trace / 2.0).acosh() * 2.0;
    if lambda.re < 0.0 {
        lambda = -lambda;
    }
    Ok(ComplexLength { length: lambda.re, rotation: normalize_angle(lambda.im) })
}

impl ComplexLength {
    /// `2 cosh(λ/2)`, one of the two traces with this complex length.
    pub fn trace(&self) -> Complex64 {
        (Complex64::new(self.length, self.rotation) / 2.0).cosh() * 2.0
    }
}

/// The point `z + t j` of upper half-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    pub z: Complex64,
    pub t: f64,
}

impl UpperHalfPoint {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::OutOfRange(format!("height must be positive, got {t}")));
        }
        Ok(Self { z, t })
    }

    /// The point `t j` on the vertical axis.
    pub fn on_axis(t: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), t)
    }
}

/// `cosh` of the hyperbolic distance between two points.
pub fn cosh_distance(p: &UpperHalfPoint, q: &UpperHalfPoint) -> f64 {
    1.0 + ((p.z - q.z).norm_sqr() + (p.t - q.t).powi(2)) / (2.0 * p.t * q.t)
}

/// Action of `[[a, b], [c, d]]` (determinant 1) on upper half-space.
pub fn mobius_action(m: &[Complex64; 4], p: &UpperHalfPoint) -> UpperHalfPoint {
    let [a, b, c, d] = *m;
    let (z, t) = (p.z, p.t);
    let czd = c * z + d;
    let den = czd.norm_sqr() + c.norm_sqr() * t * t;
    let num = (a * z + b) * czd.conj() + a * c.conj() * t * t;
    UpperHalfPoint { z: num / den, t: t / den }
}

/// `cosh d(γ(tj), tj)` in closed form for a point on the vertical axis.
pub fn orbit_cosh_distance(m: &[Complex64; 4], t: f64) -> f64 {
    let [a, b, c, d] = *m;
    let t2 = t * t;
    let x = d.norm_sqr() + c.norm_sqr() * t2;
    (b * d.conj() + a * c.conj() * t2).norm_sqr() / (2.0 * t2 * x) + (1.0 - x).powi(2) / (2.0 * x) + 1.0
}

/// `cosh d(γ(p), p)` for an arbitrary point, via the Möbius action.
pub fn orbit_cosh_distance_general(m: &[Complex64; 4], p: &UpperHalfPoint) -> f64 {
    cosh_distance(&mobius_action(m, p), p)
}

/// Volume of a hyperbolic ball of radius `r`: `π(sinh 2r - 2r)`.
pub fn ball_volume(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::OutOfRange(format!("ball radius must be non-negative, got {r}")));
    }
    if r < 1e-3 {
        // sinh 2r - 2r = (2r)^3/6 + (2r)^5/120 + ...
        let x = 2.0 * r;
        return Ok(PI * (x.powi(3) / 6.0 + x.powi(5) / 120.0 + x.powi(7) / 5040.0));
    }
    Ok(PI * ((2.0 * r).sinh() - 2.0 * r))
}

/// `d/dr π(sinh 2r - 2r) = 2π(cosh 2r - 1)`.
pub fn ball_volume_derivative(r: f64) -> f64 {
    2.0 * PI * ((2.0 * r).cosh() - 1.0)
}

/// Heegaard genus lower bound `cosh(r) / 2` from an injectivity-radius lower bound `r`.
pub fn genus_lower_bound(r: f64) -> f64 {
    0.5 * r.cosh()
}

/// `arccosh(x / 2) = ln((x + sqrt(x^2 - 4)) / 2)` for `x >= 2`.
pub fn arccosh_half(x: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(Error::OutOfRange(format!("arccosh(x/2) needs x >= 2, got {x}")));
    }
    Ok(((x + (x * x - 4.0).sqrt()) / 2.0).ln())
}

/// The logarithmic lower bound `ln(sqrt(y) - 1) / 2` for `arccosh(sqrt(y)/2) / 2`, `y >= 4`.
pub fn half_arccosh_log_bound(y: f64) -> Result<f64> {
    if !(y >= 4.0) {
        return Err(Error::OutOfRange(format!("log bound needs y >= 4, got {y}")));
    }
    Ok(0.5 * (y.sqrt() - 1.0).ln())
}

/// Checks `ball_volume(r) >= c1 e^{2r}` on a grid of `samples` radii in `[r_min, r_max]`.
pub fn ball_volume_exponential_floor(c1: f64, r_min: f64, r_max: f64, samples: usize) -> bool {
    (0..samples.max(2)).all(|i| {
        let r = r_min + (r_max - r_min) * i as f64 / (samples.max(2) - 1) as f64;
        // compare in log space to stay finite for large r
        let v = ball_volume(r).unwrap();
        v.ln() >= c1.ln() + 2.0 * r
    })
}
