use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An imaginary quadratic field `K = Q(sqrt(-d))` together with the integral
/// basis `{1, w}` of its ring of integers.
///
/// `w = sqrt(-d)` when `-d ≢ 1 (mod 4)` and `w = (1 + sqrt(-d)) / 2` otherwise,
/// so `w` is a root of `x^2 - t x + n` with `(t, n) = (0, d)` or `(1, (1 + d) / 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    d: u64,
}

impl FieldSpec {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 || !is_square_free(d) {
            return Err(Error::InvalidField(d));
        }
        Ok(Self { d })
    }

    /// `Q(i)`, the field of the Picard group.
    pub fn gaussian() -> Self {
        Self { d: 1 }
    }

    /// `Q(sqrt(-3))`, the field of the figure-eight knot group.
    pub fn eisenstein() -> Self {
        Self { d: 3 }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// True when `w = (1 + sqrt(-d)) / 2`.
    pub fn omega_is_half_integral(&self) -> bool {
        self.d % 4 == 3
    }

    pub fn discriminant(&self) -> i64 {
        if self.omega_is_half_integral() {
            -(self.d as i64)
        } else {
            -4 * self.d as i64
        }
    }

    /// Degree of the Galois closure over Q.
    pub fn galois_closure_degree(&self) -> u32 {
        2
    }

    /// `[K : Q]`.
    pub fn degree(&self) -> u32 {
        2
    }

    /// Trace of `w`, i.e. `t` in `w^2 = t w - n`.
    pub fn omega_trace(&self) -> i128 {
        if self.omega_is_half_integral() {
            1
        } else {
            0
        }
    }

    /// Norm of `w`, i.e. `n` in `w^2 = t w - n`.
    pub fn omega_norm(&self) -> i128 {
        if self.omega_is_half_integral() {
            (1 + self.d as i128) / 4
        } else {
            self.d as i128
        }
    }

    /// The image of `w` under the embedding with positive imaginary part.
    pub fn omega_complex(&self) -> Complex64 {
        let root = (self.d as f64).sqrt();
        if self.omega_is_half_integral() {
            Complex64::new(0.5, root / 2.0)
        } else {
            Complex64::new(0.0, root)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;

    fn try_from(d: u64) -> Result<Self> {
        Self::new(d)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.d
    }
}

fn is_square_free(n: u64) -> bool {
    let mut m = n;
    let mut q = 2u64;
    while q.saturating_mul(q) <= m {
        if m % q == 0 {
            m /= q;
            if m % q == 0 {
                return false;
            }
        }
        q += 1;
    }
    true
}
