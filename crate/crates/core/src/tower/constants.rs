use serde::{Deserialize, Serialize};

use crate::congruence::CongruenceKind;
use crate::matgroup::{BoundConstants, GroupContext};

/// Relative margin folded into `C3` so the defining inequality is strict.
pub const C3_MARGIN: f64 = 1e-9;

/// `C3 = 2^(1/s) (2 C1 C2)^(c' m) (1 + δ)`, so that `C3^l > 2 (2 C1 C2)^(c' l m)`
/// for every `l >= s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitC3 {
    pub value: f64,
    pub c1: f64,
    pub c2: f64,
    pub c_prime: f64,
    pub m: u32,
    pub s: f64,
}

impl ExplicitC3 {
    /// `l ln C3 - ln(2 (2 C1 C2)^(c' l m))`; positive when the inequality holds at `l`.
    pub fn log_margin(&self, l: f64) -> f64 {
        l * self.value.ln()
            - (std::f64::consts::LN_2 + self.c_prime * l * self.m as f64 * (2.0 * self.c1 * self.c2).ln())
    }
}

pub fn compute_c3(consts: &BoundConstants, ctx: &GroupContext) -> ExplicitC3 {
    let m = ctx.field().degree();
    let s = ctx.systole();
    let cp = ctx.c_prime();
    let value = 2f64.powf(1.0 / s) * (2.0 * consts.c1 * consts.c2).powf(cp * m as f64) * (1.0 + C3_MARGIN);
    ExplicitC3 { value, c1: consts.c1, c2: consts.c2, c_prime: cp, m, s }
}

/// Constants of the orbit-displacement bound for a congruence subgroup of a
/// Bianchi group, and the resulting lower bound on `cosh d(γζ, ζ)` at
/// `ζ = t j`, `t = (C2 / C1)^(1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementBound {
    pub kind: CongruenceKind,
    pub norm: f64,
    /// Lower bound on `|c|` for members not fixing infinity.
    pub c1: f64,
    /// Lower bound on `|b|` for parabolic members fixing infinity.
    pub c2: f64,
    pub cosh_bound: f64,
    pub t: f64,
    /// True when `cosh_bound <= 1`, so no positive radius follows.
    pub degenerate: bool,
}

/// Nonzero `c` (and, for the principal kind, `b`) lie in `I`, so their
/// absolute values are at least `N(I)^(1/2)`; parabolic `b` in the Hecke
/// kinds is only known to be a nonzero integer.
pub fn displacement_bound(kind: CongruenceKind, norm: f64) -> DisplacementBound {
    let root = norm.sqrt();
    let (c1, c2) = match kind {
        CongruenceKind::Hecke0 | CongruenceKind::Hecke1 => (root, 1.0),
        CongruenceKind::Principal => (root, root),
    };
    let cosh_bound = c1 * c2 / 2.0;
    DisplacementBound { kind, norm, c1, c2, cosh_bound, t: (c2 / c1).sqrt(), degenerate: cosh_bound <= 1.0 }
}
