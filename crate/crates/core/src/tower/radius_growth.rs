use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::certificate::ExponentClaim;
use super::{compute_c3, ExplicitC3};
use crate::error::{Error, Result};
use crate::geometry::ball_volume_exponential_floor;
use crate::matgroup::{BoundConstants, GroupContext};

/// Just below `π/2`, so `vol(B_r) >= c1 e^(2r)` holds once `r >= 6`.
pub const DEFAULT_C1: f64 = FRAC_PI_2 * 0.999;

/// Radius range sampled for the `c1` floor.
pub const C1_FLOOR_RANGE: (f64, f64) = (6.0, 50.0);

/// One inequality `lhs(l) >= rhs(l)` at a given `l`, and the `l` beyond which it always holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdSearch {
    pub statement: String,
    pub exponent: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub holds: bool,
    /// Smallest `l >= s` with the inequality holding on all of `[l, ∞)`.
    pub threshold: Option<f64>,
    /// Both sides grow at the same exponential rate; no threshold is guaranteed.
    pub marginal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusGrowthReport {
    pub l: f64,
    pub epsilon: f64,
    pub n: u32,
    pub c3: ExplicitC3,
    pub geodesic_count_exponent: f64,
    pub arithmetic: bool,
    pub base_covolume: f64,
    /// `ln X` with `X = 8 n² (c' l e^(g l))² ln² C3`, the index bound at `l`.
    pub log_index_bound: f64,
    pub radius_vs_index_bound: ThresholdSearch,
    pub ball_vs_volume_bound: ThresholdSearch,
    /// `e^r > index^(1/8 - ε)` with `r = l/2` (exponent `1/4 - ε` in the arithmetic case).
    pub radius_claim: ExponentClaim,
    /// `vol(B) > vol(M_i)^(1/4 - ε)` (exponent `1/2 - ε` in the arithmetic case).
    pub volume_claim: ExponentClaim,
    pub c1: f64,
    pub c1_floor_holds: bool,
    pub notes: Vec<String>,
}

struct Shape {
    /// `f(l) = k + slope·l - coeff·ln l`
    k: f64,
    slope: f64,
    coeff: f64,
}

impl Shape {
    fn eval(&self, l: f64) -> f64 {
        self.k + self.slope * l - self.coeff * l.ln()
    }

    /// `f` is convex with its minimum at `coeff / slope`, so it is nonincreasing
    /// up to that point and increasing after it.
    fn threshold(&self, s: f64) -> Option<f64> {
        if self.slope <= 1e-15 {
            return None;
        }
        let m = s.max(self.coeff / self.slope);
        if self.eval(m) >= 0.0 {
            return Some(s);
        }
        let mut hi = m.max(1.0) * 2.0;
        while self.eval(hi) < 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return None;
            }
        }
        Some(self.bisect(m, hi))
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Evaluates the two growth inequalities behind the ball/radius lower bounds
/// at cutoff `l`:
/// `e^(l/2) >= X^a` and `c1 e^l >= (v0 X)^b` with `(a, b) = (1/8 - ε/2, 1/4 - ε)`,
/// or `(1/4 - ε/2, 1/2 - ε)` when the geodesic count exponent is 1.
///
/// The injectivity radius entering here is the systole-derived one; it is
/// only as complete as the geodesic enumeration that produced the tower.
pub fn radius_growth_bounds(
    ctx: &GroupContext,
    consts: &BoundConstants,
    l: f64,
    epsilon: f64,
    base_covolume: f64,
    c1: f64,
) -> Result<RadiusGrowthReport> {
    let g = ctx.geodesic_count_exponent();
    let arithmetic = g <= 1.0;
    let base = if arithmetic { 0.25 } else { 0.125 };
    if !(epsilon >= 0.0 && epsilon < 2.0 * base) {
        return Err(Error::OutOfRange(format!("eps must lie in [0, {}), got {epsilon}", 2.0 * base)));
    }
    if !(l > 0.0 && base_covolume > 0.0 && c1 > 0.0) {
        return Err(Error::OutOfRange("l, covolume and c1 must be positive".into()));
    }
    let c3 = compute_c3(consts, ctx);
    let n = ctx.field().galois_closure_degree();
    let (a, b) = (base - epsilon / 2.0, 2.0 * base - epsilon);
    let cp = ctx.c_prime();
    // ln X = k_x + 2 ln l + 2 g l
    let k_x = 8f64.ln() + 2.0 * (n as f64).ln() + 2.0 * cp.ln() + 2.0 * c3.value.ln().ln();
    let log_x = |l: f64| k_x + 2.0 * l.ln() + 2.0 * g * l;
    let s = ctx.systole();

    let radius_shape = Shape { k: -a * k_x, slope: 0.5 - 2.0 * a * g, coeff: 2.0 * a };
    let ball_shape = Shape { k: c1.ln() - b * (base_covolume.ln() + k_x), slope: 1.0 - 2.0 * b * g, coeff: 2.0 * b };
    let search = |statement: &str, exponent: f64, lhs: f64, rhs: f64, shape: &Shape| ThresholdSearch {
        statement: statement.into(),
        exponent,
        log_lhs: lhs,
        log_rhs: rhs,
        holds: lhs >= rhs,
        threshold: shape.threshold(s),
        marginal: shape.slope <= 1e-15,
    };
    let lx = log_x(l);
    let radius_vs_index_bound = search("e^(l/2) >= X^a", a, l / 2.0, a * lx, &radius_shape);
    let ball_vs_volume_bound =
        search("c1 e^l >= (v0 X)^b", b, c1.ln() + l, b * (base_covolume.ln() + lx), &ball_shape);
    let re = base - epsilon;
    let ve = 2.0 * base - epsilon;
    let radius_claim = ExponentClaim::compare(format!("e^r > index^{re}"), re, l / 2.0, re * lx);
    let volume_claim =
        ExponentClaim::compare(format!("vol(B) > vol^{ve}"), ve, c1.ln() + l, ve * (base_covolume.ln() + lx));
    let c1_floor_holds = ball_volume_exponential_floor(c1, C1_FLOOR_RANGE.0, C1_FLOOR_RANGE.1, 2000);
    let mut notes =
        vec!["injectivity radius taken from the enumeration-relative systole bound".to_string()];
    if radius_vs_index_bound.marginal {
        notes.push("radius inequality is asymptotically marginal at this eps".into());
    }
    if l / 2.0 < C1_FLOOR_RANGE.0 {
        notes.push(format!("r = {} is below the radius where the c1 floor was checked", l / 2.0));
    }
    Ok(RadiusGrowthReport {
        l,
        epsilon,
        n,
        c3,
        geodesic_count_exponent: g,
        arithmetic,
        base_covolume,
        log_index_bound: lx,
        radius_vs_index_bound,
        ball_vs_volume_bound,
        radius_claim,
        volume_claim,
        c1,
        c1_floor_holds,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::Mat2;
    use crate::quadfield::FieldSpec;

    fn ctx() -> GroupContext {
        let q = FieldSpec::eisenstein();
        GroupContext::new(q, vec![Mat2::parse(q, "[[1,1],[0,1]]").unwrap()]).unwrap()
    }

    const UNIT: BoundConstants = BoundConstants { c1: 1.0, c2: 1.0, c3: None };

    #[test]
    fn finite_threshold_and_flip() {
        let r = radius_growth_bounds(&ctx(), &UNIT, 1.0, 0.1, 1.0, DEFAULT_C1).unwrap();
        let t = r.radius_vs_index_bound.threshold.unwrap();
        assert!(t.is_finite() && t >= 1.0);
        let at = |l: f64| radius_growth_bounds(&ctx(), &UNIT, l, 0.1, 1.0, DEFAULT_C1).unwrap();
        assert!(at(t * 1.001).radius_vs_index_bound.holds);
        if t > 1.0 {
            assert!(!at(t * 0.999).radius_vs_index_bound.holds);
        }
        assert!(r.c1_floor_holds);
    }

    #[test]
    fn zero_eps_is_marginal() {
        let r = radius_growth_bounds(&ctx(), &UNIT, 5.0, 0.0, 1.0, DEFAULT_C1).unwrap();
        assert!(r.radius_vs_index_bound.marginal);
        assert_eq!(r.radius_vs_index_bound.threshold, None);
    }

    #[test]
    fn threshold_brute_force() {
        let shape = Shape { k: -3.0, slope: 0.2, coeff: 1.0 };
        let t = shape.threshold(1.0).unwrap();
        let mut l = t;
        while l < 1e4 {
            assert!(shape.eval(l) >= -1e-9, "{l}");
            l *= 1.01;
        }
        assert!(shape.eval(t * 0.99) < 0.0);
        let easy = Shape { k: 10.0, slope: 0.2, coeff: 1.0 };
        assert_eq!(easy.threshold(1.0), Some(1.0));
    }
}
