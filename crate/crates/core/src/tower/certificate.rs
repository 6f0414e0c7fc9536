use num_bigint::BigUint;
use serde::Serialize;

use super::displacement_bound;
use crate::congruence::{index_formula_from_norms, CongruenceKind};
use crate::error::Result;
use crate::geometry::{arccosh_half, ball_volume, genus_lower_bound, half_arccosh_log_bound};
use crate::quadfield::SquareFreeIdeal;
use crate::spectrum::big_ln;

fn big_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// `lhs >= rhs`, carried in log space so huge indices stay finite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentClaim {
    pub statement: String,
    pub exponent: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    /// For claims of the form `vol(B) > c · X^e`: the constant `c` realised here.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    pub holds: bool,
}

impl ExponentClaim {
    pub fn compare(statement: impl Into<String>, exponent: f64, log_lhs: f64, log_rhs: f64) -> Self {
        Self { statement: statement.into(), exponent, log_lhs, log_rhs, constant: None, holds: log_lhs >= log_rhs }
    }

    /// `lhs > c · base^exponent` with `c = lhs / base^exponent`, holding when `c > 0`.
    pub fn constant(statement: impl Into<String>, exponent: f64, log_lhs: f64, log_base: f64) -> Self {
        let log_rhs = exponent * log_base;
        let c = (log_lhs - log_rhs).exp();
        Self {
            statement: statement.into(),
            exponent,
            log_lhs,
            log_rhs,
            constant: Some(c),
            holds: c > 0.0 && c.is_finite(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurjectivityStatus {
    /// Closure of the reduced generators computed and equal to `PSL_2`.
    Verified,
    /// Residue field too large for a closure; index formulas used as stated.
    FormulaAssumed,
    /// Closure is a proper subgroup; the index is only an upper bound.
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DepthSemantics {
    pub depth: usize,
    pub cutoff: f64,
}

/// How close the genus bound comes to the volume-exponent ceiling of 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CeilingCheck {
    /// `ln(genus_lb) / ln(covolume)`, when the covolume exceeds 1.
    pub effective_exponent: Option<f64>,
    /// `vol^(1/2) / (4 sqrt(π))`, the genus reached by an embedded ball filling the volume.
    pub heuristic_genus_cap: f64,
    pub within_ceiling: bool,
}

impl CeilingCheck {
    pub fn new(genus_lb: f64, log_covolume: f64) -> Self {
        let effective_exponent = (log_covolume > 0.0).then(|| genus_lb.ln() / log_covolume);
        Self {
            effective_exponent,
            heuristic_genus_cap: (0.5 * log_covolume).exp() / (4.0 * std::f64::consts::PI.sqrt()),
            within_ceiling: effective_exponent.map_or(true, |e| e <= 0.5),
        }
    }
}

/// Injectivity radius, genus and ball-volume lower bounds for one congruence
/// cover, with the exponent inequalities they certify.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub kind: CongruenceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<SquareFreeIdeal>,
    pub ideal_label: String,
    pub ideal_norm: f64,
    pub log_ideal_norm: f64,
    /// Index from the closed formulas, an upper bound if surjectivity failed.
    #[serde(serialize_with = "big_string")]
    pub index_upper_bound: BigUint,
    pub log_index: f64,
    /// Closed-form degree bound: `∏(N+1)`, `N^2/2` or `N^3/2` by kind.
    pub degree_bound: f64,
    pub base_degree: u64,
    pub base_covolume: f64,
    pub log_covolume: f64,
    pub cosh_bound: f64,
    pub inj_radius_lb: f64,
    /// `ln(sqrt(N) - 1)/2`-style lower bound on the radius, when `N >= 4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inj_radius_log_form: Option<f64>,
    /// `cosh(r) / 2`.
    pub genus_from_radius: f64,
    /// The closed-form genus bound used in the exponent claim (never above `genus_from_radius`).
    pub genus_lb: f64,
    pub ball_volume_lb: f64,
    pub exponent_claim: ExponentClaim,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_claim: Option<ExponentClaim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_semantics: Option<DepthSemantics>,
    pub surjectivity: SurjectivityStatus,
    pub ceiling: CeilingCheck,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl BoundCertificate {
    /// Recomputes the radius-derived fields; `None` when consistent to `tol`.
    pub fn consistency_error(&self, tol: f64) -> Option<String> {
        let g = genus_lower_bound(self.inj_radius_lb);
        let v = ball_volume(self.inj_radius_lb).ok()?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        if rel(g, self.genus_from_radius) > tol {
            return Some(format!("genus {} vs cosh(r)/2 = {g}", self.genus_from_radius));
        }
        if rel(v, self.ball_volume_lb) > tol {
            return Some(format!("ball volume {} vs recomputed {v}", self.ball_volume_lb));
        }
        if self.genus_lb > self.genus_from_radius * (1.0 + tol) {
            return Some("closed-form genus bound exceeds cosh(r)/2".into());
        }
        if self.passed && !self.exponent_claim.holds {
            return Some("marked PASS with a failing exponent claim".into());
        }
        None
    }
}

/// Radius, genus and volume lower bounds from a lower bound `x` on `cosh d(γζ, ζ)`.
///
/// `r = arccosh(x)/2`; the genus bound is stated as `sqrt(x/2)/2`, which is
/// below `cosh(r)/2 = sqrt((x+1)/2)/2`.
pub fn radius_chain(cosh_bound: f64) -> (f64, f64, f64, f64) {
    let r = if cosh_bound > 1.0 { 0.5 * arccosh_half(2.0 * cosh_bound).unwrap() } else { 0.0 };
    let genus_lb = 0.5 * (cosh_bound / 2.0).sqrt();
    (r, genus_from(r), genus_lb, ball_volume(r).unwrap())
}

fn genus_from(r: f64) -> f64 {
    genus_lower_bound(r)
}

/// `vol(B) / (N^3/2)^(1/3)` for the principal subgroup of norm `N`.
pub fn principal_volume_constant(norm: f64) -> f64 {
    let (_, _, _, ball) = radius_chain(displacement_bound(CongruenceKind::Principal, norm).cosh_bound);
    ball / (0.5 * norm.powi(3)).cbrt()
}

fn degree_bound(kind: CongruenceKind, norms: &[u128]) -> f64 {
    let n: f64 = norms.iter().map(|&q| q as f64).product();
    match kind {
        CongruenceKind::Hecke0 => norms.iter().map(|&q| q as f64 + 1.0).product(),
        CongruenceKind::Hecke1 => 0.5 * n * n,
        CongruenceKind::Principal => 0.5 * n * n * n,
    }
}

/// Certificate for `Γ'_kind(I)` inside a Bianchi group: displacement bound,
/// radius, genus, ball volume, and the exponent claims for the kind
/// (`genus >= (d·index)^(1/4-ε)` and `vol(B) > vol^(1/2-ε)` for Hecke0,
/// the constants `vol(B) / degree^(1/4)` and `vol(B) / degree^(1/3)` for
/// Hecke1 and principal).
pub fn genus_ball_certificate(
    kind: CongruenceKind,
    ideal: &SquareFreeIdeal,
    base_degree: u64,
    base_covolume: f64,
    epsilon: f64,
) -> Result<BoundCertificate> {
    let norms: Vec<u128> = ideal.factors().iter().map(|p| p.norm()).collect();
    let mut cert = certificate_from_norms(kind, &norms, base_degree, base_covolume, epsilon)?;
    cert.ideal = Some(ideal.clone());
    cert.ideal_label = ideal.to_string();
    Ok(cert)
}

/// As [`genus_ball_certificate`], from the factor norms alone.
pub fn certificate_from_norms(
    kind: CongruenceKind,
    norms: &[u128],
    base_degree: u64,
    base_covolume: f64,
    epsilon: f64,
) -> Result<BoundCertificate> {
    let index = index_formula_from_norms(kind, norms.iter().copied())?;
    let log_norm: f64 = norms.iter().map(|&q| (q as f64).ln()).sum();
    let norm = log_norm.exp();
    let log_index = big_ln(&index);
    let log_degree = (base_degree as f64).ln() + log_index;
    let log_covolume = base_covolume.ln() + log_degree;
    let bound = displacement_bound(kind, norm);
    let (r, genus_from_radius, genus_lb, ball) = radius_chain(bound.cosh_bound);
    let mut notes = Vec::new();
    if bound.degenerate {
        notes.push(format!("cosh bound {} <= 1 gives no positive radius", bound.cosh_bound));
    }
    let inj_radius_log_form = match kind {
        CongruenceKind::Principal => None,
        _ => half_arccosh_log_bound(norm).ok(),
    };
    let deg_bound = degree_bound(kind, norms);
    let (exponent_claim, volume_claim) = match kind {
        CongruenceKind::Hecke0 => {
            let e = 0.25 - epsilon;
            (
                ExponentClaim::compare("genus >= (d * index)^(1/4 - eps)", e, genus_lb.ln(), e * log_degree),
                Some(ExponentClaim::compare(
                    "vol(B) > covolume^(1/2 - eps)",
                    0.5 - epsilon,
                    ball.ln(),
                    (0.5 - epsilon) * log_covolume,
                )),
            )
        }
        CongruenceKind::Hecke1 => (
            ExponentClaim::constant("vol(B) > c * degree^(1/4)", 0.25, ball.ln(), deg_bound.ln()),
            None,
        ),
        CongruenceKind::Principal => (
            ExponentClaim::constant("vol(B) > c * degree^(1/3)", 1.0 / 3.0, ball.ln(), deg_bound.ln()),
            None,
        ),
    };
    let passed = exponent_claim.holds && volume_claim.as_ref().map_or(true, |c| c.holds);
    Ok(BoundCertificate {
        kind,
        ideal: None,
        ideal_label: format!("norms {norms:?}"),
        ideal_norm: norm,
        log_ideal_norm: log_norm,
        index_upper_bound: index,
        log_index,
        degree_bound: deg_bound,
        base_degree,
        base_covolume,
        log_covolume,
        cosh_bound: bound.cosh_bound,
        inj_radius_lb: r,
        inj_radius_log_form,
        genus_from_radius,
        genus_lb,
        ball_volume_lb: ball,
        exponent_claim,
        volume_claim,
        depth_semantics: None,
        surjectivity: SurjectivityStatus::FormulaAssumed,
        ceiling: CeilingCheck::new(genus_lb, log_covolume),
        passed,
        notes,
    })
}
