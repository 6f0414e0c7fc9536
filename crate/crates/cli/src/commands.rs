use anyhow::{bail, Context};
use congruence_tower::congruence::index_formula;
use congruence_tower::matgroup::compute_entry_constants;
use congruence_tower::quadfield::{
    enumerate_split_primes, splitting_type, PrimeIdealData, SplittingType, SquareFreeIdeal,
};
use congruence_tower::spectrum::{
    enumerate_geodesics, inventory_members, prime_counts, select_admissible_prime, SelectionStrategy,
};
use congruence_tower::tower::{
    build_tower_closed, build_tower_noncompact, compute_c3, radius_growth_bounds, verify_displacement,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, StrategyFlag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, clap::Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Split primes up to --limit
    Primes,
    /// Loxodromic trace inventory (CSV)
    Enumerate,
    /// Admissible prime avoiding every inventoried trace norm
    SelectPrime,
    /// Index table for --ideals or --primes
    Indices,
    /// Brute-force orbit displacement check for --kind and the first ideal
    VerifyDisplacement,
    /// Nested Γ'0 tower over split primes above the genus threshold
    TowerNoncompact,
    /// Γ1 tower excluding inventoried geodesics, level by level
    TowerClosed,
    /// Growth inequalities for the radius and ball-volume bounds at --cutoff
    RadiusGrowth,
    /// Split-prime density against --limit
    Density,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Primes => "primes",
            Command::Enumerate => "enumerate",
            Command::SelectPrime => "select-prime",
            Command::Indices => "indices",
            Command::VerifyDisplacement => "verify-displacement",
            Command::TowerNoncompact => "tower-noncompact",
            Command::TowerClosed => "tower-closed",
            Command::RadiusGrowth => "radius-growth",
            Command::Density => "density",
        }
    }
}

/// A finished run: the JSON result, whether every check passed, and what to
/// print on stdout.
pub struct Outcome {
    pub result: Value,
    pub passed: bool,
    pub stdout: String,
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

fn json_outcome<T: Serialize>(r: &T, passed: bool) -> anyhow::Result<Outcome> {
    let result = serde_json::to_value(r)?;
    Ok(Outcome { stdout: pretty(&result), result, passed })
}

/// Ideals from `--ideals`, else one per prime in `--primes` (the canonical
/// split ideal, or the unique prime above an inert or ramified `p`).
fn ideals(cfg: &RunConfig) -> anyhow::Result<Vec<SquareFreeIdeal>> {
    let field = cfg.field()?;
    if !cfg.ideals.is_empty() {
        return cfg
            .ideals
            .iter()
            .map(|s| SquareFreeIdeal::parse(field, s).with_context(|| format!("ideal {s}")))
            .collect();
    }
    if cfg.primes.is_empty() {
        bail!("no ideals: give --ideals or --primes");
    }
    cfg.primes
        .iter()
        .map(|&p| {
            let q = match splitting_type(field, p)? {
                SplittingType::Split => PrimeIdealData::find_split(field, p)?,
                _ => PrimeIdealData::above(field, p)?,
            };
            Ok(SquareFreeIdeal::prime(q))
        })
        .collect()
}

pub fn run(cmd: Command, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Primes => {
            let primes = enumerate_split_primes(cfg.field()?, cfg.limit);
            let result = json!(primes);
            Ok(Outcome { stdout: result.to_string(), result, passed: true })
        }
        Command::Density => {
            let c = prime_counts(cfg.field()?, cfg.limit)?;
            let pi_ratio = c.pi_split_x as f64 / c.pi_x as f64;
            let theta_ratio = c.theta_split_x / c.x as f64;
            let passed = (pi_ratio - 0.5).abs() < cfg.density_tolerance
                && (theta_ratio - 0.5).abs() < cfg.density_tolerance;
            json_outcome(&json!({ "counts": c, "pi_ratio": pi_ratio, "theta_ratio": theta_ratio }), passed)
        }
        Command::Enumerate => {
            let ctx = cfg.context()?;
            let inv = enumerate_geodesics(&ctx, cfg.depth, cfg.cutoff)?;
            let mut csv = Vec::new();
            inv.write_csv(&mut csv)?;
            let csv = String::from_utf8(csv)?;
            if let Some(path) = &cfg.csv {
                std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            }
            let result = json!({
                "depth": inv.depth,
                "cutoff": inv.cutoff,
                "count": inv.count(),
                "elements_scanned": inv.elements_scanned,
                "shortest_length": inv.shortest_length,
                "product_of_norms": inv.product_of_norms.to_string(),
                "zero_factor_words": inv.zero_factor_words,
            });
            let stdout = if cfg.csv.is_some() { pretty(&result) } else { csv.trim_end().to_string() };
            Ok(Outcome { result, passed: true, stdout })
        }
        Command::SelectPrime => {
            let ctx = cfg.context()?;
            let inv = enumerate_geodesics(&ctx, cfg.depth, cfg.cutoff)?;
            let strategy = match cfg.strategy {
                StrategyFlag::SmallestSplit => SelectionStrategy::SmallestSplit,
                StrategyFlag::DirectInterval => SelectionStrategy::DirectInterval {
                    c3: compute_c3(&compute_entry_constants(&ctx), &ctx).value,
                    cutoff: cfg.cutoff,
                },
            };
            let cert = select_admissible_prime(&inv, strategy)?;
            let members = inventory_members(&inv, &cert.prime)?;
            let passed = members.is_empty();
            json_outcome(&json!({ "certificate": cert, "inventory_size": inv.count(), "members_in_gamma1": members }), passed)
        }
        Command::Indices => {
            let kinds = &cfg.kinds;
            let mut rows = Vec::new();
            let mut table = format!("ideal,norm,{}", kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(","));
            for ideal in ideals(cfg)? {
                let mut row = serde_json::Map::new();
                row.insert("ideal".into(), json!(ideal.to_string()));
                row.insert("norm".into(), json!(ideal.norm().to_string()));
                let mut line = format!("\"{}\",{}", ideal, ideal.norm());
                for k in kinds {
                    let idx = index_formula(*k, &ideal)?;
                    row.insert(k.name().into(), json!(idx.to_string()));
                    line.push_str(&format!(",{idx}"));
                }
                rows.push(Value::Object(row));
                table.push('\n');
                table.push_str(&line);
            }
            Ok(Outcome { result: Value::Array(rows), passed: true, stdout: table })
        }
        Command::VerifyDisplacement => {
            let ctx = cfg.context()?;
            let ideal = ideals(cfg)?.into_iter().next().expect("ideals() never returns empty");
            let report = verify_displacement(&ctx, cfg.kind, &ideal, cfg.depth)?;
            let passed = report.entry_violations.is_empty()
                && report
                    .min_all
                    .as_ref()
                    .map_or(true, |w| w.cosh_distance >= report.bound.cosh_bound - cfg.tolerance);
            json_outcome(&report, passed)
        }
        Command::TowerNoncompact => {
            let ctx = cfg.context()?;
            let t = build_tower_noncompact(&ctx, cfg.epsilon, cfg.levels, cfg.d_index, cfg.covolume()?)?;
            json_outcome(&t, t.passed)
        }
        Command::TowerClosed => {
            let ctx = cfg.context()?;
            let t = build_tower_closed(&ctx, cfg.epsilon, cfg.depth, cfg.cutoff, cfg.levels, cfg.covolume()?)?;
            json_outcome(&t, t.passed)
        }
        Command::RadiusGrowth => {
            let ctx = cfg.context()?;
            let consts = compute_entry_constants(&ctx);
            let r = radius_growth_bounds(&ctx, &consts, cfg.cutoff, cfg.epsilon, cfg.covolume()?, cfg.c1)?;
            let passed = r.radius_vs_index_bound.holds && r.ball_vs_volume_bound.holds && r.c1_floor_holds;
            json_outcome(&r, passed)
        }
    }
}
