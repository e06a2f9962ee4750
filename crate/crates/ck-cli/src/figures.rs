//! Named figure series: each id maps to a preset, a column set and (where
//! needed) parameter overrides, reproducing the published curves as CSV.

use anyhow::{bail, Result};
use ck_core::energetics::{self, AlickiMethod};
use ck_core::ensembles::MuState;
use ck_core::scenario::{Preset, Scenario};
use ck_core::{classical, Result as CkResult};
use serde_json::json;

use crate::config::RunConfig;
use crate::csvout::Table;

/// μ value standing in for the μ → ∞ mixture, with e^{−μ} residual budget.
pub const MU_MIXTURE: f64 = 50.0;

#[derive(Clone, Debug)]
pub struct FigureDef {
    pub id: &'static str,
    pub preset: Preset,
    /// ϑ forced by the figure (None keeps the preset/override value).
    pub theta: Option<f64>,
    pub columns: &'static [&'static str],
    pub caption: &'static str,
}

pub const FIGURES: &[FigureDef] = &[
    FigureDef {
        id: "4.2",
        preset: Preset::UnderdampedOscillator,
        theta: None,
        columns: &["x_scaled", "w_cl"],
        caption: "dimensionless position and classical work, underdamped",
    },
    FigureDef {
        id: "4.3",
        preset: Preset::OverdampedOscillator,
        theta: None,
        columns: &["x_scaled", "w_cl"],
        caption: "dimensionless position and classical work, overdamped",
    },
    FigureDef {
        id: "4.4",
        preset: Preset::UnderdampedOscillator,
        theta: None,
        columns: &["q_ak", "w_ak", "w_cl"],
        caption: "Alicki heat and work vs the classical work",
    },
    FigureDef {
        id: "4.5",
        preset: Preset::UnderdampedOscillator,
        theta: None,
        columns: &["w_c", "w_th", "w_q", "w_cl"],
        caption: "centroid, thermal and quantum work vs the classical work",
    },
    FigureDef {
        id: "4.6",
        preset: Preset::UnderdampedOscillator,
        theta: Some(0.0),
        columns: &["q_ak", "w_ak", "w_cl"],
        caption: "Alicki split in the strict classical limit",
    },
    FigureDef {
        id: "4.7",
        preset: Preset::UnderdampedOscillator,
        theta: Some(1.0),
        columns: &["w_q_gaussian", "w_q_superposition"],
        caption: "quantum work, Gaussian vs coherent superposition",
    },
    FigureDef {
        id: "4.8",
        preset: Preset::UnderdampedOscillator,
        theta: Some(1.0),
        columns: &["w_q_mixture", "w_q_superposition"],
        caption: "quantum (thermal) work, mixture vs coherent superposition",
    },
    FigureDef {
        id: "4.9",
        preset: Preset::UnderdampedOscillator,
        theta: Some(1.0),
        columns: &["w_c_gaussian", "w_th_gaussian", "w_th_superposition"],
        caption: "centroid and thermal work, Gaussian vs superposition",
    },
];

pub fn find(id: &str) -> Result<&'static FigureDef> {
    FIGURES
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| anyhow::anyhow!("unknown figure '{id}' (known: 4.2..4.9)"))
}

fn column_value(scn: &Scenario, col: &str, t: f64) -> CkResult<f64> {
    match col {
        "x_scaled" => classical::position_scaled(scn, t).map(|(x, _)| x),
        "w_cl" => classical::work(scn, t),
        "k_cl" => classical::kinetic(scn, t),
        "k_q" => energetics::kinetic_energy(scn, t),
        "w_q" | "w_q_gaussian" => energetics::quantum_work(scn, t).map(|w| w.total),
        "w_c" | "w_c_gaussian" => energetics::quantum_work(scn, t).map(|w| w.centroid),
        "w_th" | "w_th_gaussian" => energetics::quantum_work(scn, t).map(|w| w.thermal),
        "w_ak" => energetics::alicki_work_heat(scn, t, AlickiMethod::ClosedForm).map(|(w, _)| w),
        "q_ak" => energetics::alicki_work_heat(scn, t, AlickiMethod::ClosedForm).map(|(_, q)| q),
        "w_q_superposition" | "w_th_superposition" => {
            ck_core::ensembles::mu_work(scn, &MuState::new(0.0)?, t).map(|w| w.total)
        }
        "w_q_mixture" => {
            ck_core::ensembles::mu_work(scn, &MuState::new(MU_MIXTURE)?, t).map(|w| w.total)
        }
        other => Err(ck_core::CkError::RejectedParams(format!(
            "unknown column '{other}'"
        ))),
    }
}

/// Asymptote (τ → ∞ limit) of one column, if it exists.
fn column_asymptote(scn: &Scenario, col: &str) -> CkResult<Option<f64>> {
    let Some(a) = energetics::asymptotes(scn)? else {
        return Ok(None);
    };
    let theta_prime = if scn.is_quantum() {
        scn.theta_prime()?
    } else {
        f64::INFINITY
    };
    let mu_limit = |mu: f64| -> f64 {
        a.w_q - a.w_th / (theta_prime * (1.0 + (mu + 0.5 / theta_prime).exp()))
    };
    Ok(match col {
        "x_scaled" => Some(0.0),
        "w_cl" => Some(a.w_cl),
        "k_cl" | "k_q" => Some(0.0),
        "w_q" | "w_q_gaussian" => Some(a.w_q),
        "w_c" | "w_c_gaussian" => Some(a.w_cl),
        "w_th" | "w_th_gaussian" => Some(a.w_th),
        "w_ak" => Some(a.w_ak),
        "q_ak" => Some(a.q_ak),
        "w_q_superposition" | "w_th_superposition" => Some(mu_limit(0.0)),
        "w_q_mixture" => Some(mu_limit(MU_MIXTURE)),
        _ => None,
    })
}

pub struct FigureOutput {
    pub table: Table,
    pub metadata: serde_json::Value,
}

/// Build the series for one figure id, honoring grid/parameter overrides
/// from the run configuration (figure-forced ϑ wins over the preset value).
pub fn build(id: &str, cfg: &RunConfig) -> Result<FigureOutput> {
    let def = find(id)?;
    let mut cfg = cfg.clone();
    if cfg.preset.is_none() {
        cfg.preset = Some(def.preset);
    }
    if let Some(theta) = def.theta {
        if cfg.theta.is_none() {
            cfg.theta = Some(theta);
        }
    }
    let scn = cfg.scenario()?;
    if def
        .columns
        .iter()
        .any(|c| c.contains("superposition") || c.contains("mixture"))
        && !scn.is_quantum()
    {
        bail!("figure {id} needs theta > 0");
    }
    build_series(&scn, &cfg, def.columns, Some(def))
}

/// Build a plain series (the `simulate` path) or a figure series.
pub fn build_series(
    scn: &Scenario,
    cfg: &RunConfig,
    columns: &[&str],
    def: Option<&FigureDef>,
) -> Result<FigureOutput> {
    let grid = cfg.grid;
    let axis_name = scn.axis().column_name();
    let mut header = vec![axis_name];
    header.extend_from_slice(columns);
    let mut table = Table::new(&header);
    for axis_value in grid.values() {
        let t = scn.t_from_axis(axis_value);
        let mut row = Vec::with_capacity(columns.len() + 1);
        row.push(axis_value);
        for col in columns {
            row.push(column_value(scn, col, t).map_err(|e| anyhow::anyhow!("{col}: {e}"))?);
        }
        table.push(row);
    }

    let mut asymptotes = serde_json::Map::new();
    for col in columns {
        if let Some(v) = column_asymptote(scn, col).map_err(|e| anyhow::anyhow!("{e}"))? {
            asymptotes.insert(col.to_string(), json!(v));
        }
    }
    let x_scale = if columns.contains(&"x_scaled") {
        let (_, scale) = classical::position_scaled(scn, 0.0).map_err(|e| anyhow::anyhow!("{e}"))?;
        Some(scale.label())
    } else {
        None
    };
    let metadata = json!({
        "figure": def.map(|d| d.id),
        "caption": def.map(|d| d.caption),
        "config": cfg.describe(),
        "axis": axis_name,
        "grid": { "start": grid.start, "end": grid.end, "count": grid.count },
        "columns": header,
        "x_scale": x_scale,
        "asymptotes": if asymptotes.is_empty() { serde_json::Value::Null } else { serde_json::Value::Object(asymptotes) },
        "version": env!("CARGO_PKG_VERSION"),
    });
    Ok(FigureOutput {
        table,
        metadata,
    })
}
