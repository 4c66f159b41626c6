use rayon::prelude::*;
use superrad_core::{
    collective_modes_detuned, collective_spectrum, interaction, interaction_matrix, interaction_ratio,
    track_mode_sets, CollectiveMode, EmitterSpec, InteractionRatio, ModeBranch, C64,
};

use crate::config::{ModelChoice, Quantity, Scenario, SweepParameter, System};
use crate::error::CliError;

/// Mode branches of one system in one model.
#[derive(Debug, Clone)]
pub struct TrackedModes {
    pub system: Option<String>,
    pub model: ModelChoice,
    pub branches: Vec<ModeBranch>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub columns: Vec<String>,
    pub params: Vec<f64>,
    /// One row per sweep point, aligned with `columns`.
    pub rows: Vec<Vec<f64>>,
    pub tracked: Vec<TrackedModes>,
    /// Tracking warnings, one line each.
    pub notes: Vec<String>,
}

impl RunOutput {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Debug, Clone, Default)]
struct Cell {
    couplings: Vec<Option<C64>>,
    ratio: Option<InteractionRatio>,
    modes: Vec<Option<Vec<CollectiveMode>>>,
}

struct Plan<'a> {
    scenario: &'a Scenario,
    systems: Vec<System>,
    pairwise: bool,
    ratio: bool,
    modes: bool,
}

fn model_name(m: ModelChoice) -> &'static str {
    match m {
        ModelChoice::Exact => "exact",
        ModelChoice::Rwa => "rwa",
    }
}

fn at(param: f64, base: &[EmitterSpec], parameter: SweepParameter) -> superrad_core::Result<Vec<EmitterSpec>> {
    base.iter()
        .map(|e| match parameter {
            SweepParameter::Scale => Ok((*e).scaled(param)),
            SweepParameter::Detuning => (*e).with_detuning(e.detuning() * param),
            SweepParameter::Omega => Ok(*e),
        })
        .collect()
}

impl Plan<'_> {
    fn cell(&self, system: &System, param: f64) -> superrad_core::Result<Cell> {
        let emitters = at(param, &system.emitters, self.scenario.sweep.parameter)?;
        let mut cell = Cell::default();
        for &m in &self.scenario.models {
            let coupling = if self.pairwise {
                Some(interaction(&emitters[0], &emitters[1], m.into(), system.field)?.value())
            } else {
                None
            };
            cell.couplings.push(coupling);
            let modes = if self.modes {
                let jp = interaction_matrix(&emitters, m.into(), system.field)?;
                Some(collective_modes_detuned(&emitters, &jp)?)
            } else {
                None
            };
            cell.modes.push(modes);
        }
        if self.ratio {
            cell.ratio = Some(interaction_ratio(&emitters[0], &emitters[1], system.field)?);
        }
        Ok(cell)
    }
}

/// Evaluates every sweep point in parallel on the current rayon pool. Rows
/// come back in sweep order whatever the scheduling, so output is
/// reproducible across thread counts.
pub fn run_scenario(scenario: &Scenario) -> Result<RunOutput, CliError> {
    scenario.validate()?;
    let outputs = &scenario.outputs;
    let plan = Plan {
        scenario,
        systems: scenario.systems()?,
        pairwise: outputs.iter().any(|q| q.is_pairwise()),
        ratio: outputs.iter().any(|q| q.is_ratio()),
        modes: outputs
            .iter()
            .any(|q| matches!(q, Quantity::RateK | Quantity::ShiftK | Quantity::Spectrum)),
    };
    let params = scenario.sweep.grid();

    let results: Vec<Result<Vec<Cell>, (usize, superrad_core::Error)>> = params
        .par_iter()
        .enumerate()
        .map(|(row, &p)| {
            plan.systems
                .iter()
                .map(|sys| plan.cell(sys, p).map_err(|e| (row, e)))
                .collect()
        })
        .collect();
    let mut cells = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(c) => cells.push(c),
            Err((row, source)) => {
                return Err(CliError::Numerical {
                    row: Some(row),
                    param: Some(params[row]),
                    source,
                })
            }
        }
    }

    let track = outputs.iter().any(|q| matches!(q, Quantity::RateK | Quantity::ShiftK));
    let mut tracked = Vec::new();
    let mut notes = Vec::new();
    if track {
        for (si, sys) in plan.systems.iter().enumerate() {
            for (mi, &m) in scenario.models.iter().enumerate() {
                let sets: Vec<Vec<CollectiveMode>> = cells
                    .iter()
                    .map(|row| row[si].modes[mi].clone().expect("modes computed"))
                    .collect();
                let branches = track_mode_sets(&params, sets).map_err(|source| CliError::Numerical {
                    row: None,
                    param: None,
                    source,
                })?;
                for (k, b) in branches.iter().enumerate() {
                    if !b.discontinuities.is_empty() {
                        notes.push(format!(
                            "mode {k}{} ({}) loses continuity at rows {:?}",
                            label_suffix(&sys.label),
                            model_name(m),
                            b.discontinuities
                        ));
                    }
                }
                tracked.push(TrackedModes {
                    system: sys.label.clone(),
                    model: m,
                    branches,
                });
            }
        }
    }

    let mut columns = Vec::new();
    let mut rows = vec![Vec::new(); params.len()];
    let mut tracked_iter = 0;
    for (si, sys) in plan.systems.iter().enumerate() {
        let suffix = label_suffix(&sys.label);
        let sys_tracked = if track {
            let t = &tracked[tracked_iter..tracked_iter + scenario.models.len()];
            tracked_iter += scenario.models.len();
            Some(t)
        } else {
            None
        };
        for &q in outputs {
            if q.is_ratio() {
                columns.push(format!("{}_rwa{suffix}", q.column_stem()));
                for (r, row) in rows.iter_mut().enumerate() {
                    let ratio = cells[r][si].ratio.expect("ratio computed");
                    row.push(if q == Quantity::ReRatio {
                        ratio.re_ratio
                    } else {
                        ratio.mag2_ratio
                    });
                }
                continue;
            }
            for (mi, &m) in scenario.models.iter().enumerate() {
                let model = model_name(m);
                match q {
                    Quantity::ReJ | Quantity::ImJ => {
                        columns.push(format!("{}_{model}{suffix}", q.column_stem()));
                        for (r, row) in rows.iter_mut().enumerate() {
                            let j = cells[r][si].couplings[mi].expect("coupling computed");
                            row.push(if q == Quantity::ReJ { j.re } else { j.im });
                        }
                    }
                    Quantity::RateK | Quantity::ShiftK => {
                        let branches = &sys_tracked.expect("tracked")[mi].branches;
                        for (k, b) in branches.iter().enumerate() {
                            columns.push(format!("{}_{k}_{model}{suffix}", q.column_stem()));
                            let values = if q == Quantity::RateK { b.rates() } else { b.shifts() };
                            for (row, v) in rows.iter_mut().zip(values) {
                                row.push(v);
                            }
                        }
                    }
                    Quantity::Spectrum => {
                        columns.push(format!("spectrum_{model}{suffix}"));
                        for (r, row) in rows.iter_mut().enumerate() {
                            let modes = cells[r][si].modes[mi].as_ref().expect("modes computed");
                            let nus: Vec<C64> = modes.iter().map(|m| m.eigenvalue).collect();
                            row.push(collective_spectrum(&[params[r]], &nus)[0]);
                        }
                    }
                    Quantity::ReRatio | Quantity::Mag2Ratio => unreachable!(),
                }
            }
        }
    }

    Ok(RunOutput {
        columns,
        params,
        rows,
        tracked,
        notes,
    })
}

fn label_suffix(label: &Option<String>) -> String {
    label.as_ref().map(|l| format!("@{l}")).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    fn pair_scenario(outputs: &str) -> Scenario {
        parse(&format!(
            r#"{{
                "models": ["exact", "rwa"],
                "emitters": {{"pair": {{"constellation": "zz"}}}},
                "sweep": {{"parameter": "scale", "from": 0.5, "to": 2.0, "points": 7}},
                "outputs": {outputs}
            }}"#
        ))
        .unwrap()
    }

    #[test]
    fn column_layout() {
        let out = run_scenario(&pair_scenario(r#"["re_J", "mag2_ratio", "rate_k"]"#)).unwrap();
        assert_eq!(
            out.columns,
            [
                "re_J_exact",
                "re_J_rwa",
                "mag2_ratio_rwa",
                "rate_0_exact",
                "rate_1_exact",
                "rate_0_rwa",
                "rate_1_rwa"
            ]
        );
        assert_eq!(out.rows.len(), 7);
        assert!(out.rows.iter().all(|r| r.len() == out.columns.len()));
    }

    #[test]
    fn pair_rates_are_one_plus_minus_im_j() {
        let out = run_scenario(&pair_scenario(r#"["im_J", "rate_k"]"#)).unwrap();
        let im = out.column("im_J_exact").unwrap();
        let r0 = out.column("rate_0_exact").unwrap();
        let r1 = out.column("rate_1_exact").unwrap();
        for k in 0..im.len() {
            let (lo, hi) = (1.0 - im[k].abs(), 1.0 + im[k].abs());
            let (a, b) = (r0[k].min(r1[k]), r0[k].max(r1[k]));
            assert!((a - lo).abs() < 1e-10 && (b - hi).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_sweep_sets_the_separation() {
        let out = run_scenario(&pair_scenario(r#"["re_J"]"#)).unwrap();
        let [a, b] = superrad_core::Constellation::ZZ.emitters(out.params[3]);
        let j = interaction(&a, &b, superrad_core::InteractionModel::Exact, superrad_core::FieldModel::Vector).unwrap();
        assert_eq!(out.rows[3][0], j.re());
    }

    #[test]
    fn spectrum_sweep() {
        let s = parse(
            r#"{
                "models": ["exact"],
                "emitters": {"pair": {"constellation": "xx", "separation": 0.5}},
                "sweep": {"parameter": "omega", "from": -40, "to": 40, "points": 801},
                "outputs": ["spectrum"]
            }"#,
        )
        .unwrap();
        let out = run_scenario(&s).unwrap();
        let spec = out.column("spectrum_exact").unwrap();
        assert!(spec.iter().all(|v| v.is_finite() && *v > 0.0));
    }

    #[test]
    fn labelled_systems_get_suffixes() {
        let s = parse(
            r#"{
                "models": ["exact", "rwa"],
                "systems": [
                    {"label": "xx", "emitters": {"pair": {"constellation": "xx"}}},
                    {"label": "sc", "field_model": "scalar", "emitters": {"pair": {"constellation": "xx"}}}
                ],
                "sweep": {"parameter": "scale", "from": 0.5, "to": 2.0, "points": 3},
                "outputs": ["re_ratio"]
            }"#,
        )
        .unwrap();
        let out = run_scenario(&s).unwrap();
        assert_eq!(out.columns, ["re_ratio_rwa@xx", "re_ratio_rwa@sc"]);
    }
}
