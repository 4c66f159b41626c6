//! Scenario files.
//!
//! A scenario names one or more emitter systems, the coupling models to
//! compare, a one-dimensional sweep and the quantities to tabulate. Every
//! struct rejects unknown keys.

use serde::{Deserialize, Serialize};
use superrad_core::{
    collinear, rotated_triangle, ring_emitters, symmetric_triangle, Constellation, DimensionlessDistance,
    DipoleStyle, EmitterSpec, FieldModel, InteractionModel, RingSpec, Vec3,
};

use crate::error::CliError;

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub field_model: FieldChoice,
    pub models: Vec<ModelChoice>,
    /// A single unlabelled system. Exclusive with `systems`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emitters: Option<EmitterSource>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub systems: Vec<SystemConfig>,
    pub sweep: SweepConfig,
    pub outputs: Vec<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_model: Option<FieldChoice>,
    pub emitters: EmitterSource,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    Scalar,
    #[default]
    Vector,
}

impl From<FieldChoice> for FieldModel {
    fn from(f: FieldChoice) -> Self {
        match f {
            FieldChoice::Scalar => FieldModel::Scalar,
            FieldChoice::Vector => FieldModel::Vector,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Exact,
    Rwa,
}

impl From<ModelChoice> for InteractionModel {
    fn from(m: ModelChoice) -> Self {
        match m {
            ModelChoice::Exact => InteractionModel::Exact,
            ModelChoice::Rwa => InteractionModel::Rwa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmitterSource {
    List(Vec<EmitterConfig>),
    Pair(PairConfig),
    Ring(RingConfig),
    SymmetricTriangle(TriangleConfig),
    RotatedTriangle(RotatedTriangleConfig),
    Collinear(CollinearConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterConfig {
    pub position: [f64; 3],
    /// Unit vector.
    pub dipole: [f64; 3],
    #[serde(default)]
    pub detuning: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstellationChoice {
    Xx,
    Zz,
}

fn one() -> f64 {
    1.0
}

/// Two emitters on the `z` axis; the first has detuning `+detuning`, the
/// second `−detuning`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub constellation: ConstellationChoice,
    #[serde(default = "one")]
    pub separation: f64,
    #[serde(default)]
    pub detuning: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipoleStyleChoice {
    OutOfPlane,
    Radial,
    Tangential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub n: usize,
    pub circumradius: f64,
    pub dipole_style: DipoleStyleChoice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleConfig {
    pub side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotatedTriangleConfig {
    pub side: f64,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollinearConfig {
    pub n: usize,
    pub spacing: f64,
    pub dipole: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    /// Multiplies every position.
    Scale,
    /// Multiplies every detuning.
    Detuning,
    /// Probe frequency of the emission spectrum.
    Omega,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl SweepConfig {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.from;
                }
                if k == n - 1 {
                    return self.to;
                }
                let t = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.from + t * (self.to - self.from),
                    Spacing::Log => (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "re_J")]
    ReJ,
    #[serde(rename = "im_J")]
    ImJ,
    #[serde(rename = "re_ratio")]
    ReRatio,
    #[serde(rename = "mag2_ratio")]
    Mag2Ratio,
    #[serde(rename = "rate_k")]
    RateK,
    #[serde(rename = "shift_k")]
    ShiftK,
    #[serde(rename = "spectrum")]
    Spectrum,
}

impl Quantity {
    pub fn column_stem(self) -> &'static str {
        match self {
            Self::ReJ => "re_J",
            Self::ImJ => "im_J",
            Self::ReRatio => "re_ratio",
            Self::Mag2Ratio => "mag2_ratio",
            Self::RateK => "rate",
            Self::ShiftK => "shift",
            Self::Spectrum => "spectrum",
        }
    }

    pub(crate) fn is_pairwise(self) -> bool {
        matches!(self, Self::ReJ | Self::ImJ | Self::ReRatio | Self::Mag2Ratio)
    }

    pub(crate) fn is_ratio(self) -> bool {
        matches!(self, Self::ReRatio | Self::Mag2Ratio)
    }
}

/// A validated system ready to run.
#[derive(Debug, Clone)]
pub struct System {
    pub label: Option<String>,
    pub field: FieldModel,
    pub emitters: Vec<EmitterSpec>,
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        CliError::config(&path, e.into_inner())
    })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(scenario).expect("scenario serialises")
}

/// Canonical compact encoding used for the config hash.
pub fn canonical_json(scenario: &Scenario) -> String {
    serde_json::to_string(scenario).expect("scenario serialises")
}

fn unit(v: [f64; 3], path: &str) -> Result<Vec3, CliError> {
    let v = Vec3::new(v[0], v[1], v[2]);
    if !v.iter().all(|x| x.is_finite()) || (v.norm() - 1.0).abs() > UNIT_TOL {
        return Err(CliError::config(path, format!("dipole must be a unit vector, |d| = {}", v.norm())));
    }
    Ok(v)
}

fn positive(x: f64, path: &str) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::config(path, format!("must be positive and finite, got {x}")))
    }
}

fn finite(x: f64, path: &str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(path, "must be finite"))
    }
}

impl EmitterSource {
    pub fn build(&self, path: &str) -> Result<Vec<EmitterSpec>, CliError> {
        let bad = |field: &str, e: superrad_core::Error| CliError::config(&format!("{path}.{field}"), e);
        let emitters = match self {
            Self::List(list) => list
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let p = format!("{path}.list[{i}]");
                    let pos = e.position;
                    if !pos.iter().all(|x| x.is_finite()) {
                        return Err(CliError::config(&format!("{p}.position"), "must be finite"));
                    }
                    let dipole = unit(e.dipole, &format!("{p}.dipole"))?;
                    let detuning = finite(e.detuning, &format!("{p}.detuning"))?;
                    EmitterSpec::new(Vec3::new(pos[0], pos[1], pos[2]), dipole, detuning)
                        .map_err(|err| CliError::config(&p, err))
                })
                .collect::<Result<Vec<_>, _>>()?,
            Self::Pair(p) => {
                let s = positive(p.separation, &format!("{path}.pair.separation"))?;
                let delta = finite(p.detuning, &format!("{path}.pair.detuning"))?;
                let c = match p.constellation {
                    ConstellationChoice::Xx => Constellation::XX,
                    ConstellationChoice::Zz => Constellation::ZZ,
                };
                c.detuned(s, delta).map_err(|e| bad("pair", e))?.to_vec()
            }
            Self::Ring(r) => {
                let radius = positive(r.circumradius, &format!("{path}.ring.circumradius"))?;
                let style = match r.dipole_style {
                    DipoleStyleChoice::OutOfPlane => DipoleStyle::OutOfPlane,
                    DipoleStyleChoice::Radial => DipoleStyle::Radial,
                    DipoleStyleChoice::Tangential => DipoleStyle::Tangential,
                };
                let radius = DimensionlessDistance::new(radius).map_err(|e| bad("ring.circumradius", e))?;
                let spec = RingSpec::new(r.n, radius, style).map_err(|e| bad("ring.n", e))?;
                ring_emitters(&spec)
            }
            Self::SymmetricTriangle(t) => {
                symmetric_triangle(positive(t.side, &format!("{path}.symmetric_triangle.side"))?)
            }
            Self::RotatedTriangle(t) => {
                let side = positive(t.side, &format!("{path}.rotated_triangle.side"))?;
                let angle = finite(t.angle_deg, &format!("{path}.rotated_triangle.angle_deg"))?;
                rotated_triangle(side, angle.to_radians())
            }
            Self::Collinear(c) => {
                let spacing = positive(c.spacing, &format!("{path}.collinear.spacing"))?;
                let dipole = unit(c.dipole, &format!("{path}.collinear.dipole"))?;
                collinear(c.n, spacing, dipole).map_err(|e| bad("collinear", e))?
            }
        };
        if emitters.len() < 2 {
            return Err(CliError::config(path, format!("need at least 2 emitters, got {}", emitters.len())));
        }
        for i in 0..emitters.len() {
            for j in i + 1..emitters.len() {
                if emitters[i].position() == emitters[j].position() {
                    return Err(CliError::config(path, format!("emitters {i} and {j} coincide")));
                }
            }
        }
        Ok(emitters)
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        self.systems()?;
        if self.models.is_empty() {
            return Err(CliError::config("models", "must list at least one model"));
        }
        for (i, m) in self.models.iter().enumerate() {
            if self.models[..i].contains(m) {
                return Err(CliError::config(&format!("models[{i}]"), "duplicate model"));
            }
        }
        if self.outputs.is_empty() {
            return Err(CliError::config("outputs", "must list at least one quantity"));
        }
        for (i, q) in self.outputs.iter().enumerate() {
            let path = format!("outputs[{i}]");
            if self.outputs[..i].contains(q) {
                return Err(CliError::config(&path, "duplicate quantity"));
            }
            if q.is_ratio() && !(self.models.contains(&ModelChoice::Exact) && self.models.contains(&ModelChoice::Rwa)) {
                return Err(CliError::config(&path, "ratio quantities need both the exact and rwa models"));
            }
            if *q == Quantity::Spectrum && self.sweep.parameter != SweepParameter::Omega {
                return Err(CliError::config(&path, "spectrum needs an omega sweep"));
            }
            if *q != Quantity::Spectrum && self.sweep.parameter == SweepParameter::Omega {
                return Err(CliError::config(&path, "an omega sweep only supports the spectrum quantity"));
            }
        }
        let sw = &self.sweep;
        if sw.points < 2 {
            return Err(CliError::config("sweep.points", "must be at least 2"));
        }
        finite(sw.from, "sweep.from")?;
        finite(sw.to, "sweep.to")?;
        if !(sw.from < sw.to) {
            return Err(CliError::config("sweep", "from must be below to"));
        }
        if sw.spacing == Spacing::Log && !(sw.from > 0.0) {
            return Err(CliError::config("sweep.from", "log spacing needs a positive start"));
        }
        if sw.parameter == SweepParameter::Scale && !(sw.from > 0.0) {
            return Err(CliError::config("sweep.from", "scale factors must be positive"));
        }
        Ok(())
    }

    /// Builds the emitter systems, checking the `emitters`/`systems` choice.
    pub fn systems(&self) -> Result<Vec<System>, CliError> {
        match (&self.emitters, self.systems.is_empty()) {
            (Some(source), true) => Ok(vec![System {
                label: None,
                field: self.field_model.into(),
                emitters: source.build("emitters")?,
            }]),
            (None, false) => {
                let mut out = Vec::with_capacity(self.systems.len());
                for (i, sys) in self.systems.iter().enumerate() {
                    let path = format!("systems[{i}]");
                    if sys.label.is_empty() || sys.label.contains([',', '\n', '"']) {
                        return Err(CliError::config(&format!("{path}.label"), "must be non-empty without commas, quotes or newlines"));
                    }
                    if self.systems[..i].iter().any(|o| o.label == sys.label) {
                        return Err(CliError::config(&format!("{path}.label"), "duplicate label"));
                    }
                    out.push(System {
                        label: Some(sys.label.clone()),
                        field: sys.field_model.unwrap_or(self.field_model).into(),
                        emitters: sys.emitters.build(&format!("{path}.emitters"))?,
                    });
                }
                Ok(out)
            }
            (Some(_), false) => Err(CliError::config("", "give either `emitters` or `systems`, not both")),
            (None, true) => Err(CliError::config("", "one of `emitters` or `systems` is required")),
        }
    }
}
