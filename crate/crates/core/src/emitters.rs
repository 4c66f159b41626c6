//! Emitter configurations and the couplings `J/γ` between them.
//!
//! With energies in units of the single-emitter rate `γ = −Im X`, the
//! self-interaction is `−i` in both models and a pair coupling is
//! `6π·μ̂₁·K·μ̂₂` (vector field) or `4π·K` (scalar field), with `K` the
//! propagator over `k₀`. Those prefactors make `Im J → −1` for two parallel
//! dipoles brought together.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Rotation3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagator::{
    check_unit, dyadic_propagator, project_unchecked, scalar_propagator, FieldModel,
    InteractionModel, SeparationGeometry,
};
use crate::{Vec3, C64};

/// One emitter: position in `1/k₀` units, unit dipole direction, and the
/// offset `(Ωₙ − Ω)/γ` of its transition frequency from the common
/// reference frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterSpec {
    position: Vec3,
    dipole: Vec3,
    detuning: f64,
}

impl EmitterSpec {
    pub fn new(position: Vec3, dipole: Vec3, detuning: f64) -> Result<Self> {
        check_unit(&dipole)?;
        if !detuning.is_finite() {
            return Err(Error::InvalidDetuning(detuning));
        }
        if !position.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidDistance(position.norm()));
        }
        Ok(Self {
            position,
            dipole,
            detuning,
        })
    }

    /// Resonant emitter with no detuning.
    pub fn resonant(position: Vec3, dipole: Vec3) -> Result<Self> {
        Self::new(position, dipole, 0.0)
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    pub fn dipole(&self) -> Vec3 {
        self.dipole
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn with_detuning(self, detuning: f64) -> Result<Self> {
        Self::new(self.position, self.dipole, detuning)
    }

    /// Same emitter with its position multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            position: self.position * factor,
            ..self
        }
    }

    /// Applies a rigid motion: rotate position and dipole, then translate.
    pub fn moved(self, rotation: &Rotation3<f64>, shift: &Vec3) -> Self {
        Self {
            position: rotation * self.position + shift,
            dipole: rotation * self.dipole,
            detuning: self.detuning,
        }
    }
}

/// A coupling `J` in units of `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionValue(pub C64);

impl InteractionValue {
    pub fn value(self) -> C64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }
}

impl From<C64> for InteractionValue {
    fn from(j: C64) -> Self {
        Self(j)
    }
}

/// Renormalised self-interaction `X/γ`: the real part is absorbed into the
/// observed transition frequency, the imaginary part defines the unit.
pub fn self_interaction(_model: InteractionModel) -> C64 {
    C64::new(0.0, -1.0)
}

const VECTOR_PREFACTOR: f64 = 6.0 * PI;
const SCALAR_PREFACTOR: f64 = 4.0 * PI;

/// Coupling between two emitters in the given model.
pub fn interaction(
    e1: &EmitterSpec,
    e2: &EmitterSpec,
    model: InteractionModel,
    field: FieldModel,
) -> Result<InteractionValue> {
    let geometry = SeparationGeometry::between(&e1.position, &e2.position)
        .map_err(|_| Error::CoincidentEmitters(0, 1))?;
    pair_coupling(e1, e2, &geometry, model, field).map(InteractionValue)
}

fn pair_coupling(
    e1: &EmitterSpec,
    e2: &EmitterSpec,
    geometry: &SeparationGeometry,
    model: InteractionModel,
    field: FieldModel,
) -> Result<C64> {
    Ok(match field {
        FieldModel::Vector => {
            let k = dyadic_propagator(model, geometry)?;
            project_unchecked(&k, &e1.dipole, &e2.dipole) * VECTOR_PREFACTOR
        }
        FieldModel::Scalar => scalar_propagator(model, geometry.distance())? * SCALAR_PREFACTOR,
    })
}

/// RWA coupling relative to the exact one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionRatio {
    /// `Re J_RWA / Re J_exact`.
    pub re_ratio: f64,
    /// `|J_RWA / J_exact|²`.
    pub mag2_ratio: f64,
}

pub fn interaction_ratio(
    e1: &EmitterSpec,
    e2: &EmitterSpec,
    field: FieldModel,
) -> Result<InteractionRatio> {
    let exact = interaction(e1, e2, InteractionModel::Exact, field)?.0;
    let rwa = interaction(e1, e2, InteractionModel::Rwa, field)?.0;
    ratio_of(exact, rwa)
}

fn ratio_of(exact: C64, rwa: C64) -> Result<InteractionRatio> {
    if exact.re == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(InteractionRatio {
        re_ratio: rwa.re / exact.re,
        mag2_ratio: (rwa / exact).norm_sqr(),
    })
}

/// Symmetric, zero-diagonal matrix `J′` of pair couplings in units of `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix(DMatrix<C64>);

impl InteractionMatrix {
    /// Validates symmetry and the zero diagonal exactly.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.ncols(),
            });
        }
        for i in 0..n {
            if m[(i, i)] != C64::new(0.0, 0.0) {
                return Err(Error::NonZeroDiagonal(i));
            }
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }
}

/// Builds `J′` for a set of emitters. Pairs are evaluated in parallel; the
/// result does not depend on scheduling.
pub fn interaction_matrix(
    emitters: &[EmitterSpec],
    model: InteractionModel,
    field: FieldModel,
) -> Result<InteractionMatrix> {
    let n = emitters.len();
    if n < 2 {
        return Err(Error::TooFewEmitters(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let values: Vec<C64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&emitters[i], &emitters[j]);
            let geometry = SeparationGeometry::between(&a.position, &b.position)
                .map_err(|_| Error::CoincidentEmitters(i, j))?;
            pair_coupling(a, b, &geometry, model, field)
        })
        .collect::<Result<_>>()?;
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(InteractionMatrix(m))
}

/// `J′ + diag(detunings)`, whose eigenvalues give the collective resonances
/// relative to `Ω + X`.
pub fn resonance_matrix(emitters: &[EmitterSpec], jp: &InteractionMatrix) -> Result<DMatrix<C64>> {
    if emitters.len() != jp.len() {
        return Err(Error::DimensionMismatch {
            expected: jp.len(),
            found: emitters.len(),
        });
    }
    let mut m = jp.0.clone();
    for (i, e) in emitters.iter().enumerate() {
        m[(i, i)] += e.detuning;
    }
    Ok(m)
}

/// Two-emitter reference pairs separated along `ẑ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constellation {
    /// Both dipoles along `x̂`, perpendicular to the separation.
    XX,
    /// Both dipoles along `ẑ`, parallel to the separation.
    ZZ,
}

impl Constellation {
    pub fn dipole(self) -> Vec3 {
        match self {
            Self::XX => Vec3::x(),
            Self::ZZ => Vec3::z(),
        }
    }

    /// The pair at distance `s`, the first emitter at the origin.
    pub fn emitters(self, s: f64) -> [EmitterSpec; 2] {
        let mu = self.dipole();
        [
            EmitterSpec {
                position: Vec3::zeros(),
                dipole: mu,
                detuning: 0.0,
            },
            EmitterSpec {
                position: Vec3::new(0.0, 0.0, s),
                dipole: mu,
                detuning: 0.0,
            },
        ]
    }

    /// The pair with transition frequencies `Ω ± δ`.
    pub fn detuned(self, s: f64, delta: f64) -> Result<[EmitterSpec; 2]> {
        let [a, b] = self.emitters(s);
        Ok([a.with_detuning(delta)?, b.with_detuning(-delta)?])
    }
}

fn triangle_corners(side: f64) -> [Vec3; 3] {
    [
        Vec3::new(-0.5 * side, 0.0, 0.0),
        Vec3::new(0.5 * side, 0.0, 0.0),
        Vec3::new(0.0, 0.5 * 3f64.sqrt() * side, 0.0),
    ]
}

/// Equilateral triangle in the `xy`-plane with every dipole along `ẑ`.
pub fn symmetric_triangle(side: f64) -> Vec<EmitterSpec> {
    triangle_corners(side)
        .into_iter()
        .map(|position| EmitterSpec {
            position,
            dipole: Vec3::z(),
            detuning: 0.0,
        })
        .collect()
}

/// Equilateral triangle in the `xy`-plane with in-plane dipoles: the two base
/// dipoles point along `ŷ`, the apex dipole is `ŷ` turned by `angle` radians
/// about `ẑ`.
pub fn rotated_triangle(side: f64, angle: f64) -> Vec<EmitterSpec> {
    let apex = Vec3::new(-angle.sin(), angle.cos(), 0.0);
    triangle_corners(side)
        .into_iter()
        .zip([Vec3::y(), Vec3::y(), apex])
        .map(|(position, dipole)| EmitterSpec {
            position,
            dipole,
            detuning: 0.0,
        })
        .collect()
}

/// `n` emitters spaced by `spacing` along `x̂`, all with the same dipole.
pub fn collinear(n: usize, spacing: f64, dipole: Vec3) -> Result<Vec<EmitterSpec>> {
    (0..n)
        .map(|k| EmitterSpec::resonant(Vec3::new(spacing * k as f64, 0.0, 0.0), dipole))
        .collect()
}
