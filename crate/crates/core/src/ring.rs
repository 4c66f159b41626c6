//! Regular polygons of identical emitters.
//!
//! With a dipole pattern that shares the ring's rotational symmetry, `J′` is
//! circulant and its eigenvalues are cosine sums over the first row with
//! real coefficients. The RWA error only moves real parts of the row, so it
//! cannot change any decay rate.

use std::f64::consts::PI;

use crate::collective::collective_modes;
use crate::emitters::{interaction_matrix, EmitterSpec, InteractionMatrix};
use crate::error::{Error, Result};
use crate::propagator::{FieldModel, InteractionModel};
use crate::specfun::DimensionlessDistance;
use crate::{Vec3, C64};

const ROW_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DipoleStyle {
    /// Along the ring's normal.
    OutOfPlane,
    /// In plane, pointing away from the centre.
    Radial,
    /// In plane, along the direction of travel around the ring.
    Tangential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    n: usize,
    circumradius: DimensionlessDistance,
    style: DipoleStyle,
}

impl RingSpec {
    pub fn new(n: usize, circumradius: DimensionlessDistance, style: DipoleStyle) -> Result<Self> {
        if n < 3 {
            return Err(Error::RingTooSmall(n));
        }
        Ok(Self {
            n,
            circumradius,
            style,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn circumradius(&self) -> DimensionlessDistance {
        self.circumradius
    }

    pub fn style(&self) -> DipoleStyle {
        self.style
    }

    /// Nearest-neighbour distance `2R·sin(π/N)`.
    pub fn side(&self) -> f64 {
        2.0 * self.circumradius.value() * (PI / self.n as f64).sin()
    }
}

/// Emitters at angles `2πk/N` on a circle in the `xy`-plane, no detuning.
pub fn ring_emitters(spec: &RingSpec) -> Vec<EmitterSpec> {
    let r = spec.circumradius.value();
    (0..spec.n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / spec.n as f64;
            let (sin, cos) = phi.sin_cos();
            let dipole = match spec.style {
                DipoleStyle::OutOfPlane => Vec3::z(),
                DipoleStyle::Radial => Vec3::new(cos, sin, 0.0),
                DipoleStyle::Tangential => Vec3::new(-sin, cos, 0.0),
            };
            EmitterSpec::resonant(Vec3::new(r * cos, r * sin, 0.0), dipole.normalize())
                .expect("unit dipole and finite position")
        })
        .collect()
}

fn scale(row: &[C64]) -> f64 {
    row.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks `J[i][j] = J[0][(j − i) mod N]` to a relative `1e−9`.
pub fn check_circulant(jp: &InteractionMatrix) -> Result<()> {
    let n = jp.len();
    let m = jp.matrix();
    let size = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(0, (j + n - i) % n)]).norm());
        }
    }
    if worst > ROW_TOL * size {
        return Err(Error::NotCirculant(worst));
    }
    Ok(())
}

/// Eigenvalues of the circulant matrix with the given first row, in Bloch
/// order `k = 0 … N−1`:
///
/// * `N` even: `ν_k = (−1)^k J_{N/2} + 2 Σ_{n=1}^{N/2−1} J_n cos(2πnk/N)`
/// * `N` odd: `ν_k = 2 Σ_{n=1}^{(N−1)/2} J_n cos(2πnk/N)`
pub fn ring_eigenvalues_fourier(first_row: &[C64]) -> Result<Vec<C64>> {
    let n = first_row.len();
    if n < 3 {
        return Err(Error::RingTooSmall(n));
    }
    let size = scale(first_row);
    if first_row[0].norm() > ROW_TOL * size {
        return Err(Error::NonZeroSelfCoupling(first_row[0].norm()));
    }
    for index in 1..n {
        if (first_row[index] - first_row[n - index]).norm() > ROW_TOL * size {
            return Err(Error::NotPalindromic { index });
        }
    }
    let half = (n - 1) / 2;
    Ok((0..n)
        .map(|k| {
            let mut nu: C64 = (1..=half)
                .map(|m| first_row[m] * (2.0 * (2.0 * PI * (m * k) as f64 / n as f64).cos()))
                .sum();
            if n % 2 == 0 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                nu += first_row[n / 2] * sign;
            }
            nu
        })
        .collect())
}

/// Largest distance between two equally sized eigenvalue multisets, pairing
/// each element of `a` with its nearest unused element of `b`.
pub fn max_multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingReport {
    /// Largest decay-rate difference between the models over Bloch modes.
    pub max_rate_diff: f64,
    /// Largest level-shift difference between the models over Bloch modes.
    pub max_shift_diff: f64,
    /// Largest distance between Fourier and dense-solver eigenvalues, over
    /// both models.
    pub max_fourier_error: f64,
}

/// Builds the ring in both models, verifies the circulant structure, and
/// compares decay rates and shifts mode by mode.
pub fn certify_ring_rwa_invariance(spec: &RingSpec) -> Result<RingReport> {
    let emitters = ring_emitters(spec);
    let mut spectra = Vec::with_capacity(2);
    let mut max_fourier_error = 0.0f64;
    for model in InteractionModel::ALL {
        let jp = interaction_matrix(&emitters, model, FieldModel::Vector)?;
        check_circulant(&jp)?;
        let row: Vec<C64> = (0..spec.n).map(|j| jp.get(0, j)).collect();
        let fourier = ring_eigenvalues_fourier(&row)?;
        let dense: Vec<C64> = collective_modes(&jp)?.iter().map(|m| m.eigenvalue).collect();
        max_fourier_error = max_fourier_error.max(max_multiset_distance(&fourier, &dense));
        spectra.push(fourier);
    }
    let (exact, rwa) = (&spectra[0], &spectra[1]);
    let max_rate_diff = exact
        .iter()
        .zip(rwa)
        .map(|(a, b)| (a.im - b.im).abs())
        .fold(0.0, f64::max);
    let max_shift_diff = exact
        .iter()
        .zip(rwa)
        .map(|(a, b)| (a.re - b.re).abs())
        .fold(0.0, f64::max);
    if max_rate_diff > INVARIANCE_TOL {
        return Err(Error::RingInvarianceViolated(max_rate_diff));
    }
    Ok(RingReport {
        max_rate_diff,
        max_shift_diff,
        max_fourier_error,
    })
}
