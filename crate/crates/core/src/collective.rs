//! Collective resonances of coupled emitters.
//!
//! A resonance sits at `ω = Ω + X + ν` where `ν` is an eigenvalue of
//! `J′ + diag(detunings)`. With `X = −i`, the mode's level shift is `Re ν`
//! and its decay rate is `1 − Im ν`, both in units of `γ`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::eigen::eigen;
use crate::emitters::{resonance_matrix, EmitterSpec, InteractionMatrix, InteractionValue};
use crate::error::{Error, Result};
use crate::C64;

/// Default gap (in `γ`) below which a positive local minimum of the
/// decay-rate gap between two branches counts as an avoided crossing.
pub const DEFAULT_AVOIDED_CROSSING_GAP: f64 = 0.3;

/// Overlap below which consecutive eigenvectors on a branch are considered
/// discontinuous.
pub const CONTINUITY_OVERLAP: f64 = 0.5;

const RATE_FLOOR: f64 = -1e-9;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveMode {
    pub eigenvalue: C64,
    pub eigenvector: DVector<C64>,
}

impl CollectiveMode {
    pub fn shift(&self) -> f64 {
        self.eigenvalue.re
    }

    pub fn rate(&self) -> f64 {
        1.0 - self.eigenvalue.im
    }
}

fn unit(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v / C64::new(n, 0.0)
}

fn mode(eigenvalue: C64, eigenvector: DVector<C64>) -> CollectiveMode {
    CollectiveMode {
        eigenvalue,
        eigenvector: unit(eigenvector),
    }
}

/// Symmetric and antisymmetric modes `ν = ±J` of two identical emitters.
pub fn two_atom_identical(j: InteractionValue) -> (CollectiveMode, CollectiveMode) {
    let one = C64::new(1.0, 0.0);
    (
        mode(j.0, DVector::from_vec(vec![one, one])),
        mode(-j.0, DVector::from_vec(vec![one, -one])),
    )
}

/// Modes `ν = ±√(δ² + J²)` of two emitters at `Ω ± δ`, using the principal
/// square root for the `+` mode.
pub fn two_atom_detuned(j: InteractionValue, delta: f64) -> (CollectiveMode, CollectiveMode) {
    let d = C64::new(delta, 0.0);
    let root = (d * d + j.0 * j.0).sqrt();
    let vector = |nu: C64| {
        // Null vectors of [[δ − ν, J], [J, −δ − ν]]; take the better conditioned one.
        let a = DVector::from_vec(vec![j.0, nu - d]);
        let b = DVector::from_vec(vec![nu + d, j.0]);
        let (na, nb) = (a.norm(), b.norm());
        if na == 0.0 && nb == 0.0 {
            DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
        } else if na >= nb {
            a
        } else {
            b
        }
    };
    let plus = if root == C64::new(0.0, 0.0) || j.0 != C64::new(0.0, 0.0) {
        vector(root)
    } else if delta >= 0.0 {
        DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    } else {
        DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    };
    let minus = if j.0 != C64::new(0.0, 0.0) {
        vector(-root)
    } else if delta >= 0.0 {
        DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    } else {
        DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    };
    (mode(root, plus), mode(-root, minus))
}

/// Collective modes of identical emitters coupled by `J′`, ordered by
/// decreasing decay rate.
pub fn collective_modes(jp: &InteractionMatrix) -> Result<Vec<CollectiveMode>> {
    modes_of(jp.matrix())
}

/// Collective modes including each emitter's detuning on the diagonal.
pub fn collective_modes_detuned(
    emitters: &[EmitterSpec],
    jp: &InteractionMatrix,
) -> Result<Vec<CollectiveMode>> {
    modes_of(&resonance_matrix(emitters, jp)?)
}

fn modes_of(m: &DMatrix<C64>) -> Result<Vec<CollectiveMode>> {
    let e = eigen(m)?;
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let mut modes = Vec::with_capacity(e.values.len());
    for (k, &nu) in e.values.iter().enumerate() {
        let v = e.vector(k);
        if (m * &v - &v * nu).norm() > RESIDUAL_TOL * scale {
            return Err(Error::EigenNoConvergence { iterations: 0 });
        }
        let rate = 1.0 - nu.im;
        if rate < RATE_FLOOR {
            return Err(Error::NegativeRate(rate));
        }
        modes.push(CollectiveMode {
            eigenvalue: nu,
            eigenvector: v,
        });
    }
    modes.sort_by(|a, b| {
        b.rate()
            .total_cmp(&a.rate())
            .then(a.shift().total_cmp(&b.shift()))
    });
    Ok(modes)
}

/// Largest difference between the decay-rate spectra of two mode sets,
/// both sorted by rate, in units of `γ`.
pub fn max_rate_discrepancy(a: &[CollectiveMode], b: &[CollectiveMode]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let sorted = |m: &[CollectiveMode]| {
        let mut r: Vec<f64> = m.iter().map(CollectiveMode::rate).collect();
        r.sort_by(f64::total_cmp);
        r
    };
    Ok(sorted(a)
        .iter()
        .zip(sorted(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// One mode followed across a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBranch {
    pub params: Vec<f64>,
    pub modes: Vec<CollectiveMode>,
    /// Sweep indices `k` where the overlap between steps `k − 1` and `k`
    /// fell below [`CONTINUITY_OVERLAP`].
    pub discontinuities: Vec<usize>,
}

impl ModeBranch {
    pub fn rates(&self) -> Vec<f64> {
        self.modes.iter().map(CollectiveMode::rate).collect()
    }

    pub fn shifts(&self) -> Vec<f64> {
        self.modes.iter().map(CollectiveMode::shift).collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuities.is_empty()
    }
}

/// Diagonalises every matrix of a sweep (in parallel) and links the modes
/// into branches.
pub fn track_modes(params: &[f64], matrices: &[InteractionMatrix]) -> Result<Vec<ModeBranch>> {
    if params.len() != matrices.len() {
        return Err(Error::MismatchedGrids);
    }
    let sets = matrices
        .par_iter()
        .map(collective_modes)
        .collect::<Result<Vec<_>>>()?;
    track_mode_sets(params, sets)
}

/// Links precomputed mode sets into branches by eigenvector overlap.
///
/// At each step every new mode goes to the branch whose previous eigenvector
/// it overlaps most, greedily by decreasing overlap with ties resolved by
/// eigenvalue proximity. Degenerate eigenvalues are matched through the
/// overlap with their whole eigenspace, and the branch vectors are then
/// re-chosen inside that eigenspace as the projections of the previous ones.
pub fn track_mode_sets(params: &[f64], sets: Vec<Vec<CollectiveMode>>) -> Result<Vec<ModeBranch>> {
    if params.len() != sets.len() {
        return Err(Error::MismatchedGrids);
    }
    if params.len() < 2 {
        return Err(Error::SweepTooShort(params.len()));
    }
    if let Some(k) = (1..params.len()).find(|&k| !(params[k] > params[k - 1])) {
        return Err(Error::UnsortedSweep(k));
    }
    let n = sets[0].len();
    if let Some(bad) = sets.iter().find(|s| s.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }

    let mut sets = sets.into_iter();
    let first = sets.next().expect("at least two sets");
    let mut branches: Vec<ModeBranch> = first
        .into_iter()
        .map(|m| ModeBranch {
            params: vec![params[0]],
            modes: vec![m],
            discontinuities: Vec::new(),
        })
        .collect();

    for (k, set) in sets.enumerate() {
        let step = k + 1;
        let previous: Vec<&CollectiveMode> =
            branches.iter().map(|b| b.modes.last().expect("non-empty")).collect();
        let (assignment, overlaps, new_vectors) = match_step(&previous, &set);
        let mut set: Vec<Option<CollectiveMode>> = set.into_iter().map(Some).collect();
        for (b, branch) in branches.iter_mut().enumerate() {
            let j = assignment[b];
            let mut m = set[j].take().expect("assignment is a permutation");
            m.eigenvector = new_vectors[b].clone();
            if overlaps[b] < CONTINUITY_OVERLAP {
                branch.discontinuities.push(step);
            }
            branch.params.push(params[step]);
            branch.modes.push(m);
        }
    }
    Ok(branches)
}

/// Groups eigenvalues closer than a relative tolerance.
fn clusters(modes: &[CollectiveMode]) -> Vec<usize> {
    let scale = modes
        .iter()
        .map(|m| m.eigenvalue.norm())
        .fold(1.0, f64::max);
    let tol = 1e-8 * scale;
    let mut label: Vec<usize> = (0..modes.len()).collect();
    for i in 0..modes.len() {
        for j in 0..i {
            if (modes[i].eigenvalue - modes[j].eigenvalue).norm() <= tol {
                label[i] = label[j];
                break;
            }
        }
    }
    label
}

/// Orthonormal basis (modified Gram–Schmidt) of the given vectors' span.
fn orthonormal(vectors: &[&DVector<C64>]) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for v in vectors {
        let mut w = (*v).clone();
        for q in &basis {
            let c = q.dotc(&w);
            w -= q * c;
        }
        let norm = w.norm();
        if norm > 1e-8 {
            basis.push(w / C64::new(norm, 0.0));
        }
    }
    basis
}

fn project_onto(basis: &[DVector<C64>], v: &DVector<C64>) -> DVector<C64> {
    let mut p = DVector::zeros(v.len());
    for q in basis {
        p += q * q.dotc(v);
    }
    p
}

/// Returns, per branch, the index of the new mode, the overlap achieved and
/// the phase-aligned eigenvector to store.
fn match_step(
    previous: &[&CollectiveMode],
    next: &[CollectiveMode],
) -> (Vec<usize>, Vec<f64>, Vec<DVector<C64>>) {
    let n = next.len();
    let label = clusters(next);
    let mut bases: Vec<Vec<DVector<C64>>> = vec![Vec::new(); n];
    for c in 0..n {
        let members: Vec<&DVector<C64>> = (0..n)
            .filter(|&j| label[j] == c)
            .map(|j| &next[j].eigenvector)
            .collect();
        if members.len() > 1 {
            bases[c] = orthonormal(&members);
        }
    }

    let overlap = |b: usize, j: usize| {
        let p = &previous[b].eigenvector;
        let basis = &bases[label[j]];
        if basis.is_empty() {
            next[j].eigenvector.dotc(p).norm()
        } else {
            project_onto(basis, p).norm()
        }
    };

    let mut candidates = Vec::with_capacity(n * n);
    for b in 0..n {
        for j in 0..n {
            let distance = (previous[b].eigenvalue - next[j].eigenvalue).norm();
            candidates.push((overlap(b, j), distance, b, j));
        }
    }
    candidates.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.cmp(&y.2))
            .then(x.3.cmp(&y.3))
    });

    let mut assignment = vec![usize::MAX; n];
    let mut achieved = vec![0.0; n];
    let mut taken = vec![false; n];
    for (o, _, b, j) in candidates {
        if assignment[b] == usize::MAX && !taken[j] {
            assignment[b] = j;
            achieved[b] = o;
            taken[j] = true;
        }
    }

    // Inside degenerate eigenspaces, continue each branch along its own
    // projection, orthogonalised against branches already placed there.
    let mut vectors = vec![DVector::zeros(0); n];
    let mut placed: Vec<Vec<DVector<C64>>> = vec![Vec::new(); n];
    for b in 0..n {
        let j = assignment[b];
        let c = label[j];
        let p = &previous[b].eigenvector;
        let mut v = if bases[c].is_empty() {
            next[j].eigenvector.clone()
        } else {
            let mut w = project_onto(&bases[c], p);
            for q in &placed[c] {
                let coeff = q.dotc(&w);
                w -= q * coeff;
            }
            if w.norm() < 1e-8 {
                // Fall back to any direction of the eigenspace not yet used.
                let mut fallback = next[j].eigenvector.clone();
                for q in &placed[c] {
                    let coeff = q.dotc(&fallback);
                    fallback -= q * coeff;
                }
                if fallback.norm() < 1e-8 {
                    fallback = next[j].eigenvector.clone();
                }
                fallback
            } else {
                w
            }
        };
        v = unit(v);
        let phase = v.dotc(p);
        if phase.norm() > 0.0 {
            v *= phase / phase.norm();
        }
        if !bases[c].is_empty() {
            placed[c].push(v.clone());
        }
        vectors[b] = v;
    }
    (assignment, achieved, vectors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    Crossing,
    AvoidedCrossing,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingReport {
    pub kind: CrossingKind,
    /// Interpolated crossing point, or the grid point of the gap minimum.
    pub location: Option<f64>,
    /// Smallest `|rate₁ − rate₂|` over the grid.
    pub min_gap: f64,
}

/// Classifies how the decay rates of two branches meet.
///
/// A sign change of the gap between adjacent grid points, on a step where
/// both branches stay continuous, is a crossing. Otherwise a strict interior
/// local minimum of `|gap|` that is positive and below `threshold` is an
/// avoided crossing (the deepest one is reported).
pub fn classify_crossing(b1: &ModeBranch, b2: &ModeBranch, threshold: f64) -> Result<CrossingReport> {
    if b1.params != b2.params {
        return Err(Error::MismatchedGrids);
    }
    let x = &b1.params;
    let gap: Vec<f64> = b1
        .rates()
        .iter()
        .zip(b2.rates())
        .map(|(a, b)| a - b)
        .collect();
    let min_gap = gap.iter().map(|g| g.abs()).fold(f64::INFINITY, f64::min);

    for k in 0..gap.len().saturating_sub(1) {
        let (g0, g1) = (gap[k], gap[k + 1]);
        let flips = (g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0);
        let continuous = !b1.discontinuities.contains(&(k + 1)) && !b2.discontinuities.contains(&(k + 1));
        if flips && continuous {
            let t = g0 / (g0 - g1);
            return Ok(CrossingReport {
                kind: CrossingKind::Crossing,
                location: Some(x[k] + t * (x[k + 1] - x[k])),
                min_gap,
            });
        }
    }

    let mut best: Option<(usize, f64)> = None;
    for k in 1..gap.len().saturating_sub(1) {
        let g = gap[k].abs();
        if g > 0.0 && g < gap[k - 1].abs() && g < gap[k + 1].abs() && g < threshold {
            if best.is_none_or(|(_, b)| g < b) {
                best = Some((k, g));
            }
        }
    }
    Ok(match best {
        Some((k, _)) => CrossingReport {
            kind: CrossingKind::AvoidedCrossing,
            location: Some(x[k]),
            min_gap,
        },
        None => CrossingReport {
            kind: CrossingKind::Neither,
            location: None,
            min_gap,
        },
    })
}

/// `|D(ω)|⁻²` with `D(ω) = (ω − δ + i)(ω + δ + i) − J²`.
pub fn two_atom_spectrum(omega: &[f64], j: InteractionValue, delta: f64) -> Vec<f64> {
    omega
        .iter()
        .map(|&w| {
            let z = C64::new(w, 1.0);
            let d = (z - delta) * (z + delta) - j.0 * j.0;
            1.0 / d.norm_sqr()
        })
        .collect()
}

/// `|Πₗ(ω + i − νₗ)|⁻²` over the collective eigenvalues `νₗ`; for two
/// emitters this is [`two_atom_spectrum`].
pub fn collective_spectrum(omega: &[f64], eigenvalues: &[C64]) -> Vec<f64> {
    omega
        .iter()
        .map(|&w| {
            let z = C64::new(w, 1.0);
            let d: C64 = eigenvalues.iter().map(|&nu| z - nu).product();
            1.0 / d.norm_sqr()
        })
        .collect()
}

/// Whether the two-emitter splitting `2|Re J|` is resolvable against the
/// linewidth: `|Re J| ≥ 1`.
pub fn rayleigh_visible(j: InteractionValue) -> bool {
    j.re().abs() >= 1.0
}

/// `C = rate − 1` for a collective decay rate in units of `γ`.
pub fn cooperativity(rate: f64) -> Result<f64> {
    if rate < 0.0 || rate.is_nan() {
        return Err(Error::NegativeRate(rate));
    }
    Ok(rate - 1.0)
}
