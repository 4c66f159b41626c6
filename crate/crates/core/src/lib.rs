//! Collective spontaneous emission of point dipole emitters in free space.
//!
//! Every quantity is dimensionless: lengths are measured in units of `1/k₀`
//! (so a separation is the number `s = k₀R`), propagators are divided by `k₀`,
//! and energies and rates are expressed in units of the single-emitter
//! amplitude decay rate `γ = −Im X`.
//!
//! Two light–matter interaction models are supported throughout:
//!
//! * [`InteractionModel::Exact`]: the full dipole coupling, whose induced
//!   propagator is the classical free-space Green function;
//! * [`InteractionModel::Rwa`]: the rotating-wave approximation, whose
//!   propagator carries an extra, purely real error term built from the
//!   integrals `I_n(s) = ∫₀^∞ uⁿ e^{-u} / (u² + s²) du`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] evaluates `I_n(s)` and its asymptotes;
//! * [`propagator`] builds scalar and dyadic propagators in both models;
//! * [`emitters`] turns propagators into interatomic couplings `J/γ`;
//! * [`collective`] solves for collective resonances and tracks them;
//! * [`ring`] handles cyclic configurations analytically.

pub mod collective;
pub mod eigen;
pub mod emitters;
pub mod propagator;
pub mod ring;
pub mod specfun;

mod error;
mod quadrature;

pub use collective::{
    classify_crossing, collective_modes, collective_modes_detuned, collective_spectrum,
    cooperativity,
    max_rate_discrepancy, rayleigh_visible, track_mode_sets, track_modes, two_atom_detuned,
    two_atom_identical, two_atom_spectrum, CollectiveMode, CrossingKind, CrossingReport,
    ModeBranch, DEFAULT_AVOIDED_CROSSING_GAP,
};
pub use emitters::{
    collinear, interaction, interaction_matrix, interaction_ratio, resonance_matrix,
    rotated_triangle, self_interaction, symmetric_triangle,
    Constellation, EmitterSpec, InteractionMatrix, InteractionRatio, InteractionValue,
};
pub use error::{Error, Result};
pub use propagator::{
    dyadic_green, dyadic_propagator, dyadic_rwa, project, rwa_error, scalar_green,
    scalar_propagator, scalar_rwa, DyadicValue,
    FieldModel, InteractionModel, RwaErrorTerm, SeparationGeometry,
};
pub use ring::{
    certify_ring_rwa_invariance, check_circulant, max_multiset_distance, ring_eigenvalues_fourier,
    ring_emitters, DipoleStyle,
    RingReport, RingSpec,
};
pub use specfun::{
    in_farfield_asymptote, in_nearfield_asymptote, integral_in, DimensionlessDistance,
    IntegralOrder,
};

/// Complex scalar used for every propagator and coupling value.
pub type C64 = num_complex::Complex64;

/// Real 3-vector used for positions (in `1/k₀` units) and dipole directions.
pub type Vec3 = nalgebra::Vector3<f64>;
