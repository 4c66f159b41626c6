//! The integrals `I_n(s) = ∫₀^∞ uⁿ e^{-u} / (u² + s²) du`, `n ∈ {0, 1, 2}`.
//!
//! They carry the whole distance dependence of the rotating-wave error term.
//! The integrand has a Lorentzian peak of height `1/s²` and width `s`, so the
//! domain is split at `{s, 1, 10(1 + s)}` and each piece gets a change of
//! variables that flattens it:
//!
//! * `[0, min(s, 1)]`: `u = s·tan θ`, which removes the Lorentzian entirely;
//! * `[s, 1]` (only when `s < 1`): `u = eᵗ`, which tames the `1/u` shoulder;
//! * `[1, s]` (only when `s > 1`) and `[max(s, 1), 10(1 + s)]`: plain;
//! * `[10(1 + s), ∞)`: truncated where the incomplete-gamma bound on the
//!   remainder drops below the tolerance.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::quadrature::integrate_segments;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402;

/// Below this distance the integrals are taken from their small-`s`
/// expansions instead of quadrature.
pub const TINY_S: f64 = 1e-8;

/// Dimensionless separation `s = k₀R`. Always positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DimensionlessDistance(f64);

impl DimensionlessDistance {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s > 0.0 {
            Ok(Self(s))
        } else {
            Err(Error::InvalidDistance(s))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for DimensionlessDistance {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

/// The orders of `I_n` that appear in the dyadic error term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntegralOrder {
    Zero,
    One,
    Two,
}

impl IntegralOrder {
    pub const ALL: [IntegralOrder; 3] = [Self::Zero, Self::One, Self::Two];

    pub fn as_u32(self) -> u32 {
        match self {
            Self::Zero => 0,
            Self::One => 1,
            Self::Two => 2,
        }
    }

    pub fn factorial(self) -> f64 {
        match self {
            Self::Zero | Self::One => 1.0,
            Self::Two => 2.0,
        }
    }
}

impl TryFrom<u32> for IntegralOrder {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        match n {
            0 => Ok(Self::Zero),
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::UnsupportedOrder(n)),
        }
    }
}

/// Accuracy controls for [`integral_in_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralOptions {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

/// `I_n(s)` to a relative accuracy of `1e-10`.
pub fn integral_in(order: IntegralOrder, s: DimensionlessDistance) -> Result<f64> {
    integral_in_with(order, s, &IntegralOptions::default())
}

/// `I_n(s)` with explicit accuracy controls.
pub fn integral_in_with(
    order: IntegralOrder,
    s: DimensionlessDistance,
    opts: &IntegralOptions,
) -> Result<f64> {
    let s = s.value();
    if s < TINY_S {
        return Ok(small_s_expansion(order, s));
    }
    let n = order.as_u32() as i32;

    let theta_end = if s <= 1.0 {
        FRAC_PI_4
    } else {
        (1.0 / s).atan()
    };
    let tail_start = 10.0 * (1.0 + s);
    let tail_end = tail_start + tail_length(n, s, tail_start, opts.rel_tol);

    // (segment kind, a, b) in the variable the kind integrates over.
    let mut kinds = Vec::with_capacity(5);
    let mut segments = Vec::with_capacity(5);
    kinds.push(Kind::Tan);
    segments.push((0.0, theta_end));
    if s < 1.0 {
        kinds.push(Kind::Log);
        segments.push((s.ln(), 0.0));
    }
    if s > 1.0 {
        kinds.push(Kind::Plain);
        segments.push((1.0, s));
    }
    kinds.push(Kind::Plain);
    segments.push((s.max(1.0), tail_start));
    kinds.push(Kind::Plain);
    segments.push((tail_start, tail_end));

    let s2 = s * s;
    let out = integrate_segments(
        &segments,
        |seg, x| match kinds[seg] {
            Kind::Tan => {
                let u = s * x.tan();
                u.powi(n) * (-u).exp() / s
            }
            Kind::Log => {
                let u = x.exp();
                u.powi(n + 1) * (-u).exp() / (u * u + s2)
            }
            Kind::Plain => x.powi(n) * (-x).exp() / (x * x + s2),
        },
        opts.rel_tol,
        opts.max_subdivisions,
    );
    if !out.converged || !out.value.is_finite() {
        return Err(Error::Quadrature {
            order: order.as_u32(),
            s,
            error: out.error,
            subdivisions: out.subdivisions,
        });
    }
    Ok(out.value)
}

/// All three integrals `[I₀(s), I₁(s), I₂(s)]`.
pub fn error_integrals(s: DimensionlessDistance) -> Result<[f64; 3]> {
    Ok([
        integral_in(IntegralOrder::Zero, s)?,
        integral_in(IntegralOrder::One, s)?,
        integral_in(IntegralOrder::Two, s)?,
    ])
}

/// Leading small-`s` behaviour: `π/(2s)`, `−ln s` and `1`.
pub fn in_nearfield_asymptote(order: IntegralOrder, s: DimensionlessDistance) -> f64 {
    let s = s.value();
    match order {
        IntegralOrder::Zero => FRAC_PI_2 / s,
        IntegralOrder::One => -s.ln(),
        IntegralOrder::Two => 1.0,
    }
}

/// Large-`s` behaviour `n!/s²`.
pub fn in_farfield_asymptote(order: IntegralOrder, s: DimensionlessDistance) -> f64 {
    let s = s.value();
    order.factorial() / (s * s)
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Tan,
    Log,
    Plain,
}

// Expansions through the first correction beyond the leading term; the
// neglected pieces are O(s²) relative for every order.
fn small_s_expansion(order: IntegralOrder, s: f64) -> f64 {
    match order {
        IntegralOrder::Zero => FRAC_PI_2 / s + s.ln() + EULER_GAMMA - 1.0,
        IntegralOrder::One => -s.ln() - EULER_GAMMA + FRAC_PI_2 * s,
        IntegralOrder::Two => 1.0 - FRAC_PI_2 * s,
    }
}

/// Upper incomplete gamma `Γ(n+1, a) = e^{-a} Σ_k n!/k! a^k` for small integer `n`.
fn upper_gamma_int(n: i32, a: f64) -> f64 {
    let poly = match n {
        0 => 1.0,
        1 => 1.0 + a,
        _ => 2.0 + 2.0 * a + a * a,
    };
    (-a).exp() * poly
}

/// Length of the tail interval beyond `start` such that the neglected
/// remainder `∫_{start+L}^∞` is below `1e-3 · rel_tol` of a lower bound on `I_n`.
fn tail_length(n: i32, s: f64, start: f64, rel_tol: f64) -> f64 {
    // I_n(s) ≥ ∫₀¹ uⁿ e^{-1} / (1 + s²) du.
    let lower = (-1.0f64).exp() / ((f64::from(n) + 1.0) * (1.0 + s * s));
    let budget = 1e-3 * rel_tol * lower;
    let mut len = 40.0;
    loop {
        let a = start + len;
        if upper_gamma_int(n, a) / (a * a + s * s) <= budget || len > 1e4 {
            return len;
        }
        len *= 1.5;
    }
}
