//! Free-space propagators divided by `k₀`, in the exact and RWA models.
//!
//! The exact propagator is the classical Green function. The RWA propagator
//! `K⁺` differs from it by a purely real term built from the integrals in
//! [`crate::specfun`], so the two always share their imaginary parts.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::specfun::{error_integrals, integral_in, DimensionlessDistance, IntegralOrder};
use crate::{Vec3, C64};

/// Tolerance on `|v| − 1` for anything documented as a unit vector.
pub const UNIT_TOL: f64 = 1e-12;

/// Separations below this are deep in the ultrastrong regime, where the
/// pole approximation behind every coupling in this crate stops being
/// trustworthy. Values are still computed there.
pub const ULTRASTRONG_BELOW: f64 = 0.018;

pub(crate) fn check_unit(v: &Vec3) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() <= UNIT_TOL {
        Ok(())
    } else {
        Err(Error::NotUnitVector(norm))
    }
}

/// Distance `s = k₀R` and unit direction `r̂` between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationGeometry {
    s: DimensionlessDistance,
    rhat: Vec3,
}

impl SeparationGeometry {
    pub fn new(s: DimensionlessDistance, rhat: Vec3) -> Result<Self> {
        check_unit(&rhat)?;
        Ok(Self { s, rhat })
    }

    /// Geometry of the vector from `from` to `to`, both in `1/k₀` units.
    pub fn between(from: &Vec3, to: &Vec3) -> Result<Self> {
        let r = to - from;
        let s = DimensionlessDistance::new(r.norm())?;
        Ok(Self {
            s,
            rhat: r / s.value(),
        })
    }

    /// Separation along `ẑ`, the axis used by the x–x and z–z pairs.
    pub fn along_z(s: DimensionlessDistance) -> Self {
        Self { s, rhat: Vec3::z() }
    }

    pub fn distance(&self) -> DimensionlessDistance {
        self.s
    }

    pub fn s(&self) -> f64 {
        self.s.value()
    }

    pub fn rhat(&self) -> Vec3 {
        self.rhat
    }

    /// The same separation seen from the other endpoint.
    pub fn reversed(&self) -> Self {
        Self {
            s: self.s,
            rhat: -self.rhat,
        }
    }

    pub fn is_ultrastrong(&self) -> bool {
        self.s() < ULTRASTRONG_BELOW
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldModel {
    Scalar,
    Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InteractionModel {
    Exact,
    Rwa,
}

impl InteractionModel {
    pub const ALL: [InteractionModel; 2] = [Self::Exact, Self::Rwa];

    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Rwa => "rwa",
        }
    }
}

/// A 3×3 complex tensor in units of `k₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicValue(pub Matrix3<C64>);

impl DyadicValue {
    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn re(&self) -> Matrix3<f64> {
        self.0.map(|z| z.re)
    }

    pub fn im(&self) -> Matrix3<f64> {
        self.0.map(|z| z.im)
    }

    fn from_real(m: Matrix3<f64>) -> Self {
        Self(m.map(|x| C64::new(x, 0.0)))
    }
}

/// `I − r̂r̂` and `I − 3r̂r̂`.
fn dyads(rhat: &Vec3) -> (Matrix3<f64>, Matrix3<f64>) {
    let outer = rhat * rhat.transpose();
    let id = Matrix3::identity();
    (id - outer, id - 3.0 * outer)
}

/// `−e^{is}/(4πs)`.
pub fn scalar_green(s: DimensionlessDistance) -> C64 {
    let s = s.value();
    -C64::from_polar(1.0, s) / (4.0 * PI * s)
}

/// Scalar RWA propagator `−e^{is}/(4πs) − I₂(s)/(2πs)²`.
pub fn scalar_rwa(s: DimensionlessDistance) -> Result<C64> {
    let i2 = integral_in(IntegralOrder::Two, s)?;
    Ok(scalar_green(s) - scalar_error(s.value(), i2))
}

fn scalar_error(s: f64, i2: f64) -> f64 {
    i2 / (2.0 * PI * s).powi(2)
}

pub fn scalar_propagator(model: InteractionModel, s: DimensionlessDistance) -> Result<C64> {
    match model {
        InteractionModel::Exact => Ok(scalar_green(s)),
        InteractionModel::Rwa => scalar_rwa(s),
    }
}

/// Dyadic Green function
/// `−e^{is}/(4πs)·[(I − r̂r̂) + (i/s − 1/s²)(I − 3r̂r̂)]`.
pub fn dyadic_green(g: &SeparationGeometry) -> DyadicValue {
    let s = g.s();
    let (transverse, longitudinal) = dyads(&g.rhat);
    let pre = scalar_green(g.s);
    let near = C64::new(-1.0 / (s * s), 1.0 / s);
    DyadicValue(transverse.map(|x| pre * x) + longitudinal.map(|x| pre * near * x))
}

/// Dyadic RWA propagator: the Green function minus
/// `I₂/(2πs)²·(I − r̂r̂) + (I₁ + I₀)/(2πs)²·(I − 3r̂r̂)`.
pub fn dyadic_rwa(g: &SeparationGeometry) -> Result<DyadicValue> {
    let err = dyadic_error(g)?;
    Ok(DyadicValue(dyadic_green(g).0 - DyadicValue::from_real(err).0))
}

fn dyadic_error(g: &SeparationGeometry) -> Result<Matrix3<f64>> {
    let s = g.s();
    let [i0, i1, i2] = error_integrals(g.s)?;
    let (transverse, longitudinal) = dyads(&g.rhat);
    let scale = (2.0 * PI * s).powi(2);
    Ok(transverse * (i2 / scale) + longitudinal * ((i1 + i0) / scale))
}

pub fn dyadic_propagator(model: InteractionModel, g: &SeparationGeometry) -> Result<DyadicValue> {
    match model {
        InteractionModel::Exact => Ok(dyadic_green(g)),
        InteractionModel::Rwa => dyadic_rwa(g),
    }
}

/// `K_RWA − G`, which must be real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RwaErrorTerm {
    Scalar(f64),
    Dyadic(Matrix3<f64>),
}

impl RwaErrorTerm {
    /// Largest absolute entry.
    pub fn magnitude(&self) -> f64 {
        match self {
            Self::Scalar(x) => x.abs(),
            Self::Dyadic(m) => m.amax(),
        }
    }
}

/// `K_RWA − G` for the given field model, computed as the difference of the
/// two full propagators and checked to be real to `1e−12` of its size.
pub fn rwa_error(g: &SeparationGeometry, field: FieldModel) -> Result<RwaErrorTerm> {
    match field {
        FieldModel::Scalar => {
            let diff = scalar_rwa(g.s)? - scalar_green(g.s);
            check_real(diff.im.abs(), diff.norm())?;
            Ok(RwaErrorTerm::Scalar(diff.re))
        }
        FieldModel::Vector => {
            let diff = dyadic_rwa(g)?.0 - dyadic_green(g).0;
            let imag = diff.map(|z| z.im).amax();
            let magnitude = diff.map(|z| z.norm()).max();
            check_real(imag, magnitude)?;
            Ok(RwaErrorTerm::Dyadic(diff.map(|z| z.re)))
        }
    }
}

fn check_real(imag: f64, magnitude: f64) -> Result<()> {
    if imag <= 1e-12 * magnitude {
        Ok(())
    } else {
        Err(Error::ComplexRwaError { imag, magnitude })
    }
}

/// Bilinear form `μ̂₁ᵀ·d·μ̂₂`.
pub fn project(d: &DyadicValue, mu1: &Vec3, mu2: &Vec3) -> Result<C64> {
    check_unit(mu1)?;
    check_unit(mu2)?;
    Ok(project_unchecked(d, mu1, mu2))
}

pub(crate) fn project_unchecked(d: &DyadicValue, mu1: &Vec3, mu2: &Vec3) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += d.0[(i, j)] * (mu1[i] * mu2[j]);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: f64) -> DimensionlessDistance {
        DimensionlessDistance::new(s).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn scalar_green_values() {
        let g = scalar_green(d(PI));
        assert!((g.re - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
        assert!(g.im.abs() < 1e-16);
        let g = scalar_green(d(PI / 2.0));
        assert!(g.re.abs() < 1e-16);
        assert!((g.im + 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        for s in [0.1, 1.3, 7.0] {
            assert!((scalar_green(d(s)).im + s.sin() / (4.0 * PI * s)).abs() < 1e-15);
        }
    }

    #[test]
    fn scalar_error_at_unit_distance() {
        let i2 = 0.378_550_375_764_186_64;
        let err = scalar_rwa(d(1.0)).unwrap() - scalar_green(d(1.0));
        assert!((err.re + i2 / (4.0 * PI * PI)).abs() < 1e-13);
        assert_eq!(err.im, 0.0);
    }

    #[test]
    fn zz_has_no_far_field_term() {
        for s in [0.3, 2.0, 9.0] {
            let v = project(&dyadic_green(&SeparationGeometry::along_z(d(s))), &Vec3::z(), &Vec3::z()).unwrap();
            let expected = C64::from_polar(1.0, s) / (2.0 * PI * s) * C64::new(-1.0 / (s * s), 1.0 / s);
            assert!(close(v, expected, 1e-14));
        }
    }

    #[test]
    fn xx_component() {
        let s = 1.7;
        let v = project(&dyadic_green(&SeparationGeometry::along_z(d(s))), &Vec3::x(), &Vec3::x()).unwrap();
        let expected = -C64::from_polar(1.0, s) / (4.0 * PI * s) * C64::new(1.0 - 1.0 / (s * s), 1.0 / s);
        assert!(close(v, expected, 1e-14));
    }

    #[test]
    fn near_field_factor_half() {
        let g = SeparationGeometry::along_z(d(1e-3));
        let exact = dyadic_green(&g);
        let rwa = dyadic_rwa(&g).unwrap();
        for mu in [Vec3::x(), Vec3::z()] {
            let ratio = project(&rwa, &mu, &mu).unwrap().re / project(&exact, &mu, &mu).unwrap().re;
            assert!((ratio - 0.5).abs() < 0.005, "{ratio}");
        }
    }

    #[test]
    fn far_field_agreement() {
        let g = SeparationGeometry::along_z(d(50.0));
        let exact = dyadic_green(&g).0;
        let rwa = dyadic_rwa(&g).unwrap().0;
        let xx = exact[(0, 0)];
        assert!((rwa[(0, 0)] - xx).norm() < 1e-4 * xx.norm());
    }

    #[test]
    fn scalar_near_field_ratio_diverges() {
        let mut last = 0.0;
        for s in [0.1, 0.01, 0.001] {
            let r = scalar_rwa(d(s)).unwrap().re / scalar_green(d(s)).re;
            assert!(r > last);
            last = r;
        }
        assert!(last > 100.0);
    }

    #[test]
    fn scalar_ten_percent_point() {
        let rel = |s: f64| {
            let e = scalar_green(d(s));
            ((scalar_rwa(d(s)).unwrap() - e) / e).re
        };
        let (mut lo, mut hi) = (0.5, 1.2);
        assert!(rel(lo).abs() > 0.1 && rel(hi).abs() < 0.1);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if rel(mid).abs() > 0.1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((hi - 0.87).abs() < 0.02, "{hi}");
    }

    #[test]
    fn error_scaling_in_near_field() {
        let vec_err = |s: f64| rwa_error(&SeparationGeometry::along_z(d(s)), FieldModel::Vector).unwrap().magnitude();
        let sc_err = |s: f64| rwa_error(&SeparationGeometry::along_z(d(s)), FieldModel::Scalar).unwrap().magnitude();
        let p_vec = (vec_err(1e-4) / vec_err(1e-5)).log10();
        let p_sc = (sc_err(1e-4) / sc_err(1e-5)).log10();
        assert!((p_vec + 3.0).abs() < 0.01, "{p_vec}");
        assert!((p_sc + 2.0).abs() < 0.01, "{p_sc}");
    }

    #[test]
    fn projection_examples() {
        let r = Vec3::new(1.0, 2.0, -2.0) / 3.0;
        let (t, l) = dyads(&r);
        let mu = Vec3::new(0.0, 0.6, 0.8);
        assert!((project(&DyadicValue::from_real(Matrix3::identity()), &mu, &mu).unwrap() - 1.0).norm() < 1e-15);
        assert!((project(&DyadicValue::from_real(l), &r, &r).unwrap() + 2.0).norm() < 1e-15);
        assert!(project(&DyadicValue::from_real(t), &r, &r).unwrap().norm() < 1e-15);
        assert!(matches!(
            project(&DyadicValue::from_real(t), &(r * 1.01), &r),
            Err(Error::NotUnitVector(_))
        ));
    }

    #[test]
    fn rejects_non_unit_direction() {
        assert!(SeparationGeometry::new(d(1.0), Vec3::new(1.0, 1e-5, 0.0)).is_err());
        assert!(SeparationGeometry::between(&Vec3::zeros(), &Vec3::zeros()).is_err());
        assert!(SeparationGeometry::along_z(d(0.01)).is_ultrastrong());
    }

    fn direction() -> impl Strategy<Value = Vec3> {
        (-1.0f64..1.0, 0.0..2.0 * PI).prop_map(|(c, phi)| {
            let st = (1.0 - c * c).sqrt();
            Vec3::new(st * phi.cos(), st * phi.sin(), c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn imaginary_parts_agree(log_s in -3.0f64..2.5, r in direction()) {
            let g = SeparationGeometry::new(d(10f64.powf(log_s)), r.normalize()).unwrap();
            let exact = dyadic_green(&g);
            let rwa = dyadic_rwa(&g).unwrap();
            let scale = exact.0.map(|z| z.norm()).max();
            prop_assert!((rwa.im() - exact.im()).amax() <= 1e-10 * scale);
            let s = g.distance();
            prop_assert_eq!(scalar_rwa(s).unwrap().im, scalar_green(s).im);
            prop_assert!(rwa_error(&g, FieldModel::Vector).is_ok());
        }

        #[test]
        fn reciprocal_and_symmetric(log_s in -2.0f64..2.0, r in direction(), m1 in direction(), m2 in direction()) {
            let g = SeparationGeometry::new(d(10f64.powf(log_s)), r.normalize()).unwrap();
            let (m1, m2) = (m1.normalize(), m2.normalize());
            for model in InteractionModel::ALL {
                let fwd = dyadic_propagator(model, &g).unwrap();
                let back = dyadic_propagator(model, &g.reversed()).unwrap();
                prop_assert!((fwd.0 - fwd.transpose().0).map(|z| z.norm()).max() == 0.0);
                let a = project(&fwd, &m1, &m2).unwrap();
                let b = project(&back, &m2, &m1).unwrap();
                prop_assert!((a - b).norm() <= 1e-13 * fwd.0.map(|z| z.norm()).max());
            }
        }
    }
}
