//! Globally adaptive Gauss–Kronrod (7/15) quadrature over a set of segments.
//!
//! Each segment may use its own integrand (typically the same function after
//! a different change of variables), so peaked pieces and smooth pieces share
//! one error budget and the interval with the largest error is always refined
//! first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    segment: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f(segment, x)` over every `(a, b)` in `segments` and returns
/// the summed value. Refinement stops once the total error estimate is below
/// `rel_tol * |value|`, or after `max_subdivisions` bisections.
pub(crate) fn integrate_segments<F>(
    segments: &[(f64, f64)],
    f: F,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadOutcome
where
    F: Fn(usize, f64) -> f64,
{
    let mut heap = BinaryHeap::with_capacity(segments.len() + 2 * max_subdivisions);
    for (segment, &(a, b)) in segments.iter().enumerate() {
        if b <= a {
            continue;
        }
        let g = |x: f64| f(segment, x);
        let (value, error) = gk15(&g, a, b);
        heap.push(Piece {
            segment,
            a,
            b,
            value,
            error,
        });
    }

    let totals = |heap: &BinaryHeap<Piece>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };

    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(&heap);
        // Floor at a few ulps of the result so round-off cannot stall the loop.
        let target = (rel_tol * value.abs()).max(4.0 * f64::EPSILON * value.abs());
        if error <= target || heap.is_empty() {
            return QuadOutcome {
                value,
                error,
                subdivisions,
                converged: true,
            };
        }
        if subdivisions >= max_subdivisions {
            return QuadOutcome {
                value,
                error,
                subdivisions,
                converged: false,
            };
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point; accept it.
            heap.push(Piece { error: 0.0, ..worst });
            subdivisions += 1;
            continue;
        }
        let g = |x: f64| f(worst.segment, x);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&g, a, b);
            heap.push(Piece {
                segment: worst.segment,
                a,
                b,
                value,
                error,
            });
        }
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let out = integrate_segments(&[(0.0, 2.0)], |_, x| x.powi(5) - 3.0 * x, 1e-14, 10);
        assert!(out.converged);
        assert!((out.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn peaked_lorentzian_adapts() {
        let eps = 1e-4_f64;
        let out = integrate_segments(
            &[(-1.0, 0.0), (0.0, 1.0)],
            |_, x| eps / (x * x + eps * eps),
            1e-12,
            2000,
        );
        assert!(out.converged);
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((out.value - exact).abs() / exact < 1e-11);
    }

    #[test]
    fn reports_non_convergence() {
        let out = integrate_segments(&[(0.0, 1.0)], |_, x| (1.0 / x).sin() / x, 1e-14, 3);
        assert!(!out.converged);
        assert_eq!(out.subdivisions, 3);
    }
}
