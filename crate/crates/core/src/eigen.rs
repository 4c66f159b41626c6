//! Dense eigensolver for general complex matrices.
//!
//! Householder reduction to upper Hessenberg form, then single-shift QR
//! sweeps with Wilkinson shifts and deflation until the matrix is upper
//! triangular. Eigenvectors come from back-substitution on the triangular
//! factor, mapped back through the accumulated unitary transform.
//!
//! Interaction matrices are complex symmetric, not Hermitian, so nothing
//! here assumes any symmetry.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues in Schur-diagonal order, with unit eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: DMatrix<C64>,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }
}

pub fn eigen(m: &DMatrix<C64>) -> Result<EigenDecomposition> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let mut t = m.clone();
    let mut z = DMatrix::<C64>::identity(n, n);
    hessenberg(&mut t, &mut z);
    schur(&mut t, &mut z)?;
    let values: Vec<C64> = (0..n).map(|k| t[(k, k)]).collect();
    let x = triangular_eigenvectors(&t);
    let mut vectors = &z * x;
    for mut col in vectors.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= C64::new(norm, 0.0);
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    eigen(m).map(|e| e.values)
}

fn hessenberg(a: &mut DMatrix<C64>, z: &mut DMatrix<C64>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x = a.view((k + 1, k), (n - k - 1, 1)).into_owned();
        let xnorm = x.norm();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = v.norm();
        if vnorm == 0.0 {
            continue;
        }
        v /= C64::new(vnorm, 0.0);
        let two = C64::new(2.0, 0.0);

        // A ← (I − 2vv*) A on rows k+1..
        let mut rows = a.view_mut((k + 1, 0), (n - k - 1, n));
        let w = v.adjoint() * &rows;
        rows -= &v * w * two;

        // A ← A (I − 2vv*) on columns k+1..
        let mut cols = a.view_mut((0, k + 1), (n, n - k - 1));
        let w = &cols * &v;
        cols -= w * v.adjoint() * two;

        let mut zc = z.view_mut((0, k + 1), (n, n - k - 1));
        let w = &zc * &v;
        zc -= w * v.adjoint() * two;

        for i in k + 2..n {
            a[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// Rotation `[c, s; −s̄, c]` with real `c`, mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let norm = na.hypot(nb);
    (na / norm, (a / na) * b.conj() / norm)
}

fn rotate_rows(h: &mut DMatrix<C64>, k: usize, c: f64, s: C64, from: usize) {
    for j in from..h.ncols() {
        let x = h[(k, j)];
        let y = h[(k + 1, j)];
        h[(k, j)] = x * c + s * y;
        h[(k + 1, j)] = -s.conj() * x + y * c;
    }
}

fn rotate_cols(h: &mut DMatrix<C64>, k: usize, c: f64, s: C64, to: usize) {
    for i in 0..to {
        let x = h[(i, k)];
        let y = h[(i, k + 1)];
        h[(i, k)] = x * c + y * s.conj();
        h[(i, k + 1)] = -x * s + y * c;
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (r1, r2) = (mean + disc, mean - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

fn schur(h: &mut DMatrix<C64>, z: &mut DMatrix<C64>) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let scale = h.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE / eps;
    let budget = ITERATIONS_PER_EIGENVALUE * n;
    let mut total = 0;
    let mut hi = n - 1;
    let mut since_deflation = 0;
    while hi > 0 {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let threshold = if diag == 0.0 { eps * scale } else { eps * diag };
            if sub <= threshold.max(tiny) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= budget {
            return Err(Error::EigenNoConvergence { iterations: total });
        }
        total += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..hi {
            let (a, b) = if k == lo {
                (h[(lo, lo)] - shift, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(a, b);
            let from = if k == lo { lo } else { k - 1 };
            rotate_rows(h, k, c, s, from);
            let to = (k + 3).min(hi + 1);
            rotate_cols(h, k, c, s, to);
            rotate_cols(z, k, c, s, n);
            if k > lo {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(())
}

/// Columns are eigenvectors of the upper-triangular `t`, with unit entry on
/// the diagonal position.
fn triangular_eigenvectors(t: &DMatrix<C64>) -> DMatrix<C64> {
    let n = t.nrows();
    let norm = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let small = (f64::EPSILON * norm).max(f64::MIN_POSITIVE);
    let degenerate = 1e-10 * norm;
    let mut x = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * x[(j, k)];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < degenerate && acc.norm() < degenerate {
                // Repeated eigenvalue with no coupling: keep the Schur vectors
                // of the eigenspace orthogonal instead of mixing them.
                continue;
            }
            if denom.norm() < small {
                denom = C64::new(small, 0.0);
            }
            x[(i, k)] = -acc / denom;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, symmetric: bool) -> DMatrix<C64> {
        let mut m = DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        if symmetric {
            m = (&m + m.transpose()) * C64::new(0.5, 0.0);
        }
        m
    }

    fn residual(m: &DMatrix<C64>, e: &EigenDecomposition) -> f64 {
        (0..m.nrows())
            .map(|k| {
                let v = e.vector(k);
                (m * &v - &v * e.values[k]).norm()
            })
            .fold(0.0, f64::max)
    }

    fn sorted(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn random_matrices_have_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=12 {
            for symmetric in [false, true] {
                let m = random_matrix(&mut rng, n, symmetric);
                let e = eigen(&m).unwrap();
                assert!(residual(&m, &e) <= 1e-12 * m.norm(), "n={n}");
                for k in 0..n {
                    assert!((e.vector(k).norm() - 1.0).abs() < 1e-14);
                }
                let trace: C64 = (0..n).map(|i| m[(i, i)]).sum();
                let sum: C64 = e.values.iter().sum();
                assert!((trace - sum).norm() < 1e-12 * m.norm().max(1.0));
            }
        }
    }

    #[test]
    fn matches_nalgebra_schur() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8 {
            let m = random_matrix(&mut rng, n, true);
            let ours = sorted(eigenvalues(&m).unwrap());
            let theirs = sorted(m.clone().schur().eigenvalues().unwrap().iter().copied().collect());
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).norm() < 1e-11, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn degenerate_symmetric_triangle() {
        let j = C64::new(0.3, -0.7);
        let o = C64::new(0.0, 0.0);
        let m = DMatrix::from_row_slice(3, 3, &[o, j, j, j, o, j, j, j, o]);
        let e = eigen(&m).unwrap();
        let v = sorted(e.values.clone());
        let expected = sorted(vec![j * 2.0, -j, -j]);
        for (a, b) in v.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(residual(&m, &e) < 1e-14);
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!((gram - DMatrix::<C64>::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn trivial_shapes() {
        assert!(eigen(&DMatrix::<C64>::zeros(0, 0)).unwrap().values.is_empty());
        let z = eigen(&DMatrix::<C64>::zeros(3, 3)).unwrap();
        assert!(z.values.iter().all(|v| v.norm() == 0.0));
        let one = DMatrix::from_element(1, 1, C64::new(2.0, -1.0));
        assert_eq!(eigen(&one).unwrap().values, vec![C64::new(2.0, -1.0)]);
        assert!(matches!(
            eigen(&DMatrix::<C64>::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn antidiagonal_pair() {
        let j = C64::new(-0.4, 0.9);
        let o = C64::new(0.0, 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[o, j, j, o]);
        let v = sorted(eigenvalues(&m).unwrap());
        let expected = sorted(vec![j, -j]);
        assert!((v[0] - expected[0]).norm() < 1e-15 && (v[1] - expected[1]).norm() < 1e-15);
    }

    #[test]
    fn triangular_input_keeps_diagonal() {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            if i <= j {
                C64::new((i + 2 * j) as f64, i as f64 - j as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let v = sorted(eigenvalues(&m).unwrap());
        let d = sorted((0..4).map(|i| m[(i, i)]).collect());
        for (a, b) in v.iter().zip(&d) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
