//! Dense eigensolver checked against independent oracles: a Sturm-sequence
//! bisection on the characteristic polynomial of a small Hermitian
//! quasiperiodic chain, closed-form spectra, and generic residual/trace/
//! determinant invariants on random non-normal matrices.

use fqc_numerics::{det_phase_and_log_abs, eig_dense, DenseComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Count eigenvalues of the symmetric tridiagonal (d, off = 1) below `e`
/// from the sign changes of the leading principal minors.
fn sturm_count(d: &[f64], e: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0_f64;
    for (k, &dk) in d.iter().enumerate() {
        q = if k == 0 { dk - e } else { dk - e - 1.0 / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn sturm_roots(d: &[f64]) -> Vec<f64> {
    (0..d.len())
        .map(|k| {
            let (mut lo, mut hi) = (-10.0, 10.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(d, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn aah_5() -> (Vec<f64>, DenseComplexMatrix) {
    let d: Vec<f64> = (1..=5).map(|n| (2.0 * PI * 2.0 / 3.0 * n as f64).cos()).collect();
    let m = DenseComplexMatrix::from_fn(5, |i, j| {
        if i == j {
            c(d[i], 0.0)
        } else if i.abs_diff(j) == 1 {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    (d, m)
}

fn random_matrix(n: usize, seed: u64) -> DenseComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseComplexMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn max_residual(m: &DenseComplexMatrix, vals: &[C64], vecs: &DenseComplexMatrix) -> f64 {
    let n = m.dim();
    let mut worst = 0.0_f64;
    for k in 0..n {
        let v = vecs.column(k);
        let hv = m.matvec(&v);
        let r: f64 = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - vals[k] * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    worst / m.norm_fro()
}

#[test]
fn aah_chain_matches_characteristic_polynomial_roots() {
    let (d, m) = aah_5();
    let oracle = sturm_roots(&d);
    // Frozen from an independent LAPACK run.
    let frozen = [-1.902_255_79, -1.5, -0.066_745_96, 0.5, 1.969_001_75];
    let eig = eig_dense(&m, false).unwrap();
    for k in 0..5 {
        assert!((eig.values[k].re - oracle[k]).abs() < 1e-8);
        assert!(eig.values[k].im.abs() < 1e-10 * m.norm_fro());
        assert!((oracle[k] - frozen[k]).abs() < 1e-8);
    }
}

#[test]
fn diagonal_matrix() {
    let m = DenseComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(1.0, 2.0)]);
    let eig = eig_dense(&m, true).unwrap();
    assert_eq!(eig.values.len(), 2);
    assert!((eig.values[0] - c(1.0, 2.0)).norm() < 1e-14);
    assert!((eig.values[1] - c(3.0, 0.0)).norm() < 1e-14);
}

#[test]
fn symmetric_two_by_two() {
    let m = DenseComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let eig = eig_dense(&m, true).unwrap();
    assert!((eig.values[0] - c(-1.0, 0.0)).norm() < 1e-14);
    assert!((eig.values[1] - c(1.0, 0.0)).norm() < 1e-14);
    assert!(max_residual(&m, &eig.values, eig.vectors.as_ref().unwrap()) < 1e-14);
}

#[test]
fn one_by_one() {
    let m = DenseComplexMatrix::from_diagonal(&[c(-2.0, 0.5)]);
    let eig = eig_dense(&m, true).unwrap();
    assert_eq!(eig.values, vec![c(-2.0, 0.5)]);
    assert!((eig.vectors.unwrap()[(0, 0)].norm() - 1.0).abs() < 1e-15);
}

#[test]
fn periodic_ring_closed_form() {
    // Uniform ring with nonreciprocal hopping: E_k = a e^{ik} + b e^{-ik}.
    let n = 60;
    let (a, b) = (c(1.3, 0.0), c(0.4, 0.0));
    let m = DenseComplexMatrix::from_fn(n, |i, j| {
        if (i + 1) % n == j {
            a
        } else if (j + 1) % n == i {
            b
        } else {
            c(0.0, 0.0)
        }
    });
    let eig = eig_dense(&m, false).unwrap();
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        let e = a * C64::from_polar(1.0, t) + b * C64::from_polar(1.0, -t);
        let nearest = eig.values.iter().map(|v| (v - e).norm()).fold(f64::MAX, f64::min);
        assert!(nearest < 1e-10, "k = {k}: missing {e}");
    }
}

#[test]
fn random_nonnormal_invariants() {
    for (seed, n) in [(1_u64, 7_usize), (2, 20), (3, 48), (4, 64), (5, 101)] {
        let m = random_matrix(n, seed);
        let eig = eig_dense(&m, true).unwrap();
        let vecs = eig.vectors.as_ref().unwrap();
        assert!(max_residual(&m, &eig.values, vecs) <= 1e-10, "n = {n}");
        let sum: C64 = eig.values.iter().sum();
        assert!((sum - m.trace()).norm() <= 1e-9 * m.norm_fro());
        for k in 0..n {
            let norm: f64 = vecs.column(k).iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        for w in eig.values.windows(2) {
            assert!((w[0].re, w[0].im) <= (w[1].re, w[1].im));
        }
        let (phase, log_abs) = det_phase_and_log_abs(&m).unwrap();
        let eig_log: f64 = eig.values.iter().map(|z| z.norm().ln()).sum();
        let eig_phase: f64 = eig.values.iter().map(|z| z.arg()).sum();
        assert!((log_abs - eig_log).abs() < 1e-6);
        let dphi = (phase - eig_phase).rem_euclid(2.0 * PI);
        assert!(dphi.min(2.0 * PI - dphi) < 1e-8);
    }
}

#[test]
fn hermitian_random_has_real_spectrum() {
    let a = random_matrix(40, 9);
    let h = DenseComplexMatrix::from_fn(40, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let eig = eig_dense(&h, true).unwrap();
    let tol = 1e-10 * h.norm_fro();
    assert!(eig.values.iter().all(|z| z.im.abs() <= tol));
    assert!(max_residual(&h, &eig.values, eig.vectors.as_ref().unwrap()) <= 1e-10);
}

#[test]
fn jordan_like_block_does_not_stall() {
    // A nilpotent shift plus tiny perturbation is maximally non-normal.
    let n = 30;
    let mut m = DenseComplexMatrix::from_fn(n, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    m[(n - 1, 0)] = c(1e-10, 0.0);
    let eig = eig_dense(&m, false).unwrap();
    // Eigenvalues are the n-th roots of 1e-10.
    let r = 1e-10_f64.powf(1.0 / n as f64);
    for z in &eig.values {
        assert!((z.norm() - r).abs() < 1e-6);
    }
}

#[test]
fn balancing_handles_badly_scaled_input() {
    let n = 12;
    let base = random_matrix(n, 17);
    let scale = |i: usize| 10f64.powi(i as i32 - 6);
    let m = DenseComplexMatrix::from_fn(n, |i, j| base[(i, j)] * scale(i) / scale(j));
    let e1 = eig_dense(&base, false).unwrap();
    let e2 = eig_dense(&m, true).unwrap();
    for (a, b) in e1.values.iter().zip(&e2.values) {
        assert!((a - b).norm() < 1e-9);
    }
    let vecs = e2.vectors.unwrap();
    for k in 0..n {
        let v = vecs.column(k);
        let hv = m.matvec(&v);
        let r: f64 = hv.iter().zip(&v).map(|(x, y)| (x - e2.values[k] * y).norm_sqr()).sum::<f64>().sqrt();
        assert!(r <= 1e-10 * m.norm_fro());
    }
}

#[test]
fn degenerate_ring_spectra_converge() {
    // Uniform rings have exactly degenerate pairs 2t cos(2 pi k / n); their
    // couplings after reduction sit at roundoff level and must still deflate.
    for n in [8usize, 21, 34, 55, 144] {
        for k in 0..40 {
            let t = 0.3 + k as f64 * 0.05;
            let h = DenseComplexMatrix::from_fn(n, |i, j| {
                if (i + 1) % n == j || (j + 1) % n == i {
                    C64::new(t, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let got = eig_dense(&h, true).unwrap_or_else(|e| panic!("n={n} t={t}: {e}"));
            let mut want: Vec<f64> =
                (0..n).map(|m| 2.0 * t * (2.0 * std::f64::consts::PI * m as f64 / n as f64).cos()).collect();
            want.sort_by(f64::total_cmp);
            for (z, w) in got.values.iter().zip(&want) {
                assert!((z - w).norm() < 1e-12 * n as f64, "n={n} t={t}: {z} vs {w}");
            }
            let v = got.vectors.unwrap();
            for (j, z) in got.values.iter().enumerate() {
                let col = v.column(j);
                let r: f64 = h.matvec(&col).iter().zip(&col).map(|(a, b)| (a - z * b).norm_sqr()).sum();
                assert!(r.sqrt() < 1e-12 * n as f64);
            }
        }
    }
}
