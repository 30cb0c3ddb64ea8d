//! Structural checks of the Hamiltonian builders and spectral oracles.

use fqc_core::{Boundary, DriveConfig, LatticeConfig, ModelSpec, BESSEL_J0_FIRST_ZERO, C64};
use fqc_hamiltonian::{
    build_momentum_space, build_real_space, build_rotating_frame, HamiltonianError, Representation,
};
use fqc_numerics::eig_dense;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ring(l: usize) -> LatticeConfig {
    LatticeConfig::fibonacci(l, Boundary::Periodic).unwrap()
}

/// Every value in `a` has a partner in `b` within `tol` (greedy one-to-one).
fn same_spectrum(a: &[C64], b: &[C64], tol: f64) -> bool {
    let mut used = vec![false; b.len()];
    a.len() == b.len()
        && a.iter().all(|x| {
            let best = (0..b.len())
                .filter(|&j| !used[j])
                .min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()));
            match best {
                Some(j) if (b[j] - x).norm() <= tol => {
                    used[j] = true;
                    true
                }
                _ => false,
            }
        })
}

/// Closed-form spectrum of the M1 ring with q = L and dressed hopping t > 0:
/// det(E - H) = 0 reduces to T_L(E / 2t) = 1 + (V/t)^L / 2, whose roots are
/// E_m = 2t cos((2 pi m + i acosh(1 + (V/t)^L / 2)) / L).
fn m1_ring_closed_form(l: usize, t: f64, v: f64) -> Vec<C64> {
    let rhs = 1.0 + 0.5 * (v / t).powi(l as i32);
    let eta = rhs.acosh();
    (0..l)
        .map(|m| 2.0 * t * C64::new(2.0 * PI * m as f64 / l as f64, eta / l as f64).cos())
        .collect()
}

#[test]
fn m1_open_chain_three_sites() {
    let lat = LatticeConfig::new(3, 2, 3, Boundary::Open).unwrap();
    let h = build_real_space(&ModelSpec::m1(1.0, 1.0), &lat, &DriveConfig::new(0.0)).unwrap();
    assert_eq!(h.representation, Representation::RealSpace);
    let m = &h.matrix;
    assert_eq!(m[(0, 1)], c(1.0, 0.0));
    assert_eq!(m[(1, 2)], c(1.0, 0.0));
    assert_eq!(m[(2, 1)], c(1.0, 0.0));
    assert_eq!(m[(0, 2)], c(0.0, 0.0));
    assert_eq!(m[(2, 0)], c(0.0, 0.0));
    for (k, n) in [(0, 1.0), (1, 2.0), (2, 3.0)] {
        let want = C64::from_polar(1.0, -2.0 * PI * 2.0 / 3.0 * n);
        assert!((m[(k, k)] - want).norm() < 1e-12);
    }
}

#[test]
fn bessel_zero_kills_all_hopping() {
    let drive = DriveConfig::new(BESSEL_J0_FIRST_ZERO);
    let lat = ring(89);
    for spec in [
        ModelSpec::m1(1.0, 1.0),
        ModelSpec::m2(1.0, 1.0, 0.3),
        ModelSpec::m3(1.0, 1.0, 0.3),
        ModelSpec::m4(1.0, 1.0, 0.3),
        ModelSpec::m5(1.0, 1.0, 0.5),
    ] {
        let m = build_real_space(&spec, &lat, &drive).unwrap().matrix;
        for i in 0..89 {
            for j in 0..89 {
                if i != j {
                    assert!(m[(i, j)].norm() < 1e-12, "{:?} ({i},{j})", spec.model);
                }
            }
        }
    }
}

#[test]
fn m3_nonreciprocal_corners() {
    let lat = LatticeConfig::new(3, 2, 3, Boundary::Periodic).unwrap();
    let m = build_real_space(&ModelSpec::m3(1.0, 1.0, 0.5), &lat, &DriveConfig::new(0.0)).unwrap().matrix;
    assert!((m[(0, 1)] - c((-0.5f64).exp(), 0.0)).norm() < 1e-15);
    assert!((m[(1, 0)] - c(0.5f64.exp(), 0.0)).norm() < 1e-15);
    assert!((m[(2, 0)] - c((-0.5f64).exp(), 0.0)).norm() < 1e-15);
    assert!((m[(0, 2)] - c(0.5f64.exp(), 0.0)).norm() < 1e-15);
}

#[test]
fn m3_twisted_corners_carry_dressing_and_phase() {
    let theta = 0.7;
    let x = 1.3;
    let t = fqc_core::effective_hopping(1.5, x);
    let lat = LatticeConfig::new(5, 3, 5, Boundary::Twisted(theta)).unwrap();
    let h = build_real_space(&ModelSpec::m3(1.5, 0.4, 0.2), &lat, &DriveConfig::new(x)).unwrap();
    assert_eq!(h.twist_theta, Some(theta));
    let m = h.matrix;
    assert!((m[(0, 4)] - t * 0.2f64.exp() * C64::from_polar(1.0, -theta)).norm() < 1e-15);
    assert!((m[(4, 0)] - t * (-0.2f64).exp() * C64::from_polar(1.0, theta)).norm() < 1e-15);
}

#[test]
fn twisted_potential_models_shift_argument() {
    let theta = 1.1;
    let lat = ring(13).with_boundary(Boundary::Twisted(theta));
    let spec = ModelSpec::m2(1.0, 0.9, 0.25);
    let m = build_real_space(&spec, &lat, &DriveConfig::new(0.0)).unwrap().matrix;
    for n in 1..=13 {
        let want = 0.9 * C64::new(lat.angle(n) + theta / 13.0, 0.25).cos();
        assert!((m[(n - 1, n - 1)] - want).norm() < 1e-14);
    }
    assert_eq!(m[(0, 12)], c(1.0, 0.0));
}

#[test]
fn m1_momentum_structure_and_twist() {
    let lat = ring(21).with_boundary(Boundary::Twisted(0.4));
    let t = fqc_core::effective_hopping(1.0, 0.5);
    let m = build_momentum_space(&ModelSpec::m1(1.0, 0.8), &lat, &DriveConfig::new(0.5)).unwrap().matrix;
    for n in 1..=21 {
        assert!((m[(n - 1, n - 1)] - c(2.0 * t * lat.angle(n).cos(), 0.0)).norm() < 1e-14);
    }
    for n in 1..21 {
        assert_eq!(m[(n, n - 1)], c(0.8, 0.0));
        assert_eq!(m[(n - 1, n)], c(0.0, 0.0));
    }
    assert!((m[(0, 20)] - 0.8 * C64::from_polar(1.0, -0.4)).norm() < 1e-15);
}

#[test]
fn m1_momentum_without_potential_is_diagonal() {
    let m = build_momentum_space(&ModelSpec::m1(1.0, 0.0), &ring(34), &DriveConfig::new(0.3)).unwrap().matrix;
    for i in 0..34 {
        for j in 0..34 {
            if i != j {
                assert_eq!(m[(i, j)], c(0.0, 0.0));
            }
        }
    }
}

#[test]
fn m2_momentum_hermitian_at_zero_gamma() {
    let m = build_momentum_space(&ModelSpec::m2(1.0, 0.9, 0.0), &ring(55), &DriveConfig::new(0.7)).unwrap().matrix;
    assert_eq!(m.hermiticity_defect(), 0.0);
}

#[test]
fn momentum_space_rejects_m4_m5_and_open_chains() {
    let drive = DriveConfig::new(0.0);
    for spec in [ModelSpec::m4(1.0, 1.0, 0.2), ModelSpec::m5(1.0, 1.0, 0.5)] {
        assert!(matches!(build_momentum_space(&spec, &ring(13), &drive), Err(HamiltonianError::UnsupportedModel(_))));
    }
    let open = LatticeConfig::new(13, 8, 13, Boundary::Open).unwrap();
    assert!(build_momentum_space(&ModelSpec::m1(1.0, 1.0), &open, &drive).is_err());
}

#[test]
fn m1_real_and_momentum_spectra_agree() {
    let lat = ring(89);
    for (v, x) in [(0.5, 0.0), (1.5, 0.0), (0.8, 1.2), (0.3, 3.1)] {
        let spec = ModelSpec::m1(1.0, v);
        let drive = DriveConfig::new(x);
        let real = eig_dense(&build_real_space(&spec, &lat, &drive).unwrap().matrix, false).unwrap();
        let mom = eig_dense(&build_momentum_space(&spec, &lat, &drive).unwrap().matrix, false).unwrap();
        assert!(same_spectrum(&real.values, &mom.values, 1e-8), "V = {v}, K/w = {x}");
    }
}

#[test]
fn m1_ring_matches_closed_form() {
    for (l, v, x) in [(89, 0.5, 0.0), (89, 1.5, 0.0), (144, 0.6, 1.0), (144, 2.0, 0.0), (55, 0.95, 0.4)] {
        let lat = ring(l);
        let spec = ModelSpec::m1(1.0, v);
        let drive = DriveConfig::new(x);
        let t = spec.dressed_hopping(x);
        let oracle = m1_ring_closed_form(l, t, v);
        let got = eig_dense(&build_real_space(&spec, &lat, &drive).unwrap().matrix, false).unwrap();
        let scale = 2.0 * t.abs() + v;
        // Near-degenerate (k, -k) pairs are resolved only to about sqrt(eps).
        assert!(same_spectrum(&got.values, &oracle, 1e-7 * scale), "L = {l}, V = {v}, K/w = {x}");
    }
}

#[test]
fn m2_m3_duality_is_exact_at_matrix_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lat = ring(89);
    for _ in 0..5 {
        let (j, v, g, x) = (rng.gen_range(0.5..2.0), rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..4.0));
        let drive = DriveConfig::new(x);
        let t = fqc_core::effective_hopping(j, x);
        let m2 = build_momentum_space(&ModelSpec::m2(j, v, g), &lat, &drive).unwrap().matrix;
        // Dual M3: dressed hopping V/2 (undriven), potential amplitude 2 J J0.
        let m3 = build_real_space(&ModelSpec::m3(v / 2.0, 2.0 * t, g), &lat, &DriveConfig::new(0.0)).unwrap().matrix;
        assert!(m2.sub(&m3).norm_fro() < 1e-12 * m2.norm_fro());
    }
}

#[test]
fn m2_below_boundary_has_real_spectrum() {
    let lat = ring(89);
    for (j, v, g, x) in [(1.0, 0.5, 0.3, 0.0), (2.0, 1.0, 0.5, 1.0), (1.0, 0.4, -0.6, 0.5)] {
        let spec = ModelSpec::m2(j, v, g);
        let t = spec.dressed_hopping(x);
        assert!(v * g.abs().exp() < (2.0 * t).abs());
        let eig = eig_dense(&build_real_space(&spec, &lat, &DriveConfig::new(x)).unwrap().matrix, false).unwrap();
        let max_im = eig.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(max_im <= 1e-8, "max |Im E| = {max_im}");
    }
}

#[test]
fn hermitian_limits() {
    let lat = ring(34);
    let drive = DriveConfig::new(0.9);
    for spec in [ModelSpec::m2(1.0, 0.7, 0.0), ModelSpec::m3(1.0, 0.7, 0.0)] {
        assert!(build_real_space(&spec, &lat, &drive).unwrap().matrix.hermiticity_defect() < 1e-15);
    }
    let m3 = build_momentum_space(&ModelSpec::m3(1.0, 0.7, 0.0), &lat, &drive).unwrap().matrix;
    assert!(m3.hermiticity_defect() < 1e-15);
}

#[test]
fn rotating_frame_at_t_zero_is_undriven() {
    let lat = ring(21);
    let drive = DriveConfig::with_omega(1.0, 20.0);
    let spec = ModelSpec::m3(1.0, 0.5, 0.3);
    let rot = build_rotating_frame(&spec, &lat, &drive, 0.0).unwrap();
    let stat = build_real_space(&spec, &lat, &DriveConfig::new(0.0)).unwrap();
    assert!(rot.matrix.sub(&stat.matrix).norm_fro() < 1e-15);
    assert_eq!(rot.representation, Representation::RotatingFrame { t: 0.0 });
}

#[test]
fn rotating_frame_quarter_period_phase() {
    let lat = ring(8);
    let omega = 4.0;
    let drive = DriveConfig::with_omega(1.0, omega);
    let t = PI / 2.0 / omega;
    let m = build_rotating_frame(&ModelSpec::m1(1.0, 0.0), &lat, &drive, t).unwrap().matrix;
    assert!((m[(0, 1)] - C64::from_polar(1.0, 1.0)).norm() < 1e-15);
    assert!((m[(1, 0)] - C64::from_polar(1.0, -1.0)).norm() < 1e-15);
    assert!((m[(7, 0)] - C64::from_polar(1.0, 1.0)).norm() < 1e-15);
}

#[test]
fn rotating_frame_without_drive_is_static() {
    let lat = ring(13);
    let drive = DriveConfig::with_omega(0.0, 10.0);
    let spec = ModelSpec::m5(1.0, 0.5, 0.4);
    let a = build_rotating_frame(&spec, &lat, &drive, 0.0).unwrap().matrix;
    for k in 1..10 {
        let b = build_rotating_frame(&spec, &lat, &drive, 0.037 * k as f64).unwrap().matrix;
        assert_eq!(a, b);
    }
}

#[test]
fn rotating_frame_requires_omega() {
    let r = build_rotating_frame(&ModelSpec::m1(1.0, 0.5), &ring(13), &DriveConfig::new(1.0), 0.0);
    assert!(matches!(r, Err(HamiltonianError::MissingOmega)));
}

#[test]
fn period_average_of_rotating_frame_is_effective_hamiltonian() {
    // Midpoint average over one period converges spectrally to J J0(K/w).
    let lat = ring(13);
    let (x, omega) = (1.7, 5.0);
    let drive = DriveConfig::with_omega(x, omega);
    let spec = ModelSpec::m3(1.2, 0.4, 0.3);
    let n = 64;
    let period = 2.0 * PI / omega;
    let mut avg = build_rotating_frame(&spec, &lat, &drive, 0.5 * period / n as f64).unwrap().matrix;
    for k in 1..n {
        let tk = (k as f64 + 0.5) * period / n as f64;
        avg = avg.add(&build_rotating_frame(&spec, &lat, &drive, tk).unwrap().matrix);
    }
    let avg = avg.scale(c(1.0 / n as f64, 0.0));
    let eff = build_real_space(&spec, &lat, &DriveConfig::new(x)).unwrap().matrix;
    assert!(avg.sub(&eff).norm_fro() < 1e-12);
}
