//! Onsite potentials and dressed hopping against hand-evaluated references.

use fqc_core::{effective_hopping, onsite_potential, Boundary, CoreError, LatticeConfig, ModelSpec, C64};
use proptest::prelude::*;

const BESSEL_ZERO: f64 = 2.404_825_557_695_773;

fn lattice(l: usize, p: u64, q: u64) -> LatticeConfig {
    LatticeConfig::new(l, p, q, Boundary::Open).unwrap()
}

#[test]
fn dressed_hopping_examples() {
    assert_eq!(effective_hopping(1.0, 0.0), 1.0);
    assert!(effective_hopping(1.0, BESSEL_ZERO).abs() < 1e-12);
    assert_eq!(effective_hopping(3.0, BESSEL_ZERO), 0.0);
    assert!((effective_hopping(2.0, 1.0) - 1.530_395_373_115_933_1).abs() < 1e-14);
}

#[test]
fn m5_at_zero_phase_is_two() {
    let spec = ModelSpec::m5(1.0, 1.0, 0.5);
    let lat = lattice(89, 55, 89);
    // n = L gives 2*pi*alpha*n = 2*pi*55, a multiple of 2*pi.
    let v = onsite_potential(&spec, &lat, 89).unwrap();
    assert!((v - C64::new(2.0, 0.0)).norm() < 1e-14);
}

#[test]
fn m4_at_zero_phase_is_i_tanh_gamma() {
    let spec = ModelSpec::m4(1.0, 1.0, 0.5);
    let lat = lattice(89, 55, 89);
    let v = onsite_potential(&spec, &lat, 89).unwrap();
    assert!(v.re.abs() < 1e-14);
    assert!((v.im - 0.462_117_157_26).abs() < 1e-10);
}

#[test]
fn m1_third_root_of_unity() {
    let spec = ModelSpec::m1(1.0, 1.0);
    let lat = lattice(3, 2, 3);
    let v = onsite_potential(&spec, &lat, 1).unwrap();
    assert!((v - C64::new(-0.5, 0.866_025_403_8)).norm() < 1e-10);
}

#[test]
fn m4_tangent_pole_is_rejected() {
    // alpha = 89/144: pi*alpha*n hits pi/2 (mod pi) when 89 n = 72 (mod 144).
    let spec = ModelSpec::m4(1.0, 1.0, 0.0);
    let lat = lattice(144, 89, 144);
    let pole = (1..=144).find(|&n| (89 * n) % 144 == 72).unwrap();
    assert!(matches!(onsite_potential(&spec, &lat, pole), Err(CoreError::SingularPotential { .. })));
    assert!(onsite_potential(&spec, &lat, pole + 1).is_ok());
}

#[test]
fn site_index_out_of_range() {
    let spec = ModelSpec::m1(1.0, 1.0);
    let lat = lattice(5, 3, 5);
    assert!(onsite_potential(&spec, &lat, 0).is_err());
    assert!(onsite_potential(&spec, &lat, 6).is_err());
}

#[test]
fn pt_symmetry_of_potentials() {
    // V_n = conj(V_{-n}) with n taken modulo L (n = L plays the role of 0).
    let lat = lattice(89, 55, 89);
    // The tangent potential is odd in its real argument, so M4 instead obeys
    // V_n = -conj(V_{-n}) (real part odd, imaginary part even).
    let specs = [
        (ModelSpec::m1(1.0, 0.7), 1.0),
        (ModelSpec::m2(1.0, 0.7, 0.4), 1.0),
        (ModelSpec::m4(1.0, 0.7, 0.4), -1.0),
        (ModelSpec::m5(1.0, 0.7, 0.3), 1.0),
    ];
    for (spec, sign) in &specs {
        for n in 1..=89usize {
            let mirror = if n == 89 { 89 } else { 89 - n };
            let a = onsite_potential(spec, &lat, n).unwrap();
            let b = onsite_potential(spec, &lat, mirror).unwrap();
            assert!((a - sign * b.conj()).norm() <= 1e-12 * a.norm().max(1.0), "{:?} n = {n}", spec.model);
        }
    }
}

#[test]
fn periodicity_with_exact_approximant() {
    let lat = LatticeConfig::new(144, 89, 144, Boundary::Periodic).unwrap();
    for spec in [ModelSpec::m1(1.0, 1.3), ModelSpec::m2(1.0, 1.3, 0.2), ModelSpec::m3(1.0, 1.3, 0.2)] {
        for n in 1..=144usize {
            let a = spec.potential_at_angle(lat.angle(n), 0.0).unwrap();
            let b = spec.potential_at_angle(lat.angle(n + 144), 0.0).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
        }
    }
}

#[test]
fn lattice_validation() {
    assert!(LatticeConfig::new(10, 4, 10, Boundary::Open).is_err()); // gcd != 1
    assert!(LatticeConfig::new(10, 11, 10, Boundary::Open).is_err()); // p >= q
    assert!(LatticeConfig::new(89, 55, 89, Boundary::Periodic).is_ok());
    assert!(LatticeConfig::new(90, 55, 89, Boundary::Periodic).is_err()); // q != L
    assert!(LatticeConfig::new(90, 55, 89, Boundary::Open).is_ok());
    assert!(LatticeConfig::new(89, 55, 89, Boundary::Twisted(0.3)).is_ok());
    assert!(LatticeConfig::new(0, 1, 2, Boundary::Open).is_err());
}

#[test]
fn alpha_parsing() {
    let lat = LatticeConfig::parse_alpha("377/610").unwrap();
    assert_eq!(lat, (377, 610));
    assert!(LatticeConfig::parse_alpha("0.618").is_err());
    assert!(LatticeConfig::parse_alpha("3/0").is_err());
}

#[test]
fn model_validation() {
    assert!(matches!(ModelSpec::m5(1.0, 1.0, 1.0).validate(), Err(CoreError::InvalidEta(_))));
    assert!(matches!(ModelSpec::m5(1.0, 1.0, -0.2).validate(), Err(CoreError::InvalidEta(_))));
    let mut m1 = ModelSpec::m1(1.0, 1.0);
    m1.eta = 0.3;
    assert!(matches!(m1.validate(), Err(CoreError::UnusedParameter { .. })));
    let zero_hop = ModelSpec::m2(0.0, 1.0, 0.1).validate().unwrap();
    assert!(!zero_hop.is_empty(), "J = 0 must be flagged");
    assert!(ModelSpec::m3(1.0, 1.0, 0.3).validate().unwrap().is_empty());
}

proptest! {
    #[test]
    fn hopping_even_in_drive_and_linear_in_j(j in -5.0f64..5.0, x in 0.0f64..8.0, s in -3.0f64..3.0) {
        prop_assert_eq!(effective_hopping(j, x), effective_hopping(j, -x));
        let lhs = effective_hopping(s * j, x);
        let rhs = s * effective_hopping(j, x);
        prop_assert!((lhs - rhs).abs() <= 1e-14 * (1.0 + rhs.abs()));
    }
}
