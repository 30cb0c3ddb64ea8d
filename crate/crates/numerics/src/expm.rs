//! Short-time propagator `exp(-i H dt)`.

use crate::{DenseComplexMatrix, NumericsError, Result, C64};

/// `exp(-i H dt)` by scaling and squaring around a Taylor polynomial.
///
/// Requires `||H||_1 * dt <= 1`; the argument is halved until its norm is at
/// most 1/8 and the Taylor series is summed until terms drop below 1e-18
/// relative, giving roughly machine-precision accuracy.
pub fn expm_multiply_step(h: &DenseComplexMatrix, dt: f64) -> Result<DenseComplexMatrix> {
    if !h.is_finite() || !dt.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let norm_dt = h.norm_one() * dt.abs();
    if norm_dt > 1.0 {
        return Err(NumericsError::StepTooLarge { norm_dt });
    }
    let n = h.dim();
    let mut squarings = 0;
    let mut nrm = norm_dt;
    while nrm > 0.125 {
        nrm *= 0.5;
        squarings += 1;
    }
    let a = h.scale(C64::new(0.0, -dt / f64::from(1u32 << squarings)));
    let mut result = DenseComplexMatrix::identity(n);
    let mut term = DenseComplexMatrix::identity(n);
    for k in 1..=30 {
        term = term.matmul(&a).scale(C64::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
        if term.norm_one() <= 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_phase() {
        let h = DenseComplexMatrix::from_diagonal(&[C64::new(0.9, 0.0)]);
        let u = expm_multiply_step(&h, 1.0).unwrap();
        assert!((u[(0, 0)] - C64::new(0.0, -0.9).exp()).norm() < 1e-15);
    }
}
