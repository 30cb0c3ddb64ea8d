use crate::{ipr, Result};
use fqc_core::C64;
use fqc_numerics::{eig_dense, DenseComplexMatrix, EigenDecomposition};

/// Eigenvalues with per-state IPRs and summary statistics.
///
/// `iprs` is empty (and `min_ipr`/`max_ipr` are `None`) when eigenvectors
/// were not computed.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub iprs: Vec<f64>,
    pub max_abs_im: f64,
    pub min_ipr: Option<f64>,
    pub max_ipr: Option<f64>,
}

impl SpectrumReport {
    pub fn from_decomposition(eig: &EigenDecomposition) -> Result<Self> {
        let iprs = match &eig.vectors {
            Some(v) => (0..v.dim()).map(|k| ipr(&v.column(k))).collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let max_abs_im = eig.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let min_ipr = iprs.iter().copied().reduce(f64::min);
        let max_ipr = iprs.iter().copied().reduce(f64::max);
        Ok(Self { eigenvalues: eig.values.clone(), iprs, max_abs_im, min_ipr, max_ipr })
    }

    pub fn has_iprs(&self) -> bool {
        !self.iprs.is_empty()
    }

    /// `(min Re E, max Re E)`.
    pub fn real_range(&self) -> (f64, f64) {
        self.eigenvalues
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)))
    }
}

/// Diagonalize `h` and summarize; IPRs are computed only if `want_iprs`.
pub fn spectrum_report(h: &DenseComplexMatrix, want_iprs: bool) -> Result<SpectrumReport> {
    SpectrumReport::from_decomposition(&eig_dense(h, want_iprs)?)
}
