use serde::Serialize;

use super::MtcData;
use crate::cyclotomic::CycScalar;
use crate::linalg::Matrix;

/// Unnormalized Hopf-link matrix S̃_{ij} = Σ_c N_{ij}^c ϑ_c/(ϑ_i ϑ_j) d_c,
/// the trace of the double braiding on i ⊗ j. S̃_{0j} = d_j.
pub fn smatrix(c: &MtcData) -> Matrix {
    let n = c.rank();
    Matrix::from_fn(n, n, |i, j| {
        let mut acc = c.zero();
        for &k in c.fuse(i, j) {
            acc = acc + c.theta(k) * c.qdim(k);
        }
        acc * c.theta_inv(i) * c.theta_inv(j)
    })
}

pub fn tmatrix(c: &MtcData) -> Matrix {
    let n = c.rank();
    Matrix::from_fn(n, n, |i, j| if i == j { c.theta(i).clone() } else { c.zero() })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnomalyReport {
    /// Σ_i ϑ_i d_i
    pub p_plus: CycScalar,
    /// Σ_i ϑ_i^{-1} d_i
    pub p_minus: CycScalar,
    pub anomaly_free_linear: bool,
    /// Σ_i ϑ_i d_i²
    pub gauss_plus: CycScalar,
    /// Σ_i ϑ_i^{-1} d_i²
    pub gauss_minus: CycScalar,
    pub anomaly_free_gauss: bool,
}

pub fn anomaly_check(c: &MtcData) -> AnomalyReport {
    let mut p_plus = c.zero();
    let mut p_minus = c.zero();
    let mut g_plus = c.zero();
    let mut g_minus = c.zero();
    for i in 0..c.rank() {
        let d = c.qdim(i);
        let d2 = d * d;
        p_plus = p_plus + c.theta(i) * d;
        p_minus = p_minus + c.theta_inv(i) * d;
        g_plus = g_plus + c.theta(i) * &d2;
        g_minus = g_minus + c.theta_inv(i) * &d2;
    }
    AnomalyReport {
        anomaly_free_linear: p_plus == p_minus,
        anomaly_free_gauss: g_plus == g_minus,
        p_plus,
        p_minus,
        gauss_plus: g_plus,
        gauss_minus: g_minus,
    }
}
