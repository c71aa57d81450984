//! The non-compatible pair built from `x = Σ λ^j w^j`: `M = H^2 ⊖ ℂx` is
//! invariant under both shifts, yet the compressions fail to be compatible.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{complement_in_window, compress, CoeffVector, NumericSubspace, ShiftOp};
use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticePoint, Window};
use crate::C64;

/// Tail bound above which truncating the series is reported.
pub const TAIL_WARN: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SetoExample {
    pub lambda: C64,
    /// `M`: the complement of the truncated `x` in the windowed `Z_+^2`.
    pub subspace: NumericSubspace,
    /// `x_N = Σ_{j ≤ N} λ^j w^j` with `N` the window's last column.
    pub x: CoeffVector,
    /// `y = T_z x`, which lies in `M`.
    pub y: CoeffVector,
    /// `|λ|^{N+1}`, the first omitted coefficient.
    pub tail_bound: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SetoDefect {
    /// `‖S_w S_w^* S_z S_z^* y‖`
    pub lhs_norm: f64,
    /// `‖S_z S_z^* S_w S_w^* y‖`
    pub rhs_norm: f64,
    /// `‖lhs - rhs‖`
    pub defect: f64,
    /// `‖P_M 1‖` evaluated on the basis.
    pub p_m_one_norm: f64,
    /// `sqrt(1 - 1/‖x_N‖^2)`, the truncated closed form of `‖P_M 1‖`.
    pub closed_form: f64,
    /// `|λ|`, the untruncated value.
    pub limit: f64,
}

pub fn build_seto_example(lambda: C64, window: Window) -> Result<SetoExample> {
    window.validate()?;
    if lambda.norm() >= 1.0 || !lambda.norm().is_finite() {
        return Err(Error::InvalidParameter(format!("|λ| = {} must be below 1", lambda.norm())));
    }
    if window.i_min > 0 || window.j_min > 0 || window.i_max < 0 || window.j_max < 1 {
        return Err(Error::InvalidWindow(format!(
            "{window} must contain the origin and the point (0,1)"
        )));
    }
    let n = window.i_max;
    let x = CoeffVector::from_entries((0..=n).map(|j| (LatticePoint::new(j, 0), lambda.powi(j as i32))));
    let ambient: BTreeSet<LatticePoint> = window.points().filter(|p| p.i >= 0 && p.j >= 0).collect();
    let subspace = complement_in_window(std::slice::from_ref(&x), &ambient, window, 1e-14)?;
    let y = x.shifted(subspace.geometry(), Direction::Z, true);
    let tail_bound = lambda.norm().powi(n as i32 + 1);
    let mut warnings = Vec::new();
    if tail_bound > TAIL_WARN {
        warnings.push(format!(
            "series truncated at N = {n}: tail bound |λ|^(N+1) = {tail_bound:.3e} exceeds {TAIL_WARN:e}"
        ));
    }
    Ok(SetoExample {
        lambda,
        subspace,
        x,
        y,
        tail_bound,
        warnings,
    })
}

impl SetoExample {
    /// Evaluate both sides of `S_w S_w^* S_z S_z^* y` versus
    /// `S_z S_z^* S_w S_w^* y`; their difference is `-S_z P_M 1`.
    pub fn evaluate(&self) -> Result<SetoDefect> {
        let sw = compress(ShiftOp::W, &self.subspace)?;
        let sz = compress(ShiftOp::Z, &self.subspace)?;
        let (swa, sza) = (sw.adjoint(), sz.adjoint());
        let y = self.subspace.coords(&self.y);
        let lhs = sw.apply(&swa.apply(&sz.apply(&sza.apply(&y))));
        let rhs = sz.apply(&sza.apply(&sw.apply(&swa.apply(&y))));
        let norm = |v: &[C64]| v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let diff: Vec<C64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        let one = CoeffVector::basis(LatticePoint::ORIGIN);
        Ok(SetoDefect {
            lhs_norm: norm(&lhs),
            rhs_norm: norm(&rhs),
            defect: norm(&diff),
            p_m_one_norm: self.subspace.project(&one).norm(),
            closed_form: (1.0 - 1.0 / self.x.norm_sqr()).max(0.0).sqrt(),
            limit: self.lambda.norm(),
        })
    }
}
