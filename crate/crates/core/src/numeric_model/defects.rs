//! Defect norms of compressed operators: isometry, double commutation and
//! commutation of range projections.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::CompressedOperator;
use crate::error::{Error, Result};
use crate::linalg::{column_span, spectral_norm, CMat, SparseMatrix};
use crate::C64;

fn same_dim(a: &CompressedOperator, b: &CompressedOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operators of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

fn both_interior(a: &CompressedOperator, b: &CompressedOperator) -> Vec<bool> {
    a.interior.iter().zip(&b.interior).map(|(x, y)| *x && *y).collect()
}

/// `‖(S^*S - I) P_int‖`, with `P_int` the projection onto interior basis
/// vectors.
pub fn isometry_defect(s: &CompressedOperator) -> f64 {
    let n = s.dim();
    let g = s.matrix.adjoint().mul(&s.matrix).sub(&SparseMatrix::identity(n));
    g.mask_columns(&s.interior).op_norm()
}

/// Larger of the isometry defects of `S` and `S^*` on interior columns.
pub fn unitary_defect(s: &CompressedOperator) -> f64 {
    let n = s.dim();
    let gg = s.matrix.mul(&s.matrix.adjoint()).sub(&SparseMatrix::identity(n));
    isometry_defect(s).max(gg.mask_columns(&s.interior).op_norm())
}

/// `‖(S_1 S_2^* - S_2^* S_1) P_int‖`.
pub fn doubly_commute_defect(s1: &CompressedOperator, s2: &CompressedOperator) -> Result<f64> {
    same_dim(s1, s2)?;
    let s2a = s2.matrix.adjoint();
    let c = s1.matrix.mul(&s2a).sub(&s2a.mul(&s1.matrix));
    Ok(c.mask_columns(&both_interior(s1, s2)).op_norm())
}

/// Orthogonal projection onto the span of a sparse matrix's columns, stored
/// as a coordinate part `P_C` plus a dense orthonormal block `Q` supported on
/// rows outside `C`.
#[derive(Debug, Clone)]
pub struct RangeProjector {
    dim: usize,
    coords: BTreeSet<usize>,
    q_rows: Vec<usize>,
    q: CMat,
    pub ambiguous: bool,
}

impl RangeProjector {
    /// Columns with a single entry above `tol · scale` count as coordinate
    /// vectors (`scale` = largest column norm); the remaining columns, with
    /// their `C` coordinates removed, go through an SVD rank decision.
    pub fn from_columns(a: &SparseMatrix, tol: f64) -> RangeProjector {
        let norms: Vec<f64> = (0..a.ncols())
            .map(|c| a.col(c).iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        let scale = norms.iter().copied().fold(0.0, f64::max);
        let thr = tol * scale;
        let mut coords = BTreeSet::new();
        let mut rest = Vec::new();
        let mut ambiguous = false;
        for c in 0..a.ncols() {
            let big: Vec<usize> = a.col(c).iter().filter(|e| e.1.norm() > thr).map(|e| e.0).collect();
            if norms[c] > thr / 10.0 && norms[c] < thr * 10.0 {
                ambiguous = true;
            }
            match big.len() {
                0 => {}
                1 => {
                    coords.insert(big[0]);
                }
                _ => rest.push(c),
            }
        }
        let rows: BTreeSet<usize> = rest
            .iter()
            .flat_map(|&c| a.col(c).iter().map(|e| e.0))
            .filter(|r| !coords.contains(r))
            .collect();
        let q_rows: Vec<usize> = rows.into_iter().collect();
        let pos: BTreeMap<usize, usize> = q_rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut m = CMat::zeros(q_rows.len(), rest.len());
        for (k, &c) in rest.iter().enumerate() {
            for &(r, v) in a.col(c) {
                if let Some(&pr) = pos.get(&r) {
                    m[(pr, k)] = v;
                }
            }
        }
        let span = column_span(&m, tol, Some(scale));
        RangeProjector {
            dim: a.nrows(),
            coords,
            q_rows,
            q: span.q,
            ambiguous: ambiguous || span.ambiguous,
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len() + self.q.ncols()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `‖[P_1, P_2]‖`. With `P_i = P_{C_i} + Q_i Q_i^*` the commutator is
/// skew-Hermitian with range inside `W = span(Q_1, Q_2, P_{C_1} Q_2,
/// P_{C_2} Q_1)`, so it vanishes on `W^⊥` and its norm is that of its
/// compression to `W`.
pub fn projector_commutator_norm(p1: &RangeProjector, p2: &RangeProjector) -> f64 {
    let rows: Vec<usize> = p1
        .q_rows
        .iter()
        .chain(&p2.q_rows)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if rows.is_empty() {
        return 0.0;
    }
    let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let lift = |p: &RangeProjector| {
        let mut q = CMat::zeros(rows.len(), p.q.ncols());
        for (k, r) in p.q_rows.iter().enumerate() {
            q.set_row(pos[r], &p.q.row(k));
        }
        let mask: Vec<bool> = rows.iter().map(|r| p.coords.contains(r)).collect();
        (q, mask)
    };
    let (q1, c1) = lift(p1);
    let (q2, c2) = lift(p2);
    let mask_rows = |m: &CMat, mask: &[bool]| {
        let mut out = m.clone();
        for (r, &keep) in mask.iter().enumerate() {
            if !keep {
                out.row_mut(r).fill(C64::default());
            }
        }
        out
    };
    let apply = |q: &CMat, mask: &[bool], x: &CMat| mask_rows(x, mask) + q * (q.adjoint() * x);
    let blocks = [q1.clone(), q2.clone(), mask_rows(&q2, &c1), mask_rows(&q1, &c2)];
    let ncols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut w = CMat::zeros(rows.len(), ncols);
    let mut at = 0;
    for b in &blocks {
        w.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    let basis = column_span(&w, 1e-13, None).q;
    if basis.ncols() == 0 {
        return 0.0;
    }
    let p2b = apply(&q2, &c2, &basis);
    let p1b = apply(&q1, &c1, &basis);
    let k = apply(&q1, &c1, &p2b) - apply(&q2, &c2, &p1b);
    spectral_norm(&(basis.adjoint() * k))
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatReport {
    pub defect: f64,
    pub argmax: (usize, usize),
    /// `((m, n), ‖[P_{ran S_1^m}, P_{ran S_2^n}]‖)` for every pair tried.
    pub table: Vec<((usize, usize), f64)>,
    pub warnings: Vec<String>,
}

/// Largest `‖[P_{ran S_1^m}, P_{ran S_2^n}]‖` over `1 ≤ m ≤ m_max`,
/// `1 ≤ n ≤ n_max`. Powers are applied to interior columns only.
pub fn compatibility_defect(
    s1: &CompressedOperator,
    s2: &CompressedOperator,
    m_max: usize,
    n_max: usize,
    rank_tol: f64,
) -> Result<CompatReport> {
    same_dim(s1, s2)?;
    if m_max == 0 || n_max == 0 {
        return Err(Error::InvalidParameter("m_max and n_max must be positive".into()));
    }
    s1.check_power(m_max)?;
    s2.check_power(n_max)?;
    let interior = both_interior(s1, s2);
    let ranges = |s: &CompressedOperator, kmax: usize| {
        let masked = s.matrix.mask_columns(&interior);
        let mut acc = masked.clone();
        let mut out = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            if k > 1 {
                acc = s.matrix.mul(&acc);
            }
            out.push(RangeProjector::from_columns(&acc, rank_tol));
        }
        out
    };
    let r1 = ranges(s1, m_max);
    let r2 = ranges(s2, n_max);
    let mut warnings = Vec::new();
    for (name, rs) in [("S_1", &r1), ("S_2", &r2)] {
        for (k, r) in rs.iter().enumerate() {
            if r.ambiguous {
                warnings.push(format!(
                    "rank decision for ran {name}^{} is within a factor 10 of rank_tol {rank_tol:e}",
                    k + 1
                ));
            }
        }
    }
    let mut table = Vec::new();
    let mut best = (0.0, (1, 1));
    for (m, p1) in r1.iter().enumerate() {
        for (n, p2) in r2.iter().enumerate() {
            let v = projector_commutator_norm(p1, p2);
            table.push(((m + 1, n + 1), v));
            if v > best.0 {
                best = (v, (m + 1, n + 1));
            }
        }
    }
    Ok(CompatReport {
        defect: best.0,
        argmax: best.1,
        table,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn dense_projector(a: &CMat, tol: f64) -> CMat {
        let q = column_span(a, tol, None).q;
        &q * q.adjoint()
    }

    #[test]
    fn range_projector_matches_dense_projector() {
        // two coordinate columns, one mixed column and one zero column
        let a = CMat::from_columns(&[
            CVec::from_vec(vec![c(1.0), c(0.0), c(0.0), c(0.0)]),
            CVec::from_vec(vec![c(0.0), c(0.0), c(2.0), c(0.0)]),
            CVec::from_vec(vec![c(1.0), c(1.0), c(0.0), C64::new(0.0, 1.0)]),
            CVec::zeros(4),
        ]);
        let p = RangeProjector::from_columns(&SparseMatrix::from_dense(&a), 1e-10);
        assert_eq!(p.rank(), 3);
        let mut dense = CMat::zeros(4, 4);
        for &r in &p.coords {
            dense[(r, r)] = c(1.0);
        }
        let mut q = CMat::zeros(4, p.q.ncols());
        for (k, &r) in p.q_rows.iter().enumerate() {
            q.set_row(r, &p.q.row(k));
        }
        dense += &q * q.adjoint();
        assert!((dense - dense_projector(&a, 1e-10)).camax() < 1e-14);
    }

    #[test]
    fn commutator_norm_matches_dense_oracle() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = CMat::from_columns(&[CVec::from_vec(vec![c(1.0), c(0.0), c(0.0)])]);
        let b = CMat::from_columns(&[CVec::from_vec(vec![c(s), c(s), c(0.0)])]);
        let pa = RangeProjector::from_columns(&SparseMatrix::from_dense(&a), 1e-12);
        let pb = RangeProjector::from_columns(&SparseMatrix::from_dense(&b), 1e-12);
        let da = dense_projector(&a, 1e-12);
        let db = dense_projector(&b, 1e-12);
        let want = spectral_norm(&(&da * &db - &db * &da));
        assert!((projector_commutator_norm(&pa, &pb) - want).abs() < 1e-14);
        assert!((want - 0.5).abs() < 1e-14);
        assert_eq!(projector_commutator_norm(&pa, &pa), 0.0);
    }
}
