//! Wold-type classification of a single compressed operator from the decay of
//! `⋂_{k ≤ K} ran S^k` and its wandering subspace.

use serde::Serialize;

use super::CompressedOperator;
use crate::error::{Error, Result};
use crate::linalg::{checked_svd, column_span, CMat};

/// Dense work is refused above this dimension.
pub const DETECTOR_MAX_DIM: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftClass {
    UnitaryLike,
    ShiftLike,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorReport {
    pub class: ShiftClass,
    /// `dim ⋂_{j ≤ k} ran S^j` for `k = 1..=K`.
    pub dims: Vec<usize>,
    pub full_dim: usize,
    /// `dim ker S^*`.
    pub wandering_dim: usize,
    /// Rank of the open-edge vectors projected onto `ker S^*`: wandering
    /// directions produced only by truncation.
    pub edge_rank: usize,
    pub genuine_wandering: usize,
    /// Ranges shrink although no genuine wandering vector exists, which is a
    /// truncation effect at the window boundary.
    pub boundary_flag: bool,
}

pub fn shift_detector(s: &CompressedOperator, k_max: usize, rank_tol: f64) -> Result<DetectorReport> {
    let n = s.dim();
    if k_max == 0 {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    s.check_power(k_max)?;
    if n > DETECTOR_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension {n} exceeds the dense detector limit {DETECTOR_MAX_DIM}"
        )));
    }
    let a = s.matrix.to_dense();
    let ran1 = column_span(&a, rank_tol, None).q;
    let mut cur = ran1.clone();
    let mut dims = vec![cur.ncols()];
    let mut power = a.clone();
    let keep = 1.0 - rank_tol.sqrt();
    for _ in 2..=k_max {
        power = &a * &power;
        let v = column_span(&power, rank_tol, None).q;
        if cur.ncols() == 0 || v.ncols() == 0 {
            cur = CMat::zeros(n, 0);
        } else {
            let (u, sv) = checked_svd(&(cur.adjoint() * &v));
            let idx: Vec<usize> = (0..sv.len())
                .filter(|&k| sv[k] >= keep)
                .collect();
            cur = &cur * u.select_columns(&idx);
        }
        dims.push(cur.ncols());
    }
    let wandering_dim = n - ran1.ncols();
    let edge_rank = if s.edge.is_empty() || wandering_dim == 0 {
        0
    } else {
        let mut e = CMat::zeros(n, s.edge.len());
        for (c, v) in s.edge.iter().enumerate() {
            for &(r, x) in v {
                e[(r, c)] = x;
            }
        }
        let proj = &e - &ran1 * (ran1.adjoint() * &e);
        column_span(&proj, rank_tol, Some(1.0)).rank
    };
    let genuine = wandering_dim.saturating_sub(edge_rank);
    let drops = dims.iter().any(|&d| d < n);
    let (class, boundary_flag) = match (genuine, edge_rank) {
        (0, _) => (ShiftClass::UnitaryLike, drops),
        (_, 0) => (ShiftClass::ShiftLike, false),
        _ => (ShiftClass::Mixed, false),
    };
    Ok(DetectorReport {
        class,
        dims,
        full_dim: n,
        wandering_dim,
        edge_rank,
        genuine_wandering: genuine,
        boundary_flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Diagram, SimpleKind};
    use crate::exact_model::MonomialSubspace;
    use crate::lattice::{LatticePoint, Window};
    use crate::linalg::SparseMatrix;
    use crate::numeric_model::{compress, NumericSubspace, ShiftOp};

    #[test]
    fn identity_is_unitary_like() {
        let s = CompressedOperator::custom(SparseMatrix::identity(6), "I").unwrap();
        let r = shift_detector(&s, 4, 1e-8).unwrap();
        assert_eq!(r.class, ShiftClass::UnitaryLike);
        assert_eq!(r.dims, vec![6; 4]);
        assert!(!r.boundary_flag);
    }

    #[test]
    fn quadrant_w_shift_loses_one_column_per_step() {
        let w = Window::square(0, 4, 5).unwrap();
        let m = MonomialSubspace::from_diagram(Diagram::quadrant(), LatticePoint::ORIGIN, w).unwrap();
        let num = NumericSubspace::from_monomial(&m);
        let s = compress(ShiftOp::W, &num).unwrap();
        let r = shift_detector(&s, 5, 1e-8).unwrap();
        assert_eq!(r.class, ShiftClass::ShiftLike);
        // domain columns 0..=9, each of height 10
        let h = 10;
        let want: Vec<usize> = (1..=5).map(|k| num.dim() - k * h).collect();
        assert_eq!(r.dims, want);
        assert_eq!(r.wandering_dim, h);
    }

    #[test]
    fn bilateral_rows_are_unitary_like_with_boundary_flag() {
        let w = Window::new(-4, 4, 0, 4, 3).unwrap();
        let m = MonomialSubspace::from_diagram(
            Diagram::simple(SimpleKind::Rows, LatticePoint::ORIGIN),
            LatticePoint::ORIGIN,
            w,
        )
        .unwrap();
        let s = compress(ShiftOp::W, &NumericSubspace::from_monomial(&m)).unwrap();
        let r = shift_detector(&s, 3, 1e-8).unwrap();
        assert_eq!(r.class, ShiftClass::UnitaryLike);
        assert!(r.boundary_flag);
        assert_eq!(r.genuine_wandering, 0);
    }

    #[test]
    fn power_beyond_margin_rejected() {
        let w = Window::square(0, 3, 1).unwrap();
        let m = MonomialSubspace::from_diagram(Diagram::quadrant(), LatticePoint::ORIGIN, w).unwrap();
        let s = compress(ShiftOp::W, &NumericSubspace::from_monomial(&m)).unwrap();
        assert!(shift_detector(&s, 2, 1e-8).is_err());
    }
}
