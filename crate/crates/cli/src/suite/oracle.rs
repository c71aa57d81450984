//! Independent checks used by the acceptance criteria. None of these call into
//! the library routine they validate.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use staircase_core::{DiagramClass, LatticePoint, SimpleKind, Window};

const POS_INF: i64 = i64::MAX / 4;
const NEG_INF: i64 = i64::MIN / 4;

/// Interval of admissible floors for one window column.
type Bounds = (i64, i64);

/// Floor constraints read off a windowed point set, or `None` when some column
/// is not upward closed inside the window.
fn column_bounds(points: &BTreeSet<LatticePoint>, w: &Window) -> Option<Vec<Bounds>> {
    (w.i_min..=w.i_max)
        .map(|i| {
            let col: Vec<i64> = (w.j_min..=w.j_max)
                .filter(|&j| points.contains(&LatticePoint::new(i, j)))
                .collect();
            match col.first() {
                None => Some((w.j_max + 1, POS_INF)),
                Some(&f) => {
                    if col.len() as i64 != w.j_max - f + 1 {
                        return None;
                    }
                    Some(if f == w.j_min { (NEG_INF, f) } else { (f, f) })
                }
            }
        })
        .collect()
}

fn fits(bounds: &[Bounds], w: &Window, floor: impl Fn(i64) -> i64) -> bool {
    bounds
        .iter()
        .enumerate()
        .all(|(k, &(lo, hi))| (lo..=hi).contains(&floor(w.i_min + k as i64)))
}

fn simple_fits(bounds: &[Bounds], w: &Window) -> Vec<SimpleKind> {
    let is = w.i_min - 1..=w.i_max + 1;
    let js = w.j_min - 1..=w.j_max + 1;
    let mut out = Vec::new();
    if fits(bounds, w, |_| NEG_INF) {
        out.push(SimpleKind::Plane);
    }
    if is.clone().any(|a| {
        js.clone()
            .any(|b| fits(bounds, w, |i| if i < a { POS_INF } else { b }))
    }) {
        out.push(SimpleKind::Quadrant);
    }
    if js.clone().any(|b| fits(bounds, w, |_| b)) {
        out.push(SimpleKind::Rows);
    }
    if is.clone().any(|a| fits(bounds, w, |i| if i < a { POS_INF } else { NEG_INF })) {
        out.push(SimpleKind::Cols);
    }
    out
}

fn shift(x: i64, by: i64) -> i64 {
    if x <= NEG_INF || x >= POS_INF {
        x
    } else {
        x + by
    }
}

/// Is there `c_0 ≥ c_1 ≥ … ≥ c_{m-1} ≥ c_0 - n` with `c_{i mod m} - (i div m) n`
/// inside every column's bounds? Bounds propagation to a fixpoint decides
/// this difference-constraint system.
fn periodic_feasible(bounds: &[Bounds], w: &Window, m: i64, n: i64) -> bool {
    let mu = m as usize;
    let mut lo = vec![NEG_INF; mu];
    let mut hi = vec![POS_INF; mu];
    for (k, &(blo, bhi)) in bounds.iter().enumerate() {
        let i = w.i_min + k as i64;
        let r = i.rem_euclid(m) as usize;
        let q = i.div_euclid(m);
        lo[r] = lo[r].max(shift(blo, q * n));
        hi[r] = hi[r].min(shift(bhi, q * n));
    }
    for _ in 0..4 * mu + 4 {
        let before = (lo.clone(), hi.clone());
        for r in 0..mu - 1 {
            hi[r + 1] = hi[r + 1].min(hi[r]);
            lo[r] = lo[r].max(lo[r + 1]);
        }
        lo[mu - 1] = lo[mu - 1].max(shift(lo[0], -n));
        hi[0] = hi[0].min(shift(hi[mu - 1], n));
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return false;
        }
        if (lo.clone(), hi.clone()) == before {
            break;
        }
    }
    true
}

/// Every regular shape whose restriction to the window reproduces `points`:
/// simple forms at any anchor, periodic ones with `m, n ≤ max_period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowFits {
    pub simple: Vec<SimpleKind>,
    pub periodic: Vec<(i64, i64)>,
}

impl WindowFits {
    /// The class the brute force assigns: simple before periodic, and the
    /// smallest periodic fit.
    pub fn class(&self) -> DiagramClass {
        if let Some(&kind) = self.simple.first() {
            DiagramClass::Simple { kind }
        } else if let Some(&(m, n)) = self.periodic.first() {
            DiagramClass::Periodic { m, n }
        } else {
            DiagramClass::Irregular
        }
    }
}

pub fn window_fits(points: &BTreeSet<LatticePoint>, w: &Window, max_period: i64) -> WindowFits {
    let Some(bounds) = column_bounds(points, w) else {
        return WindowFits {
            simple: Vec::new(),
            periodic: Vec::new(),
        };
    };
    let mut periodic = Vec::new();
    for m in 1..=max_period {
        for n in 1..=max_period {
            if periodic_feasible(&bounds, w, m, n) {
                periodic.push((m, n));
            }
        }
    }
    WindowFits {
        simple: simple_fits(&bounds, w),
        periodic,
    }
}

/// `‖S_w S_w^* S_z S_z^* y - S_z S_z^* S_w S_w^* y‖` for the truncated
/// `x = Σ_{j ≤ N} λ^j w^j`, with every operator a dense matrix on the
/// `(N+1)^2` monomials of the windowed quadrant.
pub fn seto_dense_defect(lambda: f64, n: i64) -> f64 {
    let side = (n + 1) as usize;
    let dim = side * side;
    let idx = |i: i64, j: i64| ((0..=n).contains(&i) && (0..=n).contains(&j)).then(|| i as usize * side + j as usize);
    let one = Complex64::new(1.0, 0.0);
    let mut x = DMatrix::<Complex64>::zeros(dim, 1);
    for j in 0..=n {
        x[(idx(j, 0).unwrap(), 0)] = Complex64::new(lambda.powi(j as i32), 0.0);
    }
    let pm = DMatrix::identity(dim, dim) - &x * x.adjoint() / Complex64::new(x.norm_squared(), 0.0);
    let shift = |di: i64, dj: i64| {
        let mut t = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..=n {
            for j in 0..=n {
                if let Some(r) = idx(i + di, j + dj) {
                    t[(r, idx(i, j).unwrap())] = one;
                }
            }
        }
        t
    };
    let tz = shift(0, 1);
    let sw = &pm * shift(1, 0) * &pm;
    let sz = &pm * &tz * &pm;
    let y = tz * &x;
    let lhs = &sw * sw.adjoint() * &sz * sz.adjoint() * &y;
    let rhs = &sz * sz.adjoint() * &sw * sw.adjoint() * &y;
    (lhs - rhs).norm()
}

/// Grid points `(a, b)` whose character value `l(ma - nb) mod M`, binned to
/// resolution `d`, lies in `gamma`.
pub fn brute_preimage_count(m: u64, n: u64, l: u64, big: usize, gamma: &[bool]) -> usize {
    let d = gamma.len() as i128;
    let bm = big as i128;
    let mut count = 0;
    for b in 0..bm {
        for a in 0..bm {
            let v = (l as i128 * (m as i128 * a - n as i128 * b)).rem_euclid(bm);
            if gamma[(v * d / bm) as usize] {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use staircase_core::Diagram;

    #[test]
    fn fits_for_known_shapes() {
        let w = Window::square(-6, 6, 0).unwrap();
        let q = Diagram::quadrant().restrict_to_window(&w);
        assert_eq!(window_fits(&q, &w, 4).class(), DiagramClass::Simple { kind: SimpleKind::Quadrant });

        let anti = Diagram::periodic(vec![0], 1).unwrap().restrict_to_window(&w);
        let f = window_fits(&anti, &w, 4);
        assert!(f.simple.is_empty());
        assert_eq!(f.periodic, vec![(1, 1), (2, 2), (3, 3), (4, 4)]);

        let p = Diagram::periodic(vec![1, 0], 1).unwrap().restrict_to_window(&w);
        assert_eq!(window_fits(&p, &w, 4).class(), DiagramClass::Periodic { m: 2, n: 1 });

        let stair = Diagram::finite_corner(vec![LatticePoint::new(-2, 3), LatticePoint::new(1, -1)])
            .unwrap()
            .restrict_to_window(&w);
        assert_eq!(window_fits(&stair, &w, 4).class(), DiagramClass::Irregular);
    }

    #[test]
    fn dense_seto_tends_to_lambda() {
        assert!((seto_dense_defect(0.5, 12) - 0.5).abs() < 1e-3);
    }
}
