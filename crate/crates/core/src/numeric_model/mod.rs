//! Truncated numeric model: sparse coefficient vectors on lattice windows,
//! orthonormal bases of subspaces, and compressions `P_M T|_M` of the shifts.
//!
//! A [`NumericSubspace`] lives on a finite domain box. The outer `margin`
//! steps of the box next to open sides form a ghost band; basis vectors
//! supported away from it are "interior", and all defect norms are taken on
//! interior columns so that truncation at the box never masquerades as
//! structure.

mod defects;
mod detector;
mod seto;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_model::MonomialSubspace;
use crate::lattice::{Direction, LatticePoint, Window};
use crate::linalg::SparseMatrix;
use crate::C64;

pub use defects::{
    compatibility_defect, doubly_commute_defect, isometry_defect, unitary_defect, CompatReport,
    RangeProjector,
};
pub use detector::{shift_detector, DetectorReport, ShiftClass, DETECTOR_MAX_DIM};
pub use seto::{build_seto_example, SetoDefect, SetoExample};

pub const DEFAULT_GRAM_TOL: f64 = 1e-12;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Finitely supported Fourier coefficient vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffVector {
    entries: BTreeMap<LatticePoint, C64>,
}

impl CoeffVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// The monomial `w^i z^j`.
    pub fn basis(p: LatticePoint) -> Self {
        Self::from_entries([(p, C64::new(1.0, 0.0))])
    }

    /// Entries in any order; repeated points add up and zeros are dropped.
    pub fn from_entries<I: IntoIterator<Item = (LatticePoint, C64)>>(it: I) -> Self {
        let mut v = Self::new();
        for (p, a) in it {
            v.add(p, a);
        }
        v.prune();
        v
    }

    pub fn entries(&self) -> &BTreeMap<LatticePoint, C64> {
        &self.entries
    }

    pub fn get(&self, p: LatticePoint) -> C64 {
        self.entries.get(&p).copied().unwrap_or_default()
    }

    pub fn add(&mut self, p: LatticePoint, a: C64) {
        *self.entries.entry(p).or_default() += a;
    }

    fn prune(&mut self) {
        self.entries.retain(|_, a| *a != C64::default());
    }

    pub fn support(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|a| *a == C64::default())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &CoeffVector) -> C64 {
        let (small, large, flip) = if self.entries.len() <= other.entries.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let s: C64 = small
            .entries
            .iter()
            .map(|(p, a)| a.conj() * large.get(*p))
            .sum();
        if flip {
            s.conj()
        } else {
            s
        }
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: C64, other: &CoeffVector) {
        for (&p, &a) in &other.entries {
            self.add(p, alpha * a);
        }
        self.prune();
    }

    pub fn scaled(&self, s: C64) -> CoeffVector {
        CoeffVector {
            entries: self.entries.iter().map(|(&p, &a)| (p, a * s)).collect(),
        }
    }

    /// Image under the shift `dir` (or its inverse) in the given geometry.
    pub fn shifted(&self, geometry: Geometry, dir: Direction, forward: bool) -> CoeffVector {
        CoeffVector {
            entries: self
                .entries
                .iter()
                .map(|(&p, &a)| (geometry.step(p, dir, forward), a))
                .collect(),
        }
    }
}

/// How the shifts move lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    /// Plain translation on `Z^2`.
    Plane,
    /// `z` acts cyclically on rows `j0 .. j0 + period`: the finite surrogate
    /// of a bilateral shift in the second variable.
    CyclicZ { j0: i64, period: i64 },
    /// Points `(k, s - k)` with `k` cyclic in `0..period`, anti-diagonals
    /// `s_min ..= s_max`. `z` maps `(s, k) ↦ (s + 1, k)` and `w` maps
    /// `(s, k) ↦ (s + 1, k + 1 mod period)`.
    DiagonalCycle { period: i64, s_min: i64, s_max: i64 },
}

impl Geometry {
    pub fn step(&self, p: LatticePoint, dir: Direction, forward: bool) -> LatticePoint {
        let sign = if forward { 1 } else { -1 };
        match (*self, dir) {
            (Geometry::Plane, _) | (Geometry::CyclicZ { .. }, Direction::W) => p + sign * dir.unit(),
            (Geometry::CyclicZ { j0, period }, Direction::Z) => {
                LatticePoint::new(p.i, j0 + (p.j - j0 + sign).rem_euclid(period))
            }
            (Geometry::DiagonalCycle { .. }, Direction::Z) => p + sign * dir.unit(),
            (Geometry::DiagonalCycle { period, .. }, Direction::W) => {
                let s = p.i + p.j + sign;
                let k = (p.i + sign).rem_euclid(period);
                LatticePoint::new(k, s - k)
            }
        }
    }
}

/// Sides of the domain box through which the true subspace continues
/// backwards. Right and top are always treated as open.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpenSides {
    pub left: bool,
    pub bottom: bool,
}

#[derive(Debug, Clone)]
pub struct NumericSubspace {
    basis: Vec<CoeffVector>,
    window: Window,
    gram_tol: f64,
    geometry: Geometry,
    open: OpenSides,
    index: HashMap<LatticePoint, Vec<(usize, C64)>>,
}

impl NumericSubspace {
    /// Wrap vectors that are already orthonormal; the Gram defect is checked
    /// against `gram_tol` on every overlapping pair.
    pub fn from_orthonormal(basis: Vec<CoeffVector>, window: Window, gram_tol: f64) -> Result<Self> {
        if let Some(p) = basis.iter().flat_map(|b| b.support()).find(|p| !window.contains(*p)) {
            return Err(Error::InvalidWindow(format!("basis support {p} outside {window}")));
        }
        let s = Self::assemble(basis, window, gram_tol);
        let defect = s.gram_defect();
        if defect > gram_tol {
            return Err(Error::InvalidParameter(format!(
                "basis is not orthonormal: Gram defect {defect:e} > {gram_tol:e}"
            )));
        }
        Ok(s)
    }

    fn assemble(basis: Vec<CoeffVector>, window: Window, gram_tol: f64) -> Self {
        let mut index: HashMap<LatticePoint, Vec<(usize, C64)>> = HashMap::new();
        for (a, b) in basis.iter().enumerate() {
            for (&p, &v) in b.entries() {
                index.entry(p).or_default().push((a, v));
            }
        }
        Self {
            basis,
            window,
            gram_tol,
            geometry: Geometry::Plane,
            open: OpenSides::default(),
            index,
        }
    }

    /// Coordinate embedding of a monomial subspace. With a symbolic
    /// description the domain is the window grown by its margin and the
    /// open sides follow the diagram; otherwise the domain is the window
    /// itself with closed sides.
    pub fn from_monomial(m: &MonomialSubspace) -> Self {
        let w = *m.window();
        let (domain, points, open) = match m.shifted_diagram() {
            Some(d) => {
                let ext = Window {
                    margin: w.margin,
                    ..w.extended()
                };
                let pts = d.restrict_to_window(&ext);
                let open = OpenSides {
                    left: pts
                        .iter()
                        .any(|p| p.i == ext.i_min && d.contains(*p - Direction::W.unit())),
                    bottom: pts
                        .iter()
                        .any(|p| p.j == ext.j_min && d.contains(*p - Direction::Z.unit())),
                };
                (ext, pts, open)
            }
            None => (w, m.points().clone(), OpenSides::default()),
        };
        Self::coordinates(&points, domain).with_open(open)
    }

    /// Coordinate vectors of `points`, in point order.
    pub fn coordinates(points: &BTreeSet<LatticePoint>, window: Window) -> Self {
        let basis = points.iter().map(|&p| CoeffVector::basis(p)).collect();
        Self::assemble(basis, window, DEFAULT_GRAM_TOL)
    }

    pub fn with_open(mut self, open: OpenSides) -> Self {
        self.open = open;
        self
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Self {
        self.geometry = geometry;
        self
    }

    pub fn with_window(mut self, window: Window) -> Result<Self> {
        if let Some(p) = self.index.keys().find(|p| !window.contains(**p)) {
            return Err(Error::InvalidWindow(format!("basis support {p} outside {window}")));
        }
        self.window = window;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CoeffVector] {
        &self.basis
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn gram_tol(&self) -> f64 {
        self.gram_tol
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn open_sides(&self) -> OpenSides {
        self.open
    }

    /// Basis indices and amplitudes touching `p`.
    pub fn at(&self, p: LatticePoint) -> &[(usize, C64)] {
        self.index.get(&p).map_or(&[], Vec::as_slice)
    }

    /// Sparse coordinates `⟨b_a, v⟩`.
    pub fn coords_sparse(&self, v: &CoeffVector) -> Vec<(usize, C64)> {
        let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
        for (&p, &x) in v.entries() {
            for &(a, b) in self.at(p) {
                *acc.entry(a).or_default() += b.conj() * x;
            }
        }
        acc.into_iter().filter(|(_, c)| *c != C64::default()).collect()
    }

    pub fn coords(&self, v: &CoeffVector) -> Vec<C64> {
        let mut out = vec![C64::default(); self.dim()];
        for (a, c) in self.coords_sparse(v) {
            out[a] = c;
        }
        out
    }

    /// `Σ c_a b_a`.
    pub fn synthesize(&self, c: &[C64]) -> CoeffVector {
        let mut v = CoeffVector::new();
        for (b, &x) in self.basis.iter().zip(c) {
            if x != C64::default() {
                v.axpy(x, b);
            }
        }
        v
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, v: &CoeffVector) -> CoeffVector {
        let mut out = CoeffVector::new();
        for (a, c) in self.coords_sparse(v) {
            out.axpy(c, &self.basis[a]);
        }
        out
    }

    /// `max |⟨b_a, b_c⟩ - δ_ac|` over pairs sharing support.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (c, b) in self.basis.iter().enumerate() {
            for (a, g) in self.coords_sparse(b) {
                let want = if a == c { 1.0 } else { 0.0 };
                worst = worst.max((g - want).norm());
            }
            if self.coords_sparse(b).iter().all(|&(a, _)| a != c) {
                worst = worst.max(1.0);
            }
        }
        worst
    }

    /// Whether `p` is at least `k` steps away from every open side.
    pub fn point_is_interior(&self, p: LatticePoint, k: usize) -> bool {
        let k = k as i64;
        let w = &self.window;
        match self.geometry {
            Geometry::Plane => {
                p.i + k <= w.i_max
                    && p.j + k <= w.j_max
                    && (!self.open.left || p.i - k >= w.i_min)
                    && (!self.open.bottom || p.j - k >= w.j_min)
            }
            Geometry::CyclicZ { .. } => p.i + k <= w.i_max && (!self.open.left || p.i - k >= w.i_min),
            Geometry::DiagonalCycle { s_min, s_max, .. } => {
                let s = p.i + p.j;
                s + k <= s_max && (!self.open.bottom || s - k >= s_min)
            }
        }
    }

    /// Basis vectors whose support stays `margin` steps from every open side.
    pub fn interior_mask(&self) -> Vec<bool> {
        let k = self.window.margin;
        self.basis
            .iter()
            .map(|b| b.support().all(|p| self.point_is_interior(p, k)))
            .collect()
    }

    /// Coordinates of `e_p` for domain points on the open edge behind `dir`:
    /// vectors a truncated backward shift would wrongly report as wandering.
    fn edge_vectors(&self, dir: Direction) -> Vec<Vec<(usize, C64)>> {
        let w = &self.window;
        let on_edge = |p: &LatticePoint| match (self.geometry, dir) {
            (Geometry::Plane, Direction::W) | (Geometry::CyclicZ { .. }, Direction::W) => {
                self.open.left && p.i == w.i_min
            }
            (Geometry::Plane, Direction::Z) => self.open.bottom && p.j == w.j_min,
            (Geometry::CyclicZ { .. }, Direction::Z) => false,
            (Geometry::DiagonalCycle { s_min, .. }, _) => self.open.bottom && p.i + p.j == s_min,
        };
        let mut pts: Vec<&LatticePoint> = self.index.keys().filter(|p| on_edge(p)).collect();
        pts.sort();
        pts.into_iter()
            .map(|p| self.at(*p).iter().map(|&(a, b)| (a, b.conj())).collect())
            .collect()
    }
}

/// Orthonormalize by modified Gram-Schmidt with re-orthogonalization; vectors
/// whose residual is at most `tol` times the largest input norm are dropped.
pub fn orthonormalize(vs: &[CoeffVector], window: Window, tol: f64) -> Result<NumericSubspace> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let scale = vs.iter().map(CoeffVector::norm).fold(0.0, f64::max);
    let mut out = NumericSubspace::assemble(Vec::new(), window, tol.max(DEFAULT_GRAM_TOL));
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for (a, c) in out.coords_sparse(&r) {
                let q = out.basis[a].clone();
                r.axpy(-c, &q);
            }
        }
        let n = r.norm();
        if n > tol * scale && n > 0.0 {
            push_basis(&mut out, r.scaled(C64::new(1.0 / n, 0.0)));
        }
    }
    if let Some(p) = out.index.keys().find(|p| !window.contains(**p)) {
        return Err(Error::InvalidWindow(format!("vector support {p} outside {window}")));
    }
    Ok(out)
}

fn push_basis(s: &mut NumericSubspace, b: CoeffVector) {
    let a = s.basis.len();
    for (&p, &v) in b.entries() {
        s.index.entry(p).or_default().push((a, v));
    }
    s.basis.push(b);
}

/// Orthonormal basis of `span{e_p : p ∈ ambient} ⊖ span(vs)`.
///
/// The removed vectors are row-reduced with pivots at the earliest points;
/// every free point `p` of their support gives `f_p = e_p - Σ c e_pivot`
/// orthogonal to all of them, and the `f_p` are orthonormalized in point
/// order. Points outside the support keep their coordinate vectors. This
/// keeps basis vectors local: the one anchored at `p` only touches points up
/// to `p` in the support.
pub fn complement_in_window(
    vs: &[CoeffVector],
    ambient: &BTreeSet<LatticePoint>,
    window: Window,
    tol: f64,
) -> Result<NumericSubspace> {
    if let Some(p) = vs.iter().flat_map(|v| v.support()).find(|p| !ambient.contains(p)) {
        return Err(Error::InvalidParameter(format!("vector support {p} outside the ambient set")));
    }
    if let Some(p) = ambient.iter().find(|p| !window.contains(**p)) {
        return Err(Error::InvalidWindow(format!("ambient point {p} outside {window}")));
    }
    let support: Vec<LatticePoint> = vs
        .iter()
        .flat_map(|v| v.support())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col: HashMap<LatticePoint, usize> = support.iter().enumerate().map(|(k, &p)| (p, k)).collect();

    // rows conj(v), normalized, reduced to echelon form
    let mut rows: Vec<Vec<C64>> = vs
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| {
            let n = v.norm();
            let mut r = vec![C64::default(); support.len()];
            for (p, a) in v.entries() {
                r[col[p]] = a.conj() / n;
            }
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut used = vec![false; rows.len()];
    for c in 0..support.len() {
        let best = (0..rows.len())
            .filter(|&r| !used[r])
            .max_by(|&a, &b| rows[a][c].norm().total_cmp(&rows[b][c].norm()));
        let Some(r) = best else { break };
        if rows[r][c].norm() <= tol {
            continue;
        }
        let piv = rows[r][c];
        rows[r].iter_mut().for_each(|x| *x /= piv);
        let prow = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != C64::default() {
                let f = row[c];
                row.iter_mut().zip(&prow).for_each(|(x, y)| *x -= f * y);
            }
        }
        used[r] = true;
        pivots.push((r, c));
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|p| p.1).collect();

    let mut anchored: Vec<(LatticePoint, CoeffVector)> = Vec::new();
    let mut current = NumericSubspace::assemble(Vec::new(), window, DEFAULT_GRAM_TOL);
    for (c, &p) in support.iter().enumerate() {
        if pivot_cols.contains(&c) {
            continue;
        }
        let mut f = CoeffVector::basis(p);
        for &(r, pc) in &pivots {
            let coef = rows[r][c];
            if coef != C64::default() {
                f.add(support[pc], -coef);
            }
        }
        f.prune();
        let scale = f.norm();
        for _ in 0..2 {
            for (a, x) in current.coords_sparse(&f) {
                let q = current.basis[a].clone();
                f.axpy(-x, &q);
            }
        }
        let n = f.norm();
        if n > tol * scale {
            let b = f.scaled(C64::new(1.0 / n, 0.0));
            push_basis(&mut current, b.clone());
            anchored.push((p, b));
        }
    }
    for &p in ambient {
        if !col.contains_key(&p) {
            anchored.push((p, CoeffVector::basis(p)));
        }
    }
    anchored.sort_by_key(|e| e.0);
    let basis = anchored.into_iter().map(|e| e.1).collect();
    Ok(NumericSubspace::assemble(basis, window, DEFAULT_GRAM_TOL.max(tol)))
}

/// Which operator a compression represents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OperatorLabel {
    #[serde(rename = "S_w")]
    Sw,
    #[serde(rename = "S_z")]
    Sz,
    #[serde(rename = "S_w*")]
    SwAdj,
    #[serde(rename = "S_z*")]
    SzAdj,
    #[serde(rename = "custom")]
    Custom(String),
}

impl OperatorLabel {
    fn adjoint(&self) -> OperatorLabel {
        match self {
            OperatorLabel::Sw => OperatorLabel::SwAdj,
            OperatorLabel::Sz => OperatorLabel::SzAdj,
            OperatorLabel::SwAdj => OperatorLabel::Sw,
            OperatorLabel::SzAdj => OperatorLabel::Sz,
            OperatorLabel::Custom(s) => OperatorLabel::Custom(format!("{s}*")),
        }
    }
}

/// Matrix of `P_M T|_M` in an orthonormal basis, with the interior mask of
/// its subspace and the open-edge vectors used by the shift detector.
#[derive(Debug, Clone)]
pub struct CompressedOperator {
    matrix: SparseMatrix,
    label: OperatorLabel,
    interior: Vec<bool>,
    margin: usize,
    edge: Vec<Vec<(usize, C64)>>,
}

impl CompressedOperator {
    /// Wrap an arbitrary square matrix; every column counts as interior.
    pub fn custom(matrix: SparseMatrix, name: &str) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.ncols();
        Ok(Self {
            matrix,
            label: OperatorLabel::Custom(name.to_string()),
            interior: vec![true; n],
            margin: usize::MAX,
            edge: Vec::new(),
        })
    }

    pub fn with_interior(mut self, interior: Vec<bool>) -> Result<Self> {
        if interior.len() != self.dim() {
            return Err(Error::DimensionMismatch("interior mask length".into()));
        }
        self.interior = interior;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &OperatorLabel {
        &self.label
    }

    pub fn interior(&self) -> &[bool] {
        &self.interior
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn edge_vectors(&self) -> &[Vec<(usize, C64)>] {
        &self.edge
    }

    pub fn check_power(&self, k: usize) -> Result<()> {
        if k > self.margin {
            Err(Error::MarginExhausted {
                requested: k,
                margin: self.margin,
            })
        } else {
            Ok(())
        }
    }

    /// Conjugate transpose, keeping the interior mask.
    pub fn adjoint(&self) -> CompressedOperator {
        CompressedOperator {
            matrix: self.matrix.adjoint(),
            label: self.label.adjoint(),
            interior: self.interior.clone(),
            margin: self.margin,
            edge: Vec::new(),
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix.apply(x)
    }
}

/// Shift operation to compress.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftOp {
    pub dir: Direction,
    pub adjoint: bool,
}

impl ShiftOp {
    pub const W: ShiftOp = ShiftOp {
        dir: Direction::W,
        adjoint: false,
    };
    pub const Z: ShiftOp = ShiftOp {
        dir: Direction::Z,
        adjoint: false,
    };
    pub const W_ADJ: ShiftOp = ShiftOp {
        dir: Direction::W,
        adjoint: true,
    };
    pub const Z_ADJ: ShiftOp = ShiftOp {
        dir: Direction::Z,
        adjoint: true,
    };
}

/// Matrix of `⟨b_a, T b_c⟩` for `T` the shift (or its adjoint) of `op`.
pub fn compress(op: ShiftOp, m: &NumericSubspace) -> Result<CompressedOperator> {
    m.window.check_power(1)?;
    let geometry = m.geometry;
    let cols = m
        .basis
        .iter()
        .map(|b| m.coords_sparse(&b.shifted(geometry, op.dir, !op.adjoint)))
        .collect();
    let label = match (op.dir, op.adjoint) {
        (Direction::W, false) => OperatorLabel::Sw,
        (Direction::Z, false) => OperatorLabel::Sz,
        (Direction::W, true) => OperatorLabel::SwAdj,
        (Direction::Z, true) => OperatorLabel::SzAdj,
    };
    Ok(CompressedOperator {
        matrix: SparseMatrix::from_columns(m.dim(), cols),
        label,
        interior: m.interior_mask(),
        margin: m.window.margin,
        edge: if op.adjoint { Vec::new() } else { m.edge_vectors(op.dir) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;

    fn p(i: i64, j: i64) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn orthonormalize_examples() {
        let w = Window::square(0, 40, 0).unwrap();
        let e = CoeffVector::basis(p(0, 0));
        assert_eq!(orthonormalize(&[e.clone(), e.clone()], w, 1e-12).unwrap().dim(), 1);
        let s = orthonormalize(&[e, CoeffVector::basis(p(1, 0))], w, 1e-12).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.gram_defect() < 1e-15);

        let x = CoeffVector::from_entries((0..=40).map(|j| (p(j, 0), c(0.5f64.powi(j as i32)))));
        assert!((x.norm_sqr() - 4.0 / 3.0).abs() < 1e-12);
        let s = orthonormalize(&[x], w, 1e-12).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complement_examples() {
        let w = Window::square(0, 1, 0).unwrap();
        let amb: BTreeSet<_> = w.points().collect();
        let s = complement_in_window(&[CoeffVector::basis(p(0, 0))], &amb, w, 1e-12).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(complement_in_window(&[], &amb, w, 1e-12).unwrap().dim(), 4);

        let w = Window::square(0, 40, 0).unwrap();
        let amb: BTreeSet<_> = w.points().collect();
        let x = CoeffVector::from_entries((0..=40).map(|j| (p(j, 0), c(0.5f64.powi(j as i32)))));
        let s = complement_in_window(&[x.clone()], &amb, w, 1e-12).unwrap();
        assert_eq!(s.dim(), 41 * 41 - 1);
        assert!(s.gram_defect() < 1e-12);
        assert!(s.basis().iter().all(|b| b.dot(&x).norm() < 1e-13));
    }

    #[test]
    fn complement_basis_is_local() {
        let w = Window::new(0, 10, 0, 0, 0).unwrap();
        let amb: BTreeSet<_> = w.points().collect();
        let x = CoeffVector::from_entries((0..=10).map(|j| (p(j, 0), C64::new(0.3, 0.4).powi(j as i32))));
        let s = complement_in_window(&[x], &amb, w, 1e-12).unwrap();
        for (k, b) in s.basis().iter().enumerate() {
            assert!(b.support().all(|q| q.i <= k as i64 + 1));
        }
    }

    #[test]
    fn compress_full_window_is_shift_with_boundary_zeros() {
        let w = Window::square(0, 3, 1).unwrap();
        let m = NumericSubspace::coordinates(&w.points().collect(), w);
        let s = compress(ShiftOp::W, &m).unwrap();
        let d = s.matrix().to_dense();
        for (c, b) in m.basis().iter().enumerate() {
            let q = b.support().next().unwrap();
            let col_sum: f64 = (0..m.dim()).map(|r| d[(r, c)].norm()).sum();
            assert_eq!(col_sum, if q.i < 3 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn adjoint_compression_is_conjugate_transpose() {
        let w = Window::square(0, 12, 2).unwrap();
        let amb: BTreeSet<_> = w.points().collect();
        let x = CoeffVector::from_entries((0..=12).map(|j| (p(j, 0), C64::new(0.5, 0.2).powi(j as i32))));
        let m = complement_in_window(&[x], &amb, w, 1e-12).unwrap();
        for (f, b) in [(ShiftOp::W, ShiftOp::W_ADJ), (ShiftOp::Z, ShiftOp::Z_ADJ)] {
            let a = compress(f, &m).unwrap().matrix().to_dense();
            let b = compress(b, &m).unwrap().matrix().to_dense();
            assert!((a.adjoint() - b).camax() < 1e-14);
        }
    }

    #[test]
    fn monomial_embedding_tracks_open_sides() {
        use crate::diagram::SimpleKind;
        let w = Window::new(-3, 3, 0, 3, 1).unwrap();
        let rows = MonomialSubspace::from_diagram(
            Diagram::simple(SimpleKind::Rows, LatticePoint::ORIGIN),
            LatticePoint::ORIGIN,
            w,
        )
        .unwrap();
        let m = NumericSubspace::from_monomial(&rows);
        assert_eq!(
            m.open_sides(),
            OpenSides {
                left: true,
                bottom: false
            }
        );
        let interior = m.interior_mask().iter().filter(|&&b| b).count();
        assert_eq!(interior, rows.len());
    }

    #[test]
    fn geometries_step_and_invert() {
        let gs = [
            Geometry::Plane,
            Geometry::CyclicZ { j0: -2, period: 5 },
            Geometry::DiagonalCycle {
                period: 4,
                s_min: 0,
                s_max: 9,
            },
        ];
        for g in gs {
            for d in Direction::BOTH {
                let q = p(3, -1);
                assert_eq!(g.step(g.step(q, d, true), d, false), q);
            }
        }
        let g = Geometry::DiagonalCycle {
            period: 4,
            s_min: 0,
            s_max: 9,
        };
        assert_eq!(g.step(p(3, 2), Direction::W, true), p(0, 6));
        assert_eq!(g.step(p(1, 2), Direction::W, true), p(2, 2));
        let g = Geometry::CyclicZ { j0: 0, period: 3 };
        assert_eq!(g.step(p(0, 2), Direction::Z, true), p(0, 0));
    }
}
