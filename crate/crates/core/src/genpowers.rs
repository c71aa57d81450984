//! Generalized powers: pairs `V_1, V_2` assembled from a periodic cell `J_0`,
//! a period `(m, n)` and a unitary `𝒰` with a star-cyclic vector `e`, plus
//! verification of the block characterization and period rescaling.
//!
//! Every block `H_{i0,j0}` (`(i0, j0) ∈ J_0`) is a copy of `ℂ^d` in which the
//! label `e_{i0+km, j0-kn}` stands for `𝒰^k e`. In these coordinates `V_2` is
//! the identity from `(i, j)` to `(i, j+1)`, `V_1` is the identity from
//! `(i, j)` to `(i+1, j)` for `i < m-1`, and from `(m-1, j)` it lands in
//! `(0, j+n)` through `𝒰`. The cell is truncated at `j ≤ j_max`; checks only
//! use blocks whose required images stay below the cut.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::PeriodCell;
use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticePoint, Window};
use crate::linalg::{
    column_span, cyclic_permutation, krylov_rank, random_unit_vector, random_unitary, spectral_norm,
    unitarity_defect, CMat, CVec, SparseMatrix,
};
use crate::numeric_model::{compress, Geometry, NumericSubspace, ShiftOp};
use crate::torusgeo::{fourier_basis_vector, ArcSet};
use crate::C64;

pub const DEFAULT_GP_TOL: f64 = 1e-10;
/// Unitarity required of `𝒰` at build time.
pub const UNITARY_TOL: f64 = 1e-12;
/// Relative singular-value threshold of Krylov rank decisions.
pub const KRYLOV_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub label: LatticePoint,
    pub indices: Vec<usize>,
}

/// Blocks of a truncated system; `j_max` is the truncation height of labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub blocks: Vec<Block>,
    pub j_max: i64,
}

impl BlockLayout {
    fn validate(&self, dim: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for b in &self.blocks {
            if !labels.insert(b.label) {
                return Err(Error::InconsistentBlocks(format!("label {} repeated", b.label)));
            }
            if b.indices.is_empty() {
                return Err(Error::InconsistentBlocks(format!("block {} is empty", b.label)));
            }
            for &k in &b.indices {
                if k >= dim {
                    return Err(Error::InconsistentBlocks(format!(
                        "index {k} of block {} outside dimension {dim}",
                        b.label
                    )));
                }
                if !seen.insert(k) {
                    return Err(Error::InconsistentBlocks(format!("index {k} in two blocks")));
                }
            }
        }
        Ok(())
    }

    fn by_label(&self) -> BTreeMap<LatticePoint, usize> {
        self.blocks.iter().enumerate().map(|(k, b)| (b.label, k)).collect()
    }

    /// Blocks whose label can climb `reach` rows without leaving the cut.
    fn reaches(&self, b: &Block, reach: i64) -> bool {
        b.label.j + reach <= self.j_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPowerSystem {
    pub cell: PeriodCell,
    pub m: usize,
    pub n: usize,
    /// `𝒰`.
    pub unitary: CMat,
    /// `e`.
    pub cyclic: CVec,
    pub layout: BlockLayout,
    pub v1: SparseMatrix,
    pub v2: SparseMatrix,
    /// Largest power the rescaling check may use.
    pub margin: usize,
}

/// `(rank of [𝒰^k e : |k| < d] = d, rank)`. For a unitary matrix `𝒰^* =
/// 𝒰^{-1}` is a polynomial in `𝒰`, so cyclic and star-cyclic agree.
pub fn star_cyclic_check(u: &CMat, e: &CVec, tol: f64) -> (bool, usize) {
    let r = krylov_rank(u, e, tol);
    (r == u.nrows(), r)
}

pub fn build_gp(
    cell: &PeriodCell,
    m: usize,
    n: usize,
    u: &CMat,
    e: &CVec,
    window: Window,
) -> Result<GeneralizedPowerSystem> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    if cell.m() != m as i64 || cell.n() != n as i64 {
        return Err(Error::InvalidDiagram(format!(
            "cell has period ({}, {}) but the system asks for ({m}, {n})",
            cell.m(),
            cell.n()
        )));
    }
    let d = u.nrows();
    if d == 0 || u.ncols() != d || e.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{}, cyclic vector has length {}",
            u.nrows(),
            u.ncols(),
            e.len()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let (ok, rank) = star_cyclic_check(u, e, KRYLOV_TOL);
    if !ok {
        return Err(Error::NotCyclic { rank, dim: d });
    }
    let j_max = window.j_max;
    let labels: Vec<LatticePoint> = (0..m as i64)
        .flat_map(|r| (cell.floor(r)..=j_max).map(move |j| LatticePoint::new(r, j)))
        .collect();
    if labels.is_empty() {
        return Err(Error::InvalidWindow(format!("no cell block lies below j = {j_max}")));
    }
    let layout = BlockLayout {
        blocks: labels
            .iter()
            .enumerate()
            .map(|(k, &label)| Block {
                label,
                indices: (k * d..(k + 1) * d).collect(),
            })
            .collect(),
        j_max,
    };
    let pos = layout.by_label();
    let total = labels.len() * d;
    let one = C64::new(1.0, 0.0);
    let mut v1 = vec![Vec::new(); total];
    let mut v2 = vec![Vec::new(); total];
    for (k, &lab) in labels.iter().enumerate() {
        if let Some(&t) = pos.get(&(lab + Direction::Z.unit())) {
            for c in 0..d {
                v2[k * d + c] = vec![(t * d + c, one)];
            }
        }
        if lab.i + 1 < m as i64 {
            let t = pos[&(lab + Direction::W.unit())];
            for c in 0..d {
                v1[k * d + c] = vec![(t * d + c, one)];
            }
        } else if let Some(&t) = pos.get(&LatticePoint::new(0, lab.j + n as i64)) {
            for c in 0..d {
                v1[k * d + c] = (0..d).map(|r| (t * d + r, u[(r, c)])).collect();
            }
        }
    }
    Ok(GeneralizedPowerSystem {
        cell: cell.clone(),
        m,
        n,
        unitary: u.clone(),
        cyclic: e.clone(),
        layout,
        v1: SparseMatrix::from_columns(total, v1),
        v2: SparseMatrix::from_columns(total, v2),
        margin: window.margin,
    })
}

impl GeneralizedPowerSystem {
    pub fn dim(&self) -> usize {
        self.v1.ncols()
    }

    /// Blockwise `𝒰` on every block.
    pub fn u_big(&self) -> SparseMatrix {
        let d = self.unitary.nrows();
        let cols = self
            .layout
            .blocks
            .iter()
            .flat_map(|b| {
                (0..d).map(move |c| (0..d).map(|r| (b.indices[r], self.unitary[(r, c)])).collect())
            })
            .collect();
        SparseMatrix::from_columns(self.dim(), cols)
    }

    /// `‖(V_1^m - U_big V_2^n) P_int‖` over blocks that can climb `n` rows.
    pub fn relation_defect(&self) -> f64 {
        let lhs = self.v1.pow(self.m);
        let rhs = self.u_big().mul(&self.v2.pow(self.n));
        let mask = block_mask(&self.layout, self.dim(), self.n as i64);
        lhs.sub(&rhs).mask_columns(&mask).op_norm()
    }

    pub fn verify(&self, tol: f64) -> Result<GpVerdict> {
        gp_verify(&self.v1, &self.v2, &self.layout, self.m, self.n, tol, Some(&self.cyclic), 0)
    }
}

fn block_mask(layout: &BlockLayout, dim: usize, reach: i64) -> Vec<bool> {
    let mut mask = vec![false; dim];
    for b in layout.blocks.iter().filter(|b| layout.reaches(b, reach)) {
        for &k in &b.indices {
            mask[k] = true;
        }
    }
    mask
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GpVerdict {
    pub is_gp: bool,
    pub defects: BTreeMap<String, f64>,
    pub failing_block: Option<LatticePoint>,
    /// Krylov rank found in check (b) and the block dimension.
    pub krylov: (usize, usize),
}

/// Dense `rows × cols` submatrix of `a`, and the norm of the part of the
/// selected columns falling outside `rows`.
fn split_block(a: &SparseMatrix, rows: &[usize], cols: &[usize]) -> (CMat, f64) {
    let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let mut inside = CMat::zeros(rows.len(), cols.len());
    let mut outside = vec![Vec::new(); a.ncols()];
    for (k, &c) in cols.iter().enumerate() {
        for &(r, v) in a.col(c) {
            match pos.get(&r) {
                Some(&pr) => inside[(pr, k)] = v,
                None => outside[c].push((r, v)),
            }
        }
    }
    (inside, SparseMatrix::from_columns(a.nrows(), outside).op_norm())
}

/// Defect of `x` as a unitary map between equal-dimensional blocks.
fn block_unitary_defect(x: &CMat) -> f64 {
    if x.nrows() != x.ncols() {
        return 1.0;
    }
    let n = x.ncols();
    let id = CMat::identity(n, n);
    spectral_norm(&(x.adjoint() * x - &id)).max(spectral_norm(&(x * x.adjoint() - &id)))
}

/// Check the block characterization of generalized powers:
///
/// * (a) `U = V_2^{*n} V_1^m` maps each block unitarily onto itself;
/// * (b) on the first checkable block `U` has a star-cyclic vector (`e` if
///   given in that block's coordinates, else a seeded random vector);
/// * (c) `V_1^{i-i'} V_2^{j-j'}` is unitary from `H_{i',j'}` onto `H_{i,j}`,
///   negative exponents meaning adjoint powers; forward moves are applied
///   first, so the path stays inside the cell;
/// * (d) `U` commutes with `V_1` and `V_2` on blocks far enough from the cut.
#[allow(clippy::too_many_arguments)]
pub fn gp_verify(
    v1: &SparseMatrix,
    v2: &SparseMatrix,
    layout: &BlockLayout,
    m: usize,
    n: usize,
    tol: f64,
    cyclic: Option<&CVec>,
    seed: u64,
) -> Result<GpVerdict> {
    let dim = v1.ncols();
    if v1.nrows() != dim || v2.nrows() != dim || v2.ncols() != dim {
        return Err(Error::DimensionMismatch("V1 and V2 must be square of equal size".into()));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    layout.validate(dim)?;
    let ni = n as i64;
    let v2a = v2.adjoint();
    let u = v2a.pow(n).mul(&v1.pow(m));
    let mut defects: BTreeMap<String, f64> = BTreeMap::new();
    let mut failing: Option<LatticePoint> = None;
    let mut note = |name: &str, val: f64, block: LatticePoint, failing: &mut Option<LatticePoint>| {
        let e = defects.entry(name.to_string()).or_insert(0.0);
        *e = e.max(val);
        if !(val <= tol) && failing.is_none() {
            *failing = Some(block);
        }
    };

    // (a)
    let checkable: Vec<&Block> = layout.blocks.iter().filter(|b| layout.reaches(b, ni)).collect();
    if checkable.is_empty() {
        return Err(Error::MarginExhausted {
            requested: n,
            margin: 0,
        });
    }
    for b in &checkable {
        let (ub, leak) = split_block(&u, &b.indices, &b.indices);
        note("a_block_unitarity", block_unitary_defect(&ub), b.label, &mut failing);
        note("a_leakage", leak, b.label, &mut failing);
    }

    // (b)
    let first = checkable[0];
    let (ub, _) = split_block(&u, &first.indices, &first.indices);
    let dimb = first.indices.len();
    let vec = match cyclic {
        Some(e) if e.len() == dimb => e.clone(),
        _ => random_unit_vector(dimb, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    let rank = krylov_rank(&ub, &vec, KRYLOV_TOL);
    note("b_krylov_deficit", (dimb - rank) as f64, first.label, &mut failing);

    // (c)
    let v1a = v1.adjoint();
    for src in &layout.blocks {
        for dst in &layout.blocks {
            let (a, bb) = (dst.label.i - src.label.i, dst.label.j - src.label.j);
            if src.label == dst.label || bb.abs() > ni + 1 {
                continue;
            }
            let mut word: Vec<&SparseMatrix> = Vec::new();
            let steps = [
                (v1, a.max(0)),
                (v2, bb.max(0)),
                (&v1a, (-a).max(0)),
                (&v2a, (-bb).max(0)),
            ];
            for (op, k) in steps {
                word.extend(std::iter::repeat_n(op, k as usize));
            }
            let mut full = vec![Vec::new(); dim];
            for &c in &src.indices {
                let mut x = vec![(c, C64::new(1.0, 0.0))];
                for op in &word {
                    x = apply_sparse(op, &x);
                }
                full[c] = x;
            }
            let xm = SparseMatrix::from_columns(dim, full);
            let (inside, leak) = split_block(&xm, &dst.indices, &src.indices);
            note("c_cross_block", block_unitary_defect(&inside).max(leak), src.label, &mut failing);
        }
    }

    // (d)
    for (name, v, reach) in [("d_commute_v1", v1, 2 * ni + 1), ("d_commute_v2", v2, ni + 1)] {
        let c = u.mul(v).sub(&v.mul(&u));
        for b in layout.blocks.iter().filter(|b| layout.reaches(b, reach)) {
            let mut mask = vec![false; dim];
            for &k in &b.indices {
                mask[k] = true;
            }
            note(name, c.mask_columns(&mask).op_norm(), b.label, &mut failing);
        }
    }

    let is_gp = failing.is_none() && defects.values().all(|&v| v <= tol);
    Ok(GpVerdict {
        is_gp,
        defects,
        failing_block: failing,
        krylov: (rank, dimb),
    })
}

fn apply_sparse(op: &SparseMatrix, x: &[(usize, C64)]) -> Vec<(usize, C64)> {
    let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
    for &(c, xc) in x {
        for &(r, v) in op.col(c) {
            *acc.entry(r).or_default() += v * xc;
        }
    }
    acc.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaleReport {
    pub l: usize,
    /// `‖((V_2^{*n} V_1^m)^l - V_2^{*ln} V_1^{lm}) P_int‖`.
    pub power_defect: f64,
    /// Largest overlap `‖Q_k^* Q_{k'}‖` between the regrouped pieces
    /// `span{𝒰^{k+ql} e}`, or the dimension shortfall of their sum.
    pub regroup_defect: f64,
    pub passes: bool,
}

/// Compare the period-`(lm, ln)` description with the original: the power
/// identity on blocks that can climb `ln` rows, and the split of each block
/// into the `l` new blocks `H'_{i+km, j-kn}` spanned by `𝒰^{k+ql} e`.
pub fn period_rescale_check(sys: &GeneralizedPowerSystem, l: usize, tol: f64) -> Result<RescaleReport> {
    if l == 0 {
        return Err(Error::InvalidParameter("l must be positive".into()));
    }
    let need = l * sys.m.max(sys.n);
    if need > sys.margin {
        return Err(Error::MarginExhausted {
            requested: need,
            margin: sys.margin,
        });
    }
    let v2a = sys.v2.adjoint();
    let u = v2a.pow(sys.n).mul(&sys.v1.pow(sys.m));
    let lhs = u.pow(l);
    let rhs = v2a.pow(l * sys.n).mul(&sys.v1.pow(l * sys.m));
    let mask = block_mask(&sys.layout, sys.dim(), (l * sys.n) as i64);
    if !mask.iter().any(|&b| b) {
        return Err(Error::MarginExhausted {
            requested: l * sys.n,
            margin: (sys.layout.j_max - sys.cell.floor(0)).max(0) as usize,
        });
    }
    let power_defect = lhs.sub(&rhs).mask_columns(&mask).op_norm();

    let d = sys.unitary.nrows();
    let ul = pow_dense(&sys.unitary, l);
    let mut pieces: Vec<CMat> = Vec::with_capacity(l);
    let mut start = sys.cyclic.clone();
    for _ in 0..l {
        let mut k = CMat::zeros(d, d);
        let mut v = start.clone();
        for c in 0..d {
            k.set_column(c, &v);
            v = &ul * v;
        }
        pieces.push(column_span(&k, KRYLOV_TOL, None).q);
        start = &sys.unitary * start;
    }
    let total: usize = pieces.iter().map(|q| q.ncols()).sum();
    let mut regroup_defect = (total as f64 - d as f64).abs();
    for a in 0..l {
        for b in a + 1..l {
            regroup_defect = regroup_defect.max(spectral_norm(&(pieces[a].adjoint() * &pieces[b])));
        }
    }
    Ok(RescaleReport {
        l,
        power_defect,
        regroup_defect,
        passes: power_defect <= tol && regroup_defect <= tol,
    })
}

fn pow_dense(u: &CMat, k: usize) -> CMat {
    let d = u.nrows();
    (0..k).fold(CMat::identity(d, d), |acc, _| u * acc)
}

/// Random valid input for `build_gp`: a period cell for `(m, n)`, a unitary
/// `W diag(phases) W^*` with Haar `W` and uniform phases, and a random unit
/// vector (cyclic with probability one).
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    m: usize,
    n: usize,
) -> (PeriodCell, CMat, CVec) {
    let mut floors = vec![0i64];
    let mut budget = n as i64;
    for _ in 1..m {
        let drop = rng.random_range(0..=budget);
        budget -= drop;
        floors.push(floors.last().unwrap() - drop);
    }
    let cell = PeriodCell::new(floors, n as i64).expect("floors built within the period");
    let w = random_unitary(d, rng);
    let phases = CVec::from_fn(d, |_, _| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
    let u = &w * CMat::from_diagonal(&phases) * w.adjoint();
    (cell, u, random_unit_vector(d, rng))
}

/// `𝒰 = W C_d W^*` with `C_d` the cyclic permutation and `e = W e_0`: the
/// orbit of `e` is orthonormal, so regrouping into `l | d` pieces is exact.
pub fn cyclic_instance<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (CMat, CVec) {
    let w = random_unitary(d, rng);
    let u = &w * cyclic_permutation(d) * w.adjoint();
    (u, w.column(0).into_owned())
}

/// Result of the finite realization of the anti-diagonal example.
#[derive(Debug, Clone)]
pub struct ExampleE1 {
    /// `ℋ_+ = ⊕_{0 ≤ s ≤ S} ℋ_s` with `ℋ_s = L_w^s ℋ_0`.
    pub h_plus: NumericSubspace,
    pub system: GeneralizedPowerSystem,
    /// Grid frequencies `r ∈ γ`, in basis order within each block.
    pub frequencies: Vec<usize>,
    pub degenerate: bool,
}

/// Anti-diagonals `H_s = span{w^k z^{s-k}}` with `k` cyclic modulo `d`, so
/// `L_{w z̄}` acts on each as the cyclic permutation. `ℋ_0 = χ_γ(L_{wz̄}) H_0`
/// is spanned by the Fourier vectors `u_r` with `r ∈ γ`, and the system is
/// the compression of `(L_w, L_z)` to `ℋ_+` with blocks `ℋ_s`, period
/// `(1, 1)`, `𝒰 = L_{wz̄}|ℋ_0` and cyclic vector `χ_γ 1`. The anti-diagonals
/// run over `0 ..= window.j_max`.
pub fn example_e1_build(window: Window, gamma: &ArcSet, d: usize) -> Result<ExampleE1> {
    if gamma.resolution() != d {
        return Err(Error::ResolutionMismatch(format!(
            "arc set has resolution {} but d = {d}",
            gamma.resolution()
        )));
    }
    let s_max = window.j_max;
    if s_max < 0 {
        return Err(Error::InvalidWindow(format!("{window} has no anti-diagonal s ≥ 0")));
    }
    let di = d as i64;
    let freqs: Vec<usize> = gamma.members().collect();
    let geometry = Geometry::DiagonalCycle {
        period: di,
        s_min: 0,
        s_max,
    };
    let domain = Window::new(0, di - 1, -(di - 1), s_max, window.margin)?;
    let mut basis = Vec::new();
    for s in 0..=s_max {
        for &r in &freqs {
            basis.push(fourier_basis_vector(d, r, |k| LatticePoint::new(k, s - k)));
        }
    }
    let h_plus = NumericSubspace::from_orthonormal(basis, domain, 1e-12)?.with_geometry(geometry);

    let g = freqs.len();
    let cell = PeriodCell::new(vec![0], 1)?;
    let unitary = CMat::from_diagonal(&CVec::from_iterator(
        g,
        freqs
            .iter()
            .map(|&r| C64::from_polar(1.0, std::f64::consts::TAU * r as f64 / d as f64)),
    ));
    let cyclic = CVec::from_element(g, C64::new(1.0 / (d as f64).sqrt(), 0.0));
    let layout = BlockLayout {
        blocks: (0..=s_max)
            .map(|s| Block {
                label: LatticePoint::new(0, s),
                indices: (s as usize * g..(s as usize + 1) * g).collect(),
            })
            .collect(),
        j_max: s_max,
    };
    let (v1, v2) = if g == 0 {
        (SparseMatrix::zeros(0, 0), SparseMatrix::zeros(0, 0))
    } else {
        (
            compress(ShiftOp::W, &h_plus)?.matrix().clone(),
            compress(ShiftOp::Z, &h_plus)?.matrix().clone(),
        )
    };
    Ok(ExampleE1 {
        h_plus,
        system: GeneralizedPowerSystem {
            cell,
            m: 1,
            n: 1,
            unitary,
            cyclic,
            layout: if g == 0 {
                BlockLayout {
                    blocks: Vec::new(),
                    j_max: s_max,
                }
            } else {
                layout
            },
            v1,
            v2,
            margin: window.margin,
        },
        frequencies: freqs,
        degenerate: g == 0 || g == d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn e0(d: usize) -> CVec {
        let mut e = CVec::zeros(d);
        e[0] = c(1.0);
        e
    }

    #[test]
    fn star_cyclic_examples() {
        let e = CVec::from_vec(vec![c(1.0), c(1.0)]) / c(2f64.sqrt());
        assert_eq!(star_cyclic_check(&CMat::identity(2, 2), &e, 1e-10), (false, 1));
        let flip = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-1.0)]));
        assert_eq!(star_cyclic_check(&flip, &e, 1e-10), (true, 2));
        assert_eq!(star_cyclic_check(&cyclic_permutation(5), &e0(5), 1e-10), (true, 5));
    }

    #[test]
    fn cyclic_permutation_system_splits_v1() {
        let d = 4;
        let cell = PeriodCell::new(vec![0], 1).unwrap();
        let w = Window::new(0, 0, 0, 6, 2).unwrap();
        let sys = build_gp(&cell, 1, 1, &cyclic_permutation(d), &e0(d), w).unwrap();
        // V1 = U_big V2 wherever V2 lands inside the cut
        let mask = block_mask(&sys.layout, sys.dim(), 1);
        let diff = sys.v1.sub(&sys.u_big().mul(&sys.v2)).mask_columns(&mask);
        assert_eq!(diff.op_norm(), 0.0);
        assert!(sys.verify(1e-12).unwrap().is_gp);
    }

    #[test]
    fn scalar_unitary_gives_equal_powers() {
        let cell = PeriodCell::new(vec![0, 0, -1], 2).unwrap();
        let w = Window::new(0, 0, -1, 8, 2).unwrap();
        let sys = build_gp(&cell, 3, 2, &CMat::identity(1, 1), &e0(1), w).unwrap();
        let mask = block_mask(&sys.layout, sys.dim(), 2);
        let diff = sys.v1.pow(3).sub(&sys.v2.pow(2)).mask_columns(&mask);
        assert_eq!(diff.op_norm(), 0.0);
        assert!(sys.verify(1e-12).unwrap().is_gp);
    }

    #[test]
    fn two_phase_system_passes() {
        let u = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), C64::new(0.0, 1.0)]));
        let e = CVec::from_vec(vec![c(1.0), c(1.0)]) / c(2f64.sqrt());
        let cell = PeriodCell::new(vec![0, 0], 1).unwrap();
        let sys = build_gp(&cell, 2, 1, &u, &e, Window::new(0, 1, 0, 6, 2).unwrap()).unwrap();
        let v = sys.verify(1e-12).unwrap();
        assert!(v.is_gp, "{v:?}");
        assert!(sys.relation_defect() < 1e-14);
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let cell = PeriodCell::new(vec![0], 1).unwrap();
        let w = Window::new(0, 0, 0, 4, 1).unwrap();
        let e = CVec::from_vec(vec![c(1.0), c(0.0)]);
        assert_eq!(
            build_gp(&cell, 1, 1, &CMat::identity(2, 2), &e, w),
            Err(Error::NotCyclic { rank: 1, dim: 2 })
        );
        let bad = CMat::from_diagonal(&CVec::from_vec(vec![c(2.0), c(1.0)]));
        assert!(matches!(build_gp(&cell, 1, 1, &bad, &e, w), Err(Error::NotUnitary { .. })));
        assert!(build_gp(&cell, 2, 1, &cyclic_permutation(2), &e, w).is_err());
    }

    #[test]
    fn identity_unitary_fails_cyclicity_check() {
        // hand-assembled: the cyclic-permutation layout with 𝒰 = I
        let cell = PeriodCell::new(vec![0], 1).unwrap();
        let w = Window::new(0, 0, 0, 5, 1).unwrap();
        let mut sys = build_gp(&cell, 1, 1, &cyclic_permutation(2), &e0(2), w).unwrap();
        sys.unitary = CMat::identity(2, 2);
        sys.v1 = sys.v2.clone();
        let v = gp_verify(&sys.v1, &sys.v2, &sys.layout, 1, 1, 1e-10, None, 7).unwrap();
        assert!(!v.is_gp);
        assert_eq!(v.defects["b_krylov_deficit"], 1.0);
        assert_eq!(v.defects["a_block_unitarity"], 0.0);
    }

    #[test]
    fn quadrant_shifts_with_diagonal_blocks_are_not_gp() {
        let s_max = 6i64;
        let pts: Vec<LatticePoint> = (0..=s_max)
            .flat_map(|s| (0..=s).map(move |k| LatticePoint::new(k, s - k)))
            .collect();
        let idx: BTreeMap<LatticePoint, usize> = pts.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let shift = |e: LatticePoint| {
            let cols = pts
                .iter()
                .map(|&p| idx.get(&(p + e)).map(|&r| vec![(r, c(1.0))]).unwrap_or_default())
                .collect();
            SparseMatrix::from_columns(pts.len(), cols)
        };
        let layout = BlockLayout {
            blocks: (0..=s_max)
                .map(|s| Block {
                    label: LatticePoint::new(0, s),
                    indices: (0..=s).map(|k| idx[&LatticePoint::new(k, s - k)]).collect(),
                })
                .collect(),
            j_max: s_max,
        };
        let v = gp_verify(
            &shift(LatticePoint::new(1, 0)),
            &shift(LatticePoint::new(0, 1)),
            &layout,
            1,
            1,
            1e-10,
            None,
            0,
        )
        .unwrap();
        assert!(!v.is_gp);
        assert!(v.defects["a_block_unitarity"] >= 1.0 - 1e-12);
        assert_eq!(v.failing_block, Some(LatticePoint::new(0, 0)));
    }

    #[test]
    fn rescale_examples() {
        let d = 8;
        let cell = PeriodCell::new(vec![0], 1).unwrap();
        let w = Window::new(0, 0, 0, 12, 3).unwrap();
        let sys = build_gp(&cell, 1, 1, &cyclic_permutation(d), &e0(d), w).unwrap();
        for l in 1..=2 {
            let r = period_rescale_check(&sys, l, 1e-12).unwrap();
            assert!(r.passes, "{r:?}");
        }
        assert!(period_rescale_check(&sys, 4, 1e-12).is_err());

        let mut broken = sys.clone();
        let target = broken.layout.blocks[3].indices.clone();
        for c in target {
            broken.v1.scale_column(c, c_(2.0));
        }
        assert!(!period_rescale_check(&broken, 2, 1e-12).unwrap().passes);
    }

    fn c_(x: f64) -> C64 {
        c(x)
    }

    #[test]
    fn random_instances_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let d = rng.random_range(1..=5);
            let m = rng.random_range(1..=3);
            let n = rng.random_range(1..=3);
            let (cell, u, e) = random_instance(&mut rng, d, m, n);
            let sys = build_gp(&cell, m, n, &u, &e, Window::new(0, 0, 0, 8, 3).unwrap()).unwrap();
            let v = sys.verify(1e-10).unwrap();
            assert!(v.is_gp, "{v:?}");
            assert!(sys.relation_defect() < 1e-12);
        }
    }

    #[test]
    fn example_e1_half_circle() {
        let d = 16;
        let gamma = ArcSet::half(d).unwrap();
        let w = Window::new(0, 0, 0, 6, 2).unwrap();
        let ex = example_e1_build(w, &gamma, d).unwrap();
        assert_eq!(ex.h_plus.dim(), 7 * d / 2);
        let v = ex.system.verify(1e-10).unwrap();
        assert!(v.is_gp, "{v:?}");
        assert!(period_rescale_check(&ex.system, 2, 1e-10).unwrap().power_defect < 1e-12);
    }

    #[test]
    fn example_e1_empty_is_degenerate() {
        let ex = example_e1_build(Window::new(0, 0, 0, 3, 1).unwrap(), &ArcSet::empty(8).unwrap(), 8).unwrap();
        assert!(ex.degenerate);
        assert_eq!(ex.h_plus.dim(), 0);
    }
}
