//! Sparse complex matrices and the dense helpers the numeric layers share.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Dimension above which a connected block is normed by power iteration
/// instead of a dense SVD.
const DENSE_SVD_LIMIT: usize = 2500;

/// Column-stored sparse matrix; each column keeps its entries sorted by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            cols: (0..n).map(|k| vec![(k, C64::new(1.0, 0.0))]).collect(),
        }
    }

    /// Columns given as `(row, value)` lists in any order; duplicates add up
    /// and exact zeros are dropped.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, C64)>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|c| {
                let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
                for (r, v) in c {
                    assert!(r < nrows, "row {r} out of range {nrows}");
                    *acc.entry(r).or_default() += v;
                }
                acc.into_iter().filter(|(_, v)| *v != C64::default()).collect()
            })
            .collect();
        Self { nrows, cols }
    }

    pub fn from_dense(m: &CMat) -> Self {
        let cols = (0..m.ncols())
            .map(|c| {
                (0..m.nrows())
                    .filter(|&r| m[(r, c)] != C64::default())
                    .map(|r| (r, m[(r, c)]))
                    .collect()
            })
            .collect();
        Self {
            nrows: m.nrows(),
            cols,
        }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn col(&self, c: usize) -> &[(usize, C64)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map_or(C64::default(), |k| self.cols[c][k].1)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols());
        let mut y = vec![C64::default(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if x[c] == C64::default() {
                continue;
            }
            for &(r, v) in col {
                y[r] += v * x[c];
            }
        }
        y
    }

    pub fn adjoint(&self) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                cols[r].push((c, v.conj()));
            }
        }
        SparseMatrix {
            nrows: self.ncols(),
            cols,
        }
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "inner dimensions differ");
        let mut scratch = vec![C64::default(); self.nrows];
        let mut touched: Vec<usize> = Vec::new();
        let cols = rhs
            .cols
            .iter()
            .map(|bcol| {
                for &(k, b) in bcol {
                    for &(r, a) in &self.cols[k] {
                        if scratch[r] == C64::default() {
                            touched.push(r);
                        }
                        scratch[r] += a * b;
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let out = touched
                    .iter()
                    .filter(|&&r| scratch[r] != C64::default())
                    .map(|&r| (r, scratch[r]))
                    .collect();
                for &r in &touched {
                    scratch[r] = C64::default();
                }
                touched.clear();
                out
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            cols,
        }
    }

    pub fn pow(&self, k: usize) -> SparseMatrix {
        assert_eq!(self.nrows, self.ncols(), "power of a non-square matrix");
        (0..k).fold(SparseMatrix::identity(self.nrows), |acc, _| self.mul(&acc))
    }

    /// `self + alpha * rhs`.
    pub fn add_scaled(&self, rhs: &SparseMatrix, alpha: C64) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols()), (rhs.nrows, rhs.ncols()));
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, C64> = a.iter().copied().collect();
                for &(r, v) in b {
                    *acc.entry(r).or_default() += alpha * v;
                }
                acc.into_iter().filter(|(_, v)| *v != C64::default()).collect()
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            cols,
        }
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(rhs, C64::new(-1.0, 0.0))
    }

    /// Zero every column whose mask entry is false.
    pub fn mask_columns(&self, keep: &[bool]) -> SparseMatrix {
        assert_eq!(keep.len(), self.ncols());
        SparseMatrix {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .zip(keep)
                .map(|(c, &k)| if k { c.clone() } else { Vec::new() })
                .collect(),
        }
    }

    pub fn scale_column(&mut self, c: usize, s: C64) {
        for e in &mut self.cols[c] {
            e.1 *= s;
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.cols
            .iter()
            .flatten()
            .map(|e| e.1.norm())
            .fold(0.0, f64::max)
    }

    /// Spectral norm. The matrix is split into connected blocks of its
    /// row/column incidence graph; each block is normed separately, by dense
    /// SVD when small enough.
    pub fn op_norm(&self) -> f64 {
        let nr = self.nrows;
        let mut uf = UnionFind::new(nr + self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, _) in col {
                uf.union(r, nr + c);
            }
        }
        let mut blocks: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (c, col) in self.cols.iter().enumerate() {
            if !col.is_empty() {
                blocks.entry(uf.find(nr + c)).or_default().1.push(c);
            }
        }
        for r in 0..nr {
            let root = uf.find(r);
            if let Some(b) = blocks.get_mut(&root) {
                b.0.push(r);
            }
        }
        blocks
            .values()
            .map(|(rows, cols)| self.block_norm(rows, cols))
            .fold(0.0, f64::max)
    }

    fn block_norm(&self, rows: &[usize], cols: &[usize]) -> f64 {
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        if rows.len().min(cols.len()) <= DENSE_SVD_LIMIT {
            let mut m = CMat::zeros(rows.len(), cols.len());
            for (k, &c) in cols.iter().enumerate() {
                for &(r, v) in &self.cols[c] {
                    m[(pos[&r], k)] = v;
                }
            }
            return spectral_norm(&m);
        }
        let sub = SparseMatrix {
            nrows: rows.len(),
            cols: cols
                .iter()
                .map(|&c| self.cols[c].iter().map(|&(r, v)| (pos[&r], v)).collect())
                .collect(),
        };
        sub.power_norm(2000, 1e-13)
    }

    /// Power iteration on `A^* A` from a fixed start vector.
    fn power_norm(&self, iters: usize, rel_tol: f64) -> f64 {
        let n = self.ncols();
        let adj = self.adjoint();
        let mut x: Vec<C64> = (0..n)
            .map(|k| C64::new(1.0 + (k % 7) as f64 * 0.1, (k % 3) as f64 * 0.05))
            .collect();
        let mut est = 0.0;
        for _ in 0..iters {
            let nx = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if nx == 0.0 {
                return 0.0;
            }
            x.iter_mut().for_each(|v| *v /= nx);
            let y = adj.apply(&self.apply(&x));
            let next = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().sqrt();
            let done = (next - est).abs() <= rel_tol * next;
            est = next;
            x = y;
            if done {
                break;
            }
        }
        est
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).max()
}

/// nalgebra's implicit-shift SVD at its default deflation threshold can
/// return a wrong factorization for some rank-deficient complex matrices
/// (residuals near 1e-2 were observed), so every result is checked and the
/// computation retried on the adjoint or on the `R` factor of a QR
/// decomposition when the check fails.
const SVD_CHECK: f64 = 1e-11;

fn svd_attempts(a: &CMat) -> [Box<dyn Fn() -> Option<(CMat, DVector<f64>, CMat)> + '_>; 3] {
    let eps = f64::EPSILON;
    [
        Box::new(move || {
            let s = a.clone().try_svd(true, true, eps, 0)?;
            Some((s.u?, s.singular_values, s.v_t?))
        }),
        Box::new(move || {
            let s = a.adjoint().try_svd(true, true, eps, 0)?;
            Some((s.v_t?.adjoint(), s.singular_values, s.u?.adjoint()))
        }),
        Box::new(move || {
            if a.nrows() < a.ncols() {
                return None;
            }
            let qr = a.clone().qr();
            let s = qr.r().try_svd(true, true, eps, 0)?;
            Some((qr.q() * s.u?, s.singular_values, s.v_t?))
        }),
    ]
}

/// `(U, σ)` with a reconstruction check on `U Σ V^*`.
pub fn checked_svd(a: &CMat) -> (CMat, DVector<f64>) {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut best: Option<(f64, CMat, DVector<f64>)> = None;
    for attempt in svd_attempts(a) {
        let Some((u, s, vt)) = attempt() else { continue };
        let sig = CMat::from_diagonal(&s.map(|x| C64::new(x, 0.0)));
        let err = (&u * sig * &vt - a).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err <= SVD_CHECK * scale {
            return (u, s);
        }
        if best.as_ref().is_none_or(|b| err < b.0) {
            best = Some((err, u, s));
        }
    }
    let (_, u, s) = best.expect("at least one SVD attempt succeeds");
    (u, s)
}

/// Singular values, validated against `Σσ² = ‖A‖_F²`.
pub fn singular_values(a: &CMat) -> DVector<f64> {
    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if let Some(s) = a.clone().try_svd(false, false, f64::EPSILON, 0) {
        let sum = s.singular_values.iter().map(|x| x * x).sum::<f64>();
        if (sum - frob).abs() <= SVD_CHECK * frob.max(f64::MIN_POSITIVE) {
            return s.singular_values;
        }
    }
    checked_svd(a).1
}

/// Orthonormal basis of a column span with an explicit rank decision.
#[derive(Debug, Clone)]
pub struct RankDecision {
    pub q: CMat,
    pub rank: usize,
    /// A singular value fell within a factor of ten of the threshold.
    pub ambiguous: bool,
}

/// Keep left singular vectors with `σ > tol · scale`, where `scale` defaults to
/// the largest singular value.
pub fn column_span(a: &CMat, tol: f64, scale: Option<f64>) -> RankDecision {
    if a.is_empty() {
        return RankDecision {
            q: CMat::zeros(a.nrows(), 0),
            rank: 0,
            ambiguous: false,
        };
    }
    let (u, s) = checked_svd(a);
    let scale = scale.unwrap_or_else(|| s.max());
    let thr = tol * scale;
    let keep: Vec<usize> = (0..s.len()).filter(|&k| s[k] > thr && s[k] > 0.0).collect();
    let ambiguous = thr > 0.0 && s.iter().any(|&v| v > thr / 10.0 && v < thr * 10.0);
    RankDecision {
        q: u.select_columns(&keep),
        rank: keep.len(),
        ambiguous,
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// residual falls to `tol` times the largest input norm are dropped.
pub fn gram_schmidt(vs: &[CVec], tol: f64) -> Vec<CVec> {
    let scale = vs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut out: Vec<CVec> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dotc(&r);
                r.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let n = r.norm();
        if n > tol * scale && n > 0.0 {
            out.push(r / C64::new(n, 0.0));
        }
    }
    out
}

/// `‖A^* A - I‖` for a dense matrix.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.ncols();
    spectral_norm(&(u.adjoint() * u - CMat::identity(n, n)))
}

/// Rank of `[U^k e : |k| < d]` with negative powers taken through `U^*`, and
/// threshold `tol · σ_max`. For a unitary `U` this is the star-cyclic rank.
/// One-sided powers form a Vandermonde matrix that loses numerical rank
/// once the spectrum crowds into an arc; the two-sided window does not.
pub fn krylov_rank(u: &CMat, e: &CVec, tol: f64) -> usize {
    let d = u.nrows();
    if d == 0 {
        return 0;
    }
    let ua = u.adjoint();
    let mut k = CMat::zeros(d, 2 * d - 1);
    k.set_column(d - 1, e);
    let (mut fwd, mut back) = (e.clone(), e.clone());
    for s in 1..d {
        fwd = u * fwd;
        back = &ua * back;
        k.set_column(d - 1 + s, &fwd);
        k.set_column(d - 1 - s, &back);
    }
    column_span(&k, tol, None).rank
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..d {
        let rc = r[(c, c)];
        let ph = if rc.norm() > 0.0 { rc / rc.norm() } else { C64::new(1.0, 0.0) };
        for rr in 0..d {
            q[(rr, c)] *= ph;
        }
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// `d × d` cyclic permutation `e_k ↦ e_{k+1 mod d}`.
pub fn cyclic_permutation(d: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    for k in 0..d {
        m[((k + 1) % d, k)] = C64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn sparse_matches_dense_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = CMat::from_fn(5, 4, |r, k| if (r + k) % 3 == 0 { c(rng.random()) } else { c(0.0) });
        let b = CMat::from_fn(4, 6, |r, k| if (r * k) % 2 == 1 { C64::new(0.5, -1.0) } else { c(0.0) });
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        assert!((sa.mul(&sb).to_dense() - &a * &b).norm() < 1e-14);
        assert!((sa.adjoint().to_dense() - a.adjoint()).norm() == 0.0);
    }

    #[test]
    fn block_norm_equals_dense_norm() {
        // two disconnected blocks with norms 3 and 2
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = c(3.0);
        m[(1, 2)] = c(1.0);
        m[(2, 2)] = c(1.0);
        m[(3, 3)] = c(-1.0);
        let s = SparseMatrix::from_dense(&m);
        assert!((s.op_norm() - spectral_norm(&m)).abs() < 1e-14);
        assert!((s.op_norm() - 3.0).abs() < 1e-14);
        assert_eq!(SparseMatrix::zeros(3, 3).op_norm(), 0.0);
    }

    #[test]
    fn power_iteration_agrees_with_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = CMat::from_fn(30, 30, |_, _| c(rng.random::<f64>() - 0.5));
        let s = SparseMatrix::from_dense(&m);
        assert!((s.power_norm(5000, 1e-15) - spectral_norm(&m)).abs() < 1e-8);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..8 {
            assert!(unitarity_defect(&random_unitary(d, &mut rng)) < 1e-13);
        }
    }

    #[test]
    fn krylov_rank_examples() {
        let e = CVec::from_vec(vec![c(1.0), c(1.0)]) / c(2f64.sqrt());
        assert_eq!(krylov_rank(&CMat::identity(2, 2), &e, 1e-10), 1);
        let flip = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(-1.0)]));
        assert_eq!(krylov_rank(&flip, &e, 1e-10), 2);
        let mut e0 = CVec::zeros(6);
        e0[0] = c(1.0);
        assert_eq!(krylov_rank(&cyclic_permutation(6), &e0, 1e-10), 6);
    }

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let a = CVec::from_vec(vec![c(1.0), c(0.0)]);
        let b = CVec::from_vec(vec![c(2.0), c(0.0)]);
        assert_eq!(gram_schmidt(&[a.clone(), b], 1e-12).len(), 1);
        let q = gram_schmidt(&[a, CVec::from_vec(vec![c(1.0), c(1.0)])], 1e-12);
        assert_eq!(q.len(), 2);
        assert!(q[0].dotc(&q[1]).norm() < 1e-15);
    }

    #[test]
    fn column_span_flags_near_threshold_values() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(5e-9)]));
        let r = column_span(&m, 1e-8, None);
        assert_eq!(r.rank, 1);
        assert!(r.ambiguous);
    }
}
