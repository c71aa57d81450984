//! Raster geometry on `𝕋` and `𝕋²`: arc sets at resolution `d`, torus sets at
//! resolution `M`, the characters `ω(w, z) = (w^m z̄^n)^l`, their preimages
//! ("stripes"), and the builders and checkers that sit on top of them.
//!
//! Grid point `k` of `𝕋` is `exp(2πik/d)`; `(a, b)` of `𝕋²` is
//! `(exp(2πia/M), exp(2πib/M))`. Resolutions are aligned when `d | M`, and
//! `ω` sends `(a, b)` to the arc bin `⌊(l(ma - nb) mod M) · d / M⌋`.

use std::fmt;

use num_integer::gcd;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, Window};
use crate::linalg::{cyclic_permutation, random_unit_vector, spectral_norm, CMat};
use crate::numeric_model::{CoeffVector, Geometry, NumericSubspace};
use crate::C64;

/// Subset of the `d` grid points of `𝕋`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcSet {
    bits: Vec<bool>,
}

impl ArcSet {
    pub fn empty(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("resolution d must be positive".into()));
        }
        Ok(Self { bits: vec![false; d] })
    }

    pub fn full(d: usize) -> Result<Self> {
        Ok(Self::empty(d)?.complement())
    }

    /// Upper half circle: angles in `[0, π)`, i.e. `k < d/2`.
    pub fn half(d: usize) -> Result<Self> {
        let mut s = Self::empty(d)?;
        for k in 0..d / 2 {
            s.bits[k] = true;
        }
        Ok(s)
    }

    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter("resolution d must be positive".into()));
        }
        Ok(Self { bits })
    }

    /// Union of inclusive runs `[start, end]`; `start > end` wraps through 0.
    pub fn from_runs(d: usize, runs: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::empty(d)?;
        for &(a, b) in runs {
            if a >= d || b >= d {
                return Err(Error::InvalidParameter(format!("run [{a}, {b}] outside 0..{d}")));
            }
            let len = (b + d - a) % d + 1;
            for k in 0..len {
                s.bits[(a + k) % d] = true;
            }
        }
        Ok(s)
    }

    /// Maximal inclusive runs, in increasing start order; a run crossing 0 is
    /// reported once with `start > end`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let d = self.bits.len();
        if self.bits.iter().all(|&b| b) {
            return vec![(0, d - 1)];
        }
        let mut out = Vec::new();
        let mut k = 0;
        while k < d {
            if self.bits[k] && (k == 0 || !self.bits[k - 1]) {
                let mut e = k;
                while e + 1 < d && self.bits[e + 1] {
                    e += 1;
                }
                out.push((k, e));
                k = e + 1;
            } else {
                k += 1;
            }
        }
        if out.len() > 1 && out[0].0 == 0 && out.last().unwrap().1 == d - 1 {
            let first = out.remove(0);
            out.last_mut().unwrap().1 = first.1;
        }
        out
    }

    pub fn resolution(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.bits[k % self.bits.len()]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 / self.resolution() as f64
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.resolution()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.resolution() != other.resolution() {
            return Err(Error::ResolutionMismatch(format!(
                "arc sets at d = {} and d = {}",
                self.resolution(),
                other.resolution()
            )));
        }
        Ok(Self {
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && b)
    }

    /// The same set at a finer resolution `big` (`d | big`): grid point `k`
    /// belongs iff its bin `⌊k d / big⌋` does.
    pub fn refine(&self, big: usize) -> Result<Self> {
        let d = self.resolution();
        check_aligned(big, d)?;
        Ok(Self {
            bits: (0..big).map(|k| self.bits[k * d / big]).collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ArcWire {
    d: usize,
    runs: Vec<(usize, usize)>,
}

impl Serialize for ArcSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ArcWire {
            d: self.resolution(),
            runs: self.runs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let w = ArcWire::deserialize(de)?;
        ArcSet::from_runs(w.d, &w.runs).map_err(serde::de::Error::custom)
    }
}

fn check_aligned(big: usize, d: usize) -> Result<()> {
    if big == 0 || d == 0 || big % d != 0 {
        return Err(Error::ResolutionMismatch(format!("d = {d} does not divide M = {big}")));
    }
    Ok(())
}

/// Subset of the `M × M` grid of `𝕋²`, stored row-major by `b` (the `z`
/// index): bit `(a, b)` is at `b · M + a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusGridSet {
    res: usize,
    bits: Vec<bool>,
}

impl TorusGridSet {
    pub fn empty(res: usize) -> Result<Self> {
        if res == 0 {
            return Err(Error::InvalidParameter("resolution M must be positive".into()));
        }
        Ok(Self {
            res,
            bits: vec![false; res * res],
        })
    }

    pub fn full(res: usize) -> Result<Self> {
        Ok(Self::empty(res)?.complement())
    }

    pub fn from_fn(res: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut s = Self::empty(res)?;
        for b in 0..res {
            for a in 0..res {
                s.bits[b * res + a] = f(a, b);
            }
        }
        Ok(s)
    }

    pub fn resolution(&self) -> usize {
        self.res
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[b * self.res + a]
    }

    pub fn set(&mut self, a: usize, b: usize, v: bool) {
        self.bits[b * self.res + a] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 / (self.res * self.res) as f64
    }

    pub fn complement(&self) -> Self {
        Self {
            res: self.res,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.res != other.res {
            return Err(Error::ResolutionMismatch(format!(
                "torus sets at M = {} and M = {}",
                self.res, other.res
            )));
        }
        Ok(Self {
            res: self.res,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && b)
    }

    /// Point counts of each row (fixed `b`) and each column (fixed `a`).
    pub fn line_counts(&self) -> (Vec<usize>, Vec<usize>) {
        let mut rows = vec![0; self.res];
        let mut cols = vec![0; self.res];
        for b in 0..self.res {
            for a in 0..self.res {
                if self.contains(a, b) {
                    rows[b] += 1;
                    cols[a] += 1;
                }
            }
        }
        (rows, cols)
    }

    /// Pixels for a PGM raster: `a` to the right, `b` upwards.
    pub fn raster(&self) -> crate::io::Raster {
        let m = self.res;
        crate::io::Raster::from_fn(m, m, |x, y| self.contains(x, m - 1 - y))
    }
}

/// `ω(w, z) = (w^m z̄^n)^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaMap {
    pub m: u64,
    pub n: u64,
    pub l: u64,
}

impl OmegaMap {
    pub fn new(m: u64, n: u64, l: u64) -> Result<Self> {
        if m == 0 || n == 0 || l == 0 {
            return Err(Error::InvalidParameter(format!(
                "omega map needs m, n, l ≥ 1 (got {m}, {n}, {l})"
            )));
        }
        Ok(Self { m, n, l })
    }
}

impl fmt::Display for OmegaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(w^{} z̄^{})^{}", self.m, self.n, self.l)
    }
}

/// Arc bin of `ω(a, b)` at resolution `d`.
pub fn omega_apply(o: OmegaMap, a: usize, b: usize, big: usize, d: usize) -> Result<usize> {
    check_aligned(big, d)?;
    let mm = big as i128;
    let v = (o.l as i128 * (o.m as i128 * a as i128 - o.n as i128 * b as i128)).rem_euclid(mm);
    Ok((v * d as i128 / mm) as usize)
}

/// `ω^{-1}(γ)` on the `M × M` grid.
pub fn preimage(o: OmegaMap, gamma: &ArcSet, big: usize) -> Result<TorusGridSet> {
    let d = gamma.resolution();
    check_aligned(big, d)?;
    // (a, b) ↦ l(ma - nb) mod M, reduced once per row
    let (m, n, l) = ((o.m as usize) % big, (o.n as usize) % big, (o.l as usize) % big);
    let mut s = TorusGridSet::empty(big)?;
    for b in 0..big {
        let base = (big - (n * b) % big) % big;
        for a in 0..big {
            let v = (l * ((m * a + base) % big)) % big;
            s.bits[b * big + a] = gamma.bits[v * d / big];
        }
    }
    Ok(s)
}

/// Whether `measure(ω^{-1}(γ)) = measure(γ)` holds for every arc set at
/// these resolutions: the values `l(ma - nb) mod M` form the subgroup
/// generated by `g = gcd(l·gcd(m, n), M)`, each hit equally often, so every
/// bin of width `M/d` is hit equally iff `g | M/d`.
pub fn measure_preserving(o: OmegaMap, big: usize, d: usize) -> Result<bool> {
    check_aligned(big, d)?;
    let g = gcd(o.l * gcd(o.m, o.n), big as u64);
    Ok((big / d) as u64 % g == 0)
}

/// `measure(A ∩ B) ≤ tol`, together with that measure.
pub fn almost_disjoint(a: &TorusGridSet, b: &TorusGridSet, tol: f64) -> Result<(bool, f64)> {
    let meas = a.intersection(b)?.measure();
    Ok((meas <= tol, meas))
}

/// `exp(-2πi k r/d)/√d` placed at `at(k)`, `k = 0..d`: the coefficient vector
/// of the normalized indicator of grid point `r`.
pub fn fourier_basis_vector(d: usize, r: usize, at: impl Fn(i64) -> LatticePoint) -> CoeffVector {
    let s = 1.0 / (d as f64).sqrt();
    CoeffVector::from_entries((0..d).map(|k| {
        let ang = -std::f64::consts::TAU * ((k * r) % d) as f64 / d as f64;
        (at(k as i64), C64::from_polar(s, ang))
    }))
}

#[derive(Debug, Clone)]
pub struct UsSubspace {
    pub subspace: NumericSubspace,
    /// Grid points of `δ` at resolution `M`.
    pub rank: usize,
    pub degenerate: bool,
}

/// Coefficient model of `w^a H²(𝕋) ⊗ χ_δ L²(𝕋)`: columns `a ..= i_max` of
/// the window, each carrying the range of `χ_δ` on `ℂ^M` (rows `j_min ..
/// j_min + M`, with `z` acting cyclically). The basis is `e_i ⊗ u_r` for
/// `r ∈ δ` refined to resolution `M`.
pub fn build_us_subspace(a: i64, delta: &ArcSet, window: Window, big: usize) -> Result<UsSubspace> {
    let fine = delta.refine(big)?;
    if a < window.i_min || a > window.i_max {
        return Err(Error::InvalidWindow(format!("column {a} outside {window}")));
    }
    let j0 = window.j_min;
    let domain = Window::new(window.i_min, window.i_max, j0, j0 + big as i64 - 1, window.margin)?;
    let mut basis = Vec::new();
    for i in a..=window.i_max {
        for r in fine.members() {
            basis.push(fourier_basis_vector(big, r, |k| LatticePoint::new(i, j0 + k)));
        }
    }
    let subspace = NumericSubspace::from_orthonormal(basis, domain, 1e-12)?.with_geometry(Geometry::CyclicZ {
        j0,
        period: big as i64,
    });
    Ok(UsSubspace {
        subspace,
        rank: fine.count(),
        degenerate: fine.is_empty(),
    })
}

/// One stripe system of case 4: `Δ = ω^{-1}(γ)` with `ω = (w^m z̄^n)^l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripeSystem {
    pub m: u64,
    pub n: u64,
    pub l: u64,
    pub gamma: ArcSet,
}

impl StripeSystem {
    pub fn omega(&self) -> Result<OmegaMap> {
        OmegaMap::new(self.m, self.n, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overlap {
    pub systems: (usize, usize),
    pub measure: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case4Report {
    pub pass: bool,
    /// Pairs `(i, k)` whose stripe sets meet in more than `tol`.
    pub overlaps: Vec<Overlap>,
    pub theta_overlap: f64,
    pub ratio_consistent: bool,
    pub measures: Vec<f64>,
    pub violations: Vec<String>,
}

/// Case-4 conditions for `Θ` and stripe systems `(m_i, n_i, l_i, γ_i)`:
/// (a) the `Δ_i` are pairwise almost disjoint, (b) `Θ` misses `⋃ Δ_i` up to
/// `tol`, (c) every `n_i / m_i` is the same ratio.
pub fn mainl_case4_check(theta: &TorusGridSet, systems: &[StripeSystem], tol: f64) -> Result<Case4Report> {
    let big = theta.resolution();
    let deltas = systems
        .iter()
        .map(|s| preimage(s.omega()?, &s.gamma, big))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    let mut overlaps = Vec::new();
    for i in 0..deltas.len() {
        for k in i + 1..deltas.len() {
            let inter = deltas[i].intersection(&deltas[k])?;
            let (meas, points) = (inter.measure(), inter.count());
            if meas > tol {
                violations.push(format!(
                    "(a) stripe sets {i} and {k} overlap in measure {meas} ({points} grid points)"
                ));
                overlaps.push(Overlap {
                    systems: (i, k),
                    measure: meas,
                    points,
                });
            }
        }
    }
    let mut union = TorusGridSet::empty(big)?;
    for d in &deltas {
        union = union.union(d)?;
    }
    let theta_overlap = theta.intersection(&union)?.measure();
    if theta_overlap > tol {
        violations.push(format!("(b) theta meets the stripe union in measure {theta_overlap}"));
    }
    let ratio_consistent = systems
        .windows(2)
        .all(|w| w[0].n * w[1].m == w[1].n * w[0].m);
    if !ratio_consistent {
        let ratios: Vec<String> = systems.iter().map(|s| format!("{}/{}", s.n, s.m)).collect();
        violations.push(format!("(c) ratios n/m differ: {}", ratios.join(", ")));
    }
    Ok(Case4Report {
        pass: violations.is_empty(),
        overlaps,
        theta_overlap,
        ratio_consistent,
        measures: deltas.iter().map(|d| d.measure()).collect(),
        violations,
    })
}

/// Multiplication by `χ_δ` seen on Fourier coefficients, with its checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelsonProjector {
    pub resolution: usize,
    /// `1` for an arc set, `2` for a torus set.
    pub dims: usize,
    pub rank: usize,
    pub idempotent_defect: f64,
    pub self_adjoint_defect: f64,
    /// Commutator with the coordinate shift(s).
    pub shift_defect: f64,
}

fn fft_inplace(buf: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

/// Circulant `P = F^* diag(χ_δ) F` on `ℂ^d`, checked densely against the
/// cyclic shift.
pub fn helson_reducing(delta: &ArcSet) -> HelsonProjector {
    let d = delta.resolution();
    // first column: c_j = (1/d) Σ_r χ(r) e^{-2πi jr/d}
    let mut c: Vec<C64> = delta.bits.iter().map(|&b| C64::new(if b { 1.0 } else { 0.0 }, 0.0)).collect();
    fft_inplace(&mut c, false);
    let p = CMat::from_fn(d, d, |j, k| c[(j + d - k) % d] / d as f64);
    let shift = cyclic_permutation(d);
    HelsonProjector {
        resolution: d,
        dims: 1,
        rank: delta.count(),
        idempotent_defect: spectral_norm(&(&p * &p - &p)),
        self_adjoint_defect: spectral_norm(&(&p - p.adjoint())),
        shift_defect: spectral_norm(&(&p * &shift - &shift * &p)),
    }
}

/// Torus version, applied through 2-D FFTs and probed with seeded random
/// vectors (the dense `M² × M²` matrix is never formed).
pub fn helson_reducing_torus(delta: &TorusGridSet, probes: usize, seed: u64) -> HelsonProjector {
    let m = delta.resolution();
    let fft2 = |x: &mut Vec<C64>, inverse: bool| {
        for row in x.chunks_mut(m) {
            fft_inplace(row, inverse);
        }
        let mut col = vec![C64::default(); m];
        for a in 0..m {
            for b in 0..m {
                col[b] = x[b * m + a];
            }
            fft_inplace(&mut col, inverse);
            for b in 0..m {
                x[b * m + a] = col[b];
            }
        }
    };
    let apply = |x: &[C64]| {
        let mut y = x.to_vec();
        fft2(&mut y, false);
        for (v, &keep) in y.iter_mut().zip(&delta.bits) {
            *v = if keep { *v / (m * m) as f64 } else { C64::default() };
        }
        fft2(&mut y, true);
        y
    };
    let shift_a = |x: &[C64]| {
        let mut y = vec![C64::default(); x.len()];
        for b in 0..m {
            for a in 0..m {
                y[b * m + (a + 1) % m] = x[b * m + a];
            }
        }
        y
    };
    let shift_b = |x: &[C64]| {
        let mut y = vec![C64::default(); x.len()];
        for b in 0..m {
            for a in 0..m {
                y[((b + 1) % m) * m + a] = x[b * m + a];
            }
        }
        y
    };
    let dist = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let dot = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<C64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut idem, mut sa, mut sh) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..probes.max(1) {
        let x: Vec<C64> = random_unit_vector(m * m, &mut rng).iter().copied().collect();
        let y: Vec<C64> = random_unit_vector(m * m, &mut rng).iter().copied().collect();
        let px = apply(&x);
        idem = idem.max(dist(&apply(&px), &px));
        sa = sa.max((dot(&y, &px) - dot(&apply(&y), &x)).norm());
        sh = sh.max(dist(&apply(&shift_a(&x)), &shift_a(&px)));
        sh = sh.max(dist(&apply(&shift_b(&x)), &shift_b(&px)));
    }
    HelsonProjector {
        resolution: m,
        dims: 2,
        rank: delta.count(),
        idempotent_defect: idem,
        self_adjoint_defect: sa,
        shift_defect: sh,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric_model::{compress, isometry_defect, unitary_defect, ShiftOp};

    #[test]
    fn runs_roundtrip_and_wrap() {
        let s = ArcSet::from_runs(10, &[(8, 1), (4, 5)]).unwrap();
        assert_eq!(s.members().collect::<Vec<_>>(), vec![0, 1, 4, 5, 8, 9]);
        assert_eq!(s.runs(), vec![(4, 5), (8, 1)]);
        assert_eq!(ArcSet::from_runs(10, &s.runs()).unwrap(), s);
        assert_eq!(ArcSet::full(7).unwrap().runs(), vec![(0, 6)]);
        assert!(ArcSet::empty(7).unwrap().runs().is_empty());
        assert!(ArcSet::from_runs(4, &[(0, 4)]).is_err());
        let json = r#"{"d":360,"runs":[[0,179]]}"#;
        let h: ArcSet = serde_json::from_str(json).unwrap();
        assert_eq!(h, ArcSet::half(360).unwrap());
    }

    #[test]
    fn omega_examples() {
        let o = OmegaMap::new(1, 1, 1).unwrap();
        for a in 0..12 {
            assert_eq!(omega_apply(o, a, a, 12, 6).unwrap(), 0);
        }
        let o = OmegaMap::new(5, 3, 1).unwrap();
        for b in 0..360 {
            let want = ((-3 * b as i64).rem_euclid(360) * 60 / 360) as usize;
            assert_eq!(omega_apply(o, 0, b, 360, 60).unwrap(), want);
        }
        assert!(omega_apply(o, 0, 0, 360, 7).is_err());
        assert!(OmegaMap::new(1, 0, 1).is_err());
    }

    #[test]
    fn preimage_matches_pointwise_map() {
        let o = OmegaMap::new(4, 6, 3).unwrap();
        let g = ArcSet::from_runs(12, &[(2, 4), (10, 0)]).unwrap();
        let p = preimage(o, &g, 36).unwrap();
        for a in 0..36 {
            for b in 0..36 {
                assert_eq!(p.contains(a, b), g.contains(omega_apply(o, a, b, 36, 12).unwrap()));
            }
        }
        assert_eq!(preimage(o, &ArcSet::full(12).unwrap(), 36).unwrap().count(), 36 * 36);
    }

    #[test]
    fn single_point_fiber_counts() {
        let o = OmegaMap::new(5, 3, 1).unwrap();
        let p = preimage(o, &ArcSet::from_runs(360, &[(7, 7)]).unwrap(), 360).unwrap();
        assert_eq!(p.count(), 360);
        let (rows, cols) = p.line_counts();
        assert!(rows.iter().all(|&r| r == 0 || r == 5));
        assert!(cols.iter().all(|&c| c == 0 || c == 3));
    }

    #[test]
    fn measure_preservation_condition() {
        let o = OmegaMap::new(2, 4, 1).unwrap();
        assert!(!measure_preserving(o, 12, 12).unwrap());
        let g = ArcSet::from_runs(12, &[(1, 1)]).unwrap();
        assert_eq!(preimage(o, &g, 12).unwrap().count(), 0);
        assert!(measure_preserving(o, 12, 6).unwrap());
    }

    #[test]
    fn us_subspace_shapes() {
        let w = Window::new(0, 6, 0, 0, 2).unwrap();
        let us = build_us_subspace(2, &ArcSet::half(16).unwrap(), w, 16).unwrap();
        assert_eq!(us.rank, 8);
        assert_eq!(us.subspace.dim(), 5 * 8);
        let sw = compress(ShiftOp::W, &us.subspace).unwrap();
        let sz = compress(ShiftOp::Z, &us.subspace).unwrap();
        assert!(isometry_defect(&sw) < 1e-12);
        assert!(unitary_defect(&sz) < 1e-12);
        let empty = build_us_subspace(0, &ArcSet::empty(16).unwrap(), w, 16).unwrap();
        assert!(empty.degenerate);
        assert_eq!(empty.subspace.dim(), 0);
    }

    #[test]
    fn helson_examples() {
        let h = helson_reducing(&ArcSet::half(64).unwrap());
        assert_eq!(h.rank, 32);
        assert!(h.idempotent_defect < 1e-12 && h.self_adjoint_defect < 1e-12 && h.shift_defect < 1e-12);
        let f = helson_reducing(&ArcSet::full(8).unwrap());
        assert!(f.idempotent_defect < 1e-14);
        let t = TorusGridSet::from_fn(16, |a, b| (a + 2 * b) % 5 == 0).unwrap();
        let h2 = helson_reducing_torus(&t, 3, 0);
        assert!(h2.idempotent_defect < 1e-12 && h2.self_adjoint_defect < 1e-12 && h2.shift_defect < 1e-12);
    }

    #[test]
    fn case4_examples() {
        let sys = |m, n, l, runs: &[(usize, usize)]| StripeSystem {
            m,
            n,
            l,
            gamma: ArcSet::from_runs(36, runs).unwrap(),
        };
        let s1 = sys(1, 1, 1, &[(0, 8)]);
        let d1 = preimage(s1.omega().unwrap(), &s1.gamma, 36).unwrap();
        let r = mainl_case4_check(&d1.complement(), &[s1.clone()], 0.0).unwrap();
        assert!(r.pass, "{r:?}");

        let s2 = sys(1, 1, 1, &[(5, 12)]);
        let r = mainl_case4_check(&TorusGridSet::empty(36).unwrap(), &[s1.clone(), s2], 0.0).unwrap();
        assert!(!r.pass);
        assert_eq!(r.overlaps.len(), 1);
        assert_eq!(r.overlaps[0].points, 4 * 36);

        let s3 = sys(1, 2, 1, &[(20, 30)]);
        let r = mainl_case4_check(&TorusGridSet::empty(36).unwrap(), &[s1, s3], 0.0).unwrap();
        assert!(!r.ratio_consistent);
    }
}
