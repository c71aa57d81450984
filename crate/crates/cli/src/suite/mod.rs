//! The ten acceptance criteria, at two sizes.

pub mod oracle;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use staircase_core::exact_model::Soundness;
use staircase_core::genpowers::{cyclic_instance, example_e1_build, random_instance};
use staircase_core::io::Case4Wire;
use staircase_core::linalg::{CMat, CVec};
use staircase_core::numeric_model::{
    build_seto_example, compatibility_defect, doubly_commute_defect, isometry_defect, shift_detector,
    unitary_defect, CoeffVector, RangeProjector,
};
use staircase_core::torusgeo::{build_us_subspace, measure_preserving, mainl_case4_check, Case4Report};
use staircase_core::{
    build_gp, compress, gp_verify, period_rescale_check, preimage, recover_diagram, ArcSet, Diagram, DiagramClass,
    Direction, Error, LatticePoint, MonomialSubspace, NumericSubspace, OmegaMap, PeriodCell, ShiftOp, SimpleKind,
    Window, C64,
};

use oracle::{brute_preimage_count, seto_dense_defect, window_fits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Reduced sizes: windows up to 16, resolutions up to 32.
    Smoke,
    /// Full acceptance sizes.
    Desk,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub level: Level,
    pub seed: u64,
    pub rank_tol: f64,
    pub gp_tol: f64,
}

impl SuiteOptions {
    pub fn new(level: Level) -> Self {
        Self {
            level,
            seed: 0,
            rank_tol: staircase_core::numeric_model::DEFAULT_RANK_TOL,
            gp_tol: staircase_core::genpowers::DEFAULT_GP_TOL,
        }
    }

    fn desk(&self) -> bool {
        self.level == Level::Desk
    }

    fn rng(&self, id: u8) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub details: Value,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
    /// Stated time limit at desk size.
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl CriterionOutcome {
    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }
}

pub const CRITERIA: [(u8, &str, Option<u64>); 10] = [
    (1, "diagram classification", Some(5)),
    (2, "monomial compatibility", Some(10)),
    (3, "punctured quadrant witness", None),
    (4, "non-compatible invariant pair", Some(30)),
    (5, "Wold partition", None),
    (6, "generalized powers", Some(20)),
    (7, "anti-diagonal realization", None),
    (8, "stripe geometry", Some(5)),
    (9, "shift tensor builder", None),
    (10, "case-4 checker", None),
];

type Check = Result<(bool, Value, Vec<String>), Error>;

pub fn run_criterion(id: u8, o: &SuiteOptions) -> CriterionOutcome {
    let &(_, name, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .expect("criterion ids run from 1 to 10");
    let start = Instant::now();
    let res = match id {
        1 => classification(o),
        2 => monomial_compatibility(o),
        3 => punctured_quadrant(o),
        4 => seto(o),
        5 => wold(o),
        6 => generalized_powers(o),
        7 => anti_diagonal(o),
        8 => stripes(o),
        9 => shift_tensor(o),
        _ => case4(o),
    };
    let (pass, details, warnings) = res.unwrap_or_else(|e| (false, json!({ "error": e.to_string() }), Vec::new()));
    CriterionOutcome {
        id,
        name,
        pass,
        details,
        warnings,
        elapsed: start.elapsed(),
        budget: budget.map(Duration::from_secs),
    }
}

pub fn run_all(o: &SuiteOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0, o)).collect()
}

fn p(i: i64, j: i64) -> LatticePoint {
    LatticePoint::new(i, j)
}

/// `k` corners with distinct coordinates in `lo..hi`, `i` increasing and `j`
/// decreasing.
fn random_corners(rng: &mut impl Rng, k: usize, lo: i64, hi: i64) -> Vec<LatticePoint> {
    let span = (hi - lo) as usize;
    let mut is: Vec<i64> = sample(rng, span, k).into_iter().map(|x| lo + x as i64).collect();
    let mut js: Vec<i64> = sample(rng, span, k).into_iter().map(|x| lo + x as i64).collect();
    is.sort_unstable();
    js.sort_unstable_by(|a, b| b.cmp(a));
    is.into_iter().zip(js).map(|(i, j)| p(i, j)).collect()
}

fn classification(o: &SuiteOptions) -> Check {
    let (hi, corner_hi, cases) = if o.desk() { (30, 20, 200) } else { (16, 10, 50) };
    let max_period = (hi + 1) / 3;

    let qw = Window::square(-5, hi - 5, 0)?;
    let q = Diagram::quadrant();
    let want_q = DiagramClass::Simple {
        kind: SimpleKind::Quadrant,
    };
    let q_oracle = window_fits(&q.restrict_to_window(&qw), &qw, max_period).class();
    let quadrant_ok = q.classify() == want_q && q_oracle == want_q;

    let jw = Window::square(-hi / 2, hi / 2, 0)?;
    let j = Diagram::periodic(vec![0], 1)?;
    let want_j = DiagramClass::Periodic { m: 1, n: 1 };
    let j_oracle = window_fits(&j.restrict_to_window(&jw), &jw, max_period).class();
    let periodic_ok = j.classify() == want_j && j_oracle == want_j;

    let w = Window::square(0, hi, 0)?;
    let mut rng = o.rng(1);
    let mut mismatches = Vec::new();
    for case in 0..cases {
        let k = rng.random_range(2..=5);
        let corners = random_corners(&mut rng, k, 1, corner_hi + 1);
        let d = Diagram::finite_corner(corners.clone())?;
        let pts = d.restrict_to_window(&w);
        let lib = d.classify();
        let brute = window_fits(&pts, &w, max_period).class();
        let recovered = recover_diagram(&MonomialSubspace::from_points(pts, w)?)?.class();
        if lib != DiagramClass::Irregular || brute != lib || recovered != Some(lib) {
            mismatches.push(json!({
                "case": case,
                "corners": corners,
                "library": lib,
                "oracle": brute,
                "recovered": recovered,
            }));
        }
    }
    let pass = quadrant_ok && periodic_ok && mismatches.is_empty();
    Ok((
        pass,
        json!({
            "quadrant": { "library": q.classify(), "oracle": q_oracle },
            "example_periodic": { "library": j.classify(), "oracle": j_oracle },
            "random_cases": cases,
            "window": [0, hi, 0, hi],
            "oracle_max_period": max_period,
            "mismatches": mismatches,
        }),
        Vec::new(),
    ))
}

/// Rank of a partial permutation matrix: the number of distinct rows hit.
fn partial_permutation_rank(a: &staircase_core::linalg::SparseMatrix) -> usize {
    (0..a.ncols())
        .flat_map(|c| a.col(c).iter().filter(|e| e.1.norm() > 0.0).map(|e| e.0))
        .collect::<BTreeSet<_>>()
        .len()
}

fn monomial_compatibility(o: &SuiteOptions) -> Check {
    let (lo, hi, corner_hi, cases) = if o.desk() { (-3, 16, 10, 100) } else { (-2, 12, 8, 30) };
    let max_mn = 5;
    let w = Window::square(lo, hi, max_mn)?;
    let mut rng = o.rng(2);
    let mut exact_failures = Vec::new();
    let mut rank_mismatches = 0usize;
    let mut numeric_max = 0.0f64;
    let mut warnings = Vec::new();
    for case in 0..cases {
        let k = rng.random_range(1..=5);
        let corners = random_corners(&mut rng, k, 0, corner_hi);
        let twist = p(rng.random_range(-2..2), rng.random_range(-2..2));
        let m = MonomialSubspace::from_diagram(Diagram::finite_corner(corners)?, twist, w)?;
        for a in 1..=max_mn {
            for b in 1..=max_mn {
                if !m.range_projection_commutator(a, b)? {
                    exact_failures.push(json!({ "case": case, "m": a, "n": b }));
                }
            }
        }
        let num = NumericSubspace::from_monomial(&m);
        let sw = compress(ShiftOp::W, &num)?;
        let sz = compress(ShiftOp::Z, &num)?;
        let interior: Vec<bool> = sw.interior().iter().zip(sz.interior()).map(|(x, y)| *x && *y).collect();
        for s in [&sw, &sz] {
            let mut acc = s.matrix().mask_columns(&interior);
            for k in 1..=max_mn {
                if k > 1 {
                    acc = s.matrix().mul(&acc);
                }
                if RangeProjector::from_columns(&acc, o.rank_tol).rank() != partial_permutation_rank(&acc) {
                    rank_mismatches += 1;
                }
            }
        }
        let compat = compatibility_defect(&sw, &sz, max_mn, max_mn, o.rank_tol)?;
        numeric_max = numeric_max.max(compat.defect);
        warnings.extend(compat.warnings);
    }
    warnings.sort();
    warnings.dedup();
    let pass = exact_failures.is_empty() && rank_mismatches == 0 && numeric_max == 0.0;
    Ok((
        pass,
        json!({
            "cases": cases,
            "window": [lo, hi, lo, hi],
            "max_mn": max_mn,
            "exact_failures": exact_failures,
            "numeric_rank_mismatches": rank_mismatches,
            "numeric_defect_max": numeric_max,
        }),
        warnings,
    ))
}

fn punctured_quadrant(o: &SuiteOptions) -> Check {
    let hi = if o.desk() { 12 } else { 8 };
    let w = Window::square(0, hi, 1)?;
    let m = MonomialSubspace::from_diagram(Diagram::finite_corner(vec![p(0, 1), p(1, 0)])?, p(0, 0), w)?;
    let dc = m.doubly_commute_check()?;
    // (T_w|M)^* removes one power of w when the result stays in M.
    let adj_w = |q: LatticePoint| {
        let r = q - Direction::W.unit();
        m.member(r).then_some(r)
    };
    let zw = adj_w(p(1, 1));
    let then_z = adj_w(p(1, 0)).map(|r| r + Direction::Z.unit());
    let num = NumericSubspace::from_monomial(&m);
    let numeric = doubly_commute_defect(&compress(ShiftOp::Z, &num)?, &compress(ShiftOp::W, &num)?)?;
    let pass = !dc.holds
        && dc.witness == Some(p(1, 0))
        && dc.defect_vector == Some(p(0, 1))
        && dc.defect_norm == 1.0
        && dc.soundness == Soundness::Exact
        && zw == Some(p(0, 1))
        && then_z.is_none()
        && (numeric - 1.0).abs() < 1e-12;
    Ok((
        pass,
        json!({
            "double_commute": dc,
            "adj_w_of_zw": zw,
            "z_adj_w_of_w": then_z,
            "numeric_defect": numeric,
        }),
        Vec::new(),
    ))
}

fn seto(o: &SuiteOptions) -> Check {
    let n = if o.desk() { 40 } else { 16 };
    let cases = [(0.5, 1e-6), (0.25, 1e-6), (0.75, 1e-4)];
    let mut pass = true;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (lam, tol) in cases {
        let ex = build_seto_example(C64::new(lam, 0.0), Window::square(0, n, 2)?)?;
        let d = ex.evaluate()?;
        // at desk size the target is the untruncated value; the reduced
        // window is held to the truncated closed form instead
        let (target, tol) = if o.desk() { (lam, tol) } else { (d.closed_form, 1e-10) };
        let sw = compress(ShiftOp::W, &ex.subspace)?;
        let sz = compress(ShiftOp::Z, &ex.subspace)?;
        let compat = compatibility_defect(&sw, &sz, 2, 2, o.rank_tol)?;
        let ok = (d.defect - target).abs() < tol && compat.defect > 0.1;
        pass &= ok;
        warnings.extend(ex.warnings.iter().map(|w| format!("λ={lam}: {w}")));
        warnings.extend(compat.warnings.iter().map(|w| format!("λ={lam}: {w}")));
        rows.push(json!({
            "lambda": lam,
            "defect": d.defect,
            "target": target,
            "tol": tol,
            "closed_form": d.closed_form,
            "tail_bound": ex.tail_bound,
            "compatibility_defect": compat.defect,
            "argmax": compat.argmax,
            "pass": ok,
        }));
    }
    let small = 8;
    let dense = seto_dense_defect(0.5, small);
    let sparse = build_seto_example(C64::new(0.5, 0.0), Window::square(0, small, 1)?)?
        .evaluate()?
        .defect;
    let dense_ok = (dense - sparse).abs() < 1e-12;
    Ok((
        pass && dense_ok,
        json!({
            "n": n,
            "cases": rows,
            "dense_oracle": { "n": small, "dense": dense, "sparse": sparse, "pass": dense_ok },
        }),
        warnings,
    ))
}

fn wold(o: &SuiteOptions) -> Check {
    let r = if o.desk() { 8 } else { 5 };
    let w = Window::square(-r, r, 2)?;
    let build = |k| MonomialSubspace::from_diagram(Diagram::simple(k, p(0, 0)), p(0, 0), w);

    let q = build(SimpleKind::Quadrant)?;
    let qw = q.wold_single(Direction::W)?;
    let columns_ok = qw.layers.len() == (r + 1) as usize
        && qw
            .layers
            .iter()
            .enumerate()
            .all(|(k, layer)| *layer == (0..=r).map(|j| p(k as i64, j)).collect::<BTreeSet<_>>());
    let quadrant_ok = qw.unitary.is_empty() && columns_ok;

    let rows = build(SimpleKind::Rows)?;
    let rw = rows.wold_single(Direction::W)?;
    let rows_ok = &rw.unitary == rows.points() && rw.layers.is_empty();

    let mut parts = Vec::new();
    let mut fourfold_ok = true;
    for (kind, want) in [
        (SimpleKind::Quadrant, "ss"),
        (SimpleKind::Plane, "uu"),
        (SimpleKind::Rows, "us"),
        (SimpleKind::Cols, "su"),
    ] {
        let m = build(kind)?;
        let f = m.fourfold_decompose()?.wold_parts;
        let named = [("uu", &f.uu), ("us", &f.us), ("su", &f.su), ("ss", &f.ss)];
        let ok = named
            .iter()
            .all(|(name, set)| if *name == want { *set == m.points() } else { set.is_empty() });
        fourfold_ok &= ok;
        parts.push(json!({
            "kind": kind,
            "expected": want,
            "sizes": { "uu": f.uu.len(), "us": f.us.len(), "su": f.su.len(), "ss": f.ss.len() },
            "pass": ok,
        }));
    }
    Ok((
        quadrant_ok && rows_ok && fourfold_ok,
        json!({
            "window": [-r, r, -r, r],
            "quadrant_w": { "unitary": qw.unitary.len(), "layers": qw.layers.len(), "pass": quadrant_ok },
            "rows_w": { "unitary": rw.unitary.len(), "points": rows.len(), "pass": rows_ok },
            "fourfold": parts,
        }),
        Vec::new(),
    ))
}

fn generalized_powers(o: &SuiteOptions) -> Check {
    let cases = if o.desk() { 50 } else { 20 };
    let w = Window::new(0, 0, 0, 7, 3)?;
    let mut rng = o.rng(6);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..cases {
        let d = rng.random_range(1..=8);
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=3);
        let (cell, u, e) = random_instance(&mut rng, d, m, n);
        let v = build_gp(&cell, m, n, &u, &e, w)?.verify(o.gp_tol)?;
        let top = v.defects.values().copied().fold(0.0, f64::max);
        worst = worst.max(top);
        if !v.is_gp || top >= o.gp_tol {
            failures.push(json!({ "case": case, "d": d, "m": m, "n": n, "verdict": v }));
        }
    }

    // U = I on C^2 has no cyclic vector: build_gp refuses it, and the same
    // pair assembled by hand fails only the Krylov check.
    let e = CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]) / C64::new(2f64.sqrt(), 0.0);
    let cell = PeriodCell::new(vec![0], 1)?;
    let refused = build_gp(&cell, 1, 1, &CMat::identity(2, 2), &e, w);
    let refused_ok = matches!(refused, Err(Error::NotCyclic { rank: 1, dim: 2 }));
    let flip = CMat::from_diagonal(&CVec::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
    let mut hand = build_gp(&cell, 1, 1, &flip, &e, w)?;
    hand.v1 = hand.v2.clone();
    let hv = gp_verify(&hand.v1, &hand.v2, &hand.layout, 1, 1, o.gp_tol, Some(&e), o.seed)?;
    let control_ok = !hv.is_gp
        && hv.defects["b_krylov_deficit"] > o.gp_tol
        && hv
            .defects
            .iter()
            .filter(|(k, _)| !k.starts_with("b_"))
            .all(|(_, &x)| x < o.gp_tol);

    let (u, e6) = cyclic_instance(&mut rng, 6);
    let sys = build_gp(&cell, 1, 1, &u, &e6, Window::new(0, 0, 0, 8, 3)?)?;
    let mut rescale = Vec::new();
    let mut rescale_ok = true;
    for l in 1..=3 {
        let r = period_rescale_check(&sys, l, o.gp_tol)?;
        rescale_ok &= r.passes;
        rescale.push(r);
    }
    Ok((
        failures.is_empty() && refused_ok && control_ok && rescale_ok,
        json!({
            "instances": cases,
            "worst_defect": worst,
            "failures": failures,
            "noncyclic_build": refused.err().map(|e| e.to_string()),
            "noncyclic_verdict": hv,
            "rescale": rescale,
        }),
        Vec::new(),
    ))
}

fn anti_diagonal(o: &SuiteOptions) -> Check {
    let (d, s) = if o.desk() { (64, 6) } else { (32, 4) };
    let w = Window::new(0, 0, 0, s, 3)?;
    let half = example_e1_build(w, &ArcSet::half(d)?, d)?;
    let v = half.system.verify(o.gp_tol)?;
    let half_ok = v.is_gp && half.system.m == 1 && half.system.n == 1 && !half.degenerate;

    let full = example_e1_build(w, &ArcSet::full(d)?, d)?;
    let h = &full.h_plus;
    let domain = *h.window();
    let mut spanned = BTreeSet::new();
    let mut stray = 0usize;
    for q in domain.points() {
        let weight: f64 = h
            .coords_sparse(&CoeffVector::basis(q))
            .iter()
            .map(|(_, c)| c.norm_sqr())
            .sum();
        if weight > 1.0 - 1e-10 {
            spanned.insert(q);
        } else if weight > 1e-10 {
            stray += 1;
        }
    }
    let model: BTreeSet<LatticePoint> =
        MonomialSubspace::from_diagram(Diagram::periodic(vec![0], 1)?, p(0, 0), domain)?
            .points()
            .iter()
            .copied()
            .filter(|q| (0..=s).contains(&(q.i + q.j)))
            .collect();
    let full_ok = stray == 0 && spanned == model;
    Ok((
        half_ok && full_ok,
        json!({
            "d": d,
            "anti_diagonals": s + 1,
            "half": { "dim": half.system.dim(), "verdict": v, "pass": half_ok },
            "full": {
                "spanned": spanned.len(),
                "model": model.len(),
                "partial": stray,
                "pass": full_ok,
            },
        }),
        Vec::new(),
    ))
}

fn random_arc(rng: &mut impl Rng, d: usize) -> Result<ArcSet, Error> {
    let k = rng.random_range(1..=4);
    let runs: Vec<(usize, usize)> = (0..k)
        .map(|_| {
            let start = rng.random_range(0..d);
            (start, (start + rng.random_range(0..d / 8)) % d)
        })
        .collect();
    ArcSet::from_runs(d, &runs)
}

fn stripes(o: &SuiteOptions) -> Check {
    let (m, n, l) = (5u64, 3u64, 1u64);
    let big = if o.desk() { 360 } else { 30 };
    let d = big;
    let omega = OmegaMap::new(m, n, l)?;
    let mut rng = o.rng(8);
    let mut measures_ok = true;
    let mut rows = Vec::new();
    for _ in 0..20 {
        let gamma = random_arc(&mut rng, d)?;
        let pre = preimage(omega, &gamma, big)?;
        let brute = brute_preimage_count(m, n, l, big, gamma.bits());
        let ok = pre.count() == brute && pre.count() * d == gamma.count() * big * big;
        measures_ok &= ok;
        rows.push(json!({ "gamma": gamma.count(), "preimage": pre.count(), "oracle": brute, "pass": ok }));
    }
    let stride = if o.desk() { 15 } else { 1 };
    let mut fibers_ok = true;
    let mut fiber_counts = BTreeSet::new();
    for k in (0..d).step_by(stride) {
        let pre = preimage(omega, &ArcSet::from_runs(d, &[(k, k)])?, big)?;
        let (row, col) = pre.line_counts();
        let r: BTreeSet<usize> = row.into_iter().filter(|&c| c > 0).collect();
        let c: BTreeSet<usize> = col.into_iter().filter(|&c| c > 0).collect();
        match (r.len(), c.len()) {
            (1, 1) => {
                let (r, c) = (*r.first().unwrap(), *c.first().unwrap());
                fibers_ok &= r as u64 * n == c as u64 * m;
                fiber_counts.insert((r, c));
            }
            _ => fibers_ok = false,
        }
    }
    Ok((
        measures_ok && fibers_ok,
        json!({
            "omega": omega.to_string(),
            "M": big,
            "d": d,
            "measure_preserving": measure_preserving(omega, big, d)?,
            "arcs": rows,
            "fiber_row_col_counts": fiber_counts,
            "fibers_pass": fibers_ok,
        }),
        Vec::new(),
    ))
}

fn shift_tensor(o: &SuiteOptions) -> Check {
    let (big, cols) = if o.desk() { (32, 8) } else { (16, 6) };
    let us = build_us_subspace(1, &ArcSet::half(big)?, Window::new(0, cols, 0, 0, 2)?, big)?;
    let sw = compress(ShiftOp::W, &us.subspace)?;
    let sz = compress(ShiftOp::Z, &us.subspace)?;
    let iso = isometry_defect(&sw);
    let uni = unitary_defect(&sz);
    let det = shift_detector(&sw, 2, o.rank_tol)?;
    let pass = iso < 1e-12 && uni < 1e-12 && det.genuine_wandering > 0 && det.genuine_wandering == us.rank;
    Ok((
        pass,
        json!({
            "M": big,
            "dim": us.subspace.dim(),
            "fiber_rank": us.rank,
            "isometry_defect_w": iso,
            "unitary_defect_z": uni,
            "detector_w": det,
        }),
        Vec::new(),
    ))
}

fn case4_config(theta: Value, systems: Value) -> Result<Case4Wire, Error> {
    serde_json::from_value(json!({ "M": 36, "theta": theta, "systems": systems }))
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn run_case4(cfg: &Case4Wire) -> Result<Case4Report, Error> {
    mainl_case4_check(&cfg.theta_set()?, &cfg.systems, cfg.tol)
}

fn case4(_: &SuiteOptions) -> Check {
    let sys = |m: u64, n: u64, runs: Value| json!({ "m": m, "n": n, "l": 1, "gamma": { "d": 36, "runs": runs } });

    let good = run_case4(&case4_config(
        json!({ "kind": "complement" }),
        json!([sys(1, 1, json!([[0, 8]])), sys(1, 1, json!([[18, 26]]))]),
    )?)?;
    let good_ok = good.pass;

    let mixed = run_case4(&case4_config(
        json!({ "kind": "empty" }),
        json!([sys(1, 1, json!([[0, 8]])), sys(1, 2, json!([[18, 26]]))]),
    )?)?;
    let mixed_ok = !mixed.pass && !mixed.ratio_consistent && mixed.violations.iter().any(|v| v.starts_with("(c)"));

    let cfg = case4_config(
        json!({ "kind": "empty" }),
        json!([sys(1, 1, json!([[0, 8]])), sys(1, 1, json!([[5, 12]]))]),
    )?;
    let over = run_case4(&cfg)?;
    let (g1, g2) = (&cfg.systems[0].gamma, &cfg.systems[1].gamma);
    let shared = g1.intersection(g2)?.count();
    let (big, d) = (cfg.resolution, g1.resolution());
    let exact = over.overlaps.len() == 1
        && over.overlaps[0].points * d == shared * big * big
        && over.overlaps[0].measure == (over.overlaps[0].points as f64) / ((big * big) as f64);
    let over_ok = !over.pass
        && exact
        && over.ratio_consistent
        && over.violations.len() == 1
        && over.violations[0].starts_with("(a)");
    Ok((
        good_ok && mixed_ok && over_ok,
        json!({
            "disjoint_equal_ratio": good,
            "mixed_ratio": mixed,
            "overlapping": over,
            "expected_overlap": { "arc_points": shared, "measure": shared as f64 / d as f64 },
        }),
        Vec::new(),
    ))
}
