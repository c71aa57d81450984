//! Exact monomial model: subspaces spanned by `w^i z^j` for `(i, j)` in a
//! point set, on which the shifts act by translation. Every check here is set
//! arithmetic; nothing is floating point.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::diagram::{Diagram, DiagramClass, DiagramForm, SimpleKind};
use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticePoint, Window};

/// Whether an answer is decided from a symbolic description or only from the
/// finite window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Soundness {
    Exact,
    WindowLimited,
}

/// `ψ M_J` with the monomial twist `ψ = w^a z^b` stored as a translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbolic {
    pub diagram: Diagram,
    pub twist: LatticePoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSubspace {
    points: BTreeSet<LatticePoint>,
    window: Window,
    symbolic: Option<Symbolic>,
}

impl MonomialSubspace {
    pub fn from_points(points: BTreeSet<LatticePoint>, window: Window) -> Result<Self> {
        window.validate()?;
        if let Some(p) = points.iter().find(|p| !window.contains(**p)) {
            return Err(Error::InvalidWindow(format!("point {p} outside {window}")));
        }
        Ok(Self {
            points,
            window,
            symbolic: None,
        })
    }

    /// Window restriction of `w^a z^b M_J`.
    pub fn from_diagram(diagram: Diagram, twist: LatticePoint, window: Window) -> Result<Self> {
        window.validate()?;
        let shifted = diagram.translate(twist);
        Ok(Self {
            points: shifted.restrict_to_window(&window),
            window,
            symbolic: Some(Symbolic { diagram, twist }),
        })
    }

    /// Build from points and attach a symbolic description, checking they agree.
    pub fn with_symbolic(
        points: BTreeSet<LatticePoint>,
        window: Window,
        symbolic: Symbolic,
    ) -> Result<Self> {
        let built = Self::from_diagram(symbolic.diagram.clone(), symbolic.twist, window)?;
        if built.points != points {
            return Err(Error::InvalidDiagram(
                "point set disagrees with its symbolic description on the window".into(),
            ));
        }
        Ok(built)
    }

    pub fn points(&self) -> &BTreeSet<LatticePoint> {
        &self.points
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn symbolic(&self) -> Option<&Symbolic> {
        self.symbolic.as_ref()
    }

    /// The translated diagram `J + (a, b)`, when known.
    pub fn shifted_diagram(&self) -> Option<Diagram> {
        self.symbolic.as_ref().map(|s| s.diagram.translate(s.twist))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn soundness(&self) -> Soundness {
        if self.symbolic.is_some() {
            Soundness::Exact
        } else {
            Soundness::WindowLimited
        }
    }

    /// Membership of an arbitrary lattice point. Without a symbolic
    /// description, points outside the window count as absent.
    pub fn member(&self, p: LatticePoint) -> bool {
        match &self.symbolic {
            Some(s) => s.diagram.contains(p - s.twist),
            None => self.points.contains(&p),
        }
    }

    /// `{p + k e_dir : p ∈ M}` clipped to the extended window.
    pub fn shift_image(&self, dir: Direction, k: usize) -> Result<BTreeSet<LatticePoint>> {
        self.window.check_power(k)?;
        let ext = self.window.extended();
        let step = k as i64 * dir.unit();
        Ok(self
            .points
            .iter()
            .map(|&p| p + step)
            .filter(|&q| ext.contains(q))
            .collect())
    }

    pub fn is_invariant(&self, dir: Direction) -> bool {
        if self.symbolic.is_some() {
            return true;
        }
        let e = dir.unit();
        self.points
            .iter()
            .map(|&p| p + e)
            .filter(|&q| self.window.contains(q))
            .all(|q| self.points.contains(&q))
    }

    fn require_invariant(&self, dir: Direction) -> Result<()> {
        if self.is_invariant(dir) {
            Ok(())
        } else {
            Err(Error::NotInvariant(dir))
        }
    }

    /// Wandering set `{p ∈ M : p - e_dir ∉ M}`.
    pub fn kernel_of_adjoint(&self, dir: Direction) -> Result<BTreeSet<LatticePoint>> {
        self.require_invariant(dir)?;
        let e = dir.unit();
        Ok(self
            .points
            .iter()
            .copied()
            .filter(|&p| !self.member(p - e))
            .collect())
    }

    /// Number of backward steps along `dir` staying inside `M`, capped at
    /// `cap`.
    fn backward_depth(&self, p: LatticePoint, dir: Direction, cap: u64) -> u64 {
        if let Some(d) = self.shifted_diagram() {
            return d.depth(p, dir).map_or(cap, |k| k.min(cap));
        }
        let e = dir.unit();
        let mut k = 0;
        while k < cap && self.points.contains(&(p - (k as i64 + 1) * e)) {
            k += 1;
        }
        k
    }

    /// Wold decomposition of the restricted shift along `dir`.
    pub fn wold_single(&self, dir: Direction) -> Result<WoldSingle> {
        self.require_invariant(dir)?;
        let soundness = self.soundness();
        let cap = match soundness {
            Soundness::Exact => u64::MAX,
            Soundness::WindowLimited => self.window.margin.max(1) as u64,
        };
        let unbounded = self
            .shifted_diagram()
            .is_some_and(|d| d.backward_unbounded(dir));
        let mut unitary = BTreeSet::new();
        let mut layers: Vec<BTreeSet<LatticePoint>> = Vec::new();
        for &p in &self.points {
            if unbounded {
                unitary.insert(p);
                continue;
            }
            let k = self.backward_depth(p, dir, cap);
            if k >= cap {
                unitary.insert(p);
            } else {
                let k = k as usize;
                if layers.len() <= k {
                    layers.resize_with(k + 1, BTreeSet::new);
                }
                layers[k].insert(p);
            }
        }
        Ok(WoldSingle {
            direction: dir,
            unitary,
            layers,
            soundness,
        })
    }

    /// Compare `S_w^* S_z e_p` with `S_z S_w^* e_p` on every basis point. The
    /// relation is the adjoint of `S_z^* S_w = S_w S_z^*`, so either order
    /// decides double commutation.
    pub fn doubly_commute_check(&self) -> Result<DoubleCommute> {
        for dir in Direction::BOTH {
            self.require_invariant(dir)?;
        }
        let up_left = LatticePoint::new(-1, 1);
        let left = LatticePoint::new(-1, 0);
        for &p in &self.points {
            // S_w^* S_z e_p = e_{p+(-1,1)} if that is in M; S_z S_w^* e_p
            // equals the same vector when p - (1,0) ∈ M and vanishes otherwise.
            // The reverse mismatch only arises from points cut off by the top
            // edge of a window-limited model.
            let lhs = self.member(p + up_left);
            let rhs = self.member(p + left);
            if lhs && !rhs {
                return Ok(DoubleCommute {
                    holds: false,
                    witness: Some(p),
                    defect_vector: Some(p + up_left),
                    defect_norm: 1.0,
                    soundness: self.soundness(),
                });
            }
        }
        Ok(DoubleCommute {
            holds: true,
            witness: None,
            defect_vector: None,
            defect_norm: 0.0,
            soundness: self.soundness(),
        })
    }

    /// Point set of `ran S_dir^k` inside `M`.
    pub fn range_points(&self, dir: Direction, k: usize) -> BTreeSet<LatticePoint> {
        let step = k as i64 * dir.unit();
        self.points
            .iter()
            .copied()
            .filter(|&p| self.member(p - step))
            .collect()
    }

    /// Whether the coordinate projections onto `ran S_w^m` and `ran S_z^n`
    /// commute, checked as `P_A P_B e_p = P_{A∩B} e_p = P_B P_A e_p` on every
    /// basis point.
    pub fn range_projection_commutator(&self, m: usize, n: usize) -> Result<bool> {
        for dir in Direction::BOTH {
            self.require_invariant(dir)?;
        }
        self.window.check_power(m.max(n))?;
        let a = self.range_points(Direction::W, m);
        let b = self.range_points(Direction::Z, n);
        let both: BTreeSet<_> = a.intersection(&b).copied().collect();
        let project = |set: &BTreeSet<LatticePoint>, v: Option<LatticePoint>| v.filter(|p| set.contains(p));
        Ok(self.points.iter().all(|&p| {
            let ab = project(&a, project(&b, Some(p)));
            let ba = project(&b, project(&a, Some(p)));
            let cap = project(&both, Some(p));
            ab == cap && ba == cap
        }))
    }

    pub fn fourfold_decompose(&self) -> Result<ExactPairReport> {
        let dc = self.doubly_commute_check()?;
        if let Some(witness) = dc.witness {
            return Err(Error::NotDoublyCommuting { witness });
        }
        let ww = self.wold_single(Direction::W)?;
        let wz = self.wold_single(Direction::Z)?;
        let mut parts = FourfoldParts::default();
        for &p in &self.points {
            let part = match (ww.unitary.contains(&p), wz.unitary.contains(&p)) {
                (true, true) => &mut parts.uu,
                (true, false) => &mut parts.us,
                (false, true) => &mut parts.su,
                (false, false) => &mut parts.ss,
            };
            part.insert(p);
        }
        let parts_invariant = parts.all().iter().all(|part| {
            part.iter().all(|&p| {
                Direction::BOTH.iter().all(|d| {
                    let q = p + d.unit();
                    !self.window.contains(q) || part.contains(&q)
                })
            })
        });
        let mm = self.window.margin;
        let mut compatible = true;
        for m in 1..=mm {
            for n in 1..=mm {
                compatible &= self.range_projection_commutator(m, n)?;
            }
        }
        Ok(ExactPairReport {
            invariant_w: true,
            invariant_z: true,
            doubly_commuting: true,
            compatible,
            compatible_checked_up_to: (mm, mm),
            parts_invariant,
            wold_parts: parts,
            soundness: self.soundness(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WoldSingle {
    pub direction: Direction,
    pub unitary: BTreeSet<LatticePoint>,
    /// `layers[k]` holds the points exactly `k` forward steps from the
    /// wandering set.
    pub layers: Vec<BTreeSet<LatticePoint>>,
    pub soundness: Soundness,
}

impl WoldSingle {
    pub fn shift_part(&self) -> BTreeSet<LatticePoint> {
        self.layers.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleCommute {
    pub holds: bool,
    pub witness: Option<LatticePoint>,
    /// Basis point of `S_w^* S_z e_p - S_z S_w^* e_p` (up to sign).
    pub defect_vector: Option<LatticePoint>,
    pub defect_norm: f64,
    pub soundness: Soundness,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FourfoldParts {
    pub uu: BTreeSet<LatticePoint>,
    pub us: BTreeSet<LatticePoint>,
    pub su: BTreeSet<LatticePoint>,
    pub ss: BTreeSet<LatticePoint>,
}

impl FourfoldParts {
    pub fn all(&self) -> [&BTreeSet<LatticePoint>; 4] {
        [&self.uu, &self.us, &self.su, &self.ss]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactPairReport {
    pub invariant_w: bool,
    pub invariant_z: bool,
    pub doubly_commuting: bool,
    pub compatible: bool,
    pub compatible_checked_up_to: (usize, usize),
    pub parts_invariant: bool,
    pub wold_parts: FourfoldParts,
    pub soundness: Soundness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecoveryStatus {
    /// All corners lie strictly inside the window; the diagram is determined.
    Exact,
    /// A simple or periodic pattern fits the window but continues past it.
    Candidate,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    pub status: RecoveryStatus,
    pub twist: LatticePoint,
    pub diagram: Option<Diagram>,
    pub corners: Vec<LatticePoint>,
}

impl Recovery {
    pub fn class(&self) -> Option<DiagramClass> {
        self.diagram.as_ref().map(Diagram::classify)
    }
}

/// Rebuild a diagram from the windowed points alone (any symbolic
/// description is ignored).
pub fn recover_diagram(m: &MonomialSubspace) -> Result<Recovery> {
    if m.is_empty() {
        return Err(Error::InvalidParameter("cannot recover a diagram from no points".into()));
    }
    for dir in Direction::BOTH {
        m.require_invariant(dir)?;
    }
    let w = m.window;
    let pts = &m.points;
    let corners: Vec<LatticePoint> = pts
        .iter()
        .copied()
        .filter(|&p| {
            !pts.contains(&(p - LatticePoint::new(1, 0))) && !pts.contains(&(p - LatticePoint::new(0, 1)))
        })
        .collect();
    let agrees = |d: &Diagram| d.restrict_to_window(&w) == *pts;
    let done = |status, diagram: Option<Diagram>| Recovery {
        status,
        twist: LatticePoint::ORIGIN,
        diagram,
        corners: corners.clone(),
    };

    let on_edge = corners.iter().any(|c| c.i == w.i_min || c.j == w.j_min);
    if !on_edge {
        let d = if corners.len() == 1 {
            Diagram::simple(SimpleKind::Quadrant, corners[0])
        } else {
            Diagram::finite_corner(corners.clone())?
        };
        return Ok(if agrees(&d) {
            done(RecoveryStatus::Exact, Some(d))
        } else {
            done(RecoveryStatus::Inconclusive, None)
        });
    }

    let first = corners[0];
    let last = corners[corners.len() - 1];
    let simple = [
        Diagram::full_plane(),
        Diagram::simple(SimpleKind::Rows, LatticePoint::new(0, first.j)),
        Diagram::simple(SimpleKind::Cols, LatticePoint::new(last.i, 0)),
    ];
    if let Some(d) = simple.into_iter().find(|d| agrees(d)) {
        return Ok(done(RecoveryStatus::Candidate, Some(d)));
    }
    if let Some(d) = periodic_fit(&corners).filter(|d| agrees(d)) {
        return Ok(done(RecoveryStatus::Candidate, Some(d)));
    }
    Ok(done(RecoveryStatus::Inconclusive, None))
}

/// Periodic diagram whose corner steps repeat the observed pattern, when at
/// least three corners show it.
fn periodic_fit(corners: &[LatticePoint]) -> Option<Diagram> {
    if corners.len() < 3 {
        return None;
    }
    let steps: Vec<LatticePoint> = corners.windows(2).map(|w| w[1] - w[0]).collect();
    let p = (1..=steps.len() / 2)
        .find(|&p| (p..steps.len()).all(|k| steps[k] == steps[k - p]))
        .filter(|&p| p < steps.len())?;
    let m: i64 = steps[..p].iter().map(|s| s.i).sum();
    let n: i64 = -steps[..p].iter().map(|s| s.j).sum::<i64>();
    let c0 = corners[0];
    let floors = (0..m)
        .map(|r| {
            corners[..=p]
                .iter()
                .filter(|c| c.i <= c0.i + r)
                .map(|c| c.j - c0.j)
                .min()
                .unwrap_or(0)
        })
        .collect();
    let form = DiagramForm::Periodic(crate::diagram::PeriodCell::new(floors, n).ok()?);
    Diagram::new(form, c0).ok()
}

/// First index `k` at which `T_z^{*n_k} T_w^{m_k} x` vanishes on `H^2`, for `x`
/// supported on `x_support`.
pub fn vanish_check(
    m: &MonomialSubspace,
    x_support: &BTreeSet<LatticePoint>,
    seq: &[(u64, u64)],
) -> Result<Option<usize>> {
    if let Some(p) = x_support.iter().find(|p| p.i < 0 || p.j < 0 || !m.window.contains(**p)) {
        return Err(Error::InvalidParameter(format!(
            "support point {p} outside Z_+^2 or the window"
        )));
    }
    for w in seq.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.0 < a.0 || b.1 < a.1 || b == a {
            return Err(Error::InvalidParameter(format!(
                "sequence not increasing at {a:?} -> {b:?}"
            )));
        }
    }
    // T_w^m moves every point right and keeps all of them; T_z^{*n} kills
    // exactly the points with j < n.
    let max_j = match x_support.iter().map(|p| p.j).max() {
        Some(j) => j as u64,
        None => return Ok(seq.first().map(|_| 0)),
    };
    Ok(seq.iter().position(|&(_, n)| n > max_j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: i64, j: i64) -> LatticePoint {
        LatticePoint::new(i, j)
    }

    fn quadrant(w: Window) -> MonomialSubspace {
        MonomialSubspace::from_diagram(Diagram::quadrant(), LatticePoint::ORIGIN, w).unwrap()
    }

    fn punctured(w: Window) -> MonomialSubspace {
        let mut pts = Diagram::quadrant().restrict_to_window(&w);
        pts.remove(&LatticePoint::ORIGIN);
        MonomialSubspace::from_points(pts, w).unwrap()
    }

    fn set<const K: usize>(a: [(i64, i64); K]) -> BTreeSet<LatticePoint> {
        a.into_iter().map(LatticePoint::from).collect()
    }

    #[test]
    fn shift_image_examples() {
        let w = Window::square(0, 3, 1).unwrap();
        let m = quadrant(w);
        let img = m.shift_image(Direction::W, 1).unwrap();
        let want: BTreeSet<_> = m.points().iter().map(|&q| q + p(1, 0)).collect();
        assert_eq!(img, want);

        let single = MonomialSubspace::from_points(set([(0, 0)]), Window::square(0, 3, 2).unwrap()).unwrap();
        assert_eq!(single.shift_image(Direction::Z, 2).unwrap(), set([(0, 2)]));
        assert_eq!(
            single.shift_image(Direction::Z, 3),
            Err(Error::MarginExhausted {
                requested: 3,
                margin: 2
            })
        );

        let d = Diagram::finite_corner(vec![p(0, 2), p(3, 0)]).unwrap();
        let m = MonomialSubspace::from_diagram(d, LatticePoint::ORIGIN, Window::square(0, 6, 1).unwrap()).unwrap();
        let want: BTreeSet<_> = m.points().iter().map(|&q| q + p(1, 0)).collect();
        assert_eq!(m.shift_image(Direction::W, 1).unwrap(), want);
    }

    #[test]
    fn invariance_examples() {
        let w = Window::square(0, 2, 0).unwrap();
        let m = MonomialSubspace::from_points(set([(0, 0), (0, 1)]), w).unwrap();
        assert!(!m.is_invariant(Direction::Z));
        let m = punctured(Window::square(0, 5, 0).unwrap());
        assert!(m.is_invariant(Direction::W) && m.is_invariant(Direction::Z));
    }

    #[test]
    fn kernel_examples() {
        let w = Window::square(0, 4, 0).unwrap();
        let k = quadrant(w).kernel_of_adjoint(Direction::W).unwrap();
        assert_eq!(k, (0..=4).map(|j| p(0, j)).collect());
        let k = punctured(w).kernel_of_adjoint(Direction::W).unwrap();
        let mut want: BTreeSet<_> = (1..=4).map(|j| p(0, j)).collect();
        want.insert(p(1, 0));
        assert_eq!(k, want);

        let w = Window::square(-6, 6, 0).unwrap();
        let e41 = Diagram::periodic(vec![0], 1).unwrap();
        let m = MonomialSubspace::from_diagram(e41, LatticePoint::ORIGIN, w).unwrap();
        let k = m.kernel_of_adjoint(Direction::W).unwrap();
        assert_eq!(k, (-6..=6).map(|i| p(i, -i)).collect());
    }

    #[test]
    fn wold_examples() {
        let w = Window::square(-3, 3, 0).unwrap();
        let rows = MonomialSubspace::from_diagram(
            Diagram::simple(SimpleKind::Rows, LatticePoint::ORIGIN),
            LatticePoint::ORIGIN,
            w,
        )
        .unwrap();
        let r = rows.wold_single(Direction::W).unwrap();
        assert_eq!(&r.unitary, rows.points());
        assert!(r.layers.is_empty());

        let q = quadrant(Window::square(0, 4, 0).unwrap());
        let r = q.wold_single(Direction::W).unwrap();
        assert!(r.unitary.is_empty());
        for (k, layer) in r.layers.iter().enumerate() {
            assert_eq!(*layer, (0..=4).map(|j| p(k as i64, j)).collect());
        }

        let cols = MonomialSubspace::from_diagram(
            Diagram::simple(SimpleKind::Cols, LatticePoint::ORIGIN),
            LatticePoint::ORIGIN,
            w,
        )
        .unwrap();
        assert_eq!(&cols.wold_single(Direction::Z).unwrap().unitary, cols.points());
    }

    #[test]
    fn windowed_wold_uses_margin_as_orbit_length() {
        let w = Window::new(-4, 4, 0, 2, 2).unwrap();
        let pts = Diagram::simple(SimpleKind::Rows, LatticePoint::ORIGIN).restrict_to_window(&w);
        let m = MonomialSubspace::from_points(pts, w).unwrap();
        let r = m.wold_single(Direction::W).unwrap();
        assert_eq!(r.soundness, Soundness::WindowLimited);
        assert_eq!(r.layers.len(), 2);
        assert!(r.unitary.iter().all(|q| q.i >= -2));
    }

    #[test]
    fn doubly_commute_examples() {
        let w = Window::square(0, 5, 0).unwrap();
        assert!(quadrant(w).doubly_commute_check().unwrap().holds);
        let r = punctured(w).doubly_commute_check().unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(p(1, 0)));
        assert_eq!(r.defect_vector, Some(p(0, 1)));
        assert_eq!(r.defect_norm, 1.0);
        let t = MonomialSubspace::from_diagram(Diagram::quadrant(), p(2, 3), w).unwrap();
        assert!(t.doubly_commute_check().unwrap().holds);
    }

    #[test]
    fn range_projection_examples() {
        let w = Window::square(0, 8, 3).unwrap();
        assert!(quadrant(w).range_projection_commutator(1, 1).unwrap());
        assert!(punctured(w).range_projection_commutator(3, 2).unwrap());
        let d = Diagram::finite_corner(vec![p(0, 2), p(3, 0)]).unwrap();
        let m = MonomialSubspace::from_diagram(d, LatticePoint::ORIGIN, w).unwrap();
        assert!(m.range_projection_commutator(2, 2).unwrap());
        assert!(m.range_projection_commutator(4, 1).is_err());
    }

    #[test]
    fn fourfold_examples() {
        let w = Window::square(-3, 3, 1).unwrap();
        let build = |k| {
            MonomialSubspace::from_diagram(Diagram::simple(k, LatticePoint::ORIGIN), LatticePoint::ORIGIN, w)
                .unwrap()
        };
        let r = build(SimpleKind::Plane).fourfold_decompose().unwrap();
        assert_eq!(r.wold_parts.uu.len(), w.len());
        let q = build(SimpleKind::Quadrant);
        assert_eq!(&q.fourfold_decompose().unwrap().wold_parts.ss, q.points());
        let rows = build(SimpleKind::Rows);
        assert_eq!(&rows.fourfold_decompose().unwrap().wold_parts.us, rows.points());
        let cols = build(SimpleKind::Cols);
        let r = cols.fourfold_decompose().unwrap();
        assert_eq!(&r.wold_parts.su, cols.points());
        assert!(r.parts_invariant && r.compatible);

        let bad = punctured(Window::square(0, 4, 0).unwrap());
        assert_eq!(
            bad.fourfold_decompose(),
            Err(Error::NotDoublyCommuting { witness: p(1, 0) })
        );
    }

    #[test]
    fn recover_examples() {
        let w = Window::square(0, 8, 0).unwrap();
        let m = MonomialSubspace::from_diagram(Diagram::quadrant(), p(2, 1), w).unwrap();
        let r = recover_diagram(&m).unwrap();
        assert_eq!(r.status, RecoveryStatus::Exact);
        assert_eq!(r.diagram, Some(Diagram::quadrant().translate(p(2, 1))));

        let cs = vec![p(0, 2), p(1, 1), p(3, 0)];
        let w = Window::square(-2, 12, 0).unwrap();
        let d = Diagram::finite_corner(cs.clone()).unwrap();
        let m = MonomialSubspace::from_diagram(d.clone(), LatticePoint::ORIGIN, w).unwrap();
        let r = recover_diagram(&m).unwrap();
        assert_eq!(r.status, RecoveryStatus::Exact);
        assert_eq!(r.corners, cs);
        assert_eq!(r.diagram.unwrap().restrict_to_window(&w), d.restrict_to_window(&w));

        let w = Window::square(-6, 6, 0).unwrap();
        let e41 = Diagram::periodic(vec![0], 1).unwrap();
        let pts = e41.restrict_to_window(&w);
        let m = MonomialSubspace::from_points(pts, w).unwrap();
        let r = recover_diagram(&m).unwrap();
        assert_eq!(r.status, RecoveryStatus::Candidate);
        assert_eq!(r.class(), Some(DiagramClass::Periodic { m: 1, n: 1 }));
    }

    #[test]
    fn recover_flags_corners_on_the_edge() {
        // two corners, one on the bottom edge: not a simple or periodic fit
        let w = Window::square(0, 8, 0).unwrap();
        let d = Diagram::finite_corner(vec![p(1, 3), p(4, 0)]).unwrap();
        let m = MonomialSubspace::from_diagram(d, LatticePoint::ORIGIN, w).unwrap();
        assert_eq!(recover_diagram(&m).unwrap().status, RecoveryStatus::Inconclusive);
    }

    #[test]
    fn vanish_examples() {
        let m = quadrant(Window::square(0, 10, 0).unwrap());
        assert_eq!(vanish_check(&m, &set([(0, 0)]), &[(1, 1)]).unwrap(), Some(0));
        assert_eq!(
            vanish_check(&m, &set([(2, 3)]), &[(1, 1), (2, 2), (3, 4)]).unwrap(),
            Some(2)
        );
        let seq: Vec<_> = (0..10).map(|k| (k, k)).collect();
        assert_eq!(vanish_check(&m, &set([(0, 0), (0, 5)]), &seq).unwrap(), Some(6));
        assert!(vanish_check(&m, &set([(0, 0)]), &[(2, 2), (1, 1)]).is_err());
    }
}
