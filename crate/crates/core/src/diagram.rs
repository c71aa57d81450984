//! Staircase diagrams: subsets `J` of `Z^2` with `J + Z_+^2 ⊂ J`.
//!
//! Only finitely described diagrams are representable: the four simple forms,
//! unions of finitely many translated quadrants, and periodic diagrams given
//! by one period cell and an invariance vector `(m, -n)`. A "periodic" point
//! set equal to a half plane would need an unbounded period cell and is
//! therefore not constructible; half planes always come in through
//! [`DiagramForm::HalfPlaneRows`] / [`DiagramForm::HalfPlaneCols`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticePoint, Window};

/// One period of a periodic diagram, stored as the lowest member of each of
/// the `m` columns `0..m` (relative to the diagram anchor).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodCell {
    column_floor: Vec<i64>,
    n: i64,
}

impl PeriodCell {
    /// `column_floor[r]` is the smallest `j` with `(r, j)` in the cell.
    pub fn new(column_floor: Vec<i64>, n: i64) -> Result<Self> {
        let m = column_floor.len();
        if m == 0 {
            return Err(Error::InvalidDiagram("period cell has no columns".into()));
        }
        if n < 1 {
            return Err(Error::InvalidDiagram(format!("period n = {n} must be positive")));
        }
        if column_floor.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidDiagram(
                "period cell column floors must be non-increasing".into(),
            ));
        }
        if column_floor[m - 1] < column_floor[0] - n {
            return Err(Error::InvalidDiagram(format!(
                "last column floor {} lies below first floor shifted by n ({})",
                column_floor[m - 1],
                column_floor[0] - n
            )));
        }
        Ok(Self { column_floor, n })
    }

    /// Cell from `(i, j_min)` column segments with `i` covering `0..m`.
    pub fn from_segments(segments: &[LatticePoint], m: i64, n: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidDiagram(format!("period m = {m} must be positive")));
        }
        let mut floors = vec![None; m as usize];
        for s in segments {
            if !(0..m).contains(&s.i) {
                return Err(Error::InvalidDiagram(format!(
                    "cell column {} outside 0..{m}",
                    s.i
                )));
            }
            let slot = &mut floors[s.i as usize];
            if slot.is_some() {
                return Err(Error::InvalidDiagram(format!("cell column {} repeated", s.i)));
            }
            *slot = Some(s.j);
        }
        let floors = floors
            .into_iter()
            .enumerate()
            .map(|(r, f)| f.ok_or_else(|| Error::InvalidDiagram(format!("cell column {r} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(floors, n)
    }

    pub fn m(&self) -> i64 {
        self.column_floor.len() as i64
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn column_floors(&self) -> &[i64] {
        &self.column_floor
    }

    pub fn segments(&self) -> Vec<LatticePoint> {
        self.column_floor
            .iter()
            .enumerate()
            .map(|(r, &j)| LatticePoint::new(r as i64, j))
            .collect()
    }

    /// Lowest member of column `i` of the full periodic set.
    pub fn floor(&self, i: i64) -> i64 {
        let m = self.m();
        let k = i.div_euclid(m);
        self.column_floor[i.rem_euclid(m) as usize] - k * self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiagramForm {
    FullPlane,
    /// `Z_+^2`.
    Quadrant,
    /// `Z x Z_+`: every column, rows `j >= 0`.
    HalfPlaneRows,
    /// `Z_+ x Z`: columns `i >= 0`, every row.
    HalfPlaneCols,
    /// `⋃ corner + Z_+^2`; corners strictly increase in `i` and strictly
    /// decrease in `j`.
    FiniteCorner(Vec<LatticePoint>),
    Periodic(PeriodCell),
}

/// A diagram is its form translated by `anchor`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    form: DiagramForm,
    anchor: LatticePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimpleKind {
    #[serde(rename = "Z^2")]
    Plane,
    #[serde(rename = "Z+^2")]
    Quadrant,
    #[serde(rename = "ZxZ+")]
    Rows,
    #[serde(rename = "Z+xZ")]
    Cols,
}

impl fmt::Display for SimpleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimpleKind::Plane => "Z^2",
            SimpleKind::Quadrant => "Z+^2",
            SimpleKind::Rows => "ZxZ+",
            SimpleKind::Cols => "Z+xZ",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum DiagramClass {
    Simple { kind: SimpleKind },
    /// Componentwise-minimal `(m, n)` with `J + (m, -n) = J`.
    Periodic { m: i64, n: i64 },
    Irregular,
}

impl DiagramClass {
    pub fn is_regular(&self) -> bool {
        !matches!(self, DiagramClass::Irregular)
    }
}

impl Diagram {
    pub fn new(form: DiagramForm, anchor: LatticePoint) -> Result<Self> {
        if let DiagramForm::FiniteCorner(corners) = &form {
            validate_corners(corners)?;
        }
        Ok(Self { form, anchor })
    }

    pub fn full_plane() -> Self {
        Self {
            form: DiagramForm::FullPlane,
            anchor: LatticePoint::ORIGIN,
        }
    }

    pub fn quadrant() -> Self {
        Self::simple(SimpleKind::Quadrant, LatticePoint::ORIGIN)
    }

    pub fn simple(kind: SimpleKind, anchor: LatticePoint) -> Self {
        let form = match kind {
            SimpleKind::Plane => DiagramForm::FullPlane,
            SimpleKind::Quadrant => DiagramForm::Quadrant,
            SimpleKind::Rows => DiagramForm::HalfPlaneRows,
            SimpleKind::Cols => DiagramForm::HalfPlaneCols,
        };
        Self { form, anchor }
    }

    /// Union of quadrants at absolute `corners`.
    pub fn finite_corner(corners: Vec<LatticePoint>) -> Result<Self> {
        Self::new(DiagramForm::FiniteCorner(corners), LatticePoint::ORIGIN)
    }

    /// Periodic diagram with period cell floors for columns `0..m` and
    /// invariance vector `(m, -n)`.
    pub fn periodic(column_floor: Vec<i64>, n: i64) -> Result<Self> {
        Ok(Self {
            form: DiagramForm::Periodic(PeriodCell::new(column_floor, n)?),
            anchor: LatticePoint::ORIGIN,
        })
    }

    pub fn form(&self) -> &DiagramForm {
        &self.form
    }

    pub fn anchor(&self) -> LatticePoint {
        self.anchor
    }

    pub fn period_cell(&self) -> Option<&PeriodCell> {
        match &self.form {
            DiagramForm::Periodic(c) => Some(c),
            _ => None,
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        let q = p - self.anchor;
        match &self.form {
            DiagramForm::FullPlane => true,
            DiagramForm::Quadrant => q.i >= 0 && q.j >= 0,
            DiagramForm::HalfPlaneRows => q.j >= 0,
            DiagramForm::HalfPlaneCols => q.i >= 0,
            DiagramForm::FiniteCorner(cs) => cs.iter().any(|c| q.i >= c.i && q.j >= c.j),
            DiagramForm::Periodic(cell) => q.j >= cell.floor(q.i),
        }
    }

    pub fn translate(&self, v: LatticePoint) -> Diagram {
        Diagram {
            form: self.form.clone(),
            anchor: self.anchor + v,
        }
    }

    /// Minimal points `p` of `J` (neither `p - (1,0)` nor `p - (0,1)` in `J`),
    /// by increasing `i`. Periodic diagrams report the corners of the period
    /// cell in columns `anchor.i .. anchor.i + m`.
    pub fn corners(&self) -> Result<Vec<LatticePoint>> {
        let a = self.anchor;
        match &self.form {
            DiagramForm::FullPlane => Err(Error::NoCornerSet {
                form: "Z^2",
                what: "no corner set",
            }),
            DiagramForm::HalfPlaneRows => Err(Error::NoCornerSet {
                form: "ZxZ+",
                what: "infinite corner set",
            }),
            DiagramForm::HalfPlaneCols => Err(Error::NoCornerSet {
                form: "Z+xZ",
                what: "infinite corner set",
            }),
            DiagramForm::Quadrant => Ok(vec![a]),
            DiagramForm::FiniteCorner(cs) => Ok(cs.iter().map(|&c| c + a).collect()),
            DiagramForm::Periodic(cell) => Ok((0..cell.m())
                .filter(|&r| cell.floor(r - 1) > cell.floor(r))
                .map(|r| LatticePoint::new(r, cell.floor(r)) + a)
                .collect()),
        }
    }

    pub fn classify(&self) -> DiagramClass {
        match &self.form {
            DiagramForm::FullPlane => DiagramClass::Simple {
                kind: SimpleKind::Plane,
            },
            DiagramForm::Quadrant => DiagramClass::Simple {
                kind: SimpleKind::Quadrant,
            },
            DiagramForm::HalfPlaneRows => DiagramClass::Simple {
                kind: SimpleKind::Rows,
            },
            DiagramForm::HalfPlaneCols => DiagramClass::Simple {
                kind: SimpleKind::Cols,
            },
            DiagramForm::FiniteCorner(cs) if cs.len() == 1 => DiagramClass::Simple {
                kind: SimpleKind::Quadrant,
            },
            DiagramForm::FiniteCorner(_) => DiagramClass::Irregular,
            DiagramForm::Periodic(cell) => {
                let (m, n) = minimal_period(cell);
                DiagramClass::Periodic { m, n }
            }
        }
    }

    /// Describe the same periodic set with the period cell
    /// `⋃_{k<l} J_0 + k(m,-n)` and invariance vector `(lm, -ln)`.
    pub fn period_normalize(&self, l: i64) -> Result<Diagram> {
        let cell = self.period_cell().ok_or(Error::NotPeriodic)?;
        if l < 1 {
            return Err(Error::InvalidParameter(format!(
                "period multiplier l = {l} must be positive"
            )));
        }
        let floors = (0..l * cell.m()).map(|i| cell.floor(i)).collect();
        Ok(Diagram {
            form: DiagramForm::Periodic(PeriodCell::new(floors, l * cell.n())?),
            anchor: self.anchor,
        })
    }

    pub fn restrict_to_window(&self, w: &Window) -> BTreeSet<LatticePoint> {
        w.points().filter(|&p| self.contains(p)).collect()
    }

    /// True when `J - e ⊂ J` for the unit step `e` of `dir`, i.e. every
    /// backward orbit stays inside `J`.
    pub fn backward_unbounded(&self, dir: Direction) -> bool {
        matches!(
            (&self.form, dir),
            (DiagramForm::FullPlane, _)
                | (DiagramForm::HalfPlaneRows, Direction::W)
                | (DiagramForm::HalfPlaneCols, Direction::Z)
        )
    }

    /// Number of backward steps along `dir` that stay in `J`, for `p ∈ J`.
    /// `None` when `p ∉ J` or the backward orbit never leaves.
    pub fn depth(&self, p: LatticePoint, dir: Direction) -> Option<u64> {
        if !self.contains(p) || self.backward_unbounded(dir) {
            return None;
        }
        let q = p - self.anchor;
        let d = match (&self.form, dir) {
            (DiagramForm::Quadrant, Direction::W) | (DiagramForm::HalfPlaneCols, Direction::W) => q.i,
            (DiagramForm::Quadrant, Direction::Z) | (DiagramForm::HalfPlaneRows, Direction::Z) => q.j,
            (DiagramForm::FiniteCorner(cs), Direction::W) => cs
                .iter()
                .filter(|c| q.j >= c.j)
                .map(|c| q.i - c.i)
                .max()
                .unwrap_or(0),
            (DiagramForm::FiniteCorner(cs), Direction::Z) => cs
                .iter()
                .filter(|c| q.i >= c.i)
                .map(|c| q.j - c.j)
                .max()
                .unwrap_or(0),
            (DiagramForm::Periodic(cell), Direction::Z) => q.j - cell.floor(q.i),
            (DiagramForm::Periodic(cell), Direction::W) => {
                // floor(i) grows without bound as i decreases
                let mut k = 0;
                while q.j >= cell.floor(q.i - k - 1) {
                    k += 1;
                }
                k
            }
            _ => unreachable!("backward-unbounded forms handled above"),
        };
        Some(d as u64)
    }
}

fn validate_corners(corners: &[LatticePoint]) -> Result<()> {
    if corners.is_empty() {
        return Err(Error::InvalidDiagram("corner list is empty".into()));
    }
    for w in corners.windows(2) {
        if !(w[1].i > w[0].i && w[1].j < w[0].j) {
            return Err(Error::InvalidDiagram(format!(
                "corners {} and {} are not a strict staircase (i increasing, j decreasing)",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Smallest `a | m` such that the floor profile is invariant under `(a, -b)`.
fn minimal_period(cell: &PeriodCell) -> (i64, i64) {
    let m = cell.m();
    for a in (1..=m).filter(|a| m % a == 0) {
        let b = cell.floor(0) - cell.floor(a);
        if (0..m).all(|r| cell.floor(r) - cell.floor(r + a) == b) {
            return (a, b);
        }
    }
    (m, cell.n())
}
