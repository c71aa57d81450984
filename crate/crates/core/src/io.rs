//! JSON wire formats and PGM rasters.
//!
//! Complex numbers travel as `[re, im]`, lattice points as `[i, j]`, windows
//! as `[i0, i1, j0, j1]` with the margin in a sibling `"margin"` field.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, DiagramForm, PeriodCell};
use crate::error::{Error, Result};
use crate::exact_model::{MonomialSubspace, Symbolic};
use crate::genpowers::{Block, BlockLayout, GeneralizedPowerSystem};
use crate::lattice::{LatticePoint, Window};
use crate::linalg::{CMat, CVec, SparseMatrix};
use crate::torusgeo::{preimage, StripeSystem, TorusGridSet};
use crate::C64;

pub type ComplexWire = [f64; 2];

pub fn complex_to_wire(z: C64) -> ComplexWire {
    [z.re, z.im]
}

pub fn complex_from_wire(w: ComplexWire) -> C64 {
    C64::new(w[0], w[1])
}

pub fn vector_to_wire(v: &CVec) -> Vec<ComplexWire> {
    v.iter().map(|&z| complex_to_wire(z)).collect()
}

pub fn vector_from_wire(w: &[ComplexWire]) -> CVec {
    CVec::from_iterator(w.len(), w.iter().map(|&z| complex_from_wire(z)))
}

/// Row-major list of rows.
pub fn matrix_to_wire(m: &CMat) -> Vec<Vec<ComplexWire>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_wire(m[(r, c)])).collect())
        .collect()
}

pub fn matrix_from_wire(rows: &[Vec<ComplexWire>]) -> Result<CMat> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != k) {
        return Err(Error::DimensionMismatch("matrix rows have different lengths".into()));
    }
    Ok(CMat::from_fn(n, k, |r, c| complex_from_wire(rows[r][c])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellWire {
    /// `(i, j_min)` column segments.
    pub cell: Vec<LatticePoint>,
    pub m: i64,
    pub n: i64,
}

impl CellWire {
    pub fn from_cell(c: &PeriodCell) -> Self {
        Self {
            cell: c.segments(),
            m: c.m(),
            n: c.n(),
        }
    }

    pub fn to_cell(&self) -> Result<PeriodCell> {
        PeriodCell::from_segments(&self.cell, self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramWire {
    pub form: String,
    #[serde(default)]
    pub anchor: LatticePoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corners: Option<Vec<LatticePoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<CellWire>,
}

impl DiagramWire {
    pub fn from_diagram(d: &Diagram) -> Self {
        let (form, corners, period) = match d.form() {
            DiagramForm::FullPlane => ("full", None, None),
            DiagramForm::Quadrant => ("quadrant", None, None),
            DiagramForm::HalfPlaneRows => ("rows", None, None),
            DiagramForm::HalfPlaneCols => ("cols", None, None),
            DiagramForm::FiniteCorner(cs) => ("corners", Some(cs.clone()), None),
            DiagramForm::Periodic(c) => ("periodic", None, Some(CellWire::from_cell(c))),
        };
        Self {
            form: form.into(),
            anchor: d.anchor(),
            corners,
            period,
        }
    }

    pub fn to_diagram(&self) -> Result<Diagram> {
        let form = match self.form.as_str() {
            "full" => DiagramForm::FullPlane,
            "quadrant" => DiagramForm::Quadrant,
            "rows" => DiagramForm::HalfPlaneRows,
            "cols" => DiagramForm::HalfPlaneCols,
            "corners" => DiagramForm::FiniteCorner(self.corners.clone().ok_or_else(|| {
                Error::InvalidDiagram("form \"corners\" needs a \"corners\" list".into())
            })?),
            "periodic" => DiagramForm::Periodic(
                self.period
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDiagram("form \"periodic\" needs a \"period\" object".into()))?
                    .to_cell()?,
            ),
            other => return Err(Error::InvalidDiagram(format!("unknown diagram form {other:?}"))),
        };
        Diagram::new(form, self.anchor)
    }
}

pub fn window_to_wire(w: &Window) -> [i64; 4] {
    [w.i_min, w.i_max, w.j_min, w.j_max]
}

pub fn window_from_wire(b: [i64; 4], margin: usize) -> Result<Window> {
    Window::new(b[0], b[1], b[2], b[3], margin)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicWire {
    pub diagram: DiagramWire,
    #[serde(default)]
    pub twist: LatticePoint,
}

/// Monomial subspace. `points` may be omitted when `symbolic` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceWire {
    pub window: [i64; 4],
    #[serde(default)]
    pub margin: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<LatticePoint>>,
    #[serde(default)]
    pub symbolic: Option<SymbolicWire>,
}

impl SubspaceWire {
    pub fn from_subspace(m: &MonomialSubspace) -> Self {
        Self {
            window: window_to_wire(m.window()),
            margin: m.window().margin,
            points: Some(m.points().iter().copied().collect()),
            symbolic: m.symbolic().map(|s| SymbolicWire {
                diagram: DiagramWire::from_diagram(&s.diagram),
                twist: s.twist,
            }),
        }
    }

    pub fn to_subspace(&self) -> Result<MonomialSubspace> {
        let window = window_from_wire(self.window, self.margin)?;
        let points = self.points.as_ref().map(|p| p.iter().copied().collect::<BTreeSet<_>>());
        match (&self.symbolic, points) {
            (Some(s), Some(pts)) => MonomialSubspace::with_symbolic(
                pts,
                window,
                Symbolic {
                    diagram: s.diagram.to_diagram()?,
                    twist: s.twist,
                },
            ),
            (Some(s), None) => MonomialSubspace::from_diagram(s.diagram.to_diagram()?, s.twist, window),
            (None, Some(pts)) => MonomialSubspace::from_points(pts, window),
            (None, None) => Err(Error::InvalidParameter(
                "subspace needs \"points\" or \"symbolic\"".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseWire {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)`.
    pub entries: Vec<(usize, usize, ComplexWire)>,
}

impl SparseWire {
    pub fn from_matrix(a: &SparseMatrix) -> Self {
        Self {
            rows: a.nrows(),
            cols: a.ncols(),
            entries: (0..a.ncols())
                .flat_map(|c| a.col(c).iter().map(move |&(r, v)| (r, c, complex_to_wire(v))))
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<SparseMatrix> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            if r >= self.rows || c >= self.cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r}, {c}) outside {}x{}",
                    self.rows, self.cols
                )));
            }
            cols[c].push((r, complex_from_wire(v)));
        }
        Ok(SparseMatrix::from_columns(self.rows, cols))
    }
}

/// Serialized generalized-power system. The build inputs are optional so that
/// hand-assembled pairs can be verified too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpWire {
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Vec<Vec<ComplexWire>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<Vec<ComplexWire>>,
    pub j_max: i64,
    #[serde(default)]
    pub margin: usize,
    pub blocks: Vec<Block>,
    pub v1: SparseWire,
    pub v2: SparseWire,
}

impl GpWire {
    pub fn from_system(s: &GeneralizedPowerSystem) -> Self {
        Self {
            m: s.m,
            n: s.n,
            cell: Some(CellWire::from_cell(&s.cell)),
            unitary: Some(matrix_to_wire(&s.unitary)),
            cyclic: Some(vector_to_wire(&s.cyclic)),
            j_max: s.layout.j_max,
            margin: s.margin,
            blocks: s.layout.blocks.clone(),
            v1: SparseWire::from_matrix(&s.v1),
            v2: SparseWire::from_matrix(&s.v2),
        }
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout {
            blocks: self.blocks.clone(),
            j_max: self.j_max,
        }
    }

    pub fn cyclic_vector(&self) -> Option<CVec> {
        self.cyclic.as_deref().map(vector_from_wire)
    }

    /// The full system, when every build input is present.
    pub fn to_system(&self) -> Result<GeneralizedPowerSystem> {
        let missing = |what: &str| Error::InvalidParameter(format!("system file lacks \"{what}\""));
        Ok(GeneralizedPowerSystem {
            cell: self.cell.as_ref().ok_or_else(|| missing("cell"))?.to_cell()?,
            m: self.m,
            n: self.n,
            unitary: matrix_from_wire(self.unitary.as_ref().ok_or_else(|| missing("unitary"))?)?,
            cyclic: self.cyclic_vector().ok_or_else(|| missing("cyclic"))?,
            layout: self.layout(),
            v1: self.v1.to_matrix()?,
            v2: self.v2.to_matrix()?,
            margin: self.margin,
        })
    }
}

/// `Θ` in a case-4 configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaWire {
    Empty,
    Full,
    /// The complement of the union of all stripe sets.
    Complement,
    /// Union of inclusive index boxes `[a0, a1, b0, b1]`.
    Boxes { boxes: Vec<[usize; 4]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case4Wire {
    #[serde(rename = "M")]
    pub resolution: usize,
    pub theta: ThetaWire,
    pub systems: Vec<StripeSystem>,
    #[serde(default)]
    pub tol: f64,
}

impl Case4Wire {
    pub fn theta_set(&self) -> Result<TorusGridSet> {
        let m = self.resolution;
        match &self.theta {
            ThetaWire::Empty => TorusGridSet::empty(m),
            ThetaWire::Full => TorusGridSet::full(m),
            ThetaWire::Complement => {
                let mut u = TorusGridSet::empty(m)?;
                for s in &self.systems {
                    u = u.union(&preimage(s.omega()?, &s.gamma, m)?)?;
                }
                Ok(u.complement())
            }
            ThetaWire::Boxes { boxes } => {
                if let Some(b) = boxes.iter().find(|b| b.iter().any(|&x| x >= m)) {
                    return Err(Error::InvalidParameter(format!("box {b:?} outside 0..{m}")));
                }
                TorusGridSet::from_fn(m, |a, b| {
                    boxes.iter().any(|bx| (bx[0]..=bx[1]).contains(&a) && (bx[2]..=bx[3]).contains(&b))
                })
            }
        }
    }
}

/// 8-bit grey raster, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    /// `on(x, y)` pixels become 255, the rest 0.
    pub fn from_fn(width: usize, height: usize, on: impl Fn(usize, usize) -> bool) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(if on(x, y) { 255 } else { 0 });
            }
        }
        Self { width, height, pixels }
    }

    /// Binary PGM (P5).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("not a binary PGM: {why}"));
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad("truncated header"));
            }
            fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
        if fields[0] != "P5" {
            return Err(bad("magic is not P5"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
        let (width, height, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval == 0 || maxval > 255 {
            return Err(bad("only 8-bit rasters are supported"));
        }
        let data = &bytes[(pos + 1).min(bytes.len())..];
        if data.len() != width * height {
            return Err(bad("pixel count does not match the header"));
        }
        Ok(Self {
            width,
            height,
            pixels: data.to_vec(),
        })
    }
}

/// Membership of `d` over the window, `j` increasing upwards.
pub fn render_diagram(d: &Diagram, w: &Window) -> Raster {
    Raster::from_fn(w.width(), w.height(), |x, y| {
        d.contains(LatticePoint::new(w.i_min + x as i64, w.j_max - y as i64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::SimpleKind;

    #[test]
    fn diagram_wire_roundtrip() {
        let ds = [
            Diagram::quadrant(),
            Diagram::simple(SimpleKind::Rows, LatticePoint::new(0, 3)),
            Diagram::finite_corner(vec![LatticePoint::new(0, 3), LatticePoint::new(2, 1)]).unwrap(),
            Diagram::periodic(vec![2, 1, 1], 2).unwrap(),
        ];
        for d in ds {
            let json = serde_json::to_string(&DiagramWire::from_diagram(&d)).unwrap();
            let back: DiagramWire = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_diagram().unwrap(), d);
        }
        let w: DiagramWire = serde_json::from_str(r#"{"form":"quadrant"}"#).unwrap();
        assert_eq!(w.to_diagram().unwrap(), Diagram::quadrant());
        let w: DiagramWire = serde_json::from_str(r#"{"form":"blob","anchor":[0,0]}"#).unwrap();
        assert!(w.to_diagram().is_err());
    }

    #[test]
    fn subspace_wire_variants() {
        let json = r#"{"window":[0,3,0,3],"margin":1,"symbolic":{"diagram":{"form":"quadrant"},"twist":[1,0]}}"#;
        let m = serde_json::from_str::<SubspaceWire>(json).unwrap().to_subspace().unwrap();
        assert_eq!(m.len(), 12);
        let back = SubspaceWire::from_subspace(&m);
        assert_eq!(back.to_subspace().unwrap(), m);

        let json = r#"{"window":[0,1,0,1],"points":[[1,1]],"symbolic":null}"#;
        let m = serde_json::from_str::<SubspaceWire>(json).unwrap().to_subspace().unwrap();
        assert!(m.symbolic().is_none());
        let json = r#"{"window":[0,1,0,1],"points":[[0,1]],"symbolic":{"diagram":{"form":"quadrant"}}}"#;
        assert!(serde_json::from_str::<SubspaceWire>(json).unwrap().to_subspace().is_err());
    }

    #[test]
    fn pgm_roundtrip() {
        let w = Window::square(-1, 2, 0).unwrap();
        let r = render_diagram(&Diagram::quadrant(), &w);
        assert_eq!(r.pixels.iter().filter(|&&p| p == 255).count(), 9);
        // top-left is (-1, 2), outside; top-right is (2, 2), inside
        assert_eq!(r.pixels[0], 0);
        assert_eq!(r.pixels[3], 255);
        let bytes = r.to_pgm();
        assert!(bytes.starts_with(b"P5\n4 4\n255\n"));
        assert_eq!(Raster::from_pgm(&bytes).unwrap(), r);
    }

    #[test]
    fn case4_theta_kinds() {
        let json = r#"{"M":12,"theta":{"kind":"boxes","boxes":[[0,1,0,2]]},"systems":[]}"#;
        let c: Case4Wire = serde_json::from_str(json).unwrap();
        assert_eq!(c.theta_set().unwrap().count(), 6);
        let json = r#"{"M":12,"theta":{"kind":"complement"},
            "systems":[{"m":1,"n":1,"l":1,"gamma":{"d":12,"runs":[[0,2]]}}]}"#;
        let c: Case4Wire = serde_json::from_str(json).unwrap();
        assert_eq!(c.theta_set().unwrap().count(), 144 - 36);
    }
}
