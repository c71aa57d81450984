//! Integer lattice points, shift directions and finite windows of `Z^2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent pair `(i, j)` of the monomial `w^i z^j`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub i: i64,
    pub j: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([i, j]: [i64; 2]) -> Self {
        Self { i, j }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.i, p.j]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((i, j): (i64, i64)) -> Self {
        Self { i, j }
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.i + rhs.i, self.j + rhs.j)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.i - rhs.i, self.j - rhs.j)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> Self {
        LatticePoint::new(-self.i, -self.j)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, p: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * p.i, self * p.j)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Multiplication variable: `w` moves the first exponent, `z` the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    W,
    Z,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::W, Direction::Z];

    pub fn unit(self) -> LatticePoint {
        match self {
            Direction::W => LatticePoint::new(1, 0),
            Direction::Z => LatticePoint::new(0, 1),
        }
    }

    pub fn other(self) -> Direction {
        match self {
            Direction::W => Direction::Z,
            Direction::Z => Direction::W,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::W => f.write_str("w"),
            Direction::Z => f.write_str("z"),
        }
    }
}

/// Closed integer box `[i_min, i_max] x [j_min, j_max]` with a ghost band of
/// `margin` lattice steps available to operator powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub i_min: i64,
    pub i_max: i64,
    pub j_min: i64,
    pub j_max: i64,
    pub margin: usize,
}

impl Window {
    pub fn new(i_min: i64, i_max: i64, j_min: i64, j_max: i64, margin: usize) -> Result<Self> {
        let w = Self {
            i_min,
            i_max,
            j_min,
            j_max,
            margin,
        };
        w.validate()?;
        Ok(w)
    }

    /// Square window `[lo, hi]^2`.
    pub fn square(lo: i64, hi: i64, margin: usize) -> Result<Self> {
        Self::new(lo, hi, lo, hi, margin)
    }

    pub fn validate(&self) -> Result<()> {
        if self.i_min > self.i_max || self.j_min > self.j_max {
            return Err(Error::InvalidWindow(format!(
                "empty box [{},{}]x[{},{}]",
                self.i_min, self.i_max, self.j_min, self.j_max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        (self.i_min..=self.i_max).contains(&p.i) && (self.j_min..=self.j_max).contains(&p.j)
    }

    pub fn width(&self) -> usize {
        (self.i_max - self.i_min + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The box grown by `margin` on every side.
    pub fn extended(&self) -> Window {
        let m = self.margin as i64;
        Window {
            i_min: self.i_min - m,
            i_max: self.i_max + m,
            j_min: self.j_min - m,
            j_max: self.j_max + m,
            margin: 0,
        }
    }

    /// The box shrunk by `k` on every side, or `None` if nothing is left.
    pub fn shrunk(&self, k: i64) -> Option<Window> {
        let w = Window {
            i_min: self.i_min + k,
            i_max: self.i_max - k,
            j_min: self.j_min + k,
            j_max: self.j_max - k,
            margin: self.margin,
        };
        w.validate().ok().map(|_| w)
    }

    /// Points in column-major order: `i` outer, `j` inner (the `Ord` of
    /// [`LatticePoint`]).
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (self.i_min..=self.i_max)
            .flat_map(move |i| (self.j_min..=self.j_max).map(move |j| LatticePoint::new(i, j)))
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
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}..{}]x[{}..{}] (margin {})",
            self.i_min, self.i_max, self.j_min, self.j_max, self.margin
        )
    }
}
