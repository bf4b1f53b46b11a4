//! Exact integer geometry on an `n x n` board.
//!
//! Every coordinate is handled in doubled form relative to the pivot,
//! `(2i - (n-1), 2j - (n-1))`, so the half-integer pivot of an even board
//! never needs a fractional type. Rows grow downward, columns rightward.

use crate::error::{Result, WhirlError};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub i: i64,
    pub j: i64,
}

impl Cell {
    pub const fn new(i: i64, j: i64) -> Self {
        Cell { i, j }
    }

    pub fn step(self, s: KnightStep) -> Cell {
        Cell::new(self.i + s.di, self.j + s.dj)
    }
}

impl From<(i64, i64)> for Cell {
    fn from((i, j): (i64, i64)) -> Self {
        Cell::new(i, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KnightStep {
    pub di: i64,
    pub dj: i64,
}

impl KnightStep {
    pub const fn new(di: i64, dj: i64) -> Self {
        KnightStep { di, dj }
    }

    /// The step from `u` to `v`, if it is a knight displacement.
    pub fn between(u: Cell, v: Cell) -> Option<KnightStep> {
        let (di, dj) = (v.i - u.i, v.j - u.j);
        (di * di + dj * dj == 5).then_some(KnightStep { di, dj })
    }
}

/// The eight knight steps, sorted row-major on `(di, dj)`.
pub const KNIGHT_STEPS: [KnightStep; 8] = [
    KnightStep::new(-2, -1),
    KnightStep::new(-2, 1),
    KnightStep::new(-1, -2),
    KnightStep::new(-1, 2),
    KnightStep::new(1, -2),
    KnightStep::new(1, 2),
    KnightStep::new(2, -1),
    KnightStep::new(2, 1),
];

pub fn knight_steps() -> Vec<KnightStep> {
    KNIGHT_STEPS.to_vec()
}

/// One of the four open axis-aligned rays leaving the pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ray {
    North,
    East,
    South,
    West,
}

impl Ray {
    pub const ALL: [Ray; 4] = [Ray::North, Ray::East, Ray::South, Ray::West];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoardGeometry {
    pub n: i64,
    /// Pivot coordinates doubled: `(n-1, n-1)`.
    pub pivot2: (i64, i64),
    /// `n / 2` for even boards.
    pub h: Option<i64>,
}

impl BoardGeometry {
    pub fn new(n: i64) -> Result<Self> {
        if n < 3 {
            return Err(WhirlError::BoardTooSmall(n));
        }
        Ok(BoardGeometry {
            n,
            pivot2: (n - 1, n - 1),
            h: (n % 2 == 0).then_some(n / 2),
        })
    }

    pub fn is_even(&self) -> bool {
        self.n % 2 == 0
    }

    pub fn half(&self) -> Result<i64> {
        self.h.ok_or(WhirlError::OddBoard(self.n))
    }

    pub fn on_board(&self, c: Cell) -> bool {
        (0..self.n).contains(&c.i) && (0..self.n).contains(&c.j)
    }

    /// The centre cell of an odd board, which coincides with the pivot.
    pub fn centre(&self) -> Option<Cell> {
        (!self.is_even()).then(|| Cell::new((self.n - 1) / 2, (self.n - 1) / 2))
    }

    /// Doubled coordinates relative to the pivot.
    pub fn rel(&self, c: Cell) -> (i64, i64) {
        (2 * c.i - self.pivot2.0, 2 * c.j - self.pivot2.1)
    }

    fn check_pair(&self, u: Cell, v: Cell) -> Result<KnightStep> {
        for c in [u, v] {
            if !self.on_board(c) {
                return Err(WhirlError::OffBoard { cell: c, n: self.n });
            }
        }
        KnightStep::between(u, v).ok_or(WhirlError::NotKnightStep(u, v))
    }
}

/// Four times `(u - p) x (v - p)`, computed on doubled coordinates.
pub fn cross4(geom: &BoardGeometry, u: Cell, v: Cell) -> i64 {
    let (au, bu) = geom.rel(u);
    let (av, bv) = geom.rel(v);
    au * bv - av * bu
}

/// Strict counter-clockwise test about the pivot. A zero cross product
/// (only possible on odd boards) is not CCW.
pub fn is_ccw(geom: &BoardGeometry, u: Cell, v: Cell) -> Result<bool> {
    geom.check_pair(u, v)?;
    Ok(cross4(geom, u, v) > 0)
}

/// Whether the segment `u -> v` crosses the given open ray from the pivot.
///
/// A point on the ray's supporting line is assigned to the non-negative
/// side (half-open rule), so a polyline passing through a point of the ray
/// is counted exactly once. On even boards no cell lies on any such line
/// and the rule reduces to strict straddling.
pub fn crosses_ray(geom: &BoardGeometry, u: Cell, v: Cell, ray: Ray) -> bool {
    let (au, bu) = geom.rel(u);
    let (av, bv) = geom.rel(v);
    // s: signed offset across the ray's line; t: position along the ray.
    let ((su, tu), (sv, tv)) = match ray {
        Ray::North => ((bu, -au), (bv, -av)),
        Ray::South => ((bu, au), (bv, av)),
        Ray::East => ((au, bu), (av, bv)),
        Ray::West => ((au, -bu), (av, -bv)),
    };
    if (su >= 0) == (sv >= 0) {
        return false;
    }
    // t at s = 0 is (tu*sv - tv*su) / (sv - su); require it > 0.
    (tu * sv - tv * su) * (sv - su).signum() > 0
}

/// Plumb-line weight of an arc: 1 if it crosses the north ray, else 0.
pub fn crossing_weight(geom: &BoardGeometry, u: Cell, v: Cell) -> Result<u8> {
    if !is_ccw(geom, u, v)? {
        return Err(WhirlError::NotAnArc(u, v));
    }
    Ok(crosses_ray(geom, u, v, Ray::North) as u8)
}

/// Row coordinate at which the segment `u -> v` meets the pivot column,
/// or `None` if it does not reach across.
pub fn crossing_height(geom: &BoardGeometry, u: Cell, v: Cell) -> Result<Option<Ratio<i64>>> {
    let s = geom.check_pair(u, v)?;
    let (_, bu) = geom.rel(u);
    let (_, bv) = geom.rel(v);
    if (bu >= 0) == (bv >= 0) {
        return Ok(None);
    }
    // i_u + di * (q - j_u) / dj with q = (n-1)/2.
    let num = 2 * u.i * s.dj + s.di * (geom.pivot2.1 - 2 * u.j);
    Ok(Some(Ratio::new(num, 2 * s.dj)))
}

/// Counterexamples found by an exhaustive sweep of the column lemma on one board.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub n: i64,
    /// Cells `(i, h-1)` and `(i, h)` with `i <= h-2` that were examined.
    pub cells_checked: usize,
    pub arcs_checked: usize,
    /// In-arcs of west-column cells that leave `{h, h+1}` or miss the north ray.
    pub west_violations: Vec<(Cell, Cell)>,
    /// Out-arcs of east-column cells that leave `{h-1, h-2}` or miss the north ray.
    pub east_violations: Vec<(Cell, Cell)>,
    /// West-column cells whose set of CCW in-steps differs from the expected four.
    pub census_violations: Vec<Cell>,
    /// `Some(true)` when the sharpness arc `(h-3, h-2) -> (h-1, h-1)` is CCW
    /// and starts west of the pivot column; `None` below n = 8.
    pub sharpness_witness: Option<bool>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.west_violations.is_empty()
            && self.east_violations.is_empty()
            && self.census_violations.is_empty()
            && self.sharpness_witness != Some(false)
    }
}

/// In-steps that are CCW into every west-column cell above the pivot row.
pub const WEST_IN_STEPS: [KnightStep; 4] = [
    KnightStep::new(-2, -1),
    KnightStep::new(-1, -2),
    KnightStep::new(1, -2),
    KnightStep::new(2, -1),
];

/// Exhaustively check the two-column lemma on an even board: arcs into
/// `(i, h-1)` come from columns `h..=h+1` and cross north; arcs out of
/// `(i, h)` go to columns `h-2..=h-1` and cross north; for every `i <= h-2`.
pub fn check_column_lemma(n: i64) -> Result<LemmaReport> {
    let geom = BoardGeometry::new(n)?;
    let h = geom.half()?;
    let mut report = LemmaReport { n, ..Default::default() };

    for i in 0..=h - 2 {
        let west = Cell::new(i, h - 1);
        let east = Cell::new(i, h);
        report.cells_checked += 2;

        for s in KNIGHT_STEPS {
            // u = west - s, so the arc u -> west uses step s.
            let u = Cell::new(west.i - s.di, west.j - s.dj);
            if geom.on_board(u) && is_ccw(&geom, u, west)? {
                report.arcs_checked += 1;
                let crosses = crossing_weight(&geom, u, west)? == 1;
                if !(h..=h + 1).contains(&u.j) || !crosses {
                    report.west_violations.push((u, west));
                }
            }
            let v = east.step(s);
            if geom.on_board(v) && is_ccw(&geom, east, v)? {
                report.arcs_checked += 1;
                let crosses = crossing_weight(&geom, east, v)? == 1;
                if !(h - 2..=h - 1).contains(&v.j) || !crosses {
                    report.east_violations.push((east, v));
                }
            }
        }
        // The census is over displacements, so it ignores the board edge.
        let census: Vec<KnightStep> = KNIGHT_STEPS
            .into_iter()
            .filter(|&s| cross4(&geom, Cell::new(west.i - s.di, west.j - s.dj), west) > 0)
            .collect();
        if census != WEST_IN_STEPS {
            report.census_violations.push(west);
        }
    }

    if n >= 8 {
        let u = Cell::new(h - 3, h - 2);
        let w = Cell::new(h - 1, h - 1);
        report.sharpness_witness = Some(is_ccw(&geom, u, w)? && u.j < h);
    }
    Ok(report)
}
