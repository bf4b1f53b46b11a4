use crate::geometry::Cell;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WhirlError {
    #[error("board side {0} is too small (need n >= 3)")]
    BoardTooSmall(i64),
    #[error("operation requires an even board side, got n = {0}")]
    OddBoard(i64),
    #[error("cell ({}, {}) is not a vertex of the {n}x{n} board", .cell.i, .cell.j)]
    OffBoard { cell: Cell, n: i64 },
    #[error("({}, {}) -> ({}, {}) is not a knight displacement", .0.i, .0.j, .1.i, .1.j)]
    NotKnightStep(Cell, Cell),
    #[error("({}, {}) -> ({}, {}) is not an arc of the whirling digraph", .0.i, .0.j, .1.i, .1.j)]
    NotAnArc(Cell, Cell),
    #[error("n = {n} is not in the residue class {residue} mod 8 (n >= {min})")]
    WrongResidue { n: i64, residue: i64, min: i64 },
    #[error("certificate is for n = {cert}, digraph has n = {graph}")]
    SizeMismatch { cert: i64, graph: i64 },
    #[error("no cycle cover exists: {0}")]
    NoCycleCover(String),
    #[error("invalid cycle cover: {0}")]
    InvalidCover(String),
    #[error("invalid tour: {0}")]
    InvalidTour(String),
    #[error("cycle-cover enumeration exceeded cap of {0}")]
    CapExceeded(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, WhirlError>;
