//! Exact feasibility of the cycle-cover LP.
//!
//! The degree rows alone describe the assignment polytope, whose vertices
//! are cycle covers. The coil functional is linear with integer weights, so
//! its range over the polytope is the interval between its minimum and
//! maximum over cycle covers. Adding the single coil row keeps the LP
//! feasible exactly when `c` lies in that interval. Both endpoints come from
//! an integer Hungarian solve on the out-copy/in-copy bipartite graph.

use crate::digraph::WhirlDigraph;
use crate::error::{Result, WhirlError};
use crate::geometry::Cell;
use crate::tours::{verify_tour, Tour};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// A successor permutation; `succ[v]` is the dense index of the vertex after `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleCover {
    pub succ: Vec<usize>,
}

impl CycleCover {
    /// The cycles of the cover, each starting at its smallest vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.succ.len()];
        let mut out = Vec::new();
        for start in 0..self.succ.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cyc.push(v);
                v = self.succ[v];
            }
            out.push(cyc);
        }
        out
    }

    /// Arc ids used by the cover, indexed by tail.
    pub fn arc_ids(&self, g: &WhirlDigraph) -> Result<Vec<usize>> {
        validate_cover(g, self)
    }

    pub fn to_json(&self, g: &WhirlDigraph) -> String {
        let vs = g.vertices();
        let doc = CoverJson {
            n: g.n(),
            succ: self
                .succ
                .iter()
                .enumerate()
                .map(|(u, &v)| [vs[u].i, vs[u].j, vs[v].i, vs[v].j])
                .collect(),
        };
        serde_json::to_string(&doc).expect("cover serializes")
    }

    pub fn from_json(g: &WhirlDigraph, text: &str) -> Result<Self> {
        let doc: CoverJson = serde_json::from_str(text).map_err(|e| WhirlError::Parse(e.to_string()))?;
        if doc.n != g.n() {
            return Err(WhirlError::SizeMismatch { cert: doc.n, graph: g.n() });
        }
        let mut succ = vec![usize::MAX; g.vertex_count()];
        for [i, j, k, l] in doc.succ {
            let u = g.require_vertex(Cell::new(i, j))?;
            let v = g.require_vertex(Cell::new(k, l))?;
            if succ[u] != usize::MAX {
                return Err(WhirlError::InvalidCover(format!("({i}, {j}) listed twice")));
            }
            succ[u] = v;
        }
        if succ.contains(&usize::MAX) {
            return Err(WhirlError::InvalidCover("some vertex has no successor".into()));
        }
        let cover = CycleCover { succ };
        validate_cover(g, &cover)?;
        Ok(cover)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CoverJson {
    n: i64,
    succ: Vec<[i64; 4]>,
}

fn validate_cover(g: &WhirlDigraph, cover: &CycleCover) -> Result<Vec<usize>> {
    let nv = g.vertex_count();
    if cover.succ.len() != nv {
        return Err(WhirlError::InvalidCover(format!(
            "{} successors for {nv} vertices",
            cover.succ.len()
        )));
    }
    let mut hit = vec![false; nv];
    let mut ids = Vec::with_capacity(nv);
    for (u, &v) in cover.succ.iter().enumerate() {
        if v >= nv || std::mem::replace(&mut hit[v], true) {
            return Err(WhirlError::InvalidCover("successor map is not a permutation".into()));
        }
        let (tu, hv) = (g.vertices()[u], g.vertices()[v]);
        let arc = g.find_arc(tu, hv).ok_or(WhirlError::NotAnArc(tu, hv))?;
        ids.push(arc.id);
    }
    Ok(ids)
}

pub fn coil_of_cover(g: &WhirlDigraph, cover: &CycleCover) -> Result<i64> {
    let ids = validate_cover(g, cover)?;
    Ok(ids.iter().map(|&id| g.arc(id).w as i64).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoilInterval {
    pub min_coil: i64,
    pub max_coil: i64,
    pub argmin: CycleCover,
    pub argmax: CycleCover,
}

#[derive(Debug, Clone)]
struct Assignment {
    succ: Vec<usize>,
    cost: i64,
}

const UNREACHED: i64 = i64::MAX;

/// Minimum-cost perfect matching of out-copies to in-copies along arcs.
///
/// Shortest-augmenting-path Hungarian method with integer potentials. Each
/// row relaxes its arcs in id order and only strict improvements replace a
/// label, so the result is deterministic. The returned optimum is checked
/// against its own dual (feasible reduced costs, tight on matched arcs).
fn min_cost_assignment(g: &WhirlDigraph, cost: impl Fn(u8) -> i64) -> Result<Assignment> {
    let nv = g.vertex_count();
    // 1-based rows and columns; index 0 is the virtual root.
    let mut row_pot = vec![0i64; nv + 1];
    let mut col_pot = vec![0i64; nv + 1];
    let mut col_match = vec![0usize; nv + 1];
    let mut way = vec![0usize; nv + 1];
    let arc_cost = |id: usize| cost(g.arc(id).w);

    for row in 1..=nv {
        col_match[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![UNREACHED; nv + 1];
        let mut used = vec![false; nv + 1];
        loop {
            used[j0] = true;
            let i0 = col_match[j0];
            for &id in g.out_ids(i0 - 1) {
                let j = g.head_index(g.arc(id)) + 1;
                if used[j] {
                    continue;
                }
                let reduced = arc_cost(id) - row_pot[i0] - col_pot[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
            }
            let mut delta = UNREACHED;
            let mut j1 = 0;
            for j in 1..=nv {
                if !used[j] && minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if delta == UNREACHED {
                let v = g.vertices()[row - 1];
                return Err(WhirlError::NoCycleCover(format!(
                    "no augmenting path from ({}, {}); some vertex cannot be covered",
                    v.i, v.j
                )));
            }
            for j in 0..=nv {
                if used[j] {
                    row_pot[col_match[j]] += delta;
                    col_pot[j] -= delta;
                } else if minv[j] != UNREACHED {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_match[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_match[j0] = col_match[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut succ = vec![usize::MAX; nv];
    for j in 1..=nv {
        succ[col_match[j] - 1] = j - 1;
    }
    let mut total = 0;
    for (u, &v) in succ.iter().enumerate() {
        let arc = g.find_arc(g.vertices()[u], g.vertices()[v]).expect("matched pair is an arc");
        let c = arc_cost(arc.id);
        total += c;
        assert_eq!(c - row_pot[u + 1] - col_pot[v + 1], 0, "matched arc not tight");
    }
    for arc in g.arcs() {
        let (u, v) = (g.tail_index(arc) + 1, g.head_index(arc) + 1);
        assert!(arc_cost(arc.id) - row_pot[u] - col_pot[v] >= 0, "dual infeasible");
    }
    let dual: i64 = row_pot[1..].iter().sum::<i64>() + col_pot[1..].iter().sum::<i64>();
    assert_eq!(dual, total, "primal and dual objectives differ");
    Ok(Assignment { succ, cost: total })
}

pub fn coil_interval(g: &WhirlDigraph) -> Result<CoilInterval> {
    let lo = min_cost_assignment(g, |w| w as i64)?;
    let hi = min_cost_assignment(g, |w| -(w as i64))?;
    let argmin = CycleCover { succ: lo.succ };
    let argmax = CycleCover { succ: hi.succ };
    let (min_coil, max_coil) = (lo.cost, -hi.cost);
    assert_eq!(coil_of_cover(g, &argmin)?, min_coil);
    assert_eq!(coil_of_cover(g, &argmax)?, max_coil);
    assert!(min_coil <= max_coil);
    Ok(CoilInterval { min_coil, max_coil, argmin, argmax })
}

/// A point of the LP relaxation, one exact value per arc id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalAssignment {
    pub x: Vec<Ratio<i64>>,
}

/// Residuals of an assignment against every LP row; all zero when feasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub bad_in_rows: Vec<Cell>,
    pub bad_out_rows: Vec<Cell>,
    pub coil: Ratio<i64>,
    pub out_of_box: Vec<usize>,
}

impl RowCheck {
    pub fn satisfies(&self, c: i64) -> bool {
        self.bad_in_rows.is_empty()
            && self.bad_out_rows.is_empty()
            && self.out_of_box.is_empty()
            && self.coil == Ratio::from_integer(c)
    }
}

impl FractionalAssignment {
    pub fn from_cover(g: &WhirlDigraph, cover: &CycleCover) -> Result<Self> {
        let mut x = vec![Ratio::from_integer(0); g.arcs().len()];
        for id in validate_cover(g, cover)? {
            x[id] = Ratio::from_integer(1);
        }
        Ok(FractionalAssignment { x })
    }

    pub fn check_rows(&self, g: &WhirlDigraph) -> RowCheck {
        let one = Ratio::from_integer(1);
        let zero = Ratio::from_integer(0);
        let row_sum = |ids: &[usize]| ids.iter().map(|&id| self.x[id]).sum::<Ratio<i64>>();
        let mut check = RowCheck {
            bad_in_rows: Vec::new(),
            bad_out_rows: Vec::new(),
            coil: g.arcs().iter().map(|a| self.x[a.id] * a.w as i64).sum(),
            out_of_box: (0..self.x.len()).filter(|&k| self.x[k] < zero || self.x[k] > one).collect(),
        };
        for (k, &v) in g.vertices().iter().enumerate() {
            if row_sum(g.in_ids(k)) != one {
                check.bad_in_rows.push(v);
            }
            if row_sum(g.out_ids(k)) != one {
                check.bad_out_rows.push(v);
            }
        }
        check
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpDecision {
    pub n: i64,
    pub c: i64,
    pub feasible: bool,
    pub min_coil: i64,
    pub max_coil: i64,
    /// Present exactly when feasible.
    pub witness: Option<FractionalAssignment>,
}

impl LpDecision {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            n: i64,
            c: i64,
            feasible: bool,
            min_coil: i64,
            max_coil: i64,
        }
        let doc = Doc {
            n: self.n,
            c: self.c,
            feasible: self.feasible,
            min_coil: self.min_coil,
            max_coil: self.max_coil,
        };
        serde_json::to_string(&doc).expect("decision serializes")
    }
}

pub fn lp_feasible(g: &WhirlDigraph, c: i64) -> Result<LpDecision> {
    let iv = coil_interval(g)?;
    lp_feasible_from(g, &iv, c)
}

/// Same as [`lp_feasible`] for a precomputed interval.
pub fn lp_feasible_from(g: &WhirlDigraph, iv: &CoilInterval, c: i64) -> Result<LpDecision> {
    let feasible = iv.min_coil <= c && c <= iv.max_coil;
    let witness = if feasible {
        let lo = FractionalAssignment::from_cover(g, &iv.argmin)?;
        let hi = FractionalAssignment::from_cover(g, &iv.argmax)?;
        let lambda = if iv.max_coil == iv.min_coil {
            Ratio::from_integer(1)
        } else {
            Ratio::new(iv.max_coil - c, iv.max_coil - iv.min_coil)
        };
        let rest = Ratio::from_integer(1) - lambda;
        let x = lo.x.iter().zip(&hi.x).map(|(&a, &b)| lambda * a + rest * b).collect();
        let witness = FractionalAssignment { x };
        assert!(witness.check_rows(g).satisfies(c), "convex combination leaves the LP");
        Some(witness)
    } else {
        None
    };
    Ok(LpDecision { n: g.n(), c, feasible, min_coil: iv.min_coil, max_coil: iv.max_coil, witness })
}

/// The tour's indicator vector satisfies every LP row at `c = tour.coil`.
pub fn check_reduction(g: &WhirlDigraph, tour: &Tour) -> Result<bool> {
    let checked = verify_tour(g, &tour.cells)?;
    let mut succ = vec![0; g.vertex_count()];
    let k = checked.cells.len();
    for t in 0..k {
        let u = g.require_vertex(checked.cells[t])?;
        succ[u] = g.require_vertex(checked.cells[(t + 1) % k])?;
    }
    let x = FractionalAssignment::from_cover(g, &CycleCover { succ })?;
    Ok(tour.coil == checked.coil && x.check_rows(g).satisfies(checked.coil))
}
