//! Whirling tours: validation, winding counts, cycle-cover enumeration and
//! a budgeted backtracking search.
//!
//! Search results are one-sided: a returned tour is verified, while `None`
//! only means the budget ran out or the space was exhausted under the
//! given coil target.

use crate::digraph::WhirlDigraph;
use crate::error::{Result, WhirlError};
use crate::geometry::{crosses_ray, Cell, Ray};
use crate::polytope::CycleCover;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    pub cells: Vec<Cell>,
    pub coil: i64,
}

impl Tour {
    pub fn to_json(&self, n: i64) -> String {
        let doc = TourJson { n, cells: self.cells.iter().map(|c| [c.i, c.j]).collect(), coil: self.coil };
        serde_json::to_string(&doc).expect("tour serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TourJson {
    pub n: i64,
    pub cells: Vec<[i64; 2]>,
    pub coil: i64,
}

impl TourJson {
    pub fn parse(text: &str) -> Result<TourJson> {
        serde_json::from_str(text).map_err(|e| WhirlError::Parse(e.to_string()))
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.cells.iter().map(|&[i, j]| Cell::new(i, j)).collect()
    }
}

/// Validate a cyclic cell sequence as a Hamiltonian cycle of `g` and count its coils.
pub fn verify_tour(g: &WhirlDigraph, cells: &[Cell]) -> Result<Tour> {
    let nv = g.vertex_count();
    let mut seen = vec![false; nv];
    for &c in cells {
        let k = g
            .vertex_index(c)
            .ok_or_else(|| WhirlError::InvalidTour(format!("({}, {}) is not a vertex", c.i, c.j)))?;
        if std::mem::replace(&mut seen[k], true) {
            return Err(WhirlError::InvalidTour(format!("vertex ({}, {}) repeated", c.i, c.j)));
        }
    }
    if let Some(k) = seen.iter().position(|&s| !s) {
        let c = g.vertices()[k];
        return Err(WhirlError::InvalidTour(format!("vertex ({}, {}) missing", c.i, c.j)));
    }
    let mut coil = 0;
    for t in 0..cells.len() {
        let (u, v) = (cells[t], cells[(t + 1) % cells.len()]);
        let arc = g.find_arc(u, v).ok_or_else(|| {
            WhirlError::InvalidTour(format!("step ({}, {}) -> ({}, {}) is not an arc", u.i, u.j, v.i, v.j))
        })?;
        coil += arc.w as i64;
    }
    Ok(Tour { cells: cells.to_vec(), coil })
}

fn check_ray(g: &WhirlDigraph, ray: Ray) -> Result<()> {
    if !g.geometry().is_even() && ray != Ray::North {
        return Err(WhirlError::Unsupported(format!(
            "only the north ray is defined on odd boards (n = {})",
            g.n()
        )));
    }
    Ok(())
}

/// Number of tour arcs crossing the given open ray from the pivot.
pub fn winding_by_ray(g: &WhirlDigraph, tour: &Tour, ray: Ray) -> Result<i64> {
    check_ray(g, ray)?;
    let k = tour.cells.len();
    Ok((0..k)
        .filter(|&t| crosses_ray(g.geometry(), tour.cells[t], tour.cells[(t + 1) % k], ray))
        .count() as i64)
}

/// Total ray crossings over all cycles of a cover.
pub fn cover_winding_by_ray(g: &WhirlDigraph, cover: &CycleCover, ray: Ray) -> Result<i64> {
    check_ray(g, ray)?;
    let vs = g.vertices();
    Ok(cover
        .succ
        .iter()
        .enumerate()
        .filter(|&(u, &v)| crosses_ray(g.geometry(), vs[u], vs[v], ray))
        .count() as i64)
}

/// Every cycle cover of `g`, in lexicographic successor order. Fails once
/// more than `cap` covers have been found.
pub fn enumerate_cycle_covers(g: &WhirlDigraph, cap: usize) -> Result<Vec<CycleCover>> {
    fn rec(
        g: &WhirlDigraph,
        v: usize,
        succ: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<CycleCover>,
        cap: usize,
    ) -> Result<()> {
        if v == succ.len() {
            if out.len() == cap {
                return Err(WhirlError::CapExceeded(cap));
            }
            out.push(CycleCover { succ: succ.clone() });
            return Ok(());
        }
        for &id in g.out_ids(v) {
            let h = g.head_index(g.arc(id));
            if used[h] {
                continue;
            }
            used[h] = true;
            succ[v] = h;
            rec(g, v + 1, succ, used, out, cap)?;
            used[h] = false;
        }
        Ok(())
    }
    let nv = g.vertex_count();
    let mut out = Vec::new();
    rec(g, 0, &mut vec![0; nv], &mut vec![false; nv], &mut out, cap)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    /// Top-level branch this report comes from.
    pub branch: usize,
    pub nodes: u64,
    pub depth: usize,
}

impl std::fmt::Display for Progress {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "branch={} nodes={} depth={}", self.branch, self.nodes, self.depth)
    }
}

pub struct SearchOptions<'a> {
    pub coil_target: Option<i64>,
    /// Maximum node expansions, shared across all branches.
    pub budget: u64,
    pub seed: u64,
    /// Worker threads; does not affect the result.
    pub threads: usize,
    /// Report every this many expansions per branch; 0 disables.
    pub progress_every: u64,
    pub progress: Option<&'a (dyn Fn(Progress) + Sync)>,
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions {
            coil_target: None,
            budget: 1_000_000,
            seed: 0,
            threads: 1,
            progress_every: 0,
            progress: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub tour: Option<Tour>,
    pub nodes: u64,
    /// True when every branch finished without hitting its budget share,
    /// i.e. the search space was exhausted.
    pub exhausted: bool,
}

/// Depth-first search for a whirling tour from the first vertex.
///
/// The root's successors are fixed in heuristic order and the budget is
/// split evenly over them; each branch is searched independently and the
/// lowest-index branch that succeeds supplies the tour. This makes the
/// result independent of `threads`.
pub fn search_tour(g: &WhirlDigraph, opts: &SearchOptions) -> Result<SearchOutcome> {
    if !g.geometry().is_even() && g.n() != 3 {
        return Err(WhirlError::OddBoard(g.n()));
    }
    if opts.budget == 0 {
        return Err(WhirlError::Unsupported("search budget must be at least 1".into()));
    }
    let keys = tie_keys(g, opts.seed);
    let mut root = SearchState::new(g, opts.coil_target, &keys);
    let Some(branches) = root.candidates() else {
        return Ok(SearchOutcome { tour: None, nodes: 1, exhausted: true });
    };
    if branches.is_empty() {
        return Ok(SearchOutcome { tour: None, nodes: 1, exhausted: true });
    }

    let rest = opts.budget - 1;
    let k = branches.len() as u64;
    let share = |b: usize| rest / k + u64::from((b as u64) < rest % k);

    let results: Vec<Mutex<Option<BranchResult>>> = branches.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let worker = || loop {
        let b = next.fetch_add(1, Ordering::SeqCst);
        if b >= branches.len() {
            break;
        }
        let mut st = SearchState::new(g, opts.coil_target, &keys);
        st.push(branches[b]);
        let mut run = BranchRun {
            budget: share(b),
            nodes: 0,
            out_of_budget: false,
            branch: b,
            best: &best,
            opts,
        };
        let found = run.dfs(&mut st);
        if found {
            best.fetch_min(b, Ordering::SeqCst);
        }
        let cells = found.then(|| st.path.iter().map(|&v| g.vertices()[v]).collect::<Vec<_>>());
        *results[b].lock().unwrap() = Some(BranchResult {
            cells,
            nodes: run.nodes,
            complete: !run.out_of_budget,
        });
    };
    let threads = opts.threads.clamp(1, branches.len());
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }

    let results: Vec<BranchResult> =
        results.into_iter().map(|m| m.into_inner().unwrap().expect("every branch ran")).collect();
    let winner = results.iter().position(|r| r.cells.is_some());
    // Branches after the winner may have stopped early; report only work that decides the result.
    let decisive = winner.map_or(results.len(), |w| w + 1);
    let nodes = 1 + results[..decisive].iter().map(|r| r.nodes).sum::<u64>();
    let tour = match winner {
        Some(w) => Some(verify_tour(g, results[w].cells.as_ref().unwrap())?),
        None => None,
    };
    let exhausted = winner.is_none() && results.iter().all(|r| r.complete);
    Ok(SearchOutcome { tour, nodes, exhausted })
}

struct BranchResult {
    cells: Option<Vec<Cell>>,
    nodes: u64,
    complete: bool,
}

fn tie_keys(g: &WhirlDigraph, seed: u64) -> Vec<u64> {
    if seed == 0 {
        return (0..g.arcs().len() as u64).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.arcs().len()).map(|_| rng.next_u64()).collect()
}

struct SearchState<'g> {
    g: &'g WhirlDigraph,
    keys: &'g [u64],
    target: Option<i64>,
    start: usize,
    path: Vec<usize>,
    visited: Vec<bool>,
    /// In-arcs whose tail is unvisited or current.
    in_avail: Vec<u32>,
    /// Out-arcs whose head is unvisited or the start.
    out_avail: Vec<u32>,
    /// Crossing out-arcs whose head is unvisited or the start.
    cross_avail: Vec<u32>,
    /// Tail-available vertices with `cross_avail > 0`.
    cross_capable: i64,
    coil: i64,
}

impl<'g> SearchState<'g> {
    fn new(g: &'g WhirlDigraph, target: Option<i64>, keys: &'g [u64]) -> Self {
        let nv = g.vertex_count();
        let in_avail: Vec<u32> = (0..nv).map(|v| g.in_ids(v).len() as u32).collect();
        let out_avail: Vec<u32> = (0..nv).map(|v| g.out_ids(v).len() as u32).collect();
        let cross_avail: Vec<u32> =
            (0..nv).map(|v| g.out_ids(v).iter().filter(|&&id| g.arc(id).w == 1).count() as u32).collect();
        let cross_capable = cross_avail.iter().filter(|&&c| c > 0).count() as i64;
        let mut visited = vec![false; nv];
        visited[0] = true;
        SearchState {
            g,
            keys,
            target,
            start: 0,
            path: vec![0],
            visited,
            in_avail,
            out_avail,
            cross_avail,
            cross_capable,
            coil: 0,
        }
    }

    fn current(&self) -> usize {
        *self.path.last().unwrap()
    }

    fn complete(&self) -> bool {
        self.path.len() == self.g.vertex_count()
    }

    fn head_open(&self, v: usize) -> bool {
        !self.visited[v] || v == self.start
    }

    /// Extend the path by arc `id` out of the current vertex.
    fn push(&mut self, id: usize) {
        let g = self.g;
        let v = self.current();
        let x = g.head_index(g.arc(id));
        for &o in g.out_ids(v) {
            self.in_avail[g.head_index(g.arc(o))] -= 1;
        }
        if self.cross_avail[v] > 0 {
            self.cross_capable -= 1;
        }
        if x != self.start {
            for &i in g.in_ids(x) {
                let z = g.tail_index(g.arc(i));
                self.out_avail[z] -= 1;
                if g.arc(i).w == 1 {
                    self.cross_avail[z] -= 1;
                    if self.cross_avail[z] == 0 && !self.visited[z] {
                        self.cross_capable -= 1;
                    }
                }
            }
            self.visited[x] = true;
        }
        self.coil += g.arc(id).w as i64;
        self.path.push(x);
    }

    fn pop(&mut self, id: usize) {
        let g = self.g;
        let x = self.path.pop().unwrap();
        let v = self.current();
        self.coil -= g.arc(id).w as i64;
        if x != self.start {
            self.visited[x] = false;
            for &i in g.in_ids(x) {
                let z = g.tail_index(g.arc(i));
                self.out_avail[z] += 1;
                if g.arc(i).w == 1 {
                    if self.cross_avail[z] == 0 && !self.visited[z] {
                        self.cross_capable += 1;
                    }
                    self.cross_avail[z] += 1;
                }
            }
        }
        if self.cross_avail[v] > 0 {
            self.cross_capable += 1;
        }
        for &o in g.out_ids(v) {
            self.in_avail[g.head_index(g.arc(o))] += 1;
        }
    }

    /// Whether some open vertex lost its last way in or out.
    fn dead_after(&self, id: usize) -> bool {
        let g = self.g;
        let x = g.head_index(g.arc(id));
        let v = self.path[self.path.len() - 2];
        if g.out_ids(v).iter().any(|&o| {
            let y = g.head_index(g.arc(o));
            self.head_open(y) && y != x && self.in_avail[y] == 0
        }) {
            return true;
        }
        g.in_ids(x).iter().any(|&i| {
            let z = g.tail_index(g.arc(i));
            !self.visited[z] && self.out_avail[z] == 0
        })
    }

    fn coil_hopeless(&self) -> bool {
        match self.target {
            Some(t) => self.coil > t || self.coil + self.cross_capable < t,
            None => false,
        }
    }

    /// Admissible next arcs in trial order, or `None` if the node is dead.
    fn candidates(&mut self) -> Option<Vec<usize>> {
        let g = self.g;
        let v = self.current();
        let remaining = g.vertex_count() - self.path.len();
        if remaining == 0 {
            let close = g.out_ids(v).iter().copied().find(|&o| g.head_index(g.arc(o)) == self.start);
            return Some(close.into_iter().collect());
        }
        let mut forced = None;
        for &o in g.out_ids(v) {
            let y = g.head_index(g.arc(o));
            if self.head_open(y) && self.in_avail[y] == 1 {
                if y == self.start || forced.is_some() {
                    return None;
                }
                forced = Some(o);
            }
        }
        let mut cands: Vec<usize> = match forced {
            Some(o) => vec![o],
            None => g
                .out_ids(v)
                .iter()
                .copied()
                .filter(|&o| !self.visited[g.head_index(g.arc(o))])
                .collect(),
        };
        let onward = |o: usize| {
            let y = g.head_index(g.arc(o));
            g.out_ids(y).iter().filter(|&&p| !self.visited[g.head_index(g.arc(p))]).count()
        };
        cands.sort_by_key(|&o| (onward(o), self.keys[o]));
        Some(cands)
    }
}

struct BranchRun<'a, 'o> {
    budget: u64,
    nodes: u64,
    out_of_budget: bool,
    branch: usize,
    best: &'a AtomicUsize,
    opts: &'a SearchOptions<'o>,
}

impl BranchRun<'_, '_> {
    fn dfs(&mut self, st: &mut SearchState) -> bool {
        if st.path.len() > st.g.vertex_count() {
            return st.target.is_none_or(|t| st.coil == t);
        }
        if self.nodes >= self.budget || self.best.load(Ordering::Relaxed) < self.branch {
            self.out_of_budget = true;
            return false;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(self.opts.progress_every) {
            if let Some(report) = self.opts.progress {
                report(Progress { branch: self.branch, nodes: self.nodes, depth: st.path.len() });
            }
        }
        if st.coil_hopeless() {
            return false;
        }
        let Some(cands) = st.candidates() else {
            return false;
        };
        let closing = st.complete();
        for id in cands {
            st.push(id);
            if (closing || !st.dead_after(id)) && self.dfs(st) {
                if closing {
                    // Drop the repeated start so `path` is the cyclic sequence.
                    st.path.pop();
                }
                return true;
            }
            st.pop(id);
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}
