//! The whirling knight's digraph: counter-clockwise knight arcs about the
//! board centre, each tagged with its north plumb-line weight.

use crate::error::{Result, WhirlError};
use crate::geometry::{crosses_ray, is_ccw, BoardGeometry, Cell, Ray, KNIGHT_STEPS};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: usize,
    pub tail: Cell,
    pub head: Cell,
    /// 1 if the arc crosses the north plumb-line.
    pub w: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhirlDigraph {
    geom: BoardGeometry,
    vertices: Vec<Cell>,
    /// Dense vertex index per board cell (row-major), `None` for the odd-board centre.
    index: Vec<Option<usize>>,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

/// Arcs are ordered by tail (row-major), then by knight-step order.
pub fn build_digraph(n: i64) -> Result<WhirlDigraph> {
    let geom = BoardGeometry::new(n)?;
    let centre = geom.centre();
    let mut vertices = Vec::with_capacity((n * n) as usize);
    let mut index = vec![None; (n * n) as usize];
    for i in 0..n {
        for j in 0..n {
            let c = Cell::new(i, j);
            if Some(c) != centre {
                index[(i * n + j) as usize] = Some(vertices.len());
                vertices.push(c);
            }
        }
    }

    let mut arcs = Vec::new();
    for &u in &vertices {
        for s in KNIGHT_STEPS {
            let v = u.step(s);
            if !geom.on_board(v) || Some(v) == centre {
                continue;
            }
            if is_ccw(&geom, u, v)? {
                arcs.push(Arc {
                    id: arcs.len(),
                    tail: u,
                    head: v,
                    w: crosses_ray(&geom, u, v, Ray::North) as u8,
                });
            }
        }
    }
    Ok(WhirlDigraph::assemble(geom, vertices, index, arcs))
}

impl WhirlDigraph {
    fn assemble(
        geom: BoardGeometry,
        vertices: Vec<Cell>,
        index: Vec<Option<usize>>,
        arcs: Vec<Arc>,
    ) -> Self {
        let mut out_adj = vec![Vec::new(); vertices.len()];
        let mut in_adj = vec![Vec::new(); vertices.len()];
        let n = geom.n;
        for a in &arcs {
            let t = index[(a.tail.i * n + a.tail.j) as usize].expect("tail is a vertex");
            let h = index[(a.head.i * n + a.head.j) as usize].expect("head is a vertex");
            out_adj[t].push(a.id);
            in_adj[h].push(a.id);
        }
        WhirlDigraph { geom, vertices, index, arcs, out_adj, in_adj }
    }

    pub fn n(&self) -> i64 {
        self.geom.n
    }

    pub fn geometry(&self) -> &BoardGeometry {
        &self.geom
    }

    pub fn vertices(&self) -> &[Cell] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> &Arc {
        &self.arcs[id]
    }

    pub fn vertex_index(&self, c: Cell) -> Option<usize> {
        if !self.geom.on_board(c) {
            return None;
        }
        self.index[(c.i * self.geom.n + c.j) as usize]
    }

    pub fn require_vertex(&self, c: Cell) -> Result<usize> {
        self.vertex_index(c).ok_or(WhirlError::OffBoard { cell: c, n: self.geom.n })
    }

    pub fn tail_index(&self, a: &Arc) -> usize {
        self.vertex_index(a.tail).expect("arc tail is a vertex")
    }

    pub fn head_index(&self, a: &Arc) -> usize {
        self.vertex_index(a.head).expect("arc head is a vertex")
    }

    /// Arc ids leaving the vertex with dense index `v`.
    pub fn out_ids(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_ids(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_arcs(&self, v: Cell) -> Result<Vec<Arc>> {
        let k = self.require_vertex(v)?;
        Ok(self.out_adj[k].iter().map(|&id| self.arcs[id]).collect())
    }

    pub fn in_arcs(&self, v: Cell) -> Result<Vec<Arc>> {
        let k = self.require_vertex(v)?;
        Ok(self.in_adj[k].iter().map(|&id| self.arcs[id]).collect())
    }

    pub fn find_arc(&self, u: Cell, v: Cell) -> Option<&Arc> {
        let k = self.vertex_index(u)?;
        self.out_adj[k].iter().map(|&id| &self.arcs[id]).find(|a| a.head == v)
    }

    pub fn coil_weight_vector(&self) -> Vec<u8> {
        self.arcs.iter().map(|a| a.w).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DigraphJson::from(self)).expect("digraph serializes")
    }

    /// Parse the JSON export. The arc list must match the digraph that
    /// `build_digraph(n)` would produce, arc for arc.
    pub fn from_json(text: &str) -> Result<WhirlDigraph> {
        let raw: DigraphJson =
            serde_json::from_str(text).map_err(|e| WhirlError::Parse(e.to_string()))?;
        let g = build_digraph(raw.n)?;
        if DigraphJson::from(&g) != raw {
            return Err(WhirlError::Parse(format!(
                "document does not describe the whirling digraph for n = {}",
                raw.n
            )));
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ArcJson {
    u: [i64; 2],
    v: [i64; 2],
    w: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct DigraphJson {
    n: i64,
    vertices: Vec<[i64; 2]>,
    arcs: Vec<ArcJson>,
}

impl From<&WhirlDigraph> for DigraphJson {
    fn from(g: &WhirlDigraph) -> Self {
        DigraphJson {
            n: g.n(),
            vertices: g.vertices.iter().map(|c| [c.i, c.j]).collect(),
            arcs: g
                .arcs
                .iter()
                .map(|a| ArcJson { u: [a.tail.i, a.tail.j], v: [a.head.i, a.head.j], w: a.w })
                .collect(),
        }
    }
}
