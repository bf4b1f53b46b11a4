//! Farkas certificates for the cycle-cover LP.
//!
//! A certificate `(alpha, beta, gamma)` multiplies the in-degree row of each
//! vertex by `alpha`, the out-degree row by `beta`, and the coil row by
//! `gamma`. It proves the LP infeasible when `alpha[head] + beta[tail] +
//! gamma * w <= 0` holds on every arc while `sum(alpha) + sum(beta) + c *
//! gamma > 0`. Everything here is integer arithmetic.
//!
//! Two closed-form families are provided for `c = n/2`: [`build_t1`] for
//! `n = 8m + 6` (unit blocks flanking the pivot column) and [`build_t2`] for
//! `n = 8m + 4` (a parity-signed north-east triangle plus unit blocks).
//! The 3x3 gadget from [`build_n3_certificate`] uses the three-cell set
//! `H = {(0,0), (1,0), (2,0)}` as displayed, although its source text calls it
//! a two-cell certificate.

use crate::digraph::{Arc, WhirlDigraph};
use crate::error::{Result, WhirlError};
use crate::geometry::Cell;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub n: i64,
    pub c: i64,
    /// In-degree row multipliers; absent cells are zero.
    pub alpha: BTreeMap<Cell, i64>,
    /// Out-degree row multipliers; absent cells are zero.
    pub beta: BTreeMap<Cell, i64>,
    pub gamma: i64,
}

impl FarkasCertificate {
    pub fn zero(n: i64, c: i64) -> Self {
        FarkasCertificate { n, c, alpha: BTreeMap::new(), beta: BTreeMap::new(), gamma: 0 }
    }

    pub fn alpha_at(&self, v: Cell) -> i64 {
        self.alpha.get(&v).copied().unwrap_or(0)
    }

    pub fn beta_at(&self, v: Cell) -> i64 {
        self.beta.get(&v).copied().unwrap_or(0)
    }

    pub fn alpha_sum(&self) -> i64 {
        self.alpha.values().sum()
    }

    pub fn beta_sum(&self) -> i64 {
        self.beta.values().sum()
    }

    pub fn rhs(&self) -> i64 {
        self.alpha_sum() + self.beta_sum() + self.c * self.gamma
    }

    pub fn lhs(&self, arc: &Arc) -> i64 {
        self.alpha_at(arc.head) + self.beta_at(arc.tail) + self.gamma * arc.w as i64
    }

    fn add_alpha(&mut self, v: Cell, x: i64) {
        *self.alpha.entry(v).or_insert(0) += x;
    }

    fn add_beta(&mut self, v: Cell, x: i64) {
        *self.beta.entry(v).or_insert(0) += x;
    }

    fn prune_zeros(mut self) -> Self {
        self.alpha.retain(|_, x| *x != 0);
        self.beta.retain(|_, x| *x != 0);
        self
    }

    pub fn to_json(&self) -> String {
        let entries = |m: &BTreeMap<Cell, i64>| {
            m.iter().filter(|(_, &x)| x != 0).map(|(c, &x)| [c.i, c.j, x]).collect()
        };
        let doc = CertificateJson {
            n: self.n,
            c: self.c,
            gamma: self.gamma,
            alpha: entries(&self.alpha),
            beta: entries(&self.beta),
        };
        serde_json::to_string(&doc).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CertificateJson =
            serde_json::from_str(text).map_err(|e| WhirlError::Parse(e.to_string()))?;
        let mut cert = FarkasCertificate::zero(doc.n, doc.c);
        cert.gamma = doc.gamma;
        for [i, j, x] in doc.alpha {
            cert.add_alpha(Cell::new(i, j), x);
        }
        for [i, j, x] in doc.beta {
            cert.add_beta(Cell::new(i, j), x);
        }
        Ok(cert.prune_zeros())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CertificateJson {
    n: i64,
    c: i64,
    gamma: i64,
    alpha: Vec<[i64; 3]>,
    beta: Vec<[i64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub rhs: i64,
    /// Maximum LHS over all arcs; `None` for an arcless digraph.
    pub max_lhs: Option<i64>,
    /// Every arc with positive LHS, in arc-id order.
    pub violations: Vec<(Arc, i64)>,
    pub valid: bool,
}

pub fn verify_certificate(g: &WhirlDigraph, cert: &FarkasCertificate) -> Result<VerificationReport> {
    if cert.n != g.n() {
        return Err(WhirlError::SizeMismatch { cert: cert.n, graph: g.n() });
    }
    for v in cert.alpha.keys().chain(cert.beta.keys()) {
        g.require_vertex(*v)?;
    }
    let mut max_lhs = None;
    let mut violations = Vec::new();
    for arc in g.arcs() {
        let lhs = cert.lhs(arc);
        max_lhs = Some(max_lhs.map_or(lhs, |m: i64| m.max(lhs)));
        if lhs > 0 {
            violations.push((*arc, lhs));
        }
    }
    let rhs = cert.rhs();
    Ok(VerificationReport { rhs, max_lhs, valid: violations.is_empty() && rhs >= 1, violations })
}

fn require_residue(n: i64, residue: i64) -> Result<i64> {
    if n < residue || n % 8 != residue {
        return Err(WhirlError::WrongResidue { n, residue, min: residue });
    }
    Ok((n - residue) / 8)
}

/// Cell sets underlying the closed-form certificates of one board.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupportSets {
    pub n: i64,
    pub m: i64,
    pub h: i64,
    /// Rows `4k + d` (`d` in {0,1}) of column `h-1`; `n = 8m+6` only.
    pub n_in: BTreeSet<Cell>,
    /// The same rows in column `h`; `n = 8m+6` only.
    pub n_out: BTreeSet<Cell>,
    /// North-east triangle cells with `i + j` even; `n = 8m+4` only.
    pub t_even: BTreeSet<Cell>,
    pub t_odd: BTreeSet<Cell>,
    /// Block rows `4k`, `0 <= k <= m`; `n = 8m+4` only.
    pub r_rows: Vec<i64>,
    /// `(r, h-1)` and `(r, h)` for each block row.
    pub blocks: Vec<(Cell, Cell)>,
}

impl SupportSets {
    pub fn t1(n: i64) -> Result<Self> {
        let m = require_residue(n, 6)?;
        let h = n / 2;
        let rows: Vec<i64> = (0..=m).flat_map(|k| [4 * k, 4 * k + 1]).collect();
        Ok(SupportSets {
            n,
            m,
            h,
            n_in: rows.iter().map(|&i| Cell::new(i, h - 1)).collect(),
            n_out: rows.iter().map(|&i| Cell::new(i, h)).collect(),
            ..Default::default()
        })
    }

    pub fn t2(n: i64) -> Result<Self> {
        let m = require_residue(n, 4)?;
        let h = n / 2;
        let mut sets = SupportSets { n, m, h, ..Default::default() };
        for i in 0..h {
            for j in h..n - i {
                let cell = Cell::new(i, j);
                if (i + j) % 2 == 0 {
                    sets.t_even.insert(cell);
                } else {
                    sets.t_odd.insert(cell);
                }
            }
        }
        sets.r_rows = (0..=m).map(|k| 4 * k).collect();
        sets.blocks = sets.r_rows.iter().map(|&r| (Cell::new(r, h - 1), Cell::new(r, h))).collect();
        Ok(sets)
    }

    pub fn triangle(&self) -> BTreeSet<Cell> {
        self.t_even.union(&self.t_odd).copied().collect()
    }
}

/// Unit certificate on the two flanking blocks, for `n = 8m + 6`, `c = n/2`.
pub fn build_t1(n: i64) -> Result<FarkasCertificate> {
    let sets = SupportSets::t1(n)?;
    let mut cert = FarkasCertificate::zero(n, n / 2);
    cert.gamma = -1;
    for &v in &sets.n_in {
        cert.add_alpha(v, 1);
    }
    for &v in &sets.n_out {
        cert.add_beta(v, 1);
    }
    Ok(cert)
}

/// Triangle-plus-blocks certificate for `n = 8m + 4`, `c = n/2`. A block
/// tail `(r, h)` also lies in the even triangle, so it carries both
/// `alpha = -1` and `beta = +1`; the two maps keep them apart.
pub fn build_t2(n: i64) -> Result<FarkasCertificate> {
    let sets = SupportSets::t2(n)?;
    let mut cert = FarkasCertificate::zero(n, n / 2);
    cert.gamma = -1;
    for &v in &sets.t_even {
        cert.add_alpha(v, -1);
    }
    for &v in &sets.t_odd {
        cert.add_beta(v, 1);
    }
    for &(head, tail) in &sets.blocks {
        cert.add_alpha(head, 1);
        cert.add_beta(tail, 1);
    }
    Ok(cert.prune_zeros())
}

/// `alpha = 1` on the left column of the 3x3 board, `beta = 0`, `gamma = -1`, `c = 2`.
pub fn build_n3_certificate() -> FarkasCertificate {
    let mut cert = FarkasCertificate::zero(3, 2);
    cert.gamma = -1;
    for i in 0..3 {
        cert.add_alpha(Cell::new(i, 0), 1);
    }
    cert
}

/// `(even, odd)` cell counts of the north-east triangle for `n = 8m + 4`.
pub fn parity_census(n: i64) -> Result<(usize, usize)> {
    let sets = SupportSets::t2(n)?;
    Ok((sets.t_even.len(), sets.t_odd.len()))
}

/// Counterexamples to the three block facts for `n = 8m + 6`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockFactsReport {
    /// Arcs into `n_in` that do not cross the north ray.
    pub a_violations: Vec<Arc>,
    /// Arcs out of `n_out` that do not cross the north ray.
    pub b_violations: Vec<Arc>,
    /// Arcs from `n_out` to `n_in`.
    pub c_violations: Vec<Arc>,
    pub arcs_scanned: usize,
}

impl BlockFactsReport {
    pub fn holds(&self) -> bool {
        self.a_violations.is_empty() && self.b_violations.is_empty() && self.c_violations.is_empty()
    }
}

pub fn check_facts_abc(g: &WhirlDigraph) -> Result<BlockFactsReport> {
    let sets = SupportSets::t1(g.n())?;
    let mut report = BlockFactsReport::default();
    for arc in g.arcs() {
        report.arcs_scanned += 1;
        let into = sets.n_in.contains(&arc.head);
        let from = sets.n_out.contains(&arc.tail);
        if into && arc.w != 1 {
            report.a_violations.push(*arc);
        }
        if from && arc.w != 1 {
            report.b_violations.push(*arc);
        }
        if into && from {
            report.c_violations.push(*arc);
        }
    }
    Ok(report)
}

/// Arcs joining a block tail `(r, h)` to a block head `(r', h-1)`.
pub fn block_arcs(g: &WhirlDigraph, sets: &SupportSets) -> Vec<Arc> {
    let heads: BTreeSet<Cell> = sets.blocks.iter().map(|b| b.0).collect();
    let tails: BTreeSet<Cell> = sets.blocks.iter().map(|b| b.1).collect();
    g.arcs()
        .iter()
        .filter(|a| tails.contains(&a.tail) && heads.contains(&a.head))
        .copied()
        .collect()
}
