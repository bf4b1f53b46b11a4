//! Cross-checks against oracles that share no code with the library's solvers.

use whirl_core::polytope::lp_feasible_from;
use whirl_core::*;

/// Minimum-cost perfect matching by successive shortest paths with plain
/// Bellman-Ford on the residual graph (no potentials). Returns `None` when
/// no perfect matching exists.
fn ssp_min_cost(nv: usize, edges: &[(usize, usize, i64)]) -> Option<i64> {
    // Nodes: source, rows 0..nv, cols 0..nv, sink.
    let src = 0;
    let sink = 2 * nv + 1;
    let total = 2 * nv + 2;
    // (to, cap, cost, rev)
    let mut graph: Vec<Vec<(usize, i64, i64, usize)>> = vec![Vec::new(); total];
    let add = |g: &mut Vec<Vec<(usize, i64, i64, usize)>>, a: usize, b: usize, cost: i64| {
        let ra = g[b].len();
        let rb = g[a].len();
        g[a].push((b, 1, cost, ra));
        g[b].push((a, 0, -cost, rb));
    };
    for r in 0..nv {
        add(&mut graph, src, 1 + r, 0);
        add(&mut graph, 1 + nv + r, sink, 0);
    }
    for &(u, v, c) in edges {
        add(&mut graph, 1 + u, 1 + nv + v, c);
    }
    let mut cost = 0;
    for _ in 0..nv {
        let mut dist = vec![i64::MAX; total];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; total];
        dist[src] = 0;
        for _ in 0..total {
            let mut changed = false;
            for a in 0..total {
                if dist[a] == i64::MAX {
                    continue;
                }
                for (k, &(b, cap, c, _)) in graph[a].iter().enumerate() {
                    if cap > 0 && dist[a] + c < dist[b] {
                        dist[b] = dist[a] + c;
                        prev[b] = Some((a, k));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink] == i64::MAX {
            return None;
        }
        let mut v = sink;
        while let Some((a, k)) = prev[v] {
            let (b, _, _, rev) = graph[a][k];
            graph[a][k].1 -= 1;
            graph[b][rev].1 += 1;
            v = a;
        }
        cost += dist[sink];
    }
    Some(cost)
}

fn oracle_interval(g: &WhirlDigraph) -> (i64, i64) {
    let idx = |c: Cell| g.vertices().iter().position(|&v| v == c).unwrap();
    let lo: Vec<_> = g.arcs().iter().map(|a| (idx(a.tail), idx(a.head), a.w as i64)).collect();
    let hi: Vec<_> = lo.iter().map(|&(u, v, w)| (u, v, -w)).collect();
    let nv = g.vertex_count();
    (ssp_min_cost(nv, &lo).unwrap(), -ssp_min_cost(nv, &hi).unwrap())
}

#[test]
fn hungarian_matches_ssp_oracle() {
    for n in 3..=12 {
        let g = build_digraph(n).unwrap();
        let iv = coil_interval(&g).unwrap();
        assert_eq!((iv.min_coil, iv.max_coil), oracle_interval(&g), "n={n}");
    }
}

#[test]
fn frozen_intervals() {
    // Values computed with an external assignment solver before the build.
    let expected = [(3, 3, 3), (4, 4, 4), (6, 5, 5), (8, 6, 8), (10, 7, 9), (12, 8, 12), (16, 8, 16), (18, 9, 17)];
    for (n, lo, hi) in expected {
        let iv = coil_interval(&build_digraph(n).unwrap()).unwrap();
        assert_eq!((iv.min_coil, iv.max_coil), (lo, hi), "n={n}");
    }
}

#[test]
fn ssp_detects_missing_matching() {
    assert_eq!(ssp_min_cost(2, &[(0, 0, 1), (1, 0, 1)]), None);
    assert_eq!(ssp_min_cost(2, &[(0, 0, 1), (1, 1, 2), (0, 1, 0), (1, 0, 0)]), Some(0));
}

#[test]
fn certificates_agree_with_lp_route() {
    for n in [4, 6, 12, 14, 20, 22, 28, 30] {
        let g = build_digraph(n).unwrap();
        let cert = if n % 8 == 6 { build_t1(n) } else { build_t2(n) }.unwrap();
        let report = verify_certificate(&g, &cert).unwrap();
        assert!(report.valid);
        let iv = coil_interval(&g).unwrap();
        assert!(n / 2 < iv.min_coil, "n={n}");
        assert!(!lp_feasible_from(&g, &iv, n / 2).unwrap().feasible);
        // gamma = -1: every cover satisfies coil >= sum(alpha) + sum(beta).
        assert_eq!(cert.gamma, -1);
        assert!(iv.min_coil >= cert.alpha_sum() + cert.beta_sum());
        assert!(iv.min_coil > cert.c);
    }
}

#[test]
fn block_arcs_never_join() {
    use whirl_core::certificates::{block_arcs, SupportSets};
    for n in [4, 12, 20, 28] {
        let g = build_digraph(n).unwrap();
        assert!(block_arcs(&g, &SupportSets::t2(n).unwrap()).is_empty(), "n={n}");
    }
    for n in [6, 14, 22, 30] {
        let g = build_digraph(n).unwrap();
        let s = SupportSets::t1(n).unwrap();
        assert!(g.arcs().iter().all(|a| !(s.n_out.contains(&a.tail) && s.n_in.contains(&a.head))));
        assert!(check_facts_abc(&g).unwrap().holds());
    }
}

#[test]
fn some_arc_is_tight() {
    for n in [6, 12, 14, 20] {
        let g = build_digraph(n).unwrap();
        let cert = if n % 8 == 6 { build_t1(n) } else { build_t2(n) }.unwrap();
        assert!(g.arcs().iter().any(|a| cert.lhs(a) == 0));
    }
}

#[test]
fn covers_stay_inside_interval() {
    for n in (4..=14).step_by(2) {
        let g = build_digraph(n).unwrap();
        let iv = coil_interval(&g).unwrap();
        for cover in [&iv.argmin, &iv.argmax] {
            let coil = coil_of_cover(&g, cover).unwrap();
            assert!(iv.min_coil <= coil && coil <= iv.max_coil);
            for ray in Ray::ALL {
                assert_eq!(whirl_core::tours::cover_winding_by_ray(&g, cover, ray).unwrap(), coil);
            }
        }
    }
}
