//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};
use whirl_core::geometry::{check_column_lemma, WEST_IN_STEPS};
use whirl_core::polytope::lp_feasible_from;
use whirl_core::tours::cover_winding_by_ray;
use whirl_core::*;

fn within(label: &str, limit: Duration, start: Instant) {
    let took = start.elapsed();
    assert!(took < limit, "{label} took {took:?}, limit {limit:?}");
}

fn c1_t1_family() -> String {
    for n in [6, 14, 22, 30] {
        let t = Instant::now();
        let g = build_digraph(n).unwrap();
        let r = verify_certificate(&g, &build_t1(n).unwrap()).unwrap();
        assert!(r.valid, "n={n}: {:?}", r.violations);
        assert_eq!(r.rhs, 1, "n={n}");
        assert_eq!(r.max_lhs, Some(0), "n={n}");
        within(&format!("t1 n={n}"), Duration::from_secs(1), t);
    }
    "n in {6,14,22,30}: valid, rhs=1, max_lhs=0".into()
}

fn c2_t2_family() -> String {
    for n in [4, 12, 20, 28] {
        let t = Instant::now();
        let g = build_digraph(n).unwrap();
        let cert = build_t2(n).unwrap();
        let r = verify_certificate(&g, &cert).unwrap();
        assert!(r.valid, "n={n}: {:?}", r.violations);
        assert_eq!(r.rhs, 1, "n={n}");
        if n == 4 {
            assert_eq!(cert.alpha_sum(), 0);
            assert_eq!(cert.beta_sum(), 3);
        }
        within(&format!("t2 n={n}"), Duration::from_secs(1), t);
    }
    "n in {4,12,20,28}: valid, rhs=1; n=4 sums alpha=0 beta=3".into()
}

fn c3_parity() -> String {
    for m in 0..=50i64 {
        let (even, odd) = parity_census(8 * m + 4).unwrap();
        assert_eq!(odd as i64 - even as i64, 2 * m + 1, "m={m}");
    }
    "m=0..50: odd-even = 2m+1".into()
}

fn c4_column_lemma() -> String {
    let t = Instant::now();
    let mut arcs = 0;
    for n in (4..=30).step_by(2) {
        let r = check_column_lemma(n).unwrap();
        assert!(r.west_violations.is_empty(), "n={n}: {:?}", r.west_violations);
        assert!(r.east_violations.is_empty(), "n={n}: {:?}", r.east_violations);
        assert!(r.census_violations.is_empty(), "n={n}: {:?}", r.census_violations);
        if n >= 8 {
            assert_eq!(r.sharpness_witness, Some(true), "n={n}");
        }
        arcs += r.arcs_checked;
    }
    let steps: BTreeSet<(i64, i64)> = WEST_IN_STEPS.iter().map(|s| (s.di, s.dj)).collect();
    assert_eq!(steps, [(1, -2), (-1, -2), (2, -1), (-2, -1)].into_iter().collect());
    within("lemma sweep", Duration::from_secs(10), t);
    format!("even n<=30: 0 counterexamples over {arcs} arcs, census and sharpness hold")
}

fn c5_lp() -> String {
    let mut notes = Vec::new();
    for (n, c) in [(3, 2), (4, 2), (6, 3), (12, 6), (14, 7), (20, 10), (22, 11)] {
        let t = Instant::now();
        let d = lp_feasible(&build_digraph(n).unwrap(), c).unwrap();
        assert!(!d.feasible, "(n={n}, c={c}) should be infeasible");
        if n % 2 == 0 {
            assert!(d.min_coil > n / 2, "n={n}: min_coil={}", d.min_coil);
        }
        within(&format!("lp n={n}"), Duration::from_secs(5), t);
        notes.push(format!("{n}:[{},{}]", d.min_coil, d.max_coil));
    }
    for (n, c) in [(16, 8), (18, 9)] {
        let t = Instant::now();
        let g = build_digraph(n).unwrap();
        let d = lp_feasible(&g, c).unwrap();
        assert!(d.feasible, "(n={n}, c={c}) should be feasible");
        assert!(d.witness.unwrap().check_rows(&g).satisfies(c));
        within(&format!("lp n={n}"), Duration::from_secs(5), t);
        notes.push(format!("{n}:[{},{}]", d.min_coil, d.max_coil));
    }
    format!("infeasible/feasible as required; intervals {}", notes.join(" "))
}

fn c6_n3_fixture() -> String {
    let g = build_digraph(3).unwrap();
    let covers = enumerate_cycle_covers(&g, 1000).unwrap();
    assert_eq!(covers.len(), 1);
    let cycles = covers[0].cycles();
    assert_eq!(cycles.len(), 1, "the unique cover must be a single cycle");
    let cells: Vec<Cell> = cycles[0].iter().map(|&v| g.vertices()[v]).collect();
    let tour = verify_tour(&g, &cells).unwrap();
    assert_eq!(tour.coil, 3);
    assert_eq!(coil_of_cover(&g, &covers[0]).unwrap(), 3);
    let r = verify_certificate(&g, &build_n3_certificate()).unwrap();
    assert!(r.valid);
    assert_eq!(r.rhs, 1);
    assert!(!lp_feasible(&g, 2).unwrap().feasible);
    "1 cover, Hamiltonian, coil 3, certificate valid with rhs=1".into()
}

fn c7_bruteforce() -> String {
    let t = Instant::now();
    let mut notes = Vec::new();
    for n in [3, 4] {
        let g = build_digraph(n).unwrap();
        let iv = coil_interval(&g).unwrap();
        let covers = enumerate_cycle_covers(&g, 1_000_000).unwrap();
        let coils: Vec<i64> = covers.iter().map(|cv| coil_of_cover(&g, cv).unwrap()).collect();
        assert_eq!(*coils.iter().min().unwrap(), iv.min_coil, "n={n}");
        assert_eq!(*coils.iter().max().unwrap(), iv.max_coil, "n={n}");
        let rays: &[Ray] = if n % 2 == 0 { &Ray::ALL } else { &[Ray::North] };
        for (cv, &coil) in covers.iter().zip(&coils) {
            for &ray in rays {
                assert_eq!(cover_winding_by_ray(&g, cv, ray).unwrap(), coil, "n={n} ray={ray:?}");
            }
        }
        notes.push(format!("n={n}: {} covers in [{},{}]", covers.len(), iv.min_coil, iv.max_coil));
    }
    within("enumeration", Duration::from_secs(60), t);
    notes.join("; ")
}

fn c8_reduction() -> String {
    let mut checked = 0;
    let g3 = build_digraph(3).unwrap();
    let cells = [(0, 0), (2, 1), (0, 2), (1, 0), (2, 2), (0, 1), (2, 0), (1, 2)].map(Cell::from);
    let t3 = verify_tour(&g3, &cells).unwrap();
    assert!(check_reduction(&g3, &t3).unwrap());
    checked += 1;
    for (n, seed) in [(3, 0), (6, 0), (6, 1), (6, 7), (8, 0), (8, 3)] {
        let g = build_digraph(n).unwrap();
        let out = search_tour(&g, &SearchOptions { budget: 200_000, seed, ..Default::default() }).unwrap();
        if let Some(t) = out.tour {
            assert!(check_reduction(&g, &t).unwrap(), "n={n} seed={seed}");
            checked += 1;
        }
    }
    assert!(checked >= 4, "too few tours exercised");
    format!("{checked} tours satisfy every LP row at their coil count")
}

fn c9_search() -> String {
    let g6 = build_digraph(6).unwrap();
    for budget in [1, 10, 1_000, 100_000, 10_000_000] {
        let out = search_tour(&g6, &SearchOptions { coil_target: Some(3), budget, ..Default::default() }).unwrap();
        assert!(out.tour.is_none(), "budget {budget} produced a c=3 tour");
    }
    let mut found = 0;
    for (n, target, seed) in [(3, None, 0), (6, None, 0), (6, None, 5), (6, Some(5), 2), (8, None, 0), (8, Some(7), 0)] {
        let g = build_digraph(n).unwrap();
        let iv = coil_interval(&g).unwrap();
        let out = search_tour(&g, &SearchOptions { coil_target: target, budget: 500_000, seed, ..Default::default() })
            .unwrap();
        if let Some(t) = out.tour {
            let again = verify_tour(&g, &t.cells).unwrap();
            assert_eq!(again.coil, t.coil);
            assert!(iv.min_coil <= t.coil && t.coil <= iv.max_coil, "n={n}: coil {}", t.coil);
            assert!(lp_feasible_from(&g, &iv, t.coil).unwrap().feasible);
            if let Some(target) = target {
                assert_eq!(t.coil, target);
            }
            found += 1;
        }
    }
    assert!(found >= 3);
    format!("n=6 c=3 never found (budgets up to 1e7); {found} found tours verify inside the coil interval")
}

type Criterion = (&'static str, fn() -> String);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 certificate family T1", c1_t1_family),
        ("2 certificate family T2", c2_t2_family),
        ("3 parity identity", c3_parity),
        ("4 geometric lemma suite", c4_column_lemma),
        ("5 LP (in)feasibility", c5_lp),
        ("6 n=3 fixture", c6_n3_fixture),
        ("7 brute-force oracle equivalence", c7_bruteforce),
        ("8 reduction lemma", c8_reduction),
        ("9 negative search", c9_search),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(detail) => println!("PASS criterion {name} ({:.2?}): {detail}", t.elapsed()),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL criterion {name} ({:.2?}): {msg}", t.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
