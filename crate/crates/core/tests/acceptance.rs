//! One pass/fail line per acceptance criterion, written straight to standard
//! error so it shows without `--nocapture`. Runtime limits are pinned below.

use std::io::Write;
use std::time::{Duration, Instant};

use iopart::gen::{gen_sparse, gnp, rng};
use iopart::graph::named::*;
use iopart::graph::Graph;
use iopart::hardness::{
    balanced_cnf_corpus, build_reduction, mine_gadget, soundness_check, Catalog, GadgetRole,
    MineRequest,
};
use iopart::mad::{mad_bruteforce, mad_exact, Density};
use iopart::partition::{all_colorings, exact_solve, verify, Color, Coloring, PartitionSpec};
use iopart::thm1::{audit_charges_thm1, solve_io3, Thm1Outcome};
use iopart::thm2::{
    assert_structural_lemmas, check_pi, discharge_thm2, solve_iok_observed, DischargeParams,
    OraclePolicy, RepairState, Thm2Error, Thm2Outcome,
};
use rand::Rng;

const LIMIT_THM1: Duration = Duration::from_secs(60);
const LIMIT_THM2: Duration = Duration::from_secs(300);
const LIMIT_MAD: Duration = Duration::from_secs(30);
const LIMIT_EXACT: Duration = Duration::from_secs(120);
const LIMIT_REDUCTION: Duration = Duration::from_secs(600);

type Verdict = Result<String, String>;

fn within(start: Instant, limit: Duration, detail: String) -> Verdict {
    let t = start.elapsed();
    let line = format!("{detail}, {:.1}s of {}s", t.as_secs_f64(), limit.as_secs());
    if t <= limit {
        Ok(line)
    } else {
        Err(line)
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let o3 = PartitionSpec::order(3);
    for seed in 0..500u64 {
        let n = 5 + seed as usize % 36;
        let g = gen_sparse(n, Density::new(5, 2), seed);
        if !g.is_connected() {
            return Err(format!("seed {seed}: generator gave a disconnected graph"));
        }
        match solve_io3(&g) {
            Ok(Thm1Outcome::Colored { coloring, .. }) => {
                verify(&g, &coloring, o3).map_err(|v| format!("seed {seed}: {v}"))?;
            }
            other => return Err(format!("seed {seed}: {other:?}")),
        }
    }
    within(start, LIMIT_THM1, "500/500 colored and verified".into())
}

/// Criterion 2, with the boundary checks of criterion 7 collected on the way.
fn criterion_2(boundary_problems: &mut Vec<String>, boundaries: &mut usize) -> Verdict {
    let start = Instant::now();
    for k in 2..=5 {
        let cap = Density::thm2_threshold(k);
        let spec = PartitionSpec::order(k);
        for seed in 0..200u64 {
            let n = 5 + (seed as usize * 11) % 24;
            let g = gen_sparse(n, cap, 1000 * k as u64 + seed);
            let out = solve_iok_observed(&g, k, OraclePolicy::Exact, true, &mut |s| {
                *boundaries += 1;
                if !check_pi(s) {
                    boundary_problems.push(format!("k {k} seed {seed}: property Pi"));
                }
                for v in assert_structural_lemmas(s).violations {
                    boundary_problems.push(format!("k {k} seed {seed}: {v:?}"));
                }
            })
            .map_err(|e| format!("k {k} seed {seed}: {e}"))?;
            match out {
                Thm2Outcome::Colored { coloring, .. } => {
                    verify(&g, &coloring, spec).map_err(|v| format!("k {k} seed {seed}: {v}"))?
                }
                Thm2Outcome::Exhausted { .. } => {
                    return Err(format!("k {k} seed {seed}: exhausted"))
                }
            }
        }
    }
    within(start, LIMIT_THM2, "800/800 colored and verified".into())
}

fn planar_girth_ten() -> Vec<Graph> {
    let bases: Vec<(Graph, usize)> = vec![
        (complete(4), 3),
        (complete(4), 4),
        (wheel(4), 3),
        (wheel(5), 3),
        (wheel(6), 3),
        (wheel(8), 3),
        (grid(2, 3), 2),
        (grid(3, 3), 2),
        (grid(3, 4), 2),
        (grid(4, 4), 2),
        (grid(5, 5), 2),
        (cube(), 2),
        (prism(), 3),
        (dodecahedron(), 1),
        (dodecahedron(), 2),
        (cycle(5), 1),
        (cycle(4), 2),
        (cycle(3), 3),
        (wheel(3), 3),
        (grid(2, 6), 2),
    ];
    bases
        .into_iter()
        .map(|(mut b, t)| {
            b.meta.claimed_planar = true;
            b.subdivide(t)
        })
        .collect()
}

fn criterion_3() -> Verdict {
    let graphs = planar_girth_ten();
    let p3 = PartitionSpec::path(3);
    for (i, g) in graphs.iter().enumerate() {
        let girth = g.girth().unwrap_or(usize::MAX);
        if girth < 10 {
            return Err(format!("graph {i} has girth {girth}"));
        }
        match solve_io3(g) {
            Ok(Thm1Outcome::Colored { coloring, .. }) => {
                verify(g, &coloring, p3).map_err(|v| format!("graph {i}: {v}"))?
            }
            other => return Err(format!("graph {i}: {other:?}")),
        }
    }
    Ok(format!(
        "{}/{} colored with P3 components",
        graphs.len(),
        graphs.len()
    ))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    for seed in 0..300u64 {
        let n = 1 + seed as usize % 12;
        let p = 0.1 + 0.8 * ((seed * 37) % 100) as f64 / 100.0;
        let g = gnp(n, p, seed);
        let exact = mad_exact(&g).map_err(|e| e.to_string())?.0;
        let brute = mad_bruteforce(&g).map_err(|e| e.to_string())?;
        if exact != brute {
            return Err(format!("seed {seed}: {exact} against {brute}"));
        }
    }
    within(start, LIMIT_MAD, "300/300 equal".into())
}

fn valid_by_enumeration(g: &Graph, spec: PartitionSpec) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|mask| {
            let c = Coloring::from_total(
                (0..n)
                    .map(|v| {
                        if mask >> v & 1 == 1 {
                            Color::I
                        } else {
                            Color::O
                        }
                    })
                    .collect(),
            );
            verify(g, &c, spec).is_ok()
        })
        .count()
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let specs = [
        PartitionSpec::order(2),
        PartitionSpec::order(3),
        PartitionSpec::path(2),
        PartitionSpec::path(3),
    ];
    let (mut sat, mut unsat) = (0, 0);
    for seed in 0..100u64 {
        let n = 1 + seed as usize % 14;
        let p = 0.15 + 0.45 * ((seed * 53) % 100) as f64 / 100.0;
        let g = gnp(n, p, 500 + seed);
        for spec in specs {
            let count = valid_by_enumeration(&g, spec);
            let solved = exact_solve(&g, spec);
            let listed = all_colorings(&g, spec, &Coloring::unset(n)).len();
            if solved.is_some() != (count > 0) || listed != count {
                return Err(format!(
                    "seed {seed} {spec}: {count} valid, solver {solved:?}, {listed} listed"
                ));
            }
            if let Some(c) = solved {
                verify(&g, &c, spec).map_err(|v| format!("seed {seed} {spec}: {v}"))?;
                sat += 1;
            } else {
                unsat += 1;
            }
        }
    }
    within(
        start,
        LIMIT_EXACT,
        format!("400/400 agree ({sat} partitionable, {unsat} not)"),
    )
}

fn criterion_6() -> Verdict {
    for k in 2..=10 {
        let p = DischargeParams::new(k).map_err(|e| e.to_string())?;
        if !p.identity_holds() {
            return Err(format!("identity fails for k = {k}"));
        }
    }
    let mut residuals = 0;
    for seed in 0..200u64 {
        let g = gen_sparse(12 + seed as usize % 20, Density::new(3, 1), seed);
        if let Ok(Thm1Outcome::NotApplicable {
            residual, forest, ..
        }) = solve_io3(&g)
        {
            let ledger = audit_charges_thm1(&residual, &forest).map_err(|e| e.to_string())?;
            if !ledger.is_consistent() || !ledger.negatives().is_empty() {
                return Err(format!("thm1 residual of seed {seed}"));
            }
            residuals += 1;
        }
    }
    let mut exhausted = 0;
    for k in 2..=5 {
        let params = DischargeParams::new(k).map_err(|e| e.to_string())?;
        for seed in 0..150u64 {
            let g = gen_sparse(8 + seed as usize % 12, Density::new(3, 1), 7000 + seed);
            match solve_iok_observed(&g, k, OraclePolicy::Exact, false, &mut |_| {}) {
                Ok(Thm2Outcome::Exhausted { state, core, .. }) => {
                    let audit =
                        discharge_thm2(&core, &state, &params).map_err(|e| e.to_string())?;
                    if !audit.ledger.is_consistent() || !audit.ledger.negatives().is_empty() {
                        return Err(format!("thm2 state k {k} seed {seed}: {:?}", audit.issues));
                    }
                    exhausted += 1;
                }
                Ok(_) | Err(Thm2Error::OracleUnsatisfiable { .. }) => {}
                Err(e) => return Err(format!("k {k} seed {seed}: {e}")),
            }
        }
    }
    if residuals == 0 || exhausted == 0 {
        return Err(format!(
            "too few audited states: {residuals} residuals, {exhausted} exhausted"
        ));
    }
    Ok(format!(
        "identity for k = 2..10; {residuals} thm1 residuals and {exhausted} thm2 states conserve charge and end non-negative"
    ))
}

/// Random journaled edits with nested checkpoints; every rollback must
/// restore the hashes taken at its checkpoint.
fn rollback_script(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = petersen();
    let edges = g.edges();
    let mut s = RepairState::new(g, 2 + seed as usize % 4);
    let outer = s.checkpoint();
    let initial = (s.fingerprint(), s.snapshot());
    let mut open = Vec::new();
    for _ in 0..r.gen_range(0..60) {
        let v = r.gen_range(0..10);
        match r.gen_range(0..8) {
            0 => s.set_color(v, if r.gen() { Color::I } else { Color::O }),
            1 => s.set_mark(v, r.gen_range(0..3)),
            2 => {
                let members = (0..r.gen_range(0..4)).map(|_| r.gen_range(0..10)).collect();
                s.set_cluster(v, members)
            }
            3 => s.add_free_cluster(vec![v]),
            4 => {
                let (x, w) = edges[r.gen_range(0..edges.len())];
                s.set_giving(x, w)
            }
            5 => {
                let (x, w) = edges[r.gen_range(0..edges.len())];
                s.add_neutral(x, w)
            }
            6 => open.push((s.fingerprint(), s.checkpoint())),
            _ => {
                if let Some((fp, token)) = open.pop() {
                    if r.gen() {
                        s.rollback(token).map_err(|e| e.to_string())?;
                        if s.fingerprint() != fp {
                            return Err(format!("script {seed}: inner rollback"));
                        }
                    } else {
                        s.release(token).map_err(|e| e.to_string())?;
                    }
                }
            }
        }
    }
    while let Some((_, token)) = open.pop() {
        s.release(token).map_err(|e| e.to_string())?;
    }
    s.rollback(outer).map_err(|e| e.to_string())?;
    if s.fingerprint() != initial.0 || s.snapshot() != initial.1 {
        return Err(format!("script {seed}: outer rollback"));
    }
    Ok(())
}

fn criterion_7(boundary_problems: &[String], boundaries: usize) -> Verdict {
    if let Some(p) = boundary_problems.first() {
        return Err(format!(
            "{} boundary problems, first: {p}",
            boundary_problems.len()
        ));
    }
    for seed in 0..1000 {
        rollback_script(seed)?;
    }
    Ok(format!(
        "{boundaries} boundaries clean; 1000/1000 rollback scripts restore hashes"
    ))
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let spec = PartitionSpec::path(3);
    let mine = |role| {
        mine_gadget(&MineRequest {
            role,
            spec,
            girth_floor: 3,
            degree_cap: None,
            max_n: 14,
            budget: 1_000_000,
            seed: 1,
        })
        .map_err(|e| e.to_string())?
        .found()
        .map(|m| m.gadget)
        .ok_or_else(|| format!("no {role} mined"))
    };
    let catalog = Catalog {
        force_o: Some(mine(GadgetRole::ForceO)?),
        transmitter: Some(mine(GadgetRole::Transmitter)?),
    };
    let (mut sat, mut unsat) = (0, 0);
    for (i, cnf) in balanced_cnf_corpus(50, 3, 0).into_iter().enumerate() {
        let j = build_reduction(&cnf, &catalog, spec).map_err(|e| format!("instance {i}: {e}"))?;
        let girth = j.graph.girth().unwrap_or(usize::MAX);
        if girth < catalog.girth_floor() {
            return Err(format!("instance {i}: girth {girth}"));
        }
        if !soundness_check(&cnf, &j, spec).map_err(|e| e.to_string())? {
            return Err(format!("instance {i}: mismatch on {}", cnf.to_dimacs()));
        }
        if cnf.solve_bruteforce().map_err(|e| e.to_string())?.is_some() {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    within(
        start,
        LIMIT_REDUCTION,
        format!("50/50 agree ({sat} satisfiable, {unsat} not)"),
    )
}

fn criterion_9() -> Verdict {
    let k4 = complete(4);
    let p3 = exact_solve(&k4, PartitionSpec::path(3));
    let o3 = exact_solve(&k4, PartitionSpec::order(3));
    let thm1 = solve_io3(&k4);
    let mad = mad_exact(&k4).map_err(|e| e.to_string())?.0;
    let not_applicable = matches!(thm1, Ok(Thm1Outcome::NotApplicable { .. }));
    if p3.is_none() && o3.is_some() && not_applicable && mad == Density::integer(3) {
        Ok("P3 unsatisfiable, O3 satisfiable, thm1 not applicable, mad 3".into())
    } else {
        Err(format!("P3 {p3:?}, O3 {o3:?}, thm1 {thm1:?}, mad {mad}"))
    }
}

#[test]
fn acceptance() {
    let mut problems = Vec::new();
    let mut boundaries = 0;
    let results = vec![
        (1, criterion_1()),
        (2, criterion_2(&mut problems, &mut boundaries)),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7(&problems, boundaries)),
        (8, criterion_8()),
        (9, criterion_9()),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (id, verdict) in &results {
        let line = match verdict {
            Ok(detail) => format!("criterion {id}: PASS {detail}\n"),
            Err(detail) => {
                failed.push(*id);
                format!("criterion {id}: FAIL {detail}\n")
            }
        };
        err.write_all(line.as_bytes()).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
