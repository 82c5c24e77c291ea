use std::time::Instant;

use iopart::graph::named::complete;
use iopart::hardness::*;
use iopart::partition::{exact_solve, feasible_colors, verify, ColorSet, PartitionSpec};

fn mined_catalog(spec: PartitionSpec) -> Catalog {
    let req = |role| MineRequest {
        role,
        spec,
        girth_floor: 3,
        degree_cap: None,
        max_n: 14,
        budget: 1_000_000,
        seed: 1,
    };
    let force_o = mine_gadget(&req(GadgetRole::ForceO))
        .unwrap()
        .found()
        .expect("ForceO");
    let transmitter = mine_gadget(&req(GadgetRole::Transmitter))
        .unwrap()
        .found()
        .expect("transmitter");
    Catalog {
        force_o: Some(force_o.gadget),
        transmitter: Some(transmitter.gadget),
    }
}

fn fuzz(spec: PartitionSpec, instances: usize) {
    let catalog = mined_catalog(spec);
    let (mut sat, mut unsat) = (0, 0);
    let start = Instant::now();
    for (seed, cnf) in balanced_cnf_corpus(instances, 3, 0).into_iter().enumerate() {
        let j = build_reduction(&cnf, &catalog, spec).unwrap();
        assert_eq!(j.transmitters.len(), 3 * cnf.variable_count());
        assert!(j.graph.girth().unwrap_or(usize::MAX) >= catalog.girth_floor());
        assert!(
            soundness_check(&cnf, &j, spec).unwrap(),
            "seed {seed}: {}",
            cnf.to_dimacs()
        );
        if cnf.solve_bruteforce().unwrap().is_some() {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    eprintln!(
        "{spec}: {sat} satisfiable, {unsat} unsatisfiable, {:?}",
        start.elapsed()
    );
}

#[test]
fn reduction_matches_satisfiability_for_paths() {
    fuzz(PartitionSpec::path(3), 50);
}

#[test]
fn reduction_matches_satisfiability_for_orders() {
    fuzz(PartitionSpec::order(3), 20);
}

#[test]
fn unsatisfiable_instance_gives_unpartitionable_graph() {
    let spec = PartitionSpec::path(3);
    let cnf = validate_cnf(
        2,
        vec![
            vec![Literal::pos(0), Literal::pos(0)],
            vec![Literal::pos(1), Literal::pos(1)],
            vec![Literal::neg(0), Literal::neg(1)],
        ],
    )
    .unwrap();
    let j = build_reduction(&cnf, &mined_catalog(spec), spec).unwrap();
    assert_eq!(exact_solve(&j.graph, spec), None);
}

#[test]
fn satisfiable_instance_decodes_to_a_model() {
    let spec = PartitionSpec::path(3);
    let cnf = validate_cnf(
        2,
        vec![
            vec![Literal::pos(0), Literal::pos(1)],
            vec![Literal::pos(0), Literal::pos(1)],
            vec![Literal::neg(0), Literal::neg(1)],
        ],
    )
    .unwrap();
    let j = build_reduction(&cnf, &mined_catalog(spec), spec).unwrap();
    assert_eq!(j.transmitters.len(), 6);
    assert_eq!(j.clause_paths.len(), 3);
    let c = exact_solve(&j.graph, spec).unwrap();
    assert_eq!(verify(&j.graph, &c, spec), Ok(()));
    assert!(cnf.is_satisfied_by(&j.decode(&c)));
}

#[test]
fn fillers_are_forced_within_their_copy() {
    let spec = PartitionSpec::path(3);
    let catalog = mined_catalog(spec);
    let f = catalog.force_o.as_ref().unwrap();
    assert_eq!(
        feasible_colors(&f.graph, f.port(PORT_V).unwrap(), spec),
        ColorSet::ONLY_O
    );
}

#[test]
fn certificates_are_reproducible() {
    let spec = PartitionSpec::path(3);
    let catalog = mined_catalog(spec);
    let t = catalog.transmitter.unwrap();
    let limit = t.graph.n();
    assert_eq!(
        certify_gadget_with_limit(&t, spec, limit),
        certify_gadget_with_limit(&t, spec, limit)
    );
}

#[test]
fn h_cases_are_exclusive() {
    for (witness, spec) in [
        (complete(4), PartitionSpec::path(3)),
        (complete(5), PartitionSpec::order(3)),
    ] {
        let out = build_h(&witness, spec, CERTIFY_LIMIT).unwrap();
        let w = out.h_prime.port(PORT_V).unwrap();
        assert_eq!(
            feasible_colors(&out.h_prime.graph, w, spec),
            ColorSet::ONLY_O
        );
        let v = out.h.port(PORT_V).unwrap();
        assert_eq!(feasible_colors(&out.h.graph, v, spec), ColorSet::ONLY_I);
    }
}

#[test]
fn a_prime_from_a_mined_witness() {
    let spec = PartitionSpec::path(3);
    let witness = mine_minimal_witness(spec, 3, None, 7, 5_000_000).expect("witness");
    let out = build_a_prime(&witness, spec, Some(witness.max_degree()), 64).unwrap();
    assert!(out.a_prime.graph.max_degree() <= witness.max_degree());
    assert!(matches!(
        out.a_prime_certificate.truth,
        Truth::Forcing {
            feasible: ColorSet::ONLY_O,
            ..
        }
    ));
    assert!(matches!(
        out.b_certificate.truth,
        Truth::Forcing {
            feasible: ColorSet::ONLY_I,
            ..
        }
    ));
}
