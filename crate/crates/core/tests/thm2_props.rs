use iopart::gen::gen_sparse;
use iopart::graph::named::petersen;
use iopart::mad::Density;
use iopart::partition::{verify, Color, PartitionSpec};
use iopart::thm2::{solve_iok, DischargeParams, OraclePolicy, RepairState, Thm2Outcome, Token};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Op {
    Color(usize, bool),
    Mark(usize, u8),
    Cluster(usize, Vec<usize>),
    Free(Vec<usize>),
    Giving(usize),
    Neutral(usize),
    Open,
    Close(u8),
}

fn op() -> impl Strategy<Value = Op> {
    let v = 0..10usize;
    prop_oneof![
        (v.clone(), any::<bool>()).prop_map(|(v, b)| Op::Color(v, b)),
        (v.clone(), 0..3u8).prop_map(|(v, m)| Op::Mark(v, m)),
        (v.clone(), prop::collection::vec(0..10usize, 0..4)).prop_map(|(v, m)| Op::Cluster(v, m)),
        prop::collection::vec(0..10usize, 1..4).prop_map(Op::Free),
        (0..15usize).prop_map(Op::Giving),
        (0..15usize).prop_map(Op::Neutral),
        Just(Op::Open),
        (0..4u8).prop_map(Op::Close),
    ]
}

struct Scope {
    token: Token,
    fingerprint: u64,
    colors: u64,
    structure: u64,
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rollback_scripts_restore_hashes(script in prop::collection::vec(op(), 0..60)) {
        let g = petersen();
        let edges = g.edges();
        let mut s = RepairState::new(g, 3);
        let outer = s.checkpoint();
        let initial = (s.fingerprint(), s.snapshot());
        let mut scopes: Vec<Scope> = Vec::new();
        for op in script {
            match op {
                Op::Color(v, b) => s.set_color(v, if b { Color::I } else { Color::O }),
                Op::Mark(v, m) => s.set_mark(v, m),
                Op::Cluster(v, m) => s.set_cluster(v, m),
                Op::Free(m) => s.add_free_cluster(m),
                Op::Giving(e) => s.set_giving(edges[e].0, edges[e].1),
                Op::Neutral(e) => s.add_neutral(edges[e].0, edges[e].1),
                Op::Open => {
                    let (fingerprint, colors, structure) =
                        (s.fingerprint(), s.coloring_hash(), s.structure_hash());
                    scopes.push(Scope { token: s.checkpoint(), fingerprint, colors, structure });
                }
                Op::Close(kind) => {
                    let Some(top) = scopes.pop() else { continue };
                    match kind {
                        0 => {
                            s.rollback(top.token).unwrap();
                            prop_assert_eq!(s.fingerprint(), top.fingerprint);
                        }
                        1 => {
                            s.rollback_colors(&top.token).unwrap();
                            prop_assert_eq!(s.coloring_hash(), top.colors);
                            s.release(top.token).unwrap();
                        }
                        2 => {
                            s.rollback_marks(&top.token).unwrap();
                            prop_assert_eq!(s.structure_hash(), top.structure);
                            s.release(top.token).unwrap();
                        }
                        _ => s.release(top.token).unwrap(),
                    }
                }
            }
        }
        // releasing inner scopes keeps their changes inside the outer one
        while let Some(top) = scopes.pop() {
            s.release(top.token).unwrap();
        }
        s.rollback(outer).unwrap();
        prop_assert_eq!(s.fingerprint(), initial.0);
        prop_assert_eq!(s.snapshot(), initial.1);
    }

    #[test]
    fn stale_tokens_are_refused(depth in 1usize..6, pick in 0usize..6) {
        let mut s = RepairState::new(petersen(), 2);
        let mut tokens: Vec<Token> = (0..depth).map(|_| s.checkpoint()).collect();
        let pick = pick % depth;
        let inner = tokens.split_off(pick + 1);
        s.rollback(tokens.pop().unwrap()).unwrap();
        for t in &inner {
            prop_assert!(s.rollback_colors(t).is_err());
        }
        while let Some(t) = tokens.pop() {
            prop_assert!(s.release(t).is_ok());
        }
    }

    #[test]
    fn discharge_identity_holds(k in 2usize..200) {
        let p = DischargeParams::new(k).unwrap();
        prop_assert!(p.identity_holds());
        prop_assert!(p.m < Density::new(8, 3).ratio());
    }

    #[test]
    fn sparse_graphs_get_verified_partitions(n in 3usize..22, k in 2usize..6, seed in any::<u64>()) {
        let g = gen_sparse(n, Density::thm2_threshold(k), seed);
        match solve_iok(&g, k, OraclePolicy::Exact).unwrap() {
            Thm2Outcome::Colored { coloring, .. } => {
                prop_assert_eq!(verify(&g, &coloring, PartitionSpec::order(k)), Ok(()));
            }
            Thm2Outcome::Exhausted { .. } => prop_assert!(false, "exhausted below the threshold"),
        }
    }
}
