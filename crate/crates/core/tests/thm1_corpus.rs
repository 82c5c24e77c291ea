use iopart::gen::gen_sparse;
use iopart::mad::{mad_exact, Density};
use iopart::partition::{exact_solve, verify, PartitionSpec};
use iopart::thm1::{audit_charges_thm1, solve_io3, Thm1Outcome};

#[test]
fn sparse_corpus_is_always_colored() {
    let cap = Density::new(5, 2);
    let o3 = PartitionSpec::order(3);
    let (mut repairs, mut saturated, mut reductions) = (0, 0, 0);
    for seed in 0..500u64 {
        let n = 1 + (seed as usize * 7) % 40;
        let g = gen_sparse(n, cap, seed);
        assert!(mad_exact(&g).unwrap().0 < cap);
        match solve_io3(&g).unwrap() {
            Thm1Outcome::Colored { coloring, stats } => {
                assert_eq!(verify(&g, &coloring, o3), Ok(()), "seed {seed}");
                repairs += stats.repairs;
                saturated += stats.saturated_after_recolor;
                reductions += stats.reductions.len();
                if n <= 16 {
                    assert!(exact_solve(&g, o3).is_some());
                }
            }
            Thm1Outcome::NotApplicable { residual, .. } => {
                panic!("seed {seed}: no reducible configuration in {residual:?}")
            }
        }
    }
    eprintln!("reductions {reductions}, repairs {repairs}, saturated after recolor {saturated}");
}

#[test]
fn residuals_carry_nonnegative_charge() {
    for seed in 0..200u64 {
        let g = gen_sparse(12 + seed as usize % 20, Density::new(3, 1), seed);
        if let Thm1Outcome::NotApplicable {
            residual, forest, ..
        } = solve_io3(&g).unwrap()
        {
            let ledger = audit_charges_thm1(&residual, &forest).unwrap();
            assert!(ledger.is_consistent());
            assert!(ledger.negatives().is_empty(), "seed {seed}");
            assert!(4 * residual.m() >= 5 * residual.n());
        }
    }
}
