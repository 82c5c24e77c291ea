use std::time::Instant;

use clap::{Args, ValueEnum};
use iopart::gen::gen_sparse;
use iopart::mad::{mad_exact, Density};
use iopart::partition::{exact_solve, PartitionSpec};
use iopart::thm1::{solve_io3, Thm1Outcome};
use iopart::thm2::{solve_iok, OraclePolicy, Thm2Outcome};
use serde::Serialize;

use crate::fail::{Fail, Run};
use crate::output::{Format, Sink, PRNG};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Mad,
    Exact,
    Thm1,
    Thm2,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "thm1")]
    pub what: Target,
    #[arg(long, default_value_t = 100)]
    pub count: u64,
    #[arg(long, default_value_t = 5)]
    pub n_min: usize,
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Serialize)]
struct Row {
    seed: u64,
    n: usize,
    m: usize,
    micros: u128,
    result: String,
}

fn one(args: &BenchArgs, i: u64) -> Row {
    let seed = args.seed + i;
    let span = (args.n_max - args.n_min + 1) as u64;
    let n = args.n_min + (seed % span) as usize;
    let cap = match args.what {
        Target::Thm2 => Density::thm2_threshold(args.k),
        _ => Density::new(5, 2),
    };
    let g = gen_sparse(n, cap, seed);
    let start = Instant::now();
    let result = match args.what {
        Target::Mad => mad_exact(&g)
            .map(|(d, _)| d.to_string())
            .unwrap_or_default(),
        Target::Exact => match exact_solve(&g, PartitionSpec::order(args.k)) {
            Some(_) => "colored".into(),
            None => "unsatisfiable".into(),
        },
        Target::Thm1 => match solve_io3(&g) {
            Ok(Thm1Outcome::Colored { .. }) => "colored".into(),
            Ok(Thm1Outcome::NotApplicable { .. }) => "not-applicable".into(),
            Err(e) => format!("error: {e}"),
        },
        Target::Thm2 => match solve_iok(&g, args.k, OraclePolicy::Exact) {
            Ok(Thm2Outcome::Colored { .. }) => "colored".into(),
            Ok(Thm2Outcome::Exhausted { .. }) => "exhausted".into(),
            Err(e) => format!("error: {e}"),
        },
    };
    Row {
        seed,
        n,
        m: g.m(),
        micros: start.elapsed().as_micros(),
        result,
    }
}

pub fn bench(args: &BenchArgs, workers: usize, sink: &Sink) -> Run {
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Fail::config("need 1 <= --n-min <= --n-max"));
    }
    if args.what == Target::Thm2 && args.k < 2 {
        return Err(Fail::config("thm2 needs --k at least 2"));
    }
    let mut rows: Vec<Option<Row>> = (0..args.count).map(|_| None).collect();
    let chunk = rows.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        for (c, slot) in rows.chunks_mut(chunk).enumerate() {
            scope.spawn(move || {
                for (j, r) in slot.iter_mut().enumerate() {
                    *r = Some(one(args, (c * chunk + j) as u64));
                }
            });
        }
    });
    let rows: Vec<Row> = rows.into_iter().map(|r| r.expect("filled")).collect();
    match sink.format {
        Format::Json => sink.emit_json(&serde_json::json!({
            "prng": PRNG,
            "seed": args.seed,
            "what": args.what,
            "rows": rows,
        })),
        _ => {
            let mut s = format!(
                "c prng={PRNG} seed={}\nseed\tn\tm\tmicros\tresult\n",
                args.seed
            );
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    r.seed, r.n, r.m, r.micros, r.result
                ));
            }
            let total: u128 = rows.iter().map(|r| r.micros).sum();
            s.push_str(&format!("c total_micros={total}\n"));
            sink.emit(&s)
        }
    }
}
