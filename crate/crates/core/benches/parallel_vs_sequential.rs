use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fsg::exec::Exec;
use fsg::ml_game::{MLPosition, MLSolver, SolverConfig, Synthesizer};
use fsg::mu_game::{bounded_exhaustive_spoiler, initial_position, SpoilerAlphabet, SuccinctnessMuDuplicator};
use fsg::semantics::Universe;
use fsg::succinctness::{build_c, build_d};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn synthesis(c: &mut Criterion) {
    let (a, b) = (build_c(2).unwrap(), build_d(2).unwrap());
    let mut g = c.benchmark_group("min_separator C2/D2");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| {
            bch.iter(|| Synthesizer::new(&a, &b, exec).min_separator(19).expect("size 19 separator"))
        });
    }
    g.finish();
}

fn universe(c: &mut Criterion) {
    let mut all = build_c(3).unwrap();
    all.extend(build_d(3).unwrap());
    let mut g = c.benchmark_group("bisimulation refinement C3+D3");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| bch.iter(|| Universe::with_exec(&all, exec).num_classes()));
    }
    g.finish();
}

fn solver(c: &mut Criterion) {
    let p = MLPosition::new(8, build_c(2).unwrap(), build_d(2).unwrap());
    let mut g = c.benchmark_group("formula-size game C2/D2 k=8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| {
            bch.iter(|| MLSolver::for_position(&p, SolverConfig { node_budget: 50_000_000, exec }).solve(&p).unwrap().winner)
        });
    }
    g.finish();
}

fn fixpoint_search(c: &mut Criterion) {
    let p0 = initial_position(&build_c(3).unwrap(), &build_d(3).unwrap(), 3);
    let d = SuccinctnessMuDuplicator::new(&p0, true).unwrap();
    let alphabet = SpoilerAlphabet { max_parts: 16, skip_hopeless: false, ..Default::default() };
    let mut g = c.benchmark_group("fixed-point spoiler search C3/D3 k=3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| {
            bch.iter(|| bounded_exhaustive_spoiler(&p0, &d, alphabet, 200_000, exec, |_| false).unwrap().plays)
        });
    }
    g.finish();
}

criterion_group!(benches, synthesis, universe, solver, fixpoint_search);
criterion_main!(benches);
