use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use hyperq_core::hyper::{classify, extract_monotone, standard_part, Hyperrational};
use hyperq_core::lang::{self, RunOptions};
use hyperq_core::oracle::present::{BlockPartition, SumColoring};
use hyperq_core::{EpSet, IndexSet, OracleSession, Rational, SeqExpr};

fn structured_sets() -> Vec<IndexSet> {
    let mut out = Vec::new();
    for m in 2..12u64 {
        for r in 0..m {
            let s = EpSet::residue(m, &[r]).unwrap();
            out.push(IndexSet::Structured(s.union(&EpSet::finite(&[r * 7 + 1])).unwrap()));
        }
    }
    out
}

fn decide(c: &mut Criterion) {
    let sets = structured_sets();
    c.bench_function("decide/residue-classes", |b| {
        b.iter_batched(
            || OracleSession::new(7),
            |mut s| {
                for set in &sets {
                    black_box(s.decide(set).unwrap());
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn constructions(c: &mut Criterion) {
    c.bench_function("big_selection/blocks-of-3/100", |b| {
        b.iter(|| {
            let mut s = OracleSession::new(3);
            let r = s.big_selection(Arc::new(BlockPartition { size: 3 })).unwrap();
            black_box(s.enumerate(&r.into(), 100).unwrap())
        })
    });
    c.bench_function("ramsey/sum-mod-3/50", |b| {
        b.iter(|| {
            let mut s = OracleSession::new(3);
            let (_, r) = s.ramsey_homogeneous(Arc::new(SumColoring { modulus: 3, zero_sums: vec![0] })).unwrap();
            black_box(s.enumerate(&r.into(), 50).unwrap())
        })
    });
}

fn recip_shift() -> SeqExpr {
    let one = SeqExpr::constant(Rational::one());
    SeqExpr::div(one.clone(), SeqExpr::add(SeqExpr::var(), one)).unwrap()
}

fn hyper(c: &mut Criterion) {
    c.bench_function("classify/1/(n+1)", |b| {
        b.iter(|| {
            let mut s = OracleSession::new(0);
            let x = Hyperrational::new(&s, recip_shift()).unwrap();
            black_box(classify(&mut s, &x).unwrap())
        })
    });
    c.bench_function("monotone/1/(n+1)/prefix-100", |b| {
        b.iter(|| {
            let mut s = OracleSession::new(0);
            let x = Hyperrational::new(&s, recip_shift()).unwrap();
            let w = extract_monotone(&mut s, &x).unwrap();
            black_box(w.prefix(&mut s, 100).unwrap())
        })
    });
    c.bench_function("standard_part/1/(n+1)", |b| {
        let eps = Rational::ten_to_minus(9);
        b.iter(|| {
            let mut s = OracleSession::new(0);
            let x = Hyperrational::new(&s, recip_shift()).unwrap();
            black_box(standard_part(&mut s, &x, &eps).unwrap())
        })
    });
}

const PROGRAM: &str = "\
x = (2*n + 3)/(n + 1)
y = piecewise(mod 2; 0: 1/(n + 1); 1: n^2)
st x
classify y
monotone x
decide residue(6; {1, 4}) | finite{2}
ramsey sum(3; {0})
";

fn language(c: &mut Criterion) {
    c.bench_function("lang/parse", |b| b.iter(|| black_box(lang::parse(PROGRAM).unwrap())));
    c.bench_function("lang/run", |b| {
        let opts = RunOptions::default();
        b.iter(|| black_box(lang::run_source(PROGRAM, &opts)))
    });
}

criterion_group!(benches, decide, constructions, hyper, language);
criterion_main!(benches);
