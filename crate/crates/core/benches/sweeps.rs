//! Word sweeps and enumerations on the corpus, run in the active mode and,
//! with `parallel`, again inside a one-thread pool for comparison.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use locality::normal::enumerate_partial_normals;
use locality::partial::check_axioms;
use locality::quotient::verify_quotient_lemmas;
use locality::{corpus, par};

type Job<'a> = Box<dyn Fn() + Sync + Send + 'a>;

fn workloads(c: &mut Criterion) {
    let s5 = corpus::builtin("LOC-S5").unwrap();
    let s5 = s5.locality("LOC-S5").unwrap().clone();
    let c2s4 = corpus::builtin("GRP-C2xS4").unwrap();
    let v4 = c2s4.subset("GRP-C2xS4", "V4").unwrap().members.clone();
    let c2s4 = c2s4.locality("GRP-C2xS4").unwrap().clone();

    let jobs: Vec<(&str, Job)> = vec![
        ("axioms LOC-S5 len 3", Box::new(|| assert!(check_axioms(&s5, 3).unwrap().passed()))),
        ("partial normals LOC-S5", Box::new(|| assert_eq!(enumerate_partial_normals(&s5).unwrap().len(), 5))),
        ("lemmas GRP-C2xS4 / V4", Box::new(|| assert!(verify_quotient_lemmas(&c2s4, &v4, 1).unwrap().passed()))),
    ];

    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (name, job) in &jobs {
        group.bench_function(BenchmarkId::new(par::mode(), name), |b| b.iter(job));
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
            group.bench_function(BenchmarkId::new("one-thread", name), |b| b.iter(|| pool.install(job)));
        }
    }
    group.finish();
}

criterion_group!(benches, workloads);
criterion_main!(benches);
