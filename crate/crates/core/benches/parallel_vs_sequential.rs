//! Data-parallel kernels timed on one worker and on the full pool.
//!
//! With the default `parallel` feature each workload runs inside a
//! one-thread rayon pool (`sequential`) and inside a pool sized by
//! `THETAOBS_THREADS` or the core count (`parallel`). Built with
//! `--no-default-features`, only the sequential fallback is timed.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thetaobs::cohom::{extension_cocycle, FiniteGroupTable};
use thetaobs::paramod::{verify_involutions, ParaShape};
use thetaobs::spgroup::{SpGroup, SpMatrix};
use thetaobs::symmod::TypeD;
use thetaobs::theta::{check_axioms, odd_canonical_section, ThetaGroup};

type Workload = Box<dyn Fn() + Send + Sync>;

fn workloads() -> Vec<(&'static str, Workload)> {
    let d44 = TypeD::new(&[4, 4]).unwrap();
    let h44 = ThetaGroup::standard(&d44);

    let d22 = TypeD::homogeneous(2, 2).unwrap();
    let h22 = ThetaGroup::standard(&d22);
    let sp22 = SpGroup::full(&d22, 1).unwrap();
    let table = FiniteGroupTable::generate(SpMatrix::identity(&d22), sp22.generators()).unwrap();

    let d33 = TypeD::homogeneous(3, 2).unwrap();
    let h33 = ThetaGroup::standard(&d33);
    let sp33 = SpGroup::full(&d33, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let elements: Vec<SpMatrix> = (0..64).map(|_| sp33.matrix_of(&sp33.chain().random_element(&mut rng))).collect();

    let shape = ParaShape::new(3, 2).unwrap();

    vec![
        ("theta_axioms_4_4", Box::new(move || assert!(check_axioms(black_box(&h44)).unwrap().all_pass()))),
        ("extension_cocycle_2_2", Box::new(move || drop(black_box(extension_cocycle(&h22, &table).unwrap())))),
        (
            "odd_sections_3_3",
            Box::new(move || {
                let s = thetaobs::par::map_slice(&elements, |a| odd_canonical_section(&h33, a).unwrap());
                black_box(s);
            }),
        ),
        (
            "paramod_involutions_3_2",
            Box::new(move || drop(black_box(verify_involutions(shape, 4, 200, 12, 1).unwrap()))),
        ),
    ]
}

#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let threads = std::env::var(thetaobs::par::THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let build = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    vec![("sequential", build(1)), ("parallel", build(threads))]
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("parallel_vs_sequential");
    for (name, work) in workloads() {
        #[cfg(feature = "parallel")]
        for (label, pool) in pools() {
            group.bench_function(BenchmarkId::new(name, label), |b| b.iter(|| pool.install(&work)));
        }
        #[cfg(not(feature = "parallel"))]
        group.bench_function(BenchmarkId::new(name, "sequential"), |b| b.iter(&work));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench
}
criterion_main!(benches);
