use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use galimage::catalog::exceptional_groups;
use galimage::indexsets::summarize;
use galimage::matgroup::SubgroupLattice;
use galimage::modarith::PrimeCtx;
use galimage::standard::{CanonicalGroups, StandardKind};
use galimage::{EnumConfig, Exec};

fn modes() -> Vec<(&'static str, EnumConfig)> {
    let mut v = vec![("sequential", EnumConfig::default().sequential())];
    if Exec::available() {
        v.push(("parallel", EnumConfig::default()));
    }
    v
}

fn lattice(c: &mut Criterion) {
    let canon = CanonicalGroups::new(PrimeCtx::new(5).unwrap());
    let gl2 = canon.get(StandardKind::Full).clone();
    let mut group = c.benchmark_group("lattice GL2(5)");
    group.sample_size(10);
    for (name, cfg) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| SubgroupLattice::new(&gl2, &cfg).unwrap().subgroup_count())
        });
    }
    group.finish();
}

fn exceptional(c: &mut Criterion) {
    let records = exceptional_groups(13).unwrap();
    let largest = records.iter().max_by_key(|r| r.generated_order()).unwrap().group().unwrap();
    let mut group = c.benchmark_group("summaries of the largest ell=13 exceptional image");
    group.sample_size(10);
    for (name, cfg) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| summarize(&largest, &cfg).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, lattice, exceptional);
criterion_main!(benches);
