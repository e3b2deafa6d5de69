use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use floquet_bench::{hsf_fixture, pxp_fixture, spread_state};
use floquet_core::ed::{entanglement_entropy, quasienergies, Path};
use floquet_core::ising::{self, IsingChainParams, RunOptions};
use floquet_core::timecrystal::{self, TcParams};
use floquet_core::{bessel, hsf, special_frequency, DriveKind};

fn bessel_functions(c: &mut Criterion) {
    c.bench_function("bessel_j0_sweep", |b| {
        b.iter(|| (1..=200).map(|i| bessel::bessel_j(0, black_box(0.25 * i as f64))).sum::<f64>())
    });
    c.bench_function("bessel_zero_10", |b| b.iter(|| bessel::bessel_zero(black_box(10))));
}

fn ising_chain(c: &mut Criterion) {
    let w = special_frequency(DriveKind::Cosine, 20.0, 2).expect("special frequency");
    let mut g = c.benchmark_group("ising_stroboscopic_100_cycles");
    for l in [64, 256, 1024] {
        let p = IsingChainParams::new(l, 0.1, 20.0, 0.0, w).expect("valid parameters");
        let opts = RunOptions { n_cycles: 100, ..Default::default() };
        g.bench_with_input(BenchmarkId::from_parameter(l), &p, |b, p| b.iter(|| ising::stroboscopic_run(p, &opts)));
    }
    g.finish();
}

fn fragmentation(c: &mut Criterion) {
    let mut g = c.benchmark_group("hsf");
    g.sample_size(10);
    for l in [10, 12] {
        let (p, b) = hsf_fixture(l);
        g.bench_with_input(BenchmarkId::new("hf1_fragments", l), &l, |bench, _| {
            bench.iter(|| hsf::fragments(&hsf::hsf_hf1(&p, &b).expect("hf1")))
        });
        g.bench_with_input(BenchmarkId::new("floquet_dense", l), &l, |bench, _| {
            bench.iter(|| hsf::hsf_floquet(&p, &b, Path::Dense))
        });
    }
    g.finish();
}

fn pxp(c: &mut Criterion) {
    let mut g = c.benchmark_group("pxp");
    g.sample_size(10);
    let (b, u) = pxp_fixture(14, Path::ActionOnly);
    let psi = spread_state(b.dim());
    g.bench_function("action_only_step_L14", |bench| bench.iter(|| u.apply(black_box(&psi))));
    let (b, u) = pxp_fixture(14, Path::Dense);
    g.bench_function("dense_step_L14", |bench| bench.iter(|| u.apply(black_box(&psi))));
    g.bench_function("half_chain_entropy_L14", |bench| bench.iter(|| entanglement_entropy(black_box(&psi), &b, 7)));
    let (_, u) = pxp_fixture(12, Path::Dense);
    g.bench_function("quasienergies_L12", |bench| bench.iter(|| quasienergies(&u)));
    g.finish();
}

fn time_crystal(c: &mut Criterion) {
    let p = TcParams::new(10, 1.0, 0.0, 1.0, 0.03).expect("valid parameters");
    c.bench_function("tc_subharmonic_L10_200_cycles", |b| b.iter(|| timecrystal::subharmonic_run(&p, 200)));
}

criterion_group!(benches, bessel_functions, ising_chain, fragmentation, pxp, time_crystal);
criterion_main!(benches);
