use criterion::{criterion_group, criterion_main};

criterion_group!(benches, fermi_bridge_bench::benchmarks);
criterion_main!(benches);
