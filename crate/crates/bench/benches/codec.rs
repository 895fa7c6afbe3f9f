//! Per-triple throughput of the mod-256 polynomial codec.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};

use rdhe_bench::bench_mode_and_id;
use rdhe_core::codec::{
    embed_secret, encode_group, extract_secret, recover_group, strip_secret, PlainGroup, SecretPair,
};

const BATCH: usize = 65_536;

fn groups() -> Vec<PlainGroup> {
    (0..BATCH)
        .map(|i| PlainGroup {
            p2: (i >> 8) as u8,
            p1: i as u8,
        })
        .collect()
}

fn codec_throughput(c: &mut Criterion) {
    let (mode, id) = bench_mode_and_id();
    let secret = SecretPair::new(3, 1, mode, id).unwrap();
    let groups = groups();
    let encoded: Vec<_> = groups.iter().map(|&g| encode_group(g, id)).collect();
    let marked: Vec<_> = encoded.iter().map(|&t| embed_secret(t, secret)).collect();

    let mut bench = c.benchmark_group("codec");
    bench.throughput(Throughput::Elements(BATCH as u64));

    bench.bench_function("encode_group", |b| {
        b.iter(|| {
            for &g in &groups {
                black_box(encode_group(black_box(g), id));
            }
        })
    });

    bench.bench_function("embed_secret", |b| {
        b.iter(|| {
            for &t in &encoded {
                black_box(embed_secret(black_box(t), secret));
            }
        })
    });

    bench.bench_function("extract_secret", |b| {
        b.iter(|| {
            for &m in &marked {
                black_box(extract_secret(black_box(m), id, mode).unwrap());
            }
        })
    });

    bench.bench_function("recover_group", |b| {
        b.iter(|| {
            for &t in &encoded {
                black_box(recover_group(black_box(t), id).unwrap());
            }
        })
    });

    bench.bench_function("full_chain", |b| {
        b.iter(|| {
            for &g in &groups {
                let t = encode_group(g, id);
                let m = embed_secret(t, secret);
                let s = extract_secret(m, id, mode).unwrap();
                let back = strip_secret(m, s);
                black_box(recover_group(back, id).unwrap());
            }
        })
    });

    bench.finish();
}

criterion_group!(benches, codec_throughput);
criterion_main!(benches);
