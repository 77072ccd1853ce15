use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use patchcalc::decomposition::exact_treewidth;
use patchcalc::extremal::{ex_table, ClassSpec, Relation};
use patchcalc::linkage::max_linkage;
use patchcalc::patch::{patch_power, power_density_limit, strip_patch};
use patchcalc::rational::{int, rat};
use patchcalc::topo_density::{build_controlled_sequence, density_table, psi_excess};
use patchcalc::wall::{build_wall, find_cross, WallEmbedding};
use patchcalc::{find_minor_model, find_topo_embedding, generators};

fn graph_kernels(c: &mut Criterion) {
    let grid = generators::grid(6, 6).unwrap();
    let left: Vec<usize> = (0..6).collect();
    let right: Vec<usize> = (30..36).collect();
    c.bench_function("max_linkage grid6x6 columns", |b| {
        b.iter(|| max_linkage(black_box(&grid), &left, &right))
    });

    let k5 = generators::complete(5).unwrap();
    let k33 = generators::complete_bipartite(3, 3).unwrap();
    let g44 = generators::grid(4, 4).unwrap();
    c.bench_function("find_minor_model K5 in grid4x4", |b| {
        b.iter(|| find_minor_model(black_box(&g44), &k5))
    });
    c.bench_function("find_topo_embedding K33 in grid4x4", |b| {
        b.iter(|| find_topo_embedding(black_box(&g44), &k33))
    });

    let g34 = generators::grid(3, 4).unwrap();
    c.bench_function("exact_treewidth grid3x4", |b| b.iter(|| exact_treewidth(black_box(&g34))));
}

fn patch_kernels(c: &mut Criterion) {
    let p = strip_patch();
    c.bench_function("patch_power strip^200", |b| b.iter(|| patch_power(black_box(&p), 200)));
    c.bench_function("power_density_limit strip", |b| b.iter(|| power_density_limit(black_box(&p))));
}

fn enumeration_kernels(c: &mut Criterion) {
    let spec = ClassSpec::new(vec![generators::complete(4).unwrap()], Relation::Minor).unwrap();
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    group.bench_function("ex_table Forb(K4) n<=7", |b| b.iter(|| ex_table(black_box(&spec), 7)));
    let k6 = generators::complete(6).unwrap();
    group.bench_function("psi_excess K6 delta=5/2", |b| b.iter(|| psi_excess(black_box(&k6), &rat(5, 2))));
    group.finish();
}

fn density_kernels(c: &mut Criterion) {
    let seq = build_controlled_sequence(&int(2), 50).unwrap();
    c.bench_function("density_table delta=2 l=50", |b| b.iter(|| density_table(black_box(&seq), 50)));

    let w = build_wall(4, 4, 0, 0).unwrap();
    let corners = w.corners;
    let mut host = w.graph.clone();
    host.add_edge(corners.mm, corners.pp);
    let we = WallEmbedding::into_host(w, host).unwrap();
    c.bench_function("find_cross wall4x4 plus chord", |b| b.iter(|| find_cross(black_box(&we), 64)));
}

criterion_group!(benches, graph_kernels, patch_kernels, enumeration_kernels, density_kernels);
criterion_main!(benches);
