use hcitm::gen::{gen_er, gen_kuniform, gen_sf, GeneratorKind, GeneratorSpec};
use hcitm::harness::least_squares_slope;
use hcitm::Hypergraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

fn spec(
    kind: GeneratorKind,
    nodes: usize,
    edges: usize,
    param: f64,
    rng_seed: u64,
) -> GeneratorSpec {
    GeneratorSpec {
        kind,
        nodes,
        edges,
        param,
        threshold: 0.5,
        rng_seed,
    }
}

fn mean_degree(h: &Hypergraph, nodes: usize) -> f64 {
    (0..h.node_count()).map(|i| h.degree(i)).sum::<usize>() as f64 / nodes as f64
}

#[test]
fn er_mean_hyperdegree() {
    for seed in 0..10 {
        let h = gen_er(&spec(GeneratorKind::Er, 10_000, 3_000, 3.0, seed))
            .unwrap()
            .graph;
        let k = mean_degree(&h, 10_000);
        assert!(
            (k - 3.0).abs() <= 0.03 * 3.0,
            "seed {seed}: mean hyperdegree {k}"
        );
    }
}

/// Kolmogorov-Smirnov distance between realized edge sizes and
/// Binomial(N, p), including dropped empty edges as size 0.
#[test]
fn er_edge_sizes_are_binomial() {
    let (n, m, k) = (2_000usize, 2_000usize, 3.0);
    let g = gen_er(&spec(GeneratorKind::Er, n, m, k, 5)).unwrap();
    let mut sizes: Vec<u64> = (0..g.graph.edge_count())
        .map(|e| g.graph.edge_size(e) as u64)
        .collect();
    sizes.extend(std::iter::repeat_n(0, g.metadata.dropped_edges));
    sizes.sort_unstable();
    let p = k / m as f64;
    // Reference CDF by sampling a large independent binomial set.
    let bin = Binomial::new(n as u64, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut reference: Vec<u64> = (0..200_000).map(|_| bin.sample(&mut rng)).collect();
    reference.sort_unstable();
    let cdf = |xs: &[u64], x: u64| xs.partition_point(|&v| v <= x) as f64 / xs.len() as f64;
    let d = (0..=*sizes.last().unwrap())
        .map(|x| (cdf(&sizes, x) - cdf(&reference, x)).abs())
        .fold(0.0, f64::max);
    // 1.36 / sqrt(m) is the 5% critical value.
    assert!(d < 1.36 / (m as f64).sqrt(), "KS distance {d}");
}

#[test]
fn kuniform_mean_hyperdegree() {
    for seed in 0..10 {
        let h = gen_kuniform(&spec(GeneratorKind::Kuf, 10_000, 5_000, 5.0, seed))
            .unwrap()
            .graph;
        let k = mean_degree(&h, 10_000);
        assert!(
            (k - 2.5).abs() <= 0.03 * 2.5,
            "seed {seed}: mean hyperdegree {k}"
        );
        let total: usize = (0..h.node_count()).map(|i| h.degree(i)).sum();
        assert_eq!(total, 5 * 5_000);
    }
}

/// Slope of log frequency against log hyperdegree over the degrees seen
/// at least 10 times, pooled over 10 seeds.
#[test]
fn sf_degree_tail_follows_exponent() {
    let mut counts = vec![0u64; 101];
    for seed in 0..10 {
        let h = gen_sf(&spec(GeneratorKind::Sf, 10_000, 5_000, 1.5, seed))
            .unwrap()
            .graph;
        for i in 0..h.node_count() {
            counts[h.degree(i)] += 1;
        }
    }
    let points: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .filter(|&(k, &c)| k > 0 && c >= 10)
        .map(|(k, &c)| ((k as f64).ln(), (c as f64).ln()))
        .collect();
    let slope = least_squares_slope(&points).unwrap();
    assert!((slope + 1.5).abs() <= 0.3, "slope {slope}");
}

#[test]
fn sf_steep_exponent_concentrates_on_one() {
    let h = gen_sf(&spec(GeneratorKind::Sf, 10_000, 5_000, 4.0, 1))
        .unwrap()
        .graph;
    let ones = (0..h.node_count()).filter(|&i| h.degree(i) == 1).count();
    assert!(
        ones as f64 / 10_000.0 > 0.9,
        "{ones} nodes of hyperdegree 1"
    );
}
