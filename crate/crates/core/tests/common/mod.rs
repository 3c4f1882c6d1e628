#![allow(dead_code)]

use fairkc::metric::{balanced_groups, generate, GeneratorConfig, MetricKind};
use fairkc::FairInstance;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Draws requirements with `Σα <= k` and `α_i <= |G_i|` by handing out
/// `r` unit increments to random groups with room left.
pub fn random_requirements<R: Rng>(groups: &[Vec<usize>], k: usize, rng: &mut R) -> Vec<usize> {
    let mut alpha = vec![0; groups.len()];
    let r = rng.gen_range(0..=k);
    for _ in 0..r {
        let open: Vec<usize> = (0..groups.len())
            .filter(|&i| alpha[i] < groups[i].len())
            .collect();
        match open.choose(rng) {
            Some(&i) => alpha[i] += 1,
            None => break,
        }
    }
    alpha
}

pub struct Shape {
    pub kind: MetricKind,
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

/// A random instance with `n <= max_n`, `k, t <= 4`, rotating through the
/// generator kinds. Line instances get random positions.
pub fn small_instance(seed: u64, max_n: usize) -> (Shape, FairInstance) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
    let kind = MetricKind::ALL[(seed % 4) as usize];
    let n = rng.gen_range(2..=max_n);
    let k = rng.gen_range(1..=n.min(4));
    let t = rng.gen_range(1..=n.min(4));
    let mut cfg = GeneratorConfig::new(kind, n, seed);
    cfg.cluster_count = rng.gen_range(1..=4);
    cfg.spread = rng.gen_range(0.0..8.0);
    if kind == MetricKind::Line {
        cfg.positions = Some(
            (0..n)
                .map(|_| rng.gen_range(0.0..50.0f64).round())
                .collect(),
        );
    }
    let g = generate(&cfg).expect("valid generator config");
    let groups = balanced_groups(n, t, &mut rng);
    let alpha = random_requirements(&groups, k, &mut rng);
    let inst = FairInstance::new(g.metric, k, groups, alpha).expect("valid instance");
    (Shape { kind, n, k, t }, inst)
}

/// A large instance with balanced groups and an even requirement split.
pub fn large_instance(kind: MetricKind, n: usize, k: usize, t: usize, seed: u64) -> FairInstance {
    let g = generate(&GeneratorConfig::new(kind, n, seed)).expect("valid generator config");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = balanced_groups(n, t, &mut rng);
    let alpha = fairkc::metric::default_requirements(&groups, k);
    FairInstance::new(g.metric, k, groups, alpha).expect("valid instance")
}
