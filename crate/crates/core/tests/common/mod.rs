#![allow(dead_code)]

use bundling::model::{ProblemSpec, TypeDistribution, ValueExpr};
use bundling::Bundle;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random additive-plus-synergy instance on `U[0, 1]` with zero costs.
///
/// Item `i` is worth `a_i t^{e_i}`; every subset of two or more items may
/// carry a nonnegative synergy monomial, and a bundle is worth its items plus
/// the synergies of all its subsets, so values grow with inclusion.
pub fn random_instance(rng: &mut ChaCha8Rng, grid: usize) -> bundling::Result<ProblemSpec> {
    let n: usize = rng.gen_range(2..=3);
    let items: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.5..1.5), rng.gen_range(0.4..3.0))).collect();
    let mut synergy: Vec<Option<(f64, f64)>> = vec![None; 1 << n];
    for (mask, s) in synergy.iter_mut().enumerate() {
        if mask.count_ones() >= 2 && rng.gen_bool(0.6) {
            *s = Some((rng.gen_range(0.05..0.6), rng.gen_range(0.4..3.0)));
        }
    }
    let mut entries = Vec::new();
    for mask in 1..(1usize << n) {
        let mut terms: Vec<(f64, f64)> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect();
        for (sub, s) in synergy.iter().enumerate() {
            if let Some(s) = s {
                if sub & mask == sub {
                    terms.push(*s);
                }
            }
        }
        entries.push((Bundle(mask as u32), ValueExpr::monomials(&terms), 0.0));
    }
    ProblemSpec::from_bundles(n, &entries, TypeDistribution::uniform(0.0, 1.0), grid)
}

/// Random instances that load and pass every assumption check.
pub fn validated_instances(seed: u64, count: usize, grid: usize) -> Vec<ProblemSpec> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100 * count, "generator rejects too many instances");
        if let Ok(spec) = random_instance(&mut r, grid) {
            if spec.validation().passed() {
                out.push(spec);
            }
        }
    }
    out
}
