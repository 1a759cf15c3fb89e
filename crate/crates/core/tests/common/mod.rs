#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngSeed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sft_core::{Alphabet, Permutation, PermutationGroup, TreeAutomorphism};

pub const DEFAULT_SEED: u64 = 0x5f7_2024;

/// `SFT_SEED` overrides the fixed default.
pub fn seed() -> u64 {
    std::env::var("SFT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn proptest_config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..Config::default()
    }
}

pub fn random_automorphism(
    rng: &mut impl Rng,
    alphabet: Alphabet,
    depth: usize,
) -> TreeAutomorphism {
    let k = alphabet.size();
    let perms: Vec<Vec<usize>> = (0..alphabet.level_offset(depth))
        .map(|_| {
            let mut p: Vec<usize> = (0..k).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    TreeAutomorphism::from_portrait(alphabet, depth, &perms).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, degree: usize) -> Permutation {
    let mut p: Vec<usize> = (0..degree).collect();
    p.shuffle(rng);
    Permutation::from_images(&p).unwrap()
}

/// Strategy over automorphisms of `X^[depth]` for alphabets of size 2 or 3.
pub fn automorphism(alphabet: Alphabet, depth: usize) -> impl Strategy<Value = TreeAutomorphism> {
    any::<u64>()
        .prop_map(move |s| random_automorphism(&mut ChaCha8Rng::seed_from_u64(s), alphabet, depth))
}

pub fn perms(degree: usize, cycles: &[&str]) -> Vec<Permutation> {
    cycles
        .iter()
        .map(|s| Permutation::parse_cycles(s, degree).unwrap())
        .collect()
}

pub fn group(degree: usize, cycles: &[&str]) -> PermutationGroup {
    PermutationGroup::new(degree, perms(degree, cycles)).unwrap()
}

/// Closure of `gens` by breadth-first multiplication.
pub fn closure(degree: usize, gens: &[Permutation]) -> std::collections::HashSet<Permutation> {
    let mut seen = std::collections::HashSet::new();
    let id = Permutation::identity(degree);
    seen.insert(id.clone());
    let mut queue = vec![id];
    let mut i = 0;
    while i < queue.len() {
        for g in gens {
            let next = queue[i].compose(g);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
        i += 1;
    }
    seen
}
