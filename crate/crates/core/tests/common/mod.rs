#![allow(dead_code)]

use std::path::PathBuf;

use snp_core::engine::BitVector;
use snp_core::{parse_system, SnpSystem};

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

pub fn load(name: &str) -> SnpSystem {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_system(&text).expect("corpus parses")
}

pub fn example1() -> SnpSystem {
    load("example1.snp")
}

pub fn example3() -> SnpSystem {
    load("example3.snp")
}

pub fn bits(v: &[u8]) -> BitVector {
    BitVector(v.to_vec())
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snp_core::generate::{random_system, GeneratorConfig};

/// `count` reproducible random systems.
pub fn random_systems(seed: u64, count: usize, cfg: &GeneratorConfig) -> Vec<SnpSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_system(&mut rng, cfg)).collect()
}
