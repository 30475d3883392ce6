#![allow(dead_code)]

use std::sync::OnceLock;

use aben_core::pairing::{generate_params, GroupParams, SecurityLevel};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Parameters for `level`, generated once per test binary from a fixed seed.
pub fn params(level: SecurityLevel) -> &'static GroupParams {
    static CELLS: [OnceLock<GroupParams>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let i = SecurityLevel::ALL.iter().position(|l| *l == level).unwrap();
    CELLS[i].get_or_init(|| {
        let mut rng = ChaCha20Rng::seed_from_u64(1000 + u64::from(level.bits()));
        generate_params(level, &mut rng).unwrap()
    })
}

pub fn params80() -> &'static GroupParams {
    params(SecurityLevel::Bits80)
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}
