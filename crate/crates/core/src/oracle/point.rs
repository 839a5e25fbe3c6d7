//! The residue point: one residue `r_m` per modulus, coherent under
//! divisibility (`r_km mod m = r_m`), i.e. a profinite integer.
//!
//! Seed 0 is the profinite zero. Any other seed draws factorial-base digits
//! `d_k ∈ [0, k]` from a ChaCha stream and sets `r_m = Σ_{k<K} d_k·k! mod m`,
//! where `K` is the least index with `m | K!`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::epset::MAX_MODULUS;
use crate::error::{Error, Result};

/// Longest factorial expansion we are willing to walk for one modulus.
const MAX_DIGITS: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct ResiduePoint {
    seed: u64,
    digits: Vec<u64>,
    rng: ChaCha8Rng,
    cache: HashMap<u64, u64>,
}

impl ResiduePoint {
    pub fn new(seed: u64) -> Self {
        ResiduePoint {
            seed,
            digits: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            cache: HashMap::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn digit(&mut self, k: u64) -> u64 {
        while self.digits.len() as u64 <= k {
            let next = self.digits.len() as u64;
            let d = self.rng.gen_range(0..=next);
            self.digits.push(d);
        }
        self.digits[k as usize]
    }

    /// `r_m` for `1 <= m <= MAX_MODULUS`.
    pub fn residue(&mut self, m: u64) -> Result<u64> {
        if m == 0 || m > MAX_MODULUS {
            return Err(Error::OracleUndecided(format!("modulus {m} is outside the supported range")));
        }
        if self.seed == 0 || m == 1 {
            return Ok(0);
        }
        if let Some(&r) = self.cache.get(&m) {
            return Ok(r);
        }
        let m128 = u128::from(m);
        let (mut fact, mut acc, mut k) = (1u128 % m128, 0u128, 0u64);
        while fact != 0 {
            if k >= MAX_DIGITS {
                return Err(Error::OracleUndecided(format!(
                    "residue modulo {m} needs more than {MAX_DIGITS} factorial digits"
                )));
            }
            acc = (acc + u128::from(self.digit(k)) * fact) % m128;
            k += 1;
            fact = fact * u128::from(k) % m128;
        }
        let r = acc as u64;
        self.cache.insert(m, r);
        Ok(r)
    }
}
