//! Probabilistic primality testing and prime sampling.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = 4096usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                let mut j = i * i;
                while j < limit {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        (0..limit).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// Uniform integer in `[0, bound)` by rejection sampling.
pub fn random_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let len = bits.div_ceil(8) as usize;
    let excess = len as u64 * 8 - bits;
    let mut buf = vec![0u8; len];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= 0xffu8 >> excess;
        let v = BigUint::from_bytes_be(&buf);
        if &v < bound {
            return v;
        }
    }
}

/// Random integer with exactly `bits` bits.
pub fn random_exact_bits<R: RngCore + ?Sized>(bits: u64, rng: &mut R) -> BigUint {
    assert!(bits >= 2);
    let top = BigUint::one() << (bits - 1);
    &top + random_below(&top, rng)
}

/// Trial division followed by `rounds` Miller-Rabin rounds with random bases.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &p in small_primes() {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }

    let n_minus_one = n - 1u32;
    let shift = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> shift;
    let span = n - 3u32;

    'witness: for _ in 0..rounds {
        let a = random_below(&span, rng) + &two;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..shift {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random prime of exactly `bits` bits.
pub fn random_prime<R: RngCore + ?Sized>(bits: u64, rounds: u32, rng: &mut R) -> BigUint {
    loop {
        let mut candidate = random_exact_bits(bits, rng);
        if candidate.is_even() {
            candidate += 1u32;
        }
        if candidate.bits() == bits && is_probable_prime(&candidate, rounds, rng) {
            return candidate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn naive_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn agrees_with_trial_division() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for n in 0..20_000u64 {
            assert_eq!(
                is_probable_prime(&BigUint::from(n), 16, &mut rng),
                naive_is_prime(n),
                "n={n}"
            );
        }
        // large values beyond the trial-division table
        for n in (16_000_000u64..16_002_000).step_by(1) {
            assert_eq!(
                is_probable_prime(&BigUint::from(n), 16, &mut rng),
                naive_is_prime(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn rejects_carmichael_numbers() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265, 321197185] {
            assert!(!is_probable_prime(&BigUint::from(n), 32, &mut rng));
        }
    }

    #[test]
    fn known_large_prime() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        // 2^127 - 1
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_probable_prime(&m127, 64, &mut rng));
        assert!(!is_probable_prime(&(&m127 + 2u32), 64, &mut rng));
    }

    #[test]
    fn random_prime_has_exact_bits() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        for bits in [8u64, 33, 160] {
            let p = random_prime(bits, 32, &mut rng);
            assert_eq!(p.bits(), bits);
        }
    }
}
