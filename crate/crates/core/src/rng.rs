//! Deterministic seeding: every random draw in the crate traces back to a
//! user seed plus a stable task label.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmath::{FieldKind, Matrix, Scalar};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable across platforms and releases (FNV-1a over the label, mixed with the seed).
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(seed ^ splitmix64(h))
}

pub fn task_rng(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label))
}

/// Generator for trial `index` of a task; trials are independent of each other's order.
pub fn trial_rng(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(derive_seed(seed, label) ^ splitmix64(index)))
}

/// n×n rational matrix with integer entries uniform in [−bound, bound].
pub fn random_int_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Matrix {
    Matrix::from_fn(n, n, |_, _| Scalar::from_int(rng.gen_range(-bound..=bound)))
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, bound: i64) -> Vec<Matrix> {
    (0..m).map(|_| random_int_matrix(rng, n, bound)).collect()
}

/// Random invertible integer matrix (rejection sampling).
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Matrix {
    loop {
        let g = random_int_matrix(rng, n, bound);
        if g.rank() == n {
            debug_assert_eq!(g.field(), FieldKind::Rational);
            return g;
        }
    }
}
