use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Int, IntMatrix};

/// Product of `steps` random elementary row operations on the `d × d` identity.
///
/// Operations are add-a-multiple (factor in `[-2, 2] \ {0}`), swap and negate,
/// drawn from a ChaCha8 stream seeded with `seed`.
pub fn random_unimodular(d: usize, seed: u64, steps: usize) -> IntMatrix {
    assert!(d >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = IntMatrix::identity(d).to_rows();
    for _ in 0..steps {
        let op = if d == 1 { 2 } else { rng.random_range(0..3) };
        match op {
            0 => {
                let i = rng.random_range(0..d);
                let j = (i + rng.random_range(1..d)) % d;
                let mut k: i64 = rng.random_range(1..=2);
                if rng.random_bool(0.5) {
                    k = -k;
                }
                let k = Int::from(k);
                let src = rows[j].clone();
                for (x, s) in rows[i].iter_mut().zip(&src) {
                    *x += &k * s;
                }
            }
            1 => {
                let i = rng.random_range(0..d);
                let j = (i + rng.random_range(1..d)) % d;
                rows.swap(i, j);
            }
            _ => {
                let i = rng.random_range(0..d);
                for x in rows[i].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    IntMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::determinant;
    use num_traits::Signed;

    #[test]
    fn zero_steps_is_identity() {
        assert_eq!(random_unimodular(4, 7, 0), IntMatrix::identity(4));
    }

    #[test]
    fn always_unimodular_and_deterministic() {
        for seed in 0..50 {
            for d in 1..5 {
                let m = random_unimodular(d, seed, 25);
                assert_eq!(determinant(&m).unwrap().abs(), Int::from(1));
                assert_eq!(m, random_unimodular(d, seed, 25));
            }
        }
    }
}
