//! Shared input builders for the benchmarks.

use pencilform::{Matrix, Prime, SkewTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_skew_pair(seed: u64, p: u64, m: usize) -> SkewTuple {
    let p = Prime::new(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = (0..2)
        .map(|_| {
            let mut a = Matrix::zeros(p, m, m);
            for i in 0..m {
                for j in i + 1..m {
                    let v = rng.random_range(0..p.get());
                    a.set(i, j, v);
                    a.set(j, i, p.neg(v));
                }
            }
            a
        })
        .collect();
    SkewTuple::new(p, m, mats).unwrap()
}
