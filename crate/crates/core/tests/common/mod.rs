#![allow(dead_code)]

use bapsens::{solve_bap, validate_matrix, Edge, IntervalArray, Perturbation, WeightMatrix, MISSING};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random feasible `n x m` matrix with distinct integer weights in
/// `[0, 1000)` and each entry missing with probability `missing`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, m: usize, missing: f64) -> WeightMatrix {
    loop {
        let mut pool: Vec<u32> = (0..1000).collect();
        pool.shuffle(rng);
        let raw: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if rng.gen_bool(missing) {
                            MISSING
                        } else {
                            f64::from(pool[i * m + j])
                        }
                    })
                    .collect()
            })
            .collect();
        let w = validate_matrix(&raw).unwrap();
        if solve_bap(&w).is_ok() {
            return w;
        }
    }
}

/// Random matrix with small integer weights, so ties are common.
pub fn tied_matrix<R: Rng>(rng: &mut R, n: usize, m: usize) -> WeightMatrix {
    let raw: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..m).map(|_| f64::from(rng.gen_range(0u8..4))).collect())
        .collect();
    validate_matrix(&raw).unwrap()
}

/// Uniform sample from the array with infinite ends truncated to `clamp`.
pub fn sample_inside<R: Rng>(rng: &mut R, l: &IntervalArray, clamp: f64) -> Perturbation {
    let (r, c) = l.dims();
    let mut p = Perturbation::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            let e = Edge::new(i, j);
            let lo = l.lower(e).min(clamp);
            let hi = l.upper(e).min(clamp);
            p.set(e, rng.gen_range(-lo..=hi));
        }
    }
    p
}
