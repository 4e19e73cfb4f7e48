#![allow(dead_code)]

use influence_dyn::dynamics::{CoefficientMap, CoefficientSchedule, Permutation, Regime};
use influence_dyn::netgen::generate_random_network;
use influence_dyn::{InteractionMatrix, OpinionVector, SimplexVector};
use ndarray::{Array1, Array2};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn network(rng: &mut StdRng, n: usize) -> InteractionMatrix {
    let density = rng.random_range(0.1..0.7);
    generate_random_network(n, density, rng.next_u64()).unwrap()
}

/// A constant, affine or quadratic map whose values on [0, 1] stay in [lo, hi].
pub fn bounded_map(rng: &mut StdRng, lo: f64, hi: f64) -> CoefficientMap {
    let family = rng.random_range(0..3);
    let mut draw = || rng.random_range(lo..=hi);
    match family {
        0 => CoefficientMap::Constant(draw()),
        1 => {
            let (v0, v1) = (draw(), draw());
            CoefficientMap::Affine { intercept: v0, slope: v1 - v0 }
        }
        _ => {
            // Bernstein coefficients in [lo, hi] keep the quadratic inside.
            let (b0, b1, b2) = (draw(), draw(), draw());
            CoefficientMap::Polynomial(vec![b0, 2.0 * (b1 - b0), b0 - 2.0 * b1 + b2])
        }
    }
}

pub fn permutation(rng: &mut StdRng, n: usize) -> Permutation {
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(rng);
    Permutation::new(targets).unwrap()
}

/// Model I: a ∈ [0, 0.5], b ∈ [0, 0.45], so a + b ≤ 0.95.
pub fn model_i_schedule(rng: &mut StdRng, n: usize) -> CoefficientSchedule {
    let a = (0..n).map(|_| bounded_map(rng, 0.0, 0.5)).collect();
    let b = (0..n).map(|_| bounded_map(rng, 0.0, 0.45)).collect();
    let z = permutation(rng, n);
    CoefficientSchedule::new(a, b, z, Regime::ModelI).unwrap()
}

/// Model II with a ∈ [0.05, 0.9].
pub fn model_ii_schedule(rng: &mut StdRng, n: usize) -> CoefficientSchedule {
    let a = (0..n).map(|_| bounded_map(rng, 0.05, 0.9)).collect();
    CoefficientSchedule::model_ii(a).unwrap()
}

/// Any regime: anchored, unanchored, or mixed with a + b ≤ 1.
pub fn any_schedule(rng: &mut StdRng, n: usize) -> CoefficientSchedule {
    match rng.random_range(0..3) {
        0 => model_i_schedule(rng, n),
        1 => {
            let a = (0..n)
                .map(|_| if rng.random_bool(0.2) { CoefficientMap::Identity } else { bounded_map(rng, 0.0, 1.0) })
                .collect();
            CoefficientSchedule::model_ii(a).unwrap()
        }
        _ => {
            let mut a = Vec::with_capacity(n);
            let mut b = Vec::with_capacity(n);
            for _ in 0..n {
                let total = rng.random_range(0.0..=1.0);
                let share = rng.random_range(0.0..=1.0);
                a.push(CoefficientMap::Constant(total * share));
                b.push(CoefficientMap::Constant(total * (1.0 - share)));
            }
            CoefficientSchedule::new(a, b, permutation(rng, n), Regime::General).unwrap()
        }
    }
}

pub fn interior_simplex(rng: &mut StdRng, n: usize) -> SimplexVector {
    let w: Array1<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3).collect();
    SimplexVector::from_weights(w).unwrap()
}

pub fn opinions(rng: &mut StdRng, n: usize) -> OpinionVector {
    OpinionVector::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap()
}

/// Row-stochastic W with w_ii ∈ [0, 0.9] and a strongly connected
/// off-diagonal pattern.
pub fn degroot_weights(rng: &mut StdRng, n: usize) -> Array2<f64> {
    let p = network(rng, n);
    let mut w = p.entries().clone();
    for i in 0..n {
        let self_weight = rng.random_range(0.0..0.9);
        w.row_mut(i).mapv_inplace(|v| v * (1.0 - self_weight));
        w[[i, i]] = self_weight;
    }
    w
}

/// Zero-diagonal doubly stochastic matrix: a convex combination of the cycle
/// `i → i+1` and random derangements.
pub fn doubly_stochastic(rng: &mut StdRng, n: usize) -> InteractionMatrix {
    let mut m = Array2::<f64>::zeros((n, n));
    let terms = rng.random_range(1..=3);
    let mut weights: Vec<f64> = (0..=terms).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for i in 0..n {
        m[[i, (i + 1) % n]] += weights[0];
    }
    for &weight in &weights[1..] {
        let derangement = loop {
            let mut t: Vec<usize> = (0..n).collect();
            t.shuffle(rng);
            if t.iter().enumerate().all(|(i, &j)| i != j) {
                break t;
            }
        };
        for (i, &j) in derangement.iter().enumerate() {
            m[[i, j]] += weight;
        }
    }
    InteractionMatrix::new(m).unwrap()
}

pub fn max_abs(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    influence_dyn::netcore::max_abs_diff(a, b)
}
