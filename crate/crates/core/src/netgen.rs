//! Seeded random interaction networks.
//!
//! The generator is fully specified so that a `(n, density, seed)` triple
//! names the same matrix in any implementation:
//!
//! 1. The PRNG is PCG64 (`pcg_xsl_rr_128_64`) initialized with
//!    `Pcg64::seed_from_u64(seed)`; all randomness comes from `next_u64`.
//! 2. `unit()` is `(next_u64() >> 11) · 2⁻⁵³ ∈ [0, 1)`.
//! 3. A random agent order is drawn by Fisher-Yates: for `i = n−1, ..., 1`
//!    swap positions `i` and `next_u64() mod (i + 1)`.
//! 4. The Hamiltonian cycle `order[k] → order[k+1 mod n]` is always present.
//! 5. Every other off-diagonal pair `(i, j)`, in row-major order, becomes an
//!    edge when `unit() < density`.
//! 6. Each edge, in row-major order, gets weight `1 − unit() ∈ (0, 1]`.
//! 7. Rows are divided by their sums.

use ndarray::Array2;
use rand::{RngCore, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::{Error, Result};
use crate::netcore::InteractionMatrix;

/// Deterministic source of the raw draws used by [`generate_random_network`].
#[derive(Debug, Clone)]
pub struct NetworkRng(Pcg64);

impl NetworkRng {
    pub fn new(seed: u64) -> Self {
        Self(Pcg64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform-ish index in `0..bound` by modulo reduction.
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Strongly connected random interaction matrix; see the module docs for the
/// exact algorithm. A density of 0 keeps only the Hamiltonian cycle.
pub fn generate_random_network(n: usize, density: f64, seed: u64) -> Result<InteractionMatrix> {
    if n < 2 {
        return Err(Error::TooFewAgents { min: 2, found: n });
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::NetworkParams(format!("edge density {density} outside [0, 1]")));
    }
    let mut rng = NetworkRng::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);

    let mut edges = Array2::from_elem((n, n), false);
    for k in 0..n {
        edges[[order[k], order[(k + 1) % n]]] = true;
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if !edges[[i, j]] && rng.unit() < density {
                edges[[i, j]] = true;
            }
        }
    }
    let mut weights = Array2::zeros((n, n));
    for ((i, j), &edge) in edges.indexed_iter() {
        if edge {
            weights[[i, j]] = 1.0 - rng.unit();
        }
    }
    for mut row in weights.rows_mut() {
        let sum = row.sum();
        row /= sum;
    }
    InteractionMatrix::new(weights)
}
