mod common;

use common::*;
use influence_dyn::dynamics::{
    best_response, consensus_operator, from_degroot, from_friedkin_johnsen, model_ii_weights, simulate_issue, step,
    CoefficientMap, CoefficientSchedule, CostParams, IssueOperator, Regime,
};
use influence_dyn::netcore::{solve_linear, strongly_connected, validate_interaction_matrix, PowerIterationOptions};
use influence_dyn::netgen::generate_random_network;
use influence_dyn::power::{check_equilibrium, evolve, step_ii_direct, step_ii_formula, AppraisalMap, Method};
use influence_dyn::{OpinionVector, SimplexVector};
use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::Rng;

fn transitive_closure(adj: &Array2<bool>) -> Array2<bool> {
    let n = adj.nrows();
    let mut reach = adj.clone();
    for i in 0..n {
        reach[[i, i]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[[i, k]] && reach[[k, j]] {
                    reach[[i, j]] = true;
                }
            }
        }
    }
    reach
}

#[test]
fn strong_connectivity_matches_floyd_warshall() {
    let mut rng = rng(1);
    for n in 1..=4usize {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        for mask in 0u32..(1 << slots.len()) {
            let mut adj = Array2::from_elem((n, n), false);
            let mut m = Array2::<f64>::zeros((n, n));
            for (bit, &(i, j)) in slots.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    adj[[i, j]] = true;
                    m[[i, j]] = rng.random_range(0.01..1.0);
                }
            }
            // Self-loops never change reachability.
            for i in 0..n {
                if rng.random_bool(0.5) {
                    m[[i, i]] = 0.5;
                }
            }
            let expected = transitive_closure(&adj).iter().all(|&r| r);
            assert_eq!(strongly_connected(m.view()).unwrap(), expected, "n = {n}, mask = {mask:b}");
        }
    }
}

#[test]
fn linear_solves_have_small_residuals() {
    let mut rng = rng(2);
    for _ in 0..1000 {
        let n = rng.random_range(1..=20);
        let mut m = Array2::<f64>::from_shape_fn((n, n), |_| rng.random_range(-1.0..1.0));
        for i in 0..n {
            m[[i, i]] += if rng.random_bool(0.5) { n as f64 } else { -(n as f64) };
        }
        // Shuffle rows so the pivot is rarely on the diagonal.
        let mut rows: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
        let m = m.select(ndarray::Axis(0), &rows);
        let scale = 10f64.powi(rng.random_range(-3..=3));
        let b = Array1::from_shape_fn(n, |_| scale * rng.random_range(-1.0..1.0));
        let z = solve_linear(m.view(), b.view()).unwrap();
        let bound = 1e-10 * b.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        assert!(max_abs(&m.dot(&z), &b) <= bound);
    }
}

#[test]
fn step_matches_per_agent_best_responses() {
    let mut rng = rng(3);
    for _ in 0..300 {
        let n = rng.random_range(3..=9);
        let p = network(&mut rng, n);
        let sched = any_schedule(&mut rng, n);
        let x = interior_simplex(&mut rng, n);
        let (y, y0) = (opinions(&mut rng, n), opinions(&mut rng, n));
        let next = step(&y, &y0, &p, &sched, &x).unwrap();
        let coeffs = sched.at(&x).unwrap();
        for i in 0..n {
            let sigma = influence_dyn::dynamics::neighbor_aggregate(&p, &y, i);
            let scalar = best_response(i, y[i], sigma, &y0, &coeffs.agent(i)).unwrap();
            assert!((next[i] - scalar).abs() <= 1e-14, "agent {i}: {} vs {scalar}", next[i]);
        }
    }
}

#[test]
fn consensus_weights_are_stochastic() {
    let mut rng = rng(4);
    for _ in 0..200 {
        let n = rng.random_range(3..=10);
        let p = network(&mut rng, n);
        let x = interior_simplex(&mut rng, n);
        let w = consensus_operator(&p, &model_i_schedule(&mut rng, n).at(&x).unwrap()).unwrap();
        for row in w.rows() {
            assert!((row.sum() - 1.0).abs() <= 1e-10);
        }
        let coeffs = model_ii_schedule(&mut rng, n).at(&x).unwrap();
        let v = model_ii_weights(&p, &coeffs, PowerIterationOptions::default()).unwrap();
        assert!(v.as_array().iter().all(|&e| e >= 0.0));
        assert!((v.as_array().sum() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn issue_trajectories_replay_exactly() {
    let mut rng = rng(5);
    for _ in 0..50 {
        let n = rng.random_range(3..=8);
        let p = network(&mut rng, n);
        let sched = any_schedule(&mut rng, n);
        let x = interior_simplex(&mut rng, n);
        let y0 = opinions(&mut rng, n);
        let tol = 1e-10;
        let traj = simulate_issue(&y0, &p, &sched, &x, tol, 5_000).unwrap();
        let op = IssueOperator::new(&p, &sched.at(&x).unwrap()).unwrap();
        for pair in traj.states.windows(2) {
            assert_eq!(op.apply(&pair[0], &y0).unwrap(), pair[1]);
        }
        if let Some(consensus) = &traj.consensus {
            assert!(traj.converged);
            assert!(max_abs(traj.last().as_array(), consensus.as_array()) <= tol);
        }
    }
}

#[test]
fn fully_susceptible_friedkin_johnsen_is_degroot() {
    let mut rng = rng(6);
    for _ in 0..20 {
        let n = rng.random_range(3..=8);
        let w = degroot_weights(&mut rng, n);
        let (p1, s1) = from_degroot(w.view()).unwrap();
        let (p2, s2) = from_friedkin_johnsen(w.view(), &vec![1.0; n]).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(s1, s2);
        assert_eq!(s1.regime(), Regime::ModelII);
    }
}

#[test]
fn single_absorbing_agent_returns_its_vertex() {
    let mut rng = rng(7);
    for _ in 0..50 {
        let n = rng.random_range(3..=8);
        let p = network(&mut rng, n);
        let k = rng.random_range(0..n);
        let maps = (0..n)
            .map(|i| if i == k { CoefficientMap::Constant(1.0) } else { bounded_map(&mut rng, 0.0, 0.9) })
            .collect();
        let sched = CoefficientSchedule::model_ii(maps).unwrap();
        let x = interior_simplex(&mut rng, n);
        let perron = p.perron_vector(PowerIterationOptions::default()).unwrap();
        let vertex = SimplexVector::vertex(n, k);
        assert_eq!(step_ii_direct(&x, &p, &sched).unwrap(), vertex);
        assert_eq!(step_ii_formula(&x, &perron, &sched).unwrap(), vertex);
    }
}

#[test]
fn power_trajectories_stay_on_the_simplex() {
    let mut rng = rng(8);
    for k in 0..60 {
        let n = rng.random_range(3..=7);
        let p = network(&mut rng, n);
        let sched = if k % 2 == 0 { model_i_schedule(&mut rng, n) } else { model_ii_schedule(&mut rng, n) };
        let method = if k % 4 < 2 { Method::Direct } else { Method::TheoremForm };
        let map = AppraisalMap::new(p, sched, method).unwrap();
        let tol = 1e-10;
        let traj = evolve(&interior_simplex(&mut rng, n), &map, tol, 2_000).unwrap();
        for state in &traj.states {
            assert!(state.as_array().iter().all(|&e| e >= 0.0));
            assert!((state.as_array().sum() - 1.0).abs() <= 1e-12);
        }
        if let Some(eq) = &traj.equilibrium {
            let (ok, residual) = check_equilibrium(eq, &map, tol).unwrap();
            assert!(ok, "residual {residual:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_networks_are_valid(n in 2usize..16, density in 0.0f64..=1.0, seed in any::<u64>()) {
        let p = generate_random_network(n, density, seed).unwrap();
        prop_assert!(validate_interaction_matrix(p.entries().view()).unwrap().is_ok());
        prop_assert_eq!(p, generate_random_network(n, density, seed).unwrap());
    }

    #[test]
    fn perron_vectors_are_positive_fixed_points(n in 2usize..12, density in 0.0f64..=1.0, seed in any::<u64>()) {
        let p = generate_random_network(n, density, seed).unwrap();
        let opts = PowerIterationOptions::default();
        let w = p.perron_vector(opts).unwrap();
        let w = w.as_array();
        prop_assert!(w.iter().all(|&e| e > 0.0));
        prop_assert!((w.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(max_abs(&p.entries().t().dot(w), w) <= opts.tol);
    }

    #[test]
    fn weights_normalize_onto_the_simplex(weights in prop::collection::vec(0.0f64..1e6, 1..20)) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let x = SimplexVector::from_weights(Array1::from(weights)).unwrap();
        prop_assert!(x.as_array().iter().all(|&e| e >= 0.0));
        prop_assert!((x.as_array().sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn anchored_steps_stay_in_range(seed in any::<u64>(), n in 3usize..9) {
        let mut rng = rng(seed);
        let p = network(&mut rng, n);
        let sched = any_schedule(&mut rng, n);
        let x = interior_simplex(&mut rng, n);
        let coeffs = sched.at(&x).unwrap();
        prop_assert!(coeffs.closure_error() <= 1e-12);
        let op = IssueOperator::new(&p, &coeffs).unwrap();
        let (y, y0) = (opinions(&mut rng, n), opinions(&mut rng, n));
        let raw = op.apply_raw(y.as_array().view(), y0.as_array().view());
        prop_assert!(raw.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        prop_assert!(OpinionVector::new(raw.mapv(|v| v.clamp(0.0, 1.0))).is_ok());
    }

    #[test]
    fn cost_is_minimized_by_the_best_response(
        own in 0.0f64..1.0, aggregate in 0.0f64..1.0, anchor in 0.0f64..1.0, y in 0.0f64..1.0,
        weight in 0.1f64..10.0,
    ) {
        let params = CostParams::new(weight, weight, 0.0).unwrap();
        let m = own + aggregate + anchor;
        let at_min = influence_dyn::dynamics::cost_eval(m, own, aggregate, anchor, params);
        let elsewhere = influence_dyn::dynamics::cost_eval(y, own, aggregate, anchor, params);
        prop_assert!(at_min <= elsewhere + 1e-12);
    }
}
