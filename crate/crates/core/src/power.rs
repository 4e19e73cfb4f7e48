//! Reflected appraisal over a sequence of issues.
//!
//! After each issue an agent's new self-appraisal is its social power on that
//! issue: the column mean of the consensus operator `(I − A − BP)⁻¹C` for
//! anchored (Model I) schedules, or the Perron weight `v_i` of
//! `A + (I − A)P` for unanchored (Model II) schedules. Each map has a second,
//! algebraically equivalent form ([`Method::TheoremForm`]) that the tests use
//! as an independent route.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::dynamics::{absorbing_agents, consensus_operator, model_ii_weights, CoefficientSchedule, Regime};
use crate::error::{Error, Result};
use crate::netcore::{
    dominant_left_eigenpair, max_abs_diff, InteractionMatrix, PerronPair, PowerIterationOptions, SimplexVector,
};

pub const DEFAULT_STEP_TOL: f64 = 1e-10;
pub const DEFAULT_EQUILIBRIUM_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ISSUES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Column means of the consensus operator, or the Perron vector of the
    /// issue's transition matrix.
    #[default]
    Direct,
    /// `Zᵀu(x)` with `u` the Perron vector of `U(x)` (Model I), or the
    /// normalized `p_i / (1 − a_i(x_i))` (Model II).
    TheoremForm,
}

fn require(sched: &CoefficientSchedule, regime: Regime) -> Result<()> {
    if sched.regime() != regime {
        return Err(Error::RegimeMismatch { expected: regime.name(), found: sched.regime().name() });
    }
    Ok(())
}

fn check_n(p: &InteractionMatrix, sched: &CoefficientSchedule, x: &SimplexVector) -> Result<()> {
    for len in [sched.n(), x.len()] {
        if len != p.n() {
            return Err(Error::DimensionMismatch { expected: p.n(), found: len });
        }
    }
    Ok(())
}

/// Column means of `(I − A(x) − B(x)P)⁻¹ C(x)`.
pub fn step_i_direct(x: &SimplexVector, p: &InteractionMatrix, sched: &CoefficientSchedule) -> Result<SimplexVector> {
    require(sched, Regime::ModelI)?;
    check_n(p, sched, x)?;
    let w = consensus_operator(p, &sched.at(x)?)?;
    let n = p.n() as f64;
    SimplexVector::from_weights(w.sum_axis(ndarray::Axis(0)) / n)
}

/// `U(x) = 𝟙𝟙ᵀ/n − (I − A − B)⁻¹ B (I − P)`.
pub fn build_u(x: &SimplexVector, p: &InteractionMatrix, sched: &CoefficientSchedule) -> Result<Array2<f64>> {
    require(sched, Regime::ModelI)?;
    check_n(p, sched, x)?;
    let coeffs = sched.at(x)?;
    let n = p.n();
    let mut u = Array2::from_elem((n, n), 1.0 / n as f64);
    for i in 0..n {
        let ratio = coeffs.b[i] / coeffs.d[i];
        for j in 0..n {
            let laplacian = if i == j { 1.0 } else { 0.0 } - p.get(i, j);
            u[[i, j]] -= ratio * laplacian;
        }
    }
    Ok(u)
}

/// Diagonal shift making every entry of `U + τI` positive.
pub fn u_shift(u: &Array2<f64>) -> f64 {
    let min_diag = u.diag().iter().copied().fold(f64::INFINITY, f64::min);
    (-min_diag).max(0.0) + 1.0
}

/// Perron pair of `U(x)`.
pub fn u_eigenpair(
    x: &SimplexVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    opts: PowerIterationOptions,
) -> Result<PerronPair> {
    let u = build_u(x, p, sched)?;
    dominant_left_eigenpair(u.view(), u_shift(&u), opts)
}

fn step_i_eigen_with(
    x: &SimplexVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    opts: PowerIterationOptions,
) -> Result<SimplexVector> {
    let u = u_eigenpair(x, p, sched, opts)?.vector;
    SimplexVector::new(sched.permutation().apply_transpose(u.as_array().view()))
}

/// `uᵀZ` with `u` the Perron vector of `U(x)`.
pub fn step_i_eigen(x: &SimplexVector, p: &InteractionMatrix, sched: &CoefficientSchedule) -> Result<SimplexVector> {
    step_i_eigen_with(x, p, sched, PowerIterationOptions::default())
}

fn step_ii_direct_with(
    x: &SimplexVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    opts: PowerIterationOptions,
) -> Result<SimplexVector> {
    require(sched, Regime::ModelII)?;
    check_n(p, sched, x)?;
    model_ii_weights(p, &sched.at(x)?, opts)
}

/// Perron vector of `A(x) + (I − A(x))P`.
pub fn step_ii_direct(x: &SimplexVector, p: &InteractionMatrix, sched: &CoefficientSchedule) -> Result<SimplexVector> {
    step_ii_direct_with(x, p, sched, PowerIterationOptions::default())
}

/// `(p_i / (1 − a_i(x_i)))_i` normalized, where `perron` is the Perron vector
/// of `P`; `e_i` when agent `i` alone has `a_i(x_i) = 1`.
pub fn step_ii_formula(
    x: &SimplexVector,
    perron: &SimplexVector,
    sched: &CoefficientSchedule,
) -> Result<SimplexVector> {
    require(sched, Regime::ModelII)?;
    let n = sched.n();
    for len in [x.len(), perron.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let coeffs = sched.at(x)?;
    match absorbing_agents(&coeffs).as_slice() {
        [] => {}
        [i] => return Ok(SimplexVector::vertex(n, *i)),
        many => return Err(Error::Degenerate { agents: many.to_vec() }),
    }
    let weights: Array1<f64> = (0..n).map(|i| perron[i] / (1.0 - coeffs.a[i])).collect();
    SimplexVector::from_weights(weights)
}

/// The self-appraisal update `x(s+1) = F(x(s))` for a fixed network and
/// schedule.
#[derive(Debug, Clone)]
pub struct AppraisalMap {
    p: InteractionMatrix,
    sched: CoefficientSchedule,
    method: Method,
    perron: SimplexVector,
    opts: PowerIterationOptions,
}

impl AppraisalMap {
    pub fn new(p: InteractionMatrix, sched: CoefficientSchedule, method: Method) -> Result<Self> {
        Self::with_options(p, sched, method, PowerIterationOptions::default())
    }

    pub fn with_options(
        p: InteractionMatrix,
        sched: CoefficientSchedule,
        method: Method,
        opts: PowerIterationOptions,
    ) -> Result<Self> {
        if sched.n() != p.n() {
            return Err(Error::DimensionMismatch { expected: p.n(), found: sched.n() });
        }
        if sched.regime() == Regime::General {
            return Err(Error::RegimeMismatch { expected: "model_i or model_ii", found: "general" });
        }
        let perron = p.perron_vector(opts)?;
        Ok(Self { p, sched, method, perron, opts })
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn interaction(&self) -> &InteractionMatrix {
        &self.p
    }

    pub fn schedule(&self) -> &CoefficientSchedule {
        &self.sched
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Perron vector of `P`.
    pub fn perron(&self) -> &SimplexVector {
        &self.perron
    }

    pub fn apply(&self, x: &SimplexVector) -> Result<SimplexVector> {
        match (self.sched.regime(), self.method) {
            (Regime::ModelI, Method::Direct) => step_i_direct(x, &self.p, &self.sched),
            (Regime::ModelI, Method::TheoremForm) => step_i_eigen_with(x, &self.p, &self.sched, self.opts),
            (Regime::ModelII, Method::Direct) => step_ii_direct_with(x, &self.p, &self.sched, self.opts),
            (Regime::ModelII, Method::TheoremForm) => step_ii_formula(x, &self.perron, &self.sched),
            (Regime::General, _) => unreachable!("rejected at construction"),
        }
    }
}

/// Self-appraisals `x(0), x(1), ...` over the issue sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTrajectory {
    pub states: Vec<SimplexVector>,
    pub converged: bool,
    /// `‖x(s+1) − x(s)‖∞` at the last performed issue (infinite if none).
    pub residual: f64,
    /// The state `x(s)` whose update moved it by at most the tolerance, so
    /// `‖F(x*) − x*‖∞ ≤ tol` holds exactly.
    pub equilibrium: Option<SimplexVector>,
}

impl PowerTrajectory {
    pub fn issues(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> &SimplexVector {
        self.states.last().expect("trajectory holds x(0)")
    }
}

/// Plain fixed-point iteration of the appraisal map.
pub fn evolve(x0: &SimplexVector, map: &AppraisalMap, tol: f64, max_issues: usize) -> Result<PowerTrajectory> {
    if x0.len() != map.n() {
        return Err(Error::DimensionMismatch { expected: map.n(), found: x0.len() });
    }
    let mut states = vec![x0.clone()];
    let mut residual = f64::INFINITY;
    let mut equilibrium = None;
    for _ in 0..max_issues {
        let current = states.last().expect("non-empty");
        let next = map.apply(current)?;
        residual = max_abs_diff(next.as_array(), current.as_array());
        let done = residual <= tol;
        if done {
            equilibrium = Some(current.clone());
        }
        states.push(next);
        if done {
            break;
        }
    }
    log::debug!("evolve: {} issues, residual {residual:e}", states.len() - 1);
    Ok(PowerTrajectory { converged: equilibrium.is_some(), states, residual, equilibrium })
}

/// `(‖F(x) − x‖∞ ≤ tol, ‖F(x) − x‖∞)`.
pub fn check_equilibrium(x: &SimplexVector, map: &AppraisalMap, tol: f64) -> Result<(bool, f64)> {
    let residual = max_abs_diff(map.apply(x)?.as_array(), x.as_array());
    Ok((residual <= tol, residual))
}

/// True iff some node `c` touches every edge of the positive-entry digraph.
pub fn has_star_topology(p: &InteractionMatrix) -> bool {
    let n = p.n();
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && p.get(i, j) > 0.0).collect();
    (0..n).any(|c| edges.iter().all(|&(i, j)| i == c || j == c))
}
