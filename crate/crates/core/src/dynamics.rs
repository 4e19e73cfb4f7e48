//! Opinion formation on a single issue.
//!
//! Agent `i` holds an opinion `y_i(t)` in `[0, 1]` and, at every step, moves
//! to the minimizer of a quadratic cost that pulls it towards three anchors:
//! its own current opinion (weight `a_i`), the aggregate `σ_i = Σ_j p_ij y_j`
//! of its neighbors (weight `b_i`) and a fixed combination of the initial
//! opinions (weights `c_ij`). In matrix form
//!
//! ```text
//! y(t+1) = (A + B P) y(t) + C y(0),    C = (I − A − B) Z,
//! ```
//!
//! with `A`, `B` diagonal and `Z` a permutation matrix. The weights `a_i`,
//! `b_i` are functions of the agent's self-appraisal `x_i`; see
//! [`CoefficientSchedule`].

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netcore::{
    dominant_left_eigenvector, max_abs_diff, InteractionMatrix, LuFactorization, OpinionVector, PowerIterationOptions,
    SimplexVector, STOCHASTIC_TOL,
};

/// Number of points of the `[0, 1]` grid on which coefficient maps are checked.
pub const GRID_POINTS: usize = 1001;

/// Tolerance on `a_i + b_i + Σ_j c_ij = 1` and on coefficient bounds.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// A self-weight at or above `1 - ABSORBING_TOL` makes an agent absorbing.
pub const ABSORBING_TOL: f64 = 1e-12;

/// Row-sum tolerance of the consensus operator `(I − A − BP)⁻¹C`.
pub const CONSENSUS_ROW_TOL: f64 = 1e-10;

/// Analytic scalar map `x ↦ a(x)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientMap {
    Constant(f64),
    Affine {
        intercept: f64,
        slope: f64,
    },
    /// Coefficients in increasing degree: `c0 + c1 x + c2 x² + ...`.
    Polynomial(Vec<f64>),
    Identity,
}

impl CoefficientMap {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Affine { intercept, slope } => intercept + slope * x,
            Self::Polynomial(coeffs) => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Self::Identity => x,
        }
    }

    /// The map `x ↦ 1 − self(x)`, in the same family.
    pub fn complement(&self) -> Self {
        match self {
            Self::Constant(c) => Self::Constant(1.0 - c),
            Self::Affine { intercept, slope } => Self::Affine { intercept: 1.0 - intercept, slope: -slope },
            Self::Polynomial(coeffs) => {
                let mut out: Vec<f64> = coeffs.iter().map(|c| -c).collect();
                if out.is_empty() {
                    out.push(0.0);
                }
                out[0] += 1.0;
                Self::Polynomial(out)
            }
            Self::Identity => Self::Affine { intercept: 1.0, slope: -1.0 },
        }
    }
}

/// A permutation `π` of `0..n` realizing the matrix `Z` with `z_{i,π(i)} = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(targets: Vec<usize>) -> Result<Self> {
        let n = targets.len();
        let mut seen = vec![false; n];
        for &t in &targets {
            if t >= n {
                return Err(Error::InvalidPermutation { n, detail: format!("target {t} out of range") });
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidPermutation { n, detail: format!("target {t} repeated") });
            }
        }
        Ok(Self(targets))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `i ↦ i + 1 (mod n)`.
    pub fn cyclic(n: usize) -> Self {
        Self((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn target(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn matrix(&self) -> Array2<f64> {
        let n = self.len();
        let mut z = Array2::zeros((n, n));
        for (i, &t) in self.0.iter().enumerate() {
            z[[i, t]] = 1.0;
        }
        z
    }

    /// `(Z y)_i = y_{π(i)}`.
    pub fn apply(&self, y: ArrayView1<'_, f64>) -> Array1<f64> {
        self.0.iter().map(|&t| y[t]).collect()
    }

    /// `(Zᵀ u)_{π(i)} = u_i`, the row vector `uᵀ Z`.
    pub fn apply_transpose(&self, u: ArrayView1<'_, f64>) -> Array1<f64> {
        let mut out = Array1::zeros(self.len());
        for (i, &t) in self.0.iter().enumerate() {
            out[t] = u[i];
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `a_i + b_i < 1`: every agent keeps a positive weight on initial opinions.
    #[serde(rename = "model_i")]
    ModelI,
    /// `a_i + b_i = 1`: no anchoring, `C = 0`.
    #[serde(rename = "model_ii")]
    ModelII,
    /// `a_i + b_i ≤ 1` with no further restriction, e.g. Friedkin-Johnsen
    /// with only some stubborn agents. Single-issue operations only.
    General,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::ModelI => "model_i",
            Regime::ModelII => "model_ii",
            Regime::General => "general",
        }
    }
}

/// Self-appraisal dependent coefficients `a_i(x_i)`, `b_i(x_i)` and the
/// anchoring permutation `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSchedule {
    a_maps: Vec<CoefficientMap>,
    b_maps: Vec<CoefficientMap>,
    z: Permutation,
    regime: Regime,
}

impl CoefficientSchedule {
    /// Validates every map on a [`GRID_POINTS`]-point grid of `[0, 1]`.
    pub fn new(
        a_maps: Vec<CoefficientMap>,
        b_maps: Vec<CoefficientMap>,
        z: Permutation,
        regime: Regime,
    ) -> Result<Self> {
        let n = a_maps.len();
        if n == 0 {
            return Err(Error::TooFewAgents { min: 1, found: 0 });
        }
        for len in [b_maps.len(), z.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        let sched = Self { a_maps, b_maps, z, regime };
        for k in 0..GRID_POINTS {
            let x = k as f64 / (GRID_POINTS - 1) as f64;
            for i in 0..n {
                sched.check_agent(i, x)?;
            }
        }
        Ok(sched)
    }

    /// Model II schedule with `b_i = 1 − a_i`.
    pub fn model_ii(a_maps: Vec<CoefficientMap>) -> Result<Self> {
        let n = a_maps.len();
        let b_maps = a_maps.iter().map(CoefficientMap::complement).collect();
        Self::new(a_maps, b_maps, Permutation::identity(n), Regime::ModelII)
    }

    pub fn constant(a: &[f64], b: &[f64], z: Permutation, regime: Regime) -> Result<Self> {
        let wrap = |v: &[f64]| v.iter().copied().map(CoefficientMap::Constant).collect();
        Self::new(wrap(a), wrap(b), z, regime)
    }

    pub fn n(&self) -> usize {
        self.a_maps.len()
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn a_maps(&self) -> &[CoefficientMap] {
        &self.a_maps
    }

    pub fn b_maps(&self) -> &[CoefficientMap] {
        &self.b_maps
    }

    pub fn permutation(&self) -> &Permutation {
        &self.z
    }

    fn check_agent(&self, agent: usize, x: f64) -> Result<(f64, f64)> {
        let a = self.a_maps[agent].eval(x);
        let b = self.b_maps[agent].eval(x);
        let fail = |field: &'static str, what: String| Err(Error::InvalidSchedule { agent, x, field, what });
        let in_unit = |v: f64| v.is_finite() && (-CONSTRAINT_TOL..=1.0 + CONSTRAINT_TOL).contains(&v);
        if !in_unit(a) {
            return fail("a", format!("a = {a} outside [0, 1]"));
        }
        if !in_unit(b) {
            return fail("b", format!("b = {b} outside [0, 1]"));
        }
        let sum = a + b;
        match self.regime {
            Regime::ModelI if 1.0 - sum <= 0.0 => fail("a + b", format!("a + b = {sum} is not below 1")),
            Regime::ModelII if (sum - 1.0).abs() > CONSTRAINT_TOL => fail("a + b", format!("a + b = {sum} is not 1")),
            Regime::General if sum > 1.0 + CONSTRAINT_TOL => fail("a + b", format!("a + b = {sum} exceeds 1")),
            _ => Ok((a.clamp(0.0, 1.0), b.clamp(0.0, 1.0))),
        }
    }

    /// Coefficients at per-agent coordinates `x_i ∈ [0, 1]`, re-checked.
    pub fn at_coords(&self, x: ArrayView1<'_, f64>) -> Result<Coefficients> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let mut a = Array1::zeros(n);
        let mut b = Array1::zeros(n);
        let mut d = Array1::zeros(n);
        for i in 0..n {
            let (ai, bi) = self.check_agent(i, x[i])?;
            a[i] = ai;
            b[i] = bi;
            d[i] = match self.regime {
                Regime::ModelII => 0.0,
                _ => (1.0 - ai - bi).max(0.0),
            };
        }
        Ok(Coefficients { a, b, d, z: self.z.clone() })
    }

    /// Coefficients at the self-appraisal vector `x`.
    pub fn at(&self, x: &SimplexVector) -> Result<Coefficients> {
        self.at_coords(x.as_array().view())
    }
}

/// The diagonal weights `a`, `b`, `d = 1 − a − b` and `Z`, evaluated at
/// one self-appraisal vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub a: Array1<f64>,
    pub b: Array1<f64>,
    pub d: Array1<f64>,
    pub z: Permutation,
}

/// One agent's row of `(A, B, C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: Array1<f64>,
}

impl Coefficients {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn agent(&self, i: usize) -> AgentCoefficients {
        let mut c = Array1::zeros(self.n());
        c[self.z.target(i)] = self.d[i];
        AgentCoefficients { a: self.a[i], b: self.b[i], c }
    }

    /// `C = D Z`.
    pub fn anchor_matrix(&self) -> Array2<f64> {
        let mut c = Array2::zeros((self.n(), self.n()));
        for i in 0..self.n() {
            c[[i, self.z.target(i)]] = self.d[i];
        }
        c
    }

    /// `A + B P`.
    pub fn transition_matrix(&self, p: &InteractionMatrix) -> Array2<f64> {
        let mut m = p.entries() * &self.b.view().insert_axis(ndarray::Axis(1));
        for i in 0..self.n() {
            m[[i, i]] += self.a[i];
        }
        m
    }

    /// `|a_i + b_i + Σ_j c_ij − 1|`, the largest over agents.
    pub fn closure_error(&self) -> f64 {
        (0..self.n()).map(|i| (self.a[i] + self.b[i] + self.d[i] - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Quadratic cost weights. The best response is the cost minimizer only
/// when `alpha == beta`, which construction enforces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl CostParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::CostParams(format!("alpha = {alpha} and beta = {beta} must be positive")));
        }
        if alpha != beta {
            return Err(Error::CostParams(format!("alpha = {alpha} differs from beta = {beta}")));
        }
        if !gamma.is_finite() {
            return Err(Error::CostParams("gamma must be finite".into()));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for CostParams {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0, gamma: 0.0 }
    }
}

/// `α y² − 2 (own + aggregate + initial_term) β y + γ`, where the three terms
/// are already weighted: `a_i y_i(t)`, `b_i σ_i(t)` and `Σ_j c_ij y_j(0)`.
pub fn cost_eval(y: f64, own: f64, aggregate: f64, initial_term: f64, params: CostParams) -> f64 {
    params.alpha * y * y - 2.0 * (own + aggregate + initial_term) * params.beta * y + params.gamma
}

/// Neighbor aggregate `σ_i = Σ_{j≠i} p_ij y_j`.
pub fn neighbor_aggregate(p: &InteractionMatrix, y: &OpinionVector, i: usize) -> f64 {
    p.row(i).iter().zip(y.as_array()).enumerate().filter(|(j, _)| *j != i).map(|(_, (w, v))| w * v).sum()
}

/// Best response of `agent`: `a y_own + b σ + Σ_j c_j y0_j`.
pub fn best_response(
    agent: usize,
    y_own: f64,
    sigma: f64,
    y0: &OpinionVector,
    coeffs: &AgentCoefficients,
) -> Result<f64> {
    if coeffs.c.len() != y0.len() {
        return Err(Error::DimensionMismatch { expected: y0.len(), found: coeffs.c.len() });
    }
    let sum = coeffs.a + coeffs.b + coeffs.c.sum();
    if (sum - 1.0).abs() > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation { agent, sum });
    }
    let initial_term = coeffs.c.dot(y0.as_array());
    Ok(coeffs.a * y_own + coeffs.b * sigma + initial_term)
}

fn check_dims(n: usize, found: &[usize]) -> Result<()> {
    match found.iter().find(|&&len| len != n) {
        Some(&len) => Err(Error::DimensionMismatch { expected: n, found: len }),
        None => Ok(()),
    }
}

/// Precomputed `A + BP` and `C` for repeated steps on one issue.
#[derive(Debug, Clone)]
pub struct IssueOperator {
    transition: Array2<f64>,
    anchor: Array2<f64>,
}

impl IssueOperator {
    pub fn new(p: &InteractionMatrix, coeffs: &Coefficients) -> Result<Self> {
        check_dims(p.n(), &[coeffs.n()])?;
        let closure = coeffs.closure_error();
        if closure > CONSTRAINT_TOL {
            let agent = (0..coeffs.n())
                .max_by(|&i, &j| {
                    let e = |k: usize| (coeffs.a[k] + coeffs.b[k] + coeffs.d[k] - 1.0).abs();
                    e(i).total_cmp(&e(j))
                })
                .unwrap_or(0);
            return Err(Error::ConstraintViolation { agent, sum: 1.0 + closure });
        }
        Ok(Self { transition: coeffs.transition_matrix(p), anchor: coeffs.anchor_matrix() })
    }

    /// `(A + BP) y + C y0`, without range clamping.
    pub fn apply_raw(&self, y: ArrayView1<'_, f64>, y0: ArrayView1<'_, f64>) -> Array1<f64> {
        self.transition.dot(&y) + self.anchor.dot(&y0)
    }

    pub fn apply(&self, y: &OpinionVector, y0: &OpinionVector) -> Result<OpinionVector> {
        check_dims(self.transition.nrows(), &[y.len(), y0.len()])?;
        OpinionVector::clamped(self.apply_raw(y.as_array().view(), y0.as_array().view()), CONSTRAINT_TOL)
    }

    pub fn transition(&self) -> &Array2<f64> {
        &self.transition
    }

    pub fn anchor(&self) -> &Array2<f64> {
        &self.anchor
    }
}

/// One synchronous best-response update with coefficients evaluated at `x`.
pub fn step(
    y: &OpinionVector,
    y0: &OpinionVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    x: &SimplexVector,
) -> Result<OpinionVector> {
    IssueOperator::new(p, &sched.at(x)?)?.apply(y, y0)
}

/// Opinion states `y(0), y(1), ...` on one issue.
#[derive(Debug, Clone, PartialEq)]
pub struct IssueTrajectory {
    pub states: Vec<OpinionVector>,
    pub converged: bool,
    /// `‖y(t+1) − y(t)‖∞` of the last performed step (infinite if none).
    pub residual: f64,
    pub consensus: Option<OpinionVector>,
}

impl IssueTrajectory {
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> &OpinionVector {
        self.states.last().expect("trajectory holds y(0)")
    }
}

/// Iterates [`step`] until successive states differ by at most `tol` or
/// `max_steps` updates were made. Non-convergence is recorded, not an error.
pub fn simulate_issue(
    y0: &OpinionVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    x: &SimplexVector,
    tol: f64,
    max_steps: usize,
) -> Result<IssueTrajectory> {
    let op = IssueOperator::new(p, &sched.at(x)?)?;
    check_dims(p.n(), &[y0.len()])?;
    let mut states = vec![y0.clone()];
    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_steps {
        let current = states.last().expect("non-empty");
        let next = op.apply(current, y0)?;
        residual = max_abs_diff(next.as_array(), current.as_array());
        states.push(next);
        if residual <= tol {
            converged = true;
            break;
        }
    }
    let consensus = converged.then(|| states.last().cloned()).flatten();
    Ok(IssueTrajectory { states, converged, residual, consensus })
}

/// Consensus operator `W = (I − A − BP)⁻¹ C`, checked to be row-stochastic.
pub fn consensus_operator(p: &InteractionMatrix, coeffs: &Coefficients) -> Result<Array2<f64>> {
    let lu = system_matrix(p, coeffs)?;
    let w = lu.solve_matrix(coeffs.anchor_matrix().view())?;
    check_row_stochastic(w.view())?;
    Ok(w)
}

fn system_matrix(p: &InteractionMatrix, coeffs: &Coefficients) -> Result<LuFactorization> {
    let n = p.n();
    check_dims(n, &[coeffs.n()])?;
    let system = Array2::<f64>::eye(n) - coeffs.transition_matrix(p);
    LuFactorization::new(system.view())
}

fn check_row_stochastic(w: ArrayView2<'_, f64>) -> Result<()> {
    for (row, r) in w.rows().into_iter().enumerate() {
        let sum = r.sum();
        if (sum - 1.0).abs() > CONSENSUS_ROW_TOL {
            return Err(Error::NotStochastic { row, sum });
        }
    }
    Ok(())
}

/// Closed-form limit `(I − A − BP)⁻¹ C y(0)` of an anchored issue.
pub fn consensus_model_i(
    y0: &OpinionVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    x: &SimplexVector,
) -> Result<OpinionVector> {
    if sched.regime() == Regime::ModelII {
        return Err(Error::RegimeMismatch { expected: "model_i", found: sched.regime().name() });
    }
    check_dims(p.n(), &[y0.len()])?;
    let coeffs = sched.at(x)?;
    let lu = system_matrix(p, &coeffs)?;
    check_row_stochastic(lu.solve_matrix(coeffs.anchor_matrix().view())?.view())?;
    let rhs = coeffs.anchor_matrix().dot(y0.as_array());
    OpinionVector::clamped(lu.solve(rhs.view())?, CONSENSUS_ROW_TOL)
}

/// Indices of agents whose self-weight equals 1.
pub fn absorbing_agents(coeffs: &Coefficients) -> Vec<usize> {
    (0..coeffs.n()).filter(|&i| coeffs.a[i] >= 1.0 - ABSORBING_TOL).collect()
}

/// Left Perron vector `v` of `A + (I − A) P`.
///
/// A single agent with `a_i = 1` is the only globally reachable node, giving
/// `v = e_i`; two or more such agents leave `v` undetermined.
pub fn model_ii_weights(
    p: &InteractionMatrix,
    coeffs: &Coefficients,
    opts: PowerIterationOptions,
) -> Result<SimplexVector> {
    let n = p.n();
    check_dims(n, &[coeffs.n()])?;
    match absorbing_agents(coeffs).as_slice() {
        [] => {}
        [i] => return Ok(SimplexVector::vertex(n, *i)),
        many => return Err(Error::Degenerate { agents: many.to_vec() }),
    }
    let mut m = p.entries() * &(1.0 - &coeffs.a).insert_axis(ndarray::Axis(1));
    for i in 0..n {
        m[[i, i]] += coeffs.a[i];
    }
    dominant_left_eigenvector(m.view(), 0.0, opts)
}

/// Closed-form limit `vᵀy(0) 𝟙` of an unanchored issue, with `v`.
pub fn consensus_model_ii(
    y0: &OpinionVector,
    p: &InteractionMatrix,
    sched: &CoefficientSchedule,
    x: &SimplexVector,
) -> Result<(OpinionVector, SimplexVector)> {
    if sched.regime() != Regime::ModelII {
        return Err(Error::RegimeMismatch { expected: "model_ii", found: sched.regime().name() });
    }
    check_dims(p.n(), &[y0.len()])?;
    let v = model_ii_weights(p, &sched.at(x)?, PowerIterationOptions::default())?;
    let value = v.as_array().dot(y0.as_array()).clamp(0.0, 1.0);
    Ok((OpinionVector::constant(p.n(), value)?, v))
}

fn check_degroot_weights(w: ArrayView2<'_, f64>) -> Result<usize> {
    let (rows, cols) = w.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    for ((row, col), v) in w.indexed_iter() {
        if !v.is_finite() {
            return Err(Error::NonFinite { row, col });
        }
        if *v < 0.0 {
            return Err(Error::NegativeEntry { row, col, value: *v });
        }
    }
    for (row, r) in w.rows().into_iter().enumerate() {
        let sum = r.sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotStochastic { row, sum });
        }
        if w[[row, row]] >= 1.0 {
            return Err(Error::IsolatedAgent { agent: row });
        }
    }
    Ok(rows)
}

fn relative_interaction(w: ArrayView2<'_, f64>) -> Result<InteractionMatrix> {
    let n = w.nrows();
    let mut p = Array2::zeros((n, n));
    for i in 0..n {
        let off = 1.0 - w[[i, i]];
        for j in (0..n).filter(|&j| j != i) {
            p[[i, j]] = w[[i, j]] / off;
        }
    }
    InteractionMatrix::new(p)
}

/// Expresses DeGroot's `y(t+1) = W y(t)` as `a_i = w_ii`, `b_i = 1 − w_ii`,
/// `p_ij = w_ij / (1 − w_ii)` with no anchoring.
pub fn from_degroot(w: ArrayView2<'_, f64>) -> Result<(InteractionMatrix, CoefficientSchedule)> {
    from_friedkin_johnsen(w, &vec![1.0; w.nrows()])
}

/// Expresses Friedkin-Johnsen's `y(t+1) = ΘW y(t) + (I − Θ) y(0)` as
/// `a_i = θ_i w_ii`, `b_i = θ_i (1 − w_ii)`, `c_ii = 1 − θ_i`, `Z = I`.
///
/// The regime is Model II when every `θ_i = 1`, Model I when every
/// `θ_i < 1`, and [`Regime::General`] otherwise.
pub fn from_friedkin_johnsen(
    w: ArrayView2<'_, f64>,
    theta: &[f64],
) -> Result<(InteractionMatrix, CoefficientSchedule)> {
    let n = check_degroot_weights(w)?;
    check_dims(n, &[theta.len()])?;
    if let Some(i) = theta.iter().position(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidSusceptibility { agent: i, value: theta[i] });
    }
    let p = relative_interaction(w)?;
    let a: Vec<f64> = (0..n).map(|i| theta[i] * w[[i, i]]).collect();
    let b: Vec<f64> = (0..n).map(|i| theta[i] * (1.0 - w[[i, i]])).collect();
    let regime = if theta.iter().all(|&t| t == 1.0) {
        Regime::ModelII
    } else if theta.iter().all(|&t| t < 1.0) {
        Regime::ModelI
    } else {
        Regime::General
    };
    let sched = CoefficientSchedule::constant(&a, &b, Permutation::identity(n), regime)?;
    Ok((p, sched))
}
