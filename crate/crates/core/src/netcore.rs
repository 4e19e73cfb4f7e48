//! Validated matrix and vector types plus the numerical kernels shared by the
//! opinion and appraisal models: connectivity, dominant left eigenvectors and
//! dense linear solves.
//!
//! Agent indices are zero-based throughout the library.

use std::collections::VecDeque;
use std::fmt;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

/// Tolerance on row sums of an interaction matrix and on simplex sums.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Smallest admissible pivot magnitude in [`LuFactorization`].
pub const PIVOT_TOL: f64 = 1e-13;

fn check_square(m: ArrayView2<'_, f64>) -> Result<usize> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows)
}

fn check_finite(m: ArrayView2<'_, f64>) -> Result<()> {
    if let Some(((row, col), _)) = m.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { row, col });
    }
    Ok(())
}

/// Row-stochastic, zero-diagonal matrix of relative interpersonal weights
/// whose positive-entry digraph is strongly connected.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    entries: Array2<f64>,
}

impl InteractionMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let report = validate_interaction_matrix(entries.view())?;
        if !report.is_ok() {
            return Err(Error::InvalidInteraction(report));
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.entries.row(i)
    }

    /// Perron vector `p` with `pᵀP = pᵀ`.
    pub fn perron_vector(&self, opts: PowerIterationOptions) -> Result<SimplexVector> {
        dominant_left_eigenvector(self.entries.view(), 0.0, opts)
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.entries
    }
}

/// Builds a dense matrix from equally long rows.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Array2<f64>> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
        return Err(Error::DimensionMismatch { expected: n_cols, found: bad.len() });
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(Array2::from_shape_vec((n_rows, n_cols), flat).expect("shape checked above"))
}

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexVector(Array1<f64>);

impl SimplexVector {
    pub fn new(entries: Array1<f64>) -> Result<Self> {
        let sum: f64 = entries.sum();
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::NotOnSimplex { index, value, sum });
        }
        if entries.is_empty() || (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotOnSimplex { index: 0, value: entries.first().copied().unwrap_or(f64::NAN), sum });
        }
        Ok(Self(entries))
    }

    /// Normalizes a nonnegative weight vector onto the simplex.
    pub fn from_weights(weights: Array1<f64>) -> Result<Self> {
        let sum = weights.sum();
        Self::new(weights / sum)
    }

    pub fn uniform(n: usize) -> Self {
        Self(Array1::from_elem(n, 1.0 / n as f64))
    }

    pub fn vertex(n: usize, i: usize) -> Self {
        let mut e = Array1::zeros(n);
        e[i] = 1.0;
        Self(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_array(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    pub fn into_inner(self) -> Array1<f64> {
        self.0
    }

    /// True when every entry is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&v| v > 0.0)
    }
}

impl std::ops::Index<usize> for SimplexVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Opinions of all agents, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionVector(Array1<f64>);

impl OpinionVector {
    pub fn new(entries: Array1<f64>) -> Result<Self> {
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OpinionOutOfRange { index, value });
        }
        Ok(Self(entries))
    }

    /// Accepts values that leave `[0, 1]` by at most `slack` (rounding in a
    /// convex combination) and clamps them back.
    pub fn clamped(mut entries: Array1<f64>, slack: f64) -> Result<Self> {
        for (index, v) in entries.iter_mut().enumerate() {
            if !v.is_finite() || *v < -slack || *v > 1.0 + slack {
                return Err(Error::OpinionOutOfRange { index, value: *v });
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self(entries))
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(Array1::from_elem(n, c))
    }

    /// Evenly spread opinions `0, 1/(n-1), ..., 1`.
    pub fn spread(n: usize) -> Self {
        if n == 1 {
            return Self(Array1::zeros(1));
        }
        Self(Array1::linspace(0.0, 1.0, n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_array(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.to_vec()
    }
}

impl std::ops::Index<usize> for OpinionVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Infinity-norm distance between two vectors of equal length; NaN if any
/// difference is NaN, so tolerance checks fail rather than pass.
pub fn max_abs_diff(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| {
        let d = (x - y).abs();
        if acc.is_nan() || d.is_nan() {
            f64::NAN
        } else {
            acc.max(d)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    ZeroDiagonal,
    Nonnegative,
    RowSum,
    StrongConnectivity,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Check::ZeroDiagonal => "zero diagonal",
            Check::Nonnegative => "nonnegative entries",
            Check::RowSum => "row sums",
            Check::StrongConnectivity => "strong connectivity",
        };
        f.write_str(name)
    }
}

/// One failed check: the worst offending row (or node) and by how much.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub check: Check,
    pub index: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn find(&self, check: Check) -> Option<&Violation> {
        self.violations.iter().find(|v| v.check == check)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} fails at index {} (magnitude {:e})", v.check, v.index, v.magnitude)?;
        }
        Ok(())
    }
}

/// Runs every interaction-matrix check and reports all failures.
///
/// Non-square, too small or non-finite input is a structural error rather
/// than a failed check.
pub fn validate_interaction_matrix(m: ArrayView2<'_, f64>) -> Result<ValidationReport> {
    let n = check_square(m)?;
    if n < 2 {
        return Err(Error::TooFewAgents { min: 2, found: n });
    }
    check_finite(m)?;

    let mut violations = Vec::new();
    let worst = |it: &mut dyn Iterator<Item = (usize, f64)>| {
        it.filter(|&(_, mag)| mag > 0.0).fold(None, |best: Option<(usize, f64)>, (i, mag)| match best {
            Some((_, b)) if b >= mag => best,
            _ => Some((i, mag)),
        })
    };

    if let Some((index, magnitude)) = worst(&mut (0..n).map(|i| (i, m[[i, i]].abs()))) {
        violations.push(Violation { check: Check::ZeroDiagonal, index, magnitude });
    }
    let most_negative = (0..n).map(|i| {
        let low = m.row(i).iter().fold(0.0_f64, |acc, &v| acc.min(v));
        (i, -low)
    });
    if let Some((index, magnitude)) = worst(&mut most_negative.into_iter()) {
        violations.push(Violation { check: Check::Nonnegative, index, magnitude });
    }
    let row_error = (0..n).map(|i| (i, (m.row(i).sum() - 1.0).abs()));
    if let Some((index, magnitude)) = worst(&mut row_error.filter(|&(_, e)| e > STOCHASTIC_TOL)) {
        violations.push(Violation { check: Check::RowSum, index, magnitude });
    }
    let outside = nodes_outside_component_of_first(m);
    if let Some(&index) = outside.first() {
        violations.push(Violation { check: Check::StrongConnectivity, index, magnitude: outside.len() as f64 });
    }
    Ok(ValidationReport { violations })
}

fn reachable_from(m: ArrayView2<'_, f64>, start: usize, reverse: bool) -> Vec<bool> {
    let n = m.nrows();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for w in 0..n {
            let weight = if reverse { m[[w, u]] } else { m[[u, w]] };
            if w != u && weight > 0.0 && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Nodes that are not mutually reachable with node 0, in increasing order.
fn nodes_outside_component_of_first(m: ArrayView2<'_, f64>) -> Vec<usize> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let forward = reachable_from(m, 0, false);
    let backward = reachable_from(m, 0, true);
    (0..m.nrows()).filter(|&i| !(forward[i] && backward[i])).collect()
}

/// True iff the digraph with an edge `i -> j` for every `m[i][j] > 0`
/// (`i != j`) is strongly connected.
///
/// A digraph is strongly connected exactly when some node reaches every node
/// and is reached by every node, so one forward and one backward search from
/// node 0 decide it in time linear in the number of entries.
pub fn strongly_connected(m: ArrayView2<'_, f64>) -> Result<bool> {
    check_square(m)?;
    Ok(nodes_outside_component_of_first(m).is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIterationOptions {
    /// Stop once successive iterates differ by at most this in the max norm.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIterationOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 100_000 }
    }
}

/// Dominant left eigenpair of a matrix together with convergence data.
#[derive(Debug, Clone)]
pub struct PerronPair {
    pub vector: SimplexVector,
    /// Dominant eigenvalue of the unshifted matrix.
    pub eigenvalue: f64,
    pub iterations: usize,
    /// `‖wᵀM − λwᵀ‖∞` for the unshifted matrix.
    pub residual: f64,
}

/// Simplex-normalized dominant left eigenvector of `m`.
///
/// See [`dominant_left_eigenpair`].
pub fn dominant_left_eigenvector(
    m: ArrayView2<'_, f64>,
    shift: f64,
    opts: PowerIterationOptions,
) -> Result<SimplexVector> {
    dominant_left_eigenpair(m, shift, opts).map(|pair| pair.vector)
}

/// Power iteration on `(M + shift·I)ᵀ`, started from the uniform vector and
/// renormalized in the 1-norm after every step.
///
/// `M + shift·I` must be nonnegative with a strongly connected off-diagonal
/// pattern. Periodic inputs (a 2-cycle has eigenvalues ±1) are handled by
/// iterating with the lazy matrix `K + r·I`, `r` the largest row sum of `K`,
/// which has the same eigenvectors and a strictly dominant Perron root.
///
/// Stops once the last step and the eigen-residual `‖wᵀM − λwᵀ‖∞` of the
/// returned vector are both at most `opts.tol`.
pub fn dominant_left_eigenpair(m: ArrayView2<'_, f64>, shift: f64, opts: PowerIterationOptions) -> Result<PerronPair> {
    let n = check_square(m)?;
    check_finite(m)?;
    if n == 0 {
        return Err(Error::TooFewAgents { min: 1, found: 0 });
    }
    let mut shifted = m.to_owned();
    for i in 0..n {
        shifted[[i, i]] += shift;
    }
    if let Some(((row, col), &value)) = shifted.indexed_iter().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeEntry { row, col, value });
    }
    if !strongly_connected(shifted.view())? {
        return Err(Error::Reducible);
    }

    let laziness = shifted.rows().into_iter().map(|r| r.sum()).fold(0.0_f64, f64::max);
    let mut w = Array1::from_elem(n, 1.0 / n as f64);
    let mut step = f64::INFINITY;
    let mut iterations = 0;
    loop {
        // The shift cancels: wᵀK − λ_K wᵀ = wᵀM − (λ_K − shift) wᵀ.
        let wk = shifted.t().dot(&w);
        let eigenvalue = wk.sum() / w.sum();
        let residual = max_abs_diff(&wk, &(eigenvalue * &w));
        if step <= opts.tol && residual <= opts.tol {
            return Ok(PerronPair {
                vector: SimplexVector::from_weights(w)?,
                eigenvalue: eigenvalue - shift,
                iterations,
                residual,
            });
        }
        if iterations == opts.max_iter {
            return Err(Error::IterationLimit { iterations, residual: step.max(residual) });
        }
        iterations += 1;
        let mut next = wk + &(laziness * &w);
        let total = next.sum();
        next /= total;
        step = max_abs_diff(&next, &w);
        w = next;
    }
}

/// LU factorization with partial pivoting, `PA = LU`.
///
/// The pivot of each column is the entry of largest magnitude; among equal
/// magnitudes the smallest row index wins, so results are deterministic.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: Array2<f64>,
    perm: Vec<usize>,
}

impl LuFactorization {
    pub fn new(m: ArrayView2<'_, f64>) -> Result<Self> {
        let n = check_square(m)?;
        check_finite(m)?;
        let mut lu = m.to_owned();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut pivot_row = col;
            for r in col + 1..n {
                if lu[[r, col]].abs() > lu[[pivot_row, col]].abs() {
                    pivot_row = r;
                }
            }
            let pivot = lu[[pivot_row, col]];
            if pivot.abs() <= PIVOT_TOL {
                return Err(Error::Singular { column: col, pivot: pivot.abs() });
            }
            if pivot_row != col {
                for c in 0..n {
                    lu.swap([col, c], [pivot_row, c]);
                }
                perm.swap(col, pivot_row);
            }
            for r in col + 1..n {
                let factor = lu[[r, col]] / pivot;
                lu[[r, col]] = factor;
                if factor != 0.0 {
                    for c in col + 1..n {
                        lu[[r, c]] -= factor * lu[[col, c]];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        let mut z: Array1<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut acc = z[r];
            for c in 0..r {
                acc -= self.lu[[r, c]] * z[c];
            }
            z[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = z[r];
            for c in r + 1..n {
                acc -= self.lu[[r, c]] * z[c];
            }
            z[r] = acc / self.lu[[r, r]];
        }
        Ok(z)
    }

    /// Solves `M Z = B` column by column.
    pub fn solve_matrix(&self, b: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let mut out = Array2::zeros(b.dim());
        for (k, col) in b.columns().into_iter().enumerate() {
            out.column_mut(k).assign(&self.solve(col)?);
        }
        Ok(out)
    }
}

/// Solves `M z = b` by LU with partial pivoting.
pub fn solve_linear(m: ArrayView2<'_, f64>, b: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
    LuFactorization::new(m)?.solve(b)
}
