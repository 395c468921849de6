//! Linear programs and a bounded-variable primal simplex solver.
//!
//! Problems are `min cᵀx + c₀` subject to equality rows, `≤` rows and
//! per-variable bounds (infinite bounds allowed). The solver runs a dense
//! two-phase tableau with Bland's rule for both the entering and leaving
//! choice, so a fixed problem always walks the same pivot sequence.
//!
//! Dual conventions: `duals_eq[k]` is `∂objective/∂rhs_k` for equality `k`;
//! `duals_ineq[k] = −∂objective/∂rhs_k ≥ 0` for `≤` row `k`. On degenerate
//! optima several dual vectors are optimal and the one returned depends on
//! the final basis.

use std::fmt::Write as _;

use crate::error::LpError;
use crate::linalg::{DenseMatrix, LuFactors};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct LpVariable<T> {
    pub name: String,
    pub lower: T,
    pub upper: T,
}

/// Sparse row `Σ coefficients · x` compared against `rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint<T> {
    pub name: String,
    pub coefficients: Vec<(usize, T)>,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    pub variables: Vec<LpVariable<T>>,
    /// Minimized; one entry per variable.
    pub objective: Vec<T>,
    pub objective_constant: T,
    pub eq_constraints: Vec<LinearConstraint<T>>,
    /// All stored in `≤` form.
    pub ineq_constraints: Vec<LinearConstraint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Degeneracy {
    /// Some basic variable sits on one of its bounds.
    pub primal: bool,
    /// Some movable nonbasic variable has a zero reduced cost.
    pub dual: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub primal: Vec<T>,
    pub duals_eq: Vec<T>,
    pub duals_ineq: Vec<T>,
    pub reduced_costs: Vec<T>,
    pub objective_value: Option<T>,
    /// Sorted internal column indices of the final basis. Comparable across
    /// solves of problems with identical shape.
    pub basis: Vec<usize>,
    pub degeneracy: Degeneracy,
    pub iterations: usize,
}

impl<T: Real> Default for LpProblem<T> {
    fn default() -> Self {
        Self {
            variables: Vec::new(),
            objective: Vec::new(),
            objective_constant: T::zero(),
            eq_constraints: Vec::new(),
            ineq_constraints: Vec::new(),
        }
    }
}

impl<T: Real> LpProblem<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: T, upper: T) -> usize {
        self.variables.push(LpVariable {
            name: name.into(),
            lower,
            upper,
        });
        self.objective.push(T::zero());
        self.variables.len() - 1
    }

    pub fn set_cost(&mut self, var: usize, cost: T) {
        self.objective[var] = cost;
    }

    pub fn add_eq(&mut self, name: impl Into<String>, coefficients: Vec<(usize, T)>, rhs: T) -> usize {
        self.eq_constraints.push(LinearConstraint {
            name: name.into(),
            coefficients,
            rhs,
        });
        self.eq_constraints.len() - 1
    }

    pub fn add_le(&mut self, name: impl Into<String>, coefficients: Vec<(usize, T)>, rhs: T) -> usize {
        self.ineq_constraints.push(LinearConstraint {
            name: name.into(),
            coefficients,
            rhs,
        });
        self.ineq_constraints.len() - 1
    }

    /// Stored as the negated `≤` row.
    pub fn add_ge(&mut self, name: impl Into<String>, coefficients: Vec<(usize, T)>, rhs: T) -> usize {
        let negated = coefficients.into_iter().map(|(j, a)| (j, -a)).collect();
        self.add_le(name, negated, -rhs)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.variables.len() {
            return Err(LpError::NonFinite("objective length".into()));
        }
        for v in &self.variables {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(LpError::InvertedBounds(v.name.clone()));
            }
            if v.lower == T::infinity() || v.upper == T::neg_infinity() {
                return Err(LpError::InvertedBounds(v.name.clone()));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) || !self.objective_constant.is_finite() {
            return Err(LpError::NonFinite("objective".into()));
        }
        for row in self.eq_constraints.iter().chain(&self.ineq_constraints) {
            if !row.rhs.is_finite() {
                return Err(LpError::NonFinite(row.name.clone()));
            }
            for &(j, a) in &row.coefficients {
                if j >= self.variables.len() {
                    return Err(LpError::UnknownVariable {
                        constraint: row.name.clone(),
                        index: j,
                    });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite(row.name.clone()));
                }
            }
        }
        Ok(())
    }

    /// Value of `Σ coefficients · x` for a row.
    pub fn row_activity(row: &LinearConstraint<T>, x: &[T]) -> T {
        row.coefficients
            .iter()
            .fold(T::zero(), |acc, &(j, a)| acc + a * x[j])
    }

    pub fn objective_at(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(self.objective_constant, |acc, (&c, &v)| acc + c * v)
    }

    /// Fixed-width human-readable dump of the whole problem.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "LP: {} variables, {} equalities, {} inequalities",
            self.variables.len(),
            self.eq_constraints.len(),
            self.ineq_constraints.len()
        );
        let _ = writeln!(out, "\nVARIABLES");
        let _ = writeln!(out, "{:>5}  {:<28} {:>14} {:>14} {:>14}", "idx", "name", "lower", "upper", "cost");
        for (j, v) in self.variables.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>5}  {:<28} {:>14} {:>14} {:>14}",
                j,
                v.name,
                fmt_num(v.lower),
                fmt_num(v.upper),
                fmt_num(self.objective[j])
            );
        }
        let _ = writeln!(out, "{:>5}  {:<28} {:>14}", "", "(objective constant)", fmt_num(self.objective_constant));
        for (title, rows, sense) in [
            ("EQUALITIES", &self.eq_constraints, "="),
            ("INEQUALITIES", &self.ineq_constraints, "<="),
        ] {
            let _ = writeln!(out, "\n{title}");
            for row in rows.iter() {
                let _ = write!(out, "  {:<28}", row.name);
                for &(j, a) in &row.coefficients {
                    let _ = write!(out, " {:>+12} {}", fmt_num(a), self.variables[j].name);
                }
                let _ = writeln!(out, " {sense} {}", fmt_num(row.rhs));
            }
        }
        out
    }
}

fn fmt_num<T: Real>(x: T) -> String {
    let v = x.to_f64_lossy();
    if v.is_infinite() {
        if v > 0.0 { "+inf".into() } else { "-inf".into() }
    } else {
        // `+ 0.0` turns -0.0 into 0.0.
        format!("{:.6}", v + 0.0)
    }
}

impl<T: Real> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_point(status: LpStatus, iterations: usize) -> Self {
        Self {
            status,
            primal: Vec::new(),
            duals_eq: Vec::new(),
            duals_ineq: Vec::new(),
            reduced_costs: Vec::new(),
            objective_value: None,
            basis: Vec::new(),
            degeneracy: Degeneracy::default(),
            iterations,
        }
    }
}

// ---------------------------------------------------------------------------
// Standard form

#[derive(Debug, Clone, Copy, PartialEq)]
enum Origin<T> {
    /// `x_var = offset + sign · column` (free variables own two columns).
    Structural { var: usize, sign: T },
    Slack,
    Artificial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Position {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau<T> {
    /// B⁻¹A, m × ncols.
    t: DenseMatrix<T>,
    /// Current values of the basic columns, by row.
    beta: Vec<T>,
    basis: Vec<usize>,
    position: Vec<Position>,
    upper: Vec<T>,
    origin: Vec<Origin<T>>,
    iterations: usize,
    max_iterations: usize,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Moved,
}

impl<T: Real> Tableau<T> {
    fn ncols(&self) -> usize {
        self.origin.len()
    }

    fn is_artificial(&self, j: usize) -> bool {
        matches!(self.origin[j], Origin::Artificial)
    }

    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let m = self.basis.len();
        let mut d = cost.to_vec();
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb != T::zero() {
                for (dj, &tij) in d.iter_mut().zip(self.t.row(i)) {
                    *dj -= cb * tij;
                }
            }
        }
        d
    }

    fn run(&mut self, cost: &[T]) -> Result<StepOutcome, LpError> {
        loop {
            match self.step(cost)? {
                StepOutcome::Moved => {
                    self.iterations += 1;
                    if self.iterations > self.max_iterations {
                        return Err(LpError::Numerical("simplex iteration limit reached".into()));
                    }
                }
                done => return Ok(done),
            }
        }
    }

    fn step(&mut self, cost: &[T]) -> Result<StepOutcome, LpError> {
        let opt_tol = T::optimality_tol();
        let piv_tol = T::pivot_tol();
        let d = self.reduced_costs(cost);

        // Bland: lowest-index improving column.
        let entering = (0..self.ncols()).find(|&j| {
            if self.is_artificial(j) || self.upper[j] <= T::zero() {
                return false;
            }
            match self.position[j] {
                Position::Basic => false,
                Position::AtLower => d[j] < -opt_tol,
                Position::AtUpper => d[j] > opt_tol,
            }
        });
        let Some(j) = entering else {
            return Ok(StepOutcome::Optimal);
        };
        let delta = if self.position[j] == Position::AtLower { T::one() } else { -T::one() };

        // Ratio test; ties go to the lowest column index, the entering
        // column's own bound flip included.
        let mut best_t = self.upper[j];
        let mut best_col = j;
        let mut leave: Option<(usize, bool)> = None;
        let tie = piv_tol;
        for i in 0..self.basis.len() {
            let alpha = self.t[(i, j)];
            if alpha.abs() <= piv_tol {
                continue;
            }
            let rate = delta * alpha;
            let col = self.basis[i];
            let (limit, to_upper) = if rate > T::zero() {
                (self.beta[i] / rate, false)
            } else if self.upper[col].is_finite() {
                ((self.upper[col] - self.beta[i]) / -rate, true)
            } else {
                continue;
            };
            let limit = limit.max(T::zero());
            let better = if best_t.is_infinite() {
                true
            } else {
                limit < best_t - tie || ((limit - best_t).abs() <= tie && col < best_col)
            };
            if better {
                best_t = limit;
                best_col = col;
                leave = Some((i, to_upper));
            }
        }
        if best_t.is_infinite() {
            return Ok(StepOutcome::Unbounded);
        }

        let step = delta * best_t;
        for i in 0..self.basis.len() {
            let alpha = self.t[(i, j)];
            self.beta[i] -= step * alpha;
        }

        match leave {
            None => {
                self.position[j] = if self.position[j] == Position::AtLower {
                    Position::AtUpper
                } else {
                    Position::AtLower
                };
            }
            Some((r, to_upper)) => {
                let start = if self.position[j] == Position::AtLower { T::zero() } else { self.upper[j] };
                let leaving = self.basis[r];
                self.position[leaving] = if to_upper { Position::AtUpper } else { Position::AtLower };
                self.position[j] = Position::Basic;
                self.basis[r] = j;
                self.beta[r] = start + step;
                self.pivot(r, j);
            }
        }
        self.clamp_beta();
        Ok(StepOutcome::Moved)
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[(r, j)];
        for v in self.t.row_mut(r) {
            *v /= p;
        }
        let pivot_row = self.t.row(r).to_vec();
        for i in 0..self.basis.len() {
            if i == r {
                continue;
            }
            let f = self.t[(i, j)];
            if f != T::zero() {
                for (v, &pr) in self.t.row_mut(i).iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                self.t[(i, j)] = T::zero();
            }
        }
    }

    fn clamp_beta(&mut self) {
        let tol = T::feasibility_tol() * T::lit(1e-3);
        for i in 0..self.basis.len() {
            let u = self.upper[self.basis[i]];
            if self.beta[i] < T::zero() && self.beta[i] > -tol {
                self.beta[i] = T::zero();
            }
            if u.is_finite() && self.beta[i] > u && self.beta[i] < u + tol {
                self.beta[i] = u;
            }
        }
    }
}

/// Solves a linear program.
///
/// Returns `Err` only for malformed input or numerical breakdown; an empty
/// feasible set or an unbounded objective is reported through `status`.
pub fn solve_lp<T: Real>(problem: &LpProblem<T>) -> Result<LpSolution<T>, LpError> {
    problem.validate()?;
    let n = problem.variables.len();
    let n_eq = problem.eq_constraints.len();
    let m = n_eq + problem.ineq_constraints.len();
    let rows: Vec<&LinearConstraint<T>> = problem
        .eq_constraints
        .iter()
        .chain(&problem.ineq_constraints)
        .collect();

    // Dense original matrix A (m × n).
    let mut a = DenseMatrix::zeros(m, n);
    for (i, row) in rows.iter().enumerate() {
        for &(j, coef) in &row.coefficients {
            a[(i, j)] += coef;
        }
    }

    // Column layout: structural, slack (ineq rows), artificial (all rows).
    let mut origin = Vec::new();
    let mut upper = Vec::new();
    let mut offsets = vec![T::zero(); n];
    let mut std_cost = Vec::new();
    for (k, v) in problem.variables.iter().enumerate() {
        let c = problem.objective[k];
        if v.lower.is_finite() {
            offsets[k] = v.lower;
            origin.push(Origin::Structural { var: k, sign: T::one() });
            upper.push(if v.upper.is_finite() { v.upper - v.lower } else { T::infinity() });
            std_cost.push(c);
        } else if v.upper.is_finite() {
            offsets[k] = v.upper;
            origin.push(Origin::Structural { var: k, sign: -T::one() });
            upper.push(T::infinity());
            std_cost.push(-c);
        } else {
            for sign in [T::one(), -T::one()] {
                origin.push(Origin::Structural { var: k, sign });
                upper.push(T::infinity());
                std_cost.push(sign * c);
            }
        }
    }
    let first_slack = origin.len();
    for _ in n_eq..m {
        origin.push(Origin::Slack);
        upper.push(T::infinity());
        std_cost.push(T::zero());
    }
    let first_artificial = origin.len();
    for _ in 0..m {
        origin.push(Origin::Artificial);
        upper.push(T::infinity());
        std_cost.push(T::zero());
    }
    let ncols = origin.len();

    // Shifted right-hand side b' = b − A·offset.
    let shift = a.mul_vec(&offsets);
    let b: Vec<T> = rows.iter().zip(&shift).map(|(r, s)| r.rhs - *s).collect();
    let signs: Vec<T> = b
        .iter()
        .map(|&v| if v < T::zero() { -T::one() } else { T::one() })
        .collect();

    let mut full = DenseMatrix::zeros(m, ncols);
    for i in 0..m {
        for (c, o) in origin.iter().enumerate().take(first_slack) {
            if let Origin::Structural { var, sign } = *o {
                full[(i, c)] = sign * a[(i, var)];
            }
        }
        if i >= n_eq {
            full[(i, first_slack + (i - n_eq))] = T::one();
        }
        full[(i, first_artificial + i)] = signs[i];
    }

    let mut t = DenseMatrix::zeros(m, ncols);
    for i in 0..m {
        for c in 0..ncols {
            t[(i, c)] = signs[i] * full[(i, c)];
        }
    }
    let mut position = vec![Position::AtLower; ncols];
    let basis: Vec<usize> = (0..m).map(|i| first_artificial + i).collect();
    for &c in &basis {
        position[c] = Position::Basic;
    }
    let mut tab = Tableau {
        t,
        beta: b.iter().map(|v| v.abs()).collect(),
        basis,
        position,
        upper,
        origin,
        iterations: 0,
        max_iterations: 200 * (m + ncols) + 1000,
    };

    // Phase 1.
    let phase1_cost: Vec<T> = (0..ncols)
        .map(|c| if c >= first_artificial { T::one() } else { T::zero() })
        .collect();
    tab.run(&phase1_cost)?;
    let scale = b.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
    let infeasibility = (0..m)
        .filter(|&i| tab.basis[i] >= first_artificial)
        .fold(T::zero(), |acc, i| acc + tab.beta[i]);
    if infeasibility > T::feasibility_tol() * scale {
        return Ok(LpSolution::without_point(LpStatus::Infeasible, tab.iterations));
    }
    for c in first_artificial..ncols {
        tab.upper[c] = T::zero();
    }
    for i in 0..m {
        if tab.basis[i] >= first_artificial {
            tab.beta[i] = T::zero();
        }
    }

    // Phase 2.
    if let StepOutcome::Unbounded = tab.run(&std_cost)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, tab.iterations));
    }

    // Refactor from the original columns for clean primal and dual values.
    let mut bmat = DenseMatrix::zeros(m, m);
    for (r, &c) in tab.basis.iter().enumerate() {
        for i in 0..m {
            bmat[(i, r)] = full[(i, c)];
        }
    }
    let mut rhs = b.clone();
    for c in 0..ncols {
        if tab.position[c] == Position::AtUpper {
            for i in 0..m {
                rhs[i] -= full[(i, c)] * tab.upper[c];
            }
        }
    }
    let (x_basic, y) = if m > 0 {
        let lu = LuFactors::factor(&bmat)
            .map_err(|e| LpError::Numerical(format!("final basis: {e}")))?;
        let cb: Vec<T> = tab.basis.iter().map(|&c| std_cost[c]).collect();
        (lu.solve(&rhs), lu.solve_transpose(&cb))
    } else {
        (Vec::new(), Vec::new())
    };

    let mut col_value = vec![T::zero(); ncols];
    for c in 0..ncols {
        if tab.position[c] == Position::AtUpper {
            col_value[c] = tab.upper[c];
        }
    }
    for (r, &c) in tab.basis.iter().enumerate() {
        col_value[c] = x_basic[r];
    }
    let mut primal = offsets.clone();
    for c in 0..first_slack {
        if let Origin::Structural { var, sign } = tab.origin[c] {
            primal[var] += sign * col_value[c];
        }
    }
    for (k, v) in problem.variables.iter().enumerate() {
        primal[k] = primal[k].max(v.lower).min(v.upper);
    }

    // Post-solve feasibility audit.
    let feas = T::feasibility_tol();
    for (i, row) in rows.iter().enumerate() {
        let act = LpProblem::row_activity(row, &primal);
        let slack = row.rhs - act;
        let tol = feas * (T::one() + row.rhs.abs().max(scale));
        let bad = if i < n_eq { slack.abs() > tol } else { slack < -tol };
        if bad {
            return Err(LpError::Numerical(format!(
                "row {} violated by {} after refactorization",
                row.name,
                slack.abs()
            )));
        }
    }

    let duals_eq = y[..n_eq].to_vec();
    let duals_ineq: Vec<T> = y[n_eq..].iter().map(|&v| -v).collect();
    let reduced_costs: Vec<T> = (0..n)
        .map(|k| {
            (0..m).fold(problem.objective[k], |acc, i| acc - a[(i, k)] * y[i])
        })
        .collect();

    let d = tab.reduced_costs(&std_cost);
    let cost_scale = std_cost.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
    let degeneracy = Degeneracy {
        primal: tab.basis.iter().enumerate().any(|(r, &c)| {
            let v = x_basic[r];
            v.abs() <= feas * scale || (tab.upper[c].is_finite() && (tab.upper[c] - v).abs() <= feas * scale)
        }),
        dual: (0..first_artificial).any(|c| {
            tab.position[c] != Position::Basic && tab.upper[c] > T::zero() && d[c].abs() <= feas * cost_scale
        }),
    };

    let mut basis = tab.basis.clone();
    basis.sort_unstable();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: Some(problem.objective_at(&primal)),
        primal,
        duals_eq,
        duals_ineq,
        reduced_costs,
        basis,
        degeneracy,
        iterations: tab.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn bound_binding_minimum() {
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", -INF, INF);
        lp.set_cost(x, 1.0);
        lp.add_ge("x>=3", vec![(x, 1.0)], 3.0);
        lp.add_le("x<=10", vec![(x, 1.0)], 10.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.primal[0] - 3.0).abs() < 1e-12);
        assert!((s.objective_value.unwrap() - 3.0).abs() < 1e-12);
        // x>=3 is stored as -x <= -3 and carries the price.
        assert!((s.duals_ineq[0] - 1.0).abs() < 1e-12);
        assert_eq!(s.duals_ineq[1], 0.0);
    }

    #[test]
    fn empty_feasible_set() {
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", 0.0, INF);
        lp.add_le("x<=1", vec![(x, 1.0)], 1.0);
        lp.add_ge("x>=2", vec![(x, 1.0)], 2.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(s.primal.is_empty() && s.objective_value.is_none());
    }

    #[test]
    fn unbounded_objective() {
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", 0.0, INF);
        let y = lp.add_variable("y", -INF, 5.0);
        lp.set_cost(x, -1.0);
        lp.add_le("r", vec![(x, 1.0), (y, 1.0)], 2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn upper_bounded_and_mirrored_variables() {
        // max x + y  with x ≤ 4 (bound), y ≤ 3 (bound, no lower), x + y ≤ 6.
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", 0.0, 4.0);
        let y = lp.add_variable("y", -INF, 3.0);
        lp.set_cost(x, -1.0);
        lp.set_cost(y, -2.0);
        lp.add_le("cap", vec![(x, 1.0), (y, 1.0)], 6.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.primal, vec![3.0, 3.0]);
        assert_eq!(s.objective_value, Some(-9.0));
        assert!((s.duals_ineq[0] - 1.0).abs() < 1e-12);
        assert!((s.reduced_costs[y] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_dual_is_marginal_cost() {
        // Two units serve 50 MW; cheap one is capped at 30.
        let mut lp = LpProblem::<f64>::new();
        let g1 = lp.add_variable("g1", 0.0, 30.0);
        let g2 = lp.add_variable("g2", 0.0, 100.0);
        lp.set_cost(g1, 10.0);
        lp.set_cost(g2, 25.0);
        lp.add_eq("balance", vec![(g1, 1.0), (g2, 1.0)], 50.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.primal, vec![30.0, 20.0]);
        assert!((s.duals_eq[0] - 25.0).abs() < 1e-12);
        assert!((s.reduced_costs[g1] + 15.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_variable_and_redundant_row() {
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", 2.0, 2.0);
        let y = lp.add_variable("y", 0.0, INF);
        lp.set_cost(y, 1.0);
        lp.add_eq("sum", vec![(x, 1.0), (y, 1.0)], 5.0);
        lp.add_eq("sum_again", vec![(x, 2.0), (y, 2.0)], 10.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.primal[y] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_constraints() {
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", -1.0, 1.0);
        lp.set_cost(x, 2.0);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.primal, vec![-1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let mut lp = LpProblem::<f64>::new();
        lp.add_variable("x", 1.0, 0.0);
        assert_eq!(solve_lp(&lp), Err(LpError::InvertedBounds("x".into())));
        let mut lp = LpProblem::<f64>::new();
        lp.add_variable("x", 0.0, 1.0);
        lp.add_le("r", vec![(3, 1.0)], 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::UnknownVariable { index: 3, .. })));
    }

    #[test]
    fn f32_solve() {
        let mut lp = LpProblem::<f32>::new();
        let g1 = lp.add_variable("g1", 0.0, 30.0);
        let g2 = lp.add_variable("g2", 0.0, 100.0);
        lp.set_cost(g1, 10.0);
        lp.set_cost(g2, 25.0);
        lp.add_eq("balance", vec![(g1, 1.0), (g2, 1.0)], 50.0);
        let s = solve_lp(&lp).unwrap();
        assert!((s.objective_value.unwrap() - 800.0).abs() < 1e-3);
    }

    #[test]
    fn listing_mentions_every_row() {
        let mut lp = LpProblem::new();
        let x = lp.add_variable("x", 0.0, INF);
        lp.add_eq("balance", vec![(x, 1.0)], 1.0);
        lp.add_le("cap", vec![(x, 1.0)], 2.0);
        let text = lp.listing();
        assert!(text.contains("balance") && text.contains("cap") && text.contains("+inf"));
    }

    /// Dual objective of `min cx, Ax = b (eq), Ax ≤ b (ineq), l ≤ x ≤ u`.
    fn dual_objective(lp: &LpProblem<f64>, s: &LpSolution<f64>) -> f64 {
        let mut v = lp.objective_constant;
        for (row, y) in lp.eq_constraints.iter().zip(&s.duals_eq) {
            v += row.rhs * y;
        }
        for (row, mu) in lp.ineq_constraints.iter().zip(&s.duals_ineq) {
            v -= row.rhs * mu;
        }
        for (var, (&rc, &x)) in lp.variables.iter().zip(s.reduced_costs.iter().zip(&s.primal)) {
            if rc > 0.0 {
                v += rc * var.lower;
            } else if rc < 0.0 {
                v += rc * var.upper;
            } else {
                let _ = x;
            }
        }
        v
    }

    fn random_lp() -> impl Strategy<Value = LpProblem<f64>> {
        (2usize..6, 1usize..5).prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), m),
                prop::collection::vec(0.5f64..10.0, m),
                prop::collection::vec(1.0f64..8.0, n),
            )
                .prop_map(move |(c, rows, rhs, ub)| {
                    let mut lp = LpProblem::new();
                    for (k, u) in ub.iter().enumerate() {
                        let v = lp.add_variable(format!("x{k}"), 0.0, *u);
                        lp.set_cost(v, c[k]);
                    }
                    for (i, (row, b)) in rows.iter().zip(&rhs).enumerate() {
                        lp.add_le(format!("r{i}"), row.iter().cloned().enumerate().collect(), *b);
                    }
                    lp
                })
        })
    }

    proptest! {
        #[test]
        fn kkt_conditions_hold(lp in random_lp()) {
            // x = 0 is always feasible and bounds are finite, so the optimum exists.
            let s = solve_lp(&lp).unwrap();
            prop_assert_eq!(s.status, LpStatus::Optimal);
            let obj = s.objective_value.unwrap();
            prop_assert!((obj - dual_objective(&lp, &s)).abs() <= 1e-6 * (1.0 + obj.abs()));
            for (row, &mu) in lp.ineq_constraints.iter().zip(&s.duals_ineq) {
                prop_assert!(mu >= -1e-9);
                let slack = row.rhs - LpProblem::row_activity(row, &s.primal);
                prop_assert!(slack >= -1e-7);
                prop_assert!((mu * slack).abs() <= 1e-6);
            }
            for (var, (&rc, &x)) in lp.variables.iter().zip(s.reduced_costs.iter().zip(&s.primal)) {
                if rc > 1e-9 { prop_assert!((x - var.lower).abs() < 1e-7); }
                if rc < -1e-9 { prop_assert!((x - var.upper).abs() < 1e-7); }
            }
        }

        #[test]
        fn objective_scaling_scales_duals(lp in random_lp(), k in 0.1f64..10.0) {
            let base = solve_lp(&lp).unwrap();
            let mut scaled = lp.clone();
            for c in &mut scaled.objective { *c *= k; }
            let s = solve_lp(&scaled).unwrap();
            let (a, b) = (base.objective_value.unwrap(), s.objective_value.unwrap());
            prop_assert!((b - k * a).abs() <= 1e-7 * (1.0 + b.abs()));
            if !base.degeneracy.primal && !base.degeneracy.dual {
                for (x, y) in base.primal.iter().zip(&s.primal) {
                    prop_assert!((x - y).abs() < 1e-7);
                }
                for (x, y) in base.duals_ineq.iter().zip(&s.duals_ineq) {
                    prop_assert!((k * x - y).abs() <= 1e-6 * (1.0 + y.abs()));
                }
            }
        }

        #[test]
        fn resolve_is_bit_identical(lp in random_lp()) {
            let a = solve_lp(&lp).unwrap();
            let b = solve_lp(&lp).unwrap();
            prop_assert_eq!(a.status, b.status);
            prop_assert_eq!(a.objective_value.map(f64::to_bits), b.objective_value.map(f64::to_bits));
        }
    }
}
