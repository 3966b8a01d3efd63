//! Exact linear programming: a dense two-phase tableau simplex with Bland's
//! rule. Bland's rule cannot cycle, so every solve terminates, and since the
//! pivot choices depend only on the input the returned vertex is reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

impl<S> Constraint<S> {
    pub fn new(coeffs: Vec<S>, relation: Relation, rhs: S) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// `minimize objective·x` subject to the constraints and `x_j >= lower_bounds[j]`
/// (`None` leaves `x_j` free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram<S> {
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub lower_bounds: Vec<Option<S>>,
}

impl<S: Scalar> LinearProgram<S> {
    /// A program over `num_vars` nonnegative variables.
    pub fn new(objective: Vec<S>) -> Self {
        let lower_bounds = vec![Some(S::zero()); objective.len()];
        LinearProgram {
            objective,
            constraints: Vec::new(),
            lower_bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, coeffs: Vec<S>, relation: Relation, rhs: S) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn set_free(&mut self, var: usize) {
        self.lower_bounds[var] = None;
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower_bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} bounds"),
                found: format!("{} bounds", self.lower_bounds.len()),
            });
        }
        if let Some(row) = self.constraints.iter().find(|c| c.coeffs.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} coefficients"),
                found: format!("{} coefficients", row.coeffs.len()),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution<S> {
    pub value: S,
    pub point: Vec<S>,
    /// Pivots across both phases.
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<S> {
    Optimal(LpSolution<S>),
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn optimal(self) -> Option<LpSolution<S>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl<S: Scalar> fmt::Display for LpOutcome<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpOutcome::Optimal(s) => write!(f, "optimal {}", s.value),
            LpOutcome::Infeasible => write!(f, "infeasible"),
            LpOutcome::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// How a structural column maps back to an original variable.
#[derive(Clone, Debug)]
enum Column<S> {
    /// `x = lower + y`
    Shifted { var: usize, lower: S },
    /// `x = y⁺ - y⁻`, the positive part.
    Plus(usize),
    Minus(usize),
}

struct Tableau<S> {
    /// `rows × (cols + 1)`, last entry the right-hand side.
    rows: Vec<Vec<S>>,
    /// Reduced costs; last entry is minus the objective value.
    costs: Vec<S>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns the entering rule may pick.
    allowed: Vec<bool>,
    pivots: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.cols + 1;
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for j in 0..width {
                if !self.rows[r][j].is_zero() {
                    self.rows[r][j] = self.rows[r][j].clone() / p.clone();
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        let nonzero: Vec<usize> = (0..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &nonzero {
                row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
            }
        }
        if !self.costs[c].is_zero() {
            let factor = self.costs[c].clone();
            for &j in &nonzero {
                self.costs[j] = self.costs[j].clone() - factor.clone() * pivot_row[j].clone();
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimizes the current cost row with Bland's rule.
    fn run(&mut self) -> Phase {
        loop {
            let Some(c) = (0..self.cols).find(|&j| self.allowed[j] && self.costs[j].is_negative())
            else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = row[self.cols].clone() / row[c].clone();
                let better = match &best {
                    None => true,
                    Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Phase::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn set_costs(&mut self, cost: &[S]) {
        let width = self.cols + 1;
        let mut costs: Vec<S> = (0..width)
            .map(|j| if j < self.cols { cost[j].clone() } else { S::zero() })
            .collect();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !row[j].is_zero() {
                    costs[j] = costs[j].clone() - cb.clone() * row[j].clone();
                }
            }
        }
        self.costs = costs;
    }
}

/// Solves `lp` exactly. Infeasibility and unboundedness are outcomes, not
/// errors; errors are reserved for malformed programs.
pub fn lp_min<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpOutcome<S>> {
    lp.validate()?;
    let mut columns = Vec::new();
    for (var, bound) in lp.lower_bounds.iter().enumerate() {
        match bound {
            Some(lower) => columns.push(Column::Shifted {
                var,
                lower: lower.clone(),
            }),
            None => {
                columns.push(Column::Plus(var));
                columns.push(Column::Minus(var));
            }
        }
    }
    let structural = columns.len();
    let m = lp.constraints.len();
    let slack_count = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();

    // Standard-form rows before artificials: structural | slacks | rhs.
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut slack_of_row: Vec<Option<usize>> = Vec::with_capacity(m);
    let mut next_slack = structural;
    for c in &lp.constraints {
        let mut row = vec![S::zero(); structural + slack_count + 1];
        let mut rhs = c.rhs.clone();
        for (col, kind) in columns.iter().enumerate() {
            row[col] = match kind {
                Column::Shifted { var, lower } => {
                    rhs = rhs - c.coeffs[*var].clone() * lower.clone();
                    c.coeffs[*var].clone()
                }
                Column::Plus(var) => c.coeffs[*var].clone(),
                Column::Minus(var) => -c.coeffs[*var].clone(),
            };
        }
        let slack = match c.relation {
            Relation::Le => Some((next_slack, S::one())),
            Relation::Ge => Some((next_slack, -S::one())),
            Relation::Eq => None,
        };
        if let Some((col, sign)) = &slack {
            row[*col] = sign.clone();
            next_slack += 1;
        }
        row[structural + slack_count] = rhs;
        if row[structural + slack_count].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        slack_of_row.push(slack.map(|(col, _)| col));
        rows.push(row);
    }

    // Rows whose slack ended up with coefficient +1 start with it basic; the
    // rest get an artificial column.
    let base_cols = structural + slack_count;
    let mut basis = vec![usize::MAX; m];
    let mut artificial_rows = Vec::new();
    for i in 0..m {
        match slack_of_row[i] {
            Some(col) if rows[i][col].is_one() => basis[i] = col,
            _ => artificial_rows.push(i),
        }
    }
    let cols = base_cols + artificial_rows.len();
    for (a, &i) in artificial_rows.iter().enumerate() {
        let rhs = rows[i].pop().expect("rhs present");
        rows[i].resize(cols, S::zero());
        rows[i][base_cols + a] = S::one();
        rows[i].push(rhs);
        basis[i] = base_cols + a;
    }
    for row in rows.iter_mut() {
        if row.len() != cols + 1 {
            let rhs = row.pop().expect("rhs present");
            row.resize(cols, S::zero());
            row.push(rhs);
        }
    }

    let mut tab = Tableau {
        rows,
        costs: Vec::new(),
        basis,
        cols,
        allowed: vec![true; cols],
        pivots: 0,
    };

    if !artificial_rows.is_empty() {
        let phase_one: Vec<S> = (0..cols)
            .map(|j| if j >= base_cols { S::one() } else { S::zero() })
            .collect();
        tab.set_costs(&phase_one);
        tab.run();
        if tab.costs[cols].is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= base_cols {
                if let Some(c) = (0..base_cols).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, c);
                } else {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        for j in base_cols..cols {
            tab.allowed[j] = false;
        }
    }

    let mut cost = vec![S::zero(); cols];
    let mut constant = S::zero();
    for (col, kind) in columns.iter().enumerate() {
        cost[col] = match kind {
            Column::Shifted { var, lower } => {
                constant = constant + lp.objective[*var].clone() * lower.clone();
                lp.objective[*var].clone()
            }
            Column::Plus(var) => lp.objective[*var].clone(),
            Column::Minus(var) => -lp.objective[*var].clone(),
        };
    }
    tab.set_costs(&cost);
    if let Phase::Unbounded = tab.run() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut values = vec![S::zero(); cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        values[b] = tab.rows[i][cols].clone();
    }
    let mut point = vec![S::zero(); lp.num_vars()];
    for (col, kind) in columns.iter().enumerate() {
        match kind {
            Column::Shifted { var, lower } => point[*var] = lower.clone() + values[col].clone(),
            Column::Plus(var) => point[*var] = point[*var].clone() + values[col].clone(),
            Column::Minus(var) => point[*var] = point[*var].clone() - values[col].clone(),
        }
    }
    let value = constant - tab.costs[cols].clone();
    Ok(LpOutcome::Optimal(LpSolution {
        value,
        point,
        pivots: tab.pivots,
    }))
}
