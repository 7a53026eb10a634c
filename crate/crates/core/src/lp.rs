//! Dense two-phase simplex with Bland's rule.
//!
//! Problems are stated in general form
//!
//! ```text
//! minimize    c·x
//! subject to  A_eq x  = b_eq
//!             A_ub x <= b_ub
//!             l <= x <= u          (either side may be infinite)
//! ```
//!
//! and internally rewritten to `min c'·x', A' x' = b', x' >= 0, b' >= 0`.
//!
//! Dual multipliers use the Lagrangian convention: reduced costs are
//! `r = c - A_eq^T y - A_ub^T w`, with `y` free and `w <= 0`. The reduced
//! costs split into multipliers for the lower (`r+`) and upper (`r-`) bounds.

use thiserror::Error;

use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("malformed LP: {0}")]
    Malformed(String),
    #[error("simplex exceeded the iteration cap of {0}")]
    MaxIterationsExceeded(usize),
    #[error("numeric breakdown: {0}")]
    NumericBreakdown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A linear program in general form; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    pub cost: Vec<T>,
    pub a_eq: Vec<Vec<T>>,
    pub b_eq: Vec<T>,
    pub a_ub: Vec<Vec<T>>,
    pub b_ub: Vec<T>,
    pub lower: Vec<Option<T>>,
    pub upper: Vec<Option<T>>,
}

impl<T: Scalar> LpProblem<T> {
    /// `min cost·x` over `x >= 0`, no rows yet.
    pub fn new(cost: Vec<T>) -> Self {
        let n = cost.len();
        Self {
            cost,
            a_eq: Vec::new(),
            b_eq: Vec::new(),
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            lower: vec![Some(T::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn num_rows(&self) -> usize {
        self.a_eq.len() + self.a_ub.len()
    }

    pub fn add_eq(&mut self, row: Vec<T>, rhs: T) -> usize {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self.a_eq.len() - 1
    }

    pub fn add_ub(&mut self, row: Vec<T>, rhs: T) -> usize {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self.a_ub.len() - 1
    }

    /// `row·x >= rhs`, stored as `-row·x <= -rhs`.
    pub fn add_lb(&mut self, row: Vec<T>, rhs: T) -> usize {
        self.add_ub(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.cost.len();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed("bound vectors do not match cost length".into()));
        }
        if self.a_eq.len() != self.b_eq.len() || self.a_ub.len() != self.b_ub.len() {
            return Err(LpError::Malformed("row count does not match rhs length".into()));
        }
        for (i, row) in self.a_eq.iter().chain(&self.a_ub).enumerate() {
            if row.len() != n {
                return Err(LpError::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        let finite = |x: &T| x.to_f64().is_finite();
        let all = self
            .cost
            .iter()
            .chain(self.a_eq.iter().flatten())
            .chain(self.a_ub.iter().flatten())
            .chain(&self.b_eq)
            .chain(&self.b_ub)
            .chain(self.lower.iter().flatten())
            .chain(self.upper.iter().flatten());
        for x in all {
            if !finite(x) {
                return Err(LpError::Malformed("non-finite entry".into()));
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[T]) -> T {
        dot(&self.cost, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Empty unless optimal.
    pub primal: Vec<T>,
    /// One multiplier per equality row.
    pub dual_eq: Vec<T>,
    /// One multiplier per inequality row; nonpositive.
    pub dual_ub: Vec<T>,
    pub objective: T,
    pub iterations: usize,
}

impl<T: Scalar> LpSolution<T> {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        Self {
            status,
            primal: Vec::new(),
            dual_eq: Vec::new(),
            dual_ub: Vec::new(),
            objective: T::zero(),
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Residuals of a claimed optimal primal/dual pair. All entries are
/// nonnegative; zero means the condition holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    pub primal_feasibility: T,
    pub dual_feasibility: T,
    pub complementary_slackness: T,
    pub duality_gap: T,
}

impl<T: Scalar> ResidualReport<T> {
    pub fn max(&self) -> T {
        [
            &self.primal_feasibility,
            &self.dual_feasibility,
            &self.complementary_slackness,
            &self.duality_gap,
        ]
        .into_iter()
        .fold(T::zero(), |a, b| T::max_of(a, b.clone()))
    }

    pub fn within(&self, tol: &T) -> bool {
        self.max() <= *tol
    }
}

/// Audits `s` against `p` using only the problem data.
pub fn check_solution<T: Scalar>(p: &LpProblem<T>, s: &LpSolution<T>) -> ResidualReport<T> {
    let n = p.num_vars();
    let zero = T::zero;
    let pos = |v: T| T::max_of(v, T::zero());
    let x: Vec<T> = if s.primal.len() == n {
        s.primal.clone()
    } else {
        vec![zero(); n]
    };
    let y: Vec<T> = pad(&s.dual_eq, p.a_eq.len());
    let w: Vec<T> = pad(&s.dual_ub, p.a_ub.len());

    let mut primal = zero();
    for (row, b) in p.a_eq.iter().zip(&p.b_eq) {
        primal = T::max_of(primal, (dot(row, &x) - b.clone()).abs());
    }
    let mut ub_slack = Vec::with_capacity(p.a_ub.len());
    for (row, b) in p.a_ub.iter().zip(&p.b_ub) {
        let slack = b.clone() - dot(row, &x);
        primal = T::max_of(primal, pos(-slack.clone()));
        ub_slack.push(slack);
    }
    for ((xj, l), u) in x.iter().zip(&p.lower).zip(&p.upper) {
        if let Some(l) = l {
            primal = T::max_of(primal, pos(l.clone() - xj.clone()));
        }
        if let Some(u) = u {
            primal = T::max_of(primal, pos(xj.clone() - u.clone()));
        }
    }

    let mut reduced = p.cost.clone();
    for (row, yi) in p.a_eq.iter().zip(&y) {
        for (r, a) in reduced.iter_mut().zip(row) {
            *r = r.clone() - a.clone() * yi.clone();
        }
    }
    for (row, wi) in p.a_ub.iter().zip(&w) {
        for (r, a) in reduced.iter_mut().zip(row) {
            *r = r.clone() - a.clone() * wi.clone();
        }
    }

    let mut dual = zero();
    let mut cs = zero();
    let mut dual_obj = dot(&p.b_eq, &y) + dot(&p.b_ub, &w);
    for (wi, slack) in w.iter().zip(&ub_slack) {
        dual = T::max_of(dual, pos(wi.clone()));
        cs = T::max_of(cs, (wi.clone() * slack.clone()).abs());
    }
    for j in 0..n {
        let r_plus = pos(reduced[j].clone());
        let r_minus = pos(-reduced[j].clone());
        match &p.lower[j] {
            Some(l) => {
                dual_obj = dual_obj + l.clone() * r_plus.clone();
                cs = T::max_of(cs, (r_plus * (x[j].clone() - l.clone())).abs());
            }
            None => dual = T::max_of(dual, r_plus),
        }
        match &p.upper[j] {
            Some(u) => {
                dual_obj = dual_obj - u.clone() * r_minus.clone();
                cs = T::max_of(cs, (r_minus * (u.clone() - x[j].clone())).abs());
            }
            None => dual = T::max_of(dual, r_minus),
        }
    }
    let gap = (p.objective_at(&x) - dual_obj).abs();
    ResidualReport {
        primal_feasibility: primal,
        dual_feasibility: dual,
        complementary_slackness: cs,
        duality_gap: gap,
    }
}

fn pad<T: Scalar>(v: &[T], n: usize) -> Vec<T> {
    let mut out = v.to_vec();
    out.resize(n, T::zero());
    out
}

/// How an original variable maps onto standard-form columns.
#[derive(Debug, Clone)]
enum VarMap<T> {
    /// `x = offset + x'`
    Shift { col: usize, offset: T },
    /// `x = offset - x'`
    Reflect { col: usize, offset: T },
    /// `x = x+ - x-`
    Split { pos: usize, neg: usize },
}

struct StandardForm<T> {
    /// Dense `m x n` matrix over standard-form columns.
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    cost: Vec<T>,
    /// Row `i` was multiplied by `sign[i]` to make its rhs nonnegative.
    negated: Vec<bool>,
    vars: Vec<VarMap<T>>,
    constant: T,
    eq_rows: usize,
    ub_rows: usize,
}

fn to_standard_form<T: Scalar>(p: &LpProblem<T>) -> StandardForm<T> {
    let n = p.num_vars();
    let mut vars = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, T)> = Vec::new();
    for j in 0..n {
        let map = match (&p.lower[j], &p.upper[j]) {
            (Some(l), u) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = u {
                    bound_rows.push((col, u.clone() - l.clone()));
                }
                VarMap::Shift { col, offset: l.clone() }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                VarMap::Reflect { col, offset: u.clone() }
            }
            (None, None) => {
                let pos = ncols;
                ncols += 2;
                VarMap::Split { pos, neg: pos + 1 }
            }
        };
        vars.push(map);
    }
    let structural = ncols;
    let slack_count = p.a_ub.len() + bound_rows.len();
    let total_cols = structural + slack_count;

    let mut cost = vec![T::zero(); total_cols];
    let mut constant = T::zero();
    for (j, map) in vars.iter().enumerate() {
        let c = p.cost[j].clone();
        match map {
            VarMap::Shift { col, offset } => {
                constant = constant + c.clone() * offset.clone();
                cost[*col] = c;
            }
            VarMap::Reflect { col, offset } => {
                constant = constant + c.clone() * offset.clone();
                cost[*col] = -c;
            }
            VarMap::Split { pos, neg } => {
                cost[*pos] = c.clone();
                cost[*neg] = -c;
            }
        }
    }

    let translate = |row: &[T], b: &T| -> (Vec<T>, T) {
        let mut out = vec![T::zero(); total_cols];
        let mut rhs = b.clone();
        for (j, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &vars[j] {
                VarMap::Shift { col, offset } => {
                    rhs = rhs - a.clone() * offset.clone();
                    out[*col] = a.clone();
                }
                VarMap::Reflect { col, offset } => {
                    rhs = rhs - a.clone() * offset.clone();
                    out[*col] = -a.clone();
                }
                VarMap::Split { pos, neg } => {
                    out[*pos] = a.clone();
                    out[*neg] = -a.clone();
                }
            }
        }
        (out, rhs)
    };

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (row, b) in p.a_eq.iter().zip(&p.b_eq) {
        let (r, b) = translate(row, b);
        rows.push(r);
        rhs.push(b);
    }
    let mut slack = structural;
    for (row, b) in p.a_ub.iter().zip(&p.b_ub) {
        let (mut r, b) = translate(row, b);
        r[slack] = T::one();
        slack += 1;
        rows.push(r);
        rhs.push(b);
    }
    for (col, width) in bound_rows {
        let mut r = vec![T::zero(); total_cols];
        r[col] = T::one();
        r[slack] = T::one();
        slack += 1;
        rows.push(r);
        rhs.push(width);
    }

    let mut negated = vec![false; rows.len()];
    for (i, (r, b)) in rows.iter_mut().zip(rhs.iter_mut()).enumerate() {
        if *b < T::zero() {
            negated[i] = true;
            *b = -b.clone();
            for v in r.iter_mut() {
                if !v.is_zero() {
                    *v = -v.clone();
                }
            }
        }
    }

    StandardForm {
        rows,
        rhs,
        cost,
        negated,
        vars,
        constant,
        eq_rows: p.a_eq.len(),
        ub_rows: p.a_ub.len(),
    }
}

/// Dense tableau; the last column holds the rhs and the last row the
/// reduced costs (with `-objective` in its rhs slot).
struct Tableau<T> {
    data: Vec<Vec<T>>,
    basis: Vec<usize>,
    width: usize,
    iterations: usize,
    cap: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn rhs_col(&self) -> usize {
        self.width
    }

    fn obj_row(&self) -> usize {
        self.data.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.data[r][c].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !self.data[r][j].is_zero()).collect();
        if !p.is_one() {
            for &j in &nz {
                self.data[r][j] = self.data[r][j].clone() / p.clone();
            }
        }
        let pivot_row = self.data[r].clone();
        for (i, row) in self.data.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
            row[c] = T::zero();
        }
        if r < self.basis.len() {
            self.basis[r] = c;
        }
    }

    /// Runs Bland's rule over the columns `< allowed`.
    fn run(&mut self, allowed: usize) -> Result<Step, LpError> {
        let tol = T::feasibility_tol();
        let neg_tol = -tol;
        let ptol = T::pivot_tol();
        let rhs = self.rhs_col();
        loop {
            let obj = self.obj_row();
            let Some(enter) = (0..allowed).find(|&j| self.data[obj][j] < neg_tol) else {
                return Ok(Step::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.basis.len() {
                let a = &self.data[i][enter];
                if *a <= ptol {
                    continue;
                }
                let ratio = self.data[i][rhs].clone() / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(Step::Unbounded);
            };
            self.iterations += 1;
            if self.iterations > self.cap {
                return Err(LpError::MaxIterationsExceeded(self.cap));
            }
            self.pivot(r, enter);
        }
    }
}

/// Solves `p` to optimality, or reports infeasibility/unboundedness.
pub fn solve<T: Scalar>(p: &LpProblem<T>) -> Result<LpSolution<T>, LpError> {
    p.validate()?;
    let sf = to_standard_form(p);
    let m = sf.rows.len();
    let n = sf.cost.len();
    let cap = 50 * (m + n).max(1);

    // Columns: structural+slack (0..n), artificials (n..n+m), rhs (n+m).
    let width = n + m;
    let mut data = Vec::with_capacity(m + 1);
    for (i, (row, b)) in sf.rows.iter().zip(&sf.rhs).enumerate() {
        let mut r = row.clone();
        r.resize(width + 1, T::zero());
        r[n + i] = T::one();
        r[width] = b.clone();
        data.push(r);
    }
    let mut obj = vec![T::zero(); width + 1];
    for row in &data {
        for j in 0..n {
            if !row[j].is_zero() {
                obj[j] = obj[j].clone() - row[j].clone();
            }
        }
        obj[width] = obj[width].clone() - row[width].clone();
    }
    data.push(obj);
    let mut tab = Tableau {
        data,
        basis: (n..n + m).collect(),
        width,
        iterations: 0,
        cap,
    };

    // Phase 1: minimize the sum of artificials.
    if m > 0 {
        tab.run(n)?;
        let infeasibility = -tab.data[m][width].clone();
        if infeasibility > T::feasibility_tol() {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, tab.iterations));
        }
        drive_out_artificials(&mut tab, n);
    }

    // Phase 2 objective row: c - c_B B^{-1} [A | I].
    let obj = tab.obj_row();
    let mut row = vec![T::zero(); width + 1];
    row[..n].clone_from_slice(&sf.cost);
    for i in 0..tab.basis.len() {
        let b = tab.basis[i];
        let cb = if b < n { sf.cost[b].clone() } else { T::zero() };
        if cb.is_zero() {
            continue;
        }
        for (j, v) in row.iter_mut().enumerate() {
            let a = &tab.data[i][j];
            if !a.is_zero() {
                *v = v.clone() - cb.clone() * a.clone();
            }
        }
    }
    for j in 0..tab.basis.len() {
        let b = tab.basis[j];
        row[b] = T::zero();
    }
    tab.data[obj] = row;

    match tab.run(n)? {
        Step::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded, tab.iterations)),
        Step::Optimal => {}
    }

    let mut xs = vec![T::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            xs[b] = tab.data[i][width].clone();
        }
    }
    let primal: Vec<T> = sf
        .vars
        .iter()
        .map(|v| match v {
            VarMap::Shift { col, offset } => offset.clone() + xs[*col].clone(),
            VarMap::Reflect { col, offset } => offset.clone() - xs[*col].clone(),
            VarMap::Split { pos, neg } => xs[*pos].clone() - xs[*neg].clone(),
        })
        .collect();

    // Reduced cost of artificial k is -y_k.
    let obj = tab.obj_row();
    let y_std: Vec<T> = (0..m)
        .map(|k| {
            let y = -tab.data[obj][n + k].clone();
            if sf.negated[k] {
                -y
            } else {
                y
            }
        })
        .collect();
    let dual_eq = y_std[..sf.eq_rows].to_vec();
    let dual_ub = y_std[sf.eq_rows..sf.eq_rows + sf.ub_rows].to_vec();
    let objective = sf.constant.clone() - tab.data[obj][width].clone();

    let sol = LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual_eq,
        dual_ub,
        objective,
        iterations: tab.iterations,
    };
    if T::MODE == crate::Mode::Float {
        let report = check_solution(p, &sol);
        let scale = p
            .cost
            .iter()
            .chain(&p.b_eq)
            .chain(&p.b_ub)
            .fold(1.0f64, |a, v| a.max(v.to_f64().abs()));
        if report.max().to_f64() > 1e-6 * scale {
            return Err(LpError::NumericBreakdown(format!(
                "KKT residual {} after {} pivots",
                report.max(),
                sol.iterations
            )));
        }
    }
    Ok(sol)
}

/// Pivots zero-level artificials out of the basis; rows where that is
/// impossible are linearly dependent and are dropped.
fn drive_out_artificials<T: Scalar>(tab: &mut Tableau<T>, n: usize) {
    let ptol = T::pivot_tol();
    let mut i = 0;
    while i < tab.basis.len() {
        if tab.basis[i] < n {
            i += 1;
            continue;
        }
        let col = (0..n).find(|&j| tab.data[i][j].abs() > ptol);
        match col {
            Some(j) => {
                tab.pivot(i, j);
                i += 1;
            }
            None => {
                tab.data.remove(i);
                tab.basis.remove(i);
            }
        }
    }
}

/// Relation of a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

/// Where a builder row ended up in the assembled [`LpProblem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRef {
    Eq(usize),
    Ub(usize),
    /// A `>=` row stored negated in the inequality block.
    NegUb(usize),
}

/// Incremental, sparse construction of an [`LpProblem`].
#[derive(Debug, Clone)]
pub struct LpBuilder<T> {
    cost: Vec<T>,
    lower: Vec<Option<T>>,
    upper: Vec<Option<T>>,
    rows: Vec<BuilderRow<T>>,
}

/// Sparse terms, relation, right-hand side.
type BuilderRow<T> = (Vec<(usize, T)>, Relation, T);

impl<T: Scalar> Default for LpBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> LpBuilder<T> {
    pub fn new() -> Self {
        Self {
            cost: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn add_var(&mut self, cost: T, lower: Option<T>, upper: Option<T>) -> usize {
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.len() - 1
    }

    /// `count` variables with shared cost and bounds; returns their indices.
    pub fn add_vars(&mut self, count: usize, cost: T, lower: Option<T>, upper: Option<T>) -> Vec<usize> {
        (0..count)
            .map(|_| self.add_var(cost.clone(), lower.clone(), upper.clone()))
            .collect()
    }

    pub fn set_cost(&mut self, var: usize, cost: T) {
        self.cost[var] = cost;
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Adds `sum coeff·x rel rhs`; repeated indices accumulate. Returns the row id.
    pub fn add_row(&mut self, terms: Vec<(usize, T)>, rel: Relation, rhs: T) -> usize {
        self.rows.push((terms, rel, rhs));
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn build(&self) -> (LpProblem<T>, Vec<RowRef>) {
        let n = self.cost.len();
        let mut p = LpProblem::new(self.cost.clone());
        p.lower = self.lower.clone();
        p.upper = self.upper.clone();
        let mut refs = Vec::with_capacity(self.rows.len());
        for (terms, rel, rhs) in &self.rows {
            let mut dense = vec![T::zero(); n];
            for (j, a) in terms {
                dense[*j] = dense[*j].clone() + a.clone();
            }
            refs.push(match rel {
                Relation::Eq => RowRef::Eq(p.add_eq(dense, rhs.clone())),
                Relation::Le => RowRef::Ub(p.add_ub(dense, rhs.clone())),
                Relation::Ge => RowRef::NegUb(p.add_lb(dense, rhs.clone())),
            });
        }
        (p, refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn simple_optimum() {
        let mut p = LpProblem::new(vec![q(-1), q(-1)]);
        p.add_ub(vec![q(1), q(1)], q(1));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, q(-1));
        let r = check_solution(&p, &s);
        assert!(r.within(&Rational::from_i64(0)), "{r:?}");
    }

    #[test]
    fn infeasible() {
        let mut p = LpProblem::new(vec![q(0)]);
        p.add_ub(vec![q(1)], q(-1));
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded() {
        let p = LpProblem::new(vec![q(-1)]);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn general_bounds_and_free_variables() {
        // min x0 - x1 + 2 x2, x0 in [-3, 5], x1 <= 4 (no lower), x2 free,
        // x0 + x2 = 1, x1 - x2 >= -2.
        let mut p = LpProblem::new(vec![q(1), q(-1), q(2)]);
        p.set_bounds(0, Some(q(-3)), Some(q(5)));
        p.set_bounds(1, None, Some(q(4)));
        p.set_bounds(2, None, None);
        p.add_eq(vec![q(1), q(0), q(1)], q(1));
        p.add_lb(vec![q(0), q(1), q(-1)], q(-2));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        // x2 = 1 - x0, x1 <= min(4, x2 + ...) : obj = x0 - x1 + 2 - 2x0 = 2 - x0 - x1,
        // with x1 = 4 and x0 = 5 -> x2 = -4, need x1 - x2 = 8 >= -2 ok -> -7.
        assert_eq!(s.objective, q(-7));
        assert_eq!(s.primal, vec![q(5), q(4), q(-4)]);
        let r = check_solution(&p, &s);
        assert!(r.within(&q(0)), "{r:?}");
    }

    #[test]
    fn redundant_equalities() {
        let mut p = LpProblem::new(vec![q(1), q(2)]);
        p.add_eq(vec![q(1), q(1)], q(1));
        p.add_eq(vec![q(2), q(2)], q(2));
        let s = solve(&p).unwrap();
        assert_eq!(s.objective, q(1));
        assert!(check_solution(&p, &s).within(&q(0)));
    }

    #[test]
    fn fixed_variable() {
        let mut p = LpProblem::new(vec![q(1), q(1)]);
        p.set_bounds(0, Some(q(2)), Some(q(2)));
        p.add_lb(vec![q(1), q(1)], q(3));
        let s = solve(&p).unwrap();
        assert_eq!(s.objective, q(3));
        assert!(check_solution(&p, &s).within(&q(0)));
    }

    #[test]
    fn residuals_flag_tampering() {
        let mut p = LpProblem::new(vec![q(-1), q(-1)]);
        p.add_ub(vec![q(1), q(2)], q(2));
        p.add_ub(vec![q(2), q(1)], q(2));
        let s = solve(&p).unwrap();
        assert!(check_solution(&p, &s).within(&q(0)));

        let mut bumped = s.clone();
        bumped.primal[0] = bumped.primal[0].clone() + Rational::ratio(1, 10);
        assert!(check_solution(&p, &bumped).primal_feasibility > q(0));

        let mut no_duals = s.clone();
        for w in no_duals.dual_ub.iter_mut() {
            *w = q(0);
        }
        let r = check_solution(&p, &no_duals);
        // Dual objective collapses to 0, so the gap equals |primal objective|.
        assert_eq!(r.duality_gap, Rational::ratio(4, 3));
    }

    #[test]
    fn float_mode_agrees() {
        let mut p = LpProblem::new(vec![-3.0, -5.0]);
        p.add_ub(vec![1.0, 0.0], 4.0);
        p.add_ub(vec![0.0, 2.0], 12.0);
        p.add_ub(vec![3.0, 2.0], 18.0);
        let s = solve(&p).unwrap();
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!(check_solution(&p, &s).within(&1e-9));
    }

    #[test]
    fn malformed_rejected() {
        let mut p = LpProblem::new(vec![q(1), q(1)]);
        p.add_ub(vec![q(1)], q(1));
        assert!(matches!(solve(&p), Err(LpError::Malformed(_))));
        let mut f = LpProblem::new(vec![f64::NAN]);
        f.add_ub(vec![1.0], 1.0);
        assert!(matches!(solve(&f), Err(LpError::Malformed(_))));
    }
}
