//! Hypothesis classes: finite generator families and constraint polytopes.
//!
//! A polytope lives in `(mu, u)` space, where `mu` ranges over the atoms and
//! `u` over `aux` auxiliary variables (free). The simplex constraints on `mu`
//! are implicit. Its projection onto `mu` is the hypothesis set; for
//! generator families the set is their convex hull.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lp::{solve, LpBuilder, LpStatus, Relation};
use crate::measures::{expectation, same_space, Pmf, SampleSpace};
use crate::scalar::{dot, le_tol, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint<T> {
    /// One coefficient per atom, then one per auxiliary variable.
    pub coefficients: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> LinearConstraint<T> {
    pub fn new(coefficients: Vec<T>, relation: Relation, rhs: T) -> Self {
        Self {
            coefficients,
            relation,
            rhs,
        }
    }

    /// Whether `point` (atoms followed by auxiliaries) satisfies the row within `tol`.
    pub fn holds_at(&self, point: &[T], tol: &T) -> bool {
        let lhs = dot(&self.coefficients, point);
        match self.relation {
            Relation::Le => le_tol(&lhs, &self.rhs, tol),
            Relation::Ge => le_tol(&self.rhs, &lhs, tol),
            Relation::Eq => le_tol(&lhs, &self.rhs, tol) && le_tol(&self.rhs, &lhs, tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation<T> {
    Generators(Vec<Pmf<T>>),
    Polytope {
        aux: usize,
        constraints: Vec<LinearConstraint<T>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisSet<T> {
    space: Arc<SampleSpace>,
    repr: Representation<T>,
}

/// Result of maximizing a linear functional over a hypothesis set.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportQuery<T> {
    pub value: T,
    pub maximizer: Pmf<T>,
}

/// Membership tolerance for float mode; zero for rationals.
pub(crate) fn membership_tol<T: Scalar>() -> T {
    T::feasibility_tol()
}

impl<T: Scalar> HypothesisSet<T> {
    pub fn generators(space: Arc<SampleSpace>, pmfs: Vec<Pmf<T>>) -> Result<Self> {
        if pmfs.is_empty() {
            return Err(Error::EmptyHypothesis);
        }
        for (index, p) in pmfs.iter().enumerate() {
            if !same_space(p.space(), &space) {
                return Err(Error::InvalidGenerator {
                    index,
                    reason: "generator lives on a different sample space".into(),
                });
            }
        }
        Ok(Self {
            space,
            repr: Representation::Generators(pmfs),
        })
    }

    pub fn polytope(space: Arc<SampleSpace>, aux: usize, constraints: Vec<LinearConstraint<T>>) -> Result<Self> {
        let width = space.len() + aux;
        for (index, c) in constraints.iter().enumerate() {
            if c.coefficients.len() != width {
                return Err(Error::InvalidConstraint {
                    index,
                    reason: format!(
                        "{} coefficients, expected {width} (atoms + auxiliaries)",
                        c.coefficients.len()
                    ),
                });
            }
        }
        Ok(Self {
            space,
            repr: Representation::Polytope { aux, constraints },
        })
    }

    /// The whole probability simplex.
    pub fn simplex(space: Arc<SampleSpace>) -> Self {
        Self {
            space,
            repr: Representation::Polytope {
                aux: 0,
                constraints: Vec::new(),
            },
        }
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn representation(&self) -> &Representation<T> {
        &self.repr
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    /// Ok iff the set is a nonempty subset of the simplex.
    pub fn validate(&self) -> Result<()> {
        match &self.repr {
            Representation::Generators(g) => {
                if g.is_empty() {
                    return Err(Error::EmptyHypothesis);
                }
                for (index, p) in g.iter().enumerate() {
                    if !same_space(p.space(), &self.space) {
                        return Err(Error::InvalidGenerator {
                            index,
                            reason: "generator lives on a different sample space".into(),
                        });
                    }
                }
                Ok(())
            }
            Representation::Polytope { .. } => {
                let mut b = LpBuilder::new();
                let mu = b.add_vars(self.dim(), T::zero(), Some(T::zero()), None);
                self.add_membership(&mut b, &mu);
                let (p, _) = b.build();
                match solve(&p)?.status {
                    LpStatus::Optimal => Ok(()),
                    LpStatus::Infeasible => Err(Error::EmptyHypothesis),
                    LpStatus::Unbounded => Err(Error::UnexpectedLpStatus("unbounded")),
                }
            }
        }
    }

    /// Appends rows forcing the columns `mu` (already bounded below by 0) to
    /// describe a member of this set.
    pub(crate) fn add_membership(&self, b: &mut LpBuilder<T>, mu: &[usize]) {
        debug_assert_eq!(mu.len(), self.dim());
        match &self.repr {
            Representation::Generators(g) => {
                let lambda = b.add_vars(g.len(), T::zero(), Some(T::zero()), None);
                b.add_row(lambda.iter().map(|&l| (l, T::one())).collect(), Relation::Eq, T::one());
                for (i, &m) in mu.iter().enumerate() {
                    let mut terms = vec![(m, T::one())];
                    for (k, &l) in lambda.iter().enumerate() {
                        let p = &g[k].mass()[i];
                        if !p.is_zero() {
                            terms.push((l, -p.clone()));
                        }
                    }
                    b.add_row(terms, Relation::Eq, T::zero());
                }
            }
            Representation::Polytope { aux, constraints } => {
                b.add_row(mu.iter().map(|&m| (m, T::one())).collect(), Relation::Eq, T::one());
                let u = b.add_vars(*aux, T::zero(), None, None);
                for c in constraints {
                    let terms = mu
                        .iter()
                        .chain(&u)
                        .zip(&c.coefficients)
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(&v, a)| (v, a.clone()))
                        .collect();
                    b.add_row(terms, c.relation, c.rhs.clone());
                }
            }
        }
    }

    /// `sup { f·mu : mu in H }` together with a maximizer.
    pub fn support_value(&self, f: &[T]) -> Result<SupportQuery<T>> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.len(),
            });
        }
        match &self.repr {
            Representation::Generators(g) => {
                let mut best: Option<(T, &Pmf<T>)> = None;
                for p in g {
                    let v = expectation(p, f)?;
                    if best.as_ref().is_none_or(|(b, _)| v > *b) {
                        best = Some((v, p));
                    }
                }
                let (value, p) = best.ok_or(Error::EmptyHypothesis)?;
                Ok(SupportQuery {
                    value,
                    maximizer: p.clone(),
                })
            }
            Representation::Polytope { .. } => {
                let mut b = LpBuilder::new();
                let mu: Vec<usize> = f.iter().map(|c| b.add_var(-c.clone(), Some(T::zero()), None)).collect();
                self.add_membership(&mut b, &mu);
                let (p, _) = b.build();
                let sol = solve(&p)?;
                match sol.status {
                    LpStatus::Optimal => {}
                    LpStatus::Infeasible => return Err(Error::EmptyHypothesis),
                    LpStatus::Unbounded => return Err(Error::UnexpectedLpStatus("unbounded")),
                }
                let mass = mu.iter().map(|&j| sol.primal[j].clone()).collect();
                let maximizer = Pmf::with_tolerance(self.space.clone(), mass, &solver_slack::<T>())?;
                let value = expectation(&maximizer, f)?;
                Ok(SupportQuery { value, maximizer })
            }
        }
    }

    /// Membership of `mu` in the (convex hull of the) set.
    pub fn contains(&self, mu: &Pmf<T>) -> Result<bool> {
        if mu.mass().len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: mu.mass().len(),
            });
        }
        if !same_space(mu.space(), &self.space) {
            return Err(Error::SpaceMismatch);
        }
        match &self.repr {
            Representation::Generators(g) if g.iter().any(|p| p == mu) => return Ok(true),
            Representation::Polytope { aux: 0, constraints } => {
                let tol = membership_tol::<T>();
                return Ok(constraints.iter().all(|c| c.holds_at(mu.mass(), &tol)));
            }
            _ => {}
        }
        let mut b = LpBuilder::new();
        let cols: Vec<usize> = mu
            .mass()
            .iter()
            .map(|m| b.add_var(T::zero(), Some(m.clone()), Some(m.clone())))
            .collect();
        self.add_membership(&mut b, &cols);
        let (p, _) = b.build();
        Ok(solve(&p)?.status == LpStatus::Optimal)
    }
}

/// Slack used when turning solver output back into a pmf.
pub(crate) fn solver_slack<T: Scalar>() -> T {
    T::feasibility_tol() * T::from_i64(1000)
}

fn embedding<T: Scalar>(space: &SampleSpace) -> Result<Vec<T>> {
    space.values_as::<T>().ok_or(Error::MissingValues)
}

/// Pmfs whose mean (under the atom embedding) is at most `m`.
pub fn mean_at_most<T: Scalar>(space: Arc<SampleSpace>, m: T) -> Result<HypothesisSet<T>> {
    let values = embedding::<T>(&space)?;
    HypothesisSet::polytope(space, 0, vec![LinearConstraint::new(values, Relation::Le, m)])
}

/// Pmfs whose mean is at least `m`.
pub fn mean_at_least<T: Scalar>(space: Arc<SampleSpace>, m: T) -> Result<HypothesisSet<T>> {
    let values = embedding::<T>(&space)?;
    HypothesisSet::polytope(space, 0, vec![LinearConstraint::new(values, Relation::Ge, m)])
}

/// Pmfs invariant under the atom involution given by `pairing`;
/// unpaired atoms are fixed points.
pub fn symmetric_null<T: Scalar>(space: Arc<SampleSpace>, pairing: &[(usize, usize)]) -> Result<HypothesisSet<T>> {
    let n = space.len();
    let mut used = vec![false; n];
    let mut constraints = Vec::with_capacity(pairing.len());
    for &(i, j) in pairing {
        if i >= n || j >= n {
            return Err(Error::InvalidPairing(format!(
                "pair ({i}, {j}) out of range for {n} atoms"
            )));
        }
        if i == j {
            return Err(Error::InvalidPairing(format!("atom {i} paired with itself")));
        }
        for k in [i, j] {
            if used[k] {
                return Err(Error::InvalidPairing(format!("atom {k} paired twice")));
            }
            used[k] = true;
        }
        let mut c = vec![T::zero(); n];
        c[i] = T::one();
        c[j] = -T::one();
        constraints.push(LinearConstraint::new(c, Relation::Eq, T::zero()));
    }
    HypothesisSet::polytope(space, 0, constraints)
}

/// Symmetric-null pairing for a space embedded in the reals: each atom with
/// value `x != 0` is paired with the atom of value `-x`, when present.
pub fn reflection_pairing(space: &SampleSpace) -> Result<Vec<(usize, usize)>> {
    let values = space.values().ok_or(Error::MissingValues)?;
    let mut pairs = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if *v > Rational::from_i64(0) {
            if let Some(j) = values.iter().position(|w| *w == -v.clone()) {
                pairs.push((j, i));
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Total-variation ball `{mu : tv(mu, center) <= radius}`, lifted with one
/// auxiliary `u_i >= |mu_i - c_i|` per atom.
pub fn tv_ball<T: Scalar>(center: &Pmf<T>, radius: T) -> Result<HypothesisSet<T>> {
    if radius < T::zero() || radius > T::one() {
        return Err(Error::RadiusOutOfRange(radius.to_string()));
    }
    let space = center.space().clone();
    let n = space.len();
    let mut constraints = Vec::with_capacity(2 * n + 1);
    for (i, c) in center.mass().iter().enumerate() {
        let mut up = vec![T::zero(); 2 * n];
        up[i] = T::one();
        up[n + i] = -T::one();
        constraints.push(LinearConstraint::new(up, Relation::Le, c.clone()));
        let mut down = vec![T::zero(); 2 * n];
        down[i] = -T::one();
        down[n + i] = -T::one();
        constraints.push(LinearConstraint::new(down, Relation::Le, -c.clone()));
    }
    let mut budget = vec![T::zero(); 2 * n];
    for u in budget.iter_mut().skip(n) {
        *u = T::one();
    }
    constraints.push(LinearConstraint::new(budget, Relation::Le, T::from_i64(2) * radius));
    HypothesisSet::polytope(space, n, constraints)
}
