//! E-variables and the effective null hypothesis.
//!
//! The polar of `P` is the set of nonnegative `z` with `E_mu[z] <= 1` for all
//! `mu` in `P`. The effective null is the set of nonnegative measures that
//! integrate every such `z` to at most one. On a finite space it equals the
//! solid hull of `conv(P)`: the measures dominated atomwise by a hull member.
//! Both characterizations are implemented as separate LPs so each can check
//! the other.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypothesis::{membership_tol, HypothesisSet};
use crate::lp::{solve, LpBuilder, LpStatus};
use crate::measures::{expectation, same_space, Measure, Pmf, SampleSpace, FLOAT_CONSTRUCTION_TOL};
use crate::minimax::{add_support_bound, minimax_risk_with, Affine, GapTolerance};
use crate::scalar::{eq_tol, le_tol, sum, Scalar};

/// A nonnegative measure of total mass at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct SubProbability<T> {
    space: Arc<SampleSpace>,
    mass: Vec<T>,
}

impl<T: Scalar> Measure<T> for SubProbability<T> {
    fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }
    fn mass(&self) -> &[T] {
        &self.mass
    }
}

fn construction_tol<T: Scalar>() -> T {
    match T::MODE {
        crate::Mode::Rational => T::zero(),
        crate::Mode::Float => T::from_f64(FLOAT_CONSTRUCTION_TOL).unwrap_or_else(T::zero),
    }
}

impl<T: Scalar> SubProbability<T> {
    pub fn new(space: Arc<SampleSpace>, mass: Vec<T>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: mass.len(),
            });
        }
        if let Some((i, m)) = mass.iter().enumerate().find(|(_, m)| **m < T::zero()) {
            return Err(Error::InvalidSubProbability(format!("negative mass {m} at atom {i}")));
        }
        let total = sum(&mass);
        if !le_tol(&total, &T::one(), &construction_tol()) {
            return Err(Error::InvalidSubProbability(format!("total mass {total} exceeds 1")));
        }
        Ok(Self { space, mass })
    }

    pub fn zero(space: Arc<SampleSpace>) -> Self {
        let n = space.len();
        Self {
            space,
            mass: vec![T::zero(); n],
        }
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn total_mass(&self) -> T {
        sum(&self.mass)
    }
}

impl<T: Scalar> From<&Pmf<T>> for SubProbability<T> {
    fn from(p: &Pmf<T>) -> Self {
        Self {
            space: p.space().clone(),
            mass: p.mass().to_vec(),
        }
    }
}

/// A nonnegative random variable on the atoms (a wealth multiplier).
#[derive(Debug, Clone, PartialEq)]
pub struct EVariable<T> {
    space: Arc<SampleSpace>,
    z: Vec<T>,
}

impl<T: Scalar> EVariable<T> {
    pub fn new(space: Arc<SampleSpace>, z: Vec<T>) -> Result<Self> {
        if z.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: z.len(),
            });
        }
        if let Some((i, v)) = z.iter().enumerate().find(|(_, v)| **v < T::zero()) {
            return Err(Error::InvalidEVariable(format!("negative value {v} at atom {i}")));
        }
        Ok(Self { space, z })
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.z
    }

    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.space.clone(),
            self.z.iter().map(|v| v.clone() * factor.clone()).collect(),
        )
    }
}

fn check_space<T: Scalar>(a: &Arc<SampleSpace>, h: &HypothesisSet<T>) -> Result<()> {
    if !same_space(a, h.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// `sup_P E[z] <= 1`.
pub fn is_e_variable<T: Scalar>(z: &EVariable<T>, p: &HypothesisSet<T>) -> Result<bool> {
    check_space(&z.space, p)?;
    let sup = p.support_value(&z.z)?.value;
    Ok(le_tol(&sup, &T::one(), &membership_tol()))
}

/// Domination route: some hull member `mu'` satisfies `mu' >= mu` atomwise.
pub fn in_effective_null_dom<T: Scalar>(mu: &SubProbability<T>, p: &HypothesisSet<T>) -> Result<bool> {
    check_space(&mu.space, p)?;
    let mut b = LpBuilder::new();
    let cols: Vec<usize> = mu
        .mass
        .iter()
        .map(|m| b.add_var(T::zero(), Some(m.clone()), None))
        .collect();
    p.add_membership(&mut b, &cols);
    let (lp, _) = b.build();
    Ok(solve(&lp)?.status == LpStatus::Optimal)
}

/// Outcome of the capped polar test.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarMembership<T> {
    pub member: bool,
    /// `max E_mu[z]` over e-variables bounded by `cap`, at the last cap tried.
    pub optimum: T,
    pub cap: T,
    /// Optima were still increasing (but at most one) at the final cap.
    pub exhausted: bool,
}

/// Caps `1, 2, 4, ..., 2^20`.
pub fn default_cap_schedule<T: Scalar>() -> Vec<T> {
    (0..=20).map(|k| T::from_i64(1i64 << k)).collect()
}

/// Maximizes `E_mu[z]` over e-variables for `p` with `0 <= z <= cap`.
pub fn capped_polar_value<T: Scalar>(mu: &SubProbability<T>, p: &HypothesisSet<T>, cap: &T) -> Result<T> {
    check_space(&mu.space, p)?;
    let mut b = LpBuilder::new();
    let z: Vec<usize> = mu
        .mass
        .iter()
        .map(|m| b.add_var(-m.clone(), Some(T::zero()), Some(cap.clone())))
        .collect();
    let g: Vec<Affine<T>> = z.iter().map(|&v| Affine::var(v)).collect();
    add_support_bound(&mut b, p, &g, &Affine::constant(T::one()));
    let (lp, _) = b.build();
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(-sol.objective),
        LpStatus::Infeasible => Err(Error::EmptyHypothesis),
        LpStatus::Unbounded => Err(Error::UnexpectedLpStatus("unbounded")),
    }
}

/// Bipolar route: `E_mu[z] <= 1` for every e-variable `z`, probed with an
/// increasing schedule of caps on `z`.
pub fn in_effective_null_polar<T: Scalar>(
    mu: &SubProbability<T>,
    p: &HypothesisSet<T>,
    cap_schedule: &[T],
) -> Result<PolarMembership<T>> {
    if cap_schedule.is_empty() {
        return Err(Error::InvalidCapSchedule("empty".into()));
    }
    if cap_schedule[0] <= T::zero() || cap_schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidCapSchedule(
            "caps must be positive and strictly increasing".into(),
        ));
    }
    let tol = membership_tol::<T>();
    let mut previous: Option<T> = None;
    let mut last = T::zero();
    for cap in cap_schedule {
        let v = capped_polar_value(mu, p, cap)?;
        if !le_tol(&v, &T::one(), &tol) {
            return Ok(PolarMembership {
                member: false,
                optimum: v,
                cap: cap.clone(),
                exhausted: false,
            });
        }
        // The capped optimum is concave and nondecreasing in the cap, so one
        // flat step means it is flat forever.
        if previous.as_ref().is_some_and(|pv| eq_tol(pv, &v, &tol)) {
            return Ok(PolarMembership {
                member: true,
                optimum: v,
                cap: cap.clone(),
                exhausted: false,
            });
        }
        previous = Some(v.clone());
        last = v;
    }
    Ok(PolarMembership {
        member: true,
        optimum: last,
        cap: cap_schedule[cap_schedule.len() - 1].clone(),
        exhausted: true,
    })
}

/// `(nu in conv(P), nu in P_eff)`; for probabilities the two always agree.
pub fn hull_membership_equiv<T: Scalar>(nu: &Pmf<T>, p: &HypothesisSet<T>) -> Result<(bool, bool)> {
    let in_hull = p.contains(nu)?;
    let in_peff = in_effective_null_dom(&SubProbability::from(nu), p)?;
    Ok((in_hull, in_peff))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoweredEVariable<T> {
    pub z: EVariable<T>,
    /// `inf_Q E[z]`; strictly greater than one.
    pub inf_power: T,
    /// `sup_P E[phi*]` of the underlying minimax test.
    pub level: T,
}

/// Bounded e-variable for `p` that is uniformly powered against `q`, built
/// from a minimax optimal test: `1 + phi` if the test has level zero,
/// `phi / level` otherwise.
pub fn make_powered_e_variable<T: Scalar>(p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<PoweredEVariable<T>> {
    make_powered_e_variable_with(p, q, GapTolerance::default())
}

pub fn make_powered_e_variable_with<T: Scalar>(
    p: &HypothesisSet<T>,
    q: &HypothesisSet<T>,
    tolerance: GapTolerance,
) -> Result<PoweredEVariable<T>> {
    let report = minimax_risk_with(p, q, tolerance)?;
    if report.tv <= tolerance.get::<T>() {
        return Err(Error::NoPoweredEVariable);
    }
    let phi = report.optimal_test.values();
    let level = report.worst_level.clone();
    let z: Vec<T> = if level <= membership_tol::<T>() {
        phi.iter().map(|v| T::one() + v.clone()).collect()
    } else {
        phi.iter().map(|v| v.clone() / level.clone()).collect()
    };
    let z = EVariable::new(p.space().clone(), z)?;
    let neg: Vec<T> = z.z.iter().map(|v| -v.clone()).collect();
    let inf_power = -q.support_value(&neg)?.value;
    Ok(PoweredEVariable { z, inf_power, level })
}

/// `E_nu[z]` for a single alternative.
pub fn e_value<T: Scalar>(z: &EVariable<T>, nu: &Pmf<T>) -> Result<T> {
    if !same_space(&z.space, nu.space()) {
        return Err(Error::SpaceMismatch);
    }
    expectation(nu, &z.z)
}
