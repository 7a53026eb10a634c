//! Minimax risk, optimal tests, TV-closest pairs and saddle certificates.
//!
//! The minimax problem `inf_phi sup_P E[phi] + sup_Q E[1 - phi]` is solved as
//! a single LP. Each inner supremum over a polytope is replaced by the
//! feasibility constraints of its LP dual (the robust counterpart); each
//! generator contributes one linear row. The TV-closest pair comes from a
//! second, independent LP, and the two optimal values must satisfy
//! `risk + tv = 1`.

use crate::error::{Error, Result};
use crate::hypothesis::{membership_tol, solver_slack, HypothesisSet, Representation};
use crate::lp::{solve, LpBuilder, LpStatus, Relation};
use crate::measures::{same_space, tv_distance, Pmf, TestFn};
use crate::scalar::{eq_tol, Scalar};

/// Float-mode tolerance on `risk + tv - 1`.
pub const FLOAT_GAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport<T> {
    pub risk: T,
    pub optimal_test: TestFn<T>,
    /// `sup_P E[phi*]`
    pub worst_level: T,
    /// `inf_Q E[phi*]`
    pub worst_power: T,
    /// TV distance between the hulls.
    pub tv: T,
    pub closest_pair: (Pmf<T>, Pmf<T>),
    /// `risk + tv - 1`
    pub duality_gap: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateVerdict<T> {
    pub valid: bool,
    pub risk_of_phi: T,
    pub tv_of_pair: T,
    pub membership_ok: (bool, bool),
    /// `risk_of_phi - (1 - tv_of_pair)`; nonnegative by weak duality.
    pub gap: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosestPair<T> {
    pub mu: Pmf<T>,
    pub nu: Pmf<T>,
    pub tv: T,
}

/// Tolerance on duality gaps: zero for rationals, configurable for floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapTolerance(pub f64);

impl Default for GapTolerance {
    fn default() -> Self {
        Self(FLOAT_GAP_TOLERANCE)
    }
}

impl GapTolerance {
    pub fn get<T: Scalar>(&self) -> T {
        match T::MODE {
            crate::Mode::Rational => T::zero(),
            crate::Mode::Float => T::from_f64(self.0).unwrap_or_else(T::zero),
        }
    }
}

/// `constant + sum coeff·x_var`.
#[derive(Debug, Clone)]
pub(crate) struct Affine<T> {
    pub constant: T,
    pub terms: Vec<(usize, T)>,
}

impl<T: Scalar> Affine<T> {
    pub fn var(v: usize) -> Self {
        Self {
            constant: T::zero(),
            terms: vec![(v, T::one())],
        }
    }

    pub fn constant(c: T) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    /// `1 - x_v`
    pub fn one_minus(v: usize) -> Self {
        Self {
            constant: T::one(),
            terms: vec![(v, -T::one())],
        }
    }
}

/// Adds rows equivalent to `sup { sum_i g_i mu_i : mu in H } <= bound`.
///
/// For a polytope `{mu >= 0, 1·mu = 1, G mu + H u (rel) h}` the supremum is
/// replaced by its dual: multipliers `y` (sign fixed by each row's relation)
/// and a free `w` on the mass row with
/// `G^T y + w >= g`, `H^T y = 0`, `h·y + w <= bound`.
pub(crate) fn add_support_bound<T: Scalar>(
    b: &mut LpBuilder<T>,
    h: &HypothesisSet<T>,
    g: &[Affine<T>],
    bound: &Affine<T>,
) {
    let n = h.dim();
    debug_assert_eq!(g.len(), n);
    match h.representation() {
        Representation::Generators(gens) => {
            for p in gens {
                // sum_i p_i g_i(x) - bound(x) <= 0
                let mut terms = Vec::new();
                let mut constant = -bound.constant.clone();
                for (pi, gi) in p.mass().iter().zip(g) {
                    if pi.is_zero() {
                        continue;
                    }
                    constant = constant + pi.clone() * gi.constant.clone();
                    for (v, a) in &gi.terms {
                        terms.push((*v, pi.clone() * a.clone()));
                    }
                }
                for (v, a) in &bound.terms {
                    terms.push((*v, -a.clone()));
                }
                b.add_row(terms, Relation::Le, -constant);
            }
        }
        Representation::Polytope { aux, constraints } => {
            let y: Vec<usize> = constraints
                .iter()
                .map(|c| match c.relation {
                    Relation::Le => b.add_var(T::zero(), Some(T::zero()), None),
                    Relation::Ge => b.add_var(T::zero(), None, Some(T::zero())),
                    Relation::Eq => b.add_var(T::zero(), None, None),
                })
                .collect();
            let w = b.add_var(T::zero(), None, None);
            for (i, gi) in g.iter().enumerate() {
                let mut terms: Vec<(usize, T)> = constraints
                    .iter()
                    .zip(&y)
                    .filter(|(c, _)| !c.coefficients[i].is_zero())
                    .map(|(c, &yv)| (yv, c.coefficients[i].clone()))
                    .collect();
                terms.push((w, T::one()));
                for (v, a) in &gi.terms {
                    terms.push((*v, -a.clone()));
                }
                b.add_row(terms, Relation::Ge, gi.constant.clone());
            }
            for j in 0..*aux {
                let terms: Vec<(usize, T)> = constraints
                    .iter()
                    .zip(&y)
                    .filter(|(c, _)| !c.coefficients[n + j].is_zero())
                    .map(|(c, &yv)| (yv, c.coefficients[n + j].clone()))
                    .collect();
                if !terms.is_empty() {
                    b.add_row(terms, Relation::Eq, T::zero());
                }
            }
            // h·y + w - bound(x) <= bound.constant
            let mut terms: Vec<(usize, T)> = constraints
                .iter()
                .zip(&y)
                .filter(|(c, _)| !c.rhs.is_zero())
                .map(|(c, &yv)| (yv, c.rhs.clone()))
                .collect();
            terms.push((w, T::one()));
            for (v, a) in &bound.terms {
                terms.push((*v, -a.clone()));
            }
            b.add_row(terms, Relation::Le, bound.constant.clone());
        }
    }
}

fn check_pair_spaces<T: Scalar>(p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<()> {
    if !same_space(p.space(), q.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

fn expect_optimal(status: LpStatus) -> Result<()> {
    match status {
        LpStatus::Optimal => Ok(()),
        LpStatus::Infeasible => Err(Error::EmptyHypothesis),
        LpStatus::Unbounded => Err(Error::UnexpectedLpStatus("unbounded")),
    }
}

/// Solves the robust-counterpart LP; returns an optimal test and the LP value.
pub fn optimal_test<T: Scalar>(p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<(TestFn<T>, T)> {
    check_pair_spaces(p, q)?;
    let n = p.dim();
    let mut b = LpBuilder::new();
    let phi = b.add_vars(n, T::zero(), Some(T::zero()), Some(T::one()));
    let t = b.add_var(T::one(), None, None);
    let s = b.add_var(T::one(), None, None);
    let level: Vec<Affine<T>> = phi.iter().map(|&v| Affine::var(v)).collect();
    let miss: Vec<Affine<T>> = phi.iter().map(|&v| Affine::one_minus(v)).collect();
    add_support_bound(&mut b, p, &level, &Affine::var(t));
    add_support_bound(&mut b, q, &miss, &Affine::var(s));
    let (lp, _) = b.build();
    let sol = solve(&lp)?;
    expect_optimal(sol.status)?;
    let values = phi.iter().map(|&j| sol.primal[j].clone()).collect();
    let test = TestFn::with_tolerance(p.space().clone(), values, &solver_slack::<T>())?;
    Ok((test, sol.objective))
}

/// TV-closest pair between the hulls of `p` and `q`.
pub fn closest_pair<T: Scalar>(p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<ClosestPair<T>> {
    check_pair_spaces(p, q)?;
    let n = p.dim();
    let half = T::ratio(1, 2);
    let mut b = LpBuilder::new();
    let mu = b.add_vars(n, T::zero(), Some(T::zero()), None);
    let nu = b.add_vars(n, T::zero(), Some(T::zero()), None);
    let e = b.add_vars(n, half, Some(T::zero()), None);
    for i in 0..n {
        b.add_row(
            vec![(e[i], T::one()), (mu[i], -T::one()), (nu[i], T::one())],
            Relation::Ge,
            T::zero(),
        );
        b.add_row(
            vec![(e[i], T::one()), (mu[i], T::one()), (nu[i], -T::one())],
            Relation::Ge,
            T::zero(),
        );
    }
    p.add_membership(&mut b, &mu);
    q.add_membership(&mut b, &nu);
    let (lp, _) = b.build();
    let sol = solve(&lp)?;
    expect_optimal(sol.status)?;
    let slack = solver_slack::<T>();
    let grab = |cols: &[usize]| cols.iter().map(|&j| sol.primal[j].clone()).collect::<Vec<_>>();
    let mu = Pmf::with_tolerance(p.space().clone(), grab(&mu), &slack)?;
    let nu = Pmf::with_tolerance(q.space().clone(), grab(&nu), &slack)?;
    let tv = tv_distance(&mu, &nu)?;
    if !eq_tol(&tv, &sol.objective, &slack) {
        return Err(Error::DualityGapExceeded {
            gap: (tv - sol.objective).to_string(),
            tolerance: slack.to_string(),
        });
    }
    Ok(ClosestPair { mu, nu, tv })
}

/// `sup_P E[phi]`.
pub fn worst_case_level<T: Scalar>(phi: &TestFn<T>, p: &HypothesisSet<T>) -> Result<T> {
    if !same_space(phi.space(), p.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(p.support_value(phi.values())?.value)
}

/// `inf_Q E[phi] = 1 - sup_Q E[1 - phi]`.
pub fn worst_case_power<T: Scalar>(phi: &TestFn<T>, q: &HypothesisSet<T>) -> Result<T> {
    if !same_space(phi.space(), q.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(T::one() - q.support_value(phi.complement().values())?.value)
}

/// Worst-case risk of `phi` against the hulls of `p` and `q`.
pub fn risk_against<T: Scalar>(phi: &TestFn<T>, p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<T> {
    Ok(worst_case_level(phi, p)? + T::one() - worst_case_power(phi, q)?)
}

pub fn minimax_risk<T: Scalar>(p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<RiskReport<T>> {
    minimax_risk_with(p, q, GapTolerance::default())
}

/// [`minimax_risk`] with an explicit float gap tolerance.
pub fn minimax_risk_with<T: Scalar>(
    p: &HypothesisSet<T>,
    q: &HypothesisSet<T>,
    tolerance: GapTolerance,
) -> Result<RiskReport<T>> {
    let tol = tolerance.get::<T>();
    let (phi, lp_value) = optimal_test(p, q)?;
    let worst_level = worst_case_level(&phi, p)?;
    let worst_power = worst_case_power(&phi, q)?;
    let risk = worst_level.clone() + T::one() - worst_power.clone();
    if !eq_tol(&risk, &lp_value, &tol) {
        return Err(Error::DualityGapExceeded {
            gap: (risk - lp_value).to_string(),
            tolerance: tol.to_string(),
        });
    }
    let pair = closest_pair(p, q)?;
    let duality_gap = risk.clone() + pair.tv.clone() - T::one();
    if duality_gap.abs() > tol {
        return Err(Error::DualityGapExceeded {
            gap: duality_gap.to_string(),
            tolerance: tol.to_string(),
        });
    }
    Ok(RiskReport {
        risk,
        optimal_test: phi,
        worst_level,
        worst_power,
        tv: pair.tv,
        closest_pair: (pair.mu, pair.nu),
        duality_gap,
    })
}

/// `minimax risk + hull TV - 1`, from two independent LPs, without asserting it vanishes.
pub fn verify_strong_duality<T: Scalar>(p: &HypothesisSet<T>, q: &HypothesisSet<T>) -> Result<T> {
    let (phi, _) = optimal_test(p, q)?;
    let risk = risk_against(&phi, p, q)?;
    let tv = closest_pair(p, q)?.tv;
    Ok(risk + tv - T::one())
}

/// Checks a claimed saddle point `(phi, mu, nu)`. Invalid certificates are
/// reported through `valid = false`, never as errors.
pub fn check_saddle_certificate<T: Scalar>(
    phi: &TestFn<T>,
    mu: &Pmf<T>,
    nu: &Pmf<T>,
    p: &HypothesisSet<T>,
    q: &HypothesisSet<T>,
) -> Result<CertificateVerdict<T>> {
    check_saddle_certificate_with(phi, mu, nu, p, q, GapTolerance::default())
}

pub fn check_saddle_certificate_with<T: Scalar>(
    phi: &TestFn<T>,
    mu: &Pmf<T>,
    nu: &Pmf<T>,
    p: &HypothesisSet<T>,
    q: &HypothesisSet<T>,
    tolerance: GapTolerance,
) -> Result<CertificateVerdict<T>> {
    check_pair_spaces(p, q)?;
    let risk_of_phi = risk_against(phi, p, q)?;
    let tv_of_pair = tv_distance(mu, nu)?;
    let membership_ok = (p.contains(mu)?, q.contains(nu)?);
    let gap = risk_of_phi.clone() - (T::one() - tv_of_pair.clone());
    let tol = T::max_of(tolerance.get::<T>(), membership_tol::<T>());
    let valid = membership_ok.0 && membership_ok.1 && gap.abs() <= tol;
    Ok(CertificateVerdict {
        valid,
        risk_of_phi,
        tv_of_pair,
        membership_ok,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::{mean_at_least, mean_at_most};
    use crate::measures::SampleSpace;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn mean_instance() -> (HypothesisSet<Q>, HypothesisSet<Q>) {
        let s = SampleSpace::from_grid(&[q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        (
            mean_at_most(s.clone(), q(3, 10)).unwrap(),
            mean_at_least(s, q(7, 10)).unwrap(),
        )
    }

    #[test]
    fn mean_separation_risk() {
        let (p, qq) = mean_instance();
        let r = minimax_risk(&p, &qq).unwrap();
        assert_eq!(r.risk, q(3, 5));
        assert_eq!(r.tv, q(2, 5));
        assert_eq!(r.duality_gap, q(0, 1));
        assert_eq!(r.risk, r.worst_level.clone() + q(1, 1) - r.worst_power.clone());
        assert!(p.contains(&r.closest_pair.0).unwrap());
        assert!(qq.contains(&r.closest_pair.1).unwrap());

        let phi = TestFn::from_values(p.space().clone()).unwrap();
        assert_eq!(risk_against(&phi, &p, &qq).unwrap(), q(3, 5));
        assert_eq!(worst_case_level(&phi, &p).unwrap(), q(3, 10));
    }

    #[test]
    fn dirac_vs_uniform_risk_one() {
        let s = SampleSpace::indexed(4).unwrap();
        let diracs = (0..4).map(|i| Pmf::dirac(s.clone(), i).unwrap()).collect();
        let p = HypothesisSet::<Q>::generators(s.clone(), diracs).unwrap();
        let u = HypothesisSet::generators(s.clone(), vec![Pmf::uniform(s)]).unwrap();
        let r = minimax_risk(&p, &u).unwrap();
        assert_eq!(r.risk, q(1, 1));
        assert_eq!(r.tv, q(0, 1));
        assert_eq!(verify_strong_duality(&p, &u).unwrap(), q(0, 1));
    }

    #[test]
    fn half_split_perfect_test() {
        let s = SampleSpace::from_grid(&[q(0, 1), q(1, 4), q(3, 4), q(1, 1)]).unwrap();
        let d = |i| Pmf::<Q>::dirac(s.clone(), i).unwrap();
        let p = HypothesisSet::generators(s.clone(), vec![d(0), d(1)]).unwrap();
        let qq = HypothesisSet::generators(s.clone(), vec![d(2), d(3)]).unwrap();
        let r = minimax_risk(&p, &qq).unwrap();
        assert_eq!(r.risk, q(0, 1));
        assert_eq!(r.worst_level, q(0, 1));
        assert_eq!(r.worst_power, q(1, 1));
        assert_eq!(r.optimal_test, TestFn::indicator(s, &[2, 3]).unwrap());
    }

    #[test]
    fn closest_pair_examples() {
        let s = SampleSpace::from_grid(&[q(0, 1), q(1, 1)]).unwrap();
        let p = mean_at_most(s.clone(), q(3, 10)).unwrap();
        let qq = mean_at_least(s.clone(), q(7, 10)).unwrap();
        let c = closest_pair(&p, &qq).unwrap();
        assert_eq!(c.tv, q(2, 5));
        assert_eq!(c.mu.mass(), &[q(7, 10), q(3, 10)]);
        assert_eq!(c.nu.mass(), &[q(3, 10), q(7, 10)]);
        assert_eq!(closest_pair(&p, &p).unwrap().tv, q(0, 1));
    }

    #[test]
    fn certificate_examples() {
        let (p, qq) = mean_instance();
        let s = p.space().clone();
        let phi = TestFn::from_values(s.clone()).unwrap();
        let bern = |m: Q| Pmf::new(s.clone(), vec![q(1, 1) - m.clone(), q(0, 1), m]).unwrap();
        let v = check_saddle_certificate(&phi, &bern(q(3, 10)), &bern(q(7, 10)), &p, &qq).unwrap();
        assert!(v.valid);
        assert_eq!(v.gap, q(0, 1));

        let v = check_saddle_certificate(&phi, &bern(q(1, 5)), &bern(q(7, 10)), &p, &qq).unwrap();
        assert!(!v.valid);
        assert_eq!(v.membership_ok, (true, true));
        assert_eq!(v.tv_of_pair, q(1, 2));
        assert_eq!(v.gap, q(1, 10));

        let zero = TestFn::constant(s.clone(), q(0, 1)).unwrap();
        let v = check_saddle_certificate(&zero, &bern(q(3, 10)), &bern(q(7, 10)), &p, &qq).unwrap();
        assert!(!v.valid);
        assert_eq!(v.risk_of_phi, q(1, 1));

        // Pair outside the hypotheses.
        let v = check_saddle_certificate(&phi, &bern(q(1, 2)), &bern(q(7, 10)), &p, &qq).unwrap();
        assert_eq!(v.membership_ok, (false, true));
        assert!(!v.valid);
    }

    #[test]
    fn level_and_power_examples() {
        let s = SampleSpace::indexed(2).unwrap();
        let da = Pmf::<Q>::dirac(s.clone(), 0).unwrap();
        let h = HypothesisSet::generators(s.clone(), vec![da]).unwrap();
        let one = TestFn::constant(s.clone(), q(1, 1)).unwrap();
        assert_eq!(worst_case_level(&one, &h).unwrap(), q(1, 1));
        assert_eq!(worst_case_power(&one, &h).unwrap(), q(1, 1));
        let ind = TestFn::indicator(s, &[0]).unwrap();
        assert_eq!(worst_case_power(&ind, &h).unwrap(), q(1, 1));
    }

    #[test]
    fn float_mode_mean_separation() {
        let s = SampleSpace::from_grid(&[q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        let p = mean_at_most(s.clone(), 0.3).unwrap();
        let qq = mean_at_least(s, 0.7).unwrap();
        let r = minimax_risk(&p, &qq).unwrap();
        assert!((r.risk - 0.6).abs() < 1e-9);
        assert!(r.duality_gap.abs() <= FLOAT_GAP_TOLERANCE);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let a = SampleSpace::indexed(2).unwrap();
        let b = SampleSpace::indexed(3).unwrap();
        let p = HypothesisSet::<Q>::simplex(a);
        let qq = HypothesisSet::<Q>::simplex(b);
        assert_eq!(minimax_risk(&p, &qq).unwrap_err(), Error::SpaceMismatch);
    }
}
