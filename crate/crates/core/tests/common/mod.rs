//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use mmtv_core::lp::{LpProblem, Relation};
use mmtv_core::measures::{Pmf, SampleSpace, TestFn};
use mmtv_core::{HypothesisSet, LinearConstraint, Rational, Scalar};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Q = Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

pub fn space(n: usize) -> Arc<SampleSpace> {
    SampleSpace::indexed(n).unwrap()
}

/// Random pmf with small integer weights; roughly a third of the atoms are
/// zeroed so that supports vary.
pub fn random_pmf(rng: &mut impl Rng, space: &Arc<SampleSpace>) -> Pmf<Q> {
    let n = space.len();
    loop {
        let w: Vec<i64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.3) {
                    0
                } else {
                    rng.random_range(1..=9)
                }
            })
            .collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return Pmf::new(space.clone(), w.iter().map(|&x| q(x, total)).collect()).unwrap();
        }
    }
}

pub fn random_family(rng: &mut impl Rng, space: &Arc<SampleSpace>, k: usize) -> Vec<Pmf<Q>> {
    (0..k).map(|_| random_pmf(rng, space)).collect()
}

pub fn random_weights(rng: &mut impl Rng, k: usize) -> Vec<Q> {
    let w: Vec<i64> = (0..k).map(|_| rng.random_range(0..=6)).collect();
    let total: i64 = w.iter().sum();
    if total == 0 {
        let mut e = vec![Q::zero(); k];
        e[0] = Q::one();
        return e;
    }
    w.iter().map(|&x| q(x, total)).collect()
}

/// Test function with values on the grid `{0, 1/10, ..., 1}`.
pub fn random_test(rng: &mut impl Rng, space: &Arc<SampleSpace>) -> TestFn<Q> {
    let v = (0..space.len()).map(|_| q(rng.random_range(0..=10), 10)).collect();
    TestFn::new(space.clone(), v).unwrap()
}

pub fn gens(space: &Arc<SampleSpace>, family: &[Pmf<Q>]) -> HypothesisSet<Q> {
    HypothesisSet::generators(space.clone(), family.to_vec()).unwrap()
}

pub fn to_float_pmf(p: &Pmf<Q>) -> Pmf<f64> {
    Pmf::new(p.space().clone(), p.mass().iter().map(Scalar::to_f64).collect()).unwrap()
}

pub fn to_float_set(space: &Arc<SampleSpace>, family: &[Pmf<Q>]) -> HypothesisSet<f64> {
    HypothesisSet::generators(space.clone(), family.iter().map(to_float_pmf).collect()).unwrap()
}

/// Random LP whose variables all have finite bounds.
pub fn random_box_lp(rng: &mut impl Rng) -> LpProblem<Q> {
    let n = rng.random_range(1..=4);
    let coef = |rng: &mut dyn rand::RngCore| q(rng.random_range(-3..=3), 1);
    let mut p = LpProblem::new((0..n).map(|_| coef(rng)).collect());
    for j in 0..n {
        let lo = rng.random_range(-2..=1);
        let hi = lo + rng.random_range(0..=4);
        p.set_bounds(j, Some(q(lo, 1)), Some(q(hi, 2).max(q(lo, 1))));
    }
    for _ in 0..rng.random_range(0..=2) {
        let row = (0..n).map(|_| coef(rng)).collect();
        p.add_eq(row, q(rng.random_range(-3..=3), 2));
    }
    for _ in 0..rng.random_range(0..=3) {
        let row = (0..n).map(|_| coef(rng)).collect();
        p.add_ub(row, q(rng.random_range(-2..=6), 2));
    }
    p
}

/// Solves a square system; `None` if singular.
pub fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone() / pivot_row[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *v -= f.clone() * pv.clone();
                }
                let d = f * b[col].clone();
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// One hyperplane-bounded constraint `row · x rel rhs`.
#[derive(Clone, Debug)]
pub struct Halfspace {
    pub row: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

impl Halfspace {
    pub fn holds(&self, x: &[Q]) -> bool {
        let lhs: Q = self.row.iter().zip(x).map(|(a, b)| a.clone() * b.clone()).sum();
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// All vertices of `{x in R^dim : every halfspace holds}`, by trying every
/// `dim`-subset of constraints as the active set.
pub fn vertices(dim: usize, constraints: &[Halfspace]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    combinations(constraints.len(), dim, &mut |idx| {
        let a = idx.iter().map(|&i| constraints[i].row.clone()).collect();
        let b = idx.iter().map(|&i| constraints[i].rhs.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if constraints.iter().all(|c| c.holds(&x)) && !out.contains(&x) {
                out.push(x);
            }
        }
    });
    out
}

/// Minimum of a box-bounded LP by vertex enumeration; `None` if infeasible.
pub fn brute_force_lp(p: &LpProblem<Q>) -> Option<Q> {
    let n = p.num_vars();
    let mut cons = Vec::new();
    for (row, rhs) in p.a_eq.iter().zip(&p.b_eq) {
        cons.push(Halfspace {
            row: row.clone(),
            rel: Relation::Eq,
            rhs: rhs.clone(),
        });
    }
    for (row, rhs) in p.a_ub.iter().zip(&p.b_ub) {
        cons.push(Halfspace {
            row: row.clone(),
            rel: Relation::Le,
            rhs: rhs.clone(),
        });
    }
    for j in 0..n {
        let mut e = vec![Q::zero(); n];
        e[j] = Q::one();
        let lo = p.lower[j].clone().expect("box-bounded LP");
        let hi = p.upper[j].clone().expect("box-bounded LP");
        cons.push(Halfspace {
            row: e.clone(),
            rel: Relation::Ge,
            rhs: lo,
        });
        cons.push(Halfspace {
            row: e,
            rel: Relation::Le,
            rhs: hi,
        });
    }
    vertices(n, &cons).iter().map(|x| p.objective_at(x)).min()
}

/// Vertices of an aux-free polytope hypothesis on the simplex.
pub fn polytope_vertices(n: usize, constraints: &[LinearConstraint<Q>]) -> Vec<Vec<Q>> {
    let mut cons = vec![Halfspace {
        row: vec![Q::one(); n],
        rel: Relation::Eq,
        rhs: Q::one(),
    }];
    for j in 0..n {
        let mut e = vec![Q::zero(); n];
        e[j] = Q::one();
        cons.push(Halfspace {
            row: e,
            rel: Relation::Ge,
            rhs: Q::zero(),
        });
    }
    for c in constraints {
        cons.push(Halfspace {
            row: c.coefficients.clone(),
            rel: c.relation,
            rhs: c.rhs.clone(),
        });
    }
    vertices(n, &cons)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).sum()
}

pub fn abs(x: &Q) -> Q {
    Signed::abs(x)
}
