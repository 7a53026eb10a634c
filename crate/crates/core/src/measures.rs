//! Finite sample spaces and the measure/test primitives.
//!
//! All vectors are indexed by atom in declaration order. Every value type
//! is immutable after construction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{dot, eq_tol, sum, Rational, Scalar};

/// Slack accepted on user-supplied pmfs and tests in float mode.
pub const FLOAT_CONSTRUCTION_TOL: f64 = 1e-12;

/// A labeled finite set of atoms, optionally embedded in the real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    atoms: Vec<String>,
    values: Option<Vec<Rational>>,
}

impl SampleSpace {
    pub fn new(atoms: Vec<String>) -> Result<Arc<Self>> {
        Self::build(atoms, None)
    }

    pub fn with_values(atoms: Vec<String>, values: Vec<Rational>) -> Result<Arc<Self>> {
        Self::build(atoms, Some(values))
    }

    /// Space whose atoms are the given numbers, labeled by their decimal form.
    pub fn from_grid(values: &[Rational]) -> Result<Arc<Self>> {
        let atoms = values.iter().map(format_label).collect();
        Self::build(atoms, Some(values.to_vec()))
    }

    /// Unembedded space with atoms `a0, a1, ...`.
    pub fn indexed(n: usize) -> Result<Arc<Self>> {
        Self::new((0..n).map(|i| format!("a{i}")).collect())
    }

    fn build(atoms: Vec<String>, values: Option<Vec<Rational>>) -> Result<Arc<Self>> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("at least one atom is required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate atom label `{a}`")));
            }
        }
        if let Some(v) = &values {
            if v.len() != atoms.len() {
                return Err(Error::DimensionMismatch {
                    expected: atoms.len(),
                    found: v.len(),
                });
            }
        }
        Ok(Arc::new(Self { atoms, values }))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn values(&self) -> Option<&[Rational]> {
        self.values.as_deref()
    }

    /// Embedding values converted to the working scalar.
    pub fn values_as<T: Scalar>(&self) -> Option<Vec<T>> {
        self.values.as_ref().map(|v| v.iter().map(T::from_rational).collect())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    pub fn index_of_value(&self, value: &Rational) -> Option<usize> {
        self.values.as_ref()?.iter().position(|v| v == value)
    }
}

fn format_label(v: &Rational) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    // Terminating decimals print as decimals, everything else as p/q.
    let mut den = v.denom().clone();
    let two = num_bigint::BigInt::from(2u8);
    let five = num_bigint::BigInt::from(5u8);
    let mut digits = 0usize;
    let zero = num_bigint::BigInt::from(0u8);
    while &den % &two == zero || &den % &five == zero {
        if &den % &two == zero {
            den /= &two;
        }
        if &den % &five == zero {
            den /= &five;
        }
        digits += 1;
    }
    if den != num_bigint::BigInt::from(1u8) || digits > 30 {
        return v.to_string();
    }
    let x = <f64 as Scalar>::from_rational(v);
    format!("{x}")
}

pub(crate) fn same_space(a: &Arc<SampleSpace>, b: &Arc<SampleSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Anything carrying a mass vector over a sample space.
pub trait Measure<T: Scalar> {
    fn space(&self) -> &Arc<SampleSpace>;
    fn mass(&self) -> &[T];
}

macro_rules! impl_measure {
    ($ty:ident) => {
        impl<T: Scalar> Measure<T> for $ty<T> {
            fn space(&self) -> &Arc<SampleSpace> {
                &self.space
            }
            fn mass(&self) -> &[T] {
                &self.mass
            }
        }
    };
}

/// A probability mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T> {
    space: Arc<SampleSpace>,
    mass: Vec<T>,
}

impl_measure!(Pmf);

impl<T: Scalar> Pmf<T> {
    /// Validates and, in float mode, renormalizes within `1e-12`.
    pub fn new(space: Arc<SampleSpace>, mass: Vec<T>) -> Result<Self> {
        let tol = T::from_f64(FLOAT_CONSTRUCTION_TOL).unwrap_or_else(T::zero);
        let tol = if T::MODE == crate::Mode::Rational {
            T::zero()
        } else {
            tol
        };
        Self::with_tolerance(space, mass, &tol)
    }

    /// Validates with an explicit slack; used for solver output.
    pub(crate) fn with_tolerance(space: Arc<SampleSpace>, mut mass: Vec<T>, tol: &T) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: mass.len(),
            });
        }
        let neg_tol = -tol.clone();
        for (i, m) in mass.iter_mut().enumerate() {
            if *m < neg_tol {
                return Err(Error::InvalidPmf(format!("negative mass {m} at atom {i}")));
            }
            if *m < T::zero() {
                *m = T::zero();
            }
        }
        let total = sum(&mass);
        if !eq_tol(&total, &T::one(), tol) {
            return Err(Error::InvalidPmf(format!("mass sums to {total}, not 1")));
        }
        if total != T::one() {
            for m in mass.iter_mut() {
                *m = m.clone() / total.clone();
            }
        }
        Ok(Self { space, mass })
    }

    pub fn dirac(space: Arc<SampleSpace>, atom: usize) -> Result<Self> {
        if atom >= space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: atom + 1,
            });
        }
        let mut mass = vec![T::zero(); space.len()];
        mass[atom] = T::one();
        Ok(Self { space, mass })
    }

    pub fn uniform(space: Arc<SampleSpace>) -> Self {
        let n = space.len();
        let w = T::ratio(1, n as i64);
        Self {
            space,
            mass: vec![w; n],
        }
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn into_mass(self) -> Vec<T> {
        self.mass
    }

    pub fn to_signed(&self) -> SignedMeasure<T> {
        SignedMeasure {
            space: self.space.clone(),
            mass: self.mass.clone(),
        }
    }
}

/// A finite signed measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure<T> {
    space: Arc<SampleSpace>,
    mass: Vec<T>,
}

impl_measure!(SignedMeasure);

impl<T: Scalar> SignedMeasure<T> {
    pub fn new(space: Arc<SampleSpace>, mass: Vec<T>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: mass.len(),
            });
        }
        Ok(Self { space, mass })
    }

    pub fn total_mass(&self) -> T {
        sum(&self.mass)
    }
}

/// A `[0,1]`-valued test; `phi[i]` is the rejection probability at atom `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFn<T> {
    space: Arc<SampleSpace>,
    phi: Vec<T>,
}

impl<T: Scalar> TestFn<T> {
    pub fn new(space: Arc<SampleSpace>, phi: Vec<T>) -> Result<Self> {
        let tol = if T::MODE == crate::Mode::Rational {
            T::zero()
        } else {
            T::from_f64(FLOAT_CONSTRUCTION_TOL).unwrap_or_else(T::zero)
        };
        Self::with_tolerance(space, phi, &tol)
    }

    pub(crate) fn with_tolerance(space: Arc<SampleSpace>, mut phi: Vec<T>, tol: &T) -> Result<Self> {
        if phi.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: phi.len(),
            });
        }
        let lo = -tol.clone();
        let hi = T::one() + tol.clone();
        for (i, v) in phi.iter_mut().enumerate() {
            if *v < lo || *v > hi {
                return Err(Error::InvalidTest(format!("value {v} at atom {i} outside [0, 1]")));
            }
            if *v < T::zero() {
                *v = T::zero();
            } else if *v > T::one() {
                *v = T::one();
            }
        }
        Ok(Self { space, phi })
    }

    pub fn constant(space: Arc<SampleSpace>, c: T) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![c; n])
    }

    /// Indicator of the given atoms.
    pub fn indicator(space: Arc<SampleSpace>, atoms: &[usize]) -> Result<Self> {
        let mut phi = vec![T::zero(); space.len()];
        for &a in atoms {
            if a >= phi.len() {
                return Err(Error::DimensionMismatch {
                    expected: phi.len(),
                    found: a + 1,
                });
            }
            phi[a] = T::one();
        }
        Ok(Self { space, phi })
    }

    /// The test whose values are the atoms' embedding values (which must lie in `[0,1]`).
    pub fn from_values(space: Arc<SampleSpace>) -> Result<Self> {
        let v = space.values_as::<T>().ok_or(Error::MissingValues)?;
        Self::new(space, v)
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn values(&self) -> &[T] {
        &self.phi
    }

    pub fn into_values(self) -> Vec<T> {
        self.phi
    }

    /// `1 - phi`.
    pub fn complement(&self) -> Self {
        Self {
            space: self.space.clone(),
            phi: self.phi.iter().map(|v| T::one() - v.clone()).collect(),
        }
    }
}

fn check_space<T: Scalar>(a: &dyn Measure<T>, b: &Arc<SampleSpace>) -> Result<()> {
    if !same_space(a.space(), b) {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// Convex combination `sum_k weights[k] * pmfs[k]`.
pub fn mix<T: Scalar>(weights: &[T], pmfs: &[Pmf<T>]) -> Result<Pmf<T>> {
    let first = pmfs.first().ok_or(Error::EmptyFamily)?;
    if weights.len() != pmfs.len() {
        return Err(Error::DimensionMismatch {
            expected: pmfs.len(),
            found: weights.len(),
        });
    }
    if weights.iter().any(|w| *w < T::zero()) {
        return Err(Error::InvalidWeights("negative weight".into()));
    }
    let total = sum(weights);
    let tol = if T::MODE == crate::Mode::Rational {
        T::zero()
    } else {
        T::from_f64(FLOAT_CONSTRUCTION_TOL).unwrap_or_else(T::zero)
    };
    if !eq_tol(&total, &T::one(), &tol) {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    let space = first.space.clone();
    let mut mass = vec![T::zero(); space.len()];
    for (w, p) in weights.iter().zip(pmfs) {
        check_space(p, &space)?;
        for (m, x) in mass.iter_mut().zip(&p.mass) {
            *m = m.clone() + w.clone() * x.clone();
        }
    }
    Pmf::new(space, mass)
}

/// `sum_i m_i f_i`.
pub fn expectation<T: Scalar, M: Measure<T> + ?Sized>(m: &M, f: &[T]) -> Result<T> {
    if f.len() != m.mass().len() {
        return Err(Error::DimensionMismatch {
            expected: m.mass().len(),
            found: f.len(),
        });
    }
    Ok(dot(m.mass(), f))
}

/// Expectation of a test, checking that both live on the same space.
pub fn expect_test<T: Scalar, M: Measure<T> + ?Sized>(m: &M, phi: &TestFn<T>) -> Result<T> {
    if !same_space(m.space(), phi.space()) {
        return Err(Error::SpaceMismatch);
    }
    expectation(m, phi.values())
}

/// Half the L1 distance.
pub fn tv_distance<T: Scalar>(mu: &Pmf<T>, nu: &Pmf<T>) -> Result<T> {
    check_pair(mu, nu)?;
    let l1 = mu
        .mass
        .iter()
        .zip(&nu.mass)
        .fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
    Ok(l1 / T::from_i64(2))
}

/// Indicator of the Hahn set `{i : mu_i > nu_i}`; ties get zero.
pub fn tv_witness_test<T: Scalar>(mu: &Pmf<T>, nu: &Pmf<T>) -> Result<TestFn<T>> {
    check_pair(mu, nu)?;
    let phi = mu
        .mass
        .iter()
        .zip(&nu.mass)
        .map(|(a, b)| if a > b { T::one() } else { T::zero() })
        .collect();
    Ok(TestFn {
        space: mu.space.clone(),
        phi,
    })
}

fn check_pair<T: Scalar>(mu: &Pmf<T>, nu: &Pmf<T>) -> Result<()> {
    if mu.mass.len() != nu.mass.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.mass.len(),
            found: nu.mass.len(),
        });
    }
    check_space(mu, &nu.space)
}

/// Worst-case type-I error plus worst-case type-II error over finite families.
pub fn risk_of_test<T: Scalar>(phi: &TestFn<T>, levels: &[Pmf<T>], powers: &[Pmf<T>]) -> Result<T> {
    if levels.is_empty() || powers.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let alt = phi.complement();
    let mut worst_level: Option<T> = None;
    for p in levels {
        let e = expect_test(p, phi)?;
        worst_level = Some(match worst_level {
            Some(w) => T::max_of(w, e),
            None => e,
        });
    }
    let mut worst_miss: Option<T> = None;
    for q in powers {
        let e = expect_test(q, &alt)?;
        worst_miss = Some(match worst_miss {
            Some(w) => T::max_of(w, e),
            None => e,
        });
    }
    Ok(worst_level.unwrap_or_else(T::zero) + worst_miss.unwrap_or_else(T::zero))
}
