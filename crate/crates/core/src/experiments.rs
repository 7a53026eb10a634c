//! Named, parameterized problem instances and refinement sweeps.
//!
//! | name               | size parameter | instance                                             |
//! |--------------------|----------------|------------------------------------------------------|
//! | `mean-separation`  | `points`       | mean <= m1 vs mean >= m2 on a grid in `[0,1]`        |
//! | `dirac-vs-uniform` | `n`            | all point masses vs the uniform law on `n` atoms     |
//! | `half-split`       | `k`            | point masses below 1/2 vs above, midpoint removed    |
//! | `escaping-mass`    | `N`            | truncation of a family whose mass escapes to infinity|
//! | `tv-balls`         | `r` (percent)  | two TV balls around fixed centers                    |
//! | `symmetric-null`   | `k`            | symmetric laws on `{-k..k}` vs a point mass at `k`   |
//!
//! Limits of truncation sequences are extrapolated from finite sizes and are
//! labeled as estimates.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypothesis::{mean_at_least, mean_at_most, reflection_pairing, symmetric_null, tv_ball, HypothesisSet};
use crate::measures::{tv_distance, Pmf, SampleSpace, TestFn};
use crate::minimax::{check_saddle_certificate_with, minimax_risk_with, GapTolerance};
use crate::scalar::{eq_tol, Rational, Scalar};

pub const EXAMPLES: [&str; 6] = [
    "mean-separation",
    "dirac-vs-uniform",
    "half-split",
    "escaping-mass",
    "tv-balls",
    "symmetric-null",
];

/// Tolerance for comparing an extrapolated limit with its expected value.
pub const LIMIT_TOLERANCE: f64 = 0.02;

pub type Params = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

impl Trend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::Constant => "constant",
            Trend::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<T> {
    pub size: usize,
    pub risk: T,
    pub tv: T,
    pub duality_gap: T,
    pub worst_level: T,
    pub worst_power: T,
    pub optimal_test: Vec<T>,
    pub closest_pair: (Vec<T>, Vec<T>),
    pub expected_risk: Option<T>,
    pub expected_tv: Option<T>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport<T> {
    pub name: String,
    pub parameters: Params,
    pub steps: Vec<StepRecord<T>>,
    /// Trend of the tv column across steps (strict monotonicity).
    pub tv_trend: Trend,
    pub limit_estimate: Option<T>,
    pub expected_limit: Option<T>,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Extra check run against the computed report.
type ExtraCheck<T> = Box<dyn Fn(&crate::minimax::RiskReport<T>) -> Result<bool> + Send + Sync>;

struct Instance<T> {
    p: HypothesisSet<T>,
    q: HypothesisSet<T>,
    expected_risk: Option<T>,
    expected_tv: Option<T>,
    extra: Option<ExtraCheck<T>>,
}

fn param<'a>(params: &'a Params, key: &str) -> Option<&'a str> {
    params.get(key).map(String::as_str)
}

fn get_usize(params: &Params, key: &str, default: usize) -> Result<usize> {
    match param(params, key) {
        None => Ok(default),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("`{key}` must be a nonnegative integer, got `{s}`"))),
    }
}

fn get_rational(params: &Params, key: &str, default: &str) -> Result<Rational> {
    let s = param(params, key).unwrap_or(default);
    Rational::parse(s).ok_or_else(|| Error::InvalidParams(format!("`{key}` must be a number, got `{s}`")))
}

fn get_list(params: &Params, key: &str, default: &str) -> Result<Vec<Rational>> {
    let s = param(params, key).unwrap_or(default);
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|x| {
            Rational::parse(x)
                .ok_or_else(|| Error::InvalidParams(format!("`{key}` must be a list of numbers, got `{s}`")))
        })
        .collect()
}

fn check_known(params: &Params, allowed: &[&str]) -> Result<()> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::InvalidParams(format!(
                "unknown parameter `{k}` (expected one of: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn conv<T: Scalar>(r: &Rational) -> T {
    T::from_rational(r)
}

/// Name of the parameter a sweep varies for the given example.
pub fn size_parameter(name: &str) -> Result<&'static str> {
    Ok(match name {
        "mean-separation" => "points",
        "dirac-vs-uniform" => "n",
        "half-split" => "k",
        "escaping-mass" => "N",
        "tv-balls" => "r",
        "symmetric-null" => "k",
        other => return Err(Error::UnknownExample(other.to_string())),
    })
}

fn build<T: Scalar>(name: &str, params: &Params) -> Result<(Instance<T>, usize)> {
    match name {
        "mean-separation" => mean_separation(params),
        "dirac-vs-uniform" => dirac_vs_uniform(params),
        "half-split" => half_split(params),
        "escaping-mass" => escaping_mass(params),
        "tv-balls" => tv_balls(params),
        "symmetric-null" => symmetric(params),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

fn mean_separation<T: Scalar>(params: &Params) -> Result<(Instance<T>, usize)> {
    check_known(params, &["grid", "points", "m1", "m2"])?;
    let grid = match (param(params, "grid"), param(params, "points")) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParams("give either `grid` or `points`, not both".into()));
        }
        (None, Some(_)) => {
            let k = get_usize(params, "points", 3)?;
            if k < 2 {
                return Err(Error::InvalidParams("`points` must be at least 2".into()));
            }
            (0..k).map(|i| Rational::ratio(i as i64, (k - 1) as i64)).collect()
        }
        _ => get_list(params, "grid", "0,0.5,1")?,
    };
    let m1 = get_rational(params, "m1", "0.3")?;
    let m2 = get_rational(params, "m2", "0.7")?;
    let zero = Rational::from_i64(0);
    let one = Rational::from_i64(1);
    if grid.iter().any(|v| *v < zero || *v > one) {
        return Err(Error::InvalidParams("grid values must lie in [0, 1]".into()));
    }
    if !(zero <= m1 && m1 < m2 && m2 <= one) {
        return Err(Error::InvalidParams("need 0 <= m1 < m2 <= 1".into()));
    }
    let size = grid.len();
    let space = SampleSpace::from_grid(&grid).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let p = mean_at_most(space.clone(), conv::<T>(&m1))?;
    let q = mean_at_least(space.clone(), conv::<T>(&m2))?;
    let ends = (space.index_of_value(&zero), space.index_of_value(&one));
    let (expected_risk, expected_tv, extra) = match ends {
        (Some(i0), Some(i1)) => {
            let bern = move |space: &Arc<SampleSpace>, m: &Rational| -> Result<Pmf<T>> {
                let mut mass = vec![T::zero(); space.len()];
                mass[i0] = conv::<T>(&(Rational::from_i64(1) - m.clone()));
                mass[i1] = conv::<T>(m);
                Pmf::new(space.clone(), mass)
            };
            let (pc, qc) = (p.clone(), q.clone());
            let sp = space.clone();
            let (a, b) = (m1.clone(), m2.clone());
            let extra: ExtraCheck<T> = Box::new(move |_r| {
                // The identity test with the two Bernoullis is a saddle point.
                let phi = TestFn::from_values(sp.clone())?;
                let v = check_saddle_certificate_with(
                    &phi,
                    &bern(&sp, &a)?,
                    &bern(&sp, &b)?,
                    &pc,
                    &qc,
                    GapTolerance::default(),
                )?;
                Ok(v.valid)
            });
            (
                Some(conv::<T>(&(m1.clone() + one.clone() - m2.clone()))),
                Some(conv::<T>(&(m2.clone() - m1.clone()))),
                Some(extra),
            )
        }
        _ => (None, None, None),
    };
    Ok((
        Instance {
            p,
            q,
            expected_risk,
            expected_tv,
            extra,
        },
        size,
    ))
}

fn dirac_vs_uniform<T: Scalar>(params: &Params) -> Result<(Instance<T>, usize)> {
    check_known(params, &["n"])?;
    let n = get_usize(params, "n", 10)?;
    if n < 1 {
        return Err(Error::InvalidParams("`n` must be at least 1".into()));
    }
    let space = SampleSpace::indexed(n)?;
    let diracs = (0..n)
        .map(|i| Pmf::dirac(space.clone(), i))
        .collect::<Result<Vec<_>>>()?;
    let p = HypothesisSet::generators(space.clone(), diracs)?;
    let q = HypothesisSet::generators(space.clone(), vec![Pmf::uniform(space)])?;
    Ok((
        Instance {
            p,
            q,
            expected_risk: Some(T::one()),
            expected_tv: Some(T::zero()),
            extra: None,
        },
        n,
    ))
}

fn half_split<T: Scalar>(params: &Params) -> Result<(Instance<T>, usize)> {
    check_known(params, &["k"])?;
    let k = get_usize(params, "k", 2)?;
    if k < 1 {
        return Err(Error::InvalidParams("`k` must be at least 1".into()));
    }
    let den = 2 * k as i64;
    let grid: Vec<Rational> = (0..=den)
        .filter(|&i| i != k as i64)
        .map(|i| Rational::ratio(i, den))
        .collect();
    let space = SampleSpace::from_grid(&grid)?;
    let half = Rational::ratio(1, 2);
    let (mut below, mut above) = (Vec::new(), Vec::new());
    for (i, v) in grid.iter().enumerate() {
        let d = Pmf::dirac(space.clone(), i)?;
        if *v < half {
            below.push(d);
        } else {
            above.push(d);
        }
    }
    let p = HypothesisSet::generators(space.clone(), below)?;
    let q = HypothesisSet::generators(space, above)?;
    let extra: ExtraCheck<T> = Box::new(|r| Ok(r.worst_level.is_zero() && r.worst_power.is_one()));
    Ok((
        Instance {
            p,
            q,
            expected_risk: Some(T::zero()),
            expected_tv: Some(T::one()),
            extra: Some(extra),
        },
        k,
    ))
}

/// Null generators `(1/2 - 1/n) delta_0 + (1/2 + 1/n) delta_n`, `n = 2..=N`,
/// on atoms `0..=N`, against `delta_0`.
pub fn escaping_mass_instance<T: Scalar>(n_max: usize) -> Result<(HypothesisSet<T>, HypothesisSet<T>)> {
    if n_max < 2 {
        return Err(Error::InvalidParams("`N` must be at least 2".into()));
    }
    let grid: Vec<Rational> = (0..=n_max).map(|i| Rational::from_i64(i as i64)).collect();
    let space = SampleSpace::from_grid(&grid)?;
    let mut gens = Vec::with_capacity(n_max - 1);
    for n in 2..=n_max {
        let mut mass = vec![T::zero(); n_max + 1];
        mass[0] = T::ratio(1, 2) - T::ratio(1, n as i64);
        mass[n] = T::ratio(1, 2) + T::ratio(1, n as i64);
        gens.push(Pmf::new(space.clone(), mass)?);
    }
    let p = HypothesisSet::generators(space.clone(), gens)?;
    let q = HypothesisSet::generators(space.clone(), vec![Pmf::dirac(space, 0)?])?;
    Ok((p, q))
}

fn escaping_mass<T: Scalar>(params: &Params) -> Result<(Instance<T>, usize)> {
    check_known(params, &["N"])?;
    let n = get_usize(params, "N", 8)?;
    let (p, q) = escaping_mass_instance(n)?;
    let tv = T::ratio(1, 2) + T::ratio(1, n as i64);
    Ok((
        Instance {
            p,
            q,
            expected_risk: Some(T::one() - tv.clone()),
            expected_tv: Some(tv),
            extra: None,
        },
        n,
    ))
}

fn tv_balls<T: Scalar>(params: &Params) -> Result<(Instance<T>, usize)> {
    check_known(params, &["c1", "c2", "r"])?;
    let c1 = get_list(params, "c1", "0.6,0.3,0.1")?;
    let c2 = get_list(params, "c2", "0.1,0.3,0.6")?;
    let r = get_rational(params, "r", "0.1")?;
    if c1.len() != c2.len() {
        return Err(Error::InvalidParams("centers must have equal length".into()));
    }
    let space = SampleSpace::indexed(c1.len())?;
    let to_pmf = |c: &[Rational]| -> Result<Pmf<T>> {
        Pmf::new(space.clone(), c.iter().map(conv::<T>).collect()).map_err(|e| Error::InvalidParams(e.to_string()))
    };
    let (a, b) = (to_pmf(&c1)?, to_pmf(&c2)?);
    let rt = conv::<T>(&r);
    let p = tv_ball(&a, rt.clone()).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let q = tv_ball(&b, rt.clone())?;
    // Moving each center toward the other along the segment stays inside
    // the simplex, so the balls are exactly d - 2r apart (or overlap).
    let d = tv_distance(&a, &b)?;
    let tv = T::max_of(d - T::from_i64(2) * rt, T::zero());
    let size = (r * Rational::from_i64(100)).round().to_integer();
    let size = usize::try_from(size).unwrap_or(0);
    Ok((
        Instance {
            p,
            q,
            expected_risk: Some(T::one() - tv.clone()),
            expected_tv: Some(tv),
            extra: None,
        },
        size,
    ))
}

fn symmetric<T: Scalar>(params: &Params) -> Result<(Instance<T>, usize)> {
    check_known(params, &["k"])?;
    let k = get_usize(params, "k", 2)?;
    if k < 1 {
        return Err(Error::InvalidParams("`k` must be at least 1".into()));
    }
    let grid: Vec<Rational> = (-(k as i64)..=k as i64).map(Rational::from_i64).collect();
    let space = SampleSpace::from_grid(&grid)?;
    let pairing = reflection_pairing(&space)?;
    let p = symmetric_null(space.clone(), &pairing)?;
    let q = HypothesisSet::generators(space.clone(), vec![Pmf::dirac(space, 2 * k)?])?;
    Ok((
        Instance {
            p,
            q,
            expected_risk: None,
            expected_tv: None,
            extra: None,
        },
        k,
    ))
}

fn run_step<T: Scalar>(name: &str, params: &Params, tolerance: GapTolerance) -> Result<StepRecord<T>> {
    let (inst, size) = build::<T>(name, params)?;
    let r = minimax_risk_with(&inst.p, &inst.q, tolerance)?;
    let tol = tolerance.get::<T>();
    let matches = |got: &T, want: &Option<T>| want.as_ref().is_none_or(|w| eq_tol(got, w, &tol));
    let in_unit = |x: &T| *x >= -tol.clone() && *x <= T::one() + tol.clone();
    let mut pass = matches(&r.risk, &inst.expected_risk)
        && matches(&r.tv, &inst.expected_tv)
        && r.duality_gap.abs() <= tol
        && in_unit(&r.risk)
        && in_unit(&r.tv);
    if let Some(extra) = &inst.extra {
        pass &= extra(&r)?;
    }
    Ok(StepRecord {
        size,
        optimal_test: r.optimal_test.values().to_vec(),
        closest_pair: (r.closest_pair.0.mass().to_vec(), r.closest_pair.1.mass().to_vec()),
        risk: r.risk,
        tv: r.tv,
        duality_gap: r.duality_gap,
        worst_level: r.worst_level,
        worst_power: r.worst_power,
        expected_risk: inst.expected_risk,
        expected_tv: inst.expected_tv,
        pass,
    })
}

fn trend<T: Scalar>(xs: &[T]) -> Trend {
    if xs.len() < 2 || xs.windows(2).all(|w| w[0] == w[1]) {
        return Trend::Constant;
    }
    if xs.windows(2).all(|w| w[1] > w[0]) {
        Trend::Increasing
    } else if xs.windows(2).all(|w| w[1] < w[0]) {
        Trend::Decreasing
    } else {
        Trend::Mixed
    }
}

/// Richardson extrapolation assuming `tv(N) = L + a/N`, from the last two steps.
fn extrapolate_inverse_size<T: Scalar>(steps: &[StepRecord<T>]) -> Option<T> {
    match steps {
        [] => None,
        [only] => Some(only.tv.clone()),
        [.., a, b] => {
            let (na, nb) = (T::from_i64(a.size as i64), T::from_i64(b.size as i64));
            if na == nb {
                return Some(b.tv.clone());
            }
            Some((nb.clone() * b.tv.clone() - na.clone() * a.tv.clone()) / (nb - na))
        }
    }
}

fn assemble<T: Scalar>(name: &str, parameters: Params, steps: Vec<StepRecord<T>>) -> ExperimentReport<T> {
    let tvs: Vec<T> = steps.iter().map(|s| s.tv.clone()).collect();
    let mut notes = Vec::new();
    let mut pass = steps.iter().all(|s| s.pass);
    let (limit_estimate, expected_limit) = if name == "escaping-mass" {
        let est = extrapolate_inverse_size(&steps);
        let want = T::ratio(1, 2);
        notes.push(
            "hull tv exceeds its limit 1/2 at every finite truncation; the limit is not attained \
             by any mixture, and the estimate extrapolates tv(N) = L + a/N"
                .to_string(),
        );
        if steps.len() >= 2 {
            let lim_tol = T::from_f64(LIMIT_TOLERANCE).unwrap_or_else(T::zero);
            if let Some(e) = &est {
                pass &= eq_tol(e, &want, &lim_tol);
            }
        }
        (est, Some(want))
    } else {
        (None, None)
    };
    if name == "symmetric-null" {
        notes.push("no reference value; only duality and range invariants are checked".to_string());
    }
    ExperimentReport {
        name: name.to_string(),
        parameters,
        tv_trend: trend(&tvs),
        steps,
        limit_estimate,
        expected_limit,
        pass,
        notes,
    }
}

/// Builds and solves one named instance.
pub fn run_example<T: Scalar>(name: &str, params: &Params) -> Result<ExperimentReport<T>> {
    run_example_with(name, params, GapTolerance::default())
}

pub fn run_example_with<T: Scalar>(
    name: &str,
    params: &Params,
    tolerance: GapTolerance,
) -> Result<ExperimentReport<T>> {
    size_parameter(name)?;
    let step = run_step::<T>(name, params, tolerance)?;
    Ok(assemble(name, params.clone(), vec![step]))
}

/// Solves the instance once per size; sizes run on separate threads.
pub fn refinement_sweep<T: Scalar>(name: &str, sizes: &[usize], base: &Params) -> Result<ExperimentReport<T>> {
    refinement_sweep_with(name, sizes, base, GapTolerance::default())
}

pub fn refinement_sweep_with<T: Scalar>(
    name: &str,
    sizes: &[usize],
    base: &Params,
    tolerance: GapTolerance,
) -> Result<ExperimentReport<T>> {
    let key = size_parameter(name)?;
    if sizes.is_empty() {
        return Err(Error::InvalidParams("at least one size is required".into()));
    }
    let per_size: Vec<Params> = sizes
        .iter()
        .map(|&n| {
            let mut p = base.clone();
            if key == "r" {
                p.insert(key.to_string(), Rational::ratio(n as i64, 100).to_string());
            } else {
                p.insert(key.to_string(), n.to_string());
            }
            if name == "mean-separation" {
                p.remove("grid");
            }
            p
        })
        .collect();
    let results: Vec<Result<StepRecord<T>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = per_size
            .iter()
            .map(|p| scope.spawn(move || run_step::<T>(name, p, tolerance)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::InvalidParams("sweep worker panicked".into())))
            })
            .collect()
    });
    let steps = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut parameters = base.clone();
    parameters.insert(
        "sizes".to_string(),
        sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
    );
    Ok(assemble(name, parameters, steps))
}
