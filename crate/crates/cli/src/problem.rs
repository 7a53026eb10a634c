//! Problem and certificate files.

use std::collections::BTreeMap;
use std::sync::Arc;

use mmtv_core::hypothesis::{mean_at_least, mean_at_most, symmetric_null, tv_ball, HypothesisSet, LinearConstraint};
use mmtv_core::lp::Relation;
use mmtv_core::measures::{Pmf, SampleSpace, TestFn};
use mmtv_core::{Error as CoreError, Num, Rational, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub atoms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Num>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub coeffs: Vec<Num>,
    pub rel: Relation,
    pub rhs: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TvBallSpec {
    pub center: Vec<Num>,
    pub radius: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HypothesisSpec {
    Generators {
        generators: Vec<Vec<Num>>,
    },
    Polytope {
        constraints: Vec<ConstraintSpec>,
        #[serde(default)]
        aux: usize,
    },
    MeanAtMost {
        mean_at_most: Num,
    },
    MeanAtLeast {
        mean_at_least: Num,
    },
    TvBall {
        tv_ball: TvBallSpec,
    },
    Symmetric {
        symmetric: Vec<[usize; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub space: SpaceSpec,
    pub hypotheses: BTreeMap<String, HypothesisSpec>,
    pub null: String,
    pub alternative: String,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

/// `{phi, mu, nu}` for the `certify` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub phi: Vec<Num>,
    pub mu: Vec<Num>,
    pub nu: Vec<Num>,
}

/// `{mu}` for the `effnull` command; mass may be below one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub mu: Vec<Num>,
}

/// Deserializes JSON, reporting schema violations with their JSON path.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            CliError::Syntax(inner.to_string())
        } else {
            CliError::Schema {
                path,
                message: inner.to_string(),
            }
        }
    })
}

/// Parses and fully validates a problem file in the given scalar mode.
pub fn parse_problem<T: Scalar>(text: &str) -> Result<(ProblemFile, Problem<T>), CliError> {
    let file: ProblemFile = from_json(text)?;
    let problem = Problem::build(&file)?;
    Ok((file, problem))
}

/// A problem file lowered onto core types.
#[derive(Debug, Clone)]
pub struct Problem<T> {
    pub space: Arc<SampleSpace>,
    pub hypotheses: BTreeMap<String, HypothesisSet<T>>,
    pub null: String,
    pub alternative: String,
}

fn num<T: Scalar>(n: &Num, path: &str) -> Result<T, CliError> {
    T::from_num(n).ok_or_else(|| CliError::Schema {
        path: path.to_string(),
        message: format!("`{n}` is not a finite number"),
    })
}

fn nums<T: Scalar>(v: &[Num], path: &str) -> Result<Vec<T>, CliError> {
    v.iter()
        .enumerate()
        .map(|(i, n)| num(n, &format!("{path}[{i}]")))
        .collect()
}

fn validation(path: impl Into<String>, e: CoreError) -> CliError {
    match e {
        CoreError::EmptyHypothesis => CliError::Empty { path: path.into() },
        e => CliError::Validation {
            path: path.into(),
            message: e.to_string(),
        },
    }
}

fn expect_len(path: &str, want: usize, got: usize) -> Result<(), CliError> {
    if want != got {
        return Err(CliError::Schema {
            path: path.to_string(),
            message: format!("expected {want} entries, found {got}"),
        });
    }
    Ok(())
}

impl<T: Scalar> Problem<T> {
    pub fn build(file: &ProblemFile) -> Result<Self, CliError> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema {
                path: "schema_version".into(),
                message: format!("unsupported version {}", file.schema_version),
            });
        }
        let space = match &file.space.values {
            None => SampleSpace::new(file.space.atoms.clone()),
            Some(v) => {
                let values: Vec<Rational> = nums(v, "space.values")?;
                SampleSpace::with_values(file.space.atoms.clone(), values)
            }
        }
        .map_err(|e| validation("space", e))?;

        for (key, name) in [("null", &file.null), ("alternative", &file.alternative)] {
            if !file.hypotheses.contains_key(name) {
                return Err(CliError::Schema {
                    path: key.into(),
                    message: format!("no hypothesis named `{name}`"),
                });
            }
        }

        let mut hypotheses = BTreeMap::new();
        for (name, spec) in &file.hypotheses {
            let path = format!("hypotheses.{name}");
            let h = lower(&space, spec, &path)?;
            h.validate().map_err(|e| validation(path.clone(), e))?;
            hypotheses.insert(name.clone(), h);
        }
        Ok(Self {
            space,
            hypotheses,
            null: file.null.clone(),
            alternative: file.alternative.clone(),
        })
    }

    pub fn null_set(&self) -> &HypothesisSet<T> {
        &self.hypotheses[&self.null]
    }

    pub fn alternative_set(&self) -> &HypothesisSet<T> {
        &self.hypotheses[&self.alternative]
    }

    pub fn pmf(&self, v: &[Num], path: &str) -> Result<Pmf<T>, CliError> {
        expect_len(path, self.space.len(), v.len())?;
        Pmf::new(self.space.clone(), nums(v, path)?).map_err(|e| validation(path, e))
    }

    pub fn test_fn(&self, v: &[Num], path: &str) -> Result<TestFn<T>, CliError> {
        expect_len(path, self.space.len(), v.len())?;
        TestFn::new(self.space.clone(), nums(v, path)?).map_err(|e| validation(path, e))
    }

    pub fn vector(&self, v: &[Num], path: &str) -> Result<Vec<T>, CliError> {
        expect_len(path, self.space.len(), v.len())?;
        nums(v, path)
    }
}

fn lower<T: Scalar>(space: &Arc<SampleSpace>, spec: &HypothesisSpec, path: &str) -> Result<HypothesisSet<T>, CliError> {
    let n = space.len();
    let h = match spec {
        HypothesisSpec::Generators { generators } => {
            if generators.is_empty() {
                return Err(CliError::Empty {
                    path: format!("{path}.generators"),
                });
            }
            let mut pmfs = Vec::with_capacity(generators.len());
            for (k, row) in generators.iter().enumerate() {
                let p = format!("{path}.generators[{k}]");
                expect_len(&p, n, row.len())?;
                let mass = nums(row, &p)?;
                pmfs.push(Pmf::new(space.clone(), mass).map_err(|e| validation(p, e))?);
            }
            HypothesisSet::generators(space.clone(), pmfs)
        }
        HypothesisSpec::Polytope { constraints, aux } => {
            let mut rows = Vec::with_capacity(constraints.len());
            for (k, c) in constraints.iter().enumerate() {
                let p = format!("{path}.constraints[{k}]");
                expect_len(&format!("{p}.coeffs"), n + aux, c.coeffs.len())?;
                rows.push(LinearConstraint::new(
                    nums(&c.coeffs, &format!("{p}.coeffs"))?,
                    c.rel,
                    num(&c.rhs, &format!("{p}.rhs"))?,
                ));
            }
            HypothesisSet::polytope(space.clone(), *aux, rows)
        }
        HypothesisSpec::MeanAtMost { mean_at_most: m } => {
            mean_at_most(space.clone(), num(m, &format!("{path}.mean_at_most"))?)
        }
        HypothesisSpec::MeanAtLeast { mean_at_least: m } => {
            mean_at_least(space.clone(), num(m, &format!("{path}.mean_at_least"))?)
        }
        HypothesisSpec::TvBall { tv_ball: spec } => {
            let p = format!("{path}.tv_ball.center");
            expect_len(&p, n, spec.center.len())?;
            let center = Pmf::new(space.clone(), nums(&spec.center, &p)?).map_err(|e| validation(p, e))?;
            tv_ball(&center, num(&spec.radius, &format!("{path}.tv_ball.radius"))?)
        }
        HypothesisSpec::Symmetric { symmetric } => {
            let pairs: Vec<(usize, usize)> = symmetric.iter().map(|[i, j]| (*i, *j)).collect();
            symmetric_null(space.clone(), &pairs)
        }
    };
    h.map_err(|e| validation(path, e))
}
