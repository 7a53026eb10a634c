//! Report files written by every command.

use std::collections::BTreeMap;

use mmtv_core::effnull::{PolarMembership, PoweredEVariable};
use mmtv_core::experiments::{ExperimentReport, StepRecord};
use mmtv_core::minimax::{CertificateVerdict, ClosestPair, RiskReport};
use mmtv_core::{Mode, Num, Scalar};
use serde::{Deserialize, Serialize};

use crate::problem::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    /// Positional inputs and options as given, after defaults are applied.
    pub arguments: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub command: CommandEcho,
    pub mode: Mode,
    pub result: ResultBody,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ReportFile {
    pub fn new(command: CommandEcho, mode: Mode, result: ResultBody, warnings: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            mode,
            result,
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, crate::CliError> {
        crate::problem::from_json(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairBody {
    pub mu: Vec<Num>,
    pub nu: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarBody {
    pub member: bool,
    pub optimum: Num,
    pub cap: Num,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepBody {
    pub size: usize,
    pub risk: Num,
    pub tv: Num,
    pub duality_gap: Num,
    pub worst_level: Num,
    pub worst_power: Num,
    pub optimal_test: Vec<Num>,
    pub closest_pair: PairBody,
    pub expected_risk: Option<Num>,
    pub expected_tv: Option<Num>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultBody {
    Risk {
        risk: Num,
        optimal_test: Vec<Num>,
        worst_level: Num,
        worst_power: Num,
        tv: Num,
        closest_pair: PairBody,
        duality_gap: Num,
    },
    TvDistance {
        tv: Num,
        closest_pair: PairBody,
    },
    Certificate {
        valid: bool,
        risk_of_phi: Num,
        tv_of_pair: Num,
        membership_ok: [bool; 2],
        gap: Num,
    },
    EffectiveNull {
        total_mass: Num,
        /// Present only when the measure has unit mass.
        in_hull: Option<bool>,
        dominated: bool,
        polar: PolarBody,
    },
    EVariable {
        z: Vec<Num>,
        inf_power: Num,
        level: Num,
    },
    Experiment {
        name: String,
        parameters: BTreeMap<String, String>,
        steps: Vec<StepBody>,
        tv_trend: String,
        limit_estimate: Option<Num>,
        expected_limit: Option<Num>,
        pass: bool,
        notes: Vec<String>,
    },
}

fn nums<T: Scalar>(v: &[T]) -> Vec<Num> {
    v.iter().map(Scalar::to_num).collect()
}

impl ResultBody {
    pub fn risk<T: Scalar>(r: &RiskReport<T>) -> Self {
        ResultBody::Risk {
            risk: r.risk.to_num(),
            optimal_test: nums(r.optimal_test.values()),
            worst_level: r.worst_level.to_num(),
            worst_power: r.worst_power.to_num(),
            tv: r.tv.to_num(),
            closest_pair: PairBody {
                mu: nums(r.closest_pair.0.mass()),
                nu: nums(r.closest_pair.1.mass()),
            },
            duality_gap: r.duality_gap.to_num(),
        }
    }

    pub fn tv_distance<T: Scalar>(c: &ClosestPair<T>) -> Self {
        ResultBody::TvDistance {
            tv: c.tv.to_num(),
            closest_pair: PairBody {
                mu: nums(c.mu.mass()),
                nu: nums(c.nu.mass()),
            },
        }
    }

    pub fn certificate<T: Scalar>(v: &CertificateVerdict<T>) -> Self {
        ResultBody::Certificate {
            valid: v.valid,
            risk_of_phi: v.risk_of_phi.to_num(),
            tv_of_pair: v.tv_of_pair.to_num(),
            membership_ok: [v.membership_ok.0, v.membership_ok.1],
            gap: v.gap.to_num(),
        }
    }

    pub fn effective_null<T: Scalar>(
        total_mass: &T,
        in_hull: Option<bool>,
        dominated: bool,
        polar: &PolarMembership<T>,
    ) -> Self {
        ResultBody::EffectiveNull {
            total_mass: total_mass.to_num(),
            in_hull,
            dominated,
            polar: PolarBody {
                member: polar.member,
                optimum: polar.optimum.to_num(),
                cap: polar.cap.to_num(),
                exhausted: polar.exhausted,
            },
        }
    }

    pub fn e_variable<T: Scalar>(e: &PoweredEVariable<T>) -> Self {
        ResultBody::EVariable {
            z: nums(e.z.values()),
            inf_power: e.inf_power.to_num(),
            level: e.level.to_num(),
        }
    }

    pub fn experiment<T: Scalar>(r: &ExperimentReport<T>) -> Self {
        ResultBody::Experiment {
            name: r.name.clone(),
            parameters: r.parameters.clone(),
            steps: r.steps.iter().map(step).collect(),
            tv_trend: r.tv_trend.as_str().to_string(),
            limit_estimate: r.limit_estimate.as_ref().map(Scalar::to_num),
            expected_limit: r.expected_limit.as_ref().map(Scalar::to_num),
            pass: r.pass,
            notes: r.notes.clone(),
        }
    }
}

fn step<T: Scalar>(s: &StepRecord<T>) -> StepBody {
    StepBody {
        size: s.size,
        risk: s.risk.to_num(),
        tv: s.tv.to_num(),
        duality_gap: s.duality_gap.to_num(),
        worst_level: s.worst_level.to_num(),
        worst_power: s.worst_power.to_num(),
        optimal_test: nums(&s.optimal_test),
        closest_pair: PairBody {
            mu: nums(&s.closest_pair.0),
            nu: nums(&s.closest_pair.1),
        },
        expected_risk: s.expected_risk.as_ref().map(Scalar::to_num),
        expected_tv: s.expected_tv.as_ref().map(Scalar::to_num),
        pass: s.pass,
    }
}
