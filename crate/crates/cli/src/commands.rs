//! The subcommands, as functions returning serializable documents.

use std::str::FromStr;

use fairdiv::fairness::{
    alpha_efx_rival, ef1_rival, fairness_report, is_prop_satisfied, mms_to_eefx_certificate, mms_value,
    prop_threshold, FairnessReport, PropNotion,
};
use fairdiv::oracle::{find_efx_allocation, is_eef1_satisfied_bruteforce, is_eefx_satisfied_bruteforce};
use fairdiv::{
    bar_kri, certificate_from_pipeline, verify_certificate, Allocation, Instance, Kind, SolveOptions,
    SolveResult, Value, DEFAULT_TABLE_LIMIT,
};
use num_traits::One;
use serde::Serialize;

use crate::doc::{parse_allocation, parse_certificates, parse_instance, parse_rational, Bundles, Num};
use crate::{CliError, Limits};

#[derive(Debug, Clone, Serialize)]
pub struct CertificateDoc {
    pub agent: usize,
    pub witness: Bundles,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgentReportDoc {
    pub agent: usize,
    pub bundle_value: Num,
    pub efx: bool,
    pub ef1: bool,
    pub prop1: Option<bool>,
    pub propm: Option<bool>,
    pub propx: Option<bool>,
    pub mms_value: Option<Num>,
    pub mms_ratio: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDoc {
    pub is_efx: bool,
    pub is_ef1: bool,
    pub alpha_correlation: Option<Num>,
    pub agents: Vec<AgentReportDoc>,
}

impl From<FairnessReport<Value>> for ReportDoc {
    fn from(r: FairnessReport<Value>) -> Self {
        ReportDoc {
            is_efx: r.is_efx,
            is_ef1: r.is_ef1,
            alpha_correlation: r.alpha_correlation.map(Num),
            agents: r
                .agents
                .into_iter()
                .enumerate()
                .map(|(i, a)| AgentReportDoc {
                    agent: i + 1,
                    bundle_value: Num(a.bundle_value),
                    efx: a.efx,
                    ef1: a.ef1,
                    prop1: a.prop1,
                    propm: a.propm,
                    propx: a.propx,
                    mms_value: a.mms_value.map(Num),
                    mms_ratio: a.mms_ratio.map(Num),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub kind: &'static str,
    pub agents: usize,
    pub items: usize,
    pub allocation: Bundles,
    /// Ordered-stage allocation, in rank positions: item `k` there is each
    /// agent's `k`-th most valuable item.
    pub stage1: Bundles,
    /// Owner of each position of `stage1`, 1-based; the picking sequence.
    pub vector: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CertificateDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportDoc>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveFlags {
    pub certificates: bool,
    pub report: bool,
}

pub fn solve_instance(inst: &Instance<Value>, flags: SolveFlags, limits: &Limits) -> Result<SolveDoc, CliError> {
    let out: SolveResult = bar_kri(
        inst,
        SolveOptions {
            certificates: flags.certificates,
        },
    )?;
    let report = flags
        .report
        .then(|| fairness_report(inst, &out.allocation, &limits.mms, DEFAULT_TABLE_LIMIT).into());
    Ok(SolveDoc {
        file: None,
        kind: inst.kind().name(),
        agents: inst.num_agents(),
        items: inst.num_items(),
        allocation: Bundles::from(&out.allocation),
        stage1: Bundles::from(&out.stage1),
        vector: out.sequence.owners().iter().map(|a| a + 1).collect(),
        certificates: flags.certificates.then(|| {
            out.certificates
                .iter()
                .map(|c| CertificateDoc {
                    agent: c.agent + 1,
                    witness: Bundles::from(&c.witness),
                })
                .collect()
        }),
        report,
    })
}

pub fn solve(text: &str, flags: SolveFlags, limits: &Limits) -> Result<SolveDoc, CliError> {
    solve_instance(&parse_instance(text)?, flags, limits)
}

/// Solves several files on up to `jobs` threads. Results keep input order.
pub fn solve_many(
    files: &[(String, String)],
    flags: SolveFlags,
    limits: &Limits,
    jobs: usize,
) -> Vec<Result<SolveDoc, CliError>> {
    let jobs = jobs.clamp(1, files.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<SolveDoc, CliError>>> = vec![None; files.len()];
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some((name, text)) = files.get(k) else { break };
                let r = solve(text, flags, limits)
                    .map(|mut d| {
                        d.file = Some(name.clone());
                        d
                    })
                    .map_err(|e| CliError::new(e.code, format!("{name}: {}", e.message)));
                results.lock().expect("no panics while holding the lock")[k] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every file is processed")).collect()
}

/// A fairness notion to check.
#[derive(Debug, Clone, PartialEq)]
pub enum Notion {
    Efx,
    Ef1,
    Eefx,
    Prop1,
    PropM,
    PropX,
    /// `α`-MMS.
    Mms(Value),
}

impl Notion {
    pub fn name(&self) -> String {
        match self {
            Notion::Efx => "efx".into(),
            Notion::Ef1 => "ef1".into(),
            Notion::Eefx => "eefx".into(),
            Notion::Prop1 => "prop1".into(),
            Notion::PropM => "propm".into(),
            Notion::PropX => "propx".into(),
            Notion::Mms(a) if a.is_one() => "mms".into(),
            Notion::Mms(a) => format!("mms:{}/{}", a.numer(), a.denom()),
        }
    }
}

impl FromStr for Notion {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "efx" => Notion::Efx,
            "ef1" => Notion::Ef1,
            "eefx" => Notion::Eefx,
            "prop1" => Notion::Prop1,
            "propm" => Notion::PropM,
            "propx" => Notion::PropX,
            "mms" => Notion::Mms(Value::one()),
            other => match other.strip_prefix("mms:") {
                Some(a) => Notion::Mms(parse_rational(a).map_err(|e| CliError::input(format!("--notions: {e}")))?),
                None => return Err(CliError::input(format!("--notions: unknown notion {other:?}"))),
            },
        })
    }
}

pub fn parse_notions(list: &str) -> Result<Vec<Notion>, CliError> {
    let notions = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Notion::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    if notions.is_empty() {
        return Err(CliError::input("--notions: nothing to check"));
    }
    Ok(notions)
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct AgentVerdict {
    pub agent: usize,
    pub holds: bool,
    /// The first agent this one envies beyond the notion's allowance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rival: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bundle_value: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Bundles>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NotionVerdict {
    pub notion: String,
    pub holds: bool,
    pub agents: Vec<AgentVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDoc {
    pub holds: bool,
    pub allocation: Bundles,
    pub notions: Vec<NotionVerdict>,
}

fn goods_only(inst: &Instance<Value>, notion: &Notion) -> Result<(), CliError> {
    if inst.kind() == Kind::Goods {
        Ok(())
    } else {
        Err(CliError::input(format!("{} is defined for goods only", notion.name())))
    }
}

fn check_notion(
    inst: &Instance<Value>,
    x: &Allocation,
    notion: &Notion,
    certificates: &[(usize, Allocation)],
    limits: &Limits,
) -> Result<Vec<AgentVerdict>, CliError> {
    let n = inst.num_agents();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let bundle_value = || Some(Num(inst.value(i, x.bundle(i))));
        let v = match notion {
            Notion::Efx | Notion::Ef1 => {
                let rival = if *notion == Notion::Efx {
                    alpha_efx_rival(inst, x, i, &Value::one())
                } else {
                    ef1_rival(inst, x, i)
                };
                AgentVerdict {
                    holds: rival.is_none(),
                    rival: rival.map(|j| j + 1),
                    ..Default::default()
                }
            }
            Notion::Eefx => {
                let supplied = certificates
                    .iter()
                    .find(|(a, y)| *a == i && verify_certificate(inst, x, y, i));
                match supplied {
                    Some((_, y)) => AgentVerdict {
                        holds: true,
                        method: Some("certificate"),
                        witness: Some(Bundles::from(y)),
                        ..Default::default()
                    },
                    None => {
                        let w = is_eefx_satisfied_bruteforce(inst, x, i, &limits.search)?;
                        AgentVerdict {
                            holds: w.is_some(),
                            method: Some("oracle"),
                            witness: w.as_ref().map(Bundles::from),
                            ..Default::default()
                        }
                    }
                }
            }
            Notion::Prop1 | Notion::PropM | Notion::PropX => {
                goods_only(inst, notion)?;
                let p = match notion {
                    Notion::Prop1 => PropNotion::Prop1,
                    Notion::PropM => PropNotion::PropM,
                    _ => PropNotion::PropX,
                };
                AgentVerdict {
                    holds: is_prop_satisfied(inst, x, i, p)?,
                    bundle_value: bundle_value(),
                    threshold: Some(Num(prop_threshold(inst, x, i, p)?)),
                    ..Default::default()
                }
            }
            Notion::Mms(alpha) => {
                goods_only(inst, notion)?;
                let share = mms_value(inst, i, &limits.mms)?.value;
                let threshold = alpha.clone() * share;
                AgentVerdict {
                    holds: inst.value(i, x.bundle(i)) >= threshold,
                    bundle_value: bundle_value(),
                    threshold: Some(Num(threshold)),
                    ..Default::default()
                }
            }
        };
        out.push(AgentVerdict { agent: i + 1, ..v });
    }
    Ok(out)
}

pub fn check(
    instance: &str,
    allocation: &str,
    notions: &[Notion],
    certificates: Option<&str>,
    limits: &Limits,
) -> Result<CheckDoc, CliError> {
    let inst = parse_instance(instance)?;
    let doc = parse_allocation(allocation, &inst)?;
    let mut certs = doc.certificates;
    if let Some(text) = certificates {
        certs.extend(parse_certificates(text, &inst)?);
    }
    let x = doc.allocation;
    let verdicts = notions
        .iter()
        .map(|notion| {
            let agents = check_notion(&inst, &x, notion, &certs, limits)?;
            Ok(NotionVerdict {
                notion: notion.name(),
                holds: agents.iter().all(|a| a.holds),
                agents,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(CheckDoc {
        holds: verdicts.iter().all(|v| v.holds),
        allocation: Bundles::from(&x),
        notions: verdicts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pipeline,
    Mms,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialDoc {
    pub weak_rivals: usize,
    pub top: Num,
    pub at_top: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyDoc {
    pub agent: usize,
    pub method: &'static str,
    pub allocation: Bundles,
    pub witness: Bundles,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage1: Option<Bundles>,
    /// Potential before every move and at exit (mms method).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potentials: Option<Vec<PotentialDoc>>,
}

/// Builds a certificate for the 1-based `agent`.
pub fn certify(
    instance: &str,
    allocation: &str,
    agent: usize,
    method: Method,
    limits: &Limits,
) -> Result<CertifyDoc, CliError> {
    let inst = parse_instance(instance)?;
    let doc = parse_allocation(allocation, &inst)?;
    if agent == 0 || agent > inst.num_agents() {
        return Err(CliError::input(format!("--agent: no agent {agent}")));
    }
    let k = agent - 1;
    let x = &doc.allocation;
    match method {
        Method::Pipeline => {
            let stage1 = doc.stage1.as_ref().ok_or_else(|| {
                CliError::precondition(
                    "pipeline method needs the ordered-stage allocation: pass a solve report with a \"stage1\" key",
                )
            })?;
            let cert = certificate_from_pipeline(&inst, x, stage1, k).map_err(|e| match e {
                fairdiv::Error::InvalidAllocation(m) => CliError::precondition(m),
                other => other.into(),
            })?;
            Ok(CertifyDoc {
                agent,
                method: "pipeline",
                allocation: Bundles::from(x),
                witness: Bundles::from(&cert.witness),
                stage1: Some(Bundles::from(stage1)),
                potentials: None,
            })
        }
        Method::Mms => {
            if inst.kind() != Kind::Goods {
                return Err(CliError::precondition("mms method requires a goods instance"));
            }
            let out = mms_to_eefx_certificate(&inst, x, k, &limits.mms).map_err(|e| match e {
                fairdiv::Error::NotStronglyMonotone { agent } => CliError::precondition(format!(
                    "precondition failed: valuation of agent {} is not strongly monotone",
                    agent + 1
                )),
                fairdiv::Error::BelowMaximinShare { agent, bundle, mms } => CliError::precondition(format!(
                    "precondition failed: agent {} values their bundle at {bundle}, below the maximin share {mms}",
                    agent + 1
                )),
                other => other.into(),
            })?;
            Ok(CertifyDoc {
                agent,
                method: "mms",
                allocation: Bundles::from(x),
                witness: Bundles::from(&out.certificate.witness),
                stage1: None,
                potentials: Some(
                    out.potentials
                        .into_iter()
                        .map(|p| PotentialDoc {
                            weak_rivals: p.weak_rivals,
                            top: Num(p.top),
                            at_top: p.at_top,
                        })
                        .collect(),
                ),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Question {
    Eefx,
    Eef1,
    EfxExists,
}

impl Question {
    pub fn name(self) -> &'static str {
        match self {
            Question::Eefx => "eefx",
            Question::Eef1 => "eef1",
            Question::EfxExists => "efx-exists",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleAgent {
    pub agent: usize,
    pub satisfied: bool,
    pub witness: Option<Bundles>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleDoc {
    pub question: &'static str,
    pub answer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agents: Option<Vec<OracleAgent>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Option<Bundles>>,
}

pub fn oracle(
    instance: &str,
    allocation: Option<&str>,
    question: Question,
    limits: &Limits,
) -> Result<OracleDoc, CliError> {
    let inst = parse_instance(instance)?;
    if question == Question::EfxExists {
        let found = find_efx_allocation(&inst, &limits.search)?;
        return Ok(OracleDoc {
            question: question.name(),
            answer: found.is_some(),
            agents: None,
            witness: Some(found.as_ref().map(Bundles::from)),
        });
    }
    let text = allocation.ok_or_else(|| CliError::input(format!("{} needs an allocation file", question.name())))?;
    let x = parse_allocation(text, &inst)?.allocation;
    let agents = (0..inst.num_agents())
        .map(|i| {
            let w = match question {
                Question::Eefx => is_eefx_satisfied_bruteforce(&inst, &x, i, &limits.search)?,
                _ => is_eef1_satisfied_bruteforce(&inst, &x, i, &limits.search)?,
            };
            Ok(OracleAgent {
                agent: i + 1,
                satisfied: w.is_some(),
                witness: w.as_ref().map(Bundles::from),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(OracleDoc {
        question: question.name(),
        answer: agents.iter().all(|a| a.satisfied),
        agents: Some(agents),
        witness: None,
    })
}
