//! Randomized and exhaustive checking of the theory's claims on small
//! finite instances.
//!
//! Each theorem declares the shape of its instances. Instances are either
//! sampled from a per-instance seeded stream or, on request and when the
//! instance space is small enough, enumerated in full. Evaluation runs in
//! parallel; results are gathered in instance order, so reports are
//! reproducible byte for byte.

mod alg;
pub mod gen;
mod instance;
mod theorems;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use alg::{Alg, Mutant};
pub use instance::{CarrierEntry, Instance, InstanceDocument, MappingEntry, SetEntry, Witness};
pub use theorems::{theorem, Theorem, THEOREMS};

use crate::error::{Error, Result};
use crate::soft_set::Membership;
use crate::topology::Limits;

/// Instance spaces up to this size are enumerated when exhaustive mode is
/// requested.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Sampling retries for theorems whose hypothesis random instances rarely
/// meet.
const HYPOTHESIS_RETRIES: usize = 24;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_universe: usize,
    pub max_params: usize,
    /// Largest topology the generators keep.
    pub max_opens: usize,
    pub instances: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_universe: 3,
            max_params: 2,
            max_opens: 64,
            instances: 1000,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_universe == 0 || self.max_params == 0 || self.max_opens == 0 || self.instances == 0
        {
            return Err(Error::InvalidContext("all generator bounds must be at least 1".into()));
        }
        if self.max_universe > 8 || self.max_params > 4 {
            return Err(Error::CapExceeded {
                what: "generator universe (8 points, 4 parameters)",
                cap: 8,
            });
        }
        Ok(())
    }
}

/// What a check reads besides the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Env {
    pub alg: Alg,
    pub membership: Membership,
    pub limits: Limits,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            alg: Alg::default(),
            membership: Membership::AllParams,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    /// A counterexample is a defect.
    Law,
    /// A counterexample is a finding about the statement or its reading.
    Conjecture,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    /// The hypothesis is not met.
    Vacuous,
    Fails(String),
    /// A cap stopped the evaluation.
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Counterexample,
    SkippedCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sampled,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: String,
    pub tier: Tier,
    pub mode: Mode,
    pub instances_run: u64,
    pub hypothesis_met: u64,
    pub skipped: u64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl TheoremReport {
    /// One JSON line with sorted keys.
    pub fn to_json_line(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string(&value).expect("reports serialize")
    }

    pub fn is_law_failure(&self) -> bool {
        self.tier == Tier::Law && self.verdict == Verdict::Counterexample
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteOptions {
    pub exhaustive: bool,
    pub env: Env,
}

/// Resolve a suite selection: `all`, a group name, or comma-separated
/// theorem ids.
pub fn select_suite(selection: &str) -> Result<Vec<&'static Theorem>> {
    let mut out: Vec<&'static Theorem> = Vec::new();
    for part in selection.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let group: Vec<&'static Theorem> = match part {
            "all" => THEOREMS.iter().collect(),
            "laws" => THEOREMS.iter().filter(|t| t.tier == Tier::Law).collect(),
            "conjectures" => THEOREMS.iter().filter(|t| t.tier == Tier::Conjecture).collect(),
            _ => match THEOREMS.iter().filter(|t| t.groups.contains(&part)).collect::<Vec<_>>() {
                g if !g.is_empty() => g,
                _ => vec![theorem(part)
                    .ok_or_else(|| Error::Document(format!("unknown theorem or suite `{part}`")))?],
            },
        };
        for t in group {
            if !out.iter().any(|o| o.id == t.id) {
                out.push(t);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Document("empty suite selection".into()));
    }
    Ok(out)
}

/// Independent stream per `(seed, theorem, instance)`.
pub(crate) fn instance_rng(seed: u64, theorem: usize, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(theorem as u64).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn evaluate(th: &Theorem, inst: &Instance, env: &Env) -> Outcome {
    match (th.check)(inst, env) {
        Ok(o) => o,
        Err(e) if e.is_cap() => Outcome::Skipped,
        Err(e) => Outcome::Fails(format!("error: {e}")),
    }
}

/// Re-run one theorem on one instance.
pub fn recheck(id: &str, inst: &Instance, env: &Env) -> Result<Outcome> {
    let th = theorem(id).ok_or_else(|| Error::Document(format!("unknown theorem `{id}`")))?;
    Ok(evaluate(th, inst, env))
}

fn sample_one(th: &Theorem, tidx: usize, cfg: &GenConfig, env: &Env, i: u64) -> (Option<Instance>, Outcome) {
    let mut rng = instance_rng(cfg.seed, tidx, i);
    let tries = if th.retry_vacuous { HYPOTHESIS_RETRIES } else { 1 };
    let mut last = (None, Outcome::Skipped);
    for _ in 0..tries {
        let inst = match th.sample(&mut rng, cfg) {
            Ok(inst) => inst,
            Err(_) => continue,
        };
        let out = evaluate(th, &inst, env);
        let done = !matches!(out, Outcome::Vacuous | Outcome::Skipped);
        last = (Some(inst), out);
        if done {
            break;
        }
    }
    last
}

pub fn run_theorem(th: &Theorem, cfg: &GenConfig, opts: &SuiteOptions) -> TheoremReport {
    let env = &opts.env;
    let tidx = THEOREMS.iter().position(|t| t.id == th.id).unwrap_or(0);
    let mut counts = (0u64, 0u64, 0u64);
    let mut first_failure: Option<(Instance, String)> = None;
    let mut tally = |results: Vec<(Option<Instance>, Outcome)>, first: &mut Option<(Instance, String)>| {
        for (inst, out) in results {
            counts.0 += 1;
            match out {
                Outcome::Holds => counts.1 += 1,
                Outcome::Vacuous => {}
                Outcome::Skipped => counts.2 += 1,
                Outcome::Fails(detail) => {
                    counts.1 += 1;
                    if first.is_none() {
                        *first = inst.map(|i| (i, detail));
                    }
                }
            }
        }
    };

    let plan = if opts.exhaustive {
        theorems::enumeration(th, cfg)
    } else {
        None
    };
    let mode = if plan.is_some() { Mode::Exhaustive } else { Mode::Sampled };
    match plan {
        Some(blocks) => {
            for block in &blocks {
                let mut start = 0u64;
                while start < block.count() {
                    let end = (start + CHUNK as u64).min(block.count());
                    let results: Vec<_> = (start..end)
                        .into_par_iter()
                        .map(|k| {
                            let inst = block.instance(k);
                            let out = evaluate(th, &inst, env);
                            let keep = matches!(out, Outcome::Fails(_)).then_some(inst);
                            (keep, out)
                        })
                        .collect();
                    tally(results, &mut first_failure);
                    start = end;
                }
            }
        }
        None => {
            let total = cfg.instances as u64;
            let mut start = 0u64;
            while start < total {
                let end = (start + CHUNK as u64).min(total);
                let results: Vec<_> = (start..end)
                    .into_par_iter()
                    .map(|i| {
                        let (inst, out) = sample_one(th, tidx, cfg, env, i);
                        let keep = if matches!(out, Outcome::Fails(_)) { inst } else { None };
                        (keep, out)
                    })
                    .collect();
                tally(results, &mut first_failure);
                start = end;
            }
        }
    }

    let (run, met, skipped) = counts;
    let (verdict, detail, witness) = match first_failure {
        Some((inst, _)) => {
            let fails = |i: &Instance| matches!(evaluate(th, i, env), Outcome::Fails(_));
            let small = inst.shrink(fails);
            let detail = match evaluate(th, &small, env) {
                Outcome::Fails(d) => d,
                other => format!("shrunk witness no longer fails: {other:?}"),
            };
            let witness = Witness {
                theorem: th.id.to_string(),
                instance: small.to_document(),
            };
            (Verdict::Counterexample, Some(detail), Some(witness))
        }
        None if skipped == run => (Verdict::SkippedCap, None, None),
        None => (Verdict::Verified, None, None),
    };
    TheoremReport {
        id: th.id.to_string(),
        tier: th.tier,
        mode,
        instances_run: run,
        hypothesis_met: met,
        skipped,
        verdict,
        detail,
        witness,
    }
}

pub fn run_suite(cfg: &GenConfig, suite: &[&Theorem], opts: &SuiteOptions) -> Vec<TheoremReport> {
    suite.iter().map(|th| run_theorem(th, cfg, opts)).collect()
}

/// Fixed-width status table, one row per report.
pub fn status_table(reports: &[TheoremReport]) -> String {
    let mut out = format!(
        "{:<24} {:<10} {:<10} {:>9} {:>9} {:>8}  {}\n",
        "theorem", "tier", "mode", "instances", "hyp-met", "skipped", "verdict"
    );
    for r in reports {
        let tier = serde_json::to_value(r.tier).unwrap();
        let mode = serde_json::to_value(r.mode).unwrap();
        let verdict = serde_json::to_value(r.verdict).unwrap();
        out.push_str(&format!(
            "{:<24} {:<10} {:<10} {:>9} {:>9} {:>8}  {}\n",
            r.id,
            tier.as_str().unwrap_or(""),
            mode.as_str().unwrap_or(""),
            r.instances_run,
            r.hypothesis_met,
            r.skipped,
            verdict.as_str().unwrap_or(""),
        ));
    }
    out
}
