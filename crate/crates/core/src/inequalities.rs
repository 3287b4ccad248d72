//! Numerical checks of the noisy-entropy inequalities. Every check is
//! normalized to the form `lhs ≤ rhs` and reports the signed slack
//! `rhs − lhs` in bits; a negative slack beyond [`TOLERANCE`] is a violation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitspace::Code;
use crate::boolfn::{binary_entropy, h_q, BooleanFunction, RenyiOrder};
use crate::channels::{for_each_conditional, noise_operator_fast};
use crate::entropy_analysis::{
    cond_entropy_bec, cond_entropy_bsc_with, marginal_entropy_profile, Mode, NoiseFn,
    SubsetProfile, EXACT_SUBSET_MAX_DIM,
};
use crate::error::{check_probability, invalid, Error, Result};

/// Slack below `-TOLERANCE` bits counts as a violation.
pub const TOLERANCE: f64 = 1e-9;

/// Identifier of each inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// log ‖T_ε f‖_q ≤ E_{S∼λ} log ‖E(f|S)‖_q, λ = 1 − h_q(ε).
    SamNorm,
    /// Ent[T_ε f] ≤ E_{S∼λ} Ent[E(f|S)], λ = (1−2ε)².
    SamEntropy,
    /// (1−λ)n + E_{S∼λ} H_q(X_S) ≤ H_q(X+Z), λ = 1 − h_q(ε).
    CorRv,
    /// (1−λ)n + E_{S∼λ} H(X_S) ≤ H(X+Z), λ = (1−2ε)².
    CorRvEntropy,
    /// H(X|Y_BSC) ≤ (h(ε)−η)n + H(X|Y_BEC), given 4ε(1−ε) ≥ η.
    BscBec,
    /// Σ p_i log(1/p_i) ≤ p log k + 1.
    PartialEntropy,
}

impl Inequality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Inequality::SamNorm => "sam_norm",
            Inequality::SamEntropy => "sam_entropy",
            Inequality::CorRv => "cor_rv",
            Inequality::CorRvEntropy => "cor_rv_entropy",
            Inequality::BscBec => "bsc_bec",
            Inequality::PartialEntropy => "partial_entropy",
        }
    }
}

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub inequality: Inequality,
    pub subject: String,
    pub n: usize,
    pub eps: Option<f64>,
    pub eta: Option<f64>,
    pub q: Option<u32>,
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl SlackReport {
    fn new(inequality: Inequality, subject: &str, n: usize, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            inequality,
            subject: subject.to_string(),
            n,
            eps: None,
            eta: None,
            q: None,
            lambda: None,
            lhs,
            rhs,
            slack,
            pass: slack >= -TOLERANCE,
        }
    }

    fn with(
        mut self,
        eps: Option<f64>,
        eta: Option<f64>,
        q: Option<u32>,
        lambda: Option<f64>,
    ) -> Self {
        self.eps = eps;
        self.eta = eta;
        self.q = q;
        self.lambda = lambda;
        self
    }
}

fn check_norm_order(q: u32) -> Result<()> {
    if q < 2 {
        Err(invalid(format!(
            "the norm inequality needs an integer q ≥ 2, got {q}"
        )))
    } else {
        Ok(())
    }
}

fn check_function(f: &BooleanFunction) -> Result<()> {
    if f.n() > EXACT_SUBSET_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n: f.n(),
            max: EXACT_SUBSET_MAX_DIM,
        });
    }
    if f.values().iter().all(|&v| v == 0.0) {
        return Err(invalid("function is identically zero"));
    }
    Ok(())
}

/// λ = 1 − h_q(ε) for the Rényi-order inequalities.
pub fn renyi_lambda(eps: f64, q: u32) -> Result<f64> {
    Ok(1.0 - h_q(eps, RenyiOrder::Finite(q as f64))?)
}

/// λ = (1−2ε)² for the Shannon-order inequalities.
pub fn entropy_lambda(eps: f64) -> f64 {
    (1.0 - 2.0 * eps).powi(2)
}

/// Subset profiles of a single function: S ↦ log ‖E(f|S)‖_q for each
/// requested q, and S ↦ Ent[E(f|S)]. One O(3^n) pass serves every ε.
#[derive(Clone, Debug)]
pub struct ConditionalProfiles {
    orders: Vec<u32>,
    log_norms: Vec<SubsetProfile>,
    ent: SubsetProfile,
}

impl ConditionalProfiles {
    pub fn compute(f: &BooleanFunction, orders: &[u32]) -> Result<Self> {
        check_function(f)?;
        for &q in orders {
            check_norm_order(q)?;
        }
        let n = f.n();
        let mut norm_sums = vec![vec![0.0; n + 1]; orders.len()];
        let mut ent_sums = vec![0.0; n + 1];
        for_each_conditional(f, |s, g| {
            let k = s.len();
            for (sums, &q) in norm_sums.iter_mut().zip(orders) {
                sums[k] += g.log_norm(RenyiOrder::Finite(q as f64));
            }
            ent_sums[k] += g.ent();
        });
        Ok(Self {
            orders: orders.to_vec(),
            log_norms: norm_sums
                .into_iter()
                .map(SubsetProfile::from_sums)
                .collect(),
            ent: SubsetProfile::from_sums(ent_sums),
        })
    }

    fn log_norm(&self, q: u32) -> Result<&SubsetProfile> {
        self.orders
            .iter()
            .position(|&o| o == q)
            .map(|i| &self.log_norms[i])
            .ok_or_else(|| invalid(format!("order {q} was not profiled")))
    }
}

/// Runs the checks with a chosen noise operator.
#[derive(Clone, Copy, Debug)]
pub struct Checker {
    noise: NoiseFn,
}

impl Default for Checker {
    fn default() -> Self {
        Self {
            noise: noise_operator_fast,
        }
    }
}

impl Checker {
    pub fn with_noise(noise: NoiseFn) -> Self {
        Self { noise }
    }

    pub fn noise(&self) -> NoiseFn {
        self.noise
    }

    pub fn check_sam_norm(&self, f: &BooleanFunction, eps: f64, q: u32) -> Result<SlackReport> {
        check_norm_order(q)?;
        let profiles = ConditionalProfiles::compute(f, &[q])?;
        self.sam_norm_profiled(f, "function", eps, q, &profiles)
    }

    fn sam_norm_profiled(
        &self,
        f: &BooleanFunction,
        subject: &str,
        eps: f64,
        q: u32,
        profiles: &ConditionalProfiles,
    ) -> Result<SlackReport> {
        check_probability("eps", eps)?;
        let lambda = renyi_lambda(eps, q)?;
        let lhs = (self.noise)(f, eps)?.log_norm(RenyiOrder::Finite(q as f64));
        let rhs = profiles.log_norm(q)?.expectation(lambda);
        Ok(
            SlackReport::new(Inequality::SamNorm, subject, f.n(), lhs, rhs).with(
                Some(eps),
                None,
                Some(q),
                Some(lambda),
            ),
        )
    }

    pub fn check_sam_entropy(&self, f: &BooleanFunction, eps: f64) -> Result<SlackReport> {
        let profiles = ConditionalProfiles::compute(f, &[])?;
        self.sam_entropy_profiled(f, "function", eps, &profiles)
    }

    fn sam_entropy_profiled(
        &self,
        f: &BooleanFunction,
        subject: &str,
        eps: f64,
        profiles: &ConditionalProfiles,
    ) -> Result<SlackReport> {
        check_probability("eps", eps)?;
        let lambda = entropy_lambda(eps);
        let lhs = (self.noise)(f, eps)?.ent();
        let rhs = profiles.ent.expectation(lambda);
        Ok(
            SlackReport::new(Inequality::SamEntropy, subject, f.n(), lhs, rhs).with(
                Some(eps),
                None,
                None,
                Some(lambda),
            ),
        )
    }

    pub fn check_cor_rv(&self, code: &Code, eps: f64, q: u32) -> Result<SlackReport> {
        check_norm_order(q)?;
        let f = BooleanFunction::from_code(code)?;
        let profile = marginal_entropy_profile(code, RenyiOrder::Finite(q as f64))?;
        self.cor_rv_profiled(code, &f, eps, q, &profile)
    }

    fn cor_rv_profiled(
        &self,
        code: &Code,
        f: &BooleanFunction,
        eps: f64,
        q: u32,
        profile: &SubsetProfile,
    ) -> Result<SlackReport> {
        check_probability("eps", eps)?;
        let order = RenyiOrder::Finite(q as f64);
        let lambda = renyi_lambda(eps, q)?;
        let n = code.n() as f64;
        let rhs = (self.noise)(f, eps)?.renyi_entropy(order);
        let lhs = (1.0 - lambda) * n + profile.expectation(lambda);
        Ok(
            SlackReport::new(Inequality::CorRv, code.id(), code.n(), lhs, rhs).with(
                Some(eps),
                None,
                Some(q),
                Some(lambda),
            ),
        )
    }

    pub fn check_cor_rv_entropy(&self, code: &Code, eps: f64) -> Result<SlackReport> {
        let f = BooleanFunction::from_code(code)?;
        let profile = marginal_entropy_profile(code, RenyiOrder::SHANNON)?;
        self.cor_rv_entropy_profiled(code, &f, eps, &profile)
    }

    fn cor_rv_entropy_profiled(
        &self,
        code: &Code,
        f: &BooleanFunction,
        eps: f64,
        profile: &SubsetProfile,
    ) -> Result<SlackReport> {
        check_probability("eps", eps)?;
        let lambda = entropy_lambda(eps);
        let n = code.n() as f64;
        let rhs = (self.noise)(f, eps)?.renyi_entropy(RenyiOrder::SHANNON);
        let lhs = (1.0 - lambda) * n + profile.expectation(lambda);
        Ok(
            SlackReport::new(Inequality::CorRvEntropy, code.id(), code.n(), lhs, rhs).with(
                Some(eps),
                None,
                None,
                Some(lambda),
            ),
        )
    }

    /// Fails with [`Error::Hypothesis`] unless 0 ≤ η ≤ 1 and 4ε(1−ε) ≥ η.
    pub fn check_bsc_bec(&self, code: &Code, eps: f64, eta: f64) -> Result<SlackReport> {
        check_probability("eps", eps)?;
        check_probability("eta", eta)?;
        if 4.0 * eps * (1.0 - eps) < eta - 1e-12 {
            return Err(Error::Hypothesis(format!(
                "4ε(1−ε) = {} < η = {eta}",
                4.0 * eps * (1.0 - eps)
            )));
        }
        let n = code.n() as f64;
        let lhs = cond_entropy_bsc_with(code, eps, self.noise)?;
        let rhs = (binary_entropy(eps) - eta) * n + cond_entropy_bec(code, eta, Mode::Exact)?.value;
        Ok(
            SlackReport::new(Inequality::BscBec, code.id(), code.n(), lhs, rhs).with(
                Some(eps),
                Some(eta),
                None,
                Some(1.0 - eta),
            ),
        )
    }
}

pub fn check_sam_norm(f: &BooleanFunction, eps: f64, q: u32) -> Result<SlackReport> {
    Checker::default().check_sam_norm(f, eps, q)
}

pub fn check_sam_entropy(f: &BooleanFunction, eps: f64) -> Result<SlackReport> {
    Checker::default().check_sam_entropy(f, eps)
}

pub fn check_cor_rv(code: &Code, eps: f64, q: u32) -> Result<SlackReport> {
    Checker::default().check_cor_rv(code, eps, q)
}

pub fn check_cor_rv_entropy(code: &Code, eps: f64) -> Result<SlackReport> {
    Checker::default().check_cor_rv_entropy(code, eps)
}

pub fn check_bsc_bec(code: &Code, eps: f64, eta: f64) -> Result<SlackReport> {
    Checker::default().check_bsc_bec(code, eps, eta)
}

/// Σ p_i log(1/p_i) ≤ p log k + 1 for a sub-distribution of length k with
/// total mass p ≤ 1.
pub fn partial_entropy_bound_check(p: &[f64]) -> Result<SlackReport> {
    if p.is_empty() {
        return Err(invalid("need at least one entry"));
    }
    if let Some(x) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(invalid(format!(
            "entry {x} is not a finite nonnegative number"
        )));
    }
    let mass: f64 = p.iter().sum();
    if mass > 1.0 + 1e-12 {
        return Err(Error::NotADistribution { sum: mass });
    }
    let lhs: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    let rhs = mass * (p.len() as f64).log2() + 1.0;
    Ok(SlackReport::new(
        Inequality::PartialEntropy,
        "sub_distribution",
        p.len(),
        lhs,
        rhs,
    ))
}

/// Row status in a battery run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    /// Parameters outside the inequality's hypothesis.
    Skipped,
}

/// One flat output row of a battery.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackRow {
    pub inequality: Inequality,
    pub subject: String,
    pub n: usize,
    pub eps: Option<f64>,
    pub eta: Option<f64>,
    pub q: Option<u32>,
    pub lambda: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub status: RowStatus,
}

impl From<SlackReport> for SlackRow {
    fn from(r: SlackReport) -> Self {
        Self {
            inequality: r.inequality,
            subject: r.subject,
            n: r.n,
            eps: r.eps,
            eta: r.eta,
            q: r.q,
            lambda: r.lambda,
            lhs: Some(r.lhs),
            rhs: Some(r.rhs),
            slack: Some(r.slack),
            status: if r.pass {
                RowStatus::Pass
            } else {
                RowStatus::Fail
            },
        }
    }
}

impl SlackRow {
    /// Human-readable configuration key.
    pub fn config(&self) -> String {
        let mut s = format!("{} {}", self.inequality.as_str(), self.subject);
        if let Some(e) = self.eps {
            s += &format!(" eps={e}");
        }
        if let Some(e) = self.eta {
            s += &format!(" eta={e}");
        }
        if let Some(q) = self.q {
            s += &format!(" q={q}");
        }
        s
    }
}

/// Grid over which [`run_battery`] checks every inequality.
#[derive(Clone, Debug)]
pub struct Battery {
    pub eps: Vec<f64>,
    pub eta: Vec<f64>,
    pub q: Vec<u32>,
    pub checker: Checker,
}

/// Aggregate of a battery run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatterySummary {
    pub rows: usize,
    pub failures: usize,
    pub skipped: usize,
    pub min_slack: Option<f64>,
    pub argmin: Option<String>,
}

impl BatterySummary {
    pub fn of(rows: &[SlackRow]) -> Self {
        let mut min: Option<(f64, String)> = None;
        for r in rows {
            if let Some(s) = r.slack {
                if min.as_ref().is_none_or(|(m, _)| s < *m) {
                    min = Some((s, r.config()));
                }
            }
        }
        Self {
            rows: rows.len(),
            failures: rows.iter().filter(|r| r.status == RowStatus::Fail).count(),
            skipped: rows
                .iter()
                .filter(|r| r.status == RowStatus::Skipped)
                .count(),
            min_slack: min.as_ref().map(|m| m.0),
            argmin: min.map(|m| m.1),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

impl Battery {
    /// Rows for one code, in order: for each ε the Shannon-order checks, then
    /// each q, then each η.
    pub fn run_code(&self, code: &Code) -> Result<Vec<SlackRow>> {
        let f = BooleanFunction::from_code(code)?;
        let fn_profiles = ConditionalProfiles::compute(&f, &self.q)?;
        let shannon = marginal_entropy_profile(code, RenyiOrder::SHANNON)?;
        let renyi: Vec<SubsetProfile> = self
            .q
            .iter()
            .map(|&q| marginal_entropy_profile(code, RenyiOrder::Finite(q as f64)))
            .collect::<Result<_>>()?;
        let c = &self.checker;
        let mut rows = Vec::new();
        for &eps in &self.eps {
            rows.push(c.cor_rv_entropy_profiled(code, &f, eps, &shannon)?.into());
            rows.push(
                c.sam_entropy_profiled(&f, code.id(), eps, &fn_profiles)?
                    .into(),
            );
            for (&q, profile) in self.q.iter().zip(&renyi) {
                rows.push(c.cor_rv_profiled(code, &f, eps, q, profile)?.into());
                rows.push(
                    c.sam_norm_profiled(&f, code.id(), eps, q, &fn_profiles)?
                        .into(),
                );
            }
            for &eta in &self.eta {
                match c.check_bsc_bec(code, eps, eta) {
                    Ok(r) => rows.push(r.into()),
                    Err(Error::Hypothesis(_)) => rows.push(SlackRow {
                        inequality: Inequality::BscBec,
                        subject: code.id().to_string(),
                        n: code.n(),
                        eps: Some(eps),
                        eta: Some(eta),
                        q: None,
                        lambda: Some(1.0 - eta),
                        lhs: None,
                        rhs: None,
                        slack: None,
                        status: RowStatus::Skipped,
                    }),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(rows)
    }

    /// Runs every code in parallel; rows come back in code order.
    pub fn run(&self, codes: &[Code]) -> Result<(Vec<SlackRow>, BatterySummary)> {
        let per_code = codes
            .par_iter()
            .map(|c| self.run_code(c))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<SlackRow> = per_code.into_iter().flatten().collect();
        let summary = BatterySummary::of(&rows);
        Ok((rows, summary))
    }
}
