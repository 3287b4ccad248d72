//! Conditional and marginal entropies of a uniformly random codeword sent
//! over BSC(ε) and BEC(η), exact or by Monte Carlo.
//!
//! The BSC conditional entropy goes through the chain rule
//! H(X|Y) = H(X) + n·h(ε) − H(X+Z), with H(X+Z) read off Ent[T_ε f_X].
//! The BEC conditional entropy goes through E_{S∼1−η} H(X_S) = H(X) − H(X|Y).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitspace::{gather_bits, Code, SubsetMask, XorBasis, DENSE_MAX_DIM};
use crate::boolfn::{
    binary_entropy, h_q, renyi_entropy, BooleanFunction, Distribution, RenyiOrder,
};
use crate::channels::{noise_operator_fast, sample_subset, trial_rng};
use crate::error::{check_probability, invalid, Error, Result};

/// Largest n for which expectations over all 2^n subsets are computed exactly.
pub const EXACT_SUBSET_MAX_DIM: usize = 20;

/// A noise operator implementation, injectable so that checks can be run
/// against a deliberately broken operator.
pub type NoiseFn = fn(&BooleanFunction, f64) -> Result<BooleanFunction>;

/// How an expectation is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

/// A value with its Monte Carlo standard error, when sampled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: Option<f64>,
    pub trials: Option<u64>,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_err: None,
            trials: None,
        }
    }

    /// Mean and standard error of the mean. Summation follows slice order.
    pub fn from_samples(samples: &[f64]) -> Self {
        let t = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / t;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        Self {
            value: mean,
            std_err: Some((var / t).sqrt()),
            trials: Some(samples.len() as u64),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.std_err.is_none()
    }
}

fn check_exact_cap(n: usize) -> Result<()> {
    if n > EXACT_SUBSET_MAX_DIM {
        Err(Error::DimensionTooLarge {
            n,
            max: EXACT_SUBSET_MAX_DIM,
        })
    } else {
        Ok(())
    }
}

/// H(X) for X uniform on the code.
pub fn code_entropy(code: &Code) -> f64 {
    code.log_size()
}

/// H_q(X_S) computed by projecting every codeword and counting multiplicities.
pub fn marginal_entropy_by_counting(
    code: &Code,
    subset: &SubsetMask,
    q: RenyiOrder,
) -> Result<f64> {
    if subset.dim() != code.n() {
        return Err(Error::DimensionMismatch {
            left: code.n(),
            right: subset.dim(),
        });
    }
    Ok(projected_entropy(code.words(), subset.mask(), q))
}

fn projected_entropy(words: &[u128], mask: u128, q: RenyiOrder) -> f64 {
    let mut proj: Vec<u128> = words.iter().map(|&w| gather_bits(w, mask)).collect();
    proj.sort_unstable();
    let mut counts = Vec::new();
    let mut i = 0;
    while i < proj.len() {
        let j = i + proj[i..].iter().take_while(|&&v| v == proj[i]).count();
        counts.push((j - i) as f64);
        i = j;
    }
    let total = words.len() as f64;
    let dist = Distribution::new(counts.into_iter().map(|c| c / total).collect())
        .expect("multiplicities form a distribution");
    renyi_entropy(&dist, q)
}

/// H_q(X_S) for X uniform on the code. For a linear code the projection is
/// uniform on a subspace, so every order gives the rank of the generator's
/// columns in S.
pub fn marginal_entropy(code: &Code, subset: &SubsetMask, q: RenyiOrder) -> Result<f64> {
    if subset.dim() != code.n() {
        return Err(Error::DimensionMismatch {
            left: code.n(),
            right: subset.dim(),
        });
    }
    match code.generator() {
        Some(rows) => {
            let restricted: Vec<u128> = rows.iter().map(|&r| r & subset.mask()).collect();
            Ok(crate::bitspace::rank_gf2(&restricted) as f64)
        }
        None => Ok(projected_entropy(code.words(), subset.mask(), q)),
    }
}

/// Per-size sums Σ_{|S|=k} φ(S) of a subset functional φ. The expectation
/// over S ∼ λ is then Σ_k λ^k (1−λ)^{n−k} sums[k].
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetProfile {
    sums: Vec<f64>,
}

impl SubsetProfile {
    pub fn from_sums(sums: Vec<f64>) -> Self {
        Self { sums }
    }

    pub fn n(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// E_{S∼λ} φ(S).
    pub fn expectation(&self, lambda: f64) -> f64 {
        let n = self.n() as i32;
        self.sums
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let k = k as i32;
                lambda.powi(k) * (1.0 - lambda).powi(n - k) * s
            })
            .sum()
    }
}

/// Profile of S ↦ H_q(X_S) over all 2^n subsets.
pub fn marginal_entropy_profile(code: &Code, q: RenyiOrder) -> Result<SubsetProfile> {
    let n = code.n();
    check_exact_cap(n)?;
    match code.generator() {
        Some(rows) => Ok(rank_profile(n, rows)),
        None => {
            let values: Vec<f64> = (0..1u64 << n)
                .into_par_iter()
                .map(|mask| projected_entropy(code.words(), mask as u128, q))
                .collect();
            let mut sums = vec![0.0; n + 1];
            for (mask, v) in values.iter().enumerate() {
                sums[mask.count_ones() as usize] += v;
            }
            Ok(SubsetProfile::from_sums(sums))
        }
    }
}

/// Σ_{|S|=k} rank(G_S) by depth-first search over subsets with an incremental
/// column basis.
fn rank_profile(n: usize, rows: &[u128]) -> SubsetProfile {
    let columns: Vec<u128> = (0..n)
        .map(|j| {
            rows.iter()
                .enumerate()
                .filter(|(_, &r)| (r >> j) & 1 == 1)
                .fold(0u128, |acc, (i, _)| acc | (1u128 << i))
        })
        .collect();
    let mut counts = vec![vec![0u64; n + 1]; n + 1];

    fn walk(cols: &[u128], size: usize, basis: &XorBasis, counts: &mut [Vec<u64>]) {
        match cols.split_first() {
            None => counts[size][basis.rank()] += 1,
            Some((&c, rest)) => {
                walk(rest, size, basis, counts);
                let mut with = basis.clone();
                with.insert(c);
                walk(rest, size + 1, &with, counts);
            }
        }
    }
    walk(&columns, 0, &XorBasis::default(), &mut counts);

    let sums = counts
        .iter()
        .map(|by_rank| {
            by_rank
                .iter()
                .enumerate()
                .map(|(r, &c)| (r as u64 * c) as f64)
                .sum()
        })
        .collect();
    SubsetProfile::from_sums(sums)
}

/// E_{S∼λ} H_q(X_S).
pub fn subset_entropy_expectation(
    code: &Code,
    lambda: f64,
    q: RenyiOrder,
    mode: Mode,
) -> Result<Estimate> {
    check_probability("lambda", lambda)?;
    match mode {
        Mode::Exact => Ok(Estimate::exact(
            marginal_entropy_profile(code, q)?.expectation(lambda),
        )),
        Mode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(invalid("Monte Carlo needs at least one trial"));
            }
            let samples = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let s = sample_subset(lambda, code.n(), &mut rng)?;
                    marginal_entropy(code, &s, q)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(Estimate::from_samples(&samples))
        }
    }
}

/// H(X + Z) where Z is BSC(ε) noise, via Ent[T_ε f_X] = n − H(X+Z).
pub fn output_entropy_bsc(code: &Code, eps: f64, noise: NoiseFn) -> Result<f64> {
    let f = BooleanFunction::from_code(code)?;
    let t = noise(&f, eps)?;
    Ok(code.n() as f64 - t.ent())
}

/// H(X | Y_BSC) = H(X) + n·h(ε) − H(X+Z).
pub fn cond_entropy_bsc(code: &Code, eps: f64) -> Result<f64> {
    cond_entropy_bsc_with(code, eps, noise_operator_fast)
}

pub fn cond_entropy_bsc_with(code: &Code, eps: f64, noise: NoiseFn) -> Result<f64> {
    check_probability("eps", eps)?;
    let h_y = output_entropy_bsc(code, eps, noise)?;
    Ok(code_entropy(code) + code.n() as f64 * binary_entropy(eps) - h_y)
}

/// H(X | Y_BEC) = H(X) − E_{S∼1−η} H(X_S).
pub fn cond_entropy_bec(code: &Code, eta: f64, mode: Mode) -> Result<Estimate> {
    check_probability("eta", eta)?;
    let e = subset_entropy_expectation(code, 1.0 - eta, RenyiOrder::SHANNON, mode)?;
    Ok(Estimate {
        value: code_entropy(code) - e.value,
        ..e
    })
}

/// One row of entropy quantities for a (code, ε, η, q) configuration.
///
/// `lambda` is the subset density used for `e_s_hq_xs`: an explicit value if
/// one was requested, else 1 − h_q(ε) when ε is given, else 1 − η.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub code: String,
    pub n: usize,
    pub log_size: f64,
    pub rate: f64,
    pub eps: Option<f64>,
    pub eta: Option<f64>,
    pub q: String,
    pub lambda: Option<f64>,
    pub h_x: f64,
    pub h_x_given_ybsc: Option<f64>,
    pub h_x_given_ybec: Option<f64>,
    /// H(X|Y_BEC) / n, the finite-n gap to BEC capacity.
    pub bec_gap_per_n: Option<f64>,
    pub e_s_hq_xs: Option<f64>,
    pub method: String,
    pub trials: Option<u64>,
    pub std_err: Option<f64>,
}

/// Fills an [`EntropyReport`]. Quantities are exact whenever the size caps
/// allow; otherwise `fallback` (a Monte Carlo mode) is used for the subset
/// expectations and the BSC field is left empty past the dense cap.
pub fn entropy_report(
    code: &Code,
    eps: Option<f64>,
    eta: Option<f64>,
    q: RenyiOrder,
    lambda: Option<f64>,
    fallback: Option<Mode>,
) -> Result<EntropyReport> {
    let n = code.n();
    let mode = if n <= EXACT_SUBSET_MAX_DIM {
        Mode::Exact
    } else {
        fallback.filter(|m| *m != Mode::Exact).ok_or_else(|| {
            invalid(format!("n = {n} exceeds the exact cap {EXACT_SUBSET_MAX_DIM}; a Monte Carlo seed is required"))
        })?
    };
    let mut stderr: Option<f64> = None;
    let mut trials = None;
    let mut note = |e: &Estimate| {
        if let Some(se) = e.std_err {
            stderr = Some(stderr.map_or(se, |s: f64| s.max(se)));
            trials = e.trials;
        }
    };

    let h_x_given_ybsc = match eps {
        Some(eps) if n <= DENSE_MAX_DIM => Some(cond_entropy_bsc(code, eps)?),
        Some(eps) => {
            check_probability("eps", eps)?;
            None
        }
        None => None,
    };
    let h_x_given_ybec = match eta {
        Some(eta) => {
            let e = cond_entropy_bec(code, eta, mode)?;
            note(&e);
            Some(e.value)
        }
        None => None,
    };
    let lambda = match (lambda, eps, eta) {
        (Some(l), _, _) => {
            check_probability("lambda", l)?;
            Some(l)
        }
        (None, Some(eps), _) => Some(1.0 - h_q(eps, q)?),
        (None, None, Some(eta)) => Some(1.0 - eta),
        (None, None, None) => None,
    };
    let e_s_hq_xs = match lambda {
        Some(l) => {
            let e = subset_entropy_expectation(code, l.clamp(0.0, 1.0), q, mode)?;
            note(&e);
            Some(e.value)
        }
        None => None,
    };
    Ok(EntropyReport {
        code: code.id().to_string(),
        n,
        log_size: code.log_size(),
        rate: code.rate(),
        eps,
        eta,
        q: q.to_string(),
        lambda,
        h_x: code_entropy(code),
        h_x_given_ybsc,
        h_x_given_ybec,
        bec_gap_per_n: h_x_given_ybec.map(|h| h / n as f64),
        e_s_hq_xs,
        method: if stderr.is_some() {
            "monte_carlo"
        } else {
            "exact"
        }
        .to_string(),
        trials,
        std_err: stderr,
    })
}
