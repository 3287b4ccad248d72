//! Radius-based list decoding over BSC(ε).
//!
//! The decoder returns every codeword x with wt(x + y) < εn + n^{3/4},
//! closest first, truncated to the list cap k. A transmission can fail only
//! when the noise itself is that heavy or when the list was truncated; the
//! simulation counts both causes and any failure explained by neither.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitspace::{BitVector, Code, DENSE_MAX_DIM};
use crate::boolfn::{binary_entropy, BooleanFunction};
use crate::channels::{bernoulli_pattern, noise_operator_fast, trial_rng};
use crate::entropy_analysis::{Estimate, Mode, EXACT_SUBSET_MAX_DIM};
use crate::error::{check_probability, invalid, Error, Result};

/// Decoder parameters for blocklength n.
///
/// For ε > 1/2 the decoder complements y first and works with 1 − ε, so the
/// radius is always built from min(ε, 1 − ε).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoderConfig {
    n: usize,
    eps: f64,
    delta: f64,
    radius: f64,
    list_cap: usize,
}

impl DecoderConfig {
    pub fn new(n: usize, eps: f64, delta: f64, list_cap: usize) -> Result<Self> {
        check_probability("eps", eps)?;
        if eps == 0.5 {
            return Err(invalid(
                "eps = 1/2 makes every word a candidate; decoding is vacuous",
            ));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(invalid(format!("delta must be positive, got {delta}")));
        }
        if list_cap == 0 {
            return Err(invalid("list cap must be at least 1"));
        }
        if n == 0 {
            return Err(invalid("blocklength must be at least 1"));
        }
        let effective = eps.min(1.0 - eps);
        let radius = effective * n as f64 + (n as f64).powf(0.75);
        Ok(Self {
            n,
            eps,
            delta,
            radius,
            list_cap,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// εn + n^{3/4}; a candidate must lie at distance strictly below it.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn list_cap(&self) -> usize {
        self.list_cap
    }

    fn relabels(&self) -> bool {
        self.eps > 0.5
    }

    fn within(&self, distance: u32) -> bool {
        (distance as f64) < self.radius
    }

    /// exp2((R − (1 − h(ε)) + δ) n), the count above which y is δ-likely.
    pub fn likely_threshold(&self, rate: f64) -> f64 {
        likely_exponent(rate, self.eps, self.delta, self.n).exp2()
    }

    fn check_code(&self, code: &Code) -> Result<()> {
        if code.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: code.n(),
            });
        }
        Ok(())
    }
}

fn likely_exponent(rate: f64, eps: f64, delta: f64, n: usize) -> f64 {
    (rate - (1.0 - binary_entropy(eps)) + delta) * n as f64
}

/// Decoder output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedList {
    /// Candidates by increasing distance, ties by increasing encoding.
    pub list: Vec<BitVector>,
    /// More than `list_cap` codewords were within the radius.
    pub truncated: bool,
    /// Number of codewords within the radius before truncation.
    pub qualifying: usize,
}

/// All codewords within the radius of y, closest first, at most `list_cap`.
pub fn decode(y: &BitVector, code: &Code, cfg: &DecoderConfig) -> Result<DecodedList> {
    cfg.check_code(code)?;
    if y.dim() != cfg.n {
        return Err(Error::DimensionMismatch {
            left: cfg.n,
            right: y.dim(),
        });
    }
    let target = if cfg.relabels() { y.complement() } else { *y };
    let mut hits: Vec<(u32, u128)> = code
        .words()
        .iter()
        .map(|&w| ((w ^ target.bits()).count_ones(), w))
        .filter(|&(d, _)| cfg.within(d))
        .collect();
    hits.sort_unstable();
    let qualifying = hits.len();
    let truncated = qualifying > cfg.list_cap;
    hits.truncate(cfg.list_cap);
    Ok(DecodedList {
        list: hits
            .into_iter()
            .map(|(_, w)| BitVector::new(cfg.n, w).expect("codeword fits"))
            .collect(),
        truncated,
        qualifying,
    })
}

/// Number of codewords within the radius of y, and whether that count
/// exceeds the δ-likely threshold.
pub fn is_delta_likely(y: &BitVector, code: &Code, cfg: &DecoderConfig) -> Result<(bool, usize)> {
    cfg.check_code(code)?;
    if y.dim() != cfg.n {
        return Err(Error::DimensionMismatch {
            left: cfg.n,
            right: y.dim(),
        });
    }
    let count = qualifying_count(y.bits(), code, cfg);
    Ok((count as f64 > cfg.likely_threshold(code.rate()), count))
}

fn qualifying_count(y: u128, code: &Code, cfg: &DecoderConfig) -> usize {
    let target = if cfg.relabels() {
        !y & crate::bitspace::low_mask(cfg.n)
    } else {
        y
    };
    code.words()
        .iter()
        .filter(|&&w| cfg.within((w ^ target).count_ones()))
        .count()
}

/// p_n(δ) = Pr[Y is δ-likely] for Y = X + Z, X uniform on the code.
pub fn likely_probability(code: &Code, cfg: &DecoderConfig, mode: Mode) -> Result<Estimate> {
    cfg.check_code(code)?;
    let threshold = cfg.likely_threshold(code.rate());
    match mode {
        Mode::Exact => {
            let n = code.n();
            if n > EXACT_SUBSET_MAX_DIM.min(DENSE_MAX_DIM) {
                return Err(Error::DimensionTooLarge {
                    n,
                    max: EXACT_SUBSET_MAX_DIM,
                });
            }
            let out = noise_operator_fast(&BooleanFunction::from_code(code)?, cfg.eps)?;
            let scale = 1.0 / (1u64 << n) as f64;
            let terms: Vec<f64> = out
                .values()
                .par_iter()
                .enumerate()
                .map(|(y, &density)| {
                    if qualifying_count(y as u128, code, cfg) as f64 > threshold {
                        density * scale
                    } else {
                        0.0
                    }
                })
                .collect();
            Ok(Estimate::exact(terms.iter().sum::<f64>().min(1.0)))
        }
        Mode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(invalid("Monte Carlo needs at least one trial"));
            }
            let samples = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let x = code.words()[rng.gen_range(0..code.size())];
                    let z = bernoulli_pattern(code.n(), cfg.eps, &mut rng)?;
                    let likely = qualifying_count(x ^ z, code, cfg) as f64 > threshold;
                    Ok(if likely { 1.0 } else { 0.0 })
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(Estimate::from_samples(&samples))
        }
    }
}

/// ceil(exp2((R − (1 − h(ε)) + δ) n)), at least 1, saturating at u64::MAX.
pub fn theoretical_list_size(rate: f64, eps: f64, delta: f64, n: usize) -> Result<u64> {
    check_probability("eps", eps)?;
    if !rate.is_finite() || !delta.is_finite() {
        return Err(invalid("rate and delta must be finite"));
    }
    let value = likely_exponent(rate, eps, delta, n).exp2().ceil();
    Ok(if value >= u64::MAX as f64 {
        u64::MAX
    } else {
        (value as u64).max(1)
    })
}

/// The list-size lower bound exponent for a decoder that succeeds with
/// probability at least 3/4.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListSizeBound {
    /// log2 of the least admissible list size:
    /// (R − (1 − h(ε)))n − h(ε)n^{3/4} − 3.
    pub exponent: f64,
    /// Whether 0 < ε < 1/2 and n > 10/ε², the range where the bound is proven.
    pub in_hypothesis: bool,
}

pub fn rs22_lower_bound(rate: f64, eps: f64, n: usize) -> Result<ListSizeBound> {
    check_probability("eps", eps)?;
    let h = binary_entropy(eps);
    let nf = n as f64;
    let exponent = (rate - (1.0 - h)) * nf - h * nf.powf(0.75) - 3.0;
    let in_hypothesis = eps > 0.0 && eps < 0.5 && nf > 10.0 / (eps * eps);
    Ok(ListSizeBound {
        exponent,
        in_hypothesis,
    })
}

/// What happened in one simulated transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub success: bool,
    pub truncated: bool,
    /// wt(Z) ≥ radius (after relabeling when ε > 1/2).
    pub heavy_noise: bool,
    pub list_size: usize,
}

impl TrialOutcome {
    /// A failure with neither heavy noise nor truncation. Never expected.
    pub fn unexplained(&self) -> bool {
        !self.success && !self.heavy_noise && !self.truncated
    }
}

/// Trial `t` of a seeded simulation.
pub fn simulate_trial(
    code: &Code,
    cfg: &DecoderConfig,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome> {
    cfg.check_code(code)?;
    let mut rng = trial_rng(seed, trial);
    let x = code.words()[rng.gen_range(0..code.size())];
    let z = bernoulli_pattern(code.n(), cfg.eps, &mut rng)?;
    Ok(classify(x, x ^ z, z, code, cfg))
}

/// Decodes y and reports whether x made the list, without materializing it.
/// x is listed iff it qualifies and fewer than k qualifying codewords precede
/// it in (distance, encoding) order.
fn classify(x: u128, y: u128, z: u128, code: &Code, cfg: &DecoderConfig) -> TrialOutcome {
    let mask = crate::bitspace::low_mask(cfg.n);
    let (target, z_eff) = if cfg.relabels() {
        (!y & mask, !z & mask)
    } else {
        (y, z)
    };
    let dx = (x ^ target).count_ones();
    let x_qualifies = cfg.within(dx);
    let mut qualifying = 0usize;
    let mut ahead = 0usize;
    for &w in code.words() {
        let d = (w ^ target).count_ones();
        if cfg.within(d) {
            qualifying += 1;
            if (d, w) < (dx, x) {
                ahead += 1;
            }
        }
    }
    TrialOutcome {
        success: x_qualifies && ahead < cfg.list_cap,
        truncated: qualifying > cfg.list_cap,
        heavy_noise: !cfg.within(z_eff.count_ones()),
        list_size: qualifying.min(cfg.list_cap),
    }
}

/// Aggregate results of a decoding simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeTrialStats {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub truncations: u64,
    pub heavy_noise: u64,
    pub unexplained_failures: u64,
    pub error_rate: f64,
    pub std_err: f64,
    pub list_size_min: u64,
    pub list_size_mean: f64,
    pub list_size_max: u64,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    trials: u64,
    successes: u64,
    truncations: u64,
    heavy: u64,
    unexplained: u64,
    list_sum: u64,
    list_min: u64,
    list_max: u64,
}

impl Tally {
    fn of(o: &TrialOutcome) -> Self {
        Self {
            trials: 1,
            successes: o.success as u64,
            truncations: o.truncated as u64,
            heavy: o.heavy_noise as u64,
            unexplained: o.unexplained() as u64,
            list_sum: o.list_size as u64,
            list_min: o.list_size as u64,
            list_max: o.list_size as u64,
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.trials == 0 {
            return b;
        }
        if b.trials == 0 {
            return a;
        }
        Self {
            trials: a.trials + b.trials,
            successes: a.successes + b.successes,
            truncations: a.truncations + b.truncations,
            heavy: a.heavy + b.heavy,
            unexplained: a.unexplained + b.unexplained,
            list_sum: a.list_sum + b.list_sum,
            list_min: a.list_min.min(b.list_min),
            list_max: a.list_max.max(b.list_max),
        }
    }
}

/// Sends `trials` uniformly random codewords through BSC(ε) and list-decodes
/// each output. Counters are integers, so the result does not depend on how
/// trials are spread over threads.
pub fn simulate(
    code: &Code,
    cfg: &DecoderConfig,
    trials: u64,
    seed: u64,
) -> Result<DecodeTrialStats> {
    cfg.check_code(code)?;
    if trials == 0 {
        return Err(invalid("simulation needs at least one trial"));
    }
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| simulate_trial(code, cfg, seed, t).map(|o| Tally::of(&o)))
        .try_reduce(Tally::default, |a, b| Ok(Tally::merge(a, b)))?;
    let failures = tally.trials - tally.successes;
    let error_rate = failures as f64 / tally.trials as f64;
    Ok(DecodeTrialStats {
        trials: tally.trials,
        successes: tally.successes,
        failures,
        truncations: tally.truncations,
        heavy_noise: tally.heavy,
        unexplained_failures: tally.unexplained,
        error_rate,
        std_err: (error_rate * (1.0 - error_rate) / tally.trials as f64).sqrt(),
        list_size_min: tally.list_min,
        list_size_mean: tally.list_sum as f64 / tally.trials as f64,
        list_size_max: tally.list_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitspace::{make_code, CodeKind};

    fn code(kind: CodeKind) -> Code {
        make_code(kind).unwrap()
    }

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(DecoderConfig::new(7, 0.5, 0.1, 1).is_err());
        assert!(DecoderConfig::new(7, 0.1, 0.0, 1).is_err());
        assert!(DecoderConfig::new(7, 0.1, 0.1, 0).is_err());
        assert!(DecoderConfig::new(7, 1.1, 0.1, 1).is_err());
        let cfg = DecoderConfig::new(16, 0.25, 0.1, 3).unwrap();
        assert_eq!(cfg.radius(), 4.0 + 8.0);
        let flipped = DecoderConfig::new(16, 0.75, 0.1, 3).unwrap();
        assert_eq!(flipped.radius(), cfg.radius());
    }

    #[test]
    fn decode_examples() {
        let rep = code(CodeKind::Repetition(3));
        let cfg = DecoderConfig::new(3, 0.1, 0.05, 4).unwrap();
        assert!((cfg.radius() - (0.3 + 3f64.powf(0.75))).abs() < 1e-15);
        let out = decode(&bv("000"), &rep, &cfg).unwrap();
        assert_eq!(out.list, vec![bv("000")]);
        assert!(!out.truncated);

        let h = code(CodeKind::Hamming74);
        let cfg0 = DecoderConfig::new(7, 0.0, 0.05, 1).unwrap();
        for c in h.codewords() {
            assert_eq!(decode(&c, &h, &cfg0).unwrap().list[0], c);
        }
    }

    #[test]
    fn decode_hamming_matches_scan() {
        let h = code(CodeKind::Hamming74);
        let cfg = DecoderConfig::new(7, 0.1, 0.05, 16).unwrap();
        let y = bv("1100000");
        // radius 0.7 + 7^0.75 ≈ 5.00; scan all 16 codewords
        let mut expected: Vec<(usize, BitVector)> = h
            .codewords()
            .filter_map(|c| {
                let d = c.distance(&y).unwrap();
                ((d as f64) < cfg.radius()).then_some((d, c))
            })
            .collect();
        expected.sort();
        let out = decode(&y, &h, &cfg).unwrap();
        assert_eq!(
            out.list,
            expected.into_iter().map(|(_, c)| c).collect::<Vec<_>>()
        );
        assert_eq!(out.qualifying, out.list.len());
    }

    #[test]
    fn truncation_keeps_closest() {
        let full = code(CodeKind::FullSpace(4));
        let cfg = DecoderConfig::new(4, 0.2, 0.1, 3).unwrap();
        let out = decode(&bv("0000"), &full, &cfg).unwrap();
        assert!(out.truncated);
        assert_eq!(out.list, vec![bv("0000"), bv("1000"), bv("0100")]);
    }

    #[test]
    fn relabeling_for_heavy_crossover() {
        let rep = code(CodeKind::Repetition(5));
        let cfg = DecoderConfig::new(5, 0.9, 0.1, 1).unwrap();
        // a nearly complemented 00000 decodes back to 00000
        let out = decode(&bv("11101"), &rep, &cfg).unwrap();
        assert_eq!(out.list[0], bv("00000"));
    }

    #[test]
    fn classify_agrees_with_decode() {
        let c = code(CodeKind::RandomLinear {
            n: 10,
            k: 5,
            seed: 9,
        });
        for (eps, cap) in [(0.1, 1), (0.2, 2), (0.3, 4), (0.8, 2)] {
            let cfg = DecoderConfig::new(10, eps, 0.1, cap).unwrap();
            for t in 0..300 {
                let mut rng = trial_rng(77, t);
                let x = c.words()[rng.gen_range(0..c.size())];
                let z = bernoulli_pattern(10, eps, &mut rng).unwrap();
                let y = BitVector::new(10, x ^ z).unwrap();
                let out = decode(&y, &c, &cfg).unwrap();
                let o = classify(x, x ^ z, z, &c, &cfg);
                assert_eq!(o.success, out.list.iter().any(|v| v.bits() == x));
                assert_eq!(o.truncated, out.truncated);
                assert_eq!(o.list_size, out.list.len());
                assert!(!o.unexplained());
            }
        }
    }

    #[test]
    fn list_size_formula_edges() {
        for n in [1, 10, 100] {
            for eps in [0.05, 0.11, 0.3] {
                let r = 1.0 - binary_entropy(eps);
                assert_eq!(theoretical_list_size(r, eps, 0.0, n).unwrap(), 1);
                assert_eq!(theoretical_list_size(r - 0.2, eps, 0.1, n).unwrap(), 1);
            }
        }
        assert_eq!(theoretical_list_size(1.0, 0.5, 1.0, 100).unwrap(), u64::MAX);
        let a = theoretical_list_size(0.6, 0.1, 0.05, 40).unwrap();
        let b = theoretical_list_size(0.6, 0.1, 0.10, 40).unwrap();
        let c = theoretical_list_size(0.7, 0.1, 0.10, 40).unwrap();
        assert!(a <= b && b <= c);
    }

    #[test]
    fn rs22_edges() {
        let eps = 0.2;
        let h = binary_entropy(eps);
        for n in [10, 300] {
            let b = rs22_lower_bound(1.0 - h, eps, n).unwrap();
            assert!((b.exponent - (-h * (n as f64).powf(0.75) - 3.0)).abs() < 1e-12);
        }
        assert!(!rs22_lower_bound(0.5, 0.2, 100).unwrap().in_hypothesis);
        assert!(rs22_lower_bound(0.5, 0.2, 251).unwrap().in_hypothesis);
        assert!(!rs22_lower_bound(0.5, 0.0, 1000).unwrap().in_hypothesis);
        let lo = rs22_lower_bound(0.3, 0.2, 64).unwrap().exponent;
        let hi = rs22_lower_bound(0.4, 0.2, 64).unwrap().exponent;
        assert!(hi > lo);
    }

    #[test]
    fn delta_likely_examples() {
        let single = code(CodeKind::Single(6));
        let cfg = DecoderConfig::new(6, 0.2, 0.1, 1).unwrap();
        assert!(cfg.likely_threshold(single.rate()) < 1.0);
        for y in 0..64u128 {
            let (_, count) =
                is_delta_likely(&BitVector::new(6, y).unwrap(), &single, &cfg).unwrap();
            assert!(count <= 1);
        }
        let big = DecoderConfig::new(6, 0.2, 2.0, 1).unwrap();
        assert!(big.likely_threshold(0.0) >= 1.0);
        for y in 0..64u128 {
            assert!(
                !is_delta_likely(&BitVector::new(6, y).unwrap(), &single, &big)
                    .unwrap()
                    .0
            );
        }

        let rep = code(CodeKind::Repetition(3));
        let cfg = DecoderConfig::new(3, 0.1, 0.01, 1).unwrap();
        assert_eq!(is_delta_likely(&bv("000"), &rep, &cfg).unwrap().1, 1);
    }

    #[test]
    fn likely_probability_edges() {
        let h = code(CodeKind::Hamming74);
        let huge = DecoderConfig::new(7, 0.1, 10.0, 1).unwrap();
        assert_eq!(
            likely_probability(&h, &huge, Mode::Exact).unwrap().value,
            0.0
        );

        // ε = 0 with threshold below 1: X itself always qualifies.
        let cfg = DecoderConfig::new(7, 0.0, 0.1, 1).unwrap();
        assert!(cfg.likely_threshold(h.rate()) < 1.0);
        assert!((likely_probability(&h, &cfg, Mode::Exact).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_never_fails() {
        let c = code(CodeKind::ReedMuller { r: 1, m: 4 });
        let cfg = DecoderConfig::new(16, 0.0, 0.1, 1).unwrap();
        let s = simulate(&c, &cfg, 2000, 4).unwrap();
        assert_eq!(s.error_rate, 0.0);
        assert_eq!(s.successes, 2000);
    }

    #[test]
    fn simulation_is_deterministic() {
        let c = code(CodeKind::Hamming74);
        let cfg = DecoderConfig::new(7, 0.2, 0.1, 2).unwrap();
        let a = simulate(&c, &cfg, 5000, 12).unwrap();
        let b = simulate(&c, &cfg, 5000, 12).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.successes + a.failures, a.trials);
        assert_eq!(a.unexplained_failures, 0);
    }
}
