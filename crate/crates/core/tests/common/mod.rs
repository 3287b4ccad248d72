//! Brute-force oracles shared by the integration tests. None of these go
//! through the library's noise operator, subset profiles, or decoder.

#![allow(dead_code)]

use noisy_codes::bitspace::Code;

pub fn bern_weight(n: usize, w: u32, eps: f64) -> f64 {
    eps.powi(w as i32) * (1.0 - eps).powi(n as i32 - w as i32)
}

/// Pr[X + Z = y] for every y, summing over all (x, z) pairs.
pub fn sum_distribution(code: &Code, eps: f64) -> Vec<f64> {
    let n = code.n();
    let mut p = vec![0.0; 1 << n];
    let mass = 1.0 / code.size() as f64;
    for &x in code.words() {
        for z in 0..1u128 << n {
            p[(x ^ z) as usize] += mass * bern_weight(n, z.count_ones(), eps);
        }
    }
    p
}

/// Pr[X_S = a] for every a ∈ F_2^|S|, re-indexing coordinate by coordinate.
pub fn marginal_distribution(code: &Code, mask: u128) -> Vec<f64> {
    let n = code.n();
    let coords: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
    let mut p = vec![0.0; 1 << coords.len()];
    for &x in code.words() {
        let mut a = 0usize;
        for (j, &c) in coords.iter().enumerate() {
            if (x >> c) & 1 == 1 {
                a |= 1 << j;
            }
        }
        p[a] += 1.0 / code.size() as f64;
    }
    p
}

pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// H(X | Y_BSC) = Σ_y P(y) H(X | Y = y) with the posterior from Bayes' rule.
pub fn bayes_bsc(code: &Code, eps: f64) -> f64 {
    let n = code.n();
    let mut total = 0.0;
    for y in 0..1u128 << n {
        let likes: Vec<f64> = code
            .words()
            .iter()
            .map(|&x| bern_weight(n, (x ^ y).count_ones(), eps))
            .collect();
        let sum: f64 = likes.iter().sum();
        if sum == 0.0 {
            continue;
        }
        let posterior: Vec<f64> = likes.iter().map(|l| l / sum).collect();
        total += sum / code.size() as f64 * shannon(&posterior);
    }
    total
}

/// H(X | Y_BEC) = Σ over erasure patterns of Pr[pattern] · H(X | revealed bits),
/// where H(X | X_S = a) = log2 #{codewords projecting to a}.
pub fn erasure_enumeration_bec(code: &Code, eta: f64) -> f64 {
    let n = code.n();
    let mut total = 0.0;
    for revealed in 0..1u128 << n {
        let k = revealed.count_ones() as i32;
        let weight = (1.0 - eta).powi(k) * eta.powi(n as i32 - k);
        if weight == 0.0 {
            continue;
        }
        let mut counts = std::collections::HashMap::new();
        for &x in code.words() {
            *counts.entry(x & revealed).or_insert(0usize) += 1;
        }
        let h: f64 = counts
            .values()
            .map(|&c| c as f64 / code.size() as f64 * (c as f64).log2())
            .sum();
        total += weight * h;
    }
    total
}

/// Pr[wt(Z) ≥ radius] for Z ~ Bernoulli(ε)^n.
pub fn binomial_tail(n: usize, eps: f64, radius: f64) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0f64;
    for w in 0..=n {
        if w > 0 {
            binom = binom * (n - w + 1) as f64 / w as f64;
        }
        if w as f64 >= radius {
            total += binom * bern_weight(n, w as u32, eps);
        }
    }
    total
}

/// Exact decoding error probability of the radius decoder with list cap k,
/// by enumerating every (x, z) pair. Lists are ordered by (distance, encoding).
pub fn exact_decoding_error(code: &Code, eps: f64, radius: f64, cap: usize) -> f64 {
    let n = code.n();
    let mut err = 0.0;
    for &x in code.words() {
        for z in 0..1u128 << n {
            let y = x ^ z;
            let mut hits: Vec<(u32, u128)> = code
                .words()
                .iter()
                .map(|&c| ((c ^ y).count_ones(), c))
                .filter(|&(d, _)| (d as f64) < radius)
                .collect();
            hits.sort();
            hits.truncate(cap);
            if !hits.iter().any(|&(_, c)| c == x) {
                err += bern_weight(n, z.count_ones(), eps) / code.size() as f64;
            }
        }
    }
    err
}

/// Records a pass/fail line per named check and panics at the end if any failed.
#[derive(Default)]
pub struct Report {
    failures: Vec<String>,
}

impl Report {
    pub fn check(&mut self, name: &str, ok: bool, detail: impl AsRef<str>) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", detail.as_ref());
        if !ok {
            self.failures.push(name.to_string());
        }
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}
