//! Nonnegative functions on F_2^n, their norms and entropy functional, and
//! Rényi entropies of finite distributions.
//!
//! All logarithms are base 2 and every entropy is in bits. `0 · log 0` is
//! taken to be 0 wherever it appears.

use std::fmt;
use std::str::FromStr;

use crate::bitspace::{Code, DENSE_MAX_DIM};
use crate::error::{invalid, Error, Result};

/// Tolerance for the total mass of a probability vector. Inputs within it are
/// renormalized; inputs outside it are rejected.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[inline]
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Order q ≥ 1 of a Rényi entropy, or q = ∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RenyiOrder {
    Finite(f64),
    Infinity,
}

impl RenyiOrder {
    pub const SHANNON: RenyiOrder = RenyiOrder::Finite(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_infinite() && q > 0.0 {
            Ok(RenyiOrder::Infinity)
        } else if q >= 1.0 {
            Ok(RenyiOrder::Finite(q))
        } else {
            Err(invalid(format!("Rényi order {q} is below 1")))
        }
    }

    pub fn is_shannon(&self) -> bool {
        matches!(self, RenyiOrder::Finite(q) if *q == 1.0)
    }

    pub fn value(&self) -> f64 {
        match self {
            RenyiOrder::Finite(q) => *q,
            RenyiOrder::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenyiOrder::Finite(q) => write!(f, "{q}"),
            RenyiOrder::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(RenyiOrder::Infinity),
            t => {
                let q: f64 = t
                    .parse()
                    .map_err(|e| invalid(format!("bad Rényi order {t:?}: {e}")))?;
                RenyiOrder::new(q)
            }
        }
    }
}

/// A function F_2^n → R≥0 stored densely, indexed by the integer encoding of x.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanFunction {
    n: usize,
    values: Vec<f64>,
}

impl BooleanFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > DENSE_MAX_DIM {
            return Err(Error::DimensionTooLarge {
                n,
                max: DENSE_MAX_DIM,
            });
        }
        if values.len() != 1usize << n {
            return Err(invalid(format!(
                "expected {} values for n = {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(invalid(format!(
                "function value {v} is not a finite nonnegative number"
            )));
        }
        Ok(Self { n, values })
    }

    pub(crate) fn from_vec_unchecked(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1usize << n);
        Self { n, values }
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        if n > DENSE_MAX_DIM {
            return Err(Error::DimensionTooLarge {
                n,
                max: DENSE_MAX_DIM,
            });
        }
        Self::new(n, vec![c; 1usize << n])
    }

    /// The distribution function f_X(x) = 2^n Pr[X = x] for X uniform on the code.
    pub fn from_code(code: &Code) -> Result<Self> {
        let n = code.n();
        if n > DENSE_MAX_DIM {
            return Err(Error::DimensionTooLarge {
                n,
                max: DENSE_MAX_DIM,
            });
        }
        let mass = (1u64 << n) as f64 / code.size() as f64;
        let mut values = vec![0.0; 1usize << n];
        for &w in code.words() {
            values[w as usize] = mass;
        }
        Ok(Self { n, values })
    }

    /// The distribution function of a probability vector indexed by x.
    pub fn from_distribution(n: usize, dist: &Distribution) -> Result<Self> {
        if dist.probs().len() != 1usize << n {
            return Err(invalid("distribution length must be 2^n"));
        }
        let scale = (1u64 << n) as f64;
        Self::new(n, dist.probs().iter().map(|p| p * scale).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// E_x f(x) under the uniform measure, which is also ‖f‖_1.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// ‖f‖_q = (E_x f(x)^q)^{1/q} for a finite order q ≥ 1; ‖f‖_∞ = max f.
    pub fn norm(&self, q: RenyiOrder) -> f64 {
        match q {
            RenyiOrder::Infinity => self.max(),
            RenyiOrder::Finite(q) => self.power_mean(q).powf(1.0 / q),
        }
    }

    /// log2 ‖f‖_q, computed without the intermediate 1/q root.
    pub fn log_norm(&self, q: RenyiOrder) -> f64 {
        match q {
            RenyiOrder::Infinity => self.max().log2(),
            RenyiOrder::Finite(q) => self.power_mean(q).log2() / q,
        }
    }

    fn power_mean(&self, q: f64) -> f64 {
        let sum: f64 = if q == 1.0 {
            self.values.iter().sum()
        } else if q == 2.0 {
            self.values.iter().map(|v| v * v).sum()
        } else if q.fract() == 0.0 && q <= 16.0 {
            let k = q as i32;
            self.values.iter().map(|v| v.powi(k)).sum()
        } else {
            self.values.iter().map(|v| v.powf(q)).sum()
        };
        sum / self.values.len() as f64
    }

    /// Ent[f] = E f log f − (E f) log(E f).
    pub fn ent(&self) -> f64 {
        let len = self.values.len() as f64;
        let e_flogf = self.values.iter().map(|&v| xlog2x(v)).sum::<f64>() / len;
        e_flogf - xlog2x(self.mean())
    }

    /// H_q(X) for the variable X whose distribution function is `self`, using
    /// log ‖f_X‖_q = ((q−1)/q)(n − H_q(X)) and, at q = 1, Ent[f_X] = n − H(X).
    ///
    /// Assumes mean 1.
    pub fn renyi_entropy(&self, q: RenyiOrder) -> f64 {
        let n = self.n as f64;
        let h = match q {
            RenyiOrder::Infinity => n - self.log_norm(q),
            q if q.is_shannon() => n - self.ent(),
            RenyiOrder::Finite(v) => n - v / (v - 1.0) * self.log_norm(q),
        };
        h.max(0.0)
    }
}

/// A probability vector, renormalized on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
    drift: f64,
}

impl Distribution {
    /// Accepts a nonnegative vector whose mass is within [`MASS_TOLERANCE`] of 1.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotADistribution { sum: 0.0 });
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(invalid(format!(
                "probability {p} is not a finite nonnegative number"
            )));
        }
        let sum: f64 = probs.iter().sum();
        let drift = sum - 1.0;
        if drift.abs() > MASS_TOLERANCE {
            return Err(Error::NotADistribution { sum });
        }
        if drift != 0.0 {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(Self { probs, drift })
    }

    /// Builds the distribution proportional to `weights`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::NotADistribution { sum });
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        let sum: f64 = probs.iter().sum();
        Self::new(probs.into_iter().map(|p| p / sum).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NotADistribution { sum: 0.0 });
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
            drift: 0.0,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Σp − 1 of the input before renormalization.
    pub fn drift(&self) -> f64 {
        self.drift
    }
}

/// H_q of a distribution in bits. q = 1 uses the Shannon formula directly.
pub fn renyi_entropy(dist: &Distribution, q: RenyiOrder) -> f64 {
    let p = dist.probs();
    let h = match q {
        RenyiOrder::Infinity => -p.iter().copied().fold(0.0, f64::max).log2(),
        q if q.is_shannon() => -p.iter().map(|&x| xlog2x(x)).sum::<f64>(),
        RenyiOrder::Finite(v) => {
            let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(v)).sum();
            -s.log2() / (v - 1.0)
        }
    };
    h.max(0.0)
}

/// Binary Shannon entropy h(ε).
pub fn binary_entropy(eps: f64) -> f64 {
    -xlog2x(eps) - xlog2x(1.0 - eps)
}

/// h_q(ε), the order-q Rényi entropy of a Bernoulli(ε) bit.
pub fn h_q(eps: f64, q: RenyiOrder) -> Result<f64> {
    crate::error::check_probability("eps", eps)?;
    let h = match q {
        RenyiOrder::Infinity => -eps.max(1.0 - eps).log2(),
        q if q.is_shannon() => binary_entropy(eps),
        RenyiOrder::Finite(v) => -(eps.powf(v) + (1.0 - eps).powf(v)).log2() / (v - 1.0),
    };
    Ok(h.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitspace::{make_code, CodeKind};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q2: RenyiOrder = RenyiOrder::Finite(2.0);

    fn code(kind: CodeKind) -> Code {
        make_code(kind).unwrap()
    }

    #[test]
    fn from_code_examples() {
        let f = BooleanFunction::from_code(&code(CodeKind::Single(2))).unwrap();
        assert_eq!(f.values(), &[4.0, 0.0, 0.0, 0.0]);
        let f = BooleanFunction::from_code(&code(CodeKind::FullSpace(3))).unwrap();
        assert!(f.values().iter().all(|&v| v == 1.0));
        let f = BooleanFunction::from_code(&code(CodeKind::Repetition(2))).unwrap();
        assert_eq!(f.values(), &[2.0, 0.0, 0.0, 2.0]);
        assert_eq!(f.mean(), 1.0);
    }

    #[test]
    fn norm_examples() {
        let one = BooleanFunction::constant(5, 1.0).unwrap();
        for q in [1.0, 2.0, 3.5, 7.0] {
            assert!((one.norm(RenyiOrder::Finite(q)) - 1.0).abs() < 1e-15);
        }
        let n = 6;
        let point = BooleanFunction::from_code(&code(CodeKind::Single(n))).unwrap();
        assert!((point.norm(Q2) - 2f64.powf(n as f64 / 2.0)).abs() < 1e-12);
        // direct summation: (2^-3 · 2 · 4²)^{1/2}
        let rep = BooleanFunction::from_code(&code(CodeKind::Repetition(3))).unwrap();
        let direct = (rep.values().iter().map(|v| v * v).sum::<f64>() / 8.0).sqrt();
        assert!((direct - 2.0).abs() < 1e-15);
        assert!((rep.norm(Q2) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ent_examples() {
        for c in [0.3, 1.0, 5.0] {
            assert!(BooleanFunction::constant(4, c).unwrap().ent().abs() < 1e-14);
        }
        for n in 1..=10 {
            let f = BooleanFunction::from_code(&code(CodeKind::Single(n))).unwrap();
            assert!((f.ent() - n as f64).abs() < 1e-12);
        }
        let h = BooleanFunction::from_code(&code(CodeKind::Hamming74)).unwrap();
        // direct summation: 16 points of value 8, mean 1
        let direct: f64 = h
            .values()
            .iter()
            .map(|&v| if v > 0.0 { v * v.log2() } else { 0.0 })
            .sum::<f64>()
            / 128.0;
        assert!((direct - 3.0).abs() < 1e-12);
        assert!((h.ent() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn renyi_examples() {
        for k in [1usize, 2, 5, 16] {
            let u = Distribution::uniform(k).unwrap();
            for q in [
                RenyiOrder::SHANNON,
                Q2,
                RenyiOrder::Finite(3.3),
                RenyiOrder::Infinity,
            ] {
                assert!((renyi_entropy(&u, q) - (k as f64).log2()).abs() < 1e-12);
            }
        }
        let det = Distribution::new(vec![0.0, 1.0, 0.0]).unwrap();
        for q in [RenyiOrder::SHANNON, Q2, RenyiOrder::Infinity] {
            assert_eq!(renyi_entropy(&det, q), 0.0);
        }
        // -log2(9/16 + 1/16) = 4 - log2(10)
        let p = Distribution::new(vec![0.75, 0.25]).unwrap();
        let expected = 4.0 - 10f64.log2();
        assert!((renyi_entropy(&p, Q2) - expected).abs() < 1e-14);
        assert!((expected - 0.678_071_905_112_638).abs() < 1e-14);
    }

    #[test]
    fn h_q_examples() {
        assert_eq!(h_q(0.5, RenyiOrder::SHANNON).unwrap(), 1.0);
        for q in [
            RenyiOrder::SHANNON,
            Q2,
            RenyiOrder::Finite(4.0),
            RenyiOrder::Infinity,
        ] {
            assert_eq!(h_q(0.0, q).unwrap(), 0.0);
            assert_eq!(h_q(1.0, q).unwrap(), 0.0);
            assert!((h_q(0.5, q).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((h_q(0.25, Q2).unwrap() - (4.0 - 10f64.log2())).abs() < 1e-14);
        assert!(h_q(1.5, Q2).is_err());
    }

    #[test]
    fn distribution_tolerance() {
        let d = Distribution::new(vec![0.5, 0.5 + 5e-13]).unwrap();
        assert!((d.drift() - 5e-13).abs() < 1e-15);
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(matches!(
            Distribution::new(vec![0.5, 0.51]),
            Err(Error::NotADistribution { .. })
        ));
        assert!(Distribution::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn order_parsing() {
        assert_eq!("inf".parse::<RenyiOrder>().unwrap(), RenyiOrder::Infinity);
        assert_eq!("2".parse::<RenyiOrder>().unwrap(), Q2);
        assert!("0.5".parse::<RenyiOrder>().is_err());
        assert!(RenyiOrder::new(0.99).is_err());
    }

    fn corpus() -> Vec<Code> {
        [
            CodeKind::Repetition(5),
            CodeKind::Parity(6),
            CodeKind::Hamming74,
            CodeKind::ReedMuller { r: 1, m: 3 },
            CodeKind::RandomLinear {
                n: 9,
                k: 4,
                seed: 11,
            },
            CodeKind::Single(4),
            CodeKind::FullSpace(5),
            CodeKind::Explicit(vec![
                "0011".parse().unwrap(),
                "0110".parse().unwrap(),
                "1111".parse().unwrap(),
            ]),
        ]
        .into_iter()
        .map(code)
        .collect()
    }

    #[test]
    fn ent_of_code_is_n_minus_log_size() {
        for c in corpus() {
            let f = BooleanFunction::from_code(&c).unwrap();
            assert!(
                (f.ent() - (c.n() as f64 - c.log_size())).abs() < 1e-10,
                "{}",
                c.id()
            );
        }
    }

    #[test]
    fn log_norm_matches_renyi_of_code() {
        for c in corpus() {
            let f = BooleanFunction::from_code(&c).unwrap();
            let uniform = Distribution::uniform(c.size()).unwrap();
            for q in [2.0, 3.0, 4.0] {
                let order = RenyiOrder::Finite(q);
                let lhs = f.norm(order).log2();
                let rhs = (q - 1.0) / q * (c.n() as f64 - renyi_entropy(&uniform, order));
                assert!((lhs - rhs).abs() < 1e-10, "{} q={q}", c.id());
            }
        }
    }

    #[test]
    fn function_and_distribution_entropies_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let w: Vec<f64> = (0..1 << n)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0.0
                    } else {
                        rng.gen::<f64>()
                    }
                })
                .collect();
            if w.iter().all(|&x| x == 0.0) {
                continue;
            }
            let d = Distribution::from_weights(&w).unwrap();
            let f = BooleanFunction::from_distribution(n, &d).unwrap();
            for q in [
                RenyiOrder::SHANNON,
                Q2,
                RenyiOrder::Finite(2.5),
                RenyiOrder::Infinity,
            ] {
                assert!((f.renyi_entropy(q) - renyi_entropy(&d, q)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn renyi_decreases_in_order_on_random_distributions() {
        let orders = [
            RenyiOrder::SHANNON,
            RenyiOrder::Finite(1.5),
            RenyiOrder::Finite(2.0),
            RenyiOrder::Finite(3.0),
            RenyiOrder::Finite(7.0),
            RenyiOrder::Infinity,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let k = rng.gen_range(1..=20);
            let w: Vec<f64> = (0..k).map(|_| rng.gen::<f64>().powi(3)).collect();
            let Ok(d) = Distribution::from_weights(&w) else {
                continue;
            };
            let hs: Vec<f64> = orders.iter().map(|&q| renyi_entropy(&d, q)).collect();
            for pair in hs.windows(2) {
                assert!(pair[0] >= pair[1] - 1e-12, "{hs:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn h_q_is_symmetric(eps in 0.0f64..=1.0, q in prop_oneof![Just(1.0f64), 1.0f64..10.0, Just(f64::INFINITY)]) {
            let q = RenyiOrder::new(q).unwrap();
            let a = h_q(eps, q).unwrap();
            let b = h_q(1.0 - eps, q).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0 + 1e-15).contains(&a));
        }
    }
}
