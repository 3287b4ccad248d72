//! The noise operator, coordinate-subset conditional expectations, and
//! samplers for transmission over BSC(ε) and BEC(η).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitspace::{gather_bits, BitVector, SubsetMask};
use crate::boolfn::BooleanFunction;
use crate::error::{check_probability, Error, Result};

/// The generator behind every stochastic operation in the crate.
pub type SimRng = ChaCha8Rng;

/// Generator for one trial of a simulation. Trial `t` always draws from the
/// same stream regardless of how trials are spread over threads.
pub fn trial_rng(seed: u64, trial: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Channel parameters: BSC crossover ε, BEC erasure η, subset density λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub eps: f64,
    pub eta: f64,
    pub lambda: f64,
}

impl ChannelParams {
    pub fn new(eps: f64, eta: f64, lambda: f64) -> Result<Self> {
        check_probability("eps", eps)?;
        check_probability("eta", eta)?;
        check_probability("lambda", lambda)?;
        Ok(Self { eps, eta, lambda })
    }

    /// λ = 1 − η, the density of revealed coordinates of BEC(η).
    pub fn bec_linked(eps: f64, eta: f64) -> Result<Self> {
        Self::new(eps, eta, 1.0 - eta)
    }

    /// λ = (1 − 2ε)².
    pub fn entropy_linked(eps: f64, eta: f64) -> Result<Self> {
        Self::new(eps, eta, (1.0 - 2.0 * eps).powi(2))
    }

    /// The hypothesis 4ε(1−ε) ≥ η under which BSC(ε) is compared with BEC(η).
    pub fn bsc_dominates_bec(&self) -> bool {
        4.0 * self.eps * (1.0 - self.eps) >= self.eta - 1e-12
    }
}

/// T_ε f(x) = Σ_y ε^|y| (1−ε)^{n−|y|} f(x+y), evaluated straight from the
/// definition in O(4^n).
pub fn noise_operator(f: &BooleanFunction, eps: f64) -> Result<BooleanFunction> {
    check_probability("eps", eps)?;
    let n = f.n();
    let weights: Vec<f64> = (0..=n as i32)
        .map(|w| eps.powi(w) * (1.0 - eps).powi(n as i32 - w))
        .collect();
    let values = f.values();
    let size = values.len();
    let out = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| weights[y.count_ones() as usize] * values[x ^ y])
                .sum::<f64>()
        })
        .collect();
    Ok(BooleanFunction::from_vec_unchecked(n, out))
}

/// In-place unnormalized Walsh–Hadamard transform.
pub fn walsh_hadamard(values: &mut [f64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in values.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// T_ε in O(n 2^n): each character χ_s is an eigenfunction with eigenvalue
/// (1−2ε)^|s|. Must agree with [`noise_operator`].
pub fn noise_operator_fast(f: &BooleanFunction, eps: f64) -> Result<BooleanFunction> {
    check_probability("eps", eps)?;
    let n = f.n();
    let mut spectrum = f.values().to_vec();
    walsh_hadamard(&mut spectrum);
    let rho = 1.0 - 2.0 * eps;
    let attenuation: Vec<f64> = (0..=n as i32).map(|w| rho.powi(w)).collect();
    let scale = 1.0 / spectrum.len() as f64;
    for (s, c) in spectrum.iter_mut().enumerate() {
        *c *= attenuation[s.count_ones() as usize] * scale;
    }
    walsh_hadamard(&mut spectrum);
    // Round-off can leave tiny negatives where the exact value is 0.
    spectrum.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok(BooleanFunction::from_vec_unchecked(n, spectrum))
}

/// E(f|S)(a) = E_{y : y_S = a} f(y), as a function on F_2^|S|.
pub fn conditional_expectation(
    f: &BooleanFunction,
    subset: &SubsetMask,
) -> Result<BooleanFunction> {
    if f.n() != subset.dim() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: subset.dim(),
        });
    }
    let k = subset.len();
    let mut out = vec![0.0; 1usize << k];
    for (x, &v) in f.values().iter().enumerate() {
        out[gather_bits(x as u128, subset.mask()) as usize] += v;
    }
    let fiber = (1u64 << (f.n() - k)) as f64;
    out.iter_mut().for_each(|v| *v /= fiber);
    Ok(BooleanFunction::from_vec_unchecked(k, out))
}

/// Visits E(f|S) for every S ⊆ [n] in a fixed order, sharing partial
/// marginalizations between subsets. Total work is O(3^n).
pub fn for_each_conditional<F>(f: &BooleanFunction, mut visit: F)
where
    F: FnMut(SubsetMask, &BooleanFunction),
{
    fn recurse<F: FnMut(SubsetMask, &BooleanFunction)>(
        n: usize,
        remaining: usize,
        kept: u128,
        cur: &BooleanFunction,
        visit: &mut F,
    ) {
        if remaining == 0 {
            visit(SubsetMask::from_raw(n, kept), cur);
            return;
        }
        // Array layout: bits [0, remaining) are coordinates not yet decided,
        // the bits above are the kept coordinates in increasing order.
        let coord = remaining - 1;
        recurse(n, coord, kept | (1u128 << coord), cur, visit);

        let values = cur.values();
        let half = values.len() / 2;
        let low_mask = (1usize << coord) - 1;
        let dropped: Vec<f64> = (0..half)
            .map(|i| {
                let base = (i & low_mask) | ((i >> coord) << (coord + 1));
                0.5 * (values[base] + values[base | (1 << coord)])
            })
            .collect();
        let next = BooleanFunction::from_vec_unchecked(cur.n() - 1, dropped);
        recurse(n, coord, kept, &next, visit);
    }
    recurse(f.n(), f.n(), 0, f, &mut visit);
}

/// x + Z with Z_i i.i.d. Bernoulli(ε).
pub fn bsc_sample<R: Rng + ?Sized>(x: &BitVector, eps: f64, rng: &mut R) -> Result<BitVector> {
    let noise = bernoulli_pattern(x.dim(), eps, rng)?;
    Ok(BitVector::from_raw(x.dim(), x.bits() ^ noise))
}

/// The non-erased coordinates of one BEC transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErasurePattern {
    pub revealed: SubsetMask,
}

impl ErasurePattern {
    pub fn erased(&self) -> SubsetMask {
        self.revealed.complement()
    }
}

/// BEC output: which coordinates survived and their values, re-indexed onto
/// F_2^|S|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BecOutput {
    pub pattern: ErasurePattern,
    pub values: BitVector,
}

/// Transmits x over BEC(η): each coordinate is erased independently with
/// probability η.
pub fn bec_sample<R: Rng + ?Sized>(x: &BitVector, eta: f64, rng: &mut R) -> Result<BecOutput> {
    check_probability("eta", eta)?;
    let revealed = sample_subset(1.0 - eta, x.dim(), rng)?;
    let values = x.project(&revealed)?;
    Ok(BecOutput {
        pattern: ErasurePattern { revealed },
        values,
    })
}

/// S ∼ λ: each coordinate of [n] joins S independently with probability λ.
pub fn sample_subset<R: Rng + ?Sized>(lambda: f64, n: usize, rng: &mut R) -> Result<SubsetMask> {
    let mask = bernoulli_pattern(n, lambda, rng)?;
    SubsetMask::new(n, mask)
}

pub(crate) fn bernoulli_pattern<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<u128> {
    check_probability("probability", p)?;
    let mut bits = 0u128;
    for i in 0..n {
        if rng.gen_bool(p) {
            bits |= 1u128 << i;
        }
    }
    Ok(bits)
}
