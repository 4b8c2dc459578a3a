//! Finite-blocklength random binning codes on small discrete channels.
//!
//! A codebook pair is sampled exactly as in the achievability scheme: the
//! source draws `num_messages × bin_size` codewords i.i.d. from `px1` and
//! groups them into bins, one per message; the helper draws its own codebook
//! i.i.d. from `px2`. For a fixed sampled code the eavesdropper's equivocation
//! `H(W | Y2ⁿ)` is computed exactly by summing over every output sequence, and
//! the intended receiver's error probability is estimated by Monte Carlo with
//! a maximum-likelihood decoder.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dmc_whi::{Dmc, ProductInput, RateTriple};
use crate::error::{Error, Result};
use crate::info_measures::{clamp_mi, Bits};

/// Default cap on `|Y2|ⁿ × codewords × helper words`.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Source codebook partitioned into bins, plus the helper's codebook.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedCodebook {
    pub n: usize,
    pub num_messages: usize,
    pub bin_size: usize,
    /// Codeword `w * bin_size + j` is the `j`-th member of bin `w`.
    pub codewords: Vec<Vec<usize>>,
    pub helper_codebook: Vec<Vec<usize>>,
    pub requested: RateTriple,
    /// Distribution the codebooks were drawn from.
    pub input: ProductInput,
}

impl BinnedCodebook {
    pub fn bin(&self, w: usize) -> &[Vec<usize>] {
        &self.codewords[w * self.bin_size..(w + 1) * self.bin_size]
    }

    pub fn realized_r1s(&self) -> Bits {
        (self.num_messages as f64).log2() / self.n as f64
    }

    pub fn realized_r1d(&self) -> Bits {
        (self.bin_size as f64).log2() / self.n as f64
    }

    pub fn realized_r2(&self) -> Bits {
        (self.helper_codebook.len() as f64).log2() / self.n as f64
    }
}

/// `round(2^(n·rate))`, at least one.
fn codebook_size(n: usize, rate: f64, what: &str) -> Result<usize> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::Validation(format!("{what} must be finite and >= 0, got {rate}")));
    }
    let exp = n as f64 * rate;
    if exp > 40.0 {
        return Err(Error::Resource(format!("{what}: 2^(n·R) = 2^{exp} codewords is too large")));
    }
    Ok((exp.exp2().round() as usize).max(1))
}

fn enumeration_cost(ny2: usize, n: usize, codewords: usize, helper: usize) -> Option<u128> {
    (ny2 as u128)
        .checked_pow(n as u32)?
        .checked_mul(codewords as u128)?
        .checked_mul(helper as u128)
}

fn check_budget(ny2: usize, n: usize, codewords: usize, helper: usize, budget: u128) -> Result<()> {
    match enumeration_cost(ny2, n, codewords, helper) {
        Some(cost) if cost <= budget => Ok(()),
        cost => Err(Error::Resource(format!(
            "enumeration cost |Y2|^n × codewords × helper words = {ny2}^{n} × {codewords} × {helper} = {} exceeds budget {budget}",
            cost.map_or_else(|| "overflow".to_string(), |c| c.to_string())
        ))),
    }
}

/// Draws a codebook pair with the default enumeration budget.
pub fn sample_codebooks(
    ch: &Dmc,
    input: &ProductInput,
    n: usize,
    rates: RateTriple,
    seed: u64,
) -> Result<BinnedCodebook> {
    sample_codebooks_with_budget(ch, input, n, rates, seed, DEFAULT_BUDGET)
}

pub fn sample_codebooks_with_budget(
    ch: &Dmc,
    input: &ProductInput,
    n: usize,
    rates: RateTriple,
    seed: u64,
    budget: u128,
) -> Result<BinnedCodebook> {
    if n == 0 {
        return Err(Error::Validation("block length must be >= 1".into()));
    }
    if input.px1.len() != ch.n_x1() || input.px2.len() != ch.n_x2() {
        return Err(Error::Validation("input distribution does not match channel alphabets".into()));
    }
    let num_messages = codebook_size(n, rates.r1s, "r1s")?;
    let bin_size = codebook_size(n, rates.r1d, "r1d")?;
    let helper_size = codebook_size(n, rates.r2, "r2")?;
    let total = num_messages
        .checked_mul(bin_size)
        .ok_or_else(|| Error::Resource("source codebook size overflows".into()))?;
    check_budget(ch.n_y2(), n, total, helper_size, budget)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d1 = WeightedIndex::new(input.px1.as_slice()).map_err(|e| Error::Validation(e.to_string()))?;
    let d2 = WeightedIndex::new(input.px2.as_slice()).map_err(|e| Error::Validation(e.to_string()))?;
    let codewords = (0..total)
        .map(|_| (0..n).map(|_| d1.sample(&mut rng)).collect())
        .collect();
    let helper_codebook = (0..helper_size)
        .map(|_| (0..n).map(|_| d2.sample(&mut rng)).collect())
        .collect();
    Ok(BinnedCodebook {
        n,
        num_messages,
        bin_size,
        codewords,
        helper_codebook,
        requested: rates,
        input: input.clone(),
    })
}

/// Exact secrecy metrics of one fixed code, normalized per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equivocation {
    /// `(1/n) H(W | Y2ⁿ)`
    pub equivocation_rate: Bits,
    /// `(1/n) I(W; Y2ⁿ)`
    pub leakage: Bits,
}

fn check_codebook(ch: &Dmc, cb: &BinnedCodebook) -> Result<()> {
    let bad = |words: &[Vec<usize>], alpha: usize| {
        words.iter().any(|c| c.len() != cb.n || c.iter().any(|&x| x >= alpha))
    };
    if cb.codewords.len() != cb.num_messages * cb.bin_size
        || cb.helper_codebook.is_empty()
        || bad(&cb.codewords, ch.n_x1())
        || bad(&cb.helper_codebook, ch.n_x2())
    {
        return Err(Error::Validation("codebook does not match the channel or its own shape".into()));
    }
    Ok(())
}

pub fn exact_equivocation(ch: &Dmc, cb: &BinnedCodebook) -> Result<Equivocation> {
    exact_equivocation_with_budget(ch, cb, DEFAULT_BUDGET)
}

/// Computes `H(W | Y2ⁿ)` and `I(W; Y2ⁿ)` for a uniform message by summing
/// over all `|Y2|ⁿ` eavesdropper sequences.
pub fn exact_equivocation_with_budget(
    ch: &Dmc,
    cb: &BinnedCodebook,
    budget: u128,
) -> Result<Equivocation> {
    check_codebook(ch, cb)?;
    let (n, ny) = (cb.n, ch.n_y2());
    check_budget(ny, n, cb.codewords.len(), cb.helper_codebook.len(), budget)?;

    let w2 = ch.eavesdropper_kernel();
    let nx2 = ch.n_x2();
    let m = cb.num_messages;
    let pairs = (cb.bin_size * cb.helper_codebook.len()) as f64;
    let sequences = ny.pow(n as u32);

    let terms: Vec<(f64, f64)> = (0..sequences)
        .into_par_iter()
        .map(|mut idx| {
            let mut y = vec![0usize; n];
            for slot in y.iter_mut() {
                *slot = idx % ny;
                idx /= ny;
            }
            let mut pw = vec![0.0; m];
            for (w, p) in pw.iter_mut().enumerate() {
                let mut acc = 0.0;
                for c in cb.bin(w) {
                    for h in &cb.helper_codebook {
                        let mut lik = 1.0;
                        for k in 0..n {
                            lik *= w2[(c[k] * nx2 + h[k]) * ny + y[k]];
                            if lik == 0.0 {
                                break;
                            }
                        }
                        acc += lik;
                    }
                }
                *p = acc / pairs;
            }
            let py: f64 = pw.iter().sum::<f64>() / m as f64;
            if py <= 0.0 {
                return (0.0, 0.0);
            }
            let mut cond_entropy = 0.0;
            let mut info = 0.0;
            for &p in pw.iter().filter(|&&p| p > 0.0) {
                let post = p / (m as f64 * py);
                cond_entropy -= py * post * post.log2();
                info += p / m as f64 * (p / py).log2();
            }
            (cond_entropy, info)
        })
        .collect();

    let (h, i) = terms.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    Ok(Equivocation {
        equivocation_rate: h.max(0.0) / n as f64,
        leakage: clamp_mi(i).max(0.0) / n as f64,
    })
}

/// Receiver decoding rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeMode {
    /// Maximize the likelihood jointly over source and helper codewords.
    JointMl,
    /// Average the helper symbol out with `px2`, as if it were i.i.d. noise.
    TreatAsNoise,
}

/// Monte Carlo estimate of the block error probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeEstimate {
    pub pe: f64,
    /// Half-width of a normal-approximation 95% confidence interval.
    pub halfwidth: f64,
    pub errors: u64,
    pub trials: u64,
}

const Z95: f64 = 1.959963984540054;

impl PeEstimate {
    fn from_counts(errors: u64, trials: u64) -> Self {
        let pe = errors as f64 / trials as f64;
        PeEstimate { pe, halfwidth: Z95 * (pe * (1.0 - pe) / trials as f64).sqrt(), errors, trials }
    }
}

/// Decodes a received sequence to a message index. Ties go to the lowest
/// codeword index (and, for joint decoding, the lowest helper index).
fn decode(
    cb: &BinnedCodebook,
    mode: DecodeMode,
    w1: &[f64],
    w1_noise: &[f64],
    nx2: usize,
    ny: usize,
    y: &[usize],
) -> usize {
    let mut best = (-1.0, 0usize);
    for (ci, c) in cb.codewords.iter().enumerate() {
        match mode {
            DecodeMode::JointMl => {
                for h in &cb.helper_codebook {
                    let lik: f64 = (0..cb.n).map(|k| w1[(c[k] * nx2 + h[k]) * ny + y[k]]).product();
                    if lik > best.0 {
                        best = (lik, ci);
                    }
                }
            }
            DecodeMode::TreatAsNoise => {
                let lik: f64 = (0..cb.n).map(|k| w1_noise[c[k] * ny + y[k]]).product();
                if lik > best.0 {
                    best = (lik, ci);
                }
            }
        }
    }
    best.1 / cb.bin_size
}

/// Estimates the receiver's error probability over `trials` independent
/// transmissions. Trial `t` draws from stream `t` of a generator seeded with
/// `seed`, so the estimate does not depend on the number of worker threads.
pub fn error_probability(
    ch: &Dmc,
    cb: &BinnedCodebook,
    mode: DecodeMode,
    trials: u64,
    seed: u64,
) -> Result<PeEstimate> {
    if trials == 0 {
        return Err(Error::Validation("trials must be >= 1".into()));
    }
    check_codebook(ch, cb)?;
    let (nx1, nx2, ny) = (ch.n_x1(), ch.n_x2(), ch.n_y1());
    let w1 = ch.receiver_kernel();
    let px2 = cb.input.px2.as_slice();
    let mut w1_noise = vec![0.0; nx1 * ny];
    for x1 in 0..nx1 {
        for x2 in 0..nx2 {
            for y in 0..ny {
                w1_noise[x1 * ny + y] += px2[x2] * w1[(x1 * nx2 + x2) * ny + y];
            }
        }
    }

    let errors: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let w = rng.gen_range(0..cb.num_messages);
            let c = &cb.bin(w)[rng.gen_range(0..cb.bin_size)];
            let h = &cb.helper_codebook[rng.gen_range(0..cb.helper_codebook.len())];
            let y: Vec<usize> = (0..cb.n)
                .map(|k| {
                    let row = &w1[(c[k] * nx2 + h[k]) * ny..][..ny];
                    sample_row(row, rng.gen::<f64>())
                })
                .collect();
            u64::from(decode(cb, mode, &w1, &w1_noise, nx2, ny, &y) != w)
        })
        .sum();
    Ok(PeEstimate::from_counts(errors, trials))
}

/// Inverse-CDF draw from a probability row.
fn sample_row(row: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in row.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Report for one sampled code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub n: usize,
    pub realized_r1s: Bits,
    pub realized_r1d: Bits,
    pub realized_r2: Bits,
    pub pe: f64,
    pub pe_halfwidth: f64,
    pub equivocation_rate: Bits,
    pub leakage: Bits,
    /// `realized_r1s − equivocation_rate`
    pub secrecy_gap: Bits,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub mode: DecodeMode,
    pub budget: u128,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { trials: 1000, mode: DecodeMode::JointMl, budget: DEFAULT_BUDGET }
    }
}

/// Statistics of the per-seed metrics.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSummary {
    pub pe: f64,
    pub equivocation_rate: Bits,
    pub leakage: Bits,
    pub secrecy_gap: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub reports: Vec<SimReport>,
    pub mean: MetricSummary,
    pub min: MetricSummary,
    pub max: MetricSummary,
}

/// Samples, measures, and reports one code.
pub fn simulate_once(
    ch: &Dmc,
    input: &ProductInput,
    n: usize,
    rates: RateTriple,
    seed: u64,
    config: &SimConfig,
) -> Result<SimReport> {
    let cb = sample_codebooks_with_budget(ch, input, n, rates, seed, config.budget)?;
    let eq = exact_equivocation_with_budget(ch, &cb, config.budget)?;
    let pe = error_probability(ch, &cb, config.mode, config.trials, seed)?;
    let realized_r1s = cb.realized_r1s();
    Ok(SimReport {
        n,
        realized_r1s,
        realized_r1d: cb.realized_r1d(),
        realized_r2: cb.realized_r2(),
        pe: pe.pe,
        pe_halfwidth: pe.halfwidth,
        equivocation_rate: eq.equivocation_rate,
        leakage: eq.leakage,
        secrecy_gap: realized_r1s - eq.equivocation_rate,
        seed,
    })
}

/// Runs [`simulate_once`] for every seed and aggregates the results.
pub fn run_experiment(
    ch: &Dmc,
    input: &ProductInput,
    n: usize,
    rates: RateTriple,
    seeds: &[u64],
    config: &SimConfig,
) -> Result<ExperimentReport> {
    if seeds.is_empty() {
        return Err(Error::Validation("at least one seed is required".into()));
    }
    let reports = seeds
        .iter()
        .map(|&s| simulate_once(ch, input, n, rates, s, config))
        .collect::<Result<Vec<_>>>()?;

    let metrics = |r: &SimReport| [r.pe, r.equivocation_rate, r.leakage, r.secrecy_gap];
    let summarize = |f: fn(f64, f64) -> f64, init: f64| {
        let v = reports.iter().map(metrics).fold([init; 4], |mut acc, m| {
            for (a, x) in acc.iter_mut().zip(m) {
                *a = f(*a, x);
            }
            acc
        });
        MetricSummary { pe: v[0], equivocation_rate: v[1], leakage: v[2], secrecy_gap: v[3] }
    };
    let sum = summarize(|a, b| a + b, 0.0);
    let k = reports.len() as f64;
    let mean = MetricSummary {
        pe: sum.pe / k,
        equivocation_rate: sum.equivocation_rate / k,
        leakage: sum.leakage / k,
        secrecy_gap: sum.secrecy_gap / k,
    };
    let min = summarize(f64::min, f64::INFINITY);
    let max = summarize(f64::max, f64::NEG_INFINITY);
    Ok(ExperimentReport { reports, mean, min, max })
}
