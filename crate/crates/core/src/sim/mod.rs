//! Seeded Monte Carlo estimates of outage and bit-error rate.
//!
//! Samples are drawn in fixed blocks of [`BLOCK_SAMPLES`]; block `k` always
//! uses `RngStream::new(seed, k)` and block sums are merged in block order, so
//! a result depends only on `(seed, n_samples)` and never on how blocks were
//! spread across workers or batches.

mod estimate;
pub mod symbol;

pub use estimate::{normal_interval, wilson_interval, Z95};
pub use symbol::{
    alamouti_roundtrip, compose_hops, dpsk_trial, relay_forward, select_antenna, symbol_level_e2e_ber,
    AlamoutiOutput,
};

use rayon::prelude::*;

use crate::channel::{fso, RngStream};
use crate::error::{param, Error, Result};
use crate::link::LinkConfig;
use crate::sum::NeumaierSum;

/// Samples per RNG block.
pub const BLOCK_SAMPLES: u64 = 4096;
/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 1000;
/// Event counts below this mark an estimate as undersampled.
pub const MIN_EVENTS: u64 = 20;

/// How the BER estimator treats the noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerMode {
    /// Average the conditional error probability `1/2 e^{-g}` over the fading.
    Kernel,
    /// Draw the noise too and count decision errors.
    BitFlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SnrLevel,
    SymbolLevel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub n_workers: usize,
    /// Samples handed to a worker at a time, rounded up to whole blocks.
    pub batch_size: u64,
    pub ber_mode: BerMode,
}

impl SimConfig {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        SimConfig {
            n_samples,
            seed,
            n_workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            batch_size: 16 * BLOCK_SAMPLES,
            ber_mode: BerMode::Kernel,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return param(format!("n_samples must be at least {MIN_SAMPLES}, got {}", self.n_samples));
        }
        if self.n_workers == 0 || self.batch_size == 0 {
            return param("n_workers and batch_size must be positive");
        }
        Ok(())
    }

    fn blocks(&self) -> u64 {
        self.n_samples.div_ceil(BLOCK_SAMPLES)
    }

    fn block_len(&self, block: u64) -> u64 {
        (self.n_samples - block * BLOCK_SAMPLES).min(BLOCK_SAMPLES)
    }

    /// Runs `f` once per block, in parallel, and returns the outputs in block order.
    pub(crate) fn run_blocks<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, RngStream, u64) -> T + Sync,
    {
        self.validate()?;
        let per_batch = self.batch_size.div_ceil(BLOCK_SAMPLES);
        let blocks = self.blocks();
        let batches = blocks.div_ceil(per_batch);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.n_workers)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
        let nested: Vec<Vec<T>> = pool.install(|| {
            (0..batches)
                .into_par_iter()
                .map(|batch| {
                    let first = batch * per_batch;
                    let last = (first + per_batch).min(blocks);
                    (first..last).map(|b| f(b, RngStream::new(self.seed, b), self.block_len(b))).collect()
                })
                .collect()
        });
        Ok(nested.into_iter().flatten().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub estimate: f64,
    pub ci95_half_width: f64,
    pub n_samples: u64,
    pub method: Method,
    /// Fewer than [`MIN_EVENTS`] events were observed.
    pub undersampled: bool,
}

impl SimResult {
    /// True when `value` lies within `k` half-widths of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.ci95_half_width
    }
}

/// Outage and BER estimated from one shared set of channel draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkEstimate {
    pub outage: SimResult,
    pub ber: SimResult,
}

#[derive(Default)]
struct LinkBlock {
    outages: u64,
    kernel: NeumaierSum,
    kernel_sq: NeumaierSum,
    bit_errors: u64,
    /// Samples where the end-to-end kernel fell below a per-hop kernel.
    bound_violations: u64,
}

/// One draw of `(gamma_RF, gamma_FSO)`.
pub(crate) fn draw_hops(cfg: &LinkConfig, rng: &mut RngStream) -> (f64, f64) {
    let g_rf = crate::channel::sample_rf_snr(&cfg.rf, rng);
    let g_fso = fso::sample_fso_snr(&cfg.fso, rng);
    (g_rf, g_fso)
}

/// Estimates outage and DPSK BER of `min(gamma_RF, gamma_FSO)` in one pass.
pub fn mc_link(cfg: &LinkConfig, sim: &SimConfig) -> Result<LinkEstimate> {
    let mode = sim.ber_mode;
    let blocks = sim.run_blocks(|_, mut rng, len| {
        let mut acc = LinkBlock::default();
        for _ in 0..len {
            let (g_rf, g_fso) = draw_hops(cfg, &mut rng);
            let g = g_rf.min(g_fso);
            if g < cfg.gamma_th {
                acc.outages += 1;
            }
            let kernel = 0.5 * (-g).exp();
            if kernel < 0.5 * (-g_rf).exp() || kernel < 0.5 * (-g_fso).exp() {
                acc.bound_violations += 1;
            }
            match mode {
                BerMode::Kernel => {
                    acc.kernel.add(kernel);
                    acc.kernel_sq.add(kernel * kernel);
                }
                BerMode::BitFlip => {
                    let d = if rng.uniform() < 0.5 { 1.0 } else { -1.0 };
                    if dpsk_trial(g, d, &mut rng) != d {
                        acc.bit_errors += 1;
                    }
                }
            }
        }
        acc
    })?;

    let mut outages = 0;
    let mut bit_errors = 0;
    let mut violations = 0;
    let mut kernel = NeumaierSum::new();
    let mut kernel_sq = NeumaierSum::new();
    for b in &blocks {
        outages += b.outages;
        bit_errors += b.bit_errors;
        violations += b.bound_violations;
        kernel.merge(&b.kernel);
        kernel_sq.merge(&b.kernel_sq);
    }
    if violations > 0 {
        return Err(Error::Domain(format!("{violations} samples broke the min-SNR kernel bound")));
    }
    let n = sim.n_samples;
    let outage = counted(outages, n, Method::SnrLevel);
    let ber = match mode {
        BerMode::Kernel => {
            let (mean, half) = normal_interval(kernel.value(), kernel_sq.value(), n);
            SimResult { estimate: mean, ci95_half_width: half, n_samples: n, method: Method::SnrLevel, undersampled: false }
        }
        BerMode::BitFlip => counted(bit_errors, n, Method::SnrLevel),
    };
    Ok(LinkEstimate { outage, ber })
}

fn counted(events: u64, n: u64, method: Method) -> SimResult {
    let (p, half) = wilson_interval(events, n);
    SimResult { estimate: p, ci95_half_width: half, n_samples: n, method, undersampled: events < MIN_EVENTS }
}

/// Fraction of draws with `min(gamma_RF, gamma_FSO) < gamma_th`, Wilson interval.
pub fn mc_outage(cfg: &LinkConfig, sim: &SimConfig) -> Result<SimResult> {
    mc_link(cfg, sim).map(|e| e.outage)
}

/// DPSK BER of the min-SNR link, by kernel averaging or bit flipping.
pub fn mc_ber(cfg: &LinkConfig, sim: &SimConfig) -> Result<SimResult> {
    mc_link(cfg, sim).map(|e| e.ber)
}

/// Mean post-combining SNR over `n` channel draws; `2 gamma_bar_RF` for Alamouti.
pub fn mean_rf_snr(cfg: &LinkConfig, sim: &SimConfig) -> Result<f64> {
    let sums = sim.run_blocks(|_, mut rng, len| {
        let mut s = NeumaierSum::new();
        for _ in 0..len {
            s.add(crate::channel::sample_rf_snr(&cfg.rf, &mut rng));
        }
        s
    })?;
    let mut total = NeumaierSum::new();
    sums.iter().for_each(|s| total.merge(s));
    Ok(total.value() / sim.n_samples as f64)
}
