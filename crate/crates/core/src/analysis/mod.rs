//! Statistics over simulated or ingested chains: throughput buckets, desert
//! and spike classification, Poisson expectations, autocorrelation, solve-time
//! summaries, hash-rate estimators, DARI ratios and per-miner shares.

mod acf;
mod dari;
mod hashrate;
mod poisson;
mod shares;
mod stats;
mod summary;
mod throughput;

pub use acf::{acf, AcfSeries};
pub use dari::{dari_ratio, dari_series, DariPoint, RatioPoint};
pub use hashrate::{estimate_hashrate_ma, exp_weighted_difficulties, ExpWeighted, HashrateEstimate};
pub use poisson::{poisson_cdf, poisson_pmf, PoissonModel};
pub use shares::{miner_shares, MinerShare, UNTAGGED};
pub use stats::{geometric_mean_ratio, log_ratio_summary, solve_time_stats, LogRatioSummary, SolveTimeStats};
pub use summary::{summarize, RunSummary};
pub use throughput::{bucket_blocks, classify_periods, ClassSummary, PeriodClass, ThroughputSeries};
