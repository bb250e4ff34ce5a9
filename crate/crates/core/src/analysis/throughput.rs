use std::fmt;

use crate::da::ChainHeader;
use crate::error::{Error, Result};

/// Blocks per fixed-width time bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputSeries {
    pub bucket_seconds: u64,
    pub counts: Vec<u64>,
    /// Start of the first bucket.
    pub origin_time: f64,
}

impl ThroughputSeries {
    pub fn bucket_start(&self, index: usize) -> f64 {
        self.origin_time + (index as u64 * self.bucket_seconds) as f64
    }

    /// Bucket index for time `t`, if it falls inside the series.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        if t < self.origin_time {
            return None;
        }
        let idx = ((t - self.origin_time) / self.bucket_seconds as f64).floor() as usize;
        (idx < self.counts.len()).then_some(idx)
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }
}

/// Counts headers per bucket from the earliest to the latest timestamp.
/// Empty buckets are kept as zeros; buckets are aligned to the earliest
/// timestamp, which for a monotone chain is the first header.
pub fn bucket_blocks(headers: &[ChainHeader], bucket_seconds: u64) -> Result<ThroughputSeries> {
    if headers.is_empty() {
        return Err(Error::domain("cannot bucket an empty header sequence"));
    }
    if bucket_seconds == 0 {
        return Err(Error::domain("bucket width must be positive"));
    }
    let origin = headers.iter().map(|h| h.timestamp).fold(f64::INFINITY, f64::min);
    let last = headers.iter().map(|h| h.timestamp).fold(f64::NEG_INFINITY, f64::max);
    let width = bucket_seconds as f64;
    let n = ((last - origin) / width).floor() as usize + 1;
    let mut counts = vec![0u64; n];
    for h in headers {
        let idx = (((h.timestamp - origin) / width).floor() as usize).min(n - 1);
        counts[idx] += 1;
    }
    Ok(ThroughputSeries {
        bucket_seconds,
        counts,
        origin_time: origin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodClass {
    Desert,
    Normal,
    Spike,
}

impl PeriodClass {
    /// At most this many blocks makes a desert.
    pub const DESERT_MAX: u64 = 1;
    /// At least this many blocks makes a spike.
    pub const SPIKE_MIN: u64 = 12;

    pub fn of(count: u64) -> Self {
        if count <= Self::DESERT_MAX {
            PeriodClass::Desert
        } else if count >= Self::SPIKE_MIN {
            PeriodClass::Spike
        } else {
            PeriodClass::Normal
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PeriodClass::Desert => "desert",
            PeriodClass::Normal => "normal",
            PeriodClass::Spike => "spike",
        }
    }
}

impl fmt::Display for PeriodClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassSummary {
    pub deserts: usize,
    pub normals: usize,
    pub spikes: usize,
}

impl ClassSummary {
    pub fn total(&self) -> usize {
        self.deserts + self.normals + self.spikes
    }

    fn frac(&self, n: usize) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            n as f64 / self.total() as f64
        }
    }

    pub fn desert_frequency(&self) -> f64 {
        self.frac(self.deserts)
    }

    pub fn normal_frequency(&self) -> f64 {
        self.frac(self.normals)
    }

    pub fn spike_frequency(&self) -> f64 {
        self.frac(self.spikes)
    }
}

pub fn classify_periods(series: &ThroughputSeries) -> (Vec<PeriodClass>, ClassSummary) {
    let classes: Vec<PeriodClass> = series.counts.iter().map(|&c| PeriodClass::of(c)).collect();
    let mut summary = ClassSummary::default();
    for c in &classes {
        match c {
            PeriodClass::Desert => summary.deserts += 1,
            PeriodClass::Normal => summary.normals += 1,
            PeriodClass::Spike => summary.spikes += 1,
        }
    }
    (classes, summary)
}
