use std::collections::BTreeMap;

use crate::da::ChainHeader;
use crate::error::{Error, Result};

use super::{PeriodClass, ThroughputSeries};

/// Label used for headers that carry no miner tag.
pub const UNTAGGED: &str = "(untagged)";

/// A miner's blocks as percentages of all blocks in the span.
#[derive(Debug, Clone, PartialEq)]
pub struct MinerShare {
    pub miner: String,
    pub normal: f64,
    pub spike: f64,
    pub desert: f64,
    pub total: f64,
}

/// Splits each miner's share of blocks by the class of the bucket the block
/// fell in. Rows are ordered by total share, largest first.
pub fn miner_shares(
    headers: &[ChainHeader],
    series: &ThroughputSeries,
    classes: &[PeriodClass],
) -> Result<Vec<MinerShare>> {
    if headers.is_empty() {
        return Err(Error::domain("no headers to attribute"));
    }
    if classes.len() != series.counts.len() {
        return Err(Error::domain("class sequence does not match the bucket series"));
    }
    let mut counts: BTreeMap<&str, [u64; 3]> = BTreeMap::new();
    for h in headers {
        let idx = series
            .index_of(h.timestamp)
            .ok_or_else(|| Error::domain(format!("height {} falls outside every classified bucket", h.height)))?;
        let col = match classes[idx] {
            PeriodClass::Normal => 0,
            PeriodClass::Spike => 1,
            PeriodClass::Desert => 2,
        };
        counts.entry(h.miner_id.as_deref().unwrap_or(UNTAGGED)).or_default()[col] += 1;
    }
    let n = headers.len() as f64;
    let pct = |c: u64| 100.0 * c as f64 / n;
    let mut rows: Vec<MinerShare> = counts
        .into_iter()
        .map(|(miner, [normal, spike, desert])| MinerShare {
            miner: miner.to_string(),
            normal: pct(normal),
            spike: pct(spike),
            desert: pct(desert),
            total: pct(normal + spike + desert),
        })
        .collect();
    rows.sort_by(|a, b| b.total.total_cmp(&a.total).then_with(|| a.miner.cmp(&b.miner)));
    Ok(rows)
}
