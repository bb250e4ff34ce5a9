use crate::error::{Error, Result};

/// Difficulty-adjusted reward index at one point in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DariPoint {
    pub time: f64,
    pub reward: f64,
    pub price: f64,
    pub difficulty: f64,
    /// `reward * price / difficulty`.
    pub dari: f64,
}

impl DariPoint {
    pub fn new(time: f64, reward: f64, price: f64, difficulty: f64) -> Self {
        DariPoint {
            time,
            reward,
            price,
            difficulty,
            dari: reward * price / difficulty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub time: f64,
    pub ratio: f64,
}

/// Zips the four input series into DARI points; all must have equal length.
pub fn dari_series(
    rewards: &[f64],
    prices: &[f64],
    difficulties: &[f64],
    timestamps: &[f64],
) -> Result<Vec<DariPoint>> {
    let n = timestamps.len();
    if n == 0 {
        return Err(Error::domain("dari series is empty"));
    }
    if rewards.len() != n || prices.len() != n || difficulties.len() != n {
        return Err(Error::domain("dari inputs have different lengths"));
    }
    if difficulties.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::domain("difficulties must be positive"));
    }
    Ok((0..n)
        .map(|i| DariPoint::new(timestamps[i], rewards[i], prices[i], difficulties[i]))
        .collect())
}

/// Value in force at `t`: the last point at or before `t`.
fn carried_forward(series: &[DariPoint], t: f64) -> f64 {
    let idx = series.partition_point(|p| p.time <= t);
    series[idx - 1].dari
}

/// `a / b` sampled every `bucket` seconds over the overlap of both series,
/// each side carrying its last observation forward.
pub fn dari_ratio(a: &[DariPoint], b: &[DariPoint], bucket: f64) -> Result<Vec<RatioPoint>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("dari ratio needs two non-empty series"));
    }
    if !(bucket > 0.0) {
        return Err(Error::domain("bucket width must be positive"));
    }
    let sorted = |s: &[DariPoint]| {
        let mut v = s.to_vec();
        v.sort_by(|x, y| x.time.total_cmp(&y.time));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let start = a[0].time.max(b[0].time);
    let end = a[a.len() - 1].time.min(b[b.len() - 1].time);
    if start > end {
        return Err(Error::domain("dari series do not overlap in time"));
    }
    let steps = ((end - start) / bucket).floor() as usize;
    Ok((0..=steps)
        .map(|i| {
            let t = start + i as f64 * bucket;
            RatioPoint {
                time: t,
                ratio: carried_forward(&a, t) / carried_forward(&b, t),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(difficulty: f64) -> Vec<DariPoint> {
        let t: Vec<f64> = (0..50).map(|i| i as f64 * 37.0).collect();
        let n = t.len();
        let prices: Vec<f64> = (0..n).map(|i| 100.0 + i as f64).collect();
        dari_series(&vec![6.25; n], &prices, &vec![difficulty; n], &t).unwrap()
    }

    #[test]
    fn dari_formula() {
        let p = DariPoint::new(0.0, 6.25, 400.0, 1e3);
        assert_eq!(p.dari, 2.5);
    }

    #[test]
    fn identical_series_ratio_is_one() {
        let a = series(1e6);
        for r in dari_ratio(&a, &a, 60.0).unwrap() {
            assert_eq!(r.ratio, 1.0);
        }
    }

    #[test]
    fn halved_difficulty_doubles_ratio() {
        let r = dari_ratio(&series(5e5), &series(1e6), 60.0).unwrap();
        assert!(!r.is_empty());
        assert!(r.iter().all(|p| p.ratio == 2.0));
    }

    #[test]
    fn locf_alignment() {
        let a = vec![DariPoint::new(0.0, 1.0, 1.0, 1.0), DariPoint::new(90.0, 1.0, 1.0, 0.5)];
        let b = vec![DariPoint::new(0.0, 1.0, 1.0, 1.0), DariPoint::new(200.0, 1.0, 1.0, 1.0)];
        let r = dari_ratio(&a, &b, 60.0).unwrap();
        assert_eq!(r.iter().map(|p| p.ratio).collect::<Vec<_>>(), vec![1.0, 1.0]);
        let r = dari_ratio(&b, &a, 45.0).unwrap();
        assert_eq!(r.iter().map(|p| p.ratio).collect::<Vec<_>>(), vec![1.0, 1.0, 0.5]);
    }

    #[test]
    fn errors() {
        let a = vec![DariPoint::new(0.0, 1.0, 1.0, 1.0)];
        let b = vec![DariPoint::new(100.0, 1.0, 1.0, 1.0)];
        assert!(dari_ratio(&a, &b, 60.0).is_err());
        assert!(dari_ratio(&a, &[], 60.0).is_err());
        assert!(dari_series(&[1.0], &[1.0], &[1.0, 2.0], &[0.0]).is_err());
        assert!(dari_series(&[], &[], &[], &[]).is_err());
    }
}
