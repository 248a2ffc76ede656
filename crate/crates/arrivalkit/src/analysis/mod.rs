//! Inter-arrival statistics and Poisson-process diagnostics.
//!
//! The core measurement is simple: sort the request launch times, take the
//! differences between adjacent timestamps, and compute the coefficient of
//! variation (sdev/mean) of those differences. A CoV near 1.0 means requests
//! are launched independently, like a pool of real users; markedly above 1.0
//! means they come in bunches; markedly below 1.0 means assembly-line
//! spacing. The rest of this module builds on that: per-event-name reports,
//! cumulative thread-group convergence curves, count-per-interval dispersion,
//! and closed-loop cycle ratios.

mod stats;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::ingest::RecordSet;
pub use stats::{mean, nearest_rank, nearest_rank_index, sample_sdev};

/// Label used for the whole-set row in per-label reports.
pub const TOTAL_LABEL: &str = "Total";

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("insufficient events: need at least 2, found {0}")]
    InsufficientEvents(usize),
    #[error("empty record set")]
    EmptySet,
    #[error("bin width must be positive")]
    InvalidBinWidth,
    #[error("unknown thread names: {0}")]
    UnknownThreads(String),
    #[error("checkpoint {0} outside 1..={1}")]
    CheckpointOutOfRange(usize, usize),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Adjacent differences of ascending launch timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffSeries {
    /// Non-negative gaps in milliseconds; one fewer than the event count.
    pub diffs_ms: Vec<f64>,
    /// Last timestamp minus first, milliseconds.
    pub window_ms: f64,
    /// Number of source events.
    pub n_events: usize,
}

/// Computes the inter-arrival gaps of a record set.
///
/// Timestamps are re-sorted internally, so callers may hand over records in
/// any order without affecting any statistic.
pub fn interarrival_diffs(set: &RecordSet) -> Result<DiffSeries, AnalysisError> {
    let mut ts: Vec<i64> = set.timestamps().collect();
    diffs_of_timestamps(&mut ts)
}

fn diffs_of_timestamps(ts: &mut [i64]) -> Result<DiffSeries, AnalysisError> {
    if ts.len() < 2 {
        return Err(AnalysisError::InsufficientEvents(ts.len()));
    }
    ts.sort_unstable();
    let diffs_ms: Vec<f64> = ts.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    let window_ms = (ts[ts.len() - 1] - ts[0]) as f64;
    Ok(DiffSeries {
        diffs_ms,
        window_ms,
        n_events: ts.len(),
    })
}

/// The defined part of a summary row. Present only when the source had at
/// least two events.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    /// Events per second over the observed window. Infinite when every
    /// event shares one timestamp (zero-length window).
    pub tps: f64,
    /// Nearest-rank 50th percentile of the gaps, ms.
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation (n−1 denominator), ms.
    pub sdev: f64,
    /// sdev/mean; `None` when the mean gap is zero (all events simultaneous),
    /// so reports can print a distinguished "undefined" rather than a NaN.
    pub cv: Option<f64>,
    pub p90: f64,
    pub p95: f64,
    pub p99: f64,
    pub min: f64,
    pub max: f64,
}

/// One row of the inter-arrival summary report.
#[derive(Debug, Clone, PartialEq)]
pub struct InterArrivalSummary {
    pub label: String,
    /// Event count for this label.
    pub n: u64,
    /// `None` when the label had fewer than two events.
    pub stats: Option<SummaryStats>,
}

/// Summarizes a gap series: rate, nearest-rank percentiles, mean, sample
/// sdev, and their CoV.
pub fn summarize(diffs: &DiffSeries, label: &str) -> InterArrivalSummary {
    let mut sorted = diffs.diffs_ms.clone();
    sorted.sort_by(f64::total_cmp);

    let mean = stats::mean(&sorted);
    let sdev = stats::sample_sdev(&sorted, mean);
    let cv = if mean > 0.0 { Some(sdev / mean) } else { None };
    let tps = if diffs.window_ms > 0.0 {
        diffs.n_events as f64 / (diffs.window_ms / 1000.0)
    } else {
        f64::INFINITY
    };

    InterArrivalSummary {
        label: label.to_string(),
        n: diffs.n_events as u64,
        stats: Some(SummaryStats {
            tps,
            median: stats::nearest_rank(&sorted, 0.50),
            mean,
            sdev,
            cv,
            p90: stats::nearest_rank(&sorted, 0.90),
            p95: stats::nearest_rank(&sorted, 0.95),
            p99: stats::nearest_rank(&sorted, 0.99),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
        }),
    }
}

/// Per-event-name summary rows plus a whole-set "Total" row.
///
/// Gaps for each label are computed within that label's own sorted
/// timestamps. Rows are ordered label-ascending with Total last. Labels with
/// fewer than two events get a row with `stats: None`.
pub fn per_label_report(set: &RecordSet) -> Result<Vec<InterArrivalSummary>, AnalysisError> {
    if set.is_empty() {
        return Err(AnalysisError::EmptySet);
    }
    let mut by_label: BTreeMap<&str, Vec<i64>> = BTreeMap::new();
    for r in set.records() {
        by_label
            .entry(r.label.as_str())
            .or_default()
            .push(r.timestamp_ms);
    }

    let mut rows = Vec::with_capacity(by_label.len() + 1);
    for (label, mut ts) in by_label {
        rows.push(match diffs_of_timestamps(&mut ts) {
            Ok(d) => summarize(&d, label),
            Err(_) => InterArrivalSummary {
                label: label.to_string(),
                n: ts.len() as u64,
                stats: None,
            },
        });
    }

    let mut all: Vec<i64> = set.timestamps().collect();
    rows.push(match diffs_of_timestamps(&mut all) {
        Ok(d) => summarize(&d, TOTAL_LABEL),
        Err(_) => InterArrivalSummary {
            label: TOTAL_LABEL.to_string(),
            n: set.len() as u64,
            stats: None,
        },
    });
    Ok(rows)
}

/// One point of the CoV-versus-thread-group-size convergence curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreadCurvePoint {
    /// Cumulative thread count N'.
    pub thread_count: usize,
    /// Transactions launched by the first N' threads.
    pub trans: u64,
    pub tps: f64,
    /// Mean gap between adjacent launches of the group, ms.
    pub drt_mean: f64,
    pub drt_sdev: f64,
    /// Gap CoV for the group; `None` when the mean gap is zero.
    pub cov_drt: Option<f64>,
}

/// Computes the convergence curve: for each checkpoint k, the union of
/// records from the first k threads in `ordering` is analyzed as one stream.
///
/// Checkpoints are sorted and deduplicated; each must lie in
/// `1..=ordering.len()`, and every name in `ordering` must occur in the data.
pub fn thread_curve(
    set: &RecordSet,
    ordering: &[String],
    checkpoints: &[usize],
) -> Result<Vec<ThreadCurvePoint>, AnalysisError> {
    if ordering.is_empty() {
        return Err(AnalysisError::Domain("thread ordering is empty".into()));
    }
    let present: HashSet<&str> = set
        .records()
        .iter()
        .map(|r| r.thread_name.as_str())
        .collect();
    let missing: Vec<&str> = ordering
        .iter()
        .map(String::as_str)
        .filter(|name| !present.contains(name))
        .collect();
    if !missing.is_empty() {
        return Err(AnalysisError::UnknownThreads(missing.join(", ")));
    }

    let mut points = Vec::new();
    let mut checks: Vec<usize> = checkpoints.to_vec();
    checks.sort_unstable();
    checks.dedup();

    let mut by_thread: BTreeMap<&str, Vec<i64>> = BTreeMap::new();
    for r in set.records() {
        by_thread
            .entry(r.thread_name.as_str())
            .or_default()
            .push(r.timestamp_ms);
    }

    let mut pool: Vec<i64> = Vec::new();
    let mut taken = 0usize;
    for &k in &checks {
        if k == 0 || k > ordering.len() {
            return Err(AnalysisError::CheckpointOutOfRange(k, ordering.len()));
        }
        while taken < k {
            if let Some(ts) = by_thread.get(ordering[taken].as_str()) {
                pool.extend_from_slice(ts);
            }
            taken += 1;
        }
        let mut ts = pool.clone();
        let diffs = diffs_of_timestamps(&mut ts)?;
        let row = summarize(&diffs, "");
        let s = row.stats.expect("summarize over >=2 events yields stats");
        points.push(ThreadCurvePoint {
            thread_count: k,
            trans: row.n,
            tps: s.tps,
            drt_mean: s.mean,
            drt_sdev: s.sdev,
            cov_drt: s.cv,
        });
    }
    Ok(points)
}

/// Distinct thread names ordered by the numeric suffix after the last '-'
/// ("Thread Group 1-1", "Thread Group 1-2", ... "Thread Group 1-200"), with
/// the text before the suffix as the primary key. Names without a numeric
/// suffix sort last, alphabetically.
pub fn default_thread_ordering(set: &RecordSet) -> Vec<String> {
    let mut names: Vec<&str> = set
        .records()
        .iter()
        .map(|r| r.thread_name.as_str())
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    names.sort_by_key(|name| thread_sort_key(name));
    names.into_iter().map(String::from).collect()
}

fn thread_sort_key(name: &str) -> (String, u64, String) {
    match name.rsplit_once('-') {
        Some((prefix, suffix)) => match suffix.trim().parse::<u64>() {
            Ok(num) => (prefix.to_string(), num, name.to_string()),
            Err(_) => (name.to_string(), u64::MAX, name.to_string()),
        },
        None => (name.to_string(), u64::MAX, name.to_string()),
    }
}

/// Default curve checkpoints: 1–10 by one, 15–50 by five, then 75–200 by
/// twenty-five, intersected with the available thread count.
pub fn default_checkpoints(max_threads: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (1..=10).collect();
    all.extend((15..=50).step_by(5));
    all.extend((75..=200).step_by(25));
    all.retain(|&k| k <= max_threads);
    all
}

/// Binned event counts, optionally paired with theoretical per-bin
/// probabilities for overlay plots.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub origin: f64,
    /// Observations per bin.
    pub counts: Vec<u64>,
    /// Matching theoretical probabilities, when attached.
    pub theoretical: Option<Vec<f64>>,
    /// True when the data span does not fill the final bin.
    pub partial_last: bool,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Observed fraction per bin; sums to 1 for a non-empty histogram.
    pub fn observed_fractions(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Mean of the per-bin counts.
    pub fn count_mean(&self) -> f64 {
        if self.counts.is_empty() {
            return 0.0;
        }
        self.total() as f64 / self.counts.len() as f64
    }

    /// Sample variance (n−1) of the per-bin counts.
    pub fn count_variance(&self) -> f64 {
        let m = self.count_mean();
        let s = sample_sdev(
            &self.counts.iter().map(|&c| c as f64).collect::<Vec<_>>(),
            m,
        );
        s * s
    }

    /// How many bins hold 0, 1, 2, ... events (index = events per bin).
    pub fn count_frequency(&self) -> Vec<u64> {
        let max = self.counts.iter().copied().max().unwrap_or(0) as usize;
        let mut freq = vec![0u64; max + 1];
        for &c in &self.counts {
            freq[c as usize] += 1;
        }
        freq
    }
}

/// Counts events per consecutive fixed-width bin starting at the first
/// timestamp. The final bin is flagged partial when the span does not land
/// on a bin boundary; a boundary-landing last event joins the last bin.
pub fn requests_per_interval(
    set: &RecordSet,
    bin_width_ms: f64,
) -> Result<Histogram, AnalysisError> {
    if set.is_empty() {
        return Err(AnalysisError::EmptySet);
    }
    if bin_width_ms.is_nan() || bin_width_ms <= 0.0 {
        return Err(AnalysisError::InvalidBinWidth);
    }
    let origin = set.min_timestamp().expect("non-empty");
    let span = set.span_ms() as f64;
    let bins = if span == 0.0 {
        1
    } else {
        ((span / bin_width_ms) - 1e-9).ceil().max(1.0) as usize
    };
    let mut counts = vec![0u64; bins];
    for ts in set.timestamps() {
        let idx = (((ts - origin) as f64 / bin_width_ms).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let partial_last = span < bins as f64 * bin_width_ms;
    Ok(Histogram {
        bin_width: bin_width_ms,
        origin: origin as f64,
        counts,
        theoretical: None,
        partial_last,
    })
}

/// Variance-to-mean ratio of per-bin counts: ≈ 1 for Poisson arrivals.
/// `None` when the mean is zero or there are fewer than two bins.
pub fn dispersion_index(hist: &Histogram) -> Option<f64> {
    if hist.counts.len() < 2 {
        return None;
    }
    let m = hist.count_mean();
    if m == 0.0 {
        return None;
    }
    Some(hist.count_variance() / m)
}

/// Folds an interval histogram into its count-frequency form (how many bins
/// hold k events) with the matching Poisson pmf overlay, using the observed
/// mean count as λ.
pub fn poisson_count_histogram(hist: &Histogram) -> Histogram {
    let freq = hist.count_frequency();
    let lambda = hist.count_mean();
    let theoretical: Vec<f64> = (0..freq.len() as u64)
        .map(|k| poisson_pmf(k, lambda).unwrap_or(0.0))
        .collect();
    Histogram {
        bin_width: 1.0,
        origin: 0.0,
        counts: freq,
        theoretical: Some(theoretical),
        partial_last: false,
    }
}

/// Bins the gap series from zero in fixed widths. With `exp_overlay`, each
/// bin also carries the negative-exponential probability mass for a
/// distribution whose mean matches the observed mean gap.
pub fn interarrival_histogram(
    diffs: &DiffSeries,
    bin_width_ms: f64,
    exp_overlay: bool,
) -> Result<Histogram, AnalysisError> {
    if bin_width_ms.is_nan() || bin_width_ms <= 0.0 {
        return Err(AnalysisError::InvalidBinWidth);
    }
    let max = diffs.diffs_ms.iter().copied().fold(0.0f64, f64::max);
    let bins = (max / bin_width_ms).floor() as usize + 1;
    let mut counts = vec![0u64; bins];
    for &d in &diffs.diffs_ms {
        let idx = ((d / bin_width_ms).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let theoretical = if exp_overlay {
        let mean_gap = mean(&diffs.diffs_ms);
        if mean_gap > 0.0 {
            Some(
                (0..bins)
                    .map(|j| {
                        let lo = j as f64 * bin_width_ms;
                        let hi = lo + bin_width_ms;
                        (-lo / mean_gap).exp() - (-hi / mean_gap).exp()
                    })
                    .collect(),
            )
        } else {
            None
        }
    } else {
        None
    };
    Ok(Histogram {
        bin_width: bin_width_ms,
        origin: 0.0,
        counts,
        theoretical,
        partial_last: max < bins as f64 * bin_width_ms,
    })
}

/// Poisson probability of exactly k events given rate λ: e^(−λ)·λ^k / k!.
pub fn poisson_pmf(k: u64, lambda: f64) -> Result<f64, AnalysisError> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(AnalysisError::Domain(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    if lambda < 700.0 && k < 10_000 {
        let mut p = (-lambda).exp();
        for i in 1..=k {
            p *= lambda / i as f64;
        }
        Ok(p)
    } else {
        // Log-space for parameters where e^(−λ) underflows.
        let ln_k_factorial: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
        Ok((-lambda + k as f64 * lambda.ln() - ln_k_factorial).exp())
    }
}

/// Negative-exponential quantile: −mean·ln(1−q) for 0 < q < 1.
pub fn exp_quantile(q: f64, mean: f64) -> Result<f64, AnalysisError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(AnalysisError::Domain(format!(
            "quantile must be in (0,1), got {q}"
        )));
    }
    if mean.is_nan() || mean <= 0.0 {
        return Err(AnalysisError::Domain(format!(
            "mean must be > 0, got {mean}"
        )));
    }
    Ok(-mean * (1.0 - q).ln())
}

/// Closed-loop cycle ratios: how much of each round trip is response time,
/// and the thread count implied by throughput and cycle time.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopRatios {
    pub z_mean: f64,
    pub r_mean: f64,
    pub r_sdev: f64,
    /// r_sdev / r_mean; `None` when r_mean is zero.
    pub cov_r: Option<f64>,
    /// z_mean + r_mean, ms.
    pub rt_mean: f64,
    /// r_mean / rt_mean, a fraction in [0,1].
    pub rort_mean: f64,
    pub tps: f64,
    /// tps × rt_mean (rt in seconds): the implied closed-loop thread count.
    pub n_estimate: f64,
}

/// Derives the closed-loop ratios from think time, response time, and
/// throughput. All times are milliseconds.
pub fn closed_loop_ratios(
    z_mean: f64,
    r_mean: f64,
    r_sdev: f64,
    tps: f64,
) -> Result<ClosedLoopRatios, AnalysisError> {
    for (name, v) in [
        ("z_mean", z_mean),
        ("r_mean", r_mean),
        ("r_sdev", r_sdev),
        ("tps", tps),
    ] {
        if v.is_nan() || v < 0.0 {
            return Err(AnalysisError::Domain(format!(
                "{name} must be >= 0, got {v}"
            )));
        }
    }
    let rt_mean = z_mean + r_mean;
    if rt_mean <= 0.0 {
        return Err(AnalysisError::Domain(
            "z_mean + r_mean must be positive".into(),
        ));
    }
    Ok(ClosedLoopRatios {
        z_mean,
        r_mean,
        r_sdev,
        cov_r: if r_mean > 0.0 {
            Some(r_sdev / r_mean)
        } else {
            None
        },
        rt_mean,
        rort_mean: r_mean / rt_mean,
        tps,
        n_estimate: tps * rt_mean / 1000.0,
    })
}

/// Measures the closed-loop ratios from a generated or captured log: R from
/// the elapsed column, cycle time from per-thread launch gaps, throughput
/// from the whole window. Think time falls out as rt_mean − r_mean.
pub fn closed_loop_observed(set: &RecordSet) -> Result<ClosedLoopRatios, AnalysisError> {
    let overall = interarrival_diffs(set)?;
    let tps = if overall.window_ms > 0.0 {
        overall.n_events as f64 / (overall.window_ms / 1000.0)
    } else {
        return Err(AnalysisError::Domain("zero-length window".into()));
    };

    let elapsed: Vec<f64> = set.records().iter().map(|r| r.elapsed_ms as f64).collect();
    let r_mean = mean(&elapsed);
    let r_sdev = sample_sdev(&elapsed, r_mean);

    let mut by_thread: BTreeMap<&str, Vec<i64>> = BTreeMap::new();
    for r in set.records() {
        by_thread
            .entry(r.thread_name.as_str())
            .or_default()
            .push(r.timestamp_ms);
    }
    let mut gap_sum = 0.0;
    let mut gap_count = 0u64;
    for ts in by_thread.values_mut() {
        ts.sort_unstable();
        for w in ts.windows(2) {
            gap_sum += (w[1] - w[0]) as f64;
            gap_count += 1;
        }
    }
    if gap_count == 0 {
        return Err(AnalysisError::InsufficientEvents(1));
    }
    let rt_mean = gap_sum / gap_count as f64;
    let z_mean = (rt_mean - r_mean).max(0.0);
    closed_loop_ratios(z_mean, r_mean, r_sdev, tps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{RecordSet, RequestRecord};
    use crate::sample::aggregate_report;

    fn record(ts: i64, label: &str, thread: &str) -> RequestRecord {
        RequestRecord {
            timestamp_ms: ts,
            elapsed_ms: 5,
            label: label.into(),
            response_code: "200".into(),
            response_message: "OK".into(),
            thread_name: thread.into(),
            data_type: "text".into(),
            success: true,
            byte_count: 100,
            first_byte_ms: 2,
        }
    }

    fn set_of(ts: &[i64]) -> RecordSet {
        RecordSet::new(
            ts.iter()
                .map(|&t| record(t, "event", "Thread Group 1-1"))
                .collect(),
            1,
        )
    }

    #[test]
    fn first_gap_of_the_sample_log_is_29ms() {
        let diffs = interarrival_diffs(&aggregate_report()).unwrap();
        assert_eq!(diffs.diffs_ms[0], 29.0);
        assert_eq!(diffs.n_events, 14);
    }

    #[test]
    fn equal_timestamps_give_zero_gap() {
        let diffs = interarrival_diffs(&set_of(&[500, 500])).unwrap();
        assert_eq!(diffs.diffs_ms, vec![0.0]);
        assert_eq!(diffs.window_ms, 0.0);
    }

    #[test]
    fn diffs_of_small_series() {
        let diffs = interarrival_diffs(&set_of(&[10, 15, 25, 40])).unwrap();
        assert_eq!(diffs.diffs_ms, vec![5.0, 10.0, 15.0]);
        assert_eq!(diffs.window_ms, 30.0);
    }

    #[test]
    fn single_record_is_insufficient() {
        assert!(matches!(
            interarrival_diffs(&set_of(&[42])),
            Err(AnalysisError::InsufficientEvents(1))
        ));
    }

    #[test]
    fn gaps_sum_to_span_and_order_does_not_matter() {
        let a = set_of(&[100, 700, 300, 250, 910]);
        let d = interarrival_diffs(&a).unwrap();
        let sum: f64 = d.diffs_ms.iter().sum();
        assert_eq!(sum, d.window_ms);
        assert_eq!(d.window_ms, 810.0);
    }

    #[test]
    fn summary_of_known_gaps() {
        // Timestamps 0,1,3,6,10 give gaps 1,2,3,4.
        let set = set_of(&[1000, 1001, 1003, 1006, 1010]);
        let s = summarize(&interarrival_diffs(&set).unwrap(), "x")
            .stats
            .unwrap();
        assert!((s.mean - 2.5).abs() < 1e-12);
        assert!((s.sdev - 1.2909944487358056).abs() < 1e-12);
        assert!((s.cv.unwrap() - 0.5163977794943222).abs() < 1e-12);
        assert_eq!(s.median, 2.0);
        assert_eq!(s.min, 1.0);
        assert_eq!(s.max, 4.0);
    }

    #[test]
    fn constant_gaps_have_zero_cv() {
        let set = set_of(&[100, 105, 110, 115, 120]);
        let s = summarize(&interarrival_diffs(&set).unwrap(), "x")
            .stats
            .unwrap();
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.sdev, 0.0);
        assert_eq!(s.cv, Some(0.0));
    }

    #[test]
    fn all_simultaneous_events_report_undefined_cv() {
        let set = set_of(&[700, 700, 700]);
        let s = summarize(&interarrival_diffs(&set).unwrap(), "x")
            .stats
            .unwrap();
        assert_eq!(s.mean, 0.0);
        assert_eq!(s.cv, None);
        assert!(s.tps.is_infinite());
    }

    #[test]
    fn tps_matches_event_count_over_window() {
        // 38072 events over exactly 1200 s.
        let n = 38072u64;
        let d = DiffSeries {
            diffs_ms: vec![0.0; (n - 1) as usize],
            window_ms: 1_200_000.0,
            n_events: n as usize,
        };
        let s = summarize(&d, TOTAL_LABEL).stats.unwrap();
        assert!((s.tps - 31.726666666666667).abs() < 1e-9);
    }

    #[test]
    fn published_curve_row_cov_ratio() {
        // A known report row: sdev 3555.83 over mean 6391.96.
        let cv = 3555.83f64 / 6391.96;
        assert!((cv - 0.5563).abs() < 5e-5);
    }

    #[test]
    fn per_label_rows_are_sorted_with_total_last() {
        let set = aggregate_report();
        let rows = per_label_report(&set).unwrap();
        let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "010_Home",
                "012_Home_jpg",
                "020_Department",
                "022_Department_jpg",
                "040_Statistics",
                TOTAL_LABEL
            ]
        );
        assert_eq!(rows.last().unwrap().n, 14);
        // 040_Statistics has a single event: stats undefined, flagged by None.
        let stats_row = rows.iter().find(|r| r.label == "040_Statistics").unwrap();
        assert_eq!(stats_row.n, 1);
        assert!(stats_row.stats.is_none());
    }

    #[test]
    fn single_label_set_matches_total_row() {
        let set = set_of(&[10, 30, 70, 150]);
        let rows = per_label_report(&set).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].stats, rows[1].stats);
        assert_eq!(rows[0].label, "event");
        assert_eq!(rows[1].label, TOTAL_LABEL);
    }

    #[test]
    fn interleaved_label_means_exceed_total_mean() {
        // 20 events, two labels strictly alternating 50 ms apart. Brute-force
        // reference: label gaps are 100 ms, total gaps 50 ms.
        let mut records = Vec::new();
        for i in 0..20i64 {
            let label = if i % 2 == 0 { "even" } else { "odd" };
            records.push(record(1000 + 50 * i, label, "Thread Group 1-1"));
        }
        let set = RecordSet::new(records, 1);
        let rows = per_label_report(&set).unwrap();
        let total_mean = rows.last().unwrap().stats.as_ref().unwrap().mean;

        // Independent brute-force check of the per-label means.
        for label in ["even", "odd"] {
            let mut ts: Vec<i64> = set
                .records()
                .iter()
                .filter(|r| r.label == label)
                .map(|r| r.timestamp_ms)
                .collect();
            ts.sort_unstable();
            let gaps: Vec<f64> = ts.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
            let brute_mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
            let row = rows.iter().find(|r| r.label == label).unwrap();
            let reported = row.stats.as_ref().unwrap().mean;
            assert!((reported - brute_mean).abs() < 1e-12);
            assert!(reported > total_mean);
        }
    }

    #[test]
    fn curve_at_full_thread_count_equals_total_cv() {
        let set = aggregate_report();
        let ordering = default_thread_ordering(&set);
        let k = ordering.len();
        let points = thread_curve(&set, &ordering, &[k]).unwrap();
        let total = per_label_report(&set).unwrap().pop().unwrap();
        let total_stats = total.stats.unwrap();
        assert_eq!(points[0].cov_drt, total_stats.cv);
        assert_eq!(points[0].trans, total.n);
        assert_eq!(points[0].drt_mean, total_stats.mean);
    }

    #[test]
    fn two_even_threads_merge_to_constant_gaps() {
        let mut records = Vec::new();
        for t in [0i64, 10, 20] {
            records.push(record(1000 + t, "e", "t-1"));
        }
        for t in [5i64, 15, 25] {
            records.push(record(1000 + t, "e", "t-2"));
        }
        let set = RecordSet::new(records, 1);
        let points = thread_curve(&set, &["t-1".into(), "t-2".into()], &[1, 2]).unwrap();
        assert_eq!(points[1].cov_drt, Some(0.0));
        assert_eq!(points[1].drt_mean, 5.0);
        assert_eq!(points[1].trans, 6);
    }

    #[test]
    fn curve_rejects_unknown_thread_names() {
        let set = aggregate_report();
        let err = thread_curve(&set, &["no-such-thread".into()], &[1]).unwrap_err();
        match err {
            AnalysisError::UnknownThreads(names) => assert!(names.contains("no-such-thread")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn default_ordering_sorts_by_numeric_suffix() {
        let mut records = Vec::new();
        for k in [10i64, 2, 1, 100] {
            records.push(record(1000 + k, "e", &format!("Thread Group 1-{k}")));
        }
        let set = RecordSet::new(records, 1);
        let names = default_thread_ordering(&set);
        assert_eq!(
            names,
            [
                "Thread Group 1-1",
                "Thread Group 1-2",
                "Thread Group 1-10",
                "Thread Group 1-100"
            ]
        );
    }

    #[test]
    fn default_checkpoints_match_report_rows() {
        assert_eq!(
            default_checkpoints(200),
            vec![
                1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 35, 40, 45, 50, 75, 100, 125, 150,
                175, 200
            ]
        );
        assert_eq!(default_checkpoints(7), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn interval_histogram_counts_and_edges() {
        // Events at 0-based offsets 0,1,2 ms with 10 ms bins: one bin.
        let set = set_of(&[1000, 1001, 1002]);
        let h = requests_per_interval(&set, 10.0).unwrap();
        assert_eq!(h.counts, vec![3]);
        assert_eq!(h.total(), 3);

        // Span handled inclusively: an event exactly on the final boundary
        // joins the last bin rather than opening a new one.
        let set = set_of(&[1000, 1005, 1010, 1020]);
        let h = requests_per_interval(&set, 10.0).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        assert!(!h.partial_last);
    }

    #[test]
    fn dispersion_of_hand_counts() {
        let h = Histogram {
            bin_width: 1.0,
            origin: 0.0,
            counts: vec![0, 4],
            theoretical: None,
            partial_last: false,
        };
        assert!((h.count_mean() - 2.0).abs() < 1e-12);
        assert!((h.count_variance() - 8.0).abs() < 1e-12);
        assert!((dispersion_index(&h).unwrap() - 4.0).abs() < 1e-12);

        let flat = Histogram {
            counts: vec![3, 3, 3],
            ..h.clone()
        };
        assert_eq!(dispersion_index(&flat), Some(0.0));

        let empty = Histogram {
            counts: vec![0, 0],
            ..h
        };
        assert_eq!(dispersion_index(&empty), None);
    }

    #[test]
    fn count_frequency_table() {
        let h = Histogram {
            bin_width: 1.0,
            origin: 0.0,
            counts: vec![0, 2, 1, 2, 0, 0],
            theoretical: None,
            partial_last: false,
        };
        assert_eq!(h.count_frequency(), vec![3, 1, 2]);
    }

    #[test]
    fn poisson_pmf_values() {
        assert!((poisson_pmf(0, 2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(poisson_pmf(0, 0.0).unwrap(), 1.0);
        assert_eq!(poisson_pmf(3, 0.0).unwrap(), 0.0);
        // k=2, λ=2: e^-2·4/2
        assert!((poisson_pmf(2, 2.0).unwrap() - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!(poisson_pmf(1, -1.0).is_err());
        // Large-λ log-space path stays finite and sane.
        let p = poisson_pmf(1000, 1000.0).unwrap();
        assert!(p > 0.012 && p < 0.013);
    }

    #[test]
    fn exp_quantile_values() {
        // p90 of a 31.52 ms mean: 31.52·ln 10 ≈ 72.6.
        let q = exp_quantile(0.90, 31.52).unwrap();
        assert!((q - 31.52 * 10f64.ln()).abs() < 1e-12);
        assert!((q - 72.577).abs() < 0.01);
        assert!(exp_quantile(0.0, 1.0).is_err());
        assert!(exp_quantile(1.0, 1.0).is_err());
        assert!(exp_quantile(0.5, 0.0).is_err());
    }

    #[test]
    fn ratios_for_published_runs() {
        // Z 1000, R 254, Tps 159.16: RoRT ≈ 20.26 %, N ≈ 199.6.
        let r = closed_loop_ratios(1000.0, 254.0, 536.0, 159.16).unwrap();
        assert_eq!(r.rt_mean, 1254.0);
        assert!((r.rort_mean - 0.2026).abs() < 5e-4);
        assert!((r.n_estimate - 199.59).abs() < 0.01);
        assert!((r.cov_r.unwrap() - 2.11).abs() < 0.005);

        // Z 2500, R 75: RoRT ≈ 2.91 %.
        let r = closed_loop_ratios(2500.0, 75.0, 229.0, 77.56).unwrap();
        assert!((r.rort_mean - 0.0291).abs() < 5e-5);
    }

    #[test]
    fn ratios_with_zero_response_time() {
        let r = closed_loop_ratios(1000.0, 0.0, 0.0, 12.5).unwrap();
        assert_eq!(r.rort_mean, 0.0);
        assert_eq!(r.cov_r, None);
        assert!((r.n_estimate - 12.5).abs() < 1e-12);
    }

    #[test]
    fn ratios_reject_bad_domains() {
        assert!(closed_loop_ratios(-1.0, 0.0, 0.0, 1.0).is_err());
        assert!(closed_loop_ratios(0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn cv_is_scale_invariant() {
        let base = [100i64, 130, 190, 220, 400];
        let scaled: Vec<i64> = base.iter().map(|t| t * 7).collect();
        let a = summarize(&interarrival_diffs(&set_of(&base)).unwrap(), "a");
        let b = summarize(&interarrival_diffs(&set_of(&scaled)).unwrap(), "b");
        let (ca, cb) = (a.stats.unwrap().cv.unwrap(), b.stats.unwrap().cv.unwrap());
        assert!((ca - cb).abs() < 1e-12);
    }

    #[test]
    fn percentiles_are_elements_of_the_gap_list() {
        let set = set_of(&[3, 10, 11, 300, 302, 1000, 1500, 1501, 1502, 2000]);
        let d = interarrival_diffs(&set).unwrap();
        let s = summarize(&d, "x").stats.unwrap();
        for v in [s.median, s.p90, s.p95, s.p99, s.min, s.max] {
            assert!(d.diffs_ms.contains(&v), "{v} not an observed gap");
        }
        assert!(s.min <= s.median && s.median <= s.p90);
        assert!(s.p90 <= s.p95 && s.p95 <= s.p99 && s.p99 <= s.max);
    }
}
