//! Deterministic generation of request logs.
//!
//! Two generators share one emitted format (the Aggregate Report CSV):
//!
//! * **Open loop** — launch instants drawn independently and uniformly over
//!   the horizon, the canonical Poisson-like reference traffic.
//! * **Closed loop** — a fixed pool of virtual-user threads, each cycling
//!   think → launch → response → think, the way load tools drive traffic.
//!   Responses come from a pluggable SUT model; the shared-queue model feeds
//!   response-time coupling back into the launch pattern.
//!
//! Virtual time is real-valued milliseconds internally and is rounded to
//! integer milliseconds only when records are materialized. The engine is
//! single-threaded over a virtual clock; determinism, given a config and
//! seed, is part of the contract.

mod rng;
mod sut;
mod think;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

pub use rng::Stream;
pub use sut::{SutModel, SutModelSpec, SutResponse};
pub use think::ThinkTimeSpec;

use crate::ingest::{RecordSet, RequestRecord};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("invalid spec '{spec}': {reason}")]
    BadSpec { spec: String, reason: String },
}

/// Default epoch added to virtual time when materializing timestamps, so
/// emitted logs carry realistic Unix-millisecond values.
pub const DEFAULT_EPOCH_MS: i64 = 1_000_000_000_000;

/// Event names and their selection weights; each name carries a fixed byte
/// count so the emitted plumbing columns stay deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMix {
    entries: Vec<(String, f64)>,
    cumulative: Vec<f64>,
}

impl LabelMix {
    pub fn new(entries: Vec<(String, f64)>) -> Result<LabelMix, SimError> {
        if entries.is_empty() {
            return Err(SimError::InvalidConfig("label mix is empty".into()));
        }
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut total = 0.0;
        for (name, weight) in &entries {
            if name.is_empty() {
                return Err(SimError::InvalidConfig("empty label name".into()));
            }
            if weight.is_nan() || *weight <= 0.0 {
                return Err(SimError::InvalidConfig(format!(
                    "label '{name}' weight must be > 0"
                )));
            }
            total += weight;
            cumulative.push(total);
        }
        for c in &mut cumulative {
            *c /= total;
        }
        Ok(LabelMix {
            entries,
            cumulative,
        })
    }

    /// Single label "request" with weight 1.
    pub fn single() -> LabelMix {
        LabelMix::new(vec![("request".to_string(), 1.0)]).expect("valid default mix")
    }

    /// Parses `name:weight,name:weight,...`; a bare name means weight 1.
    pub fn parse(text: &str) -> Result<LabelMix, SimError> {
        let bad = |reason: String| SimError::BadSpec {
            spec: text.to_string(),
            reason,
        };
        let mut entries = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            match part.rsplit_once(':') {
                Some((name, w)) => {
                    let weight = w
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| bad(format!("bad weight '{w}'")))?;
                    entries.push((name.trim().to_string(), weight));
                }
                None => entries.push((part.to_string(), 1.0)),
            }
        }
        if entries.is_empty() {
            return Err(bad("no labels given".into()));
        }
        LabelMix::new(entries)
    }

    fn pick(&self, stream: &mut Stream) -> usize {
        let u = stream.next_f64();
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.entries.len() - 1)
    }

    fn name(&self, idx: usize) -> &str {
        &self.entries[idx].0
    }

    // Stable per-label payload size for the Byte Count column.
    fn byte_count(&self, idx: usize) -> i64 {
        4096 + 2048 * (idx as i64 % 8)
    }

    pub fn describe(&self) -> String {
        self.entries
            .iter()
            .map(|(n, w)| format!("{n}:{w}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Open-loop scenario: `arrivals` independent launch instants uniform over
/// `[0, horizon_ms]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenLoopConfig {
    pub arrivals: u64,
    pub horizon_ms: u64,
    pub seed: u64,
    pub labels: LabelMix,
    pub epoch_ms: i64,
}

/// Closed-loop scenario: `threads` virtual users cycling over think times
/// and SUT responses until the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopConfig {
    pub threads: u32,
    pub horizon_ms: u64,
    pub think: ThinkTimeSpec,
    pub sut: SutModelSpec,
    pub seed: u64,
    pub labels: LabelMix,
    pub epoch_ms: i64,
}

/// A complete simulation scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum SimConfig {
    Open(OpenLoopConfig),
    Closed(ClosedLoopConfig),
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        match self {
            SimConfig::Open(c) => {
                if c.arrivals < 2 {
                    return Err(SimError::InvalidConfig(
                        "open loop needs at least 2 arrivals".into(),
                    ));
                }
                if c.horizon_ms == 0 {
                    return Err(SimError::InvalidConfig("horizon must be positive".into()));
                }
                if c.epoch_ms < 1 {
                    return Err(SimError::InvalidConfig("epoch must be positive".into()));
                }
            }
            SimConfig::Closed(c) => {
                if c.threads == 0 {
                    return Err(SimError::InvalidConfig(
                        "closed loop needs at least 1 thread".into(),
                    ));
                }
                if c.horizon_ms == 0 {
                    return Err(SimError::InvalidConfig("horizon must be positive".into()));
                }
                if c.epoch_ms < 1 {
                    return Err(SimError::InvalidConfig("epoch must be positive".into()));
                }
                c.think.validate()?;
                c.sut.validate()?;
                if c.think.max_ms() == Some(0.0) && c.sut.is_zero() {
                    return Err(SimError::InvalidConfig(
                        "zero think time with a zero SUT makes no time progress".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// One-line effective configuration, printed by the CLI for
    /// reproducibility.
    pub fn describe(&self) -> String {
        match self {
            SimConfig::Open(c) => format!(
                "mode=open arrivals={} duration-ms={} seed={} labels={} epoch-ms={}",
                c.arrivals,
                c.horizon_ms,
                c.seed,
                c.labels.describe(),
                c.epoch_ms
            ),
            SimConfig::Closed(c) => format!(
                "mode=closed threads={} think={} sut={} duration-ms={} seed={} labels={} epoch-ms={}",
                c.threads,
                c.think,
                c.sut,
                c.horizon_ms,
                c.seed,
                c.labels.describe(),
                c.epoch_ms
            ),
        }
    }
}

/// Runs whichever scenario the config describes.
pub fn simulate(config: &SimConfig) -> Result<RecordSet, SimError> {
    match config {
        SimConfig::Open(c) => simulate_open_loop(c),
        SimConfig::Closed(c) => simulate_closed_loop(c),
    }
}

/// Draws `arrivals` launch instants independently and uniformly over the
/// horizon — the reference pattern that yields Poisson counts per interval
/// and negative-exponential gaps.
pub fn simulate_open_loop(config: &OpenLoopConfig) -> Result<RecordSet, SimError> {
    SimConfig::Open(config.clone()).validate()?;
    let mut stream = Stream::derive(config.seed, 0);
    let horizon = config.horizon_ms as f64;
    let mut draws: Vec<(f64, usize)> = (0..config.arrivals)
        .map(|_| {
            let t = stream.next_f64() * horizon;
            let label = config.labels.pick(&mut stream);
            (t, label)
        })
        .collect();
    draws.sort_by(|a, b| a.0.total_cmp(&b.0));

    let records: Vec<RequestRecord> = draws
        .into_iter()
        .map(|(t, label_idx)| RequestRecord {
            timestamp_ms: config.epoch_ms + t.round() as i64,
            elapsed_ms: 0,
            label: config.labels.name(label_idx).to_string(),
            response_code: "200".into(),
            response_message: "OK".into(),
            thread_name: "open-1".into(),
            data_type: "text".into(),
            success: true,
            byte_count: config.labels.byte_count(label_idx),
            first_byte_ms: 0,
        })
        .collect();
    Ok(RecordSet::new(records, 1))
}

// Pending launch, ordered for a min-heap on (time, seq). The sequence number
// breaks virtual-time ties deterministically.
struct LaunchEvent {
    time: f64,
    seq: u64,
    thread: u32,
}

impl PartialEq for LaunchEvent {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for LaunchEvent {}
impl PartialOrd for LaunchEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for LaunchEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the earliest event.
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Runs the virtual-user thread pool.
///
/// Each thread k (named "Thread Group 1-k") draws from its own seed-derived
/// stream and cycles: draw Z, launch at now + Z (that instant becomes the
/// record timestamp), obtain R from the SUT model, resume at launch + R.
/// Launches are recorded only within `[0, horizon]`; a thread whose next
/// launch would fall past the horizon stops, rather than lingering on a
/// fully drawn think time the way a real load tool would.
pub fn simulate_closed_loop(config: &ClosedLoopConfig) -> Result<RecordSet, SimError> {
    SimConfig::Closed(config.clone()).validate()?;
    let horizon = config.horizon_ms as f64;
    let mut streams: Vec<Stream> = (0..config.threads)
        .map(|k| Stream::derive(config.seed, k as u64 + 1))
        .collect();
    let mut sut = config.sut.build();

    let mut heap: BinaryHeap<LaunchEvent> = BinaryHeap::new();
    let mut seq = 0u64;
    for k in 0..config.threads {
        let z = config.think.sample(&mut streams[k as usize]);
        if z <= horizon {
            heap.push(LaunchEvent {
                time: z,
                seq,
                thread: k,
            });
            seq += 1;
        }
    }

    let mut records = Vec::new();
    while let Some(event) = heap.pop() {
        let stream = &mut streams[event.thread as usize];
        let label_idx = config.labels.pick(stream);
        let response = sut.respond(event.time, stream);
        records.push(RequestRecord {
            timestamp_ms: config.epoch_ms + event.time.round() as i64,
            elapsed_ms: response.elapsed_ms.round() as i64,
            label: config.labels.name(label_idx).to_string(),
            response_code: "200".into(),
            response_message: "OK".into(),
            thread_name: format!("Thread Group 1-{}", event.thread + 1),
            data_type: "text".into(),
            success: true,
            byte_count: config.labels.byte_count(label_idx),
            first_byte_ms: response.first_byte_ms.round() as i64,
        });
        let z = config.think.sample(stream);
        let next = event.time + response.elapsed_ms + z;
        if next <= horizon {
            heap.push(LaunchEvent {
                time: next,
                seq,
                thread: event.thread,
            });
            seq += 1;
        }
    }
    Ok(RecordSet::new(records, 1))
}
