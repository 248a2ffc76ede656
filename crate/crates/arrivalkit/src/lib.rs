//! arrivalkit — request launch-timing quality for load tests.
//!
//! A load generator's virtual-user threads can sync up and launch requests
//! in bunches instead of independently, the way a population of real users
//! would. This crate measures that: it sorts request launch timestamps,
//! takes adjacent differences, and reports their coefficient of variation
//! (CoV). A CoV near 1.0 means independent, Poisson-like launches; well
//! above 1.0 means bunching; well below means assembly-line spacing.
//!
//! The toolkit has four parts:
//!
//! * [`ingest`] — parse, merge, trim, and filter JMeter Aggregate Report
//!   CSV logs into ordered record sets.
//! * [`analysis`] — inter-arrival statistics, per-event-name reports,
//!   thread-group convergence curves, count-per-interval dispersion, and
//!   closed-loop cycle ratios.
//! * [`simulator`] — deterministic open-loop and closed-loop (virtual-user)
//!   log generation with pluggable think-time and SUT response models,
//!   emitting the same CSV the parser reads.
//! * [`report`] — text/CSV/JSON tables and dependency-free SVG plots.
//!
//! The runnable examples under `examples/` walk through each capability;
//! the `arrivalkit` binary wires the same operations into a small CLI.
//!
//! ```
//! use arrivalkit::analysis::{interarrival_diffs, summarize};
//! use arrivalkit::sample::aggregate_report;
//!
//! let log = aggregate_report();
//! let diffs = interarrival_diffs(&log).unwrap();
//! assert_eq!(diffs.diffs_ms[0], 29.0);
//! let total = summarize(&diffs, "Total");
//! assert_eq!(total.n, 14);
//! ```

pub mod analysis;
pub mod cli;
pub mod ingest;
pub mod report;
pub mod sample;
pub mod simulator;

pub use analysis::{
    closed_loop_observed, closed_loop_ratios, default_checkpoints, default_thread_ordering,
    dispersion_index, exp_quantile, interarrival_diffs, per_label_report, poisson_pmf,
    requests_per_interval, summarize, thread_curve, ClosedLoopRatios, DiffSeries, Histogram,
    InterArrivalSummary, ThreadCurvePoint,
};
pub use ingest::{
    filter, merge, parse_log, trim, HeaderMode, RecordSet, RequestRecord, TrimWindow,
};
pub use report::{render_summary_table, render_thread_curve, write_records_csv, OutputFormat};
pub use simulator::{
    simulate, simulate_closed_loop, simulate_open_loop, ClosedLoopConfig, LabelMix, OpenLoopConfig,
    SimConfig, SutModelSpec, ThinkTimeSpec,
};
