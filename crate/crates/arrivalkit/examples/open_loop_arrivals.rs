//! Generate the reference traffic pattern: independent uniform arrivals.
//!
//! Draws 100000 launch instants uniformly over the horizon — the canonical
//! Poisson process. The inter-arrival gaps then follow a negative
//! exponential (cv ~ 1, median/mean ~ ln 2) and the counts per 10-second
//! interval are Poisson (variance/mean ~ 1). This is the yardstick every
//! load generator is measured against.
//!
//! Run with: cargo run -p arrivalkit --example open_loop_arrivals

use arrivalkit::analysis::{
    dispersion_index, interarrival_diffs, poisson_count_histogram, requests_per_interval, summarize,
};
use arrivalkit::report::{render_histogram_data, OutputFormat};
use arrivalkit::simulator::{simulate_open_loop, LabelMix, OpenLoopConfig, DEFAULT_EPOCH_MS};

fn main() {
    let config = OpenLoopConfig {
        arrivals: 100_000,
        horizon_ms: 500_000_000,
        seed: 7,
        labels: LabelMix::single(),
        epoch_ms: DEFAULT_EPOCH_MS,
    };
    let log = simulate_open_loop(&config).expect("valid config");

    let stats = summarize(&interarrival_diffs(&log).unwrap(), "Total")
        .stats
        .unwrap();
    println!("gap statistics for {} arrivals:", log.len());
    println!(
        "  mean {:.1} ms, sdev {:.1} ms, cv {:.4} (independent ~ 1.0)",
        stats.mean,
        stats.sdev,
        stats.cv.unwrap()
    );
    println!(
        "  median/mean {:.4} (ln 2 = {:.4})",
        stats.median / stats.mean,
        2f64.ln()
    );
    println!(
        "  p90/mean    {:.4} (ln 10 = {:.4})",
        stats.p90 / stats.mean,
        10f64.ln()
    );
    println!(
        "  p95/mean    {:.4} (ln 20 = {:.4})",
        stats.p95 / stats.mean,
        20f64.ln()
    );

    let interval = requests_per_interval(&log, 10_000.0).unwrap();
    println!(
        "\ncounts per 10 s interval: {} bins, mean {:.3}, variance {:.3}, dispersion {:.4} (Poisson ~ 1)",
        interval.counts.len(),
        interval.count_mean(),
        interval.count_variance(),
        dispersion_index(&interval).unwrap()
    );

    println!("\nobserved count frequencies vs the Poisson pmf:");
    let overlay = poisson_count_histogram(&interval);
    print!(
        "{}",
        render_histogram_data(&overlay, OutputFormat::Text, None)
    );
}
