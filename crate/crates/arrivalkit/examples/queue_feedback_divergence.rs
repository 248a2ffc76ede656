//! Closed-loop feedback gone wrong: launches bunch up when response time
//! is a big, volatile share of the round trip.
//!
//! The SUT here is a single shared FIFO server with a heavy-tailed service
//! distribution. Occasional slow requests pile the whole thread pool into
//! the queue, and the synchronized releases show up as a gap CoV well above
//! 1.0 at the full pool — even though a single thread's own launch pattern
//! still looks like its uniform think time. Compare with the zero-SUT run
//! in `superposition_curve`, which converges to 1.0.
//!
//! Run with: cargo run -p arrivalkit --example queue_feedback_divergence

use arrivalkit::analysis::{closed_loop_observed, default_thread_ordering, thread_curve};
use arrivalkit::ingest::{trim, TrimWindow};
use arrivalkit::report::{render_ratios, render_thread_curve, OutputFormat};
use arrivalkit::simulator::{
    simulate_closed_loop, ClosedLoopConfig, LabelMix, SutModelSpec, ThinkTimeSpec, DEFAULT_EPOCH_MS,
};

fn main() {
    let config = ClosedLoopConfig {
        threads: 200,
        horizon_ms: 1_500_000,
        think: ThinkTimeSpec::Uniform {
            offset_ms: 200.0,
            range_ms: 1_600.0,
        },
        sut: SutModelSpec::Queue {
            servers: 1,
            service_mean_ms: 5.5,
            service_cov: 9.0,
        },
        seed: 3,
        labels: LabelMix::single(),
        epoch_ms: DEFAULT_EPOCH_MS,
    };
    let log = simulate_closed_loop(&config).expect("valid config");

    // Drop the warm-up and wind-down stretches before measuring.
    let window = TrimWindow::new(120_000, 180_000).expect("valid window");
    let trimmed = trim(&log, &window).expect("records remain");
    println!("analyzing {} launches after trimming\n", trimmed.len());

    let observed = closed_loop_observed(&trimmed).expect("closed-loop log");
    println!("measured cycle ratios (z from gaps, r from the elapsed column):");
    print!("{}", render_ratios(&observed, OutputFormat::Text));
    println!(
        "\nresponse share of the round trip is {:.1}% with CoV_R {:.2} — the danger zone\n",
        observed.rort_mean * 100.0,
        observed.cov_r.unwrap_or(0.0)
    );

    let ordering = default_thread_ordering(&trimmed);
    let points = thread_curve(&trimmed, &ordering, &[1, 10, 50, 100, 200]).expect("curve");
    print!(
        "{}",
        render_thread_curve(
            &points,
            OutputFormat::Text,
            Some("Coefficient of Variation (gap CoV) vs thread-group size")
        )
    );
    println!("\ncv at 200 threads well above 1.0: the pool is launching requests in bunches");
}
