//! How many virtual-user threads does it take for merged launch times to
//! look Poisson?
//!
//! Each closed-loop thread draws uniform think times, so a single thread's
//! gap CoV sits near 1/sqrt(3) ~ 0.577. Merging more and more threads
//! drives the pooled CoV toward 1.0 — superposition of many independent
//! renewal streams looks Poisson no matter what the per-thread distribution
//! is. The curve below typically crosses 0.95 around ten threads and
//! settles at 1.00 by fifty.
//!
//! Run with: cargo run -p arrivalkit --example superposition_curve

use arrivalkit::analysis::{default_checkpoints, default_thread_ordering, thread_curve};
use arrivalkit::report::{render_thread_curve, OutputFormat};
use arrivalkit::simulator::{
    simulate_closed_loop, ClosedLoopConfig, LabelMix, SutModelSpec, ThinkTimeSpec, DEFAULT_EPOCH_MS,
};

fn main() {
    let config = ClosedLoopConfig {
        threads: 200,
        horizon_ms: 1_500_000,
        think: ThinkTimeSpec::Uniform {
            offset_ms: 0.0,
            range_ms: 12_500.0,
        },
        sut: SutModelSpec::Zero,
        seed: 1,
        labels: LabelMix::single(),
        epoch_ms: DEFAULT_EPOCH_MS,
    };
    let log = simulate_closed_loop(&config).expect("valid config");
    println!(
        "simulated {} launches from {} threads\n",
        log.len(),
        config.threads
    );

    let ordering = default_thread_ordering(&log);
    let checkpoints = default_checkpoints(ordering.len());
    let points = thread_curve(&log, &ordering, &checkpoints).expect("threads present");
    print!(
        "{}",
        render_thread_curve(
            &points,
            OutputFormat::Text,
            Some("Coefficient of Variation (gap CoV) vs thread-group size")
        )
    );
    println!(
        "\nsingle thread ~ 1/sqrt(3) = {:.3}; full pool ~ 1.0",
        1.0 / 3f64.sqrt()
    );
}
