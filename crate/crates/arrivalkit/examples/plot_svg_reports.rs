//! Write plot-ready SVG files: a convergence curve and an
//! observed-vs-theoretical histogram overlay.
//!
//! The SVG renderer is dependency-free and deterministic — the same data
//! always produces the same bytes, so the files work as golden fixtures
//! too.
//!
//! Run with: cargo run -p arrivalkit --example plot_svg_reports

use arrivalkit::analysis::{
    default_checkpoints, default_thread_ordering, poisson_count_histogram, requests_per_interval,
    thread_curve,
};
use arrivalkit::report::{curve_series, histogram_series, render_svg, PlotKind};
use arrivalkit::simulator::{
    simulate_closed_loop, simulate_open_loop, ClosedLoopConfig, LabelMix, OpenLoopConfig,
    SutModelSpec, ThinkTimeSpec, DEFAULT_EPOCH_MS,
};

fn main() {
    let out_dir = std::env::temp_dir().join("arrivalkit_plots");
    std::fs::create_dir_all(&out_dir).expect("create output dir");

    // Convergence curve from a 200-thread uniform-think run.
    let closed = ClosedLoopConfig {
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
    let log = simulate_closed_loop(&closed).expect("valid config");
    let ordering = default_thread_ordering(&log);
    let points = thread_curve(&log, &ordering, &default_checkpoints(ordering.len())).unwrap();
    let curve_svg = render_svg(
        PlotKind::Curve,
        "Gap CoV vs thread-group size",
        &[curve_series("uniform think, zero SUT", &points)],
    )
    .expect("non-empty series");
    let curve_path = out_dir.join("cv_curve.svg");
    std::fs::write(&curve_path, curve_svg).expect("write curve");

    // Count histogram with Poisson overlay from an open-loop run.
    let open = OpenLoopConfig {
        arrivals: 20_000,
        horizon_ms: 100_000_000,
        seed: 7,
        labels: LabelMix::single(),
        epoch_ms: DEFAULT_EPOCH_MS,
    };
    let arrivals = simulate_open_loop(&open).expect("valid config");
    let counts = poisson_count_histogram(&requests_per_interval(&arrivals, 10_000.0).unwrap());
    let hist_svg = render_svg(
        PlotKind::Histogram,
        "Requests per 10 s interval: observed vs Poisson",
        &histogram_series(&counts),
    )
    .expect("non-empty series");
    let hist_path = out_dir.join("requests_per_interval.svg");
    std::fs::write(&hist_path, hist_svg).expect("write histogram");

    println!("wrote {}", curve_path.display());
    println!("wrote {}", hist_path.display());
}
